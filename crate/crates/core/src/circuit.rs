//! Boolean circuits as immutable, hash-consed DAGs.
//!
//! A [`Circuit`] owns a topologically ordered gate pool: every gate only
//! references gates with a smaller [`GateId`]. Circuits are built through a
//! [`Builder`], which shares syntactically identical gates and, unless
//! disabled, folds constants on the fly. All transformations (conditioning,
//! negation, conjunction, ...) return fresh circuits.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// A propositional variable, identified by its position in a [`VarTable`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn from_index(index: usize) -> Var {
        Var(u32::try_from(index).expect("variable index overflow"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

const KEYWORDS: &[&str] = &[
    "not", "and", "or", "imp", "iff", "dec", "let", "true", "false",
];

/// Returns true if `name` is a legal variable identifier.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&name)
}

/// Name <-> index mapping for the variables of one problem.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    by_name: HashMap<String, Var>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns `name`, returning the existing variable if already declared.
    pub fn declare(&mut self, name: &str) -> Result<Var> {
        if let Some(&v) = self.by_name.get(name) {
            return Ok(v);
        }
        if !is_valid_name(name) {
            return Err(Error::InvalidName(name.to_string()));
        }
        let v = Var::from_index(self.names.len());
        self.names.push(name.to_string());
        self.by_name.insert(name.to_string(), v);
        Ok(v)
    }

    /// Declares a variable whose name does not clash with any existing one.
    pub fn fresh(&mut self, stem: &str) -> Var {
        let mut name = stem.to_string();
        let mut n = 0;
        while self.by_name.contains_key(&name) || !is_valid_name(&name) {
            n += 1;
            name = format!("{stem}_{n}");
        }
        self.declare(&name).expect("fresh name is valid")
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.by_name.get(name).copied()
    }

    pub fn resolve(&self, name: &str) -> Result<Var> {
        self.lookup(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn name(&self, var: Var) -> &str {
        &self.names[var.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.names.len()).map(Var::from_index)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: Var,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: Var) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: Var) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }
}

/// A consistent conjunction of literals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Term {
    literals: BTreeMap<Var, bool>,
}

impl Term {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for lit in literals {
            if let Some(prev) = map.insert(lit.var, lit.positive) {
                if prev != lit.positive {
                    return Err(Error::InconsistentTerm(lit.var.to_string()));
                }
            }
        }
        Ok(Term { literals: map })
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.literals.get(&var).copied()
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.literals
            .iter()
            .map(|(&var, &positive)| Literal { var, positive })
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.literals.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GateId(u32);

impl GateId {
    pub fn from_index(index: usize) -> GateId {
        GateId(u32::try_from(index).expect("gate index overflow"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Const(bool),
    Var(Var),
    Not(GateId),
    And(Vec<GateId>),
    Or(Vec<GateId>),
    /// `Decision { var, low, high }` stands for `(!var & low) | (var & high)`.
    Decision {
        var: Var,
        low: GateId,
        high: GateId,
    },
}

impl Gate {
    pub fn children(&self) -> &[GateId] {
        match self {
            Gate::Const(_) | Gate::Var(_) => &[],
            Gate::Not(c) => std::slice::from_ref(c),
            Gate::And(cs) | Gate::Or(cs) => cs,
            Gate::Decision { .. } => &[],
        }
    }

    fn for_each_child(&self, mut f: impl FnMut(GateId)) {
        match self {
            Gate::Decision { low, high, .. } => {
                f(*low);
                f(*high);
            }
            g => g.children().iter().copied().for_each(f),
        }
    }

    /// Number of outgoing arcs. A decision gate has three: its variable and
    /// both branches.
    pub fn arcs(&self) -> usize {
        match self {
            Gate::Const(_) | Gate::Var(_) => 0,
            Gate::Not(_) => 1,
            Gate::And(cs) | Gate::Or(cs) => cs.len(),
            Gate::Decision { .. } => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    root: GateId,
}

impl Circuit {
    pub fn constant(value: bool) -> Circuit {
        Circuit {
            gates: vec![Gate::Const(value)],
            root: GateId(0),
        }
    }

    pub fn var(var: Var) -> Circuit {
        Circuit {
            gates: vec![Gate::Var(var)],
            root: GateId(0),
        }
    }

    pub fn literal(lit: Literal) -> Circuit {
        let mut b = Builder::new();
        let r = b.literal(lit);
        b.finish(r)
    }

    /// The conjunction of the literals of `term` (`true` when empty).
    pub fn term(term: &Term) -> Circuit {
        let mut b = Builder::new();
        let r = b.term(term);
        b.finish(r)
    }

    pub fn root(&self) -> GateId {
        self.root
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id.index()]
    }

    /// Gates in topological order (children first); the root is last.
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Number of arcs in the circuit.
    pub fn size(&self) -> usize {
        self.gates.iter().map(Gate::arcs).sum()
    }

    pub fn as_const(&self) -> Option<bool> {
        match self.gate(self.root) {
            Gate::Const(b) => Some(*b),
            _ => None,
        }
    }

    /// Variables occurring in the circuit.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.gates
            .iter()
            .filter_map(|g| match g {
                Gate::Var(v) => Some(*v),
                Gate::Decision { var, .. } => Some(*var),
                _ => None,
            })
            .collect()
    }

    /// Number of parents of each gate.
    pub fn fanout(&self) -> Vec<usize> {
        let mut out = vec![0; self.gates.len()];
        for g in &self.gates {
            g.for_each_child(|c| out[c.index()] += 1);
        }
        out
    }

    /// Evaluates the circuit, looking variable values up through `value`.
    pub fn eval_with(&self, mut value: impl FnMut(Var) -> Option<bool>) -> Result<bool> {
        let mut buf: Vec<bool> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let b = match g {
                Gate::Const(b) => *b,
                Gate::Var(v) => value(*v).ok_or_else(|| Error::Unassigned(v.to_string()))?,
                Gate::Not(c) => !buf[c.index()],
                Gate::And(cs) => cs.iter().all(|c| buf[c.index()]),
                Gate::Or(cs) => cs.iter().any(|c| buf[c.index()]),
                Gate::Decision { var, low, high } => {
                    let x = value(*var).ok_or_else(|| Error::Unassigned(var.to_string()))?;
                    if x {
                        buf[high.index()]
                    } else {
                        buf[low.index()]
                    }
                }
            };
            buf.push(b);
        }
        Ok(buf[self.root.index()])
    }

    /// Evaluation against a dense value vector indexed by variable index,
    /// reusing `buf` as scratch space. Missing variables read as false.
    pub(crate) fn eval_dense(&self, values: &[bool], buf: &mut Vec<bool>) -> bool {
        buf.clear();
        let get = |v: &Var| values.get(v.index()).copied().unwrap_or(false);
        for g in &self.gates {
            let b = match g {
                Gate::Const(b) => *b,
                Gate::Var(v) => get(v),
                Gate::Not(c) => !buf[c.index()],
                Gate::And(cs) => cs.iter().all(|c| buf[c.index()]),
                Gate::Or(cs) => cs.iter().any(|c| buf[c.index()]),
                Gate::Decision { var, low, high } => {
                    if get(var) {
                        buf[high.index()]
                    } else {
                        buf[low.index()]
                    }
                }
            };
            buf.push(b);
        }
        buf[self.root.index()]
    }

    /// Replaces the variables of `gamma` by constants and propagates them.
    pub fn condition(&self, gamma: &Term) -> Circuit {
        if gamma.is_empty() {
            return self.clone();
        }
        let mut b = Builder::new();
        let r = b.import_with(self, |v| gamma.value(v));
        b.finish(r)
    }

    /// Conditions on a single literal.
    pub fn condition_lit(&self, lit: Literal) -> Circuit {
        let mut b = Builder::new();
        let r = b.import_with(self, |v| (v == lit.var).then_some(lit.positive));
        b.finish(r)
    }

    pub fn negate(&self) -> Circuit {
        let mut b = Builder::new();
        let r = b.import(self);
        let n = b.not(r);
        b.finish(n)
    }

    pub fn conjoin(&self, other: &Circuit) -> Circuit {
        let mut b = Builder::new();
        let l = b.import(self);
        let r = b.import(other);
        let root = b.and(vec![l, r]);
        b.finish(root)
    }

    pub fn disjoin(&self, other: &Circuit) -> Circuit {
        let mut b = Builder::new();
        let l = b.import(self);
        let r = b.import(other);
        let root = b.or(vec![l, r]);
        b.finish(root)
    }

    /// Rewrites every decision gate into its and/or/not expansion.
    pub fn desugar(&self) -> Circuit {
        let mut b = Builder::raw();
        let mut map: Vec<GateId> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let id = match g {
                Gate::Decision { var, low, high } => {
                    let x = b.var(*var);
                    let nx = b.not(x);
                    let l = b.and(vec![nx, map[low.index()]]);
                    let h = b.and(vec![x, map[high.index()]]);
                    b.or(vec![l, h])
                }
                g => b.rebuild(g, &map),
            };
            map.push(id);
        }
        b.finish(map[self.root.index()])
    }
}

/// Incremental circuit construction over a shared gate pool.
#[derive(Debug)]
pub struct Builder {
    gates: Vec<Gate>,
    memo: HashMap<Gate, GateId>,
    share: bool,
    fold: bool,
}

impl Default for Builder {
    fn default() -> Self {
        Self::new()
    }
}

impl Builder {
    /// Sharing and constant folding enabled.
    pub fn new() -> Self {
        Self::with_options(true, true)
    }

    /// Sharing enabled, no folding: the gate structure is kept as written.
    pub fn raw() -> Self {
        Self::with_options(true, false)
    }

    pub fn with_options(share: bool, fold: bool) -> Self {
        Builder {
            gates: Vec::new(),
            memo: HashMap::new(),
            share,
            fold,
        }
    }

    fn push(&mut self, gate: Gate) -> GateId {
        if self.share {
            if let Some(&id) = self.memo.get(&gate) {
                return id;
            }
        }
        let id = GateId(u32::try_from(self.gates.len()).expect("gate pool overflow"));
        if self.share {
            self.memo.insert(gate.clone(), id);
        }
        self.gates.push(gate);
        id
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id.index()]
    }

    fn const_of(&self, id: GateId) -> Option<bool> {
        match self.gates[id.index()] {
            Gate::Const(b) => Some(b),
            _ => None,
        }
    }

    pub fn constant(&mut self, value: bool) -> GateId {
        self.push(Gate::Const(value))
    }

    pub fn var(&mut self, var: Var) -> GateId {
        self.push(Gate::Var(var))
    }

    pub fn literal(&mut self, lit: Literal) -> GateId {
        let v = self.var(lit.var);
        if lit.positive {
            v
        } else {
            self.not(v)
        }
    }

    pub fn term(&mut self, term: &Term) -> GateId {
        let lits: Vec<GateId> = term.literals().map(|l| self.literal(l)).collect();
        self.and(lits)
    }

    pub fn not(&mut self, child: GateId) -> GateId {
        if self.fold {
            match self.gates[child.index()] {
                Gate::Const(b) => return self.constant(!b),
                Gate::Not(inner) => return inner,
                _ => {}
            }
        }
        self.push(Gate::Not(child))
    }

    fn nary(&mut self, children: Vec<GateId>, is_and: bool) -> GateId {
        // `and` absorbs on false and drops true; `or` the other way round.
        let absorbing = !is_and;
        let mut kept = Vec::with_capacity(children.len());
        for c in children {
            if self.fold {
                match self.const_of(c) {
                    Some(b) if b == absorbing => return self.constant(absorbing),
                    Some(_) => continue,
                    None => {}
                }
            }
            kept.push(c);
        }
        match kept.len() {
            0 => self.constant(!absorbing),
            1 => kept[0],
            _ if is_and => self.push(Gate::And(kept)),
            _ => self.push(Gate::Or(kept)),
        }
    }

    /// N-ary conjunction; the empty conjunction is `true` and a single child
    /// is returned as is.
    pub fn and(&mut self, children: Vec<GateId>) -> GateId {
        self.nary(children, true)
    }

    /// N-ary disjunction; the empty disjunction is `false`.
    pub fn or(&mut self, children: Vec<GateId>) -> GateId {
        self.nary(children, false)
    }

    pub fn decision(&mut self, var: Var, low: GateId, high: GateId) -> GateId {
        if self.fold {
            if low == high {
                return low;
            }
            match (self.const_of(low), self.const_of(high)) {
                (Some(false), Some(true)) => return self.var(var),
                (Some(true), Some(false)) => {
                    let v = self.var(var);
                    return self.not(v);
                }
                _ => {}
            }
        }
        self.push(Gate::Decision { var, low, high })
    }

    pub fn implies(&mut self, a: GateId, b: GateId) -> GateId {
        let na = self.not(a);
        self.or(vec![na, b])
    }

    /// Equivalence. When one side is a variable this is a single decision
    /// gate over it.
    pub fn iff(&mut self, a: GateId, b: GateId) -> GateId {
        if let Gate::Var(v) = self.gates[b.index()] {
            let na = self.not(a);
            return self.decision(v, na, a);
        }
        if let Gate::Var(v) = self.gates[a.index()] {
            let nb = self.not(b);
            return self.decision(v, nb, b);
        }
        let both = self.and(vec![a, b]);
        let na = self.not(a);
        let nb = self.not(b);
        let neither = self.and(vec![na, nb]);
        self.or(vec![both, neither])
    }

    fn rebuild(&mut self, gate: &Gate, map: &[GateId]) -> GateId {
        let m = |c: &GateId| map[c.index()];
        match gate {
            Gate::Const(b) => self.constant(*b),
            Gate::Var(v) => self.var(*v),
            Gate::Not(c) => self.not(m(c)),
            Gate::And(cs) => self.and(cs.iter().map(m).collect()),
            Gate::Or(cs) => self.or(cs.iter().map(m).collect()),
            Gate::Decision { var, low, high } => self.decision(*var, m(low), m(high)),
        }
    }

    /// Copies `circuit` into this pool.
    pub fn import(&mut self, circuit: &Circuit) -> GateId {
        self.import_with(circuit, |_| None)
    }

    /// Copies `circuit` into this pool, replacing every variable for which
    /// `value` returns `Some` by the corresponding constant.
    pub fn import_with(
        &mut self,
        circuit: &Circuit,
        mut value: impl FnMut(Var) -> Option<bool>,
    ) -> GateId {
        let mut map: Vec<GateId> = Vec::with_capacity(circuit.gates.len());
        for g in &circuit.gates {
            let id = match g {
                Gate::Var(v) => match value(*v) {
                    Some(b) => self.constant(b),
                    None => self.var(*v),
                },
                Gate::Decision { var, low, high } => match value(*var) {
                    Some(true) => map[high.index()],
                    Some(false) => map[low.index()],
                    None => self.decision(*var, map[low.index()], map[high.index()]),
                },
                g => self.rebuild(g, &map),
            };
            map.push(id);
        }
        map[circuit.root.index()]
    }

    /// Snapshot of the sub-circuit reachable from `root`.
    pub fn extract(&self, root: GateId) -> Circuit {
        let mut reachable = vec![false; root.index() + 1];
        reachable[root.index()] = true;
        for i in (0..=root.index()).rev() {
            if reachable[i] {
                self.gates[i].for_each_child(|c| reachable[c.index()] = true);
            }
        }
        let mut remap = vec![GateId(u32::MAX); root.index() + 1];
        let mut gates = Vec::new();
        for (i, g) in self.gates[..=root.index()].iter().enumerate() {
            if !reachable[i] {
                continue;
            }
            let m = |c: &GateId| remap[c.index()];
            let ng = match g {
                Gate::Const(b) => Gate::Const(*b),
                Gate::Var(v) => Gate::Var(*v),
                Gate::Not(c) => Gate::Not(m(c)),
                Gate::And(cs) => Gate::And(cs.iter().map(m).collect()),
                Gate::Or(cs) => Gate::Or(cs.iter().map(m).collect()),
                Gate::Decision { var, low, high } => Gate::Decision {
                    var: *var,
                    low: m(low),
                    high: m(high),
                },
            };
            remap[i] = GateId(gates.len() as u32);
            gates.push(ng);
        }
        Circuit {
            root: remap[root.index()],
            gates,
        }
    }

    pub fn finish(self, root: GateId) -> Circuit {
        self.extract(root)
    }
}

/// Abstract syntax accepted by [`build`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(bool),
    Var(String),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Imp(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Dec(String, Box<Expr>, Box<Expr>),
    /// Sequential bindings: each right-hand side may use earlier names.
    Let(Vec<(String, Expr)>, Box<Expr>),
}

/// Builds a circuit with hash-consing, resolving names against `table`.
pub fn build(expr: &Expr, table: &VarTable) -> Result<Circuit> {
    build_with(expr, table, true)
}

/// Like [`build`], optionally without structural sharing. Let-bound
/// subexpressions are always shared.
pub fn build_with(expr: &Expr, table: &VarTable, share: bool) -> Result<Circuit> {
    let mut b = Builder::with_options(share, true);
    let mut scope = Vec::new();
    let root = lower(expr, table, &mut b, &mut scope)?;
    Ok(b.finish(root))
}

fn lower(
    expr: &Expr,
    table: &VarTable,
    b: &mut Builder,
    scope: &mut Vec<(String, GateId)>,
) -> Result<GateId> {
    Ok(match expr {
        Expr::Const(v) => b.constant(*v),
        Expr::Var(name) => match scope.iter().rev().find(|(n, _)| n == name) {
            Some(&(_, id)) => id,
            None => {
                let v = table.resolve(name)?;
                b.var(v)
            }
        },
        Expr::Not(e) => {
            let c = lower(e, table, b, scope)?;
            b.not(c)
        }
        Expr::And(es) | Expr::Or(es) => {
            let is_and = matches!(expr, Expr::And(_));
            if es.is_empty() {
                return Err(Error::EmptyGate(if is_and { "and" } else { "or" }));
            }
            let cs = es
                .iter()
                .map(|e| lower(e, table, b, scope))
                .collect::<Result<Vec<_>>>()?;
            if is_and {
                b.and(cs)
            } else {
                b.or(cs)
            }
        }
        Expr::Imp(l, r) => {
            let l = lower(l, table, b, scope)?;
            let r = lower(r, table, b, scope)?;
            b.implies(l, r)
        }
        Expr::Iff(l, r) => {
            let l = lower(l, table, b, scope)?;
            let r = lower(r, table, b, scope)?;
            b.iff(l, r)
        }
        Expr::Dec(name, low, high) => {
            let v = table.resolve(name)?;
            let l = lower(low, table, b, scope)?;
            let h = lower(high, table, b, scope)?;
            b.decision(v, l, h)
        }
        Expr::Let(bindings, body) => {
            let mark = scope.len();
            for (name, e) in bindings {
                if scope[mark..].iter().any(|(n, _)| n == name) || table.lookup(name).is_some() {
                    return Err(Error::DuplicateBinding(name.clone()));
                }
                let id = lower(e, table, b, scope)?;
                scope.push((name.clone(), id));
            }
            let r = lower(body, table, b, scope);
            scope.truncate(mark);
            r?
        }
    })
}
