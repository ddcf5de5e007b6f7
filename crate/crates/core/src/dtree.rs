//! Decision trees and tree-level rectification.
//!
//! Trees are immutable; subtrees are reference counted so that the copies
//! made by conjunction and disjunction share structure.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::circuit::{Builder, Circuit, GateId, Literal, Var};
use crate::classifier::{ClassificationProblem, Classifier, Instance};
use crate::error::{Error, Result};
use crate::semantics::{Assignment, Enumerator};

/// A binary decision tree with constant leaves. `low` is taken when the
/// variable is false, `high` when it is true.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DecisionTree {
    Leaf(bool),
    Node {
        var: Var,
        low: Arc<DecisionTree>,
        high: Arc<DecisionTree>,
    },
}

use DecisionTree::{Leaf, Node};

impl DecisionTree {
    pub fn node(var: Var, low: DecisionTree, high: DecisionTree) -> Self {
        Node {
            var,
            low: Arc::new(low),
            high: Arc::new(high),
        }
    }

    /// Number of decision nodes.
    pub fn node_count(&self) -> usize {
        match self {
            Leaf(_) => 0,
            Node { low, high, .. } => 1 + low.node_count() + high.node_count(),
        }
    }

    /// Decision nodes plus leaves.
    pub fn size(&self) -> usize {
        match self {
            Leaf(_) => 1,
            Node { low, high, .. } => 1 + low.size() + high.size(),
        }
    }

    pub fn leaf_count(&self, value: bool) -> usize {
        match self {
            Leaf(b) => usize::from(*b == value),
            Node { low, high, .. } => low.leaf_count(value) + high.leaf_count(value),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Leaf(_) => 0,
            Node { low, high, .. } => 1 + low.depth().max(high.depth()),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        if let Node { var, low, high } = self {
            out.insert(*var);
            low.collect_vars(out);
            high.collect_vars(out);
        }
    }

    pub fn eval(&self, omega: &Assignment) -> Result<bool> {
        let mut t = self;
        loop {
            match t {
                Leaf(b) => return Ok(*b),
                Node { var, low, high } => {
                    let x = omega
                        .get(*var)
                        .ok_or_else(|| Error::Unassigned(var.to_string()))?;
                    t = if x { high } else { low };
                }
            }
        }
    }

    /// Replaces every node over `lit.var` by the child selected by `lit`.
    pub fn condition(&self, lit: Literal) -> DecisionTree {
        match self {
            Leaf(b) => Leaf(*b),
            Node { var, low, high } if *var == lit.var => {
                if lit.positive {
                    high.condition(lit)
                } else {
                    low.condition(lit)
                }
            }
            Node { var, low, high } => {
                DecisionTree::node(*var, low.condition(lit), high.condition(lit))
            }
        }
    }

    /// Swaps 0-leaves and 1-leaves.
    pub fn negate(&self) -> DecisionTree {
        match self {
            Leaf(b) => Leaf(!b),
            Node { var, low, high } => DecisionTree::node(*var, low.negate(), high.negate()),
        }
    }

    fn graft(&self, target: bool, with: &DecisionTree) -> DecisionTree {
        match self {
            Leaf(b) if *b == target => with.clone(),
            Leaf(b) => Leaf(*b),
            Node { var, low, high } => {
                DecisionTree::node(*var, low.graft(target, with), high.graft(target, with))
            }
        }
    }

    /// Conjunction: every 1-leaf of `self` becomes a copy of `other`.
    /// The result is generally not simplified.
    pub fn conjoin(&self, other: &DecisionTree) -> DecisionTree {
        self.graft(true, other)
    }

    /// Disjunction: every 0-leaf of `self` becomes a copy of `other`.
    pub fn disjoin(&self, other: &DecisionTree) -> DecisionTree {
        self.graft(false, other)
    }

    /// Removes nodes whose variable is already decided on the path from the
    /// root, then merges nodes whose simplified children are identical.
    ///
    /// Children are simplified before the identical-children test, so a
    /// single traversal reaches the normal form.
    pub fn simplify(&self) -> DecisionTree {
        let width = self.vars().iter().next_back().map_or(0, |v| v.index() + 1);
        let mut path = vec![None; width];
        self.simplify_under(&mut path)
    }

    fn simplify_under(&self, path: &mut [Option<bool>]) -> DecisionTree {
        match self {
            Leaf(b) => Leaf(*b),
            Node { var, low, high } => match path[var.index()] {
                Some(true) => high.simplify_under(path),
                Some(false) => low.simplify_under(path),
                None => {
                    path[var.index()] = Some(false);
                    let l = low.simplify_under(path);
                    path[var.index()] = Some(true);
                    let h = high.simplify_under(path);
                    path[var.index()] = None;
                    if l == h {
                        l
                    } else {
                        DecisionTree::node(*var, l, h)
                    }
                }
            },
        }
    }

    /// No variable occurs twice on any root-to-leaf path.
    pub fn is_read_once(&self) -> bool {
        fn go(t: &DecisionTree, path: &mut Vec<Var>) -> bool {
            match t {
                Leaf(_) => true,
                Node { var, low, high } => {
                    if path.contains(var) {
                        return false;
                    }
                    path.push(*var);
                    let ok = go(low, path) && go(high, path);
                    path.pop();
                    ok
                }
            }
        }
        go(self, &mut Vec::new())
    }

    pub fn has_identical_children(&self) -> bool {
        match self {
            Leaf(_) => false,
            Node { low, high, .. } => {
                low == high || low.has_identical_children() || high.has_identical_children()
            }
        }
    }

    pub fn is_simplified(&self) -> bool {
        self.is_read_once() && !self.has_identical_children()
    }

    /// Turns a tree over `X` into a classification tree over `X ∪ {y}`:
    /// each 1-leaf becomes `(y 0 1)` and each 0-leaf `(y 1 0)`.
    pub fn attach_label(&self, y: Var) -> DecisionTree {
        match self {
            Leaf(b) => DecisionTree::node(y, Leaf(!b), Leaf(*b)),
            Node { var, low, high } => {
                DecisionTree::node(*var, low.attach_label(y), high.attach_label(y))
            }
        }
    }

    /// A circuit of decision gates with identical subtrees shared.
    pub fn to_circuit(&self) -> Circuit {
        fn go(t: &DecisionTree, b: &mut Builder) -> GateId {
            match t {
                Leaf(v) => b.constant(*v),
                Node { var, low, high } => {
                    let l = go(low, b);
                    let h = go(high, b);
                    b.decision(*var, l, h)
                }
            }
        }
        let mut b = Builder::raw();
        let root = go(self, &mut b);
        b.finish(root)
    }

    /// Shannon expansion of `phi` along `order`; the result is simplified.
    pub fn from_circuit(phi: &Circuit, order: &[Var], en: &Enumerator) -> Result<DecisionTree> {
        fn expand(table: &[bool], order: &[Var]) -> DecisionTree {
            if table.len() == 1 {
                return Leaf(table[0]);
            }
            let (lo, hi) = table.split_at(table.len() / 2);
            let low = expand(lo, &order[1..]);
            let high = expand(hi, &order[1..]);
            if low == high {
                low
            } else {
                DecisionTree::node(order[0], low, high)
            }
        }
        let table = en.truth_table(phi, order)?;
        Ok(expand(&table, order))
    }
}

/// Every stage of the tree-level rectification pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DtRectification {
    /// `Σ(y)`, simplified.
    pub sigma_x: DecisionTree,
    /// `T(y) ∧ ¬T(¬y)`, simplified.
    pub t_pos: DecisionTree,
    /// `T(¬y) ∧ ¬T(y)`, simplified.
    pub t_neg: DecisionTree,
    /// `Σ_X ∧ ¬t_neg`, simplified.
    pub keep: DecisionTree,
    /// `keep ∨ t_pos`, simplified: the rectified tree over `X`.
    pub sigma_x_t: DecisionTree,
    /// `sigma_x_t` with the label re-attached.
    pub rectified: DecisionTree,
}

/// Runs the pipeline from a tree `sigma_x` over `X` and a theory tree over
/// `X ∪ {y}`, simplifying after every combination.
pub fn rectify_projection(sigma_x: &DecisionTree, t_dt: &DecisionTree, y: Var) -> DtRectification {
    let sigma_x = sigma_x.simplify();
    let t_y = t_dt.condition(Literal::pos(y)).simplify();
    let t_not_y = t_dt.condition(Literal::neg(y)).simplify();
    let t_pos = t_y.conjoin(&t_not_y.negate()).simplify();
    let t_neg = t_not_y.conjoin(&t_y.negate()).simplify();
    let keep = sigma_x.conjoin(&t_neg.negate()).simplify();
    let sigma_x_t = keep.disjoin(&t_pos).simplify();
    let rectified = sigma_x_t.attach_label(y);
    DtRectification {
        sigma_x,
        t_pos,
        t_neg,
        keep,
        sigma_x_t,
        rectified,
    }
}

fn require_tree_vars(t: &DecisionTree, problem: &ClassificationProblem) -> Result<()> {
    let foreign: Vec<_> = t
        .vars()
        .into_iter()
        .filter(|&v| !problem.is_relevant(v))
        .map(|v| problem.table().name(v).to_string())
        .collect();
    if foreign.is_empty() {
        Ok(())
    } else {
        Err(Error::ForeignVariables(foreign.join(", ")))
    }
}

/// Rectifies a classification tree `sigma_dt` by a theory tree `t_dt`, both
/// over `X ∪ {y}`. `sigma_dt` is certified by brute force first.
pub fn dt_rectify(
    sigma_dt: &DecisionTree,
    t_dt: &DecisionTree,
    problem: &ClassificationProblem,
    en: &Enumerator,
) -> Result<DtRectification> {
    let y = problem.label()?;
    require_tree_vars(t_dt, problem)?;
    let clf = Classifier::new(problem.clone(), sigma_dt.to_circuit(), en)?;
    if !clf.is_certified() {
        return Err(Error::Uncertified);
    }
    let sigma_x = sigma_dt.condition(Literal::pos(y));
    Ok(rectify_projection(&sigma_x, t_dt, y))
}

/// Trees over `X` whose leaves vote for the positive class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomForest {
    trees: Vec<DecisionTree>,
}

impl RandomForest {
    pub fn new(trees: Vec<DecisionTree>) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::InvalidProblem("empty forest".into()));
        }
        Ok(RandomForest { trees })
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    /// Strict majority of positive votes; ties are negative.
    pub fn vote(&self, x: &Instance) -> Result<bool> {
        let mut positive = 0;
        for t in &self.trees {
            if t.eval(x)? {
                positive += 1;
            }
        }
        Ok(2 * positive > self.trees.len())
    }
}

/// Rectifies each tree of the forest independently.
pub fn rf_rectify(
    forest: &RandomForest,
    t_dt: &DecisionTree,
    problem: &ClassificationProblem,
) -> Result<RandomForest> {
    let y = problem.label()?;
    require_tree_vars(t_dt, problem)?;
    let trees = forest
        .trees
        .iter()
        .map(|tree| {
            if tree.vars().contains(&y) {
                return Err(Error::ForeignVariables(problem.table().name(y).to_string()));
            }
            require_tree_vars(tree, problem)?;
            Ok(rectify_projection(tree, t_dt, y).sigma_x_t)
        })
        .collect::<Result<Vec<_>>>()?;
    RandomForest::new(trees)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(n: usize) -> Vec<Var> {
        (0..n).map(Var::from_index).collect()
    }

    fn n(var: Var, low: DecisionTree, high: DecisionTree) -> DecisionTree {
        DecisionTree::node(var, low, high)
    }

    #[test]
    fn leaves_are_fixed_points() {
        let v = vars(1);
        assert_eq!(Leaf(true).condition(Literal::pos(v[0])), Leaf(true));
        assert_eq!(Leaf(true).negate(), Leaf(false));
        assert_eq!(Leaf(false).simplify(), Leaf(false));
    }

    #[test]
    fn identical_children_collapse() {
        let v = vars(1);
        assert_eq!(n(v[0], Leaf(false), Leaf(false)).simplify(), Leaf(false));
    }

    #[test]
    fn repeated_tests_are_removed() {
        let v = vars(2);
        let t = n(
            v[0],
            n(v[0], Leaf(true), Leaf(false)),
            n(v[1], Leaf(false), Leaf(true)),
        );
        let s = t.simplify();
        assert_eq!(s, n(v[0], Leaf(true), n(v[1], Leaf(false), Leaf(true))));
        assert!(s.is_simplified());
        assert!(!t.is_read_once());
    }

    #[test]
    fn double_negation_is_identity() {
        let v = vars(2);
        let t = n(v[0], Leaf(true), n(v[1], Leaf(false), Leaf(true)));
        assert_eq!(t.negate().negate(), t);
    }

    #[test]
    fn conjoin_with_true_is_identity() {
        let v = vars(2);
        let t = n(v[0], Leaf(true), n(v[1], Leaf(false), Leaf(true)));
        assert_eq!(t.conjoin(&Leaf(true)), t);
        assert_eq!(t.disjoin(&Leaf(false)), t);
        assert_eq!(Leaf(false).conjoin(&t), Leaf(false));
    }

    #[test]
    fn label_attachment() {
        let v = vars(2);
        let t = n(v[0], Leaf(false), Leaf(true));
        let y = v[1];
        assert_eq!(
            t.attach_label(y),
            n(
                v[0],
                n(y, Leaf(true), Leaf(false)),
                n(y, Leaf(false), Leaf(true))
            )
        );
    }

    #[test]
    fn leaf_to_circuit() {
        assert_eq!(Leaf(true).to_circuit(), Circuit::constant(true));
    }

    #[test]
    fn forest_vote_breaks_ties_negative() {
        let v = vars(1);
        let f = RandomForest::new(vec![Leaf(true), n(v[0], Leaf(false), Leaf(true))]).unwrap();
        let x0 = Assignment::from_word(&v, "0").unwrap();
        let x1 = Assignment::from_word(&v, "1").unwrap();
        assert!(!f.vote(&x0).unwrap());
        assert!(f.vote(&x1).unwrap());
        assert!(RandomForest::new(vec![]).is_err());
    }
}
