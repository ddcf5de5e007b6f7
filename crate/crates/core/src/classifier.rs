//! Classification semantics over a feature set `X` and a label set `Y`.

use crate::circuit::{Builder, Circuit, Literal, Term, Var, VarTable};
use crate::error::{Error, Result};
use crate::semantics::{Assignment, Enumerator};

/// An assignment over the feature set.
pub type Instance = Assignment;

/// Feature and label variables of a classification task. The variable
/// table may also hold auxiliary variables that belong to neither set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationProblem {
    table: VarTable,
    features: Vec<Var>,
    labels: Vec<Var>,
}

impl ClassificationProblem {
    pub fn new(table: VarTable, features: Vec<Var>, labels: Vec<Var>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::InvalidProblem("empty feature set".into()));
        }
        if labels.is_empty() {
            return Err(Error::InvalidProblem("empty label set".into()));
        }
        let mut seen = vec![false; table.len()];
        for &v in features.iter().chain(&labels) {
            if v.index() >= table.len() {
                return Err(Error::InvalidProblem(format!("undeclared variable {v}")));
            }
            if std::mem::replace(&mut seen[v.index()], true) {
                return Err(Error::InvalidProblem(format!(
                    "`{}` declared twice or as both feature and label",
                    table.name(v)
                )));
            }
        }
        Ok(ClassificationProblem {
            table,
            features,
            labels,
        })
    }

    /// Declares the named features and labels in a fresh table.
    pub fn from_names(features: &[&str], labels: &[&str]) -> Result<Self> {
        let mut table = VarTable::new();
        let mut declare = |names: &[&str]| -> Result<Vec<Var>> {
            names
                .iter()
                .map(|n| match table.lookup(n) {
                    Some(_) => Err(Error::InvalidProblem(format!("`{n}` declared twice"))),
                    None => table.declare(n),
                })
                .collect()
        };
        let features = declare(features)?;
        let labels = declare(labels)?;
        Self::new(table, features, labels)
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn features(&self) -> &[Var] {
        &self.features
    }

    pub fn labels(&self) -> &[Var] {
        &self.labels
    }

    pub fn is_mono_label(&self) -> bool {
        self.labels.len() == 1
    }

    /// The label of a mono-label problem.
    pub fn label(&self) -> Result<Var> {
        match self.labels.as_slice() {
            [y] => Ok(*y),
            _ => Err(Error::NotMonoLabel),
        }
    }

    pub fn var(&self, name: &str) -> Result<Var> {
        self.table.resolve(name)
    }

    /// Declares an auxiliary variable outside `X` and `Y`.
    pub fn declare_aux(&mut self, name: &str) -> Result<Var> {
        if self.table.lookup(name).is_some() {
            return Err(Error::InvalidProblem(format!("`{name}` declared twice")));
        }
        self.table.declare(name)
    }

    /// Declares a fresh auxiliary variable named after `stem`.
    pub fn fresh_aux(&mut self, stem: &str) -> Var {
        self.table.fresh(stem)
    }

    pub fn is_relevant(&self, v: Var) -> bool {
        self.features.contains(&v) || self.labels.contains(&v)
    }

    /// Variables of `phi` outside `X` and `Y`.
    pub fn extra_vars(&self, phi: &Circuit) -> Vec<Var> {
        phi.vars()
            .into_iter()
            .filter(|&v| !self.is_relevant(v))
            .collect()
    }

    pub fn require_relevant(&self, phi: &Circuit) -> Result<()> {
        let extra = self.extra_vars(phi);
        if extra.is_empty() {
            Ok(())
        } else {
            let names: Vec<_> = extra.iter().map(|&v| self.table.name(v)).collect();
            Err(Error::ForeignVariables(names.join(", ")))
        }
    }

    pub fn instance(&self, word: &str) -> Result<Instance> {
        Assignment::from_word(&self.features, word)
    }

    pub fn instance_from_bits(&self, bits: &[bool]) -> Result<Instance> {
        Assignment::new(self.features.clone(), bits.to_vec())
    }

    pub fn instance_from_term(&self, term: &Term) -> Result<Instance> {
        Assignment::from_term(&self.features, term)
    }

    /// All instances in lexicographic word order.
    pub fn instances(&self, en: &Enumerator) -> Result<impl Iterator<Item = Instance> + '_> {
        en.check_cap(self.features.len())?;
        let n = self.features.len();
        Ok((0..1u64 << n).map(move |i| Assignment::from_index(&self.features, i)))
    }

    fn instance_term(&self, x: &Instance) -> Result<Term> {
        let lits = self
            .features
            .iter()
            .map(|&v| {
                x.get(v)
                    .map(|positive| Literal { var: v, positive })
                    .ok_or_else(|| Error::Unassigned(self.table.name(v).to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Term::new(lits)
    }

    /// `phi(x)`: `phi` conditioned on the feature values of `x`.
    pub fn condition_on(&self, phi: &Circuit, x: &Instance) -> Result<Circuit> {
        Ok(phi.condition(&self.instance_term(x)?))
    }
}

/// `true` iff `sigma(x)` has exactly one model over `Y` for every `x`.
pub fn check_xy_property(
    sigma: &Circuit,
    problem: &ClassificationProblem,
    en: &Enumerator,
) -> Result<bool> {
    problem.require_relevant(sigma)?;
    en.check_cap(problem.labels().len())?;
    for x in problem.instances(en)? {
        let sx = problem.condition_on(sigma, &x)?;
        if en.count_models(&sx, problem.labels())? != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A circuit over `X ∪ Y` together with the outcome of its certification.
#[derive(Clone, Debug)]
pub struct Classifier {
    problem: ClassificationProblem,
    sigma: Circuit,
    certified: bool,
}

impl Classifier {
    /// Wraps `sigma`, checking the classification property once.
    pub fn new(problem: ClassificationProblem, sigma: Circuit, en: &Enumerator) -> Result<Self> {
        let certified = check_xy_property(&sigma, &problem, en)?;
        Ok(Classifier {
            problem,
            sigma,
            certified,
        })
    }

    /// The mono-label classifier `sigma_x <=> y`. Certified by construction
    /// since `sigma_x` only mentions features.
    pub fn from_projection(problem: ClassificationProblem, sigma_x: &Circuit) -> Result<Self> {
        let y = problem.label()?;
        if let Some(v) = sigma_x
            .vars()
            .into_iter()
            .find(|v| !problem.features.contains(v))
        {
            return Err(Error::ForeignVariables(problem.table.name(v).to_string()));
        }
        let mut b = Builder::new();
        let a = b.import(sigma_x);
        let na = b.not(a);
        let root = b.decision(y, na, a);
        Ok(Classifier {
            sigma: b.finish(root),
            problem,
            certified: true,
        })
    }

    pub fn problem(&self) -> &ClassificationProblem {
        &self.problem
    }

    pub fn sigma(&self) -> &Circuit {
        &self.sigma
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    fn require_certified(&self) -> Result<()> {
        if self.certified {
            Ok(())
        } else {
            Err(Error::Uncertified)
        }
    }

    /// `sigma(x)`.
    pub fn restrict(&self, x: &Instance) -> Result<Circuit> {
        self.problem.condition_on(&self.sigma, x)
    }
}

/// The unique label assignment `sigma` gives to `x`.
pub fn classify(clf: &Classifier, x: &Instance, en: &Enumerator) -> Result<Assignment> {
    clf.require_certified()?;
    let sx = clf.restrict(x)?;
    let mut models = en.models(&sx, clf.problem.labels())?;
    debug_assert_eq!(models.len(), 1);
    models.pop().ok_or(Error::Uncertified)
}

/// Mono-label classification: `true` for the positive class.
pub fn classify_mono(clf: &Classifier, x: &Instance, en: &Enumerator) -> Result<bool> {
    let y = clf.problem.label()?;
    Ok(classify(clf, x, en)?.get(y).expect("label is assigned"))
}

/// What a mono-label theory says about one instance: `T(x)` is equivalent to
/// exactly one of `y`, `!y`, true, false.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Positive,
    Negative,
    Unconstrained,
    Contradictory,
}

impl Verdict {
    /// `Some(class)` when the theory decides the class of the instance.
    pub fn decided(self) -> Option<bool> {
        match self {
            Verdict::Positive => Some(true),
            Verdict::Negative => Some(false),
            _ => None,
        }
    }
}

pub fn theory_verdict(
    t: &Circuit,
    x: &Instance,
    problem: &ClassificationProblem,
    en: &Enumerator,
) -> Result<Verdict> {
    let y = problem.label()?;
    let tx = problem.condition_on(t, x)?;
    let table = en.truth_table(&tx, &[y])?;
    Ok(match (table[0], table[1]) {
        (false, true) => Verdict::Positive,
        (true, false) => Verdict::Negative,
        (true, true) => Verdict::Unconstrained,
        (false, false) => Verdict::Contradictory,
    })
}

/// The conjunction of label literals entailed by `T(x)`; empty for true.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FactFormula {
    term: Term,
}

impl FactFormula {
    pub fn top() -> Self {
        Self::default()
    }

    pub fn from_term(term: Term) -> Self {
        FactFormula { term }
    }

    pub fn is_top(&self) -> bool {
        self.term.is_empty()
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn to_circuit(&self) -> Circuit {
        Circuit::term(&self.term)
    }
}

pub fn fact_formula(
    t: &Circuit,
    x: &Instance,
    problem: &ClassificationProblem,
    en: &Enumerator,
) -> Result<FactFormula> {
    let labels = problem.labels();
    let tx = problem.condition_on(t, x)?;
    let table = en.truth_table(&tx, labels)?;
    let models: Vec<usize> = (0..table.len()).filter(|&i| table[i]).collect();
    if models.is_empty() {
        return Ok(FactFormula::top());
    }
    let n = labels.len();
    let bit = |m: usize, i: usize| (m >> (n - 1 - i)) & 1 == 1;
    let lits = labels.iter().enumerate().filter_map(|(i, &var)| {
        let first = bit(models[0], i);
        models
            .iter()
            .all(|&m| bit(m, i) == first)
            .then_some(Literal {
                var,
                positive: first,
            })
    });
    Ok(FactFormula {
        term: Term::new(lits)?,
    })
}

/// `sigma(x) |= F(T, x)`.
pub fn is_fact_compliant(
    clf: &Classifier,
    t: &Circuit,
    x: &Instance,
    en: &Enumerator,
) -> Result<bool> {
    clf.require_certified()?;
    let fact = fact_formula(t, x, &clf.problem, en)?;
    en.entails(&clf.restrict(x)?, &fact.to_circuit())
}

/// `sigma_x = sigma(y)`: its models are the positively classified instances.
pub fn extract_sigma_x(clf: &Classifier) -> Result<Circuit> {
    let y = clf.problem.label()?;
    clf.require_certified()?;
    Ok(clf.sigma.condition_lit(Literal::pos(y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build, Expr};

    fn v(name: &str) -> Expr {
        Expr::Var(name.into())
    }

    #[test]
    fn problem_validation() {
        assert!(ClassificationProblem::from_names(&[], &["y"]).is_err());
        assert!(ClassificationProblem::from_names(&["x"], &[]).is_err());
        assert!(ClassificationProblem::from_names(&["x", "x"], &["y"]).is_err());
        assert!(ClassificationProblem::from_names(&["x"], &["x"]).is_err());
        let p = ClassificationProblem::from_names(&["x1", "x2"], &["y1", "y2"]).unwrap();
        assert!(!p.is_mono_label());
        assert_eq!(p.label(), Err(Error::NotMonoLabel));
    }

    #[test]
    fn top_is_not_a_classifier() {
        let p = ClassificationProblem::from_names(&["x"], &["y"]).unwrap();
        let en = Enumerator::default();
        assert!(!check_xy_property(&Circuit::constant(true), &p, &en).unwrap());
        let clf = Classifier::new(p, Circuit::constant(true), &en).unwrap();
        assert!(!clf.is_certified());
        let x = clf.problem().instance("1").unwrap();
        assert_eq!(classify(&clf, &x, &en), Err(Error::Uncertified));
        assert_eq!(extract_sigma_x(&clf), Err(Error::Uncertified));
    }

    #[test]
    fn all_negative_classifier() {
        let p = ClassificationProblem::from_names(&["x"], &["y"]).unwrap();
        let en = Enumerator::default();
        let sigma = build(
            &Expr::Iff(Box::new(Expr::Const(false)), Box::new(v("y"))),
            p.table(),
        )
        .unwrap();
        let clf = Classifier::new(p, sigma, &en).unwrap();
        assert!(clf.is_certified());
        assert!(en
            .equivalent(&extract_sigma_x(&clf).unwrap(), &Circuit::constant(false))
            .unwrap());
    }

    #[test]
    fn projection_rejects_label_variables() {
        let p = ClassificationProblem::from_names(&["x"], &["y"]).unwrap();
        let y = p.label().unwrap();
        assert!(Classifier::from_projection(p, &Circuit::var(y)).is_err());
    }

    #[test]
    fn inconsistent_theory_has_top_facts() {
        let p = ClassificationProblem::from_names(&["x1", "x2"], &["y"]).unwrap();
        let en = Enumerator::default();
        let x1 = p.var("x1").unwrap();
        let t = Circuit::var(x1).conjoin(&Circuit::literal(Literal::neg(x1)));
        let sigma = build(&Expr::Iff(Box::new(v("x2")), Box::new(v("y"))), p.table()).unwrap();
        let clf = Classifier::new(p.clone(), sigma, &en).unwrap();
        for x in p.instances(&en).unwrap() {
            assert!(fact_formula(&t, &x, &p, &en).unwrap().is_top());
            assert_eq!(
                theory_verdict(&t, &x, &p, &en).unwrap(),
                Verdict::Contradictory
            );
            assert!(is_fact_compliant(&clf, &t, &x, &en).unwrap());
        }
    }

    #[test]
    fn foreign_variables_are_reported() {
        let mut p = ClassificationProblem::from_names(&["x"], &["y"]).unwrap();
        let z = p.declare_aux("z").unwrap();
        let en = Enumerator::default();
        assert_eq!(
            check_xy_property(&Circuit::var(z), &p, &en),
            Err(Error::ForeignVariables("z".into()))
        );
    }
}
