//! Brute-force oracles for rectification and the postulate battery.
//!
//! Nothing in here goes through [`crate::rectify`]'s construction: the
//! oracles decide every instance separately from the definitions and emit
//! the exponential-size disjunction of canonical terms.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Builder, Circuit, Gate, GateId, Var};
use crate::classifier::{
    classify, fact_formula, is_fact_compliant, theory_verdict, ClassificationProblem, Classifier,
};
use crate::error::{Error, Result};
use crate::rectify::{preprocess_project, rectify, RectificationResult};
use crate::semantics::{Assignment, Enumerator};

fn disjunction_of_terms<'a>(terms: impl IntoIterator<Item = &'a Assignment>) -> Circuit {
    let mut b = Builder::new();
    let disjuncts = terms.into_iter().map(|a| b.term(&a.to_term())).collect();
    let root = b.or(disjuncts);
    b.finish(root)
}

/// The unique mono-label rectification, decided instance by instance: the
/// class of `x` flips exactly when `T(x)` is `y` or `!y` and disagrees with
/// `Σ(x)`. Returns the disjunction of the positive instances over `X`.
pub fn oracle_rectify(clf: &Classifier, t: &Circuit, en: &Enumerator) -> Result<Circuit> {
    let problem = clf.problem();
    let y = problem.label()?;
    let mut positive = Vec::new();
    for x in problem.instances(en)? {
        let class = classify(clf, &x, en)?.get(y).expect("label assigned");
        let class = match theory_verdict(t, &x, problem, en)?.decided() {
            Some(forced) => forced,
            None => class,
        };
        if class {
            positive.push(x);
        }
    }
    Ok(disjunction_of_terms(&positive))
}

/// Dalal revision over `labels`: the models of `alpha` at minimal Hamming
/// distance from the models of `phi`.
pub fn dalal_revise(
    phi: &Circuit,
    alpha: &Circuit,
    labels: &[Var],
    en: &Enumerator,
) -> Result<Circuit> {
    let phi_models = en.truth_table(phi, labels)?;
    let alpha_models = en.truth_table(alpha, labels)?;
    let phi_idx: Vec<usize> = (0..phi_models.len()).filter(|&i| phi_models[i]).collect();
    let alpha_idx: Vec<usize> = (0..alpha_models.len())
        .filter(|&i| alpha_models[i])
        .collect();
    if alpha_idx.is_empty() || phi_idx.is_empty() {
        return Ok(alpha.clone());
    }
    let distance = |a: usize| {
        phi_idx
            .iter()
            .map(|&p| (p ^ a).count_ones())
            .min()
            .expect("phi is consistent")
    };
    let best = alpha_idx
        .iter()
        .map(|&a| distance(a))
        .min()
        .expect("alpha is consistent");
    let kept: Vec<Assignment> = alpha_idx
        .into_iter()
        .filter(|&a| distance(a) == best)
        .map(|a| Assignment::from_index(labels, a as u64))
        .collect();
    Ok(disjunction_of_terms(&kept))
}

/// Dalal-based rectification over `X ∪ Y`: the disjunction over all `x` of
/// `x ∧ (Σ(x) ∘ F(T, x))`. Works for several labels.
pub fn oracle_star_d(clf: &Classifier, t: &Circuit, en: &Enumerator) -> Result<Circuit> {
    let problem = clf.problem();
    en.check_cap(problem.features().len() + problem.labels().len())?;
    let mut b = Builder::new();
    let mut disjuncts = Vec::new();
    for x in problem.instances(en)? {
        let fact = fact_formula(t, &x, problem, en)?;
        let revised = dalal_revise(&clf.restrict(&x)?, &fact.to_circuit(), problem.labels(), en)?;
        let term = b.term(&x.to_term());
        let r = b.import(&revised);
        disjuncts.push(b.and(vec![term, r]));
    }
    let root = b.or(disjuncts);
    Ok(b.finish(root))
}

/// Which of the three rectifications disagree on `(clf, t)`: the
/// construction, [`oracle_rectify`] and [`oracle_star_d`]. Empty when all
/// three are equivalent.
pub fn cross_check(clf: &Classifier, t: &Circuit, en: &Enumerator) -> Result<Vec<&'static str>> {
    let y = clf.problem().label()?;
    let built = rectify(clf, t)?;
    let by_instance = oracle_rectify(clf, t, en)?;
    let star = oracle_star_d(clf, t, en)?;
    let star_x = star.condition_lit(crate::circuit::Literal::pos(y));
    let mut out = Vec::new();
    if !en.equivalent(&built.sigma_x_t, &by_instance)? {
        out.push("construction/oracle_rectify");
    }
    if !en.equivalent(&built.sigma_x_t, &star_x)? {
        out.push("construction/oracle_star_d");
    }
    if !en.equivalent(&by_instance, &star_x)? {
        out.push("oracle_rectify/oracle_star_d");
    }
    if !en.equivalent(built.rectified.sigma(), &star)? {
        out.push("rectified/oracle_star_d");
    }
    Ok(out)
}

/// A random circuit equivalent to `phi`: children of n-ary gates are
/// shuffled, double negations inserted, decision gates sometimes expanded.
pub fn rewrite_equivalent(phi: &Circuit, rng: &mut impl Rng) -> Circuit {
    let mut b = Builder::raw();
    let mut map: Vec<GateId> = Vec::with_capacity(phi.gate_count());
    for g in phi.gates() {
        let m = |c: &GateId| map[c.index()];
        let id = match g {
            Gate::Const(v) => b.constant(*v),
            Gate::Var(v) => b.var(*v),
            Gate::Not(c) => b.not(m(c)),
            Gate::And(cs) | Gate::Or(cs) => {
                let mut cs: Vec<GateId> = cs.iter().map(m).collect();
                cs.shuffle(rng);
                if matches!(g, Gate::And(_)) {
                    b.and(cs)
                } else {
                    b.or(cs)
                }
            }
            Gate::Decision { var, low, high } => {
                if rng.gen_bool(0.5) {
                    let x = b.var(*var);
                    let nx = b.not(x);
                    let l = b.and(vec![nx, m(low)]);
                    let h = b.and(vec![m(high), x]);
                    b.or(vec![h, l])
                } else {
                    b.decision(*var, m(low), m(high))
                }
            }
        };
        let id = if rng.gen_bool(0.3) {
            let n = b.not(id);
            b.not(n)
        } else {
            id
        };
        map.push(id);
    }
    b.finish(map[phi.root().index()])
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Postulate {
    Re1,
    Re2,
    Re3,
    Re4,
    Re5,
    Re6,
}

impl Postulate {
    pub const ALL: [Postulate; 6] = [
        Postulate::Re1,
        Postulate::Re2,
        Postulate::Re3,
        Postulate::Re4,
        Postulate::Re5,
        Postulate::Re6,
    ];
}

impl fmt::Display for Postulate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = *self as usize + 1;
        write!(f, "RE{n}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Word of an instance on which the postulate fails.
    Instance(String),
    /// Inputs whose rectification is not equivalent to the checked result.
    Inputs { sigma: Circuit, theory: Circuit },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// Witnesses sorted by instance word.
    Fail(Vec<Witness>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub postulate: Postulate,
    /// Instances or circuit pairs examined; zero when vacuous.
    pub checked: usize,
    pub status: Status,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostulateReport {
    pub outcomes: Vec<Outcome>,
}

impl PostulateReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(Outcome::passed)
    }

    pub fn outcome(&self, p: Postulate) -> &Outcome {
        self.outcomes
            .iter()
            .find(|o| o.postulate == p)
            .expect("every postulate is reported")
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Equivalent rewrites of `(Σ, T)` tried for irrelevance of syntax.
    pub rewrites: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            rewrites: 5,
            seed: 0,
        }
    }
}

fn outcome(postulate: Postulate, checked: usize, witnesses: Vec<Witness>) -> Outcome {
    let status = if witnesses.is_empty() {
        Status::Pass
    } else {
        Status::Fail(witnesses)
    };
    Outcome {
        postulate,
        checked,
        status,
    }
}

/// Checks `result` against the six rectification postulates for `clf` and
/// `t`, by exhaustive enumeration over the instances.
pub fn check_postulates(
    clf: &Classifier,
    t: &Circuit,
    result: &RectificationResult,
    opts: &CheckOptions,
    en: &Enumerator,
) -> Result<PostulateReport> {
    let problem = clf.problem();
    problem.label()?;
    if !clf.is_certified() {
        return Err(Error::Uncertified);
    }
    let rectified = result.rectified.sigma();
    let labels = problem.labels();
    let instances: Vec<Assignment> = problem.instances(en)?.collect();
    let mut outcomes = Vec::with_capacity(6);

    let mut w1 = Vec::new();
    for x in &instances {
        let rx = problem.condition_on(rectified, x)?;
        if en.count_models(&rx, labels)? != 1 {
            w1.push(Witness::Instance(x.word()));
        }
    }
    outcomes.push(outcome(Postulate::Re1, instances.len(), w1));

    let (mut w2, mut w3, mut compliant) = (Vec::new(), Vec::new(), 0);
    for x in &instances {
        let rx = problem.condition_on(rectified, x)?;
        if is_fact_compliant(clf, t, x, en)? {
            compliant += 1;
            if !en.equivalent(&rx, &clf.restrict(x)?)? {
                w2.push(Witness::Instance(x.word()));
            }
        }
        let fact = fact_formula(t, x, problem, en)?;
        if !en.entails(&rx, &fact.to_circuit())? {
            w3.push(Witness::Instance(x.word()));
        }
    }
    outcomes.push(outcome(Postulate::Re2, compliant, w2));
    outcomes.push(outcome(Postulate::Re3, instances.len(), w3));

    let mut w4 = Vec::new();
    let mut checked4 = 0;
    if !en.is_consistent(t)? {
        checked4 = 1;
        if !en.equivalent(rectified, clf.sigma())? {
            w4.push(Witness::Inputs {
                sigma: clf.sigma().clone(),
                theory: t.clone(),
            });
        }
    }
    outcomes.push(outcome(Postulate::Re4, checked4, w4));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut w5 = Vec::new();
    for _ in 0..opts.rewrites {
        let sigma = rewrite_equivalent(clf.sigma(), &mut rng);
        let theory = rewrite_equivalent(t, &mut rng);
        let other = Classifier::new(problem.clone(), sigma.clone(), en)?;
        let same = match rectify(&other, &theory) {
            Ok(r) => en.equivalent(r.rectified.sigma(), rectified)?,
            Err(Error::Uncertified) => false,
            Err(e) => return Err(e),
        };
        if !same {
            w5.push(Witness::Inputs { sigma, theory });
        }
    }
    outcomes.push(outcome(Postulate::Re5, opts.rewrites, w5));

    let mut extended = problem.clone();
    let z = extended.fresh_aux("z");
    let (sigma, theory) = {
        let mut b = Builder::raw();
        let s = b.import(clf.sigma());
        let zv = b.var(z);
        let nz = b.not(zv);
        let taut = b.or(vec![zv, nz]);
        let s = b.and(vec![s, taut]);
        let tt = b.import(t);
        let tt = b.decision(z, tt, tt);
        (b.extract(s), b.extract(tt))
    };
    let projected = Classifier::new(extended.clone(), preprocess_project(&sigma, &extended)?, en)?;
    let same = match rectify(&projected, &preprocess_project(&theory, &extended)?) {
        Ok(r) => en.equivalent(r.rectified.sigma(), rectified)?,
        Err(Error::Uncertified) => false,
        Err(e) => return Err(e),
    };
    let w6 = if same {
        Vec::new()
    } else {
        vec![Witness::Inputs { sigma, theory }]
    };
    outcomes.push(outcome(Postulate::Re6, 1, w6));

    Ok(PostulateReport { outcomes })
}

/// Instances on which a problem's two classifiers disagree, as words.
pub fn disagreements(
    a: &Circuit,
    b: &Circuit,
    problem: &ClassificationProblem,
    en: &Enumerator,
) -> Result<Vec<String>> {
    let features = problem.features();
    let ta = en.truth_table(a, features)?;
    let tb = en.truth_table(b, features)?;
    Ok((0..ta.len())
        .filter(|&i| ta[i] != tb[i])
        .map(|i| Assignment::from_index(features, i as u64).word())
        .collect())
}
