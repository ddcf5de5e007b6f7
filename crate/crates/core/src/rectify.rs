//! Rectification of mono-label classifiers.
//!
//! For a classifier `Σ ≡ Σ_X ⇔ y` and a theory `T` over `X ∪ {y}`, the
//! rectified classifier is `Σ_X^T ⇔ y` where
//!
//! ```text
//! pos    = T(y) ∧ ¬T(¬y)        T forces the positive class
//! neg    = T(¬y) ∧ ¬T(y)        T forces the negative class
//! Σ_X^T  = (Σ_X ∧ ¬neg) ∨ pos
//! ```
//!
//! The construction only conditions, negates and combines circuits, so it
//! runs in time linear in `|Σ| + |T|` and never enumerates models.

use crate::circuit::{Builder, Circuit, GateId, Var};
use crate::classifier::{extract_sigma_x, ClassificationProblem, Classifier, Instance};
use crate::error::{Error, Result};
use crate::semantics::{eval, forget};

/// Hard limit on the number of variables [`preprocess_project`] forgets.
pub const MAX_FORGOTTEN: usize = 8;

#[derive(Clone, Debug)]
pub struct RectificationResult {
    /// Positive instances of the rectified classifier, over `X`.
    pub sigma_x_t: Circuit,
    /// `sigma_x_t <=> y`.
    pub rectified: Classifier,
    /// Instances `T` classifies as positive.
    pub t_pos: Circuit,
    /// Instances `T` classifies as negative.
    pub t_neg: Circuit,
}

/// Adds `T(y) ∧ ¬T(¬y)` and `T(¬y) ∧ ¬T(y)` to the pool, sharing both
/// conditionings of `t`.
fn decisive(b: &mut Builder, t: &Circuit, y: Var) -> (GateId, GateId) {
    let ty = b.import_with(t, |v| (v == y).then_some(true));
    let tny = b.import_with(t, |v| (v == y).then_some(false));
    let not_ty = b.not(ty);
    let not_tny = b.not(tny);
    let pos = b.and(vec![ty, not_tny]);
    let neg = b.and(vec![tny, not_ty]);
    (pos, neg)
}

/// The instances `t` classifies as positive and as negative, as circuits
/// over `X`.
pub fn t_classifies(t: &Circuit, problem: &ClassificationProblem) -> Result<(Circuit, Circuit)> {
    let y = problem.label()?;
    problem.require_relevant(t)?;
    let mut b = Builder::new();
    let (pos, neg) = decisive(&mut b, t, y);
    Ok((b.extract(pos), b.extract(neg)))
}

/// Rectifies `clf` by `t`. `t` must only mention `X ∪ {y}`; see
/// [`preprocess_project`] for theories with auxiliary variables.
pub fn rectify(clf: &Classifier, t: &Circuit) -> Result<RectificationResult> {
    let problem = clf.problem();
    let y = problem.label()?;
    let sigma_x = extract_sigma_x(clf)?;
    problem.require_relevant(t)?;

    let mut b = Builder::new();
    let sx = b.import(&sigma_x);
    let (pos, neg) = decisive(&mut b, t, y);
    let not_neg = b.not(neg);
    let keep = b.and(vec![sx, not_neg]);
    let root = b.or(vec![keep, pos]);

    let sigma_x_t = b.extract(root);
    let rectified = Classifier::from_projection(problem.clone(), &sigma_x_t)?;
    Ok(RectificationResult {
        t_pos: b.extract(pos),
        t_neg: b.extract(neg),
        sigma_x_t,
        rectified,
    })
}

/// Forgets every variable of `phi` outside `X ∪ Y`.
pub fn preprocess_project(phi: &Circuit, problem: &ClassificationProblem) -> Result<Circuit> {
    let extra = problem.extra_vars(phi);
    if extra.len() > MAX_FORGOTTEN {
        return Err(Error::TooManyExtraVariables {
            count: extra.len(),
            limit: MAX_FORGOTTEN,
        });
    }
    Ok(forget(phi, &extra))
}

/// Class of `x` under the rectified classifier: a single evaluation of
/// `sigma_x_t`.
pub fn classify_rectified(result: &RectificationResult, x: &Instance) -> Result<bool> {
    eval(&result.sigma_x_t, x)
}
