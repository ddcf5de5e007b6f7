//! Random circuits, classifiers, theories and trees for the fuzz battery
//! and property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{Builder, Circuit, GateId, Literal, Var};
use crate::classifier::ClassificationProblem;
use crate::dtree::DecisionTree;

/// A random circuit over `vars` with `gates` internal gates. The root is
/// the last gate built, so some gates may end up unreachable.
pub fn random_circuit(rng: &mut impl Rng, vars: &[Var], gates: usize) -> Circuit {
    let mut b = Builder::new();
    let root = random_gates(rng, &mut b, vars, gates);
    b.finish(root)
}

fn random_gates(rng: &mut impl Rng, b: &mut Builder, vars: &[Var], gates: usize) -> GateId {
    let mut pool: Vec<GateId> = vars.iter().map(|&v| b.var(v)).collect();
    if pool.is_empty() {
        pool.push(b.constant(rng.gen()));
    }
    for _ in 0..gates {
        let id = match rng.gen_range(0..10) {
            0..=1 => {
                let c = pick(rng, &pool);
                b.not(c)
            }
            2..=7 => {
                let arity = if rng.gen_bool(0.8) { 2 } else { 3 };
                let cs = (0..arity).map(|_| pick(rng, &pool)).collect();
                if rng.gen_bool(0.5) {
                    b.and(cs)
                } else {
                    b.or(cs)
                }
            }
            _ => {
                let var = *vars.choose(rng).expect("at least one variable");
                let lo = pick(rng, &pool);
                let hi = pick(rng, &pool);
                b.decision(var, lo, hi)
            }
        };
        pool.push(id);
    }
    *pool.last().expect("non-empty pool")
}

fn pick(rng: &mut impl Rng, pool: &[GateId]) -> GateId {
    // bias towards recent gates so the root reaches most of the pool
    let n = pool.len();
    let window = n.min(12);
    if rng.gen_bool(0.7) {
        pool[n - 1 - rng.gen_range(0..window)]
    } else {
        pool[rng.gen_range(0..n)]
    }
}

/// A random mono-label classification circuit over `features ∪ {y}` with
/// a random positive region, in one of several syntactic shapes.
pub fn random_classifier_circuit(
    rng: &mut impl Rng,
    features: &[Var],
    y: Var,
    gates: usize,
) -> Circuit {
    let mut b = Builder::new();
    let a = random_gates(rng, &mut b, features, gates);
    let yv = b.var(y);
    let root = match rng.gen_range(0..3) {
        0 => b.iff(a, yv),
        1 => {
            let na = b.not(a);
            let ny = b.not(yv);
            let pos = b.and(vec![a, yv]);
            let neg = b.and(vec![na, ny]);
            b.or(vec![pos, neg])
        }
        _ => {
            let na = b.not(a);
            let ny = b.not(yv);
            let c1 = b.or(vec![na, yv]);
            let c2 = b.or(vec![a, ny]);
            b.and(vec![c1, c2])
        }
    };
    b.finish(root)
}

/// A random theory over `features ∪ {y}`: either an arbitrary circuit or a
/// conjunction of rules `term => y` / `term => !y`.
pub fn random_theory(rng: &mut impl Rng, features: &[Var], y: Var, gates: usize) -> Circuit {
    if rng.gen_bool(0.5) {
        let mut vars = features.to_vec();
        vars.push(y);
        return random_circuit(rng, &vars, gates);
    }
    let mut b = Builder::new();
    let rules = rng.gen_range(1..=4);
    let mut conj = Vec::with_capacity(rules);
    for _ in 0..rules {
        let len = rng.gen_range(1..=features.len().min(3));
        let lits: Vec<GateId> = features
            .choose_multiple(rng, len)
            .map(|&v| {
                b.literal(Literal {
                    var: v,
                    positive: rng.gen(),
                })
            })
            .collect();
        let body = b.and(lits);
        let head = b.literal(Literal {
            var: y,
            positive: rng.gen(),
        });
        conj.push(b.implies(body, head));
    }
    let root = b.and(conj);
    b.finish(root)
}

/// A random tree of at most `depth` levels. Variables may repeat along a
/// path, so the result is usually not simplified.
pub fn random_tree(rng: &mut impl Rng, vars: &[Var], depth: usize) -> DecisionTree {
    if depth == 0 || vars.is_empty() || rng.gen_bool(0.2) {
        return DecisionTree::Leaf(rng.gen());
    }
    let var = *vars.choose(rng).expect("non-empty");
    let low = random_tree(rng, vars, depth - 1);
    let high = if rng.gen_bool(0.15) {
        low.clone()
    } else {
        random_tree(rng, vars, depth - 1)
    };
    DecisionTree::node(var, low, high)
}

/// A random classification tree over `features ∪ {y}`.
pub fn random_classification_tree(
    rng: &mut impl Rng,
    features: &[Var],
    y: Var,
    depth: usize,
) -> DecisionTree {
    random_tree(rng, features, depth).attach_label(y)
}

/// A mono-label problem over `x1..xn` and `y` with a random classifier and
/// theory, each of at most `max_gates` gates.
pub fn random_pair(
    rng: &mut impl Rng,
    n: usize,
    max_gates: usize,
) -> (ClassificationProblem, Circuit, Circuit) {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let problem = ClassificationProblem::from_names(&refs, &["y"]).expect("fresh names");
    let y = problem.labels()[0];
    let features = problem.features().to_vec();
    // the classifier shapes add up to five gates around the random core
    let core = max_gates.saturating_sub(5).max(1);
    let sigma_gates = rng.gen_range(1..=core);
    let sigma = random_classifier_circuit(rng, &features, y, sigma_gates);
    let theory_gates = rng.gen_range(1..=core);
    let theory = random_theory(rng, &features, y, theory_gates);
    (problem, sigma, theory)
}
