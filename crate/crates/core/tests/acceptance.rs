//! Acceptance gate. Runs every criterion, prints one line each, and exits
//! non-zero if any of them fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rectifier::circuit::Circuit;
use rectifier::classifier::{fact_formula, is_fact_compliant, ClassificationProblem, Classifier};
use rectifier::dtree::{dt_rectify, rf_rectify, RandomForest};
use rectifier::formats::{parse_circuit, parse_dtree, print_dtree};
use rectifier::gen::{random_circuit, random_classification_tree, random_pair, random_tree};
use rectifier::rectify::rectify;
use rectifier::semantics::Enumerator;
use rectifier::verify::{check_postulates, cross_check, CheckOptions};

const TABLE_GOLDEN: &str = "\
x sigma theory facts rectified
000 y !y !y !y
001 y !y !y !y
010 !y T T !y
011 !y T T !y
100 !y F T !y
101 y !y !y !y
110 !y y y y
111 y T T y
";

const SIGMA2: &str = "(iff (or (and (not x1) (not x2)) (and x1 x3)) y)";
const THEORY2: &str = "(and (imp (and x1 (not x3)) y) (imp (not x2) (not y)))";

const CORPUS_PAIRS: usize = 1000;
const CORPUS_SEED: u64 = 0x5eed_0004;
const MAX_GATES: usize = 40;
const REWRITES: usize = 5;
const SIZE_SLACK: usize = 16;
const MIN_R2: f64 = 0.95;
const TIMING_RUNS: usize = 7;
const TREE_PAIRS: usize = 500;
const SIMPLIFY_TREES: usize = 1000;
const FORESTS: usize = 200;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn credit() -> (ClassificationProblem, Classifier, Circuit) {
    let problem = ClassificationProblem::from_names(&["x1", "x2", "x3"], &["y"]).unwrap();
    let sigma = parse_circuit(SIGMA2, problem.table()).unwrap();
    let theory = parse_circuit(THEORY2, problem.table()).unwrap();
    let clf = Classifier::new(problem.clone(), sigma, &Enumerator::default()).unwrap();
    (problem, clf, theory)
}

/// The shared random corpus: |X| cycles through 3..=8.
fn corpus() -> Vec<(Classifier, Circuit)> {
    let en = Enumerator::default();
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_PAIRS)
        .map(|i| {
            let (problem, sigma, theory) = random_pair(&mut rng, 3 + i % 6, MAX_GATES);
            assert!(sigma.gate_count() <= MAX_GATES && theory.gate_count() <= MAX_GATES);
            (Classifier::new(problem, sigma, &en).unwrap(), theory)
        })
        .collect()
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("took {took:.2?}, limit {limit:?}"))
    }
}

fn table_reproduction() -> Check {
    let start = Instant::now();
    let file = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/credit.problem");
    let out = Command::new(env!("CARGO_BIN_EXE_rectifier"))
        .arg("table")
        .arg("--problem")
        .arg(&file)
        .output()
        .map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(1), start)?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    if !out.status.success() || stdout != TABLE_GOLDEN {
        return Err(format!("status {}, output:\n{stdout}", out.status));
    }
    Ok(format!("8 rows byte-exact in {took:.2?}"))
}

fn projection_example() -> Check {
    let start = Instant::now();
    let (problem, clf, theory) = credit();
    let en = Enumerator::default();
    let result = rectify(&clf, &theory).map_err(|e| e.to_string())?;
    let expected = parse_circuit("(and x1 x2)", problem.table()).unwrap();
    let ok = en.equivalent(&result.sigma_x_t, &expected).unwrap();
    let took = within(Duration::from_secs(1), start)?;
    if ok {
        Ok(format!("sigma_x_t == x1 & x2 in {took:.2?}"))
    } else {
        Err("sigma_x_t differs from x1 & x2".into())
    }
}

fn fact_machinery() -> Check {
    let start = Instant::now();
    let en = Enumerator::default();
    let problem = ClassificationProblem::from_names(&["x1", "x2"], &["y1", "y2"]).unwrap();
    let table = problem.table();
    let sigma = parse_circuit(
        "(and (dec x1 (not y1) (dec y1 false true)) (dec y2 (not x2) x2))",
        table,
    )
    .unwrap();
    let theory = parse_circuit(
        "(and (imp (and x1 x2) (and y1 y2)) (imp (and x1 (not x2)) (or y1 y2)) \
         (imp (and (not x1) x2) (not y2)) (or x1 x2))",
        table,
    )
    .unwrap();
    let clf = Classifier::new(problem.clone(), sigma, &en).unwrap();
    if !clf.is_certified() {
        return Err("example classifier is not certified".into());
    }
    let expected = [
        ("11", "(and y1 y2)", true),
        ("10", "true", true),
        ("01", "(not y2)", false),
        ("00", "true", true),
    ];
    for (word, fact, compliant) in expected {
        let x = problem.instance(word).unwrap();
        let f = fact_formula(&theory, &x, &problem, &en)
            .unwrap()
            .to_circuit();
        let want = parse_circuit(fact, table).unwrap();
        if !en.equivalent(&f, &want).unwrap() {
            return Err(format!("F(T, {word}) is not {fact}"));
        }
        if is_fact_compliant(&clf, &theory, &x, &en).unwrap() != compliant {
            return Err(format!("compliance of {word} should be {compliant}"));
        }
    }
    let took = within(Duration::from_secs(1), start)?;
    Ok(format!(
        "4 fact formulas, compliance fails only on 01, in {took:.2?}"
    ))
}

fn oracle_agreement(corpus: &[(Classifier, Circuit)]) -> Check {
    let start = Instant::now();
    let en = Enumerator::default();
    for (i, (clf, t)) in corpus.iter().enumerate() {
        let bad = cross_check(clf, t, &en).map_err(|e| e.to_string())?;
        if !bad.is_empty() {
            return Err(format!("pair {i}: {}", bad.join(", ")));
        }
    }
    let took = within(Duration::from_secs(30), start)?;
    Ok(format!(
        "{} pairs, 0 mismatches in {took:.2?}",
        corpus.len()
    ))
}

fn postulates(corpus: &[(Classifier, Circuit)]) -> Check {
    let start = Instant::now();
    let en = Enumerator::default();
    for (i, (clf, t)) in corpus.iter().enumerate() {
        let result = rectify(clf, t).map_err(|e| e.to_string())?;
        let opts = CheckOptions {
            rewrites: REWRITES,
            seed: i as u64,
        };
        let report = check_postulates(clf, t, &result, &opts, &en).map_err(|e| e.to_string())?;
        if let Some(o) = report.outcomes.iter().find(|o| !o.passed()) {
            return Err(format!("pair {i}: {} failed", o.postulate));
        }
    }
    let took = within(Duration::from_secs(60), start)?;
    Ok(format!(
        "RE1-RE6 on {} pairs, {REWRITES} rewrites each, in {took:.2?}",
        corpus.len()
    ))
}

fn r_squared(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    sxy * sxy / (sxx * syy)
}

fn linear_size(corpus: &[(Classifier, Circuit)]) -> Check {
    for (i, (clf, t)) in corpus.iter().enumerate() {
        let result = rectify(clf, t).map_err(|e| e.to_string())?;
        let got = result.rectified.sigma().size();
        let bound = clf.sigma().size() + 2 * t.size() + SIZE_SLACK;
        if got > bound {
            return Err(format!("pair {i}: size {got} > bound {bound}"));
        }
    }

    // time against |sigma| + |T| on log-spaced sizes from 1e2 to 1e5
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let problem = ClassificationProblem::from_names(
        &["x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8"],
        &["y"],
    )
    .unwrap();
    let features = problem.features().to_vec();
    let mut vars = features.clone();
    vars.push(problem.labels()[0]);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 0..=12 {
        let target = (100.0 * 10f64.powf(k as f64 / 4.0)).round() as usize;
        // unreachable gates are dropped, so grow until the target is met
        let mut gates = target / 2;
        let (clf, t) = loop {
            let sigma_x = random_circuit(&mut rng, &features, gates);
            let t = random_circuit(&mut rng, &vars, gates);
            let clf = Classifier::from_projection(problem.clone(), &sigma_x).unwrap();
            if clf.sigma().gate_count() + t.gate_count() >= target {
                break (clf, t);
            }
            gates += gates / 4 + 1;
        };
        let fastest = (0..TIMING_RUNS)
            .map(|_| {
                let start = Instant::now();
                let r = rectify(&clf, &t).unwrap();
                let took = start.elapsed();
                std::hint::black_box(r);
                took
            })
            .min()
            .expect("at least one run");
        xs.push((clf.sigma().gate_count() + t.gate_count()) as f64);
        ys.push(fastest.as_secs_f64());
    }
    let r2 = r_squared(&xs, &ys);
    if r2 < MIN_R2 {
        return Err(format!("size bound holds but R^2 = {r2:.4} < {MIN_R2}"));
    }
    Ok(format!(
        "size bound on {} pairs, time R^2 = {r2:.4} over {:.0}..{:.0} gates",
        corpus.len(),
        xs[0],
        xs[xs.len() - 1]
    ))
}

fn tree_pipeline() -> Check {
    let start = Instant::now();
    let en = Enumerator::default();
    let (problem, _, _) = credit();
    let table = problem.table();
    let sigma_dt = parse_dtree("(y (x1 (x2 0 1) (x3 1 0)) (x1 (x2 1 0) (x3 0 1)))", table).unwrap();
    let t_dt = parse_dtree("(y (x1 1 (x3 0 1)) (x2 0 1))", table).unwrap();
    let r = dt_rectify(&sigma_dt, &t_dt, &problem, &en).map_err(|e| e.to_string())?;
    let expected = parse_dtree("(x1 0 (x2 0 1))", table).unwrap();
    if r.sigma_x_t != expected {
        return Err(format!("got {}", print_dtree(&r.sigma_x_t, table)));
    }
    let x1x2 = parse_circuit("(and x1 x2)", table).unwrap();
    if !en.equivalent(&r.sigma_x_t.to_circuit(), &x1x2).unwrap() {
        return Err("tree result is not x1 & x2".into());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..TREE_PAIRS {
        let n = rng.gen_range(1..=7);
        let names: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let problem = ClassificationProblem::from_names(&refs, &["y"]).unwrap();
        let features = problem.features().to_vec();
        let y = problem.labels()[0];
        let mut all = features.clone();
        all.push(y);
        let sigma = random_classification_tree(&mut rng, &features, y, 6);
        let t = random_tree(&mut rng, &all, 6);
        let via_trees = dt_rectify(&sigma, &t, &problem, &en).map_err(|e| e.to_string())?;
        let clf = Classifier::new(problem.clone(), sigma.to_circuit(), &en).unwrap();
        let via_circuits = rectify(&clf, &t.to_circuit()).map_err(|e| e.to_string())?;
        if !en
            .equivalent(
                &via_trees.rectified.to_circuit(),
                via_circuits.rectified.sigma(),
            )
            .unwrap()
        {
            return Err(format!("tree pair {i} disagrees"));
        }
    }
    let took = within(Duration::from_secs(60), start)?;
    Ok(format!(
        "credit trees reproduced, {TREE_PAIRS} random pairs agree, in {took:.2?}"
    ))
}

fn simplification() -> Check {
    let en = Enumerator::default();
    let mut table = rectifier::VarTable::new();
    let vars: Vec<_> = (1..=6)
        .map(|k| table.declare(&format!("v{k}")).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut redundant = 0;
    for i in 0..SIMPLIFY_TREES {
        let t = random_tree(&mut rng, &vars, 8);
        if !t.is_simplified() {
            redundant += 1;
        }
        let s = t.simplify();
        if !s.is_read_once() || s.has_identical_children() {
            return Err(format!(
                "tree {i} not in normal form: {}",
                print_dtree(&s, &table)
            ));
        }
        if !en.equivalent(&s.to_circuit(), &t.to_circuit()).unwrap() {
            return Err(format!("tree {i} changed meaning"));
        }
    }
    Ok(format!(
        "{SIMPLIFY_TREES} trees ({redundant} redundant) normalised and equivalent"
    ))
}

fn forest_compliance() -> Check {
    let en = Enumerator::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0usize;
    for f in 0..FORESTS {
        let n = rng.gen_range(2..=7);
        let names: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let problem = ClassificationProblem::from_names(&refs, &["y"]).unwrap();
        let features = problem.features().to_vec();
        let y = problem.labels()[0];
        let mut all = features.clone();
        all.push(y);
        let size = rng.gen_range(1..=5);
        let trees = (0..size)
            .map(|_| random_tree(&mut rng, &features, 5))
            .collect();
        let forest = RandomForest::new(trees).unwrap();
        let t_dt = random_tree(&mut rng, &all, 6);
        let t = t_dt.to_circuit();
        let fixed = rf_rectify(&forest, &t_dt, &problem).map_err(|e| e.to_string())?;
        for (k, tree) in fixed.trees().iter().enumerate() {
            let clf = Classifier::from_projection(problem.clone(), &tree.to_circuit()).unwrap();
            for x in problem.instances(&en).unwrap() {
                checked += 1;
                if !is_fact_compliant(&clf, &t, &x, &en).unwrap() {
                    return Err(format!("forest {f} tree {k} instance {}", x.word()));
                }
            }
        }
    }
    Ok(format!(
        "{FORESTS} forests, {checked} tree-instance checks compliant"
    ))
}

fn main() -> ExitCode {
    // the harness flags cargo passes (e.g. --nocapture) are irrelevant here
    let corpus = corpus();
    let criteria: Vec<Criterion> = vec![
        ("table reproduction", Box::new(table_reproduction)),
        (
            "projection on the worked example",
            Box::new(projection_example),
        ),
        ("multi-label fact formulas", Box::new(fact_machinery)),
        ("oracle agreement", Box::new(|| oracle_agreement(&corpus))),
        ("postulate battery", Box::new(|| postulates(&corpus))),
        ("linear size and time", Box::new(|| linear_size(&corpus))),
        ("decision-tree pipeline", Box::new(tree_pipeline)),
        ("simplification normal form", Box::new(simplification)),
        ("forest fact compliance", Box::new(forest_compliance)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} [{name}]: PASS - {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL - {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria pass", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria fail", criteria.len());
        ExitCode::FAILURE
    }
}
