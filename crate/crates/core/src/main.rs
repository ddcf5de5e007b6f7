use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rectifier::circuit::{Circuit, VarTable};
use rectifier::classifier::{classify_mono, ClassificationProblem, Classifier};
use rectifier::dtree::{dt_rectify, rf_rectify, DecisionTree};
use rectifier::formats::{
    parse_dtree_declaring, parse_problem, print_circuit, print_dtree, render_report, render_table,
    ProblemFile,
};
use rectifier::gen::random_pair;
use rectifier::rectify::{classify_rectified, preprocess_project, rectify};
use rectifier::semantics::{Enumerator, DEFAULT_MAX_VARS};
use rectifier::verify::{check_postulates, cross_check, CheckOptions};
use rectifier::Error;

#[derive(Parser)]
#[command(
    name = "rectifier",
    version,
    about = "Rectify Boolean classifiers by background knowledge"
)]
struct Cli {
    /// Largest number of variables enumerated by brute force.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_VARS)]
    max_vars: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutForm {
    Circuit,
    Dtree,
}

#[derive(Subcommand)]
enum Command {
    /// Print the rectified positive region and the rectified classifier.
    Rectify {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, value_enum, default_value = "circuit")]
        out: OutForm,
        /// Canonicalise circuit output through a reduced decision tree.
        #[arg(long)]
        simplify: bool,
        /// Forget theory variables outside the features and labels first.
        #[arg(long)]
        project: bool,
    },
    /// Classify one instance before and after rectification.
    Classify {
        #[arg(long)]
        problem: PathBuf,
        /// Feature values, first declared feature leftmost, e.g. `110`.
        #[arg(long)]
        instance: String,
    },
    /// One row per instance: sigma, theory, facts, rectified.
    Table {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Check the rectification postulates by enumeration.
    Check {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = 5)]
        rewrites: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rectify a classification tree by a theory tree.
    DtRectify {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        theory: PathBuf,
        #[arg(long, default_value = "y")]
        label: String,
        /// Feature order; defaults to order of first appearance.
        #[arg(long, value_delimiter = ',')]
        features: Vec<String>,
    },
    /// Compare the construction with both oracles on random pairs.
    Fuzz {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        max_gates: usize,
    },
}

enum Failure {
    Input(String),
    Cap(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> std::result::Result<ProblemFile, Failure> {
    parse_problem(&read(path)?).map_err(|e| match e {
        Error::Syntax { .. } => Failure::Input(format!("{}:{e}", path.display())),
        e => e.into(),
    })
}

fn classifier(file: &ProblemFile, en: &Enumerator) -> std::result::Result<Classifier, Failure> {
    let clf = Classifier::new(file.problem.clone(), file.sigma.clone(), en)?;
    if !clf.is_certified() {
        return Err(Error::Uncertified.into());
    }
    Ok(clf)
}

fn as_tree(
    phi: &Circuit,
    problem: &ClassificationProblem,
    with_label: bool,
    en: &Enumerator,
) -> rectifier::Result<DecisionTree> {
    let mut order = problem.features().to_vec();
    if with_label {
        order.extend_from_slice(problem.labels());
    }
    Ok(DecisionTree::from_circuit(phi, &order, en)?.simplify())
}

fn run_rectify(
    path: &Path,
    out: OutForm,
    simplify: bool,
    project: bool,
    en: &Enumerator,
) -> Outcome {
    let file = load(path)?;
    let problem = &file.problem;
    let y = problem.label()?;
    let table = problem.table();
    let theory = if project {
        preprocess_project(&file.theory, problem)?
    } else {
        file.theory.clone()
    };
    let clf = classifier(&file, en)?;
    let result = rectify(&clf, &theory)?;

    if out == OutForm::Dtree || simplify {
        let tree = as_tree(&result.sigma_x_t, problem, false, en)?;
        let labelled = tree.attach_label(y);
        if out == OutForm::Dtree {
            println!("sigma_x_t: {}", print_dtree(&tree, table));
            println!("rectified: {}", print_dtree(&labelled, table));
        } else {
            println!("sigma_x_t: {}", print_circuit(&tree.to_circuit(), table));
            println!(
                "rectified: {}",
                print_circuit(&labelled.to_circuit(), table)
            );
        }
    } else {
        println!("sigma_x_t: {}", print_circuit(&result.sigma_x_t, table));
        println!(
            "rectified: {}",
            print_circuit(result.rectified.sigma(), table)
        );
    }

    if let Some(forest) = &file.forest {
        let t_dt = as_tree(&theory, problem, true, en)?;
        let fixed = rf_rectify(forest, &t_dt, problem)?;
        for (i, tree) in fixed.trees().iter().enumerate() {
            println!("forest[{i}]: {}", print_dtree(tree, table));
        }
    }
    Ok(())
}

fn class(positive: bool) -> &'static str {
    if positive {
        "pos"
    } else {
        "neg"
    }
}

fn run_classify(path: &Path, word: &str, en: &Enumerator) -> Outcome {
    let file = load(path)?;
    let clf = classifier(&file, en)?;
    let x = file.problem.instance(word)?;
    let result = rectify(&clf, &file.theory)?;
    println!(
        "sigma: {}, rectified: {}",
        class(classify_mono(&clf, &x, en)?),
        class(classify_rectified(&result, &x)?)
    );
    Ok(())
}

fn run_table(path: &Path, en: &Enumerator) -> Outcome {
    let file = load(path)?;
    let clf = classifier(&file, en)?;
    let result = rectify(&clf, &file.theory)?;
    print!("{}", render_table(&clf, &file.theory, &result, en)?);
    Ok(())
}

fn run_check(path: &Path, opts: CheckOptions, en: &Enumerator) -> Outcome {
    let file = load(path)?;
    let clf = classifier(&file, en)?;
    let result = rectify(&clf, &file.theory)?;
    let report = check_postulates(&clf, &file.theory, &result, &opts, en)?;
    print!("{}", render_report(&report, file.problem.table()));
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verification("postulate check failed".into()))
    }
}

fn run_dt_rectify(
    sigma: &Path,
    theory: &Path,
    label: &str,
    features: &[String],
    en: &Enumerator,
) -> Outcome {
    let mut table = VarTable::new();
    for f in features {
        if table.lookup(f).is_some() {
            return Err(Failure::Input(format!("feature `{f}` listed twice")));
        }
        table.declare(f)?;
    }
    if table.lookup(label).is_some() {
        return Err(Failure::Input(format!(
            "`{label}` is both a feature and the label"
        )));
    }
    let y = table.declare(label)?;
    let at = |path: &Path, e: Error| match e {
        Error::Syntax { .. } => Failure::Input(format!("{}:{e}", path.display())),
        e => e.into(),
    };
    let sigma_dt = parse_dtree_declaring(&read(sigma)?, &mut table).map_err(|e| at(sigma, e))?;
    let t_dt = parse_dtree_declaring(&read(theory)?, &mut table).map_err(|e| at(theory, e))?;
    let features = if features.is_empty() {
        table.vars().filter(|&v| v != y).collect()
    } else {
        features
            .iter()
            .map(|f| table.resolve(f))
            .collect::<rectifier::Result<Vec<_>>>()?
    };
    let problem = ClassificationProblem::new(table, features, vec![y])?;
    let result = dt_rectify(&sigma_dt, &t_dt, &problem, en)?;
    println!(
        "sigma_x_t: {}",
        print_dtree(&result.sigma_x_t, problem.table())
    );
    println!(
        "rectified: {}",
        print_dtree(&result.rectified, problem.table())
    );
    Ok(())
}

fn run_fuzz(vars: usize, iters: usize, seed: u64, max_gates: usize, en: &Enumerator) -> Outcome {
    if vars == 0 {
        return Err(Failure::Input("--vars must be positive".into()));
    }
    en.check_cap(vars + 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    for i in 0..iters {
        let pair_seed: u64 = rng.gen();
        let mut pair_rng = ChaCha8Rng::seed_from_u64(pair_seed);
        let (problem, sigma, theory) = random_pair(&mut pair_rng, vars, max_gates);
        let clf = Classifier::new(problem, sigma, en)?;
        let mismatches = cross_check(&clf, &theory, en)?;
        if !mismatches.is_empty() {
            failures += 1;
            let table = clf.problem().table();
            println!(
                "iteration {i} (seed {pair_seed}): {}\n  sigma  {}\n  theory {}",
                mismatches.join(", "),
                print_circuit(clf.sigma(), table),
                print_circuit(&theory, table)
            );
        }
    }
    println!("{iters} pairs, {failures} mismatches");
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{failures} mismatching pairs"
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let en = Enumerator::new(cli.max_vars);
    let outcome = match cli.command {
        Command::Rectify {
            problem,
            out,
            simplify,
            project,
        } => run_rectify(&problem, out, simplify, project, &en),
        Command::Classify { problem, instance } => run_classify(&problem, &instance, &en),
        Command::Table { problem } => run_table(&problem, &en),
        Command::Check {
            problem,
            rewrites,
            seed,
        } => run_check(&problem, CheckOptions { rewrites, seed }, &en),
        Command::DtRectify {
            sigma,
            theory,
            label,
            features,
        } => run_dt_rectify(&sigma, &theory, &label, &features, &en),
        Command::Fuzz {
            vars,
            iters,
            seed,
            max_gates,
        } => run_fuzz(vars, iters, seed, max_gates, &en),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
