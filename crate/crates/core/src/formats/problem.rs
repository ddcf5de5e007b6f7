//! Problem files.
//!
//! ```text
//! ; comments start with a semicolon
//! (features x1 x2 x3)
//! (labels y)
//! (aux z)                 ; optional: variables outside X and Y
//! (sigma <circuit>)
//! (theory <circuit>)
//! (forest <tree> ...)     ; optional: trees over the features
//! ```

use super::sexpr::{parse_all, SExpr};
use super::text::{circuit_from_sexpr, dtree_from_sexpr};
use crate::circuit::{Circuit, Var, VarTable};
use crate::classifier::ClassificationProblem;
use crate::dtree::RandomForest;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub problem: ClassificationProblem,
    pub sigma: Circuit,
    pub theory: Circuit,
    pub forest: Option<RandomForest>,
}

const SECTIONS: &[&str] = &["features", "labels", "aux", "sigma", "theory", "forest"];

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let mut sections: Vec<(&str, &SExpr, &[SExpr])> = Vec::new();
    let all = parse_all(text)?;
    for e in &all {
        let SExpr::List { items, .. } = e else {
            return Err(e.error("expected a `(section ...)` form"));
        };
        let Some((head, rest)) = items.split_first() else {
            return Err(e.error("empty section"));
        };
        let name = head
            .as_atom()
            .filter(|n| SECTIONS.contains(n))
            .ok_or_else(|| head.error("unknown section"))?;
        if sections.iter().any(|(n, _, _)| *n == name) {
            return Err(head.error(format!("duplicate section `{name}`")));
        }
        sections.push((name, e, rest));
    }
    let find = |name: &str| sections.iter().find(|(n, _, _)| *n == name);
    let required = |name: &str| {
        find(name).ok_or_else(|| Error::syntax(1, 1, format!("missing section `{name}`")))
    };

    let mut table = VarTable::new();
    let declare = |items: &[SExpr], table: &mut VarTable| -> Result<Vec<Var>> {
        items
            .iter()
            .map(|item| {
                let name = item
                    .as_atom()
                    .ok_or_else(|| item.error("expected a variable name"))?;
                if table.lookup(name).is_some() {
                    return Err(item.error(format!("`{name}` declared twice")));
                }
                table
                    .declare(name)
                    .map_err(|_| item.error(format!("invalid variable name `{name}`")))
            })
            .collect()
    };
    let (_, features_at, features) = required("features")?;
    let features = declare(features, &mut table)?;
    let (_, labels_at, labels) = required("labels")?;
    let labels = declare(labels, &mut table)?;
    if let Some((_, _, aux)) = find("aux") {
        declare(aux, &mut table)?;
    }
    if features.is_empty() {
        return Err(features_at.error("empty feature set"));
    }
    if labels.is_empty() {
        return Err(labels_at.error("empty label set"));
    }

    let single = |name: &str| -> Result<&SExpr> {
        let (_, at, body) = required(name)?;
        match body {
            [e] => Ok(e),
            _ => Err(at.error(format!("`{name}` expects one expression"))),
        }
    };
    let sigma = circuit_from_sexpr(single("sigma")?, &table)?;
    let theory = circuit_from_sexpr(single("theory")?, &table)?;
    let forest = match find("forest") {
        None => None,
        Some((_, at, trees)) => {
            let trees = trees
                .iter()
                .map(|t| {
                    dtree_from_sexpr(t, &mut |e, name| match table.lookup(name) {
                        Some(v) if features.contains(&v) => Ok(v),
                        _ => Err(e.error(format!("`{name}` is not a feature"))),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Some(RandomForest::new(trees).map_err(|_| at.error("empty forest"))?)
        }
    };
    let problem = ClassificationProblem::new(table, features, labels)?;
    Ok(ProblemFile {
        problem,
        sigma,
        theory,
        forest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "(features x1 x2 x3)\n(labels y)\n\
        (sigma (iff (or (and (not x1) (not x2)) (and x1 x3)) y))\n\
        (theory (and (imp (and x1 (not x3)) y) (imp (not x2) (not y))))\n";

    #[test]
    fn parses_sections() {
        let p = parse_problem(EXAMPLE).unwrap();
        assert_eq!(p.problem.features().len(), 3);
        assert!(p.problem.is_mono_label());
        assert!(p.forest.is_none());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_problem("(features x)\n(labels y)\n(sigma y)").is_err());
        assert!(parse_problem("(features x x)\n(labels y)\n(sigma y)\n(theory y)").is_err());
        assert!(parse_problem("(features x)\n(labels x)\n(sigma x)\n(theory x)").is_err());
        assert!(parse_problem("(features)\n(labels y)\n(sigma y)\n(theory y)").is_err());
        assert!(parse_problem("(features x)\n(labels y)\n(sigma q)\n(theory y)").is_err());
        assert!(parse_problem("(features x)\n(features x)").is_err());
        assert!(parse_problem("(bogus)").is_err());
        let err = parse_problem("(features x)\n(labels y)\n(sigma (and))\n(theory y)").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
    }

    #[test]
    fn aux_and_forest() {
        let text = "(features a b)\n(labels y)\n(aux z)\n(sigma (iff a y))\n\
                    (theory (and z y))\n(forest (a 0 1) (b 1 0) 1)\n";
        let p = parse_problem(text).unwrap();
        assert_eq!(p.forest.unwrap().trees().len(), 3);
        assert!(p.problem.var("z").is_ok());
        let bad = "(features a)\n(labels y)\n(sigma (iff a y))\n(theory y)\n(forest (y 0 1))";
        assert!(parse_problem(bad).is_err());
    }
}
