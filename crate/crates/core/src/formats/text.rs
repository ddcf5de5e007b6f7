//! Text syntax for circuits and decision trees.
//!
//! Circuits: `true`, `false`, a variable, or one of
//! `(not e)`, `(and e ...)`, `(or e ...)`, `(imp e e)`, `(iff e e)`,
//! `(dec x low high)`, `(let ((name e) ...) body)`.
//!
//! Trees: `0`, `1`, or `(x low high)` where `low` is taken when `x` is false.

use std::collections::HashMap;

use super::sexpr::{parse_one, SExpr};
use crate::circuit::{build, Circuit, Expr, Gate, GateId, Var, VarTable};
use crate::dtree::DecisionTree;
use crate::error::Result;

pub fn parse_circuit(text: &str, table: &VarTable) -> Result<Circuit> {
    circuit_from_sexpr(&parse_one(text)?, table)
}

pub fn circuit_from_sexpr(e: &SExpr, table: &VarTable) -> Result<Circuit> {
    let expr = to_expr(e, table, &mut Vec::new())?;
    build(&expr, table)
}

fn to_expr(e: &SExpr, table: &VarTable, scope: &mut Vec<String>) -> Result<Expr> {
    let items = match e {
        SExpr::Atom { text, .. } => {
            return match text.as_str() {
                "true" => Ok(Expr::Const(true)),
                "false" => Ok(Expr::Const(false)),
                name if scope.iter().any(|s| s == name) || table.lookup(name).is_some() => {
                    Ok(Expr::Var(name.to_string()))
                }
                name => Err(e.error(format!("unknown identifier `{name}`"))),
            };
        }
        SExpr::List { items, .. } => items,
    };
    let Some((head, args)) = items.split_first() else {
        return Err(e.error("empty expression"));
    };
    let op = head
        .as_atom()
        .ok_or_else(|| head.error("expected an operator"))?;
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(e.error(format!("`{op}` expects {n} operands, got {}", args.len())))
        }
    };
    let sub = |x: &SExpr, scope: &mut Vec<String>| to_expr(x, table, scope).map(Box::new);
    Ok(match op {
        "not" => {
            arity(1)?;
            Expr::Not(sub(&args[0], scope)?)
        }
        "and" | "or" => {
            if args.is_empty() {
                return Err(e.error(format!("`{op}` expects at least one operand")));
            }
            let es = args
                .iter()
                .map(|a| to_expr(a, table, scope))
                .collect::<Result<Vec<_>>>()?;
            if op == "and" {
                Expr::And(es)
            } else {
                Expr::Or(es)
            }
        }
        "imp" | "iff" => {
            arity(2)?;
            let l = sub(&args[0], scope)?;
            let r = sub(&args[1], scope)?;
            if op == "imp" {
                Expr::Imp(l, r)
            } else {
                Expr::Iff(l, r)
            }
        }
        "dec" => {
            arity(3)?;
            let name = args[0]
                .as_atom()
                .filter(|n| table.lookup(n).is_some())
                .ok_or_else(|| args[0].error("`dec` expects a declared variable"))?;
            Expr::Dec(
                name.to_string(),
                sub(&args[1], scope)?,
                sub(&args[2], scope)?,
            )
        }
        "let" => {
            arity(2)?;
            let SExpr::List {
                items: bindings, ..
            } = &args[0]
            else {
                return Err(args[0].error("expected a binding list"));
            };
            let mark = scope.len();
            let mut out = Vec::with_capacity(bindings.len());
            for binding in bindings {
                let pair = match binding {
                    SExpr::List { items, .. } if items.len() == 2 => items,
                    _ => return Err(binding.error("expected `(name expr)`")),
                };
                let name = pair[0]
                    .as_atom()
                    .filter(|n| crate::circuit::is_valid_name(n))
                    .ok_or_else(|| pair[0].error("invalid binding name"))?;
                if scope[mark..].iter().any(|s| s == name) || table.lookup(name).is_some() {
                    return Err(pair[0].error(format!("duplicate let-binding `{name}`")));
                }
                let value = to_expr(&pair[1], table, scope)?;
                scope.push(name.to_string());
                out.push((name.to_string(), value));
            }
            let body = to_expr(&args[1], table, scope);
            scope.truncate(mark);
            Expr::Let(out, Box::new(body?))
        }
        other => return Err(head.error(format!("unknown operator `{other}`"))),
    })
}

/// Prints `c` on one line. Gates with several parents become `let`
/// bindings, so parsing the output rebuilds the same DAG.
pub fn print_circuit(c: &Circuit, table: &VarTable) -> String {
    let fanout = c.fanout();
    let shared: Vec<GateId> = (0..c.gate_count())
        .filter(|&i| fanout[i] > 1 && !matches!(c.gates()[i], Gate::Const(_) | Gate::Var(_)))
        .map(GateId::from_index)
        .collect();
    let mut prefix = String::from("_s");
    while table.vars().any(|v| table.name(v).starts_with(&prefix)) {
        prefix.insert(0, '_');
    }
    let names: HashMap<GateId, String> = shared
        .iter()
        .enumerate()
        .map(|(k, &id)| (id, format!("{prefix}{}", k + 1)))
        .collect();
    let body = print_gate(c, c.root(), table, &names, true);
    if shared.is_empty() {
        return body;
    }
    let bindings: Vec<String> = shared
        .iter()
        .map(|id| {
            format!(
                "({} {})",
                names[id],
                print_gate(c, *id, table, &names, true)
            )
        })
        .collect();
    format!("(let ({}) {})", bindings.join(" "), body)
}

fn print_gate(
    c: &Circuit,
    id: GateId,
    table: &VarTable,
    names: &HashMap<GateId, String>,
    expand: bool,
) -> String {
    if !expand {
        if let Some(n) = names.get(&id) {
            return n.clone();
        }
    }
    let p = |child: &GateId| print_gate(c, *child, table, names, false);
    match c.gate(id) {
        Gate::Const(true) => "true".into(),
        Gate::Const(false) => "false".into(),
        Gate::Var(v) => table.name(*v).into(),
        Gate::Not(x) => format!("(not {})", p(x)),
        Gate::And(cs) => format!("(and {})", join(cs.iter().map(p))),
        Gate::Or(cs) => format!("(or {})", join(cs.iter().map(p))),
        Gate::Decision { var, low, high } => {
            format!("(dec {} {} {})", table.name(*var), p(low), p(high))
        }
    }
}

fn join(parts: impl Iterator<Item = String>) -> String {
    parts.collect::<Vec<_>>().join(" ")
}

/// Parses a tree whose variables must already be declared in `table`.
pub fn parse_dtree(text: &str, table: &VarTable) -> Result<DecisionTree> {
    dtree_from_sexpr(&parse_one(text)?, &mut |e, name| {
        table
            .lookup(name)
            .ok_or_else(|| e.error(format!("unknown identifier `{name}`")))
    })
}

/// Parses a tree, declaring unseen variables in `table`.
pub fn parse_dtree_declaring(text: &str, table: &mut VarTable) -> Result<DecisionTree> {
    dtree_from_sexpr(&parse_one(text)?, &mut |e, name| {
        table
            .declare(name)
            .map_err(|_| e.error(format!("invalid variable name `{name}`")))
    })
}

pub fn dtree_from_sexpr(
    e: &SExpr,
    resolve: &mut dyn FnMut(&SExpr, &str) -> Result<Var>,
) -> Result<DecisionTree> {
    match e {
        SExpr::Atom { text, .. } => match text.as_str() {
            "0" => Ok(DecisionTree::Leaf(false)),
            "1" => Ok(DecisionTree::Leaf(true)),
            other => Err(e.error(format!("expected leaf `0` or `1`, got `{other}`"))),
        },
        SExpr::List { items, .. } => {
            let [var, low, high] = items.as_slice() else {
                return Err(e.error("expected `(var low high)`"));
            };
            let name = var
                .as_atom()
                .ok_or_else(|| var.error("expected a variable"))?;
            let v = resolve(var, name)?;
            Ok(DecisionTree::node(
                v,
                dtree_from_sexpr(low, resolve)?,
                dtree_from_sexpr(high, resolve)?,
            ))
        }
    }
}

pub fn print_dtree(t: &DecisionTree, table: &VarTable) -> String {
    match t {
        DecisionTree::Leaf(b) => if *b { "1" } else { "0" }.to_string(),
        DecisionTree::Node { var, low, high } => format!(
            "({} {} {})",
            table.name(*var),
            print_dtree(low, table),
            print_dtree(high, table)
        ),
    }
}
