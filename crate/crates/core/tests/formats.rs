//! Parsers and printers.

use rectifier::circuit::{Gate, VarTable};
use rectifier::formats::{
    parse_circuit, parse_dtree, parse_dtree_declaring, parse_problem, print_circuit, print_dtree,
};
use rectifier::semantics::Enumerator;
use rectifier::{DecisionTree, Error};

fn xs() -> VarTable {
    let mut t = VarTable::new();
    for n in ["x1", "x2", "x3", "y"] {
        t.declare(n).unwrap();
    }
    t
}

#[test]
fn constants_and_variables() {
    let t = xs();
    assert_eq!(parse_circuit("true", &t).unwrap().as_const(), Some(true));
    assert_eq!(parse_circuit("false", &t).unwrap().as_const(), Some(false));
    let c = parse_circuit("x2", &t).unwrap();
    assert!(matches!(c.gate(c.root()), Gate::Var(v) if t.name(*v) == "x2"));
}

#[test]
fn let_bindings_share_nodes() {
    let t = xs();
    let shared = parse_circuit("(let ((a (and x1 x2))) (or a (not a)))", &t).unwrap();
    let inlined = parse_circuit("(or (and x1 x2) (not (and x1 x2)))", &t).unwrap();
    assert_eq!(shared.gate_count(), inlined.gate_count());
    let and_gates = shared
        .gates()
        .iter()
        .filter(|g| matches!(g, Gate::And(_)))
        .count();
    assert_eq!(and_gates, 1);
    assert!(Enumerator::default().equivalent(&shared, &inlined).unwrap());
}

#[test]
fn printing_keeps_sharing() {
    let t = xs();
    let c = parse_circuit("(let ((a (and x1 x2))) (or (and a x3) (and a y)))", &t).unwrap();
    let text = print_circuit(&c, &t);
    assert!(text.starts_with("(let ((_s1 (and x1 x2)))"), "{text}");
    let back = parse_circuit(&text, &t).unwrap();
    assert_eq!(back.gate_count(), c.gate_count());
}

#[test]
fn binding_names_avoid_variables() {
    let mut t = VarTable::new();
    t.declare("_s1").unwrap();
    t.declare("b").unwrap();
    let c = parse_circuit("(let ((a (not b))) (and a (or a _s1)))", &t).unwrap();
    let text = print_circuit(&c, &t);
    assert!(text.contains("__s1"), "{text}");
    assert_eq!(
        parse_circuit(&text, &t).unwrap().gate_count(),
        c.gate_count()
    );
}

#[test]
fn syntax_errors_carry_positions() {
    let t = xs();
    let at = |text: &str| match parse_circuit(text, &t).unwrap_err() {
        Error::Syntax { line, column, .. } => (line, column),
        other => panic!("unexpected error {other}"),
    };
    assert_eq!(at("(and x1\n  (or q x2))"), (2, 7));
    assert_eq!(at("(and x1 (frob x2))"), (1, 10));
    assert_eq!(at("(not x1 x2)"), (1, 1));
    assert_eq!(at("(and)"), (1, 1));
    assert_eq!(at("(and x1"), (1, 1));
    assert_eq!(at("()"), (1, 1));
    assert_eq!(at("(let ((a x1) (a x2)) a)"), (1, 15));
    assert_eq!(at("(let ((x1 x2)) x1)"), (1, 8));
    assert_eq!(at("(dec q x1 x2)"), (1, 6));
}

#[test]
fn unknown_identifier_message() {
    let err = parse_circuit("(or x1 zz)", &xs()).unwrap_err();
    assert!(err.to_string().contains("unknown identifier `zz`"), "{err}");
}

#[test]
fn let_scopes_end_with_their_body() {
    let t = xs();
    assert!(parse_circuit("(and (let ((a x1)) a) a)", &t).is_err());
    let nested = parse_circuit("(let ((a x1) (b (not a))) (let ((c (or a b))) c))", &t).unwrap();
    assert_eq!(nested.as_const(), None);
    assert!(Enumerator::default()
        .equivalent(&nested, &parse_circuit("true", &t).unwrap())
        .unwrap());
}

#[test]
fn comments_and_whitespace() {
    let t = xs();
    let c = parse_circuit("; leading\n(and x1 ; inner\n   x2)\n", &t).unwrap();
    assert_eq!(print_circuit(&c, &t), "(and x1 x2)");
}

#[test]
fn tree_grammar() {
    let t = xs();
    assert_eq!(parse_dtree("1", &t).unwrap(), DecisionTree::Leaf(true));
    let expected = parse_dtree("(x1 0 (x2 0 1))", &t).unwrap();
    assert_eq!(expected.node_count(), 2);
    assert_eq!(print_dtree(&expected, &t), "(x1 0 (x2 0 1))");
    let spaced = parse_dtree("  ( x1\n 0\t(x2 0 1 ) )", &t).unwrap();
    assert_eq!(print_dtree(&spaced, &t), "(x1 0 (x2 0 1))");
    assert!(parse_dtree("2", &t).is_err());
    assert!(parse_dtree("(x1 0)", &t).is_err());
    assert!(parse_dtree("(zz 0 1)", &t).is_err());
    assert!(parse_dtree("((x1) 0 1)", &t).is_err());
}

#[test]
fn declaring_trees() {
    let mut t = VarTable::new();
    let tree = parse_dtree_declaring("(b (a 0 1) 1)", &mut t).unwrap();
    assert_eq!(t.len(), 2);
    assert_eq!(print_dtree(&tree, &t), "(b (a 0 1) 1)");
    assert!(parse_dtree_declaring("(not 0 1)", &mut t).is_err());
}

#[test]
fn problem_file_sections() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/credit_forest.problem"
    ))
    .unwrap();
    let p = parse_problem(&text).unwrap();
    assert_eq!(p.problem.features().len(), 3);
    assert_eq!(p.forest.unwrap().trees().len(), 3);
    let err = parse_problem("(features a)\n(labels y)\n(sigma y)\n").unwrap_err();
    assert!(
        err.to_string().contains("missing section `theory`"),
        "{err}"
    );
}
