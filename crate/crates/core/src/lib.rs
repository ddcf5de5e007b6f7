//! Rectification of Boolean classifiers by background knowledge.
//!
//! A mono-label classifier is a circuit `Σ` over features `X` and a label
//! `y` that assigns exactly one class to every instance. Given a theory `T`
//! the expert trusts, [`rectify::rectify`] builds the unique classifier that
//! agrees with `T` wherever `T` decides the class and with `Σ` everywhere
//! else, in time linear in `|Σ| + |T|`. [`dtree`] runs the same
//! construction on decision trees and random forests; [`verify`] holds the
//! brute-force oracles the construction is checked against.

pub mod circuit;
pub mod classifier;
pub mod dtree;
pub mod error;
pub mod formats;
pub mod gen;
pub mod rectify;
pub mod semantics;
pub mod verify;

pub use circuit::{Circuit, Literal, Term, Var, VarTable};
pub use classifier::{ClassificationProblem, Classifier, Instance};
pub use dtree::{DecisionTree, RandomForest};
pub use error::{Error, Result};
pub use rectify::{rectify, RectificationResult};
pub use semantics::{Assignment, Enumerator};
