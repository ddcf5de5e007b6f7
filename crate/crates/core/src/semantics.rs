//! Brute-force model theory: evaluation, model enumeration, entailment,
//! equivalence and forgetting.
//!
//! Everything here enumerates assignments and is therefore exponential in
//! the number of variables involved. [`Enumerator`] carries the cap that
//! guards against accidental blow-up.

use std::collections::BTreeSet;

use crate::circuit::{Circuit, Literal, Term, Var};
use crate::error::{Error, Result};

/// Default limit on the number of variables enumerated.
pub const DEFAULT_MAX_VARS: usize = 20;

/// A total assignment over an ordered set of variables.
///
/// Printed as a bit word under the declared order, so `110` over
/// `[x1, x2, x3]` means `x1 = 1, x2 = 1, x3 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    order: Vec<Var>,
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(order: Vec<Var>, bits: Vec<bool>) -> Result<Self> {
        if order.len() != bits.len() {
            return Err(Error::InvalidInstance(format!(
                "{} values for {} variables",
                bits.len(),
                order.len()
            )));
        }
        let distinct: BTreeSet<_> = order.iter().collect();
        if distinct.len() != order.len() {
            return Err(Error::InvalidInstance("repeated variable".into()));
        }
        Ok(Assignment { order, bits })
    }

    /// The `index`-th assignment in lexicographic word order: the first
    /// variable is the most significant bit.
    pub fn from_index(order: &[Var], index: u64) -> Self {
        let n = order.len();
        let bits = (0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1).collect();
        Assignment {
            order: order.to_vec(),
            bits,
        }
    }

    pub fn from_word(order: &[Var], word: &str) -> Result<Self> {
        if word.len() != order.len() {
            return Err(Error::InvalidInstance(word.to_string()));
        }
        let bits = word
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidInstance(word.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Assignment::new(order.to_vec(), bits)
    }

    /// A canonical term over `order`: every variable must be mentioned.
    pub fn from_term(order: &[Var], term: &Term) -> Result<Self> {
        if term.len() != order.len() {
            return Err(Error::InvalidInstance(
                "term is not canonical over the variable set".into(),
            ));
        }
        let bits = order
            .iter()
            .map(|&v| {
                term.value(v)
                    .ok_or_else(|| Error::InvalidInstance(format!("{v} missing from term")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Assignment {
            order: order.to_vec(),
            bits,
        })
    }

    pub fn vars(&self) -> &[Var] {
        &self.order
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.order
            .iter()
            .position(|&v| v == var)
            .map(|i| self.bits[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.order.iter().copied().zip(self.bits.iter().copied())
    }

    pub fn word(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    pub fn to_term(&self) -> Term {
        Term::new(self.iter().map(|(var, positive)| Literal { var, positive }))
            .expect("assignment variables are distinct")
    }

    /// Concatenation of two assignments over disjoint variable sets.
    pub fn join(&self, other: &Assignment) -> Result<Assignment> {
        let mut order = self.order.clone();
        order.extend_from_slice(&other.order);
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Assignment::new(order, bits)
    }
}

/// Evaluates `phi` under `omega`, which must assign every variable of `phi`.
pub fn eval(phi: &Circuit, omega: &Assignment) -> Result<bool> {
    phi.eval_with(|v| omega.get(v))
}

/// Brute-force decision procedures, bounded by a variable cap.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Enumerator {
    pub max_vars: usize,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator {
            max_vars: DEFAULT_MAX_VARS,
        }
    }
}

impl Enumerator {
    pub fn new(max_vars: usize) -> Self {
        Enumerator { max_vars }
    }

    pub fn check_cap(&self, vars: usize) -> Result<()> {
        if vars > self.max_vars {
            Err(Error::CapExceeded {
                vars,
                cap: self.max_vars,
            })
        } else {
            Ok(())
        }
    }

    /// Truth table of `phi` over `over`, indexed like
    /// [`Assignment::from_index`].
    pub fn truth_table(&self, phi: &Circuit, over: &[Var]) -> Result<Vec<bool>> {
        self.check_cap(over.len())?;
        let vars = phi.vars();
        if let Some(v) = vars.iter().find(|v| !over.contains(v)) {
            return Err(Error::ForeignVariables(v.to_string()));
        }
        let width = over.iter().map(|v| v.index() + 1).max().unwrap_or(0);
        let mut values = vec![false; width];
        let mut buf = Vec::with_capacity(phi.gate_count());
        let n = over.len();
        let rows = 1u64 << n;
        let mut table = Vec::with_capacity(rows as usize);
        for index in 0..rows {
            for (i, v) in over.iter().enumerate() {
                values[v.index()] = (index >> (n - 1 - i)) & 1 == 1;
            }
            table.push(phi.eval_dense(&values, &mut buf));
        }
        Ok(table)
    }

    /// All models of `phi` over `over`, in lexicographic word order.
    pub fn models(&self, phi: &Circuit, over: &[Var]) -> Result<Vec<Assignment>> {
        Ok(self
            .truth_table(phi, over)?
            .into_iter()
            .enumerate()
            .filter(|(_, b)| *b)
            .map(|(i, _)| Assignment::from_index(over, i as u64))
            .collect())
    }

    pub fn count_models(&self, phi: &Circuit, over: &[Var]) -> Result<usize> {
        Ok(self
            .truth_table(phi, over)?
            .into_iter()
            .filter(|b| *b)
            .count())
    }

    pub fn is_consistent(&self, phi: &Circuit) -> Result<bool> {
        if let Some(b) = phi.as_const() {
            return Ok(b);
        }
        let over: Vec<Var> = phi.vars().into_iter().collect();
        Ok(self.truth_table(phi, &over)?.into_iter().any(|b| b))
    }

    /// `a |= b`: every model of `a` over the joint variables satisfies `b`.
    pub fn entails(&self, a: &Circuit, b: &Circuit) -> Result<bool> {
        let over = union_vars(a, b);
        let ta = self.truth_table(a, &over)?;
        let tb = self.truth_table(b, &over)?;
        Ok(ta.iter().zip(&tb).all(|(&x, &y)| !x || y))
    }

    /// Same models over the union of both variable sets.
    pub fn equivalent(&self, a: &Circuit, b: &Circuit) -> Result<bool> {
        let over = union_vars(a, b);
        Ok(self.truth_table(a, &over)? == self.truth_table(b, &over)?)
    }
}

fn union_vars(a: &Circuit, b: &Circuit) -> Vec<Var> {
    let mut vs = a.vars();
    vs.extend(b.vars());
    vs.into_iter().collect()
}

/// Existential quantification of `vs`, one variable at a time:
/// `exists v. phi == phi[v := 0] | phi[v := 1]`.
pub fn forget(phi: &Circuit, vs: &[Var]) -> Circuit {
    vs.iter().fold(phi.clone(), |acc, &v| {
        let low = acc.condition_lit(Literal::neg(v));
        let high = acc.condition_lit(Literal::pos(v));
        low.disjoin(&high)
    })
}
