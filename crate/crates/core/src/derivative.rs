//! Boolean derivatives and CA Jacobian matrices.
//!
//! The derivative of a rule with respect to one of its three inputs is again
//! a rule: the XOR of the outputs at a point and at that point with the
//! chosen input flipped. The Jacobian of an n-cell CA is the n x n array
//! whose (i, j) entry is the derivative of cell i's rule with respect to the
//! neighborhood slot reading cell j — the zero rule when cell j is outside
//! cell i's neighborhood, so the array is tri-diagonal apart from the two
//! wrap-around corners in the periodic case. Evaluating every entry at a
//! concrete state yields an ordinary binary matrix; when every entry is
//! constant the CA is affine and that single matrix works for all states.

use std::fmt;

use crate::ca::{Boundary, CaConfig};
use crate::gf2::{BitVec, Gf2Matrix};
use crate::rule::{Rule, Var};
use crate::Error;

/// Derivative of `f` with respect to `var`: the truth table of
/// `f(v) XOR f(v with var flipped)`. The result never depends on `var`.
pub fn derivative(f: Rule, var: Var) -> Rule {
    let mask = var.mask();
    let mut table = 0u8;
    for v in 0..8u8 {
        if f.truth_bit(v) ^ f.truth_bit(v ^ mask) {
            table |= 1 << v;
        }
    }
    Rule::new(table)
}

/// Partial evaluation: pins `var` to `value`, leaving a rule that ignores
/// that input.
pub fn restrict(f: Rule, var: Var, value: bool) -> Rule {
    let mask = var.mask();
    let mut table = 0u8;
    for v in 0..8u8 {
        let pinned = if value { v | mask } else { v & !mask };
        if f.truth_bit(pinned) {
            table |= 1 << v;
        }
    }
    Rule::new(table)
}

/// The Jacobian of a CA: per-cell, per-neighbor derivative rules.
///
/// Each entry is a full 3-variable rule to be evaluated at the neighborhood
/// of its row's cell. With null boundaries the outermost cells' rules are
/// pinned to the 0 boundary before differentiation, so the boundary slot
/// never appears as a column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jacobian {
    n: usize,
    boundary: Boundary,
    entries: Vec<Rule>, // row-major n*n
}

/// Builds the Jacobian of `ca`.
pub fn jacobian(ca: &CaConfig) -> Jacobian {
    let n = ca.len();
    let zero = Rule::new(0);
    let mut entries = vec![zero; n * n];
    for i in 0..n {
        let mut f = ca.rule_at(i);
        if ca.boundary() == Boundary::Null {
            if i == 0 {
                f = restrict(f, Var::X, false);
            }
            if i == n - 1 {
                f = restrict(f, Var::Z, false);
            }
        }
        let mut put = |j: usize, var: Var| entries[i * n + j] = derivative(f, var);
        match ca.boundary() {
            Boundary::Null => {
                if i > 0 {
                    put(i - 1, Var::X);
                }
                put(i, Var::Y);
                if i + 1 < n {
                    put(i + 1, Var::Z);
                }
            }
            Boundary::Periodic => {
                put((i + n - 1) % n, Var::X);
                put(i, Var::Y);
                put((i + 1) % n, Var::Z);
            }
        }
    }
    Jacobian {
        n,
        boundary: ca.boundary(),
        entries,
    }
}

impl Jacobian {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn entry(&self, i: usize, j: usize) -> Rule {
        self.entries[i * self.n + j]
    }

    /// Substitutes a state into every entry, producing a binary matrix.
    pub fn evaluate(&self, s: &BitVec) -> Result<Gf2Matrix, Error> {
        if s.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: s.len(),
            });
        }
        // Entry (i, j) is a function of cell i's neighborhood.
        let ca = CaConfig::hybrid(vec![Rule::new(0); self.n], self.boundary)
            .expect("n >= 3 by construction");
        let rows = (0..self.n)
            .map(|i| {
                let v = ca.neighborhood(s, i);
                let bits: Vec<bool> = (0..self.n).map(|j| self.entry(i, j).truth_bit(v)).collect();
                BitVec::from_bits(&bits)
            })
            .collect();
        Ok(Gf2Matrix::from_rows(rows).expect("square by construction"))
    }

    /// The single constant matrix, when every entry is a constant rule.
    /// Present exactly when every cell rule is affine.
    pub fn constant(&self) -> Option<Gf2Matrix> {
        let mut rows = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut bits = Vec::with_capacity(self.n);
            for j in 0..self.n {
                match self.entry(i, j).id() {
                    0 => bits.push(false),
                    255 => bits.push(true),
                    _ => return None,
                }
            }
            rows.push(BitVec::from_bits(&bits));
        }
        Some(Gf2Matrix::from_rows(rows).expect("square by construction"))
    }
}

impl fmt::Display for Jacobian {
    /// One line per row; constant entries print as '0'/'1', anything else
    /// as its ANF string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                match self.entry(i, j).id() {
                    0 => write!(f, "0")?,
                    255 => write!(f, "1")?,
                    _ => write!(f, "{}", self.entry(i, j).anf_string())?,
                }
            }
        }
        Ok(())
    }
}

/// The constant Jacobian matrix of `ca`, when one exists.
pub fn constant_jacobian(ca: &CaConfig) -> Option<Gf2Matrix> {
    jacobian(ca).constant()
}
