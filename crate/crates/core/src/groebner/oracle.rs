//! Degree-truncated ideal membership by linear algebra.
//!
//! Independent of the Buchberger engine: every product `m·g_i` with total degree
//! at most the bound becomes a row of a Macaulay matrix, and `p` is tested for
//! membership in the row span by exact elimination over ℚ.

use rustc_hash::FxHashMap;

use num_traits::Zero;

use super::Ideal;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::ring::Monomial;

const MAX_VARS: usize = 4;
const MAX_BOUND: u64 = 8;

fn monomials_up_to(nvars: usize, bound: u64) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, nvars: usize, left: u64, out: &mut Vec<Monomial>) {
        if prefix.len() == nvars {
            out.push(Monomial::from_exponents(prefix).unwrap());
            return;
        }
        for e in 0..=left {
            prefix.push(e as u32);
            rec(prefix, nvars, left - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), nvars, bound, &mut out);
    out
}

/// Row-echelon form kept as rows keyed by their pivot column.
struct Echelon {
    ncols: usize,
    rows: FxHashMap<usize, Vec<Rational>>,
}

impl Echelon {
    /// Reduces `v` against the stored rows; returns the residue.
    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for col in 0..self.ncols {
            if v[col].is_zero() {
                continue;
            }
            if let Some(r) = self.rows.get(&col) {
                let f = v[col].clone();
                for (x, y) in v.iter_mut().zip(r).skip(col) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<Rational>) {
        let v = self.reduce(v);
        if let Some(pivot) = v.iter().position(|c| !c.is_zero()) {
            let inv = v[pivot].recip();
            let v: Vec<Rational> = v.into_iter().map(|c| c * &inv).collect();
            self.rows.insert(pivot, v);
        }
    }
}

/// Whether `p` is a combination `Σ h_i g_i` with every `deg(h_i g_i) ≤ degree_bound`.
///
/// Restricted to at most 4 variables and degree bound 8.
pub fn membership_oracle(p: &Polynomial, ideal: &Ideal, degree_bound: u64) -> Result<bool> {
    let ring = ideal.ring();
    let n = ring.nvars();
    if n > MAX_VARS || degree_bound > MAX_BOUND {
        return Err(Error::TooLarge(format!(
            "{n} variables, degree bound {degree_bound} (limits {MAX_VARS}, {MAX_BOUND})"
        )));
    }
    if **p.ring() != **ring {
        return Err(Error::usage("polynomial and ideal live in different rings"));
    }
    if p.is_zero() {
        return Ok(true);
    }
    if p.total_degree() > degree_bound {
        return Ok(false);
    }
    let cols = monomials_up_to(n, degree_bound);
    let index: FxHashMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let dense = |q: &Polynomial| {
        let mut v = vec![Rational::zero(); cols.len()];
        for (m, c) in q.terms() {
            v[index[m]] = c.clone();
        }
        v
    };
    let mut ech = Echelon {
        ncols: cols.len(),
        rows: FxHashMap::default(),
    };
    for g in ideal.generators() {
        let dg = g.total_degree();
        if dg > degree_bound {
            continue;
        }
        for m in &cols {
            if m.total_degree() + dg <= degree_bound {
                let row = g.mul_monomial(m, &Rational::from_integer(1.into()))?;
                ech.insert(dense(&row));
            }
        }
    }
    Ok(ech.reduce(dense(p)).iter().all(Zero::is_zero))
}
