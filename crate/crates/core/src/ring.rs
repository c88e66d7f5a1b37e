//! Graded variable lists, monomials and monomial orders.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest exponent a single variable may carry.
pub const MAX_EXPONENT: u32 = 1 << 15;

/// How the degree component of a degree-reverse-lexicographic order is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Grading {
    /// Every variable has degree one.
    #[default]
    Standard,
    /// Variables carry the ring weights.
    Weighted,
}

/// Degree-reverse-lexicographic order over an explicit variable permutation.
///
/// `permutation[k]` is the ring index of the variable at position `k`; position 0
/// is the most significant variable, so ties are broken by the *last* position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub grading: Grading,
    pub permutation: Vec<usize>,
}

impl MonomialOrder {
    pub fn degrevlex(nvars: usize) -> Self {
        MonomialOrder {
            grading: Grading::Standard,
            permutation: (0..nvars).collect(),
        }
    }

    pub fn weighted(nvars: usize) -> Self {
        MonomialOrder {
            grading: Grading::Weighted,
            permutation: (0..nvars).collect(),
        }
    }

    pub fn with_permutation(mut self, permutation: Vec<usize>) -> Result<Self> {
        let n = self.permutation.len();
        let mut seen = vec![false; n];
        if permutation.len() != n {
            return Err(Error::usage("permutation length differs from variable count"));
        }
        for &v in &permutation {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::usage("not a permutation of the variables"));
            }
        }
        self.permutation = permutation;
        Ok(self)
    }

    pub fn nvars(&self) -> usize {
        self.permutation.len()
    }

    pub fn degree(&self, exps: &[u16], weights: &[u32]) -> u64 {
        match self.grading {
            Grading::Standard => exps.iter().map(|&e| e as u64).sum(),
            Grading::Weighted => exps
                .iter()
                .zip(weights)
                .map(|(&e, &w)| e as u64 * w as u64)
                .sum(),
        }
    }

    /// Compares two exponent vectors; `Greater` means `a` is the larger monomial.
    pub fn cmp(&self, a: &[u16], b: &[u16], weights: &[u32]) -> Ordering {
        self.degree(a, weights)
            .cmp(&self.degree(b, weights))
            .then_with(|| {
                for &v in self.permutation.iter().rev() {
                    match a[v].cmp(&b[v]) {
                        Ordering::Equal => continue,
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            })
    }

    /// Stable textual descriptor used in cache keys.
    pub fn descriptor(&self) -> String {
        let g = match self.grading {
            Grading::Standard => "standard",
            Grading::Weighted => "weighted",
        };
        let perm: Vec<String> = self.permutation.iter().map(|v| v.to_string()).collect();
        format!("degrevlex[{g}]({})", perm.join(","))
    }
}

/// An ordered list of graded variables together with the order used for
/// canonical printing.
#[derive(Debug, Clone)]
pub struct RingSpec {
    names: Vec<String>,
    weights: Vec<u32>,
    order: MonomialOrder,
}

impl PartialEq for RingSpec {
    /// Rings are interchangeable when they share variables and weights; the order
    /// only affects how terms are listed.
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.weights == other.weights
    }
}

impl Eq for RingSpec {}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RingSpec {
    pub fn new<S: AsRef<str>>(names: &[S], weights: &[u32]) -> Result<Arc<Self>> {
        if names.len() != weights.len() {
            return Err(Error::usage("names and weights differ in length"));
        }
        let mut seen = HashSet::new();
        for n in names {
            let n = n.as_ref();
            if !valid_name(n) {
                return Err(Error::usage(format!("invalid variable name `{n}`")));
            }
            if !seen.insert(n) {
                return Err(Error::usage(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Arc::new(RingSpec {
            names: names.iter().map(|n| n.as_ref().to_owned()).collect(),
            weights: weights.to_vec(),
            order: MonomialOrder::degrevlex(names.len()),
        }))
    }

    /// Ring with every variable of weight one.
    pub fn ungraded<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>> {
        Self::new(names, &vec![1; names.len()])
    }

    pub fn with_order(&self, order: MonomialOrder) -> Result<Arc<Self>> {
        if order.nvars() != self.nvars() {
            return Err(Error::usage("order variable count differs from ring"));
        }
        Ok(Arc::new(RingSpec {
            names: self.names.clone(),
            weights: self.weights.clone(),
            order,
        }))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_owned()))
    }

    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(&a.0, &b.0, &self.weights)
    }

    /// Stable textual descriptor (variables, weights) used in cache keys.
    pub fn descriptor(&self) -> String {
        let vars: Vec<String> = self
            .names
            .iter()
            .zip(&self.weights)
            .map(|(n, w)| format!("{n}:{w}"))
            .collect();
        vars.join(",")
    }
}

/// Exponent vector aligned with a [`RingSpec`]'s variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub(crate) Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        exps.iter()
            .map(|&e| {
                u16::try_from(e)
                    .ok()
                    .filter(|&e| (e as u32) <= MAX_EXPONENT)
                    .ok_or(Error::ExponentOverflow { limit: MAX_EXPONENT })
            })
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0[index] as u32
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| {
                let s = a as u32 + b as u32;
                if s > MAX_EXPONENT {
                    Err(Error::ExponentOverflow { limit: MAX_EXPONENT })
                } else {
                    Ok(s as u16)
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    pub fn display<'a>(&'a self, ring: &'a RingSpec) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, ring }
    }
}

pub struct MonomialDisplay<'a> {
    mono: &'a Monomial,
    ring: &'a RingSpec,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.mono.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(&self.ring.names[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    #[test]
    fn degrevlex_basics() {
        let o = MonomialOrder::degrevlex(3);
        let w = [1, 1, 1];
        // x > y > z
        assert_eq!(o.cmp(&[1, 0, 0], &[0, 1, 0], &w), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 1, 0], &[0, 0, 1], &w), Ordering::Greater);
        // y^2 > x z in degrevlex
        assert_eq!(o.cmp(&[0, 2, 0], &[1, 0, 1], &w), Ordering::Greater);
        // 1 is minimal
        assert_eq!(o.cmp(&[0, 0, 0], &[0, 0, 1], &w), Ordering::Less);
    }

    #[test]
    fn weighted_and_permuted() {
        let w = [3, 1];
        let o = MonomialOrder::weighted(2);
        assert_eq!(o.cmp(&[1, 0], &[0, 2], &w), Ordering::Greater);
        let p = MonomialOrder::degrevlex(2).with_permutation(vec![1, 0]).unwrap();
        assert_eq!(p.cmp(&[1, 0], &[0, 1], &w), Ordering::Less);
        assert!(MonomialOrder::degrevlex(2).with_permutation(vec![0, 0]).is_err());
    }

    #[test]
    fn ring_validation() {
        assert!(RingSpec::new(&["a", "a"], &[1, 1]).is_err());
        assert!(RingSpec::new(&["1a"], &[1]).is_err());
        assert!(RingSpec::new(&["a"], &[1, 2]).is_err());
        let r = RingSpec::new(&["a8", "a12"], &[8, 12]).unwrap();
        assert_eq!(r.var_index("a12").unwrap(), 1);
        assert!(matches!(r.var_index("b"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn monomial_ops() {
        let a = m(&[1, 2, 0]);
        let b = m(&[2, 2, 1]);
        assert!(a.divides(&b));
        assert_eq!(a.quotient_of(&b), Some(m(&[1, 0, 1])));
        assert_eq!(a.lcm(&m(&[0, 3, 1])), m(&[1, 3, 1]));
        assert_eq!(a.weighted_degree(&[8, 12, 4]), 32);
        assert!(m(&[MAX_EXPONENT]).mul(&m(&[1])).is_err());
        assert!(Monomial::from_exponents(&[70000]).is_err());
    }
}
