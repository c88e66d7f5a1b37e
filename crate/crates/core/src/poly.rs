//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ring::{Monomial, RingSpec};

/// A polynomial over a [`RingSpec`].
///
/// Terms are kept sorted in descending ring order with no zero coefficients, so
/// structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Arc<RingSpec>,
    terms: Vec<(Monomial, Rational)>,
}

/// Weighted degree of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degree {
    /// The zero polynomial (degree −∞).
    NegInfinity,
    Homogeneous(u64),
    Inhomogeneous(BTreeSet<u64>),
}

/// Value assigned to a variable by [`Polynomial::substitute`].
#[derive(Debug, Clone)]
pub enum SubstValue {
    Const(Rational),
    Poly(Polynomial),
}

impl From<Rational> for SubstValue {
    fn from(r: Rational) -> Self {
        SubstValue::Const(r)
    }
}

impl From<Polynomial> for SubstValue {
    fn from(p: Polynomial) -> Self {
        SubstValue::Poly(p)
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<RingSpec>, c: Rational) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn monomial(ring: &Arc<RingSpec>, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.0.len(), ring.nvars(), "monomial length differs from ring");
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Arc<RingSpec>, name: &str) -> Result<Self> {
        let i = ring.var_index(name)?;
        Ok(Self::monomial(
            ring,
            Monomial::var(ring.nvars(), i),
            Rational::one(),
        ))
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms(
        ring: &Arc<RingSpec>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in terms {
            assert_eq!(m.0.len(), ring.nvars(), "monomial length differs from ring");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<RingSpec>, acc: FxHashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| ring.cmp_monomials(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    /// Terms in descending ring order.
    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::usage(format!(
                "ring mismatch: [{}] vs [{}]",
                self.ring.descriptor(),
                other.ring.descriptor()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(Self::from_terms(
            &self.ring,
            self.terms.iter().chain(&other.terms).cloned(),
        ))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(Self::from_terms(
            &self.ring,
            self.terms
                .iter()
                .cloned()
                .chain(other.terms.iter().map(|(m, c)| (m.clone(), -c))),
        ))
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)?).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Ok(Self::from_map(&self.ring, acc))
    }

    /// Product keeping only terms of weighted degree at most `max_degree`.
    pub fn mul_truncated(&self, other: &Polynomial, max_degree: u64) -> Result<Polynomial> {
        self.check_ring(other)?;
        let w = self.ring.weights();
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (ma, ca) in &self.terms {
            let da = ma.weighted_degree(w);
            if da > max_degree {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.weighted_degree(w) > max_degree {
                    continue;
                }
                *acc.entry(ma.mul(mb)?).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Ok(Self::from_map(&self.ring, acc))
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Result<Polynomial> {
        if c.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        // Multiplying by a monomial preserves the term order.
        let terms = self
            .terms
            .iter()
            .map(|(t, a)| Ok((t.mul(m)?, a * c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn pow(&self, mut e: u32) -> Result<Polynomial> {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn weighted_degree(&self) -> Degree {
        let w = self.ring.weights();
        let degrees: BTreeSet<u64> = self
            .terms
            .iter()
            .map(|(m, _)| m.weighted_degree(w))
            .collect();
        match degrees.len() {
            0 => Degree::NegInfinity,
            1 => Degree::Homogeneous(*degrees.iter().next().unwrap()),
            _ => Degree::Inhomogeneous(degrees),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        !matches!(self.weighted_degree(), Degree::Inhomogeneous(_))
    }

    /// The weighted-degree-`d` component.
    pub fn homogeneous_part(&self, d: u64) -> Polynomial {
        let w = self.ring.weights();
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weighted_degree(w) == d)
                .cloned()
                .collect(),
        }
    }

    /// Maximum total (unweighted) degree over all terms; 0 for constants and zero.
    pub fn total_degree(&self) -> u64 {
        self.terms
            .iter()
            .map(|(m, _)| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Whether variable `index` occurs in some term.
    pub fn involves(&self, index: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.0[index] > 0)
    }

    /// Simultaneous substitution; unassigned variables pass through unchanged.
    pub fn substitute<S: AsRef<str>>(
        &self,
        assignments: impl IntoIterator<Item = (S, SubstValue)>,
    ) -> Result<Polynomial> {
        let n = self.ring.nvars();
        let mut values: Vec<Option<Polynomial>> = vec![None; n];
        for (name, value) in assignments {
            let i = self.ring.var_index(name.as_ref())?;
            let p = match value {
                SubstValue::Const(c) => Self::constant(&self.ring, c),
                SubstValue::Poly(p) => {
                    self.check_ring(&p)?;
                    p
                }
            };
            values[i] = Some(p);
        }
        // powers[i][k] = value_i^k, filled lazily
        let mut powers: Vec<Vec<Polynomial>> = vec![Vec::new(); n];
        let mut acc = Self::zero(&self.ring);
        let mut pieces = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let mut factor = Self::constant(&self.ring, c.clone());
            for i in 0..n {
                let Some(v) = &values[i] else { continue };
                let e = m.0[i] as usize;
                rest.0[i] = 0;
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                if pw.is_empty() {
                    pw.push(Self::one(&self.ring));
                }
                while pw.len() <= e {
                    let next = pw.last().unwrap().mul(v)?;
                    pw.push(next);
                }
                factor = factor.mul(&pw[e])?;
            }
            pieces.push(factor.mul_monomial(&rest, &Rational::one())?);
        }
        let mut terms = Vec::new();
        for p in pieces {
            terms.extend(p.terms);
        }
        if !terms.is_empty() {
            acc = Self::from_terms(&self.ring, terms);
        }
        Ok(acc)
    }

    /// Re-expresses the polynomial in `target`, matching variables by name.
    ///
    /// Fails with [`Error::UnknownVariable`] if a variable that occurs has no
    /// counterpart in `target`.
    pub fn map_into(&self, target: &Arc<RingSpec>) -> Result<Polynomial> {
        let mut index = Vec::with_capacity(self.ring.nvars());
        for name in self.ring.names() {
            index.push(target.index_of(name));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = vec![0u16; target.nvars()];
            for (i, &x) in m.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match index[i] {
                    Some(j) => e[j] = x,
                    None => return Err(Error::UnknownVariable(self.ring.names()[i].clone())),
                }
            }
            terms.push((Monomial(e), c.clone()));
        }
        Ok(Self::from_terms(target, terms))
    }

    /// Re-sorts terms under `ring`'s order; `ring` must have the same variables.
    pub fn reorder(&self, ring: &Arc<RingSpec>) -> Result<Polynomial> {
        if **ring != *self.ring {
            return Err(Error::usage("reorder requires identical variables"));
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| ring.cmp_monomials(&b.0, &a.0));
        Ok(Polynomial {
            ring: ring.clone(),
            terms,
        })
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn parse(text: &str, ring: &Arc<RingSpec>) -> Result<Polynomial> {
        crate::parse::parse_polynomial(text, ring)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", m.display(&self.ring))?;
            } else {
                write!(f, "{a}*{}", m.display(&self.ring))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn ring() -> Arc<RingSpec> {
        RingSpec::new(&["a8", "a12", "x", "P1", "P2"], &[8, 12, 4, 0, 0]).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, &ring()).unwrap()
    }

    #[test]
    fn add_examples() {
        let q = p("a8 + 3*a12*x");
        assert_eq!(q.add(&Polynomial::zero(&ring())).unwrap(), q);
        assert!(p("x").add(&p("-x")).unwrap().is_zero());
        assert_eq!(p("a8 + a12").add(&p("a8")).unwrap(), p("2*a8 + a12"));
    }

    #[test]
    fn mul_examples() {
        let q = p("a8 - 1/2*x^2");
        assert_eq!(q.mul(&Polynomial::one(&ring())).unwrap(), q);
        assert_eq!(
            p("a8 + a12").pow(2).unwrap(),
            p("a8^2 + 2*a8*a12 + a12^2")
        );
    }

    #[test]
    fn ring_mismatch_is_usage_error() {
        let other = RingSpec::new(&["y"], &[1]).unwrap();
        let y = Polynomial::var(&other, "y").unwrap();
        assert!(matches!(p("x").add(&y), Err(Error::Usage(_))));
        assert!(matches!(p("x").mul(&y), Err(Error::Usage(_))));
    }

    #[test]
    fn substitute_examples() {
        let r = ring();
        let two = |v: Rational| vec![("P1", SubstValue::Const(v))];
        assert_eq!(p("P1^2").substitute(two(int(2))).unwrap(), p("4"));
        assert_eq!(
            p("P1*x + a8").substitute(two(int(3))).unwrap(),
            p("3*x + a8")
        );
        let p2 = p("45/7 + 1/7*P1^2");
        assert_eq!(
            p("7*P2 - P1^2")
                .substitute([("P2", SubstValue::Poly(p2))])
                .unwrap(),
            p("45")
        );
        assert!(matches!(
            p("x").substitute([("Q", SubstValue::Const(int(1)))]),
            Err(Error::UnknownVariable(_))
        ));
        // simultaneous, not sequential
        let swapped = p("a8 - x")
            .substitute([
                ("a8", SubstValue::Poly(Polynomial::var(&r, "x").unwrap())),
                ("x", SubstValue::Poly(Polynomial::var(&r, "a8").unwrap())),
            ])
            .unwrap();
        assert_eq!(swapped, p("x - a8"));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(p("a8").weighted_degree(), Degree::Homogeneous(8));
        assert_eq!(p("a8*a12").weighted_degree(), Degree::Homogeneous(20));
        assert_eq!(
            p("a8 + a12").weighted_degree(),
            Degree::Inhomogeneous([8, 12].into_iter().collect())
        );
        assert_eq!(p("0").weighted_degree(), Degree::NegInfinity);
    }

    #[test]
    fn render_is_sorted_and_signed() {
        assert_eq!(p("x + a8^2 - 1/3").to_string(), "a8^2 + x - 1/3");
        assert_eq!(p("-x*a8").to_string(), "-a8*x");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("2/4*P1").to_string(), "1/2*P1");
    }

    #[test]
    fn map_into_projects_by_name() {
        let small = RingSpec::new(&["x", "a8"], &[4, 8]).unwrap();
        let q = p("a8*x + 2").map_into(&small).unwrap();
        assert_eq!(q.to_string(), "x*a8 + 2");
        assert!(p("P1").map_into(&small).is_err());
        assert_eq!(p("1/2").constant_value(), Some(frac(1, 2)));
    }
}
