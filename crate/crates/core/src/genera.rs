//! Multiplicative sequences in Pontrjagin classes.
//!
//! A characteristic series `Q(z) = 1 + q₁z + q₂z² + …` (with `z` the square of a
//! formal root) determines polynomials `K_n(p₁, …, p_n)` through
//! `Σ K_n = Π_i Q(z_i)`, the `p_j` being elementary symmetric in the `z_i`.
//! They are computed root-free: `log Q = Σ c_j z^j`, so
//! `log Σ K_n = Σ c_j s_j` with `s_j` the power sums, which Newton's identities
//! express in the `p_j`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::ring::RingSpec;
use crate::series::{cosh, sinh_over_u, PowerSeries};

/// A power series with constant term 1 in `z`, the square of a formal root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicSeries(PowerSeries);

impl CharacteristicSeries {
    pub fn new(q: PowerSeries) -> Result<Self> {
        if !q.coeff(0).is_one() {
            return Err(Error::usage("characteristic series must start with 1"));
        }
        Ok(CharacteristicSeries(q))
    }

    pub fn series(&self) -> &PowerSeries {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.coeff(i)
    }
}

/// Series of `√z / tanh √z`, valid through `z^n`.
pub fn char_series_l(n: usize) -> CharacteristicSeries {
    // u·cosh(u)/sinh(u) = cosh(u) / (sinh(u)/u), even in u; then u² = z.
    let order = 2 * n + 1;
    let q = cosh(order)
        .div(&sinh_over_u(order))
        .and_then(|s| s.even_substitute(&Rational::one()))
        .expect("sinh(u)/u is a unit and the quotient is even");
    CharacteristicSeries(q)
}

/// Series of `(√z/2) / sinh(√z/2)`, valid through `z^n`.
pub fn char_series_ahat(n: usize) -> CharacteristicSeries {
    // u/sinh(u) with u = √z/2, i.e. u² = z/4.
    let order = 2 * n + 1;
    let q = PowerSeries::one(order)
        .div(&sinh_over_u(order))
        .and_then(|s| s.even_substitute(&Rational::new(BigInt::one(), BigInt::from(4))))
        .expect("sinh(u)/u is a unit and the quotient is even");
    CharacteristicSeries(q)
}

/// `K_0 = 1, K_1, …, K_N` as polynomials in `p1..pN` with `weight(p_j) = j`.
#[derive(Debug, Clone)]
pub struct MultiplicativeSequence {
    ring: Arc<RingSpec>,
    terms: Vec<Polynomial>,
}

/// Ring `ℚ[p1, …, pN]` with `weight(p_j) = j`.
pub fn pontrjagin_ring(n: usize) -> Arc<RingSpec> {
    let names: Vec<String> = (1..=n).map(|j| format!("p{j}")).collect();
    let weights: Vec<u32> = (1..=n as u32).collect();
    RingSpec::new(&names, &weights).expect("distinct generated names")
}

/// Power sums `s_1..s_n` of the roots written in the elementary symmetric
/// functions `p_j` via Newton's identities.
pub fn power_sums(ring: &Arc<RingSpec>, n: usize) -> Result<Vec<Polynomial>> {
    let p = |j: usize| Polynomial::var(ring, &format!("p{j}"));
    let mut s: Vec<Polynomial> = Vec::with_capacity(n + 1);
    s.push(Polynomial::zero(ring)); // s_0 unused
    for j in 1..=n {
        // s_j = Σ_{i<j} (-1)^{i-1} p_i s_{j-i} + (-1)^{j-1} j p_j
        let mut acc = p(j)?.scale(&Rational::from_integer(BigInt::from(j as i64)));
        if j % 2 == 0 {
            acc = acc.neg();
        }
        for i in 1..j {
            let t = p(i)?.mul(&s[j - i])?;
            acc = if i % 2 == 1 { acc.add(&t)? } else { acc.sub(&t)? };
        }
        s.push(acc);
    }
    Ok(s)
}

pub fn multiplicative_sequence(q: &CharacteristicSeries, n: usize) -> Result<MultiplicativeSequence> {
    if q.0.order() < n {
        return Err(Error::usage(format!(
            "series known through z^{} but degree {n} requested",
            q.0.order()
        )));
    }
    let ring = pontrjagin_ring(n);
    let log_q = PowerSeries::new(q.0.coeffs().to_vec(), n).log()?;
    let s = power_sums(&ring, n)?;
    let mut f = Polynomial::zero(&ring);
    for (j, sj) in s.iter().enumerate().skip(1) {
        f = f.add(&sj.scale(&log_q.coeff(j)))?;
    }
    // exp(f) truncated above weighted degree n; f has no constant term.
    let mut total = Polynomial::one(&ring);
    let mut power = Polynomial::one(&ring);
    for m in 1..=n {
        power = power
            .mul_truncated(&f, n as u64)?
            .scale(&Rational::new(BigInt::one(), BigInt::from(m as i64)));
        if power.is_zero() {
            break;
        }
        total = total.add(&power)?;
    }
    let terms = (0..=n).map(|k| total.homogeneous_part(k as u64)).collect();
    Ok(MultiplicativeSequence { ring, terms })
}

pub fn l_genus(n: usize) -> Result<MultiplicativeSequence> {
    multiplicative_sequence(&char_series_l(n), n)
}

pub fn ahat_genus(n: usize) -> Result<MultiplicativeSequence> {
    multiplicative_sequence(&char_series_ahat(n), n)
}

impl MultiplicativeSequence {
    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    /// Highest degree `N` available.
    pub fn degree(&self) -> usize {
        self.terms.len() - 1
    }

    /// `K_n`; zero beyond the computed range is not implied, so this panics there.
    pub fn get(&self, n: usize) -> &Polynomial {
        &self.terms[n]
    }

    pub fn terms(&self) -> &[Polynomial] {
        &self.terms
    }

    /// `Σ_n K_n`.
    pub fn total(&self) -> Polynomial {
        let mut acc = Polynomial::zero(&self.ring);
        for t in &self.terms {
            acc = acc.add(t).expect("same ring");
        }
        acc
    }

    /// Replaces `K_n` (test fixtures only need this to simulate corruption).
    #[doc(hidden)]
    pub fn perturb(&mut self, n: usize, k: Polynomial) {
        self.terms[n] = k;
    }
}
