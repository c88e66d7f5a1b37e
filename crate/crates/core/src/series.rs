//! Truncated formal power series over ℚ.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `Σ_{i ≤ order} c_i t^i`; terms above `order` are unknown and never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
    order: usize,
}

impl PowerSeries {
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, Rational::zero());
        PowerSeries { coeffs, order }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        PowerSeries {
            coeffs: (0..=order).map(f).collect(),
            order,
        }
    }

    pub fn one(order: usize) -> Self {
        Self::from_fn(order, |i| if i == 0 { Rational::one() } else { Rational::zero() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order.min(other.order);
        Self::from_fn(order, |i| &self.coeffs[i] + &other.coeffs[i])
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order.min(other.order);
        Self::from_fn(order, |i| &self.coeffs[i] - &other.coeffs[i])
    }

    pub fn scale(&self, c: &Rational) -> PowerSeries {
        Self::from_fn(self.order, |i| &self.coeffs[i] * c)
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order.min(other.order);
        Self::from_fn(order, |n| {
            (0..=n).fold(Rational::zero(), |acc, k| {
                acc + &self.coeffs[k] * &other.coeffs[n - k]
            })
        })
    }

    pub fn div(&self, other: &PowerSeries) -> Result<PowerSeries> {
        let b0 = &other.coeffs[0];
        if b0.is_zero() {
            return Err(Error::usage("series division by a non-unit"));
        }
        let order = self.order.min(other.order);
        let inv = b0.recip();
        let mut q: Vec<Rational> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for k in 1..=n {
                acc -= &other.coeffs[k] * &q[n - k];
            }
            q.push(acc * &inv);
        }
        Ok(PowerSeries { coeffs: q, order })
    }

    fn derivative(&self) -> Vec<Rational> {
        (1..=self.order)
            .map(|i| &self.coeffs[i] * Rational::from_integer(BigInt::from(i)))
            .collect()
    }

    pub fn log(&self) -> Result<PowerSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::usage("series log requires constant term 1"));
        }
        if self.order == 0 {
            return Ok(Self::new(vec![], 0));
        }
        // log(a)' = a'/a
        let d = PowerSeries::new(self.derivative(), self.order - 1);
        let q = d.div(&PowerSeries::new(self.coeffs.clone(), self.order - 1))?;
        Ok(Self::from_fn(self.order, |i| {
            if i == 0 {
                Rational::zero()
            } else {
                &q.coeffs[i - 1] / Rational::from_integer(BigInt::from(i))
            }
        }))
    }

    pub fn exp(&self) -> Result<PowerSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::usage("series exp requires constant term 0"));
        }
        // n e_n = Σ_{k=1}^{n} k a_k e_{n-k}
        let mut e: Vec<Rational> = vec![Rational::one()];
        for n in 1..=self.order {
            let mut acc = Rational::zero();
            for k in 1..=n {
                acc += Rational::from_integer(BigInt::from(k)) * &self.coeffs[k] * &e[n - k];
            }
            e.push(acc / Rational::from_integer(BigInt::from(n)));
        }
        Ok(PowerSeries {
            coeffs: e,
            order: self.order,
        })
    }

    /// For an even series in `u`, returns the series in `z` obtained from `u² = s·z`.
    ///
    /// Odd coefficients must vanish.
    pub fn even_substitute(&self, s: &Rational) -> Result<PowerSeries> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return Err(Error::usage("series is not even"));
        }
        let order = self.order / 2;
        let mut pw = Rational::one();
        let mut out = Vec::with_capacity(order + 1);
        for k in 0..=order {
            out.push(&self.coeffs[2 * k] * &pw);
            pw *= s;
        }
        Ok(PowerSeries { coeffs: out, order })
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `sinh(u)/u = Σ u^{2k}/(2k+1)!` up to `u^order`.
pub fn sinh_over_u(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |i| {
        if i % 2 == 0 {
            Rational::new(BigInt::one(), factorial(i + 1))
        } else {
            Rational::zero()
        }
    })
}

/// `cosh(u) = Σ u^{2k}/(2k)!` up to `u^order`.
pub fn cosh(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |i| {
        if i % 2 == 0 {
            Rational::new(BigInt::one(), factorial(i))
        } else {
            Rational::zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn series(c: &[Rational], order: usize) -> PowerSeries {
        PowerSeries::new(c.to_vec(), order)
    }

    #[test]
    fn exp_log_of_one_plus_z() {
        for order in 0..12 {
            let s = series(&[int(1), int(1)], order);
            assert_eq!(s.log().unwrap().exp().unwrap(), s);
        }
    }

    #[test]
    fn geometric_inverse() {
        let n = 10;
        let one_plus = series(&[int(1), int(1)], n);
        let alt = PowerSeries::from_fn(n, |i| if i % 2 == 0 { int(1) } else { int(-1) });
        assert_eq!(one_plus.mul(&alt), PowerSeries::one(n));
        assert_eq!(PowerSeries::one(n).div(&one_plus).unwrap(), alt);
    }

    #[test]
    fn log_hand_expansion() {
        // log(1+u) = u - u^2/2 + ... with u = z/3 - z^2/45
        let s = series(&[int(1), frac(1, 3), frac(-1, 45)], 2);
        let l = s.log().unwrap();
        assert_eq!(l.coeffs(), &[int(0), frac(1, 3), frac(-7, 90)]);
    }

    #[test]
    fn precondition_errors() {
        let s = series(&[int(2), int(1)], 3);
        assert!(s.log().is_err());
        assert!(s.exp().is_err());
        assert!(series(&[int(0), int(1)], 3).div(&series(&[int(0), int(1)], 3)).is_err());
        assert!(series(&[int(1), int(1)], 3).even_substitute(&int(1)).is_err());
    }

    #[test]
    fn truncation_takes_min_order() {
        let a = series(&[int(1), int(2), int(3)], 2);
        let b = series(&[int(1), int(1), int(1), int(1), int(1)], 4);
        assert_eq!(a.mul(&b).order(), 2);
        assert_eq!(a.add(&b).order(), 2);
    }

    proptest! {
        #[test]
        fn exp_and_log_are_inverse(c in proptest::collection::vec(-9i64..9, 1..7)) {
            let order = c.len();
            let mut coeffs = vec![int(0)];
            coeffs.extend(c.iter().map(|&x| frac(x, 3)));
            let s = PowerSeries::new(coeffs, order);
            let e = s.exp().unwrap();
            prop_assert_eq!(e.log().unwrap(), s);
        }
    }
}
