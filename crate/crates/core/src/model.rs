//! Algebraic model of the universal fibration with fibre ℍP².
//!
//! Base ring `B = ℚ[a8, a12, p1_0, p2_0, p2_1, p3_0, p3_1, p3_2]` (weights
//! 8, 12, 4, 8, 4, 12, 8, 4) extended by the weight-0 parameters `P1`, `P2`, and
//! total space `B[x]/(x³ + a8·x + a12)` with `weight(x) = 4`. Elements of the
//! total space are stored reduced as `c0 + c1·x + c2·x²`, and fibre integration
//! reads off `c2`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::genera::{l_genus, MultiplicativeSequence};
use crate::poly::{Degree, Polynomial, SubstValue};
use crate::rational::Rational;
use crate::ring::{Monomial, RingSpec};

/// Base-ring variables in canonical order, then the parameters.
pub const BASE_VARS: [&str; 8] = ["a8", "a12", "p1_0", "p2_0", "p2_1", "p3_0", "p3_1", "p3_2"];
pub const BASE_WEIGHTS: [u32; 8] = [8, 12, 4, 8, 4, 12, 8, 4];
pub const PARAMS: [&str; 2] = ["P1", "P2"];

/// Fibre dimension of ℍP²; κ_c has degree `|c| − FIBRE_DIM`.
pub const FIBRE_DIM: u64 = 8;

/// How the x²-coefficient of `p2` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `(45 + P1²)/7`, forced by the signature theorem.
    Signature,
    /// An independent parameter `P2`.
    Free,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Signature => "signature",
            Mode::Free => "free",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "signature" => Ok(Mode::Signature),
            "free" => Ok(Mode::Free),
            _ => Err(Error::usage(format!("unknown mode `{s}`"))),
        }
    }
}

/// Value of `p4` when restricting genus polynomials to rank-8 bundles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum P4Mode {
    /// `p4 = e²`.
    #[default]
    EulerSquared,
    /// `p4 = 0`.
    Zero,
}

impl fmt::Display for P4Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            P4Mode::EulerSquared => "euler-squared",
            P4Mode::Zero => "zero",
        })
    }
}

impl FromStr for P4Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler-squared" => Ok(P4Mode::EulerSquared),
            "zero" => Ok(P4Mode::Zero),
            _ => Err(Error::usage(format!("unknown p4 mode `{s}`"))),
        }
    }
}

/// The parametrised base ring together with the mode.
#[derive(Debug, Clone)]
pub struct ModelRing {
    ring: Arc<RingSpec>,
    mode: Mode,
}

/// `ℚ[a8, …, p3_2, P1, P2]`; both modes share it so their κ-classes compare directly.
pub fn parametrized_ring() -> Arc<RingSpec> {
    let names: Vec<&str> = BASE_VARS.iter().chain(PARAMS.iter()).copied().collect();
    let weights: Vec<u32> = BASE_WEIGHTS.iter().copied().chain([0, 0]).collect();
    RingSpec::new(&names, &weights).expect("fixed variable list")
}

/// The eight-variable base ring without parameters.
pub fn base_ring() -> Arc<RingSpec> {
    RingSpec::new(&BASE_VARS, &BASE_WEIGHTS).expect("fixed variable list")
}

/// Abstract characteristic classes `e, p1, p2, p3, p4` of a rank-8 bundle.
pub fn class_ring() -> Arc<RingSpec> {
    RingSpec::new(&["e", "p1", "p2", "p3", "p4"], &[8, 4, 8, 12, 16]).expect("fixed variable list")
}

impl ModelRing {
    pub fn new(mode: Mode) -> Self {
        ModelRing {
            ring: parametrized_ring(),
            mode,
        }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn var(&self, name: &str) -> Polynomial {
        Polynomial::var(&self.ring, name).expect("model variable")
    }

    fn parse(&self, s: &str) -> Polynomial {
        Polynomial::parse(s, &self.ring).expect("model literal")
    }

    /// x²-coefficient of `p2` for this mode.
    pub fn p2_top(&self) -> Polynomial {
        match self.mode {
            Mode::Signature => self.parse("45/7 + 1/7*P1^2"),
            Mode::Free => self.var("P2"),
        }
    }

    pub fn element(&self, c0: Polynomial, c1: Polynomial, c2: Polynomial) -> TotalSpaceElement {
        TotalSpaceElement {
            coeffs: [c0, c1, c2],
            mode: self.mode,
        }
    }

    pub fn constant(&self, c: Polynomial) -> TotalSpaceElement {
        let z = Polynomial::zero(&self.ring);
        self.element(c, z.clone(), z)
    }

    /// `x^i` reduced.
    pub fn x_power(&self, i: usize) -> TotalSpaceElement {
        let mut coeffs = vec![Polynomial::zero(&self.ring); i + 1];
        coeffs[i] = Polynomial::one(&self.ring);
        self.reduce_total(coeffs)
    }

    /// Reduces `Σ c_i x^i` using `x³ = −a8·x − a12`.
    pub fn reduce_total(&self, mut coeffs: Vec<Polynomial>) -> TotalSpaceElement {
        let a8 = self.var("a8");
        let a12 = self.var("a12");
        while coeffs.len() < 3 {
            coeffs.push(Polynomial::zero(&self.ring));
        }
        for i in (3..coeffs.len()).rev() {
            let top = std::mem::replace(&mut coeffs[i], Polynomial::zero(&self.ring));
            if top.is_zero() {
                continue;
            }
            coeffs[i - 2] = coeffs[i - 2].sub(&top.mul(&a8).unwrap()).unwrap();
            coeffs[i - 3] = coeffs[i - 3].sub(&top.mul(&a12).unwrap()).unwrap();
        }
        coeffs.truncate(3);
        let [c0, c1, c2]: [Polynomial; 3] = coeffs.try_into().unwrap();
        self.element(c0, c1, c2)
    }

    pub fn mul_total(&self, s: &TotalSpaceElement, t: &TotalSpaceElement) -> Result<TotalSpaceElement> {
        if s.mode != self.mode || t.mode != self.mode {
            return Err(Error::usage("total space elements from different modes"));
        }
        let mut conv = vec![Polynomial::zero(&self.ring); 5];
        for i in 0..3 {
            if s.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if t.coeffs[j].is_zero() {
                    continue;
                }
                conv[i + j] = conv[i + j].add(&s.coeffs[i].mul(&t.coeffs[j])?)?;
            }
        }
        Ok(self.reduce_total(conv))
    }

    /// Representative of `e` (`i = 0`) or `p_i`; `p4 = e²`, `p_i = 0` for `i ≥ 5`.
    pub fn char_class(&self, class: CharClass) -> TotalSpaceElement {
        let z = || Polynomial::zero(&self.ring);
        match class {
            CharClass::Euler => self.element(self.var("a8"), z(), self.parse("3")),
            CharClass::Pontrjagin(1) => self.element(self.var("p1_0"), self.var("P1"), z()),
            CharClass::Pontrjagin(2) => {
                self.element(self.var("p2_0"), self.var("p2_1"), self.p2_top())
            }
            CharClass::Pontrjagin(3) => {
                self.element(self.var("p3_0"), self.var("p3_1"), self.var("p3_2"))
            }
            CharClass::Pontrjagin(4) => {
                let e = self.char_class(CharClass::Euler);
                self.mul_total(&e, &e).expect("same mode")
            }
            CharClass::Pontrjagin(_) => self.constant(z()),
        }
    }

    /// `κ_c = π_!(c(T_πE))` for a homogeneous `c` in the class ring.
    pub fn kappa(&self, c: &Polynomial) -> Result<Polynomial> {
        let classes = class_ring();
        if **c.ring() != *classes {
            return Err(Error::usage("κ expects a polynomial in e, p1, p2, p3, p4"));
        }
        let degree = match c.weighted_degree() {
            Degree::NegInfinity => return Ok(Polynomial::zero(&self.ring)),
            Degree::Homogeneous(d) => d,
            Degree::Inhomogeneous(ds) => {
                return Err(Error::usage(format!("κ of an inhomogeneous class (degrees {ds:?})")))
            }
        };
        let values = [
            self.char_class(CharClass::Euler),
            self.char_class(CharClass::Pontrjagin(1)),
            self.char_class(CharClass::Pontrjagin(2)),
            self.char_class(CharClass::Pontrjagin(3)),
            self.char_class(CharClass::Pontrjagin(4)),
        ];
        let mut powers: Vec<Vec<TotalSpaceElement>> = values
            .iter()
            .map(|_| vec![self.constant(Polynomial::one(&self.ring))])
            .collect();
        let mut acc = Polynomial::zero(&self.ring);
        for (m, coef) in c.terms() {
            let mut prod = self.constant(Polynomial::constant(&self.ring, coef.clone()));
            for (v, pw) in powers.iter_mut().enumerate() {
                let e = m.exponent(v) as usize;
                while pw.len() <= e {
                    let next = self.mul_total(pw.last().unwrap(), &values[v])?;
                    pw.push(next);
                }
                if e > 0 {
                    prod = self.mul_total(&prod, &pw[e])?;
                }
            }
            acc = acc.add(&fibre_integrate(&prod))?;
        }
        debug_assert!(
            acc.is_zero() || acc.weighted_degree() == Degree::Homogeneous(degree - FIBRE_DIM),
            "κ degree contract"
        );
        Ok(acc)
    }

    /// `κ_{L_k}` for any `k`, restricted to rank 8 first.
    pub fn kappa_l(&self, k: usize, p4_mode: P4Mode) -> Result<Polynomial> {
        self.kappa(&restrict_to_rank8(l_genus(k)?.get(k), p4_mode)?)
    }

    /// `[κ_{L_3}, …, κ_{L_kmax}]`.
    pub fn hirzebruch_generators(&self, k_max: usize, p4_mode: P4Mode) -> Result<Vec<KappaClass>> {
        self.hirzebruch_generators_from(&l_genus(k_max)?, k_max, p4_mode)
    }

    /// As [`ModelRing::hirzebruch_generators`] with an explicitly supplied L-sequence.
    pub fn hirzebruch_generators_from(
        &self,
        l: &MultiplicativeSequence,
        k_max: usize,
        p4_mode: P4Mode,
    ) -> Result<Vec<KappaClass>> {
        if k_max < 3 {
            return Err(Error::usage("the Hirzebruch ideal starts at k = 3"));
        }
        if l.degree() < k_max {
            return Err(Error::usage("L-sequence too short"));
        }
        (3..=k_max)
            .map(|k| {
                let restricted = restrict_to_rank8(l.get(k), p4_mode)?;
                Ok(KappaClass {
                    k,
                    value: self.kappa(&restricted)?,
                })
            })
            .collect()
    }
}

/// Sends a polynomial in `p1..pN` to the class ring with `p4 ↦ e²` (or 0) and
/// `p_j ↦ 0` for `j ≥ 5`.
pub fn restrict_to_rank8(k: &Polynomial, p4_mode: P4Mode) -> Result<Polynomial> {
    let classes = class_ring();
    let n = k.ring().nvars();
    let mut terms = Vec::with_capacity(k.len());
    'terms: for (m, c) in k.terms() {
        let mut e = [0u32; 5];
        for j in 1..=n {
            let x = m.exponent(j - 1);
            if x == 0 {
                continue;
            }
            match (j, p4_mode) {
                (1..=3, _) => e[j] = x,
                (4, P4Mode::EulerSquared) => e[0] += 2 * x,
                _ => continue 'terms,
            }
        }
        terms.push((Monomial::from_exponents(&e)?, c.clone()));
    }
    let name_ok = k
        .ring()
        .names()
        .iter()
        .enumerate()
        .all(|(i, name)| *name == format!("p{}", i + 1));
    if !name_ok {
        return Err(Error::usage("expected a polynomial in p1..pN"));
    }
    Ok(Polynomial::from_terms(&classes, terms))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharClass {
    Euler,
    Pontrjagin(usize),
}

/// `c0 + c1·x + c2·x²`, always reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalSpaceElement {
    coeffs: [Polynomial; 3],
    mode: Mode,
}

impl TotalSpaceElement {
    pub fn coeffs(&self) -> &[Polynomial; 3] {
        &self.coeffs
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Multiplies every coefficient by a base polynomial.
    pub fn scale_base(&self, b: &Polynomial) -> Result<TotalSpaceElement> {
        Ok(TotalSpaceElement {
            coeffs: [
                self.coeffs[0].mul(b)?,
                self.coeffs[1].mul(b)?,
                self.coeffs[2].mul(b)?,
            ],
            mode: self.mode,
        })
    }
}

/// `π_!`: `1, x ↦ 0`, `x² ↦ 1`, extended base-linearly.
pub fn fibre_integrate(t: &TotalSpaceElement) -> Polynomial {
    t.coeffs[2].clone()
}

/// `κ_{L_k}` with its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaClass {
    pub k: usize,
    pub value: Polynomial,
}

/// The signature-mode value of `P2`.
pub fn signature_p2(p1: &Rational) -> Rational {
    (Rational::from_integer(BigInt::from(45)) + p1 * p1) / Rational::from_integer(BigInt::from(7))
}

/// Substitutes parameter values and drops `P1`, `P2` from the ring.
pub fn specialize_parameters(
    value: &Polynomial,
    p1: &Rational,
    p2: Option<&Rational>,
) -> Result<Polynomial> {
    let mut assignments = vec![("P1", SubstValue::Const(p1.clone()))];
    if let Some(p2) = p2 {
        assignments.push(("P2", SubstValue::Const(p2.clone())));
    }
    value.substitute(assignments)?.map_into(&base_ring())
}
