//! Gröbner bases, normal forms and Krull dimension of quotient rings.

mod certify;
mod engine;
mod modular;
mod oracle;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::ring::{Grading, Monomial, MonomialOrder, RingSpec};

use engine::{Arith, Ctx, Engine, IntZ, ModP, Mono, Term, MAX_VARS};

pub use certify::{certify_dimension, DimensionCertificate, DimensionProof, Witness, CERTIFY_PRIME};
pub use engine::EngineStats;
pub use oracle::membership_oracle;

/// Default prime for modular runs.
pub const DEFAULT_PRIME: u32 = 32003;

/// Coefficient field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u32),
}

impl Field {
    pub fn prime(p: u32) -> Result<Self> {
        if !(3..=(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::usage(format!("{p} is not an odd prime below 2^31")));
        }
        Ok(Field::Prime(p))
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d: &u32| (*d as u64) * (*d as u64) <= p as u64).all(|d| !p.is_multiple_of(d))
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("rational"),
            Field::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Field::Rational),
            "prime" => Ok(Field::Prime(DEFAULT_PRIME)),
            _ => {
                let p = s
                    .strip_prefix("prime:")
                    .and_then(|p| p.parse::<u32>().ok())
                    .ok_or_else(|| Error::usage(format!("unknown field `{s}`")))?;
                Field::prime(p)
            }
        }
    }
}

/// Polynomial ideal given by generators; zero and repeated generators are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    ring: Arc<RingSpec>,
    generators: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(ring: &Arc<RingSpec>, generators: impl IntoIterator<Item = Polynomial>) -> Result<Self> {
        let mut gens: Vec<Polynomial> = Vec::new();
        for g in generators {
            if **g.ring() != **ring {
                return Err(Error::usage("generator lives in a different ring"));
            }
            if !g.is_zero() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: gens,
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }
}

/// Knobs for [`buchberger_with`].
#[derive(Debug, Clone)]
pub struct GbOptions {
    pub order: MonomialOrder,
    pub field: Field,
    /// Abort with [`Error::Timeout`] once this instant has passed.
    pub deadline: Option<Instant>,
    pub method: RationalMethod,
}

/// How a basis over ℚ is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RationalMethod {
    /// Modular reconstruction for ideals homogeneous in positive weights, direct otherwise.
    #[default]
    Auto,
    /// Fraction-free Buchberger over ℤ.
    Direct,
}

impl GbOptions {
    pub fn new(order: MonomialOrder) -> Self {
        GbOptions {
            order,
            field: Field::Rational,
            deadline: None,
            method: RationalMethod::Auto,
        }
    }
}

/// A reduced Gröbner basis.
///
/// Over a prime field the coefficients are stored as their residues in `[0, p)`.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ideal: Ideal,
    order: MonomialOrder,
    field: Field,
    elements: Vec<Polynomial>,
    leading: Vec<Monomial>,
    stats: EngineStats,
}

// ---------------------------------------------------------------------------
// Conversion between ring polynomials and engine terms

struct Layout {
    ctx: Ctx,
    perm: Vec<usize>,
    ring: Arc<RingSpec>,
}

impl Layout {
    fn new(ring: &Arc<RingSpec>, order: &MonomialOrder) -> Result<Self> {
        let n = ring.nvars();
        if order.nvars() != n {
            return Err(Error::usage("order and ring have different variable counts"));
        }
        if n > MAX_VARS {
            return Err(Error::usage(format!("at most {MAX_VARS} variables are supported")));
        }
        let mut weights = [0u32; MAX_VARS];
        for (k, &v) in order.permutation.iter().enumerate() {
            weights[k] = match order.grading {
                Grading::Standard => 1,
                Grading::Weighted => ring.weights()[v],
            };
            if weights[k] == 0 {
                return Err(Error::usage(format!(
                    "weighted order needs positive weights, `{}` has weight 0",
                    ring.names()[v]
                )));
            }
        }
        Ok(Layout {
            ctx: Ctx { nvars: n, weights },
            perm: order.permutation.clone(),
            ring: ring.with_order(order.clone())?,
        })
    }

    fn to_mono(&self, m: &Monomial) -> Mono {
        let mut e = [0u16; MAX_VARS];
        for (k, &v) in self.perm.iter().enumerate() {
            e[k] = m.exponents()[v];
        }
        self.ctx.mono(e)
    }

    fn monomial_of(&self, m: &Mono) -> Monomial {
        let mut e = vec![0u32; self.perm.len()];
        for (k, &v) in self.perm.iter().enumerate() {
            e[v] = m.e[k] as u32;
        }
        Monomial::from_exponents(&e).expect("exponents bounded by inputs")
    }

    /// Descending engine terms over ℤ and the integer `c` with `c·p` = result.
    fn to_z(&self, p: &Polynomial) -> (Vec<Term<BigInt>>, BigInt) {
        let den = p
            .terms()
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut t: Vec<Term<BigInt>> = p
            .terms()
            .iter()
            .map(|(m, c)| (self.to_mono(m), c.numer() * (&den / c.denom())))
            .collect();
        t.sort_by_key(|t| std::cmp::Reverse(t.0));
        (t, den)
    }

    fn to_modp(&self, p: &Polynomial, ar: &ModP) -> Result<Vec<Term<u32>>> {
        let mut t = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let r = reduce_mod(c, ar)?;
            if r != 0 {
                t.push((self.to_mono(m), r));
            }
        }
        t.sort_by_key(|t| std::cmp::Reverse(t.0));
        Ok(t)
    }

    fn poly_from_z(&self, t: &[Term<BigInt>], divisor: &BigInt) -> Polynomial {
        let terms = t
            .iter()
            .map(|(m, c)| (self.monomial_of(m), Rational::new(c.clone(), divisor.clone())));
        Polynomial::from_terms(&self.ring, terms)
    }

    fn poly_from_modp(&self, t: &[Term<u32>]) -> Polynomial {
        let terms = t
            .iter()
            .map(|(m, c)| (self.monomial_of(m), Rational::from_integer(BigInt::from(*c))));
        Polynomial::from_terms(&self.ring, terms)
    }
}

fn reduce_mod(c: &Rational, ar: &ModP) -> Result<u32> {
    let p = BigInt::from(ar.p);
    let num = c.numer().mod_floor(&p).to_u32().unwrap();
    let den = c.denom().mod_floor(&p).to_u32().unwrap();
    if den == 0 {
        return Err(Error::BadPrime(ar.p));
    }
    Ok(ar.mul(&num, &ar.inv(den)))
}

fn monic_z(t: &[Term<BigInt>]) -> BigInt {
    t.first().map(|(_, c)| c.clone()).unwrap_or_else(BigInt::one)
}

// ---------------------------------------------------------------------------
// Public operations

/// Remainder of full multivariate division of `p` by `basis`.
///
/// No remainder term is divisible by a leading monomial of `basis`, and
/// `p − remainder` lies in the ideal the basis generates.
pub fn normal_form(p: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Result<Polynomial> {
    let layout = Layout::new(p.ring(), order)?;
    let ar = IntZ;
    let mut eng = Engine::new(&ar, layout.ctx.clone(), None);
    let mut converted = Vec::with_capacity(basis.len());
    for b in basis {
        if **b.ring() != **p.ring() {
            return Err(Error::usage("basis element lives in a different ring"));
        }
        if b.is_zero() {
            return Err(Error::usage("basis elements must be nonzero"));
        }
        converted.push(layout.to_z(b).0);
    }
    eng.load_basis(converted);
    let (t, den) = layout.to_z(p);
    let (rem, mults) = eng.normal_form(t)?;
    let divisor = mults.iter().fold(den, |acc, a| acc * a);
    Ok(layout.poly_from_z(&rem, &divisor))
}

/// Reduced Gröbner basis over ℚ with the given order.
pub fn buchberger(ideal: &Ideal, order: &MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_with(ideal, &GbOptions::new(order.clone()))
}

pub fn buchberger_with(ideal: &Ideal, opts: &GbOptions) -> Result<GroebnerBasis> {
    let layout = Layout::new(ideal.ring(), &opts.order)?;
    let (elements, stats): (Vec<Polynomial>, _) = match opts.field {
        Field::Rational => {
            let mut inputs: Vec<_> = ideal.generators().iter().map(|g| layout.to_z(g).0).collect();
            for t in inputs.iter_mut() {
                IntZ.normalize(t);
            }
            let (gb, stats) = if inputs.is_empty() {
                (Vec::new(), EngineStats::default())
            } else if opts.method == RationalMethod::Auto && is_weighted_homogeneous(ideal) {
                modular::modular_gb(&inputs, &layout.ctx, opts.deadline)?
            } else {
                let ar = IntZ;
                let mut eng = Engine::new(&ar, layout.ctx.clone(), opts.deadline);
                let gb = eng.run(inputs)?;
                (gb, eng.stats)
            };
            let polys = gb.iter().map(|t| layout.poly_from_z(t, &monic_z(t))).collect();
            (polys, stats)
        }
        Field::Prime(p) => {
            let ar = ModP { p };
            let mut eng = Engine::new(&ar, layout.ctx.clone(), opts.deadline);
            let inputs = ideal
                .generators()
                .iter()
                .map(|g| layout.to_modp(g, &ar))
                .collect::<Result<Vec<_>>>()?;
            let gb = eng.run(inputs)?;
            let polys = gb.iter().map(|t| layout.poly_from_modp(t)).collect();
            (polys, eng.stats)
        }
    };
    Ok(GroebnerBasis::from_parts(ideal.clone(), opts.order.clone(), opts.field, elements, stats))
}

impl GroebnerBasis {
    fn from_parts(ideal: Ideal, order: MonomialOrder, field: Field, elements: Vec<Polynomial>, stats: EngineStats) -> Self {
        let leading = elements
            .iter()
            .map(|e| e.leading_term().expect("nonzero").0.clone())
            .collect();
        GroebnerBasis {
            ideal,
            order,
            field,
            elements,
            leading,
            stats,
        }
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Basis elements, monic, ascending by leading monomial.
    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    /// Minimal generators of the leading-term ideal.
    pub fn leading(&self) -> &[Monomial] {
        &self.leading
    }

    pub fn stats(&self) -> &EngineStats {
        &self.stats
    }

    pub fn is_unit(&self) -> bool {
        self.leading.iter().any(Monomial::is_one)
    }

    pub fn krull_dimension(&self) -> i64 {
        krull_dimension(&self.leading, self.ideal.ring().nvars())
    }

    /// Normal form modulo the basis (over ℚ only).
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        if self.field != Field::Rational {
            return Err(Error::usage("normal forms are only exact over the rationals"));
        }
        normal_form(p, &self.elements, &self.order)
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }

    /// Byte-stable text: field, order, then one element per line.
    pub fn canonical_text(&self) -> String {
        let mut out = format!("field {}\norder {}\n", self.field, self.order.descriptor());
        for e in &self.elements {
            out.push_str(&e.render());
            out.push('\n');
        }
        out
    }
}

fn is_weighted_homogeneous(ideal: &Ideal) -> bool {
    ideal.ring().weights().iter().all(|&w| w > 0) && ideal.generators().iter().all(Polynomial::is_homogeneous)
}

/// Krull dimension of `k[x_1..x_n] / ⟨leading⟩`; `-1` for the unit ideal.
///
/// Equals `n` minus the smallest number of variables meeting every generator's
/// support.
pub fn krull_dimension(leading: &[Monomial], nvars: usize) -> i64 {
    if leading.iter().any(Monomial::is_one) {
        return -1;
    }
    let mut supports: Vec<Vec<usize>> = leading.iter().map(|m| m.support().collect()).collect();
    supports.sort_by_key(Vec::len);
    supports.dedup();
    // A support containing another one never constrains the cover further.
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    for s in supports {
        if !minimal.iter().any(|t| t.iter().all(|v| s.contains(v))) {
            minimal.push(s);
        }
    }
    let mut chosen = vec![false; nvars];
    let mut best = nvars;
    min_cover(&minimal, &mut chosen, 0, &mut best);
    (nvars - best) as i64
}

fn min_cover(supports: &[Vec<usize>], chosen: &mut [bool], count: usize, best: &mut usize) {
    if count >= *best {
        return;
    }
    let Some(open) = supports.iter().find(|s| !s.iter().any(|&v| chosen[v])) else {
        *best = count;
        return;
    };
    for &v in open {
        chosen[v] = true;
        min_cover(supports, chosen, count + 1, best);
        chosen[v] = false;
    }
}
