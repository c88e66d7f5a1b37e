//! Reduced Gröbner bases over ℚ by modular reconstruction.
//!
//! Reduced bases are computed modulo a sequence of word-sized primes, combined
//! by Chinese remaindering and lifted by rational reconstruction. A candidate is
//! accepted only after an exact check over ℚ: every input reduces to zero and
//! every S-pair surviving the pair criteria reduces to zero.
//!
//! For an ideal homogeneous with respect to positive weights this check is a
//! proof. Write `J` for the ideal of the candidate `G`. The check shows
//! `I ⊆ J` and that `G` is a Gröbner basis, so
//! `HF(B/J) ≤ HF(B/I) ≤ HF_p(B/I_p) = HF(B/LT(G)) = HF(B/J)`, the middle
//! inequality being rank semicontinuity of the Macaulay matrices under reduction
//! mod `p`. Equal Hilbert functions and `I ⊆ J` force `I = J`.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use super::engine::{Arith, Ctx, Engine, EngineStats, IntZ, ModP, Mono, Term};
use crate::error::{Error, Result};

/// Primes below 2³¹ in decreasing order.
fn primes() -> impl Iterator<Item = u32> {
    (3..(1u32 << 31)).rev().step_by(2).filter(|&p| super::is_prime(p))
}

fn lead_keys<C>(gb: &[Vec<Term<C>>]) -> Vec<Mono> {
    gb.iter().map(|p| p[0].0).collect()
}

/// Running Chinese remainder images of one reduced basis shape.
struct Accumulator {
    key: Vec<Mono>,
    modulus: BigInt,
    nprimes: usize,
    elems: Vec<FxHashMap<Mono, BigInt>>,
    /// Coefficients lifted by an earlier attempt, reused while still consistent.
    lifted: Vec<FxHashMap<Mono, BigRational>>,
}

impl Accumulator {
    fn new(gb: &[Vec<Term<u32>>], p: u32) -> Self {
        Accumulator {
            key: lead_keys(gb),
            modulus: BigInt::from(p),
            nprimes: 1,
            elems: gb
                .iter()
                .map(|e| e.iter().map(|(m, c)| (*m, BigInt::from(*c))).collect())
                .collect(),
            lifted: vec![FxHashMap::default(); gb.len()],
        }
    }

    fn add(&mut self, gb: &[Vec<Term<u32>>], p: u32) {
        let ar = ModP { p };
        let m_mod_p = (&self.modulus % p).to_u32().unwrap();
        let m_inv = ar.inv(m_mod_p) as u64;
        let pb = p as u64;
        for (acc, e) in self.elems.iter_mut().zip(gb) {
            let residues: FxHashMap<Mono, u32> = e.iter().map(|(m, c)| (*m, *c)).collect();
            for (m, _) in e {
                acc.entry(*m).or_insert_with(BigInt::zero);
            }
            for (m, a) in acc.iter_mut() {
                let r = residues.get(m).copied().unwrap_or(0) as u64;
                let a_mod = (&*a % p).to_u64().unwrap();
                let t = (r + pb - a_mod) % pb * m_inv % pb;
                if t != 0 {
                    *a += &self.modulus * t;
                }
            }
        }
        self.modulus *= p;
        self.nprimes += 1;
    }

    /// Rational reconstruction of every coefficient, descending terms per element,
    /// or the position of a coefficient that does not lift yet.
    fn reconstruct(&mut self) -> std::result::Result<Vec<Vec<Term<BigRational>>>, (usize, Mono)> {
        let bound = (&self.modulus >> 1usize).sqrt();
        let mut out = Vec::with_capacity(self.elems.len());
        for (i, (e, lifted)) in self.elems.iter().zip(&mut self.lifted).enumerate() {
            let mut terms = Vec::with_capacity(e.len());
            for (m, a) in e {
                if a.is_zero() {
                    continue;
                }
                // A value within the bounds and congruent to `a` is the unique lift.
                let known = lifted
                    .get(m)
                    .filter(|q| ((q.denom() * a - q.numer()) % &self.modulus).is_zero());
                let q = match known {
                    Some(q) => q.clone(),
                    None => {
                        let q = ratrecon(a, &self.modulus, &bound).ok_or((i, *m))?;
                        lifted.insert(*m, q.clone());
                        q
                    }
                };
                terms.push((*m, q));
            }
            terms.sort_by_key(|t| std::cmp::Reverse(t.0));
            out.push(terms);
        }
        Ok(out)
    }

    /// Whether the single coefficient at `at` lifts with the current modulus.
    fn lifts(&self, at: (usize, Mono)) -> bool {
        let bound = (&self.modulus >> 1usize).sqrt();
        self.elems[at.0]
            .get(&at.1)
            .is_none_or(|a| a.is_zero() || ratrecon(a, &self.modulus, &bound).is_some())
    }
}

/// `r/s ≡ a (mod m)` with `|r|, s ≤ bound`, if it exists.
fn ratrecon(a: &BigInt, m: &BigInt, bound: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || &s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

fn candidate_mod_p(cand: &[Vec<Term<BigRational>>], p: u32) -> Option<Vec<Vec<Term<u32>>>> {
    let ar = ModP { p };
    let pb = BigInt::from(p);
    cand.iter()
        .map(|e| {
            let mut out = Vec::with_capacity(e.len());
            for (m, c) in e {
                let den = c.denom().mod_floor(&pb).to_u32().unwrap();
                if den == 0 {
                    return None;
                }
                let num = c.numer().mod_floor(&pb).to_u32().unwrap();
                let v = ar.mul(&num, &ar.inv(den));
                if v != 0 {
                    out.push((*m, v));
                }
            }
            Some(out)
        })
        .collect()
}

fn to_primitive(e: &[Term<BigRational>]) -> Vec<Term<BigInt>> {
    let den = e.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut t: Vec<Term<BigInt>> = e
        .iter()
        .map(|(m, c)| (*m, c.numer() * (&den / c.denom())))
        .collect();
    IntZ.normalize(&mut t);
    t
}

fn check_deadline(deadline: Option<Instant>, started: Instant) -> Result<()> {
    match deadline {
        Some(d) if Instant::now() >= d => Err(Error::Timeout {
            elapsed_ms: started.elapsed().as_millis() as u64,
        }),
        _ => Ok(()),
    }
}

/// Reduced Gröbner basis of a weighted-homogeneous ideal over ℚ.
///
/// `inputs` are primitive integer polynomials with descending terms; the result
/// is primitive with positive leading coefficients, ascending by leading monomial.
pub(super) fn modular_gb(
    inputs: &[Vec<Term<BigInt>>],
    ctx: &Ctx,
    deadline: Option<Instant>,
) -> Result<(Vec<Vec<Term<BigInt>>>, EngineStats)> {
    lift(inputs, ctx, deadline, |p| {
        let pb = BigInt::from(p);
        if inputs.iter().any(|g| (&g[0].1 % &pb).is_zero()) {
            return Ok(None);
        }
        let ar = ModP { p };
        let reduced: Vec<Vec<Term<u32>>> = inputs
            .iter()
            .map(|g| {
                g.iter()
                    .filter_map(|(m, c)| {
                        let v = c.mod_floor(&pb).to_u32().unwrap();
                        (v != 0).then_some((*m, v))
                    })
                    .collect()
            })
            .collect();
        Engine::new(&ar, ctx.clone(), deadline).run(reduced).map(Some)
    })
}

/// Lifts reduced bases modulo primes to a basis over ℚ.
///
/// `image(p)` returns the reduced basis of some ideal `J_p` modulo `p`, or `None`
/// to skip `p`. A reconstructed candidate `G` is returned once it is a Gröbner
/// basis over ℚ and every element of `inputs` reduces to zero by it, so
/// `⟨inputs⟩ ⊆ ⟨G⟩` holds in all cases.
pub(super) fn lift(
    inputs: &[Vec<Term<BigInt>>],
    ctx: &Ctx,
    deadline: Option<Instant>,
    mut image: impl FnMut(u32) -> Result<Option<Vec<Vec<Term<u32>>>>>,
) -> Result<(Vec<Vec<Term<BigInt>>>, EngineStats)> {
    let started = Instant::now();
    let mut stats = EngineStats::default();
    let mut acc: Option<Accumulator> = None;
    let mut rivals: FxHashMap<Vec<Mono>, usize> = FxHashMap::default();
    // Full reconstruction is retried once the modulus has grown by a quarter and
    // the coefficient that blocked the previous attempt lifts on its own.
    let mut blocker: Option<(usize, Mono)> = None;
    let mut next_attempt = 2usize;
    let mut pending: Option<Vec<Vec<Term<BigRational>>>> = None;

    for p in primes() {
        check_deadline(deadline, started)?;
        let Some(gb) = image(p)? else { continue };
        stats.primes_used += 1;

        if let Some(cand) = pending.take() {
            if candidate_mod_p(&cand, p).as_deref() == Some(&gb[..]) {
                let basis: Vec<_> = cand.iter().map(|e| to_primitive(e)).collect();
                let ar = IntZ;
                let mut check = Engine::new(&ar, ctx.clone(), deadline);
                let mut ok = check.verify_basis(basis.clone())?;
                for g in inputs {
                    if !ok {
                        break;
                    }
                    ok = check.normal_form(g.clone())?.0.is_empty();
                }
                stats.pairs_reduced += check.stats.pairs_reduced;
                if ok {
                    stats.basis_size = basis.len();
                    return Ok((basis, stats));
                }
            }
        }

        let key = lead_keys(&gb);
        match acc.as_mut() {
            None => acc = Some(Accumulator::new(&gb, p)),
            Some(a) if a.key == key => a.add(&gb, p),
            Some(a) => {
                // A prime disagreeing with the current shape; switch only when the
                // rival shape has been seen more often than the current one.
                let n = rivals.entry(key).or_insert(0);
                *n += 1;
                if *n > a.nprimes {
                    acc = Some(Accumulator::new(&gb, p));
                    rivals.clear();
                    blocker = None;
                    next_attempt = 2;
                }
                continue;
            }
        }
        let a = acc.as_mut().unwrap();
        if a.nprimes >= next_attempt && blocker.is_none_or(|b| a.lifts(b)) {
            next_attempt = a.nprimes + a.nprimes.div_ceil(4);
            match a.reconstruct() {
                Ok(cand) => pending = Some(cand),
                Err(at) => blocker = Some(at),
            }
        }
    }
    unreachable!("ran out of primes below 2^31")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_reconstruction() {
        let m = BigInt::from(1_000_003u64) * BigInt::from(999_983u64);
        let bound = (&m >> 1usize).sqrt();
        let q = BigRational::new(BigInt::from(-355), BigInt::from(113));
        // a ≡ -355 · 113^{-1} (mod m)
        let e = BigInt::from(113).extended_gcd(&m);
        let a = (BigInt::from(-355) * e.x).mod_floor(&m);
        assert_eq!(ratrecon(&a, &m, &bound), Some(q));
        assert_eq!(ratrecon(&BigInt::zero(), &m, &bound), Some(BigRational::zero()));
    }

    #[test]
    fn primes_descend_from_word_limit() {
        let first: Vec<u32> = primes().take(3).collect();
        assert_eq!(first, [2147483647, 2147483629, 2147483587]);
    }
}
