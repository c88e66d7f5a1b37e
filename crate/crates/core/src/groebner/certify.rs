//! Exact Krull dimension over ℚ without a full rational basis.
//!
//! For an ideal `I` homogeneous in positive weights, with generators scaled to
//! primitive integer polynomials:
//!
//! * `dim B/I ≤ dim B_p/I_p` for every prime `p`, since reduction mod `p` can
//!   only lower the rank of each graded Macaulay matrix;
//! * `dim B/I ≥ dim B/J` for any ideal `J ⊇ I`. Taking `J` to be the saturation
//!   of `I` by a maximal independent set of variables keeps a top-dimensional
//!   component while discarding the rest, so `J` is usually far smaller than a
//!   basis of `I`. The containment and the basis of `J` are checked exactly.
//!
//! When the two bounds meet, the dimension over ℚ is proven.

use std::time::Instant;

use num_bigint::BigInt;

use super::engine::{Arith, Engine, IntZ, ModP, Term};
use super::{
    buchberger_with, is_weighted_homogeneous, modular, monic_z, EngineStats, Field, GbOptions, GroebnerBasis, Ideal,
    Layout,
};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ring::{Monomial, MonomialOrder};

/// Prime used for the upper bound.
pub const CERTIFY_PRIME: u32 = 2147483647;

/// An ideal containing the input whose dimension matches the upper bound.
#[derive(Debug, Clone)]
pub struct Witness {
    /// Variables the input was saturated by.
    pub saturated_by: Vec<String>,
    /// Reduced basis over ℚ of the saturation.
    pub basis: GroebnerBasis,
}

#[derive(Debug, Clone)]
pub enum DimensionProof {
    /// A reduced basis of the whole ideal over ℚ.
    Exact(GroebnerBasis),
    /// Modular upper bound with a matching lower bound; `witness` is `None` when
    /// the bound is at most 0, which every proper homogeneous ideal attains.
    Bracket {
        modular: GroebnerBasis,
        witness: Option<Witness>,
    },
}

#[derive(Debug, Clone)]
pub struct DimensionCertificate {
    pub dimension: i64,
    pub proof: DimensionProof,
}

impl DimensionCertificate {
    /// Text recording the bases that make up the proof.
    pub fn canonical_text(&self) -> String {
        match &self.proof {
            DimensionProof::Exact(gb) => format!("dimension {}\nexact\n{}", self.dimension, gb.canonical_text()),
            DimensionProof::Bracket { modular, witness } => {
                let mut out = format!("dimension {}\nupper\n{}", self.dimension, modular.canonical_text());
                if let Some(w) = witness {
                    out.push_str(&format!(
                        "lower saturated {}\n{}",
                        w.saturated_by.join(","),
                        w.basis.canonical_text()
                    ));
                }
                out
            }
        }
    }
}

/// Variable sets of size `d` meeting no leading monomial's support completely.
fn independent_sets(leading: &[Monomial], nvars: usize, d: usize) -> Vec<Vec<usize>> {
    let supports: Vec<u32> = leading
        .iter()
        .map(|m| m.support().fold(0u32, |acc, v| acc | 1 << v))
        .collect();
    (0u32..(1 << nvars))
        .filter(|mask| mask.count_ones() as usize == d && supports.iter().all(|s| s & !mask != 0))
        .map(|mask| (0..nvars).filter(|v| mask & (1 << v) != 0).collect())
        .collect()
}

/// Weighted degrevlex with `last` as the smallest variables, in that order.
fn order_with_last(nvars: usize, last: &[usize]) -> Result<MonomialOrder> {
    let mut perm: Vec<usize> = (0..nvars).filter(|v| !last.contains(v)).collect();
    perm.extend_from_slice(last);
    MonomialOrder::weighted(nvars).with_permutation(perm)
}

/// `p / x_v^k` for the largest `k` with `x_v^k | p`.
fn divide_out(p: &Polynomial, v: usize) -> Result<Polynomial> {
    let k = p.terms().iter().map(|(m, _)| m.exponent(v)).min().unwrap_or(0);
    if k == 0 {
        return Ok(p.clone());
    }
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut e: Vec<u32> = m.exponents().iter().map(|&x| x as u32).collect();
            e[v] -= k;
            Ok((Monomial::from_exponents(&e)?, c.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::from_terms(p.ring(), terms))
}

/// Saturation of `ideal` by the variables `free` over ℚ.
///
/// Modulo each prime, saturating by the last variable of a weighted degrevlex
/// order amounts to dividing each basis element by its largest power of that
/// variable, which holds because the ideal is weighted homogeneous. The lifted
/// basis uses plain weighted degrevlex, where its coefficients stay far smaller
/// than with the free variables last.
fn saturation(ideal: &Ideal, free: &[usize], deadline: Option<Instant>) -> Result<Witness> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let layout = Layout::new(ring, &MonomialOrder::weighted(n))?;
    let steps = free
        .iter()
        .rev()
        .map(|&v| Ok((v, Layout::new(ring, &order_with_last(n, &[v])?)?)))
        .collect::<Result<Vec<_>>>()?;
    let inputs: Vec<Vec<Term<BigInt>>> = ideal
        .generators()
        .iter()
        .map(|g| {
            let mut t = layout.to_z(g).0;
            IntZ.normalize(&mut t);
            t
        })
        .collect();
    let image = |p: u32| -> Result<Option<Vec<Vec<Term<u32>>>>> {
        let ar = ModP { p };
        let mut gens = ideal.generators().to_vec();
        for (v, lay) in &steps {
            let input = match gens.iter().map(|g| lay.to_modp(g, &ar)).collect::<Result<Vec<_>>>() {
                Err(Error::BadPrime(_)) => return Ok(None),
                other => other?,
            };
            let gb = Engine::new(&ar, lay.ctx.clone(), deadline).run(input)?;
            gens = gb
                .iter()
                .map(|t| divide_out(&lay.poly_from_modp(t), *v))
                .collect::<Result<_>>()?;
        }
        let input = gens.iter().map(|g| layout.to_modp(g, &ar)).collect::<Result<Vec<_>>>()?;
        Engine::new(&ar, layout.ctx.clone(), deadline).run(input).map(Some)
    };
    let (gb, stats): (_, EngineStats) = modular::lift(&inputs, &layout.ctx, deadline, image)?;
    let elements: Vec<Polynomial> = gb.iter().map(|t| layout.poly_from_z(t, &monic_z(t))).collect();
    let sat = Ideal::new(&layout.ring, elements.clone())?;
    let order = layout.ring.order().clone();
    Ok(Witness {
        saturated_by: free.iter().map(|&v| ring.names()[v].clone()).collect(),
        basis: GroebnerBasis::from_parts(sat, order, Field::Rational, elements, stats),
    })
}

/// Exact Krull dimension of `B/I` over ℚ.
///
/// Ideals that are not homogeneous in positive weights get a full rational basis,
/// as does any ideal whose saturation falls short of the modular bound.
pub fn certify_dimension(ideal: &Ideal, opts: &GbOptions) -> Result<DimensionCertificate> {
    let exact = || -> Result<DimensionCertificate> {
        let gb = buchberger_with(ideal, &GbOptions { field: Field::Rational, ..opts.clone() })?;
        Ok(DimensionCertificate {
            dimension: gb.krull_dimension(),
            proof: DimensionProof::Exact(gb),
        })
    };
    let n = ideal.ring().nvars();
    if !is_weighted_homogeneous(ideal) || n > 16 {
        return exact();
    }
    let modular = buchberger_with(
        ideal,
        &GbOptions {
            field: Field::Prime(CERTIFY_PRIME),
            ..opts.clone()
        },
    )?;
    let d = modular.krull_dimension();
    if d <= 0 {
        return Ok(DimensionCertificate {
            dimension: d,
            proof: DimensionProof::Bracket { modular, witness: None },
        });
    }
    let free = independent_sets(modular.leading(), n, d as usize).swap_remove(0);
    let witness = saturation(ideal, &free, opts.deadline)?;
    if witness.basis.krull_dimension() != d {
        return exact();
    }
    Ok(DimensionCertificate {
        dimension: d,
        proof: DimensionProof::Bracket {
            modular,
            witness: Some(witness),
        },
    })
}
