//! Gröbner bases checked against first principles and the Macaulay-matrix oracle.

use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tautring::fiber::{compute_fiber, FiberOptions, HirzebruchFamily};
use tautring::groebner::{buchberger, certify_dimension, membership_oracle, GbOptions, Ideal};
use tautring::model::{Mode, P4Mode, BASE_VARS};
use tautring::rational::{frac, int};
use tautring::{Monomial, MonomialOrder, Polynomial, RingSpec};

fn ring3() -> Arc<RingSpec> {
    RingSpec::ungraded(&["x", "y", "z"]).unwrap()
}

type Spec = Vec<((u32, u32, u32), i64)>;

fn poly(r: &Arc<RingSpec>, spec: &Spec) -> Polynomial {
    let terms = spec
        .iter()
        .map(|((a, b, c), k)| (Monomial::from_exponents(&[*a, *b, *c]).unwrap(), int(*k)));
    Polynomial::from_terms(r, terms)
}

/// Up to four terms of total degree at most 3.
fn small_poly() -> impl Strategy<Value = Spec> {
    prop::collection::vec(
        ((0u32..=3, 0u32..=3, 0u32..=3), -4i64..=4).prop_filter("degree ≤ 3", |((a, b, c), _)| a + b + c <= 3),
        1..=4,
    )
}

fn s_poly(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (mf, cf) = f.leading_term().unwrap();
    let (mg, cg) = g.leading_term().unwrap();
    let l = mf.lcm(mg);
    let a = f.mul_monomial(&mf.quotient_of(&l).unwrap(), &(int(1) / cf)).unwrap();
    let b = g.mul_monomial(&mg.quotient_of(&l).unwrap(), &(int(1) / cg)).unwrap();
    a.sub(&b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn basis_is_a_reduced_groebner_basis(gens in prop::collection::vec(small_poly(), 1..=3)) {
        let r = ring3();
        let ord = MonomialOrder::degrevlex(3);
        let ideal = Ideal::new(&r, gens.iter().map(|g| poly(&r, g))).unwrap();
        let gb = buchberger(&ideal, &ord).unwrap();
        let elems = gb.elements();
        for g in ideal.generators() {
            prop_assert!(gb.contains(g).unwrap());
        }
        for (i, f) in elems.iter().enumerate() {
            prop_assert_eq!(&f.leading_term().unwrap().1, &int(1));
            for (j, g) in elems.iter().enumerate() {
                if i < j {
                    prop_assert!(gb.reduce(&s_poly(f, g)).unwrap().is_zero());
                }
                if i != j {
                    let lm = &g.leading_term().unwrap().0;
                    prop_assert!(f.terms().iter().all(|(m, _)| !lm.divides(m)));
                }
            }
        }
    }

    /// Weighted-homogeneous ideals: the certified dimension equals the one read
    /// off a full basis over ℚ.
    #[test]
    fn certificate_matches_full_basis(seed in any::<u64>()) {
        let r = RingSpec::new(&["x", "y", "z", "w"], &[1, 2, 1, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ngens = rng.gen_range(1..=3);
        let gens: Vec<Polynomial> = (0..ngens)
            .map(|_| {
                let d = rng.gen_range(1..=4);
                random_homogeneous(&r, &mut rng, d)
            })
            .collect();
        let ideal = Ideal::new(&r, gens).unwrap();
        let ord = MonomialOrder::degrevlex(4);
        let cert = certify_dimension(&ideal, &GbOptions::new(ord.clone())).unwrap();
        prop_assert_eq!(cert.dimension, buchberger(&ideal, &ord).unwrap().krull_dimension());
    }
}

/// A random polynomial homogeneous of weighted degree `d` (possibly zero).
fn random_homogeneous(r: &Arc<RingSpec>, rng: &mut ChaCha8Rng, d: u32) -> Polynomial {
    let w = r.weights();
    let n = r.nvars();
    let mut monos = Vec::new();
    let mut e = vec![0u32; n];
    fn walk(i: usize, left: u32, w: &[u32], e: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == w.len() {
            if left == 0 {
                out.push(e.clone());
            }
            return;
        }
        for k in 0..=left / w[i] {
            e[i] = k;
            walk(i + 1, left - k * w[i], w, e, out);
        }
        e[i] = 0;
    }
    walk(0, d, w, &mut e, &mut monos);
    let mut terms = Vec::new();
    for m in &monos {
        if rng.gen_bool(0.5) {
            let c = frac(rng.gen_range(-5..=5), rng.gen_range(1..=3));
            terms.push((Monomial::from_exponents(m).unwrap(), c));
        }
    }
    Polynomial::from_terms(r, terms)
}

/// For homogeneous ideals and homogeneous `p`, membership is decided in degree
/// `deg p`, so the oracle with that bound is exact.
#[test]
fn membership_agrees_with_oracle() {
    let r = RingSpec::new(&["x", "y", "z"], &[1, 1, 1]).unwrap();
    let ord = MonomialOrder::degrevlex(3);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut members, mut total) = (0, 0);
    while total < 200 {
        let ngens = rng.gen_range(1..=3);
        let gens: Vec<Polynomial> = (0..ngens)
            .map(|_| {
                let d = rng.gen_range(1..=3);
                random_homogeneous(&r, &mut rng, d)
            })
            .collect();
        let ideal = Ideal::new(&r, gens.clone()).unwrap();
        if ideal.generators().is_empty() {
            continue;
        }
        let d = rng.gen_range(1..=5);
        // Half the probes are built from the generators so that both answers occur.
        let p = if rng.gen_bool(0.5) {
            let mut acc = Polynomial::zero(&r);
            for g in ideal.generators() {
                let gd = g.total_degree() as u32;
                if gd <= d {
                    acc = acc.add(&g.mul(&random_homogeneous(&r, &mut rng, d - gd)).unwrap()).unwrap();
                }
            }
            acc
        } else {
            random_homogeneous(&r, &mut rng, d)
        };
        let gb = buchberger(&ideal, &ord).unwrap();
        let via_gb = gb.contains(&p).unwrap();
        let via_oracle = membership_oracle(&p, &ideal, d as u64).unwrap();
        assert_eq!(via_gb, via_oracle, "p = {p}, ideal = {:?}", ideal.generators());
        members += via_gb as usize;
        total += 1;
    }
    assert!(members > 20 && members < 180, "{members} members of {total}");
}

#[test]
fn fibre_dimension_is_order_invariant() {
    let family = HirzebruchFamily::new(Mode::Signature, 6, P4Mode::EulerSquared).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut dims = Vec::new();
    for _ in 0..3 {
        let mut perm: Vec<usize> = (0..BASE_VARS.len()).collect();
        perm.shuffle(&mut rng);
        for base in [MonomialOrder::degrevlex(8), MonomialOrder::weighted(8)] {
            let opts = FiberOptions {
                order: base.with_permutation(perm.clone()).unwrap(),
                ..FiberOptions::default()
            };
            dims.push(compute_fiber(&family, &int(2), None, &opts).unwrap().record.dimension);
        }
    }
    assert!(dims.iter().all(|&d| d == dims[0]), "{dims:?}");
}

#[test]
fn canonical_output_is_deterministic() {
    let family = HirzebruchFamily::new(Mode::Free, 7, P4Mode::EulerSquared).unwrap();
    let run = || {
        let out = compute_fiber(&family, &int(1), Some(&frac(7, 4)), &FiberOptions::default()).unwrap();
        (out.record.dimension, out.evidence.canonical_text())
    };
    assert_eq!(run(), run());
}
