//! Properties of the fibration model and its κ-classes.

use proptest::prelude::*;
use tautring::model::{fibre_integrate, Mode, ModelRing, P4Mode, TotalSpaceElement};
use tautring::poly::{Degree, SubstValue};
use tautring::rational::frac;
use tautring::{Monomial, Polynomial};

/// A small random polynomial in the base and parameter variables.
fn base_poly() -> impl Strategy<Value = Vec<(Vec<u32>, i64, i64)>> {
    prop::collection::vec((prop::collection::vec(0u32..=2, 10), -5i64..=5, 1i64..=3), 0..=3)
}

fn build(m: &ModelRing, terms: &[(Vec<u32>, i64, i64)]) -> Polynomial {
    let terms = terms
        .iter()
        .map(|(e, n, d)| (Monomial::from_exponents(e).unwrap(), frac(*n, *d)));
    Polynomial::from_terms(m.ring(), terms)
}

fn element(m: &ModelRing, c: &[Vec<(Vec<u32>, i64, i64)>]) -> TotalSpaceElement {
    m.element(build(m, &c[0]), build(m, &c[1]), build(m, &c[2]))
}

fn total() -> impl Strategy<Value = Vec<Vec<(Vec<u32>, i64, i64)>>> {
    prop::collection::vec(base_poly(), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn total_space_products(s in total(), t in total(), u in total(), b in base_poly()) {
        let m = ModelRing::new(Mode::Free);
        let (s, t, u) = (element(&m, &s), element(&m, &t), element(&m, &u));
        let st = m.mul_total(&s, &t).unwrap();
        prop_assert_eq!(&st, &m.mul_total(&t, &s).unwrap());
        prop_assert_eq!(
            m.mul_total(&st, &u).unwrap(),
            m.mul_total(&s, &m.mul_total(&t, &u).unwrap()).unwrap()
        );
        prop_assert_eq!(m.reduce_total(st.coeffs().to_vec()), st.clone());
        // Push-pull: π_!(b·t) = b·π_!(t).
        let b = build(&m, &b);
        prop_assert_eq!(
            fibre_integrate(&st.scale_base(&b).unwrap()),
            b.mul(&fibre_integrate(&st)).unwrap()
        );
    }
}

#[test]
fn kappa_l_is_homogeneous_of_degree_4k_minus_8() {
    for mode in [Mode::Signature, Mode::Free] {
        let gens = ModelRing::new(mode).hirzebruch_generators(10, P4Mode::EulerSquared).unwrap();
        for g in gens {
            assert_eq!(g.value.weighted_degree(), Degree::Homogeneous(4 * g.k as u64 - 8), "{mode} k={}", g.k);
        }
    }
}

#[test]
fn free_mode_specialises_to_signature_mode() {
    let free = ModelRing::new(Mode::Free);
    let sig = ModelRing::new(Mode::Signature);
    let p2 = Polynomial::parse("45/7 + 1/7*P1^2", free.ring()).unwrap();
    for p4 in [P4Mode::EulerSquared, P4Mode::Zero] {
        let f = free.hirzebruch_generators(8, p4).unwrap();
        let s = sig.hirzebruch_generators(8, p4).unwrap();
        for (f, s) in f.iter().zip(&s) {
            let sub = f.value.substitute([("P2", SubstValue::Poly(p2.clone()))]).unwrap();
            assert_eq!(sub, s.value, "k = {}", f.k);
        }
    }
}

#[test]
fn signature_identity() {
    let sig = ModelRing::new(Mode::Signature);
    assert_eq!(sig.kappa_l(2, P4Mode::EulerSquared).unwrap(), Polynomial::one(sig.ring()));
    let free = ModelRing::new(Mode::Free);
    let expect = Polynomial::parse("7/45*P2 - 1/45*P1^2", free.ring()).unwrap();
    assert_eq!(free.kappa_l(2, P4Mode::EulerSquared).unwrap(), expect);
}
