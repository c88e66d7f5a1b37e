//! Multiplicative sequences against independent oracles.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tautring::genera::{ahat_genus, l_genus, MultiplicativeSequence};
use tautring::poly::{Degree, SubstValue};
use tautring::rational::{frac, int};
use tautring::{Polynomial, Rational, RingSpec};

fn eval(p: &Polynomial, values: &[Rational]) -> Rational {
    let names = p.ring().names().to_vec();
    let assignment = names.iter().zip(values).map(|(n, v)| (n.as_str(), SubstValue::Const(v.clone())));
    p.substitute(assignment).unwrap().constant_value().unwrap()
}

/// `Σ_{n≤N} K_n(p)·K_m(q)` truncated at total degree `N`, compared with `Σ K_n(r)`.
fn check_whitney(seq: &MultiplicativeSequence, rng: &mut ChaCha8Rng) {
    let n = seq.degree();
    let draw = |rng: &mut ChaCha8Rng| -> Vec<Rational> { (0..n).map(|_| int(rng.gen_range(-6..=6))).collect() };
    let (p, q) = (draw(rng), draw(rng));
    let at = |v: &[Rational], i: usize| if i == 0 { int(1) } else { v[i - 1].clone() };
    let r: Vec<Rational> = (1..=n).map(|k| (0..=k).map(|i| at(&p, i) * at(&q, k - i)).sum()).collect();
    let kp: Vec<Rational> = (0..=n).map(|i| eval(seq.get(i), &p)).collect();
    let kq: Vec<Rational> = (0..=n).map(|i| eval(seq.get(i), &q)).collect();
    for k in 0..=n {
        let lhs = eval(seq.get(k), &r);
        let rhs: Rational = (0..=k).map(|i| &kp[i] * &kq[k - i]).sum();
        assert_eq!(lhs, rhs, "degree {k}");
    }
}

#[test]
fn whitney_multiplicativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (l, a) = (l_genus(6).unwrap(), ahat_genus(6).unwrap());
    for _ in 0..50 {
        check_whitney(&l, &mut rng);
        check_whitney(&a, &mut rng);
    }
}

/// Degree-3 part of `Π_{i=1..3} Q(t_i)` written in the roots `t_i`, against
/// `K_3(e1(t), e2(t), e3(t))`, where `Q(t) = Σ q_j t^j`.
fn check_roots(seq: &MultiplicativeSequence, q: [Rational; 4]) {
    let roots: Arc<RingSpec> = RingSpec::new(&["t1", "t2", "t3"], &[1, 1, 1]).unwrap();
    let t = |i: usize| Polynomial::var(&roots, &format!("t{i}")).unwrap();
    let factor = |i: usize| {
        (0..4).fold(Polynomial::zero(&roots), |acc, j| {
            acc.add(&t(i).pow(j as u32).unwrap().scale(&q[j])).unwrap()
        })
    };
    let product = factor(1).mul(&factor(2)).unwrap().mul(&factor(3)).unwrap();
    let e1 = t(1).add(&t(2)).unwrap().add(&t(3)).unwrap();
    let e2 = t(1)
        .mul(&t(2))
        .unwrap()
        .add(&t(1).mul(&t(3)).unwrap())
        .unwrap()
        .add(&t(2).mul(&t(3)).unwrap())
        .unwrap();
    let e3 = t(1).mul(&t(2)).unwrap().mul(&t(3)).unwrap();
    for k in 1..=3 {
        // Rebuild K_k over the root ring by substituting elementary symmetric functions.
        let mut acc = Polynomial::zero(&roots);
        for (m, c) in seq.get(k).terms() {
            let mut term = Polynomial::constant(&roots, c.clone());
            for (v, e) in [&e1, &e2, &e3].iter().enumerate() {
                term = term.mul(&e.pow(m.exponent(v)).unwrap()).unwrap();
            }
            acc = acc.add(&term).unwrap();
        }
        assert_eq!(acc, product.homogeneous_part(k as u64), "K_{k}");
    }
}

#[test]
fn root_expansion_oracle() {
    // √t / tanh √t and (√t/2) / sinh(√t/2).
    check_roots(&l_genus(3).unwrap(), [int(1), frac(1, 3), frac(-1, 45), frac(2, 945)]);
    check_roots(&ahat_genus(3).unwrap(), [int(1), frac(-1, 24), frac(7, 5760), frac(-31, 967680)]);
}

#[test]
fn terms_are_homogeneous_up_to_ten() {
    for seq in [l_genus(10).unwrap(), ahat_genus(10).unwrap()] {
        for n in 1..=10 {
            assert_eq!(seq.get(n).weighted_degree(), Degree::Homogeneous(n as u64));
        }
    }
}
