//! Acceptance criteria 1–9, one PASS/FAIL line each.
//!
//! Lines go straight to stdout so they show without `--nocapture`.

use std::io::Write;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tautring::fiber::{compute_fiber, specialize_and_dim, FiberOptions, HirzebruchFamily};
use tautring::genera::MultiplicativeSequence;
use tautring::groebner::{buchberger, membership_oracle, Field, Ideal};
use tautring::model::{fibre_integrate, Mode, ModelRing, P4Mode, BASE_VARS};
use tautring::poly::SubstValue;
use tautring::rational::{frac, int};
use tautring::{Monomial, MonomialOrder, Polynomial, Rational, RingSpec};

type Outcome = Result<(), String>;
type Criterion = fn() -> Outcome;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tautring(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_tautring"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())
}

fn genus_formulas() -> Outcome {
    for (family, want) in [
        ("L", "1/3*p1\n-1/45*p1^2 + 7/45*p2\n"),
        ("Ahat", "-1/24*p1\n7/5760*p1^2 - 1/1440*p2\n"),
    ] {
        let out = tautring(&["genus", family, "2"])?;
        let got = String::from_utf8_lossy(&out.stdout);
        check(out.status.success() && got == want, || format!("genus {family} 2 printed {got:?}"))?;
    }
    Ok(())
}

fn fibre_integration() -> Outcome {
    let m = ModelRing::new(Mode::Signature);
    let x2 = fibre_integrate(&m.x_power(2));
    let x4 = fibre_integrate(&m.x_power(4));
    let minus_a8 = m.var("a8").neg();
    check(x2.constant_value() == Some(int(1)), || format!("π!(x²) = {x2}"))?;
    check(x4 == minus_a8, || format!("π!(x⁴) = {x4}"))
}

fn signature_identity() -> Outcome {
    let sig = ModelRing::new(Mode::Signature)
        .kappa_l(2, P4Mode::EulerSquared)
        .map_err(|e| e.to_string())?;
    check(sig.constant_value() == Some(int(1)), || format!("signature κ_L2 = {sig}"))?;
    let free = ModelRing::new(Mode::Free)
        .kappa_l(2, P4Mode::EulerSquared)
        .map_err(|e| e.to_string())?;
    let want = Polynomial::parse("7/45*P2 - 1/45*P1^2", free.ring()).map_err(|e| e.to_string())?;
    check(free == want, || format!("free κ_L2 = {free}"))
}

fn eval(p: &Polynomial, values: &[Rational]) -> Rational {
    let names = p.ring().names().to_vec();
    let sub = names.iter().zip(values).map(|(n, v)| (n.as_str(), SubstValue::Const(v.clone())));
    p.substitute(sub).unwrap().constant_value().unwrap()
}

/// `K(p ⊕ q) = K(p)·K(q)` where the total Pontrjagin class of the sum is the product.
fn whitney_trial(seq: &MultiplicativeSequence, rng: &mut ChaCha8Rng) -> Outcome {
    let n = seq.degree();
    let mut draw = || -> Vec<Rational> { (0..n).map(|_| frac(rng.gen_range(-9..=9), rng.gen_range(1..=3))).collect() };
    let (p, q) = (draw(), draw());
    let at = |v: &[Rational], i: usize| if i == 0 { int(1) } else { v[i - 1].clone() };
    let r: Vec<Rational> = (1..=n).map(|k| (0..=k).map(|i| at(&p, i) * at(&q, k - i)).sum()).collect();
    for k in 0..=n {
        let lhs = eval(seq.get(k), &r);
        let rhs: Rational = (0..=k).map(|i| eval(seq.get(i), &p) * eval(seq.get(k - i), &q)).sum();
        check(lhs == rhs, || format!("degree {k} at p = {p:?}, q = {q:?}"))?;
    }
    Ok(())
}

fn whitney() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let l = tautring::genera::l_genus(6).map_err(|e| e.to_string())?;
    let a = tautring::genera::ahat_genus(6).map_err(|e| e.to_string())?;
    for _ in 0..100 {
        whitney_trial(&l, &mut rng)?;
        whitney_trial(&a, &mut rng)?;
    }
    Ok(())
}

fn random_form(r: &Arc<RingSpec>, rng: &mut ChaCha8Rng, d: u32) -> Polynomial {
    let mut terms = Vec::new();
    for a in 0..=d {
        for b in 0..=d - a {
            if rng.gen_bool(0.4) {
                let m = Monomial::from_exponents(&[a, b, d - a - b]).unwrap();
                terms.push((m, frac(rng.gen_range(-5..=5), rng.gen_range(1..=3))));
            }
        }
    }
    Polynomial::from_terms(r, terms)
}

/// Homogeneous ideals with homogeneous probes, where the Macaulay matrix in the
/// probe's degree decides membership exactly.
fn groebner_oracle() -> Outcome {
    let r = RingSpec::new(&["x", "y", "z"], &[1, 1, 1]).map_err(|e| e.to_string())?;
    let ord = MonomialOrder::degrevlex(3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut total, mut members) = (0, 0);
    while total < 200 {
        let gens: Vec<Polynomial> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let d = rng.gen_range(1..=3);
                random_form(&r, &mut rng, d)
            })
            .collect();
        let ideal = Ideal::new(&r, gens).map_err(|e| e.to_string())?;
        if ideal.generators().is_empty() {
            continue;
        }
        let d = rng.gen_range(1..=4u32);
        let p = if rng.gen_bool(0.5) {
            let mut acc = Polynomial::zero(&r);
            for g in ideal.generators() {
                let gd = g.total_degree() as u32;
                if gd <= d {
                    acc = acc.add(&g.mul(&random_form(&r, &mut rng, d - gd)).unwrap()).unwrap();
                }
            }
            acc
        } else {
            random_form(&r, &mut rng, d)
        };
        let gb = buchberger(&ideal, &ord).map_err(|e| e.to_string())?;
        let a = gb.contains(&p).map_err(|e| e.to_string())?;
        let b = membership_oracle(&p, &ideal, d as u64).map_err(|e| e.to_string())?;
        check(a == b, || format!("{p} in {:?}: basis {a}, oracle {b}", ideal.generators()))?;
        members += a as usize;
        total += 1;
    }
    check(members > 0 && members < total, || format!("{members} of {total} probes were members"))
}

fn dims_over_q(points: &[(Rational, Option<Rational>, i64)]) -> Outcome {
    for (p1, p2, want) in points {
        let rec = specialize_and_dim(10, p1, p2.as_ref(), P4Mode::EulerSquared, Field::Rational)
            .map_err(|e| e.to_string())?;
        check(rec.dimension == *want, || format!("({p1}, {}) gave {} not {want}", rec.p2, rec.dimension))?;
    }
    Ok(())
}

fn table() -> Outcome {
    dims_over_q(&[(int(2), None, 3), (int(3), None, 0), (int(4), None, 0)])
}

fn figure_points() -> Outcome {
    dims_over_q(&[
        (int(0), Some(int(0)), 3),
        (int(2), Some(int(7)), 3),
        (int(1), Some(frac(7, 4)), 1),
        (int(3), Some(frac(9, 7)), 1),
        (int(4), Some(int(28)), 1),
    ])
}

fn monotone_and_order_invariant() -> Outcome {
    let mut dims = Vec::new();
    for k in 3..=10 {
        let rec = specialize_and_dim(k, &int(2), None, P4Mode::EulerSquared, Field::Rational)
            .map_err(|e| e.to_string())?;
        dims.push(rec.dimension);
    }
    check(dims.windows(2).all(|w| w[0] >= w[1]), || format!("k = 3..10 gave {dims:?}"))?;
    let family = HirzebruchFamily::new(Mode::Signature, 6, P4Mode::EulerSquared).map_err(|e| e.to_string())?;
    let reference = dims[3];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..3 {
        let mut perm: Vec<usize> = (0..BASE_VARS.len()).collect();
        perm.shuffle(&mut rng);
        let opts = FiberOptions {
            order: MonomialOrder::degrevlex(8).with_permutation(perm.clone()).map_err(|e| e.to_string())?,
            ..FiberOptions::default()
        };
        let d = compute_fiber(&family, &int(2), None, &opts).map_err(|e| e.to_string())?.record.dimension;
        check(d == reference, || format!("permutation {perm:?} gave {d}, not {reference}"))?;
    }
    Ok(())
}

fn sweep_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let req = dir.path().join("request.toml");
    std::fs::write(
        &req,
        "kmax = 10\noutput = \"sweep.csv\"\nfigure = \"sweep.svg\"\npoints = [\n  { p1 = 2 }, { p1 = 3 }, { p1 = 4 },\n  \
         { p1 = 0, p2 = 0 }, { p1 = 2, p2 = 7 }, { p1 = 1, p2 = \"7/4\" },\n  \
         { p1 = 3, p2 = \"9/7\" }, { p1 = 4, p2 = 28 },\n]\n",
    )
    .map_err(|e| e.to_string())?;
    let cache = dir.path().join("cache");
    let run = || -> Result<(Vec<u8>, Vec<u8>), String> {
        let out = tautring(&["sweep", req.to_str().unwrap(), "--cache-dir", cache.to_str().unwrap()])?;
        check(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
        let read = |f: &str| std::fs::read(dir.path().join(f)).map_err(|e| e.to_string());
        Ok((read("sweep.csv")?, read("sweep.svg")?))
    };
    let first = run()?;
    let second = run()?;
    check(first.0 == second.0, || "CSV differs between runs".into())?;
    check(first.1 == second.1, || "SVG differs between runs".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, Criterion); 9] = [
        ("1 genus formulas", genus_formulas),
        ("2 fibre integration", fibre_integration),
        ("3 signature identity", signature_identity),
        ("4 Whitney multiplicativity", whitney),
        ("5 Gröbner oracle equivalence", groebner_oracle),
        ("6 signature-mode dimensions over ℚ", table),
        ("7 free-mode figure points over ℚ", figure_points),
        ("8 monotonicity and order invariance", monotone_and_order_invariant),
        ("9 sweep determinism", sweep_determinism),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout();
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let line = match &outcome {
            Ok(()) => format!("PASS criterion {name} ({secs:.2} s)\n"),
            Err(e) => format!("FAIL criterion {name} ({secs:.2} s): {e}\n"),
        };
        out.write_all(line.as_bytes()).unwrap();
        if outcome.is_err() {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
