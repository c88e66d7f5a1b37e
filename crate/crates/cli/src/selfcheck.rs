//! Fast invariant suite run by `tautring selfcheck`.

use tautring::fiber::{FiberOptions, HirzebruchFamily};
use tautring::genera::{ahat_genus, l_genus, MultiplicativeSequence};
use tautring::groebner::{buchberger, membership_oracle, Field, Ideal};
use tautring::model::{fibre_integrate, restrict_to_rank8, Mode, ModelRing, P4Mode};
use tautring::poly::SubstValue;
use tautring::rational::int;
use tautring::{MonomialOrder, Polynomial, Rational, RingSpec};

use crate::cache::Cache;
use crate::point::run_point;

pub struct CheckResult {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

type Outcome = Result<(), String>;

fn expect_eq(what: &str, got: &Polynomial, want: &str) -> Outcome {
    let want = Polynomial::parse(want, got.ring()).map_err(|e| e.to_string())?;
    if *got == want {
        Ok(())
    } else {
        Err(format!("{what} = {got}, expected {want}"))
    }
}

fn l_sequence(perturb_l2: bool) -> tautring::Result<MultiplicativeSequence> {
    let mut l = l_genus(6)?;
    if perturb_l2 {
        let wrong = Polynomial::parse("8/45*p2 - 1/45*p1^2", l.ring())?;
        l.perturb(2, wrong);
    }
    Ok(l)
}

fn genus_formulas(l: &MultiplicativeSequence) -> Outcome {
    let a = ahat_genus(2).map_err(|e| e.to_string())?;
    expect_eq("L1", l.get(1), "1/3*p1")?;
    expect_eq("L2", l.get(2), "7/45*p2 - 1/45*p1^2")?;
    expect_eq("Â1", a.get(1), "-1/24*p1")?;
    expect_eq("Â2", a.get(2), "-4/5760*p2 + 7/5760*p1^2")
}

fn fibre_integration() -> Outcome {
    let m = ModelRing::new(Mode::Signature);
    expect_eq("π!(x²)", &fibre_integrate(&m.x_power(2)), "1")?;
    expect_eq("π!(x⁴)", &fibre_integrate(&m.x_power(4)), "-a8")
}

fn signature_identity(l: &MultiplicativeSequence) -> Outcome {
    let l2 = restrict_to_rank8(l.get(2), P4Mode::EulerSquared).map_err(|e| e.to_string())?;
    let sig = ModelRing::new(Mode::Signature).kappa(&l2).map_err(|e| e.to_string())?;
    expect_eq("κ_L2 (signature)", &sig, "1")?;
    let free = ModelRing::new(Mode::Free).kappa(&l2).map_err(|e| e.to_string())?;
    expect_eq("κ_L2 (free)", &free, "7/45*P2 - 1/45*P1^2")
}

/// `K(p ⊕ q) = K(p)·K(q)` through degree `seq.degree()` on fixed integer vectors.
fn whitney(seq: &MultiplicativeSequence) -> Outcome {
    let n = seq.degree();
    let eval = |k: usize, v: &[Rational]| -> Result<Rational, String> {
        let p = seq.get(k);
        let names = p.ring().names().to_vec();
        let sub = names.iter().zip(v).map(|(name, x)| (name.as_str(), SubstValue::Const(x.clone())));
        p.substitute(sub)
            .map_err(|e| e.to_string())?
            .constant_value()
            .ok_or_else(|| "non-constant evaluation".to_string())
    };
    for trial in 0..5i64 {
        let p: Vec<Rational> = (0..n as i64).map(|i| int((3 * i + trial) % 7 - 3)).collect();
        let q: Vec<Rational> = (0..n as i64).map(|i| int((5 * i + 2 * trial) % 9 - 4)).collect();
        let at = |v: &[Rational], i: usize| if i == 0 { int(1) } else { v[i - 1].clone() };
        let r: Vec<Rational> = (1..=n).map(|k| (0..=k).map(|i| at(&p, i) * at(&q, k - i)).sum()).collect();
        for k in 1..=n {
            let rhs: Rational = (0..=k)
                .map(|i| Ok(eval(i, &p)? * eval(k - i, &q)?))
                .sum::<Result<Rational, String>>()?;
            if eval(k, &r)? != rhs {
                return Err(format!("degree {k} fails on trial {trial}"));
            }
        }
    }
    Ok(())
}

fn groebner_example() -> Outcome {
    let r = RingSpec::ungraded(&["v1", "v2", "v3"]).map_err(|e| e.to_string())?;
    let p = |s: &str| Polynomial::parse(s, &r).map_err(|e| e.to_string());
    let ideal = Ideal::new(&r, [p("v1 - v2^2")?, p("v2 - v3")?]).map_err(|e| e.to_string())?;
    let gb = buchberger(&ideal, &MonomialOrder::degrevlex(3)).map_err(|e| e.to_string())?;
    if gb.krull_dimension() != 1 {
        return Err(format!("dimension {} instead of 1", gb.krull_dimension()));
    }
    for probe in ["v1 - v3^2", "v1*v3 - v2^3", "v1 - v3", "v2^2 - v3"] {
        let f = p(probe)?;
        let a = gb.contains(&f).map_err(|e| e.to_string())?;
        let b = membership_oracle(&f, &ideal, 4).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("membership of {probe}: basis says {a}, oracle says {b}"));
        }
    }
    Ok(())
}

/// A small fibre over ℚ agrees with the prime-field run and with its cached replay.
fn fibre_roundtrip(cache: Option<&Cache>, warn: &(dyn Fn(&str) + Sync)) -> Outcome {
    let family = HirzebruchFamily::new(Mode::Signature, 5, P4Mode::EulerSquared).map_err(|e| e.to_string())?;
    let rational = FiberOptions::default();
    let prime = FiberOptions {
        field: Field::Prime(tautring::groebner::DEFAULT_PRIME),
        ..FiberOptions::default()
    };
    let mut first = run_point(&family, &int(2), None, &rational, cache, warn).map_err(|e| e.to_string())?;
    let mut again = run_point(&family, &int(2), None, &rational, cache, warn).map_err(|e| e.to_string())?;
    if cache.is_none() {
        // Runtimes are replayed only from a cache.
        first.runtime_ms = 0;
        again.runtime_ms = 0;
    }
    let modular = run_point(&family, &int(2), None, &prime, None, warn).map_err(|e| e.to_string())?;
    if first != again {
        return Err(format!("replay differs: {first} vs {again}"));
    }
    if first.dimension != modular.dimension {
        return Err(format!("ℚ dimension {} vs prime dimension {}", first.dimension, modular.dimension));
    }
    Ok(())
}

/// Drops entries that fail their digest; they are recomputed on next use.
fn cache_integrity(cache: Option<&Cache>, warn: &(dyn Fn(&str) + Sync)) -> Outcome {
    let Some(cache) = cache else { return Ok(()) };
    for key in cache.scan_corrupt().map_err(|e| e.to_string())? {
        warn(&format!("cache entry {key} is corrupt; removed"));
        std::fs::remove_file(cache.path(&key)).map_err(|e| e.to_string())?;
    }
    Ok(())
}

/// Runs every check; with `perturb_l2` the L-sequence is deliberately wrong.
pub fn run(perturb_l2: bool, cache: Option<&Cache>, warn: &(dyn Fn(&str) + Sync)) -> Vec<CheckResult> {
    let l = l_sequence(perturb_l2);
    let with_l = |f: fn(&MultiplicativeSequence) -> Outcome| match &l {
        Ok(l) => f(l),
        Err(e) => Err(e.to_string()),
    };
    vec![
        CheckResult {
            name: "cache-integrity",
            outcome: cache_integrity(cache, warn),
        },
        CheckResult {
            name: "genus-formulas",
            outcome: with_l(genus_formulas),
        },
        CheckResult {
            name: "fibre-integration",
            outcome: fibre_integration(),
        },
        CheckResult {
            name: "signature-identity",
            outcome: with_l(signature_identity),
        },
        CheckResult {
            name: "whitney-l",
            outcome: with_l(whitney),
        },
        CheckResult {
            name: "whitney-ahat",
            outcome: ahat_genus(6).map_err(|e| e.to_string()).and_then(|a| whitney(&a)),
        },
        CheckResult {
            name: "groebner-oracle",
            outcome: groebner_example(),
        },
        CheckResult {
            name: "fibre-cache-roundtrip",
            outcome: fibre_roundtrip(cache, warn),
        },
    ]
}
