//! Fibres of the parametrized Hirzebruch ideal over rational parameter values.

use std::fmt;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::groebner::{
    buchberger_with, certify_dimension, DimensionCertificate, DimensionProof, Field, GbOptions, GroebnerBasis, Ideal,
    DEFAULT_PRIME,
};
use crate::model::{base_ring, signature_p2, specialize_parameters, Mode, ModelRing, P4Mode, BASE_VARS};
use crate::poly::Polynomial;
use crate::rational::{parse_rational, Rational};
use crate::ring::MonomialOrder;

/// Column header of fibre-dimension CSV files.
pub const CSV_HEADER: &str = "p1,p2,mode,kmax,p4_mode,field,dimension,runtime_ms";

/// One computed fibre dimension.
///
/// In signature mode `p2` holds the derived value `(45 + p1²)/7`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberDimensionRecord {
    pub p1: Rational,
    pub p2: Rational,
    pub mode: Mode,
    pub k_max: usize,
    pub p4_mode: P4Mode,
    pub field: Field,
    /// Krull dimension of the fibre; `-1` when the specialized ideal is the unit ideal.
    pub dimension: i64,
    pub runtime_ms: u64,
}

impl FiberDimensionRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.p1, self.p2, self.mode, self.k_max, self.p4_mode, self.field, self.dimension, self.runtime_ms
        )
    }

    pub fn parse_csv_row(line: &str) -> Result<Self> {
        let cols: Vec<&str> = line.trim_end_matches(['\r', '\n']).split(',').collect();
        if cols.len() != 8 {
            return Err(Error::usage(format!("expected 8 columns, found {}", cols.len())));
        }
        let int = |s: &str, what: &str| -> Result<i64> {
            s.parse().map_err(|_| Error::usage(format!("bad {what} `{s}`")))
        };
        let record = FiberDimensionRecord {
            p1: parse_rational(cols[0])?,
            p2: parse_rational(cols[1])?,
            mode: cols[2].parse()?,
            k_max: usize::try_from(int(cols[3], "kmax")?).map_err(|_| Error::usage("negative kmax"))?,
            p4_mode: cols[4].parse()?,
            field: cols[5].parse()?,
            dimension: int(cols[6], "dimension")?,
            runtime_ms: u64::try_from(int(cols[7], "runtime_ms")?)
                .map_err(|_| Error::usage("negative runtime"))?,
        };
        if !(-1..=BASE_VARS.len() as i64).contains(&record.dimension) {
            return Err(Error::usage(format!("dimension {} out of range", record.dimension)));
        }
        Ok(record)
    }
}

impl fmt::Display for FiberDimensionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.csv_row())
    }
}

/// The generators `κ_{L_3}, …, κ_{L_kmax}` over the parametrized ring, computed
/// once and specialized per point.
#[derive(Debug, Clone)]
pub struct HirzebruchFamily {
    mode: Mode,
    k_max: usize,
    p4_mode: P4Mode,
    generators: Vec<Polynomial>,
}

impl HirzebruchFamily {
    pub fn new(mode: Mode, k_max: usize, p4_mode: P4Mode) -> Result<Self> {
        let generators = ModelRing::new(mode)
            .hirzebruch_generators(k_max, p4_mode)?
            .into_iter()
            .map(|k| k.value)
            .collect();
        Ok(HirzebruchFamily {
            mode,
            k_max,
            p4_mode,
            generators,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn p4_mode(&self) -> P4Mode {
        self.p4_mode
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// The specialized ideal in the 8-variable base ring.
    pub fn specialize(&self, p1: &Rational, p2: Option<&Rational>) -> Result<Ideal> {
        match (self.mode, p2) {
            (Mode::Signature, Some(_)) => return Err(Error::usage("signature mode takes no p2")),
            (Mode::Free, None) => return Err(Error::usage("free mode needs a p2 value")),
            _ => {}
        }
        let gens = self
            .generators
            .iter()
            .map(|g| specialize_parameters(g, p1, p2))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(&base_ring(), gens)
    }
}

/// Everything besides the point that controls a fibre computation.
#[derive(Debug, Clone)]
pub struct FiberOptions {
    pub field: Field,
    pub order: MonomialOrder,
    pub timeout: Option<Duration>,
    /// Over ℚ, compute the full reduced basis instead of a dimension certificate.
    pub full_basis: bool,
    /// On a rational timeout, rerun modulo [`DEFAULT_PRIME`] and flag the record.
    pub prime_fallback: bool,
}

impl Default for FiberOptions {
    fn default() -> Self {
        FiberOptions {
            field: Field::Rational,
            order: MonomialOrder::degrevlex(BASE_VARS.len()),
            timeout: None,
            full_basis: false,
            prime_fallback: false,
        }
    }
}

/// How a fibre dimension was obtained.
#[derive(Debug, Clone)]
pub enum Evidence {
    /// Exact over ℚ.
    Certified(DimensionCertificate),
    /// A basis modulo a prime; the dimension is exact there and an upper bound over ℚ.
    Modular(GroebnerBasis),
}

impl Evidence {
    pub fn dimension(&self) -> i64 {
        match self {
            Evidence::Certified(c) => c.dimension,
            Evidence::Modular(gb) => gb.krull_dimension(),
        }
    }

    pub fn canonical_text(&self) -> String {
        match self {
            Evidence::Certified(c) => c.canonical_text(),
            Evidence::Modular(gb) => gb.canonical_text(),
        }
    }
}

/// A record together with the computation behind it.
#[derive(Debug, Clone)]
pub struct FiberOutcome {
    pub record: FiberDimensionRecord,
    pub evidence: Evidence,
}

fn evidence_for(ideal: &Ideal, field: Field, opts: &FiberOptions, deadline: Option<Instant>) -> Result<Evidence> {
    let gb_opts = GbOptions {
        field,
        deadline,
        ..GbOptions::new(opts.order.clone())
    };
    match field {
        Field::Prime(_) => Ok(Evidence::Modular(buchberger_with(ideal, &gb_opts)?)),
        Field::Rational if opts.full_basis => {
            let gb = buchberger_with(ideal, &gb_opts)?;
            Ok(Evidence::Certified(DimensionCertificate {
                dimension: gb.krull_dimension(),
                proof: DimensionProof::Exact(gb),
            }))
        }
        Field::Rational => Ok(Evidence::Certified(certify_dimension(ideal, &gb_opts)?)),
    }
}

pub fn compute_fiber(
    family: &HirzebruchFamily,
    p1: &Rational,
    p2: Option<&Rational>,
    opts: &FiberOptions,
) -> Result<FiberOutcome> {
    let ideal = family.specialize(p1, p2)?;
    let start = Instant::now();
    let deadline = opts.timeout.map(|t| start + t);
    let (evidence, field) = match evidence_for(&ideal, opts.field, opts, deadline) {
        Err(Error::Timeout { .. }) if opts.prime_fallback && opts.field == Field::Rational => {
            let field = Field::Prime(DEFAULT_PRIME);
            (evidence_for(&ideal, field, opts, None)?, field)
        }
        other => (other?, opts.field),
    };
    let record = FiberDimensionRecord {
        p1: p1.clone(),
        p2: p2.cloned().unwrap_or_else(|| signature_p2(p1)),
        mode: family.mode(),
        k_max: family.k_max(),
        p4_mode: family.p4_mode(),
        field,
        dimension: evidence.dimension(),
        runtime_ms: start.elapsed().as_millis() as u64,
    };
    Ok(FiberOutcome { record, evidence })
}

/// Fibre dimension at one point with the default order and no time limit.
///
/// Signature mode is used when `p2` is `None`.
pub fn specialize_and_dim(
    k_max: usize,
    p1: &Rational,
    p2: Option<&Rational>,
    p4_mode: P4Mode,
    field: Field,
) -> Result<FiberDimensionRecord> {
    let mode = if p2.is_some() { Mode::Free } else { Mode::Signature };
    let family = HirzebruchFamily::new(mode, k_max, p4_mode)?;
    let opts = FiberOptions {
        field,
        ..FiberOptions::default()
    };
    Ok(compute_fiber(&family, p1, p2, &opts)?.record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn csv_roundtrip() {
        let r = FiberDimensionRecord {
            p1: int(2),
            p2: int(7),
            mode: Mode::Signature,
            k_max: 10,
            p4_mode: P4Mode::EulerSquared,
            field: Field::Rational,
            dimension: 3,
            runtime_ms: 1234,
        };
        let row = r.csv_row();
        assert_eq!(row, "2,7,signature,10,euler-squared,rational,3,1234");
        assert_eq!(FiberDimensionRecord::parse_csv_row(&row).unwrap(), r);
        let q = FiberDimensionRecord {
            p1: frac(-3, 2),
            p2: frac(63, 16),
            mode: Mode::Free,
            field: Field::Prime(32003),
            dimension: -1,
            ..r
        };
        assert_eq!(q.csv_row(), "-3/2,63/16,free,10,euler-squared,prime:32003,-1,1234");
        assert_eq!(FiberDimensionRecord::parse_csv_row(&q.csv_row()).unwrap(), q);
        assert!(FiberDimensionRecord::parse_csv_row("2,7,signature,10").is_err());
        assert!(FiberDimensionRecord::parse_csv_row("2,7,signature,10,euler-squared,rational,9,1").is_err());
    }

    #[test]
    fn mode_and_p2_must_agree() {
        let sig = HirzebruchFamily::new(Mode::Signature, 3, P4Mode::EulerSquared).unwrap();
        assert!(sig.specialize(&int(2), Some(&int(7))).is_err());
        let free = HirzebruchFamily::new(Mode::Free, 3, P4Mode::EulerSquared).unwrap();
        assert!(free.specialize(&int(2), None).is_err());
    }

    #[test]
    fn small_kmax_fibre_is_positive_dimensional() {
        // A single generator cuts out a hypersurface.
        let rec = specialize_and_dim(3, &int(2), None, P4Mode::EulerSquared, Field::Rational).unwrap();
        assert_eq!(rec.dimension, 7);
        assert_eq!(rec.p2, int(7));
        assert_eq!(rec.mode, Mode::Signature);
    }
}
