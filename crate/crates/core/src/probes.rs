//! Seeded probe sets for the domination checks and the Monte Carlo oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;
use crate::operators::{check_bilinear_domination, check_multilinear_domination, TGrid};
use crate::sliced::Sliced;
use crate::sphere::mc::mc_spherical_average;
use crate::sphere::SphereQuadrature;

/// Grid spacing used by the probe suites.
pub const PROBE_RATIO: f64 = 1.05;
pub const PROBE_DEPTH: u32 = 8;

/// `χ_[a,b]` with `a ∈ [-2, 1]` and length in `[0.1, 2.1]`.
pub fn random_indicator<R: Rng>(rng: &mut R) -> FunctionSpec {
    let a = rng.random_range(-2.0..1.0);
    let len = rng.random_range(0.1..2.1);
    FunctionSpec::indicator(a, a + len).expect("positive length")
}

/// Indicator or power-log with square-integrable singularity.
pub fn random_l2_input<R: Rng>(rng: &mut R) -> FunctionSpec {
    if rng.random_bool(0.5) {
        random_indicator(rng)
    } else {
        let alpha = rng.random_range(0.0..0.45);
        let beta = rng.random_range(0.0..2.0);
        let s = rng.random_range(0.1..0.9);
        FunctionSpec::power_log(alpha, beta, s).expect("valid parameters")
    }
}

fn probe_grid(fs: &[FunctionSpec], x: f64) -> Result<TGrid> {
    let g = TGrid::infer(fs, x)?;
    TGrid::new(g.t_min, g.t_max, PROBE_RATIO, PROBE_DEPTH)
}

/// One failed probe.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeFailure {
    pub index: usize,
    pub fs: Vec<FunctionSpec>,
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationSummary {
    pub kind: &'static str,
    pub m: usize,
    pub probes: usize,
    pub seed: u64,
    pub violations: usize,
    /// Largest `lhs / rhs` seen.
    pub worst_ratio: f64,
    pub failures: Vec<ProbeFailure>,
    pub ok: bool,
}

/// `(lhs, rhs, ok, inputs, x)` for one probe.
type ProbeRow = (f64, f64, bool, Vec<FunctionSpec>, f64);

fn summarize(kind: &'static str, m: usize, seed: u64, rows: Vec<ProbeRow>) -> DominationSummary {
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (i, (lhs, rhs, ok, fs, x)) in rows.iter().enumerate() {
        if *rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
        if !ok {
            failures.push(ProbeFailure {
                index: i,
                fs: fs.clone(),
                x: *x,
                lhs: *lhs,
                rhs: *rhs,
            });
        }
    }
    DominationSummary {
        kind,
        m,
        probes: rows.len(),
        seed,
        violations: failures.len(),
        worst_ratio: worst,
        ok: failures.is_empty(),
        failures,
    }
}

/// Random `(f, g, x, ε, q)` with `εq' < 2`, each checked scale by scale.
pub fn bilinear_suite(probes: usize, seed: u64, sliced: &Sliced) -> Result<DominationSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(FunctionSpec, FunctionSpec, f64, f64, f64)> = (0..probes)
        .map(|_| {
            let f = random_l2_input(&mut rng);
            let g = random_indicator(&mut rng);
            let x = rng.random_range(-2.0..2.0);
            let q: f64 = rng.random_range(1.2..3.0);
            let qp = q / (q - 1.0);
            let eps = rng.random_range(0.05..(0.9f64).min(1.9 / qp));
            (f, g, x, eps, q)
        })
        .collect();
    let rows = cases
        .par_iter()
        .map(|&(f, g, x, eps, q)| {
            let r = check_bilinear_domination(&f, &g, x, eps, q, &probe_grid(&[f, g], x)?, sliced)?;
            Ok((r.worst_ratio, 1.0, r.ok, vec![f, g], x))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize("bilinear", 2, seed, rows))
}

/// Random indicator tuples of length `m ≥ 3` at random `x`.
pub fn multilinear_suite(
    m: usize,
    probes: usize,
    seed: u64,
    sliced: &Sliced,
) -> Result<DominationSummary> {
    if m < 3 {
        return Err(Error::UnsupportedDimension(m));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(Vec<FunctionSpec>, f64)> = (0..probes)
        .map(|_| {
            let fs = (0..m).map(|_| random_indicator(&mut rng)).collect();
            (fs, rng.random_range(-2.0..2.0))
        })
        .collect();
    let rows = cases
        .par_iter()
        .map(|(fs, x)| {
            let r = check_multilinear_domination(fs, *x, &probe_grid(fs, *x)?, sliced)?;
            Ok((r.lhs, r.rhs, r.ok, fs.clone(), *x))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize("multilinear", m, seed, rows))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCase {
    pub fs: Vec<FunctionSpec>,
    pub t: f64,
    pub x: f64,
    pub value: f64,
    pub mc_mean: f64,
    pub mc_std_error: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub m: usize,
    pub samples: usize,
    pub seed: u64,
    pub max_z: f64,
    pub cases: Vec<OracleCase>,
    pub ok: bool,
}

/// Deterministic rule against Monte Carlo on random indicator tuples;
/// passes when every case agrees within `z_max` standard errors.
pub fn oracle_suite<Q>(
    m: usize,
    cases: usize,
    samples: usize,
    seed: u64,
    z_max: f64,
    rule: &Q,
) -> Result<OracleSummary>
where
    Q: SphereQuadrature + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<(Vec<FunctionSpec>, f64, f64, u64)> = (0..cases)
        .map(|_| {
            let fs = (0..m).map(|_| random_indicator(&mut rng)).collect();
            let t = rng.random_range(0.3..2.5);
            let x = rng.random_range(-1.0..1.0);
            (fs, t, x, rng.random())
        })
        .collect();
    let cases = inputs
        .par_iter()
        .map(|(fs, t, x, s)| {
            let value = rule.sphere_average(fs, *t, *x)?;
            let mc = mc_spherical_average(fs, *t, *x, samples, *s)?;
            let z = if mc.std_error == 0.0 {
                if value == mc.mean {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                mc.z_score(value)
            };
            Ok(OracleCase {
                fs: fs.clone(),
                t: *t,
                x: *x,
                value,
                mc_mean: mc.mean,
                mc_std_error: mc.std_error,
                z,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_z = cases.iter().map(|c| c.z).fold(0.0, f64::max);
    Ok(OracleSummary {
        m,
        samples,
        seed,
        max_z,
        ok: max_z <= z_max,
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let sl = Sliced::default();
        let b = bilinear_suite(6, 1, &sl).unwrap();
        assert!(b.ok, "{b:?}");
        let m = multilinear_suite(3, 4, 1, &sl).unwrap();
        assert!(m.ok, "{m:?}");
        assert!(multilinear_suite(2, 1, 1, &sl).is_err());
    }

    #[test]
    fn seeded_suites_repeat() {
        let sl = Sliced::default();
        assert_eq!(
            bilinear_suite(3, 9, &sl).unwrap(),
            bilinear_suite(3, 9, &sl).unwrap()
        );
        let a = oracle_suite(2, 3, 2000, 4, 4.0, &sl).unwrap();
        assert_eq!(a, oracle_suite(2, 3, 2000, 4, 4.0, &sl).unwrap());
    }
}
