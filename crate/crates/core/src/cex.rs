//! Counterexample families: scaling probes with least-squares slope fits,
//! plus a numerical check of the power-log comparison inequality.
//!
//! Every value is a lower bound for the maximal operator, realized at an
//! explicitly evaluated scale.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{fit_line, fit_loglog, LineFit};
use crate::funcspec::FunctionSpec;
use crate::operators::{spherical_maximal, TGrid};
use crate::quad::{gamma_half, Sum, TanhSinh, DEFAULT_LEVEL};
use crate::region::{check_conditions, ExponentPoint};
use crate::sphere::{BallQuadrature, SphereQuadrature};

/// Probe points for the condition (a) and (b) families.
pub const A_PROBE_XS: [f64; 3] = [0.5, 0.75, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    L2,
    H,
    Hi,
    Corner,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::A,
        Family::B,
        Family::L2,
        Family::H,
        Family::Hi,
        Family::Corner,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Family::A => "a",
            Family::B => "b",
            Family::L2 => "l2",
            Family::H => "H",
            Family::Hi => "Hi",
            Family::Corner => "corner",
        }
    }

    /// Name of the swept parameter.
    pub fn parameter(&self) -> &'static str {
        match self {
            Family::A | Family::B => "delta",
            Family::L2 => "eta",
            _ => "x",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// How the slope was fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    /// `log value` against `log param`.
    LogLog,
    /// `value` against `log log (1/param)`.
    LogLogParam,
}

/// Outcome of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub family: Family,
    pub m: usize,
    pub parameter: &'static str,
    pub params: Vec<f64>,
    pub values: Vec<f64>,
    /// Scale at which each value was realized.
    pub argmax_t: Vec<f64>,
    pub fit: FitKind,
    pub fitted_slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub expected_slope: f64,
    pub tolerance: f64,
    /// Extra per-parameter columns (compensated values, analytic bounds, …).
    pub columns: BTreeMap<String, Vec<f64>>,
    /// Extra scalar diagnostics.
    pub diagnostics: BTreeMap<String, f64>,
    pub slope_ok: bool,
    /// Family-specific side conditions (monotone growth, ratio spread, …).
    pub checks_ok: bool,
}

impl ScalingReport {
    pub fn ok(&self) -> bool {
        self.slope_ok && self.checks_ok
    }

    /// One row per parameter; fit columns repeat on every row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![
            "family".to_string(),
            "m".into(),
            self.parameter.into(),
            "value".into(),
            "argmax_t".into(),
        ];
        header.extend(self.columns.keys().cloned());
        header.extend(
            [
                "fitted_slope",
                "intercept",
                "max_residual",
                "expected_slope",
                "tolerance",
                "ok",
            ]
            .iter()
            .map(|s| s.to_string()),
        );
        w.write_record(&header)?;
        for i in 0..self.params.len() {
            let mut row = vec![
                self.family.tag().to_string(),
                self.m.to_string(),
                num(self.params[i]),
                num(self.values[i]),
                num(self.argmax_t[i]),
            ];
            row.extend(self.columns.values().map(|c| num(c[i])));
            row.extend([
                num(self.fitted_slope),
                num(self.intercept),
                num(self.max_residual),
                num(self.expected_slope),
                num(self.tolerance),
                self.ok().to_string(),
            ]);
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// Shortest round-trip form.
fn num(v: f64) -> String {
    format!("{v:?}")
}

/// Grid placed around each probe scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeGrid {
    pub spread: f64,
    pub ratio: f64,
    pub depth: u32,
}

impl Default for ProbeGrid {
    fn default() -> Self {
        Self {
            spread: 1.5,
            ratio: TGrid::DEFAULT_RATIO,
            depth: TGrid::DEFAULT_DEPTH,
        }
    }
}

impl ProbeGrid {
    pub fn around(&self, t: f64) -> Result<TGrid> {
        if !(self.spread > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "spread must exceed 1, got {}",
                self.spread
            )));
        }
        Ok(TGrid::new(t / self.spread, t * self.spread, self.ratio, self.depth)?.with_anchors([t]))
    }
}

/// Default sweeps, powers of two (of ten for `l2`). The `Hi` sweep starts an
/// octave higher: its `(log x)^{-2 q_m}` factor tilts the pure-power slope by
/// `-2 q_m / log x`.
pub fn default_params(family: Family, m: usize) -> Vec<f64> {
    let pow2 = |r: std::ops::RangeInclusive<i32>| r.map(|k| 2f64.powi(k)).collect::<Vec<_>>();
    match family {
        Family::A | Family::B => (3..=9).map(|k| 2f64.powi(-k)).collect(),
        Family::L2 => (2..=8).map(|k| 10f64.powi(-k)).collect(),
        Family::H if m >= 3 => pow2(3..=6),
        Family::Hi if m >= 3 => pow2(4..=7),
        Family::Hi => pow2(4..=8),
        Family::H | Family::Corner => pow2(3..=7),
    }
}

/// Default slope tolerance per family.
pub fn default_tolerance(family: Family, m: usize) -> f64 {
    match family {
        Family::A | Family::B | Family::Corner => 0.1,
        Family::H if m == 2 => 0.1,
        Family::H => 0.15,
        Family::Hi if m == 2 => 0.15,
        Family::Hi => 0.2,
        Family::L2 => f64::NAN,
    }
}

fn check_monotone(params: &[f64], decreasing: bool) -> Result<()> {
    if params.len() < 2 {
        return Err(Error::InvalidArgument(
            "a sweep needs at least two parameters".into(),
        ));
    }
    let ok = params
        .windows(2)
        .all(|w| if decreasing { w[1] < w[0] } else { w[1] > w[0] });
    if !ok {
        let dir = if decreasing {
            "decreasing"
        } else {
            "increasing"
        };
        return Err(Error::InvalidArgument(format!(
            "parameters must be strictly {dir}"
        )));
    }
    Ok(())
}

/// Refuses support scales the rule cannot see.
fn guard<Q: SphereQuadrature + ?Sized>(rule: &Q, width: f64, t: f64) -> Result<()> {
    let scale = width / t;
    let resolution = rule.resolution();
    if resolution > 0.0 && scale < resolution {
        return Err(Error::Resolution { scale, resolution });
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn power_report(
    family: Family,
    m: usize,
    params: Vec<f64>,
    cells: Vec<(f64, f64)>,
    expected_slope: f64,
    tolerance: f64,
    columns: BTreeMap<String, Vec<f64>>,
    diagnostics: BTreeMap<String, f64>,
    checks_ok: bool,
) -> Result<ScalingReport> {
    let (values, argmax_t): (Vec<f64>, Vec<f64>) = cells.into_iter().unzip();
    if let Some(bad) = values.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument(format!(
            "{family} family produced a non-positive or infinite value {} at {} = {}",
            values[bad],
            family.parameter(),
            params[bad]
        )));
    }
    let LineFit {
        slope,
        intercept,
        max_residual,
    } = fit_loglog(&params, &values)?;
    Ok(ScalingReport {
        family,
        m,
        parameter: family.parameter(),
        params,
        values,
        argmax_t,
        fit: FitKind::LogLog,
        fitted_slope: slope,
        intercept,
        max_residual,
        expected_slope,
        tolerance,
        columns,
        diagnostics,
        slope_ok: (slope - expected_slope).abs() <= tolerance,
        checks_ok,
    })
}

fn min_over_probes<Q>(
    fs: &[FunctionSpec],
    radius: f64,
    grid: &ProbeGrid,
    rule: &Q,
) -> Result<(f64, f64)>
where
    Q: SphereQuadrature + ?Sized,
{
    let mut best = (f64::INFINITY, f64::NAN);
    for &x in &A_PROBE_XS {
        let est = spherical_maximal(fs, x, &grid.around(x * radius)?, rule)?;
        if est.value < best.0 {
            best = (est.value, est.argmax_t);
        }
    }
    Ok(best)
}

fn check_deltas(m: usize, deltas: &[f64]) -> Result<()> {
    if m < 2 {
        return Err(Error::UnsupportedDimension(m));
    }
    check_monotone(deltas, true)?;
    if deltas.iter().any(|&d| !(d > 0.0 && d <= 0.125)) {
        return Err(Error::InvalidArgument("deltas must lie in (0, 1/8]".into()));
    }
    Ok(())
}

/// All inputs `χ_[-δ,δ]`, probe `t = x√m`; the value is the smallest
/// maximal value over `x ∈ {1/2, 3/4, 1}`. Expected decay `δ^{m-1}`.
pub fn cex_condition_a<Q>(
    m: usize,
    deltas: &[f64],
    grid: &ProbeGrid,
    rule: &Q,
) -> Result<ScalingReport>
where
    Q: SphereQuadrature + ?Sized,
{
    check_deltas(m, deltas)?;
    let radius = (m as f64).sqrt();
    for &d in deltas {
        guard(rule, d, radius * A_PROBE_XS[2])?;
    }
    let cells: Vec<(f64, f64)> = deltas
        .par_iter()
        .map(|&d| {
            let fs = vec![FunctionSpec::indicator(-d, d)?; m];
            min_over_probes(&fs, radius, grid, rule)
        })
        .collect::<Result<_>>()?;
    let scaled = deltas
        .iter()
        .zip(&cells)
        .map(|(d, c)| c.0 / d.powi(m as i32 - 1))
        .collect();
    let columns = BTreeMap::from([("value_over_rate".to_string(), scaled)]);
    power_report(
        Family::A,
        m,
        deltas.to_vec(),
        cells,
        m as f64 - 1.0,
        default_tolerance(Family::A, m),
        columns,
        BTreeMap::new(),
        true,
    )
}

/// `f_1 = χ_[-10√m, 10√m]`, the rest `χ_[-δ,δ]`, probe `t = x√(m-1)` where
/// the sphere is tangent to the first axis. Expected decay `δ^{m-3/2}`.
pub fn cex_condition_b<Q>(
    m: usize,
    deltas: &[f64],
    grid: &ProbeGrid,
    rule: &Q,
) -> Result<ScalingReport>
where
    Q: SphereQuadrature + ?Sized,
{
    check_deltas(m, deltas)?;
    let radius = (m as f64 - 1.0).sqrt();
    for &d in deltas {
        guard(rule, d, radius * A_PROBE_XS[2])?;
    }
    let wide = 10.0 * (m as f64).sqrt();
    let cells: Vec<(f64, f64)> = deltas
        .par_iter()
        .map(|&d| {
            let mut fs = vec![FunctionSpec::indicator(-d, d)?; m];
            fs[0] = FunctionSpec::indicator(-wide, wide)?;
            min_over_probes(&fs, radius, grid, rule)
        })
        .collect::<Result<_>>()?;
    // against the (a)-family rate δ^{m-1}; grows without bound as δ → 0
    let scaled = deltas
        .iter()
        .zip(&cells)
        .map(|(d, c)| c.0 / d.powi(m as i32 - 1))
        .collect();
    let columns = BTreeMap::from([("value_over_a_rate".to_string(), scaled)]);
    power_report(
        Family::B,
        m,
        deltas.to_vec(),
        cells,
        m as f64 - 1.5,
        default_tolerance(Family::B, m),
        columns,
        BTreeMap::new(),
        true,
    )
}

/// `log log (1/η) - log log (1/x)`, the exact value of
/// `∫_η^x du / (u log(1/u))`.
pub fn l2_analytic_integral(x: f64, eta: f64) -> f64 {
    (1.0 / eta).ln().ln() - (1.0 / x).ln().ln()
}

/// Direct quadrature of `∫_η^x du / (u log(1/u))` on dyadic panels, as an
/// independent check of the antiderivative.
pub fn l2_integral_quadrature(x: f64, eta: f64) -> f64 {
    let ts = TanhSinh::new(DEFAULT_LEVEL + 1);
    let mut acc = Sum::default();
    let mut a = eta;
    while a < x {
        let b = (2.0 * a).min(x);
        acc.add(ts.panel(a, b, |p| 1.0 / (p.pos * -p.pos.ln())));
        a = b;
    }
    acc.value()
}

/// `∫ f(x - x cos θ) g(x - x sin θ) dθ` over the quarter arc `0 ≤ θ ≤ π/2`,
/// keeping only `|x - x cos θ| ≥ η`. Unnormalized.
pub fn l2_truncated_arc(f: &FunctionSpec, g: &FunctionSpec, x: f64, eta: f64) -> f64 {
    let ts = TanhSinh::new(DEFAULT_LEVEL + 1);
    // u = 2x sin²(θ/2) reaches η at θ_η
    let theta_eta = 2.0 * (eta / (2.0 * x)).sqrt().asin();
    let mut acc = Sum::default();
    let mut a = theta_eta;
    while a < FRAC_PI_2 {
        let b = (2.0 * a).min(FRAC_PI_2);
        acc.add(ts.panel(a, b, |p| {
            let s = (0.5 * p.pos).sin();
            let u = 2.0 * x * s * s;
            if u < eta {
                return 0.0;
            }
            f.eval(u) * g.eval(x - x * p.pos.sin())
        }));
        a = b;
    }
    acc.value()
}

/// `f = |u|^{-1/2} (log 1/|u|)^{-1} χ_[-1/2,1/2]`, `g = χ_[-10,10]`, `t = x`:
/// the quarter arc through the singularity, truncated at `|u| ≥ η`, grows
/// like `(1/√(2x)) log log (1/η)`. The fit is of value against
/// `log log (1/η)`.
pub fn cex_bilinear_l2(etas: &[f64], x: f64) -> Result<ScalingReport> {
    check_monotone(etas, true)?;
    if etas.iter().any(|&e| !(e > 0.0 && e < (-2f64).exp())) {
        return Err(Error::InvalidArgument("etas must lie in (0, e^-2)".into()));
    }
    if !(0.25..=0.5).contains(&x) {
        return Err(Error::InvalidArgument(format!(
            "x must lie in [1/4, 1/2], got {x}"
        )));
    }
    let f = FunctionSpec::power_log(0.5, 1.0, 0.5)?;
    let g = FunctionSpec::indicator(-10.0, 10.0)?;
    let values: Vec<f64> = etas
        .par_iter()
        .map(|&e| l2_truncated_arc(&f, &g, x, e))
        .collect();
    let prefactor = 1.0 / (2.0 * x).sqrt();
    let integral: Vec<f64> = etas.iter().map(|&e| l2_analytic_integral(x, e)).collect();
    let quadrature: Vec<f64> = etas.iter().map(|&e| l2_integral_quadrature(x, e)).collect();
    let lower: Vec<f64> = integral.iter().map(|v| prefactor * v).collect();
    let loglog: Vec<f64> = etas.iter().map(|e| (1.0 / e).ln().ln()).collect();
    let LineFit {
        slope,
        intercept,
        max_residual,
    } = fit_line(&loglog, &values)?;

    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let growth = values[values.len() - 1] / values[0];
    let doubled = growth > 2.0;
    let dominates = values.iter().zip(&lower).all(|(v, l)| *v >= 0.95 * l);
    let diagnostics = BTreeMap::from([
        ("x".to_string(), x),
        ("growth_ratio".to_string(), growth),
        ("increasing".to_string(), increasing as u8 as f64),
        ("exceeds_double".to_string(), doubled as u8 as f64),
        ("dominates_lower_bound".to_string(), dominates as u8 as f64),
    ]);
    let columns = BTreeMap::from([
        ("analytic_integral".to_string(), integral),
        ("analytic_lower_bound".to_string(), lower),
        ("integral_quadrature".to_string(), quadrature),
        ("loglog_inv_eta".to_string(), loglog),
    ]);
    Ok(ScalingReport {
        family: Family::L2,
        m: 2,
        parameter: Family::L2.parameter(),
        params: etas.to_vec(),
        values,
        argmax_t: vec![x; etas.len()],
        fit: FitKind::LogLogParam,
        fitted_slope: slope,
        intercept,
        max_residual,
        expected_slope: prefactor,
        tolerance: 0.1 * prefactor,
        columns,
        diagnostics,
        slope_ok: (slope - prefactor).abs() <= 0.1 * prefactor,
        checks_ok: increasing && doubled && dominates,
    })
}

fn check_xs(xs: &[f64], min: f64) -> Result<()> {
    check_monotone(xs, false)?;
    if xs[0] < min {
        return Err(Error::InvalidArgument(format!(
            "probe points must be at least {min}"
        )));
    }
    Ok(())
}

fn f64s(pt: &ExponentPoint) -> Vec<f64> {
    pt.to_f64()
}

fn powerlog_inputs(q: &[f64]) -> Result<Vec<FunctionSpec>> {
    q.iter()
        .map(|&qi| FunctionSpec::power_log(qi, 2.0 * qi, 0.5))
        .collect()
}

fn spread_of(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}

/// `f_i = |u|^{-q_i} (log 1/|u|)^{-2 q_i} χ_[-1/2,1/2]` with `q ∈ H`, probe
/// `t = x√m` through the common singularity. Expected decay `x^{1-m}`.
pub fn cex_h<Q>(pt: &ExponentPoint, xs: &[f64], grid: &ProbeGrid, rule: &Q) -> Result<ScalingReport>
where
    Q: SphereQuadrature + ?Sized,
{
    if !check_conditions(pt).in_h {
        return Err(Error::NotOnBoundary(format!("H: {pt}")));
    }
    check_xs(xs, 8.0)?;
    let m = pt.m();
    let fs = powerlog_inputs(&f64s(pt))?;
    let radius = (m as f64).sqrt();
    for &x in xs {
        guard(rule, 0.5, radius * x)?;
    }
    let cells: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&x| {
            let e = spherical_maximal(&fs, x, &grid.around(radius * x)?, rule)?;
            Ok((e.value, e.argmax_t))
        })
        .collect::<Result<_>>()?;
    let compensated: Vec<f64> = xs
        .iter()
        .zip(&cells)
        .map(|(x, c)| c.0 * x.powi(m as i32 - 1))
        .collect();
    let min_comp = compensated.iter().copied().fold(f64::INFINITY, f64::min);
    let diagnostics = BTreeMap::from([
        ("min_compensated".to_string(), min_comp),
        ("compensated_spread".to_string(), spread_of(&compensated)),
    ]);
    let columns = BTreeMap::from([("compensated".to_string(), compensated)]);
    power_report(
        Family::H,
        m,
        xs.to_vec(),
        cells,
        1.0 - m as f64,
        default_tolerance(Family::H, m),
        columns,
        diagnostics,
        min_comp > 0.0,
    )
}

/// `q ∈ H_m`: the last input is the tail `|u|^{-q_m} (log|u|)^{-2 q_m}` off
/// `[-2, 2]`, the others as in [`cex_h`]; probe `t = x√(m-1)`. Expected
/// decay `x^{-1/p}` up to the log factor, whose compensated spread is
/// reported and must stay below 4.
pub fn cex_hi<Q>(
    pt: &ExponentPoint,
    xs: &[f64],
    grid: &ProbeGrid,
    rule: &Q,
) -> Result<ScalingReport>
where
    Q: SphereQuadrature + ?Sized,
{
    let m = pt.m();
    if !check_conditions(pt).in_h_i[m - 1] {
        return Err(Error::NotOnBoundary(format!("H_{m}: {pt}")));
    }
    check_xs(xs, 8.0)?;
    let q = f64s(pt);
    let mut fs = powerlog_inputs(&q[..m - 1])?;
    fs.push(FunctionSpec::power_log_tail(q[m - 1], 2.0 * q[m - 1], 2.0)?);
    let radius = (m as f64 - 1.0).sqrt();
    for &x in xs {
        guard(rule, 0.5, radius * x)?;
    }
    let cells: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&x| {
            let e = spherical_maximal(&fs, x, &grid.around(radius * x)?, rule)?;
            Ok((e.value, e.argmax_t))
        })
        .collect::<Result<_>>()?;
    let recip_p: f64 = q.iter().sum();
    let compensated: Vec<f64> = xs
        .iter()
        .zip(&cells)
        .map(|(x, c)| c.0 * x.powf(recip_p) * x.ln().powf(2.0 * q[m - 1]))
        .collect();
    let spread = spread_of(&compensated);
    let diagnostics = BTreeMap::from([("compensated_spread".to_string(), spread)]);
    let columns = BTreeMap::from([("compensated".to_string(), compensated)]);
    power_report(
        Family::Hi,
        m,
        xs.to_vec(),
        cells,
        -recip_p,
        default_tolerance(Family::Hi, m),
        columns,
        diagnostics,
        spread < 4.0,
    )
}

/// `Γ(m/2) / (Γ((m-k)/2) Γ(k/2 + 1))`: the density of the projection of the
/// normalized sphere measure onto `k` coordinates, at its minimum, times
/// the volume of the unit `k`-ball.
pub fn corner_projection_constant(m: usize, k: usize) -> f64 {
    gamma_half(m) / (gamma_half(m - k) * gamma_half(k + 2))
}

/// `f_1 = ⋯ = f_k = χ_(-1,1)`, the rest `≡ 1`, probe `t = x√k`.
///
/// The value is the projected lower bound: the first `k` coordinates of a
/// uniform point on `S^{m-1}` have density `∝ (1 - |z|²)^{(m-k-2)/2}`, which is
/// at least its value at `z = 0` when `m - k ≤ 2`, so
/// `S^m_t ≥ κ ∫_{B^k} Π χ(x - t z_i) dz`, decaying like `x^{-k}`. The full
/// maximal value is reported alongside as `operator_value`.
pub fn cex_corner<Q>(
    m: usize,
    k: usize,
    xs: &[f64],
    grid: &ProbeGrid,
    rule: &Q,
) -> Result<ScalingReport>
where
    Q: SphereQuadrature + BallQuadrature + ?Sized,
{
    if !(1..m).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= m - 1, got k = {k}, m = {m}"
        )));
    }
    if m - k > 2 {
        return Err(Error::InvalidArgument(format!(
            "projected bound needs m - k <= 2, got m = {m}, k = {k}"
        )));
    }
    check_xs(xs, 4.0)?;
    let radius = (k as f64).sqrt();
    for &x in xs {
        guard(rule, 1.0, radius * x)?;
    }
    let kappa = corner_projection_constant(m, k);
    let bump = FunctionSpec::indicator(-1.0, 1.0)?;
    let one = FunctionSpec::constant(1.0)?;
    let head = vec![bump; k];
    let mut fs = head.clone();
    fs.extend(std::iter::repeat_n(one, m - k));
    let rows: Vec<(f64, f64, f64)> = xs
        .par_iter()
        .map(|&x| {
            let t = radius * x;
            let lower = kappa * rule.ball_average(&head, t, x)?;
            let op = spherical_maximal(&fs, x, &grid.around(t)?, rule)?;
            Ok((lower, t, op.value))
        })
        .collect::<Result<_>>()?;
    let cells: Vec<(f64, f64)> = rows.iter().map(|r| (r.0, r.1)).collect();
    let operator: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let below = rows.iter().all(|r| r.0 <= r.2 * (1.0 + 1e-9));
    let op_fit = fit_loglog(xs, &operator)?;
    let diagnostics = BTreeMap::from([
        ("k".to_string(), k as f64),
        ("kappa".to_string(), kappa),
        ("operator_slope".to_string(), op_fit.slope),
        (
            "operator_expected_slope".to_string(),
            -((m + k) as f64 - 2.0) / 2.0,
        ),
    ]);
    let columns = BTreeMap::from([("operator_value".to_string(), operator)]);
    power_report(
        Family::Corner,
        m,
        xs.to_vec(),
        cells,
        -(k as f64),
        default_tolerance(Family::Corner, m),
        columns,
        diagnostics,
        below,
    )
}

/// `φ(u) = u^{-r1} (log 1/u)^{-r2}`.
pub fn lemma_phi(r1: f64, r2: f64, u: f64) -> f64 {
    u.powf(-r1) * (1.0 / u).ln().powf(-r2)
}

/// `φ(s) / φ(t)`, computed in logs.
pub fn lemma_ratio(r1: f64, r2: f64, s: f64, t: f64) -> f64 {
    let (ls, lt) = ((1.0 / s).ln(), (1.0 / t).ln());
    (r1 * (ls - lt) - r2 * (ls / lt).ln()).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub r1: f64,
    pub r2: f64,
    pub c: f64,
    pub samples: usize,
    pub seed: u64,
    /// Largest `φ(s) / φ(t)` over sampled `t ≤ C s`, both below `e^{-r2/r1}`.
    pub max_ratio: f64,
    pub c_prime: f64,
    /// Sampled `u1 < u2` with `φ(u1) < φ(u2)`, or a nonnegative log-derivative.
    pub monotonicity_violations: usize,
    pub ok: bool,
}

/// Width in `log(1/u)` of the sampled window above `r2/r1`.
const LEMMA_LOG_WINDOW: f64 = 40.0;

/// Samples `(s, t)` with `s, t < e^{-r2/r1}` and `t ≤ C s`, log-uniformly.
pub fn lemma_check(r1: f64, r2: f64, c: f64, samples: usize, seed: u64) -> Result<LemmaReport> {
    if !(r1 > 0.0 && r2 > 0.0 && r1.is_finite() && r2.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need r1, r2 > 0, got {r1}, {r2}"
        )));
    }
    if !(c >= 1.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("need C >= 1, got {c}")));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let w0 = r2 / r1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio: f64 = 0.0;
    let mut violations = 0;
    for _ in 0..samples {
        // w = log(1/u) > w0
        let ws = w0 + rng.random::<f64>() * LEMMA_LOG_WINDOW + f64::EPSILON;
        let s = (-ws).exp();
        // t ≤ min(C s, e^{-w0})
        let wt_min = (ws - c.ln()).max(w0);
        let wt = wt_min + rng.random::<f64>() * LEMMA_LOG_WINDOW + f64::EPSILON;
        let t = (-wt).exp();
        max_ratio = max_ratio.max(lemma_ratio(r1, r2, s, t));

        let (a, b) = (
            w0 + rng.random::<f64>() * LEMMA_LOG_WINDOW,
            w0 + rng.random::<f64>() * LEMMA_LOG_WINDOW,
        );
        let (w1, w2) = if a > b { (a, b) } else { (b, a) };
        if w1 > w2 && w2 > w0 {
            // u1 = e^{-w1} < u2 = e^{-w2}; log φ(u) = r1 w - r2 log w
            let log_phi = |w: f64| r1 * w - r2 * w.ln();
            let slope = -(r1 - r2 / w2);
            if log_phi(w1) < log_phi(w2) || slope >= 0.0 {
                violations += 1;
            }
        }
    }
    Ok(LemmaReport {
        r1,
        r2,
        c,
        samples,
        seed,
        max_ratio,
        c_prime: max_ratio,
        monotonicity_violations: violations,
        ok: max_ratio.is_finite() && violations == 0,
    })
}
