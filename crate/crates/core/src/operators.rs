//! Averages and maximal operators.
//!
//! Every supremum over `t > 0` is taken over a [`TGrid`]: a geometric grid
//! plus caller anchors, followed by bracket-halving refinement around the
//! running argmax. The result is the value at an explicitly evaluated scale,
//! so it is a lower bound for the true supremum.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;
use crate::quad::{PanelPoint, Sum, TanhSinh};
use crate::sliced::Sliced;
use crate::sphere::{BallQuadrature, SphereQuadrature};

/// Upper limit on refinement rounds.
pub const MAX_REFINE_DEPTH: u32 = 64;

/// Largest geometric grid that will be expanded.
pub const MAX_GRID_POINTS: usize = 1 << 20;

/// Level for the one-dimensional weighted integrals.
const LINE_LEVEL: u32 = 4;

/// Frozen constants `C_m` for the multilinear domination check, indexed by
/// `m`. Under normalized measures the slice identity makes them exactly one;
/// [`calibrate_domination_constant`] reproduces them.
pub const DOMINATION_CONSTANTS: &[(usize, f64)] = &[(3, 1.0), (4, 1.0), (5, 1.0), (6, 1.0)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub ratio: f64,
    pub local_refine_depth: u32,
    /// Extra scales always evaluated (clipped to `[t_min, t_max]`).
    #[serde(default)]
    pub anchors: Vec<f64>,
}

impl TGrid {
    pub const DEFAULT_RATIO: f64 = 1.02;
    pub const DEFAULT_DEPTH: u32 = 20;

    pub fn new(t_min: f64, t_max: f64, ratio: f64, local_refine_depth: u32) -> Result<Self> {
        let grid = Self {
            t_min,
            t_max,
            ratio,
            local_refine_depth,
            anchors: Vec::new(),
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn with_anchors(mut self, anchors: impl IntoIterator<Item = f64>) -> Self {
        self.anchors.extend(anchors);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_min.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "t_min must be positive, got {}",
                self.t_min
            )));
        }
        if !(self.t_max >= self.t_min && self.t_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "need t_min <= t_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if !(self.ratio > 1.0 && self.ratio.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "ratio must exceed 1, got {}",
                self.ratio
            )));
        }
        if self.local_refine_depth > MAX_REFINE_DEPTH {
            return Err(Error::ResourceCap {
                requested: self.local_refine_depth as usize,
                cap: MAX_REFINE_DEPTH as usize,
            });
        }
        let n = ((self.t_max / self.t_min).ln() / self.ratio.ln()).floor() + 2.0;
        if n > MAX_GRID_POINTS as f64 {
            return Err(Error::ResourceCap {
                requested: n as usize,
                cap: MAX_GRID_POINTS,
            });
        }
        Ok(())
    }

    /// Default grid for functions of bounded support: `t_max` is the largest
    /// distance from `(x, …, x)` to the support box, `t_min` the smallest
    /// (but at least `t_max / 1000`).
    pub fn infer(fs: &[FunctionSpec], x: f64) -> Result<Self> {
        let (mut near, mut far) = (0.0, 0.0);
        for f in fs {
            let (a, b) = f.support_hull().ok_or(Error::UnboundedSupport)?;
            let d_far = (x - a).abs().max((x - b).abs());
            let d_near = if x < a {
                a - x
            } else if x > b {
                x - b
            } else {
                0.0
            };
            far += d_far * d_far;
            near += d_near * d_near;
        }
        let t_max: f64 = far.sqrt();
        if !(t_max > 0.0) {
            return Err(Error::InvalidArgument(
                "support collapses to the point x".into(),
            ));
        }
        let t_min = near.sqrt().max(t_max * 1e-3);
        Self::new(t_min, t_max, Self::DEFAULT_RATIO, Self::DEFAULT_DEPTH)
    }

    /// Grid around a probe scale: `[t / spread, t · spread]`, anchored at `t`.
    pub fn around(t: f64, spread: f64) -> Result<Self> {
        Ok(Self::new(
            t / spread,
            t * spread,
            Self::DEFAULT_RATIO,
            Self::DEFAULT_DEPTH,
        )?
        .with_anchors([t]))
    }

    /// Sorted grid points: `t_min · ratio^k`, `t_max` and the anchors.
    pub fn points(&self) -> Vec<f64> {
        let mut pts = Vec::new();
        let mut k = 0;
        loop {
            let t = self.t_min * self.ratio.powi(k);
            if t > self.t_max {
                break;
            }
            pts.push(t);
            k += 1;
        }
        pts.push(self.t_max);
        pts.extend(
            self.anchors
                .iter()
                .copied()
                .filter(|&a| a >= self.t_min && a <= self.t_max),
        );
        pts.sort_by(|p, q| p.total_cmp(q));
        pts.dedup();
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxEstimate {
    pub value: f64,
    pub argmax_t: f64,
    /// Refinement rounds performed after the grid sweep.
    pub levels: u32,
}

/// Maximizes `f` over the grid, then halves the bracket around the running
/// argmax `local_refine_depth` times. Ties keep the smallest `t`.
pub fn maximize<F>(grid: &TGrid, f: F) -> Result<MaxEstimate>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    grid.validate()?;
    let pts = grid.points();
    let vals: Vec<f64> = pts.par_iter().map(|&t| f(t)).collect::<Result<_>>()?;
    let mut i = 0;
    for (k, &v) in vals.iter().enumerate() {
        if v > vals[i] {
            i = k;
        }
    }
    let (mut best_t, mut best) = (pts[i], vals[i]);
    let mut lo = pts[i.saturating_sub(1)];
    let mut hi = pts[(i + 1).min(pts.len() - 1)];
    for _ in 0..grid.local_refine_depth {
        let m1 = 0.5 * (lo + best_t);
        let m2 = 0.5 * (best_t + hi);
        let v1 = if m1 < best_t {
            f(m1)?
        } else {
            f64::NEG_INFINITY
        };
        let v2 = if m2 > best_t {
            f(m2)?
        } else {
            f64::NEG_INFINITY
        };
        if v1 > best && v1 >= v2 {
            hi = best_t;
            best_t = m1;
            best = v1;
        } else if v2 > best {
            lo = best_t;
            best_t = m2;
            best = v2;
        } else {
            lo = m1.min(best_t);
            hi = m2.max(best_t);
        }
    }
    Ok(MaxEstimate {
        value: best,
        argmax_t: best_t,
        levels: grid.local_refine_depth,
    })
}

fn need_dim(fs: &[FunctionSpec], min: usize) -> Result<()> {
    if fs.len() < min {
        Err(Error::UnsupportedDimension(fs.len()))
    } else {
        Ok(())
    }
}

fn need_positive(name: &str, t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be positive and finite, got {t}"
        )))
    }
}

/// `S^m_t(|f_1|, …, |f_m|)(x)`.
pub fn spherical_average<Q>(fs: &[FunctionSpec], t: f64, x: f64, rule: &Q) -> Result<f64>
where
    Q: SphereQuadrature + ?Sized,
{
    need_dim(fs, 2)?;
    need_positive("t", t)?;
    rule.sphere_average(fs, t, x)
}

/// `S^m(f_1, …, f_m)(x)` as a certified lower bound over the grid.
pub fn spherical_maximal<Q>(
    fs: &[FunctionSpec],
    x: f64,
    grid: &TGrid,
    rule: &Q,
) -> Result<MaxEstimate>
where
    Q: SphereQuadrature + ?Sized,
{
    need_dim(fs, 2)?;
    maximize(grid, |t| rule.sphere_average(fs, t, x))
}

/// Two-point average `(|f(x - t)| + |f(x + t)|) / 2`.
pub fn two_point_average(f: &FunctionSpec, t: f64, x: f64) -> f64 {
    0.5 * (f.eval(x - t) + f.eval(x + t))
}

/// Supremum over the grid of the two-point average (the sphere `S^0`).
pub fn linear_spherical_max(f: &FunctionSpec, x: f64, grid: &TGrid) -> Result<MaxEstimate> {
    maximize(grid, |t| Ok(two_point_average(f, t, x)))
}

/// Multilinear Hardy–Littlewood maximal function with normalized ball
/// averages. `m = 1` gives the centered one-dimensional maximal function.
pub fn multilinear_hl_max<B>(
    fs: &[FunctionSpec],
    x: f64,
    grid: &TGrid,
    ball: &B,
) -> Result<MaxEstimate>
where
    B: BallQuadrature + ?Sized,
{
    need_dim(fs, 1)?;
    maximize(grid, |t| ball.ball_average(fs, t, x))
}

/// `∫_a^b |f(x - t y)|^power w(y) dy` with panels split where `x - t y`
/// crosses a breakpoint of `f`.
#[allow(clippy::too_many_arguments)]
fn line_integral<W>(
    ts: &TanhSinh,
    f: &FunctionSpec,
    power: f64,
    x: f64,
    t: f64,
    a: f64,
    b: f64,
    weight: W,
) -> f64
where
    W: Fn(&PanelPoint, f64, f64) -> f64,
{
    let mut cuts: Vec<(f64, Option<f64>)> = vec![(a, None), (b, None)];
    for c in f.breakpoints() {
        let y = (x - c) / t;
        if y > a && y < b {
            cuts.push((y, (f.singular_point() == Some(c)).then_some(c)));
        }
    }
    cuts.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut acc = Sum::default();
    for w in cuts.windows(2) {
        let ((l, ls), (r, rs)) = (w[0], w[1]);
        if f.eval(x - t * 0.5 * (l + r)) == 0.0 {
            continue;
        }
        acc.add(ts.panel(l, r, |p| {
            let u = match (p.near_left(), ls, rs) {
                (true, Some(c), _) => c - t * p.from_left,
                (false, _, Some(c)) => c + t * p.from_right,
                _ => x - t * p.pos,
            };
            let v = f.eval(u);
            if v == 0.0 {
                return 0.0;
            }
            let v = v.powf(power) * weight(&p, l, r);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        }));
    }
    acc.value()
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "eps must lie in (0, 1), got {eps}"
        )))
    }
}

fn check_q(q: f64) -> Result<()> {
    if q > 1.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("q must exceed 1, got {q}")))
    }
}

/// `(∫_0^{1/√2} |f(x - t y)|² y^{-1+ε} dy)^{1/2}` at one scale.
pub fn aux_a_at(f: &FunctionSpec, x: f64, eps: f64, t: f64) -> Result<f64> {
    check_eps(eps)?;
    need_positive("t", t)?;
    let ts = TanhSinh::new(LINE_LEVEL);
    let v = line_integral(&ts, f, 2.0, x, t, 0.0, FRAC_1_SQRT_2, |p, l, _| {
        let y = if l == 0.0 && p.near_left() {
            p.from_left
        } else {
            p.pos
        };
        y.powf(eps - 1.0)
    });
    Ok(v.sqrt())
}

/// `(∫_{1/√2}^1 |g(x - t z)|^{2q} dz)^{1/2q}` at one scale.
pub fn aux_b_at(g: &FunctionSpec, x: f64, q: f64, t: f64) -> Result<f64> {
    check_q(q)?;
    need_positive("t", t)?;
    let ts = TanhSinh::new(LINE_LEVEL);
    let v = line_integral(&ts, g, 2.0 * q, x, t, FRAC_1_SQRT_2, 1.0, |_, _, _| 1.0);
    Ok(v.powf(0.5 / q))
}

/// Weighted auxiliary maximal function controlling the short coordinate of
/// each circle arc.
pub fn aux_a(f: &FunctionSpec, x: f64, eps: f64, grid: &TGrid) -> Result<MaxEstimate> {
    check_eps(eps)?;
    maximize(grid, |t| aux_a_at(f, x, eps, t))
}

/// `L^{2q}` auxiliary maximal function controlling the long coordinate.
pub fn aux_b(g: &FunctionSpec, x: f64, q: f64, grid: &TGrid) -> Result<MaxEstimate> {
    check_q(q)?;
    maximize(grid, |t| aux_b_at(g, x, q, t))
}

/// `K(ε, q) = (∫_{1/√2}^1 (1 - z²)^{-εq'/2} dz)^{1/2q'}`, finite iff `εq' < 2`.
pub fn hoelder_weight_constant(eps: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "eps must be >= 0, got {eps}"
        )));
    }
    let qp = q / (q - 1.0);
    if eps * qp >= 2.0 {
        return Err(Error::HolderDivergence(eps * qp));
    }
    let e = -0.5 * eps * qp;
    let ts = TanhSinh::new(LINE_LEVEL);
    let v = ts.panel(FRAC_1_SQRT_2, 1.0, |p| {
        let one_minus = if p.near_left() {
            1.0 - p.pos
        } else {
            p.from_right
        };
        (one_minus * (1.0 + p.pos)).powf(e)
    });
    Ok(v.powf(0.5 / qp))
}

/// Outcome of the bilinear domination check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BilinearReport {
    /// Largest arc average over the grid, normalized (`1/8` for constants).
    pub lhs: f64,
    /// The same arc as `∫_0^{1/√2} f(x - t y₁) g(x - t√(1-y₁²)) dy₁/√(1-y₁²)`.
    pub arc_integral: f64,
    pub argmax_t: f64,
    pub aux_a: f64,
    pub aux_b: f64,
    pub k: f64,
    /// `√2 · aux_a · K · aux_b`.
    pub rhs: f64,
    /// Largest `arc(t) / (√2 A_t K B_t)` over the grid points.
    pub worst_ratio: f64,
    pub ok: bool,
}

fn dominated(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs * (1.0 + 1e-9) + 1e-14
}

/// Checks, at every grid scale and for the suprema, that the arc
/// `{0 ≤ y₁ ≤ 1/√2 ≤ y₂}` is bounded by `√2 · A · K(ε, q) · B`.
#[allow(clippy::too_many_arguments)]
pub fn check_bilinear_domination(
    f: &FunctionSpec,
    g: &FunctionSpec,
    x: f64,
    eps: f64,
    q: f64,
    grid: &TGrid,
    sliced: &Sliced,
) -> Result<BilinearReport> {
    check_eps(eps)?;
    let k = hoelder_weight_constant(eps, q)?;
    grid.validate()?;
    let pts = grid.points();
    let rows: Vec<(f64, f64, f64, f64)> = pts
        .par_iter()
        .map(|&t| {
            let arc = sliced.arc_integral(f, g, t, x, FRAC_PI_4, FRAC_PI_2)?;
            Ok((t, arc, aux_a_at(f, x, eps, t)?, aux_b_at(g, x, q, t)?))
        })
        .collect::<Result<_>>()?;
    let mut ok = true;
    let mut worst_ratio: f64 = 0.0;
    let (mut arc_max, mut argmax_t) = (0.0, pts[0]);
    for &(t, arc, a, b) in &rows {
        let bound = SQRT_2 * a * k * b;
        ok &= dominated(arc, bound);
        if arc > 0.0 {
            worst_ratio = worst_ratio.max(arc / bound);
        }
        if arc > arc_max {
            arc_max = arc;
            argmax_t = t;
        }
    }
    let a_sup = aux_a(f, x, eps, grid)?.value;
    let b_sup = aux_b(g, x, q, grid)?.value;
    let rhs = SQRT_2 * a_sup * k * b_sup;
    ok &= dominated(arc_max, rhs);
    Ok(BilinearReport {
        lhs: arc_max / std::f64::consts::TAU,
        arc_integral: arc_max,
        argmax_t,
        aux_a: a_sup,
        aux_b: b_sup,
        k,
        rhs,
        worst_ratio,
        ok,
    })
}

/// Looks up the frozen `C_m`.
pub fn domination_constant(m: usize) -> Result<f64> {
    DOMINATION_CONSTANTS
        .iter()
        .find(|(k, _)| *k == m)
        .map(|&(_, c)| c)
        .ok_or(Error::UnsupportedDimension(m))
}

/// Largest ratio `S^m_t / (S²_t · B^{m-2}_t)` over a fixed set of smooth,
/// slowly varying products; the slice identity forces it to one.
pub fn calibrate_domination_constant(m: usize, sliced: &Sliced) -> Result<f64> {
    if m < 3 {
        return Err(Error::UnsupportedDimension(m));
    }
    let probes: Vec<Vec<FunctionSpec>> = vec![
        vec![FunctionSpec::constant(1.0)?; m],
        (0..m)
            .map(|i| FunctionSpec::constant(0.5 + i as f64))
            .collect::<Result<_>>()?,
        vec![FunctionSpec::indicator(-50.0, 50.0)?; m],
    ];
    let mut worst: f64 = 0.0;
    for fs in &probes {
        for &(t, x) in &[(0.5, 0.0), (1.0, 0.25), (3.0, -1.0)] {
            let lhs = sliced.sphere_average(fs, t, x)?;
            let rhs =
                sliced.sphere_average(&fs[..2], t, x)? * sliced.ball_average(&fs[2..], t, x)?;
            worst = worst.max(lhs / rhs);
        }
    }
    Ok(worst)
}

/// Outcome of the multilinear domination check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultilinearReport {
    /// `S^m(f)(x)`.
    pub lhs: f64,
    pub argmax_t: f64,
    /// `S²(f_1, f_2)(x)`.
    pub s2: f64,
    /// `M^{m-2}(f_3, …, f_m)(x)`.
    pub hl: f64,
    pub c_m: f64,
    /// `C_m · s2 · hl`.
    pub rhs: f64,
    pub ok: bool,
}

/// Checks `S^m(f)(x) ≤ C_m S²(f_1, f_2)(x) M^{m-2}(f_3, …, f_m)(x)`, both
/// for the suprema and scale by scale against the ball average at the same
/// `t`.
pub fn check_multilinear_domination(
    fs: &[FunctionSpec],
    x: f64,
    grid: &TGrid,
    sliced: &Sliced,
) -> Result<MultilinearReport> {
    need_dim(fs, 3)?;
    let c_m = domination_constant(fs.len())?;
    let lhs = spherical_maximal(fs, x, grid, sliced)?;
    let fine = TGrid {
        t_min: grid.t_min * 1e-3,
        t_max: grid.t_max,
        ratio: grid.ratio.min(1.01),
        local_refine_depth: grid.local_refine_depth,
        anchors: grid.anchors.clone(),
    };
    let s2 = spherical_maximal(&fs[..2], x, &fine, sliced)?.value;
    let hl = multilinear_hl_max(&fs[2..], x, grid, sliced)?.value;
    let mut ok = dominated(lhs.value, c_m * s2 * hl);
    let pts = grid.points();
    let per_t: Vec<bool> = pts
        .par_iter()
        .map(|&t| {
            let l = sliced.sphere_average(fs, t, x)?;
            let b = sliced.ball_average(&fs[2..], t, x)?;
            Ok(dominated(l, c_m * s2 * b))
        })
        .collect::<Result<_>>()?;
    ok &= per_t.iter().all(|&v| v);
    Ok(MultilinearReport {
        lhs: lhs.value,
        argmax_t: lhs.argmax_t,
        s2,
        hl,
        c_m,
        rhs: c_m * s2 * hl,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::SphereRule;
    use approx::assert_abs_diff_eq;

    fn ind(a: f64, b: f64) -> FunctionSpec {
        FunctionSpec::indicator(a, b).unwrap()
    }

    fn one() -> FunctionSpec {
        FunctionSpec::constant(1.0).unwrap()
    }

    #[test]
    fn averages_of_examples() {
        let sl = Sliced::default();
        assert_abs_diff_eq!(
            spherical_average(&[one(), one()], 3.0, 1.0, &sl).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        let full = ind(-1.0, 1.0);
        assert_abs_diff_eq!(
            spherical_average(&[full, full], 1.0, 0.0, &sl).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        let quarter = spherical_average(&[ind(-2.0, 0.0), ind(0.0, 2.0)], 1.0, 0.0, &sl).unwrap();
        assert_abs_diff_eq!(quarter, 0.25, epsilon = 1e-8);
        let rule = SphereRule::build(2, 5).unwrap();
        let q = spherical_average(&[ind(-2.0, 0.0), ind(0.0, 2.0)], 1.0, 0.0, &rule).unwrap();
        assert_abs_diff_eq!(q, 0.25, epsilon = 1e-8);
        assert!(spherical_average(&[one()], 1.0, 0.0, &sl).is_err());
        assert!(spherical_average(&[one(), one()], 0.0, 0.0, &sl).is_err());
    }

    #[test]
    fn grid_points_and_validation() {
        let g = TGrid::new(1.0, 2.0, 1.5, 0)
            .unwrap()
            .with_anchors([1.7, 5.0]);
        assert_eq!(g.points(), vec![1.0, 1.5, 1.7, 2.0]);
        assert!(TGrid::new(0.0, 1.0, 1.1, 0).is_err());
        assert!(TGrid::new(2.0, 1.0, 1.1, 0).is_err());
        assert!(TGrid::new(1.0, 2.0, 1.0, 0).is_err());
        assert!(TGrid::new(1.0, 2.0, 1.1, MAX_REFINE_DEPTH + 1).is_err());
        assert!(TGrid::new(1e-300, 1e300, 1.0 + 1e-9, 0).is_err());
    }

    #[test]
    fn inferred_grid() {
        let g = TGrid::infer(&[ind(-1.0, 1.0), ind(2.0, 3.0)], 0.0).unwrap();
        assert_abs_diff_eq!(g.t_max, 10f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(g.t_min, 2.0, epsilon = 1e-15);
        assert!(matches!(
            TGrid::infer(&[one(), ind(0.0, 1.0)], 0.0),
            Err(Error::UnboundedSupport)
        ));
    }

    #[test]
    fn maximize_finds_smooth_peak() {
        let grid = TGrid::new(0.1, 10.0, 1.2, 40).unwrap();
        let est = maximize(&grid, |t| Ok(-(t - 1.2345f64).powi(2))).unwrap();
        assert_abs_diff_eq!(est.argmax_t, 1.2345, epsilon = 1e-9);
        assert_eq!(est.levels, 40);
    }

    #[test]
    fn maximal_of_constants_and_small_intervals() {
        let sl = Sliced::default();
        let grid = TGrid::new(0.5, 2.0, 1.05, 5).unwrap();
        let e = spherical_maximal(&[one(), one(), one()], 0.3, &grid, &sl).unwrap();
        assert_abs_diff_eq!(e.value, 1.0, epsilon = 1e-12);
        // δ^{m-1} lower bound at m = 2
        for &d in &[1.0 / 16.0, 1.0 / 64.0] {
            let f = ind(-d, d);
            let x = 0.75;
            let grid = TGrid::around(x * SQRT_2, 1.5).unwrap();
            let e = spherical_maximal(&[f, f], x, &grid, &sl).unwrap();
            assert!(e.value >= 0.1 * d, "{d}: {e:?}");
        }
    }

    #[test]
    fn refinement_never_decreases() {
        let sl = Sliced::default();
        let f = ind(-0.1, 0.05);
        let fs = [f, f, f];
        let mut prev = 0.0;
        for depth in [0, 2, 5, 10] {
            let grid = TGrid::new(0.5, 2.0, 1.1, depth).unwrap();
            let v = spherical_maximal(&fs, 0.6, &grid, &sl).unwrap().value;
            assert!(v >= prev);
            prev = v;
        }
        // a ratio r^{1/2} grid contains the ratio r grid
        let coarse = TGrid::new(0.5, 2.0, 1.21, 0).unwrap();
        let fine = TGrid::new(0.5, 2.0, 1.1, 0).unwrap();
        let a = spherical_maximal(&fs, 0.6, &coarse, &sl).unwrap().value;
        let b = spherical_maximal(&fs, 0.6, &fine, &sl).unwrap().value;
        assert!(b >= a);
    }

    #[test]
    fn linear_two_point_max() {
        let grid = TGrid::new(4.0, 6.0, 1.01, 5).unwrap();
        assert_eq!(linear_spherical_max(&one(), 0.0, &grid).unwrap().value, 1.0);
        assert_eq!(
            linear_spherical_max(&ind(-1.0, 1.0), 5.0, &grid)
                .unwrap()
                .value,
            0.5
        );
        let small = TGrid::new(0.01, 0.9, 1.1, 0).unwrap();
        assert_eq!(
            linear_spherical_max(&ind(-1.0, 1.0), 0.0, &small)
                .unwrap()
                .value,
            1.0
        );
    }

    #[test]
    fn hl_examples() {
        let sl = Sliced::default();
        let grid = TGrid::new(1.0, 5.0, 1.01, 20).unwrap();
        let e = multilinear_hl_max(&[ind(-1.0, 1.0)], 2.0, &grid, &sl).unwrap();
        assert_abs_diff_eq!(e.value, 1.0 / 3.0, epsilon = 2e-2);
        let small = TGrid::new(0.01, 1.0, 1.1, 0).unwrap();
        let e = multilinear_hl_max(&[ind(-1.0, 1.0), ind(-1.0, 1.0)], 0.0, &small, &sl).unwrap();
        assert_abs_diff_eq!(e.value, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            multilinear_hl_max(&[one(), one()], 0.0, &small, &sl)
                .unwrap()
                .value,
            1.0
        );
    }

    #[test]
    fn auxiliary_closed_forms() {
        let grid = TGrid::new(0.1, 1.0, 1.1, 0).unwrap();
        let a = aux_a(&one(), 0.0, 0.5, &grid).unwrap().value;
        assert_abs_diff_eq!(a, (2.0 * FRAC_1_SQRT_2.sqrt()).sqrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(a, 1.2968, epsilon = 1e-4);
        let zero = FunctionSpec::constant(0.0).unwrap();
        assert_eq!(aux_a(&zero, 0.0, 0.5, &grid).unwrap().value, 0.0);
        let a_ind = aux_a(
            &ind(-1.0, 1.0),
            0.0,
            0.5,
            &TGrid::new(0.1, 1.0, 1.1, 0).unwrap(),
        )
        .unwrap()
        .value;
        assert_abs_diff_eq!(a_ind, a, epsilon = 1e-10);

        let mut prev = 0.0;
        for q in [1.5, 2.0, 4.0, 16.0] {
            let b = aux_b(&one(), 0.0, q, &grid).unwrap().value;
            assert_abs_diff_eq!(b, (1.0 - FRAC_1_SQRT_2).powf(0.5 / q), epsilon = 1e-12);
            assert!(b > prev);
            prev = b;
        }
        assert_eq!(aux_b(&zero, 0.0, 2.0, &grid).unwrap().value, 0.0);
        assert!(aux_b(&one(), 0.0, 1.0, &grid).is_err());
    }

    #[test]
    fn hoelder_constant() {
        let q: f64 = 3.0;
        let qp = q / (q - 1.0);
        let k0 = hoelder_weight_constant(1e-9, q).unwrap();
        assert_abs_diff_eq!(k0, (1.0 - FRAC_1_SQRT_2).powf(0.5 / qp), epsilon = 1e-8);
        let k = hoelder_weight_constant(1.0, 3.0).unwrap();
        assert!(k.is_finite() && k > 0.0);
        assert!(matches!(
            hoelder_weight_constant(1.0, 2.0),
            Err(Error::HolderDivergence(_))
        ));
        // direct check of the integral at eps q' = 1.5: ∫ (1 - z²)^{-3/4}
        let ts = TanhSinh::new(6);
        let direct = ts.panel(FRAC_1_SQRT_2, 1.0, |p| {
            (p.from_right * (1.0 + p.pos)).powf(-0.75)
        });
        assert_abs_diff_eq!(k, direct.powf(1.0 / 3.0), epsilon = 1e-8);
    }

    #[test]
    fn bilinear_examples() {
        let sl = Sliced::default();
        let grid = TGrid::new(0.5, 2.0, 1.1, 3).unwrap();
        let r = check_bilinear_domination(&one(), &one(), 0.0, 0.5, 2.0, &grid, &sl).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.125, epsilon = 1e-12);
        assert_abs_diff_eq!(r.arc_integral, FRAC_PI_4, epsilon = 1e-12);
        assert!(r.ok);
        let wide = ind(-3.0, 3.0);
        let unit = TGrid::new(1.0, 1.0, 1.1, 0).unwrap();
        assert!(
            check_bilinear_domination(&wide, &wide, 0.0, 0.5, 2.0, &unit, &sl)
                .unwrap()
                .ok
        );
        let f = FunctionSpec::power_log(0.25, 1.0, 0.5).unwrap();
        let g = ind(-10.0, 10.0);
        let grid = TGrid::new(0.05, 20.0, 1.05, 5).unwrap();
        let r = check_bilinear_domination(&f, &g, 0.3, 0.1, 1.5, &grid, &sl).unwrap();
        assert!(r.ok, "{r:?}");
        assert!(check_bilinear_domination(&f, &g, 0.3, 1.0, 2.0, &grid, &sl).is_err());
    }

    #[test]
    fn calibration_matches_frozen_table() {
        let sl = Sliced::default();
        for m in 3..=5 {
            let c = calibrate_domination_constant(m, &sl).unwrap();
            assert_abs_diff_eq!(c, domination_constant(m).unwrap(), epsilon = 1e-10);
        }
        assert!(domination_constant(2).is_err());
    }

    #[test]
    fn multilinear_examples() {
        let sl = Sliced::default();
        let grid = TGrid::new(0.5, 2.0, 1.1, 2).unwrap();
        let r = check_multilinear_domination(&[one(), one(), one()], 0.0, &grid, &sl).unwrap();
        assert_abs_diff_eq!(r.lhs, 1.0, epsilon = 1e-12);
        assert!(r.rhs >= 1.0 - 1e-12 && r.ok);
        for &d in &[0.25, 1.0 / 16.0] {
            for &x in &[-2.0, -0.5, 0.0, 1.0, 2.0] {
                let fs = [ind(-1.0, 1.0), ind(-1.0, 1.0), ind(-d, d)];
                let grid = TGrid::infer(&fs, x).unwrap();
                let r = check_multilinear_domination(&fs, x, &grid, &sl).unwrap();
                assert!(r.ok, "x={x} d={d} {r:?}");
            }
        }
    }
}
