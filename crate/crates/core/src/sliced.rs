//! Support-adapted evaluation of sphere and ball averages.
//!
//! The average over `S^{m-1}` is unrolled one coordinate at a time:
//!
//! ```text
//! S^m_t(x) = ∫_{-1}^{1} c_m (1 - s²)^{(m-3)/2} f_m(x - t s) S^{m-1}_{t√(1-s²)}(x) ds
//! ```
//!
//! down to the circle, which is integrated in the angle with weight
//! `dθ / 2π`. Every place where the integrand is not smooth becomes a panel
//! cut: support edges and singular points of the slice function, and the
//! radii at which the inner sphere becomes tangent to a face of the inner
//! support box (`ρ² = Σ_{j∈J} (x - c_j)²` over breakpoint choices `c_j`).
//! Each panel is integrated with tanh-sinh, which absorbs the algebraic and
//! logarithmic endpoint singularities this produces. Panels whose midpoint
//! is zero are skipped; between cuts the support pattern cannot change, so
//! this is exact rather than a heuristic.
//!
//! Near a cut at a singular point the argument of the singular factor is
//! rebuilt from the cut value and the panel offset, so `|u|^{-α}` is sampled
//! at distances far below the spacing of `f64` around the node position.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;
use crate::quad::{gamma_half, PanelPoint, Sum, TanhSinh, DEFAULT_LEVEL};
use crate::sphere::{BallQuadrature, SphereQuadrature};

const MERGE_TOL: f64 = 1e-15;

/// Adaptive evaluator for sphere and ball averages.
#[derive(Debug, Clone)]
pub struct Sliced {
    ts: TanhSinh,
}

impl Default for Sliced {
    fn default() -> Self {
        Self::new(DEFAULT_LEVEL)
    }
}

#[derive(Debug, Clone, Copy)]
struct AngleCut {
    theta: f64,
    cos: f64,
    sin: f64,
    /// Singular value carried by each of the two factors at this cut.
    sing: [Option<f64>; 2],
}

#[derive(Debug, Clone, Copy)]
struct LineCut {
    at: f64,
    sing: Option<f64>,
    /// Inner tangency or singular point: the integrand may blow up here.
    deep: bool,
}

fn singular_tag(f: &FunctionSpec, c: f64) -> Option<f64> {
    (f.singular_point() == Some(c)).then_some(c)
}

fn singular_exponents(f: &FunctionSpec) -> (f64, f64) {
    match *f {
        FunctionSpec::PowerLog { alpha, beta, .. } => (alpha, beta),
        _ => (0.0, 0.0),
    }
}

/// Both factors singular at the same angle: near the cut the integrand is
/// `|h|^{-α}` times logs, with each exponent doubled where the circle is
/// tangent to that factor's singular line.
fn divergent_crossing(f1: &FunctionSpec, f2: &FunctionSpec, c: &AngleCut) -> bool {
    if c.sing[0].is_none() || c.sing[1].is_none() {
        return false;
    }
    let (a1, b1) = singular_exponents(f1);
    let (a2, b2) = singular_exponents(f2);
    let d1 = if c.sin == 0.0 { 2.0 } else { 1.0 };
    let d2 = if c.cos == 0.0 { 2.0 } else { 1.0 };
    let alpha = a1 * d1 + a2 * d2;
    alpha > 1.0 || (alpha == 1.0 && b1 + b2 <= 1.0)
}

fn finite_or_zero(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// `2 sin²(h/2) = 1 - cos h` without cancellation.
fn one_minus_cos(h: f64) -> f64 {
    let s = (0.5 * h).sin();
    2.0 * s * s
}

fn angle_cuts(
    f1: &FunctionSpec,
    f2: &FunctionSpec,
    rho: f64,
    x: f64,
    lo: f64,
    hi: f64,
) -> Vec<AngleCut> {
    let plain = |theta: f64| AngleCut {
        theta,
        cos: theta.cos(),
        sin: theta.sin(),
        sing: [None, None],
    };
    let mut cuts = vec![plain(lo), plain(hi)];
    for (k, q) in [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]
        .into_iter()
        .enumerate()
    {
        let (c, s) = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][k];
        cuts.push(AngleCut {
            theta: q,
            cos: c,
            sin: s,
            sing: [None, None],
        });
    }
    for c in f1.breakpoints() {
        let v = (x - c) / rho;
        if v.abs() <= 1.0 {
            let a = v.acos();
            let w = ((1.0 - v) * (1.0 + v)).sqrt();
            let tag = singular_tag(f1, c);
            cuts.push(AngleCut {
                theta: a,
                cos: v,
                sin: w,
                sing: [tag, None],
            });
            cuts.push(AngleCut {
                theta: TAU - a,
                cos: v,
                sin: -w,
                sing: [tag, None],
            });
        }
    }
    for c in f2.breakpoints() {
        let v = (x - c) / rho;
        if v.abs() <= 1.0 {
            let a = v.asin();
            let w = ((1.0 - v) * (1.0 + v)).sqrt();
            let tag = singular_tag(f2, c);
            let first = if a < 0.0 { a + TAU } else { a };
            cuts.push(AngleCut {
                theta: first,
                cos: w,
                sin: v,
                sing: [None, tag],
            });
            cuts.push(AngleCut {
                theta: PI - a,
                cos: -w,
                sin: v,
                sing: [None, tag],
            });
        }
    }
    let wrapped: Vec<AngleCut> = cuts
        .iter()
        .filter(|c| c.theta == 0.0)
        .map(|c| AngleCut { theta: TAU, ..*c })
        .collect();
    cuts.extend(wrapped);
    cuts.retain(|c| c.theta >= lo && c.theta <= hi);
    cuts.sort_by(|p, q| p.theta.total_cmp(&q.theta));
    let mut merged: Vec<AngleCut> = Vec::with_capacity(cuts.len());
    for c in cuts {
        match merged.last_mut() {
            Some(last) if c.theta - last.theta <= MERGE_TOL * TAU => {
                let fresh = last.sing == [None, None];
                for i in 0..2 {
                    if last.sing[i].is_none() {
                        last.sing[i] = c.sing[i];
                    }
                }
                if fresh && c.sing != [None, None] {
                    last.cos = c.cos;
                    last.sin = c.sin;
                }
            }
            _ => merged.push(c),
        }
    }
    merged
}

/// Cuts of `[-1, 1]` for the slice variable `s`: breakpoints of the slice
/// function at `s = (x - c)/ρ` and tangency events of the inner sphere.
fn line_cuts(f: &FunctionSpec, rho: f64, x: f64, events: &[f64]) -> Vec<LineCut> {
    let end = |at| LineCut {
        at,
        sing: None,
        deep: false,
    };
    let mut cuts = vec![end(-1.0), end(1.0)];
    for c in f.breakpoints() {
        let s = (x - c) / rho;
        if s > -1.0 && s < 1.0 {
            let sing = singular_tag(f, c);
            cuts.push(LineCut {
                at: s,
                sing,
                deep: sing.is_some(),
            });
        }
    }
    for &r2 in events {
        let r = r2.sqrt();
        if r > 0.0 && r < rho {
            let s = ((rho - r) * (rho + r)).sqrt() / rho;
            cuts.push(LineCut {
                at: s,
                sing: None,
                deep: true,
            });
            cuts.push(LineCut {
                at: -s,
                sing: None,
                deep: true,
            });
        }
    }
    cuts.sort_by(|p, q| p.at.total_cmp(&q.at));
    let mut merged: Vec<LineCut> = Vec::with_capacity(cuts.len());
    for c in cuts {
        match merged.last_mut() {
            Some(last) if c.at - last.at <= MERGE_TOL => {
                if last.sing.is_none() {
                    last.sing = c.sing;
                }
                last.deep |= c.deep;
                // keep the exact ends of the interval
                if c.at == 1.0 {
                    last.at = 1.0;
                }
            }
            _ => merged.push(c),
        }
    }
    merged
}

/// Squared distances `Σ_{j∈J} (x - c_j)²` over all ways of picking at most
/// one breakpoint from each function.
fn tangency_radii(fs: &[FunctionSpec], x: f64) -> Vec<f64> {
    let mut sums = vec![0.0];
    for f in fs {
        let bps = f.breakpoints();
        let mut next = sums.clone();
        for &s in &sums {
            for &c in &bps {
                next.push(s + (x - c) * (x - c));
            }
        }
        next.sort_by(|p, q| p.total_cmp(q));
        next.dedup_by(|p, q| (*p - *q).abs() <= MERGE_TOL * q.abs());
        sums = next;
    }
    sums
}

/// `(1 - s)(1 + s)` using the panel offset when the panel touches `±1`.
fn one_minus_sq(p: &PanelPoint, a: f64, b: f64) -> f64 {
    let s = p.pos;
    if p.near_left() && a == -1.0 {
        p.from_left * (1.0 - s)
    } else if !p.near_left() && b == 1.0 {
        p.from_right * (1.0 + s)
    } else {
        (1.0 - s) * (1.0 + s)
    }
}

/// Argument `x - ρ s` of the slice function, exact near a singular cut.
fn slice_arg(p: &PanelPoint, left: &LineCut, right: &LineCut, rho: f64, x: f64) -> f64 {
    if p.near_left() {
        if let Some(c) = left.sing {
            return c - rho * p.from_left;
        }
    } else if let Some(c) = right.sing {
        return c + rho * p.from_right;
    }
    x - rho * p.pos
}

impl Sliced {
    pub fn new(level: u32) -> Self {
        Self {
            ts: TanhSinh::new(level),
        }
    }

    pub fn level(&self) -> u32 {
        self.ts.level()
    }

    /// `∫_{θ0}^{θ1} f(x - t cos θ) g(x - t sin θ) dθ` for `0 ≤ θ0 < θ1 ≤ 2π`,
    /// unnormalized.
    pub fn arc_integral(
        &self,
        f: &FunctionSpec,
        g: &FunctionSpec,
        t: f64,
        x: f64,
        theta0: f64,
        theta1: f64,
    ) -> Result<f64> {
        if !(0.0..=TAU).contains(&theta0) || !(0.0..=TAU).contains(&theta1) || theta0 >= theta1 {
            return Err(Error::InvalidArgument(format!(
                "arc [{theta0}, {theta1}] outside [0, 2π]"
            )));
        }
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "radius must be positive, got {t}"
            )));
        }
        Ok(self.arc(f, g, t, x, theta0, theta1))
    }

    fn arc(&self, f1: &FunctionSpec, f2: &FunctionSpec, rho: f64, x: f64, lo: f64, hi: f64) -> f64 {
        let cuts = angle_cuts(f1, f2, rho, x, lo, hi);
        if cuts.iter().any(|c| divergent_crossing(f1, f2, c)) {
            return f64::INFINITY;
        }
        let mut acc = Sum::default();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a.theta + b.theta);
            if f1.eval(x - rho * mid.cos()) * f2.eval(x - rho * mid.sin()) == 0.0 {
                continue;
            }
            let deep = |c: &AngleCut| c.sing != [None, None];
            acc.add(
                self.ts
                    .panel_graded(a.theta, b.theta, deep(&a), deep(&b), |p| {
                        let (u1, u2);
                        if p.near_left() {
                            let h = p.from_left;
                            let (q, s) = (one_minus_cos(h), h.sin());
                            u1 = a.sing[0].map_or_else(
                                || x - rho * p.pos.cos(),
                                |c| c + rho * (a.cos * q + a.sin * s),
                            );
                            u2 = a.sing[1].map_or_else(
                                || x - rho * p.pos.sin(),
                                |c| c + rho * (a.sin * q - a.cos * s),
                            );
                        } else {
                            let h = p.from_right;
                            let (q, s) = (one_minus_cos(h), h.sin());
                            u1 = b.sing[0].map_or_else(
                                || x - rho * p.pos.cos(),
                                |c| c + rho * (b.cos * q - b.sin * s),
                            );
                            u2 = b.sing[1].map_or_else(
                                || x - rho * p.pos.sin(),
                                |c| c + rho * (b.sin * q + b.cos * s),
                            );
                        }
                        let v = f1.eval(u1);
                        if v == 0.0 {
                            return 0.0;
                        }
                        finite_or_zero(v * f2.eval(u2))
                    }),
            );
        }
        acc.value()
    }

    /// Average over the sphere of radius `rho`; `events[k]` holds the
    /// tangency radii of `fs[..k]`.
    fn sphere(&self, fs: &[FunctionSpec], events: &[Vec<f64>], rho: f64, x: f64) -> f64 {
        let k = fs.len();
        if rho <= 0.0 || fs.iter().all(is_constant) {
            return finite_or_zero(fs.iter().map(|f| f.eval(x)).product());
        }
        match k {
            0 => 1.0,
            1 => 0.5 * finite_or_zero(fs[0].eval(x - rho) + fs[0].eval(x + rho)),
            2 => self.arc(&fs[0], &fs[1], rho, x, 0.0, TAU) / TAU,
            _ => {
                let (inner, f) = (&fs[..k - 1], &fs[k - 1]);
                let norm = gamma_half(k) / (PI.sqrt() * gamma_half(k - 1));
                let expo = (k as f64 - 3.0) / 2.0;
                self.slices(f, &events[k - 1], rho, x, norm, expo, |r| {
                    self.sphere(inner, events, r, x)
                })
            }
        }
    }

    fn ball(&self, fs: &[FunctionSpec], events: &[Vec<f64>], rho: f64, x: f64) -> f64 {
        let k = fs.len();
        if rho <= 0.0 || fs.iter().all(is_constant) {
            return finite_or_zero(fs.iter().map(|f| f.eval(x)).product());
        }
        let (inner, f) = (&fs[..k - 1], &fs[k - 1]);
        let norm = gamma_half(k + 2) / (PI.sqrt() * gamma_half(k + 1));
        let expo = (k as f64 - 1.0) / 2.0;
        self.slices(f, &events[k - 1], rho, x, norm, expo, |r| {
            self.ball(inner, events, r, x)
        })
    }

    /// `∫_{-1}^{1} norm (1 - s²)^expo f(x - ρ s) inner(ρ √(1 - s²)) ds`.
    #[allow(clippy::too_many_arguments)]
    fn slices<I>(
        &self,
        f: &FunctionSpec,
        events: &[f64],
        rho: f64,
        x: f64,
        norm: f64,
        expo: f64,
        inner: I,
    ) -> f64
    where
        I: Fn(f64) -> f64,
    {
        let cuts = line_cuts(f, rho, x, events);
        let mut acc = Sum::default();
        for w in cuts.windows(2) {
            let (l, r) = (w[0], w[1]);
            let mid = 0.5 * (l.at + r.at);
            let fm = f.eval(x - rho * mid);
            if fm == 0.0 || inner(rho * ((1.0 - mid) * (1.0 + mid)).sqrt()) == 0.0 {
                continue;
            }
            acc.add(self.ts.panel_graded(l.at, r.at, l.deep, r.deep, |p| {
                let v = f.eval(slice_arg(&p, &l, &r, rho, x));
                if v == 0.0 {
                    return 0.0;
                }
                let q = one_minus_sq(&p, l.at, r.at);
                let weight = if expo == 0.0 { 1.0 } else { q.powf(expo) };
                let rest = inner(rho * q.sqrt());
                if rest == 0.0 {
                    return 0.0;
                }
                finite_or_zero(v * weight * rest)
            }));
        }
        norm * acc.value()
    }

    fn events(fs: &[FunctionSpec], x: f64) -> Vec<Vec<f64>> {
        (0..=fs.len())
            .map(|k| tangency_radii(&fs[..k], x))
            .collect()
    }

    /// Average of `Π f_i(x - ρ y)` over the sphere of radius `ρ`.
    pub fn sphere_value(&self, fs: &[FunctionSpec], rho: f64, x: f64) -> f64 {
        let fs = constants_first(fs);
        self.sphere(&fs, &Self::events(&fs, x), rho, x)
    }

    pub fn ball_value(&self, fs: &[FunctionSpec], rho: f64, x: f64) -> f64 {
        let fs = constants_first(fs);
        self.ball(&fs, &Self::events(&fs, x), rho, x)
    }
}

fn is_constant(f: &FunctionSpec) -> bool {
    matches!(f, FunctionSpec::Constant { .. })
}

/// Both measures are invariant under permuting coordinates, so constant
/// factors can sit in the innermost slots where they cost nothing.
fn constants_first(fs: &[FunctionSpec]) -> Vec<FunctionSpec> {
    let mut out: Vec<FunctionSpec> = fs.iter().filter(|f| is_constant(f)).copied().collect();
    out.extend(fs.iter().filter(|f| !is_constant(f)).copied());
    out
}

fn check_radius(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "radius must be finite and >= 0, got {t}"
        )))
    }
}

impl SphereQuadrature for Sliced {
    fn sphere_average(&self, fs: &[FunctionSpec], t: f64, x: f64) -> Result<f64> {
        check_radius(t)?;
        if fs.is_empty() {
            return Err(Error::UnsupportedDimension(0));
        }
        Ok(self.sphere_value(fs, t, x))
    }

    fn resolution(&self) -> f64 {
        0.0
    }
}

impl BallQuadrature for Sliced {
    fn ball_average(&self, fs: &[FunctionSpec], t: f64, x: f64) -> Result<f64> {
        check_radius(t)?;
        if fs.is_empty() {
            return Err(Error::UnsupportedDimension(0));
        }
        Ok(self.ball_value(fs, t, x))
    }

    fn ball_resolution(&self) -> f64 {
        0.0
    }
}
