//! Fixed quadrature rules for the normalized surface measure on `S^{m-1}`
//! and the normalized volume measure on `B^m`.
//!
//! Both are assembled by slicing along the last coordinate. On the sphere,
//! `y_m = s` has density `∝ (1 - s²)^{(m-3)/2}` and, given `s`, the remaining
//! coordinates are uniform on a sphere `S^{m-2}` of radius `√(1 - s²)`. The
//! circle (`m = 2`) is the base case: eight octant arcs with uniform angle
//! nodes, which carries the `1/√(1 - y₁²)` arc-length density exactly. On
//! the ball the slice density is `∝ (1 - s²)^{(m-1)/2}` and the base case is
//! Gauss–Legendre on `[-1, 1]`.
//!
//! After assembly every rule is divided by its weight sum, so the constant
//! function integrates to one regardless of surface-area constants.

pub mod mc;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use std::io::Write;
use std::num::NonZeroUsize;

use gauss_quad::{GaussJacobi, GaussLegendre};

use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;
use crate::quad::Sum;

/// Largest rule the builders will allocate.
pub const MAX_NODES: usize = 1 << 24;

/// Something that can average `Π_i |f_i(x - t y_i)|` over the unit sphere.
pub trait SphereQuadrature: Sync {
    /// `S^m_t(|f_1|, …, |f_m|)(x)` with `m = fs.len()`.
    fn sphere_average(&self, fs: &[FunctionSpec], t: f64, x: f64) -> Result<f64>;

    /// Smallest feature size in sphere coordinates the rule resolves.
    fn resolution(&self) -> f64;
}

/// Something that can average `Π_i |f_i(x - t y_i)|` over the unit ball.
pub trait BallQuadrature: Sync {
    fn ball_average(&self, fs: &[FunctionSpec], t: f64, x: f64) -> Result<f64>;

    fn ball_resolution(&self) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    m: usize,
    level: u32,
    /// Row-major, `m` coordinates per node.
    coords: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallRule {
    m: usize,
    level: u32,
    coords: Vec<f64>,
    weights: Vec<f64>,
}

fn slice_count(level: u32) -> usize {
    2usize << level
}

fn arc_count(level: u32) -> usize {
    1usize << level
}

fn sphere_node_count(m: usize, level: u32) -> Option<usize> {
    if m == 2 {
        8usize.checked_mul(arc_count(level))
    } else {
        sphere_node_count(m - 1, level)?.checked_mul(slice_count(level))
    }
}

fn ball_node_count(m: usize, level: u32) -> Option<usize> {
    if m == 1 {
        Some(slice_count(level))
    } else {
        ball_node_count(m - 1, level)?.checked_mul(slice_count(level))
    }
}

fn check_cap(requested: Option<usize>) -> Result<()> {
    match requested {
        Some(n) if n <= MAX_NODES => Ok(()),
        Some(n) => Err(Error::ResourceCap {
            requested: n,
            cap: MAX_NODES,
        }),
        None => Err(Error::ResourceCap {
            requested: usize::MAX,
            cap: MAX_NODES,
        }),
    }
}

/// Gauss–Jacobi nodes for `(1 - s²)^e` on `[-1, 1]`, made exactly symmetric.
fn symmetric_gegenbauer(n: usize, e: f64) -> Vec<(f64, f64)> {
    let deg = NonZeroUsize::new(n).expect("nonzero degree");
    let mut pairs: Vec<(f64, f64)> = if e == 0.0 {
        GaussLegendre::new(deg).into_node_weight_pairs().into_vec()
    } else {
        let a = e.try_into().expect("exponent above -1");
        GaussJacobi::new(deg, a, a)
            .into_node_weight_pairs()
            .into_vec()
    };
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let s = 0.5 * (pairs[j].0 - pairs[i].0);
        let w = 0.5 * (pairs[i].1 + pairs[j].1);
        pairs[i] = (-s, w);
        pairs[j] = (s, w);
    }
    pairs
}

fn normalize(weights: &mut [f64]) {
    let total = weights.iter().copied().collect::<Sum>().value();
    for w in weights.iter_mut() {
        *w /= total;
    }
}

/// Eight images of `(c, s)` under coordinate sign flips and the swap.
fn octant_images(c: f64, s: f64) -> [[f64; 2]; 8] {
    [
        [c, s],
        [s, c],
        [-s, c],
        [-c, s],
        [-c, -s],
        [-s, -c],
        [s, -c],
        [c, -s],
    ]
}

fn circle_from_arc(arc: &[(f64, f64, f64)]) -> (Vec<f64>, Vec<f64>) {
    let mut coords = Vec::with_capacity(16 * arc.len());
    let mut weights = Vec::with_capacity(8 * arc.len());
    for image in 0..8 {
        for &(c, s, w) in arc {
            coords.extend_from_slice(&octant_images(c, s)[image]);
            weights.push(w);
        }
    }
    (coords, weights)
}

impl SphereRule {
    /// Rule on `S^{m-1}`: `8·2^level` nodes on the circle and `2^{level+1}`
    /// slices per added dimension.
    pub fn build(m: usize, level: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::UnsupportedDimension(m));
        }
        check_cap(sphere_node_count(m, level))?;
        let (coords, mut weights) = Self::assemble(m, level);
        normalize(&mut weights);
        Ok(Self {
            m,
            level,
            coords,
            weights,
        })
    }

    fn assemble(m: usize, level: u32) -> (Vec<f64>, Vec<f64>) {
        if m == 2 {
            let n = arc_count(level);
            let step = FRAC_PI_4 / n as f64;
            let arc: Vec<_> = (0..n)
                .map(|j| {
                    let th = (j as f64 + 0.5) * step;
                    (th.cos(), th.sin(), 1.0)
                })
                .collect();
            return circle_from_arc(&arc);
        }
        let (inner_c, mut inner_w) = Self::assemble(m - 1, level);
        normalize(&mut inner_w);
        let slices = symmetric_gegenbauer(slice_count(level), (m as f64 - 3.0) / 2.0);
        let inner_n = inner_w.len();
        let mut coords = Vec::with_capacity(slices.len() * inner_n * m);
        let mut weights = Vec::with_capacity(slices.len() * inner_n);
        for &(s, ws) in &slices {
            let r = ((1.0 - s) * (1.0 + s)).sqrt();
            for (k, &wi) in inner_w.iter().enumerate() {
                coords.extend(
                    inner_c[k * (m - 1)..(k + 1) * (m - 1)]
                        .iter()
                        .map(|y| r * y),
                );
                coords.push(s);
                weights.push(ws * wi);
            }
        }
        (coords, weights)
    }

    /// Circle rule parametrized by `y₁ ∈ (0, 1/√2)` on each octant arc with
    /// the `1/√(1 - y₁²)` density folded into Gauss–Legendre weights.
    pub fn build_sector(level: u32) -> Result<Self> {
        check_cap(sphere_node_count(2, level))?;
        let n = arc_count(level);
        let gl = GaussLegendre::new(NonZeroUsize::new(n).expect("nonzero"));
        let arc: Vec<_> = gl
            .iter()
            .map(|&(xi, wi)| {
                let y1 = FRAC_1_SQRT_2 * 0.5 * (xi + 1.0);
                let y2 = ((1.0 - y1) * (1.0 + y1)).sqrt();
                (y2, y1, wi / y2)
            })
            .collect();
        let (coords, mut weights) = circle_from_arc(&arc);
        normalize(&mut weights);
        Ok(Self {
            m: 2,
            level,
            coords,
            weights,
        })
    }

    pub fn refine(&self) -> Result<Self> {
        Self::build(self.m, self.level + 1)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.coords
            .chunks_exact(self.m)
            .zip(self.weights.iter().copied())
    }

    /// `∫ g dσ` by the rule, summed in node order.
    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut g: F) -> f64 {
        self.nodes().map(|(y, w)| w * g(y)).collect::<Sum>().value()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rule_csv(out, self.m, &self.coords, &self.weights)
    }
}

impl BallRule {
    pub fn build(m: usize, level: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::UnsupportedDimension(m));
        }
        check_cap(ball_node_count(m, level))?;
        let (coords, mut weights) = Self::assemble(m, level);
        normalize(&mut weights);
        Ok(Self {
            m,
            level,
            coords,
            weights,
        })
    }

    fn assemble(m: usize, level: u32) -> (Vec<f64>, Vec<f64>) {
        if m == 1 {
            let pts = symmetric_gegenbauer(slice_count(level), 0.0);
            return pts.iter().map(|&(s, w)| (s, w)).unzip();
        }
        let (inner_c, mut inner_w) = Self::assemble(m - 1, level);
        normalize(&mut inner_w);
        let slices = symmetric_gegenbauer(slice_count(level), (m as f64 - 1.0) / 2.0);
        let inner_n = inner_w.len();
        let mut coords = Vec::with_capacity(slices.len() * inner_n * m);
        let mut weights = Vec::with_capacity(slices.len() * inner_n);
        for &(s, ws) in &slices {
            let r = ((1.0 - s) * (1.0 + s)).sqrt();
            for (k, &wi) in inner_w.iter().enumerate() {
                coords.extend(
                    inner_c[k * (m - 1)..(k + 1) * (m - 1)]
                        .iter()
                        .map(|y| r * y),
                );
                coords.push(s);
                weights.push(ws * wi);
            }
        }
        (coords, weights)
    }

    pub fn refine(&self) -> Result<Self> {
        Self::build(self.m, self.level + 1)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.coords
            .chunks_exact(self.m)
            .zip(self.weights.iter().copied())
    }

    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut g: F) -> f64 {
        self.nodes().map(|(y, w)| w * g(y)).collect::<Sum>().value()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rule_csv(out, self.m, &self.coords, &self.weights)
    }
}

fn write_rule_csv<W: Write>(out: W, m: usize, coords: &[f64], weights: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=m).map(|i| format!("y{i}")).collect();
    header.push("w".into());
    w.write_record(&header)?;
    for (y, wt) in coords.chunks_exact(m).zip(weights) {
        let mut row: Vec<String> = y.iter().map(|v| v.to_string()).collect();
        row.push(wt.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `Π_i f_i(x - t y_i)`, nudging `t` off a singular point when a factor is
/// infinite.
pub(crate) fn node_product(fs: &[FunctionSpec], t: f64, x: f64, y: &[f64]) -> f64 {
    let eval = |t: f64| {
        let mut p = 1.0;
        for (f, &yi) in fs.iter().zip(y) {
            let v = f.eval(x - t * yi);
            if v == 0.0 {
                return 0.0;
            }
            p *= v;
        }
        p
    };
    let mut p = eval(t);
    let mut k = 1.0;
    while !p.is_finite() && k <= 1024.0 {
        p = eval(t * (1.0 + k * f64::EPSILON));
        k *= 2.0;
    }
    p
}

impl SphereQuadrature for SphereRule {
    fn sphere_average(&self, fs: &[FunctionSpec], t: f64, x: f64) -> Result<f64> {
        if fs.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: fs.len(),
            });
        }
        Ok(self.integrate(|y| node_product(fs, t, x, y)))
    }

    fn resolution(&self) -> f64 {
        let arc = FRAC_PI_4 / arc_count(self.level) as f64;
        if self.m == 2 {
            arc
        } else {
            arc.max(PI / slice_count(self.level) as f64)
        }
    }
}

impl BallQuadrature for BallRule {
    fn ball_average(&self, fs: &[FunctionSpec], t: f64, x: f64) -> Result<f64> {
        if fs.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: fs.len(),
            });
        }
        Ok(self.integrate(|y| node_product(fs, t, x, y)))
    }

    fn ball_resolution(&self) -> f64 {
        PI / slice_count(self.level) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sphere_invariants() {
        for m in 2..=5 {
            for level in 0..=2 {
                let r = SphereRule::build(m, level).unwrap();
                let total = r.weights.iter().copied().collect::<Sum>().value();
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
                for (y, w) in r.nodes() {
                    assert!(w > 0.0);
                    let n2: f64 = y.iter().map(|v| v * v).sum();
                    assert!((n2 - 1.0).abs() <= 1e-12, "m={m} |y|^2={n2}");
                    assert!(y.iter().all(|&v| v != 0.0));
                }
            }
        }
    }

    #[test]
    fn circle_moments() {
        for level in 2..=5 {
            let r = SphereRule::build(2, level).unwrap();
            assert_abs_diff_eq!(r.integrate(|y| y[0] * y[0]), 0.5, epsilon = 1e-10);
            assert_abs_diff_eq!(r.integrate(|y| y[0] * y[1]), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(r.integrate(|y| y[0].powi(4)), 0.375, epsilon = 1e-12);
        }
    }

    #[test]
    fn three_sphere_moments() {
        for level in 3..=4 {
            let r = SphereRule::build(3, level).unwrap();
            for i in 0..3 {
                assert_abs_diff_eq!(r.integrate(|y| y[i] * y[i]), 1.0 / 3.0, epsilon = 1e-8);
                assert_abs_diff_eq!(r.integrate(|y| y[i].powi(4)), 0.2, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn refine_grows() {
        let r0 = SphereRule::build(2, 0).unwrap();
        let r1 = r0.refine().unwrap();
        let r2 = r1.refine().unwrap();
        assert!(r0.len() < r1.len() && r1.len() < r2.len());
        assert_eq!(r2.level(), 2);
    }

    #[test]
    fn sector_rule_matches_angle_rule() {
        let g = |y: &[f64]| (y[0] + 0.5 * y[1]).exp() * (1.0 + y[1] * y[1]);
        for level in 3..=5 {
            let a = SphereRule::build(2, level).unwrap();
            let s = SphereRule::build_sector(level).unwrap();
            assert_eq!(a.len(), s.len());
            assert_abs_diff_eq!(a.integrate(g), s.integrate(g), epsilon = 1e-8);
        }
    }

    #[test]
    fn ball_rules() {
        for m in 1..=4 {
            let b = BallRule::build(m, 2).unwrap();
            let total = b.weights.iter().copied().collect::<Sum>().value();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
            for (y, w) in b.nodes() {
                assert!(w > 0.0);
                assert!(y.iter().map(|v| v * v).sum::<f64>() <= 1.0);
            }
        }
        let b1 = BallRule::build(1, 3).unwrap();
        assert_abs_diff_eq!(b1.integrate(|y| y[0] * y[0]), 1.0 / 3.0, epsilon = 1e-10);
        let b2 = BallRule::build(2, 3).unwrap();
        assert_abs_diff_eq!(
            b2.integrate(|y| if y[0] > 0.0 { 1.0 } else { 0.0 }),
            0.5,
            epsilon = 1e-8
        );
        // E|y|^2 on B^2 is 1/2, on B^3 it is 3/5
        assert_abs_diff_eq!(
            b2.integrate(|y| y[0] * y[0] + y[1] * y[1]),
            0.5,
            epsilon = 1e-10
        );
        let b3 = BallRule::build(3, 3).unwrap();
        assert_abs_diff_eq!(
            b3.integrate(|y| y.iter().map(|v| v * v).sum()),
            0.6,
            epsilon = 1e-10
        );
    }

    #[test]
    fn resource_cap() {
        assert!(matches!(
            SphereRule::build(5, 12),
            Err(Error::ResourceCap { .. })
        ));
        assert!(matches!(
            SphereRule::build(1, 0),
            Err(Error::UnsupportedDimension(1))
        ));
    }

    #[test]
    fn csv_dump() {
        let r = SphereRule::build(2, 0).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("y1,y2,w\n"));
        assert_eq!(text.lines().count(), 9);
    }

    #[test]
    fn dimension_mismatch() {
        let r = SphereRule::build(3, 0).unwrap();
        let one = FunctionSpec::constant(1.0).unwrap();
        assert!(r.sphere_average(&[one, one], 1.0, 0.0).is_err());
    }
}
