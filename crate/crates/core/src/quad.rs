//! Double-exponential (tanh-sinh) panel quadrature.
//!
//! Every singular integrand in this crate has its singularities at panel
//! endpoints: support edges, the zero of a power-log factor, or a tangency.
//! Tanh-sinh clusters nodes double-exponentially toward both ends, and each
//! node also carries its distance to the nearer endpoint computed without
//! cancellation, so integrands can evaluate `|u|^{-α}` at offsets far below
//! `f64::EPSILON` relative to the panel position.

use std::f64::consts::FRAC_PI_2;

/// Truncation of the tanh-sinh abscissa. At `τ = 5` the node sits
/// `~1e-101` (relative) from the endpoint.
const TAU_MAX: f64 = 5.0;

/// Abscissa cut used on panel ends where the integrand stays bounded; the
/// dropped weight is below `1e-16` of the panel.
const TAU_SHALLOW: f64 = 3.2;

/// Level used when callers have no preference.
pub const DEFAULT_LEVEL: u32 = 3;

#[derive(Debug, Clone, Copy)]
struct RefNode {
    tau: f64,
    /// Abscissa in (-1, 1).
    x: f64,
    /// `1 - |x|`, accurate to full relative precision.
    gap: f64,
    /// Weight on the reference interval.
    w: f64,
}

/// A point inside a panel `[a, b]`.
#[derive(Debug, Clone, Copy)]
pub struct PanelPoint {
    pub pos: f64,
    /// `pos - a`; exact to relative precision when the node is in the left half.
    pub from_left: f64,
    /// `b - pos`; exact to relative precision when the node is in the right half.
    pub from_right: f64,
}

impl PanelPoint {
    /// True when the node is closer to the left endpoint.
    pub fn near_left(&self) -> bool {
        self.from_left <= self.from_right
    }
}

/// Tanh-sinh rule on the reference interval with step `2^-level`.
#[derive(Debug, Clone)]
pub struct TanhSinh {
    level: u32,
    nodes: Vec<RefNode>,
}

impl TanhSinh {
    pub fn new(level: u32) -> Self {
        let h = 0.5f64.powi(level as i32);
        let kmax = (TAU_MAX / h).ceil() as i64;
        let mut nodes = Vec::with_capacity(2 * kmax as usize + 1);
        for k in -kmax..=kmax {
            let tau = k as f64 * h;
            let z = FRAC_PI_2 * tau.sinh();
            let e = (-2.0 * z.abs()).exp();
            // tanh|z| = (1 - e) / (1 + e), so 1 - tanh|z| = 2e / (1 + e).
            let gap = 2.0 * e / (1.0 + e);
            let x = z.signum() * (1.0 - gap);
            let cosh_z = 0.5 * (z.abs().exp() + (-z.abs()).exp());
            let w = h * FRAC_PI_2 * tau.cosh() / (cosh_z * cosh_z);
            if w > 0.0 && gap > 0.0 {
                nodes.push(RefNode { tau, x, gap, w });
            }
        }
        Self { level, nodes }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b g` where `g` receives each node with both endpoint offsets.
    pub fn panel<F>(&self, a: f64, b: f64, g: F) -> f64
    where
        F: FnMut(PanelPoint) -> f64,
    {
        self.panel_graded(a, b, true, true, g)
    }

    /// Like [`TanhSinh::panel`], but only ends flagged `deep` get the far
    /// tail of nodes. Unflagged ends must carry a bounded integrand.
    pub fn panel_graded<F>(
        &self,
        a: f64,
        b: f64,
        deep_left: bool,
        deep_right: bool,
        mut g: F,
    ) -> f64
    where
        F: FnMut(PanelPoint) -> f64,
    {
        if !(b > a) {
            return 0.0;
        }
        let half = 0.5 * (b - a);
        let len = b - a;
        let mut acc = Sum::default();
        for n in &self.nodes {
            if (n.tau < -TAU_SHALLOW && !deep_left) || (n.tau > TAU_SHALLOW && !deep_right) {
                continue;
            }
            let p = if n.x <= 0.0 {
                let from_left = half * n.gap;
                PanelPoint {
                    pos: a + from_left,
                    from_left,
                    from_right: len - from_left,
                }
            } else {
                let from_right = half * n.gap;
                PanelPoint {
                    pos: b - from_right,
                    from_left: len - from_right,
                    from_right,
                }
            };
            let v = g(p);
            if v != 0.0 {
                acc.add(n.w * v);
            }
        }
        half * acc.value()
    }

    /// Integrates over `[a, b]` split at the given breakpoints (unsorted,
    /// possibly outside the interval).
    pub fn integrate_split<F>(&self, a: f64, b: f64, breaks: &[f64], mut g: F) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        let cuts = panel_cuts(a, b, breaks);
        let mut acc = Sum::default();
        for w in cuts.windows(2) {
            acc.add(self.panel(w[0], w[1], |p| g(p.pos)));
        }
        acc.value()
    }

    /// `∫_0^∞ g(τ) dτ` through `τ = v / (1 - v)`; `g` must decay fast enough
    /// for the mapped integrand to vanish at `v = 1`.
    pub fn semi_infinite<F>(&self, mut g: F) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        self.panel(0.0, 1.0, |p| {
            let one_minus = p.from_right;
            let tau = p.pos / one_minus;
            let jac = 1.0 / (one_minus * one_minus);
            let v = g(tau);
            if v == 0.0 {
                0.0
            } else {
                v * jac
            }
        })
    }
}

/// Sorted, deduplicated cut points of `[a, b]` including both ends.
pub fn panel_cuts(a: f64, b: f64, breaks: &[f64]) -> Vec<f64> {
    let mut cuts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    cuts.push(a);
    cuts.extend(breaks.iter().copied().filter(|&c| c > a && c < b));
    cuts.push(b);
    cuts.sort_by(|p, q| p.total_cmp(q));
    cuts.dedup_by(|p, q| (*p - *q).abs() <= 1e-15 * (1.0 + q.abs()));
    cuts
}

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sum {
    sum: f64,
    comp: f64,
}

impl Sum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Sum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Sum::default();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// `Γ(n / 2)` for a positive integer `n`.
pub fn gamma_half(n: usize) -> f64 {
    assert!(n > 0, "gamma_half needs n >= 1");
    let (mut g, mut k) = if n.is_multiple_of(2) {
        (1.0, 2)
    } else {
        (std::f64::consts::PI.sqrt(), 1)
    };
    while k < n {
        g *= k as f64 / 2.0;
        k += 2;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn smooth_integrals() {
        let ts = TanhSinh::new(DEFAULT_LEVEL);
        assert_relative_eq!(
            ts.panel(0.0, 1.0, |p| p.pos.exp()),
            1f64.exp() - 1.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(ts.panel(-2.0, 3.0, |_| 1.0), 5.0, max_relative = 1e-13);
    }

    #[test]
    fn endpoint_singularities() {
        let ts = TanhSinh::new(4);
        // ∫_0^1 x^{-1/2} = 2, ∫_0^1 (1-x)^{-3/4} = 4
        assert_relative_eq!(
            ts.panel(0.0, 1.0, |p| p.from_left.powf(-0.5)),
            2.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            ts.panel(0.0, 1.0, |p| p.from_right.powf(-0.75)),
            4.0,
            max_relative = 1e-10
        );
        // ∫_0^{1/2} du / (u log^2(1/u)) = 1 / ln 2
        let v = ts.panel(0.0, 0.5, |p| {
            let u = p.from_left;
            1.0 / (u * (1.0 / u).ln().powi(2))
        });
        assert_relative_eq!(v, 1.0 / 2f64.ln(), max_relative = 5e-3);
    }

    #[test]
    fn offsets_resolve_below_epsilon() {
        let ts = TanhSinh::new(3);
        let mut smallest = f64::INFINITY;
        ts.panel(1.0, 2.0, |p| {
            smallest = smallest.min(p.from_left);
            0.0
        });
        assert!(smallest < 1e-90);
    }

    #[test]
    fn graded_panels_match_on_bounded_integrands() {
        let ts = TanhSinh::new(2);
        let full = ts.panel(0.0, 2.0, |p| p.pos.sqrt() * (1.0 + p.pos).ln());
        let graded = ts.panel_graded(0.0, 2.0, false, false, |p| {
            p.pos.sqrt() * (1.0 + p.pos).ln()
        });
        assert_relative_eq!(full, graded, max_relative = 1e-14);
    }

    #[test]
    fn semi_infinite_exponential() {
        let ts = TanhSinh::new(4);
        assert_relative_eq!(ts.semi_infinite(|t| (-t).exp()), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn compensated_sum() {
        let s: Sum = [1e16, 1.0, -1e16, 1.0].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn gamma_half_values() {
        assert_relative_eq!(gamma_half(1), std::f64::consts::PI.sqrt());
        assert_relative_eq!(gamma_half(2), 1.0);
        assert_relative_eq!(
            gamma_half(5),
            0.75 * std::f64::consts::PI.sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(gamma_half(8), 6.0);
    }
}
