//! Symbolic one-dimensional test functions.
//!
//! Four shapes cover every input the operators are probed with:
//!
//! | kind           | formula                                              |
//! |----------------|------------------------------------------------------|
//! | `indicator`    | `χ_[a,b](x)`                                         |
//! | `powerlog`     | `|x|^{-α} (-log|x|)^{-β} χ_[-s,s](x)`, `0 < s < 1`   |
//! | `powerlogtail` | `|x|^{-α} (log|x|)^{-β} χ_{|x| ≥ R}(x)`, `R ≥ 2`     |
//! | `constant`     | `c`                                                  |
//!
//! All are nonnegative and evaluate exactly. The JSON form is an object
//! tagged by `"kind"`; the command line uses the short forms `ind:a,b`,
//! `plog:α,β,s`, `ptail:α,β,R` and `const:c`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::TanhSinh;

/// Quadrature level for numeric norms.
const NORM_LEVEL: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub enum FunctionSpec {
    Indicator { a: f64, b: f64 },
    PowerLog { alpha: f64, beta: f64, s: f64 },
    PowerLogTail { alpha: f64, beta: f64, r: f64 },
    Constant { c: f64 },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawSpec {
    Indicator {
        a: f64,
        b: f64,
    },
    PowerLog {
        alpha: f64,
        beta: f64,
        s: f64,
    },
    PowerLogTail {
        alpha: f64,
        beta: f64,
        #[serde(rename = "R")]
        r: f64,
    },
    Constant {
        c: f64,
    },
}

impl TryFrom<RawSpec> for FunctionSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        match raw {
            RawSpec::Indicator { a, b } => Self::indicator(a, b),
            RawSpec::PowerLog { alpha, beta, s } => Self::power_log(alpha, beta, s),
            RawSpec::PowerLogTail { alpha, beta, r } => Self::power_log_tail(alpha, beta, r),
            RawSpec::Constant { c } => Self::constant(c),
        }
    }
}

impl From<FunctionSpec> for RawSpec {
    fn from(f: FunctionSpec) -> Self {
        match f {
            FunctionSpec::Indicator { a, b } => RawSpec::Indicator { a, b },
            FunctionSpec::PowerLog { alpha, beta, s } => RawSpec::PowerLog { alpha, beta, s },
            FunctionSpec::PowerLogTail { alpha, beta, r } => {
                RawSpec::PowerLogTail { alpha, beta, r }
            }
            FunctionSpec::Constant { c } => RawSpec::Constant { c },
        }
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidFunction(format!(
            "{name} must be finite, got {v}"
        )))
    }
}

fn nonneg(name: &str, v: f64) -> Result<()> {
    finite(name, v)?;
    if v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidFunction(format!(
            "{name} must be >= 0, got {v}"
        )))
    }
}

impl FunctionSpec {
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        finite("a", a)?;
        finite("b", b)?;
        if a >= b {
            return Err(Error::InvalidFunction(format!(
                "indicator needs a < b, got [{a}, {b}]"
            )));
        }
        Ok(Self::Indicator { a, b })
    }

    pub fn power_log(alpha: f64, beta: f64, s: f64) -> Result<Self> {
        nonneg("alpha", alpha)?;
        nonneg("beta", beta)?;
        finite("s", s)?;
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidFunction(format!(
                "powerlog needs 0 < s < 1, got {s}"
            )));
        }
        Ok(Self::PowerLog { alpha, beta, s })
    }

    pub fn power_log_tail(alpha: f64, beta: f64, r: f64) -> Result<Self> {
        nonneg("alpha", alpha)?;
        nonneg("beta", beta)?;
        finite("R", r)?;
        if r < 2.0 {
            return Err(Error::InvalidFunction(format!(
                "powerlogtail needs R >= 2, got {r}"
            )));
        }
        Ok(Self::PowerLogTail { alpha, beta, r })
    }

    pub fn constant(c: f64) -> Result<Self> {
        nonneg("c", c)?;
        Ok(Self::Constant { c })
    }

    /// Exact value at `x`; `f64::INFINITY` at the singular point of a
    /// `powerlog` with `alpha > 0`.
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::Indicator { a, b } => {
                if (a..=b).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            Self::PowerLog { alpha, beta, s } => {
                let ax = x.abs();
                if ax > s {
                    0.0
                } else if ax == 0.0 {
                    if alpha > 0.0 {
                        f64::INFINITY
                    } else if beta > 0.0 {
                        0.0
                    } else {
                        1.0
                    }
                } else {
                    power_log_value(ax, alpha, beta)
                }
            }
            Self::PowerLogTail { alpha, beta, r } => {
                let ax = x.abs();
                if ax < r {
                    0.0
                } else {
                    tail_value(ax, alpha, beta)
                }
            }
            Self::Constant { c } => c,
        }
    }

    /// Points where the function jumps or blows up. Sorted.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Self::Indicator { a, b } => vec![a, b],
            Self::PowerLog { s, .. } => vec![-s, 0.0, s],
            Self::PowerLogTail { r, .. } => vec![-r, r],
            Self::Constant { .. } => Vec::new(),
        }
    }

    pub fn singular_point(&self) -> Option<f64> {
        match *self {
            Self::PowerLog { alpha, .. } if alpha > 0.0 => Some(0.0),
            _ => None,
        }
    }

    /// Closed hull of the support, or `None` when the support is unbounded.
    pub fn support_hull(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Indicator { a, b } => Some((a, b)),
            Self::PowerLog { s, .. } => Some((-s, s)),
            Self::PowerLogTail { .. } => None,
            Self::Constant { c } => (c == 0.0).then_some((0.0, 0.0)),
        }
    }

    /// `‖f‖_{L^p(ℝ)}` for `p ≥ 1` (`p = f64::INFINITY` allowed);
    /// `f64::INFINITY` when the norm diverges.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p == f64::INFINITY {
            return self.sup_norm();
        }
        self.lp_integral(p).powf(1.0 / p)
    }

    /// `∫ |f|^p`, closed form where an antiderivative is available.
    pub fn lp_integral(&self, p: f64) -> f64 {
        match *self {
            Self::Indicator { a, b } => b - a,
            Self::Constant { c } => {
                if c == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Self::PowerLog { alpha, beta, s } => {
                let (a, b) = (alpha * p, beta * p);
                let l = (1.0 / s).ln();
                if a > 1.0 || (a == 1.0 && b <= 1.0) {
                    f64::INFINITY
                } else if a == 1.0 {
                    // d/du (log 1/u)^{1-b} / (b-1) = u^{-1} (log 1/u)^{-b}
                    2.0 * l.powf(1.0 - b) / (b - 1.0)
                } else if a == 0.0 && b == 0.0 {
                    2.0 * s
                } else {
                    2.0 * TanhSinh::new(NORM_LEVEL).panel(0.0, s, |pt| {
                        let u = if pt.near_left() { pt.from_left } else { pt.pos };
                        power_log_value(u, a, b)
                    })
                }
            }
            Self::PowerLogTail { alpha, beta, r } => {
                let (a, b) = (alpha * p, beta * p);
                let l = r.ln();
                if a < 1.0 || (a == 1.0 && b <= 1.0) {
                    f64::INFINITY
                } else if a == 1.0 {
                    2.0 * l.powf(1.0 - b) / (b - 1.0)
                } else {
                    // u = R e^{τ/(a-1)}
                    let k = a - 1.0;
                    let i = TanhSinh::new(NORM_LEVEL)
                        .semi_infinite(|tau| (-tau).exp() * (l + tau / k).powf(-b));
                    2.0 * r.powf(1.0 - a) * i / k
                }
            }
        }
    }

    fn sup_norm(&self) -> f64 {
        match *self {
            Self::Indicator { .. } => 1.0,
            Self::Constant { c } => c,
            Self::PowerLog { alpha, beta, s } => {
                if alpha > 0.0 {
                    f64::INFINITY
                } else {
                    (1.0 / s).ln().powf(-beta)
                }
            }
            Self::PowerLogTail { alpha, beta, r } => tail_value(r, alpha, beta),
        }
    }

    /// `x ↦ f(λx)` for the dilation-closed variants.
    pub fn dilate(&self, lambda: f64) -> Option<Self> {
        match *self {
            Self::Indicator { a, b } if lambda > 0.0 => Some(Self::Indicator {
                a: a / lambda,
                b: b / lambda,
            }),
            Self::Constant { c } => Some(Self::Constant { c }),
            _ => None,
        }
    }
}

fn power_log_value(u: f64, alpha: f64, beta: f64) -> f64 {
    let mut v = 1.0;
    if alpha != 0.0 {
        v *= u.powf(-alpha);
    }
    if beta != 0.0 {
        v *= (-u.ln()).powf(-beta);
    }
    v
}

fn tail_value(u: f64, alpha: f64, beta: f64) -> f64 {
    let mut v = 1.0;
    if alpha != 0.0 {
        v *= u.powf(-alpha);
    }
    if beta != 0.0 {
        v *= u.ln().powf(-beta);
    }
    v
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Indicator { a, b } => write!(f, "ind:{a},{b}"),
            Self::PowerLog { alpha, beta, s } => write!(f, "plog:{alpha},{beta},{s}"),
            Self::PowerLogTail { alpha, beta, r } => write!(f, "ptail:{alpha},{beta},{r}"),
            Self::Constant { c } => write!(f, "const:{c}"),
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return Ok(serde_json::from_str(s)?);
        }
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected kind:args, got {s:?}")))?;
        let nums = args
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{v:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let arity = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "{kind} takes {n} arguments, got {}",
                    nums.len()
                )))
            }
        };
        match kind {
            "ind" => {
                arity(2)?;
                Self::indicator(nums[0], nums[1])
            }
            "plog" => {
                arity(3)?;
                Self::power_log(nums[0], nums[1], nums[2])
            }
            "ptail" => {
                arity(3)?;
                Self::power_log_tail(nums[0], nums[1], nums[2])
            }
            "const" => {
                arity(1)?;
                Self::constant(nums[0])
            }
            other => Err(Error::Parse(format!("unknown function kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eval_examples() {
        let ind = FunctionSpec::indicator(-1.0, 1.0).unwrap();
        assert_eq!(ind.eval(0.5), 1.0);
        assert_eq!(ind.eval(1.0), 1.0);
        assert_eq!(ind.eval(1.5), 0.0);

        let pl = FunctionSpec::power_log(0.5, 1.0, 0.5).unwrap();
        assert_relative_eq!(pl.eval(0.25), 2.0 / 4f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(pl.eval(-0.25), 2.0 / 4f64.ln(), max_relative = 1e-15);
        assert_eq!(pl.eval(0.9), 0.0);
        assert_eq!(pl.eval(0.0), f64::INFINITY);

        let flat = FunctionSpec::power_log(0.0, 1.0, 0.5).unwrap();
        assert_eq!(flat.eval(0.0), 0.0);

        let tail = FunctionSpec::power_log_tail(1.0, 2.0, 2.0).unwrap();
        assert_eq!(tail.eval(1.0), 0.0);
        assert_relative_eq!(tail.eval(-4.0), 0.25 / 4f64.ln().powi(2));
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(FunctionSpec::indicator(1.0, 1.0).is_err());
        assert!(FunctionSpec::power_log(0.5, 1.0, 1.0).is_err());
        assert!(FunctionSpec::power_log(-0.5, 1.0, 0.5).is_err());
        assert!(FunctionSpec::power_log_tail(0.5, 1.0, 1.5).is_err());
        assert!(FunctionSpec::constant(-1.0).is_err());
        assert!(FunctionSpec::constant(f64::NAN).is_err());
    }

    #[test]
    fn closed_form_norms() {
        let d = 0.125;
        let ind = FunctionSpec::indicator(-d, d).unwrap();
        for p in [1.0, 2.0, 3.5] {
            assert_relative_eq!(
                ind.lp_norm(p),
                (2.0 * d).powf(1.0 / p),
                max_relative = 1e-14
            );
        }
        for p in [1.0, 2.0, 4.0] {
            let f = FunctionSpec::power_log(1.0 / p, 2.0 / p, 0.5).unwrap();
            assert_relative_eq!(
                f.lp_norm(p),
                (2.0 / 2f64.ln()).powf(1.0 / p),
                max_relative = 1e-12
            );
        }
        assert_eq!(
            FunctionSpec::constant(2.0).unwrap().lp_norm(f64::INFINITY),
            2.0
        );
        assert_eq!(
            FunctionSpec::constant(2.0).unwrap().lp_norm(3.0),
            f64::INFINITY
        );
        assert_eq!(FunctionSpec::constant(0.0).unwrap().lp_norm(3.0), 0.0);
    }

    #[test]
    fn divergent_norms_are_infinite() {
        let f = FunctionSpec::power_log(0.5, 0.5, 0.5).unwrap();
        assert_eq!(f.lp_norm(2.0), f64::INFINITY);
        let f = FunctionSpec::power_log(0.75, 0.0, 0.5).unwrap();
        assert_eq!(f.lp_norm(2.0), f64::INFINITY);
        let g = FunctionSpec::power_log_tail(0.25, 0.5, 2.0).unwrap();
        assert_eq!(g.lp_norm(2.0), f64::INFINITY);
        assert!(g.lp_norm(3.5).is_infinite());
        // alpha p = 1 with beta p = 2 > 1 sits on the convergent side
        assert!(g.lp_norm(4.0).is_finite());
        assert!(g.lp_norm(4.5).is_finite());
    }

    #[test]
    fn sup_norms() {
        assert_eq!(
            FunctionSpec::power_log(0.5, 1.0, 0.5)
                .unwrap()
                .lp_norm(f64::INFINITY),
            f64::INFINITY
        );
        let f = FunctionSpec::power_log(0.0, 1.0, 0.5).unwrap();
        assert_relative_eq!(f.lp_norm(f64::INFINITY), 1.0 / 2f64.ln());
        let g = FunctionSpec::power_log_tail(0.5, 0.0, 4.0).unwrap();
        assert_relative_eq!(g.lp_norm(f64::INFINITY), 0.5);
    }

    #[test]
    fn mini_syntax_and_json() {
        let f: FunctionSpec = "plog:0.5,1,0.5".parse().unwrap();
        assert_eq!(f, FunctionSpec::power_log(0.5, 1.0, 0.5).unwrap());
        assert_eq!(f.to_string().parse::<FunctionSpec>().unwrap(), f);
        assert!("ind:1".parse::<FunctionSpec>().is_err());
        assert!("foo:1".parse::<FunctionSpec>().is_err());
        assert!("ind:2,1".parse::<FunctionSpec>().is_err());

        let j =
            serde_json::to_string(&FunctionSpec::power_log_tail(0.25, 0.5, 2.0).unwrap()).unwrap();
        assert_eq!(
            j,
            r#"{"kind":"powerlogtail","alpha":0.25,"beta":0.5,"R":2.0}"#
        );
        let back: FunctionSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, FunctionSpec::power_log_tail(0.25, 0.5, 2.0).unwrap());
        assert!(
            serde_json::from_str::<FunctionSpec>(r#"{"kind":"indicator","a":1,"b":0}"#).is_err()
        );
        let c: FunctionSpec = r#"{"kind":"constant","c":3}"#.parse().unwrap();
        assert_eq!(c, FunctionSpec::Constant { c: 3.0 });
    }
}
