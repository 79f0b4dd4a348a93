//! Straight-line least squares, used for log-log slopes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest `|y - (slope·x + intercept)|`.
    pub max_residual: f64,
}

/// Ordinary least squares through `(xs[i], ys[i])`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::InvalidArgument(
            "a line fit needs at least two points".into(),
        ));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "line fit input must be finite".into(),
        ));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(
            "line fit needs distinct abscissae".into(),
        ));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    Ok(LineFit {
        slope,
        intercept,
        max_residual,
    })
}

/// Fit of `log y` against `log x`.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument(
            "log-log fit needs positive data".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    fit_line(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-1.5)).collect();
        let f = fit_loglog(&xs, &ys).unwrap();
        assert_abs_diff_eq!(f.slope, -1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(f.intercept, 3f64.ln(), epsilon = 1e-12);
        assert!(f.max_residual < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_line(&[1.0], &[1.0]).is_err());
        assert!(fit_line(&[1.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(fit_line(&[1.0, 2.0], &[1.0]).is_err());
        assert!(fit_loglog(&[1.0, 2.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn residual_of_noisy_line() {
        let f = fit_line(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(f.slope, 0.0);
        assert_abs_diff_eq!(f.max_residual, 2.0 / 3.0, epsilon = 1e-15);
    }
}
