//! Seeded Monte Carlo sampler for the uniform measure on `S^{m-1}`.
//!
//! Points come from normalizing standard Gaussian vectors; running mean and
//! variance use Welford's update.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl McEstimate {
    /// Distance from `value` in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        let d = (value - self.mean).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

fn unit_vector<R: Rng>(rng: &mut R, y: &mut [f64]) {
    loop {
        let mut n2 = 0.0;
        for v in y.iter_mut() {
            *v = rng.sample(StandardNormal);
            n2 += *v * *v;
        }
        if n2 > 0.0 {
            let inv = n2.sqrt().recip();
            y.iter_mut().for_each(|v| *v *= inv);
            return;
        }
    }
}

/// `∫_{S^{m-1}} g dσ` estimated from `samples` uniform points.
pub fn mc_sphere_integral<G>(m: usize, samples: usize, seed: u64, mut g: G) -> Result<McEstimate>
where
    G: FnMut(&[f64]) -> f64,
{
    if m < 1 {
        return Err(Error::UnsupportedDimension(m));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = vec![0.0; m];
    let (mut mean, mut m2) = (0.0, 0.0);
    for k in 1..=samples {
        unit_vector(&mut rng, &mut y);
        let v = g(&y);
        let d = v - mean;
        mean += d / k as f64;
        m2 += d * (v - mean);
    }
    let var = m2 / (samples - 1) as f64;
    Ok(McEstimate {
        mean,
        std_error: (var / samples as f64).sqrt(),
        samples,
    })
}

/// Monte Carlo estimate of `S^m_t(f_1, …, f_m)(x)`.
pub fn mc_spherical_average(
    fs: &[FunctionSpec],
    t: f64,
    x: f64,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    mc_sphere_integral(fs.len(), samples, seed, |y| {
        fs.iter()
            .zip(y)
            .map(|(f, &yi)| f.eval(x - t * yi))
            .product()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_moment_within_error() {
        let est = mc_sphere_integral(3, 100_000, 7, |y| y[0] * y[0]).unwrap();
        assert!(est.z_score(1.0 / 3.0) < 4.0, "{est:?}");
    }

    #[test]
    fn seeded_is_reproducible() {
        let f = FunctionSpec::indicator(-1.0, 0.5).unwrap();
        let a = mc_spherical_average(&[f, f], 1.0, 0.2, 1000, 3).unwrap();
        let b = mc_spherical_average(&[f, f], 1.0, 0.2, 1000, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn constant_has_zero_error() {
        let one = FunctionSpec::constant(1.0).unwrap();
        let e = mc_spherical_average(&[one, one, one], 2.0, 0.0, 100, 1).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.std_error, 0.0);
        assert_eq!(e.z_score(1.0), 0.0);
    }
}
