use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::QuadratureResult;
use crate::error::{Error, Result};
use crate::scalar::FloatScalar;

/// Seeded stream of draws; the generator is ChaCha8 so that identical seeds
/// reproduce identical sample paths on every platform.
pub struct MonteCarloSampler {
    rng: ChaCha8Rng,
}

impl MonteCarloSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform<F: FloatScalar>(&mut self, lo: F, hi: F) -> F {
        let u: f64 = self.rng.random();
        lo + (hi - lo) * F::lit(u)
    }

    pub fn standard_normal<F: FloatScalar>(&mut self) -> F {
        // Box–Muller; 1 - u keeps the logarithm finite
        let u1: f64 = 1.0 - self.rng.random::<f64>();
        let u2: f64 = self.rng.random();
        F::lit((-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos())
    }

    /// Sample mean of `draw` with its standard error, scaled by `scale`.
    pub fn mean<F: FloatScalar>(
        &mut self,
        samples: usize,
        scale: F,
        mut draw: impl FnMut(&mut Self) -> F,
    ) -> Result<QuadratureResult<F>> {
        if samples == 0 {
            return Err(Error::Precondition("Monte Carlo needs at least one sample".into()));
        }
        // Welford accumulation
        let (mut mean, mut m2) = (F::zero(), F::zero());
        for k in 1..=samples {
            let y = draw(self);
            let delta = y - mean;
            mean = mean + delta / F::from_usize(k).unwrap();
            m2 = m2 + delta * (y - mean);
        }
        let n = F::from_usize(samples).unwrap();
        let std_error = if samples > 1 {
            (m2 / (n - F::one()) / n).sqrt()
        } else {
            F::zero()
        };
        Ok(QuadratureResult::new(scale * mean, scale * std_error, samples))
    }
}

/// Plain Monte Carlo over the box `[lo, hi]` (any dimension): volume times
/// the sample mean, with the standard error as error estimate.
pub fn integrate_mc<F: FloatScalar>(
    mut f: impl FnMut(&[F]) -> F,
    lo: &[F],
    hi: &[F],
    samples: usize,
    seed: u64,
) -> Result<QuadratureResult<F>> {
    if lo.len() != hi.len() || lo.is_empty() {
        return Err(Error::Precondition("box corners must have the same positive dimension".into()));
    }
    let volume = lo.iter().zip(hi).fold(F::one(), |v, (a, b)| v * (*b - *a));
    let mut point = vec![F::zero(); lo.len()];
    MonteCarloSampler::new(seed).mean(samples, volume, |s| {
        for (i, p) in point.iter_mut().enumerate() {
            *p = s.uniform(lo[i], hi[i]);
        }
        f(&point)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_on_unit_cube_is_exact() {
        let r = integrate_mc(|_: &[f64]| 1.0, &[0.0; 3], &[1.0; 3], 10_000, 7).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.error_estimate, 0.0);
    }

    #[test]
    fn same_seed_same_bits() {
        let f = |x: &[f64]| (x[0] * x[1]).sin() + x[2];
        let a = integrate_mc(f, &[0.0; 3], &[1.0; 3], 5000, 94720).unwrap();
        let b = integrate_mc(f, &[0.0; 3], &[1.0; 3], 5000, 94720).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
        let c = integrate_mc(f, &[0.0; 3], &[1.0; 3], 5000, 94721).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(integrate_mc(|_: &[f64]| 1.0, &[0.0], &[1.0], 0, 1).is_err());
    }

    #[test]
    fn normal_draws_have_unit_variance() {
        let mut s = MonteCarloSampler::new(3);
        let r = s.mean(200_000, 1.0, |s| {
            let z: f64 = s.standard_normal();
            z * z
        });
        assert!((r.unwrap().value - 1.0).abs() < 0.02);
    }
}
