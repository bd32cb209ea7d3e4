//! Deterministic numerical integration: adaptive Simpson in one dimension,
//! adaptive tensor Gauss–Legendre cells in two, plain seeded Monte Carlo
//! beyond that.

mod cubature;
mod gauss;
mod monte_carlo;
mod simpson;

pub use cubature::{integrate_box, Region};
pub use gauss::gauss_legendre;
pub use monte_carlo::{integrate_mc, MonteCarloSampler};
pub use simpson::{integrate_1d, MAX_DEPTH};

use crate::error::Error;
use crate::scalar::FloatScalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult<F> {
    pub value: F,
    /// Nonnegative estimate of the absolute error (a standard error for
    /// Monte Carlo).
    pub error_estimate: F,
    pub evaluations: usize,
}

impl<F: FloatScalar> QuadratureResult<F> {
    pub fn new(value: F, error_estimate: F, evaluations: usize) -> Self {
        Self {
            value,
            error_estimate: error_estimate.abs(),
            evaluations,
        }
    }

    pub(crate) fn non_convergence(self) -> Error {
        Error::NonConvergence {
            value: self.value.as_f64(),
            error_estimate: self.error_estimate.as_f64(),
            evaluations: self.evaluations,
        }
    }
}
