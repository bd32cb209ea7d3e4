use std::fmt;
use std::sync::Arc;

use super::model::ParamFn;
use crate::error::{Error, Result};
use crate::scalar::{FloatScalar, Scalar};

/// `λ = c·ν_S²` on a symplectic groupoid whose isotropy is a finite group `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticModel<S> {
    pub c: S,
    pub k_order: usize,
    pub dimension: usize,
}

/// `c / #(K)`.
pub fn symplectic_bk_volume<S: Scalar>(m: &SymplecticModel<S>) -> Result<S> {
    if m.k_order == 0 {
        return Err(Error::Precondition("#(K) must be at least 1".into()));
    }
    if !m.dimension.is_multiple_of(2) {
        return Err(Error::Precondition("symplectic dimension must be even".into()));
    }
    Ok(m.c.clone() / S::from_count(m.k_order))
}

/// Finite-difference step for `V'`.
pub const DERIVATIVE_STEP: f64 = 1e-5;
/// `|V'|` below this is a critical point.
pub const CRITICAL_THRESHOLD: f64 = 1e-8;

/// A family of symplectic leaves of area `V(t)` with `λ = f(t)(ω_t∧dt)²`.
#[derive(Clone)]
pub struct PoissonFamilyModel<F> {
    pub v: ParamFn<F>,
    pub v_prime: Option<ParamFn<F>>,
    pub f: ParamFn<F>,
    pub domain: (F, F),
}

impl<F: fmt::Debug> fmt::Debug for PoissonFamilyModel<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PoissonFamilyModel")
            .field("domain", &self.domain)
            .field("closed_form_derivative", &self.v_prime.is_some())
            .finish_non_exhaustive()
    }
}

/// Which coefficient `f` to attach to a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficient {
    /// `f = (V')²`.
    DerivativeSquared,
    /// `f = V'`.
    Derivative,
    /// `f ≡ 1`.
    One,
}

impl<F: FloatScalar> PoissonFamilyModel<F> {
    /// Build a family and check `V'` stays away from zero on a sample grid.
    pub fn new(v: ParamFn<F>, v_prime: Option<ParamFn<F>>, f: ParamFn<F>, domain: (F, F)) -> Result<Self> {
        if !(domain.0 < domain.1) {
            return Err(Error::Precondition("empty parameter domain".into()));
        }
        let m = Self { v, v_prime, f, domain };
        let hi = domain.1.min(domain.0 + F::lit(10.0));
        let n = 64;
        for k in 1..n {
            let t = domain.0 + (hi - domain.0) * F::from_usize(k).unwrap() / F::from_usize(n).unwrap();
            m.derivative(t)?;
        }
        Ok(m)
    }

    /// Family with coefficient chosen from `coefficient`, using the given
    /// derivative (when known) to define it.
    pub fn with_coefficient(
        v: ParamFn<F>,
        v_prime: Option<ParamFn<F>>,
        coefficient: Coefficient,
        domain: (F, F),
    ) -> Result<Self> {
        let d: ParamFn<F> = match &v_prime {
            Some(d) => d.clone(),
            None => {
                let v = v.clone();
                Arc::new(move |t| central_difference(&*v, t, F::lit(DERIVATIVE_STEP)))
            }
        };
        let f: ParamFn<F> = match coefficient {
            Coefficient::DerivativeSquared => Arc::new(move |t| d(t) * d(t)),
            Coefficient::Derivative => d,
            Coefficient::One => Arc::new(|_| F::one()),
        };
        Self::new(v, v_prime, f, domain)
    }

    /// Spheres in `su(2)*`: `V(t) = 4πt` on `t > 0`.
    pub fn su2_dual(coefficient: Coefficient) -> Result<Self> {
        let four_pi = F::lit(4.0) * F::PI();
        Self::with_coefficient(
            Arc::new(move |t| four_pi * t),
            None,
            coefficient,
            (F::zero(), F::infinity()),
        )
    }

    /// `V(t) = p t² + q t` on `t > 0`.
    pub fn sphere_bundle(p: F, q: F, coefficient: Coefficient) -> Result<Self> {
        Self::with_coefficient(
            Arc::new(move |t| p * t * t + q * t),
            None,
            coefficient,
            (F::zero(), F::infinity()),
        )
    }

    fn check_interior(&self, t: F) -> Result<()> {
        let (lo, hi) = self.domain;
        if lo < t && t < hi {
            Ok(())
        } else {
            Err(Error::OutOfDomain { value: t.as_f64(), lo: lo.as_f64(), hi: hi.as_f64() })
        }
    }

    /// `V'(t)`: the closed form when supplied, else central differences with
    /// a Richardson retry before declaring a critical point.
    pub fn derivative(&self, t: F) -> Result<F> {
        self.check_interior(t)?;
        let threshold = F::lit(CRITICAL_THRESHOLD);
        let d = match &self.v_prime {
            Some(d) => d(t),
            None => {
                let h = F::lit(DERIVATIVE_STEP);
                let d = central_difference(&*self.v, t, h);
                if d.abs() >= threshold {
                    d
                } else {
                    let half = central_difference(&*self.v, t, h / F::lit(2.0));
                    (F::lit(4.0) * half - d) / F::lit(3.0)
                }
            }
        };
        if d.abs() < threshold || !d.is_finite() {
            return Err(Error::CriticalPoint { t: t.as_f64(), derivative: d.as_f64() });
        }
        Ok(d)
    }

    /// Density `f(t) / V'(t)` of the stack measure on the leaf space.
    pub fn poisson_stack_density(&self, t: F) -> Result<F> {
        let d = self.derivative(t)?;
        Ok((self.f)(t) / d)
    }

    /// Density of `dV`.
    pub fn natural_leaf_measure(&self, t: F) -> Result<F> {
        self.derivative(t)
    }

    /// `dV` times the Liouville area of the leaf at `t` measured against the
    /// leaf at `t = 1`.
    pub fn leaf_product_density(&self, t: F) -> Result<F> {
        self.check_interior(F::one())?;
        let d = self.derivative(t)?;
        Ok(d * (self.v)(t) / (self.v)(F::one()))
    }
}

fn central_difference<F: FloatScalar>(v: &(dyn Fn(F) -> F + Send + Sync), t: F, h: F) -> F {
    (v(t + h) - v(t - h)) / (h + h)
}
