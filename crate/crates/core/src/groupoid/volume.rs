use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{FiniteGroupoid, ObjectIx, OrbitDecomposition};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Per-object weights `a` (nowhere zero) and `b`; their quotient `b/a` is the
/// section whose volume is being measured.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightData<S> {
    pub a: Vec<S>,
    pub b: Vec<S>,
}

impl<S: Scalar> WeightData<S> {
    pub fn new(a: Vec<S>, b: Vec<S>) -> Self {
        Self { a, b }
    }

    /// `a = b = 1` everywhere.
    pub fn unit(objects: usize) -> Self {
        Self {
            a: vec![S::one(); objects],
            b: vec![S::one(); objects],
        }
    }

    /// `a = 1`, `b = λ`.
    pub fn from_section(lambda: Vec<S>) -> Self {
        Self {
            a: vec![S::one(); lambda.len()],
            b: lambda,
        }
    }

    /// `λ(x) = b(x)/a(x)`.
    pub fn section(&self) -> Vec<S> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(a, b)| b.clone() / a.clone())
            .collect()
    }

    /// Multiply both `a` and `b` by `theta`.
    pub fn rescaled(&self, theta: &[S]) -> Self {
        Self {
            a: self.a.iter().zip(theta).map(|(a, t)| a.clone() * t.clone()).collect(),
            b: self.b.iter().zip(theta).map(|(b, t)| b.clone() * t.clone()).collect(),
        }
    }

    fn check(&self, g: &FiniteGroupoid) -> Result<()> {
        if self.a.len() != g.object_count() || self.b.len() != g.object_count() {
            return Err(Error::Precondition(format!(
                "weights cover {}/{} objects, groupoid has {}",
                self.a.len(),
                self.b.len(),
                g.object_count()
            )));
        }
        if let Some(x) = self.a.iter().position(|a| a.is_zero()) {
            return Err(Error::ZeroWeight {
                object: g.object_id(x).to_string(),
            });
        }
        Ok(())
    }
}

impl FiniteGroupoid {
    /// Sum over orbits of the reciprocal isotropy order; zero when empty.
    pub fn cardinality<S: Scalar>(&self) -> Result<S> {
        let orbits = self.orbits()?;
        Ok(orbits
            .orbits
            .iter()
            .fold(S::zero(), |acc, o| acc + S::one() / S::from_count(o.isotropy_order)))
    }

    /// `Σ_y (Σ_{g ∈ r⁻¹(y)} a(l(g)))⁻¹ b(y)`, summed over objects.
    pub fn fiber_volume<S: Scalar>(&self, w: &WeightData<S>) -> Result<S> {
        self.ensure_valid()?;
        w.check(self)?;
        let mut total = S::zero();
        for y in 0..self.object_count() {
            let fiber = self
                .incoming(y)
                .iter()
                .fold(S::zero(), |acc, &g| acc + w.a[self.source(g)].clone());
            if fiber.is_zero() {
                return Err(Error::DegenerateWeight {
                    object: self.object_id(y).to_string(),
                });
            }
            total = total + w.b[y].clone() / fiber;
        }
        Ok(total)
    }

    /// `Σ_O #(G_O)⁻¹ λ(O)`; requires `λ = b/a` to be constant on orbits.
    pub fn orbit_volume<S: Scalar>(&self, w: &WeightData<S>) -> Result<S> {
        let orbits = self.orbits()?;
        let all: Vec<usize> = (0..orbits.len()).collect();
        self.orbit_measure_with(&orbits, w, &all)
    }

    /// Measure of the preimage of a finite set of orbits (indices into
    /// [`FiniteGroupoid::orbits`]). Duplicate ids count once.
    pub fn orbit_set_measure<S: Scalar>(&self, w: &WeightData<S>, orbit_ids: &[usize]) -> Result<S> {
        let orbits = self.orbits()?;
        self.orbit_measure_with(&orbits, w, orbit_ids)
    }

    fn orbit_measure_with<S: Scalar>(
        &self,
        orbits: &OrbitDecomposition,
        w: &WeightData<S>,
        orbit_ids: &[usize],
    ) -> Result<S> {
        w.check(self)?;
        if let Some(&bad) = orbit_ids.iter().find(|&&k| k >= orbits.len()) {
            return Err(Error::UnknownOrbit(bad));
        }
        let lambda = self.invariant_section(orbits, w)?;
        let chosen: BTreeSet<usize> = orbit_ids.iter().copied().collect();
        Ok(chosen.into_iter().fold(S::zero(), |acc, k| {
            let orbit = &orbits.orbits[k];
            acc + lambda[orbit.representative].clone() / S::from_count(orbit.isotropy_order)
        }))
    }

    /// `b/a`, checked to be constant on every orbit.
    pub fn invariant_section<S: Scalar>(
        &self,
        orbits: &OrbitDecomposition,
        w: &WeightData<S>,
    ) -> Result<Vec<S>> {
        w.check(self)?;
        let lambda = w.section();
        self.check_invariant(orbits, &lambda)?;
        Ok(lambda)
    }

    /// Error naming the first orbit on which `lambda` is not constant.
    pub fn check_invariant<S: Scalar>(&self, orbits: &OrbitDecomposition, lambda: &[S]) -> Result<()> {
        for (k, orbit) in orbits.orbits.iter().enumerate() {
            let rep: ObjectIx = orbit.representative;
            if let Some(&x) = orbit.objects.iter().find(|&&x| lambda[x] != lambda[rep]) {
                return Err(Error::NonInvariantSection {
                    orbit: k,
                    first: self.object_id(rep).to_string(),
                    second: self.object_id(x).to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Cardinality of the groupoid of finite sets truncated at size `cutoff`:
/// `Σ_{n ≤ cutoff} 1/n!`, the orbit of `n`-element sets having isotropy `S_n`.
pub fn finite_sets_cardinality(cutoff: usize) -> BigRational {
    let mut factorial = BigInt::one();
    let mut sum = BigRational::zero();
    for n in 0..=cutoff {
        if n > 0 {
            factorial *= n;
        }
        sum += BigRational::new(BigInt::one(), factorial.clone());
    }
    sum
}
