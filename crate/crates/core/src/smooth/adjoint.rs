use num_complex::Complex;

use super::group::GroupModel;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d, MonteCarloSampler, QuadratureResult};
use crate::scalar::FloatScalar;

/// 2×2 complex matrix.
pub type Mat2<F> = [[Complex<F>; 2]; 2];

/// `Σ c_k iσ_k`.
pub fn su2_matrix<F: FloatScalar>(c: [F; 3]) -> Mat2<F> {
    let z = F::zero();
    [
        [Complex::new(z, c[2]), Complex::new(c[1], c[0])],
        [Complex::new(-c[1], c[0]), Complex::new(z, -c[2])],
    ]
}

/// Coordinates of a traceless anti-Hermitian matrix in the basis `iσ_k`.
pub fn su2_coords<F: FloatScalar>(m: &Mat2<F>) -> [F; 3] {
    [m[0][1].im, m[0][1].re, m[0][0].im]
}

fn mul<F: FloatScalar>(a: &Mat2<F>, b: &Mat2<F>) -> Mat2<F> {
    let mut out = [[Complex::new(F::zero(), F::zero()); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `[a, b] = ab - ba`.
pub fn bracket<F: FloatScalar>(a: &Mat2<F>, b: &Mat2<F>) -> Mat2<F> {
    let (ab, ba) = (mul(a, b), mul(b, a));
    let mut out = ab;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = ab[i][j] - ba[i][j];
        }
    }
    out
}

/// `exp(m)` for `m ∈ su(2)`: since `m² = -det(m)·I`,
/// `exp(m) = cos(ρ) I + sin(ρ)/ρ · m` with `ρ = √det(m)`.
pub fn su2_exp<F: FloatScalar>(m: &Mat2<F>) -> Mat2<F> {
    let rho = su2_det(m).sqrt();
    let (s, c) = rho.sin_cos();
    let k = if rho > F::zero() { s / rho } else { F::one() };
    let mut out = [[Complex::new(F::zero(), F::zero()); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = m[i][j] * k;
        }
        out[i][i] = out[i][i] + Complex::new(c, F::zero());
    }
    out
}

fn su2_det<F: FloatScalar>(m: &Mat2<F>) -> F {
    (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re
}

/// Smallest `t > 0` with `exp(t·m) = I`.
pub fn exp_period<F: FloatScalar>(m: &Mat2<F>) -> F {
    F::TAU() / su2_det(m).sqrt()
}

/// Cartan data of `su(2)`: lattice generator `e` of `exp⁻¹(1) ∩ t`, the
/// complementary pair `f, g` and the root value `σ` with
/// `[e, f] = σ g`, `[e, g] = -σ f`.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanData<F> {
    pub e: [F; 3],
    pub f: [F; 3],
    pub g: [F; 3],
    pub sigma: F,
}

/// Root forms in lattice coordinates: `σ_j(x) = Σ_i forms[j][i] x_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootData<F> {
    pub forms: Vec<Vec<F>>,
}

impl<F: FloatScalar> RootData<F> {
    pub fn rank(&self) -> usize {
        self.forms.first().map_or(0, Vec::len)
    }

    /// Number of positive roots.
    pub fn positive_roots(&self) -> usize {
        self.forms.len()
    }
}

impl<F: FloatScalar> CartanData<F> {
    /// Euclidean length of `e` in the `iσ_k` coordinates.
    pub fn lattice_norm(&self) -> F {
        self.e.iter().fold(F::zero(), |acc, c| acc + *c * *c).sqrt()
    }

    pub fn roots(&self) -> RootData<F> {
        RootData { forms: vec![vec![self.sigma]] }
    }
}

/// Build the Cartan data from the matrices themselves.
pub fn su2_cartan<F: FloatScalar>() -> CartanData<F> {
    let h = su2_matrix([F::zero(), F::zero(), F::one()]);
    let period = exp_period(&h);
    let e = [F::zero(), F::zero(), period];
    let f = [F::one(), F::zero(), F::zero()];
    let ef = su2_coords(&bracket(&su2_matrix(e), &su2_matrix(f)));
    let sigma = ef.iter().fold(F::zero(), |acc, c| acc + *c * *c).sqrt();
    let g = ef.map(|c| c / sigma);
    CartanData { e, f, g, sigma }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitDensity<F> {
    pub value: F,
    pub on_wall: bool,
}

/// `∏_j σ_j(e)²` at a point of the closed positive chamber.
pub fn adjoint_orbit_density<F: FloatScalar>(e: &[F], roots: &RootData<F>) -> Result<OrbitDensity<F>> {
    if e.len() != roots.rank() {
        return Err(Error::Precondition("Cartan parameter has the wrong rank".into()));
    }
    let mut value = F::one();
    let mut on_wall = false;
    for form in &roots.forms {
        let s = form.iter().zip(e).fold(F::zero(), |acc, (w, x)| acc + *w * *x);
        if s < F::zero() {
            return Err(Error::OutsideChamber);
        }
        on_wall |= s == F::zero();
        value = value * s * s;
    }
    Ok(OrbitDensity { value: if on_wall { F::zero() } else { value }, on_wall })
}

/// Radial test functions on the chamber coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestFunction<F> {
    /// `scale · exp(-(x/width)²)`.
    Gaussian { width: F, scale: F },
    /// `scale · exp(-((x - center)/width)²)`.
    ShiftedGaussian { center: F, width: F, scale: F },
    /// Indicator of `x < epsilon`.
    WallIndicator { epsilon: F },
}

/// Gaussian shipped with the catalog.
pub fn default_gaussian<F: FloatScalar>() -> TestFunction<F> {
    TestFunction::Gaussian { width: F::one(), scale: F::one() }
}

/// Gaussian tails beyond this many widths are dropped.
const TAIL_WIDTHS: f64 = 3.5;

impl<F: FloatScalar> TestFunction<F> {
    pub fn eval(&self, x: F) -> F {
        match *self {
            TestFunction::Gaussian { width, scale } => scale * (-(x / width).powi(2)).exp(),
            TestFunction::ShiftedGaussian { center, width, scale } => {
                scale * (-((x - center) / width).powi(2)).exp()
            }
            TestFunction::WallIndicator { epsilon } => {
                if x < epsilon {
                    F::one()
                } else {
                    F::zero()
                }
            }
        }
    }

    /// Chamber radius outside which `φ` is negligible.
    pub fn support(&self) -> F {
        let k = F::lit(TAIL_WIDTHS);
        match *self {
            TestFunction::Gaussian { width, .. } => k * width,
            TestFunction::ShiftedGaussian { center, width, .. } => center.abs() + k * width,
            TestFunction::WallIndicator { epsilon } => epsilon,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylReport<F> {
    pub lhs: QuadratureResult<F>,
    pub rhs: QuadratureResult<F>,
    pub relative_error: F,
    pub passed: bool,
}

/// `∫_{su(2)} φ(p(X)) dX` by Monte Carlo, with `dX` equal at 0 to the
/// pullback of the Haar measure of total volume 1.
pub fn weyl_lhs<F: FloatScalar>(phi: &TestFunction<F>, samples: usize, seed: u64) -> Result<QuadratureResult<F>> {
    let cartan = su2_cartan::<F>();
    let norm = cartan.lattice_norm();
    // Lebesgue measure in iσ-coordinates is Haar measure of volume 2π²
    let dx = F::one() / GroupModel::<F>::su2().group_volume();
    let half = phi.support() * norm;
    let cube = (half + half).powi(3);
    let mut s = MonteCarloSampler::new(seed);
    s.mean(samples, cube * dx, |s| {
        let c: [F; 3] = [s.uniform(-half, half), s.uniform(-half, half), s.uniform(-half, half)];
        let r = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        phi.eval(r / norm)
    })
}

/// `∫_{t⁺} ∏ σ_j(e)² φ(e) de` by adaptive quadrature.
pub fn weyl_rhs<F: FloatScalar>(phi: &TestFunction<F>, tol: F) -> Result<QuadratureResult<F>> {
    let roots = su2_cartan::<F>().roots();
    let hi = phi.support() * F::lit(2.0);
    let density = |x: F| adjoint_orbit_density(&[x], &roots).map(|d| d.value).unwrap_or(F::zero());
    match *phi {
        // the integrand jumps at epsilon
        TestFunction::WallIndicator { epsilon } => integrate_1d(density, F::zero(), epsilon, tol),
        _ => integrate_1d(|x| density(x) * phi.eval(x), F::zero(), hi, tol),
    }
}

/// Compare both sides of the Weyl integration formula for `SU(2)`.
///
/// Fails with non-convergence when the Monte Carlo side has relative
/// standard error above `tol / 3`.
pub fn weyl_integration_check<F: FloatScalar>(
    phi: &TestFunction<F>,
    samples: usize,
    seed: u64,
    tol: F,
) -> Result<WeylReport<F>> {
    let lhs = weyl_lhs(phi, samples, seed)?;
    let rhs = weyl_rhs(phi, F::lit(1e-10).max(tol * F::lit(1e-4) * lhs.value.abs()))?;
    if lhs.error_estimate > tol / F::lit(3.0) * lhs.value.abs() {
        return Err(Error::NonConvergence {
            value: lhs.value.as_f64(),
            error_estimate: lhs.error_estimate.as_f64(),
            evaluations: lhs.evaluations,
        });
    }
    let relative_error = (lhs.value - rhs.value).abs() / rhs.value.abs();
    Ok(WeylReport { passed: relative_error < tol, lhs, rhs, relative_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn basis_round_trip() {
        let c = [0.3, -1.2, 2.5];
        assert_eq!(su2_coords(&su2_matrix(c)), c);
    }

    #[test]
    fn exp_period_closes_the_circle() {
        let h = su2_matrix([0.0, 0.0, 1.0f64]);
        let t = exp_period(&h);
        assert!((t - 2.0 * PI).abs() < 1e-15);
        let scaled = |s: f64| su2_matrix([0.0, 0.0, s]);
        let one = su2_exp(&scaled(t));
        assert!((one[0][0].re - 1.0).abs() < 1e-12 && one[0][1].norm() < 1e-12);
        // -I at half period, so the period is minimal
        let half = su2_exp(&scaled(t / 2.0));
        assert!((half[0][0].re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn cartan_relations() {
        let c = su2_cartan::<f64>();
        assert!((c.sigma - 4.0 * PI).abs() < 1e-12);
        let eg = su2_coords(&bracket(&su2_matrix(c.e), &su2_matrix(c.g)));
        for k in 0..3 {
            assert!((eg[k] + c.sigma * c.f[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn wall_and_chamber() {
        let roots = su2_cartan::<f64>().roots();
        let d = adjoint_orbit_density(&[0.0], &roots).unwrap();
        assert!(d.on_wall && d.value == 0.0);
        assert!(matches!(adjoint_orbit_density(&[-0.1], &roots), Err(Error::OutsideChamber)));
        let v = adjoint_orbit_density(&[0.5], &roots).unwrap().value;
        assert!((v - 16.0 * PI * PI * 0.25).abs() < 1e-9);
    }

    #[test]
    fn homogeneity_in_rank_two() {
        // positive roots of type A2
        let roots = RootData::<f64> { forms: vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]] };
        let e = [0.3, 0.7];
        let d1 = adjoint_orbit_density(&e, &roots).unwrap().value;
        let d2 = adjoint_orbit_density(&[0.6, 1.4], &roots).unwrap().value;
        assert!((d2 - 64.0 * d1).abs() < 1e-12 * d2);
    }

    #[test]
    fn wall_neighbourhood_shrinks() {
        for eps in [1e-1f64, 1e-2, 1e-3] {
            let phi = TestFunction::WallIndicator { epsilon: eps };
            let rhs = weyl_rhs(&phi, 1e-12).unwrap().value;
            // 16π² ε³ / 3
            assert!((rhs - 16.0 * PI * PI * eps.powi(3) / 3.0).abs() < 1e-9);
            let lhs = weyl_lhs(&phi, 20_000, 5).unwrap();
            assert!((lhs.value - rhs).abs() <= 4.0 * lhs.error_estimate + 1e-12);
        }
    }

    #[test]
    fn gaussian_check_small_sample() {
        let r = weyl_integration_check(&default_gaussian::<f64>(), 200_000, 94720, 0.05).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn linear_in_phi() {
        let phi = default_gaussian::<f64>();
        let tripled = TestFunction::Gaussian { width: 1.0, scale: 3.0 };
        let (a, b) = (weyl_lhs(&phi, 10_000, 9).unwrap(), weyl_lhs(&tripled, 10_000, 9).unwrap());
        assert!((b.value - 3.0 * a.value).abs() < 1e-12 * b.value);
        let (a, b) = (weyl_rhs(&phi, 1e-10).unwrap(), weyl_rhs(&tripled, 1e-10).unwrap());
        assert!((b.value - 3.0 * a.value).abs() < 1e-8);
    }

    #[test]
    fn too_few_samples_is_non_convergence() {
        let e = weyl_integration_check(&default_gaussian::<f64>(), 100, 1, 0.02).unwrap_err();
        assert!(matches!(e, Error::NonConvergence { .. }));
    }
}
