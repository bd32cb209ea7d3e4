use super::group::GroupElement;
use super::model::{ActionModel, Chart};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d, integrate_box, MonteCarloSampler, QuadratureResult, Region};
use crate::scalar::FloatScalar;

/// Outcome of sampling the modular condition `h^* b = μ(h) b`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport<F> {
    pub samples: usize,
    pub max_violation: F,
    /// Group element and point of the largest violation.
    pub witness: Option<(GroupElement<F>, Vec<F>)>,
    pub passed: bool,
}

/// The two sides of the quotient-dependence identity over an orbit region.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison<F> {
    pub def1: QuadratureResult<F>,
    pub pushforward: QuadratureResult<F>,
    pub difference: F,
    pub passed: bool,
}

/// Tolerance for the inner fiber integrals when they sit inside an outer
/// quadrature.
fn inner_tol<F: FloatScalar>(tol: F) -> F {
    tol * F::lit(1e-3)
}

impl<F: FloatScalar> ActionModel<F> {
    /// `∫_H a(h·y) dHaar`.
    pub fn fiber_integral(&self, y: &[F], tol: F) -> Result<QuadratureResult<F>> {
        if let (Some(c), crate::smooth::DensityMode::UnsignedDensity) = (self.a.constant(), self.density_mode) {
            return Ok(QuadratureResult::new(c * self.group.group_volume(), F::zero(), 1));
        }
        self.group.haar_integral(|h| self.a_density(&self.act(h, y)), tol)
    }

    fn integrand_over_fibers(&self, y: &[F], tol: F) -> Result<F> {
        let fiber = self.fiber_integral(y, inner_tol(tol))?.value;
        if fiber.abs() <= F::epsilon() {
            return Err(Error::VanishingFiberIntegral(y.iter().map(|c| c.as_f64()).collect()));
        }
        Ok(self.b_density(y) / fiber)
    }

    /// `∫_{y ∈ X} (∫_H a(h·y) dh)⁻¹ b(y)` over the whole chart.
    pub fn volume_def1(&self, tol: F) -> Result<QuadratureResult<F>> {
        match &self.chart {
            Chart::Points(n) => {
                let mut total = F::zero();
                let mut evaluations = 0;
                for x in 0..*n {
                    let y = [F::from_usize(x).unwrap()];
                    total = total + self.integrand_over_fibers(&y, tol)?;
                    evaluations += 1;
                }
                Ok(QuadratureResult::new(total, F::zero(), evaluations))
            }
            Chart::Bounded(region) => self.volume_def1_on(*region, tol),
            Chart::Plane | Chart::Space => {
                Err(Error::Precondition(format!("{}: chart is not compact", self.name)))
            }
        }
    }

    /// The same integral restricted to `region`.
    pub fn volume_def1_on(&self, region: Region<F>, tol: F) -> Result<QuadratureResult<F>> {
        let mut failure = None;
        let r = integrate_box(
            |y| match self.integrand_over_fibers(y, tol) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    F::zero()
                }
            },
            region,
            tol,
        );
        match failure {
            Some(e) => Err(e),
            None => r,
        }
    }

    /// `vol_b(X) / vol_a(H)` for constant `a`.
    pub fn homogeneous_volume(&self, tol: F) -> Result<QuadratureResult<F>> {
        let a = self
            .a
            .constant()
            .ok_or_else(|| Error::Precondition("homogeneous volume needs a constant a".into()))?
            .abs();
        let vol_h = a * self.group.group_volume();
        let mass = match &self.chart {
            Chart::Points(n) => {
                let total = (0..*n).fold(F::zero(), |acc, x| {
                    acc + self.b_density(&[F::from_usize(x).unwrap()])
                });
                QuadratureResult::new(total, F::zero(), *n)
            }
            Chart::Bounded(region) => integrate_box(|x| self.b_density(x), *region, tol * vol_h)?,
            Chart::Plane => self.plane_mass(tol * vol_h)?,
            Chart::Space => match self.b.constant() {
                Some(c) if c != F::zero() => return Err(Error::Divergent { last: f64::INFINITY }),
                Some(_) => QuadratureResult::new(F::zero(), F::zero(), 1),
                None => {
                    return Err(Error::Precondition(
                        "mass of a nonconstant density on R³ is not supported".into(),
                    ))
                }
            },
        };
        Ok(QuadratureResult::new(
            mass.value / vol_h,
            mass.error_estimate / vol_h,
            mass.evaluations,
        ))
    }

    /// `∫_{R²} b` by doubling disks until the increments die out.
    fn plane_mass(&self, tol: F) -> Result<QuadratureResult<F>> {
        let center = [F::zero(); 2];
        let mut radius = F::one();
        let mut total = integrate_box(|x| self.b_density(x), Region::Disk { center, radius }, tol)?;
        let mut last_increment = F::infinity();
        for _ in 0..40 {
            let shell = Region::Annulus { center, inner: radius, outer: radius + radius };
            let inc = integrate_box(|x| self.b_density(x), shell, tol)?;
            total = QuadratureResult::new(
                total.value + inc.value,
                total.error_estimate + inc.error_estimate,
                total.evaluations + inc.evaluations,
            );
            radius = radius + radius;
            if inc.value.abs() <= tol {
                return Ok(total);
            }
            if inc.value.abs() >= last_increment {
                return Err(Error::Divergent { last: total.value.as_f64() });
            }
            last_increment = inc.value.abs();
        }
        Err(Error::Divergent { last: total.value.as_f64() })
    }

    /// Sample `|b(h·x) · det D(h_X)(x) - μ(h) b(x)|` at random `(h, x)`.
    pub fn check_invariance(&self, samples: usize, tol: F, seed: u64) -> InvarianceReport<F> {
        let mut s = MonteCarloSampler::new(seed);
        let mut worst = F::zero();
        let mut witness = None;
        for _ in 0..samples {
            let h = self.group.sample(&mut s);
            let x = self.sample_point(&mut s);
            let lhs = self.b_density(&self.act(&h, &x)) * self.jacobian(&h, &x);
            let rhs = self.group.modular_function(&h) * self.b_density(&x);
            let v = (lhs - rhs).abs();
            if v > worst {
                worst = v;
                witness = Some((h, x));
            }
        }
        InvarianceReport {
            samples,
            max_violation: worst,
            passed: worst <= tol,
            witness: if worst > tol { witness } else { None },
        }
    }

    fn sample_point(&self, s: &mut MonteCarloSampler) -> Vec<F> {
        let five = F::lit(5.0);
        match &self.chart {
            Chart::Points(n) => {
                let u: F = s.uniform(F::zero(), F::from_usize(*n).unwrap());
                vec![F::from_usize(u.to_usize().unwrap_or(0).min(n - 1)).unwrap()]
            }
            Chart::Plane => vec![s.uniform(-five, five), s.uniform(-five, five)],
            Chart::Space => (0..3).map(|_| s.uniform(-five, five)).collect(),
            Chart::Bounded(region) => {
                let (lo, hi) = bounding_box(region);
                loop {
                    let x: Vec<F> = lo.iter().zip(&hi).map(|(a, b)| s.uniform(*a, *b)).collect();
                    if region.contains(&x) {
                        return x;
                    }
                }
            }
        }
    }

    /// `|det D(h_X)(x)|` by central differences (1 on finite charts).
    fn jacobian(&self, h: &GroupElement<F>, x: &[F]) -> F {
        let d = x.len();
        if matches!(self.chart, Chart::Points(_)) || d == 0 {
            return F::one();
        }
        let mut m = vec![vec![F::zero(); d]; d];
        for j in 0..d {
            let step = F::lit(1e-6) * x[j].abs().max(F::one());
            let (mut xp, mut xm) = (x.to_vec(), x.to_vec());
            xp[j] = xp[j] + step;
            xm[j] = xm[j] - step;
            let (yp, ym) = (self.act(h, &xp), self.act(h, &xm));
            for i in 0..d {
                let mut diff = yp[i] - ym[i];
                // translations wrap around the torus
                if let super::model::ActionKind::Translation(_) = self.action {
                    let tau = F::TAU();
                    if diff > F::PI() {
                        diff = diff - tau;
                    } else if diff < -F::PI() {
                        diff = diff + tau;
                    }
                }
                m[i][j] = diff / (step + step);
            }
        }
        determinant(m).abs()
    }

    fn orbit_chart(&self) -> Result<&super::model::OrbitChart<F>> {
        self.orbit_chart
            .as_ref()
            .ok_or_else(|| Error::Precondition(format!("{} has no orbit chart", self.name)))
    }

    /// `α(t) / vol_β(G_t)` on the strongly regular part.
    pub fn pushforward_density(&self, t: F) -> Result<F> {
        let oc = self.orbit_chart()?;
        let (lo, hi) = oc.domain;
        if !(lo <= t && t <= hi) {
            return Err(Error::OutOfDomain { value: t.as_f64(), lo: lo.as_f64(), hi: hi.as_f64() });
        }
        if oc.singular.iter().any(|s| *s == t) {
            return Err(Error::SingularOrbit(t.as_f64()));
        }
        Ok((oc.alpha)(t) / (oc.isotropy_volume)(t))
    }

    /// Compare the fiber-integral volume of the saturation of `[t0, t1]`
    /// with the integral of the pushforward density over `[t0, t1]`.
    /// Singular orbits on the boundary are a null set and are skipped.
    pub fn def1_vs_pushforward(&self, t0: F, t1: F, tol: F) -> Result<Comparison<F>> {
        let oc = self.orbit_chart()?;
        if !(oc.domain.0 <= t0 && t0 < t1 && t1 <= oc.domain.1) {
            return Err(Error::Precondition("region must be a subinterval of the orbit domain".into()));
        }
        if oc.singular.iter().any(|s| t0 < *s && *s < t1) {
            return Err(Error::SingularOrbit(
                oc.singular.iter().find(|s| t0 < **s && **s < t1).unwrap().as_f64(),
            ));
        }
        let region = (oc.saturation)(t0, t1)
            .ok_or_else(|| Error::Precondition(format!("{}: saturation is not a bounded chart region", self.name)))?;
        let half = tol / F::lit(2.0);
        let def1 = self.volume_def1_on(region, half)?;
        let pushforward = integrate_1d(|t| (oc.alpha)(t) / (oc.isotropy_volume)(t), t0, t1, half)?;
        let difference = (def1.value - pushforward.value).abs();
        Ok(Comparison {
            passed: difference <= tol,
            def1,
            pushforward,
            difference,
        })
    }
}

fn bounding_box<F: FloatScalar>(region: &Region<F>) -> (Vec<F>, Vec<F>) {
    match *region {
        Region::Interval { lo, hi } => (vec![lo], vec![hi]),
        Region::Rect { lo, hi } => (lo.to_vec(), hi.to_vec()),
        Region::Disk { center, radius: r } | Region::Annulus { center, outer: r, .. } => (
            vec![center[0] - r, center[1] - r],
            vec![center[0] + r, center[1] + r],
        ),
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant<F: FloatScalar>(mut m: Vec<Vec<F>>) -> F {
    let n = m.len();
    let mut det = F::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[pivot][col] == F::zero() {
            return F::zero();
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det = det * m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..n {
                let v = m[col][k];
                m[row][k] = m[row][k] - factor * v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::{Density, GroupModel};
    use std::f64::consts::PI;
    use std::sync::Arc;

    #[test]
    fn constant_a_fiber_is_group_volume() {
        let m = ActionModel::<f64>::plane_so2(2.0).unwrap();
        let r = m.fiber_integral(&[0.3, 0.4], 1e-9).unwrap();
        assert!((r.value - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn fiber_of_radial_a() {
        let mut m = ActionModel::<f64>::plane_so2(2.0).unwrap();
        m.a = Density::function(|x| 1.0 + x[0] * x[0] + x[1] * x[1]);
        let r = m.fiber_integral(&[0.6, 0.8], 1e-10).unwrap();
        assert!((r.value - 2.0 * PI * 2.0).abs() < 1e-9);
    }

    #[test]
    fn plane_volumes() {
        let so2 = ActionModel::<f64>::plane_so2(2.0).unwrap().volume_def1(1e-6).unwrap();
        assert!((so2.value - 2.0).abs() < 1e-6);
        let o2 = ActionModel::<f64>::plane_o2(2.0).unwrap().volume_def1(1e-6).unwrap();
        assert!((o2.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn free_torus_volume() {
        let m = ActionModel::<f64>::torus_free();
        let v = m.volume_def1(1e-8).unwrap();
        assert!((v.value - 2.0 * PI).abs() < 1e-8);
        let h = m.homogeneous_volume(1e-8).unwrap();
        assert!((h.value - 2.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn homogeneous_finite_point() {
        use crate::group::FiniteGroup;
        let m = ActionModel::<f64>::finite_action(FiniteGroup::cyclic(4), 1, |_, x| x, vec![1.0], vec![3.0]).unwrap();
        assert!((m.homogeneous_volume(1e-9).unwrap().value - 0.75).abs() < 1e-15);
    }

    #[test]
    fn plane_mass_divergence() {
        let mut m = ActionModel::<f64>::plane_so2(1.0).unwrap();
        m.chart = Chart::Plane;
        assert!(matches!(m.homogeneous_volume(1e-6), Err(Error::Divergent { .. })));
        m.b = Density::function(|x: &[f64]| (-(x[0] * x[0] + x[1] * x[1])).exp());
        let v = m.homogeneous_volume(1e-6).unwrap();
        assert!((v.value - 0.5).abs() < 1e-6);
    }

    #[test]
    fn invariance_checks() {
        let m = ActionModel::<f64>::plane_so2(2.0).unwrap();
        assert!(m.check_invariance(200, 1e-6, 1).passed);
        let mut bad = m.clone();
        bad.b = Density::function(|x: &[f64]| x[0].abs());
        let report = bad.check_invariance(200, 1e-6, 1);
        assert!(!report.passed);
        assert!(report.witness.is_some());
        let mut trivial = bad.clone();
        trivial.action = crate::smooth::ActionKind::Trivial;
        trivial.group = GroupModel::finite(crate::group::FiniteGroup::trivial());
        assert!(trivial.check_invariance(200, 1e-9, 1).passed);
    }

    #[test]
    fn pushforward_densities() {
        let so2 = ActionModel::<f64>::plane_so2(2.0).unwrap();
        let o2 = ActionModel::<f64>::plane_o2(2.0).unwrap();
        for r in [0.5, 1.0, 1.5, 2.0] {
            assert!((so2.pushforward_density(r).unwrap() - r).abs() < 1e-12);
            assert!((o2.pushforward_density(r).unwrap() - r / 2.0).abs() < 1e-12);
        }
        assert!(matches!(so2.pushforward_density(0.0), Err(Error::SingularOrbit(_))));
    }

    #[test]
    fn compensating_rescale_of_alpha_and_beta() {
        let m = ActionModel::<f64>::plane_o2(2.0).unwrap();
        let mut n = m.clone();
        n.orbit_chart = Some(m.orbit_chart.clone().unwrap().rescaled(Arc::new(|t| 1.0 + t * t)));
        for r in [0.25, 1.0, 1.75] {
            assert_eq!(m.pushforward_density(r).unwrap(), n.pushforward_density(r).unwrap());
        }
    }

    #[test]
    fn def1_matches_pushforward() {
        for (m, t0, expect) in [
            (ActionModel::<f64>::plane_so2(2.0).unwrap(), 0.0, 2.0),
            (ActionModel::plane_o2(2.0).unwrap(), 0.0, 1.0),
            (ActionModel::plane_so2(2.0).unwrap(), 1.0, 1.5),
        ] {
            let c = m.def1_vs_pushforward(t0, 2.0, 1e-6).unwrap();
            assert!(c.passed, "{c:?}");
            assert!((c.def1.value - expect).abs() < 1e-6);
            assert!((c.pushforward.value - expect).abs() < 1e-6);
        }
    }

    #[test]
    fn rescaling_a_and_b_together() {
        let m = ActionModel::<f64>::plane_so2(2.0).unwrap();
        let n = m.rescaled(Arc::new(|x: &[f64]| 1.0 + x[0] * x[0] + x[1] * x[1]));
        let v = n.volume_def1(1e-6).unwrap();
        assert!((v.value - 2.0).abs() < 1e-6, "{}", v.value);
    }

    #[test]
    fn determinant_of_rotation() {
        let (s, c) = 0.3f64.sin_cos();
        assert!((determinant(vec![vec![c, -s], vec![s, c]]) - 1.0).abs() < 1e-15);
    }
}
