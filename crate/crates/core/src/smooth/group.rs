use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::quadrature::{integrate_1d, integrate_box, MonteCarloSampler, QuadratureResult, Region};
use crate::scalar::FloatScalar;

/// Samples used when a Haar integral has to fall back on Monte Carlo.
pub const HAAR_MC_SAMPLES: usize = 200_000;
/// Seed for those fallback integrals.
pub const HAAR_MC_SEED: u64 = 0x5eed_0001;

#[derive(Clone, Debug, PartialEq)]
pub enum GroupKind {
    Finite(FiniteGroup),
    Circle,
    Torus(usize),
    Su2,
    O2,
}

/// A group element in the coordinates the catalog uses.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupElement<F> {
    Finite(usize),
    Angle(F),
    Angles(Vec<F>),
    /// Rotation by `angle`, preceded by the reflection `y ↦ -y` when set.
    O2 { angle: F, reflected: bool },
    /// Unit quaternion `(w, x, y, z)`.
    Su2([F; 4]),
}

/// A compact group with a Haar measure fixed by `haar_scale`: the value of
/// the top form on the chosen Lie algebra basis (angle `dθ` per circle
/// factor; the basis `iσ_1, iσ_2, iσ_3` for `SU(2)`), or the weight of each
/// element of a finite group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupModel<F> {
    pub kind: GroupKind,
    pub haar_scale: F,
}

impl<F: FloatScalar> GroupModel<F> {
    pub fn new(kind: GroupKind, haar_scale: F) -> Result<Self> {
        if !(haar_scale > F::zero()) {
            return Err(Error::Precondition("Haar scale must be positive".into()));
        }
        if matches!(kind, GroupKind::Torus(0)) {
            return Err(Error::Precondition("torus dimension must be positive".into()));
        }
        Ok(Self { kind, haar_scale })
    }

    pub fn circle() -> Self {
        Self::new(GroupKind::Circle, F::one()).unwrap()
    }

    pub fn o2() -> Self {
        Self::new(GroupKind::O2, F::one()).unwrap()
    }

    pub fn su2() -> Self {
        Self::new(GroupKind::Su2, F::one()).unwrap()
    }

    pub fn finite(group: FiniteGroup) -> Self {
        Self::new(GroupKind::Finite(group), F::one()).unwrap()
    }

    /// Total Haar volume.
    pub fn group_volume(&self) -> F {
        let tau = F::TAU();
        let unscaled = match &self.kind {
            GroupKind::Finite(g) => F::from_usize(g.order()).unwrap(),
            GroupKind::Circle => tau,
            GroupKind::Torus(n) => tau.powi(*n as i32),
            GroupKind::O2 => tau + tau,
            // unit 3-sphere
            GroupKind::Su2 => F::lit(2.0) * F::PI() * F::PI(),
        };
        unscaled * self.haar_scale
    }

    /// Modular function; every catalog group is compact, hence unimodular.
    pub fn modular_function(&self, _h: &GroupElement<F>) -> F {
        F::one()
    }

    pub fn identity(&self) -> GroupElement<F> {
        match &self.kind {
            GroupKind::Finite(g) => GroupElement::Finite(g.identity()),
            GroupKind::Circle => GroupElement::Angle(F::zero()),
            GroupKind::Torus(n) => GroupElement::Angles(vec![F::zero(); *n]),
            GroupKind::O2 => GroupElement::O2 { angle: F::zero(), reflected: false },
            GroupKind::Su2 => GroupElement::Su2([F::one(), F::zero(), F::zero(), F::zero()]),
        }
    }

    /// Draw from the normalized Haar measure.
    pub fn sample(&self, s: &mut MonteCarloSampler) -> GroupElement<F> {
        let tau = F::TAU();
        match &self.kind {
            GroupKind::Finite(g) => {
                let u: F = s.uniform(F::zero(), F::from_usize(g.order()).unwrap());
                GroupElement::Finite(u.to_usize().unwrap_or(0).min(g.order() - 1))
            }
            GroupKind::Circle => GroupElement::Angle(s.uniform(F::zero(), tau)),
            GroupKind::Torus(n) => GroupElement::Angles((0..*n).map(|_| s.uniform(F::zero(), tau)).collect()),
            GroupKind::O2 => {
                let angle = s.uniform(F::zero(), tau);
                let reflected = s.uniform(F::zero(), F::one()) < F::lit(0.5);
                GroupElement::O2 { angle, reflected }
            }
            GroupKind::Su2 => {
                let mut q = [F::zero(); 4];
                let mut norm = F::zero();
                while norm <= F::epsilon() {
                    for c in q.iter_mut() {
                        *c = s.standard_normal();
                    }
                    norm = q.iter().fold(F::zero(), |acc, c| acc + *c * *c).sqrt();
                }
                GroupElement::Su2(q.map(|c| c / norm))
            }
        }
    }

    /// `∫_H f(h) dHaar` in the scaled Haar measure. Finite groups and
    /// circles are integrated deterministically; `SU(2)` and tori of
    /// dimension three or more use seeded Monte Carlo.
    pub fn haar_integral(
        &self,
        mut f: impl FnMut(&GroupElement<F>) -> F,
        tol: F,
    ) -> Result<QuadratureResult<F>> {
        let scale = self.haar_scale;
        let tau = F::TAU();
        let scaled = |r: QuadratureResult<F>| {
            QuadratureResult::new(r.value * scale, r.error_estimate * scale, r.evaluations)
        };
        match &self.kind {
            GroupKind::Finite(g) => {
                let sum = g.elements().fold(F::zero(), |acc, h| acc + f(&GroupElement::Finite(h)));
                Ok(QuadratureResult::new(sum * scale, F::zero(), g.order()))
            }
            GroupKind::Circle | GroupKind::Torus(1) => {
                let wrap = matches!(self.kind, GroupKind::Torus(_));
                let r = integrate_1d(
                    |t| f(&if wrap { GroupElement::Angles(vec![t]) } else { GroupElement::Angle(t) }),
                    F::zero(),
                    tau,
                    tol / scale,
                )?;
                Ok(scaled(r))
            }
            GroupKind::Torus(2) => {
                let r = integrate_box(
                    |t| f(&GroupElement::Angles(t.to_vec())),
                    Region::Rect { lo: [F::zero(); 2], hi: [tau; 2] },
                    tol / scale,
                )?;
                Ok(scaled(r))
            }
            GroupKind::O2 => {
                let mut total = QuadratureResult::new(F::zero(), F::zero(), 0);
                for reflected in [false, true] {
                    let r = integrate_1d(
                        |angle| f(&GroupElement::O2 { angle, reflected }),
                        F::zero(),
                        tau,
                        tol / (scale + scale),
                    )?;
                    total = QuadratureResult::new(
                        total.value + r.value,
                        total.error_estimate + r.error_estimate,
                        total.evaluations + r.evaluations,
                    );
                }
                Ok(scaled(total))
            }
            GroupKind::Torus(_) | GroupKind::Su2 => {
                let volume = self.group_volume();
                let mut sampler = MonteCarloSampler::new(HAAR_MC_SEED);
                sampler.mean(HAAR_MC_SAMPLES, volume, |s| {
                    let h = self.sample(s);
                    f(&h)
                })
            }
        }
    }
}

/// Rotate `v` by the unit quaternion `q` (`q v q̄`).
pub fn quaternion_rotate<F: FloatScalar>(q: &[F; 4], v: &[F]) -> [F; 3] {
    let [w, x, y, z] = *q;
    let two = F::lit(2.0);
    // t = 2 (q_vec × v)
    let t = [
        two * (y * v[2] - z * v[1]),
        two * (z * v[0] - x * v[2]),
        two * (x * v[1] - y * v[0]),
    ];
    [
        v[0] + w * t[0] + (y * t[2] - z * t[1]),
        v[1] + w * t[1] + (z * t[0] - x * t[2]),
        v[2] + w * t[2] + (x * t[1] - y * t[0]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn volumes() {
        assert!((GroupModel::<f64>::circle().group_volume() - 2.0 * PI).abs() < 1e-15);
        assert!((GroupModel::<f64>::o2().group_volume() - 4.0 * PI).abs() < 1e-15);
        assert_eq!(GroupModel::<f64>::finite(FiniteGroup::cyclic(5)).group_volume(), 5.0);
        let t3 = GroupModel::<f64>::new(GroupKind::Torus(3), 0.5).unwrap();
        assert!((t3.group_volume() - 0.5 * (2.0 * PI).powi(3)).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_scale() {
        assert!(GroupModel::<f64>::new(GroupKind::Circle, 0.0).is_err());
        assert!(GroupModel::<f64>::new(GroupKind::Circle, -1.0).is_err());
    }

    #[test]
    fn haar_integral_of_one_is_group_volume() {
        for g in [
            GroupModel::<f64>::circle(),
            GroupModel::o2(),
            GroupModel::new(GroupKind::Torus(2), 2.0).unwrap(),
            GroupModel::finite(FiniteGroup::symmetric(3)),
        ] {
            let r = g.haar_integral(|_| 1.0, 1e-9).unwrap();
            assert!((r.value - g.group_volume()).abs() < 1e-9, "{:?}", g.kind);
        }
        let su2 = GroupModel::<f64>::su2();
        let r = su2.haar_integral(|_| 1.0, 1e-9).unwrap();
        assert!((r.value - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn su2_haar_moments() {
        // E[w^2] = 1/4 for the uniform measure on the 3-sphere
        let su2 = GroupModel::<f64>::su2();
        let r = su2
            .haar_integral(|h| match h {
                GroupElement::Su2(q) => q[0] * q[0],
                _ => unreachable!(),
            }, 1e-6)
            .unwrap();
        let mean = r.value / su2.group_volume();
        assert!((mean - 0.25).abs() < 4.0 * r.error_estimate / su2.group_volume() + 1e-3);
    }

    #[test]
    fn quaternion_rotation_preserves_length() {
        let s = (0.5f64).sqrt();
        let q = [s, 0.0, 0.0, s]; // quarter turn about z
        let v = quaternion_rotate(&q, &[1.0, 0.0, 0.0]);
        assert!((v[0]).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15 && v[2].abs() < 1e-15);
    }
}
