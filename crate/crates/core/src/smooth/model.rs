use std::fmt;
use std::sync::Arc;

use super::group::{quaternion_rotate, GroupElement, GroupKind, GroupModel};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::quadrature::Region;
use crate::scalar::FloatScalar;

pub type PointFn<F> = Arc<dyn Fn(&[F]) -> F + Send + Sync>;
pub type ParamFn<F> = Arc<dyn Fn(F) -> F + Send + Sync>;

/// A density on the chart, evaluated pointwise.
#[derive(Clone)]
pub enum Density<F> {
    Constant(F),
    Function(PointFn<F>),
    /// Values at the points of a finite chart, indexed by the point.
    Table(Vec<F>),
}

impl<F: FloatScalar> Density<F> {
    pub fn function(f: impl Fn(&[F]) -> F + Send + Sync + 'static) -> Self {
        Density::Function(Arc::new(f))
    }

    pub fn eval(&self, x: &[F]) -> F {
        match self {
            Density::Constant(c) => *c,
            Density::Function(f) => f(x),
            Density::Table(t) => t[point_index(x)],
        }
    }

    pub fn constant(&self) -> Option<F> {
        match self {
            Density::Constant(c) => Some(*c),
            Density::Table(t) if t.windows(2).all(|w| w[0] == w[1]) && !t.is_empty() => Some(t[0]),
            _ => None,
        }
    }

    /// Pointwise product with `theta`.
    pub fn scaled(&self, theta: PointFn<F>) -> Self {
        let inner = self.clone();
        Density::Function(Arc::new(move |x| inner.eval(x) * theta(x)))
    }
}

impl<F: fmt::Debug> fmt::Debug for Density<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Constant(c) => write!(f, "Constant({c:?})"),
            Density::Function(_) => write!(f, "Function(..)"),
            Density::Table(t) => write!(f, "Table({t:?})"),
        }
    }
}

pub(crate) fn point_index<F: FloatScalar>(x: &[F]) -> usize {
    x[0].to_usize().unwrap_or(0)
}

/// Coordinate domain of a model.
#[derive(Clone, Debug, PartialEq)]
pub enum Chart<F> {
    Bounded(Region<F>),
    /// All of `R²`.
    Plane,
    /// All of `R³`.
    Space,
    /// `n` isolated points; the single coordinate is the point index.
    Points(usize),
}

impl<F: FloatScalar> Chart<F> {
    pub fn dimension(&self) -> usize {
        match self {
            Chart::Bounded(r) => r.dimension(),
            Chart::Plane => 2,
            Chart::Space => 3,
            Chart::Points(_) => 0,
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, Chart::Bounded(_) | Chart::Points(_))
    }
}

/// How the group moves points of the chart.
#[derive(Clone, Debug, PartialEq)]
pub enum ActionKind {
    /// Rotation (and reflection, for `O(2)`) of the plane about the origin.
    Rotation,
    /// A circle or torus translating the given angle coordinates.
    Translation(Vec<usize>),
    /// Conjugation on `su(2)` in the coordinates of the basis `iσ_k`.
    Adjoint,
    /// A finite group permuting points: `table[h][x] = h·x`.
    Permutation(Vec<Vec<usize>>),
    Trivial,
}

pub type Saturation<F> = Arc<dyn Fn(F, F) -> Option<Region<F>> + Send + Sync>;

/// Orbit-space data of the regular decomposition.
#[derive(Clone)]
pub struct OrbitChart<F> {
    pub domain: (F, F),
    pub projection: PointFn<F>,
    pub alpha: ParamFn<F>,
    pub isotropy_volume: ParamFn<F>,
    /// Orbit parameters outside the strongly regular part.
    pub singular: Vec<F>,
    /// Region of the chart swept by the orbits with parameter in `[t0, t1]`.
    pub saturation: Saturation<F>,
}

impl<F: FloatScalar> OrbitChart<F> {
    /// Multiply α and the isotropy volume by the same positive function.
    pub fn rescaled(&self, theta: ParamFn<F>) -> Self {
        let (alpha, beta, t2) = (self.alpha.clone(), self.isotropy_volume.clone(), theta.clone());
        Self {
            alpha: Arc::new(move |t| alpha(t) * theta(t)),
            isotropy_volume: Arc::new(move |t| beta(t) * t2(t)),
            ..self.clone()
        }
    }
}

impl<F: fmt::Debug> fmt::Debug for OrbitChart<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrbitChart")
            .field("domain", &self.domain)
            .field("singular", &self.singular)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMode {
    SignedForm,
    UnsignedDensity,
}

/// A transformation groupoid `H × X ⇉ X` with densities `a` (along the
/// units) and `b` (on `X`).
#[derive(Clone, Debug)]
pub struct ActionModel<F> {
    pub name: String,
    pub group: GroupModel<F>,
    pub action: ActionKind,
    pub chart: Chart<F>,
    pub a: Density<F>,
    pub b: Density<F>,
    pub orbit_chart: Option<OrbitChart<F>>,
    pub density_mode: DensityMode,
}

impl<F: FloatScalar> ActionModel<F> {
    /// `h·x`.
    pub fn act(&self, h: &GroupElement<F>, x: &[F]) -> Vec<F> {
        match (&self.action, h) {
            (ActionKind::Trivial, _) => x.to_vec(),
            (ActionKind::Rotation, GroupElement::Angle(t)) => rotate(*t, x[0], x[1]),
            (ActionKind::Rotation, GroupElement::O2 { angle, reflected }) => {
                let y = if *reflected { -x[1] } else { x[1] };
                rotate(*angle, x[0], y)
            }
            (ActionKind::Translation(axes), GroupElement::Angle(t)) => translate(x, axes, &[*t]),
            (ActionKind::Translation(axes), GroupElement::Angles(ts)) => translate(x, axes, ts),
            (ActionKind::Adjoint, GroupElement::Su2(q)) => quaternion_rotate(q, x).to_vec(),
            (ActionKind::Permutation(table), GroupElement::Finite(h)) => {
                vec![F::from_usize(table[*h][point_index(x)]).unwrap()]
            }
            (kind, h) => panic!("action {kind:?} cannot apply {h:?}"),
        }
    }

    /// `b` as an unsigned density.
    pub fn b_density(&self, x: &[F]) -> F {
        match self.density_mode {
            DensityMode::SignedForm => self.b.eval(x).abs(),
            DensityMode::UnsignedDensity => self.b.eval(x),
        }
    }

    /// `a` as an unsigned density.
    pub fn a_density(&self, x: &[F]) -> F {
        match self.density_mode {
            DensityMode::SignedForm => self.a.eval(x).abs(),
            DensityMode::UnsignedDensity => self.a.eval(x),
        }
    }

    /// Switch density mode; signed forms need an orientation-preserving group.
    pub fn with_density_mode(mut self, mode: DensityMode) -> Result<Self> {
        if mode == DensityMode::SignedForm && matches!(self.group.kind, GroupKind::O2) {
            return Err(Error::Precondition(format!(
                "{}: O(2) reverses orientation, use unsigned densities",
                self.name
            )));
        }
        self.density_mode = mode;
        Ok(self)
    }

    /// Multiply both `a` and `b` by the positive function `theta`.
    pub fn rescaled(&self, theta: PointFn<F>) -> Self {
        Self {
            a: self.a.scaled(theta.clone()),
            b: self.b.scaled(theta),
            ..self.clone()
        }
    }

    pub fn with_group(mut self, group: GroupModel<F>) -> Self {
        self.group = group;
        self
    }

    /// `SO(2)` rotating the disk of radius `radius`, with `a = dθ` and `b`
    /// Lebesgue measure.
    pub fn plane_so2(radius: F) -> Result<Self> {
        Self::plane(radius, GroupModel::circle(), F::one(), "plane-so2")
    }

    /// `O(2)` on the disk of radius `radius`; each isotropy group at a
    /// nonzero point has two elements.
    pub fn plane_o2(radius: F) -> Result<Self> {
        Self::plane(radius, GroupModel::o2(), F::lit(2.0), "plane-o2")
    }

    fn plane(radius: F, group: GroupModel<F>, isotropy: F, name: &str) -> Result<Self> {
        if !(radius > F::zero()) {
            return Err(Error::Precondition("radius must be positive".into()));
        }
        let center = [F::zero(); 2];
        Ok(Self {
            name: name.into(),
            group,
            action: ActionKind::Rotation,
            chart: Chart::Bounded(Region::Disk { center, radius }),
            a: Density::Constant(F::one()),
            b: Density::Constant(F::one()),
            orbit_chart: Some(OrbitChart {
                domain: (F::zero(), radius),
                projection: Arc::new(|x: &[F]| x[0].hypot(x[1])),
                // the orbit circle has length 2πr; pushing Lebesgue measure
                // forward gives 2πr dr, and a_r contributes 1/(2π)
                alpha: Arc::new(|r| r),
                isotropy_volume: Arc::new(move |_| isotropy),
                singular: vec![F::zero()],
                saturation: Arc::new(move |t0, t1| {
                    Some(if t0 > F::zero() {
                        Region::Annulus { center, inner: t0, outer: t1 }
                    } else {
                        Region::Disk { center, radius: t1 }
                    })
                }),
            }),
            density_mode: DensityMode::UnsignedDensity,
        })
    }

    /// A circle translating the first angle of the flat torus `[0, 2π]²`.
    pub fn torus_free() -> Self {
        let tau = F::TAU();
        Self {
            name: "torus-free".into(),
            group: GroupModel::circle(),
            action: ActionKind::Translation(vec![0]),
            chart: Chart::Bounded(Region::Rect { lo: [F::zero(); 2], hi: [tau; 2] }),
            a: Density::Constant(F::one()),
            b: Density::Constant(F::one()),
            orbit_chart: Some(OrbitChart {
                domain: (F::zero(), tau),
                projection: Arc::new(|x: &[F]| x[1]),
                alpha: Arc::new(|_| F::one()),
                isotropy_volume: Arc::new(|_| F::one()),
                singular: Vec::new(),
                saturation: Arc::new(move |t0, t1| {
                    Some(Region::Rect { lo: [F::zero(), t0], hi: [tau, t1] })
                }),
            }),
            density_mode: DensityMode::UnsignedDensity,
        }
    }

    /// `SU(2)` acting on its Lie algebra by conjugation, with the Haar
    /// measure normalized to total volume 1 and `a = b = 1`.
    pub fn adjoint_su2() -> Self {
        let cartan = super::adjoint::su2_cartan::<F>();
        let e_norm = cartan.lattice_norm();
        let roots = cartan.roots();
        let unit = F::one() / GroupModel::<F>::su2().group_volume();
        Self {
            name: "adjoint-su2".into(),
            group: GroupModel::new(GroupKind::Su2, unit).unwrap(),
            action: ActionKind::Adjoint,
            chart: Chart::Space,
            a: Density::Constant(F::one()),
            b: Density::Constant(F::one()),
            orbit_chart: Some(OrbitChart {
                domain: (F::zero(), F::infinity()),
                projection: Arc::new(move |x: &[F]| {
                    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt() / e_norm
                }),
                alpha: Arc::new(move |t| {
                    super::adjoint::adjoint_orbit_density(&[t], &roots).map(|d| d.value).unwrap_or(F::zero())
                }),
                isotropy_volume: Arc::new(|_| F::one()),
                singular: vec![F::zero()],
                saturation: Arc::new(|_, _| None),
            }),
            density_mode: DensityMode::UnsignedDensity,
        }
    }

    /// A finite group acting on `points` through `act(h, x)`.
    pub fn finite_action(
        group: FiniteGroup,
        points: usize,
        act: impl Fn(usize, usize) -> usize,
        a: Vec<F>,
        b: Vec<F>,
    ) -> Result<Self> {
        if a.len() != points || b.len() != points {
            return Err(Error::Precondition("one weight per point is required".into()));
        }
        let table: Vec<Vec<usize>> = group
            .elements()
            .map(|h| (0..points).map(|x| act(h, x)).collect())
            .collect();
        for (h, row) in table.iter().enumerate() {
            if row.iter().any(|&y| y >= points) {
                return Err(Error::InvalidAction(format!("element {h} leaves the point set")));
            }
            for k in group.elements() {
                for x in 0..points {
                    if table[group.mul(h, k)][x] != row[table[k][x]] {
                        return Err(Error::InvalidAction(format!(
                            "({h}·{k})·{x} differs from {h}·({k}·{x})"
                        )));
                    }
                }
            }
        }
        if (0..points).any(|x| table[group.identity()][x] != x) {
            return Err(Error::InvalidAction("identity moves a point".into()));
        }
        Ok(Self {
            name: format!("{} on {points} points", group.name()),
            group: GroupModel::finite(group),
            action: ActionKind::Permutation(table),
            chart: Chart::Points(points),
            a: Density::Table(a),
            b: Density::Table(b),
            orbit_chart: None,
            density_mode: DensityMode::UnsignedDensity,
        })
    }
}

fn rotate<F: FloatScalar>(t: F, x: F, y: F) -> Vec<F> {
    let (s, c) = t.sin_cos();
    vec![c * x - s * y, s * x + c * y]
}

fn translate<F: FloatScalar>(x: &[F], axes: &[usize], by: &[F]) -> Vec<F> {
    let tau = F::TAU();
    let mut y = x.to_vec();
    for (axis, t) in axes.iter().zip(by) {
        let v = (y[*axis] + *t) % tau;
        y[*axis] = if v < F::zero() { v + tau } else { v };
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn o2_rejects_signed_forms() {
        let m = ActionModel::<f64>::plane_o2(2.0).unwrap();
        assert!(m.with_density_mode(DensityMode::SignedForm).is_err());
        let m = ActionModel::<f64>::plane_so2(2.0).unwrap();
        let m = m.with_density_mode(DensityMode::SignedForm).unwrap();
        assert_eq!(m.density_mode, DensityMode::SignedForm);
    }

    #[test]
    fn signed_forms_become_absolute_values() {
        let mut m = ActionModel::<f64>::plane_so2(1.0).unwrap();
        m.b = Density::Constant(-3.0);
        let m = m.with_density_mode(DensityMode::SignedForm).unwrap();
        assert_eq!(m.b_density(&[0.1, 0.1]), 3.0);
    }

    #[test]
    fn reflection_then_rotation() {
        let m = ActionModel::<f64>::plane_o2(1.0).unwrap();
        let h = GroupElement::O2 { angle: std::f64::consts::FRAC_PI_2, reflected: true };
        let y = m.act(&h, &[0.0, 1.0]);
        assert!((y[0] - 1.0).abs() < 1e-15 && y[1].abs() < 1e-15);
    }

    #[test]
    fn torus_translation_wraps() {
        let m = ActionModel::<f64>::torus_free();
        let y = m.act(&GroupElement::Angle(1.0), &[6.0, 0.5]);
        assert!((y[0] - (7.0 - std::f64::consts::TAU)).abs() < 1e-15);
        assert_eq!(y[1], 0.5);
    }

    #[test]
    fn finite_action_checks_axioms() {
        let z3 = FiniteGroup::cyclic(3);
        assert!(ActionModel::<f64>::finite_action(z3.clone(), 3, |h, x| (h + x) % 3, vec![1.0; 3], vec![1.0; 3]).is_ok());
        let bad = ActionModel::<f64>::finite_action(z3, 3, |h, x| if h == 1 { (x + 1) % 3 } else { x }, vec![1.0; 3], vec![1.0; 3]);
        assert!(matches!(bad, Err(Error::InvalidAction(_))));
    }
}
