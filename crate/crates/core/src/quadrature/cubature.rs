use super::{gauss_legendre, integrate_1d, QuadratureResult};
use crate::error::{Error, Result};
use crate::scalar::FloatScalar;

/// Gauss points per axis in each cell.
const ORDER: usize = 7;
/// Cell budget before giving up.
const MAX_CELLS: usize = 4096;

/// Integration regions of dimension at most two. Disks and annuli are
/// integrated in polar coordinates with the `r` Jacobian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region<F> {
    Interval { lo: F, hi: F },
    Rect { lo: [F; 2], hi: [F; 2] },
    Disk { center: [F; 2], radius: F },
    Annulus { center: [F; 2], inner: F, outer: F },
}

impl<F: FloatScalar> Region<F> {
    pub fn dimension(&self) -> usize {
        match self {
            Region::Interval { .. } => 1,
            _ => 2,
        }
    }

    pub fn measure(&self) -> F {
        match *self {
            Region::Interval { lo, hi } => hi - lo,
            Region::Rect { lo, hi } => (hi[0] - lo[0]) * (hi[1] - lo[1]),
            Region::Disk { radius, .. } => F::PI() * radius * radius,
            Region::Annulus { inner, outer, .. } => F::PI() * (outer * outer - inner * inner),
        }
    }

    pub fn contains(&self, x: &[F]) -> bool {
        match *self {
            Region::Interval { lo, hi } => lo <= x[0] && x[0] <= hi,
            Region::Rect { lo, hi } => (0..2).all(|i| lo[i] <= x[i] && x[i] <= hi[i]),
            Region::Disk { center, radius } => {
                (x[0] - center[0]).hypot(x[1] - center[1]) <= radius
            }
            Region::Annulus { center, inner, outer } => {
                let r = (x[0] - center[0]).hypot(x[1] - center[1]);
                inner <= r && r <= outer
            }
        }
    }
}

#[derive(Clone, Copy)]
struct Cell<F> {
    lo: [F; 2],
    hi: [F; 2],
    value: F,
    error: F,
}

struct Rule<F> {
    nodes: Vec<F>,
    weights: Vec<F>,
}

impl<F: FloatScalar> Rule<F> {
    fn new() -> Self {
        let (x, w) = gauss_legendre(ORDER);
        Self {
            nodes: x.into_iter().map(F::lit).collect(),
            weights: w.into_iter().map(F::lit).collect(),
        }
    }

    fn apply(&self, g: &mut impl FnMut(F, F) -> Result<F>, lo: [F; 2], hi: [F; 2]) -> Result<F> {
        let half = F::lit(0.5);
        let (cx, hx) = ((lo[0] + hi[0]) * half, (hi[0] - lo[0]) * half);
        let (cy, hy) = ((lo[1] + hi[1]) * half, (hi[1] - lo[1]) * half);
        let mut sum = F::zero();
        for (xi, wi) in self.nodes.iter().zip(&self.weights) {
            for (yj, wj) in self.nodes.iter().zip(&self.weights) {
                sum = sum + *wi * *wj * g(cx + hx * *xi, cy + hy * *yj)?;
            }
        }
        Ok(sum * hx * hy)
    }
}

/// Integrate `f` over a region of dimension one or two to absolute
/// tolerance `tol`.
///
/// Two-dimensional regions are covered by cells carrying a tensor
/// Gauss–Legendre rule; the cell with the largest error (the gap between the
/// cell rule and the sum over its four quarters) is split until the total
/// error estimate drops below `tol`. Cells are chosen in a fixed order, so
/// the result is bit-stable.
pub fn integrate_box<F: FloatScalar>(
    mut f: impl FnMut(&[F]) -> F,
    region: Region<F>,
    tol: F,
) -> Result<QuadratureResult<F>> {
    if !(tol > F::zero()) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let two_pi = F::TAU();
    let (lo, hi, splits, polar) = match region {
        Region::Interval { lo, hi } => return integrate_1d(|x| f(&[x]), lo, hi, tol),
        Region::Rect { lo, hi } => (lo, hi, [2, 2], None),
        Region::Disk { center, radius } => ([F::zero(), F::zero()], [radius, two_pi], [2, 4], Some(center)),
        Region::Annulus { center, inner, outer } => ([inner, F::zero()], [outer, two_pi], [2, 4], Some(center)),
    };
    let mut evaluations = 0usize;
    let mut g = |u: F, v: F| -> Result<F> {
        evaluations += 1;
        let y = match polar {
            None => f(&[u, v]),
            Some(c) => f(&[c[0] + u * v.cos(), c[1] + u * v.sin()]) * u,
        };
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Precondition(format!(
                "integrand is not finite at ({}, {})",
                u.as_f64(),
                v.as_f64()
            )))
        }
    };
    let rule = Rule::<F>::new();
    let half = F::lit(0.5);
    let assess = |g: &mut dyn FnMut(F, F) -> Result<F>, lo: [F; 2], hi: [F; 2]| -> Result<Cell<F>> {
        let mut g = |u, v| g(u, v);
        let coarse = rule.apply(&mut g, lo, hi)?;
        let mid = [(lo[0] + hi[0]) * half, (lo[1] + hi[1]) * half];
        let mut fine = F::zero();
        for (a, b) in quarters(lo, hi, mid) {
            fine = fine + rule.apply(&mut g, a, b)?;
        }
        Ok(Cell {
            lo,
            hi,
            value: fine,
            error: (fine - coarse).abs(),
        })
    };

    let mut cells = Vec::new();
    let (nx, ny) = (splits[0], splits[1]);
    for i in 0..nx {
        for j in 0..ny {
            let t = |k: usize, n: usize, a: F, b: F| a + (b - a) * F::from_usize(k).unwrap() / F::from_usize(n).unwrap();
            let clo = [t(i, nx, lo[0], hi[0]), t(j, ny, lo[1], hi[1])];
            let chi = [t(i + 1, nx, lo[0], hi[0]), t(j + 1, ny, lo[1], hi[1])];
            cells.push(assess(&mut g, clo, chi)?);
        }
    }
    loop {
        let total_error = cells.iter().fold(F::zero(), |acc, c| acc + c.error);
        let value = cells.iter().fold(F::zero(), |acc, c| acc + c.value);
        if total_error <= tol {
            return Ok(QuadratureResult::new(value, total_error, evaluations));
        }
        if cells.len() + 3 > MAX_CELLS {
            return Err(QuadratureResult::new(value, total_error, evaluations).non_convergence());
        }
        let worst = (0..cells.len())
            .fold(0, |best, k| if cells[k].error > cells[best].error { k } else { best });
        let cell = cells.swap_remove(worst);
        let mid = [(cell.lo[0] + cell.hi[0]) * half, (cell.lo[1] + cell.hi[1]) * half];
        for (a, b) in quarters(cell.lo, cell.hi, mid) {
            cells.push(assess(&mut g, a, b)?);
        }
    }
}

fn quarters<F: Copy>(lo: [F; 2], hi: [F; 2], mid: [F; 2]) -> [([F; 2], [F; 2]); 4] {
    [
        ([lo[0], lo[1]], [mid[0], mid[1]]),
        ([mid[0], lo[1]], [hi[0], mid[1]]),
        ([lo[0], mid[1]], [mid[0], hi[1]]),
        ([mid[0], mid[1]], [hi[0], hi[1]]),
    ]
}
