use super::QuadratureResult;
use crate::error::{Error, Result};
use crate::scalar::FloatScalar;

/// Recursion depth cap for each starting panel.
pub const MAX_DEPTH: u32 = 15;

/// Starting panels; integrands sampled only at 0, π, 2π would otherwise
/// fool the very first Simpson comparison.
const PANELS: usize = 4;

struct Simpson<'a, F, G> {
    f: &'a mut G,
    evaluations: usize,
    converged: bool,
    _marker: std::marker::PhantomData<F>,
}

impl<F: FloatScalar, G: FnMut(F) -> F> Simpson<'_, F, G> {
    fn eval(&mut self, x: F) -> Result<F> {
        self.evaluations += 1;
        let y = (self.f)(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Precondition(format!("integrand is not finite at {}", x.as_f64())))
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(&mut self, a: F, b: F, fa: F, fm: F, fb: F, whole: F, tol: F, depth: u32) -> Result<(F, F)> {
        let two = F::lit(2.0);
        let six = F::lit(6.0);
        let fifteen = F::lit(15.0);
        let m = (a + b) / two;
        let (lm, rm) = ((a + m) / two, (m + b) / two);
        let (flm, frm) = (self.eval(lm)?, self.eval(rm)?);
        let left = (m - a) / six * (fa + F::lit(4.0) * flm + fm);
        let right = (b - m) / six * (fm + F::lit(4.0) * frm + fb);
        let delta = left + right - whole;
        let estimate = left + right + delta / fifteen;
        if delta.abs() <= fifteen * tol {
            return Ok((estimate, delta.abs() / fifteen));
        }
        if depth >= MAX_DEPTH || lm <= a || rm >= b {
            self.converged = false;
            return Ok((estimate, delta.abs() / fifteen));
        }
        let half = tol / two;
        let (lv, le) = self.refine(a, m, fa, flm, fm, left, half, depth + 1)?;
        let (rv, re) = self.refine(m, b, fm, frm, fb, right, half, depth + 1)?;
        Ok((lv + rv, le + re))
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `tol`, with Richardson-corrected panel values.
///
/// Fails with [`Error::NonConvergence`] (carrying the partial result) when
/// some panel reaches [`MAX_DEPTH`] without meeting its share of `tol`.
pub fn integrate_1d<F: FloatScalar>(
    mut f: impl FnMut(F) -> F,
    a: F,
    b: F,
    tol: F,
) -> Result<QuadratureResult<F>> {
    if !(tol > F::zero()) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    if a == b {
        let _ = f(a);
        return Ok(QuadratureResult::new(F::zero(), F::zero(), 1));
    }
    let (lo, hi, sign) = if a < b { (a, b, F::one()) } else { (b, a, -F::one()) };
    let mut s = Simpson {
        f: &mut f,
        evaluations: 0,
        converged: true,
        _marker: std::marker::PhantomData,
    };
    let panels = F::from_usize(PANELS).unwrap();
    let width = (hi - lo) / panels;
    let panel_tol = tol / panels;
    let (mut value, mut error) = (F::zero(), F::zero());
    let mut fa = s.eval(lo)?;
    for k in 0..PANELS {
        let pa = lo + width * F::from_usize(k).unwrap();
        let pb = if k + 1 == PANELS { hi } else { pa + width };
        let pm = (pa + pb) / F::lit(2.0);
        let (fm, fb) = (s.eval(pm)?, s.eval(pb)?);
        let whole = (pb - pa) / F::lit(6.0) * (fa + F::lit(4.0) * fm + fb);
        let (v, e) = s.refine(pa, pb, fa, fm, fb, whole, panel_tol, 0)?;
        value = value + v;
        error = error + e;
        fa = fb;
    }
    let result = QuadratureResult::new(sign * value, error, s.evaluations);
    if s.converged {
        Ok(result)
    } else {
        Err(result.non_convergence())
    }
}
