use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Residual tolerance: `|f(x)| <= f_tol` is accepted as a root.
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            f_tol: 1e-12,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Dekker's method: bisection safeguarding secant steps on a sign-changing
/// bracket `[lo, hi]`. Stops once `|f| <= f_tol` or the bracket has
/// collapsed to a few ulps around the sign change.
pub fn find_root<F>(f: F, lo: f64, hi: f64, opts: RootOptions) -> Result<Root>
where
    F: Fn(f64) -> f64,
{
    let mut a = lo;
    let mut fa = f(a);
    let mut b = hi;
    let mut fb = f(b);
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::NoConvergence(format!(
            "residual is NaN at bracket end ({lo}, {hi})"
        )));
    }
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoConvergence(format!(
            "root not bracketed on [{lo}, {hi}]: f = ({fa}, {fb})"
        )));
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    // `b` is the best iterate, `a` the contrapoint, `c` the previous iterate.
    let mut c = a;
    let mut fc = fa;

    for iter in 1..=opts.max_iter {
        let mid = 0.5 * (a - b);
        let tol = 2.0 * f64::EPSILON * b.abs() + f64::MIN_POSITIVE;
        if fb.abs() <= opts.f_tol || mid.abs() <= tol {
            return Ok(Root {
                x: b,
                residual: fb,
                iterations: iter - 1,
            });
        }
        let secant = if fb != fc && fc.is_finite() {
            b - fb * (b - c) / (fb - fc)
        } else {
            b + mid
        };
        let mut next = if within(secant, b, b + mid) { secant } else { b + mid };
        if (next - b).abs() < tol {
            next = b + tol.copysign(mid);
        }
        c = b;
        fc = fb;
        b = next;
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::NoConvergence(format!("residual is NaN at {b}")));
        }
        if fb.signum() == fa.signum() {
            a = c;
            fa = fc;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Err(Error::NoConvergence(format!(
        "iteration cap {} hit; best x = {b}, residual = {fb}",
        opts.max_iter
    )))
}

fn within(x: f64, from: f64, to: f64) -> bool {
    if from < to {
        x > from && x < to
    } else {
        x < from && x > to
    }
}

/// Grows `hi` geometrically from `start` until `f(hi)` has the opposite sign
/// of `f(lo)`. Returns `None` if no sign change appears within `max_steps`.
pub fn expand_bracket_upward<F>(f: &F, lo: f64, start: f64, growth: f64, max_steps: usize) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let f_lo = f(lo);
    let mut hi = start;
    for _ in 0..max_steps {
        let f_hi = f(hi);
        if f_hi == 0.0 || f_hi.signum() != f_lo.signum() {
            return Some(hi);
        }
        hi *= growth;
    }
    None
}
