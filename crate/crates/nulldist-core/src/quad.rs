//! Adaptive Simpson quadrature.
//!
//! Used for the causal reach integral `∫ dt / f(t)`; the integrands are
//! smooth away from finitely many kinks, so Simpson with interval halving
//! converges quickly. The absolute tolerance is the caller's contract.


use crate::error::Error;
use crate::Result;

/// Maximum recursion depth before giving up (interval width `(b-a)/2^40`).
const MAX_DEPTH: u32 = 40;

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    s: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fb: f64) -> Panel {
    let m = 0.5 * (a + b);
    let fm = f(m);
    Panel {
        a,
        b,
        fa,
        fm,
        fb,
        s: simpson(a, b, fa, fm, fb),
    }
}

fn refine(
    f: &dyn Fn(f64) -> f64,
    p: Panel,
    tol: f64,
    depth: u32,
    worst: &mut f64,
) -> f64 {
    let m = 0.5 * (p.a + p.b);
    let left = panel(f, p.a, m, p.fa, p.fm);
    let right = panel(f, m, p.b, p.fm, p.fb);
    let s2 = left.s + right.s;
    let err = (s2 - p.s) / 15.0;
    if err.abs() <= tol || depth >= MAX_DEPTH {
        if depth >= MAX_DEPTH {
            *worst = worst.max(err.abs());
        }
        return s2 + err;
    }
    refine(f, left, 0.5 * tol, depth + 1, worst) + refine(f, right, 0.5 * tol, depth + 1, worst)
}

/// Integrate `f` over `[a, b]` (a ≤ b) to absolute tolerance `tol`.
///
/// Fails with [`Error::Numeric`] carrying the bound achieved when the
/// recursion depth limit is hit before the local error estimate drops
/// below the tolerance budget.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("non-finite integration bounds"));
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let f_ref: &dyn Fn(f64) -> f64 = &f;
    let p = panel(f_ref, a, b, fa, fb);
    let mut worst = 0.0f64;
    let v = refine(f_ref, p, tol, 0, &mut worst);
    if worst > tol {
        return Err(Error::Numeric {
            message: alloc::format!("quadrature did not converge on [{a}, {b}]"),
            achieved: worst,
        });
    }
    Ok(v)
}
