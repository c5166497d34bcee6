//! Bounded scalar minimization and bisection.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const PARABOLIC_STEPS: usize = 3;

/// Minimizer and value of a scalar objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Golden-section search on `[a, b]` to absolute width `tol`, refined by up to
/// three parabolic steps through the best bracketing triple. The endpoints are
/// evaluated as well, so a monotone objective returns the better endpoint.
pub fn golden_section_min<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a <= b) || !tol.is_finite() || tol <= 0.0 {
        return Err(Error::OutOfDomain(format!("interval [{a}, {b}], tol {tol}")));
    }
    let mut seen: Vec<(f64, f64)> = Vec::new();
    let mut eval = |x: f64, seen: &mut Vec<(f64, f64)>| -> Result<f64> {
        let v = f(x)?;
        seen.push((x, v));
        Ok(v)
    };
    let fa = eval(a, &mut seen)?;
    if b - a <= tol {
        return Ok(Minimum {
            x: a,
            value: fa,
            evaluations: 1,
        });
    }
    let fb = eval(b, &mut seen)?;

    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1, &mut seen)?;
    let mut f2 = eval(x2, &mut seen)?;
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1, &mut seen)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2, &mut seen)?;
        }
    }

    for _ in 0..PARABOLIC_STEPS {
        // best interior sample and its two neighbours in x
        let mut pts = seen.clone();
        pts.sort_by(|p, q| p.0.total_cmp(&q.0));
        pts.dedup_by(|p, q| p.0 == q.0);
        let Some(k) = (1..pts.len().saturating_sub(1)).min_by(|&i, &j| pts[i].1.total_cmp(&pts[j].1))
        else {
            break;
        };
        let [(xa, fa_), (xb, fb_), (xc, fc_)] = [pts[k - 1], pts[k], pts[k + 1]];
        let num = (xb - xa).powi(2) * (fb_ - fc_) - (xb - xc).powi(2) * (fb_ - fa_);
        let den = (xb - xa) * (fb_ - fc_) - (xb - xc) * (fb_ - fa_);
        if den == 0.0 || !num.is_finite() {
            break;
        }
        let xp = xb - 0.5 * num / den;
        if !(xp > xa && xp < xc) || seen.iter().any(|p| p.0 == xp) {
            break;
        }
        eval(xp, &mut seen)?;
    }

    // interior samples first so that endpoint ties resolve to the endpoint
    let mut best = (f64::NAN, f64::INFINITY);
    for &(x, v) in seen.iter().skip(2) {
        if v < best.1 {
            best = (x, v);
        }
    }
    for end in [(a, fa), (b, fb)] {
        if end.1 <= best.1 {
            best = end;
        }
    }
    Ok(Minimum {
        x: best.0,
        value: best.1,
        evaluations: seen.len(),
    })
}

/// Root of `f` on `[lo, hi]` by bisection to absolute width `tol`.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    let sa = fa.signum();
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Smallest `x` in `[lo, hi]` (to width `tol`) at which a monotone predicate
/// switches from false to true.
pub fn bisect_predicate<F>(mut pred: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<bool>,
{
    if pred(lo)? || !pred(hi)? {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let m = 0.5 * (a + b);
        if pred(m)? {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(0.5 * (a + b))
}
