use crate::error::{Error, Result};

/// Search interval and stopping rule for [`brent_root`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    /// Stop once `|f(x)| <= tol_abs`.
    pub tol_abs: f64,
    /// Stop once the enclosing interval is narrower than `tol_rel * |x|`.
    pub tol_rel: f64,
    pub max_iter: usize,
}

impl Bracket {
    /// A bracket that runs to (nearly) full double precision in `x`.
    pub fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            tol_abs: f64::MIN_POSITIVE,
            tol_rel: 4.0 * f64::EPSILON,
            max_iter: 200,
        }
    }

    pub fn with_tol(mut self, tol_abs: f64, tol_rel: f64) -> Self {
        self.tol_abs = tol_abs;
        self.tol_rel = tol_rel;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.lo < self.hi) || !(self.tol_abs > 0.0) || self.max_iter == 0 {
            return Err(Error::Domain(format!("invalid bracket {self:?}")));
        }
        Ok(())
    }
}

/// Brent's method (inverse quadratic interpolation with bisection fallback).
pub fn brent_root<F>(mut f: F, bracket: &Bracket) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    bracket.validate()?;
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() || fa * fb > 0.0 {
        return Err(Error::NoSignChange {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..bracket.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * bracket.tol_rel * b.abs() + 1e-300;
        let half = 0.5 * (c - b);
        if fb.abs() <= bracket.tol_abs || half.abs() <= tol {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * half * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(half) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::NonFinite { x: b, value: fb });
        }
    }
    Err(Error::MaxIterExceeded {
        iterations: bracket.max_iter,
        last: b,
        residual: fb,
    })
}
