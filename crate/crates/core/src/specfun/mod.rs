//! Cylinder special functions and the outgoing Helmholtz point-source field.
//!
//! Everything here is implemented from scratch (no external special-function
//! dependency): power series with compensated accumulation for small
//! arguments, Hankel amplitude/phase expansions for large arguments, Miller's
//! normalized backward recurrence for J_n and forward recurrence for Y_n.
//! All functions are pure and safe to call concurrently.

mod cyl;
mod dd;

use crate::error::{Error, Result};
use crate::point::Point2;
use num_complex::Complex64;

/// Largest supported cylinder-function order. Keeps the order recurrences in
/// their validated regime; the analytic disk series never needs more at desk
/// scale.
pub const MAX_ORDER: u32 = 120;

/// Separations below this raise [`Error::Singularity`].
pub const SINGULARITY_THRESHOLD: f64 = 1e-14;

/// A validated non-negative integer order, bounded by [`MAX_ORDER`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CylinderOrder(u32);

impl CylinderOrder {
    pub fn new(n: u32) -> Result<Self> {
        if n > MAX_ORDER {
            return Err(Error::Domain(format!(
                "cylinder order {n} exceeds maximum {MAX_ORDER}"
            )));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

fn check_arg(t: f64, allow_zero: bool) -> Result<()> {
    if !t.is_finite() || t < 0.0 || (t == 0.0 && !allow_zero) {
        return Err(Error::Domain(format!("argument {t} outside the function domain")));
    }
    Ok(())
}

/// Bessel function of the first kind J_n(t), t >= 0.
pub fn bessel_j(n: CylinderOrder, t: f64) -> Result<f64> {
    check_arg(t, true)?;
    Ok(match n.get() {
        0 => cyl::j0(t),
        1 => cyl::j1(t),
        k => cyl::j_seq(k as usize, t)[k as usize],
    })
}

/// Bessel function of the second kind Y_n(t), t > 0.
///
/// Fails with a domain error if the value overflows f64 (large order at
/// small argument).
pub fn bessel_y(n: CylinderOrder, t: f64) -> Result<f64> {
    check_arg(t, false)?;
    let v = match n.get() {
        0 => cyl::y0(t),
        1 => cyl::y1(t),
        k => cyl::y_seq(k as usize, t)[k as usize],
    };
    if !v.is_finite() {
        return Err(Error::Domain(format!(
            "Y_{}({t}) overflows double precision",
            n.get()
        )));
    }
    Ok(v)
}

/// Hankel function of the first kind H^(1)_n(t) = J_n(t) + i Y_n(t), t > 0.
pub fn hankel1(n: CylinderOrder, t: f64) -> Result<Complex64> {
    Ok(Complex64::new(bessel_j(n, t)?, bessel_y(n, t)?))
}

/// J_0..J_nmax as one normalized backward recurrence sweep.
pub fn bessel_j_seq(nmax: CylinderOrder, t: f64) -> Result<Vec<f64>> {
    check_arg(t, true)?;
    Ok(cyl::j_seq(nmax.get() as usize, t))
}

/// Y_0..Y_nmax by forward recurrence. Entries that overflow f64 are
/// +-inf; callers interpreting high orders must check finiteness.
pub fn bessel_y_seq(nmax: CylinderOrder, t: f64) -> Result<Vec<f64>> {
    check_arg(t, false)?;
    Ok(cyl::y_seq(nmax.get() as usize, t))
}

// --- fast internal paths (arguments validated by the caller) ---------------

pub(crate) fn h0_fast(t: f64) -> Complex64 {
    Complex64::new(cyl::j0(t), cyl::y0(t))
}

pub(crate) fn h1_fast(t: f64) -> Complex64 {
    Complex64::new(cyl::j1(t), cyl::y1(t))
}

/// (J_0, J_1, Y_0, Y_1) at one argument; the boundary kernels need all four.
pub(crate) fn jy01_fast(t: f64) -> (f64, f64, f64, f64) {
    (cyl::j0(t), cyl::j1(t), cyl::y0(t), cyl::y1(t))
}

pub(crate) fn j0_fast(t: f64) -> f64 {
    cyl::j0(t)
}

pub(crate) fn j1_fast(t: f64) -> f64 {
    cyl::j1(t)
}

// ---------------------------------------------------------------------------
// Helmholtz fundamental solution
// ---------------------------------------------------------------------------

/// Outgoing point-source field (i/4) H^(1)_0(k |x - y|).
pub fn fundamental_solution(k: f64, x: Point2, y: Point2) -> Result<Complex64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("wavenumber {k} must be positive")));
    }
    let r = x.dist(y);
    if r < SINGULARITY_THRESHOLD {
        return Err(Error::Singularity(r));
    }
    // (i/4)(J_0 + i Y_0) = (-Y_0/4, J_0/4)
    let (j, y0v) = {
        let t = k * r;
        (cyl::j0(t), cyl::y0(t))
    };
    Ok(Complex64::new(-0.25 * y0v, 0.25 * j))
}

/// Gradient of the fundamental solution with respect to the source point y:
/// (i k / 4) H^(1)_1(k |x - y|) (x - y)/|x - y|.
pub fn fundamental_solution_gradient(k: f64, x: Point2, y: Point2) -> Result<[Complex64; 2]> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("wavenumber {k} must be positive")));
    }
    let d = x.sub(y);
    let r = d.norm();
    if r < SINGULARITY_THRESHOLD {
        return Err(Error::Singularity(r));
    }
    let t = k * r;
    let h1 = Complex64::new(cyl::j1(t), cyl::y1(t));
    let coef = Complex64::new(0.0, 0.25 * k) * h1 / r;
    Ok([coef * d.x, coef * d.y])
}
