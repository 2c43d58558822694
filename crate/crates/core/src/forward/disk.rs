//! Analytic scattering series for a disk centered at the origin: the
//! independent oracle every solver accuracy test is pinned against
//! (separation of variables in cylindrical harmonics).

use crate::error::{Error, Result};
use crate::forward::{BoundaryCondition, IncidentField};
use crate::point::Point2;
use crate::specfun::{self, CylinderOrder};
use num_complex::Complex64;
use std::f64::consts::PI;

type C64 = Complex64;

/// Truncation order for the cylindrical-harmonic series.
fn truncation(a: f64, k: f64) -> usize {
    let wanted = (3.0 * k * a).ceil() as usize + 40;
    wanted.min(specfun::MAX_ORDER as usize)
}

/// Modal reflection coefficients c_n so the scattered field replaces
/// J_n(k r) with c_n H_n(k r).
fn coefficients(a: f64, k: f64, bc: &BoundaryCondition, nmax: usize) -> Result<Vec<C64>> {
    let ka = k * a;
    let ja = specfun::bessel_j_seq(CylinderOrder::new(nmax as u32 + 1)?, ka)?;
    let ya = specfun::bessel_y_seq(CylinderOrder::new(nmax as u32 + 1)?, ka)?;
    let h = |n: usize| C64::new(ja[n], ya[n]);
    let eta = match bc {
        BoundaryCondition::Dirichlet => None,
        BoundaryCondition::Impedance(profile) => Some(profile.constant_value().ok_or_else(
            || Error::Domain("disk series supports constant impedance only".into()),
        )?),
    };
    let mut out = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let c = match eta {
            None => {
                let hn = h(n);
                if !hn.re.is_finite() || !hn.im.is_finite() {
                    C64::new(0.0, 0.0)
                } else {
                    -C64::new(ja[n], 0.0) / hn
                }
            }
            Some(eta) => {
                // derivative via the recurrence Z_n' = Z_{n-1} - (n/z) Z_n
                let jd = if n == 0 { -ja[1] } else { ja[n - 1] - n as f64 / ka * ja[n] };
                let yd = if n == 0 { -ya[1] } else { ya[n - 1] - n as f64 / ka * ya[n] };
                let hn = h(n);
                let hd = C64::new(jd, yd);
                if !hn.re.is_finite() || !hn.im.is_finite() || !hd.re.is_finite() || !hd.im.is_finite() {
                    C64::new(0.0, 0.0)
                } else {
                    let num = C64::new(jd, 0.0) + C64::new(0.0, eta) * ja[n];
                    let den = hd + C64::new(0.0, eta) * hn;
                    -num / den
                }
            }
        };
        out.push(c);
    }
    Ok(out)
}

fn validate(a: f64, k: f64) -> Result<()> {
    if !(a > 0.0) || !(k > 0.0) {
        return Err(Error::Domain("disk series needs a > 0 and k > 0".into()));
    }
    Ok(())
}

fn angle(p: Point2) -> f64 {
    p.y.atan2(p.x)
}

/// Scattered field of the disk |y| <= a at the exterior point x.
pub fn disk_series(
    a: f64,
    k: f64,
    incident: &IncidentField,
    x: Point2,
    bc: &BoundaryCondition,
) -> Result<C64> {
    disk_series_truncated(a, k, incident, x, bc, truncation(a, k))
}

pub(crate) fn disk_series_truncated(
    a: f64,
    k: f64,
    incident: &IncidentField,
    x: Point2,
    bc: &BoundaryCondition,
    nmax: usize,
) -> Result<C64> {
    validate(a, k)?;
    let rx = x.norm();
    if rx < a * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "evaluation point |x| = {rx} inside the disk of radius {a}"
        )));
    }
    let coef = coefficients(a, k, bc, nmax)?;
    let jx = specfun::bessel_j_seq(CylinderOrder::new(nmax as u32)?, k * rx)?;
    let yx = specfun::bessel_y_seq(CylinderOrder::new(nmax as u32)?, k * rx)?;
    let hx = |n: usize| C64::new(jx[n], yx[n]);

    let mut sum = C64::new(0.0, 0.0);
    let mut last = 0.0;
    match incident {
        IncidentField::PlaneWave { direction } => {
            let psi = angle(x) - angle(*direction);
            let mut i_pow = C64::new(1.0, 0.0);
            for (n, c) in coef.iter().enumerate() {
                let eps = if n == 0 { 1.0 } else { 2.0 };
                let h = hx(n);
                if !h.re.is_finite() || !h.im.is_finite() {
                    break;
                }
                let term = eps * i_pow * c * h * (n as f64 * psi).cos();
                sum += term;
                last = term.norm();
                i_pow *= C64::new(0.0, 1.0);
            }
        }
        IncidentField::PointSource { location } => {
            let rs = location.norm();
            if rs <= a {
                return Err(Error::Geometry("point source inside the disk".into()));
            }
            let js = specfun::bessel_j_seq(CylinderOrder::new(nmax as u32)?, k * rs)?;
            let ys = specfun::bessel_y_seq(CylinderOrder::new(nmax as u32)?, k * rs)?;
            let delta = angle(x) - angle(*location);
            for (n, c) in coef.iter().enumerate() {
                let eps = if n == 0 { 1.0 } else { 2.0 };
                let hs = C64::new(js[n], ys[n]);
                let h = hx(n);
                if !h.re.is_finite() || !h.im.is_finite() || !hs.re.is_finite() || !hs.im.is_finite()
                {
                    break;
                }
                let term = eps * c * hs * h * (n as f64 * delta).cos();
                sum += term;
                last = term.norm();
            }
            sum *= C64::new(0.0, 0.25);
        }
    }
    if last > 1e-13 * sum.norm().max(1e-300) {
        log::warn!(
            "disk series truncation stagnated: tail {last:.2e} of {:.2e} at order {nmax}",
            sum.norm()
        );
    }
    Ok(sum)
}

/// Far-field pattern of the disk scattering solution in the given direction.
pub fn disk_series_far_field(
    a: f64,
    k: f64,
    incident: &IncidentField,
    bc: &BoundaryCondition,
    direction: Point2,
) -> Result<C64> {
    validate(a, k)?;
    let nmax = truncation(a, k);
    let coef = coefficients(a, k, bc, nmax)?;
    let dhat = direction.scale(1.0 / direction.norm());
    // H_n(kr) -> sqrt(2/(pi k r)) e^{i(kr - n pi/2 - pi/4)}
    let front = (2.0 / (PI * k)).sqrt() * C64::cis(-PI / 4.0);
    let mut sum = C64::new(0.0, 0.0);
    match incident {
        IncidentField::PlaneWave { direction: d } => {
            let psi = angle(dhat) - angle(*d);
            for (n, c) in coef.iter().enumerate() {
                let eps = if n == 0 { 1.0 } else { 2.0 };
                sum += eps * c * (n as f64 * psi).cos();
            }
            Ok(front * sum)
        }
        IncidentField::PointSource { location } => {
            let rs = location.norm();
            if rs <= a {
                return Err(Error::Geometry("point source inside the disk".into()));
            }
            let js = specfun::bessel_j_seq(CylinderOrder::new(nmax as u32)?, k * rs)?;
            let ys = specfun::bessel_y_seq(CylinderOrder::new(nmax as u32)?, k * rs)?;
            let delta = angle(dhat) - angle(*location);
            let mut mi_pow = C64::new(1.0, 0.0); // (-i)^n
            for (n, c) in coef.iter().enumerate() {
                let eps = if n == 0 { 1.0 } else { 2.0 };
                let hs = C64::new(js[n], ys[n]);
                if !hs.re.is_finite() || !hs.im.is_finite() {
                    break;
                }
                sum += eps * c * hs * mi_pow * (n as f64 * delta).cos();
                mi_pow *= C64::new(0.0, -1.0);
            }
            Ok(C64::new(0.0, 0.25) * front * sum)
        }
    }
}
