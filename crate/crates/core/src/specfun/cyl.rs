//! Cylinder function engines: J0/J1/Y0/Y1 by power series (double-double
//! accumulation) below t = 16 and Hankel asymptotic amplitude/phase
//! expansions above, plus order recurrences for J_n and Y_n.
//!
//! The series/asymptotic split point is chosen so that both branches hold
//! ~1e-14 relative accuracy (to the oscillation amplitude) on their side:
//! the plain asymptotic series bottoms out near 5e-12 at t = 13, while the
//! compensated series is exact to well below 1e-20 for t <= 16.

use super::dd::{two_prod, Dd};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const FRAC_2_PI: f64 = std::f64::consts::FRAC_2_PI;
const PI: f64 = std::f64::consts::PI;

/// Low bits of pi (pi = PI_f64 + PI_LO).
const PI_LO: f64 = 1.224_646_799_147_353_2e-16;

/// Series / asymptotic crossover.
const SPLIT: f64 = 16.0;

const MAX_SERIES_TERMS: usize = 120;

// ---------------------------------------------------------------------------
// Power series (t <= SPLIT)
// ---------------------------------------------------------------------------

fn half_t_squared(t: f64) -> Dd {
    // (t/2)^2 carried in double-double so every term sees the exact square
    two_prod(t, t).mul_f64(0.25)
}

pub fn j0_series(t: f64) -> f64 {
    let x2 = half_t_squared(t);
    let mut term = Dd::from_f64(1.0);
    let mut sum = Dd::from_f64(1.0);
    for m in 1..=MAX_SERIES_TERMS {
        let mf = m as f64;
        term = term.mul(x2).div_f64(mf * mf).neg();
        sum = sum.add(term);
        if term.abs_hi() < 1e-36 {
            break;
        }
    }
    sum.to_f64()
}

pub fn j1_series(t: f64) -> f64 {
    let x2 = half_t_squared(t);
    let mut term = Dd::from_f64(1.0);
    let mut sum = Dd::from_f64(1.0);
    for m in 1..=MAX_SERIES_TERMS {
        let mf = m as f64;
        term = term.mul(x2).div_f64(mf * (mf + 1.0)).neg();
        sum = sum.add(term);
        if term.abs_hi() < 1e-36 {
            break;
        }
    }
    sum.mul_f64(0.5 * t).to_f64()
}

pub fn y0_series(t: f64) -> f64 {
    let x2 = half_t_squared(t);
    // S = sum_{m>=1} (-1)^{m+1} H_m x2^m / (m!)^2
    let mut base = Dd::from_f64(1.0); // x2^m/(m!)^2
    let mut harmonic = Dd::ZERO;
    let mut s = Dd::ZERO;
    for m in 1..=MAX_SERIES_TERMS {
        let mf = m as f64;
        base = base.mul(x2).div_f64(mf * mf);
        harmonic = harmonic.add(Dd::from_f64(1.0).div_f64(mf));
        let term = base.mul(harmonic);
        s = if m % 2 == 1 { s.add(term) } else { s.add(term.neg()) };
        if term.abs_hi() < 1e-36 {
            break;
        }
    }
    let log_term = (0.5 * t).ln() + EULER_GAMMA;
    FRAC_2_PI * (log_term * j0_series(t) + s.to_f64())
}

pub fn y1_series(t: f64) -> f64 {
    let x2 = half_t_squared(t);
    // S = sum_{m>=0} (-1)^m (H_m + H_{m+1}) x2^m / (m!(m+1)!)
    let mut base = Dd::from_f64(1.0); // x2^m/(m!(m+1)!)
    let mut h_m = Dd::ZERO;
    let mut h_mp1 = Dd::from_f64(1.0);
    let mut s = h_m.add(h_mp1); // m = 0 term
    for m in 1..=MAX_SERIES_TERMS {
        let mf = m as f64;
        base = base.mul(x2).div_f64(mf * (mf + 1.0));
        h_m = h_mp1;
        h_mp1 = h_mp1.add(Dd::from_f64(1.0).div_f64(mf + 1.0));
        let term = base.mul(h_m.add(h_mp1));
        s = if m % 2 == 1 { s.add(term.neg()) } else { s.add(term) };
        if term.abs_hi() < 1e-36 {
            break;
        }
    }
    let log_term = (0.5 * t).ln() + EULER_GAMMA;
    FRAC_2_PI * log_term * j1_series(t) - FRAC_2_PI / t - (t / (2.0 * PI)) * s.to_f64()
}

// ---------------------------------------------------------------------------
// Hankel asymptotic expansion (t > SPLIT)
// ---------------------------------------------------------------------------

/// cos and sin of chi = t - (2n+1) pi/4 with the phase reduced in
/// double-double so large arguments lose no accuracy.
fn phase_cos_sin(t: f64, n: u32) -> (f64, f64) {
    let quarter_pi = Dd { hi: PI / 4.0, lo: PI_LO / 4.0 };
    let shift = quarter_pi.mul_f64((2 * n + 1) as f64);
    let chi = Dd::from_f64(t).add(shift.neg());
    let (s, c) = chi.hi.sin_cos();
    (c - chi.lo * s, s + chi.lo * c)
}

/// (J_n, Y_n) for n = 0, 1 via the amplitude/phase expansion.
pub fn jy_asymptotic(n: u32, t: f64) -> (f64, f64) {
    let mu = (4 * n * n) as f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut c = 1.0;
    let mut prev = f64::MAX;
    for k in 1..=40u32 {
        let odd = (2 * k - 1) as f64;
        c *= (mu - odd * odd) / (8.0 * k as f64 * t);
        if c.abs() >= prev {
            break; // smallest term reached; adding more diverges
        }
        prev = c.abs();
        match k % 4 {
            1 => q += c,
            2 => p -= c,
            3 => q -= c,
            _ => p += c,
        }
        if c.abs() < 1e-17 {
            break;
        }
    }
    let amp = (2.0 / (PI * t)).sqrt();
    let (cos_chi, sin_chi) = phase_cos_sin(t, n);
    (amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi))
}

// ---------------------------------------------------------------------------
// Order 0/1 dispatchers (t >= 0 assumed validated by the caller)
// ---------------------------------------------------------------------------

pub fn j0(t: f64) -> f64 {
    if t <= SPLIT {
        j0_series(t)
    } else {
        jy_asymptotic(0, t).0
    }
}

pub fn j1(t: f64) -> f64 {
    if t <= SPLIT {
        j1_series(t)
    } else {
        jy_asymptotic(1, t).0
    }
}

pub fn y0(t: f64) -> f64 {
    if t <= SPLIT {
        y0_series(t)
    } else {
        jy_asymptotic(0, t).1
    }
}

pub fn y1(t: f64) -> f64 {
    if t <= SPLIT {
        y1_series(t)
    } else {
        jy_asymptotic(1, t).1
    }
}

// ---------------------------------------------------------------------------
// Sequences of integer orders
// ---------------------------------------------------------------------------

fn envj(n: f64, x: f64) -> f64 {
    0.5 * (std::f64::consts::TAU * n).log10() - n * (1.36 * x / n).log10()
}

/// Starting order for Miller's backward recurrence delivering `mp`
/// significant digits at order `n` (secant iteration on the envelope,
/// after Zhang & Jin).
fn miller_start(x: f64, n: usize, mp: f64) -> usize {
    let a0 = x.abs().max(1e-35);
    let hmp = 0.5 * mp;
    let ejn = envj(n as f64, a0);
    let (obj, mut n0) = if ejn <= hmp {
        (mp, ((1.1 * a0) as i32 + 1).max(2) as f64)
    } else {
        (hmp + ejn, n as f64)
    };
    let mut f0 = envj(n0, a0) - obj;
    let mut n1 = n0 + 5.0;
    let mut f1 = envj(n1, a0) - obj;
    let mut nn = n1;
    for _ in 0..20 {
        if f1 == f0 {
            break;
        }
        nn = n1 - (n1 - n0) / (1.0 - f0 / f1);
        let f = envj(nn, a0) - obj;
        if (nn - n1).abs() < 1.0 {
            break;
        }
        n0 = n1;
        f0 = f1;
        n1 = nn;
        f1 = f;
    }
    nn as usize + 10
}

/// J_0..J_nmax by Miller's normalized backward recurrence.
pub fn j_seq(nmax: usize, t: f64) -> Vec<f64> {
    debug_assert!(t >= 0.0);
    let mut out = vec![0.0; nmax + 1];
    if t == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if t < 1e-4 {
        // ascending series, two terms; higher orders underflow to zero
        let x2 = 0.25 * t * t;
        let mut lead = 1.0; // (t/2)^n / n!
        for (n, slot) in out.iter_mut().enumerate() {
            *slot = lead * (1.0 - x2 / (n as f64 + 1.0));
            lead *= 0.5 * t / (n as f64 + 1.0);
        }
        return out;
    }
    if nmax == 0 {
        out[0] = j0(t);
        return out;
    }
    if nmax == 1 {
        out[0] = j0(t);
        out[1] = j1(t);
        return out;
    }

    let start = miller_start(t, nmax, 16.0).max(nmax + 10);
    let mut jp2 = 0.0_f64; // J_{k+2} surrogate
    let mut jp1 = 1e-100_f64; // J_{k+1} surrogate
    let mut sum = 0.0_f64; // J_0 + 2 sum_{even k >= 2} J_k
    for k in (0..=start).rev() {
        let mut jk = 2.0 * (k as f64 + 1.0) / t * jp1 - jp2;
        if jk.abs() > 1e250 {
            jk *= 1e-250;
            jp1 *= 1e-250;
            sum *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
        if k <= nmax {
            out[k] = jk;
        }
        if k >= 2 && k % 2 == 0 {
            sum += 2.0 * jk;
        } else if k == 0 {
            sum += jk;
        }
        jp2 = jp1;
        jp1 = jk;
    }
    let scale = 1.0 / sum;
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}

/// Y_0..Y_nmax by forward recurrence (stable: Y_n is the dominant solution).
/// Entries overflow to -inf for large order at small argument; callers must
/// check finiteness where it matters.
pub fn y_seq(nmax: usize, t: f64) -> Vec<f64> {
    debug_assert!(t > 0.0);
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(y0(t));
    if nmax >= 1 {
        out.push(y1(t));
        for k in 1..nmax {
            let next = 2.0 * k as f64 / t * out[k] - out[k - 1];
            out.push(next);
        }
    }
    out
}
