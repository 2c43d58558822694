//! Double-double ("hi + lo") arithmetic for the cylinder-function power
//! series, which cancel catastrophically in plain f64 beyond t ~ 8.
//!
//! Only the handful of operations the series need are implemented. The
//! algorithms are the classical error-free transformations (Dekker/Knuth);
//! no FMA is assumed.

#[derive(Debug, Clone, Copy)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: e }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    // requires |a| >= |b|
    let s = a + b;
    let e = b - (s - a);
    Dd { hi: s, lo: e }
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
    let c = SPLITTER * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

#[inline]
pub fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    Dd { hi: p, lo: e }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(a: f64) -> Dd {
        Dd { hi: a, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn abs_hi(self) -> f64 {
        self.hi.abs()
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let mut r = quick_two_sum(s.hi, s.lo + t.hi);
        r = quick_two_sum(r.hi, r.lo + t.lo);
        r
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        let lo = p.lo + self.hi * o.lo + self.lo * o.hi;
        quick_two_sum(p.hi, lo)
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let p = two_prod(self.hi, b);
        quick_two_sum(p.hi, p.lo + self.lo * b)
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let p = two_prod(q1, b);
        let r = (self.hi - p.hi) - p.lo + self.lo;
        quick_two_sum(q1, r / b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_prod_exact_error() {
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60; the 2^-60 tail must be captured.
        let a = 1.0 + (2.0_f64).powi(-30);
        let p = two_prod(a, a);
        let exact_hi = 1.0 + (2.0_f64).powi(-29);
        assert_eq!(p.hi, exact_hi + (2.0_f64).powi(-60));
        assert_eq!(p.hi + p.lo, p.hi); // normalized
        let err = (p.hi - a * a).abs();
        assert!(err == 0.0);
    }

    #[test]
    fn sum_of_alternating_series() {
        // sum_{m} (-1)^m / m! in dd must hit 1/e to ~1e-30.
        let mut term = Dd::from_f64(1.0);
        let mut sum = Dd::from_f64(1.0);
        for m in 1..40 {
            term = term.div_f64(m as f64).neg();
            sum = sum.add(term);
        }
        let e_inv = (-1.0_f64).exp();
        assert!((sum.to_f64() - e_inv).abs() < 1e-16);
    }

    #[test]
    fn div_roundtrip() {
        let x = Dd::from_f64(std::f64::consts::PI);
        let y = x.div_f64(3.0).mul_f64(3.0);
        assert!((y.to_f64() - std::f64::consts::PI).abs() < 1e-16);
        assert!(y.lo.abs() < 1e-16);
    }
}
