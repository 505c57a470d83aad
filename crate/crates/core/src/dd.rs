//! Double-double arithmetic.
//!
//! A [`Dd`] stores an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
//! giving roughly 106 bits of mantissa. Only the operations needed by the
//! root polisher, the radial limits and the resultant evaluator are provided.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        // One Newton step on top of the f64 square root.
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let r = ((self.hi - p) - e + self.lo) / (2.0 * x);
        let (hi, lo) = quick_two_sum(x, r);
        Dd { hi, lo }
    }

    #[inline]
    pub fn recip(self) -> Self {
        Dd::ONE / self
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 } + Dd::new(q3)
    }
}

/// `pi` to double-double accuracy.
pub const PI: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.2246467991473532e-16,
};

impl Dd {
    /// `(sin x, cos x)` by Taylor series after reduction to `[-pi, pi]`.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let two_pi = PI * Dd::new(2.0);
        let k = (self / two_pi).to_f64().round();
        let x = self - two_pi * Dd::new(k);
        let x2 = x * x;
        let mut term = x;
        let mut sin = x;
        let mut cterm = Dd::ONE;
        let mut cos = Dd::ONE;
        for n in 1..40 {
            let a = (2 * n) as f64;
            term = -(term * x2) / Dd::new(a * (a + 1.0));
            cterm = -(cterm * x2) / Dd::new((a - 1.0) * a);
            sin = sin + term;
            cos = cos + cterm;
            if term.hi.abs() < 1e-40 && cterm.hi.abs() < 1e-40 {
                break;
            }
        }
        (sin, cos)
    }
}

/// Complex number with double-double parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub const ZERO: DdComplex = DdComplex {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: DdComplex = DdComplex {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    #[inline]
    pub fn new(re: Dd, im: Dd) -> Self {
        DdComplex { re, im }
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    #[inline]
    pub fn norm(self) -> Dd {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn conj(self) -> Self {
        DdComplex {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn scale(self, s: Dd) -> Self {
        DdComplex {
            re: self.re * s,
            im: self.im * s,
        }
    }

    /// `1 - |z|`, computed as `(1 - |z|^2) / (1 + |z|)` to keep the
    /// cancellation inside the double-double sum.
    pub fn one_minus_modulus(self) -> Dd {
        let n2 = self.norm_sqr();
        (Dd::ONE - n2) / (Dd::ONE + n2.sqrt())
    }

    /// The point on the unit circle at angle `theta`, unimodular to full
    /// double-double accuracy (the angle itself is only double accurate).
    pub fn unit(theta: f64) -> Self {
        let z = DdComplex::from(Complex64::from_polar(1.0, theta));
        let n = z.norm();
        DdComplex {
            re: z.re / n,
            im: z.im / n,
        }
    }

    /// `exp(2 pi i num / den)` with the angle formed in double-double.
    pub fn root_of_unity(num: i64, den: i64) -> Self {
        let r = num.rem_euclid(den);
        let x = PI * Dd::new(2.0) * Dd::new(r as f64) / Dd::new(den as f64);
        let (s, c) = x.sin_cos();
        DdComplex { re: c, im: s }
    }

    /// Rescale onto the unit circle.
    pub fn normalize(self) -> Self {
        let n = self.norm();
        DdComplex {
            re: self.re / n,
            im: self.im / n,
        }
    }
}

impl From<Complex64> for DdComplex {
    fn from(z: Complex64) -> Self {
        DdComplex {
            re: Dd::new(z.re),
            im: Dd::new(z.im),
        }
    }
}

impl Add for DdComplex {
    type Output = DdComplex;
    #[inline]
    fn add(self, b: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re + b.re,
            im: self.im + b.im,
        }
    }
}

impl Sub for DdComplex {
    type Output = DdComplex;
    #[inline]
    fn sub(self, b: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re - b.re,
            im: self.im - b.im,
        }
    }
}

impl Neg for DdComplex {
    type Output = DdComplex;
    #[inline]
    fn neg(self) -> DdComplex {
        DdComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for DdComplex {
    type Output = DdComplex;
    #[inline]
    fn mul(self, b: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl Div for DdComplex {
    type Output = DdComplex;
    fn div(self, b: DdComplex) -> DdComplex {
        let d = b.norm_sqr();
        let n = self * b.conj();
        DdComplex {
            re: n.re / d,
            im: n.im / d,
        }
    }
}

/// Horner evaluation of an ascending coefficient list in double-double.
pub fn horner(coeffs: &[DdComplex], z: DdComplex) -> DdComplex {
    coeffs
        .iter()
        .rev()
        .fold(DdComplex::ZERO, |acc, &c| acc * z + c)
}

/// Horner evaluation returning `(p(z), p'(z))`.
pub fn horner_with_derivative(coeffs: &[DdComplex], z: DdComplex) -> (DdComplex, DdComplex) {
    let mut p = DdComplex::ZERO;
    let mut dp = DdComplex::ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_keeps_low_order_bits() {
        let a = Dd::new(1.0) + Dd::new(1e-20);
        assert_eq!(a.hi, 1.0);
        assert!((a.lo - 1e-20).abs() < 1e-35);
        let b = a - Dd::new(1.0);
        assert!((b.to_f64() - 1e-20).abs() < 1e-35);
    }

    #[test]
    fn division_and_sqrt_round_trip() {
        let x = Dd::new(2.0).sqrt();
        let y = x * x - Dd::new(2.0);
        assert!(y.to_f64().abs() < 1e-30);
        let q = Dd::new(1.0) / Dd::new(3.0);
        let r = q * Dd::new(3.0) - Dd::ONE;
        assert!(r.to_f64().abs() < 1e-30);
    }

    #[test]
    fn unit_points_are_unimodular() {
        for k in 0..50 {
            let z = DdComplex::unit(0.123 * k as f64);
            let d = Dd::ONE - z.norm_sqr();
            assert!(d.to_f64().abs() < 1e-30);
        }
    }

    #[test]
    fn roots_of_unity_are_accurate() {
        let z = DdComplex::root_of_unity(1, 6);
        assert!((z.re - Dd::new(0.5)).to_f64().abs() < 1e-31);
        let w = DdComplex::root_of_unity(3, 4);
        assert!((w.im + Dd::ONE).to_f64().abs() < 1e-31);
        let mut acc = DdComplex::ONE;
        let step = DdComplex::root_of_unity(1, 17);
        for _ in 0..17 {
            acc = acc * step;
        }
        assert!((acc - DdComplex::ONE).norm().to_f64() < 1e-30);
    }

    #[test]
    fn one_minus_modulus_resolves_tiny_gaps() {
        let z = DdComplex::new(Dd::ONE - Dd::new(1e-25), Dd::ZERO);
        let g = z.one_minus_modulus().to_f64();
        assert!((g - 1e-25).abs() < 1e-38);
    }
}
