use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::Float;

use super::log10_abs;
use crate::error::{Error, Result};

/// Complex number with arbitrary-precision real and imaginary parts.
///
/// Binary operations produce results at the larger of the two operand
/// precisions.
#[derive(Clone, PartialEq)]
pub struct ApComplex {
    pub re: Float,
    pub im: Float,
}

impl ApComplex {
    pub fn new(re: Float, im: Float) -> Self {
        ApComplex { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        ApComplex {
            re: Float::new(bits),
            im: Float::new(bits),
        }
    }

    pub fn from_f64(re: f64, im: f64, bits: u32) -> Self {
        ApComplex {
            re: Float::with_val(bits, re),
            im: Float::with_val(bits, im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        ApComplex { re, im }
    }

    /// Parses a decimal literal pair exactly (to the given precision).
    pub fn parse(re: &str, im: &str, bits: u32) -> Result<Self> {
        let p = |s: &str| {
            Float::parse(s)
                .map(|v| Float::with_val(bits, v))
                .map_err(|e| Error::InvalidInput(format!("bad number {s:?}: {e}")))
        };
        Ok(ApComplex {
            re: p(re)?,
            im: p(im)?,
        })
    }

    /// `e^{i theta}` at `bits` precision.
    pub fn cis(theta: &Float, bits: u32) -> Self {
        let t = Float::with_val(bits, theta);
        let (s, c) = t.sin_cos(Float::new(bits));
        ApComplex { re: c, im: s }
    }

    pub fn i(bits: u32) -> Self {
        Self::from_f64(0.0, 1.0, bits)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Copy rounded (or extended) to `bits`.
    pub fn with_prec(&self, bits: u32) -> Self {
        ApComplex {
            re: Float::with_val(bits, &self.re),
            im: Float::with_val(bits, &self.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Returns `self` if finite, otherwise an overflow error tagged with `ctx`.
    pub fn finite_or(self, ctx: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::Overflow(ctx))
        }
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    /// Squared modulus; cheaper than `abs` for comparisons.
    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let a = Float::with_val(p, self.re.square_ref());
        let b = Float::with_val(p, self.im.square_ref());
        a + b
    }

    pub fn arg(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.im.atan2_ref(&self.re))
    }

    pub fn log10_abs(&self) -> f64 {
        log10_abs(&self.abs())
    }

    pub fn conj(&self) -> Self {
        ApComplex {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let n = self.norm_sqr();
        ApComplex {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        }
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec().max(k.prec());
        ApComplex {
            re: Float::with_val(p, &self.re * k),
            im: Float::with_val(p, &self.im * k),
        }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        let p = self.prec();
        ApComplex {
            re: Float::with_val(p, &self.re * k),
            im: Float::with_val(p, &self.im * k),
        }
    }

    pub fn div_u64(&self, k: u64) -> Self {
        let p = self.prec();
        ApComplex {
            re: Float::with_val(p, &self.re / k),
            im: Float::with_val(p, &self.im / k),
        }
    }

    pub fn mul_i(&self) -> Self {
        ApComplex {
            re: Float::with_val(self.im.prec(), -&self.im),
            im: self.re.clone(),
        }
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = Float::with_val(p, &self.im).sin_cos(Float::new(p));
        ApComplex {
            re: Float::with_val(p, &m * &c),
            im: m * s,
        }
    }

    /// Principal logarithm; `-inf` real part for zero.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        ApComplex {
            re: self.abs().ln(),
            im: Float::with_val(p, self.arg()),
        }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return ApComplex::zero(p);
        }
        let r = self.abs();
        // sqrt((r + |re|) / 2) on the dominant component avoids cancellation
        let t = Float::with_val(p, &r + Float::with_val(p, self.re.abs_ref())) / 2u32;
        let t = t.sqrt();
        let half_im = Float::with_val(p, &self.im / 2u32);
        if !self.re.is_sign_negative() {
            let im = Float::with_val(p, &half_im / &t);
            ApComplex { re: t, im }
        } else {
            let re = Float::with_val(p, &half_im / &t).abs();
            let im = if self.im.is_sign_negative() { -t } else { t };
            ApComplex { re, im }
        }
    }

    /// Principal power `self^e` for real `e`; zero maps to zero for `e > 0`.
    pub fn powf(&self, e: &Float) -> Self {
        if self.is_zero() {
            return ApComplex::zero(self.prec());
        }
        self.ln().scale(e).exp()
    }

    /// Low-precision copy, for geometry and reporting.
    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Decimal rendering with `sig` significant digits per component.
    pub fn to_string_sig(&self, sig: usize) -> (String, String) {
        (fmt_float(&self.re, sig), fmt_float(&self.im, sig))
    }
}

/// Scientific decimal rendering of a float with `sig` significant digits.
pub(crate) fn fmt_float(x: &Float, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix(10, Some(sig.max(1)));
    // rug renders "1.234e-5" or "1.234"; normalise the exponent marker
    s.replace('@', "e")
}

impl fmt::Debug for ApComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, i) = self.to_string_sig(20);
        write!(f, "({r}, {i})")
    }
}

impl fmt::Display for ApComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(16);
        let (r, i) = self.to_string_sig(sig);
        if i.starts_with('-') {
            write!(f, "{r}{i}i")
        } else {
            write!(f, "{r}+{i}i")
        }
    }
}

impl<'a> Add<&'a ApComplex> for &'a ApComplex {
    type Output = ApComplex;
    fn add(self, o: &ApComplex) -> ApComplex {
        let p = self.prec().max(o.prec());
        ApComplex {
            re: Float::with_val(p, &self.re + &o.re),
            im: Float::with_val(p, &self.im + &o.im),
        }
    }
}

impl<'a> Sub<&'a ApComplex> for &'a ApComplex {
    type Output = ApComplex;
    fn sub(self, o: &ApComplex) -> ApComplex {
        let p = self.prec().max(o.prec());
        ApComplex {
            re: Float::with_val(p, &self.re - &o.re),
            im: Float::with_val(p, &self.im - &o.im),
        }
    }
}

impl<'a> Mul<&'a ApComplex> for &'a ApComplex {
    type Output = ApComplex;
    fn mul(self, o: &ApComplex) -> ApComplex {
        let p = self.prec().max(o.prec());
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let ad = Float::with_val(p, &self.re * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        ApComplex {
            re: ac - bd,
            im: ad + bc,
        }
    }
}

impl<'a> Div<&'a ApComplex> for &'a ApComplex {
    type Output = ApComplex;
    fn div(self, o: &ApComplex) -> ApComplex {
        let p = self.prec().max(o.prec());
        let n = o.norm_sqr();
        let ac = Float::with_val(p, &self.re * &o.re);
        let bd = Float::with_val(p, &self.im * &o.im);
        let bc = Float::with_val(p, &self.im * &o.re);
        let ad = Float::with_val(p, &self.re * &o.im);
        ApComplex {
            re: (ac + bd) / &n,
            im: (bc - ad) / &n,
        }
    }
}

impl Neg for &ApComplex {
    type Output = ApComplex;
    fn neg(self) -> ApComplex {
        ApComplex {
            re: Float::with_val(self.re.prec(), -&self.re),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }
}

impl Neg for ApComplex {
    type Output = ApComplex;
    fn neg(self) -> ApComplex {
        ApComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ApComplex> for ApComplex {
            type Output = ApComplex;
            fn $m(self, o: ApComplex) -> ApComplex {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a ApComplex> for ApComplex {
            type Output = ApComplex;
            fn $m(self, o: &ApComplex) -> ApComplex {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<ApComplex> for &'a ApComplex {
            type Output = ApComplex;
            fn $m(self, o: ApComplex) -> ApComplex {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&ApComplex> for ApComplex {
    fn add_assign(&mut self, o: &ApComplex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&ApComplex> for ApComplex {
    fn sub_assign(&mut self, o: &ApComplex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&ApComplex> for ApComplex {
    fn mul_assign(&mut self, o: &ApComplex) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: u32 = 200;

    fn c(re: f64, im: f64) -> ApComplex {
        ApComplex::from_f64(re, im, B)
    }

    fn close(a: &ApComplex, b: &ApComplex, tol: f64) -> bool {
        (a - b).abs().to_f64() <= tol
    }

    #[test]
    fn field_operations() {
        let a = c(1.5, -2.0);
        let b = c(-0.25, 3.0);
        let q = &a / &b;
        assert!(close(&(&q * &b), &a, 1e-55));
        assert!(close(&(&a * &a.recip()), &c(1.0, 0.0), 1e-55));
        assert!(close(&(&(&a + &b) - &b), &a, 1e-55));
    }

    #[test]
    fn sqrt_is_principal_on_every_quadrant() {
        for &(re, im) in &[(4.0, 0.0), (-4.0, 0.0), (3.0, -4.0), (-3.0, 4.0), (-3.0, -4.0), (0.0, 2.0)] {
            let z = c(re, im);
            let r = z.sqrt();
            assert!(close(&r.square(), &z, 1e-50), "sqrt({re},{im})");
            assert!(!r.re.is_sign_negative(), "principal branch for ({re},{im})");
        }
    }

    #[test]
    fn exp_log_inverse() {
        let z = c(0.3, 2.9);
        assert!(close(&z.ln().exp(), &z, 1e-55));
        let w = c(-1.0, -1e-30);
        assert!(w.ln().im.to_f64() < 0.0);
    }

    #[test]
    fn powf_cube_root() {
        let z = c(-8.0, 0.0);
        let third = Float::with_val(B, 1) / 3u32;
        let r = z.powf(&third);
        // principal cube root of -8 is 2 e^{i pi/3}
        assert!(close(&r, &c(1.0, 3f64.sqrt()), 1e-14));
    }

    #[test]
    fn formatting_has_requested_digits() {
        let z = c(-0.578616519668478, 0.0);
        let (r, i) = z.to_string_sig(6);
        assert!(r.starts_with("-5.78617"), "{r}");
        assert_eq!(i, "0");
    }
}
