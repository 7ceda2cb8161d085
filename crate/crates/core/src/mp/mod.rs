//! Multi-precision scalars and the Airy seed function.
//!
//! Everything numeric in the crate is threaded through a [`PrecCtx`], which
//! fixes the number of decimal digits a caller is promised. Internally each
//! context carries guard digits; operations that suffer cancellation pad the
//! working precision further and verify themselves by recomputing at doubled
//! digits.

mod airy;
mod complex;
mod seed;

pub use airy::{airy_pair, airy_pair_at, AiryConstants, AiryValues};
pub use complex::ApComplex;
pub(crate) use seed::jet_from_coefficients;
pub use seed::{rotate_lambda_identity, seed_jet, AiryJet, Lambda, SeedSpec};

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// log2(10).
pub(crate) const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working-precision contract: results are promised to `digits` decimal
/// digits, `guard` extra digits are carried internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecCtx {
    digits: u32,
    guard: u32,
}

impl PrecCtx {
    pub const MIN_DIGITS: u32 = 16;

    /// Context with the default guard `10 + ceil(digits / 10)`.
    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, Self::default_guard(digits))
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::InvalidInput(format!(
                "precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        Ok(PrecCtx { digits, guard })
    }

    pub fn default_guard(digits: u32) -> u32 {
        10 + digits.div_ceil(10)
    }

    /// Default precision for order-`n` tau-function work: `30 + 12 n` digits.
    pub fn for_order(n: usize) -> Self {
        let digits = 30 + 12 * n as u32;
        PrecCtx {
            digits,
            guard: Self::default_guard(digits),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    /// Binary precision covering digits plus guard digits.
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.digits + self.guard)
    }

    /// Same contract with `extra` additional guard digits.
    pub fn padded(&self, extra: u32) -> Self {
        PrecCtx {
            digits: self.digits,
            guard: self.guard + extra,
        }
    }

    /// The context used by precision-doubling self checks.
    pub fn doubled(&self) -> Self {
        PrecCtx {
            digits: 2 * self.digits,
            guard: self.guard,
        }
    }

    /// Context with `digits` replaced, keeping the current guard.
    pub fn with_digits(&self, digits: u32) -> Self {
        PrecCtx {
            digits: digits.max(Self::MIN_DIGITS),
            guard: self.guard,
        }
    }

    /// `10^(-k)` as a float at this context's precision.
    pub fn tol(&self, k: f64) -> Float {
        pow10(-k, self.bits())
    }

    /// `10^(-digits * frac)`, e.g. `frac = 0.5` for "half the digits".
    pub fn tol_frac(&self, frac: f64) -> Float {
        self.tol(self.digits as f64 * frac)
    }

    pub fn real(&self, v: f64) -> Float {
        Float::with_val(self.bits(), v)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), rug::float::Constant::Pi)
    }

    pub fn zero(&self) -> ApComplex {
        ApComplex::zero(self.bits())
    }

    pub fn one(&self) -> ApComplex {
        ApComplex::from_f64(1.0, 0.0, self.bits())
    }

    pub fn complex(&self, re: f64, im: f64) -> ApComplex {
        ApComplex::from_f64(re, im, self.bits())
    }
}

pub(crate) fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32 + 8
}

/// `10^e` at `bits` precision (e may be fractional).
pub fn pow10(e: f64, bits: u32) -> Float {
    let ten = Float::with_val(bits, 10);
    let ex = Float::with_val(bits, e);
    ten.pow(&ex)
}

/// Approximate `log10 |x|`, robust far outside the f64 exponent range.
/// Returns `-inf` for zero.
pub fn log10_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (mant, exp) = x.to_f64_exp();
    (mant.abs().log2() + exp as f64) / LOG2_10
}

/// Number of leading decimal digits on which `a` and `b` agree, measured
/// relative to `|b|` (zero when `b` vanishes and `a` does not).
pub fn agreement_digits(a: &ApComplex, b: &ApComplex) -> f64 {
    let diff = a - b;
    let d = diff.abs();
    let m = b.abs();
    if d.is_zero() {
        return f64::INFINITY;
    }
    if m.is_zero() {
        return 0.0;
    }
    (log10_abs(&m) - log10_abs(&d)).max(0.0)
}
