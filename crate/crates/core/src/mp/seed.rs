//! The seed function `C1 Ai(-2^{-1/3} z) + C2 Bi(-2^{-1/3} z)` and its jets.

use std::fmt;

use rug::Float;

use super::{airy_pair, ApComplex, PrecCtx};
use crate::error::{Error, Result};

/// The family parameter `lambda = C2/C1`, possibly infinite.
#[derive(Clone, PartialEq)]
pub enum Lambda {
    Finite(ApComplex),
    Infinity,
}

impl Lambda {
    pub fn zero(bits: u32) -> Self {
        Lambda::Finite(ApComplex::zero(bits))
    }

    pub fn finite(re: f64, im: f64, bits: u32) -> Self {
        Lambda::Finite(ApComplex::from_f64(re, im, bits))
    }

    /// `i` for `sign = 1`, `-i` for `sign = -1`.
    pub fn pm_i(sign: i32, bits: u32) -> Self {
        Lambda::finite(0.0, sign as f64, bits)
    }

    /// Parses `0`, `inf`, `i`, `-i`, a real literal or `a+bi` / `a-bi`.
    pub fn parse(token: &str, bits: u32) -> Result<Self> {
        let t = token.trim();
        match t {
            "inf" | "infinity" | "∞" => return Ok(Lambda::Infinity),
            "i" | "+i" => return Ok(Lambda::pm_i(1, bits)),
            "-i" => return Ok(Lambda::pm_i(-1, bits)),
            _ => {}
        }
        let (re, im) = parse_complex_literal(t)?;
        Ok(Lambda::Finite(ApComplex::parse(&re, &im, bits)?))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Lambda::Infinity)
    }

    /// Stable token for reports.
    pub fn token(&self) -> String {
        match self {
            Lambda::Infinity => "inf".into(),
            Lambda::Finite(v) => {
                let c = v.to_c64();
                if c.im == 0.0 {
                    format!("{}", c.re)
                } else if c.re == 0.0 && c.im.abs() == 1.0 {
                    if c.im > 0.0 { "i".into() } else { "-i".into() }
                } else {
                    format!("{}{:+}i", c.re, c.im)
                }
            }
        }
    }
}

impl fmt::Debug for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lambda({})", self.token())
    }
}

/// Splits `a+bi`, `a-bi`, `bi` or `a` into decimal strings.
pub(crate) fn parse_complex_literal(t: &str) -> Result<(String, String)> {
    let bad = || Error::InvalidInput(format!("cannot parse complex literal {t:?}"));
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(bad());
    }
    if let Some(body) = t.strip_suffix('i') {
        // find the sign that separates real and imaginary parts (not an exponent sign)
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            s => s,
        };
        let check = |s: &str| s.trim_start_matches('+').parse::<f64>().map_err(|_| bad());
        check(re)?;
        check(im)?;
        Ok((re.trim_start_matches('+').to_string(), im.trim_start_matches('+').to_string()))
    } else {
        t.parse::<f64>().map_err(|_| bad())?;
        Ok((t.to_string(), "0".to_string()))
    }
}

/// Seed coefficients and contour weights for one value of lambda.
///
/// Finite lambda is normalised as `(C1, C2) = (1, lambda)`, infinite lambda as
/// `(0, 1)`. Every log-derivative is independent of the normalisation, the
/// tau functions themselves are not.
#[derive(Debug, Clone)]
pub struct SeedSpec {
    pub lambda: Lambda,
    pub c1: ApComplex,
    pub c2: ApComplex,
    /// Contour weights on the rays L0, L1, L2.
    pub alpha: [ApComplex; 3],
}

impl SeedSpec {
    pub fn from_lambda(lambda: &Lambda, ctx: &PrecCtx) -> Self {
        let bits = ctx.bits();
        let pi = ctx.pi();
        let two_pi = Float::with_val(bits, 2 * &pi);
        match lambda {
            Lambda::Finite(l) => {
                let l = l.with_prec(bits);
                let a0 = l.scale(&Float::with_val(bits, pi.recip_ref()));
                let half = l.scale(&Float::with_val(bits, two_pi.recip_ref()));
                // 1/(2 pi i) = -i/(2 pi)
                let inv_2pi_i = ApComplex::new(Float::new(bits), -Float::with_val(bits, two_pi.recip_ref()));
                let a1 = &(-&half) + &inv_2pi_i;
                let a2 = &(-&half) - &inv_2pi_i;
                SeedSpec {
                    lambda: Lambda::Finite(l.clone()),
                    c1: ctx.one(),
                    c2: l,
                    alpha: [a0, a1, a2],
                }
            }
            Lambda::Infinity => {
                let inv_pi = ApComplex::from_real(Float::with_val(bits, pi.recip_ref()));
                let m_half = ApComplex::from_real(-Float::with_val(bits, two_pi.recip_ref()));
                SeedSpec {
                    lambda: Lambda::Infinity,
                    c1: ctx.zero(),
                    c2: ctx.one(),
                    alpha: [inv_pi, m_half.clone(), m_half],
                }
            }
        }
    }

    /// The same seed with both coefficients multiplied by `k != 0`.
    pub fn scaled(&self, k: &ApComplex) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::InvalidInput("seed scale must be non-zero".into()));
        }
        Ok(SeedSpec {
            lambda: self.lambda.clone(),
            c1: &self.c1 * k,
            c2: &self.c2 * k,
            alpha: self.alpha.clone(),
        })
    }

    /// Coefficients `(pi i (alpha1 - alpha2), pi alpha0)` of `(Ai, Bi)` in the
    /// moment generating function of the cubic weight on `Gamma(lambda)`.
    pub fn contour_coefficients(&self, ctx: &PrecCtx) -> (ApComplex, ApComplex) {
        let pi = ctx.pi();
        let on_ai = (&self.alpha[1] - &self.alpha[2]).mul_i().scale(&pi);
        let on_bi = self.alpha[0].scale(&pi);
        (on_ai, on_bi)
    }

    /// Checks the weight and ratio invariants to `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(format!("seed invariant violated: {m}")));
        let sum = &(&self.alpha[0] + &self.alpha[1]) + &self.alpha[2];
        if sum.abs().to_f64() > tol {
            return bad("alpha0 + alpha1 + alpha2 != 0");
        }
        match &self.lambda {
            Lambda::Finite(l) => {
                if self.c1.is_zero() {
                    return bad("c1 = 0 for finite lambda");
                }
                let ratio = &self.c2 / &self.c1;
                if (&ratio - l).abs().to_f64() > tol * (1.0 + l.abs().to_f64()) {
                    return bad("c2 / c1 != lambda");
                }
            }
            Lambda::Infinity => {
                if !self.c1.is_zero() || self.c2.is_zero() {
                    return bad("lambda = inf requires c1 = 0, c2 != 0");
                }
            }
        }
        Ok(())
    }
}

/// Derivatives `phi^(0) .. phi^(K)` of a seed at one point.
#[derive(Debug, Clone)]
pub struct AiryJet {
    pub z: ApComplex,
    pub values: Vec<ApComplex>,
}

impl AiryJet {
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, k: usize) -> &ApComplex {
        &self.values[k]
    }

    /// Largest `|phi^(k+2) + (z/2) phi^(k) + (k/2) phi^(k-1)|`, relative to
    /// the largest stored derivative.
    pub fn recursion_residual(&self) -> f64 {
        let half_z = self.z.div_u64(2);
        let mut worst = f64::NEG_INFINITY;
        let mut scale = f64::NEG_INFINITY;
        for v in &self.values {
            scale = scale.max(v.log10_abs());
        }
        for k in 0..self.values.len().saturating_sub(2) {
            let mut r = &self.values[k + 2] + &(&half_z * &self.values[k]);
            if k >= 1 {
                r += &self.values[k - 1].mul_i64(k as i64).div_u64(2);
            }
            worst = worst.max(r.log10_abs());
        }
        worst - scale
    }
}

/// Jet of `c_ai Ai(-2^{-1/3} z) + c_bi Bi(-2^{-1/3} z)` up to order `k`.
pub(crate) fn jet_from_coefficients(
    z: &ApComplex,
    k: usize,
    c_ai: &ApComplex,
    c_bi: &ApComplex,
    ctx: &PrecCtx,
) -> Result<AiryJet> {
    let bits = ctx.bits();
    let z = z.with_prec(bits);
    let m = -Float::with_val(bits, 2).cbrt().recip();
    let u = z.scale(&m);
    let v = airy_pair(&u, ctx)?;
    let phi = &(c_ai * &v.ai) + &(c_bi * &v.bi);
    let dphi = (&(c_ai * &v.ai_prime) + &(c_bi * &v.bi_prime)).scale(&m);

    let half_z = z.div_u64(2);
    let mut values = Vec::with_capacity(k + 1);
    values.push(phi);
    values.push(dphi);
    for j in 0..k.saturating_sub(1) {
        // phi^(j+2) = -(z/2) phi^(j) - (j/2) phi^(j-1)
        let mut next = -(&half_z * &values[j]);
        if j >= 1 {
            next -= &values[j - 1].mul_i64(j as i64).div_u64(2);
        }
        values.push(next);
    }
    values.truncate(k + 1);
    for v in &values {
        if !v.is_finite() {
            return Err(Error::Overflow("seed jet"));
        }
    }
    Ok(AiryJet { z, values })
}

/// Derivative jet `phi^(0) .. phi^(k)` of the seed at `z`.
pub fn seed_jet(z: &ApComplex, k: usize, seed: &SeedSpec, ctx: &PrecCtx) -> Result<AiryJet> {
    if k < 1 {
        return Err(Error::InvalidInput("jet order must be at least 1".into()));
    }
    jet_from_coefficients(z, k, &seed.c1, &seed.c2, ctx)
}

/// `|Ai(z) + s i Bi(z) - 2 e^{s pi i/3} Ai(z e^{-2 s pi i/3})|` for `s = +-1`.
pub fn rotate_lambda_identity(z: &ApComplex, sign: i32, ctx: &PrecCtx) -> Result<Float> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidInput("sign must be +1 or -1".into()));
    }
    let bits = ctx.bits();
    let s = sign as i64;
    let pi = ctx.pi();
    let left = airy_pair(z, ctx)?;
    let lhs = &left.ai + &left.bi.mul_i().mul_i64(s);
    let phase = ApComplex::cis(&(Float::with_val(bits, &pi * s) / 3u32), bits);
    let rot = ApComplex::cis(&(Float::with_val(bits, &pi * (-2 * s)) / 3u32), bits);
    let right = airy_pair(&(z * &rot), ctx)?;
    let rhs = (&phase * &right.ai).mul_i64(2);
    Ok((&lhs - &rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecCtx {
        PrecCtx::new(50).unwrap()
    }

    fn f(x: &ApComplex) -> f64 {
        x.re.to_f64()
    }

    #[test]
    fn jet_at_origin_lambda_zero() {
        let c = ctx();
        let s = SeedSpec::from_lambda(&Lambda::zero(c.bits()), &c);
        let j = seed_jet(&c.zero(), 3, &s, &c).unwrap();
        assert!((f(j.get(0)) - 0.3550280538878172).abs() < 1e-15);
        // -2^{-1/3} Ai'(0) = 0.2054251...
        assert!((f(j.get(1)) - 0.2588194037928068 / 2f64.cbrt()).abs() < 1e-15);
        assert!(j.get(2).is_zero() || j.get(2).abs().to_f64() < 1e-60);
        assert!((f(j.get(3)) + 0.3550280538878172 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn jet_at_origin_lambda_infinity() {
        let c = ctx();
        let s = SeedSpec::from_lambda(&Lambda::Infinity, &c);
        let j = seed_jet(&c.zero(), 1, &s, &c).unwrap();
        assert!((f(j.get(0)) - 0.6149266274460007).abs() < 1e-15);
        let want = -0.4482883573538264 / 2f64.cbrt();
        assert!((f(j.get(1)) - want).abs() < 1e-15);
    }

    #[test]
    fn seed_satisfies_its_ode() {
        let c = ctx();
        let s = SeedSpec::from_lambda(&Lambda::finite(0.3, -1.2, c.bits()), &c);
        let z = c.complex(1.1, -2.4);
        let j = seed_jet(&z, 2, &s, &c).unwrap();
        let r = j.get(2) + &(&z.div_u64(2) * j.get(0));
        assert!(r.log10_abs() < -45.0);
    }

    #[test]
    fn rotation_identity_examples() {
        let c = ctx();
        for (z, s) in [(c.zero(), 1), (c.complex(1.2, -0.4), -1), (c.complex(3.0, 0.0), 1)] {
            let r = rotate_lambda_identity(&z, s, &c).unwrap();
            assert!(super::super::log10_abs(&r) <= -45.0, "z={z:?} s={s}");
        }
    }

    #[test]
    fn seed_spec_invariants() {
        let c = ctx();
        for l in [Lambda::zero(c.bits()), Lambda::pm_i(1, c.bits()), Lambda::finite(2.5, 0.5, c.bits()), Lambda::Infinity] {
            let s = SeedSpec::from_lambda(&l, &c);
            s.validate(1e-40).unwrap();
        }
        let s = SeedSpec::from_lambda(&Lambda::Infinity, &c);
        assert!((s.alpha[0].re.to_f64() - 1.0 / std::f64::consts::PI).abs() < 1e-16);
        // finite lambda: the contour combination is exactly Ai + lambda Bi
        let s = SeedSpec::from_lambda(&Lambda::finite(1.0, 0.0, c.bits()), &c);
        let (a, b) = s.contour_coefficients(&c);
        assert!((&a - &c.one()).abs().to_f64() < 1e-45);
        assert!((&b - &c.one()).abs().to_f64() < 1e-45);
    }

    #[test]
    fn lambda_tokens() {
        let b = 100;
        assert!(Lambda::parse("inf", b).unwrap().is_infinite());
        assert_eq!(Lambda::parse("-i", b).unwrap().token(), "-i");
        assert_eq!(Lambda::parse("1.5-2i", b).unwrap().token(), "1.5-2i");
        assert_eq!(Lambda::parse("0", b).unwrap().token(), "0");
        assert_eq!(Lambda::parse("2e-3+1e+2i", b).unwrap().token(), "0.002+100i");
        assert!(Lambda::parse("1 + 2i", b).is_err());
        assert!(Lambda::parse("abc", b).is_err());
    }
}
