//! Airy functions by their entire Maclaurin series.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use rug::Float;

use super::{log10_abs, ApComplex, PrecCtx};
use crate::error::{Error, Result};

/// `Ai(0), Ai'(0), Bi(0), Bi'(0)` and `pi` at one binary precision.
#[derive(Debug, Clone)]
pub struct AiryConstants {
    pub bits: u32,
    pub ai0: Float,
    pub aip0: Float,
    pub bi0: Float,
    pub bip0: Float,
    pub pi: Float,
}

impl AiryConstants {
    fn compute(bits: u32) -> Result<Self> {
        // extra bits so the cached values are exact to the requested precision
        let w = bits + 32;
        let pi = Float::with_val(w, rug::float::Constant::Pi);
        let three = Float::with_val(w, 3);
        let sqrt3 = three.clone().sqrt();
        let gamma_third = (Float::with_val(w, 1) / &three).gamma();
        // reflection: Gamma(1/3) Gamma(2/3) = 2 pi / sqrt 3
        let gamma_two_thirds = Float::with_val(w, 2 * &pi) / (Float::with_val(w, &sqrt3 * &gamma_third));
        let cbrt3 = three.clone().cbrt();
        // Ai(0) = 3^{-2/3} / Gamma(2/3), -Ai'(0) = 3^{-1/3} / Gamma(1/3)
        let ai0 = Float::with_val(w, 1) / Float::with_val(w, cbrt3.square_ref()) / &gamma_two_thirds;
        let c2 = Float::with_val(w, 1) / &cbrt3 / &gamma_third;
        let aip0 = Float::with_val(w, -&c2);
        let bi0 = Float::with_val(w, &ai0 * &sqrt3);
        let bip0 = Float::with_val(w, &c2 * &sqrt3);

        // Wronskian Ai Bi' - Ai' Bi = 1/pi
        let wr = Float::with_val(w, &ai0 * &bip0) - Float::with_val(w, &aip0 * &bi0);
        let resid = Float::with_val(w, &wr * &pi) - 1u32;
        if log10_abs(&resid) > -((bits as f64) * 0.30103 - 2.0) {
            return Err(Error::InternalConsistency(format!(
                "Airy constants fail the Wronskian check at {bits} bits"
            )));
        }
        let r = |x: Float| Float::with_val(bits, x);
        Ok(AiryConstants {
            bits,
            ai0: r(ai0),
            aip0: r(aip0),
            bi0: r(bi0),
            bip0: r(bip0),
            pi: r(pi),
        })
    }

    /// Per-thread, write-once cache keyed by precision.
    pub fn get(bits: u32) -> Result<Rc<AiryConstants>> {
        thread_local! {
            static CACHE: RefCell<HashMap<u32, Rc<AiryConstants>>> = RefCell::new(HashMap::new());
        }
        if let Some(c) = CACHE.with(|c| c.borrow().get(&bits).cloned()) {
            return Ok(c);
        }
        let fresh = Rc::new(Self::compute(bits)?);
        CACHE.with(|c| c.borrow_mut().insert(bits, fresh.clone()));
        Ok(fresh)
    }
}

/// `Ai(u), Ai'(u), Bi(u), Bi'(u)`.
#[derive(Debug, Clone)]
pub struct AiryValues {
    pub ai: ApComplex,
    pub ai_prime: ApComplex,
    pub bi: ApComplex,
    pub bi_prime: ApComplex,
}

impl AiryValues {
    fn with_prec(&self, bits: u32) -> Self {
        AiryValues {
            ai: self.ai.with_prec(bits),
            ai_prime: self.ai_prime.with_prec(bits),
            bi: self.bi.with_prec(bits),
            bi_prime: self.bi_prime.with_prec(bits),
        }
    }
}

/// Decimal digits lost to cancellation in the series at `|u|`, overestimated
/// as `2 |u|^{3/2} log10 e`.
fn cancellation_padding(u: &ApComplex) -> u32 {
    let r = u.abs().to_f64();
    (2.0 * r.powf(1.5) * std::f64::consts::LOG10_E).ceil() as u32
}

/// Airy values correct to `ctx.digits()` relative digits.
///
/// The series is summed at padded precision and then re-summed at doubled
/// digits; disagreement beyond `10^{-(digits-2)}` is reported as an internal
/// consistency failure.
pub fn airy_pair(u: &ApComplex, ctx: &PrecCtx) -> Result<AiryValues> {
    if !u.is_finite() {
        return Err(Error::InvalidInput("Airy argument must be finite".into()));
    }
    let pad = cancellation_padding(u);
    let lo = airy_pair_at(u, ctx.padded(pad).bits())?;
    let hi = airy_pair_at(u, ctx.doubled().padded(pad).bits())?;

    let tol = ctx.digits() as f64 - 2.0;
    let pair_agree = |a: &ApComplex, ap: &ApComplex, b: &ApComplex, bp: &ApComplex| {
        let diff = (a - b).abs() + (ap - bp).abs();
        let scale = b.abs() + bp.abs();
        log10_abs(&scale) - log10_abs(&diff)
    };
    let a_ok = pair_agree(&lo.ai, &lo.ai_prime, &hi.ai, &hi.ai_prime);
    let b_ok = pair_agree(&lo.bi, &lo.bi_prime, &hi.bi, &hi.bi_prime);
    if a_ok < tol || b_ok < tol {
        return Err(Error::InternalConsistency(format!(
            "Airy series at |u| = {:.3} agrees to only {:.1} digits under precision doubling",
            u.abs().to_f64(),
            a_ok.min(b_ok)
        )));
    }
    Ok(hi.with_prec(ctx.bits()))
}

/// Raw series evaluation at a fixed binary precision, no self check.
pub fn airy_pair_at(u: &ApComplex, bits: u32) -> Result<AiryValues> {
    let k = AiryConstants::get(bits)?;
    let u = u.with_prec(bits);
    let u3 = &u.square() * &u;

    // f = sum a_k, g = sum b_k and their derivatives f' = sum c_k, g' = sum d_k
    let one = ApComplex::from_f64(1.0, 0.0, bits);
    let mut a = one.clone();
    let mut b = u.clone();
    let mut c = u.square().div_u64(2);
    let mut d = one.clone();
    let mut f = a.clone();
    let mut g = b.clone();
    let mut fp = c.clone();
    let mut gp = d.clone();

    let eps = -(bits as f64) / super::LOG2_10 - 2.0;
    let mut max_term = [f.log10_abs(), g.log10_abs(), fp.log10_abs(), gp.log10_abs()]
        .into_iter()
        .fold(0.0f64, f64::max);
    let r3 = u.abs().to_f64().powi(3);

    for kk in 1u64.. {
        let t = 3 * kk;
        a = (&a * &u3).div_u64((t - 1) * t);
        b = (&b * &u3).div_u64(t * (t + 1));
        d = (&d * &u3).div_u64(t * (t - 2));
        if kk >= 2 {
            c = (&c * &u3).div_u64((t - 1) * (t - 3));
            fp += &c;
        }
        f += &a;
        g += &b;
        gp += &d;

        let terms = [a.log10_abs(), b.log10_abs(), c.log10_abs(), d.log10_abs()];
        let biggest = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        max_term = max_term.max(biggest);
        // tail is dominated by the last term once the term ratio drops below 1/2
        let ratio_ok = 9.0 * (kk as f64) * (kk as f64) >= 4.0 * r3 + 1.0;
        if ratio_ok && (biggest < max_term + eps || biggest == f64::NEG_INFINITY) {
            break;
        }
        if kk > 1_000_000 {
            return Err(Error::InternalConsistency("Airy series failed to converge".into()));
        }
    }

    let c1 = ApComplex::from_real(k.ai0.clone());
    let c2 = ApComplex::from_real(Float::with_val(bits, -&k.aip0));
    let sqrt3 = Float::with_val(bits, 3).sqrt();
    let ai = &(&c1 * &f) - &(&c2 * &g);
    let ai_prime = &(&c1 * &fp) - &(&c2 * &gp);
    let bi = (&(&c1 * &f) + &(&c2 * &g)).scale(&sqrt3);
    let bi_prime = (&(&c1 * &fp) + &(&c2 * &gp)).scale(&sqrt3);
    Ok(AiryValues {
        ai: ai.finite_or("airy series")?,
        ai_prime: ai_prime.finite_or("airy series")?,
        bi: bi.finite_or("airy series")?,
        bi_prime: bi_prime.finite_or("airy series")?,
    })
}
