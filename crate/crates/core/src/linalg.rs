//! Determinants of Hankel-type minors with a precision-doubling self check.
//!
//! A minor is described by row and column index sets into a single sequence
//! `s`, with entry `(j, k) = s[rows[j] + cols[k]]`. Tau functions use
//! `s = (phi, phi', phi'', ...)`, the cubic ensemble uses the moments.

use crate::error::{Error, Result};
use crate::mp::{agreement_digits, ApComplex, PrecCtx};

/// Determinant by LU factorisation with partial pivoting at `bits`.
pub fn det_lu(mut m: Vec<Vec<ApComplex>>, bits: u32) -> ApComplex {
    let n = m.len();
    let mut det = ApComplex::from_f64(1.0, 0.0, bits);
    for k in 0..n {
        let mut piv = k;
        let mut best = m[k][k].norm_sqr();
        for (r, row) in m.iter().enumerate().skip(k + 1) {
            let v = row[k].norm_sqr();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best.is_zero() {
            return ApComplex::zero(bits);
        }
        if piv != k {
            m.swap(piv, k);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det = &det * &pivot;
        let inv = pivot.recip();
        let (top, rest) = m.split_at_mut(k + 1);
        let prow = &top[k];
        for row in rest.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let l = &row[k] * &inv;
            for c in (k + 1)..n {
                let t = &l * &prow[c];
                row[c] -= &t;
            }
        }
    }
    det
}

/// Row and column index sets of one minor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorSpec {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorSpec {
    /// Square minor with the leading columns `0..rows.len()`.
    pub fn leading(rows: Vec<usize>) -> Self {
        let cols = (0..rows.len()).collect();
        MinorSpec { rows, cols }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Largest sequence index touched.
    pub fn max_index(&self) -> usize {
        match (self.rows.iter().max(), self.cols.iter().max()) {
            (Some(r), Some(c)) => r + c,
            _ => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if self.rows.len() != self.cols.len() {
            return Err(Error::InvalidInput("minor must be square".into()));
        }
        if !increasing(&self.rows) || !increasing(&self.cols) {
            return Err(Error::InvalidInput("minor indices must be strictly increasing".into()));
        }
        Ok(())
    }

    fn matrix(&self, seq: &[ApComplex], bits: u32) -> Vec<Vec<ApComplex>> {
        self.rows
            .iter()
            .map(|r| self.cols.iter().map(|c| seq[r + c].with_prec(bits)).collect())
            .collect()
    }
}

/// Decimal digits of LU padding for an `n x n` Hankel minor: `ceil(5 n log10 n)`.
pub fn lu_padding(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        (5.0 * n as f64 * (n as f64).log10()).ceil() as u32
    }
}

/// A minor evaluated at two precisions.
#[derive(Debug, Clone)]
pub struct CheckedMinor {
    /// Value from the higher-precision evaluation, rounded to the caller's context.
    pub value: ApComplex,
    /// Leading digits shared by the two evaluations.
    pub agreement: f64,
}

/// Evaluates every minor at `ctx + pad + extra` digits and again at doubled
/// digits, sharing one sequence computed at the higher precision.
pub fn eval_minors_checked<F>(
    specs: &[MinorSpec],
    ctx: &PrecCtx,
    extra: u32,
    make_seq: &F,
) -> Result<Vec<CheckedMinor>>
where
    F: Fn(&PrecCtx, usize) -> Result<Vec<ApComplex>>,
{
    let size = specs.iter().map(MinorSpec::size).max().unwrap_or(0);
    let need = specs.iter().map(MinorSpec::max_index).max().unwrap_or(0);
    let pad = lu_padding(size) + extra;
    let lo = ctx.padded(pad);
    let hi = ctx.doubled().padded(pad);
    let seq = make_seq(&hi, need)?;
    if seq.len() <= need {
        return Err(Error::InternalConsistency("minor sequence too short".into()));
    }
    specs
        .iter()
        .map(|spec| {
            if spec.size() == 0 {
                return Ok(CheckedMinor {
                    value: ctx.one(),
                    agreement: f64::INFINITY,
                });
            }
            let v_lo = det_lu(spec.matrix(&seq, lo.bits()), lo.bits());
            let v_hi = det_lu(spec.matrix(&seq, hi.bits()), hi.bits());
            if !v_hi.is_finite() || !v_lo.is_finite() {
                return Err(Error::Overflow("determinant"));
            }
            let agreement = agreement_digits(&v_lo, &v_hi);
            Ok(CheckedMinor {
                value: v_hi.with_prec(ctx.bits()),
                agreement,
            })
        })
        .collect()
}

/// Outcome of inspecting one round of checked minors.
pub enum Verdict {
    Accept,
    Retry,
    Fail(Error),
}

const MAX_ATTEMPTS: usize = 4;

/// Evaluates minors, raising precision until each reaches `ctx.digits()`
/// agreeing digits.
///
/// `inspect` sees every round before the precision verdict and may end the
/// computation with a mathematical error (pole, exceptional point). A minor
/// whose agreement does not improve when precision is raised is treated as
/// vanishing identically and reported through `vanished(index)`.
pub fn eval_minors_adaptive<F, I, V>(
    specs: &[MinorSpec],
    ctx: &PrecCtx,
    make_seq: &F,
    inspect: I,
    vanished: V,
) -> Result<Vec<ApComplex>>
where
    F: Fn(&PrecCtx, usize) -> Result<Vec<ApComplex>>,
    I: Fn(&[CheckedMinor]) -> Verdict,
    V: Fn(usize) -> Error,
{
    for s in specs {
        s.validate()?;
    }
    let want = ctx.digits() as f64;
    let mut extra = 0u32;
    let mut previous: Option<(Vec<f64>, u32)> = None;
    for _ in 0..MAX_ATTEMPTS {
        let round = eval_minors_checked(specs, ctx, extra, make_seq)?;
        match inspect(&round) {
            Verdict::Fail(e) => return Err(e),
            Verdict::Accept => return Ok(round.into_iter().map(|m| m.value).collect()),
            Verdict::Retry => {}
        }
        let worst = round.iter().map(|m| m.agreement).fold(f64::INFINITY, f64::min);
        if worst >= want {
            return Ok(round.into_iter().map(|m| m.value).collect());
        }
        if let Some((prev, prev_extra)) = &previous {
            let gained = (extra - prev_extra) as f64;
            for (i, m) in round.iter().enumerate() {
                if m.agreement < want && m.agreement < prev[i] + 0.5 * gained {
                    return Err(vanished(i));
                }
            }
        }
        previous = Some((round.iter().map(|m| m.agreement).collect(), extra));
        extra += (want - worst).ceil() as u32 + 10;
    }
    let worst = eval_minors_checked(specs, ctx, extra, make_seq)?
        .iter()
        .map(|m| m.agreement)
        .fold(f64::INFINITY, f64::min);
    Err(insufficient(ctx, worst))
}

pub(crate) fn insufficient(ctx: &PrecCtx, achieved: f64) -> Error {
    let achieved = achieved.max(0.0).floor() as u32;
    Error::InsufficientPrecision {
        digits: ctx.digits(),
        achieved,
        suggested: ctx.digits() + ctx.digits().saturating_sub(achieved) + 10,
    }
}
