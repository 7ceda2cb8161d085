//! Moments, Hankel determinants and recurrence coefficients of the monic
//! orthogonal polynomials for the cubic weight `exp(-N V(s; t))` on
//! `Gamma(lambda)`, with `V(s; t) = -s^3/3 + s t`.
//!
//! Throughout, `t` is the weight parameter. The Painleve variable is
//! `z = -(sqrt2 N)^{2/3} t`.

use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::linalg::{eval_minors_adaptive, CheckedMinor, MinorSpec, Verdict};
use crate::mp::{jet_from_coefficients, ApComplex, Lambda, PrecCtx, SeedSpec};
use crate::tau::{qps_from_tau, tau, Route, SolutionJet};

fn check_scale(n_scale: f64) -> Result<()> {
    if n_scale.is_finite() && n_scale > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("N must be positive, got {n_scale}")))
    }
}

/// `(sqrt2 N)^{2/3}` at `bits`.
fn z_factor(n_scale: f64, bits: u32) -> Float {
    let s = Float::with_val(bits, 2).sqrt() * Float::with_val(bits, n_scale);
    Float::with_val(bits, s.square_ref()).cbrt()
}

/// Painleve variable `z = -(sqrt2 N)^{2/3} t` for weight parameter `t`.
pub fn z_of_t(t: &ApComplex, n_scale: f64, bits: u32) -> ApComplex {
    t.scale(&-z_factor(n_scale, bits))
}

/// Weight parameter `t = -(sqrt2 N)^{-2/3} z`.
pub fn t_of_z(z: &ApComplex, n_scale: f64, bits: u32) -> ApComplex {
    z.scale(&-z_factor(n_scale, bits).recip())
}

/// Moments `m_0 .. m_k_max` at the precision of `ctx`.
fn moment_seq(k_max: usize, t: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<Vec<ApComplex>> {
    let bits = ctx.bits();
    let seed = SeedSpec::from_lambda(lambda, ctx);
    let (on_ai, on_bi) = seed.contour_coefficients(ctx);
    let z = z_of_t(&t.with_prec(bits), n_scale, bits);
    let jet = jet_from_coefficients(&z, k_max.max(1), &on_ai, &on_bi, ctx)?;
    // m_k = N^{-1/3} (2/N)^{k/3} psi^(k)(z)
    let nf = Float::with_val(bits, n_scale);
    let r = (Float::with_val(bits, 2) / &nf).cbrt();
    let mut f = nf.cbrt().recip();
    let mut out = Vec::with_capacity(k_max + 1);
    for v in jet.values.iter().take(k_max + 1) {
        out.push(v.scale(&f));
        f *= &r;
    }
    Ok(out)
}

/// Moments of the cubic weight on `Gamma(lambda)`.
#[derive(Debug, Clone)]
pub struct MomentTable {
    pub t: ApComplex,
    pub n_scale: f64,
    pub lambda: Lambda,
    pub moments: Vec<ApComplex>,
}

pub fn moment_table(k_max: usize, t: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<MomentTable> {
    check_scale(n_scale)?;
    Ok(MomentTable {
        t: t.with_prec(ctx.bits()),
        n_scale,
        lambda: lambda.clone(),
        moments: moment_seq(k_max, t, n_scale, lambda, ctx)?,
    })
}

/// `m_k(t, N) = int_Gamma s^k exp(-N V(s; t)) ds` via the Airy closed form.
pub fn moment(k: usize, t: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<ApComplex> {
    Ok(moment_table(k, t, n_scale, lambda, ctx)?.moments.swap_remove(k))
}

fn exceptional(what: String, t: &ApComplex) -> Error {
    Error::ExceptionalPoint(format!("{what} vanishes at t = {}", t.to_c64()))
}

/// Hankel determinant `D_n = det[m_{i+j}]_{i,j=0..n}`, with `D_{-1} = 1`.
pub fn hankel_d(n: i64, t: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<ApComplex> {
    check_scale(n_scale)?;
    if n < -1 {
        return Err(Error::InvalidInput("hankel_d needs n >= -1".into()));
    }
    if n == -1 {
        return Ok(ctx.one());
    }
    let spec = MinorSpec::leading((0..=n as usize).collect());
    let src = |c: &PrecCtx, need: usize| moment_seq(need, t, n_scale, lambda, c);
    let mut v = eval_minors_adaptive(
        std::slice::from_ref(&spec),
        ctx,
        &src,
        |_| Verdict::Retry,
        |_| exceptional(format!("D_{n}"), t),
    )?;
    Ok(v.pop().expect("one minor"))
}

/// Recurrence data at one `n`.
#[derive(Debug, Clone)]
pub struct CoeffRecord {
    pub n: usize,
    pub n_scale: f64,
    pub t: ApComplex,
    pub lambda: Lambda,
    pub d_n: ApComplex,
    pub h_n: ApComplex,
    pub beta_n: ApComplex,
    /// `gamma_n^2`; zero for `n = 0`.
    pub gamma2_n: ApComplex,
    /// Coefficient of `s^{n-1}` in `P_n`; zero for `n = 0`.
    pub p_nn1: ApComplex,
}

/// Records for `n = 0 ..= n_max` at one `(t, N, lambda)`.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    pub t: ApComplex,
    pub n_scale: f64,
    pub lambda: Lambda,
    pub records: Vec<CoeffRecord>,
}

impl CoeffTable {
    pub fn get(&self, n: usize) -> &CoeffRecord {
        &self.records[n]
    }

    pub fn n_max(&self) -> usize {
        self.records.len() - 1
    }
}

/// Minor `det(rows 0..k-1, columns {0..k} minus {k-1})`, so that
/// `p_{k,k-1} = -minor / D_{k-1}`.
fn p_minor_spec(k: usize) -> MinorSpec {
    let mut cols: Vec<usize> = (0..k - 1).collect();
    cols.push(k);
    MinorSpec {
        rows: (0..k).collect(),
        cols,
    }
}

/// Full recurrence table. `D_0 .. D_{n_max}` are gated on relative
/// agreement; the `p` minors are gated on agreement relative to `D_{k-1}`,
/// which is the scale on which `p_{k,k-1}` is an absolute quantity.
pub fn coeff_table(n_max: usize, t: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<CoeffTable> {
    check_scale(n_scale)?;
    if !t.is_finite() {
        return Err(Error::InvalidInput("t must be finite".into()));
    }
    let mut specs: Vec<MinorSpec> = (0..=n_max).map(|k| MinorSpec::leading((0..=k).collect())).collect();
    specs.extend((1..=n_max + 1).map(p_minor_spec));
    let nd = n_max + 1;
    let want = ctx.digits() as f64;
    let src = |c: &PrecCtx, need: usize| moment_seq(need, t, n_scale, lambda, c);
    let inspect = |round: &[CheckedMinor]| {
        let d_ok = round[..nd].iter().all(|m| m.agreement >= want);
        let p_ok = round[nd..].iter().enumerate().all(|(i, m)| {
            let k = i + 1;
            let scale = if k == 1 { 0.0 } else { round[k - 2].value.log10_abs() };
            let eff = m.agreement + (scale - m.value.log10_abs()).max(0.0);
            eff >= want
        });
        if d_ok && p_ok {
            Verdict::Accept
        } else {
            Verdict::Retry
        }
    };
    let vanished = |i: usize| {
        if i < nd {
            exceptional(format!("D_{i}"), t)
        } else {
            exceptional(format!("p-minor {}", i - nd + 1), t)
        }
    };
    let v = eval_minors_adaptive(&specs, ctx, &src, inspect, vanished)?;
    let (d, pm) = v.split_at(nd);
    let one = ctx.one();
    let dm = |k: i64| -> &ApComplex {
        if k < 0 {
            &one
        } else {
            &d[k as usize]
        }
    };
    // p_{k,k-1} for k = 0 ..= n_max + 1
    let p: Vec<ApComplex> = (0..=n_max + 1)
        .map(|k| if k == 0 { ctx.zero() } else { -(&pm[k - 1] / dm(k as i64 - 1)) })
        .collect();
    let t_c = t.with_prec(ctx.bits());
    let records = (0..=n_max)
        .map(|n| {
            let ni = n as i64;
            let h_n = dm(ni) / dm(ni - 1);
            let gamma2_n = if n == 0 {
                ctx.zero()
            } else {
                &(dm(ni) * dm(ni - 2)) / &dm(ni - 1).square()
            };
            CoeffRecord {
                n,
                n_scale,
                t: t_c.clone(),
                lambda: lambda.clone(),
                d_n: dm(ni).clone(),
                h_n,
                beta_n: &p[n] - &p[n + 1],
                gamma2_n,
                p_nn1: p[n].clone(),
            }
        })
        .collect();
    Ok(CoeffTable {
        t: t_c,
        n_scale,
        lambda: lambda.clone(),
        records,
    })
}

pub fn coeffs(n: usize, t: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<CoeffRecord> {
    Ok(coeff_table(n, t, n_scale, lambda, ctx)?.records.swap_remove(n))
}

/// `Z_N = N! D_{N-1}(t, N)` and `F_N = log(Z_N) / N^2` (principal branch).
pub fn partition_free_energy(n: u32, t: &ApComplex, lambda: &Lambda, ctx: &PrecCtx) -> Result<(ApComplex, ApComplex)> {
    if n < 1 {
        return Err(Error::InvalidInput("N must be a positive integer".into()));
    }
    let d = hankel_d(n as i64 - 1, t, n as f64, lambda, ctx).map_err(|e| match e {
        Error::ExceptionalPoint(_) => Error::PartitionZero,
        other => other,
    })?;
    let fact = Float::with_val(ctx.bits(), Float::factorial(n));
    let z = d.scale(&fact);
    if z.is_zero() {
        return Err(Error::PartitionZero);
    }
    let f = z.ln().div_u64(u64::from(n) * u64::from(n));
    Ok((z, f))
}

/// Discrete string equations
/// `r1 = gamma_n^2 + gamma_{n+1}^2 + beta_n^2 - t` and
/// `r2 = gamma_n^2 (beta_n + beta_{n-1}) + n/N`.
pub fn string_residuals(n: usize, t: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<(ApComplex, ApComplex)> {
    if n < 1 {
        return Err(Error::InvalidInput("string equations need n >= 1".into()));
    }
    let tab = coeff_table(n + 1, t, n_scale, lambda, ctx)?;
    let (a, b, c) = (tab.get(n - 1), tab.get(n), tab.get(n + 1));
    let r1 = &(&(&b.gamma2_n + &c.gamma2_n) + &b.beta_n.square()) - &tab.t;
    let nn = ApComplex::from_real(Float::with_val(ctx.bits(), n) / Float::with_val(ctx.bits(), n_scale));
    let r2 = &(&b.gamma2_n * &(&b.beta_n + &a.beta_n)) + &nn;
    Ok((r1, r2))
}

/// `q_n, p_n, sigma_n` from the recurrence coefficients at
/// `t = -(sqrt2 N)^{-2/3} z`:
/// `q_n = -(N/2)^{1/3} beta_{n-1}`, `p_n = -2 (N/2)^{2/3} gamma_n^2`,
/// `sigma_n = -(N/2)^{1/3} p_{n,n-1}`.
pub fn qps_from_coeffs(n: usize, z: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<SolutionJet> {
    if n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    check_scale(n_scale)?;
    let bits = ctx.bits();
    let t = t_of_z(&z.with_prec(bits), n_scale, bits);
    let tab = coeff_table(n, &t, n_scale, lambda, ctx)?;
    let c = (Float::with_val(bits, n_scale) / 2u32).cbrt();
    let c2 = Float::with_val(bits, c.square_ref());
    Ok(SolutionJet {
        n: n as i64,
        lambda: lambda.clone(),
        z: z.with_prec(bits),
        q: -tab.get(n - 1).beta_n.scale(&c),
        qprime: None,
        p: Some(-tab.get(n).gamma2_n.scale(&c2).mul_i64(2)),
        sigma: Some(-tab.get(n).p_nn1.scale(&c)),
        route: Route::Coeffs,
    })
}

/// Residuals `[q, p, sigma]` of the tau route against [`qps_from_coeffs`].
pub fn bridge_theorem(n: usize, z: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<[ApComplex; 3]> {
    let seed = SeedSpec::from_lambda(lambda, ctx);
    let cf = qps_from_coeffs(n, z, n_scale, lambda, ctx)?;
    let sol = qps_from_tau(n, z, &seed, ctx)?;
    let get = |s: &SolutionJet, k: usize| match k {
        1 => s.p.clone().expect("p is filled"),
        _ => s.sigma.clone().expect("sigma is filled"),
    };
    Ok([&sol.q - &cf.q, &get(&sol, 1) - &get(&cf, 1), &get(&sol, 2) - &get(&cf, 2)])
}

/// Rescaling relations between `N` and `N = 1`:
/// `beta_{n-1}(t, N) = N^{-1/3} beta_{n-1}(N^{2/3} t, 1)` and the analogous
/// relations for `gamma_n^2` (power `-2/3`) and `p_{n,n-1}` (power `-1/3`).
pub fn scale_relation_check(n: usize, t: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<[ApComplex; 3]> {
    if n < 1 {
        return Err(Error::InvalidInput("scale relations need n >= 1".into()));
    }
    let bits = ctx.bits();
    let nf = Float::with_val(bits, n_scale);
    let k = nf.clone().cbrt();
    let t1 = t.scale(&Float::with_val(bits, k.square_ref()));
    let a = coeff_table(n, t, n_scale, lambda, ctx)?;
    let b = coeff_table(n, &t1, 1.0, lambda, ctx)?;
    let ik = k.recip();
    let ik2 = Float::with_val(bits, ik.square_ref());
    Ok([
        &a.get(n - 1).beta_n - &b.get(n - 1).beta_n.scale(&ik),
        &a.get(n).gamma2_n - &b.get(n).gamma2_n.scale(&ik2),
        &a.get(n).p_nn1 - &b.get(n).p_nn1.scale(&ik),
    ])
}

/// Rotation relations between `lambda = 0` and `lambda = +-i`:
/// with `w = e^{2 pi lambda / 3}`,
/// `gamma_n^(0)(t)^2 = w^2 gamma_n^(lambda)(w t)^2`,
/// `beta_n^(0)(t) = w beta_n^(lambda)(w t)`,
/// `p^(0)_{n,n-1}(t) = w p^(lambda)_{n,n-1}(w t)`.
/// Returns six residuals, three for `+i` then three for `-i`.
pub fn rotation_check(n: usize, t: &ApComplex, n_scale: f64, ctx: &PrecCtx) -> Result<Vec<ApComplex>> {
    let bits = ctx.bits();
    let base = coeff_table(n, t, n_scale, &Lambda::zero(bits), ctx)?;
    let r0 = base.get(n);
    let mut out = Vec::with_capacity(6);
    for sign in [1i32, -1] {
        // e^{2 pi (s i) / 3}
        let theta = Float::with_val(bits, ctx.pi() * (2 * sign)) / 3u32;
        let w = ApComplex::cis(&theta, bits);
        let rot = coeff_table(n, &(t * &w), n_scale, &Lambda::pm_i(sign, bits), ctx)?;
        let r = rot.get(n);
        out.push(&r0.gamma2_n - &(&w.square() * &r.gamma2_n));
        out.push(&r0.beta_n - &(&w * &r.beta_n));
        out.push(&r0.p_nn1 - &(&w * &r.p_nn1));
    }
    Ok(out)
}

/// Relative residual of
/// `D_n(-t, N) = 2^{n(n+1)/3} N^{-(n+1)^2/3} tau_{n+1}(z)`, `z = (sqrt2 N)^{2/3} t`.
pub fn dtau_relation_check(n: usize, t: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<ApComplex> {
    check_scale(n_scale)?;
    let bits = ctx.bits();
    let d = hankel_d(n as i64, &-t, n_scale, lambda, ctx)?;
    let z = t.scale(&z_factor(n_scale, bits));
    let seed = SeedSpec::from_lambda(lambda, ctx);
    let tn = tau(n + 1, &z, &seed, ctx)?;
    let nn = n as i64;
    let e2 = Float::with_val(bits, (nn * (nn + 1)) as f64) / 3u32;
    let en = Float::with_val(bits, -((nn + 1) * (nn + 1)) as f64) / 3u32;
    let pref = Float::with_val(bits, 2).pow(&e2) * Float::with_val(bits, n_scale).pow(&en);
    let rhs = tn.scale(&pref);
    Ok(&(&d - &rhs) / &rhs)
}

/// Central difference of a scalar function of `t` at step `h = 10^{-digits/3}`.
pub fn fd_derivative<F>(f: F, t: &ApComplex, ctx: &PrecCtx) -> Result<ApComplex>
where
    F: Fn(&ApComplex) -> Result<ApComplex>,
{
    let h = ApComplex::from_real(ctx.tol_frac(1.0 / 3.0));
    let fp = f(&(t + &h))?;
    let fm = f(&(t - &h))?;
    Ok((&fp - &fm) / &h.mul_i64(2))
}

fn rel(a: &ApComplex, b: &ApComplex) -> ApComplex {
    let s = a.abs().max(&b.abs()).clone();
    let diff = a - b;
    if s.is_zero() {
        diff
    } else {
        diff.scale(&s.recip())
    }
}

/// Relative residual of `h_n'(t) = -N beta_n(t) h_n(t)`.
pub fn der_hn_residual(n: usize, t: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<ApComplex> {
    let dh = fd_derivative(|s| Ok(coeffs(n, s, n_scale, lambda, ctx)?.h_n), t, ctx)?;
    let r = coeffs(n, t, n_scale, lambda, ctx)?;
    let rhs = -(&r.beta_n * &r.h_n).scale(&Float::with_val(ctx.bits(), n_scale));
    Ok(rel(&dh, &rhs))
}

/// Relative residual of `(log D_{n-1})'(t) = N p_{n,n-1}(t)`.
pub fn der_lnd_residual(n: usize, t: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<ApComplex> {
    if n < 1 {
        return Err(Error::InvalidInput("need n >= 1".into()));
    }
    let dd = fd_derivative(|s| hankel_d(n as i64 - 1, s, n_scale, lambda, ctx), t, ctx)?;
    let d = hankel_d(n as i64 - 1, t, n_scale, lambda, ctx)?;
    let r = coeffs(n, t, n_scale, lambda, ctx)?;
    Ok(rel(&(&dd / &d), &r.p_nn1.scale(&Float::with_val(ctx.bits(), n_scale))))
}

/// Relative residual of `N h_n(t) = p_{n,n-1}'(t) h_{n-1}(t)`.
pub fn der_pn_residual(n: usize, t: &ApComplex, n_scale: f64, lambda: &Lambda, ctx: &PrecCtx) -> Result<ApComplex> {
    if n < 1 {
        return Err(Error::InvalidInput("need n >= 1".into()));
    }
    let dp = fd_derivative(|s| Ok(coeffs(n, s, n_scale, lambda, ctx)?.p_nn1), t, ctx)?;
    let tab = coeff_table(n, t, n_scale, lambda, ctx)?;
    let lhs = tab.get(n).h_n.scale(&Float::with_val(ctx.bits(), n_scale));
    Ok(rel(&lhs, &(&dp * &tab.get(n - 1).h_n)))
}

/// Residual of `beta_n - beta_{n-1} = -(beta_n' + beta_{n-1}') gamma_n^2 / n`
/// at `N = 1`, `lambda = 0`.
pub fn beta_difference_residual(n: usize, t: &ApComplex, ctx: &PrecCtx) -> Result<ApComplex> {
    if n < 1 {
        return Err(Error::InvalidInput("need n >= 1".into()));
    }
    let l0 = Lambda::zero(ctx.bits());
    let pair = |s: &ApComplex| -> Result<ApComplex> {
        let tab = coeff_table(n, s, 1.0, &l0, ctx)?;
        Ok(&tab.get(n).beta_n + &tab.get(n - 1).beta_n)
    };
    let dsum = fd_derivative(pair, t, ctx)?;
    let tab = coeff_table(n, t, 1.0, &l0, ctx)?;
    let lhs = &tab.get(n).beta_n - &tab.get(n - 1).beta_n;
    let rhs = -(&dsum * &tab.get(n).gamma2_n).div_u64(n as u64);
    Ok(rel(&lhs, &rhs))
}

/// Outcome of checking
/// `D_{n+1}(t,1) = -(n+1) D_{n-1}(t,1) int_t^inf h_n(s)^2 ds` at `lambda = 0`.
#[derive(Debug, Clone)]
pub struct IntegralCheck {
    pub n: usize,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
    /// Quadrature error estimate on `[t, T]`.
    pub quad_error: f64,
    /// Bound on the neglected tail `int_T^inf`.
    pub tail_bound: f64,
}

/// Real-axis integral identity, with tanh-sinh quadrature on `[t, T]` and an
/// explicit tail bound beyond `T`.
pub fn integral_identity(n: usize, t: f64, ctx: &PrecCtx) -> Result<IntegralCheck> {
    let bits = ctx.bits();
    let l0 = Lambda::zero(bits);
    let h2 = |s: f64| -> Result<f64> {
        let r = coeffs(n, &ApComplex::from_f64(s, 0.0, bits), 1.0, &l0, ctx)?;
        Ok(r.h_n.re.to_f64().powi(2))
    };
    // h_n(s)^2 decays like exp(-(4/3) s^{3/2}); past T the integrand is below 1e-40
    let upper = t.max(0.0) + 18.0;
    let failure = std::cell::RefCell::new(None);
    let out = quadrature::double_exponential::integrate(
        |s| match h2(s) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        t,
        upper,
        1e-14,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    // on [T, inf) the integrand is monotone and log-concave-decaying faster
    // than exp(-2 sqrt(T) (s - T)), so the tail is below h^2(T) / (2 sqrt T)
    let tail_bound = h2(upper)? / (2.0 * upper.sqrt());
    let t_c = ApComplex::from_f64(t, 0.0, bits);
    let lhs = hankel_d(n as i64 + 1, &t_c, 1.0, &l0, ctx)?.re.to_f64();
    let dm1 = hankel_d(n as i64 - 1, &t_c, 1.0, &l0, ctx)?.re.to_f64();
    let rhs = -((n + 1) as f64) * dm1 * out.integral;
    Ok(IntegralCheck {
        n,
        t,
        lhs,
        rhs,
        rel_error: ((lhs - rhs) / lhs).abs(),
        quad_error: out.error_estimate,
        tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecCtx {
        PrecCtx::new(50).unwrap()
    }

    fn l(tok: &str) -> Lambda {
        Lambda::parse(tok, ctx().bits()).unwrap()
    }

    fn re(x: &ApComplex) -> f64 {
        x.to_c64().re
    }

    #[test]
    fn moments_at_origin() {
        let c = ctx();
        let z = c.zero();
        assert!((re(&moment(0, &z, 1.0, &l("0"), &c).unwrap()) - 0.3550280538878172).abs() < 1e-15);
        assert!((re(&moment(0, &z, 1.0, &l("1"), &c).unwrap()) - 0.9699546813338179).abs() < 1e-15);
        assert!(moment(2, &z, 1.0, &l("0"), &c).unwrap().abs().to_f64() < 1e-45);
        // m_0(t, 1) = Ai(t)
        let m = moment(0, &c.complex(1.0, 0.0), 1.0, &l("0"), &c).unwrap();
        assert!((re(&m) - 0.1352924163128814).abs() < 1e-15);
    }

    #[test]
    fn small_hankel_determinants() {
        let c = ctx();
        let z = c.zero();
        assert_eq!(re(&hankel_d(-1, &z, 1.0, &l("0"), &c).unwrap()), 1.0);
        assert!((re(&hankel_d(0, &z, 1.0, &l("0"), &c).unwrap()) - 0.3550280538878172).abs() < 1e-15);
        let want = -(0.2588194037928068f64.powi(2));
        assert!((re(&hankel_d(1, &z, 1.0, &l("0"), &c).unwrap()) - want).abs() < 1e-15);
    }

    #[test]
    fn coefficients_at_origin() {
        let c = ctx();
        let tab = coeff_table(2, &c.zero(), 1.0, &l("0"), &c).unwrap();
        assert!((re(&tab.get(0).beta_n) - 0.729011132947227).abs() < 1e-12);
        assert!((re(&tab.get(1).gamma2_n) + 0.5314572321).abs() < 1e-9);
        assert!((re(&tab.get(1).beta_n) - 1.152607818).abs() < 1e-8);
        assert!((re(&tab.get(1).p_nn1) + 0.729011132947227).abs() < 1e-12);
    }

    #[test]
    fn partition_function() {
        let c = ctx();
        let (z, f) = partition_free_energy(1, &c.zero(), &l("0"), &c).unwrap();
        assert!((re(&z) - 0.3550280538878172).abs() < 1e-15);
        assert!((re(&f) + 1.0355584675929300).abs() < 1e-15);
        assert!(partition_free_energy(0, &c.zero(), &l("0"), &c).is_err());
    }

    #[test]
    fn string_equations_hold() {
        let c = ctx();
        for (n, t, nn) in [(1, 0.0, 1.0), (3, 1.7, 1.0), (2, 0.5, 5.0)] {
            let (r1, r2) = string_residuals(n, &c.complex(t, 0.0), nn, &l("0"), &c).unwrap();
            assert!(r1.log10_abs() < -25.0 && r2.log10_abs() < -25.0, "n={n} t={t} {} {}", r1.log10_abs(), r2.log10_abs());
        }
    }

    #[test]
    fn bridges_scaling_rotation_dtau() {
        let c = ctx();
        for r in bridge_theorem(1, &c.zero(), 1.0, &l("0"), &c).unwrap() {
            assert!(r.log10_abs() < -25.0);
        }
        for r in bridge_theorem(3, &c.complex(1.0, -0.5), 3.0, &l("0"), &c).unwrap() {
            assert!(r.log10_abs() < -25.0);
        }
        let t = c.complex(0.7, 0.0);
        for r in scale_relation_check(3, &t, 4.0, &l("i"), &c).unwrap() {
            assert!(r.log10_abs() < -25.0);
        }
        for r in rotation_check(2, &c.complex(0.3, 0.0), 1.0, &c).unwrap() {
            assert!(r.log10_abs() < -25.0);
        }
        assert!(dtau_relation_check(3, &t, 4.0, &l("0"), &c).unwrap().log10_abs() < -25.0);
        assert!(dtau_relation_check(0, &c.zero(), 1.0, &l("0"), &c).unwrap().log10_abs() < -25.0);
    }

    #[test]
    fn proof_identities() {
        let c = ctx();
        let t = c.complex(0.4, 0.0);
        for n in 1..=3 {
            assert!(der_hn_residual(n, &t, 2.0, &l("0"), &c).unwrap().log10_abs() < -12.0);
            assert!(der_lnd_residual(n, &t, 2.0, &l("0"), &c).unwrap().log10_abs() < -12.0);
            assert!(der_pn_residual(n, &t, 2.0, &l("0"), &c).unwrap().log10_abs() < -12.0);
            assert!(beta_difference_residual(n, &t, &c).unwrap().log10_abs() < -12.0);
        }
    }

    #[test]
    fn integral_identity_small_n() {
        let c = PrecCtx::new(30).unwrap();
        for n in 0..=2 {
            let r = integral_identity(n, 0.5, &c).unwrap();
            assert!(r.rel_error < 1e-8, "n={n}: {r:?}");
        }
    }
}
