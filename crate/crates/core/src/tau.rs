//! Tau functions `tau_n(z; lambda)` as Hankel determinants of seed derivatives,
//! and the Painleve quantities read off from them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eval_minors_adaptive, eval_minors_checked, insufficient, CheckedMinor, MinorSpec, Verdict};
use crate::mp::{seed_jet, ApComplex, Lambda, PrecCtx, SeedSpec};

/// One minor `det[phi^(rows[j] + k)(z)]`.
#[derive(Debug, Clone)]
pub struct TauMinor {
    pub rows: Vec<usize>,
    pub z: ApComplex,
    pub value: ApComplex,
}

impl TauMinor {
    pub fn n(&self) -> usize {
        self.rows.len()
    }
}

/// Which computation produced a [`SolutionJet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Tau,
    Backlund,
    Coeffs,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Tau => "tau",
            Route::Backlund => "backlund",
            Route::Coeffs => "coeffs",
        }
    }
}

/// `(q_n, q_n', p_n, sigma_n)` at one point, tagged by route.
#[derive(Debug, Clone)]
pub struct SolutionJet {
    pub n: i64,
    pub lambda: Lambda,
    pub z: ApComplex,
    pub q: ApComplex,
    pub qprime: Option<ApComplex>,
    pub p: Option<ApComplex>,
    pub sigma: Option<ApComplex>,
    pub route: Route,
}

impl SolutionJet {
    /// `q' - (p - q^2 - z/2)`, when both `q'` and `p` are known.
    pub fn ham_sys_residual(&self) -> Option<ApComplex> {
        let (qp, p) = (self.qprime.as_ref()?, self.p.as_ref()?);
        Some(qp - &(&(p - &self.q.square()) - &self.z.div_u64(2)))
    }
}

/// Row sets whose minors sum to the `order`-th derivative of the leading
/// `size x size` minor.
pub fn derivative_rows(size: usize, order: usize) -> Vec<Vec<usize>> {
    let lead: Vec<usize> = (0..size).collect();
    match (size, order) {
        (0, 0) => vec![vec![]],
        (0, _) => vec![],
        (_, 0) => vec![lead],
        (_, 1) => {
            let mut r = lead;
            r[size - 1] = size;
            vec![r]
        }
        (1, 2) => vec![vec![2]],
        (_, 2) => {
            let mut a: Vec<usize> = (0..size - 2).collect();
            a.extend([size - 1, size]);
            let mut b: Vec<usize> = (0..size - 1).collect();
            b.push(size + 1);
            vec![a, b]
        }
        _ => panic!("only derivatives of order <= 2 are supported"),
    }
}

fn jet_source<'a>(
    z: &'a ApComplex,
    seed: &'a SeedSpec,
) -> impl Fn(&PrecCtx, usize) -> Result<Vec<ApComplex>> + 'a {
    move |ctx: &PrecCtx, need: usize| Ok(seed_jet(z, need.max(1), seed, ctx)?.values)
}

fn check_finite_z(z: &ApComplex) -> Result<()> {
    if z.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput("z must be finite".into()))
    }
}

/// Determinant over `rows` of the seed-derivative Hankel matrix at `z`.
pub fn tau_minor(rows: &[usize], z: &ApComplex, seed: &SeedSpec, ctx: &PrecCtx) -> Result<TauMinor> {
    check_finite_z(z)?;
    let spec = MinorSpec::leading(rows.to_vec());
    let src = jet_source(z, seed);
    let mut v = eval_minors_adaptive(
        std::slice::from_ref(&spec),
        ctx,
        &src,
        |_| Verdict::Retry,
        |_| insufficient(ctx, 0.0),
    )?;
    Ok(TauMinor {
        rows: rows.to_vec(),
        z: z.with_prec(ctx.bits()),
        value: v.pop().expect("one minor"),
    })
}

/// `tau_n(z; lambda)`, with `tau_0 = 1`.
pub fn tau(n: usize, z: &ApComplex, seed: &SeedSpec, ctx: &PrecCtx) -> Result<ApComplex> {
    let rows: Vec<usize> = (0..n).collect();
    Ok(tau_minor(&rows, z, seed, ctx)?.value)
}

/// Exact `m`-th z-derivative of `tau_n` for `m` in `{1, 2}`.
pub fn tau_derivative(n: usize, z: &ApComplex, seed: &SeedSpec, m: usize, ctx: &PrecCtx) -> Result<ApComplex> {
    if n < 1 {
        return Err(Error::InvalidInput("tau_derivative needs n >= 1".into()));
    }
    if !(1..=2).contains(&m) {
        return Err(Error::InvalidInput("derivative order must be 1 or 2".into()));
    }
    check_finite_z(z)?;
    let specs: Vec<MinorSpec> = derivative_rows(n, m).into_iter().map(MinorSpec::leading).collect();
    let src = jet_source(z, seed);
    let parts = eval_minors_adaptive(&specs, ctx, &src, |_| Verdict::Retry, |_| insufficient(ctx, 0.0))?;
    Ok(sum(parts, ctx))
}

fn sum(parts: Vec<ApComplex>, ctx: &PrecCtx) -> ApComplex {
    parts.into_iter().fold(ctx.zero(), |acc, v| &acc + &v)
}

/// `tau_{n-1}` and `tau_n` with their first two derivatives.
#[derive(Debug, Clone)]
pub struct TauData {
    pub n: usize,
    pub z: ApComplex,
    /// `[tau_{n-1}, tau_{n-1}', tau_{n-1}'']`
    pub prev: [ApComplex; 3],
    /// `[tau_n, tau_n', tau_n'']`
    pub cur: [ApComplex; 3],
}

/// Minor specs for `[tau, tau', tau'']` of sizes `n-1` and `n`, plus the
/// index ranges that sum to each entry.
fn tau_data_specs(n: usize) -> (Vec<MinorSpec>, Vec<std::ops::Range<usize>>) {
    let mut specs = Vec::new();
    let mut ranges = Vec::new();
    for size in [n - 1, n] {
        for order in 0..3 {
            let start = specs.len();
            specs.extend(derivative_rows(size, order).into_iter().map(MinorSpec::leading));
            ranges.push(start..specs.len());
        }
    }
    (specs, ranges)
}

fn assemble(n: usize, z: &ApComplex, values: &[ApComplex], ranges: &[std::ops::Range<usize>], bits: u32) -> TauData {
    let entry = |i: usize| {
        values[ranges[i].clone()]
            .iter()
            .fold(ApComplex::zero(bits), |acc, v| &acc + v)
    };
    TauData {
        n,
        z: z.with_prec(bits),
        prev: [entry(0), entry(1), entry(2)],
        cur: [entry(3), entry(4), entry(5)],
    }
}

/// Newton distance `|tau / tau'|` in decimal log, `-inf` when `tau = 0`.
fn newton_distance_log10(t: &ApComplex, dt: &ApComplex) -> f64 {
    t.log10_abs() - dt.log10_abs()
}

/// Evaluates [`TauData`], reporting a pole when `z` lies within
/// `10^{-(digits-10)}` (Newton distance) of a zero of `tau_{n-1}` or `tau_n`.
pub fn tau_data(n: usize, z: &ApComplex, seed: &SeedSpec, ctx: &PrecCtx) -> Result<TauData> {
    if n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    check_finite_z(z)?;
    let (specs, ranges) = tau_data_specs(n);
    let src = jet_source(z, seed);
    let floor = -(ctx.digits() as f64 - 10.0);
    let bits = ctx.bits();
    let at_pole = |which: usize| {
        Error::AtPole(format!(
            "tau_{} vanishes at z = {}",
            if which == 0 { n - 1 } else { n },
            z.to_c64()
        ))
    };
    let inspect = |round: &[CheckedMinor]| {
        let vals: Vec<ApComplex> = round.iter().map(|m| m.value.clone()).collect();
        let d = assemble(n, z, &vals, &ranges, bits);
        for (which, t) in [&d.prev, &d.cur].into_iter().enumerate() {
            if which == 0 && n == 1 {
                continue;
            }
            if newton_distance_log10(&t[0], &t[1]) < floor {
                return Verdict::Fail(at_pole(which));
            }
        }
        Verdict::Retry
    };
    let vanished = |i: usize| at_pole(usize::from(i >= ranges[2].end));
    let values = eval_minors_adaptive(&specs, ctx, &src, inspect, vanished)?;
    Ok(assemble(n, z, &values, &ranges, bits))
}

/// [`TauData`] at padded precision without the agreement gate; used by root
/// finders that must evaluate arbitrarily close to a zero.
pub fn tau_data_unchecked(n: usize, z: &ApComplex, seed: &SeedSpec, ctx: &PrecCtx) -> Result<TauData> {
    if n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let (specs, ranges) = tau_data_specs(n);
    let src = jet_source(z, seed);
    let vals: Vec<ApComplex> = eval_minors_checked(&specs, ctx, 0, &src)?
        .into_iter()
        .map(|m| m.value)
        .collect();
    Ok(assemble(n, z, &vals, &ranges, ctx.bits()))
}

impl TauData {
    /// `-2 (log tau)''` for a `[tau, tau', tau'']` triple.
    fn p_of(t: &[ApComplex; 3]) -> ApComplex {
        let l1 = &t[1] / &t[0];
        let l2 = &t[2] / &t[0];
        (&l2 - &l1.square()).mul_i64(-2)
    }

    /// `q_n, q_n', p_n, sigma_n`. `q'` comes from `(p_n - p_{n-1}) / 2`, so the
    /// Hamiltonian relation `q' = p - q^2 - z/2` remains a genuine check.
    pub fn solution(&self, lambda: &Lambda) -> SolutionJet {
        let sigma = &self.cur[1] / &self.cur[0];
        let sigma_prev = &self.prev[1] / &self.prev[0];
        let p = Self::p_of(&self.cur);
        let p_prev = Self::p_of(&self.prev);
        SolutionJet {
            n: self.n as i64,
            lambda: lambda.clone(),
            z: self.z.clone(),
            q: &sigma_prev - &sigma,
            qprime: Some((&p - &p_prev).div_u64(2)),
            p: Some(p),
            sigma: Some(sigma),
            route: Route::Tau,
        }
    }
}

/// `q_n = (log tau_{n-1}/tau_n)'`, `sigma_n = (log tau_n)'`, `p_n = -2 (log tau_n)''`.
pub fn qps_from_tau(n: usize, z: &ApComplex, seed: &SeedSpec, ctx: &PrecCtx) -> Result<SolutionJet> {
    Ok(tau_data(n, z, seed, ctx)?.solution(&seed.lambda))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecCtx {
        PrecCtx::new(50).unwrap()
    }

    fn seed0() -> SeedSpec {
        SeedSpec::from_lambda(&Lambda::zero(ctx().bits()), &ctx())
    }

    fn close(x: &ApComplex, want: f64, tol: f64) {
        let got = x.to_c64();
        assert!((got.re - want).abs() <= tol && got.im.abs() <= tol, "got {got}, want {want}");
    }

    #[test]
    fn derivative_row_sets() {
        assert_eq!(derivative_rows(0, 0), vec![Vec::<usize>::new()]);
        assert!(derivative_rows(0, 1).is_empty());
        assert_eq!(derivative_rows(1, 1), vec![vec![1]]);
        assert_eq!(derivative_rows(1, 2), vec![vec![2]]);
        assert_eq!(derivative_rows(3, 1), vec![vec![0, 1, 3]]);
        assert_eq!(derivative_rows(3, 2), vec![vec![0, 2, 3], vec![0, 1, 4]]);
    }

    #[test]
    fn small_minors_at_origin() {
        let c = ctx();
        let z = c.zero();
        close(&tau(0, &z, &seed0(), &c).unwrap(), 1.0, 0.0);
        close(&tau(1, &z, &seed0(), &c).unwrap(), 0.3550280538878172, 1e-15);
        // phi phi'' - phi'^2 with phi''(0) = 0
        let phi1 = 0.2588194037928068 / 2f64.cbrt();
        close(&tau(2, &z, &seed0(), &c).unwrap(), -phi1 * phi1, 1e-15);
    }

    #[test]
    fn low_order_derivatives() {
        let c = ctx();
        let z = c.zero();
        close(&tau_derivative(1, &z, &seed0(), 1, &c).unwrap(), 0.2588194037928068 / 2f64.cbrt(), 1e-15);
        close(&tau_derivative(1, &z, &seed0(), 2, &c).unwrap(), 0.0, 1e-40);
        assert!(tau_derivative(0, &z, &seed0(), 1, &c).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let c = ctx();
        let s = seed0();
        let z = c.complex(0.7, -0.4);
        let h = c.complex(1e-17, 0.0);
        for n in 1..=4 {
            let fp = tau(n, &(&z + &h), &s, &c).unwrap();
            let fm = tau(n, &(&z - &h), &s, &c).unwrap();
            let f0 = tau(n, &z, &s, &c).unwrap();
            let d1 = (&fp - &fm) / (h.mul_i64(2));
            let d2 = (&(&fp + &fm) - &f0.mul_i64(2)) / h.square();
            let e1 = tau_derivative(n, &z, &s, 1, &c).unwrap();
            let e2 = tau_derivative(n, &z, &s, 2, &c).unwrap();
            assert!(((&d1 - &e1).abs().to_f64() / e1.abs().to_f64()) < 1e-12);
            assert!(((&d2 - &e2).abs().to_f64() / e2.abs().to_f64()) < 1e-12);
        }
    }

    #[test]
    fn first_two_solutions_at_origin() {
        let c = ctx();
        let s1 = qps_from_tau(1, &c.zero(), &seed0(), &c).unwrap();
        close(&s1.q, -0.5786165196684785, 1e-15);
        close(s1.p.as_ref().unwrap(), 0.6695941536665256, 1e-15);
        close(s1.sigma.as_ref().unwrap(), 0.5786165196684785, 1e-15);
        assert!(s1.ham_sys_residual().unwrap().log10_abs() < -45.0);
        let s2 = qps_from_tau(2, &c.zero(), &seed0(), &c).unwrap();
        close(&s2.q, -0.9148254324815767, 1e-15);
        close(s2.p.as_ref().unwrap(), 1.0042169901636821, 1e-15);
        close(s2.sigma.as_ref().unwrap(), 1.4934419521500552, 1e-15);
    }

    #[test]
    fn p1_equals_two_q1_squared_plus_z() {
        let c = ctx();
        let s = SeedSpec::from_lambda(&Lambda::finite(0.3, -1.2, c.bits()), &c);
        let z = c.complex(-1.1, 0.6);
        let j = qps_from_tau(1, &z, &s, &c).unwrap();
        let r = &(j.p.unwrap() - j.q.square().mul_i64(2)) - &z;
        assert!(r.log10_abs() < -45.0);
    }

    #[test]
    fn pole_is_reported() {
        // tau_1 = Ai(-2^{-1/3} z) vanishes at z = -2^{1/3} iota_1
        let c = ctx();
        let iota1 = rug::Float::parse("-2.338107410459767038489197252446735440638540145672387852483854437")
            .unwrap();
        let z1 = ApComplex::from_real(rug::Float::with_val(c.bits(), iota1) * -rug::Float::with_val(c.bits(), 2).cbrt());
        match qps_from_tau(1, &z1, &seed0(), &c) {
            Err(Error::AtPole(_)) => {}
            other => panic!("expected pole, got {other:?}"),
        }
    }
}
