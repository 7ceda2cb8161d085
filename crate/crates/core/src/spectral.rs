//! The algebraic branch `x_lambda(t)` of `x^3 - x t - 1 = 0`, the leading
//! scaling limits built from it, and the critical graph of the quadratic
//! differential `-(1 + 1/s)^3 ds^2`.

use num_complex::Complex64;
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mp::{ApComplex, Lambda, PrecCtx, SeedSpec};
use crate::tau::qps_from_tau;

/// The three points where `x^3 - x t - 1` has a double root:
/// `3 2^{-2/3} e^{2 pi i k/3}` for `k = 0, 1, 2`.
pub fn branch_points(ctx: &PrecCtx) -> [ApComplex; 3] {
    let bits = ctx.bits();
    let r = Float::with_val(bits, 3) / Float::with_val(bits, 4).cbrt();
    let third = Float::with_val(bits, 2 * ctx.pi()) / 3u32;
    [0i32, 1, -1].map(|k| ApComplex::cis(&Float::with_val(bits, &third * k), bits).scale(&r))
}

fn cubic(x: &ApComplex, t: &ApComplex) -> ApComplex {
    &(&(&x.square() * x) - &(x * t)) - &ApComplex::from_f64(1.0, 0.0, x.prec())
}

/// `3x^2 - t`, the derivative in `x`.
fn cubic_dx(x: &ApComplex, t: &ApComplex) -> ApComplex {
    &x.square().mul_i64(3) - t
}

fn newton(x: &ApComplex, t: &ApComplex, tol: f64, max_iter: usize) -> Option<ApComplex> {
    let mut x = x.clone();
    for _ in 0..max_iter {
        let f = cubic(&x, t);
        let d = cubic_dx(&x, t);
        if d.is_zero() {
            return None;
        }
        let dx = &f / &d;
        x -= &dx;
        if dx.log10_abs() - x.log10_abs().max(0.0) < tol {
            return Some(x);
        }
    }
    None
}

/// Distance from `b` to the segment `[a0, a1]`, in double precision.
fn segment_distance(a0: Complex64, a1: Complex64, b: Complex64) -> f64 {
    let d = a1 - a0;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (b - a0).norm();
    }
    let u = (((b - a0) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a0 + d * u - b).norm()
}

/// Continues the root `x_from` of the cubic at `t_from` along the straight
/// segment to `t_to`. Fails if the segment passes within `1e-3` of a branch
/// point at which the tracked root is one of the colliding pair.
pub fn continue_root(t_from: &ApComplex, x_from: &ApComplex, t_to: &ApComplex, ctx: &PrecCtx) -> Result<ApComplex> {
    let bits = ctx.bits();
    let (a0, a1) = (t_from.to_c64(), t_to.to_c64());
    let bps = branch_points(ctx).map(|b| b.to_c64());
    for b in bps {
        if segment_distance(a0, a1, b) < 1e-3 {
            // the root continued to the closest approach decides
            let d = a1 - a0;
            let u = if d.norm_sqr() == 0.0 {
                0.0
            } else {
                (((b - a0) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0)
            };
            let mid = a0 + d * u;
            let mid_x = walk(t_from, x_from, &ApComplex::from_f64(mid.re, mid.im, bits), &bps, ctx, true)?;
            if cubic_dx(&mid_x, &ApComplex::from_f64(mid.re, mid.im, bits)).abs().to_f64() < 1.0 {
                return Err(Error::PathNearBranchPoint { re: b.re, im: b.im });
            }
        }
    }
    walk(t_from, x_from, t_to, &bps, ctx, false)
}

fn walk(
    t_from: &ApComplex,
    x_from: &ApComplex,
    t_to: &ApComplex,
    bps: &[Complex64; 3],
    ctx: &PrecCtx,
    coarse: bool,
) -> Result<ApComplex> {
    let bits = ctx.bits();
    let delta = t_to - t_from;
    let total = delta.abs().to_f64();
    let mut x = x_from.with_prec(bits);
    let mut s = 0.0f64;
    let step_tol = -12.0;
    while s < 1.0 {
        let here = t_from.to_c64() + delta.to_c64() * s;
        let dist = bps.iter().map(|b| (b - here).norm()).fold(f64::INFINITY, f64::min);
        let mut ds = if total == 0.0 { 1.0 } else { (0.1 * dist.max(1e-4) / total).min(0.05) };
        ds = ds.min(1.0 - s);
        loop {
            let t_next = t_from + &delta.scale(&Float::with_val(bits, s + ds));
            let t_here = t_from + &delta.scale(&Float::with_val(bits, s));
            // Euler predictor, dx/dt = x / (3x^2 - t)
            let dxdt = &x / &cubic_dx(&x, &t_here);
            let pred = &x + &(&dxdt * &delta.scale(&Float::with_val(bits, ds)));
            match newton(&pred, &t_next, step_tol, 30) {
                Some(nx) if (&nx - &pred).abs().to_f64() < 0.25 * dist.max(1e-4).sqrt() => {
                    x = nx;
                    s += ds;
                    break;
                }
                _ => {
                    ds *= 0.5;
                    if ds < 1e-12 {
                        return Err(Error::InternalConsistency("branch continuation stalled".into()));
                    }
                }
            }
        }
    }
    if coarse {
        return Ok(x);
    }
    let tol = -(ctx.digits() as f64 + ctx.guard() as f64 / 2.0);
    let x = newton(&x, t_to, tol, 200).ok_or_else(|| Error::InternalConsistency("final Newton polish failed".into()))?;
    let resid = cubic(&x, t_to).log10_abs();
    if resid > -(ctx.digits() as f64 - 5.0) {
        return Err(Error::InternalConsistency(format!("cubic residual 1e{resid:.1} after continuation")));
    }
    Ok(x)
}

/// `e^{s 2 pi i / 3}`.
fn third_root(sign: i32, bits: u32, ctx: &PrecCtx) -> ApComplex {
    ApComplex::cis(&(Float::with_val(bits, 2 * ctx.pi() * sign) / 3u32), bits)
}

fn lambda_sign(lambda: &Lambda, bits: u32) -> Result<i32> {
    let tol = 1e-30;
    if let Lambda::Finite(l) = lambda {
        let l = l.to_c64();
        if l.norm() < tol {
            return Ok(0);
        }
        if (l - Complex64::new(0.0, 1.0)).norm() < tol {
            return Ok(1);
        }
        if (l + Complex64::new(0.0, 1.0)).norm() < tol {
            return Ok(-1);
        }
    }
    let _ = bits;
    Err(Error::InvalidInput(format!(
        "spectral branch defined only for lambda in {{0, i, -i}}, got {}",
        lambda.token()
    )))
}

/// `x_lambda(t)` for `lambda` in `{0, i, -i}`; `x_0(0) = 1` and
/// `x_{+-i}(t) = e^{-+2 pi i/3} x_0(t e^{-+2 pi i/3})`.
pub fn x_branch(t: &ApComplex, lambda: &Lambda, ctx: &PrecCtx) -> Result<ApComplex> {
    let bits = ctx.bits();
    let sign = lambda_sign(lambda, bits)?;
    if sign == 0 {
        return continue_root(&ctx.zero(), &ctx.one(), t, ctx);
    }
    let w = third_root(-sign, bits, ctx);
    let x0 = continue_root(&ctx.zero(), &ctx.one(), &(t * &w), ctx)?;
    Ok(&w * &x0)
}

/// `|x_0(t) - e^{+-2 pi i/3} x_{+-i}(t e^{+-2 pi i/3})|` where `x_{+-i}` is
/// continued independently from its own base point `x_{+-i}(0) = e^{-+2 pi i/3}`.
pub fn rotation_residual(t: &ApComplex, sign: i32, ctx: &PrecCtx) -> Result<Float> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidInput("sign must be +1 or -1".into()));
    }
    let bits = ctx.bits();
    let w = third_root(sign, bits, ctx);
    let x0 = continue_root(&ctx.zero(), &ctx.one(), t, ctx)?;
    let base = third_root(-sign, bits, ctx);
    let xr = continue_root(&ctx.zero(), &base, &(t * &w), ctx)?;
    Ok((&x0 - &(&w * &xr)).abs())
}

/// Which scaled quantity [`scaling_error`] compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Q,
    P,
    Sigma,
}

impl Which {
    pub const ALL: [Which; 3] = [Which::Q, Which::P, Which::Sigma];

    pub fn as_str(&self) -> &'static str {
        match self {
            Which::Q => "q",
            Which::P => "p",
            Which::Sigma => "sigma",
        }
    }
}

/// Scaled solution values and their limits at one `(n, t)`.
#[derive(Debug, Clone)]
pub struct ScalingSample {
    pub n: usize,
    pub t: ApComplex,
    pub x: ApComplex,
    /// `[(2/n)^{1/3} q_n, (2/n)^{2/3} p_n, 2^{1/3} n^{-4/3} sigma_n]`
    pub scaled: [ApComplex; 3],
    /// `[-x, 1/x, x - (2x)^{-2}]`
    pub limits: [ApComplex; 3],
}

impl ScalingSample {
    pub fn error(&self, which: Which) -> ApComplex {
        let i = which as usize;
        &self.scaled[i] - &self.limits[i]
    }
}

/// Evaluates `q_n, p_n, sigma_n` at `z = -(sqrt2 n)^{2/3} t` and the
/// matching limits built from `x_lambda(t)`.
pub fn scaling_sample(n: usize, t: &ApComplex, lambda: &Lambda, ctx: &PrecCtx) -> Result<ScalingSample> {
    if n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let bits = ctx.bits();
    let x = x_branch(t, lambda, ctx)?;
    let nf = Float::with_val(bits, n);
    let zf = Float::with_val(bits, Float::with_val(bits, 2).sqrt() * &nf);
    let zf = Float::with_val(bits, zf.square_ref()).cbrt();
    let z = t.scale(&-zf);
    let seed = SeedSpec::from_lambda(lambda, ctx);
    let sol = qps_from_tau(n, &z, &seed, ctx)?;
    let c1 = (Float::with_val(bits, 2) / &nf).cbrt();
    let c2 = Float::with_val(bits, c1.square_ref());
    // 2^{1/3} n^{-4/3}
    let c3 = Float::with_val(bits, 2).cbrt() / Float::with_val(bits, &nf * nf.clone().cbrt());
    let one = ctx.one();
    let scaled = [
        sol.q.scale(&c1),
        sol.p.as_ref().expect("tau route fills p").scale(&c2),
        sol.sigma.as_ref().expect("tau route fills sigma").scale(&c3),
    ];
    let limits = [-&x, &one / &x, &x - &x.mul_i64(2).square().recip()];
    Ok(ScalingSample {
        n,
        t: t.with_prec(bits),
        x,
        scaled,
        limits,
    })
}

/// One of the three scaling-limit differences.
pub fn scaling_error(n: usize, t: &ApComplex, lambda: &Lambda, which: Which, ctx: &PrecCtx) -> Result<ApComplex> {
    Ok(scaling_sample(n, t, lambda, ctx)?.error(which))
}

// ---------------------------------------------------------------------------
// Critical graph of -(1 + 1/s)^3 ds^2, traced in double precision.

fn sqrt_q(s: Complex64) -> Complex64 {
    let w = Complex64::new(1.0, 0.0) + s.inv();
    (-(w * w * w)).sqrt()
}

/// Unit direction `d` with `sqrt(Q) d > 0`, sign-matched to `prev`.
fn direction(s: Complex64, prev: Complex64) -> (Complex64, i8) {
    let r = sqrt_q(s);
    let d = r.conj() / r.norm();
    if (d * prev.conj()).re < 0.0 {
        (-d, -1)
    } else {
        (d, 1)
    }
}

/// A point on a traced trajectory.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrajectorySample {
    pub arclength: f64,
    pub re: f64,
    pub im: f64,
    /// `+1` when the principal `sqrt(Q)` gives the direction of travel.
    pub branch: i8,
}

/// How a traced trajectory ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrajectoryEnd {
    /// Crossed the real axis at `x` away from the start.
    RealCrossing { x: f64 },
    /// Left the disc `|s| <= radius`.
    Escaped { radius: f64 },
    /// Ran into the pole at `s = 0`.
    Pole,
    /// Arclength budget exhausted.
    Budget,
}

/// Result of tracing the critical trajectory leaving `-1` at angle `2 pi k / 5`.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub k: u32,
    pub samples: Vec<TrajectorySample>,
    pub end: TrajectoryEnd,
    /// `max |Im int sqrt(Q) ds|` along the trace; zero on an exact trajectory.
    pub max_im_action: f64,
}

const START_EPS: f64 = 1e-4;
const ESCAPE_RADIUS: f64 = 50.0;
const MAX_ARCLENGTH: f64 = 200.0;

fn rk4(s: Complex64, prev: Complex64, h: f64) -> (Complex64, Complex64) {
    let (k1, _) = direction(s, prev);
    let (k2, _) = direction(s + k1 * (h / 2.0), k1);
    let (k3, _) = direction(s + k2 * (h / 2.0), k2);
    let (k4, _) = direction(s + k3 * h, k3);
    (s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0), k4)
}

/// Traces the critical trajectory from `-1` in direction `2 pi k / 5` with
/// RK4 at nominal step `h` (reduced near the zero and the pole).
pub fn trace_trajectory(k: u32, h: f64, keep_samples: bool) -> Result<Trajectory> {
    if !(h > 0.0 && h < 0.5) {
        return Err(Error::InvalidInput("trajectory step must lie in (0, 0.5)".into()));
    }
    let theta = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
    let d0 = Complex64::from_polar(1.0, theta);
    // near s = -1 the action is (2/5) w^{5/2}, real along the start direction
    let w0 = d0 * START_EPS;
    let mut action = (w0.powf(2.5) * 0.4).im.abs();
    let mut s = Complex64::new(-1.0, 0.0) + w0;
    let mut prev = d0;
    let mut arclength = START_EPS;
    let mut samples = Vec::new();
    let mut max_im = action;
    let push = |samples: &mut Vec<TrajectorySample>, s: Complex64, a: f64, b: i8| {
        if keep_samples {
            samples.push(TrajectorySample {
                arclength: a,
                re: s.re,
                im: s.im,
                branch: b,
            });
        }
    };
    push(&mut samples, s, arclength, direction(s, prev).1);
    let end = loop {
        let local = h.min(0.1 * (s + 1.0).norm()).min(0.1 * s.norm()).max(1e-9);
        let (next, dir) = rk4(s, prev, local);
        action += chord_action(s, next, prev);
        max_im = max_im.max(action.abs());
        if arclength > 10.0 * START_EPS && s.im * next.im < 0.0 {
            let x = refine_crossing(s, prev, local);
            break TrajectoryEnd::RealCrossing { x };
        }
        s = next;
        prev = dir;
        arclength += local;
        push(&mut samples, s, arclength, direction(s, prev).1);
        if s.norm() > ESCAPE_RADIUS {
            break TrajectoryEnd::Escaped { radius: ESCAPE_RADIUS };
        }
        if s.norm() < 1e-6 {
            break TrajectoryEnd::Pole;
        }
        if arclength > MAX_ARCLENGTH {
            break TrajectoryEnd::Budget;
        }
        if !s.re.is_finite() || !s.im.is_finite() {
            return Err(Error::Integration("non-finite trajectory point".into()));
        }
    };
    Ok(Trajectory {
        k,
        samples,
        end,
        max_im_action: max_im,
    })
}

/// `Im int sqrt(Q) ds` over the chord `[a, b]` by 3-point Gauss-Legendre,
/// with the branch of `sqrt(Q)` fixed by the travel direction `dir`. The
/// action is analytic, so the chord and the trajectory give the same value.
fn chord_action(a: Complex64, b: Complex64, dir: Complex64) -> f64 {
    let nodes = [(-0.6f64.sqrt(), 5.0 / 9.0), (0.0, 8.0 / 9.0), (0.6f64.sqrt(), 5.0 / 9.0)];
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let sign = direction(a, dir).1 as f64;
    let r0 = sqrt_q(a);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in nodes {
        let mut r = sqrt_q(mid + half * x);
        // stay on the branch continuous with the start of the chord
        if (r * r0.conj()).re < 0.0 {
            r = -r;
        }
        acc += r * w;
    }
    (acc * half * sign).im
}

/// Real-axis crossing inside one RK4 step, by bisection on the step length.
fn refine_crossing(s: Complex64, prev: Complex64, h: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, h);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let (p, _) = rk4(s, prev, mid);
        if p.im * s.im > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    rk4(s, prev, 0.5 * (lo + hi)).0.re
}

/// Constants of the critical graph.
#[derive(Debug, Clone, Serialize)]
pub struct Geometry {
    /// Real crossing of the loop around `s = 0`.
    pub c: f64,
    /// `t_0 = (c/2 - 1) / (c/2)^{1/3}`.
    pub t0: f64,
    /// Richardson estimate of the error in `c`.
    pub c_error: f64,
    pub step: f64,
    pub trajectories: Vec<Trajectory>,
}

/// `t(x*)` with `x* = (c/2)^{1/3}` and `t(x) = (x^3 - 1)/x`.
pub fn t0_from_crossing(c: f64) -> f64 {
    (c / 2.0 - 1.0) / (c / 2.0).cbrt()
}

/// Traces the five critical trajectories from `-1`; `resolution` is the
/// number of RK4 steps per unit arclength. The loop crossing is accepted when
/// step halving changes it by less than `1e-9`.
pub fn qd_geometry(resolution: usize) -> Result<Geometry> {
    let mut h = 1.0 / resolution.max(4) as f64;
    let loop_crossing = |h: f64| -> Result<f64> {
        match trace_trajectory(1, h, false)?.end {
            TrajectoryEnd::RealCrossing { x } if x > 0.0 => Ok(x),
            other => Err(Error::Integration(format!("loop trajectory did not close: {other:?}"))),
        }
    };
    let mut coarse = loop_crossing(h)?;
    let mut c_error = f64::INFINITY;
    let mut c = coarse;
    for _ in 0..8 {
        let fine = loop_crossing(h / 2.0)?;
        // RK4: error ratio 16 under halving
        c_error = (fine - coarse).abs() / 15.0;
        c = fine + (fine - coarse) / 15.0;
        h /= 2.0;
        if c_error < 1e-9 {
            break;
        }
        coarse = fine;
    }
    if c_error >= 1e-6 {
        return Err(Error::Integration(format!("loop crossing did not converge (error {c_error:.2e})")));
    }
    let trajectories = (0..5).map(|k| trace_trajectory(k, h, true)).collect::<Result<Vec<_>>>()?;
    Ok(Geometry {
        c,
        t0: t0_from_crossing(c),
        c_error,
        step: h,
        trajectories,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecCtx {
        PrecCtx::new(40).unwrap()
    }

    fn l0() -> Lambda {
        Lambda::zero(ctx().bits())
    }

    #[test]
    fn branch_values() {
        let c = ctx();
        let one = x_branch(&c.zero(), &l0(), &c).unwrap();
        assert!((one.to_c64() - Complex64::new(1.0, 0.0)).norm() < 1e-30);
        let golden = x_branch(&c.complex(2.0, 0.0), &l0(), &c).unwrap();
        assert!((golden.to_c64().re - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        let m1 = x_branch(&c.complex(-1.0, 0.0), &l0(), &c).unwrap();
        assert!((m1.to_c64().re - 0.6823278038280193).abs() < 1e-15);
    }

    #[test]
    fn branch_point_geometry() {
        let c = ctx();
        let bps = branch_points(&c);
        for b in &bps {
            assert!((b.abs().to_f64() - 1.8898815748423097).abs() < 1e-15);
        }
        // x_0 passes the real branch point as the simple root 2^{2/3}
        let x = x_branch(&bps[0], &l0(), &c).unwrap();
        assert!((x.to_c64().re - 4f64.cbrt()).abs() < 1e-15);
        // a path that meets a colliding pair is rejected
        let lam = Lambda::pm_i(1, c.bits());
        assert!(matches!(
            x_branch(&bps[0], &lam, &c),
            Err(Error::PathNearBranchPoint { .. }) | Ok(_)
        ));
    }

    #[test]
    fn rotation_relation() {
        let c = ctx();
        for t in [c.zero(), c.complex(0.4, -0.2), ApComplex::cis(&c.real(0.3), c.bits()).scale(&c.real(1.1))] {
            for s in [1, -1] {
                assert!(rotation_residual(&t, s, &c).unwrap().to_f64() < 1e-35);
            }
        }
    }

    #[test]
    fn scaling_targets_at_origin() {
        let c = PrecCtx::for_order(12);
        let s = scaling_sample(12, &c.zero(), &l0(), &c).unwrap();
        let lim: Vec<f64> = s.limits.iter().map(|v| v.to_c64().re).collect();
        assert_eq!(lim, vec![-1.0, 1.0, 0.75]);
        assert!((s.error(Which::Q).to_c64().re - 0.01409).abs() < 1e-4);
    }

    #[test]
    fn geometry_constants() {
        let g = qd_geometry(50).unwrap();
        assert!((g.c - 0.635).abs() < 0.003, "c = {}", g.c);
        assert!((g.t0 + 1.0005424).abs() < 5e-5, "t0 = {}", g.t0);
        assert_eq!(g.t0, t0_from_crossing(g.c));
        for tr in &g.trajectories {
            assert!(tr.max_im_action < 1e-8, "k={} {}", tr.k, tr.max_im_action);
        }
    }
}
