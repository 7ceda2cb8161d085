//! The Baecklund chain `q_1 -> q_2 -> ...` and residuals of the defining
//! equations P_II, P_XXXIV and S_II.

use crate::error::{Error, Result};
use crate::mp::{seed_jet, ApComplex, PrecCtx, SeedSpec};
use crate::tau::{qps_from_tau, Route, SolutionJet};

/// `q_n` and `q_n'` at one point, with `alpha = n - 1/2`.
#[derive(Debug, Clone)]
pub struct QJet {
    pub n: i64,
    pub z: ApComplex,
    pub q: ApComplex,
    pub qprime: ApComplex,
}

impl QJet {
    /// `q'' = 2 q^3 + z q + (n - 1/2)` from P_II.
    pub fn qpp(&self) -> ApComplex {
        let q = &self.q;
        let cubic = (&q.square() * q).mul_i64(2);
        let alpha = ApComplex::from_f64(self.n as f64 - 0.5, 0.0, q.prec());
        &(&cubic + &(&self.z * q)) + &alpha
    }

    /// `p = q' + q^2 + z/2`.
    pub fn p(&self) -> ApComplex {
        &(&self.qprime + &self.q.square()) + &self.z.div_u64(2)
    }

    pub fn into_solution(self, seed: &SeedSpec) -> SolutionJet {
        let p = self.p();
        SolutionJet {
            n: self.n,
            lambda: seed.lambda.clone(),
            sigma: Some(hamiltonian_value(&self.q, &p, &self.z, self.n)),
            p: Some(p),
            z: self.z,
            q: self.q,
            qprime: Some(self.qprime),
            route: Route::Backlund,
        }
    }
}

/// The Baecklund denominator. `Standard` is `2q^2 + 2q' + z`; the other
/// variant squares `q'` and exists only as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Denominator {
    #[default]
    Standard,
    SquaredDerivative,
}

/// `q_1 = -phi'/phi`, `q_1' = z/2 + q_1^2`.
pub fn q1_jet(z: &ApComplex, seed: &SeedSpec, ctx: &PrecCtx) -> Result<QJet> {
    let jet = seed_jet(z, 1, seed, ctx)?;
    let (phi, dphi) = (jet.get(0), jet.get(1));
    if phi.log10_abs() - dphi.log10_abs() < -(ctx.digits() as f64 - 10.0) {
        return Err(Error::AtPole(format!("seed vanishes at z = {}", z.to_c64())));
    }
    let q = -(dphi / phi);
    let z = jet.z.clone();
    let qprime = &z.div_u64(2) + &q.square();
    Ok(QJet { n: 1, z, q, qprime })
}

/// One Baecklund step `n -> n + 1` with the standard denominator.
pub fn backlund_step(j: &QJet, ctx: &PrecCtx) -> Result<QJet> {
    backlund_step_with(j, Denominator::Standard, ctx)
}

pub fn backlund_step_with(j: &QJet, variant: Denominator, ctx: &PrecCtx) -> Result<QJet> {
    let QJet { n, z, q, qprime } = j;
    let qpp = j.qpp();
    let two_q2 = q.square().mul_i64(2);
    let (d, dprime) = match variant {
        Denominator::Standard => {
            let d = &(&two_q2 + &qprime.mul_i64(2)) + z;
            let dp = &(&(q * qprime).mul_i64(4) + &qpp.mul_i64(2)) + &ApComplex::from_f64(1.0, 0.0, q.prec());
            (d, dp)
        }
        Denominator::SquaredDerivative => {
            let d = &(&two_q2 + &qprime.square().mul_i64(2)) + z;
            let dp = &(&(q * qprime).mul_i64(4) + &(qprime * &qpp).mul_i64(4))
                + &ApComplex::from_f64(1.0, 0.0, q.prec());
            (d, dp)
        }
    };
    let scale = two_q2.abs().to_f64() + 2.0 * qprime.abs().to_f64() + z.abs().to_f64();
    if d.log10_abs() - scale.max(1e-300).log10() < -(ctx.digits() as f64 - 10.0) {
        return Err(Error::BacklundSingularity { n: *n });
    }
    let two_n = *n * 2;
    let q_next = &(-q) - &(&ApComplex::from_f64(two_n as f64, 0.0, q.prec()) / &d);
    let qp_next = &(-qprime) + &(&dprime.mul_i64(two_n) / &d.square());
    Ok(QJet {
        n: n + 1,
        z: z.clone(),
        q: q_next,
        qprime: qp_next,
    })
}

/// `q_n` by `n - 1` Baecklund steps from `q_1` (reflected for `n <= 0`).
///
/// The chain runs at `2n` extra guard digits to absorb the growth of
/// rounding errors near the interlacing poles.
pub fn backlund_chain(n: i64, z: &ApComplex, seed: &SeedSpec, variant: Denominator, ctx: &PrecCtx) -> Result<QJet> {
    if n <= 0 {
        return Ok(reflect(&backlund_chain(1 - n, z, seed, variant, ctx)?));
    }
    let work = ctx.padded(2 * n as u32);
    let mut j = q1_jet(z, seed, &work)?;
    while j.n < n {
        j = backlund_step_with(&j, variant, &work)?;
    }
    let bits = ctx.bits();
    Ok(QJet {
        n: j.n,
        z: j.z.with_prec(bits),
        q: j.q.with_prec(bits),
        qprime: j.qprime.with_prec(bits),
    })
}

/// `q_n = -q_{1-n}`.
pub fn reflect(j: &QJet) -> QJet {
    QJet {
        n: 1 - j.n,
        z: j.z.clone(),
        q: -&j.q,
        qprime: -&j.qprime,
    }
}

/// Something that evaluates `q_n` at arbitrary `z`; used by residuals that
/// need finite differences of a route.
pub trait QRoute {
    fn n(&self) -> i64;
    fn q_at(&self, z: &ApComplex, ctx: &PrecCtx) -> Result<ApComplex>;
}

pub struct TauRoute<'a> {
    pub n: usize,
    pub seed: &'a SeedSpec,
}

impl QRoute for TauRoute<'_> {
    fn n(&self) -> i64 {
        self.n as i64
    }

    fn q_at(&self, z: &ApComplex, ctx: &PrecCtx) -> Result<ApComplex> {
        Ok(qps_from_tau(self.n, z, self.seed, ctx)?.q)
    }
}

pub struct BacklundRoute<'a> {
    pub n: i64,
    pub seed: &'a SeedSpec,
    pub variant: Denominator,
}

impl QRoute for BacklundRoute<'_> {
    fn n(&self) -> i64 {
        self.n
    }

    fn q_at(&self, z: &ApComplex, ctx: &PrecCtx) -> Result<ApComplex> {
        Ok(backlund_chain(self.n, z, self.seed, self.variant, ctx)?.q)
    }
}

/// Step `10^{-digits/3}` used by finite-difference residuals.
pub fn fd_step(ctx: &PrecCtx) -> ApComplex {
    ApComplex::from_real(ctx.tol_frac(1.0 / 3.0))
}

/// `q''_fd - (2q^3 + zq + alpha)` with a central second difference of the
/// route's `q`.
pub fn residual_p2(route: &dyn QRoute, z: &ApComplex, ctx: &PrecCtx) -> Result<ApComplex> {
    let h = fd_step(ctx);
    let q0 = route.q_at(z, ctx)?;
    let qp = route.q_at(&(z + &h), ctx)?;
    let qm = route.q_at(&(z - &h), ctx)?;
    let qpp = &(&(&qp + &qm) - &q0.mul_i64(2)) / &h.square();
    let j = QJet {
        n: route.n(),
        z: z.with_prec(ctx.bits()),
        q: q0,
        qprime: ctx.zero(),
    };
    Ok(&qpp - &j.qpp())
}

/// P_XXXIV residual `p'' - ((p')^2 - n^2)/(2p) - 2p^2 + zp` with
/// `p' = 2pq + n` and `p'' = 2p'q + 2pq'`.
///
/// `qprime` should come from the route itself; substituting
/// `q' = p - q^2 - z/2` makes the residual vanish identically.
pub fn residual_p34(q: &ApComplex, qprime: &ApComplex, p: &ApComplex, z: &ApComplex, n: i64, ctx: &PrecCtx) -> Result<ApComplex> {
    if p.log10_abs() < -(ctx.digits() as f64 - 10.0) {
        return Err(Error::PVanishes);
    }
    let nn = ApComplex::from_f64(n as f64, 0.0, ctx.bits());
    let pp = &(p * q).mul_i64(2) + &nn;
    let ppp = &(&pp * q).mul_i64(2) + &(p * qprime).mul_i64(2);
    let rhs = &(&(&(&pp.square() - &nn.square()) / &p.mul_i64(2)) + &p.square().mul_i64(2)) - &(z * p);
    Ok(&ppp - &rhs)
}

/// S_II residual `(s'')^2 + 4(s')^3 + 2s'(z s' - s) - (n/2)^2` with
/// `s' = -p/2` and `s'' = -(2pq + n)/2`.
pub fn residual_s2(sigma: &ApComplex, p: &ApComplex, q: &ApComplex, z: &ApComplex, n: i64, ctx: &PrecCtx) -> ApComplex {
    let nn = ApComplex::from_f64(n as f64, 0.0, ctx.bits());
    let s1 = -p.div_u64(2);
    let s2 = -(&(p * q).mul_i64(2) + &nn).div_u64(2);
    let lhs = &(&s2.square() + &(&s1.square() * &s1).mul_i64(4)) + &(&s1 * &(&(z * &s1) - sigma)).mul_i64(2);
    &lhs - &nn.square().div_u64(4)
}

/// `H = p^2/2 - (q^2 + z/2) p - n q`.
pub fn hamiltonian_value(q: &ApComplex, p: &ApComplex, z: &ApComplex, n: i64) -> ApComplex {
    let a = p.square().div_u64(2);
    let b = &(&q.square() + &z.div_u64(2)) * p;
    &(&a - &b) - &q.mul_i64(n)
}
