//! Wronskian tau functions and the Hamiltonian variables they induce.
use airy_painleve::tau::tau;
use airy_painleve::{qps_from_tau, Lambda, PrecCtx, SeedSpec};

fn main() -> airy_painleve::Result<()> {
    let ctx = PrecCtx::new(40)?;
    let seed = SeedSpec::from_lambda(&Lambda::zero(ctx.bits()), &ctx);
    let z = ctx.complex(0.5, -0.25);
    for n in 1..=5 {
        let s = qps_from_tau(n, &z, &seed, &ctx)?;
        println!("n={n} tau_n = {}", tau(n, &z, &seed, &ctx)?);
        println!("    q = {}  p = {}  sigma = {}", s.q, s.p.as_ref().unwrap(), s.sigma.as_ref().unwrap());
        if let Some(r) = s.ham_sys_residual() {
            println!("    Hamiltonian residual {:.1e}", r.abs().to_f64());
        }
    }
    Ok(())
}
