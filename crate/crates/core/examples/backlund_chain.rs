//! Raises q_1 to q_n with the Baecklund map and compares against the tau route.
use airy_painleve::backlund::{backlund_chain, reflect, Denominator};
use airy_painleve::{qps_from_tau, Lambda, PrecCtx, SeedSpec};

fn main() -> airy_painleve::Result<()> {
    let ctx = PrecCtx::new(40)?;
    let seed = SeedSpec::from_lambda(&Lambda::parse("i", ctx.bits())?, &ctx);
    let z = ctx.complex(-1.0, 0.6);
    for n in 1..=8i64 {
        let b = backlund_chain(n, &z, &seed, Denominator::Standard, &ctx)?;
        let t = qps_from_tau(n as usize, &z, &seed, &ctx)?;
        let r = reflect(&b);
        println!("q_{n} = {}  |tau - chain| = {:.1e}  q_{} = {}", b.q, (&t.q - &b.q).abs().to_f64(), r.n, r.q);
    }
    let bad = backlund_chain(4, &z, &seed, Denominator::SquaredDerivative, &ctx)?;
    println!("squared-derivative variant gives q_4 = {}", bad.q);
    Ok(())
}
