//! Airy values and the seed of the family at a few points.
use airy_painleve::mp::{airy_pair, rotate_lambda_identity, seed_jet};
use airy_painleve::{Lambda, PrecCtx, SeedSpec};

fn main() -> airy_painleve::Result<()> {
    let ctx = PrecCtx::new(50)?;
    for (re, im) in [(0.0, 0.0), (1.5, 0.0), (-2.0, 1.0)] {
        let u = ctx.complex(re, im);
        let a = airy_pair(&u, &ctx)?;
        println!("Ai({u}) = {}\nBi({u}) = {}", a.ai, a.bi);
    }
    for token in ["0", "i", "inf"] {
        let seed = SeedSpec::from_lambda(&Lambda::parse(token, ctx.bits())?, &ctx);
        let jet = seed_jet(&ctx.zero(), 3, &seed, &ctx)?;
        println!("lambda = {token}: phi(0) = {}, phi'(0) = {}", jet.get(0), jet.get(1));
    }
    println!("rotation identity residual: {:.1e}", rotate_lambda_identity(&ctx.complex(0.7, 0.2), 1, &ctx)?.to_f64());
    Ok(())
}
