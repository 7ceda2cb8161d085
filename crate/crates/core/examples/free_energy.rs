//! Partition function and free energy of the cubic ensemble.
use airy_painleve::cubic::partition_free_energy;
use airy_painleve::{Lambda, PrecCtx};

fn main() -> airy_painleve::Result<()> {
    let ctx = PrecCtx::new(40)?;
    let l = Lambda::zero(ctx.bits());
    for n in 1..=6 {
        let (z, f) = partition_free_energy(n, &ctx.zero(), &l, &ctx)?;
        println!("N={n} Z={z} F={f}");
    }
    Ok(())
}
