//! Hankel determinants and recurrence coefficients of the cubic weight.
use airy_painleve::cubic::{coeff_table, string_residuals};
use airy_painleve::{Lambda, PrecCtx};

fn main() -> airy_painleve::Result<()> {
    let ctx = PrecCtx::new(40)?;
    let l = Lambda::zero(ctx.bits());
    let t = ctx.complex(1.7, 0.0);
    let table = coeff_table(6, &t, 1.0, &l, &ctx)?;
    for r in &table.records {
        println!("n={} D={} h={} beta={} gamma^2={}", r.n, r.d_n, r.h_n, r.beta_n, r.gamma2_n);
    }
    for n in 1..=6 {
        let (a, b) = string_residuals(n, &t, 1.0, &l, &ctx)?;
        println!("string residuals n={n}: {:.1e} {:.1e}", a.abs().to_f64(), b.abs().to_f64());
    }
    Ok(())
}
