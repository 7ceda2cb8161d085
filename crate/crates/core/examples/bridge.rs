//! The same q, p, sigma computed from tau functions and from orthogonal polynomials.
use airy_painleve::cubic::{bridge_theorem, qps_from_coeffs, t_of_z};
use airy_painleve::{Lambda, PrecCtx};

fn main() -> airy_painleve::Result<()> {
    let ctx = PrecCtx::new(40)?;
    let z = ctx.complex(0.7, -0.4);
    for token in ["0", "i", "inf"] {
        let l = Lambda::parse(token, ctx.bits())?;
        for (n, nn) in [(2, 1.0), (4, 3.0), (6, 6.0)] {
            let s = qps_from_coeffs(n, &z, nn, &l, &ctx)?;
            let d = bridge_theorem(n, &z, nn, &l, &ctx)?;
            let worst = d.iter().map(|x| x.abs().to_f64()).fold(0.0, f64::max);
            println!("lambda={token} n={n} N={nn} t={} q={} max diff {worst:.1e}", t_of_z(&z, nn, ctx.bits()), s.q);
        }
    }
    Ok(())
}
