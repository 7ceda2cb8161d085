//! Large-n behaviour of q, p, sigma against the algebraic root of x^3 - t x - 1.
use airy_painleve::spectral::{scaling_sample, Which};
use airy_painleve::{Lambda, PrecCtx};

fn main() -> airy_painleve::Result<()> {
    for t in [0.0, 1.0] {
        let mut prev: Option<[f64; 3]> = None;
        for n in [6usize, 12, 24] {
            let ctx = PrecCtx::for_order(n);
            let s = scaling_sample(n, &ctx.complex(t, 0.0), &Lambda::zero(ctx.bits()), &ctx)?;
            let e = Which::ALL.map(|w| s.error(w).abs().to_f64());
            let ratio = prev.map(|p| [0, 1, 2].map(|k| e[k] / p[k]));
            println!("t={t} n={n} errors [{:.2e}, {:.2e}, {:.2e}] ratios {ratio:.3?}", e[0], e[1], e[2]);
            prev = Some(e);
        }
    }
    Ok(())
}
