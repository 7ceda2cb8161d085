//! Runs the built-in verification suites, then the same routes with the wrong denominator.
use airy_painleve::backlund::Denominator;
use airy_painleve::cli::{run_suites, SUITES};
use airy_painleve::PrecCtx;

fn main() -> airy_painleve::Result<()> {
    let ctx = PrecCtx::new(40)?;
    for variant in [Denominator::Standard, Denominator::SquaredDerivative] {
        let recs = run_suites(&SUITES, variant, &ctx);
        let failed = recs.iter().filter(|r| !r.passed).count();
        println!("{variant:?}: {} checks, {failed} failed", recs.len());
    }
    Ok(())
}
