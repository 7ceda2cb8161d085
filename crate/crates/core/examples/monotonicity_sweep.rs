//! Sweeps the ordering and monotonicity inequalities of beta_n over t.
use airy_painleve::atlas::{default_t_grid, monotonicity_sweep, Check};
use airy_painleve::PrecCtx;

fn main() -> airy_painleve::Result<()> {
    let ctx = PrecCtx::new(50)?;
    let grid = default_t_grid(25, &ctx)?;
    let rep = monotonicity_sweep(10, &grid, &ctx)?;
    println!("{} violations, {} indeterminate, {} skips", rep.violations(), rep.indeterminates(), rep.skips.len());
    for c in Check::ALL {
        let first = rep.first_failure(c).map(|p| (p.n, p.t));
        println!("{}: first failure {first:?}", c.as_str());
    }
    for f in &rep.first_holds {
        println!("{} holds from n = {:?}", f.check.as_str(), f.n0);
    }
    Ok(())
}
