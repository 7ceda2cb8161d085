//! Argument-principle scan of q_3 for poles and zeros.
use airy_painleve::atlas::{pole_zero_scan, ScanBox, ScanGrid};
use airy_painleve::{Lambda, PrecCtx};

fn main() -> airy_painleve::Result<()> {
    let ctx = PrecCtx::new(30)?;
    let bbox = ScanBox { re: (-2.0, 8.0), im: (-6.0, 6.0) };
    let rep = pole_zero_scan(3, &Lambda::zero(ctx.bits()), bbox, ScanGrid { nre: 20, nim: 25 }, &ctx)?;
    for e in &rep.entries {
        println!("{:?} {} at {:.6} residue {:?}", e.kind, e.source.as_str(), e.location.to_c64(), e.residue);
    }
    println!(
        "{} poles, {} zeros, total winding {}, flagged cells {}, consistent {}",
        rep.poles().count(),
        rep.zeros().count(),
        rep.total_winding(),
        rep.flagged_cells(),
        rep.bookkeeping_consistent()
    );
    Ok(())
}
