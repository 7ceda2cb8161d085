//! Critical trajectories of the quadratic differential and the constants c, t0.
use airy_painleve::spectral::qd_geometry;

fn main() -> airy_painleve::Result<()> {
    let g = qd_geometry(100)?;
    println!("c = {:.10} (+- {:.1e}), t0 = {:.8}", g.c, g.c_error, g.t0);
    for tr in &g.trajectories {
        println!("k={} samples={} end={:?} max Im action {:.1e}", tr.k, tr.samples.len(), tr.end, tr.max_im_action);
    }
    Ok(())
}
