//! Pole and zero maps of `q_n(z; lambda)` and the monotonicity sweep over the
//! recurrence coefficients of the cubic ensemble.

use std::f64::consts::PI;

use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::cubic::{coeff_table, z_of_t, CoeffTable};
use crate::error::{Error, Result};
use crate::mp::{airy_pair, log10_abs, pow10, ApComplex, Lambda, PrecCtx, SeedSpec};
use crate::tau::{tau_data, tau_data_unchecked, TauData};

/// `iota_1`, the largest real zero of `Ai`, by Newton from `-2.3`.
pub fn airy_first_zero(ctx: &PrecCtx) -> Result<ApComplex> {
    let work = ctx.padded(5);
    let mut u = work.complex(-2.3, 0.0);
    let stop = -(ctx.digits() as f64) + 2.0;
    for _ in 0..200 {
        let a = airy_pair(&u, &work)?;
        let step = &a.ai / &a.ai_prime;
        u -= &step;
        if step.log10_abs() < stop {
            let a = airy_pair(&u, &work)?;
            if log10_abs(&a.ai.abs()) > -(ctx.digits() as f64 - 5.0) {
                break;
            }
            return Ok(u.with_prec(ctx.bits()));
        }
    }
    Err(Error::InternalConsistency("Newton for the first Airy zero did not converge".into()))
}

/// Rectangle `re.0 <= Re z <= re.1`, `im.0 <= Im z <= im.1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanBox {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

/// Number of cells along each axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScanGrid {
    pub nre: usize,
    pub nim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Zero,
    Pole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntrySource {
    /// A zero of `tau_{n-1}`.
    TauPrev,
    /// A zero of `tau_n`.
    TauCur,
    QRoot,
}

impl EntrySource {
    pub fn as_str(&self) -> &'static str {
        match self {
            EntrySource::TauPrev => "tau_prev",
            EntrySource::TauCur => "tau_cur",
            EntrySource::QRoot => "q_root",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PoleZeroEntry {
    pub location: ApComplex,
    pub kind: EntryKind,
    pub source: EntrySource,
    /// Winding of `q` around the entry: `+1` for a simple zero, `-1` for a pole.
    pub winding: i32,
    /// For poles, `(1/2 pi i) \oint q dz` on a small circle, rounded.
    pub residue: Option<i32>,
    /// Distance of the rounded residue from an integer.
    pub residue_defect: f64,
    /// For poles, distance to the pole found by Newton on `1/q`; for zeros,
    /// distance to the nearest tau zero.
    pub cross_check: f64,
}

/// Winding bookkeeping of one cell.
#[derive(Debug, Clone, Serialize)]
pub struct CellReport {
    pub i: usize,
    pub j: usize,
    pub winding_q: i64,
    pub zeros_tau_prev: i64,
    pub zeros_tau_cur: i64,
    /// Roots of `q` implied by the windings: `winding_q + poles`.
    pub zeros_q: i64,
    /// Segment bisection depth used on the worst edge.
    pub depth: u32,
    pub flagged: bool,
}

#[derive(Debug, Clone)]
pub struct PoleZeroReport {
    pub n: usize,
    pub lambda: Lambda,
    pub bbox: ScanBox,
    pub grid: ScanGrid,
    pub digits: u32,
    pub entries: Vec<PoleZeroEntry>,
    pub cells: Vec<CellReport>,
}

impl PoleZeroReport {
    pub fn poles(&self) -> impl Iterator<Item = &PoleZeroEntry> {
        self.entries.iter().filter(|e| e.kind == EntryKind::Pole)
    }

    pub fn zeros(&self) -> impl Iterator<Item = &PoleZeroEntry> {
        self.entries.iter().filter(|e| e.kind == EntryKind::Zero)
    }

    pub fn total_winding(&self) -> i64 {
        self.cells.iter().map(|c| c.winding_q).sum()
    }

    pub fn flagged_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.flagged).count()
    }

    /// Total winding equals `#zeros - #poles` from the entry list and every
    /// cell holds exactly the entries its windings predict.
    pub fn bookkeeping_consistent(&self) -> bool {
        let from_entries: i64 = self.entries.iter().map(|e| e.winding as i64).sum();
        from_entries == self.total_winding() && self.flagged_cells() == 0
    }

    /// Largest pole cross-check distance.
    pub fn worst_pole_mismatch(&self) -> f64 {
        self.poles().map(|e| e.cross_check).fold(0.0, f64::max)
    }
}

const BASE_SEGMENTS: usize = 8;
const MAX_DEPTH: u32 = 4;

/// `tau_{n-1}`, `tau_n`, `q` and their log-derivatives at one point.
struct Sample {
    values: [ApComplex; 3],
    logd: [ApComplex; 3],
}

fn sample_from(d: &TauData, lambda: &Lambda) -> Sample {
    let sol = d.solution(lambda);
    let qp = sol.qprime.clone().expect("tau route carries q'");
    Sample {
        logd: [&d.prev[1] / &d.prev[0], &d.cur[1] / &d.cur[0], &qp / &sol.q],
        values: [d.prev[0].clone(), d.cur[0].clone(), sol.q],
    }
}

struct Scanner<'a> {
    n: usize,
    lambda: &'a Lambda,
    seed: SeedSpec,
    ctx: PrecCtx,
}

/// Argument increments of `tau_{n-1}`, `tau_n`, `q` along one edge.
struct EdgeResult {
    inc: [f64; 3],
    depth: u32,
    ok: bool,
}

impl Scanner<'_> {
    fn sample(&self, z: &ApComplex) -> Result<Option<Sample>> {
        match tau_data(self.n, z, &self.seed, &self.ctx) {
            Ok(d) => Ok(Some(sample_from(&d, self.lambda))),
            Err(e) if e.is_singularity() => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Each increment is `arg(f_b / f_a) + 2 pi m`, with `m` picked by the
    /// trapezoid estimate of `Im int f'/f`. A segment is accepted when the
    /// trapezoid value sits within 0.3 of the chosen branch and the turn is
    /// below `pi/2`; otherwise it is bisected.
    fn segment(&self, a: (&ApComplex, &Sample), b: (&ApComplex, &Sample), depth: u32) -> Result<EdgeResult> {
        let dz = b.0 - a.0;
        let mut inc = [0.0; 3];
        let mut resolved = true;
        for k in 0..3 {
            let trap = (&(&(&a.1.logd[k] + &b.1.logd[k]) * &dz).div_u64(2)).im.to_f64();
            let principal = (&b.1.values[k] / &a.1.values[k]).arg().to_f64();
            let m = ((trap - principal) / (2.0 * PI)).round();
            let delta = principal + 2.0 * PI * m;
            if (trap - delta).abs() >= 0.3 || delta.abs() >= PI / 2.0 {
                resolved = false;
            }
            inc[k] = delta;
        }
        if resolved {
            return Ok(EdgeResult { inc, depth, ok: true });
        }
        if depth >= MAX_DEPTH {
            return Ok(EdgeResult { inc, depth, ok: false });
        }
        let mid = (a.0 + b.0).div_u64(2);
        let Some(ms) = self.sample(&mid)? else {
            return Ok(EdgeResult { inc, depth, ok: false });
        };
        let l = self.segment(a, (&mid, &ms), depth + 1)?;
        let r = self.segment((&mid, &ms), b, depth + 1)?;
        Ok(EdgeResult {
            inc: [0, 1, 2].map(|k| l.inc[k] + r.inc[k]),
            depth: l.depth.max(r.depth),
            ok: l.ok && r.ok,
        })
    }

    fn edge(&self, a: &ApComplex, b: &ApComplex) -> Result<EdgeResult> {
        let step = (b - a).div_u64(BASE_SEGMENTS as u64);
        let mut pts = vec![a.clone()];
        for s in 1..BASE_SEGMENTS {
            pts.push(a + &step.mul_i64(s as i64));
        }
        pts.push(b.clone());
        let mut samples = Vec::with_capacity(pts.len());
        for z in &pts {
            match self.sample(z)? {
                Some(s) => samples.push(s),
                None => {
                    return Ok(EdgeResult {
                        inc: [0.0; 3],
                        depth: 0,
                        ok: false,
                    })
                }
            }
        }
        let mut out = EdgeResult {
            inc: [0.0; 3],
            depth: 0,
            ok: true,
        };
        for s in 0..BASE_SEGMENTS {
            let r = self.segment((&pts[s], &samples[s]), (&pts[s + 1], &samples[s + 1]), 0)?;
            for k in 0..3 {
                out.inc[k] += r.inc[k];
            }
            out.depth = out.depth.max(r.depth);
            out.ok &= r.ok;
        }
        Ok(out)
    }

    /// Newton on `tau_{n-1}` (`which = 0`), `tau_n` (`1`) or `q` (`2`).
    /// `which = 3` is Newton on `1/q`, converging to poles of `q`.
    fn newton(&self, start: &ApComplex, which: usize) -> Option<ApComplex> {
        let stop = -(self.ctx.digits() as f64) / 2.0;
        let mut z = start.clone();
        for _ in 0..60 {
            let d = tau_data_unchecked(self.n, &z, &self.seed, &self.ctx).ok()?;
            let step = match which {
                0 => &d.prev[0] / &d.prev[1],
                1 => &d.cur[0] / &d.cur[1],
                _ => {
                    let sol = d.solution(self.lambda);
                    let r = &sol.q / sol.qprime.as_ref()?;
                    if which == 2 {
                        r
                    } else {
                        -r
                    }
                }
            };
            if !step.is_finite() {
                return None;
            }
            z -= &step;
            let size = step.log10_abs();
            if size < stop {
                // one extra step past the stopping threshold
                let d = tau_data_unchecked(self.n, &z, &self.seed, &self.ctx).ok()?;
                let step = match which {
                    0 => &d.prev[0] / &d.prev[1],
                    1 => &d.cur[0] / &d.cur[1],
                    _ => {
                        let sol = d.solution(self.lambda);
                        let r = &sol.q / sol.qprime.as_ref()?;
                        if which == 2 {
                            r
                        } else {
                            -r
                        }
                    }
                };
                if step.is_finite() {
                    z -= &step;
                }
                return Some(z);
            }
            if size > 2.0 {
                return None;
            }
        }
        None
    }

    /// `(1/2 pi i) \oint q dz` on a circle by the periodic trapezoid rule.
    fn residue(&self, centre: &ApComplex, radius: f64) -> Result<f64> {
        let m = 64;
        let bits = self.ctx.bits();
        let mut acc = self.ctx.zero();
        for k in 0..m {
            let th = Float::with_val(bits, 2.0 * PI * k as f64 / m as f64);
            let w = ApComplex::cis(&th, bits).scale(&self.ctx.real(radius));
            let z = centre + &w;
            let d = tau_data(self.n, &z, &self.seed, &self.ctx)?;
            let q = d.solution(self.lambda).q;
            // dz = i w dtheta, so (1/2 pi i) sum q i w (2 pi / m) = sum q w / m
            acc += &(&q * &w);
        }
        Ok(acc.div_u64(m as u64).re.to_f64())
    }
}

fn grid_point(bbox: &ScanBox, grid: &ScanGrid, i: usize, j: usize, ctx: &PrecCtx) -> ApComplex {
    let re = bbox.re.0 + (bbox.re.1 - bbox.re.0) * i as f64 / grid.nre as f64;
    let im = bbox.im.0 + (bbox.im.1 - bbox.im.0) * j as f64 / grid.nim as f64;
    ctx.complex(re, im)
}

fn cell_of(bbox: &ScanBox, grid: &ScanGrid, z: &ApComplex) -> Option<(usize, usize)> {
    let c = z.to_c64();
    let u = (c.re - bbox.re.0) / (bbox.re.1 - bbox.re.0) * grid.nre as f64;
    let v = (c.im - bbox.im.0) / (bbox.im.1 - bbox.im.0) * grid.nim as f64;
    if !(0.0..grid.nre as f64).contains(&u) || !(0.0..grid.nim as f64).contains(&v) {
        return None;
    }
    Some((u as usize, v as usize))
}

/// Zeros and poles of `q_n(z; lambda)` in a box.
///
/// Argument increments of `tau_{n-1}`, `tau_n` and `q_n` are accumulated on
/// every cell edge. Cell windings give the zero counts of both tau functions
/// (the poles of `q`) and, by difference, the zeros of `q`. Roots are then
/// located by Newton from points inside the cell and checked against the
/// counts; a cell whose counts are not met, or whose boundary could not be
/// resolved, is flagged.
pub fn pole_zero_scan(n: usize, lambda: &Lambda, bbox: ScanBox, grid: ScanGrid, ctx: &PrecCtx) -> Result<PoleZeroReport> {
    if n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if grid.nre == 0 || grid.nim == 0 || !(bbox.re.0 < bbox.re.1 && bbox.im.0 < bbox.im.1) {
        return Err(Error::InvalidInput("scan box and grid must be non-empty".into()));
    }
    let sc = Scanner {
        n,
        lambda,
        seed: SeedSpec::from_lambda(lambda, ctx),
        ctx: *ctx,
    };
    let (nre, nim) = (grid.nre, grid.nim);
    let gp = |i, j| grid_point(&bbox, &grid, i, j, ctx);

    // horizontal edges (i, j) -> (i+1, j), then vertical (i, j) -> (i, j+1)
    let mut jobs = Vec::new();
    for j in 0..=nim {
        for i in 0..nre {
            jobs.push(((i, j), (i + 1, j)));
        }
    }
    for i in 0..=nre {
        for j in 0..nim {
            jobs.push(((i, j), (i, j + 1)));
        }
    }
    let edges: Vec<EdgeResult> = jobs
        .par_iter()
        .map(|&(a, b)| sc.edge(&gp(a.0, a.1), &gp(b.0, b.1)))
        .collect::<Result<_>>()?;
    let h = |i: usize, j: usize| &edges[j * nre + i];
    let v = |i: usize, j: usize| &edges[(nim + 1) * nre + i * nim + j];

    let wind = |k: usize, i: usize, j: usize| {
        let total = h(i, j).inc[k] + v(i + 1, j).inc[k] - h(i, j + 1).inc[k] - v(i, j).inc[k];
        (total / (2.0 * PI)).round() as i64
    };
    let mut cells: Vec<CellReport> = Vec::with_capacity(nre * nim);
    for j in 0..nim {
        for i in 0..nre {
            let four = [h(i, j), v(i + 1, j), h(i, j + 1), v(i, j)];
            let zp = if n == 1 { 0 } else { wind(0, i, j) };
            let zc = wind(1, i, j);
            let wq = wind(2, i, j);
            cells.push(CellReport {
                i,
                j,
                winding_q: wq,
                zeros_tau_prev: zp,
                zeros_tau_cur: zc,
                zeros_q: wq + zp + zc,
                depth: four.iter().map(|e| e.depth).max().unwrap_or(0),
                flagged: four.iter().any(|e| !e.ok) || zp < 0 || zc < 0 || wq + zp + zc < 0,
            });
        }
    }

    // Newton from the cell centre, the quarter centres and the corners
    let starts = |i: usize, j: usize| -> Vec<ApComplex> {
        let fr = [(0.5, 0.5), (0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75), (0.1, 0.1), (0.9, 0.1), (0.1, 0.9), (0.9, 0.9)];
        let dre = (bbox.re.1 - bbox.re.0) / nre as f64;
        let dim = (bbox.im.1 - bbox.im.0) / nim as f64;
        fr.iter()
            .map(|(a, b)| {
                ctx.complex(
                    bbox.re.0 + (i as f64 + a) * dre,
                    bbox.im.0 + (j as f64 + b) * dim,
                )
            })
            .collect()
    };
    let dedup_log = -(ctx.digits() as f64) / 3.0;
    let want = |c: &CellReport, which: usize| match which {
        0 => c.zeros_tau_prev,
        1 => c.zeros_tau_cur,
        _ => c.zeros_q,
    };
    let jobs: Vec<(usize, usize)> = (0..3)
        .flat_map(|w| (0..cells.len()).map(move |c| (w, c)))
        .filter(|&(w, c)| want(&cells[c], w) > 0)
        .collect();
    let found: Vec<(usize, Vec<ApComplex>)> = jobs
        .par_iter()
        .map(|&(w, c)| {
            let cell = &cells[c];
            let mut roots: Vec<ApComplex> = Vec::new();
            for s in starts(cell.i, cell.j) {
                if roots.len() as i64 >= want(cell, w) {
                    break;
                }
                if let Some(r) = sc.newton(&s, w) {
                    if cell_of(&bbox, &grid, &r) == Some((cell.i, cell.j))
                        && roots.iter().all(|x| (x - &r).log10_abs() > dedup_log)
                    {
                        roots.push(r);
                    }
                }
            }
            (w, roots)
        })
        .collect();

    let mut roots_by_kind: [Vec<ApComplex>; 3] = Default::default();
    for ((w, c), (_, roots)) in jobs.iter().zip(found) {
        if roots.len() as i64 != want(&cells[*c], *w) {
            cells[*c].flagged = true;
        }
        roots_by_kind[*w].extend(roots);
    }

    let cell_diag = ((bbox.re.1 - bbox.re.0) / nre as f64).hypot((bbox.im.1 - bbox.im.0) / nim as f64);
    let all_tau: Vec<ApComplex> = roots_by_kind[0].iter().chain(&roots_by_kind[1]).cloned().collect();
    let nearest = |z: &ApComplex, pool: &[ApComplex]| -> f64 {
        pool.iter()
            .map(|x| (x - z).abs().to_f64())
            .filter(|d| *d > 0.0)
            .fold(f64::INFINITY, f64::min)
    };
    let everything: Vec<ApComplex> = all_tau.iter().chain(&roots_by_kind[2]).cloned().collect();

    let pole_jobs: Vec<(EntrySource, ApComplex)> = roots_by_kind[0]
        .iter()
        .map(|z| (EntrySource::TauPrev, z.clone()))
        .chain(roots_by_kind[1].iter().map(|z| (EntrySource::TauCur, z.clone())))
        .collect();
    let mut entries: Vec<PoleZeroEntry> = pole_jobs
        .par_iter()
        .map(|(src, z)| {
            let sep = nearest(z, &everything).min(cell_diag);
            let radius = (0.2 * sep).min(0.1);
            let nudge = ctx.complex(radius * 0.3, radius * 0.2);
            let via_q = sc.newton(&(z + &nudge), 3);
            let cross_check = via_q.map_or(f64::INFINITY, |p| (&p - z).abs().to_f64());
            let res = sc.residue(z, radius)?;
            Ok(PoleZeroEntry {
                location: z.clone(),
                kind: EntryKind::Pole,
                source: *src,
                winding: -1,
                residue: Some(res.round() as i32),
                residue_defect: (res - res.round()).abs(),
                cross_check,
            })
        })
        .collect::<Result<_>>()?;
    for z in &roots_by_kind[2] {
        entries.push(PoleZeroEntry {
            location: z.clone(),
            kind: EntryKind::Zero,
            source: EntrySource::QRoot,
            winding: 1,
            residue: None,
            residue_defect: 0.0,
            cross_check: nearest(z, &all_tau),
        });
    }
    entries.sort_by(|a, b| {
        let (x, y) = (a.location.to_c64(), b.location.to_c64());
        (a.kind as u8, x.re, x.im)
            .partial_cmp(&(b.kind as u8, y.re, y.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(PoleZeroReport {
        n,
        lambda: lambda.clone(),
        bbox,
        grid,
        digits: ctx.digits(),
        entries,
        cells,
    })
}

/// The inequalities tested by [`monotonicity_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `beta_{n-1}'(t, 1) > 0`.
    BetaPrevIncreasing,
    /// `0 < beta_n' < 1/(2 sqrt t)` for `t > 0`.
    BetaSlopeBound,
    /// `sqrt t < beta_n < beta_{n+1}` for `t > 0`.
    BetaOrdering,
    /// `sgn h_n = (-1)^n`.
    HnSign,
    /// `q_{n+1}(z; 0) < q_n(z; 0)` at `z = -2^{1/3} t <= 0`.
    QOrdering,
}

impl Check {
    pub const ALL: [Check; 5] = [
        Check::BetaPrevIncreasing,
        Check::BetaSlopeBound,
        Check::BetaOrdering,
        Check::HnSign,
        Check::QOrdering,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Check::BetaPrevIncreasing => "beta_prev_increasing",
            Check::BetaSlopeBound => "beta_slope_bound",
            Check::BetaOrdering => "beta_ordering",
            Check::HnSign => "hn_sign",
            Check::QOrdering => "q_ordering",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check: Check,
    pub outcome: Outcome,
    /// Signed slack of the tightest inequality involved.
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub n: usize,
    pub t: f64,
    pub beta: f64,
    pub beta_prime: f64,
    pub beta_prime_error: f64,
    pub h: f64,
    pub checks: Vec<CheckResult>,
}

impl SweepPoint {
    pub fn outcome(&self, c: Check) -> Option<Outcome> {
        self.checks.iter().find(|r| r.check == c).map(|r| r.outcome)
    }
}

/// A grid value skipped because the coefficients do not exist there.
#[derive(Debug, Clone, Serialize)]
pub struct Skip {
    pub t: f64,
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FirstHolds {
    pub check: Check,
    /// Smallest `n0` such that the check passes at every grid point for all
    /// `n0 <= n <= n_max`; `None` when it fails at `n_max`.
    pub n0: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub n_max: usize,
    pub digits: u32,
    pub t_grid: Vec<f64>,
    pub points: Vec<SweepPoint>,
    /// The closed endpoint `z = 0` (`t = 0`), recorded apart from the grid.
    pub endpoint: Vec<SweepPoint>,
    pub skips: Vec<Skip>,
    pub first_holds: Vec<FirstHolds>,
}

impl SweepReport {
    fn count(&self, o: Outcome) -> usize {
        self.points
            .iter()
            .flat_map(|p| &p.checks)
            .filter(|r| r.outcome == o)
            .count()
    }

    pub fn violations(&self) -> usize {
        self.count(Outcome::Fail)
    }

    pub fn indeterminates(&self) -> usize {
        self.count(Outcome::Indeterminate)
    }

    pub fn first_failure(&self, c: Check) -> Option<&SweepPoint> {
        self.points.iter().find(|p| p.outcome(c) == Some(Outcome::Fail))
    }
}

/// `points` values evenly spaced over `[iota_1 + 0.01, 10]`.
pub fn default_t_grid(points: usize, ctx: &PrecCtx) -> Result<Vec<f64>> {
    let lo = airy_first_zero(ctx)?.to_c64().re + 0.01;
    let hi = 10.0;
    if points < 2 {
        return Ok(vec![lo]);
    }
    Ok((0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect())
}

/// Coefficients at `t`, `t +- h`, `t +- 2h` for one grid value.
struct Stencil {
    centre: CoeffTable,
    /// `beta_n'` by Richardson-extrapolated central differences, with error.
    slopes: Vec<(f64, f64)>,
}

fn stencil<F>(t: f64, n_top: usize, ctx: &PrecCtx, tables: &F) -> Result<Stencil>
where
    F: Fn(&ApComplex, usize, &PrecCtx) -> Result<CoeffTable>,
{
    let bits = ctx.bits();
    let h = pow10(-(ctx.digits() as f64) / 3.0, bits);
    let tc = ctx.complex(t, 0.0);
    let at = |k: i64| -> Result<CoeffTable> {
        let shift = ApComplex::from_real(Float::with_val(bits, &h * k));
        tables(&(&tc + &shift), n_top, ctx)
    };
    let centre = at(0)?;
    let (p1, m1, p2, m2) = (at(1)?, at(-1)?, at(2)?, at(-2)?);
    let hf = h.to_f64();
    let eps = pow10(-(ctx.digits() as f64 - 5.0), 53).to_f64();
    let slopes = (0..=n_top)
        .map(|n| {
            let b = |tab: &CoeffTable| tab.get(n).beta_n.clone();
            let d1 = (&b(&p1) - &b(&m1)).scale(&Float::with_val(bits, &h * 2u32).recip());
            let d2 = (&b(&p2) - &b(&m2)).scale(&Float::with_val(bits, &h * 4u32).recip());
            let rich = (&d1.mul_i64(4) - &d2).div_u64(3);
            let trunc = (&d1 - &d2).abs().to_f64();
            let round = eps * b(&centre).abs().to_f64().max(1.0) / hf;
            (rich.re.to_f64(), trunc + round)
        })
        .collect();
    Ok(Stencil { centre, slopes })
}

fn decide(margin: f64, tol: f64) -> Outcome {
    if margin.abs() <= tol {
        Outcome::Indeterminate
    } else if margin > 0.0 {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

/// Joins several inequalities: the verdict is the worst of the parts.
fn min_margin(parts: &[(f64, f64)]) -> (f64, f64) {
    let rank = |o: Outcome| match o {
        Outcome::Fail => 0,
        Outcome::Indeterminate => 1,
        Outcome::Pass => 2,
    };
    parts
        .iter()
        .copied()
        .min_by(|a, b| {
            (rank(decide(a.0, a.1)), a.0)
                .partial_cmp(&(rank(decide(b.0, b.1)), b.0))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or((f64::INFINITY, 0.0))
}

fn points_at(t: f64, n_max: usize, st: &Stencil, ctx: &PrecCtx, endpoint: bool) -> Vec<SweepPoint> {
    let rel = pow10(-(ctx.digits() as f64 - 10.0), 53).to_f64();
    let beta = |n: usize| st.centre.get(n).beta_n.re.to_f64();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let (bp, bp_err) = st.slopes[n];
        let (bprev, bprev_err) = st.slopes[n - 1];
        let hn = &st.centre.get(n).h_n;
        let hre = hn.re.to_f64();
        let b = beta(n);
        let tol_b = rel * b.abs().max(1.0);
        let mut checks = Vec::new();
        let mut push = |check: Check, (m, tol): (f64, f64)| {
            checks.push(CheckResult {
                check,
                outcome: decide(m, tol),
                margin: m,
            })
        };
        if !endpoint {
            push(Check::BetaPrevIncreasing, (bprev, 10.0 * bprev_err));
            // sign of h_n: scale-free test on the real part
            let sgn = if n % 2 == 0 { 1.0 } else { -1.0 };
            let habs = hn.abs().to_f64();
            push(Check::HnSign, (sgn * hre / habs, rel.max(hn.im.to_f64().abs() / habs)));
            if t > 0.0 {
                let cap = 0.5 / t.sqrt();
                push(
                    Check::BetaSlopeBound,
                    min_margin(&[(bp, 10.0 * bp_err), (cap - bp, 10.0 * bp_err + rel)]),
                );
                push(
                    Check::BetaOrdering,
                    min_margin(&[(b - t.sqrt(), tol_b), (beta(n + 1) - b, tol_b)]),
                );
            }
        }
        if t >= 0.0 {
            // bridge with N = 1: q_n = -2^{-1/3} beta_{n-1}, so the ordering of
            // q_{n+1}, q_n is that of beta_n, beta_{n-1}
            let q = |k: usize| -beta(k - 1) / 2f64.cbrt();
            push(Check::QOrdering, (q(n) - q(n + 1), tol_b));
        }
        out.push(SweepPoint {
            n,
            t,
            beta: b,
            beta_prime: bp,
            beta_prime_error: bp_err,
            h: hre,
            checks,
        });
    }
    out
}

/// Sweep of the monotonicity inequalities at `N = 1`, `lambda = 0`.
///
/// Grid values at which the coefficients do not exist (a Hankel determinant
/// vanishes) are recorded as skips and carry no verdict.
pub fn monotonicity_sweep(n_max: usize, t_grid: &[f64], ctx: &PrecCtx) -> Result<SweepReport> {
    let lambda = Lambda::zero(ctx.bits());
    monotonicity_sweep_with(n_max, t_grid, ctx, &|t: &ApComplex, n_top: usize, c: &PrecCtx| {
        coeff_table(n_top, t, 1.0, &lambda, c)
    })
}

/// [`monotonicity_sweep`] with the coefficient source supplied by the caller.
pub fn monotonicity_sweep_with<F>(n_max: usize, t_grid: &[f64], ctx: &PrecCtx, tables: &F) -> Result<SweepReport>
where
    F: Fn(&ApComplex, usize, &PrecCtx) -> Result<CoeffTable> + Sync,
{
    if n_max < 1 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    let iota = airy_first_zero(ctx)?.to_c64().re;
    if let Some(bad) = t_grid.iter().find(|t| !t.is_finite() || **t <= iota) {
        return Err(Error::InvalidInput(format!("grid value {bad} is not above iota_1 = {iota:.7}")));
    }
    let n_top = n_max + 1;
    let run = |t: f64, endpoint: bool| -> Result<std::result::Result<Vec<SweepPoint>, Skip>> {
        match stencil(t, n_top, ctx, tables) {
            Ok(st) => Ok(Ok(points_at(t, n_max, &st, ctx, endpoint))),
            Err(e) if e.is_singularity() => Ok(Err(Skip {
                t,
                kind: e.kind(),
                message: e.to_string(),
            })),
            Err(e) => Err(e),
        }
    };
    let per_t: Vec<_> = t_grid.par_iter().map(|&t| run(t, false)).collect::<Result<_>>()?;
    let mut points = Vec::new();
    let mut skips = Vec::new();
    for r in per_t {
        match r {
            Ok(p) => points.extend(p),
            Err(s) => skips.push(s),
        }
    }
    let endpoint = match run(0.0, true)? {
        Ok(p) => p,
        Err(s) => {
            skips.push(s);
            Vec::new()
        }
    };
    points.sort_by(|a, b| (a.n, a.t).partial_cmp(&(b.n, b.t)).unwrap_or(std::cmp::Ordering::Equal));

    let first_holds = Check::ALL
        .iter()
        .map(|&c| {
            let holds_at = |n: usize| {
                points
                    .iter()
                    .filter(|p| p.n == n)
                    .all(|p| p.outcome(c).map_or(true, |o| o == Outcome::Pass))
            };
            let mut n0 = None;
            for n in (1..=n_max).rev() {
                if holds_at(n) {
                    n0 = Some(n);
                } else {
                    break;
                }
            }
            FirstHolds { check: c, n0 }
        })
        .collect();
    Ok(SweepReport {
        n_max,
        digits: ctx.digits(),
        t_grid: t_grid.to_vec(),
        points,
        endpoint,
        skips,
        first_holds,
    })
}

/// Painleve variable of a grid value at `N = 1`.
pub fn z_of_grid(t: f64, ctx: &PrecCtx) -> f64 {
    z_of_t(&ctx.complex(t, 0.0), 1.0, ctx.bits()).re.to_f64()
}
