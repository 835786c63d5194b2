//! Honest indexations: per-window selectors `tau_{s,t}` (argmin-type and
//! last-zero-type), their monotone regularization on `(0, T]`, duality
//! through time reflection, nestedness audits, and exponential-time split
//! samples for the independence experiments.

use crate::bessel::{last_zero, scheme_for};
use crate::error::{Error, Result};
use crate::paths::{BrownianPath, GridSpec};
use crate::rng::{derive_seed, streams, CounterRng};
use crate::sets::grid_argmin_tick;

/// A nested pair of windows: outer `(s, t)` and inner `(u, v)`.
pub type NestedWindows = ((f64, f64), (f64, f64));

/// Selector family kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IndexerKind {
    /// Argmin of the path on the window.
    Min,
    /// Argmax of the path (argmin of the negated path).
    Max,
    /// Argmin of `path(t) + kappa * t`.
    DriftedMin(f64),
    /// Last zero of the squared-Bessel solution restarted at the window
    /// left endpoint.
    Bessel(f64),
}

/// An honest indexation evaluator. `dual()` wraps the evaluation through
/// time reflection and is its own inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HonestIndexer {
    pub kind: IndexerKind,
    dualized: bool,
}

impl HonestIndexer {
    pub fn new(kind: IndexerKind) -> Self {
        HonestIndexer {
            kind,
            dualized: false,
        }
    }

    pub fn is_dual(&self) -> bool {
        self.dualized
    }

    /// Dual indexation: `dual.tau(p, s, t) = -tau(reflect(p), -t, -s)`.
    pub fn dual(&self) -> Self {
        HonestIndexer {
            kind: self.kind,
            dualized: !self.dualized,
        }
    }

    /// Evaluate `tau_{s,t}` on the path; always lands in `[s, t]`.
    pub fn tau(&self, path: &BrownianPath, s: f64, t: f64) -> Result<f64> {
        if s >= t {
            return Err(Error::domain(format!("window needs s < t, got [{s}, {t}]")));
        }
        if self.dualized {
            let base = HonestIndexer::new(self.kind);
            return Ok(-base.tau(&path.reflect(), -t, -s)?);
        }
        let grid = path.grid();
        match self.kind {
            IndexerKind::Min => {
                let tick =
                    grid_argmin_tick(path, grid.tick_of_time(s)?, grid.tick_of_time(t)?, 0.0)?;
                Ok(grid.tick_time(tick))
            }
            IndexerKind::DriftedMin(kappa) => {
                let tick =
                    grid_argmin_tick(path, grid.tick_of_time(s)?, grid.tick_of_time(t)?, kappa)?;
                Ok(grid.tick_time(tick))
            }
            IndexerKind::Max => {
                let neg = path.negate();
                let tick =
                    grid_argmin_tick(&neg, grid.tick_of_time(s)?, grid.tick_of_time(t)?, 0.0)?;
                Ok(grid.tick_time(tick))
            }
            IndexerKind::Bessel(d) => last_zero(path, d, s, t, scheme_for(d), 0.0),
        }
    }
}

/// Right-continuous nondecreasing envelope of `t -> tau_{0,t}` on `(0, T]`.
#[derive(Debug, Clone)]
pub struct MonotoneTau {
    /// Grid times `t` in `(0, T]`.
    pub times: Vec<f64>,
    /// Envelope values; nondecreasing and `<= t` at every node.
    pub values: Vec<f64>,
}

impl MonotoneTau {
    /// Indices where the envelope strictly increases.
    pub fn jump_indices(&self) -> Vec<usize> {
        (1..self.values.len())
            .filter(|i| self.values[*i] > self.values[i - 1])
            .collect()
    }
}

impl HonestIndexer {
    /// Monotone regularization: `min(t, min over grid q in (t, T] of
    /// tau_{0,q})`, evaluated on the grid. Clamping to the diagonal keeps
    /// the majorization exact on grids; without it the envelope can exceed
    /// `t` by one step. Only base (non-dual) indexers regularize directly;
    /// the dual's regularization is the reflected object.
    pub fn regularize(&self, path: &BrownianPath, horizon: f64) -> Result<MonotoneTau> {
        if self.dualized {
            return Err(Error::usage(
                "regularize the base indexer and reflect, not the dual",
            ));
        }
        let grid = path.grid();
        let t_tick = grid.tick_of_time(horizon)?;
        let zero_tick = grid.tick_of_time(0.0)?;
        if t_tick <= zero_tick {
            return Err(Error::domain("horizon must be positive"));
        }
        let n = (t_tick - zero_tick) as usize;
        // tau_{0,q} for every grid q in (0, T], computed incrementally
        let mut tau_q = Vec::with_capacity(n);
        match self.kind {
            IndexerKind::Min | IndexerKind::DriftedMin(_) | IndexerKind::Max => {
                let kappa = match self.kind {
                    IndexerKind::DriftedMin(k) => k,
                    _ => 0.0,
                };
                let sign = if self.kind == IndexerKind::Max {
                    -1.0
                } else {
                    1.0
                };
                let mut best_val = f64::INFINITY;
                let mut best_time = 0.0;
                for tick in zero_tick..=t_tick {
                    let time = grid.tick_time(tick);
                    let v = sign * path.value_at_tick(tick)? + kappa * time;
                    if v < best_val {
                        best_val = v;
                        best_time = time;
                    }
                    if tick > zero_tick {
                        tau_q.push(best_time);
                    }
                }
            }
            IndexerKind::Bessel(d) => {
                let z = crate::bessel::solve(path, d, 0.0, scheme_for(d))?;
                let mut last_contact = 0.0;
                for tick in zero_tick + 1..=t_tick {
                    if z.value_at_tick(tick)? == 0.0 {
                        last_contact = grid.tick_time(tick);
                    }
                    tau_q.push(last_contact);
                }
            }
        }
        // suffix minima, clamped at the diagonal
        let mut values = vec![0.0; n];
        let mut suffix = f64::INFINITY;
        for i in (0..n).rev() {
            suffix = suffix.min(tau_q[i]);
            let t = grid.tick_time(zero_tick + i as i64 + 1);
            values[i] = suffix.min(t);
        }
        let times = (1..=n)
            .map(|i| grid.tick_time(zero_tick + i as i64))
            .collect();
        Ok(MonotoneTau { times, values })
    }

    /// Fraction of nested windows `(u,v) inside (s,t)` where the outer
    /// selector lands inside `(u,v)` yet differs from the inner one by more
    /// than `tol_steps` grid steps.
    pub fn nestedness_audit(
        &self,
        path: &BrownianPath,
        nested: &[NestedWindows],
        tol_steps: u32,
    ) -> Result<f64> {
        let h = path.grid().step();
        let tol = tol_steps as f64 * h + 1e-15;
        let mut applicable = 0usize;
        let mut violations = 0usize;
        for &((s, t), (u, v)) in nested {
            if u < s || v > t || u >= v {
                return Err(Error::domain(format!(
                    "audit window ({u}, {v}) not nested in ({s}, {t})"
                )));
            }
            let outer = self.tau(path, s, t)?;
            if outer > u && outer < v {
                applicable += 1;
                let inner = self.tau(path, u, v)?;
                if (outer - inner).abs() > tol {
                    violations += 1;
                }
            }
        }
        if applicable == 0 {
            return Ok(0.0);
        }
        Ok(violations as f64 / applicable as f64)
    }
}

/// Scalar summaries of one side of the split.
#[derive(Debug, Clone, Copy)]
pub struct SplitFeatures {
    pub duration: f64,
    pub endpoint: f64,
    pub extremum: f64,
    pub occupation: f64,
}

impl SplitFeatures {
    pub const NAMES: [&'static str; 4] = ["duration", "endpoint", "extremum", "occupation"];

    pub fn as_array(&self) -> [f64; 4] {
        [self.duration, self.endpoint, self.extremum, self.occupation]
    }
}

/// One replicate of the exponential-time splitting experiment.
#[derive(Debug, Clone, Copy)]
pub struct SplitSample {
    /// Exponential horizon drawn by inverse CDF.
    pub e: f64,
    /// Logged uniform with `e = -ln(u) / lambda`.
    pub uniform: f64,
    /// Selector value on `[0, e]`.
    pub tau: f64,
    /// Features of the stopped pre-path `B^{tau}`.
    pub pre: SplitFeatures,
    /// Features of the post-`tau` increments on `[0, e - tau]`.
    pub post: SplitFeatures,
}

/// Parameters for split sampling.
#[derive(Debug, Clone, Copy)]
pub struct SplitParams {
    pub lambda: f64,
    pub level: u32,
    /// Extra window beyond `[0, e]` so the selector is never clipped.
    pub pad: f64,
}

impl SplitParams {
    pub fn new(lambda: f64, level: u32) -> Self {
        SplitParams {
            lambda,
            level,
            pad: 0.5,
        }
    }
}

/// Draw one split replicate. The exponential uses its own RNG stream of the
/// replicate seed, so horizon and path randomness are independent by
/// construction.
pub fn sample_split(
    ix: &HonestIndexer,
    params: &SplitParams,
    master_seed: u64,
    replicate: u64,
) -> Result<SplitSample> {
    split_replicate(ix, params, master_seed, replicate).map(|(s, _)| s)
}

/// As [`sample_split`], returning the sampled path as well (experiments
/// that confront the selector with sets built on the same path need it).
pub fn split_replicate(
    ix: &HonestIndexer,
    params: &SplitParams,
    master_seed: u64,
    replicate: u64,
) -> Result<(SplitSample, BrownianPath)> {
    if params.lambda <= 0.0 {
        return Err(Error::domain("exponential rate must be > 0"));
    }
    let seed = derive_seed(master_seed, replicate);
    let exp_rng = CounterRng::new(seed, streams::EXPONENTIAL);
    let (e_raw, uniform) = exp_rng.exp_at(0, params.lambda);
    let scale = (1u64 << params.level) as f64;
    let e_tick = ((e_raw * scale).ceil() as i64).max(1);
    let pad_ticks = ((params.pad * scale).ceil() as i64).max(1);
    let grid = GridSpec::new(-pad_ticks, e_tick + pad_ticks, params.level)?;
    let path = BrownianPath::sample(grid, seed)?;
    let e = grid.tick_time(e_tick);
    let tau = ix.tau(&path, 0.0, e)?;
    let tau_tick = grid.tick_of_time(tau)?;
    let h = grid.step();

    let b_tau = path.value_at_tick(tau_tick)?;
    let mut pre_max = f64::NEG_INFINITY;
    let mut pre_occ = 0.0;
    for tick in 0..=tau_tick {
        let v = path.value_at_tick(tick)?;
        pre_max = pre_max.max(v);
        if v > 0.0 {
            pre_occ += h;
        }
    }
    let mut post_max = f64::NEG_INFINITY;
    let mut post_occ = 0.0;
    for tick in tau_tick..=e_tick {
        let v = path.value_at_tick(tick)? - b_tau;
        post_max = post_max.max(v);
        if v > 0.0 {
            post_occ += h;
        }
    }
    let sample = SplitSample {
        e,
        uniform,
        tau,
        pre: SplitFeatures {
            duration: tau,
            endpoint: b_tau,
            extremum: pre_max,
            occupation: pre_occ,
        },
        post: SplitFeatures {
            duration: e - tau,
            endpoint: path.value_at_tick(e_tick)? - b_tau,
            extremum: post_max,
            occupation: post_occ,
        },
    };
    Ok((sample, path))
}

/// CSV export for split batches: `e,tau,pre_*,post_*`.
pub fn write_split_csv<W: std::io::Write>(
    samples: &[SplitSample],
    mut w: W,
) -> std::io::Result<()> {
    write!(w, "e,tau")?;
    for n in SplitFeatures::NAMES {
        write!(w, ",pre_{n}")?;
    }
    for n in SplitFeatures::NAMES {
        write!(w, ",post_{n}")?;
    }
    writeln!(w)?;
    for s in samples {
        write!(w, "{},{}", s.e, s.tau)?;
        for v in s.pre.as_array() {
            write!(w, ",{v}")?;
        }
        for v in s.post.as_array() {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}
