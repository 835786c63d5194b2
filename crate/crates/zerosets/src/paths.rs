//! Two-sided Brownian paths on dyadic grids: seeded sampling, bridge
//! refinement, Lévy shifts, time reflection and negation.
//!
//! Node times are stored as integer ticks at `2^-level` spacing, so time
//! arithmetic is exact and a value depends only on `(seed, level, tick,
//! lineage)` — two paths with the same seed agree on overlapping windows.

use crate::error::{Error, Result};
use crate::rng::{streams, tick_counter, CounterRng};
use std::io::Write;

/// Hard cap on grid refinement (memory guard).
pub const MAX_LEVEL: u32 = 30;
/// Hard cap on node count per path (memory guard).
pub const MAX_NODES: usize = 1 << 25;

/// Dyadic grid on `[left, right]` with step `2^-level`.
///
/// `level` is the log2 of grid points per unit time; endpoints are stored as
/// integer multiples of the step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    left_ticks: i64,
    right_ticks: i64,
    level: u32,
}

impl GridSpec {
    pub fn new(left_ticks: i64, right_ticks: i64, level: u32) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::capacity(format!(
                "grid level {level} exceeds maximum {MAX_LEVEL}"
            )));
        }
        if left_ticks >= right_ticks {
            return Err(Error::domain("grid needs left < right".to_string()));
        }
        let nodes = (right_ticks - left_ticks) as u128 + 1;
        if nodes > MAX_NODES as u128 {
            return Err(Error::capacity(format!(
                "grid with {nodes} nodes exceeds maximum {MAX_NODES}"
            )));
        }
        Ok(GridSpec {
            left_ticks,
            right_ticks,
            level,
        })
    }

    /// Build from real endpoints; they must sit on the dyadic grid.
    pub fn from_times(left: f64, right: f64, level: u32) -> Result<Self> {
        let scale = (1u64 << level.min(MAX_LEVEL)) as f64;
        let lt = (left * scale).round();
        let rt = (right * scale).round();
        if (left * scale - lt).abs() > 1e-6 || (right * scale - rt).abs() > 1e-6 {
            return Err(Error::domain(format!(
                "grid bounds ({left}, {right}) are not dyadic at level {level}"
            )));
        }
        GridSpec::new(lt as i64, rt as i64, level)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn step(&self) -> f64 {
        1.0 / (1u64 << self.level) as f64
    }

    pub fn left_ticks(&self) -> i64 {
        self.left_ticks
    }

    pub fn right_ticks(&self) -> i64 {
        self.right_ticks
    }

    pub fn left(&self) -> f64 {
        self.left_ticks as f64 * self.step()
    }

    pub fn right(&self) -> f64 {
        self.right_ticks as f64 * self.step()
    }

    pub fn num_nodes(&self) -> usize {
        (self.right_ticks - self.left_ticks) as usize + 1
    }

    pub fn node_time(&self, index: usize) -> f64 {
        (self.left_ticks + index as i64) as f64 * self.step()
    }

    pub fn tick_time(&self, tick: i64) -> f64 {
        tick as f64 * self.step()
    }

    pub fn contains_tick(&self, tick: i64) -> bool {
        tick >= self.left_ticks && tick <= self.right_ticks
    }

    pub fn index_of_tick(&self, tick: i64) -> Result<usize> {
        if !self.contains_tick(tick) {
            return Err(Error::domain(format!(
                "tick {tick} outside grid [{}, {}]",
                self.left_ticks, self.right_ticks
            )));
        }
        Ok((tick - self.left_ticks) as usize)
    }

    /// Nearest grid tick to a real time (used by snap-and-record shifts).
    pub fn nearest_tick(&self, t: f64) -> i64 {
        (t * (1u64 << self.level) as f64).round() as i64
    }

    /// Tick of an on-grid time; errors when `t` is off the grid.
    pub fn tick_of_time(&self, t: f64) -> Result<i64> {
        let scale = (1u64 << self.level) as f64;
        let raw = t * scale;
        let tick = raw.round();
        if (raw - tick).abs() > 1e-6 {
            return Err(Error::domain(format!(
                "time {t} is not a grid node at level {}",
                self.level
            )));
        }
        Ok(tick as i64)
    }
}

/// One operation applied to a path since it was sampled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineageOp {
    Refine { extra_levels: u32, seed: u64 },
    Shift { ticks: i64 },
    Reflect,
    Negate,
}

/// A sampled two-sided Brownian path. Immutable after construction; all
/// transforms return new paths and append to the lineage.
#[derive(Debug, Clone)]
pub struct BrownianPath {
    grid: GridSpec,
    values: Vec<f64>,
    seed: u64,
    lineage: Vec<LineageOp>,
}

impl BrownianPath {
    /// Sample with independent Gaussian increments of variance `step`.
    ///
    /// The grid must contain the origin; the two half-lines are driven by
    /// disjoint RNG streams so they are independent standard Brownian
    /// motions glued at `B(0) = 0`. Increment `k` of either stream is
    /// component `k mod 2` of the Box-Muller pair keyed at `k / 2`.
    pub fn sample(grid: GridSpec, seed: u64) -> Result<Self> {
        if !grid.contains_tick(0) {
            return Err(Error::domain(
                "sampling grid must contain the origin".to_string(),
            ));
        }
        let sqrt_h = grid.step().sqrt();
        let mut values = vec![0.0; grid.num_nodes()];
        let origin = grid.index_of_tick(0)?;
        values[origin] = 0.0;

        let right = CounterRng::new(seed, streams::RIGHT_INCREMENTS);
        let mut acc = 0.0;
        let mut k: u64 = 0;
        for v in values.iter_mut().skip(origin + 1) {
            acc += sqrt_h * normal_at_index(&right, k);
            *v = acc;
            k += 1;
        }

        let left = CounterRng::new(seed, streams::LEFT_INCREMENTS);
        acc = 0.0;
        k = 0;
        for idx in (0..origin).rev() {
            acc += sqrt_h * normal_at_index(&left, k);
            values[idx] = acc;
            k += 1;
        }

        Ok(BrownianPath {
            grid,
            values,
            seed,
            lineage: Vec::new(),
        })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn lineage(&self) -> &[LineageOp] {
        &self.lineage
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at_index(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn value_at_tick(&self, tick: i64) -> Result<f64> {
        Ok(self.values[self.grid.index_of_tick(tick)?])
    }

    pub fn value_at_time(&self, t: f64) -> Result<f64> {
        self.value_at_tick(self.grid.tick_of_time(t)?)
    }

    /// Bridge refinement by `extra_levels`: midpoints are conditional
    /// Gaussians `mean(neighbors) + N(0, step/4)`; existing node values are
    /// untouched. Sub-level `i` draws with seed `seed + i`, so refining by
    /// one level twice with seeds `(s, s+1)` equals refining once by two
    /// levels with seed `s`.
    pub fn refine(&self, extra_levels: u32, seed: u64) -> Result<Self> {
        if extra_levels == 0 {
            return Err(Error::domain("refine needs extra_levels >= 1".to_string()));
        }
        let mut grid = self.grid;
        let mut values = self.values.clone();
        for sub in 0..extra_levels {
            let target_level = grid.level + 1;
            let fine = GridSpec::new(grid.left_ticks * 2, grid.right_ticks * 2, target_level)?;
            let rng = CounterRng::new(
                seed.wrapping_add(sub as u64),
                streams::REFINE_BASE + target_level as u64,
            );
            let half_sd = (grid.step() / 4.0).sqrt();
            let mut fine_values = vec![0.0; fine.num_nodes()];
            for (i, v) in values.iter().enumerate() {
                fine_values[2 * i] = *v;
            }
            for i in 0..values.len() - 1 {
                let fine_tick = grid.left_ticks * 2 + 2 * i as i64 + 1;
                let mid = 0.5 * (values[i] + values[i + 1])
                    + half_sd * rng.normal_at(tick_counter(fine_tick));
                fine_values[2 * i + 1] = mid;
            }
            grid = fine;
            values = fine_values;
        }
        let mut lineage = self.lineage.clone();
        lineage.push(LineageOp::Refine { extra_levels, seed });
        Ok(BrownianPath {
            grid,
            values,
            seed: self.seed,
            lineage,
        })
    }

    /// Restrict to the sub-grid `[left, right]` (both on grid nodes).
    pub fn restrict(&self, left_tick: i64, right_tick: i64) -> Result<Self> {
        let lo = self.grid.index_of_tick(left_tick)?;
        let hi = self.grid.index_of_tick(right_tick)?;
        if lo >= hi {
            return Err(Error::domain("restrict needs left < right".to_string()));
        }
        Ok(BrownianPath {
            grid: GridSpec::new(left_tick, right_tick, self.grid.level)?,
            values: self.values[lo..=hi].to_vec(),
            seed: self.seed,
            lineage: self.lineage.clone(),
        })
    }

    /// Lévy shift: `result(t) = path(u + t) - path(u)`. Off-grid `u` snaps
    /// to the nearest node (the snapped tick is what enters the lineage).
    pub fn shift(&self, u: f64) -> Result<Self> {
        let tick = self.grid.nearest_tick(u);
        self.shift_ticks(tick)
    }

    pub fn shift_ticks(&self, tick: i64) -> Result<Self> {
        if !self.grid.contains_tick(tick) {
            return Err(Error::domain(format!(
                "shift by {tick} ticks leaves the grid window empty"
            )));
        }
        let pivot = self.values[self.grid.index_of_tick(tick)?];
        let values: Vec<f64> = self.values.iter().map(|v| v - pivot).collect();
        let grid = GridSpec::new(
            self.grid.left_ticks - tick,
            self.grid.right_ticks - tick,
            self.grid.level,
        )?;
        let mut lineage = self.lineage.clone();
        lineage.push(LineageOp::Shift { ticks: tick });
        Ok(BrownianPath {
            grid,
            values,
            seed: self.seed,
            lineage,
        })
    }

    /// Time reflection: `result(t) = path(-t)`.
    pub fn reflect(&self) -> Self {
        let grid = GridSpec {
            left_ticks: -self.grid.right_ticks,
            right_ticks: -self.grid.left_ticks,
            level: self.grid.level,
        };
        let mut values = self.values.clone();
        values.reverse();
        let mut lineage = self.lineage.clone();
        lineage.push(LineageOp::Reflect);
        BrownianPath {
            grid,
            values,
            seed: self.seed,
            lineage,
        }
    }

    /// Sign change: `result(t) = -path(t)`.
    pub fn negate(&self) -> Self {
        let values = self.values.iter().map(|v| -v).collect();
        let mut lineage = self.lineage.clone();
        lineage.push(LineageOp::Negate);
        BrownianPath {
            grid: self.grid,
            values,
            seed: self.seed,
            lineage,
        }
    }

    /// Test-only constructor for hand-built value arrays.
    #[cfg(test)]
    pub(crate) fn from_values_for_tests(grid: GridSpec, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.num_nodes());
        BrownianPath {
            grid,
            values,
            seed: 0,
            lineage: Vec::new(),
        }
    }

    /// CSV export: header `t,value`, time with 12 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{:.11e},{}", self.grid.node_time(i), v)?;
        }
        Ok(())
    }
}

#[inline(always)]
fn normal_at_index(rng: &CounterRng, k: u64) -> f64 {
    let pair = rng.normal_pair_at(k / 2);
    if k.is_multiple_of(2) {
        pair.0
    } else {
        pair.1
    }
}

/// Read-only view of the increments of a path inside a window; exposes only
/// differences `B(v) - B(u)` for window nodes, mirroring generation by
/// increments.
#[derive(Debug, Clone, Copy)]
pub struct IncrementView<'a> {
    path: &'a BrownianPath,
    window: (i64, i64),
}

impl<'a> IncrementView<'a> {
    pub fn new(path: &'a BrownianPath, left_tick: i64, right_tick: i64) -> Result<Self> {
        if left_tick >= right_tick
            || !path.grid().contains_tick(left_tick)
            || !path.grid().contains_tick(right_tick)
        {
            return Err(Error::domain(format!(
                "window [{left_tick}, {right_tick}] not inside path grid"
            )));
        }
        Ok(IncrementView {
            path,
            window: (left_tick, right_tick),
        })
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn increment(&self, from_tick: i64, to_tick: i64) -> Result<f64> {
        for t in [from_tick, to_tick] {
            if t < self.window.0 || t > self.window.1 {
                return Err(Error::domain(format!(
                    "tick {t} outside increment window [{}, {}]",
                    self.window.0, self.window.1
                )));
            }
        }
        Ok(self.path.value_at_tick(to_tick)? - self.path.value_at_tick(from_tick)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(left: f64, right: f64, level: u32) -> GridSpec {
        GridSpec::from_times(left, right, level).unwrap()
    }

    #[test]
    fn sampling_anchors_origin_and_is_deterministic() {
        let g = grid(-1.0, 1.0, 10);
        let p = BrownianPath::sample(g, 7).unwrap();
        let q = BrownianPath::sample(g, 7).unwrap();
        assert_eq!(p.value_at_tick(0).unwrap(), 0.0);
        assert_eq!(p.values(), q.values());
        let r = BrownianPath::sample(g, 8).unwrap();
        assert_ne!(p.values(), r.values());
    }

    #[test]
    fn same_seed_agrees_across_windows() {
        let p = BrownianPath::sample(grid(-1.0, 1.0, 8), 21).unwrap();
        let q = BrownianPath::sample(grid(-2.0, 3.0, 8), 21).unwrap();
        for tick in p.grid().left_ticks()..=p.grid().right_ticks() {
            assert_eq!(
                p.value_at_tick(tick).unwrap(),
                q.value_at_tick(tick).unwrap()
            );
        }
    }

    #[test]
    fn endpoint_variance_matches_time_horizon() {
        let g = grid(0.0, 1.0, 6);
        let n = 10_000u64;
        let mut sumsq = 0.0;
        for seed in 0..n {
            let p = BrownianPath::sample(g, seed).unwrap();
            let b1 = p.value_at_time(1.0).unwrap();
            sumsq += b1 * b1;
        }
        let var = sumsq / n as f64;
        // Var B(1) = 1; sample variance of chi^2 has sd sqrt(2/n)
        let band = 3.0 * (2.0 / n as f64).sqrt();
        assert!((var - 1.0).abs() < band, "var {var} outside {band}");
    }

    #[test]
    fn refinement_preserves_coarse_nodes_bit_exactly() {
        let p = BrownianPath::sample(grid(-1.0, 1.0, 6), 5).unwrap();
        let r = p.refine(2, 99).unwrap();
        assert_eq!(r.grid().level(), 8);
        for tick in p.grid().left_ticks()..=p.grid().right_ticks() {
            assert_eq!(
                p.value_at_tick(tick).unwrap(),
                r.value_at_tick(4 * tick).unwrap()
            );
        }
    }

    #[test]
    fn refine_seed_schedule_composes() {
        let p = BrownianPath::sample(grid(0.0, 1.0, 5), 11).unwrap();
        let once = p.refine(2, 40).unwrap();
        let twice = p.refine(1, 40).unwrap().refine(1, 41).unwrap();
        assert_eq!(once.values(), twice.values());
    }

    #[test]
    fn midpoint_residual_variance_is_quarter_step() {
        let p = BrownianPath::sample(grid(0.0, 1.0, 8), 3).unwrap();
        let mut sumsq = 0.0;
        let mut count = 0u64;
        for seed in 0..400u64 {
            let r = p.refine(1, seed).unwrap();
            for i in 0..p.values().len() - 1 {
                let mid = r.value_at_index(2 * i + 1);
                let resid = mid - 0.5 * (p.value_at_index(i) + p.value_at_index(i + 1));
                sumsq += resid * resid;
                count += 1;
            }
        }
        let var = sumsq / count as f64;
        let target = p.grid().step() / 4.0;
        let band = 3.0 * (2.0 / count as f64).sqrt() * target;
        assert!((var - target).abs() < band, "var {var} target {target}");
    }

    #[test]
    fn shift_zero_is_identity_and_group_law_holds() {
        let p = BrownianPath::sample(grid(-2.0, 2.0, 8), 13).unwrap();
        let s0 = p.shift(0.0).unwrap();
        assert_eq!(s0.values(), p.values());

        let u = 0.25;
        let v = -0.5;
        let a = p.shift(u).unwrap().shift(v).unwrap();
        let b = p.shift(u + v).unwrap();
        // group law on the common (equal) windows
        assert_eq!(a.grid(), b.grid());
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() < 1e-14);
        }
        // recentring
        assert_eq!(a.value_at_tick(0).unwrap(), 0.0);
    }

    #[test]
    fn shift_then_unshift_restores_exactly() {
        let p = BrownianPath::sample(grid(-1.0, 1.0, 8), 17).unwrap();
        let back = p.shift(0.5).unwrap().shift(-0.5).unwrap();
        assert_eq!(back.grid(), p.grid());
        for (x, y) in back.values().iter().zip(p.values()) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn reflect_is_involution_and_commutes_with_shift() {
        let p = BrownianPath::sample(grid(-2.0, 2.0, 7), 19).unwrap();
        let rr = p.reflect().reflect();
        assert_eq!(rr.grid(), p.grid());
        assert_eq!(rr.values(), p.values());

        // reflect(shift(p, u)) == shift(reflect(p), -u)
        let u = 0.5;
        let lhs = p.shift(u).unwrap().reflect();
        let rhs = p.reflect().shift(-u).unwrap();
        assert_eq!(lhs.grid(), rhs.grid());
        for (x, y) in lhs.values().iter().zip(rhs.values()) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn negate_preserves_grid_and_anchor() {
        let p = BrownianPath::sample(grid(-1.0, 1.0, 6), 23).unwrap();
        let n = p.negate();
        assert_eq!(n.grid(), p.grid());
        assert_eq!(n.value_at_tick(0).unwrap(), 0.0);
        assert_eq!(n.negate().values(), p.values());
    }

    #[test]
    fn disjoint_window_increments_are_uncorrelated() {
        let g = grid(0.0, 2.0, 6);
        let n = 10_000u64;
        let mut sum_xy = 0.0;
        let (mut sx, mut sy, mut sxx, mut syy) = (0.0, 0.0, 0.0, 0.0);
        for seed in 0..n {
            let p = BrownianPath::sample(g, seed).unwrap();
            let x = p.value_at_time(1.0).unwrap() - p.value_at_time(0.0).unwrap();
            let y = p.value_at_time(2.0).unwrap() - p.value_at_time(1.0).unwrap();
            sum_xy += x * y;
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
        }
        let nf = n as f64;
        let cov = sum_xy / nf - (sx / nf) * (sy / nf);
        let corr = cov / ((sxx / nf - (sx / nf).powi(2)) * (syy / nf - (sy / nf).powi(2))).sqrt();
        assert!(corr.abs() < 3.0 / nf.sqrt(), "corr {corr}");
    }

    #[test]
    fn increment_view_rejects_out_of_window_queries() {
        let p = BrownianPath::sample(grid(-1.0, 1.0, 4), 2).unwrap();
        let view = IncrementView::new(&p, 0, 8).unwrap();
        assert!(view.increment(0, 8).is_ok());
        assert!(view.increment(-2, 4).is_err());
    }

    #[test]
    fn grid_guards_reject_oversized_requests() {
        assert!(GridSpec::from_times(0.0, 1.0, 31).is_err());
        assert!(GridSpec::new(0, 1 << 26, 20).is_err());
        assert!(GridSpec::from_times(0.3, 1.0, 2).is_err());
    }

    #[test]
    fn csv_export_shape() {
        let p = BrownianPath::sample(grid(0.0, 1.0, 3), 0).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines[0], "t,value");
        assert_eq!(lines.len(), 1 + 9); // 2^3 + 1 nodes
    }
}
