//! Enumeration-based random countable sets: local minima/maxima/extrema of
//! the driver and the last-zero families of squared-Bessel solutions
//! restarted at every window left endpoint.
//!
//! Sets are finite truncations: each enumeration runs over a dyadic family
//! of windows up to a depth parameter (absolute-anchored cells plus the
//! ambient window itself). A coffin slot records a window whose candidate
//! point was filtered out.

use crate::bessel::{last_zero, scheme_for};
use crate::error::{Error, Result};
use crate::paths::BrownianPath;
use std::io::Write;

/// One enumeration slot: a provenance window and the point it produced
/// (`None` is the coffin state).
#[derive(Debug, Clone, PartialEq)]
pub struct SetEntry {
    pub value: Option<f64>,
    pub provenance: (f64, f64),
}

/// Finite enumeration of a random countable set on an ambient window.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratedSet {
    pub entries: Vec<SetEntry>,
    pub window: (f64, f64),
    pub level: u32,
}

impl EnumeratedSet {
    /// Non-coffin values in enumeration order.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().filter_map(|e| e.value)
    }

    /// Sorted effective range (distinct non-coffin values).
    pub fn effective_range(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.points().collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup();
        v
    }

    pub fn coffin_count(&self) -> usize {
        self.entries.iter().filter(|e| e.value.is_none()).count()
    }

    /// Entries outside the open interval `(a, b)` become coffins.
    pub fn localize(&self, a: f64, b: f64) -> Result<EnumeratedSet> {
        if a >= b || a < self.window.0 || b > self.window.1 {
            return Err(Error::domain(format!(
                "localize window ({a}, {b}) not inside ambient ({}, {})",
                self.window.0, self.window.1
            )));
        }
        let entries = self
            .entries
            .iter()
            .map(|e| SetEntry {
                value: e.value.filter(|v| *v > a && *v < b),
                provenance: e.provenance,
            })
            .collect();
        Ok(EnumeratedSet {
            entries,
            window: (a, b),
            level: self.level,
        })
    }

    /// Translate values, provenances and the window by `h`.
    pub fn shifted(&self, h: f64) -> EnumeratedSet {
        EnumeratedSet {
            entries: self
                .entries
                .iter()
                .map(|e| SetEntry {
                    value: e.value.map(|v| v + h),
                    provenance: (e.provenance.0 + h, e.provenance.1 + h),
                })
                .collect(),
            window: (self.window.0 + h, self.window.1 + h),
            level: self.level,
        }
    }

    /// CSV export: `p,q,value` with an empty value field for coffins.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "p,q,value")?;
        for e in &self.entries {
            match e.value {
                Some(v) => writeln!(w, "{:.11e},{:.11e},{}", e.provenance.0, e.provenance.1, v)?,
                None => writeln!(w, "{:.11e},{:.11e},", e.provenance.0, e.provenance.1)?,
            }
        }
        Ok(())
    }
}

/// Dyadic window family over `[left, right]` up to `depth`: all cells
/// `[k 2^-j, (k+1) 2^-j]` inside the window for `j = 0..=depth`, plus the
/// window itself. Endpoints lie on level-`level` grid nodes.
pub fn dyadic_pairs(left: f64, right: f64, depth: u32, level: u32) -> Result<Vec<(f64, f64)>> {
    if depth > level {
        return Err(Error::domain(format!(
            "pair depth {depth} finer than grid level {level}"
        )));
    }
    if left >= right {
        return Err(Error::domain("window needs left < right"));
    }
    let mut pairs = vec![(left, right)];
    for j in 0..=depth {
        let len = (2.0f64).powi(-(j as i32));
        let mut k = (left / len).ceil() as i64;
        while (k as f64 + 1.0) * len <= right + 1e-12 {
            let p = k as f64 * len;
            let q = (k as f64 + 1.0) * len;
            if p >= left - 1e-12 && (p, q) != (left, right) {
                pairs.push((p, q));
            }
            k += 1;
        }
    }
    Ok(pairs)
}

fn window_ticks(path: &BrownianPath, p: f64, q: f64) -> Result<(i64, i64)> {
    let grid = path.grid();
    let pt = grid.tick_of_time(p)?;
    let qt = grid.tick_of_time(q)?;
    if !grid.contains_tick(pt) || !grid.contains_tick(qt) || pt >= qt {
        return Err(Error::domain(format!("pair ({p}, {q}) off the path domain")));
    }
    Ok((pt, qt))
}

/// Grid argmin of `path(t) + drift * t` over `[lo, hi]` ticks, earliest tie.
pub(crate) fn grid_argmin_tick(
    path: &BrownianPath,
    lo_tick: i64,
    hi_tick: i64,
    drift: f64,
) -> Result<i64> {
    let grid = path.grid();
    let lo = grid.index_of_tick(lo_tick)?;
    let hi = grid.index_of_tick(hi_tick)?;
    let step = grid.step();
    let mut best_idx = lo;
    let mut best = path.value_at_index(lo) + drift * grid.node_time(lo);
    for i in lo + 1..=hi {
        let v = path.value_at_index(i) + drift * (grid.node_time(lo) + (i - lo) as f64 * step);
        if v < best {
            best = v;
            best_idx = i;
        }
    }
    Ok(lo_tick + (best_idx - lo) as i64)
}

/// Argmin enumeration of local minima: one entry per window, endpoint
/// argmins filtered to the coffin (interior points only), ties broken by
/// the earliest time.
pub fn local_minima(path: &BrownianPath, pairs: &[(f64, f64)]) -> Result<EnumeratedSet> {
    let grid = path.grid();
    let mut entries = Vec::with_capacity(pairs.len());
    for &(p, q) in pairs {
        let (pt, qt) = window_ticks(path, p, q)?;
        let m = grid_argmin_tick(path, pt, qt, 0.0)?;
        let value = if m == pt || m == qt {
            None
        } else {
            Some(grid.tick_time(m))
        };
        entries.push(SetEntry {
            value,
            provenance: (p, q),
        });
    }
    Ok(EnumeratedSet {
        entries,
        window: (grid.left(), grid.right()),
        level: grid.level(),
    })
}

/// Local maxima: the minima of the negated path, entry by entry.
pub fn local_maxima(path: &BrownianPath, pairs: &[(f64, f64)]) -> Result<EnumeratedSet> {
    local_minima(&path.negate(), pairs)
}

/// Local extrema: concatenation of the minima and maxima enumerations.
pub fn local_extrema(path: &BrownianPath, pairs: &[(f64, f64)]) -> Result<EnumeratedSet> {
    let mut minima = local_minima(path, pairs)?;
    let maxima = local_maxima(path, pairs)?;
    minima.entries.extend(maxima.entries);
    Ok(minima)
}

/// Last-zero enumeration of the squared-Bessel family of dimension `d`: for
/// each window the solver restarts at the left endpoint and the last exact
/// zero contact is kept when it sits strictly inside the window by more
/// than one grid step.
pub fn bessel_set(path: &BrownianPath, d: f64, pairs: &[(f64, f64)]) -> Result<EnumeratedSet> {
    let grid = path.grid();
    let scheme = scheme_for(d);
    let mut entries = Vec::with_capacity(pairs.len());
    for &(p, q) in pairs {
        let (pt, qt) = window_ticks(path, p, q)?;
        let g = last_zero(path, d, p, q, scheme, 0.0)?;
        let g_tick = grid.tick_of_time(g)?;
        let value = if g_tick - pt > 1 && qt - g_tick > 1 {
            Some(g)
        } else {
            None
        };
        entries.push(SetEntry {
            value,
            provenance: (p, q),
        });
    }
    Ok(EnumeratedSet {
        entries,
        window: (grid.left(), grid.right()),
        level: grid.level(),
    })
}

/// A set constructor usable in stationarity and avoidance experiments.
pub trait SetBuilder: Sync {
    fn build(&self, path: &BrownianPath) -> Result<EnumeratedSet>;
    fn name(&self) -> &'static str;

    /// The enumeration slot of one fixed absolute window.
    fn entry(&self, path: &BrownianPath, pair: (f64, f64)) -> Result<Option<f64>>;

    /// Dyadic family over the path's domain, window itself included.
    fn pairs_for(&self, path: &BrownianPath, depth: u32) -> Result<Vec<(f64, f64)>> {
        let g = path.grid();
        dyadic_pairs(g.left(), g.right(), depth.min(g.level()), g.level())
    }
}

pub struct MinimaBuilder {
    pub depth: u32,
}

impl SetBuilder for MinimaBuilder {
    fn build(&self, path: &BrownianPath) -> Result<EnumeratedSet> {
        local_minima(path, &self.pairs_for(path, self.depth)?)
    }
    fn name(&self) -> &'static str {
        "minima"
    }
    fn entry(&self, path: &BrownianPath, pair: (f64, f64)) -> Result<Option<f64>> {
        Ok(local_minima(path, &[pair])?.entries[0].value)
    }
}

pub struct MaximaBuilder {
    pub depth: u32,
}

impl SetBuilder for MaximaBuilder {
    fn build(&self, path: &BrownianPath) -> Result<EnumeratedSet> {
        local_maxima(path, &self.pairs_for(path, self.depth)?)
    }
    fn name(&self) -> &'static str {
        "maxima"
    }
    fn entry(&self, path: &BrownianPath, pair: (f64, f64)) -> Result<Option<f64>> {
        Ok(local_maxima(path, &[pair])?.entries[0].value)
    }
}

pub struct ExtremaBuilder {
    pub depth: u32,
}

impl SetBuilder for ExtremaBuilder {
    fn build(&self, path: &BrownianPath) -> Result<EnumeratedSet> {
        local_extrema(path, &self.pairs_for(path, self.depth)?)
    }
    fn name(&self) -> &'static str {
        "extrema"
    }
    fn entry(&self, path: &BrownianPath, pair: (f64, f64)) -> Result<Option<f64>> {
        Ok(local_minima(path, &[pair])?.entries[0].value)
    }
}

pub struct BesselBuilder {
    pub d: f64,
    pub depth: u32,
}

impl SetBuilder for BesselBuilder {
    fn build(&self, path: &BrownianPath) -> Result<EnumeratedSet> {
        bessel_set(path, self.d, &self.pairs_for(path, self.depth)?)
    }
    fn name(&self) -> &'static str {
        "bessel"
    }
    fn entry(&self, path: &BrownianPath, pair: (f64, f64)) -> Result<Option<f64>> {
        Ok(bessel_set(path, self.d, &[pair])?.entries[0].value)
    }
}

/// Deterministic control: the integers inside the window. Local but not
/// stationary; the gap experiment must flag it.
pub struct IntegerGridBuilder;

impl SetBuilder for IntegerGridBuilder {
    fn build(&self, path: &BrownianPath) -> Result<EnumeratedSet> {
        let g = path.grid();
        let (a, b) = (g.left(), g.right());
        let mut entries = Vec::new();
        let mut k = a.ceil() as i64;
        while (k as f64) < b {
            if k as f64 > a {
                entries.push(SetEntry {
                    value: Some(k as f64),
                    provenance: (a, b),
                });
            }
            k += 1;
        }
        Ok(EnumeratedSet {
            entries,
            window: (a, b),
            level: g.level(),
        })
    }
    fn name(&self) -> &'static str {
        "integers"
    }
    fn entry(&self, _path: &BrownianPath, pair: (f64, f64)) -> Result<Option<f64>> {
        let k = pair.0.floor() as i64 + 1;
        Ok(((k as f64) < pair.1).then_some(k as f64))
    }
}

/// Adversarial control: a fixed fraction of every dyadic window, ignoring
/// the path entirely. Enumerable but neither stationary nor
/// shift-stabilising.
pub struct WindowFractionBuilder {
    pub depth: u32,
    pub fraction: f64,
}

impl SetBuilder for WindowFractionBuilder {
    fn build(&self, path: &BrownianPath) -> Result<EnumeratedSet> {
        let g = path.grid();
        let entries = self
            .pairs_for(path, self.depth)?
            .into_iter()
            .map(|(p, q)| SetEntry {
                value: Some(p + self.fraction * (q - p)),
                provenance: (p, q),
            })
            .collect();
        Ok(EnumeratedSet {
            entries,
            window: (g.left(), g.right()),
            level: g.level(),
        })
    }
    fn name(&self) -> &'static str {
        "window-fraction"
    }
    fn entry(&self, _path: &BrownianPath, pair: (f64, f64)) -> Result<Option<f64>> {
        Ok(Some(pair.0 + self.fraction * (pair.1 - pair.0)))
    }
}

fn unmatched_fraction(from: &[f64], against: &[f64], lo: f64, hi: f64, tol: f64) -> (usize, usize) {
    let mut unmatched = 0;
    let mut total = 0;
    for &x in from {
        if x <= lo || x >= hi {
            continue;
        }
        total += 1;
        let idx = against.partition_point(|v| *v < x);
        let mut best = f64::INFINITY;
        if idx < against.len() {
            best = best.min((against[idx] - x).abs());
        }
        if idx > 0 {
            best = best.min((against[idx - 1] - x).abs());
        }
        if best > tol {
            unmatched += 1;
        }
    }
    (unmatched, total)
}

/// Symmetrized stationarity mismatch: the fraction of points of
/// `builder(path)` on the common window with no partner of
/// `h + builder(shift(path, h))` within `tol`, and vice versa.
pub fn stationarity_gap(
    builder: &dyn SetBuilder,
    path: &BrownianPath,
    h: f64,
    tol: f64,
) -> Result<f64> {
    let shifted_path = path.shift(h)?;
    let a = builder.build(path)?;
    let b = builder.build(&shifted_path)?.shifted(h);
    let lo = a.window.0.max(b.window.0);
    let hi = a.window.1.min(b.window.1);
    if lo >= hi {
        return Err(Error::domain("empty common window"));
    }
    let av = a.effective_range();
    let bv = b.effective_range();
    let (ua, na) = unmatched_fraction(&av, &bv, lo, hi, tol);
    let (ub, nb) = unmatched_fraction(&bv, &av, lo, hi, tol);
    if na + nb == 0 {
        return Ok(0.0);
    }
    Ok((ua + ub) as f64 / (na + nb) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::GridSpec;

    fn sample(level: u32, seed: u64) -> BrownianPath {
        BrownianPath::sample(GridSpec::from_times(0.0, 1.0, level).unwrap(), seed).unwrap()
    }

    #[test]
    fn dyadic_family_counts_and_window_inclusion() {
        let pairs = dyadic_pairs(0.0, 1.0, 3, 10).unwrap();
        // window + (1 dup excluded at j=0) + 2 + 4 + 8
        assert_eq!(pairs.len(), 1 + 2 + 4 + 8);
        assert_eq!(pairs[0], (0.0, 1.0));
        assert!(dyadic_pairs(0.0, 1.0, 12, 10).is_err());
    }

    #[test]
    fn monotone_path_has_all_coffins() {
        // strictly increasing path: every window argmin sits on the left
        // endpoint, so every enumeration slot is a coffin
        let g = GridSpec::from_times(0.0, 1.0, 6).unwrap();
        let values: Vec<f64> = (0..g.num_nodes()).map(|i| i as f64 * 0.01).collect();
        let path = BrownianPath::from_values_for_tests(g, values);
        let pairs = dyadic_pairs(0.0, 1.0, 2, 6).unwrap();
        let set = local_minima(&path, &pairs).unwrap();
        assert_eq!(set.coffin_count(), set.entries.len());
    }

    #[test]
    fn ties_resolve_to_the_earliest_time() {
        let g = GridSpec::from_times(0.0, 1.0, 3).unwrap();
        // two equal minima at indices 2 and 5
        let values = vec![3.0, 2.0, 1.0, 2.0, 1.5, 1.0, 2.5, 3.0, 4.0];
        let path = BrownianPath::from_values_for_tests(g, values);
        let set = local_minima(&path, &[(0.0, 1.0)]).unwrap();
        assert_eq!(set.entries[0].value, Some(g.node_time(2)));
    }

    #[test]
    fn nested_window_argmins_agree_exactly() {
        for seed in 0..50 {
            let p = sample(10, seed);
            let outer = local_minima(&p, &[(0.0, 1.0)]).unwrap();
            let inner = local_minima(&p, &[(0.25, 0.75)]).unwrap();
            if let (Some(vo), Some(vi)) = (outer.entries[0].value, inner.entries[0].value) {
                if vo > 0.25 && vo < 0.75 {
                    assert_eq!(vo, vi);
                }
            }
        }
    }

    #[test]
    fn maxima_are_minima_of_negated_path_entrywise() {
        let p = sample(10, 3);
        let pairs = dyadic_pairs(0.0, 1.0, 3, 10).unwrap();
        let maxima = local_maxima(&p, &pairs).unwrap();
        let minima_neg = local_minima(&p.negate(), &pairs).unwrap();
        assert_eq!(maxima.entries, minima_neg.entries);
    }

    #[test]
    fn extrema_concatenate_both_families() {
        let p = sample(8, 4);
        let pairs = dyadic_pairs(0.0, 1.0, 2, 8).unwrap();
        let ext = local_extrema(&p, &pairs).unwrap();
        assert_eq!(ext.entries.len(), 2 * pairs.len());
    }

    #[test]
    fn minima_and_maxima_argmins_differ_on_sampled_paths() {
        let pairs = [(0.0, 1.0)];
        let mut distinct = 0;
        let n = 200;
        for seed in 0..n {
            let p = sample(12, 100 + seed);
            let mn = local_minima(&p, &pairs).unwrap();
            let mx = local_maxima(&p, &pairs).unwrap();
            if let (Some(a), Some(b)) = (mn.entries[0].value, mx.entries[0].value) {
                if a != b {
                    distinct += 1;
                }
            } else {
                distinct += 1; // endpoint coffin still counts as distinct
            }
        }
        assert_eq!(distinct, n);
    }

    #[test]
    fn arcsine_law_at_the_symmetric_point() {
        // P(argmin of B on [0,1] <= 1/2) = 1/2 exactly by symmetry
        let n = 4000u64;
        let mut below = 0u64;
        for seed in 0..n {
            let p = sample(10, 10_000 + seed);
            let set = local_minima(&p, &[(0.0, 1.0)]).unwrap();
            if let Some(v) = set.entries[0].value {
                if v <= 0.5 {
                    below += 1;
                }
            }
        }
        let frac = below as f64 / n as f64;
        let band = 3.0 * 0.5 / (n as f64).sqrt();
        assert!((frac - 0.5).abs() < band, "frac {frac}");
    }

    #[test]
    fn bessel_d_zero_is_all_coffins() {
        let p = sample(10, 5);
        let pairs = dyadic_pairs(0.0, 1.0, 2, 10).unwrap();
        let z0 = bessel_set(&p, 0.0, &pairs).unwrap();
        assert_eq!(z0.coffin_count(), z0.entries.len());
    }

    #[test]
    fn polar_dimension_set_is_thin_next_to_subcritical() {
        // d >= 2 never revisits zero, so entries past a 2% burn-in are grid
        // artifacts and must stay rare; d = 0.5 fills its windows
        let pairs = dyadic_pairs(0.0, 1.0, 2, 14).unwrap();
        let escape_frac = |d: f64| {
            let mut escapes = 0usize;
            let mut total = 0usize;
            for seed in 0..60u64 {
                let p = sample(14, 900 + seed);
                let s = bessel_set(&p, d, &pairs).unwrap();
                for e in &s.entries {
                    total += 1;
                    let burn = 0.02 * (e.provenance.1 - e.provenance.0);
                    if e.value.is_some_and(|v| v > e.provenance.0 + burn) {
                        escapes += 1;
                    }
                }
            }
            escapes as f64 / total as f64
        };
        let polar = escape_frac(2.5);
        let subcritical = escape_frac(0.5);
        assert!(polar < 0.3, "polar escape fraction {polar}");
        assert!(subcritical > 0.6, "subcritical interior fraction {subcritical}");
        assert!(polar < 0.5 * subcritical);
    }

    #[test]
    fn bessel_one_matches_minima_on_shared_windows() {
        let pairs = dyadic_pairs(0.0, 1.0, 3, 12).unwrap();
        let mut matched = 0usize;
        let mut total = 0usize;
        for seed in 0..30 {
            let p = sample(12, 700 + seed);
            let h = p.grid().step();
            let bes = bessel_set(&p, 1.0, &pairs).unwrap();
            let mins = local_minima(&p, &pairs).unwrap();
            for (b, m) in bes.entries.iter().zip(&mins.entries) {
                if let (Some(vb), Some(vm)) = (b.value, m.value) {
                    total += 1;
                    if (vb - vm).abs() <= h + 1e-12 {
                        matched += 1;
                    }
                }
            }
        }
        assert!(total > 100);
        assert!(
            matched as f64 / total as f64 > 0.99,
            "agreement {matched}/{total}"
        );
    }

    #[test]
    fn localize_and_shift_identities() {
        let p = sample(8, 6);
        let pairs = dyadic_pairs(0.0, 1.0, 2, 8).unwrap();
        let s = local_minima(&p, &pairs).unwrap();
        let full = s.localize(s.window.0, s.window.1).unwrap();
        assert_eq!(full.entries, s.entries);

        let back = s.shifted(0.5).shifted(-0.5);
        for (a, b) in back.entries.iter().zip(&s.entries) {
            match (a.value, b.value) {
                (Some(x), Some(y)) => assert!((x - y).abs() < 1e-12),
                (None, None) => {}
                _ => panic!("coffin mismatch"),
            }
        }

        // localize(shift(s,h), a, b) == shift(localize(s, a-h, b-h), h)
        let h = 0.25;
        let lhs = s.shifted(h).localize(0.5, 1.0).unwrap();
        let rhs = s.localize(0.25, 0.75).unwrap().shifted(h);
        assert_eq!(lhs.entries, rhs.entries);
    }

    #[test]
    fn stationarity_gap_zero_shift_is_zero() {
        let p = BrownianPath::sample(GridSpec::from_times(-1.0, 2.0, 10).unwrap(), 7).unwrap();
        let b = MinimaBuilder { depth: 4 };
        let gap = stationarity_gap(&b, &p, 0.0, 2.0 * p.grid().step()).unwrap();
        assert_eq!(gap, 0.0);
    }

    #[test]
    fn stationarity_gap_small_for_minima_large_for_integers() {
        let mut acc = 0.0;
        let n = 25;
        for seed in 0..n {
            let p =
                BrownianPath::sample(GridSpec::from_times(-1.0, 2.0, 12).unwrap(), 40 + seed)
                    .unwrap();
            let b = MinimaBuilder { depth: 4 };
            acc += stationarity_gap(&b, &p, 0.25, 2.0 * p.grid().step()).unwrap();
        }
        let mean_gap = acc / n as f64;
        assert!(mean_gap < 0.05, "minima mean gap {mean_gap}");

        let p = BrownianPath::sample(GridSpec::from_times(-1.0, 2.0, 8).unwrap(), 3).unwrap();
        let gap = stationarity_gap(&IntegerGridBuilder, &p, 0.5, 0.05).unwrap();
        assert_eq!(gap, 1.0);
    }

    #[test]
    fn point_avoidance_frequency_halves_with_tolerance() {
        // P(some minimum within tol of x) scales like tol; halving tol
        // should at least roughly halve the hit count
        let x = 0.37;
        let mut hits_wide = 0u32;
        let mut hits_narrow = 0u32;
        let n = 400;
        for seed in 0..n {
            let p = sample(12, 5000 + seed);
            let set = local_minima(&p, &dyadic_pairs(0.0, 1.0, 4, 12).unwrap()).unwrap();
            let pts = set.effective_range();
            let near = |tol: f64| {
                let i = pts.partition_point(|v| *v < x);
                let mut best = f64::INFINITY;
                if i < pts.len() {
                    best = best.min((pts[i] - x).abs());
                }
                if i > 0 {
                    best = best.min((pts[i - 1] - x).abs());
                }
                best <= tol
            };
            if near(0.02) {
                hits_wide += 1;
            }
            if near(0.01) {
                hits_narrow += 1;
            }
        }
        assert!(hits_narrow <= hits_wide);
        assert!(
            (hits_narrow as f64) < 0.75 * hits_wide as f64 + 3.0 * (hits_wide as f64).sqrt(),
            "wide {hits_wide} narrow {hits_narrow}"
        );
    }

    #[test]
    fn density_gap_shrinks_as_depth_grows() {
        let largest_gap = |depth: u32| {
            let mut acc: f64 = 0.0;
            for seed in 0..20 {
                let p = sample(12, 9000 + seed);
                let set = local_minima(&p, &dyadic_pairs(0.0, 1.0, depth, 12).unwrap()).unwrap();
                let pts = set.effective_range();
                let mut gap: f64 = 0.0;
                let mut prev = 0.0;
                for v in pts.iter().chain(std::iter::once(&1.0)) {
                    gap = gap.max(v - prev);
                    prev = *v;
                }
                acc += gap;
            }
            acc / 20.0
        };
        let coarse = largest_gap(2);
        let fine = largest_gap(5);
        assert!(fine < coarse, "gaps {coarse} -> {fine}");
    }
}
