//! Exact finite model of sign noise: a path's enumerated points carry
//! independent equiprobable signs, square-integrable functionals decompose
//! over sign subsets, and conditional expectations, superchaos projections
//! and conditional spectral measures are all computable in closed form with
//! a brute-force enumeration oracle next to each of them.
//!
//! Coefficients are per-path scalars; averaging over paths happens in the
//! experiments layer. Everything here is exact up to float rounding.

use crate::error::{Error, Result};
use crate::rng::{streams, CounterRng};
use crate::sets::EnumeratedSet;
use std::collections::BTreeMap;

/// Brute-force guard: sign configurations are enumerated as `2^m`.
pub const MAX_POINTS: usize = 20;

/// A finite point set with attached signs.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteNoiseSample {
    /// Strictly increasing point times.
    pub points: Vec<f64>,
    /// Signs in `{-1, +1}`, one per point (sorted order).
    pub signs: Vec<i8>,
    /// Ambient window carrying the points.
    pub window: (f64, f64),
    pub seed: u64,
}

/// Attach iid equiprobable signs to the first `m` distinct enumerated
/// points (enumeration order, then sorted).
pub fn attach_signs(set: &EnumeratedSet, m: usize, seed: u64) -> Result<DiscreteNoiseSample> {
    if m == 0 || m > MAX_POINTS {
        return Err(Error::capacity(format!(
            "point count {m} outside 1..={MAX_POINTS}"
        )));
    }
    let mut points = Vec::with_capacity(m);
    for v in set.points() {
        if !points.contains(&v) {
            points.push(v);
            if points.len() == m {
                break;
            }
        }
    }
    if points.len() < m {
        return Err(Error::domain(format!(
            "set has only {} distinct points, need {m}",
            points.len()
        )));
    }
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rng = CounterRng::new(seed, streams::SIGNS);
    let signs = (0..m)
        .map(|k| if rng.u64_at(k as u64) >> 63 == 1 { 1 } else { -1 })
        .collect();
    Ok(DiscreteNoiseSample {
        points,
        signs,
        window: set.window,
        seed,
    })
}

impl DiscreteNoiseSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Shift the whole sample by `h`: points move to `x - h` and keep their
    /// signs, the window moves along.
    pub fn shift(&self, h: f64) -> Result<DiscreteNoiseSample> {
        let window = (self.window.0 - h, self.window.1 - h);
        let points: Vec<f64> = self.points.iter().map(|x| x - h).collect();
        if points.iter().any(|x| *x <= window.0 || *x >= window.1) {
            return Err(Error::domain("shifted points leave the window"));
        }
        Ok(DiscreteNoiseSample {
            points,
            signs: self.signs.clone(),
            window,
            seed: self.seed,
        })
    }
}

/// Chaos coefficients: finitely many scalars indexed by subsets of the
/// sample's points (bitmask, bit `k` = point `k`).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChaosVector {
    coeffs: BTreeMap<u32, f64>,
}

impl ChaosVector {
    pub fn new() -> Self {
        ChaosVector::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, f64)>) -> Self {
        let mut v = ChaosVector::new();
        for (mask, c) in pairs {
            v.set(mask, c);
        }
        v
    }

    pub fn set(&mut self, mask: u32, coeff: f64) {
        if coeff == 0.0 {
            self.coeffs.remove(&mask);
        } else {
            self.coeffs.insert(mask, coeff);
        }
    }

    pub fn get(&self, mask: u32) -> f64 {
        self.coeffs.get(&mask).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.coeffs.iter().map(|(m, c)| (*m, *c))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Largest point index referenced by any subset.
    pub fn max_index(&self) -> Option<usize> {
        self.coeffs
            .keys()
            .filter(|m| **m != 0)
            .map(|m| 31 - m.leading_zeros() as usize)
            .max()
    }

    /// `sum_K |f_K|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c * c).sum()
    }

    pub fn max_abs_diff(&self, other: &ChaosVector) -> f64 {
        let mut worst = 0.0f64;
        for (mask, c) in self.iter() {
            worst = worst.max((c - other.get(mask)).abs());
        }
        for (mask, c) in other.iter() {
            worst = worst.max((c - self.get(mask)).abs());
        }
        worst
    }

    /// CSV export: `K,coeff` with `K` semicolon-joined 1-based indices,
    /// empty for the empty set.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "K,coeff")?;
        for (mask, c) in self.iter() {
            let label = mask_label(mask);
            writeln!(w, "{label},{c}")?;
        }
        Ok(())
    }

    /// Parse the CSV format written by [`ChaosVector::write_csv`].
    pub fn read_csv(text: &str) -> Result<Self> {
        let mut v = ChaosVector::new();
        for (i, line) in text.lines().enumerate() {
            if i == 0 && line.trim() == "K,coeff" {
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let (label, num) = line
                .rsplit_once(',')
                .ok_or_else(|| Error::usage(format!("bad chaos CSV line: {line}")))?;
            let mut mask = 0u32;
            for part in label.split(';').filter(|p| !p.is_empty()) {
                let one_based: u32 = part
                    .trim()
                    .parse()
                    .map_err(|_| Error::usage(format!("bad subset index: {part}")))?;
                if one_based == 0 || one_based > 32 {
                    return Err(Error::usage(format!(
                        "subset index {one_based} out of range"
                    )));
                }
                mask |= 1 << (one_based - 1);
            }
            let coeff: f64 = num
                .trim()
                .parse()
                .map_err(|_| Error::usage(format!("bad coefficient: {num}")))?;
            v.set(mask, coeff);
        }
        Ok(v)
    }
}

fn mask_label(mask: u32) -> String {
    let mut parts = Vec::new();
    for k in 0..32 {
        if mask & (1 << k) != 0 {
            parts.push((k + 1).to_string());
        }
    }
    parts.join(";")
}

fn check_indices(f: &ChaosVector, sample: &DiscreteNoiseSample) -> Result<()> {
    if let Some(top) = f.max_index() {
        if top >= sample.len() {
            return Err(Error::domain(format!(
                "coefficient references point {} but the sample has {}",
                top + 1,
                sample.len()
            )));
        }
    }
    Ok(())
}

/// Evaluate `sum_K f_K prod_{k in K} eta_k` at the sample's signs.
pub fn evaluate(f: &ChaosVector, sample: &DiscreteNoiseSample) -> Result<f64> {
    check_indices(f, sample)?;
    Ok(evaluate_signs(f, &sample.signs))
}

/// Evaluate against an explicit sign vector.
pub fn evaluate_signs(f: &ChaosVector, signs: &[i8]) -> f64 {
    let mut acc = 0.0;
    for (mask, c) in f.iter() {
        let mut prod = 1.0;
        let mut m = mask;
        while m != 0 {
            let k = m.trailing_zeros() as usize;
            prod *= signs[k] as f64;
            m &= m - 1;
        }
        acc += c * prod;
    }
    acc
}

fn inside_mask(sample: &DiscreteNoiseSample, window: (f64, f64)) -> u32 {
    let mut mask = 0u32;
    for (k, x) in sample.points.iter().enumerate() {
        if *x > window.0 && *x < window.1 {
            mask |= 1 << k;
        }
    }
    mask
}

/// Conditional expectation given the increments and the signs inside the
/// window: `f_K` survives iff every point of `K` lies in the open window.
pub fn conditional_expectation(
    f: &ChaosVector,
    sample: &DiscreteNoiseSample,
    window: (f64, f64),
) -> Result<ChaosVector> {
    check_indices(f, sample)?;
    let keep = inside_mask(sample, window);
    let mut out = ChaosVector::new();
    for (mask, c) in f.iter() {
        if mask & !keep == 0 {
            out.set(mask, c);
        }
    }
    Ok(out)
}

/// Brute-force oracle for [`conditional_expectation`]: for each sign
/// configuration on the inside points, average the evaluation over all
/// completions of the outside signs, then recover coefficients by Fourier
/// inversion on the inside hypercube.
pub fn brute_force_conditional(
    f: &ChaosVector,
    sample: &DiscreteNoiseSample,
    window: (f64, f64),
) -> Result<ChaosVector> {
    check_indices(f, sample)?;
    let m = sample.len();
    if m > MAX_POINTS {
        return Err(Error::capacity(format!(
            "brute force over {m} points exceeds {MAX_POINTS}"
        )));
    }
    let keep = inside_mask(sample, window);
    let inside: Vec<usize> = (0..m).filter(|k| keep & (1 << k) != 0).collect();
    let outside: Vec<usize> = (0..m).filter(|k| keep & (1 << k) == 0).collect();
    let ni = inside.len();
    let no = outside.len();

    // average over outside completions for every inside configuration
    let mut averaged = vec![0.0f64; 1 << ni];
    let mut signs = vec![1i8; m];
    for ci in 0..(1u32 << ni) {
        for (b, k) in inside.iter().enumerate() {
            signs[*k] = if ci & (1 << b) != 0 { -1 } else { 1 };
        }
        let mut acc = 0.0;
        for co in 0..(1u32 << no) {
            for (b, k) in outside.iter().enumerate() {
                signs[*k] = if co & (1 << b) != 0 { -1 } else { 1 };
            }
            acc += evaluate_signs(f, &signs);
        }
        averaged[ci as usize] = acc / (1u64 << no) as f64;
    }

    // Fourier inversion on {-1,+1}^inside
    let mut out = ChaosVector::new();
    for sub in 0..(1u32 << ni) {
        let mut acc = 0.0;
        for ci in 0..(1u32 << ni) {
            let parity = (sub & ci).count_ones() % 2;
            let chi = if parity == 1 { -1.0 } else { 1.0 };
            acc += averaged[ci as usize] * chi;
        }
        let coeff = acc / (1u64 << ni) as f64;
        if coeff.abs() > 1e-14 {
            let mut mask = 0u32;
            for (b, k) in inside.iter().enumerate() {
                if sub & (1 << b) != 0 {
                    mask |= 1 << k;
                }
            }
            out.set(mask, coeff);
        }
    }
    Ok(out)
}

/// Projection onto the classical (path-measurable) part: only `f_emptyset`.
pub fn project_stable(f: &ChaosVector) -> ChaosVector {
    let mut out = ChaosVector::new();
    let c = f.get(0);
    if c != 0.0 {
        out.set(0, c);
    }
    out
}

/// Partition projection toward the first superchaos: keep `f_K`, `K`
/// nonempty, whose points all fall in one open partition cell. Under nested
/// refinement the retained mass is nonincreasing and only singletons
/// survive in the limit.
pub fn project_superchaos1(
    f: &ChaosVector,
    sample: &DiscreteNoiseSample,
    cuts: &[f64],
) -> Result<ChaosVector> {
    check_indices(f, sample)?;
    let (lo, hi) = sample.window;
    for w in cuts.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::domain("partition cuts must be strictly increasing"));
        }
    }
    if cuts.iter().any(|c| *c <= lo || *c >= hi) {
        return Err(Error::domain("partition cuts must lie inside the window"));
    }
    // cell id per point; points on a cut belong to no cell
    let cell_of = |x: f64| -> Option<usize> {
        if cuts.contains(&x) {
            return None;
        }
        Some(cuts.partition_point(|c| *c < x))
    };
    let mut out = ChaosVector::new();
    'outer: for (mask, c) in f.iter() {
        if mask == 0 {
            continue;
        }
        let mut cell: Option<usize> = None;
        let mut m = mask;
        while m != 0 {
            let k = m.trailing_zeros() as usize;
            m &= m - 1;
            match cell_of(sample.points[k]) {
                None => continue 'outer,
                Some(c_k) => match cell {
                    None => cell = Some(c_k),
                    Some(c0) if c0 != c_k => continue 'outer,
                    _ => {}
                },
            }
        }
        out.set(mask, c);
    }
    Ok(out)
}

/// Conditional spectral mass of a first-superchaos element on
/// `window x {A}`, computed two ways:
/// direct `sum_k |f_k|^2 1{S_k in window} 1_A` and via the mean over all
/// sign vectors of the squared conditional expectation. The two agree
/// exactly; the pair is returned for verification.
pub fn spectral_measure(
    f: &ChaosVector,
    sample: &DiscreteNoiseSample,
    window: (f64, f64),
    predicate_holds: bool,
) -> Result<(f64, f64)> {
    check_indices(f, sample)?;
    if f.iter().any(|(mask, _)| mask.count_ones() != 1) {
        return Err(Error::usage(
            "spectral measure needs a first-superchaos element (singleton support)",
        ));
    }
    let m = sample.len();
    if m > MAX_POINTS {
        return Err(Error::capacity(format!(
            "sign enumeration over {m} points exceeds {MAX_POINTS}"
        )));
    }
    let ind = if predicate_holds { 1.0 } else { 0.0 };

    let mut direct = 0.0;
    for (mask, c) in f.iter() {
        let k = mask.trailing_zeros() as usize;
        let x = sample.points[k];
        if x > window.0 && x < window.1 {
            direct += c * c;
        }
    }
    direct *= ind;

    let ce = conditional_expectation(f, sample, window)?;
    let mut second_moment = 0.0;
    let mut signs = vec![1i8; m];
    for cfg in 0..(1u64 << m) {
        for (k, s) in signs.iter_mut().enumerate() {
            *s = if cfg & (1 << k) != 0 { -1 } else { 1 };
        }
        let v = evaluate_signs(&ce, &signs);
        second_moment += v * v;
    }
    let conditional = second_moment / (1u64 << m) as f64 * ind;
    Ok((direct, conditional))
}
