//! Distribution-free hypothesis tests: chi-square independence on
//! empirical-quantile bins and the two-sample Kolmogorov-Smirnov test.

use super::report::TestReport;
use super::special::{chi_square_sf, kolmogorov_sf};
use crate::error::{Error, Result};

/// Inner edges of `k` equal-mass bins (k-1 edges). Degenerate data can
/// collapse edges; the caller decides whether the collapsed binning is
/// still usable.
pub fn quantile_edges(xs: &[f64], k: usize) -> Vec<f64> {
    let mut sorted: Vec<f64> = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let mut edges: Vec<f64> = (1..k)
        .map(|i| sorted[(i * n / k).min(n - 1)])
        .collect();
    edges.dedup();
    edges
}

fn bin_of(edges: &[f64], x: f64) -> usize {
    edges.partition_point(|e| *e <= x)
}

/// Chi-square independence test of two paired samples on a `k x k`
/// empirical-quantile contingency table. Errors when either margin is
/// degenerate (fewer than two distinct bins).
pub fn chi_square_independence(xs: &[f64], ys: &[f64], k: usize) -> Result<TestReport> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::usage("paired samples of equal nonzero length"));
    }
    if k < 2 {
        return Err(Error::domain("need at least 2 bins"));
    }
    let n = xs.len();
    let ex = quantile_edges(xs, k);
    let ey = quantile_edges(ys, k);
    let kx = ex.len() + 1;
    let ky = ey.len() + 1;
    if kx < 2 || ky < 2 {
        return Err(Error::domain("degenerate feature: constant margin"));
    }
    let mut table = vec![0u64; kx * ky];
    for (x, y) in xs.iter().zip(ys) {
        table[bin_of(&ex, *x) * ky + bin_of(&ey, *y)] += 1;
    }
    let mut row = vec![0u64; kx];
    let mut col = vec![0u64; ky];
    for i in 0..kx {
        for j in 0..ky {
            row[i] += table[i * ky + j];
            col[j] += table[i * ky + j];
        }
    }
    if row.iter().filter(|c| **c > 0).count() < 2 || col.iter().filter(|c| **c > 0).count() < 2 {
        return Err(Error::domain("degenerate feature: constant margin"));
    }
    let mut stat = 0.0;
    for i in 0..kx {
        for j in 0..ky {
            let expected = row[i] as f64 * col[j] as f64 / n as f64;
            if expected > 0.0 {
                let diff = table[i * ky + j] as f64 - expected;
                stat += diff * diff / expected;
            }
        }
    }
    let dof = ((kx - 1) * (ky - 1)) as f64;
    let p = chi_square_sf(stat, dof);
    Ok(TestReport::new(stat, p, Some(dof), n))
}

/// Two-sample Kolmogorov-Smirnov test with the finite-sample corrected
/// asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::usage("both samples must be nonempty"));
    }
    let mut xs: Vec<f64> = a.to_vec();
    let mut ys: Vec<f64> = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (n1, n2) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n1 && j < n2 {
        let x = xs[i];
        let y = ys[j];
        let t = x.min(y);
        while i < n1 && xs[i] <= t {
            i += 1;
        }
        while j < n2 && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n1 as f64 - j as f64 / n2 as f64).abs());
    }
    let ne = (n1 as f64 * n2 as f64) / (n1 as f64 + n2 as f64);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    let p = kolmogorov_sf(lambda);
    Ok(TestReport::new(d, p, None, n1 + n2))
}
