//! Entropy estimators: Katok spanning sets and exact block entropy.
//!
//! `r(n, γ, δ)` is approximated by greedily picking Bowen balls
//! `B(x, n, γ) = {y : d(T^i x, T^i y) < γ, 0 <= i < n}` centred at cloud
//! points until mass `1 - δ` is covered. The growth rate of `log r` in `n`
//! is read off by least squares over the scales where Bowen balls are still
//! resolved by the cloud. Units are nats throughout.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cover::greedy_cover;
use crate::maps::{MapModel, OrbitTable};
use crate::measures::AtomicMeasure;
use crate::numeric::{least_squares, CompensatedSum, LineFit};
use crate::spaces::{NeighborIndex, PointCloud, SpaceModel};
use crate::{Error, Result};

pub const DEFAULT_DELTA: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyOptions {
    /// Reject `γ < 2 * resolution` and `δ` below the largest atom weight.
    pub enforce_floors: bool,
    /// Expansion rate used to bound `n`: Bowen balls shrink like
    /// `γ e^{-rate (n-1)}` and stop being resolved once below the cloud
    /// resolution. `None` or a nonpositive rate disables the bound.
    pub saturation_rate: Option<f64>,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        EntropyOptions { enforce_floors: true, saturation_rate: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpanningSample {
    pub n: usize,
    pub r_hat: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropySeries {
    pub gamma: f64,
    /// Largest `n` allowed by the saturation bound (`None` = unbounded).
    pub max_admissible_n: Option<usize>,
    pub samples: Vec<SpanningSample>,
    pub fit: LineFit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    /// Ordered by decreasing γ.
    pub series: Vec<EntropySeries>,
    /// Slope at the smallest γ.
    pub estimate: f64,
    pub gamma_grid: Vec<f64>,
    pub n_range: Vec<usize>,
    pub delta: f64,
    #[serde(serialize_with = "crate::io::serialize_opt_f64")]
    pub saturation_rate: Option<f64>,
    /// Total-variation distance between μ and its image, when the image is
    /// representable on the cloud.
    #[serde(serialize_with = "crate::io::serialize_opt_f64")]
    pub invariance_defect: Option<f64>,
}

impl EntropyReport {
    /// CSV with columns `gamma,n,r_hat`.
    pub fn to_csv(&self) -> Result<String> {
        let rows = self.series.iter().flat_map(|s| {
            s.samples
                .iter()
                .map(move |p| vec![crate::io::format_f64(s.gamma), p.n.to_string(), p.r_hat.to_string()])
        });
        crate::io::csv_string(&["gamma", "n", "r_hat"], rows)
    }

    /// Slopes in γ order (largest γ first), showing the γ -> 0 trend.
    pub fn gamma_trend(&self) -> Vec<(f64, f64)> {
        self.series.iter().map(|s| (s.gamma, s.fit.slope)).collect()
    }
}

fn check_inputs(cloud: &PointCloud, mu: &AtomicMeasure, gamma: f64, delta: f64, opts: &EntropyOptions) -> Result<()> {
    if !mu.is_on(cloud) {
        return Err(Error::InvalidArgument("measure does not live on this cloud".into()));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!("gamma {gamma} must be positive")));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!("delta {delta} not in [0, 1)")));
    }
    if opts.enforce_floors {
        let floor = 2.0 * cloud.resolution();
        if gamma < floor {
            return Err(Error::Precondition(format!("gamma {gamma} is below the scale floor {floor}")));
        }
        let max_atom = mu.max_atom_weight();
        if delta < max_atom {
            return Err(Error::Precondition(format!("delta {delta} is below the largest atom weight {max_atom}")));
        }
    }
    Ok(())
}

fn spanning_with_table(
    cloud: &PointCloud,
    orbits: &OrbitTable<'_>,
    index: &NeighborIndex<'_>,
    weights: &[f64],
    n: usize,
    gamma: f64,
    delta: f64,
) -> usize {
    greedy_cover(cloud.len(), weights, 1.0 - delta, |c, sink| {
        index.for_each_within(cloud.point(c), gamma, true, |j, _| {
            if orbits.within_bowen(c, j, n, gamma) {
                sink(j)
            }
        })
    })
    .len()
}

/// Greedy size of a `μ`-`(n, γ, δ)`-spanning set.
pub fn spanning_count(
    map: &MapModel,
    cloud: &PointCloud,
    mu: &AtomicMeasure,
    n: usize,
    gamma: f64,
    delta: f64,
    opts: &EntropyOptions,
) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    check_inputs(cloud, mu, gamma, delta, opts)?;
    let orbits = OrbitTable::new(map, cloud, n)?;
    let support = mu.support();
    let index = NeighborIndex::new(cloud, Some(&support));
    Ok(spanning_with_table(cloud, &orbits, &index, &mu.dense_weights(), n, gamma, delta))
}

/// Largest resolved `n`, from `n <= log(γ / resolution) / rate`.
fn saturation_cap(cloud: &PointCloud, gamma: f64, rate: Option<f64>) -> Option<usize> {
    let rate = rate.filter(|r| r.is_finite() && *r > 0.0)?;
    let res = cloud.effective_resolution();
    if res <= 0.0 {
        return None;
    }
    let bound = (gamma / res).ln() / rate;
    Some((bound + 1e-9).floor().max(0.0) as usize)
}

/// Katok growth-rate estimate of the metric entropy.
pub fn katok_entropy_estimate(
    map: &MapModel,
    cloud: &PointCloud,
    mu: &AtomicMeasure,
    n_range: &[usize],
    gamma_grid: &[f64],
    delta: f64,
    opts: &EntropyOptions,
) -> Result<EntropyReport> {
    if gamma_grid.is_empty() || n_range.is_empty() {
        return Err(Error::InvalidArgument("gamma grid and n range must be nonempty".into()));
    }
    let mut ns = n_range.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns[0] == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let mut gammas = gamma_grid.to_vec();
    for &g in &gammas {
        check_inputs(cloud, mu, g, delta, opts)?;
    }
    gammas.sort_by(|a, b| b.total_cmp(a));
    gammas.dedup();

    let mut windows = Vec::with_capacity(gammas.len());
    for &g in &gammas {
        let cap = saturation_cap(cloud, g, opts.saturation_rate);
        let window: Vec<usize> = ns.iter().copied().filter(|&n| cap.is_none_or(|c| n <= c)).collect();
        if window.len() < 2 {
            return Err(Error::ResolutionTooCoarse { gamma: g });
        }
        windows.push((g, cap, window));
    }

    let n_max = *ns.last().unwrap();
    let orbits = OrbitTable::new(map, cloud, n_max)?;
    let support = mu.support();
    let index = NeighborIndex::new(cloud, Some(&support));
    let weights = mu.dense_weights();
    let cells: Vec<(usize, usize)> =
        windows.iter().enumerate().flat_map(|(a, w)| w.2.iter().map(move |&n| (a, n))).collect();
    let counts: Vec<usize> = cells
        .par_iter()
        .map(|&(a, n)| spanning_with_table(cloud, &orbits, &index, &weights, n, windows[a].0, delta))
        .collect();

    let mut series = Vec::with_capacity(windows.len());
    let mut at = 0;
    for (gamma, cap, window) in windows {
        let row = &counts[at..at + window.len()];
        at += window.len();
        let xs: Vec<f64> = window.iter().map(|&n| n as f64).collect();
        let ys: Vec<f64> = row.iter().map(|&r| (r as f64).ln()).collect();
        series.push(EntropySeries {
            gamma,
            max_admissible_n: cap,
            samples: window.iter().zip(row).map(|(&n, &r_hat)| SpanningSample { n, r_hat }).collect(),
            fit: least_squares(&xs, &ys).expect("two distinct n"),
        });
    }
    let invariance_defect = mu.invariance_defect(map).ok();
    Ok(EntropyReport {
        estimate: series.last().unwrap().fit.slope,
        series,
        gamma_grid: gammas,
        n_range: ns,
        delta,
        saturation_rate: opts.saturation_rate,
        invariance_defect,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlockEntropyEntry {
    pub n: usize,
    /// `H_n` in nats.
    pub h_n: f64,
    pub h_n_over_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockEntropyReport {
    pub entries: Vec<BlockEntropyEntry>,
    /// Last `H_n / n`.
    pub limit_estimate: f64,
    /// `H_n - H_{n'}` between consecutive requested lengths, divided by `n - n'`.
    pub increments: Vec<f64>,
}

impl BlockEntropyReport {
    /// CSV with columns `n,H_n,H_n_over_n`.
    pub fn to_csv(&self) -> Result<String> {
        crate::io::csv_string(
            &["n", "H_n", "H_n_over_n"],
            self.entries.iter().map(|e| {
                vec![e.n.to_string(), crate::io::format_f64(e.h_n), crate::io::format_f64(e.h_n_over_n)]
            }),
        )
    }
}

/// Shannon entropy of the partition into length-`n` prefix cylinders,
/// i.e. the join of the first `n` preimages of the one-symbol partition.
pub fn block_entropy(mu: &AtomicMeasure, n: usize) -> Result<BlockEntropyEntry> {
    let cloud = mu.cloud();
    let SpaceModel::SymbolSpace { length, .. } = cloud.space() else {
        return Err(Error::Structural("block entropy needs a symbol space".into()));
    };
    if n == 0 || n > *length {
        return Err(Error::InvalidArgument(format!("block length {n} not in 1..={length}")));
    }
    let mut blocks: BTreeMap<&[u8], CompensatedSum> = BTreeMap::new();
    for &(i, w) in mu.atoms() {
        let word = cloud.point(i).word().expect("symbol point");
        blocks.entry(&word[..n]).or_default().add(w);
    }
    let mut h = CompensatedSum::default();
    for mass in blocks.values() {
        let m = mass.value();
        if m > 0.0 {
            h.add(-m * m.ln());
        }
    }
    let h_n = h.value().max(0.0);
    Ok(BlockEntropyEntry { n, h_n, h_n_over_n: h_n / n as f64 })
}

pub fn block_entropy_report(mu: &AtomicMeasure, lengths: &[usize]) -> Result<BlockEntropyReport> {
    let mut ns = lengths.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() {
        return Err(Error::InvalidArgument("no block lengths requested".into()));
    }
    let entries: Vec<BlockEntropyEntry> = ns.iter().map(|&n| block_entropy(mu, n)).collect::<Result<_>>()?;
    let increments =
        entries.windows(2).map(|w| (w[1].h_n - w[0].h_n) / (w[1].n - w[0].n) as f64).collect();
    Ok(BlockEntropyReport { limit_estimate: entries.last().unwrap().h_n_over_n, entries, increments })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::greedy_cover_count;
    use crate::measures::{sample_measure, Generator};
    use crate::spaces::grid_cloud;
    use std::sync::Arc;

    fn bernoulli(p: f64, length: usize) -> AtomicMeasure {
        sample_measure(&SpaceModel::SymbolSpace { alphabet: 2, length }, &Generator::Bernoulli { p }, 0, 0).unwrap().1
    }

    #[test]
    fn block_entropy_closed_forms() {
        let mu = bernoulli(0.5, 8);
        for n in 1..=8 {
            let e = block_entropy(&mu, n).unwrap();
            assert!((e.h_n - n as f64 * std::f64::consts::LN_2).abs() < 1e-12);
        }
        let mu = bernoulli(1.0, 6);
        assert_eq!(block_entropy(&mu, 4).unwrap().h_n, 0.0);
        let mu = bernoulli(0.25, 10);
        let closed = -(0.25f64 * 0.25f64.ln() + 0.75 * 0.75f64.ln());
        for n in [1, 3, 10] {
            assert!((block_entropy(&mu, n).unwrap().h_n_over_n - closed).abs() < 1e-9);
        }
        assert!(block_entropy(&mu, 11).is_err());
        assert!(block_entropy(&mu, 0).is_err());
    }

    #[test]
    fn block_rate_is_nonincreasing_for_products() {
        let r = block_entropy_report(&bernoulli(0.3, 10), &[1, 2, 3, 5, 8, 10]).unwrap();
        assert!(r.entries.windows(2).all(|w| w[1].h_n_over_n <= w[0].h_n_over_n + 1e-12));
    }

    #[test]
    fn one_step_spanning_is_ball_cover() {
        let cloud = Arc::new(grid_cloud(&SpaceModel::Circle, 1000).unwrap());
        let u = AtomicMeasure::uniform(cloud.clone());
        let opts = EntropyOptions::default();
        for gamma in [0.01, 0.05, 0.2] {
            let r = spanning_count(&MapModel::TimesM(3), &cloud, &u, 1, gamma, 0.05, &opts).unwrap();
            assert_eq!(r, greedy_cover_count(&cloud, &u, gamma, 0.05).unwrap());
        }
    }

    #[test]
    fn rotation_spanning_is_flat_in_n() {
        let cloud = Arc::new(grid_cloud(&SpaceModel::Circle, 1024).unwrap());
        let u = AtomicMeasure::uniform(cloud.clone());
        let map = MapModel::Rotation(0.3);
        let opts = EntropyOptions::default();
        let base = spanning_count(&map, &cloud, &u, 1, 0.05, 0.05, &opts).unwrap();
        for n in 2..6 {
            assert_eq!(spanning_count(&map, &cloud, &u, n, 0.05, 0.05, &opts).unwrap(), base);
        }
    }

    #[test]
    fn floors_are_enforced() {
        let cloud = Arc::new(grid_cloud(&SpaceModel::Circle, 100).unwrap());
        let u = AtomicMeasure::uniform(cloud.clone());
        let opts = EntropyOptions::default();
        let m = MapModel::TimesM(2);
        assert!(matches!(spanning_count(&m, &cloud, &u, 2, 0.005, 0.05, &opts), Err(Error::Precondition(_))));
        assert!(matches!(spanning_count(&m, &cloud, &u, 2, 0.1, 0.001, &opts), Err(Error::Precondition(_))));
    }

    #[test]
    fn coarse_resolution_is_reported() {
        let cloud = Arc::new(grid_cloud(&SpaceModel::Circle, 64).unwrap());
        let u = AtomicMeasure::uniform(cloud.clone());
        let opts = EntropyOptions { saturation_rate: Some(std::f64::consts::LN_2), ..Default::default() };
        // log2(0.05 * 128) = 2.68, so only n = 1, 2 are resolved
        let r = katok_entropy_estimate(&MapModel::TimesM(2), &cloud, &u, &[2, 3, 4], &[0.05], 0.05, &opts);
        assert!(matches!(r, Err(Error::ResolutionTooCoarse { .. })));
    }
}
