//! Expansion exponents of maps and measures on a finite cloud.
//!
//! For a scale `ε`, `lambda_hat(ε)` is the infimum of
//! `log(d(Tx, Ty) / d(x, y))` over the ordered pairs with `0 < d(x, y) < ε`:
//! the largest `λ` for which no such pair satisfies
//! `d(Tx, Ty) < e^λ d(x, y)`. For a measure `μ` only pairs whose second
//! point is a support atom are constrained. The scalar exponent is the best
//! value over the admissible grid.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::extended::ExtendedReal;
use crate::maps::MapModel;
use crate::measures::AtomicMeasure;
use crate::spaces::{NeighborIndex, Point, PointCloud, SpaceModel};
use crate::{Error, Result};

/// Default multiple of the cloud resolution below which scales are rejected.
pub const DEFAULT_FLOOR_FACTOR: f64 = 4.0;

/// Default number of pairs kept by [`witness_measure`].
pub const DEFAULT_WITNESS_TERMS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileOptions {
    pub floor_factor: f64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions { floor_factor: DEFAULT_FLOOR_FACTOR }
    }
}

impl ProfileOptions {
    pub fn floor(&self, cloud: &PointCloud) -> f64 {
        self.floor_factor * cloud.resolution()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfileEntry {
    pub epsilon: f64,
    pub lambda_hat: ExtendedReal,
    pub pair_count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonProfile {
    pub entries: Vec<ProfileEntry>,
    pub resolution_floor: f64,
}

impl EpsilonProfile {
    /// Largest `lambda_hat` over entries that have at least one pair; `+inf`
    /// if no entry does.
    pub fn estimate(&self) -> ExtendedReal {
        self.entries
            .iter()
            .filter(|e| e.pair_count > 0)
            .map(|e| e.lambda_hat)
            .max()
            .unwrap_or(ExtendedReal::POS_INFINITY)
    }

    pub fn lambda_hats(&self) -> Vec<ExtendedReal> {
        self.entries.iter().map(|e| e.lambda_hat).collect()
    }

    /// CSV with columns `epsilon,lambda_hat,pair_count`.
    pub fn to_csv(&self) -> Result<String> {
        crate::io::csv_string(
            &["epsilon", "lambda_hat", "pair_count"],
            self.entries.iter().map(|e| {
                vec![crate::io::format_f64(e.epsilon), e.lambda_hat.to_string(), e.pair_count.to_string()]
            }),
        )
    }
}

/// A witness `(k, ε)` that every pair `(x, y)` with `y` in the support and
/// `d(x, y) < ε` is stretched by at least `k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentCertificate {
    pub k: f64,
    pub epsilon: f64,
    /// Cloud points used as the first pair member in the verification scan.
    pub checked_points: usize,
    pub checked_pairs: u64,
}

#[inline]
fn ratio_log(image_distance: f64, distance: f64) -> f64 {
    if image_distance == 0.0 {
        f64::NEG_INFINITY
    } else {
        (image_distance / distance).ln()
    }
}

/// `log(d(Tx, Ty) / d(x, y))`, `-inf` when the images coincide.
pub fn log_ratio(map: &MapModel, space: &SpaceModel, x: &Point, y: &Point) -> Result<ExtendedReal> {
    let d = space.distance(x, y)?;
    if d == 0.0 {
        return Err(Error::Precondition("log_ratio needs d(x, y) > 0".into()));
    }
    let d_img = space.distance(&map.apply(x)?, &map.apply(y)?)?;
    Ok(ExtendedReal::new(ratio_log(d_img, d)))
}

fn check_grid(grid: &[f64], floor: f64) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("epsilon grid is empty".into()));
    }
    if grid.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidArgument("epsilon values must be positive and finite".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("epsilon grid must be strictly increasing".into()));
    }
    if grid[0] < floor {
        return Err(Error::BelowResolutionFloor { epsilon: grid[0], floor });
    }
    Ok(())
}

fn images(map: &MapModel, cloud: &PointCloud) -> Result<Vec<Point>> {
    map.validate(cloud.space())?;
    cloud.points().par_iter().map(|p| map.apply(p)).collect()
}

/// Profile over pairs `(x, y)` with `x` anywhere in the cloud and `y` in
/// `targets`.
fn profile_over(
    map: &MapModel,
    cloud: &PointCloud,
    targets: &[usize],
    grid: &[f64],
    opts: &ProfileOptions,
) -> Result<EpsilonProfile> {
    let floor = opts.floor(cloud);
    check_grid(grid, floor)?;
    let images = images(map, cloud)?;
    let space = cloud.space();
    let index = NeighborIndex::new(cloud, Some(targets));
    let eps_max = *grid.last().unwrap();
    let k = grid.len();
    // Per-bucket minima and counts; bucket b holds pairs with
    // grid[b-1] <= d < grid[b]. Min and integer sums are order-insensitive.
    let (mins, counts) = (0..cloud.len())
        .into_par_iter()
        .fold(
            || (vec![f64::INFINITY; k], vec![0u64; k]),
            |(mut mins, mut counts), i| {
                index.for_each_within(cloud.point(i), eps_max, true, |j, d| {
                    if j == i || d <= 0.0 {
                        return;
                    }
                    let lr = ratio_log(space.dist(&images[i], &images[j]), d);
                    let b = grid.partition_point(|&e| e <= d);
                    if lr < mins[b] {
                        mins[b] = lr;
                    }
                    counts[b] += 1;
                });
                (mins, counts)
            },
        )
        .reduce(
            || (vec![f64::INFINITY; k], vec![0u64; k]),
            |(mut ma, mut ca), (mb, cb)| {
                for b in 0..k {
                    ma[b] = ma[b].min(mb[b]);
                    ca[b] += cb[b];
                }
                (ma, ca)
            },
        );
    let mut entries = Vec::with_capacity(k);
    let mut running_min = f64::INFINITY;
    let mut running_count = 0u64;
    for b in 0..k {
        running_min = running_min.min(mins[b]);
        running_count += counts[b];
        entries.push(ProfileEntry {
            epsilon: grid[b],
            lambda_hat: ExtendedReal::new(running_min),
            pair_count: running_count,
        });
    }
    Ok(EpsilonProfile { entries, resolution_floor: floor })
}

/// Profile of the map itself: every ordered pair of distinct cloud points.
pub fn map_expansion_profile(
    map: &MapModel,
    cloud: &PointCloud,
    epsilon_grid: &[f64],
    opts: &ProfileOptions,
) -> Result<EpsilonProfile> {
    let all: Vec<usize> = (0..cloud.len()).collect();
    profile_over(map, cloud, &all, epsilon_grid, opts)
}

/// Profile of a measure: `x` over the whole cloud, `y` over the support.
pub fn measure_expansion_profile(
    map: &MapModel,
    cloud: &PointCloud,
    mu: &AtomicMeasure,
    epsilon_grid: &[f64],
    opts: &ProfileOptions,
) -> Result<EpsilonProfile> {
    if !mu.is_on(cloud) {
        return Err(Error::InvalidArgument("measure does not live on this cloud".into()));
    }
    profile_over(map, cloud, &mu.support(), epsilon_grid, opts)
}

/// Looks for `k > 1` and `ε` on the grid such that no pair `(x, y)` with `y`
/// in the support and `d(x, y) < ε` has `d(Tx, Ty) < k d(x, y)`.
///
/// Takes the largest grid scale with a positive finite `lambda_hat` and
/// `k = exp(lambda_hat / 2)`, then confirms it by a direct scan.
pub fn positive_exponent_certificate(
    map: &MapModel,
    cloud: &PointCloud,
    mu: &AtomicMeasure,
    epsilon_grid: &[f64],
    opts: &ProfileOptions,
) -> Result<Option<ExponentCertificate>> {
    let profile = measure_expansion_profile(map, cloud, mu, epsilon_grid, opts)?;
    let Some(entry) = profile
        .entries
        .iter()
        .rev()
        .find(|e| e.pair_count > 0 && e.lambda_hat.is_finite() && e.lambda_hat.value() > 0.0)
    else {
        return Ok(None);
    };
    let k = (entry.lambda_hat.value() / 2.0).exp().max(1.0 + 1e-9);
    let epsilon = entry.epsilon;
    let images = images(map, cloud)?;
    let space = cloud.space();
    let support = mu.support();
    let index = NeighborIndex::new(cloud, Some(&support));
    let (violations, checked_pairs) = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let mut bad = 0u64;
            let mut seen = 0u64;
            index.for_each_within(cloud.point(i), epsilon, true, |j, d| {
                if j != i && d > 0.0 {
                    seen += 1;
                    if space.dist(&images[i], &images[j]) < k * d {
                        bad += 1;
                    }
                }
            });
            (bad, seen)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    if violations > 0 {
        return Ok(None);
    }
    Ok(Some(ExponentCertificate { k, epsilon, checked_points: cloud.len(), checked_pairs }))
}

/// Pairs `(x, y, d)` at the finest grid scale whose log-ratio is below
/// `lambda`, ordered by distance then index.
pub fn violating_pairs(
    map: &MapModel,
    cloud: &PointCloud,
    lambda: f64,
    epsilon_grid: &[f64],
    opts: &ProfileOptions,
) -> Result<Vec<(usize, usize, f64)>> {
    check_grid(epsilon_grid, opts.floor(cloud))?;
    let images = images(map, cloud)?;
    let space = cloud.space();
    let eps = epsilon_grid[0];
    let index = NeighborIndex::new(cloud, None);
    let mut pairs: Vec<(usize, usize, f64)> = (0..cloud.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut local = Vec::new();
            index.for_each_within(cloud.point(i), eps, true, |j, d| {
                if j != i && d > 0.0 && ratio_log(space.dist(&images[i], &images[j]), d) < lambda {
                    local.push((i, j, d));
                }
            });
            local
        })
        .collect();
    pairs.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    Ok(pairs)
}

/// Truncated minimizing measure `Σ_{i=1}^{K} 2^{-i} δ_{y_i}` (renormalized),
/// where `(x_i, y_i)` are the `K` closest pairs at the finest grid scale
/// violating the stretch bound `e^lambda`. The truncation removes less than
/// `2^{-K}` of the mass. Fewer than `K` available pairs are all used.
pub fn witness_measure(
    map: &MapModel,
    cloud: &Arc<PointCloud>,
    lambda: f64,
    terms: usize,
    epsilon_grid: &[f64],
    opts: &ProfileOptions,
) -> Result<AtomicMeasure> {
    if terms == 0 {
        return Err(Error::InvalidArgument("witness needs at least one term".into()));
    }
    let pairs = violating_pairs(map, cloud, lambda, epsilon_grid, opts)?;
    if pairs.is_empty() {
        return Err(Error::LambdaNotAboveExponent { lambda });
    }
    let atoms = pairs.iter().take(terms).enumerate().map(|(r, &(_, y, _))| (y, 0.5f64.powi(r as i32 + 1)));
    AtomicMeasure::new(cloud.clone(), atoms)
}
