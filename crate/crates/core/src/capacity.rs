//! Ball-covering counts `N_μ(β, δ)` and the upper-capacity slope.
//!
//! `N_μ(β, δ)` is approximated by a greedy cover with open `β`-balls centred
//! at cloud points until at least `1 - δ` of the mass is covered. The greedy
//! count is an upper bound on the true minimum; the regression slope of
//! `log N` against `-log β` is what the estimator reports.

use rayon::prelude::*;
use serde::Serialize;

use crate::cover::greedy_cover;
use crate::measures::AtomicMeasure;
use crate::numeric::{least_squares, LineFit};
use crate::spaces::{NeighborIndex, PointCloud};
use crate::{Error, Result};

/// Relative tolerance when checking that a β grid is geometric.
const GEOMETRIC_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapacityOptions {
    /// Drop scales below `2 * resolution`.
    pub enforce_scale_floor: bool,
    /// Reject `δ` below the largest atom weight.
    pub enforce_mass_floor: bool,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        CapacityOptions { enforce_scale_floor: true, enforce_mass_floor: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoverSample {
    pub beta: f64,
    pub n_hat: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacitySeries {
    pub delta: f64,
    pub samples: Vec<CoverSample>,
    pub fit: LineFit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityReport {
    pub series: Vec<CapacitySeries>,
    /// Slope at the smallest δ.
    pub estimate: f64,
    /// Residual of the fit behind `estimate`.
    pub residual: f64,
    pub beta_range: (f64, f64),
    pub delta_grid: Vec<f64>,
    pub scale_floor: f64,
    pub max_atom_weight: f64,
}

impl CapacityReport {
    /// CSV with columns `delta,beta,n_hat`.
    pub fn to_csv(&self) -> Result<String> {
        let rows = self.series.iter().flat_map(|s| {
            s.samples.iter().map(move |p| {
                vec![crate::io::format_f64(s.delta), crate::io::format_f64(p.beta), p.n_hat.to_string()]
            })
        });
        crate::io::csv_string(&["delta", "beta", "n_hat"], rows)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if (0.0..1.0).contains(&delta) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("delta {delta} not in [0, 1)")))
    }
}

/// Greedy count of open `beta`-balls covering mass `>= 1 - delta`.
pub fn greedy_cover_count(cloud: &PointCloud, mu: &AtomicMeasure, beta: f64, delta: f64) -> Result<usize> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!("beta {beta} must be positive")));
    }
    check_delta(delta)?;
    if !mu.is_on(cloud) {
        return Err(Error::InvalidArgument("measure does not live on this cloud".into()));
    }
    let support = mu.support();
    let index = NeighborIndex::new(cloud, Some(&support));
    let weights = mu.dense_weights();
    let chosen = greedy_cover(cloud.len(), &weights, 1.0 - delta, |c, sink| {
        index.for_each_within(cloud.point(c), beta, true, |j, _| sink(j))
    });
    Ok(chosen.len())
}

/// Validated descending geometric grid.
pub(crate) fn geometric_descending(grid: &[f64], what: &str) -> Result<Vec<f64>> {
    let mut g = grid.to_vec();
    if g.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
        return Err(Error::InvalidArgument(format!("{what} values must be positive")));
    }
    g.sort_by(|a, b| b.total_cmp(a));
    if g.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument(format!("{what} grid has repeated values")));
    }
    if g.len() >= 3 {
        let r = g[1] / g[0];
        if g.windows(2).any(|w| ((w[1] / w[0]) / r - 1.0).abs() > GEOMETRIC_TOLERANCE) {
            return Err(Error::InvalidArgument(format!("{what} grid is not geometric")));
        }
    }
    Ok(g)
}

/// Least-squares slope of `log N` against `-log β` for each δ.
pub fn capacity_estimate(
    cloud: &PointCloud,
    mu: &AtomicMeasure,
    beta_grid: &[f64],
    delta_grid: &[f64],
    opts: &CapacityOptions,
) -> Result<CapacityReport> {
    let betas = geometric_descending(beta_grid, "beta")?;
    let scale_floor = 2.0 * cloud.resolution();
    let admissible: Vec<f64> =
        betas.into_iter().filter(|&b| !opts.enforce_scale_floor || b >= scale_floor).collect();
    if admissible.len() < 3 {
        return Err(Error::InsufficientScaleRange { admissible: admissible.len() });
    }
    if delta_grid.is_empty() {
        return Err(Error::InvalidArgument("delta grid is empty".into()));
    }
    let mut deltas = delta_grid.to_vec();
    for &d in &deltas {
        check_delta(d)?;
    }
    deltas.sort_by(|a, b| b.total_cmp(a));
    deltas.dedup();
    let max_atom = mu.max_atom_weight();
    if opts.enforce_mass_floor && deltas.last().copied().unwrap() < max_atom {
        return Err(Error::Precondition(format!(
            "smallest delta {} is below the largest atom weight {max_atom}",
            deltas.last().unwrap()
        )));
    }
    let cells: Vec<(usize, usize)> =
        (0..deltas.len()).flat_map(|a| (0..admissible.len()).map(move |b| (a, b))).collect();
    let counts: Vec<usize> = cells
        .par_iter()
        .map(|&(a, b)| greedy_cover_count(cloud, mu, admissible[b], deltas[a]))
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = admissible.iter().map(|b| -b.ln()).collect();
    let series: Vec<CapacitySeries> = deltas
        .iter()
        .enumerate()
        .map(|(a, &delta)| {
            let row = &counts[a * admissible.len()..(a + 1) * admissible.len()];
            let ys: Vec<f64> = row.iter().map(|&n| (n as f64).ln()).collect();
            CapacitySeries {
                delta,
                samples: admissible.iter().zip(row).map(|(&beta, &n_hat)| CoverSample { beta, n_hat }).collect(),
                fit: least_squares(&xs, &ys).expect("at least three distinct scales"),
            }
        })
        .collect();
    let last = series.last().unwrap();
    Ok(CapacityReport {
        estimate: last.fit.slope,
        residual: last.fit.residual,
        beta_range: (*admissible.last().unwrap(), admissible[0]),
        delta_grid: deltas,
        scale_floor,
        max_atom_weight: max_atom,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{grid_cloud, SpaceModel};
    use std::sync::Arc;

    #[test]
    fn dirac_needs_one_ball() {
        let cloud = Arc::new(grid_cloud(&SpaceModel::Circle, 64).unwrap());
        let d = AtomicMeasure::dirac(cloud.clone(), 7).unwrap();
        for beta in [1e-3, 0.1, 0.7] {
            assert_eq!(greedy_cover_count(&cloud, &d, beta, 0.0).unwrap(), 1);
        }
    }

    #[test]
    fn counts_are_monotone() {
        let cloud = Arc::new(grid_cloud(&SpaceModel::UnitInterval, 500).unwrap());
        let u = AtomicMeasure::uniform(cloud.clone());
        let betas = [0.005, 0.01, 0.02, 0.05, 0.1, 0.3];
        for delta in [0.0, 0.1, 0.5] {
            let ns: Vec<usize> = betas.iter().map(|&b| greedy_cover_count(&cloud, &u, b, delta).unwrap()).collect();
            assert!(ns.windows(2).all(|w| w[0] >= w[1]), "{ns:?}");
        }
        for beta in betas {
            let a = greedy_cover_count(&cloud, &u, beta, 0.0).unwrap();
            let b = greedy_cover_count(&cloud, &u, beta, 0.3).unwrap();
            assert!(a >= b);
        }
    }

    #[test]
    fn dirac_slope_is_zero() {
        let cloud = Arc::new(grid_cloud(&SpaceModel::UnitInterval, 1025).unwrap());
        let d = AtomicMeasure::dirac(cloud.clone(), 100).unwrap();
        let betas: Vec<f64> = (3..=9).map(|k| 0.5f64.powi(k)).collect();
        let opts = CapacityOptions { enforce_mass_floor: false, ..Default::default() };
        let r = capacity_estimate(&cloud, &d, &betas, &[0.01], &opts).unwrap();
        assert_eq!(r.estimate, 0.0);
        assert_eq!(r.residual, 0.0);
        // the default mass floor rejects a single atom
        assert!(capacity_estimate(&cloud, &d, &betas, &[0.01], &CapacityOptions::default()).is_err());
    }

    #[test]
    fn insufficient_scale_range() {
        let cloud = Arc::new(grid_cloud(&SpaceModel::UnitInterval, 65).unwrap());
        let u = AtomicMeasure::uniform(cloud.clone());
        // floor is 2 * (0.5 / 64) = 1/64
        let r = capacity_estimate(&cloud, &u, &[0.25, 0.125, 0.0625, 0.03125], &[0.1], &Default::default());
        assert_eq!(r.unwrap().series[0].samples.len(), 4);
        let r = capacity_estimate(&cloud, &u, &[0.125, 0.0625, 0.015625], &[0.1], &Default::default());
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
        let r = capacity_estimate(&cloud, &u, &[0.04, 0.02, 0.01], &[0.1], &Default::default());
        assert!(matches!(r, Err(Error::InsufficientScaleRange { admissible: 2 })));
    }
}
