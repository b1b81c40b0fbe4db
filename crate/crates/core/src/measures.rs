//! Finitely supported probability measures on a point cloud.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::maps::MapModel;
use crate::numeric::{compensated_sum, CompensatedSum};
use crate::seed::component_rng;
use crate::spaces::{enumerate_words, grid_cloud, NeighborIndex, Point, PointCloud, Scalar, SpaceModel};
use crate::{Error, Result};

/// Images must land within this distance of a cloud point.
pub const SNAP_TOLERANCE: f64 = 1e-9;

const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// A probability measure `Σ w_i δ_{p_i}` over points of a shared cloud.
///
/// Atoms are kept sorted by point index, with strictly positive weights
/// summing to 1.
#[derive(Clone, Debug)]
pub struct AtomicMeasure {
    cloud: Arc<PointCloud>,
    atoms: Vec<(usize, f64)>,
}

impl AtomicMeasure {
    /// Normalizes `atoms`, merging repeated indices and dropping zero weights.
    pub fn new(cloud: Arc<PointCloud>, atoms: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut merged: Vec<(usize, f64)> = Vec::new();
        let mut raw: Vec<(usize, f64)> = atoms.into_iter().collect();
        for &(i, w) in &raw {
            if i >= cloud.len() {
                return Err(Error::InvalidArgument(format!("atom index {i} out of range for {} points", cloud.len())));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidArgument(format!("atom weight {w} must be finite and >= 0")));
            }
        }
        raw.sort_by_key(|a| a.0);
        let mut acc = CompensatedSum::default();
        let mut current: Option<usize> = None;
        for (i, w) in raw {
            if current != Some(i) {
                if let Some(c) = current {
                    merged.push((c, acc.value()));
                }
                current = Some(i);
                acc = CompensatedSum::default();
            }
            acc.add(w);
        }
        if let Some(c) = current {
            merged.push((c, acc.value()));
        }
        merged.retain(|a| a.1 > 0.0);
        let total = compensated_sum(merged.iter().map(|a| a.1));
        if total <= 0.0 {
            return Err(Error::InvalidArgument("measure has zero total mass".into()));
        }
        for a in &mut merged {
            a.1 /= total;
        }
        Ok(AtomicMeasure { cloud, atoms: merged })
    }

    pub fn uniform(cloud: Arc<PointCloud>) -> Self {
        let n = cloud.len();
        let w = 1.0 / n as f64;
        AtomicMeasure { atoms: (0..n).map(|i| (i, w)).collect(), cloud }
    }

    pub fn dirac(cloud: Arc<PointCloud>, index: usize) -> Result<Self> {
        if index >= cloud.len() {
            return Err(Error::InvalidArgument(format!("dirac index {index} out of range for {} points", cloud.len())));
        }
        Ok(AtomicMeasure { cloud, atoms: vec![(index, 1.0)] })
    }

    /// `Σ t_i μ_i` for weights `t_i >= 0` summing to 1.
    pub fn convex_combine(terms: &[(f64, &AtomicMeasure)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::InvalidArgument("no terms to combine".into()))?;
        let cloud = first.1.cloud.clone();
        if terms.iter().any(|(_, m)| !m.same_cloud(first.1)) {
            return Err(Error::InvalidArgument("measures live on different clouds".into()));
        }
        if terms.iter().any(|(t, _)| !(*t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidArgument("combination weights must be >= 0".into()));
        }
        let total = compensated_sum(terms.iter().map(|t| t.0));
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidArgument(format!("combination weights sum to {total}, not 1")));
        }
        let atoms = terms.iter().flat_map(|(t, m)| m.atoms.iter().map(move |&(i, w)| (i, t * w)));
        AtomicMeasure::new(cloud, atoms)
    }

    pub fn cloud(&self) -> &Arc<PointCloud> {
        &self.cloud
    }

    pub fn atoms(&self) -> &[(usize, f64)] {
        &self.atoms
    }

    /// Support indices in increasing order.
    pub fn support(&self) -> Vec<usize> {
        self.atoms.iter().map(|a| a.0).collect()
    }

    /// Weight of every cloud point (0 off the support).
    pub fn dense_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.cloud.len()];
        for &(i, m) in &self.atoms {
            w[i] = m;
        }
        w
    }

    pub fn max_atom_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).fold(0.0, f64::max)
    }

    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.atoms.iter().map(|a| a.1))
    }

    pub fn same_cloud(&self, other: &AtomicMeasure) -> bool {
        Arc::ptr_eq(&self.cloud, &other.cloud) || *self.cloud == *other.cloud
    }

    pub fn is_on(&self, cloud: &PointCloud) -> bool {
        std::ptr::eq(Arc::as_ptr(&self.cloud), cloud) || *self.cloud == *cloud
    }

    /// Mass of a set of point indices; repeated or out-of-range indices are
    /// ignored.
    pub fn mass_of(&self, indices: &[usize]) -> f64 {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        compensated_sum(
            sorted
                .iter()
                .filter_map(|i| self.atoms.binary_search_by_key(i, |a| a.0).ok())
                .map(|k| self.atoms[k].1),
        )
    }

    /// The measure conditioned on `indices` and renormalized.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let mut keep = vec![false; self.cloud.len()];
        for &i in indices {
            if i < keep.len() {
                keep[i] = true;
            }
        }
        AtomicMeasure::new(self.cloud.clone(), self.atoms.iter().copied().filter(|a| keep[a.0]))
    }

    /// Image measure `T_* μ`; every image must snap to a cloud point.
    pub fn pushforward(&self, map: &MapModel) -> Result<Self> {
        map.validate(self.cloud.space())?;
        let locator = Locator::new(&self.cloud);
        let mut atoms = Vec::with_capacity(self.atoms.len());
        for &(i, w) in &self.atoms {
            let image = map.apply(self.cloud.point(i))?;
            let j = locator
                .locate(&image)
                .ok_or_else(|| Error::NotRepresentable(format!("image {image:?} of point {i}")))?;
            atoms.push((j, w));
        }
        AtomicMeasure::new(self.cloud.clone(), atoms)
    }

    /// Total-variation distance between two measures on the same cloud.
    pub fn total_variation(&self, other: &AtomicMeasure) -> Result<f64> {
        if !self.same_cloud(other) {
            return Err(Error::InvalidArgument("measures live on different clouds".into()));
        }
        let (a, b) = (self.dense_weights(), other.dense_weights());
        Ok(0.5 * compensated_sum(a.iter().zip(&b).map(|(x, y)| (x - y).abs())))
    }

    /// Distance between μ and `T_* μ` at the resolution of the cloud.
    ///
    /// On the interval and the circle, under a piecewise-affine map, each atom
    /// is spread uniformly over its Voronoi cell, the cells are transported
    /// exactly through `T`, and the result is `max_B |μ(T^{-1} B) - μ(B)|`
    /// over unions of cells. Elsewhere it is the total-variation distance
    /// between μ and its atomic pushforward.
    pub fn invariance_defect(&self, map: &MapModel) -> Result<f64> {
        map.validate(self.cloud.space())?;
        match (self.cloud.space().scalar(), map.affine_pieces()) {
            (Some(scalar), Some(pieces)) => Ok(self.cell_transport_defect(scalar, &pieces)),
            _ => self.total_variation(&self.pushforward(map)?),
        }
    }

    fn cell_transport_defect(&self, scalar: Scalar, pieces: &[(f64, f64, f64, f64)]) -> f64 {
        let cloud = &self.cloud;
        let xs: Vec<f64> = cloud.points().iter().map(|p| p.real().unwrap()).collect();
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
        let n = order.len();
        let mut rank = vec![0; n];
        for (k, &i) in order.iter().enumerate() {
            rank[i] = k;
        }
        let mut bounds = Vec::with_capacity(n + 1);
        let circle = scalar == Scalar::Circle;
        bounds.push(if circle { (xs[order[n - 1]] - 1.0 + xs[order[0]]) / 2.0 } else { 0.0 });
        for w in order.windows(2) {
            bounds.push((xs[w[0]] + xs[w[1]]) / 2.0);
        }
        bounds.push(if circle { bounds[0] + 1.0 } else { 1.0 });
        let (start, end) = (bounds[0], bounds[n]);
        let cell_of = |t: f64| bounds.partition_point(|&b| b <= t).clamp(1, n) - 1;

        let mut image = vec![CompensatedSum::default(); n];
        // spread `mass` uniformly over [u, v) inside the fundamental window
        let mut spread_window = |u: f64, v: f64, mass: f64| {
            let mut k = cell_of(u);
            while k < n && bounds[k] < v {
                let overlap = v.min(bounds[k + 1]) - u.max(bounds[k]);
                if overlap > 0.0 {
                    image[k].add(mass * overlap / (v - u));
                }
                k += 1;
            }
        };
        let mut deposit = |u: f64, v: f64, mass: f64| {
            if !circle {
                spread_window(u.max(start), v.min(end).max(u.max(start)), mass);
                return;
            }
            let shift = ((u - start) / (end - start)).floor();
            let (mut a, mut b) = (u - shift, v - shift);
            let total = v - u;
            while a < b {
                let stop = b.min(end);
                spread_window(a, stop, mass * (stop - a) / total);
                a = stop;
                if a >= end {
                    a -= 1.0;
                    b -= 1.0;
                }
            }
        };

        let mut point_mass = vec![0.0; n];
        for &(i, w) in &self.atoms {
            let (lo, hi) = (bounds[rank[i]], bounds[rank[i] + 1]);
            for &(a, b, slope, icpt) in pieces {
                let (a, b) = (a.max(lo), b.min(hi));
                if b <= a {
                    continue;
                }
                let mass = w * (b - a) / (hi - lo);
                let (fa, fb) = (slope * a + icpt, slope * b + icpt);
                if fa == fb {
                    let mut t = fa;
                    if circle {
                        t -= ((t - start) / (end - start)).floor();
                    }
                    point_mass[cell_of(t.clamp(start, end))] += mass;
                } else {
                    deposit(fa.min(fb), fa.max(fb), mass);
                }
            }
        }
        let mut weights = vec![0.0; n];
        for &(i, w) in &self.atoms {
            weights[rank[i]] = w;
        }
        0.5 * compensated_sum((0..n).map(|k| (image[k].value() + point_mass[k] - weights[k]).abs()))
    }

    /// CSV rows `c0,...,c{k-1},weight`, one per atom.
    pub fn to_csv(&self) -> Result<String> {
        let space = self.cloud.space();
        let mut header: Vec<String> = (0..space.coordinate_count()).map(|k| format!("c{k}")).collect();
        header.push("weight".into());
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows = self.atoms.iter().map(|&(i, w)| {
            let mut row: Vec<String> =
                space.coordinates(self.cloud.point(i)).into_iter().map(crate::io::format_f64).collect();
            row.push(crate::io::format_f64(w));
            row
        });
        crate::io::csv_string(&header, rows)
    }

    /// Parses the format written by [`AtomicMeasure::to_csv`]. The cloud is
    /// the set of listed points with a nearest-neighbour resolution; weights
    /// are renormalized.
    pub fn from_csv(space: &SpaceModel, text: &str) -> Result<Self> {
        space.validate()?;
        let k = space.coordinate_count();
        let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut rows: Vec<(Point, f64)> = Vec::new();
        for (line, rec) in reader.records().enumerate() {
            let rec = rec?;
            if rec.len() != k + 1 {
                return Err(Error::Io(format!("row {}: expected {} fields, got {}", line + 2, k + 1, rec.len())));
            }
            let nums: Vec<f64> = rec
                .iter()
                .map(|f| crate::io::parse_f64(f).ok_or_else(|| Error::Io(format!("row {}: bad number {f:?}", line + 2))))
                .collect::<Result<_>>()?;
            rows.push((space.point_from_coordinates(&nums[..k])?, nums[k]));
        }
        if rows.is_empty() {
            return Err(Error::Io("measure file has no rows".into()));
        }
        let cloud = Arc::new(PointCloud::sampled(space.clone(), rows.iter().map(|r| r.0.clone()).collect())?);
        let locator = Locator::new(&cloud);
        let atoms: Vec<(usize, f64)> =
            rows.iter().map(|(p, w)| (locator.locate(p).expect("listed point is in its own cloud"), *w)).collect();
        AtomicMeasure::new(cloud, atoms)
    }
}

/// Point-to-index lookup with snapping.
struct Locator<'a> {
    cloud: &'a PointCloud,
    words: Option<HashMap<&'a [u8], usize>>,
    index: NeighborIndex<'a>,
}

impl<'a> Locator<'a> {
    fn new(cloud: &'a PointCloud) -> Self {
        let words = matches!(cloud.space(), SpaceModel::SymbolSpace { .. })
            .then(|| cloud.points().iter().enumerate().map(|(i, p)| (p.word().unwrap(), i)).collect());
        Locator { cloud, words, index: NeighborIndex::new(cloud, None) }
    }

    fn locate(&self, p: &Point) -> Option<usize> {
        if let Some(words) = &self.words {
            return p.word().and_then(|w| words.get(w).copied());
        }
        if !self.cloud.space().contains(p) {
            return None;
        }
        let mut best: Option<(f64, usize)> = None;
        self.index.for_each_within(p, SNAP_TOLERANCE, false, |i, d| {
            if best.is_none_or(|(bd, bi)| d < bd || (d == bd && i < bi)) {
                best = Some((d, i));
            }
        });
        best.map(|b| b.1)
    }
}

/// Test-measure generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// `n` i.i.d. uniform points, uniform weights.
    UniformIid,
    /// The equispaced grid of `n` points, uniform weights.
    GridUniform,
    /// Product measure on all binary words: `p` per 0, `1 - p` per 1.
    Bernoulli { p: f64 },
    /// Uniform weight on the `2^depth` left endpoints of the middle-thirds
    /// construction intervals.
    Cantor { depth: u32 },
}

/// Builds a cloud and a measure on it. Deterministic given `seed`; `n` is
/// ignored by the Bernoulli and Cantor generators.
pub fn sample_measure(
    space: &SpaceModel,
    generator: &Generator,
    n: usize,
    seed: u64,
) -> Result<(Arc<PointCloud>, AtomicMeasure)> {
    space.validate()?;
    match generator {
        Generator::UniformIid => {
            if n == 0 {
                return Err(Error::InvalidArgument("uniform-iid needs n >= 1".into()));
            }
            let mut rng = component_rng(seed, "sample_measure.uniform_iid");
            let pts: Vec<Point> = (0..n).map(|_| random_point(space, &mut rng)).collect();
            let cloud = Arc::new(PointCloud::sampled(space.clone(), pts)?);
            Ok((cloud.clone(), AtomicMeasure::uniform(cloud)))
        }
        Generator::GridUniform => {
            let cloud = Arc::new(grid_cloud(space, n)?);
            Ok((cloud.clone(), AtomicMeasure::uniform(cloud)))
        }
        Generator::Bernoulli { p } => {
            let SpaceModel::SymbolSpace { alphabet: 2, length } = space else {
                return Err(Error::Structural(format!("bernoulli needs a binary symbol space, got {space:?}")));
            };
            if !(0.0..=1.0).contains(p) {
                return Err(Error::InvalidArgument(format!("bernoulli parameter {p} not in [0, 1]")));
            }
            let words = enumerate_words(2, *length);
            let weights: Vec<f64> = words
                .iter()
                .map(|w| {
                    let ones = w.iter().filter(|&&s| s == 1).count() as i32;
                    p.powi(*length as i32 - ones) * (1.0 - p).powi(ones)
                })
                .collect();
            let cloud = Arc::new(PointCloud::new(space.clone(), words.into_iter().map(Point::Word).collect(), 0.0)?);
            let mu = AtomicMeasure::new(cloud.clone(), weights.into_iter().enumerate())?;
            Ok((cloud, mu))
        }
        Generator::Cantor { depth } => {
            if *space != SpaceModel::UnitInterval {
                return Err(Error::Structural(format!("cantor measure lives on the unit interval, got {space:?}")));
            }
            if *depth > 24 {
                return Err(Error::InvalidArgument(format!("cantor depth {depth} too large")));
            }
            let pts: Vec<Point> = (0..1u64 << depth)
                .map(|code| {
                    let mut x = 0.0;
                    let mut scale = 1.0;
                    for level in (0..*depth).rev() {
                        scale /= 3.0;
                        if code >> level & 1 == 1 {
                            x += 2.0 * scale;
                        }
                    }
                    Point::Real(x)
                })
                .collect();
            let cloud = Arc::new(PointCloud::new(space.clone(), pts, 3f64.powi(-(*depth as i32)))?);
            Ok((cloud.clone(), AtomicMeasure::uniform(cloud)))
        }
    }
}

fn random_point(space: &SpaceModel, rng: &mut impl Rng) -> Point {
    match space {
        SpaceModel::UnitInterval => Point::Real(rng.gen_range(0.0..=1.0)),
        SpaceModel::Circle => Point::Real(rng.gen_range(0.0..1.0)),
        SpaceModel::Product { factors } => Point::Tuple(factors.iter().map(|f| random_point(f, rng)).collect()),
        SpaceModel::SymbolSpace { alphabet, length } => {
            Point::Word((0..*length).map(|_| rng.gen_range(0..*alphabet)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize) -> Arc<PointCloud> {
        Arc::new(grid_cloud(&SpaceModel::Circle, n).unwrap())
    }

    #[test]
    fn dirac_examples() {
        let c = circle(8);
        let d = AtomicMeasure::dirac(c.clone(), 0).unwrap();
        assert_eq!(d.mass_of(&[0]), 1.0);
        assert_eq!(d.mass_of(&[1, 2, 3]), 0.0);
        let pushed = d.pushforward(&MapModel::ConstantMap(0.375.into())).unwrap();
        assert_eq!(pushed.atoms(), &[(3, 1.0)]);
        assert!(AtomicMeasure::dirac(c, 8).is_err());
    }

    #[test]
    fn convex_combine_examples() {
        let c = circle(8);
        let a = AtomicMeasure::dirac(c.clone(), 1).unwrap();
        let b = AtomicMeasure::dirac(c.clone(), 5).unwrap();
        let u = AtomicMeasure::uniform(c.clone());
        assert_eq!(AtomicMeasure::convex_combine(&[(1.0, &u)]).unwrap().atoms(), u.atoms());
        assert_eq!(AtomicMeasure::convex_combine(&[(0.5, &a), (0.5, &a)]).unwrap().atoms(), a.atoms());
        assert_eq!(AtomicMeasure::convex_combine(&[(0.25, &a), (0.75, &b)]).unwrap().atoms(), &[(1, 0.25), (5, 0.75)]);
        assert!(AtomicMeasure::convex_combine(&[(0.5, &a), (0.6, &b)]).is_err());
        let other = AtomicMeasure::dirac(circle(4), 0).unwrap();
        assert!(AtomicMeasure::convex_combine(&[(0.5, &a), (0.5, &other)]).is_err());
    }

    #[test]
    fn mass_of_examples() {
        let u = AtomicMeasure::uniform(circle(4));
        assert_eq!(u.mass_of(&[0, 1, 2, 3]), 1.0);
        assert_eq!(u.mass_of(&[]), 0.0);
        assert_eq!(u.mass_of(&[2]), 0.25);
        assert_eq!(u.mass_of(&[2, 2]), 0.25);
    }

    #[test]
    fn pushforward_examples() {
        let c = circle(4);
        let u = AtomicMeasure::uniform(c.clone());
        let rot = u.pushforward(&MapModel::Rotation(0.25)).unwrap();
        assert_eq!(rot.atoms(), u.atoms());
        let dbl = u.pushforward(&MapModel::TimesM(2)).unwrap();
        assert_eq!(dbl.atoms(), &[(0, 0.5), (2, 0.5)]);
        let off = u.pushforward(&MapModel::Rotation(0.1));
        assert!(matches!(off, Err(Error::NotRepresentable(_))));
    }

    #[test]
    fn invariance_defect_examples() {
        let n = 12;
        let u = AtomicMeasure::uniform(circle(n));
        assert!(u.invariance_defect(&MapModel::Rotation(5.0 / 12.0)).unwrap() < 1e-12);
        // every grid cell of a 2^L grid receives half of two preimage cells
        let u = AtomicMeasure::uniform(circle(1 << 8));
        assert_eq!(u.invariance_defect(&MapModel::TimesM(2)).unwrap(), 0.0);
        let u = AtomicMeasure::uniform(circle(3usize.pow(6)));
        assert!(u.invariance_defect(&MapModel::TimesM(3)).unwrap() < 1e-12);
        let d = AtomicMeasure::dirac(circle(4), 0).unwrap();
        assert_eq!(d.invariance_defect(&MapModel::Rotation(0.25)).unwrap(), 1.0);
        assert_eq!(d.invariance_defect(&MapModel::TimesM(2)).unwrap(), 0.5);
        let u = AtomicMeasure::uniform(circle(8));
        assert!((u.invariance_defect(&MapModel::Rotation(1.0 / 16.0)).unwrap() - 0.0).abs() < 1e-15);
        let u = AtomicMeasure::uniform(circle(8));
        assert!(u.invariance_defect(&MapModel::Contraction(0.5)).is_err());
    }

    #[test]
    fn invariance_defect_on_the_interval() {
        let cloud = Arc::new(grid_cloud(&SpaceModel::UnitInterval, 257).unwrap());
        let u = AtomicMeasure::uniform(cloud.clone());
        let full = u.invariance_defect(&MapModel::Tent(2.0)).unwrap();
        assert!(full < 0.01, "{full}");
        let d = u.invariance_defect(&MapModel::Contraction(0.5)).unwrap();
        // half of the mass lands in [0, 1/2]: the upper half of the cells empties
        assert!((d - 0.5).abs() < 0.01, "{d}");
        let words = SpaceModel::SymbolSpace { alphabet: 2, length: 6 };
        let (_, mu) = sample_measure(&words, &Generator::Bernoulli { p: 0.3 }, 64, 0).unwrap();
        assert!(mu.invariance_defect(&MapModel::Shift(crate::maps::ShiftMode::Cyclic)).unwrap() < 1e-12);
        assert!(mu.invariance_defect(&MapModel::Shift(crate::maps::ShiftMode::Pad)).unwrap() > 0.1);
    }

    #[test]
    fn bernoulli_examples() {
        let space = SpaceModel::SymbolSpace { alphabet: 2, length: 3 };
        let (cloud, mu) = sample_measure(&space, &Generator::Bernoulli { p: 0.5 }, 8, 0).unwrap();
        assert_eq!(cloud.len(), 8);
        assert!(mu.atoms().iter().all(|a| a.1 == 0.125));
        let (_, mu) = sample_measure(&space, &Generator::Bernoulli { p: 1.0 }, 8, 0).unwrap();
        assert_eq!(mu.atoms(), &[(0, 1.0)]);
        let (_, mu) = sample_measure(&space, &Generator::Bernoulli { p: 0.25 }, 8, 0).unwrap();
        // word 011 has one zero and two ones
        assert!((mu.atoms()[3].1 - 0.25 * 0.75 * 0.75).abs() < 1e-15);
        let bad = SpaceModel::SymbolSpace { alphabet: 3, length: 3 };
        assert!(sample_measure(&bad, &Generator::Bernoulli { p: 0.5 }, 8, 0).is_err());
    }

    #[test]
    fn cantor_depth_two() {
        let (cloud, mu) = sample_measure(&SpaceModel::UnitInterval, &Generator::Cantor { depth: 2 }, 0, 0).unwrap();
        let xs: Vec<f64> = cloud.points().iter().map(|p| p.real().unwrap()).collect();
        let expect = [0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0];
        for (x, e) in xs.iter().zip(expect) {
            assert!((x - e).abs() < 1e-15);
        }
        assert!(mu.atoms().iter().all(|a| a.1 == 0.25));
    }

    #[test]
    fn uniform_iid_is_seeded() {
        let (a, _) = sample_measure(&SpaceModel::Circle, &Generator::UniformIid, 50, 9).unwrap();
        let (b, _) = sample_measure(&SpaceModel::Circle, &Generator::UniformIid, 50, 9).unwrap();
        let (c, _) = sample_measure(&SpaceModel::Circle, &Generator::UniformIid, 50, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.resolution(), a.max_nearest_neighbor_distance());
    }

    #[test]
    fn csv_round_trip_renormalizes() {
        let text = "c0,weight\n0.5,2\n0.25,1\n0.5,1\n";
        let mu = AtomicMeasure::from_csv(&SpaceModel::Circle, text).unwrap();
        assert_eq!(mu.cloud().len(), 2);
        assert_eq!(mu.atoms(), &[(0, 0.75), (1, 0.25)]);
        let again = AtomicMeasure::from_csv(&SpaceModel::Circle, &mu.to_csv().unwrap()).unwrap();
        assert_eq!(again.atoms(), mu.atoms());
        assert!(AtomicMeasure::from_csv(&SpaceModel::Circle, "c0,weight\n0.5\n").is_err());
    }

    #[test]
    fn restrict_renormalizes() {
        let u = AtomicMeasure::uniform(circle(4));
        let r = u.restrict(&[1, 3]).unwrap();
        assert_eq!(r.atoms(), &[(1, 0.5), (3, 0.5)]);
    }
}
