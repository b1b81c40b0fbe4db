//! Compact metric space models, points, and finite point clouds.
//!
//! All balls are open: a point `y` lies in `B(x, r)` iff `d(x, y) < r`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SpaceModel {
    /// `[0, 1]` with `|x - y|`.
    UnitInterval,
    /// `[0, 1)` with unit circumference, `d = min(|x - y|, 1 - |x - y|)`.
    Circle,
    /// Finite product under the max metric.
    Product { factors: Vec<SpaceModel> },
    /// Words of `length` symbols over `0..alphabet`; `d = 2^-j` where `j` is
    /// the first differing position.
    SymbolSpace { alphabet: u8, length: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Real(f64),
    Word(Vec<u8>),
    Tuple(Vec<Point>),
}

impl Point {
    pub fn real(&self) -> Option<f64> {
        match self {
            Point::Real(v) => Some(*v),
            _ => None,
        }
    }

    pub fn word(&self) -> Option<&[u8]> {
        match self {
            Point::Word(w) => Some(w),
            _ => None,
        }
    }
}

impl From<f64> for Point {
    fn from(v: f64) -> Self {
        Point::Real(v)
    }
}

/// One-dimensional models get a sorted-coordinate fast path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Scalar {
    Interval,
    Circle,
}

impl Scalar {
    #[inline]
    pub(crate) fn dist(self, a: f64, b: f64) -> f64 {
        let d = (a - b).abs();
        match self {
            Scalar::Interval => d,
            Scalar::Circle => d.min(1.0 - d),
        }
    }
}

impl SpaceModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceModel::UnitInterval | SpaceModel::Circle => Ok(()),
            SpaceModel::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::Structural("product space needs at least one factor".into()));
                }
                factors.iter().try_for_each(SpaceModel::validate)
            }
            SpaceModel::SymbolSpace { alphabet, length } => {
                if *alphabet < 2 {
                    return Err(Error::Structural(format!("alphabet size {alphabet} < 2")));
                }
                if *length == 0 {
                    return Err(Error::Structural("symbol words need length >= 1".into()));
                }
                Ok(())
            }
        }
    }

    pub(crate) fn scalar(&self) -> Option<Scalar> {
        match self {
            SpaceModel::UnitInterval => Some(Scalar::Interval),
            SpaceModel::Circle => Some(Scalar::Circle),
            _ => None,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (SpaceModel::UnitInterval, Point::Real(v)) => (0.0..=1.0).contains(v),
            (SpaceModel::Circle, Point::Real(v)) => (0.0..1.0).contains(v),
            (SpaceModel::Product { factors }, Point::Tuple(cs)) => {
                factors.len() == cs.len() && factors.iter().zip(cs).all(|(s, c)| s.contains(c))
            }
            (SpaceModel::SymbolSpace { alphabet, length }, Point::Word(w)) => {
                w.len() == *length && w.iter().all(|s| s < alphabet)
            }
            _ => false,
        }
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::Structural(format!("point {p:?} is not in {self:?}")))
        }
    }

    /// Distance between two points already known to lie in the space.
    pub(crate) fn dist(&self, x: &Point, y: &Point) -> f64 {
        match (self, x, y) {
            (SpaceModel::UnitInterval, Point::Real(a), Point::Real(b)) => Scalar::Interval.dist(*a, *b),
            (SpaceModel::Circle, Point::Real(a), Point::Real(b)) => Scalar::Circle.dist(*a, *b),
            (SpaceModel::Product { factors }, Point::Tuple(a), Point::Tuple(b)) => factors
                .iter()
                .zip(a.iter().zip(b))
                .map(|(s, (p, q))| s.dist(p, q))
                .fold(0.0, f64::max),
            (SpaceModel::SymbolSpace { .. }, Point::Word(a), Point::Word(b)) => {
                match a.iter().zip(b).position(|(p, q)| p != q) {
                    Some(j) => 0.5f64.powi(j as i32),
                    None => 0.0,
                }
            }
            _ => panic!("point shapes do not match {self:?}"),
        }
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.dist(x, y))
    }

    /// Number of real coordinates used to write a point of this space.
    pub fn coordinate_count(&self) -> usize {
        match self {
            SpaceModel::UnitInterval | SpaceModel::Circle => 1,
            SpaceModel::Product { factors } => factors.iter().map(SpaceModel::coordinate_count).sum(),
            SpaceModel::SymbolSpace { length, .. } => *length,
        }
    }

    /// Flat coordinate representation (symbols written as integers).
    pub fn coordinates(&self, p: &Point) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.coordinate_count());
        fn push(p: &Point, out: &mut Vec<f64>) {
            match p {
                Point::Real(v) => out.push(*v),
                Point::Word(w) => out.extend(w.iter().map(|&s| f64::from(s))),
                Point::Tuple(cs) => cs.iter().for_each(|c| push(c, out)),
            }
        }
        push(p, &mut out);
        out
    }

    /// Inverse of [`SpaceModel::coordinates`]; circle coordinates are
    /// reduced mod 1.
    pub fn point_from_coordinates(&self, coords: &[f64]) -> Result<Point> {
        if coords.len() != self.coordinate_count() {
            return Err(Error::Structural(format!(
                "expected {} coordinates for {self:?}, got {}",
                self.coordinate_count(),
                coords.len()
            )));
        }
        let p = match self {
            SpaceModel::UnitInterval => Point::Real(coords[0]),
            SpaceModel::Circle => Point::Real(wrap_unit(coords[0])),
            SpaceModel::Product { factors } => {
                let mut at = 0;
                let mut cs = Vec::with_capacity(factors.len());
                for f in factors {
                    let k = f.coordinate_count();
                    cs.push(f.point_from_coordinates(&coords[at..at + k])?);
                    at += k;
                }
                Point::Tuple(cs)
            }
            SpaceModel::SymbolSpace { .. } => {
                let mut w = Vec::with_capacity(coords.len());
                for &c in coords {
                    if c.fract() != 0.0 || !(0.0..256.0).contains(&c) {
                        return Err(Error::Structural(format!("symbol {c} is not a small integer")));
                    }
                    w.push(c as u8);
                }
                Point::Word(w)
            }
        };
        self.check_point(&p)?;
        Ok(p)
    }
}

/// Reduces a real to `[0, 1)`. Results within `1e-15` of 1 are sent to 0.
pub fn wrap_unit(x: f64) -> f64 {
    let r = x - x.floor();
    if !(0.0..1.0 - 1e-15).contains(&r) {
        0.0
    } else {
        r
    }
}

pub fn distance(space: &SpaceModel, x: &Point, y: &Point) -> Result<f64> {
    space.distance(x, y)
}

/// A finite, duplicate-free sample of a space together with its covering
/// radius.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    space: SpaceModel,
    points: Vec<Point>,
    resolution: f64,
}

impl PointCloud {
    /// Builds a cloud with a declared resolution. Duplicates are merged,
    /// keeping the first occurrence.
    pub fn new(space: SpaceModel, points: Vec<Point>, resolution: f64) -> Result<Self> {
        space.validate()?;
        if !(resolution >= 0.0 && resolution.is_finite()) {
            return Err(Error::InvalidArgument(format!("resolution {resolution} must be finite and >= 0")));
        }
        if points.is_empty() {
            return Err(Error::InvalidArgument("a cloud needs at least one point".into()));
        }
        for p in &points {
            space.check_point(p)?;
        }
        let points = dedup(&space, points);
        Ok(PointCloud { space, points, resolution })
    }

    /// Builds a cloud whose resolution is estimated as the largest
    /// nearest-neighbour distance.
    pub fn sampled(space: SpaceModel, points: Vec<Point>) -> Result<Self> {
        let mut cloud = PointCloud::new(space, points, 0.0)?;
        cloud.resolution = cloud.max_nearest_neighbor_distance();
        Ok(cloud)
    }

    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// The resolution, or half the smallest positive pairwise distance when
    /// the declared resolution is 0 (exhaustive finite models).
    pub fn effective_resolution(&self) -> f64 {
        if self.resolution > 0.0 {
            self.resolution
        } else {
            0.5 * self.min_positive_distance().unwrap_or(0.0)
        }
    }

    pub(crate) fn dist(&self, i: usize, j: usize) -> f64 {
        self.space.dist(&self.points[i], &self.points[j])
    }

    pub(crate) fn scalar_coords(&self) -> Option<(Scalar, Vec<f64>)> {
        let s = self.space.scalar()?;
        Some((s, self.points.iter().map(|p| p.real().expect("scalar point")).collect()))
    }

    pub fn max_nearest_neighbor_distance(&self) -> f64 {
        if self.len() < 2 {
            return 0.0;
        }
        match self.scalar_coords() {
            Some((s, coords)) => {
                let sorted = sorted_coords(&coords);
                let n = sorted.len();
                (0..n)
                    .map(|k| {
                        let mut best = f64::INFINITY;
                        if k > 0 {
                            best = best.min(s.dist(sorted[k], sorted[k - 1]));
                        }
                        if k + 1 < n {
                            best = best.min(s.dist(sorted[k], sorted[k + 1]));
                        }
                        if s == Scalar::Circle {
                            best = best.min(s.dist(sorted[k], sorted[(k + n - 1) % n]));
                            best = best.min(s.dist(sorted[k], sorted[(k + 1) % n]));
                        }
                        best
                    })
                    .fold(0.0, f64::max)
            }
            None => (0..self.len())
                .map(|i| {
                    (0..self.len())
                        .filter(|&j| j != i)
                        .map(|j| self.dist(i, j))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max),
        }
    }

    pub fn min_positive_distance(&self) -> Option<f64> {
        if self.len() < 2 {
            return None;
        }
        let m = match self.scalar_coords() {
            Some((s, coords)) => {
                let sorted = sorted_coords(&coords);
                let n = sorted.len();
                let mut best = f64::INFINITY;
                for k in 0..n {
                    let next = if k + 1 < n {
                        k + 1
                    } else if s == Scalar::Circle {
                        0
                    } else {
                        continue;
                    };
                    best = best.min(s.dist(sorted[k], sorted[next]));
                }
                best
            }
            None => {
                let mut best = f64::INFINITY;
                for i in 0..self.len() {
                    for j in i + 1..self.len() {
                        best = best.min(self.dist(i, j));
                    }
                }
                best
            }
        };
        m.is_finite().then_some(m)
    }

    /// Index of the cloud point nearest to `p`, if within `tol`.
    pub fn index_of(&self, p: &Point, tol: f64) -> Option<usize> {
        if !self.space.contains(p) {
            return None;
        }
        let index = NeighborIndex::new(self, None);
        let mut best: Option<(f64, usize)> = None;
        index.for_each_within(p, tol, false, |i, d| {
            if best.is_none_or(|(bd, bi)| d < bd || (d == bd && i < bi)) {
                best = Some((d, i));
            }
        });
        best.map(|(_, i)| i)
    }
}

fn sorted_coords(coords: &[f64]) -> Vec<f64> {
    let mut v = coords.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn dedup(space: &SpaceModel, points: Vec<Point>) -> Vec<Point> {
    match space {
        SpaceModel::UnitInterval | SpaceModel::Circle => {
            let mut seen = HashSet::new();
            // -0.0 and 0.0 are the same point.
            points.into_iter().filter(|p| seen.insert((p.real().unwrap() + 0.0).to_bits())).collect()
        }
        SpaceModel::SymbolSpace { .. } => {
            let mut seen = HashSet::new();
            points.into_iter().filter(|p| seen.insert(p.word().unwrap().to_vec())).collect()
        }
        SpaceModel::Product { .. } => {
            let mut kept: Vec<Point> = Vec::with_capacity(points.len());
            for p in points {
                if !kept.iter().any(|q| space.dist(q, &p) == 0.0) {
                    kept.push(p);
                }
            }
            kept
        }
    }
}

/// Ball queries over a subset of a cloud's points.
pub struct NeighborIndex<'a> {
    cloud: &'a PointCloud,
    kind: IndexKind,
}

enum IndexKind {
    Sorted { scalar: Scalar, coords: Vec<f64>, members: Vec<usize> },
    Linear { members: Vec<usize> },
}

impl<'a> NeighborIndex<'a> {
    /// Indexes `subset` (all points when `None`).
    pub fn new(cloud: &'a PointCloud, subset: Option<&[usize]>) -> Self {
        let members: Vec<usize> = match subset {
            Some(s) => s.to_vec(),
            None => (0..cloud.len()).collect(),
        };
        let kind = match cloud.space.scalar() {
            Some(scalar) => {
                let mut pairs: Vec<(f64, usize)> =
                    members.iter().map(|&i| (cloud.points[i].real().unwrap(), i)).collect();
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                IndexKind::Sorted {
                    scalar,
                    coords: pairs.iter().map(|p| p.0).collect(),
                    members: pairs.iter().map(|p| p.1).collect(),
                }
            }
            None => IndexKind::Linear { members },
        };
        NeighborIndex { cloud, kind }
    }

    /// Calls `f(index, distance)` for every indexed point within `radius`
    /// of `center` (strictly when `strict`). Each point is visited once.
    pub fn for_each_within(&self, center: &Point, radius: f64, strict: bool, mut f: impl FnMut(usize, f64)) {
        let inside = |d: f64| if strict { d < radius } else { d <= radius };
        match &self.kind {
            IndexKind::Linear { members } => {
                for &i in members {
                    let d = self.cloud.space.dist(center, &self.cloud.points[i]);
                    if inside(d) {
                        f(i, d);
                    }
                }
            }
            IndexKind::Sorted { scalar, coords, members } => {
                let c = center.real().expect("scalar center");
                let n = coords.len();
                let slack = 1e-12;
                let lo = c - radius - slack;
                let hi = c + radius + slack;
                let pos = |v: f64| coords.partition_point(|&x| x < v);
                let mut ranges: Vec<(usize, usize)> = Vec::with_capacity(3);
                if *scalar == Scalar::Circle && radius >= 0.5 - slack {
                    ranges.push((0, n));
                } else {
                    ranges.push((pos(lo), coords.partition_point(|&x| x <= hi)));
                    if *scalar == Scalar::Circle {
                        if lo < 0.0 {
                            ranges.push((pos(lo + 1.0), n));
                        }
                        if hi >= 1.0 {
                            ranges.push((0, coords.partition_point(|&x| x <= hi - 1.0)));
                        }
                    }
                }
                ranges.sort_unstable();
                let mut next = 0;
                for (a, b) in ranges {
                    let start = a.max(next);
                    for k in start..b {
                        let d = scalar.dist(c, coords[k]);
                        if inside(d) {
                            f(members[k], d);
                        }
                    }
                    next = next.max(b);
                }
            }
        }
    }
}

/// All ordered pairs `(i, j)`, `i != j`, with `0 < d < epsilon`, sorted
/// lexicographically.
pub fn pairs_within(cloud: &PointCloud, epsilon: f64) -> Vec<(usize, usize, f64)> {
    let index = NeighborIndex::new(cloud, None);
    let mut out = Vec::new();
    for i in 0..cloud.len() {
        let start = out.len();
        index.for_each_within(&cloud.points[i], epsilon, true, |j, d| {
            if j != i && d > 0.0 {
                out.push((i, j, d));
            }
        });
        out[start..].sort_by_key(|p| p.1);
    }
    out
}

/// All `m^L` words in lexicographic order.
pub fn enumerate_words(alphabet: u8, length: usize) -> Vec<Vec<u8>> {
    let count = (alphabet as usize).pow(length as u32);
    (0..count)
        .map(|mut k| {
            let mut w = vec![0u8; length];
            for pos in (0..length).rev() {
                w[pos] = (k % alphabet as usize) as u8;
                k /= alphabet as usize;
            }
            w
        })
        .collect()
}

/// Deterministic equispaced sample.
pub fn grid_cloud(space: &SpaceModel, n: usize) -> Result<PointCloud> {
    space.validate()?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("grid needs n >= 2, got {n}")));
    }
    match space {
        SpaceModel::UnitInterval => {
            let h = 1.0 / (n - 1) as f64;
            let pts = (0..n).map(|k| Point::Real(if k == n - 1 { 1.0 } else { k as f64 * h })).collect();
            PointCloud::new(space.clone(), pts, 0.5 * h)
        }
        SpaceModel::Circle => {
            let pts = (0..n).map(|k| Point::Real(k as f64 / n as f64)).collect();
            PointCloud::new(space.clone(), pts, 0.5 / n as f64)
        }
        SpaceModel::SymbolSpace { alphabet, length } => {
            let total = (*alphabet as f64).powi(*length as i32);
            if total > 1e7 {
                return Err(Error::Structural(format!("{alphabet}^{length} words is too many to enumerate")));
            }
            if (n as f64) < total {
                return Err(Error::Structural(format!(
                    "symbol grids enumerate all {total} words; n = {n} is too small"
                )));
            }
            let pts = enumerate_words(*alphabet, *length).into_iter().map(Point::Word).collect();
            PointCloud::new(space.clone(), pts, 0.0)
        }
        SpaceModel::Product { .. } => Err(Error::Structural("product spaces have no grid generator".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> Point {
        Point::Word(s.bytes().map(|b| b - b'0').collect())
    }

    #[test]
    fn distance_examples() {
        let c = SpaceModel::Circle;
        assert!((c.distance(&0.1.into(), &0.9.into()).unwrap() - 0.2).abs() < 1e-15);
        let i = SpaceModel::UnitInterval;
        assert!((i.distance(&0.2.into(), &0.5.into()).unwrap() - 0.3).abs() < 1e-15);
        let s = SpaceModel::SymbolSpace { alphabet: 2, length: 5 };
        assert_eq!(s.distance(&word("01011"), &word("01000")).unwrap(), 0.125);
        assert_eq!(s.distance(&word("01011"), &word("01111")).unwrap(), 0.25);
        assert_eq!(s.distance(&word("01011"), &word("01011")).unwrap(), 0.0);
    }

    #[test]
    fn distance_rejects_mismatched_points() {
        let s = SpaceModel::SymbolSpace { alphabet: 2, length: 5 };
        assert!(matches!(s.distance(&word("010"), &word("01000")), Err(Error::Structural(_))));
        assert!(SpaceModel::Circle.distance(&0.1.into(), &word("0")).is_err());
        assert!(SpaceModel::Circle.distance(&1.0.into(), &0.5.into()).is_err());
        let p = SpaceModel::Product { factors: vec![SpaceModel::Circle, SpaceModel::UnitInterval] };
        assert!(p.distance(&Point::Tuple(vec![0.1.into()]), &Point::Tuple(vec![0.1.into()])).is_err());
    }

    #[test]
    fn product_is_max_metric() {
        let p = SpaceModel::Product { factors: vec![SpaceModel::Circle, SpaceModel::UnitInterval] };
        let x = Point::Tuple(vec![0.05.into(), 0.2.into()]);
        let y = Point::Tuple(vec![0.95.into(), 0.5.into()]);
        assert!((p.distance(&x, &y).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn grid_examples() {
        let g = grid_cloud(&SpaceModel::UnitInterval, 3).unwrap();
        assert_eq!(g.points(), &[0.0.into(), 0.5.into(), 1.0.into()]);
        assert_eq!(g.resolution(), 0.25);
        let g = grid_cloud(&SpaceModel::Circle, 4).unwrap();
        assert_eq!(g.points(), &[0.0.into(), 0.25.into(), 0.5.into(), 0.75.into()]);
        assert_eq!(g.resolution(), 0.125);
        let g = grid_cloud(&SpaceModel::SymbolSpace { alphabet: 2, length: 3 }, 8).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g.resolution(), 0.0);
        assert_eq!(g.point(5), &word("101"));
        assert!(grid_cloud(&SpaceModel::SymbolSpace { alphabet: 2, length: 3 }, 7).is_err());
        assert!(grid_cloud(&SpaceModel::Product { factors: vec![SpaceModel::Circle] }, 4).is_err());
    }

    #[test]
    fn interval_grid_resolution_matches_covering_radius() {
        for n in [2usize, 5, 101] {
            let g = grid_cloud(&SpaceModel::UnitInterval, n).unwrap();
            // worst point of [0,1] is a cell midpoint
            let probe = 0.5 / (n - 1) as f64;
            let nearest = g.points().iter().map(|p| (p.real().unwrap() - probe).abs()).fold(1.0, f64::min);
            assert!((nearest - g.resolution()).abs() < 1e-15);
        }
    }

    #[test]
    fn duplicates_are_merged() {
        let c = PointCloud::new(SpaceModel::Circle, vec![0.1.into(), 0.2.into(), 0.1.into()], 0.1).unwrap();
        assert_eq!(c.len(), 2);
        let c = PointCloud::sampled(SpaceModel::UnitInterval, vec![0.0.into(), 0.25.into(), 1.0.into()]).unwrap();
        assert_eq!(c.resolution(), 0.75);
    }

    #[test]
    fn pairs_within_examples() {
        let g = grid_cloud(&SpaceModel::UnitInterval, 3).unwrap();
        let pairs = pairs_within(&g, 0.6);
        let idx: Vec<_> = pairs.iter().map(|p| (p.0, p.1)).collect();
        assert_eq!(idx, vec![(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert!(pairs_within(&g, 0.5).is_empty());
    }

    #[test]
    fn pairs_within_matches_double_loop() {
        let g = grid_cloud(&SpaceModel::UnitInterval, 101).unwrap();
        let mut brute = Vec::new();
        for i in 0..g.len() {
            for j in 0..g.len() {
                let d = (g.point(i).real().unwrap() - g.point(j).real().unwrap()).abs();
                if i != j && d > 0.0 && d < 0.015 {
                    brute.push((i, j));
                }
            }
        }
        let fast: Vec<_> = pairs_within(&g, 0.015).iter().map(|p| (p.0, p.1)).collect();
        assert_eq!(brute.len(), 200);
        assert_eq!(fast, brute);
    }

    #[test]
    fn circle_queries_wrap() {
        let g = grid_cloud(&SpaceModel::Circle, 16).unwrap();
        let index = NeighborIndex::new(&g, None);
        let mut hits = Vec::new();
        index.for_each_within(&0.0.into(), 0.13, true, |i, _| hits.push(i));
        hits.sort();
        assert_eq!(hits, vec![0, 1, 2, 14, 15]);
        let mut all = Vec::new();
        index.for_each_within(&0.3.into(), 0.6, true, |i, _| all.push(i));
        assert_eq!(all.len(), 16);
    }

    #[test]
    fn index_of_snaps() {
        let g = grid_cloud(&SpaceModel::Circle, 8).unwrap();
        assert_eq!(g.index_of(&0.375.into(), 1e-9), Some(3));
        assert_eq!(g.index_of(&(0.375 + 1e-12).into(), 1e-9), Some(3));
        assert_eq!(g.index_of(&0.3.into(), 1e-9), None);
    }

    #[test]
    fn wrap_unit_fixes_near_one() {
        assert_eq!(wrap_unit(1.0 - 1e-16), 0.0);
        assert_eq!(wrap_unit(-0.25), 0.75);
        assert_eq!(wrap_unit(2.5), 0.5);
    }
}
