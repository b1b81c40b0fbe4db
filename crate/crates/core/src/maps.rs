//! Map models `T: X -> X`, orbits and Bowen distances.

use serde::{Deserialize, Serialize};

use crate::spaces::{wrap_unit, Point, PointCloud, Scalar, SpaceModel};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftMode {
    /// Drop the first symbol and append symbol 0.
    Pad,
    /// Rotate the word left by one symbol.
    Cyclic,
}

/// Continuous piecewise-linear self-map of `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    /// Knots `0 = b_0 < b_1 < ... < b_k = 1`.
    pub breakpoints: Vec<f64>,
    /// Slope on each of the `k` pieces.
    pub slopes: Vec<f64>,
    /// Value at 0.
    pub start: f64,
}

impl PiecewiseLinear {
    fn knot_values(&self) -> Vec<f64> {
        let mut vals = Vec::with_capacity(self.breakpoints.len());
        let mut v = self.start;
        vals.push(v);
        for (w, s) in self.breakpoints.windows(2).zip(&self.slopes) {
            v += s * (w[1] - w[0]);
            vals.push(v);
        }
        vals
    }

    fn validate(&self) -> Result<()> {
        let b = &self.breakpoints;
        if b.len() < 2 || self.slopes.len() != b.len() - 1 {
            return Err(Error::Structural("piecewise-linear map needs k+1 breakpoints and k slopes".into()));
        }
        if b[0] != 0.0 || *b.last().unwrap() != 1.0 || b.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Structural("breakpoints must increase from 0 to 1".into()));
        }
        if self.knot_values().iter().any(|v| !(-1e-12..=1.0 + 1e-12).contains(v)) {
            return Err(Error::Structural("piecewise-linear map leaves [0, 1]".into()));
        }
        Ok(())
    }

    fn eval(&self, x: f64) -> f64 {
        let seg = self.breakpoints.partition_point(|&b| b <= x).clamp(1, self.slopes.len()) - 1;
        let base = self.knot_values()[seg];
        (base + self.slopes[seg] * (x - self.breakpoints[seg])).clamp(0.0, 1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MapModel {
    /// `x -> m x mod 1` on the circle.
    TimesM(u32),
    /// `x -> x + alpha mod 1` on the circle.
    Rotation(f64),
    /// `x -> s x` on `[0, 1/2]`, `s (1 - x)` on `(1/2, 1]`; requires `0 < s <= 2`.
    Tent(f64),
    PiecewiseLinear(PiecewiseLinear),
    /// `x -> c x` on `[0, 1]`, `0 < c < 1`.
    Contraction(f64),
    ConstantMap(Point),
    Shift(ShiftMode),
    /// Explicit finite table; points outside the table are an error.
    LookupTable(Vec<(Point, Point)>),
}

impl MapModel {
    pub fn name(&self) -> &'static str {
        match self {
            MapModel::TimesM(_) => "times_m",
            MapModel::Rotation(_) => "rotation",
            MapModel::Tent(_) => "tent",
            MapModel::PiecewiseLinear(_) => "piecewise_linear",
            MapModel::Contraction(_) => "contraction",
            MapModel::ConstantMap(_) => "constant",
            MapModel::Shift(_) => "shift",
            MapModel::LookupTable(_) => "lookup_table",
        }
    }

    /// Checks parameters and that the map acts on `space`.
    pub fn validate(&self, space: &SpaceModel) -> Result<()> {
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Structural(format!("{} requires {what}, got {space:?}", self.name())))
            }
        };
        match self {
            MapModel::TimesM(m) => {
                if *m < 2 {
                    return Err(Error::Structural(format!("times_m needs m >= 2, got {m}")));
                }
                need(*space == SpaceModel::Circle, "the circle")
            }
            MapModel::Rotation(a) => {
                if !(0.0..1.0).contains(a) {
                    return Err(Error::Structural(format!("rotation angle {a} not in [0, 1)")));
                }
                need(*space == SpaceModel::Circle, "the circle")
            }
            MapModel::Tent(s) => {
                if !(*s > 0.0 && *s <= 2.0) {
                    return Err(Error::Structural(format!("tent slope {s} must lie in (0, 2]")));
                }
                need(*space == SpaceModel::UnitInterval, "the unit interval")
            }
            MapModel::PiecewiseLinear(p) => {
                p.validate()?;
                need(*space == SpaceModel::UnitInterval, "the unit interval")
            }
            MapModel::Contraction(c) => {
                if !(*c > 0.0 && *c < 1.0) {
                    return Err(Error::Structural(format!("contraction factor {c} must lie in (0, 1)")));
                }
                need(*space == SpaceModel::UnitInterval, "the unit interval")
            }
            MapModel::ConstantMap(p) => space.check_point(p),
            MapModel::Shift(_) => need(matches!(space, SpaceModel::SymbolSpace { .. }), "a symbol space"),
            MapModel::LookupTable(table) => {
                for (a, b) in table {
                    space.check_point(a)?;
                    space.check_point(b)?;
                }
                Ok(())
            }
        }
    }

    /// True for the models known to be continuous.
    pub fn is_continuous(&self) -> bool {
        !matches!(self, MapModel::LookupTable(_))
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        let real = |x: &Point| {
            x.real().ok_or_else(|| Error::Structural(format!("{} acts on real points, got {x:?}", self.name())))
        };
        Ok(match self {
            MapModel::TimesM(m) => Point::Real(wrap_unit(f64::from(*m) * real(x)?)),
            MapModel::Rotation(a) => Point::Real(wrap_unit(real(x)? + a)),
            MapModel::Tent(s) => {
                let v = real(x)?;
                let y = if v <= 0.5 { s * v } else { s * (1.0 - v) };
                Point::Real(y.clamp(0.0, 1.0))
            }
            MapModel::PiecewiseLinear(p) => Point::Real(p.eval(real(x)?)),
            MapModel::Contraction(c) => Point::Real(c * real(x)?),
            MapModel::ConstantMap(p) => p.clone(),
            MapModel::Shift(mode) => {
                let w = x
                    .word()
                    .ok_or_else(|| Error::Structural(format!("shift acts on words, got {x:?}")))?;
                let mut out = Vec::with_capacity(w.len());
                out.extend_from_slice(&w[1..]);
                out.push(match mode {
                    ShiftMode::Pad => 0,
                    ShiftMode::Cyclic => w[0],
                });
                Point::Word(out)
            }
            MapModel::LookupTable(table) => table
                .iter()
                .find(|(a, _)| a == x)
                .map(|(_, b)| b.clone())
                .ok_or_else(|| Error::Structural(format!("lookup table has no entry for {x:?}")))?,
        })
    }

    /// Affine pieces `(lo, hi, slope, intercept)` of the lift of the map to the
    /// real line, for the models that are piecewise affine.
    pub(crate) fn affine_pieces(&self) -> Option<Vec<(f64, f64, f64, f64)>> {
        let all = (f64::NEG_INFINITY, f64::INFINITY);
        match self {
            MapModel::TimesM(m) => Some(vec![(all.0, all.1, f64::from(*m), 0.0)]),
            MapModel::Rotation(a) => Some(vec![(all.0, all.1, 1.0, *a)]),
            MapModel::Tent(s) => Some(vec![(0.0, 0.5, *s, 0.0), (0.5, 1.0, -s, *s)]),
            MapModel::Contraction(c) => Some(vec![(0.0, 1.0, *c, 0.0)]),
            MapModel::PiecewiseLinear(p) => {
                let vals = p.knot_values();
                Some(
                    p.breakpoints
                        .windows(2)
                        .zip(&p.slopes)
                        .zip(&vals)
                        .map(|((w, &s), &v)| (w[0], w[1], s, v - s * w[0]))
                        .collect(),
                )
            }
            _ => None,
        }
    }

    /// `[x, T x, ..., T^{n-1} x]`.
    pub fn orbit(&self, x: &Point, n: usize) -> Result<Vec<Point>> {
        if n == 0 {
            return Err(Error::InvalidArgument("orbit length must be >= 1".into()));
        }
        let mut out = Vec::with_capacity(n);
        out.push(x.clone());
        for _ in 1..n {
            let next = self.apply(out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }
}

/// `max_{0 <= i < n} d(T^i x, T^i y)`.
pub fn bowen_distance(space: &SpaceModel, map: &MapModel, x: &Point, y: &Point, n: usize) -> Result<f64> {
    space.check_point(x)?;
    space.check_point(y)?;
    let ox = map.orbit(x, n)?;
    let oy = map.orbit(y, n)?;
    Ok(ox.iter().zip(&oy).map(|(a, b)| space.dist(a, b)).fold(0.0, f64::max))
}

/// Orbits of every cloud point, stored time-major.
pub(crate) struct OrbitTable<'a> {
    space: &'a SpaceModel,
    len: usize,
    n_points: usize,
    data: OrbitData,
}

enum OrbitData {
    Scalar(Scalar, Vec<f64>),
    General(Vec<Point>),
}

impl<'a> OrbitTable<'a> {
    pub(crate) fn new(map: &MapModel, cloud: &'a PointCloud, len: usize) -> Result<Self> {
        let space = cloud.space();
        map.validate(space)?;
        let n_points = cloud.len();
        let mut current: Vec<Point> = cloud.points().to_vec();
        let mut all: Vec<Point> = Vec::with_capacity(len * n_points);
        for t in 0..len {
            if t > 0 {
                current = current.iter().map(|p| map.apply(p)).collect::<Result<_>>()?;
            }
            all.extend(current.iter().cloned());
        }
        let data = match space.scalar() {
            Some(s) => OrbitData::Scalar(s, all.iter().map(|p| p.real().unwrap()).collect()),
            None => OrbitData::General(all),
        };
        Ok(OrbitTable { space, len, n_points, data })
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub(crate) fn dist_at(&self, t: usize, i: usize, j: usize) -> f64 {
        let (a, b) = (t * self.n_points + i, t * self.n_points + j);
        match &self.data {
            OrbitData::Scalar(s, v) => s.dist(v[a], v[b]),
            OrbitData::General(v) => self.space.dist(&v[a], &v[b]),
        }
    }

    /// True when `d(T^t x_i, T^t x_j) < radius` for every `t < n`.
    #[inline]
    pub(crate) fn within_bowen(&self, i: usize, j: usize, n: usize, radius: f64) -> bool {
        (0..n).all(|t| self.dist_at(t, i, j) < radius)
    }
}
