//! Points, point sets, unit vectors and angles.
//!
//! Everything downstream is built on [`angle_at`] and [`max_angle`]: the angle
//! bound of a finite set is the largest angle `∠xyz` over all ordered triples,
//! with `y` the vertex.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points closer than this are considered coincident.
pub const DISTINCT_TOL: f64 = 1e-9;

/// Allowed deviation of a [`UnitVector`] norm from 1.
pub const UNIT_TOL: f64 = 1e-12;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Cosine of the angle between `a` and `b`, clamped to `[-1, 1]`.
///
/// `na` and `nb` are the precomputed norms. Every angle in the crate goes
/// through this expression so that scans and single evaluations agree bit for
/// bit.
#[inline]
pub(crate) fn clamped_cos(a: &[f64], b: &[f64], na: f64, nb: f64) -> f64 {
    (dot(a, b) / (na * nb)).clamp(-1.0, 1.0)
}

/// An angle in radians, restricted to `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    pub const RIGHT: Angle = Angle(PI / 2.0);
    pub const STRAIGHT: Angle = Angle(PI);

    pub fn new(radians: f64) -> Result<Self> {
        if (0.0..=PI).contains(&radians) {
            Ok(Angle(radians))
        } else {
            Err(Error::OutOfRange(format!("angle {radians} rad not in [0, π]")))
        }
    }

    pub fn from_degrees(degrees: f64) -> Result<Self> {
        Self::new(degrees.to_radians())
    }

    /// `arccos` of a cosine clamped to `[-1, 1]`.
    pub fn from_cos(c: f64) -> Self {
        Angle(c.clamp(-1.0, 1.0).acos())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }
}

impl TryFrom<f64> for Angle {
    type Error = Error;
    fn try_from(r: f64) -> Result<Self> {
        Angle::new(r)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad", self.0)
    }
}

/// A point with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPointSet("point has no coordinates".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPointSet("non-finite coordinate".into()));
        }
        Ok(Point(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0.0; dim.max(1)])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Vec<f64> {
        p.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A vector of Euclidean norm 1 (within [`UNIT_TOL`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Accepts `coords` only if it already has unit norm.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let n = norm(&coords);
        if coords.is_empty() || !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit(n));
        }
        Ok(UnitVector(coords))
    }

    /// Rescales `v` to unit length.
    pub fn normalize(v: &[f64]) -> Result<Self> {
        let n = norm(v);
        if v.is_empty() || !n.is_finite() || n <= DISTINCT_TOL {
            return Err(Error::DegenerateTriple);
        }
        Ok(UnitVector(v.iter().map(|x| x / n).collect()))
    }

    /// Coordinate axis `e_i` in `R^dim`.
    pub fn axis(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        UnitVector(v)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn neg(&self) -> UnitVector {
        UnitVector(self.0.iter().map(|x| -x).collect())
    }

    /// Representative of the undirected line through `self` whose first
    /// nonzero coordinate is positive.
    pub fn canonical_line(&self) -> UnitVector {
        match self.0.iter().find(|x| **x != 0.0) {
            Some(x) if *x < 0.0 => self.neg(),
            _ => self.clone(),
        }
    }
}

impl TryFrom<Vec<f64>> for UnitVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        UnitVector::new(v)
    }
}

impl From<UnitVector> for Vec<f64> {
    fn from(u: UnitVector) -> Vec<f64> {
        u.0
    }
}

impl AsRef<[f64]> for UnitVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Deserialize)]
struct RawPointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

/// A finite set of pairwise distinct points sharing one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPointSet")]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
}

impl TryFrom<RawPointSet> for PointSet {
    type Error = Error;
    fn try_from(raw: RawPointSet) -> Result<Self> {
        PointSet::from_coords(raw.dim, raw.points)
    }
}

impl PointSet {
    /// Validates dimension, finiteness and pairwise distinctness.
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPointSet("dimension must be positive".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::InvalidPointSet(format!(
                    "point {i} has dimension {} (expected {dim})",
                    p.dim()
                )));
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if dist(points[i].coords(), points[j].coords()) <= DISTINCT_TOL {
                    return Err(Error::InvalidPointSet(format!(
                        "points {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(PointSet { dim, points })
    }

    pub fn from_coords(dim: usize, coords: Vec<Vec<f64>>) -> Result<Self> {
        let points = coords
            .into_iter()
            .map(Point::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    /// The set with point `i` removed.
    pub fn without(&self, i: usize) -> PointSet {
        let mut points = self.points.clone();
        points.remove(i);
        PointSet {
            dim: self.dim,
            points,
        }
    }

    /// The set with `p` appended, if it stays valid.
    pub fn with(&self, p: Point) -> Result<PointSet> {
        let mut points = self.points.clone();
        points.push(p);
        PointSet::new(self.dim, points)
    }

    /// Affine rank of the set (dimension of its affine hull).
    pub fn affine_rank(&self) -> usize {
        if self.points.len() < 2 {
            return 0;
        }
        let base = self.points[0].coords();
        let rows: Vec<Vec<f64>> = self.points[1..]
            .iter()
            .map(|p| sub(p.coords(), base))
            .collect();
        crate::linalg::rank(&rows, self.dim)
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// The angle `∠xyz` at vertex `y`.
pub fn angle_at(x: &Point, y: &Point, z: &Point) -> Result<Angle> {
    let a = sub(x.coords(), y.coords());
    let b = sub(z.coords(), y.coords());
    let (na, nb) = (norm(&a), norm(&b));
    if na <= DISTINCT_TOL || nb <= DISTINCT_TOL {
        return Err(Error::DegenerateTriple);
    }
    Ok(Angle::from_cos(clamped_cos(&a, &b, na, nb)))
}

/// Largest angle over all triples together with the triple `(x, y, z)`
/// attaining it (`y` the vertex). `None` for sets with fewer than 3 points.
pub fn max_angle_triple(a: &PointSet) -> Option<(usize, usize, usize, Angle)> {
    let n = a.len();
    if n < 3 {
        return None;
    }
    let mut best: Option<(usize, usize, usize, f64)> = None;
    for y in 0..n {
        let yc = a.point(y).coords();
        let rays: Vec<(usize, Vec<f64>, f64)> = (0..n)
            .filter(|&i| i != y)
            .map(|i| {
                let v = sub(a.point(i).coords(), yc);
                let nv = norm(&v);
                (i, v, nv)
            })
            .collect();
        for (k, (i, u, nu)) in rays.iter().enumerate() {
            for (j, w, nw) in &rays[k + 1..] {
                let c = clamped_cos(u, w, *nu, *nw);
                if best.is_none_or(|b| c < b.3) {
                    best = Some((*i, y, *j, c));
                }
            }
        }
    }
    best.map(|(i, y, j, c)| (i, y, j, Angle::from_cos(c)))
}

/// The angle bound `∠A`: max of [`angle_at`] over all triples, 0 when `|A| ≤ 2`.
pub fn max_angle(a: &PointSet) -> Angle {
    max_angle_triple(a).map_or(Angle::ZERO, |t| t.3)
}

/// Largest pairwise geodesic distance `arccos(u·v)` on the unit sphere.
pub fn geodesic_diameter(h: &[UnitVector]) -> Angle {
    let mut min_dot = 1.0f64;
    for (k, u) in h.iter().enumerate() {
        for v in &h[k + 1..] {
            min_dot = min_dot.min(u.dot(v));
        }
    }
    Angle::from_cos(min_dot)
}

/// Unit directions from `apex` to every point of `a`, order preserved.
pub fn rays_from(apex: &Point, a: &PointSet) -> Result<Vec<UnitVector>> {
    a.iter()
        .map(|p| UnitVector::normalize(&sub(p.coords(), apex.coords())))
        .collect()
}
