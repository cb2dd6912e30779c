//! Convex-position decisions and the interior-point angle estimate.
//!
//! If a point `v` sits inside a `k`-simplex spanned by other points, the unit
//! rays from `v` to the simplex vertices contain a pair with dot product at
//! most `−1/k`, i.e. an angle of at least `θ_k = arccos(−1/k)`. Equality holds
//! only for a regular simplex centred at `v`. Consequently a set whose angle
//! bound is below `θ_D` is in convex position, and any non-vertex point comes
//! with an explicit obtuse witness.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{angle_at, dot, norm, rays_from, sub, Angle, Point, PointSet, UnitVector};
use crate::linalg;
use crate::lp;

/// Barycentric coordinates at or above `-BARY_TOL` count as nonnegative.
pub const BARY_TOL: f64 = 1e-10;

/// Phase-I residual below which the hull-membership program is feasible.
pub const FEAS_TOL: f64 = 1e-10;

/// Distance (relative to the simplex scale) tolerated off the affine hull.
const AFFINE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPositionVerdict {
    pub in_convex_position: bool,
    pub witness_index: Option<usize>,
    pub witness_point: Option<Point>,
    pub witness_simplex: Option<Vec<Point>>,
}

/// A triple `(v_i, v, v_j)` whose angle at `v` is large.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObtuseWitness {
    pub vi: Point,
    pub v: Point,
    pub vj: Point,
    pub angle: Angle,
}

/// Minimum of `w_i · w_j` over unordered pairs.
pub fn min_pairwise_dot(w: &[UnitVector]) -> f64 {
    assert!(w.len() >= 2, "min_pairwise_dot needs at least two vectors");
    min_dot_pair(w).2
}

fn min_dot_pair(w: &[UnitVector]) -> (usize, usize, f64) {
    let mut best = (0, 1, f64::INFINITY);
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let d = w[i].dot(&w[j]);
            if d < best.2 {
                best = (i, j, d);
            }
        }
    }
    best
}

/// Barycentric coordinates of `p` with respect to affinely independent
/// `simplex`; `Ok(None)` when `p` is off the affine hull.
pub fn barycentric(p: &[f64], simplex: &[&[f64]]) -> Result<Option<Vec<f64>>> {
    if simplex.is_empty() {
        return Err(Error::DegenerateSimplex);
    }
    if !linalg::affinely_independent(simplex) {
        return Err(Error::DegenerateSimplex);
    }
    let dim = p.len();
    let base = simplex[0];
    let scale = simplex
        .iter()
        .map(|v| linalg_dist(v, p))
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    if simplex.len() == 1 {
        let on = linalg_dist(base, p) <= AFFINE_TOL * scale;
        return Ok(on.then(|| vec![1.0]));
    }
    let cols: Vec<Vec<f64>> = simplex[1..].iter().map(|v| sub(v, base)).collect();
    let m = linalg::columns(&cols, dim);
    let rhs = DVector::from_iterator(dim, p.iter().zip(base).map(|(a, b)| a - b));
    let mu = linalg::lstsq(&m, &rhs).ok_or(Error::DegenerateSimplex)?;
    let residual = (&m * &mu - &rhs).norm();
    if residual > AFFINE_TOL * scale {
        return Ok(None);
    }
    let mut lambda = Vec::with_capacity(simplex.len());
    lambda.push(1.0 - mu.sum());
    lambda.extend(mu.iter().copied());
    Ok(Some(lambda))
}

fn linalg_dist(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

/// Whether the origin lies in the simplex spanned by `v` (in its relative
/// interior when `strict`).
pub fn simplex_contains_origin(v: &[Point], strict: bool) -> Result<bool> {
    let Some(first) = v.first() else {
        return Err(Error::DegenerateSimplex);
    };
    let verts: Vec<&[f64]> = v.iter().map(Point::coords).collect();
    let origin = vec![0.0; first.dim()];
    Ok(match barycentric(&origin, &verts)? {
        None => false,
        Some(l) if strict => l.iter().all(|x| *x > BARY_TOL),
        Some(l) => l.iter().all(|x| *x >= -BARY_TOL),
    })
}

/// Nonnegative weights summing to 1 that reproduce `p` from `points`, if any.
fn hull_weights(p: &[f64], points: &[&[f64]]) -> Option<Vec<f64>> {
    if points.is_empty() {
        return None;
    }
    let dim = p.len();
    let rel: Vec<Vec<f64>> = points.iter().map(|s| sub(s, p)).collect();
    let scale = rel.iter().map(|r| norm(r)).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return None;
    }
    let n = points.len();
    let mut rows: Vec<Vec<f64>> = (0..dim)
        .map(|k| rel.iter().map(|r| r[k] / scale).collect())
        .collect();
    rows.push(vec![1.0; n]);
    let mut rhs = vec![0.0; dim];
    rhs.push(1.0);
    let f = lp::phase_one(&rows, &rhs, n);
    (f.infeasibility <= FEAS_TOL).then_some(f.x)
}

/// Reduces a convex combination to an affinely independent support.
///
/// Returns `(indices, weights)` with every weight above [`BARY_TOL`].
fn reduce_support(points: &[&[f64]], mut weights: Vec<f64>) -> (Vec<usize>, Vec<f64>) {
    let mut support: Vec<usize> = (0..points.len()).filter(|&i| weights[i] > BARY_TOL).collect();
    loop {
        let pts: Vec<&[f64]> = support.iter().map(|&i| points[i]).collect();
        if linalg::affinely_independent(&pts) {
            break;
        }
        let dim = points[0].len();
        let m = DMatrix::from_fn(dim + 1, support.len(), |r, c| {
            if r < dim {
                pts[c][r]
            } else {
                1.0
            }
        });
        let Some(mut mu) = linalg::null_vector(&m) else {
            break;
        };
        if mu.iter().all(|x| *x <= 0.0) {
            mu = -mu;
        }
        let (step, _) = support
            .iter()
            .zip(mu.iter())
            .filter(|(_, m)| **m > 0.0)
            .map(|(&i, m)| (weights[i] / m, i))
            .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
        for (&i, m) in support.iter().zip(mu.iter()) {
            weights[i] -= step * m;
        }
        let before = support.len();
        support.retain(|&i| weights[i] > BARY_TOL);
        if support.len() == before {
            // numerical stall; drop the smallest weight
            let (k, _) = support
                .iter()
                .enumerate()
                .min_by(|a, b| weights[*a.1].total_cmp(&weights[*b.1]))
                .expect("support is nonempty");
            support.remove(k);
        }
    }
    let total: f64 = support.iter().map(|&i| weights[i]).sum();
    let w = support.iter().map(|&i| weights[i] / total).collect();
    (support, w)
}

/// Indices of at most `D + 1` affinely independent points of `s` whose hull
/// contains `p`, with the corresponding barycentric weights.
pub fn caratheodory_indices(p: &Point, s: &PointSet) -> Result<(Vec<usize>, Vec<f64>)> {
    let pts: Vec<&[f64]> = s.iter().map(Point::coords).collect();
    let weights = hull_weights(p.coords(), &pts).ok_or(Error::NotInHull)?;
    let (idx, _) = reduce_support(&pts, weights);
    // recompute weights on the final simplex so they reproduce p exactly
    let simplex: Vec<&[f64]> = idx.iter().map(|&i| pts[i]).collect();
    let lambda = barycentric(p.coords(), &simplex)?.ok_or(Error::NotInHull)?;
    Ok((idx, lambda))
}

/// At most `D + 1` affinely independent points of `s` whose hull contains `p`.
pub fn caratheodory_decompose(p: &Point, s: &PointSet) -> Result<Vec<Point>> {
    let (idx, _) = caratheodory_indices(p, s)?;
    Ok(idx.into_iter().map(|i| s.point(i).clone()).collect())
}

/// Decides whether every point of `a` is a vertex of `conv(a)`.
///
/// Points on the boundary of the hull of the others (edge midpoints, say)
/// count as non-vertices.
pub fn is_convex_position(a: &PointSet) -> ConvexPositionVerdict {
    for i in 0..a.len() {
        let rest = a.without(i);
        if rest.is_empty() {
            continue;
        }
        if let Ok(simplex) = caratheodory_decompose(a.point(i), &rest) {
            return ConvexPositionVerdict {
                in_convex_position: false,
                witness_index: Some(i),
                witness_point: Some(a.point(i).clone()),
                witness_simplex: Some(simplex),
            };
        }
    }
    ConvexPositionVerdict {
        in_convex_position: true,
        witness_index: None,
        witness_point: None,
        witness_simplex: None,
    }
}

/// The pair of simplex vertices making the largest angle at `p`.
///
/// `p` must lie in the simplex. When it sits on a proper face, the face
/// spanned by the vertices with positive barycentric weight is used instead,
/// which only strengthens the guarantee `angle ≥ θ_k`.
pub fn obtuse_witness(p: &Point, simplex: &[Point]) -> Result<ObtuseWitness> {
    let verts: Vec<&[f64]> = simplex.iter().map(Point::coords).collect();
    let lambda = barycentric(p.coords(), &verts)?.ok_or(Error::NotInterior)?;
    if lambda.iter().any(|x| *x < -BARY_TOL) {
        return Err(Error::NotInterior);
    }
    let face: Vec<Point> = simplex
        .iter()
        .zip(&lambda)
        .filter(|(_, l)| **l > BARY_TOL)
        .map(|(v, _)| v.clone())
        .collect();
    if face.len() < 2 {
        return Err(Error::NotInterior);
    }
    let face_set = PointSet::new(p.dim(), face).map_err(|_| Error::DegenerateSimplex)?;
    let rays = rays_from(p, &face_set).map_err(|_| Error::NotInterior)?;
    let (i, j, _) = min_dot_pair(&rays);
    let (vi, vj) = (face_set.point(i).clone(), face_set.point(j).clone());
    let angle = angle_at(&vi, p, &vj)?;
    Ok(ObtuseWitness {
        vi,
        v: p.clone(),
        vj,
        angle,
    })
}

/// Vertices of a regular `d`-simplex centred at the origin with unit
/// circumradius, embedded in `R^d`.
pub fn regular_simplex(d: usize) -> Vec<Vec<f64>> {
    // centred standard basis of R^{d+1}, then an orthonormal basis of the
    // hyperplane sum(x) = 0 via Gram–Schmidt
    let n = d + 1;
    let centred: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| if k == i { 1.0 } else { 0.0 } - 1.0 / n as f64)
                .collect()
        })
        .collect();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    for v in &centred {
        let mut w = v.clone();
        for b in &basis {
            let c = dot(&w, b);
            for (x, y) in w.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
        let nw = norm(&w);
        if nw > 1e-9 {
            basis.push(w.iter().map(|x| x / nw).collect());
        }
        if basis.len() == d {
            break;
        }
    }
    centred
        .iter()
        .map(|v| {
            let coords: Vec<f64> = basis.iter().map(|b| dot(v, b)).collect();
            let r = norm(&coords);
            coords.iter().map(|x| x / r).collect()
        })
        .collect()
}
