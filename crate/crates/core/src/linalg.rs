//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

/// Relative singular-value cutoff for rank decisions.
pub(crate) const RANK_TOL: f64 = 1e-10;

/// Matrix whose columns are the given vectors (each of length `dim`).
pub(crate) fn columns(cols: &[Vec<f64>], dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, cols.len(), |r, c| cols[c][r])
}

fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Numerical rank of the vectors `rows` (each of length `dim`).
pub(crate) fn rank(rows: &[Vec<f64>], dim: usize) -> usize {
    let sv = singular_values(&columns(rows, dim));
    let top = sv.iter().copied().fold(0.0f64, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > RANK_TOL * top).count()
}

/// `true` if the points are affinely independent.
pub(crate) fn affinely_independent(points: &[&[f64]]) -> bool {
    if points.len() <= 1 {
        return true;
    }
    let dim = points[0].len();
    if points.len() - 1 > dim {
        return false;
    }
    let diffs: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0]).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs, dim) == points.len() - 1
}

/// Least-squares solution of `m x = b` via SVD.
pub(crate) fn lstsq(m: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let svd = m.clone().svd(true, true);
    let top = svd.singular_values.iter().copied().fold(0.0f64, f64::max);
    svd.solve(b, RANK_TOL * top.max(f64::MIN_POSITIVE)).ok()
}

/// A unit vector in the null space of `m`, if the null space is nontrivial.
pub(crate) fn null_vector(m: &DMatrix<f64>) -> Option<DVector<f64>> {
    let (r, c) = m.shape();
    if c == 0 {
        return None;
    }
    // pad to at least square so the SVD exposes the full right singular basis
    let padded = if r < c {
        let mut p = DMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t?;
    let sv = &svd.singular_values;
    let top = sv.iter().copied().fold(0.0f64, f64::max);
    let (idx, smin) = sv
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, s)| if *s < acc.1 { (i, *s) } else { acc });
    if top > 0.0 && smin > RANK_TOL * top {
        return None;
    }
    Some(v_t.row(idx).transpose())
}
