//! Dense phase-I simplex for `A x = b, x ≥ 0` feasibility.
//!
//! Problems here are tiny (rows = D + 1, columns = a few hundred), so a dense
//! tableau with Bland's rule is plenty.

const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub(crate) struct Feasibility {
    /// Remaining sum of artificial variables at the phase-I optimum.
    pub infeasibility: f64,
    /// A basic solution for the structural variables.
    pub x: Vec<f64>,
}

/// Minimizes the sum of artificials for `rows · x = rhs`, `x ≥ 0`.
///
/// `rows` is row-major with `n` columns each.
pub(crate) fn phase_one(rows: &[Vec<f64>], rhs: &[f64], n: usize) -> Feasibility {
    let m = rows.len();
    let width = n + m + 1;
    let mut t = vec![0.0; m * width];
    for r in 0..m {
        let sign = if rhs[r] < 0.0 { -1.0 } else { 1.0 };
        for c in 0..n {
            t[r * width + c] = sign * rows[r][c];
        }
        t[r * width + n + r] = 1.0;
        t[r * width + n + m] = sign * rhs[r];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // reduced costs of the phase-I objective (sum of artificials)
    let mut cost = vec![0.0; width];
    for r in 0..m {
        for c in 0..n {
            cost[c] -= t[r * width + c];
        }
        cost[n + m] -= t[r * width + n + m];
    }

    let max_iter = 50 * (n + m) + 100;
    for _ in 0..max_iter {
        let Some(enter) = (0..n + m).find(|&c| cost[c] < -PIVOT_TOL) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..m {
            let a = t[r * width + enter];
            if a > PIVOT_TOL {
                let ratio = t[r * width + n + m] / a;
                let better = match leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < lratio - 1e-15 || (ratio <= lratio + 1e-15 && basis[r] < basis[lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // unbounded direction cannot occur for a bounded-below objective
            break;
        };
        let piv = t[pr * width + enter];
        for c in 0..width {
            t[pr * width + c] /= piv;
        }
        for r in 0..m {
            if r != pr {
                let f = t[r * width + enter];
                if f != 0.0 {
                    for c in 0..width {
                        t[r * width + c] -= f * t[pr * width + c];
                    }
                }
            }
        }
        let f = cost[enter];
        for c in 0..width {
            cost[c] -= f * t[pr * width + c];
        }
        basis[pr] = enter;
    }

    let mut x = vec![0.0; n];
    let mut infeasibility = 0.0;
    for (r, &b) in basis.iter().enumerate() {
        let v = t[r * width + n + m];
        if b < n {
            x[b] = v.max(0.0);
        } else {
            infeasibility += v.abs();
        }
    }
    Feasibility { infeasibility, x }
}
