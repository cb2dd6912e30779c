//! Simulated annealing for small configurations: estimates of `α_D(n)` and
//! large sets under an angle cap. All results are empirical.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convexity::regular_simplex;
use crate::geometry::{clamped_cos, dot, max_angle, norm, sub, Angle, PointSet};
use crate::rng::{gaussian_vector, stream_rng};

/// Geometric cooling factor per annealing step.
pub const COOLING: f64 = 0.995;

const T0: f64 = 0.1;
const STEP0: f64 = 0.3;
const PROPOSALS: usize = 4;
const RENORMALIZE_EVERY: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub points: PointSet,
    pub achieved_angle: Angle,
    pub iterations: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Always `"empirical"`.
    pub label: String,
}

impl SearchResult {
    fn new(points: PointSet, iterations: usize, seed: u64, restarts: usize) -> Self {
        let achieved_angle = max_angle(&points);
        SearchResult {
            points,
            achieved_angle,
            iterations,
            seed,
            restarts,
            label: "empirical".into(),
        }
    }
}

/// Smallest cosine over all angles of the configuration, i.e. the cosine of
/// its largest angle. Coincident points give `-1`.
fn min_cos(x: &[Vec<f64>]) -> f64 {
    let n = x.len();
    let mut best = 1.0f64;
    for y in 0..n {
        let rays: Vec<(Vec<f64>, f64)> = (0..n)
            .filter(|&i| i != y)
            .map(|i| {
                let v = sub(&x[i], &x[y]);
                let nv = norm(&v);
                (v, nv)
            })
            .collect();
        for (k, (u, nu)) in rays.iter().enumerate() {
            for (w, nw) in &rays[k + 1..] {
                if *nu == 0.0 || *nw == 0.0 {
                    return -1.0;
                }
                best = best.min(clamped_cos(u, w, *nu, *nw));
            }
        }
    }
    best
}

/// Angles of every triple that involves point `i` (as apex or as an end).
fn angles_touching(x: &[Vec<f64>], i: usize, out: &mut Vec<f64>) {
    out.clear();
    let n = x.len();
    let cos_at = |y: usize, a: usize, b: usize| {
        let u = sub(&x[a], &x[y]);
        let w = sub(&x[b], &x[y]);
        let (nu, nw) = (norm(&u), norm(&w));
        if nu == 0.0 || nw == 0.0 {
            PI
        } else {
            clamped_cos(&u, &w, nu, nw).acos()
        }
    };
    for j in 0..n {
        if j == i {
            continue;
        }
        for k in j + 1..n {
            if k == i {
                continue;
            }
            out.push(cos_at(i, j, k));
            out.push(cos_at(j, i, k));
            out.push(cos_at(k, i, j));
        }
    }
}

/// Log-sum-exp of the angles touching the moved point, relative to `reference`.
fn smoothed_score(angles: &[f64], beta: f64, reference: f64) -> f64 {
    angles.iter().map(|a| (beta * (a - reference)).exp()).sum::<f64>().ln()
}

/// Centre at the mean and scale to unit RMS radius; angles are unchanged.
fn renormalize(x: &mut [Vec<f64>]) {
    let n = x.len() as f64;
    let dim = x[0].len();
    let mut mean = vec![0.0; dim];
    for p in x.iter() {
        for (m, v) in mean.iter_mut().zip(p) {
            *m += v / n;
        }
    }
    let mut rms = 0.0;
    for p in x.iter_mut() {
        for (v, m) in p.iter_mut().zip(&mean) {
            *v -= m;
        }
        rms += dot(p, p) / n;
    }
    let s = rms.sqrt();
    if s > 0.0 {
        for p in x.iter_mut() {
            for v in p.iter_mut() {
                *v /= s;
            }
        }
    }
}

/// Anneals `x` to lower its largest angle. Stops early once the largest angle
/// is at most `stop_at`. Returns the best configuration, its minimum cosine
/// and the number of steps taken.
fn anneal(
    mut x: Vec<Vec<f64>>,
    iters: usize,
    rng: &mut ChaCha8Rng,
    stop_at: Option<f64>,
) -> (Vec<Vec<f64>>, f64, usize) {
    let n = x.len();
    let dim = x[0].len();
    renormalize(&mut x);
    let mut cur = min_cos(&x);
    let mut best = (x.clone(), cur);
    let mut temp = T0;
    let mut buf = Vec::new();
    let mut steps = 0;
    while steps < iters {
        if stop_at.is_some_and(|s| best.1.acos() <= s) {
            break;
        }
        steps += 1;
        let beta = (1.0 / temp).clamp(10.0, 1e6);
        let sigma = STEP0 * (temp / T0).sqrt() + 1e-7;
        let i = rng.random_range(0..n);
        let reference = cur.acos();
        let mut chosen: Option<(f64, Vec<f64>)> = None;
        for _ in 0..PROPOSALS {
            let g = gaussian_vector(rng, dim);
            let p: Vec<f64> = x[i].iter().zip(&g).map(|(a, b)| a + sigma * b).collect();
            let old = std::mem::replace(&mut x[i], p);
            angles_touching(&x, i, &mut buf);
            let score = smoothed_score(&buf, beta, reference);
            let p = std::mem::replace(&mut x[i], old);
            if chosen.as_ref().is_none_or(|c| score < c.0) {
                chosen = Some((score, p));
            }
        }
        let (_, p) = chosen.expect("at least one proposal");
        let old = std::mem::replace(&mut x[i], p);
        let next = min_cos(&x);
        // larger cosine = smaller largest angle
        let delta = reference - next.acos();
        if delta >= 0.0 || rng.random::<f64>() < (delta / temp).exp() {
            cur = next;
            if cur > best.1 {
                best = (x.clone(), cur);
            }
        } else {
            x[i] = old;
        }
        temp *= COOLING;
        if steps % RENORMALIZE_EVERY == 0 {
            renormalize(&mut x);
        }
    }
    (best.0, best.1, steps)
}

fn hypercube(dim: usize, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| (0..dim).map(|b| ((k >> b) & 1) as f64).collect())
        .collect()
}

fn cross_polytope(dim: usize, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let mut v = vec![0.0; dim];
            v[k / 2] = if k % 2 == 0 { 1.0 } else { -1.0 };
            v
        })
        .collect()
}

fn polygon(dim: usize, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            let mut v = vec![0.0; dim];
            v[0] = a.cos();
            v[1] = a.sin();
            v
        })
        .collect()
}

/// Structured starting configurations with exactly `n` points, when the
/// structure has at least `n` vertices (a prefix of its vertex list is used).
fn warm_starts(n: usize, dim: usize) -> Vec<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    if n <= dim + 1 {
        let s = regular_simplex(dim);
        out.push(s[..n].to_vec());
    }
    if n <= 2 * dim {
        out.push(cross_polytope(dim, n));
    }
    if dim < usize::BITS as usize && n <= 1usize << dim {
        out.push(hypercube(dim, n));
    }
    out.push(polygon(dim, n));
    out
}

fn random_cloud(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| gaussian_vector(rng, dim)).collect()
}

/// Upper estimate of `α_D(n)`: the smallest largest angle found among `n`
/// points in `R^D` by annealing from warm starts and `restarts` random clouds.
pub fn minimize_max_angle(
    n: usize,
    dim: usize,
    iters: usize,
    restarts: usize,
    seed: u64,
) -> crate::Result<SearchResult> {
    if n < 3 || dim < 2 {
        return Err(crate::Error::OutOfRange("search needs n >= 3 and D >= 2".into()));
    }
    let warm = warm_starts(n, dim);
    let total = warm.len() + restarts;
    let runs: Vec<(Vec<Vec<f64>>, f64, usize)> = (0..total)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r as u64);
            let start = match warm.get(r) {
                Some(w) => w.clone(),
                None => random_cloud(&mut rng, n, dim),
            };
            anneal(start, iters, &mut rng, None)
        })
        .collect();
    let steps: usize = runs.iter().map(|r| r.2).sum();
    let mut best: Option<(Vec<Vec<f64>>, f64)> = None;
    for (x, c, _) in runs {
        // duplicates can appear in degenerate runs; skip them
        if best.as_ref().is_none_or(|b| c > b.1) && PointSet::from_coords(dim, x.clone()).is_ok() {
            best = Some((x, c));
        }
    }
    let (x, _) = best.expect("warm starts are valid point sets");
    Ok(SearchResult::new(PointSet::from_coords(dim, x)?, steps, seed, total))
}

/// Whether adding `p` to `x` keeps every angle at most `theta` (given that
/// `x` alone does). Checks only the new triples.
fn insertion_ok(x: &[Vec<f64>], p: &[f64], theta: f64) -> bool {
    let rays_p: Vec<(Vec<f64>, f64)> = x
        .iter()
        .map(|q| {
            let v = sub(q, p);
            let nv = norm(&v);
            (v, nv)
        })
        .collect();
    if rays_p.iter().any(|r| r.1 < 1e-9) {
        return false;
    }
    for (k, (u, nu)) in rays_p.iter().enumerate() {
        for (w, nw) in &rays_p[k + 1..] {
            if clamped_cos(u, w, *nu, *nw).acos() > theta {
                return false;
            }
        }
    }
    for (y, q) in x.iter().enumerate() {
        let to_p = sub(p, q);
        let np = norm(&to_p);
        for (i, r) in x.iter().enumerate() {
            if i == y {
                continue;
            }
            let v = sub(r, q);
            if clamped_cos(&to_p, &v, np, norm(&v)).acos() > theta {
                return false;
            }
        }
    }
    true
}

/// Grows a set in `R^D` with largest angle at most `theta`, by greedy random
/// insertion and annealing repair, within `budget` evaluations.
pub fn max_cardinality_search(
    theta: Angle,
    dim: usize,
    budget: usize,
    seed: u64,
) -> crate::Result<SearchResult> {
    let t = theta.radians();
    if !(t > 0.0 && t < PI) || dim < 2 {
        return Err(crate::Error::OutOfRange("need 0 < theta < π and D >= 2".into()));
    }
    let mut rng = stream_rng(seed, 0);

    // largest structured start that already satisfies the cap
    let mut candidates: Vec<Vec<Vec<f64>>> = vec![
        regular_simplex(dim)[..2].to_vec(),
        regular_simplex(dim),
        cross_polytope(dim, 2 * dim),
    ];
    if dim < 20 {
        candidates.push(hypercube(dim, 1 << dim));
    }
    let k = (2.0 * PI / (PI - t)).floor() as usize;
    for m in [k, k + 1] {
        if m >= 3 {
            candidates.push(polygon(dim, m));
        }
    }
    let mut x = candidates
        .into_iter()
        .filter(|c| c.len() <= 2 || min_cos(c).acos() <= t)
        .max_by_key(|c| c.len())
        .expect("two points always qualify");

    let mut used = 0;
    let mut stall = 0;
    let stall_limit = 200;
    while used < budget {
        renormalize(&mut x);
        // sample near the current cloud
        used += 1;
        let p: Vec<f64> = gaussian_vector(&mut rng, dim).iter().map(|v| 1.5 * v).collect();
        if insertion_ok(&x, &p, t) {
            x.push(p);
            stall = 0;
            continue;
        }
        stall += 1;
        if stall < stall_limit {
            continue;
        }
        stall = 0;
        // repair: force a point in and anneal the enlarged set under the cap
        let mut trial = x.clone();
        trial.push(p);
        let iters = (budget - used).min(2000);
        let (y, c, steps) = anneal(trial, iters, &mut rng, Some(t));
        used += steps;
        if c.acos() <= t && PointSet::from_coords(dim, y.clone()).is_ok() {
            x = y;
        }
    }
    let points = PointSet::from_coords(dim, x)?;
    Ok(SearchResult::new(points, used, seed, 1))
}
