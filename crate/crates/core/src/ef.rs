//! Line packings and coverings, the doubling construction and the
//! odd-cycle witness behind the two-sided bounds on `N_d(θ)`.
//!
//! * Lower side: `m` lines with pairwise angle `> ρ` give, by repeated
//!   translate-and-union along each line, `2^m` points whose largest angle is
//!   below `π − ρ`.
//! * Upper side: if `m` lines are such that every segment of a set of
//!   `2^m + 1` points is within `ρ/2` of one of them, colouring segments by
//!   line yields a monochromatic odd cycle, and two consecutive edges of it
//!   meet at an angle of at least `π − ρ`.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convexity::ObtuseWitness;
use crate::error::{Error, Result};
use crate::geometry::{angle_at, dot, max_angle, norm, sub, Angle, PointSet, UnitVector};
use crate::rng::{random_direction, stream_rng};

/// Independent restarts used by [`pack_lines`].
pub const PACK_RESTARTS: usize = 8;

/// Default probe count for [`cover_lines`].
pub const DEFAULT_PROBES: usize = 100_000;

/// Default round cap for [`cover_lines`].
pub const DEFAULT_MAX_ROUNDS: usize = 100_000;

const COVER_CANDIDATES: usize = 48;

/// Angle between the undirected lines through `u` and `v`, in `[0, π/2]`.
pub fn line_angle(u: &UnitVector, v: &UnitVector) -> Angle {
    Angle::from_cos(u.dot(v).abs())
}

/// Undirected lines through the origin, stored with canonical orientation
/// (first nonzero coordinate positive).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineArrangement {
    pub dim: usize,
    pub lines: Vec<UnitVector>,
    /// Minimum pairwise line angle; `π/2` when fewer than two lines.
    pub min_pairwise_angle: Angle,
}

impl LineArrangement {
    pub fn new(dim: usize, lines: Vec<UnitVector>) -> Result<Self> {
        if lines.iter().any(|l| l.dim() != dim) {
            return Err(Error::InvalidPointSet("line dimension mismatch".into()));
        }
        let lines: Vec<UnitVector> = lines.iter().map(UnitVector::canonical_line).collect();
        let min_pairwise_angle = min_line_angle(&lines);
        Ok(LineArrangement {
            dim,
            lines,
            min_pairwise_angle,
        })
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

fn min_line_angle(lines: &[UnitVector]) -> Angle {
    let mut max_coh = 0.0f64;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            max_coh = max_coh.max(lines[i].dot(&lines[j]).abs());
        }
    }
    Angle::from_cos(max_coh)
}

fn max_coherence(u: &[Vec<f64>]) -> f64 {
    let mut m = 0.0f64;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            m = m.max(dot(&u[i], &u[j]).abs());
        }
    }
    m
}

/// `(1/β) ln Σ exp(β |u_i·u_j|)`, evaluated stably.
fn soft_max_coherence(u: &[Vec<f64>], beta: f64) -> f64 {
    let top = max_coherence(u);
    let mut s = 0.0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            s += (beta * (dot(&u[i], &u[j]).abs() - top)).exp();
        }
    }
    top + s.ln() / beta
}

fn soft_max_gradient(u: &[Vec<f64>], beta: f64) -> Vec<Vec<f64>> {
    let top = max_coherence(u);
    let dim = u[0].len();
    let mut grad = vec![vec![0.0; dim]; u.len()];
    let mut z = 0.0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            let g = dot(&u[i], &u[j]);
            let w = (beta * (g.abs() - top)).exp();
            z += w;
            let s = w * g.signum();
            for k in 0..dim {
                grad[i][k] += s * u[j][k];
                grad[j][k] += s * u[i][k];
            }
        }
    }
    for (g, ui) in grad.iter_mut().zip(u) {
        for x in g.iter_mut() {
            *x /= z;
        }
        // project onto the tangent space of the sphere at u_i
        let radial = dot(g, ui);
        for (x, y) in g.iter_mut().zip(ui) {
            *x -= radial * y;
        }
    }
    grad
}

fn normalize_in_place(v: &mut [f64]) {
    let n = norm(v);
    for x in v.iter_mut() {
        *x /= n;
    }
}

/// One restart: smoothed minimax descent with a rising sharpness schedule.
fn pack_restart(m: usize, dim: usize, iters: usize, seed: u64, restart: usize) -> (f64, Vec<Vec<f64>>) {
    let mut rng = stream_rng(seed, restart as u64);
    let mut u: Vec<Vec<f64>> = (0..m).map(|_| random_direction(&mut rng, dim)).collect();
    let mut best = (max_coherence(&u), u.clone());

    let betas: Vec<f64> = (0..16).map(|k| 4.0 * 3.0f64.powi(k)).collect();
    let per_stage = (iters / betas.len()).max(1);
    let mut step = 0.1;
    for &beta in &betas {
        let mut value = soft_max_coherence(&u, beta);
        for _ in 0..per_stage {
            let grad = soft_max_gradient(&u, beta);
            let gnorm: f64 = grad.iter().map(|g| dot(g, g)).sum::<f64>().sqrt();
            if gnorm < 1e-15 {
                break;
            }
            let mut accepted = false;
            for _ in 0..40 {
                let trial: Vec<Vec<f64>> = u
                    .iter()
                    .zip(&grad)
                    .map(|(ui, gi)| {
                        let mut v: Vec<f64> =
                            ui.iter().zip(gi).map(|(a, b)| a - step * b / gnorm).collect();
                        normalize_in_place(&mut v);
                        v
                    })
                    .collect();
                let tv = soft_max_coherence(&trial, beta);
                if tv < value {
                    u = trial;
                    value = tv;
                    step *= 1.5;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            let coh = max_coherence(&u);
            if coh < best.0 {
                best = (coh, u.clone());
            }
            if !accepted {
                step = step.max(1e-6);
                break;
            }
        }
    }
    best
}

/// Heuristic packing of `m` lines in `R^dim` maximizing the smallest pairwise
/// angle. The returned arrangement's `min_pairwise_angle` is exact for the
/// lines returned.
pub fn pack_lines(m: usize, dim: usize, iters: usize, seed: u64) -> Result<LineArrangement> {
    if m < 2 || dim < 2 {
        return Err(Error::OutOfRange("pack_lines needs m >= 2 and D >= 2".into()));
    }
    let results: Vec<(f64, Vec<Vec<f64>>)> = (0..PACK_RESTARTS)
        .into_par_iter()
        .map(|r| pack_restart(m, dim, iters, seed, r))
        .collect();
    let (_, best) = results
        .into_iter()
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .expect("at least one restart");
    let lines = best
        .iter()
        .map(|v| UnitVector::normalize(v))
        .collect::<Result<Vec<_>>>()?;
    LineArrangement::new(dim, lines)
}

/// A line covering together with its probe-based certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineCover {
    pub arrangement: LineArrangement,
    pub rho: Angle,
    pub probes: usize,
    /// Largest angle from a probe line to its nearest chosen line; `< ρ/2`.
    pub worst_probe_angle: Angle,
}

const PRIMES: [u64; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    inv = r;
    inv
}

/// Quasi-random directions on `S^{dim−1}`: a randomly shifted Halton
/// sequence pushed through Box–Muller and normalized.
pub fn probe_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let pairs = dim.div_ceil(2);
    let bases = &PRIMES[..(2 * pairs).min(PRIMES.len())];
    let mut rng = stream_rng(seed, u64::MAX);
    let shift: Vec<f64> = (0..2 * pairs).map(|_| rng.random::<f64>()).collect();
    (0..count)
        .map(|k| {
            let mut v = Vec::with_capacity(2 * pairs);
            for p in 0..pairs {
                let b1 = bases[(2 * p) % bases.len()];
                let b2 = bases[(2 * p + 1) % bases.len()];
                let u1 = (radical_inverse(k as u64 + 1, b1) + shift[2 * p]).fract();
                let u2 = (radical_inverse(k as u64 + 1, b2) + shift[2 * p + 1]).fract();
                let r = (-2.0 * (1.0 - u1).max(f64::MIN_POSITIVE).ln()).sqrt();
                let a = 2.0 * PI * u2;
                v.push(r * a.cos());
                v.push(r * a.sin());
            }
            v.truncate(dim);
            if norm(&v) < 1e-12 {
                v[0] = 1.0;
            }
            normalize_in_place(&mut v);
            v
        })
        .collect()
}

fn worst_probe_angle(lines: &[UnitVector], probes: &[Vec<f64>]) -> Angle {
    let worst_cos = probes
        .par_iter()
        .map(|p| {
            lines
                .iter()
                .map(|l| dot(p, l.coords()).abs())
                .fold(0.0f64, f64::max)
        })
        .reduce(|| 1.0, f64::min);
    Angle::from_cos(worst_cos)
}

/// Planar covering: lines are points of a circle of length π, so the
/// interval greedy from the largest probe gap is exact on the probe set.
fn cover_planar(rho: f64, probes: usize, seed: u64) -> (Vec<UnitVector>, Vec<Vec<f64>>) {
    let mut rng = stream_rng(seed, u64::MAX);
    let shift: f64 = rng.random();
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let mut phis: Vec<f64> = (0..probes)
        .map(|k| PI * ((k as f64 + 1.0) * golden + shift).fract())
        .collect();
    phis.sort_by(f64::total_cmp);
    // start right after the widest gap (cyclically)
    let n = phis.len();
    let start = (0..n)
        .max_by(|&a, &b| {
            let gap = |i: usize| {
                let prev = phis[(i + n - 1) % n];
                (phis[i] - prev).rem_euclid(PI)
            };
            gap(a).total_cmp(&gap(b))
        })
        .unwrap_or(0);
    let unwrapped: Vec<f64> = (0..n)
        .map(|k| {
            let p = phis[(start + k) % n];
            if p < phis[start] {
                p + PI
            } else {
                p
            }
        })
        .collect();
    let half = 0.5 * rho * (1.0 - 1e-9);
    let mut lines = Vec::new();
    let mut k = 0;
    while k < n {
        let centre = unwrapped[k] + half;
        lines.push(UnitVector::normalize(&[centre.cos(), centre.sin()]).expect("unit circle"));
        while k < n && unwrapped[k] - centre < half {
            k += 1;
        }
    }
    let probe_vecs = phis.iter().map(|p| vec![p.cos(), p.sin()]).collect();
    (lines, probe_vecs)
}

/// Greedy covering of line space: every probe line must end up within
/// `ρ/2` of a chosen line.
pub fn cover_lines(rho: Angle, dim: usize, seed: u64) -> Result<LineCover> {
    cover_lines_with(rho, dim, seed, DEFAULT_PROBES, DEFAULT_MAX_ROUNDS)
}

pub fn cover_lines_with(
    rho: Angle,
    dim: usize,
    seed: u64,
    probes: usize,
    max_rounds: usize,
) -> Result<LineCover> {
    let r = rho.radians();
    if !(r > 0.0 && r < PI) {
        return Err(Error::OutOfRange(format!("rho {r} not in (0, π)")));
    }
    if dim < 2 || probes == 0 {
        return Err(Error::OutOfRange("cover_lines needs D >= 2 and probes > 0".into()));
    }
    let cos_half = (0.5 * r).cos();
    let (lines, probe_vecs) = if dim == 2 {
        cover_planar(r, probes, seed)
    } else {
        let probe_vecs = probe_directions(dim, probes, seed);
        let mut uncovered: Vec<usize> = (0..probes).collect();
        let mut lines: Vec<UnitVector> = Vec::new();
        let mut rng = stream_rng(seed, 0);
        let mut rounds = 0;
        while !uncovered.is_empty() {
            if rounds >= max_rounds {
                return Err(Error::CoverageFailed {
                    uncovered: uncovered.len(),
                    rounds,
                });
            }
            rounds += 1;
            let mut cands: Vec<Vec<f64>> = Vec::with_capacity(COVER_CANDIDATES);
            for k in 0..COVER_CANDIDATES {
                let q = &probe_vecs[uncovered[rng.random_range(0..uncovered.len())]];
                let c = match k % 3 {
                    0 => q.clone(),
                    1 => random_direction(&mut rng, dim),
                    _ => {
                        // mean of the uncovered probes near q, sign-aligned to q
                        let mut m = vec![0.0; dim];
                        for &i in &uncovered {
                            let p = &probe_vecs[i];
                            let d = dot(p, q);
                            if d.abs() >= cos_half {
                                let s = d.signum();
                                for (x, y) in m.iter_mut().zip(p) {
                                    *x += s * y;
                                }
                            }
                        }
                        normalize_in_place(&mut m);
                        m
                    }
                };
                cands.push(c);
            }
            let scores: Vec<usize> = cands
                .par_iter()
                .map(|c| {
                    uncovered
                        .iter()
                        .filter(|&&i| dot(&probe_vecs[i], c).abs() > cos_half)
                        .count()
                })
                .collect();
            let (best, _) = scores
                .iter()
                .enumerate()
                .fold((0, 0), |a, (i, &s)| if s > a.1 { (i, s) } else { a });
            let line = UnitVector::normalize(&cands[best])?;
            uncovered.retain(|&i| dot(&probe_vecs[i], line.coords()).abs() <= cos_half);
            lines.push(line);
        }
        (lines, probe_vecs)
    };
    let worst = worst_probe_angle(&lines, &probe_vecs);
    if worst.radians() >= 0.5 * r {
        return Err(Error::CoverageFailed {
            uncovered: 1,
            rounds: lines.len(),
        });
    }
    Ok(LineCover {
        arrangement: LineArrangement::new(dim, lines)?,
        rho,
        probes,
        worst_probe_angle: worst,
    })
}

/// `2^m` points with largest angle at most `π − ρ`, built by translating
/// the current set along each line in turn.
///
/// Every difference vector stays within `δ = (α − ρ)/2` of its line, `α`
/// being the minimum line angle, once each translation is at least
/// `diam / sin δ`. The first translation tried is `slack` times that
/// sufficient scale and doubles until the union passes the angle check, at
/// most `max_scale_doublings` times per line. With `slack < 1` an early step
/// may accept a scale that later steps cannot recover from.
pub fn ef_doubling(
    lines: &LineArrangement,
    rho: Angle,
    slack: f64,
    max_scale_doublings: usize,
) -> Result<PointSet> {
    if lines.is_empty() {
        return Err(Error::OutOfRange("need at least one line".into()));
    }
    if rho.radians() >= lines.min_pairwise_angle.radians() {
        return Err(Error::OutOfRange(format!(
            "rho {} must be below the minimum line angle {}",
            rho.radians(),
            lines.min_pairwise_angle.radians()
        )));
    }
    if !(slack > 0.0 && slack.is_finite()) {
        return Err(Error::OutOfRange("slack must be positive".into()));
    }
    let dim = lines.dim;
    let target = PI - rho.radians();
    let delta = 0.5 * (lines.min_pairwise_angle.radians() - rho.radians());
    let first = lines.lines[0].coords();
    let mut pts = PointSet::from_coords(dim, vec![vec![0.0; dim], first.to_vec()])?;
    for (step, line) in lines.lines.iter().enumerate().skip(1) {
        let diam = pts
            .iter()
            .flat_map(|a| pts.iter().map(move |b| norm(&sub(a.coords(), b.coords()))))
            .fold(0.0f64, f64::max);
        let mut t = slack * diam / delta.sin();
        let mut accepted = None;
        let mut last_angle = f64::NAN;
        for _ in 0..=max_scale_doublings {
            let moved: Vec<Vec<f64>> = pts
                .iter()
                .map(|p| p.coords().iter().zip(line.coords()).map(|(x, l)| x + t * l).collect())
                .collect();
            let mut all: Vec<Vec<f64>> = pts.iter().map(|p| p.coords().to_vec()).collect();
            all.extend(moved);
            if let Ok(candidate) = PointSet::from_coords(dim, all) {
                last_angle = max_angle(&candidate).radians();
                if last_angle <= target {
                    accepted = Some(candidate);
                    break;
                }
            }
            t *= 2.0;
        }
        pts = accepted.ok_or(Error::ScaleExhausted {
            step,
            max_angle: last_angle,
            target,
        })?;
    }
    let final_angle = max_angle(&pts).radians();
    if final_angle > target {
        return Err(Error::ScaleExhausted {
            step: lines.len(),
            max_angle: final_angle,
            target,
        });
    }
    Ok(pts)
}

/// A colouring of the edges of the complete graph on `n` vertices with
/// colours `0..colors`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeColoring {
    pub n: usize,
    pub colors: usize,
    color: Vec<usize>,
}

impl EdgeColoring {
    /// Builds the colouring from `f(i, j)` for every `i < j`.
    pub fn from_fn<F: FnMut(usize, usize) -> usize>(n: usize, colors: usize, mut f: F) -> Result<Self> {
        let mut color = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let c = f(i, j);
                if c >= colors {
                    return Err(Error::OutOfRange(format!("colour {c} >= {colors}")));
                }
                color.push(c);
            }
        }
        Ok(EdgeColoring { n, colors, color })
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    /// Colour of the edge `{i, j}`, `i != j`.
    pub fn get(&self, i: usize, j: usize) -> usize {
        assert!(i != j && i < self.n && j < self.n, "invalid edge {i}-{j}");
        self.color[self.index(i, j)]
    }
}

/// BFS forest of one colour class.
struct Forest {
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
}

fn bfs_forest(c: &EdgeColoring, color: usize) -> Forest {
    let n = c.n;
    let mut parent = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if v != u && depth[v] == usize::MAX && c.get(u, v) == color {
                    depth[v] = depth[u] + 1;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
    }
    Forest { parent, depth }
}

/// Tree path `u → … → lca → … → v` in a BFS forest (both in one tree).
fn tree_path(f: &Forest, u: usize, v: usize) -> Vec<usize> {
    let (mut a, mut b) = (u, v);
    let mut left = vec![a];
    let mut right = vec![b];
    while a != b {
        if f.depth[a] >= f.depth[b] {
            a = f.parent[a].expect("same tree");
            left.push(a);
        } else {
            b = f.parent[b].expect("same tree");
            right.push(b);
        }
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

fn verify_cycle(c: &EdgeColoring, color: usize, cycle: &[usize]) -> bool {
    let k = cycle.len();
    let mut seen = cycle.to_vec();
    seen.sort_unstable();
    seen.dedup();
    k >= 3
        && k % 2 == 1
        && seen.len() == k
        && (0..k).all(|i| c.get(cycle[i], cycle[(i + 1) % k]) == color)
}

/// Pigeonhole step: two vertices with equal parity labels in every colour
/// class close an odd cycle through the tree path of their edge's colour.
fn pigeonhole_cycle(c: &EdgeColoring, forests: &[Forest]) -> Option<(usize, Vec<usize>)> {
    let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
    for v in 0..c.n {
        let label: Vec<bool> = forests.iter().map(|f| f.depth[v] % 2 == 1).collect();
        if let Some(&u) = seen.get(&label) {
            let color = c.get(u, v);
            let cycle = tree_path(&forests[color], u, v);
            return Some((color, cycle));
        }
        seen.insert(label, v);
    }
    None
}

/// A monochromatic odd cycle in a colouring of `K_n` with `m` colours,
/// guaranteed once `n ≥ 2^m + 1`.
pub fn find_mono_odd_cycle(c: &EdgeColoring) -> Result<(usize, Vec<usize>)> {
    let threshold = 1usize.checked_shl(c.colors as u32).unwrap_or(usize::MAX);
    if c.n <= threshold {
        return Err(Error::HypothesisViolated(format!(
            "{} vertices with {} colours; need at least 2^{} + 1",
            c.n, c.colors, c.colors
        )));
    }
    let forests: Vec<Forest> = (0..c.colors).map(|k| bfs_forest(c, k)).collect();
    for (color, f) in forests.iter().enumerate() {
        for u in 0..c.n {
            for v in u + 1..c.n {
                if c.get(u, v) == color && f.depth[u] % 2 == f.depth[v] % 2 {
                    let cycle = tree_path(f, u, v);
                    debug_assert!(verify_cycle(c, color, &cycle));
                    return Ok((color, cycle));
                }
            }
        }
    }
    match pigeonhole_cycle(c, &forests) {
        Some((color, cycle)) if verify_cycle(c, color, &cycle) => Ok((color, cycle)),
        _ => Err(Error::HypothesisViolated("no odd cycle found".into())),
    }
}

/// Three points of `a` making an angle of at least `π − ρ`, found through a
/// monochromatic odd cycle of the segment colouring induced by `lines`.
pub fn obtuse_triple_witness(
    a: &PointSet,
    lines: &LineArrangement,
    rho: Angle,
) -> Result<ObtuseWitness> {
    let m = lines.len();
    let threshold = 1usize.checked_shl(m as u32).unwrap_or(usize::MAX);
    if a.len() <= threshold {
        return Err(Error::HypothesisViolated(format!(
            "{} points with {m} lines; need at least 2^{m} + 1",
            a.len()
        )));
    }
    if lines.dim != a.dim() {
        return Err(Error::InvalidPointSet("line and point dimensions differ".into()));
    }
    let cos_half = (0.5 * rho.radians()).cos();
    let mut failed = None;
    let coloring = EdgeColoring::from_fn(a.len(), m, |i, j| {
        let d = UnitVector::normalize(&sub(a.point(j).coords(), a.point(i).coords()))
            .expect("points are distinct");
        match lines.lines.iter().position(|l| l.dot(&d).abs() >= cos_half) {
            Some(c) => c,
            None => {
                failed.get_or_insert((i, j));
                0
            }
        }
    })?;
    if let Some((i, j)) = failed {
        return Err(Error::ColoringFailed(i, j));
    }
    let (color, cycle) = find_mono_odd_cycle(&coloring)?;
    let dir = lines.lines[color].coords();
    let k = cycle.len();
    let sign = |s: usize| {
        let (x, y) = (a.point(cycle[s]), a.point(cycle[(s + 1) % k]));
        dot(&sub(y.coords(), x.coords()), dir) > 0.0
    };
    let s = (0..k)
        .find(|&s| sign(s) == sign((s + 1) % k))
        .expect("an odd cycle has two consecutive edges of equal orientation");
    let x = a.point(cycle[s]).clone();
    let y = a.point(cycle[(s + 1) % k]).clone();
    let z = a.point(cycle[(s + 2) % k]).clone();
    let angle = angle_at(&x, &y, &z)?;
    Ok(ObtuseWitness {
        vi: x,
        v: y,
        vj: z,
        angle,
    })
}

/// Two-sided bound `2^{(c/(π−θ))^{d−1} − 1} < N_d(θ) < 1 + 2^{(C/(π−θ))^{d−1} + 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct NBoundsReport {
    pub theta: Angle,
    pub d: usize,
    pub c_d: f64,
    pub C_d: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_log2: f64,
    pub upper_log2: f64,
    /// Set when either bound exceeds the `f64` range.
    pub overflow: bool,
    /// `(d − 1) log2(c_d / (π − θ))`, the size above which the lower bound
    /// is asserted.
    pub packing_threshold: f64,
}

#[allow(non_snake_case)]
pub fn n_bounds(theta: Angle, d: usize, c_d: f64, C_d: f64) -> Result<NBoundsReport> {
    let t = theta.radians();
    if !(t > FRAC_PI_2 && t < PI) {
        return Err(Error::OutOfRange(format!("theta {t} not in (π/2, π)")));
    }
    if d < 2 {
        return Err(Error::OutOfRange("n_bounds needs d >= 2".into()));
    }
    if !(c_d > 0.0 && C_d > 0.0 && c_d.is_finite() && C_d.is_finite()) {
        return Err(Error::OutOfRange("constants must be positive".into()));
    }
    let gap = PI - t;
    let e = (d - 1) as i32;
    let lower_log2 = (c_d / gap).powi(e) - 1.0;
    let upper_log2 = (C_d / gap).powi(e) + 1.0;
    let lower = lower_log2.exp2();
    let upper = 1.0 + upper_log2.exp2();
    Ok(NBoundsReport {
        theta,
        d,
        c_d,
        C_d,
        lower,
        upper,
        lower_log2,
        upper_log2,
        overflow: !lower.is_finite() || !upper.is_finite(),
        packing_threshold: packing_size_threshold(d, c_d, gap),
    })
}

/// Size above which the packing-side inequality is asserted:
/// `(d − 1) log2(c_d / ρ̄)`.
pub fn packing_size_threshold(d: usize, c_d: f64, rho_bar: f64) -> f64 {
    (d as f64 - 1.0) * (c_d / rho_bar).log2()
}

/// Packing constant certified by an arrangement: `ρ m^{1/(d−1)}` with `ρ` its
/// minimum angle.
pub fn packing_constant(lines: &LineArrangement) -> f64 {
    lines.min_pairwise_angle.radians() * (lines.len() as f64).powf(1.0 / (lines.dim as f64 - 1.0))
}

/// Covering constant certified by a covering: `ρ m^{1/(d−1)}`.
pub fn covering_constant(cover: &LineCover) -> f64 {
    let a = &cover.arrangement;
    cover.rho.radians() * (a.len() as f64).powf(1.0 / (a.dim as f64 - 1.0))
}

/// Largest `m ≤ max_m` for which [`pack_lines`] reaches an angle above `rho`,
/// with the arrangement found.
pub fn largest_packing(
    rho: Angle,
    dim: usize,
    max_m: usize,
    iters: usize,
    seed: u64,
) -> Result<LineArrangement> {
    let mut best = pack_lines(2, dim, iters, seed)?;
    if best.min_pairwise_angle <= rho {
        return Ok(best);
    }
    for m in 3..=max_m {
        let cand = pack_lines(m, dim, iters, seed)?;
        if cand.min_pairwise_angle <= rho {
            break;
        }
        best = cand;
    }
    Ok(best)
}

/// Constants read off a packing and a covering at `ρ = π − θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct EmpiricalConstants {
    pub c_d: f64,
    pub C_d: f64,
    pub packing_lines: usize,
    pub covering_lines: usize,
}

/// Largest packing size tried by [`empirical_constants`].
pub const MAX_PACKING_LINES: usize = 64;

/// `c_d` and `C_d` from [`largest_packing`] and [`cover_lines_with`] at
/// `ρ = π − θ` in `R^d`. With these values the two-sided bound at `θ`
/// reproduces the packing and covering sizes exactly.
pub fn empirical_constants(theta: Angle, d: usize, seed: u64, probes: usize) -> Result<EmpiricalConstants> {
    let t = theta.radians();
    if !(t > FRAC_PI_2 && t < PI) || d < 2 {
        return Err(Error::OutOfRange("need π/2 < theta < π and d >= 2".into()));
    }
    let rho = Angle::new(PI - t)?;
    let packing = largest_packing(rho, d, MAX_PACKING_LINES, 2000, seed)?;
    let cover = cover_lines_with(rho, d, seed, probes, DEFAULT_MAX_ROUNDS)?;
    Ok(EmpiricalConstants {
        c_d: packing_constant_at(rho, &packing),
        C_d: covering_constant(&cover),
        packing_lines: packing.len(),
        covering_lines: cover.arrangement.len(),
    })
}

fn packing_constant_at(rho: Angle, lines: &LineArrangement) -> f64 {
    if lines.min_pairwise_angle <= rho {
        return rho.radians();
    }
    rho.radians() * (lines.len() as f64).powf(1.0 / (lines.dim as f64 - 1.0))
}
