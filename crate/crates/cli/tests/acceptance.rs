//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use anglebound::bounds::{
    asymptotic_envelope, cardinality_bound, eta_of_theta, f_fraction, theta_d, BOUNDARY_TOL,
};
use anglebound::convexity::{
    is_convex_position, min_pairwise_dot, obtuse_witness, regular_simplex, simplex_contains_origin,
};
use anglebound::curvature::{dekster_radius, gauss_bonnet_sum, min_enclosing_cap};
use anglebound::ef::{ef_doubling, obtuse_triple_witness, LineArrangement};
use anglebound::geometry::geodesic_diameter;
use anglebound::rng::{gaussian_vector, random_direction, stream_rng};
use anglebound::search::{max_cardinality_search, minimize_max_angle};
use anglebound::{angle_at, max_angle, Angle, Point, PointSet, UnitVector};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Every point set produced by the suite, kept for the end-to-end bound check.
#[derive(Default)]
struct Registry {
    sets: Vec<(&'static str, PointSet)>,
}

impl Registry {
    fn add(&mut self, source: &'static str, s: PointSet) {
        self.sets.push((source, s));
    }
}

fn ps(dim: usize, rows: Vec<Vec<f64>>) -> PointSet {
    PointSet::from_coords(dim, rows).expect("valid point set")
}

fn unit(v: &[f64]) -> UnitVector {
    UnitVector::normalize(v).expect("nonzero vector")
}

/// Largest angle by a direct triple loop, independent of the library scan.
fn brute_max_angle(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut best = 0.0f64;
    for y in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i == y || j == y || i == j {
                    continue;
                }
                let u: Vec<f64> = rows[i].iter().zip(&rows[y]).map(|(a, b)| a - b).collect();
                let w: Vec<f64> = rows[j].iter().zip(&rows[y]).map(|(a, b)| a - b).collect();
                let cross2: f64 = {
                    let uu: f64 = u.iter().map(|x| x * x).sum();
                    let ww: f64 = w.iter().map(|x| x * x).sum();
                    let uw: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
                    (uu * ww - uw * uw).max(0.0)
                };
                let uw: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
                best = best.max(cross2.sqrt().atan2(uw));
            }
        }
    }
    best
}

/// Solves a small dense system by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let pivot_row = a[col].clone();
        for r in col + 1..n {
            let f = a[r][col] / pivot_row[col];
            for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Exhaustive hull oracle for small generic sets: point `p` is not extreme
/// iff it has nonnegative barycentric coordinates in some full simplex of the
/// other points.
fn oracle_in_convex_position(rows: &[Vec<f64>]) -> bool {
    let n = rows.len();
    let dim = rows[0].len();
    for p in 0..n {
        let others: Vec<usize> = (0..n).filter(|&i| i != p).collect();
        if others.len() < dim + 1 {
            continue;
        }
        for combo in combinations(others.len(), dim + 1) {
            let idx: Vec<usize> = combo.iter().map(|&c| others[c]).collect();
            // rows: coordinates, then the affine row of ones
            let mut a = vec![vec![0.0; dim + 1]; dim + 1];
            for (c, &v) in idx.iter().enumerate() {
                for r in 0..dim {
                    a[r][c] = rows[v][r];
                }
                a[dim][c] = 1.0;
            }
            let mut b = rows[p].clone();
            b.push(1.0);
            if let Some(l) = solve(a, b) {
                if l.iter().all(|x| *x >= -1e-12) {
                    return false;
                }
            }
        }
    }
    true
}

fn criterion_1() -> Outcome {
    let cases = [(1e-12, 2.0), (FRAC_PI_3, 3.0), (FRAC_PI_2, 4.0)];
    let mut worst = 0.0f64;
    for (theta, want) in cases {
        let r = cardinality_bound(Angle::new(theta).unwrap(), 2).unwrap();
        worst = worst.max((r.bound - want).abs());
    }
    let r = cardinality_bound(Angle::new(2.0 * PI / 3.0).unwrap(), 2).unwrap();
    let boundary = !r.theorem_applicable
        && (r.theta.radians() - theta_d(2).radians()).abs() <= BOUNDARY_TOL;
    let six = (r.bound - 6.0).abs();
    outcome(
        worst < 1e-9 && six < 1e-9 && boundary,
        format!("max |bound - sharp| = {worst:.2e}; 2π/3 -> {} (boundary flag {boundary})", r.bound),
    )
}

fn criterion_2() -> Outcome {
    let b = cardinality_bound(Angle::new(FRAC_PI_2).unwrap(), 3).unwrap().bound;
    outcome((10.85..=10.95).contains(&b), format!("bound(π/2, 3) = {b}"))
}

fn criterion_3() -> Outcome {
    let closed: [fn(f64) -> f64; 3] = [
        |e| (FRAC_PI_2 - e) / PI,
        |e| (1.0 - e.sin()) / 2.0,
        |e| (FRAC_PI_2 - e - (2.0 * e).sin() / 2.0) / PI,
    ];
    let mut worst = 0.0f64;
    for (k, f) in closed.iter().enumerate() {
        let d = k + 1;
        for i in 0..50 {
            let eta = FRAC_PI_2 * i as f64 / 49.0;
            let got = f_fraction(d, Angle::new(eta).unwrap()).unwrap().value;
            worst = worst.max((got - f(eta)).abs());
        }
    }
    outcome(worst <= 1e-10, format!("max deviation from closed forms = {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let f = |d: usize, eta: f64| f_fraction(d, Angle::new(eta).unwrap()).unwrap().value;
    let mut in_eta = true;
    for d in 1..=20 {
        for k in 0..15 {
            let (a, b) = (0.1 * k as f64, 0.1 * (k + 1) as f64);
            in_eta &= f(d, b) - f(d, a) < 0.0;
        }
    }
    let mut in_d = true;
    for eta in [0.2, 0.8, 1.2] {
        for d in 1..20 {
            in_d &= f(d + 1, eta) - f(d, eta) < 0.0;
        }
    }
    let bounds: Vec<f64> = (2..=8)
        .map(|dim| cardinality_bound(Angle::new(1.7).unwrap(), dim).unwrap().bound)
        .collect();
    let in_dim = bounds.windows(2).all(|w| w[1] >= w[0]);
    outcome(
        in_eta && in_d && in_dim,
        format!("decreasing in η: {in_eta}, in d: {in_d}; bound(1.7, D=2..8) nondecreasing: {in_dim}"),
    )
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in 2..=40 {
        let eta = eta_of_theta(Angle::new(FRAC_PI_2).unwrap(), d).unwrap();
        let inv = 1.0 / f_fraction(d, eta).unwrap().value;
        let env = asymptotic_envelope(d).unwrap();
        worst = worst.max(inv / (1.5 * env));
    }
    outcome(worst <= 1.0, format!("max of (1/f) / (1.5 envelope) over d = 2..40: {worst:.3e}"))
}

fn criterion_6(reg: &mut Registry) -> Outcome {
    let mut rng = stream_rng(6, 0);
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut interior_checked = 0;
    for trial in 0..10_000 {
        let d = 2 + trial % 5;
        // vertices shifted so the origin is a strictly positive combination
        let raw: Vec<Vec<f64>> = (0..=d).map(|_| gaussian_vector(&mut rng, d)).collect();
        let w: Vec<f64> = (0..=d).map(|_| 0.05 + rng.random::<f64>()).collect();
        let total: f64 = w.iter().sum();
        let centre: Vec<f64> = (0..d)
            .map(|k| raw.iter().zip(&w).map(|(v, l)| v[k] * l / total).sum())
            .collect();
        let verts: Vec<Vec<f64>> = raw
            .iter()
            .map(|v| v.iter().zip(&centre).map(|(a, c)| a - c).collect())
            .collect();
        let points: Vec<Point> = verts.iter().map(|v| Point::new(v.clone()).unwrap()).collect();
        match simplex_contains_origin(&points, true) {
            Ok(true) => interior_checked += 1,
            _ => continue,
        }
        let rays: Vec<UnitVector> = verts.iter().map(|v| unit(v)).collect();
        let m = min_pairwise_dot(&rays);
        worst = worst.max(m + 1.0 / d as f64);
        if m > -1.0 / d as f64 + 1e-9 {
            violations += 1;
        }
        if trial < 200 {
            let mut with_origin = verts.clone();
            with_origin.push(vec![0.0; d]);
            reg.add("random simplex + centre", ps(d, with_origin));
        }
    }
    let mut regular_err = 0.0f64;
    let mut perturbed_below = true;
    for d in 2..=6 {
        let s = regular_simplex(d);
        let rays: Vec<UnitVector> = s.iter().map(|v| unit(v)).collect();
        regular_err = regular_err.max((min_pairwise_dot(&rays) + 1.0 / d as f64).abs());
        for _ in 0..20 {
            let pert: Vec<Vec<f64>> = s
                .iter()
                .map(|v| v.iter().map(|x| x + 0.02 * rng.random::<f64>() - 0.01).collect())
                .collect();
            let rays: Vec<UnitVector> = pert.iter().map(|v| unit(v)).collect();
            perturbed_below &= min_pairwise_dot(&rays) < -1.0 / d as f64;
        }
        reg.add("regular simplex", ps(d, s));
    }
    outcome(
        violations == 0 && interior_checked == 10_000 && regular_err <= 1e-9 && perturbed_below,
        format!(
            "{interior_checked} interior simplices, {violations} violations (max excess {worst:.2e}); \
             regular |min dot + 1/d| = {regular_err:.1e}; perturbed strictly below: {perturbed_below}"
        ),
    )
}

fn criterion_7(reg: &mut Registry) -> Outcome {
    let mut rng = stream_rng(7, 0);
    let mut bad_verdicts = 0;
    let mut oracle_mismatch = 0;
    let mut accepted = 0;
    let mut tries = 0;
    for dim in [2usize, 3, 4] {
        let threshold = theta_d(dim).radians();
        let mut got = 0;
        while got < 1000 {
            tries += 1;
            let n = rng.random_range(3..=dim + 3);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    let r = 0.7 + 0.6 * rng.random::<f64>();
                    random_direction(&mut rng, dim).iter().map(|x| r * x).collect()
                })
                .collect();
            let Ok(a) = PointSet::from_coords(dim, rows.clone()) else {
                continue;
            };
            if max_angle(&a).radians() >= threshold {
                continue;
            }
            got += 1;
            if !is_convex_position(&a).in_convex_position {
                bad_verdicts += 1;
            }
            if !oracle_in_convex_position(&rows) {
                oracle_mismatch += 1;
            }
            if got <= 100 {
                reg.add("angle-bounded random set", a);
            }
        }
        accepted += got;
    }

    let mut witness_failures = 0;
    let mut interior_sets = 0;
    for trial in 0..1000 {
        let dim = 2 + trial % 3;
        let simplex: Vec<Vec<f64>> = (0..=dim).map(|_| gaussian_vector(&mut rng, dim)).collect();
        let w: Vec<f64> = (0..=dim).map(|_| 0.05 + rng.random::<f64>()).collect();
        let total: f64 = w.iter().sum();
        let inner: Vec<f64> = (0..dim)
            .map(|k| simplex.iter().zip(&w).map(|(v, l)| v[k] * l / total).sum())
            .collect();
        let mut rows = simplex.clone();
        let extra = rng.random_range(0..3);
        for _ in 0..extra {
            rows.push(gaussian_vector(&mut rng, dim));
        }
        rows.push(inner);
        let Ok(a) = PointSet::from_coords(dim, rows.clone()) else {
            continue;
        };
        interior_sets += 1;
        let verdict = is_convex_position(&a);
        let ok = (|| {
            if verdict.in_convex_position || oracle_in_convex_position(&rows) {
                return false;
            }
            let (Some(p), Some(s)) = (verdict.witness_point.as_ref(), verdict.witness_simplex.as_ref())
            else {
                return false;
            };
            let Ok(w) = obtuse_witness(p, s) else {
                return false;
            };
            let k = s.len() - 1;
            let recomputed = angle_at(&w.vi, &w.v, &w.vj).map(|x| x.radians()).unwrap_or(0.0);
            let members = [&w.vi, &w.v, &w.vj].iter().all(|q| a.iter().any(|x| x == *q));
            members
                && (recomputed - w.angle.radians()).abs() <= 1e-12
                && recomputed >= theta_d(k.max(1)).radians() - 1e-9
        })();
        if !ok {
            witness_failures += 1;
        }
        if trial < 100 {
            reg.add("set with interior point", a);
        }
    }
    outcome(
        bad_verdicts == 0 && oracle_mismatch == 0 && witness_failures == 0 && interior_sets == 1000,
        format!(
            "{accepted} angle-bounded sets ({tries} drawn): {bad_verdicts} not convex, \
             {oracle_mismatch} oracle disagreements; {interior_sets} sets with interior point: \
             {witness_failures} witness failures"
        ),
    )
}

fn criterion_8() -> Outcome {
    let cube: Vec<Vec<f64>> = (0..8)
        .map(|k| (0..3).map(|b| ((k >> b) & 1) as f64).collect())
        .collect();
    let square = vec![vec![0., 0.], vec![1., 0.], vec![1., 1.], vec![0., 1.]];
    let mut exact_sum = true;
    let mut max_z: f64 = 0.0;
    for (rows, want, seed) in [(cube, 0.125, 81u64), (square, 0.25, 82)] {
        let dim = rows[0].len();
        let e = gauss_bonnet_sum(&ps(dim, rows), 1_000_000, seed).unwrap();
        exact_sum &= e.counts.iter().sum::<u64>() == e.samples as u64
            && (e.fractions.iter().sum::<f64>() - 1.0).abs() <= 1e-12;
        for (f, se) in e.fractions.iter().zip(&e.std_error) {
            max_z = max_z.max((f - want).abs() / se);
        }
    }
    let mut rng = stream_rng(8, 0);
    let mut polygon_z: f64 = 0.0;
    for p in 0..20u64 {
        let n = rng.random_range(3..=8);
        let mut angles: Vec<f64> = (0..n).map(|_| 2.0 * PI * rng.random::<f64>()).collect();
        angles.sort_by(f64::total_cmp);
        let rows: Vec<Vec<f64>> = angles.iter().map(|a| vec![a.cos(), a.sin()]).collect();
        let e = gauss_bonnet_sum(&ps(2, rows.clone()), 200_000, 800 + p).unwrap();
        exact_sum &= e.counts.iter().sum::<u64>() == e.samples as u64;
        for i in 0..n {
            // exterior angle = π − interior angle
            let prev = &rows[(i + n - 1) % n];
            let next = &rows[(i + 1) % n];
            let interior = angle_at(
                &Point::new(prev.clone()).unwrap(),
                &Point::new(rows[i].clone()).unwrap(),
                &Point::new(next.clone()).unwrap(),
            )
            .unwrap()
            .radians();
            let want = (PI - interior) / (2.0 * PI);
            polygon_z = polygon_z.max((e.fractions[i] - want).abs() / e.std_error[i]);
        }
    }
    outcome(
        exact_sum && max_z <= 4.0 && polygon_z <= 4.0,
        format!(
            "sums exact: {exact_sum}; cube/square max |z| = {max_z:.2}; polygons max |z| = {polygon_z:.2}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = stream_rng(9, 0);
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for trial in 0..1000 {
        let d = 2 + trial % 2;
        let dim = d + 1;
        let centre = random_direction(&mut rng, dim);
        let radius = 0.05 + 0.85 * rng.random::<f64>();
        let n = rng.random_range(2..=12);
        let h: Vec<UnitVector> = (0..n)
            .map(|_| {
                // uniform in the cap by rejection
                loop {
                    let u = random_direction(&mut rng, dim);
                    let c: f64 = u.iter().zip(&centre).map(|(a, b)| a * b).sum();
                    if c >= radius.cos() {
                        return unit(&u);
                    }
                }
            })
            .collect();
        let diam = geodesic_diameter(&h);
        let cap = min_enclosing_cap(&h).unwrap();
        let bound = dekster_radius(diam, d).unwrap();
        let excess = cap.radius.radians() - bound.radians();
        worst = worst.max(excess);
        if excess > 1e-7 {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("1000 spherical sets: {violations} violations, max (cap − Dekster) = {worst:.3e}"),
    )
}

fn planar_lines(degrees: &[f64]) -> LineArrangement {
    let lines = degrees
        .iter()
        .map(|d| {
            let r = d.to_radians();
            unit(&[r.cos(), r.sin()])
        })
        .collect();
    LineArrangement::new(2, lines).unwrap()
}

fn criterion_11(reg: &mut Registry) -> Outcome {
    let three = ef_doubling(&planar_lines(&[0.0, 60.0, 120.0]), Angle::new(1.0).unwrap(), 1.0, 60);
    let two = ef_doubling(&planar_lines(&[0.0, 90.0]), Angle::new(1.4).unwrap(), 1.0, 60);
    let (Ok(three), Ok(two)) = (three, two) else {
        return outcome(false, "construction failed");
    };
    let rows = |p: &PointSet| p.iter().map(|x| x.coords().to_vec()).collect::<Vec<_>>();
    let a3 = brute_max_angle(&rows(&three));
    let a2 = brute_max_angle(&rows(&two));
    let pass = three.len() == 8 && a3 <= PI - 1.0 && two.len() == 4 && a2 <= PI - 1.4;
    let detail = format!(
        "3 lines: {} points, max angle {a3:.6} (cap {:.6}); 2 lines: {} points, max angle {a2:.6} (cap {:.6})",
        three.len(),
        PI - 1.0,
        two.len(),
        PI - 1.4
    );
    reg.add("doubling construction", three);
    reg.add("doubling construction", two);
    outcome(pass, detail)
}

/// Points whose segments all lie near one of the given lines: sums of
/// multiples of widely separated translations along the lines.
fn layered_points(
    rng: &mut impl Rng,
    lines: &[UnitVector],
    n: usize,
    ratio: f64,
) -> Vec<Vec<f64>> {
    let m = lines.len();
    let dim = lines[0].dim();
    let mut patterns: Vec<Vec<usize>> = Vec::new();
    while patterns.len() < n {
        let p: Vec<usize> = (0..m).map(|_| rng.random_range(0..3)).collect();
        if !patterns.contains(&p) {
            patterns.push(p);
        }
    }
    patterns
        .iter()
        .map(|p| {
            let mut x = vec![0.0; dim];
            for (k, &s) in p.iter().enumerate() {
                let t = ratio.powi(k as i32) * (s as f64 + 0.01 * rng.random::<f64>());
                for (xi, li) in x.iter_mut().zip(lines[k].coords()) {
                    *xi += t * li;
                }
            }
            x
        })
        .collect()
}

fn criterion_12(reg: &mut Registry) -> Outcome {
    let mut rng = stream_rng(12, 0);
    let mut valid = 0;
    let mut failures = 0;
    let mut worst_margin = f64::INFINITY;
    let mut attempts = 0;
    while valid < 100 && attempts < 10_000 {
        attempts += 1;
        let m = 1 + attempts % 3;
        let n = (1 << m) + 1;
        let (a, lines, rho) = if attempts % 2 == 0 {
            // planar lines evenly spaced: every direction is within π/(2m)
            let phase = PI * rng.random::<f64>();
            let lines: Vec<UnitVector> = (0..m)
                .map(|k| {
                    let t = phase + PI * k as f64 / m as f64;
                    unit(&[t.cos(), t.sin()])
                })
                .collect();
            let rho = (PI / m as f64 + 0.05 * rng.random::<f64>()).min(PI - 1e-3);
            let rows: Vec<Vec<f64>> = (0..n).map(|_| gaussian_vector(&mut rng, 2)).collect();
            (rows, LineArrangement::new(2, lines).unwrap(), rho)
        } else {
            let dim = 2 + attempts % 2;
            let lines: Vec<UnitVector> = (0..m).map(|_| unit(&random_direction(&mut rng, dim))).collect();
            let rho = 0.2 + rng.random::<f64>();
            let ratio = 50.0 / (0.5 * rho).sin();
            let rows = layered_points(&mut rng, &lines, n, ratio);
            (rows, LineArrangement::new(dim, lines).unwrap(), rho)
        };
        let dim = lines.dim;
        let Ok(set) = PointSet::from_coords(dim, a) else {
            continue;
        };
        let rho_a = Angle::new(rho).unwrap();
        match obtuse_triple_witness(&set, &lines, rho_a) {
            Err(anglebound::Error::ColoringFailed(..)) => continue,
            Err(_) => {
                valid += 1;
                failures += 1;
            }
            Ok(w) => {
                valid += 1;
                let recomputed = angle_at(&w.vi, &w.v, &w.vj).unwrap().radians();
                let members = [&w.vi, &w.v, &w.vj].iter().all(|q| set.iter().any(|x| x == *q));
                let margin = recomputed - (PI - rho);
                worst_margin = worst_margin.min(margin);
                if !members || margin < -1e-9 {
                    failures += 1;
                }
            }
        }
        reg.add("covering witness instance", set);
    }
    outcome(
        valid == 100 && failures == 0,
        format!(
            "{valid} instances ({attempts} drawn), {failures} failures, min (angle − (π − ρ)) = {worst_margin:.3e}"
        ),
    )
}

fn criterion_13(reg: &mut Registry) -> Outcome {
    let a32 = minimize_max_angle(3, 2, 2000, 4, 13).unwrap();
    let a33 = minimize_max_angle(3, 3, 2000, 4, 14).unwrap();
    let a43 = minimize_max_angle(4, 3, 3000, 8, 15).unwrap();
    let pass = a32.achieved_angle.radians() <= FRAC_PI_3 + 1e-3
        && a33.achieved_angle.radians() <= FRAC_PI_3 + 1e-3
        && a43.achieved_angle.radians() <= FRAC_PI_3 + 1e-2;
    let detail = format!(
        "α̂_2(3) = {:.6}°, α̂_3(3) = {:.6}°, α̂_3(4) = {:.6}° (empirical; 109.5° is not attained as a minimum)",
        a32.achieved_angle.degrees(),
        a33.achieved_angle.degrees(),
        a43.achieved_angle.degrees()
    );
    reg.add("search-alpha", a32.points);
    reg.add("search-alpha", a33.points);
    reg.add("search-alpha", a43.points);
    outcome(pass, detail)
}

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_anglebound"))
}

fn run_cli(args: &[&str]) -> bool {
    Command::new(bin())
        .args(args)
        .status()
        .map(|s| s.success())
        .unwrap_or(false)
}

fn criterion_14(dir: &Path, reg: &mut Registry) -> Outcome {
    let runs: [(&str, &[&str]); 6] = [
        ("alpha.json", &["search-alpha", "--n", "5", "--dim", "3", "--iters", "500", "--restarts", "4", "--seed", "3"]),
        ("max.json", &["search-max", "--theta-deg", "115", "--dim", "3", "--budget", "3000", "--seed", "5"]),
        ("pack.json", &["pack-lines", "--m", "5", "--dim", "3", "--iters", "500", "--seed", "9"]),
        ("cover.json", &["cover-lines", "--rho", "1.0", "--dim", "3", "--probes", "20000", "--seed", "2"]),
        ("curv.json", &["curvature", "--in", "CUBE", "--samples", "50000", "--seed", "4"]),
        ("grid.csv", &["table", "--bound-grid", "--dims", "2..6", "--theta-deg", "91..119"]),
    ];
    let cube = dir.join("cube.json");
    let cube_rows: Vec<Vec<f64>> = (0..8)
        .map(|k| (0..3).map(|b| ((k >> b) & 1) as f64).collect())
        .collect();
    std::fs::write(&cube, serde_json::to_string(&ps(3, cube_rows)).unwrap()).unwrap();
    let cube_str = cube.to_string_lossy().into_owned();

    let mut identical = 0;
    let mut notes = Vec::new();
    for (name, args) in runs {
        let out = dir.join(name);
        let out_str = out.to_string_lossy().into_owned();
        let mut full: Vec<&str> = args.iter().map(|a| if *a == "CUBE" { cube_str.as_str() } else { a }).collect();
        full.extend(["--out", out_str.as_str()]);
        if !run_cli(&full) {
            notes.push(format!("{name}: run failed"));
            continue;
        }
        let stem = name.split('.').next().unwrap();
        let manifest = dir.join(format!("{stem}.manifest.json"));
        let r1 = dir.join(format!("{stem}.replay1.out"));
        let r2 = dir.join(format!("{stem}.replay2.out"));
        let ok = run_cli(&["replay", &manifest.to_string_lossy(), "--out", &r1.to_string_lossy()])
            && run_cli(&["replay", &manifest.to_string_lossy(), "--out", &r2.to_string_lossy()]);
        let original = std::fs::read(&out).unwrap_or_default();
        if ok
            && !original.is_empty()
            && original == std::fs::read(&r1).unwrap_or_default()
            && original == std::fs::read(&r2).unwrap_or_default()
        {
            identical += 1;
        } else {
            notes.push(format!("{name}: outputs differ"));
        }
        if name == "alpha.json" || name == "max.json" {
            let v: serde_json::Value = serde_json::from_slice(&original).unwrap_or_default();
            if let Ok(p) = serde_json::from_value::<PointSet>(v["points"].clone()) {
                reg.add("cli search", p);
            }
        }
    }
    outcome(
        identical == runs.len(),
        format!("{identical}/{} manifests replayed byte-identically {}", runs.len(), notes.join("; ")),
    )
}

fn search_sets(reg: &mut Registry) {
    for (dim, deg) in [(2usize, 100.0), (2, 115.0), (3, 95.0), (3, 105.0), (4, 100.0)] {
        let r = max_cardinality_search(Angle::from_degrees(deg).unwrap(), dim, 4000, dim as u64).unwrap();
        reg.add("search-max", r.points);
    }
    for dim in [2usize, 3] {
        for n in 5..=8 {
            let r = minimize_max_angle(n, dim, 800, 2, n as u64).unwrap();
            reg.add("search-alpha", r.points);
        }
    }
}

fn criterion_10(reg: &Registry) -> Outcome {
    let mut checked = 0;
    let mut violations = Vec::new();
    for (source, a) in &reg.sets {
        let dim = a.dim();
        if dim < 2 {
            continue;
        }
        let theta = max_angle(a);
        if theta.radians() >= theta_d(dim).radians() {
            continue;
        }
        checked += 1;
        if a.len() <= 2 {
            continue;
        }
        let bound = cardinality_bound(theta, dim).map(|r| r.bound);
        match bound {
            Ok(b) if a.len() as f64 <= b + 1e-9 => {}
            Ok(b) => violations.push(format!("{source}: |A| = {} > {b}", a.len())),
            Err(e) => violations.push(format!("{source}: {e}")),
        }
    }
    outcome(
        violations.is_empty() && checked > 0,
        format!(
            "{} sets collected, {checked} below θ_D checked, {} violations {}",
            reg.sets.len(),
            violations.len(),
            violations.join("; ")
        ),
    )
}

fn main() {
    let dir = std::env::temp_dir().join(format!("anglebound-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let mut reg = Registry::default();
    let mut results: Vec<(usize, Outcome, Duration, Duration)> = Vec::new();

    macro_rules! timed {
        ($n:expr, $limit:expr, $body:expr) => {{
            let start = Instant::now();
            let o = $body;
            results.push(($n, o, start.elapsed(), $limit));
        }};
    }
    let amortized = Duration::from_secs(600);
    timed!(1, Duration::from_secs(1), criterion_1());
    timed!(2, Duration::from_secs(1), criterion_2());
    timed!(3, Duration::from_secs(5), criterion_3());
    timed!(4, Duration::from_secs(5), criterion_4());
    timed!(5, Duration::from_secs(10), criterion_5());
    timed!(6, Duration::from_secs(30), criterion_6(&mut reg));
    timed!(7, Duration::from_secs(60), criterion_7(&mut reg));
    timed!(8, Duration::from_secs(60), criterion_8());
    timed!(9, Duration::from_secs(30), criterion_9());
    timed!(11, Duration::from_secs(5), criterion_11(&mut reg));
    timed!(12, Duration::from_secs(30), criterion_12(&mut reg));
    timed!(13, Duration::from_secs(120), criterion_13(&mut reg));
    timed!(14, amortized, criterion_14(&dir, &mut reg));
    timed!(10, amortized, {
        search_sets(&mut reg);
        criterion_10(&reg)
    });
    let _ = std::fs::remove_dir_all(&dir);

    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (n, o, took, limit) in &results {
        let pass = o.pass && took <= limit;
        if !pass {
            failed += 1;
        }
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {n:>2}: {verdict} [{:.2}s, limit {}s] {}",
            took.as_secs_f64(),
            limit.as_secs(),
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
