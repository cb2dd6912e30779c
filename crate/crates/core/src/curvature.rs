//! Normal-cone fractions, enclosing caps and cone-cover certificates.
//!
//! For a convex polytope with vertices `v_1..v_n`, the outward normal cone at
//! `v_i` is the set of directions `u` with `u·(v_j − v_i) ≤ 0` for every `j`.
//! The fractions `f_i` of the unit sphere covered by these cones add up to 1.
//! If all edges leaving every vertex fit in a circular cone of half-angle
//! `η`, each `f_i` is at least `f_{D−1}(η)`, which caps `n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::dekster_inverse;
use crate::convexity::is_convex_position;
use crate::error::{Error, Result};
use crate::geometry::{dot, norm, rays_from, sub, Angle, Point, PointSet, UnitVector};
use crate::linalg;
use crate::rng::{random_direction, stream_rng};

/// Directions drawn per seeded stream.
pub const SAMPLE_BLOCK: usize = 4096;

/// Minimum sample count accepted by the Monte Carlo estimators.
pub const MIN_SAMPLES: usize = 1000;

const HEMISPHERE_TOL: f64 = 1e-9;
const BALL_TOL: f64 = 1e-10;

/// `apex + {x : axis·x ≥ |x| cos(half_angle)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cone {
    pub apex: Point,
    pub axis: UnitVector,
    pub half_angle: Angle,
}

impl Cone {
    pub fn new(apex: Point, axis: UnitVector, half_angle: Angle) -> Result<Self> {
        let h = half_angle.radians();
        if !(h > 0.0 && h < std::f64::consts::FRAC_PI_2) {
            return Err(Error::OutOfRange(format!(
                "cone half-angle {h} not in (0, π/2)"
            )));
        }
        if apex.dim() != axis.dim() {
            return Err(Error::InvalidPointSet("cone apex and axis dimensions differ".into()));
        }
        Ok(Cone {
            apex,
            axis,
            half_angle,
        })
    }

    /// Membership with a relative slack of `1e-12`.
    pub fn contains(&self, p: &Point) -> bool {
        let v = sub(p.coords(), self.apex.coords());
        let n = norm(&v);
        n == 0.0 || dot(&v, self.axis.coords()) >= n * (self.half_angle.radians().cos() - 1e-12)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalCap {
    pub center: UnitVector,
    pub radius: Angle,
}

impl SphericalCap {
    pub fn contains(&self, h: &UnitVector, tol: f64) -> bool {
        h.dot(&self.center) >= self.radius.radians().cos() - tol
    }
}

/// Per-vertex normal-cone fractions from one shared direction sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureEstimate {
    pub fractions: Vec<f64>,
    pub counts: Vec<u64>,
    pub samples: usize,
    pub seed: u64,
    pub std_error: Vec<f64>,
}

fn binomial_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Runs `tally` over `samples` seeded directions, block by block in
/// parallel, and sums the per-block count vectors.
fn sample_counts<F>(dim: usize, samples: usize, seed: u64, slots: usize, tally: F) -> Vec<u64>
where
    F: Fn(&[f64], &mut [u64]) + Sync,
{
    let blocks = samples.div_ceil(SAMPLE_BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b as u64);
            let len = SAMPLE_BLOCK.min(samples - b * SAMPLE_BLOCK);
            let mut counts = vec![0u64; slots];
            for _ in 0..len {
                let u = random_direction(&mut rng, dim);
                tally(&u, &mut counts);
            }
            counts
        })
        .reduce(
            || vec![0u64; slots],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

fn require_convex(v: &PointSet) -> Result<()> {
    let verdict = is_convex_position(v);
    match verdict.witness_index {
        Some(i) if !verdict.in_convex_position => Err(Error::NotConvexPosition(i)),
        _ => Ok(()),
    }
}

/// Monte Carlo estimate of the normal-cone fraction at vertex `i`, with its
/// binomial standard error.
pub fn normal_cone_fraction_mc(
    v: &PointSet,
    i: usize,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if i >= v.len() {
        return Err(Error::OutOfRange(format!("vertex index {i} out of range")));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::OutOfRange(format!("need at least {MIN_SAMPLES} samples")));
    }
    require_convex(v)?;
    let edges: Vec<Vec<f64>> = v
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, p)| sub(p.coords(), v.point(i).coords()))
        .collect();
    let counts = sample_counts(v.dim(), samples, seed, 1, |u, c| {
        if edges.iter().all(|e| dot(u, e) <= 0.0) {
            c[0] += 1;
        }
    });
    let f = counts[0] as f64 / samples as f64;
    Ok((f, binomial_se(f, samples)))
}

/// Normal-cone fractions for all vertices from a shared sample: each
/// direction goes to the vertex maximizing `u·v_i` (lowest index on ties),
/// so the counts always add up to `samples`.
pub fn gauss_bonnet_sum(v: &PointSet, samples: usize, seed: u64) -> Result<CurvatureEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::OutOfRange(format!("need at least {MIN_SAMPLES} samples")));
    }
    require_convex(v)?;
    let rank = v.affine_rank();
    if rank < v.dim() {
        return Err(Error::DegenerateHull {
            rank,
            dim: v.dim(),
        });
    }
    let counts = sample_counts(v.dim(), samples, seed, v.len(), |u, c| {
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (j, p) in v.iter().enumerate() {
            let s = dot(u, p.coords());
            if s > best_val {
                best_val = s;
                best = j;
            }
        }
        c[best] += 1;
    });
    let fractions: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
    let std_error = fractions.iter().map(|&f| binomial_se(f, samples)).collect();
    Ok(CurvatureEstimate {
        fractions,
        counts,
        samples,
        seed,
        std_error,
    })
}

/// Smallest `R` with `diam ≤ 2 arcsin(sin(θ_d/2) sin R)`; same formula as
/// [`crate::bounds::eta_of_theta`] but defined at `diam = 0` too.
pub fn dekster_radius(diam: Angle, d: usize) -> Result<Angle> {
    dekster_inverse(diam, d)
}

struct Ball {
    center: Vec<f64>,
    r2: f64,
}

impl Ball {
    fn contains(&self, p: &[f64]) -> bool {
        let d2: f64 = p
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        d2 <= self.r2 * (1.0 + BALL_TOL) + BALL_TOL * BALL_TOL
    }
}

/// Smallest ball with all of `support` on its boundary, centred in their
/// affine hull.
fn ball_through(support: &[Vec<f64>], dim: usize) -> Ball {
    match support.len() {
        0 => Ball {
            center: vec![0.0; dim],
            r2: -1.0,
        },
        1 => Ball {
            center: support[0].clone(),
            r2: 0.0,
        },
        k => {
            let p0 = &support[0];
            let diffs: Vec<Vec<f64>> = support[1..].iter().map(|p| sub(p, p0)).collect();
            let a = linalg::columns(&diffs, dim);
            let gram = a.transpose() * &a;
            let rhs = nalgebra::DVector::from_iterator(
                k - 1,
                diffs.iter().map(|d| 0.5 * dot(d, d)),
            );
            let alpha = linalg::lstsq(&gram, &rhs).unwrap_or_else(|| nalgebra::DVector::zeros(k - 1));
            let offset = &a * alpha;
            let center: Vec<f64> = p0.iter().zip(offset.iter()).map(|(x, o)| x + o).collect();
            let r2 = support
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(&center)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                })
                .fold(0.0f64, f64::max);
            Ball { center, r2 }
        }
    }
}

/// Move-to-front minimal enclosing ball over `pts[..end]` with `support`
/// forced onto the boundary.
fn mtf_ball(pts: &mut Vec<Vec<f64>>, end: usize, support: &mut Vec<Vec<f64>>, dim: usize) -> Ball {
    let mut ball = ball_through(support, dim);
    if support.len() == dim + 1 {
        return ball;
    }
    for i in 0..end {
        if !ball.contains(&pts[i]) {
            support.push(pts[i].clone());
            ball = mtf_ball(pts, i, support, dim);
            support.pop();
            let p = pts.remove(i);
            pts.insert(0, p);
        }
    }
    ball
}

/// Smallest Euclidean ball containing `points`, as `(center, radius)`.
pub fn min_enclosing_ball(points: &[Vec<f64>]) -> (Vec<f64>, f64) {
    assert!(!points.is_empty(), "min_enclosing_ball needs a point");
    let dim = points[0].len();
    let mut pts = points.to_vec();
    let mut support = Vec::with_capacity(dim + 1);
    let ball = mtf_ball(&mut pts, points.len(), &mut support, dim);
    (ball.center, ball.r2.max(0.0).sqrt())
}

/// Smallest spherical cap containing `h`, obtained from the minimal
/// enclosing Euclidean ball of the points.
pub fn min_enclosing_cap(h: &[UnitVector]) -> Result<SphericalCap> {
    if h.is_empty() {
        return Err(Error::OutOfRange("empty set has no enclosing cap".into()));
    }
    let pts: Vec<Vec<f64>> = h.iter().map(|u| u.coords().to_vec()).collect();
    let (c, _) = min_enclosing_ball(&pts);
    let nc = norm(&c);
    if nc <= HEMISPHERE_TOL {
        return Err(Error::NotHemispherical);
    }
    let center = UnitVector::normalize(&c).map_err(|_| Error::NotHemispherical)?;
    let min_dot = h.iter().map(|u| u.dot(&center)).fold(1.0f64, f64::min);
    if min_dot <= 0.0 {
        return Err(Error::NotHemispherical);
    }
    Ok(SphericalCap {
        center,
        radius: Angle::from_cos(min_dot),
    })
}

/// One cone per vertex with apex `v_i`, axis the enclosing-cap centre of the
/// rays leaving `v_i`, and half-angle `eta`; every vertex of `v` is checked
/// to lie in every cone.
pub fn cone_cover_certificate(v: &PointSet, eta: Angle) -> Result<Vec<Cone>> {
    if !(eta.radians() > 0.0 && eta.radians() < std::f64::consts::FRAC_PI_2) {
        return Err(Error::OutOfRange(format!(
            "eta {} not in (0, π/2)",
            eta.radians()
        )));
    }
    require_convex(v)?;
    let mut cones = Vec::with_capacity(v.len());
    for i in 0..v.len() {
        let apex = v.point(i).clone();
        let others = v.without(i);
        let axis = if others.is_empty() {
            UnitVector::axis(v.dim(), 0)
        } else {
            let rays = rays_from(&apex, &others)?;
            let cap = min_enclosing_cap(&rays).map_err(|_| Error::CapTooSmall {
                vertex: i,
                required: std::f64::consts::FRAC_PI_2,
                eta: eta.radians(),
            })?;
            if cap.radius.radians() > eta.radians() + 1e-12 {
                return Err(Error::CapTooSmall {
                    vertex: i,
                    required: cap.radius.radians(),
                    eta: eta.radians(),
                });
            }
            cap.center
        };
        cones.push(Cone::new(apex, axis, eta)?);
    }
    for (i, cone) in cones.iter().enumerate() {
        if let Some(j) = (0..v.len()).find(|&j| !cone.contains(v.point(j))) {
            return Err(Error::CapTooSmall {
                vertex: i,
                required: {
                    let r = UnitVector::normalize(&sub(v.point(j).coords(), cone.apex.coords()))?;
                    Angle::from_cos(r.dot(&cone.axis)).radians()
                },
                eta: eta.radians(),
            });
        }
    }
    Ok(cones)
}
