//! Moving a configuration into general position one point at a time.
//!
//! Each step takes a collinear triple `p, q, r` with `q` between `p` and `r`
//! and moves `q` perpendicular to the line `p r`. The step is shorter than the
//! model distance from `q` to every line through two other points not
//! collinear with `q`, so no new collinear triple appears, and the triple
//! count strictly drops.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::count_collinear_triples_in;
use super::PointConfig;
use crate::error::{Error, Result};
use crate::geometry::exact::lex_cmp;
use crate::geometry::{collinear, Point};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationStep {
    pub index: usize,
    pub from: (f64, f64),
    pub to: (f64, f64),
    pub collinear_before: usize,
    pub collinear_after: usize,
    /// Distance from the moved point to the nearest forbidden line; infinite
    /// when there is none.
    pub clearance: f64,
    /// Model distance actually moved.
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    pub epsilon: f64,
    /// Step budget `n^3`.
    pub budget: usize,
    pub steps: Vec<PerturbationStep>,
    pub initial_collinear: usize,
    pub final_collinear: usize,
    /// Largest model distance between a point and its final position.
    pub max_displacement: f64,
    /// Largest change of a pairwise distance.
    pub max_distance_drift: f64,
}

/// Orders a collinear triple along its line and returns `(end, middle, end)`.
fn ordered_triple(points: &[Point], t: [usize; 3]) -> (usize, usize, usize) {
    let mut v = t;
    v.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]));
    (v[0], v[1], v[2])
}

fn first_triple(points: &[Point]) -> Option<[usize; 3]> {
    super::config::first_collinear_triple(points)
}

const DIRECTIONS: usize = 8;
const MAX_TILT: f64 = std::f64::consts::FRAC_PI_3;
/// A moved point must stay this fraction of its step away from every line
/// through two other points that it is not exactly on.
const LINE_MARGIN: f64 = 1e-3;

fn clear_of_lines(points: &[Point], q: usize, moved: &Point) -> bool {
    let step = moved.euclidean_distance(&points[q]);
    let n = points.len();
    for a in 0..n {
        for b in a + 1..n {
            if a == q || b == q || collinear(&points[a], &points[b], moved) {
                continue;
            }
            let (pa, pb) = (&points[a], &points[b]);
            let (ux, uy) = (pb.x() - pa.x(), pb.y() - pa.y());
            let h = (ux * (moved.y() - pa.y()) - uy * (moved.x() - pa.x())).abs() / ux.hypot(uy);
            if h < LINE_MARGIN * step {
                return false;
            }
        }
    }
    true
}

/// Perturbs `cfg` into general position, moving every point by less than
/// `eps / 2` in the model metric. Each step pushes the middle point of a
/// collinear triple off its line, normal to it unless that would leave the
/// point (numerically) on another line. Deterministic for a fixed `seed`.
pub fn perturb_to_general_position(cfg: &PointConfig, eps: f64, seed: u64) -> Result<(PointConfig, PerturbationReport)> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidInput(format!("perturbation bound must be positive, got {eps}")));
    }
    let model = cfg.model();
    let n = cfg.len();
    let budget = (n * n * n).max(1);
    let mut points = cfg.points().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial = count_collinear_triples_in(&points);
    let mut count = initial;
    let mut steps = Vec::new();
    let step_cap = eps / (2.0 * budget as f64);

    while let Some(triple) = first_triple(&points) {
        if steps.len() >= budget {
            let report = finish(cfg, &points, eps, budget, steps, initial, count);
            return Err(Error::StepBudgetExhausted {
                budget,
                remaining: count,
                report: Box::new(report),
            });
        }
        let (p, q, r) = ordered_triple(&points, triple);
        let mut clearance = f64::INFINITY;
        for a in 0..n {
            for b in a + 1..n {
                if a == q || b == q || collinear(&points[q], &points[a], &points[b]) {
                    continue;
                }
                clearance = clearance.min(model.distance_to_line(&points[q], &points[a], &points[b]));
            }
        }
        let (ux, uy) = (points[r].x() - points[p].x(), points[r].y() - points[p].y());
        let norm = ux.hypot(uy);
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let normal = (-uy / norm * sign, ux / norm * sign);
        // the normal first, then seeded tilts for when it runs along another line
        let mut dirs = vec![normal];
        for _ in 1..DIRECTIONS {
            let theta: f64 = rng.gen_range(-MAX_TILT..MAX_TILT);
            let (c, s) = (theta.cos(), theta.sin());
            dirs.push((normal.0 * c - normal.1 * s, normal.0 * s + normal.1 * c));
        }
        let mut length = 0.5 * clearance.min(step_cap);
        let mut accepted = None;
        'search: for _ in 0..40 {
            for &dir in &dirs {
                let moved = model.step_along(&points[q], dir, length)?;
                if moved == points[q] || !clear_of_lines(&points, q, &moved) {
                    continue;
                }
                let mut trial = points.clone();
                trial[q] = moved.clone();
                let after = count_collinear_triples_in(&trial);
                if after < count {
                    accepted = Some((moved, after));
                    break 'search;
                }
            }
            length *= 0.5;
        }
        let Some((moved, after)) = accepted else {
            let report = finish(cfg, &points, eps, budget, steps, initial, count);
            return Err(Error::StepBudgetExhausted {
                budget,
                remaining: count,
                report: Box::new(report),
            });
        };
        steps.push(PerturbationStep {
            index: q,
            from: (points[q].x(), points[q].y()),
            to: (moved.x(), moved.y()),
            collinear_before: count,
            collinear_after: after,
            clearance,
            length: model.metric(&points[q], &moved),
        });
        points[q] = moved;
        count = after;
    }

    let report = finish(cfg, &points, eps, budget, steps, initial, count);
    if report.max_displacement >= eps / 2.0 || report.max_distance_drift >= eps {
        return Err(Error::InvariantViolation(format!(
            "perturbation exceeded its bound: displacement {:e}, drift {:e}, epsilon {eps:e}",
            report.max_displacement, report.max_distance_drift
        )));
    }
    let moved = PointConfig::new(model, points, Some(cfg.labels().to_vec()))?;
    Ok((moved, report))
}

fn finish(
    cfg: &PointConfig,
    points: &[Point],
    eps: f64,
    budget: usize,
    steps: Vec<PerturbationStep>,
    initial: usize,
    count: usize,
) -> PerturbationReport {
    let model = cfg.model();
    let n = points.len();
    let max_displacement = (0..n)
        .map(|i| model.metric(cfg.point(i), &points[i]))
        .fold(0.0, f64::max);
    let mut max_distance_drift: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let before = cfg.distance(i, j);
            let after = model.metric(&points[i], &points[j]);
            max_distance_drift = max_distance_drift.max((before - after).abs());
        }
    }
    PerturbationReport {
        epsilon: eps,
        budget,
        steps,
        initial_collinear: initial,
        final_collinear: count,
        max_displacement,
        max_distance_drift,
    }
}
