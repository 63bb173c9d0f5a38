//! Random configurations and brute-force oracles shared by the integration
//! tests. Nothing here calls into the enumeration or bitangent code it checks.
#![allow(dead_code)]

use std::collections::BTreeSet;

use crofton_core::geometry::{collinear, segments_intersect, side_of_chord, Side};
use crofton_core::convexity::triangle_region_contains;
use crofton_core::{GeometryModel, Point, PointConfig};
use rand::Rng;

pub fn models() -> [GeometryModel; 3] {
    [
        GeometryModel::Euclidean,
        GeometryModel::minkowski(3.0).unwrap(),
        GeometryModel::Klein,
    ]
}

pub fn point_in_disk<R: Rng>(rng: &mut R, radius: f64) -> Point {
    loop {
        let x: f64 = rng.gen_range(-radius..radius);
        let y: f64 = rng.gen_range(-radius..radius);
        if x * x + y * y < radius * radius {
            return Point::new(x, y).unwrap();
        }
    }
}

/// `n` random points in the disk of radius 0.95, redrawn until in general
/// position.
pub fn random_config<R: Rng>(rng: &mut R, model: GeometryModel, n: usize) -> PointConfig {
    loop {
        let pts: Vec<Point> = (0..n).map(|_| point_in_disk(rng, 0.95)).collect();
        if let Ok(cfg) = PointConfig::new(model, pts, None) {
            if cfg.is_general_position() {
                return cfg;
            }
        }
    }
}

pub fn pt(x: f64, y: f64) -> Point {
    Point::new(x, y).unwrap()
}

pub fn euclid(pts: &[(f64, f64)]) -> PointConfig {
    PointConfig::new(
        GeometryModel::Euclidean,
        pts.iter().map(|&(x, y)| pt(x, y)).collect(),
        None,
    )
    .unwrap()
}

/// Canonical side of a bipartition given by a membership mask: the smaller
/// side, or the one with the smallest index on a tie.
pub fn canonical(mask: &[bool]) -> Vec<usize> {
    let a: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
    let b: Vec<usize> = (0..mask.len()).filter(|&i| !mask[i]).collect();
    if a.len() < b.len() || (a.len() == b.len() && a.first() < b.first()) {
        a
    } else {
        b
    }
}

/// Pair-anchored oracle: for every chord, the four ways of putting its
/// endpoints on the sides of the split it induces on the other points.
pub fn pair_anchored_classes(cfg: &PointConfig) -> BTreeSet<Vec<usize>> {
    let n = cfg.len();
    let p = cfg.points();
    let mut out = BTreeSet::new();
    for q in 0..n {
        for r in 0..n {
            if q == r {
                continue;
            }
            let base: Vec<bool> = (0..n).map(|k| side_of_chord(&p[q], &p[r], &p[k]) == Side::Left).collect();
            for (in_q, in_r) in [(false, true), (true, false), (false, false), (true, true)] {
                let mut m = base.clone();
                m[q] = in_q;
                m[r] = in_r;
                let count = m.iter().filter(|b| **b).count();
                if count > 0 && count < n {
                    out.insert(canonical(&m));
                }
            }
        }
    }
    out
}

/// True iff the convex hulls of `a` and `b` (points in general position)
/// intersect: a point of one inside a triangle of the other, or two crossing
/// segments.
pub fn hulls_intersect(p: &[Point], a: &[usize], b: &[usize]) -> bool {
    let inside = |s: &[usize], t: &[usize]| {
        s.iter().any(|&x| {
            (0..t.len()).any(|i| {
                (i + 1..t.len()).any(|j| {
                    (j + 1..t.len()).any(|k| triangle_region_contains(&p[t[i]], &p[t[j]], &p[t[k]], &p[x]))
                })
            })
        })
    };
    if inside(a, b) || inside(b, a) {
        return true;
    }
    for i in 0..a.len() {
        for j in i..a.len() {
            for k in 0..b.len() {
                for l in k..b.len() {
                    if segments_intersect(&p[a[i]], &p[a[j]], &p[b[k]], &p[b[l]]) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Subset oracle: every bipartition whose two hulls are disjoint.
pub fn subset_classes(cfg: &PointConfig) -> BTreeSet<Vec<usize>> {
    let n = cfg.len();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << (n - 1)) {
        let m: Vec<bool> = (0..n).map(|i| i < n - 1 && mask >> i & 1 == 1).collect();
        let a: Vec<usize> = (0..n).filter(|&i| m[i]).collect();
        let b: Vec<usize> = (0..n).filter(|&i| !m[i]).collect();
        if !hulls_intersect(cfg.points(), &a, &b) {
            out.insert(canonical(&m));
        }
    }
    out
}

/// Does the line through `u, v` keep `a` in one closed halfplane and `b` in
/// the other?
pub fn weakly_separates(p: &[Point], u: usize, v: usize, a: &[usize], b: &[usize]) -> bool {
    let sides = |s: &[usize]| {
        let left = s.iter().any(|&k| side_of_chord(&p[u], &p[v], &p[k]) == Side::Left);
        let right = s.iter().any(|&k| side_of_chord(&p[u], &p[v], &p[k]) == Side::Right);
        (left, right)
    };
    let (al, ar) = sides(a);
    let (bl, br) = sides(b);
    (!ar && !bl) || (!al && !br)
}

fn chord(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// All chords with one endpoint on each side whose line weakly separates the
/// sides.
pub fn brute_positive(cfg: &PointConfig, a: &[usize], b: &[usize]) -> BTreeSet<(usize, usize)> {
    let p = cfg.points();
    let mut out = BTreeSet::new();
    for &u in a {
        for &v in b {
            if weakly_separates(p, u, v, a, b) {
                out.insert(chord(u, v));
            }
        }
    }
    out
}

/// All same-side chords whose line weakly separates the sides.
pub fn brute_negative(cfg: &PointConfig, a: &[usize], b: &[usize]) -> BTreeSet<(usize, usize)> {
    let p = cfg.points();
    let mut out = BTreeSet::new();
    for side in [a, b] {
        for (i, &u) in side.iter().enumerate() {
            for &v in &side[i + 1..] {
                if weakly_separates(p, u, v, a, b) {
                    out.insert(chord(u, v));
                }
            }
        }
    }
    out
}

pub fn no_collinear_triple(p: &[Point]) -> bool {
    let n = p.len();
    (0..n).all(|i| (i + 1..n).all(|j| (j + 1..n).all(|k| !collinear(&p[i], &p[j], &p[k]))))
}
