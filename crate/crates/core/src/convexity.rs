//! Convex hulls with their circular order of extremal points, tangency,
//! cones and closed triangles.
//!
//! Geodesics are straight chords in every supported model, so the convex hull
//! of a point set in the model is the Euclidean hull of its coordinates.

use std::cmp::Ordering;

use crate::geometry::exact::{lex_cmp, orient};
use crate::geometry::{collinear, on_segment, GeometryModel, OrientedLine, Point, Side};

/// Convex hull of a finite point set.
///
/// `extremal` lists indices into the input in counterclockwise order starting
/// at the lexicographically smallest extremal point. Degenerate inputs give a
/// single point or the two endpoints of a segment.
#[derive(Clone, Debug, PartialEq)]
pub struct Hull {
    pub extremal: Vec<usize>,
    pub vertices: Vec<Point>,
}

impl Hull {
    pub fn len(&self) -> usize {
        self.extremal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extremal.is_empty()
    }

    /// Consecutive pairs of the circular order. A segment hull has one edge,
    /// a point hull none.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        hull_edges(&self.extremal)
    }

    pub fn is_degenerate(&self) -> bool {
        self.extremal.len() < 3
    }
}

pub(crate) fn hull_edges(cycle: &[usize]) -> Vec<(usize, usize)> {
    match cycle.len() {
        0 | 1 => Vec::new(),
        2 => vec![(cycle[0], cycle[1])],
        k => (0..k).map(|i| (cycle[i], cycle[(i + 1) % k])).collect(),
    }
}

/// Counterclockwise strictly extremal points among `points[subset]`, as
/// indices into `points`. Andrew's monotone chain on exact predicates.
pub fn hull_indices(points: &[Point], subset: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = subset.to_vec();
    idx.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]));
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() <= 2 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in &idx {
        while lower.len() >= 2
            && orient(&points[lower[lower.len() - 2]], &points[lower[lower.len() - 1]], &points[i])
                != Ordering::Greater
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && orient(&points[upper[upper.len() - 2]], &points[upper[upper.len() - 1]], &points[i])
                != Ordering::Greater
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    lower
}

pub fn convex_hull(pts: &[Point]) -> Hull {
    let all: Vec<usize> = (0..pts.len()).collect();
    let extremal = hull_indices(pts, &all);
    let vertices = extremal.iter().map(|&i| pts[i].clone()).collect();
    Hull { extremal, vertices }
}

/// A line is tangent to a hull when it meets it and keeps it in one closed
/// halfplane.
pub fn is_tangent(l: &OrientedLine, h: &Hull) -> bool {
    let mut left = false;
    let mut right = false;
    let mut touch = false;
    for v in &h.vertices {
        match l.side_of(v) {
            Side::Left => left = true,
            Side::Right => right = true,
            Side::On => touch = true,
        }
    }
    touch && !(left && right)
}

/// Membership of `z` in the cone `C(x, y) = { z : x in [y, z] }`.
///
/// Decided exactly; additionally the metric identity
/// `d(y, x) + d(x, z) = d(y, z)` has to hold within `tol`.
pub fn in_cone(g: &GeometryModel, x: &Point, y: &Point, z: &Point, tol: f64) -> bool {
    if !on_segment(y, z, x) {
        return false;
    }
    cone_metric_defect(g, x, y, z) <= tol
}

/// `|d(y, x) + d(x, z) - d(y, z)|`.
pub fn cone_metric_defect(g: &GeometryModel, x: &Point, y: &Point, z: &Point) -> f64 {
    (g.metric(y, x) + g.metric(x, z) - g.metric(y, z)).abs()
}

/// `p` in the closed triangle with vertices `a, b, c` (a segment or a point if
/// the vertices are collinear).
pub fn triangle_region_contains(a: &Point, b: &Point, c: &Point, p: &Point) -> bool {
    if collinear(a, b, c) {
        // the region is the segment spanned by the two extreme vertices
        let mut v = [a, b, c];
        v.sort_by(|s, t| lex_cmp(s, t));
        return on_segment(v[0], v[2], p);
    }
    let o1 = orient(a, b, p);
    let o2 = orient(b, c, p);
    let o3 = orient(c, a, p);
    let has_pos = [o1, o2, o3].contains(&Ordering::Greater);
    let has_neg = [o1, o2, o3].contains(&Ordering::Less);
    !(has_pos && has_neg)
}
