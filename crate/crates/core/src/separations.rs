//! Equivalence classes of separating lines, their inner bitangents and
//! extremal segments, and the class weights.
//!
//! A line separates a configuration when it misses every point and leaves
//! points on both sides; two separating lines are equivalent when they induce
//! the same bipartition. For each class with sides `Q'` and `Q''` (hulls `K'`
//! and `K''`):
//!
//! * the positive extremal segments are the two inner-bitangent chords
//!   `[p', p'']` and `[q', q'']`,
//! * the negative extremal segments are the hull edges of `K'` inside the
//!   triangle `(p', q', x)` and the hull edges of `K''` inside `(p'', q'', x)`,
//!   where `x` is the crossing of the two bitangent chords,
//! * the weight is the total length of the positive segments minus the total
//!   length of the negative ones. It is never negative.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::convexity::{hull_edges, hull_indices, triangle_region_contains};
use crate::embedding::PointConfig;
use crate::error::{Error, Result};
use crate::geometry::exact::{line_intersection, midpoint, orient, rational_from_f64};
use crate::geometry::{side_of_chord, OrientedLine, Point, Side};

/// Weights below `-SIGMA_FLOOR` (relative to the positive part when that
/// exceeds one) are reported as invariant violations.
pub const SIGMA_FLOOR: f64 = 1e-9;

/// An unordered pair of point indices, stored with `0 <= 1`.
pub type Chord = (usize, usize);

fn chord(a: usize, b: usize) -> Chord {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// One equivalence class of separating lines.
#[derive(Clone, Debug)]
pub struct SeparationClass {
    /// Canonical side: the smaller one, or the one holding the smallest index
    /// on a tie.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// A line with every point of `left` strictly on its left and every point
    /// of `right` strictly on its right.
    pub witness_line: OrientedLine,
    /// The two inner-bitangent chords as `(point of left, point of right)`.
    /// They coincide when both sides are singletons.
    pub positive_segments: [(usize, usize); 2],
    /// Negative extremal segments, sorted.
    pub negative_segments: Vec<Chord>,
    /// A point of `[p', p''] ∩ [q', q'']`.
    pub crossing: Point,
    pub sigma: f64,
}

impl SeparationClass {
    pub fn contains_left(&self, i: usize) -> bool {
        self.left.binary_search(&i).is_ok()
    }

    /// True iff the class puts `i` and `j` on different sides.
    pub fn separates(&self, i: usize, j: usize) -> bool {
        self.contains_left(i) != self.contains_left(j)
    }

    /// Positive segments as unordered chords.
    pub fn positive_chords(&self) -> [Chord; 2] {
        let [(a, b), (c, d)] = self.positive_segments;
        [chord(a, b), chord(c, d)]
    }
}

/// Positive and negative extremal segments of one bipartition.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalSegments {
    pub positive: [(usize, usize); 2],
    pub negative: Vec<Chord>,
    pub crossing: Point,
}

/// Canonical orientation of a bipartition given by a membership mask.
pub fn canonical_sides(in_first: &[bool]) -> (Vec<usize>, Vec<usize>) {
    let first: Vec<usize> = (0..in_first.len()).filter(|&i| in_first[i]).collect();
    let second: Vec<usize> = (0..in_first.len()).filter(|&i| !in_first[i]).collect();
    let first_wins = match first.len().cmp(&second.len()) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => first.first() < second.first(),
    };
    if first_wins {
        (first, second)
    } else {
        (second, first)
    }
}

/// Sort key of a class in the canonical output order.
pub fn canonical_key(left: &[usize]) -> (usize, Vec<usize>) {
    (left.len(), left.to_vec())
}

#[derive(Clone, Copy, Debug)]
enum Split {
    /// `(A + r, B + q)`: rotate the chord clockwise about its midpoint.
    RotateCw,
    /// `(A + q, B + r)`: rotate counterclockwise.
    RotateCcw,
    /// `(A, B + q + r)`: shift towards the left.
    ShiftLeft,
    /// `(A + q + r, B)`: shift towards the right.
    ShiftRight,
}

const WITNESS_HALVINGS: usize = 256;

const SPLITS: [Split; 4] = [Split::RotateCw, Split::RotateCcw, Split::ShiftLeft, Split::ShiftRight];

/// Every line-separable bipartition of `cfg`, in canonical order, each with a
/// witness line, extremal segments and weight.
///
/// Candidates come from lines through pairs of points: the line through `q, r`
/// splits the rest into `A` (left) and `B` (right), and the four ways of
/// assigning `q, r` to the sides are all line-separable. Every separable
/// bipartition arises this way by rotating a separating line until it touches
/// two points.
pub fn enumerate_classes(cfg: &PointConfig) -> Result<Vec<SeparationClass>> {
    cfg.require_general_position()?;
    let n = cfg.len();
    if n < 2 {
        return Err(Error::InvalidInput("need at least two points to separate".into()));
    }
    let pts = cfg.points();
    let mut found: BTreeMap<(usize, Vec<usize>), (Vec<usize>, OrientedLine)> = BTreeMap::new();
    for q in 0..n {
        for r in q + 1..n {
            let sides: Vec<Side> = (0..n).map(|k| side_of_chord(&pts[q], &pts[r], &pts[k])).collect();
            for split in SPLITS {
                let mut first: Vec<bool> = sides.iter().map(|s| *s == Side::Left).collect();
                match split {
                    Split::RotateCw => first[r] = true,
                    Split::RotateCcw => first[q] = true,
                    Split::ShiftLeft => {}
                    Split::ShiftRight => {
                        first[q] = true;
                        first[r] = true;
                    }
                }
                let count = first.iter().filter(|b| **b).count();
                if count == 0 || count == n {
                    continue;
                }
                let (left, right) = canonical_sides(&first);
                let key = canonical_key(&left);
                if found.contains_key(&key) {
                    continue;
                }
                let mut line = witness_line(pts, q, r, split, &first)?;
                if !first[left[0]] {
                    line = line.reversed();
                }
                found.insert(key, (right, line));
            }
        }
    }
    found
        .into_par_iter()
        .map(|((_, left), (right, line))| build_class(cfg, left, right, line))
        .collect()
}

/// Builds the class for a known separable bipartition.
pub fn build_class(
    cfg: &PointConfig,
    left: Vec<usize>,
    right: Vec<usize>,
    witness_line: OrientedLine,
) -> Result<SeparationClass> {
    let seg = segments_for(cfg, &left, &right)?;
    let sigma = weight(cfg, &seg.positive, &seg.negative)?;
    Ok(SeparationClass {
        left,
        right,
        witness_line,
        positive_segments: seg.positive,
        negative_segments: seg.negative,
        crossing: seg.crossing,
        sigma,
    })
}

/// Offsets or tilts the chord `q -> r` so that exactly the points flagged in
/// `first` end up strictly on its left. The line is built from exact points
/// and validated with exact predicates, so near-degenerate inputs only cost
/// more halvings.
fn witness_line(pts: &[Point], q: usize, r: usize, split: Split, first: &[bool]) -> Result<OrientedLine> {
    let (a, b) = (&pts[q], &pts[r]);
    let (ux, uy) = (b.x() - a.x(), b.y() - a.y());
    let len = ux.hypot(uy);
    let (mx, my) = (0.5 * (a.x() + b.x()), 0.5 * (a.y() + b.y()));
    let mut clearance = f64::INFINITY;
    let mut reach: f64 = 0.5 * len;
    for (k, p) in pts.iter().enumerate() {
        if k == q || k == r {
            continue;
        }
        clearance = clearance.min((ux * (p.y() - a.y()) - uy * (p.x() - a.x())).abs() / len);
        reach = reach.max((p.x() - mx).hypot(p.y() - my));
    }
    if !clearance.is_finite() {
        clearance = len;
    }
    // moving by t times the left normal (-uy, ux) shifts by t * len
    let start = 0.5 * clearance / (len * len.max(2.0 * reach));
    let start = if start.is_normal() { start } else { f64::EPSILON };
    let mut t = rational_from_f64(start);
    let (ex, ey) = (b.exact_x() - a.exact_x(), b.exact_y() - a.exact_y());
    let mid = midpoint(a, b);
    let two = BigRational::from_integer(2.into());
    for _ in 0..WITNESS_HALVINGS {
        let sign = match split {
            Split::ShiftLeft | Split::RotateCcw => t.clone(),
            Split::ShiftRight | Split::RotateCw => -t.clone(),
        };
        let (nx, ny) = (-&ey * &sign, &ex * &sign);
        let toward = Point::from_exact(b.exact_x() + &nx, b.exact_y() + &ny);
        let anchor = match split {
            Split::ShiftLeft | Split::ShiftRight => Point::from_exact(a.exact_x() + &nx, a.exact_y() + &ny),
            Split::RotateCcw | Split::RotateCw => mid.clone(),
        };
        let line = OrientedLine::through(&anchor, &toward)?;
        let ok = pts.iter().enumerate().all(|(k, p)| {
            let side = line.side_of(p);
            if first[k] {
                side == Side::Left
            } else {
                side == Side::Right
            }
        });
        if ok {
            return Ok(line);
        }
        t /= &two;
    }
    Err(Error::InvariantViolation(format!("no witness line found near chord ({q}, {r})")))
}

/// Tangent point on hull `hp` as seen from `s`, keeping `hp` on the `want`
/// side of the directed line `p -> s`.
fn tangent_from_far(pts: &[Point], hp: &[usize], s: usize, want: Ordering) -> usize {
    let mut best = hp[0];
    for &v in &hp[1..] {
        if orient(&pts[best], &pts[s], &pts[v]) == want.reverse() {
            best = v;
        }
    }
    best
}

/// Tangent point on hull `hs` as seen from `p`, keeping `hs` on the side
/// opposite to `want` of the directed line `p -> s`.
fn tangent_from_near(pts: &[Point], hs: &[usize], p: usize, want: Ordering) -> usize {
    let mut best = hs[0];
    for &w in &hs[1..] {
        if orient(&pts[p], &pts[best], &pts[w]) == want {
            best = w;
        }
    }
    best
}

/// The inner bitangent `p -> s` with `hp` on the `want` side (`Greater` for
/// left) and `hs` on the other side, found by alternating tangent updates.
fn bitangent(pts: &[Point], hp: &[usize], hs: &[usize], want: Ordering) -> Result<(usize, usize)> {
    let mut p = hp[0];
    let mut s = tangent_from_near(pts, hs, p, want);
    let cap = 2 * (hp.len() + hs.len()) + 4;
    let mut settled = false;
    for _ in 0..cap {
        let p2 = tangent_from_far(pts, hp, s, want);
        let s2 = tangent_from_near(pts, hs, p2, want);
        if p2 == p && s2 == s {
            settled = true;
            break;
        }
        p = p2;
        s = s2;
    }
    let holds = settled
        && hp.iter().all(|&v| v == p || orient(&pts[p], &pts[s], &pts[v]) == want)
        && hs.iter().all(|&w| w == s || orient(&pts[p], &pts[s], &pts[w]) == want.reverse());
    if holds {
        Ok((p, s))
    } else {
        Err(Error::HullsIntersect)
    }
}

/// The two inner-bitangent chords of the hulls of `left` and `right`, each as
/// `(point of left, point of right)`. The first keeps `left` on its left when
/// directed from left to right, the second keeps it on its right.
pub fn inner_bitangents(cfg: &PointConfig, left: &[usize], right: &[usize]) -> Result<[(usize, usize); 2]> {
    if left.is_empty() || right.is_empty() {
        return Err(Error::InvalidInput("both sides must be nonempty".into()));
    }
    let pts = cfg.points();
    let hl = hull_indices(pts, left);
    let hr = hull_indices(pts, right);
    Ok([
        bitangent(pts, &hl, &hr, Ordering::Greater)?,
        bitangent(pts, &hl, &hr, Ordering::Less)?,
    ])
}

fn segments_for(cfg: &PointConfig, left: &[usize], right: &[usize]) -> Result<ExtremalSegments> {
    let pts = cfg.points();
    let positive = inner_bitangents(cfg, left, right)?;
    let [(p1, p2), (q1, q2)] = positive;
    let crossing = if positive[0] == positive[1] {
        midpoint(&pts[p1], &pts[p2])
    } else if p1 == q1 {
        pts[p1].clone()
    } else if p2 == q2 {
        pts[p2].clone()
    } else {
        line_intersection(&pts[p1], &pts[p2], &pts[q1], &pts[q2])
            .ok_or_else(|| Error::InvariantViolation("parallel inner bitangents".into()))?
    };
    let mut negative = Vec::new();
    for (side, a, b) in [(left, p1, q1), (right, p2, q2)] {
        let hull = hull_indices(pts, side);
        let mut facing: Vec<Chord> = hull_edges(&hull)
            .into_iter()
            .filter(|&(u, v)| {
                triangle_region_contains(&pts[a], &pts[b], &crossing, &pts[u])
                    && triangle_region_contains(&pts[a], &pts[b], &crossing, &pts[v])
            })
            .map(|(u, v)| chord(u, v))
            .collect();
        // when the hull lies inside the triangle, [p', q'] is the back edge,
        // not part of the chain facing the other side
        if facing.len() > 1 {
            facing.retain(|&c| c != chord(a, b));
        }
        negative.extend(facing);
    }
    negative.sort_unstable();
    Ok(ExtremalSegments {
        positive,
        negative,
        crossing,
    })
}

/// Extremal segments of a class, recomputed from its bipartition.
pub fn extremal_segments(cfg: &PointConfig, cls: &SeparationClass) -> Result<ExtremalSegments> {
    segments_for(cfg, &cls.left, &cls.right)
}

fn weight(cfg: &PointConfig, positive: &[(usize, usize); 2], negative: &[Chord]) -> Result<f64> {
    let plus: f64 = positive.iter().map(|&(a, b)| cfg.distance(a, b)).sum();
    let minus: f64 = negative.iter().map(|&(a, b)| cfg.distance(a, b)).sum();
    let sigma = plus - minus;
    if sigma < -SIGMA_FLOOR * plus.max(1.0) {
        return Err(Error::InvariantViolation(format!(
            "negative class weight {sigma:e}: positive segments {positive:?} ({plus}), negative segments {negative:?} ({minus})"
        )));
    }
    Ok(sigma)
}

/// Weight of a class from its stored extremal segments, with the
/// nonnegativity check.
pub fn sigma(cfg: &PointConfig, cls: &SeparationClass) -> Result<f64> {
    weight(cfg, &cls.positive_segments, &cls.negative_segments)
}

/// The weight split into the contributions of the two sides:
/// `d(x, p') + d(x, q')` minus the negative edges of `K'`, and the same for
/// `K''`. Their sum equals the weight.
pub fn sigma_split(cfg: &PointConfig, cls: &SeparationClass) -> (f64, f64) {
    let model = cfg.model();
    let x = &cls.crossing;
    let [(p1, p2), (q1, q2)] = cls.positive_segments;
    let mut first = model.metric(x, cfg.point(p1)) + model.metric(x, cfg.point(q1));
    let mut second = model.metric(x, cfg.point(p2)) + model.metric(x, cfg.point(q2));
    for &(a, b) in &cls.negative_segments {
        let d = cfg.distance(a, b);
        if cls.contains_left(a) {
            first -= d;
        } else {
            second -= d;
        }
    }
    (first, second)
}
