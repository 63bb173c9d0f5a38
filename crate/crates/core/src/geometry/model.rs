use std::fmt;

use super::{exact, Point};
use crate::error::{Error, Result};

/// Smallest Minkowski exponent accepted; the unit ball must stay strictly
/// convex and the norm well conditioned.
pub const MIN_MINKOWSKI_P: f64 = 1.1;
/// Largest Minkowski exponent accepted.
pub const MAX_MINKOWSKI_P: f64 = 16.0;

/// A planar Busemann geometry whose geodesic lines are Euclidean straight
/// lines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeometryModel {
    Euclidean,
    /// The plane with the `l_p` norm.
    Minkowski { p: f64 },
    /// Klein (projective) model of the hyperbolic plane in the open unit disk.
    Klein,
}

impl fmt::Display for GeometryModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryModel::Euclidean => write!(f, "euclidean"),
            GeometryModel::Minkowski { p } => write!(f, "minkowski(p={p})"),
            GeometryModel::Klein => write!(f, "klein"),
        }
    }
}

fn lp_norm(x: f64, y: f64, p: f64) -> f64 {
    let (ax, ay) = (x.abs(), y.abs());
    let m = ax.max(ay);
    if m == 0.0 {
        return 0.0;
    }
    m * ((ax / m).powf(p) + (ay / m).powf(p)).powf(1.0 / p)
}

/// Both parameters `s` where the line `c + s * u` crosses the unit circle, as
/// `(negative root, positive root)`. `c` must lie strictly inside the disk.
fn chord_roots(cx: f64, cy: f64, ux: f64, uy: f64) -> (f64, f64) {
    let uu = ux * ux + uy * uy;
    let k = cx * ux + cy * uy;
    let w = 1.0 - cx * cx - cy * cy;
    let root = (k * k + uu * w).sqrt();
    if k >= 0.0 {
        let q = k + root;
        (-q / uu, w / q)
    } else {
        let q = root - k;
        (-w / q, q / uu)
    }
}

/// Lift of a Klein point onto the hyperboloid `-t^2 + x^2 + y^2 = -1`.
fn hyperboloid(x: f64, y: f64) -> [f64; 3] {
    let s = (1.0 - x * x - y * y).sqrt();
    [1.0 / s, x / s, y / s]
}

impl GeometryModel {
    /// `l_p` plane; `p` must lie in `[MIN_MINKOWSKI_P, MAX_MINKOWSKI_P]`.
    pub fn minkowski(p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::InvalidModel(format!(
                "p = {p}: l_inf is not strictly convex, hence not uniquely geodesic"
            )));
        }
        if p <= 1.0 {
            return Err(Error::InvalidModel(format!(
                "p = {p}: l_p with p <= 1 is not a strictly convex norm"
            )));
        }
        if !(MIN_MINKOWSKI_P..=MAX_MINKOWSKI_P).contains(&p) {
            return Err(Error::InvalidModel(format!(
                "p = {p} outside the supported range [{MIN_MINKOWSKI_P}, {MAX_MINKOWSKI_P}]"
            )));
        }
        Ok(GeometryModel::Minkowski { p })
    }

    pub fn validate_point(&self, q: &Point) -> Result<()> {
        if !q.x().is_finite() || !q.y().is_finite() {
            return Err(Error::Domain(format!("{q:?} is not finite")));
        }
        if matches!(self, GeometryModel::Klein) && !exact::strictly_inside_unit_disk(q) {
            return Err(Error::Domain(format!("{q:?} is not strictly inside the unit disk")));
        }
        Ok(())
    }

    /// Distance with domain checks on both points.
    pub fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        self.validate_point(a)?;
        self.validate_point(b)?;
        Ok(self.metric(a, b))
    }

    /// Distance without domain checks; both points must be valid in the model.
    pub fn metric(&self, a: &Point, b: &Point) -> f64 {
        self.metric_f64((a.x(), a.y()), (b.x(), b.y()))
    }

    pub fn metric_f64(&self, a: (f64, f64), b: (f64, f64)) -> f64 {
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        match *self {
            GeometryModel::Euclidean => dx.hypot(dy),
            GeometryModel::Minkowski { p } => lp_norm(dx, dy, p),
            GeometryModel::Klein => klein_cross_ratio(a, b),
        }
    }

    /// Point at fraction `t` of the geodesic from `a` to `b`, parametrized
    /// proportionally to arc length in the model metric.
    pub fn geodesic_point(&self, a: (f64, f64), b: (f64, f64), t: f64) -> (f64, f64) {
        match self {
            GeometryModel::Euclidean | GeometryModel::Minkowski { .. } => {
                (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
            }
            GeometryModel::Klein => {
                let d = klein_cross_ratio(a, b);
                if d < 1e-12 {
                    return (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
                }
                let ha = hyperboloid(a.0, a.1);
                let hb = hyperboloid(b.0, b.1);
                let (wa, wb) = (((1.0 - t) * d).sinh(), (t * d).sinh());
                let y: Vec<f64> = (0..3).map(|i| wa * ha[i] + wb * hb[i]).collect();
                (y[1] / y[0], y[2] / y[0])
            }
        }
    }

    /// Model distance from `q` to the full geodesic line through `a` and `b`.
    pub fn distance_to_line(&self, q: &Point, a: &Point, b: &Point) -> f64 {
        // normal n with n . z = c on the line
        let (nx, ny) = (-(b.y() - a.y()), b.x() - a.x());
        let c = nx * a.x() + ny * a.y();
        let offset = (nx * q.x() + ny * q.y() - c).abs();
        match *self {
            GeometryModel::Euclidean => offset / nx.hypot(ny),
            GeometryModel::Minkowski { p } => {
                let dual = p / (p - 1.0);
                offset / lp_norm(nx, ny, dual)
            }
            GeometryModel::Klein => {
                let nn = nx * nx + ny * ny - c * c;
                let w = 1.0 - q.x() * q.x() - q.y() * q.y();
                (offset / (w.sqrt() * nn.sqrt())).asinh()
            }
        }
    }

    /// Moves `q` along the unit Euclidean direction `dir` by model distance at
    /// most `len` (equal up to rounding).
    pub fn step_along(&self, q: &Point, dir: (f64, f64), len: f64) -> Result<Point> {
        let (x, y) = match *self {
            GeometryModel::Euclidean => (q.x() + len * dir.0, q.y() + len * dir.1),
            GeometryModel::Minkowski { p } => {
                let s = len / lp_norm(dir.0, dir.1, p);
                (q.x() + s * dir.0, q.y() + s * dir.1)
            }
            GeometryModel::Klein => {
                let (_, hi) = chord_roots(q.x(), q.y(), dir.0, dir.1);
                let (mut lo_s, mut hi_s) = (0.0, hi);
                for _ in 0..200 {
                    let mid = 0.5 * (lo_s + hi_s);
                    let d = klein_cross_ratio((q.x(), q.y()), (q.x() + mid * dir.0, q.y() + mid * dir.1));
                    if d <= len {
                        lo_s = mid;
                    } else {
                        hi_s = mid;
                    }
                }
                (q.x() + lo_s * dir.0, q.y() + lo_s * dir.1)
            }
        };
        let moved = Point::new(x, y)?;
        self.validate_point(&moved)?;
        Ok(moved)
    }
}

/// Klein distance as half the log of the cross-ratio of `a, b` with the chord
/// endpoints.
fn klein_cross_ratio(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (ux, uy) = (b.0 - a.0, b.1 - a.1);
    if ux == 0.0 && uy == 0.0 {
        return 0.0;
    }
    // with A = a + t1 u and B = a + t2 u:
    // |Ab| = (1 - t1)|u|, |aB| = t2 |u|, |Aa| = -t1 |u|, |bB| = (t2 - 1)|u|
    let (a_neg, a_pos) = chord_roots(a.0, a.1, ux, uy);
    let (b_neg, b_pos) = chord_roots(b.0, b.1, ux, uy);
    let num = (-b_neg) * a_pos;
    let den = (-a_neg) * b_pos;
    0.5 * (num / den).ln()
}

/// Klein distance through `cosh d = (1 - a.b) / sqrt((1 - |a|^2)(1 - |b|^2))`.
pub fn klein_distance_acosh(a: &Point, b: &Point) -> f64 {
    let dot = a.x() * b.x() + a.y() * b.y();
    let na = 1.0 - a.x() * a.x() - a.y() * a.y();
    let nb = 1.0 - b.x() * b.x() - b.y() * b.y();
    ((1.0 - dot) / (na * nb).sqrt()).max(1.0).acosh()
}
