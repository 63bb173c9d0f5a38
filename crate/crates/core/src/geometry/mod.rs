//! Points, oriented lines and the exact predicates every other module builds
//! on, plus the three metric backends in [`model`].

pub mod exact;
mod model;

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use model::{klein_distance_acosh, GeometryModel, MAX_MINKOWSKI_P, MIN_MINKOWSKI_P};

/// A point of the model plane.
///
/// Coordinates are held twice: as exact rationals, which drive every
/// predicate, and as the nearest doubles, which drive distances.
#[derive(Clone)]
pub struct Point {
    x: f64,
    y: f64,
    ex: BigRational,
    ey: BigRational,
}

impl Point {
    /// Point with the exact value of two finite doubles.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite coordinate ({x}, {y})")));
        }
        Ok(Self {
            x,
            y,
            ex: exact::rational_from_f64(x),
            ey: exact::rational_from_f64(y),
        })
    }

    /// Point read from decimal literals; the literals are kept exactly.
    pub fn from_decimal(x: &str, y: &str) -> Result<Self> {
        let ex = exact::parse_decimal(x)?;
        let ey = exact::parse_decimal(y)?;
        let fx: f64 = x.trim().parse().map_err(|_| Error::InvalidInput(x.to_string()))?;
        let fy: f64 = y.trim().parse().map_err(|_| Error::InvalidInput(y.to_string()))?;
        if !fx.is_finite() || !fy.is_finite() {
            return Err(Error::InvalidInput(format!("coordinate overflows a double: ({x}, {y})")));
        }
        Ok(Self { x: fx, y: fy, ex, ey })
    }

    pub fn from_exact(ex: BigRational, ey: BigRational) -> Self {
        let x = ex.to_f64().unwrap_or(f64::NAN);
        let y = ey.to_f64().unwrap_or(f64::NAN);
        Self { x, y, ex, ey }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn exact_x(&self) -> &BigRational {
        &self.ex
    }

    pub fn exact_y(&self) -> &BigRational {
        &self.ey
    }

    /// True when both coordinates are exactly representable as doubles.
    pub fn is_float_exact(&self) -> bool {
        exact::rational_from_f64(self.x) == self.ex && exact::rational_from_f64(self.y) == self.ey
    }

    pub fn euclidean_distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.ex == other.ex && self.ey == other.ey
    }
}

impl Eq for Point {}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Position of a point relative to an oriented line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    On,
    Right,
}

impl Side {
    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Greater => Side::Left,
            Ordering::Equal => Side::On,
            Ordering::Less => Side::Right,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::On => Side::On,
            Side::Right => Side::Left,
        }
    }
}

/// A line through `anchor` with unit direction; `Left` is the open halfplane
/// counterclockwise of the direction. Lines built from two points keep the
/// second one so side tests stay exact.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientedLine {
    anchor: Point,
    direction: (f64, f64),
    toward: Option<Point>,
}

impl OrientedLine {
    /// Normalizes `(dx, dy)` to unit length.
    pub fn new(anchor: Point, dx: f64, dy: f64) -> Result<Self> {
        let norm = dx.hypot(dy);
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidInput(format!("degenerate line direction ({dx}, {dy})")));
        }
        Ok(Self {
            anchor,
            direction: (dx / norm, dy / norm),
            toward: None,
        })
    }

    /// Line through `a` heading towards `b`.
    pub fn through(a: &Point, b: &Point) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidInput("a line needs two distinct points".into()));
        }
        let mut l = Self::new(a.clone(), b.x() - a.x(), b.y() - a.y())?;
        l.toward = Some(b.clone());
        Ok(l)
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn direction(&self) -> (f64, f64) {
        self.direction
    }

    /// Same line, opposite orientation.
    pub fn reversed(&self) -> Self {
        let toward = self.toward.as_ref().map(|b| {
            let two = BigRational::from_integer(2.into());
            Point::from_exact(
                &two * self.anchor.exact_x() - b.exact_x(),
                &two * self.anchor.exact_y() - b.exact_y(),
            )
        });
        Self {
            anchor: self.anchor.clone(),
            direction: (-self.direction.0, -self.direction.1),
            toward,
        }
    }

    pub fn side_of(&self, p: &Point) -> Side {
        side_of(self, p)
    }
}

/// Exact halfplane membership of `p` with respect to `l`.
pub fn side_of(l: &OrientedLine, p: &Point) -> Side {
    match &l.toward {
        Some(b) => side_of_chord(&l.anchor, b, p),
        None => Side::from_ordering(exact::orient_dir(&l.anchor, l.direction, p)),
    }
}

/// Side of `c` relative to the directed line `a -> b`.
pub fn side_of_chord(a: &Point, b: &Point, c: &Point) -> Side {
    Side::from_ordering(exact::orient(a, b, c))
}

pub fn collinear(a: &Point, b: &Point, c: &Point) -> bool {
    exact::orient(a, b, c) == Ordering::Equal
}

/// For `c` already known to be collinear with `a, b`: is it on the closed
/// segment `[a, b]`?
pub(crate) fn within_box(a: &Point, b: &Point, c: &Point) -> bool {
    let between = |lo: &BigRational, hi: &BigRational, v: &BigRational| {
        if lo <= hi {
            lo <= v && v <= hi
        } else {
            hi <= v && v <= lo
        }
    };
    between(a.exact_x(), b.exact_x(), c.exact_x()) && between(a.exact_y(), b.exact_y(), c.exact_y())
}

/// Exact test that `c` lies on the closed segment `[a, b]`.
pub fn on_segment(a: &Point, b: &Point, c: &Point) -> bool {
    collinear(a, b, c) && within_box(a, b, c)
}

/// True iff the closed segments `[a, b]` and `[c, d]` share a point.
pub fn segments_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = exact::orient(a, b, c);
    let o2 = exact::orient(a, b, d);
    let o3 = exact::orient(c, d, a);
    let o4 = exact::orient(c, d, b);
    let opposite = |p: Ordering, q: Ordering| {
        (p == Ordering::Greater && q == Ordering::Less) || (p == Ordering::Less && q == Ordering::Greater)
    };
    if opposite(o1, o2) && opposite(o3, o4) {
        return true;
    }
    (o1 == Ordering::Equal && within_box(a, b, c))
        || (o2 == Ordering::Equal && within_box(a, b, d))
        || (o3 == Ordering::Equal && within_box(c, d, a))
        || (o4 == Ordering::Equal && within_box(c, d, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y).unwrap()
    }

    fn horizontal() -> OrientedLine {
        OrientedLine::new(p(0.0, 0.0), 1.0, 0.0).unwrap()
    }

    #[test]
    fn side_examples() {
        assert_eq!(side_of(&horizontal(), &p(1.0, 1.0)), Side::Left);
        assert_eq!(side_of(&horizontal(), &p(2.0, 0.0)), Side::On);
        let vertical = OrientedLine::new(p(0.0, 0.0), 0.0, 1.0).unwrap();
        assert_eq!(side_of(&vertical, &p(1.0, 0.0)), Side::Right);
    }

    #[test]
    fn reversal_flips_sides() {
        let l = OrientedLine::new(p(0.3, -0.2), 0.7, 0.1).unwrap();
        for q in [p(1.0, 1.0), p(-3.0, 0.5), p(0.3, -0.2)] {
            assert_eq!(l.reversed().side_of(&q), l.side_of(&q).flipped());
        }
    }

    #[test]
    fn direction_is_unit() {
        let l = OrientedLine::new(p(0.0, 0.0), 3.0, 4.0).unwrap();
        let (dx, dy) = l.direction();
        assert!((dx.hypot(dy) - 1.0).abs() < 1e-12);
        assert!(OrientedLine::new(p(0.0, 0.0), 0.0, 0.0).is_err());
    }

    #[test]
    fn collinear_examples() {
        assert!(collinear(&p(0.0, 0.0), &p(1.0, 1.0), &p(2.0, 2.0)));
        assert!(!collinear(&p(0.0, 0.0), &p(1.0, 0.0), &p(0.0, 1.0)));
        let c = Point::from_decimal("2", "2.000000000000000000000000000001").unwrap();
        assert!(!collinear(&p(0.0, 0.0), &p(1.0, 1.0), &c));
        // the double approximation alone would say collinear
        assert!(collinear(&p(0.0, 0.0), &p(1.0, 1.0), &p(c.x(), c.y())));
    }

    #[test]
    fn segment_examples() {
        assert!(segments_intersect(&p(0.0, 0.0), &p(2.0, 2.0), &p(0.0, 2.0), &p(2.0, 0.0)));
        assert!(!segments_intersect(&p(0.0, 0.0), &p(1.0, 0.0), &p(2.0, 0.0), &p(3.0, 0.0)));
        assert!(segments_intersect(&p(0.0, 0.0), &p(1.0, 0.0), &p(1.0, 0.0), &p(1.0, 1.0)));
        assert!(segments_intersect(&p(0.0, 0.0), &p(2.0, 0.0), &p(1.0, 0.0), &p(3.0, 0.0)));
        assert!(!segments_intersect(&p(0.0, 0.0), &p(1.0, 0.0), &p(0.5, 0.1), &p(0.5, 1.0)));
    }

    #[test]
    fn decimal_and_float_points_compare_exactly() {
        assert_eq!(Point::from_decimal("0.5", "-2").unwrap(), p(0.5, -2.0));
        assert_ne!(Point::from_decimal("0.1", "0").unwrap(), p(0.1, 0.0));
        assert!(!Point::from_decimal("0.1", "0").unwrap().is_float_exact());
        assert!(Point::new(f64::NAN, 0.0).is_err());
    }
}
