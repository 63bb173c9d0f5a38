//! Exact sign computations over rational coordinates with a floating-point
//! filter in front.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Point;
use crate::error::{Error, Result};

/// Bound on the relative error of the filtered determinants, measured against
/// the permanent of the absolute values. Covers rounding of the inputs
/// themselves (rationals stored next to their nearest double) as well as the
/// arithmetic.
const FILTER_BOUND: f64 = 32.0 * f64::EPSILON;

/// Parses a decimal literal (`-12.5`, `3`, `1e-30`, `.25E+2`) into an exact
/// rational.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("not a decimal number: {text:?}"));
    let s = text.trim();
    let (negative, s) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if exponent.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite double")
}

fn sign_of(v: &BigRational) -> Ordering {
    if v.is_positive() {
        Ordering::Greater
    } else if v.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

fn float_sign(det: f64, perm: f64) -> Option<Ordering> {
    if perm.is_finite() && det.is_finite() && det.abs() > FILTER_BOUND * perm {
        Some(if det > 0.0 { Ordering::Greater } else { Ordering::Less })
    } else {
        None
    }
}

/// Sign of the cross product `(b - a) x (c - a)`: `Greater` when `c` lies to
/// the left of the directed line `a -> b`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    let (bx, by) = (b.x() - a.x(), b.y() - a.y());
    let (cx, cy) = (c.x() - a.x(), c.y() - a.y());
    let det = bx * cy - by * cx;
    let perm = (b.x().abs() + a.x().abs()) * (c.y().abs() + a.y().abs())
        + (b.y().abs() + a.y().abs()) * (c.x().abs() + a.x().abs());
    if let Some(s) = float_sign(det, perm) {
        return s;
    }
    let bx = b.exact_x() - a.exact_x();
    let by = b.exact_y() - a.exact_y();
    let cx = c.exact_x() - a.exact_x();
    let cy = c.exact_y() - a.exact_y();
    sign_of(&(bx * cy - by * cx))
}

/// Sign of `dir x (p - anchor)` where `dir` is taken as the exact value of the
/// two doubles.
pub fn orient_dir(anchor: &Point, dir: (f64, f64), p: &Point) -> Ordering {
    let (px, py) = (p.x() - anchor.x(), p.y() - anchor.y());
    let det = dir.0 * py - dir.1 * px;
    let perm = dir.0.abs() * (p.y().abs() + anchor.y().abs())
        + dir.1.abs() * (p.x().abs() + anchor.x().abs());
    if let Some(s) = float_sign(det, perm) {
        return s;
    }
    let dx = rational_from_f64(dir.0);
    let dy = rational_from_f64(dir.1);
    let px = p.exact_x() - anchor.exact_x();
    let py = p.exact_y() - anchor.exact_y();
    sign_of(&(dx * py - dy * px))
}

/// Lexicographic order on exact coordinates.
pub fn lex_cmp(a: &Point, b: &Point) -> Ordering {
    match a.x().partial_cmp(&b.x()) {
        Some(Ordering::Equal) | None => {}
        Some(o) => return o,
    }
    match a.exact_x().cmp(b.exact_x()) {
        Ordering::Equal => {}
        o => return o,
    }
    match a.y().partial_cmp(&b.y()) {
        Some(Ordering::Equal) | None => a.exact_y().cmp(b.exact_y()),
        Some(o) => o,
    }
}

/// Exact test `x^2 + y^2 < 1`.
pub fn strictly_inside_unit_disk(p: &Point) -> bool {
    let r2 = p.x() * p.x() + p.y() * p.y();
    if r2 < 1.0 - 1e-12 {
        return true;
    }
    if r2 > 1.0 + 1e-12 {
        return false;
    }
    let x = p.exact_x();
    let y = p.exact_y();
    x * x + y * y < BigRational::one()
}

/// Intersection point of the lines `a b` and `c d`, exactly. `None` when the
/// lines are parallel.
pub fn line_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let (ax, ay) = (a.exact_x(), a.exact_y());
    let rx = b.exact_x() - ax;
    let ry = b.exact_y() - ay;
    let sx = d.exact_x() - c.exact_x();
    let sy = d.exact_y() - c.exact_y();
    let denom = &rx * &sy - &ry * &sx;
    if denom.is_zero() {
        return None;
    }
    let qx = c.exact_x() - ax;
    let qy = c.exact_y() - ay;
    let t = (&qx * &sy - &qy * &sx) / denom;
    Some(Point::from_exact(ax + &t * rx, ay + &t * ry))
}

/// Exact midpoint of two points.
pub fn midpoint(a: &Point, b: &Point) -> Point {
    let two = BigRational::from_integer(BigInt::from(2));
    Point::from_exact(
        (a.exact_x() + b.exact_x()) / &two,
        (a.exact_y() + b.exact_y()) / &two,
    )
}

/// Finite decimal expansion of `r`, if its denominator only has the prime
/// factors 2 and 5.
pub fn to_decimal_string(r: &BigRational) -> Option<String> {
    let ten = BigInt::from(10u32);
    let mut scaled = r.clone();
    let mut digits = 0usize;
    while !scaled.is_integer() {
        if digits > 2000 {
            return None;
        }
        scaled *= BigRational::from_integer(ten.clone());
        digits += 1;
    }
    let int = scaled.to_integer();
    let negative = int.is_negative();
    let mut text = int.abs().to_string();
    if digits > 0 {
        if text.len() <= digits {
            text = format!("{}{}", "0".repeat(digits - text.len() + 1), text);
        }
        text.insert(text.len() - digits, '.');
    }
    if negative {
        text.insert(0, '-');
    }
    Some(text)
}
