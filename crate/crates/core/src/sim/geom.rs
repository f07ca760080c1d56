//! Integer plane geometry. Coordinates are millimetres, angles whole degrees
//! measured counter-clockwise from the +x axis.

use serde::{Deserialize, Serialize};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    /// From metres, rounded to the nearest millimetre.
    pub fn from_metres(x: f64, y: f64) -> Self {
        Point {
            x: (x * 1000.0).round() as i64,
            y: (y * 1000.0).round() as i64,
        }
    }
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Euclidean distance rounded down to whole millimetres.
pub fn distance(a: Point, b: Point) -> i64 {
    let dx = (a.x - b.x) as i128;
    let dy = (a.y - b.y) as i128;
    isqrt((dx * dx + dy * dy) as u128) as i64
}

/// Point `num/den` of the way from `a` to `b` (integer division toward zero).
pub fn lerp(a: Point, b: Point, num: i64, den: i64) -> Point {
    if den == 0 {
        return a;
    }
    let f = |p: i64, q: i64| p + ((q - p) as i128 * num as i128 / den as i128) as i64;
    Point::new(f(a.x, b.x), f(a.y, b.y))
}

pub fn normalize_deg(d: i64) -> i64 {
    d.rem_euclid(360)
}

/// Direction from `from` to `to`; `None` when the points coincide.
pub fn bearing(from: Point, to: Point) -> Option<i64> {
    if from == to {
        return None;
    }
    let rad = libm::atan2((to.y - from.y) as f64, (to.x - from.x) as f64);
    Some(normalize_deg(libm::round(rad.to_degrees()) as i64))
}

/// Smallest absolute difference between two headings, in `0..=180`.
pub fn angle_diff(a: i64, b: i64) -> i64 {
    let d = normalize_deg(a - b);
    d.min(360 - d)
}

/// Rotates `facing` toward `target` by at most `max_step` degrees, taking
/// the shorter way round (counter-clockwise on an exact 180° tie).
pub fn turn_toward(facing: i64, target: i64, max_step: i64) -> i64 {
    let ccw = normalize_deg(target - facing);
    if ccw == 0 {
        return facing;
    }
    if ccw <= 180 {
        normalize_deg(facing + ccw.min(max_step))
    } else {
        normalize_deg(facing - (360 - ccw).min(max_step))
    }
}

fn orient(a: Point, b: Point, c: Point) -> i128 {
    let v = (b.x - a.x) as i128 * (c.y - a.y) as i128 - (b.y - a.y) as i128 * (c.x - a.x) as i128;
    v.signum()
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Whether closed segments `p1p2` and `q1q2` share at least one point.
pub fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(q1, q2, p1))
        || (d2 == 0 && on_segment(q1, q2, p2))
        || (d3 == 0 && on_segment(p1, p2, q1))
        || (d4 == 0 && on_segment(p1, p2, q2))
}
