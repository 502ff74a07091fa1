//! Exact planar predicates on rational points.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::polynomial::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }
}

/// Sign of the cross product `(q - p) x (r - p)`: `Greater` for a left turn.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Ordering {
    let cross = (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x);
    if cross.is_zero() {
        Ordering::Equal
    } else if cross.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn within(a: &Rational, b: &Rational, v: &Rational) -> bool {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    lo <= v && v <= hi
}

/// Whether `r` lies on the closed segment `p`-`q`.
pub fn on_segment(p: &Point, q: &Point, r: &Point) -> bool {
    orientation(p, q, r) == Ordering::Equal && within(&p.x, &q.x, &r.x) && within(&p.y, &q.y, &r.y)
}

/// True iff the open segments cross at a single interior point of both.
/// Touching configurations (an endpoint on the other segment, collinear
/// overlap) are reported as `false`; callers detect them with [`on_segment`].
pub fn segments_cross(p1: &Point, p2: &Point, p3: &Point, p4: &Point) -> bool {
    let o1 = orientation(p1, p2, p3);
    let o2 = orientation(p1, p2, p4);
    let o3 = orientation(p3, p4, p1);
    let o4 = orientation(p3, p4, p2);
    if [o1, o2, o3, o4].contains(&Ordering::Equal) {
        return false;
    }
    o1 != o2 && o3 != o4
}

/// The y-coordinate of the non-vertical segment `p`-`q` at abscissa `x`.
pub fn y_at(p: &Point, q: &Point, x: &Rational) -> Rational {
    let t = (x - &p.x) / (&q.x - &p.x);
    &p.y + t * (&q.y - &p.y)
}
