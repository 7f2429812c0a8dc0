//! Exact arc geometry: squared heights, quadratic sign analysis and
//! transversal crossing isolation.

use num::traits::{One, Signed, Zero};
use num::BigInt;

use super::{Arc, Q};

/// Flattening base: an arc at level `k` has its height scaled by `SCALE^-k`.
pub const SCALE: i64 = 1024;

fn scale_pow(level: u32) -> Q {
    let base = BigInt::from(SCALE);
    Q::from_integer(num::pow::pow(base, 2 * level as usize))
}

/// Squared height of an arc at `x` (positive inside the span, regardless of
/// side).
pub fn height_sq(arc: &Arc, x: &Q) -> Q {
    debug_assert!(arc.spans(x));
    (x - &arc.left) * (&arc.right - x) / scale_pow(arc.level)
}

/// The difference `height_sq(a) - height_sq(b)` as quadratic coefficients
/// `(c2, c1, c0)` with `f(x) = c2 x^2 + c1 x + c0`.
fn height_diff(a: &Arc, b: &Arc) -> (Q, Q, Q) {
    // (x-l)(r-x)/s = (-x^2 + (l+r)x - lr)/s
    let sa = scale_pow(a.level);
    let sb = scale_pow(b.level);
    let c2 = -(sa.recip() - sb.recip());
    let c1 = (&a.left + &a.right) / &sa - (&b.left + &b.right) / &sb;
    let c0 = -(&a.left * &a.right) / &sa + (&b.left * &b.right) / &sb;
    (c2, c1, c0)
}

fn eval(fc: &(Q, Q, Q), x: &Q) -> Q {
    &fc.0 * x * x + &fc.1 * x + &fc.2
}

fn eval_deriv(fc: &(Q, Q, Q), x: &Q) -> Q {
    Q::from_integer(2.into()) * &fc.0 * x + &fc.1
}

/// An isolated transversal root of the height difference of two arcs.
#[derive(Clone, PartialEq, Debug)]
pub struct Crossing {
    /// Isolating interval: exactly one root in `(lo, hi)`, signs of `f`
    /// constant and opposite on the two ends.
    pub lo: Q,
    pub hi: Q,
    /// Sign of `f = hsq(a) - hsq(b)` just right of the root: `true` means
    /// arc `a` is higher than `b` to the right.
    pub a_above_right: bool,
}

impl Crossing {
    pub fn sample(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(2.into())
    }
}

/// All transversal crossings of two arcs on the same side, ordered by `x`.
/// Panics on tangential or coincident configurations (non-generic diagrams).
pub fn crossings(a: &Arc, b: &Arc) -> Vec<Crossing> {
    if a.side != b.side {
        return Vec::new();
    }
    let lo = if a.left > b.left { a.left.clone() } else { b.left.clone() };
    let hi = if a.right < b.right { a.right.clone() } else { b.right.clone() };
    if lo >= hi {
        return Vec::new();
    }
    let f = height_diff(a, b);
    if f.0.is_zero() && f.1.is_zero() && f.2.is_zero() {
        panic!("coincident arcs");
    }

    // breakpoints: interval ends plus the vertex of the parabola
    let mut pts = vec![lo.clone()];
    if !f.0.is_zero() {
        let v = -&f.1 / (Q::from_integer(2.into()) * &f.0);
        if lo < v && v < hi {
            let fv = eval(&f, &v);
            if fv.is_zero() {
                panic!("tangential arcs (double root)");
            }
            pts.push(v);
        }
    }
    pts.push(hi.clone());

    // sign at an endpoint, nudged inward when f vanishes there (shared anchors)
    let sign_at = |x: &Q, inward_right: bool| -> i32 {
        let fx = eval(&f, x);
        if !fx.is_zero() {
            return if fx.is_positive() { 1 } else { -1 };
        }
        let d = eval_deriv(&f, x);
        let s = if d.is_zero() {
            // f(x)=0, f'(x)=0: the quadratic is a perfect square: tangency
            panic!("tangential arcs at interval end");
        } else if d.is_positive() {
            1
        } else {
            -1
        };
        if inward_right {
            s
        } else {
            -s
        }
    };

    let mut out = Vec::new();
    for w in pts.windows(2) {
        let (p, r) = (&w[0], &w[1]);
        let sp = sign_at(p, true);
        let sr = sign_at(r, false);
        if sp == sr {
            continue;
        }
        // exactly one root in (p, r): bisect until the isolating interval is
        // strictly interior to the window
        let (mut lo, mut hi) = (p.clone(), r.clone());
        let slo = sp;
        let mut steps = 0;
        loop {
            let interior = lo > *p && hi < *r;
            if interior && steps >= 8 {
                break;
            }
            steps += 1;
            assert!(steps < 300, "crossing isolation did not converge");
            let mid = (&lo + &hi) / Q::from_integer(2.into());
            let fm = eval(&f, &mid);
            if fm.is_zero() {
                // exact rational root: shrink around it symmetrically
                let w = (&hi - &lo) / Q::from_integer(1024.into());
                lo = &mid - &w;
                hi = &mid + &w;
                break;
            }
            let sm = if fm.is_positive() { 1 } else { -1 };
            if sm == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(Crossing { lo, hi, a_above_right: sr > 0 });
    }
    out
}

/// Shrink an isolating interval by bisection until its width is below `w`.
pub fn refine(a: &Arc, b: &Arc, cr: &mut Crossing, w: &Q) {
    let f = height_diff(a, b);
    let two = Q::from_integer(2.into());
    let mut slo = {
        let flo = eval(&f, &cr.lo);
        if flo.is_zero() {
            // boundary root from a shared anchor cannot happen after
            // `crossings` nudged inward; treat via derivative
            if eval_deriv(&f, &cr.lo).is_positive() {
                1
            } else {
                -1
            }
        } else if flo.is_positive() {
            1
        } else {
            -1
        }
    };
    while &cr.hi - &cr.lo > *w {
        let mid = (&cr.lo + &cr.hi) / &two;
        let fm = eval(&f, &mid);
        if fm.is_zero() {
            let half = w / &two;
            cr.lo = &mid - &half;
            cr.hi = &mid + &half;
            return;
        }
        let sm = if fm.is_positive() { 1 } else { -1 };
        if sm == slo {
            cr.lo = mid;
        } else {
            cr.hi = mid;
        }
    }
}

/// Compare squared heights of two arcs at `x`; panics on exact ties.
pub fn cmp_heights(a: &Arc, b: &Arc, x: &Q) -> std::cmp::Ordering {
    let ha = height_sq(a, x);
    let hb = height_sq(b, x);
    match ha.cmp(&hb) {
        std::cmp::Ordering::Equal => panic!("height tie at {x}: non-generic sample"),
        o => o,
    }
}

/// Limit comparison of two arcs sharing the anchor `x` as their left end:
/// which is higher just right of `x`.
pub fn cmp_heights_at_shared_left(a: &Arc, b: &Arc) -> std::cmp::Ordering {
    debug_assert_eq!(a.left, b.left);
    let ra = (&a.right - &a.left) / scale_pow(a.level);
    let rb = (&b.right - &b.left) / scale_pow(b.level);
    match ra.cmp(&rb) {
        std::cmp::Ordering::Equal => panic!("tangent arcs at shared anchor"),
        o => o,
    }
}

/// Same at a shared right end: which is higher just left of `x`.
pub fn cmp_heights_at_shared_right(a: &Arc, b: &Arc) -> std::cmp::Ordering {
    debug_assert_eq!(a.right, b.right);
    let ra = (&a.right - &a.left) / scale_pow(a.level);
    let rb = (&b.right - &b.left) / scale_pow(b.level);
    match ra.cmp(&rb) {
        std::cmp::Ordering::Equal => panic!("tangent arcs at shared anchor"),
        o => o,
    }
}

pub fn one() -> Q {
    Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{q, Side};

    #[test]
    fn nested_arcs_do_not_cross() {
        let a = Arc::new(q(0), q(10), Side::Above, 0);
        let b = Arc::new(q(2), q(8), Side::Above, 0);
        assert!(crossings(&a, &b).is_empty());
    }

    #[test]
    fn interleaved_arcs_cross_once() {
        let a = Arc::new(q(0), q(6), Side::Above, 0);
        let b = Arc::new(q(2), q(8), Side::Above, 0);
        let cr = crossings(&a, &b);
        assert_eq!(cr.len(), 1);
        // to the right of the crossing, b is higher (a is ending)
        assert!(!cr[0].a_above_right);
    }

    #[test]
    fn flat_arc_crosses_tall_nested_arc_twice() {
        let flat = Arc::new(q(0), q(10), Side::Above, 1);
        let tall = Arc::new(q(2), q(8), Side::Above, 0);
        let cr = crossings(&flat, &tall);
        assert_eq!(cr.len(), 2);
        assert!(cr[0].hi <= cr[1].lo, "isolating intervals ordered");
        // between the crossings the tall arc is higher
        assert!(!cr[0].a_above_right);
        assert!(cr[1].a_above_right);
    }

    #[test]
    fn flat_arc_spanning_one_anchor_crosses_once() {
        let flat = Arc::new(q(0), q(5), Side::Above, 1);
        let tall = Arc::new(q(3), q(9), Side::Above, 0);
        let cr = crossings(&flat, &tall);
        assert_eq!(cr.len(), 1);
    }

    #[test]
    fn shared_anchor_no_spurious_crossing() {
        // chained arcs sharing an anchor: same level, no interior crossing
        let a = Arc::new(q(0), q(4), Side::Above, 0);
        let b = Arc::new(q(0), q(6), Side::Above, 0);
        assert!(crossings(&a, &b).is_empty());
        assert_eq!(
            cmp_heights_at_shared_left(&a, &b),
            std::cmp::Ordering::Less
        );
    }

    #[test]
    fn opposite_sides_never_cross() {
        let a = Arc::new(q(0), q(6), Side::Above, 0);
        let b = Arc::new(q(2), q(8), Side::Below, 0);
        assert!(crossings(&a, &b).is_empty());
    }
}
