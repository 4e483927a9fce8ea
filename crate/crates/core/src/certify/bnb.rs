//! Branch-and-bound enclosure of the maximum or minimum of a function over a
//! box.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::interval::Interval;

/// A function given twice: on points, and as an interval extension.
#[derive(Clone, Copy)]
pub struct Expr {
    pub point: fn(&[f64]) -> f64,
    pub enclose: fn(&[Interval]) -> Interval,
}

/// Build an [`Expr`] from a function generic over [`super::Real`].
#[macro_export]
macro_rules! expr {
    ($f:ident) => {
        $crate::certify::Expr {
            point: $f::<f64>,
            enclose: $f::<$crate::certify::Interval>,
        }
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Converged,
    /// The box budget ran out before the enclosure reached the tolerance.
    Inconclusive,
    /// The function was undefined at a sampled point.
    Domain,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub enclosure: Interval,
    pub status: Status,
    pub boxes: usize,
}

struct Node {
    key: f64,
    dims: Vec<Interval>,
}

impl PartialEq for Node {
    fn eq(&self, o: &Self) -> bool {
        self.key.total_cmp(&o.key) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Node {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key.total_cmp(&o.key)
    }
}

/// Rigorous enclosure of `max f` (or `min f`) over `domain`.
///
/// Boxes are kept in a queue ordered by their upper bound. The largest is
/// split along its widest side; a box whose upper bound falls below a value
/// attained at some box centre is dropped. The search stops when the best
/// upper bound is within `tol` of the best attained value.
pub fn bound_extremum(
    f: &Expr,
    domain: &[Interval],
    mode: Mode,
    tol: f64,
    max_boxes: usize,
) -> Extremum {
    let sign = if mode == Mode::Max { 1.0 } else { -1.0 };
    let enc = |b: &[Interval]| {
        let e = (f.enclose)(b);
        if sign > 0.0 {
            e
        } else {
            -e
        }
    };
    let centre = |b: &[Interval]| {
        let p: Vec<Interval> = b.iter().map(|d| Interval::point(d.mid())).collect();
        enc(&p)
    };

    // An extension that is undefined on a box (a square root of an
    // enclosure reaching below zero, say) may still be defined on its parts,
    // so such boxes are kept with an infinite bound and split further. Only
    // an undefined value at a point is a real domain failure.
    let bound = |e: Interval| if e.is_valid() { e.hi } else { f64::INFINITY };
    let c = centre(domain);
    if !c.is_valid() {
        return finish(Interval::ENTIRE, Status::Domain, 1, sign);
    }
    let root = bound(enc(domain));
    let mut best = c.lo;
    let mut heap = BinaryHeap::new();
    heap.push(Node {
        key: root,
        dims: domain.to_vec(),
    });
    let mut boxes = 1;

    loop {
        let Some(top) = heap.pop() else {
            return finish(
                Interval { lo: best, hi: best },
                Status::Converged,
                boxes,
                sign,
            );
        };
        if top.key - best <= tol {
            return finish(
                Interval {
                    lo: best,
                    hi: top.key,
                },
                Status::Converged,
                boxes,
                sign,
            );
        }
        if boxes >= max_boxes {
            return finish(
                Interval {
                    lo: best,
                    hi: top.key,
                },
                Status::Inconclusive,
                boxes,
                sign,
            );
        }
        let k = (0..top.dims.len())
            .max_by(|&a, &b| top.dims[a].width().total_cmp(&top.dims[b].width()))
            .unwrap();
        let (l, r) = top.dims[k].bisect();
        for half in [l, r] {
            let mut d = top.dims.clone();
            d[k] = half;
            let e = bound(enc(&d));
            let c = centre(&d);
            boxes += 1;
            if !c.is_valid() {
                return finish(Interval::ENTIRE, Status::Domain, boxes, sign);
            }
            best = best.max(c.lo);
            if e >= best {
                heap.push(Node { key: e, dims: d });
            }
        }
    }
}

fn finish(e: Interval, status: Status, boxes: usize, sign: f64) -> Extremum {
    let enclosure = if sign > 0.0 { e } else { -e };
    Extremum {
        enclosure,
        status,
        boxes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::Real;

    fn bowl<T: Real>(v: &[T]) -> T {
        let x = v[0] - T::ratio(1, 3);
        let y = v[1] + T::int(1);
        T::int(2) - x.powi(2) - y.powi(2)
    }

    fn five<T: Real>(_: &[T]) -> T {
        T::int(5)
    }

    #[test]
    fn interior_maximum_of_a_bowl() {
        let d = [
            Interval::point(0.0).hull(Interval::point(1.0)),
            Interval::new(-2.0, 0.0).unwrap(),
        ];
        let e = bound_extremum(&expr!(bowl), &d, Mode::Max, 1e-6, 1_000_000);
        assert_eq!(e.status, Status::Converged);
        assert!(e.enclosure.contains(2.0) && e.enclosure.width() <= 1e-6);
        let m = bound_extremum(&expr!(bowl), &d, Mode::Min, 1e-6, 1_000_000);
        // Minimum at the corner (1, -2) or (1, 0): 2 - 4/9 - 1.
        assert!(m.enclosure.contains(2.0 - 4.0 / 9.0 - 1.0), "{:?}", m);
    }

    #[test]
    fn constant_function() {
        let d = [Interval::new(-3.0, 7.0).unwrap()];
        let e = bound_extremum(&expr!(five), &d, Mode::Max, 1e-3, 100);
        assert!(e.enclosure.contains(5.0) && e.enclosure.width() < 1e-12);
    }
}
