//! Outward-rounded interval arithmetic.
//!
//! Every operation rounds to nearest and then steps each endpoint one ulp
//! outward, which always contains the exact result.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn widen(lo: f64, hi: f64) -> Interval {
    Interval {
        lo: lo.next_down(),
        hi: hi.next_up(),
    }
}

impl Interval {
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    const INVALID: Interval = Interval {
        lo: f64::NAN,
        hi: f64::NAN,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::Interval(format!(
                "empty or NaN interval [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// The degenerate interval `[x, x]`.
    pub const fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// An enclosure of the rational `n / d`.
    pub fn ratio(n: i64, d: i64) -> Self {
        let (a, b) = (n as f64, d as f64);
        assert!(
            a as i64 == n && b as i64 == d && d != 0,
            "ratio needs exact operands"
        );
        let q = a / b;
        // q*b - a evaluated exactly; zero means q is the ratio itself.
        if q.mul_add(b, -a) == 0.0 {
            Self::point(q)
        } else {
            widen(q, q)
        }
    }

    /// Hull of two intervals.
    pub fn hull(self, o: Self) -> Self {
        Self {
            lo: self.lo.min(o.lo),
            hi: self.hi.max(o.hi),
        }
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    pub fn intersects(self, o: Self) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn is_valid(self) -> bool {
        self.lo <= self.hi
    }

    pub fn checked_div(self, o: Self) -> Result<Self> {
        if o.contains_zero() {
            return Err(Error::Interval(format!(
                "division by {o} which contains zero"
            )));
        }
        Ok(self / o)
    }

    pub fn try_sqrt(self) -> Result<Self> {
        if !(self.lo >= 0.0) {
            return Err(Error::Interval(format!("sqrt of {self}")));
        }
        Ok(Real::sqrt(self))
    }

    fn mul_nonneg(a: Self, b: Self) -> Self {
        widen(a.lo * b.lo, a.hi * b.hi)
    }

    /// Split at the midpoint.
    pub fn bisect(self) -> (Self, Self) {
        let m = self.mid();
        (Self { lo: self.lo, hi: m }, Self { lo: m, hi: self.hi })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        widen(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Sub for Interval {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        widen(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Neg for Interval {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        if p.iter().any(|x| x.is_nan()) {
            return Self::INVALID;
        }
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi)
    }
}

impl Div for Interval {
    type Output = Self;
    /// Division by an interval containing zero gives [`Interval::ENTIRE`].
    fn div(self, o: Self) -> Self {
        if o.contains_zero() {
            return Self::ENTIRE;
        }
        let p = [
            self.lo / o.lo,
            self.lo / o.hi,
            self.hi / o.lo,
            self.hi / o.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi)
    }
}

/// Scalars the certificate expressions are written over, so one definition
/// serves both point evaluation and rigorous enclosure.
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// A small integer constant.
    fn int(n: i32) -> Self;
    /// The rational `n / d`, enclosed when not representable.
    fn ratio(n: i64, d: i64) -> Self;
    fn sqrt(self) -> Self;
    fn powi(self, n: u32) -> Self;
}

impl Real for f64 {
    fn int(n: i32) -> Self {
        n as f64
    }
    fn ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn powi(self, n: u32) -> Self {
        (0..n).fold(1.0, |a, _| a * self)
    }
}

impl Real for Interval {
    fn int(n: i32) -> Self {
        Self::point(n as f64)
    }
    fn ratio(n: i64, d: i64) -> Self {
        Interval::ratio(n, d)
    }
    /// The square root of an interval reaching below zero is invalid (NaN
    /// endpoints), which branch-and-bound reports as a domain failure.
    fn sqrt(self) -> Self {
        if !(self.lo >= 0.0) {
            return Self::INVALID;
        }
        widen(self.lo.sqrt(), self.hi.sqrt()).max0()
    }
    fn powi(self, n: u32) -> Self {
        if n == 0 {
            return Self::point(1.0);
        }
        let abs = if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Self {
                lo: 0.0,
                hi: (-self.lo).max(self.hi),
            }
        };
        let mut r = abs;
        for _ in 1..n {
            r = Self::mul_nonneg(r, abs).max0();
        }
        if n % 2 == 0 || self.lo >= 0.0 {
            r
        } else if self.hi <= 0.0 {
            -r
        } else {
            // Odd power over a sign change: monotone, so use the endpoints.
            let lo = -Self::point(-self.lo).powi(n).hi;
            let hi = Self::point(self.hi).powi(n).hi;
            Self { lo, hi }
        }
    }
}

impl Interval {
    /// Clamp a lower endpoint that widening pushed below an exact zero.
    fn max0(self) -> Self {
        Self {
            lo: self.lo.max(0.0),
            hi: self.hi,
        }
    }
}
