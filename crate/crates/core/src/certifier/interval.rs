//! Closed real intervals with outward rounding.
//!
//! Stable Rust exposes no directed rounding modes, so every endpoint is
//! computed in round-to-nearest and then pushed one ulp outward. The
//! transcendental extensions widen by two ulps to absorb the libm error.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[inline]
fn down(v: f64) -> f64 {
    v.next_down()
}

#[inline]
fn up(v: f64) -> f64 {
    v.next_up()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// # Panics
    /// If `lo > hi` or either endpoint is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn try_new(lo: f64, hi: f64) -> Option<Self> {
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub const fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    /// An enclosure of π.
    pub fn pi() -> Self {
        // The f64 nearest π lies below it.
        Self {
            lo: PI,
            hi: up(PI),
        }
    }

    /// An enclosure of `k·π/3` for integer `k`.
    pub fn third_pi_multiple(k: i64) -> Self {
        if k == 0 {
            return Self::point(0.0);
        }
        Self::pi() * Self::point(k as f64) / Self::point(3.0)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Splits at the midpoint into two halves sharing it.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (
            Interval { lo: self.lo, hi: m },
            Interval { lo: m, hi: self.hi },
        )
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval {
                lo: 0.0,
                hi: (-self.lo).max(self.hi),
            }
        }
    }

    fn periodic_extremum_hits(&self, offset: f64) -> bool {
        // Is there an integer k with offset + 2kπ in [lo, hi]? A small slack
        // makes the test conservative against the rounding of offset + 2kπ.
        let slack = 1e-9 * self.lo.abs().max(self.hi.abs()).max(1.0);
        let k = ((self.lo - slack - offset) / TAU).ceil();
        offset + k * TAU <= self.hi + slack
    }

    pub fn sin(&self) -> Interval {
        if self.width() >= TAU || !self.lo.is_finite() || !self.hi.is_finite() {
            return Interval { lo: -1.0, hi: 1.0 };
        }
        let (a, b) = (self.lo.sin(), self.hi.sin());
        let mut lo = down(down(a.min(b)));
        let mut hi = up(up(a.max(b)));
        if self.periodic_extremum_hits(FRAC_PI_2) {
            hi = 1.0;
        }
        if self.periodic_extremum_hits(-FRAC_PI_2) {
            lo = -1.0;
        }
        Interval {
            lo: lo.max(-1.0),
            hi: hi.min(1.0),
        }
    }

    pub fn cos(&self) -> Interval {
        if self.width() >= TAU || !self.lo.is_finite() || !self.hi.is_finite() {
            return Interval { lo: -1.0, hi: 1.0 };
        }
        let (a, b) = (self.lo.cos(), self.hi.cos());
        let mut lo = down(down(a.min(b)));
        let mut hi = up(up(a.max(b)));
        if self.periodic_extremum_hits(0.0) {
            hi = 1.0;
        }
        if self.periodic_extremum_hits(PI) {
            lo = -1.0;
        }
        Interval {
            lo: lo.max(-1.0),
            hi: hi.min(1.0),
        }
    }

    /// Enclosure of `sin(t)/t` (with value 1 at 0).
    pub fn sinc(&self) -> Interval {
        // sinc is even, decreasing in |t| on [0, π], and bounded by 1/|t|.
        let (m, big) = if self.lo >= 0.0 {
            (self.lo, self.hi)
        } else if self.hi <= 0.0 {
            (-self.hi, -self.lo)
        } else {
            (0.0, (-self.lo).max(self.hi))
        };
        if big <= 3.0 {
            let upper = sinc_point(m).hi;
            let lower = sinc_point(big).lo;
            Interval {
                lo: lower,
                hi: upper.min(1.0),
            }
        } else {
            // Global minimum of sinc is -0.21723...
            // For |t| ≥ 3, sinc(t) ≤ 1/|t|; below 3 it decreases.
            let tail = up(1.0 / m.max(3.0));
            let hi = if m <= 3.0 {
                sinc_point(m).hi.max(tail).min(1.0)
            } else {
                tail.min(1.0)
            };
            Interval { lo: -0.22, hi }
        }
    }
}

/// Enclosure of sinc at a non-negative point.
fn sinc_point(t: f64) -> Interval {
    if t < 1e-4 {
        // 1 - t²/6 ≤ sinc(t) ≤ 1 for small t.
        let t2 = up(t * t);
        Interval {
            lo: down(1.0 - up(t2 / 6.0)),
            hi: 1.0,
        }
    } else {
        Interval::point(t).sin() / Interval::point(t)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: down(self.lo + rhs.lo),
            hi: up(self.hi + rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: down(self.lo - rhs.hi),
            hi: up(self.hi - rhs.lo),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl Div for Interval {
    type Output = Interval;
    /// # Panics
    /// If the divisor contains zero.
    fn div(self, rhs: Interval) -> Interval {
        assert!(
            rhs.lo > 0.0 || rhs.hi < 0.0,
            "division by an interval containing zero"
        );
        let q = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }
}
