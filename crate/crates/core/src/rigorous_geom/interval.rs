//! Outward-rounded real intervals and complex rectangles.
//!
//! Every arithmetic result is widened by one ulp on each side, so the
//! computed interval contains the exact real result of the operation
//! applied to any points of the operands. NaN results collapse to the
//! entire line.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive, Zero};

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

/// A closed real interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Self::ENTIRE;
        }
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    /// Tightest f64 interval containing the rational `q`.
    pub fn from_rational(q: &BigRational) -> Self {
        let approx = q.to_f64().unwrap_or(f64::NAN);
        if !approx.is_finite() {
            return Self::ENTIRE;
        }
        let mut lo = approx;
        while exact_rational(lo).is_none_or(|r| &r > q) {
            lo = down(lo);
        }
        let mut hi = approx;
        while exact_rational(hi).is_none_or(|r| &r < q) {
            hi = up(hi);
        }
        Self { lo, hi }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        up(self.hi - self.lo)
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        self.intersects(other).then(|| Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Upper bound of `|x|` over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound of `|x|` over the interval.
    pub fn mig(&self) -> f64 {
        if self.lo > 0.0 {
            self.lo
        } else if self.hi < 0.0 {
            -self.hi
        } else {
            0.0
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.lo * self.lo;
        let b = self.hi * self.hi;
        if self.lo >= 0.0 {
            Interval::new(down(a), up(b))
        } else if self.hi <= 0.0 {
            Interval::new(down(b), up(a))
        } else {
            Interval::new(0.0, up(a.max(b)))
        }
    }

    pub fn scale(&self, k: f64) -> Interval {
        *self * Interval::point(k)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::new(down(self.lo + rhs.lo), up(self.hi + rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::new(down(self.lo - rhs.hi), up(self.hi - rhs.lo))
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
        if p.iter().any(|x| x.is_nan()) {
            return Interval::ENTIRE;
        }
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

/// Exact rational value of a finite float.
pub fn exact_rational(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(BigRational::zero());
    }
    BigRational::from_f64(x)
}

/// Upper bound of `sqrt(a^2 + b^2)` for non-negative `a`, `b`.
pub(crate) fn hypot_up(a: f64, b: f64) -> f64 {
    let s = up(up(a * a) + up(b * b));
    up(s.sqrt())
}

/// Lower bound of `sqrt(a^2 + b^2)` for non-negative `a`, `b`.
pub(crate) fn hypot_down(a: f64, b: f64) -> f64 {
    let s = down(down(a * a) + down(b * b)).max(0.0);
    down(s.sqrt()).max(0.0)
}

/// An axis-aligned rectangle in the complex plane with outward-rounded
/// endpoints.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntervalBox {
    pub re: Interval,
    pub im: Interval,
}

impl IntervalBox {
    pub const ENTIRE: IntervalBox = IntervalBox {
        re: Interval::ENTIRE,
        im: Interval::ENTIRE,
    };

    pub fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Self {
        Self {
            re: Interval::new(re_lo, re_hi),
            im: Interval::new(im_lo, im_hi),
        }
    }

    pub fn from_parts(re: Interval, im: Interval) -> Self {
        Self { re, im }
    }

    pub fn point(re: f64, im: f64) -> Self {
        Self {
            re: Interval::point(re),
            im: Interval::point(im),
        }
    }

    /// Square of side `2 * radius` around `(re, im)`, rounded outward.
    pub fn around(re: f64, im: f64, radius: f64) -> Self {
        Self::new(down(re - radius), up(re + radius), down(im - radius), up(im + radius))
    }

    pub fn re_lo(&self) -> f64 {
        self.re.lo
    }
    pub fn re_hi(&self) -> f64 {
        self.re.hi
    }
    pub fn im_lo(&self) -> f64 {
        self.im.lo
    }
    pub fn im_hi(&self) -> f64 {
        self.im.hi
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn center(&self) -> (f64, f64) {
        (self.re.mid(), self.im.mid())
    }

    pub fn contains_point(&self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains_box(&self, other: &IntervalBox) -> bool {
        self.re.contains_interval(&other.re) && self.im.contains_interval(&other.im)
    }

    pub fn intersects(&self, other: &IntervalBox) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn intersection(&self, other: &IntervalBox) -> Option<IntervalBox> {
        Some(IntervalBox {
            re: self.re.intersection(&other.re)?,
            im: self.im.intersection(&other.im)?,
        })
    }

    pub fn hull(&self, other: &IntervalBox) -> IntervalBox {
        IntervalBox {
            re: self.re.hull(&other.re),
            im: self.im.hull(&other.im),
        }
    }

    /// Upper bound of the diagonal length.
    pub fn diameter(&self) -> f64 {
        hypot_up(self.re.width(), self.im.width())
    }

    /// Upper bound of `|z|` over the box.
    pub fn mag(&self) -> f64 {
        hypot_up(self.re.mag(), self.im.mag())
    }

    /// Lower bound of `|z|` over the box.
    pub fn mig(&self) -> f64 {
        hypot_down(self.re.mig(), self.im.mig())
    }

    pub fn sqr(&self) -> IntervalBox {
        // (a + bi)^2 = a^2 - b^2 + 2abi
        let re = self.re.sqr() - self.im.sqr();
        let im = (self.re * self.im).scale(2.0);
        IntervalBox { re, im }
    }

    pub fn scale(&self, k: f64) -> IntervalBox {
        IntervalBox {
            re: self.re.scale(k),
            im: self.im.scale(k),
        }
    }
}

impl Add for IntervalBox {
    type Output = IntervalBox;
    fn add(self, rhs: IntervalBox) -> IntervalBox {
        IntervalBox {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for IntervalBox {
    type Output = IntervalBox;
    fn sub(self, rhs: IntervalBox) -> IntervalBox {
        IntervalBox {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for IntervalBox {
    type Output = IntervalBox;
    fn neg(self) -> IntervalBox {
        IntervalBox {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for IntervalBox {
    type Output = IntervalBox;
    fn mul(self, rhs: IntervalBox) -> IntervalBox {
        let re = self.re * rhs.re - self.im * rhs.im;
        let im = self.re * rhs.im + self.im * rhs.re;
        IntervalBox { re, im }
    }
}

impl fmt::Display for IntervalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;

    #[test]
    fn rational_enclosure_is_tight() {
        let tenth = BigRational::new(BigInt::one(), BigInt::from(10));
        let iv = Interval::from_rational(&tenth);
        assert!(!iv.is_point());
        assert!(exact_rational(iv.lo()).unwrap() < tenth);
        assert!(exact_rational(iv.hi()).unwrap() > tenth);
        assert_eq!(iv.lo().next_up(), iv.hi());

        let exact = BigRational::new(BigInt::from(15), BigInt::from(4));
        assert!(Interval::from_rational(&exact).is_point());
    }

    #[test]
    fn square_straddling_zero() {
        let x = Interval::new(-1.0, 2.0);
        let s = x.sqr();
        assert_eq!(s.lo(), 0.0);
        assert!(s.hi() >= 4.0);
    }

    #[test]
    fn nan_product_is_entire() {
        let a = Interval::new(0.0, 0.0);
        let b = Interval::ENTIRE;
        assert_eq!(a * b, Interval::ENTIRE);
    }

    #[test]
    fn mig_and_mag() {
        let b = IntervalBox::new(3.0, 4.0, -1.0, 1.0);
        assert!(b.mig() <= 3.0 && b.mig() > 2.999);
        assert!(b.mag() >= 17f64.sqrt());
    }
}
