use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::ops::{AddAssignRound, MulAssignRound, Pow, SubAssignRound};
use rug::{Float, Integer, Rational};

/// Closed interval `[lo, hi]` with MPFR endpoints, every operation rounded outward.
#[derive(Clone, PartialEq)]
pub struct Real {
    lo: Float,
    hi: Float,
}

/// Outcome of comparing two enclosures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Gt,
    Eq,
    Indeterminate,
}

fn down<T>(prec: u32, v: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Down).0
}

fn up<T>(prec: u32, v: T) -> Float
where
    Float: rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Up).0
}

impl Real {
    pub fn from_bounds(lo: Float, hi: Float) -> Real {
        debug_assert!(lo <= hi, "inverted interval");
        Real { lo, hi }
    }

    pub fn zero(prec: u32) -> Real {
        Real::from_i64(0, prec)
    }

    pub fn one(prec: u32) -> Real {
        Real::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Real {
        Real { lo: down(prec, v), hi: up(prec, v) }
    }

    pub fn from_u64(v: u64, prec: u32) -> Real {
        Real { lo: down(prec, v), hi: up(prec, v) }
    }

    /// Exact point enclosure of a finite `f64`.
    pub fn from_f64(v: f64, prec: u32) -> Real {
        let f = Float::with_val(prec.max(53), v);
        Real::from_bounds(f.clone(), f)
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Real {
        Real { lo: down(prec, v), hi: up(prec, v) }
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Real {
        Real { lo: down(prec, v), hi: up(prec, v) }
    }

    /// Hull of two exact rationals (`a <= b`).
    pub fn from_rational_range(a: &Rational, b: &Rational, prec: u32) -> Real {
        Real { lo: down(prec, a), hi: up(prec, b) }
    }

    pub fn ratio(num: i64, den: i64, prec: u32) -> Real {
        Real::from_rational(&Rational::from((num, den)), prec)
    }

    pub fn pi(prec: u32) -> Real {
        Real { lo: down(prec, Constant::Pi), hi: up(prec, Constant::Pi) }
    }

    pub fn ln2(prec: u32) -> Real {
        Real { lo: down(prec, Constant::Log2), hi: up(prec, Constant::Log2) }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec()
    }

    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    /// Midpoint (rounded to nearest) and a radius that covers the interval from it.
    pub fn mid_rad(&self) -> (Float, Float) {
        let p = self.prec();
        let mut mid = Float::with_val(p + 2, &self.lo + &self.hi);
        mid /= 2;
        let r1 = up(p, &self.hi - &mid);
        let r2 = up(p, &mid - &self.lo);
        (mid, if r1 > r2 { r1 } else { r2 })
    }

    pub fn to_f64(&self) -> f64 {
        let (m, _) = self.mid_rad();
        m.to_f64()
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn contains_rational(&self, v: &Rational) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn contains_f64(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains(&self, o: &Real) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn overlaps(&self, o: &Real) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0
    }

    pub fn is_nonneg(&self) -> bool {
        self.lo >= 0
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    /// Sign if decided: `Some(1)`, `Some(-1)`, or `Some(0)` for the exact point zero.
    pub fn sign(&self) -> Option<i32> {
        if self.lo > 0 {
            Some(1)
        } else if self.hi < 0 {
            Some(-1)
        } else if self.lo == 0 && self.hi == 0 {
            Some(0)
        } else {
            None
        }
    }

    pub fn cmp(&self, o: &Real) -> Cmp {
        if self.hi < o.lo {
            Cmp::Lt
        } else if self.lo > o.hi {
            Cmp::Gt
        } else if self.lo == self.hi && o.lo == o.hi && self.lo == o.lo {
            Cmp::Eq
        } else {
            Cmp::Indeterminate
        }
    }

    /// `Some(true)` when certainly `self < o`, `Some(false)` when certainly `self >= o`.
    pub fn lt(&self, o: &Real) -> Option<bool> {
        if self.hi < o.lo {
            Some(true)
        } else if self.lo >= o.hi {
            Some(false)
        } else {
            None
        }
    }

    pub fn le(&self, o: &Real) -> Option<bool> {
        if self.hi <= o.lo {
            Some(true)
        } else if self.lo > o.hi {
            Some(false)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Real {
        Real { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn add(&self, o: &Real) -> Real {
        let p = self.prec().max(o.prec());
        Real { lo: down(p, &self.lo + &o.lo), hi: up(p, &self.hi + &o.hi) }
    }

    pub fn sub(&self, o: &Real) -> Real {
        let p = self.prec().max(o.prec());
        Real { lo: down(p, &self.lo - &o.hi), hi: up(p, &self.hi - &o.lo) }
    }

    pub fn add_assign(&mut self, o: &Real) {
        self.lo.add_assign_round(&o.lo, Round::Down);
        self.hi.add_assign_round(&o.hi, Round::Up);
    }

    pub fn sub_assign(&mut self, o: &Real) {
        self.lo.sub_assign_round(&o.hi, Round::Down);
        self.hi.sub_assign_round(&o.lo, Round::Up);
    }

    pub fn add_i64(&self, k: i64) -> Real {
        let p = self.prec();
        Real { lo: down(p, &self.lo + k), hi: up(p, &self.hi + k) }
    }

    pub fn add_integer(&self, k: &Integer) -> Real {
        let p = self.prec();
        Real { lo: down(p, &self.lo + k), hi: up(p, &self.hi + k) }
    }

    pub fn mul(&self, o: &Real) -> Real {
        let p = self.prec().max(o.prec());
        if self.lo >= 0 && o.lo >= 0 {
            return Real { lo: down(p, &self.lo * &o.lo), hi: up(p, &self.hi * &o.hi) };
        }
        let cands = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in cands {
            let l = down(p, a * b);
            let h = up(p, a * b);
            if lo.as_ref().map_or(true, |x| l < *x) {
                lo = Some(l);
            }
            if hi.as_ref().map_or(true, |x| h > *x) {
                hi = Some(h);
            }
        }
        Real { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    pub fn mul_u64(&self, k: u64) -> Real {
        let p = self.prec();
        Real { lo: down(p, &self.lo * k), hi: up(p, &self.hi * k) }
    }

    pub fn mul_i64(&self, k: i64) -> Real {
        if k >= 0 {
            self.mul_u64(k as u64)
        } else {
            self.mul_u64(k.unsigned_abs()).neg()
        }
    }

    pub fn mul_integer(&self, k: &Integer) -> Real {
        let p = self.prec();
        if *k >= 0 {
            Real { lo: down(p, &self.lo * k), hi: up(p, &self.hi * k) }
        } else {
            Real { lo: down(p, &self.hi * k), hi: up(p, &self.lo * k) }
        }
    }

    pub fn mul_u64_assign(&mut self, k: u64) {
        self.lo.mul_assign_round(k, Round::Down);
        self.hi.mul_assign_round(k, Round::Up);
    }

    pub fn div_u64(&self, k: u64) -> Real {
        assert!(k > 0);
        let p = self.prec();
        Real { lo: down(p, &self.lo / k), hi: up(p, &self.hi / k) }
    }

    /// Reciprocal; `None` when the enclosure touches zero.
    pub fn recip(&self) -> Option<Real> {
        if self.contains_zero() {
            return None;
        }
        let p = self.prec();
        Some(Real { lo: down(p, 1 / &self.hi), hi: up(p, 1 / &self.lo) })
    }

    pub fn div(&self, o: &Real) -> Option<Real> {
        Some(self.mul(&o.recip()?))
    }

    pub fn sqr(&self) -> Real {
        let p = self.prec();
        if self.lo >= 0 {
            Real { lo: down(p, self.lo.square_ref()), hi: up(p, self.hi.square_ref()) }
        } else if self.hi <= 0 {
            Real { lo: down(p, self.hi.square_ref()), hi: up(p, self.lo.square_ref()) }
        } else {
            let a = up(p, self.lo.square_ref());
            let b = up(p, self.hi.square_ref());
            Real { lo: Float::with_val(p, 0), hi: if a > b { a } else { b } }
        }
    }

    /// `x^k` for `x >= 0`.
    pub fn pow_u32(&self, k: u32) -> Option<Real> {
        if self.lo < 0 {
            return None;
        }
        let p = self.prec();
        Some(Real { lo: down(p, (&self.lo).pow(k)), hi: up(p, (&self.hi).pow(k)) })
    }

    /// `x^(1/k)` for `x >= 0`.
    pub fn root(&self, k: u32) -> Option<Real> {
        if self.lo < 0 || k == 0 {
            return None;
        }
        let p = self.prec();
        Some(Real { lo: down(p, self.lo.root_ref(k)), hi: up(p, self.hi.root_ref(k)) })
    }

    pub fn sqrt(&self) -> Option<Real> {
        if self.lo < 0 {
            return None;
        }
        let p = self.prec();
        Some(Real { lo: down(p, self.lo.sqrt_ref()), hi: up(p, self.hi.sqrt_ref()) })
    }

    /// `x^(num/den)` for `x > 0`, `num/den >= 0`.
    pub fn pow_ratio(&self, num: u32, den: u32) -> Option<Real> {
        if !self.is_positive() {
            return None;
        }
        let a = if num == 1 { self.clone() } else { self.pow_u32(num)? };
        match den {
            1 => Some(a),
            2 => a.sqrt(),
            _ => a.root(den),
        }
    }

    /// `x^(-num/den)` for `x > 0`.
    pub fn pow_neg_ratio(&self, num: u32, den: u32) -> Option<Real> {
        self.pow_ratio(num, den)?.recip()
    }

    pub fn ln(&self) -> Option<Real> {
        if !self.is_positive() {
            return None;
        }
        let p = self.prec();
        Some(Real { lo: down(p, self.lo.ln_ref()), hi: up(p, self.hi.ln_ref()) })
    }

    pub fn exp(&self) -> Real {
        let p = self.prec();
        Real { lo: down(p, self.lo.exp_ref()), hi: up(p, self.hi.exp_ref()) }
    }

    /// `cot(pi x)` for `0 < x < 1` (decreasing there).
    pub fn cot_pi(&self) -> Option<Real> {
        if self.lo <= 0 || self.hi >= 1 {
            return None;
        }
        let p = self.prec() + 8;
        let pi = Real::pi(p);
        let xa = Real { lo: Float::with_val(p, &self.lo), hi: Float::with_val(p, &self.hi) };
        let arg = xa.mul(&pi);
        if arg.lo <= 0 || arg.hi >= pi.lo {
            return None;
        }
        let lo = down(self.prec(), arg.hi.cot_ref());
        let hi = up(self.prec(), arg.lo.cot_ref());
        Some(Real { lo, hi })
    }

    /// `(sin t, cos t)` enclosures via midpoint evaluation plus the Lipschitz bound 1.
    pub fn sin_cos(&self) -> (Real, Real) {
        let p = self.prec();
        let (m, r) = self.mid_rad();
        let m = Float::with_val(p + 8, m);
        let slo = down(p, m.sin_ref());
        let shi = up(p, m.sin_ref());
        let clo = down(p, m.cos_ref());
        let chi = up(p, m.cos_ref());
        let clamp = |lo: Float, hi: Float| {
            let mut lo = down(p, &lo - &r);
            let mut hi = up(p, &hi + &r);
            if lo < -1 {
                lo = Float::with_val(p, -1);
            }
            if hi > 1 {
                hi = Float::with_val(p, 1);
            }
            Real { lo, hi }
        };
        (clamp(slo, shi), clamp(clo, chi))
    }

    /// `(sin 2 pi x, cos 2 pi x)`.
    pub fn sin_cos_2pi(&self) -> (Real, Real) {
        let p = self.prec() + 8;
        let two_pi = Real::pi(p).mul_u64(2);
        let xa = Real { lo: Float::with_val(p, &self.lo), hi: Float::with_val(p, &self.hi) };
        let (s, c) = xa.mul(&two_pi).sin_cos();
        (s.with_prec(self.prec()), c.with_prec(self.prec()))
    }

    pub fn with_prec(&self, prec: u32) -> Real {
        Real { lo: down(prec, &self.lo), hi: up(prec, &self.hi) }
    }

    pub fn abs(&self) -> Real {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let a = -self.lo.clone();
            let hi = if a > self.hi { a } else { self.hi.clone() };
            Real { lo: Float::with_val(self.prec(), 0), hi }
        }
    }

    pub fn max(&self, o: &Real) -> Real {
        let lo = if self.lo > o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi > o.hi { self.hi.clone() } else { o.hi.clone() };
        Real { lo, hi }
    }

    pub fn min(&self, o: &Real) -> Real {
        let lo = if self.lo < o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi < o.hi { self.hi.clone() } else { o.hi.clone() };
        Real { lo, hi }
    }

    pub fn hull(&self, o: &Real) -> Real {
        let lo = if self.lo < o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi > o.hi { self.hi.clone() } else { o.hi.clone() };
        Real { lo, hi }
    }

    /// Floor if both endpoints agree.
    pub fn floor(&self) -> Option<Integer> {
        let a = self.lo.to_integer_round(Round::Down)?.0;
        let b = self.hi.to_integer_round(Round::Down)?.0;
        (a == b).then_some(a)
    }

    /// `{x}` in `[0, 1)`; `None` if the enclosure straddles an integer.
    pub fn frac(&self) -> Option<Real> {
        let k = self.floor()?;
        let p = self.prec();
        Some(Real { lo: down(p, &self.lo - &k), hi: up(p, &self.hi - &k) })
    }

    /// `{{x}}` in `[-1/2, 1/2)`; `None` if the enclosure straddles a half-integer.
    pub fn signed_frac(&self) -> Option<Real> {
        let shifted = self.add_ratio_half();
        let k = shifted.floor()?;
        let p = self.prec();
        Some(Real { lo: down(p, &self.lo - &k), hi: up(p, &self.hi - &k) })
    }

    fn add_ratio_half(&self) -> Real {
        let p = self.prec() + 1;
        let half = Float::with_val(p, 0.5);
        Real { lo: down(p, &self.lo + &half), hi: up(p, &self.hi + &half) }
    }

    /// `||x||`, distance to the nearest integer.
    pub fn dist_nearest(&self) -> Option<Real> {
        Some(self.signed_frac()?.abs())
    }

    /// Decimal rendering of the two endpoints, rounded outward to `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (
            self.lo.to_string_radix_round(10, Some(digits), Round::Down),
            self.hi.to_string_radix_round(10, Some(digits), Round::Up),
        )
    }

    /// Whole-interval parse of a decimal pair produced by `to_decimal`.
    pub fn from_decimal(lo: &str, hi: &str, prec: u32) -> Option<Real> {
        let l = Float::parse(lo).ok()?;
        let h = Float::parse(hi).ok()?;
        Some(Real { lo: down(prec, l), hi: up(prec, h) })
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Real>>(prec: u32, it: I) -> Real {
        let mut acc = Real::zero(prec);
        for x in it {
            acc.add_assign(x);
        }
        acc
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_decimal(12);
        write!(f, "[{a}, {b}]")
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_decimal(20);
        write!(f, "[{a}, {b}]")
    }
}

/// Returns `zeta(s)` for `s = num/den > 1`, or `None` at `s = 1`.
pub fn zeta_ratio(num: u32, den: u32, prec: u32) -> Option<Real> {
    if num <= den {
        return None;
    }
    let s = Real::ratio(num as i64, den as i64, prec + 16);
    // zeta decreasing on (1, inf)
    let lo = down(prec, s.hi.zeta_ref());
    let hi = up(prec, s.lo.zeta_ref());
    Some(Real { lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_encloses() {
        let p = Real::pi(128);
        assert!(p.contains_f64(std::f64::consts::PI) || p.width() < 1e-30);
        assert!(p.width() < Float::with_val(64, 1e-36));
    }

    #[test]
    fn frac_and_signed() {
        let x = Real::ratio(7, 3, 128);
        let f = x.frac().unwrap();
        assert!(f.contains_rational(&Rational::from((1, 3))));
        let y = Real::ratio(8, 3, 128);
        let s = y.signed_frac().unwrap();
        assert!(s.contains_rational(&Rational::from((-1, 3))));
        let d = y.dist_nearest().unwrap();
        assert!(d.contains_rational(&Rational::from((1, 3))));
    }

    #[test]
    fn straddle_is_none() {
        let x = Real::from_bounds(Float::with_val(64, 0.99), Float::with_val(64, 1.01));
        assert!(x.frac().is_none());
        let h = Real::from_bounds(Float::with_val(64, 0.49), Float::with_val(64, 0.51));
        assert!(h.signed_frac().is_none());
    }

    #[test]
    fn cot_quarter() {
        let c = Real::ratio(1, 4, 128).cot_pi().unwrap();
        assert!(c.contains_rational(&Rational::from(1)));
        assert!(c.width() < Float::with_val(64, 1e-35));
    }

    #[test]
    fn zeta_two() {
        let z = zeta_ratio(2, 1, 128).unwrap();
        let pi2_6 = Real::pi(128).sqr().div_u64(6);
        assert!(z.overlaps(&pi2_6));
        assert!(zeta_ratio(1, 1, 64).is_none());
    }

    #[test]
    fn pow_neg_ratio_three_halves() {
        // 4^(-3/2) = 1/8
        let v = Real::from_i64(4, 128).pow_neg_ratio(3, 2).unwrap();
        assert!(v.contains_rational(&Rational::from((1, 8))));
    }

    #[test]
    fn decimal_outward() {
        let x = Real::ratio(1, 3, 128);
        let (a, b) = x.to_decimal(20);
        let back = Real::from_decimal(&a, &b, 128).unwrap();
        assert!(back.contains(&x));
    }
}
