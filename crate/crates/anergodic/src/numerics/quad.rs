use rug::{Integer, Rational};

use super::real::Real;

/// Exact quadratic irrational `(m + sqrt(disc)) / d` with `d | disc - m^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadIrr {
    pub m: Integer,
    pub d: Integer,
    pub disc: Integer,
}

fn floor_div(a: &Integer, b: &Integer) -> Integer {
    let (q, _) = a.clone().div_rem_floor(b.clone());
    q
}

impl QuadIrr {
    /// Builds `(m + sqrt(disc)) / d`, rescaling so the divisibility invariant holds.
    pub fn new(m: Integer, d: Integer, disc: Integer) -> QuadIrr {
        assert!(d != 0, "zero denominator");
        assert!(disc > 0 && !disc.is_perfect_square(), "discriminant must be a positive non-square");
        let rem = Integer::from(&disc - m.clone().square()) % &d;
        if rem == 0 {
            return QuadIrr { m, d, disc };
        }
        // multiply numerator and denominator by |d|: (m|d| + sqrt(disc d^2)) / (d|d|)
        let ad = d.clone().abs();
        let m2 = Integer::from(&m * &ad);
        let disc2 = Integer::from(&disc * d.clone().square());
        let d2 = Integer::from(&d * &ad);
        QuadIrr { m: m2, d: d2, disc: disc2 }
    }

    /// `(p + q sqrt(disc)) / r + shift` for `q != 0`.
    pub fn from_surd(p: &Integer, q: &Integer, disc: &Integer, r: &Integer, shift: &Integer) -> QuadIrr {
        assert!(*q != 0 && *r != 0);
        let (p, r) = if *q < 0 { (Integer::from(-p), Integer::from(-r)) } else { (p.clone(), r.clone()) };
        let q = q.clone().abs();
        // (p + sqrt(q^2 disc)) / r, then add the shift as shift*r/r
        let disc = Integer::from(q.square() * disc);
        let m = Integer::from(&p + Integer::from(shift * &r));
        QuadIrr::new(m, r, disc)
    }

    pub fn floor(&self) -> Integer {
        let s = self.disc.clone().sqrt();
        if self.d > 0 {
            floor_div(&Integer::from(&self.m + &s), &self.d)
        } else {
            // sqrt(disc) is irrational, so (m + sqrt)/d with d<0 lies in ((m+s+1)/d, (m+s)/d)
            floor_div(&(Integer::from(&self.m + &s) + 1u32), &self.d)
        }
    }

    pub fn add_int(&self, k: &Integer) -> QuadIrr {
        QuadIrr { m: Integer::from(&self.m + Integer::from(k * &self.d)), d: self.d.clone(), disc: self.disc.clone() }
    }

    /// `1 / x` for `x != 0`.
    pub fn recip(&self) -> QuadIrr {
        // d/(m + sqrt D) = (-m + sqrt D) / ((D - m^2)/d)
        let nd = Integer::from(&self.disc - self.m.clone().square()) / &self.d;
        QuadIrr { m: Integer::from(-&self.m), d: nd, disc: self.disc.clone() }
    }

    /// `1 - x`.
    pub fn one_minus(&self) -> QuadIrr {
        QuadIrr { m: Integer::from(&self.m - &self.d), d: Integer::from(-&self.d), disc: self.disc.clone() }
    }

    /// One Gauss step: returns `(floor x, 1/(x - floor x))`.
    pub fn step(&self) -> (Integer, QuadIrr) {
        let a = self.floor();
        let frac = self.add_int(&Integer::from(-&a));
        (a, frac.recip())
    }

    pub fn enclose(&self, prec: u32) -> Real {
        let p = prec + 16;
        let s = Real::from_integer(&self.disc, p).sqrt().expect("positive discriminant");
        let num = s.add_integer(&self.m);
        let den = Real::from_integer(&self.d, p);
        num.div(&den).expect("nonzero denominator").with_prec(prec)
    }

    /// Rational lower/upper bounds `floor(x)` and `floor(x) + 1` hulls are not tight; this gives
    /// a rational pair bracketing `x` within `2^-bits`.
    pub fn bracket(&self, bits: u32) -> (Rational, Rational) {
        let scale = Integer::from(1) << (2 * bits);
        let big = Integer::from(&self.disc * &scale);
        let s = big.sqrt();
        let den = Integer::from(1) << bits;
        let lo_num = Integer::from(&self.m * &den) + &s;
        let hi_num = Integer::from(&lo_num + 1u32);
        let a = Rational::from((lo_num, Integer::from(&den * &self.d)));
        let b = Rational::from((hi_num, Integer::from(&den * &self.d)));
        if a <= b { (a, b) } else { (b, a) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(m: i64, d: i64, disc: i64) -> QuadIrr {
        QuadIrr::new(Integer::from(m), Integer::from(d), Integer::from(disc))
    }

    #[test]
    fn golden_steps() {
        // (sqrt5 - 1)/2 = [0; 1, 1, 1, ...]
        let mut x = q(-1, 2, 5);
        assert_eq!(x.floor(), 0);
        for _ in 0..20 {
            let (a, next) = x.step();
            x = next;
            let _ = a;
            assert_eq!(x.floor(), 1);
        }
    }

    #[test]
    fn sqrt2_minus_one() {
        let mut x = q(-1, 1, 2);
        let (a0, nx) = x.step();
        assert_eq!(a0, 0);
        x = nx;
        for _ in 0..10 {
            let (a, nx) = x.step();
            assert_eq!(a, 2);
            x = nx;
        }
    }

    #[test]
    fn negative_denominator_floor() {
        // 1 - (sqrt5-1)/2 = (3 - sqrt5)/2 ~ 0.381966
        let x = q(-1, 2, 5).one_minus();
        assert_eq!(x.floor(), 0);
        let e = x.enclose(128);
        assert!(e.contains_f64(0.3819660112501051) || e.width() < 1e-30);
        assert!((e.to_f64() - 0.3819660112501051).abs() < 1e-15);
    }

    #[test]
    fn surd_with_shift() {
        // (0 + 1*sqrt 2)/1 - 1
        let x = QuadIrr::from_surd(&Integer::from(0), &Integer::from(1), &Integer::from(2), &Integer::from(1), &Integer::from(-1));
        assert!((x.enclose(64).to_f64() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        // negative q: (1 - sqrt 3)/(-2) = (sqrt3 - 1)/2
        let y = QuadIrr::from_surd(&Integer::from(1), &Integer::from(-1), &Integer::from(3), &Integer::from(-2), &Integer::from(0));
        assert!((y.enclose(64).to_f64() - (3f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn bracket_contains() {
        let x = q(-1, 2, 5);
        let (a, b) = x.bracket(100);
        let e = x.enclose(256);
        assert!(Real::from_rational(&a, 256).lt(&e) == Some(true));
        assert!(e.lt(&Real::from_rational(&b, 256)) == Some(true));
    }
}
