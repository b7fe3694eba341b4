//! Rigorous reals, rotation-number specs and circle coordinates.

pub mod alpha;
pub mod quad;
pub mod real;

pub use alpha::{parse_alpha_spec, realize, Alpha, AlphaSpec, Exact};
pub use quad::QuadIrr;
pub use real::{zeta_ratio, Cmp, Real};

use rug::{Integer, Rational};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    #[error("malformed alpha spec: {0}")]
    Grammar(String),
    #[error("alpha is rational: {0}")]
    Rational(String),
    #[error("alpha outside (0,1): {0}")]
    OutOfRange(String),
    #[error("precision exhausted at {0} bits")]
    MaxBits(u32),
    #[error("bad precision policy: {0}")]
    Policy(String),
}

/// Bits ladder for refinement: start, ceiling, and the width we aim for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Policy {
    pub initial_bits: u32,
    pub max_bits: u32,
    target_width: Rational,
}

impl Default for Policy {
    fn default() -> Self {
        Policy::new(128, 8192, Rational::from((1, Integer::from(1) << 80))).unwrap()
    }
}

impl Policy {
    pub fn new(initial_bits: u32, max_bits: u32, target_width: Rational) -> Result<Policy, NumError> {
        if initial_bits == 0 || initial_bits > max_bits {
            return Err(NumError::Policy(format!("initial {initial_bits} > max {max_bits}")));
        }
        if target_width <= 0 {
            return Err(NumError::Policy("target width must be positive".into()));
        }
        Ok(Policy { initial_bits, max_bits, target_width })
    }

    pub fn target_width(&self) -> &Rational {
        &self.target_width
    }

    pub fn with_target(mut self, w: Rational) -> Policy {
        self.target_width = w;
        self
    }

    /// Doubling sequence initial, 2*initial, ... capped at max.
    pub fn ladder(&self) -> Vec<u32> {
        let mut out = vec![self.initial_bits];
        let mut b = self.initial_bits;
        while b < self.max_bits {
            b = (b * 2).min(self.max_bits);
            out.push(b);
        }
        out
    }
}

/// Runs `f` at increasing precision until it yields a value.
pub fn refine<T>(policy: &Policy, mut f: impl FnMut(u32) -> Option<T>) -> Option<T> {
    policy.ladder().into_iter().find_map(|b| f(b))
}

/// `{x}` with refinement; `x_at(bits)` must enclose the same value at each precision.
pub fn frac_refined(policy: &Policy, x_at: impl Fn(u32) -> Real) -> Result<Real, NumError> {
    refine(policy, |b| x_at(b).frac()).ok_or(NumError::MaxBits(policy.max_bits))
}

pub fn signed_frac_refined(policy: &Policy, x_at: impl Fn(u32) -> Real) -> Result<Real, NumError> {
    refine(policy, |b| x_at(b).signed_frac()).ok_or(NumError::MaxBits(policy.max_bits))
}

pub fn dist_nearest_refined(policy: &Policy, x_at: impl Fn(u32) -> Real) -> Result<Real, NumError> {
    refine(policy, |b| x_at(b).dist_nearest()).ok_or(NumError::MaxBits(policy.max_bits))
}

/// Compares two refinable values; INDETERMINATE only after max bits.
pub fn cmp_refined(policy: &Policy, x_at: impl Fn(u32) -> Real, y_at: impl Fn(u32) -> Real) -> Cmp {
    let mut last = Cmp::Indeterminate;
    for b in policy.ladder() {
        last = x_at(b).cmp(&y_at(b));
        if last != Cmp::Indeterminate {
            break;
        }
    }
    last
}

/// Compares two alpha-like values; identical exact representations are `Eq`.
pub fn cmp_exact(policy: &Policy, x: &Exact, y: &Exact) -> Cmp {
    if x.is_exact() && x == y {
        return Cmp::Eq;
    }
    cmp_refined(policy, |b| x.enclose(b), |b| y.enclose(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_ladder() {
        let p = Policy::default();
        assert_eq!(p.ladder(), vec![128, 256, 512, 1024, 2048, 4096, 8192]);
        assert!(Policy::new(256, 128, Rational::from(1)).is_err());
        assert!(Policy::new(64, 128, Rational::from(0)).is_err());
    }

    #[test]
    fn frac_of_two_golden() {
        let g = Alpha::parse("golden").unwrap();
        let p = Policy::default();
        let f = frac_refined(&p, |b| g.enclose(b).mul_u64(2)).unwrap();
        // 2 alpha - 1 = sqrt5 - 2
        let oracle = QuadIrr::new(Integer::from(-2), Integer::from(1), Integer::from(5)).enclose(256);
        assert!(f.overlaps(&oracle));
        assert!((f.to_f64() - 0.2360679774997897).abs() < 1e-15);
    }

    #[test]
    fn frac_exact_inputs() {
        let p = Policy::default();
        let z = frac_refined(&p, |b| Real::zero(b)).unwrap();
        assert_eq!(z.sign(), Some(0));
        let f = frac_refined(&p, |b| Real::ratio(-1, 4, b)).unwrap();
        assert!(f.contains_rational(&Rational::from((3, 4))));
        let s = signed_frac_refined(&p, |b| Real::ratio(3, 4, b)).unwrap();
        assert!(s.contains_rational(&Rational::from((-1, 4))));
        let d = dist_nearest_refined(&p, |b| Real::zero(b)).unwrap();
        assert_eq!(d.sign(), Some(0));
    }

    #[test]
    fn dist_nearest_three_golden() {
        let g = Alpha::parse("golden").unwrap();
        let p = Policy::default();
        let d = dist_nearest_refined(&p, |b| g.enclose(b).mul_u64(3)).unwrap();
        // (7 - 3 sqrt5)/2
        let oracle = QuadIrr::new(Integer::from(-7), Integer::from(-2), Integer::from(45)).enclose(256);
        assert!(d.overlaps(&oracle));
        assert!((d.to_f64() - 0.1458980337503154).abs() < 1e-15);
    }

    #[test]
    fn cmp_cases() {
        let g = Alpha::parse("golden").unwrap();
        let p = Policy::default();
        assert_eq!(cmp_refined(&p, |b| g.enclose(b), |b| Real::ratio(618, 1000, b)), Cmp::Gt);
        assert_eq!(cmp_exact(&p, &g.value, &g.value), Cmp::Eq);
        let third = Exact::Range(Rational::from((1, 3)), Rational::from((1, 3)));
        assert_eq!(cmp_exact(&p, &third, &third), Cmp::Indeterminate);
        assert_eq!(cmp_refined(&p, |b| Real::ratio(1, 2, b), |b| Real::ratio(1, 2, b)), Cmp::Eq);
        let tiny = Policy::new(64, 64, Rational::from(1)).unwrap();
        let x = Real::from_bounds(rug::Float::with_val(64, 0.1), rug::Float::with_val(64, 0.3));
        assert_eq!(cmp_refined(&tiny, |_| x.clone(), |b| Real::ratio(1, 5, b)), Cmp::Indeterminate);
    }
}
