use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use rug::{Integer, Rational};

use super::quad::QuadIrr;
use super::real::Real;
use super::{NumError, Policy};

/// A parsed rotation-number specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaSpec {
    /// `(p + q sqrt(d)) / r + shift`
    Surd { p: Integer, q: Integer, d: Integer, r: Integer, shift: Integer },
    /// `[0; preamble..., (period)...]`
    Cf { preamble: Vec<u64>, period: Vec<u64> },
    /// Decimal literal, trusted to `bits` binary places.
    Dec { digits: String, bits: u32 },
}

/// The exact or interval source from which enclosures of alpha are drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exact {
    Quad(QuadIrr),
    /// Closed rational interval known to contain the value.
    Range(Rational, Rational),
}

impl Exact {
    pub fn enclose(&self, prec: u32) -> Real {
        match self {
            Exact::Quad(q) => q.enclose(prec),
            Exact::Range(a, b) => Real::from_rational_range(a, b, prec),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Exact::Quad(_))
    }
}

/// A validated rotation number in (0, 1) together with its spec text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alpha {
    pub spec: AlphaSpec,
    pub text: String,
    pub value: Exact,
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn surd_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\(\s*([+-]?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*/\s*([+-]?\d+)\s*(?:([+-])\s*(\d+))?$")
            .unwrap()
    })
}

fn int(s: &str) -> Integer {
    Integer::from_str_radix(s.trim_start_matches('+'), 10).expect("regex-checked integer")
}

pub fn parse_alpha_spec(text: &str) -> Result<AlphaSpec, NumError> {
    let t = text.trim();
    let bad = |why: &str| NumError::Grammar(format!("{t}: {why}"));
    match t {
        "golden" => {
            return Ok(AlphaSpec::Surd {
                p: Integer::from(-1),
                q: Integer::from(1),
                d: Integer::from(5),
                r: Integer::from(2),
                shift: Integer::new(),
            })
        }
        "sqrt2m1" => {
            return Ok(AlphaSpec::Surd {
                p: Integer::from(-1),
                q: Integer::from(1),
                d: Integer::from(2),
                r: Integer::from(1),
                shift: Integer::new(),
            })
        }
        _ => {}
    }
    if let Some(rest) = t.strip_prefix("surd:") {
        let c = surd_re().captures(rest.trim()).ok_or_else(|| bad("expected (P+Q*sqrt(D))/R"))?;
        let p = int(&c[1]);
        let mut q = int(&c[3]);
        if &c[2] == "-" {
            q = -q;
        }
        let d = int(&c[4]);
        let r = int(&c[5]);
        let mut shift = c.get(7).map(|m| int(m.as_str())).unwrap_or_default();
        if c.get(6).map(|m| m.as_str()) == Some("-") {
            shift = -shift;
        }
        if r == 0 {
            return Err(bad("zero denominator"));
        }
        if q == 0 || d == 0 || d.is_perfect_square() {
            return Err(NumError::Rational(t.to_string()));
        }
        return Ok(AlphaSpec::Surd { p, q, d, r, shift });
    }
    if let Some(rest) = t.strip_prefix("cf:") {
        let open = rest.find('[').ok_or_else(|| NumError::Rational(t.to_string()))?;
        if !rest.ends_with(']') {
            return Err(bad("periodic block must close the list"));
        }
        let head = rest[..open].trim().trim_end_matches(',');
        let body = &rest[open + 1..rest.len() - 1];
        let digits = |s: &str| -> Result<Vec<u64>, NumError> {
            if s.trim().is_empty() {
                return Ok(Vec::new());
            }
            s.split(',')
                .map(|x| match x.trim().parse::<u64>() {
                    Ok(v) if v >= 1 => Ok(v),
                    _ => Err(bad("digits must be integers >= 1")),
                })
                .collect()
        };
        let preamble = digits(head)?;
        let period = digits(body)?;
        if period.is_empty() {
            return Err(NumError::Rational(t.to_string()));
        }
        return Ok(AlphaSpec::Cf { preamble, period });
    }
    if let Some(rest) = t.strip_prefix("dec:") {
        let (digits, bits) = rest.rsplit_once(':').ok_or_else(|| bad("expected dec:DIGITS:BITS"))?;
        let bits: u32 = bits.trim().parse().map_err(|_| bad("bits must be a positive integer"))?;
        let ok = Regex::new(r"^0?\.\d+$").unwrap();
        if bits == 0 || !ok.is_match(digits.trim()) {
            return Err(bad("expected a decimal in (0,1) like 0.6180339887"));
        }
        return Ok(AlphaSpec::Dec { digits: digits.trim().to_string(), bits });
    }
    Err(bad("unknown alpha form"))
}

/// Value of the purely periodic block `[p1; p2, ..., pm, p1, ...]` (> 1).
fn periodic_root(period: &[u64]) -> QuadIrr {
    // convergents of [p1; ..., pm]: y = (P y + P') / (Q y + Q')
    let (mut pp, mut p) = (Integer::from(0), Integer::from(1));
    let (mut qq, mut q) = (Integer::from(1), Integer::from(0));
    for &a in period {
        let np = Integer::from(a) * &p + &pp;
        let nq = Integer::from(a) * &q + &qq;
        pp = std::mem::replace(&mut p, np);
        qq = std::mem::replace(&mut q, nq);
    }
    // Q y^2 + (Q' - P) y - P' = 0
    let b = Integer::from(&qq - &p);
    let disc = Integer::from(b.clone().square() + Integer::from(4 * Integer::from(&q * &pp)));
    QuadIrr::new(Integer::from(-b), Integer::from(2 * q), disc)
}

fn cf_to_quad(preamble: &[u64], period: &[u64]) -> QuadIrr {
    let mut x = periodic_root(period);
    for &a in preamble.iter().rev() {
        x = x.recip().add_int(&Integer::from(a));
    }
    x.recip()
}

fn dec_value(digits: &str) -> Rational {
    let frac = digits.split_once('.').map(|(_, f)| f).unwrap_or("");
    let num = Integer::from_str_radix(frac, 10).unwrap_or_default();
    let den = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
    Rational::from((num, den))
}

/// Rational of smallest denominator in `[a, b]`, `0 < a <= b`.
fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    let fa = a.clone().floor();
    if fa == *a {
        return fa;
    }
    let fb = b.clone().floor();
    if fa < fb {
        return fa + 1u32;
    }
    let lo = Rational::from(1) / Rational::from(b - &fa);
    let hi = Rational::from(1) / Rational::from(a - &fa);
    fa + Rational::from(1) / simplest_between(&lo, &hi)
}

impl Alpha {
    pub fn parse(text: &str) -> Result<Alpha, NumError> {
        let spec = parse_alpha_spec(text)?;
        Alpha::from_spec(spec, text.trim())
    }

    pub fn from_spec(spec: AlphaSpec, text: &str) -> Result<Alpha, NumError> {
        let value = match &spec {
            AlphaSpec::Surd { p, q, d, r, shift } => Exact::Quad(QuadIrr::from_surd(p, q, d, r, shift)),
            AlphaSpec::Cf { preamble, period } => Exact::Quad(cf_to_quad(preamble, period)),
            AlphaSpec::Dec { digits, bits } => {
                let v = dec_value(digits);
                let rad = Rational::from((1, Integer::from(1) << *bits));
                let lo = Rational::from(&v - &rad);
                let hi = Rational::from(&v + &rad);
                let qmax = Integer::from(1) << (*bits / 4).max(1);
                if *simplest_between(&lo, &hi).denom() <= qmax {
                    return Err(NumError::Rational(text.to_string()));
                }
                Exact::Range(lo, hi)
            }
        };
        let inside = match &value {
            Exact::Quad(q) => q.floor() == 0,
            Exact::Range(a, b) => *a > 0 && *b < 1,
        };
        if !inside {
            return Err(NumError::OutOfRange(text.to_string()));
        }
        Ok(Alpha { spec, text: text.to_string(), value })
    }

    pub fn enclose(&self, prec: u32) -> Real {
        self.value.enclose(prec)
    }

    pub fn quad(&self) -> Option<&QuadIrr> {
        match &self.value {
            Exact::Quad(q) => Some(q),
            Exact::Range(..) => None,
        }
    }

    /// `1 - alpha`, keeping exactness.
    pub fn complement(&self) -> Alpha {
        let value = match &self.value {
            Exact::Quad(q) => Exact::Quad(q.one_minus()),
            Exact::Range(a, b) => Exact::Range(Rational::from(1 - b.clone()), Rational::from(1 - a.clone())),
        };
        Alpha { spec: self.spec.clone(), text: format!("1-({})", self.text), value }
    }

    /// Width of the declared uncertainty, if any.
    pub fn declared_width(&self) -> Option<Rational> {
        match &self.value {
            Exact::Quad(_) => None,
            Exact::Range(a, b) => Some(Rational::from(b - a)),
        }
    }
}

/// Enclosure of alpha whose width meets the policy target.
pub fn realize(alpha: &Alpha, policy: &Policy) -> Result<Real, NumError> {
    super::refine(policy, |bits| {
        let e = alpha.enclose(bits);
        (e.width() <= *policy.target_width()).then_some(e)
    })
    .ok_or(NumError::MaxBits(policy.max_bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_shortcuts() {
        let g = parse_alpha_spec("golden").unwrap();
        assert_eq!(
            g,
            AlphaSpec::Surd { p: (-1).into(), q: 1.into(), d: 5.into(), r: 2.into(), shift: 0.into() }
        );
        let s = Alpha::parse("surd:(0+1*sqrt(2))/1-1").unwrap();
        let t = Alpha::parse("sqrt2m1").unwrap();
        assert!(s.enclose(128).overlaps(&t.enclose(128)));
    }

    #[test]
    fn cf_period_matches_sqrt2() {
        let a = Alpha::parse("cf:2,[2]").unwrap();
        let b = Alpha::parse("sqrt2m1").unwrap();
        let ea = a.enclose(256);
        let eb = b.enclose(256);
        assert!(ea.overlaps(&eb));
        assert!(ea.width() < rug::Float::with_val(64, 1e-70));
    }

    #[test]
    fn rejects() {
        assert!(matches!(parse_alpha_spec("cf:1,2,3"), Err(NumError::Rational(_))));
        assert!(matches!(Alpha::parse("dec:0.5:64"), Err(NumError::Rational(_))));
        assert!(matches!(Alpha::parse("surd:(1+1*sqrt(2))/1"), Err(NumError::OutOfRange(_))));
        assert!(matches!(parse_alpha_spec("surd:(1+1*sqrt(4))/3"), Err(NumError::Rational(_))));
        assert!(parse_alpha_spec("cf:0,[1]").is_err());
        assert!(parse_alpha_spec("pi").is_err());
    }

    #[test]
    fn decimal_accepts_irrational_looking() {
        let a = Alpha::parse("dec:0.41421356237309504880168872420969807856967187537694:96").unwrap();
        let e = a.enclose(128);
        assert!(e.overlaps(&Alpha::parse("sqrt2m1").unwrap().enclose(128)));
    }

    #[test]
    fn realize_golden_width() {
        let g = Alpha::parse("golden").unwrap();
        let p = Policy::new(128, 8192, Rational::from((1, Integer::from(1) << 64))).unwrap();
        let e = realize(&g, &p).unwrap();
        assert!(e.contains_f64(0.6180339887498949) || e.width() < 1e-30);
        assert!(e.width() <= Rational::from((1, Integer::from(1) << 64)));
    }
}
