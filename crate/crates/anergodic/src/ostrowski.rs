//! Ostrowski numeration in the quasiperiod weights and the canonical `(r, s, t)` addressing.

use thiserror::Error;

use crate::cf_engine::{CfError, QuasiperiodTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OstrowskiError {
    #[error(transparent)]
    Table(#[from] CfError),
    #[error("index {m} outside 1..={n}")]
    Range { m: u64, n: u64 },
}

/// `N = sum b_r q_r` with greedy-maximal digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OstrowskiRep {
    pub n_value: u64,
    /// `b[r]` for `0 <= r <= n`; empty for `N = 0`.
    pub b: Vec<u64>,
    /// `q_r` for `0 <= r <= n`.
    pub q: Vec<u64>,
    /// `a_{r+1}` for `0 <= r <= n`.
    pub a_next: Vec<u64>,
    /// `r00[k + 1] = sum_{u > k} b_u q_u` for `-1 <= k <= n`.
    r00: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub r: usize,
    pub s: u64,
    pub t: u64,
}

impl Triple {
    pub fn even(&self) -> bool {
        self.r % 2 == 0
    }
}

impl OstrowskiRep {
    /// Top index `n` (meaningless for N = 0).
    pub fn top(&self) -> usize {
        self.b.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn digit(&self, r: isize) -> u64 {
        if r < 0 || r as usize >= self.b.len() {
            0
        } else {
            self.b[r as usize]
        }
    }

    /// `k00 = sum_{u > k} b_u q_u` for `-1 <= k <= n`.
    pub fn k00(&self, k: isize) -> u64 {
        self.r00[(k + 1) as usize]
    }

    pub fn digit_sum(&self) -> u64 {
        self.b.iter().sum()
    }
}

/// Greedy representation from the top weight down.
pub fn represent(t: &QuasiperiodTable, n_value: u64) -> Result<OstrowskiRep, OstrowskiError> {
    if n_value == 0 {
        return Ok(OstrowskiRep { n_value: 0, b: vec![], q: vec![], a_next: vec![], r00: vec![0] });
    }
    let n = t.index_n(n_value)?;
    let q: Vec<u64> = (0..=n).map(|r| t.qu(r as isize)).collect();
    let a_next: Vec<u64> = (0..=n).map(|r| t.a(r + 1)).collect();
    let mut b = vec![0u64; n + 1];
    let mut rem = n_value;
    for r in (0..=n).rev() {
        b[r] = rem / q[r];
        rem -= b[r] * q[r];
    }
    debug_assert_eq!(rem, 0);
    Ok(from_digits(n_value, b, q, a_next))
}

fn from_digits(n_value: u64, b: Vec<u64>, q: Vec<u64>, a_next: Vec<u64>) -> OstrowskiRep {
    let n = b.len() - 1;
    let mut r00 = vec![0u64; n + 2];
    // r00[k+1] for k = n .. -1
    for k in (-1..n as isize).rev() {
        let u = (k + 1) as usize;
        r00[u] = r00[u + 1] + b[u] * q[u];
    }
    OstrowskiRep { n_value, b, q, a_next, r00 }
}

/// Builds a representation from arbitrary digits (for validation tests).
pub fn with_digits(t: &QuasiperiodTable, b: Vec<u64>) -> OstrowskiRep {
    let n = b.len() - 1;
    let q: Vec<u64> = (0..=n).map(|r| t.qu(r as isize)).collect();
    let a_next: Vec<u64> = (0..=n).map(|r| t.a(r + 1)).collect();
    let n_value = b.iter().zip(&q).map(|(x, y)| x * y).sum();
    from_digits(n_value, b, q, a_next)
}

/// First violated digit constraint, if any.
pub fn violation(rep: &OstrowskiRep) -> Option<String> {
    if rep.is_empty() {
        return (rep.n_value != 0).then(|| "nonzero N with no digits".into());
    }
    let n = rep.top();
    let total: u64 = rep.b.iter().zip(&rep.q).map(|(x, y)| x * y).sum();
    if total != rep.n_value {
        return Some(format!("digit value {total} != N {}", rep.n_value));
    }
    if rep.b[n] == 0 {
        return Some("leading digit b_n = 0".into());
    }
    for r in 0..=n {
        if rep.b[r] > rep.a_next[r] {
            return Some(format!("b_{r} > a_{}", r + 1));
        }
        if r > 0 && rep.b[r] == rep.a_next[r] && rep.b[r - 1] != 0 {
            return Some(format!("b_{r} = a_{} but b_{} != 0", r + 1, r - 1));
        }
    }
    if rep.b[0] >= rep.a_next[0] {
        return Some("b_0 >= a_1".into());
    }
    if rep.q.len() > 1 && rep.q[1] == 1 && rep.b[0] != 0 {
        return Some("q_1 = 1 but b_0 != 0".into());
    }
    None
}

pub fn validate(rep: &OstrowskiRep) -> bool {
    violation(rep).is_none()
}

/// Canonical triple of `1 <= m <= N`.
pub fn triple_of(rep: &OstrowskiRep, m: u64) -> Result<Triple, OstrowskiError> {
    if m == 0 || m > rep.n_value {
        return Err(OstrowskiError::Range { m, n: rep.n_value });
    }
    let n = rep.top();
    // smallest k with k00 < m; k00 is non-increasing in k
    let mut r = 0usize;
    for k in 0..=n {
        if rep.k00(k as isize) < m {
            r = k;
            break;
        }
    }
    let base = rep.k00(r as isize);
    let qr = rep.q[r];
    let s = (m - 1 - base) / qr;
    let t = m - base - s * qr;
    Ok(Triple { r, s, t })
}

pub fn value_of(rep: &OstrowskiRep, tr: Triple) -> u64 {
    rep.k00(tr.r as isize) + tr.s * rep.q[tr.r] + tr.t
}

/// Blocks `(r, s)` from `r = n` down to 0; block covers `r00 + s q_r + 1 ..= r00 + (s+1) q_r`.
pub fn decompose_orbit(rep: &OstrowskiRep) -> Vec<(usize, u64, u64)> {
    let mut out = Vec::new();
    for r in (0..rep.b.len()).rev() {
        for s in 0..rep.b[r] {
            out.push((r, s, rep.q[r]));
        }
    }
    out
}

/// All canonical triples in increasing order of the represented index.
pub fn all_triples(rep: &OstrowskiRep) -> Vec<Triple> {
    let mut out = Vec::with_capacity(rep.n_value as usize);
    for (r, s, len) in decompose_orbit(rep) {
        for t in 1..=len {
            out.push(Triple { r, s, t });
        }
    }
    out
}

/// Lexicographically maximal (from the top) admissible digit vector by exhaustive search.
pub fn exhaustive_max(t: &QuasiperiodTable, n_value: u64) -> Option<Vec<u64>> {
    let n = t.index_n(n_value).ok()?;
    let q: Vec<u64> = (0..=n).map(|r| t.qu(r as isize)).collect();
    let a: Vec<u64> = (0..=n).map(|r| t.a(r + 1)).collect();
    let mut best: Option<Vec<u64>> = None;
    let mut cur = vec![0u64; n + 1];
    fn rec(r: isize, rem: u64, q: &[u64], a: &[u64], cur: &mut Vec<u64>, best: &mut Option<Vec<u64>>) {
        if r < 0 {
            let admissible = cur[0] < a[0] && (1..cur.len()).all(|u| cur[u] < a[u] || cur[u - 1] == 0);
            if rem == 0 && admissible {
                let better = match best {
                    None => true,
                    Some(bv) => cur.iter().rev().cmp(bv.iter().rev()) == std::cmp::Ordering::Greater,
                };
                if better {
                    *best = Some(cur.clone());
                }
            }
            return;
        }
        let ru = r as usize;
        let cap = a[ru].min(rem / q[ru]);
        for d in (0..=cap).rev() {
            cur[ru] = d;
            rec(r - 1, rem - d * q[ru], q, a, cur, best);
            if best.is_some() {
                // digits are tried from the top down, so the first completion is maximal
                return;
            }
        }
        cur[ru] = 0;
    }
    rec(n as isize, n_value, &q, &a, &mut cur, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf_engine::{expand, quasiperiods};
    use crate::numerics::Alpha;

    fn table(spec: &str) -> QuasiperiodTable {
        quasiperiods(expand(&Alpha::parse(spec).unwrap(), 30, 128).unwrap())
    }

    #[test]
    fn golden_ten() {
        let t = table("golden");
        let rep = represent(&t, 10).unwrap();
        assert_eq!(rep.b, vec![0, 0, 1, 0, 0, 1]);
        assert_eq!(rep.digit_sum(), 2);
        let k00: Vec<u64> = (1..=5).rev().map(|k| rep.k00(k)).collect();
        assert_eq!(k00, vec![0, 8, 8, 8, 10]);
        assert_eq!(triple_of(&rep, 9).unwrap(), Triple { r: 2, s: 0, t: 1 });
        assert_eq!(triple_of(&rep, 10).unwrap(), Triple { r: 2, s: 0, t: 2 });
        assert_eq!(triple_of(&rep, 1).unwrap(), Triple { r: 5, s: 0, t: 1 });
        assert_eq!(value_of(&rep, Triple { r: 2, s: 0, t: 2 }), 10);
        assert_eq!(rep.k00(5), 0);
        assert_eq!(rep.k00(-1), 10);
        assert_eq!(decompose_orbit(&rep), vec![(5, 0, 8), (2, 0, 2)]);
    }

    #[test]
    fn single_weight() {
        let t = table("golden");
        let rep = represent(&t, 13).unwrap();
        assert_eq!(rep.b, vec![0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(rep.digit_sum(), 1);
        assert_eq!(decompose_orbit(&rep), vec![(6, 0, 13)]);
    }

    #[test]
    fn sqrt2_seven() {
        let t = table("sqrt2m1");
        let rep = represent(&t, 7).unwrap();
        assert_eq!(rep.b, vec![0, 1, 1]);
        assert!(validate(&rep));
    }

    #[test]
    fn constraint_mutations() {
        let t = table("golden");
        let bad = with_digits(&t, vec![1, 0, 1, 0, 0, 1]);
        assert!(!validate(&bad));
        let s = table("sqrt2m1");
        // b_1 = a_2 = 2 with b_0 = 1
        let bad2 = with_digits(&s, vec![1, 2]);
        assert!(violation(&bad2).unwrap().contains("b_1 = a_2"));
    }

    #[test]
    fn empty_rep() {
        let t = table("golden");
        let rep = represent(&t, 0).unwrap();
        assert!(rep.is_empty());
        assert!(decompose_orbit(&rep).is_empty());
        assert!(validate(&rep));
    }

    #[test]
    fn digit_sum_of_multiple() {
        let t = table("cf:1,4,[5]");
        // q = 1, 1, 5, 26
        let rep = represent(&t, 3 * 5).unwrap();
        assert_eq!(rep.digit_sum(), 3);
    }

    #[test]
    fn greedy_matches_search_small() {
        for spec in ["golden", "sqrt2m1", "cf:3,1,[2]"] {
            let t = table(spec);
            for n in 1..300 {
                let rep = represent(&t, n).unwrap();
                assert!(validate(&rep), "{spec} {n}");
                assert_eq!(Some(rep.b.clone()), exhaustive_max(&t, n), "{spec} {n}");
                for m in 1..=n {
                    assert_eq!(value_of(&rep, triple_of(&rep, m).unwrap()), m);
                }
            }
        }
    }
}
