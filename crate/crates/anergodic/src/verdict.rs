use std::fmt;

use serde::{Deserialize, Serialize};

use crate::numerics::Real;

/// Outcome of a certified check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Exploratory,
    Indeterminate,
    Fail,
}

impl Verdict {
    /// The worse of two verdicts (FAIL > INDETERMINATE > EXPLORATORY > PASS).
    pub fn and(self, o: Verdict) -> Verdict {
        self.max(o)
    }

    pub fn from_opt(b: Option<bool>) -> Verdict {
        match b {
            Some(true) => Verdict::Pass,
            Some(false) => Verdict::Fail,
            None => Verdict::Indeterminate,
        }
    }

    pub fn all<I: IntoIterator<Item = Verdict>>(it: I) -> Verdict {
        it.into_iter().fold(Verdict::Pass, Verdict::and)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Indeterminate => "INDETERMINATE",
            Verdict::Exploratory => "EXPLORATORY",
        }
    }

    pub fn parse(s: &str) -> Option<Verdict> {
        match s {
            "PASS" => Some(Verdict::Pass),
            "FAIL" => Some(Verdict::Fail),
            "INDETERMINATE" => Some(Verdict::Indeterminate),
            "EXPLORATORY" => Some(Verdict::Exploratory),
            _ => None,
        }
    }

    /// Process exit code for a run whose worst verdict is `self`.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::Exploratory => 0,
            Verdict::Indeterminate => 1,
            Verdict::Fail => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `a < b` provably.
pub fn lt(a: &Real, b: &Real) -> Verdict {
    Verdict::from_opt(a.lt(b))
}

/// `a <= b` provably.
pub fn le(a: &Real, b: &Real) -> Verdict {
    Verdict::from_opt(a.le(b))
}

/// Enclosures of two quantities claimed equal must overlap.
pub fn same(a: &Real, b: &Real) -> Verdict {
    if a.overlaps(b) {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}
