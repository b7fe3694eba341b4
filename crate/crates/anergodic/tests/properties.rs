//! Property tests over random periodic continued fractions.

use anergodic::bounds::{verify_sandwich, BoundsContext, DEPTH_CAP};
use anergodic::cf_engine::{expand, quasiperiods, table_for, verify_determinant};
use anergodic::estimates::estimate;
use anergodic::numerics::Alpha;
use anergodic::observables::{Beta, Observable};
use anergodic::ostrowski::{exhaustive_max, represent, triple_of, validate, value_of};
use anergodic::verdict::Verdict;
use proptest::prelude::*;

fn cf_spec() -> impl Strategy<Value = String> {
    (prop::collection::vec(1u64..=6, 0..3), prop::collection::vec(1u64..=6, 1..4)).prop_map(|(pre, per)| {
        let mut s = String::from("cf:");
        for p in pre {
            s.push_str(&format!("{p},"));
        }
        let per: Vec<String> = per.iter().map(u64::to_string).collect();
        s.push_str(&format!("[{}]", per.join(",")));
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn determinant_holds(spec in cf_spec()) {
        let a = Alpha::parse(&spec).unwrap();
        let t = quasiperiods(expand(&a, 30, 256).unwrap());
        prop_assert!(verify_determinant(&t));
    }

    #[test]
    fn ostrowski_round_trip(spec in cf_spec(), n in 1u64..3000) {
        let a = Alpha::parse(&spec).unwrap();
        let t = table_for(&a, n, 3, 128, DEPTH_CAP).unwrap();
        let rep = represent(&t, n).unwrap();
        prop_assert!(validate(&rep));
        let total: u64 = (0..=rep.top()).map(|r| rep.digit(r as isize) * t.qu(r as isize)).sum();
        prop_assert_eq!(total, n);
        for m in [1, n / 2 + 1, n] {
            let tr = triple_of(&rep, m).unwrap();
            prop_assert_eq!(value_of(&rep, tr), m);
        }
    }

    #[test]
    fn greedy_is_lexicographic_max(spec in cf_spec(), n in 1u64..400) {
        let a = Alpha::parse(&spec).unwrap();
        let t = table_for(&a, n, 3, 128, DEPTH_CAP).unwrap();
        let rep = represent(&t, n).unwrap();
        let best = exhaustive_max(&t, n).unwrap();
        for (r, &d) in best.iter().enumerate() {
            prop_assert_eq!(rep.digit(r as isize), d);
        }
    }

    #[test]
    fn sandwich_never_fails(spec in cf_spec(), n in 1u64..1500, bi in 0usize..3) {
        let beta = [Beta::ONE, "3/2".parse().unwrap(), "2".parse().unwrap()][bi];
        let a = Alpha::parse(&spec).unwrap();
        let ctx = BoundsContext::new(&a, n, 256).unwrap();
        let rep = verify_sandwich(&ctx, &Observable::theta(beta)).unwrap();
        prop_assert_eq!(rep.verdict(), Verdict::Pass);
    }

    #[test]
    fn methods_dominate_direct(spec in cf_spec(), n in 1u64..1500) {
        let a = Alpha::parse(&spec).unwrap();
        let ctx = BoundsContext::new(&a, n, 256).unwrap();
        for dual in [false, true] {
            let rep = estimate(&ctx, Beta::ONE, dual).unwrap();
            prop_assert_eq!(rep.verdict(), Verdict::Pass, "{:?}", rep.checks);
        }
    }
}
