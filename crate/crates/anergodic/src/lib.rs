//! Continued fractions, Ostrowski numeration and certified bounds for Birkhoff sums of
//! singular observables over irrational rotations.

pub mod numerics;
pub mod cf_engine;
pub mod ostrowski;
pub mod verdict;
pub mod orbit;
pub mod observables;
pub mod bounds;
pub mod estimates;
pub mod comparisons;
pub mod report;
pub mod commands;
pub mod sweep;
