//! Exact computational geometry for biased ham-sandwich cuts.
//!
//! Everything runs over arbitrary-precision rationals: orientation tests,
//! separation checks, grid orientations induced by colored point sets,
//! alpha-cut search, line-arrangement level curves, and bicolored
//! pseudoline descriptions, plus generators and frozen fixtures used by
//! the test suite and the command-line tool.

pub mod allowable;
pub mod arrangement;
pub mod bicolored;
pub mod cut;
pub mod extract;
pub mod fixtures;
pub mod generate;
pub mod geometry;
pub mod grid;
pub mod level;
pub mod linalg;
pub mod miranda;
pub mod lp;
pub mod pseudoline;
pub mod rational;
pub mod separation;
