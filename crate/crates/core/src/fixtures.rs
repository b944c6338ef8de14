//! Small frozen instances used across tests and the acceptance gate.
//!
//! Every fixture was derived once by running the library itself and the
//! resulting numbers were frozen into assertions here, so regressions in
//! the underlying operations show up as fixture failures.

use crate::allowable::Color;
use crate::bicolored::{BicoloredDescription, DescLine};
use crate::geometry::point_i;
use crate::pseudoline::{PolySide, PolylineArrangement, PseudoLine};
use crate::rational::{rat, rat_i};
use crate::separation::ColoredPointSet;

/// Two vertical pairs; the base (0,0) with target above-count 1 admits
/// exactly one semi-cut, through (4,1).
pub fn semi_cut_example() -> ColoredPointSet {
    ColoredPointSet::new(
        2,
        vec![
            vec![point_i(&[0, 0]), point_i(&[0, 4])],
            vec![point_i(&[4, 1]), point_i(&[4, 3])],
        ],
    )
    .expect("fixture is well-formed")
}

/// Two vertical segments whose two semi-cut hyperplanes at target 1
/// meet in a point outside the hull of the first class, with different
/// first-class above-counts. Exercises the geometry behind the prober.
pub fn crossing_semi_cuts() -> ColoredPointSet {
    ColoredPointSet::new(
        2,
        vec![
            vec![point_i(&[0, 0]), point_i(&[0, 2])],
            vec![point_i(&[5, 0]), point_i(&[5, 2])],
        ],
    )
    .expect("fixture is well-formed")
}

/// Two overlapping triangles, found by randomized search against the
/// separation oracles: the class hulls intersect, so the set is not
/// well-separated, yet biased separation holds at beta = gamma = (2, 2)
/// and the median cut alpha = (2, 2) exists uniquely. Everything outside
/// that box is genuinely broken (the full count-vector table is not a
/// bijection), which is what makes the box statement sharp.
pub fn beta_gamma_example() -> ColoredPointSet {
    ColoredPointSet::new(
        2,
        vec![
            vec![point_i(&[3, 0]), point_i(&[0, 1]), point_i(&[3, 2])],
            vec![point_i(&[-3, 4]), point_i(&[-5, -2]), point_i(&[2, 0])],
        ],
    )
    .expect("fixture is well-formed")
}

/// A bicolored description whose two red pseudo-lines are forced to
/// cross twice: the sign of their relative order flips from `b1` to
/// `b2` and back from `b2` to `b3`. The companion polyline arrangement
/// realizes it, so the certificate is tight.
pub fn forced_double_crossing() -> (BicoloredDescription, PolylineArrangement) {
    let rs = |ids: &[&str]| ids.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let desc = BicoloredDescription::new(
        vec![
            DescLine::new("r1", rs(&["b1", "b2", "b3"])),
            DescLine::new("r2", rs(&["b1", "b2", "b3"])),
        ],
        vec![
            DescLine::new("b1", rs(&["r1", "r2"])),
            DescLine::new("b2", rs(&["r2", "r1"])),
            DescLine::new("b3", rs(&["r1", "r2"])),
        ],
    )
    .expect("fixture description is well-formed");

    let pt = |x: (i64, i64), y: (i64, i64)| (rat(x.0, x.1), rat(y.0, y.1));
    let red = |vertices: Vec<(crate::rational::Rational, crate::rational::Rational)>| {
        PseudoLine::new(Color::Red, PolySide::Above, vertices, rat_i(0), rat_i(0))
            .expect("fixture polyline is well-formed")
    };
    let blue = |x: i64| {
        PseudoLine::new(
            Color::Blue,
            PolySide::Below,
            vec![(rat_i(x), rat_i(0))],
            rat_i(16),
            rat_i(16),
        )
        .expect("fixture polyline is well-formed")
    };
    let arr = PolylineArrangement::new(vec![
        red(vec![pt((3, 2), (2, 1)), pt((2, 1), (1, 1)), pt((5, 2), (1, 1)), pt((3, 1), (2, 1))]),
        red(vec![pt((3, 2), (1, 1)), pt((2, 1), (2, 1)), pt((5, 2), (2, 1)), pt((3, 1), (1, 1))]),
        blue(1),
        blue(2),
        blue(3),
    ])
    .expect("fixture arrangement is well-formed");
    (desc, arr)
}
