//! Exact k-levels of oriented non-vertical lines and the signed distance
//! to them.
//!
//! All lines here are normalized so the positive side is the upper
//! half-plane. At any abscissa the on-or-above count then increases as
//! you move up, one line at a time, so the k-level is the graph of the
//! k-th lowest line value: an x-monotone polyline whose breakpoints sit
//! on within-class crossings. The signed distance to a level is the
//! Euclidean point-polyline distance, negative below the level, zero on
//! it, positive above; it is continuous by construction.

use crate::geometry::{Hyperplane, Point, Sign};
use crate::rational::Rational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelError {
    /// Some line is vertical or faces down; levels need every positive
    /// side to be the upper half-plane.
    OrientationNotNormalized { index: usize },
    NotTwoDimensional { index: usize },
    DuplicateLine { a: usize, b: usize },
    EmptyClass,
    KOutOfRange { k: usize, n: usize },
    MalformedPolyline(String),
}

impl fmt::Display for LevelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelError::OrientationNotNormalized { index } => {
                write!(f, "line {index} is vertical or faces down")
            }
            LevelError::NotTwoDimensional { index } => {
                write!(f, "line {index} is not two-dimensional")
            }
            LevelError::DuplicateLine { a, b } => write!(f, "lines {a} and {b} coincide"),
            LevelError::EmptyClass => write!(f, "no lines given"),
            LevelError::KOutOfRange { k, n } => {
                write!(f, "level index {k} out of range 1..={n}")
            }
            LevelError::MalformedPolyline(msg) => write!(f, "malformed polyline: {msg}"),
        }
    }
}

impl std::error::Error for LevelError {}

/// The height of an up-oriented line at abscissa `x`.
fn line_y(h: &Hyperplane, x: &Rational) -> Rational {
    debug_assert!(h.normal()[1].is_positive());
    (h.offset() - &h.normal()[0] * x) / &h.normal()[1]
}

fn slope(h: &Hyperplane) -> Rational {
    -(&h.normal()[0] / &h.normal()[1])
}

/// An x-monotone polyline: `segments[j]` is the supporting line between
/// `breakpoints[j-1]` and `breakpoints[j]`, unbounded at the ends, so
/// there is always one more segment than breakpoints. Supporting lines
/// are up-oriented and consecutive ones are distinct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PolylineRepr", try_from = "PolylineRepr")]
pub struct LevelPolyline {
    breakpoints: Vec<Point>,
    segments: Vec<Hyperplane>,
}

#[derive(Serialize, Deserialize)]
struct PolylineRepr {
    breakpoints: Vec<Point>,
    segments: Vec<Hyperplane>,
}

impl From<LevelPolyline> for PolylineRepr {
    fn from(l: LevelPolyline) -> PolylineRepr {
        PolylineRepr {
            breakpoints: l.breakpoints,
            segments: l.segments,
        }
    }
}

impl TryFrom<PolylineRepr> for LevelPolyline {
    type Error = String;

    fn try_from(repr: PolylineRepr) -> Result<LevelPolyline, String> {
        LevelPolyline::from_parts(repr.breakpoints, repr.segments).map_err(|e| e.to_string())
    }
}

impl LevelPolyline {
    /// Validates and assembles a polyline: one more segment than
    /// breakpoints, strictly increasing breakpoint abscissas, every
    /// breakpoint on both adjacent supporting lines, all lines facing
    /// up, consecutive lines distinct.
    pub fn from_parts(
        breakpoints: Vec<Point>,
        segments: Vec<Hyperplane>,
    ) -> Result<LevelPolyline, LevelError> {
        if segments.len() != breakpoints.len() + 1 {
            return Err(LevelError::MalformedPolyline(format!(
                "{} segments for {} breakpoints",
                segments.len(),
                breakpoints.len()
            )));
        }
        for (j, h) in segments.iter().enumerate() {
            if h.dim() != 2 {
                return Err(LevelError::NotTwoDimensional { index: j });
            }
            if !h.normal()[1].is_positive() {
                return Err(LevelError::OrientationNotNormalized { index: j });
            }
            if j > 0 && segments[j - 1] == *h {
                return Err(LevelError::MalformedPolyline(format!(
                    "segments {} and {j} share a supporting line",
                    j - 1
                )));
            }
        }
        for (j, bp) in breakpoints.iter().enumerate() {
            if bp.dim() != 2 {
                return Err(LevelError::MalformedPolyline(format!(
                    "breakpoint {j} is not planar"
                )));
            }
            if j > 0 && breakpoints[j - 1].coords[0] >= bp.coords[0] {
                return Err(LevelError::MalformedPolyline(format!(
                    "breakpoints {} and {j} are not x-increasing",
                    j - 1
                )));
            }
            if segments[j].side(bp) != Sign::On || segments[j + 1].side(bp) != Sign::On {
                return Err(LevelError::MalformedPolyline(format!(
                    "breakpoint {j} misses an adjacent supporting line"
                )));
            }
        }
        Ok(LevelPolyline {
            breakpoints,
            segments,
        })
    }

    pub fn breakpoints(&self) -> &[Point] {
        &self.breakpoints
    }

    pub fn segments(&self) -> &[Hyperplane] {
        &self.segments
    }

    /// Unit-free direction of the left unbounded ray, pointing outward.
    pub fn left_ray_direction(&self) -> Vec<Rational> {
        let s = slope(&self.segments[0]);
        vec![-Rational::one(), -s]
    }

    /// Unit-free direction of the right unbounded ray, pointing outward.
    pub fn right_ray_direction(&self) -> Vec<Rational> {
        let s = slope(self.segments.last().expect("at least one segment"));
        vec![Rational::one(), s]
    }

    /// Index of the segment whose x-range contains `x` (at a breakpoint
    /// abscissa both neighbors agree, the right one is returned).
    fn segment_index(&self, x: &Rational) -> usize {
        self.breakpoints
            .partition_point(|bp| &bp.coords[0] < x)
    }

    /// The (single-valued) height of the polyline at abscissa `x`.
    pub fn eval_y(&self, x: &Rational) -> Rational {
        line_y(&self.segments[self.segment_index(x)], x)
    }

    /// Squared Euclidean distance from `q` to the segment `j`, clamping
    /// the perpendicular foot to the segment's x-range.
    fn segment_dist_sq(&self, j: usize, q: &Point) -> Rational {
        let h = &self.segments[j];
        let qx = &q.coords[0];
        let qy = &q.coords[1];
        let s = slope(h);
        let b = line_y(h, &Rational::zero());
        // Foot of the perpendicular onto the full line.
        let foot_x = (qx + &s * (qy - &b)) / (Rational::one() + &s * &s);
        let lo = (j > 0).then(|| &self.breakpoints[j - 1].coords[0]);
        let hi = (j < self.breakpoints.len()).then(|| &self.breakpoints[j].coords[0]);
        let clamped = match (lo, hi) {
            (Some(lo), _) if &foot_x < lo => lo.clone(),
            (_, Some(hi)) if &foot_x > hi => hi.clone(),
            _ => foot_x,
        };
        let cy = line_y(h, &clamped);
        let dx = qx - &clamped;
        let dy = qy - &cy;
        &dx * &dx + &dy * &dy
    }

    /// Signed Euclidean distance to the polyline: negative strictly
    /// below it, zero on it, positive strictly above, with the exact
    /// squared magnitude.
    pub fn signed_distance(&self, q: &Point) -> SignedDistance {
        assert_eq!(q.dim(), 2, "signed distance is planar");
        let sign = Sign::of(&(&q.coords[1] - &self.eval_y(&q.coords[0])));
        let dist_sq = (0..self.segments.len())
            .map(|j| self.segment_dist_sq(j, q))
            .min()
            .expect("at least one segment");
        debug_assert_eq!(sign == Sign::On, dist_sq.is_zero());
        SignedDistance { sign, dist_sq }
    }
}

/// A signed magnitude with its square kept exact; the sign is the side
/// classification against the level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedDistance {
    pub sign: Sign,
    pub dist_sq: Rational,
}

impl SignedDistance {
    pub fn is_zero(&self) -> bool {
        self.sign == Sign::On
    }

    /// `|value| <= tol`, decided exactly on squares.
    pub fn within(&self, tol: &Rational) -> bool {
        !tol.is_negative() && self.dist_sq <= tol * tol
    }

    pub fn to_f64(&self) -> f64 {
        let mag = crate::rational::to_f64(&self.dist_sq).sqrt();
        match self.sign {
            Sign::Below => -mag,
            Sign::On => 0.0,
            Sign::Above => mag,
        }
    }
}

fn validate_class(lines: &[Hyperplane]) -> Result<(), LevelError> {
    if lines.is_empty() {
        return Err(LevelError::EmptyClass);
    }
    for (j, h) in lines.iter().enumerate() {
        if h.dim() != 2 {
            return Err(LevelError::NotTwoDimensional { index: j });
        }
        if !h.normal()[1].is_positive() {
            return Err(LevelError::OrientationNotNormalized { index: j });
        }
        // Up-oriented canonical forms are equal iff the lines coincide.
        for (i, g) in lines.iter().enumerate().take(j) {
            if g == h {
                return Err(LevelError::DuplicateLine { a: i, b: j });
            }
        }
    }
    Ok(())
}

/// The k-level of a class of up-oriented lines: the x-monotone polyline
/// of points lying on at least one line with on-or-above count exactly
/// k, computed by an exact sweep over all within-class crossings.
pub fn k_level(lines: &[Hyperplane], k: usize) -> Result<LevelPolyline, LevelError> {
    validate_class(lines)?;
    let n = lines.len();
    if k < 1 || k > n {
        return Err(LevelError::KOutOfRange { k, n });
    }

    let mut crossing_xs: BTreeSet<Rational> = BTreeSet::new();
    for (j, h) in lines.iter().enumerate() {
        for g in lines.iter().take(j) {
            let ds = slope(g) - slope(h);
            if ds.is_zero() {
                continue;
            }
            let x = (line_y(h, &Rational::zero()) - line_y(g, &Rational::zero())) / ds;
            crossing_xs.insert(x);
        }
    }
    let xs: Vec<Rational> = crossing_xs.into_iter().collect();

    // One sample abscissa per maximal crossing-free interval; the k-th
    // lowest line there supports the level on the whole interval.
    let mut samples: Vec<Rational> = Vec::with_capacity(xs.len() + 1);
    if xs.is_empty() {
        samples.push(Rational::zero());
    } else {
        samples.push(&xs[0] - Rational::one());
        for w in xs.windows(2) {
            samples.push((&w[0] + &w[1]) / crate::rational::rat_i(2));
        }
        samples.push(xs.last().expect("nonempty") + Rational::one());
    }

    let kth_lowest = |x: &Rational| -> usize {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| line_y(&lines[a], x).cmp(&line_y(&lines[b], x)));
        order[k - 1]
    };

    let mut breakpoints = Vec::new();
    let mut segments = vec![lines[kth_lowest(&samples[0])].clone()];
    for (i, sample) in samples.iter().enumerate().skip(1) {
        let support = &lines[kth_lowest(sample)];
        let prev = segments.last().expect("nonempty");
        if prev == support {
            continue;
        }
        // The support changes across the crossing separating the two
        // intervals; the breakpoint is the crossing of the two lines.
        let ds = slope(prev) - slope(support);
        debug_assert!(!ds.is_zero(), "support change needs a crossing");
        let bx = (line_y(support, &Rational::zero()) - line_y(prev, &Rational::zero())) / ds;
        debug_assert_eq!(bx, xs[i - 1]);
        let by = line_y(support, &bx);
        breakpoints.push(Point::new(vec![bx, by]));
        segments.push(support.clone());
    }
    LevelPolyline::from_parts(breakpoints, segments)
}

/// Exact certificate that `q` belongs to the closure of the k-level of
/// `lines`: it lies on at least one line and k is sandwiched between
/// the strictly-above count plus one and the on-or-above count.
pub fn level_count_certificate(lines: &[Hyperplane], k: usize, q: &Point) -> bool {
    let (_, on, above) = crate::geometry::point_side_counts(q, lines);
    on >= 1 && above + 1 <= k && k <= above + on
}

/// The signed distance from `x` to the `alpha`-level of class `i` of a
/// normalized 2D arrangement, classified by the definitional counts and
/// cross-checked against the polyline geometry.
pub fn signed_level_distance(
    a: &crate::arrangement::ColoredLineArrangement,
    class: usize,
    alpha: usize,
    x: &Point,
) -> Result<SignedDistance, LevelError> {
    let level = k_level(a.class(class), alpha)?;
    let geo = level.signed_distance(x);
    let (_, on, above) = crate::geometry::point_side_counts(x, a.class(class));
    let by_counts = if on + above <= alpha - 1 {
        Sign::Below
    } else if above >= alpha {
        Sign::Above
    } else {
        Sign::On
    };
    debug_assert_eq!(geo.sign, by_counts, "count and geometry sides agree");
    Ok(geo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point_i;
    use crate::rational::{rat, rat_i};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn line(w0: i64, w1: i64, c: i64) -> Hyperplane {
        Hyperplane::new(vec![rat_i(w0), rat_i(w1)], rat_i(c)).unwrap()
    }

    fn pt(x: Rational, y: Rational) -> Point {
        Point::new(vec![x, y])
    }

    #[test]
    fn parallel_lines_level_by_height() {
        let lines = [line(0, 1, 0), line(0, 1, 1)];
        let l1 = k_level(&lines, 1).unwrap();
        assert!(l1.breakpoints().is_empty());
        assert_eq!(l1.segments(), &[line(0, 1, 0)]);
        let l2 = k_level(&lines, 2).unwrap();
        assert_eq!(l2.segments(), &[line(0, 1, 1)]);
    }

    #[test]
    fn crossing_lines_split_into_envelopes() {
        // y = 0 and y = x cross at the origin; the 1-level is the lower
        // envelope and the 2-level the upper one.
        let lines = [line(0, 1, 0), line(-1, 1, 0)];
        let l1 = k_level(&lines, 1).unwrap();
        assert_eq!(l1.breakpoints(), &[point_i(&[0, 0])]);
        assert_eq!(l1.segments(), &[line(-1, 1, 0), line(0, 1, 0)]);
        let l2 = k_level(&lines, 2).unwrap();
        assert_eq!(l2.breakpoints(), &[point_i(&[0, 0])]);
        assert_eq!(l2.segments(), &[line(0, 1, 0), line(-1, 1, 0)]);
        // Heights: the 1-level is min(0, x), the 2-level max(0, x).
        assert_eq!(l1.eval_y(&rat_i(-3)), rat_i(-3));
        assert_eq!(l1.eval_y(&rat_i(3)), rat_i(0));
        assert_eq!(l2.eval_y(&rat_i(-3)), rat_i(0));
        assert_eq!(l2.eval_y(&rat_i(3)), rat_i(3));
        assert_eq!(l2.left_ray_direction(), vec![rat_i(-1), rat_i(0)]);
        assert_eq!(l2.right_ray_direction(), vec![rat_i(1), rat_i(1)]);
    }

    #[test]
    fn level_rejects_bad_inputs() {
        assert_eq!(k_level(&[], 1).unwrap_err(), LevelError::EmptyClass);
        assert_eq!(
            k_level(&[line(0, 1, 0)], 2).unwrap_err(),
            LevelError::KOutOfRange { k: 2, n: 1 }
        );
        assert_eq!(
            k_level(&[line(0, 1, 0)], 0).unwrap_err(),
            LevelError::KOutOfRange { k: 0, n: 1 }
        );
        assert_eq!(
            k_level(&[line(1, 0, 0)], 1).unwrap_err(),
            LevelError::OrientationNotNormalized { index: 0 }
        );
        assert_eq!(
            k_level(&[line(0, 1, 0), line(0, -1, 0)], 1).unwrap_err(),
            LevelError::OrientationNotNormalized { index: 1 }
        );
        assert_eq!(
            k_level(&[line(0, 1, 0), line(0, 2, 0)], 1).unwrap_err(),
            LevelError::DuplicateLine { a: 0, b: 1 }
        );
    }

    #[test]
    fn polyline_validation_catches_defects() {
        assert!(matches!(
            LevelPolyline::from_parts(vec![], vec![]),
            Err(LevelError::MalformedPolyline(_))
        ));
        // Breakpoint off the supporting lines.
        assert!(matches!(
            LevelPolyline::from_parts(
                vec![point_i(&[0, 1])],
                vec![line(0, 1, 0), line(-1, 1, 0)]
            ),
            Err(LevelError::MalformedPolyline(_))
        ));
        // Repeated supporting line.
        assert!(matches!(
            LevelPolyline::from_parts(
                vec![point_i(&[0, 0])],
                vec![line(0, 1, 0), line(0, 1, 0)]
            ),
            Err(LevelError::MalformedPolyline(_))
        ));
    }

    #[test]
    fn signed_distance_examples() {
        let only = k_level(&[line(0, 1, 0)], 1).unwrap();
        let d = only.signed_distance(&point_i(&[0, -3]));
        assert_eq!(d.sign, Sign::Below);
        assert_eq!(d.dist_sq, rat_i(9));
        assert_eq!(d.to_f64(), -3.0);

        let two = k_level(&[line(0, 1, 0), line(0, 1, 1)], 2).unwrap();
        let d = two.signed_distance(&pt(rat_i(5), rat(1, 2)));
        assert_eq!(d.sign, Sign::Below);
        assert_eq!(d.dist_sq, rat(1, 4));

        let on = two.signed_distance(&point_i(&[7, 1]));
        assert_eq!(on.sign, Sign::On);
        assert!(on.is_zero());
        assert!(on.within(&rat_i(0)));
    }

    #[test]
    fn distance_clamps_to_breakpoints() {
        // 1-level of {y=0, y=x}: y=x left of the origin, y=0 right. Its
        // corner at the origin is a peak.
        let level = k_level(&[line(0, 1, 0), line(-1, 1, 0)], 1).unwrap();
        // In the corner's normal cone: both perpendicular feet fall
        // outside their segments, so the breakpoint is nearest, even
        // though the full line y=x passes closer.
        let d = level.signed_distance(&point_i(&[-1, 4]));
        assert_eq!(d.sign, Sign::Above);
        assert_eq!(d.dist_sq, rat_i(17));
        // Perpendicular feet landing inside segments still win.
        let d = level.signed_distance(&point_i(&[-4, 1]));
        assert_eq!(d.sign, Sign::Above);
        assert_eq!(d.dist_sq, rat(25, 2));
    }

    #[test]
    fn signed_distance_within_is_exact_on_squares() {
        let level = k_level(&[line(0, 1, 0)], 1).unwrap();
        let d = level.signed_distance(&pt(rat_i(0), rat(1, 3)));
        assert!(d.within(&rat(1, 3)));
        assert!(!d.within(&rat(33333, 100000)));
        assert!(!d.within(&rat(-1, 3)));
    }

    #[test]
    fn arrangement_distance_agrees_with_count_classification() {
        let a = crate::arrangement::ColoredLineArrangement::new(
            2,
            vec![
                vec![line(0, 1, 0), line(-1, 1, 0), line(1, 2, 4)],
                vec![line(-2, 1, 0)],
            ],
        )
        .unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..200 {
            let q = pt(
                rat(rng.random_range(-40..40), rng.random_range(1..5)),
                rat(rng.random_range(-40..40), rng.random_range(1..5)),
            );
            for alpha in 1..=3 {
                // The call itself cross-checks counts against geometry
                // in debug builds.
                let d = signed_level_distance(&a, 0, alpha, &q).unwrap();
                let level = k_level(a.class(0), alpha).unwrap();
                assert_eq!(d, level.signed_distance(&q));
            }
        }
    }

    #[test]
    fn levels_are_monotone_in_k() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..30 {
            let n = rng.random_range(2i64..6);
            let lines: Vec<Hyperplane> = (0..n)
                .map(|i| {
                    Hyperplane::new(
                        vec![rat(rng.random_range(-30..30), 7), rat_i(1)],
                        rat(rng.random_range(-30..30), rng.random_range(1..5)) + rat(i, 1000),
                    )
                    .unwrap()
                })
                .collect();
            let levels: Vec<LevelPolyline> =
                (1..=n).map(|k| k_level(&lines, k as usize).unwrap()).collect();
            for _ in 0..20 {
                let x = rat(rng.random_range(-50..50), rng.random_range(1..4));
                for w in levels.windows(2) {
                    assert!(w[0].eval_y(&x) <= w[1].eval_y(&x));
                }
            }
        }
    }

    #[test]
    fn level_points_satisfy_the_definitional_counts() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..30 {
            let n = rng.random_range(2i64..6);
            let lines: Vec<Hyperplane> = (0..n)
                .map(|i| {
                    Hyperplane::new(
                        vec![rat(rng.random_range(-30..30), 7), rat_i(1)],
                        rat(rng.random_range(-30..30), rng.random_range(1..5)) + rat(i, 1000),
                    )
                    .unwrap()
                })
                .collect();
            for k in 1..=n as usize {
                let level = k_level(&lines, k).unwrap();
                for bp in level.breakpoints() {
                    assert!(level_count_certificate(&lines, k, bp));
                }
                // Midpoints of bounded segments and probes on the rays.
                let mut probe_xs = Vec::new();
                match level.breakpoints() {
                    [] => probe_xs.push(rat_i(0)),
                    bps => {
                        probe_xs.push(&bps[0].coords[0] - rat_i(1));
                        for w in bps.windows(2) {
                            probe_xs.push((&w[0].coords[0] + &w[1].coords[0]) / rat_i(2));
                        }
                        probe_xs.push(bps.last().expect("nonempty").coords[0].clone() + rat_i(1));
                    }
                }
                for x in probe_xs {
                    let y = level.eval_y(&x);
                    let q = pt(x, y);
                    assert!(level_count_certificate(&lines, k, &q));
                    let (_, on, above) = crate::geometry::point_side_counts(&q, &lines);
                    assert_eq!(on, 1);
                    assert_eq!(above + on, k);
                }
            }
        }
    }

    #[test]
    fn polyline_serde_round_trip() {
        let level = k_level(&[line(0, 1, 0), line(-1, 1, 0)], 2).unwrap();
        let json = serde_json::to_string(&level).unwrap();
        assert_eq!(serde_json::from_str::<LevelPolyline>(&json).unwrap(), level);
    }
}
