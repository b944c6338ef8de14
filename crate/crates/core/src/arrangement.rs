//! Colored arrangements of straight oriented hyperplanes: the rainbow
//! and separation checks, the brute-force biased point x_alpha, and the
//! rational-rotation normalizer that the level machinery relies on.
//!
//! An arrangement is "rainbow" when every colorful tuple of hyperplanes
//! (one per class) meets in exactly one point, and "well-separated" when
//! every sign pattern over the classes is realized by some direction:
//! going far enough that way puts you on the prescribed side of every
//! hyperplane of every class at once.

use crate::cut::AlphaVector;
use crate::geometry::{point_side_counts, Hyperplane, Point};
use crate::grid::GridShape;
use crate::linalg;
use crate::lp::{feasible_point, Constraint, Relation};
use crate::rational::{rat, rat_i, Rational};
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    MalformedArrangement(String),
    InvalidAlpha(String),
    /// No colorful intersection point attains the requested counts.
    NoPoint { alpha: Vec<usize> },
    /// Several do; evidence that the preconditions fail.
    MultiplePoints { alpha: Vec<usize>, tuples: Vec<Vec<usize>> },
    /// No rational rotation avoiding vertical lines was found.
    RotationSearchFailed,
}

impl fmt::Display for ArrangementError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrangementError::MalformedArrangement(msg) => write!(f, "malformed arrangement: {msg}"),
            ArrangementError::InvalidAlpha(msg) => write!(f, "invalid alpha: {msg}"),
            ArrangementError::NoPoint { alpha } => {
                write!(f, "no colorful point attains alpha {alpha:?}")
            }
            ArrangementError::MultiplePoints { alpha, tuples } => {
                write!(f, "{} colorful points attain alpha {alpha:?}", tuples.len())
            }
            ArrangementError::RotationSearchFailed => {
                write!(f, "no rational rotation avoiding vertical lines was found")
            }
        }
    }
}

impl std::error::Error for ArrangementError {}

/// Color classes of straight oriented hyperplanes in a common dimension.
/// Within a class, hyperplanes must be pairwise distinct as unoriented
/// sets; cross-class parallels are representable (the rainbow check
/// reports them).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ArrangementRepr", try_from = "ArrangementRepr")]
pub struct ColoredLineArrangement {
    dimension: usize,
    classes: Vec<Vec<Hyperplane>>,
}

#[derive(Serialize, Deserialize)]
struct ArrangementRepr {
    dimension: usize,
    classes: Vec<Vec<Hyperplane>>,
}

impl From<ColoredLineArrangement> for ArrangementRepr {
    fn from(a: ColoredLineArrangement) -> ArrangementRepr {
        ArrangementRepr {
            dimension: a.dimension,
            classes: a.classes,
        }
    }
}

impl TryFrom<ArrangementRepr> for ColoredLineArrangement {
    type Error = String;

    fn try_from(repr: ArrangementRepr) -> Result<ColoredLineArrangement, String> {
        ColoredLineArrangement::new(repr.dimension, repr.classes).map_err(|e| e.to_string())
    }
}

impl ColoredLineArrangement {
    pub fn new(
        dimension: usize,
        classes: Vec<Vec<Hyperplane>>,
    ) -> Result<ColoredLineArrangement, ArrangementError> {
        if dimension == 0 {
            return Err(ArrangementError::MalformedArrangement(
                "dimension must be positive".into(),
            ));
        }
        if classes.is_empty() {
            return Err(ArrangementError::MalformedArrangement("no classes".into()));
        }
        for (i, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err(ArrangementError::MalformedArrangement(format!(
                    "class {i} is empty"
                )));
            }
            for (j, h) in class.iter().enumerate() {
                if h.dim() != dimension {
                    return Err(ArrangementError::MalformedArrangement(format!(
                        "class {i} hyperplane {j} has dimension {}, expected {dimension}",
                        h.dim()
                    )));
                }
                for (k, g) in class.iter().enumerate().take(j) {
                    if h == g || *h == g.flipped() {
                        return Err(ArrangementError::MalformedArrangement(format!(
                            "class {i} hyperplanes {k} and {j} coincide"
                        )));
                    }
                }
            }
        }
        Ok(ColoredLineArrangement { dimension, classes })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn classes(&self) -> &[Vec<Hyperplane>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &[Hyperplane] {
        &self.classes[i]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    fn colorful_tuples(&self) -> Vec<Vec<usize>> {
        let shape = GridShape::new(self.class_sizes()).expect("classes are nonempty");
        shape.vertices().into_iter().map(|v| v.coords).collect()
    }

    /// The unique common point of one hyperplane per class, or None when
    /// the chosen normals are linearly dependent.
    pub fn colorful_intersection(&self, tuple: &[usize]) -> Option<Point> {
        let rows: Vec<Vec<Rational>> = tuple
            .iter()
            .enumerate()
            .map(|(i, &j)| self.classes[i][j].normal().to_vec())
            .collect();
        let rhs: Vec<Rational> = tuple
            .iter()
            .enumerate()
            .map(|(i, &j)| self.classes[i][j].offset().clone())
            .collect();
        linalg::solve(rows, rhs).map(Point::new)
    }
}

/// One sign pattern over the classes and the direction realizing it, if
/// any. `signs[i]` true means every hyperplane of class `i` must see the
/// direction on its positive side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternWitness {
    pub signs: Vec<bool>,
    pub direction: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RainbowWsReport {
    pub rainbow: bool,
    /// A colorful tuple whose hyperplanes fail to meet in a single
    /// point, when one exists.
    pub non_meeting_tuple: Option<Vec<usize>>,
    pub well_separated: bool,
    /// All 2^d sign patterns in ascending bitmask order (bit i is the
    /// sign of class i, set meaning positive).
    pub patterns: Vec<PatternWitness>,
}

/// Decides the rainbow condition by exact rank checks on every colorful
/// tuple and well-separation by one exact LP per sign pattern.
pub fn verify_rainbow_ws(a: &ColoredLineArrangement) -> RainbowWsReport {
    let d = a.dimension();
    let mut rainbow = true;
    let mut non_meeting_tuple = None;
    if a.classes().len() == d {
        for tuple in a.colorful_tuples() {
            if a.colorful_intersection(&tuple).is_none() {
                rainbow = false;
                non_meeting_tuple = Some(tuple);
                break;
            }
        }
    } else {
        // Tuples of one hyperplane per class only form candidate points
        // when there are exactly d classes.
        rainbow = false;
    }

    let k = a.classes().len();
    let mut patterns = Vec::with_capacity(1 << k);
    let mut well_separated = true;
    for mask in 0..(1usize << k) {
        let signs: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
        let mut constraints = Vec::new();
        for (i, class) in a.classes().iter().enumerate() {
            for h in class {
                // Strictness via unit margin; directions are scale-free.
                let (rel, rhs) = if signs[i] {
                    (Relation::Ge, Rational::one())
                } else {
                    (Relation::Le, -Rational::one())
                };
                constraints.push(Constraint::new(h.normal().to_vec(), rel, rhs));
            }
        }
        let direction = feasible_point(d, &constraints);
        if direction.is_none() {
            well_separated = false;
        }
        patterns.push(PatternWitness { signs, direction });
    }

    RainbowWsReport {
        rainbow,
        non_meeting_tuple,
        well_separated,
        patterns,
    }
}

/// A colorful intersection point together with the tuple that spans it
/// and the per-class `(below, on, above)` counts of the point against
/// the class hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorfulPoint {
    pub tuple: Vec<usize>,
    pub point: Point,
    pub counts: Vec<(usize, usize, usize)>,
}

/// Scans every colorful intersection point for the one lying on exactly
/// one hyperplane per class and strictly above exactly `alpha_i - 1` of
/// class `i`. The scan always completes, so uniqueness is verified.
pub fn x_alpha_bruteforce(
    a: &ColoredLineArrangement,
    alpha: &AlphaVector,
) -> Result<ColorfulPoint, ArrangementError> {
    let d = a.dimension();
    if a.classes().len() != d {
        return Err(ArrangementError::MalformedArrangement(format!(
            "need {d} classes in dimension {d}, got {}",
            a.classes().len()
        )));
    }
    alpha
        .check_range(&a.class_sizes())
        .map_err(ArrangementError::InvalidAlpha)?;
    let mut matches: Vec<ColorfulPoint> = Vec::new();
    for tuple in a.colorful_tuples() {
        let Some(point) = a.colorful_intersection(&tuple) else {
            continue;
        };
        let counts: Vec<(usize, usize, usize)> = a
            .classes()
            .iter()
            .map(|class| point_side_counts(&point, class))
            .collect();
        let hit = counts
            .iter()
            .zip(&alpha.alpha)
            .all(|(&(_, on, above), &ai)| on == 1 && above == ai - 1);
        if hit {
            matches.push(ColorfulPoint { tuple, point, counts });
        }
    }
    match matches.len() {
        0 => Err(ArrangementError::NoPoint {
            alpha: alpha.alpha.clone(),
        }),
        1 => Ok(matches.pop().expect("one element")),
        _ => Err(ArrangementError::MultiplePoints {
            alpha: alpha.alpha.clone(),
            tuples: matches.into_iter().map(|m| m.tuple).collect(),
        }),
    }
}

/// A rotation of the plane by a rational point on the unit circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalRotation {
    pub cos: Rational,
    pub sin: Rational,
}

impl RationalRotation {
    pub fn new(cos: Rational, sin: Rational) -> Result<RationalRotation, ArrangementError> {
        if &cos * &cos + &sin * &sin != Rational::one() {
            return Err(ArrangementError::MalformedArrangement(
                "rotation is not on the unit circle".into(),
            ));
        }
        Ok(RationalRotation { cos, sin })
    }

    pub fn identity() -> RationalRotation {
        RationalRotation {
            cos: Rational::one(),
            sin: Rational::zero(),
        }
    }

    /// The rotation with tangent-half-angle `t`, always exactly on the
    /// unit circle.
    pub fn from_parameter(t: &Rational) -> RationalRotation {
        let t2 = t * t;
        let den = Rational::one() + &t2;
        RationalRotation {
            cos: (Rational::one() - &t2) / &den,
            sin: (rat_i(2) * t) / den,
        }
    }

    pub fn inverse(&self) -> RationalRotation {
        RationalRotation {
            cos: self.cos.clone(),
            sin: -self.sin.clone(),
        }
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        assert_eq!(p.dim(), 2, "rotation acts on the plane");
        let x = &p.coords[0];
        let y = &p.coords[1];
        Point::new(vec![
            &self.cos * x - &self.sin * y,
            &self.sin * x + &self.cos * y,
        ])
    }

    /// Rotates a hyperplane as a set of points; sides are preserved, so
    /// a point and its image lie on equal sides of the pair.
    pub fn apply_hyperplane(&self, h: &Hyperplane) -> Hyperplane {
        assert_eq!(h.dim(), 2, "rotation acts on the plane");
        let w0 = &h.normal()[0];
        let w1 = &h.normal()[1];
        Hyperplane::new(
            vec![&self.cos * w0 - &self.sin * w1, &self.sin * w0 + &self.cos * w1],
            h.offset().clone(),
        )
        .expect("rotation preserves nonzero normals")
    }
}

/// A 2D arrangement with every hyperplane's positive side facing up,
/// together with the rotation and per-line flips that got it there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedArrangement {
    pub arrangement: ColoredLineArrangement,
    pub rotation: RationalRotation,
    /// `flipped[i][j]` records that class `i` line `j` had its
    /// orientation reversed to face up.
    pub flipped: Vec<Vec<bool>>,
}

/// Rotates a 2D arrangement by a seeded random rational rotation until
/// no line is vertical (skipping the rotation when none is), then flips
/// downward normals up. The recorded transform maps results back.
pub fn normalize_orientations(
    a: &ColoredLineArrangement,
    seed: u64,
) -> Result<NormalizedArrangement, ArrangementError> {
    if a.dimension() != 2 {
        return Err(ArrangementError::MalformedArrangement(
            "orientation normalization is for the plane".into(),
        ));
    }
    let no_vertical = |arr: &ColoredLineArrangement| {
        arr.classes()
            .iter()
            .all(|class| class.iter().all(|h| !h.normal()[1].is_zero()))
    };
    let mut rng = StdRng::seed_from_u64(seed);
    let mut rotation = RationalRotation::identity();
    let mut rotated = a.clone();
    let mut tries = 0;
    while !no_vertical(&rotated) {
        if tries >= 64 {
            return Err(ArrangementError::RotationSearchFailed);
        }
        tries += 1;
        let t = rat(rng.random_range(1..=97), rng.random_range(100..=997));
        rotation = RationalRotation::from_parameter(&t);
        rotated = ColoredLineArrangement::new(
            2,
            a.classes()
                .iter()
                .map(|class| class.iter().map(|h| rotation.apply_hyperplane(h)).collect())
                .collect(),
        )
        .expect("rotation preserves distinctness");
    }
    let mut flipped = Vec::with_capacity(rotated.classes().len());
    let classes = rotated
        .classes()
        .iter()
        .map(|class| {
            let mut flips = Vec::with_capacity(class.len());
            let fixed = class
                .iter()
                .map(|h| {
                    if h.normal()[1].is_negative() {
                        flips.push(true);
                        h.flipped()
                    } else {
                        flips.push(false);
                        h.clone()
                    }
                })
                .collect();
            flipped.push(flips);
            fixed
        })
        .collect();
    Ok(NormalizedArrangement {
        arrangement: ColoredLineArrangement::new(2, classes)
            .expect("flips preserve distinctness"),
        rotation,
        flipped,
    })
}
