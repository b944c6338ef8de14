//! Exact points, oriented hyperplanes, and the side predicates everything
//! else is built on.
//!
//! Conventions, fixed once here and relied on everywhere:
//!
//! * `orient(spanning, q)` is the sign of the `(d+1)x(d+1)` determinant
//!   whose rows are the `d` spanning points followed by `q`, each extended
//!   with a trailing `1`. Negative means `Below`, positive `Above`.
//!   In dimension 1 this makes *larger* coordinates lie `Below`.
//! * A `Hyperplane` is the oriented solution set of `w . q = c`; a point
//!   with `w . q > c` is `Above`. `(w, c)` is stored canonically: scaled by
//!   the inverse absolute value of the first nonzero normal entry, so the
//!   scale factor is positive and orientation is preserved.
//! * The 2D duality sends the point `(a, b)` to the line `y = a x - b`
//!   oriented with the upper half-plane positive, and the non-vertical line
//!   `y = m x + c` to the point `(m, -c)`. The two maps are mutually
//!   inverse and preserve above/below symmetrically.

use crate::linalg;
use crate::rational::{format_rational, parse_rational, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

fn parse_all(strings: &[String]) -> Result<Vec<Rational>, String> {
    strings
        .iter()
        .map(|s| parse_rational(s).map_err(|e| format!("bad rational {s:?}: {e}")))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Below,
    On,
    Above,
}

impl Sign {
    pub fn of(r: &Rational) -> Sign {
        if r.is_zero() {
            Sign::On
        } else if r.is_positive() {
            Sign::Above
        } else {
            Sign::Below
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Below => Sign::Above,
            Sign::On => Sign::On,
            Sign::Above => Sign::Below,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometryError {
    /// Inputs disagree about the ambient dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// The spanning points are affinely dependent and span no hyperplane.
    DegenerateSpan,
    /// A vertical line has no point dual.
    VerticalLine,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            GeometryError::DegenerateSpan => write!(f, "spanning points are affinely dependent"),
            GeometryError::VerticalLine => write!(f, "vertical line has no dual point"),
        }
    }
}

impl std::error::Error for GeometryError {}

/// A point in d-dimensional space with exact rational coordinates.
/// Serializes as an array of exact "p/q" strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct Point {
    pub coords: Vec<Rational>,
}

impl From<Point> for Vec<String> {
    fn from(p: Point) -> Vec<String> {
        p.coords.iter().map(format_rational).collect()
    }
}

impl TryFrom<Vec<String>> for Point {
    type Error = String;

    fn try_from(strings: Vec<String>) -> Result<Point, String> {
        Ok(Point::new(parse_all(&strings)?))
    }
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Point {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

/// Convenience constructor from integer coordinates.
pub fn point_i(coords: &[i64]) -> Point {
    Point::new(coords.iter().map(|&c| crate::rational::rat_i(c)).collect())
}

/// An oriented hyperplane `w . q = c` with `w != 0`, stored in canonical
/// form: the first nonzero entry of `w` has absolute value 1. Points with
/// `w . q > c` are `Above`. Equality of values is equality of oriented
/// hyperplanes. Serializes as exact "p/q" strings and re-canonicalizes
/// on deserialization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "HyperplaneRepr", try_from = "HyperplaneRepr")]
pub struct Hyperplane {
    normal: Vec<Rational>,
    offset: Rational,
}

#[derive(Serialize, Deserialize)]
struct HyperplaneRepr {
    normal: Vec<String>,
    offset: String,
}

impl From<Hyperplane> for HyperplaneRepr {
    fn from(h: Hyperplane) -> HyperplaneRepr {
        HyperplaneRepr {
            normal: h.normal.iter().map(format_rational).collect(),
            offset: format_rational(&h.offset),
        }
    }
}

impl TryFrom<HyperplaneRepr> for Hyperplane {
    type Error = String;

    fn try_from(repr: HyperplaneRepr) -> Result<Hyperplane, String> {
        let normal = parse_all(&repr.normal)?;
        let offset =
            parse_rational(&repr.offset).map_err(|e| format!("bad rational {:?}: {e}", repr.offset))?;
        Hyperplane::new(normal, offset).map_err(|e| e.to_string())
    }
}

impl Hyperplane {
    /// Builds the hyperplane with normal `w` and offset `c`, canonicalizing
    /// the scale. The orientation of `(w, c)` is preserved.
    pub fn new(normal: Vec<Rational>, offset: Rational) -> Result<Hyperplane, GeometryError> {
        let first = normal.iter().find(|x| !x.is_zero());
        let Some(first) = first else {
            return Err(GeometryError::DegenerateSpan);
        };
        let scale = first.abs();
        if scale.is_one() {
            return Ok(Hyperplane { normal, offset });
        }
        Ok(Hyperplane {
            normal: normal.iter().map(|x| x / &scale).collect(),
            offset: offset / scale,
        })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[Rational] {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    /// `w . q - c`; the sign classifies `q` against the hyperplane.
    pub fn eval(&self, q: &Point) -> Rational {
        assert_eq!(q.dim(), self.dim(), "eval: dimension mismatch");
        let mut acc = -self.offset.clone();
        for (w, x) in self.normal.iter().zip(&q.coords) {
            acc += w * x;
        }
        acc
    }

    pub fn side(&self, q: &Point) -> Sign {
        Sign::of(&self.eval(q))
    }

    /// The same unoriented hyperplane with the opposite positive side.
    pub fn flipped(&self) -> Hyperplane {
        Hyperplane::new(
            self.normal.iter().map(|x| -x).collect(),
            -self.offset.clone(),
        )
        .expect("nonzero normal stays nonzero")
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, w) in self.normal.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(w))?;
        }
        write!(f, " | {}]", format_rational(&self.offset))
    }
}

/// Classifies `q` against the hyperplane spanned by `spanning` (which must
/// be `d` affinely independent points in dimension `d`).
///
/// The sign is the determinant convention described at module level; in
/// particular it is antisymmetric under swapping two spanning points.
pub fn orient(spanning: &[Point], q: &Point) -> Result<Sign, GeometryError> {
    let d = q.dim();
    if spanning.len() != d {
        return Err(GeometryError::DimensionMismatch {
            expected: d,
            got: spanning.len(),
        });
    }
    for p in spanning {
        if p.dim() != d {
            return Err(GeometryError::DimensionMismatch {
                expected: d,
                got: p.dim(),
            });
        }
    }
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(d + 1);
    for p in spanning {
        let mut row = p.coords.clone();
        row.push(Rational::one());
        rows.push(row);
    }
    let mut row = q.coords.clone();
    row.push(Rational::one());
    rows.push(row);
    let det = linalg::det(rows);
    if det.is_zero() && !affinely_independent(spanning) {
        return Err(GeometryError::DegenerateSpan);
    }
    Ok(Sign::of(&det))
}

/// True when the points are affinely independent.
pub fn affinely_independent(points: &[Point]) -> bool {
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            let mut row = p.coords.clone();
            row.push(Rational::one());
            row
        })
        .collect();
    linalg::rank(rows) == points.len()
}

/// The oriented hyperplane through `d` affinely independent points, with
/// `side` agreeing exactly with `orient` on every query point.
pub fn hyperplane_through(spanning: &[Point]) -> Result<Hyperplane, GeometryError> {
    let d = spanning.len();
    if d == 0 {
        return Err(GeometryError::DegenerateSpan);
    }
    for p in spanning {
        if p.dim() != d {
            return Err(GeometryError::DimensionMismatch {
                expected: d,
                got: p.dim(),
            });
        }
    }
    // Expanding the orientation determinant along the query row gives the
    // affine form `w . q - c` via cofactors of the spanning matrix.
    let rows: Vec<Vec<Rational>> = spanning
        .iter()
        .map(|p| {
            let mut row = p.coords.clone();
            row.push(Rational::one());
            row
        })
        .collect();
    let mut normal = Vec::with_capacity(d);
    for j in 0..d {
        let minor: Vec<Vec<Rational>> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let mut cof = linalg::det(minor);
        if (d + 1 + j + 1) % 2 == 1 {
            cof = -cof;
        }
        normal.push(cof);
    }
    let minor: Vec<Vec<Rational>> = rows
        .iter()
        .map(|row| row[..d].to_vec())
        .collect();
    let mut last = linalg::det(minor);
    if (d + 1 + d + 1) % 2 == 1 {
        last = -last;
    }
    let offset = -last;
    Hyperplane::new(normal, offset).map_err(|_| GeometryError::DegenerateSpan)
}

/// Exact per-side counts of `q` against a family of hyperplanes:
/// `(below, on, above)` where `above` counts planes `q` lies strictly
/// above.
pub fn point_side_counts(q: &Point, planes: &[Hyperplane]) -> (usize, usize, usize) {
    let mut below = 0;
    let mut on = 0;
    let mut above = 0;
    for h in planes {
        match h.side(q) {
            Sign::Below => below += 1,
            Sign::On => on += 1,
            Sign::Above => above += 1,
        }
    }
    (below, on, above)
}

/// Exact per-side counts of `points` against `h`: `(below, on, above)`.
pub fn side_counts(h: &Hyperplane, points: &[Point]) -> (usize, usize, usize) {
    let mut below = 0;
    let mut on = 0;
    let mut above = 0;
    for p in points {
        match h.side(p) {
            Sign::Below => below += 1,
            Sign::On => on += 1,
            Sign::Above => above += 1,
        }
    }
    (below, on, above)
}

/// 2D duality, point to line: `(a, b)` becomes `y = a x - b` with the
/// upper half-plane positive.
pub fn dualize(p: &Point) -> Result<Hyperplane, GeometryError> {
    if p.dim() != 2 {
        return Err(GeometryError::DimensionMismatch {
            expected: 2,
            got: p.dim(),
        });
    }
    let a = &p.coords[0];
    let b = &p.coords[1];
    Hyperplane::new(vec![-a.clone(), Rational::one()], -b.clone())
}

/// 2D duality, line to point: `y = m x + c` becomes `(m, -c)`. The input
/// must be non-vertical; a downward-oriented input is treated as the same
/// unoriented line (its upward orientation).
pub fn dualize_line(h: &Hyperplane) -> Result<Point, GeometryError> {
    if h.dim() != 2 {
        return Err(GeometryError::DimensionMismatch {
            expected: 2,
            got: h.dim(),
        });
    }
    if h.normal[1].is_zero() {
        return Err(GeometryError::VerticalLine);
    }
    let (w0, w1, c) = if h.normal[1].is_positive() {
        (h.normal[0].clone(), h.normal[1].clone(), h.offset.clone())
    } else {
        (-h.normal[0].clone(), -h.normal[1].clone(), -h.offset.clone())
    };
    let slope = -w0 / &w1;
    let intercept = c / w1;
    Ok(Point::new(vec![slope, -intercept]))
}
