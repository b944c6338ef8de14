//! X-monotone polyline pseudo-lines, crossing extraction and the
//! description verifier.
//!
//! A pseudo-line here is a piecewise-linear graph over the whole x-axis:
//! finitely many vertices with strictly increasing abscissas plus two
//! unbounded end rays. Heights and crossings are computed exactly. The
//! orientation names the positive side (`Above` or `Below`) and doubles
//! as the traversal direction: an `Above` line is walked left to right,
//! a `Below` line right to left, which for the steep blue lines built by
//! `realize_pseudolines` means top to bottom.
//!
//! `verify_description` checks an arrangement against a bicolored
//! description: class sizes, well-separation of the two slope classes,
//! and the crossing order along every line, reported as a first-mismatch
//! diff rather than a bare boolean. `realize_pseudolines` builds a
//! polyline realization for any description produced by the reduction
//! from an allowable sequence; its output always verifies.
//!
//! Well-separation is the arrangement-side counterpart of separated
//! point classes. For straight lines it reads directly off slopes: the
//! red and blue slope intervals must be disjoint. For polylines each
//! line only pins its two end slopes, so the check asks, for each of the
//! four sign patterns, for a direction scoring positively against one
//! class and negatively against the other, a small exact linear program
//! over the end-ray normals.

use crate::allowable::{line_slope, Color, LineArrangement2D, StretchError};
use crate::bicolored::{reduction_sequence, BicoloredDescription};
use crate::geometry::Hyperplane;
use crate::lp::{feasible_point, Constraint, Relation};
use crate::rational::{format_rational, parse_rational, rat, rat_i, Rational};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolySide {
    Above,
    Below,
}

/// One x-monotone polyline pseudo-line: vertices with strictly
/// increasing abscissas, a slope for each unbounded end ray, a color and
/// the side taken as positive. A single vertex with equal end slopes is
/// a straight line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PseudoLineRepr", into = "PseudoLineRepr")]
pub struct PseudoLine {
    color: Color,
    orientation: PolySide,
    vertices: Vec<(Rational, Rational)>,
    left_slope: Rational,
    right_slope: Rational,
}

#[derive(Serialize, Deserialize)]
struct PseudoLineRepr {
    color: Color,
    orientation: PolySide,
    vertices: Vec<[String; 2]>,
    end_slopes: [String; 2],
}

impl From<PseudoLine> for PseudoLineRepr {
    fn from(p: PseudoLine) -> PseudoLineRepr {
        PseudoLineRepr {
            color: p.color,
            orientation: p.orientation,
            vertices: p
                .vertices
                .iter()
                .map(|(x, y)| [format_rational(x), format_rational(y)])
                .collect(),
            end_slopes: [format_rational(&p.left_slope), format_rational(&p.right_slope)],
        }
    }
}

impl TryFrom<PseudoLineRepr> for PseudoLine {
    type Error = StretchError;

    fn try_from(repr: PseudoLineRepr) -> Result<PseudoLine, StretchError> {
        let parse = |s: &str| {
            parse_rational(s).map_err(|e| StretchError::MalformedArrangement(format!("{e}")))
        };
        let mut vertices = Vec::with_capacity(repr.vertices.len());
        for [x, y] in &repr.vertices {
            vertices.push((parse(x)?, parse(y)?));
        }
        PseudoLine::new(
            repr.color,
            repr.orientation,
            vertices,
            parse(&repr.end_slopes[0])?,
            parse(&repr.end_slopes[1])?,
        )
    }
}

impl PseudoLine {
    pub fn new(
        color: Color,
        orientation: PolySide,
        vertices: Vec<(Rational, Rational)>,
        left_slope: Rational,
        right_slope: Rational,
    ) -> Result<PseudoLine, StretchError> {
        if vertices.is_empty() {
            return Err(StretchError::MalformedArrangement(
                "polyline needs at least one vertex".into(),
            ));
        }
        if vertices.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(StretchError::MalformedArrangement(
                "polyline abscissas must increase strictly".into(),
            ));
        }
        Ok(PseudoLine {
            color,
            orientation,
            vertices,
            left_slope,
            right_slope,
        })
    }

    /// A straight line as a one-vertex polyline, `None` when vertical.
    pub fn from_line(color: Color, line: &Hyperplane) -> Option<PseudoLine> {
        let s = line_slope(line)?;
        let w = line.normal();
        let orientation = if w[1].is_positive() {
            PolySide::Above
        } else {
            PolySide::Below
        };
        let y0 = line.offset() / &w[1];
        Some(PseudoLine {
            color,
            orientation,
            vertices: vec![(Rational::zero(), y0)],
            left_slope: s.clone(),
            right_slope: s,
        })
    }

    pub fn color(&self) -> Color {
        self.color
    }

    pub fn orientation(&self) -> PolySide {
        self.orientation
    }

    pub fn vertices(&self) -> &[(Rational, Rational)] {
        &self.vertices
    }

    pub fn end_slopes(&self) -> (&Rational, &Rational) {
        (&self.left_slope, &self.right_slope)
    }

    /// Exact height of the polyline over `x`.
    pub fn height(&self, x: &Rational) -> Rational {
        let first = &self.vertices[0];
        if *x <= first.0 {
            return &first.1 + &self.left_slope * (x - &first.0);
        }
        let last = self.vertices.last().expect("nonempty");
        if *x >= last.0 {
            return &last.1 + &self.right_slope * (x - &last.0);
        }
        let at = self.vertices.partition_point(|(vx, _)| vx < x);
        // vertices[at - 1].x < x <= vertices[at].x, interpolate.
        let (x1, y1) = &self.vertices[at - 1];
        let (x2, y2) = &self.vertices[at];
        y1 + (y2 - y1) * (x - x1) / (x2 - x1)
    }
}

/// An arrangement of polyline pseudo-lines in listing order. Lines must
/// be pairwise distinct as graphs; crossing multiplicities are otherwise
/// unconstrained, so descriptions forcing two same-colored lines to
/// cross twice have a carrier here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolylineArrangementRepr", into = "PolylineArrangementRepr")]
pub struct PolylineArrangement {
    lines: Vec<PseudoLine>,
}

#[derive(Serialize, Deserialize)]
struct PolylineArrangementRepr {
    lines: Vec<PseudoLine>,
}

impl From<PolylineArrangement> for PolylineArrangementRepr {
    fn from(a: PolylineArrangement) -> PolylineArrangementRepr {
        PolylineArrangementRepr { lines: a.lines }
    }
}

impl TryFrom<PolylineArrangementRepr> for PolylineArrangement {
    type Error = StretchError;

    fn try_from(repr: PolylineArrangementRepr) -> Result<PolylineArrangement, StretchError> {
        PolylineArrangement::new(repr.lines)
    }
}

/// True when the two polylines agree as functions.
fn same_graph(f: &PseudoLine, g: &PseudoLine) -> bool {
    if f.left_slope != g.left_slope || f.right_slope != g.right_slope {
        return false;
    }
    f.vertices
        .iter()
        .chain(&g.vertices)
        .all(|(x, _)| f.height(x) == g.height(x))
}

impl PolylineArrangement {
    pub fn new(lines: Vec<PseudoLine>) -> Result<PolylineArrangement, StretchError> {
        if lines.is_empty() {
            return Err(StretchError::MalformedArrangement("no lines".into()));
        }
        for a in 0..lines.len() {
            for b in a + 1..lines.len() {
                if same_graph(&lines[a], &lines[b]) {
                    return Err(StretchError::DuplicateLine { a, b });
                }
            }
        }
        Ok(PolylineArrangement { lines })
    }

    pub fn lines(&self) -> &[PseudoLine] {
        &self.lines
    }

    /// Indices of the lines of `color`, in listing order.
    pub fn class_indices(&self, color: Color) -> Vec<usize> {
        (0..self.lines.len())
            .filter(|&i| self.lines[i].color() == color)
            .collect()
    }

    /// Positional name of a line, `r3` for the third red listed.
    pub fn line_name(&self, index: usize) -> String {
        let color = self.lines[index].color();
        let rank = self.lines[..index]
            .iter()
            .filter(|l| l.color() == color)
            .count();
        match color {
            Color::Red => format!("r{}", rank + 1),
            Color::Blue => format!("b{}", rank + 1),
        }
    }
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// All transversal crossings of two polylines, ascending in x. Contacts
/// that fail to cross (a tangency or a shared segment) leave crossing
/// counts undefined and are rejected.
pub fn polyline_crossings(
    f: &PseudoLine,
    g: &PseudoLine,
) -> Result<Vec<(Rational, Rational)>, StretchError> {
    let mut xs: Vec<Rational> = f
        .vertices
        .iter()
        .chain(&g.vertices)
        .map(|(x, _)| x.clone())
        .collect();
    xs.sort();
    xs.dedup();
    let d: Vec<Rational> = xs.iter().map(|x| f.height(x) - g.height(x)).collect();
    let dl = &f.left_slope - &g.left_slope;
    let dr = &f.right_slope - &g.right_slope;
    let degenerate = |x: &Rational| {
        Err(StretchError::MalformedArrangement(format!(
            "degenerate contact near x = {}",
            format_rational(x)
        )))
    };

    let mut out: Vec<Rational> = Vec::new();
    // Left ray: the difference d0 + dl (x - x0) vanishes left of x0 only
    // when d0 and dl share a strict sign.
    if !d[0].is_zero() && !dl.is_zero() && sign_of(&d[0]) == sign_of(&dl) {
        out.push(&xs[0] - &d[0] / &dl);
    }
    for i in 0..xs.len() {
        if d[i].is_zero() {
            // Sign of d just left and just right of the breakpoint.
            let left = if i == 0 {
                if dl.is_zero() {
                    return degenerate(&xs[0]);
                }
                -sign_of(&dl)
            } else {
                if d[i - 1].is_zero() {
                    return degenerate(&xs[i]);
                }
                sign_of(&d[i - 1])
            };
            let right = if i + 1 == xs.len() {
                if dr.is_zero() {
                    return degenerate(&xs[i]);
                }
                sign_of(&dr)
            } else {
                if d[i + 1].is_zero() {
                    return degenerate(&xs[i]);
                }
                sign_of(&d[i + 1])
            };
            if left == right {
                return degenerate(&xs[i]);
            }
            out.push(xs[i].clone());
        } else if i + 1 < xs.len() && !d[i + 1].is_zero() && sign_of(&d[i]) != sign_of(&d[i + 1]) {
            // One transversal crossing strictly inside the segment.
            let x = &xs[i] + &d[i] * (&xs[i + 1] - &xs[i]) / (&d[i] - &d[i + 1]);
            out.push(x);
        }
    }
    let d_last = d.last().expect("nonempty");
    if !d_last.is_zero() && !dr.is_zero() && sign_of(d_last) == -sign_of(&dr) {
        out.push(xs.last().expect("nonempty") - d_last / &dr);
    }
    Ok(out
        .into_iter()
        .map(|x| {
            let y = f.height(&x);
            (x, y)
        })
        .collect())
}

/// A pinpointed disagreement between an arrangement and a description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescDiff {
    /// Description id of the offending line, or `arrangement` for
    /// structural mismatches.
    pub line: String,
    pub expected: Vec<String>,
    pub found: Vec<String>,
    pub note: String,
}

impl fmt::Display for DescDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at {}: expected [{}], found [{}]",
            self.note,
            self.line,
            self.expected.join(", "),
            self.found.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub diff: Option<DescDiff>,
}

impl VerifyReport {
    fn pass() -> VerifyReport {
        VerifyReport { ok: true, diff: None }
    }

    fn fail(diff: DescDiff) -> VerifyReport {
        VerifyReport { ok: false, diff: Some(diff) }
    }
}

fn size_mismatch(desc: &BicoloredDescription, reds: usize, blues: usize) -> Option<DescDiff> {
    if desc.reds().len() == reds && desc.blues().len() == blues {
        return None;
    }
    Some(DescDiff {
        line: "arrangement".into(),
        expected: vec![
            format!("{} reds", desc.reds().len()),
            format!("{} blues", desc.blues().len()),
        ],
        found: vec![format!("{reds} reds"), format!("{blues} blues")],
        note: "class sizes differ".into(),
    })
}

/// Well-separation for polylines: for each of the four sign patterns
/// there must be a direction scoring at least +1 against every oriented
/// end-ray normal of one class and at most -1 against the other.
fn polyline_separation_failure(arr: &PolylineArrangement) -> Option<String> {
    for (red_sign, blue_sign) in [(1, -1), (-1, 1), (1, 1), (-1, -1)] {
        let mut constraints = Vec::new();
        for line in arr.lines() {
            let s = match line.color() {
                Color::Red => red_sign,
                Color::Blue => blue_sign,
            };
            for slope in [&line.left_slope, &line.right_slope] {
                // Oriented normal of the end ray's supporting line.
                let (nx, ny) = match line.orientation() {
                    PolySide::Above => (-slope.clone(), rat_i(1)),
                    PolySide::Below => (slope.clone(), rat_i(-1)),
                };
                constraints.push(Constraint::new(
                    vec![rat_i(s) * nx, rat_i(s) * ny],
                    Relation::Ge,
                    rat_i(1),
                ));
            }
        }
        if feasible_point(2, &constraints).is_none() {
            return Some(format!(
                "no direction with reds {} and blues {}",
                if red_sign > 0 { "positive" } else { "negative" },
                if blue_sign > 0 { "positive" } else { "negative" },
            ));
        }
    }
    None
}

/// Crossing order of `along` with the lines `others`, as indices into
/// `others`, read along the stored traversal direction.
fn crossing_order(
    arr: &PolylineArrangement,
    along: usize,
    others: &[usize],
) -> Result<Vec<usize>, StretchError> {
    let mut keyed: Vec<(Rational, usize)> = Vec::new();
    for (slot, &other) in others.iter().enumerate() {
        for (x, _) in polyline_crossings(&arr.lines[along], &arr.lines[other])? {
            keyed.push((x, slot));
        }
    }
    keyed.sort_by(|(p, a), (q, b)| p.cmp(q).then(a.cmp(b)));
    for pair in keyed.windows(2) {
        // Equal abscissas on one x-monotone line are the same point.
        if pair[0].0 == pair[1].0 {
            return Err(StretchError::AmbiguousOrder {
                along: arr.line_name(along),
                a: arr.line_name(others[pair[0].1]),
                b: arr.line_name(others[pair[1].1]),
            });
        }
    }
    let mut order: Vec<usize> = keyed.into_iter().map(|(_, slot)| slot).collect();
    if arr.lines[along].orientation() == PolySide::Below {
        order.reverse();
    }
    Ok(order)
}

/// Compares every line's crossing order against the description,
/// matching lines to description rows positionally within each color.
fn order_check(
    arr: &PolylineArrangement,
    desc: &BicoloredDescription,
) -> Result<Option<DescDiff>, StretchError> {
    let reds = arr.class_indices(Color::Red);
    let blues = arr.class_indices(Color::Blue);
    let check = |own: &[usize], other: &[usize], color: Color| -> Result<Option<DescDiff>, StretchError> {
        let other_color = match color {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        };
        for (at, &line) in own.iter().enumerate() {
            let found: Vec<String> = crossing_order(arr, line, other)?
                .into_iter()
                .map(|slot| desc.class(other_color)[slot].id().to_string())
                .collect();
            let expected = desc.class(color)[at].crossings();
            if found != *expected {
                return Ok(Some(DescDiff {
                    line: desc.class(color)[at].id().to_string(),
                    expected: expected.to_vec(),
                    found,
                    note: "crossing order differs".into(),
                }));
            }
        }
        Ok(None)
    };
    if let Some(diff) = check(&reds, &blues, Color::Red)? {
        return Ok(Some(diff));
    }
    check(&blues, &reds, Color::Blue)
}

/// Checks a polyline arrangement against a description: class sizes,
/// well-separation, then every crossing order. Returns the first
/// disagreement as a diff; degenerate geometry (tangencies, shared
/// points on one line) is an error instead, since such an arrangement
/// has no well-defined description at all.
pub fn verify_description(
    arr: &PolylineArrangement,
    desc: &BicoloredDescription,
) -> Result<VerifyReport, StretchError> {
    let reds = arr.class_indices(Color::Red).len();
    let blues = arr.class_indices(Color::Blue).len();
    if let Some(diff) = size_mismatch(desc, reds, blues) {
        return Ok(VerifyReport::fail(diff));
    }
    if let Some(why) = polyline_separation_failure(arr) {
        return Ok(VerifyReport::fail(DescDiff {
            line: "arrangement".into(),
            expected: vec!["well-separated end slopes".into()],
            found: vec![why],
            note: "classes are not well-separated".into(),
        }));
    }
    Ok(match order_check(arr, desc)? {
        Some(diff) => VerifyReport::fail(diff),
        None => VerifyReport::pass(),
    })
}

/// The straight-line variant of `verify_description`. Vertical lines
/// and overlapping slope intervals fail with a diff; crossing orders are
/// then checked through the polyline machinery on the converted lines.
pub fn verify_straight_description(
    arr: &LineArrangement2D,
    desc: &BicoloredDescription,
) -> Result<VerifyReport, StretchError> {
    if let Some(diff) = size_mismatch(desc, arr.reds().len(), arr.blues().len()) {
        return Ok(VerifyReport::fail(diff));
    }
    let mut lines = Vec::with_capacity(arr.reds().len() + arr.blues().len());
    let mut slopes: Vec<(Color, Rational)> = Vec::new();
    for (color, class) in [(Color::Red, arr.reds()), (Color::Blue, arr.blues())] {
        for (i, h) in class.iter().enumerate() {
            let Some(line) = PseudoLine::from_line(color, h) else {
                let name = match color {
                    Color::Red => format!("r{}", i + 1),
                    Color::Blue => format!("b{}", i + 1),
                };
                return Ok(VerifyReport::fail(DescDiff {
                    line: name,
                    expected: vec!["a line with finite slope".into()],
                    found: vec!["a vertical line".into()],
                    note: "vertical lines cannot carry a sweep order".into(),
                }));
            };
            slopes.push((color, line_slope(h).expect("checked")));
            lines.push(line);
        }
    }
    let interval = |want: Color| {
        let of: Vec<&Rational> = slopes
            .iter()
            .filter(|(c, _)| *c == want)
            .map(|(_, s)| s)
            .collect();
        (of.iter().min().cloned(), of.iter().max().cloned())
    };
    let (red_min, red_max) = interval(Color::Red);
    let (blue_min, blue_max) = interval(Color::Blue);
    let disjoint = match (red_min, red_max, blue_min, blue_max) {
        (Some(rmin), Some(rmax), Some(bmin), Some(bmax)) => rmax < bmin || bmax < rmin,
        _ => true,
    };
    if !disjoint {
        return Ok(VerifyReport::fail(DescDiff {
            line: "arrangement".into(),
            expected: vec!["disjoint red and blue slope intervals".into()],
            found: vec!["overlapping slope intervals".into()],
            note: "classes are not well-separated".into(),
        }));
    }
    let polylines = PolylineArrangement::new(lines).expect("distinct lines stay distinct");
    Ok(match order_check(&polylines, desc)? {
        Some(diff) => VerifyReport::fail(diff),
        None => VerifyReport::pass(),
    })
}

/// Builds a polyline realization for a description produced by
/// `reduce_to_bicolored`; any other description is refused. Layout: the
/// substantive reds live in a flat band just below the control red `r0`,
/// ordered at integer abscissa `i` by the i-th permutation and swapped
/// between consecutive integers; blues are steep straight lines, the
/// pair for step `i` meeting at `(i, 0)` and fanning out from two far
/// apexes below, which produces exactly the control orders the
/// reduction prescribes. The output always verifies against its input.
pub fn realize_pseudolines(
    desc: &BicoloredDescription,
) -> Result<PolylineArrangement, StretchError> {
    let seq = reduction_sequence(desc)?;
    let n = seq.n();
    let k = seq.k();
    let h_span = rat_i(8 * (k as i64 + 1));

    let flat = |height: Rational| {
        PseudoLine::new(
            Color::Red,
            PolySide::Above,
            vec![(Rational::zero(), height)],
            Rational::zero(),
            Rational::zero(),
        )
        .expect("one vertex")
    };
    // Height of the red currently at `rank` (0 = top) inside the band
    // strictly between y = -2 and y = -1.
    let band = |rank: usize| -rat_i(1) - rat(rank as i64 + 1, n as i64 + 1);

    let mut lines = Vec::with_capacity(n + 4 + 2 * k);
    lines.push(flat(rat_i(1)));
    lines.push(flat(rat_i(-1)));
    for red in 0..n {
        let rank_at = |step: usize| {
            seq.perms()[step]
                .iter()
                .position(|&l| l == red)
                .expect("permutation of all reds")
        };
        let mut vertices = vec![(rat_i(1), band(rank_at(0)))];
        for step in 1..k {
            let h = band(rank_at(step));
            vertices.push((rat_i(step as i64) + rat(1, 2), h.clone()));
            vertices.push((rat_i(step as i64 + 1), h));
        }
        lines.push(
            PseudoLine::new(
                Color::Red,
                PolySide::Above,
                vertices,
                Rational::zero(),
                Rational::zero(),
            )
            .expect("strictly increasing abscissas"),
        );
    }
    lines.push(flat(-&h_span + rat_i(1)));
    lines.push(flat(-&h_span - rat_i(1)));

    for i in 1..=k as i64 {
        for denominator in [i + 1, i] {
            // Steep straight blue through (i, 0) aiming at an apex a
            // little left of the origin at depth -h_span.
            let slope = &h_span / rat_i(denominator);
            lines.push(
                PseudoLine::new(
                    Color::Blue,
                    PolySide::Below,
                    vec![(rat_i(i), Rational::zero())],
                    slope.clone(),
                    slope,
                )
                .expect("one vertex"),
            );
        }
    }
    PolylineArrangement::new(lines)
}
