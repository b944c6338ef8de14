//! Allowable sequences and straight-line sweeps.
//!
//! An allowable sequence is a list of permutations of `[n]` in which
//! consecutive entries differ by exactly one swap of adjacent items. A
//! line arrangement produces one canonically: sweep a vertical line from
//! left to right, record the top-to-bottom order of the lines, and log
//! the new order after every crossing. `sweep_sequence` computes that
//! record exactly; crossings sharing an x-coordinate are processed in
//! lexicographic order of their line-id pairs (such swaps touch four
//! distinct lines, so they commute), while several crossings at one
//! point are rejected because the swap-by-swap record is no longer
//! well defined there.
//!
//! `LineArrangement2D` is the two-colored straight-line carrier used by
//! the realization and extraction pipeline. Orientation doubles as a
//! traversal direction: a line with normal `w` is walked along
//! `(w_1, -w_0)`, which keeps the positive side on the left. Up-oriented
//! lines are walked left to right, right-oriented steep lines top to
//! bottom.

use crate::geometry::Hyperplane;
use crate::linalg;
use crate::rational::Rational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StretchError {
    MalformedArrangement(String),
    InvalidSequence(String),
    MalformedDescription(String),
    /// Two input lines coincide as point sets (orientation aside).
    DuplicateLine { a: usize, b: usize },
    VerticalLine { index: usize },
    /// Three or more lines meet in one point, so the sweep has no
    /// well-defined swap order there.
    ConcurrentCrossings { lines: Vec<usize> },
    /// Two crossings along one pseudo-line coincide, so its crossing
    /// order is not a strict sequence.
    AmbiguousOrder { along: String, a: String, b: String },
    UnknownId(String),
    /// The description was not produced by `reduce_to_bicolored`, which
    /// the realization recipes are specific to.
    WrongFamily(String),
    /// The arrangement does not realize the sequence it was paired with.
    NotARealization(String),
    /// The arrangement disagrees with the description it was checked
    /// against; carries the rendered first mismatch.
    VerificationFailed(String),
    DegenerateHomography(String),
}

impl fmt::Display for StretchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StretchError::MalformedArrangement(msg) => write!(f, "malformed arrangement: {msg}"),
            StretchError::InvalidSequence(msg) => write!(f, "invalid sequence: {msg}"),
            StretchError::MalformedDescription(msg) => write!(f, "malformed description: {msg}"),
            StretchError::DuplicateLine { a, b } => {
                write!(f, "lines {a} and {b} coincide")
            }
            StretchError::VerticalLine { index } => {
                write!(f, "line {index} is vertical and cannot be swept")
            }
            StretchError::ConcurrentCrossings { lines } => {
                write!(f, "lines {lines:?} meet in a single point")
            }
            StretchError::AmbiguousOrder { along, a, b } => {
                write!(f, "crossings with {a} and {b} coincide along {along}")
            }
            StretchError::UnknownId(id) => write!(f, "unknown line id {id}"),
            StretchError::WrongFamily(msg) => {
                write!(f, "description is not a reduction instance: {msg}")
            }
            StretchError::NotARealization(msg) => write!(f, "not a realization: {msg}"),
            StretchError::VerificationFailed(diff) => {
                write!(f, "arrangement disagrees with description: {diff}")
            }
            StretchError::DegenerateHomography(msg) => {
                write!(f, "degenerate transformation: {msg}")
            }
        }
    }
}

impl std::error::Error for StretchError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Red => write!(f, "red"),
            Color::Blue => write!(f, "blue"),
        }
    }
}

/// A two-colored arrangement of straight oriented lines in the plane.
/// Lines must be pairwise distinct as point sets; either class may be
/// empty, so single-colored sweep inputs and extraction outputs fit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LineArrangement2DRepr", into = "LineArrangement2DRepr")]
pub struct LineArrangement2D {
    reds: Vec<Hyperplane>,
    blues: Vec<Hyperplane>,
}

#[derive(Serialize, Deserialize)]
struct LineArrangement2DRepr {
    reds: Vec<Hyperplane>,
    blues: Vec<Hyperplane>,
}

impl From<LineArrangement2D> for LineArrangement2DRepr {
    fn from(a: LineArrangement2D) -> LineArrangement2DRepr {
        LineArrangement2DRepr {
            reds: a.reds,
            blues: a.blues,
        }
    }
}

impl TryFrom<LineArrangement2DRepr> for LineArrangement2D {
    type Error = StretchError;

    fn try_from(repr: LineArrangement2DRepr) -> Result<LineArrangement2D, StretchError> {
        LineArrangement2D::new(repr.reds, repr.blues)
    }
}

impl LineArrangement2D {
    pub fn new(
        reds: Vec<Hyperplane>,
        blues: Vec<Hyperplane>,
    ) -> Result<LineArrangement2D, StretchError> {
        let all: Vec<&Hyperplane> = reds.iter().chain(&blues).collect();
        if all.is_empty() {
            return Err(StretchError::MalformedArrangement("no lines".into()));
        }
        for (i, h) in all.iter().enumerate() {
            if h.dim() != 2 {
                return Err(StretchError::MalformedArrangement(format!(
                    "line {i} has dimension {}",
                    h.dim()
                )));
            }
        }
        for a in 0..all.len() {
            for b in a + 1..all.len() {
                if *all[a] == *all[b] || *all[a] == all[b].flipped() {
                    return Err(StretchError::DuplicateLine { a, b });
                }
            }
        }
        Ok(LineArrangement2D { reds, blues })
    }

    pub fn reds(&self) -> &[Hyperplane] {
        &self.reds
    }

    pub fn blues(&self) -> &[Hyperplane] {
        &self.blues
    }

    pub fn class(&self, color: Color) -> &[Hyperplane] {
        match color {
            Color::Red => &self.reds,
            Color::Blue => &self.blues,
        }
    }
}

/// The up-oriented line `y = s x + b`.
pub(crate) fn up_line(s: &Rational, b: &Rational) -> Hyperplane {
    Hyperplane::new(vec![-s.clone(), Rational::from_integer(1.into())], b.clone())
        .expect("nonzero normal")
}

/// Slope of a non-vertical line, `None` when vertical.
pub(crate) fn line_slope(h: &Hyperplane) -> Option<Rational> {
    let w = h.normal();
    if w[1].is_zero() {
        None
    } else {
        Some(-&w[0] / &w[1])
    }
}

/// Height of a non-vertical line at abscissa `x`.
pub(crate) fn line_height(h: &Hyperplane, x: &Rational) -> Rational {
    let w = h.normal();
    debug_assert!(!w[1].is_zero(), "vertical line has no height");
    (h.offset() - &w[0] * x) / &w[1]
}

/// Intersection of two lines, `None` when parallel.
pub(crate) fn crossing_point(h: &Hyperplane, g: &Hyperplane) -> Option<(Rational, Rational)> {
    let a = vec![h.normal().to_vec(), g.normal().to_vec()];
    let b = vec![h.offset().clone(), g.offset().clone()];
    linalg::solve(a, b).map(|xy| {
        let mut it = xy.into_iter();
        let x = it.next().expect("dimension two");
        let y = it.next().expect("dimension two");
        (x, y)
    })
}

/// A sequence of permutations of `[n]` (0-based ids) in which every
/// consecutive pair differs by one swap of adjacent items.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AllowableSequenceRepr", into = "AllowableSequenceRepr")]
pub struct AllowableSequence {
    n: usize,
    perms: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct AllowableSequenceRepr {
    n: usize,
    perms: Vec<Vec<usize>>,
}

impl From<AllowableSequence> for AllowableSequenceRepr {
    fn from(s: AllowableSequence) -> AllowableSequenceRepr {
        AllowableSequenceRepr {
            n: s.n,
            perms: s.perms,
        }
    }
}

impl TryFrom<AllowableSequenceRepr> for AllowableSequence {
    type Error = StretchError;

    fn try_from(repr: AllowableSequenceRepr) -> Result<AllowableSequence, StretchError> {
        let seq = AllowableSequence::new(repr.perms)?;
        if seq.n != repr.n {
            return Err(StretchError::InvalidSequence(format!(
                "declared n = {}, permutations have length {}",
                repr.n, seq.n
            )));
        }
        Ok(seq)
    }
}

impl AllowableSequence {
    pub fn new(perms: Vec<Vec<usize>>) -> Result<AllowableSequence, StretchError> {
        check_allowable(&perms).map_err(StretchError::InvalidSequence)?;
        let n = perms[0].len();
        Ok(AllowableSequence { n, perms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// True when `self` appears inside `other` in order, not necessarily
    /// consecutively.
    pub fn contained_in(&self, other: &AllowableSequence) -> bool {
        if self.n != other.n {
            return false;
        }
        let mut at = 0;
        for perm in &other.perms {
            if at < self.perms.len() && *perm == self.perms[at] {
                at += 1;
            }
        }
        at == self.perms.len()
    }
}

fn check_allowable(perms: &[Vec<usize>]) -> Result<(), String> {
    let Some(first) = perms.first() else {
        return Err("no permutations".into());
    };
    let n = first.len();
    if n == 0 {
        return Err("permutations are empty".into());
    }
    for (i, perm) in perms.iter().enumerate() {
        if perm.len() != n {
            return Err(format!("permutation {i} has length {}, expected {n}", perm.len()));
        }
        let mut seen = vec![false; n];
        for &v in perm {
            if v >= n || seen[v] {
                return Err(format!("entry {i} is not a permutation of 0..{n}"));
            }
            seen[v] = true;
        }
    }
    for (i, pair) in perms.windows(2).enumerate() {
        let diff: Vec<usize> = (0..n).filter(|&j| pair[0][j] != pair[1][j]).collect();
        let adjacent_swap = diff.len() == 2
            && diff[1] == diff[0] + 1
            && pair[0][diff[0]] == pair[1][diff[1]]
            && pair[0][diff[1]] == pair[1][diff[0]];
        if !adjacent_swap {
            return Err(format!(
                "permutations {i} and {} do not differ by one adjacent swap",
                i + 1
            ));
        }
    }
    Ok(())
}

/// True exactly when the permutations form an allowable sequence.
pub fn validate_allowable(perms: &[Vec<usize>]) -> bool {
    check_allowable(perms).is_ok()
}

/// Sweeps the lines of one color from left to right and records the
/// top-to-bottom id order at the start and after every crossing. Ids are
/// indices into that color class. When all pairs cross the record holds
/// every one of the `n(n-1)/2` swaps.
pub fn sweep_sequence(
    arr: &LineArrangement2D,
    color: Color,
) -> Result<AllowableSequence, StretchError> {
    sweep_lines(arr.class(color))
}

struct SweepPrep {
    /// Top-to-bottom line order left of every crossing.
    initial: Vec<usize>,
    /// Crossing pairs grouped by abscissa, groups ascending, pairs
    /// within a group in lexicographic id order.
    groups: Vec<(Rational, Vec<(usize, usize)>)>,
}

fn sweep_prep(lines: &[Hyperplane]) -> Result<SweepPrep, StretchError> {
    if lines.is_empty() {
        return Err(StretchError::InvalidSequence("no lines to sweep".into()));
    }
    let mut slopes = Vec::with_capacity(lines.len());
    for (index, h) in lines.iter().enumerate() {
        match line_slope(h) {
            Some(s) => slopes.push(s),
            None => return Err(StretchError::VerticalLine { index }),
        }
    }
    for a in 0..lines.len() {
        for b in a + 1..lines.len() {
            if lines[a] == lines[b] || lines[a] == lines[b].flipped() {
                return Err(StretchError::DuplicateLine { a, b });
            }
        }
    }

    // Group crossings by point; a point shared by two pairs means at
    // least three concurrent lines.
    let mut by_point: BTreeMap<(Rational, Rational), Vec<usize>> = BTreeMap::new();
    let mut events: Vec<(Rational, usize, usize)> = Vec::new();
    for a in 0..lines.len() {
        for b in a + 1..lines.len() {
            let Some((x, y)) = crossing_point(&lines[a], &lines[b]) else {
                continue;
            };
            let ids = by_point.entry((x.clone(), y)).or_default();
            for &id in [a, b].iter() {
                if !ids.contains(&id) {
                    ids.push(id);
                }
            }
            events.push((x, a, b));
        }
    }
    if let Some((_, ids)) = by_point.into_iter().find(|(_, ids)| ids.len() > 2) {
        let mut lines = ids;
        lines.sort_unstable();
        return Err(StretchError::ConcurrentCrossings { lines });
    }
    events.sort_by(|(xa, a1, a2), (xb, b1, b2)| xa.cmp(xb).then(a1.cmp(b1)).then(a2.cmp(b2)));

    // Top-to-bottom start order: far left, the smallest slope is on top;
    // among parallels the larger intercept stays on top forever.
    let mut initial: Vec<usize> = (0..lines.len()).collect();
    initial.sort_by(|&a, &b| {
        slopes[a].cmp(&slopes[b]).then_with(|| {
            line_height(&lines[b], &Rational::zero()).cmp(&line_height(&lines[a], &Rational::zero()))
        })
    });

    let mut groups: Vec<(Rational, Vec<(usize, usize)>)> = Vec::new();
    for (x, a, b) in events {
        match groups.last_mut() {
            Some((gx, pairs)) if *gx == x => pairs.push((a, b)),
            _ => groups.push((x, vec![(a, b)])),
        }
    }
    Ok(SweepPrep { initial, groups })
}

fn apply_group(order: &mut [usize], position: &mut [usize], pairs: &[(usize, usize)]) {
    // Pairs crossing at one abscissa but distinct points are disjoint,
    // so each is adjacent regardless of processing order.
    for &(a, b) in pairs {
        let (pa, pb) = (position[a], position[b]);
        assert!(
            pa.abs_diff(pb) == 1,
            "crossing of non-adjacent lines; concurrency was missed"
        );
        order.swap(pa, pb);
        position.swap(a, b);
    }
}

pub(crate) fn sweep_lines(lines: &[Hyperplane]) -> Result<AllowableSequence, StretchError> {
    let prep = sweep_prep(lines)?;
    let mut order = prep.initial;
    let mut position = vec![0usize; lines.len()];
    for (idx, &id) in order.iter().enumerate() {
        position[id] = idx;
    }
    let mut perms = Vec::with_capacity(prep.groups.len() + 1);
    perms.push(order.clone());
    for (_, pairs) in &prep.groups {
        for &(a, b) in pairs {
            apply_group(&mut order, &mut position, &[(a, b)]);
            perms.push(order.clone());
        }
    }
    debug_assert!(validate_allowable(&perms));
    let n = lines.len();
    Ok(AllowableSequence { n, perms })
}

/// The distinct line orders a sweep passes through, one per maximal
/// vertical strip free of crossings, each with a witness abscissa
/// strictly inside its strip. Unlike the swap-by-swap sequence, orders
/// straddling several same-abscissa crossings are not listed, since no
/// vertical line attains them.
pub(crate) struct SweepIntervals {
    pub orders: Vec<Vec<usize>>,
    pub witnesses: Vec<Rational>,
}

pub(crate) fn sweep_intervals(lines: &[Hyperplane]) -> Result<SweepIntervals, StretchError> {
    let prep = sweep_prep(lines)?;
    let mut order = prep.initial;
    let mut position = vec![0usize; lines.len()];
    for (idx, &id) in order.iter().enumerate() {
        position[id] = idx;
    }
    let mut orders = vec![order.clone()];
    for (_, pairs) in &prep.groups {
        apply_group(&mut order, &mut position, pairs);
        orders.push(order.clone());
    }
    let witnesses = if prep.groups.is_empty() {
        vec![Rational::zero()]
    } else {
        let mut w = vec![&prep.groups[0].0 - rat_one()];
        for pair in prep.groups.windows(2) {
            w.push((&pair[0].0 + &pair[1].0) / rat_two());
        }
        w.push(&prep.groups.last().expect("nonempty").0 + rat_one());
        w
    };
    debug_assert_eq!(orders.len(), witnesses.len());
    Ok(SweepIntervals { orders, witnesses })
}

fn rat_one() -> Rational {
    Rational::from_integer(1.into())
}

fn rat_two() -> Rational {
    Rational::from_integer(2.into())
}

/// Greedy embedding of `needle` into `hay` as a subsequence; returns
/// the matched indices, strictly increasing.
pub(crate) fn embed_indices(needle: &[Vec<usize>], hay: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(needle.len());
    let mut at = 0;
    for want in needle {
        while at < hay.len() && hay[at] != *want {
            at += 1;
        }
        if at == hay.len() {
            return None;
        }
        out.push(at);
        at += 1;
    }
    Some(out)
}

/// True when the sweep of the lines of `color` realizes the sequence,
/// meaning every permutation of `seq` appears, in order, among the line
/// orders the sweep attains on its crossing-free strips.
pub fn realizes(
    arr: &LineArrangement2D,
    color: Color,
    seq: &AllowableSequence,
) -> Result<bool, StretchError> {
    let class = arr.class(color);
    if class.len() != seq.n() {
        return Ok(false);
    }
    let intervals = sweep_intervals(class)?;
    Ok(embed_indices(seq.perms(), &intervals.orders).is_some())
}
