//! Combinatorial descriptions of two-colored arrangements.
//!
//! A bicolored description records, for every red pseudo-line, the order
//! in which it crosses the blues, and for every blue the order of the
//! reds, each order read along the line's own traversal direction. It is
//! the combinatorial shadow shared by straight arrangements and
//! polyline arrangements: `describe` extracts it from straight lines,
//! the verifier in the polyline module checks it against either carrier,
//! and `orientation_from_description` turns it into a grid orientation
//! compatible with the point-set construction.
//!
//! `reduce_to_bicolored` encodes an allowable sequence as a description
//! with four extra control reds and a doubled blue class. The encoding
//! pins down the realization problem exactly: the description has a
//! two-colored realization precisely when the sequence is realized by a
//! straight arrangement, which is what makes the stretchability
//! reduction work. `crossing_lower_bound` reads off how often two
//! same-colored pseudo-lines are forced to cross; a bound of two or more
//! certifies that no straight realization exists.

use crate::allowable::{
    crossing_point, AllowableSequence, Color, LineArrangement2D, StretchError,
};
use crate::geometry::Hyperplane;
use crate::grid::{GridOrientation, GridShape};
use crate::rational::Rational;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// One pseudo-line of a description: its id plus the ids of the other
/// class in crossing order along its traversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescLine {
    id: String,
    crossings: Vec<String>,
}

impl DescLine {
    pub fn new(id: impl Into<String>, crossings: Vec<String>) -> DescLine {
        DescLine {
            id: id.into(),
            crossings,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn crossings(&self) -> &[String] {
        &self.crossings
    }
}

/// Crossing orders of a two-colored pseudo-line family. Every red order
/// is a permutation of the blue ids and vice versa; whether the orders
/// are mutually consistent (realizable at all) is deliberately not part
/// of construction, since unrealizable descriptions are first-class
/// objects here.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DescriptionRepr", into = "DescriptionRepr")]
pub struct BicoloredDescription {
    reds: Vec<DescLine>,
    blues: Vec<DescLine>,
}

#[derive(Serialize, Deserialize)]
struct RedRepr {
    id: String,
    blue_order: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct BlueRepr {
    id: String,
    red_order: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct DescriptionRepr {
    reds: Vec<RedRepr>,
    blues: Vec<BlueRepr>,
}

impl From<BicoloredDescription> for DescriptionRepr {
    fn from(d: BicoloredDescription) -> DescriptionRepr {
        DescriptionRepr {
            reds: d
                .reds
                .into_iter()
                .map(|l| RedRepr {
                    id: l.id,
                    blue_order: l.crossings,
                })
                .collect(),
            blues: d
                .blues
                .into_iter()
                .map(|l| BlueRepr {
                    id: l.id,
                    red_order: l.crossings,
                })
                .collect(),
        }
    }
}

impl TryFrom<DescriptionRepr> for BicoloredDescription {
    type Error = StretchError;

    fn try_from(repr: DescriptionRepr) -> Result<BicoloredDescription, StretchError> {
        BicoloredDescription::new(
            repr.reds
                .into_iter()
                .map(|l| DescLine::new(l.id, l.blue_order))
                .collect(),
            repr.blues
                .into_iter()
                .map(|l| DescLine::new(l.id, l.red_order))
                .collect(),
        )
    }
}

impl BicoloredDescription {
    pub fn new(
        reds: Vec<DescLine>,
        blues: Vec<DescLine>,
    ) -> Result<BicoloredDescription, StretchError> {
        let mut seen: HashMap<&str, ()> = HashMap::new();
        for line in reds.iter().chain(&blues) {
            if line.id.is_empty() {
                return Err(StretchError::MalformedDescription("empty id".into()));
            }
            if seen.insert(&line.id, ()).is_some() {
                return Err(StretchError::MalformedDescription(format!(
                    "duplicate id {}",
                    line.id
                )));
            }
        }
        let check_orders = |own: &[DescLine], other: &[DescLine]| -> Result<(), StretchError> {
            let other_ids: Vec<&str> = other.iter().map(|l| l.id.as_str()).collect();
            for line in own {
                let mut left: Vec<&str> = other_ids.clone();
                for id in &line.crossings {
                    match left.iter().position(|x| *x == id.as_str()) {
                        Some(at) => {
                            left.swap_remove(at);
                        }
                        None => {
                            return Err(StretchError::MalformedDescription(format!(
                                "order of {} is not a permutation of the other class ({id} unexpected)",
                                line.id
                            )));
                        }
                    }
                }
                if !left.is_empty() {
                    return Err(StretchError::MalformedDescription(format!(
                        "order of {} misses {}",
                        line.id, left[0]
                    )));
                }
            }
            Ok(())
        };
        check_orders(&reds, &blues)?;
        check_orders(&blues, &reds)?;
        Ok(BicoloredDescription { reds, blues })
    }

    pub fn reds(&self) -> &[DescLine] {
        &self.reds
    }

    pub fn blues(&self) -> &[DescLine] {
        &self.blues
    }

    pub fn class(&self, color: Color) -> &[DescLine] {
        match color {
            Color::Red => &self.reds,
            Color::Blue => &self.blues,
        }
    }

    /// Locates an id, returning its color and position in that class.
    pub fn find(&self, id: &str) -> Option<(Color, usize)> {
        if let Some(at) = self.reds.iter().position(|l| l.id == id) {
            return Some((Color::Red, at));
        }
        self.blues
            .iter()
            .position(|l| l.id == id)
            .map(|at| (Color::Blue, at))
    }
}

/// Reads the crossing orders off a straight two-colored arrangement.
/// Lines are named `r1..` and `b1..` by position. Every red must cross
/// every blue; a red meeting two blues in one point has no strict
/// crossing order, which is rejected. Orders are read along each line's
/// traversal direction, so reorienting a line reverses its order.
pub fn describe(arr: &LineArrangement2D) -> Result<BicoloredDescription, StretchError> {
    let orders = |own: &[Hyperplane],
                  own_name: &dyn Fn(usize) -> String,
                  other: &[Hyperplane],
                  other_name: &dyn Fn(usize) -> String|
     -> Result<Vec<DescLine>, StretchError> {
        let mut out = Vec::with_capacity(own.len());
        for (i, h) in own.iter().enumerate() {
            let w = h.normal();
            let mut keyed: Vec<(Rational, usize)> = Vec::with_capacity(other.len());
            for (j, g) in other.iter().enumerate() {
                let Some((x, y)) = crossing_point(h, g) else {
                    return Err(StretchError::MalformedArrangement(format!(
                        "{} and {} are parallel",
                        own_name(i),
                        other_name(j)
                    )));
                };
                // Position along the traversal direction (w1, -w0).
                keyed.push((&w[1] * &x - &w[0] * &y, j));
            }
            keyed.sort_by(|(p, _), (q, _)| p.cmp(q));
            for pair in keyed.windows(2) {
                if pair[0].0 == pair[1].0 {
                    return Err(StretchError::AmbiguousOrder {
                        along: own_name(i),
                        a: other_name(pair[0].1),
                        b: other_name(pair[1].1),
                    });
                }
            }
            out.push(DescLine::new(
                own_name(i),
                keyed.into_iter().map(|(_, j)| other_name(j)).collect(),
            ));
        }
        Ok(out)
    };
    let red_name = |i: usize| format!("r{}", i + 1);
    let blue_name = |j: usize| format!("b{}", j + 1);
    let reds = orders(arr.reds(), &red_name, arr.blues(), &blue_name)?;
    let blues = orders(arr.blues(), &blue_name, arr.reds(), &red_name)?;
    BicoloredDescription::new(reds, blues)
}

/// Encodes an allowable sequence with permutations `pi_1..pi_k` of `[n]`
/// as a bicolored description on `n + 4` reds and `2k` blues. The four
/// control reds `r-1, r0, r{n+1}, r{n+2}` frame the substantive reds
/// `r1..rn`; blues come in pairs `b_i, b'_i`, one pair per permutation,
/// and both members of pair `i` cross the substantive reds in order
/// `pi_i`. The control orders differ between the pair members exactly so
/// that a realization is forced to present `pi_i` at the pair's
/// crossing, which makes realizability of this description equivalent to
/// straight realizability of the sequence.
pub fn reduce_to_bicolored(seq: &AllowableSequence) -> BicoloredDescription {
    let n = seq.n();
    let k = seq.k();
    let red_id = |j: usize| format!("r{j}");
    let blue_id = |i: usize| format!("b{i}");
    let blue_prime_id = |i: usize| format!("b'{i}");

    // Blue pair i: controls r-1, r0, then pi_i top line first, then the
    // two lower controls.
    let mut blues = Vec::with_capacity(2 * k);
    for i in 1..=k {
        let mut order = vec!["r-1".to_string(), "r0".to_string()];
        order.extend(seq.perms()[i - 1].iter().map(|&l| red_id(l + 1)));
        order.push(red_id(n + 1));
        order.push(red_id(n + 2));
        blues.push(DescLine::new(blue_id(i), order.clone()));
        blues.push(DescLine::new(blue_prime_id(i), order));
    }

    // Substantive reds and r0 meet the pairs in listing order; r-1 sees
    // each pair swapped (the pair crosses between r0 and r-1); the lower
    // controls see plain members first left to right, then the primed
    // members, r{n+2} with both runs reversed.
    let pairwise: Vec<String> = (1..=k)
        .flat_map(|i| [blue_id(i), blue_prime_id(i)])
        .collect();
    let pairwise_swapped: Vec<String> = (1..=k)
        .flat_map(|i| [blue_prime_id(i), blue_id(i)])
        .collect();
    let plain_then_primed: Vec<String> = (1..=k)
        .map(blue_id)
        .chain((1..=k).map(blue_prime_id))
        .collect();
    let reversed_runs: Vec<String> = (1..=k)
        .rev()
        .map(blue_id)
        .chain((1..=k).rev().map(blue_prime_id))
        .collect();

    let mut reds = Vec::with_capacity(n + 4);
    reds.push(DescLine::new("r-1", pairwise_swapped));
    reds.push(DescLine::new("r0", pairwise.clone()));
    for j in 1..=n {
        reds.push(DescLine::new(red_id(j), pairwise.clone()));
    }
    reds.push(DescLine::new(red_id(n + 1), plain_then_primed));
    reds.push(DescLine::new(red_id(n + 2), reversed_runs));

    BicoloredDescription::new(reds, blues).expect("reduction output is well formed")
}

/// Recovers the allowable sequence a description encodes, or reports
/// that the description is not a reduction instance. The check is
/// strict: ids, listing order and every crossing order must match
/// `reduce_to_bicolored` of the recovered sequence exactly.
pub fn reduction_sequence(desc: &BicoloredDescription) -> Result<AllowableSequence, StretchError> {
    if desc.blues.len() % 2 != 0 || desc.blues.is_empty() {
        return Err(StretchError::WrongFamily(format!(
            "{} blues, expected a nonzero even count",
            desc.blues.len()
        )));
    }
    let k = desc.blues.len() / 2;
    if desc.reds.len() < 5 {
        return Err(StretchError::WrongFamily(format!(
            "{} reds, expected at least 5",
            desc.reds.len()
        )));
    }
    let n = desc.reds.len() - 4;
    let mut perms = Vec::with_capacity(k);
    for i in 0..k {
        let row = desc.blues[2 * i].crossings();
        if row.len() != n + 4 {
            return Err(StretchError::WrongFamily(format!(
                "blue {} crosses {} reds, expected {}",
                desc.blues[2 * i].id(),
                row.len(),
                n + 4
            )));
        }
        let mut perm = Vec::with_capacity(n);
        for id in &row[2..2 + n] {
            let j: usize = id
                .strip_prefix('r')
                .and_then(|s| s.parse().ok())
                .filter(|&j| 1 <= j && j <= n)
                .ok_or_else(|| {
                    StretchError::WrongFamily(format!("unexpected id {id} inside a blue order"))
                })?;
            perm.push(j - 1);
        }
        perms.push(perm);
    }
    let seq = AllowableSequence::new(perms).map_err(|e| {
        StretchError::WrongFamily(format!("recovered permutations are not allowable: {e}"))
    })?;
    let rebuilt = reduce_to_bicolored(&seq);
    if rebuilt != *desc {
        return Err(StretchError::WrongFamily(
            "orders deviate from the reduction pattern".into(),
        ));
    }
    Ok(seq)
}

/// A lower bound on how often the pseudo-lines `a` and `b` (same color)
/// must cross in any arrangement matching the description. Walking along
/// `a`, each crossing with the other class witnesses whether that
/// witness line has already passed `b`; every sign change forces one
/// `a`-`b` crossing between the witnesses. Both walks are counted and
/// the larger bound returned. A bound of 2 or more proves the
/// description has no straight realization.
pub fn crossing_lower_bound(
    desc: &BicoloredDescription,
    a: &str,
    b: &str,
) -> Result<usize, StretchError> {
    let (color_a, ia) = desc
        .find(a)
        .ok_or_else(|| StretchError::UnknownId(a.to_string()))?;
    let (color_b, ib) = desc
        .find(b)
        .ok_or_else(|| StretchError::UnknownId(b.to_string()))?;
    if a == b {
        return Err(StretchError::MalformedDescription(
            "crossing bound needs two distinct lines".into(),
        ));
    }
    if color_a != color_b {
        return Err(StretchError::MalformedDescription(
            "crossing bound is defined within one color class".into(),
        ));
    }
    let own = desc.class(color_a);
    let other = desc.class(match color_a {
        Color::Red => Color::Blue,
        Color::Blue => Color::Red,
    });
    let position_of: HashMap<&str, &DescLine> =
        other.iter().map(|l| (l.id.as_str(), l)).collect();
    let walk = |along: &DescLine, first: &str, second: &str| -> usize {
        let mut alternations = 0;
        let mut last: Option<bool> = None;
        for wid in along.crossings() {
            let witness = position_of[wid.as_str()];
            let pa = witness
                .crossings
                .iter()
                .position(|x| x == first)
                .expect("validated permutation");
            let pb = witness
                .crossings
                .iter()
                .position(|x| x == second)
                .expect("validated permutation");
            let sign = pa < pb;
            if last.is_some_and(|prev| prev != sign) {
                alternations += 1;
            }
            last = Some(sign);
        }
        alternations
    };
    Ok(walk(&own[ia], a, b).max(walk(&own[ib], b, a)))
}

/// Builds the grid orientation a description induces: one dimension per
/// color, one position per line other positions. Along a fixed blue `j`,
/// the edge between red positions points toward the red that `j` crosses
/// later; along a fixed red `a`, the edge between blue positions points
/// toward the blue that `a` crosses earlier. For descriptions read off
/// dualized point sets this reproduces the point-set orientation, which
/// is checked by tests and the acceptance gate.
pub fn orientation_from_description(
    desc: &BicoloredDescription,
) -> Result<GridOrientation, StretchError> {
    let n = desc.reds.len();
    let m = desc.blues.len();
    if n == 0 || m == 0 {
        return Err(StretchError::MalformedDescription(
            "needs at least one line of each color".into(),
        ));
    }
    let red_at: HashMap<&str, usize> = desc
        .reds
        .iter()
        .enumerate()
        .map(|(i, l)| (l.id.as_str(), i))
        .collect();
    let blue_at: HashMap<&str, usize> = desc
        .blues
        .iter()
        .enumerate()
        .map(|(j, l)| (l.id.as_str(), j))
        .collect();
    // pos_in_blue[j][a]: when blue j crosses red a; pos_in_red[a][j]:
    // when red a crosses blue j.
    let mut pos_in_blue = vec![vec![0usize; n]; m];
    for (j, blue) in desc.blues.iter().enumerate() {
        for (t, rid) in blue.crossings.iter().enumerate() {
            pos_in_blue[j][red_at[rid.as_str()]] = t;
        }
    }
    let mut pos_in_red = vec![vec![0usize; m]; n];
    for (a, red) in desc.reds.iter().enumerate() {
        for (t, bid) in red.crossings.iter().enumerate() {
            pos_in_red[a][blue_at[bid.as_str()]] = t;
        }
    }
    let shape = GridShape::new(vec![n, m]).expect("both classes nonempty");
    GridOrientation::from_fn(shape, |i, line, a, b| {
        if i == 0 {
            // Red edge on blue line j: toward the later red.
            pos_in_blue[line[0]][a] < pos_in_blue[line[0]][b]
        } else {
            // Blue edge on red line a: toward the earlier blue.
            pos_in_red[line[0]][b] < pos_in_red[line[0]][a]
        }
    })
    .map_err(|e| StretchError::MalformedDescription(format!("grid build failed: {e}")))
}
