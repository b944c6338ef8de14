//! Straight realization and extraction for reduction descriptions.
//!
//! `realize_straight` turns an allowable sequence, together with a
//! straight arrangement whose sweep contains it, into a straight
//! bicolored arrangement realizing the sequence's reduction description:
//! the given lines are recolored red and boxed between four horizontal
//! control lines, and each sequence step is witnessed by a steep pair of
//! blue lines through a point above the arrangement at that step's
//! abscissa.
//!
//! `extract_allowable` inverts this up to projective transformation.
//! From any verified straight realization of a reduction description it
//! recovers an arrangement of the substantive red lines whose sweep
//! contains the reduced sequence: the bottom control line is sent to
//! infinity by an explicit rational homography chosen so that the blue
//! witness pairs collapse to vertical directions, which pins the red
//! order on a vertical line at each step. The homography and the final
//! shear are returned alongside the arrangement so the recovery can be
//! replayed.

use crate::allowable::{
    crossing_point, embed_indices, line_height, realizes, sweep_intervals, up_line,
    AllowableSequence, Color, LineArrangement2D, StretchError,
};
use crate::bicolored::{reduce_to_bicolored, reduction_sequence, BicoloredDescription};
use crate::geometry::Hyperplane;
use crate::linalg;
use crate::pseudoline::verify_straight_description;
use crate::rational::{format_rational, Rational};
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Builds a straight realization of the reduction description of `seq`
/// from a single-colored arrangement of `seq.n()` lines whose sweep
/// contains the sequence. Substantive red line `j` of the output is
/// input line `j` reoriented upward so it is walked left to right; the
/// four control lines and the `2k` blue witness lines are synthesized.
/// Fails with `NotARealization` when some permutation of the sequence is
/// attained on no vertical line of the input.
pub fn realize_straight(
    seq: &AllowableSequence,
    input: &LineArrangement2D,
) -> Result<LineArrangement2D, StretchError> {
    if !input.blues().is_empty() {
        return Err(StretchError::MalformedArrangement(
            "realization input must be single-colored (reds only)".into(),
        ));
    }
    let reds = input.reds();
    if reds.len() != seq.n() {
        return Err(StretchError::NotARealization(format!(
            "sequence is over {} lines but the arrangement has {}",
            seq.n(),
            reds.len()
        )));
    }
    let intervals = sweep_intervals(reds)?;
    let Some(hits) = embed_indices(seq.perms(), &intervals.orders) else {
        return Err(StretchError::NotARealization(
            "the sweep of the arrangement does not contain the sequence".into(),
        ));
    };
    let px: Vec<Rational> = hits
        .iter()
        .map(|&t| intervals.witnesses[t].clone())
        .collect();

    // Lid height of a box containing every line over the witness strip;
    // each line is linear, so its maximum there is at an endpoint.
    let x_lo = &px[0] - rat(1);
    let x_hi = px.last().expect("at least one permutation") + rat(1);
    let mut top = line_height(&reds[0], &x_lo);
    for h in reds {
        for x in [&x_lo, &x_hi] {
            let y = line_height(h, x);
            if y > top {
                top = y;
            }
        }
    }
    let y_cap = &top + rat(1);

    // Steepness scale. The construction is checked against the target
    // description and the scale doubled until every crossing order
    // settles; doubling also escapes any accidental coincidence of a
    // control height with an input line.
    let mut mag = y_cap.abs();
    for a in 0..reds.len() {
        for b in a + 1..reds.len() {
            if let Some((_, y)) = crossing_point(&reds[a], &reds[b]) {
                let y = y.abs();
                if y > mag {
                    mag = y;
                }
            }
        }
    }
    let width = (&x_hi - &x_lo) + rat(1);
    let mut m = (&mag + rat(1)) * &width;
    let desc = reduce_to_bicolored(seq);
    let mut last = String::new();
    for _ in 0..64 {
        if let Ok(arr) = assemble_reduction(reds, &px, &y_cap, &m) {
            match verify_straight_description(&arr, &desc) {
                Ok(report) if report.ok => return Ok(arr),
                Ok(report) => last = report.diff.map(|d| d.to_string()).unwrap_or_default(),
                Err(e) => last = e.to_string(),
            }
        }
        m = &m * rat(2);
    }
    Err(StretchError::VerificationFailed(format!(
        "steepening did not converge; last mismatch: {last}"
    )))
}

fn assemble_reduction(
    reds: &[Hyperplane],
    px: &[Rational],
    y_cap: &Rational,
    m: &Rational,
) -> Result<LineArrangement2D, StretchError> {
    let zero = Rational::zero();
    let mut red_out = Vec::with_capacity(reds.len() + 4);
    red_out.push(up_line(&zero, &(y_cap + rat(1))));
    red_out.push(up_line(&zero, &(y_cap - Rational::new(1.into(), 2.into()))));
    for h in reds {
        let up = if h.normal()[1].is_negative() {
            h.flipped()
        } else {
            h.clone()
        };
        red_out.push(up);
    }
    red_out.push(up_line(&zero, &(rat(1) - m)));
    red_out.push(up_line(&zero, &(-m - rat(1))));

    // The anchors q and q' sit on y = -m, strictly left of every
    // witness; each blue joins an anchor to a witness point, so blue
    // slopes are positive and grow with m. Down-orientation walks the
    // steep blues top to bottom.
    let qx = &px[0] - rat(2);
    let mut blues = Vec::with_capacity(2 * px.len());
    for x in px {
        for shift in [0i64, 1] {
            let sx = &qx + rat(shift);
            let slope = (y_cap + m) / (x - &sx);
            let intercept = y_cap - &slope * x;
            blues.push(up_line(&slope, &intercept).flipped());
        }
    }
    LineArrangement2D::new(red_out, blues)
}

/// A straight arrangement recovered from a realization, together with
/// the projective data that produced it: the row-major homography
/// applied to the plane (third row vanishing on the bottom control
/// line) and the shear `x -> x + t y` applied after it.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub sequence: AllowableSequence,
    pub arrangement: LineArrangement2D,
    pub homography: Vec<Vec<Rational>>,
    pub shear: Rational,
}

impl Serialize for Extraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Extraction", 4)?;
        s.serialize_field("sequence", &self.sequence)?;
        s.serialize_field("arrangement", &self.arrangement)?;
        let hom: Vec<Vec<String>> = self
            .homography
            .iter()
            .map(|row| row.iter().map(format_rational).collect())
            .collect();
        s.serialize_field("homography", &hom)?;
        s.serialize_field("shear", &format_rational(&self.shear))?;
        s.end()
    }
}

/// Recovers an allowable sequence and a straight arrangement realizing
/// it from a verified straight realization of a reduction description,
/// anchoring the homography at the midpoint of the admissible gap.
pub fn extract_allowable(
    arr: &LineArrangement2D,
    desc: &BicoloredDescription,
) -> Result<Extraction, StretchError> {
    extract_allowable_at(arr, desc, &Rational::new(1.into(), 2.into()))
}

/// Like `extract_allowable` with the anchor point placed at the given
/// parameter, strictly between 0 and 1, along the gap between the two
/// blue runs on the bottom control line. Any parameter in the open gap
/// works; exposing it lets callers confirm the recovered order data does
/// not depend on the choice.
pub fn extract_allowable_at(
    arr: &LineArrangement2D,
    desc: &BicoloredDescription,
    lambda: &Rational,
) -> Result<Extraction, StretchError> {
    if *lambda <= Rational::zero() || *lambda >= Rational::one() {
        return Err(StretchError::DegenerateHomography(
            "anchor parameter must lie strictly between 0 and 1".into(),
        ));
    }
    let sequence = reduction_sequence(desc)?;
    let n = sequence.n();
    let k = sequence.k();
    let report = verify_straight_description(arr, desc)?;
    if !report.ok {
        let diff = report.diff.map(|d| d.to_string()).unwrap_or_default();
        return Err(StretchError::VerificationFailed(diff));
    }

    // Positional layout of a reduction description: reds are
    // [top, upper, s_1 .. s_n, lower, bottom] and blues pair up as
    // [b_1, b'_1, .., b_k, b'_k].
    let reds = arr.reds();
    let blues = arr.blues();
    let subs = &reds[2..2 + n];
    let bottom = &reds[n + 3];

    let mut witness = Vec::with_capacity(k);
    for i in 0..k {
        let Some(p) = crossing_point(&blues[2 * i], &blues[2 * i + 1]) else {
            return Err(StretchError::DegenerateHomography(format!(
                "blue pair {} is parallel, so it has no witness point",
                i + 1
            )));
        };
        witness.push(p);
    }

    // The anchor lives on the bottom control, strictly inside the gap
    // between the b-run and the b'-run. Every pair's bottom crossings
    // straddle that gap, so the anchor lies in every pair's double
    // wedge. A parameter hitting a substantive red's crossing is nudged
    // so no recovered line collapses to a vertical.
    let ga = crossing_point(bottom, &blues[0]).expect("verified: crossing exists");
    let gb = crossing_point(bottom, &blues[2 * k - 1]).expect("verified: crossing exists");
    let seg = (&gb.0 - &ga.0, &gb.1 - &ga.1);
    let mut bad: Vec<Rational> = Vec::new();
    for h in subs {
        if let Some(c) = crossing_point(h, bottom) {
            let t = if !seg.0.is_zero() {
                (&c.0 - &ga.0) / &seg.0
            } else {
                (&c.1 - &ga.1) / &seg.1
            };
            if t > Rational::zero() && t < Rational::one() {
                bad.push(t);
            }
        }
    }
    bad.sort();
    let mut t_q = lambda.clone();
    if bad.contains(&t_q) {
        let next = bad
            .iter()
            .find(|b| **b > t_q)
            .cloned()
            .unwrap_or_else(Rational::one);
        t_q = (&t_q + &next) / rat(2);
    }
    let q = (&ga.0 + &t_q * &seg.0, &ga.1 + &t_q * &seg.1);

    // Third row vanishes on the bottom control, first row on the
    // anchor, so the control goes to infinity and the anchor to the
    // vertical direction. Verified arrangements have no vertical lines,
    // so the bottom control's second normal entry is nonzero and the
    // matrix is invertible.
    let bw = bottom.normal();
    let mut hom = vec![
        vec![Rational::one(), Rational::zero(), -&q.0],
        vec![Rational::zero(), Rational::zero(), Rational::one()],
        vec![bw[0].clone(), bw[1].clone(), -bottom.offset()],
    ];

    let mut xi = Vec::with_capacity(k);
    for p in &witness {
        let Some(ip) = image_point(&hom, p) else {
            return Err(StretchError::DegenerateHomography(
                "a witness point lies on the bottom control".into(),
            ));
        };
        xi.push(ip.0);
    }
    if k >= 2 {
        let increasing = xi.windows(2).all(|w| w[0] < w[1]);
        let decreasing = xi.windows(2).all(|w| w[0] > w[1]);
        if !increasing && !decreasing {
            return Err(StretchError::DegenerateHomography(
                "witness abscissas are not monotone".into(),
            ));
        }
        if decreasing {
            hom[0] = hom[0].iter().map(|c| -c).collect();
            xi = xi.into_iter().map(|x| -x).collect();
        }
    }

    let mut imgs = Vec::with_capacity(n);
    for h in subs {
        let Some(g) = image_line(&hom, h) else {
            return Err(StretchError::DegenerateHomography(
                "a substantive red maps through the anchor".into(),
            ));
        };
        if g.normal()[1].is_zero() {
            return Err(StretchError::DegenerateHomography(
                "a substantive red maps to a vertical line".into(),
            ));
        }
        imgs.push(g);
    }

    // The vertical order at the first witness abscissa must match the
    // first permutation top to bottom; its reversal is repaired by a
    // vertical flip.
    let heights: Vec<Rational> = imgs.iter().map(|g| line_height(g, &xi[0])).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| heights[b].cmp(&heights[a]));
    for w in order.windows(2) {
        if heights[w[0]] == heights[w[1]] {
            return Err(StretchError::DegenerateHomography(
                "two recovered lines cross on a witness vertical".into(),
            ));
        }
    }
    let first = &sequence.perms()[0];
    let reversed: Vec<usize> = first.iter().rev().copied().collect();
    if order == reversed && order != *first {
        hom[1] = hom[1].iter().map(|c| -c).collect();
        imgs = imgs
            .iter()
            .map(|g| {
                let w = g.normal();
                Hyperplane::new(vec![w[0].clone(), -&w[1]], g.offset().clone())
                    .expect("nonzero normal")
            })
            .collect();
    } else if order != *first {
        return Err(StretchError::DegenerateHomography(
            "the recovered vertical order does not match the first permutation".into(),
        ));
    }

    // The identity shear almost always suffices because containment is
    // checked on crossing-free strips; the nonzero fallbacks spread
    // crossings that happen to share an abscissa.
    let candidates = [
        Rational::zero(),
        Rational::new(1.into(), 8.into()),
        Rational::new(1.into(), 64.into()),
    ];
    let mut chosen = None;
    for t in candidates {
        let lines: Vec<Hyperplane> = imgs.iter().map(|g| shear_line(g, &t)).collect();
        let Ok(out) = LineArrangement2D::new(lines, Vec::new()) else {
            continue;
        };
        if realizes(&out, Color::Red, &sequence).unwrap_or(false) {
            chosen = Some((out, t));
            break;
        }
    }
    let Some((arrangement, shear)) = chosen else {
        return Err(StretchError::DegenerateHomography(
            "the recovered arrangement does not sweep through the sequence".into(),
        ));
    };
    Ok(Extraction {
        sequence,
        arrangement,
        homography: hom,
        shear,
    })
}

/// Affine image of a point, `None` on the line sent to infinity.
fn image_point(hom: &[Vec<Rational>], p: &(Rational, Rational)) -> Option<(Rational, Rational)> {
    let d = &hom[2][0] * &p.0 + &hom[2][1] * &p.1 + &hom[2][2];
    if d.is_zero() {
        return None;
    }
    let x = (&hom[0][0] * &p.0 + &hom[0][1] * &p.1 + &hom[0][2]) / &d;
    let y = (&hom[1][0] * &p.0 + &hom[1][1] * &p.1 + &hom[1][2]) / &d;
    Some((x, y))
}

/// Image of a line under the homography: coefficient vectors transform
/// by the inverse transpose. `None` when the image is the line at
/// infinity.
fn image_line(hom: &[Vec<Rational>], h: &Hyperplane) -> Option<Hyperplane> {
    let u = vec![h.normal()[0].clone(), h.normal()[1].clone(), -h.offset()];
    let t = vec![
        vec![hom[0][0].clone(), hom[1][0].clone(), hom[2][0].clone()],
        vec![hom[0][1].clone(), hom[1][1].clone(), hom[2][1].clone()],
        vec![hom[0][2].clone(), hom[1][2].clone(), hom[2][2].clone()],
    ];
    let v = linalg::solve(t, u)?;
    let mut it = v.into_iter();
    let v0 = it.next().expect("three coefficients");
    let v1 = it.next().expect("three coefficients");
    let v2 = it.next().expect("three coefficients");
    Hyperplane::new(vec![v0, v1], -v2).ok()
}

/// Image of a line under the shear `x -> x + t y`.
fn shear_line(g: &Hyperplane, t: &Rational) -> Hyperplane {
    let w = g.normal();
    Hyperplane::new(vec![w[0].clone(), &w[1] - t * &w[0]], g.offset().clone())
        .expect("nonzero normal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allowable::sweep_sequence;
    use crate::bicolored::describe;
    use crate::rational::parse_rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rational(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn seq(perms: &[&[usize]]) -> AllowableSequence {
        AllowableSequence::new(perms.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn single(reds: Vec<Hyperplane>) -> LineArrangement2D {
        LineArrangement2D::new(reds, Vec::new()).unwrap()
    }

    fn crossing_pair() -> LineArrangement2D {
        single(vec![
            up_line(&rational("1"), &rational("0")),
            up_line(&rational("-1"), &rational("0")),
        ])
    }

    #[test]
    fn realize_straight_builds_a_verifying_realization() {
        // y = x and y = -x swap once; left of the crossing, line 1 is
        // on top.
        let s = seq(&[&[1, 0], &[0, 1]]);
        let arr = realize_straight(&s, &crossing_pair()).unwrap();
        assert_eq!(arr.reds().len(), 6);
        assert_eq!(arr.blues().len(), 4);
        let desc = reduce_to_bicolored(&s);
        assert!(verify_straight_description(&arr, &desc).unwrap().ok);
    }

    #[test]
    fn realize_straight_rejects_non_realizations() {
        let parallels = single(vec![
            up_line(&rational("1"), &rational("0")),
            up_line(&rational("1"), &rational("5")),
        ]);
        let s = seq(&[&[1, 0], &[0, 1]]);
        assert!(matches!(
            realize_straight(&s, &parallels),
            Err(StretchError::NotARealization(_))
        ));
        let s3 = seq(&[&[0, 1, 2]]);
        assert!(matches!(
            realize_straight(&s3, &parallels),
            Err(StretchError::NotARealization(_))
        ));
        let two = LineArrangement2D::new(
            vec![up_line(&rational("1"), &rational("0"))],
            vec![up_line(&rational("2"), &rational("0"))],
        )
        .unwrap();
        assert!(matches!(
            realize_straight(&seq(&[&[0]]), &two),
            Err(StretchError::MalformedArrangement(_))
        ));
    }

    #[test]
    fn extract_round_trips_the_flagship_pair() {
        let s = seq(&[&[1, 0], &[0, 1]]);
        let arr = realize_straight(&s, &crossing_pair()).unwrap();
        let desc = reduce_to_bicolored(&s);
        let ext = extract_allowable(&arr, &desc).unwrap();
        assert_eq!(ext.sequence, s);
        assert_eq!(ext.arrangement.reds().len(), 2);
        assert!(ext.arrangement.blues().is_empty());
        assert!(realizes(&ext.arrangement, Color::Red, &s).unwrap());
        assert_eq!(ext.homography.len(), 3);
    }

    #[test]
    fn extraction_is_stable_across_anchor_choices() {
        let lines = single(vec![
            up_line(&rational("0"), &rational("0")),
            up_line(&rational("1"), &rational("-1")),
            up_line(&rational("2"), &rational("-4")),
        ]);
        let s = seq(&[&[0, 1, 2], &[1, 0, 2], &[1, 2, 0], &[2, 1, 0]]);
        let arr = realize_straight(&s, &lines).unwrap();
        let desc = reduce_to_bicolored(&s);
        for lam in ["1/100", "99/100"] {
            let ext = extract_allowable_at(&arr, &desc, &rational(lam)).unwrap();
            assert_eq!(ext.sequence, s);
            assert!(realizes(&ext.arrangement, Color::Red, &s).unwrap());
        }
    }

    #[test]
    fn extract_rejects_foreign_and_mangled_inputs() {
        let plain = LineArrangement2D::new(
            vec![up_line(&rational("0"), &rational("0"))],
            vec![up_line(&rational("10"), &rational("0"))],
        )
        .unwrap();
        let foreign = describe(&plain).unwrap();
        assert!(matches!(
            extract_allowable(&plain, &foreign),
            Err(StretchError::WrongFamily(_))
        ));

        let s = seq(&[&[1, 0], &[0, 1]]);
        let arr = realize_straight(&s, &crossing_pair()).unwrap();
        let desc = reduce_to_bicolored(&s);
        let mangled = LineArrangement2D::new(arr.reds().to_vec(), {
            let mut b = arr.blues().to_vec();
            b.swap(0, 1);
            b
        })
        .unwrap();
        assert!(matches!(
            extract_allowable(&mangled, &desc),
            Err(StretchError::VerificationFailed(_))
        ));

        assert!(matches!(
            extract_allowable_at(&arr, &desc, &rational("3/2")),
            Err(StretchError::DegenerateHomography(_))
        ));
    }

    #[test]
    fn random_sweeps_round_trip_through_extraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut done = 0;
        for _ in 0..40 {
            let n = rng.random_range(2usize..5);
            let mut lines = Vec::with_capacity(n);
            let mut tagged = Vec::new();
            for _ in 0..n {
                loop {
                    let sl = rat(rng.random_range(-6i64..=6));
                    let ic = Rational::new(
                        rng.random_range(-40i64..=40).into(),
                        rng.random_range(1i64..=7).into(),
                    );
                    if !tagged.contains(&(sl.clone(), ic.clone())) {
                        tagged.push((sl.clone(), ic.clone()));
                        lines.push(up_line(&sl, &ic));
                        break;
                    }
                }
            }
            let arr = single(lines);
            let Ok(s) = sweep_sequence(&arr, Color::Red) else {
                continue;
            };
            // Simultaneous crossings can make an intermediate order of
            // the swap-by-swap record unattainable on vertical lines.
            let Ok(real) = realize_straight(&s, &arr) else {
                continue;
            };
            let ext = extract_allowable(&real, &reduce_to_bicolored(&s)).unwrap();
            assert_eq!(ext.sequence, s);
            assert!(realizes(&ext.arrangement, Color::Red, &s).unwrap());
            done += 1;
        }
        assert!(done >= 20, "only {done} samples survived");
    }
}
