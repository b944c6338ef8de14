//! Biased colorful cuts and the semi-cut prober.
//!
//! An alpha-cut of a colored point set picks one point per class so that
//! the spanned hyperplane has exactly `alpha_i - 1` points of class `i`
//! strictly below it. On well-separated, weakly general instances this
//! cut exists and is unique for every `alpha` in range. The primary
//! algorithm is a full scan over all colorful tuples; the grid route
//! (find the vertex whose outmap is `alpha - 1`) is an independent
//! cross-check, not an optimization.
//!
//! Semi-cuts fix one class-0 base point and prescribe, for every other
//! class, how many of its points lie strictly above the hyperplane.
//! `probe_lemma_a1` sweeps all base points and target vectors and
//! reports any pair admitting two or more semi-cuts; it asserts nothing,
//! it only surfaces configurations.

use crate::geometry::{hyperplane_through, side_counts, Hyperplane, Sign};
use crate::grid::{build_sigma, build_sigma_unchecked, GridError, GridShape, Outmap, PreconditionFailure};
use crate::separation::{check_weak_general_position, check_well_separated, ColoredPointSet, PointId};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreconditionPolicy {
    /// Run the position and separation checks before scanning.
    Verify,
    /// Trust the caller; violations surface as NoCut, MultipleCuts, or
    /// NotBijective with evidence.
    Assert,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaVector {
    pub alpha: Vec<usize>,
}

impl AlphaVector {
    pub fn new(alpha: Vec<usize>) -> AlphaVector {
        AlphaVector { alpha }
    }

    /// Checks `1 <= alpha_i <= sizes[i]` per component, with the right
    /// number of components.
    pub fn check_range(&self, sizes: &[usize]) -> Result<(), String> {
        if self.alpha.len() != sizes.len() {
            return Err(format!(
                "expected {} components, got {}",
                sizes.len(),
                self.alpha.len()
            ));
        }
        for (i, (&a, &n)) in self.alpha.iter().zip(sizes).enumerate() {
            if a < 1 || a > n {
                return Err(format!("component {i} must lie in 1..={n}, got {a}"));
            }
        }
        Ok(())
    }

    fn validate(&self, p: &ColoredPointSet) -> Result<(), CutError> {
        self.check_range(&p.class_sizes()).map_err(CutError::InvalidAlpha)
    }
}

impl fmt::Display for AlphaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.alpha.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// A colorful cut: the chosen point index per class, the spanned
/// hyperplane, and per-class `(below, on, above)` counts. On weakly
/// general instances the on-count is exactly 1 per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub tuple: Vec<usize>,
    pub hyperplane: Hyperplane,
    pub counts: Vec<(usize, usize, usize)>,
}

impl Cut {
    /// The alpha vector this cut attains: per-class below-count plus one.
    pub fn alpha(&self) -> AlphaVector {
        AlphaVector {
            alpha: self.counts.iter().map(|&(below, _, _)| below + 1).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiCutQuery {
    /// Index into class 0.
    pub base_point: usize,
    /// Required strictly-above count per class `1..d`.
    pub targets: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExclusionReason {
    DegenerateSpan,
    ExtraIncidence { extra: PointId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcludedTuple {
    pub tuple: Vec<usize>,
    pub reason: ExclusionReason,
}

/// Semi-cuts matching a query, plus the tuples that were excluded from
/// counting because their span was degenerate or picked up an extra
/// incident point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiCutReport {
    pub cuts: Vec<Cut>,
    pub excluded: Vec<ExcludedTuple>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeViolation {
    pub base_point: usize,
    pub targets: Vec<usize>,
    pub semi_cut_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub base_points: usize,
    pub target_vectors: usize,
    pub violations: Vec<ProbeViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutError {
    InvalidAlpha(String),
    PreconditionFailed(Box<PreconditionFailure>),
    NoCut { alpha: Vec<usize> },
    MultipleCuts { alpha: Vec<usize>, tuples: Vec<Vec<usize>> },
    /// The count-vector map is not a bijection; carries every alpha
    /// vector whose tuple count differs from one, with its multiplicity,
    /// plus any degenerate tuples encountered.
    NotBijective {
        defects: Vec<(Vec<usize>, usize)>,
        degenerate_tuples: Vec<Vec<usize>>,
    },
    OutOfRange(String),
    Grid(GridError),
}

impl fmt::Display for CutError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutError::InvalidAlpha(msg) => write!(f, "invalid alpha: {msg}"),
            CutError::PreconditionFailed(why) => match &**why {
                PreconditionFailure::WeakPosition(_) => {
                    write!(f, "point set is not in weak general position")
                }
                PreconditionFailure::Separation(_) => write!(f, "point set is not well-separated"),
            },
            CutError::NoCut { alpha } => write!(f, "no tuple attains alpha {alpha:?}"),
            CutError::MultipleCuts { alpha, tuples } => {
                write!(f, "{} tuples attain alpha {alpha:?}", tuples.len())
            }
            CutError::NotBijective { defects, .. } => {
                write!(f, "count-vector map is not a bijection ({} defects)", defects.len())
            }
            CutError::OutOfRange(msg) => write!(f, "out of range: {msg}"),
            CutError::Grid(e) => write!(f, "grid route failed: {e}"),
        }
    }
}

impl std::error::Error for CutError {}

fn verify_preconditions(p: &ColoredPointSet) -> Result<(), CutError> {
    let wgp = check_weak_general_position(p);
    if !wgp.satisfied {
        return Err(CutError::PreconditionFailed(Box::new(
            PreconditionFailure::WeakPosition(wgp),
        )));
    }
    let ws = check_well_separated(p);
    if !ws.satisfied {
        return Err(CutError::PreconditionFailed(Box::new(
            PreconditionFailure::Separation(ws),
        )));
    }
    Ok(())
}

/// All colorful tuples in lexicographic order, as index vectors.
fn colorful_tuples(p: &ColoredPointSet) -> Vec<Vec<usize>> {
    let shape = GridShape::new(p.class_sizes()).expect("classes are nonempty");
    shape.vertices().into_iter().map(|v| v.coords).collect()
}

/// The cut data of one tuple, or None when its span is degenerate.
fn cut_for_tuple(p: &ColoredPointSet, tuple: &[usize]) -> Option<Cut> {
    let span: Vec<_> = tuple
        .iter()
        .enumerate()
        .map(|(i, &j)| p.class(i)[j].clone())
        .collect();
    let hyperplane = hyperplane_through(&span).ok()?;
    let counts = p
        .classes()
        .iter()
        .map(|class| side_counts(&hyperplane, class))
        .collect();
    Some(Cut {
        tuple: tuple.to_vec(),
        hyperplane,
        counts,
    })
}

/// Finds the unique alpha-cut by scanning every colorful tuple. The scan
/// always completes so uniqueness is verified, not assumed.
pub fn find_alpha_cut(
    p: &ColoredPointSet,
    alpha: &AlphaVector,
    policy: PreconditionPolicy,
) -> Result<Cut, CutError> {
    alpha.validate(p)?;
    if policy == PreconditionPolicy::Verify {
        verify_preconditions(p)?;
    }
    let mut matches: Vec<Cut> = Vec::new();
    for tuple in colorful_tuples(p) {
        let Some(cut) = cut_for_tuple(p, &tuple) else {
            continue;
        };
        if cut
            .counts
            .iter()
            .zip(&alpha.alpha)
            .all(|(&(below, _, _), &a)| below == a - 1)
        {
            matches.push(cut);
        }
    }
    match matches.len() {
        0 => Err(CutError::NoCut {
            alpha: alpha.alpha.clone(),
        }),
        1 => Ok(matches.pop().expect("one element")),
        _ => Err(CutError::MultipleCuts {
            alpha: alpha.alpha.clone(),
            tuples: matches.into_iter().map(|c| c.tuple).collect(),
        }),
    }
}

/// One scan over all colorful tuples, returning the cut for every alpha
/// vector in lexicographic order. Errors with the defect list when the
/// count-vector map fails to be a bijection.
pub fn all_alpha_cuts(
    p: &ColoredPointSet,
    policy: PreconditionPolicy,
) -> Result<Vec<(AlphaVector, Cut)>, CutError> {
    if policy == PreconditionPolicy::Verify {
        verify_preconditions(p)?;
    }
    let mut by_alpha: BTreeMap<Vec<usize>, Vec<Cut>> = BTreeMap::new();
    let mut degenerate: Vec<Vec<usize>> = Vec::new();
    for tuple in colorful_tuples(p) {
        match cut_for_tuple(p, &tuple) {
            Some(cut) => by_alpha.entry(cut.alpha().alpha).or_default().push(cut),
            None => degenerate.push(tuple),
        }
    }
    let mut defects: Vec<(Vec<usize>, usize)> = Vec::new();
    let shape = GridShape::new(p.class_sizes()).expect("classes are nonempty");
    for v in shape.vertices() {
        let alpha: Vec<usize> = v.coords.iter().map(|&a| a + 1).collect();
        let found = by_alpha.get(&alpha).map_or(0, |cuts| cuts.len());
        if found != 1 {
            defects.push((alpha, found));
        }
    }
    // Count vectors outside the valid range are defects too.
    for (alpha, cuts) in &by_alpha {
        if alpha.iter().zip(p.class_sizes()).any(|(&a, n)| a > n) {
            defects.push((alpha.clone(), cuts.len()));
        }
    }
    if !defects.is_empty() || !degenerate.is_empty() {
        return Err(CutError::NotBijective {
            defects,
            degenerate_tuples: degenerate,
        });
    }
    Ok(by_alpha
        .into_iter()
        .map(|(alpha, mut cuts)| {
            (AlphaVector { alpha }, cuts.pop().expect("exactly one"))
        })
        .collect())
}

/// The grid route to the same cut: build the induced orientation, locate
/// the vertex with outmap `alpha - 1`, and read the cut off that vertex.
pub fn cut_from_grid(
    p: &ColoredPointSet,
    alpha: &AlphaVector,
    policy: PreconditionPolicy,
) -> Result<Cut, CutError> {
    alpha.validate(p)?;
    let sigma = match policy {
        PreconditionPolicy::Verify => build_sigma(p),
        PreconditionPolicy::Assert => build_sigma_unchecked(p),
    }
    .map_err(|e| match e {
        GridError::PreconditionFailed(why) => CutError::PreconditionFailed(why),
        other => CutError::Grid(other),
    })?;
    let target = Outmap {
        components: alpha.alpha.iter().map(|&a| a - 1).collect(),
    };
    let vertex = sigma
        .find_vertex_with_outmap(&target)
        .map_err(CutError::Grid)?;
    cut_for_tuple(p, &vertex.coords).ok_or(CutError::NoCut {
        alpha: alpha.alpha.clone(),
    })
}

/// All semi-cuts for a base point and target vector: colorful tuples
/// through the base whose hyperplane has exactly `targets[i-1]` points
/// of class `i` strictly above it, for every class `i >= 1`. Class 0 is
/// unconstrained. Tuples with degenerate spans or extra incident points
/// are excluded from counting and reported.
pub fn find_semi_cuts(p: &ColoredPointSet, query: &SemiCutQuery) -> Result<SemiCutReport, CutError> {
    let d = p.dimension();
    if d < 2 {
        return Err(CutError::OutOfRange(
            "semi-cuts need at least two classes".into(),
        ));
    }
    if query.base_point >= p.class(0).len() {
        return Err(CutError::OutOfRange(format!(
            "base point {} out of range for class 0 of size {}",
            query.base_point,
            p.class(0).len()
        )));
    }
    if query.targets.len() != d - 1 {
        return Err(CutError::OutOfRange(format!(
            "expected {} targets, got {}",
            d - 1,
            query.targets.len()
        )));
    }
    let mut cuts = Vec::new();
    let mut excluded = Vec::new();
    let rest_shape = GridShape::new(p.class_sizes()[1..].to_vec()).expect("classes nonempty");
    for rest in rest_shape.vertices() {
        let mut tuple = Vec::with_capacity(d);
        tuple.push(query.base_point);
        tuple.extend_from_slice(&rest.coords);
        let Some(cut) = cut_for_tuple(p, &tuple) else {
            excluded.push(ExcludedTuple {
                tuple,
                reason: ExclusionReason::DegenerateSpan,
            });
            continue;
        };
        // An extra incident point beyond the tuple disqualifies the
        // tuple from counting; report it instead.
        let mut extra = None;
        'scan: for (class, pts) in p.classes().iter().enumerate() {
            for (index, q) in pts.iter().enumerate() {
                if index != tuple[class] && cut.hyperplane.side(q) == Sign::On {
                    extra = Some(PointId { class, index });
                    break 'scan;
                }
            }
        }
        if let Some(extra) = extra {
            excluded.push(ExcludedTuple {
                tuple,
                reason: ExclusionReason::ExtraIncidence { extra },
            });
            continue;
        }
        let hit = (1..d).all(|i| {
            let (_, _, above) = cut.counts[i];
            above == query.targets[i - 1]
        });
        if hit {
            cuts.push(cut);
        }
    }
    Ok(SemiCutReport { cuts, excluded })
}

/// Sweeps every base point of class 0 against every target vector
/// (each component ranging over `0..=n_i`) and reports the queries that
/// admit two or more semi-cuts. Purely exploratory; an empty violation
/// list is the expected outcome on well-separated instances.
pub fn probe_lemma_a1(p: &ColoredPointSet) -> Result<ProbeReport, CutError> {
    let d = p.dimension();
    if d < 2 {
        return Err(CutError::OutOfRange(
            "the prober needs at least two classes".into(),
        ));
    }
    let target_shape = GridShape::new(
        p.class_sizes()[1..].iter().map(|&n| n + 1).collect(),
    )
    .expect("nonempty");
    let targets: Vec<Vec<usize>> = target_shape.vertices().into_iter().map(|v| v.coords).collect();
    let mut violations = Vec::new();
    for base_point in 0..p.class(0).len() {
        for t in &targets {
            let report = find_semi_cuts(
                p,
                &SemiCutQuery {
                    base_point,
                    targets: t.clone(),
                },
            )
            .expect("query constructed in range");
            if report.cuts.len() >= 2 {
                violations.push(ProbeViolation {
                    base_point,
                    targets: t.clone(),
                    semi_cut_count: report.cuts.len(),
                });
            }
        }
    }
    Ok(ProbeReport {
        base_points: p.class(0).len(),
        target_vectors: targets.len(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point_i;
    use crate::rational::rat_i;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn cps(dimension: usize, classes: &[&[&[i64]]]) -> ColoredPointSet {
        ColoredPointSet::new(
            dimension,
            classes
                .iter()
                .map(|class| class.iter().map(|c| point_i(c)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn three_by_three() -> ColoredPointSet {
        cps(
            2,
            &[
                &[&[0, 0], &[1, 3], &[-1, 5]],
                &[&[10, 1], &[11, 4], &[10, 6]],
            ],
        )
    }

    #[test]
    fn one_dimensional_cuts_follow_the_order() {
        let p = cps(1, &[&[&[0], &[1], &[2]]]);
        let cut = find_alpha_cut(&p, &AlphaVector::new(vec![2]), PreconditionPolicy::Verify).unwrap();
        assert_eq!(cut.tuple, vec![1]);
        assert_eq!(cut.counts, vec![(1, 1, 1)]);

        let all = all_alpha_cuts(&p, PreconditionPolicy::Verify).unwrap();
        let tuples: Vec<(Vec<usize>, Vec<usize>)> = all
            .iter()
            .map(|(a, c)| (a.alpha.clone(), c.tuple.clone()))
            .collect();
        // Larger coordinates lie below, so alpha counts down the order.
        assert_eq!(
            tuples,
            vec![
                (vec![1], vec![2]),
                (vec![2], vec![1]),
                (vec![3], vec![0]),
            ]
        );
    }

    #[test]
    fn alpha_out_of_range_fails_before_scanning() {
        let p = cps(1, &[&[&[0], &[1], &[2]]]);
        assert!(matches!(
            find_alpha_cut(&p, &AlphaVector::new(vec![4]), PreconditionPolicy::Assert),
            Err(CutError::InvalidAlpha(_))
        ));
        assert!(matches!(
            find_alpha_cut(&p, &AlphaVector::new(vec![0]), PreconditionPolicy::Assert),
            Err(CutError::InvalidAlpha(_))
        ));
        assert!(matches!(
            cut_from_grid(&p, &AlphaVector::new(vec![1, 1]), PreconditionPolicy::Assert),
            Err(CutError::InvalidAlpha(_))
        ));
    }

    #[test]
    fn precondition_verification_rejects_bad_instances() {
        let crossing = cps(2, &[&[&[0, 0], &[2, 0]], &[&[1, 1], &[1, -1]]]);
        assert!(matches!(
            find_alpha_cut(&crossing, &AlphaVector::new(vec![1, 1]), PreconditionPolicy::Verify),
            Err(CutError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn bottom_cut_has_nothing_below_and_matches_the_sink() {
        let p = three_by_three();
        let alpha = AlphaVector::new(vec![1, 1]);
        let cut = find_alpha_cut(&p, &alpha, PreconditionPolicy::Verify).unwrap();
        for &(below, on, _) in &cut.counts {
            assert_eq!(below, 0);
            assert_eq!(on, 1);
        }
        let via_grid = cut_from_grid(&p, &alpha, PreconditionPolicy::Verify).unwrap();
        assert_eq!(cut, via_grid);
        // The grid vertex carrying the cut is the global sink.
        let sigma = build_sigma(&p).unwrap();
        let sink = sigma
            .find_vertex_with_outmap(&Outmap { components: vec![0, 0] })
            .unwrap();
        assert_eq!(sink.coords, cut.tuple);
    }

    #[test]
    fn full_cut_table_is_a_bijection_and_reverifies() {
        let p = three_by_three();
        let all = all_alpha_cuts(&p, PreconditionPolicy::Verify).unwrap();
        assert_eq!(all.len(), 9);
        for (alpha, cut) in &all {
            assert_eq!(&cut.alpha(), alpha);
            for (i, &(below, on, above)) in cut.counts.iter().enumerate() {
                assert_eq!(on, 1);
                assert_eq!(below + on + above, p.class(i).len());
                let recount = side_counts(&cut.hyperplane, p.class(i));
                assert_eq!((below, on, above), recount);
            }
        }
    }

    #[test]
    fn grid_route_agrees_with_scanning_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(2024);
        let mut done = 0;
        while done < 10 {
            let classes: Vec<Vec<crate::geometry::Point>> = (0..2)
                .map(|i| {
                    (0..rng.random_range(2..=4))
                        .map(|_| {
                            point_i(&[
                                rng.random_range(0..8) + i * 30,
                                rng.random_range(-10..10),
                            ])
                        })
                        .collect()
                })
                .collect();
            let Ok(p) = ColoredPointSet::new(2, classes) else {
                continue;
            };
            if !check_weak_general_position(&p).satisfied || !check_well_separated(&p).satisfied {
                continue;
            }
            for (alpha, cut) in all_alpha_cuts(&p, PreconditionPolicy::Assert).unwrap() {
                let via_grid = cut_from_grid(&p, &alpha, PreconditionPolicy::Assert).unwrap();
                assert_eq!(cut, via_grid);
            }
            done += 1;
        }
    }

    #[test]
    fn crossing_instance_duplicates_count_vectors() {
        let crossing = cps(2, &[&[&[0, 0], &[2, 0]], &[&[1, 1], &[1, -1]]]);
        let err = all_alpha_cuts(&crossing, PreconditionPolicy::Assert).unwrap_err();
        let CutError::NotBijective { mut defects, degenerate_tuples } = err else {
            panic!("expected NotBijective");
        };
        assert!(degenerate_tuples.is_empty());
        defects.sort();
        assert_eq!(
            defects,
            vec![
                (vec![1, 1], 2),
                (vec![1, 2], 0),
                (vec![2, 1], 0),
                (vec![2, 2], 2),
            ]
        );
    }

    #[test]
    fn deleting_a_point_keeps_the_table_bijective() {
        let p = three_by_three();
        for class in 0..2 {
            for index in 0..3 {
                let mut classes = p.classes().to_vec();
                classes[class].remove(index);
                let sub = ColoredPointSet::new(2, classes).unwrap();
                let all = all_alpha_cuts(&sub, PreconditionPolicy::Verify).unwrap();
                assert_eq!(all.len(), sub.class_sizes().iter().product::<usize>());
            }
        }
    }

    #[test]
    fn semi_cut_example_has_a_unique_match() {
        let p = cps(2, &[&[&[0, 0], &[0, 4]], &[&[4, 1], &[4, 3]]]);
        let report = find_semi_cuts(
            &p,
            &SemiCutQuery {
                base_point: 0,
                targets: vec![1],
            },
        )
        .unwrap();
        assert!(report.excluded.is_empty());
        assert_eq!(report.cuts.len(), 1);
        let cut = &report.cuts[0];
        assert_eq!(cut.tuple, vec![0, 0]);
        // The spanned line is 4y = x through the origin.
        assert_eq!(cut.hyperplane.normal(), &[rat_i(-1), rat_i(4)]);
        assert_eq!(cut.hyperplane.offset(), &rat_i(0));
    }

    #[test]
    fn impossible_target_count_yields_no_semi_cuts() {
        let p = cps(2, &[&[&[0, 0], &[0, 4]], &[&[4, 1], &[4, 3]]]);
        let report = find_semi_cuts(
            &p,
            &SemiCutQuery {
                base_point: 0,
                targets: vec![3],
            },
        )
        .unwrap();
        assert!(report.cuts.is_empty());
        assert!(report.excluded.is_empty());
    }

    #[test]
    fn semi_cut_queries_are_range_checked() {
        let p = cps(2, &[&[&[0, 0], &[0, 4]], &[&[4, 1], &[4, 3]]]);
        assert!(matches!(
            find_semi_cuts(&p, &SemiCutQuery { base_point: 2, targets: vec![1] }),
            Err(CutError::OutOfRange(_))
        ));
        assert!(matches!(
            find_semi_cuts(&p, &SemiCutQuery { base_point: 0, targets: vec![1, 1] }),
            Err(CutError::OutOfRange(_))
        ));
        let one_d = cps(1, &[&[&[0]]]);
        assert!(matches!(
            find_semi_cuts(&one_d, &SemiCutQuery { base_point: 0, targets: vec![] }),
            Err(CutError::OutOfRange(_))
        ));
    }

    #[test]
    fn semi_cuts_report_excluded_degenerate_tuples() {
        // (0,0), (1,1), (2,2) are collinear: the tuple picking (1,1) and
        // the extra point (2,2) rides the same line.
        let p = cps(2, &[&[&[0, 0], &[5, 1]], &[&[1, 1], &[2, 2]]]);
        let report = find_semi_cuts(
            &p,
            &SemiCutQuery {
                base_point: 0,
                targets: vec![0],
            },
        )
        .unwrap();
        // Both tuples through (0,0) span the line y = x, and each sees
        // the other class-1 point riding it.
        assert_eq!(report.excluded.len(), 2);
        assert_eq!(report.excluded[0].tuple, vec![0, 0]);
        assert_eq!(
            report.excluded[0].reason,
            ExclusionReason::ExtraIncidence {
                extra: PointId { class: 1, index: 1 }
            }
        );
        assert_eq!(report.excluded[1].tuple, vec![0, 1]);
        assert_eq!(
            report.excluded[1].reason,
            ExclusionReason::ExtraIncidence {
                extra: PointId { class: 1, index: 0 }
            }
        );
    }

    #[test]
    fn prober_is_clean_on_well_separated_instances() {
        let fixtures = [
            cps(2, &[&[&[0, 0], &[0, 4]], &[&[4, 1], &[4, 3]]]),
            three_by_three(),
            cps(2, &[&[&[0, 0]], &[&[1, 1]]]),
        ];
        for p in &fixtures {
            let report = probe_lemma_a1(p).unwrap();
            assert!(report.violations.is_empty(), "violations on {p:?}");
        }
        let mut rng = StdRng::seed_from_u64(77);
        let mut done = 0;
        while done < 8 {
            let classes: Vec<Vec<crate::geometry::Point>> = (0..2)
                .map(|i| {
                    (0..rng.random_range(1..=3))
                        .map(|_| {
                            point_i(&[
                                rng.random_range(0..7) + i * 25,
                                rng.random_range(-8..8),
                            ])
                        })
                        .collect()
                })
                .collect();
            let Ok(p) = ColoredPointSet::new(2, classes) else {
                continue;
            };
            if !check_weak_general_position(&p).satisfied || !check_well_separated(&p).satisfied {
                continue;
            }
            assert!(probe_lemma_a1(&p).unwrap().violations.is_empty());
            done += 1;
        }
    }
}
