//! Seeded instance generators for tests and the command line.
//!
//! Every generator rejection-samples and then verifies its output with
//! the corresponding checker, so a returned instance is guaranteed to
//! pass; the shared attempt budget turns pathological parameters into an
//! error instead of a hang. All randomness flows through the caller's
//! generator, so a fixed seed reproduces the instance byte for byte.

use crate::allowable::{
    sweep_intervals, sweep_sequence, AllowableSequence, Color, LineArrangement2D,
};
use crate::arrangement::ColoredLineArrangement;
use crate::bicolored::describe;
use crate::cut::{find_alpha_cut, AlphaVector, PreconditionPolicy};
use crate::fixtures::beta_gamma_example;
use crate::geometry::{dualize, Hyperplane, Point, Sign};
use crate::rational::{rat, rat_i, Rational};
use crate::separation::{
    check_beta_gamma, check_weak_general_position, check_well_separated, BetaGamma,
    ColoredPointSet,
};
use rand::Rng;
use std::error::Error;
use std::fmt;

/// Attempts before a generator gives up on its parameters.
pub const ATTEMPT_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenerateError {
    InvalidParams(String),
    GenerationBudgetExceeded(String),
}

impl fmt::Display for GenerateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenerateError::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            GenerateError::GenerationBudgetExceeded(msg) => {
                write!(f, "generation budget exceeded: {msg}")
            }
        }
    }
}

impl Error for GenerateError {}

fn check_sizes(d: usize, sizes: &[usize]) -> Result<(), GenerateError> {
    if d == 0 || d > 4 {
        return Err(GenerateError::InvalidParams(format!(
            "dimension must lie in 1..=4, got {d}"
        )));
    }
    if sizes.len() != d {
        return Err(GenerateError::InvalidParams(format!(
            "need {d} class sizes, got {}",
            sizes.len()
        )));
    }
    if let Some(&n) = sizes.iter().find(|&&n| n == 0 || n > 8) {
        return Err(GenerateError::InvalidParams(format!(
            "class sizes must lie in 1..=8, got {n}"
        )));
    }
    Ok(())
}

fn small_rat<R: Rng>(rng: &mut R, span: i64, den_lo: i64, den_hi: i64) -> Rational {
    rat(rng.random_range(-span..=span), rng.random_range(den_lo..=den_hi))
}

/// A well-separated point set in weak general position: one cluster per
/// class near scaled basis anchors, jittered by small rationals, then
/// verified with the separation and position checkers.
pub fn well_separated_points<R: Rng>(
    d: usize,
    sizes: &[usize],
    rng: &mut R,
) -> Result<ColoredPointSet, GenerateError> {
    check_sizes(d, sizes)?;
    for _ in 0..ATTEMPT_BUDGET {
        let classes: Vec<Vec<Point>> = (0..d)
            .map(|i| {
                (0..sizes[i])
                    .map(|_| {
                        let coords = (0..d)
                            .map(|axis| {
                                let anchor = if axis == i { rat_i(12) } else { rat_i(0) };
                                anchor + small_rat(rng, 8, 4, 5)
                            })
                            .collect();
                        Point::new(coords)
                    })
                    .collect()
            })
            .collect();
        let Ok(p) = ColoredPointSet::new(d, classes) else {
            continue;
        };
        if check_weak_general_position(&p).satisfied && check_well_separated(&p).satisfied {
            return Ok(p);
        }
    }
    Err(GenerateError::GenerationBudgetExceeded(format!(
        "well-separated sampling at d={d}, sizes {sizes:?}"
    )))
}

/// A two-class planar set whose duals form a describable bicolored line
/// arrangement: the classes occupy disjoint vertical slabs, so the dual
/// slopes are class-separated, and the instance is verified to be
/// well separated, in weak general position, and cleanly describable.
pub fn dualizable_ws_2d<R: Rng>(
    sizes: &[usize],
    rng: &mut R,
) -> Result<ColoredPointSet, GenerateError> {
    check_sizes(2, sizes)?;
    for _ in 0..ATTEMPT_BUDGET {
        let mut xs: Vec<Rational> = Vec::new();
        let mut classes: Vec<Vec<Point>> = Vec::new();
        let mut clean = true;
        for class in 0..2 {
            let mut points = Vec::with_capacity(sizes[class]);
            for _ in 0..sizes[class] {
                // Class 0 in x ∈ [-4,-1], class 1 in x ∈ [1,4], all
                // abscissas distinct so the dual lines share no slope.
                let num = rng.random_range(4i64..=16);
                let x = if class == 0 { rat(-num, 4) } else { rat(num, 4) };
                if xs.contains(&x) {
                    clean = false;
                    break;
                }
                xs.push(x.clone());
                points.push(Point::new(vec![x, small_rat(rng, 12, 3, 4)]));
            }
            classes.push(points);
        }
        if !clean {
            continue;
        }
        let Ok(p) = ColoredPointSet::new(2, classes) else {
            continue;
        };
        if !check_weak_general_position(&p).satisfied || !check_well_separated(&p).satisfied {
            continue;
        }
        let duals: Vec<Vec<Hyperplane>> = p
            .classes()
            .iter()
            .map(|class| {
                class
                    .iter()
                    .map(|q| dualize(q).expect("points always dualize"))
                    .collect()
            })
            .collect();
        let Ok(arr) = LineArrangement2D::new(duals[0].clone(), duals[1].clone()) else {
            continue;
        };
        if describe(&arr).is_ok() {
            return Ok(p);
        }
    }
    Err(GenerateError::GenerationBudgetExceeded(format!(
        "dualizable sampling at sizes {sizes:?}"
    )))
}

/// A random invertible affine image of the frozen biased-separation
/// fixture. Separation properties are affine invariants, so each analog
/// is again biased-separated at beta = gamma = (2,2) without being well
/// separated, and keeps its unique median cut; all of that is still
/// verified before returning.
pub fn beta_gamma_analog<R: Rng>(rng: &mut R) -> Result<ColoredPointSet, GenerateError> {
    let base = beta_gamma_example();
    let bg = BetaGamma::new(vec![2, 2], vec![2, 2]);
    let median = AlphaVector::new(vec![2, 2]);
    for _ in 0..ATTEMPT_BUDGET {
        let a = [
            [small_rat(rng, 6, 1, 2), small_rat(rng, 6, 1, 2)],
            [small_rat(rng, 6, 1, 2), small_rat(rng, 6, 1, 2)],
        ];
        let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
        if det == rat_i(0) {
            continue;
        }
        let b = [small_rat(rng, 10, 1, 2), small_rat(rng, 10, 1, 2)];
        let classes: Vec<Vec<Point>> = base
            .classes()
            .iter()
            .map(|class| {
                class
                    .iter()
                    .map(|p| {
                        let x = &a[0][0] * &p.coords[0] + &a[0][1] * &p.coords[1] + &b[0];
                        let y = &a[1][0] * &p.coords[0] + &a[1][1] * &p.coords[1] + &b[1];
                        Point::new(vec![x, y])
                    })
                    .collect()
            })
            .collect();
        let Ok(p) = ColoredPointSet::new(2, classes) else {
            continue;
        };
        if !check_weak_general_position(&p).satisfied || check_well_separated(&p).satisfied {
            continue;
        }
        if !check_beta_gamma(&p, &bg)
            .expect("thresholds are valid")
            .satisfied
        {
            continue;
        }
        if find_alpha_cut(&p, &median, PreconditionPolicy::Assert).is_err() {
            continue;
        }
        return Ok(p);
    }
    Err(GenerateError::GenerationBudgetExceeded(
        "affine analogs of the biased-separation fixture".into(),
    ))
}

/// A rainbow well-separated bicolored line arrangement: red slopes in
/// [-1/2, 1/2], blue slopes in [2, 6], so every colorful pair crosses
/// and a vertical-ish direction separates the classes. Slopes are
/// distinct within each class, every colorful crossing is distinct, and
/// no third line passes through any of them.
pub fn rainbow_ws_lines_2d<R: Rng>(
    sizes: &[usize],
    rng: &mut R,
) -> Result<ColoredLineArrangement, GenerateError> {
    check_sizes(2, sizes)?;
    'attempt: for _ in 0..ATTEMPT_BUDGET {
        let mut classes: Vec<Vec<Hyperplane>> = Vec::with_capacity(2);
        for class in 0..2 {
            let mut slopes: Vec<Rational> = Vec::new();
            let mut lines = Vec::with_capacity(sizes[class]);
            for _ in 0..sizes[class] {
                let s = if class == 0 {
                    rat(rng.random_range(-4i64..=4), 8)
                } else {
                    rat(rng.random_range(16i64..=48), 8)
                };
                if slopes.contains(&s) {
                    continue 'attempt;
                }
                slopes.push(s.clone());
                let intercept = small_rat(rng, 20, 1, 3);
                let line = Hyperplane::new(vec![-s, rat_i(1)], intercept)
                    .expect("nonzero normal");
                lines.push(line);
            }
            classes.push(lines);
        }
        let Ok(arr) = ColoredLineArrangement::new(2, classes) else {
            continue;
        };
        let report = crate::arrangement::verify_rainbow_ws(&arr);
        if !report.rainbow || !report.well_separated {
            continue;
        }
        // Every colorful crossing must be a distinct point met by
        // exactly its own two lines, so level machinery and the
        // crossing count argument stay exact.
        let mut points: Vec<Point> = Vec::new();
        for i in 0..sizes[0] {
            for j in 0..sizes[1] {
                let Some(p) = arr.colorful_intersection(&[i, j]) else {
                    continue 'attempt;
                };
                if points.contains(&p) {
                    continue 'attempt;
                }
                let incident = arr
                    .classes()
                    .iter()
                    .flatten()
                    .filter(|h| h.side(&p) == Sign::On)
                    .count();
                if incident != 2 {
                    continue 'attempt;
                }
                points.push(p);
            }
        }
        return Ok(arr);
    }
    Err(GenerateError::GenerationBudgetExceeded(format!(
        "rainbow arrangement sampling at sizes {sizes:?}"
    )))
}

/// A random allowable sequence: the identity permutation followed by
/// `steps` random adjacent swaps. Such walks need not come from any
/// line arrangement.
pub fn allowable_walk<R: Rng>(
    n: usize,
    steps: usize,
    rng: &mut R,
) -> Result<AllowableSequence, GenerateError> {
    if n == 0 || n > 12 {
        return Err(GenerateError::InvalidParams(format!(
            "ground set size must lie in 1..=12, got {n}"
        )));
    }
    if n == 1 && steps > 0 {
        return Err(GenerateError::InvalidParams(
            "a single item admits no adjacent swaps".into(),
        ));
    }
    let mut current: Vec<usize> = (0..n).collect();
    let mut perms = vec![current.clone()];
    for _ in 0..steps {
        let at = rng.random_range(0..n - 1);
        current.swap(at, at + 1);
        perms.push(current.clone());
    }
    Ok(AllowableSequence::new(perms).expect("swap walks are allowable"))
}

/// A single-colored straight arrangement with pairwise distinct slopes
/// whose sweep is maximally generic: no two crossings share an abscissa,
/// so every order of the swap-by-swap record is attained on a vertical
/// line. Returns the arrangement and its full sweep sequence.
pub fn generic_lines<R: Rng>(
    n: usize,
    rng: &mut R,
) -> Result<(LineArrangement2D, AllowableSequence), GenerateError> {
    if n == 0 || n > 8 {
        return Err(GenerateError::InvalidParams(format!(
            "line count must lie in 1..=8, got {n}"
        )));
    }
    'attempt: for _ in 0..ATTEMPT_BUDGET {
        let mut slopes: Vec<Rational> = Vec::new();
        let mut lines = Vec::with_capacity(n);
        for _ in 0..n {
            let s = small_rat(rng, 9, 1, 3);
            if slopes.contains(&s) {
                continue 'attempt;
            }
            slopes.push(s.clone());
            let intercept = small_rat(rng, 12, 1, 4);
            lines.push(Hyperplane::new(vec![-s, rat_i(1)], intercept).expect("nonzero normal"));
        }
        let Ok(arr) = LineArrangement2D::new(lines, Vec::new()) else {
            continue;
        };
        let Ok(intervals) = sweep_intervals(arr.reds()) else {
            continue;
        };
        if intervals.orders.len() != n * (n - 1) / 2 + 1 {
            continue;
        }
        let seq = sweep_sequence(&arr, Color::Red).expect("intervals already swept");
        return Ok((arr, seq));
    }
    Err(GenerateError::GenerationBudgetExceeded(format!(
        "generic arrangement sampling at n={n}"
    )))
}
