//! A Poincare-Miranda subdivision solver with exact sign certificates.
//!
//! The problem is a box and one continuous function per axis, with the
//! boundary contract that function `i` is non-positive on the box face
//! where axis `i` is lowest and non-negative on the opposite face. The
//! solver verifies the contract exactly, then bisects: a sub-box is
//! discarded only when some function has a strict constant sign over it,
//! a certificate computed exactly from the function's structure, so a
//! box containing a root is never discarded. The search is breadth
//! first with a deterministic queue.

use crate::arrangement::ColoredLineArrangement;
use crate::cut::AlphaVector;
use crate::geometry::{Point, Sign};
use crate::level::{k_level, LevelPolyline, SignedDistance};
use crate::rational::{rat_i, Rational};
use num_traits::Signed;
use std::collections::VecDeque;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MirandaError {
    MalformedProblem(String),
    /// The boundary sign contract fails on the stated face.
    ContractViolated { axis: usize, high: bool },
    /// Every sub-box was excluded; with a verified contract this never
    /// happens, so it signals an internal certificate gap.
    NoRoot,
    BudgetExhausted { pops: usize },
}

impl fmt::Display for MirandaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MirandaError::MalformedProblem(msg) => write!(f, "malformed problem: {msg}"),
            MirandaError::ContractViolated { axis, high } => {
                let side = if *high { "high" } else { "low" };
                write!(f, "sign contract fails on the {side} face of axis {axis}")
            }
            MirandaError::NoRoot => write!(f, "all sub-boxes were excluded"),
            MirandaError::BudgetExhausted { pops } => {
                write!(f, "no point within tolerance after {pops} boxes")
            }
        }
    }
}

impl std::error::Error for MirandaError {}

/// A continuous evaluator with exact sign and magnitude at rational
/// points and exact strict-sign certificates over boxes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MirandaFunction {
    /// `f(x) = coeffs . x - offset`.
    Linear { coeffs: Vec<Rational>, offset: Rational },
    /// The signed Euclidean distance to a level polyline (planar only),
    /// optionally negated.
    LevelDistance { level: LevelPolyline, negate: bool },
}

/// Exact min and max of the polyline height over `[x0, x1]`, attained
/// at the ends or at interior breakpoints.
fn level_height_range(level: &LevelPolyline, x0: &Rational, x1: &Rational) -> (Rational, Rational) {
    let mut lo = level.eval_y(x0);
    let mut hi = lo.clone();
    let mut take = |y: Rational| {
        if y < lo {
            lo = y;
        } else if y > hi {
            hi = y;
        }
    };
    take(level.eval_y(x1));
    for bp in level.breakpoints() {
        if &bp.coords[0] > x0 && &bp.coords[0] < x1 {
            take(bp.coords[1].clone());
        }
    }
    (lo, hi)
}

impl MirandaFunction {
    pub fn eval(&self, p: &Point) -> SignedDistance {
        match self {
            MirandaFunction::Linear { coeffs, offset } => {
                assert_eq!(coeffs.len(), p.dim(), "arity mismatch");
                let mut v = -offset.clone();
                for (c, x) in coeffs.iter().zip(&p.coords) {
                    v += c * x;
                }
                SignedDistance {
                    sign: Sign::of(&v),
                    dist_sq: &v * &v,
                }
            }
            MirandaFunction::LevelDistance { level, negate } => {
                let mut d = level.signed_distance(p);
                if *negate {
                    d.sign = d.sign.flip();
                }
                d
            }
        }
    }

    /// Exact range of the function's sign-carrying value over the box:
    /// for linear functions the value itself, for level distances the
    /// vertical gap to the polyline (same sign, different magnitude).
    fn value_range(&self, bounds: &[(Rational, Rational)]) -> (Rational, Rational) {
        match self {
            MirandaFunction::Linear { coeffs, offset } => {
                let mut lo = -offset.clone();
                let mut hi = lo.clone();
                for (c, (a, b)) in coeffs.iter().zip(bounds) {
                    let (ca, cb) = (c * a, c * b);
                    if ca <= cb {
                        lo += ca;
                        hi += cb;
                    } else {
                        lo += cb;
                        hi += ca;
                    }
                }
                (lo, hi)
            }
            MirandaFunction::LevelDistance { level, negate } => {
                let (x0, x1) = (&bounds[0].0, &bounds[0].1);
                let (y0, y1) = (&bounds[1].0, &bounds[1].1);
                let (min_h, max_h) = level_height_range(level, x0, x1);
                // Gap extremes: lowest box point versus highest polyline
                // point and vice versa.
                let (lo, hi) = (y0 - max_h, y1 - min_h);
                if *negate {
                    (-hi, -lo)
                } else {
                    (lo, hi)
                }
            }
        }
    }

    /// `Some(Above)` when strictly positive over the whole box,
    /// `Some(Below)` when strictly negative, `None` otherwise.
    pub fn strict_sign_over(&self, bounds: &[(Rational, Rational)]) -> Option<Sign> {
        let (lo, hi) = self.value_range(bounds);
        if lo.is_positive() {
            Some(Sign::Above)
        } else if hi.is_negative() {
            Some(Sign::Below)
        } else {
            None
        }
    }

    pub fn nonpositive_over(&self, bounds: &[(Rational, Rational)]) -> bool {
        !self.value_range(bounds).1.is_positive()
    }

    pub fn nonnegative_over(&self, bounds: &[(Rational, Rational)]) -> bool {
        !self.value_range(bounds).0.is_negative()
    }
}

/// A box and one function per axis, under the Miranda boundary
/// contract.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirandaProblem {
    pub bounds: Vec<(Rational, Rational)>,
    pub functions: Vec<MirandaFunction>,
}

impl MirandaProblem {
    fn validate(&self) -> Result<(), MirandaError> {
        let d = self.bounds.len();
        if d == 0 {
            return Err(MirandaError::MalformedProblem("empty box".into()));
        }
        if self.functions.len() != d {
            return Err(MirandaError::MalformedProblem(format!(
                "{} functions for {} axes",
                self.functions.len(),
                d
            )));
        }
        for (i, (lo, hi)) in self.bounds.iter().enumerate() {
            if lo >= hi {
                return Err(MirandaError::MalformedProblem(format!(
                    "axis {i} bounds are not increasing"
                )));
            }
        }
        for (i, f) in self.functions.iter().enumerate() {
            match f {
                MirandaFunction::Linear { coeffs, .. } if coeffs.len() != d => {
                    return Err(MirandaError::MalformedProblem(format!(
                        "function {i} has arity {}, expected {d}",
                        coeffs.len()
                    )));
                }
                MirandaFunction::LevelDistance { .. } if d != 2 => {
                    return Err(MirandaError::MalformedProblem(format!(
                        "function {i} is a level distance but the box is not planar"
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Checks the boundary sign contract exactly on all 2d faces.
    pub fn check_contract(&self) -> Result<(), MirandaError> {
        self.validate()?;
        for (i, f) in self.functions.iter().enumerate() {
            let mut face = self.bounds.clone();
            face[i] = (self.bounds[i].0.clone(), self.bounds[i].0.clone());
            if !f.nonpositive_over(&face) {
                return Err(MirandaError::ContractViolated { axis: i, high: false });
            }
            face[i] = (self.bounds[i].1.clone(), self.bounds[i].1.clone());
            if !f.nonnegative_over(&face) {
                return Err(MirandaError::ContractViolated { axis: i, high: true });
            }
        }
        Ok(())
    }
}

pub const DEFAULT_POP_BUDGET: usize = 200_000;

/// The default tolerance, meant for problems pre-scaled so candidate
/// points are order-one apart.
pub fn default_tolerance() -> Rational {
    Rational::new(1.into(), 1_000_000_000.into())
}

pub fn miranda_solve(mp: &MirandaProblem, tol: &Rational) -> Result<Point, MirandaError> {
    miranda_solve_with_budget(mp, tol, DEFAULT_POP_BUDGET)
}

/// Verifies the contract, then bisects breadth-first: drop a sub-box
/// only on a strict constant-sign certificate, answer the first center
/// where every function is within `tol`, and split the longest axis
/// otherwise.
pub fn miranda_solve_with_budget(
    mp: &MirandaProblem,
    tol: &Rational,
    budget: usize,
) -> Result<Point, MirandaError> {
    if !tol.is_positive() {
        return Err(MirandaError::MalformedProblem(
            "tolerance must be positive".into(),
        ));
    }
    mp.check_contract()?;
    let half = |a: &Rational, b: &Rational| (a + b) / rat_i(2);
    let mut queue: VecDeque<Vec<(Rational, Rational)>> = VecDeque::new();
    queue.push_back(mp.bounds.clone());
    let mut pops = 0;
    while let Some(bounds) = queue.pop_front() {
        pops += 1;
        if pops > budget {
            return Err(MirandaError::BudgetExhausted { pops: pops - 1 });
        }
        if mp
            .functions
            .iter()
            .any(|f| f.strict_sign_over(&bounds).is_some())
        {
            continue;
        }
        let center = Point::new(bounds.iter().map(|(a, b)| half(a, b)).collect());
        if mp.functions.iter().all(|f| f.eval(&center).within(tol)) {
            return Ok(center);
        }
        let split = (0..bounds.len())
            .max_by(|&i, &j| {
                let wi = &bounds[i].1 - &bounds[i].0;
                let wj = &bounds[j].1 - &bounds[j].0;
                // Prefer the lowest index on ties.
                wi.cmp(&wj).then(j.cmp(&i))
            })
            .expect("nonempty box");
        let mid = half(&bounds[split].0, &bounds[split].1);
        let mut low = bounds.clone();
        low[split].1 = mid.clone();
        let mut high = bounds;
        high[split].0 = mid;
        queue.push_back(low);
        queue.push_back(high);
    }
    Err(MirandaError::NoRoot)
}

/// Builds the Miranda problem whose root is x_alpha of a normalized
/// two-class planar arrangement: one level-distance function per class,
/// a box grown from the colorful crossings until the sign contract
/// holds, trying both axis assignments and both negations per function.
pub fn problem_for_arrangement(
    a: &ColoredLineArrangement,
    alpha: &AlphaVector,
) -> Result<MirandaProblem, MirandaError> {
    if a.dimension() != 2 || a.classes().len() != 2 {
        return Err(MirandaError::MalformedProblem(
            "level distances need a two-class planar arrangement".into(),
        ));
    }
    alpha
        .check_range(&a.class_sizes())
        .map_err(MirandaError::MalformedProblem)?;
    let levels: Vec<LevelPolyline> = (0..2)
        .map(|i| {
            k_level(a.class(i), alpha.alpha[i])
                .map_err(|e| MirandaError::MalformedProblem(e.to_string()))
        })
        .collect::<Result<_, _>>()?;

    let mut corners: Vec<Point> = Vec::new();
    for i in 0..a.class(0).len() {
        for j in 0..a.class(1).len() {
            if let Some(p) = a.colorful_intersection(&[i, j]) {
                corners.push(p);
            }
        }
    }
    if corners.is_empty() {
        return Err(MirandaError::MalformedProblem(
            "no colorful crossings to enclose".into(),
        ));
    }
    let coord = |k: usize| corners.iter().map(move |p| p.coords[k].clone());
    let (min_x, max_x) = (coord(0).min().expect("nonempty"), coord(0).max().expect("nonempty"));
    let (min_y, max_y) = (coord(1).min().expect("nonempty"), coord(1).max().expect("nonempty"));

    let mut pad = &max_x - &min_x + (&max_y - &min_y) + rat_i(1);
    for _ in 0..60 {
        let bounds = vec![
            (&min_x - &pad, &max_x + &pad),
            (&min_y - &pad, &max_y + &pad),
        ];
        for assignment in [[0usize, 1], [1, 0]] {
            for negate0 in [false, true] {
                for negate1 in [false, true] {
                    let mp = MirandaProblem {
                        bounds: bounds.clone(),
                        functions: vec![
                            MirandaFunction::LevelDistance {
                                level: levels[assignment[0]].clone(),
                                negate: negate0,
                            },
                            MirandaFunction::LevelDistance {
                                level: levels[assignment[1]].clone(),
                                negate: negate1,
                            },
                        ],
                    };
                    if mp.check_contract().is_ok() {
                        return Ok(mp);
                    }
                }
            }
        }
        pad = &pad * rat_i(2);
    }
    Err(MirandaError::MalformedProblem(
        "no box and sign assignment satisfies the contract".into(),
    ))
}
