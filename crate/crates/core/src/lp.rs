//! Exact linear feasibility over the rationals.
//!
//! A single entry point, `feasible_point`, decides whether a system of
//! linear constraints on free rational variables has a solution and
//! returns one if so. It runs phase one of the simplex method with
//! Bland's rule, so it terminates on every input and never approximates.
//! Strict inequalities are handled by callers through margin
//! normalization: a desired `a . x > b` is scale-invariant in `x`, so it
//! is feasible exactly when `a . x >= b + 1` is.

use crate::geometry::{Hyperplane, Point};
use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> Constraint {
        Constraint { coeffs, rel, rhs }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let mut lhs = Rational::zero();
        for (a, v) in self.coeffs.iter().zip(x) {
            lhs += a * v;
        }
        match self.rel {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// Returns a solution of the constraint system over `n_vars` free
/// variables, or `None` when the system is infeasible.
pub fn feasible_point(n_vars: usize, constraints: &[Constraint]) -> Option<Vec<Rational>> {
    let m = constraints.len();
    let n_slack = constraints
        .iter()
        .filter(|c| c.rel != Relation::Eq)
        .count();
    // Columns: u_0..u_n | v_0..v_n (free x_j = u_j - v_j) | slacks | artificials.
    let slack_base = 2 * n_vars;
    let art_base = slack_base + n_slack;

    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut n_art = 0;
    let mut slack_idx = 0;

    for c in constraints {
        assert_eq!(c.coeffs.len(), n_vars, "constraint arity mismatch");
        let mut row = vec![Rational::zero(); art_base];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[n_vars + j] = -a;
        }
        let mut b = c.rhs.clone();
        let mut slack_col = None;
        match c.rel {
            Relation::Le => {
                row[slack_base + slack_idx] = Rational::one();
                slack_col = Some(slack_base + slack_idx);
                slack_idx += 1;
            }
            Relation::Ge => {
                row[slack_base + slack_idx] = -Rational::one();
                slack_col = Some(slack_base + slack_idx);
                slack_idx += 1;
            }
            Relation::Eq => {}
        }
        if b.is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
            b = -b;
        }
        // A slack column that ended up +1 can start in the basis; anything
        // else needs an artificial variable.
        let basic = match slack_col {
            Some(col) if row[col].is_one() => col,
            _ => {
                n_art += 1;
                art_base + n_art - 1
            }
        };
        basis.push(basic);
        rows.push(row);
        rhs.push(b);
    }

    let n_total = art_base + n_art;
    for (i, row) in rows.iter_mut().enumerate() {
        row.resize(n_total, Rational::zero());
        if basis[i] >= art_base {
            row[basis[i]] = Rational::one();
        }
    }

    // Phase-one objective: minimize the artificial sum. The cost row holds
    // reduced costs after pricing out the initial basis; `obj` holds the
    // negated objective value.
    let mut cost = vec![Rational::zero(); n_total];
    for j in art_base..n_total {
        cost[j] = Rational::one();
    }
    let mut obj = Rational::zero();
    for i in 0..m {
        if basis[i] >= art_base {
            for j in 0..n_total {
                let delta = rows[i][j].clone();
                cost[j] -= delta;
            }
            obj -= &rhs[i];
        }
    }

    loop {
        // Bland: entering column is the lowest index with negative reduced
        // cost; leaving row breaks ratio ties by lowest basic index.
        let Some(enter) = (0..n_total).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !rows[i][enter].is_positive() {
                continue;
            }
            let better = match leave {
                None => true,
                Some(l) => {
                    let cur = &rhs[i] / &rows[i][enter];
                    let best = &rhs[l] / &rows[l][enter];
                    cur < best || (cur == best && basis[i] < basis[l])
                }
            };
            if better {
                leave = Some(i);
            }
        }
        let leave = leave.expect("phase-one objective is bounded below");
        let pivot = rows[leave][enter].clone();
        for x in rows[leave].iter_mut() {
            *x = &*x / &pivot;
        }
        rhs[leave] = &rhs[leave] / &pivot;
        for i in 0..m {
            if i == leave || rows[i][enter].is_zero() {
                continue;
            }
            let factor = rows[i][enter].clone();
            for j in 0..n_total {
                let sub = &factor * &rows[leave][j];
                rows[i][j] -= sub;
            }
            rhs[i] = &rhs[i] - &factor * &rhs[leave];
        }
        if !cost[enter].is_zero() {
            let factor = cost[enter].clone();
            for j in 0..n_total {
                let sub = &factor * &rows[leave][j];
                cost[j] -= sub;
            }
            obj -= &factor * &rhs[leave];
        }
        basis[leave] = enter;
    }

    if !obj.is_zero() {
        return None;
    }
    let mut values = vec![Rational::zero(); n_total];
    for i in 0..m {
        values[basis[i]] = rhs[i].clone();
    }
    let x: Vec<Rational> = (0..n_vars)
        .map(|j| &values[j] - &values[n_vars + j])
        .collect();
    debug_assert!(
        constraints.iter().all(|c| c.holds(&x)),
        "simplex returned a non-solution"
    );
    Some(x)
}

/// Finds an oriented hyperplane with every point of `above` strictly on
/// its positive side and every point of `below` strictly on its negative
/// side, or `None` when no such hyperplane exists. Both sets must be
/// nonempty so the ambient dimension is determined.
pub fn strict_separation(above: &[Point], below: &[Point]) -> Option<Hyperplane> {
    let d = above
        .first()
        .or_else(|| below.first())
        .expect("strict_separation needs at least one point")
        .dim();
    // Variables w_1..w_d, c. Strictness via a unit margin: scaling (w, c)
    // makes any strict separator clear margin 1.
    let mut constraints = Vec::with_capacity(above.len() + below.len());
    for p in above {
        assert_eq!(p.dim(), d, "mixed dimensions");
        let mut coeffs: Vec<Rational> = p.coords.clone();
        coeffs.push(-Rational::one());
        constraints.push(Constraint::new(coeffs, Relation::Ge, Rational::one()));
    }
    for p in below {
        assert_eq!(p.dim(), d, "mixed dimensions");
        let mut coeffs: Vec<Rational> = p.coords.clone();
        coeffs.push(-Rational::one());
        constraints.push(Constraint::new(coeffs, Relation::Le, -Rational::one()));
    }
    let x = feasible_point(d + 1, &constraints)?;
    let (w, c) = x.split_at(d);
    Some(
        Hyperplane::new(w.to_vec(), c[0].clone())
            .expect("margin constraints force a nonzero normal"),
    )
}

/// Exact membership of `q` in the convex hull of `points`: feasibility
/// of nonnegative weights summing to one that average to `q`.
pub fn in_convex_hull(q: &Point, points: &[Point]) -> bool {
    let d = q.dim();
    let n = points.len();
    if n == 0 {
        return false;
    }
    let mut constraints = Vec::with_capacity(n + d + 1);
    for k in 0..n {
        let mut coeffs = vec![Rational::zero(); n];
        coeffs[k] = Rational::one();
        constraints.push(Constraint::new(coeffs, Relation::Ge, Rational::zero()));
    }
    constraints.push(Constraint::new(
        vec![Rational::one(); n],
        Relation::Eq,
        Rational::one(),
    ));
    for j in 0..d {
        let coeffs: Vec<Rational> = points.iter().map(|p| p.coords[j].clone()).collect();
        constraints.push(Constraint::new(coeffs, Relation::Eq, q.coords[j].clone()));
    }
    feasible_point(n, &constraints).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{point_i, Sign};
    use crate::rational::{rat, rat_i};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn ge(coeffs: &[i64], rhs: i64) -> Constraint {
        Constraint::new(coeffs.iter().map(|&c| rat_i(c)).collect(), Relation::Ge, rat_i(rhs))
    }

    fn le(coeffs: &[i64], rhs: i64) -> Constraint {
        Constraint::new(coeffs.iter().map(|&c| rat_i(c)).collect(), Relation::Le, rat_i(rhs))
    }

    fn eq(coeffs: &[i64], rhs: i64) -> Constraint {
        Constraint::new(coeffs.iter().map(|&c| rat_i(c)).collect(), Relation::Eq, rat_i(rhs))
    }

    #[test]
    fn interval_is_feasible() {
        let x = feasible_point(1, &[ge(&[1], 1), le(&[1], 3)]).unwrap();
        assert!(rat_i(1) <= x[0] && x[0] <= rat_i(3));
    }

    #[test]
    fn empty_interval_is_infeasible() {
        assert!(feasible_point(1, &[ge(&[1], 1), le(&[1], 0)]).is_none());
    }

    #[test]
    fn equalities_pin_the_solution() {
        let x = feasible_point(2, &[eq(&[1, 1], 2), eq(&[1, -1], 0)]).unwrap();
        assert_eq!(x, vec![rat_i(1), rat_i(1)]);
    }

    #[test]
    fn free_variables_go_negative() {
        let x = feasible_point(1, &[le(&[1], -5)]).unwrap();
        assert!(x[0] <= rat_i(-5));
    }

    #[test]
    fn degenerate_system_resolves_to_zero() {
        let x = feasible_point(1, &[ge(&[1], 0), ge(&[1], 0), le(&[1], 0)]).unwrap();
        assert_eq!(x[0], rat_i(0));
    }

    #[test]
    fn inconsistent_equalities_are_infeasible() {
        assert!(feasible_point(2, &[eq(&[1, 1], 1), eq(&[2, 2], 3)]).is_none());
    }

    #[test]
    fn no_constraints_is_trivially_feasible() {
        assert_eq!(feasible_point(2, &[]).unwrap(), vec![rat_i(0), rat_i(0)]);
    }

    #[test]
    fn rational_coefficients_are_exact() {
        // x/3 >= 1/7 and x/3 <= 1/7 pin x = 3/7.
        let c = |rel| {
            Constraint::new(vec![rat(1, 3)], rel, rat(1, 7))
        };
        let x = feasible_point(1, &[c(Relation::Ge), c(Relation::Le)]).unwrap();
        assert_eq!(x[0], rat(3, 7));
    }

    #[test]
    fn separates_two_clusters() {
        let above = [point_i(&[0, 0]), point_i(&[1, 1])];
        let below = [point_i(&[5, 5]), point_i(&[6, 4])];
        let h = strict_separation(&above, &below).unwrap();
        for p in &above {
            assert_eq!(h.side(p), Sign::Above);
        }
        for p in &below {
            assert_eq!(h.side(p), Sign::Below);
        }
    }

    #[test]
    fn rejects_point_between_collinear_pair() {
        let above = [point_i(&[0, 0]), point_i(&[2, 2])];
        let below = [point_i(&[1, 1])];
        assert!(strict_separation(&above, &below).is_none());
    }

    #[test]
    fn rejects_shared_point() {
        let above = [point_i(&[3, -1, 2]), point_i(&[0, 0, 0])];
        let below = [point_i(&[0, 0, 0]), point_i(&[1, 1, 1])];
        assert!(strict_separation(&above, &below).is_none());
    }

    #[test]
    fn convex_hull_membership() {
        let tri = [point_i(&[0, 0]), point_i(&[4, 0]), point_i(&[0, 4])];
        assert!(in_convex_hull(&point_i(&[1, 1]), &tri));
        assert!(in_convex_hull(&point_i(&[0, 0]), &tri));
        assert!(in_convex_hull(&point_i(&[2, 2]), &tri));
        assert!(!in_convex_hull(&point_i(&[3, 3]), &tri));
        assert!(!in_convex_hull(&point_i(&[-1, 0]), &tri));
        // A segment traps only its own points.
        let seg = [point_i(&[0, 0]), point_i(&[0, 2])];
        assert!(in_convex_hull(&point_i(&[0, 1]), &seg));
        assert!(!in_convex_hull(&point_i(&[5, 0]), &seg));
    }

    #[test]
    fn separates_random_planted_instances() {
        let mut rng = StdRng::seed_from_u64(41);
        for d in 1..=4usize {
            for _ in 0..25 {
                // Plant a separator, then sample strictly on each side.
                let w: Vec<Rational> = (0..d).map(|_| rat_i(rng.random_range(-4..=4))).collect();
                if w.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let c = rat_i(rng.random_range(-5..=5));
                let h = Hyperplane::new(w, c).unwrap();
                let mut above = Vec::new();
                let mut below = Vec::new();
                for _ in 0..12 {
                    let p = Point::new(
                        (0..d)
                            .map(|_| rat(rng.random_range(-40..=40), rng.random_range(1..=5)))
                            .collect(),
                    );
                    match h.side(&p) {
                        Sign::Above => above.push(p),
                        Sign::Below => below.push(p),
                        Sign::On => {}
                    }
                }
                if above.is_empty() || below.is_empty() {
                    continue;
                }
                let found = strict_separation(&above, &below).unwrap();
                for p in &above {
                    assert_eq!(found.side(p), Sign::Above);
                }
                for p in &below {
                    assert_eq!(found.side(p), Sign::Below);
                }
            }
        }
    }
}
