//! Exact two-phase simplex for standard-form programs
//! `optimize c·x subject to A x = b, x >= 0`.
//!
//! Bland's rule is used for both entering and leaving variables in every
//! iteration, so the method terminates on degenerate problems. Every optimal
//! answer is checked against the original constraints before it is returned.

use log::trace;

use super::matrix::{LinearSystem, RationalMatrix};
use crate::rational::Rational;
use crate::support::SupportVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub system: LinearSystem,
    pub objective: Vec<Rational>,
    pub sense: Sense,
}

impl LpProblem {
    pub fn new(system: LinearSystem, objective: Vec<Rational>, sense: Sense) -> Self {
        assert_eq!(
            objective.len(),
            system.num_cols(),
            "objective length must match column count"
        );
        LpProblem {
            system,
            objective,
            sense,
        }
    }

    pub fn feasibility(system: LinearSystem) -> Self {
        let n = system.num_cols();
        Self::new(system, vec![Rational::ZERO; n], Sense::Minimize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Optimal {
        value: Rational,
        solution: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn status(&self) -> LpStatus {
        match self {
            LpResult::Optimal { .. } => LpStatus::Optimal,
            LpResult::Infeasible => LpStatus::Infeasible,
            LpResult::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn solution(&self) -> Option<&[Rational]> {
        match self {
            LpResult::Optimal { solution, .. } => Some(solution),
            _ => None,
        }
    }
}

struct Tableau {
    /// Constraint rows; the last entry of every row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced costs, with `-objective` in the last slot.
    cost: Vec<Rational>,
    basis: Vec<usize>,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        self.rows[r].last().expect("nonempty row")
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let width = self.rows[pr].len();
        let inv = self.rows[pr][pc].recip();
        if !inv.is_one() {
            for v in self.rows[pr].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[pr]);
        let nz: Vec<usize> = (0..width).filter(|&j| !pivot_row[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[pc].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                let d = &f * &pivot_row[j];
                row[j] -= &d;
            }
        };
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r != pr {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.rows[pr] = pivot_row;
        self.basis[pr] = pc;
    }

    /// Minimizes over columns `< allowed`, Bland's rule throughout.
    fn run(&mut self, allowed: usize) -> Phase {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return Phase::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((lr, _)) = leave else {
                return Phase::Unbounded;
            };
            trace!(
                "pivot: column {enter} enters, row {lr} (basic {}) leaves",
                self.basis[lr]
            );
            self.pivot(lr, enter);
            if log::log_enabled!(log::Level::Trace) {
                for (r, row) in self.rows.iter().enumerate() {
                    let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                    trace!("  x{} | {}", self.basis[r], cells.join(" "));
                }
                let cells: Vec<String> = self.cost.iter().map(ToString::to_string).collect();
                trace!("  z  | {}", cells.join(" "));
            }
        }
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        let width = self.cost.len();
        let mut cost = vec![Rational::ZERO; width];
        for (j, c) in costs.iter().enumerate() {
            cost[j] = c.clone();
        }
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..width {
                let v = &self.rows[r][j];
                if !v.is_zero() {
                    let d = &cb * v;
                    cost[j] -= &d;
                }
            }
        }
        self.cost = cost;
    }
}

/// Solves a standard-form linear program exactly.
pub fn lp_solve(problem: &LpProblem) -> LpResult {
    let sys = &problem.system;
    let n = sys.num_cols();

    // Remove redundant equations and detect inconsistency up front.
    let red = sys.augmented_rref();
    if !red.is_consistent_augmented() {
        return LpResult::Infeasible;
    }
    let m = red.rank;
    let mut rows: Vec<Vec<Rational>> = (0..m).map(|r| red.matrix.row(r).to_vec()).collect();

    // Rows with a nonnegative right-hand side start with their rref pivot as
    // the basic column; the others get an artificial.
    let mut basis = vec![usize::MAX; m];
    let mut artificial_rows = Vec::new();
    for r in 0..m {
        if rows[r][n].is_negative() {
            for v in rows[r].iter_mut() {
                *v = -&*v;
            }
            artificial_rows.push(r);
        } else {
            basis[r] = red.pivots[r];
        }
    }
    let k = artificial_rows.len();
    for row in rows.iter_mut() {
        let rhs = row.pop().expect("augmented column");
        row.extend(std::iter::repeat_n(Rational::ZERO, k));
        row.push(rhs);
    }
    for (a, &r) in artificial_rows.iter().enumerate() {
        rows[r][n + a] = Rational::ONE;
        basis[r] = n + a;
    }

    let mut tab = Tableau {
        rows,
        cost: vec![Rational::ZERO; n + k + 1],
        basis,
    };

    if k > 0 {
        let mut phase1 = vec![Rational::ZERO; n + k];
        for c in phase1.iter_mut().skip(n) {
            *c = Rational::ONE;
        }
        tab.set_costs(&phase1);
        match tab.run(n + k) {
            Phase::Optimal => {}
            Phase::Unbounded => unreachable!("phase one is bounded below by zero"),
        }
        if !tab.cost[n + k].is_zero() {
            return LpResult::Infeasible;
        }
        // Drive remaining (zero-level) artificials out of the basis.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= n {
                match (0..n).find(|&j| !tab.rows[r][j].is_zero()) {
                    Some(j) => tab.pivot(r, j),
                    None => {
                        tab.rows.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let costs: Vec<Rational> = match problem.sense {
        Sense::Minimize => problem.objective.clone(),
        Sense::Maximize => problem.objective.iter().map(|c| -c).collect(),
    };
    tab.set_costs(&costs);
    if let Phase::Unbounded = tab.run(n) {
        return LpResult::Unbounded;
    }

    let mut solution = vec![Rational::ZERO; n];
    for (r, &b) in tab.basis.iter().enumerate() {
        debug_assert!(b < n);
        solution[b] = tab.rhs(r).clone();
    }
    let value: Rational = problem
        .objective
        .iter()
        .zip(&solution)
        .filter(|(c, x)| !c.is_zero() && !x.is_zero())
        .map(|(c, x)| c * x)
        .sum();
    assert!(
        sys.is_satisfied_by(&solution) && solution.iter().all(|x| !x.is_negative()),
        "simplex produced a point violating its constraints"
    );
    let reported = match problem.sense {
        Sense::Minimize => -&tab.cost[n + k],
        Sense::Maximize => tab.cost[n + k].clone(),
    };
    assert_eq!(reported, value, "tableau objective disagrees with c·x");
    LpResult::Optimal { value, solution }
}

/// Outcome of [`max_min_coordinate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaxMin {
    Infeasible,
    Optimal {
        /// Largest `t` such that some feasible `x` has `x_i >= t` on the support.
        t: Rational,
        point: Vec<Rational>,
    },
}

impl MaxMin {
    pub fn is_positive(&self) -> bool {
        matches!(self, MaxMin::Optimal { t, .. } if t.is_positive())
    }
}

/// Maximizes `t` subject to `A x = b`, `x_i = 0` off `support`,
/// `x_i >= t` on `support`, and `0 <= t <= 1`.
///
/// `t* > 0` iff some point of the polytope has support exactly `support`.
/// For an empty support the minimum is vacuous and `t* = 1` whenever the
/// zero vector is feasible.
pub fn max_min_coordinate(system: &LinearSystem, support: &SupportVector) -> MaxMin {
    max_min_with_free(system, support, &SupportVector::empty(support.len()))
}

/// As [`max_min_coordinate`], except that the columns in `free` may take any
/// nonnegative value instead of being fixed at zero.
pub fn max_min_with_free(
    system: &LinearSystem,
    support: &SupportVector,
    free: &SupportVector,
) -> MaxMin {
    assert_eq!(support.len(), system.num_cols());
    assert_eq!(free.len(), system.num_cols());
    let cols = support.indices();
    let extra: Vec<usize> = free.iter().filter(|&i| !support.contains(i)).collect();
    let s = cols.len();
    let e = extra.len();
    let rows = system.num_rows();
    // variables: t, y_1..y_s, free columns, slack; x_i = t + y_i on the support
    let width = s + e + 2;
    let mut a = Vec::with_capacity(rows + 1);
    for r in 0..rows {
        let mut row = vec![Rational::ZERO; width];
        let mut tcoef = Rational::ZERO;
        for (j, &c) in cols.iter().enumerate() {
            let v = system.a.get(r, c);
            if !v.is_zero() {
                tcoef += v;
                row[1 + j] = v.clone();
            }
        }
        for (j, &c) in extra.iter().enumerate() {
            row[1 + s + j] = system.a.get(r, c).clone();
        }
        row[0] = tcoef;
        a.push(row);
    }
    let mut cap = vec![Rational::ZERO; width];
    cap[0] = Rational::ONE;
    cap[width - 1] = Rational::ONE;
    a.push(cap);
    let mut b = system.b.clone();
    b.push(Rational::ONE);
    let mut c = vec![Rational::ZERO; width];
    c[0] = Rational::ONE;
    let lp = LpProblem::new(
        LinearSystem::new(RationalMatrix::from_rows_with_cols(width, a), b),
        c,
        Sense::Maximize,
    );
    match lp_solve(&lp) {
        LpResult::Infeasible => MaxMin::Infeasible,
        LpResult::Unbounded => unreachable!("t is capped at 1"),
        LpResult::Optimal { value, solution } => {
            let mut point = vec![Rational::ZERO; system.num_cols()];
            for (j, &col) in cols.iter().enumerate() {
                point[col] = &value + &solution[1 + j];
            }
            for (j, &col) in extra.iter().enumerate() {
                point[col] = solution[1 + s + j].clone();
            }
            MaxMin::Optimal { t: value, point }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    fn sys(rows: &[&[i64]], b: &[i64]) -> LinearSystem {
        LinearSystem::new(RationalMatrix::from_i64_rows(rows), ints(b))
    }

    #[test]
    fn maximize_on_segment() {
        let lp = LpProblem::new(sys(&[&[1, 1]], &[1]), ints(&[1, 0]), Sense::Maximize);
        assert_eq!(
            lp_solve(&lp),
            LpResult::Optimal {
                value: q(1, 1),
                solution: ints(&[1, 0])
            }
        );
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LpProblem::feasibility(sys(&[&[1, 1]], &[-1]));
        assert_eq!(lp_solve(&lp), LpResult::Infeasible);
        let lp = LpProblem::feasibility(sys(&[&[1, 0], &[1, 0]], &[1, 2]));
        assert_eq!(lp_solve(&lp), LpResult::Infeasible);
        let lp = LpProblem::new(sys(&[&[1, -1]], &[0]), ints(&[1, 0]), Sense::Maximize);
        assert_eq!(lp_solve(&lp), LpResult::Unbounded);
    }

    #[test]
    fn negative_rhs_needs_phase_one() {
        // -x1 - x2 = -2, x1 - x3 = 1/2: minimize x2
        let a = RationalMatrix::from_rows(vec![
            vec![q(-1, 1), q(-1, 1), q(0, 1)],
            vec![q(1, 1), q(0, 1), q(-1, 1)],
        ]);
        let lp = LpProblem::new(
            LinearSystem::new(a, vec![q(-2, 1), q(1, 2)]),
            ints(&[0, 1, 0]),
            Sense::Minimize,
        );
        let res = lp_solve(&lp);
        assert_eq!(res.value(), Some(&q(0, 1)));
        assert_eq!(res.solution().unwrap()[0], q(2, 1));
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let lp = LpProblem::new(
            sys(
                &[&[1, 1, 0], &[2, 2, 0], &[0, 0, 1], &[1, 1, 1]],
                &[1, 2, 1, 2],
            ),
            ints(&[0, 1, 0]),
            Sense::Maximize,
        );
        assert_eq!(lp_solve(&lp).value(), Some(&q(1, 1)));
    }

    /// Beale's example, which cycles under the largest-coefficient rule.
    #[test]
    fn bland_terminates_on_cycling_example() {
        // min -3/4 x4 + 20 x5 - 1/2 x6 + 6 x7
        // s.t. x1 + 1/4 x4 - 8 x5 - x6 + 9 x7 = 0
        //      x2 + 1/2 x4 - 12 x5 - 1/2 x6 + 3 x7 = 0
        //      x3 + x6 = 1
        let a = RationalMatrix::from_rows(vec![
            vec![
                q(1, 1),
                q(0, 1),
                q(0, 1),
                q(1, 4),
                q(-8, 1),
                q(-1, 1),
                q(9, 1),
            ],
            vec![
                q(0, 1),
                q(1, 1),
                q(0, 1),
                q(1, 2),
                q(-12, 1),
                q(-1, 2),
                q(3, 1),
            ],
            vec![
                q(0, 1),
                q(0, 1),
                q(1, 1),
                q(0, 1),
                q(0, 1),
                q(1, 1),
                q(0, 1),
            ],
        ]);
        let lp = LpProblem::new(
            LinearSystem::new(a, ints(&[0, 0, 1])),
            vec![
                q(0, 1),
                q(0, 1),
                q(0, 1),
                q(-3, 4),
                q(20, 1),
                q(-1, 2),
                q(6, 1),
            ],
            Sense::Minimize,
        );
        assert_eq!(lp_solve(&lp).value(), Some(&q(-5, 4)));
    }

    #[test]
    fn max_min_on_simplex() {
        let s = sys(&[&[1, 1, 1]], &[1]);
        match max_min_coordinate(&s, &SupportVector::full(3)) {
            MaxMin::Optimal { t, point } => {
                assert_eq!(t, q(1, 3));
                assert_eq!(point, vec![q(1, 3); 3]);
            }
            MaxMin::Infeasible => panic!("feasible"),
        }
        let single = SupportVector::from_indices(3, [1]);
        assert!(
            matches!(max_min_coordinate(&s, &single), MaxMin::Optimal { t, .. } if t == q(1, 1))
        );
        assert_eq!(
            max_min_coordinate(&s, &SupportVector::empty(3)),
            MaxMin::Infeasible
        );
    }

    #[test]
    fn max_min_zero_when_not_simultaneous() {
        // x1 + x2 = 1 and x1 = x1 + x2 forces x2 = 0
        let s = sys(&[&[1, 1], &[0, 1]], &[1, 0]);
        match max_min_coordinate(&s, &SupportVector::full(2)) {
            MaxMin::Optimal { t, .. } => assert!(t.is_zero()),
            MaxMin::Infeasible => panic!("x = (1, 0) is feasible with t = 0"),
        }
    }
}
