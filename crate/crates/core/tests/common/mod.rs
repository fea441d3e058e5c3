//! Independent reference implementations used by the integration and
//! acceptance tests. Nothing here calls the library's elimination, simplex or
//! enumeration code; only `Rational` arithmetic and the model types are
//! shared.

#![allow(dead_code)]

use std::sync::Arc;

use nspoly_core::polytope::ConstraintSystem;
use nspoly_core::{PossibilisticModel, Rational, Scenario, SupportVector, VarId};
use rand::Rng;

/// Unique solution of the square-or-tall system `cols` of `a` against `b`,
/// by plain Gaussian elimination. `None` if the columns are dependent or the
/// system is inconsistent.
pub fn solve_columns(a: &[Vec<Rational>], b: &[Rational], cols: &[usize]) -> Option<Vec<Rational>> {
    let m = a.len();
    let k = cols.len();
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|&c| a[r][c].clone()).collect();
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut row = 0;
    for col in 0..k {
        let p = (row..m).find(|&r| !t[r][col].is_zero())?;
        t.swap(row, p);
        let inv = t[row][col].recip();
        for j in 0..=k {
            t[row][j] = &t[row][j] * &inv;
        }
        for r in 0..m {
            if r != row && !t[r][col].is_zero() {
                let f = t[r][col].clone();
                for j in 0..=k {
                    let v = &t[r][j] - &(&f * &t[row][j]);
                    t[r][j] = v;
                }
            }
        }
        row += 1;
    }
    if t[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| t[i][k].clone()).collect())
}

pub fn dense(system: &ConstraintSystem) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let sys = system.system();
    (sys.a.row_vecs(), sys.b.clone())
}

fn subsets(n: usize, max: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, max: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        f(cur);
        if cur.len() == max {
            return;
        }
        for c in start..n {
            cur.push(c);
            go(c + 1, n, max, cur, f);
            cur.pop();
        }
    }
    go(0, n, max, &mut Vec::new(), f);
}

/// Every basic feasible solution of `{x >= 0 : Ax = b}`, found by trying all
/// column subsets of size at most the row count, deduplicated.
pub fn basic_feasible_solutions(a: &[Vec<Rational>], b: &[Rational]) -> Vec<Vec<Rational>> {
    let n = a.first().map_or(0, Vec::len);
    let mut out: Vec<Vec<Rational>> = Vec::new();
    subsets(n, a.len().min(n), &mut |cols| {
        if let Some(y) = solve_columns(a, b, cols) {
            if y.iter().all(|v| !v.is_negative()) {
                let mut x = vec![Rational::ZERO; n];
                for (&c, v) in cols.iter().zip(y) {
                    x[c] = v;
                }
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
    });
    out
}

/// Vertices of a bounded standard-form polytope, sorted by support
/// bitstring, without any pruning.
pub fn exhaustive_vertices(system: &ConstraintSystem) -> Vec<Vec<Rational>> {
    let (a, b) = dense(system);
    let mut v = basic_feasible_solutions(&a, &b);
    v.sort_by_key(|x| SupportVector::of(x).to_bits());
    v
}

/// Optimum of `min c·x` over a bounded nonempty polytope by scanning basic
/// feasible solutions; `None` if there are none (infeasible).
pub fn brute_force_min(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Option<Rational> {
    basic_feasible_solutions(a, b)
        .iter()
        .map(|x| x.iter().zip(c).map(|(u, v)| u * v).sum::<Rational>())
        .min()
}

/// A random bounded LP: `rows` random equations over `vars` variables plus a
/// cap `Σx + s = cap`, with a slack `s`. Returns `(A, b, c)` on `vars + 1`
/// columns.
pub fn random_bounded_lp(
    rng: &mut impl Rng,
    rows: usize,
    vars: usize,
) -> (Vec<Vec<Rational>>, Vec<Rational>, Vec<Rational>) {
    let r = |rng: &mut dyn rand::RngCore| Rational::from_integer(rng.gen_range(-3..=3));
    let mut a = Vec::new();
    let mut b = Vec::new();
    for _ in 0..rows {
        let mut row: Vec<Rational> = (0..vars).map(|_| r(rng)).collect();
        row.push(Rational::ZERO);
        a.push(row);
        b.push(Rational::from_integer(rng.gen_range(-2..=4)));
    }
    a.push(vec![Rational::ONE; vars + 1]);
    b.push(Rational::from_integer(rng.gen_range(1..=5)));
    let c = (0..=vars).map(|_| r(rng)).collect();
    (a, b, c)
}

/// Strong contextuality by checking every global assignment.
pub fn exhaustive_strongly_contextual(model: &PossibilisticModel) -> bool {
    let s = model.scenario();
    s.global_assignments().all(|g| {
        s.context_ids().any(|c| {
            let local = g.restrict(s.context(c)).unwrap();
            !model.values()[s.cell_index(c, &local).unwrap()]
        })
    })
}

/// Lifts a vector on the columns `cols` back to all `n` cells.
pub fn lift(n: usize, cols: &[usize], y: &[Rational]) -> Vec<Rational> {
    let mut x = vec![Rational::ZERO; n];
    for (&c, v) in cols.iter().zip(y) {
        x[c] = v.clone();
    }
    x
}

pub fn scenario(vars: &[&str], outcomes: &[&str], contexts: &[&[&str]]) -> Arc<Scenario> {
    Arc::new(
        Scenario::new(
            vars.iter().copied(),
            outcomes.iter().copied(),
            contexts.iter().map(|c| c.to_vec()),
        )
        .unwrap(),
    )
}

pub fn simplex_1() -> Arc<Scenario> {
    scenario(&["x"], &["0", "1"], &[&["x"]])
}

pub fn tetrahedron() -> Arc<Scenario> {
    scenario(&["a", "b"], &["0", "1"], &[&["a", "b"]])
}

pub fn var(s: &Scenario, name: &str) -> VarId {
    s.var_id(name).unwrap()
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}
