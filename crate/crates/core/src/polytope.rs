//! Standard-form polytopes `P = {x >= 0 : A x = b}`: the no-signalling
//! constraint system of a scenario, support achievability and closure,
//! carrier faces, face dimensions and relative-interior tests.

use std::fmt;

use crate::error::PolytopeError;
use crate::linalg::{
    lp_solve, max_min_coordinate, LinearSystem, LpProblem, LpResult, MaxMin, RationalMatrix, Sense,
};
use crate::rational::Rational;
use crate::scenario::{Assignment, ContextId, Scenario};
use crate::support::SupportVector;

/// Where a constraint row came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowTag {
    Normalization(ContextId),
    NoSignalling {
        left: ContextId,
        right: ContextId,
        shared: Assignment,
    },
    User,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    system: LinearSystem,
    labels: Vec<String>,
    tags: Vec<RowTag>,
}

/// Key of a face: the adjoined bottom (empty face) or an achievable support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FaceKey {
    Bottom,
    Support(SupportVector),
}

impl FaceKey {
    pub fn support(&self) -> Option<&SupportVector> {
        match self {
            FaceKey::Bottom => None,
            FaceKey::Support(s) => Some(s),
        }
    }

    /// Order of the support lattice with bottom adjoined.
    pub fn le(&self, other: &FaceKey) -> bool {
        match (self, other) {
            (FaceKey::Bottom, _) => true,
            (FaceKey::Support(_), FaceKey::Bottom) => false,
            (FaceKey::Support(a), FaceKey::Support(b)) => a.is_subset(b),
        }
    }
}

impl fmt::Display for FaceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceKey::Bottom => f.write_str("bottom"),
            FaceKey::Support(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub key: FaceKey,
    /// `-1` for the empty face.
    pub dimension: i64,
    /// A point in the relative interior; absent for the empty face.
    pub witness: Option<Vec<Rational>>,
}

/// Result of [`ConstraintSystem::support_closure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    /// Largest achievable support below the query.
    pub support: SupportVector,
    /// A point with support exactly `support`; `None` when no point of the
    /// polytope vanishes off the query support.
    pub witness: Option<Vec<Rational>>,
    /// Per-coordinate maxima of `x_i` over the normalized cone
    /// `{(x, λ) >= 0 : A x = λ b, Σx + λ <= 1}` restricted to the query
    /// support. A maximum is positive iff the coordinate can be positive in
    /// the face.
    pub maxima: Vec<(usize, Rational)>,
}

impl Closure {
    pub fn is_empty(&self) -> bool {
        self.witness.is_none()
    }
}

impl ConstraintSystem {
    /// The normalization and no-signalling equations of a scenario over its
    /// `n` cells: one normalization row per context, then one row per
    /// unordered pair of overlapping contexts per assignment of the overlap.
    pub fn no_signalling(scenario: &Scenario) -> Self {
        let n = scenario.num_cells();
        let mut rows = Vec::new();
        let mut tags = Vec::new();
        for c in scenario.context_ids() {
            let mut row = vec![Rational::ZERO; n];
            for i in scenario.context_cells(c) {
                row[i] = Rational::ONE;
            }
            rows.push(row);
            tags.push(RowTag::Normalization(c));
        }
        let k = scenario.num_outcomes();
        for i in 0..scenario.num_contexts() {
            for j in i + 1..scenario.num_contexts() {
                let (ci, cj) = (ContextId(i), ContextId(j));
                let shared = scenario.overlap(ci, cj);
                if shared.is_empty() {
                    continue;
                }
                let projection = |ctx: ContextId| -> Vec<usize> {
                    let vars = scenario.context(ctx);
                    let pos: Vec<usize> = shared
                        .iter()
                        .map(|v| vars.iter().position(|w| w == v).expect("shared"))
                        .collect();
                    scenario
                        .assignments_on(vars)
                        .iter()
                        .map(|a| pos.iter().fold(0, |acc, &p| acc * k + a.values()[p]))
                        .collect()
                };
                let (pi, pj) = (projection(ci), projection(cj));
                for (rank, u) in scenario.assignments_on(&shared).into_iter().enumerate() {
                    let mut row = vec![Rational::ZERO; n];
                    for (off, &p) in scenario.context_cells(ci).zip(&pi) {
                        if p == rank {
                            row[off] = Rational::ONE;
                        }
                    }
                    for (off, &p) in scenario.context_cells(cj).zip(&pj) {
                        if p == rank {
                            row[off] = Rational::from_integer(-1);
                        }
                    }
                    rows.push(row);
                    tags.push(RowTag::NoSignalling {
                        left: ci,
                        right: cj,
                        shared: u,
                    });
                }
            }
        }
        let mut b = vec![Rational::ZERO; rows.len()];
        for (bi, t) in b.iter_mut().zip(&tags) {
            if matches!(t, RowTag::Normalization(_)) {
                *bi = Rational::ONE;
            }
        }
        let labels = (0..n)
            .map(|i| {
                let (c, a) = scenario.index_cell(i).expect("in range");
                format!(
                    "{}:{}",
                    scenario.context_label(c),
                    scenario.section_label(a.values())
                )
            })
            .collect();
        ConstraintSystem {
            system: LinearSystem::new(RationalMatrix::from_rows_with_cols(n, rows), b),
            labels,
            tags,
        }
    }

    /// A user-supplied standard-form system. Rejected unless every coordinate
    /// is bounded above on `P`.
    pub fn general(
        system: LinearSystem,
        labels: Option<Vec<String>>,
    ) -> Result<Self, PolytopeError> {
        let n = system.num_cols();
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(PolytopeError::Dimension(format!(
                    "{} labels for {n} columns",
                    l.len()
                )))
            }
            Some(l) => l,
            None => (0..n).map(|i| format!("x{i}")).collect(),
        };
        let tags = vec![RowTag::User; system.num_rows()];
        let cs = ConstraintSystem {
            system,
            labels,
            tags,
        };
        cs.check_bounded()?;
        Ok(cs)
    }

    fn check_bounded(&self) -> Result<(), PolytopeError> {
        let n = self.num_cells();
        for j in 0..n {
            let mut c = vec![Rational::ZERO; n];
            c[j] = Rational::ONE;
            match lp_solve(&LpProblem::new(self.system.clone(), c, Sense::Maximize)) {
                LpResult::Unbounded => return Err(PolytopeError::Unbounded(j)),
                LpResult::Infeasible => return Ok(()),
                LpResult::Optimal { .. } => {}
            }
        }
        Ok(())
    }

    /// The face `{x ∈ P : x_i = 0 for i ∉ support}` as a standard-form system
    /// over the columns in `support`.
    pub fn restrict(&self, support: &SupportVector) -> ConstraintSystem {
        let cols = support.indices();
        ConstraintSystem {
            system: self.system.restrict_columns(&cols),
            labels: cols.iter().map(|&i| self.labels[i].clone()).collect(),
            tags: self.tags.clone(),
        }
    }

    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn tags(&self) -> &[RowTag] {
        &self.tags
    }

    pub fn num_cells(&self) -> usize {
        self.system.num_cols()
    }

    pub fn rank(&self) -> usize {
        self.system.a.rank()
    }

    /// `dim P`, or `-1` when `P` is empty.
    pub fn dimension(&self) -> i64 {
        match max_min_coordinate(&self.system, &SupportVector::full(self.num_cells())) {
            MaxMin::Infeasible => -1,
            MaxMin::Optimal { .. } => {
                let top = self.support_closure(&SupportVector::full(self.num_cells()));
                if top.is_empty() {
                    -1
                } else {
                    self.restricted_dimension(&top.support)
                }
            }
        }
    }

    fn check_len(&self, len: usize) -> Result<(), PolytopeError> {
        if len != self.num_cells() {
            return Err(PolytopeError::Dimension(format!(
                "expected length {}, got {len}",
                self.num_cells()
            )));
        }
        Ok(())
    }

    /// `A x = b` and `x >= 0`, exactly.
    pub fn membership(&self, x: &[Rational]) -> Result<bool, PolytopeError> {
        self.check_len(x.len())?;
        Ok(x.iter().all(|v| !v.is_negative()) && self.system.is_satisfied_by(x))
    }

    pub fn max_min_coordinate(&self, support: &SupportVector) -> MaxMin {
        max_min_coordinate(&self.system, support)
    }

    /// Largest achievable support below `support`, decided coordinate by
    /// coordinate, with a witness point of exactly that support.
    pub fn support_closure(&self, support: &SupportVector) -> Closure {
        assert_eq!(support.len(), self.num_cells());
        let n = self.num_cells();
        let cols = support.indices();
        let s = cols.len();
        let m = self.system.num_rows();
        // variables: x_σ (s of them), λ, slack
        let width = s + 2;
        let mut rows = Vec::with_capacity(m + 1);
        for r in 0..m {
            let mut row = vec![Rational::ZERO; width];
            for (j, &c) in cols.iter().enumerate() {
                row[j] = self.system.a.get(r, c).clone();
            }
            row[s] = -&self.system.b[r];
            rows.push(row);
        }
        let mut cap = vec![Rational::ONE; width];
        cap[s] = Rational::ONE;
        rows.push(cap);
        let mut rhs = vec![Rational::ZERO; m];
        rhs.push(Rational::ONE);
        let cone = LinearSystem::new(RationalMatrix::from_rows_with_cols(width, rows), rhs);

        let mut maxima = Vec::with_capacity(s);
        let mut closure = SupportVector::empty(n);
        let mut sum = vec![Rational::ZERO; n];
        for (j, &col) in cols.iter().enumerate() {
            let mut c = vec![Rational::ZERO; width];
            c[j] = Rational::ONE;
            let res = lp_solve(&LpProblem::new(cone.clone(), c, Sense::Maximize));
            let LpResult::Optimal { value, solution } = res else {
                unreachable!("the normalized cone is nonempty and bounded");
            };
            if value.is_positive() {
                let lambda = &solution[s];
                assert!(
                    lambda.is_positive(),
                    "recession direction in a bounded polytope"
                );
                closure.insert(col);
                for (k, &c2) in cols.iter().enumerate() {
                    if !solution[k].is_zero() {
                        sum[c2] += &(&solution[k] / lambda);
                    }
                }
            }
            maxima.push((col, value));
        }

        let count = closure.count();
        let witness = if count > 0 {
            let inv = Rational::from(count).recip();
            let w: Vec<Rational> = sum.iter().map(|v| v * &inv).collect();
            debug_assert_eq!(SupportVector::of(&w), closure);
            debug_assert!(self.membership(&w).unwrap());
            Some(w)
        } else if self.system.b.iter().all(Rational::is_zero) {
            Some(vec![Rational::ZERO; n])
        } else {
            None
        };
        Closure {
            support: closure,
            witness,
            maxima,
        }
    }

    /// Some point of `P` has support exactly `support`.
    pub fn is_achievable(&self, support: &SupportVector) -> bool {
        self.max_min_coordinate(support).is_positive()
    }

    fn restricted_dimension(&self, support: &SupportVector) -> i64 {
        let cols = support.indices();
        cols.len() as i64 - self.system.a.select_columns(&cols).rank() as i64
    }

    /// `|σ| - rank(A_σ)`. The closure witness is strictly positive on `σ`, so
    /// the affine hull of the face is the whole solution set of the
    /// restricted equations.
    pub fn face_dimension(&self, support: &SupportVector) -> Result<i64, PolytopeError> {
        self.check_len(support.len())?;
        if !self.is_achievable(support) {
            return Err(PolytopeError::NotAchievable);
        }
        Ok(self.restricted_dimension(support))
    }

    /// The face containing `x` in its relative interior.
    pub fn carrier_face(&self, x: &[Rational]) -> Result<Face, PolytopeError> {
        if !self.membership(x)? {
            return Err(PolytopeError::NotInPolytope);
        }
        let support = SupportVector::of(x);
        Ok(Face {
            dimension: self.restricted_dimension(&support),
            key: FaceKey::Support(support),
            witness: Some(x.to_vec()),
        })
    }

    /// Decides `x ∈ relint F_σ`: for every vertex `v` of the face some
    /// `μ > 1` keeps `μx + (1-μ)v` in `P`. Vertices of the face are
    /// enumerated from its restricted system.
    pub fn relint_membership(
        &self,
        x: &[Rational],
        support: &SupportVector,
    ) -> Result<bool, PolytopeError> {
        let face = self.restrict(support);
        let vertices = crate::lattice::enumerate_vertices(&face)?;
        let cols = support.indices();
        let lifted: Vec<Vec<Rational>> = vertices
            .iter()
            .map(|v| {
                let mut p = vec![Rational::ZERO; self.num_cells()];
                for (j, &c) in cols.iter().enumerate() {
                    p[c] = v.point[j].clone();
                }
                p
            })
            .collect();
        self.relint_membership_among(x, support, &lifted)
    }

    /// As [`Self::relint_membership`], with the vertices of `P` supplied by
    /// the caller; those outside the face are ignored.
    pub fn relint_membership_among(
        &self,
        x: &[Rational],
        support: &SupportVector,
        vertices: &[Vec<Rational>],
    ) -> Result<bool, PolytopeError> {
        if !self.membership(x)? {
            return Err(PolytopeError::NotInPolytope);
        }
        if !SupportVector::of(x).is_subset(support) {
            return Err(PolytopeError::Precondition(
                "supp x is not below the face support".into(),
            ));
        }
        let cols = support.indices();
        for v in vertices
            .iter()
            .filter(|v| SupportVector::of(v).is_subset(support))
        {
            if !extends_beyond(x, v, &cols) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Maximizes `μ` with `z = μx + (1-μ)v >= 0` on the face coordinates; true
/// iff the optimum exceeds 1 (or is unbounded). Equality constraints hold for
/// every affine combination of two points of `P` and need no row.
fn extends_beyond(x: &[Rational], v: &[Rational], cols: &[usize]) -> bool {
    // variables: z_1..z_s, μ ;  z_i - μ (x_i - v_i) = v_i
    let s = cols.len();
    let rows: Vec<Vec<Rational>> = cols
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let mut row = vec![Rational::ZERO; s + 1];
            row[j] = Rational::ONE;
            row[s] = &v[c] - &x[c];
            row
        })
        .collect();
    let b: Vec<Rational> = cols.iter().map(|&c| v[c].clone()).collect();
    let mut obj = vec![Rational::ZERO; s + 1];
    obj[s] = Rational::ONE;
    let lp = LpProblem::new(
        LinearSystem::new(RationalMatrix::from_rows_with_cols(s + 1, rows), b),
        obj,
        Sense::Maximize,
    );
    match lp_solve(&lp) {
        LpResult::Unbounded => true,
        LpResult::Optimal { value, .. } => value > Rational::ONE,
        LpResult::Infeasible => unreachable!("μ = 0 gives z = v >= 0"),
    }
}
