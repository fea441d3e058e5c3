use std::fmt;

use crate::rational::Rational;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::ONE);
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        Self::from_rows_with_cols(rows.first().map_or(0, Vec::len), rows)
    }

    pub fn from_rows_with_cols(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        RationalMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// The submatrix formed by the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.set(r, j, self.get(r, c).clone());
            }
        }
        m
    }

    /// `[self | v]`.
    pub fn augment(&self, v: &[Rational]) -> Self {
        assert_eq!(v.len(), self.rows);
        let mut m = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            m.set(r, self.cols, v[r].clone());
        }
        m
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Reduced row-echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = m.get(lead, c).recip();
            if !inv.is_one() {
                for j in c..m.cols {
                    let v = m.get(lead, j);
                    if !v.is_zero() {
                        let nv = v * &inv;
                        m.set(lead, j, nv);
                    }
                }
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let f = m.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pv = m.get(lead, j);
                    if pv.is_zero() {
                        continue;
                    }
                    let nv = m.get(r, j) - &(&f * pv);
                    m.set(r, j, nv);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        Rref {
            rank: pivots.len(),
            matrix: m,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: RationalMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Rref {
    /// For an augmented matrix `[A | b]`: false iff some row reads `0 = 1`.
    pub fn is_consistent_augmented(&self) -> bool {
        self.pivots.last() != Some(&(self.matrix.cols() - 1))
    }
}

/// The equation system `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub a: RationalMatrix,
    pub b: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffineSolution {
    Inconsistent,
    Solutions {
        particular: Vec<Rational>,
        /// Basis of the null space of `A`; its length is `n - rank(A)`.
        nullspace: Vec<Vec<Rational>>,
    },
}

impl AffineSolution {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            AffineSolution::Inconsistent => None,
            AffineSolution::Solutions { nullspace, .. } => Some(nullspace.len()),
        }
    }
}

impl LinearSystem {
    pub fn new(a: RationalMatrix, b: Vec<Rational>) -> Self {
        assert_eq!(
            a.rows(),
            b.len(),
            "right-hand side length must match row count"
        );
        LinearSystem { a, b }
    }

    pub fn num_rows(&self) -> usize {
        self.a.rows()
    }

    pub fn num_cols(&self) -> usize {
        self.a.cols()
    }

    pub fn augmented_rref(&self) -> Rref {
        self.a.augment(&self.b).rref()
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.num_cols() && self.a.mul_vec(x) == self.b
    }

    /// Restriction to a subset of columns (the other variables fixed at zero).
    pub fn restrict_columns(&self, cols: &[usize]) -> LinearSystem {
        LinearSystem {
            a: self.a.select_columns(cols),
            b: self.b.clone(),
        }
    }

    /// Parametrizes the full solution set of `A x = b`.
    pub fn solve_affine(&self) -> AffineSolution {
        let n = self.num_cols();
        let r = self.augmented_rref();
        if !r.is_consistent_augmented() {
            return AffineSolution::Inconsistent;
        }
        let mut particular = vec![Rational::ZERO; n];
        for (row, &p) in r.pivots.iter().enumerate() {
            particular[p] = r.matrix.get(row, n).clone();
        }
        let free: Vec<usize> = (0..n).filter(|c| !r.pivots.contains(c)).collect();
        let nullspace = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::ZERO; n];
                v[f] = Rational::ONE;
                for (row, &p) in r.pivots.iter().enumerate() {
                    v[p] = -r.matrix.get(row, f);
                }
                v
            })
            .collect();
        AffineSolution::Solutions {
            particular,
            nullspace,
        }
    }

    /// The unique solution, if the columns are independent and the system is
    /// consistent.
    pub fn unique_solution(&self) -> Option<Vec<Rational>> {
        match self.solve_affine() {
            AffineSolution::Solutions {
                particular,
                nullspace,
            } if nullspace.is_empty() => Some(particular),
            _ => None,
        }
    }
}
