//! Polynomial matrices with shift-aware degree machinery and form predicates.
//!
//! Shifts are never materialized as diagonal monomial matrices: every shifted
//! quantity is computed by degree bookkeeping (`deg + s[j]`), which keeps all
//! entries over `F_p[x]` even for negative shifts and avoids the storage
//! blowup of extremal shifts such as the Hermite shift.

use crate::error::{Error, Result};
use crate::gfp::{FieldElement, PrimeField};
use crate::poly::{Degree, Poly};

/// A constant matrix over `F_p`, used for leading matrices, constant terms
/// and the random lift of the completion algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
    field: PrimeField,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> FpMatrix {
        FpMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
            field,
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> FpMatrix {
        let mut m = FpMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1 % field.modulus());
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<FpMatrix> {
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let p = field.modulus();
        let data = rows.iter().flatten().map(|&v| v % p).collect();
        Ok(FpMatrix {
            rows: rows.len(),
            cols: ncols,
            data,
            field,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.modulus();
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Rank by plain Gaussian elimination.
    pub fn rank(&self) -> usize {
        let f = self.field;
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pivot) = (rank..m.rows).find(|&i| m.get(i, col) != 0) else {
                continue;
            };
            for j in 0..m.cols {
                let a = m.get(rank, j);
                let b = m.get(pivot, j);
                m.set(rank, j, b);
                m.set(pivot, j, a);
            }
            let inv = f.inv_raw(m.get(rank, col)).expect("pivot nonzero");
            for i in rank + 1..m.rows {
                let c = f.mul_raw(m.get(i, col), inv);
                if c == 0 {
                    continue;
                }
                for j in col..m.cols {
                    let v = f.sub_raw(m.get(i, j), f.mul_raw(c, m.get(rank, j)));
                    m.set(i, j, v);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<FpMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let f = self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = FpMatrix::identity(f, n);
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&i| m.get(i, col) != 0) else {
                return Err(Error::Singular);
            };
            if pivot != col {
                for j in 0..n {
                    let (a, b) = (m.get(col, j), m.get(pivot, j));
                    m.set(col, j, b);
                    m.set(pivot, j, a);
                    let (a, b) = (inv.get(col, j), inv.get(pivot, j));
                    inv.set(col, j, b);
                    inv.set(pivot, j, a);
                }
            }
            let c = f.inv_raw(m.get(col, col)).expect("pivot nonzero");
            for j in 0..n {
                m.set(col, j, f.mul_raw(m.get(col, j), c));
                inv.set(col, j, f.mul_raw(inv.get(col, j), c));
            }
            for i in 0..n {
                if i == col || m.get(i, col) == 0 {
                    continue;
                }
                let c = m.get(i, col);
                for j in 0..n {
                    let v = f.sub_raw(m.get(i, j), f.mul_raw(c, m.get(col, j)));
                    m.set(i, j, v);
                    let v = f.sub_raw(inv.get(i, j), f.mul_raw(c, inv.get(col, j)));
                    inv.set(i, j, v);
                }
            }
        }
        Ok(inv)
    }

    pub fn mul(&self, rhs: &FpMatrix) -> Result<FpMatrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        let mut out = FpMatrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = f.add_raw(out.get(i, j), f.mul_raw(a, rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// A basis of the right nullspace, one kernel vector per column.
    pub fn right_nullspace(&self) -> FpMatrix {
        let f = self.field;
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        // Row-reduce, remembering pivot columns.
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&i| a.get(i, col) != 0) else {
                continue;
            };
            for j in 0..n {
                let (x, y) = (a.get(rank, j), a.get(p, j));
                a.set(rank, j, y);
                a.set(p, j, x);
            }
            let inv = f.inv_raw(a.get(rank, col)).expect("pivot nonzero");
            for j in 0..n {
                a.set(rank, j, f.mul_raw(a.get(rank, j), inv));
            }
            for i in 0..m {
                if i == rank || a.get(i, col) == 0 {
                    continue;
                }
                let c = a.get(i, col);
                for j in 0..n {
                    let v = f.sub_raw(a.get(i, j), f.mul_raw(c, a.get(rank, j)));
                    a.set(i, j, v);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
        let mut basis = FpMatrix::zeros(f, n, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, f.neg_raw(a.get(r, fc)));
            }
        }
        basis
    }
}

/// An integer column-weight tuple; `amp` and entrywise access are the only
/// structure the algorithms need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shift {
    values: Vec<i64>,
}

impl Shift {
    pub fn new(values: Vec<i64>) -> Shift {
        Shift { values }
    }

    pub fn zero(n: usize) -> Shift {
        Shift { values: vec![0; n] }
    }

    pub fn uniform(n: usize, c: i64) -> Shift {
        Shift { values: vec![c; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, j: usize) -> i64 {
        self.values[j]
    }

    pub fn min(&self) -> i64 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    pub fn max(&self) -> i64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// `amp(s) = max(s) - min(s)`.
    pub fn amp(&self) -> i64 {
        if self.values.is_empty() {
            0
        } else {
            self.max() - self.min()
        }
    }

    /// `|s| = sum of the entries`.
    pub fn sum(&self) -> i64 {
        self.values.iter().sum()
    }

    /// The subshift at the indices of `J`.
    pub fn restrict(&self, j: &ColumnSet) -> Result<Shift> {
        j.check_bounds(self.values.len())?;
        Ok(Shift {
            values: j.iter().map(|i| self.values[i]).collect(),
        })
    }

    pub fn add_const(&self, c: i64) -> Shift {
        Shift {
            values: self.values.iter().map(|&v| v + c).collect(),
        }
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.values.len() != n {
            Err(Error::ShiftLength {
                expected: n,
                found: self.values.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// A strictly increasing set of 0-based column indices, together with the
/// embedding of positions into indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSet {
    indices: Vec<usize>,
}

impl ColumnSet {
    pub fn new(indices: Vec<usize>) -> Result<ColumnSet> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadColumnSet(
                "indices not strictly increasing".into(),
            ));
        }
        Ok(ColumnSet { indices })
    }

    pub fn empty() -> ColumnSet {
        ColumnSet {
            indices: Vec::new(),
        }
    }

    /// The full set `{0, .., n-1}`.
    pub fn full(n: usize) -> ColumnSet {
        ColumnSet {
            indices: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    /// The embedding `phi`: position `i` within the set to column index.
    pub fn embed(&self, i: usize) -> usize {
        self.indices[i]
    }

    /// Apply the embedding elementwise to a set of positions.
    pub fn embed_set(&self, positions: &ColumnSet) -> ColumnSet {
        ColumnSet {
            indices: positions.iter().map(|i| self.indices[i]).collect(),
        }
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    /// The complement within `{0, .., n-1}`.
    pub fn complement(&self, n: usize) -> ColumnSet {
        ColumnSet {
            indices: (0..n).filter(|j| !self.contains(*j)).collect(),
        }
    }

    pub fn check_bounds(&self, n: usize) -> Result<()> {
        if self.indices.last().is_some_and(|&j| j >= n) {
            Err(Error::BadColumnSet(format!(
                "index out of range for {n} columns"
            )))
        } else {
            Ok(())
        }
    }
}

/// Pivot data of one row: index and degree of the pivot entry, and the
/// shifted row degree. A zero row has no pivot and degree `-inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowPivot {
    pub index: Option<usize>,
    pub degree: Degree,
    pub row_degree: Degree,
}

/// Per-row pivot information of a matrix under a shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotProfile {
    pub rows: Vec<RowPivot>,
}

impl PivotProfile {
    /// Pivot indices per row, `None` for zero rows.
    pub fn indices(&self) -> Vec<Option<usize>> {
        self.rows.iter().map(|r| r.index).collect()
    }

    /// Pivot degrees of the nonzero rows, in row order.
    pub fn degrees(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter_map(|r| r.degree.finite().map(|d| d as usize))
            .collect()
    }
}

/// Shifted pivot of a single row: the largest index attaining the shifted
/// row degree.
pub(crate) fn row_pivot(row: &[Poly], s: &Shift) -> RowPivot {
    let mut best: Option<(usize, i64)> = None;
    for (j, p) in row.iter().enumerate() {
        if let Some(d) = p.deg_usize() {
            let sd = d as i64 + s.get(j);
            // Ties go to the larger index: scanning left to right, >= keeps
            // the rightmost maximum.
            if best.is_none_or(|(_, cur)| sd >= cur) {
                best = Some((j, sd));
            }
        }
    }
    match best {
        None => RowPivot {
            index: None,
            degree: Degree::NegInf,
            row_degree: Degree::NegInf,
        },
        Some((j, sd)) => RowPivot {
            index: Some(j),
            degree: Degree::Fin(sd - s.get(j)),
            row_degree: Degree::Fin(sd),
        },
    }
}

/// A dense matrix over `F_p[x]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
    field: PrimeField,
}

impl PolyMatrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix {
            rows,
            cols,
            entries: vec![Poly::zero(field); rows * cols],
            field,
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(field));
        }
        m
    }

    /// Build from rows of polynomials; the column count is inferred from the
    /// first row (use [`PolyMatrix::from_rows_with_cols`] when the row list
    /// may be empty).
    pub fn from_rows(field: PrimeField, rows: Vec<Vec<Poly>>) -> Result<PolyMatrix> {
        let ncols = rows.first().map_or(0, |r| r.len());
        PolyMatrix::from_rows_with_cols(field, ncols, rows)
    }

    /// Build from rows of polynomials with an explicit column count, which
    /// keeps the width of matrices with no rows.
    pub fn from_rows_with_cols(
        field: PrimeField,
        cols: usize,
        rows: Vec<Vec<Poly>>,
    ) -> Result<PolyMatrix> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        if rows.iter().flatten().any(|p| p.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(PolyMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
            field,
        })
    }

    /// Build from rows of ascending signed coefficient lists.
    pub fn from_signed(field: PrimeField, rows: &[Vec<Vec<i64>>]) -> Result<PolyMatrix> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|cs| Poly::from_signed(field, cs)).collect())
            .collect();
        PolyMatrix::from_rows(field, rows)
    }

    /// Embed a constant matrix.
    pub fn from_const(c: &FpMatrix) -> PolyMatrix {
        let field = c.field();
        let entries = (0..c.rows())
            .flat_map(|i| (0..c.cols()).map(move |j| (i, j)))
            .map(|(i, j)| Poly::constant(field, c.get(i, j)))
            .collect();
        PolyMatrix {
            rows: c.rows(),
            cols: c.cols(),
            entries,
            field,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert_eq!(p.field(), self.field, "entry field must match matrix field");
        self.entries[i * self.cols + j] = p;
    }

    /// The `i`-th row as a slice.
    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Rows as owned vectors, for elimination-style algorithms.
    pub(crate) fn to_row_vecs(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(|p| p.is_zero())
    }

    /// Max degree over all entries, `-inf` for a zero matrix.
    pub fn degree(&self) -> Degree {
        self.entries
            .iter()
            .map(|p| p.degree())
            .max()
            .unwrap_or(Degree::NegInf)
    }

    /// Plain row degrees.
    pub fn rdeg(&self) -> Vec<Degree> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|p| p.degree())
                    .max()
                    .unwrap_or(Degree::NegInf)
            })
            .collect()
    }

    /// Shifted row degrees: per row, `max_j deg(F[i,j]) + s[j]`.
    pub fn rdeg_shifted(&self, s: &Shift) -> Result<Vec<Degree>> {
        s.check_len(self.cols)?;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .map(|(j, p)| p.degree().add_const(s.get(j)))
                    .max()
                    .unwrap_or(Degree::NegInf)
            })
            .collect())
    }

    /// Column degrees.
    pub fn cdeg(&self) -> Vec<Degree> {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .map(|i| self.entry(i, j).degree())
                    .max()
                    .unwrap_or(Degree::NegInf)
            })
            .collect()
    }

    /// The shifted leading matrix: entry `(i,j)` is the coefficient of
    /// degree `rdeg_s(row i) - s[j]` of `F[i,j]`.
    pub fn leading_matrix_shifted(&self, s: &Shift) -> Result<FpMatrix> {
        s.check_len(self.cols)?;
        let rdegs = self.rdeg_shifted(s)?;
        let mut out = FpMatrix::zeros(self.field, self.rows, self.cols);
        for (i, rdeg) in rdegs.iter().enumerate() {
            let Degree::Fin(rd) = *rdeg else {
                return Err(Error::ZeroRow);
            };
            for j in 0..self.cols {
                let target = rd - s.get(j);
                if target >= 0 {
                    out.set(i, j, self.entry(i, j).coeff_u64(target as usize));
                }
            }
        }
        Ok(out)
    }

    /// Shifted pivot profile: per row the largest index attaining the
    /// shifted row degree, with pivot degree and row degree.
    pub fn pivot_profile(&self, s: &Shift) -> Result<PivotProfile> {
        s.check_len(self.cols)?;
        Ok(PivotProfile {
            rows: (0..self.rows).map(|i| row_pivot(self.row(i), s)).collect(),
        })
    }

    /// Row reduced under `s`: no zero rows and full-rank shifted leading
    /// matrix.
    pub fn is_reduced(&self, s: &Shift) -> bool {
        match self.leading_matrix_shifted(s) {
            Ok(lm) => lm.rank() == self.rows,
            Err(_) => false,
        }
    }

    /// Weak Popov under `s`: no zero rows, pairwise distinct pivot indices.
    pub fn is_weak_popov(&self, s: &Shift) -> bool {
        let Ok(profile) = self.pivot_profile(s) else {
            return false;
        };
        let mut seen = vec![false; self.cols];
        for r in &profile.rows {
            match r.index {
                None => return false,
                Some(j) => {
                    if seen[j] {
                        return false;
                    }
                    seen[j] = true;
                }
            }
        }
        true
    }

    /// Ordered weak Popov under `s`: pivot indices strictly increasing.
    pub fn is_ordered_weak_popov(&self, s: &Shift) -> bool {
        let Ok(profile) = self.pivot_profile(s) else {
            return false;
        };
        let mut prev: Option<usize> = None;
        for r in &profile.rows {
            match r.index {
                None => return false,
                Some(j) => {
                    if prev.is_some_and(|p| p >= j) {
                        return false;
                    }
                    prev = Some(j);
                }
            }
        }
        true
    }

    /// Popov under `s`: ordered weak Popov, monic pivots, and within each
    /// pivot column every other entry has degree below the pivot degree.
    pub fn is_popov(&self, s: &Shift) -> bool {
        if !self.is_ordered_weak_popov(s) {
            return false;
        }
        let profile = self.pivot_profile(s).expect("checked above");
        for (i, r) in profile.rows.iter().enumerate() {
            let j = r.index.expect("no zero rows here");
            if !self.entry(i, j).is_monic() {
                return false;
            }
            for k in 0..self.rows {
                if k != i && self.entry(k, j).degree() >= r.degree {
                    return false;
                }
            }
        }
        true
    }

    /// Hermite form predicate (shift-independent): echelon column indices
    /// strictly increasing, monic pivots, entries above the pivot of lower
    /// degree.
    pub fn is_hermite(&self) -> bool {
        let mut prev: Option<usize> = None;
        for i in 0..self.rows {
            let Some(j) = (0..self.cols).find(|&j| !self.entry(i, j).is_zero()) else {
                return false;
            };
            if prev.is_some_and(|p| p >= j) {
                return false;
            }
            prev = Some(j);
            if !self.entry(i, j).is_monic() {
                return false;
            }
            let d = self.entry(i, j).degree();
            for k in 0..i {
                if self.entry(k, j).degree() >= d {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        self.mul_inner(rhs, None)
    }

    /// Product with every entry reduced mod `x^k`.
    pub fn mul_trunc(&self, rhs: &PolyMatrix, k: usize) -> Result<PolyMatrix> {
        self.mul_inner(rhs, Some(k))
    }

    fn mul_inner(&self, rhs: &PolyMatrix, trunc: Option<usize>) -> Result<PolyMatrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = PolyMatrix::zero(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Poly::zero(self.field);
                for k in 0..self.cols {
                    let a = self.entry(i, k);
                    let b = rhs.entry(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let term = match trunc {
                        Some(t) => a.mul_trunc_raw(b, t),
                        None => a.mul_raw(b),
                    };
                    acc = acc.add_raw(&term);
                }
                if let Some(t) = trunc {
                    acc = acc.truncate(t);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(
                "sum of differently shaped matrices".into(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.add_raw(b))
            .collect();
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
            field: self.field,
        })
    }

    pub fn sub(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(
                "difference of differently shaped matrices".into(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.sub_raw(b))
            .collect();
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
            field: self.field,
        })
    }

    /// Every entry reduced mod `x^k`.
    pub fn truncate(&self, k: usize) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.truncate(k)).collect(),
            field: self.field,
        }
    }

    /// The constant coefficient matrix `M(0)`.
    pub fn constant_term(&self) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.entry(i, j).coeff_u64(0));
            }
        }
        out
    }

    /// Evaluate every entry at a point.
    pub fn eval(&self, x: FieldElement) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.entry(i, j).eval(x).value());
            }
        }
        out
    }

    /// Truncated inverse by Newton iteration: the unique `V` with
    /// `U*V = I mod x^k`, requiring `U(0)` invertible.
    pub fn truncated_inverse(&self, k: usize) -> Result<PolyMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let inv0 = self.constant_term().inverse().map_err(|e| match e {
            Error::Singular => Error::ConstantTermSingular,
            other => other,
        })?;
        if k == 0 {
            return Ok(PolyMatrix::zero(self.field, self.rows, self.cols));
        }
        let mut x = PolyMatrix::from_const(&inv0);
        let mut prec = 1usize;
        let two_i = {
            let mut m = PolyMatrix::zero(self.field, self.rows, self.cols);
            let two = Poly::constant(self.field, 2);
            for i in 0..self.rows {
                m.set(i, i, two.clone());
            }
            m
        };
        while prec < k {
            prec *= 2;
            // X <- X(2I - UX) mod x^prec doubles the precision each round.
            let ux = self.mul_trunc(&x, prec)?;
            let corr = two_i.sub(&ux)?;
            x = x.mul_trunc(&corr, prec)?;
        }
        Ok(x.truncate(k))
    }

    /// Column selection in the order given by `J`.
    pub fn columns(&self, j: &ColumnSet) -> Result<PolyMatrix> {
        j.check_bounds(self.cols)?;
        let mut out = PolyMatrix::zero(self.field, self.rows, j.len());
        for i in 0..self.rows {
            for (k, col) in j.iter().enumerate() {
                out.set(i, k, self.entry(i, col).clone());
            }
        }
        Ok(out)
    }

    /// Row selection (indices need not be increasing).
    pub fn select_rows(&self, idx: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zero(self.field, idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out.set(k, j, self.entry(i, j).clone());
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn stack(&self, bottom: &PolyMatrix) -> Result<PolyMatrix> {
        if self.field != bottom.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != bottom.cols {
            return Err(Error::Dimension(
                "stack with different column counts".into(),
            ));
        }
        let mut entries = self.entries.clone();
        entries.extend(bottom.entries.iter().cloned());
        Ok(PolyMatrix {
            rows: self.rows + bottom.rows,
            cols: self.cols,
            entries,
            field: self.field,
        })
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, right: &PolyMatrix) -> Result<PolyMatrix> {
        if self.field != right.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != right.rows {
            return Err(Error::Dimension("hstack with different row counts".into()));
        }
        let mut out = PolyMatrix::zero(self.field, self.rows, self.cols + right.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.entry(i, j).clone());
            }
            for j in 0..right.cols {
                out.set(i, self.cols + j, right.entry(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.entry(i, j).clone());
            }
        }
        out
    }
}
