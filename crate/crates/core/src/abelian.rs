//! Integer matrices, Smith and Hermite normal forms, and finitely generated
//! abelian groups presented as `Z^n / (column span of a relation matrix)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, Vector};

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from small integer rows. Panics on ragged input.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let vecs: Vec<Vector> = rows.iter().map(|r| lattice::vector(r)).collect();
        Self::from_rows(rows.len(), rows.first().map_or(0, Vec::len), &vecs)
            .expect("ragged matrix literal")
    }

    pub fn from_rows(nrows: usize, ncols: usize, rows: &[Vector]) -> Result<Self> {
        if rows.len() != nrows {
            return Err(Error::DimensionMismatch {
                expected: nrows,
                found: rows.len(),
            });
        }
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    found: r.len(),
                });
            }
            entries.extend(r.iter().cloned());
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    /// Matrix whose columns are the given vectors, each of length `nrows`.
    pub fn from_columns(nrows: usize, columns: &[Vector]) -> Result<Self> {
        let mut m = Self::zeros(nrows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != nrows {
                return Err(Error::DimensionMismatch {
                    expected: nrows,
                    found: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vector {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| lattice::dot(&self.entries[i * self.cols..(i + 1) * self.cols], v))
            .collect())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * a[n - 1][n - 1].clone())
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square()
            && self
                .determinant()
                .map(|d| d.abs().is_one())
                .unwrap_or(false)
    }

    /// Exact inverse of a unimodular matrix; `None` if the matrix is singular
    /// or its inverse is not integral.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let inv = QMatrix::from_int(self).inverse()?;
        inv.to_integral()
    }

    pub fn rank(&self) -> usize {
        QMatrix::from_int(self).rank()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut cols = self.columns();
        cols.extend(other.columns());
        IntMatrix::from_columns(self.rows, &cols)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += c * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.entries[source * self.cols + j] * c;
            self.entries[target * self.cols + j] += s;
        }
    }

    /// col[target] += c * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.entries[i * self.cols + source] * c;
            self.entries[i * self.cols + target] += s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let e = &mut self.entries[i * self.cols + j];
            *e = -std::mem::take(e);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

/// Dense rational matrix used for ranks, inverses and rational solves.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<BigRational>>,
}

impl QMatrix {
    pub fn from_int(m: &IntMatrix) -> Self {
        let data = (0..m.rows)
            .map(|i| lattice::to_q(&m.row(i)))
            .collect();
        Self {
            rows: m.rows,
            cols: m.cols,
            data,
        }
    }

    /// Reduced row echelon form; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = self.data[r][c].recip();
            for x in self.data[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..self.rows {
                if i != r && !self.data[i][c].is_zero() {
                    let f = self.data[i][c].clone();
                    for j in 0..self.cols {
                        let s = &f * &self.data[r][j];
                        self.data[i][j] -= s;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = QMatrix {
            rows: n,
            cols: 2 * n,
            data: self
                .data
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut r = row.clone();
                    r.extend((0..n).map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    }));
                    r
                })
                .collect(),
        };
        let pivots = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        Some(QMatrix {
            rows: n,
            cols: n,
            data: aug.data.into_iter().map(|r| r[n..].to_vec()).collect(),
        })
    }

    pub fn to_integral(&self) -> Option<IntMatrix> {
        let rows: Option<Vec<Vector>> = self.data.iter().map(|r| lattice::to_integral(r)).collect();
        IntMatrix::from_rows(self.rows, self.cols, &rows?).ok()
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.data
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// One solution of `self * x = b` over the rationals, if any.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        let mut aug = QMatrix {
            rows: self.rows,
            cols: self.cols + 1,
            data: self
                .data
                .iter()
                .zip(b)
                .map(|(r, bi)| {
                    let mut row = r.clone();
                    row.push(bi.clone());
                    row
                })
                .collect(),
        };
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.data[r][self.cols].clone();
        }
        Some(x)
    }
}

/// `U * original * V = D` with `U`, `V` unimodular and `D` diagonal with a
/// divisibility chain of nonnegative entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub original: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }

    /// Checks every structural invariant; used heavily by tests.
    pub fn check(&self) -> Result<()> {
        let prod = self.u.mul(&self.original)?.mul(&self.v)?;
        if prod != self.d {
            return Err(Error::InvariantViolation("U*A*V != D".into()));
        }
        if !self.u.is_unimodular() || !self.v.is_unimodular() {
            return Err(Error::InvariantViolation("U or V not unimodular".into()));
        }
        for i in 0..self.d.rows {
            for j in 0..self.d.cols {
                if i != j && !self.d[(i, j)].is_zero() {
                    return Err(Error::InvariantViolation("D not diagonal".into()));
                }
            }
        }
        let k = self.d.rows.min(self.d.cols);
        for i in 0..k {
            let di = &self.d[(i, i)];
            if di.is_negative() {
                return Err(Error::InvariantViolation("negative diagonal".into()));
            }
            if i + 1 < k {
                let next = &self.d[(i + 1, i + 1)];
                let divides = if di.is_zero() {
                    next.is_zero()
                } else {
                    (next % di).is_zero()
                };
                if !divides {
                    return Err(Error::InvariantViolation("divisibility chain broken".into()));
                }
            }
        }
        Ok(())
    }
}

fn find_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => x.abs().cmp(&d[b].abs()) == Ordering::Less,
            };
            if better {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smith normal form with the pivot rule "smallest nonzero absolute value,
/// then first in row-major order", so output is reproducible.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = find_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                let bad = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !(&d[(i, j)] % &d[(t, t)]).is_zero())
                });
                match bad {
                    None => break,
                    Some(i) => {
                        let one = BigInt::one();
                        d.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                    }
                }
            }
            let (pi, pj) = find_pivot(&d, t).expect("pivot row is nonzero");
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithDecomposition {
        u,
        d,
        v,
        original: m.clone(),
    }
}

/// Row-style Hermite normal form: returns `(H, T)` with `T` unimodular,
/// `T * m = H`, `H` in row echelon form with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`. Zero rows sink to the bottom.
pub fn row_hermite(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut t = IntMatrix::identity(m.rows);
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            // Smallest nonzero entry in column c at or below row r.
            let p = (r..m.rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
            let Some(p) = p else { break };
            h.swap_rows(r, p);
            t.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m.rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                t.add_row_multiple(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            t.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            t.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, t)
}

/// A finitely generated abelian group `Z^free_rank + sum Z/d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Order when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.invariant_factors.iter().product())
    }

    pub fn check(&self) -> Result<()> {
        for w in self.invariant_factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::InvariantViolation("invariant factors do not divide".into()));
            }
        }
        if self.invariant_factors.iter().any(|d| *d <= BigInt::one()) {
            return Err(Error::InvariantViolation("invariant factor <= 1".into()));
        }
        Ok(())
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Element of a presented quotient in canonical form: free coordinates in the
/// (Hermite-normalized) Smith basis and torsion coordinates reduced into
/// `[0, d_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuotientElement {
    pub free: Vector,
    pub torsion: Vector,
}

impl QuotientElement {
    pub fn is_zero(&self) -> bool {
        lattice::is_zero(&self.free) && lattice::is_zero(&self.torsion)
    }
}

impl fmt::Display for QuotientElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free: Vec<String> = self.free.iter().map(ToString::to_string).collect();
        write!(f, "{}", free.join(","))?;
        if !self.torsion.is_empty() {
            let tor: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
            write!(f, "|{}", tor.join(","))?;
        }
        Ok(())
    }
}

/// `Z^ambient_rank / column-span(relations)` with a class map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientPresentation {
    pub ambient_rank: usize,
    pub relations: IntMatrix,
    pub smith: SmithDecomposition,
    pub quotient: FgAbelianGroup,
    /// `U` with its free rows replaced by their Hermite form.
    class_rows: IntMatrix,
    class_rows_inverse: IntMatrix,
    /// Indices `i < rank` with `d_i > 1`.
    torsion_rows: Vec<usize>,
    rank: usize,
}

/// Presents `Z^ambient_rank` modulo the columns of `relations`.
pub fn quotient_group(ambient_rank: usize, relations: &IntMatrix) -> Result<QuotientPresentation> {
    if relations.rows() != ambient_rank {
        return Err(Error::DimensionMismatch {
            expected: ambient_rank,
            found: relations.rows(),
        });
    }
    let smith = smith_normal_form(relations);
    let diag = smith.diagonal();
    let rank = diag.len();
    let torsion_rows: Vec<usize> = (0..rank).filter(|&i| !diag[i].is_one()).collect();

    // Normalize the free block so the class map does not depend on incidental
    // sign and basis choices made during elimination.
    let free_rows: Vec<Vector> = (rank..ambient_rank).map(|i| smith.u.row(i)).collect();
    let free = IntMatrix::from_rows(ambient_rank - rank, ambient_rank, &free_rows)?;
    let (hermite, _) = row_hermite(&free);
    let mut all_rows: Vec<Vector> = (0..rank).map(|i| smith.u.row(i)).collect();
    all_rows.extend(hermite.to_rows());
    let class_rows = IntMatrix::from_rows(ambient_rank, ambient_rank, &all_rows)?;
    let class_rows_inverse = class_rows
        .inverse_unimodular()
        .ok_or_else(|| Error::InvariantViolation("class basis is not unimodular".into()))?;

    let quotient = FgAbelianGroup {
        free_rank: ambient_rank - rank,
        invariant_factors: torsion_rows.iter().map(|&i| diag[i].clone()).collect(),
    };
    Ok(QuotientPresentation {
        ambient_rank,
        relations: relations.clone(),
        smith,
        quotient,
        class_rows,
        class_rows_inverse,
        torsion_rows,
        rank,
    })
}

impl QuotientPresentation {
    pub fn free_rank(&self) -> usize {
        self.quotient.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.quotient.invariant_factors
    }

    pub fn zero(&self) -> QuotientElement {
        QuotientElement {
            free: lattice::zero(self.quotient.free_rank),
            torsion: lattice::zero(self.torsion_rows.len()),
        }
    }

    /// Canonical class of a lattice element.
    pub fn class_of(&self, v: &[BigInt]) -> Result<QuotientElement> {
        let y = self.class_rows.mul_vec(v)?;
        let torsion = self
            .torsion_rows
            .iter()
            .zip(&self.quotient.invariant_factors)
            .map(|(&i, d)| y[i].mod_floor(d))
            .collect();
        Ok(QuotientElement {
            free: y[self.rank..].to_vec(),
            torsion,
        })
    }

    /// A lattice element in the given class.
    pub fn lift(&self, e: &QuotientElement) -> Result<Vector> {
        self.check_element(e)?;
        let mut y = lattice::zero(self.ambient_rank);
        for (k, &i) in self.torsion_rows.iter().enumerate() {
            y[i] = e.torsion[k].clone();
        }
        for (k, x) in e.free.iter().enumerate() {
            y[self.rank + k] = x.clone();
        }
        self.class_rows_inverse.mul_vec(&y)
    }

    /// Builds an element from raw coordinates, reducing torsion.
    pub fn element(&self, free: Vector, torsion: Vector) -> Result<QuotientElement> {
        if free.len() != self.quotient.free_rank {
            return Err(Error::DimensionMismatch {
                expected: self.quotient.free_rank,
                found: free.len(),
            });
        }
        if torsion.len() != self.torsion_rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.torsion_rows.len(),
                found: torsion.len(),
            });
        }
        let torsion = torsion
            .iter()
            .zip(&self.quotient.invariant_factors)
            .map(|(t, d)| t.mod_floor(d))
            .collect();
        Ok(QuotientElement { free, torsion })
    }

    fn check_element(&self, e: &QuotientElement) -> Result<()> {
        if e.free.len() != self.quotient.free_rank || e.torsion.len() != self.torsion_rows.len() {
            return Err(Error::DimensionMismatch {
                expected: self.quotient.free_rank + self.torsion_rows.len(),
                found: e.free.len() + e.torsion.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &QuotientElement, b: &QuotientElement) -> Result<QuotientElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        self.element(
            lattice::add(&a.free, &b.free),
            lattice::add(&a.torsion, &b.torsion),
        )
    }

    pub fn neg(&self, a: &QuotientElement) -> Result<QuotientElement> {
        self.check_element(a)?;
        self.element(lattice::neg(&a.free), lattice::neg(&a.torsion))
    }

    pub fn sub(&self, a: &QuotientElement, b: &QuotientElement) -> Result<QuotientElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn scale(&self, c: &BigInt, a: &QuotientElement) -> Result<QuotientElement> {
        self.check_element(a)?;
        self.element(lattice::scale(c, &a.free), lattice::scale(c, &a.torsion))
    }

    /// The free-coordinate functional rows (one per free coordinate).
    pub fn free_rows(&self) -> Vec<Vector> {
        (self.rank..self.ambient_rank)
            .map(|i| self.class_rows.row(i))
            .collect()
    }
}

/// One integer solution of `a * x = b`, if any exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vector>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let s = smith_normal_form(a);
    let y = s.u.mul_vec(b)?;
    let diag = s.diagonal();
    let mut z = lattice::zero(a.cols());
    for (i, yi) in y.iter().enumerate() {
        if i < diag.len() {
            let (q, r) = yi.div_rem(&diag[i]);
            if !r.is_zero() {
                return Ok(None);
            }
            z[i] = q;
        } else if !yi.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(s.v.mul_vec(&z)?))
}

/// Integer coordinates of `v` in the span of linearly independent `basis`.
pub fn membership_and_coordinates(basis: &[Vector], v: &[BigInt]) -> Result<Option<Vector>> {
    let n = v.len();
    let m = IntMatrix::from_columns(n, basis)?;
    if m.rank() < basis.len() {
        return Err(Error::DependentBasis);
    }
    solve_integer(&m, v)
}

/// A basis (as columns) of the integer kernel `{x : a x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(a);
    let r = s.rank();
    let cols: Vec<Vector> = (r..a.cols()).map(|j| s.v.column(j)).collect();
    IntMatrix::from_columns(a.cols(), &cols).expect("kernel columns have matching length")
}

/// Whether two families of vectors in `Z^n` span the same sublattice.
pub fn same_lattice(n: usize, a: &[Vector], b: &[Vector]) -> Result<bool> {
    let ma = IntMatrix::from_columns(n, a)?;
    let mb = IntMatrix::from_columns(n, b)?;
    for v in b {
        if solve_integer(&ma, v)?.is_none() {
            return Ok(false);
        }
    }
    for v in a {
        if solve_integer(&mb, v)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vector;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn smith_of_identity_is_identity() {
        let s = smith_normal_form(&IntMatrix::identity(2));
        s.check().unwrap();
        assert_eq!(s.d, IntMatrix::identity(2));
    }

    #[test]
    fn smith_of_two_four_six_eight() {
        let s = smith_normal_form(&m(&[vec![2, 4], vec![6, 8]]));
        s.check().unwrap();
        assert_eq!(s.d, m(&[vec![2, 0], vec![0, 4]]));
    }

    #[test]
    fn smith_of_zero_matrix() {
        let s = smith_normal_form(&IntMatrix::zeros(3, 2));
        s.check().unwrap();
        assert_eq!(s.d, IntMatrix::zeros(3, 2));
    }

    #[test]
    fn smith_is_deterministic() {
        let a = m(&[vec![4, -6, 2], vec![3, 9, -12]]);
        assert_eq!(smith_normal_form(&a), smith_normal_form(&a));
    }

    #[test]
    fn quotient_by_antidiagonal() {
        let q = quotient_group(2, &m(&[vec![1], vec![-1]])).unwrap();
        assert_eq!(q.quotient, FgAbelianGroup { free_rank: 1, invariant_factors: vec![] });
        // The free coordinate is a+b.
        assert_eq!(q.class_of(&vector(&[3, 1])).unwrap().free, vector(&[4]));
        assert!(q.class_of(&vector(&[1, -1])).unwrap().is_zero());
    }

    #[test]
    fn quotient_by_two() {
        let q = quotient_group(1, &m(&[vec![2]])).unwrap();
        assert_eq!(q.quotient.free_rank, 0);
        assert_eq!(q.quotient.invariant_factors, vector(&[2]));
        let c = q.class_of(&vector(&[5])).unwrap();
        assert_eq!(c.torsion, vector(&[1]));
        assert_eq!(q.quotient.order(), Some(BigInt::from(2)));
    }

    #[test]
    fn quotient_without_relations() {
        let q = quotient_group(3, &IntMatrix::zeros(3, 0)).unwrap();
        assert_eq!(q.quotient.free_rank, 3);
        assert_eq!(q.class_of(&vector(&[1, 2, 3])).unwrap().free, vector(&[1, 2, 3]));
    }

    #[test]
    fn quotient_dimension_mismatch() {
        assert!(matches!(
            quotient_group(3, &m(&[vec![1], vec![2]])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn membership_examples() {
        let basis = vec![vector(&[2, 0]), vector(&[0, 3])];
        assert_eq!(
            membership_and_coordinates(&basis, &vector(&[4, 3])).unwrap(),
            Some(vector(&[2, 1]))
        );
        assert_eq!(
            membership_and_coordinates(&basis, &vector(&[0, 0])).unwrap(),
            Some(vector(&[0, 0]))
        );
        assert_eq!(
            membership_and_coordinates(&[vector(&[2])], &vector(&[1])).unwrap(),
            None
        );
        assert_eq!(
            membership_and_coordinates(&[vector(&[1, 1]), vector(&[2, 2])], &vector(&[1, 1])),
            Err(Error::DependentBasis)
        );
    }

    #[test]
    fn hermite_rows() {
        let a = m(&[vec![-1, -1], vec![2, 4]]);
        let (h, t) = row_hermite(&a);
        assert_eq!(t.mul(&a).unwrap(), h);
        assert!(t.is_unimodular());
        assert_eq!(h, m(&[vec![1, 1], vec![0, 2]]));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(a.determinant().unwrap(), BigInt::one());
        let inv = a.inverse_unimodular().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        assert!(m(&[vec![2, 0], vec![0, 1]]).inverse_unimodular().is_none());
    }

    #[test]
    fn group_display() {
        let g = FgAbelianGroup { free_rank: 2, invariant_factors: vector(&[2, 6]) };
        assert_eq!(g.to_string(), "Z^2 + Z/2 + Z/6");
        assert_eq!(FgAbelianGroup::trivial().to_string(), "0");
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..=6, r * c).prop_map(move |e| {
                IntMatrix::new(r, c, e.into_iter().map(BigInt::from).collect()).unwrap()
            })
        })
    }

    /// Independent span test for matrices with independent columns: the
    /// rational solution is unique, so membership is integrality.
    fn in_span_rational(a: &IntMatrix, v: &[BigInt]) -> bool {
        let x = QMatrix::from_int(a).solve(&lattice::to_q(v));
        match x {
            None => false,
            Some(x) => x.iter().all(|c| c.is_integer()),
        }
    }

    proptest! {
        #[test]
        fn smith_invariants_hold(a in small_matrix()) {
            let s = smith_normal_form(&a);
            prop_assert!(s.check().is_ok());
        }

        #[test]
        fn class_map_kills_exactly_the_relations(a in small_matrix(), v in proptest::collection::vec(-4i64..=4, 3)) {
            let q = quotient_group(a.rows(), &a).unwrap();
            q.quotient.check().unwrap();
            let v = vector(&v[..a.rows()]);
            let vanishes = q.class_of(&v).unwrap().is_zero();
            prop_assert_eq!(vanishes, solve_integer(&a, &v).unwrap().is_some());
            if a.rank() == a.cols() {
                prop_assert_eq!(vanishes, in_span_rational(&a, &v));
            }
            for col in a.columns() {
                prop_assert!(q.class_of(&col).unwrap().is_zero());
            }
        }

        #[test]
        fn class_map_is_additive_and_lift_is_a_section(a in small_matrix(), x in proptest::collection::vec(-5i64..=5, 3), y in proptest::collection::vec(-5i64..=5, 3)) {
            let q = quotient_group(a.rows(), &a).unwrap();
            let x = vector(&x[..a.rows()]);
            let y = vector(&y[..a.rows()]);
            let cx = q.class_of(&x).unwrap();
            let cy = q.class_of(&y).unwrap();
            prop_assert_eq!(q.class_of(&lattice::add(&x, &y)).unwrap(), q.add(&cx, &cy).unwrap());
            prop_assert_eq!(q.class_of(&q.lift(&cx).unwrap()).unwrap(), cx);
        }

        #[test]
        fn finite_order_matches_coset_count(a in small_matrix()) {
            prop_assume!(a.rows() <= 2 && a.rank() == a.cols());
            let q = quotient_group(a.rows(), &a).unwrap();
            if let Some(order) = q.quotient.order() {
                // A box of side >= N meets every coset of an index-N lattice.
                prop_assume!(order <= BigInt::from(13));
                let n = a.rows();
                let r = 6i64;
                let pts: Vec<Vector> = if n == 1 {
                    (-r..=r).map(|i| vector(&[i])).collect()
                } else {
                    (-r..=r).flat_map(|i| (-r..=r).map(move |j| vector(&[i, j]))).collect()
                };
                let mut reps: Vec<Vector> = Vec::new();
                for p in pts {
                    if !reps.iter().any(|rep| in_span_rational(&a, &lattice::sub(&p, rep))) {
                        reps.push(p);
                    }
                }
                prop_assert_eq!(BigInt::from(reps.len()), order);
            }
        }
    }
}
