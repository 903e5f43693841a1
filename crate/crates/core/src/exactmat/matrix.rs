use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{format_rational, int, is_integer, parse_rational, Rational};
use crate::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer matrix from row-major `i64` entries. Panics on a length mismatch.
    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "from_ints: wrong entry count");
        Self {
            rows,
            cols,
            data: entries.iter().map(|&v| int(v)).collect(),
        }
    }

    pub fn column(entries: Vec<Rational>) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries,
        }
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vec(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
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

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "mul_vec: dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "elementwise op on mismatched shapes"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Copy of the `h x w` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols, "block out of range");
        let mut b = Self::zeros(h, w);
        for i in 0..h {
            for j in 0..w {
                b[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        b
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        assert!(
            r0 + b.rows <= self.rows && c0 + b.cols <= self.cols,
            "set_block out of range"
        );
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    /// Assemble a matrix from a grid of blocks. Block rows must agree in
    /// height and block columns in width.
    pub fn from_blocks(grid: &[Vec<&RatMatrix>]) -> Result<Self> {
        let heights: Vec<usize> = grid.iter().map(|r| r[0].rows).collect();
        let widths: Vec<usize> = grid
            .first()
            .map(|r| r.iter().map(|b| b.cols).collect())
            .unwrap_or_default();
        for (bi, brow) in grid.iter().enumerate() {
            if brow.len() != widths.len() {
                return Err(Error::DimensionMismatch("ragged block grid".into()));
            }
            for (bj, b) in brow.iter().enumerate() {
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return Err(Error::DimensionMismatch(format!(
                        "block ({bi},{bj}) is {}x{}",
                        b.rows, b.cols
                    )));
                }
            }
        }
        let mut out = Self::zeros(heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, brow) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in brow.iter().enumerate() {
                out.set_block(r0, c0, b);
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(is_integer)
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (i..self.cols).all(|j| self[(i, j)] == -self[(j, i)].clone())
            })
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn determinant(&self) -> Result<Rational> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pivot = a[col][col].clone();
            det *= &pivot;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] / &pivot;
                let (top, bottom) = a.split_at_mut(r);
                for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                    *x -= &f * y;
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn invert(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Self::identity(n).to_rows();
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.swap(p, col);
            inv.swap(p, col);
            let pivot = a[col][col].clone();
            for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
                *x /= &pivot;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                let (pa, pi) = (a[col].clone(), inv[col].clone());
                for (x, y) in a[r].iter_mut().zip(&pa) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
                for (x, y) in inv[r].iter_mut().zip(&pi) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        Self::from_rows(inv)
    }

    pub fn rank(&self) -> usize {
        let mut red = RowReducer::new(self.cols);
        for i in 0..self.rows {
            red.insert(self.row(i).to_vec());
        }
        red.rank()
    }

    /// Basis of the right kernel `{v : self * v = 0}` as column vectors.
    pub fn nullspace(&self) -> Vec<RatMatrix> {
        let mut red = RowReducer::new(self.cols);
        for i in 0..self.rows {
            red.insert(self.row(i).to_vec());
        }
        red.nullspace().into_iter().map(RatMatrix::column).collect()
    }
}

/// Incremental reduced row echelon form. Rows are fed one at a time; the
/// reducer keeps only the independent ones, fully reduced against each other.
#[derive(Debug, Clone)]
pub struct RowReducer {
    ncols: usize,
    // (pivot column, row with a 1 in that column and 0 in every other pivot column)
    pivots: Vec<(usize, Vec<Rational>)>,
}

impl RowReducer {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.ncols
    }

    /// Add a row; returns true when it increased the rank.
    pub fn insert(&mut self, mut row: Vec<Rational>) -> bool {
        assert_eq!(row.len(), self.ncols, "RowReducer: row length mismatch");
        if row.iter().all(Zero::is_zero) {
            return false;
        }
        for (pc, prow) in &self.pivots {
            if row[*pc].is_zero() {
                continue;
            }
            let f = row[*pc].clone();
            for (x, y) in row.iter_mut().zip(prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = row[pc].clone();
        for x in row.iter_mut() {
            *x /= &lead;
        }
        for (_, prow) in self.pivots.iter_mut() {
            if prow[pc].is_zero() {
                continue;
            }
            let f = prow[pc].clone();
            for (x, y) in prow.iter_mut().zip(&row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.pivots.push((pc, row));
        true
    }

    /// Kernel basis: one vector per free column, with a 1 in that column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut is_pivot = vec![false; self.ncols];
        for (pc, _) in &self.pivots {
            is_pivot[*pc] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[free] = Rational::one();
                for (pc, prow) in &self.pivots {
                    v[*pc] = -prow[free].clone();
                }
                v
            })
            .collect()
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &RatMatrix {
    type Output = RatMatrix;
    fn neg(self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x.clone()).collect(),
        }
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A rational on the wire: either a string `"p/q"` or a JSON integer.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum RatRepr {
    Int(i64),
    Str(String),
}

impl RatRepr {
    pub(crate) fn parse(&self) -> Result<Rational> {
        match self {
            RatRepr::Int(v) => Ok(int(*v)),
            RatRepr::Str(s) => parse_rational(s),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct RawMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<RatRepr>>,
}

impl TryFrom<RawMatrix> for RatMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        if raw.entries.len() != raw.rows || raw.entries.iter().any(|r| r.len() != raw.cols) {
            return Err(Error::DimensionMismatch(format!(
                "entries do not form a {}x{} grid",
                raw.rows, raw.cols
            )));
        }
        let data = raw
            .entries
            .iter()
            .flatten()
            .map(RatRepr::parse)
            .collect::<Result<Vec<_>>>()?;
        RatMatrix::new(raw.rows, raw.cols, data)
    }
}

impl From<RatMatrix> for RawMatrix {
    fn from(m: RatMatrix) -> Self {
        RawMatrix {
            rows: m.rows,
            cols: m.cols,
            entries: (0..m.rows)
                .map(|i| {
                    m.row(i)
                        .iter()
                        .map(|x| RatRepr::Str(format_rational(x)))
                        .collect()
                })
                .collect(),
        }
    }
}
