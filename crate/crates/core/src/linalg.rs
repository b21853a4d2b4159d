//! Exact rational linear algebra: row reduction, affine solution sets and
//! the canonical form used to compare flats.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
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

    /// Builds a matrix with `cols` columns from a list of rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n_rows = rows.len();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::input(alloc::format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(RationalMatrix {
            rows: n_rows,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
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

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduces in place to reduced row echelon form and returns the pivot
    /// columns. Zero rows end up at the bottom.
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = &self[(i, j)] - &factor * &self[(r, j)];
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn truncate_rows(&mut self, rows: usize) {
        self.rows = rows;
        self.data.truncate(rows * self.cols);
    }
}

impl core::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(&rational::format(v))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Reduced row echelon form of `m` together with its rank.
pub fn rref_rank(m: &RationalMatrix) -> (RationalMatrix, usize) {
    let mut r = m.clone();
    let rank = r.reduce().len();
    (r, rank)
}

/// A nonempty affine subspace `{x : system * x = rhs}` of `Q^n`, stored with
/// `[system | rhs]` in reduced row echelon form without zero rows. Two
/// subspaces are equal exactly when these canonical forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineSubspace {
    ambient_dim: usize,
    system: RationalMatrix,
    rhs: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatRelation {
    Equal,
    /// The first flat strictly contains the second.
    FirstContainsSecond,
    /// The second flat strictly contains the first.
    SecondContainsFirst,
    Incomparable,
}

/// Solves `system * x = rhs`; `None` when the system is inconsistent.
pub fn solve_affine(system: &RationalMatrix, rhs: &[Rational]) -> Result<Option<AffineSubspace>> {
    if rhs.len() != system.rows() {
        return Err(Error::input(alloc::format!(
            "system has {} rows but right-hand side has {} entries",
            system.rows(),
            rhs.len()
        )));
    }
    let n = system.cols();
    let mut aug = RationalMatrix::zeros(system.rows(), n + 1);
    for i in 0..system.rows() {
        for j in 0..n {
            aug[(i, j)] = system[(i, j)].clone();
        }
        aug[(i, n)] = rhs[i].clone();
    }
    let pivots = aug.reduce();
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let k = pivots.len();
    aug.truncate_rows(k);
    let mut sys = RationalMatrix::zeros(k, n);
    let mut b = Vec::with_capacity(k);
    for i in 0..k {
        for j in 0..n {
            sys[(i, j)] = aug[(i, j)].clone();
        }
        b.push(aug[(i, n)].clone());
    }
    Ok(Some(AffineSubspace {
        ambient_dim: n,
        system: sys,
        rhs: b,
    }))
}

/// Intersection of two flats in the same ambient space; `None` when disjoint.
pub fn intersect_flats(f1: &AffineSubspace, f2: &AffineSubspace) -> Result<Option<AffineSubspace>> {
    check_same_ambient(f1, f2)?;
    let n = f1.ambient_dim;
    let rows: Vec<Vec<Rational>> = f1
        .system
        .row_iter()
        .chain(f2.system.row_iter())
        .map(<[Rational]>::to_vec)
        .collect();
    let system = RationalMatrix::from_rows(n, rows)?;
    let rhs: Vec<Rational> = f1.rhs.iter().chain(f2.rhs.iter()).cloned().collect();
    solve_affine(&system, &rhs)
}

/// Exact containment classification of two nonempty flats.
pub fn flat_relation(f1: &AffineSubspace, f2: &AffineSubspace) -> Result<FlatRelation> {
    check_same_ambient(f1, f2)?;
    if f1 == f2 {
        return Ok(FlatRelation::Equal);
    }
    let meet = intersect_flats(f1, f2)?;
    Ok(match meet {
        Some(ref m) if m == f2 => FlatRelation::FirstContainsSecond,
        Some(ref m) if m == f1 => FlatRelation::SecondContainsFirst,
        _ => FlatRelation::Incomparable,
    })
}

fn check_same_ambient(f1: &AffineSubspace, f2: &AffineSubspace) -> Result<()> {
    if f1.ambient_dim != f2.ambient_dim {
        return Err(Error::input(alloc::format!(
            "ambient dimensions differ: {} vs {}",
            f1.ambient_dim,
            f2.ambient_dim
        )));
    }
    Ok(())
}

impl AffineSubspace {
    /// The whole space `Q^n`.
    pub fn whole(n: usize) -> Self {
        AffineSubspace {
            ambient_dim: n,
            system: RationalMatrix::zeros(0, n),
            rhs: Vec::new(),
        }
    }

    /// The hyperplane `normal . x = offset`; `None` if `normal` is zero.
    pub fn hyperplane(normal: &[Rational], offset: &Rational) -> Option<Self> {
        let system = RationalMatrix::from_rows(normal.len(), vec![normal.to_vec()]).ok()?;
        match solve_affine(&system, core::slice::from_ref(offset)) {
            Ok(Some(s)) if s.codim() == 1 => Some(s),
            _ => None,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim - self.system.rows()
    }

    pub fn codim(&self) -> usize {
        self.system.rows()
    }

    pub fn system(&self) -> &RationalMatrix {
        &self.system
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        x.len() == self.ambient_dim
            && self
                .system
                .row_iter()
                .zip(&self.rhs)
                .all(|(row, b)| dot(row, x) == *b)
    }

    /// True when `self ⊇ other`.
    pub fn contains(&self, other: &AffineSubspace) -> bool {
        matches!(
            flat_relation(self, other),
            Ok(FlatRelation::Equal | FlatRelation::FirstContainsSecond)
        )
    }

    fn pivots(&self) -> Vec<usize> {
        self.system
            .row_iter()
            .map(|row| row.iter().position(|v| !v.is_zero()).expect("canonical rows are nonzero"))
            .collect()
    }

    /// The point obtained by setting every free coordinate to zero.
    pub fn base_point(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.ambient_dim];
        for (p, b) in self.pivots().into_iter().zip(&self.rhs) {
            x[p] = b.clone();
        }
        x
    }

    /// Coordinates on the subspace given by its free (non-pivot) variables.
    pub fn chart(&self) -> AffineChart<'_> {
        let pivots = self.pivots();
        let free = (0..self.ambient_dim).filter(|j| !pivots.contains(j)).collect();
        AffineChart {
            flat: self,
            pivots,
            free,
        }
    }
}

impl fmt::Display for AffineSubspace {
    /// `C^n` for the whole space, else the defining equations in braces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.system.rows() == 0 {
            return write!(f, "C^{}", self.ambient_dim);
        }
        f.write_str("{")?;
        for (i, (row, b)) in self.system.row_iter().zip(&self.rhs).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            crate::arrangement::write_equation(f, row, b)?;
        }
        f.write_str("}")
    }
}

/// Affine coordinates on a flat obtained by eliminating its pivot variables.
/// The chart is determined by the canonical form, so it is reproducible.
#[derive(Debug)]
pub struct AffineChart<'a> {
    flat: &'a AffineSubspace,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl AffineChart<'_> {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Rewrites the equation `normal . x = offset` in chart coordinates.
    pub fn pull_back(&self, normal: &[Rational], offset: &Rational) -> (Vec<Rational>, Rational) {
        let sys = &self.flat.system;
        let coeffs = self
            .free
            .iter()
            .map(|&f| {
                let mut c = normal[f].clone();
                for (r, &p) in self.pivots.iter().enumerate() {
                    c -= &normal[p] * &sys[(r, f)];
                }
                c
            })
            .collect();
        let mut rhs = offset.clone();
        for (r, &p) in self.pivots.iter().enumerate() {
            rhs -= &normal[p] * &self.flat.rhs[r];
        }
        (coeffs, rhs)
    }

    /// Ambient point with the given chart coordinates.
    pub fn embed(&self, coords: &[Rational]) -> Vec<Rational> {
        let sys = &self.flat.system;
        let mut x = vec![Rational::zero(); self.flat.ambient_dim];
        for (&f, c) in self.free.iter().zip(coords) {
            x[f] = c.clone();
        }
        for (r, &p) in self.pivots.iter().enumerate() {
            let mut v = self.flat.rhs[r].clone();
            for (&f, c) in self.free.iter().zip(coords) {
                v -= &sys[(r, f)] * c;
            }
            x[p] = v;
        }
        x
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}
