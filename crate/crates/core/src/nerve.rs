//! Integer homology of the singular set `Σ(A)`, computed from the nerve of
//! its cover by the hyperplanes.
//!
//! Every nonempty intersection of hyperplanes is an affine subspace, so the
//! cover is good and the nerve has the homology of `Σ(A)`. Nerve simplices
//! are exactly the subsets of the hyperplanes containing some flat, which the
//! intersection poset already lists.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arrangement::{Arrangement, IntersectionPoset};
use crate::error::{Error, Result};

/// A finite abstract simplicial complex on vertices `0..vertex_count`,
/// stored by dimension with each simplex a sorted vertex list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    by_dim: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Face closure of `faces`, keeping only simplices of dimension at most
    /// `max_dim`.
    pub fn from_faces(vertex_count: usize, faces: &[Vec<usize>], max_dim: usize) -> Result<Self> {
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); max_dim + 1];
        for face in faces {
            let mut f = face.clone();
            f.sort_unstable();
            f.dedup();
            if let Some(&v) = f.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::input(alloc::format!("vertex {v} out of range")));
            }
            for size in 1..=f.len().min(max_dim + 1) {
                for_each_subset(&f, size, &mut |s| {
                    sets[size - 1].insert(s.to_vec());
                });
            }
        }
        while sets.len() > 1 && sets.last().is_some_and(BTreeSet::is_empty) {
            sets.pop();
        }
        Ok(SimplicialComplex {
            vertex_count,
            by_dim: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Highest dimension present, `None` when the complex is empty.
    pub fn max_dim(&self) -> Option<usize> {
        match self.by_dim.len() {
            1 if self.by_dim[0].is_empty() => None,
            n => Some(n - 1),
        }
    }

    /// The `k`-simplices in lexicographic order.
    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    /// Matrix of the boundary map from `k`-chains to `(k-1)`-chains.
    fn boundary(&self, k: usize) -> IntMatrix {
        let rows = self.simplices(k - 1);
        let cols = self.simplices(k);
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (j, s) in cols.iter().enumerate() {
            for drop in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
                let i = rows.binary_search(&face).expect("complex is face closed");
                m[(i, j)] = if drop % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            }
        }
        m
    }
}

fn for_each_subset(items: &[usize], size: usize, f: &mut impl FnMut(&[usize])) {
    fn go(items: &[usize], size: usize, start: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if acc.len() == size {
            f(acc);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - acc.len() {
                break;
            }
            acc.push(items[i]);
            go(items, size, i + 1, acc, f);
            acc.pop();
        }
    }
    go(items, size, 0, &mut Vec::with_capacity(size), f);
}

/// Nerve of the cover of `Σ(A)` by the hyperplanes, truncated above
/// dimension `l + 1` so that homology is exact through degree `l`.
pub fn build_singular_nerve(p: &IntersectionPoset) -> Result<SimplicialComplex> {
    if p.hyperplane_count() == 0 {
        return Err(Error::input("the empty arrangement has no singular set to cover"));
    }
    let faces: Vec<Vec<usize>> = p
        .minimal_flats()
        .iter()
        .map(|&g| p.flat(g).containing_hyperplanes().to_vec())
        .collect();
    SimplicialComplex::from_faces(p.hyperplane_count(), &faces, p.rank() + 1)
}

/// Dense integer matrix, the input to [`smith_normal_form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::input("ragged integer matrix"));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src], from column `from` on.
    fn sub_row(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        for j in from..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] -= v;
        }
    }

    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        for i in from..self.rows {
            let v = &self[(i, src)] * q;
            self[(i, dst)] -= v;
        }
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Nonzero invariant factors `d1 | d2 | ... | dr` of an integer matrix.
///
/// Plain elimination over the integers, always pivoting on an entry of
/// least absolute value in the remaining block.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let mut factors = Vec::new();
    for t in 0..a.rows.min(a.cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..a.rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                a.sub_row(i, t, &q, t);
                if !a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..a.cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                a.sub_col(j, t, &q, t);
                if !a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A remainder is smaller than the pivot: bring it in and retry.
                let (pi, pj) = min_abs_in_cross(&a, t);
                a.swap_rows(t, pi);
                a.swap_cols(t, pj);
                continue;
            }
            // Pivot must divide the rest of the block.
            let offending = (t + 1..a.rows)
                .flat_map(|i| (t + 1..a.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&a[(t, t)]));
            match offending {
                Some((i, _)) => {
                    let one = -BigInt::one();
                    a.sub_row(t, i, &one, t);
                }
                None => break,
            }
        }
        factors.push(a[(t, t)].abs());
    }
    factors
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
                if v.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

fn min_abs_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let col = (t..a.rows).map(|i| (i, t));
    let row = (t + 1..a.cols).map(|j| (t, j));
    col.chain(row)
        .filter(|&(i, j)| !a[(i, j)].is_zero())
        .min_by(|&x, &y| a[x].abs().cmp(&a[y].abs()))
        .expect("pivot position is nonzero")
}

/// `H_k`: free rank plus torsion invariant factors greater than one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyResult {
    pub groups: Vec<HomologyGroup>,
}

impl HomologyResult {
    pub fn rank(&self, k: usize) -> usize {
        self.groups.get(k).map_or(0, |g| g.rank)
    }

    /// Free rank of reduced homology in degree `k`.
    pub fn reduced_rank(&self, k: usize) -> usize {
        let r = self.rank(k);
        if k == 0 {
            r.saturating_sub(1)
        } else {
            r
        }
    }

    pub fn is_torsion_free(&self) -> bool {
        self.groups.iter().all(|g| g.torsion.is_empty())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|g| if g.degree % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }
}

/// Integer homology in all dimensions of the complex.
pub fn simplicial_homology(c: &SimplicialComplex) -> Result<HomologyResult> {
    match c.max_dim() {
        None => Ok(HomologyResult { groups: Vec::new() }),
        Some(d) => simplicial_homology_through(c, d),
    }
}

/// Integer homology in degrees `0..=max_degree`.
pub fn simplicial_homology_through(c: &SimplicialComplex, max_degree: usize) -> Result<HomologyResult> {
    // factors[k] = invariant factors of the boundary C_k -> C_{k-1}
    let mut factors: Vec<Vec<BigInt>> = vec![Vec::new()];
    for k in 1..=max_degree + 1 {
        if c.simplices(k).is_empty() || c.simplices(k - 1).is_empty() {
            factors.push(Vec::new());
        } else {
            factors.push(smith_normal_form(&c.boundary(k)));
        }
    }
    let groups = (0..=max_degree)
        .map(|k| {
            let chains = c.simplices(k).len();
            let rank = chains - factors[k].len() - factors[k + 1].len();
            let torsion = factors[k + 1]
                .iter()
                .filter(|d| !d.is_one())
                .map(|d| d.to_u64().ok_or_else(|| Error::internal("torsion coefficient overflows u64")))
                .collect::<Result<Vec<_>>>()?;
            Ok(HomologyGroup { degree: k, rank, torsion })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomologyResult { groups })
}

/// Outcome of checking that `Σ(A)` has the homology of a wedge of
/// `(l-1)`-spheres.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeCheck {
    /// Number of spheres: reduced free rank in degree `l - 1`.
    pub beta: u64,
    /// Reduced homology through degree `l` is torsion free and concentrated
    /// in degree `l - 1`.
    pub is_wedge: bool,
    pub rank: usize,
    pub homology: HomologyResult,
}

pub fn sigma_wedge_check(p: &IntersectionPoset, max_hyperplanes: usize) -> Result<WedgeCheck> {
    Error::check_cap("nerve oracle hyperplane count", max_hyperplanes, p.hyperplane_count())?;
    let nerve = build_singular_nerve(p)?;
    let l = p.rank();
    let homology = simplicial_homology_through(&nerve, l)?;
    let concentrated = (0..=l).all(|k| k + 1 == l || homology.reduced_rank(k) == 0);
    Ok(WedgeCheck {
        beta: homology.reduced_rank(l - 1) as u64,
        is_wedge: concentrated && homology.is_torsion_free(),
        rank: l,
        homology,
    })
}

/// `beta` of an arrangement from nerve homology; 1 for the empty
/// arrangement, whose singular set is empty.
pub fn beta_by_nerve(a: &Arrangement, max_hyperplanes: usize) -> Result<u64> {
    if a.is_empty() {
        return Ok(1);
    }
    let p = IntersectionPoset::build(a, max_hyperplanes)?;
    Ok(sigma_wedge_check(&p, max_hyperplanes)?.beta)
}
