//! Arrangements, their intersection posets, and the derived arrangements
//! attached to a flat: the localization `A_G` and the restriction `A ∩ G`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, AffineSubspace, RationalMatrix};
use crate::rational::{self, Rational};

/// `{x : normal . x = offset}`, scaled so the first nonzero normal entry is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    normal: Vec<Rational>,
    offset: Rational,
}

impl Hyperplane {
    /// Returns `None` for a zero normal.
    pub fn new(mut normal: Vec<Rational>, mut offset: Rational) -> Option<Self> {
        let lead = normal.iter().find(|v| !v.is_zero())?.clone();
        if !lead.is_one() {
            for v in &mut normal {
                *v /= &lead;
            }
            offset /= &lead;
        }
        Some(Hyperplane { normal, offset })
    }

    pub fn normal(&self) -> &[Rational] {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn is_linear(&self) -> bool {
        self.offset.is_zero()
    }

    pub fn subspace(&self) -> AffineSubspace {
        AffineSubspace::hyperplane(&self.normal, &self.offset).expect("normal is nonzero")
    }

    /// True when the flat lies inside this hyperplane.
    pub fn contains(&self, flat: &AffineSubspace) -> bool {
        let (coeffs, rhs) = flat.chart().pull_back(&self.normal, &self.offset);
        rhs.is_zero() && coeffs.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_equation(f, &self.normal, &self.offset)
    }
}

/// Writes `a.x = b` as e.g. `x1 - 2x3 = 1/2`.
pub(crate) fn write_equation(f: &mut fmt::Formatter<'_>, normal: &[Rational], offset: &Rational) -> fmt::Result {
    let mut first = true;
    for (j, c) in normal.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c < &Rational::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        if !abs.is_one() {
            let text = rational::format(&abs);
            if abs.denom().is_one() {
                f.write_str(&text)?;
            } else {
                write!(f, "({text})")?;
            }
        }
        write!(f, "x{}", j + 1)?;
    }
    if first {
        f.write_str("0")?;
    }
    write!(f, " = {}", rational::format(offset))
}

/// A finite set of distinct affine hyperplanes in `C^n`, defined over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrangement {
    ambient_dim: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    /// Validates raw `(normal, offset)` rows: rescales each hyperplane and
    /// rejects zero normals, wrong lengths and duplicates.
    pub fn new(ambient_dim: usize, rows: Vec<(Vec<Rational>, Rational)>) -> Result<Self> {
        let mut hyperplanes: Vec<Hyperplane> = Vec::with_capacity(rows.len());
        for (i, (normal, offset)) in rows.into_iter().enumerate() {
            if normal.len() != ambient_dim {
                return Err(Error::input(format!(
                    "hyperplanes[{i}].normal has {} entries, expected {ambient_dim}",
                    normal.len()
                )));
            }
            let h = Hyperplane::new(normal, offset)
                .ok_or_else(|| Error::input(format!("hyperplanes[{i}].normal is zero")))?;
            if let Some(j) = hyperplanes.iter().position(|g| *g == h) {
                return Err(Error::input(format!("hyperplanes[{i}] duplicates hyperplanes[{j}]")));
            }
            hyperplanes.push(h);
        }
        Ok(Arrangement {
            ambient_dim,
            hyperplanes,
        })
    }

    /// Convenience constructor from integer rows `[a_1, ..., a_n, b]`.
    pub fn from_integer_rows(ambient_dim: usize, rows: &[&[i64]]) -> Result<Self> {
        let raw = rows
            .iter()
            .map(|r| {
                let (b, a) = r.split_last().ok_or_else(|| Error::input("empty row"))?;
                Ok((a.iter().map(|&v| rational::int(v)).collect(), rational::int(*b)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient_dim, raw)
    }

    pub(crate) fn from_hyperplanes(ambient_dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        let raw = hyperplanes.into_iter().map(|h| (h.normal, h.offset)).collect();
        Self::new(ambient_dim, raw)
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Arrangement {
            ambient_dim,
            hyperplanes: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    /// Common intersection of all hyperplanes (`C^n` when empty), or `None`.
    pub fn center(&self) -> Option<AffineSubspace> {
        let rows = self.hyperplanes.iter().map(|h| h.normal.clone()).collect();
        let system = RationalMatrix::from_rows(self.ambient_dim, rows).expect("validated lengths");
        let rhs: Vec<Rational> = self.hyperplanes.iter().map(|h| h.offset.clone()).collect();
        linalg::solve_affine(&system, &rhs).expect("validated lengths")
    }

    pub fn is_central(&self) -> bool {
        self.center().is_some()
    }

    /// The arrangement formed by the hyperplanes at the given indices.
    pub fn select(&self, indices: &[usize]) -> Arrangement {
        Arrangement {
            ambient_dim: self.ambient_dim,
            hyperplanes: indices.iter().map(|&i| self.hyperplanes[i].clone()).collect(),
        }
    }
}

/// Index of a flat inside its [`IntersectionPoset`]. The ambient space is
/// always [`FlatId::TOP`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlatId(pub usize);

impl FlatId {
    pub const TOP: FlatId = FlatId(0);
}

/// An element `G` of the poset together with the hyperplanes containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    subspace: AffineSubspace,
    containing: Vec<usize>,
}

impl Flat {
    pub fn subspace(&self) -> &AffineSubspace {
        &self.subspace
    }

    /// `d(G)`
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    /// `n - d(G)`, the rank of the localization `A_G`.
    pub fn codim(&self) -> usize {
        self.subspace.codim()
    }

    /// Sorted indices of the hyperplanes containing this flat.
    pub fn containing_hyperplanes(&self) -> &[usize] {
        &self.containing
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArrangementStats {
    pub rank: usize,
    pub is_central: bool,
    pub is_essential: bool,
    /// Dimension of a minimal flat.
    pub n0: usize,
}

/// The poset of nonempty intersections of hyperplanes with `C^n` adjoined as
/// top element. Flats are sorted by codimension and then by their containing
/// hyperplane sets, so ids are deterministic.
#[derive(Clone, Debug)]
pub struct IntersectionPoset {
    ambient_dim: usize,
    hyperplane_count: usize,
    flats: Vec<Flat>,
    upper_covers: Vec<Vec<FlatId>>,
    lower_covers: Vec<Vec<FlatId>>,
    minimal: Vec<FlatId>,
    n0: usize,
    by_subspace: BTreeMap<AffineSubspace, FlatId>,
}

impl IntersectionPoset {
    /// Closes `{C^n}` under intersection with single hyperplanes.
    pub fn build(a: &Arrangement, max_hyperplanes: usize) -> Result<Self> {
        Error::check_cap("hyperplane count", max_hyperplanes, a.len())?;
        let n = a.ambient_dim;
        let subspaces: Vec<AffineSubspace> = a.hyperplanes.iter().map(Hyperplane::subspace).collect();

        let mut found: BTreeMap<Vec<usize>, AffineSubspace> = BTreeMap::new();
        found.insert(Vec::new(), AffineSubspace::whole(n));
        let mut queue: Vec<(Vec<usize>, AffineSubspace)> = alloc::vec![(Vec::new(), AffineSubspace::whole(n))];
        while let Some((containing, flat)) = queue.pop() {
            for (i, h) in subspaces.iter().enumerate() {
                if containing.binary_search(&i).is_ok() {
                    continue;
                }
                let Some(meet) = linalg::intersect_flats(&flat, h)? else {
                    continue;
                };
                let key: Vec<usize> = (0..a.len()).filter(|&j| a.hyperplanes[j].contains(&meet)).collect();
                if !found.contains_key(&key) {
                    found.insert(key.clone(), meet.clone());
                    queue.push((key, meet));
                }
            }
        }

        let mut flats: Vec<Flat> = found
            .into_iter()
            .map(|(containing, subspace)| Flat { subspace, containing })
            .collect();
        flats.sort_by(|x, y| (x.codim(), &x.containing).cmp(&(y.codim(), &y.containing)));

        let count = flats.len();
        let mut upper_covers = alloc::vec![Vec::new(); count];
        let mut lower_covers = alloc::vec![Vec::new(); count];
        for (yi, y) in flats.iter().enumerate() {
            for (xi, x) in flats.iter().enumerate() {
                if x.codim() + 1 == y.codim() && is_subset(&x.containing, &y.containing) {
                    upper_covers[yi].push(FlatId(xi));
                    lower_covers[xi].push(FlatId(yi));
                }
            }
        }
        let minimal: Vec<FlatId> = (0..count).filter(|&i| lower_covers[i].is_empty()).map(FlatId).collect();
        let n0 = flats[minimal[0].0].dim();
        if let Some(bad) = minimal.iter().find(|g| flats[g.0].dim() != n0) {
            return Err(Error::internal(format!(
                "minimal flats of different dimensions ({} and {n0})",
                flats[bad.0].dim()
            )));
        }
        let by_subspace = flats.iter().enumerate().map(|(i, f)| (f.subspace.clone(), FlatId(i))).collect();
        Ok(IntersectionPoset {
            ambient_dim: n,
            hyperplane_count: a.len(),
            flats,
            upper_covers,
            lower_covers,
            minimal,
            n0,
            by_subspace,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn hyperplane_count(&self) -> usize {
        self.hyperplane_count
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn ids(&self) -> impl Iterator<Item = FlatId> + '_ {
        (0..self.flats.len()).map(FlatId)
    }

    pub fn flat(&self, g: FlatId) -> &Flat {
        &self.flats[g.0]
    }

    pub fn get(&self, g: FlatId) -> Result<&Flat> {
        self.flats
            .get(g.0)
            .ok_or_else(|| Error::input(format!("flat #{} is not in the poset", g.0)))
    }

    pub fn find(&self, subspace: &AffineSubspace) -> Option<FlatId> {
        self.by_subspace.get(subspace).copied()
    }

    /// Flats covering `g` (one dimension up).
    pub fn upper_covers(&self, g: FlatId) -> &[FlatId] {
        &self.upper_covers[g.0]
    }

    /// Flats covered by `g` (one dimension down).
    pub fn lower_covers(&self, g: FlatId) -> &[FlatId] {
        &self.lower_covers[g.0]
    }

    pub fn minimal_flats(&self) -> &[FlatId] {
        &self.minimal
    }

    /// `x ⊆ y`
    pub fn le(&self, x: FlatId, y: FlatId) -> bool {
        is_subset(&self.flats[y.0].containing, &self.flats[x.0].containing)
    }

    /// Dimension of a minimal flat.
    pub fn n0(&self) -> usize {
        self.n0
    }

    /// `l = n - n0`
    pub fn rank(&self) -> usize {
        self.ambient_dim - self.n0
    }

    /// `l(G) = d(G) - n0`, the rank of the restriction `A ∩ G`.
    pub fn restricted_rank(&self, g: FlatId) -> usize {
        self.flats[g.0].dim() - self.n0
    }

    /// All flats contained in `g`, including `g`, in id order.
    pub fn lower_set(&self, g: FlatId) -> Vec<FlatId> {
        self.ids().filter(|&x| self.le(x, g)).collect()
    }

    pub fn stats(&self) -> ArrangementStats {
        ArrangementStats {
            rank: self.rank(),
            is_central: self.minimal.len() == 1,
            is_essential: self.n0 == 0,
            n0: self.n0,
        }
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| b == s))
}

/// The localization `A_G = {H in A : H ⊇ G}`, in the same ambient space.
pub fn subarrangement_at(a: &Arrangement, p: &IntersectionPoset, g: FlatId) -> Result<Arrangement> {
    let flat = p.get(g)?;
    if p.hyperplane_count != a.len() || p.ambient_dim != a.ambient_dim {
        return Err(Error::input("poset was not built from this arrangement"));
    }
    Ok(a.select(&flat.containing))
}

/// The arrangement `A ∩ G` written in the chart of `G`, remembering which
/// flat of the original poset each of its hyperplanes is.
#[derive(Clone, Debug)]
pub struct RestrictedArrangement {
    pub flat: FlatId,
    pub arrangement: Arrangement,
    /// `sources[i]` is the flat of the ambient poset cut out by hyperplane `i`.
    pub sources: Vec<FlatId>,
}

/// Flats of codimension one inside `g`, as an arrangement in `C^{d(G)}`.
pub fn restriction_to(a: &Arrangement, p: &IntersectionPoset, g: FlatId) -> Result<RestrictedArrangement> {
    let flat = p.get(g)?;
    let chart = flat.subspace.chart();
    let mut hyperplanes = Vec::new();
    let mut sources = Vec::new();
    for &x in p.lower_covers(g) {
        let sub = p.flat(x);
        let cut = sub
            .containing
            .iter()
            .find(|i| flat.containing.binary_search(i).is_err())
            .ok_or_else(|| Error::internal("covered flat has no new hyperplane"))?;
        let h = &a.hyperplanes[*cut];
        let (coeffs, rhs) = chart.pull_back(&h.normal, &h.offset);
        let restricted =
            Hyperplane::new(coeffs, rhs).ok_or_else(|| Error::internal("restricted hyperplane has zero normal"))?;
        hyperplanes.push(restricted);
        sources.push(x);
    }
    Ok(RestrictedArrangement {
        flat: g,
        arrangement: Arrangement::from_hyperplanes(chart.dim(), hyperplanes)?,
        sources,
    })
}

/// Rewrites a central arrangement in `C^l`, `l` its rank, using coordinates
/// along the row space of its normals centred at a point of the center. The
/// intersection posets are isomorphic and hyperplane order is preserved.
pub fn essentialize(a: &Arrangement) -> Result<Arrangement> {
    if a.center().is_none() {
        return Err(Error::input("essentialize needs a central arrangement"));
    }
    let rows = a.hyperplanes.iter().map(|h| h.normal.clone()).collect();
    let normals = RationalMatrix::from_rows(a.ambient_dim, rows)?;
    let (reduced, rank) = linalg::rref_rank(&normals);
    let pivots: Vec<usize> = (0..rank)
        .map(|r| reduced.row(r).iter().position(|v| !v.is_zero()).expect("nonzero row"))
        .collect();
    let hyperplanes = a
        .hyperplanes
        .iter()
        .map(|h| {
            let coords: Vec<Rational> = pivots.iter().map(|&p| h.normal[p].clone()).collect();
            Hyperplane::new(coords, Rational::zero()).expect("normal lies in the row space")
        })
        .collect();
    Arrangement::from_hyperplanes(rank, hyperplanes)
}
