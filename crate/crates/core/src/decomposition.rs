//! Graded decomposition of `H^*(M(A); Zπ)`.
//!
//! The cohomology is concentrated in degree `l = rank(A)`, and its
//! associated graded module splits over the flats `G`:
//!
//! ```text
//! gr H^l(M(A); Zπ) = ⊕_G  H^{l(G)}(G, Σ(A ∩ G)) ⊗ H^{gr(G)}(M(A_G); Zπ)
//! ```
//!
//! The first factor is free abelian of rank `beta(A ∩ G)`. For `G = C^n` the
//! second factor is `Zπ` itself. For any other flat it is induced up from
//! `π_G = π_1(M(A_G))`, and since `M(A_G) ≅ M(A'_G) × C^*` for a decone
//! `A'_G` of (the essentialization of) `A_G`, it equals the degree
//! `gr(G) - 1` module of `A'_G` tensored with the trivial module `Z`. The
//! recursion stops at the empty arrangement, where the module is `Z` over the
//! trivial group.
//!
//! Only the graded object is produced. Extension data between summands are
//! not determined here.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::arrangement::{self, Arrangement, FlatId, Hyperplane, IntersectionPoset};
use crate::error::{Error, Result};
use crate::invariants;
use crate::linalg::AffineSubspace;
use crate::rational::Rational;
use crate::Caps;

/// Symbolic `Zπ`-module.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModuleExpr {
    /// `Zπ^rank`. `Free(0)` is the zero module.
    Free(u64),
    /// `Z` with trivial action.
    TrivialZ,
    /// `N ⊗ Z`, the extra infinite cyclic factor acting trivially.
    TensorTrivial(Box<ModuleExpr>),
    /// `N ⊗_{π_G} Zπ`. `whole_group` marks `π_G = π` (i.e. `A_G = A`), where
    /// induction changes nothing.
    Induced {
        flat: AffineSubspace,
        whole_group: bool,
        inner: Box<ModuleExpr>,
    },
    Copies(u64, Box<ModuleExpr>),
    /// Direct sum; the empty sum is the zero module.
    Sum(Vec<ModuleExpr>),
}

impl ModuleExpr {
    pub fn zero() -> Self {
        ModuleExpr::Sum(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ModuleExpr::Sum(v) if v.is_empty()) || matches!(self, ModuleExpr::Free(0))
    }

    /// Canonical form: copies expanded into sums, nested sums flattened,
    /// zero modules removed, sum terms sorted. Idempotent.
    pub fn normalize(&self) -> ModuleExpr {
        use ModuleExpr::*;
        match self {
            Free(0) => ModuleExpr::zero(),
            Free(r) => Free(*r),
            TrivialZ => TrivialZ,
            TensorTrivial(x) => {
                let x = x.normalize();
                if x.is_zero() {
                    x
                } else {
                    TensorTrivial(Box::new(x))
                }
            }
            Induced { flat, whole_group, inner } => {
                let inner = inner.normalize();
                if inner.is_zero() {
                    inner
                } else {
                    Induced {
                        flat: flat.clone(),
                        whole_group: *whole_group,
                        inner: Box::new(inner),
                    }
                }
            }
            Copies(k, x) => {
                let x = x.normalize();
                collect_sum(vec![x; *k as usize])
            }
            Sum(xs) => collect_sum(xs.iter().map(ModuleExpr::normalize).collect()),
        }
    }

    /// Every `Free` rank appearing in the expression.
    pub fn free_ranks(&self) -> Vec<u64> {
        let mut out = Vec::new();
        self.visit(&mut |m| {
            if let ModuleExpr::Free(r) = m {
                out.push(*r);
            }
        });
        out
    }

    /// Ranks of `Free` nodes that are direct summands of this expression,
    /// not nested under a tensor or induction. Only these are free
    /// `Zπ`-modules; a `Free` deeper down is free over a subgroup.
    pub fn top_level_free_ranks(&self) -> Vec<u64> {
        match self {
            ModuleExpr::Free(r) => vec![*r],
            ModuleExpr::Copies(_, x) => x.top_level_free_ranks(),
            ModuleExpr::Sum(xs) => xs.iter().flat_map(ModuleExpr::top_level_free_ranks).collect(),
            _ => Vec::new(),
        }
    }

    pub fn contains_tensor_trivial(&self) -> bool {
        let mut found = false;
        self.visit(&mut |m| found |= matches!(m, ModuleExpr::TensorTrivial(_)));
        found
    }

    /// True when the expression denotes `Z` with trivial `π`-action:
    /// `Z`, `Z ⊗ Z`, or induction along `π_G = π` of such a module.
    pub fn is_trivial_z(&self) -> bool {
        match self {
            ModuleExpr::TrivialZ => true,
            ModuleExpr::TensorTrivial(x) => x.is_trivial_z(),
            ModuleExpr::Induced {
                whole_group: true,
                inner,
                ..
            } => inner.is_trivial_z(),
            ModuleExpr::Copies(1, x) => x.is_trivial_z(),
            ModuleExpr::Sum(xs) => xs.len() == 1 && xs[0].is_trivial_z(),
            _ => false,
        }
    }

    /// True for `Z[π/π_G]`: induction from a proper subgroup of a module
    /// that is itself trivial.
    pub fn is_induced_trivial(&self) -> bool {
        match self {
            ModuleExpr::Induced {
                whole_group: false,
                inner,
                ..
            } => inner.is_trivial_z(),
            ModuleExpr::Copies(1, x) => x.is_induced_trivial(),
            ModuleExpr::Sum(xs) => xs.len() == 1 && xs[0].is_induced_trivial(),
            _ => false,
        }
    }

    fn visit(&self, f: &mut impl FnMut(&ModuleExpr)) {
        f(self);
        match self {
            ModuleExpr::TensorTrivial(x) | ModuleExpr::Copies(_, x) => x.visit(f),
            ModuleExpr::Induced { inner, .. } => inner.visit(f),
            ModuleExpr::Sum(xs) => xs.iter().for_each(|x| x.visit(f)),
            ModuleExpr::Free(_) | ModuleExpr::TrivialZ => {}
        }
    }
}

fn collect_sum(terms: Vec<ModuleExpr>) -> ModuleExpr {
    let mut flat = Vec::new();
    for t in terms {
        match t {
            ModuleExpr::Sum(inner) => flat.extend(inner),
            t if t.is_zero() => {}
            t => flat.push(t),
        }
    }
    flat.sort();
    if flat.len() == 1 {
        flat.pop().expect("one term")
    } else {
        ModuleExpr::Sum(flat)
    }
}

impl fmt::Display for ModuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleExpr::Free(1) => f.write_str("Zπ"),
            ModuleExpr::Free(r) => write!(f, "(Zπ)^{r}"),
            ModuleExpr::TrivialZ => f.write_str("Z"),
            ModuleExpr::TensorTrivial(x) => write!(f, "({x} ⊗ Z)"),
            ModuleExpr::Induced { flat, inner, .. } => write!(f, "Ind[{flat}]({inner})"),
            ModuleExpr::Copies(k, x) => write!(f, "{k}·{x}"),
            ModuleExpr::Sum(xs) if xs.is_empty() => f.write_str("0"),
            ModuleExpr::Sum(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ⊕ ")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

/// The summand of the decomposition indexed by one flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub flat: FlatId,
    pub subspace: AffineSubspace,
    /// `beta(A ∩ G)`
    pub multiplicity: u64,
    pub module: ModuleExpr,
}

/// A nonzero `E_2^{i,j}` contribution: flat `G` with `i = l(G)`,
/// `j = gr(G)` and free abelian rank `beta(A ∩ G)` of its first factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct E2Term {
    pub flat: FlatId,
    pub i: usize,
    pub j: usize,
    pub rank: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDecomposition {
    pub ambient_dim: usize,
    /// The single degree in which the cohomology is nonzero.
    pub degree: usize,
    /// `beta(A)`, the rank of the free summand at `G = C^n`.
    pub free_rank: u64,
    /// One entry per flat with positive multiplicity, in flat id order.
    pub summands: Vec<Summand>,
    pub e2_terms: Vec<E2Term>,
    /// Number of nested decone steps used.
    pub depth: usize,
}

impl GradedDecomposition {
    /// Total degrees `i + j` of the nonzero `E_2` terms, sorted and distinct.
    pub fn nonzero_degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.e2_terms.iter().filter(|t| t.rank > 0).map(|t| t.i + t.j).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The whole degree-`l` module as one expression.
    pub fn module(&self) -> ModuleExpr {
        ModuleExpr::Sum(self.summands.iter().map(|s| s.module.clone()).collect())
    }

    pub fn multiplicities(&self) -> BTreeMap<AffineSubspace, u64> {
        self.summands.iter().map(|s| (s.subspace.clone(), s.multiplicity)).collect()
    }

    pub fn normalized(&self) -> GradedDecomposition {
        let mut out = self.clone();
        for s in &mut out.summands {
            s.module = s.module.normalize();
        }
        out
    }
}

/// The affine arrangement obtained by sending one hyperplane to infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decone {
    pub arrangement: Arrangement,
    /// `source[i]` is the index in the original arrangement of hyperplane `i`.
    pub source: Vec<usize>,
}

/// Decones a central essential arrangement at `h_infinity`.
///
/// Coordinates are centred at the central point; with `k` the leading index
/// of the normal `h` of `H∞`, the coordinates `(y_j)_{j≠k}, h.y` replace `y`,
/// and the chart `h.y = 1` is kept.
pub fn decone(a: &Arrangement, h_infinity: usize) -> Result<Decone> {
    let center = a
        .center()
        .ok_or_else(|| Error::input("decone needs a central arrangement"))?;
    if center.dim() != 0 {
        return Err(Error::input("decone needs an essential arrangement; essentialize first"));
    }
    let h = a.hyperplanes().get(h_infinity).ok_or_else(|| {
        Error::input(format!("h_infinity {h_infinity} out of range for {} hyperplanes", a.len()))
    })?;
    let k = h.normal().iter().position(|v| !v.is_zero()).expect("nonzero normal");
    let mut hyperplanes = Vec::with_capacity(a.len() - 1);
    let mut source = Vec::with_capacity(a.len() - 1);
    for (i, g) in a.hyperplanes().iter().enumerate() {
        if i == h_infinity {
            continue;
        }
        let ak = &g.normal()[k];
        let normal: Vec<Rational> = (0..a.ambient_dim())
            .filter(|&j| j != k)
            .map(|j| &g.normal()[j] - ak * &h.normal()[j])
            .collect();
        let hp = Hyperplane::new(normal, -ak.clone())
            .ok_or_else(|| Error::internal("deconed hyperplane is parallel to infinity"))?;
        hyperplanes.push(hp);
        source.push(i);
    }
    let raw = hyperplanes
        .into_iter()
        .map(|hp| (hp.normal().to_vec(), hp.offset().clone()))
        .collect();
    Ok(Decone {
        arrangement: Arrangement::new(a.ambient_dim() - 1, raw)?,
        source,
    })
}

/// Which hyperplane of each localization is sent to infinity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DeconeChoice {
    /// Lowest index in `A_G`.
    #[default]
    First,
    /// Highest index in `A_G`.
    Last,
}

/// Recursive decomposer with a memo keyed by arrangement.
#[derive(Debug)]
pub struct Decomposer {
    caps: Caps,
    choice: DeconeChoice,
    memo: BTreeMap<Arrangement, GradedDecomposition>,
}

impl Decomposer {
    pub fn new(caps: Caps, choice: DeconeChoice) -> Self {
        Decomposer {
            caps,
            choice,
            memo: BTreeMap::new(),
        }
    }

    pub fn decompose(&mut self, a: &Arrangement) -> Result<GradedDecomposition> {
        if let Some(d) = self.memo.get(a) {
            return Ok(d.clone());
        }
        let p = IntersectionPoset::build(a, self.caps.max_hyperplanes)?;
        let d = self.decompose_with_poset(a, &p)?;
        self.memo.insert(a.clone(), d.clone());
        Ok(d)
    }

    pub fn decompose_with_poset(&mut self, a: &Arrangement, p: &IntersectionPoset) -> Result<GradedDecomposition> {
        let betas = invariants::all_betas(p)?;
        let l = p.rank();
        let mut summands = Vec::new();
        let mut e2_terms = Vec::new();
        let mut depth = 0;
        for b in &betas {
            let g = b.flat;
            let flat = p.flat(g);
            e2_terms.push(E2Term {
                flat: g,
                i: b.degree,
                j: flat.codim(),
                rank: b.value,
            });
            if b.value == 0 {
                continue;
            }
            let module = if g == FlatId::TOP {
                ModuleExpr::Free(b.value)
            } else {
                let (inner, inner_depth) = self.local_module(a, p, g)?;
                depth = depth.max(inner_depth + 1);
                ModuleExpr::Copies(b.value, Box::new(inner))
            };
            summands.push(Summand {
                flat: g,
                subspace: flat.subspace().clone(),
                multiplicity: b.value,
                module,
            });
        }
        Ok(GradedDecomposition {
            ambient_dim: a.ambient_dim(),
            degree: l,
            free_rank: betas[FlatId::TOP.0].value,
            summands,
            e2_terms,
            depth,
        })
    }

    /// `H^{gr(G)}(M(A_G); Zπ_G) ⊗_{π_G} Zπ` for `G ≠ C^n`, plus the depth of
    /// the recursion that produced it.
    fn local_module(&mut self, a: &Arrangement, p: &IntersectionPoset, g: FlatId) -> Result<(ModuleExpr, usize)> {
        let flat = p.flat(g);
        let local = arrangement::subarrangement_at(a, p, g)?;
        let essential = arrangement::essentialize(&local)?;
        let h = match self.choice {
            DeconeChoice::First => 0,
            DeconeChoice::Last => essential.len() - 1,
        };
        let affine = decone(&essential, h)?.arrangement;
        let inner = self.decompose(&affine)?;
        if inner.degree + 1 != flat.codim() {
            return Err(Error::internal(format!(
                "decone of A_G at flat #{} has degree {}, expected {}",
                g.0,
                inner.degree,
                flat.codim() - 1
            )));
        }
        // Over the trivial group Zπ' = Z.
        let inner_module = if affine.is_empty() {
            ModuleExpr::TrivialZ
        } else {
            inner.module()
        };
        let module = ModuleExpr::Induced {
            flat: flat.subspace().clone(),
            whole_group: local.len() == a.len(),
            inner: Box::new(ModuleExpr::TensorTrivial(Box::new(inner_module))),
        };
        Ok((module, inner.depth))
    }
}

/// Decomposition with default caps and decone choice.
pub fn decompose_cohomology(a: &Arrangement) -> Result<GradedDecomposition> {
    Decomposer::new(Caps::default(), DeconeChoice::First).decompose(a)
}
