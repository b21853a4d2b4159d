//! Möbius function of the intersection poset and the numerical invariants
//! derived from it.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::arrangement::{FlatId, IntersectionPoset};
use crate::error::{Error, Result};
use crate::polynomial::IntPolynomial;

/// `mu(g, x)` for every flat `x`, with `None` where `x ⊄ g`.
///
/// Flats are sorted by codimension, so one pass in id order sees every flat
/// between `x` and `g` before `x` itself.
pub fn mobius_from(p: &IntersectionPoset, g: FlatId) -> Vec<Option<i64>> {
    let mut mu: Vec<Option<i64>> = vec![None; p.len()];
    mu[g.0] = Some(1);
    for x in p.ids().filter(|&x| x != g && p.le(x, g)) {
        let above: i64 = p
            .ids()
            .filter(|&y| y != x && p.le(x, y) && p.le(y, g))
            .map(|y| mu[y.0].expect("computed before x"))
            .sum();
        mu[x.0] = Some(-above);
    }
    mu
}

/// `mu(C^n, G)` for every flat.
pub fn mobius_from_top(p: &IntersectionPoset) -> Vec<i64> {
    mobius_from(p, FlatId::TOP)
        .into_iter()
        .map(|m| m.expect("every flat lies below the top"))
        .collect()
}

/// `chi(A, t) = sum_G mu(C^n, G) t^{d(G)}`
pub fn characteristic_polynomial(p: &IntersectionPoset) -> IntPolynomial {
    let mu = mobius_from_top(p);
    let mut c = vec![0i64; p.ambient_dim() + 1];
    for g in p.ids() {
        c[p.flat(g).dim()] += mu[g.0];
    }
    IntPolynomial::new(c)
}

/// `pi(A, t) = sum_G |mu(C^n, G)| t^{codim G}`; its coefficients are the
/// Betti numbers of the complement.
pub fn poincare_polynomial(p: &IntersectionPoset) -> IntPolynomial {
    let mu = mobius_from_top(p);
    let mut c = vec![0i64; p.ambient_dim() + 1];
    for g in p.ids() {
        c[p.flat(g).codim()] += mu[g.0].abs();
    }
    IntPolynomial::new(c)
}

/// Euler characteristic of the complement, `sum_G mu(C^n, G)`.
pub fn euler_complement(p: &IntersectionPoset) -> i64 {
    mobius_from_top(p).into_iter().sum()
}

/// `beta(A ∩ G)`: the number of `(l(G)-1)`-spheres in the wedge `Σ(A ∩ G)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BetaValue {
    pub flat: FlatId,
    /// `l(G)`
    pub degree: usize,
    pub value: u64,
}

/// `beta(A ∩ G) = (-1)^{l(G)} sum_{X ⊆ G} mu(G, X)`, i.e. the signed Euler
/// characteristic of the complement of the restriction. A minimal flat gets 1.
pub fn beta_combinatorial(p: &IntersectionPoset, g: FlatId) -> Result<BetaValue> {
    p.get(g)?;
    let degree = p.restricted_rank(g);
    let total: i64 = mobius_from(p, g).into_iter().flatten().sum();
    let signed = if degree.is_multiple_of(2) { total } else { -total };
    let value = u64::try_from(signed).map_err(|_| {
        Error::internal(format!("negative beta {signed} at flat #{} (l(G) = {degree})", g.0))
    })?;
    Ok(BetaValue { flat: g, degree, value })
}

/// `beta(A ∩ G)` for every flat, in id order.
pub fn all_betas(p: &IntersectionPoset) -> Result<Vec<BetaValue>> {
    p.ids().map(|g| beta_combinatorial(p, g)).collect()
}
