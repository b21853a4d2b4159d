//! Cross-checks between the poset, the topological and geometric oracles,
//! and the decomposition. [`run_checks`] is what `arrcoh verify` prints.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::arrangement::{self, Arrangement, FlatId, IntersectionPoset};
use crate::chambers;
use crate::decomposition::{self, DeconeChoice, Decomposer, GradedDecomposition};
use crate::error::{Error, Result};
use crate::invariants;
use crate::linalg::{self, AffineSubspace, FlatRelation, RationalMatrix};
use crate::nerve;
use crate::polynomial::IntPolynomial;
use crate::Caps;

/// Largest arrangement compared against the subset-enumeration oracle.
pub const BRUTE_FORCE_LIMIT: usize = 6;

/// Every nonempty intersection of a subset of `A`, found by solving the
/// stacked system of each of the `2^|A|` subsets, plus `C^n`.
pub fn brute_force_flats(a: &Arrangement) -> Result<BTreeSet<AffineSubspace>> {
    Error::check_cap("subset oracle hyperplane count", 16, a.len())?;
    let n = a.ambient_dim();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1u32 << a.len()) {
        let chosen: Vec<_> = (0..a.len()).filter(|i| mask >> i & 1 == 1).map(|i| &a.hyperplanes()[i]).collect();
        let system = RationalMatrix::from_rows(n, chosen.iter().map(|h| h.normal().to_vec()).collect())?;
        let rhs: Vec<_> = chosen.iter().map(|h| h.offset().clone()).collect();
        if let Some(f) = linalg::solve_affine(&system, &rhs)? {
            out.insert(f);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, ok: bool, detail: String) -> Self {
        CheckResult {
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        }
    }

    fn skip(name: &'static str, detail: impl Into<String>) -> Self {
        CheckResult {
            name,
            status: Status::Skip,
            detail: detail.into(),
        }
    }
}

pub fn any_failed(results: &[CheckResult]) -> bool {
    results.iter().any(|r| r.status == Status::Fail)
}

/// Runs every check in a fixed order. Oracles beyond their size limits are
/// reported as skipped; a cap on the poset itself is an error.
pub fn run_checks(a: &Arrangement, caps: Caps) -> Result<Vec<CheckResult>> {
    let p = IntersectionPoset::build(a, caps.max_hyperplanes)?;
    Ok(vec![
        poset_vs_brute_force(a, &p)?,
        rank_identity(&p),
        mobius_sign_law(&p),
        reciprocity(&p),
        sigma_wedge(&p, caps)?,
        beta_oracles(a, &p, caps)?,
        chamber_count(a, &p, caps)?,
        decone_factorization(a, &p, caps)?,
        decomposition_structure(a, &p, caps)?,
    ])
}

pub fn poset_vs_brute_force(a: &Arrangement, p: &IntersectionPoset) -> Result<CheckResult> {
    const NAME: &str = "poset-vs-bruteforce";
    if a.len() > BRUTE_FORCE_LIMIT {
        return Ok(CheckResult::skip(NAME, format!("{} hyperplanes > {BRUTE_FORCE_LIMIT}", a.len())));
    }
    let oracle = brute_force_flats(a)?;
    let built: BTreeSet<AffineSubspace> = p.flats().iter().map(|f| f.subspace().clone()).collect();
    let same_sets = oracle == built && built.len() == p.len();
    let mut order_errors = 0;
    for x in p.ids() {
        for y in p.ids() {
            let rel = linalg::flat_relation(p.flat(x).subspace(), p.flat(y).subspace())?;
            let expected = match (p.le(x, y), p.le(y, x)) {
                (true, true) => FlatRelation::Equal,
                (true, false) => FlatRelation::SecondContainsFirst,
                (false, true) => FlatRelation::FirstContainsSecond,
                (false, false) => FlatRelation::Incomparable,
            };
            if rel != expected {
                order_errors += 1;
            }
        }
    }
    Ok(CheckResult::new(
        NAME,
        same_sets && order_errors == 0,
        format!("{} flats built, {} by subset enumeration, {order_errors} order mismatches", p.len(), oracle.len()),
    ))
}

pub fn rank_identity(p: &IntersectionPoset) -> CheckResult {
    let l = p.rank();
    let bad = p
        .ids()
        .filter(|&g| p.restricted_rank(g) + p.flat(g).codim() != l)
        .count();
    CheckResult::new(
        "rank-identity",
        bad == 0,
        format!("l(G) + gr(G) = {l} for {} of {} flats (n0 = {})", p.len() - bad, p.len(), p.n0()),
    )
}

pub fn mobius_sign_law(p: &IntersectionPoset) -> CheckResult {
    let mu = invariants::mobius_from_top(p);
    let bad = p
        .ids()
        .filter(|&g| {
            let m = mu[g.0];
            let even = p.flat(g).codim().is_multiple_of(2);
            m == 0 || (m > 0) != even
        })
        .count();
    CheckResult::new(
        "mobius-sign-law",
        bad == 0,
        format!("sign mu(C^n, G) = (-1)^gr(G) holds at {} of {} flats", p.len() - bad, p.len()),
    )
}

pub fn reciprocity(p: &IntersectionPoset) -> CheckResult {
    let n = p.ambient_dim();
    let chi = invariants::characteristic_polynomial(p);
    let mut c = alloc::vec![0i64; n + 1];
    for k in 0..=n {
        let sign = if (n + k).is_multiple_of(2) { 1 } else { -1 };
        c[n - k] = sign * chi.coeff(k);
    }
    let from_chi = IntPolynomial::new(c);
    let pi = invariants::poincare_polynomial(p);
    let stats = p.stats();
    let euler = invariants::euler_complement(p);
    let central_ok = !(stats.is_central && p.hyperplane_count() > 0) || euler == 0;
    CheckResult::new(
        "reciprocity",
        from_chi == pi && central_ok,
        format!("pi(t) = {pi}, (-t)^n chi(-1/t) = {from_chi}, chi(M) = {euler}"),
    )
}

pub fn sigma_wedge(p: &IntersectionPoset, caps: Caps) -> Result<CheckResult> {
    const NAME: &str = "sigma-wedge";
    if p.hyperplane_count() == 0 {
        return Ok(CheckResult::skip(NAME, "empty arrangement: singular set is empty"));
    }
    if p.hyperplane_count() > caps.max_oracle_hyperplanes {
        return Ok(CheckResult::skip(NAME, "above nerve oracle limit"));
    }
    let w = nerve::sigma_wedge_check(p, caps.max_oracle_hyperplanes)?;
    let beta = invariants::beta_combinatorial(p, FlatId::TOP)?.value;
    let euler_nerve = w.homology.euler_characteristic();
    let euler_expected = 1 - invariants::euler_complement(p);
    let ranks: Vec<usize> = w.homology.groups.iter().map(|g| g.rank).collect();
    Ok(CheckResult::new(
        NAME,
        w.is_wedge && w.beta == beta && euler_nerve == euler_expected,
        format!(
            "nerve H_0..H_{} ranks {ranks:?}, torsion-free {}, {} sphere(s) of dimension {} vs beta {beta}; chi(Σ) = {euler_nerve} vs {euler_expected}",
            w.rank,
            w.homology.is_torsion_free(),
            w.beta,
            w.rank as i64 - 1,
        ),
    ))
}

pub fn beta_oracles(a: &Arrangement, p: &IntersectionPoset, caps: Caps) -> Result<CheckResult> {
    let mut compared = 0;
    let mut mismatches = Vec::new();
    let mut skipped = 0;
    for g in p.ids() {
        let restricted = arrangement::restriction_to(a, p, g)?;
        if restricted.arrangement.len() > caps.max_oracle_hyperplanes {
            skipped += 1;
            continue;
        }
        let comb = invariants::beta_combinatorial(p, g)?.value;
        let by_nerve = nerve::beta_by_nerve(&restricted.arrangement, caps.max_oracle_hyperplanes)?;
        compared += 1;
        if comb != by_nerve {
            mismatches.push(format!("flat #{}: {comb} vs nerve {by_nerve}", g.0));
        }
    }
    let top = invariants::beta_combinatorial(p, FlatId::TOP)?.value;
    let mut chamber_note = String::from("chamber oracle not applicable (not essential)");
    if p.stats().is_essential {
        match chambers_report(a, caps)? {
            Some(r) => {
                chamber_note = format!("bounded chambers {} vs beta(A) {top}", r.bounded);
                if r.bounded as u64 != top {
                    mismatches.push(chamber_note.clone());
                }
            }
            None => chamber_note = String::from("chamber oracle skipped (size)"),
        }
    }
    Ok(CheckResult::new(
        "beta-triple-oracle",
        mismatches.is_empty(),
        format!(
            "{compared} flats compared with nerve homology ({skipped} skipped); {chamber_note}{}",
            if mismatches.is_empty() {
                String::new()
            } else {
                format!("; mismatches: {}", mismatches.join(", "))
            }
        ),
    ))
}

fn chambers_report(a: &Arrangement, caps: Caps) -> Result<Option<chambers::ChamberReport>> {
    if a.len() > caps.max_oracle_hyperplanes || a.ambient_dim() > chambers::MAX_DIM {
        return Ok(None);
    }
    chambers::enumerate_chambers(a, caps.max_oracle_hyperplanes).map(Some)
}

pub fn chamber_count(a: &Arrangement, p: &IntersectionPoset, caps: Caps) -> Result<CheckResult> {
    const NAME: &str = "chamber-count";
    let Some(r) = chambers_report(a, caps)? else {
        return Ok(CheckResult::skip(NAME, "above chamber oracle limits"));
    };
    let pi1 = invariants::poincare_polynomial(p).eval(1);
    let euler = invariants::euler_complement(p);
    let essential = p.stats().is_essential;
    let total_ok = r.total as i64 == pi1;
    let bounded_ok = !essential || r.bounded as i64 == euler.abs();
    let central_ok = !(essential && p.stats().is_central) || r.bounded == 0;
    Ok(CheckResult::new(
        NAME,
        total_ok && bounded_ok && central_ok,
        format!(
            "chambers {} vs pi(1) = {pi1}; bounded {} vs |chi(M)| = {}{}",
            r.total,
            r.bounded,
            euler.abs(),
            if essential { "" } else { " (not compared: not essential)" }
        ),
    ))
}

/// Multiplicities of a decone's decomposition, keyed by the flat of the
/// original arrangement each flat of the decone comes from.
fn lifted_multiplicities(
    a: &Arrangement,
    p: &IntersectionPoset,
    d: &decomposition::Decone,
    dd: &GradedDecomposition,
    caps: Caps,
) -> Result<BTreeMap<FlatId, u64>> {
    let pd = IntersectionPoset::build(&d.arrangement, caps.max_hyperplanes)?;
    let mut out = BTreeMap::new();
    for t in &dd.e2_terms {
        let mut flat = AffineSubspace::whole(a.ambient_dim());
        for &i in pd.flat(t.flat).containing_hyperplanes() {
            let h = a.hyperplanes()[d.source[i]].subspace();
            flat = linalg::intersect_flats(&flat, &h)?
                .ok_or_else(|| Error::internal("decone flat lifts to an empty intersection"))?;
        }
        let id = p
            .find(&flat)
            .ok_or_else(|| Error::internal("lifted flat is not in the poset"))?;
        out.insert(id, t.rank);
    }
    Ok(out)
}

pub fn decone_factorization(a: &Arrangement, p: &IntersectionPoset, caps: Caps) -> Result<CheckResult> {
    const NAME: &str = "deconing-factorization";
    let stats = p.stats();
    if a.is_empty() || !stats.is_central || !stats.is_essential {
        return Ok(CheckResult::skip(NAME, "needs a nonempty central essential arrangement"));
    }
    let pi = invariants::poincare_polynomial(p);
    let one_plus_t = IntPolynomial::new(alloc::vec![1, 1]);
    let full = Decomposer::new(caps, DeconeChoice::First).decompose(a)?;
    let mut failures = Vec::new();
    let mut reference: Option<(usize, u64, BTreeMap<FlatId, u64>)> = None;
    for h in 0..a.len() {
        let d = decomposition::decone(a, h)?;
        let pd = IntersectionPoset::build(&d.arrangement, caps.max_hyperplanes)?;
        let pi_d = invariants::poincare_polynomial(&pd);
        if one_plus_t.mul(&pi_d) != pi {
            failures.push(format!("H∞ = #{h}: (1+t)({pi_d}) != {pi}"));
        }
        if pd.rank() + 1 != p.rank() {
            failures.push(format!("H∞ = #{h}: rank {} -> {}", p.rank(), pd.rank()));
        }
        let dd = Decomposer::new(caps, DeconeChoice::First).decompose(&d.arrangement)?;
        if dd.degree + 1 != full.degree {
            failures.push(format!("H∞ = #{h}: degree {} -> {}", full.degree, dd.degree));
        }
        let lifted = lifted_multiplicities(a, p, &d, &dd, caps)?;
        match &reference {
            None => reference = Some((dd.degree, dd.free_rank, lifted)),
            Some((deg, free, mults)) => {
                let common_agree = lifted
                    .iter()
                    .all(|(g, m)| mults.get(g).is_none_or(|r| r == m));
                if *deg != dd.degree || *free != dd.free_rank || !common_agree {
                    failures.push(format!("H∞ = #{h}: decone invariants differ from H∞ = #0"));
                }
            }
        }
    }
    let last = Decomposer::new(caps, DeconeChoice::Last).decompose(a)?;
    if last.degree != full.degree
        || last.free_rank != full.free_rank
        || last.multiplicities() != full.multiplicities()
        || last.depth != full.depth
    {
        failures.push(String::from("first/last decone choices give different invariants"));
    }
    Ok(CheckResult::new(
        NAME,
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} choices of H∞: pi(A) = (1+t)·pi(A'), rank and degree drop by 1, invariants agree",
                a.len()
            )
        } else {
            failures.join("; ")
        },
    ))
}

pub fn decomposition_structure(a: &Arrangement, p: &IntersectionPoset, caps: Caps) -> Result<CheckResult> {
    let d = Decomposer::new(caps, DeconeChoice::First)
        .decompose_with_poset(a, p)?
        .normalized();
    let l = p.rank();
    let mut failures = Vec::new();
    let degrees = d.nonzero_degrees();
    if degrees != [l] || d.degree != l {
        failures.push(format!("nonzero degrees {degrees:?}, expected [{l}]"));
    }
    let betas = invariants::all_betas(p)?;
    for s in &d.summands {
        if s.multiplicity != betas[s.flat.0].value {
            failures.push(format!("multiplicity at flat #{} is not beta", s.flat.0));
        }
        let free = s.module.top_level_free_ranks();
        if s.flat == FlatId::TOP {
            if free != [d.free_rank] || d.free_rank != betas[0].value {
                failures.push(format!("top summand is not Zπ^{}", betas[0].value));
            }
        } else {
            if !free.is_empty() {
                failures.push(format!("free node in summand at flat #{}", s.flat.0));
            }
            if !s.module.contains_tensor_trivial() {
                failures.push(format!("summand at flat #{} has no trivial tensor factor", s.flat.0));
            }
        }
    }
    let listed: usize = d.summands.len();
    let positive = betas.iter().filter(|b| b.value > 0).count();
    if listed != positive {
        failures.push(format!("{listed} summands for {positive} flats with beta > 0"));
    }
    if d.depth != l {
        failures.push(format!("recursion depth {} != rank {l}", d.depth));
    }
    Ok(CheckResult::new(
        "decomposition-structure",
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "concentrated in degree {l}; {} summands; free rank {} only at C^n; depth {}",
                d.summands.len(),
                d.free_rank,
                d.depth
            )
        } else {
            failures.join("; ")
        },
    ))
}
