//! Report structures for every command, with deterministic JSON and text
//! renderings. JSON key order follows field order; nothing depends on
//! hashing or time.

use std::fmt::Write as _;

use arrcoh_core::arrangement::{Arrangement, FlatId, IntersectionPoset};
use arrcoh_core::chambers::ChamberReport;
use arrcoh_core::decomposition::{GradedDecomposition, Summand};
use arrcoh_core::invariants::{self, BetaValue};
use arrcoh_core::nerve::WedgeCheck;
use arrcoh_core::verify::{CheckResult, Status};
use arrcoh_core::{AffineSubspace, ModuleExpr};
use serde::{Deserialize, Serialize};

use crate::io::EquationRecord;

/// A flat by its canonical defining equations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatRecord {
    pub dim: usize,
    pub equations: Vec<EquationRecord>,
}

impl FlatRecord {
    pub fn new(s: &AffineSubspace) -> Self {
        FlatRecord {
            dim: s.dim(),
            equations: s
                .system()
                .row_iter()
                .zip(s.rhs())
                .map(|(row, b)| EquationRecord::new(row, b))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetFlat {
    pub id: usize,
    pub dim: usize,
    pub codim: usize,
    pub restricted_rank: usize,
    pub containing_hyperplanes: Vec<usize>,
    pub flat: FlatRecord,
    /// Ids of the flats covering this one.
    pub covered_by: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetReport {
    pub dim: usize,
    pub hyperplanes: usize,
    pub rank: usize,
    pub n0: usize,
    pub is_central: bool,
    pub is_essential: bool,
    pub minimal_flats: Vec<usize>,
    pub flats: Vec<PosetFlat>,
}

impl PosetReport {
    pub fn new(p: &IntersectionPoset) -> Self {
        let stats = p.stats();
        PosetReport {
            dim: p.ambient_dim(),
            hyperplanes: p.hyperplane_count(),
            rank: stats.rank,
            n0: stats.n0,
            is_central: stats.is_central,
            is_essential: stats.is_essential,
            minimal_flats: p.minimal_flats().iter().map(|g| g.0).collect(),
            flats: p
                .ids()
                .map(|g| {
                    let f = p.flat(g);
                    PosetFlat {
                        id: g.0,
                        dim: f.dim(),
                        codim: f.codim(),
                        restricted_rank: p.restricted_rank(g),
                        containing_hyperplanes: f.containing_hyperplanes().to_vec(),
                        flat: FlatRecord::new(f.subspace()),
                        covered_by: p.upper_covers(g).iter().map(|x| x.0).collect(),
                    }
                })
                .collect(),
        }
    }

    pub fn text(&self, p: &IntersectionPoset) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "intersection poset: {} flats in C^{} from {} hyperplanes",
            self.flats.len(),
            self.dim,
            self.hyperplanes
        );
        let _ = writeln!(
            s,
            "rank l = {}, n0 = {}, central: {}, essential: {}",
            self.rank,
            self.n0,
            yes_no(self.is_central),
            yes_no(self.is_essential)
        );
        for f in &self.flats {
            let covers: Vec<String> = f.covered_by.iter().map(|c| format!("#{c}")).collect();
            let _ = writeln!(
                s,
                "  #{:<3} dim {} codim {} l(G) {}  {}  hyperplanes {:?}{}",
                f.id,
                f.dim,
                f.codim,
                f.restricted_rank,
                p.flat(FlatId(f.id)).subspace(),
                f.containing_hyperplanes,
                if covers.is_empty() {
                    String::new()
                } else {
                    format!("  below {}", covers.join(" "))
                }
            );
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MobiusValue {
    pub flat: usize,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub rank: usize,
    pub characteristic_polynomial: Vec<i64>,
    pub poincare_polynomial: Vec<i64>,
    pub euler_characteristic: i64,
    pub beta: u64,
    pub mobius: Vec<MobiusValue>,
}

impl InvariantsReport {
    pub fn new(p: &IntersectionPoset) -> arrcoh_core::Result<Self> {
        Ok(InvariantsReport {
            rank: p.rank(),
            characteristic_polynomial: invariants::characteristic_polynomial(p).coeffs().to_vec(),
            poincare_polynomial: invariants::poincare_polynomial(p).coeffs().to_vec(),
            euler_characteristic: invariants::euler_complement(p),
            beta: invariants::beta_combinatorial(p, FlatId::TOP)?.value,
            mobius: invariants::mobius_from_top(p)
                .into_iter()
                .enumerate()
                .map(|(flat, value)| MobiusValue { flat, value })
                .collect(),
        })
    }

    pub fn text(&self) -> String {
        let chi = arrcoh_core::IntPolynomial::new(self.characteristic_polynomial.clone());
        let pi = arrcoh_core::IntPolynomial::new(self.poincare_polynomial.clone());
        let mut s = String::new();
        let _ = writeln!(s, "rank l = {}", self.rank);
        let _ = writeln!(s, "characteristic polynomial: {chi}");
        let _ = writeln!(s, "Poincaré polynomial:       {pi}");
        let _ = writeln!(s, "Euler characteristic of M(A): {}", self.euler_characteristic);
        let _ = writeln!(s, "beta(A): {}", self.beta);
        let mu: Vec<String> = self.mobius.iter().map(|m| format!("#{}:{}", m.flat, m.value)).collect();
        let _ = writeln!(s, "mu(C^n, G): {}", mu.join(" "));
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaRecord {
    pub flat: usize,
    pub equations: FlatRecord,
    /// `l(G)`
    pub degree: usize,
    pub value: u64,
    /// Nerve-homology value of the restriction, when within the oracle limit.
    pub nerve_value: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaReport {
    pub rank: usize,
    pub betas: Vec<BetaRecord>,
}

impl BetaReport {
    pub fn new(p: &IntersectionPoset, betas: &[BetaValue], nerve: &[Option<u64>]) -> Self {
        BetaReport {
            rank: p.rank(),
            betas: betas
                .iter()
                .zip(nerve)
                .map(|(b, n)| BetaRecord {
                    flat: b.flat.0,
                    equations: FlatRecord::new(p.flat(b.flat).subspace()),
                    degree: b.degree,
                    value: b.value,
                    nerve_value: *n,
                })
                .collect(),
        }
    }

    pub fn text(&self, p: &IntersectionPoset) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "beta(A ∩ G) = rank H^l(G)(G, Σ(A ∩ G)), rank l = {}", self.rank);
        for b in &self.betas {
            let nerve = match b.nerve_value {
                Some(v) => format!("nerve {v}"),
                None => "nerve skipped".to_string(),
            };
            let _ = writeln!(
                s,
                "  #{:<3} l(G) {}  beta {:<3} ({nerve})  {}",
                b.flat,
                b.degree,
                b.value,
                p.flat(FlatId(b.flat)).subspace()
            );
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyRecord {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerveReport {
    pub rank: usize,
    pub beta: u64,
    pub is_wedge: bool,
    pub homology: Vec<HomologyRecord>,
}

impl NerveReport {
    pub fn new(w: &WedgeCheck) -> Self {
        NerveReport {
            rank: w.rank,
            beta: w.beta,
            is_wedge: w.is_wedge,
            homology: w
                .homology
                .groups
                .iter()
                .map(|g| HomologyRecord {
                    degree: g.degree,
                    rank: g.rank,
                    torsion: g.torsion.clone(),
                })
                .collect(),
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "nerve of the hyperplane cover of Σ(A), homology through degree {}", self.rank);
        for h in &self.homology {
            let mut group = match h.rank {
                0 => String::new(),
                1 => "Z".to_string(),
                r => format!("Z^{r}"),
            };
            for t in &h.torsion {
                if !group.is_empty() {
                    group.push_str(" ⊕ ");
                }
                let _ = write!(group, "Z/{t}");
            }
            if group.is_empty() {
                group.push('0');
            }
            let _ = writeln!(s, "  H_{} = {group}", h.degree);
        }
        let _ = writeln!(
            s,
            "wedge of {} sphere(s) of dimension {}: {}",
            self.beta,
            self.rank as i64 - 1,
            yes_no(self.is_wedge)
        );
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberRecord {
    pub signs: String,
    pub bounded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChambersReport {
    pub total: usize,
    pub bounded: usize,
    pub chambers: Vec<ChamberRecord>,
}

impl ChambersReport {
    pub fn new(r: &ChamberReport) -> Self {
        ChambersReport {
            total: r.total,
            bounded: r.bounded,
            chambers: r
                .chambers
                .iter()
                .map(|c| ChamberRecord {
                    signs: c.signs.clone(),
                    bounded: c.bounded,
                })
                .collect(),
        }
    }

    pub fn text(&self) -> String {
        let mut s = format!("{} chambers, {} bounded\n", self.total, self.bounded);
        for c in &self.chambers {
            let _ = writeln!(s, "  {}{}", c.signs, if c.bounded { "  bounded" } else { "" });
        }
        s
    }
}

/// Tagged expression tree, `{"kind": "INDUCED", "flat": ..., "inner": ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ModuleNode {
    Free { rank: u64 },
    TrivialZ,
    TensorTrivial { inner: Box<ModuleNode> },
    Induced { flat: FlatRecord, whole_group: bool, inner: Box<ModuleNode> },
    Copies { mult: u64, inner: Box<ModuleNode> },
    Sum { terms: Vec<ModuleNode> },
}

impl ModuleNode {
    pub fn new(m: &ModuleExpr) -> Self {
        match m {
            ModuleExpr::Free(r) => ModuleNode::Free { rank: *r },
            ModuleExpr::TrivialZ => ModuleNode::TrivialZ,
            ModuleExpr::TensorTrivial(x) => ModuleNode::TensorTrivial {
                inner: Box::new(Self::new(x)),
            },
            ModuleExpr::Induced { flat, whole_group, inner } => ModuleNode::Induced {
                flat: FlatRecord::new(flat),
                whole_group: *whole_group,
                inner: Box::new(Self::new(inner)),
            },
            ModuleExpr::Copies(k, x) => ModuleNode::Copies {
                mult: *k,
                inner: Box::new(Self::new(x)),
            },
            ModuleExpr::Sum(xs) => ModuleNode::Sum {
                terms: xs.iter().map(Self::new).collect(),
            },
        }
    }
}

/// Normal form of the summand's module, except that `mult > 1` copies are
/// kept as one `COPIES` node instead of being spelled out.
pub fn compact_module(s: &Summand) -> ModuleExpr {
    match &s.module {
        ModuleExpr::Copies(k, x) if *k > 1 => ModuleExpr::Copies(*k, Box::new(x.normalize())),
        m => m.normalize(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandRecord {
    pub flat: FlatRecord,
    pub multiplicity: u64,
    pub module: ModuleNode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub degree: usize,
    pub free_rank: u64,
    /// The summands describe the associated graded module.
    pub graded: bool,
    pub summands: Vec<SummandRecord>,
    pub notes: Vec<String>,
}

const L2_NOTE: &str = "The free summand at C^n is the part that injects into reduced l2-cohomology; every other summand maps to zero there.";
const GRADED_NOTE: &str = "Summands form the associated graded module of the filtration on H^l; how they extend to the ungraded module is not determined.";
const DUALITY_NOTE: &str = "If M(A) is aspherical, its fundamental group is a duality group of dimension l.";

impl DecompositionReport {
    pub fn new(d: &GradedDecomposition) -> Self {
        let mut notes = vec![GRADED_NOTE.to_string()];
        if d.free_rank > 0 {
            notes.push(L2_NOTE.to_string());
        }
        notes.push(DUALITY_NOTE.to_string());
        DecompositionReport {
            degree: d.degree,
            free_rank: d.free_rank,
            graded: true,
            summands: d
                .summands
                .iter()
                .map(|s| SummandRecord {
                    flat: FlatRecord::new(&s.subspace),
                    multiplicity: s.multiplicity,
                    module: ModuleNode::new(&compact_module(s)),
                })
                .collect(),
            notes,
        }
    }

    pub fn text(d: &GradedDecomposition, a: &Arrangement) -> String {
        let mut s = String::new();
        if a.is_empty() {
            let _ = writeln!(s, "empty arrangement in C^{}: M(A) = C^{}, π trivial", a.ambient_dim(), a.ambient_dim());
            let _ = writeln!(s, "degree 0: H^0 = Z");
            return s;
        }
        let _ = writeln!(
            s,
            "H^*(M(A); Zπ) is concentrated in degree {}; associated graded module:",
            d.degree
        );
        for sm in &d.summands {
            let module = compact_module(sm);
            let meaning = if sm.flat == FlatId::TOP {
                format!("free module of rank {}", sm.multiplicity)
            } else if module.is_trivial_z() {
                "trivial module Z".to_string()
            } else if module.is_induced_trivial() {
                "induced from the trivial module Z".to_string()
            } else {
                format!("{} cop{} of an induced module", sm.multiplicity, if sm.multiplicity == 1 { "y" } else { "ies" })
            };
            let _ = writeln!(s, "  at {} (multiplicity {}): {meaning}", sm.subspace, sm.multiplicity);
            let _ = writeln!(s, "      {module}");
        }
        let _ = writeln!(s, "free rank beta(A) = {}", d.free_rank);
        if d.free_rank > 0 {
            let _ = writeln!(s, "note: {L2_NOTE}");
        }
        let _ = writeln!(s, "note: {GRADED_NOTE}");
        let _ = writeln!(s, "note: {DUALITY_NOTE}");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub input: String,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

pub fn status_label(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skip => "SKIP",
    }
}

impl VerifyReport {
    pub fn new(input: &str, results: &[CheckResult]) -> Self {
        VerifyReport {
            input: input.to_string(),
            passed: !arrcoh_core::verify::any_failed(results),
            checks: results
                .iter()
                .map(|r| CheckRecord {
                    name: r.name.to_string(),
                    status: status_label(r.status).to_string(),
                    detail: r.detail.clone(),
                })
                .collect(),
        }
    }

    pub fn text(&self) -> String {
        let mut s = format!("== {} ==\n", self.input);
        for c in &self.checks {
            let _ = writeln!(s, "{} {}: {}", c.status, c.name, c.detail);
        }
        s
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
