//! Acceptance suite over the bundled corpus. Prints one PASS/FAIL line per
//! criterion and exits nonzero if any criterion fails.
//!
//! Run with `cargo test -p arrcoh --test acceptance`.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use arrcoh::io::load_arrangement;
use arrcoh_core::arrangement::{self, Arrangement, FlatId, IntersectionPoset};
use arrcoh_core::decomposition::{self, DeconeChoice, Decomposer, GradedDecomposition, ModuleExpr};
use arrcoh_core::nerve::{self, SimplicialComplex};
use arrcoh_core::{chambers, invariants, verify, Caps, IntPolynomial};

const CORPUS: [&str; 9] = [
    "empty_c1",
    "one_point_c1",
    "two_points_c1",
    "three_points_c1",
    "boolean_c2",
    "boolean_c3",
    "generic3_c2",
    "concurrent3_c2",
    "generic4_c2",
];

struct Case {
    name: &'static str,
    a: Arrangement,
    p: IntersectionPoset,
}

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn load_corpus() -> Vec<Case> {
    CORPUS
        .iter()
        .map(|&name| {
            let a = load_arrangement(&corpus_dir().join(format!("{name}.json"))).expect("corpus file loads");
            let p = IntersectionPoset::build(&a, 20).expect("corpus poset");
            Case { name, a, p }
        })
        .collect()
}

fn case<'a>(cases: &'a [Case], name: &str) -> &'a Case {
    cases.iter().find(|c| c.name == name).expect("corpus case")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn decompose(a: &Arrangement) -> Result<GradedDecomposition, String> {
    decomposition::decompose_cohomology(a).map_err(err)
}

fn concentration(cases: &[Case]) -> Outcome {
    let start = Instant::now();
    let mut degrees = Vec::new();
    for c in cases {
        let d = decompose(&c.a)?;
        let nz = d.nonzero_degrees();
        ensure(nz == [c.p.rank()], || format!("{}: nonzero degrees {nz:?}, rank {}", c.name, c.p.rank()))?;
        ensure(d.degree == c.p.rank(), || format!("{}: degree {} vs rank {}", c.name, d.degree, c.p.rank()))?;
        degrees.push(d.degree);
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("degrees {degrees:?} in {:?}", start.elapsed()))
}

fn beta_oracles(cases: &[Case]) -> Outcome {
    let start = Instant::now();
    let mut flats = 0;
    for c in cases {
        for g in c.p.ids() {
            let restricted = arrangement::restriction_to(&c.a, &c.p, g).map_err(err)?;
            if restricted.arrangement.len() > 12 {
                continue;
            }
            let combinatorial = invariants::beta_combinatorial(&c.p, g).map_err(err)?.value;
            let by_nerve = if restricted.arrangement.is_empty() {
                nerve::beta_by_nerve(&restricted.arrangement, 12).map_err(err)?
            } else {
                let q = IntersectionPoset::build(&restricted.arrangement, 20).map_err(err)?;
                nerve::sigma_wedge_check(&q, 12).map_err(err)?.beta
            };
            ensure(combinatorial == by_nerve, || {
                format!("{} at {}: poset {combinatorial}, nerve {by_nerve}", c.name, c.p.flat(g).subspace())
            })?;
            flats += 1;
        }
        if c.p.stats().is_essential {
            let beta = invariants::beta_combinatorial(&c.p, FlatId::TOP).map_err(err)?.value;
            let bounded = chambers::enumerate_chambers(&c.a, 12).map_err(err)?.bounded as u64;
            ensure(beta == bounded, || format!("{}: beta {beta}, bounded chambers {bounded}", c.name))?;
        }
    }
    let top = |name| invariants::beta_combinatorial(&case(cases, name).p, FlatId::TOP).map(|b| b.value).map_err(err);
    for (name, want) in [("two_points_c1", 1), ("generic3_c2", 1), ("generic4_c2", 3)] {
        let got = top(name)?;
        ensure(got == want, || format!("{name}: beta {got}, expected {want}"))?;
    }
    for c in cases.iter().filter(|c| c.p.stats().is_central && !c.a.is_empty()) {
        let got = top(c.name)?;
        ensure(got == 0, || format!("{}: central but beta {got}", c.name))?;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{flats} flats agree in {:?}", start.elapsed()))
}

fn sigma_homology(cases: &[Case]) -> Outcome {
    let mut checked = 0;
    for c in cases.iter().filter(|c| !c.a.is_empty()) {
        let w = nerve::sigma_wedge_check(&c.p, 12).map_err(err)?;
        let l = c.p.rank();
        ensure(w.homology.is_torsion_free(), || format!("{}: torsion in nerve homology", c.name))?;
        for k in 0..w.homology.groups.len() {
            let expected = if k + 1 == l { w.beta as usize } else { 0 };
            let got = w.homology.reduced_rank(k);
            ensure(got == expected, || format!("{}: reduced H_{k} rank {got}, expected {expected}", c.name))?;
        }
        ensure(w.is_wedge, || format!("{}: not reported as a wedge", c.name))?;
        checked += 1;
    }
    Ok(format!("{checked} nerves are wedges of (l-1)-spheres"))
}

fn rank_identity(cases: &[Case]) -> Outcome {
    let mut flats = 0;
    for c in cases {
        for g in c.p.ids() {
            let (lg, gr) = (c.p.restricted_rank(g), c.p.flat(g).codim());
            ensure(lg + gr == c.p.rank(), || format!("{}: l(G) {lg} + gr(G) {gr} != {}", c.name, c.p.rank()))?;
            flats += 1;
        }
    }
    Ok(format!("{flats} flats"))
}

fn product_lemma(cases: &[Case]) -> Outcome {
    let mut choices = 0;
    for c in cases.iter().filter(|c| {
        let s = c.p.stats();
        s.is_central && s.is_essential && !c.a.is_empty()
    }) {
        let pi = invariants::poincare_polynomial(&c.p);
        let d = decompose(&c.a)?;
        let mut seen: Option<(usize, u64)> = None;
        for h in 0..c.a.len() {
            let dc = decomposition::decone(&c.a, h).map_err(err)?;
            let q = IntersectionPoset::build(&dc.arrangement, 20).map_err(err)?;
            let factored = IntPolynomial::new(vec![1, 1]).mul(&invariants::poincare_polynomial(&q));
            ensure(factored == pi, || format!("{} h={h}: (1+t)·{} != {pi}", c.name, invariants::poincare_polynomial(&q)))?;
            ensure(q.rank() + 1 == c.p.rank(), || format!("{} h={h}: rank {} -> {}", c.name, c.p.rank(), q.rank()))?;
            let dd = decompose(&dc.arrangement)?;
            ensure(dd.degree + 1 == d.degree, || format!("{} h={h}: degree {} -> {}", c.name, d.degree, dd.degree))?;
            let key = (dd.degree, dd.free_rank);
            ensure(seen.is_none_or(|s| s == key), || format!("{} h={h}: decone invariants {key:?} vs {seen:?}", c.name))?;
            seen = Some(key);
            choices += 1;
        }
        let first = Decomposer::new(Caps::default(), DeconeChoice::First).decompose(&c.a).map_err(err)?.normalized();
        let last = Decomposer::new(Caps::default(), DeconeChoice::Last).decompose(&c.a).map_err(err)?.normalized();
        ensure(
            first.degree == last.degree && first.free_rank == last.free_rank && first.multiplicities() == last.multiplicities(),
            || format!("{}: decomposition depends on the choice at infinity", c.name),
        )?;
        ensure(shape(&first.module()) == shape(&last.module()), || {
            format!("{}: module shapes differ across choices", c.name)
        })?;
        let r = verify::decone_factorization(&c.a, &c.p, Caps::default()).map_err(err)?;
        ensure(r.status == verify::Status::Pass, || format!("{}: {}", c.name, r.detail))?;
    }
    ensure(choices > 0, || "no central essential arrangement in the corpus".into())?;
    Ok(format!("{choices} choices at infinity"))
}

/// The expression with every nested flat replaced by its dimension. Flats
/// below the top level live in chart coordinates that depend on the choice
/// at infinity.
fn shape(m: &ModuleExpr) -> String {
    match m {
        ModuleExpr::Free(r) => format!("F{r}"),
        ModuleExpr::TrivialZ => "Z".into(),
        ModuleExpr::TensorTrivial(x) => format!("T({})", shape(x)),
        ModuleExpr::Induced { flat, whole_group, inner } => format!("I{}{}({})", flat.dim(), whole_group, shape(inner)),
        ModuleExpr::Copies(k, x) => format!("{k}x{}", shape(x)),
        ModuleExpr::Sum(xs) => {
            let mut parts: Vec<_> = xs.iter().map(shape).collect();
            parts.sort();
            format!("S[{}]", parts.join(","))
        }
    }
}

fn free_summand_structure(cases: &[Case]) -> Outcome {
    let mut summands = 0;
    for c in cases {
        let d = decompose(&c.a)?.normalized();
        let beta = invariants::beta_combinatorial(&c.p, FlatId::TOP).map_err(err)?.value;
        for s in &d.summands {
            let free = s.module.top_level_free_ranks();
            if s.flat == FlatId::TOP {
                ensure(s.module == ModuleExpr::Free(beta), || format!("{}: top summand {} vs FREE({beta})", c.name, s.module))?;
            } else {
                ensure(free.is_empty(), || format!("{}: FREE node at {}", c.name, s.subspace))?;
                ensure(s.module.contains_tensor_trivial(), || {
                    format!("{}: no TENSOR_TRIVIAL node at {}", c.name, s.subspace)
                })?;
            }
            summands += 1;
        }
        let top_free: u64 = d.summands.iter().flat_map(|s| s.module.top_level_free_ranks()).sum();
        ensure(top_free == beta, || format!("{}: total free rank {top_free}, beta {beta}", c.name))?;
    }
    Ok(format!("{summands} summands"))
}

fn hand_checked_modules(cases: &[Case]) -> Outcome {
    let single = |name: &str, degree: usize| -> Result<(), String> {
        let d = decompose(&case(cases, name).a)?.normalized();
        ensure(d.degree == degree && d.free_rank == 0, || format!("{name}: degree {}, free rank {}", d.degree, d.free_rank))?;
        ensure(d.summands.len() == 1, || format!("{name}: {} summands", d.summands.len()))?;
        let s = &d.summands[0];
        ensure(s.subspace.dim() == 0 && s.module.is_trivial_z(), || format!("{name}: {} at {}", s.module, s.subspace))
    };
    single("one_point_c1", 1)?;
    single("boolean_c2", 2)?;
    let d = decompose(&case(cases, "two_points_c1").a)?.normalized();
    ensure(d.degree == 1 && d.free_rank == 1 && d.summands.len() == 3, || {
        format!("two_points_c1: degree {}, free rank {}, {} summands", d.degree, d.free_rank, d.summands.len())
    })?;
    ensure(d.summands[0].flat == FlatId::TOP && d.summands[0].module == ModuleExpr::Free(1), || {
        format!("two_points_c1: top summand {}", d.summands[0].module)
    })?;
    for s in &d.summands[1..] {
        ensure(s.multiplicity == 1 && s.module.is_induced_trivial(), || format!("two_points_c1: {} at {}", s.module, s.subspace))?;
    }
    Ok("one point: Z; Boolean C^2: Z; two points: Zπ ⊕ 2 induced Z".into())
}

fn homology_engine() -> Outcome {
    let start = Instant::now();
    let faces = |v: &[[usize; 3]]| v.iter().map(|f| f.to_vec()).collect::<Vec<_>>();
    let triangle = SimplicialComplex::from_faces(3, &[vec![0, 1], vec![1, 2], vec![0, 2]], 1).map_err(err)?;
    let tetrahedron = SimplicialComplex::from_faces(4, &faces(&[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]), 2).map_err(err)?;
    let rp2_faces = faces(&[
        [0, 1, 3],
        [0, 1, 5],
        [0, 2, 4],
        [0, 2, 5],
        [0, 3, 4],
        [1, 2, 3],
        [1, 2, 4],
        [1, 4, 5],
        [2, 3, 5],
        [3, 4, 5],
    ]);
    let rp2 = SimplicialComplex::from_faces(6, &rp2_faces, 2).map_err(err)?;
    let summary = |c: &SimplicialComplex| -> Result<Vec<(usize, Vec<u64>)>, String> {
        let h = nerve::simplicial_homology(c).map_err(err)?;
        Ok(h.groups.iter().map(|g| (g.rank, g.torsion.clone())).collect())
    };
    let t = summary(&triangle)?;
    ensure(t == [(1, vec![]), (1, vec![])], || format!("triangle: {t:?}"))?;
    let s2 = summary(&tetrahedron)?;
    ensure(s2 == [(1, vec![]), (0, vec![]), (1, vec![])], || format!("tetrahedron: {s2:?}"))?;
    let p = summary(&rp2)?;
    ensure(p == [(1, vec![]), (0, vec![2]), (0, vec![])], || format!("projective plane: {p:?}"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("triangle, tetrahedron, projective plane in {:?}", start.elapsed()))
}

fn poset_oracle(cases: &[Case]) -> Outcome {
    let mut compared = 0;
    for c in cases.iter().filter(|c| c.a.len() <= 6) {
        let built: std::collections::BTreeSet<_> = c.p.flats().iter().map(|f| f.subspace().clone()).collect();
        let brute = verify::brute_force_flats(&c.a).map_err(err)?;
        ensure(built == brute, || format!("{}: {} flats vs {} by subsets", c.name, built.len(), brute.len()))?;
        ensure(built.len() == c.p.len(), || format!("{}: duplicate flats in poset", c.name))?;
        for x in c.p.ids() {
            for y in c.p.ids() {
                let by_poset = c.p.le(x, y);
                let by_geometry = c.p.flat(y).subspace().contains(c.p.flat(x).subspace());
                ensure(by_poset == by_geometry, || format!("{}: order mismatch between {x:?} and {y:?}", c.name))?;
            }
        }
        compared += 1;
    }
    Ok(format!("{compared} arrangements"))
}

fn full_verify() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_arrcoh"))
        .arg("verify")
        .arg(corpus_dir())
        .output()
        .map_err(err)?;
    let elapsed = start.elapsed();
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(0), || format!("exit {:?}\n{text}", out.status.code()))?;
    ensure(!text.contains("FAIL"), || format!("FAIL line with exit 0\n{text}"))?;
    within(elapsed, Duration::from_secs(60))?;
    let summary = text.lines().last().unwrap_or_default().to_string();
    Ok(format!("{summary} in {elapsed:?}"))
}

fn main() -> ExitCode {
    let cases = load_corpus();
    let criteria: Vec<Criterion> = vec![
        ("corpus concentration", Box::new(|| concentration(&cases))),
        ("beta triple-oracle agreement", Box::new(|| beta_oracles(&cases))),
        ("nerve of Σ is a wedge of spheres", Box::new(|| sigma_homology(&cases))),
        ("rank identity l(G) + gr(G) = l", Box::new(|| rank_identity(&cases))),
        ("deconing shadows", Box::new(|| product_lemma(&cases))),
        ("free summand structure", Box::new(|| free_summand_structure(&cases))),
        ("hand-checked modules", Box::new(|| hand_checked_modules(&cases))),
        ("homology engine self-test", Box::new(homology_engine)),
        ("poset oracle equivalence", Box::new(|| poset_oracle(&cases))),
        ("full verify on corpus", Box::new(full_verify)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
