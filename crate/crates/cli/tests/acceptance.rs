//! End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1
//! if any criterion fails. Set `SUPERJORDAN_BLESS=1` to rewrite the golden
//! DOT files.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use superjordan::catalog::{kind_name, print_certificates};
use superjordan::corpus::Corpus;
use superjordan::degeneration::{
    apply_refutations, battery, default_identities, profiles_for, verify_degeneration, verify_nondeg_table, NondegOptions, Profile,
    RowStatus,
};
use superjordan::graph::{build_hasse, components, export_dot, type41_diagram, verified_edges, HasseGraph};
use superjordan::identity::{check_jordan_superidentity, check_supercommutativity};
use superjordan::invariants::{sample_parameters, table_row};
use superjordan::{Basis, Exec, Scalar, SuperAlgebra};

const KINDS: [(usize, usize); 3] = [(1, 4), (3, 2), (2, 3)];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn identity_gate(corpus: &Corpus) -> Outcome {
    let count = |k| corpus.catalog.of_kind(k).len();
    let counts = [(4, 1), (1, 4), (3, 2), (2, 3)].map(count);
    ensure(counts == [13, 9, 29, 45], || format!("entry counts {counts:?}"))?;
    let families = corpus.catalog.entries().iter().filter(|e| e.is_family()).count();
    ensure(families == 3, || format!("{families} families"))?;
    for e in corpus.catalog.entries() {
        ensure(check_supercommutativity(&e.algebra), || format!("{} is not supercommutative", e.name))?;
        check_jordan_superidentity(&e.algebra, Exec::default()).map_err(|c| format!("{}: {c}", e.name))?;
    }
    // l_{e1} acting on the odd part as one 4x4 Jordan block
    let mut b = SuperAlgebra::builder(1, 4);
    for (src, dst) in [(1, 0), (2, 1), (3, 2)] {
        b = b.product(Basis::E(0), Basis::F(src), &[(Basis::F(dst), Scalar::one())]).map_err(|e| e.to_string())?;
    }
    let c = check_jordan_superidentity(&b.build(), Exec::Sequential).err().ok_or("negative control passes")?;
    let shown = c.to_string();
    ensure(shown == "J^s(e1;e1,e1,f4) = -2*f1", || format!("negative control gives {shown}"))?;
    let others = corpus.catalog.len() - counts.iter().sum::<usize>();
    Ok(format!("13+9+29+45 entries (3 families) and {others} auxiliary ones pass; control fails with {shown}"))
}

fn table_regeneration(corpus: &Corpus) -> Outcome {
    let (mut rows, mut samples) = (0, 0);
    for k in [(4, 1), (1, 4), (3, 2), (2, 3)] {
        for e in corpus.catalog.of_kind(k) {
            let row = table_row(&e.algebra).map_err(|x| x.to_string())?;
            let d = e.expect.diff(&row);
            ensure(d.is_empty(), || format!("{}: {d:?}", e.name))?;
            ensure(e.expect.aut.is_some() && e.expect.ann.is_some(), || format!("{} has no expectation", e.name))?;
            rows += 1;
            let at = sample_parameters(&e.algebra, 4);
            ensure(!e.is_family() || at.len() == 4, || format!("{}: {} samples", e.name, at.len()))?;
            for s in at {
                let member = e.algebra.specialize(&s).map_err(|x| x.to_string())?;
                let d = e.expect.diff(&table_row(&member).map_err(|x| x.to_string())?);
                ensure(d.is_empty(), || format!("{} at {s}: {d:?}", e.name))?;
                samples += 1;
            }
        }
    }
    Ok(format!("{rows} rows match, families also at {samples} sampled values"))
}

fn degeneration_certificates(corpus: &Corpus) -> Outcome {
    let mut count = 0;
    let mut special = BTreeSet::new();
    for c in corpus.all_certificates() {
        let out = verify_degeneration(c, &corpus.catalog).map_err(|e| format!("{} -> {}: {e}", c.source, c.target))?;
        count += 1;
        let text = print_certificates(std::slice::from_ref(c));
        let pair = (c.source.as_str(), c.target.as_str());
        if pair == ("(2,3)_41", "(2,3)_40") && out.scale == 2 {
            special.insert("41->40 with L = 2");
        }
        if pair == ("(2,3)_31", "(2,3)_10") && text.contains("param lambda = t^-1\n") {
            special.insert("31^lambda->10 along lambda = t^-1");
        }
        if pair == ("(2,3)_44", "(2,3)_43") && text.contains("param phi = gamma\n") && out.samples_checked > 0 {
            special.insert("44^phi->43^gamma symbolic and sampled");
        }
        if c.source == "(2,3)_43" && text.contains("param gamma = t\n") {
            special.insert("43^gamma along gamma = t");
        }
        if c.source == "(2,3)_43" && text.contains("param gamma = t^-1\n") {
            special.insert("43^gamma along gamma = t^-1");
        }
    }
    ensure(special.len() == 5, || format!("missing special rows, found {special:?}"))?;
    Ok(format!("{count} certificates verify, including {}", special.into_iter().collect::<Vec<_>>().join(", ")))
}

fn non_degenerations(corpus: &Corpus) -> Outcome {
    let opts = NondegOptions { closed_set_samples: 10_000, ..NondegOptions::default() };
    let (mut ok, mut failures, mut flagged) = (0, Vec::new(), Vec::new());
    for (_, table) in &corpus.nondeg {
        let mut rows = verify_nondeg_table(table, &corpus.catalog, &opts).map_err(|e| e.to_string())?;
        apply_refutations(&mut rows, table.kind, &corpus.refutations, &corpus.catalog);
        for r in rows {
            let key = format!("{} {}->{}", kind_name(table.kind), r.source, r.target);
            match r.status {
                RowStatus::Matched | RowStatus::Strengthened => ok += 1,
                RowStatus::External => flagged.push(format!("{key} external")),
                RowStatus::Evidence { consistent: true } if r.note.contains("10000 random orbit points (seed 0): 0 in R") => {
                    flagged.push(format!("{key} evidence 0/10000"))
                }
                s => failures.push(format!("{key} {s} (stated {})", r.stated)),
            }
        }
    }
    flagged.sort();
    let want = ["(2,3) 30->7 evidence 0/10000", "(3,2) 28->10 external"];
    if flagged != want {
        failures.push(format!("flagged rows {flagged:?}"));
    }
    if failures.is_empty() {
        Ok(format!("{ok} rows certified; flagged: {}", flagged.join(", ")))
    } else {
        Err(format!("{ok} rows certified, {} not: {}", failures.len(), failures.join("; ")))
    }
}

fn profiles(corpus: &Corpus, kind: (usize, usize)) -> Result<HashMap<String, Profile>, String> {
    profiles_for(&corpus.catalog, kind, &default_identities(), Exec::default()).map_err(|e| e.to_string())
}

// the necessary conditions for J -> J' that fail
fn violations(j: &Profile, k: &Profile) -> Vec<String> {
    let mut out = Vec::new();
    if j.orbit_dim + usize::from(j.family) <= k.orbit_dim {
        out.push("orbit dimension".into());
    }
    if j.nilindex < k.nilindex {
        out.push("nilindex".into());
    }
    for p in 2..=j.powers.len().max(k.powers.len()) {
        let get = |x: &Profile| x.powers.get(p - 1).copied().unwrap_or_default();
        for parity in 0..2 {
            if get(j).get(parity) < get(k).get(parity) {
                out.push(format!("power {p}_{parity}"));
            }
        }
    }
    for parity in 0..2 {
        if j.ann.get(parity) > k.ann.get(parity) {
            out.push(format!("ann_{parity}"));
        }
        if j.center.get(parity) > k.center.get(parity) {
            out.push(format!("center_{parity}"));
        }
    }
    if j.associative && !k.associative {
        out.push("associativity".into());
    }
    for ((p, a), (_, b)) in j.identities.iter().zip(&k.identities) {
        if *a && !b {
            out.push(format!("identity {p}"));
        }
    }
    out
}

fn soundness(corpus: &Corpus) -> Outcome {
    let mut edges_checked = 0;
    for kind in KINDS {
        let prof = profiles(corpus, kind)?;
        let (edges, bad) = verified_edges(&corpus.catalog, kind, corpus.all_certificates());
        ensure(bad.is_empty(), || format!("{} certificates fail", bad.len()))?;
        for e in edges {
            let (j, k) = (&prof[&e.source], &prof[&e.target]);
            let v = violations(j, k);
            ensure(v.is_empty(), || format!("{} -> {} violates {v:?}", e.source, e.target))?;
            let b = battery(j, k);
            ensure(b.is_empty(), || format!("battery separates {} -> {}: {}", e.source, e.target, b[0]))?;
            edges_checked += 1;
        }
    }
    Ok(format!("{edges_checked} verified edges satisfy every necessary condition; battery inconclusive on all"))
}

fn graph(corpus: &Corpus, kind: (usize, usize)) -> Result<HasseGraph, String> {
    if kind == (4, 1) {
        return type41_diagram(&corpus.catalog, &corpus.type41_edges, &corpus.certificates_of_kind(kind)).map_err(|e| e.to_string());
    }
    let (edges, _) = verified_edges(&corpus.catalog, kind, corpus.all_certificates());
    build_hasse(&corpus.catalog, kind, &edges).map_err(|e| e.to_string())
}

fn component_check(corpus: &Corpus) -> Outcome {
    let expected: [&[&str]; 3] = [&["3", "6", "7", "9"], &["18", "19", "23", "25", "27", "29"], &["15", "33", "41", "31^lambda", "44^phi"]];
    let mut pairs = 0;
    for (kind, want) in KINDS.into_iter().zip(expected) {
        let g = graph(corpus, kind)?;
        let got: BTreeSet<&str> = g.maximal_nodes.iter().filter_map(|m| g.node(m)).map(|n| n.label.as_str()).collect();
        let want: BTreeSet<&str> = want.iter().copied().collect();
        ensure(got == want, || format!("{}: maximal {got:?}", kind_name(kind)))?;
        let (comps, seps) = components(&g, &profiles(corpus, kind)?).map_err(|e| e.to_string())?;
        ensure(seps.len() == comps.len() * (comps.len() - 1), || "separations missing".into())?;
        pairs += seps.len();
    }
    Ok(format!("maximal nodes 4, 6, 5 as expected; {pairs} ordered pairs separated by the battery"))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn hasse_figures(corpus: &Corpus) -> Outcome {
    let bless = std::env::var_os("SUPERJORDAN_BLESS").is_some();
    let dir = golden_dir();
    let gray = [((4, 1), 2), ((1, 4), 4), ((3, 2), 6), ((2, 3), 5)];
    for (kind, maximal) in gray {
        let g = graph(corpus, kind)?;
        if kind != (4, 1) {
            ensure(g.reduced_reachability() == g.reachability(), || format!("{}: reduction changes reachability", kind_name(kind)))?;
        }
        let dot = export_dot(&g);
        let circles = g.nodes.iter().filter(|n| n.associative).count();
        ensure(dot.matches("fillcolor=gray").count() == maximal, || format!("{}: gray nodes", kind_name(kind)))?;
        ensure(dot.matches("shape=circle").count() == circles, || format!("{}: circle nodes", kind_name(kind)))?;
        ensure(dot == export_dot(&g), || "export is not deterministic".into())?;
        let path = dir.join(format!("type_{}_{}.dot", kind.0, kind.1));
        if bless {
            std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
            std::fs::write(&path, &dot).map_err(|e| e.to_string())?;
        }
        let golden = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(golden == dot, || format!("{} differs from the golden file", path.display()))?;
    }
    // the command line writes the same bytes, run after run
    for _ in 0..2 {
        let out = tempfile::tempdir().map_err(|e| e.to_string())?;
        let status = Command::new(env!("CARGO_BIN_EXE_superjordan"))
            .args(["hasse", "--format", "csv", "--out"])
            .arg(out.path())
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || format!("hasse exits with {}", status.status))?;
        for (kind, _) in gray {
            let name = format!("type_{}_{}.dot", kind.0, kind.1);
            let written = std::fs::read_to_string(out.path().join(&name)).map_err(|e| e.to_string())?;
            let golden = std::fs::read_to_string(dir.join(&name)).map_err(|e| e.to_string())?;
            ensure(written == golden, || format!("command line {name} differs from the golden file"))?;
        }
    }
    Ok("reachability preserved by the reductions; gray/circle marks and DOT bytes match the golden files".into())
}

fn property_suites(corpus: &Corpus) -> Outcome {
    use common::*;
    run_cases(1000, (scalar(), scalar(), scalar()), |(a, b, c)| check_field_axioms(&a, &b, &c))?;
    run_cases(200, rational_matrix(), |m| check_rank(&m))?;
    let entries = sample_entries(corpus);
    run_cases(50, change_seed(), |s| check_fingerprint_invariance(&entries, &s))?;
    let files = check_corpus_round_trip()?;
    Ok(format!("field axioms x1000, rank x200, fingerprint 50 changes x10 entries, {files} files round-trip"))
}

fn main() {
    let corpus = match Corpus::embedded() {
        Ok(c) => c,
        Err(e) => {
            println!("corpus does not load: {e}");
            std::process::exit(1);
        }
    };
    let criteria: [(&str, fn(&Corpus) -> Outcome); 8] = [
        ("identity gate", identity_gate),
        ("table regeneration", table_regeneration),
        ("degeneration certificates", degeneration_certificates),
        ("non-degenerations", non_degenerations),
        ("soundness cross-check", soundness),
        ("components", component_check),
        ("hasse figures", hasse_figures),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&corpus);
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {} ({name}): PASS [{secs:.1}s] {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1}s] {d}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
