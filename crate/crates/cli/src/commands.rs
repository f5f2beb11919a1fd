//! The subcommands. Each returns a report; artifacts (DOT, CSV) are returned
//! separately so the caller decides where they go.

use std::collections::BTreeMap;

use thiserror::Error;

use superjordan::catalog::{kind_name, parse_certificates, CatalogEntry, DegenerationCertificate, ParseError};
use superjordan::corpus::{Corpus, CorpusError};
use superjordan::degeneration::{
    apply_refutations, default_identities, profiles_for, verify_degeneration, verify_nondeg_table, NondegOptions, RowStatus,
};
use superjordan::graph::{build_hasse, components, export_dot, type41_diagram, verified_edges, EdgeStatus, GraphError, HasseGraph};
use superjordan::identity::{check_jordan_superidentity, check_supercommutativity};
use superjordan::invariants::{power_filtration, sample_parameters, table_row, InvariantError};
use superjordan::Exec;

use crate::report::{Check, RunReport, Status};

pub type Kind = (usize, usize);

/// Superalgebra types with degeneration data, in report order.
pub const KINDS: [Kind; 4] = [(4, 1), (1, 4), (3, 2), (2, 3)];

/// Expected number of irreducible components per type.
pub const COMPONENT_COUNTS: [(Kind, usize); 3] = [((1, 4), 4), ((3, 2), 6), ((2, 3), 5)];

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("{file}: {source}")]
    Parse { file: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl CliError {
    /// 2 for usage, I/O and parse errors, 1 for inconsistent data.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) | CliError::Graph(_) => 1,
            _ => 2,
        }
    }
}

fn entries(corpus: &Corpus, kind: Option<Kind>) -> Vec<&CatalogEntry> {
    match kind {
        Some(k) => corpus.catalog.of_kind(k),
        None => corpus.catalog.entries().iter().collect(),
    }
}

fn group(e: &CatalogEntry) -> String {
    kind_name(e.kind())
}

/// Supercommutativity, the Jordan superidentity and nilpotency per entry.
pub fn check(corpus: &Corpus, kind: Option<Kind>, exec: Exec) -> RunReport {
    let es = entries(corpus, kind);
    let checks = exec.map(&es, |e| {
        let j = &e.algebra;
        let verdict = if !check_supercommutativity(j) {
            Err("not supercommutative".to_string())
        } else if let Err(c) = check_jordan_superidentity(j, Exec::Sequential) {
            Err(c.to_string())
        } else {
            power_filtration(j).map(|pf| format!("nilindex {}", pf.nilindex)).map_err(|e| e.to_string())
        };
        match verdict {
            Ok(d) => Check::new(group(e), &e.name, Status::Pass, d),
            Err(d) => Check::new(group(e), &e.name, Status::Fail, d),
        }
    });
    RunReport { checks, ..RunReport::default() }
}

/// Recomputes Obs / nilindex / Aut / Ann and compares them with the
/// expectations stored in the catalog. Families are checked over `Q(p)` and
/// at four admissible parameter values.
pub fn invariants(corpus: &Corpus, kind: Option<Kind>, exec: Exec) -> RunReport {
    let es: Vec<&CatalogEntry> = entries(corpus, kind).into_iter().filter(|e| e.expect != Default::default()).collect();
    let rows = exec.map(&es, |e| -> (Check, String) {
        let row = match table_row(&e.algebra) {
            Ok(r) => r,
            Err(err) => return (Check::new(group(e), &e.name, Status::Fail, err.to_string()), String::new()),
        };
        let mut diffs = e.expect.diff(&row);
        let samples = sample_parameters(&e.algebra, 4);
        for s in &samples {
            let at = e.algebra.specialize(s).map_err(|x| x.to_string()).and_then(|m| table_row(&m).map_err(|x| x.to_string()));
            match at {
                Ok(r) => diffs.extend(e.expect.diff(&r).into_iter().map(|d| format!("at {s}: {d}"))),
                Err(x) => diffs.push(format!("at {s}: {x}")),
            }
        }
        let line = format!("{:<14} {:<3} {:>8} {:>4} {:>6}", e.name, obs(row.associative), row.nilindex, row.aut, row.ann.to_string());
        let check = if diffs.is_empty() {
            let mut d = row.to_string();
            if !samples.is_empty() {
                d += &format!(" (and at {} samples)", samples.len());
            }
            Check::new(group(e), &e.name, Status::Pass, d)
        } else {
            Check::new(group(e), &e.name, Status::Fail, diffs.join("; "))
        };
        (check, line)
    });
    let mut body = format!("{:<14} {:<3} {:>8} {:>4} {:>6}\n", "algebra", "Obs", "nilindex", "Aut", "Ann");
    let mut checks = Vec::new();
    for (c, line) in rows {
        body.push_str(&line);
        body.push('\n');
        checks.push(c);
    }
    RunReport { checks, body: Some(body), ..RunReport::default() }
}

fn obs(a: bool) -> &'static str {
    if a {
        "A"
    } else {
        "NA"
    }
}

/// Certificates to verify: the given files, or every shipped one.
pub fn load_certificates(corpus: &Corpus, files: &[(String, String)]) -> Result<Vec<DegenerationCertificate>, CliError> {
    let mut out = Vec::new();
    for (name, text) in files {
        out.extend(parse_certificates(text, &corpus.catalog).map_err(|source| CliError::Parse { file: name.clone(), source })?);
    }
    Ok(out)
}

pub fn degenerate(corpus: &Corpus, certs: &[DegenerationCertificate], kind: Option<Kind>, exec: Exec) -> RunReport {
    let picked: Vec<&DegenerationCertificate> = certs
        .iter()
        .filter(|c| kind.is_none_or(|k| corpus.catalog.get(&c.source).is_some_and(|e| e.kind() == k)))
        .collect();
    let checks = exec.map(&picked, |c| {
        let g = corpus.catalog.get(&c.source).map(group).unwrap_or_default();
        let name = format!("{} -> {}", c.source, c.target);
        match verify_degeneration(c, &corpus.catalog) {
            Ok(out) => {
                let mut d = format!("limit matches (L = {})", out.scale);
                if out.samples_checked > 0 {
                    d += &format!(", {} samples", out.samples_checked);
                }
                Check::new(g, name, Status::Pass, d)
            }
            Err(e) => Check::new(g, name, Status::Fail, e.to_string()),
        }
    });
    RunReport { checks, ..RunReport::default() }
}

pub struct NondegArgs {
    pub table: Option<u32>,
    pub kind: Option<Kind>,
    pub samples: usize,
    pub seed: u64,
}

/// Checks the non-degeneration tables row by row; verified refutations mark
/// a row as failed.
pub fn nondegenerate(corpus: &Corpus, args: &NondegArgs, exec: Exec) -> Result<RunReport, CliError> {
    let tables: Vec<_> = corpus
        .nondeg
        .iter()
        .map(|(_, t)| t)
        .filter(|t| args.table.is_none_or(|id| t.id == id) && args.kind.is_none_or(|k| t.kind == k))
        .collect();
    if tables.is_empty() && (args.table.is_some() || args.kind.is_some()) {
        return Err(CliError::Usage("no non-degeneration table matches the selection".into()));
    }
    let opts = NondegOptions { exec, closed_set_samples: args.samples, seed: args.seed };
    let mut report = RunReport::default();
    for t in tables {
        let mut rows = verify_nondeg_table(t, &corpus.catalog, &opts)?;
        apply_refutations(&mut rows, t.kind, &corpus.refutations, &corpus.catalog);
        for r in rows {
            let status = match r.status {
                RowStatus::Matched | RowStatus::Strengthened => Status::Pass,
                ref s if s.is_flagged() && !s.is_failure() => Status::Flagged,
                _ => Status::Fail,
            };
            let mut detail = format!("stated {}: {}", r.stated, r.status);
            if !r.note.is_empty() {
                detail += &format!("; {}", r.note);
            }
            report.push(Check::new(kind_name(t.kind), format!("{} -/-> {}", r.source, r.target), status, detail));
        }
    }
    Ok(report)
}

/// The diagram of one type: from the shipped certificates, or lifted from
/// the even parts for (4,1).
pub fn diagram(corpus: &Corpus, kind: Kind) -> Result<(HasseGraph, Vec<String>), CliError> {
    if kind == (4, 1) {
        let g = type41_diagram(&corpus.catalog, &corpus.type41_edges, &corpus.certificates_of_kind(kind))?;
        return Ok((g, Vec::new()));
    }
    let (edges, bad) = verified_edges(&corpus.catalog, kind, corpus.all_certificates());
    let bad = bad.into_iter().map(|(c, e)| format!("{} -> {}: {e}", c.source, c.target)).collect();
    Ok((build_hasse(&corpus.catalog, kind, &edges)?, bad))
}

fn selected_kinds(kind: Option<Kind>) -> Vec<Kind> {
    kind.map_or_else(|| KINDS.to_vec(), |k| vec![k])
}

/// `(file stem, DOT, CSV)` per type.
pub type Artifact = (String, String, String);

pub fn hasse(corpus: &Corpus, kind: Option<Kind>) -> Result<(RunReport, Vec<Artifact>), CliError> {
    let mut report = RunReport::default();
    let mut artifacts = Vec::new();
    for k in selected_kinds(kind) {
        let (g, bad) = diagram(corpus, k)?;
        let name = kind_name(k);
        for b in &bad {
            report.push(Check::new(&name, "certificate", Status::Fail, b));
        }
        let count = |s| g.edges.iter().filter(|e| e.status == s).count();
        report.push(Check::new(&name, "edges", Status::Pass, format!("{} verified", count(EdgeStatus::Verified))));
        let imported = count(EdgeStatus::Imported);
        if imported > 0 {
            report.push(Check::new(&name, "imported edges", Status::Flagged, format!("{imported} edges without a certificate")));
        }
        let same = g.reduced_reachability() == g.reachability();
        report.push(Check::pass_if(&name, "reduction", same, format!("{} reduced edges, same reachability: {same}", g.reduced_edges.len())));
        let labels: Vec<&str> = g.maximal_nodes.iter().filter_map(|m| g.node(m)).map(|n| n.label.as_str()).collect();
        report.push(Check::new(&name, "maximal nodes", Status::Pass, labels.join(" ")));
        let (m, n) = k;
        artifacts.push((format!("type_{m}_{n}"), export_dot(&g), g.to_csv()));
    }
    Ok((report, artifacts))
}

pub fn components_report(corpus: &Corpus, kind: Option<Kind>, exec: Exec) -> Result<RunReport, CliError> {
    let expected: BTreeMap<Kind, usize> = COMPONENT_COUNTS.into_iter().collect();
    let mut report = RunReport::default();
    for k in selected_kinds(kind) {
        let (g, bad) = diagram(corpus, k)?;
        let name = kind_name(k);
        for b in &bad {
            report.push(Check::new(&name, "certificate", Status::Fail, b));
        }
        let profiles = profiles_for(&corpus.catalog, k, &default_identities(), exec)?;
        match components(&g, &profiles) {
            Ok((comps, seps)) => {
                for c in &comps {
                    report.push(Check::new(&name, format!("component {}", c.label), Status::Pass, c.to_string()));
                }
                report.push(Check::new(&name, "separations", Status::Pass, format!("{} ordered pairs certified", seps.len())));
                match expected.get(&k) {
                    Some(&want) => report.push(Check::pass_if(
                        &name,
                        "components",
                        comps.len() == want,
                        format!("{} (expected {want})", comps.len()),
                    )),
                    None => {
                        let imported = g.edges.iter().filter(|e| e.status == EdgeStatus::Imported).count();
                        report.push(Check::new(
                            &name,
                            "components",
                            Status::Flagged,
                            format!("{} from a diagram with {imported} imported edges", comps.len()),
                        ));
                    }
                }
            }
            Err(e) => report.push(Check::new(&name, "separations", Status::Fail, e.to_string())),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::fs;
    use std::path::Path;

    use superjordan::corpus::{CorpusText, CATALOG_FILES};

    use super::*;
    use crate::report::Format;

    fn embedded() -> Corpus {
        Corpus::embedded().unwrap()
    }

    fn write_catalog(dir: &Path, name: &str, text: &str) {
        fs::create_dir_all(dir.join("catalog")).unwrap();
        fs::write(dir.join("catalog").join(name), text).unwrap();
    }

    #[test]
    fn check_passes_the_shipped_catalog() {
        let r = check(&embedded(), Some((2, 3)), Exec::default());
        assert_eq!(r.summary().checks, 45);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn check_reports_the_failing_quadruple() {
        let dir = tempfile::tempdir().unwrap();
        write_catalog(
            dir.path(),
            "bad.cat",
            "[superalgebra]\nname = \"(1,4)_bad\"\neven = 1\nodd = 4\nproduct e1*f2 = f1\nproduct e1*f3 = f2\nproduct e1*f4 = f3\n",
        );
        let corpus = Corpus::from_dir(dir.path()).unwrap();
        let r = check(&corpus, None, Exec::Sequential);
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.checks[0].detail, "J^s(e1;e1,e1,f4) = -2*f1");
    }

    #[test]
    fn empty_catalog_passes() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = Corpus::from_dir(dir.path()).unwrap();
        let r = check(&corpus, None, Exec::Sequential);
        assert_eq!((r.summary().checks, r.exit_code()), (0, 0));
    }

    #[test]
    fn invariants_match_for_two_types() {
        let corpus = embedded();
        for (k, n) in [((3, 2), 29), ((1, 4), 9)] {
            let r = invariants(&corpus, Some(k), Exec::default());
            assert_eq!(r.summary().passed, n, "{k:?}");
            assert_eq!(r.exit_code(), 0);
        }
    }

    #[test]
    fn one_corrupted_expectation_gives_one_diff() {
        let text = CATALOG_FILES.iter().find(|(n, _)| *n == "type_3_2.cat").unwrap().1;
        let dir = tempfile::tempdir().unwrap();
        write_catalog(dir.path(), "type_3_2.cat", &text.replacen("expect aut = 13", "expect aut = 14", 1));
        let r = invariants(&Corpus::from_dir(dir.path()).unwrap(), None, Exec::default());
        let failed: Vec<_> = r.checks.iter().filter(|c| c.status == Status::Fail).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].detail, "aut: expected 14, got 13");
    }

    #[test]
    fn degenerate_all_for_one_type() {
        let corpus = embedded();
        let certs: Vec<_> = corpus.all_certificates().cloned().collect();
        let r = degenerate(&corpus, &certs, Some((2, 3)), Exec::default());
        assert!(r.summary().checks > 50);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn unknown_certificate_target_is_a_parse_error() {
        let corpus = embedded();
        let text = "[degeneration]\nsource = \"(1,4)_9\"\ntarget = \"(1,4)_99\"\nbasis E1 = e1\n".to_string();
        let err = load_certificates(&corpus, &[("x.deg".into(), text)]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn flagged_rows_alone_exit_zero() {
        // only the (2,3) closed-set row and the cited (3,2) row
        let corpus = embedded();
        let args = NondegArgs { table: None, kind: Some((3, 2)), samples: 100, seed: 0 };
        let r = nondegenerate(&corpus, &args, Exec::default()).unwrap();
        let flagged: Vec<_> = r.checks.iter().filter(|c| c.status == Status::Flagged).map(|c| c.check.as_str()).collect();
        assert_eq!(flagged, ["28 -/-> 10"]);

        let mut only = RunReport::default();
        only.checks = r.checks.into_iter().filter(|c| c.status != Status::Fail).collect();
        assert_eq!(only.exit_code(), 0);
        assert!(only.summary().flagged > 0);
    }

    #[test]
    fn components_of_type_1_4() {
        let r = components_report(&embedded(), Some((1, 4)), Exec::default()).unwrap();
        let comps: Vec<&str> = r.checks.iter().filter_map(|c| c.check.strip_prefix("component ")).collect();
        assert_eq!(comps, ["3", "6", "7", "9"]);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn hasse_marks_six_maximal_nodes_of_type_3_2() {
        let (r, art) = hasse(&embedded(), Some((3, 2))).unwrap();
        assert_eq!(r.exit_code(), 0);
        assert_eq!(art[0].1.matches("fillcolor=gray").count(), 6);
    }

    #[test]
    fn reports_are_deterministic() {
        let corpus = Corpus::parse(&CorpusText::embedded()).unwrap();
        let run = || {
            let args = NondegArgs { table: None, kind: Some((1, 4)), samples: 50, seed: 3 };
            let mut out = nondegenerate(&corpus, &args, Exec::Parallel).unwrap().render(Format::Jsonl);
            out += &check(&corpus, None, Exec::Parallel).render(Format::Csv);
            out
        };
        assert_eq!(run(), run());
    }
}
