use superjordan::catalog::parse_certificates;
use superjordan::corpus::Corpus;
use superjordan::degeneration::verify_degeneration;

#[test]
fn every_shipped_certificate_verifies() {
    let corpus = Corpus::embedded().unwrap();
    let mut failures = Vec::new();
    let mut count = 0;
    for (file, certs) in &corpus.certificates {
        for c in certs {
            count += 1;
            if let Err(e) = verify_degeneration(c, &corpus.catalog) {
                failures.push(format!("{file}: {} -> {}: {e}", c.source, c.target));
            }
        }
    }
    assert!(count > 150, "{count}");
    assert!(failures.is_empty(), "{} of {count} fail:\n{}", failures.len(), failures.join("\n"));
}

// bases that look plausible but do not reach the stated target; the shipped
// files use corrected versions of each
const WRONG: &[(&str, &str, Option<&str>, &[&str])] = &[
    ("(1,4)_9", "(1,4)_4", None, &["E1 = e1", "F1 = f1", "F2 = f2", "F3 = t*f3", "F4 = t*f4"]),
    ("(3,2)_13", "(3,2)_12", None, &["E1 = e1", "E2 = e2", "E3 = e3", "F1 = f1", "F2 = t*f2"]),
    ("(3,2)_14", "(3,2)_13", None, &["E1 = e1", "E2 = e2", "E3 = e3 - t^-1*e2", "F1 = f1", "F2 = t*f2"]),
    ("(3,2)_16", "(3,2)_8", None, &["E1 = e1 + e2", "E2 = 2*e3", "E3 = -2*t*e2", "F1 = -2*t*f1", "F2 = f2"]),
    ("(3,2)_25", "(3,2)_16", None, &["E1 = t*e1 + t*e2", "E2 = t*e2 + 2*t*e3", "E3 = t^2*e3", "F1 = t*f1", "F2 = f2"]),
    ("(3,2)_26", "(3,2)_17", None, &["E1 = t*e1", "E2 = t^2*e2", "E3 = t^3*e3", "F1 = t*f1", "F2 = t^2*f2"]),
    ("(2,3)_27", "(2,3)_26", None, &["E1 = e1", "E2 = e2", "F1 = t*f1", "F2 = t*f2", "F3 = t^-1*f1 + f3"]),
    (
        "(2,3)_38",
        "(2,3)_36",
        None,
        &["E1 = 1/2*t^-1*e1 - 1/4*t^-1*e2", "E2 = 1/4*t^-2*e2", "F1 = 1/4*t^-2*f1", "F2 = f2", "F3 = 1/2*t^-1*f3"],
    ),
    ("(2,3)_44", "(2,3)_34", Some("phi = t^-1"), &["E1 = -e1", "E2 = e2", "F1 = t^-1*f1", "F2 = f3", "F3 = f2"]),
];

#[test]
fn near_miss_bases_are_rejected() {
    let corpus = Corpus::embedded().unwrap();
    for (src, tgt, param, basis) in WRONG {
        let mut text = format!("[degeneration]\nsource = \"{src}\"\ntarget = \"{tgt}\"\n");
        if let Some(p) = param {
            text += &format!("param {p}\n");
        }
        for b in *basis {
            text += &format!("basis {b}\n");
        }
        let cert = parse_certificates(&text, &corpus.catalog).unwrap().remove(0);
        assert!(verify_degeneration(&cert, &corpus.catalog).is_err(), "{src} -> {tgt} verified");
    }
}
