//! Checking a non-degeneration table row by row against the battery.

use std::collections::HashMap;
use std::fmt;

use crate::catalog::nondeg::NondegPair;
use crate::catalog::{Catalog, DegenerationCertificate, NondegTable};
use crate::exec::Exec;
use crate::identity::Identity;
use crate::invariants::InvariantError;

use super::battery::{battery, check_class, default_identities, Certificate, Profile};
use super::closed_set::closed_set_check;
use super::verify_degeneration;
use super::NondegClass;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    /// The stated class itself is certified.
    Matched,
    /// The stated functor reason is certified by a direct invariant.
    Strengthened,
    /// Only some other class is certified.
    Mismatch,
    /// No certificate at all.
    Inconclusive,
    /// Cited from outside; not checked.
    External,
    /// Closed-set evidence (not a proof).
    Evidence { consistent: bool },
    /// A label that does not name a catalog entry.
    Unresolved,
    /// A verified degeneration certificate exists for the pair.
    Refuted,
}

impl RowStatus {
    pub fn is_failure(&self) -> bool {
        matches!(self, RowStatus::Mismatch | RowStatus::Inconclusive | RowStatus::Unresolved | RowStatus::Refuted | RowStatus::Evidence { consistent: false })
    }

    pub fn is_flagged(&self) -> bool {
        matches!(self, RowStatus::External | RowStatus::Evidence { .. })
    }
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Matched => f.write_str("matched"),
            RowStatus::Strengthened => f.write_str("strengthened"),
            RowStatus::Mismatch => f.write_str("mismatch"),
            RowStatus::Inconclusive => f.write_str("inconclusive"),
            RowStatus::External => f.write_str("external"),
            RowStatus::Evidence { consistent: true } => f.write_str("evidence"),
            RowStatus::Evidence { consistent: false } => f.write_str("evidence-failed"),
            RowStatus::Unresolved => f.write_str("unresolved"),
            RowStatus::Refuted => f.write_str("refuted"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowVerdict {
    pub source: String,
    pub target: String,
    pub stated: NondegClass,
    pub status: RowStatus,
    /// The certificate that justifies the status, if any.
    pub certificate: Option<Certificate>,
    /// Every class the battery finds, in battery order.
    pub found: Vec<NondegClass>,
    pub note: String,
}

/// Options for [`verify_nondeg_table`].
#[derive(Debug, Clone)]
pub struct NondegOptions {
    pub exec: Exec,
    /// Random orbit points for closed-set rows.
    pub closed_set_samples: usize,
    pub seed: u64,
}

impl Default for NondegOptions {
    fn default() -> Self {
        NondegOptions { exec: Exec::default(), closed_set_samples: 10_000, seed: 0 }
    }
}

/// Identities used for a table: the defaults plus every identity it states.
pub fn table_identities(table: &NondegTable) -> Vec<Identity> {
    let mut ids = default_identities();
    for line in &table.lines {
        if let NondegClass::Identity(p) = &line.reason {
            if !ids.contains(p) {
                ids.push(p.clone());
            }
        }
    }
    ids
}

/// Battery profiles (depth 2) for every entry of one type.
pub fn profiles_for(
    catalog: &Catalog,
    kind: (usize, usize),
    identities: &[Identity],
    exec: Exec,
) -> Result<HashMap<String, Profile>, InvariantError> {
    let entries = catalog.of_kind(kind);
    let built = exec.map(&entries, |e| Profile::new(&e.algebra, identities, 2));
    entries.iter().zip(built).map(|(e, p)| Ok((e.name.clone(), p?))).collect()
}

fn judge(pair: &NondegPair, j: &Profile, k: &Profile) -> (RowStatus, Option<Certificate>, Vec<NondegClass>) {
    let all = battery(j, k);
    let found: Vec<NondegClass> = all.iter().map(|c| c.class.clone()).collect();
    if let Some(c) = check_class(j, k, &pair.reason) {
        return (RowStatus::Matched, Some(c), found);
    }
    match all.into_iter().next() {
        None => (RowStatus::Inconclusive, None, found),
        Some(first) if pair.reason.is_functor() && !first.class.is_functor() => (RowStatus::Strengthened, Some(first), found),
        Some(first) => (RowStatus::Mismatch, Some(first), found),
    }
}

/// Expands a table and checks every pair.
pub fn verify_nondeg_table(
    table: &NondegTable,
    catalog: &Catalog,
    opts: &NondegOptions,
) -> Result<Vec<RowVerdict>, InvariantError> {
    let ids = table_identities(table);
    let profiles = profiles_for(catalog, table.kind, &ids, opts.exec)?;
    let pairs = table.expand();
    let verdicts = opts.exec.map(&pairs, |pair| {
        let base = RowVerdict {
            source: pair.source.clone(),
            target: pair.target.clone(),
            stated: pair.reason.clone(),
            status: RowStatus::Unresolved,
            certificate: None,
            found: Vec::new(),
            note: String::new(),
        };
        let (Some(src), Some(tgt)) = (catalog.resolve(table.kind, &pair.source), catalog.resolve(table.kind, &pair.target)) else {
            return RowVerdict { note: "label not in catalog".into(), ..base };
        };
        let (j, k) = (&profiles[&src.name], &profiles[&tgt.name]);
        match pair.reason {
            NondegClass::External => {
                let found = battery(j, k).into_iter().map(|c| c.class).collect();
                RowVerdict { status: RowStatus::External, found, note: "cited, not checked".into(), ..base }
            }
            NondegClass::ClosedSetR => {
                // the pair is separated only by R; sampling runs sequentially inside the row
                let report = closed_set_check(&src.algebra, &tgt.algebra, opts.closed_set_samples, opts.seed, Exec::Sequential);
                let found = battery(j, k).into_iter().map(|c| c.class).collect();
                RowVerdict {
                    status: RowStatus::Evidence { consistent: report.consistent() },
                    found,
                    note: report.to_string().replace('\n', "; "),
                    ..base
                }
            }
            _ => {
                let (status, certificate, found) = judge(pair, j, k);
                let note = certificate.as_ref().map(ToString::to_string).unwrap_or_default();
                RowVerdict { status, certificate, found, note, ..base }
            }
        }
    });
    Ok(verdicts)
}

/// Marks every row whose pair is the source and target of a certificate in
/// `refutations` that verifies.
pub fn apply_refutations(verdicts: &mut [RowVerdict], kind: (usize, usize), refutations: &[DegenerationCertificate], catalog: &Catalog) {
    for v in verdicts.iter_mut() {
        let (Some(src), Some(tgt)) = (catalog.resolve(kind, &v.source), catalog.resolve(kind, &v.target)) else {
            continue;
        };
        let hit = refutations
            .iter()
            .filter(|c| c.source == src.name && c.target == tgt.name)
            .find(|c| verify_degeneration(c, catalog).is_ok());
        if let Some(c) = hit {
            v.status = RowStatus::Refuted;
            v.note = format!("verified degeneration {} -> {}", c.source, c.target);
        }
    }
}
