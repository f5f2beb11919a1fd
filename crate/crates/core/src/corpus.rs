//! The shipped data files, embedded at compile time. A directory with the
//! same layout can replace them at run time.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::catalog::{parse_catalog, parse_certificates, parse_nondeg_table, Catalog, DegenerationCertificate, NondegTable, ParseError};

/// `(file name, contents)` pairs, in a fixed order.
pub const CATALOG_FILES: &[(&str, &str)] = &[
    ("jordan_le3.cat", include_str!("../data/catalog/jordan_le3.cat")),
    ("type_4_1.cat", include_str!("../data/catalog/type_4_1.cat")),
    ("type_1_4.cat", include_str!("../data/catalog/type_1_4.cat")),
    ("type_3_2.cat", include_str!("../data/catalog/type_3_2.cat")),
    ("type_2_3.cat", include_str!("../data/catalog/type_2_3.cat")),
];

pub const CERTIFICATE_FILES: &[(&str, &str)] = &[
    ("type_4_1.deg", include_str!("../data/certificates/type_4_1.deg")),
    ("degenerations_1_4.deg", include_str!("../data/certificates/degenerations_1_4.deg")),
    ("degenerations_3_2.deg", include_str!("../data/certificates/degenerations_3_2.deg")),
    ("degenerations_2_3.deg", include_str!("../data/certificates/degenerations_2_3.deg")),
    ("family_member_2_3.deg", include_str!("../data/certificates/family_member_2_3.deg")),
];

pub const NONDEG_FILES: &[(&str, &str)] = &[
    ("nondegenerations_1_4.nd", include_str!("../data/nondeg/nondegenerations_1_4.nd")),
    ("nondegenerations_3_2.nd", include_str!("../data/nondeg/nondegenerations_3_2.nd")),
    ("nondegenerations_2_3.nd", include_str!("../data/nondeg/nondegenerations_2_3.nd")),
];

/// Degenerations between pairs listed as non-degenerations; kept apart from
/// the certificates so they never enter the Hasse diagrams.
pub const REFUTATION_FILES: &[(&str, &str)] = &[("refutations.deg", include_str!("../data/refutations/refutations.deg"))];

/// Edge list for type (4,1) lifted from the even parts (`source,target` per line).
pub const TYPE41_EDGES: &str = include_str!("../data/edges/type_4_1.csv");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{file}: {source}")]
    Parse { file: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

/// Raw text of every data file, either embedded or read from `dir`.
#[derive(Debug, Clone, Default)]
pub struct CorpusText {
    pub catalogs: Vec<(String, String)>,
    pub certificates: Vec<(String, String)>,
    pub nondeg: Vec<(String, String)>,
    pub refutations: Vec<(String, String)>,
    pub type41_edges: String,
}

fn owned(files: &[(&str, &str)]) -> Vec<(String, String)> {
    files.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect()
}

impl CorpusText {
    pub fn embedded() -> Self {
        CorpusText {
            catalogs: owned(CATALOG_FILES),
            certificates: owned(CERTIFICATE_FILES),
            nondeg: owned(NONDEG_FILES),
            refutations: owned(REFUTATION_FILES),
            type41_edges: TYPE41_EDGES.to_string(),
        }
    }

    /// Reads `dir/{catalog,certificates,nondeg,refutations,edges}`; missing subdirectories are empty.
    pub fn load_dir(dir: &Path) -> Result<Self, CorpusError> {
        let read_sub = |sub: &str, ext: &str| -> Result<Vec<(String, String)>, CorpusError> {
            let path = dir.join(sub);
            if !path.is_dir() {
                return Ok(Vec::new());
            }
            let io_err = |source| CorpusError::Io { path: path.clone(), source };
            let mut files: Vec<PathBuf> = fs::read_dir(&path)
                .map_err(io_err)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == ext))
                .collect();
            files.sort();
            files
                .into_iter()
                .map(|p| {
                    let text = fs::read_to_string(&p).map_err(|source| CorpusError::Io { path: p.clone(), source })?;
                    Ok((p.file_name().unwrap_or_default().to_string_lossy().into_owned(), text))
                })
                .collect()
        };
        let edges = dir.join("edges").join("type_4_1.csv");
        Ok(CorpusText {
            catalogs: read_sub("catalog", "cat")?,
            certificates: read_sub("certificates", "deg")?,
            nondeg: read_sub("nondeg", "nd")?,
            refutations: read_sub("refutations", "deg")?,
            type41_edges: if edges.is_file() {
                fs::read_to_string(&edges).map_err(|source| CorpusError::Io { path: edges.clone(), source })?
            } else {
                String::new()
            },
        })
    }
}

/// Parsed corpus.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub catalog: Catalog,
    /// Certificates grouped by file.
    pub certificates: Vec<(String, Vec<DegenerationCertificate>)>,
    pub nondeg: Vec<(String, NondegTable)>,
    pub refutations: Vec<DegenerationCertificate>,
    pub type41_edges: Vec<(String, String)>,
}

impl Corpus {
    pub fn embedded() -> Result<Self, CorpusError> {
        Self::parse(&CorpusText::embedded())
    }

    pub fn from_dir(dir: &Path) -> Result<Self, CorpusError> {
        Self::parse(&CorpusText::load_dir(dir)?)
    }

    pub fn parse(text: &CorpusText) -> Result<Self, CorpusError> {
        let files = text
            .catalogs
            .iter()
            .map(|(n, t)| parse_catalog(t).map_err(perr(n)))
            .collect::<Result<Vec<_>, _>>()?;
        let catalog = Catalog::from_files(files).map_err(perr("catalog"))?;
        let certificates = text
            .certificates
            .iter()
            .map(|(n, t)| Ok((n.clone(), parse_certificates(t, &catalog).map_err(perr(n))?)))
            .collect::<Result<Vec<_>, CorpusError>>()?;
        let nondeg = text
            .nondeg
            .iter()
            .map(|(n, t)| Ok((n.clone(), parse_nondeg_table(t).map_err(perr(n))?)))
            .collect::<Result<Vec<_>, CorpusError>>()?;
        let mut refutations = Vec::new();
        for (n, t) in &text.refutations {
            refutations.extend(parse_certificates(t, &catalog).map_err(perr(n))?);
        }
        let type41_edges = parse_edges(&text.type41_edges).map_err(perr("type_4_1.csv"))?;
        Ok(Corpus { catalog, certificates, nondeg, refutations, type41_edges })
    }

    pub fn all_certificates(&self) -> impl Iterator<Item = &DegenerationCertificate> {
        self.certificates.iter().flat_map(|(_, c)| c)
    }

    /// Certificates whose source has type `kind`.
    pub fn certificates_of_kind(&self, kind: (usize, usize)) -> Vec<&DegenerationCertificate> {
        self.all_certificates()
            .filter(|c| self.catalog.get(&c.source).is_some_and(|e| e.kind() == kind))
            .collect()
    }

    pub fn nondeg_table(&self, id: u32) -> Option<&NondegTable> {
        self.nondeg.iter().map(|(_, t)| t).find(|t| t.id == id)
    }
}

fn perr(file: &str) -> impl Fn(ParseError) -> CorpusError {
    let file = file.to_string();
    move |source| CorpusError::Parse { file: file.clone(), source }
}

/// `source,target` lines with an optional header and `#` comments.
pub fn parse_edges(text: &str) -> Result<Vec<(String, String)>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line == "source,target" {
            continue;
        }
        let (s, t) = line.split_once(',').ok_or(ParseError { line: i + 1, reason: "expected `source,target`".into() })?;
        out.push((s.trim().to_string(), t.trim().to_string()));
    }
    Ok(out)
}
