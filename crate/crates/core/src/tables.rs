//! Knot and link tables stored as JSON lines:
//! `{"name": "3_1", "pd": [[1,5,2,4],...], "det": 3}` with `det` optional.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::coloring::determinant;
use crate::diagram::{build_diagram, LinkDiagram, PdCode};

/// Environment variable naming an extra directory searched for tables.
pub const TABLE_DIR_ENV: &str = "LINKCHROMA_TABLE_DIR";

/// Prime knots through eight crossings.
pub const KNOTS8: &str = include_str!("../data/knots8.jsonl");
/// Small links of two and three components.
pub const LINKS: &str = include_str!("../data/links.jsonl");

const BUNDLED: [(&str, &str); 2] = [("knots8.jsonl", KNOTS8), ("links.jsonl", LINKS)];

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("cannot read table {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate name {name:?} (first seen on line {first})")]
    DuplicateName {
        line: usize,
        name: String,
        first: usize,
    },
    #[error("table {0:?} not found")]
    NotFound(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub name: String,
    pub pd: PdCode,
    #[serde(rename = "det", default, skip_serializing_if = "Option::is_none")]
    pub expected_det: Option<u64>,
}

impl TableEntry {
    /// Loaded entries always build, so this only fails on hand-made entries.
    pub fn diagram(&self) -> Result<LinkDiagram, crate::diagram::DiagramError> {
        build_diagram(&self.pd)
    }

    pub fn crossing_count(&self) -> usize {
        self.pd.crossing_count()
    }
}

pub fn load_table(path: &Path) -> Result<Vec<TableEntry>, TableError> {
    let text = std::fs::read_to_string(path).map_err(|source| TableError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_table(&text)
}

/// Parses JSON-lines table text. Blank lines are skipped; line numbers
/// in errors are 1-based.
pub fn parse_table(text: &str) -> Result<Vec<TableEntry>, TableError> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let entry: TableEntry = serde_json::from_str(raw).map_err(|e| TableError::Parse {
            line,
            message: e.to_string(),
        })?;
        if let Err(e) = entry.diagram() {
            return Err(TableError::Parse {
                line,
                message: e.to_string(),
            });
        }
        if let Some(&first) = seen.get(&entry.name) {
            return Err(TableError::DuplicateName {
                line,
                name: entry.name,
                first,
            });
        }
        seen.insert(entry.name.clone(), line);
        entries.push(entry);
    }
    Ok(entries)
}

/// One compact JSON object per line, in table order.
pub fn serialize_table(entries: &[TableEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&serde_json::to_string(e).expect("table entries serialize"));
        out.push('\n');
    }
    out
}

/// Both bundled tables, knots first.
pub fn bundled_entries() -> Vec<TableEntry> {
    BUNDLED
        .iter()
        .flat_map(|(_, text)| parse_table(text).expect("bundled tables are valid"))
        .collect()
}

/// Resolves a table by path, then by file name under `$LINKCHROMA_TABLE_DIR`,
/// then by bundled file name.
pub fn resolve_table(spec: &str) -> Result<Vec<TableEntry>, TableError> {
    let direct = Path::new(spec);
    if direct.is_file() {
        return load_table(direct);
    }
    if let Some(dir) = std::env::var_os(TABLE_DIR_ENV) {
        let candidate = Path::new(&dir).join(spec);
        if candidate.is_file() {
            return load_table(&candidate);
        }
    }
    match BUNDLED.iter().find(|(name, _)| *name == spec) {
        Some((_, text)) => parse_table(text),
        None => Err(TableError::NotFound(spec.to_string())),
    }
}

/// Finds an entry by name in the `*.jsonl` tables under `$LINKCHROMA_TABLE_DIR`
/// (sorted by file name), then in the bundled tables.
pub fn lookup_entry(name: &str) -> Result<Option<TableEntry>, TableError> {
    if let Some(dir) = std::env::var_os(TABLE_DIR_ENV) {
        let mut files: Vec<PathBuf> = match std::fs::read_dir(&dir) {
            Ok(rd) => rd
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
                .collect(),
            Err(source) => {
                return Err(TableError::Io {
                    path: PathBuf::from(dir),
                    source,
                })
            }
        };
        files.sort();
        for f in files {
            if let Some(e) = load_table(&f)?.into_iter().find(|e| e.name == name) {
                return Ok(Some(e));
            }
        }
    }
    Ok(bundled_entries().into_iter().find(|e| e.name == name))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub name: String,
    pub expected: u64,
    pub computed: BigUint,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub checked: usize,
    /// entries without an expected determinant
    pub skipped: Vec<String>,
    pub mismatches: Vec<Mismatch>,
}

impl CheckReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares computed determinants against the `det` column.
pub fn check_expected(entries: &[TableEntry]) -> CheckReport {
    let mut report = CheckReport::default();
    for e in entries {
        let Some(expected) = e.expected_det else {
            report.skipped.push(e.name.clone());
            continue;
        };
        report.checked += 1;
        let computed = match e.diagram() {
            Ok(d) => determinant(&d),
            // an entry that does not build cannot match anything
            Err(_) => BigUint::default(),
        };
        if computed != BigUint::from(expected) {
            report.mismatches.push(Mismatch {
                name: e.name.clone(),
                expected,
                computed,
            });
        }
    }
    report
}
