//! Solidity source-tree extraction: scan `.sol` files, tokenize and parse a
//! documented subset of the language, resolve call targets against the
//! project symbol table, and emit the four-column call-record table.

pub mod lexer;
pub mod parser;
pub mod resolver;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_declarations, ParsedUnit};
pub use resolver::SymbolTable;

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("project root {root}: {message}")]
    MissingRoot { root: PathBuf, message: String },
    #[error("line {line}: {message}")]
    Lex { line: u32, message: String },
    #[error("{file}:{line}: {message}")]
    LexInFile { file: String, line: u32, message: String },
    #[error("{file}:{line}: {message}")]
    Parse { file: String, line: u32, message: String },
    #[error("malformed call table: {0}")]
    Table(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ExtractError {
    pub fn with_file(self, file: &str) -> Self {
        match self {
            ExtractError::Lex { line, message } => ExtractError::LexInFile {
                file: file.to_string(),
                line,
                message,
            },
            other => other,
        }
    }
}

/// One `.sol` file, path relative to the scan root with `/` separators.
#[derive(Debug, Clone)]
pub struct SourceUnit {
    pub path: String,
    pub text: String,
    pub pragma_versions: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractKind {
    Contract,
    Library,
    Interface,
    AbstractContract,
}

impl fmt::Display for ContractKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ContractKind::Contract => "contract",
            ContractKind::Library => "library",
            ContractKind::Interface => "interface",
            ContractKind::AbstractContract => "abstract-contract",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visibility {
    Public,
    External,
    Internal,
    Private,
    Unspecified,
}

impl fmt::Display for Visibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Visibility::Public => "public",
            Visibility::External => "external",
            Visibility::Internal => "internal",
            Visibility::Private => "private",
            Visibility::Unspecified => "unspecified",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    Function,
    Constructor,
    Fallback,
    Receive,
    Modifier,
}

#[derive(Debug, Clone)]
pub struct ContractDecl {
    pub name: String,
    pub kind: ContractKind,
    pub file: String,
    pub bases: Vec<String>,
    pub state_var_types: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub struct FunctionDecl {
    pub contract: String,
    /// constructors are the literal name "constructor", fallback/receive
    /// likewise
    pub name: String,
    pub kind: FunctionKind,
    pub visibility: Visibility,
    pub ordinal: u32,
}

/// One observed call: file, source contract, source function, and the target
/// contract (`None` when the receiver cannot be resolved inside the project).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallRecord {
    pub file: String,
    pub source_contract: String,
    pub source_function: String,
    pub target_contract: Option<String>,
}

#[derive(Debug, Default)]
pub struct ExtractedProject {
    pub contracts: Vec<ContractDecl>,
    pub functions: Vec<FunctionDecl>,
    pub records: Vec<CallRecord>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Default)]
pub struct ScanResult {
    pub units: Vec<SourceUnit>,
    pub warnings: Vec<String>,
}

/// Every `.sol` file under `root`, recursively, in lexicographic order of the
/// relative path. Files that are unreadable or not valid UTF-8 are skipped
/// with a warning.
pub fn scan_project(root: &Path) -> Result<ScanResult, ExtractError> {
    if !root.is_dir() {
        return Err(ExtractError::MissingRoot {
            root: root.to_path_buf(),
            message: "not a readable directory".into(),
        });
    }
    let mut paths: Vec<(String, PathBuf)> = Vec::new();
    let mut warnings = Vec::new();
    for entry in walkdir::WalkDir::new(root) {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                warnings.push(format!("skipping unreadable entry: {e}"));
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        if entry.path().extension().and_then(|e| e.to_str()) != Some("sol") {
            continue;
        }
        let rel = entry
            .path()
            .strip_prefix(root)
            .unwrap_or(entry.path())
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect::<Vec<_>>()
            .join("/");
        paths.push((rel, entry.path().to_path_buf()));
    }
    paths.sort_by(|a, b| a.0.cmp(&b.0));

    let mut units = Vec::new();
    for (rel, abs) in paths {
        let bytes = match fs::read(&abs) {
            Ok(b) => b,
            Err(e) => {
                warnings.push(format!("skipping unreadable file {rel}: {e}"));
                continue;
            }
        };
        match String::from_utf8(bytes) {
            Ok(text) => units.push(SourceUnit {
                path: rel,
                text,
                pragma_versions: Vec::new(),
            }),
            Err(_) => warnings.push(format!("skipping non-UTF-8 file {rel}")),
        }
    }
    Ok(ScanResult { units, warnings })
}

/// Tokenize, parse, and resolve a set of in-memory units. Units must already
/// be ordered; per-file parsing is independent, resolution runs once over the
/// merged symbol table.
pub fn extract_units(units: &[SourceUnit]) -> Result<ExtractedProject, ExtractError> {
    let mut parsed_units = Vec::new();
    for unit in units {
        let tokens = tokenize(&unit.text).map_err(|e| e.with_file(&unit.path))?;
        let parsed = parse_declarations(&tokens, &unit.path)?;
        parsed_units.push((unit.path.clone(), tokens, parsed));
    }
    let pairs: Vec<(String, ParsedUnit)> = parsed_units
        .iter()
        .map(|(p, _, u)| (p.clone(), u.clone()))
        .collect();
    let (table, warnings) = SymbolTable::build(&pairs);
    let records = resolver::resolve_project(&parsed_units, &table);
    let (contracts, functions) = resolver::declarations(&parsed_units, &table);
    Ok(ExtractedProject {
        contracts,
        functions,
        records,
        warnings,
    })
}

/// Scan + extract in one step.
pub fn extract_project(root: &Path) -> Result<ExtractedProject, ExtractError> {
    let scan = scan_project(root)?;
    let mut project = extract_units(&scan.units)?;
    let mut warnings = scan.warnings;
    warnings.append(&mut project.warnings);
    project.warnings = warnings;
    Ok(project)
}

pub const CALL_TABLE_HEADER: &str = "File,Source_Contract,Source_Function,Target_Contract";

/// Render the call table: exact four-column header, `None` sentinel, `\n`
/// line endings, rows already in (file, source-order) sequence.
pub fn emit_call_table(records: &[CallRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 48);
    out.push_str(CALL_TABLE_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.file);
        out.push(',');
        out.push_str(&r.source_contract);
        out.push(',');
        out.push_str(&r.source_function);
        out.push(',');
        out.push_str(r.target_contract.as_deref().unwrap_or("None"));
        out.push('\n');
    }
    out
}

/// Parse a call table produced by [`emit_call_table`] (or any third-party
/// extractor honouring the same schema).
pub fn read_call_table(text: &str) -> Result<Vec<CallRecord>, ExtractError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == CALL_TABLE_HEADER => {}
        Some(h) => {
            return Err(ExtractError::Table(format!(
                "unexpected header: {h:?}"
            )))
        }
        None => return Err(ExtractError::Table("empty document".into())),
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(ExtractError::Table(format!(
                "row {}: expected 4 columns, got {}",
                i + 2,
                cols.len()
            )));
        }
        records.push(CallRecord {
            file: cols[0].to_string(),
            source_contract: cols[1].to_string(),
            source_function: cols[2].to_string(),
            target_contract: match cols[3] {
                "None" => None,
                other => Some(other.to_string()),
            },
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    #[test]
    fn scan_filters_by_extension_and_sorts() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("a.sol"), "contract A {}").unwrap();
        fs::create_dir(dir.path().join("sub")).unwrap();
        fs::write(dir.path().join("sub/b.sol"), "contract B {}").unwrap();
        fs::write(dir.path().join("readme.md"), "hello").unwrap();
        let scan = scan_project(dir.path()).unwrap();
        let paths: Vec<_> = scan.units.iter().map(|u| u.path.as_str()).collect();
        assert_eq!(paths, vec!["a.sol", "sub/b.sol"]);
        assert!(scan.warnings.is_empty());
    }

    #[test]
    fn scan_empty_directory() {
        let dir = tempfile::tempdir().unwrap();
        let scan = scan_project(dir.path()).unwrap();
        assert!(scan.units.is_empty());
    }

    #[test]
    fn scan_skips_non_utf8_with_warning() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("bad.sol"), [0xff, 0xfe, 0x00]).unwrap();
        let scan = scan_project(dir.path()).unwrap();
        assert!(scan.units.is_empty());
        assert_eq!(scan.warnings.len(), 1);
    }

    #[test]
    fn scan_missing_root_is_fatal() {
        let err = scan_project(Path::new("/nonexistent/path/xyz")).unwrap_err();
        assert!(matches!(err, ExtractError::MissingRoot { .. }));
    }

    #[test]
    fn call_table_round_trip() {
        let records = vec![
            CallRecord {
                file: "WETH9Mock.sol".into(),
                source_contract: "WETH9Mock".into(),
                source_function: "mint".into(),
                target_contract: Some("WETH9Mock".into()),
            },
            CallRecord {
                file: "WETH9Mock.sol".into(),
                source_contract: "WETH9Mock".into(),
                source_function: "mint".into(),
                target_contract: None,
            },
        ];
        let csv = emit_call_table(&records);
        assert_eq!(
            csv,
            "File,Source_Contract,Source_Function,Target_Contract\n\
             WETH9Mock.sol,WETH9Mock,mint,WETH9Mock\n\
             WETH9Mock.sol,WETH9Mock,mint,None\n"
        );
        assert_eq!(read_call_table(&csv).unwrap(), records);
    }

    #[test]
    fn empty_record_set_is_header_only() {
        assert_eq!(
            emit_call_table(&[]),
            "File,Source_Contract,Source_Function,Target_Contract\n"
        );
    }

    #[test]
    fn read_rejects_bad_header() {
        assert!(read_call_table("a,b,c,d\n").is_err());
    }
}
