//! JSON filter documents and DOT export.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::filter::{Filter, FilterDef, InvalidFilter};

pub const FORMAT_VERSION: u32 = 1;

/// On-disk form of a filter: a version number next to the plain description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterDocument {
    pub version: u32,
    #[serde(flatten)]
    pub def: FilterDef,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported format version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("invalid filter: {0}")]
    Invalid(#[from] InvalidFilter),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        source: Box<DocumentError>,
    },
}

pub fn parse_filter(text: &str) -> Result<Filter, DocumentError> {
    let doc: FilterDocument = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    if doc.version != FORMAT_VERSION {
        return Err(DocumentError::Version(doc.version));
    }
    Ok(Filter::from_def(&doc.def)?)
}

pub fn serialize_filter(f: &Filter) -> String {
    let doc = FilterDocument {
        version: FORMAT_VERSION,
        def: f.to_def(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("filter documents serialize");
    text.push('\n');
    text
}

pub fn read_filter(path: impl AsRef<Path>) -> Result<Filter, DocumentError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| DocumentError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_filter(&text).map_err(|e| DocumentError::InFile {
        path: path.to_path_buf(),
        source: Box::new(e),
    })
}

pub fn write_filter(path: impl AsRef<Path>, f: &Filter) -> Result<(), DocumentError> {
    let path = path.as_ref();
    fs::write(path, serialize_filter(f)).map_err(|source| DocumentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Graphviz rendering: one node per state labeled with id and color, the
/// initial state double-circled, one edge per transition.
pub fn export_dot(f: &Filter) -> String {
    let mut out = String::from("digraph filter {\n  rankdir=LR;\n");
    for (q, s) in f.states().iter().enumerate() {
        let shape = if q == f.initial() {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(
            out,
            "  {} [shape={shape}, label=\"{}\\n{}\"];",
            quote(s.id()),
            escape(s.id()),
            s.color()
        );
    }
    for s in f.states() {
        for (y, &t) in s.edges() {
            let _ = writeln!(
                out,
                "  {} -> {} [label={}];",
                quote(s.id()),
                quote(f.state(t).id()),
                quote(y)
            );
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}
