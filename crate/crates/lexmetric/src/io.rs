//! File formats: JSON metric tables and edge lists.
//!
//! A metric file is `{"points": [...], "d": [[...], ...], "tolerance": τ}`
//! with `tolerance` optional. An edge list has one edge per line, `u v` for
//! unit weight or `u v w`; `node u` declares a vertex; blank lines and lines
//! starting with `#` are ignored.

use std::fs;
use std::path::{Path, PathBuf};

use lexmetric_core::constructions::graph_metric_with_tolerance;
use lexmetric_core::{FiniteMetricSpace, Graph, MetricTable, DEFAULT_TOLERANCE};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}:{column}: {message}", path.display())]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}:{line}: {message}", path.display())]
    EdgeList {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Space {
        path: PathBuf,
        source: lexmetric_core::Error,
    },
    #[error("{}: cannot infer file type from extension; use --format json|edges", path.display())]
    UnknownFormat { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Edges,
}

impl Format {
    pub fn infer(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "json" => Some(Format::Json),
            "edges" => Some(Format::Edges),
            _ => None,
        }
    }
}

pub fn parse_metric_json(text: &str, path: &Path) -> Result<FiniteMetricSpace, IoError> {
    let table: MetricTable = serde_json::from_str(text).map_err(|e| IoError::Json {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    FiniteMetricSpace::try_from(table).map_err(|source| IoError::Space {
        path: path.to_owned(),
        source,
    })
}

pub fn parse_edge_list(text: &str, path: &Path) -> Result<Graph, IoError> {
    let mut g = Graph::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| IoError::EdgeList {
            path: path.to_owned(),
            line: k + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let added = match fields.as_slice() {
            ["node", u] => {
                g.add_vertex(*u);
                Ok(())
            }
            [u, v] => g.add_edge(*u, *v, 1.0),
            [u, v, w] => {
                let w: f64 = w
                    .parse()
                    .map_err(|_| err(format!("invalid weight {w:?}")))?;
                g.add_edge(*u, *v, w)
            }
            _ => return Err(err(format!("expected \"u v\" or \"u v w\", got {line:?}"))),
        };
        added.map_err(|e| err(e.to_string()))?;
    }
    Ok(g)
}

pub fn to_json(space: &FiniteMetricSpace) -> String {
    serde_json::to_string_pretty(&MetricTable::from(space)).expect("tables always serialize")
}

/// Loads a metric space from a `.json` table or a `.edges` list. A
/// `tolerance` given here overrides the file's.
pub fn load_space(
    path: &Path,
    format: Option<Format>,
    tolerance: Option<f64>,
) -> Result<FiniteMetricSpace, IoError> {
    let format = format
        .or_else(|| Format::infer(path))
        .ok_or_else(|| IoError::UnknownFormat {
            path: path.to_owned(),
        })?;
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_owned(),
        source,
    })?;
    let space_err = |source| IoError::Space {
        path: path.to_owned(),
        source,
    };
    let space = match format {
        Format::Json => parse_metric_json(&text, path)?,
        Format::Edges => {
            let g = parse_edge_list(&text, path)?;
            graph_metric_with_tolerance(&g, DEFAULT_TOLERANCE).map_err(space_err)?
        }
    };
    match tolerance {
        Some(t) => space.with_tolerance(t).map_err(space_err),
        None => Ok(space),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("test.json")
    }

    #[test]
    fn json_defaults_tolerance() {
        let s = parse_metric_json(r#"{"points":["a","b"],"d":[[0,1],[1,0]]}"#, p()).unwrap();
        assert_eq!(s.tolerance(), DEFAULT_TOLERANCE);
        let s = parse_metric_json(
            r#"{"points":["a","b"],"d":[[0,1],[1,0]],"tolerance":0.01}"#,
            p(),
        )
        .unwrap();
        assert_eq!(s.tolerance(), 0.01);
    }

    #[test]
    fn json_rejects_non_square() {
        let e = parse_metric_json(r#"{"points":["a","b"],"d":[[0,1],[1]]}"#, p()).unwrap_err();
        assert!(matches!(e, IoError::Space { .. }), "{e}");
        let e = parse_metric_json(r#"{"points":["a","b"],"d":[[0,1]]}"#, p()).unwrap_err();
        assert!(matches!(e, IoError::Space { .. }), "{e}");
    }

    #[test]
    fn json_syntax_error_names_line() {
        let e = parse_metric_json("{\n\"points\": [\"a\",\n}", p()).unwrap_err();
        match e {
            IoError::Json { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn edge_list_forms() {
        let g = parse_edge_list("# path\na b\nb c 2.5\n\nnode d\n", Path::new("g.edges")).unwrap();
        assert_eq!(g.vertices().len(), 4);
        assert_eq!(g.edge_count(), 2);
        let e = parse_edge_list("a b\na b c d\n", Path::new("g.edges")).unwrap_err();
        assert!(e.to_string().starts_with("g.edges:2:"), "{e}");
        let e = parse_edge_list("a b x\n", Path::new("g.edges")).unwrap_err();
        assert!(e.to_string().contains("invalid weight"));
        let e = parse_edge_list("a a\n", Path::new("g.edges")).unwrap_err();
        assert!(e.to_string().contains("self-loop"));
    }

    #[test]
    fn table_round_trip() {
        let s = parse_metric_json(r#"{"points":["a","b"],"d":[[0,0.5],[0.5,0]]}"#, p()).unwrap();
        assert_eq!(parse_metric_json(&to_json(&s), p()).unwrap(), s);
    }
}
