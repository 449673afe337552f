//! TOML scenario documents.
//!
//! ```toml
//! name = "corner"
//!
//! [graph]                      # either n + edges ...
//! n = 3
//! edges = [[0, 1, 1], [1, 2, 1]]
//!
//! # [graph.generator]          # ... or a generator
//! # kind = "grid"
//! # width = 4
//! # height = 4
//!
//! [cost]
//! alpha = 4
//! beta = 1
//!
//! [[objects]]
//! id = 0
//! home = 0
//!
//! [[transactions]]
//! id = 0
//! home = 2
//! objs = [0]
//!
//! [config]                     # optional
//! sigma = 2.0
//! tour = "mst"
//! seed = 0
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{GeneratorSpec, Length};
use crate::schedule::{CostModel, GraphSource, ObjectSpec, Scenario, ScenarioError, SchedConfig, TransactionSpec};

#[derive(Debug, Error)]
pub enum ScenarioFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid graph section: {0}")]
    GraphSection(String),
    #[error("invalid scenario: {0}")]
    Validation(#[from] ScenarioError),
    #[error("cannot serialize scenario: {0}")]
    Serialize(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<(usize, usize, Length)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<GeneratorSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    #[serde(default)]
    name: String,
    graph: GraphSection,
    cost: CostModel,
    objects: Vec<ObjectSpec>,
    transactions: Vec<TransactionSpec>,
    #[serde(default)]
    config: SchedConfig,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

pub fn parse_scenario_str(text: &str) -> Result<Scenario, ScenarioFileError> {
    let doc: ScenarioDoc = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        ScenarioFileError::Parse { line, column, message: e.message().to_string() }
    })?;
    let source = match doc.graph {
        GraphSection { n: Some(n), edges, generator: None } => {
            GraphSource::Explicit { n, edges: edges.unwrap_or_default() }
        }
        GraphSection { n: None, edges: None, generator: Some(g) } => GraphSource::Generated(g),
        _ => {
            return Err(ScenarioFileError::GraphSection(
                "give either `n` with `edges` or a `generator` table".to_string(),
            ))
        }
    };
    Ok(Scenario::new(doc.name, source, doc.cost, doc.objects, doc.transactions, doc.config)?)
}

pub fn parse_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioFileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|source| ScenarioFileError::Io { path: path.display().to_string(), source })?;
    parse_scenario_str(&text)
}

pub fn serialize_scenario(sc: &Scenario) -> Result<String, ScenarioFileError> {
    let graph = match &sc.source {
        GraphSource::Explicit { n, edges } => GraphSection { n: Some(*n), edges: Some(edges.clone()), generator: None },
        GraphSource::Generated(g) => GraphSection { n: None, edges: None, generator: Some(*g) },
    };
    let doc = ScenarioDoc {
        name: sc.name.clone(),
        graph,
        cost: sc.cost,
        objects: sc.objects.clone(),
        transactions: sc.transactions.clone(),
        config: sc.config,
    };
    toml::to_string(&doc).map_err(|e| ScenarioFileError::Serialize(e.to_string()))
}

pub fn write_scenario(sc: &Scenario, path: impl AsRef<Path>) -> Result<(), ScenarioFileError> {
    let path = path.as_ref();
    let text = serialize_scenario(sc)?;
    fs::write(path, text).map_err(|source| ScenarioFileError::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::NodeId;
    use crate::tours::TourKind;

    const MINIMAL: &str = r#"
[graph]
n = 1
edges = []

[cost]
alpha = 2
beta = 1

[[objects]]
id = 0
home = 0

[[transactions]]
id = 0
home = 0
objs = [0]
"#;

    #[test]
    fn minimal_document() {
        let sc = parse_scenario_str(MINIMAL).unwrap();
        assert_eq!(sc.graph.n(), 1);
        assert_eq!(sc.transactions.len(), 1);
        assert_eq!(sc.config, SchedConfig::default());
    }

    #[test]
    fn equal_costs_rejected() {
        let text = MINIMAL.replace("alpha = 2", "alpha = 1");
        assert!(matches!(
            parse_scenario_str(&text),
            Err(ScenarioFileError::Validation(ScenarioError::InvalidCost { .. }))
        ));
    }

    #[test]
    fn parse_error_has_location() {
        let text = MINIMAL.replace("beta = 1", "beta = \"one\"");
        match parse_scenario_str(&text) {
            Err(ScenarioFileError::Parse { line, .. }) => assert_eq!(line, 8),
            other => panic!("unexpected {other:?}"),
        }
        let text = MINIMAL.replace("[cost]", "[cost]\ngamma = 3");
        assert!(matches!(parse_scenario_str(&text), Err(ScenarioFileError::Parse { .. })));
    }

    #[test]
    fn disconnected_graph_rejected() {
        let text = MINIMAL.replace("n = 1", "n = 2");
        assert!(matches!(parse_scenario_str(&text), Err(ScenarioFileError::Validation(ScenarioError::Graph(_)))));
    }

    #[test]
    fn graph_section_must_pick_one_form() {
        let text = MINIMAL.replace("n = 1\nedges = []", "");
        assert!(matches!(parse_scenario_str(&text), Err(ScenarioFileError::GraphSection(_))));
    }

    #[test]
    fn round_trips() {
        let text = r#"
name = "gen"
[graph.generator]
kind = "unit-disk"
n = 12
radius = 0.5
side = 1.0
seed = 9

[cost]
alpha = 8
beta = 1

[[objects]]
id = 0
home = 3

[[objects]]
id = 1
home = 3

[[transactions]]
id = 4
home = 7
objs = [1, 0]

[config]
sigma = 3.0
tour = "universal"
seed = 11
"#;
        let sc = parse_scenario_str(text).unwrap();
        assert_eq!(sc.transactions[0].objs.len(), 2);
        assert_eq!(sc.config.tour, TourKind::Universal);
        let again = parse_scenario_str(&serialize_scenario(&sc).unwrap()).unwrap();
        assert_eq!(again, sc);
        assert_eq!(again.graph, sc.graph);

        let explicit = parse_scenario_str(MINIMAL).unwrap();
        let again = parse_scenario_str(&serialize_scenario(&explicit).unwrap()).unwrap();
        assert_eq!(again, explicit);
        assert_eq!(again.objects[0].home, NodeId(0));
    }

    #[test]
    fn file_io() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.toml");
        let sc = parse_scenario_str(MINIMAL).unwrap();
        write_scenario(&sc, &path).unwrap();
        assert_eq!(parse_scenario(&path).unwrap(), sc);
        assert!(matches!(parse_scenario(dir.path().join("missing.toml")), Err(ScenarioFileError::Io { .. })));
    }
}
