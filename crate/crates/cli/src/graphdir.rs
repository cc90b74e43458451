//! Knowledge-graph persistence: a directory of group documents named
//! `<COUNTRY>_<domain>.txt` plus an `index.json`.

use std::path::Path;

use groupsim_core::hierarchy::{
    merge_into_graph, parse_group_tree, serialize_group_tree, KnowledgeGraph, CN_EDUCATION_DOC,
};
use groupsim_core::model::{CountryCode, Domain};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphIndex {
    schema_version: u32,
    entries: Vec<IndexEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct IndexEntry {
    country: String,
    domain: Domain,
    file: String,
}

fn document_name(country: &CountryCode, domain: Domain) -> String {
    format!("{}_{}.txt", country.as_str(), domain.as_str())
}

/// Load a graph directory; a missing directory yields an empty graph.
pub fn load_graph(dir: &Path) -> Result<KnowledgeGraph, CliError> {
    let mut graph = KnowledgeGraph::new();
    let index_path = dir.join("index.json");
    if !index_path.exists() {
        return Ok(graph);
    }
    let text = std::fs::read_to_string(&index_path)
        .map_err(|e| CliError::io(&format!("reading {}", index_path.display()), e))?;
    let index: GraphIndex = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("graph index: {e}")))?;
    for entry in index.entries {
        let country =
            CountryCode::new(&entry.country).map_err(|e| CliError::Validation(e.to_string()))?;
        let doc_path = dir.join(&entry.file);
        let document = std::fs::read_to_string(&doc_path)
            .map_err(|e| CliError::io(&format!("reading {}", doc_path.display()), e))?;
        let tree = parse_group_tree(&document, country, entry.domain)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        merge_into_graph(&mut graph, tree, &document);
    }
    Ok(graph)
}

/// Write every entry back out as canonical documents plus the index.
pub fn save_graph(graph: &KnowledgeGraph, dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::io(&format!("creating {}", dir.display()), e))?;
    let mut entries = Vec::new();
    for ((country, domain), tree) in &graph.entries {
        let file = document_name(country, *domain);
        let document = graph
            .source_documents
            .get(&(country.clone(), *domain))
            .cloned()
            .unwrap_or_else(|| serialize_group_tree(tree));
        std::fs::write(dir.join(&file), document)
            .map_err(|e| CliError::io(&format!("writing {file}"), e))?;
        entries.push(IndexEntry {
            country: country.as_str().to_owned(),
            domain: *domain,
            file,
        });
    }
    let index = GraphIndex {
        schema_version: 1,
        entries,
    };
    let json =
        serde_json::to_string_pretty(&index).map_err(|e| CliError::Validation(e.to_string()))?;
    std::fs::write(dir.join("index.json"), json).map_err(|e| CliError::io("writing index.json", e))
}

/// The graph to use for a run: a directory when given, else the bundled
/// education hierarchy.
pub fn graph_for_run(dir: Option<&Path>) -> Result<KnowledgeGraph, CliError> {
    match dir {
        Some(dir) => {
            let graph = load_graph(dir)?;
            if graph.is_empty() {
                log::warn!(
                    "graph directory {} is empty; starting from the bundled education hierarchy",
                    dir.display()
                );
                Ok(KnowledgeGraph::with_bundled_education())
            } else {
                Ok(graph)
            }
        }
        None => Ok(KnowledgeGraph::with_bundled_education()),
    }
}

/// Seed a directory with the bundled education document.
pub fn init_graph_dir(dir: &Path) -> Result<(), CliError> {
    let mut graph = KnowledgeGraph::new();
    let country = CountryCode::new("CN").expect("static code");
    let tree = parse_group_tree(CN_EDUCATION_DOC, country, Domain::Education)
        .expect("bundled document parses");
    merge_into_graph(&mut graph, tree, CN_EDUCATION_DOC);
    save_graph(&graph, dir)
}
