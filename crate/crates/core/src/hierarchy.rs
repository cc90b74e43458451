//! Population hierarchies: the three-level group-tree document grammar, the
//! cached (country, domain) knowledge graph, BFS layer retrieval, and agent
//! instantiation.
//!
//! Documents use the grammar
//!
//! ```text
//! ## Students: 58,030,769            layer 1
//!   1. **Postgraduates: 3,653,613**  layer 2
//!     - Doctor: 556,065              layer 3
//! ```
//!
//! Thousands separators `,` and `_` are both accepted. Indentation is
//! ignored; markers alone determine the layer.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::model::{AgentState, Characteristic, CountryCode, Domain, GroupAgent, GroupSpec};
use crate::oracle::{self, Oracle, OracleError};
use crate::reasoning::Memory;

/// Bundled education-domain hierarchy for CN (16 leaf groups across 3 layers).
pub const CN_EDUCATION_DOC: &str = include_str!("../data/cn_education.txt");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HierarchyError {
    #[error("malformed tree at line {line}: {reason}")]
    MalformedTree { line: usize, reason: String },
    #[error("no tree cached for ({country}, {domain})")]
    MissingEntry { country: String, domain: Domain },
    #[error("layer {layer} out of range (tree depth {depth})")]
    LayerOutOfRange { layer: u32, depth: u32 },
    #[error("duplicate group `{0}`")]
    DuplicateGroup(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// One node of a parsed tree, with its children in document order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupNode {
    pub spec: GroupSpec,
    pub children: Vec<GroupNode>,
}

/// The multiway tree of population groups for one (country, domain).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTree {
    pub country: CountryCode,
    pub domain: Domain,
    pub roots: Vec<GroupNode>,
    pub depth: u32,
}

impl GroupTree {
    /// All nodes at exactly `layer`, in BFS order (level by level, document
    /// order within a level).
    pub fn layer(&self, layer: u32) -> Vec<GroupSpec> {
        let mut out = Vec::new();
        let mut frontier: Vec<&GroupNode> = self.roots.iter().collect();
        let mut current = 1;
        while !frontier.is_empty() {
            if current == layer {
                out.extend(frontier.iter().map(|n| n.spec.clone()));
                break;
            }
            frontier = frontier.iter().flat_map(|n| n.children.iter()).collect();
            current += 1;
        }
        out
    }

    pub fn leaf_count(&self) -> usize {
        fn leaves(node: &GroupNode) -> usize {
            if node.children.is_empty() {
                1
            } else {
                node.children.iter().map(leaves).sum()
            }
        }
        self.roots.iter().map(leaves).sum()
    }
}

/// Cache of parsed trees plus their source documents, keyed (country, domain).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KnowledgeGraph {
    pub entries: BTreeMap<(CountryCode, Domain), GroupTree>,
    pub source_documents: BTreeMap<(CountryCode, Domain), String>,
}

impl KnowledgeGraph {
    pub fn new() -> KnowledgeGraph {
        KnowledgeGraph::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, country: &CountryCode, domain: Domain) -> Option<&GroupTree> {
        self.entries.get(&(country.clone(), domain))
    }

    /// Graph preloaded with the bundled CN education hierarchy.
    pub fn with_bundled_education() -> KnowledgeGraph {
        let mut graph = KnowledgeGraph::new();
        let country = CountryCode::new("CN").expect("static code");
        let tree = parse_group_tree(CN_EDUCATION_DOC, country, Domain::Education)
            .expect("bundled document parses");
        merge_into_graph(&mut graph, tree, CN_EDUCATION_DOC);
        graph
    }
}

fn parse_population(raw: &str, line: usize) -> Result<u64, HierarchyError> {
    let cleaned: String = raw
        .trim()
        .chars()
        .filter(|&c| c != ',' && c != '_')
        .collect();
    cleaned
        .parse::<u64>()
        .map_err(|_| HierarchyError::MalformedTree {
            line,
            reason: alloc::format!("unparseable number `{}`", raw.trim()),
        })
}

fn split_name_population(body: &str, line: usize) -> Result<(String, u64), HierarchyError> {
    let (name, number) = body.rsplit_once(':').ok_or(HierarchyError::MalformedTree {
        line,
        reason: "missing `:` between name and population".to_string(),
    })?;
    let name = name.trim();
    if name.is_empty() {
        return Err(HierarchyError::MalformedTree {
            line,
            reason: "empty group name".to_string(),
        });
    }
    Ok((name.to_owned(), parse_population(number, line)?))
}

/// Which layer a line encodes, with the `name: population` body extracted.
fn classify_line(trimmed: &str, line: usize) -> Result<Option<(u32, String)>, HierarchyError> {
    if trimmed.is_empty() {
        return Ok(None);
    }
    if let Some(rest) = trimmed.strip_prefix("##") {
        return Ok(Some((1, rest.trim().to_owned())));
    }
    if let Some(rest) = trimmed.strip_prefix('-') {
        return Ok(Some((3, rest.trim().to_owned())));
    }
    // Layer 2: "k. **Name: N**"
    let digits = trimmed.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits > 0 {
        let after = &trimmed[digits..];
        let after = after
            .strip_prefix('.')
            .ok_or(HierarchyError::MalformedTree {
                line,
                reason: "expected `.` after layer-2 ordinal".to_string(),
            })?;
        let body = after.trim();
        let body = body
            .strip_prefix("**")
            .and_then(|b| b.strip_suffix("**"))
            .ok_or(HierarchyError::MalformedTree {
                line,
                reason: "layer-2 entry must be wrapped in `**`".to_string(),
            })?;
        return Ok(Some((2, body.trim().to_owned())));
    }
    Err(HierarchyError::MalformedTree {
        line,
        reason: alloc::format!("unknown marker in `{trimmed}`"),
    })
}

/// Parse a group-tree document into a validated [`GroupTree`].
///
/// Population totals of inner nodes are checked against the sum of their
/// children; mismatches are logged as warnings, never rejected — leaf
/// populations are treated as authoritative.
pub fn parse_group_tree(
    document: &str,
    country: CountryCode,
    domain: Domain,
) -> Result<GroupTree, HierarchyError> {
    let mut roots: Vec<GroupNode> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut depth = 0u32;

    for (idx, raw) in document.lines().enumerate() {
        let line = idx + 1;
        let Some((layer, body)) = classify_line(raw.trim(), line)? else {
            continue;
        };
        let (name, population) = split_name_population(&body, line)?;
        if !seen.insert(name.clone()) {
            return Err(HierarchyError::MalformedTree {
                line,
                reason: alloc::format!("duplicate group name `{name}`"),
            });
        }
        depth = depth.max(layer);
        let parent_name = |nodes: &Vec<GroupNode>| nodes.last().map(|n| n.spec.name.clone());
        let node = |parent: Option<String>| GroupNode {
            spec: GroupSpec {
                name: name.clone(),
                population,
                characteristic: None,
                layer,
                parent,
            },
            children: Vec::new(),
        };
        match layer {
            1 => roots.push(node(None)),
            2 => {
                let root = roots.last_mut().ok_or(HierarchyError::MalformedTree {
                    line,
                    reason: "layer-2 node without a layer-1 parent".to_string(),
                })?;
                let parent = Some(root.spec.name.clone());
                root.children.push(node(parent));
            }
            3 => {
                let root = roots.last_mut().ok_or(HierarchyError::MalformedTree {
                    line,
                    reason: "layer-3 node without a layer-1 parent".to_string(),
                })?;
                let parent = parent_name(&root.children);
                let mid = root
                    .children
                    .last_mut()
                    .ok_or(HierarchyError::MalformedTree {
                        line,
                        reason: "layer-3 node without a layer-2 parent".to_string(),
                    })?;
                mid.children.push(node(parent));
            }
            _ => unreachable!("grammar caps layers at 3"),
        }
    }

    if roots.is_empty() {
        return Err(HierarchyError::MalformedTree {
            line: 0,
            reason: "no layer-1 node".to_string(),
        });
    }

    let tree = GroupTree {
        country,
        domain,
        roots,
        depth,
    };
    report_population_consistency(&tree);
    Ok(tree)
}

/// Warn (never fail) when an inner node's population disagrees with the sum
/// of its children.
fn report_population_consistency(tree: &GroupTree) {
    fn walk(node: &GroupNode) {
        if !node.children.is_empty() {
            let child_sum: u64 = node.children.iter().map(|c| c.spec.population).sum();
            if child_sum != node.spec.population {
                log::warn!(
                    "group `{}` population {} differs from subgroup sum {}; leaves are authoritative",
                    node.spec.name,
                    node.spec.population,
                    child_sum
                );
            }
            node.children.iter().for_each(walk);
        }
    }
    tree.roots.iter().for_each(walk);
}

fn format_population(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Canonical serializer for the document grammar; `parse(serialize(t)) == t`.
pub fn serialize_group_tree(tree: &GroupTree) -> String {
    let mut out = String::new();
    for root in &tree.roots {
        let _ = writeln!(
            out,
            "## {}: {}",
            root.spec.name,
            format_population(root.spec.population)
        );
        for (i, mid) in root.children.iter().enumerate() {
            let _ = writeln!(
                out,
                "  {}. **{}: {}**",
                i + 1,
                mid.spec.name,
                format_population(mid.spec.population)
            );
            for leaf in &mid.children {
                let _ = writeln!(
                    out,
                    "    - {}: {}",
                    leaf.spec.name,
                    format_population(leaf.spec.population)
                );
            }
        }
    }
    out
}

/// Insert or replace the (country, domain) entry, keeping the source text.
pub fn merge_into_graph(graph: &mut KnowledgeGraph, tree: GroupTree, document: &str) {
    let key = (tree.country.clone(), tree.domain);
    if graph.entries.contains_key(&key) {
        log::info!("replacing cached tree for ({}, {})", key.0, key.1);
    }
    graph
        .source_documents
        .insert(key.clone(), document.to_owned());
    graph.entries.insert(key, tree);
}

/// Retrieve all groups at `layer_n` for (country, domain), in BFS order.
pub fn retrieve_layer(
    graph: &KnowledgeGraph,
    country: &CountryCode,
    domain: Domain,
    layer_n: u32,
) -> Result<Vec<GroupSpec>, HierarchyError> {
    let tree = graph
        .get(country, domain)
        .ok_or_else(|| HierarchyError::MissingEntry {
            country: country.as_str().to_owned(),
            domain,
        })?;
    if layer_n < 1 || layer_n > tree.depth {
        return Err(HierarchyError::LayerOutOfRange {
            layer: layer_n,
            depth: tree.depth,
        });
    }
    Ok(tree.layer(layer_n))
}

/// Instantiate one agent per spec: id `<name>-agents`, zeroed emotions, empty
/// memory. Specs without a characteristic get one through the oracle gateway.
pub fn instantiate_agents(
    specs: &[GroupSpec],
    country: &CountryCode,
    oracle: &dyn Oracle,
    memory_capacity: usize,
    seed: u64,
) -> Result<Vec<GroupAgent>, HierarchyError> {
    let mut seen = BTreeSet::new();
    for spec in specs {
        if !seen.insert(spec.name.as_str()) {
            return Err(HierarchyError::DuplicateGroup(spec.name.clone()));
        }
    }
    let unresolved: Vec<&GroupSpec> = specs
        .iter()
        .filter(|s| s.characteristic.is_none())
        .collect();
    let mut assigned: BTreeMap<String, Characteristic> = BTreeMap::new();
    if !unresolved.is_empty() {
        assigned = oracle::query_characteristics(&unresolved, country, oracle, seed)?;
    }

    specs
        .iter()
        .map(|spec| {
            let characteristic = match spec.characteristic {
                Some(c) => c,
                None => *assigned.get(&spec.name).ok_or_else(|| {
                    OracleError::UnparseableReply(alloc::format!(
                        "no characteristic returned for group `{}`",
                        spec.name
                    ))
                })?,
            };
            Ok(GroupAgent {
                id: alloc::format!("{}-agents", spec.name),
                description: alloc::format!(
                    "Representing {} {} {}, reflecting their emotions, attitudes, and possible actions in response to the news",
                    spec.population,
                    country.as_str(),
                    spec.name
                ),
                country: country.clone(),
                population: spec.population,
                characteristic,
                state: AgentState::initial(),
                memory: Memory::new(memory_capacity),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::StubOracle;

    fn cn() -> CountryCode {
        CountryCode::new("CN").unwrap()
    }

    #[test]
    fn single_layer1_line_parses() {
        let tree = parse_group_tree("## Students: 58,030,769", cn(), Domain::Education).unwrap();
        assert_eq!(tree.depth, 1);
        assert_eq!(tree.roots.len(), 1);
        assert_eq!(tree.roots[0].spec.name, "Students");
        assert_eq!(tree.roots[0].spec.population, 58_030_769);
    }

    #[test]
    fn bundled_education_document_matches_reported_shape() {
        let tree = parse_group_tree(CN_EDUCATION_DOC, cn(), Domain::Education).unwrap();
        assert_eq!(tree.depth, 3);
        let l1 = tree.layer(1);
        assert_eq!(l1.len(), 2);
        assert_eq!(l1[0].name, "Students");
        assert_eq!(l1[0].population, 58_030_769);
        assert_eq!(l1[1].name, "Teachers");
        assert_eq!(l1[1].population, 3_450_000);
        assert_eq!(tree.layer(2).len(), 5);
        assert_eq!(tree.layer(3).len(), 16);
        assert_eq!(tree.leaf_count(), 16);

        // The Students branch detail from the source hierarchy.
        let l3 = tree.layer(3);
        let pops: BTreeMap<&str, u64> =
            l3.iter().map(|s| (s.name.as_str(), s.population)).collect();
        assert_eq!(pops["Doctor"], 556_065);
        assert_eq!(pops["Master"], 3_097_548);
        assert_eq!(pops["Bachelor"], 19_656_436);
        assert_eq!(pops["Normal"], 8_926_980);
        assert_eq!(pops["Short-cycle"], 25_794_740);
    }

    #[test]
    fn empty_document_is_rejected() {
        match parse_group_tree("", cn(), Domain::Education) {
            Err(HierarchyError::MalformedTree { line: 0, reason }) => {
                assert!(reason.contains("no layer-1"));
            }
            other => panic!("expected MalformedTree(0), got {other:?}"),
        }
    }

    #[test]
    fn orphan_layers_are_rejected() {
        assert!(matches!(
            parse_group_tree("1. **Sub: 5**", cn(), Domain::Education),
            Err(HierarchyError::MalformedTree { line: 1, .. })
        ));
        assert!(matches!(
            parse_group_tree("## A: 5\n- Leaf: 2", cn(), Domain::Education),
            Err(HierarchyError::MalformedTree { line: 2, .. })
        ));
    }

    #[test]
    fn bad_numbers_and_markers_are_rejected() {
        assert!(matches!(
            parse_group_tree("## A: 1x0", cn(), Domain::Education),
            Err(HierarchyError::MalformedTree { line: 1, .. })
        ));
        assert!(matches!(
            parse_group_tree("** weird line", cn(), Domain::Education),
            Err(HierarchyError::MalformedTree { line: 1, .. })
        ));
        assert!(matches!(
            parse_group_tree("## NoColon 12", cn(), Domain::Education),
            Err(HierarchyError::MalformedTree { line: 1, .. })
        ));
    }

    #[test]
    fn underscore_separators_are_accepted() {
        let tree = parse_group_tree("## A: 1_234_567", cn(), Domain::Education).unwrap();
        assert_eq!(tree.roots[0].spec.population, 1_234_567);
    }

    #[test]
    fn serialize_then_parse_is_a_fixed_point() {
        let tree = parse_group_tree(CN_EDUCATION_DOC, cn(), Domain::Education).unwrap();
        let doc = serialize_group_tree(&tree);
        let reparsed = parse_group_tree(&doc, cn(), Domain::Education).unwrap();
        assert_eq!(reparsed, tree);
        assert_eq!(serialize_group_tree(&reparsed), doc);
    }

    #[test]
    fn graph_overwrites_same_key_and_keeps_distinct_keys() {
        let mut graph = KnowledgeGraph::new();
        let tree = parse_group_tree(CN_EDUCATION_DOC, cn(), Domain::Education).unwrap();
        merge_into_graph(&mut graph, tree.clone(), CN_EDUCATION_DOC);
        merge_into_graph(&mut graph, tree.clone(), CN_EDUCATION_DOC);
        assert_eq!(graph.len(), 1);

        let us = CountryCode::new("US").unwrap();
        let us_tree = parse_group_tree("## Students: 10", us.clone(), Domain::Education).unwrap();
        merge_into_graph(&mut graph, us_tree, "## Students: 10");
        assert_eq!(graph.len(), 2);

        assert_eq!(graph.get(&cn(), Domain::Education), Some(&tree));
    }

    #[test]
    fn retrieve_layer_bounds_are_checked() {
        let graph = KnowledgeGraph::with_bundled_education();
        let l1 = retrieve_layer(&graph, &cn(), Domain::Education, 1).unwrap();
        assert_eq!(l1.len(), 2);
        assert!(matches!(
            retrieve_layer(&graph, &cn(), Domain::Education, 9),
            Err(HierarchyError::LayerOutOfRange { layer: 9, depth: 3 })
        ));
        let us = CountryCode::new("US").unwrap();
        assert!(matches!(
            retrieve_layer(&graph, &us, Domain::Education, 1),
            Err(HierarchyError::MissingEntry { .. })
        ));
    }

    #[test]
    fn instantiation_assigns_characteristics_and_initial_state() {
        let graph = KnowledgeGraph::with_bundled_education();
        let specs = retrieve_layer(&graph, &cn(), Domain::Education, 1).unwrap();
        let stub = StubOracle::default();
        let agents = instantiate_agents(&specs, &cn(), &stub, 16, 1).unwrap();
        assert_eq!(agents.len(), 2);
        assert_eq!(agents[0].id, "Students-agents");
        assert_eq!(agents[0].characteristic, Characteristic::Susceptible);
        assert_eq!(agents[1].id, "Teachers-agents");
        assert_eq!(agents[1].characteristic, Characteristic::Calm);
        for a in &agents {
            assert_eq!(a.state.emotions, crate::model::EmotionState::zero());
            assert_eq!(a.memory.len(), 0);
        }
    }

    #[test]
    fn explicit_characteristics_bypass_the_oracle() {
        let spec = GroupSpec {
            name: "Students".into(),
            population: 10,
            // The keyword table would say susceptible; the spec wins.
            characteristic: Some(Characteristic::Calm),
            layer: 1,
            parent: None,
        };
        let stub = StubOracle::default();
        let agents = instantiate_agents(&[spec], &cn(), &stub, 16, 1).unwrap();
        assert_eq!(agents[0].characteristic, Characteristic::Calm);
    }

    #[test]
    fn duplicate_specs_are_rejected() {
        let spec = GroupSpec {
            name: "Master".into(),
            population: 10,
            characteristic: None,
            layer: 3,
            parent: None,
        };
        let stub = StubOracle::default();
        match instantiate_agents(&[spec.clone(), spec], &cn(), &stub, 16, 1) {
            Err(HierarchyError::DuplicateGroup(name)) => assert_eq!(name, "Master"),
            other => panic!("expected DuplicateGroup, got {other:?}"),
        }
    }

    #[test]
    fn cache_hit_yields_identical_agent_lists() {
        let graph = KnowledgeGraph::with_bundled_education();
        let stub = StubOracle::default();
        let specs = retrieve_layer(&graph, &cn(), Domain::Education, 3).unwrap();
        let a = instantiate_agents(&specs, &cn(), &stub, 16, 1).unwrap();
        let b = instantiate_agents(&specs, &cn(), &stub, 16, 2).unwrap();
        let key = |agents: &[GroupAgent]| {
            agents
                .iter()
                .map(|a| (a.id.clone(), a.population, a.characteristic))
                .collect::<Vec<_>>()
        };
        assert_eq!(key(&a), key(&b));
    }
}
