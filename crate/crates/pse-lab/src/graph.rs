//! Immutable undirected graphs with canonical edge storage and JSONL I/O.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An immutable simple undirected graph.
///
/// Edges are stored once per unordered pair, sorted, so two graphs built from
/// the same edge set compare equal and serialize identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    node_labels: Option<Vec<i64>>,
    virtual_node: Option<usize>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate pairs collapse, either
    /// endpoint order is accepted, self-loops are rejected.
    pub fn new(num_nodes: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(a, b) in edge_list {
            if a >= num_nodes {
                return Err(Error::IndexOutOfRange { index: a, num_nodes });
            }
            if b >= num_nodes {
                return Err(Error::IndexOutOfRange { index: b, num_nodes });
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_canonical(num_nodes, edges, None, None))
    }

    fn from_canonical(
        num_nodes: usize,
        edges: Vec<(usize, usize)>,
        node_labels: Option<Vec<i64>>,
        virtual_node: Option<usize>,
    ) -> Self {
        let mut adjacency = vec![Vec::new(); num_nodes];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Graph { num_nodes, edges, adjacency, node_labels, virtual_node }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Canonically sorted unordered edge pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn node_labels(&self) -> Option<&[i64]> {
        self.node_labels.as_deref()
    }

    pub fn virtual_node(&self) -> Option<usize> {
        self.virtual_node
    }

    /// Returns a copy with the given per-node integer labels.
    pub fn with_node_labels(&self, labels: Vec<i64>) -> Result<Self> {
        if labels.len() != self.num_nodes {
            return Err(Error::LengthMismatch { got: labels.len(), expected: self.num_nodes });
        }
        let mut g = self.clone();
        g.node_labels = Some(labels);
        Ok(g)
    }

    /// Relabels nodes by a bijection: node `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.num_nodes {
            return Err(Error::NotABijection(self.num_nodes));
        }
        let mut seen = vec![false; self.num_nodes];
        for &p in perm {
            if p >= self.num_nodes || seen[p] {
                return Err(Error::NotABijection(self.num_nodes));
            }
            seen[p] = true;
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        let node_labels = self.node_labels.as_ref().map(|labels| {
            let mut out = vec![0; self.num_nodes];
            for (v, &l) in labels.iter().enumerate() {
                out[perm[v]] = l;
            }
            out
        });
        let virtual_node = self.virtual_node.map(|v| perm[v]);
        Ok(Self::from_canonical(self.num_nodes, edges, node_labels, virtual_node))
    }

    /// Appends one node adjacent to all existing nodes and marks it virtual.
    pub fn add_virtual_node(&self) -> Result<Self> {
        if self.virtual_node.is_some() {
            return Err(Error::VirtualNodeAlreadyPresent);
        }
        let vn = self.num_nodes;
        let mut edges = self.edges.clone();
        for v in 0..self.num_nodes {
            edges.push((v, vn));
        }
        edges.sort_unstable();
        let node_labels = self.node_labels.as_ref().map(|labels| {
            let mut out = labels.clone();
            out.push(0);
            out
        });
        Ok(Self::from_canonical(self.num_nodes + 1, edges, node_labels, Some(vn)))
    }

    /// Connected components as a per-node component id, ids in first-seen order.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.num_nodes];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..self.num_nodes {
            if comp[start] != usize::MAX {
                continue;
            }
            stack.push(start);
            comp[start] = next;
            while let Some(v) = stack.pop() {
                for &u in self.neighbors(v) {
                    if comp[u] == usize::MAX {
                        comp[u] = next;
                        stack.push(u);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn num_components(&self) -> usize {
        self.components().iter().max().map_or(0, |&m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.num_nodes <= 1 || self.num_components() == 1
    }
}

/// One JSONL line: the interchange format shared by every CLI subcommand.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GraphRecord {
    pub num_nodes: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_labels: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_label: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_task_labels: Option<Vec<i64>>,
}

impl GraphRecord {
    pub fn from_graph(g: &Graph) -> Self {
        GraphRecord {
            num_nodes: g.num_nodes(),
            edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
            node_labels: g.node_labels().map(<[i64]>::to_vec),
            graph_label: None,
            node_task_labels: None,
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let pairs: Vec<(usize, usize)> = self.edges.iter().map(|&[a, b]| (a, b)).collect();
        let mut g = Graph::new(self.num_nodes, &pairs)?;
        if let Some(labels) = &self.node_labels {
            g = g.with_node_labels(labels.clone())?;
        }
        Ok(g)
    }
}

/// Parses one graph record per line. Line numbers are 1-based in errors.
pub fn parse_jsonl<R: BufRead>(reader: R) -> Result<Vec<GraphRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: GraphRecord = serde_json::from_str(&line)
            .map_err(|e| Error::MalformedRecord { line: i + 1, msg: e.to_string() })?;
        // Validate up front so downstream code never sees dangling endpoints.
        record.to_graph().map_err(|e| Error::MalformedRecord { line: i + 1, msg: e.to_string() })?;
        out.push(record);
    }
    Ok(out)
}

/// Writes records one per line in canonical field order.
pub fn serialize_jsonl<W: Write>(writer: &mut W, records: &[GraphRecord]) -> Result<()> {
    for record in records {
        serde_json::to_writer(&mut *writer, record)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}
