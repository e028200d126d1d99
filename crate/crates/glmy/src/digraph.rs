//! Finite digraph ingestion and validation.
//!
//! The digraphs handled here carry no self-edges and no directed cycles, so
//! every directed walk has finite length and visits distinct vertices.
//! Vertex labels are arbitrary tokens; they are mapped to dense 0-based
//! indices in order of first appearance and only the indices enter the math.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    labels: Vec<String>,
    edges: BTreeSet<(u32, u32)>,
    adjacency: Vec<Vec<u32>>,
    topo_order: Vec<u32>,
    duplicate_edges: usize,
}

impl Digraph {
    /// Builds a digraph from explicit labels and index edges, validating the
    /// no-self-edge and acyclicity assumptions.
    pub fn new(labels: Vec<String>, edge_list: Vec<(u32, u32)>) -> Result<Self> {
        Self::with_duplicates(labels, edge_list, 0)
    }

    fn with_duplicates(
        labels: Vec<String>,
        edge_list: Vec<(u32, u32)>,
        mut duplicate_edges: usize,
    ) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let n = labels.len();
        {
            let mut seen = HashMap::new();
            for (i, l) in labels.iter().enumerate() {
                if seen.insert(l.clone(), i).is_some() {
                    return Err(Error::Parse {
                        line: 0,
                        column: 0,
                        message: format!("duplicate vertex label `{l}`"),
                    });
                }
            }
        }
        let mut edges = BTreeSet::new();
        for (u, v) in edge_list {
            if u as usize >= n || v as usize >= n {
                return Err(Error::UnknownVertex {
                    label: format!("#{}", u.max(v)),
                });
            }
            if u == v {
                return Err(Error::SelfEdge {
                    label: labels[u as usize].clone(),
                    line: 0,
                });
            }
            if !edges.insert((u, v)) {
                duplicate_edges += 1;
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u as usize].push(v);
        }
        let topo_order = toposort(n, &adjacency).map_err(|cycle| Error::Cycle {
            witness: cycle
                .into_iter()
                .map(|v| labels[v as usize].clone())
                .collect(),
        })?;
        Ok(Self {
            labels,
            edges,
            adjacency,
            topo_order,
            duplicate_edges,
        })
    }

    /// Convenience constructor with labels `"0".."n-1"`.
    pub fn from_edges(n: usize, edge_list: &[(u32, u32)]) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect(), edge_list.to_vec())
    }

    /// Parses either the edge-list text format or the JSON form, dispatching
    /// on the first non-whitespace byte.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_edge_list(text)
        }
    }

    /// Parses the edge-list text format: one `LABEL->LABEL` edge per line, a
    /// bare `LABEL` line declaring an isolated vertex, blank lines and `#`
    /// comments ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, u32> = HashMap::new();
        let mut edges: Vec<(u32, u32, usize)> = Vec::new();

        let intern = |tok: &str, labels: &mut Vec<String>, index: &mut HashMap<String, u32>| {
            if let Some(&i) = index.get(tok) {
                i
            } else {
                let i = labels.len() as u32;
                labels.push(tok.to_string());
                index.insert(tok.to_string(), i);
                i
            }
        };

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let trimmed = stripped.trim();
            if trimmed.is_empty() {
                continue;
            }
            match trimmed.find("->") {
                Some(arrow) => {
                    let lhs = trimmed[..arrow].trim();
                    let rhs = trimmed[arrow + 2..].trim();
                    if lhs.is_empty() {
                        return Err(Error::Parse {
                            line,
                            column: 1,
                            message: "missing source label before `->`".into(),
                        });
                    }
                    if rhs.is_empty() || rhs.contains("->") {
                        return Err(Error::Parse {
                            line,
                            column: arrow + 3,
                            message: "expected exactly one `LABEL->LABEL` edge".into(),
                        });
                    }
                    if lhs.split_whitespace().count() != 1 || rhs.split_whitespace().count() != 1 {
                        return Err(Error::Parse {
                            line,
                            column: 1,
                            message: "labels must not contain whitespace".into(),
                        });
                    }
                    if lhs == rhs {
                        return Err(Error::SelfEdge {
                            label: lhs.to_string(),
                            line,
                        });
                    }
                    let u = intern(lhs, &mut labels, &mut index);
                    let v = intern(rhs, &mut labels, &mut index);
                    edges.push((u, v, line));
                }
                None => {
                    if trimmed.split_whitespace().count() != 1 {
                        return Err(Error::Parse {
                            line,
                            column: 1,
                            message: "expected `LABEL->LABEL` or a bare vertex label".into(),
                        });
                    }
                    intern(trimmed, &mut labels, &mut index);
                }
            }
        }
        Self::with_duplicates(labels, edges.into_iter().map(|(u, v, _)| (u, v)).collect(), 0)
    }

    /// Parses the JSON form `{"vertices":[...], "edges":[[u,v],...]}` where
    /// vertices and edge endpoints are labels (strings or integers).
    pub fn parse_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        let obj = value.as_object().ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: "expected a JSON object".into(),
        })?;
        let vertices = obj
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse {
                line: 1,
                column: 1,
                message: "missing `vertices` array".into(),
            })?;
        let labels: Vec<String> = vertices.iter().map(label_of).collect::<Result<_>>()?;
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            index.insert(l.clone(), i as u32);
        }
        let mut edge_list = Vec::new();
        if let Some(edges) = obj.get("edges") {
            let edges = edges.as_array().ok_or_else(|| Error::Parse {
                line: 1,
                column: 1,
                message: "`edges` must be an array of pairs".into(),
            })?;
            for e in edges {
                let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                    Error::Parse {
                        line: 1,
                        column: 1,
                        message: "each edge must be a `[from, to]` pair".into(),
                    }
                })?;
                let u = label_of(&pair[0])?;
                let v = label_of(&pair[1])?;
                let ui = *index.get(&u).ok_or(Error::UnknownVertex { label: u })?;
                let vi = *index.get(&v).ok_or(Error::UnknownVertex { label: v })?;
                edge_list.push((ui, vi));
            }
        }
        Self::with_duplicates(labels, edge_list, 0)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.contains(&(u, v))
    }

    /// Out-neighbors of `u` in ascending index order.
    pub fn out_neighbors(&self, u: u32) -> &[u32] {
        &self.adjacency[u as usize]
    }

    /// Number of duplicate input edges that were collapsed at parse time.
    pub fn duplicate_edges(&self) -> usize {
        self.duplicate_edges
    }

    /// A vertex order in which every edge goes forward. Deterministic:
    /// sources are consumed in ascending index order.
    pub fn topological_order(&self) -> &[u32] {
        &self.topo_order
    }

    /// Length (edge count) of the longest allowed path; 0 for an edgeless
    /// graph. Always at most `n - 1`.
    pub fn max_allowed_path_length(&self) -> usize {
        let mut dist = vec![0usize; self.vertex_count()];
        for &u in &self.topo_order {
            for &v in self.out_neighbors(u) {
                dist[v as usize] = dist[v as usize].max(dist[u as usize] + 1);
            }
        }
        dist.into_iter().max().unwrap_or(0)
    }

    /// Number of weakly connected components.
    pub fn weakly_connected_components(&self) -> usize {
        let n = self.vertex_count();
        let mut undirected = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            undirected[u as usize].push(v as usize);
            undirected[v as usize].push(u as usize);
        }
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                for &v in &undirected[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        components
    }

    /// Edge-list text form. Every vertex is declared first with a bare-label
    /// line, which fixes the label-to-index order on re-parse and keeps
    /// isolated vertices, so `parse(serialize(g)) == g` exactly.
    pub fn to_edge_list_string(&self) -> String {
        let mut out = String::new();
        for label in &self.labels {
            out.push_str(label);
            out.push('\n');
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("{}->{}\n", self.label(u), self.label(v)));
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        let vertices: Vec<Value> = self.labels.iter().map(|l| Value::String(l.clone())).collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                Value::Array(vec![
                    Value::String(self.label(u).to_string()),
                    Value::String(self.label(v).to_string()),
                ])
            })
            .collect();
        serde_json::json!({ "vertices": vertices, "edges": edges }).to_string()
    }
}

fn label_of(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("vertex label must be a string or integer, got {other}"),
        }),
    }
}

/// Kahn's algorithm with an ascending-index ready set; on failure returns a
/// directed cycle as witness (first vertex repeated at the end).
fn toposort(n: usize, adjacency: &[Vec<u32>]) -> std::result::Result<Vec<u32>, Vec<u32>> {
    let mut indegree = vec![0usize; n];
    for neighbors in adjacency {
        for &v in neighbors {
            indegree[v as usize] += 1;
        }
    }
    let mut ready: BTreeSet<u32> = (0..n as u32).filter(|&v| indegree[v as usize] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&u) = ready.iter().next() {
        ready.remove(&u);
        order.push(u);
        for &v in &adjacency[u as usize] {
            indegree[v as usize] -= 1;
            if indegree[v as usize] == 0 {
                ready.insert(v);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Walk forward among the remaining vertices until one repeats.
    let remaining: Vec<u32> = (0..n as u32).filter(|&v| indegree[v as usize] > 0).collect();
    let start = remaining[0];
    let mut seen_at = HashMap::new();
    let mut walk = vec![start];
    seen_at.insert(start, 0usize);
    loop {
        let u = *walk.last().unwrap();
        let next = adjacency[u as usize]
            .iter()
            .copied()
            .find(|v| indegree[*v as usize] > 0)
            .expect("vertex on a cycle has a successor on a cycle");
        if let Some(&pos) = seen_at.get(&next) {
            let mut cycle: Vec<u32> = walk[pos..].to_vec();
            cycle.push(next);
            return Err(cycle);
        }
        seen_at.insert(next, walk.len());
        walk.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const EXAMPLE_1: &str = "1->2\n1->3\n1->4\n2->3\n2->4\n3->4";
    pub const EXAMPLE_2: &str = "0->1\n0->2\n1->3\n1->4\n2->3\n2->4\n5->3\n5->4";

    #[test]
    fn parses_the_two_worked_digraphs() {
        let g1 = Digraph::parse_edge_list(EXAMPLE_1).unwrap();
        assert_eq!(g1.vertex_count(), 4);
        assert_eq!(g1.edge_count(), 6);
        assert_eq!(g1.labels(), ["1", "2", "3", "4"]);

        let g2 = Digraph::parse_edge_list(EXAMPLE_2).unwrap();
        assert_eq!(g2.vertex_count(), 6);
        assert_eq!(g2.edge_count(), 8);
        assert_eq!(g2.labels(), ["0", "1", "2", "3", "4", "5"]);
    }

    #[test]
    fn rejects_self_edges() {
        match Digraph::parse_edge_list("1->1") {
            Err(Error::SelfEdge { label, line }) => {
                assert_eq!(label, "1");
                assert_eq!(line, 1);
            }
            other => panic!("expected self-edge error, got {other:?}"),
        }
    }

    #[test]
    fn reports_a_cycle_witness() {
        match Digraph::parse_edge_list("a->b\nb->a") {
            Err(Error::Cycle { witness }) => {
                assert_eq!(witness, ["a", "b", "a"]);
            }
            other => panic!("expected cycle error, got {other:?}"),
        }
    }

    #[test]
    fn longer_cycle_witness_closes_on_itself() {
        let err = Digraph::parse_edge_list("a->b\nb->c\nc->a\nd->a").unwrap_err();
        match err {
            Error::Cycle { witness } => {
                assert!(witness.len() >= 3);
                assert_eq!(witness.first(), witness.last());
            }
            other => panic!("expected cycle error, got {other:?}"),
        }
    }

    #[test]
    fn single_vertex_topological_order() {
        let g = Digraph::parse_edge_list("x").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.topological_order(), [0]);
        assert_eq!(g.max_allowed_path_length(), 0);
    }

    #[test]
    fn topological_order_of_example_1_is_label_order() {
        let g = Digraph::parse_edge_list(EXAMPLE_1).unwrap();
        assert_eq!(g.topological_order(), [0, 1, 2, 3]);
    }

    #[test]
    fn max_path_lengths_match_the_worked_examples() {
        assert_eq!(
            Digraph::parse_edge_list(EXAMPLE_1).unwrap().max_allowed_path_length(),
            3
        );
        assert_eq!(
            Digraph::parse_edge_list(EXAMPLE_2).unwrap().max_allowed_path_length(),
            2
        );
        let edgeless = Digraph::parse_edge_list("a\nb\nc\nd\ne").unwrap();
        assert_eq!(edgeless.max_allowed_path_length(), 0);
        assert!(edgeless.max_allowed_path_length() <= edgeless.vertex_count() - 1);
    }

    #[test]
    fn duplicates_are_collapsed_with_a_count() {
        let g = Digraph::parse_edge_list("a->b\na->b\na->c").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.duplicate_edges(), 1);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let g = Digraph::parse_edge_list("# header\n\n a -> b # trailing\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.labels(), ["a", "b"]);
    }

    #[test]
    fn empty_input_is_an_empty_graph_error() {
        assert!(matches!(Digraph::parse_edge_list(""), Err(Error::EmptyGraph)));
        assert!(matches!(
            Digraph::parse_edge_list("# only a comment\n"),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn json_round_trip_preserves_the_graph() {
        let g = Digraph::parse_edge_list(EXAMPLE_2).unwrap();
        let again = Digraph::parse_json(&g.to_json_string()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn text_round_trip_preserves_isolated_vertices() {
        let g = Digraph::new(
            vec!["a".into(), "lonely".into(), "b".into()],
            vec![(0, 2)],
        )
        .unwrap();
        let again = Digraph::parse_edge_list(&g.to_edge_list_string()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn json_accepts_integer_labels() {
        let g = Digraph::parse_json(r#"{"vertices":[0,1,2],"edges":[[0,1],[1,2]]}"#).unwrap();
        assert_eq!(g.labels(), ["0", "1", "2"]);
        assert_eq!(g.edge_count(), 2);
        let err = Digraph::parse_json(r#"{"vertices":[0,1],"edges":[[0,9]]}"#).unwrap_err();
        assert!(matches!(err, Error::UnknownVertex { .. }));
    }

    #[test]
    fn weak_components_counts_islands() {
        let g = Digraph::parse_edge_list("a->b\nc->d\ne").unwrap();
        assert_eq!(g.weakly_connected_components(), 3);
    }
}
