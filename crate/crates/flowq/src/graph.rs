//! Loopless multigraphs with ordered edge lists: parsing, a catalog of
//! named test graphs, contraction of vertex subsets, and signed
//! incidence matrices.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed edge '{text}' (expected two vertex indices)")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: loop edge ({v},{v}) not allowed")]
    LoopEdge { line: usize, v: usize },
    #[error("edge list contains no edges")]
    NoEdges,
    #[error("unknown graph name '{0}'")]
    UnknownName(String),
    #[error("contraction set selects no vertices")]
    EmptyContraction,
    #[error("vertex index {0} out of range (graph has {1} vertices)")]
    VertexOutOfRange(usize, usize),
}

/// An undirected multigraph without loops. Vertices are 0..n; parallel
/// edges are distinct entries of the edge list, and the list order is
/// the edge numbering used everywhere else.
///
/// Every edge is stored with its endpoints ordered as given, which
/// fixes the reference orientation for incidence matrices and flows.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Multigraph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    /// Builds a graph from an explicit vertex count and edge list.
    /// Panics on loops or out-of-range endpoints; use [`parse_edge_list`]
    /// for validated input.
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Multigraph {
        assert!(n_vertices >= 1, "graph needs at least one vertex");
        for &(u, v) in &edges {
            assert!(u != v, "loop edge ({u},{v})");
            assert!(u < n_vertices && v < n_vertices, "edge ({u},{v}) out of range");
        }
        Multigraph { n_vertices, edges }
    }

    #[inline]
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    #[inline]
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Parses "u v" pairs, one per line; blank lines and text after '#'
    /// are ignored. The vertex count is one past the largest index seen.
    pub fn parse_edge_list(text: &str) -> Result<Multigraph, GraphError> {
        let mut edges = Vec::new();
        let mut max_v = 0usize;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut it = body.split_whitespace();
            let (a, b) = (it.next(), it.next());
            let rest = it.next();
            let (a, b) = match (a, b, rest) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(GraphError::MalformedLine {
                        line,
                        text: body.to_string(),
                    })
                }
            };
            let parse = |s: &str| -> Result<usize, GraphError> {
                s.parse::<usize>().map_err(|_| GraphError::MalformedLine {
                    line,
                    text: body.to_string(),
                })
            };
            let (u, v) = (parse(a)?, parse(b)?);
            if u == v {
                return Err(GraphError::LoopEdge { line, v: u });
            }
            max_v = max_v.max(u).max(v);
            edges.push((u, v));
        }
        if edges.is_empty() {
            return Err(GraphError::NoEdges);
        }
        Ok(Multigraph {
            n_vertices: max_v + 1,
            edges,
        })
    }

    /// Renders the edge list in the same format `parse_edge_list` reads.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// Complete graph on n vertices, edges in lexicographic order.
    pub fn complete(n: usize) -> Multigraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Multigraph::new(n, edges)
    }

    /// Complete bipartite graph K_{a,b}; part one is 0..a, part two is
    /// a..a+b, edges in lexicographic order.
    pub fn complete_bipartite(a: usize, b: usize) -> Multigraph {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Multigraph::new(a + b, edges)
    }

    /// Looks up a graph in the built-in catalog.
    pub fn named(name: &str) -> Result<Multigraph, GraphError> {
        match name {
            "k3" => Ok(Multigraph::complete(3)),
            "k4" => Ok(Multigraph::complete(4)),
            "k5" => Ok(Multigraph::complete(5)),
            "k33" => Ok(Multigraph::complete_bipartite(3, 3)),
            "k34" => Ok(Multigraph::complete_bipartite(3, 4)),
            "k35" => Ok(Multigraph::complete_bipartite(3, 5)),
            "petersen" => Ok(Multigraph::new(
                10,
                vec![
                    // outer 5-cycle, spokes, inner 5-cycle (pentagram)
                    (0, 1),
                    (1, 2),
                    (2, 3),
                    (3, 4),
                    (4, 0),
                    (0, 5),
                    (1, 6),
                    (2, 7),
                    (3, 8),
                    (4, 9),
                    (5, 7),
                    (7, 9),
                    (9, 6),
                    (6, 8),
                    (8, 5),
                ],
            )),
            "k5_plus_pendant3" => {
                // K5 plus an extra vertex joined to vertices 0, 1, 2.
                let mut edges = Multigraph::complete(5).edges;
                edges.extend([(0, 5), (1, 5), (2, 5)]);
                Ok(Multigraph::new(6, edges))
            }
            "two_triangles_bridge" => Ok(Multigraph::new(
                6,
                vec![
                    (0, 1),
                    (1, 2),
                    (0, 2),
                    (3, 4),
                    (4, 5),
                    (3, 5),
                    (0, 3),
                ],
            )),
            other => Err(GraphError::UnknownName(other.to_string())),
        }
    }

    /// Names accepted by [`Multigraph::named`].
    pub fn catalog() -> &'static [&'static str] {
        &[
            "k3",
            "k4",
            "k5",
            "k33",
            "k34",
            "k35",
            "petersen",
            "k5_plus_pendant3",
            "two_triangles_bridge",
        ]
    }

    /// Whether the graph is connected (single vertex counts).
    pub fn is_connected(&self) -> bool {
        connected_components(self.n_vertices, &self.edges) == 1
    }

    /// Vertex degrees (parallel edges each count once per endpoint).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n_vertices];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Contracts the vertex set `w` to a single vertex, keeping edge
    /// order and dropping edges inside `w` (they become loops).
    ///
    /// Kept vertices are renumbered in ascending order to 0.., and the
    /// merged vertex takes the last index. Returns the contracted graph
    /// and the original indices of the surviving edges.
    pub fn contract_mapped(&self, w: &[usize]) -> Result<(Multigraph, Vec<usize>), GraphError> {
        let mut in_w = vec![false; self.n_vertices];
        for &v in w {
            if v >= self.n_vertices {
                return Err(GraphError::VertexOutOfRange(v, self.n_vertices));
            }
            in_w[v] = true;
        }
        let w_size = in_w.iter().filter(|&&b| b).count();
        if w_size == 0 {
            return Err(GraphError::EmptyContraction);
        }
        let mut map = vec![0usize; self.n_vertices];
        let mut next = 0usize;
        let merged = self.n_vertices - w_size; // index of the merged vertex
        for v in 0..self.n_vertices {
            if in_w[v] {
                map[v] = merged;
            } else {
                map[v] = next;
                next += 1;
            }
        }
        let mut edges = Vec::new();
        let mut kept = Vec::new();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            let (mu, mv) = (map[u], map[v]);
            if mu == mv {
                continue;
            }
            edges.push((mu, mv));
            kept.push(i);
        }
        Ok((
            Multigraph {
                n_vertices: merged + 1,
                edges,
            },
            kept,
        ))
    }

    /// [`Multigraph::contract_mapped`] without the edge index map.
    pub fn contract(&self, w: &[usize]) -> Result<Multigraph, GraphError> {
        self.contract_mapped(w).map(|(g, _)| g)
    }

    /// Signed incidence matrix: +1 at (head, e), -1 at (tail, e) for
    /// edge e = (tail, head).
    pub fn incidence(&self) -> IncidenceMatrix {
        let (n, m) = (self.n_vertices, self.edges.len());
        let mut entries = vec![0i8; n * m];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            entries[u * m + e] = -1;
            entries[v * m + e] = 1;
        }
        IncidenceMatrix {
            n_vertices: n,
            n_edges: m,
            entries,
        }
    }
}

/// Number of connected components of a vertex/edge set.
pub(crate) fn connected_components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut comps = n;
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            comps -= 1;
        }
    }
    comps
}

/// Signed vertex-edge incidence matrix over the integers, entries in
/// {-1, 0, +1}, stored row-major by vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    n_vertices: usize,
    n_edges: usize,
    entries: Vec<i8>,
}

impl IncidenceMatrix {
    #[inline]
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    #[inline]
    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    #[inline]
    pub fn entry(&self, v: usize, e: usize) -> i8 {
        self.entries[v * self.n_edges + e]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_comments_and_blanks() {
        let g = Multigraph::parse_edge_list("0 1\n# full comment\n\n1 2  # trailing\n0 2\n")
            .unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (0, 2)]);
    }

    #[test]
    fn parse_preserves_parallel_edges_and_order() {
        let g = Multigraph::parse_edge_list("0 1\n0 1\n1 0\n").unwrap();
        assert_eq!(g.n_edges(), 3);
        assert_eq!(g.edges(), &[(0, 1), (0, 1), (1, 0)]);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(
            Multigraph::parse_edge_list("0 1\n2\n").unwrap_err(),
            GraphError::MalformedLine { line: 2, .. }
        ));
        assert!(matches!(
            Multigraph::parse_edge_list("0 1 2\n").unwrap_err(),
            GraphError::MalformedLine { line: 1, .. }
        ));
        assert!(matches!(
            Multigraph::parse_edge_list("0 -1\n").unwrap_err(),
            GraphError::MalformedLine { .. }
        ));
        assert_eq!(
            Multigraph::parse_edge_list("3 3\n").unwrap_err(),
            GraphError::LoopEdge { line: 1, v: 3 }
        );
        assert_eq!(
            Multigraph::parse_edge_list("# nothing\n").unwrap_err(),
            GraphError::NoEdges
        );
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = Multigraph::named("k4").unwrap();
        let back = Multigraph::parse_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn catalog_shapes() {
        // (name, vertices, edges) for every catalog entry.
        let want = [
            ("k3", 3, 3),
            ("k4", 4, 6),
            ("k5", 5, 10),
            ("k33", 6, 9),
            ("k34", 7, 12),
            ("k35", 8, 15),
            ("petersen", 10, 15),
            ("k5_plus_pendant3", 6, 13),
            ("two_triangles_bridge", 6, 7),
        ];
        for (name, n, m) in want {
            let g = Multigraph::named(name).unwrap();
            assert_eq!((g.n_vertices(), g.n_edges()), (n, m), "{name}");
            assert!(g.is_connected(), "{name} must be connected");
        }
        assert_eq!(Multigraph::catalog().len(), want.len());
        assert!(matches!(
            Multigraph::named("k6"),
            Err(GraphError::UnknownName(_))
        ));
    }

    #[test]
    fn petersen_is_cubic() {
        let g = Multigraph::named("petersen").unwrap();
        assert!(g.degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn pendant_graph_degrees() {
        let g = Multigraph::named("k5_plus_pendant3").unwrap();
        let mut deg = g.degrees();
        deg.sort_unstable();
        assert_eq!(deg, vec![3, 4, 4, 5, 5, 5]);
    }

    #[test]
    fn connectivity() {
        let disjoint = Multigraph::new(4, vec![(0, 1), (2, 3)]);
        assert!(!disjoint.is_connected());
        let single = Multigraph::new(1, vec![]);
        assert!(single.is_connected());
    }

    #[test]
    fn contract_merges_and_renumbers() {
        // K4 with w = {1, 3}: vertices 0, 2 stay as 0, 1; merged vertex
        // becomes 2. Edge (1,3) collapses to a loop and is dropped.
        let g = Multigraph::complete(4);
        let (c, kept) = g.contract_mapped(&[1, 3]).unwrap();
        assert_eq!(c.n_vertices(), 3);
        // k4 edges: (0,1),(0,2),(0,3),(1,2),(1,3),(2,3) -> drop index 4.
        assert_eq!(kept, vec![0, 1, 2, 3, 5]);
        assert_eq!(c.edges(), &[(0, 2), (0, 1), (0, 2), (2, 1), (1, 2)]);
    }

    #[test]
    fn contract_whole_graph_leaves_one_vertex() {
        let g = Multigraph::complete(3);
        let c = g.contract(&[0, 1, 2]).unwrap();
        assert_eq!(c.n_vertices(), 1);
        assert_eq!(c.n_edges(), 0);
    }

    #[test]
    fn contract_singleton_is_relabel_only() {
        let g = Multigraph::complete(3);
        let (c, kept) = g.contract_mapped(&[0]).unwrap();
        // Vertices 1, 2 -> 0, 1; merged "set" {0} -> 2.
        assert_eq!(c.n_vertices(), 3);
        assert_eq!(c.n_edges(), 3);
        assert_eq!(kept, vec![0, 1, 2]);
        assert_eq!(c.edges(), &[(2, 0), (2, 1), (0, 1)]);
    }

    #[test]
    fn contract_validates_input() {
        let g = Multigraph::complete(3);
        assert_eq!(g.contract(&[]).unwrap_err(), GraphError::EmptyContraction);
        assert_eq!(
            g.contract(&[5]).unwrap_err(),
            GraphError::VertexOutOfRange(5, 3)
        );
        // Duplicates in w are harmless.
        let c = g.contract(&[1, 1]).unwrap();
        assert_eq!(c.n_vertices(), 3);
    }

    #[test]
    fn incidence_columns_sum_to_zero() {
        let g = Multigraph::named("k33").unwrap();
        let b = g.incidence();
        assert_eq!((b.n_vertices(), b.n_edges()), (6, 9));
        for e in 0..b.n_edges() {
            let col: i32 = (0..b.n_vertices()).map(|v| b.entry(v, e) as i32).sum();
            assert_eq!(col, 0);
            let nonzero = (0..b.n_vertices())
                .filter(|&v| b.entry(v, e) != 0)
                .count();
            assert_eq!(nonzero, 2);
        }
    }

    #[test]
    fn incidence_signs_follow_edge_orientation() {
        let g = Multigraph::new(2, vec![(0, 1), (1, 0)]);
        let b = g.incidence();
        assert_eq!(b.entry(0, 0), -1);
        assert_eq!(b.entry(1, 0), 1);
        assert_eq!(b.entry(0, 1), 1);
        assert_eq!(b.entry(1, 1), -1);
    }
}
