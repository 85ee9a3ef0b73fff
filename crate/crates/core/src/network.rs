//! Undirected simple graphs with 1-based node ids.
//!
//! Each player sits on a node; the equilibrium structure depends on the
//! extended neighborhood of node `i` (the node plus its neighbors, of size
//! `d_i = 1 + deg(i)`). This module parses and generates the graph shapes
//! the analyses need and enumerates maximal independent sets (the supports
//! of best-shot equilibria) and labeled trees (for extremal experiments).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Node-count cap for exact maximal-independent-set enumeration.
pub const MIS_EXACT_CAP: usize = 30;

/// Node-count cap for exhaustive labeled-tree enumeration.
pub const TREE_CAP: usize = 8;

/// Errors from graph construction, parsing, and enumeration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: self-loop at node {node}")]
    SelfLoop { line: usize, node: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("node id {id} exceeds declared node count {n}")]
    IdOutOfRange { id: usize, n: usize },
    #[error("node ids are 1-based, got 0")]
    ZeroId,
    #[error("no {k}-regular graph on {n} nodes: need k < n and n*k even")]
    InvalidRegular { n: usize, k: usize },
    #[error("generator needs at least {min} nodes, got {n}")]
    TooFewNodes { n: usize, min: usize },
    #[error("exact enumeration capped at {cap} nodes, graph has {n}")]
    TooLarge { n: usize, cap: usize },
}

/// An undirected simple graph. Node ids run from 1 to `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops and
    /// duplicates. `n` defaults to the largest id seen; passing it
    /// explicitly allows trailing isolated nodes.
    pub fn from_edges(n: Option<usize>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut builder = GraphBuilder::new(n);
        for &(u, v) in edges {
            builder.add_edge(u, v, 0)?;
        }
        builder.finish()
    }

    /// Parses the plain-text edge-list format: one `u v` pair per line,
    /// `#` starts a comment, and an optional `n <count>` line declares the
    /// node count (needed only for isolated trailing nodes).
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut declared: Option<usize> = None;
        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields[0] == "n" {
                if declared.is_some() {
                    return Err(GraphError::Parse {
                        line,
                        msg: "repeated node-count declaration".into(),
                    });
                }
                if fields.len() != 2 {
                    return Err(GraphError::Parse {
                        line,
                        msg: format!("expected `n <count>`, got `{content}`"),
                    });
                }
                declared = Some(parse_id(fields[1], line, "node count")?);
                continue;
            }
            if fields.len() != 2 {
                return Err(GraphError::Parse {
                    line,
                    msg: format!("expected `u v`, got `{content}`"),
                });
            }
            let u = parse_id(fields[0], line, "node id")?;
            let v = parse_id(fields[1], line, "node id")?;
            edges.push((u, v, line));
        }
        let mut builder = GraphBuilder::new(declared);
        for (u, v, line) in edges {
            builder.add_edge(u, v, line)?;
        }
        builder.finish()
    }

    /// Emits the graph in the `parse_edge_list` text format.
    pub fn serialize(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted neighbor ids of node `i` (1-based).
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i - 1]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i - 1].len()
    }

    /// Extended neighborhood size `d_i = 1 + deg(i)`.
    pub fn extended_size(&self, i: usize) -> usize {
        self.degree(i) + 1
    }

    /// Node `i` together with its neighbors, sorted.
    pub fn extended_neighborhood(&self, i: usize) -> Vec<usize> {
        let mut out = self.adj[i - 1].clone();
        out.push(i);
        out.sort_unstable();
        out
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u - 1].binary_search(&v).is_ok()
    }

    /// True when every node is reachable from node 1 (vacuously true for
    /// the empty graph).
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![1usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors(u) {
                if !seen[v - 1] {
                    seen[v - 1] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::TooFewNodes { n, min: 3 });
        }
        let edges: Vec<_> = (1..=n).map(|u| (u, u % n + 1)).collect();
        Self::from_edges(Some(n), &edges)
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::TooFewNodes { n, min: 1 });
        }
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in (u + 1)..=n {
                edges.push((u, v));
            }
        }
        Self::from_edges(Some(n), &edges)
    }

    /// Star with center 1 and leaves `2..=n`.
    pub fn star(n: usize) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewNodes { n, min: 2 });
        }
        let edges: Vec<_> = (2..=n).map(|v| (1, v)).collect();
        Self::from_edges(Some(n), &edges)
    }

    pub fn path(n: usize) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::TooFewNodes { n, min: 1 });
        }
        let edges: Vec<_> = (1..n).map(|u| (u, u + 1)).collect();
        Self::from_edges(Some(n), &edges)
    }

    /// Circulant `k`-regular graph: node `i` joins `i +/- 1, ..., i +/- k/2`
    /// (plus the antipode when `k` is odd, which needs `n` even).
    pub fn k_regular(n: usize, k: usize) -> Result<Self, GraphError> {
        if n < 1 {
            return Err(GraphError::TooFewNodes { n, min: 1 });
        }
        if k == 0 || k >= n || !(n * k).is_multiple_of(2) {
            return Err(GraphError::InvalidRegular { n, k });
        }
        let mut offsets: Vec<usize> = (1..=k / 2).collect();
        if !k.is_multiple_of(2) {
            offsets.push(n / 2);
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for &off in &offsets {
                let v = (u + off) % n;
                let (a, b) = (u.min(v) + 1, u.max(v) + 1);
                if !edges.contains(&(a, b)) {
                    edges.push((a, b));
                }
            }
        }
        let g = Self::from_edges(Some(n), &edges)?;
        debug_assert!((1..=n).all(|i| g.degree(i) == k));
        Ok(g)
    }

    /// Enumerates maximal independent sets. Exact (Bron-Kerbosch with
    /// pivoting on the complement graph) up to [`MIS_EXACT_CAP`] nodes,
    /// randomized greedy sampling beyond; at most `limit` sets either way.
    pub fn maximal_independent_sets(&self, limit: usize) -> Result<Vec<Vec<usize>>, GraphError> {
        if self.n <= MIS_EXACT_CAP {
            Ok(self.mis_exact(limit))
        } else {
            Ok(self.mis_greedy(limit))
        }
    }

    fn mis_exact(&self, limit: usize) -> Vec<Vec<usize>> {
        // Maximal cliques of the complement are maximal independent sets.
        let comp: Vec<u32> = (1..=self.n)
            .map(|u| {
                let mut mask = 0u32;
                for v in 1..=self.n {
                    if v != u && !self.has_edge(u, v) {
                        mask |= 1 << (v - 1);
                    }
                }
                mask
            })
            .collect();
        let all: u32 = if self.n == 32 { u32::MAX } else { (1 << self.n) - 1 };
        let mut found: Vec<u32> = Vec::new();
        self.bron_kerbosch(0, all, 0, &comp, limit, &mut found);
        let mut sets: Vec<Vec<usize>> = found
            .into_iter()
            .map(|mask| (1..=self.n).filter(|i| mask & (1 << (i - 1)) != 0).collect())
            .collect();
        sets.sort();
        sets
    }

    fn bron_kerbosch(
        &self,
        r: u32,
        mut p: u32,
        mut x: u32,
        comp: &[u32],
        limit: usize,
        out: &mut Vec<u32>,
    ) {
        if out.len() >= limit {
            return;
        }
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = (0..self.n)
            .filter(|&u| (p | x) & (1 << u) != 0)
            .max_by_key(|&u| (p & comp[u]).count_ones())
            .unwrap();
        let mut candidates = p & !comp[pivot];
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            let bit = 1u32 << v;
            self.bron_kerbosch(r | bit, p & comp[v], x & comp[v], comp, limit, out);
            p &= !bit;
            x |= bit;
            candidates &= !bit;
            if out.len() >= limit {
                return;
            }
        }
    }

    fn mis_greedy(&self, limit: usize) -> Vec<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
        let mut sets: Vec<Vec<usize>> = Vec::new();
        for _ in 0..limit.saturating_mul(8) {
            let mut order: Vec<usize> = (1..=self.n).collect();
            order.shuffle(&mut rng);
            let mut in_set = vec![false; self.n];
            let mut set = Vec::new();
            for u in order {
                if !self.neighbors(u).iter().any(|&v| in_set[v - 1]) {
                    in_set[u - 1] = true;
                    set.push(u);
                }
            }
            set.sort_unstable();
            if !sets.contains(&set) {
                sets.push(set);
                if sets.len() >= limit {
                    break;
                }
            }
        }
        sets.sort();
        sets
    }

    /// All labeled trees on `n` nodes, decoded from Prufer sequences.
    /// There are `n^(n-2)` of them; capped at [`TREE_CAP`] nodes.
    pub fn enumerate_trees(n: usize) -> Result<Vec<Graph>, GraphError> {
        if n < 1 {
            return Err(GraphError::TooFewNodes { n, min: 1 });
        }
        if n > TREE_CAP {
            return Err(GraphError::TooLarge { n, cap: TREE_CAP });
        }
        if n == 1 {
            return Ok(vec![Graph::from_edges(Some(1), &[])?]);
        }
        if n == 2 {
            return Ok(vec![Graph::from_edges(Some(2), &[(1, 2)])?]);
        }
        let len = n - 2;
        let count = n.pow(len as u32);
        let mut trees = Vec::with_capacity(count);
        let mut seq = vec![1usize; len];
        for code in 0..count {
            let mut rem = code;
            for slot in seq.iter_mut() {
                *slot = rem % n + 1;
                rem /= n;
            }
            trees.push(prufer_decode(&seq, n)?);
        }
        Ok(trees)
    }
}

struct GraphBuilder {
    declared: Option<usize>,
    max_id: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphBuilder {
    fn new(declared: Option<usize>) -> Self {
        GraphBuilder {
            declared,
            max_id: 0,
            edges: Vec::new(),
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, line: usize) -> Result<(), GraphError> {
        if u == 0 || v == 0 {
            return Err(GraphError::ZeroId);
        }
        if u == v {
            return Err(GraphError::SelfLoop { line, node: u });
        }
        let (a, b) = (u.min(v), u.max(v));
        if self.edges.contains(&(a, b)) {
            return Err(GraphError::DuplicateEdge { line, u: a, v: b });
        }
        self.max_id = self.max_id.max(b);
        self.edges.push((a, b));
        Ok(())
    }

    fn finish(self) -> Result<Graph, GraphError> {
        let n = match self.declared {
            Some(n) => {
                if self.max_id > n {
                    return Err(GraphError::IdOutOfRange { id: self.max_id, n });
                }
                n
            }
            None => self.max_id,
        };
        let mut edges = self.edges;
        edges.sort_unstable();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u - 1].push(v);
            adj[v - 1].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }
}

fn parse_id(field: &str, line: usize, what: &str) -> Result<usize, GraphError> {
    let id: usize = field.parse().map_err(|_| GraphError::Parse {
        line,
        msg: format!("invalid {what} `{field}`"),
    })?;
    if id == 0 {
        return Err(GraphError::ZeroId);
    }
    Ok(id)
}

fn prufer_decode(seq: &[usize], n: usize) -> Result<Graph, GraphError> {
    let mut degree = vec![1usize; n + 1];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut used = vec![false; n + 1];
    for &s in seq {
        let leaf = (1..=n).find(|&i| degree[i] == 1 && !used[i]).unwrap();
        edges.push((leaf, s));
        used[leaf] = true;
        degree[s] -= 1;
    }
    let mut last: Vec<usize> = (1..=n).filter(|&i| degree[i] == 1 && !used[i]).collect();
    debug_assert_eq!(last.len(), 2);
    let b = last.pop().unwrap();
    let a = last.pop().unwrap();
    edges.push((a, b));
    Graph::from_edges(Some(n), &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic_path() {
        let g = Graph::parse_edge_list("1 2\n2 3").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.degree(1), 1);
        assert_eq!(g.degree(2), 2);
        assert_eq!(g.extended_size(2), 3);
        assert_eq!(g.extended_neighborhood(2), vec![1, 2, 3]);
        assert!(g.has_edge(1, 2) && !g.has_edge(1, 3));
    }

    #[test]
    fn parse_comments_header_and_blanks() {
        let g = Graph::parse_edge_list("# a comment\nn 5\n1 2  # trailing\n\n2 3\n").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.degree(5), 0);
        assert_eq!(g.extended_size(5), 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match Graph::parse_edge_list("1 2\n3 3") {
            Err(GraphError::SelfLoop { line: 2, node: 3 }) => {}
            other => panic!("expected self-loop error, got {other:?}"),
        }
        match Graph::parse_edge_list("1 2\n2 1") {
            Err(GraphError::DuplicateEdge { line: 2, u: 1, v: 2 }) => {}
            other => panic!("expected duplicate error, got {other:?}"),
        }
        assert!(matches!(
            Graph::parse_edge_list("1 2 3"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Graph::parse_edge_list("1 b"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Graph::parse_edge_list("n 2\n1 3"),
            Err(GraphError::IdOutOfRange { id: 3, n: 2 })
        ));
        assert!(matches!(Graph::parse_edge_list("0 1"), Err(GraphError::ZeroId)));
    }

    #[test]
    fn serialize_round_trips() {
        let g = Graph::parse_edge_list("n 6\n2 1\n4 5\n1 3").unwrap();
        let again = Graph::parse_edge_list(&g.serialize()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn handshake_identity() {
        for g in [
            Graph::cycle(7).unwrap(),
            Graph::complete(5).unwrap(),
            Graph::star(6).unwrap(),
            Graph::k_regular(8, 3).unwrap(),
        ] {
            let sum: usize = (1..=g.n()).map(|i| g.extended_size(i) - 1).sum();
            assert_eq!(sum, 2 * g.edges().len());
        }
    }

    #[test]
    fn generators_have_expected_shapes() {
        let c = Graph::cycle(6).unwrap();
        assert!((1..=6).all(|i| c.extended_size(i) == 3));

        let s = Graph::star(4).unwrap();
        assert_eq!(s.extended_size(1), 4);
        assert!((2..=4).all(|i| s.extended_size(i) == 2));

        let k = Graph::complete(4).unwrap();
        assert!((1..=4).all(|i| k.extended_size(i) == 4));

        let r = Graph::k_regular(6, 4).unwrap();
        assert!((1..=6).all(|i| r.degree(i) == 4));

        let p = Graph::path(4).unwrap();
        assert_eq!(p.edges(), &[(1, 2), (2, 3), (3, 4)]);

        assert_eq!(Graph::k_regular(6, 5).unwrap(), Graph::complete(6).unwrap());
    }

    #[test]
    fn impossible_regular_graphs_rejected() {
        assert!(matches!(
            Graph::k_regular(5, 3),
            Err(GraphError::InvalidRegular { n: 5, k: 3 })
        ));
        assert!(matches!(Graph::k_regular(4, 4), Err(GraphError::InvalidRegular { .. })));
        assert!(matches!(Graph::k_regular(4, 0), Err(GraphError::InvalidRegular { .. })));
        assert!(matches!(Graph::cycle(2), Err(GraphError::TooFewNodes { .. })));
    }

    #[test]
    fn connectivity() {
        assert!(Graph::path(5).unwrap().is_connected());
        let split = Graph::from_edges(Some(4), &[(1, 2), (3, 4)]).unwrap();
        assert!(!split.is_connected());
    }

    fn assert_independent_and_maximal(g: &Graph, set: &[usize]) {
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                assert!(!g.has_edge(u, v), "set {set:?} has internal edge {u}-{v}");
            }
        }
        for u in 1..=g.n() {
            if !set.contains(&u) {
                assert!(
                    g.neighbors(u).iter().any(|v| set.contains(v)),
                    "set {set:?} not maximal: {u} could join"
                );
            }
        }
    }

    #[test]
    fn mis_small_graphs() {
        let sets = Graph::complete(4).unwrap().maximal_independent_sets(100).unwrap();
        assert_eq!(sets, vec![vec![1], vec![2], vec![3], vec![4]]);

        let sets = Graph::cycle(4).unwrap().maximal_independent_sets(100).unwrap();
        assert_eq!(sets, vec![vec![1, 3], vec![2, 4]]);

        let g = Graph::path(3).unwrap();
        let sets = g.maximal_independent_sets(100).unwrap();
        assert_eq!(sets, vec![vec![1, 3], vec![2]]);
        for set in &sets {
            assert_independent_and_maximal(&g, set);
        }
    }

    #[test]
    fn mis_respects_limit() {
        let sets = Graph::complete(5).unwrap().maximal_independent_sets(3).unwrap();
        assert_eq!(sets.len(), 3);
    }

    #[test]
    fn mis_greedy_beyond_exact_cap() {
        let g = Graph::cycle(40).unwrap();
        let sets = g.maximal_independent_sets(5).unwrap();
        assert!(!sets.is_empty() && sets.len() <= 5);
        for set in &sets {
            assert_independent_and_maximal(&g, set);
        }
    }

    #[test]
    fn tree_counts_match_cayley() {
        assert_eq!(Graph::enumerate_trees(3).unwrap().len(), 3);
        assert_eq!(Graph::enumerate_trees(4).unwrap().len(), 16);
        let trees = Graph::enumerate_trees(5).unwrap();
        assert_eq!(trees.len(), 125);
        let stars = trees
            .iter()
            .filter(|t| (1..=5).any(|i| t.degree(i) == 4))
            .count();
        assert_eq!(stars, 5);
        for t in &trees {
            assert_eq!(t.edges().len(), 4);
            assert!(t.is_connected());
        }
        assert!(matches!(
            Graph::enumerate_trees(9),
            Err(GraphError::TooLarge { .. })
        ));
    }
}
