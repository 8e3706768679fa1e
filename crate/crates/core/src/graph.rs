use crate::error::{Error, Result};

/// Simple undirected graph over nodes `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UndirectedGraph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl UndirectedGraph {
    pub fn new(node_count: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Repeated edges collapse into one.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(node_count);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Inserts edge `{a, b}`; returns false if it was already present.
    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<bool> {
        let n = self.node_count();
        for v in [a, b] {
            if v >= n {
                return Err(Error::NodeOutOfRange {
                    node: v,
                    node_count: n,
                });
            }
        }
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        let pos = match self.adjacency[a].binary_search(&b) {
            Ok(_) => return Ok(false),
            Err(pos) => pos,
        };
        self.adjacency[a].insert(pos, b);
        let pos = self.adjacency[b].binary_search(&a).unwrap_err();
        self.adjacency[b].insert(pos, a);
        self.edge_count += 1;
        Ok(true)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.node_count() && self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, nbrs)| nbrs.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }
}
