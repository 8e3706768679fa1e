//! The six structural attributes computed for every trade graph: node
//! count, average degree, average clustering, density, triangle count and
//! diameter (of the largest connected component).

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::netbuild::TradeGraph;

/// `2|E| / |V|`, or 0 for an empty graph.
pub fn average_degree(g: &UndirectedGraph) -> f64 {
    let n = g.node_count();
    if n == 0 {
        return 0.0;
    }
    2.0 * g.edge_count() as f64 / n as f64
}

/// `2|E| / (|V|(|V|-1))`, or 0 when there are fewer than two nodes.
pub fn density(g: &UndirectedGraph) -> f64 {
    let n = g.node_count();
    if n < 2 {
        return 0.0;
    }
    2.0 * g.edge_count() as f64 / (n as f64 * (n as f64 - 1.0))
}

/// Size of the sorted intersection `a ∩ b` restricted to elements `> floor`.
fn count_common_above(a: &[usize], b: &[usize], floor: usize, mut hit: impl FnMut(usize)) -> u64 {
    let start_a = a.partition_point(|&x| x <= floor);
    let start_b = b.partition_point(|&x| x <= floor);
    let (mut i, mut j) = (start_a, start_b);
    let mut count = 0;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                hit(a[i]);
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Calls `f(u, v, w)` once per triangle with `u < v < w`.
fn for_each_triangle(g: &UndirectedGraph, mut f: impl FnMut(usize, usize, usize)) -> u64 {
    let mut total = 0;
    for (u, v) in g.edges() {
        total += count_common_above(g.neighbors(u), g.neighbors(v), v, |w| f(u, v, w));
    }
    total
}

/// Number of edges among each node's neighbours.
pub fn triangles_per_node(g: &UndirectedGraph) -> Vec<u64> {
    let mut t = vec![0u64; g.node_count()];
    for_each_triangle(g, |u, v, w| {
        t[u] += 1;
        t[v] += 1;
        t[w] += 1;
    });
    t
}

pub fn triangle_count(g: &UndirectedGraph) -> u64 {
    for_each_triangle(g, |_, _, _| {})
}

fn clustering_from(t: u64, degree: usize) -> f64 {
    if degree < 2 {
        return 0.0;
    }
    2.0 * t as f64 / (degree as f64 * (degree as f64 - 1.0))
}

pub fn local_clustering(g: &UndirectedGraph, v: usize) -> Result<f64> {
    if v >= g.node_count() {
        return Err(Error::NodeOutOfRange {
            node: v,
            node_count: g.node_count(),
        });
    }
    let nbrs = g.neighbors(v);
    let mut t = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        t += count_common_above(&nbrs[i + 1..], g.neighbors(a), a, |_| {});
    }
    Ok(clustering_from(t, nbrs.len()))
}

/// Mean local clustering over all nodes; degree < 2 nodes contribute 0.
pub fn average_clustering(g: &UndirectedGraph) -> f64 {
    let n = g.node_count();
    if n == 0 {
        return 0.0;
    }
    let t = triangles_per_node(g);
    let sum: f64 = (0..n).map(|v| clustering_from(t[v], g.degree(v))).sum();
    sum / n as f64
}

/// Connected components as lists of nodes, each sorted.
pub fn connected_components(g: &UndirectedGraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Largest BFS distance from `source`, reusing `dist` as scratch space.
fn eccentricity(
    g: &UndirectedGraph,
    source: usize,
    dist: &mut [u32],
    queue: &mut VecDeque<usize>,
) -> u32 {
    dist.fill(u32::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    let mut far = 0;
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        far = far.max(du);
        for &w in g.neighbors(u) {
            if dist[w] == u32::MAX {
                dist[w] = du + 1;
                queue.push_back(w);
            }
        }
    }
    far
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diameter {
    pub length: u32,
    pub component_count: usize,
}

/// Diameter of the largest connected component (maximum over ties), by
/// BFS from every node of that component.
pub fn diameter(g: &UndirectedGraph) -> Result<Diameter> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let components = connected_components(g);
    let largest = components.iter().map(Vec::len).max().unwrap_or(0);
    let mut dist = vec![u32::MAX; g.node_count()];
    let mut queue = VecDeque::new();
    let mut length = 0;
    for comp in components.iter().filter(|c| c.len() == largest) {
        for &v in comp {
            length = length.max(eccentricity(g, v, &mut dist, &mut queue));
        }
    }
    Ok(Diameter {
        length,
        component_count: components.len(),
    })
}

/// All six attributes of a bare graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub node_count: usize,
    pub edge_count: usize,
    pub average_degree: f64,
    pub average_clustering: f64,
    pub density: f64,
    pub triangle_count: u64,
    /// `None` for the empty graph.
    pub diameter: Option<u32>,
    pub component_count: usize,
}

impl GraphMetrics {
    pub fn compute(g: &UndirectedGraph) -> Self {
        let (diameter, component_count) = match diameter(g) {
            Ok(d) => (Some(d.length), d.component_count),
            Err(_) => (None, 0),
        };
        let t = triangles_per_node(g);
        let n = g.node_count();
        let average_clustering = if n == 0 {
            0.0
        } else {
            (0..n)
                .map(|v| clustering_from(t[v], g.degree(v)))
                .sum::<f64>()
                / n as f64
        };
        Self {
            node_count: n,
            edge_count: g.edge_count(),
            average_degree: average_degree(g),
            average_clustering,
            density: density(g),
            triangle_count: t.iter().sum::<u64>() / 3,
            diameter,
            component_count,
        }
    }
}

/// The six attributes for one sector-year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub sector: String,
    pub year: i32,
    pub node_count: usize,
    pub average_degree: f64,
    pub average_clustering: f64,
    pub density: f64,
    pub triangle_count: u64,
    pub diameter: Option<u32>,
    pub component_count: usize,
}

impl MetricsRow {
    pub fn from_metrics(sector: impl Into<String>, year: i32, m: &GraphMetrics) -> Self {
        Self {
            sector: sector.into(),
            year,
            node_count: m.node_count,
            average_degree: m.average_degree,
            average_clustering: m.average_clustering,
            density: m.density,
            triangle_count: m.triangle_count,
            diameter: m.diameter,
            component_count: m.component_count,
        }
    }

    /// Value of a named metric; `None` only for an absent diameter.
    pub fn value(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Nodes => Some(self.node_count as f64),
            Metric::AverageDegree => Some(self.average_degree),
            Metric::AverageClustering => Some(self.average_clustering),
            Metric::Density => Some(self.density),
            Metric::Triangles => Some(self.triangle_count as f64),
            Metric::Diameter => self.diameter.map(f64::from),
        }
    }
}

pub fn compute_metrics_row(g: &TradeGraph) -> MetricsRow {
    MetricsRow::from_metrics(g.sector.clone(), g.year, &GraphMetrics::compute(g.graph()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    AverageDegree,
    AverageClustering,
    Density,
    Triangles,
    Nodes,
    Diameter,
}

impl Metric {
    /// Column order of the correlation report.
    pub const ALL: [Metric; 6] = [
        Metric::AverageDegree,
        Metric::AverageClustering,
        Metric::Density,
        Metric::Triangles,
        Metric::Nodes,
        Metric::Diameter,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Metric::AverageDegree => "avg_degree",
            Metric::AverageClustering => "avg_clustering",
            Metric::Density => "density",
            Metric::Triangles => "triangles",
            Metric::Nodes => "nodes",
            Metric::Diameter => "diameter",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.key() == s)
            .ok_or_else(|| Error::UnknownMetric(s.to_string()))
    }
}
