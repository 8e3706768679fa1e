//! Per-(sector, year) trade graph construction.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::ingest::{ProductCode, SectorTaxonomy, TradeRecord};

/// Undirected, unweighted trade network for one sector and year.
///
/// `nodes` is sorted, so node index order equals country-code order. Every
/// node is the endpoint of at least one edge.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeGraph {
    pub sector: String,
    pub year: i32,
    nodes: Vec<String>,
    graph: UndirectedGraph,
    /// Aggregated trade value per edge, aligned with `graph.edges()`.
    weights: Vec<f64>,
}

impl TradeGraph {
    pub fn empty(sector: impl Into<String>, year: i32) -> Self {
        Self {
            sector: sector.into(),
            year,
            nodes: Vec::new(),
            graph: UndirectedGraph::default(),
            weights: Vec::new(),
        }
    }

    /// Builds from `(a, b, weight)` triples; endpoints become the node set.
    pub fn from_weighted_edges<I>(sector: impl Into<String>, year: i32, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, String, f64)>,
    {
        let mut by_pair: BTreeMap<(String, String), f64> = BTreeMap::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::InvalidConfig(format!("self-loop on {a}")));
            }
            let key = if a < b { (a, b) } else { (b, a) };
            *by_pair.entry(key).or_insert(0.0) += w;
        }
        let nodes: Vec<String> = by_pair
            .keys()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: HashMap<&str, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut graph = UndirectedGraph::new(nodes.len());
        for (a, b) in by_pair.keys() {
            graph.add_edge(index[a.as_str()], index[b.as_str()])?;
        }
        // BTreeMap order over (a, b) names matches graph.edges() index order.
        let weights = by_pair.into_values().collect();
        Ok(Self {
            sector: sector.into(),
            year,
            nodes,
            graph,
            weights,
        })
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Edges as `(a, b, weight)` with `a < b`, sorted by `(a, b)`.
    pub fn weighted_edges(&self) -> impl Iterator<Item = (&str, &str, f64)> + '_ {
        self.graph
            .edges()
            .zip(&self.weights)
            .map(|((a, b), w)| (self.nodes[a].as_str(), self.nodes[b].as_str(), *w))
    }

    pub fn edge_set(&self) -> BTreeSet<(String, String)> {
        self.weighted_edges()
            .map(|(a, b, _)| (a.to_string(), b.to_string()))
            .collect()
    }

    /// Writes the `country_a,country_b,weight` edge list.
    pub fn write_edge_list<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["country_a", "country_b", "weight"])?;
        for (a, b, weight) in self.weighted_edges() {
            w.write_record([a, b, &weight.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(sector: &str, year: i32, input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let mut edges = Vec::new();
        for row in r.records() {
            let row = row?;
            let line = row.position().map_or(0, |p| p.line());
            if row.len() != 3 {
                return Err(Error::MalformedInput {
                    line,
                    reason: "edge list rows need 3 fields".into(),
                });
            }
            let weight: f64 = row[2].parse().map_err(|_| Error::MalformedInput {
                line,
                reason: format!("invalid weight `{}`", &row[2]),
            })?;
            edges.push((row[0].to_string(), row[1].to_string(), weight));
        }
        Self::from_weighted_edges(sector, year, edges)
    }
}

/// Counters collected while building graphs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Records whose product code is absent from the taxonomy.
    pub unknown_products: u64,
    /// Records that contributed to some graph.
    pub used: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildOutcome {
    pub graphs: BTreeMap<(String, i32), TradeGraph>,
    pub stats: BuildStats,
}

/// Streaming aggregator: feed records one at a time, then `finish`.
pub struct NetworkBuilder {
    sectors: Vec<String>,
    years: BTreeSet<i32>,
    min_edge_value: f64,
    countries: Vec<String>,
    country_index: HashMap<String, u32>,
    /// `None` for products of sectors that are not being built.
    product_sector: HashMap<ProductCode, Option<u16>>,
    cells: HashMap<(u16, i32), HashMap<(u32, u32), f64>>,
    stats: BuildStats,
}

impl NetworkBuilder {
    pub fn new<S: AsRef<str>>(
        taxonomy: &SectorTaxonomy,
        sectors: &[S],
        years: &[i32],
        retained_countries: &BTreeSet<String>,
        min_edge_value: f64,
    ) -> Result<Self> {
        if !(min_edge_value >= 0.0 && min_edge_value.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "min_edge_value must be a finite non-negative number, got {min_edge_value}"
            )));
        }
        if sectors.is_empty() || years.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one sector and one year are required".into(),
            ));
        }
        let mut sector_names: Vec<String> = Vec::new();
        for s in sectors {
            let s = s.as_ref();
            if !taxonomy.allowed().contains(s) {
                return Err(Error::UnknownSeriesSector(s.to_string()));
            }
            if !sector_names.iter().any(|n| n == s) {
                sector_names.push(s.to_string());
            }
        }
        let product_sector = taxonomy
            .iter()
            .map(|(code, sector)| {
                let idx = sector_names
                    .iter()
                    .position(|n| n == sector)
                    .map(|i| i as u16);
                (*code, idx)
            })
            .collect();
        let countries: Vec<String> = retained_countries.iter().cloned().collect();
        let country_index = countries
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as u32))
            .collect();
        Ok(Self {
            sectors: sector_names,
            years: years.iter().copied().collect(),
            min_edge_value,
            countries,
            country_index,
            product_sector,
            cells: HashMap::new(),
            stats: BuildStats::default(),
        })
    }

    pub fn observe(&mut self, record: &TradeRecord) {
        let sector = match self.product_sector.get(&record.product) {
            None => {
                self.stats.unknown_products += 1;
                return;
            }
            Some(None) => return,
            Some(Some(s)) => *s,
        };
        if !self.years.contains(&record.year) {
            return;
        }
        let (Some(&a), Some(&b)) = (
            self.country_index.get(record.reporter.as_str()),
            self.country_index.get(record.partner.as_str()),
        ) else {
            return;
        };
        let key = if a < b { (a, b) } else { (b, a) };
        *self
            .cells
            .entry((sector, record.year))
            .or_default()
            .entry(key)
            .or_insert(0.0) += record.total_value();
        self.stats.used += 1;
    }

    pub fn finish(self) -> BuildOutcome {
        let cells: Vec<(u16, i32)> = (0..self.sectors.len() as u16)
            .flat_map(|s| self.years.iter().map(move |&y| (s, y)))
            .collect();
        let graphs = cells
            .into_par_iter()
            .map(|(s, y)| {
                let sector = &self.sectors[s as usize];
                let graph = match self.cells.get(&(s, y)) {
                    None => TradeGraph::empty(sector.clone(), y),
                    Some(pairs) => self.materialize(sector, y, pairs),
                };
                ((sector.clone(), y), graph)
            })
            .collect();
        BuildOutcome {
            graphs,
            stats: self.stats,
        }
    }

    fn materialize(&self, sector: &str, year: i32, pairs: &HashMap<(u32, u32), f64>) -> TradeGraph {
        let edges = pairs
            .iter()
            .filter(|(_, &w)| w > self.min_edge_value)
            .map(|(&(a, b), &w)| {
                (
                    self.countries[a as usize].clone(),
                    self.countries[b as usize].clone(),
                    w,
                )
            });
        TradeGraph::from_weighted_edges(sector, year, edges).expect("pairs are distinct countries")
    }
}

/// Builds the trade graph for a single `(sector, year)` cell.
pub fn build_graph<'a, I>(
    records: I,
    taxonomy: &SectorTaxonomy,
    sector: &str,
    year: i32,
    retained_countries: &BTreeSet<String>,
    min_edge_value: f64,
) -> Result<(TradeGraph, BuildStats)>
where
    I: IntoIterator<Item = &'a TradeRecord>,
{
    let mut out = build_all(
        records,
        taxonomy,
        &[year],
        &[sector],
        retained_countries,
        min_edge_value,
    )?;
    let graph = out
        .graphs
        .remove(&(sector.to_string(), year))
        .expect("cell always present");
    Ok((graph, out.stats))
}

/// Builds one graph per `(sector, year)` pair.
pub fn build_all<'a, I, S>(
    records: I,
    taxonomy: &SectorTaxonomy,
    years: &[i32],
    sectors: &[S],
    retained_countries: &BTreeSet<String>,
    min_edge_value: f64,
) -> Result<BuildOutcome>
where
    I: IntoIterator<Item = &'a TradeRecord>,
    S: AsRef<str>,
{
    let mut builder =
        NetworkBuilder::new(taxonomy, sectors, years, retained_countries, min_edge_value)?;
    for r in records {
        builder.observe(r);
    }
    Ok(builder.finish())
}
