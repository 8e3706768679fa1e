//! Test-only reference implementations. Nothing here calls into the
//! library's graph, metric, correlation or volume code paths.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rand::Rng;

use tradenet::fmt::{fixed3, real};
use tradenet::pipeline::RunConfig;
use tradenet::UndirectedGraph;

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub const FIXTURE_SECTORS: [&str; 3] = ["Agriculture", "Metals", "Vehicles"];

pub fn fixture_config(work: &Path) -> RunConfig {
    let dir = fixture_dir();
    tradenet::pipeline::RawConfig {
        records: Some(dir.join("records.csv")),
        taxonomy: Some(dir.join("taxonomy.csv")),
        gdp: Some(dir.join("gdp.csv")),
        years: Some("2000:2009".parse().unwrap()),
        sectors: Some(FIXTURE_SECTORS.iter().map(|s| s.to_string()).collect()),
        out: Some(work.join("out")),
        cache: Some(work.join("cache")),
        ..Default::default()
    }
    .resolve()
    .unwrap()
}

// ---------------------------------------------------------------------------
// Graph metrics by brute force over an adjacency matrix.

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveMetrics {
    pub node_count: usize,
    pub edge_count: usize,
    pub average_degree: f64,
    pub average_clustering: f64,
    pub density: f64,
    pub triangle_count: u64,
    pub diameter: Option<u32>,
    pub component_count: usize,
    pub local_clustering: Vec<f64>,
    pub neighbor_edges: Vec<u64>,
}

pub fn adjacency_matrix(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for &(a, b) in edges {
        m[a][b] = true;
        m[b][a] = true;
    }
    m
}

pub fn naive_metrics(n: usize, edges: &[(usize, usize)]) -> NaiveMetrics {
    let adj = adjacency_matrix(n, edges);
    let degree: Vec<usize> = (0..n)
        .map(|v| adj[v].iter().filter(|&&x| x).count())
        .collect();
    let edge_count = degree.iter().sum::<usize>() / 2;

    let mut neighbor_edges = vec![0u64; n];
    let mut local = vec![0.0; n];
    for v in 0..n {
        let nbrs: Vec<usize> = (0..n).filter(|&u| adj[v][u]).collect();
        let mut links = 0u64;
        for i in 0..nbrs.len() {
            for j in i + 1..nbrs.len() {
                if adj[nbrs[i]][nbrs[j]] {
                    links += 1;
                }
            }
        }
        neighbor_edges[v] = links;
        let k = nbrs.len();
        local[v] = if k < 2 {
            0.0
        } else {
            links as f64 / (k * (k - 1) / 2) as f64
        };
    }

    let mut triangles = 0u64;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if adj[a][b] && adj[b][c] && adj[a][c] {
                    triangles += 1;
                }
            }
        }
    }

    // Components by repeated relaxation of labels, distances by Floyd-Warshall.
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if adj[a][b] && label[b] < label[a] {
                    label[a] = label[b];
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in &label {
        *sizes.entry(l).or_default() += 1;
    }
    const INF: u32 = u32::MAX / 4;
    let mut dist = vec![vec![INF; n]; n];
    for a in 0..n {
        dist[a][a] = 0;
        for b in 0..n {
            if adj[a][b] {
                dist[a][b] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = dist[i][k] + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    let diameter = if n == 0 {
        None
    } else {
        let largest = *sizes.values().max().unwrap();
        let mut d = 0;
        for i in 0..n {
            for j in 0..n {
                if label[i] == label[j] && sizes[&label[i]] == largest {
                    d = d.max(dist[i][j]);
                }
            }
        }
        Some(d)
    };

    NaiveMetrics {
        node_count: n,
        edge_count,
        average_degree: if n == 0 {
            0.0
        } else {
            degree.iter().sum::<usize>() as f64 / n as f64
        },
        average_clustering: if n == 0 {
            0.0
        } else {
            local.iter().sum::<f64>() / n as f64
        },
        density: if n < 2 {
            0.0
        } else {
            edge_count as f64 / (n * (n - 1) / 2) as f64
        },
        triangle_count: triangles,
        diameter,
        component_count: sizes.len(),
        local_clustering: local,
        neighbor_edges,
    }
}

/// All edges of the complete graph on `n` nodes, in a fixed order.
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            v.push((a, b));
        }
    }
    v
}

pub fn graph_from_mask(n: usize, mask: u64) -> Vec<(usize, usize)> {
    all_pairs(n)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e)
        .collect()
}

pub fn random_edges<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize)> {
    all_pairs(n)
        .into_iter()
        .filter(|_| rng.gen_bool(p))
        .collect()
}

pub fn to_graph(n: usize, edges: &[(usize, usize)]) -> UndirectedGraph {
    UndirectedGraph::from_edges(n, edges.iter().copied()).unwrap()
}

// ---------------------------------------------------------------------------
// Correlation by the raw-sums formula.

pub fn textbook_pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    if vx <= 0.0 || vy <= 0.0 {
        return None;
    }
    Some((n * sxy - sx * sy) / (vx.sqrt() * vy.sqrt()))
}

// ---------------------------------------------------------------------------
// Whole-pipeline oracle over a plain comma-separated fixture.

#[derive(Debug, Clone)]
pub struct Row {
    pub year: i32,
    pub reporter: String,
    pub partner: String,
    pub product: String,
    pub export_value: f64,
    pub import_value: f64,
}

/// Splits lines on commas and applies the documented row rules.
pub fn naive_parse(text: &str, first: i32, last: i32) -> (Vec<Row>, usize) {
    let mut rows = Vec::new();
    let mut rejected = 0;
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let ok = (|| {
            if f.len() != 6 {
                return None;
            }
            let year: i32 = f[0].parse().ok()?;
            if year < first || year > last {
                return None;
            }
            let reporter = f[1].to_uppercase();
            let partner = f[2].to_uppercase();
            if reporter.is_empty() || partner.is_empty() || reporter == partner {
                return None;
            }
            if f[3].len() != 4 || !f[3].chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            let export_value: f64 = f[4].parse().ok()?;
            let import_value: f64 = f[5].parse().ok()?;
            if export_value < 0.0 || import_value < 0.0 {
                return None;
            }
            Some(Row {
                year,
                reporter,
                partner,
                product: f[3].to_string(),
                export_value,
                import_value,
            })
        })();
        match ok {
            Some(r) => rows.push(r),
            None => rejected += 1,
        }
    }
    (rows, rejected)
}

pub fn naive_retained(rows: &[Row], first: i32, last: i32) -> BTreeSet<String> {
    let all: BTreeSet<&str> = rows
        .iter()
        .flat_map(|r| [r.reporter.as_str(), r.partner.as_str()])
        .collect();
    all.into_iter()
        .filter(|c| {
            (first..=last).all(|y| {
                rows.iter()
                    .any(|r| r.year == y && (r.reporter == *c || r.partner == *c))
            })
        })
        .map(String::from)
        .collect()
}

pub fn naive_taxonomy(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .skip(1)
        .filter_map(|l| l.split_once(','))
        .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
        .collect()
}

/// Edge set of one sector-year: filter, group by unordered pair, aggregate.
pub fn naive_edges(
    rows: &[Row],
    taxonomy: &BTreeMap<String, String>,
    sector: &str,
    year: i32,
    retained: &BTreeSet<String>,
    min_edge_value: f64,
) -> BTreeMap<(String, String), f64> {
    let mut agg: BTreeMap<(String, String), f64> = BTreeMap::new();
    for r in rows {
        if r.year != year || taxonomy.get(&r.product).map(String::as_str) != Some(sector) {
            continue;
        }
        if !retained.contains(&r.reporter) || !retained.contains(&r.partner) {
            continue;
        }
        let key = if r.reporter < r.partner {
            (r.reporter.clone(), r.partner.clone())
        } else {
            (r.partner.clone(), r.reporter.clone())
        };
        *agg.entry(key).or_default() += r.export_value + r.import_value;
    }
    agg.retain(|_, w| *w > min_edge_value);
    agg
}

pub fn indexed(edges: &BTreeMap<(String, String), f64>) -> (usize, Vec<(usize, usize)>) {
    let nodes: BTreeSet<&String> = edges.keys().flat_map(|(a, b)| [a, b]).collect();
    let index: BTreeMap<&String, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let e = edges.keys().map(|(a, b)| (index[a], index[b])).collect();
    (nodes.len(), e)
}

fn lerp_quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() as f64 - 1.0);
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[i]
    }
}

pub struct NaiveVolumeRow {
    pub year: i32,
    pub avg_change: f64,
    pub avg_pct: Option<f64>,
    pub avg_pct_excl: Option<f64>,
    pub zero_den: usize,
}

/// Per-reporter volume changes with Tukey fences at `factor`·IQR.
pub fn naive_volume(
    rows: &[Row],
    countries: &BTreeSet<String>,
    first: i32,
    last: i32,
    factor: f64,
) -> (Vec<NaiveVolumeRow>, Vec<(String, i32, f64)>) {
    let mut vol: BTreeMap<(String, i32), f64> = BTreeMap::new();
    for r in rows.iter().filter(|r| countries.contains(&r.reporter)) {
        *vol.entry((r.reporter.clone(), r.year)).or_default() += r.export_value + r.import_value;
    }
    let mut out = Vec::new();
    let mut outliers = Vec::new();
    for y in first + 1..=last {
        let mut changes = Vec::new();
        let mut pcts: Vec<(String, f64)> = Vec::new();
        let mut zero_den = 0;
        for c in countries {
            if let (Some(p), Some(v)) = (vol.get(&(c.clone(), y - 1)), vol.get(&(c.clone(), y))) {
                changes.push(v - p);
                if *p > 0.0 {
                    pcts.push((c.clone(), (v - p) / p));
                } else {
                    zero_den += 1;
                }
            }
        }
        if changes.is_empty() {
            continue;
        }
        let mut sorted: Vec<f64> = pcts.iter().map(|x| x.1).collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (lo, hi) = if sorted.is_empty() {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            let q1 = lerp_quantile(&sorted, 0.25);
            let q3 = lerp_quantile(&sorted, 0.75);
            (q1 - factor * (q3 - q1), q3 + factor * (q3 - q1))
        };
        let mean = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
        let all: Vec<f64> = pcts.iter().map(|x| x.1).collect();
        let kept: Vec<f64> = all
            .iter()
            .copied()
            .filter(|p| *p >= lo && *p <= hi)
            .collect();
        for (c, p) in &pcts {
            if *p < lo || *p > hi {
                outliers.push((c.clone(), y, *p));
            }
        }
        out.push(NaiveVolumeRow {
            year: y,
            avg_change: mean(&changes).unwrap(),
            avg_pct: mean(&all),
            avg_pct_excl: mean(&kept),
            zero_den,
        });
    }
    outliers.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    (out, outliers)
}

/// Expected report files for the bundled fixture, produced entirely by
/// the oracles above.
pub fn oracle_golden_files() -> BTreeMap<&'static str, String> {
    let dir = fixture_dir();
    let (first, last) = (2000, 2009);
    let text = std::fs::read_to_string(dir.join("records.csv")).unwrap();
    let (rows, _) = naive_parse(&text, first, last);
    let retained = naive_retained(&rows, first, last);
    let taxonomy = naive_taxonomy(&std::fs::read_to_string(dir.join("taxonomy.csv")).unwrap());
    let gdp: BTreeMap<i32, f64> = std::fs::read_to_string(dir.join("gdp.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let (y, g) = l.split_once(',').unwrap();
            (y.parse().unwrap(), g.parse().unwrap())
        })
        .collect();

    let mut metrics_csv = String::from(
        "sector,year,nodes,avg_degree,avg_clustering,density,triangles,diameter,components\n",
    );
    // per sector: [avg_degree, clustering, density, triangles, nodes, diameter] series
    let mut series: BTreeMap<&str, [Vec<(f64, f64)>; 6]> = BTreeMap::new();
    for sector in FIXTURE_SECTORS {
        let s = series.entry(sector).or_default();
        for year in first..=last {
            let edges = naive_edges(&rows, &taxonomy, sector, year, &retained, 0.0);
            let (n, e) = indexed(&edges);
            let m = naive_metrics(n, &e);
            metrics_csv.push_str(&format!(
                "{sector},{year},{},{},{},{},{},{},{}\n",
                m.node_count,
                real(m.average_degree),
                real(m.average_clustering),
                real(m.density),
                m.triangle_count,
                m.diameter.map(|d| d.to_string()).unwrap_or_default(),
                m.component_count
            ));
            let g = gdp[&year];
            s[0].push((m.average_degree, g));
            s[1].push((m.average_clustering, g));
            s[2].push((m.density, g));
            s[3].push((m.triangle_count as f64, g));
            s[4].push((m.node_count as f64, g));
            if let Some(d) = m.diameter {
                s[5].push((d as f64, g));
            }
        }
    }

    let mut corr_csv = String::from(
        "sector,avg_degree_r,avg_clustering_r,density_r,triangles_r,nodes_r,diameter_r\n",
    );
    for (sector, cols) in &series {
        corr_csv.push_str(sector);
        for pairs in cols {
            let (x, y): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
            corr_csv.push(',');
            if let Some(r) = textbook_pearson(&x, &y) {
                corr_csv.push_str(&fixed3(r));
            }
        }
        corr_csv.push('\n');
    }

    let (vol, outliers) = naive_volume(&rows, &retained, first, last, 10.0);
    let mut vol_csv = String::from(
        "year,avg_change,avg_pct_change,avg_pct_change_excl_outliers,zero_denominator_count\n",
    );
    for v in &vol {
        vol_csv.push_str(&format!(
            "{},{},{},{},{}\n",
            v.year,
            real(v.avg_change),
            v.avg_pct.map(real).unwrap_or_default(),
            v.avg_pct_excl.map(real).unwrap_or_default(),
            v.zero_den
        ));
    }
    let mut out_csv = String::from("country,year,pct_change\n");
    for (c, y, p) in &outliers {
        out_csv.push_str(&format!("{c},{y},{}\n", real(*p)));
    }

    BTreeMap::from([
        ("metrics.csv", metrics_csv),
        ("correlations.csv", corr_csv),
        ("volume.csv", vol_csv),
        ("volume_outliers.csv", out_csv),
    ])
}

/// Every file under `root`, relative path → contents.
pub fn read_tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<PathBuf, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                out.insert(
                    p.strip_prefix(root).unwrap().to_path_buf(),
                    std::fs::read(&p).unwrap(),
                );
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Synthetic record streams and allocation accounting.

/// One product per HS sector, used by the synthetic generators.
pub const SYNTHETIC_PRODUCTS: [(&str, &str); 10] = [
    ("5201", "Textiles"),
    ("0101", "Agriculture"),
    ("7108", "Stone"),
    ("2601", "Minerals"),
    ("7208", "Metals"),
    ("3004", "Chemicals"),
    ("8703", "Vehicles"),
    ("8471", "Machinery"),
    ("8542", "Electronics"),
    ("9999", "Other"),
];

/// Writes a synthetic records file plus matching taxonomy and GDP files
/// into `dir`, returning a config over 1995–2018 and the nine sectors.
pub fn synthetic_inputs(dir: &Path, rows: u64, countries: u64) -> RunConfig {
    let records = dir.join("records.csv");
    let mut src = SyntheticRecords::new(rows, countries, 1995, 2018);
    let mut file = std::io::BufWriter::new(std::fs::File::create(&records).unwrap());
    std::io::copy(&mut src, &mut file).unwrap();
    drop(file);
    let mut tax = String::from("product_code,sector_name\n");
    for (p, s) in SYNTHETIC_PRODUCTS {
        tax.push_str(&format!("{p},{s}\n"));
    }
    std::fs::write(dir.join("taxonomy.csv"), tax).unwrap();
    let mut gdp = String::from("year,gdp_value\n");
    for (i, y) in (1995..=2018).enumerate() {
        gdp.push_str(&format!(
            "{y},{}\n",
            3.0e13 + 1.7e12 * i as f64 + 4.0e11 * ((i * 5) % 3) as f64
        ));
    }
    std::fs::write(dir.join("gdp.csv"), gdp).unwrap();
    tradenet::pipeline::RawConfig {
        records: Some(records),
        taxonomy: Some(dir.join("taxonomy.csv")),
        gdp: Some(dir.join("gdp.csv")),
        out: Some(dir.join("out")),
        cache: Some(dir.join("cache")),
        ..Default::default()
    }
    .resolve()
    .unwrap()
}

/// Lazily generated `year,reporter,partner,product,export_value,import_value`
/// text with `rows` data rows. Only one line is buffered at a time.
pub struct SyntheticRecords {
    rows: u64,
    next: u64,
    countries: u64,
    years: (i32, i32),
    line: Vec<u8>,
    pos: usize,
}

impl SyntheticRecords {
    pub fn new(rows: u64, countries: u64, first: i32, last: i32) -> Self {
        Self {
            rows,
            next: 0,
            countries,
            years: (first, last),
            line: b"year,reporter,partner,product,export_value,import_value\n".to_vec(),
            pos: 0,
        }
    }

    fn refill(&mut self) -> bool {
        if self.next >= self.rows {
            return false;
        }
        let i = self.next;
        self.next += 1;
        let span = (self.years.1 - self.years.0 + 1) as u64;
        let year = self.years.0 + (i % span) as i32;
        let a = (i / span) % self.countries;
        let b = (a + 1 + (i / 7) % (self.countries - 1)) % self.countries;
        let product = SYNTHETIC_PRODUCTS[(i % 10) as usize].0;
        self.line.clear();
        use std::io::Write;
        writeln!(
            self.line,
            "{year},C{a:03},C{b:03},{product},{},{}",
            i % 1000,
            (i * 7) % 500
        )
        .unwrap();
        self.pos = 0;
        true
    }
}

impl std::io::Read for SyntheticRecords {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        if self.pos == self.line.len() && !self.refill() {
            return Ok(0);
        }
        let n = buf.len().min(self.line.len() - self.pos);
        buf[..n].copy_from_slice(&self.line[self.pos..self.pos + n]);
        self.pos += n;
        Ok(n)
    }
}

/// Allocator that tracks live and peak bytes per thread. Install with
/// `#[global_allocator]` in the test binaries that need it.
pub struct CountingAlloc;

thread_local! {
    static LIVE: std::cell::Cell<isize> = const { std::cell::Cell::new(0) };
    static PEAK: std::cell::Cell<isize> = const { std::cell::Cell::new(0) };
}

fn track(delta: isize) {
    let _ = LIVE.try_with(|live| {
        let now = live.get() + delta;
        live.set(now);
        let _ = PEAK.try_with(|p| p.set(p.get().max(now)));
    });
}

unsafe impl std::alloc::GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: std::alloc::Layout) -> *mut u8 {
        track(layout.size() as isize);
        std::alloc::System.alloc(layout)
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: std::alloc::Layout) {
        track(-(layout.size() as isize));
        std::alloc::System.dealloc(ptr, layout)
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: std::alloc::Layout, new_size: usize) -> *mut u8 {
        track(new_size as isize - layout.size() as isize);
        std::alloc::System.realloc(ptr, layout, new_size)
    }
}

/// Peak bytes allocated on this thread above the starting level while `f` runs.
pub fn peak_bytes<T>(f: impl FnOnce() -> T) -> (T, isize) {
    let base = LIVE.with(|l| l.get());
    PEAK.with(|p| p.set(base));
    let out = f();
    (out, PEAK.with(|p| p.get()) - base)
}

/// 250 countries on a trading ring over 1995–2018. Every sixth country
/// up to the 37th such one is silent for a single year, so 213 remain.
pub fn coverage_fixture_csv() -> (String, BTreeSet<String>) {
    let n = 250;
    let gaps: BTreeMap<usize, i32> = (0..37)
        .map(|k| (6 * k, 1995 + (k as i32 * 5) % 24))
        .collect();
    let silent = |c: usize, y: i32| gaps.get(&c) == Some(&y);
    let mut text = String::from("year,reporter,partner,product,export_value,import_value\n");
    for year in 1995..=2018 {
        for a in 0..n {
            let b = (a + 1) % n;
            if silent(a, year) || silent(b, year) {
                continue;
            }
            text.push_str(&format!("{year},L{a:03},L{b:03},0101,{},0\n", 1 + a));
        }
    }
    let gapped = gaps.keys().map(|c| format!("L{c:03}")).collect();
    (text, gapped)
}

/// Seeded series pairs for correlation checks: lengths 3..=40, with a mix of
/// independent, positively and negatively related pairs.
pub fn pearson_pairs(seed: u64, count: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(3..=40);
            let slope = [0.0, 1.5, -0.7, 3.0][i % 4];
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-50.0..50.0)).collect();
            let y = x
                .iter()
                .map(|v| slope * v + rng.gen_range(-20.0..20.0))
                .collect();
            (x, y)
        })
        .collect()
}

/// Twelve reporters over 2000–2005 growing 1–6% a year, except `TLS`,
/// whose volume jumps from a token amount to a large one in 2003.
pub fn spike_records() -> Vec<tradenet::ingest::TradeRecord> {
    let mut out = Vec::new();
    for (i, c) in [
        "ARG", "AUS", "BRA", "CAN", "CHN", "DEU", "FRA", "IND", "JPN", "TLS", "USA", "ZAF",
    ]
    .iter()
    .enumerate()
    {
        for year in 2000..=2005 {
            let growth = 1.01 + 0.01 * (i % 6) as f64;
            let base = 1000.0 * (i as f64 + 1.0) * growth.powi(year - 2000);
            let v = if *c == "TLS" && year < 2003 {
                base / 500.0
            } else {
                base
            };
            out.push(tradenet::ingest::TradeRecord {
                year,
                reporter: c.to_string(),
                partner: "WLD".into(),
                product: "0101".parse().unwrap(),
                export_value: v.round(),
                import_value: 0.0,
            });
        }
    }
    out
}
