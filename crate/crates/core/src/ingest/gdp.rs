use std::collections::BTreeMap;
use std::io::Read;

use crate::error::{Error, Result};

/// Global GDP by year. Contiguous, strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct GdpSeries {
    points: BTreeMap<i32, f64>,
}

impl GdpSeries {
    pub fn from_points<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, f64)>,
    {
        let mut map = BTreeMap::new();
        for (year, value) in points {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::GdpNonPositive { year });
            }
            if map.insert(year, value).is_some() {
                return Err(Error::GdpDuplicate(year));
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidConfig("gdp series is empty".into()));
        }
        let years: Vec<i32> = map.keys().copied().collect();
        for w in years.windows(2) {
            if w[1] != w[0] + 1 {
                return Err(Error::GdpGap {
                    before: w[0],
                    after: w[1],
                });
            }
        }
        Ok(Self { points: map })
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        self.points.get(&year).copied()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.points.iter().map(|(y, v)| (*y, *v))
    }
}

/// Reads `year,gdp_value` rows; a leading header row is optional.
pub fn load_gdp_series<R: Read>(input: R) -> Result<GdpSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut points = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let line = row.position().map_or(i as u64 + 1, |p| p.line());
        let first = row.get(0).unwrap_or("").trim();
        if i == 0 && first.eq_ignore_ascii_case("year") {
            continue;
        }
        let malformed = |reason: String| Error::MalformedInput { line, reason };
        if row.len() != 2 {
            return Err(malformed(format!("expected 2 fields, found {}", row.len())));
        }
        let year: i32 = first
            .parse()
            .map_err(|_| malformed(format!("invalid year `{first}`")))?;
        let value: f64 = row[1]
            .trim()
            .parse()
            .map_err(|_| malformed(format!("invalid gdp value `{}`", row[1].trim())))?;
        points.push((year, value));
    }
    GdpSeries::from_points(points)
}
