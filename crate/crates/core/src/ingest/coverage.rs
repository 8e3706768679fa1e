use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::ingest::records::TradeRecord;
use crate::years::YearRange;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageFilterResult {
    pub retained: BTreeSet<String>,
    pub dropped: BTreeSet<String>,
    pub year_range: YearRange,
}

impl CoverageFilterResult {
    pub fn observed(&self) -> usize {
        self.retained.len() + self.dropped.len()
    }
}

/// Tracks, per country, which years it appears in (as reporter or partner).
#[derive(Debug, Clone)]
pub struct CoverageAccumulator {
    year_range: YearRange,
    seen: HashMap<String, Vec<bool>>,
    records: u64,
}

impl CoverageAccumulator {
    pub fn new(year_range: YearRange) -> Self {
        Self {
            year_range,
            seen: HashMap::new(),
            records: 0,
        }
    }

    pub fn observe(&mut self, record: &TradeRecord) {
        self.records += 1;
        let Some(offset) = self.year_range.offset(record.year) else {
            return;
        };
        for country in [&record.reporter, &record.partner] {
            match self.seen.get_mut(country.as_str()) {
                Some(years) => years[offset] = true,
                None => {
                    let mut years = vec![false; self.year_range.len()];
                    years[offset] = true;
                    self.seen.insert(country.clone(), years);
                }
            }
        }
    }

    pub fn finish(self) -> Result<CoverageFilterResult> {
        if self.records == 0 {
            return Err(Error::EmptyRecords);
        }
        let mut retained = BTreeSet::new();
        let mut dropped = BTreeSet::new();
        for (country, years) in self.seen {
            if years.iter().all(|&y| y) {
                retained.insert(country);
            } else {
                dropped.insert(country);
            }
        }
        Ok(CoverageFilterResult {
            retained,
            dropped,
            year_range: self.year_range,
        })
    }
}

/// Keeps the countries that appear in at least one record in every year of
/// `year_range`.
pub fn filter_full_coverage_countries<'a, I>(
    records: I,
    year_range: YearRange,
) -> Result<CoverageFilterResult>
where
    I: IntoIterator<Item = &'a TradeRecord>,
{
    let mut acc = CoverageAccumulator::new(year_range);
    for r in records {
        acc.observe(r);
    }
    acc.finish()
}
