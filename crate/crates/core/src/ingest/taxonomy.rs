use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use crate::error::{Error, Result};
use crate::ingest::records::ProductCode;

/// The ten 1-digit HS sectors, in their conventional order.
pub const HS_SECTORS: [&str; 10] = [
    "Textiles",
    "Agriculture",
    "Stone",
    "Minerals",
    "Metals",
    "Chemicals",
    "Vehicles",
    "Machinery",
    "Electronics",
    "Other",
];

pub const OTHER_SECTOR: &str = "Other";

/// Sectors analyzed by default (everything except `Other`).
pub const ANALYZED_SECTORS: [&str; 9] = [
    "Textiles",
    "Agriculture",
    "Stone",
    "Minerals",
    "Metals",
    "Chemicals",
    "Vehicles",
    "Machinery",
    "Electronics",
];

/// Closed set of sector names a taxonomy may use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorSet(BTreeSet<String>);

impl SectorSet {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self(names.into_iter().map(Into::into).collect())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl Default for SectorSet {
    fn default() -> Self {
        Self::new(HS_SECTORS)
    }
}

/// Mapping from 4-digit product code to sector name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SectorTaxonomy {
    entries: BTreeMap<ProductCode, String>,
    allowed: SectorSet,
}

impl SectorTaxonomy {
    pub fn new(allowed: SectorSet) -> Self {
        Self {
            entries: BTreeMap::new(),
            allowed,
        }
    }

    /// The closed set of sector names this taxonomy was validated against.
    pub fn allowed(&self) -> &SectorSet {
        &self.allowed
    }

    pub fn from_pairs<I, S>(pairs: I, allowed: &SectorSet) -> Result<Self>
    where
        I: IntoIterator<Item = (ProductCode, S)>,
        S: Into<String>,
    {
        let mut tax = SectorTaxonomy::new(allowed.clone());
        for (i, (code, sector)) in pairs.into_iter().enumerate() {
            tax.insert(i as u64 + 1, code, sector.into())?;
        }
        Ok(tax)
    }

    fn insert(&mut self, line: u64, code: ProductCode, sector: String) -> Result<()> {
        if !self.allowed.contains(&sector) {
            return Err(Error::UnknownSector { line, name: sector });
        }
        match self.entries.get(&code) {
            Some(existing) if *existing != sector => Err(Error::TaxonomyConflict {
                product: code.to_string(),
                first: existing.clone(),
                second: sector,
            }),
            Some(_) => Ok(()),
            None => {
                self.entries.insert(code, sector);
                Ok(())
            }
        }
    }

    pub fn sector_of(&self, code: &ProductCode) -> Option<&str> {
        self.entries.get(code).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct product codes assigned to `sector`.
    pub fn sector_size(&self, sector: &str) -> usize {
        self.entries.values().filter(|s| *s == sector).count()
    }

    /// Distinct sector names present in the mapping.
    pub fn sectors(&self) -> BTreeSet<&str> {
        self.entries.values().map(String::as_str).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ProductCode, &str)> {
        self.entries.iter().map(|(k, v)| (k, v.as_str()))
    }
}

/// Reads `product_code,sector_name` rows. A leading header row is optional.
pub fn load_taxonomy<R: Read>(input: R, allowed: &SectorSet) -> Result<SectorTaxonomy> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut tax = SectorTaxonomy::new(allowed.clone());
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let line = row.position().map_or(i as u64 + 1, |p| p.line());
        let code_raw = row.get(0).unwrap_or("").trim();
        if i == 0 && code_raw.eq_ignore_ascii_case("product_code") {
            continue;
        }
        if row.len() != 2 {
            return Err(Error::MalformedInput {
                line,
                reason: format!("expected 2 fields, found {}", row.len()),
            });
        }
        let code: ProductCode = code_raw
            .parse()
            .map_err(|reason| Error::MalformedInput { line, reason })?;
        let sector = row[1].trim().to_string();
        tax.insert(line, code, sector)?;
    }
    Ok(tax)
}
