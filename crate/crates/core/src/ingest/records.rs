use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::years::YearRange;

/// A 4-digit HS product code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductCode([u8; 4]);

impl ProductCode {
    pub fn as_str(&self) -> &str {
        // Only ASCII digits are ever stored.
        std::str::from_utf8(&self.0).expect("ascii digits")
    }
}

impl FromStr for ProductCode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let b = s.trim().as_bytes();
        if b.len() != 4 || !b.iter().all(u8::is_ascii_digit) {
            return Err(format!("product code `{}` is not 4 digits", s.trim()));
        }
        Ok(ProductCode([b[0], b[1], b[2], b[3]]))
    }
}

impl fmt::Display for ProductCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One bilateral trade observation.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeRecord {
    pub year: i32,
    pub reporter: String,
    pub partner: String,
    pub product: ProductCode,
    pub export_value: f64,
    pub import_value: f64,
}

impl TradeRecord {
    pub fn total_value(&self) -> f64 {
        self.export_value + self.import_value
    }
}

/// Trims and upper-cases a country code.
pub fn normalize_country(raw: &str) -> String {
    raw.trim().to_ascii_uppercase()
}

/// Header names of the six required columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMap {
    pub year: String,
    pub reporter: String,
    pub partner: String,
    pub product: String,
    pub export_value: String,
    pub import_value: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            year: "year".into(),
            reporter: "reporter".into(),
            partner: "partner".into(),
            product: "product".into(),
            export_value: "export_value".into(),
            import_value: "import_value".into(),
        }
    }
}

impl ColumnMap {
    /// Remaps one logical column (`year`, `reporter`, ...) to a header name.
    pub fn set(&mut self, logical: &str, header: &str) -> Result<()> {
        let slot = match logical {
            "year" => &mut self.year,
            "reporter" => &mut self.reporter,
            "partner" => &mut self.partner,
            "product" => &mut self.product,
            "export_value" => &mut self.export_value,
            "import_value" => &mut self.import_value,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown logical column `{other}`"
                )))
            }
        };
        *slot = header.to_string();
        Ok(())
    }

    fn names(&self) -> [&str; 6] {
        [
            &self.year,
            &self.reporter,
            &self.partner,
            &self.product,
            &self.export_value,
            &self.import_value,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormatConfig {
    pub delimiter: u8,
    pub columns: ColumnMap,
    pub year_range: YearRange,
}

impl Default for FormatConfig {
    fn default() -> Self {
        Self {
            delimiter: b',',
            columns: ColumnMap::default(),
            year_range: YearRange::default(),
        }
    }
}

/// A row that failed validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reject {
    pub line: u64,
    pub reason: String,
    pub raw: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowOutcome {
    Record(TradeRecord),
    Reject(Reject),
}

/// Destination for rejected rows.
pub trait RejectSink {
    fn reject(&mut self, reject: Reject) -> Result<()>;
}

impl RejectSink for Vec<Reject> {
    fn reject(&mut self, reject: Reject) -> Result<()> {
        self.push(reject);
        Ok(())
    }
}

/// Writes rejects as `line_number,reason,raw_row` CSV.
pub struct RejectWriter<W: Write> {
    writer: csv::Writer<W>,
    count: u64,
}

impl<W: Write> RejectWriter<W> {
    pub fn new(inner: W) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(inner);
        writer.write_record(["line_number", "reason", "raw_row"])?;
        Ok(Self { writer, count: 0 })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn finish(mut self) -> Result<W> {
        self.writer.flush()?;
        self.writer
            .into_inner()
            .map_err(|e| Error::Io(e.into_error()))
    }
}

impl<W: Write> RejectSink for RejectWriter<W> {
    fn reject(&mut self, reject: Reject) -> Result<()> {
        self.count += 1;
        self.writer
            .write_record([reject.line.to_string(), reject.reason, reject.raw])?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct ColumnIndex {
    year: usize,
    reporter: usize,
    partner: usize,
    product: usize,
    export_value: usize,
    import_value: usize,
}

/// Lazily parsed stream of trade rows. Buffers a single row at a time.
pub struct RecordStream<R: Read> {
    reader: csv::Reader<R>,
    index: ColumnIndex,
    width: usize,
    delimiter: char,
    year_range: YearRange,
    row: csv::StringRecord,
}

/// Opens a record stream over delimited text with a header row.
///
/// Fails immediately if any required column is absent from the header.
pub fn parse_trade_records<R: Read>(input: R, config: &FormatConfig) -> Result<RecordStream<R>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(config.delimiter)
        .has_headers(true)
        .flexible(true)
        .from_reader(input);
    let headers = reader.headers()?.clone();
    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let [year, reporter, partner, product, export_value, import_value] = config.columns.names();
    let index = ColumnIndex {
        year: find(year)?,
        reporter: find(reporter)?,
        partner: find(partner)?,
        product: find(product)?,
        export_value: find(export_value)?,
        import_value: find(import_value)?,
    };
    let width = headers.len();
    Ok(RecordStream {
        reader,
        index,
        width,
        delimiter: config.delimiter as char,
        year_range: config.year_range,
        row: csv::StringRecord::new(),
    })
}

impl<R: Read> RecordStream<R> {
    fn validate(&self) -> Result<TradeRecord, String> {
        let row = &self.row;
        if row.len() != self.width {
            return Err(format!(
                "expected {} fields, found {}",
                self.width,
                row.len()
            ));
        }
        let field = |i: usize| row.get(i).unwrap_or("").trim();

        let year: i32 = field(self.index.year)
            .parse()
            .map_err(|_| format!("invalid year `{}`", field(self.index.year)))?;
        if !self.year_range.contains(year) {
            return Err(format!("year {year} outside {}", self.year_range));
        }
        let reporter = normalize_country(field(self.index.reporter));
        let partner = normalize_country(field(self.index.partner));
        if reporter.is_empty() || partner.is_empty() {
            return Err("empty country code".into());
        }
        if reporter == partner {
            return Err(format!("self-trade {reporter}"));
        }
        let product: ProductCode = field(self.index.product).parse()?;
        let value = |i: usize, what: &str| -> Result<f64, String> {
            let raw = field(i);
            let v: f64 = if raw.is_empty() {
                0.0
            } else {
                raw.parse().map_err(|_| format!("invalid {what} `{raw}`"))?
            };
            if !v.is_finite() || v < 0.0 {
                return Err(format!("{what} `{raw}` is not a non-negative number"));
            }
            Ok(v)
        };
        let export_value = value(self.index.export_value, "export_value")?;
        let import_value = value(self.index.import_value, "import_value")?;
        Ok(TradeRecord {
            year,
            reporter,
            partner,
            product,
            export_value,
            import_value,
        })
    }

    fn raw_row(&self) -> String {
        let mut out = String::new();
        for (i, f) in self.row.iter().enumerate() {
            if i > 0 {
                out.push(self.delimiter);
            }
            out.push_str(f);
        }
        out
    }

    /// Drains the stream, sending rejects to `sink` and records to `on_record`.
    /// Returns the number of records and rejects seen.
    pub fn drive<S, F>(self, sink: &mut S, mut on_record: F) -> Result<(u64, u64)>
    where
        S: RejectSink + ?Sized,
        F: FnMut(TradeRecord) -> Result<()>,
    {
        let (mut n_ok, mut n_rej) = (0, 0);
        for outcome in self {
            match outcome? {
                RowOutcome::Record(r) => {
                    n_ok += 1;
                    on_record(r)?;
                }
                RowOutcome::Reject(r) => {
                    n_rej += 1;
                    sink.reject(r)?;
                }
            }
        }
        Ok((n_ok, n_rej))
    }
}

impl<R: Read> Iterator for RecordStream<R> {
    type Item = Result<RowOutcome>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.reader.read_record(&mut self.row) {
            Ok(false) => None,
            Ok(true) => {
                let line = self.row.position().map_or(0, |p| p.line());
                Some(Ok(match self.validate() {
                    Ok(rec) => RowOutcome::Record(rec),
                    Err(reason) => RowOutcome::Reject(Reject {
                        line,
                        reason,
                        raw: self.raw_row(),
                    }),
                }))
            }
            Err(e) => match e.kind() {
                csv::ErrorKind::Utf8 { pos, .. } => {
                    let line = pos.as_ref().map_or(0, |p| p.line());
                    Some(Ok(RowOutcome::Reject(Reject {
                        line,
                        reason: "invalid utf-8".into(),
                        raw: String::new(),
                    })))
                }
                _ => Some(Err(e.into())),
            },
        }
    }
}
