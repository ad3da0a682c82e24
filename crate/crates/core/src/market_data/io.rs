//! Quote-file ingestion: CSV (`date,time,price`), a one-day-per-record JSON
//! format with a price array, and gzip-compressed variants of either.

use std::io::Read;
use std::path::Path;

use chrono::{NaiveDate, NaiveTime};
use flate2::read::GzDecoder;
use serde::Deserialize;

use crate::error::{Error, Result};

use super::{Quote, QuoteDay, QuoteSeries};

/// Input file format for [`parse_quotes`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuoteFormat {
    /// `date,time,price` rows with a mandatory header.
    Csv,
    /// Array of `{date, prices, [start_time], [bar_minutes]}` records.
    Json,
}

impl QuoteFormat {
    /// Guess the format from a file name; `.json` (optionally `.json.gz`)
    /// selects JSON, anything else CSV.
    pub fn from_path(path: &Path) -> QuoteFormat {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().to_ascii_lowercase())
            .unwrap_or_default();
        let stem = name.strip_suffix(".gz").unwrap_or(&name);
        if stem.ends_with(".json") {
            QuoteFormat::Json
        } else {
            QuoteFormat::Csv
        }
    }
}

/// Parse an intraday quote stream. Gzip input is detected by magic bytes.
pub fn parse_quotes<R: Read>(mut reader: R, format: QuoteFormat) -> Result<QuoteSeries> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.starts_with(&[0x1f, 0x8b]) {
        let mut decoded = Vec::new();
        GzDecoder::new(&bytes[..]).read_to_end(&mut decoded)?;
        bytes = decoded;
    }
    match format {
        QuoteFormat::Csv => parse_csv(&bytes),
        QuoteFormat::Json => parse_json(&bytes),
    }
}

fn parse_time(s: &str) -> Option<NaiveTime> {
    NaiveTime::parse_from_str(s, "%H:%M")
        .or_else(|_| NaiveTime::parse_from_str(s, "%H:%M:%S"))
        .ok()
}

fn parse_csv(bytes: &[u8]) -> Result<QuoteSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);

    let headers = reader
        .headers()
        .map_err(|e| Error::Parse { line: 1, message: e.to_string() })?
        .clone();
    let names: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
    if names != ["date", "time", "price"] {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header 'date,time,price', found '{}'", names.join(",")),
        });
    }

    let mut days: Vec<QuoteDay> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let date: NaiveDate = record[0].parse().map_err(|_| Error::Parse {
            line,
            message: format!("malformed date '{}'", &record[0]),
        })?;
        let time = parse_time(&record[1]).ok_or_else(|| Error::Parse {
            line,
            message: format!("malformed time '{}'", &record[1]),
        })?;
        let price: f64 = record[2].parse().map_err(|_| Error::Parse {
            line,
            message: format!("malformed price '{}'", &record[2]),
        })?;
        if !(price.is_finite() && price > 0.0) {
            return Err(Error::Data(format!(
                "line {line}: price must be strictly positive, found {price}"
            )));
        }

        match days.last_mut() {
            Some(day) if day.date == date => day.quotes.push(Quote { time, price }),
            Some(day) if date < day.date => {
                return Err(Error::Data(format!(
                    "line {line}: date {date} out of order after {}",
                    day.date
                )));
            }
            _ => days.push(QuoteDay {
                date,
                quotes: vec![Quote { time, price }],
            }),
        }
    }

    // also catches interleaved dates (a revisited date is "out of order")
    QuoteSeries::new(days)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonQuoteDay {
    date: NaiveDate,
    prices: Vec<f64>,
    start_time: Option<String>,
    bar_minutes: Option<u32>,
}

fn parse_json(bytes: &[u8]) -> Result<QuoteSeries> {
    let records: Vec<JsonQuoteDay> = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    let mut days = Vec::with_capacity(records.len());
    for rec in records {
        let start = match &rec.start_time {
            Some(s) => parse_time(s).ok_or_else(|| Error::Data(format!(
                "day {}: malformed start_time '{s}'",
                rec.date
            )))?,
            None => NaiveTime::from_hms_opt(9, 30, 0).unwrap(),
        };
        let bar = chrono::Duration::minutes(i64::from(rec.bar_minutes.unwrap_or(5)));
        let quotes = rec
            .prices
            .iter()
            .enumerate()
            .map(|(j, &price)| Quote {
                time: start + bar * j as i32,
                price,
            })
            .collect();
        days.push(QuoteDay { date: rec.date, quotes });
    }
    QuoteSeries::new(days)
}

/// Write a quote series in the CSV input format.
///
/// Prices are printed with the shortest representation that parses back to
/// the identical `f64`, so write-then-parse is lossless.
pub fn write_quotes_csv<W: std::io::Write>(quotes: &QuoteSeries, mut writer: W) -> Result<()> {
    writeln!(writer, "date,time,price")?;
    for day in quotes.days() {
        for quote in &day.quotes {
            writeln!(
                writer,
                "{},{},{}",
                day.date,
                quote.time.format("%H:%M"),
                quote.price
            )?;
        }
    }
    Ok(())
}
