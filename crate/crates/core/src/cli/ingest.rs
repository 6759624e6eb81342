//! Species-abundance input files.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::params::PartitionData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    /// Header `species,count`, one species per row.
    Csv,
    /// Whitespace-separated positive counts.
    Counts,
}

/// Labelled abundance records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbundanceDataset {
    pub records: Vec<(String, u64)>,
}

impl AbundanceDataset {
    pub fn partition(&self) -> Result<PartitionData> {
        PartitionData::new(self.records.iter().map(|(_, c)| *c).collect())
    }
}

pub fn ingest(path: &Path, format: InputFormat) -> Result<AbundanceDataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text, format)
}

pub fn parse(text: &str, format: InputFormat) -> Result<AbundanceDataset> {
    let records = match format {
        InputFormat::Csv => parse_csv(text)?,
        InputFormat::Counts => parse_counts(text)?,
    };
    if records.is_empty() {
        return Err(Error::InvalidArgument("dataset has no species".into()));
    }
    Ok(AbundanceDataset { records })
}

fn parse_count(field: &str, line: usize) -> Result<u64> {
    let field = field.trim();
    match field.parse::<i128>() {
        Ok(c) if c >= 1 && c <= u64::MAX as i128 => Ok(c as u64),
        Ok(c) => Err(Error::Input { line, msg: format!("count must be a positive integer, got {c}") }),
        Err(_) => Err(Error::Input { line, msg: format!("count {field:?} is not an integer") }),
    }
}

fn parse_csv(text: &str) -> Result<Vec<(String, u64)>> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)));
    match lines.next() {
        Some((_, header)) if header.trim() == "species,count" => {}
        Some((line, header)) => {
            return Err(Error::Input { line, msg: format!("expected header \"species,count\", got {header:?}") })
        }
        None => return Err(Error::Input { line: 1, msg: "missing header".into() }),
    }
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for (line, row) in lines {
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 2 {
            return Err(Error::Input { line, msg: format!("expected 2 fields, found {}", fields.len()) });
        }
        let label = fields[0].trim();
        if label.is_empty() {
            return Err(Error::Input { line, msg: "empty species label".into() });
        }
        let count = parse_count(fields[1], line)?;
        if !seen.insert(label.to_string()) {
            return Err(Error::Input { line, msg: format!("duplicate species label {label:?}") });
        }
        records.push((label.to_string(), count));
    }
    Ok(records)
}

fn parse_counts(text: &str) -> Result<Vec<(String, u64)>> {
    let mut records = Vec::new();
    for (i, row) in text.lines().enumerate() {
        for token in row.split_whitespace() {
            let count = parse_count(token, i + 1)?;
            records.push((format!("s{}", records.len() + 1), count));
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_counts_agree() {
        let a = parse("species,count\na,2\nb,1\nc,1", InputFormat::Csv).unwrap().partition().unwrap();
        assert_eq!((a.n(), a.k()), (4, 3));
        let b = parse("2 1 1\n", InputFormat::Counts).unwrap().partition().unwrap();
        assert_eq!(a, b);
        let crlf = parse("species,count\r\na,2\r\nb,1\r\nc,1\r\n", InputFormat::Csv).unwrap();
        assert_eq!(crlf.partition().unwrap(), a);
    }

    #[test]
    fn errors_name_the_line() {
        let e = parse("species,count\na,2\nb,0\n", InputFormat::Csv).unwrap_err();
        assert!(matches!(e, Error::Input { line: 3, .. }), "{e:?}");
        let e = parse("species,count\na,2\na,1\n", InputFormat::Csv).unwrap_err();
        assert!(matches!(e, Error::Input { line: 3, .. }));
        let e = parse("2 1\n1 -4\n", InputFormat::Counts).unwrap_err();
        assert!(matches!(e, Error::Input { line: 2, .. }));
        let e = parse("name,n\na,1\n", InputFormat::Csv).unwrap_err();
        assert!(matches!(e, Error::Input { line: 1, .. }));
        let e = parse("species,count\na,x\n", InputFormat::Csv).unwrap_err();
        assert!(matches!(e, Error::Input { line: 2, .. }));
        assert!(parse("species,count\n", InputFormat::Csv).is_err());
        assert!(parse("  \n", InputFormat::Counts).is_err());
    }
}
