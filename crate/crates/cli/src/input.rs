//! Input formats.
//!
//! Labels file: UTF-8, one observation per line, two comma-separated opaque
//! tokens (first clustering, second clustering). A first line starting with
//! `#` is a header and is skipped.
//!
//! Counts file: one table row per line, cells comma-separated, with the same
//! optional `#` header line.

use std::fs;
use std::path::Path;

use clustagree::{table_from_labels, ContingencyTable, Labeling};

use crate::error::CliError;

pub fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn decode(bytes: &[u8]) -> Result<&str, CliError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count()
            + 1;
        CliError::input(format!("line {line}: invalid UTF-8"))
    })
}

/// Numbered data lines, the optional header and a trailing `\r` removed.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.strip_suffix('\r').unwrap_or(line)))
        .filter(|&(number, line)| !(number == 1 && line.starts_with('#')))
}

pub fn parse_labels(bytes: &[u8]) -> Result<(Labeling<String>, Labeling<String>), CliError> {
    let text = decode(bytes)?;
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (number, line) in data_lines(text) {
        let mut fields = line.split(',');
        match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => {
                first.push(a.to_owned());
                second.push(b.to_owned());
            }
            _ => {
                return Err(CliError::input(format!(
                    "line {number}: expected two comma-separated fields"
                )))
            }
        }
    }
    if first.is_empty() {
        return Err(CliError::input("labels file has no observations"));
    }
    Ok((Labeling::new(first)?, Labeling::new(second)?))
}

pub fn table_from_labels_file(bytes: &[u8]) -> Result<ContingencyTable, CliError> {
    let (first, second) = parse_labels(bytes)?;
    Ok(table_from_labels(&first, &second)?)
}

pub fn parse_counts(bytes: &[u8]) -> Result<ContingencyTable, CliError> {
    let text = decode(bytes)?;
    let mut rows = Vec::new();
    for (number, line) in data_lines(text) {
        let row = line
            .split(',')
            .map(|cell| {
                cell.trim().parse::<i64>().map_err(|_| {
                    CliError::input(format!(
                        "line {number}: {:?} is not an integer",
                        cell.trim()
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first().map(Vec::len) {
            if row.len() != first {
                return Err(CliError::input(format!(
                    "line {number}: expected {first} cells, found {}",
                    row.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::input("counts file has no rows"));
    }
    Ok(ContingencyTable::from_rows(&rows)?)
}

/// Comma-separated integers, e.g. `6,4`.
pub fn parse_marginals(flag: &str, value: &str) -> Result<Vec<i64>, CliError> {
    value
        .split(',')
        .map(|part| {
            part.trim().parse::<i64>().map_err(|_| {
                CliError::input(format!("--{flag}: {:?} is not an integer", part.trim()))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_with_header() {
        let (a, b) = parse_labels(b"# first,second\nA,P\nA,P\nB,Q\r\n").unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(b.assignments()[2], "Q");
    }

    #[test]
    fn label_tokens_are_opaque() {
        let t = table_from_labels_file(b"x, y\nx,y\n").unwrap();
        // " y" and "y" are different clusters
        assert_eq!(t.to_rows(), vec![vec![1, 1]]);
    }

    #[test]
    fn label_errors_name_the_line() {
        let err = parse_labels(b"A,P\nA\n").unwrap_err();
        assert_eq!(
            err.to_string(),
            "line 2: expected two comma-separated fields"
        );
        assert_eq!(err.exit_code(), 2);
        let err = parse_labels(b"A,P\nA,P,Q\n").unwrap_err();
        assert!(err.to_string().starts_with("line 2"));
        assert!(parse_labels(b"").is_err());
        assert!(parse_labels(b"# header only\n").is_err());
        let err = parse_labels(b"A,P\n\xff,Q\n").unwrap_err();
        assert_eq!(err.to_string(), "line 2: invalid UTF-8");
    }

    #[test]
    fn counts_file() {
        let t = parse_counts(b"# counts\n4, 2\n3,1\n").unwrap();
        assert_eq!(t.to_rows(), vec![vec![4, 2], vec![3, 1]]);
        assert!(parse_counts(b"1,2\n3\n")
            .unwrap_err()
            .to_string()
            .starts_with("line 2"));
        assert!(parse_counts(b"1,x\n").is_err());
        assert!(parse_counts(b"1,0\n0,0\n").is_err());
        assert!(parse_counts(b"").is_err());
    }

    #[test]
    fn marginal_flags() {
        assert_eq!(parse_marginals("rows", "6, 4").unwrap(), vec![6, 4]);
        assert!(parse_marginals("rows", "6,,4").is_err());
    }
}
