use std::io::Read;

use nalgebra::{DMatrix, DVector};

use super::RawData;
use crate::error::{Error, Result};

/// Which column of a CSV file holds the response.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ResponseColumn {
    #[default]
    Last,
    Named(String),
}

/// Parsed numeric data plus the predictor names (generated as `x1..xp`
/// when the file has no header).
#[derive(Debug, Clone)]
pub struct CsvData {
    pub raw: RawData,
    pub names: Vec<String>,
    pub response_name: String,
}

/// Read a dense comma-delimited numeric table. A header row is detected
/// when any field of the first record fails to parse as a number.
pub fn read_csv<R: Read>(reader: R, response: &ResponseColumn) -> Result<CsvData> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);

    let mut header: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;

    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            reason: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(idx as u64 + 1);
        if idx == 0 && rec.iter().any(|f| f.parse::<f64>().is_err()) {
            header = Some(rec.iter().map(str::to_string).collect());
            width = Some(rec.len());
            continue;
        }
        if let Some(w) = width {
            if rec.len() != w {
                return Err(Error::Parse {
                    line,
                    reason: format!("expected {w} fields, found {}", rec.len()),
                });
            }
        } else {
            width = Some(rec.len());
        }
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Parse {
                        line,
                        reason: format!("`{f}` is not a finite number"),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }

    let width = width.ok_or(Error::Parse {
        line: 0,
        reason: "empty input".into(),
    })?;
    if width < 2 {
        return Err(Error::Parse {
            line: 1,
            reason: "need a response column and at least one predictor".into(),
        });
    }
    let names = header.unwrap_or_else(|| {
        (1..width)
            .map(|j| format!("x{j}"))
            .chain(std::iter::once("y".to_string()))
            .collect()
    });
    let resp_idx = match response {
        ResponseColumn::Last => width - 1,
        ResponseColumn::Named(name) => {
            names
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Parse {
                    line: 1,
                    reason: format!("response column `{name}` not found"),
                })?
        }
    };

    let n = rows.len();
    let p = width - 1;
    let y = DVector::from_iterator(n, rows.iter().map(|r| r[resp_idx]));
    let x = DMatrix::from_fn(n, p, |i, j| {
        let col = if j >= resp_idx { j + 1 } else { j };
        rows[i][col]
    });
    let predictor_names = names
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != resp_idx)
        .map(|(_, s)| s.clone())
        .collect();
    Ok(CsvData {
        raw: RawData::new(y, x)?,
        names: predictor_names,
        response_name: names[resp_idx].clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_named_response() {
        let src = "y,a,b\n1,2,3\n4,5,6\n7,8,10\n";
        let d = read_csv(src.as_bytes(), &ResponseColumn::Named("y".into())).unwrap();
        assert_eq!(d.names, vec!["a", "b"]);
        assert_eq!(d.raw.y().as_slice(), &[1.0, 4.0, 7.0]);
        assert_eq!(d.raw.x()[(2, 1)], 10.0);
    }

    #[test]
    fn headerless_uses_last_column() {
        let d = read_csv("1,2,3\n4,5,6\n".as_bytes(), &ResponseColumn::Last).unwrap();
        assert_eq!(d.names, vec!["x1", "x2"]);
        assert_eq!(d.raw.y().as_slice(), &[3.0, 6.0]);
    }

    #[test]
    fn malformed_value_reports_line() {
        let err = read_csv("a,b\n1,2\n3,oops\n".as_bytes(), &ResponseColumn::Last).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ragged_row_reports_line() {
        let err = read_csv("1,2\n3,4,5\n".as_bytes(), &ResponseColumn::Last).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
