use std::io::Read;
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};
use crate::numkit::Matrix;

/// Location of the label column in a CSV file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelColumn {
    Index(usize),
    /// Header name; needs `has_header`.
    Name(String),
    Last,
}

/// Reads a comma-separated file whose non-label cells are all numeric.
/// Labels are mapped to `0..c` in order of first appearance.
pub fn load_csv(path: impl AsRef<Path>, label: &LabelColumn, has_header: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    let file = std::fs::File::open(path).map_err(|e| Error::ingest(path.display(), e))?;
    parse_csv(file, &id, label, has_header)
}

pub fn parse_csv<R: Read>(reader: R, id: &str, label: &LabelColumn, has_header: bool) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let header: Option<Vec<String>> = if has_header {
        Some(
            rdr.headers()
                .map_err(|e| Error::ingest(id, e))?
                .iter()
                .map(str::to_string)
                .collect(),
        )
    } else {
        None
    };

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    let mut label_names: Vec<String> = Vec::new();
    let mut width = header.as_ref().map(Vec::len);
    let mut label_idx: Option<usize> = None;

    for (rec_no, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::ingest(id, e))?;
        let line = record
            .position()
            .map_or(rec_no + 1 + usize::from(has_header), |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let w = *width.get_or_insert(record.len());
        if record.len() != w {
            return Err(Error::ingest(
                id,
                format!("row {line}: expected {w} cells, found {}", record.len()),
            ));
        }
        let li = match label_idx {
            Some(li) => li,
            None => {
                let li = resolve_label(label, header.as_deref(), w, id)?;
                label_idx = Some(li);
                li
            }
        };
        let mut features = Vec::with_capacity(w - 1);
        for (col, cell) in record.iter().enumerate() {
            if col == li {
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| {
                Error::ingest(
                    id,
                    format!("row {line}, column {}: cannot parse '{cell}' as a number", col + 1),
                )
            })?;
            features.push(v);
        }
        let text = &record[li];
        if text.is_empty() {
            return Err(Error::ingest(id, format!("row {line}: missing label")));
        }
        let class = match label_names.iter().position(|n| n == text) {
            Some(c) => c,
            None => {
                label_names.push(text.to_string());
                label_names.len() - 1
            }
        };
        labels.push(class);
        rows.push(features);
    }

    if rows.is_empty() {
        return Err(Error::ingest(id, "no data rows"));
    }
    let li = label_idx.expect("set with first row");
    let feature_names = match header {
        Some(h) => h
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i != li)
            .map(|(_, n)| n)
            .collect(),
        None => (0..rows[0].len()).map(|i| format!("x{i}")).collect(),
    };
    if rows[0].is_empty() {
        return Err(Error::ingest(id, "no feature columns"));
    }
    let x = Matrix::from_rows(&rows)?;
    let n_classes = label_names.len();
    Dataset::new(id, x, labels, n_classes, feature_names, label_names)
}

/// Reads an unlabeled feature table for scoring. A first row with any
/// non-numeric cell is taken as a header. `drop` names a column to ignore,
/// such as a label column left in the file.
pub fn parse_features<R: Read>(reader: R, id: &str, drop: Option<&LabelColumn>) -> Result<Matrix<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::ingest(id, e))?;
        if !record.iter().all(str::is_empty) {
            records.push(record);
        }
    }
    let Some(first) = records.first() else {
        return Err(Error::ingest(id, "no data rows"));
    };
    let has_header = first.iter().any(|c| c.parse::<f64>().is_err());
    let header: Option<Vec<String>> = has_header.then(|| first.iter().map(str::to_string).collect());
    let skip = match drop {
        Some(label) => Some(resolve_label(label, header.as_deref(), first.len(), id)?),
        None => None,
    };
    let mut rows = Vec::with_capacity(records.len());
    for (i, record) in records.iter().enumerate().skip(usize::from(has_header)) {
        let row = record
            .iter()
            .enumerate()
            .filter(|(col, _)| Some(*col) != skip)
            .map(|(col, cell)| {
                cell.parse::<f64>().map_err(|_| {
                    Error::ingest(
                        id,
                        format!("row {}, column {}: cannot parse '{cell}' as a number", i + 1, col + 1),
                    )
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::ingest(id, "no feature values"));
    }
    Matrix::from_rows(&rows).map_err(|e| Error::ingest(id, e))
}

pub fn load_features(path: impl AsRef<Path>, drop: Option<&LabelColumn>) -> Result<Matrix<f64>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::ingest(path.display(), e))?;
    parse_features(file, &path.display().to_string(), drop)
}

fn resolve_label(label: &LabelColumn, header: Option<&[String]>, width: usize, id: &str) -> Result<usize> {
    let idx = match label {
        LabelColumn::Last => width.checked_sub(1),
        LabelColumn::Index(i) => Some(*i),
        LabelColumn::Name(name) => {
            let header =
                header.ok_or_else(|| Error::ingest(id, "label column given by name but file has no header"))?;
            header.iter().position(|h| h == name)
        }
    };
    match idx {
        Some(i) if i < width => Ok(i),
        _ => Err(Error::ingest(id, format!("label column {label:?} not present"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_header_and_maps_labels() {
        let text = "a,b,kind\n1,2,x\n3,4,y\n5,6,x\n";
        let ds = parse_csv(text.as_bytes(), "t", &LabelColumn::Name("kind".into()), true).unwrap();
        assert_eq!(ds.y, vec![0, 1, 0]);
        assert_eq!(ds.label_names, vec!["x", "y"]);
        assert_eq!(ds.feature_names, vec!["a", "b"]);
        assert_eq!(ds.x.row(2), &[5.0, 6.0]);
    }

    #[test]
    fn label_in_first_column_without_header() {
        let ds = parse_csv("b,1.5,2\na,0.5,1\n".as_bytes(), "t", &LabelColumn::Index(0), false).unwrap();
        assert_eq!(ds.label_names, vec!["b", "a"]);
        assert_eq!(ds.x.row(1), &[0.5, 1.0]);
        assert_eq!(ds.feature_names, vec!["x0", "x1"]);
    }

    #[test]
    fn text_in_feature_cell_names_the_cell() {
        let err = parse_csv("a,b,c\n1,2,x\n1,oops,y\n".as_bytes(), "t", &LabelColumn::Last, true).unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("row 3") && msg.contains("column 2") && msg.contains("oops"),
            "{msg}"
        );
    }

    #[test]
    fn feature_table_with_optional_header_and_dropped_column() {
        let x = parse_features("1,2\n3,4\n".as_bytes(), "t", None).unwrap();
        assert_eq!(x.shape(), (2, 2));
        let x = parse_features(
            "a,kind,b\n1,x,2\n3,y,4\n".as_bytes(),
            "t",
            Some(&LabelColumn::Name("kind".into())),
        )
        .unwrap();
        assert_eq!(x.row(1), &[3.0, 4.0]);
        assert!(parse_features("a,b\n1,z\n".as_bytes(), "t", None).is_err());
        assert!(parse_features("a,b\n1,2,3\n".as_bytes(), "t", None).is_err());
    }

    #[test]
    fn missing_label_is_an_error() {
        assert!(parse_csv("1,2,\n".as_bytes(), "t", &LabelColumn::Last, false).is_err());
        assert!(parse_csv("a,b\n1,2\n".as_bytes(), "t", &LabelColumn::Name("z".into()), true).is_err());
        assert!(parse_csv("1,2\n".as_bytes(), "t", &LabelColumn::Index(5), false).is_err());
    }
}
