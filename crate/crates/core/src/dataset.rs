//! Labeled and unlabeled point sets, plus the CSV layout shared by the CLI:
//! header `x1,...,xd,y`, with an empty `y` marking an unlabeled row.

use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Pos => 1.0,
            Label::Neg => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Label::Pos => Label::Neg,
            Label::Neg => Label::Pos,
        }
    }

    pub fn from_sign(s: f64) -> Result<Self> {
        if s == 1.0 {
            Ok(Label::Pos)
        } else if s == -1.0 {
            Ok(Label::Neg)
        } else {
            Err(Error::invalid(format!("label must be -1 or 1, got {s}")))
        }
    }
}

impl TryFrom<i8> for Label {
    type Error = Error;
    fn try_from(v: i8) -> Result<Self> {
        Label::from_sign(v as f64)
    }
}

impl From<Label> for i8 {
    fn from(l: Label) -> i8 {
        l.sign() as i8
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct UnlabeledDataset {
    pub points: Vec<Vec<f64>>,
}

fn check_dims(points: &[Vec<f64>]) -> Result<()> {
    if let Some(first) = points.first() {
        if first.is_empty() {
            return Err(Error::invalid("points must have dimension >= 1"));
        }
        if let Some(p) = points.iter().find(|p| p.len() != first.len()) {
            return Err(Error::DimensionMismatch {
                expected: first.len(),
                got: p.len(),
            });
        }
    }
    Ok(())
}

impl LabeledDataset {
    pub fn new(points: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::invalid(format!(
                "{} points but {} labels",
                points.len(),
                labels.len()
            )));
        }
        check_dims(&points)?;
        Ok(Self { points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.points.first().map(Vec::len)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], Label)> {
        self.points.iter().map(Vec::as_slice).zip(self.labels.iter().copied())
    }

    pub fn has_both_labels(&self) -> bool {
        self.labels.contains(&Label::Pos) && self.labels.contains(&Label::Neg)
    }

    pub fn with_flipped_labels(&self) -> Self {
        Self {
            points: self.points.clone(),
            labels: self.labels.iter().map(|l| l.flipped()).collect(),
        }
    }

    pub fn push(&mut self, x: Vec<f64>, y: Label) {
        self.points.push(x);
        self.labels.push(y);
    }
}

impl UnlabeledDataset {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        check_dims(&points)?;
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.points.first().map(Vec::len)
    }
}

/// Reads a dataset CSV, splitting rows into labeled and unlabeled sets.
pub fn read_csv(path: impl AsRef<Path>) -> Result<(LabeledDataset, UnlabeledDataset)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_csv_from(file, &path.display().to_string())
}

pub fn read_csv_from<R: std::io::Read>(
    reader: R,
    name: &str,
) -> Result<(LabeledDataset, UnlabeledDataset)> {
    let fmt = |message: String| Error::Format {
        path: name.to_string(),
        message,
    };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(|e| fmt(e.to_string()))?.clone();
    let d = header.len().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| {
        fmt("header needs at least one feature column and a trailing y column".into())
    })?;
    if &header[d] != "y" {
        return Err(fmt(format!("last column must be `y`, found `{}`", &header[d])));
    }

    let mut labeled = LabeledDataset::default();
    let mut unlabeled = UnlabeledDataset::default();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| fmt(e.to_string()))?;
        let line = row + 2;
        if rec.len() != d + 1 {
            return Err(fmt(format!("line {line}: expected {} fields, got {}", d + 1, rec.len())));
        }
        let x = (0..d)
            .map(|i| {
                rec[i]
                    .parse::<f64>()
                    .map_err(|e| fmt(format!("line {line}, column {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        match &rec[d] {
            "" => unlabeled.points.push(x),
            y => {
                let s: f64 = y
                    .parse()
                    .map_err(|e| fmt(format!("line {line}: bad label `{y}`: {e}")))?;
                let label = Label::from_sign(s).map_err(|e| fmt(format!("line {line}: {e}")))?;
                labeled.push(x, label);
            }
        }
    }
    Ok((labeled, unlabeled))
}

/// Writes labeled rows first, then unlabeled rows with an empty `y`.
pub fn write_csv(
    path: impl AsRef<Path>,
    labeled: &LabeledDataset,
    unlabeled: &UnlabeledDataset,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    write_csv_to(file, labeled, unlabeled).map_err(|e| match e {
        Error::Format { message, .. } => Error::Format {
            path: path.display().to_string(),
            message,
        },
        other => other,
    })
}

pub fn write_csv_to<W: std::io::Write>(
    writer: W,
    labeled: &LabeledDataset,
    unlabeled: &UnlabeledDataset,
) -> Result<()> {
    let d = labeled
        .dim()
        .or(unlabeled.dim())
        .ok_or(Error::EmptyDataset("nothing to write"))?;
    if unlabeled.dim().is_some_and(|u| u != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: unlabeled.dim().unwrap_or(0),
        });
    }
    let fmt = |e: csv::Error| Error::Format {
        path: "<csv>".into(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    header.push("y".into());
    w.write_record(&header).map_err(fmt)?;
    for (x, y) in labeled.iter() {
        let mut row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        row.push(i8::from(y).to_string());
        w.write_record(&row).map_err(fmt)?;
    }
    for x in &unlabeled.points {
        let mut row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        row.push(String::new());
        w.write_record(&row).map_err(fmt)?;
    }
    w.flush().map_err(|e| fmt(e.into()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let labeled = LabeledDataset::new(
            vec![vec![0.5, -1.25], vec![2.0, 3.0]],
            vec![Label::Pos, Label::Neg],
        )
        .unwrap();
        let unlabeled = UnlabeledDataset::new(vec![vec![0.1, 0.2]]).unwrap();
        let mut buf = Vec::new();
        write_csv_to(&mut buf, &labeled, &unlabeled).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x1,x2,y\n0.5,-1.25,1\n"));
        let (l, u) = read_csv_from(buf.as_slice(), "mem").unwrap();
        assert_eq!(l, labeled);
        assert_eq!(u, unlabeled);
    }

    #[test]
    fn bad_labels_and_headers_rejected() {
        assert!(read_csv_from("x1,y\n1.0,2\n".as_bytes(), "t").is_err());
        assert!(read_csv_from("x1,label\n1.0,1\n".as_bytes(), "t").is_err());
        assert!(read_csv_from("x1,x2,y\n1.0,1\n".as_bytes(), "t").is_err());
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        assert!(LabeledDataset::new(vec![vec![1.0], vec![1.0, 2.0]], vec![Label::Pos; 2]).is_err());
        assert!(LabeledDataset::new(vec![vec![1.0]], vec![]).is_err());
    }
}
