//! OEIS b-files: parsing, canonical serialization and cross-checks.
//!
//! A b-file is plain text with one `index value` pair per line. Lines
//! starting with `#` are comments and blank lines are ignored. Comments are
//! not preserved by [`BFile::to_bfile_string`].

use std::io::BufRead;
use std::path::Path;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::identities::ConvolutionValue;
use crate::sequences::TermVector;
use crate::verify::{CheckRecord, RecordBuilder};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    pub sequence_id: String,
    pub entries: Vec<(i64, BigInt)>,
    pub source_path: String,
}

impl BFile {
    pub fn first_index(&self) -> Option<i64> {
        self.entries.first().map(|e| e.0)
    }

    pub fn to_bfile_string(&self) -> String {
        let mut out = String::new();
        for (i, v) in &self.entries {
            out.push_str(&format!("{i} {v}\n"));
        }
        out
    }
}

/// Parse b-file text. Indices must be strictly increasing and contiguous.
pub fn parse_bfile(reader: impl BufRead, sequence_id: &str, source_path: &str) -> Result<BFile> {
    let mut entries: Vec<(i64, BigInt)> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let malformed = || Error::MalformedLine {
            line: lineno,
            text: line.clone(),
        };
        let mut fields = text.split_whitespace();
        let (Some(idx), Some(val), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(malformed());
        };
        let index: i64 = idx.parse().map_err(|_| malformed())?;
        let value: BigInt = val.parse().map_err(|_| malformed())?;
        if let Some(previous) = entries.last().map(|e| e.0) {
            if index <= previous {
                return Err(Error::NonMonotonic {
                    line: lineno,
                    index,
                    previous,
                });
            }
            if index != previous + 1 {
                return Err(Error::NonContiguous {
                    line: lineno,
                    index,
                    previous,
                });
            }
        }
        entries.push((index, value));
    }
    Ok(BFile {
        sequence_id: sequence_id.to_string(),
        entries,
        source_path: source_path.to_string(),
    })
}

/// Load `fixtures/<Axxxxxx>.txt`; the file stem becomes the sequence id.
pub fn load_bfile(path: impl AsRef<Path>) -> Result<BFile> {
    let path = path.as_ref();
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let file = std::fs::File::open(path)?;
    parse_bfile(
        std::io::BufReader::new(file),
        &id,
        &path.display().to_string(),
    )
}

impl From<&[ConvolutionValue]> for TermVector {
    fn from(values: &[ConvolutionValue]) -> Self {
        let start = values.first().map_or(0, |c| c.n);
        TermVector::new(start, values.iter().map(|c| c.value.clone()).collect())
    }
}

/// Compare b-file entry `i` with computed index `i + offset` over the
/// overlap of the two ranges.
pub fn cross_check(bfile: &BFile, computed: &TermVector, offset: i64) -> Result<CheckRecord> {
    let mut rec = RecordBuilder::new("oeis")
        .param("sequence", &bfile.sequence_id)
        .param("offset", offset);
    let mut mismatches = Vec::new();
    for (i, expected) in &bfile.entries {
        let Ok(actual) = computed.get(i + offset) else {
            continue;
        };
        if actual != expected {
            mismatches.push(*i);
        }
        rec.cell(
            actual == expected,
            &[("index", i.to_string())],
            expected,
            actual,
        );
    }
    if rec.cells == 0 {
        return Err(Error::EmptyOverlap);
    }
    if !mismatches.is_empty() {
        let shown: Vec<String> = mismatches.iter().take(10).map(i64::to_string).collect();
        rec = rec
            .param("mismatches", mismatches.len())
            .param("mismatch_indices", shown.join(","));
    }
    Ok(rec.finish())
}
