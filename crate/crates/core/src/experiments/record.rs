use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// One measured value. `experiment` names the series (for example `prop13_amalgam`),
/// `index` is `j`, `N`, `ℓ` or the trial number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub family: String,
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub index: f64,
    pub value: f64,
    pub predicted_exponent: f64,
    pub seed: u64,
}

/// Writes `# schema_version=1` followed by a CSV table with a header row.
pub fn write_records<W: Write>(records: &[ExperimentRecord], mut w: W) -> Result<()> {
    writeln!(w, "# schema_version={SCHEMA_VERSION}")?;
    let mut csv = csv::Writer::from_writer(w);
    for r in records {
        csv.serialize(r)?;
    }
    if records.is_empty() {
        csv.write_record(["experiment", "family", "n", "p", "q", "index", "value", "predicted_exponent", "seed"])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_records<R: BufRead>(mut r: R) -> Result<Vec<ExperimentRecord>> {
    let mut first = String::new();
    r.read_line(&mut first)?;
    let version = first
        .trim()
        .strip_prefix("# schema_version=")
        .and_then(|v| v.parse::<u32>().ok())
        .ok_or_else(|| Error::Parse("missing schema_version line".into()))?;
    if version != SCHEMA_VERSION {
        return Err(Error::Parse(format!("schema version {version}, expected {SCHEMA_VERSION}")));
    }
    let mut csv = csv::Reader::from_reader(r);
    Ok(csv.deserialize().collect::<std::result::Result<Vec<_>, _>>()?)
}
