//! On-disk and on-screen representations.
//!
//! Causal sets are stored as `{"n": N, "relations": [[a, b], ...]}` with 0-based
//! indices. The relations may be covers or the full order; the closure is taken on
//! load either way.

use std::io::{Read, Write};

use dalembert_core::causet::CausalSet;
use dalembert_core::coefficients::{compute_c, compute_scaled_c, layer_count};
use dalembert_core::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalSetFile {
    pub n: usize,
    pub relations: Vec<[usize; 2]>,
}

impl CausalSetFile {
    /// Every relation of the order, in row-major order.
    pub fn from_causal_set(set: &CausalSet) -> Self {
        CausalSetFile {
            n: set.len(),
            relations: set.relations().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_causal_set(&self) -> Result<CausalSet> {
        let pairs: Vec<(usize, usize)> = self.relations.iter().map(|&[a, b]| (a, b)).collect();
        Ok(CausalSet::from_relations(self.n, &pairs)?)
    }
}

pub fn parse_causal_set(text: &str) -> Result<CausalSet> {
    serde_json::from_str::<CausalSetFile>(text)?.to_causal_set()
}

pub fn read_causal_set(reader: impl Read) -> Result<CausalSet> {
    serde_json::from_reader::<_, CausalSetFile>(reader)?.to_causal_set()
}

pub fn causal_set_to_json(set: &CausalSet) -> String {
    serde_json::to_string(&CausalSetFile::from_causal_set(set)).expect("plain data serializes")
}

pub(crate) fn to_i128(value: &BigInt) -> Result<i128> {
    i128::try_from(value)
        .map_err(|_| CliError::Usage(format!("value {value} does not fit in 128 bits")))
}

/// One coefficient `C_i^(d) = num/den` with its scaled integer form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRow {
    pub d: u32,
    pub i: u32,
    pub num: i128,
    pub den: i128,
    pub scaled: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub dimension: u32,
    pub rows: Vec<CoeffRow>,
}

impl CoefficientTable {
    pub fn new(d: u32) -> Result<Self> {
        let rows = (1..=layer_count(d.max(2)))
            .map(|i| {
                let c = compute_c(d, i)?;
                Ok(CoeffRow {
                    d,
                    i,
                    num: to_i128(c.numer())?,
                    den: to_i128(c.denom())?,
                    scaled: to_i128(&compute_scaled_c(d, i)?)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CoefficientTable { dimension: d, rows })
    }
}

/// Writes `rows` as CSV with a header taken from the field names.
pub fn write_csv<S: Serialize>(rows: &[S], out: impl Write) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Pretty JSON followed by a newline.
pub fn write_json<S: Serialize>(value: &S, mut out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}
