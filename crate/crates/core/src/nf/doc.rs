use super::{assemble, FieldElement, NumberField};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

pub(crate) const Q_JSON: &str = include_str!("../../data/q.json");
pub(crate) const QSQRT2_JSON: &str = include_str!("../../data/qsqrt2.json");

/// Ideal given by integral generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdealDoc {
    pub generators: Vec<Vec<String>>,
}

/// Field-data document. Integers and rationals are strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldDoc {
    #[serde(default)]
    pub label: String,
    pub min_poly: Vec<String>,
    pub integral_basis: Vec<Vec<String>>,
    #[serde(default)]
    pub mult_table: Option<Vec<Vec<Vec<String>>>>,
    pub discriminant: String,
    pub class_number: u64,
    pub class_reps: Vec<IdealDoc>,
    pub unit_gens: Vec<Vec<String>>,
    pub different_gen: Vec<String>,
    #[serde(default = "default_bits")]
    pub precision_bits: u32,
}

fn default_bits() -> u32 {
    128
}

fn int(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

fn rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let d = int(b)?;
            if d == BigInt::from(0) {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(int(a)?, d))
        }
        None => Ok(BigRational::from_integer(int(s)?)),
    }
}

fn elem(v: &[String]) -> Result<FieldElement> {
    Ok(FieldElement { c: v.iter().map(|s| rat(s)).collect::<Result<_>>()? })
}

impl FieldDoc {
    pub fn from_json(s: &str) -> Result<FieldDoc> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn build(&self) -> Result<NumberField> {
        let min_poly = self.min_poly.iter().map(|s| int(s)).collect::<Result<Vec<_>>>()?;
        let basis = self
            .integral_basis
            .iter()
            .map(|r| r.iter().map(|s| rat(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mult = match &self.mult_table {
            None => None,
            Some(t) => Some(
                t.iter()
                    .map(|row| {
                        row.iter()
                            .map(|v| v.iter().map(|s| rat(s)).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let reps = self
            .class_reps
            .iter()
            .map(|i| i.generators.iter().map(|g| elem(g)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let units = self.unit_gens.iter().map(|u| elem(u)).collect::<Result<Vec<_>>>()?;
        assemble(
            if self.label.is_empty() { "field".into() } else { self.label.clone() },
            min_poly,
            basis,
            mult,
            int(&self.discriminant)?,
            self.class_number,
            reps,
            units,
            elem(&self.different_gen)?,
            self.precision_bits,
        )
    }
}

/// Loads and validates a field-data document.
pub fn nf_load(json: &str) -> Result<NumberField> {
    FieldDoc::from_json(json)?.build()
}

/// The shipped fields: `Q` and `Q(sqrt2)`.
pub fn builtin_field(name: &str) -> Result<NumberField> {
    match name {
        "Q" | "q" => nf_load(Q_JSON),
        "Q(sqrt2)" | "qsqrt2" | "Q(sqrt(2))" => nf_load(QSQRT2_JSON),
        other => Err(Error::Parse(format!("unknown builtin field {other:?}"))),
    }
}
