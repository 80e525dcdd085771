//! Output records and their CSV, JSON and human-readable renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lattice::LatticeValue;

/// Significant digits of every number written for machines.
pub const SIGNIFICANT_DIGITS: usize = 15;
const HUMAN_DIGITS: usize = 6;

/// Header of every record table.
pub const CSV_HEADER: &str = "quantity,d,eta,spin,value,error_estimate,terms_or_evals,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "ok")]
    Ok,
    #[serde(rename = "divergent")]
    Divergent,
    #[serde(rename = "zero_Tc")]
    ZeroTc,
    #[serde(rename = "not_converged")]
    NotConverged,
}

impl Status {
    pub fn token(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Divergent => "divergent",
            Status::ZeroTc => "zero_Tc",
            Status::NotConverged => "not_converged",
        }
    }

    /// Whether a single evaluation with this status exits with a numerical failure.
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Divergent | Status::NotConverged)
    }
}

/// One evaluated quantity together with the inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    /// Lattice family name, or the physical observable.
    pub quantity: String,
    pub d: f64,
    pub eta: f64,
    pub spin: Option<f64>,
    /// Absent unless `status` is `ok`.
    pub value: Option<f64>,
    /// Tail bound of a series, or error estimate of a quadrature.
    pub error_estimate: Option<f64>,
    pub terms_or_evals: Option<u64>,
    pub status: Status,
}

/// Rounds to [`SIGNIFICANT_DIGITS`]; non-finite values become `None`.
pub fn round_significant(x: f64) -> Option<f64> {
    if !x.is_finite() {
        return None;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().ok()
}

fn round_input(x: f64) -> f64 {
    round_significant(x).unwrap_or(x)
}

impl OutputRecord {
    pub fn new(quantity: impl Into<String>, d: f64, eta: f64, spin: Option<f64>) -> Self {
        Self {
            quantity: quantity.into(),
            d: round_input(d),
            eta: round_input(eta),
            spin: spin.map(round_input),
            value: None,
            error_estimate: None,
            terms_or_evals: None,
            status: Status::NotConverged,
        }
    }

    pub fn with_value(mut self, value: f64, error_estimate: Option<f64>, work: Option<u64>) -> Self {
        self.value = round_significant(value);
        self.error_estimate = error_estimate.and_then(round_significant);
        self.terms_or_evals = work;
        self.status = if self.value.is_some() { Status::Ok } else { Status::NotConverged };
        self
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        if status != Status::Ok {
            self.value = None;
        }
        self
    }

    pub fn from_lattice(self, value: LatticeValue) -> Self {
        self.with_value(value.value, Some(value.error_bound), Some(value.work))
    }

    /// Folds a numerical failure into the record; input errors are handed back.
    pub fn from_error(self, error: Error) -> Result<Self, Error> {
        match error {
            Error::DivergentSeries => Ok(self.with_status(Status::Divergent)),
            Error::NotConverged { partial } => {
                let mut r = self.with_status(Status::NotConverged);
                r.error_estimate = round_significant(partial.tail_bound);
                r.terms_or_evals = Some(partial.terms_used);
                Ok(r)
            }
            Error::QuadratureNotConverged { estimate, .. } => {
                let mut r = self.with_status(Status::NotConverged);
                r.error_estimate = round_significant(estimate);
                Ok(r)
            }
            other => Err(other),
        }
    }

    pub fn csv_row(&self) -> String {
        let mut row = String::new();
        let _ = write!(
            row,
            "{},{},{},{},{},{},{},{}",
            self.quantity,
            machine_number(self.d),
            machine_number(self.eta),
            self.spin.map(machine_number).unwrap_or_default(),
            self.value.map(machine_number).unwrap_or_default(),
            self.error_estimate.map(machine_number).unwrap_or_default(),
            self.terms_or_evals.map(|n| n.to_string()).unwrap_or_default(),
            self.status.token(),
        );
        row
    }

    pub fn text_line(&self) -> String {
        let mut line = format!("{}(d={}, eta={}", self.quantity, human_number(self.d), human_number(self.eta));
        if let Some(s) = self.spin {
            let _ = write!(line, ", S={}", human_number(s));
        }
        line.push(')');
        match self.value {
            Some(v) => {
                let _ = write!(line, " = {}", human_number(v));
            }
            None => line.push_str(" = -"),
        }
        if let Some(e) = self.error_estimate {
            let _ = write!(line, "  +/- {e:.1e}");
        }
        if let Some(n) = self.terms_or_evals {
            let _ = write!(line, "  [{n}]");
        }
        let _ = write!(line, "  {}", self.status.token());
        line
    }
}

/// Scientific notation with [`SIGNIFICANT_DIGITS`] digits.
pub fn machine_number(x: f64) -> String {
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
}

/// Six significant digits, fixed notation where it stays readable.
pub fn human_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-4..6).contains(&magnitude) {
        let decimals = (HUMAN_DIGITS as i32 - 1 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{:.*e}", HUMAN_DIGITS - 1, x)
    }
}

pub fn render_csv(records: &[OutputRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn render_json(records: &[OutputRecord]) -> String {
    let mut out = match records {
        [single] => serde_json::to_string_pretty(single),
        _ => serde_json::to_string_pretty(records),
    }
    .expect("records serialize");
    out.push('\n');
    out
}

pub fn render_text(records: &[OutputRecord]) -> String {
    records.iter().map(|r| r.text_line() + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> OutputRecord {
        OutputRecord::new("I", 2.0, 1.0, None).with_value(1.3932039296856769, Some(2.5e-11), Some(4321))
    }

    #[test]
    fn csv_row_layout() {
        let row = sample().csv_row();
        assert_eq!(row, "I,2.00000000000000e0,1.00000000000000e0,,1.39320392968568e0,2.50000000000000e-11,4321,ok");
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
    }

    #[test]
    fn non_ok_records_carry_no_value() {
        let r = sample().with_status(Status::Divergent);
        assert_eq!(r.value, None);
        let json = serde_json::to_value(&r).unwrap();
        assert!(json["value"].is_null());
        assert_eq!(json["status"], "divergent");
        assert_eq!(serde_json::to_value(Status::ZeroTc).unwrap(), "zero_Tc");
    }

    #[test]
    fn errors_fold_into_status() {
        let r = OutputRecord::new("J", 2.0, 1.0, None).from_error(Error::DivergentSeries).unwrap();
        assert_eq!(r.status, Status::Divergent);
        assert!(OutputRecord::new("J", 2.0, 1.0, None).from_error(Error::SingularInput).is_err());
    }

    #[test]
    fn human_rounding() {
        assert_eq!(human_number(1.3932039296856769), "1.39320");
        assert_eq!(human_number(16.7467), "16.7467");
        assert_eq!(human_number(3.0224e-5), "3.02240e-5");
        assert_eq!(human_number(0.0), "0");
    }

    #[test]
    fn rounding_keeps_fifteen_digits() {
        let x = round_significant(std::f64::consts::PI).unwrap();
        assert_eq!(x.to_string(), "3.14159265358979");
        assert_eq!(round_significant(f64::INFINITY), None);
    }

    proptest! {
        #[test]
        fn json_round_trip_is_lossless(v in -1e300f64..1e300, e in 0.0f64..1.0, n in 0u64..u64::MAX, d in 1.0f64..50.0) {
            let r = OutputRecord::new("Itilde", d, 1.5, Some(2.5)).with_value(v, Some(e), Some(n));
            let back: OutputRecord = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
            prop_assert_eq!(&back, &r);
            let again: OutputRecord = serde_json::from_str(&render_json(std::slice::from_ref(&r))).unwrap();
            prop_assert_eq!(again, r);
        }
    }
}
