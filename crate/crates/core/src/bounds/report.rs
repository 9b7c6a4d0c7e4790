use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use super::{bound_energy, bound_p, bound_q, BoundSettings, BoundValue};
use crate::diagnostics::Moment;
use crate::nondim::DimensionlessParams;
use crate::Result;

/// Relative distance from 1 within which a ratio counts as saturating.
const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundStatus {
    Satisfied,
    Boundary,
    Exceeded,
    NotMeasured,
    FiniteOnly,
    Open,
}

impl fmt::Display for BoundStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundStatus::Satisfied => "satisfied",
            BoundStatus::Boundary => "boundary",
            BoundStatus::Exceeded => "exceeded",
            BoundStatus::NotMeasured => "not measured",
            BoundStatus::FiniteOnly => "finite only",
            BoundStatus::Open => "open",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundRow {
    pub id: String,
    pub measured: Option<f64>,
    pub rhs: BoundValue,
    pub ratio: Option<f64>,
    pub status: BoundStatus,
}

/// Measured time averages paired with their analytic right-hand sides.
///
/// Right-hand sides use the configured constant (1 by default); the true
/// constants are unknown, so a ratio above 1 flags a large measurement
/// rather than a contradiction.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub label: String,
    /// Length of the averaging window.
    pub window: f64,
    pub params: DimensionlessParams,
    pub rows: Vec<BoundRow>,
}

/// Identifier used for a weighted-norm bound, e.g. `P(1,inf)`.
pub fn norm_id(dim: u32, n: u32, m: Moment) -> String {
    let letter = if dim == 2 { "P" } else { "Q" };
    format!("{letter}({n},{m})")
}

pub const ENERGY_IDS: [&str; 4] = ["H0", "H1", "L4", "H1/H0"];

fn row(id: String, measured: Option<f64>, rhs: BoundValue) -> BoundRow {
    let (ratio, status) = match (measured, rhs) {
        (_, BoundValue::Open) => (None, BoundStatus::Open),
        (_, BoundValue::Finite) => (None, BoundStatus::FiniteOnly),
        (None, BoundValue::Value(_)) => (None, BoundStatus::NotMeasured),
        (Some(x), BoundValue::Value(r)) => {
            let ratio = if x == 0.0 { 0.0 } else { x / r };
            let status = if (ratio - 1.0).abs() <= BOUNDARY_TOLERANCE {
                BoundStatus::Boundary
            } else if ratio < 1.0 {
                BoundStatus::Satisfied
            } else {
                BoundStatus::Exceeded
            };
            (Some(ratio), status)
        }
    };
    BoundRow {
        id,
        measured,
        rhs,
        ratio,
        status,
    }
}

/// Pairs every available bound with the measurement of the same id.
///
/// Energy ids are `H0`, `H1`, `L4`, `H1/H0`; weighted norms use
/// [`norm_id`]. Bounds without a measurement are kept as "not measured".
#[allow(clippy::too_many_arguments)]
pub fn compare(
    label: &str,
    dim: u32,
    window: f64,
    measured: &BTreeMap<String, f64>,
    params: &DimensionlessParams,
    settings: &BoundSettings,
    n_max: u32,
    moments: &[Moment],
) -> BoundReport {
    let e = bound_energy(params, settings);
    let mut rows: Vec<BoundRow> = ENERGY_IDS
        .iter()
        .zip([e.h0, e.h1, e.quartic, e.h1_over_h0])
        .map(|(id, rhs)| {
            row(
                id.to_string(),
                measured.get(*id).copied(),
                BoundValue::Value(rhs),
            )
        })
        .collect();
    for n in 0..=n_max {
        for &m in moments {
            let rhs = if dim == 2 {
                bound_p(n, m, params, settings).map(BoundValue::Value)
            } else {
                bound_q(n, m, params, settings)
            };
            if let Ok(rhs) = rhs {
                let id = norm_id(dim, n, m);
                let x = measured.get(&id).copied();
                rows.push(row(id, x, rhs));
            }
        }
    }
    BoundReport {
        label: label.to_string(),
        window,
        params: *params,
        rows,
    }
}

impl BoundReport {
    pub fn row(&self, id: &str) -> Option<&BoundRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_reports(std::slice::from_ref(self), out)
    }
}

pub const REPORT_COLUMNS: [&str; 11] = [
    "label", "bound", "measured", "rhs", "ratio", "status", "window", "alpha0", "re_nu", "re_beta",
    "activity",
];

/// Writes several reports as one CSV table with a single header row.
pub fn write_reports<W: Write>(reports: &[BoundReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_COLUMNS)?;
    let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
    for report in reports {
        let p = &report.params;
        for r in &report.rows {
            w.write_record([
                report.label.clone(),
                r.id.clone(),
                opt(r.measured),
                match r.rhs {
                    BoundValue::Value(v) => format!("{v:e}"),
                    other => other.to_string(),
                },
                opt(r.ratio),
                r.status.to_string(),
                format!("{:e}", report.window),
                format!("{:e}", p.alpha0),
                format!("{:e}", p.re_nu),
                format!("{:e}", p.re_beta),
                format!("{:e}", p.activity),
            ])?;
        }
    }
    w.flush().map_err(|e| crate::Error::io("<csv>", e))?;
    Ok(())
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(
            f,
            "{}: alpha0 = {:.4e}, Re_nu = {:.4e}, Re_beta = {:.4e}, A0 = {:.4e}, window T = {:.4e}",
            self.label, p.alpha0, p.re_nu, p.re_beta, p.activity, self.window
        )?;
        writeln!(
            f,
            "{:<12} {:>14} {:>14} {:>12}  status",
            "bound", "measured", "rhs", "ratio"
        )?;
        for r in &self.rows {
            let m = r.measured.map_or("-".into(), |x| format!("{x:.6e}"));
            let ratio = r.ratio.map_or("-".into(), |x| format!("{x:.4e}"));
            writeln!(
                f,
                "{:<12} {:>14} {:>14} {:>12}  {}",
                r.id,
                m,
                r.rhs.to_string(),
                ratio,
                r.status
            )?;
        }
        write!(
            f,
            "constants set to the configured value; ratios above 1 do not contradict the estimates"
        )
    }
}
