use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use ulc_core::ExactRational;

use crate::error::CliError;
use crate::sweep::{Axis, RowVerdict, SweepReport};

/// Verdict codes on a two-parameter grid: rows follow the first swept
/// parameter, columns the second. Cells absent from the grid are `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionMap {
    pub check: String,
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub x_values: Vec<ExactRational>,
    pub y_values: Vec<ExactRational>,
    pub cells: Vec<Vec<Option<char>>>,
    pub counts: BTreeMap<char, usize>,
}

impl RegionMap {
    pub fn from_report(report: &SweepReport) -> Result<Self, CliError> {
        let spec = &report.metadata.spec;
        let axes = spec.axes();
        if axes.len() != 2 {
            return Err(CliError::Usage(format!(
                "a region map needs exactly two swept parameters, got {}",
                axes.len()
            )));
        }
        if spec.checks.len() != 1 {
            return Err(CliError::Usage("a region map takes exactly one check".into()));
        }
        let mut xs: Vec<ExactRational> = report.rows.iter().map(|r| r.point[0].1.clone()).collect();
        let mut ys: Vec<ExactRational> = report.rows.iter().map(|r| r.point[1].1.clone()).collect();
        for v in [&mut xs, &mut ys] {
            v.sort();
            v.dedup();
        }
        let mut cells = vec![vec![None; ys.len()]; xs.len()];
        let mut counts: BTreeMap<char, usize> = ['C', 'R', 'I', '-'].into_iter().map(|c| (c, 0)).collect();
        for row in &report.rows {
            let i = xs.binary_search(&row.point[0].1).expect("value from rows");
            let j = ys.binary_search(&row.point[1].1).expect("value from rows");
            cells[i][j] = Some(row.verdict.code());
            *counts.entry(row.verdict.code()).or_default() += 1;
        }
        Ok(Self {
            check: spec.checks[0].as_str().to_string(),
            x_axis: axes[0],
            y_axis: axes[1],
            x_values: xs,
            y_values: ys,
            cells,
            counts,
        })
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let corner = format!("{}\\{}", self.x_axis.as_str(), self.y_axis.as_str());
        let mut header = vec![corner];
        header.extend(self.y_values.iter().map(ExactRational::to_string));
        let csv_err = |e: csv::Error| CliError::Compute(e.to_string());
        w.write_record(&header).map_err(csv_err)?;
        for (x, row) in self.x_values.iter().zip(&self.cells) {
            let mut rec = vec![x.to_string()];
            rec.extend(row.iter().map(|c| c.map(String::from).unwrap_or_default()));
            w.write_record(&rec).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Compute(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map serializes")
    }

    pub fn summary(&self) -> String {
        format!(
            "{}x{} map of {}: {} C, {} R, {} I, {} -",
            self.x_values.len(),
            self.y_values.len(),
            self.check,
            self.counts[&'C'],
            self.counts[&'R'],
            self.counts[&'I'],
            self.counts[&'-'],
        )
    }

    pub fn count(&self, v: RowVerdict) -> usize {
        self.counts.get(&v.code()).copied().unwrap_or(0)
    }
}
