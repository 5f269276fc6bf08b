use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use ulc_core::ineq::Status;
use ulc_core::{Enclosure, ExactRational, PrecisionPolicy};

use crate::checks::{run_check, CheckName, Context};
use crate::error::CliError;
use crate::params::{FamilyKind, Params};
use crate::Format;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PGrid {
    /// `p = k/m` for `k = 1 .. m-1`, so that `m p` is an integer.
    KOverM,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

/// A grid of parameter points and the checks to run at each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub family: FamilyKind,
    /// Parameters held fixed across the grid.
    #[serde(default)]
    pub params: Params,
    /// `[lo, hi, step]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_range: Option<[ExactRational; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_range: Option<[ExactRational; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_grid: Option<PGrid>,
    /// Inclusive `[lo, hi]`.
    #[serde(default, rename = "N_range", alias = "n_range", skip_serializing_if = "Option::is_none")]
    pub n_range: Option<[u64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_range: Option<[u64; 2]>,
    pub checks: Vec<CheckName>,
    #[serde(default)]
    pub precision: PrecisionPolicy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_eps: Option<ExactRational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "lambda")]
    Lambda,
    #[serde(rename = "N")]
    N,
    #[serde(rename = "m")]
    M,
    #[serde(rename = "p")]
    P,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Lambda => "lambda",
            Self::N => "N",
            Self::M => "m",
            Self::P => "p",
        }
    }
}

pub type Point = Vec<(Axis, ExactRational)>;

fn rational_range(r: &[ExactRational; 3], name: &str) -> Result<Vec<ExactRational>, CliError> {
    let [lo, hi, step] = r;
    if !step.is_positive() {
        return Err(CliError::Usage(format!("{name} step must be positive, got {step}")));
    }
    if lo > hi {
        return Err(CliError::Usage(format!("{name} range [{lo}, {hi}] is empty")));
    }
    let mut out = Vec::new();
    let mut x = lo.clone();
    while x <= *hi {
        out.push(x.clone());
        x = &x + step;
    }
    Ok(out)
}

fn int_range(r: &[u64; 2], name: &str) -> Result<Vec<ExactRational>, CliError> {
    if r[0] > r[1] {
        return Err(CliError::Usage(format!("{name} range [{}, {}] is empty", r[0], r[1])));
    }
    Ok((r[0]..=r[1]).map(ExactRational::from_integer).collect())
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.checks.is_empty() {
            return Err(CliError::Usage("a sweep needs at least one check".into()));
        }
        if self.p_grid.is_some() && (self.p_range.is_some() || self.m_range.is_none()) {
            return Err(CliError::Usage("p_grid needs m_range and excludes p_range".into()));
        }
        self.precision.validate()?;
        if let Some(eps) = &self.tail_eps {
            if !eps.is_positive() {
                return Err(CliError::Usage("tail_eps must be positive".into()));
            }
        }
        self.points().map(|_| ())
    }

    pub fn axes(&self) -> Vec<Axis> {
        let mut axes = Vec::new();
        if self.lambda_range.is_some() {
            axes.push(Axis::Lambda);
        }
        if self.n_range.is_some() {
            axes.push(Axis::N);
        }
        if self.m_range.is_some() {
            axes.push(Axis::M);
        }
        if self.p_range.is_some() || self.p_grid.is_some() {
            axes.push(Axis::P);
        }
        axes
    }

    /// Grid points in lexicographic order of the swept values.
    pub fn points(&self) -> Result<Vec<Point>, CliError> {
        let mut points: Vec<Point> = vec![Vec::new()];
        let mut extend = |axis: Axis, values: &dyn Fn(&Point) -> Vec<ExactRational>| {
            points = points
                .iter()
                .flat_map(|pt| {
                    values(pt).into_iter().map(move |v| {
                        let mut next = pt.clone();
                        next.push((axis, v));
                        next
                    })
                })
                .collect();
        };
        if let Some(r) = &self.lambda_range {
            let v = rational_range(r, "lambda")?;
            extend(Axis::Lambda, &|_| v.clone());
        }
        if let Some(r) = &self.n_range {
            let v = int_range(r, "N")?;
            extend(Axis::N, &|_| v.clone());
        }
        if let Some(r) = &self.m_range {
            let v = int_range(r, "m")?;
            extend(Axis::M, &|_| v.clone());
        }
        if let Some(r) = &self.p_range {
            let v = rational_range(r, "p")?;
            extend(Axis::P, &|_| v.clone());
        } else if let Some(PGrid::KOverM) = self.p_grid {
            extend(Axis::P, &|pt| {
                let m = pt
                    .iter()
                    .find(|(a, _)| *a == Axis::M)
                    .map(|(_, v)| v.floor_i64().unwrap_or(0))
                    .unwrap_or(0);
                (1..m).map(|k| ExactRational::new(k, m).expect("m > 0")).collect()
            });
        }
        if points.len() == 1 && points[0].is_empty() {
            return Err(CliError::Usage("a sweep needs at least one swept parameter".into()));
        }
        points.sort_by(|a, b| a.iter().map(|(_, v)| v).cmp(b.iter().map(|(_, v)| v)));
        Ok(points)
    }

    fn params_at(&self, point: &Point) -> Params {
        let mut params = self.params.clone();
        for (axis, v) in point {
            match axis {
                Axis::Lambda => params.lambda = Some(v.clone()),
                Axis::N => params.n = v.floor_i64().map(|n| n as u64),
                Axis::M => params.m = v.floor_i64().map(|n| n as u64),
                Axis::P => params.p = Some(v.clone()),
            }
        }
        params
    }

    pub fn tail_eps(&self) -> ExactRational {
        self.tail_eps
            .clone()
            .unwrap_or_else(|| default_tail_eps(self.precision.initial_bits))
    }
}

/// `2^-bits`, so truncation sits below the working precision.
pub fn default_tail_eps(bits: u32) -> ExactRational {
    ExactRational::new(1, 2).expect("nonzero").powu(bits)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowVerdict {
    Certified,
    Refuted,
    Inconclusive,
    /// The check's preconditions fail at this point.
    NotApplicable,
}

impl RowVerdict {
    pub fn code(self) -> char {
        match self {
            Self::Certified => 'C',
            Self::Refuted => 'R',
            Self::Inconclusive => 'I',
            Self::NotApplicable => '-',
        }
    }
}

impl From<Status> for RowVerdict {
    fn from(s: Status) -> Self {
        match s {
            Status::Certified => Self::Certified,
            Status::Refuted => Self::Refuted,
            Status::Inconclusive => Self::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub lo: String,
    pub hi: String,
}

impl From<&Enclosure> for Bounds {
    fn from(e: &Enclosure) -> Self {
        let (lo, hi) = e.decimal_bounds();
        Self { lo, hi }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub point: Vec<(Axis, ExactRational)>,
    pub check: CheckName,
    pub verdict: RowVerdict,
    pub gap: Option<Bounds>,
    pub mean: Option<Bounds>,
    pub maxpmf_x: Option<Bounds>,
    pub maxpmf_z: Option<Bounds>,
    pub precision_bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub policy: PrecisionPolicy,
    pub tail_eps: ExactRational,
    pub wall_time_ms: u64,
    pub spec: SweepSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub metadata: Metadata,
}

fn evaluate(spec: &SweepSpec, ctx: &Context, point: &Point, check: CheckName) -> Result<SweepRow, CliError> {
    let params = spec.params_at(point);
    let base = SweepRow {
        point: point.clone(),
        check,
        verdict: RowVerdict::NotApplicable,
        gap: None,
        mean: None,
        maxpmf_x: None,
        maxpmf_z: None,
        precision_bits: None,
        note: None,
    };
    match run_check(check, spec.family, &params, ctx) {
        Ok(out) => {
            let (mean, max_x, max_z) = match &out.side {
                Some((a, b, c)) => (Some(a.into()), Some(b.into()), Some(c.into())),
                None => (None, None, None),
            };
            Ok(SweepRow {
                verdict: out.status.into(),
                gap: out.verdict.as_ref().map(|v| (&v.gap).into()),
                precision_bits: out.verdict.as_ref().map(|v| v.precision_used),
                mean,
                maxpmf_x: max_x,
                maxpmf_z: max_z,
                ..base
            })
        }
        Err(CliError::Usage(msg)) => Ok(SweepRow {
            note: Some(msg),
            ..base
        }),
        Err(e) => Err(e),
    }
}

impl SweepReport {
    /// Evaluates every grid point, in parallel, in grid order.
    pub fn run(spec: &SweepSpec) -> Result<Self, CliError> {
        spec.validate()?;
        let started = Instant::now();
        let ctx = Context {
            policy: spec.precision,
            tail_eps: spec.tail_eps(),
        };
        let tasks: Vec<(Point, CheckName)> = spec
            .points()?
            .into_iter()
            .flat_map(|pt| spec.checks.iter().map(move |c| (pt.clone(), *c)))
            .collect();
        let rows = tasks
            .par_iter()
            .map(|(pt, check)| evaluate(spec, &ctx, pt, *check))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            rows,
            metadata: Metadata {
                version: env!("CARGO_PKG_VERSION").to_string(),
                policy: spec.precision,
                tail_eps: ctx.tail_eps,
                wall_time_ms: started.elapsed().as_millis() as u64,
                spec: spec.clone(),
            },
        })
    }

    pub fn count(&self, verdict: RowVerdict) -> usize {
        self.rows.iter().filter(|r| r.verdict == verdict).count()
    }

    pub fn summary(&self) -> String {
        format!(
            "{} rows: {} Certified, {} Refuted, {} Inconclusive, {} NotApplicable",
            self.rows.len(),
            self.count(RowVerdict::Certified),
            self.count(RowVerdict::Refuted),
            self.count(RowVerdict::Inconclusive),
            self.count(RowVerdict::NotApplicable),
        )
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let axes = self.metadata.spec.axes();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<&str> = axes.iter().map(|a| a.as_str()).collect();
        header.extend([
            "check",
            "verdict",
            "gap_lo",
            "gap_hi",
            "mean_lo",
            "mean_hi",
            "maxpmf_x_lo",
            "maxpmf_x_hi",
            "maxpmf_z_lo",
            "maxpmf_z_hi",
            "precision_bits",
        ]);
        let csv_err = |e: csv::Error| CliError::Compute(e.to_string());
        w.write_record(&header).map_err(csv_err)?;
        for row in &self.rows {
            let mut rec: Vec<String> = row.point.iter().map(|(_, v)| v.to_string()).collect();
            rec.push(row.check.as_str().into());
            rec.push(format!("{:?}", row.verdict));
            for b in [&row.gap, &row.mean, &row.maxpmf_x, &row.maxpmf_z] {
                let b = b.clone().unwrap_or_default();
                rec.push(b.lo);
                rec.push(b.hi);
            }
            rec.push(row.precision_bits.map(|b| b.to_string()).unwrap_or_default());
            w.write_record(&rec).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Compute(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
