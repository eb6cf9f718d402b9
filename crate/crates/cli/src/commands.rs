//! The four subcommands. Each returns its results for programmatic use and, when
//! given an output directory, writes CSV/JSON files plus a run manifest.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use irsfactory_core::engine::{
    compare_analytic, run_points, Comparison, GridSummary, Metric, MetricsReport,
};
use irsfactory_core::geometry::{ElementGrid, GridSource, Point3, WallCounts};
use log::info;
use serde_json::json;

use crate::config::FileConfig;
use crate::manifest::RunManifest;

pub const RESULTS_FILE: &str = "results.csv";
pub const AGGREGATES_FILE: &str = "aggregates.json";
pub const COMPARE_FILE: &str = "compare.csv";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const DEPLOY_FILE: &str = "deploy.csv";

pub fn cdf_file(metric: Metric) -> String {
    format!("cdf_{}.csv", metric.name())
}

fn csv_writer(dir: &Path, name: &str) -> Result<csv::Writer<fs::File>> {
    let path = dir.join(name);
    csv::Writer::from_path(&path).with_context(|| format!("cannot write {}", path.display()))
}

fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

fn num(v: f64) -> String {
    v.to_string()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeployRow {
    pub num_irs: usize,
    pub counts: WallCounts,
    pub grid: ElementGrid,
    pub positions: Vec<Point3>,
}

impl DeployRow {
    pub fn is_reference(&self) -> bool {
        self.grid.source == GridSource::Reference
    }
}

pub const DEPLOY_HEADER: [&str; 10] =
    ["M", "n_L1", "n_L2", "n_W", "N_h", "N_v", "layout", "aspect_warning", "positions", "manifest_id"];

/// Wall split, element grid and positions for each IRS count in `counts`.
pub fn cmd_deploy(config: &FileConfig, counts: &[usize]) -> Result<Vec<DeployRow>> {
    counts
        .iter()
        .map(|&m| {
            if m == 0 {
                bail!("deployment table needs at least one IRS");
            }
            let dep = config.deployment_with(m)?;
            Ok(DeployRow {
                num_irs: m,
                counts: dep.counts.expect("deployment with IRSs has wall counts"),
                grid: dep.grid.expect("deployment with IRSs has a grid"),
                positions: dep.panels.iter().map(|p| p.position).collect(),
            })
        })
        .collect()
}

pub fn write_deploy<W: Write>(rows: &[DeployRow], manifest_id: &str, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DEPLOY_HEADER)?;
    for r in rows {
        let positions = r
            .positions
            .iter()
            .map(|p| format!("({} {} {})", p.x, p.y, p.z))
            .collect::<Vec<_>>()
            .join(" ");
        w.write_record([
            r.num_irs.to_string(),
            r.counts.side_far.to_string(),
            r.counts.side_near.to_string(),
            r.counts.back.to_string(),
            r.grid.horizontal.to_string(),
            r.grid.vertical.to_string(),
            if r.is_reference() { "reference" } else { "closest-factor" }.to_string(),
            r.grid.aspect_warning.to_string(),
            positions,
            manifest_id.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Runs `cmd_deploy` and writes the table to `out` (with a manifest) or stdout.
pub fn deploy_to(config: &FileConfig, counts: &[usize], out: Option<&Path>) -> Result<Vec<DeployRow>> {
    let rows = cmd_deploy(config, counts)?;
    let args = format!("{counts:?}");
    let mut manifest = RunManifest::new("deploy", config, &args);
    match out {
        Some(dir) => {
            prepare_dir(dir)?;
            write_deploy(&rows, &manifest.manifest_id, fs::File::create(dir.join(DEPLOY_FILE))?)?;
            manifest.outputs.push(DEPLOY_FILE.to_string());
            manifest.write(dir)?;
        }
        None => write_deploy(&rows, &manifest.manifest_id, std::io::stdout().lock())?,
    }
    Ok(rows)
}

pub const RESULTS_HEADER: [&str; 11] = [
    "ue_x",
    "ue_y",
    "exp_snr_db",
    "exp_snr_se",
    "exp_fbcap_bps_hz",
    "exp_fbcap_se",
    "exp_outage",
    "exp_outage_se",
    "n_samples",
    "exp_outage_censored",
    "manifest_id",
];

fn point_fields(p: &irsfactory_core::engine::PointMetrics) -> Vec<String> {
    vec![
        num(p.ue.x),
        num(p.ue.y),
        num(p.snr_db()),
        num(p.snr_db_std_error()),
        num(p.fb_capacity.mean),
        num(p.fb_capacity.std_error),
        num(p.outage.mean),
        num(p.outage.std_error),
        p.samples.to_string(),
        p.outage_censored().to_string(),
    ]
}

/// Results of a simulate run.
#[derive(Debug, Clone)]
pub struct SimulateOutput {
    pub report: MetricsReport,
    pub manifest_id: String,
}

fn summary_json(s: &GridSummary) -> serde_json::Value {
    let one = |x: irsfactory_core::engine::Summary| json!({"mean": x.mean, "min": x.min, "max": x.max});
    json!({
        Metric::SnrDb.name(): one(s.snr_db),
        Metric::FbCapacity.name(): one(s.fb_capacity),
        Metric::Outage.name(): one(s.outage),
    })
}

/// Monte Carlo metrics for every configured UE position.
pub fn cmd_simulate(config: &FileConfig, out: &Path) -> Result<SimulateOutput> {
    let scenario = config.scenario()?;
    let points = config.ue_points()?;
    let mut manifest = RunManifest::new("simulate", config, "");
    info!(
        "simulating {} UE positions x {} realizations ({:?} engine)",
        points.len(),
        scenario.budget.total(),
        scenario.mode
    );
    let report = MetricsReport::from_points(run_points(&scenario, &points)?)?;
    prepare_dir(out)?;
    let id = manifest.manifest_id.clone();

    let mut w = csv_writer(out, RESULTS_FILE)?;
    w.write_record(RESULTS_HEADER)?;
    for p in &report.points {
        let mut rec = point_fields(p);
        rec.push(id.clone());
        w.write_record(rec)?;
    }
    w.flush()?;
    manifest.outputs.push(RESULTS_FILE.to_string());

    let aggregates = json!({
        "manifest_id": id,
        "n_points": report.points.len(),
        "samples_per_point": scenario.budget.total(),
        "metrics": summary_json(&report.summary),
    });
    fs::write(out.join(AGGREGATES_FILE), serde_json::to_string_pretty(&aggregates)? + "\n")?;
    manifest.outputs.push(AGGREGATES_FILE.to_string());

    for metric in Metric::ALL {
        let name = cdf_file(metric);
        let mut w = csv_writer(out, &name)?;
        w.write_record(["value", "cumulative_fraction", "manifest_id"])?;
        for (v, f) in report.cdf(metric) {
            w.write_record([num(v), num(f), id.clone()])?;
        }
        w.flush()?;
        manifest.outputs.push(name);
    }
    let written = manifest.outputs.len();
    manifest.write(out)?;
    info!("wrote {written} result files and a manifest to {}", out.display());
    Ok(SimulateOutput { report, manifest_id: id })
}

pub const COMPARE_EXTRA: [&str; 4] = ["analytic_snr_db", "analytic_cap_bound", "snr_gap_db", "cap_gap"];

/// Monte Carlo metrics paired with the closed-form SNR and capacity bound.
pub fn cmd_compare(config: &FileConfig, out: &Path) -> Result<Vec<Comparison>> {
    let scenario = config.scenario()?;
    let points = config.ue_points()?;
    let mut manifest = RunManifest::new("compare", config, "");
    info!("comparing {} UE positions against the closed forms", points.len());
    let rows = compare_analytic(&scenario, &points)?;
    prepare_dir(out)?;
    let mut w = csv_writer(out, COMPARE_FILE)?;
    let mut header: Vec<&str> = RESULTS_HEADER[..10].to_vec();
    header.extend(COMPARE_EXTRA);
    header.push("manifest_id");
    w.write_record(&header)?;
    for c in &rows {
        let mut rec = point_fields(&c.simulated);
        rec.extend([
            num(c.analytic_snr_db()),
            num(c.capacity_bound),
            num(c.snr_gap_db()),
            num(c.capacity_gap()),
            manifest.manifest_id.clone(),
        ]);
        w.write_record(rec)?;
    }
    w.flush()?;
    manifest.outputs.push(COMPARE_FILE.to_string());
    manifest.write(out)?;
    Ok(rows)
}

/// Parameters a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Number of IRSs.
    NumIrs,
    /// IRS height, m.
    Height,
    /// Blockage density, per m^2.
    Density,
    /// Transmit power, dBm.
    TxPower,
}

impl Axis {
    fn apply(self, cfg: &mut FileConfig, value: f64) -> Result<()> {
        match self {
            Axis::NumIrs => {
                if value < 0.0 || value.fract() != 0.0 {
                    bail!("IRS count {value} is not a non-negative integer");
                }
                cfg.deployment.num_irs = value as usize;
            }
            Axis::Height => cfg.deployment.irs_height_m = value,
            Axis::Density => cfg.blockage.density_per_m2 = value,
            Axis::TxPower => cfg.radio.tx_power_dbm = value,
        }
        Ok(())
    }
}

impl FromStr for Axis {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "M" | "m" => Axis::NumIrs,
            "h" | "H" => Axis::Height,
            "lambdaB" | "lambda_b" | "lambda" => Axis::Density,
            "PT" | "pt" | "pt_dbm" => Axis::TxPower,
            other => bail!("unknown sweep axis {other:?} (expected M, h, lambdaB or PT)"),
        })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::NumIrs => "M",
            Axis::Height => "h",
            Axis::Density => "lambdaB",
            Axis::TxPower => "PT",
        })
    }
}

/// One axis with its values, parsed from `name=v1,v2,...`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisValues {
    pub axis: Axis,
    pub values: Vec<f64>,
}

impl FromStr for AxisValues {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        let (name, list) = s.split_once('=').ok_or_else(|| anyhow!("expected AXIS=v1,v2,... in {s:?}"))?;
        let values = list
            .split(',')
            .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad value {v:?} for axis {name}")))
            .collect::<Result<Vec<_>>>()?;
        if values.is_empty() {
            bail!("axis {name} has no values");
        }
        Ok(Self { axis: name.trim().parse()?, values })
    }
}

impl fmt::Display for AxisValues {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{}={}", self.axis, vals.join(","))
    }
}

/// Aggregates of one sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub num_irs: usize,
    pub irs_height: f64,
    pub density: f64,
    pub tx_power_dbm: f64,
    pub summary: GridSummary,
}

pub const SWEEP_HEADER: [&str; 8] =
    ["M", "h", "lambda_b", "pt_dbm", "metric", "statistic", "value", "manifest_id"];

/// Every configuration of the cartesian product of `axes`, in row-major order (the
/// last axis varies fastest).
pub fn sweep_configs(config: &FileConfig, axes: &[AxisValues]) -> Result<Vec<FileConfig>> {
    let mut out = vec![config.clone()];
    for ax in axes {
        let mut next = Vec::with_capacity(out.len() * ax.values.len());
        for base in &out {
            for &v in &ax.values {
                let mut c = base.clone();
                ax.axis.apply(&mut c, v)?;
                next.push(c);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Grid aggregates for every cell of the sweep. All cells share the master seed.
pub fn cmd_sweep(config: &FileConfig, axes: &[AxisValues], out: &Path) -> Result<Vec<SweepCell>> {
    let args = axes.iter().map(ToString::to_string).collect::<Vec<_>>().join(";");
    let mut manifest = RunManifest::new("sweep", config, &args);
    let configs = sweep_configs(config, axes)?;
    let mut cells = Vec::with_capacity(configs.len());
    for (i, c) in configs.iter().enumerate() {
        info!(
            "sweep cell {}/{}: M={} h={} lambdaB={} PT={}",
            i + 1,
            configs.len(),
            c.deployment.num_irs,
            c.deployment.irs_height_m,
            c.blockage.density_per_m2,
            c.radio.tx_power_dbm
        );
        let scenario = c.scenario()?;
        let report = MetricsReport::from_points(run_points(&scenario, &c.ue_points()?)?)?;
        cells.push(SweepCell {
            num_irs: c.deployment.num_irs,
            irs_height: c.deployment.irs_height_m,
            density: c.blockage.density_per_m2,
            tx_power_dbm: c.radio.tx_power_dbm,
            summary: report.summary,
        });
    }
    prepare_dir(out)?;
    let mut w = csv_writer(out, SWEEP_FILE)?;
    w.write_record(SWEEP_HEADER)?;
    for cell in &cells {
        for metric in Metric::ALL {
            let s = match metric {
                Metric::SnrDb => cell.summary.snr_db,
                Metric::FbCapacity => cell.summary.fb_capacity,
                Metric::Outage => cell.summary.outage,
            };
            for (stat, v) in [("mean", s.mean), ("min", s.min), ("max", s.max)] {
                w.write_record([
                    cell.num_irs.to_string(),
                    num(cell.irs_height),
                    num(cell.density),
                    num(cell.tx_power_dbm),
                    metric.name().to_string(),
                    stat.to_string(),
                    num(v),
                    manifest.manifest_id.clone(),
                ])?;
            }
        }
    }
    w.flush()?;
    manifest.outputs.push(SWEEP_FILE.to_string());
    manifest.write(out)?;
    Ok(cells)
}
