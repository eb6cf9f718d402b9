//! Monte Carlo estimation of the expected SNR, expected finite-blocklength
//! capacity and expected outage probability at UE positions.
//!
//! Two engines are available:
//!
//! * [`EngineMode::Geometric`] drops real screen fields and counts intersections,
//!   so links that share screens are correlated.
//! * [`EngineMode::Enumerated`] treats the IRS-UE links as independent: it
//!   enumerates every LOS/NLOS case, draws NLOS block counts from a zero-truncated
//!   Poisson law and weights the per-case estimates by the case probabilities.
//!
//! Both share the fading kernel, which works directly on the coherently combined
//! amplitude `a_0 |f_bu| + sum_m a_m sum_n |f_ru,m,n|` (the received signal after
//! optimal IRS phases), so steering angles never need to be materialised.
//!
//! # Determinism
//!
//! Every (UE index, drop index) pair owns an independent random stream derived from
//! the master seed, and fading draws are consumed sequentially inside the drop.
//! Per-drop tallies are reduced in drop order after the parallel section, so the
//! output is a pure function of the configuration and seed, independent of the
//! thread count.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{expected_snr_void, fb_capacity_bound, AnalyticInputs};
use crate::blockage::{
    enumerate_cases, los_probability, sample_blocked_count, sample_count, sample_field_in,
    BlockageModel, FloorWindow, LinkBlockCounts, MAX_ENUMERATED_IRS,
};
use crate::channel::{
    outage_threshold, path_loss_direct, path_loss_indirect, rician_factor,
    sample_magnitude_sum, sample_rayleigh_magnitude, FbCapacity, LinkGains, RadioConfig,
};
use crate::error::{invalid, Error, Result};
use crate::geometry::{link_geometry, ue_grid, FactoryLayout, IrsDeployment, Point3};
use crate::units::linear_to_db;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineMode {
    #[default]
    Geometric,
    Enumerated,
}

impl std::str::FromStr for EngineMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(Self::Geometric),
            "enumerated" => Ok(Self::Enumerated),
            other => Err(invalid(format!("unknown engine mode {other:?}"))),
        }
    }
}

/// Blockage drops per UE times fading draws per drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleBudget {
    pub drops: usize,
    pub draws: usize,
}

impl SampleBudget {
    pub const DESK_TOTAL: usize = 100_000;

    /// 2500 drops x 4000 draws.
    pub const fn full() -> Self {
        Self { drops: 2500, draws: 4000 }
    }

    pub fn desk() -> Self {
        Self::from_total(Self::DESK_TOTAL)
    }

    /// Fading draws per blockage drop when splitting a total budget.
    pub const DRAWS_PER_DROP: usize = 20;

    /// Splits `total` realizations into drops of [`Self::DRAWS_PER_DROP`] fading
    /// draws. Blockage fields dominate the variance of every metric and are cheap
    /// next to the element fading, so short drops give the smallest standard
    /// error per realization.
    pub fn from_total(total: usize) -> Self {
        let total = total.max(1);
        let draws = Self::DRAWS_PER_DROP.min(total);
        Self { drops: total.div_ceil(draws), draws }
    }

    pub fn total(&self) -> usize {
        self.drops * self.draws
    }
}

/// A complete, validated simulation scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub layout: FactoryLayout,
    pub deployment: IrsDeployment,
    pub blockage: BlockageModel,
    pub radio: RadioConfig,
    pub mode: EngineMode,
    pub budget: SampleBudget,
    pub seed: u64,
    pub grid_resolution: f64,
}

impl ScenarioConfig {
    /// Reference hall, radio and blockage parameters with `num_irs` panels of
    /// 960 elements in total at height `irs_height`, blockage density `density`.
    pub fn reference(num_irs: usize, irs_height: f64, density: f64) -> Result<Self> {
        let layout = FactoryLayout::reference();
        let radio = RadioConfig::reference();
        let blockage = BlockageModel::new(density, 2.5, 1.7, layout.ue_height, 0.01, 0.01)?;
        let deployment = IrsDeployment::new(
            &layout,
            num_irs,
            960,
            irs_height,
            radio.half_wavelength(),
            blockage.max_height,
        )?;
        let cfg = Self {
            layout,
            deployment,
            blockage,
            radio,
            mode: EngineMode::Geometric,
            budget: SampleBudget::desk(),
            seed: 0,
            grid_resolution: 2.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget.drops == 0 || self.budget.draws == 0 {
            return Err(invalid("sample budget needs at least one drop and one draw"));
        }
        if !(self.grid_resolution > 0.0) {
            return Err(invalid("grid resolution must be positive"));
        }
        if self.blockage.min_height != self.layout.ue_height {
            return Err(invalid("blockages must start at the UE antenna height"));
        }
        let d = &self.deployment;
        if d.num_irs > 0 {
            if d.height < self.blockage.max_height || d.height > self.layout.height {
                return Err(invalid("IRS height must lie between the tallest blockage and the ceiling"));
            }
            if d.panels.len() != d.num_irs || d.elements_per_irs() * d.num_irs != d.total_elements {
                return Err(invalid("deployment is inconsistent with its IRS count"));
            }
        }
        if self.mode == EngineMode::Enumerated && d.num_irs > MAX_ENUMERATED_IRS {
            return Err(Error::UnsupportedMode(format!(
                "enumerated engine supports at most {MAX_ENUMERATED_IRS} IRSs, got {}",
                d.num_irs
            )));
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random streams of one UE position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Substream {
    seed: u64,
    point: u64,
}

impl Substream {
    pub fn new(seed: u64, point: u64) -> Self {
        Self { seed, point }
    }

    pub fn drop_rng(&self, drop: u64) -> Xoshiro256PlusPlus {
        let key = splitmix64(self.seed)
            ^ splitmix64(self.point.wrapping_mul(0xD6E8_FEB8_6659_FD93))
                .rotate_left(23)
            ^ splitmix64(drop ^ 0xA076_1D64_78BD_642F).rotate_left(41);
        Xoshiro256PlusPlus::seed_from_u64(key)
    }
}

/// Deterministic per-UE quantities shared by all drops.
#[derive(Debug, Clone)]
struct PointModel {
    ue: Point3,
    bs: Point3,
    panels: Vec<Point3>,
    gains: LinkGains,
    los_k: Vec<f64>,
    direct_mean: f64,
    irs_mean: Vec<f64>,
    per_irs: usize,
    transmit_snr: f64,
    power_threshold: f64,
    fb: FbCapacity,
    window: FloorWindow,
}

impl PointModel {
    fn new(config: &ScenarioConfig, ue: Point3) -> Result<Self> {
        let (layout, dep, radio, block) =
            (&config.layout, &config.deployment, &config.radio, &config.blockage);
        let geo = link_geometry(layout, dep, ue)?;
        let gains = LinkGains {
            direct: path_loss_direct(geo.direct_distance, radio.tx_gain, radio.rx_gain, radio.wavelength),
            irs: geo
                .irs
                .iter()
                .map(|l| {
                    path_loss_indirect(
                        l.bs_distance,
                        l.ue_distance,
                        l.incidence,
                        dep.element_spacing,
                        radio.tx_gain,
                        radio.rx_gain,
                        radio.wavelength,
                    )
                })
                .collect(),
            shelf_loss: block.shelf_loss,
            penetration: block.penetration,
        };
        let bs = layout.bs_position();
        let panels: Vec<Point3> = dep.panels.iter().map(|p| p.position).collect();
        let mut corners = panels.clone();
        corners.push(bs);
        corners.push(ue);
        let window =
            FloorWindow::around(&corners, block.width / 2.0).intersect(&FloorWindow::floor(layout));
        let transmit_snr = radio.transmit_snr();
        Ok(Self {
            ue,
            bs,
            los_k: geo.irs.iter().map(|l| rician_factor(l.ue_distance, true)).collect(),
            direct_mean: block.expected_blockers(geo.direct_horizontal, layout.height)?,
            irs_mean: geo
                .irs
                .iter()
                .map(|l| block.expected_blockers(l.ue_horizontal, dep.height))
                .collect::<Result<_>>()?,
            panels,
            gains,
            per_irs: dep.elements_per_irs(),
            transmit_snr,
            power_threshold: outage_threshold(radio.rate_threshold, transmit_snr),
            fb: FbCapacity::new(radio.blocklength, radio.decode_error)?,
            window,
        })
    }

    fn geometric_counts<R: Rng>(&self, model: &BlockageModel, rng: &mut R) -> LinkBlockCounts {
        let field = sample_field_in(model, self.window, rng);
        LinkBlockCounts {
            direct: field.count_intersections(self.bs, self.ue),
            irs: self.panels.iter().map(|&q| field.count_intersections(q, self.ue)).collect(),
        }
    }

    /// Runs `draws` fading realizations for fixed block counts.
    fn fading<R: Rng>(&self, counts: &LinkBlockCounts, draws: usize, rng: &mut R) -> Tally {
        let direct = self.gains.direct_amplitude(counts.direct);
        let irs: Vec<(f64, f64)> = counts
            .irs
            .iter()
            .enumerate()
            .map(|(m, &b)| {
                let k = if b == 0 { self.los_k[m] } else { 0.0 };
                (self.gains.irs_amplitude(m, b), k)
            })
            .collect();
        let mut t = Tally::default();
        for _ in 0..draws {
            let mut amp = direct * sample_rayleigh_magnitude(rng);
            for &(a, k) in &irs {
                amp += a * sample_magnitude_sum(k, self.per_irs, rng);
            }
            let power = amp * amp;
            let snr = self.transmit_snr * power;
            let cap = self.fb.rate(snr);
            t.push(snr, cap, power < self.power_threshold);
        }
        t
    }
}

/// Running sums over a block of realizations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Tally {
    n: u64,
    snr: f64,
    snr_sq: f64,
    cap: f64,
    cap_sq: f64,
    outages: u64,
}

impl Tally {
    fn push(&mut self, snr: f64, cap: f64, outage: bool) {
        self.n += 1;
        self.snr += snr;
        self.snr_sq += snr * snr;
        self.cap += cap;
        self.cap_sq += cap * cap;
        self.outages += outage as u64;
    }

    fn means(&self) -> [f64; 3] {
        let n = self.n as f64;
        [self.snr / n, self.cap / n, self.outages as f64 / n]
    }

    /// Variance of the mean estimated from the individual realizations.
    fn within_variance(&self) -> [f64; 3] {
        let n = self.n as f64;
        let var = |s: f64, s2: f64| ((s2 / n - (s / n).powi(2)).max(0.0)) / n;
        let p = self.outages as f64 / n;
        [var(self.snr, self.snr_sq), var(self.cap, self.cap_sq), p * (1.0 - p) / n]
    }
}

/// Mean and variance of the mean from a set of equal-size drop tallies, treating
/// drops as independent clusters.
fn cluster_estimate(drops: &[Tally]) -> ([f64; 3], [f64; 3]) {
    let k = drops.len() as f64;
    let mut mean = [0.0; 3];
    for d in drops {
        for (acc, v) in mean.iter_mut().zip(d.means()) {
            *acc += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= k);
    if drops.len() < 2 {
        return (mean, drops.first().map_or([0.0; 3], Tally::within_variance));
    }
    let mut var = [0.0; 3];
    for d in drops {
        for ((acc, v), m) in var.iter_mut().zip(d.means()).zip(mean) {
            *acc += (v - m).powi(2);
        }
    }
    var.iter_mut().for_each(|v| *v /= (k - 1.0) * k);
    (mean, var)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Outage estimates resting on fewer events than this are flagged as censored.
pub const OUTAGE_CENSOR_EVENTS: u64 = 10;

/// Estimated metrics at one UE position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMetrics {
    pub ue: Point3,
    /// Linear expected SNR.
    pub snr: Estimate,
    /// bit/s/Hz.
    pub fb_capacity: Estimate,
    pub outage: Estimate,
    pub outage_events: u64,
    pub samples: u64,
}

impl PointMetrics {
    fn from_parts(ue: Point3, mean: [f64; 3], var: [f64; 3], events: u64, samples: u64) -> Self {
        let est = |i: usize| Estimate { mean: mean[i], std_error: var[i].max(0.0).sqrt() };
        Self { ue, snr: est(0), fb_capacity: est(1), outage: est(2), outage_events: events, samples }
    }

    pub fn snr_db(&self) -> f64 {
        linear_to_db(self.snr.mean)
    }

    /// Standard error of [`Self::snr_db`] by the delta method.
    pub fn snr_db_std_error(&self) -> f64 {
        10.0 / std::f64::consts::LN_10 * self.snr.std_error / self.snr.mean
    }

    /// True when the outage estimate rests on too few events to be resolved.
    pub fn outage_censored(&self) -> bool {
        self.outage_events < OUTAGE_CENSOR_EVENTS
    }

    /// Smallest outage probability this sample size resolves.
    pub fn outage_floor(&self) -> f64 {
        OUTAGE_CENSOR_EVENTS as f64 / self.samples as f64
    }
}

/// Geometric-engine estimate at `ue` using the streams of `stream`.
pub fn estimate_point_geometric(
    config: &ScenarioConfig,
    ue: Point3,
    stream: Substream,
) -> Result<PointMetrics> {
    config.validate()?;
    let pm = PointModel::new(config, ue)?;
    let draws = config.budget.draws;
    let tallies: Vec<Tally> = (0..config.budget.drops as u64)
        .into_par_iter()
        .map(|d| {
            let mut rng = stream.drop_rng(d);
            let counts = pm.geometric_counts(&config.blockage, &mut rng);
            pm.fading(&counts, draws, &mut rng)
        })
        .collect();
    let (mean, var) = cluster_estimate(&tallies);
    let events = tallies.iter().map(|t| t.outages).sum();
    let samples = tallies.iter().map(|t| t.n).sum();
    Ok(PointMetrics::from_parts(ue, mean, var, events, samples))
}

/// One stratum of the enumerated engine: either a single blockage case or the
/// pooled low-probability remainder, sampled proportionally to case probability.
#[derive(Debug, Clone)]
struct Stratum {
    weight: f64,
    drops: usize,
    /// Cases and cumulative probabilities (single entry for a fixed case).
    cases: Vec<u32>,
    cumulative: Vec<f64>,
}

impl Stratum {
    fn pick<R: Rng>(&self, rng: &mut R) -> u32 {
        if self.cases.len() == 1 {
            return self.cases[0];
        }
        let u = rng.random::<f64>() * self.weight;
        let i = self.cumulative.partition_point(|&c| c <= u).min(self.cases.len() - 1);
        self.cases[i]
    }
}

fn strata(los_probs: &[f64], drops: usize) -> Result<Vec<Stratum>> {
    let cases = enumerate_cases(los_probs)?;
    let budget = drops as f64;
    let mut out = Vec::new();
    let mut rest = Stratum { weight: 0.0, drops: 0, cases: Vec::new(), cumulative: Vec::new() };
    for c in cases.iter().filter(|c| c.probability > 0.0) {
        let share = c.probability * budget;
        if share >= 1.0 {
            out.push(Stratum {
                weight: c.probability,
                drops: share.round() as usize,
                cases: vec![c.los_mask],
                cumulative: vec![c.probability],
            });
        } else {
            rest.weight += c.probability;
            rest.cases.push(c.los_mask);
            rest.cumulative.push(rest.weight);
        }
    }
    if rest.weight > 0.0 {
        rest.drops = ((rest.weight * budget).round() as usize).max(1);
        out.push(rest);
    }
    Ok(out)
}

/// Enumerated-engine estimate: a stratified sum over blockage cases with
/// independent per-link block counts.
pub fn estimate_point_enumerated(
    config: &ScenarioConfig,
    ue: Point3,
    stream: Substream,
) -> Result<PointMetrics> {
    if config.deployment.num_irs > MAX_ENUMERATED_IRS {
        return Err(Error::UnsupportedMode(format!(
            "enumerated engine supports at most {MAX_ENUMERATED_IRS} IRSs"
        )));
    }
    config.validate()?;
    let pm = PointModel::new(config, ue)?;
    let p: Vec<f64> = pm.irs_mean.iter().map(|&e| los_probability(e)).collect();
    let strata = strata(&p, config.budget.drops)?;
    let draws = config.budget.draws;

    let jobs: Vec<(usize, u64)> = strata
        .iter()
        .enumerate()
        .flat_map(|(s, st)| (0..st.drops).map(move |_| s))
        .enumerate()
        .map(|(j, s)| (s, j as u64))
        .collect();
    let tallies: Vec<(usize, Tally)> = jobs
        .into_par_iter()
        .map(|(s, j)| {
            let mut rng = stream.drop_rng(j);
            let mask = strata[s].pick(&mut rng);
            let irs = pm
                .irs_mean
                .iter()
                .enumerate()
                .map(|(m, &e)| {
                    if mask >> m & 1 == 1 {
                        Ok(0)
                    } else {
                        sample_blocked_count(e, &mut rng)
                    }
                })
                .collect::<Result<Vec<u32>>>()
                .expect("NLOS links of a positive-probability case have positive means");
            let counts = LinkBlockCounts { direct: sample_count(pm.direct_mean, &mut rng), irs };
            (s, pm.fading(&counts, draws, &mut rng))
        })
        .collect();

    let mut mean = [0.0; 3];
    let mut var = [0.0; 3];
    let mut events = 0;
    let mut samples = 0;
    for (s, st) in strata.iter().enumerate() {
        let group: Vec<Tally> =
            tallies.iter().filter(|(i, _)| *i == s).map(|(_, t)| *t).collect();
        let (m, v) = cluster_estimate(&group);
        for i in 0..3 {
            mean[i] += st.weight * m[i];
            var[i] += st.weight * st.weight * v[i];
        }
        events += group.iter().map(|t| t.outages).sum::<u64>();
        samples += group.iter().map(|t| t.n).sum::<u64>();
    }
    // The case weights sum to one only up to rounding.
    mean[1] = mean[1].max(0.0);
    mean[2] = mean[2].clamp(0.0, 1.0);
    Ok(PointMetrics::from_parts(ue, mean, var, events, samples))
}

/// Estimate with the engine selected in `config`.
pub fn estimate_point(config: &ScenarioConfig, ue: Point3, stream: Substream) -> Result<PointMetrics> {
    match config.mode {
        EngineMode::Geometric => estimate_point_geometric(config, ue, stream),
        EngineMode::Enumerated => estimate_point_enumerated(config, ue, stream),
    }
}

/// Mean, minimum and maximum over UE positions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let mut n = 0usize;
        let mut s = Summary { mean: 0.0, min: f64::INFINITY, max: f64::NEG_INFINITY };
        for v in values {
            n += 1;
            s.mean += v;
            s.min = s.min.min(v);
            s.max = s.max.max(v);
        }
        (n > 0).then(|| Summary { mean: (s.mean / n as f64).clamp(s.min, s.max), ..s })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Expected SNR in dB.
    SnrDb,
    FbCapacity,
    Outage,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::SnrDb, Metric::FbCapacity, Metric::Outage];

    pub fn name(self) -> &'static str {
        match self {
            Metric::SnrDb => "exp_snr_db",
            Metric::FbCapacity => "exp_fbcap_bps_hz",
            Metric::Outage => "exp_outage",
        }
    }

    pub fn value(self, p: &PointMetrics) -> f64 {
        match self {
            Metric::SnrDb => p.snr_db(),
            Metric::FbCapacity => p.fb_capacity.mean,
            Metric::Outage => p.outage.mean,
        }
    }
}

/// Aggregates over the grid. The SNR summary is taken over dB values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub snr_db: Summary,
    pub fb_capacity: Summary,
    pub outage: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub points: Vec<PointMetrics>,
    pub summary: GridSummary,
}

impl MetricsReport {
    pub fn from_points(points: Vec<PointMetrics>) -> Result<Self> {
        let summary = |m: Metric| {
            Summary::of(points.iter().map(|p| m.value(p)))
                .ok_or_else(|| invalid("report needs at least one UE position"))
        };
        let summary = GridSummary {
            snr_db: summary(Metric::SnrDb)?,
            fb_capacity: summary(Metric::FbCapacity)?,
            outage: summary(Metric::Outage)?,
        };
        Ok(Self { points, summary })
    }

    pub fn summary_of(&self, metric: Metric) -> Summary {
        match metric {
            Metric::SnrDb => self.summary.snr_db,
            Metric::FbCapacity => self.summary.fb_capacity,
            Metric::Outage => self.summary.outage,
        }
    }

    /// Empirical CDF over UE positions: sorted values with cumulative fractions.
    pub fn cdf(&self, metric: Metric) -> Vec<(f64, f64)> {
        empirical_cdf(self.points.iter().map(|p| metric.value(p)))
    }
}

pub fn empirical_cdf(values: impl IntoIterator<Item = f64>) -> Vec<(f64, f64)> {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.into_iter().enumerate().map(|(i, x)| (x, (i + 1) as f64 / n)).collect()
}

/// Estimates every point of `points`; point `i` uses substream `i`.
pub fn run_points(config: &ScenarioConfig, points: &[Point3]) -> Result<Vec<PointMetrics>> {
    config.validate()?;
    points
        .par_iter()
        .enumerate()
        .map(|(i, &ue)| estimate_point(config, ue, Substream::new(config.seed, i as u64)))
        .collect()
}

/// Runs the whole UE grid at the configured resolution.
pub fn run_grid(config: &ScenarioConfig) -> Result<MetricsReport> {
    let grid = ue_grid(&config.layout, config.grid_resolution)?;
    MetricsReport::from_points(run_points(config, &grid)?)
}

/// Simulated and closed-form values at one UE position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub simulated: PointMetrics,
    /// Closed-form expected SNR (linear), all IRS links blocked.
    pub analytic_snr: f64,
    /// Jensen bound on the expected FB capacity.
    pub capacity_bound: f64,
}

impl Comparison {
    pub fn analytic_snr_db(&self) -> f64 {
        linear_to_db(self.analytic_snr)
    }

    /// Closed form minus simulation, dB.
    pub fn snr_gap_db(&self) -> f64 {
        self.analytic_snr_db() - self.simulated.snr_db()
    }

    /// Bound minus simulation, bit/s/Hz.
    pub fn capacity_gap(&self) -> f64 {
        self.capacity_bound - self.simulated.fb_capacity.mean
    }
}

pub fn analytic_point(config: &ScenarioConfig, ue: Point3) -> Result<(f64, f64)> {
    let inputs =
        AnalyticInputs::new(&config.layout, &config.deployment, &config.blockage, &config.radio, ue)?;
    let snr = expected_snr_void(&inputs);
    let bound = fb_capacity_bound(snr, config.radio.blocklength, config.radio.decode_error)?;
    Ok((snr, bound))
}

/// Pairs Monte Carlo estimates with the closed forms at `points`.
pub fn compare_analytic(config: &ScenarioConfig, points: &[Point3]) -> Result<Vec<Comparison>> {
    let sims = run_points(config, points)?;
    sims.into_iter()
        .map(|simulated| {
            let (analytic_snr, capacity_bound) = analytic_point(config, simulated.ue)?;
            Ok(Comparison { simulated, analytic_snr, capacity_bound })
        })
        .collect()
}
