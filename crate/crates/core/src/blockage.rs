//! Random screen blockages.
//!
//! Screens are vertical rectangles of fixed width standing on the floor. Their
//! bottom-line centres form a Poisson point process, orientations are uniform in
//! `[0, pi]` and heights uniform between the UE antenna height and a maximum.
//! A link is blocked by a screen when the link's floor projection crosses the
//! screen's bottom segment and the screen is at least as tall as the link at the
//! crossing point.

use std::f64::consts::PI;
use std::io::{self, Write};

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{FactoryLayout, Point3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockageModel {
    /// Screens per square metre.
    pub density: f64,
    pub width: f64,
    pub max_height: f64,
    /// Equal to the UE antenna height.
    pub min_height: f64,
    /// Power ratio surviving one screen.
    pub penetration: f64,
    /// Power ratio surviving the fixed shelf on the BS-UE link.
    pub shelf_loss: f64,
}

impl BlockageModel {
    pub fn new(
        density: f64,
        width: f64,
        max_height: f64,
        min_height: f64,
        penetration: f64,
        shelf_loss: f64,
    ) -> Result<Self> {
        if !(density >= 0.0 && density.is_finite()) {
            return Err(invalid("blockage density must be non-negative"));
        }
        if !(width > 0.0) {
            return Err(invalid("blockage width must be positive"));
        }
        if !(min_height < max_height) {
            return Err(invalid("blockage height range is empty"));
        }
        for (name, v) in [("penetration", penetration), ("shelf loss", shelf_loss)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(invalid(format!("{name} ratio {v} must lie in (0, 1]")));
            }
        }
        Ok(Self { density, width, max_height, min_height, penetration, shelf_loss })
    }

    /// Mean number of screens blocking a link whose floor projection has length
    /// `horizontal` and whose upper end is at `top` (the lower end sits at the UE
    /// antenna height).
    ///
    /// The floor projection is crossed by `2 density width horizontal / pi`
    /// screens on average, and a crossing screen is tall enough with probability
    /// `(max_height - min_height) / (2 (top - min_height))`.
    pub fn expected_blockers(&self, horizontal: f64, top: f64) -> Result<f64> {
        if top <= self.min_height {
            return Err(invalid(format!(
                "link top {top} must be above the UE height {}",
                self.min_height
            )));
        }
        if !(horizontal >= 0.0) {
            return Err(invalid("horizontal distance must be non-negative"));
        }
        Ok((self.max_height - self.min_height) / (top - self.min_height) * self.density
            * self.width
            * horizontal
            / PI)
    }
}

/// `P(no screen blocks the link)` for a Poisson count with the given mean.
pub fn los_probability(expected_count: f64) -> f64 {
    (-expected_count).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Screen {
    pub center: [f64; 2],
    pub orientation: f64,
    pub height: f64,
}

/// Axis-aligned floor rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloorWindow {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl FloorWindow {
    pub fn floor(layout: &FactoryLayout) -> Self {
        Self { x0: 0.0, x1: layout.length, y0: 0.0, y1: layout.width }
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0).max(0.0) * (self.y1 - self.y0).max(0.0)
    }

    /// Smallest window containing every point within `margin` of the floor
    /// projections of `points`.
    pub fn around(points: &[Point3], margin: f64) -> Self {
        let mut w = Self {
            x0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y0: f64::INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for p in points {
            w.x0 = w.x0.min(p.x - margin);
            w.x1 = w.x1.max(p.x + margin);
            w.y0 = w.y0.min(p.y - margin);
            w.y1 = w.y1.max(p.y + margin);
        }
        w
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self {
            x0: self.x0.max(other.x0),
            x1: self.x1.min(other.x1),
            y0: self.y0.max(other.y0),
            y1: self.y1.min(other.y1),
        }
    }
}

/// One realized set of screens.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BlockageField {
    pub screen_width: f64,
    pub screens: Vec<Screen>,
}

/// Draws a field over the whole factory floor.
pub fn sample_field<R: Rng + ?Sized>(
    model: &BlockageModel,
    layout: &FactoryLayout,
    rng: &mut R,
) -> BlockageField {
    sample_field_in(model, FloorWindow::floor(layout), rng)
}

/// Draws the restriction of the screen process to `window`. Screens whose
/// centres fall outside `window` are simply absent, so this is exact for any
/// link whose `width / 2` neighbourhood lies inside the window.
pub fn sample_field_in<R: Rng + ?Sized>(
    model: &BlockageModel,
    window: FloorWindow,
    rng: &mut R,
) -> BlockageField {
    let mean = model.density * window.area();
    let count = if mean > 0.0 {
        Poisson::new(mean).map(|p| p.sample(rng) as usize).unwrap_or(0)
    } else {
        0
    };
    let screens = (0..count)
        .map(|_| Screen {
            center: [
                window.x0 + (window.x1 - window.x0) * rng.random::<f64>(),
                window.y0 + (window.y1 - window.y0) * rng.random::<f64>(),
            ],
            orientation: PI * rng.random::<f64>(),
            height: model.min_height + (model.max_height - model.min_height) * rng.random::<f64>(),
        })
        .collect();
    BlockageField { screen_width: model.width, screens }
}

/// Fraction along `p -> q` at which it crosses the closed segment `a -> b`, if it
/// does. Parallel segments never count as crossing.
fn crossing_fraction(p: [f64; 2], q: [f64; 2], a: [f64; 2], b: [f64; 2]) -> Option<f64> {
    let r = [q[0] - p[0], q[1] - p[1]];
    let s = [b[0] - a[0], b[1] - a[1]];
    let denom = r[0] * s[1] - r[1] * s[0];
    if denom == 0.0 {
        return None;
    }
    let ap = [a[0] - p[0], a[1] - p[1]];
    let t = (ap[0] * s[1] - ap[1] * s[0]) / denom;
    let u = (ap[0] * r[1] - ap[1] * r[0]) / denom;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then_some(t)
}

impl BlockageField {
    pub fn empty(screen_width: f64) -> Self {
        Self { screen_width, screens: Vec::new() }
    }

    /// Number of screens blocking the link from `top` down to `ue`.
    pub fn count_intersections(&self, top: Point3, ue: Point3) -> u32 {
        let half = 0.5 * self.screen_width;
        let (p, q) = ([top.x, top.y], [ue.x, ue.y]);
        // Bounding-box prefilter on the link projection.
        let (xmin, xmax) = (p[0].min(q[0]) - half, p[0].max(q[0]) + half);
        let (ymin, ymax) = (p[1].min(q[1]) - half, p[1].max(q[1]) + half);
        let mut count = 0;
        for s in &self.screens {
            let [cx, cy] = s.center;
            if cx < xmin || cx > xmax || cy < ymin || cy > ymax {
                continue;
            }
            let (sin, cos) = s.orientation.sin_cos();
            let a = [cx - half * cos, cy - half * sin];
            let b = [cx + half * cos, cy + half * sin];
            if let Some(t) = crossing_fraction(p, q, a, b) {
                let link_height = top.z + t * (ue.z - top.z);
                if s.height >= link_height {
                    count += 1;
                }
            }
        }
        count
    }

    /// Writes `center_x,center_y,orientation_rad,height_m` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "center_x,center_y,orientation_rad,height_m")?;
        for s in &self.screens {
            writeln!(out, "{},{},{},{}", s.center[0], s.center[1], s.orientation, s.height)?;
        }
        Ok(())
    }
}

/// Block counts of the direct link and of every IRS-UE link.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LinkBlockCounts {
    pub direct: u32,
    pub irs: Vec<u32>,
}

impl LinkBlockCounts {
    /// Bitmask of the IRS links that are unblocked.
    pub fn los_mask(&self) -> u32 {
        self.irs
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 0)
            .fold(0, |mask, (m, _)| mask | (1 << m))
    }
}

/// Largest IRS count for which blockage cases are enumerated.
pub const MAX_ENUMERATED_IRS: usize = 20;

/// One LOS/NLOS assignment over the IRS-UE links and its probability. Bit `m` of
/// `los_mask` is set when link `m` is unblocked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockageCase {
    pub los_mask: u32,
    pub probability: f64,
}

/// Probability of the case whose unblocked links are `los_mask`, given
/// independent per-link LOS probabilities `p`.
pub fn case_probability(los_mask: u32, p: &[f64]) -> f64 {
    p.iter()
        .enumerate()
        .map(|(m, &pm)| if los_mask >> m & 1 == 1 { pm } else { 1.0 - pm })
        .product()
}

/// All `2^M` cases in mask order.
pub fn enumerate_cases(p: &[f64]) -> Result<Vec<BlockageCase>> {
    if p.len() > MAX_ENUMERATED_IRS {
        return Err(crate::Error::UnsupportedMode(format!(
            "{} IRS links exceed the enumeration limit of {MAX_ENUMERATED_IRS}",
            p.len()
        )));
    }
    if let Some(bad) = p.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(invalid(format!("LOS probability {bad} outside [0, 1]")));
    }
    Ok((0..1u32 << p.len())
        .map(|los_mask| BlockageCase { los_mask, probability: case_probability(los_mask, p) })
        .collect())
}

/// Poisson count with the given mean conditioned on being at least one.
pub fn sample_blocked_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u32> {
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(invalid(format!("blocked-link mean count {mean} must be positive")));
    }
    if mean >= 1.0 {
        // Rejection: accepts with probability 1 - e^-mean >= 0.63.
        let poisson = Poisson::new(mean).map_err(|e| invalid(e.to_string()))?;
        loop {
            let k = poisson.sample(rng) as u32;
            if k >= 1 {
                return Ok(k);
            }
        }
    }
    // Inverse CDF of the truncated pmf.
    let mut pmf = mean * (-mean).exp() / -(-mean).exp_m1();
    let mut cdf = pmf;
    let u: f64 = rng.random();
    let mut k = 1u32;
    while u > cdf && pmf > 0.0 {
        k += 1;
        pmf *= mean / k as f64;
        cdf += pmf;
    }
    Ok(k)
}

/// Plain Poisson count (zero allowed).
pub fn sample_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u32 {
    if mean > 0.0 {
        Poisson::new(mean).map(|p| p.sample(rng) as u32).unwrap_or(0)
    } else {
        0
    }
}
