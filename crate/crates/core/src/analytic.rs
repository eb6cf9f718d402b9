//! Closed forms valid when blockages are dense enough that every IRS-UE link is
//! blocked: the expected received SNR and the Jensen upper bound on the expected
//! finite-blocklength capacity.
//!
//! Two independent evaluations of the expected SNR are kept. [`expected_snr_void`]
//! is the fully substituted closed form written in terms of raw geometry, and
//! [`expected_snr_void_assembled`] builds the same quantity from path losses,
//! mean block counts and the blockage moments. Their agreement checks the
//! substitution.
//!
//! The self term of each IRS uses `E[(sum_n |f_n|)^2] = n + n (n - 1) pi / 4` for
//! `n = N / M` Rayleigh coefficients, which after substitution gives the factor
//! `(N l^2 / (4 pi M)) (1 - pi/4 + pi N / (4 M))`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::blockage::BlockageModel;
use crate::channel::{fb_capacity, path_loss_direct, path_loss_indirect, RadioConfig};
use crate::error::Result;
use crate::geometry::{link_geometry, FactoryLayout, IrsDeployment, Point3};

/// Which power of the per-screen loss is averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Moment {
    /// `E[v^B]`
    Power,
    /// `E[sqrt(v^B)]`
    Amplitude,
}

/// Mean of `v^B` or `sqrt(v)^B` for `B ~ Poisson(mean_count)`.
pub fn blockage_moment(mean_count: f64, penetration: f64, moment: Moment) -> f64 {
    let per_screen = match moment {
        Moment::Power => penetration,
        Moment::Amplitude => penetration.sqrt(),
    };
    (-mean_count * (1.0 - per_screen)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrsTerm {
    pub bs_distance: f64,
    pub ue_distance: f64,
    pub ue_horizontal: f64,
    pub incidence: f64,
}

/// Everything the closed form depends on for one UE position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticInputs {
    pub transmit_snr: f64,
    pub tx_gain: f64,
    pub rx_gain: f64,
    pub wavelength: f64,
    pub shelf_loss: f64,
    pub penetration: f64,
    pub density: f64,
    pub screen_width: f64,
    pub max_blockage_height: f64,
    pub ue_height: f64,
    pub ceiling: f64,
    pub irs_height: f64,
    pub total_elements: usize,
    pub num_irs: usize,
    pub spacing: f64,
    pub direct_distance: f64,
    pub direct_horizontal: f64,
    pub irs: Vec<IrsTerm>,
}

impl AnalyticInputs {
    pub fn new(
        layout: &FactoryLayout,
        deployment: &IrsDeployment,
        blockage: &BlockageModel,
        radio: &RadioConfig,
        ue: Point3,
    ) -> Result<Self> {
        let geo = link_geometry(layout, deployment, ue)?;
        Ok(Self {
            transmit_snr: radio.transmit_snr(),
            tx_gain: radio.tx_gain,
            rx_gain: radio.rx_gain,
            wavelength: radio.wavelength,
            shelf_loss: blockage.shelf_loss,
            penetration: blockage.penetration,
            density: blockage.density,
            screen_width: blockage.width,
            max_blockage_height: blockage.max_height,
            ue_height: blockage.min_height,
            ceiling: layout.height,
            irs_height: deployment.height,
            total_elements: deployment.total_elements,
            num_irs: deployment.num_irs,
            spacing: deployment.element_spacing,
            direct_distance: geo.direct_distance,
            direct_horizontal: geo.direct_horizontal,
            irs: geo
                .irs
                .iter()
                .map(|l| IrsTerm {
                    bs_distance: l.bs_distance,
                    ue_distance: l.ue_distance,
                    ue_horizontal: l.ue_horizontal,
                    incidence: l.incidence,
                })
                .collect(),
        })
    }

    fn blockage_model(&self) -> BlockageModel {
        BlockageModel {
            density: self.density,
            width: self.screen_width,
            max_height: self.max_blockage_height,
            min_height: self.ue_height,
            penetration: self.penetration,
            shelf_loss: self.shelf_loss,
        }
    }
}

/// Expected received SNR (linear) when all IRS-UE links are blocked, written out
/// in terms of the raw geometry.
pub fn expected_snr_void(x: &AnalyticInputs) -> f64 {
    let v = x.penetration;
    let sv = v.sqrt();
    let (tb, tu) = (x.max_blockage_height, x.ue_height);
    let direct_rate = (tb - tu) * x.density * x.screen_width / ((x.ceiling - tu) * PI);
    let irs_rate = (tb - tu) * x.density * x.screen_width / ((x.irs_height - tu) * PI);
    let d0 = x.direct_distance;
    let d2d0 = x.direct_horizontal;

    let prefactor =
        x.transmit_snr * x.tx_gain * x.rx_gain * x.wavelength * x.wavelength / (16.0 * PI * PI);
    let mut total = x.shelf_loss / (d0 * d0) * (-direct_rate * d2d0 * (1.0 - v)).exp();
    if x.num_irs == 0 {
        return prefactor * total;
    }

    let n = x.total_elements as f64;
    let m = x.num_irs as f64;
    let l = x.spacing;
    // cos(phi_m) / (D_m d_m) and the amplitude-moment exponent of each IRS link.
    let ratio: Vec<f64> =
        x.irs.iter().map(|t| t.incidence.cos() / (t.bs_distance * t.ue_distance)).collect();
    let amp: Vec<f64> =
        x.irs.iter().map(|t| (-irs_rate * t.ue_horizontal * (1.0 - sv)).exp()).collect();

    let cross_direct: f64 = ratio.iter().zip(&amp).map(|(r, a)| r * a).sum();
    total += n * l * (PI * x.shelf_loss).sqrt() / (4.0 * m * d0)
        * (-direct_rate * d2d0 * (1.0 - sv)).exp()
        * cross_direct;

    let mut cross_irs = 0.0;
    for (i, ti) in x.irs.iter().enumerate() {
        for (j, tj) in x.irs.iter().enumerate() {
            if i != j {
                cross_irs += ratio[i]
                    * ratio[j]
                    * (-irs_rate * (ti.ue_horizontal + tj.ue_horizontal) * (1.0 - sv)).exp();
            }
        }
    }
    total += n * n * l * l / (16.0 * m * m) * cross_irs;

    let own: f64 = x
        .irs
        .iter()
        .zip(&ratio)
        .map(|(t, r)| r * r * (-irs_rate * t.ue_horizontal * (1.0 - v)).exp())
        .sum();
    total += n * l * l / (4.0 * PI * m) * (1.0 - PI / 4.0 + PI * n / (4.0 * m)) * own;

    prefactor * total
}

/// The same expectation assembled from path losses, Poisson block-count means and
/// the blockage moments, with Rayleigh magnitude moments `E|f| = sqrt(pi)/2` and
/// `E|f|^2 = 1`.
pub fn expected_snr_void_assembled(x: &AnalyticInputs) -> f64 {
    let model = x.blockage_model();
    let v = x.penetration;
    let beta0 = path_loss_direct(x.direct_distance, x.tx_gain, x.rx_gain, x.wavelength);
    let e_b0 = model
        .expected_blockers(x.direct_horizontal, x.ceiling)
        .expect("ceiling is above the UE");
    let mut acc = beta0 * x.shelf_loss * blockage_moment(e_b0, v, Moment::Power);
    if x.num_irs == 0 {
        return x.transmit_snr * acc;
    }

    let per = (x.total_elements / x.num_irs) as f64;
    let beta: Vec<f64> = x
        .irs
        .iter()
        .map(|t| {
            path_loss_indirect(
                t.bs_distance,
                t.ue_distance,
                t.incidence,
                x.spacing,
                x.tx_gain,
                x.rx_gain,
                x.wavelength,
            )
        })
        .collect();
    let e_b: Vec<f64> = x
        .irs
        .iter()
        .map(|t| model.expected_blockers(t.ue_horizontal, x.irs_height).expect("IRS above UE"))
        .collect();
    let mean_mag = PI.sqrt() / 2.0;

    // 2 sqrt(beta0 w) sum_m sqrt(beta_m) E[sqrt(v^(B0+Bm))] E[|f_bu|] n E[|f_ru|]
    for (bm, eb) in beta.iter().zip(&e_b) {
        acc += 2.0
            * (beta0 * x.shelf_loss).sqrt()
            * bm.sqrt()
            * blockage_moment(e_b0 + eb, v, Moment::Amplitude)
            * mean_mag
            * per
            * mean_mag;
    }
    for m in 0..beta.len() {
        for p in 0..beta.len() {
            if m != p {
                acc += (beta[m] * beta[p]).sqrt()
                    * blockage_moment(e_b[m] + e_b[p], v, Moment::Amplitude)
                    * (per * mean_mag).powi(2);
            }
        }
    }
    let own_moment = per + per * (per - 1.0) * mean_mag * mean_mag;
    for (bm, eb) in beta.iter().zip(&e_b) {
        acc += bm * blockage_moment(*eb, v, Moment::Power) * own_moment;
    }
    x.transmit_snr * acc
}

/// Jensen upper bound on the expected finite-blocklength capacity, given the
/// expected SNR.
pub fn fb_capacity_bound(expected_snr: f64, blocklength: f64, decode_error: f64) -> Result<f64> {
    fb_capacity(expected_snr, blocklength, decode_error)
}
