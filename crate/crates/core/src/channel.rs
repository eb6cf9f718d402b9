//! Direct and IRS-reflected channels for one UE, and the per-realization metrics
//! (received SNR, finite-blocklength capacity, outage).

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::blockage::LinkBlockCounts;
use crate::error::{invalid, Result};
use crate::geometry::ArrayAngles;
use crate::special::q_inverse;
use crate::units::{db_to_linear, SPEED_OF_LIGHT};

/// How the bandwidth enters the thermal-noise formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandwidthUnit {
    /// `10 log10(Z)` with `Z` in Hz: the physical kTB noise floor.
    #[default]
    Hz,
    /// `10 log10(Z)` with `Z` in MHz, about 60 dB lower.
    Mhz,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioConfig {
    pub frequency: f64,
    pub wavelength: f64,
    /// Linear antenna gains.
    pub tx_gain: f64,
    pub rx_gain: f64,
    pub tx_power_dbm: f64,
    pub noise_figure_db: f64,
    pub bandwidth_hz: f64,
    pub bandwidth_unit: BandwidthUnit,
    /// Blocklength in nats.
    pub blocklength: f64,
    pub decode_error: f64,
    /// Rate threshold for outage, bit/s/Hz.
    pub rate_threshold: f64,
}

impl RadioConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        frequency: f64,
        tx_gain_dbi: f64,
        rx_gain_dbi: f64,
        tx_power_dbm: f64,
        noise_figure_db: f64,
        bandwidth_hz: f64,
        blocklength: f64,
        decode_error: f64,
        rate_threshold: f64,
    ) -> Result<Self> {
        if !(frequency > 0.0) || !(bandwidth_hz > 0.0) {
            return Err(invalid("frequency and bandwidth must be positive"));
        }
        if !(decode_error > 0.0 && decode_error < 0.5) {
            return Err(invalid("decoding error probability must lie in (0, 0.5)"));
        }
        if !(blocklength > 0.0) {
            return Err(invalid("blocklength must be positive"));
        }
        if !(rate_threshold >= 0.0) {
            return Err(invalid("rate threshold must be non-negative"));
        }
        Ok(Self {
            frequency,
            wavelength: SPEED_OF_LIGHT / frequency,
            tx_gain: db_to_linear(tx_gain_dbi),
            rx_gain: db_to_linear(rx_gain_dbi),
            tx_power_dbm,
            noise_figure_db,
            bandwidth_hz,
            bandwidth_unit: BandwidthUnit::Hz,
            blocklength,
            decode_error,
            rate_threshold,
        })
    }

    /// 28 GHz, 24/10 dBi, 30 dBm, 9 dB noise figure, 400 MHz, S = 200 nats,
    /// error 1e-9, threshold 0.1 bit/s/Hz.
    pub fn reference() -> Self {
        Self::new(28e9, 24.0, 10.0, 30.0, 9.0, 400e6, 200.0, 1e-9, 0.1)
            .expect("reference radio parameters are valid")
    }

    /// Half-wavelength element spacing.
    pub fn half_wavelength(&self) -> f64 {
        self.wavelength / 2.0
    }

    pub fn noise_power_dbm(&self) -> f64 {
        let z = match self.bandwidth_unit {
            BandwidthUnit::Hz => self.bandwidth_hz,
            BandwidthUnit::Mhz => self.bandwidth_hz / 1e6,
        };
        noise_power_dbm(self.noise_figure_db, z)
    }

    pub fn transmit_snr_db(&self) -> f64 {
        transmit_snr_db(self.tx_power_dbm, self.noise_power_dbm())
    }

    pub fn transmit_snr(&self) -> f64 {
        db_to_linear(self.transmit_snr_db())
    }

    /// Combined power gain `G_T G_R mu^2`.
    pub fn gain_wavelength_sq(&self) -> f64 {
        self.tx_gain * self.rx_gain * self.wavelength * self.wavelength
    }
}

/// Thermal noise power in dBm for a noise figure in dB and bandwidth `z`.
pub fn noise_power_dbm(noise_figure_db: f64, z: f64) -> f64 {
    -174.0 + noise_figure_db + 10.0 * z.log10()
}

pub fn transmit_snr_db(tx_power_dbm: f64, noise_dbm: f64) -> f64 {
    tx_power_dbm - noise_dbm
}

/// Free-space power gain of the BS-UE link.
pub fn path_loss_direct(distance: f64, tx_gain: f64, rx_gain: f64, wavelength: f64) -> f64 {
    tx_gain * rx_gain * wavelength * wavelength / (4.0 * PI * distance).powi(2)
}

/// Power gain of the BS-IRS-UE path through one element of spacing `spacing`.
pub fn path_loss_indirect(
    bs_distance: f64,
    ue_distance: f64,
    incidence: f64,
    spacing: f64,
    tx_gain: f64,
    rx_gain: f64,
    wavelength: f64,
) -> f64 {
    let c = incidence.cos();
    tx_gain * rx_gain * wavelength * wavelength / (4.0 * PI).powi(3)
        * (spacing / (bs_distance * ue_distance)).powi(2)
        * c
        * c
}

/// Unit-modulus planar-array response, row-major over `horizontal x vertical`
/// elements (element `(a, b)` sits at index `a * vertical + b`).
pub fn steering_vector(
    angles: ArrayAngles,
    horizontal: usize,
    vertical: usize,
    spacing: f64,
    wavelength: f64,
) -> Vec<Complex64> {
    let k = 2.0 * PI * spacing * angles.polar.sin() / wavelength;
    let (sh, ch) = angles.azimuth.sin_cos();
    let mut out = Vec::with_capacity(horizontal * vertical);
    for a in 0..horizontal {
        for b in 0..vertical {
            out.push(Complex64::from_polar(1.0, k * (a as f64 * ch + b as f64 * sh)));
        }
    }
    out
}

/// Rician K-factor (linear) of an IRS-UE link of length `distance`; zero when
/// the link is blocked.
pub fn rician_factor(distance: f64, is_los: bool) -> f64 {
    if is_los {
        db_to_linear(7.34 - 0.046 * distance)
    } else {
        0.0
    }
}

/// Circularly symmetric complex Gaussian with unit variance.
#[inline]
pub fn sample_cn<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// IRS-UE channel: `sqrt(K/(1+K)) los + sqrt(1/(1+K)) w`, `w` i.i.d. CN(0, 1).
pub fn sample_ru_channel<R: Rng + ?Sized>(
    k: f64,
    los_steering: &[Complex64],
    rng: &mut R,
) -> Vec<Complex64> {
    let (los, nlos) = rician_weights(k);
    los_steering.iter().map(|&s| s * los + sample_cn(rng) * nlos).collect()
}

#[inline]
fn rician_weights(k: f64) -> (f64, f64) {
    if k.is_infinite() {
        (1.0, 0.0)
    } else {
        ((k / (1.0 + k)).sqrt(), (1.0 / (1.0 + k)).sqrt())
    }
}

/// `sum_n |f_n|` for `elements` independent Rician coefficients with factor `k`
/// and unit-modulus LOS part.
///
/// The NLOS part is circularly symmetric, so `|s e^{j psi} + w|` has the same law
/// as `|s + w|`; the LOS phases (and hence the steering angles) drop out of the
/// magnitude sum. With `k = 0` each magnitude is `sqrt(Exp(1))`.
pub fn sample_magnitude_sum<R: Rng + ?Sized>(k: f64, elements: usize, rng: &mut R) -> f64 {
    if k == 0.0 {
        (0..elements)
            .map(|_| {
                let e: f64 = Exp1.sample(rng);
                e.sqrt()
            })
            .sum()
    } else {
        let (los, nlos) = rician_weights(k);
        let sd = nlos * std::f64::consts::FRAC_1_SQRT_2;
        (0..elements)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                let (x, y) = (los + sd * re, sd * im);
                (x * x + y * y).sqrt()
            })
            .sum()
    }
}

/// `|f_bu|` for the Rayleigh direct link.
#[inline]
pub fn sample_rayleigh_magnitude<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let e: f64 = Exp1.sample(rng);
    e.sqrt()
}

/// Phase shifts that align every cascaded element term with the direct channel.
/// A zero-magnitude coefficient contributes no phase of its own.
pub fn optimal_phases(
    f_bu: Complex64,
    f_ru: &[Vec<Complex64>],
    f_br: &[Vec<Complex64>],
) -> Vec<Vec<f64>> {
    let arg = |c: Complex64| if c == Complex64::new(0.0, 0.0) { 0.0 } else { c.arg() };
    let reference = arg(f_bu);
    f_ru.iter()
        .zip(f_br)
        .map(|(ru, br)| ru.iter().zip(br).map(|(&r, &b)| reference - arg(r) - arg(b)).collect())
        .collect()
}

/// Link-level gains that scale the fading coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkGains {
    /// Direct path loss.
    pub direct: f64,
    /// Per-element path loss of each IRS path.
    pub irs: Vec<f64>,
    pub shelf_loss: f64,
    pub penetration: f64,
}

impl LinkGains {
    /// Amplitude of the direct path after `blocks` screens.
    pub fn direct_amplitude(&self, blocks: u32) -> f64 {
        (self.direct * self.shelf_loss * self.penetration.powi(blocks as i32)).sqrt()
    }

    pub fn irs_amplitude(&self, m: usize, blocks: u32) -> f64 {
        (self.irs[m] * self.penetration.powi(blocks as i32)).sqrt()
    }
}

/// One joint draw of all fading coefficients with its block counts and IRS phases.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub f_bu: Complex64,
    pub f_ru: Vec<Vec<Complex64>>,
    /// BS-IRS LOS channels (unit modulus).
    pub f_br: Vec<Vec<Complex64>>,
    pub counts: LinkBlockCounts,
    pub phases: Vec<Vec<f64>>,
    pub rician_k: Vec<f64>,
}

impl ChannelRealization {
    /// Draws the fading for given block counts. `ru_steering[m]` and
    /// `br_steering[m]` are the array responses towards the UE and the BS;
    /// `los_k[m]` is the K-factor IRS `m` would have when unblocked.
    pub fn sample<R: Rng + ?Sized>(
        counts: LinkBlockCounts,
        los_k: &[f64],
        ru_steering: &[Vec<Complex64>],
        br_steering: &[Vec<Complex64>],
        rng: &mut R,
    ) -> Self {
        let f_bu = sample_cn(rng);
        let rician_k: Vec<f64> = counts
            .irs
            .iter()
            .zip(los_k)
            .map(|(&b, &k)| if b == 0 { k } else { 0.0 })
            .collect();
        let f_ru = rician_k
            .iter()
            .zip(ru_steering)
            .map(|(&k, s)| sample_ru_channel(k, s, rng))
            .collect();
        let f_br = br_steering.iter().map(|s| s.iter().map(|c| c.conj()).collect()).collect();
        let mut out = Self { f_bu, f_ru, f_br, counts, phases: Vec::new(), rician_k };
        out.configure_phases();
        out
    }

    pub fn configure_phases(&mut self) {
        self.phases = optimal_phases(self.f_bu, &self.f_ru, &self.f_br);
    }

    /// `f_0 + f_Xi` from the raw complex products with the configured phases.
    pub fn combined_channel(&self, gains: &LinkGains) -> Complex64 {
        let direct = self.f_bu * gains.direct_amplitude(self.counts.direct);
        self.f_ru
            .iter()
            .zip(&self.f_br)
            .zip(&self.phases)
            .enumerate()
            .fold(direct, |acc, (m, ((ru, br), theta))| {
                let cascade: Complex64 = ru
                    .iter()
                    .zip(br)
                    .zip(theta)
                    .map(|((&r, &b), &t)| r * Complex64::from_polar(1.0, t) * b)
                    .sum();
                acc + cascade * gains.irs_amplitude(m, self.counts.irs[m])
            })
    }

    /// Coherently combined amplitude assuming optimal phases:
    /// `a_0 |f_bu| + sum_m a_m sum_n |f_ru,m,n| |F_br,m,n|`.
    pub fn aligned_amplitude(&self, gains: &LinkGains) -> f64 {
        let direct = gains.direct_amplitude(self.counts.direct) * self.f_bu.norm();
        self.f_ru.iter().zip(&self.f_br).enumerate().fold(direct, |acc, (m, (ru, br))| {
            let s: f64 = ru.iter().zip(br).map(|(r, b)| r.norm() * b.norm()).sum();
            acc + gains.irs_amplitude(m, self.counts.irs[m]) * s
        })
    }

    /// Received SNR with optimal phases.
    pub fn received_snr(&self, gains: &LinkGains, transmit_snr: f64) -> f64 {
        transmit_snr * self.aligned_amplitude(gains).powi(2)
    }
}

/// Received SNR from the aligned amplitude pieces: `rho (a_0 |f_bu| + sum_m a_m S_m)^2`
/// where `S_m` is the magnitude sum of IRS `m`.
pub fn received_snr(
    transmit_snr: f64,
    direct_amplitude: f64,
    direct_magnitude: f64,
    irs: impl IntoIterator<Item = (f64, f64)>,
) -> f64 {
    let total = irs
        .into_iter()
        .fold(direct_amplitude * direct_magnitude, |acc, (a, s)| acc + a * s);
    transmit_snr * total * total
}

/// Normal-approximation achievable rate at finite blocklength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FbCapacity {
    pub blocklength: f64,
    q_inv: f64,
}

impl FbCapacity {
    pub fn new(blocklength: f64, decode_error: f64) -> Result<Self> {
        if !(blocklength > 0.0) {
            return Err(invalid("blocklength must be positive"));
        }
        Ok(Self { blocklength, q_inv: q_inverse(decode_error)? })
    }

    /// `log2(1 + g) - sqrt(V / S) Q^-1(eps) / ln 2` with dispersion
    /// `V = 1 - 1 / (1 + g)^2`. May be negative at low SNR.
    pub fn raw(&self, snr: f64) -> f64 {
        let dispersion = -(-2.0 * snr.ln_1p()).exp_m1();
        snr.ln_1p() / LN_2 - (dispersion / self.blocklength).sqrt() * self.q_inv / LN_2
    }

    /// Achievable rate in bit/s/Hz, floored at zero where the normal
    /// approximation goes negative.
    pub fn rate(&self, snr: f64) -> f64 {
        self.raw(snr).max(0.0)
    }
}

/// Finite-blocklength capacity (bit/s/Hz) at SNR `snr`, blocklength `blocklength`
/// nats and decoding error `decode_error`.
pub fn fb_capacity(snr: f64, blocklength: f64, decode_error: f64) -> Result<f64> {
    if !(snr >= 0.0) {
        return Err(invalid("SNR must be non-negative"));
    }
    Ok(FbCapacity::new(blocklength, decode_error)?.rate(snr))
}

/// Power threshold on `|f_0 + f_Xi|^2` below which rate `rate` is not supported.
pub fn outage_threshold(rate: f64, transmit_snr: f64) -> f64 {
    (2f64.powf(rate) - 1.0) / transmit_snr
}

pub fn outage_indicator(channel_power: f64, rate: f64, transmit_snr: f64) -> bool {
    channel_power < outage_threshold(rate, transmit_snr)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256PlusPlus;

    fn rng(seed: u64) -> Xoshiro256PlusPlus {
        Xoshiro256PlusPlus::seed_from_u64(seed)
    }

    #[test]
    fn noise_and_transmit_snr() {
        assert_relative_eq!(noise_power_dbm(9.0, 400e6), -78.97940008672038, epsilon = 1e-12);
        assert_relative_eq!(transmit_snr_db(30.0, noise_power_dbm(9.0, 400e6)), 108.97940008672038, epsilon = 1e-12);
        assert_eq!(noise_power_dbm(0.0, 1.0), -174.0);
        let mut r = RadioConfig::reference();
        assert_relative_eq!(r.noise_power_dbm(), -78.97940008672038, epsilon = 1e-12);
        r.bandwidth_unit = BandwidthUnit::Mhz;
        assert_relative_eq!(r.noise_power_dbm(), -138.97940008672038, epsilon = 1e-12);
    }

    #[test]
    fn direct_path_loss() {
        let r = RadioConfig::reference();
        let d0 = 120.25f64.sqrt();
        let b = path_loss_direct(d0, r.tx_gain, r.rx_gain, r.wavelength);
        assert_relative_eq!(b, 1.516423583861808e-5, max_relative = 1e-12);
        assert_relative_eq!(path_loss_direct(2.0 * d0, r.tx_gain, r.rx_gain, r.wavelength), b / 4.0, max_relative = 1e-14);
        assert_relative_eq!(path_loss_direct(3.0, 1.0, 1.0, 4.0 * PI), 1.0 / 9.0, max_relative = 1e-14);
    }

    #[test]
    fn indirect_path_loss() {
        let r = RadioConfig::reference();
        let l = r.half_wavelength();
        let phi = 0.9987523388778447f64.acos();
        let b = path_loss_indirect(20.0, 10.6, phi, l, r.tx_gain, r.rx_gain, r.wavelength);
        assert_relative_eq!(b, 9.230070108627231e-14, max_relative = 1e-10);
        let swapped = path_loss_indirect(10.6, 20.0, phi, l, r.tx_gain, r.rx_gain, r.wavelength);
        assert_relative_eq!(b, swapped, max_relative = 1e-15);
        assert!(path_loss_indirect(20.0, 10.6, PI / 2.0, l, 1.0, 1.0, 1.0) < 1e-30);
        let mut last = f64::INFINITY;
        for k in 0..50 {
            let v = path_loss_indirect(20.0, 10.0, k as f64 * 0.03, l, 1.0, 1.0, 1.0);
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn steering_vector_cases() {
        let a = ArrayAngles { azimuth: 0.3, polar: 0.0 };
        assert!(steering_vector(a, 4, 3, 0.5, 1.0).iter().all(|c| (c - Complex64::new(1.0, 0.0)).norm() < 1e-15));
        assert_eq!(steering_vector(a, 1, 1, 0.5, 1.0), vec![Complex64::new(1.0, 0.0)]);
        let a = ArrayAngles { azimuth: 0.0, polar: PI / 2.0 };
        let v = steering_vector(a, 4, 2, 0.5, 1.0);
        for (n, c) in v.iter().enumerate() {
            let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((c - Complex64::new(sign, 0.0)).norm() < 1e-12, "{n}: {c}");
            assert_relative_eq!(c.norm(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn rician_k_values() {
        assert_relative_eq!(rician_factor(10.0, true), 4.875284901033863, max_relative = 1e-13);
        assert_eq!(rician_factor(10.0, false), 0.0);
        assert_relative_eq!(rician_factor(7.34 / 0.046, true), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ru_channel_second_moment() {
        let steer = vec![Complex64::from_polar(1.0, 0.7); 100];
        for k in [0.0, 4.875, 50.0] {
            let mut r = rng(9);
            let n = 10_000;
            let mut s = 0.0;
            let mut s2 = 0.0;
            for _ in 0..n {
                for c in sample_ru_channel(k, &steer, &mut r) {
                    let p = c.norm_sqr();
                    s += p;
                    s2 += p * p;
                }
            }
            let count = (n * 100) as f64;
            let mean = s / count;
            let se = ((s2 / count - mean * mean) / count).sqrt();
            assert!((mean - 1.0).abs() < 3.0 * se, "K {k}: {mean} +- {se}");
        }
        let det = sample_ru_channel(f64::INFINITY, &steer, &mut rng(1));
        assert_eq!(det, steer);
    }

    #[test]
    fn magnitude_sum_matches_full_channel_moments() {
        // Mean magnitude of a Rician coefficient: sqrt(pi/(4(1+K))) L_{1/2}(-K).
        // Compare the magnitude-only sampler against explicit complex draws.
        for k in [0.0, 4.875] {
            let steer = steering_vector(ArrayAngles { azimuth: 0.4, polar: 0.9 }, 4, 5, 0.5, 1.0);
            let (mut a, mut b, mut a2, mut b2) = (0.0, 0.0, 0.0, 0.0);
            let n = 40_000;
            let (mut ra, mut rb) = (rng(5), rng(6));
            for _ in 0..n {
                let x: f64 = sample_ru_channel(k, &steer, &mut ra).iter().map(|c| c.norm()).sum();
                let y = sample_magnitude_sum(k, steer.len(), &mut rb);
                a += x;
                b += y;
                a2 += x * x;
                b2 += y * y;
            }
            let nf = n as f64;
            let (ma, mb) = (a / nf, b / nf);
            let se = ((a2 / nf - ma * ma + b2 / nf - mb * mb) / nf).sqrt();
            assert!((ma - mb).abs() < 4.0 * se, "K {k}: {ma} vs {mb}");
            if k == 0.0 {
                let want = 20.0 * PI.sqrt() / 2.0;
                assert!((mb - want).abs() < 4.0 * se);
            }
        }
    }

    fn random_realization(m: usize, per: usize, seed: u64) -> (ChannelRealization, LinkGains) {
        let mut r = rng(seed);
        let steer: Vec<Vec<Complex64>> = (0..m)
            .map(|i| steering_vector(ArrayAngles { azimuth: 0.1 * i as f64, polar: 0.5 }, per, 1, 0.5, 1.0))
            .collect();
        let br: Vec<Vec<Complex64>> = (0..m)
            .map(|i| steering_vector(ArrayAngles { azimuth: -0.2, polar: 0.3 + 0.1 * i as f64 }, per, 1, 0.5, 1.0))
            .collect();
        let counts = LinkBlockCounts {
            direct: r.random_range(0..3),
            irs: (0..m).map(|_| r.random_range(0..3)).collect(),
        };
        let gains = LinkGains {
            direct: 1.5e-5,
            irs: (0..m).map(|i| 1e-13 * (1.0 + i as f64)).collect(),
            shelf_loss: 0.01,
            penetration: 0.01,
        };
        let k: Vec<f64> = (0..m).map(|i| 2.0 + i as f64).collect();
        (ChannelRealization::sample(counts, &k, &steer, &br, &mut r), gains)
    }

    #[test]
    fn phases_align_every_cascade_term() {
        let (real, _) = random_realization(3, 16, 11);
        let target = real.f_bu.arg();
        for m in 0..3 {
            for n in 0..16 {
                let term = real.f_ru[m][n] * Complex64::from_polar(1.0, real.phases[m][n]) * real.f_br[m][n];
                let diff = (term.arg() - target + PI).rem_euclid(2.0 * PI) - PI;
                assert!(diff.abs() < 1e-9);
            }
        }
        let one = vec![vec![Complex64::new(2.0, 0.0); 3]];
        assert_eq!(optimal_phases(Complex64::new(1.0, 0.0), &one, &one), vec![vec![0.0; 3]]);
    }

    #[test]
    fn coherent_combining_identity() {
        for seed in 0..200 {
            let (real, gains) = random_realization(4, 30, seed);
            let complex_form = 1e11 * real.combined_channel(&gains).norm_sqr();
            let magnitude_form = real.received_snr(&gains, 1e11);
            assert_relative_eq!(complex_form, magnitude_form, max_relative = 1e-9);
            // The amplitude-level expansion.
            let pieces = received_snr(
                1e11,
                gains.direct_amplitude(real.counts.direct),
                real.f_bu.norm(),
                (0..4).map(|m| {
                    (gains.irs_amplitude(m, real.counts.irs[m]), real.f_ru[m].iter().map(|c| c.norm()).sum())
                }),
            );
            assert_relative_eq!(pieces, magnitude_form, max_relative = 1e-12);
        }
    }

    #[test]
    fn snr_degenerate_cases() {
        assert_eq!(received_snr(1e10, 0.3, 0.0, [(0.2, 0.0), (0.1, 0.0)]), 0.0);
        assert_relative_eq!(received_snr(1e10, 2e-3, 0.7, std::iter::empty()), 1e10 * 4e-6 * 0.49, max_relative = 1e-14);
    }

    #[test]
    // 0.3183 is where the rate crosses zero, not 1/pi.
    #[allow(clippy::approx_constant)]
    fn fb_capacity_examples() {
        assert_eq!(fb_capacity(0.0, 200.0, 1e-9).unwrap(), 0.0);
        assert_relative_eq!(fb_capacity(1.0, 200.0, 1e-9).unwrap(), 0.47011373722295072, max_relative = 1e-10);
        assert_relative_eq!(fb_capacity(10.0, 200.0, 1e-9).unwrap(), 2.8501052581973066, max_relative = 1e-10);
        assert_relative_eq!(fb_capacity(1000.0, 200.0, 1e-5).unwrap(), 9.53214814250997, max_relative = 1e-10);
        let fb = FbCapacity::new(200.0, 1e-9).unwrap();
        // The approximation dips below zero before crossing back near SNR 0.318.
        assert!(fb.raw(0.1) < 0.0);
        assert_eq!(fb.rate(0.1), 0.0);
        assert!(fb.raw(0.3183) < 0.0 && fb.raw(0.3184) > 0.0);
        assert!(fb_capacity(-1.0, 200.0, 1e-9).is_err());
        assert!(fb_capacity(1.0, 200.0, 0.5).is_err());
    }

    #[test]
    fn fb_capacity_tends_to_shannon() {
        let fb = FbCapacity::new(1e16, 1e-9).unwrap();
        for k in 0..=90 {
            let g = 10f64.powf(-3.0 + k as f64 / 10.0);
            assert!((fb.rate(g) - (1.0 + g).log2()).abs() <= 1e-6);
        }
    }

    #[test]
    fn fb_capacity_monotone_on_grid() {
        let snrs: Vec<f64> = (0..=120).map(|k| 10f64.powf(-3.0 + k as f64 / 20.0)).collect();
        for s in [50.0, 200.0, 1000.0, 1e5] {
            let fb = FbCapacity::new(s, 1e-9).unwrap();
            let fb_longer = FbCapacity::new(2.0 * s, 1e-9).unwrap();
            for w in snrs.windows(2) {
                assert!(fb.rate(w[1]) >= fb.rate(w[0]));
                assert!(fb.rate(w[1]) <= (1.0 + w[1]).log2());
                assert!(fb_longer.rate(w[1]) >= fb.rate(w[1]));
            }
        }
    }

    #[test]
    fn outage_boundaries() {
        assert!(!outage_indicator(0.0, 0.0, 1e10));
        let rho = 10f64.powf(10.898);
        let t = outage_threshold(0.1, rho);
        assert!(!outage_indicator(t, 0.1, rho));
        assert!(outage_indicator(t * (1.0 - 1e-12), 0.1, rho));
        assert_relative_eq!(t, (2f64.powf(0.1) - 1.0) / rho, max_relative = 1e-15);
        assert!(outage_indicator(1e-13, 0.1, rho));
    }

    proptest! {
        #[test]
        fn fb_below_shannon(g in 1e-6f64..1e8, s in 1.0f64..1e6, eps in 1e-12f64..0.49) {
            let fb = FbCapacity::new(s, eps).unwrap();
            prop_assert!(fb.raw(g) <= (1.0 + g).log2());
            prop_assert!(fb.rate(g) <= (1.0 + g).log2());
        }
    }
}
