//! dB / linear conversions used at configuration boundaries.

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[inline]
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// A loss quoted as a positive number of dB (e.g. "20 dB") as a power ratio in (0, 1].
#[inline]
pub fn loss_db_to_ratio(loss_db: f64) -> f64 {
    db_to_linear(-loss_db)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_db_loss_is_one_percent() {
        assert!((loss_db_to_ratio(20.0) - 0.01).abs() < 1e-15);
        assert!((linear_to_db(db_to_linear(7.3)) - 7.3).abs() < 1e-12);
    }
}
