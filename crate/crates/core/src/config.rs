//! Run configuration: truncation precision, guard band, family indices,
//! and the seed for randomized isomorphism searches.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Truncation precision N: exponents >= N are unknown.
    pub precision: i64,
    /// Guard band G: span identities are asserted only below N - G.
    pub guard: i64,
    /// Family indices n to instantiate (parity picks the variant).
    pub n_values: Vec<u32>,
    /// Seed for the generic-element search in isomorphism testing.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: 40,
            guard: 8,
            n_values: (1..=6).collect(),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn with_precision(precision: i64) -> Self {
        RunConfig {
            precision,
            ..Default::default()
        }
    }

    /// Top of the guarded window.
    pub fn window(&self) -> i64 {
        self.precision - self.guard
    }

    /// The window must clear every catalog conductor and every functional
    /// coefficient index by a strict margin.
    pub fn validate(&self) -> Result<()> {
        if self.guard < 1 || self.precision <= self.guard {
            return Err(Error::Config(format!(
                "need precision > guard >= 1, got N={} G={}",
                self.precision, self.guard
            )));
        }
        for &n in &self.n_values {
            if n == 0 || n > 8 {
                return Err(Error::UnsupportedN(n));
            }
        }
        let max_n = self.n_values.iter().copied().max().unwrap_or(1) as i64;
        // conductors: n for the even family, (n+1)/2 for the odd family,
        // 5 for the deepest exceptional ring; functional indices reach n+1.
        let max_conductor = max_n.max(5);
        let max_index = (max_n + 1).max(7);
        if self.window() <= max_conductor + max_index {
            return Err(Error::Config(format!(
                "window N-G={} must exceed max conductor {} + max coefficient index {}",
                self.window(),
                max_conductor,
                max_index
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn narrow_window_rejected() {
        let cfg = RunConfig {
            precision: 12,
            guard: 8,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn out_of_range_n_rejected() {
        let cfg = RunConfig {
            n_values: vec![9],
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::UnsupportedN(9))));
    }
}
