//! Monte Carlo estimate of the fraction of the simplex that is not normal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-sided 99% normal quantile.
const Z_99: f64 = 2.575_829_303_549;

/// Integer scale applied to the exponential draws before exact comparison.
const SCALE: f64 = (1u64 << 40) as f64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub n: usize,
    pub samples: u64,
    pub non_normal: u64,
    pub fraction: f64,
    /// Half-width of the 99% Wilson score interval.
    pub half_width: f64,
    /// Center of the Wilson score interval.
    pub center: f64,
    pub seed: u64,
}

impl VolumeEstimate {
    pub fn upper_99(&self) -> f64 {
        self.center + self.half_width
    }
}

/// Samples the simplex uniformly (normalized exponential spacings) and counts
/// vectors whose three largest entries after the longest form a long set.
pub fn estimate_nonnormal_volume(n: usize, samples: u64, seed: u64) -> Result<VolumeEstimate> {
    if n < 4 {
        return Err(Error::Precondition(format!("volume estimate needs n >= 4, got {n}")));
    }
    if samples == 0 {
        return Err(Error::Precondition("at least one sample is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = vec![0u64; n];
    let mut non_normal = 0u64;
    for _ in 0..samples {
        for x in draw.iter_mut() {
            let e: f64 = rng.sample(Exp1);
            *x = ((e * SCALE) as u64).max(1);
        }
        if is_nonnormal_draw(&mut draw) {
            non_normal += 1;
        }
    }
    let p = non_normal as f64 / samples as f64;
    let (center, half_width) = wilson(p, samples as f64);
    Ok(VolumeEstimate { n, samples, non_normal, fraction: p, half_width, center, seed })
}

/// Wilson score interval at the 99% level; stays informative when `p` is 0 or 1.
fn wilson(p: f64, samples: f64) -> (f64, f64) {
    let z2 = Z_99 * Z_99;
    let denom = 1.0 + z2 / samples;
    let center = (p + z2 / (2.0 * samples)) / denom;
    let half = Z_99 * (p * (1.0 - p) / samples + z2 / (4.0 * samples * samples)).sqrt() / denom;
    (center, half)
}

/// Sorts in place and tests whether `{n-3, n-2, n-1}` is long.
pub(crate) fn is_nonnormal_draw(draw: &mut [u64]) -> bool {
    draw.sort_unstable();
    let n = draw.len();
    let total: u128 = draw.iter().map(|&x| x as u128).sum();
    let triple: u128 = draw[n - 4..n - 1].iter().map(|&x| x as u128).sum();
    2 * triple > total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::is_normal_by_triples;
    use crate::lengths::LengthVector;

    #[test]
    fn rejects_empty_sampling() {
        assert!(estimate_nonnormal_volume(5, 0, 1).unwrap_err().is_precondition());
        assert!(estimate_nonnormal_volume(3, 10, 1).unwrap_err().is_precondition());
    }

    #[test]
    fn deterministic_given_seed() {
        let a = estimate_nonnormal_volume(7, 2000, 42).unwrap();
        let b = estimate_nonnormal_volume(7, 2000, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn draw_criterion_matches_triple_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let mut draw: Vec<u64> = (0..4).map(|_| ((rng.sample::<f64, _>(Exp1)) * 1000.0) as u64 + 1).collect();
            let lv = LengthVector::from_integers(&draw.iter().map(|&x| x as i64).collect::<Vec<_>>()).unwrap();
            assert_eq!(is_nonnormal_draw(&mut draw), !is_normal_by_triples(&lv));
        }
        let est = estimate_nonnormal_volume(4, 1000, 3).unwrap();
        assert!(est.fraction > 0.0 && est.fraction < 1.0);
        assert!(est.center - est.half_width <= est.fraction && est.fraction <= est.upper_99());
    }

    #[test]
    fn interval_is_positive_without_hits() {
        let (center, half) = wilson(0.0, 1e6);
        let upper = center + half;
        // Roughly z^2 / N when nothing is observed.
        assert!(upper > 6.0e-6 && upper < 7.0e-6, "{upper}");
    }
}
