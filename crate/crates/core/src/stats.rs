//! Small statistics toolkit for the Monte Carlo checks.

use serde::Serialize;

/// Mean with a standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    /// `|mean - target| / se`, infinite when se is 0 and the mean is off target.
    pub fn z(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.se
        }
    }
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample mean with the iid standard error.
pub fn mean_se(x: &[f64]) -> Estimate {
    let n = x.len() as f64;
    let m = mean(x);
    let var = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0);
    Estimate {
        mean: m,
        se: (var / n).sqrt(),
    }
}

/// Batch-means estimate: the sample is cut in `batches` contiguous pieces in
/// order and the spread of the batch averages gives the error.
pub fn batch_means(x: &[f64], batches: usize) -> Estimate {
    assert!(batches >= 2 && x.len() >= batches, "need at least one value per batch");
    let len = x.len() / batches;
    let avgs: Vec<f64> = (0..batches).map(|b| mean(&x[b * len..(b + 1) * len])).collect();
    let used = &x[..batches * len];
    let m = mean(used);
    let bm = mean(&avgs);
    let var = avgs.iter().map(|v| (v - bm) * (v - bm)).sum::<f64>() / (batches as f64 - 1.0);
    Estimate {
        mean: m,
        se: (var / batches as f64).sqrt(),
    }
}

/// Kolmogorov distribution tail `P(K > lambda)`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut s = 0.0;
    for j in 1..=200 {
        let jf = j as f64;
        let term = 2.0 * (-2.0 * jf * jf * lambda * lambda).exp();
        s += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    s.clamp(0.0, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KsResult {
    pub d: f64,
    pub p: f64,
}

/// Two-sample Kolmogorov-Smirnov statistic with the asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len(), y.len());
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < n && j < m {
        let v = x[i].min(y[j]);
        while i < n && x[i] <= v {
            i += 1;
        }
        while j < m && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    let sq = ne.sqrt();
    KsResult {
        d,
        p: kolmogorov_q((sq + 0.12 + 0.11 / sq) * d),
    }
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let mx = mean(x);
    let my = mean(y);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly).0
}

/// Number of steps where a sequence that should decrease does not.
pub fn inversions(x: &[f64]) -> usize {
    x.windows(2).filter(|w| w[1] >= w[0]).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn kolmogorov_tail_reference_values() {
        // P(K > 1.36) ~ 0.049, P(K > 1.63) ~ 0.010
        assert!((kolmogorov_q(1.36) - 0.0494).abs() < 1e-3);
        assert!((kolmogorov_q(1.628) - 0.0100).abs() < 5e-4);
    }

    #[test]
    fn ks_same_and_shifted() {
        let mut r = crate::synth::seeded(3, 0);
        let a: Vec<f64> = (0..4000).map(|_| r.random::<f64>()).collect();
        let b: Vec<f64> = (0..4000).map(|_| r.random::<f64>()).collect();
        let c: Vec<f64> = b.iter().map(|v| v + 0.1).collect();
        assert!(ks_two_sample(&a, &b).p > 0.01);
        assert!(ks_two_sample(&a, &c).p < 1e-6);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]).d, 1.0);
    }

    #[test]
    fn fit_recovers_power() {
        let x: Vec<f64> = (1..20).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(1.7)).collect();
        assert!((loglog_slope(&x, &y) - 1.7).abs() < 1e-12);
    }

    #[test]
    fn batch_means_of_constant_blocks() {
        let x: Vec<f64> = (0..100).map(|i| (i / 10) as f64).collect();
        let e = batch_means(&x, 10);
        assert!((e.mean - 4.5).abs() < 1e-12);
        assert!(e.se > 0.0);
    }
}
