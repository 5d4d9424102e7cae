//! Chain summaries: acceptance rates, effective sample sizes, and point
//! estimates of the parameters.

use nalgebra::DVector;

use crate::mcmc::Chain;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptanceStats {
    pub n_iterations: usize,
    pub accepted_total: usize,
    pub accepted_stage1: usize,
    pub accepted_stage2: usize,
    pub stage2_attempts: usize,
    pub rate: f64,
}

/// Acceptance counts over the chain, excluding the initial state.
pub fn acceptance_stats(chain: &Chain) -> AcceptanceStats {
    let mut accepted_total = 0;
    let mut accepted_stage1 = 0;
    let mut accepted_stage2 = 0;
    let mut stage2_attempts = 0;
    for i in 1..chain.len() {
        if chain.stage[i] == 2 {
            stage2_attempts += 1;
        }
        if chain.accepted[i] {
            accepted_total += 1;
            match chain.stage[i] {
                1 => accepted_stage1 += 1,
                2 => accepted_stage2 += 1,
                _ => {}
            }
        }
    }
    let n_iterations = chain.len().saturating_sub(1);
    AcceptanceStats {
        n_iterations,
        accepted_total,
        accepted_stage1,
        accepted_stage2,
        stage2_attempts,
        rate: if n_iterations == 0 {
            0.0
        } else {
            accepted_total as f64 / n_iterations as f64
        },
    }
}

/// Effective sample size of a scalar series by Geyer's initial positive
/// sequence: sum autocorrelations in adjacent pairs while the pair sums stay
/// positive (Geyer 1992). Returns a value clamped to `[1, n]`; a constant
/// series counts as a single effective sample.
pub fn ess(series: &[f64]) -> f64 {
    let n = series.len();
    if n < 2 {
        return n.min(1) as f64;
    }
    let nf = n as f64;
    let mean = series.iter().sum::<f64>() / nf;
    let var0 = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / nf;
    if var0 <= 0.0 || !var0.is_finite() {
        return 1.0;
    }
    let rho = |lag: usize| -> f64 {
        let mut acc = 0.0;
        for i in 0..(n - lag) {
            acc += (series[i] - mean) * (series[i + lag] - mean);
        }
        acc / nf / var0
    };
    // tau = -1 + 2 * sum of positive adjacent pair sums (the lag-0 pair
    // contributes 1 + rho_1)
    let mut tau = -1.0;
    let mut t = 0;
    while 2 * t + 1 < n {
        let pair = rho(2 * t) + rho(2 * t + 1);
        if pair <= 0.0 {
            break;
        }
        tau += 2.0 * pair;
        t += 1;
    }
    (nf / tau.max(1.0)).clamp(1.0, nf)
}

/// Per-coordinate ESS of the post-burn-in chain.
pub fn ess_per_coordinate(chain: &Chain, burn_in: f64) -> Vec<f64> {
    let rows = chain.post_burn(burn_in);
    let p = chain.dim();
    (0..p)
        .map(|j| {
            let series: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            ess(&series)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ThetaEstimators {
    pub mean: DVector<f64>,
    pub median: DVector<f64>,
    /// Highest-log-posterior sample in the retained chain segment.
    pub map: DVector<f64>,
    pub n_used: usize,
}

/// Posterior point estimates from the chain after discarding the first
/// `burn_in` fraction.
pub fn theta_estimators(chain: &Chain, burn_in: f64) -> ThetaEstimators {
    let cut = ((chain.len() as f64) * burn_in).floor() as usize;
    let cut = cut.min(chain.len().saturating_sub(1));
    let rows = &chain.samples[cut..];
    let lps = &chain.log_posts[cut..];
    let p = chain.dim();
    let n = rows.len();
    assert!(n > 0, "cannot summarize an empty chain segment");

    let mut mean = DVector::zeros(p);
    for r in rows {
        mean += r;
    }
    mean /= n as f64;

    let mut median = DVector::zeros(p);
    let mut scratch: Vec<f64> = Vec::with_capacity(n);
    for j in 0..p {
        scratch.clear();
        scratch.extend(rows.iter().map(|r| r[j]));
        scratch.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        median[j] = if n % 2 == 1 {
            scratch[n / 2]
        } else {
            0.5 * (scratch[n / 2 - 1] + scratch[n / 2])
        };
    }

    let mut best = 0;
    for i in 1..n {
        if lps[i] > lps[best] {
            best = i;
        }
    }

    ThetaEstimators {
        mean,
        median,
        map: rows[best].clone(),
        n_used: n,
    }
}
