//! Closed-form flop counts for the filters and the least-squares baselines.
//!
//! Counting conventions: addition, subtraction, multiplication, division and
//! a logarithm each cost one flop; an `m x n` by `n x p` matrix product costs
//! `m p (2n - 1)`; Cholesky factorization, inversion and determinant of an
//! `n x n` matrix each cost `n^3 / 3`. Counts are kept as exact rationals
//! because the cubic-third terms are not integers for general dimensions.

use num_rational::Ratio;

/// Problem dimensions entering the counts: state `d`, observation `m`,
/// parameter count `p`, number of measurements `n`, and the per-evaluation
/// costs `f_dyn` / `h_obs` of the dynamics and observation maps (the `F` and
/// `H` placeholders of the nonlinear filter counts).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlopDims {
    pub d: i64,
    pub m: i64,
    pub p: i64,
    pub n: i64,
    pub f_dyn: i64,
    pub h_obs: i64,
}

impl FlopDims {
    pub fn new(d: i64, m: i64, n: i64) -> Self {
        FlopDims {
            d,
            m,
            p: 0,
            n,
            f_dyn: 0,
            h_obs: 0,
        }
    }

    pub fn validate(&self) -> bool {
        self.d >= 0
            && self.m >= 0
            && self.p >= 0
            && self.n >= 0
            && self.f_dyn >= 0
            && self.h_obs >= 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlopAlgorithm {
    KfPredict,
    KfUpdate,
    KfTotal,
    UkfPredict,
    UkfUpdate,
    UkfTotal,
    Dmd,
    SparseRegression,
}

impl FlopAlgorithm {
    pub const ALL: [FlopAlgorithm; 8] = [
        FlopAlgorithm::KfPredict,
        FlopAlgorithm::KfUpdate,
        FlopAlgorithm::KfTotal,
        FlopAlgorithm::UkfPredict,
        FlopAlgorithm::UkfUpdate,
        FlopAlgorithm::UkfTotal,
        FlopAlgorithm::Dmd,
        FlopAlgorithm::SparseRegression,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            FlopAlgorithm::KfPredict => "kf_predict",
            FlopAlgorithm::KfUpdate => "kf_update",
            FlopAlgorithm::KfTotal => "kf_total",
            FlopAlgorithm::UkfPredict => "ukf_predict",
            FlopAlgorithm::UkfUpdate => "ukf_update",
            FlopAlgorithm::UkfTotal => "ukf_total",
            FlopAlgorithm::Dmd => "dmd",
            FlopAlgorithm::SparseRegression => "sparse_regression",
        }
    }
}

fn r(v: i64) -> Ratio<i64> {
    Ratio::from_integer(v)
}

fn frac(num: i64, den: i64) -> Ratio<i64> {
    Ratio::new(num, den)
}

/// Exact flop count of one algorithm at the given dimensions.
///
/// The sparse-regression count assumes the dictionary is shared across the
/// `m` state equations, so the per-equation library size is `p / m` (kept
/// rational when it does not divide evenly).
pub fn flop_model(algorithm: FlopAlgorithm, dims: &FlopDims) -> Ratio<i64> {
    assert!(dims.validate(), "flop dimensions must be nonnegative");
    let d = r(dims.d);
    let m = r(dims.m);
    let n = r(dims.n);
    let f = r(dims.f_dyn);
    let h = r(dims.h_obs);
    match algorithm {
        FlopAlgorithm::KfPredict => r(4) * d * d * d + d * d - d,
        FlopAlgorithm::KfUpdate => {
            r(2) * d * d * d + frac(1, 3) * m * m * m + r(6) * d * d * m + r(4) * d * m * m
                - d * d
                - m * m
                + r(3) * d * m
                - r(1)
        }
        FlopAlgorithm::KfTotal => {
            n * (r(6) * d * d * d
                + m * m * m
                + r(6) * d * d * m
                + r(4) * d * m * m
                + m * m
                + r(3) * d * m
                - d
                + r(3) * m
                + r(8))
        }
        FlopAlgorithm::UkfPredict => {
            frac(13, 3) * d * d * d + r(17) * d * d + r(4) * d + r(2) + (r(2) * d + r(1)) * f
        }
        FlopAlgorithm::UkfUpdate => {
            frac(1, 3) * d * d * d
                + frac(1, 3) * m * m * m
                + r(6) * d * d * m
                + r(8) * d * m * m
                + r(9) * d * d
                + r(4) * m * m
                + r(13) * d * m
                + r(2) * d
                + r(6) * m
                + r(2)
                + (r(2) * d + r(1)) * h
        }
        FlopAlgorithm::UkfTotal => {
            n * (frac(14, 3) * d * d * d
                + m * m * m
                + r(6) * d * d * m
                + r(8) * d * m * m
                + r(26) * d * d
                + r(6) * m * m
                + r(13) * d * m
                + r(6) * d
                + r(9) * m
                + r(13)
                + (r(2) * d + r(1)) * (f + h))
                + r(18)
        }
        FlopAlgorithm::Dmd => frac(7, 3) * m * m * m + r(4) * m * m * n - r(7) * m * m,
        FlopAlgorithm::SparseRegression => {
            let p = r(dims.p);
            let pm = p / m;
            frac(1, 3) * pm * pm * pm + r(4) * pm * pm * n - r(5) * pm * pm - pm * n
                + r(2) * p * n
                + pm
                - r(3) * p
        }
    }
}

/// Flop count of the total-least-squares solve inside TDMD, given the rank
/// `rank` of the stacked snapshot matrix (the SVD preceding it is reported
/// only at order level, so it is not included here).
pub fn tls_solve_flops(m: i64, rank: i64) -> Ratio<i64> {
    let m = r(m);
    let rank = r(rank);
    frac(19, 3) * m * m * m - r(2) * m * m * rank - r(2) * m * m
}
