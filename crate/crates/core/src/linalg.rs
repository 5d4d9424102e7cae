//! Small dense linear algebra helpers shared by the filters and baselines.
//!
//! Covariances are kept symmetric by explicit symmetrization after every
//! formation, and a fixed nugget is added before any factorization-sensitive
//! use. The nugget size matches the value used in the reference experiments
//! (1e-10) and is exposed so callers can tighten or relax it.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

/// Default jitter added to freshly formed covariance matrices.
pub const DEFAULT_NUGGET: f64 = 1e-10;

/// Replace `m` with its symmetric part `(m + m^T) / 2`.
pub fn symmetrize(m: &mut DMatrix<f64>) {
    debug_assert_eq!(m.nrows(), m.ncols());
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Add `eps` to the diagonal in place.
pub fn add_nugget(m: &mut DMatrix<f64>, eps: f64) {
    let n = m.nrows().min(m.ncols());
    for i in 0..n {
        m[(i, i)] += eps;
    }
}

/// Symmetrize and add the nugget; the standard finishing move after forming
/// a covariance from products of other matrices.
pub fn finish_cov(m: &mut DMatrix<f64>, eps: f64) {
    symmetrize(m);
    add_nugget(m, eps);
}

/// Cholesky with escalation: try the matrix as-is, then retry with nuggets
/// `eps`, `10 eps`, `100 eps` on the diagonal. Returns `None` if all
/// attempts fail, which callers translate into a soft likelihood failure.
pub fn safe_cholesky(m: &DMatrix<f64>, eps: f64) -> Option<Cholesky<f64, Dyn>> {
    if !m.iter().all(|v| v.is_finite()) {
        return None;
    }
    if let Some(c) = Cholesky::new(m.clone()) {
        return Some(c);
    }
    for boost in [eps, 10.0 * eps, 100.0 * eps] {
        let mut trial = m.clone();
        add_nugget(&mut trial, boost);
        if let Some(c) = Cholesky::new(trial) {
            return Some(c);
        }
    }
    None
}

/// Log-determinant from a Cholesky factor: `2 * sum(log diag(L))`.
pub fn ln_det(chol: &Cholesky<f64, Dyn>) -> f64 {
    chol.l_dirty()
        .diagonal()
        .iter()
        .map(|d| 2.0 * d.ln())
        .sum()
}

/// Multivariate normal log-density `log N(y; mean, S)` where `chol` factors S.
pub fn mvn_logpdf(y: &DVector<f64>, mean: &DVector<f64>, chol: &Cholesky<f64, Dyn>) -> f64 {
    const LN_2PI: f64 = 1.8378770664093453;
    let k = y.len() as f64;
    let resid = y - mean;
    let solved = chol.solve(&resid);
    let maha = resid.dot(&solved);
    -0.5 * (k * LN_2PI + ln_det(chol) + maha)
}

/// Moore-Penrose pseudoinverse through the SVD, truncating singular values
/// below `max(nrows, ncols) * sigma_max * machine_eps`.
pub fn pinv(m: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = (m.nrows().max(m.ncols()) as f64) * smax * f64::EPSILON;
    let u = svd.u.as_ref().expect("svd with u");
    let vt = svd.v_t.as_ref().expect("svd with v_t");
    let mut sigma_inv = DMatrix::zeros(vt.nrows(), u.ncols());
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff {
            sigma_inv[(i, i)] = 1.0 / s;
        }
    }
    vt.transpose() * sigma_inv * u.transpose()
}

/// Numerical rank with the same cutoff convention as [`pinv`].
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = (m.nrows().max(m.ncols()) as f64) * smax * f64::EPSILON;
    svd.singular_values.iter().filter(|&&s| s > cutoff).count()
}

/// Matrix exponential `exp(t * [[0, a], [b, 0]])` in closed form.
///
/// For this zero-diagonal structure `A^2 = a b I`, so the series collapses:
/// with `w = sqrt(|a b|)` the result is `cos(w t) I + sinc * A` when
/// `a b < 0`, `cosh(w t) I + sinch * A` when `a b > 0`, and `I + t A` when
/// the product vanishes. Used for the harmonic-oscillator propagators.
pub fn expm_offdiag2(a: f64, b: f64, t: f64) -> DMatrix<f64> {
    let prod = a * b;
    let (c, s_over_w) = if prod < 0.0 {
        let w = (-prod).sqrt();
        ((w * t).cos(), (w * t).sin() / w)
    } else if prod > 0.0 {
        let w = prod.sqrt();
        ((w * t).cosh(), (w * t).sinh() / w)
    } else {
        (1.0, t)
    };
    DMatrix::from_row_slice(2, 2, &[c, a * s_over_w, b * s_over_w, c])
}
