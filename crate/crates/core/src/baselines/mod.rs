//! Least-squares system identification baselines.
//!
//! Dynamic mode decomposition (Schmid 2010; Tu et al. 2014), its
//! total-least-squares variant (Hemati et al. 2017), and sequentially
//! thresholded least squares for sparse dynamics (Brunton, Proctor & Kutz
//! 2016). All three operate on snapshot pairs from a single trajectory of
//! observations.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, pinv};
use crate::models::{DictionaryLibrary, ObservationSet};

/// Snapshot pair matrices built from consecutive fully observed rows:
/// columns of `y` are `y_1..y_{n-1}`, columns of `y_next` are `y_2..y_n`.
pub fn snapshot_pairs(data: &ObservationSet) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let cols = data.dense_columns()?;
    if cols.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two observations to form snapshot pairs".into(),
        ));
    }
    let m = data.obs_dim;
    let k = cols.len() - 1;
    let mut y = DMatrix::zeros(m, k);
    let mut y_next = DMatrix::zeros(m, k);
    for j in 0..k {
        y.column_mut(j).copy_from(cols[j]);
        y_next.column_mut(j).copy_from(cols[j + 1]);
    }
    Ok((y, y_next))
}

/// Exact DMD: the least-squares one-step propagator `A = Y' Y^+`.
pub fn dmd_fit(data: &ObservationSet) -> Result<DMatrix<f64>> {
    let (y, y_next) = snapshot_pairs(data)?;
    Ok(&y_next * pinv(&y))
}

/// Total-least-squares DMD.
///
/// Errors in both the current and the next snapshot are treated on an equal
/// footing: stack the pairs as rows `[y_k^T, y_{k+1}^T]`, take the trailing
/// right singular vectors of the stack (the orthogonal complement of its
/// best rank-r approximation), split them into the halves `V1` (current)
/// and `V2` (next), and read the propagator off the null-space relation
/// `Y^T X + Y'^T (-I) ~ 0` restricted to that complement.
pub fn tdmd_fit(data: &ObservationSet) -> Result<DMatrix<f64>> {
    let (y, y_next) = snapshot_pairs(data)?;
    let m = y.nrows();
    let k = y.ncols();
    if k < 2 * m {
        return Err(Error::InvalidArgument(format!(
            "total least squares needs at least {} snapshot pairs for dimension {}, got {}",
            2 * m,
            m,
            k
        )));
    }
    // rows of the stacked matrix are the pairs, so its right singular
    // vectors live in R^{2m}
    let mut stacked = DMatrix::zeros(k, 2 * m);
    stacked.view_mut((0, 0), (k, m)).copy_from(&y.transpose());
    stacked
        .view_mut((0, m), (k, m))
        .copy_from(&y_next.transpose());

    // Full right singular space through the Gram matrix; the thin SVD does
    // not return the trailing vectors when k > 2m.
    let gram = stacked.transpose() * &stacked;
    let eig = nalgebra::SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..2 * m).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let r = numerical_rank(&stacked).min(m);
    let q = 2 * m - r;
    let mut trailing = DMatrix::zeros(2 * m, q);
    for (col, &idx) in order[r..].iter().enumerate() {
        trailing.column_mut(col).copy_from(&eig.eigenvectors.column(idx));
    }
    let v1 = trailing.rows(0, m).into_owned();
    let v2 = trailing.rows(m, m).into_owned();
    // [V1; V2] spans the null directions, so Y^T = -Y'^T V2 pinv(V1) etc.;
    // solving for the propagator acting on columns gives
    let x = -&v1 * pinv(&v2);
    Ok(x.transpose())
}

#[derive(Debug, Clone)]
pub struct SindyFit {
    /// Coefficient matrix, one column per state, rows following the
    /// dictionary order.
    pub coefficients: DMatrix<f64>,
    pub library: DictionaryLibrary,
    pub dt: f64,
    pub n_iterations: usize,
}

impl SindyFit {
    /// Names of dictionary terms with any nonzero coefficient.
    pub fn active_terms(&self) -> Vec<String> {
        let labels = self.library.labels();
        (0..self.coefficients.nrows())
            .filter(|&i| (0..self.coefficients.ncols()).any(|j| self.coefficients[(i, j)] != 0.0))
            .map(|i| labels[i].clone())
            .collect()
    }

    /// Evaluate the identified vector field at a state.
    pub fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        let phi = self.library.eval(x);
        self.coefficients.transpose() * phi
    }
}

/// Sparse identification of nonlinear dynamics by sequentially thresholded
/// least squares on forward-difference derivative estimates.
///
/// The time step is inferred from the observation grid, which must be
/// uniform. Coefficients below `threshold` in absolute value are zeroed and
/// the remaining ones refit, for at most `max_iterations` rounds (one round
/// reproduces plain least squares followed by a single hard threshold).
pub fn sindy_fit(
    data: &ObservationSet,
    library: &DictionaryLibrary,
    threshold: f64,
    max_iterations: usize,
) -> Result<SindyFit> {
    if library.dim_in() != data.obs_dim {
        return Err(Error::DimensionMismatch(format!(
            "dictionary expects dimension {}, data has {}",
            library.dim_in(),
            data.obs_dim
        )));
    }
    let cols = data.dense_columns()?;
    if cols.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two observations for derivative estimates".into(),
        ));
    }
    let dt = data.times[1] - data.times[0];
    for w in data.times.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.abs().max(1.0) {
            return Err(Error::InvalidArgument(
                "sparse regression requires a uniform time grid".into(),
            ));
        }
    }
    if dt <= 0.0 {
        return Err(Error::InvalidArgument("nonpositive time step".into()));
    }

    let m = data.obs_dim;
    let p = library.len();
    let k = cols.len() - 1;
    let mut phi = DMatrix::zeros(k, p);
    let mut dxdt = DMatrix::zeros(k, m);
    let mut row = vec![0.0; p];
    for j in 0..k {
        library.eval_into(cols[j], &mut row);
        for (c, &v) in row.iter().enumerate() {
            phi[(j, c)] = v;
        }
        let diff = (cols[j + 1] - cols[j]) / dt;
        dxdt.row_mut(j).copy_from(&diff.transpose());
    }

    let mut coefficients = pinv(&phi) * &dxdt;
    let mut n_iterations = 0;
    for _ in 0..max_iterations.max(1) {
        n_iterations += 1;
        let mut changed = false;
        for v in coefficients.iter_mut() {
            if v.abs() < threshold && *v != 0.0 {
                *v = 0.0;
                changed = true;
            }
        }
        // refit each state equation on its surviving terms
        for j in 0..m {
            let active: Vec<usize> = (0..p).filter(|&i| coefficients[(i, j)] != 0.0).collect();
            if active.is_empty() {
                continue;
            }
            let mut phi_a = DMatrix::zeros(k, active.len());
            for (c, &i) in active.iter().enumerate() {
                phi_a.column_mut(c).copy_from(&phi.column(i));
            }
            let rhs = dxdt.column(j).into_owned();
            let sol = pinv(&phi_a) * rhs;
            for (c, &i) in active.iter().enumerate() {
                coefficients[(i, j)] = sol[c];
            }
        }
        if !changed {
            break;
        }
    }

    Ok(SindyFit {
        coefficients,
        library: library.clone(),
        dt,
        n_iterations,
    })
}

/// Eigenvalues of a one-step propagator, sorted by decreasing magnitude
/// (ties broken by decreasing imaginary part, so conjugate pairs come out in
/// a fixed order).
pub fn eig_analysis(a: &DMatrix<f64>) -> Vec<Complex<f64>> {
    let mut eigs: Vec<Complex<f64>> = a.clone().complex_eigenvalues().iter().cloned().collect();
    eigs.sort_by(|x, y| {
        y.norm()
            .partial_cmp(&x.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(
                y.im.partial_cmp(&x.im)
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
    });
    eigs
}

/// Continuous-time rates `log(lambda) / dt` of discrete eigenvalues.
pub fn continuous_rates(eigs: &[Complex<f64>], dt: f64) -> Vec<Complex<f64>> {
    eigs.iter().map(|l| l.ln() / dt).collect()
}
