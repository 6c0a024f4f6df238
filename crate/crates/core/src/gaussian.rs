//! Finite-dimensional Gaussian measures and the conditional-expectation
//! projections built from them.
//!
//! A measure is split into resolved variables (the first `split` entries)
//! and unresolved ones (the rest). Conditioning on the resolved part moves
//! the unresolved mean along the regression gain `A_FC A_CC^{-1}`.

use nalgebra::{Cholesky, ComplexField, DMatrix, DVector, Dyn, SymmetricEigen};

use crate::error::{Error, Result};

const SPD_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct GaussianMeasure {
    covariance: DMatrix<f64>,
    mean: DVector<f64>,
    split: usize,
    /// `A_FC A_CC^{-1}`, shape (n-k) x k.
    gain: DMatrix<f64>,
}

impl GaussianMeasure {
    pub fn new(covariance: DMatrix<f64>, mean: DVector<f64>, split: usize) -> Result<Self> {
        let n = covariance.nrows();
        if !covariance.is_square() {
            return Err(Error::Dimension(format!(
                "covariance is {}x{}",
                covariance.nrows(),
                covariance.ncols()
            )));
        }
        if mean.len() != n {
            return Err(Error::Dimension(format!(
                "mean has length {} but covariance is {n}x{n}",
                mean.len()
            )));
        }
        if split == 0 || split >= n {
            return Err(Error::InvalidSplit { split, dim: n });
        }
        let scale = covariance.amax();
        let defect = (&covariance - covariance.transpose()).amax();
        if !(defect <= SPD_TOLERANCE * scale) {
            return Err(Error::NotSymmetric { defect });
        }
        let eigen = SymmetricEigen::new(covariance.clone());
        let max_eig = eigen.eigenvalues.max();
        let min_eig = eigen.eigenvalues.min();
        if !(min_eig > SPD_TOLERANCE * max_eig.abs()) || !(max_eig > 0.0) {
            return Err(Error::NotPositiveDefinite {
                block: "A",
                min_eigenvalue: min_eig,
            });
        }
        let gain = regression_gain(&covariance, split)?;
        Ok(Self {
            covariance,
            mean,
            split,
            gain,
        })
    }

    /// Centered measure (`m = 0`).
    pub fn centered(covariance: DMatrix<f64>, split: usize) -> Result<Self> {
        let n = covariance.nrows();
        Self::new(covariance, DVector::zeros(n), split)
    }

    /// Decoupled centered measure with the given variances.
    pub fn diagonal(variances: &[f64], split: usize) -> Result<Self> {
        let cov = DMatrix::from_diagonal(&DVector::from_column_slice(variances));
        Self::centered(cov, split)
    }

    pub fn dim(&self) -> usize {
        self.covariance.nrows()
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn a_cc(&self) -> DMatrix<f64> {
        let k = self.split;
        self.covariance.view((0, 0), (k, k)).into_owned()
    }

    pub fn a_cf(&self) -> DMatrix<f64> {
        let (n, k) = (self.dim(), self.split);
        self.covariance.view((0, k), (k, n - k)).into_owned()
    }

    pub fn a_fc(&self) -> DMatrix<f64> {
        let (n, k) = (self.dim(), self.split);
        self.covariance.view((k, 0), (n - k, k)).into_owned()
    }

    pub fn a_ff(&self) -> DMatrix<f64> {
        let (n, k) = (self.dim(), self.split);
        self.covariance.view((k, k), (n - k, n - k)).into_owned()
    }

    /// The regression gain `A_FC A_CC^{-1}`.
    pub fn gain(&self) -> &DMatrix<f64> {
        &self.gain
    }

    pub fn is_decoupled(&self) -> bool {
        self.gain.iter().all(|g| *g == 0.0)
    }

    /// Conditional expectation of the full vector given its resolved part.
    pub fn condition(&self, resolved: &DVector<f64>) -> Result<DVector<f64>> {
        let (n, k) = (self.dim(), self.split);
        if resolved.len() != k {
            return Err(Error::Dimension(format!(
                "resolved vector has length {} but split is {k}",
                resolved.len()
            )));
        }
        let m_c = self.mean.rows(0, k);
        let m_f = self.mean.rows(k, n - k);
        let unresolved = m_f + &self.gain * (resolved - m_c);
        let mut out = DVector::zeros(n);
        out.rows_mut(0, k).copy_from(resolved);
        out.rows_mut(k, n - k).copy_from(&unresolved);
        Ok(out)
    }

    pub fn projection_pair(&self) -> ProjectionPair {
        let (n, k) = (self.dim(), self.split);
        let mut e = DMatrix::<f64>::zeros(n, n);
        e.view_mut((0, 0), (k, k)).fill_with_identity();
        e.view_mut((k, 0), (n - k, k)).copy_from(&self.gain);
        let f = DMatrix::identity(n, n) - &e;
        ProjectionPair { e, f }
    }

    /// `B E`: left block column `[B_CC + B_CF G ; B_FC + B_FF G]`, right block
    /// column zero, with `G` the regression gain. `B` may be complex.
    pub fn project_matrix<T>(&self, b: &DMatrix<T>) -> Result<DMatrix<T>>
    where
        T: ComplexField<RealField = f64> + Copy,
    {
        let (n, k) = (self.dim(), self.split);
        if b.nrows() != n || b.ncols() != n {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} but measure has dimension {n}",
                b.nrows(),
                b.ncols()
            )));
        }
        let gain = self.gain.map(T::from_real);
        let left = b.columns(0, k) + b.columns(k, n - k) * gain;
        let mut out = DMatrix::<T>::zeros(n, n);
        out.columns_mut(0, k).copy_from(&left);
        Ok(out)
    }

    /// Unnormalized log-density `-(x-m)^T A^{-1} (x-m) / 2`.
    pub fn log_density_kernel(&self, x: &DVector<f64>) -> f64 {
        let chol = Cholesky::new(self.covariance.clone()).expect("validated SPD");
        let d = x - &self.mean;
        -0.5 * d.dot(&chol.solve(&d))
    }
}

fn regression_gain(covariance: &DMatrix<f64>, split: usize) -> Result<DMatrix<f64>> {
    let n = covariance.nrows();
    let a_cc = covariance.view((0, 0), (split, split)).into_owned();
    let chol: Cholesky<f64, Dyn> = match Cholesky::new(a_cc.clone()) {
        Some(c) => c,
        None => {
            let min = SymmetricEigen::new(a_cc).eigenvalues.min();
            return Err(Error::NotPositiveDefinite {
                block: "A_CC",
                min_eigenvalue: min,
            });
        }
    };
    let a_cf = covariance.view((0, split), (split, n - split)).into_owned();
    // A_CC^{-1} A_CF, transposed; A is symmetric so this is A_FC A_CC^{-1}.
    let solved = chol.solve(&a_cf);
    if solved.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularBlock { block: "A_CC" });
    }
    Ok(solved.transpose())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionPair {
    pub e: DMatrix<f64>,
    pub f: DMatrix<f64>,
}

impl ProjectionPair {
    /// Largest violation of `E+F=I`, `E^2=E`, `F^2=F`, `EF=FE=0`, relative to
    /// `max(1, |E|_max)`.
    pub fn defect(&self) -> f64 {
        let n = self.e.nrows();
        let id = DMatrix::<f64>::identity(n, n);
        let scale = self.e.amax().max(1.0);
        let checks = [
            (&self.e + &self.f - &id).amax(),
            (&self.e * &self.e - &self.e).amax(),
            (&self.f * &self.f - &self.f).amax(),
            (&self.e * &self.f).amax(),
            (&self.f * &self.e).amax(),
        ];
        checks.into_iter().fold(0.0, f64::max) / scale
    }
}
