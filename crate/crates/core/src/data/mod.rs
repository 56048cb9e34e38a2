//! Data model: raw and standardized regression data, supports, submodel
//! least squares and SNR-based noise calibration.
//!
//! Standardization follows the population convention: after
//! [`standardize`] every column of the design is centered and satisfies
//! `Σᵢ xᵢⱼ² = n`, and the response is centered. No intercept is ever
//! estimated; the recorded centers and scales carry everything needed to
//! map coefficients and predictions back to the original units.

mod csv;

pub use self::csv::{read_csv, CsvData, ResponseColumn};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reciprocal condition number of `X_sᵀX_s` below which a submodel is
/// treated as rank deficient.
pub const RCOND_THRESHOLD: f64 = 1e-12;

/// Response and design in their original units.
#[derive(Debug, Clone, PartialEq)]
pub struct RawData {
    y: DVector<f64>,
    x: DMatrix<f64>,
}

impl RawData {
    pub fn new(y: DVector<f64>, x: DMatrix<f64>) -> Result<Self> {
        if y.len() != x.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "response has {} rows, design has {}",
                y.len(),
                x.nrows()
            )));
        }
        if x.nrows() < 2 {
            return Err(Error::TooSmall {
                what: "observations",
                min: 2,
                got: x.nrows(),
            });
        }
        if x.ncols() < 1 {
            return Err(Error::TooSmall {
                what: "predictors",
                min: 1,
                got: x.ncols(),
            });
        }
        Ok(Self { y, x })
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// Rows `idx` of this data set, in the order given.
    pub fn select_rows(&self, idx: &[usize]) -> Result<Self> {
        let y = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.y[i]));
        let x = self.x.select_rows(idx);
        Self::new(y, x)
    }
}

/// Centered response and centered, scaled design together with the affine
/// record needed to undo the transform.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedData {
    y: DVector<f64>,
    x: DMatrix<f64>,
    centers: DVector<f64>,
    scales: DVector<f64>,
    y_center: f64,
}

impl StandardizedData {
    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn centers(&self) -> &DVector<f64> {
        &self.centers
    }

    pub fn scales(&self) -> &DVector<f64> {
        &self.scales
    }

    pub fn y_center(&self) -> f64 {
        self.y_center
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// Column `j` of the standardized design as a contiguous slice.
    #[inline]
    pub fn column(&self, j: usize) -> &[f64] {
        let n = self.n();
        &self.x.as_slice()[j * n..(j + 1) * n]
    }

    /// Apply this data set's design transform to new rows in original units.
    pub fn transform_x(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if x.ncols() != self.p() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} columns, got {}",
                self.p(),
                x.ncols()
            )));
        }
        let mut out = x.clone();
        for (j, mut col) in out.column_iter_mut().enumerate() {
            let (c, s) = (self.centers[j], self.scales[j]);
            col.apply(|v| *v = (*v - c) / s);
        }
        Ok(out)
    }

    /// Map standardized-scale coefficients to `(intercept, slopes)` in the
    /// original units.
    pub fn coefficients_to_raw(&self, beta: &DVector<f64>) -> (f64, DVector<f64>) {
        let slopes = beta.component_div(&self.scales);
        let intercept = self.y_center - self.centers.dot(&slopes);
        (intercept, slopes)
    }

    /// Reconstruct the original data from the standardized values.
    pub fn to_raw(&self) -> RawData {
        let mut x = self.x.clone();
        for (j, mut col) in x.column_iter_mut().enumerate() {
            let (c, s) = (self.centers[j], self.scales[j]);
            col.apply(|v| *v = *v * s + c);
        }
        let y = self.y.add_scalar(self.y_center);
        RawData { y, x }
    }

    /// Treat the standardized values as raw data (for re-standardizing
    /// subsets such as CV training folds).
    pub fn as_raw(&self) -> RawData {
        RawData {
            y: self.y.clone(),
            x: self.x.clone(),
        }
    }
}

/// Sorted, duplicate-free set of active column indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Support(Vec<usize>);

impl Support {
    pub fn new(mut indices: Vec<usize>, p: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&last) = indices.last() {
            if last >= p {
                return Err(Error::DimensionMismatch(format!(
                    "support index {last} out of range for p = {p}"
                )));
            }
        }
        Ok(Self(indices))
    }

    /// Nonzero pattern of `beta`.
    pub fn from_beta(beta: &DVector<f64>) -> Self {
        Self(
            beta.iter()
                .enumerate()
                .filter(|(_, b)| **b != 0.0)
                .map(|(j, _)| j)
                .collect(),
        )
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }
}

/// Center every column and scale it to `Σᵢ xᵢⱼ² = n`; center the response.
pub fn standardize(raw: &RawData) -> Result<StandardizedData> {
    let n = raw.n();
    let nf = n as f64;
    let mut x = raw.x.clone();
    let mut centers = DVector::zeros(raw.p());
    let mut scales = DVector::zeros(raw.p());

    for (j, mut col) in x.column_iter_mut().enumerate() {
        let first = col[0];
        if col.iter().all(|v| *v == first) {
            return Err(Error::ZeroVarianceColumn(j));
        }
        let mean = col.sum() / nf;
        col.add_scalar_mut(-mean);
        let scale = (col.norm_squared() / nf).sqrt();
        let magnitude = raw.x.column(j).amax();
        if !(scale > 1e-14 * magnitude) {
            return Err(Error::ZeroVarianceColumn(j));
        }
        col.unscale_mut(scale);
        centers[j] = mean;
        scales[j] = scale;
    }

    let y_center = raw.y.sum() / nf;
    let y = raw.y.add_scalar(-y_center);

    Ok(StandardizedData {
        y,
        x,
        centers,
        scales,
        y_center,
    })
}

/// Least squares on the columns in `support`, solved through an SVD of
/// `X_s`.
pub fn ols_submodel(data: &StandardizedData, support: &Support) -> Result<DVector<f64>> {
    if support.is_empty() {
        return Err(Error::TooSmall {
            what: "support columns",
            min: 1,
            got: 0,
        });
    }
    if support.len() > data.n() {
        return Err(Error::RankDeficient { rcond: 0.0 });
    }
    let xs = data.x().select_columns(support.indices());
    least_squares(xs, data.y())
}

pub(crate) fn least_squares(xs: DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let svd = xs.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let rcond = if smax > 0.0 { (smin / smax).powi(2) } else { 0.0 };
    if !(rcond >= RCOND_THRESHOLD) {
        return Err(Error::RankDeficient { rcond });
    }
    svd.solve(y, 0.0)
        .map_err(|e| Error::PreconditionViolated(e.to_string()))
}

/// Population covariance of the design rows used in simulations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Covariance {
    Identity,
    /// Unit variances and common correlation `rho` off the diagonal.
    CompoundSymmetric { rho: f64 },
}

impl Covariance {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Covariance::Identity => Ok(()),
            Covariance::CompoundSymmetric { rho } if (0.0..1.0).contains(&rho) => Ok(()),
            Covariance::CompoundSymmetric { rho } => Err(Error::Config {
                field: "rho".into(),
                reason: format!("must lie in [0, 1), got {rho}"),
            }),
        }
    }

    /// `βᵀ Σ β`.
    pub fn quadratic_form(&self, beta: &DVector<f64>) -> f64 {
        match *self {
            Covariance::Identity => beta.norm_squared(),
            Covariance::CompoundSymmetric { rho } => {
                let s = beta.sum();
                (1.0 - rho) * beta.norm_squared() + rho * s * s
            }
        }
    }
}

/// Noise standard deviation giving `βᵀΣβ / σ² = snr`.
pub fn sigma_from_snr(beta_star: &DVector<f64>, cov: Covariance, snr: f64) -> Result<f64> {
    if !(snr > 0.0) {
        return Err(Error::NonPositiveSnr(snr));
    }
    cov.validate()?;
    Ok((cov.quadratic_form(beta_star) / snr).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tiny_raw() -> RawData {
        let x = DMatrix::from_row_slice(5, 2, &[1.0, 4.0, 2.0, -1.0, 3.0, 0.5, 4.0, 2.0, 7.0, 3.0]);
        let y = DVector::from_vec(vec![1.0, 0.5, 2.0, -1.0, 3.5]);
        RawData::new(y, x).unwrap()
    }

    #[test]
    fn standardize_three_point_column() {
        let raw = RawData::new(
            DVector::zeros(3),
            DMatrix::from_column_slice(3, 1, &[1.0, 2.0, 3.0]),
        )
        .unwrap();
        let std = standardize(&raw).unwrap();
        let c = (1.5f64).sqrt();
        assert_relative_eq!(std.x()[(0, 0)], -c, epsilon = 1e-15);
        assert_eq!(std.x()[(1, 0)], 0.0);
        assert_relative_eq!(std.x()[(2, 0)], c, epsilon = 1e-15);
        assert!(std.y().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn standardize_is_idempotent() {
        let once = standardize(&tiny_raw()).unwrap();
        let twice = standardize(&once.as_raw()).unwrap();
        for (a, b) in once.x().iter().zip(twice.x().iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
        for (a, b) in once.y().iter().zip(twice.y().iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
        assert!(twice.centers().iter().all(|c| c.abs() < 1e-12));
        assert!(twice.scales().iter().all(|s| (s - 1.0).abs() < 1e-12));
    }

    #[test]
    fn back_transform_reproduces_raw() {
        let raw = tiny_raw();
        let back = standardize(&raw).unwrap().to_raw();
        for (a, b) in raw.x().iter().zip(back.x().iter()) {
            assert_relative_eq!(a, b, max_relative = 1e-12, epsilon = 1e-14);
        }
        for (a, b) in raw.y().iter().zip(back.y().iter()) {
            assert_relative_eq!(a, b, max_relative = 1e-12, epsilon = 1e-14);
        }
    }

    #[test]
    fn constant_column_is_rejected() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 5.0, 2.0, 5.0, 3.0, 5.0]);
        let raw = RawData::new(DVector::from_vec(vec![1.0, 2.0, 3.0]), x).unwrap();
        assert!(matches!(standardize(&raw), Err(Error::ZeroVarianceColumn(1))));
    }

    #[test]
    fn raw_data_shape_checks() {
        let x = DMatrix::zeros(3, 2);
        assert!(RawData::new(DVector::zeros(2), x).is_err());
        assert!(RawData::new(DVector::zeros(1), DMatrix::zeros(1, 1)).is_err());
    }

    #[test]
    fn ols_single_column_exact_fit() {
        let x = DMatrix::from_column_slice(4, 1, &[1.0, -2.0, 0.5, 3.0]);
        let raw = RawData::new(&x.column(0) * 2.0, x).unwrap();
        let std = standardize(&raw).unwrap();
        let b = ols_submodel(&std, &Support::new(vec![0], 1).unwrap()).unwrap();
        // standardized slope = 2 · scale
        assert_relative_eq!(b[0], 2.0 * std.scales()[0], epsilon = 1e-12);
    }

    #[test]
    fn ols_duplicated_column_is_rank_deficient() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 1.0, 2.0, 2.0, -1.0, -1.0, 5.0, 5.0]);
        let raw = RawData::new(DVector::from_vec(vec![1.0, 0.0, 2.0, 1.0]), x).unwrap();
        let std = standardize(&raw).unwrap();
        let s = Support::new(vec![0, 1], 2).unwrap();
        assert!(matches!(ols_submodel(&std, &s), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn ols_orthogonal_design_matches_normal_equations() {
        // Hadamard columns: centered, orthogonal, squared norm = n.
        let x = DMatrix::from_row_slice(
            4,
            3,
            &[1.0, 1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -1.0, -1.0, 1.0],
        );
        let y = DVector::from_vec(vec![0.3, -1.2, 2.0, -1.1]);
        let std = standardize(&RawData::new(y, x).unwrap()).unwrap();
        let b = ols_submodel(&std, &Support::new(vec![0, 1, 2], 3).unwrap()).unwrap();
        let oracle = std.x().transpose() * std.y() / 4.0;
        for (a, o) in b.iter().zip(oracle.iter()) {
            assert_relative_eq!(a, o, epsilon = 1e-12);
        }
        let resid = std.y() - std.x() * &b;
        assert!((std.x().transpose() * resid).amax() < 1e-8);
    }

    #[test]
    fn snr_examples() {
        let mut beta = DVector::zeros(10);
        beta.rows_mut(0, 5).fill(2.5);
        assert_relative_eq!(
            sigma_from_snr(&beta, Covariance::Identity, 5.0).unwrap(),
            2.5,
            epsilon = 1e-12
        );
        assert_eq!(
            sigma_from_snr(&DVector::zeros(4), Covariance::Identity, 1.0).unwrap(),
            0.0
        );
        let b = DVector::from_vec(vec![1.0, 1.0]);
        let s = sigma_from_snr(&b, Covariance::CompoundSymmetric { rho: 0.75 }, 1.0).unwrap();
        assert_relative_eq!(s * s, 3.5, epsilon = 1e-12);
        assert!(matches!(
            sigma_from_snr(&b, Covariance::Identity, 0.0),
            Err(Error::NonPositiveSnr(_))
        ));
    }

    #[test]
    fn support_is_sorted_and_deduplicated() {
        let s = Support::new(vec![3, 1, 3, 0], 4).unwrap();
        assert_eq!(s.indices(), &[0, 1, 3]);
        assert!(Support::new(vec![4], 4).is_err());
    }
}
