use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::numkit::Matrix;

/// Ridge added to the within-class scatter, relative to its mean diagonal.
pub const LDA_RIDGE: f64 = 1e-6;

/// Linear discriminant projection onto `d` orthonormal directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    /// f×d, orthonormal columns ordered by discriminant strength.
    #[serde(with = "matrix_serde")]
    pub projection: Matrix<f64>,
    /// c×f per-class feature means.
    #[serde(with = "matrix_serde")]
    pub class_means: Matrix<f64>,
    /// Overall feature mean subtracted before projecting.
    pub mean: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    pub d: usize,
}

fn to_dmatrix(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// Fits LDA on `x` (n×f) with labels in `0..n_classes`.
///
/// Directions are the leading generalized eigenvectors of the between-class
/// scatter Sb against the ridged within-class scatter Sw + εI, with
/// `ε = LDA_RIDGE · trace(Sw) / f`. With Sw = L Lᵀ and Sb = B Bᵀ (B has one
/// column per class) the symmetric problem reduces to the c×c matrix
/// (L⁻¹B)ᵀ(L⁻¹B). The resulting directions are orthonormalized in order and
/// signed so their first non-negligible component is positive.
pub fn lda_fit(x: &Matrix<f64>, y: &[usize], n_classes: usize, d: usize) -> Result<LdaModel> {
    if d == 0 || d + 1 > n_classes {
        return Err(Error::Param(format!(
            "LDA dimension must be in 1..={} for {n_classes} classes, got {d}",
            n_classes.saturating_sub(1)
        )));
    }
    if x.rows() != y.len() {
        return Err(Error::shape("lda_fit", x.shape_str(), y.len()));
    }
    let (n, f) = x.shape();
    let mut counts = vec![0usize; n_classes];
    let mut class_sums = vec![vec![0.0; f]; n_classes];
    for (row, &label) in x.row_iter().zip(y) {
        if label >= n_classes {
            return Err(Error::Param(format!(
                "label {label} out of range for {n_classes} classes"
            )));
        }
        counts[label] += 1;
        for (s, v) in class_sums[label].iter_mut().zip(row) {
            *s += v;
        }
    }
    let mean: Vec<f64> = (0..f)
        .map(|j| class_sums.iter().map(|s| s[j]).sum::<f64>() / n as f64)
        .collect();
    let class_means: Vec<Vec<f64>> = class_sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s.iter().map(|v| if c > 0 { v / c as f64 } else { 0.0 }).collect())
        .collect();

    let centered = DMatrix::from_fn(n, f, |i, j| x[(i, j)] - class_means[y[i]][j]);
    let mut sw = centered.transpose() * &centered;
    let ridge = LDA_RIDGE * sw.trace() / f as f64;
    if ridge.is_nan() || ridge <= 0.0 {
        return Err(Error::Numeric("within-class scatter is zero".into()));
    }
    for i in 0..f {
        sw[(i, i)] += ridge;
    }
    let chol = sw
        .cholesky()
        .ok_or_else(|| Error::Numeric("within-class scatter not positive definite after ridge".into()))?;
    let l = chol.l();

    let between = DMatrix::from_fn(f, n_classes, |j, c| {
        (counts[c] as f64).sqrt() * (class_means[c][j] - mean[j])
    });
    let g = l
        .solve_lower_triangular(&between)
        .ok_or_else(|| Error::Numeric("triangular solve failed".into()))?;
    let small = g.transpose() * &g;
    let eig = SymmetricEigen::new(small);
    let mut order: Vec<usize> = (0..n_classes).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = eig.eigenvalues[order[0]];

    let lt = l.transpose();
    let mut directions: Vec<DVector<f64>> = Vec::with_capacity(d);
    let mut eigenvalues = Vec::with_capacity(d);
    for &k in order.iter().take(d) {
        let lambda = eig.eigenvalues[k];
        if lambda.is_nan() || lambda <= 1e-12 * top.max(f64::MIN_POSITIVE) {
            return Err(Error::Numeric(format!(
                "between-class scatter has rank below the requested {d} dimensions"
            )));
        }
        let u = &g * eig.eigenvectors.column(k) / lambda.sqrt();
        let w = lt
            .solve_upper_triangular(&u)
            .ok_or_else(|| Error::Numeric("triangular solve failed".into()))?;
        directions.push(w);
        eigenvalues.push(lambda);
    }

    // modified Gram-Schmidt keeps the leading direction's span first
    for i in 0..directions.len() {
        for j in 0..i {
            let proj = directions[i].dot(&directions[j]);
            let dj = directions[j].clone();
            directions[i].axpy(-proj, &dj, 1.0);
        }
        let norm = directions[i].norm();
        if norm.is_nan() || norm <= 1e-12 {
            return Err(Error::Numeric("discriminant directions are linearly dependent".into()));
        }
        directions[i] /= norm;
        if let Some(&first) = directions[i].iter().find(|v| v.abs() > 1e-12) {
            if first < 0.0 {
                directions[i].neg_mut();
            }
        }
    }

    let mut projection = Matrix::zeros(f, d);
    for (k, dir) in directions.iter().enumerate() {
        for j in 0..f {
            projection[(j, k)] = dir[j];
        }
    }
    Ok(LdaModel {
        projection,
        class_means: Matrix::from_rows(&class_means)?,
        mean,
        eigenvalues,
        d,
    })
}

impl LdaModel {
    /// Fits on a dataset view; validation views are refused.
    pub fn fit(ds: &Dataset, d: usize) -> Result<Self> {
        ds.ensure_fit_allowed("LDA")?;
        lda_fit(&ds.x, &ds.y, ds.n_classes, d)
    }

    pub fn transform(&self, x: &Matrix<f64>) -> Result<Matrix<f64>> {
        lda_transform(x, self)
    }
}

/// Centers by the training mean and projects to n×d.
pub fn lda_transform(x: &Matrix<f64>, model: &LdaModel) -> Result<Matrix<f64>> {
    if x.cols() != model.mean.len() {
        return Err(Error::shape(
            "lda_transform",
            x.shape_str(),
            format!("?x{}", model.mean.len()),
        ));
    }
    let mut centered = x.clone();
    for r in 0..centered.rows() {
        for (v, m) in centered.row_mut(r).iter_mut().zip(&model.mean) {
            *v -= m;
        }
    }
    centered.matmul(&model.projection)
}

/// Checks `WᵀW = I` for a projection; returns the largest deviation.
pub fn orthonormality_error(projection: &Matrix<f64>) -> f64 {
    let w = to_dmatrix(projection);
    let gram = w.transpose() * &w;
    let eye = DMatrix::<f64>::identity(gram.nrows(), gram.ncols());
    (gram - eye).abs().max()
}

mod matrix_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::numkit::Matrix;

    #[derive(Serialize, Deserialize)]
    struct Repr {
        rows: usize,
        cols: usize,
        data: Vec<f64>,
    }

    pub fn serialize<S: Serializer>(m: &Matrix<f64>, s: S) -> Result<S::Ok, S::Error> {
        Repr {
            rows: m.rows(),
            cols: m.cols(),
            data: m.as_slice().to_vec(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix<f64>, D::Error> {
        let r = Repr::deserialize(d)?;
        Matrix::new(r.rows, r.cols, r.data).map_err(serde::de::Error::custom)
    }
}
