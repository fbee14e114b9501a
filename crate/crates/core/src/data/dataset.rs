use crate::error::{Error, Result};
use crate::numkit::{Matrix, Scalar};

/// Which rows a dataset view holds. Preprocessing fits and training refuse
/// `Validation` views.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Full,
    Train,
    Validation,
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub id: String,
    pub x: Matrix<f64>,
    /// Labels in `0..n_classes`.
    pub y: Vec<usize>,
    pub n_classes: usize,
    pub feature_names: Vec<String>,
    /// Original label text per class index, in first-appearance order.
    pub label_names: Vec<String>,
    role: Role,
}

impl Dataset {
    /// Builds a full dataset; every class must occur at least once.
    pub fn new(
        id: impl Into<String>,
        x: Matrix<f64>,
        y: Vec<usize>,
        n_classes: usize,
        feature_names: Vec<String>,
        label_names: Vec<String>,
    ) -> Result<Self> {
        let id = id.into();
        if x.rows() != y.len() {
            return Err(Error::shape(
                "Dataset::new",
                x.shape_str(),
                format!("{} labels", y.len()),
            ));
        }
        if feature_names.len() != x.cols() {
            return Err(Error::shape(
                "Dataset::new feature names",
                feature_names.len(),
                x.cols(),
            ));
        }
        if label_names.len() != n_classes {
            return Err(Error::shape("Dataset::new label names", label_names.len(), n_classes));
        }
        let mut seen = vec![false; n_classes];
        for &label in &y {
            if label >= n_classes {
                return Err(Error::ingest(&id, format!("label {label} >= class count {n_classes}")));
            }
            seen[label] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::ingest(&id, format!("class {missing} has no samples")));
        }
        Ok(Self {
            id,
            x,
            y,
            n_classes,
            feature_names,
            label_names,
            role: Role::Full,
        })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.x.cols()
    }

    pub fn role(&self) -> Role {
        self.role
    }

    /// Rows `indices` as a view with the given role. Class count and names
    /// are inherited even if some class is absent from the subset.
    pub fn subset(&self, indices: &[usize], role: Role) -> Result<Dataset> {
        Ok(Dataset {
            id: self.id.clone(),
            x: self.x.select_rows(indices)?,
            y: indices.iter().map(|&i| self.y[i]).collect(),
            n_classes: self.n_classes,
            feature_names: self.feature_names.clone(),
            label_names: self.label_names.clone(),
            role,
        })
    }

    /// Same rows and labels with a new feature matrix (after a transform).
    pub fn with_features(&self, x: Matrix<f64>, feature_names: Vec<String>) -> Result<Dataset> {
        if x.rows() != self.len() || feature_names.len() != x.cols() {
            return Err(Error::shape("with_features", x.shape_str(), self.len()));
        }
        Ok(Dataset {
            x,
            feature_names,
            ..self.clone()
        })
    }

    /// Errors if this view holds validation rows.
    pub fn ensure_fit_allowed(&self, op: &str) -> Result<()> {
        if self.role == Role::Validation {
            return Err(Error::Param(format!("{op} must not be fitted on validation rows")));
        }
        Ok(())
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes];
        for &l in &self.y {
            counts[l] += 1;
        }
        counts
    }
}

/// One row per label with a single 1 in the label's column.
pub fn one_hot<T: Scalar>(y: &[usize], n_classes: usize) -> Result<Matrix<T>> {
    if y.is_empty() || n_classes == 0 {
        return Err(Error::Param("one_hot needs at least one label and one class".into()));
    }
    let mut m = Matrix::zeros(y.len(), n_classes);
    for (i, &label) in y.iter().enumerate() {
        if label >= n_classes {
            return Err(Error::Param(format!(
                "label {label} out of range for {n_classes} classes"
            )));
        }
        m[(i, label)] = T::one();
    }
    Ok(m)
}
