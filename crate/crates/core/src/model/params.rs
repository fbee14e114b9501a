use crate::error::{Error, Result};
use crate::numkit::{Matrix, RngStream, Scalar};

/// Exclusive upper bound on the lobule count.
pub const MAX_LOBULES: usize = 100_000;

/// Feature, lobule and class counts of a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModelShape {
    pub features: usize,
    pub lobules: usize,
    pub classes: usize,
}

impl ModelShape {
    /// Validates `1 <= features <= lobules < MAX_LOBULES` and `classes >= 2`.
    pub fn new(features: usize, lobules: usize, classes: usize) -> Result<Self> {
        if features == 0 {
            return Err(Error::Param("feature count must be >= 1".into()));
        }
        if lobules < features || lobules >= MAX_LOBULES {
            return Err(Error::LobuleRange {
                f: features,
                p: lobules,
            });
        }
        if classes < 2 {
            return Err(Error::Param(format!("need at least 2 output classes, got {classes}")));
        }
        Ok(Self {
            features,
            lobules,
            classes,
        })
    }

    pub fn cofactor_len(&self) -> usize {
        self.features * self.lobules
    }

    pub fn vitamin_len(&self) -> usize {
        self.lobules * self.classes
    }

    /// Length of the flattened parameter vector, `f·p + p·o`.
    pub fn param_len(&self) -> usize {
        self.cofactor_len() + self.vitamin_len()
    }
}

/// Learnable state: cofactor matrix C (f×p) and vitamin matrix V (p×o).
#[derive(Clone, Debug, PartialEq)]
pub struct AlcParams<T> {
    shape: ModelShape,
    pub(crate) cofactor: Matrix<T>,
    pub(crate) vitamin: Matrix<T>,
}

impl<T: Scalar> AlcParams<T> {
    pub fn new(shape: ModelShape, cofactor: Matrix<T>, vitamin: Matrix<T>) -> Result<Self> {
        if cofactor.shape() != (shape.features, shape.lobules) {
            return Err(Error::shape(
                "cofactor matrix",
                cofactor.shape_str(),
                format!("{}x{}", shape.features, shape.lobules),
            ));
        }
        if vitamin.shape() != (shape.lobules, shape.classes) {
            return Err(Error::shape(
                "vitamin matrix",
                vitamin.shape_str(),
                format!("{}x{}", shape.lobules, shape.classes),
            ));
        }
        Ok(Self {
            shape,
            cofactor,
            vitamin,
        })
    }

    pub fn shape(&self) -> ModelShape {
        self.shape
    }

    pub fn cofactor(&self) -> &Matrix<T> {
        &self.cofactor
    }

    pub fn vitamin(&self) -> &Matrix<T> {
        &self.vitamin
    }

    /// C row-major followed by V row-major.
    pub fn flatten(&self) -> Vec<T> {
        let mut theta = Vec::with_capacity(self.shape.param_len());
        theta.extend_from_slice(self.cofactor.as_slice());
        theta.extend_from_slice(self.vitamin.as_slice());
        theta
    }

    pub fn unflatten(theta: &[T], shape: ModelShape) -> Result<Self> {
        if theta.len() != shape.param_len() {
            return Err(Error::shape("unflatten", theta.len(), shape.param_len()));
        }
        let (c, v) = theta.split_at(shape.cofactor_len());
        Ok(Self {
            shape,
            cofactor: Matrix::new(shape.features, shape.lobules, c.to_vec())?,
            vitamin: Matrix::new(shape.lobules, shape.classes, v.to_vec())?,
        })
    }

    pub fn cast<U: Scalar>(&self) -> AlcParams<U> {
        AlcParams {
            shape: self.shape,
            cofactor: self.cofactor.cast(),
            vitamin: self.vitamin.cast(),
        }
    }
}

/// Fills C and V uniformly from [-1, 1).
pub fn init_params<T: Scalar>(shape: ModelShape, rng: &mut RngStream) -> Result<AlcParams<T>> {
    let shape = ModelShape::new(shape.features, shape.lobules, shape.classes)?;
    let cofactor = rng.uniform_matrix(-T::one(), T::one(), shape.features, shape.lobules)?;
    let vitamin = rng.uniform_matrix(-T::one(), T::one(), shape.lobules, shape.classes)?;
    AlcParams::new(shape, cofactor, vitamin)
}
