use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AlcParams, ModelShape};
use crate::error::{Error, Result};
use crate::numkit::{Matrix, RngStream, Scalar};

/// Which parts of the model are active and trainable.
///
/// | variant            | forward                                   | trained |
/// |--------------------|-------------------------------------------|---------|
/// | `full`             | softmax(phase2(relu(phase1(x, C)), V))    | C, V    |
/// | `phase1-only`      | softmax(relu(phase1(x, C)) · R)           | C       |
/// | `phase2-only`      | softmax(phase2(x · E, V))                 | V       |
/// | `random-cofactor`  | as full, C resampled once                 | V       |
/// | `identity-vitamin` | as full, V = I (needs p = o)              | C       |
///
/// R is a fixed p×o map averaging contiguous blocks of lobules, E is a fixed
/// f×p zero-padded identity embedding. Both are stored in place of the
/// unused matrix so a variant's parameters stay self-contained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    #[default]
    Full,
    Phase1Only,
    Phase2Only,
    RandomCofactor,
    IdentityVitamin,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Full,
        Variant::Phase1Only,
        Variant::Phase2Only,
        Variant::RandomCofactor,
        Variant::IdentityVitamin,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::Phase1Only => "phase1-only",
            Variant::Phase2Only => "phase2-only",
            Variant::RandomCofactor => "random-cofactor",
            Variant::IdentityVitamin => "identity-vitamin",
        }
    }

    pub fn trainable(self) -> Trainable {
        match self {
            Variant::Full => Trainable::Both,
            Variant::Phase1Only | Variant::IdentityVitamin => Trainable::Cofactor,
            Variant::Phase2Only | Variant::RandomCofactor => Trainable::Vitamin,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s.trim())
            .ok_or_else(|| Error::Param(format!("unknown variant '{s}'")))
    }
}

/// The slice of the parameter vector the optimizer sees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trainable {
    Both,
    Cofactor,
    Vitamin,
}

impl Trainable {
    pub fn len(self, shape: ModelShape) -> usize {
        match self {
            Trainable::Both => shape.param_len(),
            Trainable::Cofactor => shape.cofactor_len(),
            Trainable::Vitamin => shape.vitamin_len(),
        }
    }

    pub fn extract<T: Scalar>(self, params: &AlcParams<T>) -> Vec<T> {
        match self {
            Trainable::Both => params.flatten(),
            Trainable::Cofactor => params.cofactor.as_slice().to_vec(),
            Trainable::Vitamin => params.vitamin.as_slice().to_vec(),
        }
    }

    /// Copies `theta` into the trainable part of `params`; frozen parts are
    /// left untouched.
    pub fn embed_into<T: Scalar>(self, params: &mut AlcParams<T>, theta: &[T]) -> Result<()> {
        let shape = params.shape();
        if theta.len() != self.len(shape) {
            return Err(Error::shape("trainable parameters", theta.len(), self.len(shape)));
        }
        match self {
            Trainable::Both => {
                let (c, v) = theta.split_at(shape.cofactor_len());
                params.cofactor.as_mut_slice().copy_from_slice(c);
                params.vitamin.as_mut_slice().copy_from_slice(v);
            }
            Trainable::Cofactor => params.cofactor.as_mut_slice().copy_from_slice(theta),
            Trainable::Vitamin => params.vitamin.as_mut_slice().copy_from_slice(theta),
        }
        Ok(())
    }
}

/// p×o map whose column j averages lobules `[j·p/o, (j+1)·p/o)`.
pub fn block_average<T: Scalar>(lobules: usize, classes: usize) -> Result<Matrix<T>> {
    if lobules < classes {
        return Err(Error::Variant(format!(
            "phase1-only needs at least one lobule per class (p={lobules}, o={classes})"
        )));
    }
    let mut m = Matrix::zeros(lobules, classes);
    for j in 0..classes {
        let (start, end) = (j * lobules / classes, (j + 1) * lobules / classes);
        let w = T::one() / T::from_count(end - start);
        for r in start..end {
            m[(r, j)] = w;
        }
    }
    Ok(m)
}

/// f×p embedding with ones on the leading diagonal.
pub fn padded_embedding<T: Scalar>(features: usize, lobules: usize) -> Matrix<T> {
    let mut m = Matrix::zeros(features, lobules);
    for i in 0..features.min(lobules) {
        m[(i, i)] = T::one();
    }
    m
}

/// Parameters with a variant's frozen components installed.
#[derive(Clone, Debug, PartialEq)]
pub struct VariantModel<T> {
    pub params: AlcParams<T>,
    pub variant: Variant,
    pub trainable: Trainable,
}

pub fn make_variant<T: Scalar>(params: AlcParams<T>, variant: Variant, rng: &mut RngStream) -> Result<VariantModel<T>> {
    let shape = params.shape();
    let mut params = params;
    match variant {
        Variant::Full => {}
        Variant::Phase1Only => params.vitamin = block_average(shape.lobules, shape.classes)?,
        Variant::Phase2Only => params.cofactor = padded_embedding(shape.features, shape.lobules),
        Variant::RandomCofactor => {
            params.cofactor = rng.uniform_matrix(-T::one(), T::one(), shape.features, shape.lobules)?;
        }
        Variant::IdentityVitamin => {
            if shape.lobules != shape.classes {
                return Err(Error::Variant(format!(
                    "identity-vitamin needs p == o, got p={} o={}",
                    shape.lobules, shape.classes
                )));
            }
            params.vitamin = Matrix::identity(shape.lobules);
        }
    }
    Ok(VariantModel {
        params,
        variant,
        trainable: variant.trainable(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::init_params;

    fn params(f: usize, p: usize, o: usize) -> AlcParams<f64> {
        init_params(ModelShape::new(f, p, o).unwrap(), &mut RngStream::new(2)).unwrap()
    }

    #[test]
    fn tags_roundtrip() {
        for v in Variant::ALL {
            assert_eq!(v.as_str().parse::<Variant>().unwrap(), v);
        }
        assert!("phase3-only".parse::<Variant>().is_err());
    }

    #[test]
    fn full_is_unchanged() {
        let p = params(3, 4, 2);
        let vm = make_variant(p.clone(), Variant::Full, &mut RngStream::new(0)).unwrap();
        assert_eq!(vm.params, p);
        assert_eq!(vm.trainable, Trainable::Both);
    }

    #[test]
    fn identity_vitamin() {
        let vm = make_variant(params(2, 3, 3), Variant::IdentityVitamin, &mut RngStream::new(0)).unwrap();
        assert_eq!(vm.params.vitamin(), &Matrix::identity(3));
        assert_eq!(vm.trainable, Trainable::Cofactor);
        let err = make_variant(params(2, 4, 3), Variant::IdentityVitamin, &mut RngStream::new(0)).unwrap_err();
        assert!(matches!(err, Error::Variant(_)));
    }

    #[test]
    fn random_cofactor_resamples_c_only() {
        let p = params(3, 5, 2);
        let vm = make_variant(p.clone(), Variant::RandomCofactor, &mut RngStream::new(99)).unwrap();
        assert_ne!(vm.params.cofactor(), p.cofactor());
        assert_eq!(vm.params.vitamin(), p.vitamin());
        assert_eq!(vm.trainable, Trainable::Vitamin);
    }

    #[test]
    fn block_average_columns() {
        let r: Matrix<f64> = block_average(10, 3).unwrap();
        // blocks [0,3), [3,6), [6,10)
        assert_eq!(r.column(0)[..3], [1.0 / 3.0; 3]);
        assert_eq!(r.column(2)[6..], [0.25; 4]);
        for j in 0..3 {
            assert!((r.column(j).iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
        for i in 0..10 {
            assert_eq!(r.row(i).iter().filter(|&&v| v > 0.0).count(), 1);
        }
        assert!(block_average::<f64>(2, 3).is_err());
    }

    #[test]
    fn embed_keeps_frozen_parts() {
        let mut p = params(2, 3, 2);
        let c_before = p.cofactor().clone();
        Trainable::Vitamin.embed_into(&mut p, &[0.5; 6]).unwrap();
        assert_eq!(p.cofactor(), &c_before);
        assert!(p.vitamin().as_slice().iter().all(|&v| v == 0.5));
        assert!(Trainable::Vitamin.embed_into(&mut p, &[0.5; 5]).is_err());
        assert_eq!(Trainable::Cofactor.extract(&p), c_before.as_slice());
    }
}
