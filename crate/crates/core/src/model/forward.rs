use super::{AlcParams, ModelShape, Variant};
use crate::error::{Error, Result};
use crate::metrics::log_loss;
use crate::numkit::{Matrix, Scalar};

/// Phase I (oxidation): `A = (X·C) / f + mean(C)`, with f the shared inner
/// dimension.
pub fn phase1<T: Scalar>(x: &Matrix<T>, cofactor: &Matrix<T>) -> Result<Matrix<T>> {
    mean_shifted_product(x, cofactor, "phase1")
}

/// Phase II (conjugation): `B = (A'·V) / p + mean(V)`.
pub fn phase2<T: Scalar>(activated: &Matrix<T>, vitamin: &Matrix<T>) -> Result<Matrix<T>> {
    mean_shifted_product(activated, vitamin, "phase2")
}

fn mean_shifted_product<T: Scalar>(input: &Matrix<T>, weights: &Matrix<T>, op: &'static str) -> Result<Matrix<T>> {
    if input.cols() != weights.rows() {
        return Err(Error::shape(op, input.shape_str(), weights.shape_str()));
    }
    let inner = T::from_count(weights.rows());
    let bias = weights.mean_all();
    let mut out = input.matmul(weights)?;
    out.map_inplace(|v| v / inner + bias);
    Ok(out)
}

/// Class scores before the softmax.
pub fn pre_softmax<T: Scalar>(x: &Matrix<T>, params: &AlcParams<T>, variant: Variant) -> Result<Matrix<T>> {
    let shape = params.shape();
    if x.cols() != shape.features {
        return Err(Error::shape("forward", x.shape_str(), format!("?x{}", shape.features)));
    }
    match variant {
        Variant::Full | Variant::RandomCofactor | Variant::IdentityVitamin => {
            phase2(&phase1(x, params.cofactor())?.relu(), params.vitamin())
        }
        Variant::Phase1Only => phase1(x, params.cofactor())?.relu().matmul(params.vitamin()),
        Variant::Phase2Only => phase2(&x.matmul(params.cofactor())?, params.vitamin()),
    }
}

/// Class probabilities; every row sums to one.
pub fn forward<T: Scalar>(x: &Matrix<T>, params: &AlcParams<T>, variant: Variant) -> Result<Matrix<T>> {
    Ok(pre_softmax(x, params, variant)?.softmax_rows())
}

/// Row-wise argmax; ties resolve to the lowest index.
pub fn argmax_rows<T: Scalar>(m: &Matrix<T>) -> Vec<usize> {
    m.row_iter()
        .map(|row| {
            let mut best = 0;
            for (i, &v) in row.iter().enumerate().skip(1) {
                if v > row[best] {
                    best = i;
                }
            }
            best
        })
        .collect()
}

pub fn predict<T: Scalar>(x: &Matrix<T>, params: &AlcParams<T>, variant: Variant) -> Result<Vec<usize>> {
    Ok(argmax_rows(&forward(x, params, variant)?))
}

/// Training loss of the flattened parameters `theta` (C then V, row-major):
/// categorical log loss of the forward pass against `y_onehot`.
pub fn objective<T: Scalar>(
    theta: &[T],
    x: &Matrix<T>,
    y_onehot: &Matrix<T>,
    shape: ModelShape,
    variant: Variant,
) -> Result<T> {
    let params = AlcParams::unflatten(theta, shape)?;
    if y_onehot.shape() != (x.rows(), shape.classes) {
        return Err(Error::shape(
            "objective targets",
            y_onehot.shape_str(),
            format!("{}x{}", x.rows(), shape.classes),
        ));
    }
    log_loss(y_onehot, &forward(x, &params, variant)?)
}
