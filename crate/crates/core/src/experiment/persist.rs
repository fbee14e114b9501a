//! Versioned JSON model files.
//!
//! ```json
//! {"format_version": 1, "f": 4, "p": 10, "o": 3, "variant": "full",
//!  "C": [...row-major f×p...], "V": [...row-major p×o...],
//!  "training_meta": {"seed": 42, "epochs": 500, "agents": 10, "dataset_id": "iris"}}
//! ```
//!
//! `training_meta` may also carry the fitted preprocessing and the label
//! names so a saved model can score raw rows on its own.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::pipeline::FittedPreprocessing;
use crate::error::{Error, Result};
use crate::model::{predict, AlcParams, ModelShape, Variant};
use crate::numkit::Matrix;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub seed: u64,
    pub epochs: usize,
    pub agents: usize,
    pub dataset_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preprocessing: Option<FittedPreprocessing>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub label_names: Vec<String>,
}

/// A trained model with everything needed to reuse it.
#[derive(Clone, Debug, PartialEq)]
pub struct SavedModel {
    pub params: AlcParams<f64>,
    pub variant: Variant,
    pub meta: TrainingMeta,
}

#[derive(Serialize, Deserialize)]
struct Document {
    format_version: u32,
    f: usize,
    p: usize,
    o: usize,
    variant: Variant,
    #[serde(rename = "C")]
    cofactor: Vec<f64>,
    #[serde(rename = "V")]
    vitamin: Vec<f64>,
    training_meta: TrainingMeta,
}

impl SavedModel {
    pub fn to_json(&self) -> Result<String> {
        let shape = self.params.shape();
        let doc = Document {
            format_version: FORMAT_VERSION,
            f: shape.features,
            p: shape.lobules,
            o: shape.classes,
            variant: self.variant,
            cofactor: self.params.cofactor().as_slice().to_vec(),
            vitamin: self.params.vitamin().as_slice().to_vec(),
            training_meta: self.meta.clone(),
        };
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Persistence(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Persistence(format!("malformed model document: {e}")))?;
        match value.get("format_version").and_then(|v| v.as_u64()) {
            Some(v) if v == u64::from(FORMAT_VERSION) => {}
            Some(v) => {
                return Err(Error::Persistence(format!(
                    "unsupported format_version {v}, this build reads {FORMAT_VERSION}"
                )))
            }
            None => return Err(Error::Persistence("missing format_version".into())),
        }
        let doc: Document =
            serde_json::from_value(value).map_err(|e| Error::Persistence(format!("malformed model document: {e}")))?;
        let shape = ModelShape::new(doc.f, doc.p, doc.o).map_err(|e| Error::Persistence(e.to_string()))?;
        let bad = |e: Error| Error::Persistence(e.to_string());
        let params = AlcParams::new(
            shape,
            Matrix::new(doc.f, doc.p, doc.cofactor).map_err(bad)?,
            Matrix::new(doc.p, doc.o, doc.vitamin).map_err(bad)?,
        )
        .map_err(bad)?;
        Ok(Self {
            params,
            variant: doc.variant,
            meta: doc.training_meta,
        })
    }
}

impl SavedModel {
    /// Applies the stored preprocessing to raw feature rows and returns
    /// the predicted class indices.
    pub fn predict(&self, raw: &Matrix<f64>) -> Result<Vec<usize>> {
        let x = match &self.meta.preprocessing {
            Some(prep) => prep.transform(raw)?,
            None => raw.clone(),
        };
        let f = self.params.shape().features;
        if x.cols() != f {
            return Err(Error::shape("predict", x.shape_str(), format!("n x {f}")));
        }
        predict(&x, &self.params, self.variant)
    }

    /// Class name for a predicted index, or the index itself when the
    /// model carries no label names.
    pub fn label_name(&self, class: usize) -> String {
        self.meta
            .label_names
            .get(class)
            .cloned()
            .unwrap_or_else(|| class.to_string())
    }
}

pub fn save_model(model: &SavedModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, model.to_json()?)
        .map_err(|e| Error::Persistence(format!("cannot write {}: {e}", path.display())))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<SavedModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Persistence(format!("cannot read {}: {e}", path.display())))?;
    SavedModel::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::init_params;
    use crate::numkit::RngStream;

    fn sample() -> SavedModel {
        let shape = ModelShape::new(4, 10, 3).unwrap();
        SavedModel {
            params: init_params(shape, &mut RngStream::new(7)).unwrap(),
            variant: Variant::Full,
            meta: TrainingMeta {
                seed: 7,
                epochs: 500,
                agents: 10,
                dataset_id: "iris".into(),
                preprocessing: None,
                label_names: vec![],
            },
        }
    }

    #[test]
    fn round_trip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let model = sample();
        save_model(&model, &path).unwrap();
        let back = load_model(&path).unwrap();
        let bits = |m: &SavedModel| -> Vec<u64> { m.params.flatten().iter().map(|v| v.to_bits()).collect() };
        assert_eq!(bits(&model), bits(&back));
        assert_eq!(model, back);
    }

    #[test]
    fn field_names() {
        let v: serde_json::Value = serde_json::from_str(&sample().to_json().unwrap()).unwrap();
        for key in ["format_version", "f", "p", "o", "variant", "C", "V", "training_meta"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        for key in ["seed", "epochs", "agents", "dataset_id"] {
            assert!(v["training_meta"].get(key).is_some(), "{key}");
        }
        assert_eq!(v["variant"], "full");
    }

    #[test]
    fn rejects_unknown_version_and_truncation() {
        let text = sample().to_json().unwrap();
        let v2 = text.replacen("\"format_version\": 1", "\"format_version\": 2", 1);
        let err = SavedModel::from_json(&v2).unwrap_err();
        assert!(matches!(err, Error::Persistence(_)));
        assert!(err.to_string().contains("format_version 2"));
        let cut = &text[..text.len() / 2];
        assert!(matches!(SavedModel::from_json(cut), Err(Error::Persistence(_))));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cut.json");
        std::fs::write(&path, cut).unwrap();
        assert!(matches!(load_model(&path), Err(Error::Persistence(_))));
    }

    #[test]
    fn rejects_inconsistent_lengths() {
        let text = sample().to_json().unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["C"].as_array_mut().unwrap().pop();
        assert!(matches!(
            SavedModel::from_json(&v.to_string()),
            Err(Error::Persistence(_))
        ));
    }
}
