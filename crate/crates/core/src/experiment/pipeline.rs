use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Preprocessing};
use super::registry::DatasetSpec;
use crate::data::{Dataset, LdaModel, Standardizer};
use crate::error::Result;
use crate::numkit::Matrix;

/// Preprocessing fitted on training rows: standardize, optionally project
/// with LDA, then re-standardize the projected features so the classifier
/// sees unit-scale inputs either way.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FittedPreprocessing {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standardizer: Option<Standardizer>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lda: Option<LdaModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub post_lda: Option<Standardizer>,
}

impl FittedPreprocessing {
    pub fn fit(train: &Dataset, prep: &Preprocessing) -> Result<Self> {
        train.ensure_fit_allowed("preprocessing")?;
        let mut fitted = Self::default();
        let mut x = train.x.clone();
        if prep.standardize {
            let s = Standardizer::fit(train)?;
            x = s.transform(&x)?;
            fitted.standardizer = Some(s);
        }
        if let Some(d) = prep.lda_dims {
            let lda = crate::data::lda_fit(&x, &train.y, train.n_classes, d)?;
            let projected = lda.transform(&x)?;
            if prep.standardize {
                fitted.post_lda = Some(Standardizer::fit_matrix(&projected));
            }
            fitted.lda = Some(lda);
        }
        Ok(fitted)
    }

    pub fn transform(&self, x: &Matrix<f64>) -> Result<Matrix<f64>> {
        let mut out = match &self.standardizer {
            Some(s) => s.transform(x)?,
            None => x.clone(),
        };
        if let Some(lda) = &self.lda {
            out = lda.transform(&out)?;
        }
        if let Some(s) = &self.post_lda {
            out = s.transform(&out)?;
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.standardizer.is_none() && self.lda.is_none()
    }
}

/// Feature count the classifier sees after preprocessing.
pub fn model_features(raw_features: usize, prep: &Preprocessing) -> usize {
    prep.lda_dims.unwrap_or(raw_features)
}

/// Lobule count for a run. An explicit setting is used as given (and
/// validated later); the dataset default is raised to the feature count
/// when it would violate `f <= p`, with a notice.
pub fn resolve_lobules(cfg: &ExperimentConfig, features: usize) -> Result<(usize, Option<String>)> {
    if let Some(p) = cfg.lobules {
        return Ok((p, None));
    }
    let default = DatasetSpec::lookup(&cfg.dataset_id)?.default_lobules;
    if default < features {
        Ok((
            features,
            Some(format!(
                "default lobule count {default} for {} is below its {features} features; using p = {features}",
                cfg.dataset_id
            )),
        ))
    } else {
        Ok((default, None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Role;
    use crate::numkit::RngStream;

    fn toy() -> Dataset {
        let mut rng = RngStream::new(4);
        let rows: Vec<Vec<f64>> = (0..60)
            .map(|i| {
                let c = (i % 3) as f64;
                vec![
                    c * 4.0 + rng.uniform(0.0, 1.0),
                    rng.uniform(-5.0, 5.0),
                    100.0 + rng.uniform(0.0, 1.0),
                ]
            })
            .collect();
        Dataset::new(
            "toy",
            Matrix::from_rows(&rows).unwrap(),
            (0..60).map(|i| i % 3).collect(),
            3,
            vec!["a".into(), "b".into(), "c".into()],
            vec!["x".into(), "y".into(), "z".into()],
        )
        .unwrap()
    }

    #[test]
    fn lda_output_is_restandardized() {
        let ds = toy();
        let prep = Preprocessing {
            standardize: true,
            lda_dims: Some(2),
        };
        let fitted = FittedPreprocessing::fit(&ds, &prep).unwrap();
        let out = fitted.transform(&ds.x).unwrap();
        assert_eq!(out.shape(), (60, 2));
        for c in 0..2 {
            let col = out.column(c);
            let mean = col.iter().sum::<f64>() / 60.0;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 60.0;
            assert!(mean.abs() < 1e-9 && (var - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn refuses_validation_rows() {
        let ds = toy();
        let valid = ds.subset(&[0, 1, 2, 3], Role::Validation).unwrap();
        assert!(FittedPreprocessing::fit(&valid, &Preprocessing::default()).is_err());
    }

    #[test]
    fn lobule_defaults() {
        let cfg = ExperimentConfig::for_dataset("breast_cancer").unwrap();
        let (p, notice) = resolve_lobules(&cfg, 30).unwrap();
        assert_eq!(p, 30);
        assert!(notice.is_some());
        let iris = ExperimentConfig::for_dataset("iris").unwrap();
        assert_eq!(resolve_lobules(&iris, 4).unwrap(), (10, None));
        let explicit = ExperimentConfig {
            lobules: Some(3),
            ..iris
        };
        assert_eq!(resolve_lobules(&explicit, 4).unwrap().0, 3);
    }
}
