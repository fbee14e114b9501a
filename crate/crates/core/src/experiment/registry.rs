//! Known datasets: where they come from, their default lobule counts, and
//! how to download and verify the ones that are not bundled.

use std::io::Read;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use crate::data::{parse_csv, read_tensor, stratified_subsample, Dataset, LabelColumn, IMAGES_MAGIC, LABELS_MAGIC};
use crate::error::{Error, Result};
use crate::numkit::{mix_seed, Matrix, RngStream};

/// Environment variable overriding the dataset cache directory.
pub const DATA_DIR_ENV: &str = "ALC_DATA_DIR";

/// Stream id for the pre-split subsample draw.
const SUBSAMPLE_STREAM: u64 = 0x5u64 << 32;

const IRIS_CSV: &str = include_str!("../../data/iris.csv");
const WINE_CSV: &str = include_str!("../../data/wine.csv");
const BREAST_CANCER_CSV: &str = include_str!("../../data/breast_cancer.csv");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// CSV text compiled into the binary.
    Bundled(&'static str),
    /// CSV file in the cache, label in the named column.
    CsvFile { file: &'static str, label: &'static str },
    /// MNIST IDX files, train and test concatenated (70k rows).
    Mnist,
}

/// Registry entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DatasetSpec {
    pub id: &'static str,
    pub default_lobules: usize,
    pub default_lda_dims: Option<usize>,
    pub default_subsample: Option<usize>,
    /// Candidate lobule counts for `--lobule-grid`; values below the
    /// feature count are skipped at run time.
    pub lobule_grid: &'static [usize],
    pub origin: Origin,
}

pub const MNIST_FILES: [&str; 4] = [
    "train-images-idx3-ubyte",
    "train-labels-idx1-ubyte",
    "t10k-images-idx3-ubyte",
    "t10k-labels-idx1-ubyte",
];

pub const DATASETS: [DatasetSpec; 5] = [
    DatasetSpec {
        id: "iris",
        default_lobules: 10,
        default_lda_dims: None,
        default_subsample: None,
        lobule_grid: &[4, 5, 10, 15, 20, 30],
        origin: Origin::Bundled(IRIS_CSV),
    },
    DatasetSpec {
        id: "breast_cancer",
        default_lobules: 10,
        default_lda_dims: None,
        default_subsample: None,
        lobule_grid: &[30, 40, 50, 60],
        origin: Origin::Bundled(BREAST_CANCER_CSV),
    },
    DatasetSpec {
        id: "wine",
        default_lobules: 15,
        default_lda_dims: None,
        default_subsample: None,
        lobule_grid: &[13, 15, 20, 30],
        origin: Origin::Bundled(WINE_CSV),
    },
    DatasetSpec {
        id: "voice_gender",
        default_lobules: 15,
        default_lda_dims: None,
        default_subsample: None,
        lobule_grid: &[20, 25, 30, 40],
        origin: Origin::CsvFile {
            file: "voice.csv",
            label: "label",
        },
    },
    DatasetSpec {
        id: "mnist",
        default_lobules: 50,
        default_lda_dims: Some(9),
        default_subsample: Some(2000),
        lobule_grid: &[10, 20, 50, 80],
        origin: Origin::Mnist,
    },
];

impl DatasetSpec {
    /// Accepts the registry ids plus a few spellings (`breast-cancer`, `voice`).
    pub fn lookup(id: &str) -> Result<&'static DatasetSpec> {
        let norm = id.trim().to_ascii_lowercase().replace('-', "_");
        let norm = match norm.as_str() {
            "voice" => "voice_gender".to_string(),
            "bc" => "breast_cancer".to_string(),
            _ => norm,
        };
        DATASETS
            .iter()
            .find(|d| d.id == norm)
            .ok_or_else(|| Error::Param(format!("unknown dataset '{id}' (known: {})", known_ids())))
    }

    pub fn is_bundled(&self) -> bool {
        matches!(self.origin, Origin::Bundled(_))
    }
}

fn known_ids() -> String {
    DATASETS.iter().map(|d| d.id).collect::<Vec<_>>().join(", ")
}

/// `$ALC_DATA_DIR`, else `$HOME/.cache/alc-data`, else `./alc-data`.
pub fn data_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV).filter(|d| !d.is_empty()) {
        return PathBuf::from(dir);
    }
    match std::env::var_os("HOME") {
        Some(home) => Path::new(&home).join(".cache").join("alc-data"),
        None => PathBuf::from("alc-data"),
    }
}

/// Loads the configured dataset and applies the configured subsample.
pub fn load_dataset(cfg: &ExperimentConfig, data_dir: &Path) -> Result<Dataset> {
    let spec = DatasetSpec::lookup(&cfg.dataset_id)?;
    let subsample_rng = || RngStream::new(mix_seed(cfg.seed, SUBSAMPLE_STREAM));
    let full = match spec.origin {
        Origin::Bundled(text) => parse_csv(text.as_bytes(), spec.id, &LabelColumn::Last, true)?,
        Origin::CsvFile { file, label } => {
            let path = data_dir.join(spec.id).join(file);
            if !path.exists() {
                return Err(Error::MissingDataset(spec.id.into()));
            }
            let f = std::fs::File::open(&path).map_err(|e| Error::ingest(path.display(), e))?;
            parse_csv(f, spec.id, &LabelColumn::Name(label.into()), true)?
        }
        Origin::Mnist => return load_mnist(&data_dir.join(spec.id), cfg.subsample, &mut subsample_rng()),
    };
    match cfg.subsample {
        Some(n) if n < full.len() => {
            let idx = stratified_subsample(&full.y, n, &mut subsample_rng())?;
            let mut sub = full.subset(&idx, crate::data::Role::Full)?;
            sub.id = full.id.clone();
            Ok(sub)
        }
        _ => Ok(full),
    }
}

/// Reads the four MNIST files from `dir` and keeps a stratified subsample
/// (pixels are converted to floats only for the kept rows).
pub fn load_mnist(dir: &Path, subsample: Option<usize>, rng: &mut RngStream) -> Result<Dataset> {
    if MNIST_FILES.iter().any(|f| !dir.join(f).exists()) {
        return Err(Error::MissingDataset("mnist".into()));
    }
    let mut pixels = Vec::new();
    let mut labels = Vec::new();
    let mut width = 0;
    for pair in MNIST_FILES.chunks(2) {
        let images = read_tensor(&dir.join(pair[0]), IMAGES_MAGIC)?;
        let labs = read_tensor(&dir.join(pair[1]), LABELS_MAGIC)?;
        if images.dims[0] != labs.dims[0] {
            return Err(Error::ingest(
                pair[1],
                format!("{} labels for {} images", labs.dims[0], images.dims[0]),
            ));
        }
        width = images.dims[1..].iter().product();
        pixels.extend_from_slice(&images.data);
        labels.extend(labs.data.iter().map(|&l| l as usize));
    }
    let keep: Vec<usize> = match subsample {
        Some(n) if n < labels.len() => stratified_subsample(&labels, n, rng)?,
        _ => (0..labels.len()).collect(),
    };
    let mut data = Vec::with_capacity(keep.len() * width);
    for &i in &keep {
        data.extend(pixels[i * width..(i + 1) * width].iter().map(|&p| f64::from(p)));
    }
    let y: Vec<usize> = keep.iter().map(|&i| labels[i]).collect();
    let n_classes = y.iter().max().map_or(0, |m| m + 1);
    Dataset::new(
        "mnist",
        Matrix::new(keep.len(), width, data)?,
        y,
        n_classes,
        (0..width).map(|i| format!("px{i}")).collect(),
        (0..n_classes).map(|c| c.to_string()).collect(),
    )
}

// ---------------------------------------------------------------- fetching

/// A file expected after download, with its pinned digest when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedFile {
    /// Path inside the archive (or the local name for plain downloads).
    pub archive_path: String,
    pub local_name: String,
    pub sha256: Option<String>,
}

/// Where a dataset's files come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RemoteSource {
    /// A gzipped tarball holding the files.
    Tarball {
        url: String,
        sha256: Option<String>,
        files: Vec<ExpectedFile>,
    },
    /// A single file fetched as is.
    Plain { url: String, file: ExpectedFile },
}

const MNIST_TARBALL_URL: &str = "https://registry.npmjs.org/mnist-data/-/mnist-data-1.2.6.tgz";
const MNIST_TARBALL_SHA256: &str = "8f87f2d0d9133e6c9f7012d6d26bb05409e7e870a1de21d1a600b8d400cc07ed";
const MNIST_SHA256: [&str; 4] = [
    "ba891046e6505d7aadcbbe25680a0738ad16aec93bde7f9b65e87a2fc25776db",
    "65a50cbbf4e906d70832878ad85ccda5333a97f0f4c3dd2ef09a8a9eef7101c5",
    "0fa7898d509279e482958e8ce81c8e77db3f2f8254e26661ceb7762c4d494ce7",
    "ff7bcfd416de33731a308c3f266cc351222c34898ecbeaf847f06e48f7ec33f2",
];
const VOICE_URL: &str = "https://raw.githubusercontent.com/primaryobjects/voice-gender/master/voice.csv";

/// Download source for a non-bundled dataset.
pub fn remote_source(spec: &DatasetSpec) -> Option<RemoteSource> {
    match spec.origin {
        Origin::Bundled(_) => None,
        Origin::Mnist => Some(RemoteSource::Tarball {
            url: MNIST_TARBALL_URL.into(),
            sha256: Some(MNIST_TARBALL_SHA256.into()),
            files: MNIST_FILES
                .iter()
                .zip(MNIST_SHA256)
                .map(|(name, sha)| ExpectedFile {
                    archive_path: format!("package/data/{name}"),
                    local_name: name.to_string(),
                    sha256: Some(sha.into()),
                })
                .collect(),
        }),
        Origin::CsvFile { file, .. } => Some(RemoteSource::Plain {
            url: VOICE_URL.into(),
            file: ExpectedFile {
                archive_path: file.into(),
                local_name: file.into(),
                sha256: None,
            },
        }),
    }
}

/// Outcome of a fetch.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FetchReport {
    pub files: Vec<PathBuf>,
    pub notices: Vec<String>,
    /// False when everything was already present and verified.
    pub downloaded: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

const MAX_DOWNLOAD_BYTES: u64 = 512 * 1024 * 1024;

/// HTTP(S) GET of the whole body. Certificates are checked against the
/// operating system's trust store.
pub fn http_get(url: &str) -> Result<Vec<u8>> {
    let download = |message: String| Error::Download {
        url: url.to_string(),
        message,
    };
    let tls = ureq::tls::TlsConfig::builder()
        .root_certs(ureq::tls::RootCerts::PlatformVerifier)
        .build();
    let agent: ureq::Agent = ureq::Agent::config_builder().tls_config(tls).build().into();
    let mut resp = agent.get(url).call().map_err(|e| download(e.to_string()))?;
    resp.body_mut()
        .with_config()
        .limit(MAX_DOWNLOAD_BYTES)
        .read_to_vec()
        .map_err(|e| download(e.to_string()))
}

/// Downloads `dataset_id` into `data_dir/<id>/` over HTTP(S).
pub fn fetch_dataset(dataset_id: &str, data_dir: &Path) -> Result<FetchReport> {
    fetch_dataset_with(dataset_id, data_dir, &http_get)
}

/// [`fetch_dataset`] with an injectable downloader.
pub fn fetch_dataset_with(
    dataset_id: &str,
    data_dir: &Path,
    get: &dyn Fn(&str) -> Result<Vec<u8>>,
) -> Result<FetchReport> {
    let spec = DatasetSpec::lookup(dataset_id)?;
    match remote_source(spec) {
        None => Ok(FetchReport {
            files: Vec::new(),
            notices: vec![format!("{} is bundled with the crate; nothing to fetch", spec.id)],
            downloaded: false,
        }),
        Some(source) => fetch_source(&source, &data_dir.join(spec.id), get),
    }
}

/// Fetches `source` into `dest`, verifying digests. Files that fail their
/// digest are deleted. Files without a pinned digest get a `.sha256`
/// sidecar recording the digest seen on first download, which later fetches
/// verify against.
pub fn fetch_source(source: &RemoteSource, dest: &Path, get: &dyn Fn(&str) -> Result<Vec<u8>>) -> Result<FetchReport> {
    std::fs::create_dir_all(dest)?;
    let files: Vec<&ExpectedFile> = match source {
        RemoteSource::Tarball { files, .. } => files.iter().collect(),
        RemoteSource::Plain { file, .. } => vec![file],
    };
    let mut report = FetchReport::default();

    if files.iter().all(|f| verify_existing(dest, f).unwrap_or(false)) {
        report.files = files.iter().map(|f| dest.join(&f.local_name)).collect();
        report
            .notices
            .push(format!("{} already present and verified", dest.display()));
        return Ok(report);
    }

    report.downloaded = true;
    match source {
        RemoteSource::Tarball { url, sha256, files } => {
            let bytes = get(url)?;
            if let Some(expected) = sha256 {
                let actual = sha256_hex(&bytes);
                if &actual != expected {
                    return Err(Error::Integrity {
                        path: PathBuf::from(url),
                        expected: expected.clone(),
                        actual,
                    });
                }
            }
            let mut contents = extract_tarball(&bytes, files)?;
            for f in files {
                let data = contents
                    .remove(&f.archive_path)
                    .ok_or_else(|| Error::ingest(url, format!("archive lacks {}", f.archive_path)))?;
                report.files.push(store_verified(dest, f, &data, &mut report.notices)?);
            }
        }
        RemoteSource::Plain { url, file } => {
            let data = get(url)?;
            report
                .files
                .push(store_verified(dest, file, &data, &mut report.notices)?);
        }
    }
    Ok(report)
}

fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".sha256");
    path.with_file_name(name)
}

fn expected_digest(dest: &Path, f: &ExpectedFile) -> Option<String> {
    f.sha256.clone().or_else(|| {
        std::fs::read_to_string(sidecar(&dest.join(&f.local_name)))
            .ok()
            .map(|s| s.trim().to_string())
    })
}

fn verify_existing(dest: &Path, f: &ExpectedFile) -> Result<bool> {
    let path = dest.join(&f.local_name);
    let Some(expected) = expected_digest(dest, f) else {
        return Ok(false);
    };
    let bytes = std::fs::read(&path)?;
    Ok(sha256_hex(&bytes) == expected)
}

fn store_verified(dest: &Path, f: &ExpectedFile, data: &[u8], notices: &mut Vec<String>) -> Result<PathBuf> {
    let path = dest.join(&f.local_name);
    std::fs::write(&path, data)?;
    let actual = sha256_hex(data);
    match expected_digest(dest, f) {
        Some(expected) if expected != actual => {
            let _ = std::fs::remove_file(&path);
            Err(Error::Integrity { path, expected, actual })
        }
        Some(_) => Ok(path),
        None => {
            std::fs::write(sidecar(&path), format!("{actual}\n"))?;
            notices.push(format!(
                "no pinned checksum for {}; recorded sha256 {actual} for later verification",
                f.local_name
            ));
            Ok(path)
        }
    }
}

fn extract_tarball(bytes: &[u8], wanted: &[ExpectedFile]) -> Result<std::collections::HashMap<String, Vec<u8>>> {
    let mut out = std::collections::HashMap::new();
    let mut archive = tar::Archive::new(flate2::read::GzDecoder::new(bytes));
    let entries = archive.entries().map_err(|e| Error::ingest("tarball", e))?;
    for entry in entries {
        let mut entry = entry.map_err(|e| Error::ingest("tarball", e))?;
        let path = entry
            .path()
            .map_err(|e| Error::ingest("tarball", e))?
            .to_string_lossy()
            .into_owned();
        if wanted.iter().any(|w| w.archive_path == path) {
            let mut buf = Vec::new();
            entry.read_to_end(&mut buf).map_err(|e| Error::ingest(&path, e))?;
            out.insert(path, buf);
        }
    }
    Ok(out)
}
