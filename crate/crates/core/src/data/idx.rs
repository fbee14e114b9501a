//! IDX files as used by MNIST: a big-endian magic number `0x0000TTNN`
//! (TT = element type, NN = number of dimensions), one big-endian u32 per
//! dimension, then the payload.

use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};
use crate::numkit::Matrix;

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;
const UBYTE: u8 = 0x08;

/// A decoded unsigned-byte IDX tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdxTensor {
    pub dims: Vec<usize>,
    pub data: Vec<u8>,
}

pub fn decode_idx(bytes: &[u8], source: &str) -> Result<IdxTensor> {
    if bytes.len() < 4 {
        return Err(Error::ingest(source, "file shorter than the IDX magic number"));
    }
    if bytes[0] != 0 || bytes[1] != 0 {
        return Err(Error::ingest(source, format!("bad IDX magic {:02x?}", &bytes[..4])));
    }
    if bytes[2] != UBYTE {
        return Err(Error::ingest(
            source,
            format!("unsupported IDX element type 0x{:02x}", bytes[2]),
        ));
    }
    let ndims = bytes[3] as usize;
    let header = 4 + 4 * ndims;
    if ndims == 0 || bytes.len() < header {
        return Err(Error::ingest(source, "truncated IDX header"));
    }
    let dims: Vec<usize> = bytes[4..header]
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]) as usize)
        .collect();
    let expected: usize = dims.iter().product();
    let payload = &bytes[header..];
    if payload.len() != expected {
        return Err(Error::ingest(
            source,
            format!(
                "payload has {} bytes, dimensions {dims:?} need {expected}",
                payload.len()
            ),
        ));
    }
    Ok(IdxTensor {
        dims,
        data: payload.to_vec(),
    })
}

pub fn encode_idx(tensor: &IdxTensor) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + 4 * tensor.dims.len() + tensor.data.len());
    out.extend_from_slice(&[0, 0, UBYTE, tensor.dims.len() as u8]);
    for &d in &tensor.dims {
        out.extend_from_slice(&(d as u32).to_be_bytes());
    }
    out.extend_from_slice(&tensor.data);
    out
}

pub(crate) fn read_tensor(path: &Path, magic: u32) -> Result<IdxTensor> {
    let source = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|e| Error::ingest(&source, e))?;
    if bytes.len() >= 4 {
        let found = u32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]);
        if found != magic {
            return Err(Error::ingest(
                &source,
                format!("magic 0x{found:08x}, expected 0x{magic:08x}"),
            ));
        }
    }
    decode_idx(&bytes, &source)
}

/// Loads an image file (n×rows×cols) and a label file (n) into a dataset
/// with one flattened row of raw 0..255 pixel values per image.
pub fn load_idx(images_path: impl AsRef<Path>, labels_path: impl AsRef<Path>) -> Result<Dataset> {
    let (images_path, labels_path) = (images_path.as_ref(), labels_path.as_ref());
    let images = read_tensor(images_path, IMAGES_MAGIC)?;
    let labels = read_tensor(labels_path, LABELS_MAGIC)?;
    let n = images.dims[0];
    if labels.dims[0] != n {
        return Err(Error::ingest(
            labels_path.display(),
            format!("{} labels for {n} images", labels.dims[0]),
        ));
    }
    let width: usize = images.dims[1..].iter().product();
    if n == 0 || width == 0 {
        return Err(Error::ingest(images_path.display(), "empty image tensor"));
    }
    let x = Matrix::new(n, width, images.data.iter().map(|&p| f64::from(p)).collect())?;
    let y: Vec<usize> = labels.data.iter().map(|&l| l as usize).collect();
    let n_classes = y.iter().max().map_or(0, |m| m + 1);
    let id = images_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "idx".into());
    Dataset::new(
        id,
        x,
        y,
        n_classes,
        (0..width).map(|i| format!("px{i}")).collect(),
        (0..n_classes).map(|c| c.to_string()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, t: &IdxTensor) -> std::path::PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, encode_idx(t)).unwrap();
        p
    }

    #[test]
    fn magic_numbers() {
        let t = IdxTensor {
            dims: vec![2, 3, 3],
            data: vec![0; 18],
        };
        let bytes = encode_idx(&t);
        assert_eq!(
            u32::from_be_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]),
            IMAGES_MAGIC
        );
        assert_eq!(decode_idx(&bytes, "t").unwrap().dims, vec![2, 3, 3]);
    }

    #[test]
    fn loads_and_flattens() {
        let dir = tempfile::tempdir().unwrap();
        let imgs = IdxTensor {
            dims: vec![3, 2, 2],
            data: (0..12).collect(),
        };
        let labs = IdxTensor {
            dims: vec![3],
            data: vec![1, 0, 1],
        };
        let ds = load_idx(write(dir.path(), "i", &imgs), write(dir.path(), "l", &labs)).unwrap();
        assert_eq!(ds.x.shape(), (3, 4));
        assert_eq!(ds.x.row(1), &[4.0, 5.0, 6.0, 7.0]);
        assert_eq!(ds.y, vec![1, 0, 1]);
        assert_eq!(ds.n_classes, 2);
    }

    #[test]
    fn rejects_bad_files() {
        let dir = tempfile::tempdir().unwrap();
        let imgs = IdxTensor {
            dims: vec![3, 2, 2],
            data: (0..12).collect(),
        };
        let labs = IdxTensor {
            dims: vec![2],
            data: vec![1, 0],
        };
        let i = write(dir.path(), "i", &imgs);
        let l = write(dir.path(), "l", &labs);
        // count mismatch
        assert!(load_idx(&i, &l).is_err());
        // swapped files fail the magic check
        assert!(load_idx(&l, &i).unwrap_err().to_string().contains("magic"));
        // truncated payload
        let mut bytes = encode_idx(&imgs);
        bytes.truncate(bytes.len() - 1);
        assert!(decode_idx(&bytes, "t").unwrap_err().to_string().contains("payload"));
        assert!(decode_idx(&[0, 0], "t").is_err());
    }
}
