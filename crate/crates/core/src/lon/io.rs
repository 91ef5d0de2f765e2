//! Binary model and dataset files. All integers and floats are little-endian.
//!
//! Model file:
//!
//! ```text
//! "LON1" | u32 config length | config JSON | for each tensor in LonWeights::tensors order:
//! u64 element count | f64 values ... | feature mean (u64 count, f64 ...) | feature std (same)
//! ```
//!
//! Dataset file:
//!
//! ```text
//! "LOND" | u32 version (1) | u32 raster side | u32 actor features | u32 path features |
//! u32 cells | u64 record count | records
//! record: u32 byte length | u16 key length | key UTF-8 | raster u8[3*R*R] |
//! actor f64[..] | path f64[..] | labels i8[cells]
//! ```

use std::io::{Read, Write};
use std::path::Path as FsPath;

use super::features::{FeatureBundle, ACTOR_FEATURES, PATH_FEATURES};
use super::{LonConfig, LonModel, LonWeights, Sample};
use crate::error::{Error, Result};

const MODEL_MAGIC: &[u8; 4] = b"LON1";
const DATASET_MAGIC: &[u8; 4] = b"LOND";
const DATASET_VERSION: u32 = 1;

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::Format(format!("unexpected end of file at byte {}", self.pos)));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        Ok(self.take(n * 8)?.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    }

    fn counted_f64s(&mut self, want: usize, what: &str) -> Result<Vec<f64>> {
        let n = self.u64()? as usize;
        if n != want {
            return Err(Error::Format(format!("{what}: {n} values, expected {want}")));
        }
        self.f64s(n)
    }
}

fn put_f64s(out: &mut Vec<u8>, v: &[f64]) {
    out.extend((v.len() as u64).to_le_bytes());
    for x in v {
        out.extend(x.to_le_bytes());
    }
}

pub fn model_to_bytes(m: &LonModel) -> Result<Vec<u8>> {
    let cfg = serde_json::to_vec(&m.config)?;
    let mut out = Vec::with_capacity(16 + cfg.len() + 8 * m.weights.num_parameters());
    out.extend(MODEL_MAGIC);
    out.extend((cfg.len() as u32).to_le_bytes());
    out.extend(cfg);
    for t in m.weights.tensors() {
        put_f64s(&mut out, t);
    }
    put_f64s(&mut out, &m.feature_mean);
    put_f64s(&mut out, &m.feature_std);
    Ok(out)
}

pub fn model_from_bytes(bytes: &[u8]) -> Result<LonModel> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4)? != MODEL_MAGIC {
        return Err(Error::Format("not a model file".into()));
    }
    let n = r.u32()? as usize;
    let config: LonConfig = serde_json::from_slice(r.take(n)?)?;
    config.validate()?;
    let mut weights = LonWeights::zeros(&config);
    for (i, t) in weights.tensors_mut().into_iter().enumerate() {
        *t = r.counted_f64s(t.len(), &format!("tensor {i}"))?;
    }
    let nf = config.feature_len();
    let feature_mean = r.counted_f64s(nf, "feature mean")?;
    let feature_std = r.counted_f64s(nf, "feature std")?;
    if r.pos != bytes.len() {
        return Err(Error::Format("trailing bytes after model".into()));
    }
    Ok(LonModel { config, weights, feature_mean, feature_std })
}

pub fn save_model(m: &LonModel, path: &FsPath) -> Result<()> {
    std::fs::write(path, model_to_bytes(m)?)?;
    Ok(())
}

pub fn load_model(path: &FsPath) -> Result<LonModel> {
    model_from_bytes(&std::fs::read(path)?)
}

/// Dimensions shared by every record of a dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DatasetHeader {
    pub raster_size: usize,
    pub num_cells: usize,
}

impl DatasetHeader {
    pub fn of(cfg: &LonConfig) -> Self {
        DatasetHeader { raster_size: cfg.raster_size, num_cells: cfg.num_cells }
    }

    fn raster_len(&self) -> usize {
        3 * self.raster_size * self.raster_size
    }
}

/// Streams records to a dataset file; the record count is patched in by `finish`.
pub struct DatasetWriter<W: Write + std::io::Seek> {
    out: W,
    header: DatasetHeader,
    count: u64,
}

impl<W: Write + std::io::Seek> DatasetWriter<W> {
    pub fn new(mut out: W, header: DatasetHeader) -> Result<Self> {
        out.write_all(DATASET_MAGIC)?;
        for v in [DATASET_VERSION, header.raster_size as u32, ACTOR_FEATURES as u32, PATH_FEATURES as u32, header.num_cells as u32] {
            out.write_all(&v.to_le_bytes())?;
        }
        out.write_all(&0u64.to_le_bytes())?;
        Ok(DatasetWriter { out, header, count: 0 })
    }

    pub fn write(&mut self, s: &Sample) -> Result<()> {
        let h = self.header;
        if s.input.raster.len() != h.raster_len()
            || s.input.actor.len() != ACTOR_FEATURES
            || s.input.path.len() != PATH_FEATURES
            || s.labels.len() != h.num_cells
        {
            return Err(Error::Shape(format!("record {} does not match the dataset header", s.key)));
        }
        let key = s.key.as_bytes();
        if key.len() > u16::MAX as usize {
            return Err(Error::Invalid("record key too long".into()));
        }
        let mut rec = Vec::with_capacity(2 + key.len() + h.raster_len() + 8 * 22 + h.num_cells);
        rec.extend((key.len() as u16).to_le_bytes());
        rec.extend(key);
        rec.extend(&s.input.raster);
        for v in s.input.actor.iter().chain(&s.input.path) {
            rec.extend(v.to_le_bytes());
        }
        rec.extend(s.labels.iter().map(|&l| l as u8));
        self.out.write_all(&(rec.len() as u32).to_le_bytes())?;
        self.out.write_all(&rec)?;
        self.count += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<u64> {
        use std::io::SeekFrom;
        self.out.seek(SeekFrom::Start(24))?;
        self.out.write_all(&self.count.to_le_bytes())?;
        self.out.seek(SeekFrom::End(0))?;
        self.out.flush()?;
        Ok(self.count)
    }
}

pub fn write_dataset(path: &FsPath, header: DatasetHeader, samples: &[Sample]) -> Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    let mut w = DatasetWriter::new(file, header)?;
    for s in samples {
        w.write(s)?;
    }
    w.finish()?;
    Ok(())
}

pub fn read_dataset(path: &FsPath) -> Result<(DatasetHeader, Vec<Sample>)> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    dataset_from_bytes(&bytes)
}

pub fn dataset_from_bytes(bytes: &[u8]) -> Result<(DatasetHeader, Vec<Sample>)> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4)? != DATASET_MAGIC {
        return Err(Error::Format("not a dataset file".into()));
    }
    let version = r.u32()?;
    if version != DATASET_VERSION {
        return Err(Error::Format(format!("unsupported dataset version {version}")));
    }
    let raster_size = r.u32()? as usize;
    let (fa, fp) = (r.u32()? as usize, r.u32()? as usize);
    if (fa, fp) != (ACTOR_FEATURES, PATH_FEATURES) {
        return Err(Error::Format(format!("dataset has {fa}+{fp} features, expected {ACTOR_FEATURES}+{PATH_FEATURES}")));
    }
    let header = DatasetHeader { raster_size, num_cells: r.u32()? as usize };
    let count = r.u64()?;
    let mut samples = Vec::with_capacity(count.min(1 << 20) as usize);
    for i in 0..count {
        let len = r.u32()? as usize;
        let mut rec = Reader { buf: r.take(len)?, pos: 0 };
        let klen = rec.u16()? as usize;
        let key = String::from_utf8(rec.take(klen)?.to_vec()).map_err(|_| Error::Format(format!("record {i}: key is not UTF-8")))?;
        let raster = rec.take(header.raster_len())?.to_vec();
        let actor = rec.f64s(ACTOR_FEATURES)?;
        let path = rec.f64s(PATH_FEATURES)?;
        let labels: Vec<i8> = rec.take(header.num_cells)?.iter().map(|&b| b as i8).collect();
        if rec.pos != len || labels.iter().any(|l| !(-1..=1).contains(l)) {
            return Err(Error::Format(format!("record {i} is malformed")));
        }
        samples.push(Sample { key, input: FeatureBundle { raster, actor, path }, labels });
    }
    if r.pos != bytes.len() {
        return Err(Error::Format("trailing bytes after dataset".into()));
    }
    Ok((header, samples))
}
