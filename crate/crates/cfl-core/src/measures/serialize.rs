//! Columnar binary encoding of atom clouds.
//!
//! Little-endian throughout; floats are stored as raw IEEE-754 bits, so a
//! write/read cycle reproduces the cloud exactly, NaN payloads and signed
//! zeros included.  Layout:
//!
//! ```text
//! magic "CFLM" | version u32 | dim u32 | count u64
//! alpha f64 | support_radius f64 | resolution f64 | seed u64
//! profile: tag u32 | aux1 u32 | aux2 u32 | param f64
//! columns: dim arrays of count f64 (coordinate-major), then count weights
//! ```

use super::{AtomicMeasure, LatticeKind, MeasureError, MeasureProfile};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"CFLM";
const VERSION: u32 = 1;

pub fn write_measure<W: Write>(mu: &AtomicMeasure, out: &mut W) -> Result<(), MeasureError> {
    out.write_all(MAGIC)?;
    write_u32(out, VERSION)?;
    write_u32(out, mu.dimension_ambient as u32)?;
    write_u64(out, mu.len() as u64)?;
    write_f64(out, mu.alpha_claimed)?;
    write_f64(out, mu.support_radius)?;
    write_f64(out, mu.resolution)?;
    write_u64(out, mu.seed)?;
    let (tag, aux1, aux2, param) = encode_profile(&mu.profile);
    write_u32(out, tag)?;
    write_u32(out, aux1)?;
    write_u32(out, aux2)?;
    write_f64(out, param)?;
    let d = mu.dimension_ambient;
    for a in 0..d {
        for i in 0..mu.len() {
            write_f64(out, mu.point(i)[a])?;
        }
    }
    for i in 0..mu.len() {
        write_f64(out, mu.weight(i))?;
    }
    Ok(())
}

pub fn read_measure<R: Read>(input: &mut R) -> Result<AtomicMeasure, MeasureError> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(MeasureError::BadFileFormat("wrong magic bytes".into()));
    }
    let version = read_u32(input)?;
    if version != VERSION {
        return Err(MeasureError::BadFileFormat(format!(
            "unsupported version {version}"
        )));
    }
    let dim = read_u32(input)? as usize;
    let count = read_u64(input)? as usize;
    if dim == 0 || dim > 64 {
        return Err(MeasureError::BadFileFormat(format!("bad dimension {dim}")));
    }
    let alpha = read_f64(input)?;
    let support_radius = read_f64(input)?;
    let resolution = read_f64(input)?;
    let seed = read_u64(input)?;
    let tag = read_u32(input)?;
    let aux1 = read_u32(input)?;
    let aux2 = read_u32(input)?;
    let param = read_f64(input)?;
    let profile = decode_profile(tag, aux1, aux2, param)?;
    let mut columns = vec![0.0f64; dim * count];
    for v in columns.iter_mut() {
        *v = read_f64(input)?;
    }
    // Transpose back to row-major atoms.
    let mut points = vec![0.0f64; dim * count];
    for a in 0..dim {
        for i in 0..count {
            points[i * dim + a] = columns[a * count + i];
        }
    }
    let mut weights = vec![0.0f64; count];
    for w in weights.iter_mut() {
        *w = read_f64(input)?;
    }
    let mut mu = AtomicMeasure::from_atoms(dim, alpha, resolution, points, weights)?
        .with_profile(profile)
        .with_seed(seed);
    // Trust the recorded support radius: it is part of the byte-exact
    // contract even when wider than the recomputed hull.
    mu.support_radius = support_radius;
    Ok(mu)
}

pub fn save_measure<P: AsRef<Path>>(mu: &AtomicMeasure, path: P) -> Result<(), MeasureError> {
    let mut out = BufWriter::new(File::create(path)?);
    write_measure(mu, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn load_measure<P: AsRef<Path>>(path: P) -> Result<AtomicMeasure, MeasureError> {
    read_measure(&mut BufReader::new(File::open(path)?))
}

fn encode_profile(profile: &MeasureProfile) -> (u32, u32, u32, f64) {
    match profile {
        MeasureProfile::Generic => (0, 0, 0, 0.0),
        MeasureProfile::RadialPower => (1, 0, 0, 0.0),
        MeasureProfile::DeltaProduct { slab_dim } => (2, *slab_dim as u32, 0, 0.0),
        MeasureProfile::PlateUnion { kind, r, translates } => {
            let k = match kind {
                LatticeKind::MidLattice => 0,
                LatticeKind::HighLattice => 1,
            };
            (3, k, *translates as u32, *r)
        }
        MeasureProfile::CantorDust { depth, ratio } => (4, *depth, 0, *ratio),
    }
}

fn decode_profile(tag: u32, aux1: u32, aux2: u32, param: f64) -> Result<MeasureProfile, MeasureError> {
    Ok(match tag {
        0 => MeasureProfile::Generic,
        1 => MeasureProfile::RadialPower,
        2 => MeasureProfile::DeltaProduct {
            slab_dim: aux1 as usize,
        },
        3 => MeasureProfile::PlateUnion {
            kind: if aux1 == 0 {
                LatticeKind::MidLattice
            } else {
                LatticeKind::HighLattice
            },
            r: param,
            translates: aux2 as usize,
        },
        4 => MeasureProfile::CantorDust {
            depth: aux1,
            ratio: param,
        },
        other => {
            return Err(MeasureError::BadFileFormat(format!(
                "unknown profile tag {other}"
            )))
        }
    })
}

fn write_u32<W: Write>(out: &mut W, v: u32) -> std::io::Result<()> {
    out.write_all(&v.to_le_bytes())
}

fn write_u64<W: Write>(out: &mut W, v: u64) -> std::io::Result<()> {
    out.write_all(&v.to_le_bytes())
}

fn write_f64<W: Write>(out: &mut W, v: f64) -> std::io::Result<()> {
    out.write_all(&v.to_bits().to_le_bytes())
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32, MeasureError> {
    let mut buf = [0u8; 4];
    input.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(input: &mut R) -> Result<u64, MeasureError> {
    let mut buf = [0u8; 8];
    input.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_f64<R: Read>(input: &mut R) -> Result<f64, MeasureError> {
    Ok(f64::from_bits(read_u64(input)?))
}

/// Serialize to an in-memory buffer; handy for byte-equality checks.
pub fn measure_bytes(mu: &AtomicMeasure) -> Vec<u8> {
    let mut buf = Vec::new();
    write_measure(mu, &mut buf).expect("in-memory write cannot fail");
    buf
}
