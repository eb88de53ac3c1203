//! `NSF1` binary field files: magic `NSF1`, `u32` n, `f64` L, then the
//! samples of every component as little-endian `f64`, component-major and
//! x-fastest within a component. The component count follows from the
//! file length.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::field::Field;
use super::grid::GridSpec;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"NSF1";

pub fn write<W: Write, const N: usize>(mut w: W, f: &Field<N>) -> Result<()> {
    let g = f.grid();
    w.write_all(MAGIC)?;
    w.write_all(&(g.n as u32).to_le_bytes())?;
    w.write_all(&g.length.to_le_bytes())?;
    write_samples(&mut w, f.samples().iter().map(|c| c.as_slice()))?;
    w.flush()?;
    Ok(())
}

pub fn read<R: Read, const N: usize>(mut r: R) -> Result<Field<N>> {
    let (n, length) = read_header(&mut r)?;
    let grid = GridSpec::new(n, length)?;
    let comps = read_components(&mut r, grid.len())?;
    if comps.len() != N {
        return Err(Error::Format(format!("expected {N} components, file holds {}", comps.len())));
    }
    let arr: [Vec<f64>; N] = comps.try_into().map_err(|_| Error::Format("component count".into()))?;
    Field::from_samples(grid, arr)
}

pub fn save<const N: usize>(path: impl AsRef<Path>, f: &Field<N>) -> Result<()> {
    write(BufWriter::new(File::create(path)?), f)
}

pub fn load<const N: usize>(path: impl AsRef<Path>) -> Result<Field<N>> {
    read(BufReader::new(File::open(path)?))
}

pub(crate) fn read_header<R: Read>(r: &mut R) -> Result<(usize, f64)> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    Ok((u32::from_le_bytes(b4) as usize, f64::from_le_bytes(b8)))
}

pub(crate) fn write_samples<'a, W: Write>(w: &mut W, comps: impl Iterator<Item = &'a [f64]>) -> Result<()> {
    for c in comps {
        for x in c {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Read whole components of `len` samples until end of input.
pub(crate) fn read_components<R: Read>(r: &mut R, len: usize) -> Result<Vec<Vec<f64>>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let per = len * 8;
    if per == 0 || bytes.is_empty() || bytes.len() % per != 0 {
        return Err(Error::Format(format!(
            "payload of {} bytes is not a whole number of {}-sample components",
            bytes.len(),
            len
        )));
    }
    let count = bytes.len() / per;
    if count != 1 && count != 3 {
        return Err(Error::Format(format!("{count} components (expected 1 or 3)")));
    }
    Ok(bytes
        .chunks_exact(per)
        .map(|c| c.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().unwrap())).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{ScalarField, VectorField};

    #[test]
    fn vector_round_trip_is_bitwise() {
        let g = GridSpec::new(8, 3.0).unwrap();
        let u: VectorField = Field::from_fn(g, |x| [x[0].sin(), x[1] * 0.1, -x[2]]);
        let mut buf = Vec::new();
        write(&mut buf, &u).unwrap();
        assert_eq!(buf.len(), 16 + 3 * 8 * 512);
        assert_eq!(&buf[..4], b"NSF1");
        let v: VectorField = read(buf.as_slice()).unwrap();
        assert_eq!(v.grid(), u.grid());
        assert_eq!(v.samples()[2], u.samples()[2]);
        assert!(read::<_, 1>(buf.as_slice()).is_err());
    }

    #[test]
    fn scalar_and_truncated() {
        let g = GridSpec::new(4, 1.0).unwrap();
        let p: ScalarField = Field::from_fn(g, |x| [x[0]]);
        let mut buf = Vec::new();
        write(&mut buf, &p).unwrap();
        let q: ScalarField = read(buf.as_slice()).unwrap();
        assert_eq!(q.samples()[0], p.samples()[0]);
        buf.truncate(buf.len() - 3);
        assert!(read::<_, 1>(buf.as_slice()).is_err());
        assert!(read::<_, 1>(&b"NSF2"[..]).is_err());
    }
}
