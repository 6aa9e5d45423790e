//! Binary cache for special-value tables. Building the S table dominates a
//! sweep's runtime, so per-q persistence pays for itself.
//!
//! Layout (little-endian throughout):
//!   magic   8 bytes  "LCHISVT1"
//!   version u32      1
//!   q       u64
//!   prec    u8       0 = extended64, 1 = quad113
//!   pad     3 bytes  zero
//!   tol     f64
//!   entries 2*(q-1) records of 3 f64 (hi, mid, lo), log Gamma then S
//!
//! Each entry is the exact three-double decomposition of the stored value,
//! so a reload reproduces the in-memory table bit for bit at both
//! precisions (106 and 128 significant bits both fit in 159).

use super::SpecialValueTable;
use crate::scalar::{Dd, Precision, Qf, Real};
use crate::{Error, Result};
use std::io::{Read as _, Write as _};
use std::path::{Path, PathBuf};

const MAGIC: &[u8; 8] = b"LCHISVT1";
const VERSION: u32 = 1;

/// Split into (hi, mid, lo) doubles summing exactly to the value.
trait TripleSplit: Real {
    fn to_triple(&self) -> (f64, f64, f64);
    fn from_triple(t: (f64, f64, f64)) -> Self;
}

impl TripleSplit for Dd {
    fn to_triple(&self) -> (f64, f64, f64) {
        (self.hi, self.lo, 0.0)
    }
    fn from_triple(t: (f64, f64, f64)) -> Self {
        Dd::new(t.0, t.1)
    }
}

impl TripleSplit for Qf {
    fn to_triple(&self) -> (f64, f64, f64) {
        let mut r = rug::Float::with_val(192, self.inner());
        let hi = r.to_f64();
        r -= hi;
        let mid = r.to_f64();
        r -= mid;
        (hi, mid, r.to_f64())
    }
    fn from_triple(t: (f64, f64, f64)) -> Self {
        let mut r = rug::Float::with_val(192, t.0);
        r += t.1;
        r += t.2;
        Qf(rug::Float::with_val(crate::scalar::qf::QUAD_PREC, r))
    }
}

/// Conventional cache file name under a cache directory.
pub fn cache_path(dir: &Path, q: u64, precision: Precision) -> PathBuf {
    dir.join(format!("svt_{}_{q}.bin", precision.as_str()))
}

pub fn write_table<T: Real + TripleSplitExt>(path: &Path, table: &SpecialValueTable<T>) -> Result<()> {
    T::write_impl(path, table)
}

pub fn read_table<T: Real + TripleSplitExt>(path: &Path) -> Result<SpecialValueTable<T>> {
    T::read_impl(path)
}

/// Object-safe indirection so the public API stays monomorphic per scalar.
pub trait TripleSplitExt: Sized {
    fn write_impl(path: &Path, table: &SpecialValueTable<Self>) -> Result<()>;
    fn read_impl(path: &Path) -> Result<SpecialValueTable<Self>>;
}

impl<T: TripleSplit> TripleSplitExt for T {
    fn write_impl(path: &Path, table: &SpecialValueTable<T>) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&table.q.to_le_bytes())?;
        let prec: u8 = match table.precision {
            Precision::Extended64 => 0,
            Precision::Quad113 => 1,
        };
        w.write_all(&[prec, 0, 0, 0])?;
        w.write_all(&table.tol.to_le_bytes())?;
        for v in table.loggamma.iter().chain(table.sval.iter()) {
            let (a, b, c) = v.to_triple();
            w.write_all(&a.to_le_bytes())?;
            w.write_all(&b.to_le_bytes())?;
            w.write_all(&c.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    fn read_impl(path: &Path) -> Result<SpecialValueTable<T>> {
        let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut head = [0u8; 8];
        r.read_exact(&mut head)?;
        if &head != MAGIC {
            return Err(Error::Malformed {
                line: 0,
                msg: "bad cache magic".into(),
            });
        }
        let mut u32b = [0u8; 4];
        r.read_exact(&mut u32b)?;
        if u32::from_le_bytes(u32b) != VERSION {
            return Err(Error::Malformed {
                line: 0,
                msg: "unsupported cache version".into(),
            });
        }
        let mut u64b = [0u8; 8];
        r.read_exact(&mut u64b)?;
        let q = u64::from_le_bytes(u64b);
        let mut pad = [0u8; 4];
        r.read_exact(&mut pad)?;
        let precision = match pad[0] {
            0 => Precision::Extended64,
            1 => Precision::Quad113,
            other => {
                return Err(Error::Malformed {
                    line: 0,
                    msg: format!("unknown precision tag {other}"),
                })
            }
        };
        if precision != T::precision() {
            return Err(Error::Malformed {
                line: 0,
                msg: format!(
                    "cache holds {} but {} was requested",
                    precision.as_str(),
                    T::precision().as_str()
                ),
            });
        }
        r.read_exact(&mut u64b)?;
        let tol = f64::from_le_bytes(u64b);
        let n = (q - 1) as usize;
        let mut read_vec = |count: usize| -> Result<Vec<T>> {
            let mut out = Vec::with_capacity(count);
            let mut buf = [0u8; 24];
            for _ in 0..count {
                r.read_exact(&mut buf)?;
                let a = f64::from_le_bytes(buf[0..8].try_into().unwrap());
                let b = f64::from_le_bytes(buf[8..16].try_into().unwrap());
                let c = f64::from_le_bytes(buf[16..24].try_into().unwrap());
                out.push(T::from_triple((a, b, c)));
            }
            Ok(out)
        };
        let loggamma = read_vec(n)?;
        let sval = read_vec(n)?;
        Ok(SpecialValueTable {
            q,
            loggamma,
            sval,
            precision,
            tol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Real;

    #[test]
    fn round_trip_extended_is_bit_exact() {
        let t = SpecialValueTable::<Dd>::build(61).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = cache_path(dir.path(), 61, Precision::Extended64);
        write_table(&p, &t).unwrap();
        let back = read_table::<Dd>(&p).unwrap();
        assert_eq!(back.q, 61);
        assert_eq!(back.tol, t.tol);
        for (a, b) in t.loggamma.iter().zip(&back.loggamma) {
            assert_eq!(a.hi.to_bits(), b.hi.to_bits());
            assert_eq!(a.lo.to_bits(), b.lo.to_bits());
        }
        for (a, b) in t.sval.iter().zip(&back.sval) {
            assert_eq!(a.hi.to_bits(), b.hi.to_bits());
            assert_eq!(a.lo.to_bits(), b.lo.to_bits());
        }
    }

    #[test]
    fn round_trip_quad_is_bit_exact() {
        let t = SpecialValueTable::<Qf>::build(13).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = cache_path(dir.path(), 13, Precision::Quad113);
        write_table(&p, &t).unwrap();
        let back = read_table::<Qf>(&p).unwrap();
        for (a, b) in t
            .loggamma
            .iter()
            .zip(&back.loggamma)
            .chain(t.sval.iter().zip(&back.sval))
        {
            assert_eq!(a.sub(b).to_f64(), 0.0);
            assert_eq!(a.inner().prec(), b.inner().prec());
        }
    }

    #[test]
    fn wrong_precision_rejected() {
        let t = SpecialValueTable::<Dd>::build(7).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.bin");
        write_table(&p, &t).unwrap();
        assert!(read_table::<Qf>(&p).is_err());
        // corrupt magic
        let mut raw = std::fs::read(&p).unwrap();
        raw[0] = b'X';
        std::fs::write(&p, raw).unwrap();
        assert!(read_table::<Dd>(&p).is_err());
    }
}
