//! Binary snapshot of a spectral state.
//!
//! Layout (all little-endian): magic `ITTS`, `u32` format version, `u32`
//! dimension, `u32` points per side, `u64` step, `f64` time, `f64`
//! `λ, α, β, ν, L`, `f64` dealias fraction, then the complex
//! coefficients of each component in turn as `(re, im)` pairs.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::solver::PhysicalParams;
use crate::spectral::{Grid, SpectralField};
use crate::{Error, Result};

pub const MAGIC: [u8; 4] = *b"ITTS";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub step: u64,
    pub params: PhysicalParams,
    pub state: SpectralField,
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl Reader<'_> {
    fn take<const K: usize>(&mut self, what: &str) -> Result<[u8; K]> {
        if self.bytes.len() < K {
            return Err(Error::Format(format!("truncated while reading {what}")));
        }
        let (head, rest) = self.bytes.split_at(K);
        self.bytes = rest;
        Ok(head.try_into().expect("length checked"))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        self.take::<4>(what).map(u32::from_le_bytes)
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        self.take::<8>(what).map(u64::from_le_bytes)
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        self.take::<8>(what).map(f64::from_le_bytes)
    }
}

impl Checkpoint {
    pub fn to_bytes(&self) -> Vec<u8> {
        let g = self.state.grid();
        let p = &self.params;
        let mut out = Vec::with_capacity(80 + 16 * g.dim() * g.len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(g.dim() as u32).to_le_bytes());
        out.extend_from_slice(&(g.n() as u32).to_le_bytes());
        out.extend_from_slice(&self.step.to_le_bytes());
        for v in [
            self.state.time(),
            p.lambda,
            p.alpha,
            p.beta,
            p.nu,
            p.box_length,
            g.dealias_fraction(),
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for c in self.state.components() {
            for z in c {
                out.extend_from_slice(&z.re.to_le_bytes());
                out.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes };
        if r.take::<4>("magic")? != MAGIC {
            return Err(Error::Format("missing ITTS magic bytes".into()));
        }
        let version = r.u32("version")?;
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported format version {version}"
            )));
        }
        let dim = r.u32("dimension")? as usize;
        let n = r.u32("resolution")? as usize;
        let step = r.u64("step")?;
        let time = r.f64("time")?;
        let params = PhysicalParams {
            lambda: r.f64("lambda")?,
            alpha: r.f64("alpha")?,
            beta: r.f64("beta")?,
            nu: r.f64("nu")?,
            box_length: r.f64("box length")?,
        };
        let frac = r.f64("dealias fraction")?;
        let grid = Grid::new(dim, n, params.box_length, frac)
            .map_err(|e| Error::Format(format!("bad header: {e}")))?;
        let expected = 16 * dim * grid.len();
        if r.bytes.len() != expected {
            return Err(Error::Format(format!(
                "expected {expected} coefficient bytes, found {}",
                r.bytes.len()
            )));
        }
        let mut components = Vec::with_capacity(dim);
        for _ in 0..dim {
            let mut c = Vec::with_capacity(grid.len());
            for _ in 0..grid.len() {
                let re = r.f64("coefficient")?;
                let im = r.f64("coefficient")?;
                c.push(Complex64::new(re, im));
            }
            components.push(c);
        }
        let state = SpectralField::from_components(&grid, components)?.with_time(time);
        Ok(Checkpoint {
            step,
            params,
            state,
        })
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(&self.to_bytes())
    }

    pub fn read<R: Read>(mut input: R) -> Result<Self> {
        let mut bytes = Vec::new();
        input
            .read_to_end(&mut bytes)
            .map_err(|e| Error::io("<checkpoint>", e))?;
        Self::from_bytes(&bytes)
    }

    /// Writes to a temporary sibling first and renames it into place.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("itts.tmp");
        std::fs::write(&tmp, self.to_bytes()).map_err(|e| Error::io(&tmp, e))?;
        std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes).map_err(|e| match e {
            Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{init_condition, InitialCondition};

    fn sample() -> Checkpoint {
        let grid = Grid::new(2, 16, 3.0, 0.5).unwrap();
        let ic = InitialCondition::RandomLowK {
            k_max: 4.0,
            energy: 0.5,
        };
        let state = init_condition(&ic, &grid, 3).unwrap().with_time(0.125);
        let params = PhysicalParams {
            box_length: 3.0,
            ..Default::default()
        };
        Checkpoint {
            step: 42,
            params,
            state,
        }
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.itts");
        let c = sample();
        c.save(&path).unwrap();
        let loaded = Checkpoint::load(&path).unwrap();
        assert_eq!(loaded, c);
        let again = dir.path().join("b.itts");
        loaded.save(&again).unwrap();
        assert_eq!(
            std::fs::read(&path).unwrap(),
            std::fs::read(&again).unwrap()
        );
    }

    #[test]
    fn header_layout() {
        let b = sample().to_bytes();
        assert_eq!(&b[..4], b"ITTS");
        assert_eq!(u32::from_le_bytes(b[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(b[8..12].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(b[12..16].try_into().unwrap()), 16);
        assert_eq!(u64::from_le_bytes(b[16..24].try_into().unwrap()), 42);
        assert_eq!(f64::from_le_bytes(b[24..32].try_into().unwrap()), 0.125);
        assert_eq!(b.len(), 80 + 16 * 2 * 256);
    }

    #[test]
    fn rejects_corruption() {
        let b = sample().to_bytes();
        let mut bad = b.clone();
        bad[0] = b'X';
        assert!(matches!(
            Checkpoint::from_bytes(&bad),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            Checkpoint::from_bytes(&b[..b.len() - 1]),
            Err(Error::Format(_))
        ));
        let mut long = b.clone();
        long.push(0);
        assert!(matches!(
            Checkpoint::from_bytes(&long),
            Err(Error::Format(_))
        ));
        let mut version = b;
        version[4] = 9;
        assert!(matches!(
            Checkpoint::from_bytes(&version),
            Err(Error::Format(_))
        ));
    }
}
