//! Binary grid field files.
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! magic    8 bytes   "SSBGRID\0"
//! version  u32       1
//! kind     u8        0 = multiplet field (n complex values per site)
//!                    1 = gauge transformation (n x n complex matrix per site, row-major)
//! metric   u8        0 = euclidean, 1 = lorentzian
//! reserved 2 bytes   zero
//! dim      u32
//! shape    dim x u32
//! h        f64
//! n        u32
//! r        u32       dimension of the gauge algebra
//! payload  sites in row-major order (last axis fastest), each a run of
//!          [re, im] f64 pairs
//! ```

use std::io::{self, Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use thiserror::Error;

use ssb_core::lattice::{GaugeTransformField, Grid, Metric, MultipletField};
use ssb_core::linalg::{c, CMat, CVec};
use ssb_core::SsbError;

pub const MAGIC: &[u8; 8] = b"SSBGRID\0";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum GridIoError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("not a grid field file (bad magic)")]
    BadMagic,
    #[error("unsupported grid file version {0}")]
    Version(u32),
    #[error("unknown payload kind {0}")]
    Kind(u8),
    #[error("trailing data after payload")]
    Trailing,
    #[error(transparent)]
    Core(#[from] SsbError),
}

#[derive(Debug, Clone)]
pub enum GridPayload {
    Multiplet(MultipletField),
    Transform(GaugeTransformField),
}

impl GridPayload {
    fn kind(&self) -> u8 {
        match self {
            GridPayload::Multiplet(_) => 0,
            GridPayload::Transform(_) => 1,
        }
    }

    fn n(&self) -> usize {
        match self {
            GridPayload::Multiplet(f) => f.n(),
            GridPayload::Transform(f) => f.n(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GridFile {
    pub grid: Grid,
    pub r: usize,
    pub payload: GridPayload,
}

fn put_c<W: Write>(w: &mut W, re: f64, im: f64) -> io::Result<()> {
    w.write_f64::<LittleEndian>(re)?;
    w.write_f64::<LittleEndian>(im)
}

pub fn write_grid_file<W: Write>(mut w: W, file: &GridFile) -> Result<(), GridIoError> {
    let grid = &file.grid;
    w.write_all(MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    w.write_u8(file.payload.kind())?;
    w.write_u8(grid.metric().code())?;
    w.write_all(&[0, 0])?;
    w.write_u32::<LittleEndian>(grid.dim() as u32)?;
    for &e in grid.shape() {
        w.write_u32::<LittleEndian>(e as u32)?;
    }
    w.write_f64::<LittleEndian>(grid.h())?;
    w.write_u32::<LittleEndian>(file.payload.n() as u32)?;
    w.write_u32::<LittleEndian>(file.r as u32)?;
    match &file.payload {
        GridPayload::Multiplet(f) => {
            for v in f.values() {
                for z in v.iter() {
                    put_c(&mut w, z.re, z.im)?;
                }
            }
        }
        GridPayload::Transform(f) => {
            for m in f.values() {
                for i in 0..m.nrows() {
                    for z in m.row(i).iter() {
                        put_c(&mut w, z.re, z.im)?;
                    }
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn get_c<R: Read>(r: &mut R) -> io::Result<num_complex::Complex64> {
    let re = r.read_f64::<LittleEndian>()?;
    let im = r.read_f64::<LittleEndian>()?;
    Ok(c(re, im))
}

pub fn read_grid_file<R: Read>(mut rd: R) -> Result<GridFile, GridIoError> {
    let mut magic = [0u8; 8];
    rd.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(GridIoError::BadMagic);
    }
    let version = rd.read_u32::<LittleEndian>()?;
    if version != VERSION {
        return Err(GridIoError::Version(version));
    }
    let kind = rd.read_u8()?;
    let metric = Metric::from_code(rd.read_u8()?)?;
    let mut reserved = [0u8; 2];
    rd.read_exact(&mut reserved)?;
    let dim = rd.read_u32::<LittleEndian>()? as usize;
    let shape = (0..dim)
        .map(|_| rd.read_u32::<LittleEndian>().map(|e| e as usize))
        .collect::<io::Result<Vec<_>>>()?;
    let h = rd.read_f64::<LittleEndian>()?;
    let n = rd.read_u32::<LittleEndian>()? as usize;
    let r = rd.read_u32::<LittleEndian>()? as usize;
    let grid = Grid::new(shape, h, metric)?;
    let payload = match kind {
        0 => {
            let values = (0..grid.len())
                .map(|_| (0..n).map(|_| get_c(&mut rd)).collect::<io::Result<Vec<_>>>().map(CVec::from_vec))
                .collect::<io::Result<Vec<_>>>()?;
            GridPayload::Multiplet(MultipletField::new(n, values)?)
        }
        1 => {
            let values = (0..grid.len())
                .map(|_| {
                    (0..n * n)
                        .map(|_| get_c(&mut rd))
                        .collect::<io::Result<Vec<_>>>()
                        .map(|v| CMat::from_row_slice(n, n, &v))
                })
                .collect::<io::Result<Vec<_>>>()?;
            GridPayload::Transform(GaugeTransformField::new(n, values)?)
        }
        k => return Err(GridIoError::Kind(k)),
    };
    let mut extra = [0u8; 1];
    if rd.read(&mut extra)? != 0 {
        return Err(GridIoError::Trailing);
    }
    Ok(GridFile { grid, r, payload })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ssb_core::lie::random_multiplet;

    fn grid() -> Grid {
        Grid::new(vec![4, 5], 0.25, Metric::Lorentzian).unwrap()
    }

    #[test]
    fn multiplet_round_trip() {
        let g = grid();
        let f = MultipletField::from_fn(&g, 2, |s| random_multiplet(2, s as u64)).unwrap();
        let file = GridFile { grid: g, r: 4, payload: GridPayload::Multiplet(f.clone()) };
        let mut buf = Vec::new();
        write_grid_file(&mut buf, &file).unwrap();
        assert_eq!(&buf[..8], MAGIC);
        assert_eq!(buf.len(), 8 + 4 + 4 + 4 + 8 + 8 + 4 + 4 + 20 * 2 * 16);
        let back = read_grid_file(buf.as_slice()).unwrap();
        assert_eq!(back.grid, file.grid);
        assert_eq!(back.r, 4);
        match back.payload {
            GridPayload::Multiplet(b) => assert_eq!(b.max_distance(&f), 0.0),
            _ => panic!("wrong payload kind"),
        }
    }

    #[test]
    fn transform_round_trip_is_row_major() {
        let g = grid();
        let u = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]);
        let f = GaugeTransformField::constant(&g, &u).unwrap();
        let file = GridFile { grid: g, r: 1, payload: GridPayload::Transform(f) };
        let mut buf = Vec::new();
        write_grid_file(&mut buf, &file).unwrap();
        let header = 8 + 4 + 4 + 4 + 8 + 8 + 4 + 4;
        assert_eq!(f64::from_le_bytes(buf[header + 16..header + 24].try_into().unwrap()), 1.0);
        match read_grid_file(buf.as_slice()).unwrap().payload {
            GridPayload::Transform(b) => assert_eq!(b.at(7), &u),
            _ => panic!("wrong payload kind"),
        }
    }

    #[test]
    fn corrupt_files_are_rejected() {
        assert!(matches!(read_grid_file(&b"NOTAGRID0000"[..]), Err(GridIoError::BadMagic)));
        let g = grid();
        let file = GridFile { grid: g.clone(), r: 4, payload: GridPayload::Multiplet(MultipletField::zeros(&g, 2)) };
        let mut buf = Vec::new();
        write_grid_file(&mut buf, &file).unwrap();
        buf.push(0);
        assert!(matches!(read_grid_file(buf.as_slice()), Err(GridIoError::Trailing)));
        buf.truncate(buf.len() - 9);
        assert!(matches!(read_grid_file(buf.as_slice()), Err(GridIoError::Io(_))));
    }
}
