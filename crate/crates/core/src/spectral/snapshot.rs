//! Snapshot files: a text header followed by raw little-endian `f64`
//! physical-space arrays.
//!
//! ```text
//! # strainflow snapshot
//! format = strainflow-snapshot-v1
//! n = 32
//! time = 0.25
//! viscosity = 1
//! kind = velocity
//! components = 3
//! byte_order = little-endian
//! layout = x-fastest
//! end_header
//! <components × n³ × 8 bytes>
//! ```
//!
//! Components are stored one after another, each in x-fastest order
//! (`ix + n*(iy + n*iz)`). Header floats are written with Rust's shortest
//! round-trip formatting, so `read(write(s)) == s` bit for bit.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use super::field::{PhysicalField3, PhysicalTensorField, SpectralField3};
use super::grid::Grid;
use crate::error::{Error, Result};

pub const FORMAT_TAG: &str = "strainflow-snapshot-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Velocity,
    Force,
    Vorticity,
    /// Entries `S11, S22, S12, S13, S23`.
    Strain,
}

impl FieldKind {
    pub fn components(self) -> usize {
        match self {
            FieldKind::Strain => 5,
            _ => 3,
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldKind::Velocity => "velocity",
            FieldKind::Force => "force",
            FieldKind::Vorticity => "vorticity",
            FieldKind::Strain => "strain",
        })
    }
}

impl FromStr for FieldKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "velocity" => Ok(FieldKind::Velocity),
            "force" => Ok(FieldKind::Force),
            "vorticity" => Ok(FieldKind::Vorticity),
            "strain" => Ok(FieldKind::Strain),
            other => Err(Error::Snapshot {
                path: None,
                reason: format!("unknown field kind {other:?}"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub n: usize,
    pub time: f64,
    pub viscosity: f64,
    pub kind: FieldKind,
    pub data: Vec<Vec<f64>>,
}

fn malformed(reason: impl Into<String>) -> Error {
    Error::Snapshot {
        path: None,
        reason: reason.into(),
    }
}

impl Snapshot {
    pub fn from_velocity(u: &SpectralField3, time: f64, viscosity: f64) -> Self {
        Self::from_vector(&u.to_physical(), FieldKind::Velocity, time, viscosity)
    }

    pub fn from_vector(p: &PhysicalField3, kind: FieldKind, time: f64, viscosity: f64) -> Self {
        Snapshot {
            n: p.grid().n(),
            time,
            viscosity,
            kind,
            data: p.components().to_vec(),
        }
    }

    pub fn from_strain(s: &PhysicalTensorField, time: f64, viscosity: f64) -> Self {
        Snapshot {
            n: s.grid().n(),
            time,
            viscosity,
            kind: FieldKind::Strain,
            data: s.components().to_vec(),
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n)
    }

    /// Physical vector field for the three-component kinds.
    pub fn vector_field(&self) -> Result<PhysicalField3> {
        if self.kind.components() != 3 {
            return Err(malformed(format!("{} snapshot is not a vector field", self.kind)));
        }
        let grid = self.grid()?;
        let [a, b, c]: [Vec<f64>; 3] = self
            .data
            .clone()
            .try_into()
            .map_err(|_| malformed("expected three components"))?;
        PhysicalField3::from_components(&grid, [a, b, c])
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        if self.data.len() != self.kind.components() {
            return Err(malformed("component count does not match field kind"));
        }
        let len = self.n * self.n * self.n;
        writeln!(w, "# strainflow snapshot")?;
        writeln!(w, "format = {FORMAT_TAG}")?;
        writeln!(w, "n = {}", self.n)?;
        writeln!(w, "time = {:?}", self.time)?;
        writeln!(w, "viscosity = {:?}", self.viscosity)?;
        writeln!(w, "kind = {}", self.kind)?;
        writeln!(w, "components = {}", self.data.len())?;
        writeln!(w, "byte_order = little-endian")?;
        writeln!(w, "layout = x-fastest")?;
        writeln!(w, "end_header")?;
        for comp in &self.data {
            if comp.len() != len {
                return Err(Error::SizeMismatch {
                    expected: len,
                    actual: comp.len(),
                });
            }
            let mut bytes = Vec::with_capacity(len * 8);
            for x in comp {
                bytes.extend_from_slice(&x.to_le_bytes());
            }
            w.write_all(&bytes)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(mut r: R) -> Result<Self> {
        let mut n = None;
        let mut time = None;
        let mut viscosity = None;
        let mut kind = None;
        let mut components = None;
        let mut line = String::new();
        loop {
            line.clear();
            if r.read_line(&mut line)? == 0 {
                return Err(malformed("missing end_header"));
            }
            let t = line.trim();
            if t == "end_header" {
                break;
            }
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (key, value) = t
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| malformed(format!("bad header line {t:?}")))?;
            let num = |v: &str| v.parse::<f64>().map_err(|_| malformed(format!("bad {key}: {v:?}")));
            match key {
                "format" if value != FORMAT_TAG => {
                    return Err(malformed(format!("unsupported format {value:?}")))
                }
                "format" => {}
                "n" => n = Some(value.parse::<usize>().map_err(|_| malformed("bad n"))?),
                "time" => time = Some(num(value)?),
                "viscosity" => viscosity = Some(num(value)?),
                "kind" => kind = Some(value.parse::<FieldKind>()?),
                "components" => {
                    components = Some(value.parse::<usize>().map_err(|_| malformed("bad components"))?)
                }
                "byte_order" if value != "little-endian" => {
                    return Err(malformed("only little-endian data is supported"))
                }
                "layout" if value != "x-fastest" => {
                    return Err(malformed("only x-fastest layout is supported"))
                }
                "byte_order" | "layout" => {}
                other => return Err(malformed(format!("unknown header key {other:?}"))),
            }
        }
        let n = n.ok_or_else(|| malformed("missing n"))?;
        let kind = kind.ok_or_else(|| malformed("missing kind"))?;
        let components = components.unwrap_or(kind.components());
        if components != kind.components() {
            return Err(malformed("component count does not match field kind"));
        }
        let len = n
            .checked_mul(n)
            .and_then(|x| x.checked_mul(n))
            .ok_or_else(|| malformed("grid too large"))?;
        let mut data = Vec::with_capacity(components);
        let mut buf = vec![0u8; len * 8];
        for _ in 0..components {
            r.read_exact(&mut buf)
                .map_err(|_| malformed("truncated data section"))?;
            data.push(
                buf.chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                    .collect(),
            );
        }
        if !r.fill_buf()?.is_empty() {
            return Err(malformed("trailing bytes after data section"));
        }
        Ok(Snapshot {
            n,
            time: time.ok_or_else(|| malformed("missing time"))?,
            viscosity: viscosity.ok_or_else(|| malformed("missing viscosity"))?,
            kind,
            data,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = File::create(path.as_ref())?;
        self.write_to(BufWriter::new(f))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = File::open(path)?;
        Self::read_from(BufReader::new(f)).map_err(|e| match e {
            Error::Snapshot { reason, .. } => Error::Snapshot {
                path: Some(path.to_path_buf()),
                reason,
            },
            other => other,
        })
    }
}
