//! Bit-exact field file I/O.
//!
//! A field file is a single JSON header line
//! `{"d":..,"n":..,"L":..,"kind":"real"|"spectral","layout":"row-major","scalar":"f64le","crc32":"........"}`
//! followed by the raw little-endian payload: `n^d` doubles for `real`,
//! `2*n^d` interleaved re/im doubles for `spectral`. The CRC32 covers the
//! payload bytes. Vector fields are directories holding one file per
//! component plus a `manifest.json`.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{forward_transform, SpectralField, VectorField};
use crate::grid::Grid;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    d: usize,
    n: usize,
    #[serde(rename = "L")]
    l: f64,
    kind: String,
    layout: String,
    scalar: String,
    crc32: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct VectorManifest {
    d: usize,
    n: usize,
    #[serde(rename = "L")]
    l: f64,
    components: Vec<String>,
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn payload_bytes_spectral(field: &SpectralField) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(field.coeffs().len() * 16);
    for c in field.coeffs() {
        bytes.extend_from_slice(&c.re.to_le_bytes());
        bytes.extend_from_slice(&c.im.to_le_bytes());
    }
    bytes
}

fn write_with_header(path: &Path, header: &Header, payload: &[u8]) -> Result<()> {
    let mut buf = serde_json::to_vec(header).expect("header serializes");
    buf.push(b'\n');
    buf.extend_from_slice(payload);
    fs::write(path, &buf).map_err(|e| io_err(path, e))
}

/// Write a field in spectral form (bit-exact round trip).
pub fn write_field(field: &SpectralField, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let payload = payload_bytes_spectral(field);
    let header = Header {
        d: field.grid().d(),
        n: field.grid().n(),
        l: field.grid().box_scale(),
        kind: "spectral".into(),
        layout: "row-major".into(),
        scalar: "f64le".into(),
        crc32: format!("{:08x}", crc32fast::hash(&payload)),
    };
    write_with_header(path, &header, &payload)
}

/// Write real physical samples (kind "real").
pub fn write_real_field(samples: &[f64], grid: &Grid, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if samples.len() != grid.len() {
        return Err(Error::ShapeMismatch {
            axis: 0,
            expected: grid.len(),
            got: samples.len(),
        });
    }
    let mut payload = Vec::with_capacity(samples.len() * 8);
    for v in samples {
        payload.extend_from_slice(&v.to_le_bytes());
    }
    let header = Header {
        d: grid.d(),
        n: grid.n(),
        l: grid.box_scale(),
        kind: "real".into(),
        layout: "row-major".into(),
        scalar: "f64le".into(),
        crc32: format!("{:08x}", crc32fast::hash(&payload)),
    };
    write_with_header(path, &header, &payload)
}

/// Read a field file; `real` payloads are forward-transformed on load.
pub fn read_field(path: impl AsRef<Path>) -> Result<SpectralField> {
    let path = path.as_ref();
    let mut file = fs::File::open(path).map_err(|e| io_err(path, e))?;
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes).map_err(|e| io_err(path, e))?;

    let newline = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::MalformedHeader {
            reason: "no newline-terminated header line".into(),
        })?;
    let header: Header =
        serde_json::from_slice(&bytes[..newline]).map_err(|e| Error::MalformedHeader {
            reason: e.to_string(),
        })?;
    if header.layout != "row-major" {
        return Err(Error::MalformedHeader {
            reason: format!("unsupported layout {:?}", header.layout),
        });
    }
    if header.scalar != "f64le" {
        return Err(Error::MalformedHeader {
            reason: format!("unsupported scalar {:?}", header.scalar),
        });
    }
    let grid = Grid::new(header.d, header.n, header.l)?;

    let payload = &bytes[newline + 1..];
    let expected_len = match header.kind.as_str() {
        "real" => grid.len() * 8,
        "spectral" => grid.len() * 16,
        other => {
            return Err(Error::MalformedHeader {
                reason: format!("unsupported kind {other:?}"),
            })
        }
    };
    if payload.len() != expected_len {
        return Err(Error::PayloadLength {
            expected: expected_len,
            got: payload.len(),
        });
    }
    let expected_crc =
        u32::from_str_radix(&header.crc32, 16).map_err(|e| Error::MalformedHeader {
            reason: format!("bad crc32 field: {e}"),
        })?;
    let got_crc = crc32fast::hash(payload);
    if got_crc != expected_crc {
        return Err(Error::ChecksumMismatch {
            expected: expected_crc,
            got: got_crc,
        });
    }

    match header.kind.as_str() {
        "real" => {
            let samples: Vec<f64> = payload
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect();
            forward_transform(&samples, &grid)
        }
        _ => {
            let coeffs: Vec<Complex64> = payload
                .chunks_exact(16)
                .map(|c| {
                    Complex64::new(
                        f64::from_le_bytes(c[..8].try_into().unwrap()),
                        f64::from_le_bytes(c[8..].try_into().unwrap()),
                    )
                })
                .collect();
            SpectralField::from_coeffs(&grid, coeffs)
        }
    }
}

/// Write a vector field as a directory of component files plus a manifest.
pub fn write_vector_field(u: &VectorField, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut components = Vec::new();
    for (a, comp) in u.components().iter().enumerate() {
        let name = format!("c{a}.fld");
        write_field(comp, dir.join(&name))?;
        components.push(name);
    }
    let manifest = VectorManifest {
        d: u.grid().d(),
        n: u.grid().n(),
        l: u.grid().box_scale(),
        components,
    };
    let path = dir.join("manifest.json");
    let mut f = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
    f.write_all(serde_json::to_string_pretty(&manifest).unwrap().as_bytes())
        .map_err(|e| io_err(&path, e))
}

/// Read a vector field directory written by [`write_vector_field`].
pub fn read_vector_field(dir: impl AsRef<Path>) -> Result<VectorField> {
    let dir = dir.as_ref();
    let path = dir.join("manifest.json");
    let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
    let manifest: VectorManifest =
        serde_json::from_str(&text).map_err(|e| Error::MalformedHeader {
            reason: format!("vector manifest: {e}"),
        })?;
    if manifest.components.len() != manifest.d {
        return Err(Error::MalformedHeader {
            reason: format!(
                "vector manifest lists {} components for d = {}",
                manifest.components.len(),
                manifest.d
            ),
        });
    }
    let mut comps = Vec::new();
    for name in &manifest.components {
        comps.push(read_field(dir.join(name))?);
    }
    VectorField::new(comps)
}
