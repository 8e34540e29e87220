//! On-disk grids.
//!
//! Binary layout (little-endian): `b"MIG1"`, `u32 nx`, `u32 ny`, `f64 dx_m`,
//! `f64 dy_m`, `f64 z_m`, `u8 component_tag`, then `nx·ny` `f64` values in
//! row-major order.
//!
//! CSV layout: a header line
//! `# nx=<..> ny=<..> dx_m=<..> dy_m=<..> z_m=<..> tag=<Bx|By|Jx|Jy>`, then
//! `ny` lines of `nx` comma-separated values written with 17 significant
//! digits.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Component, ScalarField2D};

pub const MAGIC: &[u8; 4] = b"MIG1";
const HEADER_LEN: usize = 4 + 4 + 4 + 8 * 3 + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridFormat {
    #[default]
    Binary,
    Csv,
}

impl GridFormat {
    pub fn extension(self) -> &'static str {
        match self {
            GridFormat::Binary => "mig",
            GridFormat::Csv => "csv",
        }
    }

    /// Guesses the format from a file extension; binary otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => GridFormat::Csv,
            _ => GridFormat::Binary,
        }
    }
}

fn bad(path: &Path, reason: impl Into<String>) -> Error {
    Error::GridFormat {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

pub fn encode_binary(f: &ScalarField2D<f64>) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * f.values().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(f.nx() as u32).to_le_bytes());
    out.extend_from_slice(&(f.ny() as u32).to_le_bytes());
    out.extend_from_slice(&f.dx().to_le_bytes());
    out.extend_from_slice(&f.dy().to_le_bytes());
    out.extend_from_slice(&f.z().to_le_bytes());
    out.push(f.component().tag());
    for v in f.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_binary(bytes: &[u8], path: &Path) -> Result<ScalarField2D<f64>> {
    if bytes.len() < HEADER_LEN {
        return Err(bad(path, "truncated header"));
    }
    if &bytes[..4] != MAGIC {
        return Err(bad(path, "magic bytes are not MIG1"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let (nx, ny) = (u32_at(4), u32_at(8));
    let (dx, dy, z) = (f64_at(12), f64_at(20), f64_at(28));
    let component = Component::from_tag(bytes[36]).ok_or_else(|| bad(path, format!("unknown tag {}", bytes[36])))?;
    let expected = nx
        .checked_mul(ny)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| bad(path, "grid dimensions overflow"))?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != expected {
        return Err(bad(path, format!("expected {expected} data bytes, found {}", body.len())));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    ScalarField2D::new(nx, ny, dx, dy, z, component, values).map_err(|e| bad(path, e.to_string()))
}

pub fn encode_csv(f: &ScalarField2D<f64>) -> String {
    let mut s = format!(
        "# nx={} ny={} dx_m={:.16e} dy_m={:.16e} z_m={:.16e} tag={}\n",
        f.nx(),
        f.ny(),
        f.dx(),
        f.dy(),
        f.z(),
        f.component().name()
    );
    for j in 0..f.ny() {
        let row: Vec<String> = f.row(j).iter().map(|v| format!("{v:.16e}")).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn decode_csv(text: &str, path: &Path) -> Result<ScalarField2D<f64>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad(path, "empty file"))?;
    let header = header.strip_prefix('#').ok_or_else(|| bad(path, "missing '#' header"))?;
    let (mut nx, mut ny, mut dx, mut dy, mut z, mut tag) = (None, None, None, None, None, None);
    for item in header.split_whitespace() {
        let (key, value) = item.split_once('=').ok_or_else(|| bad(path, format!("malformed header item {item:?}")))?;
        let num = || value.parse::<f64>().map_err(|_| bad(path, format!("bad number for {key}")));
        let int = || value.parse::<usize>().map_err(|_| bad(path, format!("bad integer for {key}")));
        match key {
            "nx" => nx = Some(int()?),
            "ny" => ny = Some(int()?),
            "dx_m" => dx = Some(num()?),
            "dy_m" => dy = Some(num()?),
            "z_m" => z = Some(num()?),
            "tag" => tag = Some(Component::from_name(value).ok_or_else(|| bad(path, format!("unknown tag {value}")))?),
            other => return Err(bad(path, format!("unknown header key {other}"))),
        }
    }
    let missing = |k: &str| bad(path, format!("header lacks {k}"));
    let (nx, ny) = (nx.ok_or_else(|| missing("nx"))?, ny.ok_or_else(|| missing("ny"))?);
    let mut values = Vec::with_capacity(nx * ny);
    let mut rows = 0;
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let before = values.len();
        for cell in line.split(',') {
            values.push(
                cell.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(path, format!("bad value {cell:?} in row {rows}")))?,
            );
        }
        if values.len() - before != nx {
            return Err(bad(path, format!("row {rows} has {} values, expected {nx}", values.len() - before)));
        }
        rows += 1;
    }
    if rows != ny {
        return Err(bad(path, format!("found {rows} rows, expected {ny}")));
    }
    ScalarField2D::new(
        nx,
        ny,
        dx.ok_or_else(|| missing("dx_m"))?,
        dy.ok_or_else(|| missing("dy_m"))?,
        z.ok_or_else(|| missing("z_m"))?,
        tag.ok_or_else(|| missing("tag"))?,
        values,
    )
    .map_err(|e| bad(path, e.to_string()))
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    {
        let mut file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        file.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
        file.sync_all().map_err(|e| Error::io(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn write_grid(path: &Path, f: &ScalarField2D<f64>, format: GridFormat) -> Result<()> {
    match format {
        GridFormat::Binary => write_atomic(path, &encode_binary(f)),
        GridFormat::Csv => write_atomic(path, encode_csv(f).as_bytes()),
    }
}

/// Reads a grid, choosing the decoder from the file extension.
pub fn read_grid(path: &Path) -> Result<ScalarField2D<f64>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    match GridFormat::from_path(path) {
        GridFormat::Binary => decode_binary(&bytes, path),
        GridFormat::Csv => {
            let text = String::from_utf8(bytes).map_err(|_| bad(path, "not UTF-8"))?;
            decode_csv(&text, path)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ScalarField2D<f64> {
        ScalarField2D::from_fn(5, 3, 1.5625e-3, 2e-3, -0.0195, Component::Bx, |x: f64, y: f64| {
            (x * 1234.5).sin() * 1e-6 + y * std::f64::consts::PI
        })
        .unwrap()
    }

    #[test]
    fn binary_round_trip_is_bit_exact() {
        let f = sample();
        let bytes = encode_binary(&f);
        assert_eq!(&bytes[..4], b"MIG1");
        assert_eq!(bytes.len(), HEADER_LEN + 15 * 8);
        let g = decode_binary(&bytes, Path::new("x.mig")).unwrap();
        assert_eq!(encode_binary(&g), bytes);
        assert_eq!(g, f);
    }

    #[test]
    fn binary_rejects_bad_magic_and_truncation() {
        let mut bytes = encode_binary(&sample());
        let p = Path::new("x.mig");
        assert!(decode_binary(&bytes[..bytes.len() - 1], p).is_err());
        assert!(decode_binary(&bytes[..10], p).is_err());
        bytes[0] = b'X';
        assert!(decode_binary(&bytes, p).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact_with_17_digits() {
        let f = sample();
        let text = encode_csv(&f);
        assert!(text.starts_with("# nx=5 ny=3 dx_m="));
        let g = decode_csv(&text, Path::new("x.csv")).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn csv_rejects_ragged_rows() {
        let text = "# nx=2 ny=2 dx_m=1 dy_m=1 z_m=0 tag=Jy\n1,2\n3\n";
        assert!(decode_csv(text, Path::new("x.csv")).is_err());
        let text = "# nx=2 ny=2 dx_m=1 dy_m=1 z_m=0 tag=Jy\n1,2\n";
        assert!(decode_csv(text, Path::new("x.csv")).is_err());
    }

    #[test]
    fn files_round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let f = sample();
        for format in [GridFormat::Binary, GridFormat::Csv] {
            let path = dir.path().join(format!("g.{}", format.extension()));
            write_grid(&path, &f, format).unwrap();
            assert_eq!(read_grid(&path).unwrap(), f);
        }
    }
}
