//! File formats: profile CSV, field CSV, compact binary field dumps and a
//! stable config hash for output headers.

use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::fields::{GridField, Quadrant};
use crate::profile::RadialProfile;
use crate::Result;

/// FNV-1a hash of a byte string; stable across runs and platforms.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Profile CSV: a comment header with the parameters, then (r, U, U') rows.
pub fn write_profile_csv<W: Write>(w: &mut W, p: &RadialProfile, config_hash: u64) -> Result<()> {
    writeln!(w, "# config_hash=0x{config_hash:016x}")?;
    writeln!(
        w,
        "# N={} lambda={:.12e} mu={:.12e} C0={:.12e} R_tail={:.12e}",
        p.dim, p.lambda, p.mu, p.c0, p.r_tail
    )?;
    writeln!(w, "r,U,dU")?;
    for k in 0..p.r.len() {
        writeln!(w, "{:.12e},{:.12e},{:.12e}", p.r[k], p.u[k], p.du[k])?;
    }
    Ok(())
}

/// Field CSV: flat (x1, x2, value) rows over the stored quadrant.
pub fn write_field_csv<W: Write>(w: &mut W, f: &GridField, config_hash: u64) -> Result<()> {
    writeln!(w, "# config_hash=0x{config_hash:016x}")?;
    writeln!(w, "# n={} h={:.12e}", f.grid.n, f.grid.h)?;
    writeln!(w, "x1,x2,value")?;
    let n = f.grid.n;
    for i in 0..n {
        for j in 0..n {
            writeln!(
                w,
                "{:.12e},{:.12e},{:.12e}",
                i as f64 * f.grid.h,
                j as f64 * f.grid.h,
                f.v[i * n + j]
            )?;
        }
    }
    Ok(())
}

/// Compact binary dump: header (L, h as f64 LE, quadrant size as u64 LE)
/// followed by row-major little-endian f64 values.
pub fn write_field_binary<W: Write>(w: &mut W, f: &GridField) -> Result<()> {
    w.write_all(&f.grid.extent().to_le_bytes())?;
    w.write_all(&f.grid.h.to_le_bytes())?;
    w.write_all(&(f.grid.n as u64).to_le_bytes())?;
    for v in &f.v {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Read back a binary field dump.
pub fn read_field_binary<R: Read>(r: &mut R) -> Result<GridField> {
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let _extent = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let h = f64::from_le_bytes(b8);
    r.read_exact(&mut b8)?;
    let n = u64::from_le_bytes(b8) as usize;
    let mut v = vec![0.0f64; n * n];
    for val in v.iter_mut() {
        r.read_exact(&mut b8)?;
        *val = f64::from_le_bytes(b8);
    }
    Ok(GridField { grid: Quadrant::new(n, h), v })
}

/// Write a generic CSV table with a hash header; rows are preformatted.
pub fn write_table(path: &Path, header_cols: &str, rows: &[String], config_hash: u64) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "# config_hash=0x{config_hash:016x}")?;
    writeln!(w, "{header_cols}")?;
    for row in rows {
        writeln!(w, "{row}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_field_round_trip() {
        let g = Quadrant::new(17, 0.31);
        let f = GridField::from_fn(g, |x, y| (x - y).sin() + x * y);
        let mut buf = Vec::new();
        write_field_binary(&mut buf, &f).unwrap();
        assert_eq!(buf.len(), 24 + 8 * 17 * 17);
        let back = read_field_binary(&mut buf.as_slice()).unwrap();
        assert_eq!(back.grid, g);
        assert_eq!(back.v, f.v);
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(fnv1a(b"spikewave"), fnv1a(b"spikewave"));
        assert_ne!(fnv1a(b"a"), fnv1a(b"b"));
    }
}
