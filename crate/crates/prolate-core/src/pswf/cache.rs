//! Versioned binary serialization of a [`PswfBasis`].
//!
//! Every floating-point field is stored as its raw little-endian bit
//! pattern, so a round trip is bit-exact. Records carry the format version
//! and the build tolerances; readers reject anything that does not match
//! what this build would produce.

use super::PswfBasis;
use crate::eigensystem::{Parity, SpectrumSlice};
use crate::error::{Error, Result};
use prolate_dd::Dd;
use std::io::{Read, Write};
use std::path::Path;

pub const CACHE_FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"PSWFBAS\0";

struct Writer<W: Write> {
    w: W,
}

impl<W: Write> Writer<W> {
    fn u32(&mut self, v: u32) -> Result<()> {
        self.w.write_all(&v.to_le_bytes())?;
        Ok(())
    }
    fn u64(&mut self, v: u64) -> Result<()> {
        self.w.write_all(&v.to_le_bytes())?;
        Ok(())
    }
    fn f64(&mut self, v: f64) -> Result<()> {
        self.u64(v.to_bits())
    }
    fn dd(&mut self, v: Dd) -> Result<()> {
        self.f64(v.hi)?;
        self.f64(v.lo)
    }
    fn f64_slice(&mut self, v: &[f64]) -> Result<()> {
        self.u64(v.len() as u64)?;
        for &x in v {
            self.f64(x)?;
        }
        Ok(())
    }
    fn dd_slice(&mut self, v: &[Dd]) -> Result<()> {
        self.u64(v.len() as u64)?;
        for &x in v {
            self.dd(x)?;
        }
        Ok(())
    }
}

struct Reader<R: Read> {
    r: R,
}

impl<R: Read> Reader<R> {
    fn u32(&mut self) -> Result<u32> {
        let mut b = [0u8; 4];
        self.r.read_exact(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }
    fn u64(&mut self) -> Result<u64> {
        let mut b = [0u8; 8];
        self.r.read_exact(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_bits(self.u64()?))
    }
    fn dd(&mut self) -> Result<Dd> {
        let hi = self.f64()?;
        let lo = self.f64()?;
        Ok(Dd { hi, lo })
    }
    fn f64_slice(&mut self) -> Result<Vec<f64>> {
        let n = self.u64()? as usize;
        (0..n).map(|_| self.f64()).collect()
    }
    fn dd_slice(&mut self) -> Result<Vec<Dd>> {
        let n = self.u64()? as usize;
        (0..n).map(|_| self.dd()).collect()
    }
}

fn write_slice<W: Write>(w: &mut Writer<W>, s: &SpectrumSlice) -> Result<()> {
    w.u32(match s.parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    })?;
    w.u64(s.k_count as u64)?;
    w.dd_slice(&s.chi_dd)?;
    w.u64(s.beta_dd.len() as u64)?;
    for row in &s.beta_dd {
        w.dd_slice(row)?;
    }
    Ok(())
}

fn read_slice<R: Read>(r: &mut Reader<R>) -> Result<SpectrumSlice> {
    let parity = match r.u32()? {
        0 => Parity::Even,
        1 => Parity::Odd,
        other => return Err(Error::CacheFormat(format!("bad parity tag {other}"))),
    };
    let k_count = r.u64()? as usize;
    let chi_dd = r.dd_slice()?;
    let rows = r.u64()? as usize;
    let mut beta_dd = Vec::with_capacity(rows);
    for _ in 0..rows {
        let row = r.dd_slice()?;
        if k_count != 0 && row.len() != k_count {
            return Err(Error::CacheFormat("row length mismatch".into()));
        }
        beta_dd.push(row);
    }
    let chi = chi_dd.iter().map(|x| x.to_f64()).collect();
    let beta = beta_dd
        .iter()
        .map(|row| row.iter().map(|b| b.to_f64()).collect())
        .collect();
    Ok(SpectrumSlice {
        parity,
        k_count,
        chi,
        beta,
        chi_dd,
        beta_dd,
    })
}

pub fn save_basis(basis: &PswfBasis, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = Writer {
        w: std::io::BufWriter::new(file),
    };
    w.w.write_all(MAGIC)?;
    w.u32(CACHE_FORMAT_VERSION)?;
    // build tolerances: part of the key
    w.f64(super::DD_ESCALATION)?;
    w.f64(super::MU_RELIABLE_FLOOR)?;
    w.f64(crate::eigensystem::TAIL_MASS_TOL)?;
    w.f64(basis.c)?;
    w.u64(basis.n_max as u64)?;
    write_slice(&mut w, &basis.even)?;
    write_slice(&mut w, &basis.odd)?;
    w.f64_slice(&basis.chi)?;
    w.f64_slice(&basis.lambda)?;
    w.f64_slice(&basis.mu_abs)?;
    w.f64_slice(&basis.psi_one)?;
    w.dd_slice(&basis.mu_abs_dd)?;
    w.u64(basis.mu_reliable.len() as u64)?;
    for &b in &basis.mu_reliable {
        w.w.write_all(&[b as u8])?;
    }
    w.w.flush()?;
    Ok(())
}

pub fn load_basis(path: &Path) -> Result<PswfBasis> {
    let file = std::fs::File::open(path)?;
    let mut r = Reader {
        r: std::io::BufReader::new(file),
    };
    let mut magic = [0u8; 8];
    r.r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::CacheFormat("bad magic".into()));
    }
    let version = r.u32()?;
    if version != CACHE_FORMAT_VERSION {
        return Err(Error::CacheFormat(format!(
            "format version {version}, expected {CACHE_FORMAT_VERSION}"
        )));
    }
    for (name, expect) in [
        ("dd escalation", super::DD_ESCALATION),
        ("mu floor", super::MU_RELIABLE_FLOOR),
        ("tail mass", crate::eigensystem::TAIL_MASS_TOL),
    ] {
        let got = r.f64()?;
        if got.to_bits() != expect.to_bits() {
            return Err(Error::CacheFormat(format!(
                "tolerance mismatch ({name}): cached {got:e}"
            )));
        }
    }
    let c = r.f64()?;
    let n_max = r.u64()? as usize;
    let even = read_slice(&mut r)?;
    let odd = read_slice(&mut r)?;
    let chi = r.f64_slice()?;
    let lambda = r.f64_slice()?;
    let mu_abs = r.f64_slice()?;
    let psi_one = r.f64_slice()?;
    let mu_abs_dd = r.dd_slice()?;
    let n_flags = r.u64()? as usize;
    let mut mu_reliable = Vec::with_capacity(n_flags);
    for _ in 0..n_flags {
        let mut b = [0u8; 1];
        r.r.read_exact(&mut b)?;
        mu_reliable.push(b[0] != 0);
    }
    if chi.len() != n_max + 1 || lambda.len() != n_max + 1 || mu_reliable.len() != n_max + 1 {
        return Err(Error::CacheFormat("array length mismatch".into()));
    }
    Ok(PswfBasis {
        c,
        n_max,
        even,
        odd,
        chi,
        lambda,
        mu_abs,
        psi_one,
        mu_reliable,
        mu_abs_dd,
    })
}

/// Cache file name key: bandwidth bits, n_max and format version.
pub fn cache_file_name(c: f64, n_max: usize) -> String {
    format!(
        "pswf_v{}_c{:016x}_n{}.bin",
        CACHE_FORMAT_VERSION,
        c.to_bits(),
        n_max
    )
}
