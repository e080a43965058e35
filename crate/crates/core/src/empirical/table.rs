//! Table of `(p, roots of n^3 + 2 mod p)` for every prime up to a limit, with
//! an on-disk binary cache.
//!
//! Cache layout, all integers little-endian:
//!
//! ```text
//! header (16 bytes): magic "CRT2" | version: u32 | prime limit: u64
//! record (per prime, ascending): p: u64 | root count: u8 | roots: u64 × count
//! ```

use std::io::{Read, Write};
use std::path::Path;

use super::roots::cube_roots_of_minus_two;
use super::sieve::primes_up_to;
use crate::error::{Error, Result};
use crate::exec::Execution;

pub const CACHE_MAGIC: [u8; 4] = *b"CRT2";
pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeRoots {
    pub p: u64,
    count: u8,
    roots: [u64; 3],
}

impl PrimeRoots {
    pub fn new(p: u64, roots: &[u64]) -> Self {
        assert!(roots.len() <= 3);
        let mut r = [0; 3];
        r[..roots.len()].copy_from_slice(roots);
        PrimeRoots {
            p,
            count: roots.len() as u8,
            roots: r,
        }
    }

    pub fn roots(&self) -> &[u64] {
        &self.roots[..self.count as usize]
    }

    /// `ν(p)`.
    pub fn nu(&self) -> u8 {
        self.count
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootTable {
    limit: u64,
    entries: Vec<PrimeRoots>,
}

impl RootTable {
    /// Roots for every prime `<= limit`, computed in parallel over fixed chunks.
    pub fn build(limit: u64, exec: Execution) -> Self {
        let primes = primes_up_to(limit);
        let chunks: Vec<&[u64]> = primes.chunks(4096).collect();
        let entries = exec
            .map(&chunks, |chunk| {
                chunk
                    .iter()
                    .map(|&p| PrimeRoots::new(p, &cube_roots_of_minus_two(p)))
                    .collect::<Vec<_>>()
            })
            .into_iter()
            .flatten()
            .collect();
        RootTable { limit, entries }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn entries(&self) -> &[PrimeRoots] {
        &self.entries
    }

    /// Loads the cache at `path` if it covers `limit`, otherwise builds the
    /// table and writes it there.
    pub fn load_or_build(path: &Path, limit: u64, exec: Execution) -> Result<Self> {
        if path.exists() {
            let table = Self::read_from(&mut std::io::BufReader::new(std::fs::File::open(path)?))?;
            if table.limit >= limit {
                return Ok(table.truncated(limit));
            }
        }
        let table = Self::build(limit, exec);
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        table.write_to(&mut out)?;
        out.flush()?;
        Ok(table)
    }

    /// The same table restricted to primes `<= limit`.
    pub fn truncated(mut self, limit: u64) -> Self {
        if limit < self.limit {
            self.entries.retain(|e| e.p <= limit);
            self.limit = limit;
        }
        self
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(&CACHE_MAGIC)?;
        w.write_all(&CACHE_VERSION.to_le_bytes())?;
        w.write_all(&self.limit.to_le_bytes())?;
        for e in &self.entries {
            w.write_all(&e.p.to_le_bytes())?;
            w.write_all(&[e.count])?;
            for r in e.roots() {
                w.write_all(&r.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let mut header = [0u8; 16];
        r.read_exact(&mut header)
            .map_err(|_| Error::Cache("truncated header".into()))?;
        if header[..4] != CACHE_MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let version = u32::from_le_bytes(header[4..8].try_into().expect("4 bytes"));
        if version != CACHE_VERSION {
            return Err(Error::Cache(format!("unsupported version {version}")));
        }
        let limit = u64::from_le_bytes(header[8..16].try_into().expect("8 bytes"));

        let mut body = Vec::new();
        r.read_to_end(&mut body)?;
        let mut entries = Vec::new();
        let mut at = 0usize;
        let take_u64 = |at: &mut usize| -> Result<u64> {
            let bytes = body
                .get(*at..*at + 8)
                .ok_or_else(|| Error::Cache("truncated record".into()))?;
            *at += 8;
            Ok(u64::from_le_bytes(bytes.try_into().expect("8 bytes")))
        };
        let mut previous = 0u64;
        while at < body.len() {
            let p = take_u64(&mut at)?;
            let count = *body.get(at).ok_or_else(|| Error::Cache("truncated record".into()))?;
            at += 1;
            if count > 3 {
                return Err(Error::Cache(format!("root count {count} for p = {p}")));
            }
            if p <= previous || p > limit {
                return Err(Error::Cache(format!(
                    "record p = {p} out of order or above limit {limit}"
                )));
            }
            previous = p;
            let mut roots = [0u64; 3];
            for slot in roots.iter_mut().take(count as usize) {
                *slot = take_u64(&mut at)?;
            }
            entries.push(PrimeRoots::new(p, &roots[..count as usize]));
        }
        Ok(RootTable { limit, entries })
    }
}
