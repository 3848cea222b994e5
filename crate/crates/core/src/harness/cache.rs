//! Persistent cache of Hilbert class polynomials.
//!
//! One entry per line, `v1|D|h|c0,c1,...,ch`, decimal coefficients in
//! ascending degree. Updates go to a temporary file in the same directory
//! which is then renamed over the cache, so readers never see a torn file.
//! Entries are keyed by `D` and deterministic, so concurrent writers can only
//! ever race to write identical content.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;

use crate::classpoly::{hilbert_class_polynomial, IntPolynomial};
use crate::error::{Error, Result};
use crate::quadform::{class_number, Discriminant};

pub const FORMAT_VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCacheEntry {
    pub disc: Discriminant,
    pub h: usize,
    pub poly: IntPolynomial,
}

impl PolyCacheEntry {
    pub fn to_line(&self) -> String {
        let coeffs: Vec<String> = self.poly.coeffs().iter().map(|c| c.to_string()).collect();
        format!("{FORMAT_VERSION}|{}|{}|{}", self.disc, self.h, coeffs.join(","))
    }

    /// Parses one line. Rejects other versions, non-monic polynomials and
    /// degree mismatches.
    pub fn parse_line(line: &str) -> Result<Self> {
        let bad = |why: &str| Error::Cache(format!("{why}: {line:?}"));
        let mut parts = line.trim().split('|');
        let (Some(version), Some(d), Some(h), Some(coeffs), None) =
            (parts.next(), parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad("expected 4 fields"));
        };
        if version != FORMAT_VERSION {
            return Err(bad("unsupported version"));
        }
        let d: i64 = d.parse().map_err(|_| bad("bad discriminant"))?;
        let disc = Discriminant::new(d)?;
        let h: usize = h.parse().map_err(|_| bad("bad class number"))?;
        let coeffs = coeffs
            .split(',')
            .map(|c| c.parse::<BigInt>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad("bad coefficient"))?;
        let poly = IntPolynomial::from_coeffs(coeffs).ok_or_else(|| bad("not monic"))?;
        if poly.degree() != h {
            return Err(bad("degree differs from h"));
        }
        Ok(PolyCacheEntry { disc, h, poly })
    }
}

#[derive(Debug)]
pub struct PolyCache {
    path: PathBuf,
    entries: BTreeMap<Discriminant, PolyCacheEntry>,
    dirty: bool,
}

fn read_entries(path: &Path) -> Result<BTreeMap<Discriminant, PolyCacheEntry>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
        Err(e) => return Err(Error::Cache(format!("{}: {e}", path.display()))),
    };
    let mut out = BTreeMap::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        match PolyCacheEntry::parse_line(line) {
            Ok(entry) => {
                out.insert(entry.disc, entry);
            }
            Err(e) => log::warn!("skipping cache line: {e}"),
        }
    }
    Ok(out)
}

impl PolyCache {
    /// Opens (or starts) the cache at `path`. A missing file is an empty cache.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let entries = read_entries(&path)?;
        Ok(PolyCache { path, entries, dirty: false })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, disc: Discriminant) -> Option<&IntPolynomial> {
        self.entries.get(&disc).map(|e| &e.poly)
    }

    pub fn insert(&mut self, disc: Discriminant, poly: IntPolynomial) {
        let h = poly.degree();
        self.entries.insert(disc, PolyCacheEntry { disc, h, poly });
        self.dirty = true;
    }

    /// Cached `H_D`, or computes and records it. The flag is true on a hit.
    pub fn get_or_compute(&mut self, disc: Discriminant) -> Result<(IntPolynomial, bool)> {
        if let Some(entry) = self.entries.get(&disc) {
            if entry.h == class_number(disc) {
                log::info!("H_{disc} served from cache {}", self.path.display());
                return Ok((entry.poly.clone(), true));
            }
            log::warn!("cache entry for D = {disc} has wrong degree; recomputing");
        }
        let poly = hilbert_class_polynomial(disc)?;
        self.insert(disc, poly.clone());
        Ok((poly, false))
    }

    /// Writes all entries, merged with whatever is on disk now, via
    /// write-to-temporary-then-rename. No-op when nothing changed.
    pub fn flush(&mut self) -> Result<()> {
        if !self.dirty {
            return Ok(());
        }
        let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", self.path.display()));
        let mut merged = read_entries(&self.path)?;
        merged.extend(self.entries.iter().map(|(d, e)| (*d, e.clone())));
        let dir = match self.path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
        for entry in merged.values() {
            writeln!(tmp, "{}", entry.to_line()).map_err(io)?;
        }
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(&self.path).map_err(|e| io(e.error))?;
        self.entries = merged;
        self.dirty = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(d: i64, coeffs: &[i64]) -> PolyCacheEntry {
        let poly = IntPolynomial::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect()).unwrap();
        PolyCacheEntry { disc: Discriminant::new(d).unwrap(), h: poly.degree(), poly }
    }

    #[test]
    fn line_format() {
        let e = entry(-15, &[-121287375, 191025, 1]);
        assert_eq!(e.to_line(), "v1|-15|2|-121287375,191025,1");
        assert_eq!(PolyCacheEntry::parse_line(&e.to_line()).unwrap(), e);
    }

    #[test]
    fn rejects_bad_lines() {
        for line in [
            "v2|-15|2|-121287375,191025,1",
            "v1|-15|3|-121287375,191025,1",
            "v1|-15|2|-121287375,191025,2",
            "v1|-14|1|5,1",
            "v1|-15|2",
            "v1|-15|2|a,b,1",
        ] {
            assert!(PolyCacheEntry::parse_line(line).is_err(), "{line}");
        }
    }

    #[test]
    fn flush_and_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hpoly.cache");
        let mut cache = PolyCache::open(&path).unwrap();
        assert!(cache.is_empty());
        let d = Discriminant::new(-23).unwrap();
        let (poly, hit) = cache.get_or_compute(d).unwrap();
        assert!(!hit);
        cache.flush().unwrap();
        let mut again = PolyCache::open(&path).unwrap();
        let (cached, hit) = again.get_or_compute(d).unwrap();
        assert!(hit);
        assert_eq!(cached, poly);
    }

    #[test]
    fn flush_merges_concurrent_writers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c");
        let mut a = PolyCache::open(&path).unwrap();
        let mut b = PolyCache::open(&path).unwrap();
        a.get_or_compute(Discriminant::new(-4).unwrap()).unwrap();
        b.get_or_compute(Discriminant::new(-7).unwrap()).unwrap();
        a.flush().unwrap();
        b.flush().unwrap();
        let merged = PolyCache::open(&path).unwrap();
        assert_eq!(merged.len(), 2);
    }
}
