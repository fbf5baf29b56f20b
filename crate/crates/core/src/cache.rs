//! Persistent store of character table slices.
//!
//! File layout (UTF-8 text):
//!
//! ```text
//! hurwitzlab-charcache v1
//! <d>|<mu>|<lambda>|<value>
//! ...
//! checksum|<sha256 of every preceding byte, hex>
//! ```
//!
//! Partitions are comma-joined parts. The whole file is rewritten through a
//! temporary file and a rename, so readers never see a half-written file.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use parking_lot::{Mutex, RwLock};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::monodromy::characters::{partition_count, CharacterKey, CharacterTableSlice};
use crate::partition::Partition;

pub const HEADER: &str = "hurwitzlab-charcache v1";
const MAGIC: &str = "hurwitzlab-charcache";
/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "HURWITZLAB_CACHE";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache version mismatch: found '{found}', expected '{HEADER}'")]
    VersionMismatch { found: String },

    #[error("corrupt cache at line {line}: {reason}")]
    Corrupt { line: usize, reason: String },

    #[error("cache checksum mismatch")]
    ChecksumMismatch,

    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
}

type Slices = BTreeMap<(u32, Partition), BTreeMap<Partition, BigInt>>;

/// Summary returned by [`CharCache::stats`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CacheStats {
    pub slices: usize,
    pub complete_slices: usize,
    pub values: usize,
}

#[derive(Debug, Default)]
pub struct CharCache {
    path: Option<PathBuf>,
    slices: RwLock<Slices>,
    write_lock: Mutex<()>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn join(p: &Partition) -> String {
    let parts: Vec<String> = p.parts().iter().map(u32::to_string).collect();
    parts.join(",")
}

fn split_partition(text: &str, line: usize) -> Result<Partition, CacheError> {
    let parts = text
        .split(',')
        .map(|t| t.parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CacheError::Corrupt {
            line,
            reason: format!("bad partition '{text}': {e}"),
        })?;
    Partition::new(parts).map_err(|e| CacheError::Corrupt {
        line,
        reason: e.to_string(),
    })
}

fn parse(text: &str) -> Result<Slices, CacheError> {
    let mut lines = text.split_inclusive('\n');
    let first = lines.next().unwrap_or("").trim_end_matches('\n');
    if first != HEADER {
        if first.starts_with(MAGIC) {
            return Err(CacheError::VersionMismatch {
                found: first.to_string(),
            });
        }
        return Err(CacheError::Corrupt {
            line: 1,
            reason: "missing header".into(),
        });
    }
    let mut hasher = Sha256::new();
    hasher.update(first.as_bytes());
    hasher.update(b"\n");
    let mut slices = Slices::new();
    let mut checksum = None;
    for (i, raw) in lines.enumerate() {
        let line_no = i + 2;
        if checksum.is_some() {
            return Err(CacheError::Corrupt {
                line: line_no,
                reason: "data after checksum".into(),
            });
        }
        let line = raw.trim_end_matches('\n');
        if let Some(sum) = line.strip_prefix("checksum|") {
            checksum = Some(sum.to_string());
            continue;
        }
        if !raw.ends_with('\n') {
            return Err(CacheError::Corrupt {
                line: line_no,
                reason: "truncated line".into(),
            });
        }
        hasher.update(raw.as_bytes());
        let fields: Vec<&str> = line.split('|').collect();
        if fields.len() != 4 {
            return Err(CacheError::Corrupt {
                line: line_no,
                reason: format!("expected 4 fields, found {}", fields.len()),
            });
        }
        let d: u32 = fields[0].parse().map_err(|_| CacheError::Corrupt {
            line: line_no,
            reason: format!("bad degree '{}'", fields[0]),
        })?;
        let mu = split_partition(fields[1], line_no)?;
        let lambda = split_partition(fields[2], line_no)?;
        let value: BigInt = fields[3].parse().map_err(|_| CacheError::Corrupt {
            line: line_no,
            reason: format!("bad value '{}'", fields[3]),
        })?;
        if mu.degree() != d || lambda.degree() != d {
            return Err(CacheError::Corrupt {
                line: line_no,
                reason: "partition does not match degree".into(),
            });
        }
        slices.entry((d, mu)).or_default().insert(lambda, value);
    }
    match checksum {
        None => Err(CacheError::Corrupt {
            line: 0,
            reason: "missing checksum trailer (truncated file?)".into(),
        }),
        Some(sum) if sum != hex(&hasher.finalize()) => Err(CacheError::ChecksumMismatch),
        Some(_) => Ok(slices),
    }
}

fn render(slices: &Slices) -> String {
    let mut body = String::new();
    body.push_str(HEADER);
    body.push('\n');
    for ((d, mu), values) in slices {
        let mu_text = join(mu);
        for (lambda, value) in values {
            body.push_str(&format!("{d}|{mu_text}|{}|{value}\n", join(lambda)));
        }
    }
    let sum = hex(&Sha256::digest(body.as_bytes()));
    body.push_str(&format!("checksum|{sum}\n"));
    body
}

impl CharCache {
    /// In-memory cache that never touches the disk.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens a cache file. A missing or empty file is an empty cache.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, CacheError> {
        let path = path.as_ref().to_path_buf();
        let slices = match fs::read_to_string(&path) {
            Ok(text) if text.is_empty() => Slices::new(),
            Ok(text) => parse(&text)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Slices::new(),
            Err(e) => return Err(e.into()),
        };
        Ok(CharCache {
            path: Some(path),
            slices: RwLock::new(slices),
            write_lock: Mutex::new(()),
        })
    }

    /// Opens the file named by `HURWITZLAB_CACHE`, if set and non-empty.
    pub fn from_env() -> Result<Option<Self>, CacheError> {
        match std::env::var(CACHE_ENV) {
            Ok(p) if !p.is_empty() => Self::open(p).map(Some),
            _ => Ok(None),
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// The slice for `key`, if every `lambda` of its degree is present.
    pub fn load(&self, key: &CharacterKey) -> Option<CharacterTableSlice> {
        let slices = self.slices.read();
        let values = slices.get(&(key.degree, key.class.clone()))?;
        if values.len() != partition_count(key.degree) {
            return None;
        }
        Some(CharacterTableSlice {
            key: key.clone(),
            values: values.clone(),
        })
    }

    /// Inserts a slice and rewrites the backing file, if any.
    pub fn store(&self, slice: &CharacterTableSlice) -> Result<(), CacheError> {
        self.slices
            .write()
            .insert((slice.key.degree, slice.key.class.clone()), slice.values.clone());
        self.persist()
    }

    fn persist(&self) -> Result<(), CacheError> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let _guard = self.write_lock.lock();
        let text = render(&self.slices.read());
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        let file_name = path.file_name().and_then(|n| n.to_str()).unwrap_or("charcache");
        let tmp = dir.join(format!(".{file_name}.tmp{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn stats(&self) -> CacheStats {
        let slices = self.slices.read();
        CacheStats {
            slices: slices.len(),
            complete_slices: slices
                .iter()
                .filter(|((d, _), v)| v.len() == partition_count(*d))
                .count(),
            values: slices.values().map(BTreeMap::len).sum(),
        }
    }

    /// Keys of the stored slices, in file order.
    pub fn keys(&self) -> Vec<CharacterKey> {
        self.slices
            .read()
            .keys()
            .map(|(d, mu)| CharacterKey {
                degree: *d,
                class: mu.clone(),
            })
            .collect()
    }

    /// Drops incomplete slices and rewrites the file. Returns how many were
    /// dropped.
    pub fn compact(&self) -> Result<usize, CacheError> {
        let dropped = {
            let mut slices = self.slices.write();
            let before = slices.len();
            slices.retain(|(d, _), v| v.len() == partition_count(*d));
            before - slices.len()
        };
        self.persist()?;
        Ok(dropped)
    }
}
