use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use super::{gram_matrix, weingarten_matrix, RationalMatrix, WeingartenMatrix};
use crate::error::{Error, Result};
use crate::partitions::{CategoryId, ColoredWord, SetPartition};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct CacheKey {
    category: CategoryId,
    word: String,
    n: usize,
}

/// Memo of Weingarten matrices keyed by `(category, word, N)`.
///
/// Color-blind categories share one entry per word length. Lookups take a
/// shared read lock; a miss computes outside the lock and the first insert
/// wins, so racing computations are harmless. With a directory attached,
/// every computed matrix is persisted as one JSON record and records read
/// back are re-verified against a fresh Gram matrix before use.
#[derive(Debug, Default)]
pub struct WeingartenCache {
    entries: RwLock<HashMap<CacheKey, Arc<WeingartenMatrix>>>,
    dir: Option<PathBuf>,
}

/// On-disk record; entries are `"p/q"` strings.
#[derive(Debug, Serialize, Deserialize)]
struct Record {
    category: String,
    word: String,
    n: usize,
    index: Vec<String>,
    basis: Vec<usize>,
    entries: Vec<Vec<String>>,
}

impl WeingartenCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(WeingartenCache {
            entries: RwLock::default(),
            dir: Some(dir),
        })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(
        &self,
        category: CategoryId,
        word: &ColoredWord,
        n: usize,
    ) -> Result<Arc<WeingartenMatrix>> {
        let word = category.effective_word(word);
        let key = CacheKey {
            category,
            word: word.to_string(),
            n,
        };
        if let Some(hit) = self.entries.read().get(&key) {
            return Ok(Arc::clone(hit));
        }
        let computed = Arc::new(self.load_or_compute(&key, &word)?);
        let mut map = self.entries.write();
        Ok(Arc::clone(map.entry(key).or_insert(computed)))
    }

    fn load_or_compute(&self, key: &CacheKey, word: &ColoredWord) -> Result<WeingartenMatrix> {
        let Some(dir) = &self.dir else {
            return weingarten_matrix(gram_matrix(key.category, word, key.n)?);
        };
        let path = dir.join(file_name(key));
        if path.exists() {
            match read_record(&path, key, word) {
                Ok(w) => return Ok(w),
                // a bad record is overwritten with a fresh computation
                Err(Error::Cache(_)) | Err(Error::Parse(_)) => {}
                Err(e) => return Err(e),
            }
        }
        let w = weingarten_matrix(gram_matrix(key.category, word, key.n)?)?;
        write_record(&path, key, &w)?;
        Ok(w)
    }
}

fn file_name(key: &CacheKey) -> String {
    let cat = key.category.as_str().replace('+', "plus");
    let word = if key.word.is_empty() { "empty" } else { &key.word };
    format!("wg-{cat}-{word}-{}.json", key.n)
}

fn write_record(path: &Path, key: &CacheKey, w: &WeingartenMatrix) -> Result<()> {
    let record = Record {
        category: key.category.to_string(),
        word: key.word.clone(),
        n: key.n,
        index: w.index().iter().map(ToString::to_string).collect(),
        basis: w.basis.clone(),
        entries: w
            .entries
            .to_rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect(),
    };
    let text = serde_json::to_string(&record).map_err(|e| Error::Cache(e.to_string()))?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn read_record(path: &Path, key: &CacheKey, word: &ColoredWord) -> Result<WeingartenMatrix> {
    let text = fs::read_to_string(path)?;
    let record: Record = serde_json::from_str(&text).map_err(|e| Error::Cache(e.to_string()))?;
    if record.category != key.category.as_str() || record.word != key.word || record.n != key.n {
        return Err(Error::Cache(format!("key mismatch in {}", path.display())));
    }
    let gram = gram_matrix(key.category, word, key.n)?;
    let index = record
        .index
        .iter()
        .map(|s| s.parse::<SetPartition>())
        .collect::<Result<Vec<_>>>()?;
    if index != gram.index {
        return Err(Error::Cache("partition index differs".into()));
    }
    let entries = RationalMatrix::from_rows(
        record
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| {
                        s.parse::<BigRational>()
                            .map_err(|e| Error::Cache(format!("bad entry `{s}`: {e}")))
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?,
    )?;
    let size = gram.index.len();
    if entries.rows() != size || entries.cols() != size {
        return Err(Error::Cache("entry matrix has the wrong shape".into()));
    }
    let basis = record.basis;
    if basis.windows(2).any(|w| w[0] >= w[1]) || basis.iter().any(|&b| b >= size) {
        return Err(Error::Cache("basis is not a sorted subset of the index".into()));
    }
    for r in 0..size {
        for c in 0..size {
            let inside = basis.binary_search(&r).is_ok() && basis.binary_search(&c).is_ok();
            if !inside && !entries.get(r, c).is_zero() {
                return Err(Error::Cache("entries outside basis x basis".into()));
            }
        }
    }
    let g = &gram.entries;
    if g.mul(&entries)?.mul(g)? != *g {
        return Err(Error::Cache("G W G != G".into()));
    }
    if entries.mul(g)?.mul(&entries)? != entries {
        return Err(Error::Cache("W G W != W".into()));
    }
    Ok(WeingartenMatrix {
        gram,
        basis,
        entries,
    })
}
