//! Persistent per-level sets of classification keys.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::bracket::Kind;
use crate::error::{Error, Result};

pub type KeySet = BTreeSet<(Kind, Vec<u8>)>;

/// Keys by crossing number. A level is present once its diagram stage has run,
/// even if it contributed no keys.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KeyLibrary {
    levels: BTreeMap<usize, KeySet>,
}

impl KeyLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn has_level(&self, n: usize) -> bool {
        self.levels.contains_key(&n)
    }

    pub fn levels(&self) -> impl Iterator<Item = usize> + '_ {
        self.levels.keys().copied()
    }

    pub fn level(&self, n: usize) -> Option<&KeySet> {
        self.levels.get(&n)
    }

    pub fn insert_level(&mut self, n: usize, keys: KeySet) {
        self.levels.insert(n, keys);
    }

    /// Checks that every level `1..n` is present.
    pub fn require_below(&self, n: usize) -> Result<()> {
        match (1..n).find(|k| !self.has_level(*k)) {
            Some(k) => Err(Error::Ordering(format!("key library lacks level {k}, needed before level {n}"))),
            None => Ok(()),
        }
    }

    /// Whether `key` occurs at some level strictly below `n`.
    pub fn known_below(&self, n: usize, kind: Kind, key: &[u8]) -> bool {
        let probe = (kind, key.to_vec());
        self.levels.range(..n).any(|(_, set)| set.contains(&probe))
    }

    pub fn file_name(n: usize) -> String {
        format!("{n}.keys")
    }

    pub fn save_level(&self, dir: &Path, n: usize) -> Result<()> {
        let set = self
            .levels
            .get(&n)
            .ok_or_else(|| Error::Ordering(format!("no keys recorded for level {n}")))?;
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(Self::file_name(n));
        let mut text = String::new();
        for (kind, key) in set {
            text.push_str(kind.as_str());
            text.push(' ');
            text.push_str(&hex::encode(key));
            text.push('\n');
        }
        let mut f = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        f.write_all(text.as_bytes()).map_err(|e| Error::io(&path, e))
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        for n in self.levels.keys() {
            self.save_level(dir, *n)?;
        }
        Ok(())
    }

    /// Reads every `<k>.keys` file in `dir`; a missing directory is an empty library.
    pub fn load(dir: &Path) -> Result<Self> {
        let mut lib = KeyLibrary::new();
        if !dir.exists() {
            return Ok(lib);
        }
        let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        for entry in entries {
            let path = entry.map_err(|e| Error::io(dir, e))?.path();
            let level = path
                .file_name()
                .and_then(|s| s.to_str())
                .and_then(|s| s.strip_suffix(".keys"))
                .and_then(|s| s.parse::<usize>().ok());
            let Some(level) = level else { continue };
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            let mut set = KeySet::new();
            for (i, line) in text.lines().enumerate() {
                let bad = |message: &str| Error::Format { path: path.clone(), line: i + 1, message: message.into() };
                if line.trim().is_empty() {
                    continue;
                }
                let (kind, key) = line.split_once(' ').ok_or_else(|| bad("expected `<kind> <hex>`"))?;
                let kind = match kind {
                    "knot" => Kind::Knot,
                    "link" => Kind::Link,
                    _ => return Err(bad("kind must be knot or link")),
                };
                let key = hex::decode(key.trim()).map_err(|e| bad(&e.to_string()))?;
                set.insert((kind, key));
            }
            lib.levels.insert(level, set);
        }
        Ok(lib)
    }
}
