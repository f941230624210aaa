//! Staged tabulation: projections, diagrams, and comparison against the
//! reference tables. Datasets are JSONL with a header line.

pub mod library;
pub mod reference;
pub mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bracket::{evaluate_bracket, key_for, normalize, precompute_geometry, skeleton, KeyConvention, Kind, Skeleton};
use crate::canonical::{CanonicalEncoding, KEY_ORDER, TRAVERSAL_ORDER};
use crate::diagram::{assignments, passes_bigon_rule, participation_with, writhe, CrossingBits, Diagram};
use crate::enumerate::{enumerate_projection_classes, EnumConfig};
use crate::error::{Error, Result};
use crate::map::{component_count, euler_genus, LabelledMap};
use crate::perm::Perm;
use crate::primeness::{is_prime, PrimenessReport};
use crate::Bracket;

pub use library::{KeyLibrary, KeySet};

pub const FORMAT_VERSION: u32 = 1;

/// First line of every dataset file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub version: u32,
    pub n: usize,
    pub traversal: String,
    pub key_order: String,
}

impl Header {
    fn new(format: &str, n: usize) -> Self {
        Header {
            format: format.into(),
            version: FORMAT_VERSION,
            n,
            traversal: TRAVERSAL_ORDER.into(),
            key_order: KEY_ORDER.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionRecord {
    pub id: String,
    pub n: usize,
    pub alpha: Perm,
    pub sigma: Perm,
    pub components: usize,
    pub genus: usize,
    pub prime: bool,
    pub witness: PrimenessReport,
}

impl ProjectionRecord {
    pub fn from_encoding(enc: &CanonicalEncoding) -> Result<Self> {
        let m = enc.to_map();
        let report = is_prime(&m)?;
        Ok(ProjectionRecord {
            id: projection_id(enc),
            n: enc.n,
            alpha: enc.alpha.clone(),
            sigma: enc.sigma.clone(),
            components: component_count(&m),
            genus: euler_genus(&m)?,
            prime: report.prime,
            witness: report,
        })
    }

    pub fn map(&self) -> Result<LabelledMap> {
        LabelledMap::new(self.alpha.clone(), self.sigma.clone())
    }
}

/// First 16 hex digits of the SHA-256 of the canonical JSON encoding.
pub fn projection_id(enc: &CanonicalEncoding) -> String {
    let digest = Sha256::digest(enc.to_json().as_bytes());
    hex::encode(&digest[..8])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterVerdicts {
    pub bigon: bool,
    /// `None` for knots.
    pub participation: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramRecord {
    pub projection_id: String,
    pub bits: CrossingBits,
    pub kind: Kind,
    pub filters: FilterVerdicts,
    pub survives: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub writhe: Option<i64>,
    /// `X_D` for knots, `⟨D⟩` for links.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket: Option<Bracket>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeleton: Option<Skeleton<i64>>,
    pub new_at_n: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramConfig {
    pub global_switch: bool,
    pub bigon_rule: bool,
    pub participation: bool,
    /// Also evaluate and write assignments rejected by the filters.
    pub keep_rejected: bool,
    pub keys: KeyConvention,
    /// Treat the crossingless classes of [`crossingless_keys`] as known below level 1.
    pub crossingless_seed: bool,
}

impl Default for DiagramConfig {
    fn default() -> Self {
        DiagramConfig {
            global_switch: true,
            bigon_rule: true,
            participation: true,
            keep_rejected: false,
            keys: KeyConvention::default(),
            crossingless_seed: true,
        }
    }
}

/// Keys of knots with crossing number zero that carry genus-one
/// information: the essential simple closed curve, `X = x`.
pub fn crossingless_keys(keys: KeyConvention) -> KeySet {
    let mut curve = Bracket::zero();
    curve.add_term(1, 0, 1);
    [(Kind::Knot, key_for(Kind::Knot, &curve, keys))].into()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionStats {
    pub n: usize,
    pub unsensed: usize,
    pub removed_comp: usize,
    pub removed_split: usize,
    pub prime_total: usize,
    pub prime_knots: usize,
    pub prime_links: usize,
    /// Prime link projections by component count.
    pub link_components: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramStats {
    pub n: usize,
    pub projections: usize,
    pub assignments: usize,
    pub bigon_rejected: usize,
    pub participation_rejected: usize,
    pub survivors: usize,
    pub knot_keys: usize,
    pub link_keys: usize,
    pub new_knots: usize,
    pub new_links: usize,
}

pub fn projection_file(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("proj_n{n}.jsonl"))
}

pub fn diagram_file(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("diag_n{n}.jsonl"))
}

pub fn projection_stats_file(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("stats_proj_n{n}.json"))
}

pub fn diagram_stats_file(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("stats_diag_n{n}.json"))
}

/// Enumerates, classifies and counts the unsensed projections with `n` crossings.
pub fn compute_projections(n: usize, config: EnumConfig) -> Result<(Vec<ProjectionRecord>, ProjectionStats)> {
    let classes = enumerate_projection_classes(n, config)?;
    let records: Vec<ProjectionRecord> =
        classes.par_iter().map(ProjectionRecord::from_encoding).collect::<Result<_>>()?;
    let mut stats = ProjectionStats { n, unsensed: records.len(), ..Default::default() };
    for r in &records {
        if r.witness.two_edge_cut.is_some() {
            stats.removed_comp += 1;
        } else if r.witness.split_component.is_some() {
            stats.removed_split += 1;
        } else if r.components == 1 {
            stats.prime_knots += 1;
        } else {
            stats.prime_links += 1;
            *stats.link_components.entry(r.components).or_default() += 1;
        }
    }
    stats.prime_total = stats.prime_knots + stats.prime_links;
    Ok((records, stats))
}

pub fn stage_projections(n: usize, config: EnumConfig, out: &Path) -> Result<ProjectionStats> {
    let (records, stats) = compute_projections(n, config)?;
    write_jsonl(&projection_file(out, n), &Header::new("projections", n), &records)?;
    write_json(&projection_stats_file(out, n), &stats)?;
    Ok(stats)
}

/// Assignments of one projection with filter verdicts and, for survivors, keys.
pub fn classify_projection(record: &ProjectionRecord, config: &DiagramConfig) -> Result<Vec<DiagramRecord>> {
    let p = record.map()?;
    let kind = Kind::of(&p);
    let comp = p.dart_components();
    let count = component_count(&p);
    let table = precompute_geometry(&p)?;
    let mut out = Vec::new();
    for bits in assignments(&p, config.global_switch) {
        let d = Diagram::new(&p, bits)?;
        let bigon = passes_bigon_rule(&d);
        let participation = (kind == Kind::Link).then(|| participation_with(&d, &comp, count));
        let survives = (bigon || !config.bigon_rule) && (participation != Some(false) || !config.participation);
        let mut rec = DiagramRecord {
            projection_id: record.id.clone(),
            bits,
            kind,
            filters: FilterVerdicts { bigon, participation },
            survives,
            writhe: None,
            bracket: None,
            key: None,
            skeleton: None,
            new_at_n: false,
        };
        if survives || config.keep_rejected {
            let bracket: Bracket = evaluate_bracket(&bits, &table)?;
            let poly = match kind {
                Kind::Knot => {
                    let w = writhe(&d)?;
                    rec.writhe = Some(w);
                    normalize(&bracket, w)
                }
                Kind::Link => bracket,
            };
            rec.key = Some(hex::encode(key_for(kind, &poly, config.keys)));
            rec.skeleton = Some(skeleton(&poly));
            rec.bracket = Some(poly);
        }
        out.push(rec);
    }
    Ok(out)
}

/// Classifies the prime projections at level `n` against `library`, which
/// must hold every level below `n`. Returns the records, the stats and the
/// keys of all survivors at this level.
pub fn compute_diagrams(
    n: usize,
    projections: &[ProjectionRecord],
    config: &DiagramConfig,
    library: &KeyLibrary,
) -> Result<(Vec<DiagramRecord>, DiagramStats, KeySet)> {
    library.require_below(n)?;
    if let Some(r) = projections.iter().find(|r| r.n != n) {
        return Err(Error::Domain(format!("projection {} has {} crossings, expected {n}", r.id, r.n)));
    }
    let prime: Vec<&ProjectionRecord> = projections.iter().filter(|r| r.prime).collect();
    let per_projection: Vec<Vec<DiagramRecord>> =
        prime.par_iter().map(|r| classify_projection(r, config)).collect::<Result<_>>()?;

    let seed = if config.crossingless_seed { crossingless_keys(config.keys) } else { KeySet::new() };
    let mut stats = DiagramStats { n, projections: prime.len(), ..Default::default() };
    let mut level = KeySet::new();
    let mut new_keys = BTreeSet::new();
    let mut records = Vec::new();
    for mut rec in per_projection.into_iter().flatten() {
        stats.assignments += 1;
        if !rec.filters.bigon {
            stats.bigon_rejected += 1;
        }
        if rec.filters.participation == Some(false) {
            stats.participation_rejected += 1;
        }
        if rec.survives {
            stats.survivors += 1;
            let key = hex::decode(rec.key.as_deref().expect("survivors carry keys")).expect("hex we wrote");
            rec.new_at_n = !library.known_below(n, rec.kind, &key) && !seed.contains(&(rec.kind, key.clone()));
            if rec.new_at_n {
                new_keys.insert((rec.kind, key.clone()));
            }
            level.insert((rec.kind, key));
        }
        if rec.survives || config.keep_rejected {
            records.push(rec);
        }
    }
    stats.knot_keys = level.iter().filter(|k| k.0 == Kind::Knot).count();
    stats.link_keys = level.len() - stats.knot_keys;
    stats.new_knots = new_keys.iter().filter(|k| k.0 == Kind::Knot).count();
    stats.new_links = new_keys.len() - stats.new_knots;
    Ok((records, stats, level))
}

/// Runs the diagram stage on `proj_n<n>.jsonl` in `out`, writes the dataset
/// and stats, and records this level in `library` (saved to `library_dir`).
pub fn stage_diagrams(
    n: usize,
    config: &DiagramConfig,
    out: &Path,
    library: &mut KeyLibrary,
    library_dir: &Path,
) -> Result<DiagramStats> {
    library.require_below(n)?;
    let path = projection_file(out, n);
    if !path.exists() {
        return Err(Error::Ordering(format!("{} is missing; run the projection stage first", path.display())));
    }
    let (_, projections) = read_jsonl::<ProjectionRecord>(&path)?;
    let (records, stats, level) = compute_diagrams(n, &projections, config, library)?;
    write_jsonl(&diagram_file(out, n), &Header::new("diagrams", n), &records)?;
    write_json(&diagram_stats_file(out, n), &stats)?;
    library.insert_level(n, level);
    library.save_level(library_dir, n)?;
    Ok(stats)
}

/// Diagram counts for levels `1..=n` from scratch, without touching the disk.
pub fn diagram_counts_through(n: usize, enum_config: EnumConfig, config: &DiagramConfig) -> Result<Vec<DiagramStats>> {
    let mut library = KeyLibrary::new();
    let mut out = Vec::new();
    for k in 1..=n {
        let (projections, _) = compute_projections(k, enum_config)?;
        let (_, stats, level) = compute_diagrams(k, &projections, config, &library)?;
        library.insert_level(k, level);
        out.push(stats);
    }
    Ok(out)
}

pub fn write_jsonl<T: Serialize>(path: &Path, header: &Header, records: &[T]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    serde_json::to_writer(&mut w, header).map_err(|e| Error::io(path, e.into()))?;
    w.write_all(b"\n").map_err(io)?;
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(|e| Error::io(path, e.into()))?;
        w.write_all(b"\n").map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<(Header, Vec<T>)> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();
    let bad = |line: usize, message: String| Error::Format { path: path.to_path_buf(), line, message };
    let header_line = match lines.next() {
        Some((_, l)) => l.map_err(|e| Error::io(path, e))?,
        None => return Err(bad(1, "empty dataset".into())),
    };
    let header: Header = serde_json::from_str(&header_line).map_err(|e| bad(1, e.to_string()))?;
    if header.version != FORMAT_VERSION || header.traversal != TRAVERSAL_ORDER || header.key_order != KEY_ORDER {
        return Err(bad(1, "dataset written under different canonicalization conventions".into()));
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| bad(i + 1, e.to_string()))?);
    }
    Ok((header, out))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data");
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Format { path: path.to_path_buf(), line: e.line(), message: e.to_string() })
}
