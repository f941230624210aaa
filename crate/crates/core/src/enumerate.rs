//! Enumeration of candidate torus projections `(α, σ₀)`.
//!
//! Matchings are grown by always pairing the smallest unused dart `i`, either
//! with an unused dart on an already activated vertex or with the first dart
//! of the next vertex, which activates it. Partial face walks are tracked so
//! that pairs closing a monogon, or leaving too few (or too many) faces for
//! the torus, are rejected before the subtree is explored.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::canonical::{CanonicalEncoding, Canonicalizer};
use crate::error::Result;
use crate::map::{euler_genus, has_loop, has_monogon, is_connected, LabelledMap};
use crate::perm::{standard_sigma, Perm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    pub allow_loops: bool,
    pub forbid_monogons: bool,
}

impl EnumConfig {
    /// Only genus one is enumerated.
    pub const GENUS: usize = 1;
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { allow_loops: false, forbid_monogons: true }
    }
}

/// Whether `m` (with the standard rotation) is a candidate torus projection.
pub fn is_candidate(m: &LabelledMap, config: &EnumConfig) -> bool {
    m.is_standard()
        && is_connected(m)
        && euler_genus(m).map_or(false, |g| g == EnumConfig::GENUS)
        && !(config.forbid_monogons && has_monogon(m))
        && !(!config.allow_loops && has_loop(m))
}

const UNSET: usize = usize::MAX;

#[derive(Clone, Copy)]
struct Undo {
    i: usize,
    j: usize,
    activated: bool,
    closed: u8,
    // (head, old tail, tail, old head) per link, for path merges
    merges: [Option<(usize, usize, usize, usize)>; 2],
}

struct Frame {
    i: usize,
    cursor: usize,
    applied: Option<Undo>,
}

/// Depth-first search over matchings in deterministic order.
pub struct Matchings {
    n: usize,
    config: EnumConfig,
    alpha: Vec<usize>,
    activated: usize,
    unmatched: usize,
    closed: usize,
    /// Open face paths: head (first dart) of the path ending at a tail, and back.
    head_of: Vec<usize>,
    tail_of: Vec<usize>,
    stack: Vec<Frame>,
    descend: bool,
    depth_limit: Option<usize>,
    prefix: Vec<(usize, usize)>,
    dead: bool,
}

impl Matchings {
    pub fn new(n: usize, config: EnumConfig) -> Self {
        assert!(n >= 1, "at least one vertex");
        let len = 4 * n;
        Matchings {
            n,
            config,
            alpha: vec![UNSET; len],
            activated: 1,
            unmatched: len,
            closed: 0,
            head_of: (0..len).collect(),
            tail_of: (0..len).collect(),
            stack: Vec::new(),
            descend: true,
            depth_limit: None,
            prefix: Vec::new(),
            dead: false,
        }
    }

    /// A search restricted to the subtree below a fixed sequence of pairs.
    fn from_prefix(n: usize, config: EnumConfig, pairs: &[(usize, usize)]) -> Self {
        let mut s = Matchings::new(n, config);
        for &(i, j) in pairs {
            if s.apply(i, j).is_none() {
                s.dead = true;
                break;
            }
        }
        s.prefix = pairs.to_vec();
        s
    }

    #[inline]
    fn sigma_inv(h: usize) -> usize {
        (h & !3) | ((h + 3) & 3)
    }

    fn link(&mut self, x: usize, y: usize) -> Option<(usize, usize, usize, usize)> {
        let h = self.head_of[x];
        if h == y {
            self.closed += 1;
            None
        } else {
            let t = self.tail_of[y];
            let rec = (h, self.tail_of[h], t, self.head_of[t]);
            self.tail_of[h] = t;
            self.head_of[t] = h;
            Some(rec)
        }
    }

    fn unlink(&mut self, rec: Option<(usize, usize, usize, usize)>) {
        match rec {
            None => self.closed -= 1,
            Some((h, old_tail, t, old_head)) => {
                self.tail_of[h] = old_tail;
                self.head_of[t] = old_head;
            }
        }
    }

    /// Pairs `i` with `j` if that keeps the partial map viable.
    fn apply(&mut self, i: usize, j: usize) -> Option<Undo> {
        if !self.config.allow_loops && i / 4 == j / 4 {
            return None;
        }
        let (x1, x2) = (Self::sigma_inv(i), Self::sigma_inv(j));
        if self.config.forbid_monogons && (x1 == j || x2 == i) {
            return None;
        }
        let activated = j / 4 == self.activated;
        debug_assert!(j / 4 <= self.activated);
        if activated {
            self.activated += 1;
        }
        self.alpha[i] = j;
        self.alpha[j] = i;
        self.unmatched -= 2;
        let before = self.closed;
        let m1 = self.link(x1, j);
        let m2 = self.link(x2, i);
        let undo = Undo { i, j, activated, closed: (self.closed - before) as u8, merges: [m1, m2] };
        // Faces never disappear, and each open path can still close at most once.
        if self.closed > self.n || self.closed + self.unmatched < self.n {
            self.revert(undo);
            return None;
        }
        Some(undo)
    }

    fn revert(&mut self, u: Undo) {
        self.unlink(u.merges[1]);
        self.unlink(u.merges[0]);
        debug_assert!(u.closed <= 2);
        self.alpha[u.i] = UNSET;
        self.alpha[u.j] = UNSET;
        self.unmatched += 2;
        if u.activated {
            self.activated -= 1;
        }
    }

    fn smallest_unused(&self, from: usize) -> Option<usize> {
        (from..4 * self.n).find(|&h| self.alpha[h] == UNSET)
    }

    fn current_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = self.prefix.clone();
        pairs.extend(self.stack.iter().filter_map(|f| f.applied.map(|u| (u.i, u.j))));
        pairs
    }

    /// Advances to the next emitted node: a complete torus matching, or (with a
    /// depth limit) a viable prefix.
    fn step(&mut self) -> Option<()> {
        if self.dead {
            return None;
        }
        loop {
            if self.descend {
                self.descend = false;
                let from = self.stack.last().map_or(0, |f| f.i + 1);
                match self.smallest_unused(from) {
                    None => {
                        if self.closed == self.n {
                            return Some(());
                        }
                    }
                    // All activated darts used while vertices remain: disconnected.
                    Some(i) if i / 4 >= self.activated => {}
                    Some(i) => {
                        if self.depth_limit == Some(self.stack.len()) {
                            return Some(());
                        }
                        self.stack.push(Frame { i, cursor: i + 1, applied: None });
                    }
                }
            }
            // Advance the top frame to its next admissible partner.
            let frame = self.stack.last_mut()?;
            let i = frame.i;
            let cursor = frame.cursor;
            if let Some(u) = frame.applied.take() {
                self.revert(u);
            }
            let limit = (4 * self.activated).min(4 * self.n - 1);
            let mut found = None;
            let mut j = cursor;
            while j <= limit {
                if self.alpha[j] == UNSET {
                    if let Some(u) = self.apply(i, j) {
                        found = Some(u);
                        break;
                    }
                }
                j += 1;
            }
            let frame = self.stack.last_mut().expect("frame present");
            match found {
                Some(u) => {
                    frame.applied = Some(u);
                    frame.cursor = j + 1;
                    self.descend = true;
                }
                None => {
                    self.stack.pop();
                }
            }
        }
    }

    fn alpha_perm(&self) -> Perm {
        Perm::from_images_unchecked(self.alpha.clone())
    }
}

impl Iterator for Matchings {
    type Item = LabelledMap;

    fn next(&mut self) -> Option<LabelledMap> {
        self.step()?;
        Some(LabelledMap::with_standard_sigma(self.alpha_perm()).expect("complete matching"))
    }
}

/// All accepted labelled matchings `(α, σ₀)` in deterministic depth-first order.
pub fn enumerate_matchings(n: usize, config: EnumConfig) -> Matchings {
    Matchings::new(n, config)
}

/// Search-tree prefixes at a fixed depth, used to split work.
fn prefixes(n: usize, config: EnumConfig, depth: usize) -> Vec<Vec<(usize, usize)>> {
    let mut s = Matchings::new(n, config);
    s.depth_limit = Some(depth);
    let mut out = Vec::new();
    while s.step().is_some() {
        out.push(s.current_pairs());
    }
    out
}

fn classes_below(n: usize, config: EnumConfig, prefix: &[(usize, usize)]) -> BTreeSet<CanonicalEncoding> {
    let mut search = Matchings::from_prefix(n, config, prefix);
    let mut canon = Canonicalizer::new(4 * n);
    let sigma = standard_sigma(n).expect("n >= 1");
    let mut out = BTreeSet::new();
    while search.step().is_some() {
        let (a, s) = canon.run(&search.alpha, sigma.images(), true);
        let enc = CanonicalEncoding {
            n,
            alpha: Perm::from_images_unchecked(a.to_vec()),
            sigma: Perm::from_images_unchecked(s.to_vec()),
        };
        out.insert(enc);
    }
    out
}

/// The sorted, duplicate-free set of unsensed candidate classes.
pub fn enumerate_projection_classes(n: usize, config: EnumConfig) -> Result<Vec<CanonicalEncoding>> {
    if n == 0 {
        return Err(crate::error::Error::Domain("crossing number must be at least 1".into()));
    }
    let depth = if n >= 5 { 4 } else { 1 };
    let parts: Vec<BTreeSet<CanonicalEncoding>> = prefixes(n, config, depth)
        .par_iter()
        .map(|p| classes_below(n, config, p))
        .collect();
    let mut all = BTreeSet::new();
    for part in parts {
        all.extend(part);
    }
    Ok(all.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::unsensed_canonical;
    use crate::map::component_count;

    #[test]
    fn two_vertex_candidates_are_sound() {
        let cfg = EnumConfig::default();
        let maps: Vec<_> = enumerate_matchings(2, cfg).collect();
        assert!(!maps.is_empty());
        for m in &maps {
            assert!(is_candidate(m, &cfg));
            assert_eq!(m.phi().cycle_count(), 2);
        }
    }

    #[test]
    fn candidate_checks() {
        let cfg = EnumConfig::default();
        let link = LabelledMap::from_alpha_cycles(2, &[&[1, 5], &[2, 6], &[3, 7], &[4, 8]]).unwrap();
        assert!(is_candidate(&link, &cfg));
        let planar = LabelledMap::from_alpha_cycles(2, &[&[1, 5], &[2, 8], &[3, 7], &[4, 6]]).unwrap();
        assert!(!is_candidate(&planar, &cfg));
        let one = LabelledMap::from_alpha_cycles(1, &[&[1, 3], &[2, 4]]).unwrap();
        assert!(!is_candidate(&one, &cfg));
        let loops_ok = EnumConfig { allow_loops: true, ..cfg };
        assert!(is_candidate(&one, &loops_ok));
    }

    #[test]
    fn one_vertex_needs_loops() {
        assert_eq!(enumerate_matchings(1, EnumConfig::default()).count(), 0);
        let cfg = EnumConfig { allow_loops: true, forbid_monogons: true };
        let classes = enumerate_projection_classes(1, cfg).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].alpha.cycle_notation(), "(1 3)(2 4)");
    }

    #[test]
    fn two_vertex_classes_are_the_knot_and_the_link() {
        let classes = enumerate_projection_classes(2, EnumConfig::default()).unwrap();
        assert_eq!(classes.len(), 2);
        let comps: Vec<_> = classes.iter().map(|c| component_count(&c.to_map())).collect();
        assert!(comps.contains(&1) && comps.contains(&2));
        let knot = LabelledMap::from_alpha_cycles(2, &[&[1, 5], &[2, 7], &[3, 6], &[4, 8]]).unwrap();
        assert!(classes.contains(&unsensed_canonical(&knot).unwrap()));
    }

    #[test]
    fn three_vertex_class_count() {
        assert_eq!(enumerate_projection_classes(3, EnumConfig::default()).unwrap().len(), 6);
    }

    #[test]
    fn prefix_split_matches_single_search() {
        let cfg = EnumConfig::default();
        let whole: BTreeSet<_> = classes_below(4, cfg, &[]);
        let mut split = BTreeSet::new();
        for p in prefixes(4, cfg, 3) {
            split.extend(classes_below(4, cfg, &p));
        }
        assert_eq!(whole, split);
        assert_eq!(whole.len(), 28);
    }

    #[test]
    fn deterministic_order() {
        let a: Vec<_> = enumerate_matchings(3, EnumConfig::default()).collect();
        let b: Vec<_> = enumerate_matchings(3, EnumConfig::default()).collect();
        assert_eq!(a, b);
    }
}
