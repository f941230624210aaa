//! Canonical representatives of labelled maps under relabelling (sensed) and
//! relabelling plus orientation reversal (unsensed).
//!
//! A rooted normalization relabels darts in first-visit order of a traversal
//! from a root dart: each dequeued dart `h` hands out the next labels to
//! `s(h)` and then `α(h)`, where `s` is `σ` or `σ⁻¹`. The canonical encoding
//! is the lexicographic minimum of `alpha ++ sigma` images over every root
//! (and, for the unsensed form, both directions). This neighbour order and key
//! are part of the dataset format version.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{is_connected, LabelledMap};
use crate::perm::{inverse, Perm};

/// Traversal order tag written into dataset headers.
pub const TRAVERSAL_ORDER: &str = "sigma-then-alpha";
/// Comparison key tag written into dataset headers.
pub const KEY_ORDER: &str = "alpha-images-then-sigma-images";

/// A canonical `(α, σ)` pair. Ordering is lexicographic on the alpha images
/// followed by the sigma images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct CanonicalEncoding {
    pub n: usize,
    pub alpha: Perm,
    pub sigma: Perm,
}

impl CanonicalEncoding {
    pub fn to_map(&self) -> LabelledMap {
        LabelledMap::new(self.alpha.clone(), self.sigma.clone())
            .expect("canonical encodings are valid maps")
    }

    /// Serialization shared with the dataset files.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

/// Total order used for minimization and deduplication.
pub fn compare_encodings(a: &CanonicalEncoding, b: &CanonicalEncoding) -> Result<Ordering> {
    if a.n != b.n {
        return Err(Error::SizeMismatch { left: 4 * a.n, right: 4 * b.n });
    }
    Ok(a.cmp(b))
}

/// Deterministic relabelling with `root` receiving the first label.
pub fn rooted_normalize(m: &LabelledMap, root: usize, reversed: bool) -> Result<LabelledMap> {
    if !is_connected(m) {
        return Err(Error::Domain("rooted normalization of a disconnected map".into()));
    }
    if root >= m.dart_count() {
        return Err(Error::Domain(format!("root dart {} out of range", root + 1)));
    }
    let s = if reversed { inverse(m.sigma()) } else { m.sigma().clone() };
    let mut w = Workspace::new(m.dart_count());
    w.label(m.alpha().images(), s.images(), root);
    let alpha = (0..m.dart_count()).map(|x| w.label[m.alpha().apply(w.order[x])]).collect();
    let sigma = (0..m.dart_count()).map(|x| w.label[s.apply(w.order[x])]).collect();
    LabelledMap::new(Perm::from_images_unchecked(alpha), Perm::from_images_unchecked(sigma))
}

/// Minimum over all roots with `σ` only.
pub fn sensed_canonical(m: &LabelledMap) -> Result<CanonicalEncoding> {
    canonical(m, false)
}

/// Minimum over all roots for both `σ` and `σ⁻¹`.
pub fn unsensed_canonical(m: &LabelledMap) -> Result<CanonicalEncoding> {
    canonical(m, true)
}

fn canonical(m: &LabelledMap, both: bool) -> Result<CanonicalEncoding> {
    if !is_connected(m) {
        return Err(Error::Domain("canonical form of a disconnected map".into()));
    }
    let mut c = Canonicalizer::new(m.dart_count());
    let (alpha, sigma) = c.run(m.alpha().images(), m.sigma().images(), both);
    Ok(CanonicalEncoding {
        n: m.n(),
        alpha: Perm::from_images_unchecked(alpha.to_vec()),
        sigma: Perm::from_images_unchecked(sigma.to_vec()),
    })
}

struct Workspace {
    /// old dart -> new label
    label: Vec<usize>,
    /// new label -> old dart
    order: Vec<usize>,
}

const UNSET: usize = usize::MAX;

impl Workspace {
    fn new(len: usize) -> Self {
        Workspace { label: vec![UNSET; len], order: Vec::with_capacity(len) }
    }

    fn label(&mut self, alpha: &[usize], s: &[usize], root: usize) {
        self.label.fill(UNSET);
        self.order.clear();
        self.label[root] = 0;
        self.order.push(root);
        let mut head = 0;
        while head < self.order.len() {
            let h = self.order[head];
            head += 1;
            for next in [s[h], alpha[h]] {
                if self.label[next] == UNSET {
                    self.label[next] = self.order.len();
                    self.order.push(next);
                }
            }
        }
    }
}

/// Reusable buffers for repeated canonicalization of maps of one size.
pub(crate) struct Canonicalizer {
    ws: Workspace,
    sigma_inv: Vec<usize>,
    best_alpha: Vec<usize>,
    best_sigma: Vec<usize>,
    cand_alpha: Vec<usize>,
    cand_sigma: Vec<usize>,
    has_best: bool,
}

impl Canonicalizer {
    pub(crate) fn new(len: usize) -> Self {
        Canonicalizer {
            ws: Workspace::new(len),
            sigma_inv: vec![0; len],
            best_alpha: vec![0; len],
            best_sigma: vec![0; len],
            cand_alpha: vec![0; len],
            cand_sigma: vec![0; len],
            has_best: false,
        }
    }

    /// Returns the minimal `(alpha, sigma)` image lists. The input must be connected.
    pub(crate) fn run(&mut self, alpha: &[usize], sigma: &[usize], both: bool) -> (&[usize], &[usize]) {
        let len = alpha.len();
        for (h, &x) in sigma.iter().enumerate() {
            self.sigma_inv[x] = h;
        }
        self.has_best = false;
        let sigma_inv = std::mem::take(&mut self.sigma_inv);
        for root in 0..len {
            self.try_root(alpha, sigma, root);
            if both {
                self.try_root(alpha, &sigma_inv, root);
            }
        }
        self.sigma_inv = sigma_inv;
        (&self.best_alpha, &self.best_sigma)
    }

    fn try_root(&mut self, alpha: &[usize], s: &[usize], root: usize) {
        let len = alpha.len();
        let ws = &mut self.ws;
        ws.label.fill(UNSET);
        ws.order.clear();
        ws.label[root] = 0;
        ws.order.push(root);
        // Equal while the alpha prefix matches the best so far, Less once it
        // beats it; the traversal is abandoned as soon as it loses.
        let mut state = if self.has_best { Ordering::Equal } else { Ordering::Less };
        let mut head = 0;
        while head < ws.order.len() {
            let h = ws.order[head];
            for next in [s[h], alpha[h]] {
                if ws.label[next] == UNSET {
                    ws.label[next] = ws.order.len();
                    ws.order.push(next);
                }
            }
            let a = ws.label[alpha[h]];
            if state == Ordering::Equal {
                match a.cmp(&self.best_alpha[head]) {
                    Ordering::Greater => return,
                    Ordering::Less => state = Ordering::Less,
                    Ordering::Equal => {}
                }
            }
            self.cand_alpha[head] = a;
            self.cand_sigma[head] = ws.label[s[h]];
            head += 1;
        }
        debug_assert_eq!(head, len, "normalization requires a connected map");
        if state == Ordering::Equal && self.cand_sigma[..] >= self.best_sigma[..] {
            return;
        }
        std::mem::swap(&mut self.best_alpha, &mut self.cand_alpha);
        std::mem::swap(&mut self.best_sigma, &mut self.cand_sigma);
        self.has_best = true;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{component_count, has_monogon};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn knot2() -> LabelledMap {
        LabelledMap::from_alpha_cycles(2, &[&[1, 5], &[2, 7], &[3, 6], &[4, 8]]).unwrap()
    }

    fn link2() -> LabelledMap {
        LabelledMap::from_alpha_cycles(2, &[&[1, 5], &[2, 6], &[3, 7], &[4, 8]]).unwrap()
    }

    /// Exhaustive minimum over every relabelling, for tiny maps only.
    fn brute_force_canonical(m: &LabelledMap, both: bool) -> CanonicalEncoding {
        let len = m.dart_count();
        let mut best: Option<CanonicalEncoding> = None;
        let mut perm: Vec<usize> = (0..len).collect();
        let sources = if both { vec![m.clone(), m.reversed()] } else { vec![m.clone()] };
        loop {
            let relabel = Perm::from_images(perm.clone()).unwrap();
            for src in &sources {
                let c = src.conjugated(&relabel).unwrap();
                let enc = CanonicalEncoding { n: m.n(), alpha: c.alpha().clone(), sigma: c.sigma().clone() };
                if best.as_ref().map_or(true, |b| enc < *b) {
                    best = Some(enc);
                }
            }
            // next permutation
            let Some(i) = (0..len - 1).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
            let j = (i + 1..len).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        best.unwrap()
    }

    #[test]
    fn pinned_rooted_normalization() {
        let out = rooted_normalize(&knot2(), 0, false).unwrap();
        // Traversal from dart 1: 1 -> {2, 5}, 2 -> {3, 7}, 5 -> {6}, 3 -> {4}, 7 -> {8}.
        assert_eq!(out.alpha().to_one_based(), vec![3, 5, 1, 6, 2, 4, 8, 7]);
        assert_eq!(out.sigma().to_one_based(), vec![2, 4, 6, 7, 8, 5, 1, 3]);
        assert_eq!(rooted_normalize(&out, 0, false).unwrap(), out);
    }

    #[test]
    fn normalization_is_equivariant() {
        let m = knot2();
        let relabel = Perm::from_one_based(&[4, 7, 1, 2, 8, 3, 6, 5]).unwrap();
        let moved = m.conjugated(&relabel).unwrap();
        // Dart `relabel(x)` of m is named x in `moved`.
        for x in 0..8 {
            let root_old = relabel.apply(x);
            assert_eq!(
                rooted_normalize(&moved, x, true).unwrap(),
                rooted_normalize(&m, root_old, true).unwrap()
            );
        }
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let split = LabelledMap::from_alpha_cycles(2, &[&[1, 2], &[3, 4], &[5, 6], &[7, 8]]).unwrap();
        assert!(rooted_normalize(&split, 0, false).is_err());
        assert!(unsensed_canonical(&split).is_err());
        assert!(sensed_canonical(&split).is_err());
    }

    #[test]
    fn fast_path_matches_reference_normalization() {
        let m = knot2();
        let mut best: Option<CanonicalEncoding> = None;
        for root in 0..8 {
            for rev in [false, true] {
                let c = rooted_normalize(&m, root, rev).unwrap();
                let enc = CanonicalEncoding { n: 2, alpha: c.alpha().clone(), sigma: c.sigma().clone() };
                if best.as_ref().map_or(true, |b| enc < *b) {
                    best = Some(enc);
                }
            }
        }
        assert_eq!(unsensed_canonical(&m).unwrap(), best.unwrap());
    }

    #[test]
    fn distinct_two_vertex_classes() {
        let a = unsensed_canonical(&knot2()).unwrap();
        let b = unsensed_canonical(&link2()).unwrap();
        assert_ne!(a, b);
        assert_eq!(component_count(&a.to_map()), 1);
        assert_eq!(component_count(&b.to_map()), 2);
    }

    #[test]
    fn unsensed_is_at_most_sensed() {
        for m in [knot2(), link2()] {
            let u = unsensed_canonical(&m).unwrap();
            let s = sensed_canonical(&m).unwrap();
            assert!(u <= s);
            assert_eq!(unsensed_canonical(&m.reversed()).unwrap(), u);
        }
    }

    #[test]
    fn idempotent() {
        let c = unsensed_canonical(&knot2()).unwrap();
        assert_eq!(unsensed_canonical(&c.to_map()).unwrap(), c);
    }

    #[test]
    fn compare_encodings_order() {
        let a = unsensed_canonical(&knot2()).unwrap();
        let b = unsensed_canonical(&link2()).unwrap();
        assert_eq!(compare_encodings(&a, &a).unwrap(), Ordering::Equal);
        assert_eq!(compare_encodings(&a, &b).unwrap(), compare_encodings(&b, &a).unwrap().reverse());
        let small = CanonicalEncoding {
            n: 1,
            alpha: Perm::from_one_based(&[2, 1, 4, 3]).unwrap(),
            sigma: Perm::identity(4),
        };
        let big = CanonicalEncoding {
            n: 1,
            alpha: Perm::from_one_based(&[3, 4, 1, 2]).unwrap(),
            sigma: Perm::identity(4),
        };
        assert_eq!(compare_encodings(&small, &big).unwrap(), Ordering::Less);
        assert!(compare_encodings(&small, &a).is_err());
    }

    #[test]
    fn agrees_with_exhaustive_minimum_on_small_maps() {
        // The exhaustive minimum ranges over all of S_8, so both forms must be
        // complete invariants picking one element per orbit; they need not be
        // the same element, but must separate and merge the same maps.
        let maps = [knot2(), link2(), knot2().reversed()];
        let brute: Vec<_> = maps.iter().map(|m| brute_force_canonical(m, true)).collect();
        let fast: Vec<_> = maps.iter().map(|m| unsensed_canonical(m).unwrap()).collect();
        for i in 0..maps.len() {
            for j in 0..maps.len() {
                assert_eq!(brute[i] == brute[j], fast[i] == fast[j]);
            }
        }
    }

    #[test]
    fn random_relabellings_keep_the_canonical_form() {
        let mut rng = rand_chacha_free(7);
        let m = knot2();
        let base = unsensed_canonical(&m).unwrap();
        let base_sensed = sensed_canonical(&m).unwrap();
        for _ in 0..200 {
            let mut images: Vec<usize> = (0..8).collect();
            images.shuffle(&mut rng);
            let relabel = Perm::from_images(images).unwrap();
            let moved = m.conjugated(&relabel).unwrap();
            assert_eq!(sensed_canonical(&moved).unwrap(), base_sensed);
            let moved = if rng.gen_bool(0.5) { moved.reversed() } else { moved };
            assert_eq!(unsensed_canonical(&moved).unwrap(), base);
            assert!(!has_monogon(&moved));
        }
    }

    fn rand_chacha_free(seed: u64) -> rand::rngs::StdRng {
        rand::rngs::StdRng::seed_from_u64(seed)
    }
}
