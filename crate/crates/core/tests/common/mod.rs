//! Slow reference implementations used to cross-check the library.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use torustab::canonical::{unsensed_canonical, CanonicalEncoding};
use torustab::diagram::CrossingBits;
use torustab::enumerate::{is_candidate, EnumConfig};
use torustab::map::LabelledMap;
use torustab::perm::Perm;
use torustab::Bracket;

/// σ-cycle of every vertex, walked from its smallest dart.
pub fn vertex_cycles(p: &LabelledMap) -> Vec<[usize; 4]> {
    let sigma = p.sigma();
    let mut seen = vec![false; p.dart_count()];
    let mut out = Vec::new();
    for h in 0..p.dart_count() {
        if seen[h] {
            continue;
        }
        let mut c = [h; 4];
        for i in 1..4 {
            c[i] = sigma.apply(c[i - 1]);
        }
        for &x in &c {
            seen[x] = true;
        }
        out.push(c);
    }
    out
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Faces of the map, as the face index of each dart.
fn face_of(p: &LabelledMap) -> (Vec<usize>, usize) {
    let (alpha, sigma) = (p.alpha(), p.sigma());
    let mut face = vec![usize::MAX; p.dart_count()];
    let mut count = 0;
    for h in 0..p.dart_count() {
        if face[h] != usize::MAX {
            continue;
        }
        let mut x = h;
        while face[x] == usize::MAX {
            face[x] = count;
            x = alpha.apply(sigma.apply(x));
        }
        count += 1;
    }
    (face, count)
}

/// Whether the edge set (indexed by the smaller dart of each α-pair) bounds
/// a union of faces: two-colour the faces so that exactly the chosen edges
/// separate faces of different colours.
pub fn bounds_faces(p: &LabelledMap, chosen: &BTreeSet<usize>) -> bool {
    let (face, count) = face_of(p);
    let alpha = p.alpha();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); count];
    for h in 0..p.dart_count() {
        let a = alpha.apply(h);
        if h < a {
            let flip = chosen.contains(&h);
            adj[face[h]].push((face[a], flip));
            adj[face[a]].push((face[h], flip));
        }
    }
    let mut colour = vec![None; count];
    for start in 0..count {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let c = colour[f].unwrap();
            for &(g, flip) in &adj[f] {
                match colour[g] {
                    None => {
                        colour[g] = Some(c ^ flip);
                        queue.push_back(g);
                    }
                    Some(d) if d != c ^ flip => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// State circles of `(p, b, s)` with the per-vertex smoothings written in
/// terms of `b` and `s` separately. Returns (contractible, essential).
pub fn slow_circles(p: &LabelledMap, b: &CrossingBits, s: u64) -> (u32, u32) {
    let len = p.dart_count();
    let mut tau = vec![usize::MAX; len];
    for (v, h) in vertex_cycles(p).into_iter().enumerate() {
        let o = b.get(v) as usize;
        let pairs = if s >> v & 1 == 0 {
            [(h[o], h[(o + 1) % 4]), (h[(o + 2) % 4], h[(o + 3) % 4])]
        } else {
            [(h[(o + 1) % 4], h[(o + 2) % 4]), (h[(o + 3) % 4], h[o])]
        };
        for (x, y) in pairs {
            tau[x] = y;
            tau[y] = x;
        }
    }
    let mut parent: Vec<usize> = (0..len).collect();
    for h in 0..len {
        for other in [p.alpha().apply(h), tau[h]] {
            let (a, c) = (find(&mut parent, h), find(&mut parent, other));
            parent[a] = c;
        }
    }
    let mut edges: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for h in 0..len {
        let root = find(&mut parent, h);
        let e = h.min(p.alpha().apply(h));
        edges.entry(root).or_default().insert(e);
    }
    let mut out = (0, 0);
    for set in edges.values() {
        if bounds_faces(p, set) {
            out.0 += 1;
        } else {
            out.1 += 1;
        }
    }
    out
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// State sum evaluated state by state with no precomputed geometry.
pub fn slow_bracket(p: &LabelledMap, b: &CrossingBits) -> Bracket {
    let n = p.n();
    let mut terms: BTreeMap<(u32, i32), i64> = BTreeMap::new();
    for s in 0..1u64 << n {
        let (gamma, delta) = slow_circles(p, b, s);
        let ones = s.count_ones() as i32;
        let base = (n as i32 - ones) - ones;
        // (−a² − a⁻²)^γ = (−1)^γ Σ_k C(γ, k) a^{4k − 2γ}
        let sign = if gamma % 2 == 0 { 1 } else { -1 };
        for k in 0..=gamma {
            let e = base + 4 * k as i32 - 2 * gamma as i32;
            *terms.entry((delta, e)).or_default() += sign * binomial(gamma, k);
        }
    }
    let mut out = Bracket::zero();
    for ((m, e), c) in terms {
        out.add_term(m, e, c);
    }
    out
}

/// Every perfect matching of `0..len`, pairing the smallest free point first.
pub fn all_matchings(len: usize, mut visit: impl FnMut(&[usize])) {
    fn go(alpha: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        let Some(i) = alpha.iter().position(|&x| x == usize::MAX) else {
            visit(alpha);
            return;
        };
        for j in i + 1..alpha.len() {
            if alpha[j] == usize::MAX {
                alpha[i] = j;
                alpha[j] = i;
                go(alpha, visit);
                alpha[i] = usize::MAX;
                alpha[j] = usize::MAX;
            }
        }
    }
    let mut alpha = vec![usize::MAX; len];
    go(&mut alpha, &mut visit);
}

/// Unsensed classes of candidate maps found by filtering every matching.
pub fn brute_force_classes(n: usize, config: EnumConfig) -> BTreeSet<CanonicalEncoding> {
    let mut out = BTreeSet::new();
    all_matchings(4 * n, |alpha| {
        let m = LabelledMap::with_standard_sigma(Perm::from_images(alpha.to_vec()).unwrap()).unwrap();
        if is_candidate(&m, &config) {
            out.insert(unsensed_canonical(&m).unwrap());
        }
    });
    out
}

pub fn random_relabel(len: usize, rng: &mut StdRng) -> Perm {
    let mut images: Vec<usize> = (0..len).collect();
    images.shuffle(rng);
    Perm::from_images(images).unwrap()
}

/// Bits of the same diagram after relabelling its projection: the over
/// strand is carried along and re-expressed against the new corners.
pub fn transport_bits(p: &LabelledMap, b: &CrossingBits, relabel: &Perm, q: &LabelledMap) -> CrossingBits {
    let old = vertex_cycles(p);
    let mut over = vec![false; p.dart_count()];
    for (v, c) in old.iter().enumerate() {
        let o = b.get(v) as usize;
        over[c[o]] = true;
        over[c[o + 2]] = true;
    }
    let bits: Vec<bool> = vertex_cycles(q).iter().map(|c| !over[relabel.apply(c[0])]).collect();
    CrossingBits::from_bools(&bits)
}
