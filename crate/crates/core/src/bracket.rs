//! Genus-one bracket state sum.
//!
//! A state assigns one of two smoothings to every crossing. With
//! `t = b ⊕ s` the smoothing geometry depends only on `t`, so circle counts
//! are tabulated once per projection and reused for all `2^N` assignments.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{writhe, CrossingBits, Diagram};
use crate::error::{Error, Result};
use crate::laurent::{BracketPoly, Coeff, LaurentPoly};
use crate::map::{component_count, LabelledMap};
use crate::perm::Perm;

/// Largest projection accepted by [`precompute_geometry`] by default.
pub const DEFAULT_GEOMETRY_CAP: usize = 24;

// Edge-parity vectors are u64 bitsets over 2N edges.
const MAX_EDGES: usize = 64;

/// Per-vertex pairing: `t(v) = 0` gives `(h0 h1)(h2 h3)`, `t(v) = 1` gives `(h1 h2)(h3 h0)`.
pub fn smoothing_involution(p: &LabelledMap, t: &CrossingBits) -> Result<Perm> {
    if t.len() != p.n() {
        return Err(Error::SizeMismatch { left: t.len(), right: p.n() });
    }
    let mut images = vec![0; p.dart_count()];
    for v in 0..p.n() {
        let [h0, h1, h2, h3] = p.corners(v);
        let pairs = if t.get(v) { [(h1, h2), (h3, h0)] } else { [(h0, h1), (h2, h3)] };
        for (x, y) in pairs {
            images[x] = y;
            images[y] = x;
        }
    }
    Ok(Perm::from_images_unchecked(images))
}

/// Edge index of every dart; edges are numbered by their smaller dart.
pub fn edge_index(p: &LabelledMap) -> Vec<usize> {
    let alpha = p.alpha();
    let mut edge = vec![usize::MAX; p.dart_count()];
    let mut next = 0;
    for h in 0..p.dart_count() {
        if edge[h] == usize::MAX {
            edge[h] = next;
            edge[alpha.apply(h)] = next;
            next += 1;
        }
    }
    edge
}

/// Row-reduced span of the face boundary vectors in `C₁(G; F₂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2FaceBasis {
    edges: Vec<usize>,
    /// Fully reduced: no row contains another row's leading bit.
    rows: Vec<u64>,
}

impl F2FaceBasis {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn reduce(&self, mut v: u64) -> u64 {
        for &r in &self.rows {
            let lead = 63 - r.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }
}

/// Mod-2 edge-traversal vector of each face (φ-cycle), in cycle order.
pub fn face_vectors(p: &LabelledMap) -> Vec<u64> {
    let edge = edge_index(p);
    p.phi()
        .cycles()
        .iter()
        .map(|c| c.iter().fold(0u64, |acc, &h| acc ^ (1u64 << edge[h])))
        .collect()
}

pub fn face_basis(p: &LabelledMap) -> Result<F2FaceBasis> {
    if 2 * p.n() > MAX_EDGES {
        return Err(Error::Resource(format!("{} edges exceed the {MAX_EDGES}-bit limit", 2 * p.n())));
    }
    let mut rows: Vec<u64> = Vec::new();
    for f in face_vectors(p) {
        let mut v = f;
        for &r in &rows {
            let lead = 63 - r.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= r;
            }
        }
        if v != 0 {
            let lead = 63 - v.leading_zeros();
            for r in rows.iter_mut() {
                if *r >> lead & 1 == 1 {
                    *r ^= v;
                }
            }
            rows.push(v);
        }
    }
    Ok(F2FaceBasis { edges: edge_index(p), rows })
}

/// `(contractible, essential)` state-circle counts for smoothing `t`.
pub fn circle_geometry(p: &LabelledMap, t: &CrossingBits, basis: &F2FaceBasis) -> Result<(u32, u32)> {
    let tau = smoothing_involution(p, t)?;
    Ok(geometry_with(p, tau.images(), basis))
}

fn geometry_with(p: &LabelledMap, tau: &[usize], basis: &F2FaceBasis) -> (u32, u32) {
    let alpha = p.alpha().images();
    let len = alpha.len();
    let mut seen = vec![false; len];
    let (mut gamma, mut delta) = (0, 0);
    for start in 0..len {
        if seen[start] {
            continue;
        }
        // Walk α then τ until the circle closes.
        let mut v = 0u64;
        let mut h = start;
        loop {
            let a = alpha[h];
            seen[h] = true;
            seen[a] = true;
            let bit = 1u64 << basis.edges[h];
            assert_eq!(v & bit, 0, "state circle traverses an edge twice");
            v |= bit;
            h = tau[a];
            if h == start {
                break;
            }
        }
        if basis.contains(v) {
            gamma += 1;
        } else {
            delta += 1;
        }
    }
    (gamma, delta)
}

/// `(γ(t), δ(t))` for every `t`, indexed by the mask of `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryTable {
    n: usize,
    entries: Vec<(u8, u8)>,
}

impl GeometryTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, t: &CrossingBits) -> (u32, u32) {
        let (g, d) = self.entries[t.mask() as usize];
        (g as u32, d as u32)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, u32, u32)> + '_ {
        self.entries.iter().enumerate().map(|(t, &(g, d))| (t as u64, g as u32, d as u32))
    }
}

pub fn precompute_geometry(p: &LabelledMap) -> Result<GeometryTable> {
    precompute_geometry_capped(p, DEFAULT_GEOMETRY_CAP)
}

pub fn precompute_geometry_capped(p: &LabelledMap, cap: usize) -> Result<GeometryTable> {
    let n = p.n();
    if n > cap {
        return Err(Error::Resource(format!("{n} crossings exceed the geometry cap {cap}")));
    }
    let basis = face_basis(p)?;
    let entries = (0..1u64 << n)
        .into_par_iter()
        .map(|mask| {
            let tau = smoothing_involution(p, &CrossingBits::new(mask, n)).expect("length matches");
            let (g, d) = geometry_with(p, tau.images(), &basis);
            (g as u8, d as u8)
        })
        .collect();
    Ok(GeometryTable { n, entries })
}

/// `⟨D⟩ = Σ_t a^{N−2|b⊕t|} (−a²−a⁻²)^{γ(t)} x^{δ(t)}`.
pub fn evaluate_bracket<C: Coeff>(b: &CrossingBits, table: &GeometryTable) -> Result<BracketPoly<C>> {
    let n = table.n;
    if b.len() != n {
        return Err(Error::SizeMismatch { left: b.len(), right: n });
    }
    let mut hist: BTreeMap<(u32, u32, i32), i64> = BTreeMap::new();
    for (t, g, d) in table.entries() {
        let e = n as i32 - 2 * (b.mask() ^ t).count_ones() as i32;
        *hist.entry((d, g, e)).or_default() += 1;
    }
    let mut out = BracketPoly::zero();
    let mut powers: Vec<LaurentPoly<C>> = vec![LaurentPoly::monomial(C::one(), 0)];
    for ((d, g, e), count) in hist {
        while powers.len() <= g as usize {
            let next = &powers[powers.len() - 1] * &LaurentPoly::loop_value();
            powers.push(next);
        }
        out.add_poly(d, &powers[g as usize].shift(e).scale(&C::from(count)));
    }
    Ok(out)
}

/// `X_D = (−a)^{−3w} ⟨D⟩` for a knot diagram.
pub fn x_polynomial<C: Coeff>(d: &Diagram<'_>, table: &GeometryTable) -> Result<BracketPoly<C>> {
    let w = writhe(d)?;
    let bracket = evaluate_bracket::<C>(&d.bits, table)?;
    Ok(normalize(&bracket, w))
}

/// Multiplies by `(−a)^{−3w}`.
pub fn normalize<C: Coeff>(bracket: &BracketPoly<C>, w: i64) -> BracketPoly<C> {
    bracket.mul_monomial(w % 2 != 0, (-3 * w) as i32)
}

/// Per-x-degree coefficient tuples, minimal over reversal and negation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Skeleton<C>(pub Vec<(u32, Vec<C>)>);

pub fn skeleton<C: Coeff>(poly: &BracketPoly<C>) -> Skeleton<C> {
    let base: Vec<(u32, Vec<C>)> = poly.coefficients().map(|(m, p)| (m, p.coefficient_tuple())).collect();
    let transform = |rev: bool, neg: bool| -> Vec<(u32, Vec<C>)> {
        base.iter()
            .map(|(m, t)| {
                let mut t: Vec<C> = if neg { t.iter().map(|c| -c.clone()).collect() } else { t.clone() };
                if rev {
                    t.reverse();
                }
                (*m, t)
            })
            .collect()
    };
    let best = [(false, false), (true, false), (false, true), (true, true)]
        .into_iter()
        .map(|(r, n)| transform(r, n))
        .min()
        .expect("four candidates");
    Skeleton(best)
}

/// Knot or link, by straight-ahead component count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Knot,
    Link,
}

impl Kind {
    pub fn of(p: &LabelledMap) -> Kind {
        if component_count(p) == 1 {
            Kind::Knot
        } else {
            Kind::Link
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Knot => "knot",
            Kind::Link => "link",
        }
    }
}

/// Multiplies by `±a^k` so that the smallest a-exponent is zero and the
/// coefficient of lowest x-degree and lowest a-exponent is positive.
pub fn shift_normalize<C: Coeff>(poly: &BracketPoly<C>) -> BracketPoly<C> {
    let Some(min) = poly.coefficients().filter_map(|(_, p)| p.terms().next().map(|t| t.0)).min() else {
        return poly.clone();
    };
    let lead_negative = poly
        .coefficients()
        .next()
        .and_then(|(_, p)| p.terms().next().map(|(_, c)| *c < C::zero()))
        .unwrap_or(false);
    poly.mul_monomial(lead_negative, -min)
}

/// How brackets are turned into classification keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyConvention {
    /// Identify link brackets differing by a factor `±a^k`.
    pub shift_links: bool,
}

impl Default for KeyConvention {
    fn default() -> Self {
        KeyConvention { shift_links: true }
    }
}

/// Mirror-symmetrized serialization `min(ser(P), ser(P(a⁻¹)))`, optionally
/// after [`shift_normalize`].
pub fn key_of<C: Coeff>(poly: &BracketPoly<C>, shift: bool) -> Vec<u8> {
    let prep = |p: BracketPoly<C>| if shift { shift_normalize(&p) } else { p };
    let a = prep(poly.clone()).monomial_string();
    let b = prep(poly.invert_a()).monomial_string();
    a.min(b).into_bytes()
}

/// Key of the polynomial that classifies a diagram of the given kind:
/// `X_D` for knots, `⟨D⟩` for links.
pub fn key_for<C: Coeff>(kind: Kind, poly: &BracketPoly<C>, convention: KeyConvention) -> Vec<u8> {
    key_of(poly, kind == Kind::Link && convention.shift_links)
}

pub fn canonical_key(d: &Diagram<'_>, table: &GeometryTable, convention: KeyConvention) -> Result<Vec<u8>> {
    let kind = Kind::of(d.projection);
    let poly: BracketPoly<i64> = match kind {
        Kind::Knot => x_polynomial(d, table)?,
        Kind::Link => evaluate_bracket(&d.bits, table)?,
    };
    Ok(key_for(kind, &poly, convention))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{enumerate_projection_classes, EnumConfig};
    use crate::Bracket;

    fn knot2() -> LabelledMap {
        LabelledMap::from_alpha_cycles(2, &[&[1, 5], &[2, 7], &[3, 6], &[4, 8]]).unwrap()
    }

    fn link2() -> LabelledMap {
        LabelledMap::from_alpha_cycles(2, &[&[1, 5], &[2, 6], &[3, 7], &[4, 8]]).unwrap()
    }

    #[test]
    fn pairing_zero_on_two_vertices() {
        let tau = smoothing_involution(&knot2(), &CrossingBits::zeros(2)).unwrap();
        assert_eq!(tau.cycle_notation(), "(1 2)(3 4)(5 6)(7 8)");
        let tau = smoothing_involution(&knot2(), &CrossingBits::new(0b11, 2)).unwrap();
        assert_eq!(tau.cycle_notation(), "(1 4)(2 3)(5 8)(6 7)");
    }

    #[test]
    fn face_basis_has_rank_n_minus_one() {
        for n in 2..=5 {
            for c in enumerate_projection_classes(n, EnumConfig::default()).unwrap() {
                let m = c.to_map();
                let basis = face_basis(&m).unwrap();
                assert_eq!(basis.rank(), n - 1);
                let total = face_vectors(&m).iter().fold(0, |a, v| a ^ v);
                assert_eq!(total, 0);
                assert!(basis.contains(0));
            }
        }
    }

    #[test]
    fn conservation_on_small_projections() {
        for n in 2..=4 {
            for c in enumerate_projection_classes(n, EnumConfig::default()).unwrap() {
                let m = c.to_map();
                let table = precompute_geometry(&m).unwrap();
                assert_eq!(table.len(), 1 << n);
                for (t, g, d) in table.entries() {
                    let tau = smoothing_involution(&m, &CrossingBits::new(t, n)).unwrap();
                    let pi = crate::perm::compose(m.alpha(), &tau).unwrap();
                    assert_eq!(2 * (g + d) as usize, pi.cycle_count());
                }
            }
        }
    }

    #[test]
    fn geometry_cap() {
        assert!(matches!(precompute_geometry_capped(&knot2(), 1), Err(Error::Resource(_))));
    }

    #[test]
    fn evaluation_at_a_equal_one() {
        // With a = 1 the loop weight is −2, so the x-free part sums (−2)^γ over
        // states without essential circles.
        let m = knot2();
        let table = precompute_geometry(&m).unwrap();
        let p: Bracket = evaluate_bracket(&CrossingBits::zeros(2), &table).unwrap();
        let at_one: i64 = p.coefficient(0).terms().map(|(_, c)| *c).sum();
        let expect: i64 = table.entries().filter(|e| e.2 == 0).map(|e| (-2i64).pow(e.1)).sum();
        assert_eq!(at_one, expect);
    }

    #[test]
    fn skeleton_examples() {
        let mut p = Bracket::zero();
        p.add_term(0, -4, 1);
        p.add_term(0, -2, -1);
        p.add_term(0, 0, 1);
        assert_eq!(skeleton(&p), Skeleton(vec![(0, vec![-1, 1, -1])]));
        let shifted = p.mul_monomial(false, 6);
        assert_eq!(skeleton(&shifted), skeleton(&p));
    }

    #[test]
    fn shift_normalization() {
        let mut p = Bracket::zero();
        p.add_term(0, -3, -2);
        p.add_term(2, 5, 1);
        let q = shift_normalize(&p);
        assert_eq!(q.monomial_string(), "0,0,2;2,8,-1;");
        assert_eq!(shift_normalize(&p.mul_monomial(true, 7)), q);
        assert!(shift_normalize(&Bracket::zero()).is_zero());
        assert_eq!(key_of(&p, true), key_of(&p.mul_monomial(true, 2), true));
        assert_ne!(key_of(&p, false), key_of(&p.mul_monomial(true, 2), false));
    }

    #[test]
    fn writhe_normalization_sign() {
        let mut p = Bracket::zero();
        p.add_term(1, 2, 3);
        let q = normalize(&p, 1);
        assert_eq!(q.coefficient(1).coeff(-1), -3);
        assert_eq!(normalize(&p, 0), p);
        assert_eq!(normalize(&p, -2).coefficient(1).coeff(8), 3);
    }

    #[test]
    fn link_key_is_switch_invariant() {
        let conv = KeyConvention::default();
        let link = link2();
        let table = precompute_geometry(&link).unwrap();
        let d = Diagram::new(&link, CrossingBits::new(0b10, 2)).unwrap();
        assert_eq!(canonical_key(&d, &table, conv).unwrap(), canonical_key(&d.switched(), &table, conv).unwrap());
        let knot = knot2();
        let table = precompute_geometry(&knot).unwrap();
        let d = Diagram::new(&knot, CrossingBits::zeros(2)).unwrap();
        assert!(x_polynomial::<i64>(&Diagram::new(&link, CrossingBits::zeros(2)).unwrap(), &table).is_err());
        assert_eq!(canonical_key(&d, &table, conv).unwrap(), canonical_key(&d.switched(), &table, conv).unwrap());
    }
}
