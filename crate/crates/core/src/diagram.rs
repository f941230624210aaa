//! Crossing assignments on a fixed projection and the local filters applied
//! to them.
//!
//! At vertex `v` with corners `(h0 h1 h2 h3)` bit `b(v) = 0` puts the strand
//! `{h0, h2}` over, and `b(v) = 1` puts `{h1, h3}` over.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{component_count, LabelledMap};

/// Largest vertex count representable in a [`CrossingBits`] mask.
pub const MAX_CROSSINGS: usize = 63;

/// One bit per vertex; bit `v` of the mask is `b(v)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrossingBits {
    mask: u64,
    len: u8,
}

impl CrossingBits {
    pub fn new(mask: u64, len: usize) -> Self {
        assert!(len <= MAX_CROSSINGS);
        debug_assert!(len == 64 || mask >> len == 0);
        CrossingBits { mask, len: len as u8 }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(0, len)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mask = bits.iter().enumerate().fold(0u64, |m, (v, &b)| m | ((b as u64) << v));
        Self::new(mask, bits.len())
    }

    /// Parses a string of `0`/`1`, vertex 0 first.
    pub fn parse(s: &str) -> Result<Self> {
        let bits: Option<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        let bits = bits.ok_or_else(|| Error::Structure(format!("bad crossing bits {s:?}")))?;
        if bits.len() > MAX_CROSSINGS {
            return Err(Error::Structure("too many crossing bits".into()));
        }
        Ok(Self::from_bools(&bits))
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, v: usize) -> bool {
        (self.mask >> v) & 1 == 1
    }

    /// The global crossing switch `b ↦ 1 − b`.
    pub fn complement(&self) -> Self {
        let full = if self.len == 64 { u64::MAX } else { (1u64 << self.len) - 1 };
        CrossingBits { mask: !self.mask & full, len: self.len }
    }
}

impl fmt::Display for CrossingBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in 0..self.len() {
            f.write_str(if self.get(v) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for CrossingBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CrossingBits({self})")
    }
}

impl Serialize for CrossingBits {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CrossingBits {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CrossingBits::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Diagram<'a> {
    pub projection: &'a LabelledMap,
    pub bits: CrossingBits,
}

impl<'a> Diagram<'a> {
    pub fn new(projection: &'a LabelledMap, bits: CrossingBits) -> Result<Self> {
        if bits.len() != projection.n() {
            return Err(Error::SizeMismatch { left: bits.len(), right: projection.n() });
        }
        Ok(Diagram { projection, bits })
    }

    pub fn switched(&self) -> Self {
        Diagram { projection: self.projection, bits: self.bits.complement() }
    }

    /// Darts of the over strand and of the under strand at `v`.
    pub fn strands(&self, v: usize) -> ([usize; 2], [usize; 2]) {
        let c = self.projection.corners(v);
        let even = [c[0], c[2]];
        let odd = [c[1], c[3]];
        if self.bits.get(v) {
            (odd, even)
        } else {
            (even, odd)
        }
    }
}

/// A face of degree two, `φ = (i j)` with `i < j`, at vertices `u ∋ i` and `v ∋ j`.
///
/// `twisted` records whether `i` and `j` sit at corner positions of different
/// parity, i.e. whether bit 0 selects different bigon edges at `u` and `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigonFace {
    pub i: usize,
    pub j: usize,
    pub u: usize,
    pub v: usize,
    pub twisted: bool,
}

/// Crossing assignments in increasing mask order; with the global switch only
/// those with `b(0) = 0`.
pub fn assignments(p: &LabelledMap, global_switch: bool) -> Vec<CrossingBits> {
    let n = p.n();
    assert!(n <= MAX_CROSSINGS);
    let total = 1u64 << n;
    (0..total)
        .filter(|m| !global_switch || m & 1 == 0)
        .map(|m| CrossingBits::new(m, n))
        .collect()
}

pub fn bigon_faces(p: &LabelledMap) -> Vec<BigonFace> {
    p.phi()
        .cycles()
        .into_iter()
        .filter(|c| c.len() == 2)
        .map(|c| {
            let (i, j) = (c[0], c[1]);
            BigonFace { i, j, u: p.vertex_of(i), v: p.vertex_of(j), twisted: odd_corner(p, i) != odd_corner(p, j) }
        })
        .collect()
}

fn odd_corner(p: &LabelledMap, h: usize) -> bool {
    let c = p.corners(p.vertex_of(h));
    c[1] == h || c[3] == h
}

/// Whether the bigon supports an immediate Reidemeister II reduction: the
/// same strand of the bigon passes over at both of its crossings.
///
/// The bigon edges swap local strands between `u` and `v`, so with corners
/// of equal parity this is `b(u) ≠ b(v)`, and with a twist `b(u) = b(v)`.
pub fn bigon_reducible(d: &Diagram<'_>, f: &BigonFace) -> Result<bool> {
    if f.u == f.v {
        return Err(Error::Domain("bigon incident twice to one vertex".into()));
    }
    Ok((d.bits.get(f.u) != d.bits.get(f.v)) != f.twisted)
}

/// No two-vertex bigon admits a Reidemeister II reduction.
pub fn passes_bigon_rule(d: &Diagram<'_>) -> bool {
    bigon_faces(d.projection)
        .iter()
        .filter(|f| f.u != f.v)
        .all(|f| (d.bits.get(f.u) != d.bits.get(f.v)) == f.twisted)
}

/// Every straight-ahead component is over at some mixed crossing and under at another.
pub fn participation_ok(d: &Diagram<'_>) -> Result<bool> {
    let p = d.projection;
    let count = component_count(p);
    if count < 2 {
        return Err(Error::Domain("participation filter applies to links only".into()));
    }
    let comp = p.dart_components();
    Ok(participation_with(d, &comp, count))
}

pub(crate) fn participation_with(d: &Diagram<'_>, comp: &[usize], count: usize) -> bool {
    let mut over = vec![false; count];
    let mut under = vec![false; count];
    for v in 0..d.projection.n() {
        let (o, u) = d.strands(v);
        let (co, cu) = (comp[o[0]], comp[u[0]]);
        if co != cu {
            over[co] = true;
            under[cu] = true;
        }
    }
    over.iter().zip(&under).all(|(&o, &u)| o && u)
}

/// Writhe of a knot diagram, oriented from its smallest dart.
///
/// At each crossing let `o` and `u` be the darts by which the over and under
/// strands leave the vertex; the sign is `+1` when `σ(u) = o`.
pub fn writhe(d: &Diagram<'_>) -> Result<i64> {
    let p = d.projection;
    if component_count(p) != 1 {
        return Err(Error::Domain("writhe is defined for knot diagrams only".into()));
    }
    let len = p.dart_count();
    let mut outgoing = vec![false; len];
    let mut h = 0;
    for _ in 0..2 * p.n() {
        outgoing[h] = true;
        let a = p.alpha().apply(h);
        h = p.sigma().apply(p.sigma().apply(a));
    }
    debug_assert_eq!(h, 0);
    let mut w = 0;
    for v in 0..p.n() {
        let (o, u) = d.strands(v);
        let o = if outgoing[o[0]] { o[0] } else { o[1] };
        let u = if outgoing[u[0]] { u[0] } else { u[1] };
        w += if p.sigma().apply(u) == o { 1 } else { -1 };
    }
    Ok(w)
}
