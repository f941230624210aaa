//! Labelled 4-regular maps `(α, σ)` and their projection-level structure.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{compose, inverse, standard_sigma, Perm};

/// A labelled 4-regular map: edge involution `alpha` and vertex rotation `sigma`
/// on `4n` darts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LabelledMap {
    n: usize,
    alpha: Perm,
    sigma: Perm,
    /// Vertex index of each dart; vertices are ordered by their minimal dart.
    vertex_of: Vec<usize>,
    /// `(h0 h1 h2 h3)` per vertex with `h0` the minimal dart and `σ(h_i) = h_{i+1}`.
    corners: Vec<[usize; 4]>,
    standard: bool,
}

impl LabelledMap {
    pub fn new(alpha: Perm, sigma: Perm) -> Result<Self> {
        if alpha.len() != sigma.len() {
            return Err(Error::SizeMismatch { left: alpha.len(), right: sigma.len() });
        }
        if alpha.len() % 4 != 0 || alpha.is_empty() {
            return Err(Error::Structure(format!(
                "dart count {} is not a positive multiple of 4",
                alpha.len()
            )));
        }
        if !alpha.is_fixed_point_free_involution() {
            return Err(Error::Structure("alpha is not a fixed-point-free involution".into()));
        }
        let cycles = sigma.cycles();
        if cycles.iter().any(|c| c.len() != 4) {
            return Err(Error::Structure("sigma has a cycle of length other than 4".into()));
        }
        let n = cycles.len();
        let mut vertex_of = vec![0; alpha.len()];
        let mut corners = Vec::with_capacity(n);
        for (v, c) in cycles.iter().enumerate() {
            for &h in c {
                vertex_of[h] = v;
            }
            corners.push([c[0], c[1], c[2], c[3]]);
        }
        let standard = sigma == standard_sigma(n)?;
        Ok(LabelledMap { n, alpha, sigma, vertex_of, corners, standard })
    }

    /// `(alpha, σ₀)` for the standard rotation on `alpha.len() / 4` vertices.
    pub fn with_standard_sigma(alpha: Perm) -> Result<Self> {
        let sigma = standard_sigma(alpha.len() / 4)?;
        Self::new(alpha, sigma)
    }

    /// Convenience constructor from 1-based cycles of `alpha` against σ₀.
    pub fn from_alpha_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        Self::with_standard_sigma(Perm::from_cycles(4 * n, cycles)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dart_count(&self) -> usize {
        4 * self.n
    }

    pub fn alpha(&self) -> &Perm {
        &self.alpha
    }

    pub fn sigma(&self) -> &Perm {
        &self.sigma
    }

    pub fn is_standard(&self) -> bool {
        self.standard
    }

    #[inline]
    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    /// The σ-cycle of vertex `v`, starting at its minimal dart.
    #[inline]
    pub fn corners(&self, v: usize) -> [usize; 4] {
        self.corners[v]
    }

    /// Face permutation `φ = σα`.
    pub fn phi(&self) -> Perm {
        compose(&self.sigma, &self.alpha).expect("sizes checked at construction")
    }

    /// `ρ = σ²α`, whose cycles come in pairs per straight-ahead component.
    pub fn rho(&self) -> Perm {
        let s2 = compose(&self.sigma, &self.sigma).expect("same size");
        compose(&s2, &self.alpha).expect("same size")
    }

    /// The orientation-reversed map `(α, σ⁻¹)`.
    pub fn reversed(&self) -> LabelledMap {
        LabelledMap::new(self.alpha.clone(), inverse(&self.sigma)).expect("reversal keeps validity")
    }

    /// Simultaneous relabelling, see [`crate::perm::conjugate`].
    pub fn conjugated(&self, relabel: &Perm) -> Result<LabelledMap> {
        LabelledMap::new(
            crate::perm::conjugate(&self.alpha, relabel)?,
            crate::perm::conjugate(&self.sigma, relabel)?,
        )
    }

    /// Straight-ahead component id of each dart (orbits of `⟨α, σ²⟩`),
    /// numbered by minimal dart.
    pub fn dart_components(&self) -> Vec<usize> {
        let len = self.dart_count();
        let mut comp = vec![usize::MAX; len];
        let mut next = 0;
        for start in 0..len {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut h = start;
            // The orbit is a single cycle alternating α and σ² steps.
            loop {
                comp[h] = next;
                let a = self.alpha.apply(h);
                comp[a] = next;
                h = self.sigma.apply(self.sigma.apply(a));
                if comp[h] != usize::MAX {
                    break;
                }
            }
            next += 1;
        }
        comp
    }
}

/// Abstract multigraph underlying a map: vertices are σ-cycles, edges α-pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigraph {
    pub vertex_count: usize,
    /// Unordered endpoints `(u, v)` with `u <= v`, one per α-orbit ordered by minimal dart.
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.iter().any(|&(u, v)| u >= vertex_count || v >= vertex_count) {
            return Err(Error::Structure("edge endpoint out of range".into()));
        }
        Ok(Multigraph { vertex_count, edges })
    }

    /// Connectivity with the edges in `skip` removed.
    pub fn is_connected_without(&self, skip: &[usize]) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if skip.contains(&i) {
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_without(&[])
    }
}

/// Whether `⟨α, σ⟩` acts transitively on the darts.
pub fn is_connected(m: &LabelledMap) -> bool {
    let len = m.dart_count();
    let mut seen = vec![false; len];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(h) = stack.pop() {
        for next in [m.alpha.apply(h), m.sigma.apply(h)] {
            if !seen[next] {
                seen[next] = true;
                count += 1;
                stack.push(next);
            }
        }
    }
    count == len
}

/// Genus from `#cyc(σ) − #cyc(α) + #cyc(σα) = 2 − 2g`.
pub fn euler_genus(m: &LabelledMap) -> Result<usize> {
    if !is_connected(m) {
        return Err(Error::Domain("genus of a disconnected map".into()));
    }
    let chi = m.n as i64 - 2 * m.n as i64 + m.phi().cycle_count() as i64;
    if chi % 2 != 0 || chi > 2 {
        return Err(Error::Structure(format!("impossible Euler characteristic {chi}")));
    }
    Ok(((2 - chi) / 2) as usize)
}

/// Number of straight-ahead components, `½ #cyc(σ²α)`.
pub fn component_count(m: &LabelledMap) -> usize {
    let cycles = m.rho().cycle_count();
    debug_assert!(cycles % 2 == 0);
    cycles / 2
}

/// Whether some face has degree one.
pub fn has_monogon(m: &LabelledMap) -> bool {
    m.phi().has_fixed_point()
}

/// Whether some edge joins a vertex to itself.
pub fn has_loop(m: &LabelledMap) -> bool {
    let len = m.dart_count();
    if m.standard {
        (0..len).any(|h| h / 4 == m.alpha.apply(h) / 4)
    } else {
        (0..len).any(|h| m.vertex_of(h) == m.vertex_of(m.alpha.apply(h)))
    }
}

pub fn multigraph(m: &LabelledMap) -> Multigraph {
    let mut edges = Vec::with_capacity(2 * m.n);
    for h in 0..m.dart_count() {
        let a = m.alpha.apply(h);
        if h < a {
            let (u, v) = (m.vertex_of(h), m.vertex_of(a));
            edges.push((u.min(v), u.max(v)));
        }
    }
    Multigraph { vertex_count: m.n, edges }
}

/// Vertices whose four darts touch at least two straight-ahead components.
pub fn mixed_vertices(m: &LabelledMap) -> BTreeSet<usize> {
    let comp = m.dart_components();
    (0..m.n)
        .filter(|&v| {
            let c = m.corners(v);
            c.iter().any(|&h| comp[h] != comp[c[0]])
        })
        .collect()
}
