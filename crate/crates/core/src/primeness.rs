//! Projection-level primeness witnesses: 2-edge-cuts of the underlying
//! multigraph and link components meeting the rest at most once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{component_count, mixed_vertices, multigraph, LabelledMap, Multigraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimenessReport {
    /// Edge indices (into [`Multigraph::edges`]) of the first 2-edge-cut.
    pub two_edge_cut: Option<(usize, usize)>,
    /// Smallest component id with at most one mixed vertex (links only).
    pub split_component: Option<usize>,
    pub prime: bool,
}

/// First pair of edges (in lexicographic index order) whose removal disconnects `g`.
pub fn find_two_edge_cut(g: &Multigraph) -> Result<Option<(usize, usize)>> {
    if !g.is_connected() {
        return Err(Error::Domain("2-edge-cut search on a disconnected multigraph".into()));
    }
    let e = g.edges.len();
    for a in 0..e {
        for b in a + 1..e {
            if !g.is_connected_without(&[a, b]) {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// Number of mixed vertices each straight-ahead component passes through.
pub fn mixed_participation(m: &LabelledMap) -> Vec<usize> {
    let comp = m.dart_components();
    let count = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut participation = vec![0; count];
    for v in mixed_vertices(m) {
        let mut seen: Vec<usize> = m.corners(v).iter().map(|&h| comp[h]).collect();
        seen.sort_unstable();
        seen.dedup();
        for c in seen {
            participation[c] += 1;
        }
    }
    participation
}

pub fn split_witnessed(m: &LabelledMap) -> Result<Option<usize>> {
    if component_count(m) < 2 {
        return Err(Error::Domain("split witness is defined for links only".into()));
    }
    Ok(mixed_participation(m).iter().position(|&k| k <= 1))
}

pub fn is_prime(m: &LabelledMap) -> Result<PrimenessReport> {
    let two_edge_cut = find_two_edge_cut(&multigraph(m))?;
    let split_component = if component_count(m) >= 2 { split_witnessed(m)? } else { None };
    Ok(PrimenessReport {
        two_edge_cut,
        split_component,
        prime: two_edge_cut.is_none() && split_component.is_none(),
    })
}
