//! Cell-by-cell comparison of computed stats against the reference tables.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::reference::{diagram_row, link_components, projection_row};
use super::{DiagramStats, ProjectionStats};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Match,
    /// Matches the expected value, which differs from the published one
    /// because of local reduction conventions.
    ConventionDelta { published: usize },
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub table: String,
    pub n: usize,
    pub column: String,
    pub expected: usize,
    pub actual: usize,
    pub status: CellStatus,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match &self.status {
            CellStatus::Match => "ok".to_string(),
            CellStatus::ConventionDelta { published } => format!("ok (published {published}, convention delta)"),
            CellStatus::Mismatch => "MISMATCH".to_string(),
        };
        write!(
            f,
            "{} n={} {}: expected {} got {} {}",
            self.table, self.n, self.column, self.expected, self.actual, tag
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffReport {
    pub cells: Vec<Cell>,
}

impl DiffReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.status == CellStatus::Mismatch)
    }

    pub fn is_clean(&self) -> bool {
        self.mismatches().next().is_none()
    }

    fn push(&mut self, table: &str, n: usize, column: &str, expected: usize, actual: usize, published: Option<usize>) {
        let status = if expected != actual {
            CellStatus::Mismatch
        } else {
            match published {
                Some(p) if p != expected => CellStatus::ConventionDelta { published: p },
                _ => CellStatus::Match,
            }
        };
        self.cells.push(Cell { table: table.into(), n, column: column.into(), expected, actual, status });
    }
}

/// Compares every cell for which a reference value exists; rows without one are skipped.
pub fn verify(projections: &[ProjectionStats], diagrams: &[DiagramStats]) -> DiffReport {
    let mut r = DiffReport::default();
    for s in projections {
        if let Some((u, comp, split, prime, k, l)) = projection_row(s.n) {
            r.push("projections", s.n, "unsensed", u, s.unsensed, None);
            r.push("projections", s.n, "removed_comp", comp, s.removed_comp, None);
            r.push("projections", s.n, "removed_split", split, s.removed_split, None);
            r.push("projections", s.n, "prime_total", prime, s.prime_total, None);
            r.push("projections", s.n, "prime_knots", k, s.prime_knots, None);
            r.push("projections", s.n, "prime_links", l, s.prime_links, None);
        }
        if let Some(dist) = link_components(s.n) {
            for (i, &want) in dist.iter().enumerate() {
                let c = i + 2;
                let got = s.link_components.get(&c).copied().unwrap_or(0);
                r.push("link_components", s.n, &format!("c={c}"), want, got, None);
            }
        }
    }
    for s in diagrams {
        if let Some((k, l, pk, pl)) = diagram_row(s.n) {
            r.push("diagrams", s.n, "new_knots", k, s.new_knots, pk);
            r.push("diagrams", s.n, "new_links", l, s.new_links, pl);
        }
    }
    r
}
