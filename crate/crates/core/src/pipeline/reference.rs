//! Published tabulation values used as regression targets.

/// Tag of the tables these values were transcribed from.
pub const REFERENCE_VERSION: &str = "genus-one-tables-v1";

/// Projection counts: `(n, unsensed, removed composite, removed split, prime, knots, links)`.
pub const PROJECTIONS: [(usize, usize, usize, usize, usize, usize, usize); 6] = [
    (3, 6, 0, 0, 6, 2, 4),
    (4, 28, 5, 0, 23, 10, 13),
    (5, 109, 28, 0, 81, 34, 47),
    (6, 595, 216, 0, 379, 170, 209),
    (7, 3216, 1421, 0, 1795, 777, 1018),
    (8, 19956, 10141, 0, 9815, 4308, 5507),
];

/// Prime link projections by component count `c = 2..=6`.
pub const LINK_COMPONENTS: [(usize, [usize; 5]); 6] = [
    (3, [3, 1, 0, 0, 0]),
    (4, [9, 3, 1, 0, 0]),
    (5, [37, 9, 1, 0, 0]),
    (6, [150, 51, 7, 1, 0]),
    (7, [775, 212, 30, 1, 0]),
    (8, [4030, 1293, 169, 14, 1]),
];

/// New diagram classes: `(n, knots, links, published knots, published links)`.
/// The published columns differ where the local reduction conventions differ.
pub const DIAGRAMS: [(usize, usize, usize, Option<usize>, Option<usize>); 7] = [
    (2, 1, 1, Some(1), Some(1)),
    (3, 3, 4, Some(3), Some(4)),
    (4, 18, 22, Some(17), Some(21)),
    (5, 71, 99, Some(69), Some(99)),
    (6, 378, 525, None, None),
    (7, 1743, 2909, None, None),
    (8, 10704, 16752, None, None),
];

pub fn projection_row(n: usize) -> Option<(usize, usize, usize, usize, usize, usize)> {
    PROJECTIONS.iter().find(|r| r.0 == n).map(|r| (r.1, r.2, r.3, r.4, r.5, r.6))
}

pub fn link_components(n: usize) -> Option<[usize; 5]> {
    LINK_COMPONENTS.iter().find(|r| r.0 == n).map(|r| r.1)
}

pub fn diagram_row(n: usize) -> Option<(usize, usize, Option<usize>, Option<usize>)> {
    DIAGRAMS.iter().find(|r| r.0 == n).map(|r| (r.1, r.2, r.3, r.4))
}
