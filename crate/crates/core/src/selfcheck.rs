//! Randomized consistency checks that need no reference data. Exposed on the
//! command line so a build can be sanity-checked on the target machine.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::bracket::{evaluate_bracket, precompute_geometry, smoothing_involution};
use crate::canonical::unsensed_canonical;
use crate::diagram::CrossingBits;
use crate::enumerate::{enumerate_projection_classes, EnumConfig};
use crate::error::Result;
use crate::laurent::LaurentPoly;
use crate::map::LabelledMap;
use crate::perm::{compose, Perm};
use crate::Bracket;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn random_relabel(len: usize, rng: &mut StdRng) -> Perm {
    let mut images: Vec<usize> = (0..len).collect();
    images.shuffle(rng);
    Perm::from_images(images).expect("shuffle is a permutation")
}

/// Bracket of `(p, b)` summed state by state, building `τ` from `b ⊕ s` directly.
fn direct_bracket(p: &LabelledMap, b: &CrossingBits) -> Result<Bracket> {
    let table = precompute_geometry(p)?;
    let n = p.n();
    let mut out = Bracket::zero();
    for s in 0..1u64 << n {
        let t = CrossingBits::new(b.mask() ^ s, n);
        let (g, d) = table.get(&t);
        let e = n as i32 - 2 * s.count_ones() as i32;
        out.add_poly(d, &LaurentPoly::loop_value().pow(g).shift(e));
    }
    Ok(out)
}

pub fn run(seed: u64, trials: usize) -> Result<Vec<CheckOutcome>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let pool: Vec<LabelledMap> = (2..=5)
        .map(|n| enumerate_projection_classes(n, EnumConfig::default()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .map(|c| c.to_map())
        .collect();

    let mut canon = CheckOutcome { name: "canonical form invariance", trials, failures: 0 };
    let mut conservation = CheckOutcome { name: "circle count conservation", trials, failures: 0 };
    let mut mirror = CheckOutcome { name: "mirror identity", trials, failures: 0 };
    let mut reindex = CheckOutcome { name: "xor reindexing", trials, failures: 0 };
    for _ in 0..trials {
        let m = &pool[rng.gen_range(0..pool.len())];
        let n = m.n();

        let mut q = m.conjugated(&random_relabel(m.dart_count(), &mut rng))?;
        if rng.gen_bool(0.5) {
            q = q.reversed();
        }
        if unsensed_canonical(m)? != unsensed_canonical(&q)? {
            canon.failures += 1;
        }

        let table = precompute_geometry(m)?;
        let t = CrossingBits::new(rng.gen_range(0..1u64 << n), n);
        let (g, d) = table.get(&t);
        let pi = compose(m.alpha(), &smoothing_involution(m, &t)?)?;
        if 2 * (g + d) as usize != pi.cycle_count() {
            conservation.failures += 1;
        }

        let b = CrossingBits::new(rng.gen_range(0..1u64 << n), n);
        let fwd: Bracket = evaluate_bracket(&b, &table)?;
        let back: Bracket = evaluate_bracket(&b.complement(), &table)?;
        if back != fwd.invert_a() {
            mirror.failures += 1;
        }
        if direct_bracket(m, &b)? != fwd {
            reindex.failures += 1;
        }
    }
    Ok(vec![canon, conservation, mirror, reindex])
}

#[cfg(test)]
mod tests {
    #[test]
    fn short_run_passes() {
        let outcomes = super::run(7, 50).unwrap();
        assert_eq!(outcomes.len(), 4);
        assert!(outcomes.iter().all(|o| o.passed()), "{outcomes:?}");
    }
}
