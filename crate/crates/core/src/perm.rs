//! Permutations on a dart set.
//!
//! Darts are 0-based indices internally. Every human-facing form (cycle
//! notation, serialized image lists) is 1-based. Composition uses the right
//! action throughout the crate: `compose(p, q)` applies `p` first, then `q`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A bijection on `{0, .., len-1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(len: usize) -> Self {
        Perm { images: (0..len).collect() }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Structure(format!(
                    "image list is not a bijection on {n} darts"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation from the 1-based image list used in dataset files.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.iter().any(|&x| x == 0) {
            return Err(Error::Structure("dart 0 in a 1-based image list".into()));
        }
        Self::from_images(images.iter().map(|&x| x - 1).collect())
    }

    /// Builds a permutation on `len` darts from 1-based disjoint cycles.
    pub fn from_cycles(len: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..len).collect();
        let mut seen = vec![false; len];
        for cyc in cycles {
            for (k, &h) in cyc.iter().enumerate() {
                if h == 0 || h > len || seen[h - 1] {
                    return Err(Error::Structure(format!("bad cycle entry {h}")));
                }
                seen[h - 1] = true;
                images[h - 1] = cyc[(k + 1) % cyc.len()] - 1;
            }
        }
        Ok(Perm { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Perm { images }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, h: usize) -> usize {
        self.images[h]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(h, &x)| h == x)
    }

    pub fn is_fixed_point_free_involution(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(h, &x)| x != h && self.images[x] == h)
    }

    /// Disjoint cycles, each starting at its minimal dart, sorted by that dart.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                cyc.push(h);
                h = self.images[h];
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut count = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                h = self.images[h];
            }
        }
        count
    }

    /// Sorted list of cycle lengths.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    pub fn has_fixed_point(&self) -> bool {
        self.images.iter().enumerate().any(|(h, &x)| h == x)
    }

    /// 1-based cycle notation, 1-cycles included, e.g. `(1 7 4 5 3 8)(2 6)`.
    pub fn cycle_notation(&self) -> String {
        let mut s = String::new();
        for cyc in self.cycles() {
            s.push('(');
            let parts: Vec<String> = cyc.iter().map(|h| (h + 1).to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push(')');
        }
        s
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{}", self.cycle_notation())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Perm::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

/// `p` first, then `q`: the result sends `h` to `q(p(h))`.
pub fn compose(p: &Perm, q: &Perm) -> Result<Perm> {
    if p.len() != q.len() {
        return Err(Error::SizeMismatch { left: p.len(), right: q.len() });
    }
    Ok(Perm { images: p.images.iter().map(|&x| q.images[x]).collect() })
}

pub fn inverse(p: &Perm) -> Perm {
    let mut images = vec![0; p.len()];
    for (h, &x) in p.images.iter().enumerate() {
        images[x] = h;
    }
    Perm { images }
}

/// `relabel · p · relabel⁻¹` in the right action, i.e. `h ↦ relabel⁻¹(p(relabel(h)))`.
///
/// Read `relabel` as naming, for each new label, the old dart it stands for.
pub fn conjugate(p: &Perm, relabel: &Perm) -> Result<Perm> {
    if p.len() != relabel.len() {
        return Err(Error::SizeMismatch { left: p.len(), right: relabel.len() });
    }
    let inv = inverse(relabel);
    Ok(Perm {
        images: relabel.images.iter().map(|&old| inv.images[p.images[old]]).collect(),
    })
}

/// `(1 2 3 4)(5 6 7 8)...` on `4n` darts.
pub fn standard_sigma(n: usize) -> Result<Perm> {
    if n == 0 {
        return Err(Error::Domain("standard rotation needs at least one vertex".into()));
    }
    Ok(Perm {
        images: (0..4 * n).map(|h| (h & !3) | ((h + 1) & 3)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_perm(len: usize) -> impl Strategy<Value = Perm> {
        Just((0..len).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Perm::from_images(v).unwrap())
    }

    #[test]
    fn compose_uses_right_action() {
        let p = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        let q = Perm::from_cycles(3, &[&[2, 3]]).unwrap();
        let r = compose(&p, &q).unwrap();
        assert_eq!(r.to_one_based(), vec![3, 1, 2]);
        assert_eq!(compose(&p, &Perm::identity(3)).unwrap(), p);
    }

    #[test]
    fn face_permutation_of_two_vertex_knot() {
        let sigma = standard_sigma(2).unwrap();
        let alpha = Perm::from_cycles(8, &[&[1, 5], &[2, 7], &[3, 6], &[4, 8]]).unwrap();
        let phi = compose(&sigma, &alpha).unwrap();
        assert_eq!(phi.cycle_notation(), "(1 7 4 5 3 8)(2 6)");
        assert_eq!(phi.cycles(), vec![vec![0, 6, 3, 4, 2, 7], vec![1, 5]]);
    }

    #[test]
    fn inverse_of_four_cycle() {
        let p = Perm::from_cycles(4, &[&[1, 2, 3, 4]]).unwrap();
        assert_eq!(inverse(&p).cycle_notation(), "(1 4 3 2)");
        let inv = Perm::from_cycles(8, &[&[1, 5], &[2, 7], &[3, 6], &[4, 8]]).unwrap();
        assert_eq!(inverse(&inv), inv);
    }

    #[test]
    fn cycles_normal_form() {
        assert_eq!(standard_sigma(2).unwrap().cycle_notation(), "(1 2 3 4)(5 6 7 8)");
        assert_eq!(Perm::identity(4).cycles().len(), 4);
    }

    #[test]
    fn standard_sigma_shape() {
        assert_eq!(standard_sigma(1).unwrap().cycle_notation(), "(1 2 3 4)");
        let s = standard_sigma(5).unwrap();
        for v in 1..=5 {
            assert_eq!(s.apply(4 * v - 1), 4 * v - 4);
        }
        assert!(matches!(standard_sigma(0), Err(Error::Domain(_))));
    }

    #[test]
    fn conjugating_to_standard_rotation() {
        // Vertices (3 8 1 6) and (2 5 4 7): send each 4-tuple to a standard block.
        let sigma = Perm::from_cycles(8, &[&[3, 8, 1, 6], &[2, 5, 4, 7]]).unwrap();
        let relabel = Perm::from_one_based(&[3, 8, 1, 6, 2, 5, 4, 7]).unwrap();
        assert_eq!(conjugate(&sigma, &relabel).unwrap(), standard_sigma(2).unwrap());
        assert_eq!(conjugate(&sigma, &Perm::identity(8)).unwrap(), sigma);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let err = compose(&Perm::identity(3), &Perm::identity(4)).unwrap_err();
        assert!(matches!(err, Error::SizeMismatch { left: 3, right: 4 }));
        assert!(conjugate(&Perm::identity(3), &Perm::identity(4)).is_err());
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_one_based(&[0, 1]).is_err());
    }

    proptest! {
        #[test]
        fn inverse_laws(p in random_perm(12)) {
            prop_assert!(compose(&p, &inverse(&p)).unwrap().is_identity());
            prop_assert_eq!(inverse(&inverse(&p)), p);
        }

        #[test]
        fn compose_is_associative(p in random_perm(10), q in random_perm(10), r in random_perm(10)) {
            let left = compose(&compose(&p, &q).unwrap(), &r).unwrap();
            let right = compose(&p, &compose(&q, &r).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn conjugation_preserves_cycle_type(p in random_perm(16), r in random_perm(16)) {
            prop_assert_eq!(conjugate(&p, &r).unwrap().cycle_type(), p.cycle_type());
        }

        #[test]
        fn one_based_round_trip(p in random_perm(9)) {
            let json = serde_json::to_string(&p).unwrap();
            let back: Perm = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
