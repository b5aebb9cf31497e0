//! Affine spaces over `F_p`, the lattices obtained by gluing one `A_{p-1}`
//! chain per point along the code of affine functions, and exhaustive
//! witness searches over point subsets.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::lattice::{catalog, overlattice, GramLattice, IntMatrix};
use crate::root_config::{find_p_divisible_subsets, ChainConfiguration};
use crate::{is_prime, par, Error, Result, DEFAULT_MAX_CANDIDATES};

/// All `p^n` points of `F_p^n`, indexed by their big-endian base-p digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSpaceModel {
    pub p: u64,
    pub n: usize,
    pub points: Vec<Vec<u64>>,
}

impl AffineSpaceModel {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) || n == 0 {
            return Err(Error::Invalid(format!("no affine space F_{p}^{n}")));
        }
        let count = p.checked_pow(n as u32).filter(|&c| c <= 1 << 16).ok_or_else(|| {
            Error::Invalid(format!("F_{p}^{n} is too large to enumerate"))
        })?;
        let points = (0..count)
            .map(|mut i| {
                let mut x = vec![0u64; n];
                for k in (0..n).rev() {
                    x[k] = i % p;
                    i /= p;
                }
                x
            })
            .collect();
        Ok(AffineSpaceModel { p, n, points })
    }

    pub fn kummer() -> Self {
        Self::new(2, 4).expect("F_2^4")
    }

    pub fn ag23() -> Self {
        Self::new(3, 2).expect("F_3^2")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Values of the affine function `x -> a.x + b` at every point.
    pub fn evaluate(&self, a: &[u64], b: u64) -> Vec<u64> {
        self.points
            .iter()
            .map(|x| (x.iter().zip(a).map(|(xi, ai)| xi * ai).sum::<u64>() + b) % self.p)
            .collect()
    }

    /// Nonzero linear functionals with leading coefficient 1, in
    /// lexicographic order.
    fn normalised_functionals(&self) -> Vec<Vec<u64>> {
        self.points
            .iter()
            .filter(|a| a.iter().find(|&&x| x != 0) == Some(&1))
            .cloned()
            .collect()
    }
}

/// Solution sets of one nontrivial affine equation, grouped by direction.
pub fn affine_hyperplanes(space: &AffineSpaceModel) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in space.normalised_functionals() {
        let values = space.evaluate(&a, 0);
        for b in 0..space.p {
            out.push((0..space.len()).filter(|&i| values[i] == b).collect());
        }
    }
    out
}

/// Generators of the code of affine functions: the constant function and
/// each coordinate function.
pub fn affine_code_generators(space: &AffineSpaceModel) -> Vec<Vec<u64>> {
    let mut gens = vec![vec![1u64; space.len()]];
    for k in 0..space.n {
        gens.push(space.points.iter().map(|x| x[k]).collect());
    }
    gens
}

/// Every codeword of the affine-function code.
pub fn affine_codewords(space: &AffineSpaceModel) -> Vec<Vec<u64>> {
    let mut words = Vec::new();
    for a in &space.points {
        for b in 0..space.p {
            words.push(space.evaluate(a, b));
        }
    }
    words
}

/// Number of codewords of each Hamming weight.
pub fn weight_distribution(words: &[Vec<u64>]) -> BTreeMap<usize, usize> {
    let mut dist = BTreeMap::new();
    for w in words {
        *dist.entry(w.iter().filter(|&&x| x != 0).count()).or_insert(0) += 1;
    }
    dist
}

/// One `A_{p-1}` chain per point, glued by `(1/p) sum_i f(i) w_i` for each
/// affine function `f`, where `w_i = sum_k k * (chain i, curve k)`.
pub fn code_lattice(space: &AffineSpaceModel) -> Result<(GramLattice, ChainConfiguration)> {
    let p = space.p;
    let len = (p - 1) as usize;
    let c = space.len();
    let root = (0..c).fold(None, |acc: Option<IntMatrix>, _| {
        let a = catalog::a(len);
        Some(match acc {
            None => a,
            Some(m) => m.direct_sum(&a),
        })
    });
    let root = root.ok_or_else(|| Error::Invalid("empty space".into()))?;
    let glue: Vec<Vec<i128>> = affine_code_generators(space)
        .iter()
        .map(|f| {
            let mut g = vec![0i128; c * len];
            for (i, &fi) in f.iter().enumerate() {
                for k in 0..len {
                    g[i * len + k] = fi as i128 * (k as i128 + 1);
                }
            }
            g
        })
        .collect();
    let o = overlattice(&root, &glue, p as i128)?;
    let mut lattice = o.lattice;
    lattice.name = Some(format!("{c}A{len}+affine_glue"));
    let chains = (0..c)
        .map(|i| (0..len).map(|k| o.old_coords[i * len + k].clone()).collect())
        .collect();
    let cfg = ChainConfiguration::new(lattice.clone(), p, chains)?;
    Ok((lattice, cfg))
}

/// Rank 16 overlattice of `16 A1` glued along the first-order Reed-Muller
/// code of length 16.
pub fn kummer_lattice() -> Result<(GramLattice, ChainConfiguration)> {
    let (mut l, mut cfg) = code_lattice(&AffineSpaceModel::kummer())?;
    l.name = Some("kummer".into());
    cfg.ambient.name = l.name.clone();
    Ok((l, cfg))
}

/// Rank 18 overlattice of `9 A2` glued along the ternary affine code of
/// `F_3^2`.
pub fn ag23_lattice() -> Result<(GramLattice, ChainConfiguration)> {
    let (mut l, mut cfg) = code_lattice(&AffineSpaceModel::ag23())?;
    l.name = Some("ag23".into());
    cfg.ambient.name = l.name.clone();
    Ok((l, cfg))
}

pub(crate) fn mask_of(members: &[usize]) -> u32 {
    members.iter().fold(0u32, |m, &i| m | (1 << i))
}

pub(crate) fn members_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Point sets (as bitmasks) carrying a divisibility witness in the code
/// lattice of `space`, found by the lattice search.
pub fn divisible_point_sets(space: &AffineSpaceModel) -> Result<Vec<u32>> {
    let (_, cfg) = code_lattice(space)?;
    let mut sets: Vec<u32> = find_p_divisible_subsets(&cfg, DEFAULT_MAX_CANDIDATES)?
        .iter()
        .map(|w| mask_of(&w.subset))
        .collect();
    sets.sort_unstable();
    sets.dedup();
    Ok(sets)
}

fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairLaw {
    pub pairs: usize,
    pub intersection_sizes: BTreeMap<usize, usize>,
    /// Every disjoint pair covers the whole space.
    pub disjoint_pairs_cover: bool,
}

/// Intersection statistics over all unordered pairs of distinct
/// hyperplanes.
pub fn hyperplane_pair_law(space: &AffineSpaceModel) -> PairLaw {
    let hs: Vec<u32> = affine_hyperplanes(space).iter().map(|h| mask_of(h)).collect();
    let full = mask_of(&(0..space.len()).collect::<Vec<_>>());
    let mut law = PairLaw {
        pairs: 0,
        intersection_sizes: BTreeMap::new(),
        disjoint_pairs_cover: true,
    };
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            law.pairs += 1;
            let meet = (hs[i] & hs[j]).count_ones() as usize;
            *law.intersection_sizes.entry(meet).or_insert(0) += 1;
            if meet == 0 && hs[i] | hs[j] != full {
                law.disjoint_pairs_cover = false;
            }
        }
    }
    law
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KummerWitnesses {
    /// Number of 13-point subsets examined.
    pub checked_13: usize,
    /// Every 13-point subset contains two divisible 8-sets meeting in 4.
    pub pair_13: bool,
    /// A 12-point subset containing exactly one divisible subset.
    pub unique_12: Option<Vec<usize>>,
    /// An 11-point subset containing no divisible subset.
    pub none_11: Option<Vec<usize>>,
}

/// Exhaustive subset searches on the 16-point model, using the divisible
/// sets produced by the lattice search.
pub fn kummer_subset_witnesses() -> Result<KummerWitnesses> {
    let divisible = divisible_point_sets(&AffineSpaceModel::kummer())?;
    let eights: Vec<u32> = divisible.iter().copied().filter(|m| m.count_ones() == 8).collect();
    let inside = |s: u32| -> Vec<u32> { divisible.iter().copied().filter(|&d| d & !s == 0).collect() };

    let thirteens = subsets_of_size(16, 13);
    let pair_13 = par::all(&thirteens, |&s| {
        let hs: Vec<u32> = eights.iter().copied().filter(|&h| h & !s == 0).collect();
        hs.iter()
            .enumerate()
            .any(|(i, a)| hs[i + 1..].iter().any(|b| (a & b).count_ones() == 4))
    });
    let twelves = subsets_of_size(16, 12);
    let unique_12 = par::find_first(&twelves, |&s| inside(s).len() == 1).map(|&s| members_of(s));
    let elevens = subsets_of_size(16, 11);
    let none_11 = par::find_first(&elevens, |&s| inside(s).is_empty()).map(|&s| members_of(s));
    Ok(KummerWitnesses {
        checked_13: thirteens.len(),
        pair_13,
        unique_12,
        none_11,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SixSetCheck {
    pub checked_7: usize,
    /// Every 7-point subset contains exactly one divisible 6-set.
    pub unique_six_set: bool,
}

/// Exhaustive check over the 7-point subsets of the 9-point model.
pub fn ag23_unique_six_set() -> Result<SixSetCheck> {
    let divisible = divisible_point_sets(&AffineSpaceModel::ag23())?;
    let sixes: Vec<u32> = divisible.iter().copied().filter(|m| m.count_ones() == 6).collect();
    let sevens = subsets_of_size(9, 7);
    let unique = par::all(&sevens, |&s| sixes.iter().filter(|&&h| h & !s == 0).count() == 1);
    Ok(SixSetCheck {
        checked_7: sevens.len(),
        unique_six_set: unique,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoSixSets {
    pub eight_set: Vec<usize>,
    pub six_sets: [Vec<usize>; 2],
    /// The single point shared by the two complementary lines.
    pub common_point: usize,
}

/// An 8-point subset containing two divisible 6-sets whose complementary
/// lines meet in exactly one point.
pub fn ag23_two_six_sets() -> Result<Option<TwoSixSets>> {
    let divisible = divisible_point_sets(&AffineSpaceModel::ag23())?;
    let full: u32 = (1 << 9) - 1;
    let sixes: Vec<u32> = divisible.iter().copied().filter(|m| m.count_ones() == 6).collect();
    for s in subsets_of_size(9, 8) {
        let inside: Vec<u32> = sixes.iter().copied().filter(|&h| h & !s == 0).collect();
        for (i, &a) in inside.iter().enumerate() {
            for &b in &inside[i + 1..] {
                let meet = (full & !a) & (full & !b);
                if meet.count_ones() == 1 {
                    return Ok(Some(TwoSixSets {
                        eight_set: members_of(s),
                        six_sets: [members_of(a), members_of(b)],
                        common_point: meet.trailing_zeros() as usize,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::discriminant_group;

    #[test]
    fn point_indexing_is_big_endian() {
        let s = AffineSpaceModel::kummer();
        assert_eq!(s.points[1], vec![0, 0, 0, 1]);
        assert_eq!(s.points[8], vec![1, 0, 0, 0]);
        let t = AffineSpaceModel::ag23();
        assert_eq!(t.points[5], vec![1, 2]);
    }

    #[test]
    fn hyperplane_counts() {
        let h = affine_hyperplanes(&AffineSpaceModel::kummer());
        assert_eq!(h.len(), 30);
        assert!(h.iter().all(|x| x.len() == 8));
        let lines = affine_hyperplanes(&AffineSpaceModel::ag23());
        assert_eq!(lines.len(), 12);
        assert!(lines.iter().all(|x| x.len() == 3));
        let tiny = affine_hyperplanes(&AffineSpaceModel::new(2, 1).unwrap());
        assert_eq!(tiny, vec![vec![0], vec![1]]);
    }

    #[test]
    fn lines_of_the_affine_plane() {
        let lines: Vec<u32> = affine_hyperplanes(&AffineSpaceModel::ag23())
            .iter()
            .map(|l| mask_of(l))
            .collect();
        for a in 0..9 {
            for b in a + 1..9 {
                let through = lines.iter().filter(|&&l| l >> a & 1 == 1 && l >> b & 1 == 1).count();
                assert_eq!(through, 1);
            }
        }
    }

    #[test]
    fn reed_muller_weights() {
        let words = affine_codewords(&AffineSpaceModel::kummer());
        assert_eq!(words.len(), 32);
        let dist = weight_distribution(&words);
        assert_eq!(dist, BTreeMap::from([(0, 1), (8, 30), (16, 1)]));
    }

    #[test]
    fn code_lattices_are_even_with_expected_discriminants() {
        let (k, cfg) = kummer_lattice().unwrap();
        assert_eq!(k.rank(), 16);
        assert!(k.is_even());
        assert_eq!(k.determinant().unwrap(), 64);
        assert_eq!(discriminant_group(&k).unwrap().factors, vec![2; 6]);
        assert_eq!(cfg.c(), 16);
        let (a, cfg) = ag23_lattice().unwrap();
        assert_eq!(a.rank(), 18);
        assert!(a.is_even());
        assert_eq!(a.determinant().unwrap(), 27);
        assert_eq!(cfg.c(), 9);
    }

    #[test]
    fn search_guard_on_kummer() {
        let (_, cfg) = kummer_lattice().unwrap();
        assert!(matches!(
            find_p_divisible_subsets(&cfg, 16),
            Err(Error::SearchTooLarge { size: 32, bound: 16 })
        ));
    }

    #[test]
    fn kummer_divisible_sets_are_codeword_supports() {
        let sets = divisible_point_sets(&AffineSpaceModel::kummer()).unwrap();
        let mut supports: Vec<u32> = affine_codewords(&AffineSpaceModel::kummer())
            .iter()
            .map(|w| mask_of(&(0..16).filter(|&i| w[i] != 0).collect::<Vec<_>>()))
            .filter(|&m| m != 0)
            .collect();
        supports.sort_unstable();
        supports.dedup();
        assert_eq!(sets, supports);
        assert_eq!(sets.len(), 31);
    }

    #[test]
    fn ag23_divisible_sets() {
        let sets = divisible_point_sets(&AffineSpaceModel::ag23()).unwrap();
        let sixes = sets.iter().filter(|m| m.count_ones() == 6).count();
        let nines = sets.iter().filter(|m| m.count_ones() == 9).count();
        assert_eq!((sixes, nines, sets.len()), (12, 1, 13));
        let lines: Vec<u32> = affine_hyperplanes(&AffineSpaceModel::ag23())
            .iter()
            .map(|l| mask_of(l))
            .collect();
        for s in sets.iter().filter(|m| m.count_ones() == 6) {
            assert!(lines.contains(&(0x1ff & !s)));
        }
    }

    #[test]
    fn ag23_eight_point_witness() {
        let w = ag23_two_six_sets().unwrap().unwrap();
        assert_eq!(w.eight_set.len(), 8);
        assert!(!w.eight_set.contains(&w.common_point));
    }
}
