//! Configurations of `c` disjoint `A_{p-1}` chains inside a class lattice and
//! the search for subsets whose weighted sum is divisible by `p`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::lattice::{
    primitive_closure, smith_normal_form, AbelianInvariants, EmbeddedSublattice, GramLattice,
    IntMatrix,
};
use crate::{is_prime, par, Error, Result};

#[derive(Clone, Debug)]
pub struct ChainConfiguration {
    pub ambient: GramLattice,
    pub p: u64,
    /// `chains[i][k]` is the class of the (k+1)-th curve of the i-th chain.
    pub chains: Vec<Vec<Vec<i128>>>,
    pub kw_mod2: Option<Vec<u8>>,
}

#[derive(Deserialize)]
struct ConfigFile {
    ambient: Value,
    p: u64,
    chains: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    kw_mod2: Option<Vec<u8>>,
}

impl ChainConfiguration {
    pub fn new(ambient: GramLattice, p: u64, chains: Vec<Vec<Vec<i128>>>) -> Result<Self> {
        let cfg = ChainConfiguration {
            ambient,
            p,
            chains,
            kw_mod2: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let f: ConfigFile = serde_json::from_value(v.clone())?;
        let chains = f
            .chains
            .into_iter()
            .map(|c| c.into_iter().map(|v| v.into_iter().map(i128::from).collect()).collect())
            .collect();
        let mut cfg = Self::new(GramLattice::from_json(&f.ambient)?, f.p, chains)?;
        cfg.kw_mod2 = f.kw_mod2;
        Ok(cfg)
    }

    pub fn c(&self) -> usize {
        self.chains.len()
    }

    /// Checks that every chain is an `A_{p-1}` block and that distinct
    /// chains are orthogonal.
    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::Invalid(format!("{} is not prime", self.p)));
        }
        let len = (self.p - 1) as usize;
        let n = self.ambient.rank();
        let g = &self.ambient.gram;
        for (i, chain) in self.chains.iter().enumerate() {
            if chain.len() != len {
                return Err(Error::Invalid(format!(
                    "chain {i} has {} classes, expected {len}",
                    chain.len()
                )));
            }
            if chain.iter().any(|v| v.len() != n) {
                return Err(Error::Dimension(format!("chain {i} has a vector of the wrong length")));
            }
            for a in 0..len {
                for b in 0..len {
                    let want = match a.abs_diff(b) {
                        0 => -2,
                        1 => 1,
                        _ => 0,
                    };
                    if g.pair(&chain[a], &chain[b])? != want {
                        return Err(Error::Invalid(format!(
                            "chain {i} does not pair as an A{len} block at ({a}, {b})"
                        )));
                    }
                }
            }
        }
        for i in 0..self.chains.len() {
            for j in i + 1..self.chains.len() {
                for u in &self.chains[i] {
                    for v in &self.chains[j] {
                        if g.pair(u, v)? != 0 {
                            return Err(Error::Invalid(format!("chains {i} and {j} are not orthogonal")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Every curve class, chain by chain.
    pub fn all_classes(&self) -> Vec<Vec<i128>> {
        self.chains.iter().flatten().cloned().collect()
    }

    /// Glue group of the span of all curve classes in the ambient lattice.
    pub fn glue(&self) -> Result<AbelianInvariants> {
        let s = EmbeddedSublattice::new(self.ambient.clone(), self.all_classes())?;
        Ok(primitive_closure(&s)?.glue)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisibleSubsetWitness {
    pub subset: Vec<usize>,
    pub coefficients: Vec<u64>,
    pub quotient_class: Vec<i128>,
}

/// `d * sum_k k * chain[k-1]`.
pub fn weighted_chain_class(chain: &[Vec<i128>], d: i128) -> Result<Vec<i128>> {
    let n = chain
        .first()
        .ok_or_else(|| Error::Invalid("empty chain".into()))?
        .len();
    let mut out = vec![0i128; n];
    for (k, v) in chain.iter().enumerate() {
        if v.len() != n {
            return Err(Error::Dimension("chain vectors of different lengths".into()));
        }
        let w = (k as i128 + 1).checked_mul(d).ok_or(Error::Overflow)?;
        for (o, x) in out.iter_mut().zip(v) {
            *o = x
                .checked_mul(w)
                .and_then(|t| o.checked_add(t))
                .ok_or(Error::Overflow)?;
        }
    }
    Ok(out)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime: a^(p-2)
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Basis of the right kernel of `m` (rows of length `cols`) over `F_p`.
pub(crate) fn kernel_mod_p(rows: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p * p - f * a[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[row][free]) % p;
            }
            v
        })
        .collect()
}

fn signed_mod(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

/// Builds and integrally checks the witness for coefficient vector `d`.
pub(crate) fn witness_for(
    weights: &[Vec<i128>],
    d: &[u64],
    p: u64,
) -> Result<Option<DivisibleSubsetWitness>> {
    let n = weights.first().map_or(0, Vec::len);
    let mut sum = vec![0i128; n];
    for (w, &di) in weights.iter().zip(d) {
        if di == 0 {
            continue;
        }
        for (s, x) in sum.iter_mut().zip(w) {
            *s = x
                .checked_mul(di as i128)
                .and_then(|t| s.checked_add(t))
                .ok_or(Error::Overflow)?;
        }
    }
    let pi = p as i128;
    if sum.iter().any(|x| x % pi != 0) {
        return Ok(None);
    }
    let subset: Vec<usize> = (0..d.len()).filter(|&i| d[i] != 0).collect();
    Ok(Some(DivisibleSubsetWitness {
        coefficients: subset.iter().map(|&i| d[i]).collect(),
        subset,
        quotient_class: sum.iter().map(|x| x / pi).collect(),
    }))
}

fn is_normalised(d: &[u64]) -> bool {
    d.iter().find(|&&x| x != 0) == Some(&1)
}

/// All nonempty `p`-divisible chain subsets, one witness per projective
/// coefficient class, ordered by subset then coefficients. The search runs
/// over the mod-p kernel of the weighted classes and verifies each
/// candidate over the integers.
pub fn find_p_divisible_subsets(
    cfg: &ChainConfiguration,
    max_candidates: u128,
) -> Result<Vec<DivisibleSubsetWitness>> {
    let p = cfg.p;
    let c = cfg.c();
    if c == 0 {
        return Ok(Vec::new());
    }
    let weights: Vec<Vec<i128>> = cfg
        .chains
        .iter()
        .map(|ch| weighted_chain_class(ch, 1))
        .collect::<Result<_>>()?;
    let n = cfg.ambient.rank();
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|coord| weights.iter().map(|w| signed_mod(w[coord], p)).collect())
        .collect();
    let kernel = kernel_mod_p(&rows, c, p);
    let size = (p as u128)
        .checked_pow(kernel.len() as u32)
        .ok_or(Error::SearchTooLarge {
            size: u128::MAX,
            bound: max_candidates,
        })?;
    if size > max_candidates || size > u64::MAX as u128 {
        return Err(Error::SearchTooLarge {
            size,
            bound: max_candidates,
        });
    }
    let found = par::filter_map_range(size as u64, |mut idx| {
        let mut d = vec![0u64; c];
        for k in &kernel {
            let t = idx % p;
            idx /= p;
            for (di, ki) in d.iter_mut().zip(k) {
                *di = (*di + t * ki) % p;
            }
        }
        if !is_normalised(&d) {
            return None;
        }
        Some(witness_for(&weights, &d, p))
    });
    let mut out = Vec::with_capacity(found.len());
    for w in found {
        match w? {
            Some(w) => out.push(w),
            None => {
                return Err(Error::Invalid(
                    "mod-p kernel vector failed integral verification".into(),
                ))
            }
        }
    }
    out.sort_by(|a, b| (&a.subset, &a.coefficients).cmp(&(&b.subset, &b.coefficients)));
    Ok(out)
}

pub fn is_primitive_configuration(cfg: &ChainConfiguration, max_candidates: u128) -> Result<bool> {
    Ok(find_p_divisible_subsets(cfg, max_candidates)?.is_empty())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiniteIndexVerdict {
    Divisible,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteIndexCheck {
    pub index: u64,
    pub verdict: FiniteIndexVerdict,
}

/// Sufficient test for `d` to be divisible by an odd prime `p` in a
/// unimodular lattice: if `N` has finite index prime to `p` and `d` pairs
/// to multiples of `p` with `N`, then `d / p` lies in the dual, which is
/// the lattice itself. A failure proves nothing.
pub fn odd_p_divisibility_by_finite_index(
    d: &[i128],
    n_basis: &[Vec<i128>],
    ambient: &GramLattice,
    p: u64,
) -> Result<FiniteIndexCheck> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not an odd prime")));
    }
    let rank = ambient.rank();
    if d.len() != rank || n_basis.iter().any(|v| v.len() != rank) {
        return Err(Error::Dimension("vector length differs from ambient rank".into()));
    }
    if ambient.determinant()?.abs() != 1 {
        return Err(Error::Invalid("ambient lattice must be unimodular".into()));
    }
    if n_basis.is_empty() {
        return Err(Error::InfiniteIndex);
    }
    let snf = smith_normal_form(&IntMatrix::from_rows(n_basis)?)?;
    if snf.rank() < rank {
        return Err(Error::InfiniteIndex);
    }
    let index = snf
        .diagonal()
        .iter()
        .try_fold(1i128, |acc, &x| acc.checked_mul(x))
        .ok_or(Error::Overflow)?;
    let pi = p as i128;
    let mut pairs_ok = true;
    for n in n_basis {
        if ambient.gram.pair(d, n)? % pi != 0 {
            pairs_ok = false;
            break;
        }
    }
    let verdict = if index % pi != 0 && pairs_ok {
        FiniteIndexVerdict::Divisible
    } else {
        FiniteIndexVerdict::Inconclusive
    };
    Ok(FiniteIndexCheck {
        index: index as u64,
        verdict,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mod2Divisibility {
    #[serde(rename = "divisible_as_0")]
    DivisibleAs0,
    #[serde(rename = "divisible_as_kw")]
    DivisibleAsKW,
    #[serde(rename = "not_divisible")]
    NotDivisible,
}

/// Compares the mod-2 sum of `classes` with zero and with the torsion
/// class.
pub fn enriques_mod2_divisibility(classes: &[Vec<u8>], torsion_class: &[u8]) -> Result<Mod2Divisibility> {
    let n = torsion_class.len();
    let mut sum = vec![0u8; n];
    for v in classes {
        if v.len() != n {
            return Err(Error::Dimension("mod-2 vector length".into()));
        }
        for (s, x) in sum.iter_mut().zip(v) {
            *s ^= x & 1;
        }
    }
    Ok(if sum.iter().all(|&x| x == 0) {
        Mod2Divisibility::DivisibleAs0
    } else if sum.iter().zip(torsion_class).all(|(a, b)| *a == b & 1) {
        Mod2Divisibility::DivisibleAsKW
    } else {
        Mod2Divisibility::NotDivisible
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::catalog;

    fn unit(n: usize, i: usize) -> Vec<i128> {
        (0..n).map(|j| i128::from(i == j)).collect()
    }

    #[test]
    fn weighted_classes() {
        let e = |i| unit(3, i);
        assert_eq!(weighted_chain_class(&[e(0)], 1).unwrap(), vec![1, 0, 0]);
        assert_eq!(weighted_chain_class(&[e(0), e(1)], 1).unwrap(), vec![1, 2, 0]);
        assert_eq!(weighted_chain_class(&[e(0), e(1)], 2).unwrap(), vec![2, 4, 0]);
        assert!(weighted_chain_class(&[], 1).is_err());
        assert!(weighted_chain_class(&[e(0), vec![1]], 1).is_err());
    }

    #[test]
    fn kernel_mod_p_small() {
        // x + y + z = 0 over F_3
        let k = kernel_mod_p(&[vec![1, 1, 1]], 3, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v.iter().sum::<u64>() % 3, 0);
        }
        assert!(kernel_mod_p(&[vec![1, 0], vec![0, 1]], 2, 5).is_empty());
    }

    #[test]
    fn integral_basis_configuration_is_primitive() {
        // 4 A4 chains as part of the standard basis of 4*A4
        let ambient = catalog::lattice("A4").unwrap();
        let ambient = catalog::direct_sum(&[ambient.clone(), ambient.clone(), ambient.clone(), ambient])
            .unwrap();
        let chains = (0..4)
            .map(|i| (0..4).map(|k| unit(16, 4 * i + k)).collect())
            .collect();
        let cfg = ChainConfiguration::new(ambient, 5, chains).unwrap();
        assert!(is_primitive_configuration(&cfg, 1_000_000).unwrap());
        assert!(cfg.glue().unwrap().is_trivial());
    }

    #[test]
    fn single_a1_is_primitive() {
        let ambient = catalog::lattice("A1").unwrap();
        let cfg = ChainConfiguration::new(ambient, 2, vec![vec![vec![1]]]).unwrap();
        assert!(is_primitive_configuration(&cfg, 10).unwrap());
    }

    #[test]
    fn bad_chains_rejected() {
        let ambient = catalog::lattice("A2").unwrap();
        // two classes pairing as A2 but declared as two A1 chains
        let bad = ChainConfiguration::new(ambient.clone(), 2, vec![vec![unit(2, 0)], vec![unit(2, 1)]]);
        assert!(bad.is_err());
        assert!(ChainConfiguration::new(ambient, 4, vec![]).is_err());
    }

    #[test]
    fn trivially_divisible_class() {
        let ambient = catalog::lattice("ENRIQUES_FREE").unwrap();
        let basis: Vec<Vec<i128>> = (0..10).map(|i| unit(10, i)).collect();
        let d: Vec<i128> = (0..10).map(|i| 5 * (i as i128 - 3)).collect();
        let r = odd_p_divisibility_by_finite_index(&d, &basis, &ambient, 5).unwrap();
        assert_eq!(r.verdict, FiniteIndexVerdict::Divisible);
        assert_eq!(r.index, 1);
        let r = odd_p_divisibility_by_finite_index(&unit(10, 0), &basis, &ambient, 5).unwrap();
        assert_eq!(r.verdict, FiniteIndexVerdict::Inconclusive);
        let short: Vec<Vec<i128>> = basis[..9].to_vec();
        assert!(matches!(
            odd_p_divisibility_by_finite_index(&d, &short, &ambient, 5),
            Err(Error::InfiniteIndex)
        ));
    }

    #[test]
    fn mod2_criterion() {
        let kw = vec![0, 0, 1];
        use Mod2Divisibility::*;
        assert_eq!(enriques_mod2_divisibility(&[vec![1, 0, 0], vec![1, 0, 0]], &kw).unwrap(), DivisibleAs0);
        assert_eq!(enriques_mod2_divisibility(&[vec![1, 0, 0], vec![1, 0, 1]], &kw).unwrap(), DivisibleAsKW);
        assert_eq!(enriques_mod2_divisibility(&[vec![1, 0, 0]], &kw).unwrap(), NotDivisible);
    }
}
