//! Slow, independent reference computations used to cross-check the fast
//! paths in tests and in the acceptance suite.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::groups::FiniteGroupTable;
use crate::lattice::{catalog, overlattice, IntMatrix, SmithForm};
use crate::root_config::{weighted_chain_class, ChainConfiguration};
use crate::{is_prime, par, Error, Result};

type Q = Ratio<i128>;

/// Every normalised coefficient vector `d` (first nonzero entry 1) with
/// `sum d_i w_i` divisible by `p` coordinatewise, by exhausting `F_p^c`.
pub fn brute_force_divisible_subsets(cfg: &ChainConfiguration, max_candidates: u128) -> Result<Vec<Vec<u64>>> {
    let p = cfg.p;
    let c = cfg.c();
    let size = (p as u128).checked_pow(c as u32).unwrap_or(u128::MAX);
    if size > max_candidates || size > u64::MAX as u128 {
        return Err(Error::SearchTooLarge {
            size,
            bound: max_candidates,
        });
    }
    let weights: Vec<Vec<i128>> = cfg
        .chains
        .iter()
        .map(|ch| weighted_chain_class(ch, 1))
        .collect::<Result<_>>()?;
    let pi = p as i128;
    let rank = cfg.ambient.rank();
    let mut found = par::filter_map_range(size as u64, |mut idx| {
        let d: Vec<u64> = (0..c)
            .map(|_| {
                let t = idx % p;
                idx /= p;
                t
            })
            .collect();
        if d.iter().find(|&&x| x != 0) != Some(&1) {
            return None;
        }
        (0..rank)
            .all(|k| {
                let s: i128 = weights.iter().zip(&d).map(|(w, &di)| w[k] * di as i128).sum();
                s.rem_euclid(pi) == 0
            })
            .then_some(d)
    });
    found.sort();
    Ok(found)
}

type BigMatrix = Vec<Vec<BigInt>>;

fn big(m: &IntMatrix) -> BigMatrix {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect()
}

fn big_mul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

/// Fraction-free elimination in arbitrary precision.
fn big_det(m: &BigMatrix) -> BigInt {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

/// Checks a Smith form exactly: `p * m * q = d`, `d` diagonal with
/// nonnegative entries each dividing the next, `p` and `q` unimodular and
/// `q_inv` the inverse of `q`.
pub fn verify_smith_form(m: &IntMatrix, s: &SmithForm) -> bool {
    let d = s.diagonal();
    let diagonal = (0..s.d.nrows()).all(|i| (0..s.d.ncols()).all(|j| i == j || s.d[(i, j)] == 0));
    let chain = d.iter().all(|&x| x >= 0)
        && d.windows(2).all(|w| if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 });
    let unit = |x: &IntMatrix| big_det(&big(x)).abs().is_one();
    let identity = big(&IntMatrix::identity(s.q.nrows()));
    diagonal
        && chain
        && big_mul(&big_mul(&big(&s.p), &big(m)), &big(&s.q)) == big(&s.d)
        && unit(&s.p)
        && unit(&s.q)
        && big_mul(&big(&s.q), &big(&s.q_inv)) == identity
}

/// Null space of a square integer matrix over `Q`, in reduced form: one
/// basis vector per free column, equal to 1 there and 0 on the other free
/// columns.
#[derive(Clone, Debug)]
pub struct RationalNullspace {
    pub free: Vec<usize>,
    pub basis: Vec<Vec<Q>>,
}

impl RationalNullspace {
    pub fn of(m: &IntMatrix) -> Self {
        let (rows, cols) = (m.nrows(), m.ncols());
        let mut a: Vec<Vec<Q>> = m
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(Q::from_integer).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..cols {
            let Some(piv) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(r, piv);
            let lead = a[r][col];
            for x in a[r].iter_mut() {
                *x /= lead;
            }
            for i in 0..rows {
                if i != r && !a[i][col].is_zero() {
                    let f = a[i][col];
                    for j in 0..cols {
                        let t = a[r][j] * f;
                        a[i][j] -= t;
                    }
                }
            }
            pivots.push(col);
            r += 1;
            if r == rows {
                break;
            }
        }
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); cols];
                v[f] = Q::one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -a[i][f];
                }
                v
            })
            .collect();
        RationalNullspace { free, basis }
    }

    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// Integer form of the basis: each vector scaled by a common
    /// denominator `l`, so that `v` lies in the null space iff
    /// `l * v = sum_f v_f * scaled_f`.
    pub fn integral(&self) -> IntegralNullspace {
        let l = self
            .basis
            .iter()
            .flatten()
            .fold(1i128, |acc, q| num_integer::lcm(acc, *q.denom()));
        IntegralNullspace {
            free: self.free.clone(),
            scale: l,
            basis: self
                .basis
                .iter()
                .map(|b| b.iter().map(|q| (*q * Q::from_integer(l)).to_integer()).collect())
                .collect(),
        }
    }

    /// A vector lies in the null space iff it equals the combination of the
    /// basis read off its free coordinates.
    pub fn contains(&self, v: &[i128]) -> bool {
        self.integral().contains(v)
    }
}

#[derive(Clone, Debug)]
pub struct IntegralNullspace {
    pub free: Vec<usize>,
    pub scale: i128,
    pub basis: Vec<Vec<i128>>,
}

impl IntegralNullspace {
    pub fn contains(&self, v: &[i128]) -> bool {
        (0..v.len()).all(|c| {
            let s: i128 = self.free.iter().zip(&self.basis).map(|(&f, b)| v[f] * b[c]).sum();
            s == self.scale * v[c]
        })
    }
}

/// Every vector of `{-1, 0, 1}^n`, as an iterator over base-3 digits.
pub fn ternary_cube(n: usize) -> impl Iterator<Item = Vec<i128>> {
    (0..3u64.pow(n as u32)).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let t = (idx % 3) as i128 - 1;
                idx /= 3;
                t
            })
            .collect()
    })
}

fn identity_of(g: &FiniteGroupTable) -> usize {
    (0..g.order()).find(|&e| g.mul(e, e) == e).unwrap_or(0)
}

/// Normal subgroups of the given index, found by testing every subset of
/// the right size that contains the identity.
pub fn normal_subgroups_by_subsets(g: &FiniteGroupTable, index: usize) -> usize {
    let n = g.order();
    if index == 0 || !n.is_multiple_of(index) {
        return 0;
    }
    let k = n / index;
    let e = identity_of(g);
    let others: Vec<usize> = (0..n).filter(|&x| x != e).collect();
    let mut count = 0;
    let mut pick: Vec<usize> = (0..k - 1).collect();
    loop {
        let mut member = vec![false; n];
        member[e] = true;
        for &i in &pick {
            member[others[i]] = true;
        }
        let elems: Vec<usize> = (0..n).filter(|&x| member[x]).collect();
        let closed = elems.iter().all(|&a| elems.iter().all(|&b| member[g.mul(a, b)]));
        let normal = closed && (0..n).all(|x| elems.iter().all(|&h| member[g.mul(g.mul(x, h), g.inverse(x))]));
        if normal {
            count += 1;
        }
        if !next_combination(&mut pick, others.len()) {
            return count;
        }
    }
}

fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Cyclic-quotient cover equation `p(24 - cp) + c` solved by plain search.
pub fn cover_equation_search(max_prime: u64) -> Vec<(u64, u32, &'static str)> {
    let mut out = Vec::new();
    for p in (2..=max_prime).filter(|&p| is_prime(p)) {
        for c in 1..=19u32 {
            if u64::from(c) * (p - 1) > 19 {
                continue;
            }
            match p as i64 * (24 - i64::from(c) * p as i64) + i64::from(c) {
                0 => out.push((p, c, "ab")),
                24 => out.push((p, c, "K3")),
                _ => {}
            }
        }
    }
    out
}

/// A chain configuration glued by a random self-orthogonal code, together
/// with the full code it generates.
#[derive(Clone, Debug)]
pub struct RandomConfiguration {
    pub cfg: ChainConfiguration,
    pub code: Vec<Vec<u64>>,
}

fn dot_mod(a: &[u64], b: &[u64], p: u64) -> u64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<u64>() % p
}

fn span_mod_p(gens: &[Vec<u64>], c: usize, p: u64) -> Vec<Vec<u64>> {
    let mut words = vec![vec![0u64; c]];
    for g in gens {
        if words.contains(g) {
            continue;
        }
        let mut next = Vec::with_capacity(words.len() * p as usize);
        for t in 0..p {
            for w in &words {
                next.push(w.iter().zip(g).map(|(a, b)| (a + t * b) % p).collect());
            }
        }
        next.sort();
        next.dedup();
        words = next;
    }
    words.sort();
    words
}

/// `c` chains of type `A_{p-1}` (total rank at most `max_rank`) inside the
/// overlattice defined by a random code `C` with `p | d.d'` for all
/// `d, d'` in `C`, which is exactly the integrality condition.
pub fn random_configuration<R: Rng>(rng: &mut R, max_rank: usize) -> Result<RandomConfiguration> {
    let primes: Vec<u64> = [2u64, 3, 5, 7].into_iter().filter(|&p| (p as usize) <= max_rank + 1).collect();
    let p = primes[rng.gen_range(0..primes.len())];
    let len = (p - 1) as usize;
    let c = rng.gen_range(1..=max_rank / len);
    let mut gens: Vec<Vec<u64>> = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let d: Vec<u64> = (0..c).map(|_| rng.gen_range(0..p)).collect();
        if dot_mod(&d, &d, p) == 0 && gens.iter().all(|g| dot_mod(g, &d, p) == 0) {
            gens.push(d);
        }
    }
    let code = span_mod_p(&gens, c, p);
    let root = (1..c).fold(catalog::a(len), |m, _| m.direct_sum(&catalog::a(len)));
    let glue: Vec<Vec<i128>> = gens
        .iter()
        .map(|d| {
            (0..c * len)
                .map(|i| d[i / len] as i128 * (i % len + 1) as i128)
                .collect()
        })
        .collect();
    let o = overlattice(&root, &glue, p as i128)?;
    let chains = (0..c)
        .map(|i| (0..len).map(|k| o.old_coords[i * len + k].clone()).collect())
        .collect();
    Ok(RandomConfiguration {
        cfg: ChainConfiguration::new(o.lattice, p, chains)?,
        code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{kummer_lattice, AffineSpaceModel};
    use crate::groups::catalog_group;
    use rand::SeedableRng;

    #[test]
    fn kummer_brute_force_counts() {
        let (_, cfg) = kummer_lattice().unwrap();
        let found = brute_force_divisible_subsets(&cfg, 1 << 20).unwrap();
        let weights: Vec<usize> = found.iter().map(|d| d.iter().filter(|&&x| x != 0).count()).collect();
        assert_eq!(weights.iter().filter(|&&w| w == 8).count(), 30);
        assert_eq!(weights.iter().filter(|&&w| w == 16).count(), 1);
        assert_eq!(found.len(), 31);
        assert_eq!(AffineSpaceModel::kummer().len(), 16);
    }

    #[test]
    fn smith_forms_verify() {
        let m = IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
        let s = crate::lattice::smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal(), vec![2, 6, 12]);
        assert!(verify_smith_form(&m, &s));
        let mut wrong = s.clone();
        wrong.d[(2, 2)] = 24;
        assert!(!verify_smith_form(&m, &wrong));
    }

    #[test]
    fn nullspace_of_fibre_system() {
        let m = IntMatrix::from_rows(&[vec![-2i64, 2], vec![2, -2]]).unwrap();
        let ns = RationalNullspace::of(&m);
        assert_eq!(ns.dimension(), 1);
        assert!(ns.contains(&[1, 1]));
        assert!(!ns.contains(&[1, 0]));
        assert_eq!(ternary_cube(3).count(), 27);
    }

    #[test]
    fn subset_counts_match_known_values() {
        assert_eq!(normal_subgroups_by_subsets(&catalog_group("C2^3").unwrap(), 2), 7);
        assert_eq!(normal_subgroups_by_subsets(&catalog_group("S3").unwrap(), 2), 1);
        assert_eq!(normal_subgroups_by_subsets(&catalog_group("S3").unwrap(), 3), 0);
    }

    #[test]
    fn random_configurations_are_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let r = random_configuration(&mut rng, 8).unwrap();
            assert!(r.cfg.ambient.rank() <= 8);
            assert_eq!(r.code.len() as u64 % r.cfg.p, if r.code.len() == 1 { 1 } else { 0 });
        }
    }
}
