use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::lattice::AbelianInvariants;
use crate::{Error, Result};

/// Finite group given by its full multiplication table; element 0 is the
/// identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    pub name: Option<String>,
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    generators: Vec<usize>,
}

/// Set of group elements stored as a bit vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementSet(Vec<u64>);

impl ElementSet {
    pub fn empty(order: usize) -> Self {
        ElementSet(vec![0; order.div_ceil(64)])
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn insert(&mut self, x: usize) -> bool {
        let fresh = !self.contains(x);
        self.0[x / 64] |= 1 << (x % 64);
        fresh
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn elements(&self) -> Vec<usize> {
        (0..self.0.len() * 64).filter(|&x| self.contains(x)).collect()
    }
}

impl FiniteGroupTable {
    /// Validates identity, closure, inverses and associativity.
    pub fn from_table(rows: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::Invalid("empty group table".into()));
        }
        if rows.iter().any(|r| r.len() != order || r.iter().any(|&x| x >= order)) {
            return Err(Error::Dimension("group table must be square with entries below the order".into()));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let g = Self::assemble(order, table, generators)?;
        if !g.check_axioms() {
            return Err(Error::Invalid("table violates the group axioms".into()));
        }
        Ok(g)
    }

    pub(crate) fn assemble(order: usize, table: Vec<usize>, generators: Vec<usize>) -> Result<Self> {
        let mut inverses = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverses[a] = b;
                    break;
                }
            }
        }
        if inverses.contains(&usize::MAX) {
            return Err(Error::Invalid("element without inverse".into()));
        }
        Ok(FiniteGroupTable {
            name: None,
            order,
            table,
            inverses,
            generators,
        })
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn check_axioms(&self) -> bool {
        let n = self.order;
        let latin = (0..n).all(|a| {
            let mut row = ElementSet::empty(n);
            let mut col = ElementSet::empty(n);
            (0..n).all(|b| row.insert(self.mul(a, b)) && col.insert(self.mul(b, a)))
        });
        let identity = (0..n).all(|a| self.mul(0, a) == a && self.mul(a, 0) == a);
        let inverses = (0..n).all(|a| self.mul(a, self.inverse(a)) == 0 && self.mul(self.inverse(a), a) == 0);
        latin
            && identity
            && inverses
            && crate::par::all(&(0..n).collect::<Vec<_>>(), |&a| {
                (0..n).all(|b| {
                    let ab = self.mul(a, b);
                    (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
                })
            })
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn power(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Counts of elements by order, as a sorted map.
    pub fn order_statistics(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for a in 0..self.order {
            *m.entry(self.element_order(a)).or_insert(0) += 1;
        }
        m
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> ElementSet {
        let mut set = ElementSet::empty(self.order);
        set.insert(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    /// Every subgroup, smallest order first.
    pub fn subgroups(&self) -> Vec<ElementSet> {
        let trivial = self.closure(&[]);
        let mut seen: BTreeSet<ElementSet> = BTreeSet::from([trivial.clone()]);
        let mut frontier = vec![trivial];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                let elems = h.elements();
                for g in 0..self.order {
                    if h.contains(g) {
                        continue;
                    }
                    let mut gens = elems.clone();
                    gens.push(g);
                    let k = self.closure(&gens);
                    if seen.insert(k.clone()) {
                        next.push(k);
                    }
                }
            }
            frontier = next;
        }
        let mut all: Vec<ElementSet> = seen.into_iter().collect();
        all.sort_by_key(|s| (s.len(), s.elements()));
        all
    }

    pub fn is_normal(&self, h: &ElementSet) -> bool {
        let elems = h.elements();
        (0..self.order).all(|g| {
            let gi = self.inverse(g);
            elems.iter().all(|&x| h.contains(self.mul(self.mul(gi, x), g)))
        })
    }

    pub fn normal_subgroups(&self) -> Vec<ElementSet> {
        self.subgroups().into_iter().filter(|h| self.is_normal(h)).collect()
    }

    /// Table of the subgroup `h`, elements renumbered in increasing order.
    pub fn subgroup_table(&self, h: &ElementSet) -> FiniteGroupTable {
        let elems = h.elements();
        let pos: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in &elems {
            for &b in &elems {
                table.push(pos[&self.mul(a, b)]);
            }
        }
        let generators = minimal_generators_of(n, &table);
        Self::assemble(n, table, generators).expect("subgroup of a valid group")
    }

    /// Greedy generating set, largest element orders first.
    pub fn small_generating_set(&self) -> Vec<usize> {
        minimal_generators_of(self.order, &self.table)
    }

    /// Invariant factors of an abelian group, `None` if nonabelian.
    pub fn abelian_invariants(&self) -> Option<AbelianInvariants> {
        if !self.is_abelian() {
            return None;
        }
        let mut parts_by_prime: Vec<Vec<u64>> = Vec::new();
        let mut n = self.order as u64;
        let mut p = 2u64;
        while n > 1 {
            if n.is_multiple_of(p) {
                while n.is_multiple_of(p) {
                    n /= p;
                }
                // rank_k = number of cyclic factors of order >= p^k
                let count = |k: u32| -> u64 {
                    let e = p.pow(k) as usize;
                    (0..self.order).filter(|&a| self.power(a, e) == 0).count() as u64
                };
                let log = |mut x: u64| {
                    let mut l = 0u32;
                    while x > 1 {
                        x /= p;
                        l += 1;
                    }
                    l
                };
                let mut parts = Vec::new();
                let mut k = 1;
                let mut prev = 0;
                loop {
                    let lk = log(count(k));
                    if lk == prev {
                        break;
                    }
                    let ge_k = lk - prev;
                    prev = lk;
                    parts.push(ge_k);
                    k += 1;
                }
                // parts[k-1] = #factors with exponent >= k; convert to exponents
                let num = parts.first().copied().unwrap_or(0);
                let mut exps = Vec::new();
                for i in 0..num {
                    exps.push(parts.iter().filter(|&&c| c > i).count() as u32);
                }
                parts_by_prime.push(exps.into_iter().map(|e| p.pow(e)).collect());
            }
            p += 1;
        }
        let len = parts_by_prime.iter().map(Vec::len).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..len)
            .map(|i| parts_by_prime.iter().map(|v| v.get(i).copied().unwrap_or(1)).product())
            .collect();
        factors.reverse();
        Some(AbelianInvariants { factors })
    }

    /// Renumbers elements by `perm` (old index -> new index); `perm[0]` must be 0.
    pub fn relabel(&self, perm: &[usize]) -> Result<FiniteGroupTable> {
        let n = self.order;
        let mut seen = ElementSet::empty(n);
        if perm.len() != n || perm[0] != 0 || !perm.iter().all(|&x| x < n && seen.insert(x)) {
            return Err(Error::Invalid("relabelling must be a permutation fixing 0".into()));
        }
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        let generators = self.generators.iter().map(|&g| perm[g]).collect();
        let mut g = Self::assemble(n, table, generators)?;
        g.name = self.name.clone();
        Ok(g)
    }

    pub fn direct_product(&self, other: &FiniteGroupTable) -> FiniteGroupTable {
        let m = other.order;
        let n = self.order * m;
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(self.mul(a / m, b / m) * m + other.mul(a % m, b % m));
            }
        }
        let mut generators: Vec<usize> = self.generators.iter().map(|&g| g * m).collect();
        generators.extend(other.generators.iter().copied());
        Self::assemble(n, table, generators).expect("product of valid groups")
    }

    /// `N ⋊ Q` where `action[q]` is the automorphism of `N` by which `q` acts.
    pub fn semidirect_product(
        n: &FiniteGroupTable,
        q: &FiniteGroupTable,
        action: &[Vec<usize>],
    ) -> Result<FiniteGroupTable> {
        if action.len() != q.order || action.iter().any(|a| a.len() != n.order) {
            return Err(Error::Dimension("action must give a map of N for every element of Q".into()));
        }
        let (nn, nq) = (n.order, q.order);
        let size = nn * nq;
        let mut table = Vec::with_capacity(size * size);
        for a in 0..size {
            let (n1, q1) = (a / nq, a % nq);
            for b in 0..size {
                let (n2, q2) = (b / nq, b % nq);
                table.push(n.mul(n1, action[q1][n2]) * nq + q.mul(q1, q2));
            }
        }
        let mut generators: Vec<usize> = n.generators.iter().map(|&g| g * nq).collect();
        generators.extend(q.generators.iter().copied());
        let g = Self::assemble(size, table, generators)?;
        if !g.check_axioms() {
            return Err(Error::Invalid("action is not by automorphisms".into()));
        }
        Ok(g)
    }
}

fn minimal_generators_of(order: usize, table: &[usize]) -> Vec<usize> {
    let mul = |a: usize, b: usize| table[a * order + b];
    let elem_order = |a: usize| {
        let (mut x, mut k) = (a, 1);
        while x != 0 {
            x = mul(x, a);
            k += 1;
        }
        k
    };
    let mut gens = Vec::new();
    let mut set = ElementSet::empty(order);
    set.insert(0);
    let mut by_order: Vec<usize> = (1..order).collect();
    by_order.sort_by_key(|&a| (std::cmp::Reverse(elem_order(a)), a));
    while set.len() < order {
        let g = *by_order.iter().find(|&&a| !set.contains(a)).expect("element outside subgroup");
        gens.push(g);
        set = ElementSet::empty(order);
        set.insert(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &h in &gens {
                let y = mul(x, h);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    gens
}

/// Extends generator images to a homomorphism `g -> h`, if one exists.
pub fn extend_homomorphism(
    g: &FiniteGroupTable,
    gens: &[usize],
    h: &FiniteGroupTable,
    images: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; g.order];
    map[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = h.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    if map.contains(&usize::MAX) {
        return None;
    }
    Some(map)
}

/// Isomorphism `g -> h` as an element map, found by backtracking over
/// images of a small generating set of `g`.
pub fn find_isomorphism(g: &FiniteGroupTable, h: &FiniteGroupTable) -> Option<Vec<usize>> {
    if g.order != h.order
        || g.is_abelian() != h.is_abelian()
        || g.order_statistics() != h.order_statistics()
    {
        return None;
    }
    let gens = g.small_generating_set();
    let orders: Vec<usize> = gens.iter().map(|&x| g.element_order(x)).collect();
    let pools: Vec<Vec<usize>> = orders
        .iter()
        .map(|&o| (0..h.order).filter(|&y| h.element_order(y) == o).collect())
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    search(g, h, &gens, &pools, &mut images)
}

fn search(
    g: &FiniteGroupTable,
    h: &FiniteGroupTable,
    gens: &[usize],
    pools: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let k = images.len();
    if k == gens.len() {
        let map = extend_homomorphism(g, gens, h, images)?;
        let mut seen = ElementSet::empty(h.order);
        return map.iter().all(|&y| seen.insert(y)).then_some(map);
    }
    for &y in &pools[k] {
        images.push(y);
        if partial_injective(g, h, &gens[..=k], images) {
            if let Some(m) = search(g, h, gens, pools, images) {
                return Some(m);
            }
        }
        images.pop();
    }
    None
}

/// Whether the partial assignment extends to an injective homomorphism on
/// the subgroup generated so far.
fn partial_injective(g: &FiniteGroupTable, h: &FiniteGroupTable, gens: &[usize], images: &[usize]) -> bool {
    let mut map: BTreeMap<usize, usize> = BTreeMap::from([(0, 0)]);
    let mut used = ElementSet::empty(h.order);
    used.insert(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let fx = map[&x];
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = h.mul(fx, t);
            match map.get(&y) {
                Some(&v) if v != fy => return false,
                Some(_) => {}
                None => {
                    if !used.insert(fy) {
                        return false;
                    }
                    map.insert(y, fy);
                    queue.push_back(y);
                }
            }
        }
    }
    true
}

pub fn is_isomorphic(g: &FiniteGroupTable, h: &FiniteGroupTable) -> bool {
    find_isomorphism(g, h).is_some()
}

pub fn count_normal_subgroups(g: &FiniteGroupTable, index: usize) -> usize {
    if index == 0 || !g.order.is_multiple_of(index) {
        return 0;
    }
    let target = g.order / index;
    g.normal_subgroups().iter().filter(|h| h.len() == target).count()
}

pub fn count_normal_subgroups_isomorphic_to(g: &FiniteGroupTable, pattern: &FiniteGroupTable) -> usize {
    g.normal_subgroups()
        .iter()
        .filter(|h| h.len() == pattern.order && is_isomorphic(&g.subgroup_table(h), pattern))
        .count()
}

impl fmt::Debug for FiniteGroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroupTable")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FiniteGroupTable {
        let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroupTable::from_table(rows, vec![1 % n]).unwrap()
    }

    #[test]
    fn cyclic_basics() {
        let c6 = cyclic(6);
        assert!(c6.is_abelian());
        assert_eq!(c6.element_order(1), 6);
        assert_eq!(c6.element_order(2), 3);
        assert_eq!(c6.subgroups().len(), 4);
        assert_eq!(count_normal_subgroups(&c6, 2), 1);
        assert_eq!(c6.abelian_invariants().unwrap().factors, vec![6]);
    }

    #[test]
    fn product_invariants() {
        let g = cyclic(4).direct_product(&cyclic(2)).direct_product(&cyclic(2));
        assert!(g.check_axioms());
        assert_eq!(g.abelian_invariants().unwrap().factors, vec![2, 2, 4]);
        let h = cyclic(6).direct_product(&cyclic(3));
        assert_eq!(h.abelian_invariants().unwrap().factors, vec![3, 6]);
        assert!(is_isomorphic(&cyclic(6), &cyclic(3).direct_product(&cyclic(2))));
        assert!(!is_isomorphic(&cyclic(4), &cyclic(2).direct_product(&cyclic(2))));
    }

    #[test]
    fn relabel_preserves_isomorphism_type() {
        let g = cyclic(4).direct_product(&cyclic(2));
        let perm = vec![0, 7, 6, 5, 4, 3, 2, 1];
        let h = g.relabel(&perm).unwrap();
        assert!(h.check_axioms());
        assert!(is_isomorphic(&g, &h));
        assert!(g.relabel(&[1, 0, 2, 3, 4, 5, 6, 7]).is_err());
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(FiniteGroupTable::from_table(vec![vec![0, 1], vec![1, 1]], vec![]).is_err());
        assert!(FiniteGroupTable::from_table(vec![], vec![]).is_err());
    }

    #[test]
    fn semidirect_dihedral() {
        let c3 = cyclic(3);
        let c2 = cyclic(2);
        let action = vec![vec![0, 1, 2], vec![0, 2, 1]];
        let s3 = FiniteGroupTable::semidirect_product(&c3, &c2, &action).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(count_normal_subgroups(&s3, 2), 1);
        assert_eq!(count_normal_subgroups(&s3, 3), 0);
        let bad = vec![vec![0, 1, 2], vec![0, 1, 1]];
        assert!(FiniteGroupTable::semidirect_product(&c3, &c2, &bad).is_err());
    }
}
