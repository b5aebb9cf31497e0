use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::Serialize;

use super::table::{table, Pi1Descriptor, TableRow};
use super::{
    abelian_branch_count, is_admissible, k3_branch_count, transport_singularities, DFact, DuVal, SingY,
    SurfaceKind,
};
use crate::geometry::{affine_codewords, AffineSpaceModel};
use crate::groups::catalog;
use crate::lattice::AbelianInvariants;
use crate::{Error, Result};

/// Rank of the K3 lattice.
const K3_RANK: u64 = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct K3Input {
    pub p: u64,
    pub c: u32,
    /// `None` tries every fact and succeeds only if exactly one row fits.
    pub fact: Option<DFact>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K3Classification {
    pub row: TableRow,
    pub fact: DFact,
    pub pi1: Pi1Descriptor,
    pub sing_y: SingY,
    /// Degrees of the successive cyclic covers.
    pub cover_degrees: Vec<u64>,
}

/// Derived data for one fact, before row lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct K3Derivation {
    pub pi1: Pi1Descriptor,
    pub sing_y: SingY,
    pub cover_degrees: Vec<u64>,
}

/// Minimum, over all `c`-subsets of the 16 points of `F_2^4`, of the
/// dimension of the affine-function code words supported inside the subset.
pub fn kummer_min_code_dimension(c: u32) -> u32 {
    static DIMS: OnceLock<Vec<u32>> = OnceLock::new();
    let dims = DIMS.get_or_init(|| {
        let space = AffineSpaceModel::kummer();
        let words: Vec<u32> = affine_codewords(&space)
            .iter()
            .filter(|w| w.iter().any(|&x| x != 0))
            .map(|w| w.iter().enumerate().filter(|(_, &x)| x != 0).fold(0u32, |m, (i, _)| m | 1 << i))
            .collect();
        let mut dims = vec![u32::MAX; 17];
        for m in 0u32..1 << 16 {
            let inside = words.iter().filter(|&&w| w & !m == 0).count() as u32 + 1;
            let slot = &mut dims[m.count_ones() as usize];
            *slot = (*slot).min(inside.trailing_zeros());
        }
        dims
    });
    dims.get(c as usize).copied().unwrap_or(0)
}

/// Sizes `u_k` of the smallest union of `k` independent branch sets: each
/// further cover in a tower of degree-`p` covers is branched over `h` points
/// upstairs, i.e. `h / p^(k-1)` new points downstairs.
fn min_union_sizes(p: u64, h: u32) -> Vec<u32> {
    let mut sizes = vec![h];
    let mut step = u64::from(h);
    loop {
        if step % p != 0 {
            break;
        }
        step /= p;
        let next = sizes.last().copied().unwrap_or(0) + step as u32;
        sizes.push(next);
    }
    sizes
}

/// Possible ranks `k` of the divisible code for a nonprimitive configuration.
fn feasible_ranks(p: u64, c: u32, h: u32) -> Vec<u32> {
    let lower = if p == 2 { kummer_min_code_dimension(c).max(1) } else { 1 };
    min_union_sizes(p, h)
        .iter()
        .zip(1u32..)
        .filter(|(&u, k)| u <= c && *k >= lower)
        .map(|(_, k)| k)
        .collect()
}

fn elementary_abelian(p: u64, k: u32) -> Result<Pi1Descriptor> {
    let target = AbelianInvariants {
        factors: vec![p; k as usize],
    };
    catalog()
        .iter()
        .find(|g| g.abelian_invariants().as_ref() == Some(&target))
        .map(Pi1Descriptor::finite)
        .ok_or_else(|| Error::UnknownName(format!("elementary abelian group of order {p}^{k}")))
}

fn check_fact_position(p: u64, c: u32, fact: DFact) -> Result<()> {
    let ok = match fact {
        DFact::Primitive | DFact::Nonprimitive => true,
        DFact::OneH | DFact::TwoH => (p, c) == (2, 12),
        DFact::ThreeH => (p, c) == (2, 14),
        DFact::OneR | DFact::TwoR => (p, c) == (3, 8),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InconsistentFacts(format!("`{fact}` does not apply to p = {p}, c = {c}")))
    }
}

pub(crate) fn derive_k3(p: u64, c: u32, fact: DFact) -> Result<K3Derivation> {
    if !is_admissible(SurfaceKind::K3, p, c) {
        return Err(Error::InconsistentFacts(format!(
            "{c} points of type A{} do not fit on a K3 surface (need c(p-1) <= 19, and c <= 16 when p = 2)",
            p - 1
        )));
    }
    check_fact_position(p, c, fact)?;
    if fact == DFact::Primitive {
        if u64::from(c) * p > K3_RANK {
            return Err(Error::InconsistentFacts(format!(
                "a primitive {c}A{} has discriminant length {c}, larger than the rank {} of its orthogonal complement",
                p - 1,
                K3_RANK - u64::from(c) * (p - 1)
            )));
        }
        return Ok(K3Derivation {
            pi1: elementary_abelian(p, 0)?,
            sing_y: SingY::SameAsX,
            cover_degrees: Vec::new(),
        });
    }
    let h = k3_branch_count(p).ok_or_else(|| {
        Error::InconsistentFacts(format!("no cyclic degree-{p} cover of a K3 surface exists, so A{} points are never {p}-divisible", p - 1))
    })?;
    if c < h {
        return Err(Error::InconsistentFacts(format!(
            "a {p}-divisible set needs {h} points of type A{}, only {c} given",
            p - 1
        )));
    }
    if abelian_branch_count(p) == Some(c) {
        if fact != DFact::Nonprimitive {
            return Err(Error::InconsistentFacts(format!("`{fact}` does not apply to p = {p}, c = {c}")));
        }
        return Ok(K3Derivation {
            pi1: Pi1Descriptor::Infinite {
                kernel: "Z^4".into(),
                kernel_alt: Some("Z^2".into()),
                quotient: format!("C{p}"),
            },
            sing_y: SingY::AffinePlane,
            cover_degrees: vec![p],
        });
    }
    let feasible = feasible_ranks(p, c, h);
    let wanted: Vec<u32> = match fact {
        DFact::OneH | DFact::OneR => vec![1],
        DFact::TwoH | DFact::TwoR => vec![2],
        DFact::ThreeH => vec![3],
        _ => feasible.clone(),
    };
    let ranks: Vec<u32> = wanted.into_iter().filter(|k| feasible.contains(k)).collect();
    let k = match ranks.as_slice() {
        [] => {
            return Err(Error::InconsistentFacts(format!(
                "`{fact}` is impossible for p = {p}, c = {c}"
            )))
        }
        [k] => *k,
        _ => {
            return Err(Error::Underdetermined(format!(
                "p = {p}, c = {c} with `{fact}` allows divisible codes of rank {ranks:?}"
            )))
        }
    };
    let mut sing = vec![DuVal { rank: (p - 1) as u32 }; c as usize];
    for _ in 0..k {
        if sing.len() < h as usize {
            return Err(Error::InconsistentFacts(format!(
                "cover tower for p = {p}, c = {c} runs out of branch points"
            )));
        }
        let ramified: Vec<usize> = (0..h as usize).collect();
        sing = transport_singularities(&sing, &ramified, p)?;
    }
    Ok(K3Derivation {
        pi1: elementary_abelian(p, k)?,
        sing_y: SingY::points(sing.len() as u32, (p - 1) as u32),
        cover_degrees: vec![p; k as usize],
    })
}

fn matching_rows(p: u64, c: u32, d: &K3Derivation) -> Result<Vec<&'static TableRow>> {
    let mut out = Vec::new();
    for r in table(1)? {
        if !r.covers(p, c) || !r.pi1.matches(&d.pi1)? {
            continue;
        }
        let printed = match &r.sing_y {
            Some(s) => s.evaluate(c)?,
            None => continue,
        };
        if printed == d.sing_y {
            out.push(r);
        }
    }
    Ok(out)
}

/// Selects the unique row of the K3 table consistent with the input.
pub fn k3_classify(input: &K3Input) -> Result<K3Classification> {
    let facts: Vec<DFact> = match input.fact {
        Some(f) => vec![f],
        None => DFact::ALL.to_vec(),
    };
    let mut found: Vec<K3Classification> = Vec::new();
    let mut last_err = None;
    for fact in facts {
        let d = match derive_k3(input.p, input.c, fact) {
            Ok(d) => d,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let rows = matching_rows(input.p, input.c, &d)?;
        if rows.is_empty() {
            last_err = Some(Error::InconsistentFacts(format!(
                "derived pi1 {} with {} matches no table row",
                d.pi1, d.sing_y
            )));
        }
        for r in rows {
            found.push(K3Classification {
                row: r.clone(),
                fact,
                pi1: d.pi1.clone(),
                sing_y: d.sing_y,
                cover_degrees: d.cover_degrees.clone(),
            });
        }
    }
    let numbers: BTreeSet<u32> = found.iter().map(|f| f.row.number).collect();
    match numbers.len() {
        0 => Err(match (input.fact, last_err) {
            (Some(_), Some(e)) => e,
            (_, e) => Error::InconsistentFacts(format!(
                "no fact is consistent with p = {}, c = {}{}",
                input.p,
                input.c,
                e.map(|e| format!(" ({e})")).unwrap_or_default()
            )),
        }),
        1 => Ok(found.swap_remove(0)),
        _ => Err(Error::Underdetermined(format!("rows {numbers:?} all fit"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classify(p: u64, c: u32, fact: Option<DFact>) -> Result<K3Classification> {
        k3_classify(&K3Input { p, c, fact })
    }

    #[test]
    fn kummer_dimensions() {
        let dims: Vec<u32> = (8..=16).map(kummer_min_code_dimension).collect();
        assert_eq!(dims, [0, 0, 0, 0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn union_sizes() {
        assert_eq!(min_union_sizes(2, 8), [8, 12, 14, 15]);
        assert_eq!(min_union_sizes(3, 6), [6, 8]);
        assert_eq!(min_union_sizes(5, 4), [4]);
    }

    #[test]
    fn examples() {
        let r = classify(2, 13, Some(DFact::Nonprimitive)).unwrap();
        assert_eq!(r.row.number, 5);
        assert_eq!(r.sing_y, SingY::Points { count: 4, rank: 1 });
        assert_eq!(classify(3, 9, None).unwrap().row.number, 13);
        assert_eq!(classify(11, 1, None).unwrap().row.number, 18);
        assert_eq!(classify(2, 16, Some(DFact::Nonprimitive)).unwrap().row.number, 8);
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        assert!(matches!(classify(2, 16, Some(DFact::Primitive)), Err(Error::InconsistentFacts(_))));
        assert!(matches!(classify(2, 12, Some(DFact::Nonprimitive)), Err(Error::Underdetermined(_))));
        assert!(matches!(classify(2, 7, Some(DFact::Nonprimitive)), Err(Error::InconsistentFacts(_))));
        assert!(matches!(classify(3, 8, Some(DFact::OneH)), Err(Error::InconsistentFacts(_))));
        assert!(matches!(classify(2, 17, None), Err(Error::InconsistentFacts(_))));
        assert!(matches!(classify(2, 12, None), Err(Error::Underdetermined(_))));
    }
}
