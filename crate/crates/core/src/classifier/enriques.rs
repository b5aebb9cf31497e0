use std::collections::BTreeSet;

use serde::Serialize;

use super::k3::derive_k3;
use super::table::{table, Pi1Descriptor, TableRow};
use super::{is_admissible, k3_branch_count, DFact, GFact, SurfaceKind};
use crate::groups::{
    catalog, catalog_group, filter_extensions, CountRelation, ExtensionConstraint, FiniteGroupTable,
    NormalSubgroupFact,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnriquesInput {
    pub p: u64,
    pub c: u32,
    /// Fact about the configuration on the Enriques surface; `None` tries all.
    pub g: Option<GFact>,
    /// Fact about its preimage on the K3 cover; `None` tries all.
    pub d: Option<DFact>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnriquesClassification {
    pub row: TableRow,
    pub g: GFact,
    pub d: DFact,
    pub pi1: Pi1Descriptor,
    /// Fundamental group of the K3 cover, a normal subgroup of index 2.
    pub k3_pi1: Pi1Descriptor,
    /// Catalog groups that survived the extension filter.
    pub candidates: Vec<String>,
}

fn check_g_fact(p: u64, c: u32, g: GFact) -> Result<()> {
    let ok = match g {
        GFact::Primitive => true,
        GFact::Nonprimitive => k3_branch_count(p).is_some_and(|h| h % 2 == 0 && c >= h / 2),
        GFact::OneK => p == 2 && c >= 4,
        GFact::TwoK => p == 2 && c == 6,
        GFact::TwoKOneA1 | GFact::ThreeK => p == 2 && c == 7,
        GFact::OneT => p == 3 && c >= 3,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InconsistentFacts(format!("`{g}` does not apply to p = {p}, c = {c}")))
    }
}

/// Possible `p`-ranks of the divisible code on the Enriques side.
fn enriques_ranks(p: u64, c: u32, g: GFact) -> Vec<u32> {
    match g {
        GFact::Primitive => vec![0],
        GFact::OneK | GFact::OneT => vec![1],
        GFact::TwoK | GFact::TwoKOneA1 => vec![2],
        GFact::ThreeK => vec![3],
        GFact::Nonprimitive if p == 2 => match c {
            ..=5 => vec![1],
            6 => vec![1, 2],
            _ => vec![1, 2, 3],
        },
        GFact::Nonprimitive => vec![1],
    }
}

/// Number of normal subgroups of index `p` forced by a code of rank `v`.
/// For `p = 2` the K3 cover itself contributes one more rank.
fn index_p_count(p: u64, v: u32) -> usize {
    let p = p as usize;
    if p == 2 {
        (1 << (v + 1)) - 1
    } else {
        (p.pow(v) - 1) / (p - 1)
    }
}

fn kernel_facts(kernel: &[u64]) -> Result<Vec<NormalSubgroupFact>> {
    let mut out = Vec::new();
    match kernel {
        [2, 2] => out.push(NormalSubgroupFact::isomorphic(2, catalog_group("C2^2")?, CountRelation::Odd)),
        [2, 2, 2] => out.push(NormalSubgroupFact::isomorphic(2, catalog_group("D8")?, CountRelation::Exactly(0))),
        _ => {}
    }
    Ok(out)
}

struct Derived {
    pi1: Pi1Descriptor,
    k3_pi1: Pi1Descriptor,
    candidates: Vec<FiniteGroupTable>,
}

fn derive(p: u64, c: u32, g: GFact, d: DFact, v: u32) -> Result<Derived> {
    let cover = derive_k3(p, 2 * c, d)?;
    let Some(k3_group) = cover.pi1.group()? else {
        if g != GFact::Nonprimitive {
            return Err(Error::InconsistentFacts(format!(
                "an infinite K3 group needs `nonprimitive`, not `{g}`"
            )));
        }
        return Ok(Derived {
            pi1: Pi1Descriptor::Infinite {
                kernel: "Z^2:C2".into(),
                kernel_alt: None,
                quotient: format!("C{p}"),
            },
            k3_pi1: cover.pi1,
            candidates: Vec::new(),
        });
    };
    let kernel = k3_group
        .abelian_invariants()
        .ok_or_else(|| Error::InconsistentFacts(format!("K3 group {} is not abelian", cover.pi1)))?;
    let mut constraint = ExtensionConstraint::new(kernel.clone(), 2)
        .with_fact(NormalSubgroupFact::count(p as usize, CountRelation::Exactly(index_p_count(p, v))));
    for f in kernel_facts(&kernel.factors)? {
        constraint = constraint.with_fact(f);
    }
    let candidates = filter_extensions(&constraint, catalog());
    match candidates.as_slice() {
        [] => Err(Error::InconsistentFacts(format!(
            "no group of order {} extends {} by C2 with `{g}`",
            constraint.group_order(),
            cover.pi1
        ))),
        [one] => Ok(Derived {
            pi1: Pi1Descriptor::finite(one),
            k3_pi1: cover.pi1,
            candidates,
        }),
        _ => Err(Error::Underdetermined(format!(
            "{} groups extend {} with `{g}`",
            candidates.len(),
            cover.pi1
        ))),
    }
}

fn matching_rows(p: u64, c: u32, pi1: &Pi1Descriptor) -> Result<Vec<&'static TableRow>> {
    let mut out = Vec::new();
    for r in table(2)? {
        if r.covers(p, c) && r.pi1.matches(pi1)? {
            out.push(r);
        }
    }
    Ok(out)
}

/// Selects the unique row of the Enriques table consistent with the input.
pub fn enriques_classify(input: &EnriquesInput) -> Result<EnriquesClassification> {
    let (p, c) = (input.p, input.c);
    if !is_admissible(SurfaceKind::Enriques, p, c) {
        return Err(Error::InconsistentFacts(format!(
            "{c} points of type A{} do not fit on an Enriques surface",
            p.saturating_sub(1)
        )));
    }
    let gs: Vec<GFact> = input.g.map_or_else(|| GFact::ALL.to_vec(), |g| vec![g]);
    let ds: Vec<DFact> = input.d.map_or_else(|| DFact::ALL.to_vec(), |d| vec![d]);
    let single = input.g.is_some() && input.d.is_some();
    let mut found: Vec<EnriquesClassification> = Vec::new();
    let mut last_err = None;
    for &g in &gs {
        if let Err(e) = check_g_fact(p, c, g) {
            last_err = Some(e);
            continue;
        }
        let ranks = enriques_ranks(p, c, g);
        for &d in &ds {
            let mut hits = Vec::new();
            for &v in &ranks {
                match derive(p, c, g, d, v) {
                    Ok(x) => hits.push(x),
                    Err(e) => last_err = Some(e),
                }
            }
            for x in hits {
                let rows = matching_rows(p, c, &x.pi1)?;
                if rows.is_empty() {
                    last_err = Some(Error::InconsistentFacts(format!("derived pi1 {} matches no table row", x.pi1)));
                }
                for r in rows {
                    found.push(EnriquesClassification {
                        row: r.clone(),
                        g,
                        d,
                        pi1: x.pi1.clone(),
                        k3_pi1: x.k3_pi1.clone(),
                        candidates: x.candidates.iter().filter_map(|t| t.name.clone()).collect(),
                    });
                }
            }
        }
    }
    let numbers: BTreeSet<u32> = found.iter().map(|f| f.row.number).collect();
    match numbers.len() {
        0 => Err(match (single, last_err) {
            (true, Some(e)) => e,
            (_, e) => Error::InconsistentFacts(format!(
                "no facts are consistent with p = {p}, c = {c}{}",
                e.map(|e| format!(" ({e})")).unwrap_or_default()
            )),
        }),
        1 => Ok(found.swap_remove(0)),
        _ => Err(Error::Underdetermined(format!("rows {numbers:?} all fit"))),
    }
}
