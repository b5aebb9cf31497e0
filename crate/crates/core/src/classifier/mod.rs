//! Decision procedures for fundamental groups of K3 and Enriques surfaces
//! with cyclic quotient singularities, and the tables they select from.

mod enriques;
mod k3;
mod table;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use enriques::{enriques_classify, EnriquesClassification, EnriquesInput};
pub use k3::{k3_classify, kummer_min_code_dimension, K3Classification, K3Input};
pub use table::{
    load_table, table, table_lookup, Pi1Descriptor, PrimeRange, Realizability, RowFacts, SingYSpec, TableFilter,
    TableRow,
};

use crate::{is_prime, Error, Result};

/// Largest prime considered.
pub const MAX_PRIME: u64 = 23;

/// Facts about the configuration `D` of exceptional curves on a K3 surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DFact {
    Primitive,
    Nonprimitive,
    /// Exactly one 2-divisible 8A1 subconfiguration.
    OneH,
    /// Union of two 2-divisible 8A1 subconfigurations.
    TwoH,
    /// Union of three 2-divisible 8A1 subconfigurations.
    ThreeH,
    /// Exactly one 3-divisible 6A2 subconfiguration.
    OneR,
    /// Union of two 3-divisible 6A2 subconfigurations.
    TwoR,
}

/// Facts about the configuration `G` of curves on an Enriques surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GFact {
    Primitive,
    Nonprimitive,
    /// Exactly one 2-divisible 4A1 subconfiguration.
    OneK,
    /// Union of two 2-divisible 4A1 subconfigurations.
    TwoK,
    /// Two 2-divisible 4A1 subconfigurations plus one further curve.
    TwoKOneA1,
    ThreeK,
    /// Exactly one 3-divisible 3A2 subconfiguration.
    OneT,
}

impl DFact {
    pub const ALL: [DFact; 7] = [
        DFact::Primitive,
        DFact::Nonprimitive,
        DFact::OneH,
        DFact::TwoH,
        DFact::ThreeH,
        DFact::OneR,
        DFact::TwoR,
    ];
}

impl GFact {
    pub const ALL: [GFact; 7] = [
        GFact::Primitive,
        GFact::Nonprimitive,
        GFact::OneK,
        GFact::TwoK,
        GFact::TwoKOneA1,
        GFact::ThreeK,
        GFact::OneT,
    ];
}

fn parse_fact<T: for<'de> Deserialize<'de>>(s: &str, kind: &str) -> Result<T> {
    let token = s.trim().to_ascii_lowercase().replace('-', "_");
    serde_json::from_value(serde_json::Value::String(token))
        .map_err(|_| Error::Invalid(format!("unknown {kind} fact `{s}`")))
}

impl FromStr for DFact {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_fact(s, "K3 configuration")
    }
}

impl FromStr for GFact {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_fact(s, "Enriques configuration")
    }
}

fn fact_name<T: Serialize>(t: &T) -> String {
    serde_json::to_value(t)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

impl fmt::Display for DFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fact_name(self))
    }
}

impl fmt::Display for GFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fact_name(self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverKind {
    K3,
    Abelian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoverSolution {
    pub p: u64,
    pub c: u32,
    pub kind: CoverKind,
}

/// Pairs `(p, c)` for which a cyclic degree-`p` cover of a K3 surface,
/// totally ramified over `c` points, has Euler number `p(24 - cp) + c`
/// equal to 0 (abelian surface) or 24 (K3 surface).
pub fn cover_euler_solutions() -> Vec<CoverSolution> {
    let mut out = Vec::new();
    for p in (2..=MAX_PRIME).filter(|&p| is_prime(p)) {
        for c in 1u32.. {
            if u64::from(c) * (p - 1) > 19 {
                break;
            }
            let e = p as i64 * (24 - i64::from(c) * p as i64) + i64::from(c);
            let kind = match e {
                0 => CoverKind::Abelian,
                24 => CoverKind::K3,
                _ => continue,
            };
            out.push(CoverSolution { p, c, kind });
        }
    }
    out
}

/// Number of branch points of a cyclic degree-`p` K3-to-K3 cover.
pub fn k3_branch_count(p: u64) -> Option<u32> {
    cover_euler_solutions()
        .into_iter()
        .find(|s| s.p == p && s.kind == CoverKind::K3)
        .map(|s| s.c)
}

/// Number of branch points of a cyclic degree-`p` cover by an abelian surface.
pub fn abelian_branch_count(p: u64) -> Option<u32> {
    cover_euler_solutions()
        .into_iter()
        .find(|s| s.p == p && s.kind == CoverKind::Abelian)
        .map(|s| s.c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    K3,
    Enriques,
}

/// `c` points of type `A_{p-1}` fit on a surface of this kind.
pub fn is_admissible(surface: SurfaceKind, p: u64, c: u32) -> bool {
    if !is_prime(p) || c == 0 {
        return false;
    }
    match surface {
        SurfaceKind::K3 => {
            let cap = abelian_branch_count(2).unwrap_or(u32::MAX);
            u64::from(c) * (p - 1) <= 19 && (p != 2 || c <= cap)
        }
        SurfaceKind::Enriques => is_admissible(SurfaceKind::K3, p, 2 * c),
    }
}

/// Largest admissible `c` for every prime that admits one.
pub fn admissible_pairs(surface: SurfaceKind) -> Vec<(u64, u32)> {
    (2..=MAX_PRIME)
        .filter(|&p| is_prime(p))
        .filter_map(|p| {
            let c_max = (1..=24).take_while(|&c| is_admissible(surface, p, c)).last()?;
            Some((p, c_max))
        })
        .collect()
}

/// Du Val point of type `A_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DuVal {
    pub rank: u32,
}

/// Singular points upstairs of a cyclic degree-`p` cover ramified over the
/// points indexed by `ramified`: those become smooth, every other point
/// splits into `p` copies of itself.
pub fn transport_singularities(sing: &[DuVal], ramified: &[usize], p: u64) -> Result<Vec<DuVal>> {
    let mut hit = vec![false; sing.len()];
    for &i in ramified {
        match hit.get_mut(i) {
            Some(h) if !*h => *h = true,
            Some(_) => return Err(Error::Invalid(format!("branch point {i} listed twice"))),
            None => {
                return Err(Error::Invalid(format!(
                    "branch point {i} is not among the {} singular points",
                    sing.len()
                )))
            }
        }
    }
    Ok(sing
        .iter()
        .zip(&hit)
        .filter(|(_, &h)| !h)
        .flat_map(|(&s, _)| std::iter::repeat_n(s, p as usize))
        .collect())
}

/// Singular locus of the maximal abelian-cover quotient `Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingY {
    SameAsX,
    Smooth,
    AffinePlane,
    Points { count: u32, rank: u32 },
}

impl SingY {
    pub fn points(count: u32, rank: u32) -> Self {
        if count == 0 {
            SingY::Smooth
        } else {
            SingY::Points { count, rank }
        }
    }
}

impl fmt::Display for SingY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingY::SameAsX => write!(f, "Y = X"),
            SingY::Smooth => write!(f, "Y smooth"),
            SingY::AffinePlane => write!(f, "Y = C^2"),
            SingY::Points { count, rank } => write!(f, "Sing Y = {count}A{rank}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_solutions() {
        let got: Vec<(u64, u32, CoverKind)> = cover_euler_solutions().iter().map(|s| (s.p, s.c, s.kind)).collect();
        use CoverKind::*;
        assert_eq!(
            got,
            [(2, 8, K3), (2, 16, Abelian), (3, 6, K3), (3, 9, Abelian), (5, 4, K3), (7, 3, K3)]
        );
    }

    #[test]
    fn admissibility() {
        let k3 = admissible_pairs(SurfaceKind::K3);
        assert_eq!(
            k3,
            [(2, 16), (3, 9), (5, 4), (7, 3), (11, 1), (13, 1), (17, 1), (19, 1)]
        );
        let en = admissible_pairs(SurfaceKind::Enriques);
        assert_eq!(en, [(2, 8), (3, 4), (5, 2), (7, 1)]);
        assert!(!is_admissible(SurfaceKind::K3, 23, 1));
        assert!(!is_admissible(SurfaceKind::K3, 4, 1));
    }

    #[test]
    fn transport() {
        let a1 = DuVal { rank: 1 };
        let a2 = DuVal { rank: 2 };
        let twelve = vec![a1; 12];
        assert_eq!(transport_singularities(&twelve, &(0..8).collect::<Vec<_>>(), 2).unwrap().len(), 8);
        for c in 6..=9usize {
            let sing = vec![a2; c];
            let up = transport_singularities(&sing, &(0..6).collect::<Vec<_>>(), 3).unwrap();
            assert_eq!(up.len(), 3 * (c - 6));
        }
        assert!(transport_singularities(&twelve, &(0..12).collect::<Vec<_>>(), 2).unwrap().is_empty());
        assert!(transport_singularities(&twelve, &[12], 2).is_err());
        assert!(transport_singularities(&twelve, &[1, 1], 2).is_err());
    }

    #[test]
    fn fact_parsing() {
        assert_eq!("one_h".parse::<DFact>().unwrap(), DFact::OneH);
        assert_eq!("Nonprimitive".parse::<DFact>().unwrap(), DFact::Nonprimitive);
        assert_eq!("two-k-one-a1".parse::<GFact>().unwrap(), GFact::TwoKOneA1);
        assert!("sometimes".parse::<GFact>().is_err());
        assert_eq!(GFact::OneT.to_string(), "one_t");
    }
}
