use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{DFact, GFact, SingY};
use crate::groups::{catalog_group, is_isomorphic, FiniteGroupTable};
use crate::{data, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pi1Descriptor {
    Finite {
        group: String,
        order: u64,
    },
    Infinite {
        kernel: String,
        kernel_alt: Option<String>,
        quotient: String,
    },
}

impl Pi1Descriptor {
    pub fn finite(group: &FiniteGroupTable) -> Self {
        Pi1Descriptor::Finite {
            group: group.name.clone().unwrap_or_else(|| format!("order {}", group.order())),
            order: group.order() as u64,
        }
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            Pi1Descriptor::Finite { order, .. } => Some(*order),
            Pi1Descriptor::Infinite { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn group(&self) -> Result<Option<FiniteGroupTable>> {
        match self {
            Pi1Descriptor::Finite { group, .. } => catalog_group(group).map(Some),
            Pi1Descriptor::Infinite { .. } => Ok(None),
        }
    }

    /// Same finite group up to isomorphism, or identical infinite descriptors.
    pub fn matches(&self, other: &Pi1Descriptor) -> Result<bool> {
        Ok(match (self.group()?, other.group()?) {
            (Some(a), Some(b)) => is_isomorphic(&a, &b),
            (None, None) => self == other,
            _ => false,
        })
    }
}

impl fmt::Display for Pi1Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pi1Descriptor::Finite { group, .. } if group == "C1" => write!(f, "1"),
            Pi1Descriptor::Finite { group, .. } => write!(f, "{group}"),
            Pi1Descriptor::Infinite {
                kernel,
                kernel_alt,
                quotient,
            } => {
                write!(f, "infinite, pi1/{kernel} = {quotient}")?;
                if let Some(alt) = kernel_alt {
                    write!(f, " (kernel also read as {alt})")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrimeRange {
    Exact(u64),
    Above { above: u64 },
}

impl PrimeRange {
    pub fn contains(&self, p: u64) -> bool {
        match *self {
            PrimeRange::Exact(q) => p == q,
            PrimeRange::Above { above } => p > above,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Realizability {
    Known,
    Unknown,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowFacts {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<GFact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<DFact>,
}

/// Printed `Sing Y` entry; `count` is an integer or `a(c-b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingYSpec {
    SameAsX,
    Smooth,
    AffinePlane,
    Points {
        count: String,
        #[serde(rename = "type")]
        kind: String,
    },
}

impl SingYSpec {
    /// Concrete value for `c` points downstairs.
    pub fn evaluate(&self, c: u32) -> Result<SingY> {
        Ok(match self {
            SingYSpec::SameAsX => SingY::SameAsX,
            SingYSpec::Smooth => SingY::Smooth,
            SingYSpec::AffinePlane => SingY::AffinePlane,
            SingYSpec::Points { count, kind } => {
                let n = eval_count(count, c)?;
                let rank = kind
                    .strip_prefix('A')
                    .and_then(|r| r.parse().ok())
                    .ok_or_else(|| Error::Invalid(format!("singularity type `{kind}`")))?;
                SingY::points(n, rank)
            }
        })
    }
}

fn eval_count(expr: &str, c: u32) -> Result<u32> {
    let bad = || Error::Invalid(format!("count expression `{expr}`"));
    if let Ok(n) = expr.parse() {
        return Ok(n);
    }
    let (a, rest) = expr.split_once("(c-").ok_or_else(bad)?;
    let b: u32 = rest.strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let a: u32 = if a.is_empty() { 1 } else { a.parse().map_err(|_| bad())? };
    c.checked_sub(b).map(|d| a * d).ok_or_else(bad)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    #[serde(default)]
    pub table: u8,
    pub number: u32,
    pub p: PrimeRange,
    pub c_min: u32,
    pub c_max: Option<u32>,
    pub condition: String,
    pub facts: RowFacts,
    pub pi1: Pi1Descriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sing_y: Option<SingYSpec>,
    pub realizable: Realizability,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TableRow {
    pub fn covers(&self, p: u64, c: u32) -> bool {
        self.p.contains(p) && c >= self.c_min && self.c_max.is_none_or(|m| c <= m)
    }
}

#[derive(Deserialize)]
struct TableFile {
    table: u8,
    rows: Vec<TableRow>,
}

pub fn load_table(id: u8) -> Result<Vec<TableRow>> {
    let name = match id {
        1 => "table1.json",
        2 => "table2.json",
        _ => return Err(Error::Invalid(format!("no table {id}; tables are 1 and 2"))),
    };
    let file: TableFile = serde_json::from_value(data::read_json(name)?)?;
    if file.table != id {
        return Err(Error::Invalid(format!("{name} declares table {}", file.table)));
    }
    let mut rows = file.rows;
    for (i, r) in rows.iter_mut().enumerate() {
        r.table = id;
        if r.number as usize != i + 1 {
            return Err(Error::Invalid(format!("{name}: row {} out of sequence", r.number)));
        }
    }
    Ok(rows)
}

/// Tables loaded once per process.
pub fn table(id: u8) -> Result<&'static [TableRow]> {
    static T1: OnceLock<std::result::Result<Vec<TableRow>, String>> = OnceLock::new();
    static T2: OnceLock<std::result::Result<Vec<TableRow>, String>> = OnceLock::new();
    let cell = match id {
        1 => &T1,
        2 => &T2,
        _ => return Err(Error::Invalid(format!("no table {id}; tables are 1 and 2"))),
    };
    cell.get_or_init(|| load_table(id).map_err(|e| e.to_string()))
        .as_deref()
        .map_err(|e| Error::Invalid(e.clone()))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TableFilter {
    pub row: Option<u32>,
    pub p: Option<u64>,
    pub c: Option<u32>,
    pub finite: Option<bool>,
    pub realizable: Option<Realizability>,
}

pub fn table_lookup(id: u8, filter: &TableFilter) -> Result<Vec<TableRow>> {
    Ok(table(id)?
        .iter()
        .filter(|r| filter.row.is_none_or(|n| r.number == n))
        .filter(|r| filter.p.is_none_or(|p| r.p.contains(p)))
        .filter(|r| filter.c.is_none_or(|c| c >= r.c_min && r.c_max.is_none_or(|m| c <= m)))
        .filter(|r| filter.finite.is_none_or(|f| r.pi1.is_finite() == f))
        .filter(|r| filter.realizable.is_none_or(|x| r.realizable == x))
        .cloned()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_counts_and_numbering() {
        assert_eq!(table(1).unwrap().len(), 18);
        assert_eq!(table(2).unwrap().len(), 26);
        assert!(table(3).is_err());
    }

    #[test]
    fn lookups() {
        let f = TableFilter {
            p: Some(2),
            c: Some(16),
            ..Default::default()
        };
        let rows: Vec<u32> = table_lookup(1, &f).unwrap().iter().map(|r| r.number).collect();
        assert_eq!(rows, [8]);
        let f = TableFilter {
            realizable: Some(Realizability::Unknown),
            ..Default::default()
        };
        let rows: Vec<u32> = table_lookup(2, &f).unwrap().iter().map(|r| r.number).collect();
        assert_eq!(rows, [14, 20]);
        let f = TableFilter {
            p: Some(3),
            finite: Some(true),
            ..Default::default()
        };
        let max = table_lookup(1, &f).unwrap().iter().filter_map(|r| r.pi1.order()).max();
        assert_eq!(max, Some(9));
    }

    #[test]
    fn finite_groups_resolve_with_stated_orders() {
        for id in [1, 2] {
            for r in table(id).unwrap() {
                if let Some(g) = r.pi1.group().unwrap() {
                    assert_eq!(Some(g.order() as u64), r.pi1.order(), "table {id} row {}", r.number);
                }
            }
        }
    }

    #[test]
    fn count_expressions() {
        assert_eq!(eval_count("8", 12).unwrap(), 8);
        assert_eq!(eval_count("2(c-8)", 11).unwrap(), 6);
        assert_eq!(eval_count("3(c-6)", 7).unwrap(), 3);
        assert!(eval_count("2(c-8)", 7).is_err());
        assert!(eval_count("c+1", 7).is_err());
    }
}
