//! Named root lattices and their sums, all in the negative-definite
//! convention: simple roots square to -2 and bonded roots pair to 1.

use super::{GramLattice, IntMatrix};
use crate::{Error, Result};

fn from_edges(n: usize, edges: &[(usize, usize)]) -> IntMatrix {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = -2;
    }
    for &(a, b) in edges {
        g[(a, b)] = 1;
        g[(b, a)] = 1;
    }
    g
}

fn chain(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

/// A_n: a chain of n nodes.
pub fn a(n: usize) -> IntMatrix {
    from_edges(n, &chain(n))
}

/// D_n: chain 0..n-2 with node n-1 attached to node n-3.
pub fn d(n: usize) -> Result<IntMatrix> {
    if n < 4 {
        return Err(Error::Invalid(format!("D{n} needs rank at least 4")));
    }
    let mut edges = chain(n - 1);
    edges.push((n - 3, n - 1));
    Ok(from_edges(n, &edges))
}

/// E6, E7, E8: a chain of n-1 nodes with the last node attached to node n-4
/// (node 2 for E6, 3 for E7, 4 for E8).
pub fn e(n: usize) -> Result<IntMatrix> {
    if !(6..=8).contains(&n) {
        return Err(Error::Invalid(format!("E{n} is not a root lattice")));
    }
    let mut edges = chain(n - 1);
    edges.push((n - 4, n - 1));
    Ok(from_edges(n, &edges))
}

pub fn u() -> IntMatrix {
    let mut g = IntMatrix::zeros(2, 2);
    g[(0, 1)] = 1;
    g[(1, 0)] = 1;
    g
}

fn sum_of(names: &[&str]) -> Result<IntMatrix> {
    let mut parts = names.iter().map(|n| by_name(n));
    let first = parts.next().ok_or_else(|| Error::Invalid("empty sum".into()))??;
    parts.try_fold(first, |acc, m| Ok(acc.direct_sum(&m?)))
}

fn rank_suffix(name: &str, prefix: char) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

/// Gram matrix for a catalog name such as `A4`, `D4`, `E8`, `U`, `K3` or
/// `ENRIQUES_FREE`, or an orthogonal sum like `U+E8`. A trailing `(-1)` is
/// accepted and ignored, since the catalog is already negative definite.
pub fn by_name(name: &str) -> Result<IntMatrix> {
    let trimmed = name.trim();
    if trimmed.contains('+') {
        return sum_of(&trimmed.split('+').collect::<Vec<_>>());
    }
    let base = trimmed.strip_suffix("(-1)").unwrap_or(trimmed);
    match base {
        "U" => Ok(u()),
        "K3" => sum_of(&["U", "U", "U", "E8", "E8"]),
        "ENRIQUES_FREE" => sum_of(&["U", "E8"]),
        _ => {
            if let Some(n) = rank_suffix(base, 'A').filter(|&n| n >= 1) {
                Ok(a(n))
            } else if let Some(n) = rank_suffix(base, 'D') {
                d(n)
            } else if let Some(n) = rank_suffix(base, 'E') {
                e(n)
            } else {
                Err(Error::UnknownName(name.to_string()))
            }
        }
    }
}

pub fn lattice(name: &str) -> Result<GramLattice> {
    Ok(GramLattice {
        name: Some(name.to_string()),
        gram: by_name(name)?,
    })
}

pub fn direct_sum(parts: &[GramLattice]) -> Result<GramLattice> {
    let first = parts.first().ok_or_else(|| Error::Invalid("empty sum".into()))?;
    let gram = parts[1..]
        .iter()
        .fold(first.gram.clone(), |acc, p| acc.direct_sum(&p.gram));
    let names: Option<Vec<&str>> = parts.iter().map(|p| p.name.as_deref()).collect();
    Ok(GramLattice {
        name: names.map(|n| n.join("+")),
        gram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants_and_evenness() {
        let cases: &[(&str, usize, i128)] = &[
            ("A1", 1, -2),
            ("A2", 2, 3),
            ("A4", 4, 5),
            ("D4", 4, 4),
            ("D5", 5, -4),
            ("E6", 6, 3),
            ("E7", 7, -2),
            ("E8", 8, 1),
            ("U", 2, -1),
            ("K3", 22, -1),
            ("ENRIQUES_FREE", 10, -1),
            ("E8(-1)", 8, 1),
            ("A2+A2", 4, 9),
            ("U+E8(-1)", 10, -1),
        ];
        for &(name, rank, det) in cases {
            let g = by_name(name).unwrap();
            assert_eq!(g.nrows(), rank, "{name}");
            assert_eq!(g.determinant().unwrap(), det, "{name}");
            assert!(g.is_symmetric());
            assert!((0..rank).all(|i| g[(i, i)] % 2 == 0), "{name} not even");
        }
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(by_name("F4"), Err(Error::UnknownName(_))));
        assert!(by_name("E9").is_err());
        assert!(by_name("D3").is_err());
        assert!(by_name("A0").is_err());
    }
}
