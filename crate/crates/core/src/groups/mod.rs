//! Finite groups from presentations: coset enumeration, subgroup counts,
//! isomorphism tests and filtering of candidate extensions.

mod catalog;
mod extension;
mod presentation;
mod table;

pub use catalog::{
    catalog, catalog_group, catalog_names, catalog_presentation, semidirect_c4c2_c2, SEMIDIRECT_ALIAS,
};
pub use extension::{
    filter_extensions, filter_extensions_any, CountRelation, ExtensionConstraint, NormalSubgroupFact,
};
pub use presentation::{group_from_presentation, GroupPresentation, DEFAULT_COSET_BOUND};
pub use table::{
    count_normal_subgroups, count_normal_subgroups_isomorphic_to, extend_homomorphism, find_isomorphism,
    is_isomorphic, ElementSet, FiniteGroupTable,
};

use serde_json::Value;

use crate::{Error, Result};

/// Resolves a catalog name or an inline `{"gens": [...], "rels": [...]}`.
pub fn group_from_json(v: &Value, bound: usize) -> Result<FiniteGroupTable> {
    match v {
        Value::String(name) => catalog_group(name),
        Value::Object(_) => {
            let pres: GroupPresentation = serde_json::from_value(v.clone())?;
            group_from_presentation(&pres, bound)
        }
        _ => Err(Error::Invalid("group must be a catalog name or a presentation object".into())),
    }
}

/// Catalog name or inline JSON presentation.
pub fn group_from_str(s: &str, bound: usize) -> Result<FiniteGroupTable> {
    let t = s.trim();
    if t.starts_with('{') {
        group_from_json(&serde_json::from_str(t)?, bound)
    } else {
        catalog_group(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> FiniteGroupTable {
        catalog_group(name).unwrap()
    }

    #[test]
    fn index_two_counts() {
        assert_eq!(count_normal_subgroups(&g("C2^4"), 2), 15);
        assert_eq!(count_normal_subgroups(&g("C4xC2^2"), 2), 7);
        assert_eq!(count_normal_subgroups(&g("Gamma2c1"), 2), 3);
        assert_eq!(count_normal_subgroups(&g("D10"), 5), 0);
    }

    #[test]
    fn klein_subgroup_counts() {
        let v4 = g("C2^2");
        assert_eq!(count_normal_subgroups_isomorphic_to(&g("D8"), &v4), 2);
        assert_eq!(count_normal_subgroups_isomorphic_to(&g("C2^3"), &v4), 7);
        assert_eq!(count_normal_subgroups_isomorphic_to(&g("C8"), &v4), 0);
    }

    #[test]
    fn isomorphism_examples() {
        assert!(!is_isomorphic(&g("D8"), &g("C2^3")));
        assert!(!is_isomorphic(&g("C10"), &g("D10")));
        let gamma = g("Gamma2c1");
        let n = gamma.order();
        let mut perm: Vec<usize> = (0..n).collect();
        perm[1..].reverse();
        perm.swap(3, 9);
        assert!(is_isomorphic(&gamma, &gamma.relabel(&perm).unwrap()));
    }

    #[test]
    fn json_forms() {
        let v: Value = serde_json::from_str(r#"{"gens": ["a","b"], "rels": ["a4","b2","abab"]}"#).unwrap();
        assert_eq!(group_from_json(&v, 100).unwrap().order(), 8);
        assert_eq!(group_from_str("S3", 100).unwrap().order(), 6);
        assert!(group_from_str("[1]", 100).is_err());
    }
}
