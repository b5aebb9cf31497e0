use std::sync::OnceLock;

use super::presentation::{group_from_presentation, GroupPresentation, DEFAULT_COSET_BOUND};
use super::table::{extend_homomorphism, FiniteGroupTable};
use crate::{Error, Result};

/// Name of the semidirect-product construction that coincides with `Gamma2c1`.
pub const SEMIDIRECT_ALIAS: &str = "(C4xC2):C2";

const PRESENTATIONS: &[(&str, &[&str], &[&str])] = &[
    ("C1", &[], &[]),
    ("C2", &["a"], &["a2"]),
    ("C3", &["a"], &["a3"]),
    ("C4", &["a"], &["a4"]),
    ("C5", &["a"], &["a5"]),
    ("C6", &["a"], &["a6"]),
    ("C7", &["a"], &["a7"]),
    ("C8", &["a"], &["a8"]),
    ("C9", &["a"], &["a9"]),
    ("C10", &["a"], &["a10"]),
    ("C2^2", &["a", "b"], &["a2", "b2", "ab=ba"]),
    ("C2^3", &["a", "b", "c"], &["a2", "b2", "c2", "ab=ba", "ac=ca", "bc=cb"]),
    (
        "C2^4",
        &["a", "b", "c", "d"],
        &["a2", "b2", "c2", "d2", "ab=ba", "ac=ca", "ad=da", "bc=cb", "bd=db", "cd=dc"],
    ),
    ("C4xC2", &["a", "b"], &["a4", "b2", "ab=ba"]),
    ("C4xC2^2", &["a", "b", "c"], &["a4", "b2", "c2", "ab=ba", "ac=ca", "bc=cb"]),
    ("C3^2", &["a", "b"], &["a3", "b3", "ab=ba"]),
    ("C3^2xC2", &["a", "b", "c"], &["a3", "b3", "c2", "ab=ba", "ac=ca", "bc=cb"]),
    ("S3", &["a", "b"], &["a3", "b2", "(ab)2"]),
    ("D8", &["a", "b"], &["a4", "b2", "(ab)2"]),
    ("D10", &["a", "b"], &["a5", "b2", "(ab)2"]),
    ("S3xC3", &["a", "b", "c"], &["a3", "b2", "(ab)2", "c3", "ac=ca", "bc=cb"]),
    ("D8xC2", &["a", "b", "c"], &["a4", "b2", "(ab)2", "c2", "ac=ca", "bc=cb"]),
    ("Gamma2c1", &["a", "b", "c"], &["a4", "b2", "c2", "ab=ba", "ac=ca3b", "bc=cb"]),
    ("G18_5", &["a", "b", "c"], &["a3", "b3", "c2", "ab=ba", "aca=bcb=c"]),
];

pub fn catalog_presentation(name: &str) -> Option<GroupPresentation> {
    PRESENTATIONS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, g, r)| GroupPresentation::new(g, r))
}

/// Catalog names in canonical order (the semidirect alias excluded).
pub fn catalog_names() -> Vec<&'static str> {
    PRESENTATIONS.iter().map(|(n, _, _)| *n).collect()
}

/// Every catalog group, built once.
pub fn catalog() -> &'static [FiniteGroupTable] {
    static CATALOG: OnceLock<Vec<FiniteGroupTable>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        PRESENTATIONS
            .iter()
            .map(|(n, g, r)| {
                group_from_presentation(&GroupPresentation::new(g, r), DEFAULT_COSET_BOUND)
                    .expect("catalog presentations are finite")
                    .with_name(n)
            })
            .collect()
    })
}

/// `(C4 x C2) ⋊ C2` with the involution `a -> a^3 b`, `b -> b`.
pub fn semidirect_c4c2_c2() -> Result<FiniteGroupTable> {
    let n = catalog_group("C4xC2")?;
    let q = catalog_group("C2")?;
    let (a, b) = (n.generators()[0], n.generators()[1]);
    let image = n.mul(n.power(a, 3), b);
    let flip = extend_homomorphism(&n, &[a, b], &n, &[image, b])
        .ok_or_else(|| Error::Invalid("action does not define a homomorphism".into()))?;
    let identity: Vec<usize> = (0..n.order()).collect();
    let mut action = vec![identity; q.order()];
    action[q.generators()[0]] = flip;
    Ok(FiniteGroupTable::semidirect_product(&n, &q, &action)?.with_name(SEMIDIRECT_ALIAS))
}

pub fn catalog_group(name: &str) -> Result<FiniteGroupTable> {
    if name == SEMIDIRECT_ALIAS {
        return semidirect_c4c2_c2();
    }
    catalog()
        .iter()
        .find(|g| g.name.as_deref() == Some(name))
        .cloned()
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}
