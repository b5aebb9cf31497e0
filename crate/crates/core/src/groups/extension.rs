use serde::Serialize;

use super::table::{count_normal_subgroups, is_isomorphic, FiniteGroupTable};
use crate::lattice::AbelianInvariants;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CountRelation {
    AtLeast(usize),
    Exactly(usize),
    Odd,
}

impl CountRelation {
    pub fn holds(&self, n: usize) -> bool {
        match *self {
            CountRelation::AtLeast(k) => n >= k,
            CountRelation::Exactly(k) => n == k,
            CountRelation::Odd => n % 2 == 1,
        }
    }
}

/// "The number of normal subgroups of `index` (isomorphic to `pattern`, if
/// given) satisfies `relation`."
#[derive(Clone, Debug)]
pub struct NormalSubgroupFact {
    pub index: usize,
    pub isomorphic_to: Option<FiniteGroupTable>,
    pub relation: CountRelation,
}

impl NormalSubgroupFact {
    pub fn count(index: usize, relation: CountRelation) -> Self {
        NormalSubgroupFact {
            index,
            isomorphic_to: None,
            relation,
        }
    }

    pub fn isomorphic(index: usize, pattern: FiniteGroupTable, relation: CountRelation) -> Self {
        NormalSubgroupFact {
            index,
            isomorphic_to: Some(pattern),
            relation,
        }
    }

    pub fn holds(&self, g: &FiniteGroupTable) -> bool {
        let n = match &self.isomorphic_to {
            None => count_normal_subgroups(g, self.index),
            Some(pattern) => {
                if pattern.order() * self.index != g.order() {
                    0
                } else {
                    g.normal_subgroups()
                        .iter()
                        .filter(|h| h.len() == pattern.order() && is_isomorphic(&g.subgroup_table(h), pattern))
                        .count()
                }
            }
        };
        self.relation.holds(n)
    }
}

/// Group `G` with an abelian normal subgroup of the given type and quotient
/// of the given order.
#[derive(Clone, Debug)]
pub struct ExtensionConstraint {
    pub kernel: AbelianInvariants,
    pub quotient_order: usize,
    pub facts: Vec<NormalSubgroupFact>,
}

impl ExtensionConstraint {
    pub fn new(kernel: AbelianInvariants, quotient_order: usize) -> Self {
        ExtensionConstraint {
            kernel,
            quotient_order,
            facts: Vec::new(),
        }
    }

    pub fn with_fact(mut self, fact: NormalSubgroupFact) -> Self {
        self.facts.push(fact);
        self
    }

    pub fn group_order(&self) -> usize {
        self.kernel.order() as usize * self.quotient_order
    }

    pub fn admits(&self, g: &FiniteGroupTable) -> bool {
        if g.order() != self.group_order() {
            return false;
        }
        let k = self.kernel.order() as usize;
        let has_kernel = g.normal_subgroups().iter().any(|h| {
            h.len() == k && g.subgroup_table(h).abelian_invariants().as_ref() == Some(&self.kernel)
        });
        has_kernel && self.facts.iter().all(|f| f.holds(g))
    }
}

/// Candidates satisfying the constraint, in input order.
pub fn filter_extensions(constraint: &ExtensionConstraint, candidates: &[FiniteGroupTable]) -> Vec<FiniteGroupTable> {
    crate::par::filter(candidates, |g| constraint.admits(g))
}

/// Candidates satisfying at least one of the constraints, in input order.
pub fn filter_extensions_any(
    constraints: &[ExtensionConstraint],
    candidates: &[FiniteGroupTable],
) -> Vec<FiniteGroupTable> {
    crate::par::filter(candidates, |g| constraints.iter().any(|c| c.admits(g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog, catalog_group};

    fn names(gs: &[FiniteGroupTable]) -> Vec<String> {
        gs.iter().map(|g| g.name.clone().unwrap()).collect()
    }

    fn inv(f: &[u64]) -> AbelianInvariants {
        AbelianInvariants::from_cyclic(f).unwrap()
    }

    #[test]
    fn cyclic_five_by_two() {
        let c = ExtensionConstraint::new(inv(&[5]), 2);
        assert_eq!(names(&filter_extensions(&c, catalog())), ["C10", "D10"]);
    }

    #[test]
    fn order_eighteen_with_index_three_facts() {
        let base = [
            ExtensionConstraint::new(inv(&[3]), 2),
            ExtensionConstraint::new(inv(&[3, 3]), 2),
        ];
        assert_eq!(
            names(&filter_extensions_any(&base, catalog())),
            ["C6", "C3^2xC2", "S3", "S3xC3", "G18_5"]
        );
        let at_least: Vec<_> = base
            .iter()
            .cloned()
            .map(|c| c.with_fact(NormalSubgroupFact::count(3, CountRelation::AtLeast(1))))
            .collect();
        assert_eq!(names(&filter_extensions_any(&at_least, catalog())), ["C6", "C3^2xC2", "S3xC3"]);
        let exactly: Vec<_> = base
            .iter()
            .cloned()
            .map(|c| c.with_fact(NormalSubgroupFact::count(3, CountRelation::Exactly(1))))
            .collect();
        assert_eq!(names(&filter_extensions_any(&exactly, catalog())), ["C6", "S3xC3"]);
    }

    #[test]
    fn elementary_kernel_rank_three() {
        let d8 = catalog_group("D8").unwrap();
        let c = ExtensionConstraint::new(inv(&[2, 2, 2]), 2);
        assert_eq!(
            names(&filter_extensions(&c, catalog())),
            ["C2^4", "C4xC2^2", "D8xC2", "Gamma2c1"]
        );
        let c = c.with_fact(NormalSubgroupFact::isomorphic(2, d8, CountRelation::Exactly(0)));
        assert_eq!(names(&filter_extensions(&c, catalog())), ["C2^4", "C4xC2^2", "Gamma2c1"]);
    }

    #[test]
    fn odd_count_of_klein_subgroups() {
        let v4 = catalog_group("C2^2").unwrap();
        let cs = [
            ExtensionConstraint::new(inv(&[2]), 2),
            ExtensionConstraint::new(inv(&[2, 2]), 2)
                .with_fact(NormalSubgroupFact::isomorphic(2, v4, CountRelation::Odd)),
        ];
        assert_eq!(names(&filter_extensions_any(&cs, catalog())), ["C4", "C2^2", "C2^3", "C4xC2"]);
    }
}
