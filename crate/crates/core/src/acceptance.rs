//! End-to-end checks of every headline computation, each with a time
//! budget. Used by the `selftest` command and the `acceptance` test target.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classifier::{
    cover_euler_solutions, enriques_classify, is_admissible, k3_classify, load_table, table, CoverKind, EnriquesInput, K3Input,
    PrimeRange, SingY, SurfaceKind, TableRow,
};
use crate::elliptic::{
    fibre_relations, formal_gram, in_radical, integral_vector, validate_fibration, verify_relation, FibrationSpec,
    Relation,
};
use crate::geometry::{
    ag23_lattice, ag23_unique_six_set, divisible_point_sets, hyperplane_pair_law, kummer_lattice,
    kummer_subset_witnesses, AffineSpaceModel,
};
use crate::groups::{
    catalog, catalog_group, count_normal_subgroups, count_normal_subgroups_isomorphic_to, filter_extensions,
    filter_extensions_any, group_from_presentation, CountRelation, ExtensionConstraint, FiniteGroupTable,
    NormalSubgroupFact, DEFAULT_COSET_BOUND,
};
use crate::lattice::{primitive_closure, smith_normal_form, AbelianInvariants, EmbeddedSublattice, GramLattice, IntMatrix};
use crate::oracle::{
    brute_force_divisible_subsets, cover_equation_search, normal_subgroups_by_subsets, random_configuration,
    verify_smith_form, RationalNullspace,
};
use crate::root_config::{
    enriques_mod2_divisibility, find_p_divisible_subsets, odd_p_divisibility_by_finite_index, ChainConfiguration,
    FiniteIndexVerdict, Mod2Divisibility,
};
use crate::{data, par, Error, Rational, Result, DEFAULT_MAX_CANDIDATES};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub budget_ms: u128,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}. {}: {} ({} ms, budget {} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed_ms,
            self.budget_ms
        )
    }
}

type Runner = fn() -> Result<String>;

const CRITERIA: [(&str, u64, Runner); 9] = [
    ("cover equation", 1, cover_equation),
    ("kummer combinatorics", 5, kummer_combinatorics),
    ("ternary plane", 1, ternary_plane),
    ("height pairing", 1, height_pairing),
    ("relation verification", 5, relation_verification),
    ("group facts", 10, group_facts),
    ("table round-trips", 1, table_round_trips),
    ("extension eliminations", 5, extension_eliminations),
    ("property suites", 60, property_suites),
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: u8) -> Result<CriterionResult> {
    let (name, budget, runner) = *CRITERIA
        .get(usize::from(id).wrapping_sub(1))
        .ok_or_else(|| Error::Invalid(format!("no criterion {id}; valid ids are 1..={}", CRITERIA.len())))?;
    let start = Instant::now();
    let outcome = runner();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget);
    let (ok, detail) = match outcome {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    let in_time = elapsed <= budget;
    Ok(CriterionResult {
        id,
        name,
        passed: ok && in_time,
        detail: if ok && !in_time { format!("{detail}; over budget") } else { detail },
        elapsed_ms: elapsed.as_millis(),
        budget_ms: budget.as_millis(),
    })
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=CRITERIA.len() as u8).filter_map(|id| run_criterion(id).ok()).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invalid(msg()))
    }
}

fn cover_equation() -> Result<String> {
    let got: BTreeSet<(u64, u32, &str)> = cover_euler_solutions()
        .iter()
        .map(|s| {
            let kind = match s.kind {
                CoverKind::K3 => "K3",
                CoverKind::Abelian => "ab",
            };
            (s.p, s.c, kind)
        })
        .collect();
    let expected: BTreeSet<(u64, u32, &str)> =
        [(2, 8, "K3"), (2, 16, "ab"), (3, 6, "K3"), (3, 9, "ab"), (5, 4, "K3"), (7, 3, "K3")].into();
    ensure(got == expected, || format!("solutions {got:?}"))?;
    let oracle: BTreeSet<_> = cover_equation_search(crate::classifier::MAX_PRIME).into_iter().collect();
    ensure(got == oracle, || format!("plain search found {oracle:?}"))?;
    Ok(format!("{} solutions", got.len()))
}

fn kummer_combinatorics() -> Result<String> {
    let space = AffineSpaceModel::kummer();
    let sets = divisible_point_sets(&space)?;
    let eights = sets.iter().filter(|m| m.count_ones() == 8).count();
    let full = sets.iter().filter(|m| m.count_ones() == 16).count();
    ensure(eights == 30 && full == 1 && sets.len() == 31, || {
        format!("{eights} eight-sets, {full} full sets, {} total", sets.len())
    })?;

    let (_, cfg) = kummer_lattice()?;
    let brute: BTreeSet<u32> = brute_force_divisible_subsets(&cfg, DEFAULT_MAX_CANDIDATES)?
        .iter()
        .map(|d| d.iter().enumerate().filter(|(_, &x)| x != 0).fold(0u32, |m, (i, _)| m | 1 << i))
        .collect();
    ensure(brute == sets.iter().copied().collect(), || "brute force disagrees with kernel search".into())?;

    let law = hyperplane_pair_law(&space);
    let expected: BTreeMap<usize, usize> = [(0, 15), (4, 420)].into();
    ensure(law.pairs == 435 && law.intersection_sizes == expected && law.disjoint_pairs_cover, || {
        format!("pair law {law:?}")
    })?;

    let w = kummer_subset_witnesses()?;
    ensure(w.checked_13 == 560 && w.pair_13, || "13-subset search failed".into())?;
    let inside = |s: &[usize]| {
        let m = s.iter().fold(0u32, |m, &i| m | 1 << i);
        brute.iter().filter(|&&d| d & !m == 0).count()
    };
    let u12 = w.unique_12.as_deref().ok_or_else(|| Error::Invalid("no 12-point witness".into()))?;
    let n11 = w.none_11.as_deref().ok_or_else(|| Error::Invalid("no 11-point witness".into()))?;
    ensure(u12.len() == 12 && inside(u12) == 1, || format!("bad 12-point witness {u12:?}"))?;
    ensure(n11.len() == 11 && inside(n11) == 0, || format!("bad 11-point witness {n11:?}"))?;
    Ok("30 eight-sets + 1 full set, 435 pairs, 3 witness searches".into())
}

fn ternary_plane() -> Result<String> {
    let check = ag23_unique_six_set()?;
    ensure(check.checked_7 == 36 && check.unique_six_set, || format!("{check:?}"))?;
    let (_, cfg) = ag23_lattice()?;
    let sixes: Vec<u32> = brute_force_divisible_subsets(&cfg, DEFAULT_MAX_CANDIDATES)?
        .iter()
        .filter(|d| d.iter().filter(|&&x| x != 0).count() == 6)
        .map(|d| d.iter().enumerate().filter(|(_, &x)| x != 0).fold(0u32, |m, (i, _)| m | 1 << i))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let sevens: Vec<u32> = (0u32..1 << 9).filter(|m| m.count_ones() == 7).collect();
    let all_unique = sevens.iter().all(|&s| sixes.iter().filter(|&&h| h & !s == 0).count() == 1);
    ensure(all_unique, || "brute-force six-sets disagree".into())?;
    Ok(format!("36 seven-sets, {} six-sets", sixes.len()))
}

fn load_spec(name: &str) -> Result<FibrationSpec> {
    FibrationSpec::from_json_str(&data::read(name)?)
}

pub const FIBRATION_FILES: [&str; 7] = [
    "mp1.json",
    "mp9.json",
    "mp29.json",
    "mp30.json",
    "mp39.json",
    "mp64.json",
    "mp108.json",
];

pub const RELATION_FILES: [&str; 4] = [
    "ex2_2.json",
    "mp9_relation.json",
    "mp30_relation.json",
    "ivstar_cover_relation.json",
];

fn height_pairing() -> Result<String> {
    for name in ["mp108.json", "mp9.json", "mp30.json"] {
        let h = load_spec(name)?.height("P1")?;
        ensure(h == Rational::from_integer(0), || format!("{name}: h(P1) = {h}"))?;
    }
    for name in FIBRATION_FILES {
        let report = validate_fibration(&load_spec(name)?);
        let names: BTreeSet<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        ensure(report.passed() && names.len() >= 2, || format!("{name}: {report:?}"))?;
    }
    Ok("3 torsion sections, 7 fibrations validated".into())
}

fn load_relation(name: &str) -> Result<(FibrationSpec, Relation)> {
    let v = data::read_json(name)?;
    let spec_name = v
        .get("spec")
        .and_then(|s| s.as_str())
        .ok_or_else(|| Error::Invalid(format!("{name}: missing `spec`")))?;
    Ok((load_spec(spec_name)?, Relation::from_json(&v)?))
}

/// Every relation obtained from `r` by moving one coefficient by one.
pub fn single_perturbations(r: &Relation) -> Vec<Relation> {
    let one = Rational::from_integer(1);
    let mut out = Vec::new();
    for side in 0..2 {
        let divisor = if side == 0 { &r.lhs } else { &r.rhs };
        for key in divisor.coefficients.keys() {
            for delta in [one, -one] {
                let mut q = r.clone();
                let target = if side == 0 { &mut q.lhs } else { &mut q.rhs };
                if let Some(c) = target.coefficients.get_mut(key) {
                    *c += delta;
                }
                out.push(q);
            }
        }
    }
    out
}

fn relation_verification() -> Result<String> {
    let mut perturbed = 0;
    for name in RELATION_FILES {
        let (spec, r) = load_relation(name)?;
        ensure(verify_relation(&spec, &r)?, || format!("{name} does not verify"))?;
        for q in single_perturbations(&r) {
            perturbed += 1;
            ensure(!verify_relation(&spec, &q)?, || format!("{name}: a perturbation still verifies"))?;
        }
    }
    Ok(format!("4 relations hold, {perturbed} perturbations fail"))
}

fn group_facts() -> Result<String> {
    let build = |name: &str| -> Result<FiniteGroupTable> {
        let pres = crate::groups::catalog_presentation(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))?;
        group_from_presentation(&pres, DEFAULT_COSET_BOUND)
    };
    let gamma = build("Gamma2c1")?;
    let g18 = build("G18_5")?;
    ensure(gamma.order() == 16 && g18.order() == 18, || {
        format!("orders {} and {}", gamma.order(), g18.order())
    })?;
    let cases: [(&str, usize, usize); 4] = [("C2^4", 2, 15), ("C4xC2^2", 2, 7), ("Gamma2c1", 2, 3), ("D10", 5, 0)];
    for (name, index, expected) in cases {
        let g = catalog_group(name)?;
        let fast = count_normal_subgroups(&g, index);
        let slow = normal_subgroups_by_subsets(&g, index);
        ensure(fast == expected && slow == expected, || {
            format!("{name} index {index}: {fast} (subset oracle {slow})")
        })?;
    }
    let klein = count_normal_subgroups_isomorphic_to(&catalog_group("D8")?, &catalog_group("C2^2")?);
    ensure(klein == 2, || format!("D8 has {klein} Klein normal subgroups"))?;
    Ok("orders 16, 18; counts 15, 7, 3, 0; D8 Klein count 2".into())
}

fn finite_primes(r: &TableRow, surface: SurfaceKind) -> Vec<u64> {
    match r.p {
        PrimeRange::Exact(p) => vec![p],
        PrimeRange::Above { above } => (above + 1..=crate::classifier::MAX_PRIME)
            .filter(|&p| is_admissible(surface, p, r.c_min))
            .collect(),
    }
}

fn table_round_trips() -> Result<String> {
    let mut k3_cases = 0;
    for r in table(1)? {
        for p in finite_primes(r, SurfaceKind::K3) {
            let c_max = r.c_max.unwrap_or(r.c_min);
            for c in r.c_min..=c_max {
                if !is_admissible(SurfaceKind::K3, p, c) {
                    continue;
                }
                let got = k3_classify(&K3Input { p, c, fact: r.facts.d })?;
                ensure(got.row.number == r.number, || {
                    format!("table 1 row {} (p = {p}, c = {c}) gave row {}", r.number, got.row.number)
                })?;
                let printed = r.sing_y.as_ref().map(|s| s.evaluate(c)).transpose()?;
                ensure(printed == Some(got.sing_y), || format!("table 1 row {}: Sing Y {}", r.number, got.sing_y))?;
                if let Some(order) = got.pi1.order() {
                    let tower: u64 = got.cover_degrees.iter().product();
                    ensure(order == tower && order <= p.pow(4), || {
                        format!("table 1 row {}: order {order}, tower {tower}", r.number)
                    })?;
                } else {
                    ensure(got.sing_y == SingY::AffinePlane, || "infinite row without C^2".into())?;
                }
                k3_cases += 1;
            }
        }
    }
    let mut enriques_cases = 0;
    for r in table(2)? {
        for p in finite_primes(r, SurfaceKind::Enriques) {
            for c in r.c_min..=r.c_max.unwrap_or(r.c_min) {
                let got = enriques_classify(&EnriquesInput {
                    p,
                    c,
                    g: r.facts.g,
                    d: r.facts.d,
                })?;
                ensure(got.row.number == r.number, || {
                    format!("table 2 row {} (p = {p}, c = {c}) gave row {}", r.number, got.row.number)
                })?;
                if let Some(order) = got.pi1.order() {
                    ensure(order <= 2 * p.pow(4), || format!("table 2 row {}: order {order}", r.number))?;
                }
                enriques_cases += 1;
            }
        }
    }
    Ok(format!("18 + 26 rows ({k3_cases} + {enriques_cases} parameter values)"))
}

fn names(gs: &[FiniteGroupTable]) -> BTreeSet<String> {
    gs.iter().filter_map(|g| g.name.clone()).collect()
}

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn inv(f: &[u64]) -> Result<AbelianInvariants> {
    AbelianInvariants::from_cyclic(f)
}

fn extension_eliminations() -> Result<String> {
    let pool = catalog();
    let fives = [ExtensionConstraint::new(inv(&[])?, 2), ExtensionConstraint::new(inv(&[5])?, 2)];
    let got = names(&filter_extensions_any(&fives, pool));
    ensure(got == set(&["C2", "C10", "D10"]), || format!("order 2 and 10: {got:?}"))?;

    let threes: Vec<ExtensionConstraint> = [inv(&[3])?, inv(&[3, 3])?]
        .into_iter()
        .map(|k| ExtensionConstraint::new(k, 2).with_fact(NormalSubgroupFact::count(3, CountRelation::Exactly(1))))
        .collect();
    let got = names(&filter_extensions_any(&threes, pool));
    ensure(got == set(&["C6", "S3xC3"]), || format!("index-3 elimination: {got:?}"))?;

    let klein = ExtensionConstraint::new(inv(&[2, 2])?, 2).with_fact(NormalSubgroupFact::isomorphic(
        2,
        catalog_group("C2^2")?,
        CountRelation::Odd,
    ));
    let got = names(&filter_extensions(&klein, pool));
    ensure(!got.contains("D8") && got.contains("C4xC2"), || format!("Klein kernel: {got:?}"))?;

    let rank3 = ExtensionConstraint::new(inv(&[2, 2, 2])?, 2);
    let before = names(&filter_extensions(&rank3, pool));
    let after = names(&filter_extensions(
        &rank3.with_fact(NormalSubgroupFact::isomorphic(2, catalog_group("D8")?, CountRelation::Exactly(0))),
        pool,
    ));
    ensure(before.contains("D8xC2") && !after.contains("D8xC2"), || {
        format!("rank-3 kernel: {before:?} -> {after:?}")
    })?;
    Ok("{C2, C10, D10}; {C6, S3xC3}; D8 and D8xC2 eliminated".into())
}

fn random_matrix(rng: &mut ChaCha8Rng) -> Result<IntMatrix> {
    let rows = rng.gen_range(1..=8);
    let cols = rng.gen_range(1..=8);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-10..=10)).collect())
        .collect();
    IntMatrix::from_rows(&data)
}

fn check_snf(m: &IntMatrix) -> Result<bool> {
    Ok(verify_smith_form(m, &smith_normal_form(m)?))
}

fn check_closure_idempotent(rng: &mut ChaCha8Rng) -> Result<bool> {
    let n = rng.gen_range(1..=6);
    let ambient = GramLattice::new(None, IntMatrix::identity(n))?;
    let k = rng.gen_range(1..=n);
    let basis: Vec<Vec<i128>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect()).collect();
    let once = primitive_closure(&EmbeddedSublattice::new(ambient.clone(), basis.clone())?)?;
    let twice = primitive_closure(&EmbeddedSublattice::new(ambient.clone(), once.basis.clone())?)?;
    let mut joined = once.basis.clone();
    joined.extend(basis);
    let rank_once = EmbeddedSublattice::new(ambient.clone(), once.basis.clone())?.rank()?;
    let rank_joined = EmbeddedSublattice::new(ambient, joined)?.rank()?;
    Ok(twice.glue.is_trivial() && twice.basis.len() == once.basis.len() && rank_once == rank_joined)
}

/// Generator subsets of at most 12 symbols from the bundled fibrations:
/// each fibre with `F` (and the zero section, if any), and a leading window.
fn formal_subsystems() -> Result<Vec<(String, IntMatrix)>> {
    let mut out = Vec::new();
    let mut specs: Vec<&str> = FIBRATION_FILES.to_vec();
    specs.push("ivstar_cover.json");
    for name in specs {
        let spec = load_spec(name)?;
        let (names, gram) = formal_gram(&spec)?;
        let pos = |s: &str| names.iter().position(|x| x == s);
        let mut systems: Vec<Vec<usize>> = Vec::new();
        for f in &spec.fibres {
            let mut idx: Vec<usize> = spec.zero_section.iter().filter_map(|z| pos(z)).collect();
            idx.extend(pos("F"));
            idx.extend(f.labels.iter().filter_map(|l| pos(l)));
            systems.push(idx);
        }
        systems.push((0..names.len().min(12)).collect());
        systems.retain(|s| s.len() <= 12);
        systems.sort();
        systems.dedup();
        for idx in systems {
            let mut sub = IntMatrix::zeros(idx.len(), idx.len());
            for (a, &i) in idx.iter().enumerate() {
                for (b, &j) in idx.iter().enumerate() {
                    sub[(a, b)] = gram[(i, j)];
                }
            }
            out.push((format!("{name}{idx:?}"), sub));
        }
    }
    Ok(out)
}

fn radical_agrees(gram: &IntMatrix) -> Result<bool> {
    let n = gram.nrows();
    let ns = RationalNullspace::of(gram).integral();
    let bad = par::filter_map_range(3u64.pow(n as u32), |mut idx| {
        let v: Vec<i128> = (0..n)
            .map(|_| {
                let t = (idx % 3) as i128 - 1;
                idx /= 3;
                t
            })
            .collect();
        match in_radical(gram, &v) {
            Ok(fast) if fast == ns.contains(&v) => None,
            _ => Some(()),
        }
    });
    Ok(bad.is_empty())
}

fn property_suites() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b33);
    for i in 0..1000 {
        let m = random_matrix(&mut rng)?;
        ensure(check_snf(&m)?, || format!("SNF reconstruction failed on matrix {i}"))?;
    }
    for i in 0..200 {
        ensure(check_closure_idempotent(&mut rng)?, || format!("closure not idempotent on sample {i}"))?;
    }
    let systems = formal_subsystems()?;
    for (name, gram) in &systems {
        ensure(radical_agrees(gram)?, || format!("radical test disagrees on {name}"))?;
    }
    for i in 0..100 {
        let r = random_configuration(&mut rng, 8)?;
        let witnesses = find_p_divisible_subsets(&r.cfg, DEFAULT_MAX_CANDIDATES)?;
        let brute = brute_force_divisible_subsets(&r.cfg, DEFAULT_MAX_CANDIDATES)?;
        let glue_trivial = r.cfg.glue()?.is_trivial();
        let expected = (r.code.len() - 1) / (r.cfg.p as usize - 1);
        let c = r.cfg.c();
        let mut fast: Vec<Vec<u64>> = witnesses
            .iter()
            .map(|w| {
                let mut d = vec![0u64; c];
                for (&i, &x) in w.subset.iter().zip(&w.coefficients) {
                    d[i] = x;
                }
                d
            })
            .collect();
        fast.sort();
        ensure(
            glue_trivial == witnesses.is_empty() && fast == brute && fast.len() == expected,
            || format!("configuration {i} (p = {}): glue/witness mismatch", r.cfg.p),
        )?;
    }
    Ok(format!(
        "1000 SNF, 200 closures, {} formal systems, 100 configurations",
        systems.len()
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct DataFileCheck {
    pub file: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check_enriques_fixture(name: &str) -> Result<String> {
    #[derive(serde::Deserialize)]
    struct Fixture {
        coefficients: Vec<Vec<i64>>,
        n_basis: Vec<Vec<i64>>,
        expected_index: u64,
    }
    let v = data::read_json(name)?;
    let cfg = ChainConfiguration::from_json(&v)?;
    let f: Fixture = serde_json::from_value(v)?;
    let mut d = vec![0i128; cfg.ambient.rank()];
    for (chain, coeffs) in cfg.chains.iter().zip(&f.coefficients) {
        for (curve, &k) in chain.iter().zip(coeffs) {
            for (x, y) in d.iter_mut().zip(curve) {
                *x += i128::from(k) * y;
            }
        }
    }
    let n: Vec<Vec<i128>> = f.n_basis.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let check = odd_p_divisibility_by_finite_index(&d, &n, &cfg.ambient, cfg.p)?;
    ensure(check.verdict == FiniteIndexVerdict::Divisible && check.index == f.expected_index, || {
        format!("{check:?}")
    })?;
    Ok(format!("divisible by {}, index {}", cfg.p, check.index))
}

fn check_mod2_fixture(name: &str) -> Result<String> {
    #[derive(serde::Deserialize)]
    struct Case {
        subset: Vec<String>,
        expected: Mod2Divisibility,
    }
    #[derive(serde::Deserialize)]
    struct Fixture {
        torsion: Vec<u8>,
        classes: BTreeMap<String, Vec<u8>>,
        checks: Vec<Case>,
    }
    let f: Fixture = serde_json::from_value(data::read_json(name)?)?;
    for case in &f.checks {
        let classes = case
            .subset
            .iter()
            .map(|s| f.classes.get(s).cloned().ok_or_else(|| Error::UnknownName(s.clone())))
            .collect::<Result<Vec<_>>>()?;
        let got = enriques_mod2_divisibility(&classes, &f.torsion)?;
        ensure(got == case.expected, || format!("{:?}: {got:?}", case.subset))?;
    }
    Ok(format!("{} subsets", f.checks.len()))
}

fn check_space_fixture(name: &str) -> Result<String> {
    #[derive(serde::Deserialize)]
    struct Fixture {
        p: u64,
        dimension: usize,
    }
    let f: Fixture = serde_json::from_value(data::read_json(name)?)?;
    let space = AffineSpaceModel::new(f.p, f.dimension)?;
    let sets = divisible_point_sets(&space)?;
    let expected = (f.p.pow(f.dimension as u32 + 1) - 1) / (f.p - 1);
    ensure(sets.len() as u64 == expected, || format!("{} divisible sets", sets.len()))?;
    Ok(format!("{} divisible point sets", sets.len()))
}

fn check_fibration_fixture(name: &str) -> Result<String> {
    let spec = load_spec(name)?;
    let (names, gram) = formal_gram(&spec)?;
    for (k, rel) in fibre_relations(&spec).iter().enumerate() {
        ensure(in_radical(&gram, &integral_vector(&names, rel)?)?, || format!("fibre {k} class differs from F"))?;
    }
    let report = validate_fibration(&spec);
    ensure(report.passed(), || format!("{report:?}"))?;
    Ok(format!("{} generators, {} checks", names.len(), report.checks.len()))
}

fn check_data_file(name: &str) -> Result<String> {
    match name {
        "table1.json" => Ok(format!("{} rows", load_table(1)?.len())),
        "table2.json" => Ok(format!("{} rows", load_table(2)?.len())),
        "enriques_p3.json" | "enriques_p5.json" => check_enriques_fixture(name),
        "enriques_mod2.json" => check_mod2_fixture(name),
        "kummer.json" | "ag23.json" => check_space_fixture(name),
        n if RELATION_FILES.contains(&n) => {
            let (spec, r) = load_relation(n)?;
            ensure(verify_relation(&spec, &r)?, || "relation fails".into())?;
            Ok(format!("relation divisible by {}", r.p))
        }
        n => check_fibration_fixture(n),
    }
}

/// Loads every bundled data file through the code that consumes it.
pub fn data_file_checks() -> Vec<DataFileCheck> {
    data::bundled_names()
        .into_iter()
        .map(|file| match check_data_file(file) {
            Ok(detail) => DataFileCheck {
                file,
                passed: true,
                detail,
            },
            Err(e) => DataFileCheck {
                file,
                passed: false,
                detail: e.to_string(),
            },
        })
        .collect()
}
