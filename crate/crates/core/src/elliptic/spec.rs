use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::fibre::{local_contribution, FibreKind, KodairaFibre};
use crate::{Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionIncidence {
    pub name: String,
    /// Component index hit in each fibre, in fibre order.
    pub meets: Vec<usize>,
    pub dot_zero: Option<i64>,
    pub dots: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationSpec {
    pub name: Option<String>,
    pub chi: i64,
    pub fibres: Vec<KodairaFibre>,
    pub zero_section: Option<String>,
    pub sections: Vec<SectionIncidence>,
    pub mw_order: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFibre {
    #[serde(rename = "type")]
    kind: String,
    n: Option<u32>,
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSection {
    name: String,
    #[serde(default)]
    meets: BTreeMap<String, String>,
    dot_zero: Option<i64>,
    #[serde(default)]
    dots: BTreeMap<String, i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: Option<String>,
    #[serde(default = "default_chi")]
    chi: i64,
    fibres: Vec<RawFibre>,
    zero_section: Option<String>,
    #[serde(default)]
    sections: Vec<RawSection>,
    mw_order: Option<u64>,
}

fn default_chi() -> i64 {
    2
}

fn fibre_key(key: &str, count: usize) -> Result<usize> {
    let digits = key.strip_prefix("fib").unwrap_or(key);
    match digits.parse::<usize>() {
        Ok(k) if k < count => Ok(k),
        _ => Err(Error::Incidence(format!("unknown fibre key `{key}`"))),
    }
}

impl FibrationSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let raw: RawSpec = serde_json::from_value(v.clone())?;
        let mut fibres = Vec::with_capacity(raw.fibres.len());
        for (k, f) in raw.fibres.into_iter().enumerate() {
            let kind = FibreKind::parse(&f.kind, f.n)?;
            let labels = f.labels.unwrap_or_else(|| {
                (0..kind.component_count()).map(|i| format!("F{k}_{i}")).collect()
            });
            fibres.push(KodairaFibre::new(kind, labels)?);
        }
        let mut sections = Vec::with_capacity(raw.sections.len());
        for s in raw.sections {
            let mut meets = vec![0usize; fibres.len()];
            for (key, label) in &s.meets {
                let k = fibre_key(key, fibres.len())?;
                meets[k] = fibres[k].component(label).ok_or_else(|| {
                    Error::Incidence(format!(
                        "section {} meets `{label}`, which is not a component of fibre {k}",
                        s.name
                    ))
                })?;
            }
            sections.push(SectionIncidence {
                name: s.name,
                meets,
                dot_zero: s.dot_zero,
                dots: s.dots,
            });
        }
        let spec = FibrationSpec {
            name: raw.name,
            chi: raw.chi,
            fibres,
            zero_section: raw.zero_section,
            sections,
            mw_order: raw.mw_order,
        };
        spec.check_symbols()?;
        Ok(spec)
    }

    fn check_symbols(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        let mut symbols: Vec<&str> = vec!["F"];
        symbols.extend(self.zero_section.as_deref());
        symbols.extend(self.sections.iter().map(|s| s.name.as_str()));
        symbols.extend(self.fibres.iter().flat_map(|f| f.labels.iter().map(String::as_str)));
        for s in symbols {
            if !seen.insert(s) {
                return Err(Error::Invalid(format!("symbol `{s}` declared twice")));
            }
        }
        for s in &self.sections {
            for (k, &c) in s.meets.iter().enumerate() {
                let kind = self.fibres[k].kind;
                if !kind.simple_components().contains(&c) {
                    return Err(Error::Incidence(format!(
                        "section {} meets the non-simple component {} of fibre {k} ({})",
                        s.name,
                        self.fibres[k].labels[c],
                        kind.name()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn section(&self, name: &str) -> Option<&SectionIncidence> {
        self.sections.iter().find(|s| s.name == name)
    }

    fn is_zero(&self, name: &str) -> bool {
        self.zero_section.as_deref() == Some(name)
    }

    fn meets(&self, name: &str) -> Result<Vec<usize>> {
        if self.is_zero(name) {
            return Ok(vec![0; self.fibres.len()]);
        }
        self.section(name)
            .map(|s| s.meets.clone())
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    fn dot_zero(&self, name: &str) -> Result<i64> {
        if self.is_zero(name) {
            return Ok(-self.chi);
        }
        let s = self.section(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
        s.dot_zero
            .ok_or_else(|| Error::MissingIncidence(format!("{name} has no intersection with the zero section")))
    }

    /// Intersection number of two sections (zero section included).
    pub fn section_dot(&self, a: &str, b: &str) -> Result<i64> {
        if a == b {
            self.meets(a)?;
            return Ok(-self.chi);
        }
        if self.is_zero(a) {
            return self.dot_zero(b);
        }
        if self.is_zero(b) {
            return self.dot_zero(a);
        }
        let (sa, sb) = match (self.section(a), self.section(b)) {
            (Some(x), Some(y)) => (x, y),
            (None, _) => return Err(Error::UnknownName(a.to_string())),
            (_, None) => return Err(Error::UnknownName(b.to_string())),
        };
        let forward = sa.dots.get(b);
        let backward = sb.dots.get(a);
        match (forward, backward) {
            (Some(x), Some(y)) if x != y => Err(Error::Incidence(format!(
                "{a}.{b} given as both {x} and {y}"
            ))),
            (Some(&x), _) | (None, Some(&x)) => Ok(x),
            (None, None) => Err(Error::MissingIncidence(format!("no intersection number for {a}.{b}"))),
        }
    }

    /// Shioda height pairing `<P, Q>`.
    pub fn height_pairing(&self, p: &str, q: &str) -> Result<Rational> {
        let (mp, mq) = (self.meets(p)?, self.meets(q)?);
        let mut h = Rational::from_integer(self.chi + self.dot_zero(p)? + self.dot_zero(q)?
            - self.section_dot(p, q)?);
        for (k, f) in self.fibres.iter().enumerate() {
            h -= local_contribution(f.kind, mp[k], mq[k])?;
        }
        Ok(h)
    }

    pub fn height(&self, p: &str) -> Result<Rational> {
        self.height_pairing(p, p)
    }

    pub fn euler_sum(&self) -> u32 {
        self.fibres.iter().map(|f| f.kind.euler_number()).sum()
    }

    /// `2 + Σ (components - 1)`, the Picard rank forced by finite Mordell-Weil.
    pub fn shioda_tate_rank(&self) -> usize {
        2 + self.fibres.iter().map(|f| f.kind.component_count() - 1).sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Euler sum, Shioda-Tate count (when the Mordell-Weil group is declared
/// finite) and vanishing height of every listed section.
pub fn validate_fibration(spec: &FibrationSpec) -> ValidationReport {
    let mut checks = Vec::new();
    let euler = spec.euler_sum();
    let target = 12 * spec.chi;
    checks.push(Check {
        name: "euler".into(),
        passed: i64::from(euler) == target,
        detail: format!("sum of fibre Euler numbers {euler}, expected {target}"),
    });
    if spec.mw_order.is_some() {
        let rank = spec.shioda_tate_rank();
        checks.push(Check {
            name: "shioda_tate".into(),
            passed: rank == 20,
            detail: format!("trivial lattice rank {rank}, expected 20"),
        });
        for s in &spec.sections {
            let (passed, detail) = match spec.height(&s.name) {
                Ok(h) => (h == Rational::from_integer(0), format!("h = {}", crate::format_rational(&h))),
                Err(e) => (false, e.to_string()),
            };
            checks.push(Check {
                name: format!("height({})", s.name),
                passed,
                detail,
            });
        }
    }
    ValidationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MP108: &str = r#"{
        "chi": 2,
        "fibres": [
            {"type": "In", "n": 2, "labels": ["G0", "G1"]},
            {"type": "In", "n": 3, "labels": ["A0", "A1", "A2"]},
            {"type": "In", "n": 3, "labels": ["B0", "B1", "B2"]},
            {"type": "In", "n": 4, "labels": ["C0", "C1", "C2", "C3"]},
            {"type": "In", "n": 6, "labels": ["D0", "D1", "D2", "D3", "D4", "D5"]},
            {"type": "In", "n": 6, "labels": ["E0", "E1", "E2", "E3", "E4", "E5"]}
        ],
        "zero_section": "P0",
        "sections": [
            {"name": "P1", "meets": {"fib0": "G0", "fib1": "A1", "fib2": "B1", "fib3": "C2", "fib4": "D1", "fib5": "E1"}, "dot_zero": 0, "dots": {"P2": 0}},
            {"name": "P2", "meets": {"fib0": "G0", "fib1": "A2", "fib2": "B2", "fib3": "C0", "fib4": "D2", "fib5": "E2"}, "dot_zero": 0}
        ],
        "mw_order": 6
    }"#;

    #[test]
    fn torsion_heights_vanish() {
        let s = FibrationSpec::from_json_str(MP108).unwrap();
        assert_eq!(s.height("P1").unwrap(), Rational::from_integer(0));
        assert_eq!(s.height("P2").unwrap(), Rational::from_integer(0));
        assert_eq!(s.height("P0").unwrap(), Rational::from_integer(0));
        assert_eq!(s.height_pairing("P1", "P2").unwrap(), s.height_pairing("P2", "P1").unwrap());
        assert!(validate_fibration(&s).passed());
    }

    #[test]
    fn euler_failure_is_reported() {
        let text = r#"{"fibres": [{"type":"I1"},{"type":"I1"},{"type":"I1"},{"type":"I1"},
            {"type":"I10"},{"type":"I9"}], "mw_order": 1}"#;
        let s = FibrationSpec::from_json_str(text).unwrap();
        let r = validate_fibration(&s);
        assert!(!r.passed());
        assert!(!r.checks[0].passed);
    }

    #[test]
    fn incidence_errors() {
        let bad = MP108.replace("\"fib3\": \"C2\"", "\"fib3\": \"D2\"");
        assert!(matches!(FibrationSpec::from_json_str(&bad), Err(Error::Incidence(_))));
        let no_dot = MP108.replace(", \"dots\": {\"P2\": 0}", "");
        let s = FibrationSpec::from_json_str(&no_dot).unwrap();
        assert!(matches!(s.height_pairing("P1", "P2"), Err(Error::MissingIncidence(_))));
        let ivstar = r#"{"fibres":[{"type":"IV*"}],"sections":[{"name":"P","meets":{"fib0":"F0_1"},"dot_zero":0}]}"#;
        assert!(matches!(FibrationSpec::from_json_str(ivstar), Err(Error::Incidence(_))));
    }

    #[test]
    fn malformed_json_has_position() {
        match FibrationSpec::from_json_str("{\"fibres\": [") {
            Err(Error::Json { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }
}
