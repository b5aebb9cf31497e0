use std::collections::BTreeMap;

use num_integer::Integer;
use serde_json::Value;

use super::spec::FibrationSpec;
use crate::lattice::IntMatrix;
use crate::{parse_rational, Error, Rational, Result};

/// Rational combination of generator symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalDivisor {
    pub coefficients: BTreeMap<String, Rational>,
}

impl FormalDivisor {
    pub fn from_json(v: &Value) -> Result<Self> {
        let map = v
            .as_object()
            .ok_or_else(|| Error::Invalid("divisor must be a JSON object".into()))?;
        let mut coefficients = BTreeMap::new();
        for (k, c) in map {
            let r = match c {
                Value::String(s) => parse_rational(s)?,
                Value::Number(n) => Rational::from_integer(
                    n.as_i64()
                        .ok_or_else(|| Error::Invalid(format!("coefficient of {k} is not an integer")))?,
                ),
                _ => return Err(Error::Invalid(format!("coefficient of {k} must be a string or integer"))),
            };
            coefficients.insert(k.clone(), r);
        }
        Ok(FormalDivisor { coefficients })
    }

    pub fn scaled(&self, k: Rational) -> Self {
        FormalDivisor {
            coefficients: self.coefficients.iter().map(|(s, &c)| (s.clone(), c * k)).collect(),
        }
    }
}

/// A claimed relation `lhs = p * rhs` in the Picard group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub p: i64,
    pub lhs: FormalDivisor,
    pub rhs: FormalDivisor,
}

impl Relation {
    /// `{"p": 3, "lhs": {...}, "rhs": {...}}`
    pub fn from_json(v: &Value) -> Result<Self> {
        let p = v
            .get("p")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Invalid("relation needs an integer `p`".into()))?;
        let part = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Invalid(format!("relation needs `{k}`")))
                .and_then(FormalDivisor::from_json)
        };
        Ok(Relation {
            p,
            lhs: part("lhs")?,
            rhs: part("rhs")?,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }
}

/// Generator symbols of the formal intersection module, in Gram order:
/// zero section, other sections, general fibre `F`, then fibre components.
pub fn generators(spec: &FibrationSpec) -> Vec<String> {
    let mut g: Vec<String> = spec.zero_section.iter().cloned().collect();
    g.extend(spec.sections.iter().map(|s| s.name.clone()));
    g.push("F".into());
    for f in &spec.fibres {
        g.extend(f.labels.iter().cloned());
    }
    g
}

/// Intersection pairing on the generators.
pub fn formal_gram(spec: &FibrationSpec) -> Result<(Vec<String>, IntMatrix)> {
    let names = generators(spec);
    let n = names.len();
    let sections: Vec<&str> = spec
        .zero_section
        .iter()
        .map(String::as_str)
        .chain(spec.sections.iter().map(|s| s.name.as_str()))
        .collect();
    let ns = sections.len();
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..ns {
        for j in 0..=i {
            let d = i128::from(spec.section_dot(sections[i], sections[j])?);
            g[(i, j)] = d;
            g[(j, i)] = d;
        }
        g[(i, ns)] = 1;
        g[(ns, i)] = 1;
    }
    let mut offset = ns + 1;
    let meets: Vec<Vec<usize>> = sections
        .iter()
        .map(|s| match spec.section(s) {
            Some(inc) => inc.meets.clone(),
            None => vec![0; spec.fibres.len()],
        })
        .collect();
    for (k, f) in spec.fibres.iter().enumerate() {
        let m = f.kind.intersection_matrix();
        let c = f.labels.len();
        for a in 0..c {
            for b in 0..c {
                g[(offset + a, offset + b)] = m[(a, b)];
            }
        }
        for (i, mt) in meets.iter().enumerate() {
            g[(i, offset + mt[k])] = 1;
            g[(offset + mt[k], i)] = 1;
        }
        offset += c;
    }
    Ok((names, g))
}

/// Integer vector proportional to `d` over the generator order, with the
/// positive scale factor removed.
pub fn integral_vector(names: &[String], d: &FormalDivisor) -> Result<Vec<i128>> {
    let mut lcm: i64 = 1;
    for (s, c) in &d.coefficients {
        if !names.contains(s) {
            return Err(Error::UnknownName(s.clone()));
        }
        lcm = lcm.lcm(c.denom());
    }
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut v = vec![0i128; names.len()];
    for (s, c) in &d.coefficients {
        let scaled = *c * Rational::from_integer(lcm);
        v[index[s.as_str()]] += i128::from(*scaled.numer());
    }
    Ok(v)
}

/// Whether `v` pairs to zero with every generator.
pub fn in_radical(gram: &IntMatrix, v: &[i128]) -> Result<bool> {
    Ok(gram.left_apply(v)?.iter().all(|&x| x == 0))
}

/// True iff `lhs - p * rhs` lies in the radical of the formal pairing, i.e.
/// vanishes in the Picard group.
pub fn verify_divisibility_relation(
    spec: &FibrationSpec,
    lhs: &FormalDivisor,
    p: i64,
    rhs: &FormalDivisor,
) -> Result<bool> {
    let (names, gram) = formal_gram(spec)?;
    let mut diff = lhs.clone();
    for (s, c) in &rhs.coefficients {
        *diff.coefficients.entry(s.clone()).or_insert_with(|| Rational::from_integer(0)) -=
            *c * Rational::from_integer(p);
    }
    for s in lhs.coefficients.keys() {
        if !names.contains(s) {
            return Err(Error::UnknownName(s.clone()));
        }
    }
    let v = integral_vector(&names, &diff)?;
    in_radical(&gram, &v)
}

pub fn verify_relation(spec: &FibrationSpec, relation: &Relation) -> Result<bool> {
    verify_divisibility_relation(spec, &relation.lhs, relation.p, &relation.rhs)
}

/// `Σ m_i C_i - F` for every fibre.
pub fn fibre_relations(spec: &FibrationSpec) -> Vec<FormalDivisor> {
    spec.fibres
        .iter()
        .map(|f| {
            let mut coefficients: BTreeMap<String, Rational> = f
                .labels
                .iter()
                .zip(f.kind.multiplicities())
                .map(|(l, m)| (l.clone(), Rational::from_integer(m as i64)))
                .collect();
            coefficients.insert("F".into(), Rational::from_integer(-1));
            FormalDivisor { coefficients }
        })
        .collect()
}

/// Nonzero pairings of `lhs - p * rhs` with generators, for diagnostics.
pub fn relation_residual(spec: &FibrationSpec, relation: &Relation) -> Result<Vec<(String, i128)>> {
    let (names, gram) = formal_gram(spec)?;
    let diff = {
        let mut d = relation.lhs.clone();
        for (s, c) in &relation.rhs.coefficients {
            *d.coefficients.entry(s.clone()).or_insert_with(|| Rational::from_integer(0)) -=
                *c * Rational::from_integer(relation.p);
        }
        d
    };
    let v = integral_vector(&names, &diff)?;
    Ok(gram
        .left_apply(&v)?
        .into_iter()
        .zip(names)
        .filter(|(x, _)| *x != 0)
        .map(|(x, s)| (s, x))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = r#"{
        "fibres": [
            {"type": "In", "n": 3, "labels": ["A0", "A1", "A2"]},
            {"type": "In", "n": 3, "labels": ["B0", "B1", "B2"]},
            {"type": "IV*"}
        ],
        "zero_section": "O",
        "sections": [{"name": "P", "meets": {"fib0": "A1", "fib1": "B2", "fib2": "F2_2"}, "dot_zero": 0}]
    }"#;

    fn div(pairs: &[(&str, i64)]) -> FormalDivisor {
        FormalDivisor {
            coefficients: pairs.iter().map(|&(s, c)| (s.to_string(), Rational::from_integer(c))).collect(),
        }
    }

    #[test]
    fn fibre_relations_are_in_radical() {
        let spec = FibrationSpec::from_json_str(SPEC).unwrap();
        let (names, gram) = formal_gram(&spec).unwrap();
        assert!(gram.is_symmetric());
        for r in fibre_relations(&spec) {
            assert!(in_radical(&gram, &integral_vector(&names, &r).unwrap()).unwrap());
        }
    }

    #[test]
    fn fibre_class_equals_each_fibre() {
        let spec = FibrationSpec::from_json_str(SPEC).unwrap();
        let lhs = div(&[("A0", 1), ("A1", 1), ("A2", 1)]);
        assert!(verify_divisibility_relation(&spec, &lhs, 1, &div(&[("F", 1)])).unwrap());
        assert!(!verify_divisibility_relation(&spec, &lhs, 2, &div(&[("F", 1)])).unwrap());
        let bad = div(&[("Q", 1)]);
        assert!(matches!(
            verify_divisibility_relation(&spec, &bad, 1, &div(&[])),
            Err(Error::UnknownName(_))
        ));
    }

    #[test]
    fn divisor_json() {
        let v: Value = serde_json::from_str(r#"{"A1": "1/3", "F": 2, "B0": "-4"}"#).unwrap();
        let d = FormalDivisor::from_json(&v).unwrap();
        assert_eq!(d.coefficients["A1"], Rational::new(1, 3));
        assert_eq!(d.coefficients["F"], Rational::from_integer(2));
        assert!(FormalDivisor::from_json(&serde_json::json!({"A": true})).is_err());
    }
}
