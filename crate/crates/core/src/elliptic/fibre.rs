use serde::{Deserialize, Serialize};

use crate::lattice::IntMatrix;
use crate::{Error, Rational, Result};

/// Kodaira type of a singular fibre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FibreKind {
    I(u32),
    I0Star,
    IVStar,
    IIIStar,
    IIStar,
}

impl FibreKind {
    /// Accepts `"In"` with `n`, `"I6"`, `"I0*"`, `"IV*"`, `"III*"`, `"II*"`.
    pub fn parse(kind: &str, n: Option<u32>) -> Result<Self> {
        let k = kind.trim();
        let parsed = match k {
            "In" | "I_n" => match n {
                Some(n) if n >= 1 => FibreKind::I(n),
                _ => return Err(Error::Invalid("fibre type In needs n >= 1".into())),
            },
            "I0*" => FibreKind::I0Star,
            "IV*" => FibreKind::IVStar,
            "III*" => FibreKind::IIIStar,
            "II*" => FibreKind::IIStar,
            _ => match k.strip_prefix('I').and_then(|s| s.parse::<u32>().ok()) {
                Some(n) if n >= 1 => FibreKind::I(n),
                _ => return Err(Error::Invalid(format!("unknown fibre type `{kind}`"))),
            },
        };
        Ok(parsed)
    }

    pub fn name(&self) -> String {
        match self {
            FibreKind::I(n) => format!("I{n}"),
            FibreKind::I0Star => "I0*".into(),
            FibreKind::IVStar => "IV*".into(),
            FibreKind::IIIStar => "III*".into(),
            FibreKind::IIStar => "II*".into(),
        }
    }

    pub fn euler_number(&self) -> u32 {
        match self {
            FibreKind::I(n) => *n,
            FibreKind::I0Star => 6,
            FibreKind::IVStar => 8,
            FibreKind::IIIStar => 9,
            FibreKind::IIStar => 10,
        }
    }

    /// Multiplicity of each component; component 0 is the one met by the
    /// zero section.
    pub fn multiplicities(&self) -> Vec<i128> {
        match self {
            FibreKind::I(n) => vec![1; *n as usize],
            FibreKind::I0Star => vec![1, 1, 1, 1, 2],
            FibreKind::IVStar => vec![1, 2, 1, 2, 1, 2, 3],
            FibreKind::IIIStar => vec![1, 2, 3, 4, 3, 2, 1, 2],
            FibreKind::IIStar => vec![1, 2, 3, 4, 5, 6, 4, 2, 3],
        }
    }

    pub fn component_count(&self) -> usize {
        self.multiplicities().len()
    }

    pub fn simple_components(&self) -> Vec<usize> {
        self.multiplicities()
            .iter()
            .enumerate()
            .filter(|(_, &m)| m == 1)
            .map(|(i, _)| i)
            .collect()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        match self {
            FibreKind::I(n) => {
                let n = *n as usize;
                if n < 3 {
                    return Vec::new();
                }
                (0..n).map(|i| (i, (i + 1) % n)).collect()
            }
            FibreKind::I0Star => vec![(0, 4), (1, 4), (2, 4), (3, 4)],
            FibreKind::IVStar => vec![(0, 1), (1, 6), (2, 3), (3, 6), (4, 5), (5, 6)],
            FibreKind::IIIStar => vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)],
            FibreKind::IIStar => {
                vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)]
            }
        }
    }

    /// Intersection matrix of the components.
    pub fn intersection_matrix(&self) -> IntMatrix {
        match self {
            FibreKind::I(1) => IntMatrix::zeros(1, 1),
            FibreKind::I(2) => IntMatrix::from_rows(&[vec![-2i64, 2], vec![2, -2]]).expect("2x2"),
            _ => {
                let n = self.component_count();
                let mut g = IntMatrix::zeros(n, n);
                for i in 0..n {
                    g[(i, i)] = -2;
                }
                for (a, b) in self.edges() {
                    g[(a, b)] = 1;
                    g[(b, a)] = 1;
                }
                g
            }
        }
    }
}

/// Local correction term of the height pairing for sections meeting the
/// simple components `i` and `j`.
pub fn local_contribution(kind: FibreKind, i: usize, j: usize) -> Result<Rational> {
    let simple = kind.simple_components();
    for c in [i, j] {
        if !simple.contains(&c) {
            return Err(Error::NonSimpleComponent {
                fibre: kind.name(),
                component: c,
            });
        }
    }
    if i == 0 || j == 0 {
        return Ok(Rational::from_integer(0));
    }
    let r = |a: i64, b: i64| Rational::new(a, b);
    Ok(match kind {
        FibreKind::I(n) => {
            let (a, b) = (i.min(j) as i64, i.max(j) as i64);
            r(a * (n as i64 - b), n as i64)
        }
        FibreKind::I0Star => {
            if i == j {
                r(1, 1)
            } else {
                r(1, 2)
            }
        }
        FibreKind::IVStar => {
            if i == j {
                r(4, 3)
            } else {
                r(2, 3)
            }
        }
        FibreKind::IIIStar => r(3, 2),
        FibreKind::IIStar => unreachable!("II* has a single simple component"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KodairaFibre {
    pub kind: FibreKind,
    pub labels: Vec<String>,
}

impl KodairaFibre {
    pub fn new(kind: FibreKind, labels: Vec<String>) -> Result<Self> {
        if labels.len() != kind.component_count() {
            return Err(Error::Invalid(format!(
                "fibre {} has {} components but {} labels",
                kind.name(),
                kind.component_count(),
                labels.len()
            )));
        }
        Ok(KodairaFibre { kind, labels })
    }

    pub fn component(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_kinds() -> Vec<FibreKind> {
        let mut v: Vec<FibreKind> = (1..=12).map(FibreKind::I).collect();
        v.extend([FibreKind::I0Star, FibreKind::IVStar, FibreKind::IIIStar, FibreKind::IIStar]);
        v
    }

    #[test]
    fn multiplicity_vector_spans_radical() {
        for k in all_kinds() {
            let g = k.intersection_matrix();
            let m = k.multiplicities();
            assert!(g.is_symmetric());
            assert_eq!(g.left_apply(&m).unwrap(), vec![0; m.len()], "{}", k.name());
        }
    }

    #[test]
    fn euler_numbers_and_simple_components() {
        assert_eq!(FibreKind::IVStar.euler_number(), 8);
        assert_eq!(FibreKind::IVStar.simple_components(), vec![0, 2, 4]);
        assert_eq!(FibreKind::IIIStar.simple_components(), vec![0, 6]);
        assert_eq!(FibreKind::IIStar.simple_components(), vec![0]);
        assert_eq!(FibreKind::I0Star.simple_components(), vec![0, 1, 2, 3]);
        assert_eq!(FibreKind::I(7).simple_components().len(), 7);
    }

    #[test]
    fn contributions() {
        assert_eq!(local_contribution(FibreKind::I(10), 2, 2).unwrap(), Rational::new(8, 5));
        assert_eq!(local_contribution(FibreKind::I(7), 3, 3).unwrap(), Rational::new(12, 7));
        assert_eq!(local_contribution(FibreKind::I(6), 1, 2).unwrap(), Rational::new(4, 6));
        assert_eq!(local_contribution(FibreKind::I(6), 2, 1).unwrap(), Rational::new(4, 6));
        assert_eq!(local_contribution(FibreKind::IVStar, 2, 2).unwrap(), Rational::new(4, 3));
        assert_eq!(local_contribution(FibreKind::IVStar, 2, 4).unwrap(), Rational::new(2, 3));
        assert_eq!(local_contribution(FibreKind::IIIStar, 6, 6).unwrap(), Rational::new(3, 2));
        assert_eq!(local_contribution(FibreKind::I0Star, 1, 2).unwrap(), Rational::new(1, 2));
        for k in all_kinds() {
            for &c in &k.simple_components() {
                assert_eq!(local_contribution(k, 0, c).unwrap(), Rational::from_integer(0));
            }
        }
        assert!(matches!(
            local_contribution(FibreKind::IVStar, 1, 1),
            Err(Error::NonSimpleComponent { .. })
        ));
    }

    #[test]
    fn parse_kinds() {
        assert_eq!(FibreKind::parse("In", Some(6)).unwrap(), FibreKind::I(6));
        assert_eq!(FibreKind::parse("I13", None).unwrap(), FibreKind::I(13));
        assert_eq!(FibreKind::parse("IV*", None).unwrap(), FibreKind::IVStar);
        assert!(FibreKind::parse("In", None).is_err());
        assert!(FibreKind::parse("V", None).is_err());
    }
}
