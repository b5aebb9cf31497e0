//! Exact lattice, elliptic-fibration and finite-group computations for
//! classifying fundamental groups of open K3 and Enriques surfaces with
//! cyclic quotient singularities.

pub mod acceptance;
pub mod classifier;
pub mod data;
pub mod elliptic;
pub mod error;
pub mod geometry;
pub mod groups;
pub mod lattice;
pub mod oracle;
pub mod par;
pub mod root_config;

pub use error::{Error, Result};

/// Exact rational numbers used for heights and divisor coefficients.
pub type Rational = num_rational::Ratio<i64>;

/// Default bound on enumerated candidates for exhaustive searches.
pub const DEFAULT_MAX_CANDIDATES: u128 = 1_000_000_000;

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Parses a rational written as `a`, `-a` or `a/b`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Invalid(format!("not a rational number: `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn rationals_round_trip() {
        for s in ["0", "-3", "8/5", "-2/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/2").unwrap(), Rational::from_integer(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
