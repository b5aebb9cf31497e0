use k3lat::lattice::{
    discriminant_group, primitive_closure, smith_normal_form, EmbeddedSublattice, GramLattice, IntMatrix,
};
use k3lat::oracle::{verify_smith_form, RationalNullspace};
use k3lat::{format_rational, parse_rational, Rational};
use proptest::prelude::*;

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
    })
}

fn to_i128(rows: &[Vec<i64>]) -> Vec<Vec<i128>> {
    rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_certified_diagonalisation(rows in matrix(6, 9)) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let s = smith_normal_form(&m).unwrap();
        prop_assert!(verify_smith_form(&m, &s));
        let d = s.diagonal();
        for w in d.windows(2) {
            prop_assert!(w[0] >= 0);
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
        prop_assert_eq!(s.rank(), m.ncols() - RationalNullspace::of(&m).dimension());
    }

    #[test]
    fn smith_form_of_transpose_has_same_diagonal(rows in matrix(5, 20)) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let a = smith_normal_form(&m).unwrap().diagonal();
        let b = smith_normal_form(&m.transpose()).unwrap().diagonal();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn discriminant_order_is_absolute_determinant(rows in matrix(4, 5)) {
        let n = rows.len();
        let mut gram = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let x = rows[i].get(j).copied().unwrap_or(0) + rows[j].get(i).copied().unwrap_or(0);
                gram[i][j] = x;
            }
        }
        let l = GramLattice::from_rows(&gram).unwrap();
        let det = l.determinant().unwrap();
        prop_assume!(det != 0);
        prop_assert_eq!(discriminant_group(&l).unwrap().order() as i128, det.abs());
    }

    #[test]
    fn closure_is_idempotent_and_saturated(rows in matrix(4, 6), extra in 1i64..5) {
        let n = rows[0].len();
        let ambient = GramLattice::new(None, IntMatrix::identity(n)).unwrap();
        let scaled: Vec<Vec<i128>> = to_i128(&rows)
            .into_iter()
            .map(|r| r.into_iter().map(|x| x * extra as i128).collect())
            .collect();
        let s = EmbeddedSublattice::new(ambient.clone(), scaled).unwrap();
        let c = primitive_closure(&s).unwrap();
        let again = primitive_closure(&EmbeddedSublattice::new(ambient, c.basis.clone()).unwrap()).unwrap();
        prop_assert!(again.glue.is_trivial());
        prop_assert_eq!(again.basis.len(), c.basis.len());
        if !c.basis.is_empty() {
            prop_assert_eq!(c.glue.order() % extra.pow(c.basis.len() as u32) as u64, 0);
        }
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
        let r = Rational::new(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}
