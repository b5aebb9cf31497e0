//! Integral lattices given by Gram matrices: Smith normal form, discriminant
//! groups, primitive closures and divisibility of classes.

pub mod catalog;
mod matrix;
mod snf;

pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{Error, Result};

/// A finite-rank integral lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    pub name: Option<String>,
    pub gram: IntMatrix,
}

impl GramLattice {
    pub fn new(name: Option<String>, gram: IntMatrix) -> Result<Self> {
        if !gram.is_symmetric() || gram.nrows() == 0 {
            return Err(Error::Invalid("Gram matrix must be square, symmetric and nonempty".into()));
        }
        Ok(GramLattice { name, gram })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(None, IntMatrix::from_rows(rows)?)
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn determinant(&self) -> Result<i128> {
        self.gram.determinant()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)] % 2 == 0)
    }

    /// (positive, negative) inertia, by symmetric Gaussian elimination over
    /// the rationals.
    pub fn signature(&self) -> Result<(usize, usize)> {
        type Q = num_rational::Ratio<i128>;
        let n = self.rank();
        let zero = Q::from_integer(0);
        let mut a: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| Q::from_integer(self.gram[(i, j)])).collect())
            .collect();
        let (mut pos, mut neg) = (0, 0);
        for k in 0..n {
            if a[k][k] == zero {
                if let Some(j) = (k + 1..n).find(|&j| a[j][j] != zero) {
                    a.swap(k, j);
                    for row in a.iter_mut() {
                        row.swap(k, j);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| a[k][j] != zero) {
                    for c in 0..n {
                        let v = a[j][c];
                        a[k][c] += v;
                    }
                    for row in a.iter_mut() {
                        let v = row[j];
                        row[k] += v;
                    }
                } else {
                    return Err(Error::DegenerateLattice);
                }
            }
            let piv = a[k][k];
            if piv > zero {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                let f = a[i][k] / piv;
                if f == zero {
                    continue;
                }
                for c in 0..n {
                    let v = a[k][c] * f;
                    a[i][c] -= v;
                }
                for row in a.iter_mut() {
                    let v = row[k] * f;
                    row[i] -= v;
                }
            }
        }
        Ok((pos, neg))
    }

    /// Parses a lattice reference: a catalog name, `{"gram": ...}`,
    /// `{"name": "E8"}` or `{"sum": [ref, ...]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => catalog::lattice(s),
            Value::Object(obj) => {
                if let Some(sum) = obj.get("sum") {
                    let parts = sum
                        .as_array()
                        .ok_or_else(|| Error::Invalid("`sum` must be an array".into()))?
                        .iter()
                        .map(Self::from_json)
                        .collect::<Result<Vec<_>>>()?;
                    let mut l = catalog::direct_sum(&parts)?;
                    if let Some(n) = obj.get("name").and_then(Value::as_str) {
                        l.name = Some(n.to_string());
                    }
                    return Ok(l);
                }
                let name = obj.get("name").and_then(Value::as_str).map(str::to_string);
                match obj.get("gram") {
                    Some(g) => {
                        let rows: Vec<Vec<i64>> = serde_json::from_value(g.clone())?;
                        Self::new(name, IntMatrix::from_rows(&rows)?)
                    }
                    None => match name {
                        Some(n) => catalog::lattice(&n),
                        None => Err(Error::Invalid("lattice needs `gram`, `name` or `sum`".into())),
                    },
                }
            }
            Value::Array(_) => {
                let rows: Vec<Vec<i64>> = serde_json::from_value(v.clone())?;
                Self::from_rows(&rows)
            }
            _ => Err(Error::Invalid("unrecognised lattice reference".into())),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "name": self.name,
            "gram": self.gram.to_rows(),
        })
    }
}

/// A finitely generated subgroup of an ambient lattice, given by possibly
/// dependent generators in ambient coordinates.
#[derive(Clone, Debug)]
pub struct EmbeddedSublattice {
    pub ambient: GramLattice,
    pub basis: Vec<Vec<i128>>,
}

impl EmbeddedSublattice {
    pub fn new(ambient: GramLattice, basis: Vec<Vec<i128>>) -> Result<Self> {
        let n = ambient.rank();
        if let Some(v) = basis.iter().find(|v| v.len() != n) {
            return Err(Error::Dimension(format!(
                "vector of length {} in a rank {} lattice",
                v.len(),
                n
            )));
        }
        Ok(EmbeddedSublattice { ambient, basis })
    }

    fn generator_matrix(&self) -> Result<IntMatrix> {
        if self.basis.is_empty() {
            return Ok(IntMatrix::zeros(1, self.ambient.rank()));
        }
        IntMatrix::from_rows(&self.basis)
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(smith_normal_form(&self.generator_matrix()?)?.rank())
    }

    /// Gram matrix of the given generators.
    pub fn gram(&self) -> Result<IntMatrix> {
        self.ambient.gram.congruence(&self.generator_matrix()?)
    }
}

/// A finite abelian group as invariant factors `d1 | d2 | ...`, each at
/// least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct AbelianInvariants {
    pub factors: Vec<u64>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Normalises arbitrary cyclic orders into invariant factors.
    pub fn from_cyclic(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::Invalid("cyclic factor of order 0".into()));
        }
        let d: Vec<i128> = orders.iter().map(|&x| x as i128).collect();
        if d.is_empty() {
            return Ok(Self::trivial());
        }
        let s = smith_normal_form(&IntMatrix::diagonal(&d))?;
        Ok(AbelianInvariants {
            factors: s.torsion().into_iter().map(|x| x as u64).collect(),
        })
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_elementary(&self, p: u64) -> bool {
        self.factors.iter().all(|&f| f == p)
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|x| format!("Z/{x}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

fn torsion_invariants(s: &SmithForm) -> AbelianInvariants {
    AbelianInvariants {
        factors: s.torsion().into_iter().map(|x| x as u64).collect(),
    }
}

/// Invariant factors of `L^* / L`; the order equals `|det gram|`.
pub fn discriminant_group(l: &GramLattice) -> Result<AbelianInvariants> {
    let s = smith_normal_form(&l.gram)?;
    if s.rank() < l.rank() {
        return Err(Error::DegenerateLattice);
    }
    Ok(torsion_invariants(&s))
}

/// Saturation of a sublattice together with the glue group `closure / S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveClosure {
    pub basis: Vec<Vec<i128>>,
    pub glue: AbelianInvariants,
}

/// `{v : m v in span(S) for some m >= 1}`. With `B = P^-1 D Q^-1`, the row
/// space of `B` is spanned by `d_i` times the first `r` rows of `Q^-1`, so
/// those rows span the saturation and the `d_i` are the glue.
pub fn primitive_closure(s: &EmbeddedSublattice) -> Result<PrimitiveClosure> {
    let snf = smith_normal_form(&s.generator_matrix()?)?;
    let r = snf.rank();
    Ok(PrimitiveClosure {
        basis: (0..r).map(|i| snf.q_inv.row(i).to_vec()).collect(),
        glue: torsion_invariants(&snf),
    })
}

/// Returns `v / p` when every coordinate of `v` is divisible by `p`.
pub fn is_p_divisible_class(v: &[i128], l: &GramLattice, p: u64) -> Result<Option<Vec<i128>>> {
    if v.len() != l.rank() {
        return Err(Error::Dimension(format!(
            "vector of length {} in a rank {} lattice",
            v.len(),
            l.rank()
        )));
    }
    if p == 0 {
        return Err(Error::Invalid("divisor must be positive".into()));
    }
    let p = p as i128;
    Ok(v.iter()
        .all(|x| x % p == 0)
        .then(|| v.iter().map(|x| x / p).collect()))
}

/// The lattice `R + sum_j Z (g_j / n)` for a root lattice `R` (Gram `root`)
/// and glue vectors `g_j` written in `R`'s coordinates.
#[derive(Clone, Debug)]
pub struct Overlattice {
    pub lattice: GramLattice,
    /// `old_coords[i]` writes the i-th basis vector of `R` in the new basis.
    pub old_coords: Vec<Vec<i128>>,
    pub index: u64,
}

pub fn overlattice(root: &IntMatrix, glue: &[Vec<i128>], n: i128) -> Result<Overlattice> {
    let rank = root.nrows();
    if n <= 0 {
        return Err(Error::Invalid("glue denominator must be positive".into()));
    }
    // Work in coordinates scaled by n: R is generated by n*e_i, glue by g_j.
    let mut gens: Vec<Vec<i128>> = (0..rank)
        .map(|i| (0..rank).map(|j| if i == j { n } else { 0 }).collect())
        .collect();
    for g in glue {
        if g.len() != rank {
            return Err(Error::Dimension("glue vector length".into()));
        }
        gens.push(g.clone());
    }
    let snf = smith_normal_form(&IntMatrix::from_rows(&gens)?)?;
    let d = snf.diagonal();
    if snf.rank() != rank {
        return Err(Error::DegenerateLattice);
    }
    // basis b_i = d_i * row_i(Q^-1), in scaled coordinates
    let basis_rows: Vec<Vec<i128>> = (0..rank)
        .map(|i| {
            snf.q_inv
                .row(i)
                .iter()
                .map(|&x| matrix::mul(x, d[i]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let b = IntMatrix::from_rows(&basis_rows)?;
    let scaled = root.congruence(&b)?;
    let nn = matrix::mul(n, n)?;
    let mut gram = IntMatrix::zeros(rank, rank);
    for i in 0..rank {
        for j in 0..rank {
            if scaled[(i, j)] % nn != 0 {
                return Err(Error::Invalid("glue vectors do not define an integral lattice".into()));
            }
            gram[(i, j)] = scaled[(i, j)] / nn;
        }
    }
    // n*e_i = x B with x = n e_i Q diag(1/d)
    let old_coords = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| {
                    let num = matrix::mul(n, snf.q[(i, j)])?;
                    if num % d[j] != 0 {
                        return Err(Error::Invalid("root basis not integral in overlattice".into()));
                    }
                    Ok(num / d[j])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let index: i128 = d
        .iter()
        .map(|&x| n / x)
        .try_fold(1i128, matrix::mul)?;
    Ok(Overlattice {
        lattice: GramLattice::new(None, gram)?,
        old_coords,
        index: index as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(name: &str) -> GramLattice {
        catalog::lattice(name).unwrap()
    }

    #[test]
    fn discriminant_examples() {
        assert!(discriminant_group(&lat("E8")).unwrap().is_trivial());
        for p in [2usize, 3, 5, 7] {
            let g = discriminant_group(&lat(&format!("A{}", p - 1))).unwrap();
            assert_eq!(g.factors, vec![p as u64]);
        }
        let a2a2 = catalog::direct_sum(&[lat("A2"), lat("A2")]).unwrap();
        assert_eq!(discriminant_group(&a2a2).unwrap().factors, vec![3, 3]);
        assert_eq!(discriminant_group(&lat("D4")).unwrap().factors, vec![2, 2]);
        let degenerate = GramLattice::from_rows(&[vec![2, 2], vec![2, 2]]).unwrap();
        assert!(matches!(discriminant_group(&degenerate), Err(Error::DegenerateLattice)));
    }

    #[test]
    fn closure_examples() {
        let z2 = GramLattice::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        let s = EmbeddedSublattice::new(z2.clone(), vec![vec![2, 0]]).unwrap();
        let c = primitive_closure(&s).unwrap();
        assert_eq!(c.glue.factors, vec![2]);
        assert_eq!(c.basis.len(), 1);
        assert_eq!(c.basis[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 0]);

        let full = EmbeddedSublattice::new(z2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(primitive_closure(&full).unwrap().glue.is_trivial());
    }

    #[test]
    fn divisibility_examples() {
        let z2 = GramLattice::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(is_p_divisible_class(&[2, 4], &z2, 2).unwrap(), Some(vec![1, 2]));
        assert_eq!(is_p_divisible_class(&[1, 2], &z2, 2).unwrap(), None);
        assert!(is_p_divisible_class(&[1], &z2, 2).is_err());
    }

    #[test]
    fn signatures() {
        assert_eq!(lat("K3").signature().unwrap(), (3, 19));
        assert_eq!(lat("ENRIQUES_FREE").signature().unwrap(), (1, 9));
        assert_eq!(lat("E8").signature().unwrap(), (0, 8));
        assert_eq!(lat("U").signature().unwrap(), (1, 1));
    }

    #[test]
    fn d4_as_overlattice_of_4a1() {
        // D4 contains 4A1 with glue (e1+e2+e3+e4)/2
        let root = IntMatrix::diagonal(&[-2, -2, -2, -2]);
        let o = overlattice(&root, &[vec![1, 1, 1, 1]], 2).unwrap();
        assert_eq!(o.index, 2);
        assert_eq!(o.lattice.determinant().unwrap(), 4);
        assert!(o.lattice.is_even());
        let back = o.lattice.gram.congruence(&IntMatrix::from_rows(&o.old_coords).unwrap()).unwrap();
        assert_eq!(back, root);
    }

    #[test]
    fn lattice_json_refs() {
        let v: Value = serde_json::json!({"sum": ["U", "E8(-1)"]});
        let l = GramLattice::from_json(&v).unwrap();
        assert_eq!(l.rank(), 10);
        assert_eq!(l.determinant().unwrap(), -1);
        let v: Value = serde_json::json!({"gram": [[-2, 1], [1, -2]]});
        assert_eq!(GramLattice::from_json(&v).unwrap().determinant().unwrap(), 3);
        assert!(GramLattice::from_json(&serde_json::json!({"gram": [[1, 2], [3, 4]]})).is_err());
    }
}
