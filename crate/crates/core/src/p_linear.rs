//! `F^p`-linear algebra on `F`: coordinates over `F^p`, p-independence,
//! p-degree, greedy p-bases and relative adjunction bases.
//!
//! p-independence is decided through differentials: `{a_1,...,a_k}` is
//! p-independent iff `da_1,...,da_k` are `F`-linearly independent, and
//! `a` lies in `F^p(b_1,...,b_k)` iff `da` lies in the span of the `db_i`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::base_field::{Monomial, Polynomial, RationalFunction};
use crate::error::{Error, Result};
use crate::linalg::{self, Row};

/// Coordinates of `a` over `F^p` in the monomial basis `{ t^e : e in [0,p)^m }`:
/// `a = sum_e (v_e)^p * t^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpCoordinates {
    pub entries: BTreeMap<Vec<u32>, RationalFunction>,
}

impl FpCoordinates {
    /// Evaluates `sum_e (v_e)^p t^e` over a common denominator, reducing once.
    pub fn reconstruct(&self, p: u32, nvars: usize) -> RationalFunction {
        let mut l = Polynomial::one(p, nvars);
        for v in self.entries.values() {
            let d = v.denominator();
            let g = crate::base_field::poly_gcd(&l, d);
            l = &l * &d.exact_div(&g).expect("gcd divides");
        }
        let mut num = Polynomial::zero(p, nvars);
        for (e, v) in &self.entries {
            let cofactor = l.exact_div(v.denominator()).expect("lcm is a multiple");
            let t = Polynomial::monomial(p, Monomial::from_exponents(e), 1);
            num = &num + &(&(v.numerator() * &cofactor).pow(p as u64) * &t);
        }
        RationalFunction::new(num, l.pow(p as u64)).expect("denominator is nonzero")
    }
}

pub fn fp_coordinates(a: &RationalFunction) -> FpCoordinates {
    let (p, n) = (a.characteristic(), a.nvars());
    let h = a.denominator();
    // a = g/h = (g h^{p-1}) / h^p
    let lifted = a.numerator() * &h.pow(p as u64 - 1);
    let entries = lifted
        .split_by_residue()
        .into_iter()
        .map(|(residue, part)| {
            let root = part.pth_root().expect("residue split leaves p-th powers");
            let v = RationalFunction::new(root, h.clone()).expect("denominator is nonzero");
            (residue.exponents().to_vec(), v)
        })
        .filter(|(_, v)| !v.is_zero())
        .collect();
    let coords = FpCoordinates { entries };
    debug_assert_eq!(coords.reconstruct(p, n), *a);
    coords
}

/// The row `(da/dt_1, ..., da/dt_m)` of `da` in the basis `dt_i`.
pub fn differential_row(a: &RationalFunction) -> Row {
    (0..a.nvars()).map(|i| a.partial_derivative(i)).collect()
}

fn differential_rows(s: &[RationalFunction]) -> Vec<Row> {
    s.iter().map(differential_row).collect()
}

pub fn p_degree(s: &[RationalFunction]) -> usize {
    linalg::rank(&differential_rows(s))
}

pub fn p_independent(s: &[RationalFunction]) -> bool {
    if s.is_empty() {
        return true;
    }
    if s.len() > s[0].nvars() {
        return false;
    }
    p_degree(s) == s.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PBasisResult {
    #[serde(skip)]
    pub basis: Vec<RationalFunction>,
    /// Positions of the basis elements in the input list.
    pub indices: Vec<usize>,
    pub pdeg: usize,
}

/// Greedy p-basis of `F^p(S)`: scans `S` in order and keeps an element when
/// its differential raises the rank.
pub fn p_basis_of(s: &[RationalFunction]) -> PBasisResult {
    greedy_extend(&[], s)
}

fn greedy_extend(start: &[RationalFunction], s: &[RationalFunction]) -> PBasisResult {
    let mut rows = differential_rows(start);
    let mut basis = Vec::new();
    let mut indices = Vec::new();
    let limit = s.first().map_or(0, RationalFunction::nvars);
    for (i, a) in s.iter().enumerate() {
        if rows.len() == limit {
            break;
        }
        rows.push(differential_row(a));
        if linalg::rank(&rows) == rows.len() {
            basis.push(a.clone());
            indices.push(i);
        } else {
            rows.pop();
        }
    }
    let pdeg = basis.len();
    PBasisResult { basis, indices, pdeg }
}

/// Whether `a` lies in `F^p(B)`.
pub fn member_fp_adjoin(a: &RationalFunction, b: &[RationalFunction]) -> bool {
    let basis = p_basis_of(b).basis;
    let mut rows = differential_rows(&basis);
    let before = rows.len();
    rows.push(differential_row(a));
    linalg::rank(&rows) == before
}

/// Elements `e_1,...,e_l` of `S`, chosen greedily in input order, with
/// `F^p(A)(S) = F^p(A)(e_1,...,e_l)` and `A ∪ {e_j}` p-independent.
pub fn relative_adjoin_basis(a: &[RationalFunction], s: &[RationalFunction]) -> Result<Vec<RationalFunction>> {
    if !p_independent(a) {
        return Err(Error::InputNotPIndependent);
    }
    Ok(greedy_extend(a, s).basis)
}

fn coordinate_rows(elems: &[RationalFunction]) -> Vec<Row> {
    let coords: Vec<FpCoordinates> = elems.iter().map(fp_coordinates).collect();
    let mut keys: Vec<&Vec<u32>> = coords.iter().flat_map(|c| c.entries.keys()).collect();
    keys.sort();
    keys.dedup();
    coords
        .iter()
        .zip(elems)
        .map(|(c, a)| {
            let zero = RationalFunction::zero(a.characteristic(), a.nvars());
            keys.iter()
                .map(|k| c.entries.get(*k).cloned().unwrap_or_else(|| zero.clone()))
                .collect()
        })
        .collect()
}

/// `dim_{F^p} span_{F^p}(elems)`.
///
/// `sum lambda_i^p a_i = 0` iff `sum lambda_i v_{i,e} = 0` for every
/// coordinate `e`, so this is the `F`-rank of the coordinate matrix.
pub fn fp_linear_rank(elems: &[RationalFunction]) -> usize {
    if elems.is_empty() {
        return 0;
    }
    linalg::rank(&coordinate_rows(elems))
}

/// Positions of a greedy `F^p`-linearly independent subfamily spanning
/// `span_{F^p}(elems)`.
pub fn fp_linear_basis(elems: &[RationalFunction]) -> Vec<usize> {
    let rows = coordinate_rows(elems);
    let mut kept: Vec<Row> = Vec::new();
    let mut out = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        kept.push(row);
        if linalg::rank(&kept) == kept.len() {
            out.push(i);
        } else {
            kept.pop();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_field::FieldDescriptor;

    fn els(f: &crate::base_field::Field, xs: &[&str]) -> Vec<RationalFunction> {
        xs.iter().map(|s| f.parse(s).unwrap()).collect()
    }

    #[test]
    fn coordinates_examples() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        let c = fp_coordinates(&f.parse("x").unwrap());
        assert_eq!(c.entries.len(), 1);
        assert_eq!(c.entries[&vec![1, 0]], f.one());

        let c = fp_coordinates(&f.parse("x^2+y^2").unwrap());
        assert_eq!(c.entries.len(), 1);
        assert_eq!(c.entries[&vec![0, 0]], f.parse("x+y").unwrap());

        let a = f.parse("1/x").unwrap();
        let c = fp_coordinates(&a);
        assert_eq!(c.entries.len(), 1);
        assert_eq!(c.entries[&vec![1, 0]], f.parse("1/x").unwrap());
        assert_eq!(c.reconstruct(2, 2), a);
    }

    #[test]
    fn independence_examples() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        assert!(p_independent(&els(&f, &["x", "y"])));
        assert!(!p_independent(&els(&f, &["x", "x^2*y^2"])));
        assert!(p_independent(&els(&f, &["x", "x*y"])));
        assert!(!p_independent(&els(&f, &["x", "y", "x+y^3"])));
    }

    #[test]
    fn degree_examples() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        assert_eq!(p_degree(&els(&f, &["x", "y", "x*y"])), 2);
        assert_eq!(p_degree(&[]), 0);
        assert_eq!(p_degree(&els(&f, &["x^2"])), 0);
    }

    #[test]
    fn basis_examples() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        let r = p_basis_of(&els(&f, &["x", "x^2", "y"]));
        assert_eq!(r.basis, els(&f, &["x", "y"]));
        assert_eq!((r.pdeg, r.indices.clone()), (2, vec![0, 2]));
        assert_eq!(p_basis_of(&els(&f, &["x", "x"])).basis, els(&f, &["x"]));
        assert_eq!(p_basis_of(&els(&f, &["x*y", "x", "y"])).basis, els(&f, &["x*y", "x"]));
    }

    #[test]
    fn membership_examples() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        assert!(member_fp_adjoin(&f.parse("x*y").unwrap(), &els(&f, &["x", "y"])));
        assert!(!member_fp_adjoin(&f.parse("x").unwrap(), &els(&f, &["y"])));
        assert!(member_fp_adjoin(&f.parse("x^2").unwrap(), &[]));
    }

    #[test]
    fn relative_basis_examples() {
        let f = FieldDescriptor::with_vars(2, &["x", "y", "z"]);
        let a = els(&f, &["x"]);
        assert_eq!(
            relative_adjoin_basis(&a, &els(&f, &["x", "y"])).unwrap(),
            els(&f, &["y"])
        );
        assert!(relative_adjoin_basis(&a, &els(&f, &["x^2"])).unwrap().is_empty());
        assert_eq!(
            relative_adjoin_basis(&a, &els(&f, &["x*y", "z"])).unwrap(),
            els(&f, &["x*y", "z"])
        );
        assert_eq!(
            relative_adjoin_basis(&els(&f, &["x", "x^3"]), &els(&f, &["y"])),
            Err(Error::InputNotPIndependent)
        );
    }

    #[test]
    fn fp_linear_rank_examples() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        assert_eq!(fp_linear_rank(&els(&f, &["1", "x", "1+x"])), 2);
        assert_eq!(fp_linear_rank(&els(&f, &["1", "x^2"])), 1);
        assert_eq!(fp_linear_basis(&els(&f, &["0", "1", "x", "1+x", "y"])), vec![1, 2, 4]);
    }
}
