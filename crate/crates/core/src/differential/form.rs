use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::base_field::RationalFunction;
use crate::error::{Error, Result};

/// Strictly increasing 0-based variable indices `i_1 < ... < i_n`,
/// standing for `dt_{i_1} ∧ ... ∧ dt_{i_n}`.
pub type IndexTuple = SmallVec<[u16; 4]>;

/// All strictly increasing `n`-tuples from `0..m`, in lexicographic order.
pub fn index_tuples(m: usize, n: usize) -> Vec<IndexTuple> {
    fn rec(start: usize, m: usize, n: usize, cur: &mut IndexTuple, out: &mut Vec<IndexTuple>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < n - cur.len() {
                break;
            }
            cur.push(i as u16);
            rec(i + 1, m, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n <= m {
        rec(0, m, n, &mut SmallVec::new(), &mut out);
    }
    out
}

/// Merges two sorted tuples; `None` on a repeated index, otherwise the
/// union together with the sign of the shuffle permutation.
fn merge_sign(a: &IndexTuple, b: &IndexTuple) -> Option<(IndexTuple, bool)> {
    let mut out = IndexTuple::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut odd = false;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            // b[j] jumps over the remaining a's
            odd ^= (a.len() - i) % 2 == 1;
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((out, odd))
}

/// Element of `Omega^n(F)` in the basis `dt_I`.
///
/// Zero coefficients are never stored; degree-0 forms are scalars.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DifferentialForm {
    p: u32,
    nvars: usize,
    degree: usize,
    terms: BTreeMap<IndexTuple, RationalFunction>,
}

impl DifferentialForm {
    pub fn zero(p: u32, nvars: usize, degree: usize) -> Self {
        DifferentialForm {
            p,
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(a: &RationalFunction) -> Self {
        let mut f = Self::zero(a.characteristic(), a.nvars(), 0);
        f.add_term(IndexTuple::new(), a.clone());
        f
    }

    /// `c * dt_I` for a strictly increasing tuple `I`.
    pub fn basis_element(c: &RationalFunction, indices: &[u16]) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        let mut f = Self::zero(c.characteristic(), c.nvars(), indices.len());
        f.add_term(IndexTuple::from_slice(indices), c.clone());
        f
    }

    pub fn from_terms(
        p: u32,
        nvars: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (IndexTuple, RationalFunction)>,
    ) -> Self {
        let mut f = Self::zero(p, nvars, degree);
        for (k, v) in terms {
            assert_eq!(k.len(), degree);
            f.add_term(k, v);
        }
        f
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexTuple, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, indices: &[u16]) -> RationalFunction {
        self.terms
            .get(indices)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(self.p, self.nvars))
    }

    fn add_term(&mut self, k: IndexTuple, v: RationalFunction) {
        if v.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &v;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&RationalFunction::constant(self.p, self.nvars, -1)))
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        if c.is_zero() {
            return Self::zero(self.p, self.nvars, self.degree);
        }
        DifferentialForm {
            p: self.p,
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// `self ∧ other`.
    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.p, self.nvars, self.degree + other.degree);
        if self.degree + other.degree > self.nvars {
            return out;
        }
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if let Some((k, odd)) = merge_sign(i, j) {
                    let c = a * b;
                    out.add_term(k, if odd { -c } else { c });
                }
            }
        }
        out
    }

    /// The exterior derivative `d: Omega^n -> Omega^{n+1}`,
    /// `d(c dt_I) = dc ∧ dt_I`.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.p, self.nvars, self.degree + 1);
        for (idx, c) in &self.terms {
            for k in 0..self.nvars {
                if idx.contains(&(k as u16)) {
                    continue;
                }
                let dk = c.partial_derivative(k);
                if dk.is_zero() {
                    continue;
                }
                let single: IndexTuple = SmallVec::from_slice(&[k as u16]);
                if let Some((merged, odd)) = merge_sign(&single, idx) {
                    out.add_term(merged, if odd { -dk } else { dk });
                }
            }
        }
        out
    }

    /// Coefficient vector in the lexicographic basis of `Omega^n`.
    pub fn to_vector(&self, columns: &[IndexTuple]) -> Vec<RationalFunction> {
        columns.iter().map(|c| self.coefficient(c)).collect()
    }

    pub fn from_vector(p: u32, nvars: usize, degree: usize, columns: &[IndexTuple], v: &[RationalFunction]) -> Self {
        Self::from_terms(p, nvars, degree, columns.iter().cloned().zip(v.iter().cloned()))
    }

    /// Re-reads the form over `F_p(t_1,...,t_m, t_{m+1},...)`.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        DifferentialForm {
            p: self.p,
            nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.extend_vars(nvars)))
                .collect(),
        }
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> FormDisplay<'a> {
        FormDisplay { form: self, names }
    }
}

/// `da` in the basis `dt_i`.
pub fn d_of_element(a: &RationalFunction) -> DifferentialForm {
    let terms = (0..a.nvars()).map(|i| (SmallVec::from_slice(&[i as u16]), a.partial_derivative(i)));
    DifferentialForm::from_terms(a.characteristic(), a.nvars(), 1, terms)
}

pub fn wedge(a: &DifferentialForm, b: &DifferentialForm) -> DifferentialForm {
    a.wedge(b)
}

/// `d: Omega^{n-1} -> Omega^n`.
pub fn d_operator(w: &DifferentialForm) -> DifferentialForm {
    w.d()
}

/// `da_1 ∧ ... ∧ da_n`; the empty product is the scalar 1.
pub fn wedge_of_differentials(elems: &[RationalFunction], p: u32, nvars: usize) -> DifferentialForm {
    elems
        .iter()
        .fold(DifferentialForm::scalar(&RationalFunction::one(p, nvars)), |acc, a| {
            acc.wedge(&d_of_element(a))
        })
}

/// The logarithmic form `da_1/a_1 ∧ ... ∧ da_n/a_n`.
pub fn log_form(elems: &[RationalFunction], p: u32, nvars: usize) -> Result<DifferentialForm> {
    let mut acc = DifferentialForm::scalar(&RationalFunction::one(p, nvars));
    for a in elems {
        let inv = a.inv().map_err(|_| Error::ZeroArgument)?;
        acc = acc.wedge(&d_of_element(a).scale(&inv));
    }
    Ok(acc)
}

pub struct FormDisplay<'a> {
    form: &'a DifferentialForm,
    names: &'a [String],
}

impl fmt::Display for FormDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.form.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in self.form.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = c.display_with(self.names).to_string();
            let basis: Vec<String> = idx
                .iter()
                .map(|&i| format!("d{}", self.names.get(i as usize).map_or("?", String::as_str)))
                .collect();
            match (c.is_one(), basis.is_empty()) {
                (_, true) => write!(f, "{coeff}")?,
                (true, false) => write!(f, "{}", basis.join("^"))?,
                (false, false) => write!(f, "({coeff}) {}", basis.join("^"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_field::FieldDescriptor;

    #[test]
    fn tuples_in_lex_order() {
        let t = index_tuples(4, 2);
        assert_eq!(t.len(), 6);
        assert_eq!(t[0].as_slice(), &[0, 1]);
        assert_eq!(t[5].as_slice(), &[2, 3]);
        assert_eq!(index_tuples(2, 3).len(), 0);
        assert_eq!(index_tuples(3, 0).len(), 1);
    }

    #[test]
    fn d_examples() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        let dx = d_of_element(&f.parse("x").unwrap());
        assert_eq!(dx, DifferentialForm::basis_element(&f.one(), &[0]));
        let w = d_of_element(&f.parse("x^2*y").unwrap());
        assert_eq!(w, DifferentialForm::basis_element(&f.parse("x^2").unwrap(), &[1]));
        assert!(d_of_element(&f.constant(1)).is_zero());
    }

    #[test]
    fn wedge_sign_rule() {
        let f = FieldDescriptor::with_vars(3, &["x", "y", "z"]);
        let d = |s: &str| d_of_element(&f.parse(s).unwrap());
        assert!(d("x").wedge(&d("x")).is_zero());
        let yx = d("y").wedge(&d("x"));
        assert_eq!(yx, DifferentialForm::basis_element(&f.constant(-1), &[0, 1]));
        let xdy = d("y").scale(&f.parse("x").unwrap());
        assert_eq!(
            xdy.wedge(&d("z")),
            DifferentialForm::basis_element(&f.parse("x").unwrap(), &[1, 2])
        );
        // in characteristic 2 the sign disappears
        let g = FieldDescriptor::with_vars(2, &["x", "y"]);
        let e = |s: &str| d_of_element(&g.parse(s).unwrap());
        assert_eq!(e("y").wedge(&e("x")), e("x").wedge(&e("y")));
    }

    #[test]
    fn d_operator_examples() {
        let f = FieldDescriptor::with_vars(3, &["x", "y", "z"]);
        let xdy = DifferentialForm::basis_element(&f.parse("x").unwrap(), &[1]);
        assert_eq!(xdy.d(), DifferentialForm::basis_element(&f.one(), &[0, 1]));
        let a = f.parse("(x*y+z^2)/(x+y)").unwrap();
        assert!(d_of_element(&a).d().is_zero());
        let g = FieldDescriptor::with_vars(2, &["x", "y"]);
        assert!(DifferentialForm::basis_element(&g.parse("x^2").unwrap(), &[1])
            .d()
            .is_zero());
    }

    #[test]
    fn log_form_examples() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        let x = f.parse("x").unwrap();
        assert_eq!(
            log_form(&[x.clone()], 2, 2).unwrap(),
            DifferentialForm::basis_element(&f.parse("1/x").unwrap(), &[0])
        );
        assert!(log_form(&[x.clone(), x.clone()], 2, 2).unwrap().is_zero());
        let expected = DifferentialForm::from_terms(
            2,
            2,
            1,
            [
                (SmallVec::from_slice(&[0]), f.parse("1/x").unwrap()),
                (SmallVec::from_slice(&[1]), f.parse("1/y").unwrap()),
            ],
        );
        assert_eq!(log_form(&[f.parse("x*y").unwrap()], 2, 2).unwrap(), expected);
        assert_eq!(log_form(&[f.zero()], 2, 2), Err(Error::ZeroArgument));
    }
}
