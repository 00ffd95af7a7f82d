use crate::base_field::RationalFunction;
use crate::error::{Error, Result};
use crate::exec::{map_collect, ExecMode};
use crate::linalg::{self, Row};

use super::form::{index_tuples, DifferentialForm, IndexTuple};

/// A subspace of `Omega^n(F)` in reduced row echelon form with respect to
/// the lexicographically ordered basis `dt_I`.
///
/// RREF is unique, so two bases describe the same subspace exactly when
/// they are equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    p: u32,
    nvars: usize,
    degree: usize,
    rows: Vec<Row>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn zero(p: u32, nvars: usize, degree: usize) -> Self {
        SubspaceBasis {
            p,
            nvars,
            degree,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// The whole of `Omega^n(F)`.
    pub fn full(p: u32, nvars: usize, degree: usize) -> Self {
        let cols = index_tuples(nvars, degree);
        let one = RationalFunction::one(p, nvars);
        let forms: Vec<DifferentialForm> = cols.iter().map(|c| DifferentialForm::basis_element(&one, c)).collect();
        Self::span(p, nvars, degree, &forms)
    }

    /// Canonical basis of the `F`-span of `forms` (all of degree `degree`).
    pub fn span(p: u32, nvars: usize, degree: usize, forms: &[DifferentialForm]) -> Self {
        let cols = index_tuples(nvars, degree);
        let rows: Vec<Row> = forms
            .iter()
            .filter(|f| !f.is_zero())
            .map(|f| {
                assert_eq!(f.degree(), degree, "spanning forms must share the subspace degree");
                f.to_vector(&cols)
            })
            .collect();
        Self::from_rows(p, nvars, degree, &rows)
    }

    pub(crate) fn from_rows(p: u32, nvars: usize, degree: usize, rows: &[Row]) -> Self {
        let (rows, pivots) = linalg::rref(rows);
        SubspaceBasis {
            p,
            nvars,
            degree,
            rows,
            pivots,
        }
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

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == index_tuples(self.nvars, self.degree).len()
    }

    /// Pivot basis tuples in increasing lexicographic order.
    pub fn pivot_tuples(&self) -> Vec<IndexTuple> {
        let cols = index_tuples(self.nvars, self.degree);
        self.pivots.iter().map(|&c| cols[c].clone()).collect()
    }

    pub fn forms(&self) -> Vec<DifferentialForm> {
        let cols = index_tuples(self.nvars, self.degree);
        self.rows
            .iter()
            .map(|r| DifferentialForm::from_vector(self.p, self.nvars, self.degree, &cols, r))
            .collect()
    }

    pub fn contains(&self, w: &DifferentialForm) -> bool {
        if w.is_zero() {
            return true;
        }
        if w.degree() != self.degree {
            return false;
        }
        let cols = index_tuples(self.nvars, self.degree);
        let mut rows = self.rows.clone();
        rows.push(w.to_vector(&cols));
        linalg::rank(&rows) == self.rows.len()
    }

    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> bool {
        self.degree == other.degree && self.forms().iter().all(|w| other.contains(w))
    }

    /// Sum of two subspaces of the same degree.
    pub fn sum(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Self::from_rows(self.p, self.nvars, self.degree, &rows))
    }
}

/// Whether two subspaces coincide.
pub fn subspace_equal(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<bool> {
    if a.degree != b.degree {
        return Err(Error::DegreeMismatch(a.degree, b.degree));
    }
    Ok(a == b)
}

/// `ann Omega^n(U) = { w in Omega^n : w ∧ u = 0 for all u in U }`, solved as
/// a linear system with one unknown per basis tuple of `Omega^n` and one
/// equation per pair (generator, basis tuple of `Omega^{n+r}`).
pub fn ann_bruteforce(u: &[DifferentialForm], n: usize, p: u32, nvars: usize) -> SubspaceBasis {
    ann_bruteforce_with(u, n, p, nvars, ExecMode::default())
}

pub fn ann_bruteforce_with(u: &[DifferentialForm], n: usize, p: u32, nvars: usize, mode: ExecMode) -> SubspaceBasis {
    let unknowns = index_tuples(nvars, n);
    let generators: Vec<&DifferentialForm> = u.iter().filter(|w| !w.is_zero()).collect();
    if let Some(r) = generators.first().map(|w| w.degree()) {
        assert!(
            generators.iter().all(|w| w.degree() == r),
            "annihilated forms must share one degree"
        );
    }
    let one = RationalFunction::one(p, nvars);
    let zero = RationalFunction::zero(p, nvars);
    // equations in fixed order: by generator, then by target tuple
    let blocks: Vec<Vec<Row>> = map_collect(mode, &generators, |w| {
        let targets = index_tuples(nvars, n + w.degree());
        let products: Vec<DifferentialForm> = unknowns
            .iter()
            .map(|i| DifferentialForm::basis_element(&one, i).wedge(w))
            .collect();
        targets
            .iter()
            .map(|k| products.iter().map(|prod| prod.coefficient(k)).collect::<Row>())
            .filter(|row| row.iter().any(|c| !c.is_zero()))
            .collect()
    });
    let equations: Vec<Row> = blocks.into_iter().flatten().collect();
    let solutions = linalg::nullspace(&equations, unknowns.len(), &zero);
    SubspaceBasis::from_rows(p, nvars, n, &solutions)
}
