//! Symbolic annihilator descriptions and their closed forms.

use serde::Serialize;

use crate::base_field::RationalFunction;
use crate::error::{Error, Result};
use crate::exec::{map_collect, ExecMode};
use crate::p_linear::{p_basis_of, p_degree, p_independent, relative_adjoin_basis};

use super::form::{index_tuples, wedge_of_differentials, DifferentialForm};
use super::subspace::SubspaceBasis;

/// The family `dS_1 ∧ ... ∧ dS_r = { ds_1 ∧ ... ∧ ds_r : s_i in S_i }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetWedgeSpec {
    pub sets: Vec<Vec<RationalFunction>>,
}

impl SetWedgeSpec {
    pub fn new(sets: Vec<Vec<RationalFunction>>) -> Result<Self> {
        if sets.iter().any(Vec::is_empty) {
            return Err(Error::Semantic("every set of a set wedge must be nonempty".into()));
        }
        Ok(SetWedgeSpec { sets })
    }

    /// Greedy p-bases of `F^p(S_i)`, one per set.
    pub fn p_bases(&self) -> Vec<Vec<RationalFunction>> {
        self.sets.iter().map(|s| p_basis_of(s).basis).collect()
    }
}

/// Cartesian product of the given lists, first list varying slowest.
pub fn transversals<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.into_iter()
            .flat_map(|prefix| {
                list.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

/// All wedges `da_{1 j_1} ∧ ... ∧ da_{r j_r}` over transversals of `lists`.
pub fn transversal_wedges(lists: &[Vec<RationalFunction>], p: u32, nvars: usize) -> Vec<DifferentialForm> {
    transversals(lists)
        .iter()
        .map(|t| wedge_of_differentials(t, p, nvars))
        .collect()
}

/// Whether `dS_1 ∧ ... ∧ dS_r ≠ {0}`; on success also returns the first
/// transversal of the per-set p-bases whose wedge is nonzero.
pub fn set_wedge_nonzero(spec: &SetWedgeSpec) -> (bool, Option<Vec<RationalFunction>>) {
    let bases = spec.p_bases();
    if bases.iter().any(Vec::is_empty) {
        return (false, None);
    }
    match transversals(&bases).into_iter().find(|t| p_independent(t)) {
        Some(w) => (true, Some(w)),
        None => (false, None),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorStyle {
    /// `d prefix_1 ∧ ... ∧ d prefix_j ∧ Omega^{tail}(F)`.
    Omega,
    /// `[dy_1/y_1 ∧ ... ∧ dy_arity/y_arity | y_i in F^p(prefix)^*] ∧ nu_{tail}(F)`.
    Nu { arity: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorItem {
    pub prefix: Vec<RationalFunction>,
    pub tail_degree: usize,
    pub style: GeneratorStyle,
    /// The description additionally assumes `F^{p-1} = F`.
    pub conditional: bool,
}

/// A sum of generator families describing a subspace of `Omega^n(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub p: u32,
    pub nvars: usize,
    pub target_degree: usize,
    pub items: Vec<GeneratorItem>,
}

impl GeneratorSet {
    pub fn new(p: u32, nvars: usize, target_degree: usize) -> Self {
        GeneratorSet {
            p,
            nvars,
            target_degree,
            items: Vec::new(),
        }
    }

    /// Adds `d prefix ∧ Omega^{n - |prefix|}`; a negative tail degree
    /// contributes nothing since `Omega^z = 0` for `z < 0`.
    pub fn push_omega(&mut self, prefix: Vec<RationalFunction>) {
        if prefix.len() <= self.target_degree {
            let tail_degree = self.target_degree - prefix.len();
            self.items.push(GeneratorItem {
                prefix,
                tail_degree,
                style: GeneratorStyle::Omega,
                conditional: false,
            });
        }
    }

    /// Adds the logarithmic family of `arity`-fold wedges over `F^p(field_gens)^*`
    /// times `nu_{n - arity}`. Flagged conditional when `p > 2`.
    pub fn push_nu(&mut self, field_gens: Vec<RationalFunction>, arity: usize) {
        if arity <= self.target_degree {
            self.items.push(GeneratorItem {
                prefix: field_gens,
                tail_degree: self.target_degree - arity,
                style: GeneratorStyle::Nu { arity },
                conditional: self.p > 2,
            });
        }
    }

    pub fn omega_items(&self) -> impl Iterator<Item = &GeneratorItem> {
        self.items.iter().filter(|i| i.style == GeneratorStyle::Omega)
    }

    pub fn nu_items(&self) -> impl Iterator<Item = &GeneratorItem> {
        self.items
            .iter()
            .filter(|i| matches!(i.style, GeneratorStyle::Nu { .. }))
    }

    pub fn has_nu(&self) -> bool {
        self.nu_items().next().is_some()
    }
}

fn tail_products(head: &DifferentialForm, tail_degree: usize, p: u32, nvars: usize) -> Vec<DifferentialForm> {
    let one = RationalFunction::one(p, nvars);
    index_tuples(nvars, tail_degree)
        .iter()
        .map(|j| head.wedge(&DifferentialForm::basis_element(&one, j)))
        .collect()
}

/// Echelon basis of the subspace described by the `Omega`-style items.
pub fn expand_generator_set(g: &GeneratorSet) -> SubspaceBasis {
    expand_generator_set_with(g, ExecMode::default())
}

pub fn expand_generator_set_with(g: &GeneratorSet, mode: ExecMode) -> SubspaceBasis {
    let items: Vec<&GeneratorItem> = g.omega_items().collect();
    let spanning: Vec<Vec<DifferentialForm>> = map_collect(mode, &items, |item| {
        let head = wedge_of_differentials(&item.prefix, g.p, g.nvars);
        tail_products(&head, item.tail_degree, g.p, g.nvars)
    });
    let forms: Vec<DifferentialForm> = spanning.into_iter().flatten().collect();
    SubspaceBasis::span(g.p, g.nvars, g.target_degree, &forms)
}

/// The `F`-span of the logarithmic (`Nu`-style) items.
///
/// For `y_i in F^p(a_1..a_k)` every `dy_i` lies in the span of the `da_j`,
/// and the `a_j` themselves occur, so the span of the family equals
/// `sum_I da_I ∧ Omega^{tail}` over `arity`-subsets `I` of a p-basis. This
/// compares Omega-spans only; it does not decide membership in `nu_n`.
pub fn expand_nu_omega_span(g: &GeneratorSet) -> SubspaceBasis {
    let mut forms = Vec::new();
    for item in g.nu_items() {
        let GeneratorStyle::Nu { arity } = item.style else {
            unreachable!()
        };
        let basis = p_basis_of(&item.prefix).basis;
        for subset in subsets(&basis, arity) {
            let head = wedge_of_differentials(&subset, g.p, g.nvars);
            forms.extend(tail_products(&head, item.tail_degree, g.p, g.nvars));
        }
    }
    SubspaceBasis::span(g.p, g.nvars, g.target_degree, &forms)
}

/// All `k`-element subsets of `xs`, preserving order.
pub fn subsets<T: Clone>(xs: &[T], k: usize) -> Vec<Vec<T>> {
    index_tuples(xs.len(), k)
        .iter()
        .map(|idx| idx.iter().map(|&i| xs[i as usize].clone()).collect())
        .collect()
}

fn shape_of(sets: &[Vec<RationalFunction>]) -> Option<(u32, usize)> {
    sets.iter().flatten().next().map(|a| (a.characteristic(), a.nvars()))
}

/// `ann Omega^n(dS_1 ∧ ... ∧ dS_r) = sum_i d a_{i1} ∧ ... ∧ d a_{ik_i} ∧ Omega^{n-k_i}`
/// when the p-degrees of the sets add up.
pub fn ann_closed_disjoint(spec: &SetWedgeSpec, n: usize) -> Result<GeneratorSet> {
    let (p, nvars) = shape_of(&spec.sets).ok_or_else(|| Error::HypothesisViolated("no sets given".into()))?;
    let bases = spec.p_bases();
    if let Some(i) = bases.iter().position(Vec::is_empty) {
        return Err(Error::HypothesisViolated(format!("set {} has p-degree 0", i + 1)));
    }
    let union: Vec<RationalFunction> = spec.sets.iter().flatten().cloned().collect();
    let total: usize = bases.iter().map(Vec::len).sum();
    let pdeg = p_degree(&union);
    if pdeg != total {
        return Err(Error::HypothesisViolated(format!(
            "p-degree of the union is {pdeg}, sum of p-degrees is {total}"
        )));
    }
    let mut g = GeneratorSet::new(p, nvars, n);
    for basis in bases {
        g.push_omega(basis);
    }
    Ok(g)
}

/// `ann Omega^n(∧^r dS)`: with `k = pdeg(S)` and `t = k - r + 1`, the sum over
/// `t`-subsets of a p-basis of `d a_I ∧ Omega^{n-t}`; the full space when
/// `r > k`. The logarithmic companion is attached as `Nu` items.
pub fn ann_closed_power(s: &[RationalFunction], r: usize, n: usize) -> Result<GeneratorSet> {
    let (p, nvars) = shape_of(&[s.to_vec()]).ok_or(Error::EmptyNormSet)?;
    if r == 0 {
        return Err(Error::HypothesisViolated("wedge power must be at least 1".into()));
    }
    let basis = p_basis_of(s).basis;
    let k = basis.len();
    if k == 0 {
        return Err(Error::EmptyNormSet);
    }
    let mut g = GeneratorSet::new(p, nvars, n);
    if r > k {
        g.push_omega(Vec::new());
        g.push_nu(Vec::new(), 0);
        return Ok(g);
    }
    let t = k - r + 1;
    for subset in subsets(&basis, t) {
        g.push_omega(subset);
    }
    g.push_nu(basis, t);
    Ok(g)
}

/// `ann Omega^n(dS_1 ∧ ... ∧ dS_r ∧ dS_{r+1})` for p-degree-1 sets `S_1..S_r`:
/// `sum_i da_i ∧ Omega^{n-1} + de_1 ∧ ... ∧ de_l ∧ Omega^{n-l}`.
pub fn ann_closed_mixed(
    prefix_sets: &[Vec<RationalFunction>],
    last: &[RationalFunction],
    n: usize,
) -> Result<GeneratorSet> {
    let mut all = prefix_sets.to_vec();
    all.push(last.to_vec());
    let spec = SetWedgeSpec::new(all).map_err(|e| Error::HypothesisViolated(e.to_string()))?;
    let (p, nvars) = shape_of(&spec.sets).ok_or_else(|| Error::HypothesisViolated("no sets given".into()))?;
    let mut a = Vec::with_capacity(prefix_sets.len());
    for (i, s) in prefix_sets.iter().enumerate() {
        let b = p_basis_of(s);
        if b.pdeg != 1 {
            return Err(Error::HypothesisViolated(format!(
                "set {} has p-degree {}, expected 1",
                i + 1,
                b.pdeg
            )));
        }
        a.push(b.basis[0].clone());
    }
    if !set_wedge_nonzero(&spec).0 {
        return Err(Error::HypothesisViolated("the set wedge is {0}".into()));
    }
    let e = relative_adjoin_basis(&a, last)
        .map_err(|_| Error::HypothesisViolated("prefix elements are p-dependent".into()))?;
    let l = e.len();
    debug_assert!(l >= 1, "nonzero set wedge forces l >= 1");
    let mut g = GeneratorSet::new(p, nvars, n);
    for ai in &a {
        g.push_omega(vec![ai.clone()]);
    }
    g.push_omega(e.clone());
    g.push_nu(a.clone(), 1);
    let mut ae = a;
    ae.extend(e);
    g.push_nu(ae, l);
    Ok(g)
}
