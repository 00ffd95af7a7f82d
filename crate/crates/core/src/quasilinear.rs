//! Quasilinear p-forms `<a_1,...,a_n>_p = sum a_i X_i^p` and the kernels of
//! `Omega^n(F) -> Omega^n(F(phi_1,...,phi_r))`.
//!
//! The function fields themselves are never built. A tower is normalized
//! (each form scaled to `<1, a_1, ...>` with a norm-field p-basis in front),
//! forms of norm degree 1 are split off as purely transcendental, and a
//! maximal subfamily with nonvanishing transversal wedge is selected. The
//! kernel is then the annihilator of the transversal wedges of the selected
//! norm-field bases.

use serde::Serialize;

use crate::base_field::{Monomial, Polynomial, RationalFunction};
use crate::differential::{
    ann_bruteforce, expand_generator_set, log_form, set_wedge_nonzero, subsets, transversal_wedges, DifferentialForm,
    GeneratorSet, GeneratorStyle, SetWedgeSpec, SubspaceBasis,
};
use crate::error::{Error, Result};
use crate::linalg;
use crate::p_linear::{
    differential_row, fp_linear_basis, fp_linear_rank, p_basis_of, p_degree, p_independent, relative_adjoin_basis,
};

/// Diagonal p-form `<a_1,...,a_n>_p`; zero entries are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PForm {
    pub entries: Vec<RationalFunction>,
}

impl PForm {
    pub fn new(entries: Vec<RationalFunction>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Semantic("a p-form needs at least one entry".into()));
        }
        Ok(PForm { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RationalFunction::is_zero)
    }

    pub fn scaled(&self, x: &RationalFunction) -> PForm {
        PForm {
            entries: self.entries.iter().map(|a| a * x).collect(),
        }
    }

    fn shape(&self) -> (u32, usize) {
        (self.entries[0].characteristic(), self.entries[0].nvars())
    }
}

/// `phi ≅ psi` iff the dimensions agree and `D^0(phi) = D^0(psi)` as
/// `F^p`-subspaces of `F`.
pub fn pform_isometric(phi: &PForm, psi: &PForm) -> bool {
    if phi.dim() != psi.dim() {
        return false;
    }
    let ra = fp_linear_rank(&phi.entries);
    let rb = fp_linear_rank(&psi.entries);
    if ra != rb {
        return false;
    }
    let mut both = phi.entries.clone();
    both.extend(psi.entries.iter().cloned());
    fp_linear_rank(&both) == ra
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnisotropicDecomposition {
    pub anisotropic_part: PForm,
    pub defect: usize,
}

/// `phi ≅ phi_an ⊥ i_d(phi) × <0>`, with `phi_an` the greedy `F^p`-independent
/// subfamily of the entries.
pub fn pform_anisotropic_part(phi: &PForm) -> AnisotropicDecomposition {
    let keep = fp_linear_basis(&phi.entries);
    let defect = phi.dim() - keep.len();
    let entries = if keep.is_empty() {
        // the zero form: its anisotropic part is the empty form, kept as <0>
        vec![RationalFunction::zero(phi.shape().0, phi.shape().1)]
    } else {
        keep.iter().map(|&i| phi.entries[i].clone()).collect()
    };
    AnisotropicDecomposition {
        anisotropic_part: PForm { entries },
        defect,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormFieldInfo {
    /// The scaling entry `a_0` (first nonzero entry).
    pub scale: RationalFunction,
    pub scale_index: usize,
    /// p-basis of `N_F(phi) = F^p(a_i / a_0)`.
    pub basis: Vec<RationalFunction>,
    pub k: usize,
    p: u32,
}

impl NormFieldInfo {
    /// `ndeg_F(phi) = p^k`.
    pub fn ndeg(&self) -> u64 {
        (self.p as u64)
            .checked_pow(self.k as u32)
            .expect("norm degree fits in u64")
    }
}

fn quotients(phi: &PForm) -> Result<(usize, RationalFunction, Vec<RationalFunction>)> {
    let z = phi.entries.iter().position(|a| !a.is_zero()).ok_or(Error::ZeroForm)?;
    let a0 = phi.entries[z].clone();
    let inv = a0.inv()?;
    let q = phi
        .entries
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != z)
        .map(|(_, a)| a * &inv)
        .collect();
    Ok((z, a0, q))
}

pub fn norm_field(phi: &PForm) -> Result<NormFieldInfo> {
    let (z, a0, q) = quotients(phi)?;
    let basis = p_basis_of(&q).basis;
    Ok(NormFieldInfo {
        scale: a0,
        scale_index: z,
        k: basis.len(),
        basis,
        p: phi.shape().0,
    })
}

/// Norm degree of `phi` over `F(a_1^{1/p}, ..., a_s^{1/p})`.
pub fn ndeg_over_extension(phi: &PForm, roots: &[RationalFunction]) -> Result<u64> {
    if !p_independent(roots) {
        return Err(Error::InputNotPIndependent);
    }
    let (_, _, q) = quotients(phi)?;
    let mut all = roots.to_vec();
    all.extend(q);
    let k = p_degree(&all) - roots.len();
    Ok((phi.shape().0 as u64).pow(k as u32))
}

/// `phi(X_1,...,X_n)` is irreducible in `F[X]` iff `ndeg_F(phi) > 1`.
pub fn irreducibility_criterion(phi: &PForm) -> Result<bool> {
    Ok(norm_field(phi)?.k > 0)
}

/// One form of a normalized tower: `<1, a_1, ..., a_n>_p` with `a_1..a_k`
/// a p-basis of the norm field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerForm {
    /// Position of the form in the caller's list.
    pub original_index: usize,
    pub scale: RationalFunction,
    /// `a_1, ..., a_n` (the leading 1 is implicit).
    pub coefficients: Vec<RationalFunction>,
    pub k: usize,
}

impl TowerForm {
    pub fn norm_basis(&self) -> &[RationalFunction] {
        &self.coefficients[..self.k]
    }

    pub fn scaled_form(&self) -> PForm {
        let one = RationalFunction::one(self.scale.characteristic(), self.scale.nvars());
        let mut entries = vec![one];
        entries.extend(self.coefficients.iter().cloned());
        PForm { entries }
    }
}

/// A normalized iterated function field `F(phi_1, ..., phi_r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FFTowerDescriptor {
    pub p: u32,
    pub nvars: usize,
    /// Forms of norm degree > 1; the first `s` are the selected ones.
    pub forms: Vec<TowerForm>,
    pub s: usize,
    /// Forms of norm degree 1 (purely transcendental factors).
    pub pruned: Vec<TowerForm>,
    /// A transversal of the selected norm bases with nonzero wedge.
    pub witness: Vec<RationalFunction>,
}

impl FFTowerDescriptor {
    pub fn selected(&self) -> &[TowerForm] {
        &self.forms[..self.s]
    }

    /// Forms in the order used for the `X_{ij}` variables: `forms`, then `pruned`.
    pub fn all_forms(&self) -> impl Iterator<Item = &TowerForm> {
        self.forms.iter().chain(&self.pruned)
    }

    pub fn selected_bases(&self) -> Vec<Vec<RationalFunction>> {
        self.selected().iter().map(|f| f.norm_basis().to_vec()).collect()
    }

    /// Names `X{i}_{j}` of the generic-point variables, in the order they are
    /// appended to the base field.
    pub fn extended_vars(&self) -> Vec<String> {
        self.all_forms()
            .enumerate()
            .flat_map(|(i, f)| (1..=f.coefficients.len()).map(move |j| format!("X{}_{}", i + 1, j)))
            .collect()
    }

    /// `da_{1 j_1} ∧ ... ∧ da_{s j_s}` over all transversals of the selected norm bases.
    pub fn kernel_wedges(&self) -> Vec<DifferentialForm> {
        transversal_wedges(&self.selected_bases(), self.p, self.nvars)
    }
}

fn normalize_form(index: usize, phi: &PForm) -> Result<TowerForm> {
    let (_, a0, q) = quotients(phi)?;
    let b = p_basis_of(&q);
    let mut coefficients: Vec<RationalFunction> = b.indices.iter().map(|&i| q[i].clone()).collect();
    coefficients.extend(
        q.iter()
            .enumerate()
            .filter(|(i, _)| !b.indices.contains(i))
            .map(|(_, a)| a.clone()),
    );
    Ok(TowerForm {
        original_index: index,
        scale: a0,
        coefficients,
        k: b.pdeg,
    })
}

/// Scales, reorders and splits a list of forms into a tower descriptor.
pub fn normalize_tower(forms: &[PForm]) -> Result<FFTowerDescriptor> {
    let first = forms
        .first()
        .ok_or_else(|| Error::Semantic("a tower needs at least one form".into()))?;
    let (p, nvars) = first.shape();
    let normalized = forms
        .iter()
        .enumerate()
        .map(|(i, phi)| normalize_form(i, phi))
        .collect::<Result<Vec<_>>>()?;
    let (nontrivial, pruned): (Vec<TowerForm>, Vec<TowerForm>) = normalized.into_iter().partition(|f| f.k > 0);
    let mut selected: Vec<TowerForm> = Vec::new();
    let mut rest = Vec::new();
    let mut witness = Vec::new();
    for f in nontrivial {
        let mut sets: Vec<Vec<RationalFunction>> = selected.iter().map(|g| g.norm_basis().to_vec()).collect();
        sets.push(f.norm_basis().to_vec());
        let spec = SetWedgeSpec { sets };
        match set_wedge_nonzero(&spec) {
            (true, Some(w)) => {
                witness = w;
                selected.push(f);
            }
            _ => rest.push(f),
        }
    }
    let s = selected.len();
    selected.extend(rest);
    Ok(FFTowerDescriptor {
        p,
        nvars,
        forms: selected,
        s,
        pruned,
        witness,
    })
}

/// `T_i = a_{i1} X_{i1}^p + ... + a_{in_i} X_{in_i}^p` over the extended ring
/// `F(X_{ij})`, together with `dT_i = sum_{j <= k_i} q_{ij} da_{ij}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPolynomials {
    pub extended_nvars: usize,
    /// Index of `X_{i1}` in the extended ring, per form.
    pub offsets: Vec<usize>,
    pub t: Vec<RationalFunction>,
    pub q: Vec<Vec<RationalFunction>>,
}

pub fn build_t_polynomials(tower: &FFTowerDescriptor) -> TPolynomials {
    let (p, m) = (tower.p, tower.nvars);
    let extended_nvars = m + tower.all_forms().map(|f| f.coefficients.len()).sum::<usize>();
    let xpow = |var: usize| {
        let mut e = vec![0u32; extended_nvars];
        e[var] = p;
        RationalFunction::from_poly(Polynomial::monomial(p, Monomial::from_exponents(&e), 1))
    };
    let mut offsets = Vec::new();
    let mut ts = Vec::new();
    let mut qs = Vec::new();
    let mut next = m;
    for f in tower.all_forms() {
        offsets.push(next);
        let coeffs: Vec<RationalFunction> = f.coefficients.iter().map(|a| a.extend_vars(extended_nvars)).collect();
        let t = coeffs
            .iter()
            .enumerate()
            .fold(RationalFunction::zero(p, extended_nvars), |acc, (j, a)| {
                &acc + &(a * &xpow(next + j))
            });
        // da_{it} = sum_j lambda_{itj} da_{ij} for the dependent coefficients t > k
        let basis_rows: Vec<_> = f.norm_basis().iter().map(differential_row).collect();
        let mut q: Vec<RationalFunction> = (0..f.k).map(|j| xpow(next + j)).collect();
        for (t_idx, a) in f.coefficients.iter().enumerate().skip(f.k) {
            let lambdas = if basis_rows.is_empty() {
                Vec::new()
            } else {
                linalg::solve_combination(&basis_rows, &differential_row(a)).expect("norm basis spans the coefficients")
            };
            for (j, lam) in lambdas.iter().enumerate() {
                q[j] = &q[j] + &(&lam.extend_vars(extended_nvars) * &xpow(next + t_idx));
            }
        }
        ts.push(t);
        qs.push(q);
        next += f.coefficients.len();
    }
    TPolynomials {
        extended_nvars,
        offsets,
        t: ts,
        q: qs,
    }
}

/// For every form `i` and `j <= k_i`, the substitution `X_{ij} -> 1`,
/// `X_{im} -> 0` (m ≠ j) sends `q_{ij} -> 1` and the other `q_{im} -> 0`.
pub fn substitution_check(tower: &FFTowerDescriptor, tp: &TPolynomials) -> bool {
    tower.all_forms().zip(&tp.offsets).zip(&tp.q).all(|((f, &off), q)| {
        (0..f.k).all(|j| {
            let assignment: Vec<(usize, u32)> = (0..f.coefficients.len())
                .map(|m| (off + m, u32::from(m == j)))
                .collect();
            q.iter().enumerate().all(|(m, qm)| match qm.substitute(&assignment) {
                Some(v) => v == RationalFunction::constant(tower.p, tp.extended_nvars, i64::from(m == j)),
                None => false,
            })
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma43Check {
    /// Positions in `all_forms()` order.
    pub subset: Vec<usize>,
    pub t_independent: bool,
    pub transversal_nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma43Report {
    pub agree: bool,
    pub checks: Vec<Lemma43Check>,
}

/// Compares p-independence of `{T_i}` over the extended field with the
/// transversal criterion on norm-field bases, on every nonempty subfamily
/// (up to five forms; larger towers check the full family and the
/// selected prefix only).
pub fn lemma43_crosscheck(tower: &FFTowerDescriptor) -> Lemma43Report {
    let tp = build_t_polynomials(tower);
    let forms: Vec<&TowerForm> = tower.all_forms().collect();
    let r = forms.len();
    let subsets: Vec<Vec<usize>> = if r <= 5 {
        (1u32..(1 << r))
            .map(|mask| (0..r).filter(|i| mask & (1 << i) != 0).collect())
            .collect()
    } else {
        let mut v = vec![(0..r).collect::<Vec<_>>()];
        if tower.s > 0 {
            v.push((0..tower.s).collect());
        }
        v
    };
    let checks: Vec<Lemma43Check> = subsets
        .into_iter()
        .map(|subset| {
            let ts: Vec<RationalFunction> = subset.iter().map(|&i| tp.t[i].clone()).collect();
            let bases: Vec<Vec<RationalFunction>> = subset.iter().map(|&i| forms[i].norm_basis().to_vec()).collect();
            let transversal_nonzero = if bases.iter().any(Vec::is_empty) {
                false
            } else {
                set_wedge_nonzero(&SetWedgeSpec { sets: bases }).0
            };
            Lemma43Check {
                t_independent: p_independent(&ts),
                transversal_nonzero,
                subset,
            }
        })
        .collect();
    Lemma43Report {
        agree: checks.iter().all(|c| c.t_independent == c.transversal_nonzero),
        checks,
    }
}

/// `Omega^n(F(phi_1..phi_r)/F) = ann Omega^n(dN(phi_1) ∧ ... ∧ dN(phi_s))`,
/// by solving the annihilator system on the transversal wedges.
pub fn omega_kernel_ffe(tower: &FFTowerDescriptor, n: usize) -> SubspaceBasis {
    if tower.s == 0 {
        return SubspaceBasis::zero(tower.p, tower.nvars, n);
    }
    ann_bruteforce(&tower.kernel_wedges(), n, tower.p, tower.nvars)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum KernelCase {
    /// Every form has norm degree 1: the extension is purely transcendental.
    Trivial,
    /// The norm-field bases of the selected forms are jointly p-independent.
    SumOfKernels,
    /// All forms share one norm field of p-degree `k`.
    RepeatedNormField { r: usize, k: usize, t: usize },
    /// All selected forms but one have norm degree p.
    PdegOnePrefix { l: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedKernel {
    pub case: KernelCase,
    pub generators: GeneratorSet,
    /// Every sampled logarithmic generator lies in the expanded Omega-kernel.
    pub nu_sanity: bool,
}

fn same_norm_field(a: &[RationalFunction], b: &[RationalFunction]) -> bool {
    let mut both = a.to_vec();
    both.extend(b.iter().cloned());
    a.len() == b.len() && p_degree(&both) == a.len()
}

/// Closed-form kernel for the configurations covered by the known
/// annihilator formulas; `CaseNotCovered` otherwise.
pub fn omega_kernel_closed(tower: &FFTowerDescriptor, n: usize) -> Result<ClosedKernel> {
    let (p, m) = (tower.p, tower.nvars);
    let mut g = GeneratorSet::new(p, m, n);
    let case = if tower.s == 0 {
        KernelCase::Trivial
    } else if let Some(rep) = repeated_norm_field(tower) {
        for subset in subsets(&rep.basis, rep.t) {
            g.push_omega(subset);
        }
        g.push_nu(rep.basis, rep.t);
        KernelCase::RepeatedNormField {
            r: rep.r,
            k: rep.k,
            t: rep.t,
        }
    } else if {
        let union: Vec<RationalFunction> = tower.selected().iter().flat_map(|f| f.norm_basis().to_vec()).collect();
        p_degree(&union) == union.len()
    } {
        for f in tower.selected() {
            g.push_omega(f.norm_basis().to_vec());
        }
        KernelCase::SumOfKernels
    } else if let Some(pre) = pdeg_one_prefix(tower)? {
        let l = pre.e.len();
        for ai in &pre.a {
            g.push_omega(vec![ai.clone()]);
        }
        g.push_omega(pre.e.clone());
        g.push_nu(pre.a.clone(), 1);
        let mut ae = pre.a;
        ae.extend(pre.e);
        g.push_nu(ae, l);
        KernelCase::PdegOnePrefix { l }
    } else {
        return Err(not_covered(tower));
    };
    let nu_sanity = nu_sanity_check(&g);
    Ok(ClosedKernel {
        case,
        generators: g,
        nu_sanity,
    })
}

pub(crate) fn not_covered(tower: &FFTowerDescriptor) -> Error {
    Error::CaseNotCovered(format!(
        "{} selected forms with norm p-degrees {:?}",
        tower.s,
        tower.selected().iter().map(|f| f.k).collect::<Vec<_>>()
    ))
}

/// Parameters of a tower whose nontrivial forms all share one norm field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepeatedNormField {
    pub basis: Vec<RationalFunction>,
    pub r: usize,
    pub k: usize,
    /// `k - r + 1` for `r < k`, else 1.
    pub t: usize,
}

pub fn repeated_norm_field(tower: &FFTowerDescriptor) -> Option<RepeatedNormField> {
    let first = tower.forms.first()?;
    if !tower
        .forms
        .iter()
        .all(|f| same_norm_field(first.norm_basis(), f.norm_basis()))
    {
        return None;
    }
    let basis = first.norm_basis().to_vec();
    let (r, k) = (tower.forms.len(), basis.len());
    let t = if r >= k { 1 } else { k - r + 1 };
    Some(RepeatedNormField { basis, r, k, t })
}

/// Parameters of a tower whose selected forms all have norm degree p except
/// possibly one: `a_i` spans the norm fields of the former and `e` extends
/// `F^p(a)` to include the norm field of the exceptional form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdegOnePrefix {
    pub a: Vec<RationalFunction>,
    pub e: Vec<RationalFunction>,
}

pub fn pdeg_one_prefix(tower: &FFTowerDescriptor) -> Result<Option<PdegOnePrefix>> {
    if tower.s == 0 || tower.selected().iter().filter(|f| f.k > 1).count() > 1 {
        return Ok(None);
    }
    let mut order: Vec<&TowerForm> = tower.selected().iter().filter(|f| f.k == 1).collect();
    let last = match tower.selected().iter().find(|f| f.k > 1) {
        Some(f) => f,
        None => order.pop().expect("s >= 1"),
    };
    let a: Vec<RationalFunction> = order.iter().map(|f| f.norm_basis()[0].clone()).collect();
    let e = relative_adjoin_basis(&a, last.norm_basis())?;
    if e.is_empty() {
        return Err(Error::HypothesisViolated(
            "relative p-degree of the last form is 0".into(),
        ));
    }
    Ok(Some(PdegOnePrefix { a, e }))
}

/// Deterministic sample of logarithmic generators of the `Nu` items:
/// arity-tuples drawn from products and `1 + b` shifts of the p-basis
/// elements, wedged with `dt_J / t_J` tails.
pub fn nu_generator_samples(g: &GeneratorSet, cap: usize) -> Vec<DifferentialForm> {
    let (p, m) = (g.p, g.nvars);
    let one = RationalFunction::one(p, m);
    let mut out = Vec::new();
    for item in g.nu_items() {
        let GeneratorStyle::Nu { arity } = item.style else {
            continue;
        };
        let basis = p_basis_of(&item.prefix).basis;
        let mut pool: Vec<RationalFunction> = Vec::new();
        for size in 1..=basis.len() {
            for subset in subsets(&basis, size) {
                pool.push(subset.iter().fold(one.clone(), |acc, b| &acc * b));
            }
        }
        pool.extend(basis.iter().map(|b| &one + b));
        pool.retain(|y| !y.is_zero());
        let heads: Vec<DifferentialForm> = subsets(&pool, arity)
            .into_iter()
            .take(cap)
            .filter_map(|ys| log_form(&ys, p, m).ok())
            .collect();
        let tails: Vec<DifferentialForm> = crate::differential::index_tuples(m, item.tail_degree)
            .iter()
            .take(cap)
            .map(|j| {
                let vars: Vec<RationalFunction> = j.iter().map(|&i| RationalFunction::var(p, m, i as usize)).collect();
                log_form(&vars, p, m).expect("variables are nonzero")
            })
            .collect();
        for h in &heads {
            for t in &tails {
                out.push(h.wedge(t));
            }
        }
    }
    out
}

fn nu_sanity_check(g: &GeneratorSet) -> bool {
    if !g.has_nu() {
        return true;
    }
    let kernel = expand_generator_set(g);
    nu_generator_samples(g, 12).iter().all(|w| kernel.contains(w))
}

/// `E = F(b_1^{1/p^{m_1}}, ..., b_r^{1/p^{m_r}})` for p-independent `b_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularExtensionDescriptor {
    pub elements: Vec<RationalFunction>,
    pub exponents: Vec<u32>,
}

/// `Omega^n(E/F) = sum_i db_i ∧ Omega^{n-1}(F)`; the exponents play no role.
pub fn kernel_modular_insep(ext: &ModularExtensionDescriptor, n: usize) -> Result<GeneratorSet> {
    let first = ext
        .elements
        .first()
        .ok_or_else(|| Error::Semantic("a modular extension needs at least one element".into()))?;
    if ext.exponents.len() != ext.elements.len() || ext.exponents.iter().any(|&e| e == 0) {
        return Err(Error::Semantic("one exponent >= 1 per element is required".into()));
    }
    if !p_independent(&ext.elements) {
        return Err(Error::InputNotPIndependent);
    }
    let mut g = GeneratorSet::new(first.characteristic(), first.nvars(), n);
    for b in &ext.elements {
        g.push_omega(vec![b.clone()]);
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositumKernel {
    pub e: Vec<RationalFunction>,
    pub l: usize,
    pub generators: GeneratorSet,
    /// Defining wedges `da_1 ∧ ... ∧ da_s ∧ db` for `b` in a norm-field basis of `phi`.
    pub wedges: Vec<DifferentialForm>,
}

/// Kernel of `F(a_1^{1/p},...,a_s^{1/p})(phi) / F`:
/// `sum_i da_i ∧ Omega^{n-1} + de_1 ∧ ... ∧ de_l ∧ Omega^{n-l}`.
pub fn omega_kernel_compositum(roots: &[RationalFunction], phi: &PForm, n: usize) -> Result<CompositumKernel> {
    if !p_independent(roots) {
        return Err(Error::InputNotPIndependent);
    }
    let (p, m) = phi.shape();
    let nf = norm_field(phi)?;
    let e = relative_adjoin_basis(roots, &nf.basis)?;
    let l = e.len();
    if l == 0 {
        return Err(Error::NormDegreeCollapsed);
    }
    let mut g = GeneratorSet::new(p, m, n);
    for a in roots {
        g.push_omega(vec![a.clone()]);
    }
    g.push_omega(e.clone());
    g.push_nu(roots.to_vec(), 1);
    let mut ae = roots.to_vec();
    ae.extend(e.iter().cloned());
    g.push_nu(ae, l);
    let mut lists: Vec<Vec<RationalFunction>> = roots.iter().map(|a| vec![a.clone()]).collect();
    lists.push(nf.basis.clone());
    let wedges = transversal_wedges(&lists, p, m);
    Ok(CompositumKernel {
        e,
        l,
        generators: g,
        wedges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_field::{Field, FieldDescriptor};
    use crate::differential::SubspaceBasis;

    fn form(f: &Field, xs: &[&str]) -> PForm {
        PForm::new(xs.iter().map(|s| f.parse(s).unwrap()).collect()).unwrap()
    }

    fn els(f: &Field, xs: &[&str]) -> Vec<RationalFunction> {
        xs.iter().map(|s| f.parse(s).unwrap()).collect()
    }

    fn span1(f: &Field, idx: &[&[u16]]) -> SubspaceBasis {
        let one = f.one();
        let deg = idx.first().map_or(0, |i| i.len());
        let forms: Vec<_> = idx.iter().map(|i| DifferentialForm::basis_element(&one, i)).collect();
        SubspaceBasis::span(f.p(), f.nvars(), deg, &forms)
    }

    #[test]
    fn isometry_over_prime_field() {
        for p in [2, 3, 5] {
            let f = FieldDescriptor::with_vars(p, &[]);
            assert!(pform_isometric(&form(&f, &["1", "1"]), &form(&f, &["1", "0"])));
            assert!(!pform_isometric(&form(&f, &["1"]), &form(&f, &["0"])));
        }
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        assert!(pform_isometric(&form(&f, &["x", "y"]), &form(&f, &["y", "x"])));
        assert!(!pform_isometric(&form(&f, &["x", "y"]), &form(&f, &["x", "x*y"])));
    }

    #[test]
    fn anisotropic_parts() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        let d = pform_anisotropic_part(&form(&f, &["1", "1"]));
        assert_eq!((d.anisotropic_part, d.defect), (form(&f, &["1"]), 1));
        let d = pform_anisotropic_part(&form(&f, &["1", "x"]));
        assert_eq!((d.anisotropic_part, d.defect), (form(&f, &["1", "x"]), 0));
        let d = pform_anisotropic_part(&form(&f, &["1", "x", "1+x"]));
        assert_eq!((d.anisotropic_part, d.defect), (form(&f, &["1", "x"]), 1));
    }

    #[test]
    fn norm_fields() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        let nf = norm_field(&form(&f, &["1", "x", "y", "x*y"])).unwrap();
        assert_eq!((nf.basis.clone(), nf.ndeg()), (els(&f, &["x", "y"]), 4));
        assert_eq!(norm_field(&form(&f, &["1", "1"])).unwrap().ndeg(), 1);
        let nf = norm_field(&form(&f, &["x", "x*y"])).unwrap();
        assert_eq!((nf.basis.clone(), nf.ndeg()), (els(&f, &["y"]), 2));
        assert_eq!(norm_field(&form(&f, &["0", "0"])), Err(Error::ZeroForm));
    }

    #[test]
    fn norm_degree_over_extensions() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        let x = els(&f, &["x"]);
        assert_eq!(ndeg_over_extension(&form(&f, &["1", "x"]), &x).unwrap(), 1);
        assert_eq!(ndeg_over_extension(&form(&f, &["1", "y"]), &x).unwrap(), 2);
        assert_eq!(ndeg_over_extension(&form(&f, &["1", "x", "y"]), &x).unwrap(), 2);
        assert_eq!(
            ndeg_over_extension(&form(&f, &["1", "y"]), &els(&f, &["x", "x^3"])),
            Err(Error::InputNotPIndependent)
        );
    }

    #[test]
    fn irreducibility() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        assert!(irreducibility_criterion(&form(&f, &["1", "x"])).unwrap());
        assert!(!irreducibility_criterion(&form(&f, &["1", "1"])).unwrap());
        assert!(irreducibility_criterion(&form(&f, &["x", "x*y"])).unwrap());
    }

    #[test]
    fn tower_normalization() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        let t = normalize_tower(&[form(&f, &["1", "x"]), form(&f, &["1", "x"])]).unwrap();
        assert_eq!(t.s, 1);
        let t = normalize_tower(&[form(&f, &["1", "x"]), form(&f, &["1", "y"])]).unwrap();
        assert_eq!((t.s, t.witness.clone()), (2, els(&f, &["x", "y"])));
        let t = normalize_tower(&[form(&f, &["1", "1"]), form(&f, &["1", "x"])]).unwrap();
        assert_eq!((t.s, t.pruned.len(), t.forms.len()), (1, 1, 1));
        assert_eq!(t.forms[0].original_index, 1);
        // scaling and reordering: <x, x^3, x*y> -> <1, x^2, y> with basis (y) first
        let t = normalize_tower(&[form(&f, &["x", "x^3", "x*y"])]).unwrap();
        assert_eq!(t.forms[0].coefficients, els(&f, &["y", "x^2"]));
        assert_eq!(t.forms[0].k, 1);
        assert_eq!(normalize_tower(&[form(&f, &["0"])]), Err(Error::ZeroForm));
    }

    #[test]
    fn t_polynomials() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        let t = normalize_tower(&[form(&f, &["1", "x"])]).unwrap();
        let tp = build_t_polynomials(&t);
        let g = f.extended(t.extended_vars()).unwrap();
        assert_eq!(tp.t[0], g.parse("x*X1_1^2").unwrap());
        assert_eq!(tp.q[0], vec![g.parse("X1_1^2").unwrap()]);

        let t = normalize_tower(&[form(&f, &["1", "x", "y"])]).unwrap();
        let tp = build_t_polynomials(&t);
        let g = f.extended(t.extended_vars()).unwrap();
        assert_eq!(tp.t[0], g.parse("x*X1_1^2+y*X1_2^2").unwrap());
        assert_eq!(tp.q[0], vec![g.parse("X1_1^2").unwrap(), g.parse("X1_2^2").unwrap()]);

        let t = normalize_tower(&[form(&f, &["1", "x", "x"])]).unwrap();
        let tp = build_t_polynomials(&t);
        let g = f.extended(t.extended_vars()).unwrap();
        assert_eq!(tp.q[0], vec![g.parse("X1_1^2+X1_2^2").unwrap()]);
        assert!(substitution_check(&t, &tp));
    }

    #[test]
    fn dt_expansion_identity() {
        let f = FieldDescriptor::with_vars(3, &["x", "y", "z"]);
        let t = normalize_tower(&[form(&f, &["y", "x*y", "x^2*y+z", "x^4*y"]), form(&f, &["1", "z/x"])]).unwrap();
        let tp = build_t_polynomials(&t);
        assert!(substitution_check(&t, &tp));
        let n = tp.extended_nvars;
        for ((tf, ti), qi) in t.all_forms().zip(&tp.t).zip(&tp.q) {
            let lhs = crate::differential::d_of_element(ti);
            let rhs = tf
                .norm_basis()
                .iter()
                .zip(qi)
                .fold(DifferentialForm::zero(3, n, 1), |acc, (a, q)| {
                    acc.add(&crate::differential::d_of_element(&a.extend_vars(n)).scale(q))
                });
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn generic_point_independence_examples() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        for forms in [
            vec![form(&f, &["1", "x"]), form(&f, &["1", "y"])],
            vec![form(&f, &["1", "x"]), form(&f, &["1", "x"])],
            vec![form(&f, &["1", "x"])],
            vec![form(&f, &["1", "1"]), form(&f, &["1", "x", "y"]), form(&f, &["x", "y"])],
        ] {
            let t = normalize_tower(&forms).unwrap();
            let report = lemma43_crosscheck(&t);
            assert!(report.agree, "{report:?}");
        }
        let t = normalize_tower(&[form(&f, &["1", "x"]), form(&f, &["1", "y"])]).unwrap();
        let full = lemma43_crosscheck(&t)
            .checks
            .into_iter()
            .find(|c| c.subset == vec![0, 1])
            .unwrap();
        assert!(full.t_independent && full.transversal_nonzero);
    }

    #[test]
    fn ffe_kernel_examples() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        let t = normalize_tower(&[form(&f, &["1", "x"])]).unwrap();
        assert_eq!(omega_kernel_ffe(&t, 1), span1(&f, &[&[0]]));

        let h = FieldDescriptor::with_vars(2, &["x", "y", "z"]);
        let t = normalize_tower(&[form(&h, &["1", "x"]), form(&h, &["1", "y"])]).unwrap();
        assert_eq!(omega_kernel_ffe(&t, 1), span1(&h, &[&[0], &[1]]));

        let t = normalize_tower(&[form(&f, &["1", "x", "y"])]).unwrap();
        assert_eq!(omega_kernel_ffe(&t, 2), span1(&f, &[&[0, 1]]));

        let t = normalize_tower(&[form(&f, &["1", "1"])]).unwrap();
        assert!(omega_kernel_ffe(&t, 1).is_zero());
    }

    #[test]
    fn closed_kernel_cases() {
        let f = FieldDescriptor::with_vars(2, &["x", "y", "z"]);
        let t = normalize_tower(&[form(&f, &["1", "x"]), form(&f, &["1", "y"])]).unwrap();
        let c = omega_kernel_closed(&t, 1).unwrap();
        assert_eq!(c.case, KernelCase::SumOfKernels);
        assert_eq!(expand_generator_set(&c.generators), omega_kernel_ffe(&t, 1));

        let phi = form(&f, &["1", "x", "y"]);
        let t = normalize_tower(&[phi.clone(), phi.clone()]).unwrap();
        let c = omega_kernel_closed(&t, 1).unwrap();
        assert_eq!(c.case, KernelCase::RepeatedNormField { r: 2, k: 2, t: 1 });
        assert_eq!(expand_generator_set(&c.generators), span1(&f, &[&[0], &[1]]));
        assert!(c.nu_sanity);

        let t = normalize_tower(&[form(&f, &["1", "x"]), form(&f, &["1", "x", "x*y"])]).unwrap();
        let c = omega_kernel_closed(&t, 1).unwrap();
        assert_eq!(c.case, KernelCase::PdegOnePrefix { l: 1 });
        for n in 0..=3 {
            let c = omega_kernel_closed(&t, n).unwrap();
            assert_eq!(expand_generator_set(&c.generators), omega_kernel_ffe(&t, n), "n = {n}");
            assert!(c.nu_sanity);
        }

        let t = normalize_tower(&[form(&f, &["1", "x^2"])]).unwrap();
        assert_eq!(omega_kernel_closed(&t, 1).unwrap().case, KernelCase::Trivial);
    }

    #[test]
    fn case_not_covered() {
        let f = FieldDescriptor::with_vars(2, &["x", "y", "z", "w"]);
        // two norm fields of p-degree 2 sharing x: none of the closed forms apply
        let t = normalize_tower(&[form(&f, &["1", "x", "y"]), form(&f, &["1", "x", "z"])]).unwrap();
        assert_eq!(t.s, 2);
        assert!(matches!(omega_kernel_closed(&t, 1), Err(Error::CaseNotCovered(_))));
    }

    #[test]
    fn modular_kernel() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        let ext = |els: Vec<RationalFunction>, exps: Vec<u32>| ModularExtensionDescriptor {
            elements: els,
            exponents: exps,
        };
        let g1 = kernel_modular_insep(&ext(els(&f, &["x"]), vec![1]), 1).unwrap();
        let g5 = kernel_modular_insep(&ext(els(&f, &["x"]), vec![5]), 1).unwrap();
        assert_eq!(g1, g5);
        assert_eq!(expand_generator_set(&g1), span1(&f, &[&[0]]));
        let h = FieldDescriptor::with_vars(2, &["x", "y", "z"]);
        let g = kernel_modular_insep(&ext(els(&h, &["x", "y"]), vec![1, 2]), 2).unwrap();
        let dxy = crate::differential::wedge_of_differentials(&els(&h, &["x", "y"]), 2, 3);
        assert_eq!(expand_generator_set(&g), ann_bruteforce(&[dxy], 2, 2, 3));
        assert_eq!(
            kernel_modular_insep(&ext(els(&f, &["x", "x*y^2"]), vec![1, 1]), 1),
            Err(Error::InputNotPIndependent)
        );
    }

    #[test]
    fn compositum_kernel() {
        let f = FieldDescriptor::with_vars(2, &["x", "y"]);
        let x = els(&f, &["x"]);
        let k = omega_kernel_compositum(&x, &form(&f, &["1", "y"]), 1).unwrap();
        assert_eq!(k.l, 1);
        assert_eq!(expand_generator_set(&k.generators), ann_bruteforce(&k.wedges, 1, 2, 2));
        assert_eq!(
            omega_kernel_compositum(&x, &form(&f, &["1", "x"]), 1),
            Err(Error::NormDegreeCollapsed)
        );
        let k = omega_kernel_compositum(&x, &form(&f, &["1", "x*y"]), 1).unwrap();
        assert_eq!(k.e, els(&f, &["x*y"]));
        assert_eq!(expand_generator_set(&k.generators), span1(&f, &[&[0], &[1]]));
    }
}
