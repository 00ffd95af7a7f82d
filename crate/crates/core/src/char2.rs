//! Bilinear forms in characteristic 2: Pfister forms, polar forms, the Kato
//! map `e_n`, and generator families of bilinear Witt kernels.
//!
//! Witt classes are never represented. A kernel is described by families of
//! Pfister forms `<<y_1,...,y_t>>` with `y_i` ranging over a subfield
//! `F^2(c_1,...,c_k)`; sampled members are checked at the graded level by
//! wedging their Kato image with the defining wedges of the kernel.

use serde::Serialize;

use crate::base_field::RationalFunction;
use crate::differential::{expand_generator_set, log_form, subsets, DifferentialForm, SubspaceBasis};
use crate::error::{Error, Result};
use crate::p_linear::{p_basis_of, p_independent};
use crate::quasilinear::{
    kernel_modular_insep, normalize_tower, not_covered, omega_kernel_compositum, omega_kernel_ffe, pdeg_one_prefix,
    repeated_norm_field, ModularExtensionDescriptor, PForm,
};
use crate::random::{instance_rng, random_in_subfield, PolyShape};

fn require_char2(a: &RationalFunction) -> Result<()> {
    match a.characteristic() {
        2 => Ok(()),
        p => Err(Error::WrongCharacteristic(p)),
    }
}

/// `<<a_1,...,a_n>> = <1,a_1> ⊗ ... ⊗ <1,a_n>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfisterForm {
    pub slots: Vec<RationalFunction>,
}

impl PfisterForm {
    pub fn new(slots: Vec<RationalFunction>) -> Result<Self> {
        let first = slots
            .first()
            .ok_or_else(|| Error::Semantic("a Pfister form needs at least one slot".into()))?;
        require_char2(first)?;
        if slots.iter().any(RationalFunction::is_zero) {
            return Err(Error::ZeroSlot);
        }
        Ok(PfisterForm { slots })
    }

    pub fn fold(&self) -> usize {
        self.slots.len()
    }

    pub fn nvars(&self) -> usize {
        self.slots[0].nvars()
    }
}

/// Diagonal bilinear form `<b_1,...,b_n>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearDiagonal {
    pub entries: Vec<RationalFunction>,
}

impl BilinearDiagonal {
    pub fn new(entries: Vec<RationalFunction>) -> Result<Self> {
        let first = entries
            .first()
            .ok_or_else(|| Error::Semantic("a bilinear form needs at least one entry".into()))?;
        require_char2(first)?;
        if entries.iter().any(RationalFunction::is_zero) {
            return Err(Error::ZeroSlot);
        }
        Ok(BilinearDiagonal { entries })
    }
}

/// Anisotropic iff the slots are 2-independent; otherwise metabolic.
pub fn pfister_anisotropic(pi: &PfisterForm) -> Result<bool> {
    require_char2(&pi.slots[0])?;
    Ok(p_independent(&pi.slots))
}

/// The polar 2-form `v -> b(v, v)`.
pub fn polar_form(b: &BilinearDiagonal) -> PForm {
    PForm {
        entries: b.entries.clone(),
    }
}

/// `e_n(<<a_1,...,a_n>>) = da_1/a_1 ∧ ... ∧ da_n/a_n`.
pub fn kato_e(pi: &PfisterForm) -> Result<DifferentialForm> {
    require_char2(&pi.slots[0])?;
    log_form(&pi.slots, 2, pi.nvars()).map_err(|e| match e {
        Error::ZeroArgument => Error::ZeroSlot,
        other => other,
    })
}

/// Whether `e_n(pi) ∧ w = 0` for every defining wedge `w`.
pub fn verify_generator(pi: &PfisterForm, wedges: &[DifferentialForm]) -> Result<bool> {
    if let Some(w0) = wedges.first() {
        if let Some(w) = wedges.iter().find(|w| w.degree() != w0.degree()) {
            return Err(Error::DegreeMismatch(w0.degree(), w.degree()));
        }
    }
    let e = kato_e(pi)?;
    Ok(wedges.iter().all(|w| e.wedge(w).is_zero()))
}

/// First slot whose removal leaves a form that still wedges nonzero with
/// some defining wedge. Replacing that slot by a fresh variable must make
/// the generator fail verification.
pub fn corruptible_slot(pi: &PfisterForm, wedges: &[DifferentialForm]) -> Option<usize> {
    (0..pi.fold()).find(|&i| {
        let rest: Vec<RationalFunction> = pi
            .slots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, a)| a.clone())
            .collect();
        let e = log_form(&rest, 2, pi.nvars()).expect("slots are nonzero");
        wedges.iter().any(|w| !e.wedge(w).is_zero())
    })
}

/// Moves `pi` and `wedges` to `F(z)` with `z` a new variable and replaces
/// slot `slot` by `z`.
pub fn corrupt_sample(
    pi: &PfisterForm,
    slot: usize,
    wedges: &[DifferentialForm],
) -> (PfisterForm, Vec<DifferentialForm>) {
    let m = pi.nvars() + 1;
    let mut slots: Vec<RationalFunction> = pi.slots.iter().map(|a| a.extend_vars(m)).collect();
    slots[slot] = RationalFunction::var(2, m, m - 1);
    (PfisterForm { slots }, wedges.iter().map(|w| w.extend_vars(m)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum WittCase {
    /// Every form has norm degree 1; the kernel is zero.
    Trivial,
    PfisterPower {
        r: usize,
        k: usize,
        t: usize,
    },
    Pdeg1Prefix {
        l: usize,
    },
    Compositum {
        s: usize,
        l: usize,
    },
}

/// `[<<y_1,...,y_arity>> | y_i in F^2(field_generators)^*]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittFamily {
    pub arity: usize,
    pub field_generators: Vec<RationalFunction>,
}

impl WittFamily {
    pub fn describe(&self, names: &[String]) -> String {
        let ys: Vec<String> = (1..=self.arity).map(|i| format!("y{i}")).collect();
        let gens: Vec<String> = self
            .field_generators
            .iter()
            .map(|g| g.display_with(names).to_string())
            .collect();
        format!("<<{}>> with y_i in F^2({})^*", ys.join(","), gens.join(","))
    }
}

/// Span comparison of the compositum kernel against the sum of the kernels
/// of its two sub-extensions, per form degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdditiveComparison {
    /// `(n, dim of compositum kernel, dim of the sum)`.
    pub degrees: Vec<(usize, usize, usize)>,
    pub additive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittKernelDescription {
    pub case: WittCase,
    pub families: Vec<WittFamily>,
    /// The kernel is the annihilator of these wedges.
    pub wedges: Vec<DifferentialForm>,
    pub samples: Vec<PfisterForm>,
    pub verification: Vec<bool>,
    pub additive: Option<AdditiveComparison>,
}

impl WittKernelDescription {
    pub fn all_verified(&self) -> bool {
        self.verification.iter().all(|&v| v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingConfig {
    /// Samples per family.
    pub budget: usize,
    pub seed: u64,
    /// Monomial exponents stay below `2 * bound`; random coefficients have
    /// exponents at most `bound`.
    pub bound: u32,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            budget: 8,
            seed: 0,
            bound: 1,
        }
    }
}

fn monomials_in(basis: &[RationalFunction], max_exp: u32, nvars: usize) -> Vec<RationalFunction> {
    let one = RationalFunction::one(2, nvars);
    let mut out = Vec::new();
    let k = basis.len();
    let total = (max_exp as usize).pow(k as u32);
    for code in 1..total {
        let mut c = code;
        let mut acc = one.clone();
        for b in basis {
            let e = (c % max_exp as usize) as i64;
            c /= max_exp as usize;
            acc = &acc * &b.pow(e).expect("basis elements are nonzero");
        }
        out.push(acc);
    }
    out
}

/// Monomial tuples first (at most half the budget), then tuples of random
/// `F^2`-combinations.
fn sample_family(family: &WittFamily, nvars: usize, cfg: &SamplingConfig, stream: u64) -> Vec<PfisterForm> {
    let basis = p_basis_of(&family.field_generators).basis;
    let monos = monomials_in(&basis, 2 * cfg.bound.max(1), nvars);
    let mut out: Vec<PfisterForm> = subsets(&monos, family.arity)
        .into_iter()
        .take(cfg.budget / 2)
        .map(|slots| PfisterForm { slots })
        .collect();
    let mut rng = instance_rng(cfg.seed, stream);
    let shape = PolyShape {
        max_terms: 2,
        max_exp: cfg.bound + 1,
    };
    while out.len() < cfg.budget {
        let slots = (0..family.arity)
            .map(|_| random_in_subfield(&mut rng, &basis, 2, nvars, shape))
            .collect();
        out.push(PfisterForm { slots });
    }
    out
}

fn finish(
    case: WittCase,
    families: Vec<WittFamily>,
    wedges: Vec<DifferentialForm>,
    nvars: usize,
    cfg: &SamplingConfig,
) -> Result<WittKernelDescription> {
    let samples: Vec<PfisterForm> = families
        .iter()
        .enumerate()
        .flat_map(|(i, f)| sample_family(f, nvars, cfg, i as u64))
        .collect();
    let verification = samples
        .iter()
        .map(|pi| verify_generator(pi, &wedges))
        .collect::<Result<Vec<_>>>()?;
    Ok(WittKernelDescription {
        case,
        families,
        wedges,
        samples,
        verification,
        additive: None,
    })
}

/// Generator families of `W(F(b_1,...,b_r)/F)` when all polar forms share a
/// norm field, or when all selected ones but one have norm degree 2.
pub fn witt_kernel_generators(forms: &[BilinearDiagonal], cfg: &SamplingConfig) -> Result<WittKernelDescription> {
    let first = forms
        .first()
        .ok_or_else(|| Error::Semantic("a tower needs at least one form".into()))?;
    require_char2(&first.entries[0])?;
    let polar: Vec<PForm> = forms.iter().map(polar_form).collect();
    let tower = normalize_tower(&polar)?;
    let wedges = if tower.s == 0 {
        Vec::new()
    } else {
        tower.kernel_wedges()
    };
    let (case, families) = if tower.s == 0 {
        (WittCase::Trivial, Vec::new())
    } else if let Some(rep) = repeated_norm_field(&tower) {
        (
            WittCase::PfisterPower {
                r: rep.r,
                k: rep.k,
                t: rep.t,
            },
            vec![WittFamily {
                arity: rep.t,
                field_generators: rep.basis,
            }],
        )
    } else if let Some(pre) = pdeg_one_prefix(&tower)? {
        let l = pre.e.len();
        let mut ae = pre.a.clone();
        ae.extend(pre.e);
        (
            WittCase::Pdeg1Prefix { l },
            vec![
                WittFamily {
                    arity: 1,
                    field_generators: pre.a,
                },
                WittFamily {
                    arity: l,
                    field_generators: ae,
                },
            ],
        )
    } else {
        return Err(not_covered(&tower));
    };
    finish(case, families, wedges, tower.nvars, cfg)
}

/// Generator families of `W(L(b)/F)` for `L = F(sqrt(a_1),...,sqrt(a_s))`.
pub fn witt_kernel_compositum_generators(
    roots: &[RationalFunction],
    b: &BilinearDiagonal,
    cfg: &SamplingConfig,
) -> Result<WittKernelDescription> {
    let phi = polar_form(b);
    let (m, n_max) = (b.entries[0].nvars(), b.entries[0].nvars().min(3));
    let k = omega_kernel_compositum(roots, &phi, 1).map_err(|e| match e {
        Error::InputNotPIndependent => Error::InputNot2Independent,
        other => other,
    })?;
    let mut ae = roots.to_vec();
    ae.extend(k.e.iter().cloned());
    let families = vec![
        WittFamily {
            arity: 1,
            field_generators: roots.to_vec(),
        },
        WittFamily {
            arity: k.l,
            field_generators: ae,
        },
    ];
    let mut desc = finish(
        WittCase::Compositum { s: roots.len(), l: k.l },
        families,
        k.wedges,
        m,
        cfg,
    )?;
    desc.additive = Some(additive_comparison(roots, &phi, n_max)?);
    Ok(desc)
}

fn additive_comparison(roots: &[RationalFunction], phi: &PForm, n_max: usize) -> Result<AdditiveComparison> {
    let tower = normalize_tower(std::slice::from_ref(phi))?;
    let ext = ModularExtensionDescriptor {
        elements: roots.to_vec(),
        exponents: vec![1; roots.len()],
    };
    let mut degrees = Vec::new();
    for n in 1..=n_max {
        let whole = expand_generator_set(&omega_kernel_compositum(roots, phi, n)?.generators);
        let parts: SubspaceBasis = if roots.is_empty() {
            omega_kernel_ffe(&tower, n)
        } else {
            expand_generator_set(&kernel_modular_insep(&ext, n)?).sum(&omega_kernel_ffe(&tower, n))?
        };
        degrees.push((n, whole.dimension(), parts.dimension()));
    }
    Ok(AdditiveComparison {
        additive: degrees.iter().all(|&(_, a, b)| a == b),
        degrees,
    })
}
