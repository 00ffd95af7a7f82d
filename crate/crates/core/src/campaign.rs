//! Seeded randomized comparisons between closed-form kernels and brute-force
//! annihilators.
//!
//! Instance `i` of a campaign draws from `instance_rng(seed, i)`, so a
//! campaign gives the same verdicts in sequential and parallel mode.
//! Generators use rejection sampling until an instance satisfies the
//! hypotheses of the closed form being tested.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::base_field::RationalFunction;
use crate::differential::{
    ann_bruteforce_with, ann_closed_disjoint, ann_closed_mixed, ann_closed_power, expand_generator_set_with,
    transversal_wedges, GeneratorSet, SetWedgeSpec,
};
use crate::error::Error;
use crate::exec::{map_range, ExecMode};
use crate::p_linear::{p_degree, p_independent};
use crate::quasilinear::{
    normalize_tower, omega_kernel_closed, omega_kernel_compositum, omega_kernel_ffe, KernelCase, PForm,
};
use crate::random::{instance_rng, random_element, random_monomial, InstanceRng, PolyShape};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub index: u64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub name: String,
    pub total: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
}

impl CampaignReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.total
    }
}

/// Runs `check(generate(rng_i))` for `i < count`.
pub fn run_campaign<I, G, C>(
    name: &str,
    mode: ExecMode,
    seed: u64,
    count: usize,
    generate: G,
    check: C,
) -> CampaignReport
where
    G: Fn(&mut InstanceRng) -> I + Sync,
    C: Fn(&I) -> Result<(), String> + Sync,
{
    let verdicts = map_range(mode, count, |i| {
        let mut rng = instance_rng(seed, i as u64);
        let inst = generate(&mut rng);
        check(&inst).err().map(|message| Failure {
            index: i as u64,
            message,
        })
    });
    let failures: Vec<Failure> = verdicts.into_iter().flatten().collect();
    CampaignReport {
        name: name.to_string(),
        total: count,
        passed: count - failures.len(),
        failures,
    }
}

/// Default variable names `t1, ..., tm`.
pub fn default_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("t{i}")).collect()
}

fn show(xs: &[RationalFunction], names: &[String]) -> String {
    let v: Vec<String> = xs.iter().map(|a| a.display_with(names).to_string()).collect();
    format!("[{}]", v.join(", "))
}

fn show_sets(sets: &[Vec<RationalFunction>], names: &[String]) -> String {
    let v: Vec<String> = sets.iter().map(|s| show(s, names)).collect();
    v.join(" ")
}

/// An entry biased towards monomials and elements with p-th power factors,
/// so that p-dependencies actually occur.
pub fn random_entry(rng: &mut InstanceRng, p: u32, m: usize) -> RationalFunction {
    match rng.gen_range(0..10) {
        0..=4 => random_monomial(rng, p, m, p + 1),
        5..=7 => random_element(
            rng,
            p,
            m,
            PolyShape {
                max_terms: 2,
                max_exp: p,
            },
        ),
        _ => &random_monomial(rng, p, m, p + 1) * &random_monomial(rng, p, m, 2).frobenius(),
    }
}

/// A nonconstant element of `F^p(a)` outside `F^p`: `a^i c^p + d^p`.
pub fn random_in_fp_adjoin_one(rng: &mut InstanceRng, a: &RationalFunction, p: u32, m: usize) -> RationalFunction {
    let i = rng.gen_range(1..p) as i64;
    let c = random_monomial(rng, p, m, 2).frobenius();
    let d = if rng.gen_bool(0.5) {
        random_monomial(rng, p, m, 2).frobenius()
    } else {
        RationalFunction::zero(p, m)
    };
    &(&a.pow(i).expect("a is nonzero") * &c) + &d
}

fn random_pdeg_one(rng: &mut InstanceRng, p: u32, m: usize) -> RationalFunction {
    loop {
        let a = random_entry(rng, p, m);
        if p_independent(std::slice::from_ref(&a)) && !a.is_zero() {
            return a;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnnCase {
    Disjoint,
    Power,
    Mixed,
}

impl AnnCase {
    pub const ALL: [AnnCase; 3] = [AnnCase::Disjoint, AnnCase::Power, AnnCase::Mixed];

    pub fn name(self) -> &'static str {
        match self {
            AnnCase::Disjoint => "disjoint",
            AnnCase::Power => "power",
            AnnCase::Mixed => "mixed",
        }
    }
}

/// `ann Omega^n(dS_1 ∧ ... ∧ dS_r)` with sets satisfying one closed form's
/// hypotheses. For the power case `sets` holds `r` copies of `S`.
#[derive(Clone, Debug)]
pub struct AnnInstance {
    pub case: AnnCase,
    pub p: u32,
    pub m: usize,
    pub n: usize,
    pub sets: Vec<Vec<RationalFunction>>,
    pub closed: GeneratorSet,
}

impl AnnInstance {
    pub fn describe(&self) -> String {
        format!(
            "{} p={} m={} n={} sets={}",
            self.case.name(),
            self.p,
            self.m,
            self.n,
            show_sets(&self.sets, &default_names(self.m))
        )
    }
}

fn random_set(rng: &mut InstanceRng, p: u32, m: usize) -> Vec<RationalFunction> {
    let size = rng.gen_range(1..=3);
    (0..size).map(|_| random_entry(rng, p, m)).collect()
}

pub fn random_ann_instance(case: AnnCase, p: u32, rng: &mut InstanceRng) -> AnnInstance {
    loop {
        let m = rng.gen_range(1..=4);
        let n = rng.gen_range(0..=m.min(3));
        let attempt = match case {
            AnnCase::Disjoint => {
                let r = rng.gen_range(1..=3);
                let sets: Vec<Vec<RationalFunction>> = (0..r).map(|_| random_set(rng, p, m)).collect();
                ann_closed_disjoint(&SetWedgeSpec { sets: sets.clone() }, n).map(|g| (sets, g))
            }
            AnnCase::Power => {
                let s = random_set(rng, p, m);
                let r = rng.gen_range(1..=4);
                ann_closed_power(&s, r, n).map(|g| (vec![s; r], g))
            }
            AnnCase::Mixed => {
                let r = rng.gen_range(1..=2);
                let prefix: Vec<Vec<RationalFunction>> = (0..r)
                    .map(|_| {
                        let a = random_pdeg_one(rng, p, m);
                        let extra = rng.gen_range(0..=2);
                        let mut set = vec![a.clone()];
                        set.extend((0..extra).map(|_| random_in_fp_adjoin_one(rng, &a, p, m)));
                        set.shuffle(rng);
                        set
                    })
                    .collect();
                let last = random_set(rng, p, m);
                ann_closed_mixed(&prefix, &last, n).map(|g| {
                    let mut sets = prefix;
                    sets.push(last);
                    (sets, g)
                })
            }
        };
        match attempt {
            Ok((sets, closed)) => {
                return AnnInstance {
                    case,
                    p,
                    m,
                    n,
                    sets,
                    closed,
                }
            }
            Err(Error::HypothesisViolated(_) | Error::EmptyNormSet) => continue,
            Err(e) => panic!("unexpected error while sampling: {e}"),
        }
    }
}

/// Closed form versus the annihilator of the raw transversal wedges.
pub fn check_ann_instance(inst: &AnnInstance, mode: ExecMode) -> Result<(), String> {
    let wedges = transversal_wedges(&inst.sets, inst.p, inst.m);
    let brute = ann_bruteforce_with(&wedges, inst.n, inst.p, inst.m, mode);
    let closed = expand_generator_set_with(&inst.closed, mode);
    if brute == closed {
        Ok(())
    } else {
        Err(format!(
            "{}: closed dim {} != brute-force dim {} or spans differ",
            inst.describe(),
            closed.dimension(),
            brute.dimension()
        ))
    }
}

pub fn ann_campaign(case: AnnCase, p: u32, seed: u64, count: usize, mode: ExecMode) -> CampaignReport {
    run_campaign(
        &format!("ann-{}-p{}", case.name(), p),
        mode,
        seed,
        count,
        |rng| random_ann_instance(case, p, rng),
        |inst| check_ann_instance(inst, ExecMode::Sequential),
    )
}

/// A tower of p-forms over `F_p(t_1..t_m)` and a target degree.
#[derive(Clone, Debug)]
pub struct TowerInstance {
    pub p: u32,
    pub m: usize,
    pub n: usize,
    pub forms: Vec<PForm>,
}

impl TowerInstance {
    pub fn describe(&self) -> String {
        let names = default_names(self.m);
        let forms: Vec<String> = self.forms.iter().map(|f| show(&f.entries, &names)).collect();
        format!("p={} m={} n={} forms={}", self.p, self.m, self.n, forms.join(" "))
    }
}

fn random_form(rng: &mut InstanceRng, p: u32, m: usize, max_dim: usize) -> PForm {
    loop {
        let dim = rng.gen_range(1..=max_dim);
        let entries: Vec<RationalFunction> = (0..dim).map(|_| random_entry(rng, p, m)).collect();
        let form = PForm { entries };
        if !form.is_zero() {
            return form;
        }
    }
}

/// Up to three forms of dimension at most four over at most four variables.
pub fn random_tower(p: u32, rng: &mut InstanceRng) -> TowerInstance {
    let m = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=m.min(3));
    let r = rng.gen_range(1..=3);
    let forms = (0..r).map(|_| random_form(rng, p, m, 4)).collect();
    TowerInstance { p, m, n, forms }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TowerCase {
    SumOfKernels,
    RepeatedFewer,
    RepeatedMany,
    PdegOnePrefix,
}

impl TowerCase {
    pub const ALL: [TowerCase; 4] = [
        TowerCase::SumOfKernels,
        TowerCase::RepeatedFewer,
        TowerCase::RepeatedMany,
        TowerCase::PdegOnePrefix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TowerCase::SumOfKernels => "sum-of-kernels",
            TowerCase::RepeatedFewer => "repeated-r<k",
            TowerCase::RepeatedMany => "repeated-r>=k",
            TowerCase::PdegOnePrefix => "pdeg-one-prefix",
        }
    }

    fn matches(self, case: &KernelCase) -> bool {
        match (self, case) {
            (TowerCase::SumOfKernels, KernelCase::SumOfKernels) => true,
            (TowerCase::RepeatedFewer, KernelCase::RepeatedNormField { r, k, .. }) => r < k,
            (TowerCase::RepeatedMany, KernelCase::RepeatedNormField { r, k, .. }) => r >= k,
            (TowerCase::PdegOnePrefix, KernelCase::PdegOnePrefix { .. }) => true,
            _ => false,
        }
    }
}

fn scaled_copy(rng: &mut InstanceRng, phi: &PForm, p: u32, m: usize) -> PForm {
    let x = loop {
        let x = random_entry(rng, p, m);
        if !x.is_zero() {
            break x;
        }
    };
    let mut f = phi.scaled(&x);
    f.entries.shuffle(rng);
    f
}

/// A tower built to land in the given closed case; the dispatcher confirms.
pub fn random_case_tower(case: TowerCase, p: u32, rng: &mut InstanceRng) -> TowerInstance {
    loop {
        let m = rng.gen_range(2..=4);
        let n = rng.gen_range(0..=m.min(3));
        let forms = match case {
            TowerCase::SumOfKernels => {
                let r = rng.gen_range(2..=3);
                (0..r).map(|_| random_form(rng, p, m, 3)).collect()
            }
            TowerCase::RepeatedFewer | TowerCase::RepeatedMany => {
                let phi = random_form(rng, p, m, 4);
                let r = if case == TowerCase::RepeatedFewer {
                    1
                } else {
                    rng.gen_range(1..=3)
                };
                let r = r + usize::from(case == TowerCase::RepeatedFewer && rng.gen_bool(0.3));
                (0..r).map(|_| scaled_copy(rng, &phi, p, m)).collect()
            }
            TowerCase::PdegOnePrefix => {
                let r = rng.gen_range(1..=2);
                let mut forms: Vec<PForm> = (0..r)
                    .map(|_| {
                        let a = random_pdeg_one(rng, p, m);
                        let one = RationalFunction::one(p, m);
                        let mut entries = vec![one, a.clone()];
                        if rng.gen_bool(0.4) {
                            entries.push(random_in_fp_adjoin_one(rng, &a, p, m));
                        }
                        PForm { entries }
                    })
                    .collect();
                forms.push(random_form(rng, p, m, 4));
                forms.shuffle(rng);
                forms
            }
        };
        let inst = TowerInstance { p, m, n, forms };
        let Ok(tower) = normalize_tower(&inst.forms) else {
            continue;
        };
        match omega_kernel_closed(&tower, n) {
            Ok(c) if case.matches(&c.case) => return inst,
            _ => continue,
        }
    }
}

/// The closed kernel is produced for the expected case, its expansion equals
/// the brute-force kernel, and the logarithmic companions pass the span check.
pub fn check_case_tower(case: TowerCase, inst: &TowerInstance, mode: ExecMode) -> Result<(), String> {
    let tower = normalize_tower(&inst.forms).map_err(|e| format!("{}: {e}", inst.describe()))?;
    let closed = omega_kernel_closed(&tower, inst.n).map_err(|e| format!("{}: {e}", inst.describe()))?;
    if !case.matches(&closed.case) {
        return Err(format!("{}: dispatched to {:?}", inst.describe(), closed.case));
    }
    if !closed.nu_sanity {
        return Err(format!("{}: logarithmic generator outside the kernel", inst.describe()));
    }
    let ffe = if tower.s == 0 {
        omega_kernel_ffe(&tower, inst.n)
    } else {
        ann_bruteforce_with(&tower.kernel_wedges(), inst.n, inst.p, inst.m, mode)
    };
    if expand_generator_set_with(&closed.generators, mode) != ffe {
        return Err(format!(
            "{}: closed kernel differs from the transversal annihilator",
            inst.describe()
        ));
    }
    Ok(())
}

pub fn case_tower_campaign(case: TowerCase, p: u32, seed: u64, count: usize, mode: ExecMode) -> CampaignReport {
    run_campaign(
        &format!("kernel-{}-p{}", case.name(), p),
        mode,
        seed,
        count,
        |rng| random_case_tower(case, p, rng),
        |inst| check_case_tower(case, inst, ExecMode::Sequential),
    )
}

/// `F(sqrt[p](a_1), ..., sqrt[p](a_s))(phi)` and a target degree.
#[derive(Clone, Debug)]
pub struct CompositumInstance {
    pub p: u32,
    pub m: usize,
    pub n: usize,
    pub roots: Vec<RationalFunction>,
    pub phi: PForm,
    /// Whether `phi` was built to have norm degree 1 over the radical extension.
    pub collapsed: bool,
}

impl CompositumInstance {
    pub fn describe(&self) -> String {
        let names = default_names(self.m);
        format!(
            "p={} m={} n={} roots={} phi={}",
            self.p,
            self.m,
            self.n,
            show(&self.roots, &names),
            show(&self.phi.entries, &names)
        )
    }
}

/// With probability 1/4 the quotients of `phi` are drawn from `F^p(roots)`,
/// so the norm degree collapses.
pub fn random_compositum(p: u32, rng: &mut InstanceRng) -> CompositumInstance {
    loop {
        let m = rng.gen_range(2..=4);
        let n = rng.gen_range(0..=m.min(3));
        let s = rng.gen_range(1..=2.min(m - 1));
        let roots: Vec<RationalFunction> = (0..s).map(|_| random_pdeg_one(rng, p, m)).collect();
        if !p_independent(&roots) {
            continue;
        }
        let collapsed = rng.gen_ratio(1, 4);
        let phi = if collapsed {
            let a0 = random_entry(rng, p, m);
            if a0.is_zero() {
                continue;
            }
            let dim = rng.gen_range(1..=3);
            let mut entries = vec![a0.clone()];
            entries.extend((0..dim).map(|_| {
                let a = roots.choose(rng).expect("s >= 1").clone();
                &a0 * &random_in_fp_adjoin_one(rng, &a, p, m)
            }));
            PForm { entries }
        } else {
            random_form(rng, p, m, 3)
        };
        let inst = CompositumInstance {
            p,
            m,
            n,
            roots,
            phi,
            collapsed,
        };
        match omega_kernel_compositum(&inst.roots, &inst.phi, n) {
            Ok(_) if !collapsed => return inst,
            Err(Error::NormDegreeCollapsed) if collapsed => return inst,
            _ => continue,
        }
    }
}

/// The compositum kernel has `l >= 1` and equals both the annihilator of its
/// defining wedges and the tower kernel of `<1,a_1>, ..., <1,a_s>, phi`;
/// collapsed instances are rejected with `NormDegreeCollapsed`.
pub fn check_compositum(inst: &CompositumInstance, mode: ExecMode) -> Result<(), String> {
    let result = omega_kernel_compositum(&inst.roots, &inst.phi, inst.n);
    if inst.collapsed {
        return match result {
            Err(Error::NormDegreeCollapsed) => Ok(()),
            other => Err(format!(
                "{}: expected NormDegreeCollapsed, got {:?}",
                inst.describe(),
                other.map(|k| k.l)
            )),
        };
    }
    let k = result.map_err(|e| format!("{}: {e}", inst.describe()))?;
    if k.l == 0 {
        return Err(format!("{}: l = 0", inst.describe()));
    }
    let mut all = inst.roots.clone();
    all.extend(k.e.iter().cloned());
    if p_degree(&all) != all.len() {
        return Err(format!("{}: roots and e are p-dependent", inst.describe()));
    }
    let closed = expand_generator_set_with(&k.generators, mode);
    let brute = ann_bruteforce_with(&k.wedges, inst.n, inst.p, inst.m, mode);
    if closed != brute {
        return Err(format!(
            "{}: closed kernel differs from the wedge annihilator",
            inst.describe()
        ));
    }
    let one = RationalFunction::one(inst.p, inst.m);
    let mut forms: Vec<PForm> = inst
        .roots
        .iter()
        .map(|a| PForm {
            entries: vec![one.clone(), a.clone()],
        })
        .collect();
    forms.push(inst.phi.clone());
    let tower = normalize_tower(&forms).map_err(|e| format!("{}: {e}", inst.describe()))?;
    if omega_kernel_ffe(&tower, inst.n) != closed {
        return Err(format!(
            "{}: closed kernel differs from the tower kernel",
            inst.describe()
        ));
    }
    Ok(())
}

pub fn compositum_campaign(p: u32, seed: u64, count: usize, mode: ExecMode) -> CampaignReport {
    run_campaign(
        &format!("compositum-p{p}"),
        mode,
        seed,
        count,
        |rng| random_compositum(p, rng),
        |inst| check_compositum(inst, ExecMode::Sequential),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_campaigns_pass() {
        for p in [2, 3] {
            for case in AnnCase::ALL {
                let r = ann_campaign(case, p, 11, 6, ExecMode::default());
                assert!(r.ok(), "{r:?}");
            }
            for case in TowerCase::ALL {
                let r = case_tower_campaign(case, p, 11, 4, ExecMode::default());
                assert!(r.ok(), "{r:?}");
            }
            let r = compositum_campaign(p, 11, 6, ExecMode::default());
            assert!(r.ok(), "{r:?}");
        }
    }

    #[test]
    fn modes_give_identical_reports() {
        let a = ann_campaign(AnnCase::Power, 3, 5, 8, ExecMode::Sequential);
        let b = ann_campaign(AnnCase::Power, 3, 5, 8, ExecMode::Parallel);
        assert_eq!(a, b);
        let describe = |mode| map_range(mode, 5, |i| random_tower(2, &mut instance_rng(9, i as u64)).describe());
        assert_eq!(describe(ExecMode::Sequential), describe(ExecMode::Parallel));
    }
}
