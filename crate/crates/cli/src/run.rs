//! Dispatch of parsed jobs to the library and assembly of JSON reports.

use serde_json::{json, Map, Value};

use pkernel::base_field::{Field, RationalFunction};
use pkernel::campaign::{ann_campaign, case_tower_campaign, compositum_campaign, CampaignReport};
use pkernel::char2::{
    witt_kernel_compositum_generators, witt_kernel_generators, SamplingConfig, WittKernelDescription,
};
use pkernel::differential::{
    ann_bruteforce, ann_closed_disjoint, ann_closed_mixed, ann_closed_power, expand_generator_set, subsets,
    transversal_wedges, wedge_of_differentials, DifferentialForm, GeneratorItem, GeneratorSet, GeneratorStyle,
    SetWedgeSpec, SubspaceBasis,
};
use pkernel::exec::ExecMode;
use pkernel::quasilinear::{
    irreducibility_criterion, kernel_modular_insep, norm_field, normalize_tower, omega_kernel_closed,
    omega_kernel_compositum, omega_kernel_ffe, pform_anisotropic_part, pform_isometric, FFTowerDescriptor,
    ModularExtensionDescriptor, PForm,
};
use pkernel::{Error, Result};

use crate::job::{Campaign, JobSpec, KernelSource, Task, WittSource};

/// A finished job: the report and whether every internal comparison held.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Semantic(_) => EXIT_INPUT,
        _ => EXIT_HYPOTHESIS,
    }
}

pub fn error_report(e: &Error) -> Value {
    let mut err = Map::new();
    err.insert("code".into(), json!(e.code()));
    err.insert("message".into(), json!(e.to_string()));
    if let Error::Parse { line, column, .. } = e {
        err.insert("line".into(), json!(line));
        err.insert("column".into(), json!(column));
    }
    json!({ "error": err })
}

pub fn run_job(job: &JobSpec) -> Result<Outcome> {
    let ctx = Ctx { field: &job.field };
    let (result, passed) = match &job.task {
        Task::PForm { form, compare } => (ctx.pform(form, compare.as_ref())?, true),
        Task::Ann { sets, power, n } => ctx.ann(sets, *power, *n, job.check)?,
        Task::Kernel { source, n } => match source {
            KernelSource::Tower(forms) => ctx.tower_kernel(forms, *n)?,
            KernelSource::Compositum { roots, form } => ctx.compositum_kernel(roots, form, *n, job.check)?,
            KernelSource::Modular { elements, exponents } => ctx.modular_kernel(elements, exponents, *n, job.check)?,
        },
        Task::Witt(source) => {
            let cfg = SamplingConfig {
                budget: job.budget_or_default(),
                seed: job.seed_or_default(),
                ..SamplingConfig::default()
            };
            let desc = match source {
                WittSource::Tower(forms) => witt_kernel_generators(forms, &cfg)?,
                WittSource::Compositum { roots, form } => witt_kernel_compositum_generators(roots, form, &cfg)?,
            };
            let ok = desc.all_verified();
            (ctx.witt(&desc), ok)
        }
        Task::CrosscheckCampaign { campaign, count } => {
            let r = run_campaign(*campaign, job.field.p(), job.seed_or_default(), *count);
            let ok = r.ok();
            (campaign_report(&r), ok)
        }
        Task::CrosscheckTower { forms, n } => ctx.crosscheck_tower(forms, *n)?,
    };
    let mut report = Map::new();
    report.insert("command".into(), json!(job.command()));
    report.insert(
        "job".into(),
        serde_json::to_value(job.canonical()).expect("job files serialize"),
    );
    report.insert("result".into(), result);
    report.insert("status".into(), json!(if passed { "ok" } else { "check-failed" }));
    Ok(Outcome {
        report: Value::Object(report),
        passed,
    })
}

fn run_campaign(c: Campaign, p: u32, seed: u64, count: usize) -> CampaignReport {
    let mode = ExecMode::default();
    match c {
        Campaign::Ann(case) => ann_campaign(case, p, seed, count, mode),
        Campaign::Tower(case) => case_tower_campaign(case, p, seed, count, mode),
        Campaign::Compositum => compositum_campaign(p, seed, count, mode),
    }
}

fn campaign_report(r: &CampaignReport) -> Value {
    let mut v = serde_json::to_value(r).expect("campaign reports serialize");
    v["ok"] = json!(r.ok());
    v
}

fn binomial(m: usize, n: usize) -> usize {
    if n > m {
        return 0;
    }
    (0..n).fold(1, |acc, i| acc * (m - i) / (i + 1))
}

struct Ctx<'a> {
    field: &'a Field,
}

impl Ctx<'_> {
    fn names(&self) -> &[String] {
        self.field.vars()
    }

    fn el(&self, a: &RationalFunction) -> String {
        self.field.format(a)
    }

    fn els(&self, xs: &[RationalFunction]) -> Vec<String> {
        xs.iter().map(|a| self.el(a)).collect()
    }

    fn form(&self, w: &DifferentialForm) -> String {
        w.display_with(self.names()).to_string()
    }

    fn d(&self, a: &RationalFunction) -> String {
        let s = self.el(a);
        if self.names().contains(&s) {
            format!("d{s}")
        } else {
            format!("d({s})")
        }
    }

    fn basis(&self, b: &SubspaceBasis) -> Value {
        let forms: Vec<String> = b.forms().iter().map(|w| self.form(w)).collect();
        json!({
            "degree": b.degree(),
            "dimension": b.dimension(),
            "ambient_dimension": binomial(b.nvars(), b.degree()),
            "full_space": b.is_full(),
            "basis": forms,
        })
    }

    fn item(&self, item: &GeneratorItem) -> Value {
        let tail = item.tail_degree;
        match item.style {
            GeneratorStyle::Omega => {
                let head: Vec<String> = item.prefix.iter().map(|a| self.d(a)).collect();
                let text = match (head.is_empty(), tail) {
                    (true, _) => format!("Omega^{tail}"),
                    (false, 0) => head.join("^"),
                    (false, _) => format!("{} ^ Omega^{tail}", head.join("^")),
                };
                json!({
                    "style": "omega",
                    "prefix": self.els(&item.prefix),
                    "tail_degree": tail,
                    "text": text,
                })
            }
            GeneratorStyle::Nu { arity } => {
                let ys: Vec<String> = (1..=arity).map(|i| format!("dy{i}/y{i}")).collect();
                let head = if arity == 0 {
                    "1".to_string()
                } else {
                    format!(
                        "[{} | y_i in F^p({})^*]",
                        ys.join("^"),
                        self.els(&item.prefix).join(",")
                    )
                };
                json!({
                    "style": "nu",
                    "arity": arity,
                    "field_generators": self.els(&item.prefix),
                    "tail_degree": tail,
                    "conditional": item.conditional,
                    "text": format!("{head} ^ nu_{tail}"),
                })
            }
        }
    }

    fn generators(&self, g: &GeneratorSet) -> Value {
        Value::Array(g.items.iter().map(|i| self.item(i)).collect())
    }

    fn pform(&self, form: &PForm, compare: Option<&PForm>) -> Result<Value> {
        let an = pform_anisotropic_part(form);
        let mut out = json!({
            "entries": self.els(&form.entries),
            "dimension": form.dim(),
            "anisotropic_part": { "entries": self.els(&an.anisotropic_part.entries) },
            "defect": an.defect,
        });
        if form.is_zero() {
            out["norm_field"] = Value::Null;
        } else {
            let nf = norm_field(form)?;
            out["norm_field"] = json!({
                "scale": self.el(&nf.scale),
                "basis": self.els(&nf.basis),
                "p_degree": nf.k,
                "norm_degree": nf.ndeg(),
            });
            out["irreducible"] = json!(irreducibility_criterion(form)?);
        }
        if let Some(psi) = compare {
            out["compare"] = json!({ "entries": self.els(&psi.entries) });
            out["isometric"] = json!(pform_isometric(form, psi));
        }
        Ok(out)
    }

    fn ann(
        &self,
        sets: &[Vec<RationalFunction>],
        power: Option<usize>,
        n: usize,
        check: bool,
    ) -> Result<(Value, bool)> {
        let (p, m) = (self.field.p(), self.field.nvars());
        let spec = SetWedgeSpec::new(sets.to_vec())?;
        let bases = spec.p_bases();
        let (case, closed) = match power {
            Some(r) => ("power", Some(ann_closed_power(&sets[0], r, n)?)),
            None => match ann_closed_disjoint(&spec, n) {
                Ok(g) => ("disjoint", Some(g)),
                Err(Error::HypothesisViolated(_)) if sets.len() >= 2 => {
                    let (last, prefix) = sets.split_last().expect("at least two sets");
                    match ann_closed_mixed(prefix, last, n) {
                        Ok(g) => ("mixed", Some(g)),
                        Err(Error::HypothesisViolated(_)) => ("none", None),
                        Err(e) => return Err(e),
                    }
                }
                Err(Error::HypothesisViolated(_)) => ("none", None),
                Err(e) => return Err(e),
            },
        };
        let wedges: Vec<DifferentialForm> = match power {
            Some(r) => subsets(&bases[0], r)
                .iter()
                .map(|s| wedge_of_differentials(s, p, m))
                .collect(),
            None => transversal_wedges(&bases, p, m),
        };
        let mut out = json!({
            "case": case,
            "p_degrees": bases.iter().map(Vec::len).collect::<Vec<_>>(),
            "p_bases": bases.iter().map(|b| self.els(b)).collect::<Vec<_>>(),
        });
        let mut passed = true;
        match closed {
            Some(g) => {
                let expanded = expand_generator_set(&g);
                out["generators"] = self.generators(&g);
                out["kernel"] = self.basis(&expanded);
                if check {
                    let brute = ann_bruteforce(&wedges, n, p, m);
                    passed = brute == expanded;
                    out["check"] = json!({ "bruteforce": self.basis(&brute), "agree": passed });
                }
            }
            None => {
                out["generators"] = Value::Null;
                out["kernel"] = self.basis(&ann_bruteforce(&wedges, n, p, m));
            }
        }
        Ok((out, passed))
    }

    fn tower_info(&self, tower: &FFTowerDescriptor) -> Value {
        let mut forms: Vec<_> = tower.all_forms().collect();
        forms.sort_by_key(|f| f.original_index);
        let scalings: Vec<Value> = forms
            .iter()
            .map(|f| {
                json!({
                    "form": f.original_index,
                    "scale": self.el(&f.scale),
                    "p_degree": f.k,
                })
            })
            .collect();
        json!({
            "s": tower.s,
            "selected": tower.selected().iter().map(|f| f.original_index).collect::<Vec<_>>(),
            "pruned": tower.pruned.iter().map(|f| f.original_index).collect::<Vec<_>>(),
            "norm_bases": tower.selected_bases().iter().map(|b| self.els(b)).collect::<Vec<_>>(),
            "witness": self.els(&tower.witness),
            "scalings": scalings,
        })
    }

    fn tower_kernel(&self, forms: &[PForm], n: usize) -> Result<(Value, bool)> {
        let tower = normalize_tower(forms)?;
        let ffe = omega_kernel_ffe(&tower, n);
        let mut out = self.tower_info(&tower);
        out["kernel"] = self.basis(&ffe);
        let mut passed = true;
        match omega_kernel_closed(&tower, n) {
            Ok(closed) => {
                let expanded = expand_generator_set(&closed.generators);
                passed = expanded == ffe && closed.nu_sanity;
                out["closed"] = json!({
                    "case": closed.case,
                    "generators": self.generators(&closed.generators),
                    "expanded": self.basis(&expanded),
                    "nu_sanity": closed.nu_sanity,
                    "agree": expanded == ffe,
                });
            }
            Err(Error::CaseNotCovered(why)) => {
                out["closed"] = json!({ "not_covered": why });
            }
            Err(e) => return Err(e),
        }
        Ok((out, passed))
    }

    fn compositum_kernel(
        &self,
        roots: &[RationalFunction],
        form: &PForm,
        n: usize,
        check: bool,
    ) -> Result<(Value, bool)> {
        let k = omega_kernel_compositum(roots, form, n)?;
        let expanded = expand_generator_set(&k.generators);
        let mut out = json!({
            "roots": self.els(roots),
            "e": self.els(&k.e),
            "l": k.l,
            "wedges": k.wedges.iter().map(|w| self.form(w)).collect::<Vec<_>>(),
            "generators": self.generators(&k.generators),
            "kernel": self.basis(&expanded),
        });
        let mut passed = true;
        if check {
            let brute = ann_bruteforce(&k.wedges, n, self.field.p(), self.field.nvars());
            passed = brute == expanded;
            out["check"] = json!({ "bruteforce": self.basis(&brute), "agree": passed });
        }
        Ok((out, passed))
    }

    fn modular_kernel(
        &self,
        elements: &[RationalFunction],
        exponents: &[u32],
        n: usize,
        check: bool,
    ) -> Result<(Value, bool)> {
        let ext = ModularExtensionDescriptor {
            elements: elements.to_vec(),
            exponents: exponents.to_vec(),
        };
        let g = kernel_modular_insep(&ext, n)?;
        let expanded = expand_generator_set(&g);
        let mut out = json!({
            "elements": self.els(elements),
            "exponents": exponents,
            "generators": self.generators(&g),
            "kernel": self.basis(&expanded),
        });
        let mut passed = true;
        if check {
            let (p, m) = (self.field.p(), self.field.nvars());
            let brute = ann_bruteforce(&[wedge_of_differentials(elements, p, m)], n, p, m);
            passed = brute == expanded;
            out["check"] = json!({ "bruteforce": self.basis(&brute), "agree": passed });
        }
        Ok((out, passed))
    }

    fn witt(&self, desc: &WittKernelDescription) -> Value {
        let families: Vec<Value> = desc
            .families
            .iter()
            .map(|f| {
                json!({
                    "arity": f.arity,
                    "field_generators": self.els(&f.field_generators),
                    "text": f.describe(self.names()),
                })
            })
            .collect();
        let samples: Vec<Value> = desc
            .samples
            .iter()
            .zip(&desc.verification)
            .map(|(pi, ok)| json!({ "slots": self.els(&pi.slots), "verified": ok }))
            .collect();
        json!({
            "case": desc.case,
            "families": families,
            "wedges": desc.wedges.iter().map(|w| self.form(w)).collect::<Vec<_>>(),
            "samples": samples,
            "all_verified": desc.all_verified(),
            "additive": desc.additive,
        })
    }

    fn crosscheck_tower(&self, forms: &[PForm], n: usize) -> Result<(Value, bool)> {
        let tower = normalize_tower(forms)?;
        let closed = omega_kernel_closed(&tower, n)?;
        let expanded = expand_generator_set(&closed.generators);
        let brute = omega_kernel_ffe(&tower, n);
        let agree = expanded == brute;
        let passed = agree && closed.nu_sanity;
        let mut out = json!({
            "case": closed.case,
            "agree": agree,
            "nu_sanity": closed.nu_sanity,
            "ok": passed,
        });
        if !passed {
            out["counterexample"] = json!({
                "forms": forms.iter().map(|f| self.els(&f.entries)).collect::<Vec<_>>(),
                "n": n,
                "tower": self.tower_info(&tower),
                "closed": self.basis(&expanded),
                "bruteforce": self.basis(&brute),
            });
        }
        Ok((out, passed))
    }
}
