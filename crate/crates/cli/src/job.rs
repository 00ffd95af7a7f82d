//! Job files: JSON objects naming a field, a command and its parameters.
//!
//! Expressions inside strings use the base-field grammar. A parsed job can
//! be written back with [`JobSpec::to_json`], which prints every expression
//! in canonical form.

use serde::{Deserialize, Serialize};

use pkernel::base_field::{Field, FieldDescriptor, RationalFunction};
use pkernel::campaign::{AnnCase, TowerCase};
use pkernel::char2::BilinearDiagonal;
use pkernel::quasilinear::PForm;
use pkernel::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    Ann,
    Kernel,
    Pform,
    Witt,
    Crosscheck,
}

impl CommandName {
    fn as_str(self) -> &'static str {
        match self {
            CommandName::Ann => "ann",
            CommandName::Kernel => "kernel",
            CommandName::Pform => "pform",
            CommandName::Witt => "witt",
            CommandName::Crosscheck => "crosscheck",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// The job file as written; every command parameter is optional here and
/// checked against the command afterwards.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub p: u32,
    pub vars: Vec<String>,
    pub command: CommandName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forms: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub campaign: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Campaign {
    Ann(AnnCase),
    Tower(TowerCase),
    Compositum,
}

impl Campaign {
    pub fn all() -> Vec<Campaign> {
        let mut v: Vec<Campaign> = AnnCase::ALL.iter().map(|&c| Campaign::Ann(c)).collect();
        v.extend(TowerCase::ALL.iter().map(|&c| Campaign::Tower(c)));
        v.push(Campaign::Compositum);
        v
    }

    pub fn name(self) -> String {
        match self {
            Campaign::Ann(c) => format!("ann-{}", c.name()),
            Campaign::Tower(c) => format!("tower-{}", c.name()),
            Campaign::Compositum => "compositum".to_string(),
        }
    }

    fn from_name(s: &str) -> Option<Campaign> {
        Campaign::all().into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelSource {
    Tower(Vec<PForm>),
    Compositum {
        roots: Vec<RationalFunction>,
        form: PForm,
    },
    Modular {
        elements: Vec<RationalFunction>,
        exponents: Vec<u32>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WittSource {
    Tower(Vec<BilinearDiagonal>),
    Compositum {
        roots: Vec<RationalFunction>,
        form: BilinearDiagonal,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Task {
    PForm {
        form: PForm,
        compare: Option<PForm>,
    },
    Ann {
        sets: Vec<Vec<RationalFunction>>,
        power: Option<usize>,
        n: usize,
    },
    Kernel {
        source: KernelSource,
        n: usize,
    },
    Witt(WittSource),
    CrosscheckCampaign {
        campaign: Campaign,
        count: usize,
    },
    CrosscheckTower {
        forms: Vec<PForm>,
        n: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub field: Field,
    pub task: Task,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub format: Option<Format>,
    pub check: bool,
    /// The job as read, with expressions in canonical form.
    file: JobFile,
}

pub const DEFAULT_BUDGET: usize = 8;
pub const DEFAULT_COUNT: usize = 50;

impl JobSpec {
    pub fn command(&self) -> CommandName {
        self.file.command
    }

    pub fn seed_or_default(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn budget_or_default(&self) -> usize {
        self.budget.unwrap_or(DEFAULT_BUDGET)
    }

    /// The canonical job file, reflecting any overrides applied after parsing.
    pub fn canonical(&self) -> JobFile {
        JobFile {
            seed: self.seed,
            budget: self.budget,
            format: self.format,
            check: self.check.then_some(true),
            ..self.file.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.canonical()).expect("job files serialize")
    }
}

/// Reads a job from JSON text.
pub fn parse_job(text: &str) -> Result<JobSpec> {
    let file: JobFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    let field = Field::new(FieldDescriptor::new(file.p, file.vars.clone())?);
    let mut r = Resolver { field: &field, text };
    let (task, canonical) = r.task(&file)?;
    Ok(JobSpec {
        seed: file.seed,
        budget: file.budget,
        format: file.format,
        check: file.check.unwrap_or(false),
        task,
        file: canonical,
        field,
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

struct Resolver<'a> {
    field: &'a Field,
    text: &'a str,
}

const PARAMS: [&str; 12] = [
    "n",
    "entries",
    "compare",
    "sets",
    "power",
    "forms",
    "roots",
    "form",
    "elements",
    "exponents",
    "campaign",
    "count",
];

fn present(f: &JobFile) -> Vec<&'static str> {
    let flags = [
        f.n.is_some(),
        f.entries.is_some(),
        f.compare.is_some(),
        f.sets.is_some(),
        f.power.is_some(),
        f.forms.is_some(),
        f.roots.is_some(),
        f.form.is_some(),
        f.elements.is_some(),
        f.exponents.is_some(),
        f.campaign.is_some(),
        f.count.is_some(),
    ];
    PARAMS
        .iter()
        .zip(flags)
        .filter(|(_, on)| *on)
        .map(|(k, _)| *k)
        .collect()
}

fn semantic(msg: impl Into<String>) -> Error {
    Error::Semantic(msg.into())
}

fn required<'a, T>(v: &'a Option<T>, name: &str, command: CommandName) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| semantic(format!("command `{}` requires `{name}`", command.as_str())))
}

impl Resolver<'_> {
    fn expr(&mut self, src: &str) -> Result<RationalFunction> {
        self.field.parse(src).map_err(|e| match e {
            Error::Parse { line, column, message } => {
                let (l, c) = self.locate(src).map_or((line, column), |(l, c)| {
                    if line == 1 {
                        (l, c + column)
                    } else {
                        (l + line - 1, column)
                    }
                });
                Error::Parse {
                    line: l,
                    column: c,
                    message: format!("in expression {src:?}: {message}"),
                }
            }
            Error::Semantic(m) => semantic(format!("in expression {src:?}: {m}")),
            other => other,
        })
    }

    /// Line and column of the opening quote of `src` in the job text.
    fn locate(&self, src: &str) -> Option<(usize, usize)> {
        let quoted = serde_json::to_string(src).ok()?;
        let at = self.text.find(&quoted)?;
        let before = &self.text[..at];
        let line = before.matches('\n').count() + 1;
        let column = before
            .rfind('\n')
            .map_or(before.chars().count(), |i| before[i + 1..].chars().count())
            + 1;
        Some((line, column))
    }

    fn list(&mut self, xs: &[String]) -> Result<Vec<RationalFunction>> {
        xs.iter().map(|s| self.expr(s)).collect()
    }

    fn lists(&mut self, xss: &[Vec<String>]) -> Result<Vec<Vec<RationalFunction>>> {
        xss.iter().map(|xs| self.list(xs)).collect()
    }

    fn show(&self, xs: &[RationalFunction]) -> Vec<String> {
        xs.iter().map(|a| self.field.format(a)).collect()
    }

    fn show_all(&self, xss: &[Vec<RationalFunction>]) -> Vec<Vec<String>> {
        xss.iter().map(|xs| self.show(xs)).collect()
    }

    fn task(&mut self, f: &JobFile) -> Result<(Task, JobFile)> {
        let cmd = f.command;
        let given = present(f);
        let allow = |allowed: &[&str]| -> Result<()> {
            match given.iter().find(|k| !allowed.contains(k)) {
                Some(k) => Err(semantic(format!(
                    "`{k}` is not a parameter of command `{}`",
                    cmd.as_str()
                ))),
                None => Ok(()),
            }
        };
        let mut out = JobFile {
            p: f.p,
            vars: f.vars.clone(),
            command: cmd,
            seed: None,
            budget: None,
            format: None,
            check: None,
            n: f.n,
            entries: None,
            compare: None,
            sets: None,
            power: None,
            forms: None,
            roots: None,
            form: None,
            elements: None,
            exponents: None,
            campaign: None,
            count: None,
        };
        let task = match cmd {
            CommandName::Pform => {
                allow(&["entries", "compare"])?;
                let entries = self.list(required(&f.entries, "entries", cmd)?)?;
                let compare = f.compare.as_ref().map(|c| self.list(c)).transpose()?;
                out.entries = Some(self.show(&entries));
                out.compare = compare.as_ref().map(|c| self.show(c));
                Task::PForm {
                    form: PForm::new(entries)?,
                    compare: compare.map(PForm::new).transpose()?,
                }
            }
            CommandName::Ann => {
                allow(&["sets", "power", "n"])?;
                let sets = self.lists(required(&f.sets, "sets", cmd)?)?;
                let n = *required(&f.n, "n", cmd)?;
                if sets.is_empty() || sets.iter().any(Vec::is_empty) {
                    return Err(semantic("`sets` must be a nonempty list of nonempty sets"));
                }
                if f.power.is_some() && sets.len() != 1 {
                    return Err(semantic("`power` takes exactly one set"));
                }
                out.sets = Some(self.show_all(&sets));
                out.power = f.power;
                Task::Ann {
                    sets,
                    power: f.power,
                    n,
                }
            }
            CommandName::Kernel => {
                allow(&["forms", "roots", "form", "elements", "exponents", "n"])?;
                let n = *required(&f.n, "n", cmd)?;
                let source = match (&f.forms, &f.roots, &f.form, &f.elements) {
                    (Some(forms), None, None, None) => {
                        let forms = self.pforms(forms)?;
                        out.forms = Some(forms.iter().map(|phi| self.show(&phi.entries)).collect());
                        KernelSource::Tower(forms)
                    }
                    (None, Some(roots), Some(form), None) if f.exponents.is_none() => {
                        let roots = self.list(roots)?;
                        let form = PForm::new(self.list(form)?)?;
                        out.roots = Some(self.show(&roots));
                        out.form = Some(self.show(&form.entries));
                        KernelSource::Compositum { roots, form }
                    }
                    (None, None, None, Some(elements)) => {
                        let elements = self.list(elements)?;
                        let exponents = f.exponents.clone().unwrap_or_else(|| vec![1; elements.len()]);
                        out.elements = Some(self.show(&elements));
                        out.exponents = Some(exponents.clone());
                        KernelSource::Modular { elements, exponents }
                    }
                    _ => {
                        return Err(semantic(
                            "command `kernel` takes exactly one of `forms`, `roots` with `form`, or `elements`",
                        ))
                    }
                };
                Task::Kernel { source, n }
            }
            CommandName::Witt => {
                allow(&["forms", "roots", "form"])?;
                let source = match (&f.forms, &f.roots, &f.form) {
                    (Some(forms), None, None) => {
                        let mut out_forms = Vec::new();
                        let mut bs = Vec::new();
                        for xs in forms {
                            let entries = self.list(xs)?;
                            out_forms.push(self.show(&entries));
                            bs.push(BilinearDiagonal::new(entries)?);
                        }
                        if bs.is_empty() {
                            return Err(semantic("`forms` must be nonempty"));
                        }
                        out.forms = Some(out_forms);
                        WittSource::Tower(bs)
                    }
                    (None, Some(roots), Some(form)) => {
                        let roots = self.list(roots)?;
                        let entries = self.list(form)?;
                        out.roots = Some(self.show(&roots));
                        out.form = Some(self.show(&entries));
                        WittSource::Compositum {
                            roots,
                            form: BilinearDiagonal::new(entries)?,
                        }
                    }
                    _ => return Err(semantic("command `witt` takes either `forms` or `roots` with `form`")),
                };
                Task::Witt(source)
            }
            CommandName::Crosscheck => match (&f.campaign, &f.forms) {
                (Some(name), None) => {
                    allow(&["campaign", "count"])?;
                    let campaign = Campaign::from_name(name).ok_or_else(|| {
                        let known: Vec<String> = Campaign::all().into_iter().map(Campaign::name).collect();
                        semantic(format!("unknown campaign {name:?}; known: {}", known.join(", ")))
                    })?;
                    out.campaign = Some(name.clone());
                    out.count = f.count;
                    Task::CrosscheckCampaign {
                        campaign,
                        count: f.count.unwrap_or(DEFAULT_COUNT),
                    }
                }
                (None, Some(forms)) => {
                    allow(&["forms", "n"])?;
                    let n = *required(&f.n, "n", cmd)?;
                    let forms = self.pforms(forms)?;
                    out.forms = Some(forms.iter().map(|phi| self.show(&phi.entries)).collect());
                    Task::CrosscheckTower { forms, n }
                }
                _ => return Err(semantic("command `crosscheck` takes either `campaign` or `forms`")),
            },
        };
        Ok((task, out))
    }

    fn pforms(&mut self, forms: &[Vec<String>]) -> Result<Vec<PForm>> {
        if forms.is_empty() {
            return Err(semantic("`forms` must be nonempty"));
        }
        forms.iter().map(|xs| PForm::new(self.list(xs)?)).collect()
    }
}
