//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p pkernel --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use pkernel::base_field::{FieldDescriptor, RationalFunction};
use pkernel::campaign::{
    ann_campaign, case_tower_campaign, check_compositum, random_case_tower, random_compositum, random_entry,
    random_tower, run_campaign, AnnCase, CampaignReport, TowerCase, TowerInstance,
};
use pkernel::char2::{
    corrupt_sample, corruptible_slot, kato_e, verify_generator, witt_kernel_compositum_generators,
    witt_kernel_generators, BilinearDiagonal, PfisterForm, SamplingConfig, WittKernelDescription,
};
use pkernel::differential::{ann_bruteforce, d_of_element, transversal_wedges, DifferentialForm, SubspaceBasis};
use pkernel::exec::{map_range, ExecMode};
use pkernel::p_linear::{fp_coordinates, p_independent};
use pkernel::quasilinear::{lemma43_crosscheck, normalize_tower, omega_kernel_ffe, pform_isometric, PForm};
use pkernel::random::{instance_rng, random_element, random_monomial, InstanceRng, PolyShape};

struct Line {
    ok: bool,
    detail: String,
}

fn from_reports(reports: &[CampaignReport]) -> Line {
    let total: usize = reports.iter().map(|r| r.total).sum();
    let passed: usize = reports.iter().map(|r| r.passed).sum();
    let mut detail = format!("{passed}/{total}");
    for r in reports.iter().filter(|r| !r.ok()) {
        for f in r.failures.iter().take(2) {
            detail.push_str(&format!("\n      {} #{}: {}", r.name, f.index, f.message));
        }
    }
    Line {
        ok: passed == total,
        detail,
    }
}

// --- independent oracle for the kernel identity -----------------------------

fn nonzero_entry(rng: &mut InstanceRng, p: u32, m: usize) -> RationalFunction {
    loop {
        let x = random_entry(rng, p, m);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A p-basis of the norm field obtained differently from the library: scale
/// by the last nonzero entry, scan the quotients backwards, then apply a
/// random triangular change of generators `b'_j = u^p b_j (b'_{j-1})^c + v^p`.
fn alternative_norm_basis(phi: &PForm, rng: &mut InstanceRng) -> Vec<RationalFunction> {
    let (p, m) = (phi.entries[0].characteristic(), phi.entries[0].nvars());
    let z = phi.entries.iter().rposition(|a| !a.is_zero()).expect("nonzero form");
    let inv = phi.entries[z].inv().unwrap();
    let mut basis: Vec<RationalFunction> = Vec::new();
    for (_, a) in phi.entries.iter().enumerate().rev().filter(|&(i, _)| i != z) {
        let mut trial = basis.clone();
        trial.push(a * &inv);
        if p_independent(&trial) {
            basis = trial;
        }
    }
    let mut out: Vec<RationalFunction> = Vec::new();
    for b in &basis {
        let u = random_monomial(rng, p, m, 2).frobenius();
        let v = if rng.gen_bool(0.5) {
            random_monomial(rng, p, m, 2).frobenius()
        } else {
            RationalFunction::zero(p, m)
        };
        let mut c = &u * b;
        if let Some(prev) = out.last() {
            if rng.gen_bool(0.5) {
                c = &c * prev;
            }
        }
        out.push(&c + &v);
    }
    assert!(p_independent(&out));
    out
}

fn any_nonzero(wedges: &[DifferentialForm]) -> bool {
    wedges.iter().any(|w| !w.is_zero())
}

/// Kernel from alternative bases and a maximal subfamily chosen back to front.
fn oracle_kernel(inst: &TowerInstance, rng: &mut InstanceRng) -> SubspaceBasis {
    let bases: Vec<Vec<RationalFunction>> = inst.forms.iter().map(|f| alternative_norm_basis(f, rng)).collect();
    let mut chosen: Vec<Vec<RationalFunction>> = Vec::new();
    for b in bases.iter().rev().filter(|b| !b.is_empty()) {
        let mut trial = chosen.clone();
        trial.push(b.clone());
        if any_nonzero(&transversal_wedges(&trial, inst.p, inst.m)) {
            chosen = trial;
        }
    }
    if chosen.is_empty() {
        return SubspaceBasis::zero(inst.p, inst.m, inst.n);
    }
    ann_bruteforce(&transversal_wedges(&chosen, inst.p, inst.m), inst.n, inst.p, inst.m)
}

fn tower_instance(seed: u64, i: usize) -> (TowerInstance, InstanceRng) {
    let mut rng = instance_rng(seed, i as u64);
    let p = if i % 2 == 0 { 2 } else { 3 };
    (random_tower(p, &mut rng), rng)
}

const TOWERS: usize = 120;
const TOWER_SEED: u64 = 0x7043;

fn criterion_2() -> Line {
    let verdicts = map_range(ExecMode::default(), TOWERS, |i| {
        let (inst, mut rng) = tower_instance(TOWER_SEED, i);
        let oracle = oracle_kernel(&inst, &mut rng);
        let tower = normalize_tower(&inst.forms).unwrap();
        (omega_kernel_ffe(&tower, inst.n) == oracle, inst.describe())
    });
    let bad: Vec<&String> = verdicts.iter().filter(|v| !v.0).map(|v| &v.1).collect();
    let mut detail = format!("{}/{} towers", TOWERS - bad.len(), TOWERS);
    for b in bad.iter().take(2) {
        detail.push_str(&format!("\n      {b}"));
    }
    Line {
        ok: bad.is_empty(),
        detail,
    }
}

fn criterion_3() -> Line {
    let verdicts = map_range(ExecMode::default(), TOWERS, |i| {
        let (inst, _) = tower_instance(TOWER_SEED, i);
        let tower = normalize_tower(&inst.forms).unwrap();
        let report = lemma43_crosscheck(&tower);
        (report.agree, report.checks.len(), inst.describe())
    });
    let checks: usize = verdicts.iter().map(|v| v.1).sum();
    let bad: Vec<&String> = verdicts.iter().filter(|v| !v.0).map(|v| &v.2).collect();
    let mut detail = format!("{}/{} towers, {} subfamily checks", TOWERS - bad.len(), TOWERS, checks);
    for b in bad.iter().take(2) {
        detail.push_str(&format!("\n      {b}"));
    }
    Line {
        ok: bad.is_empty(),
        detail,
    }
}

fn criterion_4() -> Line {
    let r = run_campaign(
        "order-scaling",
        ExecMode::default(),
        0x5ca1e,
        60,
        |rng| {
            let p = if rng.gen_bool(0.5) { 2 } else { 3 };
            let inst = random_tower(p, rng);
            let mut moved: Vec<PForm> = inst
                .forms
                .iter()
                .map(|f| f.scaled(&nonzero_entry(rng, p, inst.m)))
                .collect();
            moved.shuffle(rng);
            (inst, moved)
        },
        |(inst, moved)| {
            let a = omega_kernel_ffe(&normalize_tower(&inst.forms).unwrap(), inst.n);
            let b = omega_kernel_ffe(&normalize_tower(moved).unwrap(), inst.n);
            if a == b {
                Ok(())
            } else {
                Err(inst.describe())
            }
        },
    );
    from_reports(&[r])
}

fn criterion_5() -> Line {
    let mut reports = Vec::new();
    for p in [2, 3] {
        for case in TowerCase::ALL {
            reports.push(case_tower_campaign(case, p, 0xc105ed, 25, ExecMode::default()));
        }
    }
    let collapsed: usize = [2u32, 3]
        .iter()
        .map(|&p| {
            map_range(ExecMode::default(), 40, |i| {
                random_compositum(p, &mut instance_rng(0xc0, i as u64)).collapsed
            })
            .into_iter()
            .filter(|&c| c)
            .count()
        })
        .sum();
    for p in [2, 3] {
        reports.push(run_campaign(
            &format!("compositum-p{p}"),
            ExecMode::default(),
            0xc0,
            40,
            |rng| random_compositum(p, rng),
            |inst| check_compositum(inst, ExecMode::Sequential),
        ));
    }
    let mut line = from_reports(&reports);
    line.ok &= collapsed > 0;
    line.detail.push_str(&format!(" ({collapsed} collapsed rejections)"));
    line
}

fn to_bilinear(forms: &[PForm]) -> Vec<BilinearDiagonal> {
    forms
        .iter()
        .map(|f| BilinearDiagonal::new(f.entries.iter().filter(|a| !a.is_zero()).cloned().collect()).unwrap())
        .collect()
}

fn criterion_6() -> Line {
    let cfg = |seed| SamplingConfig {
        budget: 6,
        seed,
        bound: 1,
    };
    let cases = [
        TowerCase::RepeatedFewer,
        TowerCase::RepeatedMany,
        TowerCase::PdegOnePrefix,
    ];
    let descriptions: Vec<WittKernelDescription> = map_range(ExecMode::default(), 45, |i| {
        let mut rng = instance_rng(0x2b17, i as u64);
        if i % 4 == 3 {
            loop {
                let inst = random_compositum(2, &mut rng);
                if !inst.collapsed {
                    let b = to_bilinear(std::slice::from_ref(&inst.phi)).remove(0);
                    return witt_kernel_compositum_generators(&inst.roots, &b, &cfg(i as u64)).unwrap();
                }
            }
        }
        let inst = random_case_tower(cases[i % 3], 2, &mut rng);
        witt_kernel_generators(&to_bilinear(&inst.forms), &cfg(i as u64)).unwrap()
    });
    let (mut sampled, mut verified, mut corrupted, mut rejected) = (0, 0, 0, 0);
    for d in &descriptions {
        for (pi, &ok) in d.samples.iter().zip(&d.verification) {
            sampled += 1;
            verified += usize::from(ok && verify_generator(pi, &d.wedges).unwrap());
            if let Some(slot) = corruptible_slot(pi, &d.wedges) {
                let (bad, wedges) = corrupt_sample(pi, slot, &d.wedges);
                corrupted += 1;
                rejected += usize::from(!verify_generator(&bad, &wedges).unwrap());
            }
        }
    }
    Line {
        ok: sampled >= 100 && verified == sampled && corrupted > 0 && rejected == corrupted,
        detail: format!("verified {verified}/{sampled}, corrupted rejected {rejected}/{corrupted}"),
    }
}

fn criterion_7() -> Line {
    let per_kind = 100;
    let shape = PolyShape {
        max_terms: 3,
        max_exp: 4,
    };
    let results: Vec<Vec<(&'static str, bool)>> = map_range(ExecMode::default(), per_kind, |i| {
        let mut rng = instance_rng(0x1de, i as u64);
        let p = [2, 3, 5][i % 3];
        let m = rng.gen_range(1..=3);
        let a = random_element(&mut rng, p, m, shape);
        let b = random_element(&mut rng, p, m, shape);
        let c = random_element(&mut rng, p, m, shape);
        let da = d_of_element(&a);
        let db = d_of_element(&b);
        let leibniz = d_of_element(&(&a * &b)) == db.scale(&a).add(&da.scale(&b));
        let w1 = da.scale(&c);
        let w2 = d_of_element(&c).scale(&b).wedge(&da);
        let dd = w1.d().d().is_zero() && w2.d().d().is_zero() && da.d().is_zero();
        let frob = d_of_element(&a.frobenius()).is_zero();
        let x = db.scale(&a);
        let y = if m >= 2 {
            w2.clone()
        } else {
            DifferentialForm::scalar(&c)
        };
        let sign = if (x.degree() * y.degree()) % 2 == 1 { -1 } else { 1 };
        let anti = x.wedge(&y) == y.wedge(&x).scale(&RationalFunction::constant(p, m, sign)) && x.wedge(&x).is_zero();
        let coords = fp_coordinates(&a).reconstruct(p, m) == a;
        let root = a.frobenius().pth_root().as_ref() == Ok(&a)
            && (a.pth_root().is_ok() == (0..m).all(|v| a.partial_derivative(v).is_zero()));
        vec![
            ("leibniz", leibniz),
            ("d∘d", dd),
            ("d(a^p)", frob),
            ("antisymmetry", anti),
            ("coordinates", coords),
            ("pth-root", root),
        ]
    });
    let total: usize = results.iter().map(Vec::len).sum();
    let failed: Vec<String> = results
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.iter().filter(|(_, ok)| !ok).map(move |(k, _)| format!("{k} #{i}")))
        .collect();
    Line {
        ok: failed.is_empty() && total >= 500,
        detail: if failed.is_empty() {
            format!("{total}/{total}")
        } else {
            format!("{}/{} failed: {}", total - failed.len(), total, failed.join(", "))
        },
    }
}

fn criterion_8() -> Line {
    let mut checks = Vec::new();
    for p in [2, 3, 5, 7] {
        let f = FieldDescriptor::with_vars(p, &[]);
        let form = |xs: &[i64]| PForm::new(xs.iter().map(|&c| f.constant(c)).collect()).unwrap();
        checks.push(pform_isometric(&form(&[1, 1]), &form(&[1, 0])));
        checks.push(!pform_isometric(&form(&[1]), &form(&[0])));
    }
    let f = FieldDescriptor::with_vars(2, &["x", "y"]);
    let x = f.parse("x").unwrap();
    let y = f.parse("y").unwrap();
    let dx_x = DifferentialForm::basis_element(&x.inv().unwrap(), &[0]);
    let dy_y = DifferentialForm::basis_element(&y.inv().unwrap(), &[1]);
    let e1 = kato_e(&PfisterForm::new(vec![x.clone()]).unwrap()).unwrap();
    let e2 = kato_e(&PfisterForm::new(vec![x, y]).unwrap()).unwrap();
    checks.push(e1 == dx_x);
    checks.push(e2 == dx_x.wedge(&dy_y));
    let names = f.vars();
    let shown = format!("{} | {}", e1.display_with(names), e2.display_with(names));
    checks.push(shown == "(1/x) dx | (1/(x*y)) dx^dy");
    Line {
        ok: checks.iter().all(|&c| c),
        detail: format!(
            "{}/{} identities; e_1, e_2 = {shown}",
            checks.iter().filter(|&&c| c).count(),
            checks.len()
        ),
    }
}

fn criterion_1() -> Line {
    let mut reports = Vec::new();
    for p in [2, 3] {
        for case in AnnCase::ALL {
            reports.push(ann_campaign(case, p, 0xa11, 200, ExecMode::default()));
        }
    }
    from_reports(&reports)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Line); 8] = [
        ("closed-form annihilators equal brute force", criterion_1),
        ("tower kernel from alternative p-bases", criterion_2),
        ("T-polynomial independence vs transversal criterion", criterion_3),
        ("kernel invariant under reordering and rescaling", criterion_4),
        ("closed tower and compositum kernels", criterion_5),
        ("char-2 Pfister generator verification", criterion_6),
        ("algebraic identity suite", criterion_7),
        ("worked identities", criterion_8),
    ];
    let mut all_ok = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let line = run();
        all_ok &= line.ok;
        println!(
            "criterion {}: {} {} [{}] ({:.1}s)",
            i + 1,
            if line.ok { "PASS" } else { "FAIL" },
            name,
            line.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
