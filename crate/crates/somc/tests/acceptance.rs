mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use somc::cli::{self, preset, run_example, ExampleReport};
use somc::codes::{
    affine_witness, analyze, minimality_binary_walsh, minimality_exact, rank,
    self_orthogonal_direct, so_criterion_binary, so_criterion_odd, AbVerdict, BetaDomain, CodeKind,
    CodeSpec, MinMethod, OddVariant, Parity,
};
use somc::cyclotomic::{gauss_sum, p_star, CycInt};
use somc::galois::{default_field, eta0, is_prime, FieldSpec};
use somc::pfunc::{f_a_from_plateaued, f_t_function, ElemRef, FnDescriptor};
use somc::search::{self, Certificate, Family, SearchTask};
use somc::theory::{self, as_signed, expected_total, TableId, TheoryParams};
use somc::walsh::{walsh_transform, walsh_transform_naive, WalshSpectrum};

use common::{biased_fn, minimal_by_covering, random_fn, Tally};

/// Sub-checks that cannot pass; see the decisions log for the analysis.
const UNATTAINABLE: &[(u32, &str)] = &[(5, "ex-4.2b: minimal (exact pair scan)")];

struct Criterion {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Criterion {
        Criterion {
            id,
            title,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> (T, Duration) {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    pool.install(|| {
        let t = Instant::now();
        let v = f();
        (v, t.elapsed())
    })
}

/// Runs a preset single-threaded and records its checks and runtime.
fn preset_run(c: &mut Criterion, name: &str, limit: Duration) -> ExampleReport {
    let p = preset(name).unwrap();
    let (rep, dt) = single_threaded(|| run_example(p).unwrap());
    for chk in &rep.checks {
        c.require(chk.ok, format!("{name}: {}", chk.name));
    }
    c.require(dt < limit, format!("{name}: runtime {dt:?} over {limit:?}"));
    c.note(format!("{name}: {} in {dt:.2?}", rep.enumerator));
    rep
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::new(
        1,
        "ex-3.1a [16383, 15, 2064], SO by direct and mod-8, minimal via Walsh, AB violated",
    );
    let rep = preset_run(&mut c, "ex-3.1a", Duration::from_secs(10));
    let r = &rep.report;
    c.require(r.params == [16383, 15, 2064], "params");
    c.require(
        r.self_orthogonal.direct && r.self_orthogonal.criterion == Some(true),
        "SO",
    );
    c.require(
        r.self_orthogonal.criterion_name == "walsh-mod-8",
        "SO criterion is mod-8",
    );
    c.require(
        r.minimal
            == somc::codes::MinReport {
                verdict: Some(true),
                method: MinMethod::Walsh,
            },
        "minimal via walsh",
    );
    c.require(r.ab == AbVerdict::Violates && r.ab_violating, "AB violated");
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::new(2, "ex-3.1b [4095, 13, 520] with its enumerator");
    let rep = preset_run(&mut c, "ex-3.1b", Duration::from_secs(5));
    c.require(rep.report.params == [4095, 13, 520], "params");
    c
}

fn criterion_3() -> Criterion {
    let mut c = Criterion::new(
        3,
        "ex-3.2 [65535, 15, 16450], singly-even, SO by the mod-8 test on V",
    );
    let rep = preset_run(&mut c, "ex-3.2", Duration::from_secs(30));
    let r = &rep.report;
    c.require(r.params == [65535, 15, 16450], "params");
    c.require(r.parity == Parity::SinglyEven, "singly-even");
    c.require(
        r.self_orthogonal.criterion == Some(true)
            && r.self_orthogonal.criterion_name == "walsh-mod-8",
        "SO on V",
    );
    c.require(
        r.assumptions
            .iter()
            .any(|a| a.contains("subspace of dimension 14")),
        "beta domain is V",
    );
    c
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::new(
        4,
        "ex-4.1a {0:1, 54:240, 81:2} with errata note and Griesmer equality; ex-4.1b [243, 6, 153]",
    );
    let a = preset_run(&mut c, "ex-4.1a", Duration::from_secs(2));
    c.require(a.report.params == [81, 5, 54], "ex-4.1a params");
    c.require(
        a.report.weights == [(0, 1), (54, 240), (81, 2)],
        "ex-4.1a weights",
    );
    c.require(a.report.griesmer.met, "ex-4.1a Griesmer equality");
    c.require(a.errata.is_some(), "ex-4.1a errata note");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(["somc", "example", "ex-4.1a"], &mut out, &mut err);
    let text = String::from_utf8(out).unwrap();
    c.require(
        code == 0 && text.contains("errata: text states [243, 6, 54]"),
        "ex-4.1a CLI exit 0 with errata",
    );
    let b = preset_run(&mut c, "ex-4.1b", Duration::from_secs(2));
    c.require(b.report.params == [243, 6, 153], "ex-4.1b params");
    c.require(
        b.report.weights == [(0, 1), (153, 242), (162, 242), (171, 242), (243, 2)],
        "ex-4.1b weights",
    );
    c
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::new(5, "ex-4.2a/b enumerators, s = 1/2 with supports 81/27, ternary SO, minimal by exact scan, AB violated");
    for (name, params, s, support) in [
        ("ex-4.2a", [242, 6, 72], 1, 81),
        ("ex-4.2b", [242, 6, 54], 2, 27),
    ] {
        let rep = preset_run(&mut c, name, Duration::from_secs(10));
        let r = &rep.report;
        c.require(r.params == params, format!("{name}: params"));
        let b = rep.base_plateaued.clone().unwrap();
        c.require(
            b.s == Some(s) && b.support_size == support,
            format!("{name}: base s and support"),
        );
        c.require(
            r.self_orthogonal.criterion_name == "ternary-divisibility",
            format!("{name}: ternary criterion"),
        );
        c.require(
            r.minimal.method == MinMethod::Exact,
            format!("{name}: minimality by exact scan"),
        );
        c.require(r.ab == AbVerdict::Violates, format!("{name}: AB violated"));
    }
    // Regression guard for the unattainable sub-check: an independent
    // support-covering scan agrees that ex-4.2b is not minimal.
    let p = preset("ex-4.2b").unwrap();
    let spec = cli::build_spec(p.field, p.function, p.kind, p.beta_domain).unwrap();
    let exact = minimality_exact(&spec).unwrap();
    let covering = minimal_by_covering(&spec);
    assert!(
        !exact && !covering,
        "ex-4.2b minimality changed: exact {exact}, covering {covering}"
    );
    c.note("ex-4.2b is not minimal by both the exact scan and support covering");
    c
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::new(
        6,
        "criterion equivalence: binary SO, odd SO (C_f and augmented), binary Walsh minimality",
    );
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    let mut t = Tally::new();
    let mut positives = 0;
    while t.trials < 240 {
        let n = rng.gen_range(3..=6);
        let ctx = default_field(2, n).unwrap();
        let f = biased_fn(&ctx, &mut rng, false);
        let spec = CodeSpec::new(f.clone(), CodeKind::Full, BetaDomain::FullField).unwrap();
        let direct = self_orthogonal_direct(&spec);
        let crit = so_criterion_binary(&walsh_transform(&f), &BetaDomain::FullField).unwrap();
        positives += usize::from(direct);
        t.record(direct == crit, || format!("n={n} {:?}", f.values()));
    }
    c.require(
        t.disagreements.is_empty(),
        format!("binary SO: {} disagreements", t.disagreements.len()),
    );
    c.require(
        positives > 0 && positives < t.trials,
        "binary SO: both verdicts occur",
    );
    c.note(format!(
        "binary SO {} trials, {positives} self-orthogonal",
        t.trials
    ));

    for (p, n) in [(5u32, 2u32), (7, 1)] {
        let ctx = default_field(p, n).unwrap();
        for (variant, kind) in [
            (OddVariant::Cf, CodeKind::Full),
            (OddVariant::Augmented, CodeKind::Augmented),
        ] {
            let mut t = Tally::new();
            let mut positives = 0;
            while t.trials < 200 {
                let f = biased_fn(&ctx, &mut rng, kind == CodeKind::Augmented);
                let spec = CodeSpec::new(f.clone(), kind, BetaDomain::FullField).unwrap();
                let direct = self_orthogonal_direct(&spec);
                let crit = so_criterion_odd(&walsh_transform(&f), &BetaDomain::FullField, variant)
                    .unwrap();
                positives += usize::from(direct);
                t.record(direct == crit, || format!("{:?}", f.values()));
            }
            let label = format!("odd SO GF({p}^{n}) {variant:?}");
            c.require(
                t.disagreements.is_empty(),
                format!("{label}: {} disagreements", t.disagreements.len()),
            );
            c.require(
                positives > 0 && positives < t.trials,
                format!("{label}: both verdicts occur"),
            );
            c.note(format!(
                "{label} {} trials, {positives} self-orthogonal",
                t.trials
            ));
        }
    }

    let mut t = Tally::new();
    let mut minimal = 0;
    while t.trials < 120 {
        let n = rng.gen_range(3..=6);
        let ctx = default_field(2, n).unwrap();
        let f = random_fn(&ctx, &mut rng);
        let spectrum = walsh_transform(&f);
        let spec = CodeSpec::new(f.clone(), CodeKind::Punctured, BetaDomain::FullField).unwrap();
        if affine_witness(&spectrum).is_some() || rank(&spec) < spec.message_dim() {
            continue;
        }
        let walsh = minimality_binary_walsh(&spec, &spectrum).unwrap();
        let exact = minimality_exact(&spec).unwrap();
        minimal += usize::from(exact);
        t.record(walsh == exact, || format!("n={n} {:?}", f.values()));
    }
    c.require(
        t.disagreements.is_empty(),
        format!("walsh minimality: {} disagreements", t.disagreements.len()),
    );
    c.require(
        minimal > 0 && minimal < t.trials,
        "walsh minimality: both verdicts occur",
    );
    c.note(format!(
        "walsh minimality {} trials, {minimal} minimal",
        t.trials
    ));
    c
}

fn criterion_7() -> Criterion {
    let mut c = Criterion::new(
        7,
        "Gauss sums, extension Gauss sums, Parseval, fast = naive transform",
    );
    for p in [3u32, 5, 7, 11] {
        let g = gauss_sum(p).unwrap();
        c.require(
            (&g * &g).as_integer() == Some(p_star(p)),
            format!("G^2 = p* for p={p}"),
        );
        for a in 1..p as i64 {
            c.require(
                g.sigma(a).unwrap() == g.scale(eta0(p, a)),
                format!("sigma_{a}(G) for p={p}"),
            );
        }
    }
    for (p, n) in [(3u32, 2u32), (3, 3), (5, 2)] {
        let ctx = default_field(p, n).unwrap();
        let g = gauss_sum(p).unwrap();
        for r in 1..ctx.q() {
            let mut coords = vec![0i64; p as usize];
            for x in 1..ctx.q() {
                coords[ctx.trace(ctx.mul(r, x)) as usize] += ctx.eta(x).unwrap();
            }
            let sign = if n % 2 == 1 { 1 } else { -1 } * ctx.eta(r).unwrap();
            c.require(
                CycInt::new(p, coords) == g.pow(n).scale(sign),
                format!("extension Gauss sum p={p} n={n} r={r}"),
            );
        }
    }
    let mut fields: Vec<(u32, u32)> = Vec::new();
    for p in (2u32..=243).filter(|&p| is_prime(p)) {
        let mut n = 1;
        while (p as u64).pow(n) <= 243 {
            fields.push((p, n));
            n += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut spectra: Vec<WalshSpectrum> = Vec::new();
    let mut mismatches = 0;
    for _ in 0..500 {
        let (p, n) = fields[rng.gen_range(0..fields.len())];
        let f = random_fn(&default_field(p, n).unwrap(), &mut rng);
        let fast = walsh_transform(&f);
        mismatches += usize::from(fast != walsh_transform_naive(&f));
        spectra.push(fast);
    }
    c.require(
        mismatches == 0,
        format!("fast vs naive: {mismatches} mismatches in 500"),
    );
    for p in cli::PRESETS {
        let ctx = FieldSpec::parse(p.field).unwrap().build().unwrap();
        spectra.push(walsh_transform(
            &FnDescriptor::parse(p.function)
                .unwrap()
                .build(&ctx)
                .unwrap(),
        ));
    }
    let bad = spectra.iter().filter(|s| !s.parseval_ok()).count();
    c.require(bad == 0, format!("Parseval fails on {bad} spectra"));
    c.note(format!(
        "{} fields, {} spectra",
        fields.len(),
        spectra.len()
    ));
    c
}

struct Sweep {
    instances: std::collections::BTreeMap<TableId, usize>,
}

impl Sweep {
    fn check(
        &mut self,
        c: &mut Criterion,
        id: TableId,
        params: &TheoryParams,
        computed: &[(i64, i64)],
        label: &str,
    ) {
        match theory::predict(id, params) {
            Ok(pred) => {
                c.require(
                    pred.total() == expected_total(id, params),
                    format!("{id} total at {label}"),
                );
                let d = theory::diff(&pred, computed);
                c.require(
                    d.matches,
                    format!("{id} at {label}: first mismatch {:?}", d.first_mismatch),
                );
                *self.instances.entry(id).or_insert(0) += 1;
            }
            Err(e) => c.require(false, format!("{id} at {label}: {e}")),
        }
    }
}

fn binary_walsh_table(s: &WalshSpectrum, betas: impl IntoIterator<Item = u32>) -> Vec<(i64, i64)> {
    let mut m = std::collections::BTreeMap::new();
    for b in betas {
        *m.entry(s.binary(b)).or_insert(0i64) += 1;
    }
    m.into_iter().collect()
}

fn criterion_8() -> Criterion {
    let mut c = Criterion::new(
        8,
        "predicted tables sum correctly and match every search-certified small instance",
    );
    let mut sweep = Sweep {
        instances: Default::default(),
    };
    let t = Instant::now();

    for (field, m, wt, budget) in [
        ("gf2_14", 7u32, 4u32, 300u64),
        ("gf2_14", 7, 3, 300),
        ("gf2_12", 6, 3, 300),
    ] {
        let ctx = FieldSpec::parse(field).unwrap().build().unwrap();
        let task = SearchTask {
            ctx: ctx.clone(),
            family: Family::TripleLambda { target_wt: wt },
            budget,
            seed: 0,
        };
        let out = search::run(&task).unwrap();
        c.require(out.failed_recheck == 0, "triple certificates re-check");
        for cert in &out.certificates {
            let Certificate::Triple { t, .. } = cert else {
                unreachable!()
            };
            let f = FnDescriptor::parse(&cert.descriptor())
                .unwrap()
                .build(&ctx)
                .unwrap();
            let spec = CodeSpec::new(f, CodeKind::Punctured, BetaDomain::FullField).unwrap();
            let a = analyze(&spec).unwrap();
            let params = TheoryParams::binary(2 * m).with_t(somc::pfunc::TVector(*t));
            let id = if wt == 4 {
                TableId::TripleAllOnes
            } else {
                TableId::TripleTailTwo
            };
            let label = format!("m={m} {}", cert.descriptor());
            sweep.check(
                &mut c,
                id,
                &params,
                &as_signed(&a.distribution.entries),
                &label,
            );
            let walsh = binary_walsh_table(&a.spectrum, 0..ctx.q());
            sweep.check(&mut c, TableId::TripleWalsh, &params, &walsh, &label);
        }
    }

    c.note(format!("triple sweep {:.2?}", t.elapsed()));
    let t = Instant::now();
    let ctx = FieldSpec::parse("gf2_12").unwrap().build().unwrap();
    let sub: Vec<u32> = (0..63).map(|j| ctx.gpow(65 * j)).collect();
    // Each admissible λ-pair certifies over a thousand w-pairs; the first two
    // of every pair are analysed in full.
    let (mut singly, mut certified) = (0, 0);
    for (i, &l1) in sub.iter().enumerate() {
        for &l2 in &sub[i + 1..] {
            let task = SearchTask {
                ctx: ctx.clone(),
                family: Family::WPair { l1, l2 },
                budget: 1 << 20,
                seed: 0,
            };
            let Ok(out) = search::run(&task) else {
                continue;
            };
            c.require(out.failed_recheck == 0, "w-pair certificates re-check");
            certified += out.certificates.len();
            for cert in out.certificates.iter().take(2) {
                let Certificate::WPair { w1, w2, .. } = cert else {
                    unreachable!()
                };
                let w = [w1, w2].map(|s| ElemRef::parse(s).unwrap().resolve(&ctx).unwrap());
                let dom = BetaDomain::Subspace(ctx.trace_kernel(&w).unwrap());
                let f = FnDescriptor::parse(&cert.descriptor())
                    .unwrap()
                    .build(&ctx)
                    .unwrap();
                let spec = CodeSpec::new(f, CodeKind::Punctured, dom).unwrap();
                let a = analyze(&spec).unwrap();
                let params = TheoryParams::binary(12);
                let label = cert.descriptor();
                sweep.check(
                    &mut c,
                    TableId::SinglyEven,
                    &params,
                    &as_signed(&a.distribution.entries),
                    &label,
                );
                let walsh = binary_walsh_table(&a.spectrum, spec.domain_elements());
                sweep.check(&mut c, TableId::SinglyEvenWalsh, &params, &walsh, &label);
                let r = &a.report;
                c.require(
                    r.minimal.method == MinMethod::Exact && r.minimal.verdict == Some(true),
                    format!("{label} minimal (exact)"),
                );
                c.require(
                    r.self_orthogonal.direct && r.self_orthogonal.criterion == Some(true),
                    format!("{label} SO"),
                );
                singly += 1;
            }
        }
    }
    c.note(format!(
        "{singly} of {certified} certified singly-even instances over GF(2^12) analysed"
    ));
    c.require(singly > 0, "some singly-even instance");
    c.note(format!("singly-even sweep {:.2?}", t.elapsed()));
    let t = Instant::now();

    for (p, n) in [
        (3u32, 1u32),
        (3, 2),
        (3, 3),
        (3, 4),
        (3, 5),
        (5, 1),
        (5, 2),
        (5, 3),
        (7, 1),
        (7, 2),
        (7, 3),
        (11, 1),
        (11, 2),
        (13, 1),
        (13, 2),
    ] {
        let ctx = default_field(p, n).unwrap();
        let id = if (p as u64).pow(n) % 4 == 1 {
            TableId::FtOneModFour
        } else {
            TableId::FtThreeModFour
        };
        for t in [1, p as i64 - 1] {
            let spec = CodeSpec::new(
                f_t_function(&ctx, t).unwrap(),
                CodeKind::Full,
                BetaDomain::FullField,
            )
            .unwrap();
            let a = analyze(&spec).unwrap();
            sweep.check(
                &mut c,
                id,
                &TheoryParams::odd(p, n),
                &as_signed(&a.distribution.entries),
                &format!("p={p} n={n} t={t}"),
            );
        }
    }

    for (field, s, budget) in [
        ("gf3_5", 1u32, 400u64),
        ("gf3_5", 2, 400),
        ("p=5 n=4", 1, 200),
        ("p=3 n=6", 1, 80),
        ("p=3 n=6", 2, 80),
        ("p=3 n=6", 3, 80),
        ("p=7 n=4", 1, 20),
    ] {
        let ctx = FieldSpec::parse(field).unwrap().build().unwrap();
        let (p, n) = (ctx.p(), ctx.n());
        let family = Family::PlateauedQuadratic {
            s_target: s,
            require_unbalanced: true,
        };
        let out = search::run(&SearchTask {
            ctx: ctx.clone(),
            family,
            budget,
            seed: 0,
        })
        .unwrap();
        c.require(out.failed_recheck == 0, "quadratic certificates re-check");
        c.require(
            !out.certificates.is_empty(),
            format!("quadratic search over {field} with s={s} found nothing"),
        );
        for cert in &out.certificates {
            let Certificate::Quadratic { epsilon, .. } = cert else {
                unreachable!()
            };
            let base = FnDescriptor::parse(&cert.descriptor())
                .unwrap()
                .build(&ctx)
                .unwrap();
            let id = if (n + s) % 2 == 0 {
                TableId::FaEven
            } else {
                TableId::FaOdd
            };
            for a in 1..p as i64 {
                let f = f_a_from_plateaued(&base, a).unwrap();
                let spec = CodeSpec::new(f, CodeKind::Punctured, BetaDomain::FullField).unwrap();
                let dist = analyze(&spec).unwrap().distribution;
                let params = TheoryParams::plateaued(p, n, s, *epsilon, a);
                sweep.check(
                    &mut c,
                    id,
                    &params,
                    &as_signed(&dist.entries),
                    &format!("{field} a={a} {}", cert.descriptor()),
                );
            }
        }
    }

    c.note(format!("f_t and quadratic sweeps {:.2?}", t.elapsed()));
    for id in TableId::ALL {
        let k = sweep.instances.get(&id).copied().unwrap_or(0);
        c.require(k > 0, format!("{id}: no instance checked"));
    }
    c.note(
        sweep
            .instances
            .iter()
            .map(|(id, k)| format!("{id} {k}"))
            .collect::<Vec<_>>()
            .join(", "),
    );
    c
}

#[test]
fn acceptance() {
    let runs: [fn() -> Criterion; 8] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
    ];
    let results: Vec<Criterion> = runs
        .iter()
        .map(|f| {
            let t = Instant::now();
            let mut c = f();
            c.note(format!("checked in {:.2?}", t.elapsed()));
            eprintln!("criterion {} done in {:.2?}", c.id, t.elapsed());
            c
        })
        .collect();
    let allowed: BTreeSet<(u32, &str)> = UNATTAINABLE.iter().copied().collect();
    let mut unexpected = Vec::new();
    for c in &results {
        let status = if c.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("criterion {}: {status} - {}", c.id, c.title);
        for n in &c.notes {
            println!("    {n}");
        }
        for f in &c.failures {
            let known = allowed.contains(&(c.id, f.as_str()));
            println!(
                "    failed: {f}{}",
                if known {
                    " (unattainable, see decisions log)"
                } else {
                    ""
                }
            );
            if !known {
                unexpected.push(format!("criterion {}: {f}", c.id));
            }
        }
    }
    let passed = results.iter().filter(|c| c.failures.is_empty()).count();
    println!("{passed}/{} criteria pass", results.len());
    assert!(
        unexpected.is_empty(),
        "unexpected failures: {unexpected:#?}"
    );
}
