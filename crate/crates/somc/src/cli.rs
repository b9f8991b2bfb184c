//! Command-line front end: presets, ad-hoc analysis and search.

use std::ffi::OsString;
use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::codes::{
    analyze, AbVerdict, Analysis, BetaDomain, CodeKind, CodeSpec, MinMethod, Parity,
    PlateauedSummary,
};
use crate::error::{Error, Result};
use crate::galois::{default_field, FieldCtx, FieldSpec, FIELD_PRESETS};
use crate::pfunc::{compute_t_vector, ElemRef, FnDescriptor};
use crate::search::{self, Family, SearchTask};
use crate::theory::{self, as_signed, DiffReport, TableId, TheoryParams};
use crate::walsh::{classify, walsh_transform, WalshSpectrum};

pub const EXIT_MATCH: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "somc",
    version,
    about = "Self-orthogonal minimal codes from p-ary functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a named preset and compare with its expected report.
    Example {
        name: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Build a code from a field and function descriptor and report on it.
    Analyze(AnalyzeArgs),
    /// Search for admissible parameters; prints one JSON line per certified hit.
    Search {
        #[command(subcommand)]
        task: SearchCmd,
    },
    /// List the preset names.
    Presets,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Field preset (gf2_14, ...) or `p=.. n=.. mod=c0,c1,..`.
    #[arg(long)]
    field: String,
    /// Function descriptor, e.g. `tripleprod:l1=g^129,l2=g^258,l3=g^516`.
    #[arg(long = "fn")]
    function: String,
    #[arg(long, value_enum, default_value_t = KindArg::Punctured)]
    kind: KindArg,
    /// `full` or `V:w1,w2,...` for the common trace kernel of the w's.
    #[arg(long, default_value = "full")]
    beta_domain: String,
    /// JSON report (the default output).
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// `weight,multiplicity` table instead of the JSON report.
    #[arg(long)]
    csv: bool,
    /// Append the Walsh count table as CSV.
    #[arg(long)]
    emit_spectrum: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// Analysis is deterministic; the seed is accepted for a uniform flag set.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum SearchCmd {
    /// λ-triples in GF(2^m) with prescribed t-vector weight.
    Triple {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 4)]
        wt: u32,
        #[command(flatten)]
        common: SearchArgs,
    },
    /// (w1, w2) pairs for a λ-pair of the singly-even family.
    Wpair {
        #[arg(long)]
        l1: String,
        #[arg(long)]
        l2: String,
        #[command(flatten)]
        common: SearchArgs,
    },
    /// Weakly regular plateaued quadratic forms Tr(Σ c_i x^{p^i+1}).
    Quad {
        #[arg(long)]
        s: u32,
        /// Also accept balanced forms.
        #[arg(long)]
        allow_balanced: bool,
        #[command(flatten)]
        common: SearchArgs,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Defaults to the preset of matching size, else the first primitive polynomial.
    #[arg(long)]
    field: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Punctured,
    Full,
    Augmented,
}

impl From<KindArg> for CodeKind {
    fn from(k: KindArg) -> CodeKind {
        match k {
            KindArg::Punctured => CodeKind::Punctured,
            KindArg::Full => CodeKind::Full,
            KindArg::Augmented => CodeKind::Augmented,
        }
    }
}

/// A named example with its stated expectations.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub field: &'static str,
    pub function: &'static str,
    pub kind: CodeKind,
    pub beta_domain: &'static str,
    pub params: [u64; 3],
    pub weights: &'static [(u64, u64)],
    /// Parameters as printed in the source text when they conflict with `params`.
    pub stated_params: Option<[u64; 3]>,
    pub errata: Option<&'static str>,
    pub self_orthogonal: bool,
    pub minimal: Option<bool>,
    pub ab_violated: Option<bool>,
    pub parity: Option<Parity>,
    pub griesmer_met: Option<bool>,
    /// (s, Walsh support size) of the plateaued base function.
    pub base_plateaued: Option<(u32, usize)>,
    pub theory: &'static [TableId],
}

const BASE: Preset = Preset {
    name: "",
    field: "",
    function: "",
    kind: CodeKind::Punctured,
    beta_domain: "full",
    params: [0; 3],
    weights: &[],
    stated_params: None,
    errata: None,
    self_orthogonal: true,
    minimal: None,
    ab_violated: None,
    parity: None,
    griesmer_met: None,
    base_plateaued: None,
    theory: &[],
};

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "ex-3.1a",
        field: "gf2_14",
        function: "tripleprod:l1=g^129,l2=g^258,l3=g^516",
        params: [16383, 15, 2064],
        weights: &[
            (0, 1),
            (2064, 1),
            (8080, 129),
            (8112, 903),
            (8144, 2709),
            (8176, 4515),
            (8192, 16383),
            (8208, 4386),
            (8240, 2709),
            (8272, 903),
            (8304, 129),
        ],
        minimal: Some(true),
        ab_violated: Some(true),
        theory: &[TableId::TripleAllOnes, TableId::TripleWalsh],
        ..BASE
    },
    Preset {
        name: "ex-3.1b",
        field: "gf2_12",
        function: "tripleprod:l1=g^65,l2=g^1365,l3=1",
        params: [4095, 13, 520],
        weights: &[
            (0, 1),
            (520, 1),
            (1992, 65),
            (2008, 260),
            (2024, 585),
            (2040, 1040),
            (2048, 4095),
            (2056, 1170),
            (2072, 780),
            (2088, 195),
        ],
        minimal: Some(true),
        ab_violated: Some(true),
        theory: &[TableId::TripleTailTwo, TableId::TripleWalsh],
        ..BASE
    },
    Preset {
        name: "ex-3.2",
        field: "gf2_16",
        function: "singlyeven:l1=g^257,l2=g^514,w1=g^3084,w2=g^42148",
        beta_domain: "V:g^3084,g^42148",
        params: [65535, 15, 16450],
        weights: &[
            (0, 1),
            (16450, 1),
            (32578, 2080),
            (32706, 6240),
            (32768, 16383),
            (32834, 5983),
            (32962, 2080),
        ],
        minimal: Some(true),
        ab_violated: Some(true),
        parity: Some(Parity::SinglyEven),
        theory: &[TableId::SinglyEven, TableId::SinglyEvenWalsh],
        ..BASE
    },
    Preset {
        name: "ex-4.1a",
        field: "gf3_4",
        function: "ftee:t=1",
        kind: CodeKind::Full,
        params: [81, 5, 54],
        weights: &[(0, 1), (54, 240), (81, 2)],
        stated_params: Some([243, 6, 54]),
        errata: Some(
            "stated parameters [243, 6, 54] contradict the stated enumerator 1 + 240z^54 + 2z^81, \
             which has 243 codewords (k = 5) of length 81; matched against [81, 5, 54]",
        ),
        griesmer_met: Some(true),
        theory: &[TableId::FtOneModFour],
        ..BASE
    },
    Preset {
        name: "ex-4.1b",
        field: "gf3_5",
        function: "ftee:t=1",
        kind: CodeKind::Full,
        params: [243, 6, 153],
        weights: &[(0, 1), (153, 242), (162, 242), (171, 242), (243, 2)],
        theory: &[TableId::FtThreeModFour],
        ..BASE
    },
    Preset {
        name: "ex-4.2a",
        field: "gf3_5",
        function: "fa:a=1;quad:1@0,g^23@1,g^4@2",
        params: [242, 6, 72],
        weights: &[(0, 1), (72, 2), (153, 112), (162, 566), (180, 48)],
        minimal: Some(true),
        ab_violated: Some(true),
        base_plateaued: Some((1, 81)),
        theory: &[TableId::FaEven],
        ..BASE
    },
    Preset {
        name: "ex-4.2b",
        field: "gf3_5",
        function: "fa:a=1;quad:g@0,1@1,2@2",
        params: [242, 6, 54],
        weights: &[(0, 1), (54, 2), (135, 16), (162, 698), (189, 12)],
        minimal: Some(true),
        ab_violated: Some(true),
        base_plateaued: Some((2, 27)),
        theory: &[TableId::FaOdd],
        ..BASE
    },
];

pub fn preset(name: &str) -> Result<&'static Preset> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset(name.into()))
}

pub fn parse_field(s: &str) -> Result<Arc<FieldCtx>> {
    Ok(FieldSpec::parse(s)?.build()?)
}

pub fn parse_beta_domain(ctx: &FieldCtx, s: &str) -> Result<BetaDomain> {
    let s = s.trim();
    if s == "full" {
        return Ok(BetaDomain::FullField);
    }
    let list = s.strip_prefix("V:").ok_or_else(|| {
        Error::Parse(format!(
            "beta domain must be `full` or `V:w1,w2,...`, got `{s}`"
        ))
    })?;
    let ws = list
        .split(',')
        .map(|w| ElemRef::parse(w)?.resolve(ctx))
        .collect::<Result<Vec<u32>>>()?;
    Ok(BetaDomain::Subspace(ctx.trace_kernel(&ws)?))
}

pub fn build_spec(
    field: &str,
    function: &str,
    kind: CodeKind,
    beta_domain: &str,
) -> Result<CodeSpec> {
    let ctx = parse_field(field)?;
    let f = FnDescriptor::parse(function)?.build(&ctx)?;
    let domain = parse_beta_domain(&ctx, beta_domain)?;
    CodeSpec::new(f, kind, domain)
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

fn check(
    name: &str,
    expected: impl std::fmt::Debug,
    computed: impl std::fmt::Debug,
    ok: bool,
) -> Check {
    Check {
        name: name.into(),
        expected: format!("{expected:?}"),
        computed: format!("{computed:?}"),
        ok,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoryCheck {
    pub provenance: TableId,
    pub params: Option<TheoryParams>,
    pub diff: Option<DiffReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub preset: &'static str,
    pub field: &'static str,
    pub function: &'static str,
    pub kind: CodeKind,
    pub beta_domain: &'static str,
    pub enumerator: String,
    pub report: crate::codes::AnalysisReport,
    pub base_plateaued: Option<PlateauedSummary>,
    pub theory: Vec<TheoryCheck>,
    pub checks: Vec<Check>,
    pub errata: Option<&'static str>,
    pub matches: bool,
}

fn summary(spectrum: &WalshSpectrum) -> PlateauedSummary {
    let pr = classify(spectrum);
    PlateauedSummary {
        s: pr.s,
        support_size: pr.support.len(),
        epsilon: pr.epsilon,
        weakly_regular: pr.weakly_regular,
        balanced: pr.balanced,
    }
}

/// Walsh value multiset of a binary spectrum over `betas`.
fn binary_walsh_table(
    spectrum: &WalshSpectrum,
    betas: impl IntoIterator<Item = u32>,
) -> Vec<(i64, i64)> {
    let mut m = std::collections::BTreeMap::new();
    for b in betas {
        *m.entry(spectrum.binary(b)).or_insert(0i64) += 1;
    }
    m.into_iter().collect()
}

fn theory_params(preset: &Preset, spec: &CodeSpec) -> Result<TheoryParams> {
    let ctx = spec.ctx();
    let (p, n) = (ctx.p(), ctx.n());
    match FnDescriptor::parse(preset.function)? {
        FnDescriptor::TripleProd(l) => {
            let l = l
                .iter()
                .map(|e| e.resolve(ctx))
                .collect::<Result<Vec<_>>>()?;
            Ok(TheoryParams::binary(n).with_t(compute_t_vector(ctx, l[0], l[1], l[2])?))
        }
        FnDescriptor::SinglyEven { .. } => Ok(TheoryParams::binary(n)),
        FnDescriptor::FTee(_) => Ok(TheoryParams::odd(p, n)),
        FnDescriptor::Fa { a, base } => {
            let pr = classify(&walsh_transform(&base.build(ctx)?));
            let s = pr.s.ok_or(Error::RejectNotWeaklyRegular)?;
            let eps = pr.epsilon.ok_or(Error::RejectNotWeaklyRegular)?;
            Ok(TheoryParams::plateaued(p, n, s, eps, a))
        }
        _ => Err(Error::RejectOutOfDomain(
            "no closed-form table for this family".into(),
        )),
    }
}

fn theory_checks(preset: &Preset, spec: &CodeSpec, analysis: &Analysis) -> Vec<TheoryCheck> {
    preset
        .theory
        .iter()
        .map(|&id| {
            let params = match theory_params(preset, spec) {
                Ok(p) => p,
                Err(e) => {
                    return TheoryCheck {
                        provenance: id,
                        params: None,
                        diff: None,
                        error: Some(e.to_string()),
                    }
                }
            };
            let computed = match id {
                TableId::TripleWalsh => binary_walsh_table(&analysis.spectrum, 0..spec.ctx().q()),
                TableId::SinglyEvenWalsh => {
                    binary_walsh_table(&analysis.spectrum, spec.domain_elements())
                }
                _ => as_signed(&analysis.distribution.entries),
            };
            match theory::predict(id, &params) {
                Ok(pred) => TheoryCheck {
                    provenance: id,
                    params: Some(params),
                    diff: Some(theory::diff(&pred, &computed)),
                    error: None,
                },
                Err(e) => TheoryCheck {
                    provenance: id,
                    params: Some(params),
                    diff: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

/// Runs a preset and compares every stated expectation.
pub fn run_example(preset: &'static Preset) -> Result<ExampleReport> {
    let spec = build_spec(
        preset.field,
        preset.function,
        preset.kind,
        preset.beta_domain,
    )?;
    let analysis = analyze(&spec)?;
    let r = &analysis.report;
    let mut checks = vec![
        check("params", preset.params, r.params, r.params == preset.params),
        check(
            "weights",
            preset.weights,
            &r.weights,
            r.weights == preset.weights,
        ),
        check(
            "self-orthogonal (direct)",
            preset.self_orthogonal,
            r.self_orthogonal.direct,
            r.self_orthogonal.direct == preset.self_orthogonal,
        ),
        check(
            &format!("self-orthogonal ({})", r.self_orthogonal.criterion_name),
            preset.self_orthogonal,
            r.self_orthogonal.criterion,
            r.self_orthogonal.criterion == Some(preset.self_orthogonal),
        ),
    ];
    if let Some(m) = preset.minimal {
        let name = format!("minimal ({})", method_name(r.minimal.method));
        checks.push(check(
            &name,
            m,
            r.minimal.verdict,
            r.minimal.verdict == Some(m),
        ));
    }
    if let Some(v) = preset.ab_violated {
        checks.push(check(
            "AB condition violated",
            v,
            r.ab,
            (r.ab == AbVerdict::Violates) == v,
        ));
    }
    if let Some(par) = preset.parity {
        checks.push(check("parity", par, r.parity, r.parity == par));
    }
    if let Some(g) = preset.griesmer_met {
        checks.push(check(
            "Griesmer bound met",
            g,
            r.griesmer,
            r.griesmer.met == g,
        ));
    }
    let mut base_plateaued = None;
    if let Some((s, support)) = preset.base_plateaued {
        if let FnDescriptor::Fa { base, .. } = FnDescriptor::parse(preset.function)? {
            let b = summary(&walsh_transform(&base.build(spec.ctx())?));
            let ok = b.s == Some(s) && b.support_size == support && b.weakly_regular && !b.balanced;
            checks.push(check(
                "base plateaued (s, support)",
                (s, support),
                (b.s, b.support_size),
                ok,
            ));
            base_plateaued = Some(b);
        }
    }
    let theory = theory_checks(preset, &spec, &analysis);
    for t in &theory {
        let ok = t.diff.as_ref().is_some_and(|d| d.matches);
        let computed = match (&t.diff, &t.error) {
            (Some(d), _) => match d.first_mismatch {
                None => "match".into(),
                Some((w, pred, got)) => format!("value {w}: predicted {pred}, computed {got}"),
            },
            (None, Some(e)) => e.clone(),
            _ => String::new(),
        };
        checks.push(Check {
            name: format!("theory {}", t.provenance),
            expected: "match".into(),
            computed,
            ok,
        });
    }
    let matches = checks.iter().all(|c| c.ok);
    Ok(ExampleReport {
        preset: preset.name,
        field: preset.field,
        function: preset.function,
        kind: preset.kind,
        beta_domain: preset.beta_domain,
        enumerator: analysis.distribution.enumerator(),
        report: analysis.report.clone(),
        base_plateaued,
        theory,
        checks,
        errata: preset.errata,
        matches,
    })
}

fn method_name(m: MinMethod) -> &'static str {
    match m {
        MinMethod::Exact => "exact pair scan",
        MinMethod::Walsh => "walsh criterion",
        MinMethod::Ab => "AB condition",
    }
}

fn render_example(rep: &ExampleReport, preset: &Preset) -> String {
    use std::fmt::Write as _;
    let r = &rep.report;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{}: {} over {}, {:?}",
        rep.preset, rep.function, rep.field, rep.kind
    );
    let _ = writeln!(
        s,
        "parameters [{}, {}, {}]",
        r.params[0], r.params[1], r.params[2]
    );
    let _ = writeln!(s, "enumerator {}", rep.enumerator);
    let _ = writeln!(
        s,
        "self-orthogonal: direct {}, {} {:?}",
        r.self_orthogonal.direct, r.self_orthogonal.criterion_name, r.self_orthogonal.criterion
    );
    let _ = writeln!(
        s,
        "minimal: {:?} via {}",
        r.minimal.verdict,
        method_name(r.minimal.method)
    );
    let _ = writeln!(
        s,
        "AB: {:?}, divisibility {} ({:?})",
        r.ab, r.divisibility, r.parity
    );
    let _ = writeln!(
        s,
        "Griesmer sum {} (met {}), Singleton defect {}",
        r.griesmer.sum, r.griesmer.met, r.singleton_defect
    );
    if let Some(b) = &rep.base_plateaued {
        let _ = writeln!(
            s,
            "base: s {:?}, support {}, epsilon {:?}",
            b.s, b.support_size, b.epsilon
        );
    }
    for c in &rep.checks {
        let tag = if c.ok { "ok" } else { "MISMATCH" };
        let _ = writeln!(
            s,
            "  [{tag}] {}: expected {}, computed {}",
            c.name, c.expected, c.computed
        );
    }
    if let (Some(note), Some(stated)) = (rep.errata, preset.stated_params) {
        let _ = writeln!(s, "errata: text states {stated:?}; {note}");
    }
    let _ = writeln!(
        s,
        "result: {}",
        if rep.matches { "match" } else { "mismatch" }
    );
    s
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(n) if n > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Parse(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        _ => Ok(f()),
    }
}

fn field_for(field: Option<&str>, p: u32, n: u32) -> Result<Arc<FieldCtx>> {
    if let Some(f) = field {
        return parse_field(f);
    }
    match FIELD_PRESETS.iter().find(|e| e.1 == p && e.2 == n) {
        Some(e) => parse_field(e.0),
        None => Ok(default_field(p, n)?),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize")
}

fn cmd_example(
    name: &str,
    as_json: bool,
    csv: bool,
    threads: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32> {
    let preset = preset(name)?;
    let rep = with_threads(threads, || run_example(preset))??;
    let text = if as_json {
        json(&rep) + "\n"
    } else if csv {
        rep.report.distribution(0).to_csv()
    } else {
        render_example(&rep, preset)
    };
    let _ = out.write_all(text.as_bytes());
    Ok(if rep.matches {
        EXIT_MATCH
    } else {
        EXIT_MISMATCH
    })
}

fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = build_spec(&a.field, &a.function, a.kind.into(), &a.beta_domain)?;
    let analysis = with_threads(a.threads, || analyze(&spec))??;
    let mut text = if a.csv {
        analysis.distribution.to_csv()
    } else {
        json(&analysis.report) + "\n"
    };
    if a.emit_spectrum {
        text.push_str(&analysis.spectrum.to_csv());
    }
    let _ = out.write_all(text.as_bytes());
    Ok(EXIT_MATCH)
}

fn cmd_search(task: &SearchCmd, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (task, threads) = match task {
        SearchCmd::Triple { m, wt, common } => {
            let ctx = field_for(common.field.as_deref(), 2, 2 * m)?;
            (
                SearchTask {
                    ctx,
                    family: Family::TripleLambda { target_wt: *wt },
                    budget: common.budget,
                    seed: common.seed,
                },
                common.threads,
            )
        }
        SearchCmd::Wpair { l1, l2, common } => {
            let ctx = field_for(common.field.as_deref().or(Some("gf2_16")), 2, 16)?;
            let l1 = ElemRef::parse(l1)?.resolve(&ctx)?;
            let l2 = ElemRef::parse(l2)?.resolve(&ctx)?;
            (
                SearchTask {
                    ctx,
                    family: Family::WPair { l1, l2 },
                    budget: common.budget,
                    seed: common.seed,
                },
                common.threads,
            )
        }
        SearchCmd::Quad {
            s,
            allow_balanced,
            common,
        } => {
            let ctx = field_for(common.field.as_deref().or(Some("gf3_5")), 3, 5)?;
            let family = Family::PlateauedQuadratic {
                s_target: *s,
                require_unbalanced: !allow_balanced,
            };
            (
                SearchTask {
                    ctx,
                    family,
                    budget: common.budget,
                    seed: common.seed,
                },
                common.threads,
            )
        }
    };
    let outcome = with_threads(threads, || search::run(&task))??;
    let mut text = String::new();
    for c in &outcome.certificates {
        text.push_str(&serde_json::to_string(c).expect("certificates serialize"));
        text.push('\n');
    }
    let _ = out.write_all(text.as_bytes());
    let status = if outcome.exhausted_budget() {
        "budget exhausted without a certified hit"
    } else {
        "done"
    };
    let _ = writeln!(
        err,
        "{status}: examined {} of {} candidates from offset {}, {} certified",
        outcome.examined,
        outcome.total_candidates,
        outcome.start,
        outcome.certificates.len()
    );
    Ok(EXIT_MATCH)
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_MATCH
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let res = match &cli.command {
        Command::Example {
            name,
            json,
            csv,
            threads,
        } => cmd_example(name, *json, *csv, *threads, out),
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Search { task } => cmd_search(task, out, err),
        Command::Presets => {
            for p in PRESETS {
                let _ = writeln!(out, "{}\t{}\t{}", p.name, p.field, p.function);
            }
            Ok(EXIT_MATCH)
        }
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
