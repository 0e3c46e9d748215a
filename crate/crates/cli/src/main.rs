use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use csp_sparsify::applications::ksat::sparsify_ksat;
use csp_sparsify::applications::summod::{demonstrate_sum_nonsparsifiable, SumDemo};
use csp_sparsify::applications::twolin::{encode_2lin, TwoLinSystem};
use csp_sparsify::applications::twosat::{encode_2sat, TwoSatFormula};
use csp_sparsify::cut_sparsify::LeverageMode;
use csp_sparsify::double_cover::gamma;
use csp_sparsify::format::{parse_instance_as, print_cover, print_instance, FormatHint, ParsedInstance};
use csp_sparsify::generate::{random_strongly_asymmetric, rng};
use csp_sparsify::oracle::{and_completeness_check, exhaustive_max_error, AndWitness, ENUMERATION_CAP};
use csp_sparsify::pipeline::{sparsify_instance, sparsify_instance_indexed, ClassReport, SparsifyReport};
use csp_sparsify::{Edge, Predicate, SamplerConfig, SparsifiabilityClass, WeightedDigraph};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "csp-sparsify", version, about = "Sparsify two-variable boolean valued CSPs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all 16 predicates with their sparsifiability class.
    Classify,
    /// Sparsify an instance file.
    Sparsify(SparsifyArgs),
    /// Print the bipartite double cover of a graph given as a vcsp file.
    Gamma {
        input: PathBuf,
    },
    /// Compare two instances over every assignment.
    Verify {
        original: PathBuf,
        sparsified: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
        format: FormatArg,
    },
    /// Show that dropping any single edge breaks And and Sum mod k.
    DemoNonsparsifiable(DemoArgs),
    /// Sweep eps and print size and error as CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Auto,
    Vcsp,
    #[value(name = "2sat")]
    TwoSat,
    Ksat,
    #[value(name = "2lin")]
    TwoLin,
}

impl From<FormatArg> for FormatHint {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Auto => FormatHint::Auto,
            FormatArg::Vcsp => FormatHint::Vcsp,
            FormatArg::TwoSat => FormatHint::TwoSat,
            FormatArg::Ksat => FormatHint::KSat,
            FormatArg::TwoLin => FormatHint::TwoLin,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Approx,
}

#[derive(Args)]
struct SamplerArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Oversampling constant in the inclusion probability.
    #[arg(long)]
    oversample: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    leverage: ModeArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    format: FormatArg,
}

impl SamplerArgs {
    fn config(&self, eps: f64) -> Result<SamplerConfig, Failure> {
        let mut cfg = SamplerConfig::new(eps, self.seed).map_err(usage)?;
        if let Some(c) = self.oversample {
            cfg = cfg.with_oversample(c).map_err(usage)?;
        }
        Ok(cfg.with_mode(match self.leverage {
            ModeArg::Exact => LeverageMode::LeverageExact,
            ModeArg::Approx => LeverageMode::LeverageApprox,
        }))
    }
}

#[derive(Args)]
struct SparsifyArgs {
    input: PathBuf,
    #[arg(long)]
    eps: f64,
    /// Check every assignment afterwards (at most 24 variables).
    #[arg(long)]
    verify: bool,
    /// Output file for the sparsified instance; stdout if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Output file for the JSON report; stderr if absent.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    sampler: SamplerArgs,
}

#[derive(Args)]
struct DemoArgs {
    /// Strongly asymmetric graph as a vcsp file; a random one if absent.
    input: Option<PathBuf>,
    /// Edge to drop; every edge if absent.
    #[arg(long)]
    edge: Option<usize>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    a: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    input: PathBuf,
    /// Comma-separated eps values.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.5,0.7,0.9")]
    eps: Vec<f64>,
    /// Number of seeds per eps, starting at --seed.
    #[arg(long, default_value_t = 5)]
    runs: u64,
    #[command(flatten)]
    sampler: SamplerArgs,
}

enum Failure {
    Usage(String),
    Verification(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_instance(path: &Path, format: FormatArg) -> Result<ParsedInstance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_instance_as(&text, format.into()).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn assignment(n: usize, mask: u64) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

fn report_from_classes(cfg: &SamplerConfig, classes: Vec<ClassReport>) -> SparsifyReport {
    SparsifyReport {
        eps: cfg.eps,
        seed: cfg.seed,
        total_in: classes.iter().map(|c| c.in_count).sum(),
        total_out: classes.iter().map(|c| c.out_count).sum(),
        classes,
        verified: None,
    }
}

/// Sparsifies in the instance's own format.
fn sparsify_parsed(inst: &ParsedInstance, cfg: &SamplerConfig) -> Result<(ParsedInstance, SparsifyReport), Failure> {
    match inst {
        ParsedInstance::Vcsp(i) => {
            let (out, report) = sparsify_instance(i, cfg).map_err(usage)?;
            Ok((ParsedInstance::Vcsp(out), report))
        }
        ParsedInstance::TwoSat(f) => {
            let positive: Vec<_> = f.clauses().iter().copied().filter(|c| c.weight > 0.0).collect();
            let f = TwoSatFormula::new(f.n(), positive).map_err(usage)?;
            let (kept, classes) = sparsify_instance_indexed(&encode_2sat(&f), cfg).map_err(usage)?;
            let clauses = kept
                .iter()
                .map(|r| {
                    let mut c = f.clauses()[r.index];
                    c.weight = r.weight;
                    c
                })
                .collect();
            let out = TwoSatFormula::new(f.n(), clauses).map_err(usage)?;
            Ok((ParsedInstance::TwoSat(out), report_from_classes(cfg, classes)))
        }
        ParsedInstance::TwoLin(s) => {
            let positive: Vec<_> = s.equations().iter().copied().filter(|e| e.weight > 0.0).collect();
            let s = TwoLinSystem::new(s.n(), positive).map_err(usage)?;
            let (kept, classes) = sparsify_instance_indexed(&encode_2lin(&s), cfg).map_err(usage)?;
            let equations = kept
                .iter()
                .map(|r| {
                    let mut e = s.equations()[r.index];
                    e.weight = r.weight;
                    e
                })
                .collect();
            let out = TwoLinSystem::new(s.n(), equations).map_err(usage)?;
            Ok((ParsedInstance::TwoLin(out), report_from_classes(cfg, classes)))
        }
        ParsedInstance::KSat(f) => {
            let out = sparsify_ksat(f, cfg).map_err(usage)?;
            let classes = vec![ClassReport {
                name: "clause".to_string(),
                class: SparsifiabilityClass::SparsifiableNontrivial,
                in_count: f.clauses().len(),
                out_count: out.clauses().len(),
            }];
            Ok((ParsedInstance::KSat(out), report_from_classes(cfg, classes)))
        }
    }
}

fn exhaustive(a: &ParsedInstance, b: &ParsedInstance) -> Result<csp_sparsify::oracle::VerificationResult, Failure> {
    if a.n() != b.n() {
        return Err(usage(format!("variable counts differ: {} vs {}", a.n(), b.n())));
    }
    let n = a.n();
    exhaustive_max_error(n, |m| a.value(&assignment(n, m)), |m| b.value(&assignment(n, m))).map_err(usage)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn classify() -> Result<(), Failure> {
    for p in Predicate::all() {
        let t = p.truth_table();
        let bits: String = t.iter().map(|&b| if b { '1' } else { '0' }).collect();
        println!("{:<6} {bits} {}", p.name(), p.classify());
    }
    Ok(())
}

fn sparsify(args: &SparsifyArgs) -> Result<(), Failure> {
    let cfg = args.sampler.config(args.eps)?;
    let inst = read_instance(&args.input, args.sampler.format)?;
    let (out, mut report) = sparsify_parsed(&inst, &cfg)?;
    let mut failed = None;
    if args.verify {
        if inst.n() <= ENUMERATION_CAP {
            let v = exhaustive(&inst, &out)?;
            if !v.within(args.eps) {
                failed = Some(format!(
                    "max relative error {} exceeds eps {}{}",
                    v.max_rel_error,
                    args.eps,
                    if v.zero_mismatch { " (zero mismatch)" } else { "" }
                ));
            }
            report.verified = Some(v);
        } else {
            eprintln!(
                "warning: {} variables exceeds the enumeration cap of {ENUMERATION_CAP}; not verified",
                inst.n()
            );
        }
    }
    write_or_print(args.output.as_deref(), &print_instance(&out))?;
    let json = to_json(&report);
    match &args.report {
        Some(p) => fs::write(p, json).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => eprint!("{json}"),
    }
    failed.map_or(Ok(()), |m| Err(Failure::Verification(m)))
}

fn graph_of(inst: &ParsedInstance) -> Result<WeightedDigraph, Failure> {
    let ParsedInstance::Vcsp(i) = inst else {
        return Err(usage("expected a vcsp file"));
    };
    let edges = i.constraints().iter().map(|c| Edge::new(c.u, c.v, c.weight));
    WeightedDigraph::new(i.n(), edges).map_err(usage)
}

fn gamma_cmd(input: &Path) -> Result<(), Failure> {
    let g = graph_of(&read_instance(input, FormatArg::Vcsp)?)?;
    print!("{}", print_cover(&gamma(&g)));
    Ok(())
}

fn verify(original: &Path, sparsified: &Path, eps: f64, format: FormatArg) -> Result<(), Failure> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(usage("eps must lie in (0, 1)"));
    }
    let a = read_instance(original, format)?;
    let b = read_instance(sparsified, format)?;
    let v = exhaustive(&a, &b)?;
    print!("{}", to_json(&v));
    if v.within(eps) {
        Ok(())
    } else {
        Err(Failure::Verification(format!("max relative error {} exceeds eps {eps}", v.max_rel_error)))
    }
}

#[derive(Serialize)]
struct DemoRecord {
    edge: usize,
    and: AndWitness,
    sum: SumDemo,
}

fn demo(args: &DemoArgs) -> Result<(), Failure> {
    let g = match &args.input {
        Some(p) => graph_of(&read_instance(p, FormatArg::Vcsp)?)?,
        None => random_strongly_asymmetric(&mut rng(args.seed), 6, 8, 0.5, 5.0),
    };
    let edges: Vec<usize> = match args.edge {
        Some(e) if e >= g.m() => return Err(usage(format!("edge {e} out of range ({} edges)", g.m()))),
        Some(e) => vec![e],
        None => (0..g.m()).collect(),
    };
    let mut records = Vec::new();
    for e in edges {
        let rest = WeightedDigraph::new(
            g.n(),
            g.edges().iter().enumerate().filter(|&(j, _)| j != e).map(|(_, x)| *x),
        )
        .map_err(usage)?;
        let and = and_completeness_check(&g, &rest)
            .map_err(usage)?
            .ok_or_else(|| Failure::Verification(format!("no And witness for edge {e}")))?;
        let sum = demonstrate_sum_nonsparsifiable(&g, e, args.k, args.a).map_err(usage)?;
        records.push(DemoRecord { edge: e, and, sum });
    }
    print!("{}", to_json(&records));
    Ok(())
}

fn bench(args: &BenchArgs) -> Result<(), Failure> {
    let inst = read_instance(&args.input, args.sampler.format)?;
    let check = inst.n() <= ENUMERATION_CAP;
    let mut csv = String::from("eps,seed,in,out,max_rel_error,within\n");
    for &eps in &args.eps {
        for run in 0..args.runs {
            let cfg = args.sampler.config(eps)?.with_seed(args.sampler.seed + run);
            let (out, report) = sparsify_parsed(&inst, &cfg)?;
            let (err, within) = if check {
                let v = exhaustive(&inst, &out)?;
                (v.max_rel_error.to_string(), v.within(eps).to_string())
            } else {
                (String::new(), String::new())
            };
            let _ = writeln!(csv, "{eps},{},{},{},{err},{within}", cfg.seed, report.total_in, report.total_out);
        }
    }
    print!("{csv}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify => classify(),
        Command::Sparsify(a) => sparsify(a),
        Command::Gamma { input } => gamma_cmd(input),
        Command::Verify {
            original,
            sparsified,
            eps,
            format,
        } => verify(original, sparsified, *eps, *format),
        Command::DemoNonsparsifiable(a) => demo(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
