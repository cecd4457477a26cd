use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nilcons_core::liealg::{build_model, Preset};
use nilcons_core::nilcons::{NilConsReport, TransitivityVerdict, Verdict};
use nilcons_core::parabolic::{parabolic_decomposition, DecompositionSummary};
use nilcons_core::subspec::resolve_subspace;
use nilcons_core::verify::{run_suite, VerifyOptions};
use nilcons_core::Error;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "nilcons", version, about = "Parabolic decompositions and the nilpotent construction on rank-two symmetric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the parabolic decomposition attached to a simple root.
    Decompose(RunConfig),
    /// Run the nilpotent construction checks on a subspace of the first gradation level.
    Nilcheck(RunConfig),
    /// Run the full acceptance suite.
    #[command(name = "verify-paper", alias = "verify")]
    Verify(RunConfig),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct RunConfig {
    /// g2c-g2, sl3c-su3 or so-2-np2
    #[arg(long)]
    preset: Option<String>,
    /// n for so-2-np2
    #[arg(long)]
    n: Option<usize>,
    /// Simple root index (1-based)
    #[arg(long)]
    j: Option<usize>,
    /// Subspace: full | root:<label> | kahler:<cos²> | rows:[[..],..] | tensor:e1f1,..
    #[arg(long = "v")]
    subspace: Option<String>,
    #[arg(long, default_value_t = 32)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: &'a T,
}

#[derive(Serialize)]
struct NilcheckOut<'a> {
    outcome: Verdict,
    #[serde(flatten)]
    report: &'a NilConsReport,
}

fn json<T: Serialize>(body: &T) -> String {
    serde_json::to_string_pretty(&Envelope { schema_version: SCHEMA_VERSION, body }).expect("serializable")
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn code_for(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) | Error::NotSubalgebra(_) => 2,
        _ => 1,
    }
}

fn preset_of(cfg: &RunConfig) -> Result<Preset, ExitCode> {
    let tag = cfg.preset.as_deref().ok_or_else(|| usage("--preset is required"))?;
    Preset::parse(tag, cfg.n).map_err(usage)
}

fn decomposition(cfg: &RunConfig) -> Result<nilcons_core::parabolic::ParabolicDecomposition, ExitCode> {
    let preset = preset_of(cfg)?;
    let j = cfg.j.ok_or_else(|| usage("--j is required"))?;
    if !(1..=2).contains(&j) {
        return Err(usage(format!("j must be 1 or 2, got {j}")));
    }
    let model = build_model(preset).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(code_for(&e))
    })?;
    parabolic_decomposition(Arc::new(model), j).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(code_for(&e))
    })
}

fn summary_text(s: &DecompositionSummary) -> String {
    let mut out = format!("preset {}", s.preset);
    if let Some(n) = s.n {
        out.push_str(&format!(" (n = {n})"));
    }
    out.push_str(&format!(", j = {}\n", s.j));
    let rows = [
        ("g", s.dim_g),
        ("q_j", s.dim_q),
        ("l_j", s.dim_l),
        ("n_j", s.dim_n),
        ("m_j", s.dim_m),
        ("a_j", s.dim_a_j),
        ("a^j", s.dim_a_upper_j),
        ("g_j", s.dim_g_j),
        ("z_j", s.dim_z),
        ("k_j", s.dim_k_j),
        ("b_j", s.dim_b),
    ];
    for (name, d) in rows {
        out.push_str(&format!("  dim {name:<4} {d}\n"));
    }
    let grad: Vec<String> = s.gradation.iter().map(|(nu, d)| format!("{nu}:{d}")).collect();
    out.push_str(&format!("  gradation {}\n", grad.join(" ")));
    out.push_str(&format!("  Sigma_j+ {}\n", s.sigma_j_positive.join(", ")));
    out
}

fn cmd_decompose(cfg: &RunConfig) -> ExitCode {
    let pd = match decomposition(cfg) {
        Ok(pd) => pd,
        Err(code) => return code,
    };
    let s = pd.summary();
    match cfg.format {
        Format::Json => println!("{}", json(&s)),
        Format::Text => print!("{}", summary_text(&s)),
    }
    ExitCode::SUCCESS
}

fn verdict_text(v: &TransitivityVerdict) -> String {
    format!("{:?} ({})", v.value, serde_json::to_string(&v.evidence).expect("serializable"))
}

fn report_text(r: &NilConsReport, outcome: Verdict) -> String {
    let mut out = format!("preset {}, j = {}, dim v = {}\n", r.preset, r.j, r.v.dim);
    out.push_str(&format!("  dim n_(j,v) {}\n", r.n_jv.dim));
    out.push_str(&format!("  dim N_m(n_(j,v)) {}\n", r.normalizer_mj.dim));
    out.push_str(&format!("  dim N_k(v) {}\n", r.normalizer_kj.dim));
    out.push_str(&format!("  theta duality {}\n", r.theta_duality));
    out.push_str(&format!("  condition (i) {}\n", verdict_text(&r.condition_i)));
    out.push_str(&format!("  condition (ii) {}\n", verdict_text(&r.condition_ii)));
    for (l, b) in &r.vl_membership {
        out.push_str(&format!("  in V_{l} {b}, restricted condition (i) {:?}\n", r.vl_restricted_condition_i[l].value));
    }
    out.push_str(&format!("  singular orbit dim {}, codim {}\n", r.singular_orbit_dim, r.singular_orbit_codim));
    if let Some(h) = &r.hint {
        out.push_str(&format!("  hint: {h}\n"));
    }
    out.push_str(&format!("outcome {outcome:?}\n"));
    out
}

fn cmd_nilcheck(cfg: &RunConfig) -> ExitCode {
    let pd = match decomposition(cfg) {
        Ok(pd) => pd,
        Err(code) => return code,
    };
    let Some(text) = cfg.subspace.as_deref() else {
        return usage("--v is required");
    };
    let report = match resolve_subspace(&pd, text).and_then(|v| v.check(&pd, cfg.samples, cfg.seed)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(code_for(&e));
        }
    };
    let outcome = report.outcome();
    match cfg.format {
        Format::Json => println!("{}", json(&NilcheckOut { outcome, report: &report })),
        Format::Text => print!("{}", report_text(&report, outcome)),
    }
    ExitCode::from(match outcome {
        Verdict::Transitive => 0,
        Verdict::NotTransitive => 3,
        Verdict::Unknown => 4,
    })
}

fn cmd_verify(cfg: &RunConfig) -> ExitCode {
    let mut opts = match cfg.preset {
        Some(_) => match preset_of(cfg) {
            Ok(p) => VerifyOptions::only(p),
            Err(code) => return code,
        },
        None => VerifyOptions::default(),
    };
    opts.samples = cfg.samples;
    opts.seed = cfg.seed;
    let report = run_suite(opts);
    match cfg.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    if report.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("NILCONS_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    configure_threads();
    let run = std::panic::catch_unwind(|| match &cli.command {
        Command::Decompose(cfg) => cmd_decompose(cfg),
        Command::Nilcheck(cfg) => cmd_nilcheck(cfg),
        Command::Verify(cfg) => cmd_verify(cfg),
    });
    run.unwrap_or_else(|_| ExitCode::from(1))
}
