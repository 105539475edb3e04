//! Command-line driver for `hnn-tower`: argument parsing, run configuration
//! and report rendering. Structured reports are deterministic JSON; timing
//! only appears in the text format.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use hnn_tower::construction::{
    classical_centralizer_witnesses, classical_step, BaseMode, ClassicalState, ConstructionConfig, ConstructionState,
    StepRecord,
};
use hnn_tower::field::run_suite;
use hnn_tower::minstruct::{axiom_suite, embedding_check, p_n_matches_oracle, Mode};
use hnn_tower::oracles::{confluence_towers, run_all, strategy_agreement, LemmaParams, Outcome};
use hnn_tower::par::Exec;
use hnn_tower::{ExtensionTower, Word};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExecArg {
    Sequential,
    Parallel,
}

#[derive(Debug, Parser)]
#[command(
    name = "hnnt",
    version,
    about = "Towers of HNN extensions: normal forms, constructions and bounded checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file with default values for the flags below.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Tower file, or an inline description with `;` between lines.
    #[arg(long, global = true)]
    pub tower: Option<String>,
    #[arg(long, global = true)]
    pub stages: Option<usize>,
    #[arg(long, global = true)]
    pub radius: Option<usize>,
    #[arg(long = "power-bound", global = true)]
    pub power_bound: Option<usize>,
    #[arg(long = "order-bound", global = true)]
    pub order_bound: Option<usize>,
    /// Sample cap for ball enumeration, or sample count for random checks.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Execution strategy; defaults to parallel when compiled in.
    #[arg(long, global = true, value_enum)]
    pub exec: Option<ExecArg>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print the normal form of a word.
    Reduce { word: String },
    /// Run the alternating tower construction and check its conditions.
    Build {
        #[arg(long, value_enum, default_value = "free")]
        base: BaseArg,
    },
    /// Run every lemma oracle on the standard towers.
    Lemmas,
    /// Check the field-extension identities on random exact instances.
    Field,
    /// Check the ordered-group axioms and the embedding of the finite model.
    Minstruct,
    /// One classical step and centralizer witnesses for a base element.
    Classical {
        /// Base element whose centralizer is sampled.
        #[arg(long, default_value = "g0")]
        element: String,
        /// Number of witnesses requested.
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
    /// Compare the two pinch strategies on seeded random words.
    Confluence {
        /// Maximum random word length.
        #[arg(long, default_value_t = 16)]
        length: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    Free,
    Classical,
}

/// Flag defaults read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub tower: Option<String>,
    pub stages: Option<usize>,
    pub radius: Option<usize>,
    pub power_bound: Option<usize>,
    pub order_bound: Option<usize>,
    pub cap: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Flags merged over the config file.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub tower: Option<String>,
    pub stages: Option<usize>,
    pub radius: Option<usize>,
    pub power_bound: Option<usize>,
    pub order_bound: Option<usize>,
    pub cap: Option<usize>,
    pub seed: Option<u64>,
    pub exec: Exec,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let exec = match cli.exec {
            Some(ExecArg::Sequential) => Exec::Sequential,
            Some(ExecArg::Parallel) => Exec::Parallel,
            None => Exec::default(),
        };
        let cfg = RunConfig {
            command: cli.command.clone(),
            format: cli.format.or(file.format).unwrap_or_default(),
            tower: cli.tower.clone().or(file.tower),
            stages: cli.stages.or(file.stages),
            radius: cli.radius.or(file.radius),
            power_bound: cli.power_bound.or(file.power_bound),
            order_bound: cli.order_bound.or(file.order_bound),
            cap: cli.cap.or(file.cap),
            seed: cli.seed.or(file.seed),
            exec,
        };
        for (name, v) in [
            ("radius", cfg.radius),
            ("power-bound", cfg.power_bound),
            ("order-bound", cfg.order_bound),
            ("cap", cfg.cap),
        ] {
            if v == Some(0) {
                bail!("--{name} must be positive");
            }
        }
        Ok(cfg)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub config: Value,
    pub ok: bool,
    pub counterexamples: Vec<String>,
    pub undecided: usize,
    pub result: Value,
    #[serde(skip)]
    pub summary: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub fn load_tower(spec: &str) -> Result<ExtensionTower> {
    let path = Path::new(spec);
    let text = if path.is_file() {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    } else {
        spec.replace(';', "\n")
    };
    text.parse().with_context(|| format!("parsing tower `{spec}`"))
}

pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    let start = std::time::Instant::now();
    let mut rep = match &cfg.command {
        Command::Reduce { word } => reduce(cfg, word)?,
        Command::Build { base } => build(cfg, *base)?,
        Command::Lemmas => lemmas(cfg)?,
        Command::Field => field(cfg)?,
        Command::Minstruct => minstruct()?,
        Command::Classical { element, count } => classical(cfg, element, *count)?,
        Command::Confluence { length } => confluence(cfg, *length)?,
    };
    rep.elapsed = start.elapsed();
    Ok(rep)
}

fn report(command: &'static str, config: Value, result: Value) -> RunReport {
    RunReport {
        schema_version: SCHEMA_VERSION,
        command,
        config,
        ok: true,
        counterexamples: Vec::new(),
        undecided: 0,
        result,
        summary: Vec::new(),
        elapsed: Duration::ZERO,
    }
}

fn reduce(cfg: &RunConfig, word: &str) -> Result<RunReport> {
    let tower = match &cfg.tower {
        Some(t) => load_tower(t)?,
        None => ExtensionTower::new(2),
    };
    let w: Word = word.parse().with_context(|| format!("parsing word `{word}`"))?;
    let nf = tower.normal_form(&w)?;
    let mut rep = report(
        "reduce",
        json!({ "tower": tower.describe().lines().collect::<Vec<_>>(), "word": word }),
        json!({ "normal_form": nf.word.to_string(), "tower_stage": nf.tower_stage }),
    );
    rep.summary.push(nf.word.to_string());
    Ok(rep)
}

fn build(cfg: &RunConfig, base: BaseArg) -> Result<RunReport> {
    let stages = cfg.stages.unwrap_or(6);
    let config = ConstructionConfig {
        radius: cfg.radius.unwrap_or(2),
        power_bound: cfg.power_bound.unwrap_or(4),
        g0_mode: match base {
            BaseArg::Free => BaseMode::Free,
            BaseArg::Classical => BaseMode::Classical,
        },
    };
    let mut state = ConstructionState::with_exec(config.clone(), cfg.exec)?;
    let mut entries = Vec::new();
    let mut rep = report(
        "build",
        json!({ "stages": stages, "construction": config }),
        Value::Null,
    );
    let mut fallbacks = Vec::new();
    let mut checks = 0;
    for _ in 0..stages {
        let step = state.tower_step()?.clone();
        let cond = state.check_conditions()?;
        let (hits, total) = *cond.progress.last().expect("progress recorded every stage");
        if matches!(step, StepRecord::FreeZ { fallback: true }) {
            fallbacks.push(cond.stage);
        }
        rep.summary.push(format!(
            "stage {}: {} ledger {hits}/{total} centralizers {} roots {} undecided {}",
            cond.stage,
            if cond.passed() { "pass" } else { "FAIL" },
            if cond.centralizer_ok() { "ok" } else { "violated" },
            if cond.roots_ok() { "ok" } else { "violated" },
            cond.undecided,
        ));
        if !cond.passed() {
            rep.ok = false;
            for c in &cond.centralizers {
                rep.counterexamples.extend(
                    c.violations
                        .iter()
                        .map(|v| format!("stage {} centralizer of {}: {v}", cond.stage, c.y)),
                );
            }
            for r in &cond.roots {
                rep.counterexamples.extend(
                    r.violations
                        .iter()
                        .map(|v| format!("stage {} root of {}: {v}", cond.stage, r.y)),
                );
            }
            if !cond.strict_growth {
                rep.counterexamples
                    .push(format!("stage {}: no strict growth", cond.stage));
            }
            if !cond.progress_monotone() {
                rep.counterexamples
                    .push(format!("stage {}: ledger progress decreased", cond.stage));
            }
        }
        rep.undecided += cond.undecided;
        checks += cond.checks;
        entries.push(json!({
            "stage": cond.stage,
            "ledger_fraction": format!("{hits}/{total}"),
            "conditions": cond,
        }));
    }
    if stages == 0 {
        rep.summary.push(format!(
            "base only: {}",
            state.tower.describe().trim_end().replace('\n', "; ")
        ));
    }
    for s in &fallbacks {
        rep.summary
            .push(format!("stage {s}: queue empty, free stable letter added instead"));
    }
    rep.result = json!({
        "base": state.tower.truncated(state.base_steps).describe().lines().collect::<Vec<_>>(),
        "stages": entries,
        "fallback_stages": fallbacks,
        "checks": checks,
        "consumed": state.consumed.iter().map(|(k, z)| json!({ "stage": k, "z": z.to_string() })).collect::<Vec<_>>(),
    });
    Ok(rep)
}

fn lemma_params(cfg: &RunConfig) -> LemmaParams {
    let d = LemmaParams::default();
    LemmaParams {
        radius: cfg.radius.unwrap_or(d.radius),
        power_bound: cfg.power_bound.unwrap_or(d.power_bound),
        order_bound: cfg.order_bound.unwrap_or(d.order_bound),
        sample_cap: cfg.cap.unwrap_or(d.sample_cap),
        seed: cfg.seed.unwrap_or(d.seed),
    }
}

fn lemmas(cfg: &RunConfig) -> Result<RunReport> {
    let params = lemma_params(cfg);
    let all = run_all(&params, cfg.exec)?;
    let mut rep = report("lemmas", serde_json::to_value(&params)?, serde_json::to_value(&all)?);
    let mut vacuous = Vec::new();
    for tv in &all {
        rep.summary.push(format!(
            "{} (ball {}, eligible {})",
            tv.tower, tv.ball_size, tv.eligible
        ));
        for v in &tv.verdicts {
            let label = match &v.outcome {
                Outcome::Pass => "pass".to_string(),
                Outcome::VacuousPass => {
                    vacuous.push(format!("{} on {}", v.lemma.id(), tv.tower));
                    "vacuous pass".to_string()
                }
                Outcome::Counterexample { witness } => {
                    rep.ok = false;
                    rep.counterexamples.push(format!(
                        "{} on {}: {} {:?}",
                        v.lemma.id(),
                        tv.tower,
                        witness.words.join(", "),
                        witness.exponents
                    ));
                    "COUNTEREXAMPLE".to_string()
                }
                Outcome::Undecided { count } => format!("undecided ({count})"),
            };
            rep.undecided += v.undecided;
            rep.summary.push(format!(
                "  {:<10} {label} premises {} checked {}",
                v.lemma.id(),
                v.premises,
                v.checked
            ));
        }
    }
    for v in &vacuous {
        rep.summary.push(format!("vacuous: {v}"));
    }
    rep.result = json!({ "towers": rep.result, "vacuous": vacuous });
    Ok(rep)
}

fn field(cfg: &RunConfig) -> Result<RunReport> {
    let per_degree = cfg.cap.unwrap_or(100);
    let seed = cfg.seed.unwrap_or(0);
    let r = run_suite(per_degree, 6, 4, seed, cfg.exec);
    let mut rep = report(
        "field",
        json!({ "instances_per_degree": per_degree, "max_n": 6, "symbolic_max_n": 4, "seed": seed }),
        serde_json::to_value(&r)?,
    );
    rep.ok = r.passed();
    rep.summary.push(format!(
        "worked instance {:?}: {}",
        r.worked_inverse,
        ok_str(r.worked_ok)
    ));
    rep.summary
        .push(format!("alpha = 0 gives identity: {}", ok_str(r.alpha_zero_identity)));
    for d in &r.degrees {
        rep.summary.push(format!(
            "n={} inverse {}/{} formula {}/{} companion {}/{}",
            d.n, d.inverse_ok, d.instances, d.formula_ok, d.instances, d.companion_ok, d.instances
        ));
        rep.counterexamples.extend(d.failures.iter().cloned());
    }
    for s in &r.symbolic {
        rep.summary.push(format!(
            "{}: M entry numerator {} ({})",
            s.spec,
            s.m_entry,
            if s.nonzero { "non-zero" } else { "ZERO" }
        ));
        if !s.nonzero || !s.inverse_identity {
            rep.counterexamples
                .push(format!("symbolic check failed for {}", s.spec));
        }
    }
    Ok(rep)
}

fn minstruct() -> Result<RunReport> {
    let omega_bound = 8;
    let support = 6;
    let omega = axiom_suite(Mode::Omega, omega_bound);
    let i = axiom_suite(Mode::I, 3);
    let mismatches = p_n_matches_oracle(support, omega_bound as u64);
    let embedding = embedding_check(6);
    let mut rep = report(
        "minstruct",
        json!({ "omega_bound": omega_bound, "i_copies": 3, "i_offsets": 3, "chain_support": support, "embedding_bound": 6 }),
        json!({ "omega": omega, "i": i, "p_n_mismatches": mismatches, "embedding": embedding }),
    );
    for r in [&omega, &i] {
        rep.summary.push(format!(
            "mode {:?}: {} elements, pool {}",
            r.mode, r.domain_size, r.pool_size
        ));
        for a in &r.axioms {
            rep.summary.push(format!(
                "  axiom {} {:<26} {} ({} checks)",
                a.axiom,
                a.name,
                ok_str(a.passed),
                a.checked
            ));
            if let Some(c) = &a.counterexample {
                rep.counterexamples
                    .push(format!("mode {:?} axiom {}: {c}", r.mode, a.axiom));
            }
        }
        if r.zero_exception {
            rep.summary
                .push("  note: 0 ~ 0 but 0 + 0 < 0 fails; sum axiom checked for x != 0".into());
        }
    }
    rep.summary.push(format!(
        "P_n closed form vs chain search: {} mismatches",
        mismatches.len()
    ));
    rep.summary.push(format!("embedding: {}", ok_str(embedding)));
    rep.counterexamples.extend(mismatches.iter().cloned());
    if !embedding {
        rep.counterexamples.push("embedding check failed".into());
    }
    rep.ok = omega.passed() && i.passed() && rep.counterexamples.is_empty();
    Ok(rep)
}

fn classical(cfg: &RunConfig, element: &str, count: usize) -> Result<RunReport> {
    let radius = cfg.radius.unwrap_or(1);
    let s0 = ClassicalState::new(2);
    let s1 = classical_step(&s0, radius)?;
    let rels = s1.verify_relations()?;
    let t: Word = element.parse().with_context(|| format!("parsing word `{element}`"))?;
    let wit = classical_centralizer_witnesses(&s1, &t, count)?;
    let bad: Vec<String> = rels
        .iter()
        .filter(|r| !r.2)
        .map(|(s, t, _)| format!("relation for ({s}, {t}) fails"))
        .collect();
    let mut rep = report(
        "classical",
        json!({ "radius": radius, "element": element, "count": count }),
        json!({
            "letters": s1.letters.len(),
            "relations_hold": bad.is_empty(),
            "witnesses": wit.iter().map(|n| n.word.to_string()).collect::<Vec<_>>(),
        }),
    );
    rep.summary.push(format!(
        "{} stable letters, relations {}",
        s1.letters.len(),
        ok_str(bad.is_empty())
    ));
    rep.summary
        .push(format!("{} distinct centralizer witnesses for {element}", wit.len()));
    rep.ok = bad.is_empty();
    rep.counterexamples = bad;
    Ok(rep)
}

fn confluence(cfg: &RunConfig, length: usize) -> Result<RunReport> {
    let count = cfg.cap.unwrap_or(4000);
    let seed = cfg.seed.unwrap_or(0);
    let towers = match &cfg.tower {
        Some(t) => vec![load_tower(t)?],
        None => confluence_towers(),
    };
    let mut out = Vec::new();
    let mut rep = report(
        "confluence",
        json!({ "words_per_tower": count, "max_length": length, "seed": seed }),
        Value::Null,
    );
    for (i, t) in towers.iter().enumerate() {
        let r = strategy_agreement(t, count, length, seed.wrapping_add(i as u64), cfg.exec)?;
        rep.summary.push(format!(
            "{}: {} words, {} mismatches",
            r.tower,
            r.words,
            r.mismatches.len()
        ));
        rep.counterexamples.extend(r.mismatches.iter().cloned());
        out.push(r);
    }
    rep.ok = rep.counterexamples.is_empty();
    rep.result = serde_json::to_value(&out)?;
    Ok(rep)
}

fn ok_str(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

pub fn render(rep: &RunReport, format: Format) -> Result<String> {
    match format {
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(rep)?;
            s.push('\n');
            Ok(s)
        }
        Format::Text => {
            let mut s = String::new();
            for line in &rep.summary {
                writeln!(s, "{line}")?;
            }
            if rep.command != "reduce" {
                for c in &rep.counterexamples {
                    writeln!(s, "counterexample: {c}")?;
                }
                writeln!(
                    s,
                    "{}: {} ({} undecided, {:.2?})",
                    rep.command,
                    if rep.ok { "ok" } else { "FAILED" },
                    rep.undecided,
                    rep.elapsed
                )?;
            }
            Ok(s)
        }
    }
}
