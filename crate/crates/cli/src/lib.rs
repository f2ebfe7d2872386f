//! Verification harness for the unlockable four-party state: runs the
//! suites, builds a [`ReportDocument`] and renders it as text or JSON.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or output
//! cannot be written, 2 on a usage error (no report is produced).

pub mod report;
mod suites;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use unlockable_core::analysis::{PPT_TOL, RECONSTRUCTION_TOL};

pub use report::{emit_report, CheckRecord, CommandEcho, Format, NamedValue, ReportDocument, Value, Verdict};

use suites::{Ctx, PARTIES};

/// Overrides the default equality/PPT tolerance; `--tol` wins over it.
pub const TOL_ENV: &str = "UNLOCKABLE_TOL";

pub const DEFAULT_SHOTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    CheckCuts,
    CheckInvariance,
    ExpansionCheck,
    Unlock,
    TeleportDemo,
    Superadditivity,
    QuditSuite,
    FullReport,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckCuts => "check-cuts",
            Command::CheckInvariance => "check-invariance",
            Command::ExpansionCheck => "expansion-check",
            Command::Unlock => "unlock",
            Command::TeleportDemo => "teleport-demo",
            Command::Superadditivity => "superadditivity",
            Command::QuditSuite => "qudit-suite",
            Command::FullReport => "full-report",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Smallest PT eigenvalue still counted as PPT is `-ppt`.
    pub ppt: f64,
    /// NPT requires a PT eigenvalue below `-npt`.
    pub npt: f64,
    /// Probabilities, symmetry distances, picture-equivalence and operator invariants.
    pub equality: f64,
    pub fidelity: f64,
    /// Ensemble reconstruction, expansion equality and the exact structural identities.
    pub reconstruction: f64,
    /// Ablated runs must stay below this mean fidelity.
    pub ablation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ppt: PPT_TOL,
            npt: 1e-6,
            equality: 1e-10,
            fidelity: 1e-9,
            reconstruction: RECONSTRUCTION_TOL,
            ablation: 0.95,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] unlockable_core::Error),
    #[error("writing report: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Usage(_) => 2,
            RunError::Core(_) | RunError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "unlockable", version, about = "Verification suites for the unlockable four-party bound entangled state")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Pair of parties that merge their labs, e.g. CD or C,D (unlock only).
    #[arg(long)]
    pub merge: Option<String>,
    /// Remaining party that applies the correction (default: alphabetically first).
    #[arg(long)]
    pub corrector: Option<String>,
    /// Local dimension of the four-party state.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Equality and PPT tolerance (default 1e-10, or $UNLOCKABLE_TOL).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub fidelity_tol: Option<f64>,
    #[arg(long)]
    pub reconstruction_tol: Option<f64>,
    /// Add a seeded Monte Carlo demonstration to unlock, teleport-demo and superadditivity.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Samples drawn in the seeded demonstration.
    #[arg(long, requires = "seed")]
    pub shots: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandConfig {
    pub command: Command,
    pub merge: Option<(String, String)>,
    pub corrector: Option<String>,
    pub d: usize,
    pub format: Format,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub shots: usize,
}

impl CommandConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            merge: None,
            corrector: None,
            d: 2,
            format: Format::Text,
            tolerances: Tolerances::default(),
            seed: None,
            shots: DEFAULT_SHOTS,
        }
    }

    /// Build from parsed flags; `env_tol` is the value of [`TOL_ENV`], if set.
    pub fn from_cli(cli: Cli, env_tol: Option<&str>) -> Result<Self, RunError> {
        let mut tolerances = Tolerances::default();
        let env = env_tol
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| RunError::Usage(format!("{TOL_ENV}={s:?} is not a number")))
            })
            .transpose()?;
        if let Some(t) = cli.tol.or(env) {
            tolerances.ppt = t;
            tolerances.equality = t;
        }
        if let Some(t) = cli.fidelity_tol {
            tolerances.fidelity = t;
        }
        if let Some(t) = cli.reconstruction_tol {
            tolerances.reconstruction = t;
        }
        let config = Self {
            command: cli.command,
            merge: cli.merge.as_deref().map(parse_merge).transpose()?,
            corrector: cli.corrector.map(|c| c.trim().to_uppercase()),
            d: cli.d,
            format: cli.format,
            tolerances,
            seed: cli.seed,
            shots: cli.shots.unwrap_or(DEFAULT_SHOTS),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let usage = |m: String| Err(RunError::Usage(m));
        let t = &self.tolerances;
        for (name, v) in [
            ("tol", t.ppt),
            ("tol", t.equality),
            ("fidelity-tol", t.fidelity),
            ("reconstruction-tol", t.reconstruction),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return usage(format!("--{name} must be a nonnegative number, got {v}"));
            }
        }
        if !(2..=5).contains(&self.d) {
            return usage(format!("--d must be between 2 and 5, got {}", self.d));
        }
        let qubit_only = matches!(
            self.command,
            Command::ExpansionCheck | Command::TeleportDemo | Command::Superadditivity | Command::FullReport
        );
        if qubit_only && self.d != 2 {
            return usage(format!("{} is defined for qubits only (--d 2)", self.command.name()));
        }
        if self.command == Command::Unlock {
            let Some((p, q)) = &self.merge else {
                return usage("unlock requires --merge, e.g. --merge CD".into());
            };
            if self.d > 2 && matches!((p.as_str(), q.as_str()), ("A", "D") | ("D", "A") | ("B", "C") | ("C", "B")) {
                return usage(format!("qudit unlocking by {p}+{q} is not supported; use AB, CD, AC or BD"));
            }
            if let Some(c) = &self.corrector {
                if !PARTIES.contains(&c.as_str()) || c == p || c == q {
                    return usage(format!("--corrector must be one of the two remaining parties, got {c}"));
                }
            }
        } else if self.merge.is_some() || self.corrector.is_some() {
            return usage(format!("--merge/--corrector only apply to unlock, not {}", self.command.name()));
        }
        if self.shots == 0 {
            return usage("--shots must be positive".into());
        }
        Ok(())
    }

    fn echo(&self) -> CommandEcho {
        CommandEcho {
            command: self.command.name().to_owned(),
            merge: self.merge.as_ref().map(|(p, q)| format!("{p}{q}")),
            corrector: self.corrector.clone(),
            d: self.d,
            seed: self.seed,
            shots: self.seed.map(|_| self.shots),
        }
    }
}

/// Accepts `CD`, `C,D`, `C+D` (any case).
fn parse_merge(text: &str) -> Result<(String, String), RunError> {
    let parts: Vec<String> = text
        .split(|c: char| c == ',' || c == '+' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .flat_map(|s| s.chars().map(|c| c.to_ascii_uppercase().to_string()).collect::<Vec<_>>())
        .collect();
    match parts.as_slice() {
        [p, q] if p != q && PARTIES.contains(&p.as_str()) && PARTIES.contains(&q.as_str()) => {
            Ok((p.clone(), q.clone()))
        }
        _ => Err(RunError::Usage(format!(
            "--merge needs two distinct parties from A, B, C, D, got {text:?}"
        ))),
    }
}

pub fn run_command(config: &CommandConfig) -> Result<ReportDocument, RunError> {
    config.validate()?;
    let tol = &config.tolerances;
    let mut ctx = Ctx::new(tol);
    let d = config.d;
    let sample = |ctx: &Ctx, what: &str, ts: &[unlockable_core::Transcript]| {
        config.seed.map(|seed| suites::sampled(ctx, what, ts, seed, config.shots))
    };
    let checks = match config.command {
        Command::CheckCuts => suites::cuts(&mut ctx, d)?,
        Command::CheckInvariance => suites::invariance(&mut ctx, d)?,
        Command::ExpansionCheck => suites::expansion(&mut ctx, tol.reconstruction)?,
        Command::Unlock => {
            let (p, q) = config.merge.as_ref().expect("validated");
            let (mut records, ts) = suites::unlock_branches(&mut ctx, d, (p, q), config.corrector.as_deref())?;
            records.extend(sample(&ctx, "unlock", &ts));
            records
        }
        Command::TeleportDemo => {
            let mut records = suites::equivalence(&mut ctx)?;
            let (named, pool) = suites::teleport_named(&mut ctx)?;
            records.extend(named);
            records.extend(sample(&ctx, "teleport", &pool));
            records
        }
        Command::Superadditivity => {
            let (mut records, ts) = suites::superadditivity(&mut ctx)?;
            records.extend(sample(&ctx, "superadditivity", &ts));
            records
        }
        Command::QuditSuite => suites::qudit(&mut ctx, d)?,
        Command::FullReport => {
            let mut records = suites::cuts(&mut ctx, 2)?;
            records.extend(suites::expansion(&mut ctx, tol.reconstruction)?);
            records.extend(suites::unlock_all(&mut ctx)?);
            records.extend(suites::equivalence(&mut ctx)?);
            records.extend(suites::teleport_grid(&mut ctx)?);
            records.extend(suites::qudit_criterion(&mut ctx)?);
            records.extend(suites::superadditivity(&mut ctx)?.0);
            records.extend(suites::hygiene(&mut ctx, 1000)?);
            records.sort_by_key(|r| r.criterion);
            records
        }
    };
    Ok(ReportDocument::new(config.echo(), checks))
}

/// Full command-line flow, minus process handling. Returns the exit code.
pub fn run_cli<I, T>(args: I, env_tol: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return e.exit_code().clamp(0, 255) as u8;
        }
    };
    let result = CommandConfig::from_cli(cli, env_tol).and_then(|config| {
        let doc = run_command(&config)?;
        emit_report(&doc, config.format, out)?;
        Ok(doc)
    });
    match result {
        Ok(doc) => {
            if doc.passed() {
                0
            } else {
                for c in doc.failed_checks() {
                    let _ = writeln!(err, "FAIL {}", c.name);
                }
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "unlockable: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("unlockable").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn merge_spellings() {
        for s in ["CD", "C,D", "c+d", " C D "] {
            assert_eq!(parse_merge(s).unwrap(), ("C".into(), "D".into()), "{s}");
        }
        for s in ["C", "CC", "CE", "ABC", ""] {
            assert!(parse_merge(s).is_err(), "{s}");
        }
    }

    #[test]
    fn tolerance_precedence() {
        let c = CommandConfig::from_cli(cli(&["check-cuts"]), Some("1e-8")).unwrap();
        assert_eq!(c.tolerances.ppt, 1e-8);
        let c = CommandConfig::from_cli(cli(&["check-cuts", "--tol", "1e-7"]), Some("1e-8")).unwrap();
        assert_eq!(c.tolerances.equality, 1e-7);
        assert!(CommandConfig::from_cli(cli(&["check-cuts"]), Some("tiny")).is_err());
        assert!(CommandConfig::from_cli(cli(&["check-cuts", "--tol=-1"]), None).is_err());
    }

    #[test]
    fn config_invariants() {
        let usage = |args: &[&str]| matches!(CommandConfig::from_cli(cli(args), None), Err(RunError::Usage(_)));
        assert!(usage(&["unlock"]));
        assert!(usage(&["qudit-suite", "--d", "6"]));
        assert!(usage(&["qudit-suite", "--d", "1"]));
        assert!(usage(&["superadditivity", "--d", "3"]));
        assert!(usage(&["unlock", "--merge", "AD", "--d", "3"]));
        assert!(usage(&["unlock", "--merge", "CD", "--corrector", "C"]));
        assert!(usage(&["check-cuts", "--merge", "CD"]));
        assert!(!usage(&["unlock", "--merge", "CD", "--corrector", "b"]));
        assert!(!usage(&["qudit-suite", "--d", "5"]));
    }
}
