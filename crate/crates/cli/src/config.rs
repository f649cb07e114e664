use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopfield::{DiamagneticRule, FockProduct, ModelParams};
use serde::Serialize;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "hopfield", version, about = "Exact Hopfield-model polaritons, physical spectra and thermometry")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Polariton frequencies along a sweep.
    #[command(args_override_self = true)]
    Polaritons(RunArgs),
    /// Energy ladders `E_mn` along a sweep.
    #[command(args_override_self = true)]
    Levels(RunArgs),
    /// Field spectra, optionally swept into a density map.
    #[command(args_override_self = true)]
    Spectrum(RunArgs),
    /// Vacuum Rabi splitting: peaks, splitting and asymmetry.
    #[command(args_override_self = true)]
    Vrs(RunArgs),
    /// Partition function, heat capacity, QFI and signal-to-noise ratio.
    #[command(args_override_self = true)]
    Thermometry(RunArgs),
    /// Closed forms against the truncated-Fock oracle.
    #[command(args_override_self = true)]
    Validate(RunArgs),
}

impl Cli {
    /// Like `try_parse_from`, keeping each `--sweep` occurrence separate.
    pub fn parse_grouped<I, T>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        use clap::{CommandFactory, FromArgMatches};
        let matches = Self::command().try_get_matches_from(args)?;
        let mut cli = Self::from_arg_matches(&matches)?;
        if let Some((_, sub)) = matches.subcommand() {
            let groups: Vec<Vec<String>> = sub
                .get_occurrences::<String>("sweep")
                .map(|occ| occ.map(|o| o.cloned().collect()).collect())
                .unwrap_or_default();
            cli.command.args_mut().sweep_groups = groups;
        }
        Ok(cli)
    }
}

impl Command {
    fn args_mut(&mut self) -> &mut RunArgs {
        match self {
            Command::Polaritons(a)
            | Command::Levels(a)
            | Command::Spectrum(a)
            | Command::Vrs(a)
            | Command::Thermometry(a)
            | Command::Validate(a) => a,
        }
    }

    pub fn split(self) -> (CommandKind, RunArgs) {
        match self {
            Command::Polaritons(a) => (CommandKind::Polaritons, a),
            Command::Levels(a) => (CommandKind::Levels, a),
            Command::Spectrum(a) => (CommandKind::Spectrum, a),
            Command::Vrs(a) => (CommandKind::Vrs, a),
            Command::Thermometry(a) => (CommandKind::Thermometry, a),
            Command::Validate(a) => (CommandKind::Validate, a),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Field frequency; all outputs are in units of it.
    #[arg(long, default_value_t = 1.0)]
    pub omega_c: f64,
    /// Matter frequency (defaults to omega_c).
    #[arg(long)]
    pub omega_b: Option<f64>,
    /// Force omega_b = omega_c.
    #[arg(long)]
    pub resonance: bool,
    /// Isotropic coupling g1 = g2 = g.
    #[arg(long, conflicts_with_all = ["g1", "g2"])]
    pub g: Option<f64>,
    /// Co-rotating coupling.
    #[arg(long, requires = "g2")]
    pub g1: Option<f64>,
    /// Counter-rotating coupling.
    #[arg(long, requires = "g1")]
    pub g2: Option<f64>,
    /// Diamagnetic rule(s): trk, zero, rwa, scaled(d), explicit(D).
    #[arg(long, value_delimiter = ',', default_value = "trk")]
    pub d_rule: Vec<DiamagneticRule>,
    /// Filter half-width.
    #[arg(long, default_value_t = 0.05)]
    pub gamma: f64,
    /// Observation time of finite-time spectra (default 10/gamma).
    #[arg(long)]
    pub t_obs: Option<f64>,
    /// Temperature in units of omega_c (k_B = 1).
    #[arg(long)]
    pub temperature: Option<f64>,
    /// `VAR START STOP COUNT [linear|log]` or `VAR v1,v2,...`; VAR is one of
    /// g, g1, g2, omega_b, d, temperature. Repeat for a density map.
    #[arg(long, num_args = 2..=5, value_names = ["VAR", "START", "STOP", "COUNT", "SCALE"], action = clap::ArgAction::Append)]
    pub sweep: Vec<String>,
    /// `--sweep` occurrences, filled from the raw matches.
    #[arg(skip)]
    pub sweep_groups: Vec<Vec<String>>,
    /// Frequency grid of spectra.
    #[arg(long, num_args = 3, value_names = ["START", "STOP", "COUNT"], default_values = ["0", "3", "3000"])]
    pub omega_grid: Vec<f64>,
    /// Initial Fock product `|field, matter>`, e.g. 10 or 0,1.
    #[arg(long, default_value = "10")]
    pub state: FockProduct,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    pub method: Method,
    /// Dispersion curves to add to a spectrum map swept over omega_b.
    #[arg(long, value_delimiter = ',')]
    pub overlay: Vec<DiamagneticRule>,
    /// Highest m and n of energy ladders.
    #[arg(long, default_value_t = 6)]
    pub max_level: u32,
    /// Include the zero-point energy in ladders.
    #[arg(long)]
    pub zero_point: bool,
    /// Resonant D = 0 QFI continued past the critical coupling.
    #[arg(long)]
    pub continuation: bool,
    /// Fock cutoff of the eigenvalue checks.
    #[arg(long, default_value_t = 150)]
    pub cutoff: usize,
    /// Validation suite to run.
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Named figure recipe; explicit flags override it.
    #[arg(long)]
    pub preset: Option<String>,
    /// Worker threads for sweeps.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output path prefix (default `hopfield-<command>`).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Polaritons,
    Levels,
    Spectrum,
    Vrs,
    Thermometry,
    Validate,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Polaritons => "polaritons",
            CommandKind::Levels => "levels",
            CommandKind::Spectrum => "spectrum",
            CommandKind::Vrs => "vrs",
            CommandKind::Thermometry => "thermometry",
            CommandKind::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Long-time Lorentzian closed forms.
    Closed,
    /// Finite-time spectrum from the exact correlation.
    Quadrature,
    /// Long-time limit without cross terms.
    Incoherent,
    /// Rotating-wave doublet.
    Rwa,
    /// Single deep-strong-coupling Lorentzian.
    Dsc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Model,
    Eigen,
    Ladder,
    Dynamics,
    Spectrum,
    Vrs,
    Thermometry,
    Critical,
    Dicke,
}

impl Suite {
    pub const MEMBERS: [Suite; 9] = [
        Suite::Model,
        Suite::Eigen,
        Suite::Ladder,
        Suite::Dynamics,
        Suite::Spectrum,
        Suite::Vrs,
        Suite::Thermometry,
        Suite::Critical,
        Suite::Dicke,
    ];

    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Self::MEMBERS.to_vec(),
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Model => "model",
            Suite::Eigen => "eigen",
            Suite::Ladder => "ladder",
            Suite::Dynamics => "dynamics",
            Suite::Spectrum => "spectrum",
            Suite::Vrs => "vrs",
            Suite::Thermometry => "thermometry",
            Suite::Critical => "critical",
            Suite::Dicke => "dicke",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    G,
    G1,
    G2,
    OmegaB,
    D,
    Temperature,
}

impl SweepVar {
    fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "g" => SweepVar::G,
            "g1" => SweepVar::G1,
            "g2" => SweepVar::G2,
            "omega_b" | "omega-b" | "wb" => SweepVar::OmegaB,
            "d" | "D" => SweepVar::D,
            "temperature" | "t" | "T" => SweepVar::Temperature,
            _ => return Err(CliError::Config(format!("unknown sweep variable `{s}`"))),
        })
    }

    /// Column name, normalized by `omega_c`.
    pub fn column(self) -> &'static str {
        match self {
            SweepVar::G => "g/omega_c",
            SweepVar::G1 => "g1/omega_c",
            SweepVar::G2 => "g2/omega_c",
            SweepVar::OmegaB => "omega_b/omega_c",
            SweepVar::D => "D/omega_c",
            SweepVar::Temperature => "kT/omega_c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Linear,
    Log,
    List,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepAxis {
    pub var: SweepVar,
    pub scale: Scale,
    pub values: Vec<f64>,
}

impl SweepAxis {
    pub fn parse(tokens: &[String]) -> Result<Self, CliError> {
        let bad = |what: &str| CliError::Config(format!("--sweep {}: {what}", tokens.join(" ")));
        let var = SweepVar::parse(&tokens[0])?;
        let num = |s: &String| s.parse::<f64>().map_err(|_| bad("expected a number"));
        if tokens.len() == 2 {
            let values = tokens[1].split(',').map(|v| num(&v.to_string())).collect::<Result<Vec<_>, _>>()?;
            return Ok(SweepAxis { var, scale: Scale::List, values });
        }
        if tokens.len() < 4 {
            return Err(bad("expected VAR START STOP COUNT [SCALE]"));
        }
        let (start, stop) = (num(&tokens[1])?, num(&tokens[2])?);
        let count: usize = tokens[3].parse().map_err(|_| bad("COUNT must be a positive integer"))?;
        if count == 0 {
            return Err(bad("COUNT must be at least 1"));
        }
        let scale = match tokens.get(4).map(String::as_str) {
            None | Some("linear") | Some("lin") => Scale::Linear,
            Some("log") => Scale::Log,
            Some(s) => return Err(bad(&format!("unknown scale `{s}`"))),
        };
        let values = match scale {
            Scale::Log => {
                if !(start > 0.0 && stop > 0.0) {
                    return Err(bad("log sweeps need positive bounds"));
                }
                let mut v: Vec<f64> = linspace(start.ln(), stop.ln(), count).into_iter().map(f64::exp).collect();
                v[0] = start;
                if let Some(last) = v.last_mut() {
                    *last = stop;
                }
                v
            }
            _ => linspace(start, stop, count),
        };
        Ok(SweepAxis { var, scale, values })
    }
}

pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let h = (stop - start) / (count - 1) as f64;
            (0..count).map(|i| if i + 1 == count { stop } else { start + h * i as f64 }).collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    Isotropic { g: f64 },
    Anisotropic { g1: f64, g2: f64 },
}

/// Fully resolved run description; this is what the JSON sidecar records.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub preset: Option<String>,
    pub omega_c: f64,
    pub omega_b: f64,
    pub coupling: Coupling,
    pub d_rules: Vec<DiamagneticRule>,
    pub gamma: f64,
    pub t_obs: Option<f64>,
    pub temperature: Option<f64>,
    pub sweeps: Vec<SweepAxis>,
    pub omega_grid: (f64, f64, usize),
    pub state: FockProduct,
    pub method: Method,
    pub overlays: Vec<DiamagneticRule>,
    pub max_level: u32,
    pub zero_point: bool,
    pub continuation: bool,
    pub cutoff: usize,
    pub suite: Suite,
    #[serde(skip)]
    pub workers: Option<usize>,
    #[serde(skip)]
    pub out: PathBuf,
}

impl RunConfig {
    pub fn resolve(command: CommandKind, a: RunArgs) -> Result<Self, CliError> {
        let cfg_err = |m: String| Err(CliError::Config(m));
        let omega_b = if a.resonance { a.omega_c } else { a.omega_b.unwrap_or(a.omega_c) };
        let coupling = match (a.g, a.g1, a.g2) {
            (_, Some(g1), Some(g2)) => Coupling::Anisotropic { g1, g2 },
            (g, _, _) => Coupling::Isotropic { g: g.unwrap_or(0.0) },
        };
        let sweeps = a.sweep_groups.iter().map(|t| SweepAxis::parse(t)).collect::<Result<Vec<_>, _>>()?;
        if a.d_rule.is_empty() {
            return cfg_err("--d-rule needs at least one rule".into());
        }
        if a.omega_grid[2] < 2.0 || a.omega_grid[2].fract() != 0.0 {
            return cfg_err("--omega-grid COUNT must be an integer >= 2".into());
        }
        if let Some(w) = a.workers {
            if w == 0 {
                return cfg_err("--workers must be at least 1".into());
            }
        }
        let cfg = RunConfig {
            command,
            preset: a.preset,
            omega_c: a.omega_c,
            omega_b,
            coupling,
            d_rules: a.d_rule,
            gamma: a.gamma,
            t_obs: a.t_obs,
            temperature: a.temperature,
            sweeps,
            omega_grid: (a.omega_grid[0], a.omega_grid[1], a.omega_grid[2] as usize),
            state: a.state,
            method: a.method,
            overlays: a.overlay,
            max_level: a.max_level,
            zero_point: a.zero_point,
            continuation: a.continuation,
            cutoff: a.cutoff,
            suite: a.suite,
            workers: a.workers,
            out: a.out.unwrap_or_else(|| PathBuf::from(format!("hopfield-{}", command.name()))),
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), CliError> {
        let err = |m: &str| Err(CliError::Config(m.to_string()));
        let vars: Vec<SweepVar> = self.sweeps.iter().map(|s| s.var).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return err("each sweep variable may appear once");
            }
        }
        let anisotropic = matches!(self.coupling, Coupling::Anisotropic { .. })
            || vars.iter().any(|v| matches!(v, SweepVar::G1 | SweepVar::G2));
        if vars.contains(&SweepVar::G) && anisotropic {
            return err("a g sweep needs isotropic coupling");
        }
        if matches!(vars.as_slice(), [SweepVar::G1] | [SweepVar::G2]) && !matches!(self.coupling, Coupling::Anisotropic { .. }) {
            return err("sweeping g1 or g2 needs --g1 and --g2 as base values");
        }
        if anisotropic
            && !vars.contains(&SweepVar::D)
            && self.d_rules.iter().any(|r| !matches!(r, DiamagneticRule::Zero | DiamagneticRule::Explicit(_)))
        {
            return err("anisotropic couplings need --d-rule zero or explicit(D)");
        }
        let max_axes = match self.command {
            CommandKind::Validate => 0,
            CommandKind::Thermometry => 2,
            CommandKind::Spectrum | CommandKind::Vrs => 1,
            CommandKind::Polaritons | CommandKind::Levels => 1,
        };
        if self.sweeps.len() > max_axes {
            return err(&format!("{} takes at most {max_axes} sweep axes", self.command.name()));
        }
        if matches!(self.command, CommandKind::Polaritons | CommandKind::Levels) && self.sweeps.len() != 1 {
            return err("exactly one sweep axis is required");
        }
        if vars.contains(&SweepVar::Temperature) && self.command != CommandKind::Thermometry {
            return err("temperature sweeps belong to thermometry");
        }
        if self.command == CommandKind::Thermometry && self.temperature.is_none() && !vars.contains(&SweepVar::Temperature) {
            return err("thermometry needs --temperature or a temperature sweep");
        }
        if self.continuation && (anisotropic || vars.iter().any(|v| matches!(v, SweepVar::OmegaB | SweepVar::D))) {
            return err("--continuation is the resonant isotropic D = 0 probe; only g and temperature may vary");
        }
        if matches!(self.command, CommandKind::Spectrum) && self.d_rules.len() != 1 {
            return err("spectrum takes a single --d-rule");
        }
        if !(self.gamma > 0.0) {
            return err("--gamma must be positive");
        }
        if self.cutoff < 4 {
            return err("--cutoff must be at least 4");
        }
        Ok(())
    }

    /// The sweep grid as points, first axis slowest.
    pub fn points(&self) -> Vec<Point> {
        let mut points = vec![Point::base(self)];
        for axis in &self.sweeps {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.set(axis.var, v);
                        q
                    })
                })
                .collect();
        }
        points
    }

    pub fn t_obs_or_default(&self) -> f64 {
        self.t_obs.unwrap_or(10.0 / self.gamma)
    }
}

/// One sweep point: the varied coordinates plus the resolved base values.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub omega_c: f64,
    pub omega_b: f64,
    pub coupling: Coupling,
    pub diamagnetic: Option<f64>,
    pub temperature: Option<f64>,
    /// Swept coordinates normalized by `omega_c`, in axis order.
    pub coords: Vec<f64>,
}

impl Point {
    fn base(cfg: &RunConfig) -> Self {
        Point {
            omega_c: cfg.omega_c,
            omega_b: cfg.omega_b,
            coupling: cfg.coupling,
            diamagnetic: None,
            temperature: cfg.temperature,
            coords: Vec::new(),
        }
    }

    fn set(&mut self, var: SweepVar, v: f64) {
        let wc = self.omega_c;
        match var {
            SweepVar::G => self.coupling = Coupling::Isotropic { g: v },
            SweepVar::G1 | SweepVar::G2 => {
                let (mut g1, mut g2) = match self.coupling {
                    Coupling::Isotropic { g } => (g, g),
                    Coupling::Anisotropic { g1, g2 } => (g1, g2),
                };
                if var == SweepVar::G1 {
                    g1 = v
                } else {
                    g2 = v
                }
                self.coupling = Coupling::Anisotropic { g1, g2 };
            }
            SweepVar::OmegaB => self.omega_b = v,
            SweepVar::D => self.diamagnetic = Some(v),
            SweepVar::Temperature => self.temperature = Some(v),
        }
        self.coords.push(v / wc);
    }

    /// Isotropic coupling strength; for anisotropic points the co-rotating one.
    pub fn g(&self) -> f64 {
        match self.coupling {
            Coupling::Isotropic { g } => g,
            Coupling::Anisotropic { g1, .. } => g1,
        }
    }

    /// Rule in force at this point: a swept `D` overrides the configured rule.
    pub fn rule(&self, rule: DiamagneticRule) -> DiamagneticRule {
        match self.diamagnetic {
            Some(d) => DiamagneticRule::Explicit(d),
            None => rule,
        }
    }

    pub fn params(&self, rule: DiamagneticRule) -> hopfield::Result<ModelParams> {
        let rule = self.rule(rule);
        match self.coupling {
            Coupling::Isotropic { g } => rule.params(self.omega_c, self.omega_b, g),
            Coupling::Anisotropic { g1, g2 } => {
                let d = match rule {
                    DiamagneticRule::Explicit(d) => d,
                    _ => 0.0,
                };
                ModelParams::new(self.omega_c, self.omega_b, g1, g2, d)
            }
        }
    }

    pub fn describe(&self) -> String {
        let c = match self.coupling {
            Coupling::Isotropic { g } => format!("g={g}"),
            Coupling::Anisotropic { g1, g2 } => format!("g1={g1}, g2={g2}"),
        };
        let mut s = format!("omega_c={}, omega_b={}, {c}", self.omega_c, self.omega_b);
        if let Some(d) = self.diamagnetic {
            s += &format!(", D={d}");
        }
        if let Some(t) = self.temperature {
            s += &format!(", T={t}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(argv: &[&str]) -> Result<RunConfig, CliError> {
        let cli = Cli::parse_grouped(std::iter::once("hopfield").chain(argv.iter().copied())).unwrap();
        let (kind, args) = cli.command.split();
        RunConfig::resolve(kind, args)
    }

    #[test]
    fn sweep_forms() {
        let c = resolve(&["polaritons", "--sweep", "g", "0", "3", "301", "--resonance"]).unwrap();
        assert_eq!(c.sweeps[0].values.len(), 301);
        assert_eq!(c.sweeps[0].values[300], 3.0);
        let c = resolve(&["vrs", "--sweep", "g", "0.1,0.35,1"]).unwrap();
        assert_eq!(c.sweeps[0].values, vec![0.1, 0.35, 1.0]);
        let c = resolve(&["thermometry", "--sweep", "temperature", "0.01", "1", "3", "log", "--sweep", "g", "0", "1", "2"]).unwrap();
        assert!((c.sweeps[0].values[1] - 0.1).abs() < 1e-15);
        assert_eq!(c.points().len(), 6);
        assert_eq!(c.points()[1].coords, vec![0.01, 1.0]);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(resolve(&["polaritons"]).is_err());
        assert!(resolve(&["polaritons", "--sweep", "x", "0", "1", "2"]).is_err());
        assert!(resolve(&["polaritons", "--sweep", "g", "0", "1", "0"]).is_err());
        assert!(resolve(&["polaritons", "--g1", "0.2", "--g2", "0.1", "--sweep", "omega_b", "0.5", "2", "4"]).is_err());
        assert!(resolve(&["thermometry", "--g", "0.2"]).is_err());
        assert!(resolve(&["spectrum", "--d-rule", "trk,zero"]).is_err());
    }

    #[test]
    fn later_flags_override() {
        let c = resolve(&["vrs", "--g", "0.1", "--g", "0.35"]).unwrap();
        assert_eq!(c.coupling, Coupling::Isotropic { g: 0.35 });
    }

    #[test]
    fn anisotropic_explicit_rule() {
        let c = resolve(&["polaritons", "--g1", "0.3", "--g2", "0.1", "--d-rule", "explicit(0.05)", "--sweep", "omega_b", "1", "2", "2"])
            .unwrap();
        let p = c.points()[1].params(c.d_rules[0]).unwrap();
        assert_eq!((p.g1(), p.g2(), p.diamagnetic(), p.omega_b()), (0.3, 0.1, 0.05, 2.0));
    }
}
