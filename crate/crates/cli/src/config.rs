//! Plain-text run configuration: `[section]` headers followed by
//! `key = value` lines, `#` comments.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gbq_core::diagnostics::WeightProfile;
use gbq_core::experiments::{DichotomyConfig, Profile, SweepSpec};
use gbq_core::ground_state::PetviashviliOptions;
use gbq_core::propagator::{ModelParams, Nonlinearity, StepperConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line == 0 {
            write!(f, "config: {}", self.msg)
        } else {
            write!(f, "config line {}: {}", self.line, self.msg)
        }
    }
}

impl std::error::Error for ConfigError {}

type Res<T> = std::result::Result<T, ConfigError>;

fn err<T>(line: usize, msg: impl Into<String>) -> Res<T> {
    Err(ConfigError { line, msg: msg.into() })
}

/// One `key = value` entry with its section and source line.
#[derive(Debug, Clone)]
struct Entry {
    section: String,
    key: String,
    value: String,
    line: usize,
}

fn tokenize(text: &str) -> Res<Vec<Entry>> {
    let mut section = String::new();
    let mut out: Vec<Entry> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let s = raw.split('#').next().unwrap().trim();
        if s.is_empty() {
            continue;
        }
        if let Some(rest) = s.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError { line, msg: format!("unterminated section header {s}") })?;
            section = name.trim().to_string();
            continue;
        }
        let Some((k, v)) = s.split_once('=') else {
            return err(line, format!("expected key = value, got {s}"));
        };
        let key = k.trim().to_string();
        if out.iter().any(|e| e.section == section && e.key == key) {
            return err(line, format!("duplicate key {section}.{key}"));
        }
        let v = v.trim();
        let v = v.strip_prefix('"').and_then(|x| x.strip_suffix('"')).unwrap_or(v);
        out.push(Entry { section: section.clone(), key, value: v.to_string(), line });
    }
    Ok(out)
}

struct Fields<'a> {
    entries: &'a [Entry],
    used: Vec<bool>,
}

impl<'a> Fields<'a> {
    fn new(entries: &'a [Entry]) -> Self {
        Fields { entries, used: vec![false; entries.len()] }
    }

    fn raw(&mut self, section: &str, key: &str) -> Option<(&'a str, usize)> {
        let i = self.entries.iter().position(|e| e.section == section && e.key == key)?;
        self.used[i] = true;
        Some((self.entries[i].value.as_str(), self.entries[i].line))
    }

    fn parse<T: std::str::FromStr>(&mut self, section: &str, key: &str, default: T) -> Res<T> {
        match self.raw(section, key) {
            None => Ok(default),
            Some((v, line)) => v
                .parse()
                .or_else(|_| err(line, format!("{section}.{key}: cannot parse {v:?}"))),
        }
    }

    fn boolean(&mut self, section: &str, key: &str, default: bool) -> Res<bool> {
        match self.raw(section, key) {
            None => Ok(default),
            Some(("true" | "yes" | "1", _)) => Ok(true),
            Some(("false" | "no" | "0", _)) => Ok(false),
            Some((v, line)) => err(line, format!("{section}.{key}: expected true or false, got {v:?}")),
        }
    }

    fn list<T: std::str::FromStr>(&mut self, section: &str, key: &str, default: Vec<T>) -> Res<Vec<T>> {
        match self.raw(section, key) {
            None => Ok(default),
            Some((v, line)) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().or_else(|_| err(line, format!("{section}.{key}: cannot parse {s:?}"))))
                .collect(),
        }
    }

    fn string(&mut self, section: &str, key: &str) -> Option<(String, usize)> {
        self.raw(section, key).map(|(v, l)| (v.to_string(), l))
    }

    fn finish(self) -> Res<()> {
        match self.used.iter().position(|u| !u) {
            Some(i) => {
                let e = &self.entries[i];
                let name = if e.section.is_empty() { e.key.clone() } else { format!("{}.{}", e.section, e.key) };
                err(e.line, format!("unknown key {name}"))
            }
            None => Ok(()),
        }
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

/// Initial-data shape. `coefficients`, when given for the cosine profile,
/// replaces the single mode by `Σ c_j cos(2πjx₁/L₁)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSpec {
    pub profile: Profile,
    pub amplitude: f64,
    pub width: f64,
    pub coefficients: Vec<f64>,
    pub mean_subtract: bool,
    /// Ground-state checkpoint for the `ground_state` profile.
    pub ground_state: Option<PathBuf>,
    /// Amplitude of seeded band-limited noise added to `u0`.
    pub noise: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub dim: usize,
    pub points: usize,
    pub side: f64,
    pub stepper: StepperConfig,
    pub data: DataSpec,
    /// Morawetz radii recorded along the run; empty for none.
    pub morawetz_r: Vec<f64>,
    pub morawetz_profile: WeightProfile,
    pub csv: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn parse(text: &str) -> Res<RunConfig> {
        let entries = tokenize(text)?;
        let mut f = Fields::new(&entries);

        let alpha: f64 = f.parse("model", "alpha", 3.0)?;
        let beta: i8 = f.parse("model", "beta", 1)?;
        let (nl, nl_line) = f.string("model", "nonlinearity").unwrap_or(("power".into(), 0));
        let params = match nl.as_str() {
            "power" => ModelParams::power(alpha, beta),
            "quadratic" => Ok(ModelParams::quadratic()),
            "none" => ModelParams::power(alpha, beta).map(ModelParams::linear),
            other => return err(nl_line, format!("model.nonlinearity: unknown {other:?}")),
        }
        .or_else(|e| err(nl_line, format!("model: {e}")))?;

        let dim: usize = f.parse("grid", "dim", 1)?;
        if !(1..=3).contains(&dim) {
            return err(0, format!("grid.dim must be 1, 2 or 3, got {dim}"));
        }
        let points: usize = f.parse("grid", "points", 256)?;
        let side: f64 = f.parse("grid", "side", 2.0 * std::f64::consts::PI)?;

        let d = StepperConfig::default();
        let stepper = StepperConfig {
            dt: f.parse("stepper", "dt", d.dt)?,
            t_end: f.parse("stepper", "t_end", d.t_end)?,
            sample_every: f.parse("stepper", "sample_every", d.sample_every)?,
            blowup_h1_factor: f.parse("stepper", "blowup_h1_factor", d.blowup_h1_factor)?,
            dealias: f.boolean("stepper", "dealias", d.dealias)?,
        };
        stepper.validate().or_else(|e| err(0, format!("stepper: {e}")))?;

        let (pname, pline) = f.string("data", "profile").unwrap_or(("gaussian".into(), 0));
        let (profile, scale) = parse_profile(&pname).or_else(|e| err(pline, format!("data.profile: {e}")))?;
        let amplitude = f.parse("data", "amplitude", 1.0)?;
        let data = DataSpec {
            profile,
            amplitude: scale.map_or(amplitude, |l| l * amplitude),
            width: f.parse("data", "width", 1.0)?,
            coefficients: f.list("data", "coefficients", Vec::new())?,
            mean_subtract: f.boolean("data", "mean_subtract", false)?,
            ground_state: f.string("data", "ground_state").map(|(s, _)| PathBuf::from(s)),
            noise: f.parse("data", "noise", 0.0)?,
        };
        if profile == Profile::Gaussian && !(data.width > 0.0) {
            return err(0, format!("data.width must be positive, got {}", data.width));
        }

        let morawetz_r: Vec<f64> = f.list("diagnostics", "morawetz_r", Vec::new())?;
        if let Some(r) = morawetz_r.iter().find(|&&r| !(r >= 1.0)) {
            return err(0, format!("diagnostics.morawetz_r: radii must be at least 1, got {r}"));
        }
        let (wp, wline) = f.string("diagnostics", "morawetz_profile").unwrap_or(("d3".into(), 0));
        let morawetz_profile =
            WeightProfile::parse(&wp).or_else(|e| err(wline, format!("diagnostics.morawetz_profile: {e}")))?;

        let csv = f.string("output", "csv").map(|(s, _)| PathBuf::from(s));
        let checkpoint = f.string("output", "checkpoint").map(|(s, _)| PathBuf::from(s));
        let seed = f.parse("run", "seed", 0u64)?;
        f.finish()?;
        Ok(RunConfig {
            params,
            dim,
            points,
            side,
            stepper,
            data,
            morawetz_r,
            morawetz_profile,
            csv,
            checkpoint,
            seed,
        })
    }

    pub fn load(path: &Path) -> Result<RunConfig, Box<dyn std::error::Error>> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(RunConfig::parse(&text)?)
    }

    /// Canonical text; `parse(to_text(c)) == c`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let p = &self.params;
        writeln!(s, "[model]").unwrap();
        let nl = match (p.nonlinearity(), p.is_linear()) {
            (Nonlinearity::Quadratic, _) => "quadratic",
            (_, true) => "none",
            _ => "power",
        };
        writeln!(s, "nonlinearity = {nl}").unwrap();
        writeln!(s, "alpha = {}", p.alpha()).unwrap();
        writeln!(s, "beta = {}", p.beta()).unwrap();
        writeln!(s, "\n[grid]\ndim = {}\npoints = {}\nside = {}", self.dim, self.points, self.side).unwrap();
        let st = &self.stepper;
        writeln!(
            s,
            "\n[stepper]\ndt = {}\nt_end = {}\nsample_every = {}\nblowup_h1_factor = {}\ndealias = {}",
            st.dt, st.t_end, st.sample_every, st.blowup_h1_factor, st.dealias
        )
        .unwrap();
        let d = &self.data;
        writeln!(s, "\n[data]\nprofile = {}\namplitude = {}\nwidth = {}", d.profile.name(), d.amplitude, d.width).unwrap();
        if !d.coefficients.is_empty() {
            writeln!(s, "coefficients = {}", join(&d.coefficients)).unwrap();
        }
        writeln!(s, "mean_subtract = {}\nnoise = {}", d.mean_subtract, d.noise).unwrap();
        if let Some(g) = &d.ground_state {
            writeln!(s, "ground_state = {}", g.display()).unwrap();
        }
        writeln!(s, "\n[diagnostics]").unwrap();
        if !self.morawetz_r.is_empty() {
            writeln!(s, "morawetz_r = {}", join(&self.morawetz_r)).unwrap();
        }
        writeln!(s, "morawetz_profile = {}", self.morawetz_profile.name()).unwrap();
        if self.csv.is_some() || self.checkpoint.is_some() {
            writeln!(s, "\n[output]").unwrap();
            if let Some(c) = &self.csv {
                writeln!(s, "csv = {}", c.display()).unwrap();
            }
            if let Some(c) = &self.checkpoint {
                writeln!(s, "checkpoint = {}", c.display()).unwrap();
            }
        }
        writeln!(s, "\n[run]\nseed = {}", self.seed).unwrap();
        s
    }
}

/// Sweep grid file: the same format, flat keys, lists comma-separated.
/// Profile name, with `ground_state_scaled(λ)` read as the ground state
/// times `λ`.
fn parse_profile(name: &str) -> gbq_core::Result<(Profile, Option<f64>)> {
    if let Some(arg) = name.strip_prefix("ground_state_scaled(").and_then(|r| r.strip_suffix(')')) {
        let l = arg
            .trim()
            .parse()
            .map_err(|_| gbq_core::Error::InvalidParameter(format!("bad scale {arg:?}")))?;
        return Ok((Profile::GroundState, Some(l)));
    }
    Ok((Profile::parse(name)?, None))
}

pub fn parse_sweep(text: &str) -> Res<SweepSpec> {
    let entries = tokenize(text)?;
    let mut f = Fields::new(&entries);
    let dim: usize = f.parse("grid", "dim", 1)?;
    let points: usize = f.parse("grid", "points", 1024)?;
    let side: f64 = f.parse("grid", "side", 160.0)?;
    let alphas = f.list("cells", "alpha", vec![3.0])?;
    let betas = f.list("cells", "beta", vec![-1i8])?;
    let profile_names: Vec<String> = f.list("cells", "profile", vec!["ground_state".to_string()])?;
    let profiles = profile_names
        .iter()
        .map(|p| Profile::parse(p).or_else(|e| err(0, format!("cells.profile: {e}"))))
        .collect::<Res<Vec<_>>>()?;
    let amplitudes = f.list("cells", "amplitude", Vec::<f64>::new())?;
    let width = f.parse("cells", "width", 1.0)?;
    let mean_subtract = f.boolean("cells", "mean_subtract", false)?;
    let confirm = f.boolean("run", "confirm", false)?;
    let dd = DichotomyConfig::default();
    let stepper = StepperConfig {
        dt: f.parse("run", "dt", dd.stepper.dt)?,
        t_end: f.parse("run", "t_end", dd.stepper.t_end)?,
        sample_every: f.parse("run", "sample_every", dd.stepper.sample_every)?,
        blowup_h1_factor: f.parse("run", "blowup_h1_factor", dd.stepper.blowup_h1_factor)?,
        dealias: true,
    };
    stepper.validate().or_else(|e| err(0, format!("run: {e}")))?;
    let dichotomy = DichotomyConfig {
        stepper,
        probe_time: f.parse("run", "probe_time", dd.probe_time)?,
        max_horizon: f.parse("run", "max_horizon", dd.max_horizon)?,
        ..dd
    };
    let po = PetviashviliOptions::default();
    let ground_state = PetviashviliOptions {
        tol: f.parse("ground_state", "tol", po.tol)?,
        max_iter: f.parse("ground_state", "max_iter", po.max_iter)?,
    };
    f.finish()?;
    Ok(SweepSpec {
        dim,
        points,
        side,
        alphas,
        betas,
        profiles,
        amplitudes,
        width,
        mean_subtract,
        confirm,
        dichotomy,
        jobs: 0,
        timing: false,
        ground_state,
    })
}
