//! The `bosonlab` command line.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};

use bosonlab_core::channel::{ChannelSpec, Environment};
use bosonlab_core::classical::{classical_summary, NoiseDensity};
use bosonlab_core::fock::{make_fock, DensityOperator, FockState};
use bosonlab_core::moe::{Ansatz, MoeParams};
use bosonlab_core::scan::{linspace, ScanPoint};
use bosonlab_core::wigner::{suggested_extent, WignerGrid};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::io::{read_json_arg, report_json, ChannelDoc, Format, Provenance, Table, Unit};
use crate::parallel;
use crate::LabError;

#[derive(Debug, Parser, Serialize)]
#[command(name = "bosonlab", version, about = "Capacity bounds and minimum output entropy of bosonic channels with non-Gaussian environments")]
pub struct Cli {
    /// Output format (default: json for `moe` and `classical`, csv otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Unit of every entropic quantity.
    #[arg(long, global = true, value_enum, default_value = "nats")]
    pub unit: Unit,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Width Δ of the capacity interval as a function of η.
    DeltaSweep(DeltaSweepArgs),
    /// Lower and upper capacity bounds over a grid of photon budgets.
    CapacityInterval(CapacityArgs),
    /// Minimum-output-entropy search.
    Moe(MoeArgs),
    /// Output entropy of rotated squeezed vacua over a (θ, r) grid.
    SqueezedScan(ScanArgs),
    /// Classical additive-noise channel: entropies and capacity sandwich.
    Classical(ClassicalArgs),
    /// Wigner function of a state or of a channel output.
    Wigner(WignerArgs),
}

/// Channel selection shared by several commands.
#[derive(Debug, Clone, Args, Serialize)]
pub struct ChannelArgs {
    /// Channel as inline JSON or a path to a JSON file.
    #[arg(long)]
    pub channel: Option<String>,
    /// Shorthand for an attenuator with Fock environment |n⟩.
    #[arg(long)]
    pub fock: Option<usize>,
    /// Transmissivity; overrides the value in `--channel`.
    #[arg(long)]
    pub eta: Option<f64>,
}

impl ChannelArgs {
    fn resolve(&self) -> Result<Option<ChannelSpec>, LabError> {
        match (&self.channel, self.fock) {
            (Some(_), Some(_)) => Err(LabError::Config("give either --channel or --fock, not both".into())),
            (Some(text), None) => {
                let mut doc: ChannelDoc = read_json_arg(text)?;
                if let Some(eta) = self.eta {
                    if doc.kind != "attenuator" {
                        return Err(LabError::Config("--eta only applies to attenuators".into()));
                    }
                    doc.eta = Some(eta);
                }
                Ok(Some(doc.to_spec()?))
            }
            (None, Some(n)) => Ok(Some(ChannelSpec::fock_attenuator(self.eta.unwrap_or(0.5), n)?)),
            (None, None) => Ok(None),
        }
    }

    fn require(&self) -> Result<ChannelSpec, LabError> {
        self.resolve()?
            .ok_or_else(|| LabError::Config("a channel is required (--channel JSON or --fock N)".into()))
    }
}

/// Search parameters, prefixed `--moe-`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct MoeFlags {
    /// Fock cutoff of the search space.
    #[arg(long = "moe-n-fock", default_value_t = MoeParams::default().n_fock)]
    pub n_fock: usize,
    /// Random seed states.
    #[arg(long = "moe-n-init", default_value_t = MoeParams::default().n_init)]
    pub n_init: usize,
    /// Step-halving stages.
    #[arg(long = "moe-n-loop", default_value_t = MoeParams::default().n_loop)]
    pub n_loop: usize,
    /// Perturbation trials per stage.
    #[arg(long = "moe-n-it", default_value_t = MoeParams::default().n_it)]
    pub n_it: usize,
    /// Initial perturbation size.
    #[arg(long = "moe-delta0", default_value_t = MoeParams::default().delta0)]
    pub delta0: f64,
    /// Independent restarts; the best one is reported.
    #[arg(long = "moe-restarts", default_value_t = 8)]
    pub restarts: usize,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl MoeFlags {
    fn params(&self) -> MoeParams {
        MoeParams {
            n_fock: self.n_fock,
            n_init: self.n_init,
            n_loop: self.n_loop,
            n_it: self.n_it,
            delta0: self.delta0,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct DeltaSweepArgs {
    /// Fock environments |n⟩ to sweep (ignored with --channel).
    #[arg(long = "fock-list", default_value = "1,2,3")]
    pub fock_list: String,
    /// Environment family given as a channel document; its η is replaced by the grid.
    #[arg(long)]
    pub channel: Option<String>,
    /// η grid: `a:b:n` or a comma list.
    #[arg(long, default_value = "0.05:0.95:19", allow_hyphen_values = true)]
    pub eta: String,
    /// Use the search instead of the vacuum output entropy for S_min.
    #[arg(long)]
    pub search: bool,
    #[command(flatten)]
    pub moe: MoeFlags,
}

#[derive(Debug, Args, Serialize)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Photon-budget grid: `a:b:n` or a comma list.
    #[arg(long = "nu-grid", default_value = "0:10:41", allow_hyphen_values = true)]
    pub nu_grid: String,
    /// Add Holevo-information estimates of the coherent ensemble.
    #[arg(long)]
    pub holevo: bool,
    /// Starting Gauss–Laguerre order for the Holevo estimate.
    #[arg(long = "holevo-order", default_value_t = 4)]
    pub holevo_order: usize,
    /// Use the search instead of the vacuum output entropy for S_min.
    #[arg(long)]
    pub search: bool,
    #[command(flatten)]
    pub moe: MoeFlags,
}

#[derive(Debug, Args, Serialize)]
pub struct MoeArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub moe: MoeFlags,
    /// Restrict to Σ c_k |m·k + p⟩ with this `m`.
    #[arg(long = "ansatz-m", requires = "ansatz_p")]
    pub ansatz_m: Option<usize>,
    #[arg(long = "ansatz-p", requires = "ansatz_m")]
    pub ansatz_p: Option<usize>,
    /// Also write the Wigner function of the centered best state as CSV.
    #[arg(long = "wigner-out")]
    pub wigner_out: Option<String>,
    #[arg(long = "wigner-resolution", default_value_t = 101)]
    pub wigner_resolution: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// θ grid; `pi` is accepted, e.g. `0:pi/3:25`.
    #[arg(long = "theta-grid", default_value = "0:pi/3:25", allow_hyphen_values = true)]
    pub theta_grid: String,
    #[arg(long = "r-grid", default_value = "0:1:50", allow_hyphen_values = true)]
    pub r_grid: String,
    /// Fock cutoff of the squeezed input; 60 keeps r ≤ 1 within the truncation limit.
    #[arg(long, default_value_t = 60)]
    pub cutoff: usize,
    /// Skip the golden-section refinement in r.
    #[arg(long = "no-refine")]
    pub no_refine: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Gaussian,
    Uniform,
    Laplace,
    Mixture,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassicalArgs {
    #[arg(long, value_enum, default_value = "uniform")]
    pub noise: NoiseKind,
    /// Noise variance (not used by `mixture`).
    #[arg(long, default_value_t = 1.0)]
    pub variance: f64,
    /// Mixture weights, comma separated.
    #[arg(long)]
    pub weights: Option<String>,
    /// Mixture component means.
    #[arg(long, allow_hyphen_values = true)]
    pub means: Option<String>,
    /// Mixture component variances.
    #[arg(long)]
    pub variances: Option<String>,
    /// Input power E.
    #[arg(long, default_value_t = 1.0)]
    pub energy: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct WignerArgs {
    /// State amplitudes as JSON `[[re, im], …]`, inline or a file.
    #[arg(long)]
    pub state: Option<String>,
    /// Fock state |n⟩.
    #[arg(long = "fock-state")]
    pub fock_state: Option<usize>,
    /// Send the state through this channel first.
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Half-width of the square grid (default from the mean photon number).
    #[arg(long)]
    pub extent: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub resolution: usize,
}

/// Parses one number, allowing `pi`, `k*pi`, `kpi`, `pi/d` and `k*pi/d`.
pub fn parse_number(s: &str) -> Result<f64, LabError> {
    let t = s.trim().to_ascii_lowercase();
    let bad = || LabError::Config(format!("cannot parse number `{s}`"));
    if let Some(pos) = t.find("pi") {
        let head = t[..pos].trim_end_matches('*').trim();
        let tail = t[pos + 2..].trim();
        let k = match head {
            "" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| bad())?,
        };
        let d = match tail.strip_prefix('/') {
            Some(d) => d.trim().parse::<f64>().map_err(|_| bad())?,
            None if tail.is_empty() => 1.0,
            None => return Err(bad()),
        };
        return Ok(k * PI / d);
    }
    t.parse::<f64>().map_err(|_| bad())
}

/// `a:b:n` (inclusive, `n` points) or a comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, LabError> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [a, b, n] => {
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| LabError::Config(format!("grid `{s}`: point count must be an integer")))?;
            linspace(parse_number(a)?, parse_number(b)?, n)
        }
        [_] => s.split(',').map(parse_number).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(LabError::Config(format!("grid `{s}` must be `a:b:n` or a comma list"))),
    };
    if grid.is_empty() {
        return Err(LabError::Config(format!("grid `{s}` is empty")));
    }
    Ok(grid)
}

fn parse_list(s: &Option<String>, what: &str) -> Result<Vec<f64>, LabError> {
    match s {
        Some(s) => s.split(',').map(parse_number).collect(),
        None => Err(LabError::Config(format!("mixture noise needs --{what}"))),
    }
}

/// A finished command: what to print and how.
pub enum Output {
    Table(Table),
    Json(Value),
}

impl Output {
    fn write<W: Write>(&self, out: &mut W, prov: &Provenance, format: Format) -> Result<(), LabError> {
        match self {
            Output::Table(t) => t.write(out, prov, format),
            Output::Json(v) => match format {
                Format::Json => {
                    let doc = json!({ "provenance": prov, "result": v });
                    serde_json::to_writer_pretty(&mut *out, &doc)?;
                    writeln!(out)?;
                    Ok(())
                }
                Format::Csv => {
                    let mut t = Table::new(&["key", "value"]);
                    t.rows.clear();
                    for line in prov.header_lines() {
                        writeln!(out, "{line}")?;
                    }
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["key", "value"])?;
                    if let Value::Object(map) = v {
                        for (k, val) in map {
                            w.write_record([k.as_str(), &val.to_string()])?;
                        }
                    }
                    w.flush()?;
                    Ok(())
                }
            },
        }
    }
}

fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::Moe(_) | Command::Classical(_) => Format::Json,
        _ => Format::Csv,
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::DeltaSweep(_) => "delta-sweep",
        Command::CapacityInterval(_) => "capacity-interval",
        Command::Moe(_) => "moe",
        Command::SqueezedScan(_) => "squeezed-scan",
        Command::Classical(_) => "classical",
        Command::Wigner(_) => "wigner",
    }
}

fn seed_of(cmd: &Command) -> Option<u64> {
    match cmd {
        Command::Moe(a) => Some(a.moe.seed),
        Command::DeltaSweep(a) if a.search => Some(a.moe.seed),
        Command::CapacityInterval(a) if a.search => Some(a.moe.seed),
        _ => None,
    }
}

/// Runs the command and returns its output without writing it.
pub fn execute(cli: &Cli) -> Result<(Output, Provenance), LabError> {
    let unit = cli.unit;
    let mut resolved = serde_json::to_value(cli)?;
    let output = match &cli.command {
        Command::DeltaSweep(a) => delta_sweep(a, unit, &mut resolved)?,
        Command::CapacityInterval(a) => capacity(a, unit, &mut resolved)?,
        Command::Moe(a) => moe(a, unit, &mut resolved)?,
        Command::SqueezedScan(a) => scan(a, unit, &mut resolved)?,
        Command::Classical(a) => classical(a, unit)?,
        Command::Wigner(a) => wigner(a, &mut resolved)?,
    };
    let prov = Provenance::new(command_name(&cli.command), resolved, seed_of(&cli.command));
    Ok((output, prov))
}

pub fn run(cli: &Cli) -> Result<(), LabError> {
    let (output, prov) = execute(cli)?;
    let format = cli.format.unwrap_or_else(|| default_format(&cli.command));
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            output.write(&mut w, &prov, format)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            output.write(&mut w, &prov, format)?;
        }
    }
    Ok(())
}

fn record_channel(resolved: &mut Value, spec: &ChannelSpec) {
    resolved["resolved_channel"] = serde_json::to_value(ChannelDoc::from_spec(spec)).unwrap_or(Value::Null);
}

fn delta_sweep(a: &DeltaSweepArgs, unit: Unit, resolved: &mut Value) -> Result<Output, LabError> {
    let etas = parse_grid(&a.eta)?;
    if etas.iter().any(|e| !(0.0..=1.0).contains(e)) {
        return Err(LabError::Config("η grid must lie in [0, 1]".into()));
    }
    let family: Vec<(f64, Environment)> = match &a.channel {
        Some(text) => {
            let doc: ChannelDoc = read_json_arg(text)?;
            let env = doc.environment.to_environment()?;
            vec![(env.mean_photon_number(), env)]
        }
        None => a
            .fock_list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map(|n| (n as f64, Environment::Fock(n)))
                    .map_err(|_| LabError::Config(format!("--fock-list entry `{s}` is not an integer")))
            })
            .collect::<Result<_, _>>()?,
    };
    let mut channels = Vec::new();
    let mut keys = Vec::new();
    for (param, env) in &family {
        for &eta in &etas {
            channels.push(ChannelSpec::attenuator(eta, env.clone())?);
            keys.push((eta, *param));
        }
    }
    let search = a.search.then(|| (a.moe.params(), a.moe.restarts));
    let deltas = parallel::delta_sweep(&channels, search)?;
    let mut t = Table::new(&["eta", "n", "delta", "s_min_gaussian", "s_min"]);
    t.notes.push(format!(
        "n is the environment mean photon number; entropies in {}; S_min from {}",
        unit.suffix(),
        if a.search { "the search" } else { "the vacuum output (conjecture-based)" }
    ));
    for ((eta, n), d) in keys.iter().zip(&deltas) {
        t.push(vec![*eta, *n, unit.convert(d.value), unit.convert(d.s_min_gaussian), unit.convert(d.s_min)]);
    }
    resolved["eta_grid"] = json!(etas);
    Ok(Output::Table(t))
}

fn capacity(a: &CapacityArgs, unit: Unit, resolved: &mut Value) -> Result<Output, LabError> {
    let spec = a.channel.require()?;
    record_channel(resolved, &spec);
    let nus = parse_grid(&a.nu_grid)?;
    let s_min = if a.search {
        let report = parallel::moe_restarts(&spec, a.moe.params(), Ansatz::Full, a.moe.restarts)?;
        report.best_entropy.min(spec.vacuum_output_entropy()?)
    } else {
        spec.vacuum_output_entropy()?
    };
    let rows = parallel::capacity_rows(&spec, &nus, s_min, a.holevo.then_some(a.holevo_order))?;
    let mut cols = vec!["nu", "lower", "upper", "delta", "low_energy"];
    if a.holevo {
        cols.extend(["chi", "chi_error"]);
    }
    let mut t = Table::new(&cols);
    t.notes.push(format!(
        "entropic columns in {}; low_energy = 1 where the lower bound is below the interval width",
        unit.suffix()
    ));
    for (iv, chi) in rows {
        let mut row = vec![
            iv.nu,
            unit.convert(iv.c_gaussian),
            unit.convert(iv.upper),
            unit.convert(iv.delta),
            if iv.low_energy { 1.0 } else { 0.0 },
        ];
        if let Some(h) = chi {
            row.push(unit.convert(h.value));
            row.push(unit.convert(h.error));
        }
        t.push(row);
    }
    Ok(Output::Table(t))
}

fn moe(a: &MoeArgs, unit: Unit, resolved: &mut Value) -> Result<Output, LabError> {
    let spec = a.channel.require()?;
    record_channel(resolved, &spec);
    let ansatz = match (a.ansatz_m, a.ansatz_p) {
        (Some(m), Some(p)) => Ansatz::Symmetric { m, p },
        _ => Ansatz::Full,
    };
    let report = parallel::moe_restarts(&spec, a.moe.params(), ansatz, a.moe.restarts)?;
    if let Some(path) = &a.wigner_out {
        let rho = report.centered_state.to_density();
        let extent = suggested_extent(rho.mean_photon_number());
        let grid = parallel::wigner_grid(&rho, extent, a.wigner_resolution)?;
        let prov = Provenance::new(
            "moe/wigner",
            json!({ "extent": extent, "resolution": a.wigner_resolution, "state": "centered best state" }),
            Some(a.moe.seed),
        );
        let mut w = BufWriter::new(File::create(path)?);
        wigner_table(&grid).write_csv(&mut w, &prov)?;
        w.flush()?;
    }
    Ok(Output::Json(report_json(&report, unit)))
}

fn point_json(p: &ScanPoint, unit: Unit) -> Value {
    json!({ "theta": p.theta, "r": p.r, "s_out": unit.convert(p.entropy) })
}

fn scan(a: &ScanArgs, unit: Unit, resolved: &mut Value) -> Result<Output, LabError> {
    let spec = a.channel.require()?;
    record_channel(resolved, &spec);
    let thetas = parse_grid(&a.theta_grid)?;
    let rs = parse_grid(&a.r_grid)?;
    let res = parallel::squeezed_scan(&spec, &thetas, &rs, a.cutoff, !a.no_refine)?;
    let mut t = Table::new(&["theta", "r", "s_out"]);
    for p in &res.table {
        t.push(vec![p.theta, p.r, unit.convert(p.entropy)]);
    }
    t.notes.push(format!("s_out in {}", unit.suffix()));
    t.notes.push(format!("argmin: {}", point_json(&res.argmin, unit)));
    if let Some(p) = &res.refined {
        t.notes.push(format!("refined: {}", point_json(p, unit)));
    }
    Ok(Output::Table(t))
}

fn classical(a: &ClassicalArgs, unit: Unit) -> Result<Output, LabError> {
    let noise = match a.noise {
        NoiseKind::Gaussian => NoiseDensity::gaussian(a.variance)?,
        NoiseKind::Uniform => NoiseDensity::uniform(a.variance)?,
        NoiseKind::Laplace => NoiseDensity::laplace(a.variance)?,
        NoiseKind::Mixture => NoiseDensity::gaussian_mixture(
            &parse_list(&a.weights, "weights")?,
            &parse_list(&a.means, "means")?,
            &parse_list(&a.variances, "variances")?,
        )?,
    };
    let s = classical_summary(&noise, a.energy)?;
    Ok(Output::Json(json!({
        "unit": unit.suffix(),
        "noise": noise.name(),
        "variance": noise.variance(),
        "energy": a.energy,
        "h_N": unit.convert(s.h_n),
        "h_NG": unit.convert(s.h_ng),
        "delta_cl": unit.convert(s.delta_cl),
        "C_G": unit.convert(s.c_gaussian),
        "I_lower": unit.convert(s.mutual_information),
    })))
}

fn wigner_table(grid: &WignerGrid) -> Table {
    let mut t = Table::new(&["x", "p", "w"]);
    for (i, &x) in grid.x_axis.iter().enumerate() {
        for (j, &p) in grid.p_axis.iter().enumerate() {
            t.push(vec![x, p, grid.values[(i, j)]]);
        }
    }
    t
}

fn wigner(a: &WignerArgs, resolved: &mut Value) -> Result<Output, LabError> {
    let psi = match (&a.state, a.fock_state) {
        (Some(text), None) => {
            let body = if text.trim_start().starts_with('[') {
                text.clone()
            } else {
                std::fs::read_to_string(text).map_err(|e| LabError::Config(format!("cannot read `{text}`: {e}")))?
            };
            let pairs: Vec<[f64; 2]> = serde_json::from_str(&body)
                .map_err(|e| LabError::Config(format!("state must be a list of [re, im] pairs: {e}")))?;
            crate::io::state_from_pairs(&pairs)?
        }
        (None, Some(n)) => make_fock(n, n)?,
        _ => return Err(LabError::Config("give exactly one of --state or --fock-state".into())),
    };
    let rho: DensityOperator = match a.channel.resolve()? {
        Some(spec) => {
            record_channel(resolved, &spec);
            spec.apply(&psi.to_density())?
        }
        None => FockState::to_density(&psi),
    };
    let extent = a.extent.unwrap_or_else(|| suggested_extent(rho.mean_photon_number()));
    resolved["resolved_extent"] = json!(extent);
    let grid = parallel::wigner_grid(&rho, extent, a.resolution)?;
    let mut t = wigner_table(&grid);
    t.notes.push(format!("integral: {}", grid.integral()));
    Ok(Output::Table(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_with_pi() {
        assert_eq!(parse_number("pi/3").unwrap(), PI / 3.0);
        assert_eq!(parse_number("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_number("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_number("-pi").unwrap(), -PI);
        assert_eq!(parse_number("0.25").unwrap(), 0.25);
        assert!(parse_number("pie").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.1, 0.2").unwrap(), vec![0.1, 0.2]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }
}
