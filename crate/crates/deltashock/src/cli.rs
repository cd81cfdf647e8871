//! Configuration parsing and the report-writing front end.
//!
//! One JSON configuration file drives every subcommand; each block has
//! defaults matching the bundled sample case, and unknown keys are
//! rejected. Reports are written as CSV (full double precision, fixed
//! column sets) and JSON; every JSON report is read back and re-parsed
//! after writing, so an emitted file that does not round-trip is a bug
//! caught immediately.
//!
//! Exit codes: `0` success, `1` configuration or validation error,
//! `2` numerical failure (diagnostics on standard error).

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fv::{self, Grid1D};
use crate::model::{ModelParams, State};
use crate::ode::IntegratorConfig;
use crate::profile::{
    self, Chart, ProfileResult, ProfileSample, ScanMode, ShootConfig, ShootingParams,
};
use crate::riemann::{self, RiemannData};
use crate::singular::{self, SkeletonOptions};
use crate::weak_limit;

/// Numerical laboratory for singular shocks in a two-phase flow model.
#[derive(Debug, Parser)]
#[command(name = "deltashock", version, about)]
pub struct Cli {
    /// JSON run configuration; the built-in sample case when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Directory for CSV/JSON reports.
    #[arg(long, global = true, env = "OUT_DIR", default_value = "out")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shock quantities, hypothesis verdicts, and region samples.
    Classify,
    /// Zero-viscosity skeleton: connecting trajectories and slow ramps.
    Configure,
    /// One viscous profile at a fixed eps.
    Profile {
        /// Overrides the configured eps.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Profiles over a decreasing eps list plus growth-rate extrapolation.
    Sweep {
        /// Overrides the configured list, e.g. `--eps-list 0.1,0.05,0.02`.
        #[arg(long, value_delimiter = ',')]
        eps_list: Option<Vec<f64>>,
    },
    /// Lax-Friedrichs run on the conservation-law form.
    Lf,
    /// Weak-limit report for a stored profile.
    Pair {
        /// Profile metadata JSON written by `profile` (defaults to
        /// `<out-dir>/profile_meta.json`).
        #[arg(long)]
        profile: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelBlock,
    pub riemann: RiemannBlock,
    #[serde(default)]
    pub classify: ClassifyBlock,
    #[serde(default)]
    pub configure: ConfigureBlock,
    #[serde(default)]
    pub profile: ProfileBlock,
    #[serde(default)]
    pub sweep: SweepBlock,
    #[serde(default)]
    pub lf: LfBlock,
    #[serde(default)]
    pub pair: PairBlock,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    pub rho1: f64,
    pub rho2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiemannBlock {
    pub beta_left: f64,
    pub v_left: f64,
    pub beta_right: f64,
    pub v_right: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifyBlock {
    /// Curve samples across the region.
    pub n_samples: usize,
    /// `|s|` threshold of the structural sufficient condition.
    pub s_max: f64,
}

impl Default for ClassifyBlock {
    fn default() -> Self {
        ClassifyBlock {
            n_samples: 400,
            s_max: riemann::DEFAULT_S_MAX,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigureBlock {
    pub endpoint_tol: f64,
    pub seed_offset: f64,
}

impl Default for ConfigureBlock {
    fn default() -> Self {
        let d = SkeletonOptions::default();
        ConfigureBlock {
            endpoint_tol: d.endpoint_tol,
            seed_offset: d.seed_offset,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProfileBlock {
    pub eps: f64,
    /// Window start; chosen from eps when absent.
    pub xi_start: Option<f64>,
    /// Window end; chosen from eps when absent.
    pub xi_end: Option<f64>,
    pub v_switch: f64,
    pub delta_seed: f64,
    pub profile_tol: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Section level for spike crossings.
    pub r0: f64,
    pub theta_scan: usize,
}

impl Default for ProfileBlock {
    fn default() -> Self {
        ProfileBlock {
            eps: 0.1,
            xi_start: None,
            xi_end: None,
            v_switch: 10.0,
            delta_seed: 1e-4,
            profile_tol: 1e-6,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            r0: 0.1,
            theta_scan: 16,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepBlock {
    pub eps_list: Vec<f64>,
}

impl Default for SweepBlock {
    fn default() -> Self {
        SweepBlock {
            eps_list: vec![0.1, 0.05, 0.02, 0.01],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LfBlock {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub cfl: f64,
    pub n_steps: usize,
    pub record_every: usize,
}

impl Default for LfBlock {
    fn default() -> Self {
        LfBlock {
            x_min: -1.0,
            x_max: 1.0,
            n_cells: 400,
            cfl: 0.05,
            n_steps: 20_000,
            record_every: 100,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PairBlock {
    pub r0: f64,
}

impl Default for PairBlock {
    fn default() -> Self {
        PairBlock { r0: 0.1 }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelBlock {
                rho1: 2.0,
                rho2: 1.0,
            },
            riemann: RiemannBlock {
                beta_left: 1.9,
                v_left: 1.0,
                beta_right: 1.1,
                v_right: 1.1 / 1.9,
            },
            classify: ClassifyBlock::default(),
            configure: ConfigureBlock::default(),
            profile: ProfileBlock::default(),
            sweep: SweepBlock::default(),
            lf: LfBlock::default(),
            pair: PairBlock::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| {
            Error::InvalidInput(format!(
                "{}: line {}, column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })?;
        Ok(cfg)
    }

    /// Validates the physical blocks and returns the typed pair.
    pub fn validated(&self) -> Result<(ModelParams, RiemannData)> {
        let p = ModelParams::new(self.model.rho1, self.model.rho2)?;
        let rd = RiemannData::new(
            State::new(self.riemann.beta_left, self.riemann.v_left),
            State::new(self.riemann.beta_right, self.riemann.v_right),
        );
        for (name, beta) in [("beta_left", rd.left.beta), ("beta_right", rd.right.beta)] {
            if !p.in_strip(beta) {
                return Err(Error::InvalidInput(format!(
                    "riemann.{name} = {beta} outside the physical strip [{}, {}]",
                    p.rho2, p.rho1
                )));
            }
        }
        for (name, v) in [("v_left", rd.left.v), ("v_right", rd.right.v)] {
            if v <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "riemann.{name} = {v} must be positive (the implemented sign convention)"
                )));
            }
        }
        if rd.left.beta == rd.right.beta {
            return Err(Error::InvalidInput(
                "riemann.beta_left == riemann.beta_right: the shock speed denominator \
                 vanishes and no shock construction applies"
                    .into(),
            ));
        }
        Ok((p, rd))
    }

    fn shoot_config(&self) -> ShootConfig {
        ShootConfig {
            integrator: IntegratorConfig::with_tols(self.profile.rel_tol, self.profile.abs_tol),
            profile_tol: self.profile.profile_tol,
            r0: self.profile.r0,
            scan: ScanMode::Global(self.profile.theta_scan),
            ..ShootConfig::default()
        }
    }

    fn shooting_params(
        &self,
        sq: &crate::riemann::ShockQuantities,
        rd: &RiemannData,
        p: &ModelParams,
        eps: f64,
    ) -> ShootingParams {
        let mut sp = ShootingParams::suggested(sq, rd, p, eps);
        if let Some(x) = self.profile.xi_start {
            sp.xi_start = x;
            sp.alpha = x - sq.s;
        }
        if let Some(x) = self.profile.xi_end {
            sp.xi_end = x;
        }
        sp.v_switch = self.profile.v_switch;
        sp.delta_seed = self.profile.delta_seed;
        sp
    }
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Parses `args` and runs; returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/version through this path.
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParams { .. }
        | Error::InvalidInput(_)
        | Error::DegenerateData
        | Error::DimensionMismatch { .. }
        | Error::Io(_)
        | Error::Json(_) => 1,
        _ => 2,
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    fs::create_dir_all(&cli.out_dir)?;
    match &cli.command {
        Command::Classify => classify(&cfg, &cli.out_dir),
        Command::Configure => configure(&cfg, &cli.out_dir),
        Command::Profile { eps } => run_profile(&cfg, &cli.out_dir, *eps),
        Command::Sweep { eps_list } => run_sweep(&cfg, &cli.out_dir, eps_list.clone()),
        Command::Lf => run_lf(&cfg, &cli.out_dir),
        Command::Pair { profile } => run_pair(&cfg, &cli.out_dir, profile.clone()),
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a JSON report, then reads it back and re-parses it into the
/// same type; emitting a non-round-tripping report is a hard error.
fn write_json<T: Serialize + DeserializeOwned>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, &text)?;
    let back = fs::read_to_string(path)?;
    let _: T = serde_json::from_str(&back)?;
    Ok(())
}

fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> Result<()> {
    let mut out = String::with_capacity(rows.len() * 24 * header.split(',').count());
    out.push_str(header);
    out.push('\n');
    let n_cols = header.split(',').count();
    for row in rows {
        debug_assert_eq!(row.len(), n_cols);
        let mut first = true;
        for x in row {
            if !first {
                out.push(',');
            }
            out.push_str(&fmt(*x));
            first = false;
        }
        out.push('\n');
    }
    let mut f = fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct ClassifyReport {
    s: f64,
    w_left: [f64; 2],
    w_right: [f64; 2],
    e0: f64,
    h1: bool,
    h2: bool,
    h3_structural: bool,
    in_overcompressive_region: bool,
    boundary_signs: bool,
    spacetime_delta_coefficient: f64,
}

fn classify(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let (p, rd) = cfg.validated()?;
    let sq = riemann::shock_quantities(&rd, &p)?;
    let report = ClassifyReport {
        s: sq.s,
        w_left: sq.w_left,
        w_right: sq.w_right,
        e0: sq.e0,
        h1: riemann::check_h1(&rd, &p),
        h2: riemann::check_h2(&rd, &p),
        h3_structural: riemann::check_h3_sufficient(&rd, &sq, &p, cfg.classify.s_max),
        in_overcompressive_region: riemann::in_overcompressive_region(&rd, &p),
        boundary_signs: riemann::boundary_sign_check(&sq, &p),
        spacetime_delta_coefficient: weak_limit::spacetime_delta_coefficient(&sq),
    };
    write_json(&out_dir.join("classify.json"), &report)?;

    let (left_char, right_char) = riemann::oc_boundary_curves(rd.left, &p, cfg.classify.n_samples)?;
    let rows: Vec<Vec<f64>> = left_char
        .beta
        .iter()
        .zip(left_char.v.iter().zip(&right_char.v))
        .map(|(&beta, (vl, vr))| {
            vec![
                beta,
                vl.unwrap_or(f64::NAN),
                vr.unwrap_or(f64::NAN),
            ]
        })
        .collect();
    write_csv(
        &out_dir.join("oc_region.csv"),
        "beta,v_left_char,v_right_char",
        &rows,
    )?;

    println!("shock speed          s   = {}", report.s);
    println!(
        "left invariants      w_L = ({}, {})",
        report.w_left[0], report.w_left[1]
    );
    println!(
        "right invariants     w_R = ({}, {})",
        report.w_right[0], report.w_right[1]
    );
    println!("deficit              e0  = {}", report.e0);
    println!(
        "over-compression H1 = {}, deficit H2 = {}, structural H3 = {}",
        report.h1, report.h2, report.h3_structural
    );
    println!(
        "region membership = {}, boundary signs = {}",
        report.in_overcompressive_region, report.boundary_signs
    );
    println!(
        "reports: {} and {}",
        out_dir.join("classify.json").display(),
        out_dir.join("oc_region.csv").display()
    );
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct ConfigureReport {
    tau10: f64,
    tau20: f64,
    w20: f64,
    kappa0: f64,
    warnings: Vec<String>,
    h3_verified: bool,
    gamma1_residual: f64,
    gamma2_residual: f64,
    max_junction_gap: f64,
    max_kappa: f64,
    theta1_increasing: bool,
    theta2_decreasing: bool,
    min_divergence: f64,
}

fn configure(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let (p, rd) = cfg.validated()?;
    let sq = riemann::shock_quantities(&rd, &p)?;
    let opts = SkeletonOptions {
        endpoint_tol: cfg.configure.endpoint_tol,
        seed_offset: cfg.configure.seed_offset,
        ..SkeletonOptions::default()
    };
    let h3 = singular::check_h3(&sq, &rd, &p, &opts)?;
    let config = singular::build_configuration(&sq, &rd, &p, &opts)?;

    for (name, pts) in config.pieces() {
        let rows: Vec<Vec<f64>> = pts
            .iter()
            .map(|pt| vec![pt.beta, pt.r, pt.w1, pt.w2, pt.xi, pt.kappa])
            .collect();
        write_csv(
            &out_dir.join(format!("{name}.csv")),
            "beta,r,w1,w2,xi,kappa",
            &rows,
        )?;
    }
    let report = ConfigureReport {
        tau10: config.slow.tau10,
        tau20: config.slow.tau20,
        w20: config.slow.w20,
        kappa0: config.slow.kappa0,
        warnings: config.slow.warnings.clone(),
        h3_verified: config.h3_verified,
        gamma1_residual: config.gamma1_residual,
        gamma2_residual: config.gamma2_residual,
        max_junction_gap: config.max_junction_gap,
        max_kappa: config.max_kappa(),
        theta1_increasing: h3.theta1_increasing,
        theta2_decreasing: h3.theta2_decreasing,
        min_divergence: h3.min_divergence,
    };
    write_json(&out_dir.join("slow_quantities.json"), &report)?;

    println!(
        "ramp durations tau10 = {}, tau20 = {}",
        report.tau10, report.tau20
    );
    println!("matched level  w20   = {}", report.w20);
    println!("peak level     kappa0 = {}", report.kappa0);
    println!(
        "connections verified = {} (residuals {:.3e}, {:.3e})",
        report.h3_verified, report.gamma1_residual, report.gamma2_residual
    );
    for w in &report.warnings {
        println!("warning: {w}");
    }
    println!(
        "skeleton CSVs and slow_quantities.json written to {}",
        out_dir.display()
    );
    Ok(())
}

/// Metadata written beside a profile CSV; enough to reconstruct the
/// weak-limit analysis without the compact-chart clock samples.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub eps: f64,
    pub s: f64,
    pub alpha: f64,
    pub theta: f64,
    pub residual: f64,
    pub max_eps_log_v: f64,
    pub r_min: f64,
    pub r0: f64,
    pub v_switch: f64,
    pub crossings: Option<profile::CrossingPair>,
    pub kappa_switch_drift: f64,
    pub evals: usize,
    pub e0: f64,
}

fn profile_rows(pr: &ProfileResult) -> Vec<Vec<f64>> {
    pr.samples
        .iter()
        .map(|s| {
            vec![
                s.xi,
                s.beta,
                s.v,
                s.r,
                s.kappa,
                s.w1,
                s.w2,
                pr.x2(s),
            ]
        })
        .collect()
}

const PROFILE_CSV_HEADER: &str = "xi,beta,v,r,kappa,w1,w2,x2";

fn run_profile(cfg: &RunConfig, out_dir: &Path, eps_override: Option<f64>) -> Result<()> {
    let (p, rd) = cfg.validated()?;
    let sq = riemann::shock_quantities(&rd, &p)?;
    let eps = eps_override.unwrap_or(cfg.profile.eps);
    let sp = cfg.shooting_params(&sq, &rd, &p, eps);
    let shoot_cfg = cfg.shoot_config();
    let pr = profile::shoot(&rd, eps, &sp, &shoot_cfg, &p)?;

    write_csv(&out_dir.join("profile.csv"), PROFILE_CSV_HEADER, &profile_rows(&pr))?;
    let meta = ProfileMeta {
        eps: pr.eps,
        s: pr.s,
        alpha: pr.alpha,
        theta: pr.theta,
        residual: pr.residual,
        max_eps_log_v: pr.max_eps_log_v,
        r_min: pr.r_min,
        r0: pr.r0,
        v_switch: pr.v_switch,
        crossings: pr.crossings,
        kappa_switch_drift: pr.kappa_switch_drift,
        evals: pr.evals,
        e0: sq.e0,
    };
    write_json(&out_dir.join("profile_meta.json"), &meta)?;

    println!("eps = {eps}: residual {:.3e} after {} evaluations", pr.residual, pr.evals);
    println!(
        "max eps log v = {} (r_min = {:.6e})",
        pr.max_eps_log_v, pr.r_min
    );
    if let Some(c) = pr.crossings {
        println!(
            "spike crossings at r = {}: xi_in = {}, xi_out = {}",
            pr.r0, c.xi_in, c.xi_out
        );
    } else {
        println!("spike does not reach the r = {} section at this eps", pr.r0);
    }
    println!(
        "wrote {} and {}",
        out_dir.join("profile.csv").display(),
        out_dir.join("profile_meta.json").display()
    );
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct SweepMemberReport {
    eps: f64,
    residual: Option<f64>,
    max_eps_log_v: Option<f64>,
    r_min: Option<f64>,
    xi_in: Option<f64>,
    xi_out: Option<f64>,
    error: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SweepSummary {
    members: Vec<SweepMemberReport>,
    extrapolated: Option<f64>,
    candidate_matching: f64,
    candidate_quoted: f64,
    verdict: String,
    rel_tol: f64,
}

fn run_sweep(cfg: &RunConfig, out_dir: &Path, eps_override: Option<Vec<f64>>) -> Result<()> {
    let (p, rd) = cfg.validated()?;
    let eps_list = eps_override.unwrap_or_else(|| cfg.sweep.eps_list.clone());
    let shoot_cfg = cfg.shoot_config();
    let report = profile::sweep(&rd, &eps_list, &shoot_cfg, &p)?;

    let mut rows = Vec::new();
    let mut members = Vec::new();
    for m in &report.members {
        match &m.profile {
            Some(pr) => {
                write_csv(
                    &out_dir.join(format!("profile_eps{}.csv", m.eps)),
                    PROFILE_CSV_HEADER,
                    &profile_rows(pr),
                )?;
                rows.push(vec![
                    m.eps,
                    pr.max_eps_log_v,
                    pr.residual,
                    pr.r_min,
                    pr.crossings.map(|c| c.xi_in).unwrap_or(f64::NAN),
                    pr.crossings.map(|c| c.xi_out).unwrap_or(f64::NAN),
                ]);
                members.push(SweepMemberReport {
                    eps: m.eps,
                    residual: Some(pr.residual),
                    max_eps_log_v: Some(pr.max_eps_log_v),
                    r_min: Some(pr.r_min),
                    xi_in: pr.crossings.map(|c| c.xi_in),
                    xi_out: pr.crossings.map(|c| c.xi_out),
                    error: None,
                });
            }
            None => members.push(SweepMemberReport {
                eps: m.eps,
                residual: None,
                max_eps_log_v: None,
                r_min: None,
                xi_in: None,
                xi_out: None,
                error: m.error.clone(),
            }),
        }
    }
    write_csv(
        &out_dir.join("sweep.csv"),
        "eps,max_eps_log_v,residual,r_min,xi_in,xi_out",
        &rows,
    )?;
    let summary = SweepSummary {
        members,
        extrapolated: report.extrapolated,
        candidate_matching: report.candidate_matching,
        candidate_quoted: report.candidate_quoted,
        verdict: format!("{:?}", report.verdict),
        rel_tol: report.rel_tol,
    };
    write_json(&out_dir.join("sweep.json"), &summary)?;

    for m in &report.members {
        match &m.profile {
            Some(pr) => println!(
                "eps = {:<6} max eps log v = {:.10}  residual {:.3e}",
                m.eps, pr.max_eps_log_v, pr.residual
            ),
            None => println!("eps = {:<6} FAILED: {}", m.eps, m.error.as_deref().unwrap_or("?")),
        }
    }
    match report.extrapolated {
        Some(a) => {
            println!("extrapolated growth rate (eps -> 0): {a:.10}");
            println!(
                "candidates: matching-conditions kappa0 = {:.10}, quoted coefficient = {:.10}",
                report.candidate_matching, report.candidate_quoted
            );
            println!("verdict: {:?} (within {:.0}%)", report.verdict, 100.0 * report.rel_tol);
        }
        None => println!("not enough successful members to extrapolate"),
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct LfReport {
    n_cells: usize,
    cfl: f64,
    n_steps: usize,
    final_time: f64,
    max_v_final: f64,
    delta_estimate: f64,
    e0: f64,
    blow_up_step: Option<usize>,
    max_centroid_offset_after_transient: f64,
}

fn run_lf(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let (p, rd) = cfg.validated()?;
    let sq = riemann::shock_quantities(&rd, &p)?;
    let grid = Grid1D::new(cfg.lf.x_min, cfg.lf.x_max, cfg.lf.n_cells)?;
    let result = fv::run(&rd, &p, grid, cfg.lf.cfl, cfg.lf.n_steps, cfg.lf.record_every)?;

    let s = &result.series;
    let rows: Vec<Vec<f64>> = (0..s.step.len())
        .map(|i| {
            vec![
                s.step[i] as f64,
                s.t[i],
                s.max_v[i],
                s.min_beta[i],
                s.max_beta[i],
                s.total_beta[i],
                s.total_v[i],
                s.centroid_offset[i],
            ]
        })
        .collect();
    write_csv(
        &out_dir.join("lf_series.csv"),
        "step,t,max_v,min_beta,max_beta,total_beta,total_v,centroid_offset",
        &rows,
    )?;
    let final_rows: Vec<Vec<f64>> = result
        .final_state
        .u
        .iter()
        .enumerate()
        .map(|(j, u)| vec![result.final_state.grid.center(j), u[0], u[1]])
        .collect();
    write_csv(&out_dir.join("lf_final.csv"), "x,beta,v", &final_rows)?;

    let transient = cfg.lf.n_steps / 10;
    let max_offset = s
        .step
        .iter()
        .zip(&s.centroid_offset)
        .filter(|(st, _)| **st >= transient)
        .map(|(_, c)| c.abs())
        .fold(0.0f64, f64::max);
    let report = LfReport {
        n_cells: cfg.lf.n_cells,
        cfl: cfg.lf.cfl,
        n_steps: cfg.lf.n_steps,
        final_time: result.final_state.t,
        max_v_final: *s.max_v.last().unwrap(),
        delta_estimate: fv::delta_estimate(&result.final_state, &sq, &rd),
        e0: sq.e0,
        blow_up_step: result.blow_up_step,
        max_centroid_offset_after_transient: max_offset,
    };
    write_json(&out_dir.join("lf.json"), &report)?;

    println!(
        "{} steps on {} cells (cfl {}): max v {} at t = {}",
        report.n_steps, report.n_cells, report.cfl, report.max_v_final, report.final_time
    );
    println!(
        "delta-strength estimate {} vs e0 = {}",
        report.delta_estimate, report.e0
    );
    if let Some(step) = report.blow_up_step {
        println!("run blew up at step {step} (history intact)");
    }
    println!(
        "wrote lf_series.csv, lf_final.csv, lf.json to {}",
        out_dir.display()
    );
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct PairReport {
    r0: f64,
    xi_in: f64,
    xi_out: f64,
    delta_strength: f64,
    delta_strength_clock: Option<f64>,
    delta_strength_quadrature: Option<f64>,
    e0: f64,
    relative_gap_to_e0: f64,
    beta_inner: f64,
    outer_l1_left: f64,
    outer_l1_right: f64,
    tail_left: f64,
    tail_right: f64,
    pairing_errors: Vec<weak_limit::PairingError>,
}

fn run_pair(cfg: &RunConfig, out_dir: &Path, meta_path: Option<PathBuf>) -> Result<()> {
    let (p, rd) = cfg.validated()?;
    let sq = riemann::shock_quantities(&rd, &p)?;
    let meta_path = meta_path.unwrap_or_else(|| out_dir.join("profile_meta.json"));
    let meta: ProfileMeta = serde_json::from_str(&fs::read_to_string(&meta_path)?)?;
    let csv_path = meta_path.with_file_name(
        meta_path
            .file_name()
            .map(|n| {
                n.to_string_lossy()
                    .replace("_meta.json", ".csv")
                    .replace(".json", ".csv")
            })
            .unwrap_or_else(|| "profile.csv".into()),
    );
    let pr = load_profile(&csv_path, &meta)?;
    let report = weak_limit::analyze(&pr, &sq, cfg.pair.r0)?;
    let pair_report = PairReport {
        r0: report.r0,
        xi_in: report.xi_in,
        xi_out: report.xi_out,
        delta_strength: report.delta_strength,
        delta_strength_clock: report.delta_strength_clock,
        delta_strength_quadrature: report.delta_strength_quadrature,
        e0: sq.e0,
        relative_gap_to_e0: (report.delta_strength - sq.e0).abs() / sq.e0.abs(),
        beta_inner: report.beta_inner,
        outer_l1_left: report.outer_l1_left,
        outer_l1_right: report.outer_l1_right,
        tail_left: report.tail_left,
        tail_right: report.tail_right,
        pairing_errors: report.pairing_errors,
    };
    write_json(&out_dir.join("pair.json"), &pair_report)?;

    println!(
        "inner v-integral over [{}, {}] = {} (e0 = {}, relative gap {:.3e})",
        pair_report.xi_in,
        pair_report.xi_out,
        pair_report.delta_strength,
        sq.e0,
        pair_report.relative_gap_to_e0
    );
    println!(
        "outer L1: left {:.6e}, right {:.6e} (tails ~ {:.1e}, {:.1e})",
        pair_report.outer_l1_left,
        pair_report.outer_l1_right,
        pair_report.tail_left,
        pair_report.tail_right
    );
    for pe in &pair_report.pairing_errors {
        println!("pairing [{}]: |error| = {:.6e}", pe.description, pe.norm);
    }
    println!("wrote {}", out_dir.join("pair.json").display());
    Ok(())
}

/// Reads a stored profile CSV back into a [`ProfileResult`]; the
/// compact-chart clock is not part of the CSV, so the crossings (and with
/// them the exact clock identity) come from the metadata.
fn load_profile(csv_path: &Path, meta: &ProfileMeta) -> Result<ProfileResult> {
    let text = fs::read_to_string(csv_path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != PROFILE_CSV_HEADER {
        return Err(Error::InvalidInput(format!(
            "{}: unexpected header {header:?}",
            csv_path.display()
        )));
    }
    let mut samples = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| {
                Error::InvalidInput(format!("{}: row {}: {e}", csv_path.display(), i + 2))
            })?;
        if fields.len() != 8 {
            return Err(Error::InvalidInput(format!(
                "{}: row {} has {} fields, expected 8",
                csv_path.display(),
                i + 2,
                fields.len()
            )));
        }
        samples.push(ProfileSample {
            xi: fields[0],
            beta: fields[1],
            v: fields[2],
            r: fields[3],
            kappa: fields[4],
            w1: fields[5],
            w2: fields[6],
            zeta: f64::NAN,
            chart: Chart::Direct,
        });
    }
    Ok(ProfileResult {
        eps: meta.eps,
        s: meta.s,
        alpha: meta.alpha,
        theta: meta.theta,
        residual: meta.residual,
        samples,
        max_eps_log_v: meta.max_eps_log_v,
        r_min: meta.r_min,
        crossings: meta.crossings,
        r0: meta.r0,
        v_switch: meta.v_switch,
        kappa_switch_drift: meta.kappa_switch_drift,
        evals: meta.evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trips() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back.riemann.v_right, 1.1 / 1.9);
        assert_eq!(back.lf.n_steps, 20_000);
    }

    // The bundled file is the single source of truth for the sample run;
    // it must stay in lockstep with the in-code defaults.
    #[test]
    fn bundled_sample_config_matches_defaults() {
        let text = include_str!("../configs/sample.json");
        let bundled: RunConfig = serde_json::from_str(text).unwrap();
        let defaults = serde_json::to_value(RunConfig::default()).unwrap();
        assert_eq!(serde_json::to_value(&bundled).unwrap(), defaults);
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{
            "model": {"rho1": 2.0, "rho2": 1.0},
            "riemann": {"beta_left": 1.9, "v_left": 1.0, "beta_right": 1.1, "v_right": 0.578},
            "mystery": {}
        }"#;
        assert!(serde_json::from_str::<RunConfig>(text).is_err());
        let text = r#"{
            "model": {"rho1": 2.0, "rho2": 1.0, "rho3": 4.0},
            "riemann": {"beta_left": 1.9, "v_left": 1.0, "beta_right": 1.1, "v_right": 0.578}
        }"#;
        assert!(serde_json::from_str::<RunConfig>(text).is_err());
    }

    #[test]
    fn validation_names_the_offending_field() {
        let mut cfg = RunConfig::default();
        cfg.riemann.beta_right = cfg.riemann.beta_left;
        let err = cfg.validated().unwrap_err();
        assert!(err.to_string().contains("beta_left"));

        let mut cfg = RunConfig::default();
        cfg.riemann.v_right = -1.0;
        let err = cfg.validated().unwrap_err();
        assert!(err.to_string().contains("v_right"));

        let mut cfg = RunConfig::default();
        cfg.riemann.beta_left = 5.0;
        let err = cfg.validated().unwrap_err();
        assert!(err.to_string().contains("beta_left"));
    }
}
