//! Command-line front end. [`run`] parses arguments, evaluates, prints a
//! short result to the given writer and writes JSON/CSV/SVG artifacts to the
//! output directory.
//!
//! Exit codes: `0` success, `1` a check failed (or an I/O error), `2` a
//! usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::cex::{self, Family, ProbeGrid};
use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;
use crate::operators::{spherical_average, spherical_maximal, TGrid};
use crate::probes;
use crate::quad::DEFAULT_LEVEL;
use crate::region::{self, parse_rational, rational_string, ExponentPoint, RegionFigure, Verdict};
use crate::sliced::Sliced;
use crate::sphere::{SphereQuadrature, SphereRule};

pub const DEFAULT_SEED: u64 = 1729;
pub const DEFAULT_OUT: &str = "sphmax-out";
pub const OUT_ENV: &str = "SPHMAX_OUT";
/// Level of the fixed node rule when `--rule nodes` is chosen without
/// `--level`.
pub const DEFAULT_NODE_LEVEL: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    /// Adaptive slice recursion.
    Sliced,
    /// Fixed tensor-product node rule.
    Nodes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DominationKind {
    Bilinear,
    Multilinear,
}

#[derive(Debug, Parser)]
#[command(
    name = "sphmax",
    version,
    about = "Multilinear spherical maximal operator on the line"
)]
struct Cli {
    /// JSON file with default options; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Artifact directory (also settable through SPHMAX_OUT).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Quadrature level.
    #[arg(long, global = true)]
    level: Option<u32>,
    #[arg(long, global = true, value_enum)]
    rule: Option<RuleKind>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FnArgs {
    /// Number of inputs; a single `--f` is repeated `m` times.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    f: Option<FunctionSpec>,
    #[arg(long)]
    g: Option<FunctionSpec>,
    /// Further inputs, in order.
    #[arg(long = "fn")]
    fns: Vec<FunctionSpec>,
}

#[derive(Debug, Args, Default)]
struct GridArgs {
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    ratio: Option<f64>,
    #[arg(long)]
    depth: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spherical average at one radius.
    Avg {
        #[command(flatten)]
        fns: FnArgs,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// Maximal function over a radius grid.
    Max {
        #[command(flatten)]
        fns: FnArgs,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Classify an exponent tuple, draw a region figure, or sample the lattice.
    Region {
        /// Exponents `1/p_i`, e.g. `1/2,1/3`.
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        m: Option<usize>,
        /// `m=2` or `m=3`.
        #[arg(long)]
        figure: Option<String>,
        /// Fix `1/p_3` in the `m=3` figure.
        #[arg(long)]
        slice: Option<String>,
        /// Classify this many seeded lattice points (needs `--m`).
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Run one counterexample family.
    Cex {
        /// a, b, l2, H, Hi, corner or lemma.
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: Option<usize>,
        /// Comma-separated sweep (deltas, etas or x values).
        #[arg(long)]
        params: Option<String>,
        /// Probe point of the `l2` family.
        #[arg(long)]
        x: Option<String>,
        /// Boundary point for `H` and `Hi`.
        #[arg(long)]
        q: Option<String>,
        /// Number of indicator inputs for `corner`.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        spread: Option<f64>,
        #[arg(long)]
        ratio: Option<f64>,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        r1: Option<f64>,
        #[arg(long)]
        r2: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Seeded domination probes.
    Dominate {
        #[arg(long, value_enum, default_value = "multilinear")]
        kind: DominationKind,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        probes: Option<usize>,
    },
    /// `L^p` norms of one function.
    Norms {
        #[arg(long)]
        f: FunctionSpec,
        /// Comma-separated exponents; `inf` allowed.
        #[arg(long, default_value = "1,2,inf")]
        p: String,
    },
}

/// Options that may come from the config file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub level: Option<u32>,
    pub rule: Option<RuleKind>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub ratio: Option<f64>,
    pub depth: Option<u32>,
    pub spread: Option<f64>,
    pub probes: Option<usize>,
    pub samples: Option<usize>,
}

/// Resolved options: flag, then environment (output directory only), then
/// config file, then default.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub level: Option<u32>,
    pub rule: RuleKind,
    pub file: ConfigFile,
}

impl RunConfig {
    fn resolve(cli: &Cli) -> Result<Self> {
        let file: ConfigFile = match &cli.config {
            Some(p) => serde_json::from_str(&fs::read_to_string(p)?)?,
            None => ConfigFile::default(),
        };
        let out = cli
            .out
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .or_else(|| file.out.clone())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        Ok(Self {
            seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out,
            level: cli.level.or(file.level),
            rule: cli.rule.or(file.rule).unwrap_or(RuleKind::Sliced),
            file,
        })
    }

    fn sliced(&self) -> Sliced {
        Sliced::new(self.level.unwrap_or(DEFAULT_LEVEL))
    }

    fn rule(&self, m: usize) -> Result<Box<dyn SphereQuadrature>> {
        Ok(match self.rule {
            RuleKind::Sliced => Box::new(self.sliced()),
            RuleKind::Nodes => Box::new(SphereRule::build(
                m,
                self.level.unwrap_or(DEFAULT_NODE_LEVEL),
            )?),
        })
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out)?;
        let path = self.out.join(name);
        fs::write(&path, contents)?;
        Ok(path)
    }

    fn write_json(&self, name: &str, v: &Value) -> Result<PathBuf> {
        self.write(name, &(serde_json::to_string_pretty(v)? + "\n"))
    }
}

/// A failed check: artifacts are written, the exit code is 1.
struct CheckFailed;

enum Outcome {
    Done,
    Failed(CheckFailed),
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if e.use_stderr() {
                eprintln!("{e}");
            } else {
                let _ = write!(stdout, "{e}");
            }
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::Failed(CheckFailed)) => 1,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) | Error::Csv(_) => 1,
                _ => 2,
            }
        }
    }
}

fn gather(fns: &FnArgs) -> Result<Vec<FunctionSpec>> {
    let mut fs: Vec<FunctionSpec> = fns
        .f
        .iter()
        .chain(fns.g.iter())
        .chain(fns.fns.iter())
        .copied()
        .collect();
    match fns.m {
        Some(m) if fs.len() == 1 && m > 1 => fs = vec![fs[0]; m],
        Some(m) if fs.len() != m => {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: fs.len(),
            });
        }
        _ => {}
    }
    if fs.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two functions (--f, --g, --fn)".into(),
        ));
    }
    Ok(fs)
}

fn spec_strings(fs: &[FunctionSpec]) -> Vec<String> {
    fs.iter().map(|f| f.to_string()).collect()
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_real).collect()
}

/// Decimal, rational (`1/3`) or `inf`.
fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    if s.contains('/') {
        return Ok(num_traits::ToPrimitive::to_f64(&parse_rational(s)?).unwrap_or(f64::NAN));
    }
    s.parse()
        .map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

fn number_or_inf(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v == f64::INFINITY {
        json!("inf")
    } else {
        Value::Null
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<Outcome> {
    let cfg = RunConfig::resolve(&cli)?;
    match cli.command {
        Command::Avg { fns, t, x } => {
            let fs = gather(&fns)?;
            let rule = cfg.rule(fs.len())?;
            let value = spherical_average(&fs, t, x, rule.as_ref())?;
            let doc = json!({
                "command": "avg",
                "m": fs.len(),
                "functions": spec_strings(&fs),
                "t": t,
                "x": x,
                "rule": format!("{:?}", cfg.rule).to_lowercase(),
                "value": number_or_inf(value),
            });
            cfg.write_json("avg.json", &doc)?;
            writeln!(stdout, "{value:?}")?;
            Ok(Outcome::Done)
        }
        Command::Max { fns, x, grid } => {
            let fs = gather(&fns)?;
            let rule = cfg.rule(fs.len())?;
            let tgrid = build_grid(&cfg, &grid, &fs, x)?;
            let est = spherical_maximal(&fs, x, &tgrid, rule.as_ref())?;
            let doc = json!({
                "command": "max",
                "m": fs.len(),
                "functions": spec_strings(&fs),
                "x": x,
                "grid": tgrid,
                "value": number_or_inf(est.value),
                "argmax_t": est.argmax_t,
                "levels": est.levels,
            });
            cfg.write_json("max.json", &doc)?;
            writeln!(stdout, "{}", serde_json::to_string_pretty(&doc)?)?;
            Ok(Outcome::Done)
        }
        Command::Region {
            q,
            m,
            figure,
            slice,
            sample,
        } => region_cmd(&cfg, q, m, figure, slice, sample, stdout),
        Command::Cex {
            family,
            m,
            params,
            x,
            q,
            k,
            spread,
            ratio,
            depth,
            r1,
            r2,
            c,
            samples,
        } => {
            if family.eq_ignore_ascii_case("lemma") {
                let r = cex::lemma_check(
                    r1.unwrap_or(1.0),
                    r2.unwrap_or(1.0),
                    c.unwrap_or(1.0),
                    samples.or(cfg.file.samples).unwrap_or(10_000),
                    cfg.seed,
                )?;
                let mut doc = serde_json::to_value(&r)?;
                doc["command"] = json!("cex");
                doc["family"] = json!("lemma");
                cfg.write_json("cex_lemma.json", &doc)?;
                writeln!(stdout, "{}", serde_json::to_string_pretty(&doc)?)?;
                return Ok(if r.ok {
                    Outcome::Done
                } else {
                    Outcome::Failed(CheckFailed)
                });
            }
            let fam: Family = family.parse()?;
            let m = m.unwrap_or(if fam == Family::Corner { 3 } else { 2 });
            let grid = ProbeGrid {
                spread: spread
                    .or(cfg.file.spread)
                    .unwrap_or(ProbeGrid::default().spread),
                ratio: ratio.or(cfg.file.ratio).unwrap_or(TGrid::DEFAULT_RATIO),
                depth: depth.or(cfg.file.depth).unwrap_or(TGrid::DEFAULT_DEPTH),
            };
            let params = match params {
                Some(s) => parse_list(&s)?,
                None => cex::default_params(fam, m),
            };
            let rule = cfg.rule(m)?;
            let report = match fam {
                Family::A => cex::cex_condition_a(m, &params, &grid, rule.as_ref())?,
                Family::B => cex::cex_condition_b(m, &params, &grid, rule.as_ref())?,
                Family::L2 => {
                    if m != 2 {
                        return Err(Error::UnsupportedDimension(m));
                    }
                    let x = x
                        .as_deref()
                        .map(parse_real)
                        .transpose()?
                        .unwrap_or(1.0 / 3.0);
                    cex::cex_bilinear_l2(&params, x)?
                }
                Family::H | Family::Hi => {
                    let pt: ExponentPoint = match q {
                        Some(s) => s.parse()?,
                        None => default_boundary_point(fam, m)?,
                    };
                    if pt.m() != m {
                        return Err(Error::DimensionMismatch {
                            expected: m,
                            got: pt.m(),
                        });
                    }
                    if fam == Family::H {
                        cex::cex_h(&pt, &params, &grid, rule.as_ref())?
                    } else {
                        cex::cex_hi(&pt, &params, &grid, rule.as_ref())?
                    }
                }
                Family::Corner => {
                    // the projected bound needs ball averages, which only the
                    // adaptive evaluator provides
                    cex::cex_corner(m, k.unwrap_or(m - 1), &params, &grid, &cfg.sliced())?
                }
            };
            let stem = format!("cex_{}_m{}", fam.tag(), m);
            let csv = report.to_csv_string()?;
            cfg.write(&format!("{stem}.csv"), &csv)?;
            let mut doc = serde_json::to_value(&report)?;
            doc["command"] = json!("cex");
            doc["ok"] = json!(report.ok());
            cfg.write_json(&format!("{stem}.json"), &doc)?;
            write!(stdout, "{csv}")?;
            Ok(if report.ok() {
                Outcome::Done
            } else {
                Outcome::Failed(CheckFailed)
            })
        }
        Command::Dominate { kind, m, probes: n } => {
            let n = n.or(cfg.file.probes).unwrap_or(200);
            let sliced = cfg.sliced();
            let summary = match kind {
                DominationKind::Bilinear => probes::bilinear_suite(n, cfg.seed, &sliced)?,
                DominationKind::Multilinear => {
                    probes::multilinear_suite(m.unwrap_or(3), n, cfg.seed, &sliced)?
                }
            };
            let mut doc = serde_json::to_value(&summary)?;
            doc["command"] = json!("dominate");
            cfg.write_json(
                &format!("dominate_{}_m{}.json", summary.kind, summary.m),
                &doc,
            )?;
            writeln!(
                stdout,
                "{} m={} probes={} violations={} worst_ratio={:?} {}",
                summary.kind,
                summary.m,
                summary.probes,
                summary.violations,
                summary.worst_ratio,
                if summary.ok { "PASS" } else { "FAIL" }
            )?;
            Ok(if summary.ok {
                Outcome::Done
            } else {
                Outcome::Failed(CheckFailed)
            })
        }
        Command::Norms { f, p } => {
            let ps = parse_list(&p)?;
            if let Some(bad) = ps.iter().find(|&&p| !(p >= 1.0)) {
                return Err(Error::InvalidArgument(format!(
                    "p must be at least 1, got {bad}"
                )));
            }
            let rows: Vec<Value> = ps
                .iter()
                .map(|&p| json!({ "p": number_or_inf(p), "value": number_or_inf(f.lp_norm(p)) }))
                .collect();
            let doc = json!({ "command": "norms", "function": f.to_string(), "norms": rows });
            cfg.write_json("norms.json", &doc)?;
            for &p in &ps {
                writeln!(stdout, "p={p} {:?}", f.lp_norm(p))?;
            }
            Ok(Outcome::Done)
        }
    }
}

fn build_grid(cfg: &RunConfig, g: &GridArgs, fs: &[FunctionSpec], x: f64) -> Result<TGrid> {
    let t_min = g.t_min.or(cfg.file.t_min);
    let t_max = g.t_max.or(cfg.file.t_max);
    let ratio = g.ratio.or(cfg.file.ratio);
    let depth = g.depth.or(cfg.file.depth);
    let base = match (t_min, t_max) {
        (Some(a), Some(b)) => TGrid::new(a, b, TGrid::DEFAULT_RATIO, TGrid::DEFAULT_DEPTH)?,
        _ => {
            let mut inferred = TGrid::infer(fs, x)?;
            inferred.t_min = t_min.unwrap_or(inferred.t_min);
            inferred.t_max = t_max.unwrap_or(inferred.t_max);
            inferred
        }
    };
    TGrid::new(
        base.t_min,
        base.t_max,
        ratio.unwrap_or(base.ratio),
        depth.unwrap_or(base.local_refine_depth),
    )
}

fn default_boundary_point(fam: Family, m: usize) -> Result<ExponentPoint> {
    match (fam, m) {
        (Family::H, 2) => "1/2,1/2".parse(),
        (Family::H, 3) => "1/2,1/2,1".parse(),
        (Family::Hi, 2) => "1/2,1/4".parse(),
        (Family::Hi, 3) => "3/4,3/4,1/4".parse(),
        _ => Err(Error::InvalidArgument(format!(
            "no default boundary point for m = {m}; pass --q"
        ))),
    }
}

fn parse_figure(s: &str) -> Result<usize> {
    let v = s.trim().strip_prefix("m=").unwrap_or(s.trim());
    v.parse()
        .map_err(|_| Error::Parse(format!("expected m=2 or m=3, got {s:?}")))
}

fn region_cmd(
    cfg: &RunConfig,
    q: Option<String>,
    m: Option<usize>,
    figure: Option<String>,
    slice: Option<String>,
    sample: Option<usize>,
    stdout: &mut dyn Write,
) -> Result<Outcome> {
    if let Some(fig) = figure {
        let m = parse_figure(&fig)?;
        let slice: Option<BigRational> = slice.as_deref().map(parse_rational).transpose()?;
        let figure = region::region_figure(m, slice.clone())?;
        let stem = match &slice {
            Some(s) => format!("region_m{m}_slice_{}", rational_string(s).replace('/', "-")),
            None => format!("region_m{m}"),
        };
        let mut doc = serde_json::to_value(&figure)?;
        doc["command"] = json!("region");
        cfg.write_json(&format!("{stem}.json"), &doc)?;
        cfg.write(&format!("{stem}.svg"), &render_svg(&figure))?;
        writeln!(stdout, "{}", serde_json::to_string_pretty(&doc)?)?;
        return Ok(Outcome::Done);
    }
    if let Some(n) = sample {
        let m = m.ok_or_else(|| Error::InvalidArgument("--sample needs --m".into()))?;
        let rows = region::sample_region(m, n, cfg.seed)?;
        let points: Vec<Value> = rows
            .iter()
            .map(|(p, c)| json!({ "point": p, "verdict": c.verdict }))
            .collect();
        let mut counts = std::collections::BTreeMap::new();
        for (_, c) in &rows {
            *counts.entry(c.verdict.to_string()).or_insert(0usize) += 1;
        }
        let doc = json!({ "command": "region", "m": m, "seed": cfg.seed, "counts": counts, "points": points });
        cfg.write_json(&format!("region_sample_m{m}.json"), &doc)?;
        writeln!(
            stdout,
            "{}",
            serde_json::to_string_pretty(&json!({ "m": m, "counts": doc["counts"] }))?
        )?;
        return Ok(Outcome::Done);
    }
    let q =
        q.ok_or_else(|| Error::InvalidArgument("region needs --q, --figure or --sample".into()))?;
    let pt: ExponentPoint = q.parse()?;
    if let Some(m) = m {
        if m != pt.m() {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: pt.m(),
            });
        }
    }
    let c = region::classify(&pt);
    let doc = json!({
        "command": "region",
        "point": pt,
        "verdict": c.verdict,
        "citation": c.citation,
        "triggers": c.triggers,
        "in_h": c.in_h,
        "in_h_i": c.in_h_i,
    });
    cfg.write_json("region.json", &doc)?;
    writeln!(stdout, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(Outcome::Done)
}

pub fn verdict_color(v: Verdict) -> &'static str {
    match v {
        Verdict::StrongBounded => "#2b8cbe",
        Verdict::WeakOnly => "#31a354",
        Verdict::StrongFailsWeakOpen => "#e6550d",
        Verdict::NotEvenWeak => "#756bb1",
        Verdict::Unbounded => "#636363",
    }
}

fn face_fill(tag: &str) -> (&'static str, f64) {
    if tag == "H" {
        ("#e6550d", 0.55)
    } else if tag.starts_with("H_") {
        ("#fdae6b", 0.5)
    } else {
        ("#9ecae1", 0.25)
    }
}

fn to_f64(q: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
}

/// Screen coordinates: the plane is drawn directly, space obliquely with
/// `1/p_1` receding, `1/p_2` to the right and `1/p_3` up.
fn project(fig: &RegionFigure, q: &[BigRational]) -> (f64, f64) {
    let v: Vec<f64> = q.iter().map(to_f64).collect();
    if fig.m == 2 || fig.slice.is_some() {
        (70.0 + 300.0 * v[0], 370.0 - 300.0 * v[1])
    } else {
        (
            190.0 + 270.0 * (v[1] - 0.45 * v[0]),
            400.0 - 270.0 * (v[2] - 0.35 * v[0]),
        )
    }
}

fn points_attr(pts: &[(f64, f64)]) -> String {
    pts.iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cyclic(pts: &[(f64, f64)]) -> Vec<usize> {
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| {
        let ta = (pts[a].1 - cy).atan2(pts[a].0 - cx);
        let tb = (pts[b].1 - cy).atan2(pts[b].0 - cx);
        ta.total_cmp(&tb)
    });
    idx
}

/// Standalone SVG of a [`RegionFigure`]: vertices as labeled points colored
/// by verdict, faces filled by tag, the unit cube dashed.
pub fn render_svg(fig: &RegionFigure) -> String {
    let planar = fig.m == 2 || fig.slice.is_some();
    let (w, h) = if planar { (440, 440) } else { (560, 520) };
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    let title = match &fig.slice {
        Some(sl) => format!("m = {}, 1/p3 = {}", fig.m, rational_string(sl)),
        None => format!("m = {}", fig.m),
    };
    s.push_str(&format!("<title>{title}</title>\n"));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // unit cube (square) outline
    let corners: Vec<(f64, f64)> = fig.cube.iter().map(|c| project(fig, c)).collect();
    for i in 0..corners.len() {
        for j in i + 1..corners.len() {
            let differ = fig.cube[i]
                .iter()
                .zip(&fig.cube[j])
                .filter(|(a, b)| a != b)
                .count();
            if differ == 1 {
                s.push_str(&format!(
                    "<line class=\"cube\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
                    corners[i].0, corners[i].1, corners[j].0, corners[j].1
                ));
            }
        }
    }

    let pts: Vec<(f64, f64)> = fig
        .vertices
        .iter()
        .map(|v| project(fig, &v.coords))
        .collect();
    if planar {
        if !pts.is_empty() {
            let order: Vec<(f64, f64)> = cyclic(&pts).into_iter().map(|i| pts[i]).collect();
            s.push_str(&format!(
                "<polygon class=\"region\" points=\"{}\" fill=\"{}\" fill-opacity=\"0.3\" stroke=\"{}\"/>\n",
                points_attr(&order),
                verdict_color(Verdict::StrongBounded),
                verdict_color(Verdict::StrongBounded)
            ));
        }
        for face in fig.faces.iter().filter(|f| f.tag.starts_with('H')) {
            let seg: Vec<(f64, f64)> = face.vertices.iter().map(|&i| pts[i]).collect();
            s.push_str(&format!(
                "<polyline class=\"face {}\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"3\"/>\n",
                face.tag,
                points_attr(&seg),
                face_fill(&face.tag).0
            ));
        }
    } else {
        for face in &fig.faces {
            let poly: Vec<(f64, f64)> = face.vertices.iter().map(|&i| pts[i]).collect();
            let (fill, op) = face_fill(&face.tag);
            s.push_str(&format!(
                "<polygon class=\"face {}\" points=\"{}\" fill=\"{fill}\" fill-opacity=\"{op}\" stroke=\"#555\" stroke-width=\"0.8\"/>\n",
                face.tag,
                points_attr(&poly)
            ));
        }
    }
    for (tag, idx) in &fig.sets {
        if idx.len() == 1 {
            let (x, y) = pts[idx[0]];
            s.push_str(&format!(
                "<circle class=\"set {tag}\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"8\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                face_fill(tag).0
            ));
        }
    }
    for wp in &fig.weak_points {
        let (x, y) = project(fig, wp);
        s.push_str(&format!(
            "<circle class=\"weak\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"9\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            verdict_color(Verdict::WeakOnly)
        ));
    }
    for (v, (x, y)) in fig.vertices.iter().zip(&pts) {
        s.push_str(&format!(
            "<circle class=\"vertex\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"{}\"><title>{}</title></circle>\n",
            verdict_color(v.verdict),
            v.verdict
        ));
        s.push_str(&format!(
            "<text class=\"label\" x=\"{:.2}\" y=\"{:.2}\">{}</text>\n",
            x + 6.0,
            y - 6.0,
            v.label
        ));
    }
    let axes: Vec<(&str, Vec<BigRational>)> = if planar {
        let mk = |a: i64, b: i64| {
            let mut c = vec![
                BigRational::from_integer(a.into()),
                BigRational::from_integer(b.into()),
            ];
            if let Some(sl) = &fig.slice {
                c.push(sl.clone());
            }
            c
        };
        vec![("1/p1", mk(1, 0)), ("1/p2", mk(0, 1))]
    } else {
        let unit = |i: usize| {
            (0..3)
                .map(|j| BigRational::from_integer(if i == j { 1.into() } else { 0.into() }))
                .collect::<Vec<_>>()
        };
        vec![("1/p1", unit(0)), ("1/p2", unit(1)), ("1/p3", unit(2))]
    };
    for (name, c) in axes {
        let (x, y) = project(fig, &c);
        s.push_str(&format!(
            "<text class=\"axis\" x=\"{:.2}\" y=\"{:.2}\" fill=\"#333\">{name}</text>\n",
            x + 10.0,
            y + 16.0
        ));
    }
    s.push_str(&format!(
        "<text x=\"10\" y=\"{}\" fill=\"#333\">{title}</text>\n",
        h - 10
    ));
    s.push_str("</svg>\n");
    s
}

/// Writes the SVG next to the JSON geometry.
pub fn write_figure(fig: &RegionFigure, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let json_path = dir.join(format!("{stem}.json"));
    let svg_path = dir.join(format!("{stem}.svg"));
    fs::write(&json_path, serde_json::to_string_pretty(fig)? + "\n")?;
    fs::write(&svg_path, render_svg(fig))?;
    Ok((json_path, svg_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(args.iter().copied(), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn avg_constant_is_one() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let (code, s) = run_capture(&[
            "sphmax", "--out", out, "avg", "--m", "2", "--f", "const:1", "--g", "const:1", "--t",
            "1", "--x", "0",
        ]);
        assert_eq!(code, 0);
        assert_eq!(s.trim(), "1.0");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["sphmax", "avg", "--t", "1"]).0, 2);
        assert_eq!(run_capture(&["sphmax", "frobnicate"]).0, 2);
        assert_eq!(run_capture(&["sphmax", "region", "--q", "1/2,zz"]).0, 2);
    }

    #[test]
    fn region_point() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let (code, s) = run_capture(&[
            "sphmax", "--out", out, "region", "--m", "2", "--q", "1/3,1/3",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["verdict"], "StrongBounded");
        assert!(v["citation"].as_str().unwrap().starts_with("Theorem 1"));
    }

    #[test]
    fn figure_svg_labels() {
        let fig = region::region_figure(2, None).unwrap();
        let svg = render_svg(&fig);
        assert_eq!(svg.matches("class=\"vertex\"").count(), 4);
        for l in ["(0,0)", "(1/2,0)", "(1/2,1/2)", "(0,1/2)"] {
            assert!(svg.contains(&format!(">{l}</text>")), "{l}");
        }
        let svg3 = render_svg(&region::region_figure(3, None).unwrap());
        assert!(svg3.contains(">(1,½,0)</text>"));
    }

    #[test]
    fn figure_files_written() {
        let dir = tempfile::tempdir().unwrap();
        let fig = region::region_figure(3, None).unwrap();
        let (j, s) = write_figure(&fig, dir.path(), "fig").unwrap();
        assert!(j.exists() && s.exists());
    }
}
