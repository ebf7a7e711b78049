//! Command-line driver for `dmy`.
//!
//! Exit codes: 0 when every input was analyzed (whatever the verdict),
//! 2 on input or usage errors, 3 on an internal inconsistency.

use std::io::{BufRead, Read, Write};
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dmy_core::dynamics::{basin_scan, iterate, GridSpec, OrbitConfig};
use dmy_core::engine::{analyze, explain, witness_verdict, AnalyzeConfig, EngineError};
use dmy_core::mapio::{from_json, parse_map_with_cap, MapError, PolyMap, ToJson, DEFAULT_DEGREE_CAP};
use dmy_core::normalform::decompose;
use dmy_core::ratpoly::{format_rat, parse_rat, Poly2, Rat};
use dmy_core::spectra::{disk_test_at, jacobian, SearchConfig};
use dmy_core::symmetry::{classify, ReflectionAxes, RotationOrder, DEFAULT_TOL};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

const DEFAULT_ORBIT_EXTENT: f64 = 10.0;
const DEFAULT_ORBIT_STEP: f64 = 0.5;

#[derive(Parser, Debug)]
#[command(
    name = "dmy",
    version,
    about = "Decide the discrete Markus-Yamabe hypotheses for planar polynomial maps",
    long_about = "Decide whether a planar polynomial map fixes the origin and keeps every Jacobian \
                  eigenvalue strictly inside the unit disk on the whole plane, with a re-checkable \
                  certificate.\n\nINPUT is an inline map such as \"(x/2 + y^2, y/3)\", a file with one \
                  map per line (text or JSON), or - for standard input. Blank lines and lines \
                  starting with # are skipped.\n\nExit codes: 0 analysis ran, 2 input error, 3 internal \
                  inconsistency."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full verdict with certificate
    Analyze(Common),
    /// Normal-form decomposition or the structural reason it fails
    NormalForm(Common),
    /// Symmetry group report; the first text line is the group name
    Symmetry(Common),
    /// Numeric witness search only
    Witness(Common),
    /// Basin scan over a grid, or a single orbit with --point
    Orbits(Common),
    /// Exact disk test of the Jacobian at --point
    Jury(Common),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Inline map "(f1, f2)", a file path, or - for stdin
    pub input: String,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Tolerance for float symmetry checks
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for the witness search
    #[arg(long, default_value_t = SearchConfig::default().seed)]
    pub seed: u64,
    /// Half-width of the search grid (witness default 16, orbits default 10)
    #[arg(long)]
    pub grid_extent: Option<f64>,
    /// Grid spacing (witness default 0.25, orbits default 0.5)
    #[arg(long)]
    pub grid_step: Option<f64>,
    /// Local-ascent restarts in the witness search
    #[arg(long, default_value_t = SearchConfig::default().restarts)]
    pub restarts: usize,
    /// Evaluation budget per local ascent
    #[arg(long, default_value_t = SearchConfig::default().max_iters)]
    pub search_iters: usize,
    /// Largest extent the witness search grows to
    #[arg(long, default_value_t = SearchConfig::default().max_extent)]
    pub max_extent: f64,
    /// Iteration limit per orbit
    #[arg(long, default_value_t = OrbitConfig::default().max_iter)]
    pub max_iter: u64,
    /// Orbit convergence radius
    #[arg(long, default_value_t = OrbitConfig::default().conv_tol)]
    pub conv_tol: f64,
    /// Orbit escape radius
    #[arg(long, default_value_t = OrbitConfig::default().escape_radius)]
    pub escape_radius: f64,
    /// Point "x,y" (rationals such as 1/3 or decimals such as 0.25)
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Largest total degree accepted by the parser
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    pub degree_cap: u32,
    /// Skip the witness search attached to structural failures (analyze)
    #[arg(long)]
    pub no_witness: bool,
    /// Write the basin exceptions as CSV to this file (orbits)
    #[arg(long)]
    pub csv: Option<String>,
}

impl Common {
    fn search(&self) -> SearchConfig {
        let d = SearchConfig::default();
        SearchConfig {
            grid_extent: self.grid_extent.unwrap_or(d.grid_extent),
            grid_step: self.grid_step.unwrap_or(d.grid_step),
            restarts: self.restarts,
            seed: self.seed,
            max_iters: self.search_iters,
            max_extent: self.max_extent,
        }
    }

    fn analyze_config(&self) -> AnalyzeConfig {
        AnalyzeConfig {
            search: self.search(),
            tol: self.tol,
            attach_witness: !self.no_witness,
        }
    }

    fn orbit(&self) -> OrbitConfig {
        OrbitConfig {
            max_iter: self.max_iter,
            conv_tol: self.conv_tol,
            escape_radius: self.escape_radius,
        }
    }

    fn grid(&self) -> GridSpec {
        GridSpec {
            extent: self.grid_extent.unwrap_or(DEFAULT_ORBIT_EXTENT),
            step: self.grid_step.unwrap_or(DEFAULT_ORBIT_STEP),
        }
    }

    fn validate(&self) -> Result<(), String> {
        let s = self.search();
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err("--tol must be positive".into());
        }
        if !(s.grid_step > 0.0 && s.grid_extent > 0.0 && s.max_extent.is_finite() && s.grid_extent.is_finite()) {
            return Err("--grid-extent, --grid-step and --max-extent must be positive and finite".into());
        }
        self.orbit().validate().map_err(|e| e.to_string())
    }
}

/// Parses a decimal such as `-0.25` or `3` exactly, or a rational `n/d`.
pub fn parse_number(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some(r) = parse_rat(s) {
        return Some(r);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let den = format!("1{}", "0".repeat(frac_part.len()));
    let r = parse_rat(&format!("{digits}/{den}"))?;
    Some(if neg { -r } else { r })
}

pub fn parse_point(s: &str) -> Result<(Rat, Rat), String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("point {s:?} must look like x,y"))?;
    match (parse_number(x), parse_number(y)) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => Err(format!("point {s:?}: coordinates must be rationals or decimals")),
    }
}

/// One input line: its 1-based line number and text.
struct Item {
    line: usize,
    text: String,
}

fn collect_items(input: &str, stdin: &mut dyn Read) -> Result<Vec<Item>, String> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('(') || trimmed.starts_with('{') {
        return Ok(vec![Item {
            line: 1,
            text: input.to_string(),
        }]);
    }
    let content = if input == "-" {
        let mut s = String::new();
        stdin
            .read_to_string(&mut s)
            .map_err(|e| format!("reading stdin: {e}"))?;
        s
    } else if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| format!("reading {input}: {e}"))?
    } else {
        return Err(format!("{input:?} is neither a map \"(f1, f2)\" nor a readable file"));
    };
    Ok(content
        .as_bytes()
        .lines()
        .map_while(Result::ok)
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, text)| Item { line: i + 1, text })
        .collect())
}

fn parse_item(text: &str, cap: u32) -> Result<PolyMap, MapError> {
    if text.trim_start().starts_with('{') {
        let map = from_json(text)?;
        if map.degree() > cap as i64 {
            return Err(MapError::DegreeCapExceeded {
                degree: map.degree() as u32,
                cap,
                position: None,
            });
        }
        Ok(map)
    } else {
        parse_map_with_cap(text, cap)
    }
}

fn with_version(mut v: Value) -> Value {
    if let Some(obj) = v.as_object_mut() {
        obj.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    }
    v
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn axes_text(axes: &ReflectionAxes) -> String {
    match axes {
        ReflectionAxes::All => "all".into(),
        ReflectionAxes::Finite(v) if v.is_empty() => "none".into(),
        ReflectionAxes::Finite(v) => v.iter().map(|a| format!("{a}")).collect::<Vec<_>>().join(", "),
    }
}

fn run_one(cmd: &Command, opts: &Common, map: &PolyMap) -> Result<String, Failure> {
    let json_out = opts.format == Format::Json;
    let render = |v: Value| format!("{}\n", with_version(v));
    Ok(match cmd {
        Command::Analyze(_) => {
            let v = analyze(map, &opts.analyze_config())?;
            if json_out {
                render(v.to_json_value())
            } else {
                explain(&v)
            }
        }
        Command::NormalForm(_) => match decompose(map) {
            Ok(nf) if json_out => {
                render(json!({ "map": map.to_string(), "ok": true, "normal_form": nf.to_json_value() }))
            }
            Err(f) if json_out => render(json!({ "map": map.to_string(), "ok": false, "failure": f.to_json_value() })),
            Ok(nf) => format!(
                "normal form\nB = {:?}\nu = {}\n(alpha, beta) = ({}, {})\np(u) = {}\nr(u) = {}\n",
                nf.linear,
                Poly2::linear(&nf.a, &nf.b),
                format_rat(&nf.alpha),
                format_rat(&nf.beta),
                nf.p,
                nf.r
            ),
            Err(f) => format!("{}\n{}\n", f.reason, f.detail),
        },
        Command::Symmetry(_) => {
            let g = classify(map, opts.tol);
            if json_out {
                render(g.to_json_value())
            } else {
                let order = match g.rotation_order {
                    RotationOrder::Finite(n) => n.to_string(),
                    RotationOrder::Continuous => "continuous".into(),
                };
                let gens: Vec<String> = g.generators.iter().map(|m| m.to_json_value().to_string()).collect();
                format!(
                    "{}\nclassification: {}\nrotation order: {}\nreflection axes: {}\ngenerators: {}\n",
                    g.classification,
                    g.classification.key(),
                    order,
                    axes_text(&g.reflection_axes),
                    if gens.is_empty() { "none".into() } else { gens.join(" ") }
                )
            }
        }
        Command::Witness(_) => {
            let v = witness_verdict(map, &opts.analyze_config());
            if json_out {
                render(v.to_json_value())
            } else {
                explain(&v)
            }
        }
        Command::Orbits(_) => {
            let cfg = opts.orbit();
            if let Some(p) = &opts.point {
                let (x, y) = parse_point(p).map_err(Failure::Input)?;
                let start = (dmy_core::ratpoly::to_f64(&x), dmy_core::ratpoly::to_f64(&y));
                let r = iterate(map, start, &cfg);
                if json_out {
                    render(r.to_json_value())
                } else {
                    let steps = r
                        .outcome
                        .steps()
                        .map(|s| format!(" after {s} steps"))
                        .unwrap_or_default();
                    let note = r.note.as_ref().map(|n| format!("\nnote: {n}")).unwrap_or_default();
                    format!(
                        "{}{}\nfinal point: ({}, {})\nfinal norm: {}{}\n",
                        r.outcome.name(),
                        steps,
                        r.final_point.0,
                        r.final_point.1,
                        r.final_norm,
                        note
                    )
                }
            } else {
                let s = basin_scan(map, &opts.grid(), &cfg).map_err(|e| Failure::Input(e.to_string()))?;
                if let Some(path) = &opts.csv {
                    std::fs::write(path, s.to_csv()).map_err(|e| Failure::Input(format!("writing {path}: {e}")))?;
                }
                if json_out {
                    render(s.to_json_value())
                } else {
                    let mut out = format!(
                        "grid: [-{e}, {e}]^2 step {st} ({n} starts)\nConverged: {c}\nEscaped: {es}\nUndecided: {u}\nworst steps: {w}\n",
                        e = s.grid.extent,
                        st = s.grid.step,
                        n = s.total(),
                        c = s.converged,
                        es = s.escaped,
                        u = s.undecided,
                        w = s.worst_steps
                    );
                    for e in s.exceptions.iter().take(20) {
                        out.push_str(&format!("  ({}, {}) {}\n", e.start.0, e.start.1, e.outcome.name()));
                    }
                    if s.exceptions.len() > 20 {
                        out.push_str(&format!("  ... {} more\n", s.exceptions.len() - 20));
                    }
                    out
                }
            }
        }
        Command::Jury(_) => {
            let p = opts
                .point
                .as_deref()
                .ok_or_else(|| Failure::Input("jury needs --point x,y".into()))?;
            let (x, y) = parse_point(p).map_err(Failure::Input)?;
            let r = disk_test_at(&jacobian(map), &x, &y);
            if json_out {
                let mut v = r.to_json_value();
                v["point"] = json!([format_rat(&x), format_rat(&y)]);
                v["map"] = json!(map.to_string());
                render(v)
            } else {
                format!(
                    "inside={} trace={} det={}\n",
                    r.inside,
                    format_rat(&r.trace),
                    format_rat(&r.det)
                )
            }
        }
    })
}

/// Runs the tool on `argv` (including the program name) and returns the exit code.
pub fn run<I, S>(argv: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let opts = match &cli.command {
        Command::Analyze(c)
        | Command::NormalForm(c)
        | Command::Symmetry(c)
        | Command::Witness(c)
        | Command::Orbits(c)
        | Command::Jury(c) => c,
    };
    if let Err(msg) = opts.validate() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_INPUT;
    }
    let items = match collect_items(&opts.input, stdin) {
        Ok(items) => items,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_INPUT;
        }
    };
    let batch = items.len() > 1;
    let mut code = EXIT_OK;
    for (k, item) in items.iter().enumerate() {
        let map = match parse_item(&item.text, opts.degree_cap) {
            Ok(m) => m,
            Err(e) => {
                let loc = e.position().map(|p| format!(" at byte {p}")).unwrap_or_default();
                let _ = writeln!(err, "error: line {}{loc}: {e}", item.line);
                code = code.max(EXIT_INPUT);
                continue;
            }
        };
        match run_one(&cli.command, opts, &map) {
            Ok(text) => {
                if batch && opts.format == Format::Text && k > 0 {
                    let _ = writeln!(out);
                }
                let _ = out.write_all(text.as_bytes());
            }
            Err(Failure::Input(msg)) => {
                let _ = writeln!(err, "error: line {}: {msg}", item.line);
                code = code.max(EXIT_INPUT);
            }
            Err(Failure::Internal(msg)) => {
                let _ = writeln!(err, "error: line {}: {msg}", item.line);
                code = EXIT_INTERNAL;
            }
        }
    }
    code
}
