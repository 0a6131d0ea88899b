//! `cluster-forge`: mutation, g-fan enumeration, verification, degeneration and tables.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

use cluster_forge::batches;
use cluster_forge::corpus::{self, run_table};
use cluster_forge::degeneration::{cocycle_suite, specialize_fiber, strata_consistency_check, transition};
use cluster_forge::gfan::{enumerate_gfan, star, FanJson, GFanAtlas, SeedJson, DEFAULT_DEPTH};
use cluster_forge::report::{all_pass, CheckRecord};
use cluster_forge::seeds::{format_path, parse_path, ClusterSeed, ExchangeData, YSeed};
use cluster_forge::semifields::{trop_to_string, TropMonomial};
use cluster_forge::Error;

/// Stdout writes that ignore a closed pipe.
macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_FROZEN: u8 = 3;
const EXIT_TRUNCATED: u8 = 4;

#[derive(Parser)]
#[command(name = "cluster-forge", version, about = "Exact cluster patterns with coefficients, g-fans and toric degenerations")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate a seed along a path and print the resulting seed.
    Mutate {
        #[arg(long)]
        seed: String,
        /// Comma-separated 1-based directions; empty echoes the seed.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        path: String,
        /// `principal`, `none`, or `trop:r` (the seed file's coefficients, of rank r).
        #[arg(long)]
        with_coeffs: Option<String>,
        /// Print cluster variables instead of y-variables.
        #[arg(long)]
        cluster: bool,
    },
    /// Enumerate the g-fan atlas.
    Fan {
        #[arg(long)]
        seed: String,
        /// Comma-separated 1-based frozen directions.
        #[arg(long, default_value = "")]
        freeze: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a family of checks; exits 1 if any fails.
    Verify {
        check: Check,
        #[command(flatten)]
        source: Source,
        /// `random:N` or explicit paths separated by `;`.
        #[arg(long, default_value = "random:200")]
        paths: String,
        /// Maximal path length (separation) or loop length (cocycle).
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Restrict `strata` to one face, e.g. `ray:0`.
        #[arg(long)]
        tau: Option<String>,
    },
    /// Transition maps on the fiber over `u`.
    Degenerate {
        #[command(flatten)]
        source: Source,
        /// Comma-separated rationals, e.g. `1,1` or `2/3,5`.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Reproduce a worked example: a2, a2-principal, gr25 or dp5.
    Table { name: String },
    /// Star of a face of a stored fan.
    Star {
        #[arg(long)]
        fan: PathBuf,
        /// `ray:i` or `rays:i,j,...`, indices into the fan's `rays` array.
        #[arg(long)]
        tau: String,
    },
}

#[derive(clap::Args)]
struct Source {
    /// Seed JSON file, or the name of a built-in fixture.
    #[arg(long, conflicts_with = "fan")]
    seed: Option<String>,
    /// Fan JSON written by `fan`.
    #[arg(long)]
    fan: Option<PathBuf>,
    #[arg(long, default_value = "")]
    freeze: String,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Separation,
    Duality,
    Signcoherence,
    Cocycle,
    Degree,
    Limit,
    Strata,
    Glue,
}

struct CliError {
    code: u8,
    msg: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::FrozenDirection { .. } => EXIT_FROZEN,
            Error::Truncated(_) => EXIT_TRUNCATED,
            _ => EXIT_INPUT,
        };
        CliError { code, msg: e.to_string() }
    }
}

fn input_error(msg: impl Display) -> CliError {
    CliError {
        code: EXIT_INPUT,
        msg: msg.to_string(),
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

/// A file path, or a fixture name such as `a3` or `a3.json` when no such file exists.
fn load_seed(arg: &str) -> CliResult<SeedJson> {
    let path = Path::new(arg);
    if path.exists() {
        let text = read_file(path)?;
        return serde_json::from_str(&text).map_err(|e| input_error(format!("malformed seed JSON in {arg}: {e}")));
    }
    let name = arg.strip_suffix(".json").unwrap_or(arg);
    corpus::seed_fixture(name).map_err(|_| {
        input_error(format!(
            "seed {arg} is neither a readable file nor a fixture ({})",
            corpus::seed_names().join(", ")
        ))
    })
}

fn load_fan(path: &Path) -> CliResult<GFanAtlas> {
    let text = read_file(path)?;
    let f: FanJson =
        serde_json::from_str(&text).map_err(|e| input_error(format!("malformed fan JSON in {}: {e}", path.display())))?;
    Ok(GFanAtlas::from_fan_json(&f)?)
}

fn parse_freeze(s: &str, ex: &ExchangeData) -> CliResult<Vec<usize>> {
    let dirs = parse_path(s).map_err(|e| input_error(format!("--freeze: {e}")))?;
    if let Some(&k) = dirs.iter().find(|&&k| k >= ex.n()) {
        return Err(input_error(format!("--freeze: direction {} is not mutable", k + 1)));
    }
    Ok(dirs)
}

fn atlas_from(source: &Source) -> CliResult<GFanAtlas> {
    match (&source.seed, &source.fan) {
        (_, Some(f)) => load_fan(f),
        (Some(s), None) => {
            let ex = load_seed(s)?.exchange_data()?;
            let frozen = parse_freeze(&source.freeze, &ex)?;
            let atlas = enumerate_gfan(&ex, &frozen, source.depth)?;
            warn_truncated(&atlas);
            Ok(atlas)
        }
        (None, None) => Err(input_error("one of --seed or --fan is required")),
    }
}

fn warn_truncated(atlas: &GFanAtlas) {
    if atlas.truncated {
        eprintln!(
            "warning: truncated at depth {}; enumeration is incomplete and finite-type commands will refuse this atlas",
            atlas.depth_cap
        );
    }
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| input_error(e.to_string()))?;
    outln!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct MutateOut {
    path: Vec<usize>,
    seed: SeedJson,
    coefficients: Vec<String>,
    variables: Vec<String>,
}

fn cmd_mutate(json: bool, seed: &str, path: &str, with: Option<&str>, cluster: bool) -> CliResult<u8> {
    let sj = load_seed(seed)?;
    let ex = sj.exchange_data()?;
    let path = parse_path(path)?;
    let size = ex.size();
    let p: Vec<TropMonomial> = match with {
        None => sj.coefficients()?,
        Some("none") => vec![TropMonomial::one(0); size],
        Some("principal") => (0..size).map(|i| TropMonomial::generator(size, i)).collect(),
        Some(s) if s.starts_with("trop:") => {
            let r: usize = s[5..].parse().map_err(|_| input_error(format!("--with-coeffs: bad rank in {s}")))?;
            if sj.coeff_rank != r {
                return Err(input_error(format!(
                    "--with-coeffs {s}: the seed file has coefficients of rank {}",
                    sj.coeff_rank
                )));
            }
            sj.coefficients()?
        }
        Some(s) => return Err(input_error(format!("--with-coeffs: expected principal, none or trop:r, got {s}"))),
    };
    let r = p.first().map_or(0, TropMonomial::rank);
    let (vars, out_ex, out_p) = if cluster {
        let s = ClusterSeed::initial(&ex, p, "x", "p")?.mutate_path(&path)?;
        (s.x.iter().map(ToString::to_string).collect::<Vec<_>>(), s.ex, s.p)
    } else {
        let s = YSeed::initial(&ex, p, "y", "p")?.mutate_path(&path)?;
        (s.y.iter().map(ToString::to_string).collect::<Vec<_>>(), s.ex, s.p)
    };
    let names: Vec<String> = (1..=r).map(|i| format!("p{i}")).collect();
    let coefficients: Vec<String> = out_p.iter().map(|t| trop_to_string(t, &names)).collect();
    let mut out_seed = SeedJson::from_exchange(&out_ex);
    out_seed.coeff_rank = r;
    out_seed.p = out_p.iter().map(|t| t.exps().to_vec()).collect();
    if json {
        print_json(&MutateOut {
            path: path.iter().map(|k| k + 1).collect(),
            seed: out_seed,
            coefficients,
            variables: vars,
        })?;
    } else {
        let sym = if cluster { "x" } else { "y" };
        outln!("path: {}", if path.is_empty() { "(empty)".into() } else { format_path(&path) });
        outln!("B = {}", out_ex.b());
        outln!("d = {:?}", out_ex.d());
        for (i, (v, c)) in vars.iter().zip(&coefficients).enumerate() {
            outln!("{sym}{} = {v}    p{} = {c}", i + 1, i + 1);
        }
    }
    Ok(0)
}

fn cmd_fan(json: bool, seed: &str, freeze: &str, depth: usize, out: Option<&Path>) -> CliResult<u8> {
    let ex = load_seed(seed)?.exchange_data()?;
    let frozen = parse_freeze(freeze, &ex)?;
    let atlas = enumerate_gfan(&ex, &frozen, depth)?;
    warn_truncated(&atlas);
    let fan = atlas.to_fan_json();
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&fan).map_err(|e| input_error(e.to_string()))?;
        std::fs::write(path, text + "\n").map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?;
    }
    if json {
        print_json(&fan)?;
    } else {
        outln!(
            "{} cones, {} rays{}",
            atlas.cones.len(),
            fan.rays.len(),
            if atlas.truncated { " (truncated)" } else { "" }
        );
        for (i, r) in fan.rays.iter().enumerate() {
            outln!("ray {i}: {r:?}");
        }
        for id in 0..atlas.cones.len() {
            outln!("{}", cluster_forge::gfan::describe_cone(&atlas, id));
        }
    }
    Ok(0)
}

fn parse_tau(atlas: &GFanAtlas, text: &str) -> CliResult<Vec<Vec<i64>>> {
    let rays = atlas.rays();
    let list = text
        .strip_prefix("ray:")
        .or_else(|| text.strip_prefix("rays:"))
        .ok_or_else(|| input_error(format!("--tau: expected ray:i or rays:i,j, got {text}")))?;
    list.split(',')
        .map(|t| {
            let i: usize = t.trim().parse().map_err(|_| input_error(format!("--tau: bad index {t:?}")))?;
            rays.get(i)
                .cloned()
                .ok_or_else(|| input_error(format!("--tau: ray {i} out of range (fan has {} rays)", rays.len())))
        })
        .collect()
}

#[derive(Serialize)]
struct VerifyOut<'a> {
    check: &'a str,
    total: usize,
    failed: usize,
    pass: bool,
    records: &'a [CheckRecord],
}

fn report(json: bool, check: &str, records: &[CheckRecord]) -> CliResult<u8> {
    let failed = records.iter().filter(|r| !r.pass).count();
    let pass = all_pass(records);
    if json {
        print_json(&VerifyOut {
            check,
            total: records.len(),
            failed,
            pass,
            records,
        })?;
    } else {
        for r in records {
            match &r.witness {
                Some(w) if !r.pass => outln!("FAIL {} {}: {w}", r.check, r.ids),
                _ => outln!("{} {} {}", if r.pass { "PASS" } else { "FAIL" }, r.check, r.ids),
            }
        }
        outln!("{check}: {} checks, {failed} failed", records.len());
    }
    Ok(if pass { 0 } else { EXIT_FAIL })
}

fn cmd_verify(
    json: bool,
    check: Check,
    source: &Source,
    paths: &str,
    max_len: usize,
    rng_seed: u64,
    tau: Option<&str>,
) -> CliResult<u8> {
    let (name, records) = match check {
        Check::Separation => {
            let sj = match (&source.seed, &source.fan) {
                (Some(s), _) => load_seed(s)?,
                (None, Some(f)) => load_fan(f).map(|a| SeedJson::from_exchange(&a.ex))?,
                (None, None) => return Err(input_error("one of --seed or --fan is required")),
            };
            let ex = sj.exchange_data()?;
            let p = sj.coefficients()?;
            let fixed_p = (sj.coeff_rank > 0).then_some(p.as_slice());
            let cases = if let Some(n) = paths.strip_prefix("random:") {
                let n: usize = n.parse().map_err(|_| input_error(format!("--paths: bad count in {paths}")))?;
                batches::separation_cases(Some((&ex, fixed_p)), n, max_len, rng_seed)
            } else {
                let mut r = batches::rng(rng_seed);
                paths
                    .split(';')
                    .map(|s| {
                        let path = parse_path(s)?;
                        let p0 = match fixed_p {
                            Some(p) => p.to_vec(),
                            None => batches::random_coeffs(&mut r, ex.size(), ex.size()),
                        };
                        Ok((ex.clone(), p0, path))
                    })
                    .collect::<cluster_forge::Result<Vec<_>>>()?
            };
            ("separation", batches::separation_batch(&cases)?)
        }
        Check::Duality => {
            let atlas = atlas_from(source)?;
            atlas.require_finite()?;
            ("duality", batches::duality_batch(&atlas))
        }
        Check::Signcoherence => {
            let atlas = atlas_from(source)?;
            atlas.require_finite()?;
            ("signcoherence", batches::sign_coherence_batch(&atlas))
        }
        Check::Cocycle => ("cocycle", cocycle_suite(&atlas_from(source)?, max_len)?),
        Check::Degree => ("degree", batches::degree_batch(&atlas_from(source)?)?),
        Check::Limit => ("limit", batches::limit_batch(&atlas_from(source)?)?),
        Check::Strata => {
            let atlas = atlas_from(source)?;
            let records = match tau {
                Some(t) => strata_consistency_check(&atlas, &parse_tau(&atlas, t)?)?,
                None => batches::strata_batch(&atlas)?,
            };
            ("strata", records)
        }
        Check::Glue => ("glue", batches::glue_batch(&atlas_from(source)?)?),
    };
    report(json, name, &records)
}

fn parse_rationals(s: &str) -> CliResult<Vec<BigRational>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let parsed = match t.split_once('/') {
                Some((a, b)) => a.parse::<i64>().ok().zip(b.parse::<i64>().ok()).filter(|(_, b)| *b != 0),
                None => t.parse::<i64>().ok().map(|a| (a, 1)),
            };
            parsed
                .map(|(a, b)| BigRational::new(a.into(), b.into()))
                .ok_or_else(|| input_error(format!("--at: bad rational {t:?}")))
        })
        .collect()
}

#[derive(Serialize)]
struct WallOut {
    source: usize,
    target: usize,
    direction: usize,
    pullback: Vec<String>,
}

fn cmd_degenerate(json: bool, source: &Source, at: &str) -> CliResult<u8> {
    let atlas = atlas_from(source)?;
    atlas.require_finite()?;
    let u = parse_rationals(at)?;
    if u.len() != atlas.dim() {
        return Err(input_error(format!("--at: expected {} values, got {}", atlas.dim(), u.len())));
    }
    let mut walls = Vec::new();
    for (g, k, g2) in atlas.walls() {
        let t = transition(&atlas, g, g2, k)?;
        let maps = specialize_fiber(&t, &u)?;
        walls.push(WallOut {
            source: g,
            target: g2,
            direction: k + 1,
            pullback: maps.iter().map(ToString::to_string).collect(),
        });
    }
    if json {
        print_json(&walls)?;
    } else {
        let toric = u.iter().all(num_traits::Zero::is_zero);
        outln!(
            "{} over u = ({})",
            if toric { "toric gluing" } else { "transition maps" },
            u.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        );
        for w in &walls {
            let coords: Vec<String> = w.pullback.iter().enumerate().map(|(i, f)| format!("X'{} = {f}", i + 1)).collect();
            outln!("cone {} -> cone {} (direction {}): {}", w.source, w.target, w.direction, coords.join(", "));
        }
    }
    Ok(0)
}

fn cmd_table(json: bool, name: &str) -> CliResult<u8> {
    let r = run_table(name)?;
    if json {
        print_json(&r)?;
    } else {
        out!("{}", r.table);
        for f in r.failures() {
            eprintln!("FAIL {} {}: {}", f.check, f.ids, f.witness.clone().unwrap_or_default());
        }
    }
    Ok(if r.pass() { 0 } else { EXIT_FAIL })
}

fn cmd_star(json: bool, fan: &Path, tau: &str) -> CliResult<u8> {
    let atlas = load_fan(fan)?;
    let t = parse_tau(&atlas, tau)?;
    let s = star(&atlas, &t)?;
    if json {
        print_json(&s)?;
    } else {
        outln!("tau = {t:?}");
        outln!("reference cone {} with remaining labels {:?}", s.reference, s.index_set.iter().map(|i| i + 1).collect::<Vec<_>>());
        outln!("cones containing tau: {:?}", s.cones);
        for (i, r) in s.rays.iter().enumerate() {
            outln!("ray {i}: {r:?}");
        }
        outln!("maximal cones: {:?}", s.maximal_cones);
        outln!("restricted B: {:?}", s.restricted_b);
    }
    Ok(0)
}

fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("CLUSTER_FORGE_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| input_error(format!("CLUSTER_FORGE_THREADS must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| input_error(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<u8> {
    configure_threads()?;
    let json = cli.json;
    match cli.command {
        Command::Mutate {
            seed,
            path,
            with_coeffs,
            cluster,
        } => cmd_mutate(json, &seed, &path, with_coeffs.as_deref(), cluster),
        Command::Fan { seed, freeze, depth, out } => cmd_fan(json, &seed, &freeze, depth, out.as_deref()),
        Command::Verify {
            check,
            source,
            paths,
            max_len,
            rng_seed,
            tau,
        } => cmd_verify(json, check, &source, &paths, max_len, rng_seed, tau.as_deref()),
        Command::Degenerate { source, at } => cmd_degenerate(json, &source, &at),
        Command::Table { name } => cmd_table(json, &name),
        Command::Star { fan, tau } => cmd_star(json, &fan, &tau),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
