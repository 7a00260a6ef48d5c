//! `zqdist` command-line front end.
//!
//! Every subcommand emits one table row per instance, as CSV (default) or
//! JSON. Output goes to `--out`, else to `$ZQDIST_OUT_DIR/<subcommand>.<ext>`
//! when that variable is set, else to stdout.
//!
//! Exit codes: 0 success, 1 a check failed or results disagreed, 2 usage,
//! domain, budget, parse or I/O error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::Modulus;
use crate::distset::io::{load_point_set, write_point_set};
use crate::distset::{
    certificate_check, construct_even_weight, construct_zero_distance_lattice, nu_autocorrelation,
    nu_brute_all, sample_random_set, theorem_threshold, PointSet, SpectralNu, SphereRoute,
    DEFAULT_PAIR_BUDGET,
};
use crate::error::{Error, Result};
use crate::gauss::{gauss_brute, gauss_general};
use crate::grid::{Shape, DEFAULT_GRID_BUDGET};
use crate::sphere::{
    decay_report, sphere_count_formula, sphere_counts_enumerate, sphere_fourier_direct_all,
    sphere_fourier_formula, sphere_size_bound_check, SphereSpec,
};
use crate::verify::{self, CheckRow, VerifyConfig};

pub const OUT_DIR_ENV: &str = "ZQDIST_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "zqdist",
    version,
    about = "Distance sets, spheres and Gauss sums over Z_q^d"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output file; defaults to $ZQDIST_OUT_DIR/<subcommand>.<ext>, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Budgets {
    /// Largest grid size q^d any step may allocate.
    #[arg(long, default_value_t = DEFAULT_GRID_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    grid_budget: u64,
    /// Largest |E|^2 for exact pair loops.
    #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    pair_budget: u64,
}

#[derive(Debug, Args)]
struct Sweep {
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<usize>,
    #[command(flatten)]
    t: TSelection,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct TSelection {
    /// Every t in Z_q (the default).
    #[arg(long)]
    all_t: bool,
    #[arg(long, value_delimiter = ',')]
    t: Vec<u64>,
}

impl TSelection {
    fn values(&self, q: u64) -> Result<Vec<u64>> {
        if self.t.is_empty() {
            return Ok((0..q).collect());
        }
        let ts: BTreeSet<u64> = self.t.iter().copied().collect();
        if let Some(bad) = ts.iter().find(|&&t| t >= q) {
            return Err(Error::Domain(format!("t = {bad} is not in Z_{q}")));
        }
        Ok(ts.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Construction {
    /// Even-weight vectors in Z_2^d.
    EvenWeight,
    /// (p^ceil(l/2) Z_{p^l})^d.
    Lattice,
}

#[derive(Debug, Args)]
struct ConstructionParams {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    l: Option<u32>,
}

impl ConstructionParams {
    fn build(&self, which: Construction) -> Result<PointSet> {
        let d = self
            .d
            .ok_or_else(|| Error::Domain("construction needs --d".into()))?;
        match which {
            Construction::EvenWeight => construct_even_weight(d),
            Construction::Lattice => {
                let p = self
                    .p
                    .ok_or_else(|| Error::Domain("lattice needs --p".into()))?;
                let l = self
                    .l
                    .ok_or_else(|| Error::Domain("lattice needs --l".into()))?;
                construct_zero_distance_lattice(p, l, d)
            }
        }
    }
}

#[derive(Debug, Args)]
struct SetSource {
    /// Point-set file (`q=<int> d=<int>` header, one point per line).
    #[arg(long, conflicts_with_all = ["random", "construct"])]
    input: Option<PathBuf>,
    /// Draw this many distinct random points from Z_q^d.
    #[arg(long, requires_all = ["q", "d"], conflicts_with = "construct")]
    random: Option<usize>,
    #[arg(long, value_enum)]
    construct: Option<Construction>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random sets, seeded `seed, seed+1, ...`.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    sets: u64,
}

impl SetSource {
    fn load(&self) -> Result<Vec<(String, PointSet)>> {
        if let Some(path) = &self.input {
            return Ok(vec![(path.display().to_string(), load_point_set(path)?)]);
        }
        if let Some(size) = self.random {
            let (q, d) = (self.q.unwrap_or_default(), self.d.unwrap_or_default());
            return (0..self.sets)
                .map(|i| {
                    let seed = self.seed.wrapping_add(i);
                    Ok((
                        format!("random size={size} seed={seed}"),
                        sample_random_set(q, d, size, seed)?,
                    ))
                })
                .collect();
        }
        if let Some(which) = self.construct {
            let params = ConstructionParams {
                d: self.d,
                p: self.p,
                l: self.l,
            };
            let name = which
                .to_possible_value()
                .map(|v| v.get_name().to_string())
                .unwrap_or_default();
            return Ok(vec![(name, params.build(which)?)]);
        }
        Err(Error::Domain(
            "give one of --input, --random or --construct".into(),
        ))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate G(a,b,n) symbolically or verify it against direct summation.
    Gauss {
        #[arg(long, allow_negative_numbers = true)]
        a: Option<i64>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        b: i64,
        #[arg(long)]
        n: Option<u64>,
        /// Compare every (a, b) for n = 1..=n-max with direct summation.
        #[arg(long, conflicts_with_all = ["a", "n"])]
        verify: bool,
        #[arg(long, default_value_t = 99)]
        n_max: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Sphere sizes by enumeration, formula and CRT product, with error bounds.
    Sphere {
        #[command(flatten)]
        sweep: Sweep,
        #[command(flatten)]
        budgets: Budgets,
        #[command(flatten)]
        output: Output,
    },
    /// Sphere Fourier coefficients by two routes, with the decay bound.
    Spectrum {
        #[command(flatten)]
        sweep: Sweep,
        #[command(flatten)]
        budgets: Budgets,
        #[command(flatten)]
        output: Output,
    },
    /// Exact and spectral pair counts nu(t) for a point set.
    Nu {
        #[command(flatten)]
        source: SetSource,
        #[command(flatten)]
        t: TSelection,
        #[command(flatten)]
        budgets: Budgets,
        #[command(flatten)]
        output: Output,
    },
    /// Positivity certificate M - R_bound > 0 against exact counts.
    Certificate {
        #[command(flatten)]
        source: SetSource,
        /// The constant C in the size threshold C tau(q) q^d p_1^(-(d-2)/2).
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[command(flatten)]
        budgets: Budgets,
        #[command(flatten)]
        output: Output,
    },
    /// Write a structured point set as a point-set file.
    Construct {
        #[arg(value_enum)]
        which: Construction,
        #[command(flatten)]
        params: ConstructionParams,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The full verification suite.
    VerifyAll {
        /// Smaller sweep sizes for a fast smoke run.
        #[arg(long)]
        quick: bool,
        /// Skip the Z_9^6 spectral-only run.
        #[arg(long)]
        no_large_run: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Serialize)]
struct GaussRow {
    a: i64,
    b: i64,
    n: u64,
    symbolic: String,
    re: f64,
    im: f64,
    magnitude_sq_exact: Option<u128>,
    brute_re: f64,
    brute_im: f64,
    abs_error: f64,
}

#[derive(Debug, Serialize)]
struct SphereRow {
    q: u64,
    d: usize,
    t: u64,
    count_enumerated: u64,
    count_formula: u64,
    count_crt: u64,
    main_term: u64,
    error_term: f64,
    error_bound: Option<f64>,
    ratio_to_bound: Option<f64>,
    max_factor_ratio_to_bound: Option<f64>,
    counts_agree: bool,
    bound_holds: Option<bool>,
}

#[derive(Debug, Serialize)]
struct SpectrumRow {
    q: u64,
    d: usize,
    t: u64,
    sphere_size: u64,
    route_max_abs_diff: f64,
    max_nonzero_coeff_abs: f64,
    decay_bound: Option<f64>,
    ratio_to_bound: Option<f64>,
    bound_holds: Option<bool>,
}

#[derive(Debug, Serialize)]
struct NuRow {
    set: String,
    q: u64,
    d: usize,
    size: usize,
    t: u64,
    nu_exact: u64,
    nu_spectral: Option<u64>,
    main_term: Option<f64>,
    remainder: Option<f64>,
    remainder_bound: Option<f64>,
    in_distance_set: bool,
    agree: bool,
}

#[derive(Debug, Serialize)]
struct CertificateCsvRow {
    set: String,
    q: u64,
    d: usize,
    size: usize,
    t: u64,
    nu_exact: u64,
    nu_spectral: u64,
    main_term: f64,
    remainder: f64,
    remainder_bound: f64,
    margin_main_minus_abs_remainder: f64,
    certificate_positive: bool,
    sound: bool,
    size_to_threshold_ratio: f64,
    c_ratio: f64,
    full_distance_set: bool,
}

/// Parses `argv` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Inconsistent(_) => 1,
                _ => 2,
            }
        }
    }
}

fn execute(command: Command) -> Result<bool> {
    match command {
        Command::Gauss {
            a,
            b,
            n,
            verify,
            n_max,
            output,
        } => {
            if verify {
                let rows = verify::gauss_rows(n_max)?;
                let ok = rows.iter().all(|r| r.pass);
                emit(&rows, &output, "gauss")?;
                return Ok(ok);
            }
            let (Some(a), Some(n)) = (a, n) else {
                return Err(Error::Domain("gauss needs --a and --n, or --verify".into()));
            };
            if n == 0 {
                return Err(Error::Domain("n must be positive".into()));
            }
            let value = gauss_general(a, b, n)?;
            let z = value.complex();
            let brute = gauss_brute(a, b, n);
            let row = GaussRow {
                a,
                b,
                n,
                symbolic: value.to_string(),
                re: z.re,
                im: z.im,
                magnitude_sq_exact: value.magnitude_sq(),
                brute_re: brute.re,
                brute_im: brute.im,
                abs_error: (z - brute).norm(),
            };
            let ok = row.abs_error < crate::tolerances::GAUSS_ORACLE_REL * n as f64;
            emit(&[row], &output, "gauss")?;
            Ok(ok)
        }
        Command::Sphere {
            sweep,
            budgets,
            output,
        } => {
            let mut rows = Vec::new();
            for &q in &sweep.q {
                for &d in &sweep.d {
                    rows.extend(sphere_sweep(q, d, &sweep.t, &budgets)?);
                }
            }
            let ok = rows
                .iter()
                .all(|r| r.counts_agree && r.bound_holds != Some(false));
            emit(&rows, &output, "sphere")?;
            Ok(ok)
        }
        Command::Spectrum {
            sweep,
            budgets,
            output,
        } => {
            let mut rows = Vec::new();
            for &q in &sweep.q {
                for &d in &sweep.d {
                    rows.extend(spectrum_sweep(q, d, &sweep.t, &budgets)?);
                }
            }
            let ok = rows.iter().all(|r| {
                r.route_max_abs_diff <= crate::tolerances::SPECTRUM_AGREEMENT_ABS
                    && r.bound_holds != Some(false)
            });
            emit(&rows, &output, "spectrum")?;
            Ok(ok)
        }
        Command::Nu {
            source,
            t,
            budgets,
            output,
        } => {
            let mut rows = Vec::new();
            for (name, e) in source.load()? {
                rows.extend(nu_rows(&name, &e, &t, &budgets)?);
            }
            let ok = rows.iter().all(|r| r.agree);
            emit(&rows, &output, "nu")?;
            Ok(ok)
        }
        Command::Certificate {
            source,
            c,
            budgets,
            output,
        } => certificate(&source, c, &budgets, &output),
        Command::Construct { which, params, out } => {
            let e = params.build(which)?;
            let name = format!(
                "construct.{}.txt",
                which
                    .to_possible_value()
                    .map(|v| v.get_name().to_string())
                    .unwrap_or_default()
            );
            let mut buf = Vec::new();
            write_point_set(&e, &mut buf)?;
            write_output(&buf, out.as_deref(), &name)?;
            Ok(true)
        }
        Command::VerifyAll {
            quick,
            no_large_run,
            seed,
            output,
        } => {
            let mut cfg = if quick {
                quick_config()
            } else {
                VerifyConfig::default()
            };
            cfg.seed = seed;
            if no_large_run {
                cfg.large_run = false;
            }
            let rows = verify::verify_all(&cfg)?;
            let failed: Vec<&CheckRow> = rows.iter().filter(|r| !r.pass).collect();
            for r in &failed {
                eprintln!("FAIL {} {}", r.check, r.instance);
            }
            emit(&rows, &output, "verify-all")?;
            Ok(failed.is_empty())
        }
    }
}

/// A reduced sweep that runs in seconds.
pub fn quick_config() -> VerifyConfig {
    VerifyConfig {
        gauss_n_max: 30,
        fourier_q: vec![3, 5],
        fourier_d_max: 2,
        random_grids: 5,
        sphere_q: vec![3, 5, 9, 15],
        sphere_d: vec![3],
        spectrum_q: vec![3, 5],
        nu_q: vec![3, 5],
        nu_sets: 5,
        nu_max_size: 30,
        even_weight_d_max: 8,
        large_run: false,
        seed: 0,
    }
}

fn sphere_sweep(q: u64, d: usize, ts: &TSelection, budgets: &Budgets) -> Result<Vec<SphereRow>> {
    let enumerated = sphere_counts_enumerate(q, d, budgets.grid_budget)?;
    let modulus = Modulus::new(q)?;
    let bounded = modulus.is_odd() && d > 2;
    ts.values(q)?
        .into_iter()
        .map(|t| {
            let spec = SphereSpec::with_modulus(modulus.clone(), d, t as i64)?;
            let (count, bound) = if bounded {
                let b = sphere_size_bound_check(&spec)?;
                (b.count.clone(), Some(b))
            } else {
                (sphere_count_formula(&spec)?, None)
            };
            let counts_agree =
                count.exact_count == enumerated[t as usize] && count.crt_count == count.exact_count;
            Ok(SphereRow {
                q,
                d,
                t,
                count_enumerated: enumerated[t as usize],
                count_formula: count.exact_count,
                count_crt: count.crt_count,
                main_term: count.main_term,
                error_term: count.error_term.re,
                error_bound: bound.as_ref().map(|_| count.error_bound),
                ratio_to_bound: bound.as_ref().map(|b| b.combined_ratio),
                max_factor_ratio_to_bound: bound.as_ref().map(|b| b.max_ratio),
                counts_agree,
                bound_holds: bound.as_ref().map(|b| b.holds),
            })
        })
        .collect()
}

fn spectrum_sweep(
    q: u64,
    d: usize,
    ts: &TSelection,
    budgets: &Budgets,
) -> Result<Vec<SpectrumRow>> {
    let shape = Shape::with_budget(q, d, budgets.grid_budget)?;
    let direct = sphere_fourier_direct_all(q, d, budgets.grid_budget)?;
    let modulus = Modulus::new(q)?;
    let bounded = modulus.is_odd() && d > 2;
    ts.values(q)?
        .into_iter()
        .map(|t| {
            let spec = SphereSpec::with_modulus(modulus.clone(), d, t as i64)?;
            let spectrum = &direct[t as usize];
            let mut diff = 0.0f64;
            for (i, v) in spectrum.values().iter().enumerate() {
                diff = diff.max((sphere_fourier_formula(&spec, &shape.point_at(i))? - v).norm());
            }
            let report = decay_report(&spec, spectrum);
            let size = (spectrum.values()[0].re * shape.len() as f64).round() as u64;
            Ok(SpectrumRow {
                q,
                d,
                t,
                sphere_size: size,
                route_max_abs_diff: diff,
                max_nonzero_coeff_abs: report.max_nonzero_coeff,
                decay_bound: bounded.then_some(report.bound),
                ratio_to_bound: bounded.then_some(report.ratio),
                bound_holds: bounded.then_some(report.holds),
            })
        })
        .collect()
}

fn exact_counts(e: &PointSet, budgets: &Budgets) -> Result<Vec<u64>> {
    if (e.len() as u128).pow(2) <= budgets.pair_budget as u128 {
        nu_brute_all(e, budgets.pair_budget)
    } else {
        nu_autocorrelation(e, budgets.grid_budget)
    }
}

fn nu_rows(name: &str, e: &PointSet, ts: &TSelection, budgets: &Budgets) -> Result<Vec<NuRow>> {
    let exact = exact_counts(e, budgets)?;
    let spectral = if e.modulus().is_odd() {
        Some(SpectralNu::new(e.q(), e.d(), SphereRoute::Direct, budgets.grid_budget)?.reports(e)?)
    } else {
        None
    };
    let delta: Vec<u64> = (0..e.q()).filter(|&t| exact[t as usize] > 0).collect();
    eprintln!(
        "{name}: |E| = {}, distance set = {{{}}}",
        e.len(),
        join(&delta)
    );
    Ok(ts
        .values(e.q())?
        .into_iter()
        .map(|t| {
            let report = spectral.as_ref().map(|r| &r[t as usize]);
            let nu_exact = exact[t as usize];
            NuRow {
                set: name.to_string(),
                q: e.q(),
                d: e.d(),
                size: e.len(),
                t,
                nu_exact,
                nu_spectral: report.map(|r| r.nu),
                main_term: report.map(|r| r.main_term),
                remainder: report.map(|r| r.remainder),
                remainder_bound: report.map(|r| r.remainder_bound),
                in_distance_set: nu_exact > 0,
                agree: report.is_none_or(|r| r.nu == nu_exact),
            }
        })
        .collect())
}

fn certificate(source: &SetSource, c: f64, budgets: &Budgets, output: &Output) -> Result<bool> {
    let sets = source.load()?;
    let mut rows = Vec::new();
    let mut engine: Option<((u64, usize), SpectralNu)> = None;
    let mut empirical_c = 0.0f64;
    let mut threshold_value = 0.0;
    for (name, e) in &sets {
        let modulus = e.modulus().clone();
        let threshold = theorem_threshold(&modulus, e.d(), c)?;
        let unit = theorem_threshold(&modulus, e.d(), 1.0)?.value;
        threshold_value = threshold.value;
        let key = (e.q(), e.d());
        if engine.as_ref().is_none_or(|(k, _)| *k != key) {
            engine = Some((
                key,
                SpectralNu::new(e.q(), e.d(), SphereRoute::Direct, budgets.grid_budget)?,
            ));
        }
        let (_, engine) = engine.as_ref().expect("engine built above");
        let cert = certificate_check(e, engine, budgets.pair_budget)?;
        let full = cert.iter().all(|r| r.nu_exact > 0);
        let c_ratio = e.len() as f64 / unit;
        if !full {
            empirical_c = empirical_c.max(c_ratio);
        }
        for r in cert {
            rows.push(CertificateCsvRow {
                set: name.clone(),
                q: e.q(),
                d: e.d(),
                size: e.len(),
                t: r.report.t.value(),
                nu_exact: r.nu_exact,
                nu_spectral: r.report.nu,
                main_term: r.report.main_term,
                remainder: r.report.remainder,
                remainder_bound: r.report.remainder_bound,
                margin_main_minus_abs_remainder: r.margin,
                certificate_positive: r.report.certificate_positive,
                sound: r.sound,
                size_to_threshold_ratio: if threshold.value > 0.0 {
                    e.len() as f64 / threshold.value
                } else {
                    f64::INFINITY
                },
                c_ratio,
                full_distance_set: full,
            });
        }
    }
    eprintln!("threshold(C = {c}) = {threshold_value}; largest c_ratio with incomplete distance set = {empirical_c}");
    let ok = rows.iter().all(|r| r.sound && r.nu_spectral == r.nu_exact);
    emit(&rows, output, "certificate")?;
    Ok(ok)
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Serializes rows as CSV with `\n` terminators, or as a pretty JSON array.
pub fn render<R: Serialize>(rows: &[R], json: bool) -> Result<Vec<u8>> {
    if json {
        let mut buf = serde_json::to_vec_pretty(rows).map_err(|e| Error::Io(e.to_string()))?;
        buf.push(b'\n');
        return Ok(buf);
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

fn emit<R: Serialize>(rows: &[R], output: &Output, subcommand: &str) -> Result<()> {
    let buf = render(rows, output.format == Format::Json)?;
    let name = format!("{subcommand}.{}", output.format.extension());
    write_output(&buf, output.out.as_deref(), &name)
}

fn write_output(buf: &[u8], out: Option<&Path>, default_name: &str) -> Result<()> {
    let target = match out {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(OUT_DIR_ENV).map(|dir| PathBuf::from(dir).join(default_name)),
    };
    match target {
        Some(path) => {
            std::fs::write(&path, buf).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(buf)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        run(std::iter::once("zqdist").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(code(&[]), 2);
        assert_eq!(code(&["nope"]), 2);
        assert_eq!(code(&["sphere", "--q", "3"]), 2);
        assert_eq!(
            code(&["sphere", "--q", "3", "--d", "3", "--all-t", "--t", "1"]),
            2
        );
        assert_eq!(
            code(&["sphere", "--q", "3", "--d", "3", "--grid-budget", "0"]),
            2
        );
    }

    #[test]
    fn domain_and_budget_errors_exit_2() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("x.csv");
        let out = out.to_str().unwrap();
        assert_eq!(code(&["sphere", "--q", "1", "--d", "3", "--out", out]), 2);
        assert_eq!(code(&["sphere", "--q", "45", "--d", "6", "--out", out]), 2);
        assert_eq!(
            code(&["sphere", "--q", "3", "--d", "3", "--t", "5", "--out", out]),
            2
        );
        assert_eq!(code(&["gauss", "--a", "1", "--out", out]), 2);
        assert_eq!(
            code(&["nu", "--input", "/nonexistent/file", "--out", out]),
            2
        );
    }

    #[test]
    fn csv_uses_newlines_and_empty_options() {
        #[derive(Serialize)]
        struct R {
            x: f64,
            y: Option<f64>,
        }
        let buf = render(
            &[
                R { x: 0.5, y: None },
                R {
                    x: 2.0,
                    y: Some(1.0),
                },
            ],
            false,
        )
        .unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,y\n0.5,\n2.0,1.0\n");
    }
}
