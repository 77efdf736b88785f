//! Command-line front end: spectrum/basis computation with caching,
//! benchmark tables, approximation sweeps, the inequality suite, and the
//! Nystrom cross-check.

use clap::{Parser, Subcommand, ValueEnum};
use prolate_core::approx::{
    coeff_closed_form, coeff_fourier, coeff_quadrature, example1_report, fmt_g9, grid_error,
    sobolev_report, write_sweep_csv, ExpansionCoefficients, FunctionSpec,
};
use prolate_core::bounds;
use prolate_core::pswf::{build_basis, cache_file_name, load_basis, save_basis, PswfBasis};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Accepts plain reals and pi-multiples: "10", "20pi", "pi".
fn parse_real_pi(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    if let Some(head) = lower.strip_suffix("pi") {
        let factor = if head.is_empty() {
            1.0
        } else {
            head.parse::<f64>().map_err(|e| e.to_string())?
        };
        return Ok(factor * std::f64::consts::PI);
    }
    t.parse::<f64>().map_err(|e| e.to_string())
}

fn parse_bandwidth(s: &str) -> Result<f64, String> {
    let v = parse_real_pi(s)?;
    if v <= 0.0 || !v.is_finite() {
        return Err(format!("bandwidth must be positive, got {v}"));
    }
    Ok(v)
}

fn parse_real_list(s: &str) -> Result<Vec<f64>, String> {
    let items: Result<Vec<f64>, _> = s.split(',').map(parse_real_pi).collect();
    let items = items?;
    if items.is_empty() {
        return Err("empty list".into());
    }
    Ok(items)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "prolate",
    about = "Prolate spheroidal wave functions: spectra, evaluation, and spectral approximation on [-1,1]",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues chi_n, lambda_n, |mu_n| for n = 0..=n_max (cached basis)
    Spectrum {
        #[arg(long, value_parser = parse_bandwidth, allow_hyphen_values = true)]
        c: f64,
        #[arg(long = "n-max")]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "cache-dir")]
        cache_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Evaluate psi_n at uniformly spaced points of [-1,1]
    Eval {
        #[arg(long, value_parser = parse_bandwidth, allow_hyphen_values = true)]
        c: f64,
        #[arg(long)]
        n: usize,
        /// number of evaluation points
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "cache-dir")]
        cache_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// L2 tails of the Legendre and PSWF expansions of e^{i lambda x}
    Example1 {
        #[arg(long, value_parser = parse_real_pi, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, value_parser = parse_bandwidth, allow_hyphen_values = true)]
        c: f64,
        #[arg(long = "N")]
        n_trunc: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "cache-dir")]
        cache_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Grid errors E_N(s) of truncated expansions of the lacunary cosine
    /// series (modes 0..=N kept per row)
    Table1 {
        #[arg(long, value_parser = parse_bandwidth, default_value = "100", allow_hyphen_values = true)]
        c: f64,
        /// comma-separated truncation orders
        #[arg(long = "N-list", value_parser = parse_real_list, default_value = "20,30,40,50,60,70,80,90,100")]
        n_list: Vec<Vec<f64>>,
        /// comma-separated smoothness exponents
        #[arg(long = "s-list", value_parser = parse_real_list, default_value = "0.75,1.0,1.25,1.5,1.75,2.0")]
        s_list: Vec<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "cache-dir")]
        cache_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Approximation report sweep for a built-in target function
    Approx {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, value_parser = parse_real_pi, default_value = "50", allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long = "term-count", default_value_t = 4096)]
        term_count: usize,
        #[arg(long, value_parser = parse_bandwidth, allow_hyphen_values = true)]
        c: f64,
        #[arg(long = "N-list", value_parser = parse_real_list, default_value = "20,40,60,80,100")]
        n_list: Vec<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Route::Closed)]
        route: Route,
        /// quadrature size for the quadrature route and error measurement
        #[arg(long = "quad-order", default_value_t = 2048)]
        quad_order: usize,
        /// Fourier truncation for the resampling route
        #[arg(long = "fourier-K", default_value_t = 1024)]
        fourier_k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "cache-dir")]
        cache_dir: Option<PathBuf>,
    },
    /// Run the full inequality suite; exit 1 on any violation
    Check {
        #[arg(long, value_parser = parse_real_list, required = true)]
        c: Vec<Vec<f64>>,
        /// override the default n_max = ceil(1.5 c) + 30
        #[arg(long = "n-max")]
        n_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "cache-dir")]
        cache_dir: Option<PathBuf>,
    },
    /// Compare lambda_n against the independent Nystrom discretization
    OracleCompare {
        #[arg(long, value_parser = parse_bandwidth, allow_hyphen_values = true)]
        c: f64,
        #[arg(long = "n-count", default_value_t = 20)]
        n_count: usize,
        /// quadrature size (defaults to 4(n_count + c))
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "cache-dir")]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Exponential,
    Weierstrass,
    Random,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    Quadrature,
    Fourier,
    Closed,
}

/// Cache directory: PROLATE_CACHE_DIR overrides --cache-dir; the system
/// temporary directory is the fallback.
fn cache_dir(flag: Option<&Path>) -> PathBuf {
    if let Ok(env) = std::env::var("PROLATE_CACHE_DIR") {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    flag.map(Path::to_path_buf)
        .unwrap_or_else(|| std::env::temp_dir().join("prolate-cache"))
}

fn load_or_build(c: f64, n_max: usize, dir: &Path) -> Result<PswfBasis, String> {
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let path = dir.join(cache_file_name(c, n_max));
    if path.exists() {
        if let Ok(basis) = load_basis(&path) {
            if basis.c() == c && basis.n_max() == n_max {
                return Ok(basis);
            }
        }
        // stale or unreadable: fall through and rebuild
    }
    let basis = build_basis(c, n_max).map_err(|e| e.to_string())?;
    save_basis(&basis, &path).map_err(|e| e.to_string())?;
    Ok(basis)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| e.to_string()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn csv_to_json(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = String::from("{\"schema\":1,\"rows\":[");
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push('{');
        for (j, (h, v)) in header.iter().zip(row).enumerate() {
            if j > 0 {
                s.push(',');
            }
            s.push_str(&format!("\"{h}\":{v}"));
        }
        s.push('}');
    }
    s.push_str("]}\n");
    s
}

fn flatten(lists: Vec<Vec<f64>>) -> Vec<f64> {
    lists.into_iter().flatten().collect()
}

fn run() -> Result<u8, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Spectrum {
            c,
            n_max,
            out,
            cache_dir: cd,
            format,
        } => {
            let basis = load_or_build(c, n_max, &cache_dir(cd.as_deref()))?;
            let header = ["n", "chi", "lambda", "mu_abs", "beta_tail_mass"];
            let rows: Vec<Vec<String>> = (0..=n_max)
                .map(|n| {
                    let slice = basis.slice(if n % 2 == 0 {
                        prolate_core::eigensystem::Parity::Even
                    } else {
                        prolate_core::eigensystem::Parity::Odd
                    });
                    let tail = slice.tail_mass(n / 2);
                    vec![
                        n.to_string(),
                        fmt_g9(basis.chi(n)),
                        fmt_g9(basis.lambda(n)),
                        fmt_g9(basis.mu_abs(n)),
                        fmt_g9(tail),
                    ]
                })
                .collect();
            let text = match format {
                Format::Csv => {
                    let mut t = format!(
                        "# schema=1 c={} n_max={}\n{}\n",
                        fmt_g9(c),
                        n_max,
                        header.join(",")
                    );
                    for row in &rows {
                        t.push_str(&row.join(","));
                        t.push('\n');
                    }
                    t
                }
                Format::Json => csv_to_json(&header, &rows),
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Eval {
            c,
            n,
            points,
            out,
            cache_dir: cd,
            format,
        } => {
            if points < 2 {
                return Err("need at least 2 points".into());
            }
            let basis = load_or_build(c, n.max(1), &cache_dir(cd.as_deref()))?;
            let xs: Vec<f64> = (0..points)
                .map(|i| -1.0 + 2.0 * i as f64 / (points as f64 - 1.0))
                .collect();
            let vals = basis.evaluate_many(n + 1, &xs).map_err(|e| e.to_string())?;
            let header = ["x", "psi"];
            let rows: Vec<Vec<String>> = xs
                .iter()
                .zip(&vals[n])
                .map(|(&x, &v)| vec![fmt_g9(x), fmt_g9(v)])
                .collect();
            let text = match format {
                Format::Csv => {
                    let mut t = format!(
                        "# schema=1 c={} n={}\n{}\n",
                        fmt_g9(c),
                        n,
                        header.join(",")
                    );
                    for row in &rows {
                        t.push_str(&row.join(","));
                        t.push('\n');
                    }
                    t
                }
                Format::Json => csv_to_json(&header, &rows),
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Example1 {
            lambda,
            c,
            n_trunc,
            out,
            cache_dir: cd,
            format,
        } => {
            let n_max = n_trunc + 60 + (0.2 * c) as usize;
            let basis = load_or_build(c, n_max, &cache_dir(cd.as_deref()))?;
            let rep = example1_report(&basis, lambda, n_trunc).map_err(|e| e.to_string())?;
            let header = ["lambda", "c", "N", "legendre_error", "pswf_error"];
            let row = vec![
                fmt_g9(lambda),
                fmt_g9(c),
                n_trunc.to_string(),
                fmt_g9(rep.legendre_error),
                fmt_g9(rep.pswf_error),
            ];
            let text = match format {
                Format::Csv => format!("# schema=1\n{}\n{}\n", header.join(","), row.join(",")),
                Format::Json => csv_to_json(&header, &[row]),
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Table1 {
            c,
            n_list,
            s_list,
            out,
            cache_dir: cd,
            format,
        } => {
            let n_list: Vec<usize> = flatten(n_list).iter().map(|&x| x.round() as usize).collect();
            let s_list = flatten(s_list);
            let n_top = *n_list.iter().max().unwrap();
            let basis = load_or_build(c, n_top + 8, &cache_dir(cd.as_deref()))?;
            let mut coeff_cols: Vec<ExpansionCoefficients> = vec![];
            for &s in &s_list {
                let f = FunctionSpec::Weierstrass { s };
                coeff_cols
                    .push(coeff_closed_form(&f, &basis, n_top + 2).map_err(|e| e.to_string())?);
            }
            let mut grid: Vec<Vec<String>> = vec![];
            for &n in &n_list {
                let mut row = vec![n.to_string()];
                for (si, &s) in s_list.iter().enumerate() {
                    let f = FunctionSpec::Weierstrass { s };
                    let e =
                        grid_error(&f, &coeff_cols[si], &basis, n + 1).map_err(|e| e.to_string())?;
                    row.push(fmt_g9(e));
                }
                grid.push(row);
            }
            let mut header = vec!["N".to_string()];
            header.extend(s_list.iter().map(|s| format!("s={s}")));
            let text = match format {
                Format::Csv => {
                    let mut t = format!("# schema=1 c={}\n{}\n", fmt_g9(c), header.join(","));
                    for row in &grid {
                        t.push_str(&row.join(","));
                        t.push('\n');
                    }
                    t
                }
                Format::Json => {
                    let hdr: Vec<&str> = header.iter().map(String::as_str).collect();
                    csv_to_json(&hdr, &grid)
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Approx {
            kind,
            s,
            lambda,
            seed,
            term_count,
            c,
            n_list,
            route,
            quad_order,
            fourier_k,
            out,
            cache_dir: cd,
        } => {
            let f = match kind {
                Kind::Exponential => FunctionSpec::Exponential { lambda },
                Kind::Weierstrass => FunctionSpec::Weierstrass { s },
                Kind::Random => FunctionSpec::RandomSeries {
                    s,
                    seed,
                    term_count,
                },
            };
            let n_list: Vec<usize> = flatten(n_list).iter().map(|&x| x.round() as usize).collect();
            let n_top = *n_list.iter().max().unwrap();
            let basis = load_or_build(c, n_top + 8, &cache_dir(cd.as_deref()))?;
            let coeffs = match route {
                Route::Closed => coeff_closed_form(&f, &basis, n_top + 1),
                Route::Quadrature => coeff_quadrature(&f, &basis, n_top + 1, quad_order),
                Route::Fourier => {
                    let content = f.frequency_content().map_err(|e| e.to_string())?;
                    // b_k of the built-in kinds: amplitude at w = k pi times sqrt 2
                    let b = move |k: i64| {
                        let w = k as f64 * std::f64::consts::PI;
                        content
                            .iter()
                            .filter(|(wj, _)| (wj - w).abs() < 1e-9)
                            .map(|&(_, a)| a * 2f64.sqrt())
                            .sum()
                    };
                    coeff_fourier(b, &basis, n_top + 1, fourier_k)
                }
            }
            .map_err(|e| e.to_string())?;
            let mut reports = vec![];
            for &n in &n_list {
                reports.push(
                    sobolev_report(&f, &basis, &coeffs, n, quad_order)
                        .map_err(|e| e.to_string())?,
                );
            }
            let text = format!("# schema=1\n{}", write_sweep_csv(&reports));
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Check {
            c,
            n_max,
            out,
            cache_dir: cd,
        } => {
            let mut text = String::from("# schema=1 inequality suite\n");
            let mut violations = 0usize;
            for &cv in &flatten(c) {
                let nm = n_max.unwrap_or((1.5 * cv).ceil() as usize + 30);
                let basis = load_or_build(cv, nm, &cache_dir(cd.as_deref()))?;
                let fixture = format!("c={cv},n_max={nm}");
                let reports = bounds::run_all_checks(&basis).map_err(|e| e.to_string())?;
                for rep in &reports {
                    violations += rep.violations.len();
                    text.push_str(&rep.to_lines(&fixture));
                }
            }
            text.push_str(&format!("# total_violations={violations}\n"));
            emit(out.as_deref(), &text)?;
            Ok(if violations == 0 { 0 } else { 1 })
        }
        Command::OracleCompare {
            c,
            n_count,
            m,
            tol,
            out,
            cache_dir: cd,
        } => {
            let basis = load_or_build(c, n_count.saturating_sub(1), &cache_dir(cd.as_deref()))?;
            let m = m.unwrap_or_else(|| (4.0 * (n_count as f64 + c)).ceil() as usize);
            let ny = prolate_oracle::nystrom_lambda(c, m, n_count);
            let header = ["n", "lambda", "lambda_nystrom", "rel_dev"];
            let mut worst = 0.0f64;
            let rows: Vec<Vec<String>> = (0..n_count)
                .map(|n| {
                    let a = basis.lambda(n);
                    let b = ny.lambda[n];
                    let rel = if b != 0.0 { (a - b).abs() / b.abs() } else { 0.0 };
                    if b > 1e-12 {
                        worst = worst.max(rel);
                    }
                    vec![n.to_string(), fmt_g9(a), fmt_g9(b), fmt_g9(rel)]
                })
                .collect();
            let mut text = format!(
                "# schema=1 c={} m={} tol={}\n{}\n",
                fmt_g9(c),
                m,
                fmt_g9(tol),
                header.join(",")
            );
            for row in &rows {
                text.push_str(&row.join(","));
                text.push('\n');
            }
            text.push_str(&format!("# worst_rel_dev={}\n", fmt_g9(worst)));
            emit(out.as_deref(), &text)?;
            Ok(if worst <= tol { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
