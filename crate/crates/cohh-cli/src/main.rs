//! Command-line front end: axiom checking, coHH tables, and the suite
//! commands (cofree comparison, matching surjectivity, E2 page, collapse
//! verdict, catalog).
//!
//! Exit codes: 0 success, 1 mathematical failure (axiom violation,
//! comparison mismatch, out-of-scope query), 2 usage or parse error.
//! Output is deterministic: provenance headers carry the command and a
//! content digest, never timestamps.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use cohh::coalgebra::CoalgebraPresentation;
use cohh::complex::{BigradedTable, CohhResult};
use cohh::e2::{
    catalog, collapse_check, convergence_analysis, dr_differential, einfty_series, CatalogEntry,
    CollapseStatus,
};
use cohh::field::FieldSpec;
use cohh::format;
use cohh::hkr::{doi_resolution_check, hkr_compare};
use cohh::matching::verify_surjectivity;

#[derive(Parser)]
#[command(
    name = "cohh",
    about = "Exact coHochschild homology of graded coalgebras over Q or F_p",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Table,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a coalgebra file and report every axiom check.
    Check {
        path: PathBuf,
    },
    /// Compute the coHochschild homology table of a coalgebra file.
    Cohh(CohhArgs),
    /// Named verification suites: hkr, matching, e2, collapse, catalog.
    Suite {
        #[command(subcommand)]
        suite: SuiteCommand,
    },
}

#[derive(Args)]
struct CohhArgs {
    path: PathBuf,
    /// Restrict the window to this internal degree (must not exceed the
    /// file's max_degree).
    #[arg(long, env = "COHH_MAX_DEGREE")]
    max_degree: Option<usize>,
    /// Cap the cosimplicial degree; answers are labeled partial when this
    /// is below the internal-degree window. Zero-differential inputs only.
    #[arg(long)]
    max_s: Option<usize>,
    /// Report dimensions per bidegree (s, t). Default.
    #[arg(long, conflicts_with = "total")]
    bigraded: bool,
    /// Report dimensions per total degree (t - s for graded inputs, the
    /// total cochain degree for dg inputs).
    #[arg(long)]
    total: bool,
    #[arg(long, value_enum, default_value = "table")]
    emit: Emit,
    /// Include representative cycles in the output.
    #[arg(long)]
    reps: bool,
}

#[derive(Subcommand)]
enum SuiteCommand {
    /// Compare computed coHH of the cofree coalgebra on the given
    /// cogenerators against its closed-form bigraded table.
    Hkr {
        /// Cogenerators as name:degree pairs, e.g. "x:2,y:3".
        #[arg(long)]
        gens: String,
        #[arg(long, env = "COHH_FIELD", default_value = "F2")]
        field: String,
        #[arg(long, env = "COHH_MAX_DEGREE", default_value = "8")]
        max_degree: usize,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Verify matching-map surjectivity with constructive witnesses.
    Matching {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "2")]
        trials: usize,
    },
    /// Compute the E2 page (dimensions, cogenerator bidegrees, coproduct).
    E2 {
        #[arg(long)]
        input: PathBuf,
        /// Request a higher differential. Always fails: not computed.
        #[arg(long)]
        dr: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Decide the collapse certificate for a homology coalgebra.
    Collapse {
        #[arg(long)]
        input: PathBuf,
        /// Request convergence analysis. Always fails: not computed.
        #[arg(long)]
        convergence: bool,
        /// Also print the E∞ Poincaré series through this total degree.
        #[arg(long)]
        series_through: Option<usize>,
    },
    /// Emit a catalog coalgebra (BU(n), BSU(n), BSp(n), CPinf^n) as a file.
    Catalog {
        #[arg(long)]
        name: String,
        #[arg(long, env = "COHH_FIELD", default_value = "F2")]
        field: String,
        #[arg(long, env = "COHH_MAX_DEGREE", default_value = "8")]
        max_degree: usize,
    },
    /// Check exactness of the two-step cofree resolution for a single even
    /// cogenerator.
    Doi {
        #[arg(long, default_value = "2")]
        degree: usize,
        #[arg(long, env = "COHH_FIELD", default_value = "F2")]
        field: String,
        #[arg(long, env = "COHH_MAX_DEGREE", default_value = "8")]
        max_degree: usize,
    },
}


fn digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    out.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn read_input(path: &PathBuf) -> Result<(String, String), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let d = digest(text.as_bytes());
    Ok((text, d))
}

fn load_presentation(path: &PathBuf) -> Result<(CoalgebraPresentation, String), String> {
    let (text, d) = read_input(path)?;
    let c = format::parse_presentation(&text).map_err(|e| format!("{e}"))?;
    Ok((c, d))
}

fn provenance(command: &str, input_digest: &str, window: usize) -> String {
    format!("# cohh {command} | input sha256:{input_digest} | valid for internal degree <= {window}")
}

fn render_bigraded(
    table: &BigradedTable,
    emit: Emit,
    reps: bool,
    header: &str,
) -> String {
    let mut out = String::new();
    match emit {
        Emit::Table => {
            let _ = writeln!(out, "{header}");
            let _ = writeln!(out, "coHH dimensions by bidegree (rows s, columns t):");
            let mut col = String::from("   s\\t");
            for t in 0..=table.d_max {
                let _ = write!(col, "{t:>4}");
            }
            let _ = writeln!(out, "{col}");
            for s in 0..=table.s_max {
                if (0..=table.d_max).all(|t| table.dims[s][t] == 0) && s > 0 {
                    continue;
                }
                let _ = write!(out, "{s:>6}");
                for t in 0..=table.d_max {
                    let d = table.dims[s][t];
                    if d == 0 {
                        let _ = write!(out, "   ·");
                    } else {
                        let _ = write!(out, "{d:>4}");
                    }
                }
                let _ = writeln!(out);
            }
            if reps {
                let _ = writeln!(out, "representatives:");
                for s in 0..=table.s_max {
                    for t in 0..=table.d_max {
                        for r in &table.reps[s][t] {
                            let _ = writeln!(out, "  ({s},{t}): {}", r.rendered);
                        }
                    }
                }
            }
        }
        Emit::Csv => {
            let _ = writeln!(out, "{header}");
            if reps {
                let _ = writeln!(out, "s,t,dim,representative");
            } else {
                let _ = writeln!(out, "s,t,dim");
            }
            for s in 0..=table.s_max {
                for t in 0..=table.d_max {
                    let d = table.dims[s][t];
                    if d == 0 {
                        continue;
                    }
                    if reps {
                        for r in &table.reps[s][t] {
                            let _ = writeln!(out, "{s},{t},{d},\"{}\"", r.rendered);
                        }
                    } else {
                        let _ = writeln!(out, "{s},{t},{d}");
                    }
                }
            }
        }
        Emit::Json => {
            let mut entries = Vec::new();
            for s in 0..=table.s_max {
                for t in 0..=table.d_max {
                    let d = table.dims[s][t];
                    if d == 0 {
                        continue;
                    }
                    let mut obj = serde_json::json!({"s": s, "t": t, "dim": d});
                    if reps {
                        obj["representatives"] = serde_json::json!(table.reps[s][t]
                            .iter()
                            .map(|r| r.rendered.clone())
                            .collect::<Vec<_>>());
                    }
                    entries.push(obj);
                }
            }
            let doc = serde_json::json!({
                "provenance": header.trim_start_matches("# "),
                "table": entries,
            });
            out = serde_json::to_string_pretty(&doc).expect("json");
        }
    }
    out
}

fn run() -> Result<(), ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { path } => {
            let (text, d) = read_input(&path).map_err(usage)?;
            let c = format::parse_presentation(&text)
                .map_err(|e| usage(format!("parse error: {e}")))?;
            let report = cohh::check_coalgebra(&c);
            println!("{}", provenance("check", &d, c.truncation()));
            let flag = |ok: bool| if ok { "pass" } else { "FAIL" };
            println!("coassociativity   {}", flag(report.coassociative));
            println!("counitality       {}", flag(report.counital));
            println!("coaugmentation    {}", flag(report.coaugmented));
            println!("cocommutativity   {}", if report.cocommutative { "yes" } else { "no" });
            println!("conilpotency      {}", flag(report.conilpotent));
            println!("differential      {}", flag(report.differential_ok));
            for (axiom, who) in &report.witnesses {
                println!("  witness: {axiom} fails on {who}");
            }
            if report.ok() {
                Ok(())
            } else {
                Err(ExitCode::from(1))
            }
        }
        Command::Cohh(args) => {
            let (c, d) = load_presentation(&args.path).map_err(usage)?;
            let c = match args.max_degree {
                Some(max) => c.truncate(max).map_err(|e| usage(format!("{e}")))?,
                None => c,
            };
            let window = c.truncation();
            if let Some(s_cap) = args.max_s.filter(|s| *s < window) {
                if c.differential().is_some() {
                    return Err(usage("--max-s applies to zero-differential inputs only"));
                }
                let table = cohh::complex::cohh_bigraded_with_window(&c, s_cap).map_err(math)?;
                let header = format!(
                    "{} | partial: cosimplicial degree <= {s_cap}",
                    provenance("cohh", &d, window)
                );
                print!("{}", render_bigraded(&table, args.emit, args.reps, &header));
                return Ok(());
            }
            let result = cohh::complex::cohh(&c).map_err(math)?;
            let header = provenance("cohh", &d, window);
            match result {
                CohhResult::Bigraded(table) => {
                    if args.total {
                        println!("{header}");
                        println!("dimensions by total degree t - s:");
                        for (n, dim) in table.total_degree_dims() {
                            println!("{n:>4}: {dim}");
                        }
                    } else {
                        print!("{}", render_bigraded(&table, args.emit, args.reps, &header));
                    }
                }
                CohhResult::TotalComplex(table) => {
                    println!("{header}");
                    println!("dg input: homology of the total complex by cochain degree s + t:");
                    for (u, dim) in &table.dims {
                        println!("{u:>4}: {dim}");
                    }
                }
            }
            Ok(())
        }
        Command::Suite { suite } => run_suite(suite),
    }
}

fn run_suite(suite: SuiteCommand) -> Result<(), ExitCode> {
    match suite {
        SuiteCommand::Hkr {
            gens,
            field,
            max_degree,
            emit,
        } => {
            let field = FieldSpec::parse(&field).map_err(|e| usage(format!("{e}")))?;
            let gens = parse_gens(&gens).map_err(usage)?;
            let report = hkr_compare(&gens, field, max_degree).map_err(math)?;
            let gens_desc: Vec<String> =
                report.gens.iter().map(|(n, d)| format!("{n}:{d}")).collect();
            let header = provenance(
                &format!("suite hkr --gens {} --field {field}", gens_desc.join(",")),
                &digest(gens_desc.join(",").as_bytes()),
                max_degree,
            );
            print!(
                "{}",
                render_bigraded(&report.computed, emit, false, &header)
            );
            if report.matches {
                println!("HKR comparison: MATCH (computed coHH equals the cofree closed form)");
                Ok(())
            } else {
                println!("HKR comparison: MISMATCH");
                for (s, t, got, want) in &report.mismatches {
                    println!("  at ({s},{t}): computed {got}, expected {want}");
                }
                Err(ExitCode::from(1))
            }
        }
        SuiteCommand::Matching { input, n, trials } => {
            let (c, d) = load_presentation(&input).map_err(usage)?;
            let report = verify_surjectivity(&c, n, trials)
                .map_err(|e| math(format!("{e}")))?;
            println!(
                "{}",
                provenance(&format!("suite matching --n {n}"), &d, c.truncation())
            );
            println!("degree  dim M_n  rank σ  basis-witnesses  random-witnesses");
            for row in &report.per_degree {
                println!(
                    "{:>6}  {:>7}  {:>6}  {:>15}  {:>16}",
                    row.degree,
                    row.matching_dim,
                    row.matching_map_rank,
                    row.basis_tuples_verified,
                    row.random_tuples_verified
                );
            }
            if report.ok {
                println!("matching maps surjective with constructive witnesses");
                Ok(())
            } else {
                println!(
                    "surjectivity FAILED: {}",
                    report.counterexample.unwrap_or_default()
                );
                Err(ExitCode::from(1))
            }
        }
        SuiteCommand::E2 { input, dr, emit } => {
            if let Some(r) = dr {
                let err = dr_differential(r).unwrap_err();
                eprintln!("{err}");
                return Err(ExitCode::from(1));
            }
            let (c, d) = load_presentation(&input).map_err(usage)?;
            let page = cohh::e2::e2_page(&c).map_err(math)?;
            let header = provenance("suite e2", &d, c.truncation());
            print!(
                "{}",
                render_bigraded(&page.homology.table, emit, false, &header)
            );
            match &page.cogenerator_bidegrees {
                Some(bidegrees) => {
                    println!("cofree-type page; cogenerator bidegrees:");
                    for (name, (s, t)) in bidegrees {
                        println!("  {name} at ({s},{t})");
                    }
                }
                None => println!("input not recognized as cofree-type; dimensions only"),
            }
            Ok(())
        }
        SuiteCommand::Collapse {
            input,
            convergence,
            series_through,
        } => {
            if convergence {
                let err = convergence_analysis().unwrap_err();
                eprintln!("{err}");
                return Err(ExitCode::from(1));
            }
            let (c, d) = load_presentation(&input).map_err(usage)?;
            let verdict = collapse_check(&c);
            println!("{}", provenance("suite collapse", &d, c.truncation()));
            match verdict.status {
                CollapseStatus::Collapses => {
                    println!("verdict: Collapses at E2");
                }
                CollapseStatus::Inapplicable => {
                    println!("verdict: Inapplicable");
                }
            }
            println!("justification: {}", verdict.justification);
            if let Some(n) = series_through {
                let series = einfty_series(&verdict, n).map_err(math)?;
                println!("E∞ Poincaré series by total degree 0..={n}:");
                println!(
                    "  {}",
                    series
                        .iter()
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
            Ok(())
        }
        SuiteCommand::Catalog {
            name,
            field,
            max_degree,
        } => {
            let entry = CatalogEntry::parse(&name).map_err(|e| usage(format!("{e}")))?;
            let field = FieldSpec::parse(&field).map_err(|e| usage(format!("{e}")))?;
            let c = catalog(entry, field, max_degree).map_err(math)?;
            println!("{}", format::to_json(&c));
            Ok(())
        }
        SuiteCommand::Doi {
            degree,
            field,
            max_degree,
        } => {
            let field = FieldSpec::parse(&field).map_err(|e| usage(format!("{e}")))?;
            let report = doi_resolution_check(degree, field, max_degree).map_err(math)?;
            println!(
                "{}",
                provenance(
                    &format!("suite doi --degree {degree} --field {field}"),
                    &digest(format!("{degree}:{field}").as_bytes()),
                    max_degree
                )
            );
            if report.exact {
                println!("two-step resolution exact in every degree <= {max_degree}");
                Ok(())
            } else {
                for (t, what) in &report.failures {
                    println!("degree {t}: {what}");
                }
                Err(ExitCode::from(1))
            }
        }
    }
}

fn parse_gens(spec: &str) -> Result<Vec<(String, usize)>, String> {
    spec.split(',')
        .map(|part| {
            let (name, degree) = part
                .split_once(':')
                .ok_or_else(|| format!("bad generator {part:?}, expected name:degree"))?;
            let degree: usize = degree
                .trim()
                .parse()
                .map_err(|_| format!("bad degree in {part:?}"))?;
            Ok((name.trim().to_string(), degree))
        })
        .collect()
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn math(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
