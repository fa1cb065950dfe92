//! Command-line front end: flow polynomials, graded character sums,
//! verification suites, and nonsingular-assignment counts with JSON or
//! TSV output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use flowq::enumerate::{self, EnumOptions};
use flowq::flowpoly::{self, FlowError};
use flowq::verify::{self, CheckError, CheckReport};
use flowq::{EnumError, FieldParams, Multigraph};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::time::Instant;

const EXIT_OK: i32 = 0;
const EXIT_MISMATCH: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_GUARD: i32 = 3;

#[derive(Parser)]
#[command(
    name = "flowq",
    version,
    about = "Exact flow-polynomial engine over odd finite fields",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Flow polynomial by deletion-contraction, optionally evaluated at q.
    Flow {
        #[command(flatten)]
        graph: GraphArgs,
        /// Evaluate the polynomial at this order.
        #[arg(long)]
        q: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Graded character sums S(r,q) and the reassembled flow count.
    Stable {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        field: FieldArgs,
        /// Worker threads (0 = all available, 1 = sequential).
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Enumerate the full space instead of one weight per scaling orbit.
        #[arg(long)]
        no_reduction: bool,
        /// Override the search-space ceiling.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Identity and oracle verification suites.
    Verify {
        /// Suite: all, delta, gauss, charfactor, flowsum, multidim, k3,
        /// matrixtree, minors.
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Count weight assignments whose reduced Laplacian is nonsingular.
    Ncount {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        field: FieldArgs,
        /// Worker threads (0 = all available, 1 = sequential).
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Override the search-space ceiling.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// Catalog graph: k3, k4, k5, k33, k34, k35, petersen,
    /// k5_plus_pendant3, two_triangles_bridge.
    #[arg(long, value_name = "NAME")]
    graph: Option<String>,
    /// Edge-list file: one "u v" pair per line, '#' starts a comment.
    #[arg(long, value_name = "PATH")]
    edges: Option<PathBuf>,
}

impl GraphArgs {
    fn load(&self) -> Result<(Multigraph, String), CliError> {
        match (&self.graph, &self.edges) {
            (Some(_), Some(_)) => Err(CliError::Usage(
                "pass exactly one of --graph and --edges".into(),
            )),
            (Some(name), None) => {
                let g = Multigraph::named(name).map_err(|e| CliError::Usage(e.to_string()))?;
                Ok((g, name.clone()))
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Usage(format!("cannot read {}: {e}", path.display()))
                })?;
                let g = Multigraph::parse_edge_list(&text)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                Ok((g, path.display().to_string()))
            }
            (None, None) => Err(CliError::Usage(
                "pass exactly one of --graph and --edges".into(),
            )),
        }
    }

    fn load_optional(&self) -> Result<Option<(Multigraph, String)>, CliError> {
        if self.graph.is_none() && self.edges.is_none() {
            return Ok(None);
        }
        self.load().map(Some)
    }
}

#[derive(Args)]
struct FieldArgs {
    /// Field order q = p^d, an odd prime power.
    #[arg(long)]
    q: Option<u64>,
    /// Field characteristic (requires omitting --q; combine with --d).
    #[arg(long)]
    p: Option<u64>,
    /// Extension degree over the prime field.
    #[arg(long, default_value_t = 1)]
    d: u32,
}

impl FieldArgs {
    fn build(&self) -> Result<FieldParams, CliError> {
        let fp = match (self.q, self.p) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("pass --q or --p/--d, not both".into()))
            }
            (Some(q), None) => FieldParams::from_order(q),
            (None, Some(p)) => FieldParams::new(p, self.d),
            (None, None) => {
                return Err(CliError::Usage("a field is required: --q or --p/--d".into()))
            }
        };
        fp.map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write results to a file instead of standard output.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Tsv,
}

enum CliError {
    Usage(String),
    Guard(String),
    Mismatch(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Guard(_) => EXIT_GUARD,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Guard(m) | CliError::Mismatch(m) => m,
        }
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> CliError {
        match e {
            EnumError::SearchSpaceTooLarge { .. } | EnumError::SearchSpaceUnbounded(_) => {
                CliError::Guard(e.to_string())
            }
            EnumError::Disconnected => CliError::Usage(e.to_string()),
            other => CliError::Mismatch(other.to_string()),
        }
    }
}

impl From<FlowError> for CliError {
    fn from(e: FlowError) -> CliError {
        match e {
            FlowError::TooManyEdges(_) | FlowError::SearchTooLarge { .. } => {
                CliError::Guard(e.to_string())
            }
            FlowError::BadModulus(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> CliError {
        match e {
            CheckError::TooLarge { .. } => CliError::Guard(e.to_string()),
            CheckError::Oracle { .. } => CliError::Usage(e.to_string()),
        }
    }
}

/// Serializes an integer, falling back to a decimal string outside the
/// i64 range JSON numbers can hold exactly.
fn jint(v: i128) -> Value {
    match i64::try_from(v) {
        Ok(small) => Value::from(small),
        Err(_) => Value::from(v.to_string()),
    }
}

fn envelope(command: &str, graph: Option<&str>, q: Option<u64>, results: Value, ms: u128) -> Value {
    json!({
        "command": command,
        "graph": graph,
        "q": q,
        "results": results,
        "elapsed_ms": ms as u64,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn emit(out: &OutputArgs, json: Value, tsv: String) -> Result<(), CliError> {
    let text = match out.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json).expect("serializable");
            s.push('\n');
            s
        }
        Format::Tsv => tsv,
    };
    match &out.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_flow(graph: &GraphArgs, q: Option<u64>, out: &OutputArgs) -> Result<(), CliError> {
    let (g, label) = graph.load()?;
    let t0 = Instant::now();
    let poly = flowpoly::flow_poly(&g)?;
    let value = match q {
        Some(q) => {
            if q < 2 {
                return Err(CliError::Usage(format!("q must be at least 2, got {q}")));
            }
            // Horner bound: |value| <= (deg+1) * max|coeff| * q^deg must
            // stay inside exact i128 range.
            let deg = poly.degree().unwrap_or(0) as i32;
            let maxc = poly
                .coeffs()
                .iter()
                .map(|c| c.unsigned_abs())
                .max()
                .unwrap_or(0) as f64;
            let bound = (deg + 1) as f64 * maxc * (q as f64).powi(deg);
            if bound > 1e38 {
                return Err(CliError::Usage(format!(
                    "evaluating at q={q} would overflow exact integer range"
                )));
            }
            Some(poly.eval(q as i128))
        }
        None => None,
    };
    let ms = t0.elapsed().as_millis();
    let coeffs: Vec<Value> = poly.coeffs().iter().map(|&c| jint(c)).collect();
    let results = json!({
        "coefficients": coeffs,
        "degree": poly.degree(),
        "flow": value.map(jint),
    });
    let mut tsv = String::new();
    for (k, &c) in poly.coeffs().iter().enumerate() {
        tsv.push_str(&format!("coeff\t{k}\t{c}\n"));
    }
    if let Some(v) = value {
        tsv.push_str(&format!("flow\t{v}\n"));
    }
    emit(out, envelope("flow", Some(&label), q, results, ms), tsv)
}

fn cmd_stable(
    graph: &GraphArgs,
    field: &FieldArgs,
    threads: usize,
    no_reduction: bool,
    force: bool,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let (g, label) = graph.load()?;
    let fp = field.build()?;
    let opts = EnumOptions {
        reduction: !no_reduction,
        force,
        threads,
    };
    let t0 = Instant::now();
    let mut table = enumerate::s_table(&g, &fp, &opts)?;
    let elapsed = t0.elapsed();
    table.graph = label.clone();
    // Cross-check the reassembled count against deletion-contraction
    // whenever the reference can run at this size.
    let crosscheck = match flowpoly::flow_poly(&g) {
        Ok(poly) => {
            let expected = poly.eval(fp.q() as i128);
            if expected == table.flow_value {
                "ok"
            } else {
                return Err(CliError::Mismatch(format!(
                    "reassembled flow {} disagrees with deletion-contraction {}",
                    table.flow_value, expected
                )));
            }
        }
        Err(FlowError::TooManyEdges(_)) => "skipped",
        Err(e) => return Err(e.into()),
    };
    let ms = elapsed.as_millis();
    let rate = table.enumerated as f64 / elapsed.as_secs_f64().max(1e-9);
    eprintln!(
        "stable: {} assignments in {:.3}s ({:.0} assignments/s)",
        table.enumerated,
        elapsed.as_secs_f64(),
        rate
    );
    let ranks = g.n_vertices(); // Laplacian rank is at most |V|-1
    let results = json!({
        "s_values": table.s_values[..ranks].iter().map(|&v| jint(v)).collect::<Vec<_>>(),
        "rank_counts": table.rank_counts[..ranks].to_vec(),
        "flow": jint(table.flow_value),
        "reduction": !no_reduction,
        "enumerated": table.enumerated,
        "assignments_per_sec": rate,
        "crosscheck": crosscheck,
    });
    let mut tsv = String::new();
    for (r, &s) in table.s_values[..ranks].iter().enumerate() {
        tsv.push_str(&format!("S\t{r}\t{s}\n"));
    }
    tsv.push_str(&format!("flow\t{}\n", table.flow_value));
    emit(
        out,
        envelope("stable", Some(&label), Some(fp.q() as u64), results, ms),
        tsv,
    )
}

fn cmd_ncount(
    graph: &GraphArgs,
    field: &FieldArgs,
    threads: usize,
    force: bool,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let (g, label) = graph.load()?;
    let fp = field.build()?;
    let opts = EnumOptions {
        reduction: false,
        force,
        threads,
    };
    let t0 = Instant::now();
    let count = enumerate::nonsingular_count(&g, &fp, &opts)?;
    let ms = t0.elapsed().as_millis();
    let results = json!({ "count": jint(count) });
    let tsv = format!("ncount\t{count}\n");
    emit(
        out,
        envelope("ncount", Some(&label), Some(fp.q() as u64), results, ms),
        tsv,
    )
}

/// Default graphs for the graph-dependent suites, filtered by each
/// check's size guard so `--suite all` runs clean at any supported q.
fn suite_reports(
    suite: &str,
    fp: &FieldParams,
    picked: Option<&(Multigraph, String)>,
) -> Result<Vec<CheckReport>, CliError> {
    let q = fp.q() as u128;
    let factor_fits = |g: &Multigraph| {
        q.checked_pow((g.n_vertices() + g.n_edges()) as u32)
            .is_some_and(|s| s <= verify::FACTORIZATION_TERM_LIMIT)
    };
    let double_fits = |g: &Multigraph| {
        (q - 1)
            .checked_pow(g.n_edges() as u32)
            .and_then(|a| a.checked_mul(q.checked_pow(g.n_vertices() as u32)?))
            .is_some_and(|s| s <= verify::DOUBLE_SUM_TERM_LIMIT)
    };
    let tree_fits =
        |g: &Multigraph| q.checked_pow(g.n_edges() as u32).is_some_and(|s| s <= verify::TREE_SUM_SPACE_LIMIT);
    let named = |n: &str| Multigraph::named(n).expect("catalog");
    let mut reports = Vec::new();
    match suite {
        "delta" => reports.push(verify::verify_delta_identity(fp)?),
        "gauss" => {
            reports.push(verify::verify_gauss_onedim(fp)?);
            reports.push(verify::verify_gauss_closed_form(fp)?);
        }
        "charfactor" => match picked {
            Some((g, _)) => reports.push(verify::verify_char_factorization(g, fp)?),
            None => reports.push(verify::verify_char_factorization(&named("k3"), fp)?),
        },
        "flowsum" => match picked {
            Some((g, _)) => reports.push(verify::verify_flow_double_sum(g, fp)?),
            None => {
                reports.push(verify::verify_flow_double_sum(&named("k3"), fp)?);
                let bridge = named("two_triangles_bridge");
                if double_fits(&bridge) {
                    reports.push(verify::verify_flow_double_sum(&bridge, fp)?);
                }
            }
        },
        "multidim" => {
            reports.push(verify::verify_multidim_gauss(2, fp, 100)?);
            reports.push(verify::verify_multidim_gauss(3, fp, 100)?);
        }
        "k3" => reports.push(verify::verify_k3_identity(fp)?),
        "matrixtree" => {
            let theta = Multigraph::new(2, vec![(0, 1), (0, 1), (0, 1)]);
            let defaults = [named("k3"), theta, named("k4")];
            let graphs: Vec<&Multigraph> = match picked {
                Some((g, _)) => vec![g],
                None => defaults.iter().filter(|g| tree_fits(g)).collect(),
            };
            for g in graphs {
                reports.push(verify::verify_tree_sums(g, fp)?);
            }
        }
        "minors" => {
            let defaults = [named("k3"), named("k4")];
            let graphs: Vec<&Multigraph> = match picked {
                Some((g, _)) => vec![g],
                None => defaults.iter().collect(),
            };
            for g in graphs {
                reports.push(verify::verify_forest_minors(g, fp, 200)?);
            }
        }
        "all" => {
            reports.extend(suite_reports("delta", fp, picked)?);
            reports.extend(suite_reports("gauss", fp, picked)?);
            let k3g = named("k3");
            let (cf, fs): (&Multigraph, &Multigraph) = match picked {
                Some((g, _)) => (g, g),
                None => (&k3g, &k3g),
            };
            if factor_fits(cf) {
                reports.push(verify::verify_char_factorization(cf, fp)?);
            }
            if double_fits(fs) {
                reports.extend(suite_reports("flowsum", fp, picked)?);
            }
            if q.pow(3) <= verify::MULTIDIM_SPACE_LIMIT {
                reports.extend(suite_reports("multidim", fp, picked)?);
            }
            if fp.q() as u64 <= verify::TRIANGLE_FIELD_LIMIT {
                reports.extend(suite_reports("k3", fp, picked)?);
            }
            reports.extend(suite_reports("matrixtree", fp, picked)?);
            reports.extend(suite_reports("minors", fp, picked)?);
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite '{other}' (expected all, delta, gauss, charfactor, \
                 flowsum, multidim, k3, matrixtree, minors)"
            )))
        }
    }
    Ok(reports)
}

fn cmd_verify(
    suite: &str,
    field: &FieldArgs,
    graph: &GraphArgs,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let fp = field.build()?;
    let picked = graph.load_optional()?;
    if suite == "all" && fp.q() as u64 > verify::SMALL_FIELD_LIMIT {
        return Err(CliError::Guard(format!(
            "suite 'all' supports q up to {}, got {}",
            verify::SMALL_FIELD_LIMIT,
            fp.q()
        )));
    }
    let t0 = Instant::now();
    let reports = suite_reports(suite, &fp, picked.as_ref())?;
    let ms = t0.elapsed().as_millis();
    let all_pass = reports.iter().all(|r| r.pass);
    let checks: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "identity": r.identity,
                "instances": r.instances,
                "max_deviation": r.max_deviation,
                "tolerance": r.tolerance,
                "pass": r.pass,
            })
        })
        .collect();
    let results = json!({ "checks": checks, "all_pass": all_pass });
    let mut tsv = String::new();
    for r in &reports {
        tsv.push_str(&format!(
            "{}\t{}\t{:.3e}\t{}\n",
            r.identity, r.instances, r.max_deviation, r.pass
        ));
    }
    tsv.push_str(&format!("all\t{all_pass}\n"));
    let label = picked.as_ref().map(|(_, l)| l.clone());
    emit(
        out,
        envelope(
            "verify",
            label.as_deref(),
            Some(fp.q() as u64),
            results,
            ms,
        ),
        tsv,
    )?;
    if !all_pass {
        return Err(CliError::Mismatch("one or more checks failed".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Flow { graph, q, out } => cmd_flow(graph, *q, out),
        Command::Stable {
            graph,
            field,
            threads,
            no_reduction,
            force,
            out,
        } => cmd_stable(graph, field, *threads, *no_reduction, *force, out),
        Command::Verify {
            suite,
            field,
            graph,
            out,
        } => cmd_verify(suite, field, graph, out),
        Command::Ncount {
            graph,
            field,
            threads,
            force,
            out,
        } => cmd_ncount(graph, field, *threads, *force, out),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => std::process::exit(EXIT_OK),
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
