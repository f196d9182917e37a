//! Command-line frontend. `run` parses arguments, dispatches, and maps
//! outcomes to exit codes: 0 success, 1 verification failure, 2 usage
//! error, 3 budget exceeded.

use crate::analytic::verify::{
    hanalytic_samples, verify_eq_w, verify_esr, verify_f_le_ftilde, verify_fcomp_range, verify_gapprox, verify_gsr,
    verify_hanalytic, verify_maxoflog, verify_rs,
};
use crate::analytic::{e_s, f_funcs, g_tilde, m_of_s, r_set, set_precision_digits, FSemantics, Parity, RMode};
use crate::counting::{construction_count, count_valid_colorings, SmallGraph, DEFAULT_COUNT_BUDGET};
use crate::error::{Error, Result};
use crate::patterns::ForbiddenFamily;
use crate::qsolver::{
    brute_force_q, check_properties, optimize_alpha, q_value, verify_largepart, AlphaMode, PropStatus, QSolution,
    SimplexWeights, DEFAULT_BUDGET,
};
use crate::report::Report;
use crate::sweeps::{compute_sk, qsolution_for_s, sweep_r, sweep_r2, verify_t19, SkResult};
use crate::templates::{build_matching_template, colors_of, ColorTemplate, MatchingPartition};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;
use std::ops::RangeInclusive;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "colored-cliques", version, about = "Edge-colorings of graphs avoiding colored cliques")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Enumeration budget
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Decimal digits for the rational enclosures of e
    #[arg(long, global = true)]
    precision: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ParityArg {
    All,
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Esr,
    Gsr,
    Hanalytic,
    Gapprox,
    Fcomp,
    T19,
    Maxoflog,
    Eqw,
    Rs,
    Fprops,
    Largepart,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlphaArg {
    Support,
    Replicator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Curve {
    Gtilde,
    Es,
    Ftilde,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// R(s) or R_2(s) for one s
    Rset {
        #[arg(long)]
        s: u64,
        #[arg(long, value_enum, default_value_t = ParityArg::Even)]
        parity: ParityArg,
        /// Compare every admissible r instead of the two candidates
        #[arg(long)]
        full_scan: bool,
    },
    /// Interval table of R_2(s)
    SweepR2 {
        #[arg(long)]
        s_max: u64,
    },
    /// Interval table of R(s)
    SweepR {
        #[arg(long)]
        s_max: u64,
    },
    /// Improper-clique threshold s(k)
    Sk {
        /// k or a range lo..hi
        #[arg(long)]
        k: String,
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 200_000_000)]
        s_cap: u64,
    },
    /// Summary of the optimal constructions at s
    Qsummary {
        #[arg(long)]
        s: u64,
    },
    /// Lemma verification suites
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        s_min: Option<u64>,
        #[arg(long)]
        s_max: Option<u64>,
        #[arg(long)]
        k_max: Option<u64>,
        #[arg(long)]
        r_cap: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        y_max: Option<f64>,
        /// Forbidden family for the largepart suite
        #[arg(long, default_value = "dichromatic")]
        family: String,
        /// s or lo..hi for the largepart suite
        #[arg(long)]
        s: Option<String>,
        #[arg(long, default_value_t = 6)]
        r_max: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
    /// Exhaustive Q_t(X) over r <= r_max
    Qsolve {
        #[arg(long)]
        family: String,
        /// s or lo..hi
        #[arg(long)]
        s: String,
        #[arg(long)]
        r_max: usize,
        #[arg(long, default_value_t = 0)]
        t: usize,
    },
    /// Optimal weights for a template file
    Alpha {
        #[arg(long)]
        template: String,
        #[arg(long, value_enum, default_value_t = AlphaArg::Support)]
        mode: AlphaArg,
    },
    /// F(G;X) by exhaustive search
    Count {
        /// K:n, turan:r,n or bipartite:a,b
        #[arg(long, conflicts_with = "edges")]
        graph: Option<String>,
        /// Edge-list file, one 1-based `u v` pair per line
        #[arg(long)]
        edges: Option<String>,
        #[arg(long)]
        family: String,
        #[arg(long)]
        s: usize,
    },
    /// Matching-partition template and its coloring count on T_r(n)
    Construct {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// Class sizes per perfect matching (default: balanced one-factorization)
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Structural properties of a solution
    Props {
        #[arg(long)]
        family: String,
        #[arg(long)]
        template: String,
        /// Weights (default: optimal weights of the template)
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<f64>>,
    },
    /// x,y series for the g~ and f~ curves
    Plotdata {
        #[arg(long)]
        s: u64,
        #[arg(long, value_enum, default_value_t = Curve::Gtilde)]
        curve: Curve,
        #[arg(long)]
        r: Option<u64>,
        #[arg(long, default_value_t = 500)]
        points: usize,
    },
}

/// Outcome of a command before it is written out.
struct Outcome {
    body: String,
    failed: bool,
    witness: Option<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, failed: false, witness: None }
    }
}

fn parse_range(v: &str) -> Result<RangeInclusive<u64>> {
    let bad = || Error::InvalidArgument(format!("expected an integer or lo..hi, got '{v}'"));
    match v.split_once("..") {
        Some((a, b)) => {
            let lo: u64 = a.trim().parse().map_err(|_| bad())?;
            let hi: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            Ok(lo..=hi)
        }
        None => {
            let x: u64 = v.trim().parse().map_err(|_| bad())?;
            Ok(x..=x)
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read_file(path: &str) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

/// `{1,2}` style sets in lexicographic pair order, `;`-separated.
fn compact_template(t: &ColorTemplate) -> String {
    t.sets()
        .iter()
        .map(|&set| colors_of(set).into_iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join("|"))
        .collect::<Vec<_>>()
        .join(";")
}

fn join_f(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>().join(";")
}

fn report_outcome(rep: Report, format: Format) -> Outcome {
    let body = match format {
        Format::Csv => rep.to_csv(),
        Format::Json => to_json(&rep),
        Format::Text => rep.to_text(),
    };
    let failed = !rep.passed();
    let witness = rep.failures.first().map(Report::row_csv);
    Outcome { body, failed, witness }
}

fn cmd_rset(s: u64, parity: ParityArg, full: bool, format: Format) -> Result<Outcome> {
    if s < 2 {
        return Err(Error::InvalidArgument("s must be at least 2".into()));
    }
    let p = if parity == ParityArg::Even { Parity::Even } else { Parity::All };
    let res = r_set(s, p, if full { RMode::FullScan } else { RMode::Candidates });
    Ok(Outcome::ok(match format {
        Format::Csv => format!("{},{}\n", s, res.winners_braced()),
        Format::Json => to_json(&res),
        Format::Text => format!("s {} r_base {} winners {} g {:.15}\n", s, res.r_base, res.winners_braced(), res.g),
    }))
}

fn cmd_sweep(table: crate::sweeps::IntervalTable, format: Format) -> Outcome {
    Outcome::ok(match format {
        Format::Json => to_json(&table),
        _ => table.to_csv(),
    })
}

fn cmd_sk(k: &str, exact: bool, s_cap: u64, format: Format) -> Result<Outcome> {
    let ks = parse_range(k)?;
    let results: Vec<SkResult> = ks.map(|k| compute_sk(k, s_cap, exact)).collect::<Result<_>>()?;
    Ok(Outcome::ok(match format {
        Format::Json => to_json(&results),
        _ => {
            let mut out = String::new();
            if results.len() > 1 {
                out.push_str(SkResult::CSV_HEADER);
                out.push('\n');
            }
            for r in &results {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            out
        }
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    suite: Suite,
    s_min: Option<u64>,
    s_max: Option<u64>,
    k_max: Option<u64>,
    r_cap: Option<u64>,
    samples: Option<usize>,
    y_max: Option<f64>,
    largepart: (&str, Option<&str>, usize, usize),
    budget: u128,
    format: Format,
) -> Result<Outcome> {
    let rep = match suite {
        Suite::Esr => verify_esr(s_max.unwrap_or(2000), r_cap.unwrap_or(60)),
        Suite::Gsr => verify_gsr(s_max.unwrap_or(20_000)),
        Suite::Hanalytic => verify_hanalytic(&hanalytic_samples()),
        Suite::Gapprox => verify_gapprox(s_min.unwrap_or(200), s_max.unwrap_or(100_000)),
        Suite::Fcomp => verify_fcomp_range(s_min.unwrap_or(2), s_max.unwrap_or(1100)),
        Suite::T19 => verify_t19(k_max.unwrap_or(9), s_max.unwrap_or(1231)),
        Suite::Maxoflog => verify_maxoflog(samples.unwrap_or(2000)),
        Suite::Eqw => verify_eq_w(y_max.unwrap_or(1e6), samples.unwrap_or(10_000)),
        Suite::Rs => verify_rs(s_max.unwrap_or(1_000_000)),
        Suite::Fprops => verify_f_le_ftilde(samples.unwrap_or(2000), s_max.unwrap_or(300)),
        Suite::Largepart => {
            let (family, s, r_max, t) = largepart;
            let mut rep = Report::new("largepart");
            for s in parse_range(s.unwrap_or("2..6"))? {
                let x = ForbiddenFamily::parse(family, s as usize)?;
                let bf = brute_force_q(&x, r_max, t, budget)?;
                rep.merge(verify_largepart(&bf.optima, s));
            }
            rep
        }
    };
    Ok(report_outcome(rep, format))
}

fn cmd_qsolve(family: &str, s: &str, r_max: usize, t: usize, budget: u128, format: Format) -> Result<Outcome> {
    let mut csv = String::from("s,r,q,feasible_t,basic,alpha,template\n");
    let mut text = String::new();
    let mut json = Vec::new();
    for s in parse_range(s)? {
        let x = ForbiddenFamily::parse(family, s as usize)?;
        let res = brute_force_q(&x, r_max, t, budget)?;
        text.push_str(&format!("s {} Q {:.12} optima {} templates {}\n", s, res.q, res.optima.len(), res.templates_examined));
        for sol in &res.optima {
            csv.push_str(&format!(
                "{},{},{:.12},{},{},{},{}\n",
                s,
                sol.r,
                sol.q,
                sol.feasible_t.map_or("none".into(), |t| t.to_string()),
                sol.is_basic,
                join_f(sol.alpha.as_slice()),
                compact_template(&sol.template)
            ));
            text.push_str(&sol.to_text());
            text.push('\n');
        }
        json.push(serde_json::json!({ "s": s, "result": res }));
    }
    Ok(Outcome::ok(match format {
        Format::Csv => csv,
        Format::Json => to_json(&json),
        Format::Text => text,
    }))
}

fn cmd_alpha(path: &str, mode: AlphaArg, format: Format) -> Result<Outcome> {
    let phi = ColorTemplate::parse(&read_file(path)?)?;
    let mode = if mode == AlphaArg::Support { AlphaMode::SupportEnumeration } else { AlphaMode::Replicator };
    let res = optimize_alpha(&phi, mode)?;
    let c = &res.certificate;
    let supp: Vec<String> = c.support.iter().map(|i| (i + 1).to_string()).collect();
    let failed = !c.converged;
    let witness = failed.then(|| "replicator dynamics did not converge".to_string());
    let body = match format {
        Format::Csv => format!(
            "q,alpha,support,kkt_residual,off_support_slack\n{:.12},{},{},{:e},{:e}\n",
            res.q,
            join_f(res.alpha.as_slice()),
            supp.join(";"),
            c.kkt_residual,
            c.off_support_slack
        ),
        Format::Json => to_json(&res),
        Format::Text => format!(
            "q {:.12}\nalpha {}\nsupport {}\nkkt_residual {:e}\noff_support_slack {:e}\nconverged {}\n",
            res.q,
            join_f(res.alpha.as_slice()),
            supp.join(" "),
            c.kkt_residual,
            c.off_support_slack,
            c.converged
        ),
    };
    Ok(Outcome { body, failed, witness })
}

fn cmd_count(graph: Option<&str>, edges: Option<&str>, family: &str, s: usize, budget: u128, format: Format) -> Result<Outcome> {
    let g = match (graph, edges) {
        (Some(d), None) => SmallGraph::parse(d)?,
        (None, Some(path)) => SmallGraph::from_edge_list(&read_file(path)?)?,
        _ => return Err(Error::InvalidArgument("give exactly one of --graph and --edges".into())),
    };
    let x = ForbiddenFamily::parse(family, s)?;
    let res = count_valid_colorings(&g, &x, budget)?;
    Ok(Outcome::ok(match format {
        Format::Json => to_json(&res),
        _ => format!("{}\n", res.count),
    }))
}

fn cmd_construct(r: usize, s: usize, sizes: Option<&[usize]>, n: Option<usize>, format: Format) -> Result<Outcome> {
    let mp = match sizes {
        Some(sz) => MatchingPartition::from_class_sizes(r, s, sz)?,
        None => MatchingPartition::decomposition(r, s)?,
    };
    let phi = build_matching_template(&mp)?;
    let q = q_value(&phi, &SimplexWeights::uniform(r))?;
    let count = n.map(|n| construction_count(r, n, &mp)).transpose()?;
    let count_s = count.as_ref().map_or(String::new(), |c| c.count.to_string());
    Ok(Outcome::ok(match format {
        Format::Csv => format!(
            "r,s,n,q,count,template\n{},{},{},{:.12},{},{}\n",
            r,
            s,
            n.map_or(String::new(), |n| n.to_string()),
            q,
            count_s,
            compact_template(&phi)
        ),
        Format::Json => to_json(&serde_json::json!({
            "r": r, "s": s, "n": n, "q": q, "count": count_s, "template": phi.to_text(),
        })),
        Format::Text => {
            let mut out = format!("q {q:.12}\n");
            if let Some(n) = n {
                out.push_str(&format!("count T_{r}({n}) {count_s}\n"));
            }
            out.push_str(&phi.to_text());
            out
        }
    }))
}

fn cmd_props(family: &str, path: &str, alpha: Option<Vec<f64>>, budget: u128, format: Format) -> Result<Outcome> {
    let phi = ColorTemplate::parse(&read_file(path)?)?;
    let x = ForbiddenFamily::parse(family, phi.s())?;
    let alpha = match alpha {
        Some(a) => SimplexWeights::new(a)?,
        None => optimize_alpha(&phi, AlphaMode::SupportEnumeration)?.alpha,
    };
    let sol = QSolution::new(phi, alpha, &x)?;
    let rep = check_properties(&sol, &x, budget)?;
    let name = |p: PropStatus| match p {
        PropStatus::True => "true",
        PropStatus::False => "false",
        PropStatus::Undecided => "undecided",
    };
    let rows = [
        ("hermetic", rep.hermetic),
        ("extension_property", rep.extension_property),
        ("strong_extension", rep.strong_extension),
        ("stable_inside", rep.stable_inside),
    ];
    let body = match format {
        Format::Csv => {
            let mut out = String::from("property,status\n");
            for (k, v) in rows {
                out.push_str(&format!("{k},{}\n", name(v)));
            }
            out
        }
        Format::Json => to_json(&rep),
        Format::Text => {
            let mut out = String::new();
            for (k, v) in rows {
                out.push_str(&format!("{k} {}\n", name(v)));
            }
            for w in &rep.witnesses {
                out.push_str(&format!("witness {w}\n"));
            }
            out
        }
    };
    Ok(Outcome::ok(body))
}

fn cmd_plotdata(s: u64, curve: Curve, r: Option<u64>, points: usize, format: Format) -> Result<Outcome> {
    if s < 3 || points < 2 {
        return Err(Error::InvalidArgument("plot data needs s >= 3 and at least 2 points".into()));
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let header = match curve {
        Curve::Gtilde => {
            let sf = s as f64;
            let hi = (3.0 * m_of_s(sf)).min(sf + 1.0);
            for i in 0..points {
                let x = 1.0 + (hi - 1.0) * (i + 1) as f64 / points as f64;
                rows.push(vec![x, g_tilde(sf, x)]);
            }
            "x,g_tilde"
        }
        Curve::Es => {
            for r in 2..s {
                rows.push(vec![r as f64, e_s(s, r)?]);
            }
            "r,e_s"
        }
        Curve::Ftilde => {
            let r = r.ok_or_else(|| Error::InvalidArgument("the ftilde curve needs --r".into()))?;
            if r < 3 {
                return Err(Error::InvalidArgument("the ftilde curve needs r >= 3".into()));
            }
            let (lo, hi) = (1.0 / r as f64, 1.0 / (r - 1) as f64);
            for i in 0..points {
                let x = lo + (hi - lo) * i as f64 / points as f64;
                let v = f_funcs(s, r, x, FSemantics::Piecewise)?;
                rows.push(vec![x, v.f_tilde, v.f]);
            }
            "x,f_tilde,f"
        }
    };
    let body = match format {
        Format::Json => {
            let cols: Vec<&str> = header.split(',').collect();
            let objs: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| serde_json::Value::Object(cols.iter().zip(row).map(|(c, v)| (c.to_string(), serde_json::json!(v))).collect()))
                .collect();
            to_json(&objs)
        }
        _ => {
            let mut out = format!("{header}\n");
            for row in rows {
                out.push_str(&row.iter().map(|v| format!("{v:.12e}")).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            out
        }
    };
    Ok(Outcome::ok(body))
}

fn cmd_qsummary(s: u64, format: Format) -> Result<Outcome> {
    let q = qsolution_for_s(s)?;
    Ok(Outcome::ok(match format {
        Format::Json => to_json(&q),
        Format::Text => q.to_text(),
        Format::Csv => {
            let mut out = String::from("s,r,g,rate,families\n");
            for f in &q.families {
                let fam = f.families.as_ref().map_or("not enumerated".to_string(), |b| b.to_string());
                out.push_str(&format!("{},{},{:.15},{:.15},{}\n", s, f.r, q.g, f.rate, fam));
            }
            out
        }
    }))
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    let g = &cli.global;
    let format = g.format;
    match cli.command {
        Command::Rset { s, parity, full_scan } => cmd_rset(s, parity, full_scan, format),
        Command::SweepR2 { s_max } => Ok(cmd_sweep(sweep_r2(s_max)?, format)),
        Command::SweepR { s_max } => Ok(cmd_sweep(sweep_r(s_max)?, format)),
        Command::Sk { k, exact, s_cap } => cmd_sk(&k, exact, s_cap, format),
        Command::Qsummary { s } => cmd_qsummary(s, format),
        Command::Verify { suite, s_min, s_max, k_max, r_cap, samples, y_max, family, s, r_max, t } => cmd_verify(
            suite,
            s_min,
            s_max,
            k_max,
            r_cap,
            samples,
            y_max,
            (&family, s.as_deref(), r_max, t),
            g.budget.unwrap_or(DEFAULT_BUDGET),
            format,
        ),
        Command::Qsolve { family, s, r_max, t } => cmd_qsolve(&family, &s, r_max, t, g.budget.unwrap_or(DEFAULT_BUDGET), format),
        Command::Alpha { template, mode } => cmd_alpha(&template, mode, format),
        Command::Count { graph, edges, family, s } => {
            cmd_count(graph.as_deref(), edges.as_deref(), &family, s, g.budget.unwrap_or(DEFAULT_COUNT_BUDGET), format)
        }
        Command::Construct { r, s, sizes, n } => cmd_construct(r, s, sizes.as_deref(), n, format),
        Command::Props { family, template, alpha } => cmd_props(&family, &template, alpha, g.budget.unwrap_or(DEFAULT_BUDGET), format),
        Command::Plotdata { s, curve, r, points } => cmd_plotdata(s, curve, r, points, format),
    }
}

/// Runs the CLI on `argv` (program name first), writing to the given streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(0) = cli.global.budget {
        let _ = writeln!(err, "error: --budget must be positive");
        return 2;
    }
    if let Some(d) = cli.global.precision {
        set_precision_digits(d);
    }
    let out_path = cli.global.out.clone();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.global.workers.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    match pool.install(|| dispatch(cli)) {
        Ok(outcome) => {
            let written = match &out_path {
                Some(p) => std::fs::write(p, &outcome.body).map_err(Error::from),
                None => out.write_all(outcome.body.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
            if outcome.failed {
                let _ = writeln!(err, "verification failed");
                if let Some(w) = outcome.witness {
                    let _ = writeln!(err, "witness: {w}");
                }
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BudgetExceeded { .. } => 3,
                _ => 2,
            }
        }
    }
}

/// Runs the CLI against stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
