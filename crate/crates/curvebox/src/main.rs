//! Command line front end: curve analysis, rectangle/pattern counting,
//! moment and distribution reports, and defect/covering verifiers,
//! emitting CSV or JSON.
//!
//! Exit codes: 0 success, 1 failed `--assert` threshold, 2 usage error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use curvebox::{fmt, parallel};
use curvebox_core::counting::{self, build_shifted_curve, CyclicInterval, PatternSpec, Rectangle};
use curvebox_core::curve::PlaneCurve;
use curvebox_core::moments::{self, MomentSpec};
use curvebox_core::sample;
use curvebox_core::stats;
use curvebox_core::verify;
use curvebox_core::PrimeModulus;

#[derive(Parser)]
#[command(
    name = "curvebox",
    version,
    about = "Point counting and box-count statistics for plane curves over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args)]
struct GlobalArgs {
    /// Prime modulus (odd, 3 <= p < 2^62)
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Curve polynomial, e.g. "x*y + 6" for xy - 1 over F_7
    #[arg(long, global = true)]
    curve: Option<String>,
    /// Seed for all randomized inputs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the counting sweeps
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Turn the report into a pass/fail check (exit 1 on failure)
    #[arg(long = "assert", global = true)]
    assert_thresholds: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Degree, point count, completely ramified x, one-point-per-column check
    Analyze {
        /// y-interval for the column condition (default: full)
        #[arg(long = "J", value_name = "START:LEN")]
        j: Option<String>,
    },
    /// Points in one rectangle vs the equidistribution main term
    Count {
        #[arg(long = "I", value_name = "START:LEN")]
        i: String,
        #[arg(long = "J", value_name = "START:LEN")]
        j: String,
        /// Defect/bound threshold for --assert
        #[arg(long, default_value_t = 1.0)]
        ratio_max: f64,
    },
    /// Pattern counts vs |I| (|J|/p)^s
    Patterns {
        /// Shift multipliers, `;`-joined (with --b)
        #[arg(long)]
        a: Option<String>,
        /// Shift offsets, `;`-joined (with --a)
        #[arg(long)]
        b: Option<String>,
        /// Pattern length for --random
        #[arg(long)]
        s: Option<usize>,
        /// Number of random specs to sample instead of --a/--b
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        random: Option<u64>,
        /// x-interval (default: full; random specs draw their own when omitted)
        #[arg(long = "I", value_name = "START:LEN")]
        i: Option<String>,
        /// y-interval (default: full; random specs draw their own when omitted)
        #[arg(long = "J", value_name = "START:LEN")]
        j: Option<String>,
        /// 95th-percentile defect/bound threshold for --assert
        #[arg(long, default_value_t = 1.0)]
        ratio_max: f64,
    },
    /// M_k(H) against the binomial model p*mu_k(H, N/p)
    Moments {
        #[arg(long = "H")]
        h: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long = "J", value_name = "START:LEN")]
        j: String,
        /// Skip the one-point-per-column gate (folded-interval studies)
        #[arg(long)]
        no_cond1: bool,
        /// Defect/bound threshold for --assert
        #[arg(long, default_value_t = 1.0)]
        ratio_max: f64,
    },
    /// Box-count histogram and KS distances to binomial and normal models
    Gauss {
        #[arg(long = "H")]
        h: u64,
        #[arg(long = "J", value_name = "START:LEN")]
        j: String,
        /// Emit the long histogram rows instead of the summary row
        #[arg(long)]
        histogram: bool,
        /// ks_binomial threshold for --assert
        #[arg(long, default_value_t = 0.05)]
        ks_max: f64,
        /// ks_normal threshold for --assert
        #[arg(long, default_value_t = 0.06)]
        ks_normal_max: f64,
    },
    /// Defect and covering verifiers
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Weil-bound defect on seeded random boxes
    Weil {
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        boxes: u64,
        /// Pattern length for shifted space curves (0 = plane curve)
        #[arg(long, default_value_t = 0)]
        shifted_s: usize,
        /// 95th-percentile ratio threshold for --assert
        #[arg(long, default_value_t = 1.0)]
        percentile_max: f64,
    },
    /// Randomized search for translate-covering counterexamples
    Translate {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m_max: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { j } => cmd_analyze(g, j.as_deref()),
        Command::Count { i, j, ratio_max } => cmd_count(g, i, j, *ratio_max),
        Command::Patterns {
            a,
            b,
            s,
            random,
            i,
            j,
            ratio_max,
        } => cmd_patterns(
            g,
            a.as_deref(),
            b.as_deref(),
            *s,
            *random,
            i.as_deref(),
            j.as_deref(),
            *ratio_max,
        ),
        Command::Moments {
            h,
            k,
            j,
            no_cond1,
            ratio_max,
        } => cmd_moments(g, *h, *k, j, *no_cond1, *ratio_max),
        Command::Gauss {
            h,
            j,
            histogram,
            ks_max,
            ks_normal_max,
        } => cmd_gauss(g, *h, j, *histogram, *ks_max, *ks_normal_max),
        Command::Verify { which } => match which {
            VerifyCommand::Weil {
                boxes,
                shifted_s,
                percentile_max,
            } => cmd_verify_weil(g, *boxes, *shifted_s, *percentile_max),
            VerifyCommand::Translate { r, m_max, trials } => {
                cmd_verify_translate(g, *r, *m_max, *trials)
            }
        },
    }
}

fn need_modulus(g: &GlobalArgs) -> Result<PrimeModulus> {
    let p = g.p.context("--p is required")?;
    Ok(PrimeModulus::new(p)?)
}

fn need_curve(g: &GlobalArgs, m: PrimeModulus) -> Result<PlaneCurve> {
    let text = g.curve.as_deref().context("--curve is required")?;
    Ok(PlaneCurve::parse(m, text)?)
}

/// nearest-rank 95th percentile
fn percentile_95(ratios: &mut [f64]) -> f64 {
    assert!(!ratios.is_empty());
    ratios.sort_by(|a, b| a.partial_cmp(b).expect("ratios are finite"));
    let rank = (ratios.len() as f64 * 0.95).ceil() as usize;
    ratios[rank.saturating_sub(1)]
}

// ---------------------------------------------------------------------------
// output plumbing

trait Row: Serialize {
    const HEADER: &'static str;
    fn csv(&self) -> String;
}

fn emit<R: Row>(g: &GlobalArgs, rows: &[R]) -> Result<()> {
    let text = match g.format {
        Format::Csv => {
            let mut out = String::from(R::HEADER);
            out.push('\n');
            for row in rows {
                out.push_str(&row.csv());
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let mut out = serde_json::to_string_pretty(rows)?;
            out.push('\n');
            out
        }
    };
    match &g.out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            file.write_all(text.as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn opt_u64(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

// ---------------------------------------------------------------------------
// analyze

#[derive(Serialize)]
struct AnalyzeRow {
    p: u64,
    curve: String,
    d: u32,
    y_degree: u32,
    n_points: u64,
    weil_range_ok: bool,
    #[serde(rename = "J_start")]
    j_start: u64,
    #[serde(rename = "J_len")]
    j_len: u64,
    cond1: bool,
    witness_x: Option<u64>,
    witness_y1: Option<u64>,
    witness_y2: Option<u64>,
    ramified_count: u64,
    /// `;`-joined F_p-rational completely ramified x (empty does not
    /// falsify the hypothesis: the search is restricted to F_p)
    ramified_x: String,
    ramified_fp_only: bool,
}

impl Row for AnalyzeRow {
    const HEADER: &'static str = "p,curve,d,y_degree,n_points,weil_range_ok,J_start,J_len,cond1,witness_x,witness_y1,witness_y2,ramified_count,ramified_x,ramified_fp_only";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.p,
            self.curve,
            self.d,
            self.y_degree,
            self.n_points,
            self.weil_range_ok,
            self.j_start,
            self.j_len,
            self.cond1,
            opt_u64(self.witness_x),
            opt_u64(self.witness_y1),
            opt_u64(self.witness_y2),
            self.ramified_count,
            self.ramified_x,
            self.ramified_fp_only,
        )
    }
}

fn cmd_analyze(g: &GlobalArgs, j: Option<&str>) -> Result<bool> {
    let m = need_modulus(g)?;
    let curve = need_curve(g, m)?;
    let j = match j {
        Some(text) => fmt::parse_interval(m.p(), text)?,
        None => CyclicInterval::full(m.p()),
    };
    let ram = curve.find_completely_ramified();
    if ram.ramified_x.is_empty() {
        eprintln!(
            "note: no completely ramified x found among F_p-rational points; \
             this does not falsify the hypothesis (ramified x may lie in an extension field)"
        );
    }
    let cond = curve.check_condition_one(&j)?;
    let row = AnalyzeRow {
        p: m.p(),
        curve: curve.polynomial().to_string(),
        d: curve.degree(),
        y_degree: curve.y_degree(),
        n_points: curve.point_count(),
        weil_range_ok: curve.weil_range_ok(),
        j_start: j.start(),
        j_len: j.len(),
        cond1: cond.holds,
        witness_x: cond.witness.map(|w| w.x),
        witness_y1: cond.witness.map(|w| w.y1),
        witness_y2: cond.witness.map(|w| w.y2),
        ramified_count: ram.ramified_x.len() as u64,
        ramified_x: fmt::joined(&ram.ramified_x),
        ramified_fp_only: ram.fp_rational_only,
    };
    emit(g, &[row])?;
    Ok(true)
}

// ---------------------------------------------------------------------------
// count

#[derive(Serialize)]
struct CountRow {
    p: u64,
    curve: String,
    #[serde(rename = "I_start")]
    i_start: u64,
    #[serde(rename = "I_len")]
    i_len: u64,
    #[serde(rename = "J_start")]
    j_start: u64,
    #[serde(rename = "J_len")]
    j_len: u64,
    count: u64,
    n_points: u64,
    main_term: String,
    main_term_dec: String,
    defect: String,
    defect_dec: String,
    bound: String,
    ratio: String,
}

impl Row for CountRow {
    const HEADER: &'static str = "p,curve,I_start,I_len,J_start,J_len,count,n_points,main_term,main_term_dec,defect,defect_dec,bound,ratio";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.p,
            self.curve,
            self.i_start,
            self.i_len,
            self.j_start,
            self.j_len,
            self.count,
            self.n_points,
            self.main_term,
            self.main_term_dec,
            self.defect,
            self.defect_dec,
            self.bound,
            self.ratio,
        )
    }
}

fn cmd_count(g: &GlobalArgs, i: &str, j: &str, ratio_max: f64) -> Result<bool> {
    let m = need_modulus(g)?;
    let curve = need_curve(g, m)?;
    let b = Rectangle::new(
        fmt::parse_interval(m.p(), i)?,
        fmt::parse_interval(m.p(), j)?,
    )?;
    let count = parallel::count_in_rectangle(&curve, &b, g.threads)?;
    let rep = counting::rectangle_report_from_count(&curve, &b, count)?;
    let row = CountRow {
        p: m.p(),
        curve: curve.polynomial().to_string(),
        i_start: b.i.start(),
        i_len: b.i.len(),
        j_start: b.j.start(),
        j_len: b.j.len(),
        count: rep.count,
        n_points: rep.n_total,
        main_term: fmt::rational(&rep.main_term),
        main_term_dec: fmt::rational_dec(&rep.main_term),
        defect: fmt::rational(&rep.defect),
        defect_dec: fmt::rational_dec(&rep.defect),
        bound: fmt::dec(rep.bound),
        ratio: fmt::dec(rep.ratio),
    };
    let ok = !g.assert_thresholds || rep.ratio <= ratio_max;
    emit(g, &[row])?;
    if !ok {
        eprintln!("assert failed: ratio {} > {}", rep.ratio, ratio_max);
    }
    Ok(ok)
}

// ---------------------------------------------------------------------------
// patterns

#[derive(Serialize)]
struct PatternRow {
    p: u64,
    d: u32,
    s: usize,
    a: String,
    b: String,
    #[serde(rename = "I_start")]
    i_start: u64,
    #[serde(rename = "I_len")]
    i_len: u64,
    #[serde(rename = "J_start")]
    j_start: u64,
    #[serde(rename = "J_len")]
    j_len: u64,
    count: u64,
    main_term: String,
    defect: String,
    bound: String,
    defect_over_bound: String,
}

impl Row for PatternRow {
    const HEADER: &'static str =
        "p,d,s,a,b,I_start,I_len,J_start,J_len,count,main_term,defect,bound,defect_over_bound";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.p,
            self.d,
            self.s,
            self.a,
            self.b,
            self.i_start,
            self.i_len,
            self.j_start,
            self.j_len,
            self.count,
            self.main_term,
            self.defect,
            self.bound,
            self.defect_over_bound,
        )
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_patterns(
    g: &GlobalArgs,
    a: Option<&str>,
    b: Option<&str>,
    s: Option<usize>,
    random: Option<u64>,
    i: Option<&str>,
    j: Option<&str>,
    ratio_max: f64,
) -> Result<bool> {
    let m = need_modulus(g)?;
    let curve = need_curve(g, m)?;
    let p = m.p();
    let fixed_i = i.map(|t| fmt::parse_interval(p, t)).transpose()?;
    let fixed_j = j.map(|t| fmt::parse_interval(p, t)).transpose()?;

    // (spec, I, J) triples to count
    let mut runs: Vec<(PatternSpec, CyclicInterval, CyclicInterval)> = Vec::new();
    match (a, b, random) {
        (Some(a), Some(b), None) => {
            let a = fmt::parse_joined(a)?;
            let b = fmt::parse_joined(b)?;
            if a.len() != b.len() {
                bail!("--a has {} entries but --b has {}", a.len(), b.len());
            }
            let spec = PatternSpec::new(m, a, b)?;
            runs.push((
                spec,
                fixed_i.unwrap_or_else(|| CyclicInterval::full(p)),
                fixed_j.unwrap_or_else(|| CyclicInterval::full(p)),
            ));
        }
        (None, None, Some(count)) => {
            let s = s.context("--random needs --s")?;
            let mut rng = sample::rng(g.seed);
            for _ in 0..count {
                let spec = sample::random_pattern_spec(&mut rng, m, s)?;
                let ri = fixed_i.unwrap_or_else(|| sample::random_interval(&mut rng, p));
                let rj = fixed_j.unwrap_or_else(|| sample::random_interval(&mut rng, p));
                runs.push((spec, ri, rj));
            }
        }
        _ => bail!("give either --a and --b, or --random with --s"),
    }

    let mut rows = Vec::with_capacity(runs.len());
    let mut ratios = Vec::with_capacity(runs.len());
    for (spec, ri, rj) in &runs {
        let count = parallel::count_patterns(&curve, spec, ri, rj, g.threads)?;
        let rep = counting::pattern_report_from_count(&curve, spec, ri, rj, count)?;
        ratios.push(rep.ratio);
        rows.push(PatternRow {
            p,
            d: curve.degree(),
            s: spec.s(),
            a: fmt::joined(spec.a()),
            b: fmt::joined(spec.b()),
            i_start: ri.start(),
            i_len: ri.len(),
            j_start: rj.start(),
            j_len: rj.len(),
            count: rep.count,
            main_term: fmt::rational(&rep.main_term),
            defect: fmt::rational(&rep.defect),
            bound: fmt::dec(rep.bound),
            defect_over_bound: fmt::dec(rep.ratio),
        });
    }
    emit(g, &rows)?;
    let p95 = percentile_95(&mut ratios);
    let ok = !g.assert_thresholds || p95 <= ratio_max;
    if !ok {
        eprintln!("assert failed: 95th percentile defect/bound {p95} > {ratio_max}");
    }
    Ok(ok)
}

// ---------------------------------------------------------------------------
// moments

#[derive(Serialize)]
struct MomentRow {
    p: u64,
    curve: String,
    k: u32,
    #[serde(rename = "H")]
    h: u64,
    #[serde(rename = "J_start")]
    j_start: u64,
    #[serde(rename = "J_len")]
    j_len: u64,
    #[serde(rename = "M_k")]
    m_k: String,
    #[serde(rename = "M_k_dec")]
    m_k_dec: String,
    model: String,
    model_dec: String,
    defect: String,
    defect_dec: String,
    thm3_bound: String,
    defect_over_bound: String,
    cor3_bound: String,
}

impl Row for MomentRow {
    const HEADER: &'static str = "p,curve,k,H,J_start,J_len,M_k,M_k_dec,model,model_dec,defect,defect_dec,thm3_bound,defect_over_bound,cor3_bound";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.p,
            self.curve,
            self.k,
            self.h,
            self.j_start,
            self.j_len,
            self.m_k,
            self.m_k_dec,
            self.model,
            self.model_dec,
            self.defect,
            self.defect_dec,
            self.thm3_bound,
            self.defect_over_bound,
            self.cor3_bound,
        )
    }
}

fn cmd_moments(
    g: &GlobalArgs,
    h: u64,
    k: u32,
    j: &str,
    no_cond1: bool,
    ratio_max: f64,
) -> Result<bool> {
    let m = need_modulus(g)?;
    let curve = need_curve(g, m)?;
    let j = fmt::parse_interval(m.p(), j)?;
    let spec = MomentSpec::new(k, h, j)?;
    let m_k = parallel::empirical_moment(&curve, &spec, g.threads)?;
    let rep = moments::moment_report_from(&curve, &spec, m_k, !no_cond1)?;
    let row = MomentRow {
        p: m.p(),
        curve: curve.polynomial().to_string(),
        k,
        h,
        j_start: j.start(),
        j_len: j.len(),
        m_k: fmt::rational(&rep.m_k),
        m_k_dec: fmt::rational_dec(&rep.m_k),
        model: fmt::rational(&rep.model),
        model_dec: fmt::rational_dec(&rep.model),
        defect: fmt::rational(&rep.defect),
        defect_dec: fmt::rational_dec(&rep.defect),
        thm3_bound: fmt::dec(rep.thm3_bound),
        defect_over_bound: fmt::dec(rep.ratio),
        cor3_bound: fmt::dec(rep.cor3_bound),
    };
    emit(g, &[row])?;
    let ok = !g.assert_thresholds || rep.ratio <= ratio_max;
    if !ok {
        eprintln!("assert failed: defect/bound {} > {}", rep.ratio, ratio_max);
    }
    Ok(ok)
}

// ---------------------------------------------------------------------------
// gauss

#[derive(Serialize)]
struct GaussSummaryRow {
    p: u64,
    curve: String,
    #[serde(rename = "H")]
    h: u64,
    #[serde(rename = "N")]
    n: u64,
    mean_model: String,
    var_model: String,
    ks_binomial: String,
    ks_normal: String,
    m1: String,
    m2: String,
    m3: String,
    m4: String,
}

impl Row for GaussSummaryRow {
    const HEADER: &'static str =
        "p,curve,H,N,mean_model,var_model,ks_binomial,ks_normal,m1,m2,m3,m4";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.p,
            self.curve,
            self.h,
            self.n,
            self.mean_model,
            self.var_model,
            self.ks_binomial,
            self.ks_normal,
            self.m1,
            self.m2,
            self.m3,
            self.m4,
        )
    }
}

#[derive(Serialize)]
struct GaussHistRow {
    p: u64,
    curve: String,
    #[serde(rename = "H")]
    h_window: u64,
    #[serde(rename = "J_start")]
    j_start: u64,
    #[serde(rename = "J_len")]
    j_len: u64,
    h: u64,
    count: u64,
}

impl Row for GaussHistRow {
    const HEADER: &'static str = "p,curve,H,J_start,J_len,h,count";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.p, self.curve, self.h_window, self.j_start, self.j_len, self.h, self.count
        )
    }
}

fn cmd_gauss(
    g: &GlobalArgs,
    h: u64,
    j: &str,
    histogram: bool,
    ks_max: f64,
    ks_normal_max: f64,
) -> Result<bool> {
    let m = need_modulus(g)?;
    let curve = need_curve(g, m)?;
    let j = fmt::parse_interval(m.p(), j)?;
    let hist = parallel::histogram(&curve, h, &j, g.threads)?;
    let rep = stats::report_from_histogram(&hist)?;
    let curve_text = curve.polynomial().to_string();
    if histogram {
        let rows: Vec<GaussHistRow> = hist
            .counts
            .iter()
            .enumerate()
            .map(|(idx, &count)| GaussHistRow {
                p: m.p(),
                curve: curve_text.clone(),
                h_window: h,
                j_start: j.start(),
                j_len: j.len(),
                h: idx as u64,
                count,
            })
            .collect();
        emit(g, &rows)?;
    } else {
        let row = GaussSummaryRow {
            p: m.p(),
            curve: curve_text,
            h,
            n: j.len(),
            mean_model: fmt::rational(&rep.mean_model),
            var_model: fmt::rational(&rep.var_model),
            ks_binomial: fmt::dec(rep.ks_binomial),
            ks_normal: rep.ks_normal.map(fmt::dec).unwrap_or_else(|| "nan".into()),
            m1: fmt::rational(&rep.moments[0]),
            m2: fmt::rational(&rep.moments[1]),
            m3: fmt::rational(&rep.moments[2]),
            m4: fmt::rational(&rep.moments[3]),
        };
        emit(g, &[row])?;
    }
    if !g.assert_thresholds {
        return Ok(true);
    }
    let mut ok = true;
    if rep.ks_binomial > ks_max {
        eprintln!(
            "assert failed: ks_binomial {} > {}",
            rep.ks_binomial, ks_max
        );
        ok = false;
    }
    match rep.ks_normal {
        Some(ksn) if ksn > ks_normal_max => {
            eprintln!("assert failed: ks_normal {ksn} > {ks_normal_max}");
            ok = false;
        }
        None => {
            eprintln!("assert failed: model variance is zero, no normal comparison");
            ok = false;
        }
        _ => {}
    }
    Ok(ok)
}

// ---------------------------------------------------------------------------
// verify weil

#[derive(Serialize)]
struct WeilRow {
    p: u64,
    object: String,
    #[serde(rename = "box")]
    box_: String,
    count: u64,
    main_term: String,
    defect: String,
    bound: String,
    ratio: String,
    t: u32,
}

impl Row for WeilRow {
    const HEADER: &'static str = "p,object,box,count,main_term,defect,bound,ratio,t";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.p,
            self.object,
            self.box_,
            self.count,
            self.main_term,
            self.defect,
            self.bound,
            self.ratio,
            self.t,
        )
    }
}

fn cmd_verify_weil(
    g: &GlobalArgs,
    boxes: u64,
    shifted_s: usize,
    percentile_max: f64,
) -> Result<bool> {
    let m = need_modulus(g)?;
    let curve = need_curve(g, m)?;
    let p = m.p();
    let curve_text = curve.polynomial().to_string();
    let mut rows = Vec::with_capacity(boxes as usize);
    let mut ratios = Vec::with_capacity(boxes as usize);
    for idx in 0..boxes {
        // one stream per box, so results do not depend on sharding
        let mut rng = sample::stream_rng(g.seed, idx);
        let (object, box_text, rec) = if shifted_s == 0 {
            let b = Rectangle::new(
                sample::random_nonempty_interval(&mut rng, p),
                sample::random_nonempty_interval(&mut rng, p),
            )?;
            let rec = verify::weil_defect_plane(&curve, &b)?;
            (
                curve_text.clone(),
                format!("{}x{}", fmt::interval(&b.i), fmt::interval(&b.j)),
                rec,
            )
        } else {
            let spec = sample::random_pattern_spec(&mut rng, m, shifted_s)?;
            let shifted = build_shifted_curve(&curve, &spec)?;
            let box_: Vec<CyclicInterval> = (0..=shifted_s)
                .map(|_| sample::random_nonempty_interval(&mut rng, p))
                .collect();
            let rec = verify::weil_defect_shifted(&shifted, &box_)?;
            let box_text = box_.iter().map(fmt::interval).collect::<Vec<_>>().join("x");
            (
                format!(
                    "shifted[{};s={};a={};b={}]",
                    curve_text,
                    shifted_s,
                    fmt::joined(spec.a()),
                    fmt::joined(spec.b())
                ),
                box_text,
                rec,
            )
        };
        ratios.push(rec.ratio);
        rows.push(WeilRow {
            p,
            object,
            box_: box_text,
            count: rec.count,
            main_term: fmt::rational(&rec.main_term),
            defect: fmt::rational(&rec.defect),
            bound: fmt::dec(rec.bound),
            ratio: fmt::dec(rec.ratio),
            t: rec.t,
        });
    }
    emit(g, &rows)?;
    let p95 = percentile_95(&mut ratios);
    let ok = !g.assert_thresholds || p95 <= percentile_max;
    if !ok {
        eprintln!("assert failed: 95th percentile ratio {p95} > {percentile_max}");
    }
    Ok(ok)
}

// ---------------------------------------------------------------------------
// verify translate

#[derive(Serialize)]
struct TranslateRow {
    p: u64,
    r: u32,
    m_max: u64,
    trials: u64,
    seed: u64,
    counterexamples: u64,
}

impl Row for TranslateRow {
    const HEADER: &'static str = "p,r,m_max,trials,seed,counterexamples";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.p, self.r, self.m_max, self.trials, self.seed, self.counterexamples
        )
    }
}

fn cmd_verify_translate(g: &GlobalArgs, r: u32, m_max: u64, trials: u64) -> Result<bool> {
    let m = need_modulus(g)?;
    let found = parallel::translate_search(m, r, m_max, trials, g.seed, g.threads)?;
    let row = TranslateRow {
        p: m.p(),
        r,
        m_max,
        trials,
        seed: g.seed,
        counterexamples: found.len() as u64,
    };
    emit(g, &[row])?;
    for cex in &found {
        eprintln!(
            "counterexample: xs={} set={}",
            fmt::joined(&cex.xs),
            fmt::joined(&cex.set)
        );
    }
    let ok = !g.assert_thresholds || found.is_empty();
    if !ok {
        eprintln!("assert failed: {} counterexamples found", found.len());
    }
    Ok(ok)
}
