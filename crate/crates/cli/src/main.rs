use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use arcforge::bounds::{self, BoundRecord, Conjecture, KnownTable};
use arcforge::certify::{self, CertError, Certificate};
use arcforge::gf::{factor_prime_power, Field};
use arcforge::greedy::{self, CandidatePolicy, SearchConfig};
use arcforge::plane::PlaneIndex;
use clap::{Parser, Subcommand};

const OK: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "arcforge", version, about = "Small complete arcs in PG(2,q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run randomized greedy trials and report the smallest complete arc
    Search(SearchArgs),
    /// Check an arc certificate from scratch
    Verify { file: PathBuf },
    /// Bounds and table statistics for one q
    Bounds {
        #[arg(long)]
        q: u32,
        /// Exponent for the d·√q·ln^c q estimate
        #[arg(long, requires = "d")]
        c: Option<f64>,
        #[arg(long, requires = "c")]
        d: Option<f64>,
    },
    /// Band checks over the table, optionally writing per-q statistics as CSV
    Stats {
        #[arg(long, default_value_t = 0.75)]
        c: f64,
        #[arg(long, default_value_t = bounds::STATS_Q_MIN)]
        qmin: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Comma-separated orders to leave out instead of the default list
        #[arg(long, value_delimiter = ',')]
        exclude: Option<Vec<u32>>,
    },
    /// Print table rows with lo <= q <= hi
    Table {
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        range: Vec<u32>,
    },
}

#[derive(clap::Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    h: Option<u32>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop once this size is reached; defaults to the smallest known size
    #[arg(long)]
    target: Option<usize>,
    /// Run every trial regardless of the target
    #[arg(long, conflicts_with = "target")]
    no_target: bool,
    /// Write a certificate of the best arc
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    top_k: Option<usize>,
    /// Score a random sample of this many candidates per step
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long)]
    seed_arc_size: Option<usize>,
    /// Wall-clock limit in seconds
    #[arg(long)]
    time_budget: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Search(args) => cmd_search(args),
        Command::Verify { file } => cmd_verify(&file),
        Command::Bounds { q, c, d } => cmd_bounds(q, c.zip(d)),
        Command::Stats {
            c,
            qmin,
            csv,
            exclude,
        } => cmd_stats(c, qmin, csv, exclude),
        Command::Table { range } => cmd_table(range[0], range[1]),
    };
    ExitCode::from(code)
}

fn fail(code: u8, msg: impl std::fmt::Display) -> u8 {
    eprintln!("arcforge: {msg}");
    code
}

fn load_table() -> Result<KnownTable, u8> {
    KnownTable::from_env().map_err(|e| fail(USAGE, e))
}

fn cmd_search(args: SearchArgs) -> u8 {
    let Some((p, h)) = factor_prime_power(args.q as u64) else {
        return fail(USAGE, format!("q = {} is not a prime power", args.q));
    };
    if args.p.is_some_and(|x| x != p) || args.h.is_some_and(|x| x != h) {
        return fail(USAGE, format!("q = {} is {p}^{h}", args.q));
    }
    let mut cfg = match SearchConfig::new(args.q) {
        Ok(cfg) => cfg.trials(args.trials).seed(args.seed).jobs(args.jobs),
        Err(e) => return fail(USAGE, e),
    };
    if args.no_target {
        cfg.target_size = None;
    } else if args.target.is_some() {
        cfg.target_size = args.target;
    } else if std::env::var_os(bounds::TABLE_PATH_ENV).is_some() {
        match load_table() {
            Ok(t) => cfg.target_size = t.get(args.q).map(|r| r.t2bar as usize),
            Err(code) => return code,
        }
    }
    if let Some(k) = args.top_k {
        cfg.top_k = k;
        cfg.vary_top_k = false;
    }
    if let Some(m) = args.sample {
        cfg.candidate_policy = CandidatePolicy::Sample(m);
    }
    if let Some(s) = args.seed_arc_size {
        cfg.seed_arc_size = s;
    }
    if let Some(secs) = args.time_budget {
        match Duration::try_from_secs_f64(secs) {
            Ok(d) => cfg.time_budget = Some(d),
            Err(_) => {
                return fail(
                    USAGE,
                    "time budget must be a non-negative number of seconds",
                )
            }
        }
    }
    if let Err(e) = cfg.validate() {
        return fail(USAGE, e);
    }
    let plane = match Field::new(p, h).map(PlaneIndex::build) {
        Ok(Ok(plane)) => plane,
        Ok(Err(e)) => return fail(USAGE, e),
        Err(e) => return fail(USAGE, e),
    };
    let report = match greedy::search_in(&plane, &cfg) {
        Ok(r) => r,
        Err(e) => return fail(FAILED, e),
    };
    print!("{}", report.render());
    eprintln!("elapsed: {:.3}s", report.elapsed.as_secs_f64());
    if let Some(path) = args.out {
        if let Err(e) = certify::write_certificate(&plane, &report.best_arc, true, &path) {
            return fail(USAGE, e);
        }
        println!("certificate written to {}", path.display());
    }
    OK
}

fn cmd_verify(file: &std::path::Path) -> u8 {
    let verdict = match certify::read_certificate(file).and_then(|c: Certificate| c.verify()) {
        Ok(v) => v,
        Err(e @ CertError::DuplicatePoint { .. }) => return fail(FAILED, e),
        Err(e) => return fail(USAGE, format!("{}: {e}", file.display())),
    };
    let yes = |b: bool| if b { "yes" } else { "no" };
    let (p, h) = factor_prime_power(verdict.q as u64).expect("checked by the parser");
    let lower = bounds::lower_bound(verdict.q, p, h);
    println!("q = {}", verdict.q);
    println!("size = {}", verdict.size);
    println!("arc: {}", yes(verdict.is_arc));
    println!(
        "complete: {} (claimed {})",
        yes(verdict.is_complete),
        yes(verdict.claimed_complete)
    );
    if verdict.is_arc && !verdict.is_complete {
        println!("uncovered points: {}", verdict.uncovered);
    }
    println!("lower bound: {lower:.3}");
    let table = load_table().ok();
    if let Some(row) = table.as_ref().and_then(|t| t.get(verdict.q)) {
        println!("smallest known: {}", row.t2bar);
        if verdict.is_complete && verdict.size < row.t2bar as usize {
            println!("note: smaller than the smallest known size");
        }
    }
    let mut ok = verdict.holds();
    if verdict.claimed_complete && verdict.size as f64 <= lower {
        println!(
            "lower bound violated: a complete arc in PG(2,{}) has more than {lower:.3} points",
            verdict.q
        );
        ok = false;
    }
    println!("verdict: {}", if ok { "verified" } else { "rejected" });
    if ok {
        OK
    } else {
        FAILED
    }
}

fn cmd_bounds(q: u32, kim_vu: Option<(f64, f64)>) -> u8 {
    let Some((p, h)) = factor_prime_power(q as u64) else {
        return fail(USAGE, format!("q = {q} is not a prime power"));
    };
    let table = match load_table() {
        Ok(t) => t,
        Err(code) => return code,
    };
    println!("q = {q} (p = {p}, h = {h})");
    println!("lower bound = {:.4}", bounds::lower_bound(q, p, h));
    match bounds::multiplier_a_q(q) {
        Ok(m) => println!("a_q = {m}"),
        Err(_) => println!("a_q = undefined"),
    }
    if let Some(row) = table.get(q) {
        let rec = BoundRecord::compute(q, row.t2bar, row.exact);
        println!(
            "t2bar = {}{}",
            row.t2bar,
            if row.exact { " (exact)" } else { "" }
        );
        println!("table = {}", row.table);
        match rec.big_a_q {
            Some(a) => println!("A_q = {a}"),
            None => println!("A_q = undefined"),
        }
        println!("B_q = {}", bounds::format_hundredths(rec.big_b_q));
        println!("D_q(0.75) = {}", bounds::sig6(rec.d_q075));
        println!("t_hat = {}", bounds::sig6(rec.t_hat));
        println!("delta = {}", bounds::sig6(rec.delta));
        println!("P_q = {}%", bounds::sig6(rec.p_q));
    } else {
        println!("t2bar = not tabulated");
        println!("t_hat = {}", bounds::sig6(bounds::t_hat(q)));
    }
    if let Some((c, d)) = kim_vu {
        println!(
            "d*sqrt(q)*ln^c(q) = {} (c = {c}, d = {d})",
            bounds::sig6(bounds::kim_vu(q, c, d))
        );
    }
    OK
}

fn cmd_stats(c: f64, qmin: u32, csv: Option<PathBuf>, exclude: Option<Vec<u32>>) -> u8 {
    if !(c > 0.0 && c < 1.0) {
        return fail(USAGE, "--c must lie strictly between 0 and 1");
    }
    if qmin < 2 {
        return fail(USAGE, "--qmin must be at least 2");
    }
    let table = match load_table() {
        Ok(t) => t,
        Err(code) => return code,
    };
    let exclusions = exclude.unwrap_or_else(bounds::default_exclusions);
    let text = bounds::emit_stats_csv(&table, c, qmin, &exclusions);
    let rows = text.lines().count() - 1;
    if let Some(path) = &csv {
        if let Err(e) = std::fs::write(path, &text) {
            return fail(USAGE, format!("{}: {e}", path.display()));
        }
    }
    println!("rows = {rows}");
    if let Some(avg) = bounds::average_d(&table, c, qmin, &exclusions) {
        println!("average D_q({c}) = {}", bounds::sig6(avg));
    }

    let mut violations = bounds::check_theorem_bands(&table);
    violations.extend(bounds::check_conjecture(&table, Conjecture::FiveSqrt));
    // The band constants only make sense for the default exponent and range.
    if c == 0.75 && qmin == bounds::STATS_Q_MIN {
        violations.extend(bounds::check_observations(&table, &exclusions));
    }
    println!("band violations = {}", violations.len());
    for v in &violations {
        println!(
            "  q = {} t2bar = {} fails {} ({})",
            v.q,
            v.t2bar,
            v.rule,
            bounds::sig6(v.bound)
        );
    }
    if let Some(path) = csv {
        println!("csv written to {}", path.display());
    }
    if violations.is_empty() {
        OK
    } else {
        FAILED
    }
}

fn cmd_table(lo: u32, hi: u32) -> u8 {
    let table = match load_table() {
        Ok(t) => t,
        Err(code) => return code,
    };
    let (min, max) = (table.min_q().unwrap_or(2), table.max_q().unwrap_or(2));
    if lo > hi || lo < min || hi > max {
        return fail(
            USAGE,
            format!("range must satisfy {min} <= LO <= HI <= {max}"),
        );
    }
    println!("q t2bar exact table A_q B_q");
    for row in table.range(lo, hi) {
        let rec = BoundRecord::compute(row.q, row.t2bar, row.exact);
        println!(
            "{} {} {} {} {} {}",
            row.q,
            row.t2bar,
            u8::from(row.exact),
            row.table,
            rec.big_a_q.map_or("-".to_string(), |a| a.to_string()),
            bounds::format_hundredths(rec.big_b_q)
        );
    }
    OK
}
