//! bindiv: exact binomial congruence and divisibility engines on the
//! command line. Records stream as JSON lines on stdout; a human summary
//! goes to stderr. Exit codes: 0 clean, 1 discrepancies or failed
//! verifications, 2 usage errors.

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bindiv_core::classics::{self, CongruenceKind};
use bindiv_core::engines::{
    beta_window, c1_classify, c1_construct, c1_verify, c2_construct, c2_search, c3_build,
    c3_verify, residue_scan, thm22_find_instance, thm22_params, thm22_verify, thm32_verify,
    Thm22Part,
};
use bindiv_core::primes::{dirichlet_threshold, next_prime_in_ap, DEFAULT_AP_SEARCH_BUDGET};
use bindiv_core::valuation::{divides_binomial, kummer, legendre, lucas_mod_p};
use bindiv_core::{rational, Error, Rational};
use output::{Emitter, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "bindiv", version, about = "exact binomial congruence toolkit")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// worker threads for range sweeps (0 = rayon default)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// digit budget for big constructions (also env BINDIV_DIGIT_BUDGET)
    #[arg(long, global = true)]
    budget_digits: Option<usize>,
    /// emit JSON lines on stdout (stderr always carries the summary)
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    json: bool,
    /// progress notes on stderr
    #[arg(long, global = true, default_value_t = false)]
    progress: bool,
}

#[derive(Subcommand)]
enum Command {
    /// C(n, m) mod p by the Lucas digit product
    Lucas {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: u64,
    },
    /// p-adic valuations: v_p(C(n,m)) by carry counting, or v_p(n!)
    Valuation {
        #[arg(long)]
        p: u64,
        /// binomial mode: v_p(C(n, m))
        #[arg(long, num_args = 2, value_names = ["N", "M"])]
        binomial: Option<Vec<u64>>,
        /// factorial mode: v_p(n!)
        #[arg(long)]
        factorial: Option<u64>,
    },
    /// does the modulus divide C(n, m)?
    Divides {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
    /// classical congruence sweeps (Babbage, Wolstenholme, Ljunggren, Jacobsthal)
    Classics {
        #[arg(long, value_enum, default_value_t = ClassicKind::All)]
        kind: ClassicKind,
        /// prime ceiling for the Babbage / Wolstenholme sweeps
        #[arg(long)]
        p_max: Option<u64>,
        /// primes for the ratio congruences
        #[arg(long, value_delimiter = ',', default_values_t = [5u64, 7, 11, 13])]
        primes: Vec<u64>,
        /// n ceiling for the ratio congruences
        #[arg(long, default_value_t = 12)]
        n_max: u64,
    },
    /// prime utilities
    Primes {
        #[command(subcommand)]
        sub: PrimesCmd,
    },
    /// counterexamples to "pn-1 divides C(an, bn) for all n"
    C2 {
        #[command(subcommand)]
        sub: C2Cmd,
    },
    /// window theorems for the a = cp, b = pk+r family
    Thm22 {
        #[command(subcommand)]
        sub: Thm22Cmd,
    },
    /// feasibility window for theta = (pn-1)/k
    Beta {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
    },
    /// the an-1 divisibility family
    C3 {
        #[command(subcommand)]
        sub: C3Cmd,
    },
    /// the an-a divisibility family (claim under test)
    Thm32 {
        #[command(subcommand)]
        sub: Thm32Cmd,
    },
    /// residue witness machine for C(an+alpha, bn+beta) mod p
    C1 {
        #[command(subcommand)]
        sub: C1Cmd,
    },
    /// scan residues of C(an+alpha, bn+beta) mod p over n = 1..n_max
    Scan {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        alpha: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        beta: i64,
        #[arg(long)]
        n_max: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassicKind {
    Babbage,
    Wolstenholme,
    Ljunggren,
    Jacobsthal,
    All,
}

#[derive(Subcommand)]
enum PrimesCmd {
    /// next prime in an arithmetic progression
    Ap {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        residue: u64,
        #[arg(long, default_value_t = 0)]
        lower: u64,
        #[arg(long, default_value_t = DEFAULT_AP_SEARCH_BUDGET)]
        budget: u64,
    },
    /// empirical window threshold for primes = -1 (mod p); heuristic only
    Threshold {
        #[arg(long)]
        p: u64,
        /// window width as an exact fraction NUM/DEN
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value_t = 1)]
        count: u32,
        #[arg(long)]
        x_max: u64,
    },
}

#[derive(Subcommand)]
enum C2Cmd {
    /// smallest n with (pn-1) not dividing C(an, bn)
    Search {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n_max: u64,
    },
    /// build and verify a factored witness index K
    Construct {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n_seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PartArg {
    I,
    Ii,
}

impl From<PartArg> for Thm22Part {
    fn from(p: PartArg) -> Self {
        match p {
            PartArg::I => Thm22Part::I,
            PartArg::Ii => Thm22Part::II,
        }
    }
}

#[derive(Subcommand)]
enum Thm22Cmd {
    /// exact-rational hypothesis bounds for (p, r, c, k)
    Params {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        k: u64,
    },
    /// verify an instance (or search the first verifying one)
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        part: PartArg,
        #[arg(long)]
        c: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        /// instance search ceiling when c or k are omitted
        #[arg(long, default_value_t = 1000)]
        search_limit: u64,
    },
}

#[derive(Subcommand)]
enum C3Cmd {
    /// derive (a, b) for a given m
    Build {
        #[arg(long)]
        m: u64,
    },
    /// check an-1 | C(amn, bn) over a range of n
    Verify {
        /// derive a, b from m when set; otherwise pass --a and --b
        #[arg(long)]
        m: u64,
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long, default_value_t = 1)]
        n_from: u64,
        #[arg(long)]
        n_max: u64,
    },
}

#[derive(Subcommand)]
enum Thm32Cmd {
    /// check a(n-1) | C(amn, bn) with b = a * p_3...p_t over a range of n
    Verify {
        #[arg(long)]
        a: u64,
        /// 1-based prime index bounding the tail product
        #[arg(long)]
        t: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 2)]
        n_from: u64,
        #[arg(long)]
        n_max: u64,
    },
}

#[derive(Subcommand)]
enum C1Cmd {
    /// case split and excluded residues for (a, b, p, alpha)
    Classify {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        alpha: i64,
    },
    /// build a witness plan for residue r
    Construct(C1ConstructArgs),
    /// build a witness plan and re-verify it end to end
    Verify(C1ConstructArgs),
}

#[derive(Args)]
struct C1ConstructArgs {
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    alpha: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    beta: i64,
    #[arg(long)]
    r: u64,
    /// replica width multiplier (u = big_n * phi(a), grown as needed)
    #[arg(long, default_value_t = 1)]
    big_n: u64,
    /// explicit L for the K coefficient; omitted = minimal L with K > 1
    #[arg(long)]
    l: Option<u64>,
}

fn parse_epsilon(s: &str) -> Result<Rational, Error> {
    let parse = |x: &str| {
        x.trim()
            .parse::<i128>()
            .map_err(|_| Error::input("epsilon", format!("bad integer `{x}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d) = (parse(n)?, parse(d)?);
            if d <= 0 || n <= 0 {
                return Err(Error::input("epsilon", "need positive NUM/DEN"));
            }
            Ok(rational(n, d))
        }
        None => Ok(rational(parse(s)?, 1)),
    }
}

fn run(cli: Cli) -> i32 {
    let Cli { common, command } = cli;
    if let Some(budget) = common.budget_digits.or_else(|| {
        std::env::var("BINDIV_DIGIT_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
    }) {
        bindiv_core::set_digit_budget(budget);
    }
    match command {
        Command::Lucas { n, m, p } => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "lucas",
                json!({"n": n, "m": m, "p": p}),
            );
            match lucas_mod_p(n, m, p) {
                Ok(residue) => em.record(
                    "lucas",
                    &json!({"n": n, "m": m, "p": p, "residue": residue}),
                ),
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
        Command::Valuation {
            p,
            binomial,
            factorial,
        } => {
            let mut em = Emitter::new(common.json, common.progress, "valuation", json!({"p": p}));
            if !bindiv_core::primes::is_prime(p) {
                return fail(em, Error::input("valuation", format!("{p} is not prime")));
            }
            match (binomial, factorial) {
                (Some(nm), None) => {
                    let (n, m) = (nm[0], nm[1]);
                    if m > n {
                        return fail(em, Error::input("valuation", "need m <= n"));
                    }
                    let v = kummer(m, n - m, p);
                    let by_legendre = legendre(n, p) - legendre(m, p) - legendre(n - m, p);
                    em.record(
                        "binomial_valuation",
                        &json!({"n": n, "m": m, "p": p, "valuation": v, "legendre_difference": by_legendre}),
                    );
                    if v != by_legendre {
                        em.discrepancy(
                            "carry count equals Legendre difference",
                            json!({"n": n, "m": m, "p": p}),
                        );
                    }
                }
                (None, Some(n)) => {
                    em.record(
                        "factorial_valuation",
                        &json!({"n": n, "p": p, "valuation": legendre(n, p)}),
                    );
                }
                _ => {
                    return fail(
                        em,
                        Error::input("valuation", "pass exactly one of --binomial or --factorial"),
                    )
                }
            }
            em.finish()
        }
        Command::Divides { modulus, n, m } => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "divides",
                json!({"modulus": modulus, "n": n, "m": m}),
            );
            match divides_binomial(modulus, n, m) {
                Ok(rep) => em.record("divisibility", &rep),
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
        Command::Classics {
            kind,
            p_max,
            primes,
            n_max,
        } => run_classics(common, kind, p_max, primes, n_max),
        Command::Primes { sub } => run_primes(common, sub),
        Command::C2 { sub } => run_c2(common, sub),
        Command::Thm22 { sub } => run_thm22(common, sub),
        Command::Beta { p, r } => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "beta",
                json!({"p": p, "r": r}),
            );
            match beta_window(p, r) {
                Ok(w) => em.record("beta_window", &w),
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
        Command::C3 { sub } => run_c3(common, sub),
        Command::Thm32 { sub } => run_thm32(common, sub),
        Command::C1 { sub } => run_c1(common, sub),
        Command::Scan {
            a,
            b,
            p,
            alpha,
            beta,
            n_max,
        } => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "scan",
                json!({"a": a, "b": b, "p": p, "alpha": alpha, "beta": beta, "n_max": n_max}),
            );
            em.progress("scanning residues");
            match residue_scan(a, b, p, alpha, beta, n_max) {
                Ok(scan) => em.record("residue_scan", &scan),
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
    }
}

fn fail(mut em: Emitter, e: Error) -> i32 {
    if e.is_usage() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    em.failure(&e);
    em.finish()
}

fn run_classics(
    common: Common,
    kind: ClassicKind,
    p_max: Option<u64>,
    primes: Vec<u64>,
    n_max: u64,
) -> i32 {
    let mut em = Emitter::new(
        common.json,
        common.progress,
        "classics",
        json!({"p_max": p_max, "primes": primes, "n_max": n_max}),
    );
    let mut reports = Vec::new();
    let runs: &[CongruenceKind] = match kind {
        ClassicKind::Babbage => &[CongruenceKind::Babbage],
        ClassicKind::Wolstenholme => &[CongruenceKind::Wolstenholme],
        ClassicKind::Ljunggren => &[CongruenceKind::Ljunggren],
        ClassicKind::Jacobsthal => &[CongruenceKind::Jacobsthal],
        ClassicKind::All => &[
            CongruenceKind::Babbage,
            CongruenceKind::Wolstenholme,
            CongruenceKind::Ljunggren,
            CongruenceKind::Jacobsthal,
        ],
    };
    for &k in runs {
        em.progress(&format!("sweeping {k:?}"));
        let res = match k {
            CongruenceKind::Babbage => classics::babbage_sweep(p_max.unwrap_or(2000)),
            CongruenceKind::Wolstenholme => classics::wolstenholme_sweep(p_max.unwrap_or(1000)),
            CongruenceKind::Ljunggren => classics::ratio_sweep(k, &primes, n_max),
            CongruenceKind::Jacobsthal => classics::ratio_sweep(k, &primes, n_max),
        };
        match res {
            Ok(mut r) => reports.append(&mut r),
            Err(e) => return fail(em, e),
        }
    }
    for rep in &reports {
        em.record("congruence", rep);
        if rep.is_discrepancy() {
            em.discrepancy(
                "classical congruence holds on its claimed range",
                serde_json::to_value(rep).expect("serialize"),
            );
        }
    }
    em.finish()
}

fn run_primes(common: Common, sub: PrimesCmd) -> i32 {
    match sub {
        PrimesCmd::Ap {
            modulus,
            residue,
            lower,
            budget,
        } => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "primes-ap",
                json!({"modulus": modulus, "residue": residue, "lower": lower}),
            );
            match next_prime_in_ap(modulus, residue, lower, budget) {
                Ok(q) => em.record(
                    "prime",
                    &json!({"prime": q, "modulus": modulus, "residue": residue}),
                ),
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
        PrimesCmd::Threshold {
            p,
            epsilon,
            count,
            x_max,
        } => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "primes-threshold",
                json!({"p": p, "epsilon": epsilon, "count": count, "x_max": x_max}),
            );
            let eps = match parse_epsilon(&epsilon) {
                Ok(e) => e,
                Err(e) => return fail(em, e),
            };
            em.progress("scanning windows");
            match dirichlet_threshold(p, eps, count, x_max) {
                Ok(est) => em.record("dirichlet_estimate", &est),
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
    }
}

fn run_c2(common: Common, sub: C2Cmd) -> i32 {
    match sub {
        C2Cmd::Search { a, b, p, n_max } => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "c2-search",
                json!({"a": a, "b": b, "p": p, "n_max": n_max}),
            );
            match c2_search(a, b, p, n_max) {
                Ok(hit) => em.record("counterexample", &json!({"first_n": hit})),
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
        C2Cmd::Construct { a, b, p, n_seed } => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "c2-construct",
                json!({"a": a, "b": b, "p": p, "n_seed": n_seed}),
            );
            match c2_construct(a, b, p, n_seed) {
                Ok(c) => {
                    if let Some(note) = &c.fallback {
                        em.progress(note);
                    }
                    em.record("construction", &c);
                }
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
    }
}

fn run_thm22(common: Common, sub: Thm22Cmd) -> i32 {
    match sub {
        Thm22Cmd::Params { p, r, c, k } => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "thm22-params",
                json!({"p": p, "r": r, "c": c, "k": k}),
            );
            match thm22_params(p, r, c, k) {
                Ok(params) => em.record("params", &params),
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
        Thm22Cmd::Verify {
            p,
            r,
            part,
            c,
            k,
            search_limit,
        } => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "thm22-verify",
                json!({"p": p, "r": r, "c": c, "k": k, "search_limit": search_limit}),
            );
            let res = match (c, k) {
                (Some(c), Some(k)) => {
                    thm22_params(p, r, c, k).and_then(|params| thm22_verify(&params, part.into()))
                }
                (None, None) => thm22_find_instance(p, r, part.into(), search_limit),
                _ => Err(Error::input("thm22", "pass both --c and --k, or neither")),
            };
            match res {
                Ok(v) => em.record("verification", &v),
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
    }
}

fn run_c3(common: Common, sub: C3Cmd) -> i32 {
    match sub {
        C3Cmd::Build { m } => {
            let mut em = Emitter::new(common.json, common.progress, "c3-build", json!({"m": m}));
            match c3_build(m) {
                Ok(c) => em.record("construction", &c),
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
        C3Cmd::Verify {
            m,
            a,
            b,
            n_from,
            n_max,
        } => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "c3-verify",
                json!({"m": m, "a": a, "b": b, "n_from": n_from, "n_max": n_max}),
            );
            let (a, b) = match (a, b) {
                (Some(a), Some(b)) => (a, b),
                (None, None) => match c3_build(m) {
                    Ok(c) => (c.a, c.b),
                    Err(e) => return fail(em, e),
                },
                _ => return fail(em, Error::input("c3", "pass both --a and --b, or neither")),
            };
            em.progress(&format!("checking a={a} b={b} over n={n_from}..{n_max}"));
            match c3_verify(a, b, m, n_from, n_max) {
                Ok(checks) => {
                    for check in &checks {
                        em.record("check", check);
                        if !check.divides() {
                            em.discrepancy(
                                "an-1 divides C(amn, bn)",
                                json!({"a": a, "b": b, "m": m, "n": check.n, "modulus": check.modulus}),
                            );
                        }
                    }
                }
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
    }
}

fn run_thm32(common: Common, sub: Thm32Cmd) -> i32 {
    let Thm32Cmd::Verify {
        a,
        t,
        m,
        n_from,
        n_max,
    } = sub;
    let mut em = Emitter::new(
        common.json,
        common.progress,
        "thm32-verify",
        json!({"a": a, "t": t, "m": m, "n_from": n_from, "n_max": n_max}),
    );
    match thm32_verify(a, t, m, n_from, n_max) {
        Ok(report) => {
            for check in &report.checks {
                em.record("check", check);
            }
            for &n in &report.failing_n {
                em.discrepancy(
                    "an-a divides C(amn, bn)",
                    json!({"a": a, "t": t, "m": m, "b": report.b, "n": n, "modulus": a * (n - 1)}),
                );
            }
        }
        Err(e) => return fail(em, e),
    }
    em.finish()
}

fn run_c1(common: Common, sub: C1Cmd) -> i32 {
    match sub {
        C1Cmd::Classify { a, b, p, alpha } => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "c1-classify",
                json!({"a": a, "b": b, "p": p, "alpha": alpha}),
            );
            match c1_classify(a, b, p, alpha) {
                Ok(c) => em.record("classification", &c),
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
        C1Cmd::Construct(args) => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "c1-construct",
                json!({"a": args.a, "b": args.b, "p": args.p, "alpha": args.alpha,
                       "beta": args.beta, "r": args.r, "big_n": args.big_n, "l": args.l}),
            );
            match c1_construct(
                args.a, args.b, args.p, args.alpha, args.beta, args.r, args.big_n, args.l,
            ) {
                Ok(plan) => em.record("plan", &plan),
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
        C1Cmd::Verify(args) => {
            let mut em = Emitter::new(
                common.json,
                common.progress,
                "c1-verify",
                json!({"a": args.a, "b": args.b, "p": args.p, "alpha": args.alpha,
                       "beta": args.beta, "r": args.r, "big_n": args.big_n, "l": args.l}),
            );
            let res = c1_construct(
                args.a, args.b, args.p, args.alpha, args.beta, args.r, args.big_n, args.l,
            )
            .and_then(|plan| {
                em.record("plan", &plan);
                c1_verify(&plan)
            });
            match res {
                Ok(v) => em.record("verification", &v),
                Err(e) => return fail(em, e),
            }
            em.finish()
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let threads = cli.common.threads;
    let code = if threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| run(cli))
    } else {
        run(cli)
    };
    std::process::exit(code);
}
