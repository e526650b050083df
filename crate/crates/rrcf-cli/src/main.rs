//! Command-line interface for the rrcf toolkit.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use rrcf::bigfloat::{parse_decimal, BigComplex, BigFloat};
use rrcf::classfield;
use rrcf::cusps::{cusp_width, enumerate_cusps, GroupDesc};
use rrcf::etaforms::{self, parse_spec, QuotientSpec};
use rrcf::modeq;
use rrcf::numeric;
use rrcf::orders;
use rrcf::qseries::PuiseuxSeries;

#[derive(Parser)]
#[command(
    name = "rrcf",
    about = "Exact q-series, cusp calculus, modular equations and class polynomials \
             for the Rogers-Ramanujan continued fraction and its companions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GroupKindArg {
    Gamma0,
    Gamma1,
    Mixed,
}

#[derive(Subcommand)]
enum Command {
    /// Print the q-expansion of a named function or an eta-quotient spec.
    Qexp {
        /// Named function: r, l, k, f, j, eta.
        #[arg(long, conflicts_with = "spec")]
        function: Option<String>,
        /// Quotient spec, e.g. "eta 10: {1: 6, 5: -6}" or
        /// "geneta 10 scale 2: {1: -2, 2: 3, 3: 2, 4: -3}".
        #[arg(long)]
        spec: Option<String>,
        /// Truncation order (series trusted through exponents < T).
        #[arg(long, default_value_t = 60)]
        order: i64,
        /// Emit the JSON form instead of readable text.
        #[arg(long)]
        json: bool,
    },
    /// List inequivalent cusps with their widths.
    Cusps {
        /// Level N of Gamma_1(N) (or modulus of Gamma_0 with --kind gamma0).
        #[arg(long = "N")]
        n: i64,
        /// Cofactor m of Gamma_0(mN) for the mixed group.
        #[arg(long)]
        m: Option<i64>,
        /// Group family (defaults to mixed when --m is given, else gamma1).
        #[arg(long, value_enum)]
        kind: Option<GroupKindArg>,
    },
    /// Print the order table of a quotient on a congruence subgroup.
    Orders {
        /// Quotient spec (eta or geneta grammar).
        #[arg(long)]
        spec: String,
        /// Level N (eta specs: Gamma_0(mN); geneta: Gamma_1(N) ∩ Gamma_0(mN)).
        #[arg(long = "N")]
        n: i64,
        /// Cofactor m (default 1).
        #[arg(long, default_value_t = 1)]
        m: i64,
    },
    /// Derive (and optionally verify) the level-n modular equation for l.
    Modeq {
        /// Level n.
        #[arg(long)]
        level: u32,
        /// Verify by series substitution through exponent T.
        #[arg(long)]
        verify: Option<i64>,
        /// Emit sparse JSON {"i,j": "coeff"} instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Class polynomial of the singular values of l at sqrt(D)/2.
    Classpoly {
        /// Field discriminant (negative, ≡ 0 mod 4).
        #[arg(long, allow_negative_numbers = true)]
        disc: i64,
        /// Working precision in bits.
        #[arg(long)]
        prec: Option<u32>,
        /// Emit JSON with coefficients, roots and the rounding residual.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a named function at a point of the upper half-plane.
    Eval {
        /// Function name: r, l, k, f, j, eta, q.
        #[arg(long)]
        function: String,
        /// Point tau as "a+bi", e.g. "0.5+1.2i", "i", "2i".
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        /// Working precision in bits.
        #[arg(long)]
        prec: Option<u32>,
    },
    /// Run every identity and invariant check; nonzero exit on failure.
    VerifySuite {
        /// Truncation order for the series identities.
        #[arg(long, default_value_t = 120)]
        order: i64,
    },
}

fn default_prec() -> u32 {
    std::env::var("RRMOD_DEFAULT_PREC")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(192)
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_passed) => {
            if !all_passed {
                std::process::exit(1);
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Qexp {
            function,
            spec,
            order,
            json,
        } => {
            if order < 1 {
                return Err(anyhow!("--order must be positive"));
            }
            let series = match (function, spec) {
                (Some(name), None) => named_series(&name, order)?,
                (None, Some(s)) => {
                    let spec = parse_spec(&s).context("parsing --spec")?;
                    etaforms::quotient_series(&spec, order)
                }
                (None, None) => return Err(anyhow!("one of --function or --spec is required")),
                _ => unreachable!("clap enforces the conflict"),
            };
            let series = clip(&series, order);
            if json {
                println!("{}", series.to_json());
            } else {
                println!("{series}");
            }
            Ok(true)
        }
        Command::Cusps { n, m, kind } => {
            let group = resolve_group(n, m, kind)?;
            for cusp in enumerate_cusps(&group) {
                println!("{} width={}", cusp, cusp_width(&group, &cusp));
            }
            Ok(true)
        }
        Command::Orders { spec, n, m } => {
            let spec = parse_spec(&spec).context("parsing --spec")?;
            let table = match &spec {
                QuotientSpec::Eta(e) => orders::eta_order_table(e, n * m)?,
                QuotientSpec::Gen(g) => {
                    let group = GroupDesc::mixed(n, m)?;
                    orders::order_table(g, &group)?
                }
            };
            println!("# {} on {}", spec, table.group());
            for (cusp, order) in table.entries() {
                println!("{cusp} order={order}");
            }
            println!(
                "# total pole degree: {}",
                match table.total_pole_degree() {
                    Ok(d) => d.to_string(),
                    Err(_) => "n/a (non-integral orders)".to_string(),
                }
            );
            Ok(true)
        }
        Command::Modeq {
            level,
            verify,
            json,
        } => {
            if level < 1 {
                return Err(anyhow!("--level must be positive"));
            }
            let poly = modeq::derive_modeq(level)?;
            if json {
                println!("{}", poly.to_sparse_json());
            } else {
                println!("{}", poly.to_text());
            }
            if let Some(t) = verify {
                if t < 50 {
                    return Err(anyhow!("--verify needs T >= 50"));
                }
                let outcome = modeq::verify_modeq(&poly, level, t);
                if outcome.ok {
                    eprintln!("verified: vanishes through q^{t}");
                } else {
                    eprintln!(
                        "verification FAILED at exponent {}",
                        outcome
                            .first_failure
                            .map(|e| e.to_string())
                            .unwrap_or_default()
                    );
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Command::Classpoly { disc, prec, json } => {
            let prec = prec.unwrap_or_else(default_prec);
            let cp = classfield::class_polynomial(disc, 10, prec)?;
            if json {
                let digits = certified_digits(prec);
                let coeffs: Vec<String> = (0..=cp.poly.degree())
                    .map(|k| cp.poly.coeff(k).to_string())
                    .collect();
                let roots: Vec<String> = cp
                    .conjugates
                    .iter()
                    .map(|v| {
                        format!(
                            "{}{}{}i",
                            v.re().to_decimal(digits),
                            if v.im().is_negative() { "-" } else { "+" },
                            v.im().abs().to_decimal(digits)
                        )
                    })
                    .collect();
                let out = serde_json::json!({
                    "disc": disc,
                    "N": 10,
                    "coeffs": coeffs,
                    "roots": roots,
                    "residual": format!("{:e}", cp.residual),
                });
                println!("{out}");
            } else {
                println!("{}", cp.poly.format_with("X"));
                eprintln!("# residual {:e} at {} bits", cp.residual, cp.prec_used);
            }
            Ok(true)
        }
        Command::Eval {
            function,
            tau,
            prec,
        } => {
            let prec = prec.unwrap_or_else(default_prec);
            let tau = parse_tau(&tau, prec + 32).with_context(|| format!("parsing --tau {tau:?}"))?;
            let value = numeric::eval_named(&function, &tau, prec)?;
            let digits = certified_digits(prec);
            if value.im().abs().to_f64() < 2f64.powi(-(prec as i32) + 8) {
                println!("{}", value.re().to_decimal(digits));
            } else {
                println!(
                    "{} {}{}i",
                    value.re().to_decimal(digits),
                    if value.im().is_negative() { "-" } else { "+" },
                    value.im().abs().to_decimal(digits)
                );
            }
            Ok(true)
        }
        Command::VerifySuite { order } => run_suite(order),
    }
}

fn certified_digits(prec: u32) -> u32 {
    ((prec.saturating_sub(16)) as f64 * std::f64::consts::LOG10_2) as u32
}

fn named_series(name: &str, order: i64) -> Result<PuiseuxSeries> {
    Ok(match name {
        "r" => etaforms::r_series(order),
        "l" => etaforms::l_series(order),
        "k" => etaforms::k_series(order),
        "f" => etaforms::f_series(order),
        "j" => etaforms::j_series(order),
        "eta" => etaforms::eta_series(order),
        other => {
            return Err(anyhow!(
                "unknown function {other:?}; expected one of r, l, k, f, j, eta"
            ))
        }
    })
}

/// Drop knowledge beyond the requested order so output size tracks --order.
fn clip(series: &PuiseuxSeries, order: i64) -> PuiseuxSeries {
    series.truncate_to(order, 1)
}

fn resolve_group(n: i64, m: Option<i64>, kind: Option<GroupKindArg>) -> Result<GroupDesc> {
    let group = match (kind, m) {
        (Some(GroupKindArg::Gamma0), None) => GroupDesc::gamma0(n)?,
        (Some(GroupKindArg::Gamma0), Some(_)) | (Some(GroupKindArg::Gamma1), Some(_)) => {
            return Err(anyhow!("--m applies to the mixed group only"))
        }
        (Some(GroupKindArg::Gamma1), None) => GroupDesc::gamma1(n)?,
        (Some(GroupKindArg::Mixed), m) => GroupDesc::mixed(n, m.unwrap_or(1))?,
        (None, Some(m)) => GroupDesc::mixed(n, m)?,
        (None, None) => GroupDesc::gamma1(n)?,
    };
    Ok(group)
}

/// Parse "a+bi" forms: "1.5", "i", "-i", "2i", "0.5+1.2i", "1-2e-1i".
fn parse_tau(text: &str, prec: u32) -> Result<BigComplex> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(anyhow!("empty tau"));
    }
    let make = |re: &str, im: &str| -> Result<BigComplex> {
        let re = if re.is_empty() { "0" } else { re };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        Ok(BigComplex::new(
            BigFloat::from_rational(&parse_decimal(re).map_err(|e| anyhow!("{e}"))?, prec),
            BigFloat::from_rational(&parse_decimal(im).map_err(|e| anyhow!("{e}"))?, prec),
        ))
    };
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // split at the last top-level +/- that is not an exponent sign
        let chars: Vec<char> = body.chars().collect();
        let mut split_at: Option<usize> = None;
        for idx in (1..chars.len()).rev() {
            let c = chars[idx];
            if (c == '+' || c == '-') && !matches!(chars[idx - 1], 'e' | 'E') {
                split_at = Some(idx);
                break;
            }
        }
        match split_at {
            Some(idx) => {
                let (re, im) = body.split_at(idx);
                make(re, im)
            }
            None => make("0", body),
        }
    } else {
        make(&s, "0")
    }
}

fn run_suite(order: i64) -> Result<bool> {
    let mut all = true;
    let mut print_line = |name: &str, pass: bool| {
        println!("{} {}", if pass { "PASS" } else { "FAIL" }, name);
        all &= pass;
    };

    for line in rrcf::identities::verification_suite(order) {
        print_line(&line.name, line.pass);
    }

    let l2 = modeq::derive_modeq(2)?;
    print_line(
        "level-2 modular equation matches the published one",
        l2 == modeq::expected_level2(),
    );
    for n in [2u32, 4, 5, 6] {
        let poly = modeq::derive_modeq(n)?;
        print_line(
            &format!("modular equation of level {n} vanishes through q^{order}"),
            modeq::verify_modeq(&poly, n, order.max(50)).ok,
        );
    }
    for p in [3u32, 7] {
        let poly = modeq::derive_modeq(p)?;
        print_line(
            &format!("level-{p} symmetry law"),
            modeq::check_symmetry(&poly, p),
        );
        print_line(
            &format!("level-{p} Kronecker congruence"),
            modeq::check_kronecker(&poly, p),
        );
        print_line(
            &format!("level-{p} corner pattern"),
            modeq::check_zero_pattern(&poly, p),
        );
    }

    // cusp counts against the closed form
    let mut cusp_ok = true;
    for n in 1..=10i64 {
        for m in 1..=6i64 {
            if n * m > 60 {
                continue;
            }
            let g = GroupDesc::mixed(n, m)?;
            cusp_ok &= enumerate_cusps(&g).len() as i64 == rrcf::cusps::cusp_count(&g);
        }
    }
    print_line("cusp enumeration matches the closed-form count", cusp_ok);

    for line in numeric::check_transformations(128)? {
        print_line(&line.name, line.pass);
    }

    Ok(all)
}
