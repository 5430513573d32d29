//! Command-line interface: parses DSL expressions, dispatches to the
//! library, and renders results as tables or JSON.
//!
//! Exit codes: 0 success, 1 domain error (with a JSON error object on
//! stderr under --json), 2 usage error.

use betaz::decomp;
use betaz_cli::{lower, parse};
use betaz::filters::{self, UltrafilterSpec};
use betaz::num::{parse_rational, GaussianRepr, RatRepr};
use betaz::seqalg::{SeminormRepr, SequenceRepr};
use betaz::setalg::{DefinableSetRepr, Sign};
use betaz::smooth;
use betaz::windows;
use betaz::SymbolicSequence;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "betaz",
    version,
    about = "Exact algebra of eventually-periodic sets, bounded symbolic sequences on Z, and limits along boundary directions"
)]
struct Cli {
    /// Emit machine-readable JSON (results on stdout, errors on stderr).
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ExprInput {
    /// Inline expression text.
    #[arg(long, conflicts_with = "file", allow_hyphen_values = true)]
    expr: Option<String>,
    /// Read the expression from a file.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl ExprInput {
    fn text(&self) -> Result<String, CliError> {
        match (&self.expr, &self.file) {
            (Some(e), _) => Ok(e.clone()),
            (None, Some(p)) => {
                std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {}", p.display(), e)))
            }
            (None, None) => Err(CliError::Usage("provide --expr or --file".into())),
        }
    }

    fn sequence(&self) -> Result<SymbolicSequence, CliError> {
        let text = self.text()?;
        let ast = parse::parse_seq(text.trim())?;
        Ok(lower::lower_seq(&ast)?)
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum ExprKind {
    Set,
    Seq,
    Point,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression; print its canonical form and lowered value.
    Parse {
        #[arg(long, value_enum)]
        kind: ExprKind,
        #[command(flatten)]
        input: ExprInput,
    },
    /// Classify a sequence across the function-space hierarchy.
    Classify {
        #[command(flatten)]
        input: ExprInput,
    },
    /// Expand a sequence into a projection series.
    Decompose {
        /// Greedy dyadic expansion to this depth.
        #[arg(long, conflicts_with = "levels")]
        dyadic: Option<u32>,
        /// Unique disjoint level-set form (step functions only).
        #[arg(long)]
        levels: bool,
        #[command(flatten)]
        input: ExprInput,
    },
    /// Exact limit of a sequence at a point ("n=5", "+inf mod 6 == 5").
    Limit {
        #[command(flatten)]
        input: ExprInput,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Smoothness verdict at one point, or over all points without --at.
    Smoothcheck {
        #[command(flatten)]
        input: ExprInput,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Certified seminorm sup |n^d phi(n)| (d = 0 is the sup norm).
    Seminorm {
        #[command(flatten)]
        input: ExprInput,
        #[arg(long, default_value_t = 0)]
        d: u32,
        /// Bracket tolerance as a rational, default 1/1000000000.
        #[arg(long)]
        tol: Option<String>,
    },
    /// Proof-mechanism certificates.
    Cert {
        #[command(subcommand)]
        which: CertCmd,
    },
    /// Property harnesses.
    Check {
        #[command(subcommand)]
        which: CheckCmd,
    },
    /// Numeric windowed evaluation and profiles.
    Window {
        #[command(subcommand)]
        which: WindowCmd,
    },
}

#[derive(Subcommand)]
enum CertCmd {
    /// Chain certificate from a projection spec file: a JSON array of
    /// {"c": "<rational>", "set": "<set expression>"} entries.
    Prop26 {
        #[arg(long)]
        spec: PathBuf,
        /// Accumulation value of the constants.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        c0: String,
        #[arg(long, default_value_t = 5)]
        dmax: u32,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Schwartz-ideal closure harness plus the unital non-ideal witness.
    Ideals {
        #[arg(long, default_value_t = 1000)]
        samples: u32,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Filter/ultrafilter axioms for a point (--at) or a filter base
    /// (--base "set ; set ; ...").
    Axioms {
        #[arg(long, conflicts_with = "base", allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 1000)]
        samples: u32,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum WindowCmd {
    /// Evaluate a sequence on [-N, N]; CSV rows n,value_re,value_im.
    Eval {
        #[command(flatten)]
        input: ExprInput,
        #[arg(long = "N")]
        n: i64,
        /// Evaluate e^{i phi(n)} instead (phi must be real Schwartz).
        #[arg(long)]
        exp_i: bool,
        /// Write CSV to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Directional profile |n^d (w(n) - limit)| with trend summary.
    Profile {
        #[command(flatten)]
        input: ExprInput,
        #[arg(long = "N")]
        n: i64,
        #[arg(long, default_value_t = 0)]
        d: u32,
        /// Candidate limit, e.g. "1", "1/2", "1/2 + 1/3 i".
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        limit: String,
        /// Direction: "+inf" or "-inf".
        #[arg(long, default_value = "+inf")]
        dir: String,
        /// Residue filter modulus.
        #[arg(long = "mod")]
        modulus: Option<i64>,
        /// Residue filter value.
        #[arg(long = "res")]
        residue: Option<i64>,
        #[arg(long)]
        exp_i: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Parse(parse::ParseError),
    Lower(lower::LowerError),
    Core(betaz::Error),
    Io(String),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "{}", e),
            CliError::Lower(e) => write!(f, "{}", e),
            CliError::Core(e) => write!(f, "{}", e),
            CliError::Io(e) => write!(f, "{}", e),
            CliError::Usage(e) => write!(f, "{}", e),
        }
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Lower(_) => "lower",
            CliError::Core(_) => "domain",
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
        }
    }
}

impl From<parse::ParseError> for CliError {
    fn from(e: parse::ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<lower::LowerError> for CliError {
    fn from(e: lower::LowerError) -> Self {
        CliError::Lower(e)
    }
}

impl From<betaz::Error> for CliError {
    fn from(e: betaz::Error) -> Self {
        CliError::Core(e)
    }
}

/// A command's result: structured for --json, lines for humans.
struct Output {
    json: Value,
    human: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_mode = cli.json;
    match run(cli.command) {
        Ok(out) => {
            if json_mode {
                println!("{}", serde_json::to_string_pretty(&out.json).unwrap());
            } else {
                println!("{}", out.human);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if json_mode {
                let obj = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
                eprintln!("{}", serde_json::to_string(&obj).unwrap());
            } else {
                eprintln!("error: {}", e);
            }
            ExitCode::from(1)
        }
    }
}

fn parse_point_arg(text: &str) -> Result<UltrafilterSpec, CliError> {
    let ast = parse::parse_point(text.trim())?;
    Ok(lower::lower_point(&ast)?)
}

fn gaussian_to_json(z: &betaz::GaussianRational) -> Value {
    serde_json::to_value(GaussianRepr::of(z)).unwrap()
}

fn run(cmd: Command) -> Result<Output, CliError> {
    match cmd {
        Command::Parse { kind, input } => run_parse(kind, &input),
        Command::Classify { input } => {
            let seq = input.sequence()?;
            let report = smooth::classify(&seq);
            let human = render_classify(&report);
            Ok(Output {
                json: serde_json::to_value(&report).unwrap(),
                human,
            })
        }
        Command::Decompose {
            dyadic,
            levels,
            input,
        } => {
            let seq = input.sequence()?;
            match (dyadic, levels) {
                (Some(depth), false) => {
                    let e = decomp::dyadic_decompose(&seq, depth)?;
                    let mut human = format!(
                        "dyadic expansion, depth {} (remainder bound {})\n",
                        e.depth, e.remainder_bound
                    );
                    if let Some(sup) = &e.remainder_sup {
                        human.push_str(&format!("exact remainder sup: {}\n", sup));
                    }
                    for l in &e.levels {
                        human.push_str(&format!("  {}  on  {}\n", l.weight, l.support));
                    }
                    Ok(Output {
                        json: serde_json::to_value(decomp::DyadicExpansionRepr::of(&e)).unwrap(),
                        human,
                    })
                }
                (None, true) => {
                    let e = decomp::level_decompose(&seq)?;
                    let mut human = String::from("level form (constant, projection):\n");
                    for (c, s) in &e.terms {
                        human.push_str(&format!("  {}  on  {}\n", c, s));
                    }
                    if e.terms.is_empty() {
                        human.push_str("  (zero sequence: empty expansion)\n");
                    }
                    Ok(Output {
                        json: serde_json::to_value(decomp::LevelExpansionRepr::of(&e)).unwrap(),
                        human,
                    })
                }
                _ => Err(CliError::Usage(
                    "choose exactly one of --dyadic N or --levels".into(),
                )),
            }
        }
        Command::Limit { input, at } => {
            let seq = input.sequence()?;
            let pt = parse_point_arg(&at)?;
            let (value, used, note) = match filters::limit_at(&seq, &pt) {
                Ok(v) => (v, pt, None),
                Err(betaz::Error::RefinePoint { required, .. }) => {
                    let finer = pt.extend_canonical(required)?;
                    let v = filters::limit_at(&seq, &finer)?;
                    let note = format!(
                        "point refined to '{}' (canonical lift; other residues mod {} are distinct points)",
                        finer, required
                    );
                    (v, finer, Some(note))
                }
                Err(e) => return Err(e.into()),
            };
            let mut human = format!("limit at {}: {}", used, value);
            if let Some(n) = &note {
                human.push_str(&format!("\nnote: {}", n));
            }
            Ok(Output {
                json: json!({
                    "point": serde_json::to_value(&used).unwrap(),
                    "value": gaussian_to_json(&value),
                    "note": note,
                }),
                human,
            })
        }
        Command::Smoothcheck { input, at } => {
            let seq = input.sequence()?;
            let verdict = match at {
                Some(text) => {
                    let pt = parse_point_arg(&text)?;
                    match smooth::smooth_at(&seq, &pt) {
                        Ok(v) => v,
                        Err(betaz::Error::RefinePoint { required, .. }) => {
                            let finer = pt.extend_canonical(required)?;
                            smooth::smooth_at(&seq, &finer)?
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                None => smooth::is_smooth(&seq),
            };
            Ok(Output {
                human: render_verdict(&verdict),
                json: serde_json::to_value(&verdict).unwrap(),
            })
        }
        Command::Seminorm { input, d, tol } => {
            let seq = input.sequence()?;
            let value = match tol {
                Some(t) => {
                    let tol = parse_rational(&t)
                        .filter(|t| t > &num_rational::BigRational::from_integer(0.into()))
                        .ok_or_else(|| {
                            CliError::Usage(format!("--tol wants a positive rational, got '{}'", t))
                        })?;
                    seq.schwartz_seminorm_with_tol(d, &tol)
                }
                None => seq.schwartz_seminorm(d),
            };
            Ok(Output {
                human: format!("seminorm d={}: {}", d, value),
                json: json!({
                    "d": d,
                    "value": serde_json::to_value(SeminormRepr::of(&value)).unwrap(),
                }),
            })
        }
        Command::Cert { which } => run_cert(which),
        Command::Check { which } => run_check(which),
        Command::Window { which } => run_window(which),
    }
}

fn run_parse(kind: ExprKind, input: &ExprInput) -> Result<Output, CliError> {
    let text = input.text()?;
    let text = text.trim();
    match kind {
        ExprKind::Set => {
            let ast = parse::parse_set(text)?;
            let set = lower::lower_set(&ast)?;
            Ok(Output {
                human: format!("canonical: {}\nvalue: {}", ast.node, set),
                json: json!({
                    "kind": "set",
                    "pretty": ast.node.to_string(),
                    "value": serde_json::to_value(DefinableSetRepr::of(&set)).unwrap(),
                }),
            })
        }
        ExprKind::Seq => {
            let ast = parse::parse_seq(text)?;
            let seq = lower::lower_seq(&ast)?;
            Ok(Output {
                human: format!("canonical: {}\nvalue: {}", ast.node, seq),
                json: json!({
                    "kind": "seq",
                    "pretty": ast.node.to_string(),
                    "value": serde_json::to_value(SequenceRepr::of(&seq)).unwrap(),
                }),
            })
        }
        ExprKind::Point => {
            let ast = parse::parse_point(text)?;
            let pt = lower::lower_point(&ast)?;
            Ok(Output {
                human: format!("canonical: {}\nvalue: {}", ast.node, pt),
                json: json!({
                    "kind": "point",
                    "pretty": ast.node.to_string(),
                    "value": serde_json::to_value(&pt).unwrap(),
                }),
            })
        }
    }
}

fn run_cert(cmd: CertCmd) -> Result<Output, CliError> {
    match cmd {
        CertCmd::Prop26 { spec, c0, dmax } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| CliError::Io(format!("{}: {}", spec.display(), e)))?;
            #[derive(serde::Deserialize)]
            struct Entry {
                c: String,
                set: String,
            }
            let entries: Vec<Entry> = serde_json::from_str(&text)
                .map_err(|e| CliError::Io(format!("spec file: {}", e)))?;
            let mut pairs = vec![];
            for e in &entries {
                let c = parse_rational(&e.c)
                    .ok_or_else(|| CliError::Usage(format!("bad rational '{}'", e.c)))?;
                let ast = parse::parse_set(&e.set)?;
                pairs.push((c, lower::lower_set(&ast)?));
            }
            let c0 = parse_rational(&c0)
                .ok_or_else(|| CliError::Usage(format!("bad rational '{}'", c0)))?;
            let cert = smooth::chain_certificate(&pairs, &c0, dmax)?;
            let divergences: Vec<smooth::ChainDivergence> =
                (2..=dmax).map(|d| smooth::chain_divergence(&cert, d)).collect();
            let mut human = format!(
                "chain of {} sets: nonempty = {}, strictly decreasing = {}\n",
                cert.chain.len(),
                cert.chain_nonempty,
                cert.chain_strictly_decreasing
            );
            for w in &cert.degree_witnesses {
                human.push_str(&format!(
                    "  d = {}: witness n = {} with |n^d (c_q - c0)| = {} >= {} >= 1\n",
                    w.degree,
                    w.n,
                    w.lhs.num.clone() + "/" + &w.lhs.den,
                    w.lower_bound.num.clone() + "/" + &w.lower_bound.den,
                ));
            }
            for div in &divergences {
                human.push_str(&format!(
                    "  along the chain at d = {}: non-vanishing = {}\n",
                    div.degree, div.non_vanishing
                ));
            }
            Ok(Output {
                json: json!({
                    "certificate": serde_json::to_value(&cert).unwrap(),
                    "chain_divergence": serde_json::to_value(&divergences).unwrap(),
                }),
                human,
            })
        }
    }
}

fn run_check(cmd: CheckCmd) -> Result<Output, CliError> {
    match cmd {
        CheckCmd::Ideals { samples, seed } => {
            let mut rng = StdRng::seed_from_u64(seed.unwrap_or(0xBE7A2));
            let ideal = smooth::check_schwartz_ideal(samples, &mut rng)?;
            let witness = smooth::unital_non_ideal_witness();
            let human = format!(
                "schwartz ideal: {}/{} samples passed\nunital non-ideal witness: steps_not_ideal = {}, smooth_not_ideal = {}",
                ideal.samples - ideal.failures,
                ideal.samples,
                witness.steps_not_ideal,
                witness.smooth_not_ideal
            );
            Ok(Output {
                json: json!({
                    "schwartz_ideal": serde_json::to_value(&ideal).unwrap(),
                    "unital_witness": serde_json::to_value(&witness).unwrap(),
                }),
                human,
            })
        }
        CheckCmd::Axioms {
            at,
            base,
            samples,
            seed,
        } => {
            let mut rng = StdRng::seed_from_u64(seed.unwrap_or(0xF117E2));
            let reports = match (at, base) {
                (Some(point), None) => {
                    let pt = parse_point_arg(&point)?;
                    filters::check_point_axioms(&pt, samples, &mut rng)?
                }
                (None, Some(sets_text)) => {
                    let mut sets = vec![];
                    for part in sets_text.split(';') {
                        let ast = parse::parse_set(part.trim())?;
                        sets.push(lower::lower_set(&ast)?);
                    }
                    let f = filters::FilterBase::from_sets(sets)?;
                    filters::check_filter_axioms(&f, samples, &mut rng)?
                }
                _ => {
                    return Err(CliError::Usage(
                        "provide exactly one of --at POINT or --base \"set ; set\"".into(),
                    ))
                }
            };
            let mut human = String::new();
            for r in &reports {
                human.push_str(&format!(
                    "{}: {}/{} passed{}\n",
                    r.axiom,
                    r.samples - r.failures,
                    r.samples,
                    r.counterexample
                        .as_ref()
                        .map(|c| format!(" (counterexample: {})", c))
                        .unwrap_or_default()
                ));
            }
            Ok(Output {
                json: serde_json::to_value(&reports).unwrap(),
                human,
            })
        }
    }
}

fn run_window(cmd: WindowCmd) -> Result<Output, CliError> {
    match cmd {
        WindowCmd::Eval {
            input,
            n,
            exp_i,
            out,
        } => {
            let seq = input.sequence()?;
            let w = if exp_i {
                windows::exp_i_schwartz(&seq, n)?
            } else {
                windows::window_eval(&seq, n)?
            };
            let csv = w.to_csv();
            if let Some(path) = out {
                std::fs::write(&path, &csv)
                    .map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))?;
                return Ok(Output {
                    json: json!({"written": path.display().to_string(), "rows": 2 * n + 1}),
                    human: format!("wrote {} rows to {}", 2 * n + 1, path.display()),
                });
            }
            let rows: Vec<Value> = w
                .indices()
                .map(|k| {
                    let v = w.value(k);
                    json!({"n": k, "re": v.re, "im": v.im})
                })
                .collect();
            Ok(Output {
                json: json!({"provenance": serde_json::to_value(&w.provenance).unwrap(), "rows": rows}),
                human: csv,
            })
        }
        WindowCmd::Profile {
            input,
            n,
            d,
            limit,
            dir,
            modulus,
            residue,
            exp_i,
        } => {
            let seq = input.sequence()?;
            let w = if exp_i {
                windows::exp_i_schwartz(&seq, n)?
            } else {
                windows::window_eval(&seq, n)?
            };
            let limit_val = parse_limit(&limit)?;
            let sign = match dir.trim() {
                "+inf" => Sign::Pos,
                "-inf" => Sign::Neg,
                other => {
                    return Err(CliError::Usage(format!(
                        "--dir wants '+inf' or '-inf', got '{}'",
                        other
                    )))
                }
            };
            let filter = match (modulus, residue) {
                (Some(m), Some(r)) => Some((m, r)),
                (None, None) => None,
                _ => {
                    return Err(CliError::Usage(
                        "--mod and --res go together".into(),
                    ))
                }
            };
            let p = windows::empirical_profile(&w, sign, filter, d, limit_val)?;
            let tail: Vec<String> = p
                .points
                .iter()
                .rev()
                .take(5)
                .rev()
                .map(|(n, v)| format!("  n = {}: {:.3e}", n, v))
                .collect();
            let human = format!(
                "profile d = {} toward {}: trend {:?}\nlast points:\n{}",
                d,
                dir.trim(),
                p.trend,
                tail.join("\n")
            );
            Ok(Output {
                json: serde_json::to_value(&p).unwrap(),
                human,
            })
        }
    }
}

/// Candidate limits are constant sequence expressions, e.g. "1/2 + 1/3 i".
fn parse_limit(text: &str) -> Result<Complex64, CliError> {
    let ast = parse::parse_seq(text.trim())?;
    let seq = lower::lower_seq(&ast)?;
    let v = seq.eval(0);
    let check = seq.eval(17);
    if v != check {
        return Err(CliError::Usage(format!(
            "--limit wants a constant, got '{}'",
            text
        )));
    }
    let (re, im) = v.to_f64_pair();
    Ok(Complex64::new(re, im))
}

fn render_classify(r: &smooth::HierarchyReport) -> String {
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mut s = format!(
        "c_c (finite support):        {}\n\
         S (schwartz):                {}\n\
         c0 (vanishes at infinity):   {}\n\
         linf_c (step function):      {}\n\
         linf_c + S:                  {}\n\
         smooth:                      {}\n\
         linf (bounded):              {}\n\
         lattice consistent:          {}",
        yn(r.finite_support),
        yn(r.schwartz),
        yn(r.vanishes_at_infinity),
        yn(r.step_function),
        yn(r.step_plus_schwartz),
        yn(r.smooth),
        yn(r.bounded),
        yn(r.lattice_consistent),
    );
    if let Some(w) = &r.smooth_witness {
        s.push_str(&format!("\n{}", render_witness(w)));
    }
    s
}

fn render_witness(w: &smooth::NonSmoothWitness) -> String {
    let mut s = format!(
        "non-smooth at {}: failing degree {}",
        w.point, w.failing_degree
    );
    if let smooth::DivergenceKind::NonzeroLimit { value } = &w.kind {
        s.push_str(&format!(", limit {}", value));
    }
    for (n, v) in &w.limit_samples {
        s.push_str(&format!("\n  n^{} delta at n = {}: {}", w.failing_degree, n, v));
    }
    for samp in &w.inequality_samples {
        s.push_str(&format!(
            "\n  |n^{} delta|^2 at n = {}: {} >= 1",
            samp.degree,
            samp.n,
            rat_str(&samp.abs_sq)
        ));
    }
    s
}

fn rat_str(r: &RatRepr) -> String {
    if r.den == "1" {
        r.num.clone()
    } else {
        format!("{}/{}", r.num, r.den)
    }
}

fn render_verdict(v: &smooth::SmoothnessVerdict) -> String {
    if v.smooth {
        "smooth: yes".into()
    } else {
        format!("smooth: no\n{}", render_witness(v.witness.as_ref().unwrap()))
    }
}
