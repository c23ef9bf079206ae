use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;
use twistl::character::{char_enumerate, dual, HeckeCharacter};
use twistl::cones::{count_progression, min_norm_coset, DomainReducer};
use twistl::experiment::{load_form, run_lav_experiment, table_length, ExperimentConfig};
use twistl::gauss::{average_char, gauss_sum, kloosterman_bound_report, root_number_w, HeckeFieldContext};
use twistl::lseries::{afe_lvalue, AFEConfig, LFunction, TwistData};
use twistl::nf::{builtin_field, nf_load, FieldElement, Ideal, NumberField};
use twistl::rayclass::{rcg_build, RayClassGroup};

#[derive(Parser)]
#[command(name = "twistl", version, about = "Twisted central L-values, Gauss sums and Galois averages")]
struct Cli {
    /// Builtin field name (Q, Q(sqrt2)) or path to a field document.
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    /// `delta` or path to a newform document.
    #[arg(long, global = true, default_value = "delta")]
    form: String,
    /// Working precision; only 53 (f64) is available.
    #[arg(long, global = true, default_value_t = 53)]
    precision_bits: u32,
    #[arg(long, global = true, default_value_t = 1e-11)]
    tol: f64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Modulus {
    #[arg(long, default_value_t = 5)]
    p: u64,
    /// Generator of the prime above p, comma-separated integral-basis coordinates (default: p).
    #[arg(long)]
    prime_gen: Option<String>,
    /// Exponent n of the modulus p^n.
    #[arg(long, default_value_t = 2)]
    n: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Central (or any real-axis) value of the twisted L-function.
    Lvalue {
        #[command(flatten)]
        modulus: Modulus,
        /// Character label such as `chi[2]`; omit for the untwisted value.
        #[arg(long = "char")]
        character: Option<String>,
        /// Default: k/2.
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        y: Option<f64>,
    },
    /// Galois-averaged central values for n in a range.
    LavScan {
        #[arg(long, default_value_t = 5)]
        p: u64,
        #[arg(long)]
        prime_gen: Option<String>,
        #[arg(long, default_value_t = 1)]
        nmin: u32,
        #[arg(long, default_value_t = 3)]
        nmax: u32,
        #[arg(long, default_value_t = 2.0)]
        a: f64,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
    },
    /// Gauss sums and root numbers for every character of the ray class group.
    GaussSum {
        #[command(flatten)]
        modulus: Modulus,
        #[arg(long, default_value_t = 1)]
        a: i64,
        /// Emit the character table as CSV instead.
        #[arg(long)]
        csv: bool,
    },
    /// Exact orbit means of chi^t(a).
    GaloisAverage {
        #[command(flatten)]
        modulus: Modulus,
        #[arg(long = "char")]
        character: Option<String>,
        #[arg(long, default_value_t = 0)]
        n0: u32,
        /// Single residue; default: all residues coprime to p.
        #[arg(long)]
        a: Option<i64>,
    },
    /// Sweep of the averaged root-number sums against N(p)^{-n/2}.
    KloostermanReport {
        #[command(flatten)]
        modulus: Modulus,
        #[arg(long = "char")]
        character: Option<String>,
        #[arg(long, default_value_t = 0)]
        n0: u32,
    },
    /// Elements of alpha (1 + p^n) in the fundamental domain with |N| <= x.
    ConeCount {
        #[command(flatten)]
        modulus: Modulus,
        #[arg(long)]
        x: f64,
        /// Comma-separated coordinates (default 1).
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 0)]
        witnesses: usize,
    },
    /// Run the acceptance suite.
    Verify {
        /// Experiment at AFE tolerance 1e-8 instead of 1e-11.
        #[arg(long)]
        fast: bool,
    },
}

/// Errors that mean the input was at fault.
fn is_input_error(e: &anyhow::Error) -> bool {
    use twistl::Error as E;
    match e.downcast_ref::<E>() {
        Some(E::Parse(_) | E::Precondition(_) | E::Unsupported(_) | E::NotCoprime | E::NotSplit { .. }) => true,
        Some(E::Json(_) | E::Io(_) | E::BoundViolation { .. } | E::MissingPrime(_)) => true,
        Some(_) => false,
        None => e.downcast_ref::<BadInput>().is_some(),
    }
}

#[derive(Debug)]
struct BadInput(String);

impl std::fmt::Display for BadInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadInput {}

fn bad(msg: impl Into<String>) -> anyhow::Error {
    BadInput(msg.into()).into()
}

fn load_field(name: &str) -> anyhow::Result<Arc<NumberField>> {
    let nf = match builtin_field(name) {
        Ok(f) => f,
        Err(_) => {
            let text = std::fs::read_to_string(name).map_err(|e| bad(format!("field {name}: {e}")))?;
            nf_load(&text)?
        }
    };
    Ok(Arc::new(nf))
}

fn parse_ints(s: &str) -> anyhow::Result<Vec<i64>> {
    s.split(',').map(|t| t.trim().parse::<i64>().map_err(|_| bad(format!("not an integer list: {s}")))).collect()
}

fn prime_gen(p: u64, gen: &Option<String>) -> anyhow::Result<Vec<i64>> {
    match gen {
        Some(g) => parse_ints(g),
        None => Ok(vec![p as i64]),
    }
}

fn build_rcg(nf: &Arc<NumberField>, m: &Modulus) -> anyhow::Result<RayClassGroup> {
    let gen = FieldElement::from_ints(&prime_gen(m.p, &m.prime_gen)?);
    let prime = Ideal::principal(nf, &gen)?;
    Ok(rcg_build(nf.clone(), m.p, &prime, m.n)?)
}

/// Parses `chi[e1,e2,...]` (or a bare list) into a character of `rcg`.
fn parse_character(rcg: &RayClassGroup, label: &str) -> anyhow::Result<HeckeCharacter> {
    let inner = label.trim().trim_start_matches("chi").trim_start_matches('[').trim_end_matches(']');
    let exps: Vec<u64> = if inner.is_empty() {
        vec![]
    } else {
        inner.split(',').map(|t| t.trim().parse::<u64>().map_err(|_| bad(format!("bad character label {label}")))).collect::<anyhow::Result<_>>()?
    };
    if exps.len() != rcg.group.invariants.len() {
        return Err(bad(format!("{label}: expected {} exponents for invariants {:?}", rcg.group.invariants.len(), rcg.group.invariants)));
    }
    Ok(HeckeCharacter::new(rcg, exps))
}

/// The given character, or the smallest-label primitive one of p-power order.
fn pick_character(rcg: &RayClassGroup, label: &Option<String>) -> anyhow::Result<HeckeCharacter> {
    match label {
        Some(l) => parse_character(rcg, l),
        None => Ok(twistl::experiment::pick_primitive(rcg)?),
    }
}

fn record(chi: &HeckeCharacter, v: Complex64, exact_phase: Option<String>) -> Value {
    let mut r = json!({
        "character_label": chi.label(),
        "conductor": chi.conductor,
        "value_re": v.re,
        "value_im": v.im,
    });
    if let Some(e) = exact_phase {
        r["exact_phase"] = json!(e);
    }
    r
}

fn character_csv(rcg: &RayClassGroup) -> String {
    let gens: Vec<String> = (0..rcg.group.invariants.len()).map(|i| format!("gen{i}")).collect();
    let mut out = format!("label,conductor_exponent,order,{}\n", gens.join(","));
    for chi in dual(rcg) {
        let imgs: Vec<String> = chi.exps.iter().zip(&chi.invariants).map(|(k, d)| format!("{k}/{d}")).collect();
        out += &format!("\"{}\",{},{},{}\n", chi.label(), chi.conductor, chi.order, imgs.join(","));
    }
    out
}

enum Output {
    Json(Value),
    Text(String),
}

fn run(cli: &Cli) -> anyhow::Result<(Output, bool)> {
    if cli.precision_bits > 53 {
        return Err(bad(format!("precision {} bits requested; only 53-bit floating point is available", cli.precision_bits)));
    }
    if !(cli.tol > 0.0) {
        return Err(bad("--tol must be positive"));
    }
    let neb = Complex64::new(1.0, 0.0);
    match &cli.cmd {
        Cmd::Lvalue { modulus, character, s, y } => {
            let nf = load_field(&cli.field)?;
            let (twist, q) = match character {
                None => (TwistData::trivial(), 1),
                Some(label) => {
                    let rcg = build_rcg(&nf, modulus)?;
                    let chi = parse_character(&rcg, label)?;
                    let t = TwistData::from_hecke(&rcg, &chi, neb)?;
                    let q = t.q;
                    (t, q)
                }
            };
            let cfg0 = ExperimentConfig { field: cli.field.clone(), form: cli.form.clone(), ..Default::default() };
            let probe = load_form(&cfg0, 64)?;
            let level = probe.level_norm as f64 * (q * q) as f64;
            let len = table_length(level.sqrt().max(y.unwrap_or(0.0)).max(level / y.unwrap_or(level)));
            let form = Arc::new(load_form(&cfg0, len)?);
            let lf = LFunction::new(form, &nf, 400)?;
            let s = Complex64::new(s.unwrap_or(lf.k() / 2.0), 0.0);
            let cfg = AFEConfig { y: *y, tol: cli.tol, max_terms: len, ..Default::default() };
            let r = afe_lvalue(&lf, &twist, s, &cfg)?;
            Ok((Output::Json(serde_json::to_value(&r)?), true))
        }
        Cmd::LavScan { p, prime_gen: g, nmin, nmax, a, eps } => {
            let cfg = ExperimentConfig {
                field: cli.field.clone(),
                form: cli.form.clone(),
                p: *p,
                prime_gen: prime_gen(*p, g)?,
                n_min: *nmin,
                n_max: *nmax,
                a: *a,
                eps: *eps,
                tol: cli.tol,
                ..Default::default()
            };
            if nmin > nmax || *nmin == 0 {
                return Err(bad("need 1 <= nmin <= nmax"));
            }
            let rep = run_lav_experiment(&cfg)?;
            Ok((Output::Json(serde_json::to_value(&rep)?), true))
        }
        Cmd::GaussSum { modulus, a, csv } => {
            let nf = load_field(&cli.field)?;
            let rcg = build_rcg(&nf, modulus)?;
            if *csv {
                return Ok((Output::Text(character_csv(&rcg)), true));
            }
            let mut rows = Vec::new();
            for chi in dual(&rcg).into_iter().filter(|c| !c.is_trivial()) {
                let g = gauss_sum(&rcg, &chi, *a)?;
                let w = root_number_w(&rcg, &chi, neb)?;
                let mut r = record(&chi, g.value, None);
                r["norm_sq"] = json!(g.value.norm_sqr());
                r["root_number_re"] = json!(w.re);
                r["root_number_im"] = json!(w.im);
                rows.push(r);
            }
            Ok((Output::Json(Value::Array(rows)), true))
        }
        Cmd::GaloisAverage { modulus, character, n0, a } => {
            let nf = load_field(&cli.field)?;
            let rcg = build_rcg(&nf, modulus)?;
            let chi = pick_character(&rcg, character)?;
            let ctx = HeckeFieldContext { p: modulus.p, n0: *n0 };
            let residues: Vec<i64> = match a {
                Some(a) => vec![*a],
                None => rcg.residue_classes().into_iter().map(|(r, _)| r as i64).collect(),
            };
            let mut rows = Vec::new();
            for r in residues {
                let av = average_char(&rcg, &chi, &ctx, r)?;
                let exact = av.rational.map(|(n, d)| if d == 1 { n.to_string() } else { format!("{n}/{d}") });
                let mut rec = record(&chi, av.value, exact);
                rec["a"] = json!(r);
                rec["orbit_size"] = json!(av.orbit_size);
                rec["zero"] = json!(av.is_zero_exact());
                rows.push(rec);
            }
            Ok((Output::Json(Value::Array(rows)), true))
        }
        Cmd::KloostermanReport { modulus, character, n0 } => {
            let nf = load_field(&cli.field)?;
            let rcg = build_rcg(&nf, modulus)?;
            let chis = match character {
                Some(l) => vec![parse_character(&rcg, l)?],
                None => char_enumerate(&rcg, modulus.n, true).into_iter().filter(|c| c.conductor == modulus.n).collect(),
            };
            let ctx = HeckeFieldContext { p: modulus.p, n0: *n0 };
            let n = modulus.n.saturating_sub(1 + n0).max(1);
            let rows: Vec<Value> = chis
                .iter()
                .map(|c| kloosterman_bound_report(&rcg, c, &ctx, n, neb).map_err(anyhow::Error::from).and_then(|r| Ok(serde_json::to_value(r)?)))
                .collect::<anyhow::Result<_>>()?;
            Ok((Output::Json(Value::Array(rows)), true))
        }
        Cmd::ConeCount { modulus, x, alpha, witnesses } => {
            let nf = load_field(&cli.field)?;
            let r = DomainReducer::new(nf.clone())?;
            let pi = FieldElement::from_ints(&prime_gen(modulus.p, &modulus.prime_gen)?);
            let alpha = match alpha {
                Some(a) => FieldElement::from_ints(&parse_ints(a)?),
                None => nf.one(),
            };
            let c = count_progression(&r, &alpha, &pi, modulus.n, *x, *witnesses)?;
            let m = min_norm_coset(&r, &pi, modulus.n)?;
            let mut v = serde_json::to_value(&c)?;
            v["min_norm"] = json!(m.min_norm);
            v["min_norm_witness"] = json!(m.witness);
            Ok((Output::Json(v), true))
        }
        Cmd::Verify { fast } => {
            let reports = twistl::verify::verify_all(*fast);
            let mut text = String::new();
            for r in &reports {
                text += &r.line();
                text.push('\n');
            }
            let ok = reports.iter().all(|r| r.passed);
            text += &format!("{} of {} criteria passed\n", reports.iter().filter(|r| r.passed).count(), reports.len());
            Ok((Output::Text(text), ok))
        }
    }
}

fn emit(out: &Option<String>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {path}")),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&cli).and_then(|(out, ok)| {
        let body = match out {
            Output::Json(v) => serde_json::to_string_pretty(&v)? + "\n",
            Output::Text(t) => t,
        };
        emit(&cli.out, &body)?;
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_input_error(&e) { 2 } else { 1 })
        }
    }
}
