//! `mtv`: evaluate multiple zeta and t-values, print regularizations, emit
//! generating-series tables and run the identity checks.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use mtv_core::genseries::{
    closed_form, direct_coefficient, entry, t3223_explicit, verify_series, SeriesError, CATALOG,
    DEFAULT_ORDERS_2D,
};
use mtv_core::numerics::{
    eval, eval_reg, eval_sum, log2, BigComplex, Evaluated, NumericError, PrecisionContext,
};
use mtv_core::regularization::stuffle_reg_sum;
use mtv_core::symmetry::{
    antipode_relation, extract_relation, full_symmetry_residual, half_parity_relation,
    limit_identity_residual, relation_residual, truncated_identity_residual, EvalPoint,
    PhaseVector, SymmetryError,
};
use mtv_core::words::{frac, parse_word, pow, sigma, Kind, Word, WordError, WordSum};

#[derive(Parser, Debug)]
#[command(
    name = "mtv",
    version,
    about = "Multiple zeta and multiple t-value workbench"
)]
struct Cli {
    #[command(flatten)]
    opts: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = 30)]
    digits: u32,
    /// Cap on the number of series terms.
    #[arg(long, global = true)]
    mmax: Option<u64>,
    /// Emit JSON lines instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Residual tolerance; defaults to 10^-(digits - 5).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Read word arguments outermost index first.
    #[arg(long, global = true)]
    reversed: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Value of an admissible word, e.g. `t[3,2,2,3]`, `z[2,-3]`, `z[1@1/3,2]`.
    Eval {
        word: String,
        /// Interpolation parameter r of t^r (0 plain, 1 star).
        #[arg(long, default_value = "0")]
        r: String,
    },
    /// Stuffle regularization as a polynomial in T, and its value at the
    /// family's default T (log 2 for t, 0 for zeta).
    Reg {
        word: String,
        #[arg(long, default_value = "0")]
        r: String,
    },
    /// Coefficients of a catalogued generating series.
    Series {
        /// Series name; `list` prints the catalogue.
        name: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Explicit values of a closed-form family.
    Table {
        #[arg(value_enum)]
        family: TableFamily,
        /// Range `a..b` (inclusive) or a single index.
        #[arg(long, default_value = "0..4")]
        n: String,
        /// Star values instead of plain ones.
        #[arg(long)]
        star: bool,
    },
    /// Symbolic relation for a word, with its numeric residual.
    Relation {
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = Via::Symmetry)]
        via: Via,
        /// Parameter of the antipode relation.
        #[arg(long, default_value = "1")]
        r: String,
    },
    /// Numeric checks of the symmetry identities and series closed forms.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Numeric check of an open statement.
    Check {
        #[arg(value_enum)]
        what: CheckWhat,
        #[arg(long, default_value_t = 0)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Exact identity between truncated series at random points.
    Truncated {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        phases: String,
        #[arg(long = "M", default_value_t = 40)]
        big_m: u64,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Limit form of the identity, by extrapolation in the truncation.
    Limit {
        #[arg(long)]
        phases: String,
        /// Comma-separated real points; defaults to 0.1, 0.15, 0.2, ...
        #[arg(long)]
        y: Option<String>,
    },
    /// Regularized symmetry theorem, expanded in the points up to a total
    /// degree.
    Symmetry {
        #[arg(long)]
        phases: String,
        #[arg(long)]
        y: Option<String>,
        /// Total-degree cutoff; defaults to 30 for up to two phases, 16 beyond.
        #[arg(long)]
        cutoff: Option<u32>,
    },
    /// Coefficients of a catalogued series against direct evaluation.
    Series {
        name: String,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TableFamily {
    T3223,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Via {
    Symmetry,
    Antipode,
    HalfParity,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CheckWhat {
    /// t^(1/2)(2,{1}^(2n+1),2) = (4+2n)/2^(3+2n) t(5+2n).
    ConjectureThalf,
}

#[derive(Debug)]
enum Failure {
    Parse(String),
    Numeric(String),
}

impl From<WordError> for Failure {
    fn from(e: WordError) -> Self {
        Failure::Parse(e.to_string())
    }
}

impl From<NumericError> for Failure {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::Word(w) => w.into(),
            e => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<SymmetryError> for Failure {
    fn from(e: SymmetryError) -> Self {
        match e {
            SymmetryError::Word(w) => w.into(),
            SymmetryError::Numeric(n) => n.into(),
            SymmetryError::Precondition(_) | SymmetryError::Unsupported(_) => {
                Failure::Parse(e.to_string())
            }
            SymmetryError::Pole(_) => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<SeriesError> for Failure {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::UnknownName(_) | SeriesError::Order(_) => Failure::Parse(e.to_string()),
            SeriesError::Numeric(n) => n.into(),
            e => Failure::Numeric(e.to_string()),
        }
    }
}

struct Out {
    json: bool,
    digits: usize,
}

impl Out {
    fn emit(&self, text: String, record: Value) {
        let line = if self.json { record.to_string() } else { text };
        if writeln!(io::stdout(), "{}", line).is_err() {
            // reader went away, e.g. `| head`
            std::process::exit(0);
        }
    }

    fn num(&self, z: &BigComplex) -> String {
        z.render(self.digits)
    }

    fn record(&self, word: &str, kind: &str, v: &Evaluated) -> Value {
        json!({
            "word": word,
            "kind": kind,
            "value_re": mtv_core::numerics::render_float(&v.value.re, self.digits),
            "value_im": mtv_core::numerics::render_float(&v.value.im, self.digits),
            "error_bound": v.error,
            "M_used": v.terms,
        })
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Zeta => "zeta",
        Kind::T => "t",
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| Failure::Parse(format!("cannot parse rational `{}`", s)))
}

fn read_word(s: &str, reversed: bool) -> Result<(Kind, Word), Failure> {
    let (k, w) = parse_word(s)?;
    Ok((k, if reversed { w.reverse() } else { w }))
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Parse(format!("cannot parse range `{}`", s));
    match s.split_once("..") {
        Some((a, b)) => {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        }
        None => {
            let a = s.trim().parse().map_err(|_| bad())?;
            Ok((a, a))
        }
    }
}

fn parse_points(s: Option<&str>, m: usize, prec: u32) -> Result<EvalPoint, Failure> {
    let ys: Vec<f64> = match s {
        Some(s) => s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Failure::Parse(format!("cannot parse point `{}`", t)))
            })
            .collect::<Result<_, _>>()?,
        None => (0..m).map(|i| 0.1 + 0.05 * i as f64).collect(),
    };
    if ys.len() != m {
        return Err(Failure::Parse(format!(
            "expected {} points, got {}",
            m,
            ys.len()
        )));
    }
    let pairs: Vec<(f64, f64)> = ys.into_iter().map(|y| (y, 0.0)).collect();
    Ok(EvalPoint::from_f64(prec, &pairs))
}

/// Value of `t^r(w)` (or its zeta analogue) for an admissible expansion.
fn value_of(
    kind: Kind,
    w: &Word,
    r: &BigRational,
    ctx: &PrecisionContext,
) -> Result<Evaluated, Failure> {
    if r == &BigRational::from_integer(0.into()) {
        return Ok(eval(w, kind, ctx)?);
    }
    Ok(eval_sum(&sigma(w, r), kind, ctx)?)
}

fn default_t(kind: Kind, ctx: &PrecisionContext) -> BigComplex {
    match kind {
        Kind::T => BigComplex::from_real(log2(ctx)),
        Kind::Zeta => BigComplex::zero(ctx.prec()),
    }
}

fn label(kind: Kind, w: &Word, r: &str) -> String {
    let base = w.display_with(kind);
    if r.trim() == "0" {
        base
    } else {
        format!("{}^({}){}", kind.prefix(), r.trim(), &base[1..])
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let o = &cli.opts;
    if o.digits == 0 || o.digits > mtv_core::numerics::MAX_DIGITS {
        return Err(Failure::Parse(format!(
            "--digits must lie in 1..={}",
            mtv_core::numerics::MAX_DIGITS
        )));
    }
    let mut ctx = PrecisionContext::new(o.digits);
    if let Some(m) = o.mmax {
        ctx = ctx.with_mmax(m);
    }
    let tol = o.tol.unwrap_or_else(|| 10f64.powi(-(o.digits as i32 - 5)));
    let out = Out {
        json: o.json,
        digits: o.digits as usize,
    };
    match cli.cmd {
        Cmd::Eval { word, r } => {
            let (kind, w) = read_word(&word, o.reversed)?;
            let rr = parse_rational(&r)?;
            let v = value_of(kind, &w, &rr, &ctx)?;
            let name = label(kind, &w, &r);
            let mut rec = out.record(&w.display_with(kind), kind_name(kind), &v);
            rec["r"] = json!(rr.to_string());
            out.emit(
                format!(
                    "{} = {}  (error <= {:.1e}, {} terms)",
                    name,
                    out.num(&v.value),
                    v.error,
                    v.terms
                ),
                rec,
            );
            Ok(true)
        }
        Cmd::Reg { word, r } => {
            let (kind, w) = read_word(&word, o.reversed)?;
            let rr = parse_rational(&r)?;
            let sum = if rr == BigRational::from_integer(0.into()) {
                WordSum::monomial(w.clone())
            } else {
                sigma(&w, &rr)
            };
            let p = stuffle_reg_sum(&sum);
            let t0 = default_t(kind, &ctx);
            let v = eval_reg(&p, kind, &t0, &ctx)?;
            let name = label(kind, &w, &r);
            let t_name = if kind == Kind::T { "log 2" } else { "0" };
            let mut rec = out.record(&w.display_with(kind), kind_name(kind), &v);
            rec["r"] = json!(rr.to_string());
            rec["reg"] = p.to_json(kind);
            rec["T"] = json!(t_name);
            out.emit(
                format!(
                    "reg {} = {}\n  at T = {}: {}  (error <= {:.1e}, {} terms)",
                    name,
                    p.render(kind),
                    t_name,
                    out.num(&v.value),
                    v.error,
                    v.terms
                ),
                rec,
            );
            Ok(true)
        }
        Cmd::Series { name, order } => {
            if name == "list" {
                for e in CATALOG {
                    out.emit(
                        format!("{:<10} {} var  {}", e.name, e.vars, e.about),
                        json!({"name": e.name, "vars": e.vars, "about": e.about}),
                    );
                }
                return Ok(true);
            }
            let e =
                entry(&name).ok_or_else(|| Failure::Parse(format!("unknown series `{}`", name)))?;
            let orders = match (e.vars, order) {
                (1, k) => (k.unwrap_or(mtv_core::genseries::DEFAULT_ORDER), 0),
                (_, Some(k)) => (k, k),
                (_, None) => DEFAULT_ORDERS_2D,
            };
            let s = closed_form(&name, orders, &ctx)?;
            for i in 0..=orders.0 {
                for j in 0..=orders.1 {
                    let c = s.coeff(i, j);
                    // rounding noise on coefficients that vanish by parity
                    if c.abs_f64() <= 1e3 * ctx.ulp() {
                        continue;
                    }
                    let idx = if e.vars == 1 {
                        format!("[{}]", i)
                    } else {
                        format!("[{},{}]", i, j)
                    };
                    out.emit(
                        format!("{}{} = {}", name, idx, out.num(&c)),
                        json!({
                            "series": name,
                            "index": [i, j],
                            "value_re": mtv_core::numerics::render_float(&c.re, out.digits),
                            "value_im": mtv_core::numerics::render_float(&c.im, out.digits),
                        }),
                    );
                }
            }
            Ok(true)
        }
        Cmd::Table {
            family: TableFamily::T3223,
            n,
            star,
        } => {
            let (a, b) = parse_range(&n)?;
            let mut ok = true;
            for n in a..=b {
                let mut ws = vec![3];
                ws.extend(vec![2; n]);
                ws.push(3);
                let w = Word::from_weights(&ws);
                let explicit = t3223_explicit(n, star, &ctx)?;
                let r = if star {
                    BigRational::from_integer(1.into())
                } else {
                    BigRational::from_integer(0.into())
                };
                let direct = value_of(Kind::T, &w, &r, &ctx)?;
                let bound = (&explicit - &direct.value).abs_f64() + direct.error;
                ok &= bound <= tol;
                let name = label(Kind::T, &w, if star { "1" } else { "0" });
                let v = Evaluated {
                    value: explicit,
                    error: bound,
                    terms: direct.terms,
                };
                let mut rec = out.record(&w.display_with(Kind::T), "t", &v);
                rec["r"] = json!(r.to_string());
                out.emit(
                    format!("{} = {}  (error <= {:.1e})", name, out.num(&v.value), bound),
                    rec,
                );
            }
            Ok(ok)
        }
        Cmd::Relation { word, via, r } => {
            let (kind, w) = read_word(&word, o.reversed)?;
            if kind != Kind::T {
                return Err(Failure::Parse("relations are produced for t-words".into()));
            }
            let rel = match via {
                Via::Symmetry => extract_relation(&w)?,
                Via::Antipode => antipode_relation(&w, &parse_rational(&r)?)?,
                Via::HalfParity => half_parity_relation(&w)?,
            };
            let res = relation_residual(&rel, &ctx)?;
            let resid = res.value.abs_f64();
            let ok = resid <= tol.max(res.error);
            let (c, k) = &rel.constant;
            out.emit(
                format!(
                    "{}\n  residual {:.3e} (bound {:.1e}) {}",
                    rel.render(),
                    resid,
                    res.error,
                    if ok { "ok" } else { "FAILED" }
                ),
                json!({
                    "word": w.display_with(kind),
                    "via": format!("{:?}", via).to_lowercase(),
                    "relation": rel.render(),
                    "terms": rel.terms.iter().map(|t| json!({
                        "coeff": t.coeff.to_string(),
                        "factors": t.factors.iter().map(|f| json!({
                            "kind": kind_name(f.kind),
                            "label": f.label,
                            "sum": f.sum.to_json(f.kind),
                        })).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                    "constant": {"coeff": c.to_string(), "ipi_power": k},
                    "residual": resid,
                    "error_bound": res.error,
                    "ok": ok,
                }),
            );
            Ok(ok)
        }
        Cmd::Verify { what } => verify(what, &ctx, tol, &out),
        Cmd::Check {
            what: CheckWhat::ConjectureThalf,
            n,
        } => {
            let mut ws = vec![2];
            ws.extend(vec![1; 2 * n + 1]);
            ws.push(2);
            let w = Word::from_weights(&ws);
            let lhs = eval_sum(&sigma(&w, &frac(1, 2)), Kind::T, &ctx)?;
            let single = eval(&Word::from_weights(&[5 + 2 * n as u32]), Kind::T, &ctx)?;
            let c = frac(4 + 2 * n as i64, 1) / pow(&frac(2, 1), 3 + 2 * n as u32);
            let rhs = single.value.scale_rational(&c);
            let resid = (&lhs.value - &rhs).abs_f64();
            let ok = resid <= tol;
            let name = format!("t^(1/2){}", &w.display_with(Kind::T)[1..]);
            out.emit(
                format!(
                    "{} = {}\n{} t({}) = {}\n  residual {:.3e} {}",
                    name,
                    out.num(&lhs.value),
                    c,
                    5 + 2 * n,
                    out.num(&rhs),
                    resid,
                    if ok { "ok" } else { "FAILED" }
                ),
                json!({
                    "n": n,
                    "word": w.display_with(Kind::T),
                    "r": "1/2",
                    "value_re": mtv_core::numerics::render_float(&lhs.value.re, out.digits),
                    "value_im": mtv_core::numerics::render_float(&lhs.value.im, out.digits),
                    "error_bound": lhs.error + single.error,
                    "M_used": lhs.terms.max(single.terms),
                    "residual": resid,
                    "ok": ok,
                }),
            );
            Ok(ok)
        }
    }
}

fn verify(what: Verify, ctx: &PrecisionContext, tol: f64, out: &Out) -> Result<bool, Failure> {
    match what {
        Verify::Truncated {
            m,
            phases,
            big_m,
            samples,
            seed,
        } => {
            let phi = PhaseVector::parse(&phases)?;
            if phi.len() != m {
                return Err(Failure::Parse(format!(
                    "--m {} but {} phases given",
                    m,
                    phi.len()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ok = true;
            for i in 0..samples {
                let ys: Vec<(f64, f64)> = (0..m)
                    .map(|_| (rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)))
                    .collect();
                let y = EvalPoint::from_f64(ctx.prec(), &ys);
                let r = truncated_identity_residual(&phi, &y, big_m, ctx)?;
                let resid = r.value.abs_f64();
                let pass = resid <= tol.max(r.error);
                ok &= pass;
                out.emit(
                    format!("sample {}: y = {:?}  residual {:.3e} (bound {:.1e}) {}", i, ys, resid, r.error, if pass { "ok" } else { "FAILED" }),
                    json!({"check": "truncated", "phases": phi.to_string(), "M": big_m, "y": ys, "residual": resid, "error_bound": r.error, "ok": pass}),
                );
            }
            Ok(ok)
        }
        Verify::Limit { phases, y } => {
            let phi = PhaseVector::parse(&phases)?;
            let y = parse_points(y.as_deref(), phi.len(), ctx.prec())?;
            let r = limit_identity_residual(&phi, &y, ctx)?;
            residual_line(out, "limit", &phi, &r, tol)
        }
        Verify::Symmetry { phases, y, cutoff } => {
            let phi = PhaseVector::parse(&phases)?;
            let y = parse_points(y.as_deref(), phi.len(), ctx.prec())?;
            let cutoff = cutoff.unwrap_or(if phi.len() <= 2 { 30 } else { 16 });
            let r = full_symmetry_residual(&phi, &y, cutoff, ctx)?;
            residual_line(out, "symmetry", &phi, &r, tol)
        }
        Verify::Series { name, order } => {
            let report = verify_series(
                &name,
                |idx| direct_coefficient(&name, idx, ctx),
                order,
                tol,
                ctx,
            )?;
            for c in &report.checks {
                out.emit(
                    format!("{}{:?}: series {}  direct {}  residual {:.3e}", name, c.index, out.num(&c.series), out.num(&c.direct), c.residual),
                    json!({"series": name, "index": [c.index.0, c.index.1], "residual": c.residual}),
                );
            }
            let ok = report.passed() && !report.checks.is_empty();
            out.emit(
                format!("{}: {} coefficients, max residual {:.3e} {}", name, report.checks.len(), report.max_residual, if ok { "ok" } else { "FAILED" }),
                json!({"series": name, "checked": report.checks.len(), "max_residual": report.max_residual, "ok": ok}),
            );
            Ok(ok)
        }
    }
}

fn residual_line(
    out: &Out,
    check: &str,
    phi: &PhaseVector,
    r: &Evaluated,
    tol: f64,
) -> Result<bool, Failure> {
    let resid = r.value.abs_f64();
    let ok = resid <= tol.max(r.error);
    out.emit(
        format!("{} at phases {}: residual {:.3e} (bound {:.1e}) {}", check, phi, resid, r.error, if ok { "ok" } else { "FAILED" }),
        json!({"check": check, "phases": phi.to_string(), "residual": resid, "error_bound": r.error, "ok": ok}),
    );
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Parse(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("numeric failure: {}", m);
            ExitCode::from(3)
        }
    }
}
