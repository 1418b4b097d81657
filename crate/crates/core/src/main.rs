use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::One;
use serde_json::{json, Value};

use biquad::arith::{parse_rational, Integer};
use biquad::biquad::{emit_elliptic_model, emit_thue_batch, solve_curve, BiquadraticCurve};
use biquad::config::{Output, RunConfig};
use biquad::lucas::{brute_force_scan, near_multiples, recognize, Kind, LucasSpec, NearMultipleQuery};
use biquad::thue::{Provenance, ThueEquation};
use biquad::Error;

#[derive(Parser)]
#[command(name = "biquad", version, about = "Integral points on y^2 = ax^4 + bx^2 + c and near-square Lucas terms")]
struct Cli {
    /// Box bound for the bounded Thue search.
    #[arg(long, global = true)]
    bound: Option<u64>,
    /// Height bound for particular solutions of ternary forms.
    #[arg(long, global = true)]
    height_bound: Option<u64>,
    /// Command solving one Thue equation per call (wire line on stdin).
    #[arg(long, global = true)]
    external_solver: Option<String>,
    /// `text` or `json` (one record per line).
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker threads for independent equations
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Conic strategy: `4c`, `4a` or `auto`.
    #[arg(long, global = true)]
    strategy: Option<String>,
    /// File of `key = value` settings, applied before the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integral points on y^2 = a*x^4 + b*x^2 + c (rational coefficients allowed).
    SolveCurve {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
    },
    /// Write the Thue batch for a curve, or its cubic model.
    Emit {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
        /// Print the cubic model instead of the Thue batch.
        #[arg(long)]
        elliptic: bool,
        /// Write to this file instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Terms a*m^2 + b of U(P,Q) or V(P,Q), |Q| = 1.
    Lucas {
        /// `U` or `V`
        #[arg(long)]
        kind: Kind,
        /// Sequence parameter P > 0
        #[arg(short = 'P', allow_hyphen_values = true)]
        p: Integer,
        /// Sequence parameter Q = 1 or -1
        #[arg(short = 'Q', allow_hyphen_values = true)]
        q: Integer,
        /// Multiplier of m^2, non-zero
        #[arg(short = 'a', allow_hyphen_values = true)]
        a: Integer,
        /// Offset
        #[arg(short = 'b', allow_hyphen_values = true)]
        b: Integer,
        /// Cross-check against the first N+1 terms.
        #[arg(long)]
        oracle: Option<usize>,
    },
    /// Solve Thue equations given as wire lines `e4 e3 e2 e1 e0 rhs`.
    Thue {
        /// Input file; stdin when absent.
        input: Option<PathBuf>,
    },
}

/// Exit status 2: finished, but some branch could not be resolved.
const UNRESOLVED: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    cfg.apply_env();
    let flags = [
        ("bound", cli.bound.map(|v| v.to_string())),
        ("height-bound", cli.height_bound.map(|v| v.to_string())),
        ("external-solver", cli.external_solver.clone()),
        ("format", cli.format.clone()),
        ("jobs", cli.jobs.map(|v| v.to_string())),
        ("strategy", cli.strategy.clone()),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<u8, Error> {
    let cfg = config(&cli)?;
    if let Some(jobs) = cfg.jobs {
        // fails only if the pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let mut out = Report {
        format: cfg.output,
        sink: io::stdout().lock(),
    };
    match &cli.command {
        Command::SolveCurve { a, b, c } => cmd_solve_curve(&cfg, &curve(a, b, c)?, &mut out),
        Command::Emit {
            a,
            b,
            c,
            elliptic,
            output,
        } => cmd_emit(&cfg, &curve(a, b, c)?, *elliptic, output.as_ref(), &mut out),
        Command::Lucas {
            kind,
            p,
            q,
            a,
            b,
            oracle,
        } => {
            let spec = LucasSpec::new(*kind, p.clone(), q.clone())?;
            let query = NearMultipleQuery::new(spec, a.clone(), b.clone())?;
            cmd_lucas(&cfg, &query, *oracle, &mut out)
        }
        Command::Thue { input } => cmd_thue(&cfg, input.as_ref(), &mut out),
    }
}

fn curve(a: &str, b: &str, c: &str) -> Result<BiquadraticCurve, Error> {
    BiquadraticCurve::normalize(&parse_rational(a)?, &parse_rational(b)?, &parse_rational(c)?)
}

struct Report<W: Write> {
    format: Output,
    sink: W,
}

impl<W: Write> Report<W> {
    fn text(&mut self, line: impl AsRef<str>) {
        if self.format == Output::Text {
            let _ = writeln!(self.sink, "{}", line.as_ref());
        }
    }

    fn record(&mut self, value: Value) {
        if self.format == Output::Json {
            let _ = writeln!(self.sink, "{value}");
        }
    }
}

fn provenance_fields(p: &Provenance, unresolved: usize) -> Value {
    let bound = match p {
        Provenance::Exact => Value::Null,
        Provenance::BoundedBy(b) => Value::String(b.to_string()),
    };
    json!({
        "provenance": if p.is_exact() { "exact" } else { "bounded" },
        "bound": bound,
        "complete": p.is_exact() && unresolved == 0,
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(sep)
}

fn cmd_solve_curve<W: Write>(cfg: &RunConfig, curve: &BiquadraticCurve, out: &mut Report<W>) -> Result<u8, Error> {
    let backend = cfg.backend()?;
    let res = solve_curve(curve, backend.as_ref(), cfg.strategy, cfg.height_bound)?;
    out.text(format!("curve: {curve}"));
    if !curve.scale.is_one() {
        out.text(format!("normalized: coefficients multiplied by L^2, L={}", curve.scale));
    }
    out.text(format!("strategy: {}", res.strategy));
    out.text(format!("backend: {}", backend.describe()));
    let pts = join(res.points.iter().map(|(x, y)| format!("(±{x}, ±{y})")), ", ");
    out.text(format!("points: {}", if pts.is_empty() { "none".into() } else { pts }));
    out.text(format!("provenance: {}", res.provenance));
    for u in &res.unresolved {
        out.text(format!("unresolved: g={}: {}", u.g, u.reason));
    }
    for (x, y) in &res.points {
        out.record(json!({"kind": "point", "x": x.to_string(), "y": y.to_string()}));
    }
    out.record(merge(
        json!({
            "kind": "summary",
            "a": curve.a.to_string(),
            "b": curve.b.to_string(),
            "c": curve.c.to_string(),
            "scale": curve.scale.to_string(),
            "strategy": res.strategy.to_string(),
            "points": res.points.len(),
            "unresolved": res.unresolved.iter().map(|u| format!("g={}: {}", u.g, u.reason)).collect::<Vec<_>>(),
        }),
        provenance_fields(&res.provenance, res.unresolved.len()),
    ));
    Ok(if res.unresolved.is_empty() { 0 } else { UNRESOLVED })
}

fn cmd_emit<W: Write>(
    cfg: &RunConfig,
    curve: &BiquadraticCurve,
    elliptic: bool,
    path: Option<&PathBuf>,
    out: &mut Report<W>,
) -> Result<u8, Error> {
    let (body, records, code) = if elliptic {
        let model = emit_elliptic_model(curve);
        let rec = json!({"kind": "elliptic", "equation": model.equation(), "substitution": model.substitution()});
        (format!("{model}\n"), vec![rec], 0)
    } else {
        let batch = emit_thue_batch(curve, cfg.strategy, cfg.height_bound)?;
        let mut recs = Vec::new();
        let mut code = 0;
        if let Some((_, r)) = &batch.model {
            if !r.unresolved.is_empty() {
                code = UNRESOLVED;
            }
            for e in &r.equations {
                recs.push(json!({
                    "kind": "equation",
                    "coeffs": e.equation.form.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "rhs": e.equation.rhs.to_string(),
                    "obstruction": e.obstruction.as_ref().map(|m| m.to_string()),
                    "origins": e.origins.iter().map(|o| json!({
                        "g": o.g.to_string(), "d": o.d.to_string(), "p": o.p.to_string(), "q": o.q.to_string(),
                    })).collect::<Vec<_>>(),
                }));
            }
            recs.push(json!({
                "kind": "summary",
                "strategy": batch.strategy.to_string(),
                "equations": r.equations.len(),
                "unresolved": r.unresolved.iter().map(|u| format!("g={}: {}", u.g, u.reason)).collect::<Vec<_>>(),
            }));
        } else {
            recs.push(json!({"kind": "summary", "strategy": batch.strategy.to_string(), "equations": 0}));
        }
        (batch.to_string(), recs, code)
    };
    match path {
        Some(p) => {
            let text = match out.format {
                Output::Text => body,
                Output::Json => records.iter().map(|r| format!("{r}\n")).collect(),
            };
            std::fs::write(p, text).map_err(|e| Error::Domain(format!("cannot write {}: {e}", p.display())))?;
        }
        None => {
            out.text(body.trim_end());
            for r in records {
                out.record(r);
            }
        }
    }
    Ok(code)
}

fn cmd_lucas<W: Write>(
    cfg: &RunConfig,
    query: &NearMultipleQuery,
    oracle: Option<usize>,
    out: &mut Report<W>,
) -> Result<u8, Error> {
    let backend = cfg.backend()?;
    let res = near_multiples(query, backend.as_ref(), cfg.strategy, cfg.height_bound)?;
    let kind = query.spec.kind;
    out.text(format!("sequence: {}, form {}*m^2 + {}", query.spec, query.a, query.b));
    out.text(format!("result: {res}"));
    for t in &res.finite_terms {
        let n = recognize(&query.spec, t)?.expect("verified term");
        let m = query.root(t).expect("verified form");
        out.text(format!("  {kind}_{n} = {t} = {}*{m}^2 + {}", query.a, query.b));
        out.record(json!({"kind": "term", "value": t.to_string(), "index": n, "m": m.to_string()}));
    }
    if let Some(f) = &res.family {
        let label = f.label(kind);
        out.text(format!("family: {label} from w^2 - {}*x^2 = {}", f.pell_d, f.pell_n));
        let shown = join(f.terms.iter().map(|(n, t, _)| format!("{kind}_{n} = {t}")), ", ");
        out.text(format!("  first terms: {shown}"));
        out.record(json!({
            "kind": "family",
            "label": label,
            "pell_d": f.pell_d.to_string(),
            "pell_n": f.pell_n.to_string(),
            "modulus": f.modulus,
            "residue": f.residue,
            "terms": f.terms.iter().map(|(n, t, m)| json!({"index": n, "value": t.to_string(), "m": m.to_string()})).collect::<Vec<_>>(),
        }));
    }
    out.text(format!("provenance: {}", res.provenance));
    for (branch, reason) in &res.unresolved {
        out.text(format!("unresolved: {branch}: {reason}"));
    }
    let mut summary = json!({
        "kind": "summary",
        "sequence": query.spec.to_string(),
        "a": query.a.to_string(),
        "b": query.b.to_string(),
        "display": res.to_string(),
        "unresolved": res.unresolved.iter().map(|(b, r)| format!("{b}: {r}")).collect::<Vec<_>>(),
    });
    if let Some(n) = oracle {
        let brute = brute_force_scan(query, n);
        let ours = res.terms_up_to(n);
        if brute != ours {
            return Err(Error::Contract(format!(
                "oracle mismatch up to index {n}: brute force {{{}}}, result {{{}}}",
                join(&brute, ", "),
                join(&ours, ", ")
            )));
        }
        out.text(format!("oracle: agrees with brute force up to index {n}"));
        summary["oracle"] = json!(n);
    }
    out.record(merge(summary, provenance_fields(&res.provenance, res.unresolved.len())));
    Ok(if res.unresolved.is_empty() { 0 } else { UNRESOLVED })
}

fn cmd_thue<W: Write>(cfg: &RunConfig, input: Option<&PathBuf>, out: &mut Report<W>) -> Result<u8, Error> {
    let reader: Box<dyn BufRead> = match input {
        Some(p) => Box::new(io::BufReader::new(
            std::fs::File::open(p).map_err(|e| Error::Domain(format!("cannot open {}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdin().lock()),
    };
    let backend = cfg.backend()?;
    let mut provenance = Provenance::Exact;
    let mut count = 0usize;
    for line in reader.lines() {
        let line = line.map_err(|e| Error::Domain(format!("read failed: {e}")))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let eq = ThueEquation::parse_wire_line(line)?;
        let sol = backend.solve(&eq)?;
        provenance = provenance.merge(&sol.provenance);
        count += 1;
        let pairs = join(sol.pairs.iter().map(|(m, n)| format!("±({m}, {n})")), ", ");
        out.text(format!(
            "{eq}: {} [{}]",
            if pairs.is_empty() { "none".into() } else { pairs },
            sol.provenance
        ));
        out.record(merge(
            json!({
                "kind": "equation",
                "equation": eq.wire_line(),
                "solutions": sol.pairs.iter().map(|(m, n)| [m.to_string(), n.to_string()]).collect::<Vec<_>>(),
            }),
            provenance_fields(&sol.provenance, 0),
        ));
    }
    out.record(merge(json!({"kind": "summary", "equations": count}), provenance_fields(&provenance, 0)));
    Ok(0)
}
