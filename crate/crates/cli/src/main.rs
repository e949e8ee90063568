//! qforge: exact q-deformed calculus toolbox.
//!
//! Subcommands: bezout, delta, qderham, filcheck, envelope, gamma, member,
//! grid. All polynomial arguments use the text grammar (see the README);
//! `q` is accepted on input and expands to `1 + u`. Output is canonical
//! u-form unless `--print-q` is given; `--json` switches every subcommand to
//! a canonical JSON report (sorted keys, rationals as exact strings).
//!
//! Exit codes: 0 all checks verified (inconclusive results are accepted only
//! under `--allow-inconclusive`), 1 a check was refuted, 2 usage errors or
//! execution errors.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qforge_cli::grid::{self, GridSpec, PropertySelector};
use qforge_cli::report::{
    certificate_json, fil_witness_json, poly_string, status_string, to_canonical_bytes,
    verification_json,
};
use qforge_core::delta::{delta_op, frobenius, gamma, gamma_q};
use qforge_core::envelope::{
    decompose_divided_power, fil_member, gamma_tilde_alpha2, FilStatus, RatEnvelope,
};
use qforge_core::membership::{
    default_degree_bound, hnf_member, monomial_member, CoeffRing, IdealSpec, MonomialMembership,
    SearchOutcome,
};
use qforge_core::qanalog::bezout_pn;
use qforge_core::qcalc::{
    build_complex, qhodge_filtration_member, ComplexMode, FiltrationResult, FilteredCochain,
};
use qforge_core::tower::{
    build_tower, default_bound_b, default_bound_c, verify_a, verify_b, verify_c,
    verify_d_and_lift, VerifyStatus,
};
use qforge_core::{Poly, PrimeContext};

#[derive(Parser)]
#[command(name = "qforge", version, about = "exact q-deformed calculus toolbox")]
struct Cli {
    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Truncation order N in u = q - 1 (default 8; gamma raises it to p^n
    /// when needed, qderham keeps inputs exact unless set).
    #[arg(long, global = true)]
    trunc: Option<u32>,

    /// Delta-tower depth bound D.
    #[arg(long, global = true, default_value_t = 3)]
    depth: u32,

    /// Seed for randomized sampling (echoed into reports).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Treat inconclusive results as acceptable for the exit code.
    #[arg(long, global = true)]
    allow_inconclusive: bool,

    /// Print polynomials re-expressed in q instead of u.
    #[arg(long, global = true)]
    print_q: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bezout split p = P(q)(q-1)^e + Q(q)Phi_{p^n}(q).
    Bezout(BezoutArgs),
    /// Frobenius, delta and divided powers of an expression.
    Delta(DeltaArgs),
    /// Build a q-de Rham / q-Hodge complex and apply its differential.
    Qderham(QderhamArgs),
    /// Coordinate q-Hodge filtration test for a cochain file.
    Filcheck(FilcheckArgs),
    /// Rationalised envelope operations.
    Envelope(EnvelopeArgs),
    /// Build a Gamma tower and verify its properties.
    Gamma(GammaArgs),
    /// Ideal membership with certificates.
    Member(MemberArgs),
    /// Run a (p, alpha, n) verification grid.
    Grid(GridArgs),
}

#[derive(Args)]
struct BezoutArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    n: u32,
}

#[derive(Args)]
struct DeltaArgs {
    #[arg(long)]
    p: u32,
    /// Expression in the polynomial grammar.
    #[arg(long)]
    expr: String,
}

#[derive(Args)]
struct QderhamArgs {
    /// Number of coordinates r >= 1.
    #[arg(long)]
    vars: usize,
    /// qdr or qhodge.
    #[arg(long)]
    mode: String,
    /// Degree-0 element to which the differential is applied.
    #[arg(long)]
    apply: String,
}

#[derive(Args)]
struct FilcheckArgs {
    /// Filtration level i.
    #[arg(long)]
    level: u32,
    /// File with one degree-k component per line (k = line number from 0).
    #[arg(long)]
    cochain: String,
}

#[derive(Args)]
struct EnvelopeArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    alpha: u32,
    #[command(subcommand)]
    op: EnvelopeOp,
}

#[derive(Subcommand)]
enum EnvelopeOp {
    /// Membership of an expression in (x^alpha, u)^k.
    Filcheck {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        k: u32,
    },
    /// The corrected divided power for alpha = 2.
    GammaTilde,
    /// Divided-power decomposition gamma^(n)(x) = y0 + correction layers.
    Decompose {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Args)]
struct GammaArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    alpha: u32,
    #[arg(long)]
    n: u32,
    /// Properties to verify: comma list of a,b,c,d,lift or "all".
    #[arg(long, default_value = "all")]
    verify: String,
    /// Degree bound for certificate searches (default: target degree plus
    /// largest generator degree plus 4).
    #[arg(long)]
    bound: Option<u64>,
}

#[derive(Args)]
struct MemberArgs {
    /// File with one generator per line.
    #[arg(long)]
    ideal: String,
    #[arg(long, default_value_t = 1)]
    power: u32,
    #[arg(long)]
    target: String,
    #[arg(long)]
    bound: Option<u64>,
    /// Coefficient ring: z or q.
    #[arg(long, default_value = "z")]
    ring: String,
}

#[derive(Args)]
struct GridArgs {
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u32>,
    /// Comma-separated alpha values (all >= 2).
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<u32>,
    /// Comma-separated tower levels.
    #[arg(long, value_delimiter = ',')]
    levels: Vec<u32>,
    /// Properties: comma list of a,b,c,d,lift or "all".
    #[arg(long, default_value = "all")]
    properties: String,
    #[arg(long)]
    bound: Option<u64>,
    /// Fan cells out across threads (report order is unaffected).
    #[arg(long)]
    parallel: bool,
}

fn emit(value: &Value) {
    std::io::stdout()
        .write_all(&to_canonical_bytes(value))
        .expect("stdout");
}

fn parse_poly_arg(s: &str) -> Result<Poly, String> {
    Poly::parse(s).map_err(|e| format!("bad polynomial '{s}': {e}"))
}

fn read_poly_lines(path: &str) -> Result<Vec<Poly>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(
            Poly::parse(line).map_err(|e| format!("{path}:{}: {e}", ln + 1))?,
        );
    }
    Ok(out)
}

fn run(cli: &Cli) -> Result<i32, String> {
    let print_q = cli.print_q;
    match &cli.command {
        Command::Bezout(args) => {
            let b = bezout_pn(args.p, args.n).map_err(|e| e.to_string())?;
            if cli.json {
                emit(&json!({
                    "op": "bezout",
                    "params": {"p": args.p, "n": args.n},
                    "e": b.exponent,
                    "p_poly": poly_string(&b.p_poly, print_q),
                    "q_poly": poly_string(&b.q_poly, print_q),
                    "v_poly": poly_string(&b.v_poly, print_q),
                    "identity": "verified",
                }));
            } else {
                println!("identity: {} = P(q)*(q-1)^{} + Q(q)*Phi_{{{}^{}}}(q)  [verified]",
                    args.p, b.exponent, args.p, args.n);
                println!("e = {}", b.exponent);
                println!("P = {}", poly_string(&b.p_poly, print_q));
                println!("Q = {}", poly_string(&b.q_poly, print_q));
                println!("V = {}", poly_string(&b.v_poly, print_q));
            }
            Ok(0)
        }
        Command::Delta(args) => {
            let trunc = cli.trunc.unwrap_or(8);
            let ctx = PrimeContext::new(args.p, trunc, cli.depth).map_err(|e| e.to_string())?;
            let f = parse_poly_arg(&args.expr)?;
            let phi = frobenius(&f, &ctx).map_err(|e| e.to_string())?;
            let dele = delta_op(&f, &ctx).map_err(|e| e.to_string())?;
            let gam = gamma(&f, &ctx);
            let gq = gamma_q(&f, &ctx).map_err(|e| e.to_string())?;
            if cli.json {
                emit(&json!({
                    "op": "delta",
                    "params": {"p": args.p, "trunc": trunc, "depth": cli.depth},
                    "input": poly_string(&f, print_q),
                    "phi": poly_string(&phi, print_q),
                    "delta": poly_string(&dele, print_q),
                    "gamma": poly_string(&gam, print_q),
                    "gamma_q": poly_string(&gq, print_q),
                }));
            } else {
                println!("phi     = {}", poly_string(&phi, print_q));
                println!("delta   = {}", poly_string(&dele, print_q));
                println!("gamma   = {}", poly_string(&gam, print_q));
                println!("gamma_q = {}  (mod u^{})", poly_string(&gq, print_q), trunc);
            }
            Ok(0)
        }
        Command::Qderham(args) => {
            let mode = match args.mode.as_str() {
                "qdr" => ComplexMode::QDeRham,
                "qhodge" => ComplexMode::QHodge,
                other => return Err(format!("mode must be qdr or qhodge, got '{other}'")),
            };
            let complex = build_complex(args.vars, mode).map_err(|e| e.to_string())?;
            let mut f = parse_poly_arg(&args.apply)?;
            if let Some(n) = cli.trunc {
                f = f.as_mod(n);
            }
            let image = complex
                .apply_differential(0, &[f])
                .map_err(|e| e.to_string())?;
            let d2 = complex.d_squared_is_zero();
            if cli.json {
                emit(&json!({
                    "op": "qderham",
                    "params": {"vars": args.vars, "mode": args.mode, "trunc": cli.trunc},
                    "d_squared_zero": d2,
                    "components": image.iter().map(|p| poly_string(p, print_q)).collect::<Vec<_>>(),
                }));
            } else {
                println!("d^2 = 0 on full matrices: {d2}");
                for (i, comp) in image.iter().enumerate() {
                    println!("dx{}: {}", i + 1, poly_string(comp, print_q));
                }
            }
            Ok(if d2 { 0 } else { 1 })
        }
        Command::Filcheck(args) => {
            let components = read_poly_lines(&args.cochain)?;
            let cochain = FilteredCochain { level: args.level, components };
            let result = qhodge_filtration_member(&cochain);
            let (status, witness) = match &result {
                FiltrationResult::Member => ("member", None),
                FiltrationResult::NonMember { degree, monomial } => {
                    ("non-member", Some(format!("degree {degree}: {monomial}")))
                }
            };
            if cli.json {
                let mut m = serde_json::Map::new();
                m.insert("op".into(), json!("filcheck"));
                m.insert("params".into(), json!({"level": args.level}));
                m.insert("status".into(), json!(status));
                if let Some(w) = &witness {
                    m.insert("witness".into(), json!(w));
                }
                emit(&Value::Object(m));
            } else {
                match &witness {
                    None => println!("member of Fil^{}", args.level),
                    Some(w) => println!("not in Fil^{}: offending component at {w}", args.level),
                }
            }
            Ok(if matches!(result, FiltrationResult::Member) { 0 } else { 1 })
        }
        Command::Envelope(args) => {
            let trunc = cli.trunc.unwrap_or(8);
            let ctx = PrimeContext::new(args.p, trunc, cli.depth).map_err(|e| e.to_string())?;
            let env = RatEnvelope::new(ctx, args.alpha).map_err(|e| e.to_string())?;
            match &args.op {
                EnvelopeOp::Filcheck { expr, k } => {
                    let f = parse_poly_arg(expr)?.as_mod(trunc);
                    let w = fil_member(&env, &f, *k).map_err(|e| e.to_string())?;
                    if cli.json {
                        let mut m = serde_json::Map::new();
                        m.insert("op".into(), json!("envelope.filcheck"));
                        m.insert(
                            "params".into(),
                            json!({"p": args.p, "alpha": args.alpha, "trunc": trunc, "k": k}),
                        );
                        m.insert(
                            "status".into(),
                            json!(if w.status == FilStatus::Member { "member" } else { "non-member" }),
                        );
                        if let Some((mon, coeff)) = &w.offending {
                            m.insert("witness".into(), json!(format!("{coeff}*{mon}")));
                        }
                        m.insert("element".into(), json!(poly_string(&f, print_q)));
                        emit(&Value::Object(m));
                    } else {
                        match &w.offending {
                            None => println!("member of (x^{}, u)^{}", args.alpha, k),
                            Some((m, c)) => println!(
                                "not in (x^{}, u)^{}: offending term {c}*{m}",
                                args.alpha, k
                            ),
                        }
                    }
                    Ok(if w.status == FilStatus::Member { 0 } else { 1 })
                }
                EnvelopeOp::GammaTilde => {
                    let report = gamma_tilde_alpha2(&env).map_err(|e| e.to_string())?;
                    let ok = report.fil.status == FilStatus::Member
                        && report.specializes_to_divided_power;
                    if cli.json {
                        emit(&json!({
                            "op": "envelope.gamma_tilde",
                            "params": {"p": args.p, "alpha": args.alpha, "trunc": trunc},
                            "status": if ok { "verified" } else { "refuted" },
                            "element": poly_string(&report.element, print_q),
                            "fil": fil_witness_json(&report.fil, print_q),
                            "specializes_to_divided_power": report.specializes_to_divided_power,
                            "uncorrected_fil": fil_witness_json(&report.uncorrected_fil, print_q),
                        }));
                    } else {
                        println!("gamma~_q(x^2) = {}", poly_string(&report.element, print_q));
                        println!(
                            "in Fil^{}: {}; specialises to x^(2p)/p: {}",
                            ctx.p,
                            report.fil.status == FilStatus::Member,
                            report.specializes_to_divided_power
                        );
                        println!(
                            "uncorrected gamma_q(x^2) in Fil^{}: {}",
                            ctx.p,
                            report.uncorrected_fil.status == FilStatus::Member
                        );
                    }
                    Ok(if ok { 0 } else { 1 })
                }
                EnvelopeOp::Decompose { n } => {
                    let d = decompose_divided_power(&env, *n).map_err(|e| e.to_string())?;
                    if cli.json {
                        emit(&json!({
                            "op": "envelope.decompose",
                            "params": {"p": args.p, "alpha": args.alpha, "trunc": trunc, "n": n},
                            "status": if d.identity_holds { "verified" } else { "refuted" },
                            "y0": poly_string(&d.y0, print_q),
                            "ys": d.ys.iter().map(|y| poly_string(y, print_q)).collect::<Vec<_>>(),
                            "y0_form": d.y0_form,
                            "provenance": d.y_provenance,
                        }));
                    } else {
                        println!(
                            "recombination identity gamma^({n})(x) = y0 + sum layers: {}",
                            if d.identity_holds { "verified" } else { "REFUTED" }
                        );
                        println!("y0 = {}", poly_string(&d.y0, print_q));
                        for (i, y) in d.ys.iter().enumerate() {
                            println!("y{} = {}", i + 1, poly_string(y, print_q));
                        }
                    }
                    Ok(if d.identity_holds { 0 } else { 1 })
                }
            }
        }
        Command::Gamma(args) => {
            let needed = args.p.checked_pow(args.n).unwrap_or(u32::MAX);
            let trunc = cli.trunc.unwrap_or_else(|| needed.max(8));
            let ctx = PrimeContext::new(args.p, trunc, cli.depth).map_err(|e| e.to_string())?;
            let selectors = PropertySelector::parse_list(&args.verify)?;
            let tower = build_tower(ctx, args.alpha, args.n).map_err(|e| e.to_string())?;
            let mut reports = Vec::new();
            for sel in &selectors {
                match sel {
                    PropertySelector::A => {
                        reports.push(verify_a(&tower, args.n).map_err(|e| e.to_string())?)
                    }
                    PropertySelector::B => {
                        for i in 1..args.n {
                            let bound = match args.bound {
                                Some(b) => b,
                                None => default_bound_b(&tower, args.n, i)
                                    .map_err(|e| e.to_string())?,
                            };
                            reports.push(
                                verify_b(&tower, args.n, i, bound).map_err(|e| e.to_string())?,
                            );
                        }
                    }
                    PropertySelector::C => {
                        let bound = match args.bound {
                            Some(b) => b,
                            None => default_bound_c(&tower, args.n).map_err(|e| e.to_string())?,
                        };
                        reports
                            .push(verify_c(&tower, args.n, bound).map_err(|e| e.to_string())?);
                    }
                    PropertySelector::D => {
                        let (d, _, _) =
                            verify_d_and_lift(&tower, args.n).map_err(|e| e.to_string())?;
                        reports.push(d);
                    }
                    PropertySelector::Lift => {
                        let (_, l, _) =
                            verify_d_and_lift(&tower, args.n).map_err(|e| e.to_string())?;
                        reports.push(l);
                    }
                }
            }
            if cli.json {
                emit(&json!({
                    "op": "gamma",
                    "params": {
                        "p": args.p, "alpha": args.alpha, "n": args.n,
                        "trunc": trunc, "depth": cli.depth,
                    },
                    "gamma_n": poly_string(&tower.levels[args.n as usize].gamma, print_q),
                    "reports": reports.iter().map(|r| verification_json(r, print_q)).collect::<Vec<_>>(),
                }));
            } else {
                println!(
                    "Gamma_{} = {}",
                    args.n,
                    poly_string(&tower.levels[args.n as usize].gamma, print_q)
                );
                for r in &reports {
                    println!("{:<8} {:<13} {}", r.property.tag(), status_string(r.status), r.detail);
                }
            }
            let worst = reports.iter().map(|r| r.status).fold(VerifyStatus::Verified, |acc, s| {
                match (acc, s) {
                    (VerifyStatus::Refuted, _) | (_, VerifyStatus::Refuted) => VerifyStatus::Refuted,
                    (VerifyStatus::Inconclusive, _) | (_, VerifyStatus::Inconclusive) => {
                        VerifyStatus::Inconclusive
                    }
                    _ => VerifyStatus::Verified,
                }
            });
            Ok(match worst {
                VerifyStatus::Verified => 0,
                VerifyStatus::Refuted => 1,
                VerifyStatus::Inconclusive => {
                    if cli.allow_inconclusive {
                        0
                    } else {
                        2
                    }
                }
            })
        }
        Command::Member(args) => {
            let ring = match args.ring.as_str() {
                "z" => CoeffRing::Int,
                "q" => CoeffRing::Rat,
                other => return Err(format!("ring must be z or q, got '{other}'")),
            };
            let generators = read_poly_lines(&args.ideal)?;
            let target = parse_poly_arg(&args.target)?;
            let ideal = IdealSpec::new(generators, args.power, ring).map_err(|e| e.to_string())?;
            let all_monomial = ideal.generators.iter().all(|g| g.num_terms() == 1);
            if all_monomial {
                let decision = monomial_member(&target, &ideal).map_err(|e| e.to_string())?;
                let (status, witness) = match &decision {
                    MonomialMembership::Member => ("member", None),
                    MonomialMembership::NonMember { witness } => {
                        ("non-member", Some(witness.to_string()))
                    }
                };
                if cli.json {
                    let mut m = serde_json::Map::new();
                    m.insert("op".into(), json!("member"));
                    m.insert("engine".into(), json!("monomial"));
                    m.insert("params".into(), json!({"power": args.power, "ring": args.ring}));
                    m.insert("status".into(), json!(status));
                    if let Some(w) = &witness {
                        m.insert("witness".into(), json!(w));
                    }
                    emit(&Value::Object(m));
                } else {
                    match &witness {
                        None => println!("member (monomial fast path)"),
                        Some(w) => println!("non-member: offending monomial {w}"),
                    }
                }
                return Ok(if matches!(decision, MonomialMembership::Member) { 0 } else { 1 });
            }
            let bound = args.bound.unwrap_or_else(|| default_degree_bound(&target, &ideal));
            let outcome = hnf_member(&target, &ideal, bound).map_err(|e| e.to_string())?;
            match outcome {
                SearchOutcome::Verified(cert) => {
                    if cli.json {
                        emit(&json!({
                            "op": "member",
                            "engine": "hnf",
                            "params": {"power": args.power, "ring": args.ring, "bound": bound},
                            "status": "verified",
                            "certificate": certificate_json(&target, &ideal, &cert, print_q),
                        }));
                    } else {
                        println!("verified: certificate with {} cofactors", cert.cofactors.len());
                        for (idx, c) in &cert.cofactors {
                            println!("  g[{idx}] * ({})", poly_string(c, print_q));
                        }
                    }
                    Ok(0)
                }
                SearchOutcome::Inconclusive { degree_bound, reason } => {
                    if cli.json {
                        emit(&json!({
                            "op": "member",
                            "engine": "hnf",
                            "params": {"power": args.power, "ring": args.ring, "bound": degree_bound},
                            "status": "inconclusive",
                            "reason": reason,
                        }));
                    } else {
                        println!("inconclusive at bound {degree_bound}: {reason}");
                        println!("(absence of a bounded certificate refutes nothing)");
                    }
                    Ok(if cli.allow_inconclusive { 0 } else { 2 })
                }
            }
        }
        Command::Grid(args) => {
            let properties = PropertySelector::parse_list(&args.properties)?;
            let spec = GridSpec {
                primes: args.primes.clone(),
                alphas: args.alphas.clone(),
                levels: args.levels.clone(),
                trunc: cli.trunc.unwrap_or(8),
                depth: cli.depth,
                bound: args.bound,
                properties,
                parallel: args.parallel,
                seed: cli.seed,
            };
            let report = grid::run_grid(&spec);
            if cli.json {
                emit(&grid::emit_json(&report, print_q));
            } else {
                print!("{}", grid::emit_text(&report));
            }
            Ok(grid::exit_code(&report, cli.allow_inconclusive))
        }
    }
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes instead of panicking
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
