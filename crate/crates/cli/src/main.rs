//! Batch-oriented command line for the splitting calculus. Every
//! subcommand reads flags (plus JSON payloads where structured input is
//! needed) and writes a single JSON document to stdout.
//!
//! Exit codes: 0 success, 1 verification failure, 2 malformed input.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use frobsplit::counting::{
    check_factored_congruence, check_pointcount_congruence, enumerate_points,
    DEFAULT_POINT_BUDGET,
};
use frobsplit::error::Error;
use frobsplit::fixtures::{run_criterion, CRITERIA};
use frobsplit::groebner::Ideal;
use frobsplit::gvd::{compute_gvd, gvd_split_consistency, verify_class_identity};
use frobsplit::klvariety::{
    bott_samelson_matrix, generalized_minor, kl_ideal, kl_splitting_poly, subword_complex,
    ReducedWord,
};
use frobsplit::monorder::{antidiagonal_weight, WeightOrder};
use frobsplit::polyring::{Domain, Poly, Ring, VarScheme};
use frobsplit::schubert::{
    fulton_generators, generate_matrix_schuberts, matrix_ring_fp, Permutation,
};
use frobsplit::splitposet::{
    closure_algorithm, FactorTable, KnownIrreducible, MonomialComponents,
};
use frobsplit::splitting::{
    is_compatibly_split, splitting_constant, CompatMode, DEFAULT_COMPAT_BUDGET,
};

#[derive(Parser)]
#[command(name = "frobsplit", about = "Exact splitting calculus over prime fields")]
struct Cli {
    /// Cap on brute-force work (point evaluations / trace checks).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum SchemeArg {
    X,
    Hl,
    C,
}

#[derive(Args)]
struct RingArgs {
    /// Prime modulus.
    #[arg(long)]
    p: u64,
    /// Number of variables; inferred from the input when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Variable naming scheme (x1..xn; h1..h(n-1),l; c1..cN).
    #[arg(long, value_enum, default_value = "x")]
    scheme: SchemeArg,
}

#[derive(Subcommand)]
enum Command {
    /// Splitting constant and compatibility verdicts for f.
    SplitCheck {
        #[command(flatten)]
        ring: RingArgs,
        /// The polynomial defining the near-splitting tr(f^(p-1) . ).
        #[arg(long)]
        f: String,
        /// Optional ideal generators (';'-separated) to test for
        /// compatibility.
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Count F_p-points and report the trace congruence.
    Count {
        #[command(flatten)]
        ring: RingArgs,
        /// Single hypersurface polynomial.
        #[arg(long, conflicts_with = "factors")]
        f: Option<String>,
        /// ';'-separated factor list for the factored congruence.
        #[arg(long)]
        factors: Option<String>,
    },
    /// Geometric vertex decomposition of an ideal along one variable.
    Gvd {
        #[command(flatten)]
        ring: RingArgs,
        /// Ideal generators, ';'-separated.
        #[arg(long)]
        ideal: String,
        /// The line coordinate: a variable name (e.g. `l` or `x3`).
        #[arg(long)]
        ell: String,
        /// Optional splitting polynomial f = l*g1 + g2 for the
        /// compatibility report.
        #[arg(long)]
        f: Option<String>,
    },
    /// Reduced Groebner basis and initial ideal from a JSON job.
    Groebner {
        /// JSON: {"ring": {"p": .., "n": .., "scheme": "x"},
        ///        "order": {"tiers": [[..]], "lex": [..] | null},
        ///        "generators": ["..", ".."]}
        #[arg(long)]
        json: String,
    },
    /// Closure poset of compatibly split ideals.
    Poset {
        #[command(flatten)]
        ring: RingArgs,
        /// Splitting polynomial.
        #[arg(long)]
        f: String,
        /// Seed ideals: generators ','-separated, ideals '|'-separated.
        #[arg(long)]
        seeds: String,
        /// Factorization hints `poly = factor; factor`, repeatable.
        #[arg(long)]
        factor: Vec<String>,
        /// Polynomials whose principal ideals are known irreducible,
        /// ';'-separated.
        #[arg(long)]
        irreducible: Option<String>,
        /// Emit a DOT Hasse diagram instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Matrix Schubert varieties: Fulton generators and degenerations.
    Schubert {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        /// One-line permutation, e.g. 213. Without it, the whole family
        /// is generated.
        #[arg(long)]
        perm: Option<String>,
    },
    /// Kazhdan-Lusztig data for a reduced word.
    Kl {
        #[arg(long)]
        n: usize,
        /// Comma-separated simple-reflection indices, e.g. 1,2,3,2.
        #[arg(long)]
        word: String,
        /// Optional element w (one-line) for the variety ideal.
        #[arg(long)]
        w: Option<String>,
        /// Prime; required with --w.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Replay a named acceptance fixture.
    Reproduce {
        /// Fixture id, or `all`.
        id: String,
        #[arg(long)]
        p: Option<u64>,
    },
    /// List the available fixtures.
    Fixtures,
}

fn scheme_of(arg: SchemeArg) -> VarScheme {
    match arg {
        SchemeArg::X => VarScheme::X,
        SchemeArg::Hl => VarScheme::HL,
        SchemeArg::C => VarScheme::C,
    }
}

/// Infer the arity from the variable names appearing in the inputs.
fn infer_arity(scheme: SchemeArg, texts: &[&str]) -> Option<usize> {
    let mut max = 0usize;
    let mut saw_l = false;
    for text in texts {
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_alphabetic() {
                let start = i;
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let ident = &text[start..i];
                let (head, tail) = ident.split_at(1);
                match (scheme, head) {
                    (SchemeArg::X, "x") | (SchemeArg::C, "c") | (SchemeArg::Hl, "h") => {
                        if let Ok(k) = tail.parse::<usize>() {
                            max = max.max(k);
                        }
                    }
                    (SchemeArg::Hl, "l") if tail.is_empty() => saw_l = true,
                    _ => {}
                }
            } else {
                i += 1;
            }
        }
    }
    match scheme {
        SchemeArg::Hl => (max > 0 || saw_l).then_some(max + 1),
        _ => (max > 0).then_some(max),
    }
}

fn build_ring(args: &RingArgs, texts: &[&str]) -> Result<Ring, Error> {
    let n = match args.n {
        Some(n) => n,
        None => infer_arity(args.scheme, texts).ok_or_else(|| {
            Error::Parse("cannot infer the variable count; pass --n".into())
        })?,
    };
    Ring::with_scheme(Domain::Fp(args.p), n, scheme_of(args.scheme))
}

fn polys_json(polys: &[Poly]) -> Vec<String> {
    polys.iter().map(|g| g.to_string()).collect()
}

fn ideal_json(ideal: &Ideal) -> Result<Vec<String>, Error> {
    Ok(ideal
        .canonical_basis()?
        .iter()
        .map(|g| g.to_string())
        .collect())
}

#[derive(Serialize)]
struct SplitCheckOut {
    constant: u64,
    is_splitting: bool,
    normalizer: Option<u64>,
    compatible: Option<bool>,
}

fn run(cli: Cli) -> Result<(serde_json::Value, bool), Error> {
    let compat_budget = cli.budget.unwrap_or(DEFAULT_COMPAT_BUDGET);
    let point_budget = cli.budget.unwrap_or(DEFAULT_POINT_BUDGET);
    match cli.command {
        Command::SplitCheck { ring, f, ideal } => {
            let texts: Vec<&str> = [Some(f.as_str()), ideal.as_deref()]
                .into_iter()
                .flatten()
                .collect();
            let r = build_ring(&ring, &texts)?;
            let fp = r.parse(&f)?;
            let constant = splitting_constant(&fp)?;
            let compatible = match ideal {
                Some(text) => {
                    let i = Ideal::parse(&r, &text)?;
                    Some(is_compatibly_split(&i, &fp, compat_budget)?)
                }
                None => None,
            };
            let out = SplitCheckOut {
                constant: constant.value,
                is_splitting: constant.value != 0,
                normalizer: constant.inv().map(|c| c.value),
                compatible,
            };
            Ok((serde_json::to_value(out).unwrap(), true))
        }
        Command::Count { ring, f, factors } => {
            let texts: Vec<&str> = [f.as_deref(), factors.as_deref()]
                .into_iter()
                .flatten()
                .collect();
            let r = build_ring(&ring, &texts)?;
            match (f, factors) {
                (Some(f), None) => {
                    let fp = r.parse(&f)?;
                    let n = r.arity() as u64;
                    if fp.degree().unwrap_or(0) <= n {
                        let rep = check_pointcount_congruence(&fp, point_budget)?;
                        Ok((serde_json::to_value(rep).unwrap(), true))
                    } else {
                        let count =
                            enumerate_points(std::slice::from_ref(&fp), point_budget)?.len();
                        Ok((json!({ "count": count }), true))
                    }
                }
                (None, Some(text)) => {
                    let factors = r.parse_list(&text)?;
                    let rep = check_factored_congruence(&factors, point_budget)?;
                    Ok((serde_json::to_value(rep).unwrap(), true))
                }
                _ => Err(Error::Parse("pass exactly one of --f / --factors".into())),
            }
        }
        Command::Gvd { ring, ideal, ell, f } => {
            let texts: Vec<&str> = [Some(ideal.as_str()), f.as_deref(), Some(ell.as_str())]
                .into_iter()
                .flatten()
                .collect();
            let r = build_ring(&ring, &texts)?;
            let ell_idx = (0..r.arity())
                .find(|&i| r.var_name(i) == ell)
                .ok_or_else(|| Error::Parse(format!("unknown variable `{ell}`")))?;
            let i = Ideal::parse(&r, &ideal)?;
            let (data, split_report) = match f {
                Some(ftext) => {
                    let fp = r.parse(&ftext)?;
                    let (d, rep) = gvd_split_consistency(&fp, ell_idx, &i, compat_budget)?;
                    (d, Some(rep))
                }
                None => (compute_gvd(&i, ell_idx)?, None),
            };
            data.verify_set_identities(point_budget)?;
            let identity = verify_class_identity(&data, point_budget)?;
            let ok = identity.ok;
            Ok((
                json!({
                    "x": ideal_json(&data.x_ideal)?,
                    "limit": ideal_json(&data.limit_ideal)?,
                    "pi": ideal_json(&data.pi)?,
                    "lambda": ideal_json(&data.lambda)?,
                    "lambda_prime": ideal_json(&data.lambda_prime)?,
                    "counts": identity,
                    "split_report": split_report,
                }),
                ok,
            ))
        }
        Command::Groebner { json: payload } => {
            let job: serde_json::Value = serde_json::from_str(&payload)
                .map_err(|e| Error::Parse(format!("bad JSON job: {e}")))?;
            let ring_spec = &job["ring"];
            let p = ring_spec["p"]
                .as_u64()
                .ok_or_else(|| Error::Parse("ring.p must be a prime".into()))?;
            let n = ring_spec["n"]
                .as_u64()
                .ok_or_else(|| Error::Parse("ring.n must be an integer".into()))?
                as usize;
            let scheme = match ring_spec["scheme"].as_str().unwrap_or("x") {
                "x" => VarScheme::X,
                "hl" => VarScheme::HL,
                "c" => VarScheme::C,
                other => return Err(Error::Parse(format!("unknown scheme `{other}`"))),
            };
            let ring = Ring::with_scheme(Domain::Fp(p), n, scheme)?;
            let tiers: Vec<Vec<i128>> = job["order"]["tiers"]
                .as_array()
                .unwrap_or(&Vec::new())
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Parse("order.tiers rows must be arrays".into()))?
                        .iter()
                        .map(|v| {
                            v.as_i64()
                                .map(i128::from)
                                .ok_or_else(|| Error::Parse("weights must be integers".into()))
                        })
                        .collect()
                })
                .collect::<Result<_, Error>>()?;
            let lex: Option<Vec<usize>> = match &job["order"]["lex"] {
                serde_json::Value::Null => None,
                serde_json::Value::Array(a) => Some(
                    a.iter()
                        .map(|v| {
                            v.as_u64().map(|x| x as usize).ok_or_else(|| {
                                Error::Parse("lex permutation must be integers".into())
                            })
                        })
                        .collect::<Result<_, Error>>()?,
                ),
                _ => return Err(Error::Parse("order.lex must be an array or null".into())),
            };
            let order = if tiers.is_empty() && lex.is_none() {
                WeightOrder::graded_lex(n)
            } else {
                WeightOrder::new(n, tiers, lex)?
            };
            let gens: Vec<Poly> = job["generators"]
                .as_array()
                .ok_or_else(|| Error::Parse("generators must be an array".into()))?
                .iter()
                .map(|v| {
                    let s = v
                        .as_str()
                        .ok_or_else(|| Error::Parse("generators must be strings".into()))?;
                    ring.parse(s)
                })
                .collect::<Result<_, Error>>()?;
            let ideal = Ideal::new(ring, gens)?;
            let gb = ideal.groebner_basis(&order)?;
            let init = ideal.initial_ideal(&order)?;
            Ok((
                json!({
                    "reduced_basis": polys_json(&gb),
                    "initial_ideal": ideal_json(&init)?,
                }),
                true,
            ))
        }
        Command::Poset {
            ring,
            f,
            seeds,
            factor,
            irreducible,
            dot,
        } => {
            let texts: Vec<&str> = [Some(f.as_str()), Some(seeds.as_str())]
                .into_iter()
                .flatten()
                .collect();
            let r = build_ring(&ring, &texts)?;
            let fp = r.parse(&f)?;
            let seed_ideals: Vec<(Ideal, Option<String>)> = seeds
                .split('|')
                .filter(|s| !s.trim().is_empty())
                .map(|s| Ok((Ideal::parse(&r, s)?, None)))
                .collect::<Result<_, Error>>()?;
            let mut factors = FactorTable::new();
            for rule in &factor {
                let (lhs, rhs) = rule
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("factor rule `{rule}` needs `=`")))?;
                let target = r.parse(lhs.trim())?;
                let parts = r.parse_list(rhs)?;
                factors.insert(&target, parts)?;
            }
            let known = match irreducible {
                Some(text) => {
                    let ideals: Vec<Ideal> = r
                        .parse_list(&text)?
                        .into_iter()
                        .map(|g| Ideal::new(r.clone(), vec![g]))
                        .collect::<Result<_, Error>>()?;
                    KnownIrreducible::new(&ideals)?
                }
                None => KnownIrreducible::new(&[])?,
            };
            let monomial = MonomialComponents;
            let poset = closure_algorithm(
                &fp,
                seed_ideals,
                &[&monomial, &factors, &known],
                CompatMode::Auto,
                compat_budget,
            )?;
            if dot {
                return Ok((json!({ "dot": poset.to_dot() }), true));
            }
            let map_report = poset.check_poset_map()?;
            let members: Vec<serde_json::Value> = poset
                .members()
                .iter()
                .map(|m| {
                    Ok(json!({
                        "ideal": ideal_json(&m.ideal)?,
                        "degeneration": ideal_json(&m.degen)?,
                        "irreducible": m.irreducible,
                        "tag": m.tag,
                    }))
                })
                .collect::<Result<_, Error>>()?;
            let hasse: Vec<(usize, usize)> = poset.order_poset().covers();
            let ok = map_report.order_preserving && map_report.surjective && map_report.criterion;
            Ok((
                json!({
                    "members": members,
                    "hasse": hasse,
                    "pi_map": map_report,
                }),
                ok,
            ))
        }
        Command::Schubert { n, p, perm } => {
            let ring = matrix_ring_fp(p, n, n)?;
            let order = antidiagonal_weight(n, n);
            match perm {
                Some(text) => {
                    let pi = Permutation::parse_compact(&text, n)?;
                    let ideal = fulton_generators(&pi, &ring)?;
                    let gb = ideal.groebner_basis(&order)?;
                    let init = ideal.initial_ideal(&order)?;
                    let lead_terms: Vec<Poly> = ideal
                        .generators()
                        .iter()
                        .map(|g| order.leading_term(g))
                        .collect::<Result<_, Error>>()?;
                    let by_gens = Ideal::new(ring.clone(), lead_terms)?;
                    let is_gb = by_gens == init;
                    Ok((
                        json!({
                            "permutation": pi.to_string_compact(),
                            "length": pi.length(),
                            "essential_set": pi.essential_set(),
                            "fulton_generators": polys_json(ideal.generators()),
                            "reduced_basis": polys_json(&gb),
                            "antidiagonal_initial_ideal": ideal_json(&init)?,
                            "generators_form_groebner_basis": is_gb,
                        }),
                        is_gb,
                    ))
                }
                None => {
                    let poset =
                        generate_matrix_schuberts(n, p, CompatMode::Auto, compat_budget)?;
                    let members: Vec<serde_json::Value> = poset
                        .members()
                        .iter()
                        .map(|m| {
                            Ok(json!({
                                "permutation": m.tag,
                                "ideal": ideal_json(&m.ideal)?,
                                "antidiagonal_initial_ideal": ideal_json(&m.degen)?,
                            }))
                        })
                        .collect::<Result<_, Error>>()?;
                    Ok((json!({ "members": members }), true))
                }
            }
        }
        Command::Kl { n, word, w, p } => {
            let entries: Vec<usize> = word
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad word entry `{s}`: {e}")))
                })
                .collect::<Result<_, Error>>()?;
            let q = ReducedWord::new(entries, n)?;
            let m = bott_samelson_matrix(&q);
            let matrix: Vec<Vec<String>> = m
                .iter()
                .map(|row| row.iter().map(|e| e.to_string()).collect())
                .collect();
            let minors: Vec<String> = (1..n)
                .map(|i| generalized_minor(i, &m).map(|g| g.to_string()))
                .collect::<Result<_, Error>>()?;
            let f = kl_splitting_poly(&q)?;
            let mut out = json!({
                "target": q.target().to_string_compact(),
                "matrix": matrix,
                "minors": minors,
                "f": f.to_string(),
                "lex_initial_is_product_of_variables": true,
            });
            let mut ok = true;
            if let Some(wtext) = w {
                let p = p.ok_or_else(|| Error::Parse("--w requires --p".into()))?;
                let wp = Permutation::parse_compact(&wtext, n)?;
                let ideal = kl_ideal(&q, &wp, p)?;
                let cring = q.coord_ring_fp(p)?;
                let lex = WeightOrder::lex(q.len());
                let init = ideal.initial_ideal(&lex)?;
                let sr = subword_complex(&q, &wp, &cring)?;
                let matches = init == sr.to_ideal();
                ok = matches;
                out["variety"] = json!({
                    "w": wp.to_string_compact(),
                    "ideal": ideal_json(&ideal)?,
                    "lex_initial_ideal": ideal_json(&init)?,
                    "subword_stanley_reisner": sr
                        .generators()
                        .iter()
                        .map(|m| cring.monomial(m.exps().to_vec()).to_string())
                        .collect::<Vec<_>>(),
                    "initial_matches_subword_complex": matches,
                });
            }
            Ok((out, ok))
        }
        Command::Reproduce { id, p } => {
            if id == "all" {
                let mut reports = Vec::new();
                let mut ok = true;
                for c in CRITERIA {
                    match run_criterion(c, p) {
                        Ok(rep) => {
                            eprintln!("{}: PASS — {}", rep.id, rep.detail);
                            reports.push(serde_json::to_value(rep).unwrap());
                        }
                        Err(e) => {
                            eprintln!("{c}: FAIL — {e}");
                            reports.push(json!({ "id": c, "pass": false, "detail": e.to_string() }));
                            ok = false;
                        }
                    }
                }
                return Ok((json!({ "criteria": reports }), ok));
            }
            match run_criterion(&id, p) {
                Ok(rep) => {
                    let val = serde_json::to_value(&rep).unwrap();
                    Ok((val, rep.pass))
                }
                Err(e) => Ok((
                    json!({ "id": id, "pass": false, "detail": e.to_string() }),
                    false,
                )),
            }
        }
        Command::Fixtures => Ok((json!({ "fixtures": CRITERIA }), true)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((value, ok)) => {
            println!("{}", serde_json::to_string_pretty(&value).unwrap());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::NotPrime(_) | Error::ArityMismatch(_, _) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}
