use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use oscalg::classifier::classify as classify_seq;
use oscalg::coeffseq::FamilyId;
use oscalg::families::{orthonormality_check, psi_values};
use oscalg::matrixreal::closure_rank_oracle;
use oscalg::moments::{moments_from_jacobi, verify_moment_relation, Reading};
use oscalg::multiboson::{example_ah, finite_condition_check, SystemSpec};
use oscalg::scalar::{parse_rat, rat_int};
use oscalg::shiftalg::{check_ccr, check_gdeformed, gauge_generators, lie_closure, mj_ladder};
use oscalg::{CoeffSeq, Error, Rat};

use crate::input::SeqArgs;
use crate::{ClosureLimits, ReadingArg, What};

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_DISAGREE: u8 = 3;

pub struct Report {
    command: &'static str,
    input: Value,
    body: Value,
    code: u8,
}

pub struct Failure {
    command: &'static str,
    message: String,
}

pub type Outcome = Result<Report, Failure>;

fn fail(command: &'static str) -> impl Fn(Error) -> Failure {
    move |e| Failure {
        command,
        message: e.to_string(),
    }
}

/// Writes to stdout, tolerating a closed pipe.
fn print_out(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

pub fn emit(outcome: Outcome) -> ExitCode {
    match outcome {
        Ok(r) => {
            let canonical = serde_json::to_string(&r.input).expect("json");
            let digest = hex::encode(Sha256::digest(format!("{}\n{canonical}", r.command)));
            let mut out = match r.body {
                Value::Object(m) => m,
                other => {
                    let mut m = Map::new();
                    m.insert("result".into(), other);
                    m
                }
            };
            out.insert("command".into(), json!(r.command));
            out.insert("input".into(), r.input);
            out.insert("input_digest".into(), json!(digest));
            print_out(&serde_json::to_string_pretty(&Value::Object(out)).expect("json"));
            ExitCode::from(r.code)
        }
        Err(f) => {
            eprintln!("oscalg {}: {}", f.command, f.message);
            print_out(&json!({"command": f.command, "error": f.message}).to_string());
            ExitCode::from(EXIT_INPUT)
        }
    }
}

pub fn classify(args: &SeqArgs, window: usize, jmax: usize) -> Outcome {
    const CMD: &str = "classify";
    let (seq, spec) = args.load().map_err(fail(CMD))?;
    let c = classify_seq(&seq, window, jmax).map_err(fail(CMD))?;
    Ok(Report {
        command: CMD,
        input: json!({"seq": spec, "window": window, "jmax": jmax}),
        body: json!({"classification": c.to_json()}),
        code: 0,
    })
}

pub fn closure(args: &SeqArgs, limits: ClosureLimits, oracle: bool, dump: bool) -> Outcome {
    const CMD: &str = "closure";
    let (seq, spec) = args.load().map_err(fail(CMD))?;
    let gens = gauge_generators(&seq).map_err(fail(CMD))?;
    let basis = lie_closure(&gens.as_vec(), limits.max_depth, limits.max_dim);
    let mut symbolic = basis.to_json();
    if !dump {
        symbolic.as_object_mut().unwrap().remove("elements");
    }
    if gens.head_len > 0 {
        // The rational description starts after the head; rows it misses
        // are only visible to the oracle run with `--margin 0`.
        symbolic["tail_only"] = json!(true);
    }
    let mut body = json!({"symbolic": symbolic});
    if gens.head_len > 0 {
        body["head_len"] = json!(gens.head_len);
    }
    let mut code = 0;
    if oracle {
        let v = closure_rank_oracle(&seq, limits.truncation, limits.max_depth, limits.max_dim, limits.margin)
            .map_err(fail(CMD))?;
        let agree = !v.inconclusive && v.stabilized == basis.stabilized && v.dim_estimate == basis.dim;
        if !v.inconclusive && !agree {
            code = EXIT_DISAGREE;
        }
        body["oracle"] = v.to_json();
        body["agree"] = if v.inconclusive { Value::Null } else { json!(agree) };
    }
    Ok(Report {
        command: CMD,
        input: json!({
            "seq": spec,
            "max_depth": limits.max_depth,
            "max_dim": limits.max_dim,
            "oracle": oracle,
            "truncation": limits.truncation,
            "margin": limits.margin,
        }),
        body,
        code,
    })
}

fn readings(r: ReadingArg) -> Vec<Reading> {
    match r {
        ReadingArg::Literal => vec![Reading::Literal],
        ReadingArg::Shifted => vec![Reading::Shifted],
        ReadingArg::Both => vec![Reading::Literal, Reading::Shifted],
    }
}

fn reading_name(r: ReadingArg) -> &'static str {
    match r {
        ReadingArg::Literal => "literal",
        ReadingArg::Shifted => "shifted",
        ReadingArg::Both => "both",
    }
}

fn moment_reports(seq: &CoeffSeq, nmax: usize, reading: ReadingArg) -> oscalg::Result<(Value, bool)> {
    let mut reports = Vec::new();
    let mut any = false;
    for r in readings(reading) {
        let rep = verify_moment_relation(seq, nmax, r)?;
        any |= rep.all_match();
        reports.push(rep.to_json());
    }
    let matching: Vec<Value> = reports
        .iter()
        .filter(|r| r["all_match"] == json!(true))
        .map(|r| r["reading"].clone())
        .collect();
    Ok((json!({"reports": reports, "matching_readings": matching}), any))
}

pub fn verify(args: &SeqArgs, what: What, g: Option<&str>, nmax: usize, jmax: usize, reading: ReadingArg) -> Outcome {
    const CMD: &str = "verify";
    let (seq, spec) = args.load().map_err(fail(CMD))?;
    let mut input = json!({"seq": spec});
    let (body, pass) = match what {
        What::Ccr => {
            input["what"] = json!("ccr");
            let r = check_ccr(&seq).map_err(fail(CMD))?;
            (r.to_json(), r.passed())
        }
        What::Gdeformed => {
            input["what"] = json!("gdeformed");
            let text = g.ok_or_else(|| fail(CMD)(Error::InvalidArgument("--G is required".into())))?;
            let big_g: Rat = parse_rat(text).map_err(fail(CMD))?;
            input["G"] = json!(big_g.to_string());
            let r = check_gdeformed(&seq, &big_g).map_err(fail(CMD))?;
            (r.to_json(), r.passed())
        }
        What::Moments => {
            input["what"] = json!("moments");
            input["nmax"] = json!(nmax);
            input["reading"] = json!(reading_name(reading));
            let (mut v, any) = moment_reports(&seq, nmax, reading).map_err(fail(CMD))?;
            v["pass"] = json!(any);
            (v, any)
        }
        What::Mj => {
            input["what"] = json!("mj");
            input["jmax"] = json!(jmax);
            let l = mj_ladder(&seq, jmax).map_err(fail(CMD))?;
            let v = json!({
                "pass": l.matches(),
                "checked_upto": l.checked_upto,
                "mismatch": l.mismatch.map(|(j, n)| json!({"j": j, "n": n})),
                "ladder": l.ops.iter().map(|o| o.dump()).collect::<Vec<_>>(),
            });
            (v, l.matches())
        }
    };
    Ok(Report {
        command: CMD,
        input,
        body,
        code: if pass { 0 } else { EXIT_FAIL },
    })
}

pub fn family(name: &str, alpha: Option<&str>, nmax: usize, points: usize, xs: &[f64]) -> Outcome {
    const CMD: &str = "family";
    let alpha = alpha.map(parse_rat).transpose().map_err(fail(CMD))?;
    let fam = FamilyId::from_name(name, alpha).map_err(fail(CMD))?;
    let report = orthonormality_check(&fam, nmax, points).map_err(fail(CMD))?;
    let seq = CoeffSeq::Builtin(fam.clone());
    let samples = xs
        .iter()
        .map(|&x| psi_values(&seq, nmax, x).map(|psi| json!({"x": x, "psi": psi})))
        .collect::<oscalg::Result<Vec<_>>>()
        .map_err(fail(CMD))?;
    let mut body = json!({
        "max_deviation": report.max_deviation,
        "gram": report.gram,
        "samples": samples,
    });
    if let Some(r) = report.quoted_norm_ratios {
        body["quoted_norm_ratios"] = json!(r);
    }
    Ok(Report {
        command: CMD,
        input: json!({
            "seq": serde_json::to_value(seq.to_spec()).expect("json"),
            "nmax": nmax,
            "points": points,
            "x": xs,
        }),
        body,
        code: 0,
    })
}

pub fn moments(args: &SeqArgs, nmax: usize, reading: ReadingArg) -> Outcome {
    const CMD: &str = "moments";
    let (seq, spec) = args.load().map_err(fail(CMD))?;
    let mu = moments_from_jacobi(&seq, nmax + 1, nmax + 3).map_err(fail(CMD))?;
    let (mut body, _) = moment_reports(&seq, nmax, reading).map_err(fail(CMD))?;
    body["mu_even"] = json!(mu.mu.iter().map(|m| m.to_string()).collect::<Vec<_>>());
    Ok(Report {
        command: CMD,
        input: json!({"seq": spec, "nmax": nmax, "reading": reading_name(reading)}),
        body,
        code: 0,
    })
}

const DEFAULT_LENGTH: usize = 24;

pub fn multiboson(
    spec_path: Option<&Path>,
    example: Option<&str>,
    lambda_rest: &[String],
    length: Option<usize>,
    closure: bool,
) -> Outcome {
    const CMD: &str = "multiboson";
    let err = fail(CMD);
    let (sys, mut samples, spec_len, input) = match (spec_path, example) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| err(Error::InvalidArgument(format!("{}: {e}", path.display()))))?;
            let spec: SystemSpec =
                serde_json::from_str(&text).map_err(|e| err(Error::InvalidArgument(format!("spec: {e}"))))?;
            let sys = spec.build().map_err(&err)?;
            let input = serde_json::to_value(&spec).expect("json");
            (sys, spec.samples(), spec.length, input)
        }
        (None, Some(triple)) => {
            let parts: Vec<&str> = triple.split(',').collect();
            if parts.len() != 3 {
                return Err(err(Error::InvalidArgument("--example-ah expects k0,k1,c".into())));
            }
            let int = |s: &str| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad integer {s:?}")))
            };
            let (k0, k1) = (int(parts[0]).map_err(&err)?, int(parts[1]).map_err(&err)?);
            let c = parse_rat(parts[2]).map_err(&err)?;
            let sys = example_ah(k0, k1, c.clone(), 0.0).map_err(&err)?;
            // y = λ_1/k0 - k1 λ_0 then avoids the poles at 0..k1-1.
            let default = vec![vec![rat_int(-k0)]];
            let input = json!({"example_ah": [k0, k1, c.to_string()]});
            let samples = if lambda_rest.is_empty() { default } else { Vec::new() };
            (sys, samples, None, input)
        }
        (None, None) => {
            return Err(err(Error::InvalidArgument("give --spec or --example-ah".into())));
        }
    };
    for l in lambda_rest {
        let vals = l.split(',').map(parse_rat).collect::<oscalg::Result<Vec<_>>>().map_err(&err)?;
        samples.push(vals);
    }
    let len = length.or(spec_len).unwrap_or(DEFAULT_LENGTH);
    let check = finite_condition_check(&sys, &samples, len).map_err(&err)?;
    let mut body = check.to_json();
    if closure {
        let dims = samples
            .iter()
            .map(|rest| {
                let g = sys.reduced_ratfun(rest)?;
                let gens = gauge_generators(&CoeffSeq::closed_form(g))?;
                let b = lie_closure(&gens.as_vec(), 8, 16);
                Ok(json!({"dim": b.dim, "stabilized": b.stabilized}))
            })
            .collect::<oscalg::Result<Vec<_>>>()
            .map_err(&err)?;
        body["closure"] = json!(dims);
    }
    let mut input = input;
    input["length"] = json!(len);
    input["samples"] = json!(samples
        .iter()
        .map(|s| s.iter().map(|r| r.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>());
    input["closure"] = json!(closure);
    Ok(Report {
        command: CMD,
        input,
        body,
        code: 0,
    })
}
