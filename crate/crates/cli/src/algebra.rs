use combalg::groebner::{
    buchberger_bounded, classify_reduction, is_groebner_basis, reduce_mod_basis, s_polynomial, GroebnerError,
    ReductionKind, SPolynomial,
};
use combalg::poly::parse_polynomial_auto;
use combalg::tame::{
    decompose_map, invert_automorphism, is_univariate_generating_pair, random_tame_automorphism,
    AutomorphismVerdict, Decomposition, RandomTameConfig, UnivariateStep, UnivariateVerdict,
};
use combalg::{PolyMap, Polynomial};
use serde_json::{json, Value};

use crate::fg::field;
use crate::input::{arity, input_error, map2, poly_list, univariate};
use crate::{Class, CliError, Options, Response};

/// The serialized value with its tag field removed.
pub(crate) fn untagged(v: impl serde::Serialize, tag: &str) -> Value {
    let mut v = serde_json::to_value(v).expect("library values serialize");
    if let Value::Object(m) = &mut v {
        m.remove(tag);
    }
    v
}

fn decomposition_lines(d: &Decomposition) -> Vec<String> {
    d.elementary_factors().map(|f| f.to_string()).collect()
}

fn groebner(gens: &[Polynomial], opts: &Options) -> Option<Vec<Polynomial>> {
    match buchberger_bounded(gens, opts.budget) {
        Ok(b) => Some(b),
        Err(GroebnerError::BudgetExceeded(_)) => None,
        Err(GroebnerError::ZeroInput) => Some(Vec::new()),
    }
}

fn jacobian_parts(map: &PolyMap) -> Result<(Vec<Vec<Polynomial>>, Polynomial), CliError> {
    let det = map.jacobian_det().map_err(input_error)?;
    Ok((map.jacobian(), det))
}

pub fn execute(group: &str, op: &str, args: &[String], opts: &Options) -> Result<Response, CliError> {
    match (group, op) {
        ("poly", "parse") => {
            arity(args, 1, "a polynomial")?;
            let p = parse_polynomial_auto(&args[0]).map_err(|e| CliError::Parse {
                arg: 0,
                text: args[0].clone(),
                pos: e.pos,
                message: e.message,
            })?;
            let lt = p.leading_term().ok().map(|(c, m)| Polynomial::term(m, c));
            Ok(Response::new(
                "parsed",
                Class::Positive,
                json!({
                    "canonical": p,
                    "nvars": p.nvars(),
                    "degree": p.degree(),
                    "terms": p.num_terms(),
                    "leading_term": lt,
                }),
            )
            .line(p.to_string()))
        }
        ("poly", "jacobian") => {
            let map = map2(args)?;
            let (matrix, det) = jacobian_parts(&map)?;
            let unit = !det.is_zero() && det.is_constant();
            let resp = Response::new(
                if unit { "unit_jacobian" } else { "non_unit_jacobian" },
                if unit { Class::Positive } else { Class::Negative },
                json!({ "matrix": matrix, "determinant": det }),
            );
            Ok(resp.line(format!("det = {det}")))
        }
        ("gb", "basis") | ("gb", "contains-one") => {
            let gens = poly_list(args)?;
            let Some(basis) = groebner(&gens, opts) else {
                return Ok(Response::new(
                    "budget_exhausted",
                    Class::Inconclusive,
                    json!({ "budget": opts.budget }),
                ));
            };
            let lines: Vec<String> = basis.iter().map(|b| b.to_string()).collect();
            let unit = basis.len() == 1 && basis[0].is_constant();
            let (verdict, class) = match (op, unit) {
                ("basis", _) => ("groebner_basis", Class::Positive),
                (_, true) => ("contains_one", Class::Positive),
                (_, false) => ("proper_ideal", Class::Negative),
            };
            let mut resp = Response::new(verdict, class, json!({ "basis": basis }));
            resp.summary = lines;
            Ok(resp)
        }
        ("gb", "spoly") => {
            let gens = poly_list(args)?;
            if gens.len() != 2 {
                return Err(CliError::Usage("expected two polynomials".into()));
            }
            let s = s_polynomial(&gens[0], &gens[1]).map_err(input_error)?;
            let kind = classify_reduction(&gens[0], &gens[1]).map_err(input_error)?;
            let verdict = match kind {
                ReductionKind::Regular => "regular",
                ReductionKind::Singular => "singular",
            };
            Ok(Response::new(verdict, Class::Positive, json!({ "spoly": s, "kind": kind }))
                .line(format!("S = {}", s.value)))
        }
        ("tame", "decompose") | ("tame", "invert") => {
            let map = map2(args)?;
            match decompose_map(&map).map_err(input_error)? {
                AutomorphismVerdict::Automorphism { decomposition } if op == "decompose" => {
                    let mut resp = Response::new(
                        "automorphism",
                        Class::Positive,
                        json!({ "decomposition": decomposition, "factors": decomposition_lines(&decomposition) }),
                    );
                    resp.summary = decomposition_lines(&decomposition);
                    Ok(resp)
                }
                AutomorphismVerdict::Automorphism { decomposition } => {
                    let inverse = invert_automorphism(&decomposition).map_err(input_error)?;
                    Ok(Response::new(
                        "inverted",
                        Class::Positive,
                        json!({ "inverse": inverse, "decomposition": decomposition }),
                    )
                    .line(format!("inverse: {inverse}")))
                }
                v @ AutomorphismVerdict::NotAutomorphism { .. } => {
                    let AutomorphismVerdict::NotAutomorphism { reason, stuck_at } = &v else { unreachable!() };
                    let line = format!("{reason} at {stuck_at}");
                    Ok(Response::new("not_automorphism", Class::Negative, untagged(&v, "verdict")).line(line))
                }
            }
        }
        ("tame", "univar-pair") => {
            arity(args, 2, "two univariate polynomials")?;
            let (u, v) = (univariate(args, 0)?, univariate(args, 1)?);
            let verdict = is_univariate_generating_pair(&u, &v);
            let (name, class) = if verdict.is_generating() {
                ("generating", Class::Positive)
            } else {
                ("not_generating", Class::Negative)
            };
            let steps = verdict.trace().len();
            Ok(Response::new(name, class, untagged(&verdict, "verdict")).line(format!("{steps} reduction steps")))
        }
        ("tame", "random") => {
            let mut cfg = RandomTameConfig {
                degree_cap: opts.deg.unwrap_or(64),
                ..RandomTameConfig::default()
            };
            match args {
                [] => {}
                [n] => {
                    cfg.factors = n
                        .parse()
                        .map_err(|_| CliError::Usage(format!("factor count must be a number, got {n}")))?
                }
                _ => return Err(CliError::Usage("expected at most one input (the number of factors)".into())),
            }
            let (map, decomposition) = random_tame_automorphism(opts.seed.unwrap_or(0), &cfg);
            Ok(Response::new(
                "generated",
                Class::Positive,
                json!({ "map": map, "decomposition": decomposition }),
            )
            .line(map.to_string()))
        }
        _ => Err(CliError::Usage(format!("unknown operation {group} {op}"))),
    }
}

fn same(a: &Polynomial, b: &Polynomial) -> bool {
    a.with_nvars(a.nvars().max(b.nvars())) == b.with_nvars(a.nvars().max(b.nvars()))
}

pub fn check(group: &str, op: &str, args: &[String], _opts: &Options, verdict: &str, cert: &Value) -> Result<Vec<String>, String> {
    let usage = |e: CliError| e.to_string();
    let mut done = Vec::new();
    match (group, op, verdict) {
        ("poly", "parse", _) => {
            let canonical: Polynomial = field(cert, "canonical")?;
            let p = parse_polynomial_auto(&args[0]).map_err(|e| e.to_string())?;
            if !same(&canonical, &p) {
                return Err("canonical form parses to a different polynomial".into());
            }
            done.push("canonical form parses back to the input".into());
        }
        ("poly", "jacobian", _) => {
            let map = map2(args).map_err(usage)?;
            let matrix: Vec<Vec<Polynomial>> = field(cert, "matrix")?;
            let det: Polynomial = field(cert, "determinant")?;
            for (i, row) in matrix.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    if !same(e, &map.images()[i].partial_derivative(j)) {
                        return Err(format!("matrix entry ({}, {}) is not the partial derivative", i + 1, j + 1));
                    }
                }
            }
            let expect = &(&matrix[0][0] * &matrix[1][1]) - &(&matrix[0][1] * &matrix[1][0]);
            if !same(&expect, &det) {
                return Err("determinant does not match the matrix".into());
            }
            done.push("matrix entries are the partial derivatives and the determinant expands correctly".into());
        }
        ("gb", "basis" | "contains-one", "groebner_basis" | "contains_one" | "proper_ideal") => {
            let gens = poly_list(args).map_err(usage)?;
            let basis: Vec<Polynomial> = field(cert, "basis")?;
            let n = gens.first().map_or(2, Polynomial::nvars);
            let basis: Vec<Polynomial> = basis.iter().map(|b| b.with_nvars(n)).collect();
            if !is_groebner_basis(&basis) {
                return Err("some S-polynomial of the basis does not reduce to 0".into());
            }
            if let Some(g) = gens.iter().find(|g| !reduce_mod_basis(g, &basis).is_zero()) {
                return Err(format!("generator {g} does not reduce to 0 modulo the basis"));
            }
            done.push("basis is a Gröbner basis and every generator reduces to 0".into());
            let has_unit = basis.iter().any(Polynomial::is_constant);
            match verdict {
                "contains_one" if !has_unit => return Err("basis has no constant".into()),
                "proper_ideal" if has_unit => return Err("basis contains a constant".into()),
                "proper_ideal" => {
                    done.push("Gröbner basis of an ideal containing the generators has no constant".into())
                }
                _ => {}
            }
        }
        ("gb", "spoly", _) => {
            let gens = poly_list(args).map_err(usage)?;
            let s: SPolynomial = field(cert, "spoly")?;
            let (p, q) = (&gens[0], &gens[1]);
            let up = &s.u * p;
            let vq = &s.v * q;
            if !same(&(&up - &vq), &s.value) {
                return Err("value is not u*p - v*q".into());
            }
            if up.lt() != vq.lt() {
                return Err("leading terms of u*p and v*q do not cancel".into());
            }
            let (mp, mq) = (p.lm().unwrap(), q.lm().unwrap());
            let regular = mp.divides(mq) || mq.divides(mp);
            if regular != (verdict == "regular") {
                return Err("regular/singular classification disagrees with divisibility".into());
            }
            done.push("S = u*p - v*q with cancelling leading terms".into());
        }
        ("tame", "decompose" | "invert", "automorphism" | "inverted") => {
            let map = map2(args).map_err(usage)?;
            let d: Decomposition = field(cert, "decomposition")?;
            d.validate().map_err(|e| e.to_string())?;
            if d.compose() != map {
                return Err("factors do not recompose to the map".into());
            }
            done.push("factors recompose to the map".into());
            if verdict == "inverted" {
                let inv: PolyMap = field(cert, "inverse")?;
                let id = PolyMap::identity(2);
                let (a, b) = (map.compose(&inv), inv.compose(&map));
                if a.as_ref() != Ok(&id) || b.as_ref() != Ok(&id) {
                    return Err("inverse does not compose to the identity".into());
                }
                done.push("map and inverse compose to the identity both ways".into());
            }
        }
        ("tame", "univar-pair", _) => {
            let (u, v) = (univariate(args, 0).map_err(usage)?, univariate(args, 1).map_err(usage)?);
            let trace: Vec<UnivariateStep> = field(cert, "trace")?;
            let mut pair = [u, v];
            for (k, s) in trace.iter().enumerate() {
                let other = 1 - s.reduced;
                let next = &pair[s.reduced] - &pair[other].pow(s.power).scale(&s.mu);
                if next != s.result {
                    return Err(format!("step {} does not produce its recorded result", k + 1));
                }
                pair[s.reduced] = next;
            }
            done.push("reduction trace replays".into());
            if verdict == "generating" {
                let i: usize = field(cert, "linear_index")?;
                if pair.get(i).and_then(Polynomial::degree) != Some(1) {
                    return Err("trace does not end at a degree-one polynomial".into());
                }
                done.push("trace ends at a degree-one polynomial".into());
            } else {
                let _: UnivariateVerdict = serde_json::from_value({
                    let mut c = cert.clone();
                    c["verdict"] = json!("not_generating");
                    c
                })
                .map_err(|e| e.to_string())?;
            }
        }
        ("tame", "random", _) => {
            let map: PolyMap = field(cert, "map")?;
            let d: Decomposition = field(cert, "decomposition")?;
            if d.compose() != map {
                return Err("factors do not recompose to the map".into());
            }
            if map.is_jacobian_unit() != Ok(true) {
                return Err("map does not have a unit Jacobian".into());
            }
            done.push("factors recompose to the map, which has a unit Jacobian".into());
        }
        _ => done.push(format!("no certificate to replay for verdict {verdict}")),
    }
    Ok(done)
}
