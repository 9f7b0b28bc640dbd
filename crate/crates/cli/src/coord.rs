use combalg::coordinate::{
    apply_sequence, complete_to_basis, conjecture_g_search, is_coordinate_with_budget, reduce_to_x1, replay_steps,
    unimodular_gradient, verify_certificate, CoordCertificate, CoordError, ConjectureGVerdict, CoordinateVerdict,
    DEFAULT_CONJG_BUDGET, DEFAULT_NODE_BUDGET,
};
use combalg::groebner::{buchberger, is_groebner_basis, reduce_mod_basis, ReductionKind, ReductionStep};
use combalg::retract::{
    default_search_degree, find_fixed_polynomials, jc_harness, normal_form_retraction, retract_witness_search,
    subalgebra_coefficients, verify_retraction, verify_witness, FixedSubspace, JcStatus, RetractError,
    RetractImage, RetractVerdict, Retraction, RetractionVerdict, DEFAULT_WITNESS_BUDGET,
};
use combalg::tame::{decompose_automorphism, Decomposition};
use combalg::{PolyMap, Polynomial};
use serde_json::{json, Value};

use crate::algebra::untagged;
use crate::fg::field;
use crate::input::{arity, input_error, map2, poly2};
use crate::{Class, CliError, Options, Response};

fn coord_error(e: CoordError) -> CliError {
    match e {
        CoordError::CertificateFailed(m) => CliError::Internal(m),
        other => input_error(other),
    }
}

fn retract_error(e: RetractError) -> CliError {
    match e {
        RetractError::CertificateFailed(m) => CliError::Internal(m),
        other => input_error(other),
    }
}

/// Verdict for the operations that need `p` to be a coordinate.
fn not_coordinate(e: CoordError) -> Result<Response, CliError> {
    match e {
        CoordError::NotCoordinate(_) | CoordError::GradientNotUnimodular(_) => {
            let reason = e.to_string();
            Ok(Response::new("not_coordinate", Class::Negative, json!({ "reason": reason })).line(reason))
        }
        other => Err(coord_error(other)),
    }
}

fn one_poly(args: &[String]) -> Result<Polynomial, CliError> {
    arity(args, 1, "a polynomial in x, y")?;
    poly2(args, 0)
}

fn retraction_lines(r: &Retraction) -> Vec<String> {
    let image = match &r.image {
        RetractImage::WholeAlgebra => "image: K[x, y]".to_string(),
        RetractImage::Constants => "image: K".to_string(),
        RetractImage::Generated { generator } => format!("image: K[{generator}]"),
        RetractImage::GeneratorNotLocated => "image: proper, generator not located".to_string(),
    };
    vec![format!("map: {}", r.map), image]
}

pub fn execute(group: &str, op: &str, args: &[String], opts: &Options) -> Result<Response, CliError> {
    match (group, op) {
        ("coord", "check") => {
            let p = one_poly(args)?;
            let budget = opts.budget.unwrap_or(DEFAULT_NODE_BUDGET);
            Ok(match is_coordinate_with_budget(&p, budget).map_err(coord_error)? {
                CoordinateVerdict::Coordinate { certificate } => {
                    let line = format!("completion: ({p}, {})", certificate.q);
                    Response::new("coordinate", Class::Positive, json!({ "certificate": certificate })).line(line)
                }
                v @ CoordinateVerdict::NotCoordinate { .. } => {
                    let cert = untagged(&v, "verdict");
                    let reason = cert["reason"].as_str().unwrap_or_default().replace('_', " ");
                    Response::new("not_coordinate", Class::Negative, cert).line(reason)
                }
                CoordinateVerdict::Inconclusive { explored } => {
                    Response::new("inconclusive", Class::Inconclusive, json!({ "explored": explored }))
                        .line(format!("search budget exhausted after {explored} states"))
                }
            })
        }
        ("coord", "complete") => {
            let p = one_poly(args)?;
            match complete_to_basis(&p) {
                Ok(q) => {
                    let det = PolyMap::pair(p.clone(), q.clone())
                        .and_then(|m| m.jacobian_det())
                        .map_err(input_error)?;
                    Ok(Response::new("completed", Class::Positive, json!({ "q": q, "jacobian": det }))
                        .line(format!("({p}, {q}) is an automorphism")))
                }
                Err(e) => not_coordinate(e),
            }
        }
        ("coord", "reduce") => {
            let p = one_poly(args)?;
            match reduce_to_x1(&p) {
                Ok(seq) => {
                    let mut resp = Response::new("reduced", Class::Positive, json!({ "sequence": seq }));
                    resp.summary = seq.elementary_factors().map(|f| f.to_string()).collect();
                    Ok(resp)
                }
                Err(e) => not_coordinate(e),
            }
        }
        ("coord", "conjg") => {
            let p = one_poly(args)?;
            match conjecture_g_search(&p, opts.budget.unwrap_or(DEFAULT_CONJG_BUDGET)) {
                Ok(v @ ConjectureGVerdict::Witness { .. }) => {
                    let ConjectureGVerdict::Witness { steps, singular_steps, .. } = &v else { unreachable!() };
                    let line = format!("{} steps, {singular_steps} singular", steps.len());
                    Ok(Response::new("witness", Class::Positive, untagged(&v, "verdict")).line(line))
                }
                Ok(ConjectureGVerdict::NoneFoundWithinBudget { explored }) => Ok(Response::new(
                    "none_found_within_budget",
                    Class::Inconclusive,
                    json!({ "explored": explored }),
                )
                .line(format!("{explored} states explored"))),
                Err(CoordError::GradientNotUnimodular(m)) => Ok(Response::new(
                    "gradient_not_unimodular",
                    Class::Negative,
                    json!({}),
                )
                .line(format!("gradient of {m} is not unimodular"))),
                Err(e) => Err(coord_error(e)),
            }
        }
        ("coord", "unimodular") => {
            let p = one_poly(args)?;
            let gradient = p.gradient();
            let basis = buchberger(&gradient);
            let unit = unimodular_gradient(&p);
            Ok(Response::new(
                if unit { "unimodular" } else { "not_unimodular" },
                if unit { Class::Positive } else { Class::Negative },
                json!({ "gradient": gradient, "basis": basis }),
            )
            .line(format!("gradient: ({}, {})", gradient[0], gradient[1])))
        }
        ("retract", "verify") => {
            let map = map2(args)?;
            Ok(match verify_retraction(&map).map_err(retract_error)? {
                RetractionVerdict::Retraction { retraction } => {
                    let mut resp = Response::new("retraction", Class::Positive, json!({ "retraction": retraction }));
                    resp.summary = retraction_lines(&retraction);
                    resp
                }
                RetractionVerdict::NotRetraction { squared } => {
                    let line = format!("map composed with itself: {squared}");
                    Response::new("not_retraction", Class::Negative, json!({ "squared": squared })).line(line)
                }
            })
        }
        ("retract", "normal-form") => {
            let q = one_poly(args)?;
            let r = normal_form_retraction(&q).map_err(retract_error)?;
            let mut resp = Response::new("retraction", Class::Positive, json!({ "retraction": r }));
            resp.summary = retraction_lines(&r);
            Ok(resp)
        }
        ("retract", "witness") => {
            let p = one_poly(args)?;
            let d = opts.deg.unwrap_or_else(|| default_search_degree(&p));
            let budget = opts.budget.unwrap_or(DEFAULT_WITNESS_BUDGET);
            Ok(match retract_witness_search(&p, d, budget).map_err(retract_error)? {
                RetractVerdict::Retract { witness, degree } => {
                    let line = format!("p{witness} = x");
                    Response::new("retract", Class::Positive, json!({ "witness": witness, "degree": degree })).line(line)
                }
                v @ RetractVerdict::NoWitnessUpToDegree { .. } => {
                    Response::new("no_witness_up_to_degree", Class::Inconclusive, untagged(&v, "verdict"))
                        .line(format!("no witness of degree <= {d}"))
                }
            })
        }
        ("retract", "fixed") => {
            let map = map2(args)?;
            let d = opts.deg.unwrap_or(2 * map.degree());
            let f = find_fixed_polynomials(&map, d).map_err(retract_error)?;
            let mut resp = Response::new("fixed_subspace", Class::Positive, json!({ "fixed": f }));
            resp.summary = f.basis.iter().map(|b| b.to_string()).collect();
            Ok(resp)
        }
        ("retract", "jc") => {
            let map = map2(args)?;
            let r = jc_harness(&map, opts.deg).map_err(retract_error)?;
            let (verdict, class) = match r.status {
                JcStatus::HypothesisNotMet => ("hypothesis_not_met", Class::Positive),
                JcStatus::NoFixedPolynomial => ("no_fixed_polynomial", Class::Positive),
                JcStatus::Consistent => ("consistent", Class::Positive),
                JcStatus::Inconsistent => ("inconsistent", Class::Negative),
            };
            let line = format!("jacobian: {}", r.jacobian);
            Ok(Response::new(verdict, class, json!({ "report": r })).line(line))
        }
        _ => Err(CliError::Usage(format!("unknown operation {group} {op}"))),
    }
}

fn check_fixed(map: &PolyMap, f: &FixedSubspace) -> Result<(), String> {
    for b in &f.basis {
        if map.apply(b).as_ref() != Ok(b) {
            return Err(format!("{b} is not fixed"));
        }
    }
    let mut lms: Vec<_> = f.basis.iter().filter_map(Polynomial::lm).collect();
    lms.sort();
    lms.dedup();
    if lms.len() != f.basis.len() {
        return Err("basis elements share a leading monomial".into());
    }
    Ok(())
}

fn check_retraction(map: &PolyMap, r: &Retraction) -> Result<(), String> {
    if &r.map != map {
        return Err("certificate describes a different map".into());
    }
    let squared = map.compose(map).map_err(|e| e.to_string())?;
    if &squared != map || r.squared != squared {
        return Err("map is not idempotent".into());
    }
    if let RetractImage::Generated { generator } = &r.image {
        if map.apply(generator).as_ref() != Ok(generator) {
            return Err("generator is not fixed".into());
        }
        for img in map.images() {
            if subalgebra_coefficients(img, generator).is_none() {
                return Err(format!("{img} is not a polynomial in the generator"));
            }
        }
    }
    Ok(())
}

pub fn check(group: &str, op: &str, args: &[String], _opts: &Options, verdict: &str, cert: &Value) -> Result<Vec<String>, String> {
    let usage = |e: CliError| e.to_string();
    let mut done: Vec<String> = Vec::new();
    match (group, op, verdict) {
        ("coord", "check", "coordinate") => {
            let p = poly2(args, 0).map_err(usage)?;
            let c: CoordCertificate = field(cert, "certificate")?;
            verify_certificate(&p, &c).map_err(|e| e.to_string())?;
            done.push("gradient matrix, elementary trace, completion and factor sequence all check".into());
        }
        ("coord", "check", "not_coordinate") if cert["reason"] == "gradient_not_unimodular" => {
            let p = poly2(args, 0).map_err(usage)?;
            let basis = buchberger(&p.gradient());
            if basis.iter().any(Polynomial::is_constant) {
                return Err("gradient ideal contains 1".into());
            }
            done.push("Gröbner basis of the gradient ideal has no constant".into());
        }
        ("coord", "complete", "completed") => {
            let p = poly2(args, 0).map_err(usage)?;
            let q: Polynomial = field(cert, "q")?;
            let v = decompose_automorphism(&p, &q).map_err(|e| e.to_string())?;
            if !v.is_automorphism() {
                return Err(format!("({p}, {q}) does not decompose"));
            }
            done.push("(p, q) decomposes into elementary factors".into());
        }
        ("coord", "reduce", "reduced") => {
            let p = poly2(args, 0).map_err(usage)?;
            let seq: Decomposition = field(cert, "sequence")?;
            let end = apply_sequence(&p, &seq).map_err(|e| e.to_string())?;
            if end != Polynomial::var(2, 0) {
                return Err(format!("sequence takes p to {end}, not x"));
            }
            done.push("factor sequence takes p to x".into());
        }
        ("coord", "conjg", "witness") => {
            let p = poly2(args, 0).map_err(usage)?;
            let steps: Vec<ReductionStep> = field(cert, "steps")?;
            let pairs: Vec<[Polynomial; 2]> = field(cert, "pairs")?;
            let replayed = replay_steps(&p, &steps).map_err(|e| e.to_string())?;
            if replayed != pairs {
                return Err("steps do not replay to the recorded pairs".into());
            }
            let last = replayed.last().unwrap();
            if !last[0].is_one() || !last[1].is_zero() {
                return Err("steps do not end at (1, 0)".into());
            }
            let singular = steps.iter().filter(|s| s.kind() == ReductionKind::Singular).count();
            if singular > 1 || field::<usize>(cert, "singular_steps")? != singular {
                return Err("singular step count is wrong".into());
            }
            done.push(format!("steps replay from the gradient to (1, 0) with {singular} singular"));
        }
        ("coord", "unimodular", _) => {
            let p = poly2(args, 0).map_err(usage)?;
            let basis: Vec<Polynomial> = field(cert, "basis")?;
            if !is_groebner_basis(&basis) || p.gradient().iter().any(|g| !reduce_mod_basis(g, &basis).is_zero()) {
                return Err("basis is not a Gröbner basis containing the gradient".into());
            }
            let unit = basis.iter().any(Polynomial::is_constant);
            if unit != (verdict == "unimodular") {
                return Err("basis disagrees with the verdict".into());
            }
            done.push("Gröbner basis of an ideal containing the gradient decides the verdict".into());
        }
        ("retract", "verify", "retraction") => {
            let map = map2(args).map_err(usage)?;
            check_retraction(&map, &field(cert, "retraction")?)?;
            done.push("map is idempotent and its image generator is fixed".into());
        }
        ("retract", "verify", "not_retraction") => {
            let map = map2(args).map_err(usage)?;
            let squared: PolyMap = field(cert, "squared")?;
            if map.compose(&map).as_ref() != Ok(&squared) || squared == map {
                return Err("recorded square is wrong or equals the map".into());
            }
            done.push("map composed with itself differs from the map".into());
        }
        ("retract", "normal-form", _) => {
            let r: Retraction = field(cert, "retraction")?;
            check_retraction(&r.map, &r)?;
            done.push("map is idempotent and its image generator is fixed".into());
        }
        ("retract", "witness", "retract") => {
            let p = poly2(args, 0).map_err(usage)?;
            let w: PolyMap = field(cert, "witness")?;
            if !verify_witness(&p, &w) {
                return Err("witness does not take p to x".into());
            }
            done.push("p(witness) = x by substitution".into());
        }
        ("retract", "fixed", _) => {
            let map = map2(args).map_err(usage)?;
            check_fixed(&map, &field(cert, "fixed")?)?;
            done.push("every basis element is fixed, leading monomials distinct".into());
        }
        ("retract", "jc", _) => {
            let map = map2(args).map_err(usage)?;
            let report = cert.get("report").ok_or("certificate has no `report`")?;
            check_fixed(&map, &field(report, "fixed")?)?;
            let jacobian: Polynomial = field(report, "jacobian")?;
            if map.jacobian_det().as_ref() != Ok(&jacobian) {
                return Err("recorded Jacobian is wrong".into());
            }
            if let Some(d) = report["automorphism"].get("decomposition") {
                let d: Decomposition = serde_json::from_value(d.clone()).map_err(|e| e.to_string())?;
                if d.compose() != map {
                    return Err("decomposition does not recompose to the map".into());
                }
                done.push("decomposition recomposes to the map".into());
            }
            done.push("fixed polynomials verified by substitution, Jacobian recomputed".into());
        }
        _ => done.push(format!("no certificate to replay for verdict {verdict}")),
    }
    Ok(done)
}
