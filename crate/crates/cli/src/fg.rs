use combalg::freegroup::{
    automorphic_conjugacy, check_expression, cyclic_reduce, enumerate_whitehead_moves, free_reduce,
    is_free_automorphism, is_primitive, nielsen_reduce_with_budget, parse_letters, parse_tuple,
    replay_nielsen, replay_whitehead, subgroup_membership, whitehead_minimize, AutomorphismCheck,
    ConjugacyVerdict, CyclicWord, FreeWord, GeneratorTuple, Membership, MoveTrace, NielsenMove,
    PrimitiveVerdict, WhiteheadMove, DEFAULT_CONJUGACY_BUDGET, DEFAULT_ESCAPE_BUDGET,
};
use serde_json::{json, Value};

use crate::input::{arity, common_rank, input_error, tuple, tuple_from_inputs, word};
use crate::{Class, CliError, Options, Response};

pub(crate) fn field<T: serde::de::DeserializeOwned>(cert: &Value, name: &str) -> Result<T, String> {
    let v = cert.get(name).ok_or_else(|| format!("certificate has no `{name}`"))?;
    serde_json::from_value(v.clone()).map_err(|e| format!("certificate field `{name}`: {e}"))
}

fn whitehead_certificate(before: usize, minimal: &CyclicWord, trace: &MoveTrace<WhiteheadMove>) -> Value {
    json!({
        "complexity_before": before,
        "complexity_after": minimal.len(),
        "minimal": minimal,
        "trace": trace,
    })
}

/// No Whitehead move shortens `w`.
fn locally_minimal(w: &CyclicWord) -> bool {
    enumerate_whitehead_moves(w.rank())
        .iter()
        .all(|m| m.apply_cyclic(w).map_or(false, |c| c.len() >= w.len()))
}

/// Rank for `fg auto`: the number of images unless an index exceeds it.
fn auto_rank(args: &[String], opts: &Options) -> Result<usize, CliError> {
    if let Some(r) = opts.rank {
        return Ok(r);
    }
    let loose = common_rank(args, None)?;
    let count = match args.len() {
        1 => parse_tuple(&args[0], Some(loose)).map(|t| t.len()).unwrap_or(loose),
        n => n,
    };
    let max_index = args
        .iter()
        .filter_map(|a| parse_tuple(a, Some(loose)).ok())
        .flat_map(|t| t.words().iter().map(FreeWord::max_index).collect::<Vec<_>>())
        .max()
        .unwrap_or(0);
    Ok(if max_index <= count { count } else { loose })
}

pub fn execute(op: &str, args: &[String], opts: &Options) -> Result<Response, CliError> {
    match op {
        "reduce" => {
            arity(args, 1, "a word")?;
            let rank = common_rank(args, opts.rank)?;
            let raw = parse_letters(&args[0]).map_err(|e| CliError::Parse {
                arg: 0,
                text: args[0].clone(),
                pos: e.pos,
                message: e.message,
            })?;
            let w = free_reduce(&raw, rank).map_err(input_error)?;
            let c = cyclic_reduce(&w);
            Ok(Response::new(
                "reduced",
                Class::Positive,
                json!({
                    "complexity_before": raw.len(),
                    "complexity_after": w.len(),
                    "reduced": w,
                    "cyclically_reduced": c,
                }),
            )
            .line(format!("reduced: {w}"))
            .line(format!("cyclically reduced: {}", c.word())))
        }
        "nielsen" => {
            let rank = common_rank(args, opts.rank)?;
            let t = tuple_from_inputs(args, rank)?;
            let r = nielsen_reduce_with_budget(&t, opts.budget.unwrap_or(DEFAULT_ESCAPE_BUDGET));
            let (verdict, class) = if r.escape_budget_hit {
                ("escape_budget_exhausted", Class::Inconclusive)
            } else {
                ("nielsen_reduced", Class::Positive)
            };
            Ok(Response::new(
                verdict,
                class,
                json!({
                    "complexity_before": t.complexity(),
                    "complexity_after": r.tuple.complexity(),
                    "reduced": r.tuple,
                    "trace": r.trace,
                }),
            )
            .line(format!("reduced: {}", r.tuple))
            .line(format!(
                "complexity {} -> {} in {} moves",
                t.complexity(),
                r.tuple.complexity(),
                r.trace.move_count()
            )))
        }
        "member" => {
            arity(args, 2, "a tuple and a word")?;
            let rank = common_rank(args, opts.rank)?;
            let t = tuple(args, 0, rank)?;
            let w = word(args, 1, rank)?;
            Ok(match subgroup_membership(&t, &w).map_err(input_error)? {
                Membership::Member { expression } => {
                    Response::new("member", Class::Positive, json!({ "expression": expression }))
                        .line(format!("{w} = {expression} in y1..y{}", t.len()))
                }
                Membership::NonMember => Response::new("non_member", Class::Negative, json!({}))
                    .line(format!("{w} is not in the subgroup generated by {t}")),
            })
        }
        "same-subgroup" => {
            arity(args, 2, "two tuples")?;
            let rank = common_rank(args, opts.rank)?;
            let (a, b) = (tuple(args, 0, rank)?, tuple(args, 1, rank)?);
            let mut exprs: [Vec<FreeWord>; 2] = [Vec::new(), Vec::new()];
            for (k, (from, into)) in [(&a, &b), (&b, &a)].into_iter().enumerate() {
                for w in from.words() {
                    match subgroup_membership(into, w).map_err(input_error)? {
                        Membership::Member { expression } => exprs[k].push(expression),
                        Membership::NonMember => {
                            let side = if k == 0 { "first" } else { "second" };
                            return Ok(Response::new(
                                "different",
                                Class::Negative,
                                json!({ "outside": { "word": w, "from": side } }),
                            )
                            .line(format!("{w} from the {side} tuple is not in the other subgroup")));
                        }
                    }
                }
            }
            let [a_in_b, b_in_a] = exprs;
            Ok(Response::new("same", Class::Positive, json!({ "a_in_b": a_in_b, "b_in_a": b_in_a }))
                .line("each generator lies in the other subgroup"))
        }
        "auto" => {
            let rank = auto_rank(args, opts)?;
            let t = tuple_from_inputs(args, rank)?;
            let check = is_free_automorphism(&t).map_err(input_error)?;
            let (verdict, class, reduced, trace) = match check {
                AutomorphismCheck::Automorphism { reduced, trace } => ("automorphism", Class::Positive, reduced, trace),
                AutomorphismCheck::NotAutomorphism { reduced, trace } => {
                    ("not_automorphism", Class::Negative, reduced, trace)
                }
                AutomorphismCheck::Inconclusive { reduced, trace } => ("inconclusive", Class::Inconclusive, reduced, trace),
            };
            Ok(Response::new(
                verdict,
                class,
                json!({
                    "complexity_before": t.complexity(),
                    "complexity_after": reduced.complexity(),
                    "reduced": reduced,
                    "trace": trace,
                }),
            )
            .line(format!("Nielsen-reduced images: {reduced}")))
        }
        "primitive" | "whitehead" => {
            arity(args, 1, "a word")?;
            let rank = common_rank(args, opts.rank)?;
            let w = word(args, 0, rank)?;
            let before = cyclic_reduce(&w).len();
            if op == "whitehead" {
                let (minimal, trace) = whitehead_minimize(&cyclic_reduce(&w));
                return Ok(
                    Response::new("minimized", Class::Positive, whitehead_certificate(before, &minimal, &trace))
                        .line(format!("minimal: {}", minimal.word()))
                        .line(format!("{} moves", trace.move_count())),
                );
            }
            let v = is_primitive(&w).map_err(input_error)?;
            let (verdict, class) = if v.is_primitive() {
                ("primitive", Class::Positive)
            } else {
                ("not_primitive", Class::Negative)
            };
            let (PrimitiveVerdict::Primitive { minimal, trace } | PrimitiveVerdict::NotPrimitive { minimal, trace }) = &v;
            Ok(Response::new(verdict, class, whitehead_certificate(before, minimal, trace))
                .line(format!("minimal: {}", minimal.word()))
                .line(format!("{} moves", trace.move_count())))
        }
        "conjugacy" => {
            arity(args, 2, "two words")?;
            let rank = common_rank(args, opts.rank)?;
            let (u, v) = (word(args, 0, rank)?, word(args, 1, rank)?);
            let budget = opts.budget.unwrap_or(DEFAULT_CONJUGACY_BUDGET);
            Ok(match automorphic_conjugacy(&u, &v, budget).map_err(input_error)? {
                ConjugacyVerdict::Equivalent { trace } => Response::new(
                    "equivalent",
                    Class::Positive,
                    json!({
                        "complexity_before": cyclic_reduce(&u).len(),
                        "complexity_after": cyclic_reduce(&v).len(),
                        "trace": trace,
                    }),
                )
                .line(format!("{} moves take {u} to a conjugate of {v}", trace.move_count())),
                ConjugacyVerdict::NotEquivalent { minimal_u, minimal_v } => Response::new(
                    "not_equivalent",
                    Class::Negative,
                    json!({ "minimal_u": minimal_u, "minimal_v": minimal_v }),
                )
                .line(format!("minimal forms {} and {} are not connected", minimal_u.word(), minimal_v.word())),
                ConjugacyVerdict::BudgetExceeded { explored } => {
                    Response::new("budget_exhausted", Class::Inconclusive, json!({ "explored": explored }))
                        .line(format!("{explored} words explored"))
                }
            })
        }
        _ => Err(CliError::Usage(format!("unknown fg operation {op}"))),
    }
}

fn check_nielsen(t: &GeneratorTuple, cert: &Value) -> Result<GeneratorTuple, String> {
    let trace: MoveTrace<NielsenMove> = field(cert, "trace")?;
    let reduced: GeneratorTuple = field(cert, "reduced")?;
    let replayed = replay_nielsen(t, &trace).map_err(|e| format!("trace replay: {e}"))?;
    if replayed != reduced {
        return Err(format!("trace replays to {replayed}, not {reduced}"));
    }
    if field::<usize>(cert, "complexity_after")? != reduced.complexity() {
        return Err("complexity_after does not match the reduced tuple".into());
    }
    Ok(reduced)
}

fn check_whitehead(w: &FreeWord, cert: &Value) -> Result<CyclicWord, String> {
    let trace: MoveTrace<WhiteheadMove> = field(cert, "trace")?;
    let minimal: CyclicWord = field(cert, "minimal")?;
    let replayed = replay_whitehead(&cyclic_reduce(w), &trace).map_err(|e| format!("trace replay: {e}"))?;
    if replayed != minimal {
        return Err(format!("trace replays to {}, not {}", replayed.word(), minimal.word()));
    }
    Ok(minimal)
}

pub fn check(op: &str, args: &[String], opts: &Options, verdict: &str, cert: &Value) -> Result<Vec<String>, String> {
    let usage = |e: CliError| e.to_string();
    let mut done = Vec::new();
    match (op, verdict) {
        ("reduce", _) => {
            let rank = common_rank(args, opts.rank).map_err(usage)?;
            let w = word(args, 0, rank).map_err(usage)?;
            let reduced: FreeWord = field(cert, "reduced")?;
            // Deserializing already rejects words with a cancelling pair.
            if w.mul(&reduced.inverse()).len() != 0 {
                return Err("reduced word differs from the input in the group".into());
            }
            done.push("reduced word is freely reduced and equal to the input".into());
        }
        ("nielsen", _) => {
            let rank = common_rank(args, opts.rank).map_err(usage)?;
            let t = tuple_from_inputs(args, rank).map_err(usage)?;
            check_nielsen(&t, cert)?;
            done.push("Nielsen trace replays to the reduced tuple".into());
        }
        ("member", "member") => {
            let rank = common_rank(args, opts.rank).map_err(usage)?;
            let (t, w) = (tuple(args, 0, rank).map_err(usage)?, word(args, 1, rank).map_err(usage)?);
            let expression: FreeWord = field(cert, "expression")?;
            check_expression(&t, &expression, &w).map_err(|e| e.to_string())?;
            done.push("expression evaluates to the word".into());
        }
        ("same-subgroup", "same") => {
            let rank = common_rank(args, opts.rank).map_err(usage)?;
            let (a, b) = (tuple(args, 0, rank).map_err(usage)?, tuple(args, 1, rank).map_err(usage)?);
            for (name, from, into) in [("a_in_b", &a, &b), ("b_in_a", &b, &a)] {
                let exprs: Vec<FreeWord> = field(cert, name)?;
                if exprs.len() != from.len() {
                    return Err(format!("`{name}` has the wrong number of expressions"));
                }
                for (e, w) in exprs.iter().zip(from.words()) {
                    check_expression(into, e, w).map_err(|e| e.to_string())?;
                }
            }
            done.push("every generator is expressed in the other tuple".into());
        }
        ("auto", _) => {
            let rank = auto_rank(args, opts).map_err(usage)?;
            let t = tuple_from_inputs(args, rank).map_err(usage)?;
            let reduced = check_nielsen(&t, cert)?;
            done.push("Nielsen trace replays to the reduced tuple".into());
            if verdict == "automorphism" {
                let mut seen: Vec<u32> = reduced
                    .words()
                    .iter()
                    .filter(|w| w.len() == 1)
                    .map(|w| w.letters()[0].unsigned_abs())
                    .collect();
                seen.sort_unstable();
                seen.dedup();
                if reduced.len() != rank || seen.len() != rank {
                    return Err("reduced tuple is not a signed basis".into());
                }
                done.push("reduced tuple is a signed basis".into());
            }
        }
        ("primitive" | "whitehead", _) => {
            let rank = common_rank(args, opts.rank).map_err(usage)?;
            let w = word(args, 0, rank).map_err(usage)?;
            let minimal = check_whitehead(&w, cert)?;
            done.push("Whitehead trace replays to the minimal word".into());
            match verdict {
                "primitive" if minimal.len() != 1 => return Err("minimal word is not a generator".into()),
                "primitive" => done.push("minimal word has length 1".into()),
                _ => {
                    if !locally_minimal(&minimal) {
                        return Err("some Whitehead move shortens the minimal word".into());
                    }
                    done.push("no Whitehead move shortens the minimal word".into());
                }
            }
        }
        ("conjugacy", "equivalent") => {
            let rank = common_rank(args, opts.rank).map_err(usage)?;
            let (u, v) = (word(args, 0, rank).map_err(usage)?, word(args, 1, rank).map_err(usage)?);
            let trace: MoveTrace<WhiteheadMove> = field(cert, "trace")?;
            let end = replay_whitehead(&cyclic_reduce(&u), &trace).map_err(|e| format!("trace replay: {e}"))?;
            if end != cyclic_reduce(&v) {
                return Err(format!("trace ends at {}, not at {}", end.word(), cyclic_reduce(&v).word()));
            }
            done.push("Whitehead trace takes u to a cyclic conjugate of v".into());
        }
        ("conjugacy", "not_equivalent") => {
            let (mu, mv): (CyclicWord, CyclicWord) = (field(cert, "minimal_u")?, field(cert, "minimal_v")?);
            if !locally_minimal(&mu) || !locally_minimal(&mv) {
                return Err("a recorded minimal word can still be shortened".into());
            }
            done.push("both recorded words are Whitehead-minimal".into());
        }
        _ => done.push(format!("no certificate to replay for verdict {verdict}")),
    }
    Ok(done)
}
