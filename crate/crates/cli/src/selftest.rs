//! Worked examples replayed by `combalg selftest`.

use std::time::Instant;

use combalg::coordinate::{
    conjecture_g_search, elementary_reduce_gradient, is_coordinate, unimodular_gradient, ConjectureGVerdict,
    CoordinateVerdict, GradientVerdict, NotCoordinateReason, DEFAULT_CONJG_BUDGET,
};
use combalg::groebner::ReductionStep;
use combalg::poly::{parse_map, parse_polynomial, parse_univariate, Monomial};
use combalg::retract::{
    normal_form_retraction, retract_witness_search, verify_retraction, RetractImage, RetractVerdict,
    RetractionVerdict, DEFAULT_WITNESS_BUDGET,
};
use combalg::tame::is_univariate_generating_pair;
use combalg::{PolyMap, Polynomial, Rational};
use serde::Serialize;
use serde_json::json;

use crate::{InputEcho, Options, Outcome, Report, EXIT_NEGATIVE, EXIT_POSITIVE, TOOL, VERSION};

type Check = fn() -> Result<(), String>;

/// `x + x^2 y` built term by term, independent of the parser.
fn example_p() -> Polynomial {
    Polynomial::from_terms(
        2,
        [
            (Monomial::new(&[1, 0]), Rational::one()),
            (Monomial::new(&[2, 1]), Rational::one()),
        ],
    )
}

fn poly(s: &str) -> Result<Polynomial, String> {
    parse_polynomial(s).map_err(|e| e.to_string())
}

fn expect<T: PartialEq + std::fmt::Display>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {want}"))
    }
}

fn derivative_x() -> Result<(), String> {
    let want = Polynomial::from_terms(
        2,
        [
            (Monomial::new(&[0, 0]), Rational::one()),
            (Monomial::new(&[1, 1]), Rational::from(2)),
        ],
    );
    let d = example_p().partial_derivative(0);
    expect("d/dx", &d, &want)?;
    expect("canonical text", d.to_string(), "2*x*y + 1".to_string())
}

fn derivative_y() -> Result<(), String> {
    let d = example_p().partial_derivative(1);
    expect("d/dy", &d, &Polynomial::term(Monomial::new(&[2, 0]), Rational::one()))?;
    expect("canonical text", d.to_string(), "x^2".to_string())
}

fn parse_example() -> Result<(), String> {
    let p = poly("x + x^2*y")?;
    expect("parsed", &p, &example_p())?;
    expect("canonical text", p.to_string(), "x^2*y + x".to_string())
}

fn deglex_order() -> Result<(), String> {
    let (c, m) = poly("x^2 + x*y")?.leading_term().map_err(|e| e.to_string())?;
    if m != Monomial::new(&[2, 0]) || !c.is_one() {
        return Err(format!("leading term of x^2 + x*y is {c}*{m:?}, expected x^2"));
    }
    expect("(x + y)^2", poly("(x + y)^2")?.to_string(), "x^2 + 2*x*y + y^2".to_string())?;
    let (_, m) = poly("y^3 + x^2")?.leading_term().map_err(|e| e.to_string())?;
    expect("degree first", m == Monomial::new(&[0, 3]), true)
}

fn unimodular() -> Result<(), String> {
    expect("unimodular gradient", unimodular_gradient(&example_p()), true)
}

fn gradient_stuck() -> Result<(), String> {
    match elementary_reduce_gradient(&example_p()).map_err(|e| e.to_string())? {
        GradientVerdict::Stuck { final_pair, .. } => {
            let want = [poly("1 + 2*x*y")?, poly("x^2")?];
            if final_pair != want {
                return Err(format!("stuck at ({}, {})", final_pair[0], final_pair[1]));
            }
            Ok(())
        }
        other => Err(format!("expected a stuck reduction, got {other:?}")),
    }
}

fn not_coordinate() -> Result<(), String> {
    match is_coordinate(&example_p()).map_err(|e| e.to_string())? {
        CoordinateVerdict::NotCoordinate {
            reason: NotCoordinateReason::ReductionStuck { .. },
        } => Ok(()),
        other => Err(format!("expected not coordinate, got {other:?}")),
    }
}

fn retraction_generator() -> Result<(), String> {
    let phi = parse_map("(x + y*x^2, 0)").map_err(|e| e.to_string())?;
    match verify_retraction(&phi).map_err(|e| e.to_string())? {
        RetractionVerdict::Retraction { retraction } => match retraction.image {
            RetractImage::Generated { generator } => expect("generator", &generator, &example_p()),
            other => Err(format!("unexpected image {other:?}")),
        },
        other => Err(format!("expected a retraction, got {other:?}")),
    }
}

fn normal_form() -> Result<(), String> {
    let r = normal_form_retraction(&poly("x^2")?).map_err(|e| e.to_string())?;
    let want = PolyMap::pair(example_p(), Polynomial::zero(2)).map_err(|e| e.to_string())?;
    expect("map", &r.map, &want)?;
    expect("image", r.image == RetractImage::Generated { generator: example_p() }, true)
}

fn retract_witness() -> Result<(), String> {
    match retract_witness_search(&example_p(), 2, DEFAULT_WITNESS_BUDGET).map_err(|e| e.to_string())? {
        RetractVerdict::Retract { witness, .. } => {
            expect("witness", &witness, &parse_map("(x, 0)").map_err(|e| e.to_string())?)
        }
        other => Err(format!("expected a witness, got {other:?}")),
    }
}

fn single_singular_step() -> Result<(), String> {
    match conjecture_g_search(&example_p(), DEFAULT_CONJG_BUDGET).map_err(|e| e.to_string())? {
        ConjectureGVerdict::Witness { steps, singular_steps, .. } => {
            expect("singular steps", singular_steps, 1)?;
            let spoly = steps.iter().find_map(|s| match s {
                ReductionStep::Singular { spoly, .. } => Some(spoly.value.clone()),
                _ => None,
            });
            expect("S-polynomial", spoly.unwrap_or_else(|| Polynomial::zero(2)), poly("1/2*x")?)
        }
        other => Err(format!("expected a witness, got {other:?}")),
    }
}

fn univariate_pairs() -> Result<(), String> {
    for (u, v, want) in [("t^2", "t^3", false), ("t^2 + 1", "t", true), ("t^2 + t", "t^2", true)] {
        let (u, v) = (
            parse_univariate(u).map_err(|e| e.to_string())?,
            parse_univariate(v).map_err(|e| e.to_string())?,
        );
        let got = is_univariate_generating_pair(&u, &v).is_generating();
        if got != want {
            return Err(format!("({u}, {v}): generating = {got}"));
        }
    }
    Ok(())
}

fn cli_coord_check() -> Result<(), String> {
    let out = crate::run(["combalg", "coord", "check", "x + x^2*y", "--json"]);
    expect("exit code", out.code, EXIT_NEGATIVE)?;
    let report: Report = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    expect("verdict", report.verdict.as_str(), "not_coordinate")
}

/// `(id, description, check)`.
const EXAMPLES: &[(&str, &str, Check)] = &[
    ("derivative-x", "d/dx (x + x^2 y) = 1 + 2xy", derivative_x),
    ("derivative-y", "d/dy (x + x^2 y) = x^2", derivative_y),
    ("parse-example", "\"x + x^2*y\" parses to x + x^2 y", parse_example),
    ("deglex-order", "deglex: x^2 > xy at equal degree, y^3 > x^2", deglex_order),
    ("unimodular-gradient", "x + x^2 y has unimodular gradient", unimodular),
    ("gradient-stuck", "elementary reduction of (1 + 2xy, x^2) is stuck", gradient_stuck),
    ("not-coordinate", "x + x^2 y is not a coordinate", not_coordinate),
    ("retraction-generator", "(x + y x^2, 0) is a retraction onto K[x + x^2 y]", retraction_generator),
    ("normal-form", "normal form for q = x^2 is (x + x^2 y, 0)", normal_form),
    ("retract-witness", "(x, 0) takes x + x^2 y to x", retract_witness),
    ("single-singular-step", "gradient reduces with one singular step S = x/2", single_singular_step),
    ("univariate-pairs", "(t^2, t^3) no; (t^2 + 1, t) and (t^2 + t, t^2) generate", univariate_pairs),
    ("cli-coord-check", "`coord check \"x + x^2*y\"` exits 1 with not_coordinate", cli_coord_check),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestResult {
    pub id: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// `(id, description)` of every example.
pub fn selftest_examples() -> Vec<(&'static str, &'static str)> {
    EXAMPLES.iter().map(|(id, d, _)| (*id, *d)).collect()
}

/// Runs every example on the current thread. A panicking example counts
/// as a failure.
pub fn run_selftest() -> Vec<SelftestResult> {
    EXAMPLES
        .iter()
        .map(|(id, _, f)| {
            let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
            SelftestResult {
                id,
                passed: r.is_ok(),
                detail: r.err(),
            }
        })
        .collect()
}

pub(crate) fn command(list: bool, as_json: bool, opts: &Options, start: Instant) -> Outcome {
    let (verdict, code, certificate, mut text) = if list {
        let examples = selftest_examples();
        let text: String = examples.iter().map(|(id, d)| format!("{id:<22} {d}\n")).collect();
        let ids: Vec<_> = examples.iter().map(|(id, d)| json!({ "id": id, "description": d })).collect();
        ("listed", EXIT_POSITIVE, json!({ "examples": ids }), text)
    } else {
        let results = run_selftest();
        let passed = results.iter().filter(|r| r.passed).count();
        let mut text = String::new();
        for r in &results {
            match &r.detail {
                None => text.push_str(&format!("ok   {}\n", r.id)),
                Some(d) => text.push_str(&format!("FAIL {}: {d}\n", r.id)),
            }
        }
        text.push_str(&format!("{passed}/{} examples passed\n", results.len()));
        let ok = passed == results.len();
        (
            if ok { "passed" } else { "failed" },
            if ok { EXIT_POSITIVE } else { EXIT_NEGATIVE },
            json!({ "results": results }),
            text,
        )
    };
    if as_json {
        let report = Report {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: if list { "selftest --list".into() } else { "selftest".into() },
            input: InputEcho {
                args: Vec::new(),
                options: opts.clone(),
            },
            verdict: verdict.into(),
            certificate,
            elapsed_ms: start.elapsed().as_millis() as u64,
        };
        text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    }
    Outcome {
        code,
        stdout: text,
        stderr: String::new(),
    }
}
