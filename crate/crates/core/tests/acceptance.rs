//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::time::{Duration, Instant};

use combalg::coordinate::{
    complete_to_basis, conjecture_g_search, elementary_reduce_gradient, is_coordinate, replay_steps,
    unimodular_gradient, verify_certificate, ConjectureGVerdict, CoordinateVerdict, GradientVerdict,
    DEFAULT_CONJG_BUDGET,
};
use combalg::freegroup::{
    apply_nielsen, free_reduce, is_free_automorphism, is_primitive, same_subgroup, AutomorphismCheck, FreeWord,
    GeneratorTuple, NielsenMove, Side,
};
use combalg::groebner::{buchberger, contains_one, s_polynomial, ReductionKind, ReductionStep};
use combalg::poly::{parse_map, parse_polynomial, parse_univariate};
use combalg::retract::{jc_harness, retract_witness_search, RetractVerdict, DEFAULT_WITNESS_BUDGET};
use combalg::tame::{
    decompose_automorphism, is_univariate_generating_pair, random_generating_pair, random_tame_automorphism,
    RandomTameConfig,
};
use combalg::{PolyMap, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn p(s: &str) -> Polynomial {
    parse_polynomial(s).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

// 1 -----------------------------------------------------------------------

fn triple_point() -> Outcome {
    let start = Instant::now();
    let f = p("x + x^2*y");
    ensure(unimodular_gradient(&f), || "gradient not unimodular".into())?;
    let v = is_coordinate(&f).map_err(|e| e.to_string())?;
    ensure(matches!(v, CoordinateVerdict::NotCoordinate { .. }), || format!("is_coordinate: {v:?}"))?;
    match retract_witness_search(&f, 2, DEFAULT_WITNESS_BUDGET).map_err(|e| e.to_string())? {
        RetractVerdict::Retract { witness, .. } => {
            ensure(witness == parse_map("(x, 0)").unwrap(), || format!("witness {witness}"))?
        }
        other => return Err(format!("witness search: {other:?}")),
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("{:.2?}", start.elapsed()))
}

// 2, 3, 4 -----------------------------------------------------------------

fn tame_sample() -> Vec<PolyMap> {
    (0..500u64)
        .map(|seed| {
            let cfg = RandomTameConfig {
                factors: 1 + (seed % 6) as usize,
                degree_cap: 64,
                ..RandomTameConfig::default()
            };
            random_tame_automorphism(seed, &cfg).0
        })
        .collect()
}

struct RoundTrip {
    monotone_checked: usize,
}

fn tame_round_trip(sample: &[PolyMap]) -> Result<RoundTrip, String> {
    let mut monotone_checked = 0;
    for (seed, map) in sample.iter().enumerate() {
        let [g1, g2] = [&map.images()[0], &map.images()[1]];
        let v = decompose_automorphism(g1, g2).map_err(|e| e.to_string())?;
        let d = v.decomposition().ok_or_else(|| format!("seed {seed}: decomposition rejected {map}"))?;
        let recomposed = d.compose();
        ensure(recomposed.to_string() == map.to_string(), || format!("seed {seed}: recomposition differs"))?;

        let cv = is_coordinate(g1).map_err(|e| format!("seed {seed}: {e}"))?;
        let cert = cv.certificate().ok_or_else(|| format!("seed {seed}: {g1} not accepted: {cv:?}"))?;
        verify_certificate(g1, cert).map_err(|e| format!("seed {seed}: {e}"))?;
        let t = &cert.trace;
        ensure(t.is_degree_monotone(), || format!("seed {seed}: trace not degree-monotone"))?;
        let initial = t.max_degrees.first().copied().unwrap_or(0) as usize;
        ensure(t.division_rounds().len() <= initial, || format!("seed {seed}: too many division rounds"))?;
        monotone_checked += 1;

        let q = complete_to_basis(g1).map_err(|e| format!("seed {seed}: {e}"))?;
        let pair = PolyMap::pair(g1.clone(), q.clone()).unwrap();
        let det = pair.jacobian_det().unwrap();
        ensure(!det.is_zero() && det.is_constant(), || format!("seed {seed}: Jacobian of completion is {det}"))?;
        ensure(decompose_automorphism(g1, &q).map_err(|e| e.to_string())?.is_automorphism(), || {
            format!("seed {seed}: completion does not decompose")
        })?;
    }
    Ok(RoundTrip { monotone_checked })
}

fn rejection(sample: &[PolyMap]) -> Outcome {
    let (x, y) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
    let mut rejected = 0;
    for (seed, map) in sample.iter().enumerate() {
        let [g1, g2] = [&map.images()[0], &map.images()[1]];
        let squared = g1.pow(2);
        let variants = [
            (squared.clone(), g2.clone()),
            (g1.clone(), g2.pow(2)),
            (g1 * if seed % 2 == 0 { &x } else { &y }, g2.clone()),
            (g1.clone(), g2 * if seed % 2 == 0 { &y } else { &x }),
        ];
        for (a, b) in &variants {
            let v = decompose_automorphism(a, b).map_err(|e| e.to_string())?;
            ensure(!v.is_automorphism(), || format!("seed {seed}: ({a}, {b}) accepted"))?;
            rejected += 1;
        }
        let cv = is_coordinate(&squared).map_err(|e| e.to_string())?;
        ensure(matches!(cv, CoordinateVerdict::NotCoordinate { .. }), || {
            format!("seed {seed}: squared image not rejected: {cv:?}")
        })?;
        rejected += 1;
    }
    Ok(format!("{rejected} rejections"))
}

/// Least-squares slope of `log y` against `log x`.
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|(x, y)| (x.ln(), y.ln())).unzip();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}

fn nested_shear_growth() -> Result<(f64, usize, usize), String> {
    let mut points = Vec::new();
    for k in 2..=25u32 {
        let f = p(&format!("y + (x + y^{k})^2"));
        match elementary_reduce_gradient(&f).map_err(|e| e.to_string())? {
            GradientVerdict::Reached { trace, .. } => {
                ensure(trace.is_degree_monotone(), || format!("k = {k}: trace not monotone"))?;
                points.push((f64::from(2 * k), trace.elementary_steps as f64));
            }
            other => return Err(format!("k = {k}: {other:?}")),
        }
    }
    let steps = points.iter().map(|&(_, s)| s as usize);
    let slope = loglog_slope(&points);
    let slope = if slope.abs() < 1e-9 { 0.0 } else { slope };
    Ok((slope, steps.clone().min().unwrap(), steps.max().unwrap()))
}

// 5 -----------------------------------------------------------------------

/// Canonical representative of a cyclic word: the least rotation.
fn cyclic_key(w: &[i32]) -> Vec<i32> {
    (0..w.len().max(1))
        .map(|r| w[r..].iter().chain(&w[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

fn reduce_letters(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for &g in w {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    while out.len() >= 2 && out[0] == -out[out.len() - 1] {
        out.remove(0);
        out.pop();
    }
    out
}

/// Images of `w` under the elementary Nielsen automorphisms of `F_2`.
fn nielsen_neighbours(w: &[i32]) -> Vec<Vec<i32>> {
    let subst = |img1: &[i32], img2: &[i32]| {
        let mut out = Vec::new();
        for &g in w {
            let img = if g.abs() == 1 { img1 } else { img2 };
            if g > 0 {
                out.extend_from_slice(img);
            } else {
                out.extend(img.iter().rev().map(|h| -h));
            }
        }
        reduce_letters(&out)
    };
    vec![
        subst(&[2], &[1]),
        subst(&[-1], &[2]),
        subst(&[1], &[-2]),
        subst(&[1, 2], &[2]),
        subst(&[2, 1], &[2]),
        subst(&[1, -2], &[2]),
        subst(&[-2, 1], &[2]),
        subst(&[1], &[2, 1]),
        subst(&[1], &[1, 2]),
        subst(&[1], &[2, -1]),
        subst(&[1], &[-1, 2]),
    ]
}

/// Cyclic classes of primitive words of length <= `bound`, found by a
/// breadth-first search from `x1` that never leaves length `search_bound`.
fn primitive_oracle(bound: usize, search_bound: usize) -> HashSet<Vec<i32>> {
    let start = vec![1];
    let mut seen: HashSet<Vec<i32>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for n in nielsen_neighbours(&w) {
            let key = cyclic_key(&n);
            if n.len() <= search_bound && seen.insert(key.clone()) {
                queue.push_back(key);
            }
        }
    }
    seen.into_iter().filter(|w| w.len() <= bound).collect()
}

fn cyclically_reduced_words(max_len: usize) -> Vec<Vec<i32>> {
    let letters = [1, -1, 2, -2];
    let mut out = Vec::new();
    let mut layer: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &g in &letters {
                if w.last() != Some(&-g) {
                    let mut v = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().filter(|w| w.len() < 2 || w[0] != -w[w.len() - 1]).cloned());
        layer = next;
    }
    out
}

fn whitehead_oracle() -> Outcome {
    let start = Instant::now();
    let oracle = primitive_oracle(5, 9);
    let words = cyclically_reduced_words(5);
    let mut primitive = 0;
    for w in &words {
        let fw = free_reduce(w, 2).map_err(|e| e.to_string())?;
        let got = is_primitive(&fw).map_err(|e| e.to_string())?.is_primitive();
        let want = oracle.contains(&cyclic_key(w));
        ensure(got == want, || format!("{fw}: is_primitive = {got}, oracle = {want}"))?;
        primitive += usize::from(got);
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("{} words, {primitive} primitive, {:.2?}", words.len(), start.elapsed()))
}

// 6 -----------------------------------------------------------------------

fn random_move(rng: &mut ChaCha8Rng, n: usize) -> NielsenMove {
    let i = rng.gen_range(1..=n);
    let mut j = rng.gen_range(1..=n);
    while n > 1 && j == i {
        j = rng.gen_range(1..=n);
    }
    match rng.gen_range(0..4) {
        0 if n > 1 => NielsenMove::N3 { i, j },
        1 => NielsenMove::N2 { i },
        _ if n > 1 => NielsenMove::N1 {
            i,
            j,
            side: if rng.gen_bool(0.5) { Side::Right } else { Side::Left },
        },
        _ => NielsenMove::N2 { i },
    }
}

fn words_of(t: &GeneratorTuple) -> Vec<Vec<i32>> {
    t.words().iter().map(|w| w.letters().to_vec()).collect()
}

/// Reduced words that are products of at most `max_factors` generators of
/// `gens` or their inverses.
fn brute_force_span(gens: &[Vec<i32>], max_factors: usize) -> HashSet<Vec<i32>> {
    let mut letters: Vec<Vec<i32>> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_empty()) {
        letters.push(g.clone());
        letters.push(g.iter().rev().map(|h| -h).collect());
    }
    let mut seen: HashSet<Vec<i32>> = HashSet::from([Vec::new()]);
    let mut layer: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in 0..max_factors {
        let mut next = Vec::new();
        for w in &layer {
            for l in &letters {
                let mut v = w.clone();
                for &g in l {
                    if v.last() == Some(&-g) {
                        v.pop();
                    } else {
                        v.push(g);
                    }
                }
                if seen.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    seen
}

fn random_small_word(rng: &mut ChaCha8Rng) -> FreeWord {
    loop {
        let len = rng.gen_range(1..=3);
        let raw: Vec<i32> = (0..len).map(|_| [1, -1, 2, -2][rng.gen_range(0..4)]).collect();
        let w = free_reduce(&raw, 2).unwrap();
        if !w.is_empty() {
            return w;
        }
    }
}

fn nielsen_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..500 {
        let n = 2 + k % 2;
        let mut t = GeneratorTuple::basis(n);
        for _ in 0..rng.gen_range(1..=12) {
            let m = random_move(&mut rng, n);
            t = apply_nielsen(&t, &m).map_err(|e| e.to_string())?;
        }
        let v = is_free_automorphism(&t).map_err(|e| e.to_string())?;
        ensure(matches!(v, AutomorphismCheck::Automorphism { .. }), || format!("product {k}: {t} -> {v:?}"))?;
    }
    for text in ["x1^2, x2", "x1 x2 x1^-1 x2^-1, x2"] {
        let t = combalg::freegroup::parse_tuple(text, Some(2)).unwrap();
        let v = is_free_automorphism(&t).map_err(|e| e.to_string())?;
        ensure(matches!(v, AutomorphismCheck::NotAutomorphism { .. }), || format!("({text}) -> {v:?}"))?;
    }
    let mut agree_same = 0;
    for k in 0..100 {
        let a = GeneratorTuple::new((0..rng.gen_range(1..=2)).map(|_| random_small_word(&mut rng)).collect())
            .unwrap();
        let b = if k % 2 == 0 {
            let mut b = a.clone();
            for _ in 0..rng.gen_range(1..=2) {
                b = apply_nielsen(&b, &random_move(&mut rng, b.len())).unwrap();
            }
            b
        } else {
            GeneratorTuple::new((0..rng.gen_range(1..=2)).map(|_| random_small_word(&mut rng)).collect()).unwrap()
        };
        let (wa, wb) = (words_of(&a), words_of(&b));
        let (span_a, span_b) = (brute_force_span(&wa, 8), brute_force_span(&wb, 8));
        let want = wb.iter().all(|w| span_a.contains(w)) && wa.iter().all(|w| span_b.contains(w));
        let got = same_subgroup(&a, &b).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("({a}) vs ({b}): same_subgroup = {got}, brute force = {want}"))?;
        agree_same += usize::from(got);
    }
    Ok(format!("500 products accepted, 2 rejected, 100 tuple pairs agree ({agree_same} equal)"))
}

// 7 -----------------------------------------------------------------------

const GB_FIXTURES: [&str; 20] = [
    "1 + 2*x*y, x^2",
    "x, y",
    "x^2 - y, x*y - 1",
    "x^2 + y^2 - 1, x - y",
    "x^3 - 2*x*y, x^2*y - 2*y^2 + x",
    "x*y - 1, y^2 - x",
    "x^2, x*y, y^2",
    "x^2*y + x*y^2, x^2 - y^2",
    "x^4 + y^4, x*y",
    "x + y + 1, x - y",
    "x^2 + x*y + y^2, x^3 - y^3",
    "x^5 - y^2, x^3*y - 1",
    "x^2 - 2, y^2 - 3",
    "3*x^2*y - y^3, x^3 - 3*x*y^2",
    "x*y^2 - x, x^2*y - y",
    "x1*x2 - x3, x2*x3 - x1, x3*x1 - x2",
    "x1 + x2 + x3, x1*x2 + x2*x3 + x3*x1, x1*x2*x3 - 1",
    "x1^2 - x2, x1^3 - x3",
    "x1*x3 - x2^2, x2*x3 - x1^2",
    "1/2*x^2 - 3/4*y, 2/3*x*y + 1",
];

fn parse_list(s: &str) -> Vec<Polynomial> {
    let ps: Vec<Polynomial> = s.split(", ").map(p).collect();
    let n = ps.iter().map(Polynomial::nvars).max().unwrap();
    ps.into_iter().map(|q| q.with_nvars(n)).collect()
}

fn groebner_fixtures() -> Outcome {
    let mut pairs = 0;
    for text in GB_FIXTURES {
        let gens = parse_list(text);
        let basis = buchberger(&gens);
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                let s = s_polynomial(a, b).map_err(|e| e.to_string())?;
                ensure(s.value.reduce(&basis).is_zero(), || format!("{{{text}}}: S({a}, {b}) does not reduce to 0"))?;
                pairs += 1;
            }
        }
        for g in &gens {
            ensure(g.reduce(&basis).is_zero(), || format!("{{{text}}}: {g} not in the basis ideal"))?;
        }
    }
    let identity = &(&p("1 + 2*x*y") * &p("1 - 2*x*y")) + &(&p("4*y^2") * &p("x^2"));
    ensure(identity.is_one(), || format!("identity gives {identity}"))?;
    ensure(contains_one(&parse_list("1 + 2*x*y, x^2")), || "contains_one({1 + 2xy, x^2}) false".into())?;
    ensure(!contains_one(&parse_list("x, y")), || "contains_one({x, y}) true".into())?;
    Ok(format!("20 ideals, {pairs} S-pairs reduce to 0"))
}

// 8 -----------------------------------------------------------------------

fn abhyankar_moh() -> Outcome {
    let t = |s: &str| parse_univariate(s).unwrap();
    for (u, v, want) in [("t^2", "t^3", false), ("t^2 + 1", "t", true), ("t^2 + t", "t^2", true)] {
        let got = is_univariate_generating_pair(&t(u), &t(v)).is_generating();
        ensure(got == want, || format!("({u}, {v}): {got}"))?;
    }
    for seed in 0..100 {
        let (u, v) = random_generating_pair(seed, 6, 24);
        ensure(is_univariate_generating_pair(&u, &v).is_generating(), || format!("seed {seed}: ({u}, {v}) rejected"))?;
    }
    Ok("3 vectors, 100 random pairs".into())
}

// 9 -----------------------------------------------------------------------

fn single_singular_witness() -> Outcome {
    let f = p("x + x^2*y");
    let ConjectureGVerdict::Witness { steps, singular_steps, pairs } =
        conjecture_g_search(&f, DEFAULT_CONJG_BUDGET).map_err(|e| e.to_string())?
    else {
        return Err("no witness".into());
    };
    ensure(singular_steps == 1, || format!("{singular_steps} singular steps"))?;
    let k = steps.iter().position(|s| s.kind() == ReductionKind::Singular).unwrap();
    let ReductionStep::Singular { pair: (i, j), spoly, .. } = &steps[k] else { unreachable!() };
    let before = &pairs[k];
    let inputs: BTreeSet<String> = [before[*i].to_string(), before[*j].to_string()].into();
    let expected: BTreeSet<String> = ["2*x*y + 1".to_string(), "x^2".to_string()].into();
    ensure(inputs == expected, || format!("singular step on {inputs:?}"))?;
    ensure(spoly.value == p("1/2*x"), || format!("S = {}", spoly.value))?;
    ensure(steps[k + 1..].iter().all(|s| s.kind() == ReductionKind::Regular), || "singular step after S".into())?;
    let replayed = replay_steps(&f, &steps).map_err(|e| e.to_string())?;
    ensure(replayed == pairs, || "witness does not replay".into())?;
    let last = replayed.last().unwrap();
    ensure(last[0].is_one() && last[1].is_zero(), || "witness does not end at (1, 0)".into())?;
    Ok(format!("{} steps, S = x/2 at step {}", steps.len(), k + 1))
}

// 10 ----------------------------------------------------------------------

fn jc_consistency() -> Outcome {
    let cfg = RandomTameConfig {
        factors: 4,
        max_shear_degree: 3,
        coeff_bound: 2,
        degree_cap: 6,
    };
    let mut with_fixed = 0;
    for seed in 0..100 {
        let (phi, _) = random_tame_automorphism(1000 + seed, &cfg);
        ensure(phi.is_jacobian_unit().unwrap(), || format!("seed {seed}: Jacobian not a unit"))?;
        let r = jc_harness(&phi, None).map_err(|e| e.to_string())?;
        ensure(!r.inconsistency, || format!("seed {seed}: inconsistency for {phi}"))?;
        for b in &r.fixed.basis {
            let image = phi.apply(b).map_err(|e| e.to_string())?;
            ensure(&image == b, || format!("seed {seed}: {b} not fixed by {phi}"))?;
        }
        with_fixed += usize::from(r.fixed.nonconstant().is_some());
    }
    Ok(format!("100 maps, {with_fixed} with a nonconstant fixed polynomial"))
}

fn main() {
    let mut failed = 0;
    let mut report = |n: u32, name: &str, r: Outcome| {
        match &r {
            Ok(detail) => println!("[PASS] {n}: {name} ({detail})"),
            Err(e) => {
                failed += 1;
                println!("[FAIL] {n}: {name}: {e}");
            }
        }
    };
    report(1, "triple point", triple_point());

    let sample = tame_sample();
    let start = Instant::now();
    let round = tame_round_trip(&sample);
    let elapsed = start.elapsed();
    let r2 = round.as_ref().map_err(Clone::clone).and_then(|_| {
        within(Duration::from_secs(60), start)?;
        Ok(format!("500 maps, {elapsed:.2?}"))
    });
    report(2, "tame round-trip", r2);
    report(3, "rejection soundness", rejection(&sample));
    let r4 = round.map_err(|e| format!("round-trip failed: {e}")).and_then(|rt| {
        let (slope, lo, hi) = nested_shear_growth()?;
        ensure(slope <= 2.2, || format!("growth exponent {slope:.3}"))?;
        Ok(format!(
            "{} traces monotone, nested-shear steps {lo}..={hi}, exponent {slope:.3}",
            rt.monotone_checked
        ))
    });
    report(4, "degree-monotone traces", r4);
    report(5, "Whitehead oracle equivalence", whitehead_oracle());
    report(6, "Nielsen suite", nielsen_suite());
    report(7, "Gröbner postconditions", groebner_fixtures());
    report(8, "Abhyankar-Moh vectors", abhyankar_moh());
    report(9, "single singular step witness", single_singular_witness());
    report(10, "fixed polynomials and unit Jacobians", jc_consistency());
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
