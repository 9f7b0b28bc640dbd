use super::*;
use crate::poly::parse_polynomial;
use crate::tame::{random_tame_automorphism, ElementaryFactor, RandomTameConfig};

fn p(s: &str) -> Polynomial {
    parse_polynomial(s).unwrap()
}

#[test]
fn unimodular_examples() {
    assert!(unimodular_gradient(&p("x + x^2*y")));
    assert!(!unimodular_gradient(&p("x^2")));
    assert!(unimodular_gradient(&p("x")));
    assert!(!unimodular_gradient(&p("7")));
}

#[test]
fn gradient_reduction_of_a_shear() {
    match elementary_reduce_gradient(&p("x + y^2")).unwrap() {
        GradientVerdict::Reached { matrix, trace } => {
            assert_eq!(matrix.apply_row(&[p("1"), p("2*y")]), [p("1"), p("0")]);
            assert_eq!(trace.steps.len(), 1);
            assert!(trace.is_degree_monotone());
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn gradient_of_x_needs_nothing() {
    match elementary_reduce_gradient(&p("x")).unwrap() {
        GradientVerdict::Reached { matrix, trace } => {
            assert!(matrix.factors().is_empty());
            assert!(trace.steps.is_empty());
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn remark_example_is_stuck() {
    match elementary_reduce_gradient(&p("x + x^2*y")).unwrap() {
        GradientVerdict::Stuck { final_pair, .. } => {
            assert_eq!(final_pair, [p("1 + 2*x*y"), p("x^2")]);
        }
        other => panic!("unexpected {other:?}"),
    }
    let v = is_coordinate(&p("x + x^2*y")).unwrap();
    assert!(matches!(
        v,
        CoordinateVerdict::NotCoordinate {
            reason: NotCoordinateReason::ReductionStuck { .. }
        }
    ));
}

#[test]
fn coordinate_examples() {
    for s in ["x + y^2", "y", "x", "2*x - 3*y + 1", "y + (x + y^2)^2"] {
        let v = is_coordinate(&p(s)).unwrap();
        let cert = v.certificate().unwrap_or_else(|| panic!("{s}: {v:?}"));
        verify_certificate(&p(s), cert).unwrap();
    }
    assert!(!is_coordinate(&p("x^2")).unwrap().is_coordinate());
}

#[test]
fn completions() {
    assert_eq!(complete_to_basis(&p("x")).unwrap(), p("y"));
    assert_eq!(complete_to_basis(&p("x + y^2")).unwrap(), p("y"));
    assert_eq!(complete_to_basis(&p("y")).unwrap(), p("x"));
    assert!(complete_to_basis(&p("x^2 + y")).is_ok());
    assert!(complete_to_basis(&p("x + x^2*y")).is_err());
}

#[test]
fn reduction_to_x() {
    let seq = reduce_to_x1(&p("x + y^2")).unwrap();
    let fs: Vec<_> = seq.elementary_factors().cloned().collect();
    assert_eq!(fs, vec![ElementaryFactor::shear(p("-y^2"))]);
    assert!(reduce_to_x1(&p("x")).unwrap().is_empty());
}

#[test]
fn random_images_of_x_are_coordinates() {
    let cfg = RandomTameConfig::default();
    for seed in 0..40 {
        let (m, _) = random_tame_automorphism(seed, &cfg);
        let f = &m.images()[0];
        let v = is_coordinate(f).unwrap();
        assert!(v.is_coordinate(), "seed {seed}: {f} -> {v:?}");
        let cert = v.certificate().unwrap();
        assert!(cert.trace.is_degree_monotone());
        let seq = straighten(f).unwrap();
        assert_eq!(apply_sequence(f, &seq).unwrap(), Polynomial::var(2, 0));
    }
}

#[test]
fn conjecture_g_examples() {
    match conjecture_g_search(&p("x + x^2*y"), DEFAULT_CONJG_BUDGET).unwrap() {
        ConjectureGVerdict::Witness { steps, singular_steps, pairs } => {
            assert_eq!(singular_steps, 1);
            assert_eq!(pairs[1], [p("1 + 2*x*y"), p("1/2*x")]);
            assert_eq!(pairs[2], [p("1"), p("1/2*x")]);
            let replay = replay_steps(&p("x + x^2*y"), &steps).unwrap();
            assert_eq!(replay.last().unwrap(), &[p("1"), p("0")]);
        }
        other => panic!("unexpected {other:?}"),
    }
    match conjecture_g_search(&p("x + y^2"), DEFAULT_CONJG_BUDGET).unwrap() {
        ConjectureGVerdict::Witness { singular_steps, .. } => assert_eq!(singular_steps, 0),
        other => panic!("unexpected {other:?}"),
    }
    assert!(!conjecture_g_search(&p("x + x^2*y"), 0).unwrap().is_witness());
    assert!(conjecture_g_search(&p("x^2"), 10).is_err());
}

#[test]
fn certificate_tampering_is_detected() {
    let f = p("y + (x + y^3)^2");
    let mut cert = is_coordinate(&f).unwrap().certificate().unwrap().clone();
    cert.q = &cert.q + &p("x");
    assert!(verify_certificate(&f, &cert).is_err());
}
