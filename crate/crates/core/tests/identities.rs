use num_traits::Zero;

use qbc_core::combinat::Partition;
use qbc_core::identities::*;
use qbc_core::koornwinder::x_vars;
use qbc_core::qops::{conjugated_dgen, ParamQuad, Side};
use qbc_core::scalars::QMono;
use qbc_core::{QbcError, Sampler};

fn assert_pass(r: VerificationReport) {
    assert!(r.pass, "{} [{}] residuals {:?}", r.id, r.sizes, r.residuals);
    assert!(!r.residuals.is_empty());
    assert!(r.points.len() >= r.trials && r.points.len().is_multiple_of(r.trials));
}

#[test]
fn cauchy_examples() {
    assert_pass(verify_cauchy_kernel(1, 0, 11, 5).unwrap());
    assert_pass(verify_cauchy_kernel(1, 1, 11, 5).unwrap());
    assert_pass(verify_cauchy_kernel(2, 1, 11, 5).unwrap());
    // m < n uses the reciprocal branch of the prefactor
    assert_pass(verify_cauchy_kernel(1, 2, 11, 3).unwrap());
}

#[test]
fn cauchy_fails_when_base_is_swapped() {
    // The kernel with (q, t) exchanged is a different function; the identity
    // must not hold for it with the unswapped prefactor.
    let quad = ParamQuad::standard();
    let (xs, ys, u) = (x_vars(2), vec![QMono::y(0)], QMono::u());
    let mut s = Sampler::new(5, "negative");
    let mut hits = 0;
    for _ in 0..3 {
        let p = s.point();
        let lhs = conjugated_dgen(&u, &xs, &ys, &quad.hat(), Side::X, &p).unwrap();
        let rhs = conjugated_dgen(&u, &xs, &ys, &quad.hat(), Side::Y, &p).unwrap();
        let pre = p.ef(&u, &quad.alpha().unwrap(), &quad.t, 1).unwrap();
        if !(lhs - pre * rhs).is_zero() {
            hits += 1;
        }
    }
    assert_eq!(hits, 3);
}

#[test]
fn explicit_kernel_examples() {
    assert_pass(verify_theorem_2_2(2, 0, 12, 3).unwrap());
    assert_pass(verify_theorem_2_2(1, 1, 12, 3).unwrap());
    assert_pass(verify_theorem_2_2(2, 1, 12, 3).unwrap());
}

#[test]
fn coefficient_relation_examples() {
    assert_pass(verify_coefficient_relation(0, 1, 1, 13, 3).unwrap());
    let kns = verify_coefficient_relation(1, 2, 1, 13, 3).unwrap();
    assert!(kns.notes.iter().any(|n| n.contains("KNS")));
    assert_pass(kns);
    assert_pass(verify_coefficient_relation(2, 2, 2, 13, 2).unwrap());
}

#[test]
fn base_point_change_examples() {
    for l in 0..=3 {
        assert_pass(verify_saalschutz(l, false, 14, 5).unwrap());
        assert_pass(verify_saalschutz(l, true, 14, 2).unwrap());
    }
}

#[test]
fn type_bc_examples() {
    assert_pass(verify_transform_bc(&[1], &[], 10_000, 15, 2).unwrap());
    assert_pass(verify_transform_bc(&[1], &[1], 10_000, 15, 2).unwrap());
    assert_pass(verify_summation_n0(&[0, 0], 15, 2).unwrap());
    assert_pass(verify_summation_n0(&[1], 15, 2).unwrap());
}

#[test]
fn type_bc_respects_budget() {
    match verify_transform_bc(&[2, 1], &[1], 50, 1, 1) {
        Err(QbcError::ChainOverflow(count, 50)) => assert_eq!(count, 80),
        other => panic!("expected overflow, got {other:?}"),
    }
}

#[test]
fn type_c_examples() {
    assert_pass(verify_transform_c(&[0], &[0], 16, 2).unwrap());
    assert_pass(verify_transform_c(&[1], &[1], 16, 3).unwrap());
    assert_pass(verify_transform_c(&[2, 1], &[1], 16, 2).unwrap());
    assert_pass(verify_milne(&[2, 1, 0], 16, 3).unwrap());
    for size in 0..=2 {
        assert_pass(verify_lemma_3_1(Collapse::X, size, 16, 2).unwrap());
        assert_pass(verify_lemma_3_1(Collapse::Y, size, 16, 2).unwrap());
    }
}

#[test]
fn row_generating_function_examples() {
    assert_pass(verify_lemma_4_1(2, 1, 17, 3).unwrap());
    assert_pass(verify_lemma_4_2(0, 1, 17, 2).unwrap());
    assert_pass(verify_lemma_4_2(2, 2, 17, 2).unwrap());
}

#[test]
fn truncated_identity_needs_the_specialization() {
    // Away from t = q^-k the product is not a finite h-expansion.
    let quad = ParamQuad::standard();
    let p = Sampler::new(3, "generic t").point();
    let r = lemma_4_2_residual(1, &x_vars(1), &QMono::u(), &quad, &p).unwrap();
    assert!(!r.is_zero());
}

#[test]
fn h_d_examples() {
    assert_pass(verify_h_d_relation(0, 1, 1, 18, 2).unwrap());
    assert_pass(verify_h_d_relation(1, 1, 1, 18, 3).unwrap());
    assert_pass(verify_h_d_relation(2, 1, 2, 18, 2).unwrap());
}

#[test]
fn koornwinder_checks() {
    assert_pass(verify_eigen_suite(1, 3, 3, 19, 2).unwrap());
    let set: Vec<Partition> = [&[][..], &[1]].iter().map(|p| Partition::new(p).unwrap()).collect();
    assert_pass(verify_duality(&set, 1, 19, 2).unwrap());
    assert_pass(verify_dual_cauchy(1, 1, 19, 2).unwrap());
    assert_pass(verify_pieri(&Partition::new(&[1]).unwrap(), 1, 2, 19, 2).unwrap());
    assert_pass(verify_vanishing(2, 3, 2, 19, 2).unwrap());
}

#[test]
fn reports_are_deterministic() {
    let a = verify_theorem_2_2(1, 1, 42, 2).unwrap();
    let b = verify_theorem_2_2(1, 1, 42, 2).unwrap();
    assert_eq!(a.points, b.points);
    assert_eq!(a.residuals, b.residuals);
    let c = verify_theorem_2_2(1, 1, 43, 2).unwrap();
    assert_ne!(a.points, c.points);
}

#[test]
fn size_caps_are_enforced() {
    assert!(matches!(verify_cauchy_kernel(3, 2, 1, 1), Err(QbcError::Invalid(_))));
    assert!(matches!(verify_lemma_3_1(Collapse::X, 4, 1, 1), Err(QbcError::Invalid(_))));
}
