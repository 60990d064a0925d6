//! Reduced formulas on the phase algebra against direct computation.

mod common;

use common::{random_instance, rng};
use gkforge_core::hermitian::{
    bismut_closed_form, bismut_curvature_closed_form, canonical_connections_direct, chern_closed_form,
    chern_curvature_closed_form, d_omega, d_omega_block_defect, gamma_phase_closed_forms, lee_form_direct,
    pluriclosed_block_defect, pluriclosed_direct, pluriclosed_residual,
};
use gkforge_core::phase;

#[test]
fn lee_form_is_theta0_on_horizontal_and_zero_on_vertical() {
    let mut rng = rng(1);
    for _ in 0..10 {
        let ar = random_instance(&mut rng);
        let ps = phase(ar.algebra(), ar.metric()).unwrap();
        let theta = lee_form_direct(&ps);
        assert_eq!(theta, ps.horizontal(&ar.difference().theta0()));
    }
}

#[test]
fn d_omega_blocks() {
    let mut rng = rng(2);
    for _ in 0..5 {
        let ar = random_instance(&mut rng);
        let ps = phase(ar.algebra(), ar.metric()).unwrap();
        assert_eq!(d_omega_block_defect(&ar, &d_omega(&ps)), None);
    }
}

#[test]
fn pluriclosed_four_form_matches_reduced_residual() {
    let mut rng = rng(3);
    for _ in 0..5 {
        let ar = random_instance(&mut rng);
        let ps = phase(ar.algebra(), ar.metric()).unwrap();
        let (form, holds) = pluriclosed_direct(&ps);
        assert_eq!(pluriclosed_block_defect(&ar, &form), None);
        assert_eq!(holds, pluriclosed_residual(&ar).first_nonzero(0.0).is_none());
    }
}

#[test]
fn difference_tensor_of_phase_matches_closed_forms() {
    let mut rng = rng(4);
    for _ in 0..5 {
        let ar = random_instance(&mut rng);
        let ps = phase(ar.algebra(), ar.metric()).unwrap();
        assert_eq!(gamma_phase_closed_forms(&ar, &ps).defect(0.0), None);
    }
}

#[test]
fn canonical_connections_match_closed_forms() {
    let mut rng = rng(5);
    for _ in 0..5 {
        let ar = random_instance(&mut rng);
        let ps = phase(ar.algebra(), ar.metric()).unwrap();
        let cc = canonical_connections_direct(&ps);
        assert_eq!(cc.hermitian_defect(&ps), None);
        assert_eq!(cc.bismut_torsion_defect(&ps), None);
        assert_eq!(cc.chern_torsion_defect(&ps), None);
        assert_eq!(cc.bismut.sub(&bismut_closed_form(&ar)).first_nonzero(0.0), None, "bismut");
        assert_eq!(cc.chern.sub(&chern_closed_form(&ar)).first_nonzero(0.0), None, "chern");
        assert_eq!(cc.bismut_curvature.sub(&bismut_curvature_closed_form(&ar)).first_nonzero(0.0), None, "R^B");
        assert_eq!(cc.chern_curvature.sub(&chern_curvature_closed_form(&ar)).first_nonzero(0.0), None, "R^C");
        assert_eq!(cc.bismut_ricci, ar.ricci_bismut().to_phase_matrix(), "rho^B");
        assert_eq!(cc.chern_ricci, ar.ricci_chern().to_phase_matrix(), "rho^C");
    }
}
