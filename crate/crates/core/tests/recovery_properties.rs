mod common;

use homvar::sample;
use homvar::{
    euler_lagrange, first_order_structure, gauge_reduce, p_operator, poincare_h,
    recover_first_order, recover_lagrangian, second_order_decompose,
};
use rand::Rng;

#[test]
fn homotopy_identity() {
    let mut rng = common::rng(41);
    for step in 0..300 {
        let shape = common::cycling_shape(step, 2);
        let r = rng.gen_range(1..=3.min(shape.dim * 3));
        let theta = sample::form(&mut rng, &shape, r);
        let back =
            &poincare_h(&theta.exterior_d()).unwrap() + &poincare_h(&theta).unwrap().exterior_d();
        assert_eq!(back, theta);
    }
}

#[test]
fn recovery_round_trip() {
    let mut rng = common::rng(42);
    for step in 0..80 {
        let shape = common::cycling_shape(step, 2);
        let l = sample::lagrangian(&mut rng, &shape);
        let eps = euler_lagrange(&l, shape.dim).unwrap();
        let report = recover_lagrangian(&eps).unwrap();
        assert!(report.verification, "{l}");
        let d_eps = eps.to_form().exterior_d();
        assert_eq!(report.kappa.exterior_d(), p_operator(&d_eps).unwrap());
    }
}

#[test]
fn first_order_round_trip() {
    let mut rng = common::rng(43);
    for step in 0..80 {
        let shape = common::cycling_shape(step, 1);
        let l = sample::lagrangian(&mut rng, &shape);
        let eps = euler_lagrange(&l, shape.dim).unwrap();
        let report = recover_first_order(&eps).unwrap();
        assert!(report.verification, "{l}");
        assert!(report.order_of_lagrangian.unwrap_or(0) <= 1);
        let recovered = euler_lagrange(&report.lagrangian, shape.dim).unwrap();
        assert_eq!(recovered.components(), eps.components());

        let structure = first_order_structure(&report.lagrangian, shape.dim);
        let decomposition = second_order_decompose(&eps).unwrap();
        assert_eq!(structure.a, decomposition.a, "{l}");
        assert_eq!(structure.b, decomposition.b, "{l}");
    }
}

#[test]
fn gauge_stages_stay_primitives_of_p_d_eps() {
    let mut rng = common::rng(44);
    for step in 0..60 {
        let shape = common::cycling_shape(step, 1);
        let l = sample::lagrangian(&mut rng, &shape);
        let eps = euler_lagrange(&l, shape.dim).unwrap();
        let target = p_operator(&eps.to_form().exterior_d()).unwrap();
        let kappa = poincare_h(&target).unwrap();
        for stage in gauge_reduce(&kappa, shape.dim).unwrap() {
            assert_eq!(stage.exterior_d(), target, "{l}");
        }
    }
}
