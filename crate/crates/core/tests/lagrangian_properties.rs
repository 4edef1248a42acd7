mod common;

use homvar::sample;
use homvar::{
    check_homogeneous, delta_field, euler_lagrange, helmholtz_coefficients, helmholtz_sonin,
    hilbert_form, homogenize, p_operator, projectability_residuals, second_order_decompose,
    variational_delta, Coordinate, DifferentialForm, Expression, SourceForm,
};
use rand::Rng;

#[test]
fn euler_lagrange_is_the_variational_derivative() {
    let mut rng = common::rng(31);
    for step in 0..150 {
        let shape = common::cycling_shape(step, 2);
        let l = sample::lagrangian(&mut rng, &shape);
        let eps = euler_lagrange(&l, shape.dim).unwrap();
        assert_eq!(
            eps.to_form(),
            variational_delta(&DifferentialForm::function(l.clone())),
            "{l}"
        );
    }
}

#[test]
fn euler_lagrange_ignores_total_derivatives() {
    let mut rng = common::rng(32);
    for step in 0..120 {
        let shape = common::cycling_shape(step, 2);
        let l = sample::lagrangian(&mut rng, &shape);
        let f = sample::polynomial(&mut rng, &common::shape(shape.dim, 1));
        let gauged = &l + &f.total_derivative();
        assert_eq!(
            euler_lagrange(&gauged, shape.dim).unwrap().components(),
            euler_lagrange(&l, shape.dim).unwrap().components()
        );
    }
}

#[test]
fn hilbert_form_is_p_of_dl() {
    let mut rng = common::rng(33);
    for step in 0..150 {
        let shape = common::cycling_shape(step, 2);
        let l = sample::lagrangian(&mut rng, &shape);
        let dl = DifferentialForm::function(l.clone()).exterior_d();
        assert_eq!(hilbert_form(&l), p_operator(&dl).unwrap(), "{l}");
    }
}

#[test]
fn euler_lagrange_matches_first_order_classical_formula() {
    let mut rng = common::rng(34);
    for step in 0..100 {
        let shape = common::cycling_shape(step, 1);
        let l = sample::lagrangian(&mut rng, &shape);
        let eps = euler_lagrange(&l, shape.dim).unwrap();
        for i in 1..=shape.dim as u32 {
            let classical = &l.differentiate(Coordinate::new(i, 0))
                - &l.differentiate(Coordinate::new(i, 1)).total_derivative();
            assert_eq!(eps.components()[i as usize - 1], classical);
        }
    }
}

fn second_order_source(rng: &mut impl Rng, dim: usize) -> SourceForm {
    let lower = common::shape(dim, 1);
    let components = (0..dim)
        .map(|_| {
            let mut e = sample::polynomial(rng, &lower);
            for j in 1..=dim as u32 {
                if rng.gen_bool(0.6) {
                    let a = sample::monomial(
                        rng,
                        &sample::Shape {
                            max_degree: 2,
                            ..lower
                        },
                    );
                    e += &a * &Expression::coordinate(Coordinate::new(j, 2));
                }
            }
            e
        })
        .collect();
    SourceForm::new(components).unwrap()
}

#[test]
fn helmholtz_families_reassemble_to_the_helmholtz_form() {
    let mut rng = common::rng(35);
    for step in 0..150 {
        let dim = step % 3 + 1;
        let eps = if step % 2 == 0 {
            second_order_source(&mut rng, dim)
        } else {
            sample::source_form(&mut rng, &common::shape(dim, 2))
        };
        let families = helmholtz_coefficients(&eps).unwrap();
        assert_eq!(families.to_form(), helmholtz_sonin(&eps), "{eps}");
        assert_eq!(families.vanishes(), helmholtz_sonin(&eps).is_zero());
    }
}

#[test]
fn helmholtz_families_vanish_on_euler_lagrange_forms() {
    let mut rng = common::rng(36);
    for step in 0..100 {
        let shape = common::cycling_shape(step, 1);
        let l = sample::lagrangian(&mut rng, &shape);
        let eps = euler_lagrange(&l, shape.dim).unwrap();
        let families = helmholtz_coefficients(&eps).unwrap();
        for family in [
            &families.position,
            &families.velocity,
            &families.acceleration,
            &families.velocity_velocity,
        ] {
            assert!(family.iter().flatten().all(Expression::is_zero), "{l}");
        }
    }
}

#[test]
fn second_order_decomposition_reconstructs() {
    let mut rng = common::rng(37);
    for step in 0..100 {
        let eps = second_order_source(&mut rng, step % 3 + 1);
        let d = second_order_decompose(&eps).unwrap();
        assert_eq!(d.reconstruct(), eps.components());
        assert!(d
            .a
            .iter()
            .flatten()
            .chain(&d.b)
            .all(|e| e.max_order().unwrap_or(0) <= 1));
    }
}

#[test]
fn homogenized_lagrangians_are_homogeneous_and_projectable() {
    let mut rng = common::rng(38);
    for step in 0..60 {
        let dim = step % 2 + 2;
        let shape = common::shape(dim, 1);
        let l = sample::lagrangian(&mut rng, &shape);
        let l = l
            .substitute(
                &[(Coordinate::new(1, 1), Expression::zero())]
                    .into_iter()
                    .collect(),
            )
            .unwrap();
        let homogeneous = homogenize(&l, dim).unwrap();
        let report = check_homogeneous(&homogeneous, 1).unwrap();
        assert!(report.homogeneous, "{l} -> {homogeneous}");
        for (contraction, lie) in projectability_residuals(&homogeneous, 1).unwrap() {
            assert!(contraction.is_zero() && lie.is_zero(), "{homogeneous}");
        }
    }
}

#[test]
fn liouville_field_measures_degree() {
    let delta = delta_field(1).unwrap();
    let mut rng = common::rng(39);
    for _ in 0..50 {
        let velocity: Expression = (1..=3u32)
            .map(|i| {
                let c: i64 = rng.gen_range(-3..=3);
                &Expression::integer(c) * &Expression::coordinate(Coordinate::new(i, 1))
            })
            .sum();
        let cubic = velocity.pow(3).unwrap();
        assert_eq!(delta.apply(&cubic), cubic.scale(&homvar::rational(3, 1)));
    }
}
