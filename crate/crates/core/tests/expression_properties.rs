mod common;

use homvar::sample;
use homvar::{parse_expression, parse_form, Coordinate, Expression, Function};
use proptest::prelude::*;
use rand::Rng;

fn expression(seed: u64) -> Expression {
    let mut rng = common::rng(seed);
    let shape = common::shape(3, 3);
    let mut e = sample::polynomial(&mut rng, &shape);
    if rng.gen_bool(0.5) {
        let function = Function::ALL[rng.gen_range(0..Function::ALL.len())];
        let argument = &sample::polynomial(&mut rng, &shape) + &Expression::integer(5);
        if let Ok(f) = Expression::apply(function, argument) {
            e += &sample::monomial(&mut rng, &shape) * &f;
        }
    }
    if rng.gen_bool(0.3) {
        let square = sample::polynomial(&mut rng, &shape).pow(2).unwrap();
        e += (&square + &Expression::one()).recip().unwrap();
    }
    e
}

fn coordinates() -> Vec<Coordinate> {
    (1..=3)
        .flat_map(|i| (0..=3).map(move |p| Coordinate::new(i, p)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixed_partials_commute(seed in any::<u64>()) {
        let e = expression(seed);
        let all = coordinates();
        for a in &all {
            let ea = e.differentiate(*a);
            for b in &all {
                let ab = ea.differentiate(*b);
                let ba = e.differentiate(*b).differentiate(*a);
                prop_assert!((&ab - &ba).is_zero(), "{} / {} / {}", e, a, b);
            }
        }
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let e = expression(seed);
        let printed = e.to_string();
        prop_assert_eq!(parse_expression(&printed, 3).unwrap(), e);
    }

    #[test]
    fn form_printing_round_trips(seed in any::<u64>(), degree in 0usize..=3) {
        let mut rng = common::rng(seed);
        let theta = sample::form(&mut rng, &common::shape(3, 2), degree);
        prop_assert_eq!(parse_form(&theta.to_string(), 3).unwrap(), theta);
    }

    #[test]
    fn differences_vanish(seed in any::<u64>()) {
        let e = expression(seed);
        let zero = &e - &e;
        prop_assert!(zero.is_zero());
        for c in coordinates() {
            prop_assert!(zero.differentiate(c).is_zero());
        }
    }

    #[test]
    fn total_derivative_is_a_derivation(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (expression(a), expression(b));
        let lhs = (&x * &y).total_derivative();
        let rhs = &(&x.total_derivative() * &y) + &(&x * &y.total_derivative());
        prop_assert!((&lhs - &rhs).is_zero());
    }
}
