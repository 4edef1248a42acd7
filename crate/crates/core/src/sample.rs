//! Seeded random generators of polynomial expressions, forms and source
//! forms, used by the property and acceptance suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::expr::{Coordinate, Expression};
use crate::form::DifferentialForm;
use crate::lagrangian::SourceForm;

/// Shape of the random objects.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    /// Number of base coordinates `N`.
    pub dim: usize,
    /// Highest derivative order used in coefficients and differentials.
    pub max_order: u32,
    /// Highest total degree of a monomial.
    pub max_degree: usize,
    /// Upper bound on the number of terms.
    pub max_terms: usize,
    /// Integer coefficients are drawn from `-coefficient_bound..=coefficient_bound`.
    pub coefficient_bound: i64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            dim: 2,
            max_order: 2,
            max_degree: 3,
            max_terms: 4,
            coefficient_bound: 3,
        }
    }
}

fn coordinate<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Coordinate {
    Coordinate::new(
        rng.gen_range(1..=shape.dim as u32),
        rng.gen_range(0..=shape.max_order),
    )
}

fn nonzero_integer<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> i64 {
    loop {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            return c;
        }
    }
}

/// A monomial of total degree `0..=max_degree` with a nonzero integer coefficient.
pub fn monomial<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Expression {
    let degree = rng.gen_range(0..=shape.max_degree);
    let mut out = Expression::integer(nonzero_integer(rng, shape.coefficient_bound));
    for _ in 0..degree {
        out = &out * &Expression::coordinate(coordinate(rng, shape));
    }
    out
}

/// A polynomial with `1..=max_terms` random monomials (terms may merge).
pub fn polynomial<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Expression {
    let terms = rng.gen_range(1..=shape.max_terms);
    (0..terms).map(|_| monomial(rng, shape)).sum()
}

/// A polynomial without a constant term.
pub fn lagrangian<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> Expression {
    let terms = rng.gen_range(1..=shape.max_terms);
    (0..terms)
        .map(|_| {
            let degree = rng.gen_range(1..=shape.max_degree.max(1));
            let mut out = Expression::integer(nonzero_integer(rng, shape.coefficient_bound));
            for _ in 0..degree {
                out = &out * &Expression::coordinate(coordinate(rng, shape));
            }
            out
        })
        .sum()
}

/// An r-form with `1..=max_terms` terms, each a random monomial coefficient
/// times a wedge of `degree` distinct differentials.
pub fn form<R: Rng + ?Sized>(rng: &mut R, shape: &Shape, degree: usize) -> DifferentialForm {
    let mut pool: Vec<Coordinate> = (1..=shape.dim as u32)
        .flat_map(|i| (0..=shape.max_order).map(move |p| Coordinate::new(i, p)))
        .collect();
    assert!(
        degree <= pool.len(),
        "not enough coordinates for the requested degree"
    );
    let terms = rng.gen_range(1..=shape.max_terms);
    let mut out = DifferentialForm::zero(degree);
    for _ in 0..terms {
        pool.shuffle(rng);
        let coefficient = monomial(rng, shape);
        out = &out + &DifferentialForm::monomial(coefficient, &pool[..degree]);
    }
    out
}

/// A source form with polynomial components.
pub fn source_form<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> SourceForm {
    let components = (0..shape.dim).map(|_| polynomial(rng, shape)).collect();
    SourceForm::new(components).expect("indices are within the dimension")
}
