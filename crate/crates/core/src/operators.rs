//! The operator calculus of the homogeneous variational bicomplex: total
//! derivative, vertical endomorphism, fundamental fields, the operator `P`
//! inverting `d_T`, the projector onto `Psi` and the variational derivative.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::expr::{Coordinate, Expression, Rational};
use crate::form::{CoordinateVectorField, DifferentialForm};

/// Objects the total time derivative acts on.
pub trait TotalDerivative {
    fn total_derivative(&self) -> Self;
}

impl TotalDerivative for Expression {
    fn total_derivative(&self) -> Self {
        Expression::total_derivative(self)
    }
}

impl TotalDerivative for DifferentialForm {
    fn total_derivative(&self) -> Self {
        DifferentialForm::total_derivative(self)
    }
}

/// `d_T`, on functions or on forms (where it commutes with `d`).
pub fn total_derivative<T: TotalDerivative>(x: &T) -> T {
    x.total_derivative()
}

/// `d_T` applied `n` times.
pub fn total_derivative_n(theta: &DifferentialForm, n: usize) -> DifferentialForm {
    (0..n).fold(theta.clone(), |acc, _| acc.total_derivative())
}

/// The vertical endomorphism acting on forms as the degree-0 derivation with
/// `S(f) = 0` and `S(dq^i_(p)) = p dq^i_(p-1)`.
pub fn vertical_s(theta: &DifferentialForm) -> DifferentialForm {
    theta.derivation(None, &|c: Coordinate| {
        c.prev()
            .map(|lower| (Rational::from_integer(BigInt::from(c.order())), lower))
    })
}

/// `Delta^p = S^p(d_T)`: component `r(r-1)...(r-p+1) q^i_(r-p+1)` on
/// `d/dq^i_(r)` for `r >= p`, zero below.
pub fn delta_field(p: usize) -> Result<CoordinateVectorField> {
    if p < 1 {
        return Err(Error::InvalidFieldIndex(p));
    }
    let p = p as u32;
    Ok(CoordinateVectorField::from_rule(move |c| {
        let r = c.order();
        if r < p {
            return Expression::zero();
        }
        let weight: i64 = ((r - p + 1)..=r).map(i64::from).product();
        Expression::integer(weight) * Expression::coordinate(c.with_order(r - p + 1))
    }))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// `P = sum_p (-1)^p / (r^(p+1) (p+1)!) d_T^p S^(p+1)` on r-forms, summed
/// until the `S`-chain vanishes.
pub fn p_operator(theta: &DifferentialForm) -> Result<DifferentialForm> {
    let r = theta.degree();
    if r == 0 {
        return Err(Error::InvalidDegree {
            expected: "at least 1",
            found: 0,
        });
    }
    let r_big = BigInt::from(r);
    let mut out = DifferentialForm::zero(r);
    let mut chain = vertical_s(theta);
    let mut p: u32 = 0;
    while !chain.is_zero() {
        let denominator = num_traits::pow(r_big.clone(), p as usize + 1) * factorial(p + 1);
        let sign = if p.is_multiple_of(2) {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let weight = Rational::new(sign, denominator);
        let term = total_derivative_n(&chain, p as usize).scale_rational(&weight);
        out = &out + &term;
        chain = vertical_s(&chain);
        p += 1;
    }
    Ok(out)
}

/// `theta - d_T P theta`, the representative of `[theta]` modulo `d_T`-exact forms.
pub fn canonical_representative(theta: &DifferentialForm) -> Result<DifferentialForm> {
    let p = p_operator(theta)?;
    Ok(theta - &p.total_derivative())
}

/// `delta(theta) = d theta - d_T P d theta`; a 0-form stands for its class
/// modulo constants.
pub fn variational_delta(theta: &DifferentialForm) -> DifferentialForm {
    let d = theta.exterior_d();
    let p = p_operator(&d).expect("exterior derivative has positive degree");
    &d - &p.total_derivative()
}

/// Outcome of the `S theta = 0` test.
#[derive(Clone, Debug)]
pub struct PsiMembership {
    pub form: DifferentialForm,
    pub s_image: DifferentialForm,
    pub in_psi: bool,
}

pub fn psi_membership(theta: &DifferentialForm) -> Result<PsiMembership> {
    if theta.degree() == 0 {
        return Err(Error::InvalidDegree {
            expected: "at least 1",
            found: 0,
        });
    }
    let s_image = vertical_s(theta);
    let in_psi = s_image.is_zero();
    Ok(PsiMembership {
        form: theta.clone(),
        s_image,
        in_psi,
    })
}
