//! Constructive local exactness: the Poincare homotopy, recovery of a
//! Lagrangian from a variational source form, and the gauge reduction that
//! makes the recovered Lagrangian first order for second-order equations.
//!
//! Every homotopy integral is taken exactly over the reserved parameter
//! `t`, which restricts the integrands to polynomials in the scaled
//! coordinates.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::{Coordinate, Expression};
use crate::form::DifferentialForm;
use crate::lagrangian::{helmholtz_sonin, second_order_decompose, SourceForm};
use crate::operators::{p_operator, variational_delta};

/// A recovered Lagrangian together with the 1-form `kappa` (`d kappa = P d eps`)
/// used to build it.
#[derive(Clone, Debug)]
pub struct RecoveryReport {
    pub lagrangian: Expression,
    pub kappa: DifferentialForm,
    /// `None` when the Lagrangian is constant.
    pub order_of_lagrangian: Option<u32>,
    /// `delta[L] = eps`, recomputed from scratch.
    pub verification: bool,
}

fn scaling(coordinates: impl IntoIterator<Item = Coordinate>) -> BTreeMap<Coordinate, Expression> {
    let t = Expression::homotopy_parameter();
    coordinates
        .into_iter()
        .map(|c| (c, &t * &Expression::coordinate(c)))
        .collect()
}

/// Radial homotopy operator to the chart origin:
/// `h(a dx^1 ^ ... ^ dx^r) = sum_k (-1)^(k-1) x^k int_0^1 t^(r-1) a(tx) dt (...omit k...)`.
pub fn poincare_h(theta: &DifferentialForm) -> Result<DifferentialForm> {
    let r = theta.degree();
    if r == 0 {
        return Err(Error::InvalidDegree {
            expected: "at least 1",
            found: 0,
        });
    }
    let bindings = scaling(theta.coordinates());
    let weight = Expression::homotopy_parameter().pow(r as i32 - 1)?;
    let mut out = DifferentialForm::zero(r - 1);
    for (diffs, coefficient) in theta.terms() {
        if !coefficient.is_polynomial() {
            return Err(Error::NonPolynomialCoefficient);
        }
        let radial = (&coefficient.substitute(&bindings)? * &weight).integrate_parameter()?;
        for k in 0..r {
            let mut key = diffs.to_vec();
            let x = key.remove(k);
            let term = &radial * &Expression::coordinate(x);
            out.add_sorted(key, if k % 2 == 1 { -term } else { term });
        }
    }
    Ok(out)
}

/// A potential `H` with `dH/dc^i = h_i` over the fiber coordinates `c`,
/// normalized by `H = 0` where the fiber coordinates vanish.
pub fn fiber_potential(components: &[Expression], fiber: &[Coordinate]) -> Result<Expression> {
    if components.len() != fiber.len() {
        return Err(Error::DimensionMismatch {
            expected: fiber.len(),
            found: components.len(),
        });
    }
    for i in 0..fiber.len() {
        for j in (i + 1)..fiber.len() {
            let lhs = components[i].differentiate(fiber[j]);
            let rhs = components[j].differentiate(fiber[i]);
            if !(&lhs - &rhs).is_zero() {
                return Err(Error::SymmetryViolation { i: i + 1, j: j + 1 });
            }
        }
    }
    let in_fiber = |c: Coordinate| fiber.contains(&c);
    if !components.iter().all(|h| h.is_polynomial_in(in_fiber)) {
        return Err(Error::NonPolynomialCoefficient);
    }
    let bindings = scaling(fiber.iter().copied());
    let mut potential = Expression::zero();
    for (h, c) in components.iter().zip(fiber) {
        let radial = h.substitute(&bindings)?.integrate_parameter()?;
        potential += &radial * &Expression::coordinate(*c);
    }
    Ok(potential)
}

fn verify(lagrangian: &Expression, eps: &SourceForm) -> bool {
    let delta = variational_delta(&DifferentialForm::function(lagrangian.clone()));
    (&delta - &eps.to_form()).is_zero()
}

fn ensure_variational(eps: &SourceForm) -> Result<()> {
    let helmholtz = helmholtz_sonin(eps);
    if helmholtz.is_zero() {
        Ok(())
    } else {
        Err(Error::NotVariational { helmholtz })
    }
}

/// `L = h(eps - d_T h P d eps)`.
pub fn recover_lagrangian(eps: &SourceForm) -> Result<RecoveryReport> {
    ensure_variational(eps)?;
    let theta = eps.to_form();
    let kappa = poincare_h(&p_operator(&theta.exterior_d())?)?;
    finish(eps, &theta, kappa)
}

fn finish(
    eps: &SourceForm,
    theta: &DifferentialForm,
    kappa: DifferentialForm,
) -> Result<RecoveryReport> {
    let closed = theta - &kappa.total_derivative();
    let lagrangian = poincare_h(&closed)?
        .as_function()
        .expect("homotopy of a 1-form is a function");
    let order_of_lagrangian = lagrangian.max_order();
    let verification = verify(&lagrangian, eps);
    Ok(RecoveryReport {
        lagrangian,
        kappa,
        order_of_lagrangian,
        verification,
    })
}

/// Removes the components of `kappa` along `dq^i_(m)` for `m` from the top
/// order down to 1, each time subtracting `dH` for a fiber potential `H` over
/// the coordinates `q^i_(m)`. Returns every intermediate stage, starting
/// with `kappa` itself; the last one only has `dq^i` components.
pub fn gauge_reduce(kappa: &DifferentialForm, dim: usize) -> Result<Vec<DifferentialForm>> {
    let mut stages = vec![kappa.clone()];
    let top = kappa.max_differential_order().unwrap_or(0);
    for m in (1..=top).rev() {
        let current = stages.last().unwrap();
        let fiber: Vec<Coordinate> = (1..=dim as u32).map(|i| Coordinate::new(i, m)).collect();
        let components: Vec<Expression> =
            fiber.iter().map(|c| current.coefficient(&[*c])).collect();
        if components.iter().all(Expression::is_zero) {
            continue;
        }
        let potential = fiber_potential(&components, &fiber)?;
        let next = current - &DifferentialForm::function(potential).exterior_d();
        stages.push(next);
    }
    let last = stages.last().unwrap();
    if let Some((diffs, _)) = last.terms().find(|(d, c)| d[0].order() > 0 && !c.is_zero()) {
        return Err(Error::Internal(format!(
            "gauge reduction left a component along d{}",
            diffs[0]
        )));
    }
    Ok(stages)
}

/// First-order Lagrangian for a variational second-order source form.
pub fn recover_first_order(eps: &SourceForm) -> Result<RecoveryReport> {
    if let Some(order) = eps.max_order() {
        if order > 2 {
            return Err(Error::OrderTooHigh {
                max: 2,
                found: order,
            });
        }
    }
    ensure_variational(eps)?;
    second_order_decompose(eps)?;
    let theta = eps.to_form();
    let kappa = poincare_h(&p_operator(&theta.exterior_d())?)?;
    let stages = gauge_reduce(&kappa, eps.dim())?;
    let reduced = stages.last().unwrap().clone();
    let report = finish(eps, &theta, reduced)?;
    if report.order_of_lagrangian.is_some_and(|o| o > 1) {
        return Err(Error::Internal(format!(
            "recovered Lagrangian has order {}",
            report.order_of_lagrangian.unwrap()
        )));
    }
    Ok(report)
}
