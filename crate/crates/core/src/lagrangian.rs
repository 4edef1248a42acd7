//! Lagrangian-facing computations: Hilbert and Euler-Lagrange forms,
//! homogenisation and homogeneity, the Helmholtz-Sonin form and the affine
//! structure of second-order source forms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::expr::{rational, Coordinate, Expression, Rational};
use crate::form::DifferentialForm;
use crate::operators::{delta_field, total_derivative_n, variational_delta, vertical_s};

fn q(index: usize, order: u32) -> Coordinate {
    Coordinate::new(index as u32, order)
}

fn check_indices(e: &Expression, dim: usize) -> Result<()> {
    match e.coordinates().iter().find(|c| c.index() as usize > dim) {
        Some(c) => Err(Error::IndexOutOfRange {
            index: c.index(),
            dim,
        }),
        None => Ok(()),
    }
}

/// A 1-form `eps_i dq^i` with only order-zero differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceForm {
    components: Vec<Expression>,
}

impl SourceForm {
    /// Components `eps_1, ..., eps_N`; `N = components.len()` is the dimension.
    pub fn new(components: Vec<Expression>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput(
                "a source form needs at least one component".into(),
            ));
        }
        let dim = components.len();
        for c in &components {
            check_indices(c, dim)?;
        }
        Ok(SourceForm { components })
    }

    /// Reads `eps_i` off a 1-form, failing if any other differential is present.
    pub fn from_form(form: &DifferentialForm, dim: usize) -> Result<Self> {
        if form.degree() != 1 {
            return Err(Error::InvalidDegree {
                expected: "1",
                found: form.degree(),
            });
        }
        let mut components = vec![Expression::zero(); dim];
        for (diffs, coefficient) in form.terms() {
            let c = diffs[0];
            if c.order() != 0 {
                if coefficient.is_zero() {
                    continue;
                }
                return Err(Error::NotHorizontal {
                    index: c.index(),
                    order: c.order(),
                });
            }
            let slot =
                components
                    .get_mut(c.index() as usize - 1)
                    .ok_or(Error::IndexOutOfRange {
                        index: c.index(),
                        dim,
                    })?;
            *slot = coefficient.clone();
        }
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        SourceForm::new(components)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Expression] {
        &self.components
    }

    pub fn to_form(&self) -> DifferentialForm {
        let mut out = DifferentialForm::zero(1);
        for (i, c) in self.components.iter().enumerate() {
            out.add_sorted(vec![q(i + 1, 0)], c.clone());
        }
        out
    }

    pub fn max_order(&self) -> Option<u32> {
        self.components
            .iter()
            .filter_map(Expression::max_order)
            .max()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expression::is_zero)
    }
}

impl fmt::Display for SourceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_form().fmt(f)
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn alternating(p: u32, denominator: BigInt) -> Rational {
    let sign = if p.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    Rational::new(sign, denominator)
}

/// `theta_L = sum_p (-1)^p/(p+1)! d_T^p S^(p+1) dL`.
pub fn hilbert_form(l: &Expression) -> DifferentialForm {
    let dl = DifferentialForm::function(l.clone()).exterior_d();
    let mut out = DifferentialForm::zero(1);
    let mut chain = vertical_s(&dl);
    let mut p = 0u32;
    while !chain.is_zero() {
        let term = total_derivative_n(&chain, p as usize)
            .scale_rational(&alternating(p, factorial(p + 1)));
        out = &out + &term;
        chain = vertical_s(&chain);
        p += 1;
    }
    out
}

/// `eps_L = sum_p (-1)^p/p! d_T^p S^p dL` on an `dim`-dimensional manifold.
pub fn euler_lagrange(l: &Expression, dim: usize) -> Result<SourceForm> {
    check_indices(l, dim)?;
    let dl = DifferentialForm::function(l.clone()).exterior_d();
    let mut out = DifferentialForm::zero(1);
    let mut chain = dl;
    let mut p = 0u32;
    while !chain.is_zero() {
        let term =
            total_derivative_n(&chain, p as usize).scale_rational(&alternating(p, factorial(p)));
        out = &out + &term;
        chain = vertical_s(&chain);
        p += 1;
    }
    SourceForm::from_form(&out, dim).map_err(|e| match e {
        Error::NotHorizontal { index, order } => Error::Internal(format!(
            "Euler-Lagrange form has a component along dq{index}[{order}]"
        )),
        other => other,
    })
}

/// `L~ = q1' * L(q, q'/q1')`, with `q1` playing the role of time.
///
/// The input must be first order and must not involve `q1'`.
pub fn homogenize(l: &Expression, dim: usize) -> Result<Expression> {
    check_indices(l, dim)?;
    if let Some(order) = l.max_order() {
        if order > 1 {
            return Err(Error::OrderTooHigh {
                max: 1,
                found: order,
            });
        }
    }
    let time_velocity = q(1, 1);
    if l.coordinates().contains(&time_velocity) {
        return Err(Error::InvalidInput(
            "the Lagrangian to homogenize must not depend on q1', the time velocity".into(),
        ));
    }
    let t_dot = Expression::coordinate(time_velocity);
    let inverse = t_dot.recip()?;
    let bindings: BTreeMap<Coordinate, Expression> = (2..=dim)
        .map(|i| (q(i, 1), &Expression::coordinate(q(i, 1)) * &inverse))
        .collect();
    Ok(&t_dot * &l.substitute(&bindings)?)
}

/// Residuals of the homogeneity conditions up to order `k`.
#[derive(Clone, Debug)]
pub struct HomogeneityReport {
    /// `Delta^1(L) - L`, then `Delta^p(L)` for `p = 2..=k`.
    pub residuals: Vec<Expression>,
    pub homogeneous: bool,
}

pub fn check_homogeneous(l: &Expression, k: usize) -> Result<HomogeneityReport> {
    if k == 0 {
        return Err(Error::InvalidInput(
            "homogeneity order k must be at least 1".into(),
        ));
    }
    if let Some(order) = l.max_order() {
        if order as usize > k {
            return Err(Error::OrderTooHigh {
                max: k as u32,
                found: order,
            });
        }
    }
    let mut residuals = Vec::with_capacity(k);
    for p in 1..=k {
        let applied = delta_field(p)?.apply(l);
        residuals.push(if p == 1 { &applied - l } else { applied });
    }
    let homogeneous = residuals.iter().all(Expression::is_zero);
    Ok(HomogeneityReport {
        residuals,
        homogeneous,
    })
}

/// `(i_{Delta^p} theta_L, L_{Delta^p} theta_L)` for `p = 1..=k`.
///
/// For first-order homogeneous `L` both vanish; at higher order they are
/// reported without a claim.
pub fn projectability_residuals(
    l: &Expression,
    k: usize,
) -> Result<Vec<(DifferentialForm, DifferentialForm)>> {
    let theta = hilbert_form(l);
    (1..=k)
        .map(|p| {
            let field = delta_field(p)?;
            Ok((theta.contract(&field)?, theta.lie_derivative(&field)))
        })
        .collect()
}

/// The Helmholtz-Sonin form `delta(eps)`, zero iff `eps` is locally variational.
pub fn helmholtz_sonin(eps: &SourceForm) -> DifferentialForm {
    variational_delta(&eps.to_form())
}

/// The four coefficient families of the Helmholtz-Sonin form of a
/// second-order source form. Entry `[i][j]` (zero-based) multiplies
/// `dX^j ^ dY^i` as named by the field. The two families pairing a
/// differential with itself are stored antisymmetrized, so every family
/// vanishes entrywise exactly when the form does.
#[derive(Clone, Debug)]
pub struct HelmholtzCoefficients {
    /// `dq^j ^ dq^i`
    pub position: Vec<Vec<Expression>>,
    /// `dq'^j ^ dq^i`
    pub velocity: Vec<Vec<Expression>>,
    /// `dq''^j ^ dq^i`
    pub acceleration: Vec<Vec<Expression>>,
    /// `dq'^j ^ dq'^i`
    pub velocity_velocity: Vec<Vec<Expression>>,
}

impl HelmholtzCoefficients {
    pub fn dim(&self) -> usize {
        self.position.len()
    }

    /// Reassembles the 2-form.
    pub fn to_form(&self) -> DifferentialForm {
        let n = self.dim();
        let mut out = DifferentialForm::zero(2);
        let families = [
            (&self.position, 0, 0),
            (&self.velocity, 1, 0),
            (&self.acceleration, 2, 0),
            (&self.velocity_velocity, 1, 1),
        ];
        for (family, order_j, order_i) in families {
            for i in 0..n {
                for j in 0..n {
                    out.add_unsorted(
                        vec![q(j + 1, order_j), q(i + 1, order_i)],
                        family[i][j].clone(),
                    );
                }
            }
        }
        out
    }

    pub fn vanishes(&self) -> bool {
        self.to_form().is_zero()
    }
}

fn check_second_order(eps: &SourceForm) -> Result<()> {
    match eps.max_order() {
        Some(order) if order > 2 => Err(Error::OrderTooHigh {
            max: 2,
            found: order,
        }),
        _ => Ok(()),
    }
}

pub fn helmholtz_coefficients(eps: &SourceForm) -> Result<HelmholtzCoefficients> {
    check_second_order(eps)?;
    let n = eps.dim();
    let e = eps.components();
    let partial = |i: usize, j: usize, order: u32| e[i].differentiate(q(j + 1, order));
    let half = rational(1, 2);
    let quarter = rational(1, 4);
    let grid = |f: &dyn Fn(usize, usize) -> Expression| -> Vec<Vec<Expression>> {
        (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect()
    };
    let raw_position = |i: usize, j: usize| {
        &(&partial(i, j, 0) - &partial(i, j, 1).total_derivative().scale(&half))
            + &partial(i, j, 2)
                .total_derivative()
                .total_derivative()
                .scale(&quarter)
    };
    let position = grid(&|i, j| (&raw_position(i, j) - &raw_position(j, i)).scale(&half));
    let velocity = grid(&|i, j| {
        let sum = &(&partial(i, j, 1) + &partial(j, i, 1))
            - &(&partial(i, j, 2) + &partial(j, i, 2)).total_derivative();
        sum.scale(&half)
    });
    let acceleration = grid(&|i, j| (&partial(i, j, 2) - &partial(j, i, 2)).scale(&quarter));
    let velocity_velocity = grid(&|i, j| (&partial(j, i, 2) - &partial(i, j, 2)).scale(&quarter));
    Ok(HelmholtzCoefficients {
        position,
        velocity,
        acceleration,
        velocity_velocity,
    })
}

/// `eps_i = A_ij q''^j + B_i`.
#[derive(Clone, Debug)]
pub struct SecondOrderDecomposition {
    pub a: Vec<Vec<Expression>>,
    pub b: Vec<Expression>,
    /// Pairs `(i, j)`, `i < j`, with `A_ij != A_ji`; empty when `A` is symmetric.
    pub asymmetric: Vec<(usize, usize)>,
}

impl SecondOrderDecomposition {
    pub fn is_symmetric(&self) -> bool {
        self.asymmetric.is_empty()
    }

    /// `A_ij q''^j + B_i` for every `i`.
    pub fn reconstruct(&self) -> Vec<Expression> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, b)| {
                let affine: Expression = row
                    .iter()
                    .enumerate()
                    .map(|(j, a)| a * &Expression::coordinate(q(j + 1, 2)))
                    .sum();
                &affine + b
            })
            .collect()
    }
}

pub fn second_order_decompose(eps: &SourceForm) -> Result<SecondOrderDecomposition> {
    check_second_order(eps)?;
    let n = eps.dim();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for (i, e) in eps.components().iter().enumerate() {
        let row: Vec<Expression> = (0..n).map(|j| e.differentiate(q(j + 1, 2))).collect();
        for entry in &row {
            if (0..n).any(|k| !entry.differentiate(q(k + 1, 2)).is_zero()) {
                return Err(Error::NotAffine { component: i + 1 });
            }
        }
        let affine: Expression = row
            .iter()
            .enumerate()
            .map(|(j, a)| a * &Expression::coordinate(q(j + 1, 2)))
            .sum();
        b.push(e - &affine);
        a.push(row);
    }
    let mut asymmetric = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if !(&a[i][j] - &a[j][i]).is_zero() {
                asymmetric.push((i, j));
            }
        }
    }
    Ok(SecondOrderDecomposition { a, b, asymmetric })
}

/// The `A` and `B` a first-order Lagrangian induces on its Euler-Lagrange
/// form: `A_ij = -d2L/dq'^i dq'^j`, `B_i = dL/dq^i - q'^j d2L/dq^j dq'^i`.
pub fn first_order_structure(l: &Expression, dim: usize) -> SecondOrderDecomposition {
    let a = (1..=dim)
        .map(|i| {
            (1..=dim)
                .map(|j| -l.differentiate(q(i, 1)).differentiate(q(j, 1)))
                .collect()
        })
        .collect();
    let b = (1..=dim)
        .map(|i| {
            let mixed: Expression = (1..=dim)
                .map(|j| {
                    &Expression::coordinate(q(j, 1))
                        * &l.differentiate(q(j, 0)).differentiate(q(i, 1))
                })
                .sum();
            &l.differentiate(q(i, 0)) - &mixed
        })
        .collect();
    SecondOrderDecomposition {
        a,
        b,
        asymmetric: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_expression, parse_form};

    fn ex(text: &str) -> Expression {
        parse_expression(text, 3).unwrap()
    }

    fn form(text: &str) -> DifferentialForm {
        parse_form(text, 3).unwrap()
    }

    fn source(texts: &[&str]) -> SourceForm {
        SourceForm::new(
            texts
                .iter()
                .map(|t| parse_expression(t, texts.len()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    /// d/dq^i L - d_T dL/dq'^i for first-order L.
    fn classical_euler_lagrange(l: &Expression, dim: usize) -> Vec<Expression> {
        (1..=dim)
            .map(|i| &l.differentiate(q(i, 0)) - &l.differentiate(q(i, 1)).total_derivative())
            .collect()
    }

    #[test]
    fn hilbert_form_examples() {
        assert_eq!(hilbert_form(&ex("q1'^2/2")), form("q1'*dq1"));
        let finsler = ex("sqrt(q1'^2 + q2'^2)");
        let expected = form("q1'*dq1 + q2'*dq2").scale(&finsler.recip().unwrap());
        assert!((&hilbert_form(&finsler) - &expected).is_zero());
        assert_eq!(hilbert_form(&ex("q1''^2/2")), form("q1''*dq1' - q1'''*dq1"));
    }

    #[test]
    fn euler_lagrange_examples() {
        let free = euler_lagrange(&ex("q1'^2/2"), 1).unwrap();
        assert_eq!(
            free.components(),
            &classical_euler_lagrange(&ex("q1'^2/2"), 1)[..]
        );
        assert_eq!(free.to_form(), form("-q1''*dq1"));
        assert!(euler_lagrange(&ex("q1'"), 1).unwrap().is_zero());
        let pendulum = ex("q1'^2/2 - (1 - cos(q1))");
        let eps = euler_lagrange(&pendulum, 1).unwrap();
        assert_eq!(eps.components()[0], ex("-q1'' - sin(q1)"));
        assert_eq!(
            eps.components(),
            &classical_euler_lagrange(&pendulum, 1)[..]
        );
    }

    #[test]
    fn euler_lagrange_matches_hilbert_route() {
        for text in [
            "q1''^2/2 + q1*q2'",
            "q1'*q2'' - q3^2*q1'^2",
            "sin(q1)*q2'^2",
        ] {
            let l = ex(text);
            let eps = euler_lagrange(&l, 3).unwrap().to_form();
            let dl = DifferentialForm::function(l.clone()).exterior_d();
            let other = &dl - &hilbert_form(&l).total_derivative();
            assert!((&eps - &other).is_zero(), "{text}");
        }
    }

    #[test]
    fn homogenize_examples() {
        let free = homogenize(&parse_expression("q2'^2/2", 2).unwrap(), 2).unwrap();
        assert_eq!(free, parse_expression("q2'^2/(2*q1')", 2).unwrap());
        let volume = homogenize(&Expression::one(), 2).unwrap();
        assert_eq!(volume, parse_expression("q1'", 2).unwrap());
        assert!(check_homogeneous(&free, 1).unwrap().homogeneous);
        assert!(check_homogeneous(&volume, 1).unwrap().homogeneous);
        assert!(matches!(
            homogenize(&parse_expression("q2''", 2).unwrap(), 2),
            Err(Error::OrderTooHigh { max: 1, found: 2 })
        ));
        assert!(homogenize(&parse_expression("q1'", 2).unwrap(), 2).is_err());
    }

    #[test]
    fn check_homogeneous_examples() {
        let finsler = check_homogeneous(&ex("sqrt(q1'^2 + q2'^2)"), 1).unwrap();
        assert!(finsler.homogeneous);
        let quadratic = check_homogeneous(&ex("q1'^2/2"), 1).unwrap();
        assert!(!quadratic.homogeneous);
        assert_eq!(quadratic.residuals, vec![ex("q1'^2/2")]);
        let linear = check_homogeneous(&ex("q1'"), 2).unwrap();
        assert!(linear.homogeneous);
        assert_eq!(linear.residuals.len(), 2);
        assert!(check_homogeneous(&ex("q1''"), 1).is_err());
    }

    #[test]
    fn finsler_hilbert_form_is_projectable() {
        let residuals = projectability_residuals(&ex("sqrt(q1'^2 + q2'^2)"), 1).unwrap();
        assert!(residuals[0].0.is_zero());
        assert!(residuals[0].1.is_zero());
    }

    #[test]
    fn helmholtz_sonin_examples() {
        let eps = euler_lagrange(&ex("q1'^2*q2 + q3''*q1"), 3).unwrap();
        assert!(helmholtz_sonin(&eps).is_zero());
        let eps = source(&["0", "q1"]);
        assert_eq!(helmholtz_sonin(&eps), parse_form("dq1/\\dq2", 2).unwrap());
        let eps = source(&["q1'"]);
        assert_eq!(helmholtz_sonin(&eps), parse_form("dq1'/\\dq1", 1).unwrap());
    }

    #[test]
    fn helmholtz_coefficient_examples() {
        let eps = source(&["q1''*q2 + 3*q2''", "q1''*q1' + q2''"]);
        let h = helmholtz_coefficients(&eps).unwrap();
        let d = second_order_decompose(&eps).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expected = (&d.a[i][j] - &d.a[j][i]).scale(&rational(1, 4));
                assert!((&h.acceleration[i][j] - &expected).is_zero());
            }
        }
        assert!((&h.to_form() - &helmholtz_sonin(&eps)).is_zero());

        let h = helmholtz_coefficients(&source(&["-q1''"])).unwrap();
        for family in [
            &h.position,
            &h.velocity,
            &h.acceleration,
            &h.velocity_velocity,
        ] {
            assert!(family[0][0].is_zero());
        }

        let eps = source(&["q1''", "2*q2'' + q1"]);
        let h = helmholtz_coefficients(&eps).unwrap();
        assert_eq!(h.position[1][0], Expression::constant(rational(1, 2)));
        assert_eq!(h.position[0][1], Expression::constant(rational(-1, 2)));
        assert!(!h.vanishes());
        assert!(helmholtz_coefficients(&source(&["q1'''"])).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let d = second_order_decompose(&source(&["-q1'' - sin(q1)"])).unwrap();
        assert_eq!(d.a[0][0], ex("-1"));
        assert_eq!(d.b[0], ex("-sin(q1)"));
        assert!(matches!(
            second_order_decompose(&source(&["q1''^2"])),
            Err(Error::NotAffine { component: 1 })
        ));
        let d = second_order_decompose(&source(&["0", "0"])).unwrap();
        assert!(d.a.iter().flatten().all(Expression::is_zero));
        assert!(d.b.iter().all(Expression::is_zero));
        let d = second_order_decompose(&source(&["q2''", "0"])).unwrap();
        assert_eq!(d.asymmetric, vec![(0, 1)]);
        let eps = source(&["q1''*q2 + q1'", "q2''*q1'^2 + q1"]);
        let d = second_order_decompose(&eps).unwrap();
        assert_eq!(d.reconstruct(), eps.components());
    }

    #[test]
    fn first_order_structure_matches_decomposition() {
        let l = ex("(1 + q1^2)*q1'^2/2 + q1'*q2'*q3 - q2^3");
        let eps = euler_lagrange(&l, 3).unwrap();
        let d = second_order_decompose(&eps).unwrap();
        let s = first_order_structure(&l, 3);
        assert!(d.is_symmetric());
        for i in 0..3 {
            assert!((&d.b[i] - &s.b[i]).is_zero());
            for j in 0..3 {
                assert!((&d.a[i][j] - &s.a[i][j]).is_zero());
            }
        }
    }

    #[test]
    fn source_form_rejects_vertical_components() {
        assert!(matches!(
            SourceForm::from_form(&form("q1*dq1'"), 1),
            Err(Error::NotHorizontal { index: 1, order: 1 })
        ));
        assert!(SourceForm::from_form(&form("dq3"), 2).is_err());
    }
}
