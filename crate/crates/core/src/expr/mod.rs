//! Exact scalar expressions over derivative coordinates.
//!
//! An [`Expression`] is a finite sum of terms, each a rational coefficient
//! times a product of atoms raised to non-zero integer powers. Atoms are
//! coordinates `q^i_(p)`, the reserved homotopy parameter, transcendental
//! factors `f(arg)` and (only with negative exponents) non-monomial
//! denominators. The canonical form keeps terms in a `BTreeMap`, so merging
//! and printing are deterministic.
//!
//! Canonicalization alone does not decide equality of rational functions
//! (`x/(x+y) + y/(x+y)` stays as two terms); [`Expression::is_zero`] clears
//! denominators first and is complete for rational expressions.

mod print;

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact coefficient field.
pub type Rational = BigRational;

/// Shorthand for the rational `numer / denom`.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// The derivative coordinate `q^index_(order)`.
///
/// Ordering is lexicographic in `(order, index)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coordinate {
    order: u32,
    index: u32,
}

impl Coordinate {
    /// # Panics
    /// If `index` is zero; base indices start at 1.
    pub fn new(index: u32, order: u32) -> Self {
        assert!(index >= 1, "coordinate base index starts at 1");
        Coordinate { order, index }
    }

    pub fn index(self) -> u32 {
        self.index
    }

    pub fn order(self) -> u32 {
        self.order
    }

    /// `q^i_(p+1)`.
    pub fn next(self) -> Self {
        Coordinate {
            order: self.order + 1,
            index: self.index,
        }
    }

    /// `q^i_(p-1)`, or `None` at order zero.
    pub fn prev(self) -> Option<Self> {
        self.order.checked_sub(1).map(|order| Coordinate {
            order,
            index: self.index,
        })
    }

    pub fn with_order(self, order: u32) -> Self {
        Coordinate {
            order,
            index: self.index,
        }
    }
}

/// The closed set of transcendental functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Function {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl Function {
    pub const ALL: [Function; 5] = [
        Function::Sin,
        Function::Cos,
        Function::Exp,
        Function::Ln,
        Function::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Sin => "sin",
            Function::Cos => "cos",
            Function::Exp => "exp",
            Function::Ln => "ln",
            Function::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Function::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Atom {
    Coord(Coordinate),
    /// Reserved homotopy scalar `t`; never produced by the parser.
    Param,
    Func(Function, Arc<Expression>),
    /// A primitive polynomial denominator; only ever carries negative exponents.
    Sum(Arc<Expression>),
}

impl Atom {
    fn inner(&self) -> Option<&Expression> {
        match self {
            Atom::Func(_, u) | Atom::Sum(u) => Some(u),
            _ => None,
        }
    }
}

/// Sorted by atom, no zero exponents.
pub(crate) type Monomial = Vec<(Atom, i32)>;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expression {
    terms: BTreeMap<Monomial, Rational>,
}

fn add_term(terms: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn multiply_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0.clone(), e));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn needs_normalization(m: &Monomial) -> bool {
    m.iter().any(|(atom, e)| match atom {
        Atom::Func(Function::Sqrt, _) => e.abs() >= 2,
        Atom::Sum(_) => *e > 0,
        _ => false,
    })
}

/// Builds `c * m`, reducing `sqrt(u)^e` to exponents in {-1, 0, 1} and
/// expanding positive powers of denominator atoms.
fn term_expression(c: Rational, m: Monomial) -> Expression {
    if c.is_zero() {
        return Expression::zero();
    }
    if !needs_normalization(&m) {
        let mut terms = BTreeMap::new();
        terms.insert(m, c);
        return Expression { terms };
    }
    let mut kept = Vec::with_capacity(m.len());
    let mut factor = Expression::one();
    for (atom, e) in m {
        match &atom {
            Atom::Func(Function::Sqrt, u) if e.abs() >= 2 => match u.pow(e / 2) {
                Ok(v) => {
                    if e % 2 != 0 {
                        kept.push((atom.clone(), e % 2));
                    }
                    factor = &factor * &v;
                }
                Err(_) => kept.push((atom, e)),
            },
            Atom::Sum(u) if e > 0 => {
                factor = &factor * &u.pow(e).expect("positive power");
            }
            _ => kept.push((atom, e)),
        }
    }
    let mut terms = BTreeMap::new();
    terms.insert(kept, c);
    &Expression { terms } * &factor
}

impl Expression {
    pub fn zero() -> Self {
        Expression::default()
    }

    pub fn one() -> Self {
        Expression::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        term_expression(c, Vec::new())
    }

    pub fn integer(n: i64) -> Self {
        Expression::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn coordinate(c: Coordinate) -> Self {
        term_expression(Rational::one(), vec![(Atom::Coord(c), 1)])
    }

    /// The reserved auxiliary scalar `t` used by homotopy integrals.
    ///
    /// It is not a coordinate: differentiation ignores it and the parser
    /// cannot produce it.
    pub fn homotopy_parameter() -> Self {
        term_expression(Rational::one(), vec![(Atom::Param, 1)])
    }

    /// `f(arg)` with the trivial evaluations at zero and one folded in.
    pub fn apply(f: Function, arg: Expression) -> Result<Expression> {
        if arg.terms.is_empty() {
            return match f {
                Function::Sin | Function::Sqrt => Ok(Expression::zero()),
                Function::Cos | Function::Exp => Ok(Expression::one()),
                Function::Ln => Err(Error::Domain("ln")),
            };
        }
        if f == Function::Ln && arg.as_constant().is_some_and(|c| c.is_one()) {
            return Ok(Expression::zero());
        }
        Ok(term_expression(
            Rational::one(),
            vec![(Atom::Func(f, Arc::new(arg)), 1)],
        ))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the expression is the constant `c` (including 0).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn scale(&self, c: &Rational) -> Expression {
        if c.is_zero() {
            return Expression::zero();
        }
        Expression {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    fn absorb(&mut self, other: Expression) {
        for (m, c) in other.terms {
            add_term(&mut self.terms, m, c);
        }
    }

    fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|m| m.iter().any(|(_, e)| *e < 0))
    }

    /// Largest negative power of every atom, as a monomial of positive exponents.
    fn negative_part(&self) -> Monomial {
        let mut worst: BTreeMap<&Atom, i32> = BTreeMap::new();
        for m in self.terms.keys() {
            for (atom, e) in m {
                if *e < 0 {
                    let slot = worst.entry(atom).or_insert(0);
                    *slot = (*slot).max(-e);
                }
            }
        }
        worst.into_iter().map(|(a, e)| (a.clone(), e)).collect()
    }

    /// Splits `self = numerator / denominator` with the numerator free of
    /// negative exponents; the denominator is returned as a monomial.
    fn clear_denominators(&self) -> (Monomial, Expression) {
        let mut denominator = Monomial::new();
        let mut current = self.clone();
        // sqrt(u)^2 -> u may reintroduce denominators from u; a few rounds settle it.
        for _ in 0..8 {
            let neg = current.negative_part();
            if neg.is_empty() {
                break;
            }
            let mut product = Expression::zero();
            for (m, c) in &current.terms {
                product.absorb(term_expression(c.clone(), multiply_monomials(m, &neg)));
            }
            current = product;
            denominator = multiply_monomials(&denominator, &neg);
        }
        (denominator, current)
    }

    /// Exact zero test: complete for rational functions of the coordinates;
    /// transcendental factors are compared structurally.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        if !self.has_negative_exponents() {
            return false;
        }
        self.clear_denominators().1.terms.is_empty()
    }

    fn invert_single(c: &Rational, m: &Monomial) -> Expression {
        let m = m.iter().map(|(a, e)| (a.clone(), -e)).collect();
        term_expression(c.recip(), m)
    }

    pub fn recip(&self) -> Result<Expression> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return Ok(Expression::invert_single(c, m));
        }
        let (denominator, numerator) = self.clear_denominators();
        let denominator = term_expression(Rational::one(), denominator);
        if numerator.terms.len() == 1 {
            let (m, c) = numerator.terms.iter().next().unwrap();
            return Ok(&denominator * &Expression::invert_single(c, m));
        }
        // pull out the monomial content so that x^2 + x*y becomes x*(x + y)
        let (first, _) = numerator.terms.iter().next().unwrap();
        let content: Monomial = first
            .iter()
            .filter_map(|(atom, _)| {
                let e = numerator
                    .terms
                    .keys()
                    .map(|m| m.iter().find(|(a, _)| a == atom).map_or(0, |(_, e)| *e))
                    .min()
                    .unwrap_or(0);
                (e > 0).then(|| (atom.clone(), e))
            })
            .collect();
        let inverse_content: Monomial = content.iter().map(|(a, e)| (a.clone(), -e)).collect();
        let mut reduced = Expression::zero();
        for (m, c) in &numerator.terms {
            reduced.absorb(term_expression(
                c.clone(),
                multiply_monomials(m, &inverse_content),
            ));
        }
        let lead = reduced.terms.values().next().unwrap().clone();
        let primitive = reduced.scale(&lead.recip());
        let outer = term_expression(lead.recip(), vec![(Atom::Sum(Arc::new(primitive)), -1)]);
        let outer = &outer * &term_expression(Rational::one(), inverse_content);
        Ok(&denominator * &outer)
    }

    pub fn checked_div(&self, rhs: &Expression) -> Result<Expression> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, n: i32) -> Result<Expression> {
        if n < 0 {
            return self.recip()?.pow(-n);
        }
        let mut result = Expression::one();
        let mut base = self.clone();
        let mut n = n as u32;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// All coordinates appearing anywhere, including inside function arguments.
    pub fn coordinates(&self) -> BTreeSet<Coordinate> {
        let mut out = BTreeSet::new();
        self.collect_coordinates(&mut out);
        out
    }

    fn collect_coordinates(&self, out: &mut BTreeSet<Coordinate>) {
        for m in self.terms.keys() {
            for (atom, _) in m {
                match atom {
                    Atom::Coord(c) => {
                        out.insert(*c);
                    }
                    Atom::Param => {}
                    Atom::Func(_, u) | Atom::Sum(u) => u.collect_coordinates(out),
                }
            }
        }
    }

    pub fn contains_parameter(&self) -> bool {
        self.terms.keys().any(|m| {
            m.iter().any(|(atom, _)| match atom {
                Atom::Param => true,
                Atom::Coord(_) => false,
                Atom::Func(_, u) | Atom::Sum(u) => u.contains_parameter(),
            })
        })
    }

    /// Highest derivative order present; `None` for constants (including zero).
    pub fn max_order(&self) -> Option<u32> {
        self.coordinates().iter().map(|c| c.order()).max()
    }

    /// Highest derivative order. `Ok(None)` stands for `-inf` (nonzero
    /// constants); the zero expression has no order.
    pub fn order_of(&self) -> Result<Option<u32>> {
        if self.is_zero() {
            return Err(Error::UndefinedOrder);
        }
        Ok(self.max_order())
    }

    /// True when every coordinate accepted by `selected` appears only as a
    /// plain factor with a positive exponent.
    pub fn is_polynomial_in(&self, selected: impl Fn(Coordinate) -> bool + Copy) -> bool {
        self.terms.keys().all(|m| {
            m.iter().all(|(atom, e)| match atom {
                Atom::Coord(c) => *e > 0 || !selected(*c),
                Atom::Param => true,
                Atom::Func(_, u) | Atom::Sum(u) => {
                    u.coordinates().into_iter().all(|c| !selected(c))
                }
            })
        })
    }

    pub fn is_polynomial(&self) -> bool {
        self.is_polynomial_in(|_| true)
    }

    /// Exact partial derivative with respect to `c`.
    pub fn differentiate(&self, c: Coordinate) -> Expression {
        let mut out = Expression::zero();
        for (m, coef) in &self.terms {
            for (k, (atom, e)) in m.iter().enumerate() {
                let inner = match atom {
                    Atom::Coord(x) if *x == c => None,
                    Atom::Coord(_) | Atom::Param => continue,
                    Atom::Func(f, u) => {
                        let du = u.differentiate(c);
                        if du.terms.is_empty() {
                            continue;
                        }
                        Some(&derivative_of(*f, u) * &du)
                    }
                    Atom::Sum(u) => {
                        let du = u.differentiate(c);
                        if du.terms.is_empty() {
                            continue;
                        }
                        Some(du)
                    }
                };
                let mut reduced = m.clone();
                if *e == 1 {
                    reduced.remove(k);
                } else {
                    reduced[k].1 = e - 1;
                }
                let base =
                    term_expression(coef * Rational::from_integer(BigInt::from(*e)), reduced);
                match inner {
                    None => out.absorb(base),
                    Some(inner) => out.absorb(&base * &inner),
                }
            }
        }
        out
    }

    /// `d_T f = sum q^i_(p+1) df/dq^i_(p)`.
    pub fn total_derivative(&self) -> Expression {
        let mut out = Expression::zero();
        for c in self.coordinates() {
            let partial = self.differentiate(c);
            out.absorb(&partial * &Expression::coordinate(c.next()));
        }
        out
    }

    /// Simultaneous substitution of coordinates.
    pub fn substitute(&self, bindings: &BTreeMap<Coordinate, Expression>) -> Result<Expression> {
        let mut out = Expression::zero();
        for (m, coef) in &self.terms {
            let mut value = Expression::constant(coef.clone());
            let mut untouched = Monomial::new();
            for (atom, e) in m {
                let replaced = match atom {
                    Atom::Coord(x) => bindings.get(x).cloned(),
                    Atom::Param => None,
                    Atom::Func(f, u) => {
                        if u.coordinates().iter().any(|c| bindings.contains_key(c)) {
                            Some(Expression::apply(*f, u.substitute(bindings)?)?)
                        } else {
                            None
                        }
                    }
                    Atom::Sum(u) => {
                        if u.coordinates().iter().any(|c| bindings.contains_key(c)) {
                            Some(u.substitute(bindings)?)
                        } else {
                            None
                        }
                    }
                };
                match replaced {
                    Some(v) => value = &value * &v.pow(*e)?,
                    None => untouched.push((atom.clone(), *e)),
                }
            }
            out.absorb(&value * &term_expression(Rational::one(), untouched));
        }
        Ok(out)
    }

    /// Exact `int_0^1 (.) dt` over the homotopy parameter.
    ///
    /// Fails unless the expression is a polynomial in `t` whose other
    /// factors do not involve `t`.
    pub fn integrate_parameter(&self) -> Result<Expression> {
        let mut out = Expression::zero();
        for (m, coef) in &self.terms {
            let mut power = 0;
            let mut rest = Monomial::with_capacity(m.len());
            for (atom, e) in m {
                match atom {
                    Atom::Param => power = *e,
                    other => {
                        if other.inner().is_some_and(Expression::contains_parameter) {
                            return Err(Error::NonPolynomialCoefficient);
                        }
                        rest.push((atom.clone(), *e));
                    }
                }
            }
            if power < 0 {
                return Err(Error::NonPolynomialCoefficient);
            }
            let weight = Rational::from_integer(BigInt::from(power + 1));
            add_term(&mut out.terms, rest, coef / weight);
        }
        Ok(out)
    }
}

fn derivative_of(f: Function, u: &Arc<Expression>) -> Expression {
    let atom =
        |g: Function, e: i32| term_expression(Rational::one(), vec![(Atom::Func(g, u.clone()), e)]);
    match f {
        Function::Sin => atom(Function::Cos, 1),
        Function::Cos => -atom(Function::Sin, 1),
        Function::Exp => atom(Function::Exp, 1),
        // ln(u) only exists for u not identically zero
        Function::Ln => u.recip().expect("logarithm of zero"),
        Function::Sqrt => term_expression(
            rational(1, 2),
            vec![(Atom::Func(Function::Sqrt, u.clone()), -1)],
        ),
    }
}

impl From<Coordinate> for Expression {
    fn from(c: Coordinate) -> Self {
        Expression::coordinate(c)
    }
}

impl From<Rational> for Expression {
    fn from(c: Rational) -> Self {
        Expression::constant(c)
    }
}

impl From<i64> for Expression {
    fn from(n: i64) -> Self {
        Expression::integer(n)
    }
}

impl Neg for &Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Expression {
    type Output = Expression;
    fn neg(mut self) -> Expression {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Add for &Expression {
    type Output = Expression;
    fn add(self, rhs: &Expression) -> Expression {
        let mut out = self.clone();
        out.absorb(rhs.clone());
        out
    }
}

impl Sub for &Expression {
    type Output = Expression;
    fn sub(self, rhs: &Expression) -> Expression {
        let mut out = self.clone();
        out.absorb(-rhs);
        out
    }
}

impl Mul for &Expression {
    type Output = Expression;
    fn mul(self, rhs: &Expression) -> Expression {
        let mut out = Expression::zero();
        let mut deferred = Vec::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = multiply_monomials(ma, mb);
                let c = ca * cb;
                if needs_normalization(&m) {
                    deferred.push(term_expression(c, m));
                } else {
                    add_term(&mut out.terms, m, c);
                }
            }
        }
        for e in deferred {
            out.absorb(e);
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Expression {
            type Output = Expression;
            fn $method(self, rhs: Expression) -> Expression {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Expression> for Expression {
            type Output = Expression;
            fn $method(self, rhs: &Expression) -> Expression {
                (&self).$method(rhs)
            }
        }
        impl $tr<Expression> for &Expression {
            type Output = Expression;
            fn $method(self, rhs: Expression) -> Expression {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Expression> for Expression {
    fn add_assign(&mut self, rhs: &Expression) {
        self.absorb(rhs.clone());
    }
}

impl AddAssign for Expression {
    fn add_assign(&mut self, rhs: Expression) {
        self.absorb(rhs);
    }
}

impl SubAssign<&Expression> for Expression {
    fn sub_assign(&mut self, rhs: &Expression) {
        self.absorb(-rhs);
    }
}

impl std::iter::Sum for Expression {
    fn sum<I: Iterator<Item = Expression>>(iter: I) -> Self {
        let mut out = Expression::zero();
        for e in iter {
            out.absorb(e);
        }
        out
    }
}
