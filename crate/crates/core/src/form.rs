//! Differential forms on the formal infinite-order tower of derivative
//! coordinates, and coordinate vector fields acting on them.
//!
//! A form never records an ambient order: `dq^i_(p)` for any `p` is
//! available, so pull-back to a higher order is the identity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{Coordinate, Expression, Rational};

/// Sorts `list` in place, returning whether the permutation was odd; `None`
/// if a differential repeats (the wedge vanishes).
fn sort_with_sign(list: &mut [Coordinate]) -> Option<bool> {
    let mut odd = false;
    for i in 1..list.len() {
        let mut j = i;
        while j > 0 && list[j - 1] > list[j] {
            list.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
        if j > 0 && list[j - 1] == list[j] {
            return None;
        }
    }
    // an equal pair can also end up adjacent below the insertion point
    if list.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(odd)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DifferentialForm {
    degree: usize,
    terms: BTreeMap<Vec<Coordinate>, Expression>,
}

impl DifferentialForm {
    pub fn zero(degree: usize) -> Self {
        DifferentialForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A 0-form.
    pub fn function(f: Expression) -> Self {
        let mut out = DifferentialForm::zero(0);
        out.add_sorted(Vec::new(), f);
        out
    }

    pub fn differential(c: Coordinate) -> Self {
        DifferentialForm::monomial(Expression::one(), &[c])
    }

    /// `coefficient * dx_1 ^ ... ^ dx_r`, with the differentials in any order.
    pub fn monomial(coefficient: Expression, differentials: &[Coordinate]) -> Self {
        let mut out = DifferentialForm::zero(differentials.len());
        out.add_unsorted(differentials.to_vec(), coefficient);
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Terms in canonical order: strictly increasing differentials and their coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (&[Coordinate], &Expression)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `dx_1 ^ ... ^ dx_r` for differentials in any order.
    pub fn coefficient(&self, differentials: &[Coordinate]) -> Expression {
        let mut key = differentials.to_vec();
        match sort_with_sign(&mut key) {
            None => Expression::zero(),
            Some(odd) => {
                let c = self.terms.get(&key).cloned().unwrap_or_default();
                if odd {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// The underlying function of a 0-form.
    pub fn as_function(&self) -> Option<Expression> {
        (self.degree == 0).then(|| self.terms.get(&Vec::new()).cloned().unwrap_or_default())
    }

    /// Exact: every coefficient is identically zero.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Expression::is_zero)
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_sorted(&mut self, key: Vec<Coordinate>, coefficient: Expression) {
        debug_assert_eq!(key.len(), self.degree);
        if coefficient.is_structurally_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(slot) => {
                *slot += coefficient;
                if slot.is_structurally_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coefficient);
            }
        }
    }

    pub(crate) fn add_unsorted(&mut self, mut key: Vec<Coordinate>, coefficient: Expression) {
        match sort_with_sign(&mut key) {
            None => {}
            Some(false) => self.add_sorted(key, coefficient),
            Some(true) => self.add_sorted(key, -coefficient),
        }
    }

    pub fn scale(&self, f: &Expression) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.degree);
        for (k, v) in &self.terms {
            out.add_sorted(k.clone(), v * f);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.degree);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.add_sorted(k.clone(), v.scale(c));
        }
        out
    }

    /// Maps every coefficient, keeping the differentials.
    pub fn map_coefficients(&self, f: impl Fn(&Expression) -> Expression) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.degree);
        for (k, v) in &self.terms {
            out.add_sorted(k.clone(), f(v));
        }
        out
    }

    /// Every coordinate occurring in a coefficient or as a differential.
    pub fn coordinates(&self) -> BTreeSet<Coordinate> {
        let mut out = BTreeSet::new();
        for (k, v) in &self.terms {
            out.extend(k.iter().copied());
            out.extend(v.coordinates());
        }
        out
    }

    /// Highest derivative order of any coefficient or differential.
    pub fn max_order(&self) -> Option<u32> {
        self.coordinates().iter().map(|c| c.order()).max()
    }

    /// Highest order among the differentials alone.
    pub fn max_differential_order(&self) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|k| k.iter().map(|c| c.order()))
            .max()
    }

    pub fn wedge(&self, other: &DifferentialForm) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.degree + other.degree);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let mut key = Vec::with_capacity(ka.len() + kb.len());
                key.extend_from_slice(ka);
                key.extend_from_slice(kb);
                out.add_unsorted(key, va * vb);
            }
        }
        out
    }

    pub fn exterior_d(&self) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.degree + 1);
        for (k, v) in &self.terms {
            for c in v.coordinates() {
                if k.contains(&c) {
                    continue;
                }
                let partial = v.differentiate(c);
                let mut key = Vec::with_capacity(k.len() + 1);
                key.push(c);
                key.extend_from_slice(k);
                out.add_unsorted(key, partial);
            }
        }
        out
    }

    /// The degree-0 derivation determined by its action on coefficients
    /// (`on_coefficient`, skipped when `None`) and on single differentials
    /// (`on_differential(dx) = factor * dy`).
    pub fn derivation(
        &self,
        on_coefficient: Option<&dyn Fn(&Expression) -> Expression>,
        on_differential: &dyn Fn(Coordinate) -> Option<(Rational, Coordinate)>,
    ) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.degree);
        for (k, v) in &self.terms {
            if let Some(g) = on_coefficient {
                out.add_sorted(k.clone(), g(v));
            }
            for i in 0..k.len() {
                if let Some((factor, image)) = on_differential(k[i]) {
                    if factor.is_zero() {
                        continue;
                    }
                    let mut key = k.clone();
                    key[i] = image;
                    out.add_unsorted(key, v.scale(&factor));
                }
            }
        }
        out
    }

    /// `d_T`: total derivative of coefficients, `d_T dq^i_(p) = dq^i_(p+1)`.
    pub fn total_derivative(&self) -> DifferentialForm {
        self.derivation(Some(&Expression::total_derivative), &|c| {
            Some((Rational::one(), c.next()))
        })
    }

    /// Interior product `i_X`.
    pub fn contract(&self, field: &CoordinateVectorField) -> Result<DifferentialForm> {
        if self.degree == 0 {
            return Err(Error::InvalidDegree {
                expected: "at least 1",
                found: 0,
            });
        }
        let mut out = DifferentialForm::zero(self.degree - 1);
        for (k, v) in &self.terms {
            for i in 0..k.len() {
                let component = field.component(k[i]);
                if component.is_structurally_zero() {
                    continue;
                }
                let mut key = k.clone();
                key.remove(i);
                let term = v * &component;
                out.add_sorted(key, if i % 2 == 1 { -term } else { term });
            }
        }
        Ok(out)
    }

    /// Cartan formula `L_X = i_X d + d i_X`; `X(f)` on 0-forms.
    pub fn lie_derivative(&self, field: &CoordinateVectorField) -> DifferentialForm {
        if self.degree == 0 {
            let f = self.as_function().unwrap_or_default();
            return DifferentialForm::function(field.apply(&f));
        }
        let a = self
            .exterior_d()
            .contract(field)
            .expect("exterior derivative has positive degree");
        let b = self
            .contract(field)
            .expect("degree checked above")
            .exterior_d();
        &a + &b
    }
}

impl From<Expression> for DifferentialForm {
    fn from(f: Expression) -> Self {
        DifferentialForm::function(f)
    }
}

impl Add for &DifferentialForm {
    type Output = DifferentialForm;
    fn add(self, rhs: &DifferentialForm) -> DifferentialForm {
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_sorted(k.clone(), v.clone());
        }
        out
    }
}

impl Sub for &DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, rhs: &DifferentialForm) -> DifferentialForm {
        assert_eq!(
            self.degree, rhs.degree,
            "subtracting forms of different degree"
        );
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_sorted(k.clone(), -v);
        }
        out
    }
}

impl Neg for &DifferentialForm {
    type Output = DifferentialForm;
    fn neg(self) -> DifferentialForm {
        DifferentialForm {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

impl fmt::Display for DifferentialForm {
    /// Terms in canonical order, e.g. `q1*dq1/\dq2 - (q1 + q2)*dq2'`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (k, v)) in self.terms.iter().enumerate() {
            let wedge = k
                .iter()
                .map(|c| format!("d{c}"))
                .collect::<Vec<_>>()
                .join("/\\");
            let (negative, body) = match v.single_term_parts() {
                Some((neg, magnitude)) if wedge.is_empty() => (neg, magnitude),
                Some((neg, magnitude)) if magnitude == "1" => (neg, wedge),
                Some((neg, magnitude)) => (neg, format!("{magnitude}*{wedge}")),
                None if wedge.is_empty() => (false, v.to_string()),
                None => (false, format!("({v})*{wedge}")),
            };
            let sign = match (n, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

type ComponentRule = Arc<dyn Fn(Coordinate) -> Expression + Send + Sync>;

#[derive(Clone)]
enum Rule {
    Table(BTreeMap<Coordinate, Expression>),
    Generator(ComponentRule),
}

/// A vector field `sum X^c d/dc` over the derivative coordinates, given by a
/// finite table or by a rule evaluated on demand at any order.
#[derive(Clone)]
pub struct CoordinateVectorField {
    rule: Rule,
}

impl fmt::Debug for CoordinateVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            Rule::Table(t) => f.debug_map().entries(t.iter()).finish(),
            Rule::Generator(_) => f.write_str("CoordinateVectorField(<rule>)"),
        }
    }
}

impl CoordinateVectorField {
    pub fn from_table(table: BTreeMap<Coordinate, Expression>) -> Self {
        CoordinateVectorField {
            rule: Rule::Table(table),
        }
    }

    pub fn from_rule(rule: impl Fn(Coordinate) -> Expression + Send + Sync + 'static) -> Self {
        CoordinateVectorField {
            rule: Rule::Generator(Arc::new(rule)),
        }
    }

    /// The formal total derivative `sum q^i_(p+1) d/dq^i_(p)`.
    pub fn total_derivative() -> Self {
        CoordinateVectorField::from_rule(|c| Expression::coordinate(c.next()))
    }

    pub fn component(&self, c: Coordinate) -> Expression {
        match &self.rule {
            Rule::Table(t) => t.get(&c).cloned().unwrap_or_default(),
            Rule::Generator(g) => g(c),
        }
    }

    /// `X(f) = sum X^c df/dc`.
    pub fn apply(&self, f: &Expression) -> Expression {
        f.coordinates()
            .into_iter()
            .map(|c| {
                let component = self.component(c);
                if component.is_structurally_zero() {
                    Expression::zero()
                } else {
                    &component * &f.differentiate(c)
                }
            })
            .sum()
    }
}
