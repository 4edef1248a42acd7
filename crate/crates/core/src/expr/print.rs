use std::fmt;

use num_traits::{One, Signed};

use super::{Atom, Coordinate, Expression, Monomial, Rational};

impl fmt::Display for Coordinate {
    /// `q2''` up to three primes, `q2[4]` beyond.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.index())?;
        if self.order() <= 3 {
            for _ in 0..self.order() {
                f.write_str("'")?;
            }
            Ok(())
        } else {
            write!(f, "[{}]", self.order())
        }
    }
}

fn atom_power(atom: &Atom, e: i32) -> String {
    let base = match atom {
        Atom::Coord(c) => c.to_string(),
        Atom::Param => "t".to_string(),
        Atom::Func(g, u) => format!("{}({})", g.name(), u),
        Atom::Sum(u) => format!("({u})"),
    };
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}

/// Renders `|c| * m` with negative powers moved into a denominator.
pub(super) fn term_magnitude(c: &Rational, m: &Monomial) -> String {
    let mut numerator = Vec::new();
    let mut denominator = Vec::new();
    let c = c.abs();
    let has_positive = m.iter().any(|(_, e)| *e > 0);
    if !c.numer().is_one() || !has_positive {
        numerator.push(c.numer().to_string());
    }
    if !c.denom().is_one() {
        denominator.push(c.denom().to_string());
    }
    for (atom, e) in m {
        if *e > 0 {
            numerator.push(atom_power(atom, *e));
        } else {
            denominator.push(atom_power(atom, -e));
        }
    }
    let mut out = numerator.join("*");
    match denominator.len() {
        0 => {}
        1 => {
            out.push('/');
            out.push_str(&denominator[0]);
        }
        _ => {
            out.push_str("/(");
            out.push_str(&denominator.join("*"));
            out.push(')');
        }
    }
    out
}

impl Expression {
    /// `Some((negative, magnitude))` when the expression is a single term.
    pub(crate) fn single_term_parts(&self) -> Option<(bool, String)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        Some((c.is_negative(), term_magnitude(c, m)))
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let sign = match (k, c.is_negative()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            f.write_str(sign)?;
            f.write_str(&term_magnitude(c, m))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::parse::parse_expression;

    fn show(text: &str) -> String {
        parse_expression(text, 3).unwrap().to_string()
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(show("q1'^2/2"), "q1'^2/2");
        assert_eq!(show("-q1''"), "-q1''");
        assert_eq!(show("2*q2'' + sin(q1)"), "2*q2'' + sin(q1)");
        assert_eq!(show("q1[5] - 3/4"), "-3/4 + q1[5]");
        assert_eq!(show("q2'^2/(2*q1')"), "q2'^2/(2*q1')");
        assert_eq!(show("1/(1 + q1^2)"), "1/(1 + q1^2)");
        assert_eq!(show("0*q1"), "0");
    }
}
