//! Polynomial coefficients and the form file format.
//!
//! ```text
//! dim 2
//! grade 1
//! 2 : 1 1 0             # x1 dx2
//! 1 : 1 1 1 ; -2 0 0    # (x1 x2 - 2) dx1
//! ```
//!
//! Each monomial is `coef e1 ... en`; monomials on one line are separated by
//! `;` and repeated `J` lines accumulate. A 0-form uses an empty `J`.

use std::collections::BTreeMap;
use std::fmt;

use super::FormField;
use crate::error::{Error, Result};
use crate::permcalc::OrderedSubset;

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coef: f64,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.exponents
            .iter()
            .zip(x)
            .fold(self.coef, |acc, (&e, &xi)| acc * xi.powi(e as i32))
    }
}

/// Multivariate polynomial in `n` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(n: usize, terms: Vec<Monomial>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.exponents.len() != n) {
            return Err(Error::Domain(format!(
                "monomial has {} exponents, expected {n}",
                t.exponents.len()
            )));
        }
        Ok(Polynomial { n, terms })
    }

    pub fn zero(n: usize) -> Self {
        Polynomial { n, terms: Vec::new() }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Polynomial {
            n,
            terms: vec![Monomial {
                coef: c,
                exponents: vec![0; n],
            }],
        }
    }

    /// Shorthand: `from_pairs(2, &[(1.0, &[1, 1]), (-2.0, &[0, 0])])`.
    pub fn from_pairs(n: usize, pairs: &[(f64, &[u32])]) -> Result<Self> {
        Self::new(
            n,
            pairs
                .iter()
                .map(|(c, e)| Monomial {
                    coef: *c,
                    exponents: e.to_vec(),
                })
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    /// Exact partial derivative along axis `i` (1-based).
    pub fn derivative(&self, i: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exponents[i - 1] > 0)
            .map(|t| {
                let mut e = t.exponents.clone();
                let k = e[i - 1];
                e[i - 1] -= 1;
                Monomial {
                    coef: t.coef * k as f64,
                    exponents: e,
                }
            })
            .collect();
        Polynomial { n: self.n, terms }
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.exponents.iter().sum())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Polynomial {
    /// Monomial-table text, `coef e1 ... en ; ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "{}", t.coef)?;
            for e in &t.exponents {
                write!(f, " {e}")?;
            }
        }
        Ok(())
    }
}

/// Differential form with polynomial coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialForm {
    n: usize,
    grade: usize,
    components: BTreeMap<OrderedSubset, Polynomial>,
}

impl PolynomialForm {
    pub fn new(n: usize, grade: usize) -> Result<Self> {
        if grade > n {
            return Err(Error::Domain(format!("grade {grade} exceeds dimension {n}")));
        }
        Ok(PolynomialForm {
            n,
            grade,
            components: BTreeMap::new(),
        })
    }

    /// Adds `p` to the coefficient of `dx^J`.
    pub fn with_component(mut self, set: &[usize], p: Polynomial) -> Result<Self> {
        self.add_component(OrderedSubset::new(self.n, set.to_vec())?, p)?;
        Ok(self)
    }

    pub fn add_component(&mut self, set: OrderedSubset, p: Polynomial) -> Result<()> {
        if set.len() != self.grade || set.n() != self.n || p.n() != self.n {
            return Err(Error::Domain(format!(
                "component {set} does not fit a {}-form in dimension {}",
                self.grade, self.n
            )));
        }
        let entry = self.components.entry(set).or_insert_with(|| Polynomial::zero(self.n));
        entry.terms.extend(p.terms);
        Ok(())
    }

    pub fn components(&self) -> impl Iterator<Item = (&OrderedSubset, &Polynomial)> {
        self.components.iter()
    }
}

impl FormField for PolynomialForm {
    fn n(&self) -> usize {
        self.n
    }

    fn grade(&self) -> usize {
        self.grade
    }

    fn coeff(&self, x: &[f64], set: &OrderedSubset) -> f64 {
        self.components.get(set).map_or(0.0, |p| p.eval(x))
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// 1-based column of the first non-space character at or after byte `offset`.
fn column_at(line: &str, offset: usize) -> usize {
    let skip = line[offset..].len() - line[offset..].trim_start().len();
    line[..offset + skip].chars().count() + 1
}

/// Parses a monomial table (`coef e1 ... en ; ...`) located at byte `offset`
/// of `line`.
pub(crate) fn parse_table(n: usize, line: &str, offset: usize, line_no: usize) -> Result<Polynomial> {
    let mut terms = Vec::new();
    let mut pos = offset;
    for chunk in line[offset..].split(';') {
        let chunk_start = pos;
        pos += chunk.len() + 1;
        let mut toks = Vec::new();
        let mut rest = chunk;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let len = rest[start..].find(char::is_whitespace).unwrap_or(rest.len() - start);
            let at = chunk_start + (chunk.len() - rest.len()) + start;
            toks.push((&rest[start..start + len], line[..at].chars().count() + 1));
            rest = &rest[start + len..];
        }
        let col = column_at(line, chunk_start);
        if toks.is_empty() {
            return Err(err(line_no, col, "empty monomial"));
        }
        if toks.len() != n + 1 {
            return Err(err(
                line_no,
                col,
                format!("monomial needs a coefficient and {n} exponents, found {} tokens", toks.len()),
            ));
        }
        let (c, c_col) = toks[0];
        let coef: f64 = c
            .parse()
            .ok()
            .filter(|c: &f64| c.is_finite())
            .ok_or_else(|| err(line_no, c_col, format!("bad coefficient `{c}`")))?;
        let exponents = toks[1..]
            .iter()
            .map(|&(t, t_col)| {
                t.parse::<u32>()
                    .map_err(|_| err(line_no, t_col, format!("bad exponent `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        terms.push(Monomial { coef, exponents });
    }
    Polynomial::new(n, terms)
}

/// Non-blank lines with `#` comments stripped, numbered from 1.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        (!content.trim().is_empty()).then_some((i + 1, content))
    })
}

/// Next content line, which must start with `key`; returns its arguments.
pub(crate) fn expect_key<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
    last: usize,
) -> Result<(usize, Vec<&'a str>)> {
    let (no, line) = lines
        .next()
        .ok_or_else(|| err(last + 1, 1, format!("missing `{key}` line")))?;
    let mut toks = line.split_whitespace();
    match toks.next() {
        Some(k) if k == key => Ok((no, toks.collect())),
        Some(other) => Err(err(no, column_at(line, 0), format!("expected `{key}`, found `{other}`"))),
        None => unreachable!(),
    }
}

pub(crate) fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| err(line, 1, format!("expected {what}, found `{tok}`")))
}

pub fn parse_form(text: &str) -> Result<PolynomialForm> {
    let mut lines = content_lines(text);
    let (no, args) = expect_key(&mut lines, "dim", 0)?;
    let [n] = args[..] else {
        return Err(err(no, 1, "`dim` takes exactly one integer"));
    };
    let n = parse_usize(n, no, "a positive dimension")?;
    if n == 0 {
        return Err(err(no, 1, "dimension must be positive"));
    }
    let (no, args) = expect_key(&mut lines, "grade", no)?;
    let [m] = args[..] else {
        return Err(err(no, 1, "`grade` takes exactly one integer"));
    };
    let m = parse_usize(m, no, "a grade")?;
    let mut form = PolynomialForm::new(n, m).map_err(|e| err(no, 1, e.to_string()))?;
    for (no, line) in lines {
        let colon = line
            .find(':')
            .ok_or_else(|| err(no, column_at(line, 0), "expected `J : monomials`"))?;
        let idx = line[..colon]
            .split_whitespace()
            .map(|t| parse_usize(t, no, "an axis index"))
            .collect::<Result<Vec<_>>>()?;
        let set = OrderedSubset::new(n, idx).map_err(|e| err(no, column_at(line, 0), e.to_string()))?;
        if set.len() != m {
            return Err(err(no, column_at(line, 0), format!("component {set} is not of grade {m}")));
        }
        let p = parse_table(n, line, colon + 1, no)?;
        form.add_component(set, p)?;
    }
    Ok(form)
}

pub fn write_form(form: &PolynomialForm) -> String {
    let mut out = format!("dim {}\ngrade {}\n", form.n, form.grade);
    for (set, p) in &form.components {
        let idx: Vec<String> = set.indices().iter().map(|i| i.to_string()).collect();
        if p.terms.is_empty() {
            continue;
        }
        if idx.is_empty() {
            out.push_str(&format!(": {p}\n"));
        } else {
            out.push_str(&format!("{} : {p}\n", idx.join(" ")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_eval_and_derivative() {
        let p = Polynomial::from_pairs(2, &[(1.0, &[1, 1]), (-2.0, &[0, 0]), (3.0, &[2, 0])]).unwrap();
        assert_eq!(p.eval(&[2.0, 5.0]), 10.0 - 2.0 + 12.0);
        assert_eq!(p.derivative(1).eval(&[2.0, 5.0]), 5.0 + 12.0);
        assert_eq!(p.derivative(2).eval(&[2.0, 5.0]), 2.0);
        assert_eq!(p.degree(), 2);
        assert!(Polynomial::from_pairs(2, &[(1.0, &[1])]).is_err());
    }

    #[test]
    fn form_file_round_trip() {
        let text = "dim 2\ngrade 1\n1 : 1 1 1 ; -2 0 0\n2 : 1 1 0\n";
        let f = parse_form(text).unwrap();
        assert_eq!(f.coeff(&[2.0, 3.0], &OrderedSubset::new(2, vec![1]).unwrap()), 4.0);
        assert_eq!(f.coeff(&[2.0, 3.0], &OrderedSubset::new(2, vec![2]).unwrap()), 2.0);
        assert_eq!(write_form(&f), text);

        let scalar = parse_form("dim 3\ngrade 0\n : 1.5 1 0 0\n").unwrap();
        assert_eq!(scalar.coeff(&[2.0, 0.0, 0.0], &OrderedSubset::empty(3)), 3.0);
        assert_eq!(write_form(&scalar), "dim 3\ngrade 0\n: 1.5 1 0 0\n");
    }

    #[test]
    fn repeated_components_accumulate() {
        let f = parse_form("dim 1\ngrade 1\n1 : 1 0\n1 : 2 1   # comment\n").unwrap();
        assert_eq!(f.coeff(&[3.0], &OrderedSubset::full(1)), 7.0);
    }

    #[test]
    fn form_parse_errors() {
        let e = parse_form("dim 2\ngrade 1\n2 : 1 x 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, column: 7, .. }), "{e:?}");
        assert!(matches!(parse_form("grade 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_form("dim 2\ngrade 1\n1 2 : 1 0 0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_form("dim 2\ngrade 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_form("dim 2\ngrade 1\n1 1 0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_form("dim 2\n"), Err(Error::Parse { line: 2, .. })));
    }
}
