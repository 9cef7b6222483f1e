//! Text parsers for quotient-type literals (`X(6;3,2)`, `C^2`) and germ
//! expressions (`x^2 y^3 (x^2 + y^3)`).
//!
//! Germs parse into a small AST so the factored structure survives; the AST
//! converts to a [`Germ`] on demand and prints back in a canonical spacing,
//! making parse-print a round trip on canonical forms.

use crate::error::{Error, Result};
use crate::qspace::{rat, FactoredForm, Germ, QuotientType, Rat};
use num::{BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            s: text.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.s.len()
    }

    /// Unsigned integer literal.
    fn nat(&mut self) -> Result<i64> {
        let start = self.pos;
        let mut value: i64 = 0;
        while let Some(c) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((c - b'0') as i64))
                .ok_or_else(|| self.err("number too large"))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        Ok(value)
    }

    /// Integer literal with optional sign.
    fn int(&mut self) -> Result<i64> {
        let negative = self.eat(b'-');
        let v = self.nat()?;
        Ok(if negative { -v } else { v })
    }

    /// Rational literal `int [ "/" nat ]`.
    fn rational(&mut self) -> Result<Rat> {
        let numer = self.int()?;
        if self.eat(b'/') {
            let denom = self.nat()?;
            if denom == 0 {
                return Err(self.err("zero denominator"));
            }
            Ok(rat(numer, denom))
        } else {
            Ok(Rat::from_integer(numer))
        }
    }
}

/// Parses a quotient-type literal: `C`, `C^n`, or
/// `X(d_1,...,d_r; a_11,...,a_1n | ... | a_r1,...,a_rn)`.
pub fn parse_space(text: &str) -> Result<QuotientType> {
    let mut c = Cursor::new(text);
    c.skip_ws();
    let q = match c.peek() {
        Some(b'C') => {
            c.bump();
            let n = if c.eat(b'^') { c.nat()? } else { 1 };
            if n < 1 || n > 16 {
                return Err(c.err("dimension must lie in 1..=16"));
            }
            QuotientType::smooth(n as usize)
        }
        Some(b'X') => {
            c.bump();
            c.skip_ws();
            c.expect(b'(')?;
            let mut d = Vec::new();
            loop {
                c.skip_ws();
                d.push(c.int()?);
                c.skip_ws();
                if !c.eat(b',') {
                    break;
                }
            }
            c.expect(b';')?;
            let mut rows = Vec::new();
            loop {
                let mut row = Vec::new();
                loop {
                    c.skip_ws();
                    row.push(c.int()?);
                    c.skip_ws();
                    if !c.eat(b',') {
                        break;
                    }
                }
                rows.push(row);
                if !c.eat(b'|') {
                    break;
                }
            }
            c.expect(b')')?;
            if rows.len() != d.len() {
                return Err(c.err(format!(
                    "{} orders but {} weight rows",
                    d.len(),
                    rows.len()
                )));
            }
            QuotientType::new(d, rows)?
        }
        _ => return Err(c.err("expected 'C' or 'X'")),
    };
    c.skip_ws();
    if !c.at_end() {
        return Err(c.err("trailing input after the type literal"));
    }
    Ok(q)
}

/// One factor of a germ expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprFactor {
    /// A variable power `x^(3/2)`.
    Power { var: usize, exp: Rat },
    /// A parenthesized sum of monomials raised to a positive power.
    Sum { terms: Vec<SumTerm>, power: u32 },
}

/// One monomial inside a sum factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumTerm {
    pub coeff: BigRational,
    pub exps: Vec<u32>,
}

/// Parsed germ expression: a product of factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermExpression {
    n: usize,
    factors: Vec<ExprFactor>,
}

fn var_index(c: u8) -> Option<usize> {
    match c {
        b'x' => Some(0),
        b'y' => Some(1),
        b'z' => Some(2),
        _ => None,
    }
}

const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

/// Parses a germ expression over the first `n` of the variables x, y, z.
///
/// Grammar: `germ := factor { ["*"] factor }`;
/// `factor := VAR ["^" rat] | "(" sum ")" ["^" int]`;
/// `sum := term { ("+"|"-") term }`; `term := [rat] { VAR ["^" nat] }`.
/// Exponents must be nonnegative; rational exponents may be parenthesized.
pub fn parse_germ(text: &str, n: usize) -> Result<GermExpression> {
    if n < 1 || n > 3 {
        return Err(Error::validation("germ expressions support 1 to 3 variables"));
    }
    let mut c = Cursor::new(text);
    let mut factors = Vec::new();
    c.skip_ws();
    if c.at_end() {
        return Err(c.err("empty germ expression"));
    }
    while !c.at_end() {
        factors.push(parse_factor(&mut c, n)?);
        c.skip_ws();
        if c.eat(b'*') {
            c.skip_ws();
            if c.at_end() {
                return Err(c.err("expected a factor after '*'"));
            }
        }
    }
    Ok(GermExpression { n, factors })
}

fn parse_factor(c: &mut Cursor, n: usize) -> Result<ExprFactor> {
    c.skip_ws();
    match c.peek() {
        Some(b'(') => {
            c.bump();
            let terms = parse_sum(c, n)?;
            c.expect(b')')?;
            let power = if c.eat(b'^') {
                let p = c.int()?;
                if p < 1 {
                    return Err(c.err("factor power must be a positive integer"));
                }
                p as u32
            } else {
                1
            };
            Ok(ExprFactor::Sum { terms, power })
        }
        Some(ch) if var_index(ch).is_some() => {
            let var = var_index(ch).expect("matched");
            if var >= n {
                return Err(c.err(format!(
                    "variable '{}' is not available in dimension {n}",
                    ch as char
                )));
            }
            c.bump();
            let exp = if c.eat(b'^') {
                let parenthesized = c.eat(b'(');
                let e = c.rational()?;
                if parenthesized {
                    c.expect(b')')?;
                }
                if e < Rat::zero() {
                    return Err(c.err("negative exponents are not allowed"));
                }
                e
            } else {
                Rat::one()
            };
            Ok(ExprFactor::Power { var, exp })
        }
        Some(ch) => Err(c.err(format!("unexpected '{}'", ch as char))),
        None => Err(c.err("expected a factor")),
    }
}

fn parse_sum(c: &mut Cursor, n: usize) -> Result<Vec<SumTerm>> {
    let mut terms = Vec::new();
    c.skip_ws();
    let mut negative = c.eat(b'-');
    loop {
        terms.push(parse_term(c, n, negative)?);
        c.skip_ws();
        match c.peek() {
            Some(b'+') => {
                c.bump();
                negative = false;
            }
            Some(b'-') => {
                c.bump();
                negative = true;
            }
            _ => break,
        }
    }
    Ok(terms)
}

fn parse_term(c: &mut Cursor, n: usize, negative: bool) -> Result<SumTerm> {
    c.skip_ws();
    let mut coeff = match c.peek() {
        Some(ch) if ch.is_ascii_digit() => {
            let r = c.rational()?;
            BigRational::new((*r.numer()).into(), (*r.denom()).into())
        }
        _ => BigRational::one(),
    };
    let mut exps = vec![0u32; n];
    let mut saw_var = false;
    loop {
        c.skip_ws();
        match c.peek().and_then(var_index) {
            Some(var) => {
                if var >= n {
                    return Err(c.err(format!(
                        "variable '{}' is not available in dimension {n}",
                        VAR_NAMES[var]
                    )));
                }
                c.bump();
                let e = if c.eat(b'^') { c.nat()? } else { 1 };
                let e = u32::try_from(e).map_err(|_| c.err("exponent too large"))?;
                exps[var] = exps[var]
                    .checked_add(e)
                    .ok_or_else(|| c.err("exponent too large"))?;
                saw_var = true;
            }
            None => break,
        }
    }
    if !saw_var && coeff.is_one() && !c.peek().map_or(false, |ch| ch == b'+' || ch == b'-' || ch == b')') {
        return Err(c.err("expected a term"));
    }
    if negative {
        coeff = -coeff;
    }
    Ok(SumTerm { coeff, exps })
}

impl GermExpression {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[ExprFactor] {
        &self.factors
    }

    /// Builds the germ on the given ambient type, preserving the factored
    /// structure for shape recognition downstream.
    pub fn to_germ(&self, ambient: &QuotientType) -> Result<Germ> {
        if ambient.dim() != self.n {
            return Err(Error::validation(format!(
                "germ uses {} variables but the space has dimension {}",
                self.n,
                ambient.dim()
            )));
        }
        let mut monomial = vec![Rat::zero(); self.n];
        let mut factors = Vec::new();
        for f in &self.factors {
            match f {
                ExprFactor::Power { var, exp } => monomial[*var] += *exp,
                ExprFactor::Sum { terms, power } => {
                    let mut poly: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
                    for t in terms {
                        let key: Vec<i64> = t.exps.iter().map(|&e| e as i64).collect();
                        let entry = poly.entry(key).or_insert_with(BigRational::zero);
                        *entry += t.coeff.clone();
                    }
                    poly.retain(|_, c| !c.is_zero());
                    if poly.is_empty() {
                        return Err(Error::validation("a sum factor cancels to zero"));
                    }
                    factors.push((poly, *power));
                }
            }
        }
        Germ::from_factored(ambient.clone(), FactoredForm { monomial, factors })
    }
}

fn write_exponent(out: &mut String, e: Rat) {
    if e.is_one() {
        return;
    }
    if e.is_integer() {
        out.push_str(&format!("^{}", e.to_integer()));
    } else {
        out.push_str(&format!("^({e})"));
    }
}

impl fmt::Display for GermExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for factor in &self.factors {
            let mut s = String::new();
            match factor {
                ExprFactor::Power { var, exp } => {
                    s.push_str(VAR_NAMES[*var]);
                    write_exponent(&mut s, *exp);
                }
                ExprFactor::Sum { terms, power } => {
                    s.push('(');
                    for (i, t) in terms.iter().enumerate() {
                        let abs = t.coeff.abs();
                        if i == 0 {
                            if t.coeff.is_negative() {
                                s.push('-');
                            }
                        } else if t.coeff.is_negative() {
                            s.push_str(" - ");
                        } else {
                            s.push_str(" + ");
                        }
                        let mut vars = String::new();
                        for (v, &e) in t.exps.iter().enumerate() {
                            if e == 0 {
                                continue;
                            }
                            if !vars.is_empty() {
                                vars.push(' ');
                            }
                            vars.push_str(VAR_NAMES[v]);
                            if e != 1 {
                                vars.push_str(&format!("^{e}"));
                            }
                        }
                        if vars.is_empty() {
                            s.push_str(&abs.to_string());
                        } else if abs.is_one() {
                            s.push_str(&vars);
                        } else {
                            s.push_str(&format!("{abs} {vars}"));
                        }
                    }
                    s.push(')');
                    if *power != 1 {
                        s.push_str(&format!("^{power}"));
                    }
                }
            }
            parts.push(s);
        }
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_literals() {
        assert_eq!(parse_space("C^2").unwrap(), QuotientType::smooth(2));
        assert_eq!(parse_space("C").unwrap(), QuotientType::smooth(1));
        assert_eq!(
            parse_space("X(6;3,2)").unwrap(),
            QuotientType::cyclic(6, vec![3, 2]).unwrap()
        );
        assert_eq!(
            parse_space(" X( 2, 3 ; 1, 1 | 1, 2 ) ").unwrap(),
            QuotientType::new(vec![2, 3], vec![vec![1, 1], vec![1, 2]]).unwrap()
        );
        assert_eq!(
            parse_space("X(5;-1,2)").unwrap(),
            QuotientType::cyclic(5, vec![4, 2]).unwrap()
        );
    }

    #[test]
    fn space_errors_carry_positions() {
        for bad in ["", "Y(2;1)", "X(2;1,1", "X(2,3;1,1)", "C^0", "X(2;1,1) junk"] {
            let err = parse_space(bad).unwrap_err();
            assert!(matches!(err, Error::Parse { .. }), "{bad}: {err}");
        }
    }

    #[test]
    fn germ_round_trip() {
        for text in [
            "x^2 y^3 (x^2 + y^3)",
            "x^4 y (x^2 + y^3)^2",
            "(x^4 + y^6)",
            "x^(1/2) y^(1/3) (x + y)",
            "(x^2 - 3 y + 1/2 x y^2)",
            "x y z",
        ] {
            let e = parse_germ(text, 3).unwrap();
            let printed = e.to_string();
            let reparsed = parse_germ(&printed, 3).unwrap();
            assert_eq!(e, reparsed, "{text} -> {printed}");
            assert_eq!(printed, reparsed.to_string());
        }
    }

    #[test]
    fn optional_star_and_juxtaposition() {
        let a = parse_germ("x^2 * (x + y)", 2).unwrap();
        let b = parse_germ("x^2(x + y)", 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn germ_to_germ_expands() {
        let q = QuotientType::smooth(2);
        let e = parse_germ("x^2 y^3 (x^2 + y^3)", 2).unwrap();
        let g = e.to_germ(&q).unwrap();
        assert_eq!(g.terms().len(), 2);
        let form = g.factored().unwrap();
        assert_eq!(form.monomial, vec![rat(2, 1), rat(3, 1)]);
        assert_eq!(form.factors.len(), 1);
    }

    #[test]
    fn rational_exponents_both_spellings() {
        let a = parse_germ("x^(1/2)", 1).unwrap();
        let b = parse_germ("x^1/2", 1).unwrap();
        assert_eq!(a, b);
        match &a.factors()[0] {
            ExprFactor::Power { exp, .. } => assert_eq!(*exp, rat(1, 2)),
            _ => panic!("expected a power factor"),
        }
    }

    #[test]
    fn germ_parse_errors() {
        assert!(parse_germ("", 2).is_err());
        assert!(parse_germ("x^-2", 2).is_err());
        assert!(parse_germ("(x + y", 2).is_err());
        assert!(parse_germ("z", 2).is_err());
        assert!(parse_germ("x +", 1).is_err());
        assert!(parse_germ("(x + y)^0", 2).is_err());
        assert!(parse_germ("x *", 2).is_err());
        assert!(parse_germ("2 x", 2).is_err());
    }

    #[test]
    fn cancelling_sum_is_rejected_at_build() {
        let q = QuotientType::smooth(2);
        let e = parse_germ("(x - x)", 2).unwrap();
        assert!(e.to_germ(&q).is_err());
    }

    #[test]
    fn coefficients_inside_sums() {
        let q = QuotientType::smooth(2);
        let e = parse_germ("(x^2 - 3/4 y^5)", 2).unwrap();
        let g = e.to_germ(&q).unwrap();
        let c = &g.terms()[&vec![rat(0, 1), rat(5, 1)]];
        assert_eq!(*c, BigRational::new((-3).into(), 4.into()));
    }
}
