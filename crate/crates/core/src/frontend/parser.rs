//! Input format:
//!
//! ```text
//! # comment
//! params a, b
//! dx = -2*y + a*z
//! dy = 2*x
//! dz = x^2 + y^2 + 1/3*b*y^3
//! ```

use std::fmt;

use num_traits::{One, Zero};

use crate::coeffring::rational::format_rational;
use crate::coeffring::{ParamPolynomial, ParamTable, Rational};
use crate::gradedpoly::{QHPolynomial, Var};
use crate::vectorfield::VectorField3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at line {line}, column {column}")]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl ParseError {
    fn at(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            message: message.into(),
            line: pos.line,
            column: pos.column,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Number(Rational),
    State(Var),
    Param(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Atom(Atom),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Divisor is a numeric constant.
    Div(Box<Expr>, Rational),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl Expr {
    pub fn eval(&self) -> QHPolynomial {
        match &self.kind {
            ExprKind::Atom(Atom::Number(r)) => {
                QHPolynomial::constant(ParamPolynomial::constant(r.clone()))
            }
            ExprKind::Atom(Atom::State(v)) => QHPolynomial::var(*v),
            ExprKind::Atom(Atom::Param(i)) => QHPolynomial::constant(ParamPolynomial::var(*i)),
            ExprKind::Neg(e) => -&e.eval(),
            ExprKind::Add(a, b) => &a.eval() + &b.eval(),
            ExprKind::Sub(a, b) => &a.eval() - &b.eval(),
            ExprKind::Mul(a, b) => &a.eval() * &b.eval(),
            ExprKind::Div(a, d) => a.eval().scale(&d.recip()),
            ExprKind::Pow(a, e) => a.eval().pow(*e),
        }
    }

    fn mentions(&self, pred: &dyn Fn(&Atom) -> bool) -> bool {
        match &self.kind {
            ExprKind::Atom(a) => pred(a),
            ExprKind::Neg(e) | ExprKind::Div(e, _) | ExprKind::Pow(e, _) => e.mentions(pred),
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) => {
                a.mentions(pred) || b.mentions(pred)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSource {
    pub params: ParamTable,
    /// Right-hand sides of `dx`, `dy`, `dz`.
    pub components: [Expr; 3],
}

impl SystemSource {
    pub fn to_field(&self) -> VectorField3 {
        let [a, b, c] = &self.components;
        VectorField3::new(a.eval(), b.eval(), c.eval())
    }
}

/// Canonical text of a field; parses back to the same field.
pub fn print_system(params: &ParamTable, f: &VectorField3) -> String {
    let mut s = String::new();
    if !params.is_empty() {
        s.push_str(&format!("params {}\n", params.names().join(", ")));
    }
    for (name, text) in ["dx", "dy", "dz"].iter().zip(f.to_text(params)) {
        s.push_str(&format!("{name} = {text}\n"));
    }
    s
}

impl fmt::Display for SystemSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_system(&self.params, &self.to_field()))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
    End,
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos {
            line: lineno,
            column: i + 1,
        };
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n: num_bigint::BigInt = digits.parse().expect("digits");
            out.push((Tok::Num(Rational::from_integer(n)), pos));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if "+-*/^()=,".contains(c) {
            out.push((Tok::Op(c), pos));
            i += 1;
        } else {
            return Err(ParseError::at(pos, format!("unexpected character `{c}`")));
        }
    }
    out.push((
        Tok::End,
        Pos {
            line: lineno,
            column: chars.len() + 1,
        },
    ));
    Ok(out)
}

struct ExprParser<'a> {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    params: &'a ParamTable,
    allow_state: bool,
}

impl ExprParser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            let pos = self.bump().1;
            let rhs = Box::new(self.term()?);
            let kind = if c == '+' {
                ExprKind::Add(Box::new(lhs), rhs)
            } else {
                ExprKind::Sub(Box::new(lhs), rhs)
            };
            lhs = Expr { kind, pos };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Tok::Op(c @ ('*' | '/')) = *self.peek() {
            let pos = self.bump().1;
            let rhs = self.unary()?;
            let kind = if c == '*' {
                ExprKind::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Div(Box::new(lhs), constant_divisor(&rhs, pos)?)
            };
            lhs = Expr { kind, pos };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Op('-') => {
                let pos = self.bump().1;
                let e = self.unary()?;
                Ok(Expr {
                    kind: ExprKind::Neg(Box::new(e)),
                    pos,
                })
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        let pos = self.bump().1;
        let (tok, epos) = self.bump();
        let e = match tok {
            Tok::Num(n) => n,
            Tok::Op('-') => {
                return Err(ParseError::at(epos, "negative exponent"));
            }
            _ => return Err(ParseError::at(epos, "exponent must be an integer literal")),
        };
        if *self.peek() == Tok::Op('^') {
            return Err(ParseError::at(self.pos(), "exponent must be an integer literal"));
        }
        let e: u32 = e
            .to_integer()
            .try_into()
            .map_err(|_| ParseError::at(epos, "exponent too large"))?;
        Ok(Expr {
            kind: ExprKind::Pow(Box::new(base), e),
            pos,
        })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, pos) = self.bump();
        let kind = match tok {
            Tok::Num(n) => ExprKind::Atom(Atom::Number(n)),
            Tok::Ident(name) => match name.as_str() {
                "x" | "y" | "z" if self.allow_state => ExprKind::Atom(Atom::State(match name.as_str() {
                    "x" => Var::X,
                    "y" => Var::Y,
                    _ => Var::Z,
                })),
                _ => match self.params.index_of(&name) {
                    Ok(i) => ExprKind::Atom(Atom::Param(i)),
                    Err(_) => {
                        return Err(ParseError::at(pos, format!("undeclared identifier `{name}`")))
                    }
                },
            },
            Tok::Op('(') => {
                let e = self.expr()?;
                let (close, cpos) = self.bump();
                if close != Tok::Op(')') {
                    return Err(ParseError::at(cpos, "expected `)`"));
                }
                return Ok(e);
            }
            Tok::End => return Err(ParseError::at(pos, "unexpected end of line")),
            Tok::Op(c) => return Err(ParseError::at(pos, format!("unexpected `{c}`"))),
        };
        Ok(Expr { kind, pos })
    }
}

fn constant_divisor(e: &Expr, pos: Pos) -> Result<Rational, ParseError> {
    if e.mentions(&|a| matches!(a, Atom::State(_))) {
        return Err(ParseError::at(pos, "division by variable"));
    }
    if e.mentions(&|a| matches!(a, Atom::Param(_))) {
        return Err(ParseError::at(pos, "division by parameter"));
    }
    let v = e.eval();
    let d = if v.is_zero() {
        Rational::zero()
    } else {
        v.coefficient(&crate::gradedpoly::Monomial3::ONE)
            .as_constant()
            .unwrap_or_else(Rational::one)
    };
    if d.is_zero() {
        return Err(ParseError::at(pos, "division by zero"));
    }
    Ok(d)
}

fn parse_line_expr(
    toks: Vec<(Tok, Pos)>,
    params: &ParamTable,
    allow_state: bool,
) -> Result<Expr, ParseError> {
    let mut p = ExprParser {
        toks,
        i: 0,
        params,
        allow_state,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        let found = match p.peek() {
            Tok::Num(n) => format_rational(n),
            Tok::Ident(s) => s.clone(),
            Tok::Op(c) => c.to_string(),
            Tok::End => String::new(),
        };
        return Err(ParseError::at(p.pos(), format!("unexpected `{found}`")));
    }
    Ok(e)
}

/// Parses a full system.
pub fn parse_system(text: &str) -> Result<SystemSource, ParseError> {
    let mut params = ParamTable::default();
    let mut seen_params = false;
    let mut comps: [Option<Expr>; 3] = [None, None, None];
    let mut last = Pos::default();

    for (n, line) in text.lines().enumerate() {
        let lineno = n + 1;
        let toks = tokenize(line, lineno)?;
        last = Pos {
            line: lineno,
            column: 1,
        };
        let (head, hpos) = toks[0].clone();
        let name = match head {
            Tok::End => continue,
            Tok::Ident(s) => s,
            _ => return Err(ParseError::at(hpos, "expected `params`, `dx`, `dy` or `dz`")),
        };
        if name == "params" {
            if seen_params || comps.iter().any(Option::is_some) {
                return Err(ParseError::at(hpos, "`params` must come first and only once"));
            }
            seen_params = true;
            let mut names: Vec<String> = Vec::new();
            for (t, pos) in &toks[1..] {
                match t {
                    Tok::Ident(s) if ["x", "y", "z"].contains(&s.as_str()) => {
                        return Err(ParseError::at(*pos, format!("`{s}` is a state variable")))
                    }
                    Tok::Ident(s) if names.contains(s) => {
                        return Err(ParseError::at(*pos, format!("duplicate parameter `{s}`")))
                    }
                    Tok::Ident(s) => names.push(s.clone()),
                    Tok::Op(',') | Tok::End => {}
                    _ => return Err(ParseError::at(*pos, "expected a parameter name")),
                }
            }
            params = ParamTable::new(names);
            continue;
        }
        let slot = match name.as_str() {
            "dx" => 0,
            "dy" => 1,
            "dz" => 2,
            _ => {
                return Err(ParseError::at(
                    hpos,
                    format!("expected `params`, `dx`, `dy` or `dz`, found `{name}`"),
                ))
            }
        };
        if comps[slot].is_some() {
            return Err(ParseError::at(hpos, format!("`{name}` defined twice")));
        }
        if toks.get(1).map(|t| &t.0) != Some(&Tok::Op('=')) {
            return Err(ParseError::at(toks[1].1, "expected `=`"));
        }
        comps[slot] = Some(parse_line_expr(toks[2..].to_vec(), &params, true)?);
    }

    let [a, b, c] = comps;
    match (a, b, c) {
        (Some(a), Some(b), Some(c)) => Ok(SystemSource {
            params,
            components: [a, b, c],
        }),
        (a, b, _) => {
            let missing = if a.is_none() {
                "dx"
            } else if b.is_none() {
                "dy"
            } else {
                "dz"
            };
            Err(ParseError::at(
                Pos {
                    line: last.line.max(1),
                    column: 1,
                },
                format!("missing `{missing}` equation"),
            ))
        }
    }
}

/// Parses a polynomial in the parameters alone, such as a constraint.
pub fn parse_param_expression(text: &str, params: &ParamTable) -> Result<ParamPolynomial, ParseError> {
    let toks = tokenize(text, 1)?;
    let e = parse_line_expr(toks, params, false)?;
    Ok(e.eval().coefficient(&crate::gradedpoly::Monomial3::ONE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rational::{int, rat};

    #[test]
    fn parses_with_params() {
        let s = parse_system("params a\ndx = -2*y + a*z\ndy = 2*x\ndz = x^2 + y^2").unwrap();
        assert_eq!(s.params.names(), ["a"]);
        let f = s.to_field();
        let want = VectorField3::principal().add(&VectorField3::new(
            QHPolynomial::var(Var::Z).scale_param(&ParamPolynomial::var(0)),
            QHPolynomial::zero(),
            QHPolynomial::zero(),
        ));
        assert_eq!(f, want);
    }

    #[test]
    fn parses_without_params() {
        let s = parse_system("dx = -2*y\ndy = 2*x\ndz = x^2 + y^2").unwrap();
        assert!(s.params.is_empty());
        assert_eq!(s.to_field(), VectorField3::principal());
    }

    #[test]
    fn rejects_division_by_variable() {
        let e = parse_system("dx = x/y").unwrap_err();
        assert!(e.to_string().starts_with("division by variable at line 1"), "{e}");
    }

    #[test]
    fn other_errors_carry_positions() {
        let e = parse_system("dx = -2*y\ndy = 2*w\ndz = 0").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        assert!(e.message.contains("undeclared"));
        let e = parse_system("dx = x^(1/2)\ndy = 0\ndz = 0").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(parse_system("dx = x^-1\ndy = 0\ndz = 0").is_err());
        assert!(parse_system("params a\ndx = x/a\ndy = 0\ndz = 0").is_err());
        assert!(parse_system("dx = x/(2-2)\ndy = 0\ndz = 0").is_err());
        let e = parse_system("dx = 0\ndz = 0").unwrap_err();
        assert!(e.message.contains("dy"));
    }

    #[test]
    fn rationals_comments_and_precedence() {
        let s = parse_system(
            "# header\nparams b\ndx = -2*y  # rotation\ndy = 2*x + 3/4*b*x^2\ndz = -(x^2) + 2*y^2 - -x^2/2\n",
        )
        .unwrap();
        let f = s.to_field();
        let b = ParamPolynomial::var(0);
        assert_eq!(
            f.fy.coefficient(&crate::gradedpoly::Monomial3::new(2, 0, 0)),
            b.scale(&rat(3, 4))
        );
        assert_eq!(
            f.fz,
            &QHPolynomial::mono(2, 0, 0, rat(-1, 2)) + &QHPolynomial::mono(0, 2, 0, int(2))
        );
        // unary minus binds looser than ^
        let s = parse_system("dx = -x^2\ndy = 0\ndz = 0").unwrap();
        assert_eq!(s.to_field().fx, QHPolynomial::mono(2, 0, 0, int(-1)));
    }

    #[test]
    fn print_round_trip() {
        let text = "params a, b\ndx = -2*y + (a + 1/2)*z\ndy = 2*x - a^2*b*x^2\ndz = x^2 + y^2 + 1/3*x*y*z\n";
        let s = parse_system(text).unwrap();
        let printed = s.to_string();
        let again = parse_system(&printed).unwrap();
        assert_eq!(again.to_field(), s.to_field());
        assert_eq!(again.params, s.params);
    }

    #[test]
    fn param_expressions() {
        let t = ParamTable::new(["a", "b"]);
        let p = parse_param_expression("126*a^2 - 117*b*a + 40*b^2", &t).unwrap();
        assert_eq!(p.total_degree(), Some(2));
        assert!(parse_param_expression("a*x", &t).is_err());
    }
}
