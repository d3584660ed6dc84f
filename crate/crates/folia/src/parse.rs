//! Text grammar for polynomials, 1-forms and one-parameter families.
//!
//! Terms look like `c*x^i*y^j` with `c` a rational `p/q` or an integer; `+`
//! and `-` separate terms; `*` and `^` are optional where unambiguous;
//! parentheses group subexpressions. A 1-form is a sum of terms each ending
//! in `dx` or `dy`; families may also use the parameter `t`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::family::{FamPoly, OneFormFamily};
use crate::field::{FieldDescriptor, FieldElem};
use crate::poly1::Poly1;
use crate::poly2::{OneForm, Poly2};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Var(Var),
    Dx,
    Dy,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Var {
    X,
    Y,
    T,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        let mut advance = |i: &mut usize, col: &mut usize| {
            *i += 1;
            *col += 1;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => advance(&mut i, &mut col),
            '+' => {
                toks.push((Tok::Plus, tline, tcol));
                advance(&mut i, &mut col);
            }
            '-' | '−' => {
                toks.push((Tok::Minus, tline, tcol));
                advance(&mut i, &mut col);
            }
            '*' => {
                toks.push((Tok::Star, tline, tcol));
                advance(&mut i, &mut col);
            }
            '^' => {
                toks.push((Tok::Caret, tline, tcol));
                advance(&mut i, &mut col);
            }
            '/' => {
                toks.push((Tok::Slash, tline, tcol));
                advance(&mut i, &mut col);
            }
            '(' => {
                toks.push((Tok::LParen, tline, tcol));
                advance(&mut i, &mut col);
            }
            ')' => {
                toks.push((Tok::RParen, tline, tcol));
                advance(&mut i, &mut col);
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                    col += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push((Tok::Num(s.parse().unwrap()), tline, tcol));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                    col += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let tok = match s.as_str() {
                    "x" => Tok::Var(Var::X),
                    "y" => Tok::Var(Var::Y),
                    "t" => Tok::Var(Var::T),
                    "dx" => Tok::Dx,
                    "dy" => Tok::Dy,
                    _ => {
                        return Err(Error::Parse {
                            line: tline,
                            column: tcol,
                            expected: format!("variable x, y, t, dx or dy (found `{}`)", s),
                        })
                    }
                };
                toks.push((tok, tline, tcol));
            }
            other => {
                return Err(Error::Parse {
                    line: tline,
                    column: tcol,
                    expected: format!("token (found `{}`)", other),
                })
            }
        }
    }
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((1, 1))
    }

    fn err(&self, expected: &str) -> Error {
        let (line, column) = self.here();
        Error::Parse {
            line,
            column,
            expected: expected.to_string(),
        }
    }
}

/// Trivariate polynomial in x, y, t used as the parse-time value.
#[derive(Clone, Debug, Default)]
struct TriPoly {
    terms: BTreeMap<(u32, u32, u32), BigRational>,
}

impl TriPoly {
    fn constant(c: BigRational) -> TriPoly {
        let mut p = TriPoly::default();
        if !c.is_zero() {
            p.terms.insert((0, 0, 0), c);
        }
        p
    }

    fn var(v: Var) -> TriPoly {
        let mut p = TriPoly::default();
        let key = match v {
            Var::X => (1, 0, 0),
            Var::Y => (0, 1, 0),
            Var::T => (0, 0, 1),
        };
        p.terms.insert(key, BigRational::one());
        p
    }

    fn add(&self, other: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            let e = out.terms.entry(k).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                out.terms.remove(&k);
            }
        }
        out
    }

    fn neg(&self) -> TriPoly {
        TriPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }

    fn mul(&self, other: &TriPoly) -> TriPoly {
        let mut out = TriPoly::default();
        for (&(i1, j1, k1), c1) in &self.terms {
            for (&(i2, j2, k2), c2) in &other.terms {
                let key = (i1 + i2, j1 + j2, k1 + k2);
                let e = out.terms.entry(key).or_insert_with(BigRational::zero);
                *e += c1 * c2;
                if e.is_zero() {
                    out.terms.remove(&key);
                }
            }
        }
        out
    }

    fn pow(&self, e: u32) -> TriPoly {
        let mut out = TriPoly::constant(BigRational::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

/// A parsed additive term: a polynomial coefficient and an optional basis
/// 1-form marker.
struct FormTerm {
    coeff: TriPoly,
    basis: Option<Tok>,
}

fn parse_rational(lx: &mut Lexer) -> Result<BigRational> {
    let Some(Tok::Num(n)) = lx.next() else {
        return Err(lx.err("integer"));
    };
    if lx.peek() == Some(&Tok::Slash) {
        lx.next();
        let Some(Tok::Num(d)) = lx.next() else {
            return Err(lx.err("denominator after `/`"));
        };
        if d.is_zero() {
            return Err(lx.err("nonzero denominator"));
        }
        Ok(BigRational::new(n, d))
    } else {
        Ok(BigRational::from_integer(n))
    }
}

/// factor := atom ('^' nat)?; atom := rational | var | '(' expr ')'
fn parse_factor(lx: &mut Lexer, allow_t: bool) -> Result<TriPoly> {
    let atom = match lx.peek() {
        Some(Tok::Num(_)) => TriPoly::constant(parse_rational(lx)?),
        Some(Tok::Var(v)) => {
            let v = *v;
            if v == Var::T && !allow_t {
                return Err(lx.err("x or y (the parameter t needs family mode)"));
            }
            lx.next();
            TriPoly::var(v)
        }
        Some(Tok::LParen) => {
            lx.next();
            let inner = parse_expr(lx, allow_t)?;
            if lx.next() != Some(Tok::RParen) {
                return Err(lx.err("closing parenthesis"));
            }
            inner
        }
        _ => return Err(lx.err("number, variable or `(`")),
    };
    if lx.peek() == Some(&Tok::Caret) {
        lx.next();
        let Some(Tok::Num(e)) = lx.next() else {
            return Err(lx.err("exponent"));
        };
        let e: u32 = e
            .try_into()
            .map_err(|_| lx.err("small nonnegative exponent"))?;
        Ok(atom.pow(e))
    } else {
        Ok(atom)
    }
}

fn starts_factor(t: Option<&Tok>) -> bool {
    matches!(t, Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::LParen))
}

/// term := factor (('*')? factor)* with an optional trailing dx/dy marker.
fn parse_term(lx: &mut Lexer, allow_t: bool, allow_basis: bool) -> Result<FormTerm> {
    let mut coeff = parse_factor(lx, allow_t)?;
    loop {
        match lx.peek() {
            Some(Tok::Star) => {
                lx.next();
                if matches!(lx.peek(), Some(Tok::Dx) | Some(Tok::Dy)) {
                    break;
                }
                coeff = coeff.mul(&parse_factor(lx, allow_t)?);
            }
            t if starts_factor(t) => {
                coeff = coeff.mul(&parse_factor(lx, allow_t)?);
            }
            _ => break,
        }
    }
    let basis = match lx.peek() {
        Some(Tok::Dx) | Some(Tok::Dy) if allow_basis => lx.next(),
        _ => None,
    };
    Ok(FormTerm { coeff, basis })
}

/// expr := ('-')? term (('+'|'-') term)* — polynomial only, no dx/dy.
fn parse_expr(lx: &mut Lexer, allow_t: bool) -> Result<TriPoly> {
    let mut acc = TriPoly::default();
    let mut sign_minus = false;
    if lx.peek() == Some(&Tok::Minus) {
        lx.next();
        sign_minus = true;
    } else if lx.peek() == Some(&Tok::Plus) {
        lx.next();
    }
    loop {
        let term = parse_term(lx, allow_t, false)?;
        let val = if sign_minus {
            term.coeff.neg()
        } else {
            term.coeff
        };
        acc = acc.add(&val);
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                sign_minus = false;
            }
            Some(Tok::Minus) => {
                lx.next();
                sign_minus = true;
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_form_terms(lx: &mut Lexer, allow_t: bool) -> Result<(TriPoly, TriPoly)> {
    let mut a = TriPoly::default();
    let mut b = TriPoly::default();
    let mut sign_minus = false;
    if lx.peek() == Some(&Tok::Minus) {
        lx.next();
        sign_minus = true;
    } else if lx.peek() == Some(&Tok::Plus) {
        lx.next();
    }
    loop {
        let term = parse_term(lx, allow_t, true)?;
        let Some(basis) = term.basis else {
            return Err(lx.err("dx or dy at the end of the term"));
        };
        let val = if sign_minus {
            term.coeff.neg()
        } else {
            term.coeff
        };
        match basis {
            Tok::Dx => a = a.add(&val),
            Tok::Dy => b = b.add(&val),
            _ => unreachable!(),
        }
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                sign_minus = false;
            }
            Some(Tok::Minus) => {
                lx.next();
                sign_minus = true;
            }
            None => break,
            _ => return Err(lx.err("`+`, `-` or end of input")),
        }
    }
    Ok((a, b))
}

fn tri_to_poly2(field: &Arc<FieldDescriptor>, p: &TriPoly) -> Result<Poly2> {
    let mut out = Poly2::zero(field);
    for (&(i, j, k), c) in &p.terms {
        if k > 0 {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                expected: "no parameter t in a plain 1-form".into(),
            });
        }
        out.add_term(i, j, FieldElem::from_rational(field, c.clone()));
    }
    Ok(out)
}

fn tri_to_fampoly(field: &Arc<FieldDescriptor>, p: &TriPoly) -> FamPoly {
    let mut rows: BTreeMap<(u32, u32), Vec<BigRational>> = BTreeMap::new();
    for (&(i, j, k), c) in &p.terms {
        let row = rows.entry((i, j)).or_default();
        if row.len() <= k as usize {
            row.resize(k as usize + 1, BigRational::zero());
        }
        row[k as usize] = c.clone();
    }
    let mut out = FamPoly::zero();
    for ((i, j), coeffs) in rows {
        out.add_term(
            i,
            j,
            Poly1::from_coeffs(
                field,
                coeffs
                    .into_iter()
                    .map(|c| FieldElem::from_rational(field, c))
                    .collect(),
            ),
        );
    }
    out
}

/// Parses a 1-form such as `2*y dy - 3*x^2 dx`.
pub fn parse_oneform(text: &str) -> Result<OneForm> {
    let mut lx = lex(text)?;
    let (a, b) = parse_form_terms(&mut lx, false)?;
    let field = FieldDescriptor::rationals();
    let a = tri_to_poly2(&field, &a)?;
    let b = tri_to_poly2(&field, &b)?;
    if a.is_zero() && b.is_zero() {
        return Err(lx.err("a nonzero 1-form"));
    }
    Ok(OneForm::new(a, b))
}

/// Parses a family such as `x dy + y*(y - t) dx`.
pub fn parse_family(text: &str) -> Result<OneFormFamily> {
    let mut lx = lex(text)?;
    let (a, b) = parse_form_terms(&mut lx, true)?;
    let field = FieldDescriptor::rationals();
    Ok(OneFormFamily {
        a: tri_to_fampoly(&field, &a),
        b: tri_to_fampoly(&field, &b),
    })
}

/// Parses a plain polynomial in x and y.
pub fn parse_poly(text: &str) -> Result<Poly2> {
    let mut lx = lex(text)?;
    let p = parse_expr(&mut lx, false)?;
    if lx.peek().is_some() {
        return Err(lx.err("end of input"));
    }
    tri_to_poly2(&FieldDescriptor::rationals(), &p)
}
