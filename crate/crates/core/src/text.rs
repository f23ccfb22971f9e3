//! Text forms: field names, elements, polynomials, rational functions,
//! matrices and subgroup descriptions.

use std::fmt;

use crate::field::{split_prime_power, Elem, Field};
use crate::pgl2::{ProjElement, Subgroup, DEFAULT_CAP};
use crate::poly::Poly;
use crate::quotient::RationalFunction;

/// Parse failure with the byte offset of the offending character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(input: &str, position: usize, message: impl Into<String>) -> Self {
        ParseError {
            input: input.to_string(),
            position: position.min(input.len()),
            message: message.into(),
        }
    }

    /// Message, input line, and a caret under the failing position.
    pub fn render(&self) -> String {
        format!("{}\n  {}\n  {}^", self.message, self.input, " ".repeat(self.position))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at position {}", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    /// Offset of `src` inside the text shown in error messages.
    base: usize,
    full: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            base: 0,
            full: src,
        }
    }

    fn sub(full: &'a str, base: usize, len: usize) -> Self {
        let src = &full[base..base + len];
        Cursor {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            base,
            full,
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.full, self.base + self.pos, message)
    }

    fn err_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        ParseError::new(self.full, self.base + pos, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    fn number(&mut self) -> Result<u128, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err_at(start, "number out of range"))
    }

    /// Element: integer literal (optionally signed) or digit tuple.
    fn element(&mut self, field: &Field) -> Result<Elem, ParseError> {
        match self.peek() {
            Some(b'(') => {
                let start = self.pos;
                self.pos += 1;
                let mut digits = Vec::new();
                loop {
                    let at = self.pos;
                    let d = self.number()?;
                    if d >= field.characteristic() as u128 {
                        return Err(self.err_at(
                            at,
                            format!("digit {d} out of range for characteristic {}", field.characteristic()),
                        ));
                    }
                    digits.push(d as u64);
                    if self.eat(b')') {
                        break;
                    }
                    self.expect(b',')?;
                }
                field
                    .from_digits(&digits)
                    .map_err(|e| self.err_at(start, e.to_string()))
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(field.neg(self.element(field)?))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let p = field.characteristic() as u128;
                Ok(field.from_int((n % p) as i64))
            }
            _ => Err(self.err("expected a field element")),
        }
    }

    fn term(&mut self, field: &Field) -> Result<(Elem, usize), ParseError> {
        let coeff = match self.peek() {
            Some(b'x') => Elem::ONE,
            _ => {
                let c = self.element(field)?;
                if !self.eat(b'*') {
                    if self.peek() == Some(b'x') {
                        // juxtaposition such as 2x
                    } else {
                        return Ok((c, 0));
                    }
                }
                c
            }
        };
        if !self.eat(b'x') {
            return Err(self.err("expected 'x'"));
        }
        let exp = if self.eat(b'^') {
            let at = self.pos;
            let e = self.number()?;
            usize::try_from(e).map_err(|_| self.err_at(at, "exponent too large"))?
        } else {
            1
        };
        Ok((coeff, exp))
    }

    fn poly(&mut self, field: &Field) -> Result<Poly, ParseError> {
        let mut coeffs: Vec<Elem> = Vec::new();
        let mut negate = self.eat(b'-');
        loop {
            let (c, k) = self.term(field)?;
            let c = if negate { field.neg(c) } else { c };
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Elem::ZERO);
            }
            coeffs[k] = field.add(coeffs[k], c);
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                break;
            }
        }
        Ok(Poly::new(field, coeffs))
    }

    fn matrix(&mut self, field: &Field) -> Result<ProjElement, ParseError> {
        let start = self.pos;
        self.expect(b'[')?;
        self.expect(b'[')?;
        let a = self.element(field)?;
        self.expect(b',')?;
        let b = self.element(field)?;
        self.expect(b']')?;
        self.expect(b',')?;
        self.expect(b'[')?;
        let c = self.element(field)?;
        self.expect(b',')?;
        let d = self.element(field)?;
        self.expect(b']')?;
        self.expect(b']')?;
        ProjElement::canonicalize(field, a, b, c, d).map_err(|e| self.err_at(start, e.to_string()))
    }
}

/// `GF(q)` or a bare prime power `q`.
pub fn parse_field(text: &str, modulus: Option<&str>) -> Result<Field, ParseError> {
    let mut cur = Cursor::new(text);
    let wrapped = cur.eat(b'G');
    if wrapped {
        cur.expect(b'F')?;
        cur.expect(b'(')?;
    }
    let at = cur.pos;
    let q = cur.number()?;
    if wrapped {
        cur.expect(b')')?;
    }
    cur.finish()?;
    let (p, n) = split_prime_power(q).map_err(|e| cur.err_at(at, e.to_string()))?;
    match modulus {
        None => Field::new(p, n).map_err(|e| cur.err_at(at, e.to_string())),
        Some(m) => {
            let prime = Field::prime(p);
            let poly = parse_poly(&prime, m)?;
            if poly.degree() != Some(n as usize) {
                return Err(ParseError::new(m, 0, format!("modulus must have degree {n}")));
            }
            let codes: Vec<u64> = poly.monic().coeffs().iter().map(|c| c.code()).collect();
            Field::with_modulus(p, &codes).map_err(|e| ParseError::new(m, 0, e.to_string()))
        }
    }
}

pub fn parse_element(field: &Field, text: &str) -> Result<Elem, ParseError> {
    let mut cur = Cursor::new(text);
    let e = cur.element(field)?;
    cur.finish()?;
    Ok(e)
}

pub fn parse_poly(field: &Field, text: &str) -> Result<Poly, ParseError> {
    let mut cur = Cursor::new(text);
    if cur.at_end() {
        return Err(cur.err("empty polynomial"));
    }
    let p = cur.poly(field)?;
    cur.finish()?;
    Ok(p)
}

/// Top-level (unparenthesized) positions of `sep`.
fn top_level(text: &str, sep: u8) -> Vec<usize> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    for (i, &b) in text.as_bytes().iter().enumerate() {
        match b {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            _ if b == sep && depth == 0 => out.push(i),
            _ => {}
        }
    }
    out
}

/// Polynomial inside optional grouping parentheses, starting at `base` of `full`.
fn grouped_poly(field: &Field, full: &str, base: usize, len: usize) -> Result<Poly, ParseError> {
    let part = &full[base..base + len];
    let trimmed_start = part.len() - part.trim_start().len();
    let inner = part.trim();
    if inner.starts_with('(') && inner.ends_with(')') && inner.len() >= 2 {
        let body = &inner[1..inner.len() - 1];
        let closes_at_end = {
            let mut depth = 0;
            let mut ok = true;
            for (i, b) in inner.bytes().enumerate() {
                match b {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 && i + 1 != inner.len() {
                            ok = false;
                        }
                    }
                    _ => {}
                }
            }
            ok
        };
        if closes_at_end && (body.contains('x') || !body.contains(',')) {
            let mut cur = Cursor::sub(full, base + trimmed_start + 1, body.len());
            let p = cur.poly(field)?;
            cur.finish()?;
            return Ok(p);
        }
    }
    let mut cur = Cursor::sub(full, base, len);
    if cur.at_end() {
        return Err(cur.err("empty polynomial"));
    }
    let p = cur.poly(field)?;
    cur.finish()?;
    Ok(p)
}

/// `<poly>` or `<poly> / <poly>`, with optional parentheses around each side.
pub fn parse_rf(field: &Field, text: &str) -> Result<RationalFunction, ParseError> {
    let slashes = top_level(text, b'/');
    let (num, den) = match slashes.as_slice() {
        [] => (grouped_poly(field, text, 0, text.len())?, Poly::one(field)),
        [s] => (
            grouped_poly(field, text, 0, *s)?,
            grouped_poly(field, text, s + 1, text.len() - s - 1)?,
        ),
        [_, second, ..] => return Err(ParseError::new(text, *second, "more than one '/'")),
    };
    RationalFunction::new(&num, &den).map_err(|e| ParseError::new(text, 0, e.to_string()))
}

pub fn parse_matrix(field: &Field, text: &str) -> Result<ProjElement, ParseError> {
    let mut cur = Cursor::new(text);
    let m = cur.matrix(field)?;
    cur.finish()?;
    Ok(m)
}

/// `trivial`, `cyclic:M`, `gens:M,M,...`, `translations:v,...`, `diagonal:n`,
/// `borel:q0`, `pgl2:q0`.
pub fn parse_group(field: &Field, text: &str) -> Result<Subgroup, ParseError> {
    let (kind, rest_at) = match text.find(':') {
        Some(i) => (&text[..i], i + 1),
        None => (text, text.len()),
    };
    let rest = &text[rest_at..];
    let group_err = |e: crate::pgl2::GroupError| ParseError::new(text, rest_at, e.to_string());
    let list = |cur_base: usize| -> Vec<(usize, usize)> {
        let body = &text[cur_base..];
        let mut parts = Vec::new();
        let mut start = 0;
        for c in top_level(body, b',') {
            parts.push((cur_base + start, c - start));
            start = c + 1;
        }
        parts.push((cur_base + start, body.len() - start));
        parts
    };
    match kind.trim() {
        "trivial" => Ok(Subgroup::trivial(field)),
        "cyclic" => {
            let mut cur = Cursor::sub(text, rest_at, rest.len());
            let m = cur.matrix(field)?;
            cur.finish()?;
            Subgroup::cyclic(field, m).map_err(group_err)
        }
        "gens" => {
            let mut gens = Vec::new();
            for (at, len) in list(rest_at) {
                let mut cur = Cursor::sub(text, at, len);
                gens.push(cur.matrix(field)?);
                cur.finish()?;
            }
            Subgroup::closure(field, &gens, DEFAULT_CAP).map_err(group_err)
        }
        "translations" => {
            let mut vs = Vec::new();
            for (at, len) in list(rest_at) {
                let mut cur = Cursor::sub(text, at, len);
                vs.push(cur.element(field)?);
                cur.finish()?;
            }
            Subgroup::translations(field, &vs).map_err(group_err)
        }
        "diagonal" | "borel" | "pgl2" => {
            let mut cur = Cursor::sub(text, rest_at, rest.len());
            let n = cur.number()?;
            cur.finish()?;
            let built = match kind.trim() {
                "diagonal" => {
                    let n = u64::try_from(n).map_err(|_| ParseError::new(text, rest_at, "order too large"))?;
                    Subgroup::diagonal(field, n)
                }
                "borel" => Subgroup::borel(field, n),
                _ => Subgroup::full_pgl2(field, n),
            };
            built.map_err(group_err)
        }
        _ => Err(ParseError::new(
            text,
            0,
            "unknown group kind (expected trivial, cyclic, gens, translations, diagonal, borel or pgl2)",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields() {
        let f = parse_field("GF(9)", None).unwrap();
        assert_eq!((f.characteristic(), f.degree()), (3, 2));
        assert_eq!(parse_field("7", None).unwrap().order(), 7);
        let e = parse_field("GF(6)", None).unwrap_err();
        assert_eq!(e.position, 3);
        let m = parse_field("GF(9)", Some("x^2+x+2")).unwrap();
        assert_eq!(m.modulus(), &[2, 1, 1]);
    }

    #[test]
    fn polys_in_any_order() {
        let f2 = parse_field("GF(2)", None).unwrap();
        let a = parse_poly(&f2, "x^3+x+1").unwrap();
        let b = parse_poly(&f2, "1 + x + x^3").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, Poly::from_ints(&f2, &[1, 1, 0, 1]));
        let f3 = parse_field("GF(3)", None).unwrap();
        assert_eq!(parse_poly(&f3, "x^3-x").unwrap().to_text(), "x^3+2*x");
        assert_eq!(parse_poly(&f3, "2x^2 + 2*x").unwrap(), Poly::from_ints(&f3, &[0, 2, 2]));
        let f9 = parse_field("GF(9)", None).unwrap();
        let p = parse_poly(&f9, "x+(0,1)").unwrap();
        assert_eq!(p.coeff(0), f9.generator());
        assert_eq!(parse_poly(&f9, &p.to_text()).unwrap(), p);
    }

    #[test]
    fn poly_errors_have_positions() {
        let f2 = parse_field("GF(2)", None).unwrap();
        let e = parse_poly(&f2, "x^3+y").unwrap_err();
        assert_eq!(e.position, 4);
        assert!(e.render().ends_with("    ^"));
        let f9 = parse_field("GF(9)", None).unwrap();
        let e = parse_poly(&f9, "x+(0,3)").unwrap_err();
        assert_eq!(e.position, 5);
    }

    #[test]
    fn rational_functions() {
        let f3 = parse_field("GF(3)", None).unwrap();
        let q = parse_rf(&f3, "(x^2+1)/(x)").unwrap();
        assert_eq!(q.num(), &Poly::from_ints(&f3, &[1, 0, 1]));
        assert_eq!(parse_rf(&f3, "x^2+1 / x").unwrap(), q);
        assert_eq!(parse_rf(&f3, &q.to_text()).unwrap(), q);
        let f9 = parse_field("GF(9)", None).unwrap();
        let c = parse_rf(&f9, "x/(0,1)").unwrap();
        assert_eq!(c.den().coeff(0), f9.generator());
    }

    #[test]
    fn groups() {
        let f9 = parse_field("GF(9)", None).unwrap();
        assert_eq!(parse_group(&f9, "cyclic:[[0,1],[1,0]]").unwrap().order(), 2);
        assert_eq!(parse_group(&f9, "borel:3").unwrap().order(), 6);
        assert_eq!(parse_group(&f9, "translations:1,(0,1)").unwrap().order(), 9);
        assert_eq!(
            parse_group(&f9, "gens:[[0,1],[1,0]],[[1,1],[0,1]]").unwrap().order(),
            24
        );
        assert_eq!(parse_group(&f9, "pgl2:3").unwrap().order(), 24);
        let e = parse_group(&f9, "cyclic:[[1,1],[1,1]]").unwrap_err();
        assert_eq!(e.position, 7);
        assert!(parse_group(&f9, "dihedral:4").is_err());
    }
}
