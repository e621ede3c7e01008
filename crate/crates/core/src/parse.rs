//! Text formats: integer polynomials (`x^5+2*x+1`) and curve specifications
//! (`p=3; k=2; f=x^5+1; h=0`).

use std::fmt;

use crate::error::{Error, Result};

/// Character cursor that tracks 1-based line and column.
struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    /// Skip spaces and tabs (not newlines, which separate spec fields).
    fn skip_blank(&mut self) {
        while matches!(self.peek(), Some(c) if c == ' ' || c == '\t' || c == '\r') {
            self.bump();
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn number(&mut self) -> Result<u64> {
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.bump();
        }
        if digits.is_empty() {
            return Err(self.error("expected a decimal integer"));
        }
        digits
            .parse()
            .map_err(|_| self.error(format!("integer {digits} is too large")))
    }

    fn at_field_end(&mut self) -> bool {
        matches!(self.peek(), None | Some(';') | Some('\n'))
    }
}

/// Parse one term: `[coef][*]var[^exp]` or `coef`.
fn term(cur: &mut Cursor, var: char) -> Result<(u64, usize)> {
    cur.skip_blank();
    let mut coef = None;
    if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
        coef = Some(cur.number()?);
        cur.skip_blank();
        if cur.peek() == Some('*') {
            cur.bump();
            cur.skip_blank();
            if cur.peek() != Some(var) {
                return Err(cur.error(format!("expected variable `{var}` after `*`")));
            }
        }
    }
    match cur.peek() {
        Some(c) if c == var => {
            cur.bump();
            cur.skip_blank();
            let exp = if cur.peek() == Some('^') {
                cur.bump();
                cur.skip_blank();
                cur.number()? as usize
            } else {
                1
            };
            Ok((coef.unwrap_or(1), exp))
        }
        Some(c) if c.is_alphabetic() => {
            Err(cur.error(format!("unexpected variable `{c}`, expected `{var}`")))
        }
        _ => match coef {
            Some(c) => Ok((c, 0)),
            None => Err(cur.error("expected a coefficient or variable")),
        },
    }
}

/// Sum of signed monomials, stopping at `;`, newline or end of input.
fn poly_until_field_end(cur: &mut Cursor, var: char) -> Result<Vec<i64>> {
    let mut coeffs: Vec<i64> = Vec::new();
    cur.skip_blank();
    let mut first = true;
    loop {
        cur.skip_blank();
        let mut sign = 1i64;
        match cur.peek() {
            Some('+') => {
                cur.bump();
            }
            Some('-') => {
                cur.bump();
                sign = -1;
            }
            _ if !first => {
                if cur.at_field_end() {
                    break;
                }
                return Err(cur.error("expected `+` or `-` between terms"));
            }
            _ => {}
        }
        let (c, e) = term(cur, var)?;
        let c = i64::try_from(c).map_err(|_| cur.error("coefficient too large"))?;
        if coeffs.len() <= e {
            coeffs.resize(e + 1, 0);
        }
        coeffs[e] = coeffs[e]
            .checked_add(sign * c)
            .ok_or_else(|| cur.error("coefficient overflow"))?;
        first = false;
        cur.skip_blank();
        if cur.at_field_end() {
            break;
        }
    }
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    Ok(coeffs)
}

/// Parse an integer polynomial in `var`; coefficients low to high, trimmed.
pub fn parse_int_poly(text: &str, var: char) -> Result<Vec<i64>> {
    let mut cur = Cursor::new(text);
    let p = poly_until_field_end(&mut cur, var)?;
    cur.skip_blank();
    if cur.peek().is_some() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(p)
}

/// Render an integer polynomial in the grammar accepted by [`parse_int_poly`].
pub fn format_int_poly(coeffs: &[i64], var: char) -> String {
    let mut out = String::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
        let a = c.unsigned_abs();
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let body = match (i, a) {
            (0, _) => a.to_string(),
            (_, 1) => mono,
            _ => format!("{a}*{mono}"),
        };
        out.push_str(sign);
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parsed `p=...; k=...; f=...; h=...` curve specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    pub p: u64,
    pub k: u32,
    /// Coefficients of `f(x)`, low to high.
    pub f: Vec<i64>,
    /// Coefficients of `h(x)`, low to high; empty for `h = 0`.
    pub h: Vec<i64>,
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "p={}; k={}; f={}; h={}",
            self.p,
            self.k,
            format_int_poly(&self.f, 'x'),
            format_int_poly(&self.h, 'x')
        )
    }
}

/// Parse a curve specification. Fields are separated by `;` or newlines,
/// `k` defaults to 1 and `h` to 0. Primality and degree checks happen later.
pub fn parse_curve_spec(text: &str) -> Result<CurveSpec> {
    let mut cur = Cursor::new(text);
    let (mut p, mut k, mut f, mut h) = (None, None, None, None);
    loop {
        while matches!(cur.peek(), Some(c) if c.is_whitespace() || c == ';') {
            cur.bump();
        }
        let Some(key) = cur.peek() else { break };
        let (line, column) = (cur.line, cur.column);
        cur.bump();
        cur.skip_blank();
        if cur.peek() != Some('=') {
            return Err(cur.error(format!("expected `=` after `{key}`")));
        }
        cur.bump();
        cur.skip_blank();
        let duplicate = || Error::Syntax {
            line,
            column,
            message: format!("field `{key}` given twice"),
        };
        match key {
            'p' => {
                if p.replace(cur.number()?).is_some() {
                    return Err(duplicate());
                }
            }
            'k' => {
                let v = cur.number()?;
                let v = u32::try_from(v).map_err(|_| cur.error("extension degree too large"))?;
                if k.replace(v).is_some() {
                    return Err(duplicate());
                }
            }
            'f' => {
                if f.replace(poly_until_field_end(&mut cur, 'x')?).is_some() {
                    return Err(duplicate());
                }
            }
            'h' => {
                if h.replace(poly_until_field_end(&mut cur, 'x')?).is_some() {
                    return Err(duplicate());
                }
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column,
                    message: format!("unknown field `{other}` (expected p, k, f or h)"),
                })
            }
        }
        cur.skip_blank();
        if !cur.at_field_end() {
            return Err(cur.error("expected `;` or end of line"));
        }
    }
    let p = p.ok_or_else(|| cur.error("missing field `p`"))?;
    let f = f.ok_or_else(|| cur.error("missing field `f`"))?;
    Ok(CurveSpec {
        p,
        k: k.unwrap_or(1),
        f,
        h: h.unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_grammar() {
        assert_eq!(parse_int_poly("x^5+2*x+1", 'x').unwrap(), vec![1, 2, 0, 0, 0, 1]);
        assert_eq!(parse_int_poly(" - x ^ 2 + 3 x - 4 ", 'x').unwrap(), vec![-4, 3, -1]);
        assert_eq!(parse_int_poly("0", 'x').unwrap(), Vec::<i64>::new());
        assert_eq!(parse_int_poly("x+x", 'x').unwrap(), vec![0, 2]);
    }

    #[test]
    fn polynomial_errors_have_positions() {
        match parse_int_poly("x^2 + y", 'x') {
            Err(Error::Syntax { line: 1, column: 7, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_int_poly("x^", 'x').is_err());
        assert!(parse_int_poly("2*", 'x').is_err());
        assert!(parse_int_poly("x x", 'x').is_err());
    }

    #[test]
    fn curve_spec_defaults() {
        let s = parse_curve_spec("p=3; f=x^3+x").unwrap();
        assert_eq!(
            s,
            CurveSpec {
                p: 3,
                k: 1,
                f: vec![0, 1, 0, 1],
                h: vec![]
            }
        );
        assert_eq!(s.to_string(), "p=3; k=1; f=x^3+x; h=0");
    }

    #[test]
    fn curve_spec_full() {
        let s = parse_curve_spec("p=3; k=2; f=x^5+1; h=0").unwrap();
        assert_eq!((s.p, s.k), (3, 2));
        assert_eq!(s.f, vec![1, 0, 0, 0, 0, 1]);
        let multi = parse_curve_spec("p=2\nf=x^3+x+1\nh=x\n").unwrap();
        assert_eq!(multi.h, vec![0, 1]);
    }

    #[test]
    fn curve_spec_errors() {
        match parse_curve_spec("p=3;\nq=4") {
            Err(Error::Syntax { line: 2, column: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_curve_spec("p=3").is_err());
        assert!(parse_curve_spec("p=3; p=5; f=x^3").is_err());
        assert!(parse_curve_spec("p=3 f=x^3").is_err());
    }

    #[test]
    fn roundtrip_format() {
        for text in ["x^5+2*x+1", "-x^3+x-7", "0", "3*x^2"] {
            let p = parse_int_poly(text, 'x').unwrap();
            assert_eq!(format_int_poly(&p, 'x'), text);
        }
    }
}
