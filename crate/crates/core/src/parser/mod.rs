//! Text syntax for holomorphic expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INTEGER)?
//! atom   := NUMBER | NUMBER 'i' | 'i' | VARIABLE | 'exp' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Variables are `z1..z4` in Cartan coordinates and `t0..t3` in standard
//! coordinates. `i` is reserved for the imaginary unit.

mod job;

use num_complex::Complex64;

pub use job::{
    function_from_json, function_to_json, load_job, parse_job, parse_special_params, Job,
    JobOptions, PsiSpec,
};

use crate::algebra::BasisTag;
use crate::error::{Error, Result};
use crate::holoexpr::{HoloExpr, Monomial, Poly, VarId};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    /// 1-based column of the first character.
    column: usize,
    /// Raw text, for integer exponents.
    text: String,
}

fn syntax(column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        column,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let column = i + 1;
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match ch {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token {
                tok,
                column,
                text: ch.to_string(),
            });
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text
                .parse()
                .map_err(|_| syntax(column, format!("malformed number `{text}`")))?;
            let imaginary = i < chars.len()
                && chars[i] == 'i'
                && !chars.get(i + 1).is_some_and(|c| c.is_ascii_alphanumeric());
            if imaginary {
                i += 1;
                out.push(Token {
                    tok: Tok::Imag(value),
                    column,
                    text: format!("{text}i"),
                });
            } else {
                out.push(Token {
                    tok: Tok::Num(value),
                    column,
                    text,
                });
            }
            continue;
        }
        if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Ident(text.clone()),
                column,
                text,
            });
            continue;
        }
        return Err(syntax(column, format!("unexpected character `{ch}`")));
    }
    out.push(Token {
        tok: Tok::End,
        column: chars.len() + 1,
        text: String::new(),
    });
    Ok(out)
}

/// Variable name for `v` in the given coordinates.
pub fn var_name(v: VarId, coords: BasisTag) -> String {
    match coords {
        BasisTag::Cartan => format!("z{}", v.index()),
        BasisTag::Standard => format!("t{}", v.index() - 1),
    }
}

fn lookup_var(name: &str, coords: BasisTag) -> Option<VarId> {
    VarId::ALL
        .into_iter()
        .find(|&v| var_name(v, coords) == name)
}

fn coords_label(coords: BasisTag) -> &'static str {
    match coords {
        BasisTag::Cartan => "cartan (z1..z4)",
        BasisTag::Standard => "standard (t0..t3)",
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    coords: BasisTag,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let t = self.bump();
        if t.tok == tok {
            Ok(())
        } else {
            Err(syntax(
                t.column,
                format!("expected {what}, found {}", describe(&t)),
            ))
        }
    }

    fn expr(&mut self) -> Result<HoloExpr> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<HoloExpr> {
        let mut acc = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = acc * self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<HoloExpr> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<HoloExpr> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        match t.tok {
            Tok::Num(_) if t.text.chars().all(|c| c.is_ascii_digit()) => {
                let n: u32 = t
                    .text
                    .parse()
                    .map_err(|_| syntax(t.column, format!("exponent `{}` is too large", t.text)))?;
                Ok(base.pow(n))
            }
            _ => Err(syntax(
                t.column,
                format!(
                    "exponent must be a nonnegative integer literal, found {}",
                    describe(&t)
                ),
            )),
        }
    }

    fn atom(&mut self) -> Result<HoloExpr> {
        let t = self.bump();
        match &t.tok {
            Tok::Num(x) => Ok(HoloExpr::constant(Complex64::new(*x, 0.0))),
            Tok::Imag(y) => Ok(HoloExpr::constant(Complex64::new(0.0, *y))),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(HoloExpr::constant(Complex64::new(0.0, 1.0))),
                "exp" => {
                    self.expect(Tok::LParen, "`(` after exp")?;
                    let inner = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(inner.exp())
                }
                name => {
                    if let Some(v) = lookup_var(name, self.coords) {
                        Ok(HoloExpr::var(v))
                    } else if lookup_var(name, self.coords.other()).is_some() {
                        Err(Error::WrongCoordinateSystem {
                            column: t.column,
                            name: name.to_string(),
                            expected: coords_label(self.coords),
                        })
                    } else {
                        Err(syntax(t.column, format!("unknown identifier `{name}`")))
                    }
                }
            },
            _ => Err(syntax(
                t.column,
                format!("expected a value, found {}", describe(&t)),
            )),
        }
    }
}

fn describe(t: &Token) -> String {
    match t.tok {
        Tok::End => "end of input".to_string(),
        _ => format!("`{}`", t.text),
    }
}

pub fn parse_expr(src: &str, coords: BasisTag) -> Result<HoloExpr> {
    let tokens = lex(src)?;
    if tokens.len() == 1 {
        return Err(syntax(1, "empty expression"));
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        coords,
    };
    let e = p.expr()?;
    let rest = p.peek();
    if rest.tok != Tok::End {
        return Err(syntax(
            rest.column,
            format!("unexpected {}", describe(rest)),
        ));
    }
    Ok(e)
}

/// Canonical text of `normalize(e)`.
pub fn print_expr(e: &HoloExpr, coords: BasisTag) -> String {
    print_poly(&e.to_poly(), coords)
}

fn print_poly(p: &Poly, coords: BasisTag) -> String {
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().enumerate() {
        let mono = print_monomial(m, coords);
        let (negative, coef) = signed_coefficient(c);
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        match (coef, mono.is_empty()) {
            (Coef::One, true) => out.push('1'),
            (Coef::One, false) => out.push_str(&mono),
            (Coef::Text(t), true) => out.push_str(&t),
            (Coef::Text(t), false) => {
                out.push_str(&t);
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

enum Coef {
    One,
    Text(String),
}

/// Splits off a leading sign where the coefficient is real or purely
/// imaginary; general complex coefficients are printed in parentheses.
fn signed_coefficient(c: Complex64) -> (bool, Coef) {
    if c.im == 0.0 {
        let neg = c.re < 0.0;
        let a = c.re.abs();
        if a == 1.0 {
            (neg, Coef::One)
        } else {
            (neg, Coef::Text(format!("{a}")))
        }
    } else if c.re == 0.0 {
        let neg = c.im < 0.0;
        let b = c.im.abs();
        if b == 1.0 {
            (neg, Coef::Text("i".into()))
        } else {
            (neg, Coef::Text(format!("{b}i")))
        }
    } else {
        let sign = if c.im < 0.0 { '-' } else { '+' };
        let re = if c.re < 0.0 {
            format!("-{}", -c.re)
        } else {
            format!("{}", c.re)
        };
        (false, Coef::Text(format!("({re}{sign}{}i)", c.im.abs())))
    }
}

fn print_monomial(m: &Monomial, coords: BasisTag) -> String {
    let mut factors = Vec::new();
    for (s, &k) in m.pows.iter().enumerate() {
        let name = var_name(VarId::ALL[s], coords);
        match k {
            0 => {}
            1 => factors.push(name),
            k => factors.push(format!("{name}^{k}")),
        }
    }
    if let Some(arg) = &m.exp {
        factors.push(format!("exp({})", print_poly(arg, coords)));
    }
    factors.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: u8) -> HoloExpr {
        HoloExpr::v(i)
    }

    fn cart(s: &str) -> HoloExpr {
        parse_expr(s, BasisTag::Cartan).unwrap()
    }

    #[test]
    fn grammar_example() {
        let e = cart("z1^2 + 2i*z2");
        let expected = z(1).pow(2) + HoloExpr::constant(Complex64::new(0.0, 2.0)) * z(2);
        assert_eq!(e, expected);
    }

    #[test]
    fn exp_call() {
        assert_eq!(cart("exp(z1*z4)"), (z(1) * z(4)).exp());
    }

    #[test]
    fn cartan_generator() {
        let e = parse_expr("t0 - i*t1", BasisTag::Standard).unwrap();
        let z1 = HoloExpr::linear(
            [
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::default(),
                Complex64::default(),
            ],
            Complex64::default(),
        );
        assert!(e.normalized_eq(&z1));
    }

    #[test]
    fn precedence() {
        assert_eq!(cart("z1+z2*z3"), z(1) + z(2) * z(3));
        assert_eq!(cart("-z1^2"), -(z(1).pow(2)));
        assert_eq!(cart(" ( z1 ) "), z(1));
    }

    #[test]
    fn literals() {
        assert_eq!(cart("2i"), HoloExpr::constant(Complex64::new(0.0, 2.0)));
        assert_eq!(cart("i"), HoloExpr::constant(Complex64::new(0.0, 1.0)));
        assert_eq!(cart("1.5"), HoloExpr::real(1.5));
        assert!(cart("(1+2i)").normalized_eq(&HoloExpr::constant(Complex64::new(1.0, 2.0))));
    }

    #[test]
    fn errors_carry_columns() {
        assert_eq!(
            parse_expr("z1 + ", BasisTag::Cartan),
            Err(Error::Syntax {
                column: 6,
                message: "expected a value, found end of input".into()
            })
        );
        assert!(matches!(
            parse_expr("z1 $ z2", BasisTag::Cartan),
            Err(Error::Syntax { column: 4, .. })
        ));
        assert!(matches!(
            parse_expr("z1^1.5", BasisTag::Cartan),
            Err(Error::Syntax { column: 4, .. })
        ));
        assert!(matches!(
            parse_expr("z1^-1", BasisTag::Cartan),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("", BasisTag::Cartan),
            Err(Error::Syntax { column: 1, .. })
        ));
        assert!(matches!(
            parse_expr("z5", BasisTag::Cartan),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("(z1", BasisTag::Cartan),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("z1 z2", BasisTag::Cartan),
            Err(Error::Syntax { column: 4, .. })
        ));
    }

    #[test]
    fn coordinate_systems_do_not_mix() {
        assert!(matches!(
            parse_expr("z1 + t0", BasisTag::Cartan),
            Err(Error::WrongCoordinateSystem { column: 6, .. })
        ));
        assert!(matches!(
            parse_expr("z1", BasisTag::Standard),
            Err(Error::WrongCoordinateSystem { column: 1, .. })
        ));
    }

    #[test]
    fn printing() {
        assert_eq!(print_expr(&HoloExpr::zero(), BasisTag::Cartan), "0");
        assert_eq!(print_expr(&(z(1) + z(1)), BasisTag::Cartan), "2*z1");
        assert_eq!(print_expr(&(z(1) + z(1)), BasisTag::Standard), "2*t0");
        assert_eq!(
            print_expr(&cart("z1^2 + 2i*z2"), BasisTag::Cartan),
            "z1^2 + 2i*z2"
        );
        assert_eq!(
            print_expr(&cart("3 - z2*z1 - i*exp(z4)"), BasisTag::Cartan),
            "-z1*z2 + 3 - i*exp(z4)"
        );
        assert_eq!(
            print_expr(&cart("(1-2i)*z3 + (-0.5+i)"), BasisTag::Cartan),
            "(1-2i)*z3 + (-0.5+1i)"
        );
    }

    #[test]
    fn printed_text_reparses() {
        for src in [
            "z1^2 + 2i*z2",
            "exp(z1 - 2*z3)*z2^3 - 7",
            "(0.25-3i)*z4*exp(i*z1)",
            "-i",
        ] {
            let e = cart(src);
            let text = print_expr(&e, BasisTag::Cartan);
            assert!(cart(&text).normalized_eq(&e), "{src} -> {text}");
            assert_eq!(print_expr(&cart(&text), BasisTag::Cartan), text);
        }
    }
}
