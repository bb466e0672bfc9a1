use super::{BinOp, Cmp, Expr, Func, Func2, Var};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    /// Integer literal as written, kept exact for exponents.
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Cmp(Cmp),
    Eof,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(Tok, usize)> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::Eof, start));
        };
        let single = |t: Tok, lx: &mut Lexer| {
            lx.pos += 1;
            Ok((t, start))
        };
        match c {
            b'+' => single(Tok::Plus, self),
            b'-' => single(Tok::Minus, self),
            b'*' => single(Tok::Star, self),
            b'/' => single(Tok::Slash, self),
            b'^' => single(Tok::Caret, self),
            b'(' => single(Tok::LParen, self),
            b')' => single(Tok::RParen, self),
            b',' => single(Tok::Comma, self),
            b'<' | b'>' => {
                self.pos += 1;
                let eq = self.src.get(self.pos) == Some(&b'=');
                if eq {
                    self.pos += 1;
                }
                let cmp = match (c, eq) {
                    (b'<', false) => Cmp::Lt,
                    (b'<', true) => Cmp::Le,
                    (_, false) => Cmp::Gt,
                    (_, true) => Cmp::Ge,
                };
                Ok((Tok::Cmp(cmp), start))
            }
            b'0'..=b'9' | b'.' => self.number(start),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
                Ok((Tok::Ident(name.to_string()), start))
            }
            _ => Err(Error::Syntax { offset: start, message: format!("unexpected character `{}`", char::from(c)) }),
        }
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize)> {
        let digits = |lx: &mut Lexer| {
            let s = lx.pos;
            while lx.src.get(lx.pos).is_some_and(u8::is_ascii_digit) {
                lx.pos += 1;
            }
            lx.pos - s
        };
        let int_digits = digits(self);
        let mut is_int = true;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            is_int = false;
            if digits(self) == 0 && int_digits == 0 {
                return Err(Error::Syntax { offset: start, message: "malformed number".into() });
            }
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // `2e` is not an exponent; leave the `e` for the identifier lexer.
                self.pos = save;
            } else {
                is_int = false;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        if is_int {
            if let Ok(v) = text.parse::<i64>() {
                return Ok((Tok::Int(v), start));
            }
        }
        text.parse::<f64>()
            .map(|v| (Tok::Num(v), start))
            .map_err(|_| Error::Syntax { offset: start, message: format!("malformed number `{text}`") })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<()> {
        let (tok, at) = self.lexer.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.at, message: message.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.tok == tok {
            self.bump()
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.tok == Tok::Minus {
            self.bump()?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.tok != Tok::Caret {
            return Ok(base);
        }
        self.bump()?;
        let negative = self.tok == Tok::Minus;
        if negative {
            self.bump()?;
        }
        let Tok::Int(n) = self.tok else {
            return self.error("expected an integer exponent");
        };
        let n = if negative { -n } else { n };
        let Ok(n) = i32::try_from(n) else {
            return self.error("exponent out of range");
        };
        self.bump()?;
        if self.tok == Tok::Caret {
            return self.error("chained powers need parentheses");
        }
        Ok(Expr::pow(base, n))
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::Num(v))
            }
            Tok::Int(v) => {
                self.bump()?;
                Ok(Expr::Num(v as f64))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                self.close_paren()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.at;
                self.bump()?;
                match name.as_str() {
                    "x" => Ok(Expr::Var(Var::X)),
                    "y" => Ok(Expr::Var(Var::Y)),
                    "pi" => Ok(Expr::Pi),
                    "sin" => self.call1(Func::Sin),
                    "cos" => self.call1(Func::Cos),
                    "exp" => self.call1(Func::Exp),
                    "log" => self.call1(Func::Log),
                    "sqrt" => self.call1(Func::Sqrt),
                    "abs" => self.call1(Func::Abs),
                    "min" => self.call2(Func2::Min),
                    "max" => self.call2(Func2::Max),
                    "select" => self.select(),
                    _ => Err(Error::UnknownIdentifier { offset: at, name }),
                }
            }
            Tok::Eof => self.error("unexpected end of input"),
            Tok::Cmp(_) => self.error("comparison is only allowed as a select condition"),
            _ => self.error("expected an operand"),
        }
    }

    fn close_paren(&mut self) -> Result<()> {
        match self.tok {
            Tok::RParen => self.bump(),
            Tok::Cmp(_) => self.error("comparison is only allowed as a select condition"),
            Tok::Eof => self.error("unbalanced parenthesis"),
            _ => self.error("expected `)`"),
        }
    }

    fn call1(&mut self, f: Func) -> Result<Expr> {
        self.expect(Tok::LParen, "`(`")?;
        let arg = self.expr()?;
        self.close_paren()?;
        Ok(Expr::Call(f, Box::new(arg)))
    }

    fn call2(&mut self, f: Func2) -> Result<Expr> {
        self.expect(Tok::LParen, "`(`")?;
        let a = self.expr()?;
        self.expect(Tok::Comma, "`,`")?;
        let b = self.expr()?;
        self.close_paren()?;
        Ok(Expr::Call2(f, Box::new(a), Box::new(b)))
    }

    fn select(&mut self) -> Result<Expr> {
        self.expect(Tok::LParen, "`(`")?;
        let lhs = self.expr()?;
        let Tok::Cmp(cmp) = self.tok else {
            return self.error("expected a comparison");
        };
        self.bump()?;
        let rhs = self.expr()?;
        self.expect(Tok::Comma, "`,`")?;
        let then = self.expr()?;
        self.expect(Tok::Comma, "`,`")?;
        let otherwise = self.expr()?;
        self.close_paren()?;
        Ok(Expr::Select { lhs: Box::new(lhs), cmp, rhs: Box::new(rhs), then: Box::new(then), otherwise: Box::new(otherwise) })
    }
}

/// Parses an expression in `x` and `y`. Errors carry byte offsets into `text`.
pub fn parse_expr(text: &str) -> Result<Expr> {
    if text.trim().is_empty() {
        return Err(Error::Syntax { offset: 0, message: "empty expression".into() });
    }
    let mut p = Parser { lexer: Lexer { src: text.as_bytes(), pos: 0 }, tok: Tok::Eof, at: 0 };
    p.bump()?;
    let e = p.expr()?;
    match p.tok {
        Tok::Eof => Ok(e),
        Tok::Cmp(_) => p.error("comparison is only allowed as a select condition"),
        Tok::RParen => p.error("unbalanced parenthesis"),
        _ => p.error("unexpected trailing input"),
    }
}
