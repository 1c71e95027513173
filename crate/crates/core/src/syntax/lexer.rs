use crate::error::{Error, Result};

use super::ast::Number;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Num(Number),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    Assign,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub offset: usize,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let next = bytes.get(i + 1).copied();
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'!' => Tok::Bang,
            b'&' => Tok::Amp,
            b'|' => Tok::Pipe,
            b':' if next == Some(b'=') => {
                i += 1;
                Tok::Assign
            }
            b':' => Tok::Colon,
            b'-' if next == Some(b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'-' | b'0'..=b'9' => {
                let (num, end) = lex_number(src, i)?;
                out.push(Token { tok: Tok::Num(num), offset: start });
                i = end;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = i;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                    end += 1;
                }
                out.push(Token { tok: Tok::Ident(src[i..end].to_string()), offset: start });
                i = end;
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax(format!("unexpected character `{ch}` at offset {i}")));
            }
        };
        out.push(Token { tok, offset: start });
        i += 1;
    }
    out.push(Token { tok: Tok::Eof, offset: src.len() });
    Ok(out)
}

fn lex_number(src: &str, start: usize) -> Result<(Number, usize)> {
    let bytes = src.as_bytes();
    let mut end = start;
    if bytes[end] == b'-' {
        end += 1;
    }
    let digits_from = end;
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    if end == digits_from {
        return Err(Error::Syntax(format!("expected digits after `-` at offset {start}")));
    }
    let mut real = false;
    // A '.' is part of the number only when a digit follows; otherwise it is
    // the quantifier dot.
    if end + 1 < bytes.len() && bytes[end] == b'.' && bytes[end + 1].is_ascii_digit() {
        real = true;
        end += 1;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
    }
    if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
        let mut exp = end + 1;
        if exp < bytes.len() && (bytes[exp] == b'+' || bytes[exp] == b'-') {
            exp += 1;
        }
        if exp < bytes.len() && bytes[exp].is_ascii_digit() {
            real = true;
            end = exp;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
        }
    }
    let text = &src[start..end];
    let num = if real {
        Number::Real(text.parse().map_err(|_| bad_number(text))?)
    } else {
        Number::Int(text.parse().map_err(|_| bad_number(text))?)
    };
    Ok((num, end))
}

fn bad_number(text: &str) -> Error {
    Error::Syntax(format!("malformed number `{text}`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn arrows_and_negative_numbers() {
        assert_eq!(
            toks("a->b -3 -0.5 1e-7"),
            vec![
                Tok::Ident("a".into()),
                Tok::Arrow,
                Tok::Ident("b".into()),
                Tok::Num(Number::Int(-3)),
                Tok::Num(Number::Real(-0.5)),
                Tok::Num(Number::Real(1e-7)),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn assign_versus_colon() {
        assert_eq!(
            toks("[x := m()] forall y:S. p"),
            vec![
                Tok::LBracket,
                Tok::Ident("x".into()),
                Tok::Assign,
                Tok::Ident("m".into()),
                Tok::LParen,
                Tok::RParen,
                Tok::RBracket,
                Tok::Ident("forall".into()),
                Tok::Ident("y".into()),
                Tok::Colon,
                Tok::Ident("S".into()),
                Tok::Dot,
                Tok::Ident("p".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn rejects_stray_characters() {
        assert!(matches!(tokenize("a # b"), Err(Error::Syntax(_))));
    }
}
