//! Tokens of the document language.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{DslError, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `@name`, a coordinate vector field.
    Partial(String),
    Int(BigInt),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Comma,
    Semi,
    Eq,
    Plus,
    Minus,
    Star,
    StarStar,
    Slash,
    Caret,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Partial(s) => write!(f, "`@{s}`"),
            Tok::Int(n) => write!(f, "number `{n}`"),
            Tok::Eof => f.write_str("end of input"),
            other => write!(f, "`{}`", other.symbol()),
        }
    }
}

impl Tok {
    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Eq => "=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::StarStar => "**",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::Ident(_) => "identifier",
            Tok::Partial(_) => "@name",
            Tok::Int(_) => "number",
            Tok::Eof => "end of input",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
    /// Byte offset just past the token, used to detect adjacency.
    pub end: usize,
    pub start: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits the input into tokens. `#` starts a comment running to the end of the line.
pub fn lex(src: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    let byte_at = |i: usize| chars.get(i).map_or(src.len(), |(b, _)| *b);
    while i < chars.len() {
        let c = chars[i].1;
        let pos = Pos { line, col };
        let start_i = i;
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if is_ident_start(c) || c == '@' {
            let at = c == '@';
            if at {
                i += 1;
                if i >= chars.len() || !is_ident_start(chars[i].1) {
                    return Err(DslError::Lex {
                        pos,
                        message: String::from("`@` must be followed by a coordinate name"),
                    });
                }
            }
            let s = i;
            while i < chars.len() && is_ident_char(chars[i].1) {
                i += 1;
            }
            let name: String = chars[s..i].iter().map(|(_, c)| *c).collect();
            if at {
                Tok::Partial(name)
            } else {
                Tok::Ident(name)
            }
        } else if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[s..i].iter().map(|(_, c)| *c).collect();
            Tok::Int(digits.parse().expect("ascii digits"))
        } else {
            i += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '<' => Tok::Lt,
                '>' => Tok::Gt,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '=' => Tok::Eq,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '*' => {
                    if i < chars.len() && chars[i].1 == '*' {
                        i += 1;
                        Tok::StarStar
                    } else {
                        Tok::Star
                    }
                }
                other => {
                    return Err(DslError::Lex {
                        pos,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        };
        col += i - start_i;
        out.push(Token {
            tok,
            pos,
            start: byte_at(start_i),
            end: byte_at(i),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
        start: src.len(),
        end: src.len(),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_kinds() {
        let toks = lex("form a2 w = dx^@y;\n  x**2 # note\n3/4").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[4], Tok::Ident("dx".into()));
        assert_eq!(kinds[6], Tok::Partial("y".into()));
        assert_eq!(toks[8].pos, Pos { line: 2, col: 3 });
        assert_eq!(kinds[9], Tok::StarStar);
        assert_eq!(toks[11].pos, Pos { line: 3, col: 1 });
        assert_eq!(*kinds.last().unwrap(), Tok::Eof);
    }

    #[test]
    fn stray_character() {
        let err = lex("x $ y").unwrap_err();
        assert_eq!(err.pos(), Some(Pos { line: 1, col: 3 }));
    }
}
