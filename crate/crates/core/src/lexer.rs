//! Tokenizer shared by the domain and fact file parsers.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    /// Lowercase-initial identifier or quoted atom.
    Ident(String),
    /// Quoted atom; kept apart so keywords cannot be spelled with quotes.
    Quoted(String),
    /// Uppercase- or underscore-initial variable.
    Var(String),
    Number(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    ColonColon,
    Colon,
    Neck,
    At,
    NotProvable,
    Eq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Quoted(s) => write!(f, "quoted atom '{s}'"),
            Tok::Var(s) => write!(f, "variable `{s}`"),
            Tok::Number(s) => write!(f, "number `{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::ColonColon => f.write_str("`::`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Neck => f.write_str("`:-`"),
            Tok::At => f.write_str("`@`"),
            Tok::NotProvable => f.write_str("`\\+`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::NotEq => f.write_str("`\\=`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Le => f.write_str("`=<`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Ge => f.write_str("`>=`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct LexError {
    pub pos: Pos,
    pub message: String,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let peek = chars.get(i + 1).copied();
        let tok = if c.is_ascii_lowercase() {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                bump!();
            }
            Tok::Ident(s)
        } else if c.is_ascii_uppercase() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                bump!();
            }
            Tok::Var(s)
        } else if c.is_ascii_digit() || (c == '-' && peek.is_some_and(|p| p.is_ascii_digit())) {
            let mut s = String::new();
            s.push(c);
            bump!();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                bump!();
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                s.push('.');
                bump!();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    bump!();
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let save = (i, line, col, s.len());
                let mut t = String::from("e");
                bump!();
                if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                    t.push(chars[i]);
                    bump!();
                }
                let digits_start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    t.push(chars[i]);
                    bump!();
                }
                if i == digits_start {
                    // not an exponent after all
                    i = save.0;
                    line = save.1;
                    col = save.2;
                } else {
                    s.push_str(&t);
                }
            }
            // a letter glued to digits (e.g. `12abc`) is a symbol, not a number
            if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    s.push(chars[i]);
                    bump!();
                }
                Tok::Quoted(s)
            } else {
                Tok::Number(s)
            }
        } else if c == '\'' {
            bump!();
            let mut s = String::new();
            loop {
                if i >= chars.len() {
                    return Err(LexError {
                        pos,
                        message: "unterminated quoted atom".into(),
                    });
                }
                let ch = chars[i];
                if ch == '\\' && i + 1 < chars.len() {
                    bump!();
                    s.push(chars[i]);
                    bump!();
                    continue;
                }
                if ch == '\'' {
                    bump!();
                    break;
                }
                s.push(ch);
                bump!();
            }
            Tok::Quoted(s)
        } else {
            let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let (tok, len) = match two.as_str() {
                ":-" => (Tok::Neck, 2),
                "::" => (Tok::ColonColon, 2),
                "\\+" => (Tok::NotProvable, 2),
                "\\=" => (Tok::NotEq, 2),
                "=<" => (Tok::Le, 2),
                ">=" => (Tok::Ge, 2),
                "!=" => (Tok::NotEq, 2),
                _ => match c {
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    '{' => (Tok::LBrace, 1),
                    '}' => (Tok::RBrace, 1),
                    ',' => (Tok::Comma, 1),
                    '.' => (Tok::Dot, 1),
                    ':' => (Tok::Colon, 1),
                    '@' => (Tok::At, 1),
                    '=' => (Tok::Eq, 1),
                    '<' => (Tok::Lt, 1),
                    '>' => (Tok::Gt, 1),
                    _ => {
                        return Err(LexError {
                            pos,
                            message: format!("unexpected character `{c}`"),
                        })
                    }
                },
            };
            for _ in 0..len {
                bump!();
            }
            tok
        };
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

/// Cursor over a token stream with the helpers both parsers need.
pub struct Cursor {
    toks: Vec<Token>,
    at: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Token>) -> Self {
        Cursor { toks, at: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    pub fn peek_at(&self, n: usize) -> &Tok {
        let idx = (self.at + n).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    pub fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn clause_tokens() {
        let t = kinds("p(X, 3) :- q(X), \\+ r(X), X =< 2.5. % trailing");
        assert_eq!(t[0], Tok::Ident("p".into()));
        assert!(t.contains(&Tok::Neck));
        assert!(t.contains(&Tok::NotProvable));
        assert!(t.contains(&Tok::Le));
        assert!(t.contains(&Tok::Number("2.5".into())));
        assert_eq!(t[t.len() - 2], Tok::Dot);
    }

    #[test]
    fn number_then_clause_dot() {
        let t = kinds("n(3).");
        assert_eq!(t[2], Tok::Number("3".into()));
        assert_eq!(t[4], Tok::Dot);
    }

    #[test]
    fn positions_are_one_based() {
        let toks = tokenize("a.\n  b.").unwrap();
        assert_eq!(toks[2].pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn bad_character() {
        let err = tokenize("a(#)").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 3 });
    }
}
