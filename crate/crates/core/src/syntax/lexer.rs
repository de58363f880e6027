use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Number(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Arrow,
    Lt,
    Gt,
    Colon,
    /// `;` or a line break.
    Sep,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn describe(&self) -> String {
        match &self.tok {
            Tok::Ident(s) | Tok::Number(s) => format!("`{s}`"),
            Tok::Sep => "end of statement".into(),
            t => format!("`{}`", symbol(t)),
        }
    }
}

fn symbol(t: &Tok) -> &'static str {
    match t {
        Tok::Plus => "+",
        Tok::Minus => "-",
        Tok::Star => "*",
        Tok::Caret => "^",
        Tok::Slash => "/",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::Arrow => "->",
        Tok::Lt => "<",
        Tok::Gt => ">",
        Tok::Colon => ":",
        _ => "?",
    }
}

/// Splits `text` into tokens. `#` starts a comment running to the end of
/// the line.
pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: l, column: col });
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        match c {
            '\n' | ';' => {
                bump(&mut chars);
                push(&mut out, Tok::Sep);
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    bump(&mut chars);
                }
                push(&mut out, Tok::Number(s));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_' || **d == '\'') {
                    s.push(d);
                    bump(&mut chars);
                }
                push(&mut out, Tok::Ident(s));
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    push(&mut out, Tok::Arrow);
                } else {
                    push(&mut out, Tok::Minus);
                }
            }
            _ => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '<' => Tok::Lt,
                    '>' => Tok::Gt,
                    ':' => Tok::Colon,
                    other => {
                        return Err(Error::Parse { line: l, column: col, message: format!("unexpected character `{other}`") })
                    }
                };
                bump(&mut chars);
                push(&mut out, tok);
            }
        }
    }
    Ok(out)
}
