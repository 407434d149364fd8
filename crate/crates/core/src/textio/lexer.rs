use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum TokenKind {
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Comma,
    /// Maximal run of `[A-Za-z0-9_.+-]`; interpreted by the parser.
    Atom(String),
    Str(String),
    Eof,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::LBracket => "`[`".into(),
            TokenKind::RBracket => "`]`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Atom(a) => format!("`{a}`"),
            TokenKind::Str(s) => format!("string {s:?}"),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

fn is_atom_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '+' | '-')
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    // position of the last character seen, used for the end-of-input span
    let mut last = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        let start = (line, col);
        let mut advance = |ch: char, line: &mut usize, col: &mut usize| {
            last = (*line, *col);
            if ch == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };

        if c.is_whitespace() {
            chars.next();
            advance(c, &mut line, &mut col);
            continue;
        }
        if c == '#' {
            while let Some(&ch) = chars.peek() {
                if ch == '\n' {
                    break;
                }
                chars.next();
                advance(ch, &mut line, &mut col);
            }
            continue;
        }

        let punct = match c {
            '{' => Some(TokenKind::LBrace),
            '}' => Some(TokenKind::RBrace),
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            ':' => Some(TokenKind::Colon),
            ',' => Some(TokenKind::Comma),
            _ => None,
        };
        if let Some(kind) = punct {
            chars.next();
            advance(c, &mut line, &mut col);
            tokens.push(Token {
                kind,
                span: SourceSpan::new(start.0, start.1, 1),
            });
            continue;
        }

        if c == '"' {
            chars.next();
            advance(c, &mut line, &mut col);
            let mut value = String::new();
            let mut closed = false;
            for ch in chars.by_ref() {
                advance(ch, &mut line, &mut col);
                match ch {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\n' => break,
                    _ => value.push(ch),
                }
            }
            if !closed {
                return Err(ParseError::new(
                    SourceSpan::new(start.0, start.1, 1),
                    "unterminated string literal",
                ));
            }
            let length = value.chars().count() + 2;
            tokens.push(Token {
                kind: TokenKind::Str(value),
                span: SourceSpan::new(start.0, start.1, length),
            });
            continue;
        }

        if is_atom_char(c) {
            let mut atom = String::new();
            while let Some(&ch) = chars.peek() {
                if !is_atom_char(ch) {
                    break;
                }
                atom.push(ch);
                chars.next();
                advance(ch, &mut line, &mut col);
            }
            let length = atom.chars().count();
            tokens.push(Token {
                kind: TokenKind::Atom(atom),
                span: SourceSpan::new(start.0, start.1, length),
            });
            continue;
        }

        return Err(ParseError::new(
            SourceSpan::new(start.0, start.1, 1),
            format!("unexpected character {c:?}"),
        ));
    }

    tokens.push(Token {
        kind: TokenKind::Eof,
        span: SourceSpan::new(last.0, last.1, 0),
    });
    Ok(tokens)
}
