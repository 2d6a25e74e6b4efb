use super::{ParseError, ParseErrorKind, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Initially,
    Causes,
    If,
    Executable,
    Determines,
    Case,
    Endcase,
    Knows,
    Kwhether,
    After,
    Kw,
    Tilde,
    Comma,
    Dot,
    Semi,
    Arrow,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Ident(_) => "identifier",
            Tok::Initially => "initially",
            Tok::Causes => "causes",
            Tok::If => "if",
            Tok::Executable => "executable",
            Tok::Determines => "determines",
            Tok::Case => "case",
            Tok::Endcase => "endcase",
            Tok::Knows => "knows",
            Tok::Kwhether => "kwhether",
            Tok::After => "after",
            Tok::Kw => "KW",
            Tok::Tilde => "~",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Semi => ";",
            Tok::Arrow => "->",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Eof => "end of input",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "initially" => Tok::Initially,
        "causes" => Tok::Causes,
        "if" => Tok::If,
        "executable" => Tok::Executable,
        "determines" => Tok::Determines,
        "case" => Tok::Case,
        "endcase" => Tok::Endcase,
        "knows" => Tok::Knows,
        "kwhether" => Tok::Kwhether,
        "after" => Tok::After,
        "KW" => Tok::Kw,
        _ => return None,
    })
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let start = SourceSpan {
            line,
            column: col,
            length: 1,
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
                col += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[begin..i].iter().collect();
            let span = SourceSpan {
                length: i - begin,
                ..start
            };
            col += i - begin;
            let tok = match keyword(&word) {
                Some(k) => k,
                None if crate::literal::Symbol::is_valid_name(&word) => Tok::Ident(word),
                None => {
                    return Err(ParseError::new(ParseErrorKind::BadIdentifier(word), span));
                }
            };
            out.push(Token { tok, span });
            continue;
        }
        let (tok, len) = match c {
            '~' => (Tok::Tilde, 1),
            ',' => (Tok::Comma, 1),
            '.' => (Tok::Dot, 1),
            ';' => (Tok::Semi, 1),
            '[' => (Tok::LBracket, 1),
            ']' => (Tok::RBracket, 1),
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            '-' if chars.get(i + 1) == Some(&'>') => (Tok::Arrow, 2),
            other => {
                return Err(ParseError::new(
                    ParseErrorKind::UnexpectedChar(other),
                    start,
                ));
            }
        };
        out.push(Token {
            tok,
            span: SourceSpan {
                length: len,
                ..start
            },
        });
        i += len;
        col += len;
    }

    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan {
            line,
            column: col,
            length: 0,
        },
    });
    Ok(out)
}
