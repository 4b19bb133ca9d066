use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use super::RawError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Ident(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Comma,
    Arrow,
    Eof,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Str(s) => format!("string \"{s}\""),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Arrow => "`->`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub range: Range<usize>,
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Splits `source` into tokens. Bad input is reported and skipped so that the
/// parser still sees the rest of the file.
pub(crate) fn lex(source: &str) -> (Vec<Token>, Vec<RawError>) {
    let mut tokens = Vec::new();
    let mut errors = Vec::new();
    let mut chars = source.char_indices().peekable();

    while let Some(&(start, c)) = chars.peek() {
        let single = |kind| Some((kind, start + c.len_utf8()));
        let tok = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '/' if source[start..].starts_with("//") => {
                while let Some(&(_, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
                continue;
            }
            '/' if source[start..].starts_with("/*") => {
                match source[start + 2..].find("*/") {
                    Some(end) => {
                        let stop = start + 2 + end + 2;
                        while chars.peek().is_some_and(|&(i, _)| i < stop) {
                            chars.next();
                        }
                    }
                    None => {
                        errors.push(RawError::new(
                            start..start + 2,
                            "unterminated block comment",
                        ));
                        while chars.next().is_some() {}
                    }
                }
                continue;
            }
            '{' => single(TokenKind::LBrace),
            '}' => single(TokenKind::RBrace),
            '(' => single(TokenKind::LParen),
            ')' => single(TokenKind::RParen),
            ':' => single(TokenKind::Colon),
            ',' => single(TokenKind::Comma),
            '-' if source[start..].starts_with("->") => Some((TokenKind::Arrow, start + 2)),
            '"' => {
                chars.next();
                lex_string(source, start, &mut chars, &mut errors)
            }
            c if is_ident_char(c) => {
                let mut end = start;
                while let Some(&(i, c)) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    end = i + c.len_utf8();
                    chars.next();
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(source[start..end].into()),
                    range: start..end,
                });
                continue;
            }
            other => {
                chars.next();
                errors.push(RawError::new(
                    start..start + other.len_utf8(),
                    format!("unexpected character `{}`", other.escape_debug()),
                ));
                continue;
            }
        };
        if let Some((kind, end)) = tok {
            while chars.peek().is_some_and(|&(i, _)| i < end) {
                chars.next();
            }
            tokens.push(Token {
                kind,
                range: start..end,
            });
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        range: source.len()..source.len(),
    });
    (tokens, errors)
}

fn lex_string(
    source: &str,
    start: usize,
    chars: &mut core::iter::Peekable<core::str::CharIndices<'_>>,
    errors: &mut Vec<RawError>,
) -> Option<(TokenKind, usize)> {
    let mut text = String::new();
    while let Some((i, c)) = chars.next() {
        match c {
            '"' => return Some((TokenKind::Str(text), i + 1)),
            '\n' => break,
            '\\' => match chars.next() {
                Some((_, '"')) => text.push('"'),
                Some((_, '\\')) => text.push('\\'),
                Some((_, 'n')) => text.push('\n'),
                Some((_, 't')) => text.push('\t'),
                Some((_, 'r')) => text.push('\r'),
                Some((j, other)) => {
                    errors.push(RawError::new(
                        i..j + other.len_utf8(),
                        format!("unknown escape `\\{}`", other.escape_debug()),
                    ));
                }
                None => break,
            },
            c => text.push(c),
        }
    }
    let line_end = source[start..]
        .find('\n')
        .map_or(source.len(), |n| start + n);
    errors.push(RawError::new(
        start..line_end.max(start + 1),
        "unterminated string",
    ));
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn kinds(src: &str) -> Vec<TokenKind> {
        let (toks, errs) = lex(src);
        assert!(errs.is_empty(), "{errs:?}");
        toks.into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn punctuation_and_names() {
        use TokenKind::*;
        assert_eq!(
            kinds("relationship commente: Rapport -> Article"),
            vec![
                Ident("relationship".into()),
                Ident("commente".into()),
                Colon,
                Ident("Rapport".into()),
                Arrow,
                Ident("Article".into()),
                Eof
            ]
        );
    }

    #[test]
    fn unicode_identifiers_and_strings() {
        use TokenKind::*;
        assert_eq!(
            kinds(r#"goal Déposer "Gérer les \"soumissions\"""#),
            vec![
                Ident("goal".into()),
                Ident("Déposer".into()),
                Str("Gérer les \"soumissions\"".into()),
                Eof
            ]
        );
    }

    #[test]
    fn comments_are_skipped() {
        use TokenKind::*;
        assert_eq!(
            kinds("a // line\n/* block\n still */ b"),
            vec![Ident("a".into()), Ident("b".into()), Eof]
        );
    }

    #[test]
    fn bad_character_is_reported_and_skipped() {
        let (toks, errs) = lex("a @ b");
        assert_eq!(toks.len(), 3);
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].range, 2..3);
    }

    #[test]
    fn unterminated_string_and_comment() {
        let (_, errs) = lex("\"abc\nx /* y");
        assert_eq!(errs.len(), 2);
        assert_eq!(errs[0].message, "unterminated string");
        assert_eq!(errs[1].message, "unterminated block comment");
    }
}
