//! Tokenizer for the Solidity subset: identifiers, number and string
//! literals, and single-character punctuation. Whitespace and both comment
//! forms are dropped; string contents never surface as identifiers.

use super::ExtractError;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    /// Identifier or keyword; the parser decides which contextually.
    Ident(String),
    /// Number literal, lexeme kept verbatim (pragma echo only).
    Number(String),
    /// String literal; contents are deliberately discarded.
    Str,
    Punct(char),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: u32,
}

impl Token {
    pub fn ident(&self) -> Option<&str> {
        match &self.kind {
            TokenKind::Ident(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(&self.kind, TokenKind::Ident(i) if i == s)
    }

    pub fn is_punct(&self, c: char) -> bool {
        matches!(&self.kind, TokenKind::Punct(p) if *p == c)
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '$'
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ExtractError> {
    let mut tokens = Vec::new();
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0usize;
    let mut line: u32 = 1;

    while i < bytes.len() {
        let c = bytes[i];
        if c == '\n' {
            line += 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        // line comment
        if c == '/' && i + 1 < bytes.len() && bytes[i + 1] == '/' {
            while i < bytes.len() && bytes[i] != '\n' {
                i += 1;
            }
            continue;
        }
        // block comment
        if c == '/' && i + 1 < bytes.len() && bytes[i + 1] == '*' {
            let start_line = line;
            i += 2;
            loop {
                if i + 1 >= bytes.len() {
                    return Err(ExtractError::Lex {
                        line: start_line,
                        message: "unterminated block comment".into(),
                    });
                }
                if bytes[i] == '\n' {
                    line += 1;
                }
                if bytes[i] == '*' && bytes[i + 1] == '/' {
                    i += 2;
                    break;
                }
                i += 1;
            }
            continue;
        }
        // string literal (double or single quoted); Solidity strings are
        // single-line, so a raw newline means the literal never closed
        if c == '"' || c == '\'' {
            let quote = c;
            let start_line = line;
            i += 1;
            loop {
                if i >= bytes.len() || bytes[i] == '\n' {
                    return Err(ExtractError::Lex {
                        line: start_line,
                        message: "unterminated string literal".into(),
                    });
                }
                if bytes[i] == '\\' && i + 1 < bytes.len() {
                    i += 2;
                    continue;
                }
                if bytes[i] == quote {
                    i += 1;
                    break;
                }
                i += 1;
            }
            tokens.push(Token { kind: TokenKind::Str, line: start_line });
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < bytes.len() && is_ident_continue(bytes[i]) {
                i += 1;
            }
            let ident: String = bytes[start..i].iter().collect();
            tokens.push(Token { kind: TokenKind::Ident(ident), line });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            // decimal, hex, underscores, exponent; lexeme recorded opaquely
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_' || bytes[i] == '.')
            {
                // avoid swallowing member access after a number (`1.f()` does
                // not occur, but `0.8.0` in pragmas should stay one token)
                if bytes[i] == '.'
                    && (i + 1 >= bytes.len() || !bytes[i + 1].is_ascii_digit())
                {
                    break;
                }
                i += 1;
            }
            let lexeme: String = bytes[start..i].iter().collect();
            tokens.push(Token { kind: TokenKind::Number(lexeme), line });
            continue;
        }
        tokens.push(Token { kind: TokenKind::Punct(c), line });
        i += 1;
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idents(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().filter_map(|t| t.ident()).collect()
    }

    #[test]
    fn comments_are_elided() {
        let toks = tokenize("contract A { // hi\n }").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| &t.kind).collect();
        assert_eq!(
            kinds,
            vec![
                &TokenKind::Ident("contract".into()),
                &TokenKind::Ident("A".into()),
                &TokenKind::Punct('{'),
                &TokenKind::Punct('}'),
            ]
        );
    }

    #[test]
    fn block_comment_hides_identifiers() {
        let toks = tokenize("uint x = 1; /* contract B */").unwrap();
        assert!(!idents(&toks).contains(&"B"));
    }

    #[test]
    fn string_contents_never_become_identifiers() {
        let toks = tokenize("string s = \"Auction.bid()\";").unwrap();
        let ids = idents(&toks);
        assert_eq!(ids, vec!["string", "s"]);
        assert_eq!(toks.iter().filter(|t| t.kind == TokenKind::Str).count(), 1);
        // no parenthesis tokens leaked out of the literal
        assert!(!toks.iter().any(|t| t.is_punct('(')));
    }

    #[test]
    fn escaped_quote_stays_inside_string() {
        let toks = tokenize(r#"x = "a\"b";"#).unwrap();
        assert_eq!(toks.iter().filter(|t| t.kind == TokenKind::Str).count(), 1);
    }

    #[test]
    fn unterminated_block_comment_reports_line() {
        let err = tokenize("uint x;\n/* oops").unwrap_err();
        match err {
            ExtractError::Lex { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unterminated_string_reports_line() {
        let err = tokenize("s = \"abc").unwrap_err();
        match err {
            ExtractError::Lex { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn pragma_version_number_stays_single_token() {
        let toks = tokenize("pragma solidity ^0.8.0;").unwrap();
        assert!(toks
            .iter()
            .any(|t| t.kind == TokenKind::Number("0.8.0".into())));
    }
}
