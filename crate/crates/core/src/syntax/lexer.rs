//! Hand-rolled Java lexer. Comments and whitespace are dropped; literals
//! keep their raw source text (quotes and suffixes included).

use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokKind {
    Ident,
    Keyword,
    IntLit,
    FloatLit,
    CharLit,
    StringLit,
    Punct,
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokKind,
    pub text: String,
    pub start: usize,
    pub end: usize,
}

impl Token {
    pub fn is(&self, text: &str) -> bool {
        self.text == text && self.kind != TokKind::Eof
    }
}

pub const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while", "true", "false", "null",
];

/// Multi-character operators, longest first so maximal munch works.
/// `>` is always lexed alone (except in `>=`): the parser merges adjacent
/// `>` tokens into shift operators, which lets nested generic type
/// arguments close without token splitting.
const PUNCTS: &[&str] = &[
    "<<=", "...", "->", "::", "++", "--", "<<", "<=", ">=", "==", "!=", "&&", "||", "+=", "-=",
    "*=", "/=", "%=", "&=", "|=", "^=", "@", "(", ")", "{", "}", "[", "]", ";", ",", ".", "=",
    ">", "<", "!", "~", "?", ":", "+", "-", "*", "/", "%", "&", "|", "^",
];

fn is_ident_start(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphabetic()
}

fn is_ident_part(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphanumeric()
}

pub struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer { src, bytes: src.as_bytes(), pos: 0 }
    }

    pub fn tokenize(mut self) -> Result<Vec<Token>, SyntaxError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia()?;
            if self.pos >= self.bytes.len() {
                out.push(Token {
                    kind: TokKind::Eof,
                    text: String::new(),
                    start: self.pos,
                    end: self.pos,
                });
                return Ok(out);
            }
            out.push(self.next_token()?);
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_trivia(&mut self) -> Result<(), SyntaxError> {
        loop {
            match self.bytes.get(self.pos) {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'/') if self.bytes.get(self.pos + 1) == Some(&b'/') => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                Some(b'/') if self.bytes.get(self.pos + 1) == Some(&b'*') => {
                    let start = self.pos;
                    self.pos += 2;
                    loop {
                        if self.pos + 1 >= self.bytes.len() {
                            return Err(SyntaxError::syntax(self.src, start, "unterminated block comment"));
                        }
                        if self.bytes[self.pos] == b'*' && self.bytes[self.pos + 1] == b'/' {
                            self.pos += 2;
                            break;
                        }
                        self.pos += 1;
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn next_token(&mut self) -> Result<Token, SyntaxError> {
        let start = self.pos;
        let c = self.peek_char().expect("next_token called at EOF");

        if is_ident_start(c) {
            let mut end = self.pos + c.len_utf8();
            while let Some(next) = self.src[end..].chars().next() {
                if is_ident_part(next) {
                    end += next.len_utf8();
                } else {
                    break;
                }
            }
            let text = &self.src[start..end];
            self.pos = end;
            let kind = if KEYWORDS.contains(&text) { TokKind::Keyword } else { TokKind::Ident };
            return Ok(Token { kind, text: text.to_string(), start, end });
        }

        if c.is_ascii_digit() || (c == '.' && self.bytes.get(self.pos + 1).is_some_and(u8::is_ascii_digit)) {
            return self.lex_number();
        }

        match c {
            '"' => self.lex_string(),
            '\'' => self.lex_char(),
            _ => {
                for punct in PUNCTS {
                    if self.src[self.pos..].starts_with(punct) {
                        self.pos += punct.len();
                        return Ok(Token {
                            kind: TokKind::Punct,
                            text: (*punct).to_string(),
                            start,
                            end: self.pos,
                        });
                    }
                }
                Err(SyntaxError::syntax(self.src, start, format!("unexpected character `{c}`")))
            }
        }
    }

    fn lex_number(&mut self) -> Result<Token, SyntaxError> {
        let start = self.pos;
        let rest = &self.src[self.pos..];
        let mut end = 0usize;
        let bytes = rest.as_bytes();
        let mut is_float = false;

        if rest.starts_with("0x") || rest.starts_with("0X") || rest.starts_with("0b") || rest.starts_with("0B") {
            end = 2;
            while end < bytes.len() && (bytes[end].is_ascii_hexdigit() || bytes[end] == b'_') {
                end += 1;
            }
        } else {
            while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'_') {
                end += 1;
            }
            if end < bytes.len() && bytes[end] == b'.' && bytes.get(end + 1).is_some_and(u8::is_ascii_digit) {
                is_float = true;
                end += 1;
                while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'_') {
                    end += 1;
                }
            } else if end < bytes.len() && bytes[end] == b'.' && bytes.get(end + 1).is_none_or(|b| !is_ident_part(*b as char) && *b != b'.') {
                // trailing-dot float like `1.`
                is_float = true;
                end += 1;
            }
            if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                let mut probe = end + 1;
                if probe < bytes.len() && (bytes[probe] == b'+' || bytes[probe] == b'-') {
                    probe += 1;
                }
                if probe < bytes.len() && bytes[probe].is_ascii_digit() {
                    is_float = true;
                    end = probe;
                    while end < bytes.len() && bytes[end].is_ascii_digit() {
                        end += 1;
                    }
                }
            }
        }
        if end < bytes.len() {
            match bytes[end] {
                b'l' | b'L' => end += 1,
                b'f' | b'F' | b'd' | b'D' => {
                    is_float = true;
                    end += 1;
                }
                _ => {}
            }
        }
        let text = &rest[..end];
        self.pos += end;
        Ok(Token {
            kind: if is_float { TokKind::FloatLit } else { TokKind::IntLit },
            text: text.to_string(),
            start,
            end: self.pos,
        })
    }

    fn lex_string(&mut self) -> Result<Token, SyntaxError> {
        let start = self.pos;
        self.pos += 1;
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'"' => {
                    self.pos += 1;
                    return Ok(Token {
                        kind: TokKind::StringLit,
                        text: self.src[start..self.pos].to_string(),
                        start,
                        end: self.pos,
                    });
                }
                b'\\' => self.pos += 2,
                b'\n' => break,
                _ => {
                    // keep multi-byte chars intact
                    let c = self.src[self.pos..].chars().next().unwrap();
                    self.pos += c.len_utf8();
                }
            }
        }
        Err(SyntaxError::syntax(self.src, start, "unterminated string literal"))
    }

    fn lex_char(&mut self) -> Result<Token, SyntaxError> {
        let start = self.pos;
        self.pos += 1;
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'\'' => {
                    self.pos += 1;
                    return Ok(Token {
                        kind: TokKind::CharLit,
                        text: self.src[start..self.pos].to_string(),
                        start,
                        end: self.pos,
                    });
                }
                b'\\' => self.pos += 2,
                b'\n' => break,
                _ => {
                    let c = self.src[self.pos..].chars().next().unwrap();
                    self.pos += c.len_utf8();
                }
            }
        }
        Err(SyntaxError::syntax(self.src, start, "unterminated character literal"))
    }
}

/// 1-based line and column of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(src.len());
    let mut line = 1;
    let mut col = 1;
    for (i, c) in src.char_indices() {
        if i >= offset {
            break;
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}
