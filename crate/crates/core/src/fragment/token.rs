//! Tokenizer for the index-annotated discourse notation.
//!
//! A token is a word with an optional `_n` subscript and an optional `*`.
//! `word_*` is the center form of a proform and gets index 0. Connectives
//! may be written in brackets (`[if]`, `[even if]`), and a line may end
//! with a full stop.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub index: Option<u32>,
    pub star: bool,
    pub bracketed: bool,
    /// Byte offset of the token in its line.
    pub offset: usize,
    /// Ordinal of the token in its utterance, from 0.
    pub position: usize,
}

impl Token {
    pub fn word(surface: &str) -> Token {
        Token {
            surface: surface.to_string(),
            index: None,
            star: false,
            bracketed: false,
            offset: 0,
            position: 0,
        }
    }

    pub fn indexed(surface: &str, index: u32, star: bool) -> Token {
        Token {
            index: Some(index),
            star,
            ..Token::word(surface)
        }
    }

    /// `he_*`: a proform pointing at the center.
    pub fn is_center_form(&self) -> bool {
        self.star && self.index == Some(0)
    }

    pub fn lower(&self) -> String {
        self.surface.to_lowercase()
    }

    /// The token rewritten with a different annotation, as used when
    /// enumerating readings.
    pub fn reannotated(&self, index: Option<u32>, star: bool) -> Token {
        Token {
            index,
            star,
            ..self.clone()
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bracketed {
            return write!(f, "[{}]", self.surface);
        }
        f.write_str(&self.surface)?;
        match (self.index, self.star) {
            (Some(0), true) => f.write_str("_*"),
            (Some(n), true) => write!(f, "_{n}*"),
            (Some(n), false) => write!(f, "_{n}"),
            (None, true) => f.write_str("*"),
            (None, false) => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("lexical error at offset {position}: {message}")]
pub struct LexError {
    pub position: usize,
    pub message: String,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '\'' || c == '-'
}

pub fn tokenize(line: &str) -> Result<Vec<Token>, LexError> {
    let bytes = line.as_bytes();
    let err = |position: usize, message: &str| LexError {
        position,
        message: message.to_string(),
    };
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c == '[' {
            let close = line[i..]
                .find(']')
                .ok_or_else(|| err(start, "unclosed `[`"))?;
            let inner: Vec<&str> = line[i + 1..i + close].split_whitespace().collect();
            if inner.is_empty() || !inner.iter().all(|w| w.chars().all(is_word_char)) {
                return Err(err(start, "bracketed connective must contain words"));
            }
            let mut tok = Token::word(&inner.join(" "));
            tok.bracketed = true;
            tok.offset = start;
            tokens.push(tok);
            i += close + 1;
            continue;
        }
        if c == '.' {
            if line[i + 1..].trim().is_empty() {
                break;
            }
            return Err(err(start, "`.` may only end the utterance"));
        }
        if !c.is_ascii_alphabetic() {
            return Err(err(
                start,
                &format!(
                    "unexpected character `{}`",
                    line[i..].chars().next().unwrap_or(c)
                ),
            ));
        }
        while i < bytes.len() && is_word_char(bytes[i] as char) {
            i += 1;
        }
        let mut tok = Token::word(&line[start..i]);
        tok.offset = start;
        if i < bytes.len() && bytes[i] == b'_' {
            i += 1;
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
                tok.index = Some(0);
                tok.star = true;
            } else {
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if digits_start == i {
                    return Err(err(digits_start, "dangling subscript"));
                }
                let n: u32 = line[digits_start..i]
                    .parse()
                    .map_err(|_| err(digits_start, "subscript out of range"))?;
                if n == 0 {
                    return Err(err(digits_start, "index 0 is the center; write `_*`"));
                }
                tok.index = Some(n);
            }
        }
        if i < bytes.len() && bytes[i] == b'*' {
            if tok.star {
                return Err(err(i, "doubled star"));
            }
            tok.star = true;
            i += 1;
        }
        if i < bytes.len()
            && !(bytes[i] as char).is_ascii_whitespace()
            && !matches!(bytes[i], b'.' | b'[')
        {
            return Err(err(i, "malformed token"));
        }
        tokens.push(tok);
    }
    for (k, t) in tokens.iter_mut().enumerate() {
        t.position = k;
    }
    Ok(tokens)
}

/// Renders tokens back into the notation; `tokenize` inverts it.
pub fn detokenize(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(Token::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}
