//! The textual diagram-expression language.
//!
//! Grammar:
//!
//! ```text
//! expr  := "seq" "=" word ";" sum
//! sum   := term (("+" | "-") term)*
//! term  := [integer] token*
//! token := ("x" | "s") index ["^" exponent]
//! ```
//!
//! `word` is a string over {1, 2}; `x<k>` puts a dot on the strand at
//! position k (1-based) and `s<k>` crosses strands k, k+1. Tokens are
//! applied bottom to top, reading left to right. Whitespace is free.

use std::fmt;

use strandalg::diagram::{Seq, Token};
use strandalg::rewrite::GeneratorWord;

/// Location of a parse failure, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax { message: String, span: Span },
    /// Well-formed text that names an invalid diagram, e.g. a dot on a
    /// fermionic strand; reported by term and token index (0-based).
    Semantic {
        message: String,
        term: usize,
        token: usize,
    },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { message, span } => {
                write!(f, "syntax error at {}:{}: {}", span.line, span.col, message)
            }
            ParseError::Semantic {
                message,
                term,
                token,
            } => write!(
                f,
                "invalid diagram in term {} at token {}: {}",
                term + 1,
                token + 1,
                message
            ),
        }
    }
}

/// A parsed expression: a source sequence and an integer combination of
/// generator words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expression {
    pub source: Seq,
    pub terms: Vec<(i64, Vec<Token>)>,
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seq={};", self.source)?;
        if self.terms.is_empty() {
            return write!(f, " 0");
        }
        for (i, (coeff, tokens)) in self.terms.iter().enumerate() {
            let (sign, mag) = if *coeff < 0 { ("-", -coeff) } else { ("+", *coeff) };
            if i == 0 {
                if sign == "-" {
                    write!(f, " -")?;
                }
            } else {
                write!(f, " {}", sign)?;
            }
            if mag != 1 || tokens.is_empty() {
                write!(f, " {}", mag)?;
            }
            for t in tokens {
                match t {
                    Token::Dot { position } => write!(f, " x{}", position + 1)?,
                    Token::Cross { position } => write!(f, " s{}", position + 1)?,
                }
            }
        }
        Ok(())
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn span(&self) -> Span {
        Span {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            got => Err(ParseError::Syntax {
                message: match got {
                    Some(c) => format!("expected '{want}', found '{c}'"),
                    None => format!("expected '{want}', found end of input"),
                },
                span: self.span(),
            }),
        }
    }

    fn number(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.span();
        let mut digits = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        if digits.is_empty() {
            return Err(ParseError::Syntax {
                message: "expected a number".to_string(),
                span: start,
            });
        }
        digits.parse().map_err(|e| ParseError::Syntax {
            message: format!("{e}"),
            span: start,
        })
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        self.skip_ws();
        for want in word.chars() {
            match self.peek() {
                Some(c) if c == want => {
                    self.bump();
                }
                _ => {
                    return Err(ParseError::Syntax {
                        message: format!("expected '{word}'"),
                        span: self.span(),
                    })
                }
            }
        }
        Ok(())
    }
}

/// Parses and validates an expression.
pub fn parse(text: &str) -> Result<Expression, ParseError> {
    let mut cur = Cursor::new(text);
    cur.keyword("seq")?;
    cur.expect('=')?;
    cur.skip_ws();
    let mut seq_str = String::new();
    while matches!(cur.peek(), Some('1') | Some('2')) {
        seq_str.push(cur.bump().unwrap());
    }
    let source: Seq = seq_str.parse().map_err(|e: String| ParseError::Syntax {
        message: e,
        span: cur.span(),
    })?;
    cur.expect(';')?;
    let mut terms: Vec<(i64, Vec<Token>)> = Vec::new();
    let mut sign = 1i64;
    let mut first = true;
    loop {
        cur.skip_ws();
        match cur.peek() {
            None => {
                if first {
                    return Err(ParseError::Syntax {
                        message: "expected at least one term".to_string(),
                        span: cur.span(),
                    });
                }
                break;
            }
            Some('+') => {
                if first {
                    return Err(ParseError::Syntax {
                        message: "unexpected '+' before the first term".to_string(),
                        span: cur.span(),
                    });
                }
                cur.bump();
                sign = 1;
            }
            Some('-') => {
                cur.bump();
                sign = -1;
            }
            Some(_) if first => {}
            Some(c) => {
                return Err(ParseError::Syntax {
                    message: format!("expected '+' or '-', found '{c}'"),
                    span: cur.span(),
                })
            }
        }
        first = false;
        // optional integer coefficient
        cur.skip_ws();
        let mut coeff = sign;
        if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
            coeff = sign * cur.number()?;
            // optional '*' between coefficient and tokens
            cur.skip_ws();
            if cur.peek() == Some('*') {
                cur.bump();
            }
        }
        // token list
        let mut tokens = Vec::new();
        loop {
            cur.skip_ws();
            let kind = match cur.peek() {
                Some('x') => 'x',
                Some('s') => 's',
                _ => break,
            };
            cur.bump();
            let index = cur.number()?;
            if index < 1 {
                return Err(ParseError::Syntax {
                    message: "positions are 1-based".to_string(),
                    span: cur.span(),
                });
            }
            let mut exponent = 1i64;
            cur.skip_ws();
            if cur.peek() == Some('^') {
                cur.bump();
                exponent = cur.number()?;
            }
            let token = match kind {
                'x' => Token::Dot {
                    position: index as usize - 1,
                },
                _ => Token::Cross {
                    position: index as usize - 1,
                },
            };
            for _ in 0..exponent {
                tokens.push(token);
            }
        }
        terms.push((coeff, tokens));
    }
    // semantic validation: every term must be a well-formed generator word
    for (term_idx, (_, tokens)) in terms.iter().enumerate() {
        let mut seq = source.clone();
        for (tok_idx, &t) in tokens.iter().enumerate() {
            if let Err(e) = strandalg::diagram::generator_bidegree(&seq, t) {
                return Err(ParseError::Semantic {
                    message: e.to_string(),
                    term: term_idx,
                    token: tok_idx,
                });
            }
            if let Token::Cross { position } = t {
                seq = seq.swap(position);
            }
        }
    }
    Ok(Expression { source, terms })
}

impl Expression {
    pub fn words(&self) -> Vec<(i64, GeneratorWord)> {
        self.terms
            .iter()
            .map(|(c, tokens)| {
                (
                    *c,
                    GeneratorWord::new(self.source.clone(), tokens.clone())
                        .expect("validated at parse time"),
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_expressions() {
        let e = parse("seq=22; s1 s1").unwrap();
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.terms[0].0, 1);
        assert_eq!(e.terms[0].1.len(), 2);

        let e = parse("seq=212; s2 s1 s2 - s1 s2 s1").unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.terms[1].0, -1);

        let e = parse("seq=12; 3 x2^2 s1").unwrap();
        assert_eq!(e.terms[0].0, 3);
        assert_eq!(e.terms[0].1.len(), 3);
    }

    #[test]
    fn spans_reported() {
        let err = parse("seq=22 s1").unwrap_err();
        match err {
            ParseError::Syntax { span, .. } => {
                assert_eq!(span.line, 1);
                assert_eq!(span.col, 8);
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = parse("seq=13; s1").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn semantic_errors_carry_token_index() {
        let err = parse("seq=12; s1 x2").unwrap_err();
        match err {
            ParseError::Semantic { term, token, .. } => {
                assert_eq!(term, 0);
                assert_eq!(token, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn print_parse_round_trip() {
        for text in [
            "seq=22; s1 s1",
            "seq=212; s2 s1 s2 - s1 s2 s1",
            "seq=12; 3 x2^2 s1 + 2",
            "seq=11; -s1",
        ] {
            let e = parse(text).unwrap();
            let printed = e.to_string();
            let back = parse(&printed).unwrap();
            assert_eq!(back, e, "printed form: {printed}");
        }
    }
}
