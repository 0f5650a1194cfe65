//! Parser for the textual expression syntax: `!` for negation, `&` for
//! conjunction, `|` for disjunction, precedence `!` > `&` > `|`, with
//! parentheses. `T`, `F` and `U` are reserved constant names.
//!
//! `parse_expression(print(p))` is structurally identical to `p` whenever `p`
//! is in canonical (simplified) form, because printing only emits parentheses
//! the grammar requires and n-ary connectives round-trip through the
//! flattening parse below.

use crate::error::{Error, Result};
use crate::tri::{Expression, TriValue};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>> {
    let mut tokens = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                chars.next();
            }
            '!' => {
                chars.next();
                tokens.push((pos, Token::Not));
            }
            '&' => {
                chars.next();
                tokens.push((pos, Token::And));
            }
            '|' => {
                chars.next();
                tokens.push((pos, Token::Or));
            }
            '(' => {
                chars.next();
                tokens.push((pos, Token::LParen));
            }
            ')' => {
                chars.next();
                tokens.push((pos, Token::RParen));
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut name = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push((pos, Token::Ident(name)));
            }
            other => {
                return Err(parse_error(pos, format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(tokens)
}

fn parse_error(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        message: format!("column {}: {}", column + 1, message.into()),
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(c, _)| *c)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn disjunction(&mut self) -> Result<Expression> {
        let mut children = vec![self.conjunction()?];
        while self.peek() == Some(&Token::Or) {
            self.bump();
            children.push(self.conjunction()?);
        }
        Ok(Expression::disj(children))
    }

    fn conjunction(&mut self) -> Result<Expression> {
        let mut children = vec![self.atom()?];
        while self.peek() == Some(&Token::And) {
            self.bump();
            children.push(self.atom()?);
        }
        Ok(Expression::conj(children))
    }

    fn atom(&mut self) -> Result<Expression> {
        let column = self.column();
        match self.bump() {
            Some(Token::Not) => Ok(Expression::neg(self.atom()?)),
            Some(Token::LParen) => {
                let inner = self.disjunction()?;
                let column = self.column();
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(parse_error(column, "expected `)`")),
                }
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "T" => Ok(Expression::Constant(TriValue::True)),
                "F" => Ok(Expression::Constant(TriValue::False)),
                "U" => Ok(Expression::Constant(TriValue::Undec)),
                _ if crate::tri::is_identifier(&name) => Ok(Expression::Variable(name)),
                _ => Err(parse_error(column, format!("invalid identifier `{name}`"))),
            },
            Some(t) => Err(parse_error(column, format!("unexpected token {t:?}"))),
            None => Err(parse_error(column, "unexpected end of input")),
        }
    }
}

pub fn parse_expression(input: &str) -> Result<Expression> {
    let tokens = tokenize(input)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: input.len(),
    };
    let expr = parser.disjunction()?;
    if parser.pos != parser.tokens.len() {
        return Err(parse_error(parser.column(), "trailing input"));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::parse_expression;
    use crate::tri::{simplify, Expression};

    #[test]
    fn parses_precedence() {
        let e = parse_expression("!a & b | c").unwrap();
        assert_eq!(e.to_string(), "!a & b | c");
        let e = parse_expression("!(a & b | c)").unwrap();
        assert_eq!(e.to_string(), "!(a & b | c)");
    }

    #[test]
    fn parses_nary_flat() {
        let e = parse_expression("a & b & c").unwrap();
        assert_eq!(
            e,
            Expression::Conjunction(vec![
                Expression::var("a"),
                Expression::var("b"),
                Expression::var("c")
            ])
        );
    }

    #[test]
    fn constants_are_reserved() {
        let e = parse_expression("T & U | F").unwrap();
        assert_eq!(e.to_string(), "T & U | F");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_expression("a &").is_err());
        assert!(parse_expression("(a").is_err());
        assert!(parse_expression("a ^ b").is_err());
        assert!(parse_expression("a b").is_err());
        assert!(parse_expression("").is_err());
    }

    #[test]
    fn round_trip_on_canonical_forms() {
        for s in [
            "a",
            "!a",
            "!(a | b)",
            "U & a",
            "!a & b | c & !(d | e)",
            "a & b & c | !b",
        ] {
            let e = simplify(&parse_expression(s).unwrap());
            let reparsed = parse_expression(&e.to_string()).unwrap();
            assert_eq!(reparsed, e, "round trip failed for {s}");
        }
    }
}
