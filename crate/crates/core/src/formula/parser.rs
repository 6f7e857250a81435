//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := disj (("->" | "<->") formula)?
//! disj    := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := ("~" | "!") unary | atom | "T" | "F" | "(" formula ")"
//! ```
//!
//! The unicode connectives `¬ ∧ ∨ → ↔ ⊤ ⊥` are accepted as aliases.

use super::{Formula, FormulaError, Signature};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Top,
    Bottom,
    Ident(String),
}

pub(crate) fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') && s != "T" && s != "F"
}

fn syntax(column: usize, message: impl Into<String>) -> FormulaError {
    FormulaError::Syntax {
        column,
        message: message.into(),
    }
}

/// Tokens paired with their 1-based column.
fn lex(text: &str) -> Result<Vec<(Token, usize)>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let (tok, width) = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' | '!' | '¬' => (Token::Not, 1),
            '&' | '∧' => (Token::And, 1),
            '|' | '∨' => (Token::Or, 1),
            '→' => (Token::Implies, 1),
            '↔' => (Token::Iff, 1),
            '⊤' => (Token::Top, 1),
            '⊥' => (Token::Bottom, 1),
            '(' => (Token::LParen, 1),
            ')' => (Token::RParen, 1),
            '-' if chars.get(i + 1) == Some(&'>') => (Token::Implies, 2),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                (Token::Iff, 3)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                let mut end = i + 1;
                while end < chars.len()
                    && (chars[end].is_ascii_alphanumeric()
                        || chars[end] == '_'
                        || chars[end] == '\'')
                {
                    end += 1;
                }
                let word: String = chars[start..end].iter().collect();
                let tok = match word.as_str() {
                    "T" => Token::Top,
                    "F" => Token::Bottom,
                    _ => Token::Ident(word),
                };
                (tok, end - start)
            }
            other => return Err(syntax(col, format!("unexpected character `{other}`"))),
        };
        out.push((tok, col));
        i += width;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or(self.end_column, |(_, c)| *c)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.disjunction()?;
        match self.peek() {
            Some(Token::Implies) => {
                self.bump();
                Ok(Formula::implies(lhs, self.formula()?))
            }
            Some(Token::Iff) => {
                self.bump();
                Ok(Formula::iff(lhs, self.formula()?))
            }
            _ => Ok(lhs),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Token::Or) {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        let col = self.column();
        match self.bump() {
            Some(Token::Not) => Ok(Formula::not(self.unary()?)),
            Some(Token::Top) => Ok(Formula::Top),
            Some(Token::Bottom) => Ok(Formula::Bottom),
            Some(Token::Ident(name)) => Ok(Formula::Atom(name)),
            Some(Token::LParen) => {
                let inner = self.formula()?;
                let close = self.column();
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(syntax(close, "expected `)`")),
                }
            }
            Some(tok) => Err(syntax(col, format!("unexpected {}", describe(&tok)))),
            None => Err(syntax(col, "unexpected end of input")),
        }
    }
}

fn describe(tok: &Token) -> &'static str {
    match tok {
        Token::Not => "`~`",
        Token::And => "`&`",
        Token::Or => "`|`",
        Token::Implies => "`->`",
        Token::Iff => "`<->`",
        Token::LParen => "`(`",
        Token::RParen => "`)`",
        Token::Top | Token::Bottom | Token::Ident(_) => "operand",
    }
}

/// Parses `text` and checks that every atom is declared in `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula, FormulaError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end_column: text.chars().count() + 1,
    };
    let f = p.formula()?;
    if p.pos < p.tokens.len() {
        let col = p.column();
        let tok = p.peek().cloned().expect("in bounds");
        return Err(syntax(
            col,
            format!("unexpected {} after formula", describe(&tok)),
        ));
    }
    sig.check(&f)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new(["p", "q"]).unwrap()
    }

    fn atom(a: &str) -> Formula {
        Formula::atom(a)
    }

    #[test]
    fn grammar_examples() {
        let s = sig();
        assert_eq!(
            parse("p & ~q", &s).unwrap(),
            Formula::and(atom("p"), Formula::not(atom("q")))
        );
        assert_eq!(
            parse("p | !p", &s).unwrap(),
            Formula::or(atom("p"), Formula::not(atom("p")))
        );
        assert_eq!(
            parse("p -> (q <-> p)", &s).unwrap(),
            Formula::implies(atom("p"), Formula::iff(atom("q"), atom("p")))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let s = sig();
        assert_eq!(
            parse("~p & q | p", &s).unwrap(),
            Formula::or(Formula::and(Formula::not(atom("p")), atom("q")), atom("p"))
        );
        assert_eq!(
            parse("p -> q -> p", &s).unwrap(),
            Formula::implies(atom("p"), Formula::implies(atom("q"), atom("p")))
        );
        assert_eq!(
            parse("p & q & p", &s).unwrap(),
            Formula::and(Formula::and(atom("p"), atom("q")), atom("p"))
        );
        assert_eq!(
            parse("T | F", &s).unwrap(),
            Formula::or(Formula::Top, Formula::Bottom)
        );
        assert_eq!(parse("¬p ∧ ⊤", &s).unwrap(), parse("~p & T", &s).unwrap());
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let s = sig();
        assert_eq!(
            parse("p & ", &s),
            Err(FormulaError::Syntax {
                column: 5,
                message: "unexpected end of input".into()
            })
        );
        assert!(matches!(
            parse("(p | q", &s),
            Err(FormulaError::Syntax { column: 7, .. })
        ));
        assert!(matches!(
            parse("p q", &s),
            Err(FormulaError::Syntax { column: 3, .. })
        ));
        assert!(matches!(
            parse("p $ q", &s),
            Err(FormulaError::Syntax { column: 3, .. })
        ));
        assert!(matches!(
            parse("", &s),
            Err(FormulaError::Syntax { column: 1, .. })
        ));
    }

    #[test]
    fn unknown_atom_is_named() {
        assert_eq!(
            parse("p & zeta", &sig()),
            Err(FormulaError::UnknownAtom("zeta".into()))
        );
    }
}
