use super::ast::{Formula, FormulaAst, Quantifier, Sort};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Neq,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let at = |tok| Token {
                tok,
                line: li + 1,
                column,
            };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(at(Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            let (tok, len) = if rest.starts_with("<->") {
                (Tok::DArrow, 3)
            } else if rest.starts_with("->") {
                (Tok::Arrow, 2)
            } else if rest.starts_with("!=") {
                (Tok::Neq, 2)
            } else {
                match c {
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    ',' => (Tok::Comma, 1),
                    ';' => (Tok::Semi, 1),
                    '=' => (Tok::Eq, 1),
                    '!' => (Tok::Bang, 1),
                    '&' => (Tok::Amp, 1),
                    '|' => (Tok::Pipe, 1),
                    _ => {
                        return Err(Error::Syntax {
                            line: li + 1,
                            column,
                            message: format!("unexpected character `{c}`"),
                        })
                    }
                }
            };
            out.push(at(tok));
            i += len;
        }
    }
    let (line, column) = text
        .lines()
        .enumerate()
        .last()
        .map(|(i, l)| (i + 1, l.chars().count() + 1))
        .unwrap_or((1, 1));
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

const KEYWORDS: &[&str] = &[
    "free", "exists", "forall", "existsd", "foralld", "set", "edge", "edgeset", "true", "false", "E", "I",
];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Set variables currently in scope, innermost last.
    sets: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, off: usize) -> &Tok {
        &self.toks[(self.pos + off).min(self.toks.len() - 1)].tok
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                Ok(name)
            }
            _ => self.error(format!("expected {what}")),
        }
    }

    fn is_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn file(&mut self) -> Result<FormulaAst> {
        let mut free = None;
        while self.is_ident("free") {
            self.bump();
            loop {
                let name = self.ident("a free set variable")?;
                if free.is_some() {
                    return Err(Error::DuplicateFreeVariable(name));
                }
                free = Some(name);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(Tok::Semi, "`;` after the free variable")?;
        }
        if let Some(x) = &free {
            self.sets.push(x.clone());
        }
        let body = self.formula()?;
        if *self.peek() != Tok::End {
            return self.error("unexpected trailing input");
        }
        FormulaAst::new(free.as_deref(), body)
    }

    fn formula(&mut self) -> Result<Formula> {
        if self.at_quantifier() {
            return self.quant();
        }
        self.iff()
    }

    fn at_quantifier(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if matches!(s.as_str(), "exists" | "forall" | "existsd" | "foralld"))
    }

    fn quant(&mut self) -> Result<Formula> {
        let (kind, distinct) = match self.bump() {
            Tok::Ident(s) => match s.as_str() {
                "exists" => (Quantifier::Exists, false),
                "forall" => (Quantifier::Forall, false),
                "existsd" => (Quantifier::Exists, true),
                _ => (Quantifier::Forall, true),
            },
            _ => unreachable!("checked by at_quantifier"),
        };
        let explicit = match self.peek() {
            Tok::Ident(s) if s == "set" => Some(Sort::VertexSet),
            Tok::Ident(s) if s == "edge" => Some(Sort::Edge),
            Tok::Ident(s) if s == "edgeset" => Some(Sort::EdgeSet),
            _ => None,
        };
        if explicit.is_some() {
            self.bump();
        }
        let mut vars = vec![self.ident("a variable name")?];
        while *self.peek() == Tok::Comma {
            self.bump();
            vars.push(self.ident("a variable name")?);
        }
        let upper = vars[0].starts_with(|c: char| c.is_ascii_uppercase());
        let sort = explicit.unwrap_or(if upper { Sort::VertexSet } else { Sort::Vertex });
        let pushed = if sort.is_set() {
            self.sets.extend(vars.iter().cloned());
            vars.len()
        } else {
            0
        };
        // Element variables shadow set variables of the same name.
        let shadowed: Vec<String> = if sort.is_set() {
            Vec::new()
        } else {
            vars.clone()
        };
        let saved = self.sets.clone();
        if !shadowed.is_empty() {
            self.sets.retain(|s| !shadowed.contains(s));
        }
        let body = self.formula();
        if !shadowed.is_empty() {
            self.sets = saved;
        }
        let new_len = self.sets.len() - pushed;
        self.sets.truncate(new_len);
        Ok(Formula::Quant {
            kind,
            distinct,
            sort,
            vars,
            body: Box::new(body?),
        })
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(_) if self.at_quantifier() => self.quant(),
            Tok::Ident(word) => self.atom(word),
            Tok::End => self.error("unexpected end of input"),
            _ => self.error("expected a formula"),
        }
    }

    fn atom(&mut self, word: String) -> Result<Formula> {
        match word.as_str() {
            "true" => {
                self.bump();
                return Ok(Formula::True);
            }
            "false" => {
                self.bump();
                return Ok(Formula::False);
            }
            "E" | "I" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let a = self.ident("a variable")?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.ident("a variable")?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(if word == "E" {
                    Formula::Adj(a, b)
                } else {
                    Formula::Inc(a, b)
                });
            }
            _ => {}
        }
        if *self.peek_at(1) == Tok::LParen {
            let name = self.ident("a predicate name")?;
            self.bump();
            let x = self.ident("a variable")?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(if self.sets.contains(&name) {
                Formula::Member(name, x)
            } else {
                Formula::Color(name, x)
            });
        }
        let a = self.ident("a variable")?;
        match self.bump() {
            Tok::Eq => Ok(Formula::Eq(a, self.ident("a variable")?)),
            Tok::Neq => Ok(Formula::Not(Box::new(Formula::Eq(a, self.ident("a variable")?)))),
            _ => {
                self.pos -= 1;
                self.error("expected `=`, `!=` or `(`")
            }
        }
    }
}

/// Parses formula source text.
pub fn parse_formula(text: &str) -> Result<FormulaAst> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        sets: Vec::new(),
    };
    p.file()
}
