//! The `.cftr` rule-library format.
//!
//! ```text
//! # comment
//! connector Bl : boolean;
//! connector Msg : { omission, commission };
//!
//! block OR2_Bl {
//!     OUT.false-positive = IN1.false-positive OR IN2.false-positive;
//! }
//! ```
//!
//! NOT binds tightest, then AND, then OR and XOR at equal precedence, all
//! left-associative. A chain of the same operator becomes one n-ary node;
//! parentheses always start a new node.

use std::fmt::Write as _;

use cftgen_core::connector::{ConnectorCategory, ConnectorTypeDef};
use cftgen_core::rules::{RuleExpr, Term};
use cftgen_core::{ConnectorTypeTable, FailureType, FailureTypeSet, RuleLibrary, RuleSet};

use crate::error::{is_identifier, FormatError};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Punct(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, FormatError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            chars.next();
            column += 1;
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
                column += 1;
            }
        } else if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
            let mut w = String::new();
            while let Some(&c) = chars.peek() {
                if !(c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                    break;
                }
                w.push(c);
                chars.next();
                column += 1;
            }
            out.push(Token {
                tok: Tok::Word(w),
                line: l,
                column: col,
            });
        } else if "{}();:=.,".contains(c) {
            chars.next();
            column += 1;
            out.push(Token {
                tok: Tok::Punct(c),
                line: l,
                column: col,
            });
        } else {
            return Err(FormatError::Syntax {
                line: l,
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    And,
    Or,
    Xor,
}

fn build(op: Op, mut operands: Vec<RuleExpr>) -> RuleExpr {
    if operands.len() == 1 {
        return operands.pop().unwrap();
    }
    match op {
        Op::And => RuleExpr::And(operands),
        Op::Or => RuleExpr::Or(operands),
        Op::Xor => RuleExpr::Xor(operands),
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at<T>(t: &Token, message: impl Into<String>) -> Result<T, FormatError> {
        Err(FormatError::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<Token, FormatError> {
        let t = self.next();
        if t.tok == Tok::Punct(c) {
            Ok(t)
        } else {
            Self::error_at(
                &t,
                format!("expected `{c}`, found {}", Self::describe(&t.tok)),
            )
        }
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Word(x) if x == w)
    }

    fn identifier(&mut self) -> Result<(String, Token), FormatError> {
        let t = self.next();
        match &t.tok {
            Tok::Word(w)
                if is_identifier(w) && !matches!(w.as_str(), "NOT" | "AND" | "OR" | "XOR") =>
            {
                Ok((w.clone(), t))
            }
            other => Self::error_at(
                &t,
                format!("expected an identifier, found {}", Self::describe(other)),
            ),
        }
    }

    fn failure_type(&mut self) -> Result<FailureType, FormatError> {
        let t = self.next();
        match &t.tok {
            Tok::Word(w) => match w.parse() {
                Ok(ft) => Ok(ft),
                Err(_) => Self::error_at(&t, format!("`{w}` is not a failure type")),
            },
            other => Self::error_at(
                &t,
                format!("expected a failure type, found {}", Self::describe(other)),
            ),
        }
    }

    fn library(&mut self) -> Result<RuleLibrary, FormatError> {
        let mut table = ConnectorTypeTable::new();
        let mut sets: Vec<RuleSet> = Vec::new();
        loop {
            let t = self.next();
            match &t.tok {
                Tok::Eof => break,
                Tok::Word(w) if w == "connector" => {
                    let (name, at) = self.identifier()?;
                    self.expect(':')?;
                    let def = self.connector_def()?;
                    self.expect(';')?;
                    if let Err(e) = table.declare(name, def) {
                        return Self::error_at(&at, e.to_string());
                    }
                }
                Tok::Word(w) if w == "block" => {
                    let (name, at) = self.identifier()?;
                    if sets.iter().any(|s| s.block_type == name) {
                        return Self::error_at(&at, format!("block `{name}` is defined twice"));
                    }
                    sets.push(self.block(name)?);
                }
                other => {
                    return Self::error_at(
                        &t,
                        format!(
                            "expected `connector` or `block`, found {}",
                            Self::describe(other)
                        ),
                    )
                }
            }
        }
        let mut lib = RuleLibrary::new(table);
        for s in sets {
            lib.add(s).expect("block names checked above");
        }
        Ok(lib)
    }

    fn connector_def(&mut self) -> Result<ConnectorTypeDef, FormatError> {
        if self.is_punct('{') {
            self.next();
            let mut set = FailureTypeSet::EMPTY;
            loop {
                set = set.with(self.failure_type()?);
                if self.is_punct(',') {
                    self.next();
                } else {
                    break;
                }
            }
            self.expect('}')?;
            return Ok(ConnectorTypeDef::Custom(set));
        }
        let t = self.next();
        match &t.tok {
            Tok::Word(w) => match w.parse::<ConnectorCategory>() {
                Ok(c) => Ok(ConnectorTypeDef::Category(c)),
                Err(()) => Self::error_at(&t, format!("unknown connector category `{w}`")),
            },
            other => Self::error_at(
                &t,
                format!(
                    "expected a category or `{{`, found {}",
                    Self::describe(other)
                ),
            ),
        }
    }

    fn block(&mut self, name: String) -> Result<RuleSet, FormatError> {
        let mut rs = RuleSet::new(name);
        self.expect('{')?;
        while !self.is_punct('}') {
            let (output, at) = self.identifier()?;
            self.expect('.')?;
            let ft = self.failure_type()?;
            self.expect('=')?;
            let expr = self.expr()?;
            self.expect(';')?;
            if rs.insert(output.clone(), ft, expr).is_err() {
                return Err(FormatError::DuplicateRuleKey {
                    block: rs.block_type.clone(),
                    output,
                    failure_type: ft.to_string(),
                    line: at.line,
                    column: at.column,
                });
            }
        }
        self.expect('}')?;
        Ok(rs)
    }

    fn expr(&mut self) -> Result<RuleExpr, FormatError> {
        let mut operands = vec![self.conjunction()?];
        let mut op: Option<Op> = None;
        loop {
            let next = if self.is_word("OR") {
                Op::Or
            } else if self.is_word("XOR") {
                Op::Xor
            } else {
                break;
            };
            self.next();
            if let Some(cur) = op.filter(|&o| o != next) {
                operands = vec![build(cur, operands)];
            }
            op = Some(next);
            operands.push(self.conjunction()?);
        }
        Ok(match op {
            Some(o) => build(o, operands),
            None => operands.pop().unwrap(),
        })
    }

    fn conjunction(&mut self) -> Result<RuleExpr, FormatError> {
        let mut operands = vec![self.unary()?];
        while self.is_word("AND") {
            self.next();
            operands.push(self.unary()?);
        }
        Ok(build(Op::And, operands))
    }

    fn unary(&mut self) -> Result<RuleExpr, FormatError> {
        if self.is_word("NOT") {
            self.next();
            return Ok(RuleExpr::Not(Box::new(self.unary()?)));
        }
        if self.is_punct('(') {
            self.next();
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        let (param, _) = self.identifier()?;
        self.expect('.')?;
        let ft = self.failure_type()?;
        Ok(RuleExpr::Term(Term::new(param, ft)))
    }
}

pub fn parse_rule_library(text: &str) -> Result<RuleLibrary, FormatError> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    p.library()
}

/// Parses a single rule formula, e.g. `IN1.omission AND IN2.omission`.
pub fn parse_rule_expr(text: &str) -> Result<RuleExpr, FormatError> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    let t = p.next();
    if t.tok != Tok::Eof {
        return Parser::error_at(
            &t,
            format!("unexpected {} after expression", Parser::describe(&t.tok)),
        );
    }
    Ok(e)
}

pub fn write_rule_library(lib: &RuleLibrary) -> String {
    let mut out = String::new();
    for (name, def) in lib.connector_types.iter() {
        match def {
            ConnectorTypeDef::Category(c) => writeln!(out, "connector {name} : {};", c.as_str()),
            ConnectorTypeDef::Custom(set) => writeln!(out, "connector {name} : {set};"),
        }
        .unwrap();
    }
    for rs in lib.rule_sets() {
        if !out.is_empty() {
            out.push('\n');
        }
        writeln!(out, "block {} {{", rs.block_type).unwrap();
        for r in rs.rules() {
            writeln!(out, "    {}.{} = {};", r.output, r.failure_type, r.expr).unwrap();
        }
        out.push_str("}\n");
    }
    out
}
