//! A small OpenQASM 2 reader for straight-line gate programs.

use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{Circuit, GateKind, Instruction};
use crate::error::QasmError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Str,
    Arrow,
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, QasmError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
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
            }
            continue;
        }
        let push = |tokens: &mut Vec<Token>, tok| {
            tokens.push(Token {
                tok,
                line: start_line,
                col: start_col,
            })
        };
        if c.is_ascii_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - begin;
            push(&mut tokens, Tok::Ident(chars[begin..i].iter().collect()));
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let raw: String = chars[begin..i].iter().collect();
            col += i - begin;
            let value = raw.parse::<f64>().map_err(|_| QasmError::Syntax {
                line: start_line,
                col: start_col,
                msg: format!("malformed number `{raw}`"),
            })?;
            push(&mut tokens, Tok::Number(value));
            continue;
        }
        if c == '"' {
            let begin = i;
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(QasmError::Syntax {
                    line: start_line,
                    col: start_col,
                    msg: "unterminated string".into(),
                });
            }
            i += 1;
            col += i - begin;
            push(&mut tokens, Tok::Str);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            col += 2;
            push(&mut tokens, Tok::Arrow);
            continue;
        }
        if ";,[]()+-*/".contains(c) {
            i += 1;
            col += 1;
            push(&mut tokens, Tok::Sym(c));
            continue;
        }
        return Err(QasmError::Syntax {
            line: start_line,
            col: start_col,
            msg: format!("unexpected character `{c}`"),
        });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(tokens)
}

/// A statement that was accepted but not translated into a gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QasmWarning {
    pub line: usize,
    pub message: String,
}

struct Register {
    name: String,
    size: usize,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    qreg: Option<Register>,
    circuit: Circuit,
    warnings: Vec<QasmWarning>,
}

enum Arg {
    Single(usize),
    Whole,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(tok: &Token, msg: impl Into<String>) -> QasmError {
        QasmError::Syntax {
            line: tok.line,
            col: tok.col,
            msg: msg.into(),
        }
    }

    fn expect_sym(&mut self, sym: char) -> Result<(), QasmError> {
        let tok = self.next();
        if tok.tok == Tok::Sym(sym) {
            Ok(())
        } else {
            Err(Self::error_at(&tok, format!("expected `{sym}`")))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Token), QasmError> {
        let tok = self.next();
        match &tok.tok {
            Tok::Ident(name) => Ok((name.clone(), tok.clone())),
            _ => Err(Self::error_at(&tok, "expected identifier")),
        }
    }

    fn expect_index(&mut self) -> Result<usize, QasmError> {
        let tok = self.next();
        match tok.tok {
            Tok::Number(v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
            _ => Err(Self::error_at(&tok, "expected non-negative integer")),
        }
    }

    fn parse_program(mut self) -> Result<(Circuit, Vec<QasmWarning>), QasmError> {
        if matches!(&self.peek().tok, Tok::Ident(k) if k == "OPENQASM") {
            self.next();
            let tok = self.next();
            if !matches!(tok.tok, Tok::Number(_)) {
                return Err(Self::error_at(&tok, "expected version number"));
            }
            self.expect_sym(';')?;
        }
        while self.peek().tok != Tok::Eof {
            self.statement()?;
        }
        Ok((self.circuit, self.warnings))
    }

    fn statement(&mut self) -> Result<(), QasmError> {
        let (keyword, tok) = self.expect_ident()?;
        match keyword.as_str() {
            "include" => {
                let s = self.next();
                if s.tok != Tok::Str {
                    return Err(Self::error_at(&s, "expected file name string"));
                }
                self.expect_sym(';')
            }
            "qreg" => {
                let (name, name_tok) = self.expect_ident()?;
                self.expect_sym('[')?;
                let size = self.expect_index()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                if let Some(existing) = &self.qreg {
                    return Err(if existing.name == name {
                        QasmError::RegisterRedeclared {
                            name,
                            line: name_tok.line,
                            col: name_tok.col,
                        }
                    } else {
                        QasmError::MultipleRegisters {
                            name,
                            line: name_tok.line,
                            col: name_tok.col,
                        }
                    });
                }
                self.circuit = Circuit::new(size);
                self.qreg = Some(Register { name, size });
                Ok(())
            }
            "creg" => {
                self.expect_ident()?;
                self.expect_sym('[')?;
                self.expect_index()?;
                self.expect_sym(']')?;
                self.expect_sym(';')
            }
            "measure" => {
                self.skip_to_semicolon()?;
                self.warn(tok.line, "dropped `measure` statement");
                Ok(())
            }
            "barrier" => {
                self.skip_to_semicolon()?;
                self.warn(tok.line, "dropped `barrier` statement");
                Ok(())
            }
            "gate" | "opaque" | "if" | "reset" | "U" | "CX" => Err(Self::error_at(
                &tok,
                format!("`{keyword}` statements are not supported"),
            )),
            name => {
                let Some(kind) = GateKind::from_qasm_name(name) else {
                    return Err(QasmError::UnsupportedGate {
                        name: name.to_string(),
                        line: tok.line,
                        col: tok.col,
                    });
                };
                self.gate(kind, &tok)
            }
        }
    }

    fn warn(&mut self, line: usize, message: &str) {
        log::warn!("line {line}: {message}");
        self.warnings.push(QasmWarning {
            line,
            message: message.to_string(),
        });
    }

    fn skip_to_semicolon(&mut self) -> Result<(), QasmError> {
        loop {
            let tok = self.next();
            match tok.tok {
                Tok::Sym(';') => return Ok(()),
                Tok::Eof => return Err(Self::error_at(&tok, "expected `;`")),
                _ => {}
            }
        }
    }

    fn gate(&mut self, kind: GateKind, gate_tok: &Token) -> Result<(), QasmError> {
        let mut params = Vec::new();
        if self.peek().tok == Tok::Sym('(') {
            self.next();
            if self.peek().tok != Tok::Sym(')') {
                params.push(self.expr()?);
                while self.peek().tok == Tok::Sym(',') {
                    self.next();
                    params.push(self.expr()?);
                }
            }
            self.expect_sym(')')?;
        }
        let mut args = vec![self.arg()?];
        while self.peek().tok == Tok::Sym(',') {
            self.next();
            args.push(self.arg()?);
        }
        self.expect_sym(';')?;

        let size = self.qreg.as_ref().map_or(0, |r| r.size);
        let expanded: Vec<Vec<usize>> = match args.as_slice() {
            [Arg::Whole] if kind.arity() == 1 => (0..size).map(|q| vec![q]).collect(),
            _ if args.iter().any(|a| matches!(a, Arg::Whole)) => {
                return Err(Self::error_at(
                    gate_tok,
                    "register broadcast is only supported for single-qubit gates",
                ))
            }
            _ => vec![args
                .iter()
                .map(|a| match a {
                    Arg::Single(q) => *q,
                    Arg::Whole => unreachable!(),
                })
                .collect()],
        };
        for operands in expanded {
            let instr = Instruction::new(kind, params.clone(), operands).map_err(|source| {
                QasmError::Circuit {
                    line: gate_tok.line,
                    col: gate_tok.col,
                    source,
                }
            })?;
            self.circuit
                .push(instr)
                .map_err(|source| QasmError::Circuit {
                    line: gate_tok.line,
                    col: gate_tok.col,
                    source,
                })?;
        }
        Ok(())
    }

    fn arg(&mut self) -> Result<Arg, QasmError> {
        let (name, tok) = self.expect_ident()?;
        let Some(reg) = &self.qreg else {
            return Err(QasmError::UnknownRegister {
                name,
                line: tok.line,
                col: tok.col,
            });
        };
        if reg.name != name {
            return Err(QasmError::UnknownRegister {
                name,
                line: tok.line,
                col: tok.col,
            });
        }
        if self.peek().tok != Tok::Sym('[') {
            return Ok(Arg::Whole);
        }
        self.next();
        let index = self.expect_index()?;
        self.expect_sym(']')?;
        let reg = self.qreg.as_ref().expect("checked above");
        if index >= reg.size {
            return Err(QasmError::QubitOutOfRange {
                register: reg.name.clone(),
                index,
                size: reg.size,
                line: tok.line,
                col: tok.col,
            });
        }
        Ok(Arg::Single(index))
    }

    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut value = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Sym('+') => {
                    self.next();
                    value += self.term()?;
                }
                Tok::Sym('-') => {
                    self.next();
                    value -= self.term()?;
                }
                _ => return Ok(value),
            }
        }
    }

    fn term(&mut self) -> Result<f64, QasmError> {
        let mut value = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Sym('*') => {
                    self.next();
                    value *= self.factor()?;
                }
                Tok::Sym('/') => {
                    self.next();
                    value /= self.factor()?;
                }
                _ => return Ok(value),
            }
        }
    }

    fn factor(&mut self) -> Result<f64, QasmError> {
        let tok = self.next();
        match &tok.tok {
            Tok::Sym('-') => Ok(-self.factor()?),
            Tok::Sym('+') => self.factor(),
            Tok::Number(v) => Ok(*v),
            Tok::Ident(name) if name == "pi" => Ok(PI),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            _ => Err(Self::error_at(&tok, "expected angle expression")),
        }
    }
}

/// Parses a program and returns the circuit plus warnings for dropped
/// `measure`/`barrier` statements.
pub fn parse_qasm_with_warnings(text: &str) -> Result<(Circuit, Vec<QasmWarning>), QasmError> {
    let parser = Parser {
        tokens: lex(text)?,
        pos: 0,
        qreg: None,
        circuit: Circuit::new(0),
        warnings: Vec::new(),
    };
    parser.parse_program()
}

pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    parse_qasm_with_warnings(text).map(|(c, _)| c)
}

/// Canonical text form; angles use the shortest representation that parses
/// back to the same `f64`.
pub fn emit_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", circuit.num_qubits());
    for instr in circuit.instructions() {
        out.push_str(instr.kind().qasm_name());
        if !instr.params().is_empty() {
            let params: Vec<String> = instr.params().iter().map(|p| format!("{p:?}")).collect();
            let _ = write!(out, "({})", params.join(","));
        }
        let ops: Vec<String> = instr.operands().iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, " {};", ops.join(","));
    }
    out
}
