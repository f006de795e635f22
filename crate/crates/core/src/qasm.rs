// SPDX-License-Identifier: Apache-2.0

//! OpenQASM 2.0 subset: `qreg`/`creg`, `h x z s t rz rx ry u3 cx cz swap rzz`,
//! `measure` and `barrier` (ignored). Classical control and gate definitions
//! are rejected with their source location.

use std::collections::BTreeMap;

use crate::circuit::{Basis, Circuit, Gate, GateKind, OneQubitGate, TwoQubitGate};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Str,
    Arrow,
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, column) = (li + 1, i + 1);
            let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line, column });
            if c.is_whitespace() {
                i += 1;
            } else if c == '/' && chars.get(i + 1) == Some(&'/') {
                break;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
            } else if c.is_ascii_digit()
                || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
            {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    i += 1;
                    if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                        i += 1;
                    }
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let s: String = chars[start..i].iter().collect();
                let v = s
                    .parse()
                    .map_err(|_| perr(line, column, format!("bad number '{s}'")))?;
                push(&mut out, Tok::Number(v));
            } else if c == '"' {
                let end = chars[i + 1..]
                    .iter()
                    .position(|&d| d == '"')
                    .ok_or_else(|| perr(line, column, "unterminated string"))?;
                i += end + 2;
                push(&mut out, Tok::Str);
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                i += 2;
                push(&mut out, Tok::Arrow);
            } else if "[](),;+-*/^=<>{}".contains(c) {
                i += 1;
                push(&mut out, Tok::Sym(c));
            } else {
                return Err(perr(line, column, format!("unexpected character '{c}'")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    qregs: BTreeMap<String, (usize, usize)>,
    cregs: BTreeMap<String, (usize, usize)>,
    circuit: Circuit,
}

type Operand = Vec<usize>;

impl Parser {
    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) => (t.line, t.column),
            None => (1, 1),
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(perr(l, c, message))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Result<Tok> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.tok.clone())
            }
            None => self.fail("unexpected end of input"),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Tok::Sym(d)) if *d == c => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected '{c}'")),
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail("expected an identifier"),
        }
    }

    fn index(&mut self) -> Result<usize> {
        match self.next()? {
            Tok::Number(v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
            _ => {
                self.pos -= 1;
                self.fail("expected a non-negative integer")
            }
        }
    }

    fn run(&mut self) -> Result<()> {
        while self.pos < self.toks.len() {
            self.statement()?;
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<()> {
        let start = self.pos;
        let word = self.ident()?;
        match word.as_str() {
            "OPENQASM" => {
                match self.next()? {
                    Tok::Number(v) if (v - 2.0).abs() < 1e-9 => {}
                    _ => {
                        self.pos -= 1;
                        return self.fail("only OpenQASM 2.0 is supported");
                    }
                }
                self.expect_sym(';')
            }
            "include" => {
                if self.next()? != Tok::Str {
                    self.pos -= 1;
                    return self.fail("expected a file name");
                }
                self.expect_sym(';')
            }
            "qreg" | "creg" => {
                let name = self.ident()?;
                self.expect_sym('[')?;
                let size = self.index()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                let (regs, count) = if word == "qreg" {
                    (&mut self.qregs, &mut self.circuit.num_qubits)
                } else {
                    (&mut self.cregs, &mut self.circuit.num_clbits)
                };
                if regs.insert(name.clone(), (*count, size)).is_some() {
                    self.pos = start + 1;
                    return self.fail(format!("register '{name}' declared twice"));
                }
                *count += size;
                Ok(())
            }
            "barrier" => {
                while !matches!(self.peek(), Some(Tok::Sym(';')) | None) {
                    self.pos += 1;
                }
                self.expect_sym(';')
            }
            "measure" => {
                let q = self.operand(true)?;
                if self.next()? != Tok::Arrow {
                    self.pos -= 1;
                    return self.fail("expected '->'");
                }
                let c = self.operand(false)?;
                self.expect_sym(';')?;
                if q.len() != c.len() {
                    self.pos = start;
                    return self.fail("measure operands differ in size");
                }
                for (q, c) in q.into_iter().zip(c) {
                    self.circuit.push(Gate::measure(q, c));
                }
                Ok(())
            }
            "if" | "gate" | "opaque" | "reset" | "U" | "CX" => {
                self.pos = start;
                self.fail(format!("unsupported construct '{word}'"))
            }
            name => {
                let params = if matches!(self.peek(), Some(Tok::Sym('('))) {
                    self.pos += 1;
                    let mut ps = vec![self.expr()?];
                    while matches!(self.peek(), Some(Tok::Sym(','))) {
                        self.pos += 1;
                        ps.push(self.expr()?);
                    }
                    self.expect_sym(')')?;
                    ps
                } else {
                    Vec::new()
                };
                let mut args = vec![self.operand(true)?];
                while matches!(self.peek(), Some(Tok::Sym(','))) {
                    self.pos += 1;
                    args.push(self.operand(true)?);
                }
                self.expect_sym(';')?;
                let unknown = |p: &Self| {
                    let t = &p.toks[start];
                    Err(perr(t.line, t.column, format!("unsupported gate '{name}'")))
                };
                if let Some(g) = OneQubitGate::from_name(name, &params) {
                    if args.len() != 1 {
                        return unknown(self);
                    }
                    for q in &args[0] {
                        self.circuit.push(Gate::one(g, *q));
                    }
                    return Ok(());
                }
                let two = match (name, params.as_slice()) {
                    ("cx", []) => TwoQubitGate::Cnot,
                    ("cz", []) => TwoQubitGate::Cz,
                    ("swap", []) => TwoQubitGate::Swap,
                    ("rzz", [t]) => TwoQubitGate::Rzz(*t),
                    _ => return unknown(self),
                };
                if args.len() != 2 || args[0].len() != 1 || args[1].len() != 1 {
                    let t = &self.toks[start];
                    return Err(perr(
                        t.line,
                        t.column,
                        format!("'{name}' takes two single qubits"),
                    ));
                }
                if args[0][0] == args[1][0] {
                    let t = &self.toks[start];
                    return Err(perr(t.line, t.column, "repeated qubit operand"));
                }
                self.circuit.push(Gate::two(two, args[0][0], args[1][0]));
                Ok(())
            }
        }
    }

    /// `name[i]` or a whole register `name`.
    fn operand(&mut self, quantum: bool) -> Result<Operand> {
        let at = self.pos;
        let name = self.ident()?;
        let regs = if quantum { &self.qregs } else { &self.cregs };
        let Some(&(offset, size)) = regs.get(&name) else {
            self.pos = at;
            return self.fail(format!("undeclared register '{name}'"));
        };
        if matches!(self.peek(), Some(Tok::Sym('['))) {
            self.pos += 1;
            let i = self.index()?;
            if i >= size {
                self.pos -= 1;
                return self.fail(format!("index {i} out of range for '{name}[{size}]'"));
            }
            self.expect_sym(']')?;
            Ok(vec![offset + i])
        } else {
            Ok((offset..offset + size).collect())
        }
    }

    fn expr(&mut self) -> Result<f64> {
        let mut v = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('+')) => {
                    self.pos += 1;
                    v += self.term()?;
                }
                Some(Tok::Sym('-')) => {
                    self.pos += 1;
                    v -= self.term()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn term(&mut self) -> Result<f64> {
        let mut v = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('*')) => {
                    self.pos += 1;
                    v *= self.factor()?;
                }
                Some(Tok::Sym('/')) => {
                    self.pos += 1;
                    v /= self.factor()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn factor(&mut self) -> Result<f64> {
        match self.next()? {
            Tok::Number(v) => Ok(v),
            Tok::Ident(s) if s == "pi" => Ok(std::f64::consts::PI),
            Tok::Sym('-') => Ok(-self.factor()?),
            Tok::Sym('+') => self.factor(),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            _ => {
                self.pos -= 1;
                self.fail("expected a number, 'pi' or '('")
            }
        }
    }
}

pub fn parse_qasm2_subset(text: &str) -> Result<Circuit> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        qregs: BTreeMap::new(),
        cregs: BTreeMap::new(),
        circuit: Circuit::new(0, 0),
    };
    p.run()?;
    p.circuit.validate()?;
    Ok(p.circuit)
}

/// Writes a circuit without classical control, resets or virtual markers.
pub fn export_qasm2(circuit: &Circuit) -> Result<String> {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    out.push_str(&format!("qreg q[{}];\n", circuit.num_qubits));
    if circuit.num_clbits > 0 {
        out.push_str(&format!("creg c[{}];\n", circuit.num_clbits));
    }
    let fmt_params = |ps: Vec<f64>| {
        if ps.is_empty() {
            String::new()
        } else {
            let s: Vec<String> = ps.iter().map(|p| format!("{p:?}")).collect();
            format!("({})", s.join(","))
        }
    };
    for (i, g) in circuit.gates.iter().enumerate() {
        let line = match &g.kind {
            GateKind::OneQubit(one) => {
                format!(
                    "{}{} q[{}];",
                    one.name(),
                    fmt_params(one.params()),
                    g.qubits[0]
                )
            }
            GateKind::TwoQubit(two) if !matches!(two, TwoQubitGate::Cu(_)) => format!(
                "{}{} q[{}],q[{}];",
                two.name(),
                fmt_params(two.params()),
                g.qubits[0],
                g.qubits[1]
            ),
            GateKind::Measure(Basis::Z) => {
                format!("measure q[{}] -> c[{}];", g.qubits[0], g.clbits[0])
            }
            _ => {
                return Err(Error::Export(format!(
                    "gate {i} ({}) has no equivalent in the supported subset",
                    g.name()
                )))
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}
