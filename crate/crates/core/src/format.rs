//! Line-oriented text formats.
//!
//! Every file starts with a header naming the format, the variable count and
//! the record count. `#` starts a comment; blank lines are ignored.
//!
//! ```text
//! vcsp <n> <m>        then m lines:  <predicate> <u> <v> <weight>
//! 2lin <n> <m>        then m lines:  <u> <v> <rhs> <weight>
//! wcnf <n> <m>        then m lines:  <weight> <lit> ... <lit> 0
//! ```
//!
//! Variables are 0-based in `vcsp` and `2lin` and 1-based DIMACS literals in
//! `wcnf`. A `wcnf` file may also carry `offset <weight>` lines, not counted
//! in `m`, holding weight that every assignment satisfies.

use std::fmt::{self, Write as _};

use crate::applications::ksat::{Clause, KSatFormula};
use crate::applications::twolin::{LinearEquation, TwoLinSystem};
use crate::applications::twosat::{TwoSatClause, TwoSatFormula};
use crate::applications::Literal;
use crate::double_cover::{DoubleCoverGraph, SignedVertex};
use crate::model::{Constraint, VcspInstance};
use crate::predicate::Predicate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatHint {
    /// Decide from the header; `wcnf` with at most two literals per clause is 2SAT.
    Auto,
    Vcsp,
    TwoSat,
    KSat,
    TwoLin,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParsedInstance {
    Vcsp(VcspInstance),
    TwoSat(TwoSatFormula),
    KSat(KSatFormula),
    TwoLin(TwoLinSystem),
}

impl ParsedInstance {
    pub fn n(&self) -> usize {
        match self {
            ParsedInstance::Vcsp(i) => i.n(),
            ParsedInstance::TwoSat(f) => f.n(),
            ParsedInstance::KSat(f) => f.n(),
            ParsedInstance::TwoLin(s) => s.n(),
        }
    }

    pub fn value(&self, a: &[bool]) -> f64 {
        match self {
            ParsedInstance::Vcsp(i) => i.value(a),
            ParsedInstance::TwoSat(f) => f.value(a),
            ParsedInstance::KSat(f) => f.value(a),
            ParsedInstance::TwoLin(s) => s.value(a),
        }
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl Line<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn end_column(&self) -> usize {
        self.tokens.last().map_or(1, |t| t.column + t.text.len())
    }

    fn expect_len(&self, len: usize, what: &str) -> Result<(), ParseError> {
        if self.tokens.len() != len {
            let col = self.tokens.get(len).map_or(self.end_column(), |t| t.column);
            return Err(self.err(
                col,
                format!("expected {len} fields ({what}), found {}", self.tokens.len()),
            ));
        }
        Ok(())
    }

    fn usize_at(&self, i: usize, what: &str) -> Result<usize, ParseError> {
        let t = &self.tokens[i];
        t.text
            .parse()
            .map_err(|_| self.err(t.column, format!("malformed {what} {:?}", t.text)))
    }

    fn index_at(&self, i: usize, n: usize) -> Result<usize, ParseError> {
        let v = self.usize_at(i, "index")?;
        if v >= n {
            return Err(self.err(
                self.tokens[i].column,
                format!("index {v} out of range for {n} variables"),
            ));
        }
        Ok(v)
    }

    fn weight_at(&self, i: usize) -> Result<f64, ParseError> {
        let t = &self.tokens[i];
        match t.text.parse::<f64>() {
            Ok(w) if w.is_finite() && w >= 0.0 => Ok(w),
            _ => Err(self.err(t.column, format!("malformed weight {:?}", t.text))),
        }
    }
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &content[s..pos],
                        column: content[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        (!tokens.is_empty()).then_some(Line {
            number: i + 1,
            tokens,
        })
    })
}

pub fn parse_instance(text: &str) -> Result<ParsedInstance, ParseError> {
    parse_instance_as(text, FormatHint::Auto)
}

pub fn parse_instance_as(text: &str, hint: FormatHint) -> Result<ParsedInstance, ParseError> {
    let mut it = lines(text);
    let header = it.next().ok_or(ParseError {
        line: 1,
        column: 1,
        message: "missing header line".to_string(),
    })?;
    header.expect_len(3, "format, variable count, record count")?;
    let kind = header.tokens[0].text;
    let n = header.usize_at(1, "variable count")?;
    let m = header.usize_at(2, "record count")?;
    let records: Vec<Line> = it.collect();
    let mismatch = |found: &str| {
        header.err(
            1,
            format!("header declares {kind} but format {found} was requested"),
        )
    };
    match kind {
        "vcsp" => {
            if !matches!(hint, FormatHint::Auto | FormatHint::Vcsp) {
                return Err(mismatch("another"));
            }
            parse_vcsp(n, m, &header, &records).map(ParsedInstance::Vcsp)
        }
        "2lin" => {
            if !matches!(hint, FormatHint::Auto | FormatHint::TwoLin) {
                return Err(mismatch("another"));
            }
            parse_2lin(n, m, &header, &records).map(ParsedInstance::TwoLin)
        }
        "wcnf" => {
            if matches!(hint, FormatHint::Vcsp | FormatHint::TwoLin) {
                return Err(mismatch("another"));
            }
            parse_wcnf(n, m, &header, &records, hint)
        }
        other => Err(header.err(1, format!("unknown format {other:?}"))),
    }
}

fn check_count(header: &Line, m: usize, records: usize) -> Result<(), ParseError> {
    if m != records {
        return Err(header.err(
            header.tokens[2].column,
            format!("header declares {m} records, found {records}"),
        ));
    }
    Ok(())
}

fn parse_vcsp(n: usize, m: usize, header: &Line, records: &[Line]) -> Result<VcspInstance, ParseError> {
    check_count(header, m, records.len())?;
    let mut constraints = Vec::with_capacity(m);
    for line in records {
        line.expect_len(4, "predicate, u, v, weight")?;
        let name = &line.tokens[0];
        let p = Predicate::from_name(name.text)
            .ok_or_else(|| line.err(name.column, format!("unknown predicate {}", name.text)))?;
        let u = line.index_at(1, n)?;
        let v = line.index_at(2, n)?;
        let w = line.weight_at(3)?;
        constraints.push(Constraint::new(u, v, p, w));
    }
    Ok(VcspInstance::new(n, constraints).expect("records validated while parsing"))
}

fn parse_2lin(n: usize, m: usize, header: &Line, records: &[Line]) -> Result<TwoLinSystem, ParseError> {
    check_count(header, m, records.len())?;
    let mut equations = Vec::with_capacity(m);
    for line in records {
        line.expect_len(4, "u, v, rhs, weight")?;
        let u = line.index_at(0, n)?;
        let v = line.index_at(1, n)?;
        let rhs = match line.tokens[2].text {
            "0" => false,
            "1" => true,
            t => return Err(line.err(line.tokens[2].column, format!("rhs must be 0 or 1, got {t:?}"))),
        };
        let weight = line.weight_at(3)?;
        equations.push(LinearEquation { u, v, rhs, weight });
    }
    Ok(TwoLinSystem::new(n, equations).expect("records validated while parsing"))
}

fn parse_wcnf(
    n: usize,
    m: usize,
    header: &Line,
    records: &[Line],
    hint: FormatHint,
) -> Result<ParsedInstance, ParseError> {
    let mut offset = 0.0;
    let mut clauses: Vec<Clause> = Vec::with_capacity(m);
    for line in records {
        if line.tokens[0].text == "offset" {
            line.expect_len(2, "offset, weight")?;
            offset += line.weight_at(1)?;
            continue;
        }
        let weight = line.weight_at(0)?;
        let last = line.tokens.last().expect("nonempty line");
        if line.tokens.len() < 2 || last.text != "0" {
            return Err(line.err(line.end_column(), "clause must end with 0"));
        }
        let mut literals = Vec::new();
        for t in &line.tokens[1..line.tokens.len() - 1] {
            let lit = t
                .text
                .parse::<i64>()
                .ok()
                .and_then(Literal::from_dimacs)
                .ok_or_else(|| line.err(t.column, format!("malformed literal {:?}", t.text)))?;
            if lit.var >= n {
                return Err(line.err(
                    t.column,
                    format!("literal {} out of range for {n} variables", t.text),
                ));
            }
            literals.push(lit);
        }
        clauses.push(Clause { literals, weight });
    }
    check_count(header, m, clauses.len())?;
    let two_sat_shape = offset == 0.0 && clauses.iter().all(|c| matches!(c.literals.len(), 1 | 2));
    let as_2sat = match hint {
        FormatHint::TwoSat => {
            if !two_sat_shape {
                return Err(header.err(1, "2SAT requires one or two literals per clause and no offset"));
            }
            true
        }
        FormatHint::KSat => false,
        _ => two_sat_shape,
    };
    if as_2sat {
        let clauses = clauses
            .into_iter()
            .map(|c| TwoSatClause {
                a: c.literals[0],
                b: *c.literals.last().expect("one or two literals"),
                weight: c.weight,
            })
            .collect();
        Ok(ParsedInstance::TwoSat(
            TwoSatFormula::new(n, clauses).expect("records validated while parsing"),
        ))
    } else {
        Ok(ParsedInstance::KSat(
            KSatFormula::with_offset(n, clauses, offset).expect("records validated while parsing"),
        ))
    }
}

pub fn print_vcsp(inst: &VcspInstance) -> String {
    let mut out = format!("vcsp {} {}\n", inst.n(), inst.len());
    for c in inst.constraints() {
        writeln!(out, "{} {} {} {}", c.predicate, c.u, c.v, c.weight).unwrap();
    }
    out
}

pub fn print_2lin(sys: &TwoLinSystem) -> String {
    let mut out = format!("2lin {} {}\n", sys.n(), sys.equations().len());
    for eq in sys.equations() {
        writeln!(out, "{} {} {} {}", eq.u, eq.v, u8::from(eq.rhs), eq.weight).unwrap();
    }
    out
}

pub fn print_2sat(f: &TwoSatFormula) -> String {
    let mut out = format!("wcnf {} {}\n", f.n(), f.clauses().len());
    for c in f.clauses() {
        if c.a == c.b {
            writeln!(out, "{} {} 0", c.weight, c.a.to_dimacs()).unwrap();
        } else {
            writeln!(out, "{} {} {} 0", c.weight, c.a.to_dimacs(), c.b.to_dimacs()).unwrap();
        }
    }
    out
}

pub fn print_ksat(f: &KSatFormula) -> String {
    let mut out = format!("wcnf {} {}\n", f.n(), f.clauses().len());
    if f.offset() > 0.0 {
        writeln!(out, "offset {}", f.offset()).unwrap();
    }
    for c in f.clauses() {
        write!(out, "{}", c.weight).unwrap();
        for l in &c.literals {
            write!(out, " {}", l.to_dimacs()).unwrap();
        }
        out.push_str(" 0\n");
    }
    out
}

pub fn print_instance(inst: &ParsedInstance) -> String {
    match inst {
        ParsedInstance::Vcsp(i) => print_vcsp(i),
        ParsedInstance::TwoSat(f) => print_2sat(f),
        ParsedInstance::KSat(f) => print_ksat(f),
        ParsedInstance::TwoLin(s) => print_2lin(s),
    }
}

/// Cover edges with signed vertex labels.
pub fn print_cover(cover: &DoubleCoverGraph) -> String {
    let g = cover.graph();
    let mut out = format!("cover {} {}\n", cover.base_n(), g.m());
    for e in g.edges() {
        writeln!(
            out,
            "{} {} {}",
            SignedVertex::from_index(cover.base_n(), e.src),
            SignedVertex::from_index(cover.base_n(), e.dst),
            e.weight
        )
        .unwrap();
    }
    out
}
