//! Instance file format and solution writers.
//!
//! The text format is line oriented. `#` starts a comment, blank lines are
//! skipped, variables are 1-based in files and 0-based in memory:
//!
//! ```text
//! vars 3
//! min 3*x1 + 1*x2 + 0*x3
//! c: +x1 + x2 >= 2
//! c: -x3 >= -1
//! box x1 0 2
//! ```
//!
//! The `vars` and `min` headers come first, in that order. Objective
//! coefficients are integers or fractions `p/q`. Row coefficients default to 1
//! when written as bare `x<i>`; an explicit magnitude uses `k*x<i>`. A file
//! whose rows all have at most two terms with unit coefficients parses to a
//! [`UtvpiInstance`]; any other row makes the whole file an
//! [`ExtendedInstance`]. `box` lines carry enumeration bounds: they compile to
//! the rows `+x_i >= lo` and `-x_i >= -hi` when the file is UTVPI, and are
//! kept as per-variable bounds on extended instances.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::model::{
    HalfInt, IlpSolution, LpSolution, ModelError, Rational, Sign, UtvpiConstraint,
    UtvpiInstance,
};

/// One row of an extended system: arbitrary integer coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtRow {
    pub terms: Vec<(i64, usize)>,
    pub bound: i64,
}

impl ExtRow {
    /// Left-hand side at an integer point, in exact wide arithmetic.
    pub fn lhs_int(&self, z: &[i64]) -> i128 {
        self.terms.iter().map(|&(c, v)| c as i128 * z[v] as i128).sum()
    }

    pub fn is_satisfied_int(&self, z: &[i64]) -> bool {
        self.lhs_int(z) >= self.bound as i128
    }

    /// Does this row fit the UTVPI shape (at most two unit-coefficient terms)?
    pub fn is_utvpi(&self) -> bool {
        self.terms.len() <= 2 && self.terms.iter().all(|&(c, _)| c == 1 || c == -1)
    }
}

/// A linear system that fell outside the UTVPI fragment: rows with arbitrary
/// integer coefficients or more than two terms. Only the brute-force oracle
/// and the convexity checks operate on these.
#[derive(Clone, PartialEq, Debug)]
pub struct ExtendedInstance {
    pub n: usize,
    pub rows: Vec<ExtRow>,
    pub objective: Vec<Rational>,
    /// Per-variable enumeration bounds from `box` lines, if any.
    pub boxes: Vec<Option<(i64, i64)>>,
}

impl ExtendedInstance {
    pub fn new(n: usize, objective: Vec<Rational>) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::NoVariables);
        }
        if objective.len() != n {
            return Err(ModelError::ObjectiveLength { expected: n, got: objective.len() });
        }
        Ok(ExtendedInstance { n, rows: Vec::new(), objective, boxes: vec![None; n] })
    }

    pub fn add_row(&mut self, terms: Vec<(i64, usize)>, bound: i64) -> Result<(), ModelError> {
        for &(_, v) in &terms {
            if v >= self.n {
                return Err(ModelError::VariableOutOfRange { var: v, n: self.n });
            }
        }
        self.rows.push(ExtRow { terms, bound });
        Ok(())
    }

    pub fn evaluate_int(&self, z: &[i64]) -> Result<Rational, ModelError> {
        if z.len() != self.n {
            return Err(ModelError::DimensionMismatch { expected: self.n, got: z.len() });
        }
        let mut acc = Rational::zero();
        for (w, &zv) in self.objective.iter().zip(z) {
            acc += w * BigRational::from_integer(BigInt::from(zv));
        }
        Ok(acc)
    }

    pub fn violated_rows_int(&self, z: &[i64]) -> Result<Vec<usize>, ModelError> {
        if z.len() != self.n {
            return Err(ModelError::DimensionMismatch { expected: self.n, got: z.len() });
        }
        Ok(self
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_satisfied_int(z))
            .map(|(i, _)| i)
            .collect())
    }

    pub fn is_feasible_int(&self, z: &[i64]) -> Result<bool, ModelError> {
        Ok(self.violated_rows_int(z)?.is_empty())
    }

    /// True when every row fits the UTVPI shape.
    pub fn is_utvpi(&self) -> bool {
        self.rows.iter().all(ExtRow::is_utvpi)
    }
}

impl From<&UtvpiInstance> for ExtendedInstance {
    fn from(inst: &UtvpiInstance) -> Self {
        let mut ext = ExtendedInstance::new(inst.num_vars(), inst.objective().to_vec())
            .expect("valid instance");
        for c in inst.constraints() {
            let terms = c.terms().map(|(s, v)| (s.factor(), v)).collect();
            ext.add_row(terms, c.bound()).expect("valid row");
        }
        ext
    }
}

/// Result of parsing a file: the UTVPI fragment when every row fits it,
/// otherwise the extended form.
#[derive(Clone, PartialEq, Debug)]
pub enum ParsedInstance {
    Utvpi(UtvpiInstance),
    Extended(ExtendedInstance),
}

impl ParsedInstance {
    pub fn num_vars(&self) -> usize {
        match self {
            ParsedInstance::Utvpi(i) => i.num_vars(),
            ParsedInstance::Extended(i) => i.n,
        }
    }

    pub fn objective(&self) -> &[Rational] {
        match self {
            ParsedInstance::Utvpi(i) => i.objective(),
            ParsedInstance::Extended(i) => &i.objective,
        }
    }

    /// View as an extended instance (lossless for UTVPI inputs).
    pub fn to_extended(&self) -> ExtendedInstance {
        match self {
            ParsedInstance::Utvpi(i) => ExtendedInstance::from(i),
            ParsedInstance::Extended(i) => i.clone(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("expected {what}, found `{found}`")]
    Expected { what: &'static str, found: String },
    #[error("`{0}` header appears twice")]
    DuplicateHeader(&'static str),
    #[error("`{missing}` header must appear before this line")]
    MissingHeader { missing: &'static str },
    #[error("number `{0}` out of range")]
    NumberRange(String),
    #[error("row bounds must be integers")]
    NonIntegerBound,
    #[error("variable x{} out of range for {n} variables", var + 1)]
    VariableOutOfRange { var: usize, n: usize },
    #[error("variable x{} appears twice", var + 1)]
    DuplicateVariable { var: usize },
    #[error("zero coefficient on x{}", var + 1)]
    ZeroCoefficient { var: usize },
    #[error("box bounds must satisfy lo <= hi")]
    InvalidBox,
    #[error("{0}")]
    Model(ModelError),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, col {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(char),
    Ge,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Num(s) => write!(f, "{s}"),
            Tok::Sym(c) => write!(f, "{c}"),
            Tok::Ge => write!(f, ">="),
        }
    }
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let bytes: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c == '+' || c == '-' || c == '*' || c == ':' {
            toks.push((Tok::Sym(c), col));
            i += 1;
        } else if c == '>' {
            if i + 1 < bytes.len() && bytes[i + 1] == '=' {
                toks.push((Tok::Ge, col));
                i += 2;
            } else {
                return Err(ParseError {
                    line: line_no,
                    col,
                    kind: ParseErrorKind::Expected { what: "`>=`", found: ">".into() },
                });
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == '/' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            toks.push((Tok::Num(bytes[start..i].iter().collect()), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(bytes[start..i].iter().collect()), col));
        } else {
            return Err(ParseError {
                line: line_no,
                col,
                kind: ParseErrorKind::Expected { what: "token", found: c.to_string() },
            });
        }
    }
    Ok(toks)
}

struct Cursor {
    toks: Vec<(Tok, usize)>,
    i: usize,
    line: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.i)
            .map(|&(_, c)| c)
            .or_else(|| self.toks.last().map(|&(ref t, c)| c + t.to_string().len()))
            .unwrap_or(1)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, col: self.col(), kind }
    }

    fn expected(&self, what: &'static str) -> ParseError {
        let found = self.peek().map(|t| t.to_string()).unwrap_or_else(|| "end of line".into());
        self.err(ParseErrorKind::Expected { what, found })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(t, _)| t.clone());
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.i == self.toks.len()
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.expected("end of line"))
        }
    }

    /// Unsigned number token as a rational (integer or `p/q`).
    fn rational(&mut self) -> Result<Rational, ParseError> {
        let col_err = self.expected("number");
        match self.next() {
            Some(Tok::Num(s)) => parse_rational_token(&s).ok_or(ParseError {
                line: self.line,
                col: self.toks[self.i - 1].1,
                kind: ParseErrorKind::NumberRange(s),
            }),
            _ => Err(col_err),
        }
    }

    /// Optionally signed integer.
    fn signed_int(&mut self) -> Result<i64, ParseError> {
        let neg = if self.eat_sym('-') {
            true
        } else {
            self.eat_sym('+');
            false
        };
        let col_err = self.expected("integer");
        match self.next() {
            Some(Tok::Num(s)) => {
                if s.contains('/') {
                    return Err(ParseError {
                        line: self.line,
                        col: self.toks[self.i - 1].1,
                        kind: ParseErrorKind::NonIntegerBound,
                    });
                }
                let v: i64 = s.parse().map_err(|_| ParseError {
                    line: self.line,
                    col: self.toks[self.i - 1].1,
                    kind: ParseErrorKind::NumberRange(s),
                })?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(col_err),
        }
    }

    /// Variable token `x<i>`, returned 0-based.
    fn variable(&mut self, n: usize) -> Result<usize, ParseError> {
        let col_err = self.expected("variable");
        let tok_col = self.col();
        match self.next() {
            Some(Tok::Ident(s)) => {
                let idx: Option<usize> = s
                    .strip_prefix('x')
                    .filter(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
                    .and_then(|rest| rest.parse().ok());
                match idx {
                    Some(i) if i >= 1 && i <= n => Ok(i - 1),
                    Some(i) => Err(ParseError {
                        line: self.line,
                        col: tok_col,
                        kind: ParseErrorKind::VariableOutOfRange {
                            var: i.wrapping_sub(1),
                            n,
                        },
                    }),
                    None => Err(ParseError {
                        line: self.line,
                        col: tok_col,
                        kind: ParseErrorKind::Expected { what: "variable", found: s },
                    }),
                }
            }
            _ => Err(col_err),
        }
    }
}

fn parse_rational_token(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.parse().ok()?;
            let q: i64 = q.parse().ok()?;
            if q == 0 {
                return None;
            }
            Some(BigRational::new(BigInt::from(p), BigInt::from(q)))
        }
        None => {
            let v: i64 = s.parse().ok()?;
            Some(BigRational::from_integer(BigInt::from(v)))
        }
    }
}

enum Item {
    Row(ExtRow),
    BoxLine { var: usize, lo: i64, hi: i64 },
}

/// Parse an instance file. Every structural problem is reported with its line
/// and column.
pub fn parse_instance(text: &str) -> Result<ParsedInstance, ParseError> {
    let mut n: Option<usize> = None;
    let mut objective: Option<Vec<Rational>> = None;
    let mut items: Vec<Item> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = tokenize(raw, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor { toks, i: 0, line: line_no };
        let head = match cur.next() {
            Some(Tok::Ident(s)) => s,
            _ => {
                cur.i -= 1;
                return Err(cur.expected("directive"));
            }
        };
        match head.as_str() {
            "vars" => {
                if n.is_some() {
                    return Err(cur.err(ParseErrorKind::DuplicateHeader("vars")));
                }
                if objective.is_some() || !items.is_empty() {
                    return Err(cur.err(ParseErrorKind::MissingHeader { missing: "vars" }));
                }
                let v = cur.signed_int()?;
                if v < 1 {
                    return Err(cur.err(ParseErrorKind::Model(ModelError::NoVariables)));
                }
                cur.finish()?;
                n = Some(v as usize);
            }
            "min" => {
                let n = n.ok_or_else(|| cur.err(ParseErrorKind::MissingHeader { missing: "vars" }))?;
                if objective.is_some() {
                    return Err(cur.err(ParseErrorKind::DuplicateHeader("min")));
                }
                objective = Some(parse_objective(&mut cur, n)?);
            }
            "c" => {
                let n = n.ok_or_else(|| cur.err(ParseErrorKind::MissingHeader { missing: "vars" }))?;
                if objective.is_none() {
                    return Err(cur.err(ParseErrorKind::MissingHeader { missing: "min" }));
                }
                if !cur.eat_sym(':') {
                    return Err(cur.expected("`:`"));
                }
                items.push(Item::Row(parse_row(&mut cur, n)?));
            }
            "box" => {
                let n = n.ok_or_else(|| cur.err(ParseErrorKind::MissingHeader { missing: "vars" }))?;
                if objective.is_none() {
                    return Err(cur.err(ParseErrorKind::MissingHeader { missing: "min" }));
                }
                let var = cur.variable(n)?;
                let lo = cur.signed_int()?;
                let hi = cur.signed_int()?;
                if lo > hi {
                    return Err(cur.err(ParseErrorKind::InvalidBox));
                }
                cur.finish()?;
                items.push(Item::BoxLine { var, lo, hi });
            }
            other => {
                cur.i -= 1;
                return Err(cur.err(ParseErrorKind::UnknownDirective(other.to_string())));
            }
        }
    }

    let last_line = text.lines().count().max(1);
    let fail = |missing| ParseError {
        line: last_line,
        col: 1,
        kind: ParseErrorKind::MissingHeader { missing },
    };
    let n = n.ok_or_else(|| fail("vars"))?;
    let objective = objective.ok_or_else(|| fail("min"))?;

    let utvpi_shaped = items.iter().all(|it| match it {
        Item::Row(r) => r.is_utvpi(),
        Item::BoxLine { .. } => true,
    });

    if utvpi_shaped {
        let mut inst = UtvpiInstance::new(n, objective)
            .map_err(|e| ParseError { line: 1, col: 1, kind: ParseErrorKind::Model(e) })?;
        let wrap = |e| ParseError { line: last_line, col: 1, kind: ParseErrorKind::Model(e) };
        for item in items {
            match item {
                Item::Row(r) => {
                    let c = constraint_from_ext_row(&r).map_err(wrap)?;
                    inst.add_constraint(c).map_err(wrap)?;
                }
                Item::BoxLine { var, lo, hi } => {
                    // Enumeration bounds become plain rows in the UTVPI fragment.
                    inst.add_constraint(UtvpiConstraint::unary(Sign::Plus, var, lo))
                        .map_err(wrap)?;
                    inst.add_constraint(UtvpiConstraint::unary(Sign::Minus, var, -hi))
                        .map_err(wrap)?;
                }
            }
        }
        Ok(ParsedInstance::Utvpi(inst))
    } else {
        let mut ext = ExtendedInstance::new(n, objective)
            .map_err(|e| ParseError { line: 1, col: 1, kind: ParseErrorKind::Model(e) })?;
        for item in items {
            match item {
                Item::Row(r) => ext.rows.push(r),
                Item::BoxLine { var, lo, hi } => ext.boxes[var] = Some((lo, hi)),
            }
        }
        Ok(ParsedInstance::Extended(ext))
    }
}

fn constraint_from_ext_row(r: &ExtRow) -> Result<UtvpiConstraint, ModelError> {
    let sign = |c: i64| if c >= 0 { Sign::Plus } else { Sign::Minus };
    match r.terms.as_slice() {
        [(c1, v1)] => Ok(UtvpiConstraint::unary(sign(*c1), *v1, r.bound)),
        [(c1, v1), (c2, v2)] => {
            UtvpiConstraint::binary(sign(*c1), *v1, sign(*c2), *v2, r.bound)
        }
        _ => unreachable!("caller checked the UTVPI shape"),
    }
}

fn parse_objective(cur: &mut Cursor, n: usize) -> Result<Vec<Rational>, ParseError> {
    let mut objective = vec![Rational::zero(); n];
    let mut seen = vec![false; n];
    let mut first = true;
    loop {
        let negate = if first {
            first = false;
            cur.eat_sym('-') || {
                cur.eat_sym('+');
                false
            }
        } else if cur.eat_sym('+') {
            false
        } else if cur.eat_sym('-') {
            true
        } else {
            return Err(cur.expected("`+` or `-`"));
        };
        // Term: `c*x<i>` or bare `x<i>` meaning coefficient 1.
        let coeff = match cur.peek() {
            Some(Tok::Num(_)) => {
                let c = cur.rational()?;
                if !cur.eat_sym('*') {
                    return Err(cur.expected("`*`"));
                }
                c
            }
            _ => Rational::from_integer(BigInt::from(1)),
        };
        let var = cur.variable(n)?;
        if seen[var] {
            return Err(cur.err(ParseErrorKind::DuplicateVariable { var }));
        }
        seen[var] = true;
        objective[var] = if negate { -coeff } else { coeff };
        if cur.at_end() {
            return Ok(objective);
        }
    }
}

fn parse_row(cur: &mut Cursor, n: usize) -> Result<ExtRow, ParseError> {
    let mut terms: Vec<(i64, usize)> = Vec::new();
    let mut first = true;
    loop {
        let negate = if first {
            first = false;
            cur.eat_sym('-') || {
                cur.eat_sym('+');
                false
            }
        } else if cur.eat_sym('+') {
            false
        } else if cur.eat_sym('-') {
            true
        } else {
            return Err(cur.expected("`+`, `-`, or `>=`"));
        };
        let mag = match cur.peek() {
            Some(Tok::Num(_)) => {
                let col = cur.col();
                let tok = match cur.next() {
                    Some(Tok::Num(s)) => s,
                    _ => unreachable!(),
                };
                if tok.contains('/') {
                    return Err(ParseError {
                        line: cur.line,
                        col,
                        kind: ParseErrorKind::Expected {
                            what: "integer coefficient",
                            found: tok,
                        },
                    });
                }
                let k: i64 = tok.parse().map_err(|_| ParseError {
                    line: cur.line,
                    col,
                    kind: ParseErrorKind::NumberRange(tok.clone()),
                })?;
                if !cur.eat_sym('*') {
                    return Err(cur.expected("`*`"));
                }
                k
            }
            _ => 1,
        };
        let var = cur.variable(n)?;
        if mag == 0 {
            return Err(cur.err(ParseErrorKind::ZeroCoefficient { var }));
        }
        if terms.iter().any(|&(_, v)| v == var) {
            return Err(cur.err(ParseErrorKind::DuplicateVariable { var }));
        }
        terms.push((if negate { -mag } else { mag }, var));
        if cur.peek() == Some(&Tok::Ge) {
            cur.next();
            let bound = cur.signed_int()?;
            cur.finish()?;
            return Ok(ExtRow { terms, bound });
        }
    }
}

fn write_rational(r: &Rational) -> String {
    r.to_string()
}

fn write_objective_line(objective: &[Rational]) -> String {
    let mut out = String::from("min ");
    for (j, w) in objective.iter().enumerate() {
        let mag = write_rational(&w.abs());
        if j == 0 {
            if w.is_negative() {
                out.push('-');
            }
        } else if w.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&format!("{}*x{}", mag, j + 1));
    }
    out
}

fn write_ext_row(r: &ExtRow) -> String {
    let mut out = String::from("c: ");
    for (i, &(c, v)) in r.terms.iter().enumerate() {
        let sign = if c < 0 { '-' } else { '+' };
        if i == 0 {
            out.push(sign);
        } else {
            out.push(' ');
            out.push(sign);
            out.push(' ');
        }
        if c.abs() != 1 {
            out.push_str(&format!("{}*", c.abs()));
        }
        out.push_str(&format!("x{}", v + 1));
    }
    out.push_str(&format!(" >= {}", r.bound));
    out
}

/// Canonical text form of an instance; `parse_instance` inverts it.
pub fn write_instance(inst: &ParsedInstance) -> String {
    match inst {
        ParsedInstance::Utvpi(i) => write_utvpi_instance(i),
        ParsedInstance::Extended(i) => write_extended_instance(i),
    }
}

pub fn write_utvpi_instance(inst: &UtvpiInstance) -> String {
    let mut out = format!("vars {}\n{}\n", inst.num_vars(), write_objective_line(inst.objective()));
    for c in inst.constraints() {
        let terms = c.terms().map(|(s, v)| (s.factor(), v)).collect();
        out.push_str(&write_ext_row(&ExtRow { terms, bound: c.bound() }));
        out.push('\n');
    }
    out
}

pub fn write_extended_instance(inst: &ExtendedInstance) -> String {
    let mut out = format!("vars {}\n{}\n", inst.n, write_objective_line(&inst.objective));
    for r in &inst.rows {
        out.push_str(&write_ext_row(r));
        out.push('\n');
    }
    for (j, b) in inst.boxes.iter().enumerate() {
        if let Some((lo, hi)) = b {
            out.push_str(&format!("box x{} {} {}\n", j + 1, lo, hi));
        }
    }
    out
}

/// Output encoding for solutions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Text,
    Json,
}

/// Either kind of solve outcome, for uniform writing.
#[derive(Clone, PartialEq, Debug)]
pub enum Solution {
    Lp(LpSolution),
    Ilp(IlpSolution),
}

enum SolutionView<'a> {
    Optimal { x: Vec<String>, value: &'a Rational },
    Infeasible,
    Unbounded,
}

fn view(sol: &Solution) -> SolutionView<'_> {
    match sol {
        Solution::Lp(LpSolution::Optimal(o)) => SolutionView::Optimal {
            x: o.x.iter().map(HalfInt::to_string).collect(),
            value: &o.value,
        },
        Solution::Ilp(IlpSolution::Optimal(o)) => SolutionView::Optimal {
            x: o.z.iter().map(i64::to_string).collect(),
            value: &o.value,
        },
        Solution::Lp(LpSolution::Infeasible) | Solution::Ilp(IlpSolution::Infeasible) => {
            SolutionView::Infeasible
        }
        Solution::Lp(LpSolution::Unbounded) | Solution::Ilp(IlpSolution::Unbounded) => {
            SolutionView::Unbounded
        }
    }
}

/// Render a solution as text lines or a single-line JSON object. Identical
/// inputs produce identical bytes.
pub fn write_solution(sol: &Solution, format: Format) -> String {
    match format {
        Format::Text => match view(sol) {
            SolutionView::Optimal { x, value } => {
                let mut out = String::from("status optimal");
                for (j, v) in x.iter().enumerate() {
                    out.push_str(&format!("\nx{} = {}", j + 1, v));
                }
                out.push_str(&format!("\nvalue = {}", value));
                out
            }
            SolutionView::Infeasible => "status infeasible".into(),
            SolutionView::Unbounded => "status unbounded".into(),
        },
        Format::Json => {
            let v = solution_json(sol);
            v.to_string()
        }
    }
}

/// JSON object mirroring the text form field for field.
pub fn solution_json(sol: &Solution) -> serde_json::Value {
    match view(sol) {
        SolutionView::Optimal { x, value } => serde_json::json!({
            "status": "optimal",
            "x": x,
            "value": value.to_string(),
        }),
        SolutionView::Infeasible => serde_json::json!({ "status": "infeasible" }),
        SolutionView::Unbounded => serde_json::json!({ "status": "unbounded" }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rat, ratio, IlpOptimum, LpOptimum};

    #[test]
    fn parses_two_var_extended_system() {
        let text = "vars 2\nmin 3*x1 + 1*x2\nc: 2*x1 + x2 >= 2\nc: -x2 >= -1\n";
        let parsed = parse_instance(text).unwrap();
        match parsed {
            ParsedInstance::Extended(ext) => {
                assert_eq!(ext.n, 2);
                assert_eq!(ext.objective, vec![rat(3), rat(1)]);
                assert_eq!(ext.rows.len(), 2);
                assert_eq!(ext.rows[0].terms, vec![(2, 0), (1, 1)]);
                assert_eq!(ext.rows[0].bound, 2);
                assert_eq!(ext.rows[1].terms, vec![(-1, 1)]);
                assert_eq!(ext.rows[1].bound, -1);
            }
            other => panic!("expected extended instance, got {other:?}"),
        }
    }

    #[test]
    fn parses_single_unary_row_as_utvpi() {
        let text = "vars 1\nmin 1*x1\nc: +x1 >= 3\n";
        let parsed = parse_instance(text).unwrap();
        match parsed {
            ParsedInstance::Utvpi(inst) => {
                assert_eq!(inst.num_vars(), 1);
                assert_eq!(inst.num_rows(), 1);
                assert_eq!(inst.constraints()[0].to_string(), "+x1 >= 3");
            }
            other => panic!("expected UTVPI instance, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_variable_in_row_is_an_error() {
        let text = "vars 2\nmin 1*x1 + 1*x2\nc: x1 + x1 >= 0\n";
        let err = parse_instance(text).unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.kind, ParseErrorKind::DuplicateVariable { var: 0 });
    }

    #[test]
    fn non_integer_bound_is_an_error() {
        let text = "vars 1\nmin 1*x1\nc: x1 >= 1/2\n";
        let err = parse_instance(text).unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.kind, ParseErrorKind::NonIntegerBound);
    }

    #[test]
    fn rational_objective_coefficients() {
        let text = "vars 2\nmin 1/2*x1 - 2/3*x2\n";
        let parsed = parse_instance(text).unwrap();
        assert_eq!(parsed.objective(), &[ratio(1, 2), ratio(-2, 3)]);
    }

    #[test]
    fn box_lines_become_rows_on_utvpi_files() {
        let text = "vars 1\nmin 1*x1\nbox x1 -2 5\n";
        match parse_instance(text).unwrap() {
            ParsedInstance::Utvpi(inst) => {
                let rows: Vec<String> =
                    inst.constraints().iter().map(|c| c.to_string()).collect();
                assert_eq!(rows, vec!["+x1 >= -2", "-x1 >= -5"]);
            }
            other => panic!("expected UTVPI instance, got {other:?}"),
        }
    }

    #[test]
    fn box_lines_stay_bounds_on_extended_files() {
        let text = "vars 2\nmin 1*x1 + 1*x2\nc: 2*x1 + x2 >= 2\nbox x2 0 1\n";
        match parse_instance(text).unwrap() {
            ParsedInstance::Extended(ext) => {
                assert_eq!(ext.rows.len(), 1);
                assert_eq!(ext.boxes, vec![None, Some((0, 1))]);
            }
            other => panic!("expected extended instance, got {other:?}"),
        }
    }

    #[test]
    fn three_term_row_marks_extended() {
        let text = "vars 3\nmin 3*x1 + 1*x2 + 0*x3\nc: x1 + x2 + x3 >= 2\n";
        assert!(matches!(parse_instance(text).unwrap(), ParsedInstance::Extended(_)));
    }

    #[test]
    fn headers_must_come_in_order() {
        let err = parse_instance("min 1*x1\nvars 1\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(matches!(err.kind, ParseErrorKind::MissingHeader { missing: "vars" }));
    }

    #[test]
    fn variable_out_of_range_is_reported_with_position() {
        let err = parse_instance("vars 2\nmin 1*x1 + 1*x2\nc: x3 >= 0\n").unwrap_err();
        assert_eq!((err.line, err.col), (3, 4));
        assert_eq!(err.kind, ParseErrorKind::VariableOutOfRange { var: 2, n: 2 });
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# heading\nvars 1\n\nmin 1*x1  # objective\nc: x1 >= 0 # row\n";
        assert!(matches!(parse_instance(text).unwrap(), ParsedInstance::Utvpi(_)));
    }

    #[test]
    fn round_trip_utvpi() {
        let text = "vars 2\nmin 3*x1 - 1/2*x2\nc: +x1 - x2 >= -1\nc: -x1 >= -4\n";
        let once = parse_instance(text).unwrap();
        let again = parse_instance(&write_instance(&once)).unwrap();
        assert_eq!(once, again);
    }

    #[test]
    fn round_trip_extended_with_boxes() {
        let text = "vars 2\nmin 3*x1 + 1*x2\nc: 2*x1 + x2 >= 2\nbox x1 0 2\nbox x2 0 2\n";
        let once = parse_instance(text).unwrap();
        let again = parse_instance(&write_instance(&once)).unwrap();
        assert_eq!(once, again);
    }

    #[test]
    fn writes_lp_solution_text() {
        let sol = Solution::Lp(LpSolution::Optimal(LpOptimum {
            x: vec![HalfInt::from_twice(1), HalfInt::from_twice(2), HalfInt::from_twice(1)],
            value: ratio(5, 2),
            certificate: None,
        }));
        assert_eq!(
            write_solution(&sol, Format::Text),
            "status optimal\nx1 = 1/2\nx2 = 1\nx3 = 1/2\nvalue = 5/2"
        );
    }

    #[test]
    fn writes_infeasible_and_unbounded() {
        assert_eq!(
            write_solution(&Solution::Ilp(IlpSolution::Infeasible), Format::Text),
            "status infeasible"
        );
        assert_eq!(
            write_solution(&Solution::Lp(LpSolution::Unbounded), Format::Text),
            "status unbounded"
        );
    }

    #[test]
    fn json_mirrors_text_fields() {
        let sol = Solution::Ilp(IlpSolution::Optimal(IlpOptimum {
            z: vec![1, 0, 1],
            value: rat(3),
        }));
        let js = write_solution(&sol, Format::Json);
        let v: serde_json::Value = serde_json::from_str(&js).unwrap();
        assert_eq!(v["status"], "optimal");
        assert_eq!(v["x"], serde_json::json!(["1", "0", "1"]));
        assert_eq!(v["value"], "3");
    }
}
