//! Declarative region fixtures: closed-form feasible-set descriptions in
//! a small predicate language, checked against constraint systems by
//! sampling.
//!
//! Fixture format (one file or string):
//!   - lines starting with `#` and blank lines are ignored;
//!   - every remaining line is one clause; the fixture is the OR of its
//!     clauses;
//!   - a clause is a list of atoms separated by `;`, combined with AND;
//!   - an atom is `expr OP expr` with OP one of `< <= > >= = !=`;
//!   - expressions use `+ - * / ^` (integer exponents), parentheses,
//!     decimal numbers, parameter names, and `sqrt(...)`.
//!
//! Built-in fixtures reproduce externally computed closed-form solutions
//! for the two-parameter vehicle system and a benchmark two-dimensional
//! semialgebraic set.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use libm::{fabs, pow, sqrt};

use crate::constraint::{ConstraintSystem, RelOp};
use crate::region::{CompiledSystem, RegionError};
use crate::rng::SplitMix64;

/// Fixture parse failure with a human-readable message.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureError(pub String);

impl core::fmt::Display for FixtureError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "fixture parse error: {}", self.0)
    }
}

/// Arithmetic expression over named parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sqrt(Box<Expr>),
}

impl Expr {
    /// Evaluate; missing parameters and negative square roots yield NaN,
    /// which makes every comparison false.
    pub fn eval(&self, vars: &BTreeMap<String, f64>) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(n) => vars.get(n).copied().unwrap_or(f64::NAN),
            Expr::Neg(e) => -e.eval(vars),
            Expr::Add(a, b) => a.eval(vars) + b.eval(vars),
            Expr::Sub(a, b) => a.eval(vars) - b.eval(vars),
            Expr::Mul(a, b) => a.eval(vars) * b.eval(vars),
            Expr::Div(a, b) => a.eval(vars) / b.eval(vars),
            Expr::Pow(a, e) => pow(a.eval(vars), *e as f64),
            Expr::Sqrt(a) => {
                let v = a.eval(vars);
                if v < 0.0 {
                    f64::NAN
                } else {
                    sqrt(v)
                }
            }
        }
    }
}

/// One comparison `lhs op rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub lhs: Expr,
    pub op: RelOp,
    pub rhs: Expr,
}

impl Atom {
    pub fn holds(&self, vars: &BTreeMap<String, f64>) -> bool {
        let l = self.lhs.eval(vars);
        let r = self.rhs.eval(vars);
        match self.op {
            RelOp::Lt => l < r,
            RelOp::Le => l <= r,
            RelOp::Gt => l > r,
            RelOp::Ge => l >= r,
            RelOp::Eq => l == r,
            RelOp::Ne => l != r,
        }
    }

    /// |lhs - rhs|, the distance to this atom's boundary.
    pub fn residual(&self, vars: &BTreeMap<String, f64>) -> f64 {
        fabs(self.lhs.eval(vars) - self.rhs.eval(vars))
    }
}

/// Disjunction of conjunctive clauses.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub clauses: Vec<Vec<Atom>>,
}

impl Fixture {
    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        let mut clauses = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut atoms = Vec::new();
            for part in line.split(';') {
                let atom = parse_atom(part.trim())
                    .map_err(|e| FixtureError(alloc::format!("line {}: {}", lineno + 1, e.0)))?;
                atoms.push(atom);
            }
            if atoms.is_empty() {
                return Err(FixtureError(alloc::format!("line {}: empty clause", lineno + 1)));
            }
            clauses.push(atoms);
        }
        if clauses.is_empty() {
            return Err(FixtureError("no clauses".to_string()));
        }
        Ok(Self { clauses })
    }

    pub fn eval(&self, vars: &BTreeMap<String, f64>) -> bool {
        self.clauses
            .iter()
            .any(|clause| clause.iter().all(|a| a.holds(vars)))
    }

    /// True when any atom of any clause has residual within `tol` — such
    /// points sit too close to a fixture boundary to compare reliably.
    pub fn near_boundary(&self, vars: &BTreeMap<String, f64>, tol: f64) -> bool {
        self.clauses
            .iter()
            .flatten()
            .any(|a| a.residual(vars) <= tol)
    }
}

/// Agreement statistics between a fixture and direct relation evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureAgreement {
    pub total: usize,
    pub excluded: usize,
    pub compared: usize,
    pub agree: usize,
    pub disagree: usize,
    /// agree / compared; 1.0 when nothing was comparable.
    pub ratio: f64,
}

/// Sample `n` seeded uniform points over the system's domain and compare
/// fixture membership with direct relation evaluation, excluding points
/// within `tol` of any fixture boundary.
pub fn cad_fixture_check(
    fixture: &Fixture,
    sys: &ConstraintSystem,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<FixtureAgreement, RegionError> {
    let compiled = CompiledSystem::new(sys)?;
    let names = compiled.names().to_vec();
    let mut rng = SplitMix64::new(seed);
    let mut point = alloc::vec![0.0; names.len()];
    let mut excluded = 0usize;
    let mut agree = 0usize;
    let mut disagree = 0usize;
    for _ in 0..n {
        compiled.sample_into(&mut rng, &mut point);
        let vars: BTreeMap<String, f64> = names
            .iter()
            .cloned()
            .zip(point.iter().copied())
            .collect();
        if fixture.near_boundary(&vars, tol) {
            excluded += 1;
            continue;
        }
        if fixture.eval(&vars) == compiled.feasible(&point) {
            agree += 1;
        } else {
            disagree += 1;
        }
    }
    let compared = agree + disagree;
    Ok(FixtureAgreement {
        total: n,
        excluded,
        compared,
        agree,
        disagree,
        ratio: if compared == 0 {
            1.0
        } else {
            agree as f64 / compared as f64
        },
    })
}

/// Closed-form feasible set of the two-parameter vehicle system
/// (degree-3 velocity curve {0, a1, a2, 1}, input bounds (0, 10)), as
/// computed offline by cylindrical algebraic decomposition.
pub const VEHICLE_TWO_PARAM_FIXTURE: &str = "\
# feasible (a1, a2) for the two-intermediate-point vehicle system
0 < a1 ; a1 <= 0.115563 ; 0 - a1 < a2 ; a2 < 1.33333
0.115563 < a1 ; a1 <= 0.376808 ; 0.142857 * (0 - 3*a1^2 + 2*a1 - 1) < a2 ; a2 < 1.33333
0.376808 < a1 ; a1 <= 1.52983 ; (4*a1 - 2) / (3*a1 + 4) < a2 ; a2 < 1.33333
1.52983 < a1 ; a1 < 2 ; 0.333333 * sqrt(15*a1 - 17) - 0.333333 < a2 ; a2 < 1.33333
";

/// Closed-form solution of the benchmark two-dimensional semialgebraic
/// set {f1 >= 0, .., f4 >= 0} used to cross-check against superlevel-set
/// approximations, as computed offline by CAD.
pub const PSS_EXAMPLE_FIXTURE: &str = "\
# exact region of the 2-D benchmark set
x1 = 0 - 5/8 ; x2 = 0 - 1/2
0 - 5/8 < x1 ; x1 < 0 - 1/6 ; 0 - 1/2 <= x2 ; x2 <= (0 - 8*x1^2 - 2*x1 - 1) / (2*(6*x1 + 1)) - 1/2 * sqrt((64*x1^4 - 160*x1^3 - 12*x1^2 + 28*x1 + 5) / (6*x1 + 1)^2)
x1 = 0 - 1/6 ; 0 - 1/2 <= x2 ; x2 <= 7/8
0 - 1/6 < x1 ; x1 < 1/2 ; 0 - 1/2 <= x2 ; x2 <= (0 - 8*x1^2 - 2*x1 - 1) / (2*(6*x1 + 1)) + 1/2 * sqrt((64*x1^4 - 160*x1^3 - 12*x1^2 + 28*x1 + 5) / (6*x1 + 1)^2)
x1 = 1/2 ; x2 = 0 - 1/2
";

// ---- expression parsing ------------------------------------------------

fn parse_atom(s: &str) -> Result<Atom, FixtureError> {
    // two-character operators first so "<=" does not split as "<"
    for op_text in ["<=", ">=", "!=", "<", ">", "="] {
        if let Some(pos) = find_op(s, op_text) {
            let lhs = parse_expr(&s[..pos])?;
            let rhs = parse_expr(&s[pos + op_text.len()..])?;
            let op = RelOp::parse(op_text).expect("known operator");
            return Ok(Atom { lhs, op, rhs });
        }
    }
    Err(FixtureError(alloc::format!("no relational operator in '{s}'")))
}

/// Find a relational operator at paren depth zero.
fn find_op(s: &str, op: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    let mut i = 0;
    while i + op.len() <= bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && s[i..].starts_with(op) {
            // reject "<" inside "<=" when scanning for "<"
            let after = bytes.get(i + op.len());
            if op.len() == 1 && matches!(after, Some(b'=')) && (op == "<" || op == ">" || op == "=")
            {
                i += 1;
                continue;
            }
            return Some(i);
        }
        i += 1;
    }
    None
}

struct Tokens<'a> {
    rest: &'a str,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

impl<'a> Tokens<'a> {
    fn new(s: &'a str) -> Self {
        Self { rest: s.trim() }
    }

    fn peek(&self) -> Option<Tok> {
        self.clone_peek().map(|(t, _)| t)
    }

    fn next_tok(&mut self) -> Option<Tok> {
        match self.clone_peek() {
            Some((t, rest)) => {
                self.rest = rest;
                Some(t)
            }
            None => None,
        }
    }

    fn clone_peek(&self) -> Option<(Tok, &'a str)> {
        let s = self.rest.trim_start();
        let mut chars = s.chars();
        let c = chars.next()?;
        if c.is_ascii_digit() || c == '.' {
            let end = s
                .find(|ch: char| !(ch.is_ascii_digit() || ch == '.'))
                .unwrap_or(s.len());
            let v: f64 = s[..end].parse().ok()?;
            Some((Tok::Num(v), &s[end..]))
        } else if c.is_ascii_alphabetic() || c == '_' {
            let end = s
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(s.len());
            Some((Tok::Ident(s[..end].to_string()), &s[end..]))
        } else {
            Some((Tok::Sym(c), &s[c.len_utf8()..]))
        }
    }

    fn done(&self) -> bool {
        self.rest.trim().is_empty()
    }
}

fn parse_expr(s: &str) -> Result<Expr, FixtureError> {
    let mut toks = Tokens::new(s);
    let e = parse_sum(&mut toks)?;
    if !toks.done() {
        return Err(FixtureError(alloc::format!(
            "trailing input '{}' in '{s}'",
            toks.rest.trim()
        )));
    }
    Ok(e)
}

fn parse_sum(t: &mut Tokens) -> Result<Expr, FixtureError> {
    let mut acc = parse_product(t)?;
    while let Some(Tok::Sym(c @ ('+' | '-'))) = t.peek() {
        t.next_tok();
        let rhs = parse_product(t)?;
        acc = if c == '+' {
            Expr::Add(Box::new(acc), Box::new(rhs))
        } else {
            Expr::Sub(Box::new(acc), Box::new(rhs))
        };
    }
    Ok(acc)
}

fn parse_product(t: &mut Tokens) -> Result<Expr, FixtureError> {
    let mut acc = parse_factor(t)?;
    while let Some(Tok::Sym(c @ ('*' | '/'))) = t.peek() {
        t.next_tok();
        let rhs = parse_factor(t)?;
        acc = if c == '*' {
            Expr::Mul(Box::new(acc), Box::new(rhs))
        } else {
            Expr::Div(Box::new(acc), Box::new(rhs))
        };
    }
    Ok(acc)
}

fn parse_factor(t: &mut Tokens) -> Result<Expr, FixtureError> {
    if let Some(Tok::Sym('-')) = t.peek() {
        t.next_tok();
        let inner = parse_factor(t)?;
        return Ok(Expr::Neg(Box::new(inner)));
    }
    let mut base = parse_primary(t)?;
    if let Some(Tok::Sym('^')) = t.peek() {
        t.next_tok();
        match t.next_tok() {
            Some(Tok::Num(v)) if v >= 0.0 && libm::floor(v) == v && v <= u32::MAX as f64 => {
                base = Expr::Pow(Box::new(base), v as u32);
            }
            other => {
                return Err(FixtureError(alloc::format!(
                    "exponent must be a nonnegative integer, got {other:?}"
                )))
            }
        }
    }
    Ok(base)
}

fn parse_primary(t: &mut Tokens) -> Result<Expr, FixtureError> {
    match t.next_tok() {
        Some(Tok::Num(v)) => Ok(Expr::Num(v)),
        Some(Tok::Ident(name)) => {
            if name == "sqrt" {
                expect_sym(t, '(')?;
                let inner = parse_sum(t)?;
                expect_sym(t, ')')?;
                Ok(Expr::Sqrt(Box::new(inner)))
            } else {
                Ok(Expr::Var(name))
            }
        }
        Some(Tok::Sym('(')) => {
            let inner = parse_sum(t)?;
            expect_sym(t, ')')?;
            Ok(inner)
        }
        other => Err(FixtureError(alloc::format!("unexpected token {other:?}"))),
    }
}

fn expect_sym(t: &mut Tokens, c: char) -> Result<(), FixtureError> {
    match t.next_tok() {
        Some(Tok::Sym(s)) if s == c => Ok(()),
        other => Err(FixtureError(alloc::format!("expected '{c}', got {other:?}"))),
    }
}
