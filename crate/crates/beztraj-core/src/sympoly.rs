//! Exact multivariate polynomial ring over named design parameters.
//!
//! `PolyExpr` is the coefficient ring of the symbolic Bezier pipeline: after
//! pushing a symbolic flat-output curve through the flatness maps, every
//! state/input control point is a `PolyExpr` in the free output control
//! points. Coefficients are exact big rationals; floats never enter.
//!
//! The canonical textual rendering (and its parser) is the wire form used
//! by the constraint-system JSON schema.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::coeff::{rat_to_f64, Coeff, Rat};
use crate::interval::Interval;

/// Errors from evaluation and parsing.
#[derive(Debug, Clone, PartialEq)]
pub enum PolyError {
    /// Evaluation with unbound parameters; carries the missing names.
    Unbound(Vec<String>),
    /// Malformed canonical text.
    Parse(String),
}

impl core::fmt::Display for PolyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PolyError::Unbound(names) => write!(f, "unbound parameters: {}", names.join(", ")),
            PolyError::Parse(msg) => write!(f, "polynomial parse error: {msg}"),
        }
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Canonical form: parameters sorted by name, no zero terms, no parameter
/// that appears in no term. Equality is equality of canonical term maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyExpr {
    params: Vec<String>,
    /// exponent vector (aligned with `params`) -> coefficient
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl PolyExpr {
    pub fn zero() -> Self {
        Self {
            params: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self {
            params: Vec::new(),
            terms,
        }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Rat::one());
        Self {
            params: vec![name.to_string()],
            terms,
        }
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Iterate (exponent vector aligned with `params`, coefficient).
    pub fn terms_iter(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The constant value, if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<Rat> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .values()
                .next()
                .cloned()
                .unwrap_or_else(Rat::zero),
        )
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Drop zero coefficients and parameters that no term uses.
    fn normalize(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..self.params.len())
            .map(|i| self.terms.keys().any(|e| e.get(i).copied().unwrap_or(0) > 0))
            .collect();
        if used.iter().all(|&u| u) {
            return self;
        }
        let keep: Vec<usize> = (0..self.params.len()).filter(|&i| used[i]).collect();
        let params: Vec<String> = keep.iter().map(|&i| self.params[i].clone()).collect();
        let terms = self
            .terms
            .into_iter()
            .map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), c))
            .collect();
        Self { params, terms }
    }

    /// Remap both operands onto the union of their parameter spaces.
    fn aligned(&self, other: &Self) -> (Vec<String>, BTreeMap<Vec<u32>, Rat>, BTreeMap<Vec<u32>, Rat>) {
        let mut params: Vec<String> = self.params.clone();
        for p in &other.params {
            if !params.contains(p) {
                params.push(p.clone());
            }
        }
        params.sort();
        let remap = |poly: &Self| -> BTreeMap<Vec<u32>, Rat> {
            let idx: Vec<usize> = poly
                .params
                .iter()
                .map(|p| params.iter().position(|q| q == p).expect("union"))
                .collect();
            poly.terms
                .iter()
                .map(|(e, c)| {
                    let mut ne = vec![0u32; params.len()];
                    for (k, &exp) in e.iter().enumerate() {
                        ne[idx[k]] = exp;
                    }
                    (ne, c.clone())
                })
                .collect()
        };
        let a = remap(self);
        let b = remap(other);
        (params, a, b)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (params, mut a, b) = self.aligned(other);
        for (e, c) in b {
            let entry = a.entry(e).or_insert_with(Rat::zero);
            *entry += c;
        }
        Self { params, terms: a }.normalize()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (params, a, b) = self.aligned(other);
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = terms.entry(e).or_insert_with(Rat::zero);
                *entry += ca * cb;
            }
        }
        Self { params, terms }.normalize()
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Exact evaluation; every parameter must be bound.
    pub fn substitute(&self, bindings: &BTreeMap<String, Rat>) -> Result<Rat, PolyError> {
        let missing: Vec<String> = self
            .params
            .iter()
            .filter(|p| !bindings.contains_key(*p))
            .cloned()
            .collect();
        if !missing.is_empty() {
            return Err(PolyError::Unbound(missing));
        }
        let vals: Vec<&Rat> = self.params.iter().map(|p| &bindings[p]).collect();
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term *= vals[i];
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Substitute a subset of parameters, leaving the rest symbolic.
    pub fn substitute_partial(&self, bindings: &BTreeMap<String, Rat>) -> Self {
        let mut acc = Self::zero();
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut residual = Self::constant(Rat::one());
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let name = &self.params[i];
                if let Some(v) = bindings.get(name) {
                    for _ in 0..exp {
                        coeff *= v;
                    }
                } else {
                    let mut var_pow = Self::var(name);
                    for _ in 1..exp {
                        var_pow = var_pow.mul(&Self::var(name));
                    }
                    residual = residual.mul(&var_pow);
                }
            }
            acc = acc.add(&residual.scale(&coeff));
        }
        acc
    }

    /// Sound interval enclosure over a parameter box, term-wise with exact
    /// monomial range rules.
    pub fn interval_eval(
        &self,
        boxes: &BTreeMap<String, (f64, f64)>,
    ) -> Result<Interval, PolyError> {
        let missing: Vec<String> = self
            .params
            .iter()
            .filter(|p| !boxes.contains_key(*p))
            .cloned()
            .collect();
        if !missing.is_empty() {
            return Err(PolyError::Unbound(missing));
        }
        let ivs: Vec<Interval> = self
            .params
            .iter()
            .map(|p| {
                let (lo, hi) = boxes[p];
                Interval::new(lo, hi)
            })
            .collect();
        let mut acc = Interval::point(0.0);
        for (e, c) in &self.terms {
            let mut term = Interval::around(rat_to_f64(c));
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    term = term.mul(ivs[i].pow(exp));
                }
            }
            acc = acc.add(term);
        }
        Ok(acc)
    }

    /// Canonical text form, e.g. `4/7*a1^2 - 5/7*a1 + 1/14`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        // descending graded-lex order over the sorted parameter names
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (k, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            let coeff_is_one = mag.is_one();
            let has_vars = e.iter().any(|&x| x > 0);
            if !coeff_is_one || !has_vars {
                factors.push(render_rat(&mag));
            }
            for (i, &exp) in e.iter().enumerate() {
                if exp == 1 {
                    factors.push(self.params[i].clone());
                } else if exp > 1 {
                    factors.push(alloc::format!("{}^{}", self.params[i], exp));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parse the canonical text form produced by [`PolyExpr::render`].
    pub fn parse(input: &str) -> Result<Self, PolyError> {
        let s = input.trim();
        if s.is_empty() {
            return Err(PolyError::Parse("empty input".to_string()));
        }
        let mut acc = Self::zero();
        let mut rest = s;
        let mut sign = Rat::one();
        // leading sign
        if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
        }
        loop {
            let (term, tail) = split_term(rest);
            let t = parse_term(term.trim())?;
            acc = acc.add(&t.scale(&sign));
            match tail {
                None => break,
                Some((next_sign, tail)) => {
                    sign = if next_sign { -Rat::one() } else { Rat::one() };
                    rest = tail.trim_start();
                    if rest.is_empty() {
                        return Err(PolyError::Parse("dangling operator".to_string()));
                    }
                }
            }
        }
        Ok(acc)
    }
}

fn render_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        alloc::format!("{}", r.numer())
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

/// Split off the first term; returns the remainder with the sign of the
/// following operator, if any.
fn split_term(s: &str) -> (&str, Option<(bool, &str)>) {
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            // operators are always space-separated in canonical form; also
            // accept tight forms as long as the minus is not an exponent sign
            let prev = s[..i].chars().next_back().unwrap();
            if prev == '^' || prev == '*' || prev == '/' {
                continue;
            }
            return (&s[..i], Some((ch == '-', &s[i + 1..])));
        }
    }
    (s, None)
}

fn parse_term(s: &str) -> Result<PolyExpr, PolyError> {
    if s.is_empty() {
        return Err(PolyError::Parse("empty term".to_string()));
    }
    let mut acc = PolyExpr::constant(Rat::one());
    for factor in s.split('*') {
        let f = factor.trim();
        if f.is_empty() {
            return Err(PolyError::Parse("empty factor".to_string()));
        }
        let first = f.chars().next().unwrap();
        if first.is_ascii_digit() {
            acc = acc.mul(&PolyExpr::constant(parse_rat(f)?));
        } else if first.is_ascii_alphabetic() || first == '_' {
            let (name, exp) = match f.split_once('^') {
                Some((n, e)) => {
                    let exp: u32 = e
                        .trim()
                        .parse()
                        .map_err(|_| PolyError::Parse(alloc::format!("bad exponent in '{f}'")))?;
                    (n.trim(), exp)
                }
                None => (f, 1),
            };
            if !name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(PolyError::Parse(alloc::format!("bad parameter name '{name}'")));
            }
            let mut v = PolyExpr::constant(Rat::one());
            for _ in 0..exp {
                v = v.mul(&PolyExpr::var(name));
            }
            acc = acc.mul(&v);
        } else {
            return Err(PolyError::Parse(alloc::format!("bad factor '{f}'")));
        }
    }
    Ok(acc)
}

fn parse_rat(s: &str) -> Result<Rat, PolyError> {
    let parse_int = |t: &str| -> Result<num_bigint::BigInt, PolyError> {
        t.trim()
            .parse()
            .map_err(|_| PolyError::Parse(alloc::format!("bad number '{t}'")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(PolyError::Parse("zero denominator".to_string()));
            }
            Ok(Rat::new(parse_int(n)?, den))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

impl Coeff for PolyExpr {
    fn coeff_zero() -> Self {
        PolyExpr::zero()
    }
    fn add(&self, other: &Self) -> Self {
        PolyExpr::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        PolyExpr::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        PolyExpr::mul(self, other)
    }
    fn mul_rat(&self, r: &Rat) -> Self {
        self.scale(r)
    }
    fn coeff_is_zero(&self) -> bool {
        PolyExpr::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, rat_int};

    fn bind(pairs: &[(&str, Rat)]) -> BTreeMap<String, Rat> {
        pairs
            .iter()
            .map(|(n, v)| (n.to_string(), v.clone()))
            .collect()
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = PolyExpr::var("a1");
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let a1 = PolyExpr::var("a1");
        let one = PolyExpr::constant(Rat::one());
        let p = a1.add(&one).mul(&a1.sub(&one));
        let expect = a1.mul(&a1).sub(&one);
        assert_eq!(p, expect);
    }

    #[test]
    fn hand_expansion() {
        // (2 a1 + 3 a2) * a1 = 2 a1^2 + 3 a1 a2
        let a1 = PolyExpr::var("a1");
        let a2 = PolyExpr::var("a2");
        let p = a1.scale(&rat_int(2)).add(&a2.scale(&rat_int(3))).mul(&a1);
        let expect = a1
            .mul(&a1)
            .scale(&rat_int(2))
            .add(&a1.mul(&a2).scale(&rat_int(3)));
        assert_eq!(p, expect);
    }

    #[test]
    fn substitution_examples() {
        let a1 = PolyExpr::var("a1");
        let p = a1.mul(&a1).sub(&PolyExpr::constant(Rat::one()));
        assert_eq!(
            p.substitute(&bind(&[("a1", rat_int(1))])).unwrap(),
            rat_int(0)
        );

        let q = PolyExpr::var("a1").scale(&rat_int(4));
        assert_eq!(
            q.substitute(&bind(&[("a1", rat_int(2))])).unwrap(),
            rat_int(8)
        );

        // 5 - 4 a3 at a3 = 1.3 -> -0.2
        let r = PolyExpr::constant(rat_int(5)).sub(&PolyExpr::var("a3").scale(&rat_int(4)));
        assert_eq!(
            r.substitute(&bind(&[("a3", rat(13, 10))])).unwrap(),
            rat(-1, 5)
        );
    }

    #[test]
    fn unbound_parameter_reported() {
        let p = PolyExpr::var("a1").add(&PolyExpr::var("a2"));
        match p.substitute(&bind(&[("a1", rat_int(0))])) {
            Err(PolyError::Unbound(names)) => assert_eq!(names, ["a2"]),
            other => panic!("expected unbound error, got {other:?}"),
        }
    }

    #[test]
    fn partial_substitution() {
        // (a1 + a2)^2 with a1 = 1 -> a2^2 + 2 a2 + 1
        let p = PolyExpr::var("a1").add(&PolyExpr::var("a2"));
        let sq = p.mul(&p);
        let sub = sq.substitute_partial(&bind(&[("a1", rat_int(1))]));
        let a2 = PolyExpr::var("a2");
        let expect = a2
            .mul(&a2)
            .add(&a2.scale(&rat_int(2)))
            .add(&PolyExpr::constant(Rat::one()));
        assert_eq!(sub, expect);
    }

    #[test]
    fn interval_linear_and_square() {
        let a1 = PolyExpr::var("a1");
        let iv = a1
            .interval_eval(&[("a1".to_string(), (0.0, 2.0))].into_iter().collect())
            .unwrap();
        assert!(iv.lo <= 0.0 && iv.hi >= 2.0 && iv.width() < 2.0 + 1e-9);

        let sq = a1.mul(&a1);
        let iv = sq
            .interval_eval(&[("a1".to_string(), (-1.0, 2.0))].into_iter().collect())
            .unwrap();
        // even-power rule: [0, 4], not [-2, 4]
        assert!(iv.lo >= -1e-12 && iv.hi <= 4.0 + 1e-9);

        let lin = a1.scale(&rat_int(4));
        let iv = lin
            .interval_eval(&[("a1".to_string(), (0.0, 0.1))].into_iter().collect())
            .unwrap();
        assert!(iv.lo <= 0.0 && iv.hi >= 0.4 - 1e-12 && iv.hi <= 0.4 + 1e-9);
    }

    #[test]
    fn render_parse_round_trip() {
        let a1 = PolyExpr::var("a1");
        let a2 = PolyExpr::var("a2");
        let p = a1
            .mul(&a1)
            .scale(&rat(4, 7))
            .sub(&a1.scale(&rat(5, 7)))
            .add(&a2.scale(&rat(12, 7)))
            .add(&PolyExpr::constant(rat(1, 14)));
        let text = p.render();
        let back = PolyExpr::parse(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn render_zero_and_constants() {
        assert_eq!(PolyExpr::zero().render(), "0");
        assert_eq!(PolyExpr::parse("0").unwrap(), PolyExpr::zero());
        assert_eq!(PolyExpr::constant(rat(-3, 2)).render(), "-3/2");
        assert_eq!(
            PolyExpr::parse("-3/2").unwrap(),
            PolyExpr::constant(rat(-3, 2))
        );
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(PolyExpr::parse("").is_err());
        assert!(PolyExpr::parse("a1 +").is_err());
        assert!(PolyExpr::parse("1/0").is_err());
        assert!(PolyExpr::parse("3 * $x").is_err());
    }
}
