//! Sparse polynomials in the four variables `t, x, y, z`.
//!
//! Every polynomial this crate produces lives in `Z[t, x, y, z]` and is stored
//! as a [`MultiPoly`]. Rational coefficients ([`RatPoly`]) only show up
//! transiently, when a variable is replaced by a rational constant.
//!
//! Terms are kept in a map from exponent vectors to coefficients and the map
//! never holds a zero coefficient, so structural equality is polynomial
//! equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the four indeterminates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T,
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::T, Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        match self {
            Var::T => 't',
            Var::X => 'x',
            Var::Y => 'y',
            Var::Z => 'z',
        }
    }

    fn from_char(c: char) -> Option<Var> {
        match c {
            't' => Some(Var::T),
            'x' => Some(Var::X),
            'y' => Some(Var::Y),
            'z' => Some(Var::Z),
            _ => None,
        }
    }
}

/// Exponents of `(t, x, y, z)` in that order.
pub type Exponents = [u32; 4];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("degree {degree} in x exceeds reflection bound {bound}")]
    DegreeExceeds { degree: u32, bound: u32 },
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Coefficient ring. Both `BigInt` and `BigRational` qualify.
pub trait Coefficient: Clone + Num + Signed + fmt::Display {}

impl<C: Clone + Num + Signed + fmt::Display> Coefficient for C {}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<C> {
    terms: BTreeMap<Exponents, C>,
}

/// Integer-coefficient polynomial; the value type of every digraph polynomial.
pub type MultiPoly = Polynomial<BigInt>;
/// Rational-coefficient polynomial, produced by constant substitution.
pub type RatPoly = Polynomial<BigRational>;

/// Exact rational evaluation point for `(t, x, y, z)`.
pub type Point = [BigRational; 4];

/// Builds an evaluation point from integer numerator/denominator pairs.
pub fn point(t: (i64, i64), x: (i64, i64), y: (i64, i64), z: (i64, i64)) -> Point {
    let r = |(n, d): (i64, i64)| BigRational::new(BigInt::from(n), BigInt::from(d));
    [r(t), r(x), r(y), r(z)]
}

/// Graded-lex ordering, highest term first: total degree descending, then
/// exponents compared lexicographically in `t > x > y > z` order.
fn graded_lex(a: &Exponents, b: &Exponents) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl<C: Coefficient> Default for Polynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 4];
        e[v.index()] = 1;
        Self::monomial(e, C::one())
    }

    pub fn monomial(exps: Exponents, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    /// Sums the given terms; repeated exponents accumulate.
    pub fn from_terms<I: IntoIterator<Item = (Exponents, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exps: Exponents, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                *existing = existing.clone() + c;
                if existing.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    /// Terms in graded-lex order, leading term first.
    pub fn graded_terms(&self) -> Vec<(&Exponents, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| graded_lex(a.0, b.0));
        v
    }

    pub fn coeff(&self, exps: &Exponents) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (*e, k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Highest exponent of `v` over all terms; 0 for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.index()]).max().unwrap_or(0)
    }

    /// Minimum exponent of `v` over all terms; 0 for the zero polynomial.
    pub fn min_degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.index()]).min().unwrap_or(0)
    }

    /// Coefficient extraction `[v^k] p`: the terms whose exponent of `v` is
    /// exactly `k`, with `v` removed.
    pub fn coeff_of(&self, v: Var, k: u32) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[v.index()] == k)
                .map(|(e, c)| {
                    let mut e = *e;
                    e[v.index()] = 0;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Reflects x-exponents, `k -> n - k`. Equivalent to `x^n p(1/x)`.
    pub fn reverse_in_x(&self, n: u32) -> Result<Self, PolyError> {
        let degree = self.degree_in(Var::X);
        if degree > n {
            return Err(PolyError::DegreeExceeds { degree, bound: n });
        }
        Ok(Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    e[Var::X.index()] = n - e[Var::X.index()];
                    (e, c.clone())
                })
                .collect(),
        })
    }

    /// Exact evaluation by direct term summation.
    pub fn eval(&self, at: &[C; 4]) -> C {
        let mut total = C::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (v, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term * at[v].clone();
                }
            }
            total = total + term;
        }
        total
    }

    /// Replaces `v` by the constant `value`, keeping the other variables.
    pub fn substitute(&self, v: Var, value: &C) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut e = *e;
            let k = std::mem::take(&mut e[v.index()]);
            let mut c = c.clone();
            for _ in 0..k {
                c = c * value.clone();
            }
            out.add_term(e, c);
        }
        out
    }

    /// Exchanges the roles of two variables.
    pub fn swap_vars(&self, a: Var, b: Var) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    e.swap(a.index(), b.index());
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Multiplies by the monomial with the given exponents.
    pub fn shift(&self, by: &Exponents) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    for i in 0..4 {
                        e[i] += by[i];
                    }
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Every term's exponent of `v` is at least 1.
    pub fn divisible_by_var(&self, v: Var) -> bool {
        self.terms.keys().all(|e| e[v.index()] >= 1)
    }
}

impl MultiPoly {
    pub fn from_i64(c: i64) -> Self {
        Self::constant(BigInt::from(c))
    }

    pub fn to_rational(&self) -> RatPoly {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, BigRational::from_integer(c.clone())))
                .collect(),
        }
    }

    /// Replaces `v` by a rational constant; coefficients become rational.
    pub fn substitute_const(&self, v: Var, value: &BigRational) -> RatPoly {
        self.to_rational().substitute(v, value)
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, at: &Point) -> BigRational {
        self.to_rational().eval(at)
    }

    /// The falling factorial `x(x-1)...(x-i+1)`, built by repeated
    /// multiplication with `(x - j)`.
    pub fn falling_factorial(i: u32) -> Self {
        let x = Self::var(Var::X);
        let mut acc = Self::one();
        for j in 0..i {
            acc = &acc * &(&x - &Self::from_i64(j as i64));
        }
        acc
    }

    /// Machine-readable term list in graded-lex order.
    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.graded_terms()
            .into_iter()
            .map(|(e, c)| TermJson {
                t: e[0],
                x: e[1],
                y: e[2],
                z: e[3],
                c: c.to_string(),
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json_terms()).expect("term list serializes")
    }

    /// Compact JSON text with keys in `t, x, y, z, c` order.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json_terms()).expect("term list serializes")
    }

    pub fn from_json_terms(terms: &[TermJson]) -> Result<Self, PolyError> {
        let mut p = Self::zero();
        for t in terms {
            let c = BigInt::from_str(&t.c)
                .map_err(|_| PolyError::Parse(format!("bad coefficient {:?}", t.c)))?;
            p.add_term([t.t, t.x, t.y, t.z], c);
        }
        Ok(p)
    }

    pub fn from_json(text: &str) -> Result<Self, PolyError> {
        let terms: Vec<TermJson> =
            serde_json::from_str(text).map_err(|e| PolyError::Parse(e.to_string()))?;
        Self::from_json_terms(&terms)
    }

    /// LaTeX rendering, graded-lex order, e.g. `x^{3} - 3x^{2} + 2x`.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.graded_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mag = c.abs();
            let mono = monomial_string(e, true);
            if mono.is_empty() || !mag.is_one() {
                out.push_str(&mag.to_string());
            }
            out.push_str(&mono);
        }
        out
    }
}

/// One term of the JSON rendering; the coefficient is a decimal string so
/// that arbitrarily large values survive any JSON reader.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub t: u32,
    pub x: u32,
    pub y: u32,
    pub z: u32,
    pub c: String,
}

fn monomial_string(e: &Exponents, latex: bool) -> String {
    let mut s = String::new();
    for v in Var::ALL {
        match e[v.index()] {
            0 => {}
            1 => s.push(v.name()),
            k if latex => s.push_str(&format!("{}^{{{}}}", v.name(), k)),
            k => s.push_str(&format!("{}^{}", v.name(), k)),
        }
    }
    s
}

/// Plain-text rendering: graded-lex order, no multiplication signs,
/// e.g. `x^2+2xy+y^2+yz+2z`.
impl<C: Coefficient> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.graded_terms().into_iter().enumerate() {
            if c.is_negative() {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            let mag = c.abs();
            let mono = monomial_string(e, false);
            if mono.is_empty() || !mag.is_one() {
                write!(f, "{}", mag)?;
            }
            f.write_str(&mono)?;
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

/// Parses the plain-text rendering. Accepts optional `*` and whitespace, so
/// `2*x^2*y - 3` and `2x^2y-3` are the same polynomial.
impl FromStr for MultiPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(PolyError::Parse("empty input".into()));
        }
        let err = |pos: usize, msg: &str| PolyError::Parse(format!("{} at offset {}", msg, pos));
        let read_int = |pos: &mut usize| -> Option<String> {
            let start = *pos;
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
            (start < *pos).then(|| chars[start..*pos].iter().collect())
        };

        let mut p = MultiPoly::zero();
        let mut pos = 0;
        while pos < chars.len() {
            let mut negative = false;
            if chars[pos] == '+' || chars[pos] == '-' {
                negative = chars[pos] == '-';
                pos += 1;
            } else if pos > 0 {
                return Err(err(pos, "expected '+' or '-'"));
            }
            let mut coeff = match read_int(&mut pos) {
                Some(d) => BigInt::from_str(&d).map_err(|_| err(pos, "bad integer"))?,
                None => BigInt::one(),
            };
            let mut exps = [0u32; 4];
            let mut factors = 0;
            loop {
                if pos < chars.len() && chars[pos] == '*' {
                    pos += 1;
                }
                let Some(v) = chars.get(pos).copied().and_then(Var::from_char) else {
                    break;
                };
                pos += 1;
                let mut k = 1;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    let d = read_int(&mut pos).ok_or_else(|| err(pos, "expected exponent"))?;
                    k = d.parse().map_err(|_| err(pos, "exponent too large"))?;
                }
                exps[v.index()] += k;
                factors += 1;
            }
            if factors == 0 && pos > 0 && !chars[pos - 1].is_ascii_digit() {
                return Err(err(pos, "expected coefficient or variable"));
            }
            if negative {
                coeff = -coeff;
            }
            p.add_term(exps, coeff);
            if pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
                return Err(err(pos, &format!("unexpected {:?}", chars[pos])));
            }
        }
        Ok(p)
    }
}

impl<C: Coefficient> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: Self) -> Polynomial<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Coefficient> Add for Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(mut self, rhs: Self) -> Polynomial<C> {
        self += &rhs;
        self
    }
}

impl<C: Coefficient> AddAssign<&Polynomial<C>> for Polynomial<C> {
    fn add_assign(&mut self, rhs: &Polynomial<C>) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<C: Coefficient> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl<C: Coefficient> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

impl<C: Coefficient> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Self) -> Polynomial<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Self) -> Polynomial<C> {
        &self - &rhs
    }
}

impl<C: Coefficient> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Polynomial<C> {
        let mut out = Polynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coefficient> Mul for Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Polynomial<C> {
        &self * &rhs
    }
}

/// Shorthand used throughout the crate and its tests: `poly("x^2+2xy")`.
///
/// Panics on malformed input, so only use it with literals.
pub fn poly(s: &str) -> MultiPoly {
    s.parse()
        .unwrap_or_else(|e| panic!("invalid polynomial literal {:?}: {}", s, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&poly("x+y") + &poly("x-y"), poly("2x"));
        assert_eq!(&poly("x+y") * &poly("x-y"), poly("x^2-y^2"));
        assert!((&MultiPoly::zero() * &poly("x+3z")).is_zero());
        assert_eq!(poly("x+y").scale(&BigInt::from(0)), MultiPoly::zero());
    }

    #[test]
    fn coefficient_extraction() {
        assert_eq!(poly("1+x^2y").coeff_of(Var::Y, 1), poly("x^2"));
        assert_eq!(poly("1+2xy").coeff_of(Var::Y, 1), poly("2x"));
        assert_eq!(poly("1+xy").coeff_of(Var::Y, 0), poly("1"));
    }

    #[test]
    fn constant_substitution() {
        let p = poly("1+2xz+x^2y");
        assert_eq!(p.substitute_const(Var::Z, &rat(0, 1)), poly("1+x^2y").to_rational());
        assert_eq!(p.substitute_const(Var::Y, &rat(0, 1)), poly("1+2xz").to_rational());
        assert_eq!(
            poly("x+y+z").substitute_const(Var::Z, &rat(1, 1)),
            poly("x+y+1").to_rational()
        );
    }

    #[test]
    fn evaluation() {
        let at = point((0, 1), (2, 1), (3, 1), (5, 1));
        assert_eq!(poly("x+y+z").eval_rational(&at), rat(10, 1));
        let at = point((0, 1), (3, 2), (0, 1), (0, 1));
        assert_eq!(poly("x^2").eval_rational(&at), rat(9, 4));
        assert_eq!(MultiPoly::zero().eval_rational(&at), rat(0, 1));
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(MultiPoly::falling_factorial(0), poly("1"));
        assert_eq!(MultiPoly::falling_factorial(2), poly("x^2-x"));
        let by_mul = &(&poly("x") * &poly("x-1")) * &poly("x-2");
        assert_eq!(MultiPoly::falling_factorial(3), by_mul);
        assert_eq!(MultiPoly::falling_factorial(3), poly("x^3-3x^2+2x"));
    }

    #[test]
    fn falling_factorial_at_i_is_factorial() {
        let mut fact = BigInt::one();
        for i in 0..=10u32 {
            if i > 0 {
                fact *= BigInt::from(i);
            }
            let at = [BigInt::zero(), BigInt::from(i), BigInt::zero(), BigInt::zero()];
            assert_eq!(MultiPoly::falling_factorial(i).eval(&at), fact);
        }
    }

    #[test]
    fn variable_swap() {
        assert_eq!(poly("1+xz^2+y").swap_vars(Var::Y, Var::Z), poly("1+xy^2+z"));
    }

    #[test]
    fn reflection() {
        assert_eq!(poly("1").reverse_in_x(2).unwrap(), poly("x^2"));
        assert_eq!(poly("1+2x+x^2y").reverse_in_x(2).unwrap(), poly("x^2+2x+y"));
        assert_eq!(poly("x").reverse_in_x(1).unwrap(), poly("1"));
        assert_eq!(
            poly("x^3").reverse_in_x(2),
            Err(PolyError::DegreeExceeds { degree: 3, bound: 2 })
        );
    }

    #[test]
    fn degrees() {
        assert_eq!(poly("x^2y").degree_in(Var::X), 2);
        assert_eq!(poly("1").degree_in(Var::Z), 0);
        assert!(MultiPoly::zero().is_zero());
    }

    #[test]
    fn rendering() {
        assert_eq!(poly("2z+yz+y^2+2xy+x^2").to_string(), "x^2+2xy+y^2+yz+2z");
        assert_eq!(poly("2x-3x^2+x^3").to_string(), "x^3-3x^2+2x");
        assert_eq!(poly("-x+1").to_string(), "-x+1");
        assert_eq!(MultiPoly::zero().to_string(), "0");
        assert_eq!(poly("x^3-3x^2+2x").to_latex(), "x^{3} - 3x^{2} + 2x");
        assert_eq!(poly("t^2x^3-tz").to_string(), "t^2x^3-tz");
    }

    #[test]
    fn json_terms() {
        let p = poly("x^2+2xy-7");
        let text = p.to_json_string();
        assert_eq!(
            text,
            r#"[{"t":0,"x":2,"y":0,"z":0,"c":"1"},{"t":0,"x":1,"y":1,"z":0,"c":"2"},{"t":0,"x":0,"y":0,"z":0,"c":"-7"}]"#
        );
        assert_eq!(MultiPoly::from_json(&text).unwrap(), p);
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<MultiPoly>().is_err());
        assert!("x^".parse::<MultiPoly>().is_err());
        assert!("2w".parse::<MultiPoly>().is_err());
        assert!("x+".parse::<MultiPoly>().is_err());
        assert_eq!(poly("2*x^2*y - 3"), poly("2x^2y-3"));
    }
}
