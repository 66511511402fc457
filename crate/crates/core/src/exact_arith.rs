//! Exact rationals, polynomials in the two torus weights `a1`, `a2`, and reduced
//! rational functions of the weights.
//!
//! Rational functions are kept in lowest terms with a monic denominator
//! (leading coefficient 1 under graded-lex order), so equality is structural.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes at the given weights")]
    DenominatorVanishes,
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

/// Small-integer rational. Panics on a zero denominator; meant for literals.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or `p` (optional sign on `p`).
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let bad = || ArithError::BadRational(s.to_string());
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Exponents of `a1^e1 a2^e2`, ordered graded-lex (total degree, then `a1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightExp {
    pub a1: u32,
    pub a2: u32,
}

impl WeightExp {
    pub const ONE: WeightExp = WeightExp { a1: 0, a2: 0 };

    pub fn new(a1: u32, a2: u32) -> Self {
        WeightExp { a1, a2 }
    }

    pub fn degree(self) -> u32 {
        self.a1 + self.a2
    }

    fn divides(self, other: WeightExp) -> bool {
        self.a1 <= other.a1 && self.a2 <= other.a2
    }
}

impl Ord for WeightExp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.a1.cmp(&other.a1))
    }
}

impl PartialOrd for WeightExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A point at which to evaluate weight polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightPoint {
    pub a1: Rational,
    pub a2: Rational,
}

impl WeightPoint {
    pub fn new(a1: Rational, a2: Rational) -> Self {
        WeightPoint { a1, a2 }
    }

    pub fn ints(a1: i64, a2: i64) -> Self {
        WeightPoint::new(int(a1), int(a2))
    }
}

/// Polynomial in `a1`, `a2` with rational coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WeightPoly {
    terms: BTreeMap<WeightExp, Rational>,
}

impl WeightPoly {
    pub fn zero() -> Self {
        WeightPoly::default()
    }

    pub fn one() -> Self {
        WeightPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        WeightPoly::monomial(c, WeightExp::ONE)
    }

    pub fn monomial(c: Rational, e: WeightExp) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        WeightPoly { terms }
    }

    pub fn a1() -> Self {
        WeightPoly::monomial(Rational::one(), WeightExp::new(1, 0))
    }

    pub fn a2() -> Self {
        WeightPoly::monomial(Rational::one(), WeightExp::new(0, 1))
    }

    pub fn from_terms<I: IntoIterator<Item = (WeightExp, Rational)>>(it: I) -> Self {
        let mut p = WeightPoly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: WeightExp, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&WeightExp, &Rational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&WeightExp::ONE).cloned(),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(WeightExp, &Rational)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    pub fn coefficient(&self, e: WeightExp) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return WeightPoly::zero();
        }
        WeightPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    fn mul_term(&self, m: WeightExp, c: &Rational) -> Self {
        WeightPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (WeightExp::new(e.a1 + m.a1, e.a2 + m.a2), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = WeightPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, w: &WeightPoint) -> Rational {
        let mut s = Rational::zero();
        for (e, c) in &self.terms {
            s += c * num_traits::pow(w.a1.clone(), e.a1 as usize)
                * num_traits::pow(w.a2.clone(), e.a2 as usize);
        }
        s
    }

    /// Exchanges `a1` and `a2`.
    pub fn swap_weights(&self) -> Self {
        WeightPoly::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (WeightExp::new(e.a2, e.a1), c.clone())),
        )
    }

    /// `self / d` when `d` divides exactly.
    pub fn div_exact(&self, d: &WeightPoly) -> Option<WeightPoly> {
        let (lt, lc) = d.leading()?;
        let mut r = self.clone();
        let mut q = WeightPoly::zero();
        while let Some((e, c)) = r.leading() {
            if !lt.divides(e) {
                return None;
            }
            let m = WeightExp::new(e.a1 - lt.a1, e.a2 - lt.a2);
            let f = c / lc;
            r = &r - &d.mul_term(m, &f);
            q.add_term(m, f);
        }
        Some(q)
    }

    fn min_exponents(&self) -> WeightExp {
        let mut it = self.terms.keys();
        let first = it.next().copied().unwrap_or(WeightExp::ONE);
        it.fold(first, |acc, e| WeightExp::new(acc.a1.min(e.a1), acc.a2.min(e.a2)))
    }

    /// A greatest common divisor (defined up to a nonzero rational factor).
    pub fn gcd(a: &WeightPoly, b: &WeightPoly) -> WeightPoly {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.len() == 1 || b.len() == 1 {
            let ma = a.min_exponents();
            let mb = b.min_exponents();
            return WeightPoly::monomial(
                Rational::one(),
                WeightExp::new(ma.a1.min(mb.a1), ma.a2.min(mb.a2)),
            );
        }
        let ra = to_recursive(a);
        let rb = to_recursive(b);
        from_recursive(&recursive_gcd(ra, rb))
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let mut parts = Vec::new();
            if !a.is_one() || *e == WeightExp::ONE {
                parts.push(a.to_string());
            }
            for (name, k) in [("a1", e.a1), ("a2", e.a2)] {
                match k {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    _ => parts.push(format!("{name}^{k}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for WeightPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f)
    }
}

impl Add for &WeightPoly {
    type Output = WeightPoly;
    fn add(self, rhs: &WeightPoly) -> WeightPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &WeightPoly {
    type Output = WeightPoly;
    fn sub(self, rhs: &WeightPoly) -> WeightPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &WeightPoly {
    type Output = WeightPoly;
    fn mul(self, rhs: &WeightPoly) -> WeightPoly {
        let mut out = WeightPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(WeightExp::new(ea.a1 + eb.a1, ea.a2 + eb.a2), ca * cb);
            }
        }
        out
    }
}

impl Neg for &WeightPoly {
    type Output = WeightPoly;
    fn neg(self) -> WeightPoly {
        WeightPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { $tr::$m(&self, &rhs) }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t { $tr::$m(&self, rhs) }
        }
    )*};
}

forward_owned!(WeightPoly, Add add, Sub sub, Mul mul);

impl Neg for WeightPoly {
    type Output = WeightPoly;
    fn neg(self) -> WeightPoly {
        -&self
    }
}

/// Polynomial in one variable over the rationals, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn one() -> Self {
        UniPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Self {
        UniPoly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn lead(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        UniPoly::from_coeffs(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = UniPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn div_rem(&self, d: &UniPoly) -> Option<(UniPoly, UniPoly)> {
        let dl = d.lead()?.clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().cloned().unwrap_or_else(Rational::zero) / &dl;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Some((UniPoly::from_coeffs(q), UniPoly::from_coeffs(r)))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.recip()),
            None => UniPoly::zero(),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Renders with the given variable name, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            first = false;
            let a = c.abs();
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{a}*{mono}"));
            }
        }
        s
    }
}

/// Uses `d` as the variable.
impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("d"))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

forward_owned!(UniPoly, Add add, Sub sub, Mul mul);

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

impl From<Rational> for UniPoly {
    fn from(c: Rational) -> Self {
        UniPoly::constant(c)
    }
}

// Bivariate gcd: view a polynomial as sum_j c_j(a1) a2^j and run a primitive
// pseudo-remainder sequence over Q[a1].

type Recursive = Vec<UniPoly>;

fn to_recursive(p: &WeightPoly) -> Recursive {
    let deg = p.terms.keys().map(|e| e.a2).max().unwrap_or(0) as usize;
    let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); deg + 1];
    for (e, c) in &p.terms {
        let row = &mut rows[e.a2 as usize];
        if row.len() <= e.a1 as usize {
            row.resize(e.a1 as usize + 1, Rational::zero());
        }
        row[e.a1 as usize] = c.clone();
    }
    rows.into_iter().map(UniPoly::from_coeffs).collect()
}

fn from_recursive(r: &Recursive) -> WeightPoly {
    let mut out = WeightPoly::zero();
    for (j, c) in r.iter().enumerate() {
        for (i, v) in c.coeffs.iter().enumerate() {
            out.add_term(WeightExp::new(i as u32, j as u32), v.clone());
        }
    }
    out
}

fn trim(r: &mut Recursive) {
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
}

fn content(r: &Recursive) -> UniPoly {
    r.iter()
        .fold(UniPoly::zero(), |acc, c| UniPoly::gcd(&acc, c))
}

fn primitive(r: &Recursive) -> Recursive {
    let c = content(r);
    r.iter()
        .map(|x| x.div_rem(&c).expect("nonzero content").0)
        .collect()
}

fn pseudo_rem(p: &Recursive, q: &Recursive) -> Recursive {
    let dq = q.len() - 1;
    let lq = q[dq].clone();
    let mut r = p.clone();
    trim(&mut r);
    while !r.is_empty() && r.len() - 1 >= dq {
        let k = r.len() - 1 - dq;
        let lr = r[r.len() - 1].clone();
        for c in r.iter_mut() {
            *c = &*c * &lq;
        }
        for (i, c) in q.iter().enumerate() {
            r[k + i] = &r[k + i] - &(&lr * c);
        }
        trim(&mut r);
    }
    r
}

fn recursive_gcd(mut a: Recursive, mut b: Recursive) -> Recursive {
    trim(&mut a);
    trim(&mut b);
    let c = UniPoly::gcd(&content(&a), &content(&b));
    let mut p = primitive(&a);
    let mut q = primitive(&b);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        if q.len() == 1 {
            // primitive and free of a2: a unit
            return vec![c];
        }
        let r = pseudo_rem(&p, &q);
        if r.is_empty() {
            return q.iter().map(|x| x * &c).collect();
        }
        p = q;
        q = primitive(&r);
    }
}

/// Reduced rational function of the weights with a monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquivariantScalar {
    num: WeightPoly,
    den: WeightPoly,
}

impl EquivariantScalar {
    pub fn new(num: WeightPoly, den: WeightPoly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: WeightPoly, den: WeightPoly) -> Self {
        if num.is_zero() {
            return EquivariantScalar::zero();
        }
        let (num, den) = if den.as_constant().is_some() {
            (num, den)
        } else {
            let g = WeightPoly::gcd(&num, &den);
            if g.as_constant().is_some() {
                (num, den)
            } else {
                (
                    num.div_exact(&g).expect("gcd divides numerator"),
                    den.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if lc.is_one() {
            EquivariantScalar { num, den }
        } else {
            let inv = lc.recip();
            EquivariantScalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        EquivariantScalar {
            num: WeightPoly::zero(),
            den: WeightPoly::one(),
        }
    }

    pub fn one() -> Self {
        EquivariantScalar::from_rational(Rational::one())
    }

    pub fn from_rational(c: Rational) -> Self {
        EquivariantScalar {
            num: WeightPoly::constant(c),
            den: WeightPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        EquivariantScalar::from_rational(int(n))
    }

    pub fn a1() -> Self {
        EquivariantScalar::from(WeightPoly::a1())
    }

    pub fn a2() -> Self {
        EquivariantScalar::from(WeightPoly::a2())
    }

    pub fn num(&self) -> &WeightPoly {
        &self.num
    }

    pub fn den(&self) -> &WeightPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The rational value when the function does not depend on the weights.
    pub fn is_constant(&self) -> Option<Rational> {
        let d = self.den.as_constant()?;
        Some(self.num.as_constant()? / d)
    }

    pub fn eval(&self, w: &WeightPoint) -> Result<Rational, ArithError> {
        let d = self.den.eval(w);
        if d.is_zero() {
            return Err(ArithError::DenominatorVanishes);
        }
        Ok(self.num.eval(w) / d)
    }

    pub fn recip(&self) -> Result<Self, ArithError> {
        EquivariantScalar::new(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, rhs: &EquivariantScalar) -> Result<Self, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        EquivariantScalar {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return EquivariantScalar::zero();
        }
        EquivariantScalar {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn swap_weights(&self) -> Self {
        EquivariantScalar::normalized(self.num.swap_weights(), self.den.swap_weights())
    }
}

impl From<WeightPoly> for EquivariantScalar {
    fn from(p: WeightPoly) -> Self {
        EquivariantScalar {
            num: p,
            den: WeightPoly::one(),
        }
    }
}

impl From<Rational> for EquivariantScalar {
    fn from(c: Rational) -> Self {
        EquivariantScalar::from_rational(c)
    }
}

impl fmt::Display for EquivariantScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl Add for &EquivariantScalar {
    type Output = EquivariantScalar;
    fn add(self, rhs: &EquivariantScalar) -> EquivariantScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return EquivariantScalar::normalized(&self.num + &rhs.num, self.den.clone());
        }
        EquivariantScalar::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &EquivariantScalar {
    type Output = EquivariantScalar;
    fn sub(self, rhs: &EquivariantScalar) -> EquivariantScalar {
        self + &(-rhs)
    }
}

impl Mul for &EquivariantScalar {
    type Output = EquivariantScalar;
    fn mul(self, rhs: &EquivariantScalar) -> EquivariantScalar {
        if self.is_zero() || rhs.is_zero() {
            return EquivariantScalar::zero();
        }
        if self.den.as_constant().is_some() && rhs.den.as_constant().is_some() {
            return EquivariantScalar {
                num: &self.num * &rhs.num,
                den: WeightPoly::one(),
            };
        }
        EquivariantScalar::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &EquivariantScalar {
    type Output = EquivariantScalar;
    fn neg(self) -> EquivariantScalar {
        EquivariantScalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

forward_owned!(EquivariantScalar, Add add, Sub sub, Mul mul);

impl Neg for EquivariantScalar {
    type Output = EquivariantScalar;
    fn neg(self) -> EquivariantScalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> WeightPoly {
        WeightPoly::a1()
    }
    fn a2() -> WeightPoly {
        WeightPoly::a2()
    }

    #[test]
    fn parse_and_print_rationals() {
        assert_eq!(parse_rational("-37/82944").unwrap(), rat(-37, 82944));
        assert_eq!(parse_rational(" 4 ").unwrap(), int(4));
        assert_eq!(parse_rational("6/4").unwrap().to_string(), "3/2");
        assert_eq!(int(7).to_string(), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn cancels_common_factor() {
        let num = &a1().pow(2) - &a2().pow(2);
        let den = &a1() - &a2();
        let q = EquivariantScalar::new(num, den).unwrap();
        assert_eq!(q, EquivariantScalar::from(&a1() + &a2()));
        assert_eq!(q.to_string(), "(a1 + a2)/(1)");
    }

    #[test]
    fn gcd_of_products_of_linear_forms() {
        let l1 = &a1() - &a2();
        let l2 = &a1() + &a2();
        let l3 = &a1().scale(&int(2)) + &a2();
        let p = &(&l1 * &l2) * &l3;
        let q = &(&l1 * &l3) * &l3;
        let g = WeightPoly::gcd(&p, &q);
        let expect = &l1 * &l3;
        assert!(g.div_exact(&expect).is_some_and(|c| c.as_constant().is_some()));
        // coprime pair
        let g = WeightPoly::gcd(&l2, &l3);
        assert!(g.as_constant().is_some());
    }

    #[test]
    fn evaluates_nested_rational_function() {
        // -(1/165888) a2^6 / (a1^4 (a1^2 - a2^2)) at (2, 1)
        let num = WeightPoly::monomial(rat(-1, 165888), WeightExp::new(0, 6));
        let den = &a1().pow(4) * &(&a1().pow(2) - &a2().pow(2));
        let f = EquivariantScalar::new(num, den).unwrap();
        assert_eq!(f.eval(&WeightPoint::ints(2, 1)).unwrap(), rat(-1, 7962624));
        assert!(f.is_constant().is_none());
        assert_eq!(
            f.eval(&WeightPoint::ints(1, 1)),
            Err(ArithError::DenominatorVanishes)
        );
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let x = EquivariantScalar::a1();
        assert_eq!(
            x.try_div(&EquivariantScalar::zero()),
            Err(ArithError::DivisionByZero)
        );
        assert!(EquivariantScalar::new(WeightPoly::one(), WeightPoly::zero()).is_err());
    }

    #[test]
    fn canonical_form_has_monic_denominator() {
        let f = EquivariantScalar::new(WeightPoly::one(), a1().scale(&int(-2))).unwrap();
        assert_eq!(f.to_string(), "(-1/2)/(a1)");
        let sum = &f + &f;
        assert_eq!(sum.to_string(), "(-1)/(a1)");
    }

    #[test]
    fn sums_that_collapse_to_constants() {
        let d = &a1() - &a2();
        let x = EquivariantScalar::new(a1(), d.clone()).unwrap();
        let y = EquivariantScalar::new(-a2(), d).unwrap();
        assert_eq!((&x + &y).is_constant(), Some(int(1)));
    }

    #[test]
    fn swap_weights_exchanges_variables() {
        let f = EquivariantScalar::new(a2(), &a1() - &a2()).unwrap();
        let g = EquivariantScalar::new(a1(), &a2() - &a1()).unwrap();
        assert_eq!(f.swap_weights(), g);
    }

    #[test]
    fn unipoly_gcd_and_render() {
        let x = UniPoly::var();
        let p = &(&x - &UniPoly::one()) * &(&x + &UniPoly::one());
        let q = &(&x - &UniPoly::one()) * &x;
        assert_eq!(UniPoly::gcd(&p, &q), &x - &UniPoly::one());
        let r = UniPoly::from_coeffs(vec![int(8), int(-5), int(1)]).scale(&rat(1, 72576));
        assert_eq!(r.render("d"), "1/72576*d^2 - 5/72576*d + 1/9072");
    }
}
