//! Truncated equivariant tautological classes on products of moduli spaces.
//!
//! A [`BaseSpace`] is a product of factors (Deligne-Mumford spaces, genus
//! 0..3 rubber spaces, P1, a point). Classes are polynomials in the factors'
//! generators with [`EquivariantScalar`] coefficients, truncated factor by
//! factor at each factor's dimension. Mumford's relations are applied only
//! when integrating.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::exact_arith::{int, ArithError, EquivariantScalar, Rational};
use crate::hodge_oracle::{HodgeError, HodgeMonomial, HodgeOracle, RubberKey};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("classes live on different bases: {0} vs {1}")]
    BaseMismatch(String, String),
    #[error("class has zero constant term and cannot be inverted")]
    NonInvertible,
    #[error("{0}")]
    BadBase(String),
    #[error("generator {0} does not exist on this base")]
    UnknownGenerator(String),
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// One factor of a product base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor {
    /// M̄_{g,n}: generators psi_1..psi_n and lam_1..lam_g.
    Dm { genus: u32, points: u32 },
    /// Rubber space of genus g without extra points: psi_inf and lam_1..lam_g.
    Rubber { genus: u32 },
    /// P1 with hyperplane class x, x^2 = 0.
    ProjLine,
    Point,
}

impl Factor {
    pub fn dimension(&self) -> u32 {
        match *self {
            Factor::Dm { genus, points } => (3 * genus + points).saturating_sub(3),
            Factor::Rubber { genus } => 2 * genus - 1,
            Factor::ProjLine => 1,
            Factor::Point => 0,
        }
    }

    pub fn genus(&self) -> Option<u32> {
        match *self {
            Factor::Dm { genus, .. } | Factor::Rubber { genus } => Some(genus),
            _ => None,
        }
    }

    fn validate(&self) -> Result<(), RingError> {
        match *self {
            Factor::Dm { genus, points } if 2 * genus as i64 - 2 + points as i64 <= 0 => Err(
                RingError::BadBase(format!("M({genus},{points}) is unstable")),
            ),
            Factor::Rubber { genus } if genus == 0 => Err(RingError::BadBase(
                "genus 0 rubber factors are not supported".into(),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Dm { genus, points } => write!(f, "M({genus},{points})"),
            Factor::Rubber { genus } => write!(f, "rubber({genus})"),
            Factor::ProjLine => write!(f, "P1"),
            Factor::Point => write!(f, "pt"),
        }
    }
}

impl FromStr for Factor {
    type Err = RingError;

    /// Accepts `M(g,n)`, `rubber(g)`, `P1`, `pt`.
    fn from_str(s: &str) -> Result<Self, RingError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || RingError::BadBase(format!("unrecognised factor {s:?}"));
        let args = |prefix: &str| -> Option<Vec<u32>> {
            let inner = t.strip_prefix(prefix)?.strip_suffix(')')?;
            inner.split(',').map(|x| x.parse().ok()).collect()
        };
        let f = if t == "P1" {
            Factor::ProjLine
        } else if t == "pt" || t == "point" {
            Factor::Point
        } else if let Some(a) = args("M(") {
            match a.as_slice() {
                [g, n] => Factor::Dm {
                    genus: *g,
                    points: *n,
                },
                _ => return Err(bad()),
            }
        } else if let Some(a) = args("rubber(") {
            match a.as_slice() {
                [g] => Factor::Rubber { genus: *g },
                _ => return Err(bad()),
            }
        } else {
            return Err(bad());
        };
        f.validate()?;
        Ok(f)
    }
}

/// What a generator is, relative to its factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    /// psi at marked point `i` (1-based)
    Psi(u32),
    /// lambda_j (1-based)
    Lambda(u32),
    /// hyperplane class of P1
    X,
    PsiInf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Generator {
    pub factor: usize,
    pub kind: GenKind,
    pub degree: u32,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GenKind::Psi(i) => write!(f, "psi[{},{i}]", self.factor),
            GenKind::Lambda(j) => write!(f, "lam[{},{j}]", self.factor),
            GenKind::X => write!(f, "x[{}]", self.factor),
            GenKind::PsiInf => write!(f, "psiinf[{}]", self.factor),
        }
    }
}

/// A product of factors together with its generator list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseSpace {
    factors: Vec<Factor>,
    gens: Vec<Generator>,
}

impl BaseSpace {
    pub fn new(factors: Vec<Factor>) -> Result<Self, RingError> {
        let mut gens = Vec::new();
        for (fi, f) in factors.iter().enumerate() {
            f.validate()?;
            match *f {
                Factor::Dm { genus, points } => {
                    for i in 1..=points {
                        gens.push(Generator {
                            factor: fi,
                            kind: GenKind::Psi(i),
                            degree: 1,
                        });
                    }
                    for j in 1..=genus {
                        gens.push(Generator {
                            factor: fi,
                            kind: GenKind::Lambda(j),
                            degree: j,
                        });
                    }
                }
                Factor::Rubber { genus } => {
                    gens.push(Generator {
                        factor: fi,
                        kind: GenKind::PsiInf,
                        degree: 1,
                    });
                    for j in 1..=genus {
                        gens.push(Generator {
                            factor: fi,
                            kind: GenKind::Lambda(j),
                            degree: j,
                        });
                    }
                }
                Factor::ProjLine => gens.push(Generator {
                    factor: fi,
                    kind: GenKind::X,
                    degree: 1,
                }),
                Factor::Point => {}
            }
        }
        if gens.len() > u8::MAX as usize {
            return Err(RingError::BadBase("too many generators".into()));
        }
        Ok(BaseSpace { factors, gens })
    }

    pub fn point() -> Self {
        BaseSpace::new(vec![Factor::Point]).expect("point is a valid base")
    }

    /// Parses a list such as `["M(3,2)", "P1"]`.
    pub fn parse<S: AsRef<str>>(factors: &[S]) -> Result<Self, RingError> {
        let fs = factors
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<Factor>, _>>()?;
        if fs.is_empty() {
            return Err(RingError::BadBase("empty base".into()));
        }
        BaseSpace::new(fs)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn dimension(&self) -> u32 {
        self.factors.iter().map(|f| f.dimension()).sum()
    }

    pub fn generator_index(&self, factor: usize, kind: GenKind) -> Option<usize> {
        self.gens
            .iter()
            .position(|g| g.factor == factor && g.kind == kind)
    }

    fn factor_degrees(&self, m: &[u8]) -> Vec<u32> {
        let mut d = vec![0; self.factors.len()];
        for (g, &e) in self.gens.iter().zip(m) {
            d[g.factor] += g.degree * e as u32;
        }
        d
    }

    fn fits(&self, degrees: &[u32]) -> bool {
        degrees
            .iter()
            .zip(&self.factors)
            .all(|(d, f)| *d <= f.dimension())
    }

    pub fn monomial_degree(&self, m: &[u8]) -> u32 {
        self.gens
            .iter()
            .zip(m)
            .map(|(g, &e)| g.degree * e as u32)
            .sum()
    }

    pub fn render_monomial(&self, m: &[u8]) -> String {
        let parts: Vec<String> = self
            .gens
            .iter()
            .zip(m)
            .filter(|(_, &e)| e > 0)
            .map(|(g, &e)| if e == 1 { g.to_string() } else { format!("{g}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for BaseSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Exponent vector over a base's generator list.
pub type Monomial = Vec<u8>;

/// Truncated class on a base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TautClass {
    base: BaseSpace,
    terms: BTreeMap<Monomial, EquivariantScalar>,
}

impl TautClass {
    pub fn zero(base: &BaseSpace) -> Self {
        TautClass {
            base: base.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(base: &BaseSpace, c: EquivariantScalar) -> Self {
        let mut t = TautClass::zero(base);
        if !c.is_zero() {
            t.terms.insert(vec![0; base.gens.len()], c);
        }
        t
    }

    pub fn one(base: &BaseSpace) -> Self {
        TautClass::scalar(base, EquivariantScalar::one())
    }

    pub fn generator(base: &BaseSpace, factor: usize, kind: GenKind) -> Result<Self, RingError> {
        let idx = base.generator_index(factor, kind).ok_or_else(|| {
            RingError::UnknownGenerator(
                Generator {
                    factor,
                    kind,
                    degree: 0,
                }
                .to_string(),
            )
        })?;
        let mut m = vec![0u8; base.gens.len()];
        m[idx] = 1;
        let mut t = TautClass::zero(base);
        if base.fits(&base.factor_degrees(&m)) {
            t.terms.insert(m, EquivariantScalar::one());
        }
        Ok(t)
    }

    pub fn base(&self) -> &BaseSpace {
        &self.base
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &EquivariantScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u8]) -> EquivariantScalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(EquivariantScalar::zero)
    }

    /// Degree-0 coefficient.
    pub fn constant_term(&self) -> EquivariantScalar {
        self.coefficient(&vec![0; self.base.gens.len()])
    }

    /// The scalar value when the class has no positive-degree terms.
    pub fn as_scalar(&self) -> Option<EquivariantScalar> {
        if self
            .terms
            .keys()
            .all(|m| m.iter().all(|&e| e == 0))
        {
            Some(self.constant_term())
        } else {
            None
        }
    }

    /// Homogeneous part of the given degree.
    pub fn component(&self, degree: u32) -> TautClass {
        TautClass {
            base: self.base.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.base.monomial_degree(m) == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_base(&self, other: &TautClass) -> Result<(), RingError> {
        if self.base != other.base {
            return Err(RingError::BaseMismatch(
                self.base.to_string(),
                other.base.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &TautClass) -> Result<TautClass, RingError> {
        self.check_base(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TautClass) -> Result<TautClass, RingError> {
        self.add(&other.neg())
    }

    fn add_term(&mut self, m: Monomial, c: EquivariantScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn neg(&self) -> TautClass {
        TautClass {
            base: self.base.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &EquivariantScalar) -> TautClass {
        if c.is_zero() {
            return TautClass::zero(&self.base);
        }
        TautClass {
            base: self.base.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    /// Product truncated at each factor's dimension.
    pub fn mul(&self, other: &TautClass) -> Result<TautClass, RingError> {
        self.check_base(other)?;
        let degs_b: Vec<(&Monomial, Vec<u32>, &EquivariantScalar)> = other
            .terms
            .iter()
            .map(|(m, c)| (m, self.base.factor_degrees(m), c))
            .collect();
        let mut acc: HashMap<Monomial, EquivariantScalar> = HashMap::new();
        for (ma, ca) in &self.terms {
            let da = self.base.factor_degrees(ma);
            for (mb, db, cb) in &degs_b {
                let d: Vec<u32> = da.iter().zip(db).map(|(x, y)| x + y).collect();
                if !self.base.fits(&d) {
                    continue;
                }
                let m: Monomial = ma.iter().zip(mb.iter()).map(|(x, y)| x + y).collect();
                let p = ca * *cb;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        Ok(TautClass {
            base: self.base.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn pow(&self, k: u32) -> Result<TautClass, RingError> {
        let mut out = TautClass::one(&self.base);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Inverse by the geometric series in the nilpotent part.
    pub fn invert(&self) -> Result<TautClass, RingError> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(RingError::NonInvertible);
        }
        let inv0 = a0.recip()?;
        let mut nil = self.clone();
        nil.terms.remove(&vec![0; self.base.gens.len()]);
        let step = nil.scale(&(-&inv0));
        let mut term = TautClass::scalar(&self.base, inv0);
        let mut acc = term.clone();
        for _ in 0..self.base.dimension() {
            term = term.mul(&step)?;
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    pub fn swap_weights(&self) -> TautClass {
        TautClass {
            base: self.base.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.swap_weights()))
                .collect(),
        }
    }

    /// Integral over the base: the top-degree part evaluated factor by factor.
    pub fn integrate(&self, oracle: &HodgeOracle) -> Result<EquivariantScalar, RingError> {
        let dims: Vec<u32> = self.base.factors.iter().map(|f| f.dimension()).collect();
        let mut total = EquivariantScalar::zero();
        for (m, c) in &self.terms {
            if self.base.factor_degrees(m) != dims {
                continue;
            }
            let v = self.monomial_integral(m, oracle)?;
            if !v.is_zero() {
                total = &total + &c.scale(&v);
            }
        }
        Ok(total)
    }

    /// `<m, [base]>` as a product of factor integrals.
    pub fn monomial_integral(&self, m: &[u8], oracle: &HodgeOracle) -> Result<Rational, RingError> {
        monomial_integral(&self.base, m, oracle)
    }
}

pub fn monomial_integral(base: &BaseSpace, m: &[u8], oracle: &HodgeOracle) -> Result<Rational, RingError> {
    let mut value = int(1);
    for (fi, f) in base.factors.iter().enumerate() {
        let exp = |kind: GenKind| -> u32 {
            base.generator_index(fi, kind)
                .map(|i| m[i] as u32)
                .unwrap_or(0)
        };
        let v = match *f {
            Factor::Dm { genus, points } => {
                let psi: Vec<u32> = (1..=points).map(|i| exp(GenKind::Psi(i))).collect();
                let lam: Vec<u32> = (1..=genus).map(|j| exp(GenKind::Lambda(j))).collect();
                oracle.intersect(&HodgeMonomial::new(genus, &psi, &lam))?
            }
            Factor::Rubber { genus } => {
                let lam: Vec<u32> = (1..=genus).map(|j| exp(GenKind::Lambda(j))).collect();
                oracle.rubber(&RubberKey::new(genus, exp(GenKind::PsiInf), &lam))?
            }
            Factor::ProjLine => {
                if exp(GenKind::X) == 1 {
                    int(1)
                } else {
                    int(0)
                }
            }
            Factor::Point => int(1),
        };
        if v.is_zero() {
            return Ok(v);
        }
        value *= v;
    }
    Ok(value)
}

impl fmt::Display for TautClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c}*{}", self.base.render_monomial(m)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `prod_w sum_i (-1)^i lam_i w^{g-i}` on one factor: the Euler class of
/// `E^* (x) L` summed over line bundles `L` with first Chern classes `w`.
pub fn hodge_twist(base: &BaseSpace, factor: usize, weights: &[TautClass]) -> Result<TautClass, RingError> {
    let f = base
        .factors
        .get(factor)
        .ok_or_else(|| RingError::BadBase(format!("no factor {factor}")))?;
    let genus = f
        .genus()
        .ok_or_else(|| RingError::BadBase(format!("factor {factor} ({f}) carries no Hodge bundle")))?;
    if genus > crate::hodge_oracle::MAX_HODGE_GENUS {
        return Err(HodgeError::GenusOutOfRange(genus).into());
    }
    let mut lam = vec![TautClass::one(base)];
    for j in 1..=genus {
        lam.push(TautClass::generator(base, factor, GenKind::Lambda(j))?);
    }
    let mut acc = TautClass::one(base);
    for w in weights {
        let mut e = TautClass::zero(base);
        let mut wp = TautClass::one(base);
        // accumulate from lam_g (w^0) up to lam_0 (w^g)
        for i in (0..=genus as usize).rev() {
            let mut t = lam[i].mul(&wp)?;
            if i % 2 == 1 {
                t = t.neg();
            }
            e = e.add(&t)?;
            wp = wp.mul(w)?;
        }
        acc = acc.mul(&e)?;
    }
    Ok(acc)
}

// ---- expression grammar ----
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' INT)?
//   atom   := INT | 'a1' | 'a2' | '(' expr ')'
//           | 'psi' '[' f ',' i ']' | 'lam' '[' f ',' j ']'
//           | 'x' '[' f ']' | 'psiinf' '[' f ']'
//           | 'hodgetwist' '(' f ';' expr (',' expr)* ')'
//
// Factor indices f are 0-based; point and lambda indices are 1-based.

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, RingError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let v = s[st..i].parse().map_err(|_| RingError::Parse {
                pos: st,
                message: "integer too large".into(),
            })?;
            out.push((st, Tok::Int(v)));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
        } else if "+-*/^()[],;".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(RingError::Parse {
                pos: i,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    base: &'a BaseSpace,
}

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, RingError> {
        Err(RingError::Parse {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), RingError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn int(&mut self) -> Result<u64, RingError> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.at += 1;
                Ok(v)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn small(&mut self) -> Result<u32, RingError> {
        let v = self.int()?;
        u32::try_from(v).or_else(|_| self.err("index too large"))
    }

    fn expr(&mut self) -> Result<TautClass, RingError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<TautClass, RingError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?)?;
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = match d.as_scalar() {
                    Some(s) => acc.scale(&EquivariantScalar::one().try_div(&s)?),
                    None => acc.mul(&d.invert()?)?,
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<TautClass, RingError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        let a = self.atom()?;
        if self.eat('^') {
            let k = self.small()?;
            return a.pow(k);
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<TautClass, RingError> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of expression"),
        };
        match tok {
            Tok::Int(v) => {
                self.at += 1;
                let v = i64::try_from(v).or_else(|_| self.err("integer too large"))?;
                Ok(TautClass::scalar(self.base, EquivariantScalar::from_int(v)))
            }
            Tok::Sym('(') => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.at += 1;
                match name.as_str() {
                    "a1" => Ok(TautClass::scalar(self.base, EquivariantScalar::a1())),
                    "a2" => Ok(TautClass::scalar(self.base, EquivariantScalar::a2())),
                    "psi" | "lam" => {
                        self.expect('[')?;
                        let f = self.small()? as usize;
                        self.expect(',')?;
                        let i = self.small()?;
                        self.expect(']')?;
                        let kind = if name == "psi" {
                            GenKind::Psi(i)
                        } else {
                            GenKind::Lambda(i)
                        };
                        TautClass::generator(self.base, f, kind)
                    }
                    "x" | "psiinf" => {
                        self.expect('[')?;
                        let f = self.small()? as usize;
                        self.expect(']')?;
                        let kind = if name == "x" { GenKind::X } else { GenKind::PsiInf };
                        TautClass::generator(self.base, f, kind)
                    }
                    "hodgetwist" => {
                        self.expect('(')?;
                        let f = self.small()? as usize;
                        self.expect(';')?;
                        let mut ws = vec![self.expr()?];
                        while self.eat(',') {
                            ws.push(self.expr()?);
                        }
                        self.expect(')')?;
                        hodge_twist(self.base, f, &ws)
                    }
                    other => {
                        self.at -= 1;
                        self.err(format!("unknown name {other:?}"))
                    }
                }
            }
            Tok::Sym(c) => self.err(format!("unexpected '{c}'")),
        }
    }
}

/// Parses an expression into a class on `base`.
pub fn parse_class(base: &BaseSpace, src: &str) -> Result<TautClass, RingError> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
        base,
    };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses an expression that must not involve any class generator.
pub fn parse_scalar(src: &str) -> Result<EquivariantScalar, RingError> {
    let base = BaseSpace::point();
    let c = parse_class(&base, src)?;
    c.as_scalar().ok_or_else(|| RingError::Parse {
        pos: 0,
        message: "expected a scalar expression".into(),
    })
}

/// Splits an expression into its top-level multiplicative factors with exponents.
/// Division and unary minus are kept inside the factor they apply to.
pub fn split_product(src: &str) -> Result<Vec<(String, u32)>, RingError> {
    let toks = tokenize(src)?;
    let mut depth = 0i32;
    let mut pieces: Vec<(usize, usize)> = Vec::new();
    let mut start = 0usize;
    for (k, (pos, t)) in toks.iter().enumerate() {
        match t {
            Tok::Sym('(') | Tok::Sym('[') => depth += 1,
            Tok::Sym(')') | Tok::Sym(']') => depth -= 1,
            Tok::Sym('+') | Tok::Sym('-') if depth == 0 && k > 0 => {
                // a sum at top level: not a product
                let prev = &toks[k - 1].1;
                if !matches!(prev, Tok::Sym('*') | Tok::Sym('/') | Tok::Sym('^')) {
                    return Ok(vec![(src.trim().to_string(), 1)]);
                }
            }
            Tok::Sym('/') if depth == 0 => return Ok(vec![(src.trim().to_string(), 1)]),
            Tok::Sym('*') if depth == 0 => {
                pieces.push((start, *pos));
                start = pos + 1;
            }
            _ => {}
        }
    }
    pieces.push((start, src.len()));
    let mut out = Vec::new();
    for (a, b) in pieces {
        let piece = src[a..b].trim();
        // peel a trailing ^k at depth 0
        let (body, k) = match piece.rfind('^') {
            Some(i) if depth_at(piece, i) == 0 => match piece[i + 1..].trim().parse::<u32>() {
                Ok(k) => (piece[..i].trim(), k),
                Err(_) => (piece, 1),
            },
            _ => (piece, 1),
        };
        out.push((body.to_string(), k));
    }
    Ok(out)
}

fn depth_at(s: &str, idx: usize) -> i32 {
    let mut d = 0;
    for c in s[..idx].chars() {
        match c {
            '(' | '[' => d += 1,
            ')' | ']' => d -= 1,
            _ => {}
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DataSource;
    use crate::exact_arith::{rat, WeightPoly};

    fn oracle() -> HodgeOracle {
        HodgeOracle::load(&DataSource::embedded()).unwrap()
    }

    #[test]
    fn parses_factors() {
        assert_eq!("M(3,2)".parse::<Factor>().unwrap(), Factor::Dm { genus: 3, points: 2 });
        assert_eq!("rubber(2)".parse::<Factor>().unwrap(), Factor::Rubber { genus: 2 });
        assert_eq!("P1".parse::<Factor>().unwrap(), Factor::ProjLine);
        assert!("M(0,2)".parse::<Factor>().is_err());
        assert!("Q(1)".parse::<Factor>().is_err());
    }

    #[test]
    fn truncates_per_factor() {
        let b = BaseSpace::parse(&["M(1,1)", "P1"]).unwrap();
        let x = parse_class(&b, "x[1]").unwrap();
        assert!(x.mul(&x).unwrap().is_zero());
        let psi = parse_class(&b, "psi[0,1]").unwrap();
        assert_eq!(psi.mul(&x).unwrap().len(), 1);
    }

    #[test]
    fn mul_requires_same_base() {
        let a = TautClass::one(&BaseSpace::parse(&["P1"]).unwrap());
        let b = TautClass::one(&BaseSpace::parse(&["M(1,1)"]).unwrap());
        assert!(matches!(a.mul(&b), Err(RingError::BaseMismatch(..))));
    }

    #[test]
    fn inverse_of_linear_factor() {
        let b = BaseSpace::parse(&["M(2,1)"]).unwrap();
        let f = parse_class(&b, "a1 + psi[0,1]").unwrap();
        let inv = f.invert().unwrap();
        assert_eq!(f.mul(&inv).unwrap(), TautClass::one(&b));
        let nil = parse_class(&b, "psi[0,1]").unwrap();
        assert_eq!(nil.invert(), Err(RingError::NonInvertible));
    }

    #[test]
    fn integrates_factor_by_factor() {
        let o = oracle();
        let b = BaseSpace::parse(&["M(2,1)", "P1"]).unwrap();
        let c = parse_class(&b, "3*psi[0,1]^4*x[1] + lam[0,1]*psi[0,1]^3").unwrap();
        assert_eq!(c.integrate(&o).unwrap().is_constant(), Some(rat(3, 1152)));
    }

    #[test]
    fn weight_leading_hodge_twist() {
        let b = BaseSpace::parse(&["M(1,1)"]).unwrap();
        let t = parse_class(&b, "hodgetwist(0; a1)").unwrap();
        let want = parse_class(&b, "a1 - lam[0,1]").unwrap();
        assert_eq!(t, want);
    }

    #[test]
    fn scalar_expressions() {
        let s = parse_scalar("-1/165888*a2^6/(a1^4*(a1^2-a2^2))").unwrap();
        assert_eq!(s.num(), &WeightPoly::monomial(rat(-1, 165888), crate::exact_arith::WeightExp::new(0, 6)));
        assert!(parse_scalar("psi[0,1]").is_err());
        assert!(matches!(parse_scalar("1 +"), Err(RingError::Parse { .. })));
        assert!(matches!(parse_scalar("1/0"), Err(RingError::Arith(ArithError::DivisionByZero))));
    }

    #[test]
    fn splits_products() {
        let p = split_product("-(a+x)*(2*a+x)^2").unwrap();
        assert_eq!(p, vec![("-(a+x)".to_string(), 1), ("(2*a+x)".to_string(), 2)]);
        let q = split_product("a1 + psi[0,1]").unwrap();
        assert_eq!(q.len(), 1);
    }
}
