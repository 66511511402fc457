//! Hodge integrals of psi and lambda classes on M̄_{g,n} for g <= 3, and
//! integrals on the genus 0..3 rubber spaces.
//!
//! Mixed integrals are reduced by string/dilaton and Mumford's relations to
//! square-free lambda monomials, then looked up in the shipped tables. A key
//! missing from a table is an error, never a silent zero.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::data::{DataError, DataSource, DM_TABLE, RUBBER_TABLE};
use crate::exact_arith::{int, parse_rational, EquivariantScalar, Rational, WeightPoly};
use crate::psi_recursion::{PsiError, PsiOracle};

pub const MAX_HODGE_GENUS: u32 = 3;

pub const DM_SCHEMA: &str = "gwverify.dm_intersections/1";
pub const RUBBER_SCHEMA: &str = "gwverify.rubber/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HodgeError {
    #[error("genus {0} outside the supported range 0..=3")]
    GenusOutOfRange(u32),
    #[error("unstable moduli space M̄_{{{genus},{points}}}")]
    UnstableInput { genus: u32, points: usize },
    #[error("expected {expected} lambda exponents, got {got}")]
    LambdaArity { expected: usize, got: usize },
    #[error("no table entry for {0}")]
    UnknownMonomial(String),
    #[error("no rubber table entry for {0}")]
    UnknownRubberKey(String),
    #[error(transparent)]
    Psi(#[from] PsiError),
}

/// `prod psi_i^{a_i} prod lam_j^{b_j}` on M̄_{g,n}; `lambda[j-1]` is the exponent of `lam_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HodgeMonomial {
    pub genus: u32,
    pub psi: Vec<u32>,
    pub lambda: Vec<u32>,
}

impl HodgeMonomial {
    pub fn new(genus: u32, psi: &[u32], lambda: &[u32]) -> Self {
        HodgeMonomial {
            genus,
            psi: psi.to_vec(),
            lambda: lambda.to_vec(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.psi.iter().sum::<u32>() + lambda_degree(&self.lambda)
    }

    pub fn dimension(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.psi.len() as i64
    }

    fn sorted(&self) -> HodgeMonomial {
        let mut m = self.clone();
        m.psi.sort_unstable();
        m
    }
}

impl fmt::Display for HodgeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &a) in self.psi.iter().enumerate() {
            push_power(&mut parts, &format!("psi{}", i + 1), a);
        }
        for (j, &b) in self.lambda.iter().enumerate() {
            push_power(&mut parts, &format!("lam{}", j + 1), b);
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(
            f,
            "<{}> on M({},{})",
            parts.join("*"),
            self.genus,
            self.psi.len()
        )
    }
}

fn push_power(parts: &mut Vec<String>, name: &str, k: u32) {
    match k {
        0 => {}
        1 => parts.push(name.to_string()),
        _ => parts.push(format!("{name}^{k}")),
    }
}

pub fn lambda_degree(lambda: &[u32]) -> u32 {
    lambda
        .iter()
        .enumerate()
        .map(|(j, &b)| (j as u32 + 1) * b)
        .sum()
}

/// One Mumford relation `lhs -> sum c * rhs`, on lambda exponent vectors.
#[derive(Debug, Clone)]
pub struct LambdaRule {
    pub lhs: Vec<u32>,
    pub rhs: Vec<(Rational, Vec<u32>)>,
}

fn unit(g: usize, j: usize, k: u32) -> Vec<u32> {
    let mut v = vec![0; g];
    v[j] = k;
    v
}

/// The rewrite rules for genus `g`: consequences of c(E) c(E^*) = 1 whose
/// leading terms are the squares lam_j^2.
pub fn lambda_rules(genus: u32) -> Result<Vec<LambdaRule>, HodgeError> {
    let g = genus as usize;
    let two = int(2);
    Ok(match genus {
        0 => Vec::new(),
        1 => vec![LambdaRule {
            lhs: unit(1, 0, 2),
            rhs: vec![],
        }],
        2 => vec![
            LambdaRule {
                lhs: unit(g, 0, 2),
                rhs: vec![(two.clone(), unit(g, 1, 1))],
            },
            LambdaRule {
                lhs: unit(g, 1, 2),
                rhs: vec![],
            },
        ],
        3 => vec![
            LambdaRule {
                lhs: unit(g, 0, 2),
                rhs: vec![(two.clone(), unit(g, 1, 1))],
            },
            LambdaRule {
                lhs: unit(g, 1, 2),
                rhs: vec![(two, vec![1, 0, 1])],
            },
            LambdaRule {
                lhs: unit(g, 2, 2),
                rhs: vec![],
            },
        ],
        _ => return Err(HodgeError::GenusOutOfRange(genus)),
    })
}

/// Rewrites a lambda monomial to square-free normal form. `choose` picks which
/// of the applicable rules (given by index) fires; any choice gives the same result.
pub fn rewrite_lambda_with(
    genus: u32,
    lambda: &[u32],
    choose: &mut dyn FnMut(&[usize]) -> usize,
) -> Result<BTreeMap<Vec<u32>, Rational>, HodgeError> {
    if lambda.len() != genus as usize {
        return Err(HodgeError::LambdaArity {
            expected: genus as usize,
            got: lambda.len(),
        });
    }
    let rules = lambda_rules(genus)?;
    let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    let mut work: Vec<(Rational, Vec<u32>)> = vec![(Rational::one(), lambda.to_vec())];
    while let Some((c, m)) = work.pop() {
        let applicable: Vec<usize> = rules
            .iter()
            .enumerate()
            .filter(|(_, r)| r.lhs.iter().zip(&m).all(|(a, b)| a <= b))
            .map(|(i, _)| i)
            .collect();
        if applicable.is_empty() {
            let e = out.entry(m).or_insert_with(Rational::zero);
            *e += c;
            continue;
        }
        let pick = applicable[choose(&applicable) % applicable.len()];
        let rule = &rules[pick];
        for (rc, rm) in &rule.rhs {
            let next: Vec<u32> = m
                .iter()
                .zip(&rule.lhs)
                .zip(rm)
                .map(|((a, l), r)| a - l + r)
                .collect();
            work.push((&c * rc, next));
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

pub fn rewrite_lambda(genus: u32, lambda: &[u32]) -> Result<BTreeMap<Vec<u32>, Rational>, HodgeError> {
    rewrite_lambda_with(genus, lambda, &mut |_| 0)
}

/// Normal form of the lambda part of a Hodge monomial; psi exponents are untouched.
pub fn relation_rewrite(m: &HodgeMonomial) -> Result<Vec<(Rational, HodgeMonomial)>, HodgeError> {
    Ok(rewrite_lambda(m.genus, &m.lambda)?
        .into_iter()
        .map(|(l, c)| {
            (
                c,
                HodgeMonomial {
                    genus: m.genus,
                    psi: m.psi.clone(),
                    lambda: l,
                },
            )
        })
        .collect())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DmFile {
    schema: String,
    #[serde(default)]
    notes: Vec<String>,
    entries: Vec<DmEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DmEntry {
    genus: u32,
    #[serde(default)]
    psi: Vec<u32>,
    lambda: Vec<u32>,
    value: String,
    source: String,
    #[serde(default)]
    note: Option<String>,
}

#[derive(Debug, Clone)]
struct Stored {
    value: Rational,
    source: String,
}

fn insert_normalized(
    map: &mut HashMap<HodgeMonomial, Stored>,
    origin: &str,
    location: &str,
    m: &HodgeMonomial,
    value: Rational,
    source: &str,
) -> Result<(), DataError> {
    let forms = relation_rewrite(m).map_err(|e| DataError::schema(origin, location, e.to_string()))?;
    if forms.is_empty() {
        if !value.is_zero() {
            return Err(DataError::schema(
                origin,
                location,
                format!("{m} vanishes by Mumford's relation but the entry is {value}"),
            ));
        }
        return Ok(());
    }
    if forms.len() != 1 {
        return Err(DataError::schema(
            origin,
            location,
            format!("{m} does not reduce to a single normal monomial"),
        ));
    }
    let (c, nf) = forms.into_iter().next().expect("one form");
    let normalized = value / c;
    if let Some(prev) = map.get(&nf) {
        if prev.value != normalized {
            return Err(DataError::schema(
                origin,
                location,
                format!(
                    "inconsistent with {} ({}): {nf} would be both {} and {normalized}",
                    prev.source, prev.value, prev.value
                ),
            ));
        }
        return Ok(());
    }
    map.insert(
        nf,
        Stored {
            value: normalized,
            source: source.to_string(),
        },
    );
    Ok(())
}

fn parse_value(origin: &str, location: &str, s: &str) -> Result<Rational, DataError> {
    parse_rational(s).map_err(|e| DataError::schema(origin, location, e.to_string()))
}

/// Table of mixed Hodge integrals keyed by normal-form monomials.
#[derive(Debug, Clone, Default)]
pub struct HodgeTable {
    entries: HashMap<HodgeMonomial, Stored>,
}

impl HodgeTable {
    pub fn from_json(origin: &str, text: &str) -> Result<Self, DataError> {
        let file: DmFile = serde_json::from_str(text).map_err(|e| DataError::Parse {
            origin: origin.to_string(),
            message: e.to_string(),
        })?;
        if file.schema != DM_SCHEMA {
            return Err(DataError::schema(
                origin,
                "schema",
                format!("expected {DM_SCHEMA:?}, found {:?}", file.schema),
            ));
        }
        let _ = file.notes;
        let mut entries = HashMap::new();
        for (i, e) in file.entries.iter().enumerate() {
            let _ = &e.note;
            let location = format!("entries[{i}]");
            if e.genus > MAX_HODGE_GENUS {
                return Err(DataError::schema(origin, &location, "genus above 3"));
            }
            let value = parse_value(origin, &location, &e.value)?;
            if e.source.trim().is_empty() {
                return Err(DataError::schema(origin, &location, "empty source"));
            }
            let m = HodgeMonomial::new(e.genus, &e.psi, &e.lambda).sorted();
            if m.degree() as i64 != m.dimension() {
                return Err(DataError::schema(
                    origin,
                    &location,
                    format!("{m} is not of top degree"),
                ));
            }
            insert_normalized(&mut entries, origin, &location, &m, value, &e.source)?;
        }
        Ok(HodgeTable { entries })
    }

    pub fn load(src: &DataSource) -> Result<Self, DataError> {
        let (origin, text) = src.read(DM_TABLE)?;
        HodgeTable::from_json(&origin, &text)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored value for a normal-form monomial with sorted psi exponents.
    pub fn get(&self, m: &HodgeMonomial) -> Option<&Rational> {
        self.entries.get(m).map(|s| &s.value)
    }

    pub fn source(&self, m: &HodgeMonomial) -> Option<&str> {
        self.entries.get(m).map(|s| s.source.as_str())
    }
}

/// An integrand on the genus `genus` rubber space with `marked` extra points:
/// `psi_inf^{psi_inf} prod lam_j^{b_j}`. Virtual dimension 2g - 1 + marked.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RubberKey {
    pub genus: u32,
    pub marked: u32,
    pub psi_inf: u32,
    pub lambda: Vec<u32>,
}

impl RubberKey {
    pub fn new(genus: u32, psi_inf: u32, lambda: &[u32]) -> Self {
        RubberKey {
            genus,
            marked: 0,
            psi_inf,
            lambda: lambda.to_vec(),
        }
    }

    pub fn dimension(genus: u32, marked: u32) -> i64 {
        2 * genus as i64 - 1 + marked as i64
    }

    pub fn degree(&self) -> u32 {
        self.psi_inf + lambda_degree(&self.lambda)
    }
}

impl fmt::Display for RubberKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        push_power(&mut parts, "psiinf", self.psi_inf);
        for (j, &b) in self.lambda.iter().enumerate() {
            push_power(&mut parts, &format!("lam{}", j + 1), b);
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "<{}> on rubber(g={}, k={})", parts.join("*"), self.genus, self.marked)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RubberFile {
    schema: String,
    #[serde(default)]
    notes: Vec<String>,
    genus0_top_power: RubberValue,
    vanishing: Vec<RubberVanishing>,
    entries: Vec<RubberEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RubberValue {
    value: String,
    source: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RubberVanishing {
    genus: u32,
    psi_inf_from: u32,
    source: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RubberEntry {
    genus: u32,
    psi_inf: u32,
    lambda: Vec<u32>,
    value: String,
    source: String,
}

/// Rubber integrals for the marked-point-free spaces of genus 1..3, plus the
/// genus 0 rule that `psi_inf^{k-1}` integrates to a fixed value.
#[derive(Debug, Clone, Default)]
pub struct RubberTable {
    genus0_top: Rational,
    vanishing: HashMap<u32, u32>,
    entries: HashMap<RubberKey, Stored>,
}

impl RubberTable {
    pub fn from_json(origin: &str, text: &str) -> Result<Self, DataError> {
        let file: RubberFile = serde_json::from_str(text).map_err(|e| DataError::Parse {
            origin: origin.to_string(),
            message: e.to_string(),
        })?;
        if file.schema != RUBBER_SCHEMA {
            return Err(DataError::schema(
                origin,
                "schema",
                format!("expected {RUBBER_SCHEMA:?}, found {:?}", file.schema),
            ));
        }
        let _ = file.notes;
        let genus0_top = parse_value(origin, "genus0_top_power", &file.genus0_top_power.value)?;
        let _ = file.genus0_top_power.source;
        let mut vanishing = HashMap::new();
        for (i, v) in file.vanishing.iter().enumerate() {
            let _ = &v.source;
            if vanishing.insert(v.genus, v.psi_inf_from).is_some() {
                return Err(DataError::schema(
                    origin,
                    format!("vanishing[{i}]"),
                    "duplicate genus",
                ));
            }
        }
        let mut entries: HashMap<RubberKey, Stored> = HashMap::new();
        for (i, e) in file.entries.iter().enumerate() {
            let location = format!("entries[{i}]");
            let value = parse_value(origin, &location, &e.value)?;
            if e.genus == 0 || e.genus > MAX_HODGE_GENUS {
                return Err(DataError::schema(origin, &location, "rubber genus must be 1..=3"));
            }
            let key = RubberKey::new(e.genus, e.psi_inf, &e.lambda);
            if key.degree() as i64 != RubberKey::dimension(e.genus, 0) {
                return Err(DataError::schema(
                    origin,
                    &location,
                    format!("{key} is not of top degree"),
                ));
            }
            let forms = rewrite_lambda(e.genus, &e.lambda)
                .map_err(|err| DataError::schema(origin, &location, err.to_string()))?;
            if forms.len() != 1 {
                return Err(DataError::schema(
                    origin,
                    &location,
                    format!("{key} does not reduce to a single normal monomial"),
                ));
            }
            let (nf, c) = forms.into_iter().next().expect("one form");
            let nk = RubberKey::new(e.genus, e.psi_inf, &nf);
            let normalized = value / c;
            if let Some(prev) = entries.get(&nk) {
                if prev.value != normalized {
                    return Err(DataError::schema(
                        origin,
                        &location,
                        format!("inconsistent with {}", prev.source),
                    ));
                }
                continue;
            }
            entries.insert(
                nk,
                Stored {
                    value: normalized,
                    source: e.source.clone(),
                },
            );
        }
        Ok(RubberTable {
            genus0_top,
            vanishing,
            entries,
        })
    }

    pub fn load(src: &DataSource) -> Result<Self, DataError> {
        let (origin, text) = src.read(RUBBER_TABLE)?;
        RubberTable::from_json(&origin, &text)
    }
}

/// Hodge and rubber integrals backed by the tables and the psi recursion.
#[derive(Debug)]
pub struct HodgeOracle {
    table: HodgeTable,
    rubber: RubberTable,
    psi: PsiOracle,
    memo: Mutex<HashMap<HodgeMonomial, Rational>>,
}

impl HodgeOracle {
    pub fn new(table: HodgeTable, rubber: RubberTable) -> Self {
        HodgeOracle {
            table,
            rubber,
            psi: PsiOracle::new(),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn load(src: &DataSource) -> Result<Self, DataError> {
        Ok(HodgeOracle::new(HodgeTable::load(src)?, RubberTable::load(src)?))
    }

    pub fn table(&self) -> &HodgeTable {
        &self.table
    }

    pub fn psi(&self) -> &PsiOracle {
        &self.psi
    }

    /// `<m, [M̄_{g,n}]>`.
    pub fn intersect(&self, m: &HodgeMonomial) -> Result<Rational, HodgeError> {
        if m.genus > MAX_HODGE_GENUS {
            return Err(HodgeError::GenusOutOfRange(m.genus));
        }
        if m.lambda.len() != m.genus as usize {
            return Err(HodgeError::LambdaArity {
                expected: m.genus as usize,
                got: m.lambda.len(),
            });
        }
        if 2 * m.genus as i64 - 2 + m.psi.len() as i64 <= 0 {
            return Err(HodgeError::UnstableInput {
                genus: m.genus,
                points: m.psi.len(),
            });
        }
        let m = m.sorted();
        if m.degree() as i64 != m.dimension() {
            return Ok(Rational::zero());
        }
        if let Some(v) = self.memo.lock().unwrap_or_else(|e| e.into_inner()).get(&m) {
            return Ok(v.clone());
        }
        let v = self.reduce(&m)?;
        self.memo
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(m, v.clone());
        Ok(v)
    }

    fn reduce(&self, m: &HodgeMonomial) -> Result<Rational, HodgeError> {
        let g = m.genus;
        let n = m.psi.len();
        if m.lambda.iter().all(|&b| b == 0) {
            return Ok(self.psi.intersect(g, &m.psi)?);
        }
        let reduced_stable = 2 * g as i64 - 2 + (n as i64 - 1) > 0;
        if reduced_stable {
            if let Some(i) = m.psi.iter().position(|&a| a == 0) {
                let mut rest = m.psi.clone();
                rest.remove(i);
                let mut total = Rational::zero();
                for j in 0..rest.len() {
                    if rest[j] > 0 {
                        let mut e = rest.clone();
                        e[j] -= 1;
                        total += self.intersect(&HodgeMonomial::new(g, &e, &m.lambda))?;
                    }
                }
                return Ok(total);
            }
            if let Some(i) = m.psi.iter().position(|&a| a == 1) {
                let mut rest = m.psi.clone();
                rest.remove(i);
                let factor = int(2 * g as i64 - 2 + rest.len() as i64);
                return Ok(factor * self.intersect(&HodgeMonomial::new(g, &rest, &m.lambda))?);
            }
        }
        let mut total = Rational::zero();
        for (c, nf) in relation_rewrite(m)? {
            if nf.lambda.iter().all(|&b| b == 0) {
                total += c * self.psi.intersect(g, &nf.psi)?;
                continue;
            }
            let v = self
                .table
                .get(&nf)
                .ok_or_else(|| HodgeError::UnknownMonomial(nf.to_string()))?;
            total += c * v;
        }
        Ok(total)
    }

    /// `<key, [rubber]^vir>`.
    pub fn rubber(&self, key: &RubberKey) -> Result<Rational, HodgeError> {
        if key.genus > MAX_HODGE_GENUS {
            return Err(HodgeError::GenusOutOfRange(key.genus));
        }
        if key.lambda.len() != key.genus as usize {
            return Err(HodgeError::LambdaArity {
                expected: key.genus as usize,
                got: key.lambda.len(),
            });
        }
        let dim = RubberKey::dimension(key.genus, key.marked);
        if key.degree() as i64 != dim {
            return Ok(Rational::zero());
        }
        if key.genus == 0 {
            // dimension k - 1 is carried entirely by psi_inf
            return if key.marked >= 3 {
                Ok(self.rubber.genus0_top.clone())
            } else {
                Err(HodgeError::UnknownRubberKey(key.to_string()))
            };
        }
        if key.marked != 0 {
            return Err(HodgeError::UnknownRubberKey(key.to_string()));
        }
        if let Some(&from) = self.rubber.vanishing.get(&key.genus) {
            if key.psi_inf >= from {
                return Ok(Rational::zero());
            }
        }
        let mut total = Rational::zero();
        for (nf, c) in rewrite_lambda(key.genus, &key.lambda)? {
            let nk = RubberKey::new(key.genus, key.psi_inf, &nf);
            let v = self
                .rubber
                .entries
                .get(&nk)
                .ok_or_else(|| HodgeError::UnknownRubberKey(nk.to_string()))?;
            total += c * &v.value;
        }
        Ok(total)
    }
}

/// Polynomial in the lambda classes of one genus with rational-function coefficients.
pub type LambdaPoly = BTreeMap<Vec<u32>, EquivariantScalar>;

/// `sum_i sign_i lam_i w^{g-i}` where `alternate` gives sign (-1)^{g-i}.
fn lambda_linear(genus: u32, w: &EquivariantScalar, alternate: bool) -> LambdaPoly {
    let g = genus as usize;
    let mut p = LambdaPoly::new();
    for i in 0..=g {
        let mut c = w.pow((g - i) as u32);
        if alternate && (g - i) % 2 == 1 {
            c = -c;
        }
        let key = if i == 0 { vec![0; g] } else { unit(g, i - 1, 1) };
        p.insert(key, c);
    }
    p
}

fn lambda_mul(a: &LambdaPoly, b: &LambdaPoly) -> LambdaPoly {
    let mut out = LambdaPoly::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let k: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            let v = out.entry(k).or_insert_with(EquivariantScalar::zero);
            *v = &*v + &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Rewrites every monomial of a lambda polynomial to normal form.
pub fn lambda_normal_form(genus: u32, p: &LambdaPoly) -> Result<LambdaPoly, HodgeError> {
    let mut out = LambdaPoly::new();
    for (k, c) in p {
        for (nf, r) in rewrite_lambda(genus, k)? {
            let v = out.entry(nf).or_insert_with(EquivariantScalar::zero);
            *v = &*v + &c.scale(&r);
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// Checks `(sum (-1)^{g-i} lam_i w^{g-i}) (sum lam_i w^{g-i}) = (-1)^g w^{2g}`
/// modulo Mumford's relations.
pub fn mumford_product_check(genus: u32, w: &EquivariantScalar) -> Result<bool, HodgeError> {
    let prod = lambda_mul(
        &lambda_linear(genus, w, true),
        &lambda_linear(genus, w, false),
    );
    let nf = lambda_normal_form(genus, &prod)?;
    let mut expected = w.pow(2 * genus);
    if genus % 2 == 1 {
        expected = -expected;
    }
    let mut want = LambdaPoly::new();
    if !expected.is_zero() {
        want.insert(vec![0; genus as usize], expected);
    }
    Ok(nf == want)
}

/// `prod_w (sum_i (-1)^i lam_i w^{g-i})` reduced to normal form, for scalar weights.
pub fn hodge_twist_scalar(genus: u32, weights: &[EquivariantScalar]) -> Result<LambdaPoly, HodgeError> {
    let mut acc = LambdaPoly::new();
    acc.insert(vec![0; genus as usize], EquivariantScalar::one());
    for w in weights {
        let mut f = lambda_linear(genus, w, false);
        for (k, c) in f.iter_mut() {
            let i: u32 = k.iter().enumerate().map(|(j, &b)| (j as u32 + 1) * b).sum();
            if i % 2 == 1 {
                *c = -c.clone();
            }
        }
        acc = lambda_normal_form(genus, &lambda_mul(&acc, &f))?;
    }
    Ok(acc)
}

/// The weight polynomial `a1 - a2`, the tangent weight used throughout the examples.
pub fn weight_difference() -> EquivariantScalar {
    EquivariantScalar::from(&WeightPoly::a1() - &WeightPoly::a2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;

    fn oracle() -> HodgeOracle {
        HodgeOracle::load(&DataSource::embedded()).expect("shipped tables load")
    }

    fn h(g: u32, psi: &[u32], lam: &[u32]) -> Rational {
        oracle().intersect(&HodgeMonomial::new(g, psi, lam)).unwrap()
    }

    #[test]
    fn rewrites_table_one_chain() {
        let nf = rewrite_lambda(3, &[6, 0, 0]).unwrap();
        assert_eq!(nf.into_iter().collect::<Vec<_>>(), vec![(vec![1, 1, 1], int(16))]);
        assert!(rewrite_lambda(3, &[0, 0, 2]).unwrap().is_empty());
        assert!(rewrite_lambda(2, &[2, 1]).unwrap().is_empty());
        assert_eq!(
            rewrite_lambda(2, &[3, 0]).unwrap().into_iter().collect::<Vec<_>>(),
            vec![(vec![1, 1], int(2))]
        );
        assert!(matches!(
            rewrite_lambda(4, &[1, 0, 0, 0]),
            Err(HodgeError::GenusOutOfRange(4))
        ));
    }

    #[test]
    fn mumford_products() {
        let w = weight_difference();
        for g in 0..=3 {
            assert!(mumford_product_check(g, &w).unwrap(), "g={g}");
        }
        assert!(matches!(
            mumford_product_check(4, &w),
            Err(HodgeError::GenusOutOfRange(4))
        ));
    }

    #[test]
    fn table_values() {
        assert_eq!(h(3, &[], &[6, 0, 0]), rat(1, 90720));
        assert_eq!(h(3, &[], &[0, 3, 0]), rat(1, 725760));
        assert_eq!(h(3, &[], &[0, 0, 2]), int(0));
        assert_eq!(h(2, &[], &[3, 0]), rat(1, 2880));
        assert_eq!(h(2, &[2], &[2, 0]), rat(7, 2880));
        assert_eq!(h(1, &[0], &[1]), rat(1, 24));
        assert_eq!(h(3, &[4], &[0, 0, 1]), rat(31, 967680));
    }

    #[test]
    fn dilaton_and_string_bridges() {
        assert_eq!(h(2, &[1], &[1, 1]), int(2) * rat(1, 5760));
        assert_eq!(h(3, &[1], &[6, 0, 0]), int(4) * rat(1, 90720));
        assert_eq!(h(2, &[0, 4], &[1, 0]), h(2, &[3], &[1, 0]));
    }

    #[test]
    fn g0_with_lambda_vanishes_and_pure_psi_defers() {
        assert_eq!(h(0, &[0, 0, 0], &[]), int(1));
        assert_eq!(h(2, &[3, 2], &[0, 0]), rat(29, 5760));
    }

    #[test]
    fn rejects_out_of_range() {
        let o = oracle();
        assert_eq!(
            o.intersect(&HodgeMonomial::new(4, &[9], &[0, 0, 0, 0])),
            Err(HodgeError::GenusOutOfRange(4))
        );
        assert!(matches!(
            o.intersect(&HodgeMonomial::new(1, &[], &[1])),
            Err(HodgeError::UnstableInput { .. })
        ));
    }

    #[test]
    fn missing_entry_is_an_error() {
        let empty = HodgeTable::from_json("t", r#"{"schema":"gwverify.dm_intersections/1","entries":[]}"#)
            .unwrap();
        let o = HodgeOracle::new(empty, RubberTable::default());
        assert!(matches!(
            o.intersect(&HodgeMonomial::new(2, &[], &[1, 1])),
            Err(HodgeError::UnknownMonomial(_))
        ));
    }

    #[test]
    fn rubber_values_match_their_derivations() {
        let o = oracle();
        let lam = o.intersect(&HodgeMonomial::new(1, &[0], &[1])).unwrap();
        let m2 = o.intersect(&HodgeMonomial::new(2, &[], &[3, 0])).unwrap();
        let r = |g, k, l: &[u32]| o.rubber(&RubberKey::new(g, k, l)).unwrap();
        assert_eq!(r(1, 0, &[1]), lam);
        assert_eq!(r(1, 1, &[0]), int(0));
        assert_eq!(r(2, 0, &[3, 0]), int(2) * &m2);
        assert_eq!(r(2, 1, &[2, 0]), &lam * &lam);
        assert_eq!(r(2, 2, &[1, 0]), int(0));
        let l5 = o.intersect(&HodgeMonomial::new(3, &[2], &[5, 0, 0])).unwrap()
            - o.intersect(&HodgeMonomial::new(3, &[1], &[6, 0, 0])).unwrap();
        assert_eq!(r(3, 0, &[5, 0, 0]), l5);
        assert_eq!(r(3, 1, &[4, 0, 0]), int(8) * &lam * &m2);
        assert_eq!(r(3, 2, &[3, 0, 0]), &lam * &lam * &lam);
        assert_eq!(r(3, 2, &[0, 0, 1]), rat(1, 6) * &lam * &lam * &lam);
        assert_eq!(r(3, 3, &[0, 1, 0]), int(0));
        let k = RubberKey {
            genus: 0,
            marked: 4,
            psi_inf: 3,
            lambda: vec![],
        };
        assert_eq!(o.rubber(&k).unwrap(), int(1));
        assert!(matches!(
            o.rubber(&RubberKey::new(3, 0, &[0, 1, 1]).clone()),
            Ok(_)
        ));
    }
}
