//! Virtual localization sums over torus-fixed loci described in data files.
//!
//! Each locus carries its base, an insertion, the Euler class of the
//! obstruction bundle and the Euler class of the deformation space. The
//! contribution is `mult * ∫ insertion * obstruction / deformation`. Loci that
//! pair with an external class not expressible in the ring (the pullback of a
//! point or curve class from a moduli space of curves) carry a `cut_down`
//! block: the class degree and the value of each surviving pairing.

use std::fmt;
use std::thread;

use serde::Deserialize;
use thiserror::Error;

use crate::cohomology_ring::{parse_class, parse_scalar, split_product, BaseSpace, Monomial, RingError, TautClass};
use crate::data::{DataError, DataSource};
use crate::exact_arith::{parse_rational, EquivariantScalar, Rational};
use crate::hodge_oracle::HodgeOracle;

pub const DIAGRAM_SCHEMA: &str = "gwverify.diagram/1";

/// Shipped problems: `(name, file)`.
pub const BUILTINS: &[(&str, &str)] = &[
    ("pushforward-degree-g2", "diagrams/pushforward_degree_g2.json"),
    ("pushforward-degree-g3", "diagrams/pushforward_degree_g3.json"),
    ("p1-genus2-absolute", "diagrams/p1_genus2_absolute.json"),
    ("p1-genus2-relative", "diagrams/p1_genus2_relative.json"),
    ("p4-absolute", "diagrams/p4_genus3_absolute.json"),
    ("p4-relative-delta1", "diagrams/p4_genus3_relative.json"),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizationError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("locus {locus}: {source}")]
    Ring { locus: String, source: RingError },
    #[error("locus {0}: deformation class is not invertible")]
    NonInvertibleDeformation(String),
    #[error("locus {locus}: no cut-down rule for surviving monomial {monomial}")]
    MissingCutDownRule { locus: String, monomial: String },
    #[error("locus {0} is tagged as vanishing")]
    VanishingLocus(String),
    #[error("sum is not constant in the weights: {0}")]
    NonConstantSum(String),
    #[error("{what}: expected {expected}, got {got}")]
    ExpectationMismatch {
        what: String,
        expected: String,
        got: String,
    },
    #[error("unknown builtin problem {0:?}")]
    UnknownBuiltin(String),
}

fn ring_err(locus: &str) -> impl Fn(RingError) -> LocalizationError + '_ {
    move |e| match e {
        RingError::NonInvertible => LocalizationError::NonInvertibleDeformation(locus.to_string()),
        e => LocalizationError::Ring {
            locus: locus.to_string(),
            source: e,
        },
    }
}

// ---- file format ----

fn one() -> String {
    "1".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    schema: String,
    label: String,
    #[serde(default)]
    notes: Vec<String>,
    #[serde(default = "one")]
    symmetry_multiplier: String,
    #[serde(default)]
    weight_swap: bool,
    #[serde(default)]
    expected: Option<String>,
    loci: Vec<RawLocus>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLocus {
    label: String,
    base: Vec<String>,
    #[serde(default = "one")]
    multiplicity: String,
    #[serde(default = "one")]
    insertion: String,
    #[serde(default = "one")]
    obstruction: String,
    #[serde(default = "one")]
    deformation: String,
    #[serde(default)]
    vanishes: Option<String>,
    source: String,
    #[serde(default)]
    expected: Option<String>,
    #[serde(default)]
    cut_down: Option<RawCutDown>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCutDown {
    class_degree: u32,
    #[serde(default)]
    rules: Vec<RawRule>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    monomial: String,
    base: Vec<String>,
    value: String,
}

// ---- resolved problem ----

/// One pairing `<kappa * m>` expressed as an integral over another base.
#[derive(Debug, Clone, PartialEq)]
pub struct CutDownRule {
    pub monomial: Monomial,
    pub value: TautClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutDown {
    pub class_degree: u32,
    pub rules: Vec<CutDownRule>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedLocus {
    pub label: String,
    pub base: BaseSpace,
    pub multiplicity: EquivariantScalar,
    pub insertion: TautClass,
    pub obstruction: TautClass,
    /// Multiplicative pieces of the deformation Euler class, each with its power.
    pub deformation: Vec<(TautClass, u32)>,
    pub vanishes: Option<String>,
    pub source: String,
    pub expected: Option<EquivariantScalar>,
    pub cut_down: Option<CutDown>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationProblem {
    pub label: String,
    pub origin: String,
    pub notes: Vec<String>,
    pub symmetry_multiplier: Rational,
    pub weight_swap: bool,
    pub expected: Option<Rational>,
    pub loci: Vec<FixedLocus>,
}

/// Parses and type-checks a diagram file.
pub fn parse_problem(origin: &str, text: &str) -> Result<LocalizationProblem, LocalizationError> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| DataError::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    })?;
    let schema = |loc: &str, msg: String| DataError::schema(origin, loc, msg);
    if raw.schema != DIAGRAM_SCHEMA {
        return Err(schema("schema", format!("expected {DIAGRAM_SCHEMA:?}, found {:?}", raw.schema)).into());
    }
    if raw.loci.is_empty() {
        return Err(schema("loci", "at least one locus is required".into()).into());
    }
    let symmetry_multiplier = parse_rational(&raw.symmetry_multiplier)
        .map_err(|e| schema("symmetry_multiplier", e.to_string()))?;
    let expected = raw
        .expected
        .as_deref()
        .map(parse_rational)
        .transpose()
        .map_err(|e| schema("expected", e.to_string()))?;
    let mut loci = Vec::with_capacity(raw.loci.len());
    for (i, l) in raw.loci.into_iter().enumerate() {
        let at = |field: &str| format!("loci[{i}].{field}");
        if l.source.trim().is_empty() {
            return Err(schema(&at("source"), "empty source".into()).into());
        }
        let base = BaseSpace::parse(&l.base).map_err(|e| schema(&at("base"), e.to_string()))?;
        let class = |field: &str, src: &str| {
            parse_class(&base, src).map_err(|e| schema(&at(field), e.to_string()))
        };
        let multiplicity = parse_scalar(&l.multiplicity).map_err(|e| schema(&at("multiplicity"), e.to_string()))?;
        let insertion = class("insertion", &l.insertion)?;
        let obstruction = class("obstruction", &l.obstruction)?;
        let pieces = split_product(&l.deformation).map_err(|e| schema(&at("deformation"), e.to_string()))?;
        let mut deformation = Vec::with_capacity(pieces.len());
        for (src, k) in pieces {
            deformation.push((class("deformation", &src)?, k));
        }
        let expected = l
            .expected
            .as_deref()
            .map(parse_scalar)
            .transpose()
            .map_err(|e| schema(&at("expected"), e.to_string()))?;
        let cut_down = match l.cut_down {
            None => None,
            Some(cd) => {
                if cd.class_degree > base.dimension() {
                    return Err(schema(
                        &at("cut_down.class_degree"),
                        format!("exceeds the base dimension {}", base.dimension()),
                    )
                    .into());
                }
                let mut rules = Vec::new();
                for (j, r) in cd.rules.iter().enumerate() {
                    let rat = |field: &str| format!("loci[{i}].cut_down.rules[{j}].{field}");
                    let m = parse_class(&base, &r.monomial).map_err(|e| schema(&rat("monomial"), e.to_string()))?;
                    let mut terms = m.terms();
                    let monomial = match (terms.next(), terms.next()) {
                        (Some((mono, c)), None) if *c == EquivariantScalar::one() => mono.clone(),
                        _ => return Err(schema(&rat("monomial"), "not a single monomial".into()).into()),
                    };
                    if base.monomial_degree(&monomial) + cd.class_degree != base.dimension() {
                        return Err(schema(&rat("monomial"), "degree does not complement the class degree".into()).into());
                    }
                    let rbase = BaseSpace::parse(&r.base).map_err(|e| schema(&rat("base"), e.to_string()))?;
                    let value = parse_class(&rbase, &r.value).map_err(|e| schema(&rat("value"), e.to_string()))?;
                    rules.push(CutDownRule { monomial, value });
                }
                Some(CutDown {
                    class_degree: cd.class_degree,
                    rules,
                })
            }
        };
        loci.push(FixedLocus {
            label: l.label,
            base,
            multiplicity,
            insertion,
            obstruction,
            deformation,
            vanishes: l.vanishes,
            source: l.source,
            expected,
            cut_down,
        });
    }
    Ok(LocalizationProblem {
        label: raw.label,
        origin: origin.to_string(),
        notes: raw.notes,
        symmetry_multiplier,
        weight_swap: raw.weight_swap,
        expected,
        loci,
    })
}

pub fn load_problem(source: &DataSource, rel: &str) -> Result<LocalizationProblem, LocalizationError> {
    let (origin, text) = source.read(rel)?;
    parse_problem(&origin, &text)
}

/// Reads a diagram file from an arbitrary path.
pub fn load_problem_file(path: &std::path::Path) -> Result<LocalizationProblem, LocalizationError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| DataError::Io {
        path: origin.clone(),
        message: e.to_string(),
    })?;
    parse_problem(&origin, &text)
}

pub fn builtin(source: &DataSource, name: &str) -> Result<LocalizationProblem, LocalizationError> {
    let rel = BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| *f)
        .ok_or_else(|| LocalizationError::UnknownBuiltin(name.to_string()))?;
    load_problem(source, rel)
}

/// `mult * ∫ insertion * obstruction / deformation`, or the cut-down pairing.
pub fn locus_contribution(locus: &FixedLocus, oracle: &HodgeOracle) -> Result<EquivariantScalar, LocalizationError> {
    if locus.vanishes.is_some() {
        return Err(LocalizationError::VanishingLocus(locus.label.clone()));
    }
    let err = ring_err(&locus.label);
    let mut integrand = locus.insertion.mul(&locus.obstruction).map_err(&err)?;
    for (piece, k) in &locus.deformation {
        let inv = match piece.as_scalar() {
            Some(s) if s.is_zero() => return Err(LocalizationError::NonInvertibleDeformation(locus.label.clone())),
            Some(s) => TautClass::scalar(&locus.base, s.recip().map_err(|e| err(e.into()))?),
            None => piece.invert().map_err(&err)?,
        };
        integrand = integrand.mul(&inv.pow(*k).map_err(&err)?).map_err(&err)?;
    }
    let value = match &locus.cut_down {
        None => integrand.integrate(oracle).map_err(&err)?,
        Some(cd) => {
            let part = integrand.component(locus.base.dimension() - cd.class_degree);
            let mut total = EquivariantScalar::zero();
            for (m, c) in part.terms() {
                let rule = cd.rules.iter().find(|r| &r.monomial == m).ok_or_else(|| {
                    LocalizationError::MissingCutDownRule {
                        locus: locus.label.clone(),
                        monomial: locus.base.render_monomial(m),
                    }
                })?;
                let v = rule.value.integrate(oracle).map_err(&err)?;
                total = &total + &(c * &v);
            }
            total
        }
    };
    let value = &value * &locus.multiplicity;
    if let Some(want) = &locus.expected {
        if *want != value {
            return Err(LocalizationError::ExpectationMismatch {
                what: format!("locus {}", locus.label),
                expected: want.to_string(),
                got: value.to_string(),
            });
        }
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq)]
pub enum LocusOutcome {
    Contributes(EquivariantScalar),
    Vanishes(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemEvaluation {
    pub label: String,
    /// Per-locus outcomes sorted by locus label.
    pub loci: Vec<(String, LocusOutcome)>,
    pub total: Rational,
}

impl fmt::Display for ProblemEvaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.label)?;
        for (label, o) in &self.loci {
            match o {
                LocusOutcome::Contributes(v) => writeln!(f, "  {label}: {v}")?,
                LocusOutcome::Vanishes(r) => writeln!(f, "  {label}: 0 ({r})")?,
            }
        }
        write!(f, "  total: {}", self.total)
    }
}

/// Evaluates every locus (concurrently) and assembles the total.
pub fn evaluate_problem(p: &LocalizationProblem, oracle: &HodgeOracle) -> Result<ProblemEvaluation, LocalizationError> {
    let results: Vec<Result<LocusOutcome, LocalizationError>> = thread::scope(|s| {
        let handles: Vec<_> = p
            .loci
            .iter()
            .map(|l| {
                s.spawn(move || match &l.vanishes {
                    Some(r) => Ok(LocusOutcome::Vanishes(r.clone())),
                    None => locus_contribution(l, oracle).map(LocusOutcome::Contributes),
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("locus evaluation panicked"))
            .collect()
    });
    let mut loci = Vec::with_capacity(results.len());
    for (l, r) in p.loci.iter().zip(results) {
        loci.push((l.label.clone(), r?));
    }
    loci.sort_by(|a, b| a.0.cmp(&b.0));
    let mut sum = EquivariantScalar::zero();
    for (_, o) in &loci {
        if let LocusOutcome::Contributes(v) = o {
            sum = &sum + v;
        }
    }
    if p.weight_swap {
        sum = &sum + &sum.swap_weights();
    }
    let sum = sum.scale(&p.symmetry_multiplier);
    let total = sum
        .is_constant()
        .ok_or_else(|| LocalizationError::NonConstantSum(sum.to_string()))?;
    if let Some(want) = &p.expected {
        if *want != total {
            return Err(LocalizationError::ExpectationMismatch {
                what: format!("problem {}", p.label),
                expected: want.to_string(),
                got: total.to_string(),
            });
        }
    }
    Ok(ProblemEvaluation {
        label: p.label.clone(),
        loci,
        total,
    })
}

pub fn problem_total(p: &LocalizationProblem, oracle: &HodgeOracle) -> Result<Rational, LocalizationError> {
    evaluate_problem(p, oracle).map(|e| e.total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;

    fn oracle() -> HodgeOracle {
        HodgeOracle::load(&DataSource::embedded()).unwrap()
    }

    fn total(name: &str) -> Rational {
        let p = builtin(&DataSource::embedded(), name).unwrap();
        problem_total(&p, &oracle()).unwrap()
    }

    #[test]
    fn pushforward_degrees() {
        assert_eq!(total("pushforward-degree-g2"), rat(1, 1));
        assert_eq!(total("pushforward-degree-g3"), rat(4, 1));
    }

    #[test]
    fn p1_genus2_pair() {
        assert_eq!(total("p1-genus2-absolute"), rat(1, 240));
        assert_eq!(total("p1-genus2-relative"), rat(19, 5760));
    }

    #[test]
    fn p4_genus3_pair() {
        assert_eq!(total("p4-absolute"), rat(-37, 82944));
        assert_eq!(total("p4-relative-delta1"), rat(-97, 193536));
    }

    #[test]
    fn loaded_shapes() {
        let src = DataSource::embedded();
        let p = builtin(&src, "pushforward-degree-g2").unwrap();
        assert_eq!(p.loci.len(), 3);
        assert_eq!(p.loci.iter().filter(|l| l.vanishes.is_some()).count(), 2);
        let p = builtin(&src, "pushforward-degree-g3").unwrap();
        assert_eq!(p.loci.len(), 4);
    }

    #[test]
    fn schema_errors_carry_location() {
        let empty = r#"{"schema":"gwverify.diagram/1","label":"x","loci":[]}"#;
        match parse_problem("t", empty) {
            Err(LocalizationError::Data(DataError::Schema { location, .. })) => assert_eq!(location, "loci"),
            other => panic!("{other:?}"),
        }
        let bad = r#"{"schema":"gwverify.diagram/1","label":"x","loci":[
            {"label":"a","base":["M(1,1)"],"obstruction":"psi[0,2]","source":"s"}]}"#;
        match parse_problem("t", bad) {
            Err(LocalizationError::Data(DataError::Schema { location, .. })) => {
                assert_eq!(location, "loci[0].obstruction")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_cut_down_rule_is_an_error() {
        let text = r#"{"schema":"gwverify.diagram/1","label":"x","loci":[
            {"label":"a","base":["M(2,1)"],"obstruction":"hodgetwist(0; a1-a2)",
             "deformation":"(a1-a2)*(a1-a2-psi[0,1])","source":"s",
             "cut_down":{"class_degree":3,"rules":[{"monomial":"psi[0,1]","base":["pt"],"value":"2"}]}}]}"#;
        let p = parse_problem("t", text).unwrap();
        assert!(matches!(
            locus_contribution(&p.loci[0], &oracle()),
            Err(LocalizationError::MissingCutDownRule { .. })
        ));
    }

    #[test]
    fn non_constant_sum_is_reported() {
        let text = r#"{"schema":"gwverify.diagram/1","label":"x","loci":[
            {"label":"a","base":["M(1,1)"],"obstruction":"a1*psi[0,1]","source":"s"}]}"#;
        let p = parse_problem("t", text).unwrap();
        assert!(matches!(problem_total(&p, &oracle()), Err(LocalizationError::NonConstantSum(_))));
    }

    #[test]
    fn expectation_mismatch() {
        let text = r#"{"schema":"gwverify.diagram/1","label":"x","expected":"1/2","loci":[
            {"label":"a","base":["M(1,1)"],"insertion":"psi[0,1]","source":"s"}]}"#;
        let p = parse_problem("t", text).unwrap();
        assert!(matches!(problem_total(&p, &oracle()), Err(LocalizationError::ExpectationMismatch { .. })));
    }
}
