//! Chern classes of spaces whose cohomology is generated by one hyperplane
//! class x: projective spaces, hypersurfaces of degree d (kept symbolic as a
//! polynomial in d when needed), and the P1-bundle P(N + O) over a
//! hypersurface. Also the genus 1 degree 0 invariants built from them.

use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::exact_arith::{int, rat, Rational, UniPoly};
use crate::psi_recursion::psi_intersect;

/// Polynomial in the hypersurface degree d.
pub type DeltaPoly = UniPoly;

pub const DELTA_VAR: &str = "d";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error("dimension {0} is outside the supported range")]
    DimensionOutOfRange(usize),
    #[error("{sub} is not declared as a divisor of {ambient}")]
    InclusionUndeclared { sub: String, ambient: String },
    #[error("Chern degree {k} exceeds dimension {dim}")]
    DegreeOutOfRange { k: usize, dim: usize },
    #[error("the two log-tangent computations disagree: {expansion} vs {difference}")]
    InternalMismatch { expansion: String, difference: String },
    #[error("total Chern class must start with 1")]
    BadChernClass,
}

/// `V = class * x` inside the named ambient space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    pub ambient: String,
    pub class: DeltaPoly,
}

/// Total Chern class `sum c_k x^k` and the degree `<x^dim>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernData {
    name: String,
    dim: usize,
    chern: Vec<DeltaPoly>,
    degree: DeltaPoly,
    divisor: Option<Divisor>,
}

impl ChernData {
    pub fn custom(name: &str, dim: usize, chern: Vec<DeltaPoly>, degree: DeltaPoly) -> Result<Self, ChernError> {
        if chern.first() != Some(&DeltaPoly::one()) {
            return Err(ChernError::BadChernClass);
        }
        let mut chern = chern;
        chern.resize(dim + 1, DeltaPoly::zero());
        Ok(ChernData {
            name: name.to_string(),
            dim,
            chern,
            degree,
            divisor: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> &DeltaPoly {
        &self.degree
    }

    pub fn divisor(&self) -> Option<&Divisor> {
        self.divisor.as_ref()
    }

    /// Coefficient of x^k in c_k.
    pub fn c(&self, k: usize) -> DeltaPoly {
        self.chern.get(k).cloned().unwrap_or_else(DeltaPoly::zero)
    }

    pub fn chern_vector(&self) -> &[DeltaPoly] {
        &self.chern
    }

    /// `<coeff * x^power>`.
    pub fn integrate(&self, coeff: &DeltaPoly, power: usize) -> DeltaPoly {
        if power == self.dim {
            coeff * &self.degree
        } else {
            DeltaPoly::zero()
        }
    }

    /// `<c_{k1} c_{k2} ...>`.
    pub fn chern_number(&self, ks: &[usize]) -> DeltaPoly {
        let power: usize = ks.iter().sum();
        let coeff = ks.iter().fold(DeltaPoly::one(), |acc, &k| &acc * &self.c(k));
        self.integrate(&coeff, power)
    }

    pub fn euler_char(&self) -> DeltaPoly {
        self.chern_number(&[self.dim])
    }
}

impl fmt::Display for ChernData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.chern.iter().map(|c| c.render(DELTA_VAR)).collect();
        write!(
            f,
            "{} (dim {}): c = [{}], <x^{}> = {}",
            self.name,
            self.dim,
            cs.join(", "),
            self.dim,
            self.degree.render(DELTA_VAR)
        )
    }
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut r = Rational::one();
    for i in 0..k {
        r = r * int((n - i) as i64) / int(i as i64 + 1);
    }
    r
}

pub fn projective_space(n: usize) -> Result<ChernData, ChernError> {
    if n == 0 || n > 32 {
        return Err(ChernError::DimensionOutOfRange(n));
    }
    let chern = (0..=n).map(|k| DeltaPoly::constant(binomial(n + 1, k))).collect();
    ChernData::custom(&format!("P{n}"), n, chern, DeltaPoly::one())
}

/// Degree `delta` hypersurface of P^n: `c = (1+x)^{n+1} / (1 + delta x)`.
pub fn hypersurface(n: usize, delta: &DeltaPoly) -> Result<ChernData, ChernError> {
    let ambient = projective_space(n)?;
    let dim = n - 1;
    let neg = -delta;
    let mut chern = Vec::with_capacity(dim + 1);
    for k in 0..=dim {
        let mut ck = DeltaPoly::zero();
        for i in 0..=k {
            ck = &ck + &neg.pow((k - i) as u32).scale(&binomial(n + 1, i));
        }
        chern.push(ck);
    }
    let name = match delta.as_constant() {
        Some(d) => format!("V{d} in P{n}"),
        None => format!("V({}) in P{n}", delta.render(DELTA_VAR)),
    };
    let mut v = ChernData::custom(&name, dim, chern, delta.clone())?;
    v.divisor = Some(Divisor {
        ambient: ambient.name,
        class: delta.clone(),
    });
    Ok(v)
}

pub fn hypersurface_numeric(n: usize, delta: i64) -> Result<ChernData, ChernError> {
    hypersurface(n, &DeltaPoly::constant(int(delta)))
}

/// Degree d hypersurface with d left symbolic.
pub fn hypersurface_symbolic(n: usize) -> Result<ChernData, ChernError> {
    hypersurface(n, &DeltaPoly::var())
}

fn check_inclusion(x: &ChernData, v: &ChernData) -> Result<DeltaPoly, ChernError> {
    match &v.divisor {
        Some(d) if d.ambient == x.name && v.dim + 1 == x.dim => Ok(d.class.clone()),
        _ => Err(ChernError::InclusionUndeclared {
            sub: v.name.clone(),
            ambient: x.name.clone(),
        }),
    }
}

/// `c(X)|_V == c(V) (1 + D)|_V` through degree dim V.
pub fn adjunction_holds(x: &ChernData, v: &ChernData) -> Result<bool, ChernError> {
    let d = check_inclusion(x, v)?;
    Ok((0..=v.dim).all(|k| {
        let lhs = x.c(k);
        let rhs = if k == 0 { v.c(0) } else { &v.c(k) + &(&v.c(k - 1) * &d) };
        lhs == rhs
    }))
}

/// `<alpha c_k(TX(-log V)), X>` with `alpha = coeff * x^{n-k}`.
///
/// Computed twice: from the expansion of `c(X) (1 + D)^{-1}` on X, and as
/// `<alpha c_k(X), X> - <alpha c_{k-1}(V), V>` using V's own Chern data.
pub fn log_tangent_pairing(x: &ChernData, v: &ChernData, k: usize, coeff: &DeltaPoly) -> Result<DeltaPoly, ChernError> {
    let d = check_inclusion(x, v)?;
    let n = x.dim;
    if k > n {
        return Err(ChernError::DegreeOutOfRange { k, dim: n });
    }
    let head = x.integrate(&(coeff * &x.c(k)), n);

    let mut expansion = head.clone();
    for i in 0..k {
        let t = x.integrate(&(&(coeff * &x.c(k - 1 - i)) * &d.pow(1 + i as u32)), n);
        expansion = if i % 2 == 0 { &expansion - &t } else { &expansion + &t };
    }

    let difference = if k == 0 {
        head
    } else {
        &head - &v.integrate(&(coeff * &v.c(k - 1)), n - 1)
    };

    if expansion != difference {
        return Err(ChernError::InternalMismatch {
            expansion: expansion.render(DELTA_VAR),
            difference: difference.render(DELTA_VAR),
        });
    }
    Ok(expansion)
}

/// `P(N + O)` over a divisor V with normal bundle N = O(D)|_V.
///
/// Classes are `a + b*z` with z the tautological class, `z^2 = -c1(N) z`
/// and `z` integrating to 1 on the fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineBundleCompletion {
    base: ChernData,
    normal: DeltaPoly,
}

/// Homogeneous class `a x^j + b x^{j-1} z` on the completion.
#[derive(Debug, Clone, PartialEq, Eq)]
struct FiberClass {
    degree: usize,
    a: DeltaPoly,
    b: DeltaPoly,
}

impl LineBundleCompletion {
    pub fn over(x: &ChernData, v: &ChernData) -> Result<Self, ChernError> {
        let d = check_inclusion(x, v)?;
        Ok(LineBundleCompletion {
            base: v.clone(),
            normal: d,
        })
    }

    pub fn dim(&self) -> usize {
        self.base.dim + 1
    }

    fn mul(&self, p: &FiberClass, q: &FiberClass) -> FiberClass {
        let zz = -&self.normal;
        FiberClass {
            degree: p.degree + q.degree,
            a: &p.a * &q.a,
            b: &(&(&p.a * &q.b) + &(&p.b * &q.a)) + &(&(&p.b * &q.b) * &zz),
        }
    }

    fn integrate(&self, c: &FiberClass) -> DeltaPoly {
        if c.degree != self.dim() {
            return DeltaPoly::zero();
        }
        self.base.integrate(&c.b, self.base.dim)
    }

    /// `c(TV) (1 + z)(1 + z + c1(N))`, graded.
    fn total_chern(&self) -> Vec<FiberClass> {
        let n = self.dim();
        let zero = |j| FiberClass {
            degree: j,
            a: DeltaPoly::zero(),
            b: DeltaPoly::zero(),
        };
        let base: Vec<FiberClass> = (0..=n)
            .map(|j| FiberClass {
                degree: j,
                a: self.base.c(j),
                b: DeltaPoly::zero(),
            })
            .collect();
        let one_plus_z = [
            FiberClass { degree: 0, a: DeltaPoly::one(), b: DeltaPoly::zero() },
            FiberClass { degree: 1, a: DeltaPoly::zero(), b: DeltaPoly::one() },
        ];
        let one_plus_z_n = [
            FiberClass { degree: 0, a: DeltaPoly::one(), b: DeltaPoly::zero() },
            FiberClass { degree: 1, a: self.normal.clone(), b: DeltaPoly::one() },
        ];
        let mut acc = base;
        for factor in [&one_plus_z, &one_plus_z_n] {
            let mut next: Vec<FiberClass> = (0..=n).map(zero).collect();
            for p in &acc {
                for q in factor.iter() {
                    if p.degree + q.degree > n {
                        continue;
                    }
                    let r = self.mul(p, q);
                    let slot = &mut next[r.degree];
                    slot.a = &slot.a + &r.a;
                    slot.b = &slot.b + &r.b;
                }
            }
            acc = next;
        }
        acc
    }

    pub fn euler_char(&self) -> DeltaPoly {
        let c = self.total_chern();
        self.integrate(&c[self.dim()])
    }

    /// `<pi^*(coeff x) c_{n-1}>` on the completion.
    pub fn pullback_pairing(&self, coeff: &DeltaPoly) -> DeltaPoly {
        let c = self.total_chern();
        let alpha = FiberClass {
            degree: 1,
            a: coeff.clone(),
            b: DeltaPoly::zero(),
        };
        self.integrate(&self.mul(&alpha, &c[self.dim() - 1]))
    }
}

/// Insertion of a genus 1 degree 0 invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenusOneInsertion {
    /// Point class of M(1,1) with no constraint on the image.
    DmPoint,
    /// `coeff * x` pulled back by the evaluation map.
    Divisor(DeltaPoly),
}

fn lambda_m11() -> Rational {
    // psi_1 = lambda_1 on M(1,1)
    psi_intersect(1, &[1]).expect("M(1,1) is stable")
}

/// Absolute invariant: `chi(X)/2` or `-<alpha c_{n-1}(X)>/24`.
pub fn gw_genus1_deg0_absolute(x: &ChernData, ins: &GenusOneInsertion) -> DeltaPoly {
    match ins {
        GenusOneInsertion::DmPoint => x.euler_char().scale(&rat(1, 2)),
        GenusOneInsertion::Divisor(a) => {
            let n = x.dim;
            x.integrate(&(a * &x.c(n - 1)), n).scale(&-lambda_m11())
        }
    }
}

/// Invariant relative to V, through the log tangent bundle.
pub fn gw_genus1_deg0_relative(x: &ChernData, v: &ChernData, ins: &GenusOneInsertion) -> Result<DeltaPoly, ChernError> {
    let n = x.dim;
    match ins {
        GenusOneInsertion::DmPoint => Ok(log_tangent_pairing(x, v, n, &DeltaPoly::one())?.scale(&rat(1, 2))),
        GenusOneInsertion::Divisor(a) => Ok(log_tangent_pairing(x, v, n - 1, a)?.scale(&-lambda_m11())),
    }
}

/// Invariant of `P(N + O)` relative to its infinity section (a copy of V).
pub fn gw_genus1_deg0_bundle(x: &ChernData, v: &ChernData, ins: &GenusOneInsertion) -> Result<DeltaPoly, ChernError> {
    let p = LineBundleCompletion::over(x, v)?;
    let n = x.dim;
    match ins {
        GenusOneInsertion::DmPoint => Ok((&p.euler_char() - &v.euler_char()).scale(&rat(1, 2))),
        GenusOneInsertion::Divisor(a) => {
            let on_v = v.integrate(&(a * &v.c(n - 2)), n - 1);
            Ok((&p.pullback_pairing(a) - &on_v).scale(&-lambda_m11()))
        }
    }
}

/// Absolute, relative and bundle-side values, and whether the first is the sum of the others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusOneSplit {
    pub absolute: DeltaPoly,
    pub relative: DeltaPoly,
    pub bundle: DeltaPoly,
}

impl GenusOneSplit {
    pub fn consistent(&self) -> bool {
        self.absolute == &self.relative + &self.bundle
    }
}

pub fn genus1_split(x: &ChernData, v: &ChernData, ins: &GenusOneInsertion) -> Result<GenusOneSplit, ChernError> {
    Ok(GenusOneSplit {
        absolute: gw_genus1_deg0_absolute(x, ins),
        relative: gw_genus1_deg0_relative(x, v, ins)?,
        bundle: gw_genus1_deg0_bundle(x, v, ins)?,
    })
}

pub fn constant(d: &DeltaPoly) -> Option<Rational> {
    d.as_constant()
}

pub fn delta_at(d: &DeltaPoly, delta: i64) -> Rational {
    d.eval(&int(delta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: i64) -> DeltaPoly {
        DeltaPoly::constant(int(n))
    }

    #[test]
    fn projective_euler_numbers() {
        for n in 1..=6 {
            assert_eq!(projective_space(n).unwrap().euler_char(), k(n as i64 + 1));
        }
        assert_eq!(projective_space(1).unwrap().c(1), k(2));
        assert!(projective_space(0).is_err());
    }

    #[test]
    fn quintic_threefold() {
        let v = hypersurface_numeric(4, 5).unwrap();
        assert_eq!(v.euler_char(), k(-200));
        let v1 = hypersurface_numeric(4, 1).unwrap();
        assert_eq!(v1.c(1), k(4));
        assert_eq!(v1.euler_char(), k(4));
    }

    #[test]
    fn symbolic_bracket() {
        let v = hypersurface_symbolic(4).unwrap();
        let bracket = &v.chern_number(&[1, 2]) - &v.chern_number(&[3]);
        // 5 d (d^2 - 5 d + 8)
        let want = DeltaPoly::from_coeffs(vec![int(0), int(40), int(-25), int(5)]);
        assert_eq!(bracket, want);
    }

    #[test]
    fn log_tangent_examples() {
        let p1 = projective_space(1).unwrap();
        for d in 1..=4 {
            let pts = hypersurface_numeric(1, d).unwrap();
            assert_eq!(log_tangent_pairing(&p1, &pts, 1, &k(1)).unwrap(), k(2 - d));
        }
        let p4 = projective_space(4).unwrap();
        let v1 = hypersurface_numeric(4, 1).unwrap();
        assert_eq!(log_tangent_pairing(&p4, &v1, 4, &k(1)).unwrap(), k(1));
        assert_eq!(log_tangent_pairing(&p4, &v1, 0, &k(1)).unwrap(), k(1));
        assert!(matches!(
            log_tangent_pairing(&p4, &p4, 1, &k(1)),
            Err(ChernError::InclusionUndeclared { .. })
        ));
    }

    #[test]
    fn genus_one_values() {
        let p4 = projective_space(4).unwrap();
        let v1 = hypersurface_numeric(4, 1).unwrap();
        assert_eq!(gw_genus1_deg0_absolute(&p4, &GenusOneInsertion::DmPoint), DeltaPoly::constant(rat(5, 2)));
        assert_eq!(
            gw_genus1_deg0_relative(&p4, &v1, &GenusOneInsertion::DmPoint).unwrap(),
            DeltaPoly::constant(rat(1, 2))
        );
    }

    #[test]
    fn completion_doubles_euler_number() {
        let p4 = projective_space(4).unwrap();
        let v = hypersurface_symbolic(4).unwrap();
        let p = LineBundleCompletion::over(&p4, &v).unwrap();
        assert_eq!(p.euler_char(), v.euler_char().scale(&int(2)));
    }
}
