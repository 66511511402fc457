//! Pure psi intersection numbers <tau_{d1} ... tau_{dn}>_g on M̄_{g,n}.
//!
//! Evaluation uses the string and dilaton equations where they apply and the
//! DVV (Virasoro) recursion on the largest exponent otherwise.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_arith::{int, Rational};

pub const MAX_GENUS: u32 = 6;
pub const MAX_POINTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PsiError {
    #[error("unstable moduli space: g={genus}, n={points}")]
    UnstableInput { genus: u32, points: usize },
    #[error("outside the supported range (g <= {MAX_GENUS}, n <= {MAX_POINTS}): g={genus}, n={points}")]
    ResourceBound { genus: u32, points: usize },
    #[error("no marked point with psi exponent 0")]
    NoZeroExponent,
    #[error("no marked point with psi exponent 1")]
    NoUnitExponent,
    #[error("forgetting a point leaves an unstable space")]
    UnstableReduction,
}

/// A genus and a multiset of psi exponents, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PsiKey {
    genus: u32,
    exponents: Vec<u32>,
}

impl PsiKey {
    pub fn new(genus: u32, exponents: &[u32]) -> Self {
        let mut e = exponents.to_vec();
        e.sort_unstable();
        PsiKey { genus, exponents: e }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn points(&self) -> usize {
        self.exponents.len()
    }

    /// 2g - 2 + n.
    pub fn euler_weight(&self) -> i64 {
        2 * self.genus as i64 - 2 + self.points() as i64
    }

    pub fn is_stable(&self) -> bool {
        self.euler_weight() > 0
    }

    /// Complex dimension 3g - 3 + n of M̄_{g,n}.
    pub fn dimension(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.points() as i64
    }

    pub fn degree(&self) -> i64 {
        self.exponents.iter().map(|&d| d as i64).sum()
    }

    fn without(&self, idx: usize) -> Vec<u32> {
        let mut e = self.exponents.clone();
        e.remove(idx);
        e
    }
}

/// `(coefficient, key)` pairs of a linear combination of psi integrals.
pub type PsiCombination = Vec<(Rational, PsiKey)>;

/// Forgets a point with exponent 0, lowering each other positive exponent in turn.
pub fn string_reduce(key: &PsiKey) -> Result<PsiCombination, PsiError> {
    let idx = key
        .exponents
        .iter()
        .position(|&d| d == 0)
        .ok_or(PsiError::NoZeroExponent)?;
    let rest = key.without(idx);
    if 2 * key.genus as i64 - 2 + rest.len() as i64 <= 0 {
        return Err(PsiError::UnstableReduction);
    }
    let mut out: PsiCombination = Vec::new();
    for j in 0..rest.len() {
        if rest[j] == 0 {
            continue;
        }
        let mut e = rest.clone();
        e[j] -= 1;
        let k = PsiKey::new(key.genus, &e);
        match out.iter_mut().find(|(_, x)| *x == k) {
            Some((c, _)) => *c += Rational::one(),
            None => out.push((Rational::one(), k)),
        }
    }
    Ok(out)
}

/// Forgets a point with exponent 1; the factor is 2g - 2 + (n - 1).
pub fn dilaton_reduce(key: &PsiKey) -> Result<(Rational, PsiKey), PsiError> {
    let idx = key
        .exponents
        .iter()
        .position(|&d| d == 1)
        .ok_or(PsiError::NoUnitExponent)?;
    let reduced = PsiKey::new(key.genus, &key.without(idx));
    if !reduced.is_stable() {
        return Err(PsiError::UnstableReduction);
    }
    Ok((int(reduced.euler_weight()), reduced))
}

fn double_factorial(n: i64) -> Rational {
    let mut r = num_bigint::BigInt::one();
    let mut k = n;
    while k > 1 {
        r *= k;
        k -= 2;
    }
    Rational::from_integer(r)
}

/// Memoized evaluator. Safe to share between threads.
#[derive(Debug, Default)]
pub struct PsiOracle {
    memo: Mutex<HashMap<PsiKey, Rational>>,
}

impl PsiOracle {
    pub fn new() -> Self {
        PsiOracle::default()
    }

    /// The process-wide evaluator.
    pub fn global() -> &'static PsiOracle {
        static GLOBAL: OnceLock<PsiOracle> = OnceLock::new();
        GLOBAL.get_or_init(PsiOracle::new)
    }

    pub fn intersect(&self, genus: u32, exponents: &[u32]) -> Result<Rational, PsiError> {
        let key = PsiKey::new(genus, exponents);
        if !key.is_stable() {
            return Err(PsiError::UnstableInput {
                genus,
                points: key.points(),
            });
        }
        if genus > MAX_GENUS || key.points() > MAX_POINTS {
            return Err(PsiError::ResourceBound {
                genus,
                points: key.points(),
            });
        }
        Ok(self.eval(&key))
    }

    /// Snapshot of every memoized key and value.
    pub fn memoized(&self) -> Vec<(PsiKey, Rational)> {
        let memo = self.memo.lock().unwrap_or_else(|e| e.into_inner());
        let mut v: Vec<_> = memo.iter().map(|(k, x)| (k.clone(), x.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    fn lookup(&self, key: &PsiKey) -> Option<Rational> {
        self.memo
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .get(key)
            .cloned()
    }

    fn eval(&self, key: &PsiKey) -> Rational {
        if key.degree() != key.dimension() {
            return Rational::zero();
        }
        if let Some(v) = self.lookup(key) {
            return v;
        }
        let v = self.compute(key);
        self.memo
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(key.clone(), v.clone());
        v
    }

    fn compute(&self, key: &PsiKey) -> Rational {
        let g = key.genus;
        let e = &key.exponents;
        if g == 0 && e.len() == 3 {
            return Rational::one();
        }
        if g == 1 && e.len() == 1 {
            return Rational::new(1.into(), 24.into());
        }
        if let Ok(terms) = string_reduce(key) {
            return terms
                .iter()
                .map(|(c, k)| c * self.eval(k))
                .fold(Rational::zero(), |a, b| a + b);
        }
        if let Ok((c, k)) = dilaton_reduce(key) {
            return c * self.eval(&k);
        }
        self.dvv(key)
    }

    // <tau_{k+1} tau_S>_g (2k+3)!! = sum_j (2k+2d_j+1)!!/(2d_j-1)!! <tau_{d_j+k} tau_{S-j}>_g
    //   + 1/2 sum_{r+s=k-1} (2r+1)!!(2s+1)!! [<tau_r tau_s tau_S>_{g-1}
    //                                         + sum_{splits} <tau_r tau_I>_{g1} <tau_s tau_J>_{g2}]
    fn dvv(&self, key: &PsiKey) -> Rational {
        let g = key.genus;
        let top = *key.exponents.last().expect("stable key has points");
        let k = top as i64 - 1;
        let rest = &key.exponents[..key.exponents.len() - 1];
        let mut total = Rational::zero();
        for j in 0..rest.len() {
            let dj = rest[j] as i64;
            let mut e: Vec<u32> = rest.to_vec();
            e[j] = (dj + k) as u32;
            let c = double_factorial(2 * k + 2 * dj + 1) / double_factorial(2 * dj - 1);
            total += c * self.eval(&PsiKey::new(g, &e));
        }
        let half = Rational::new(1.into(), 2.into());
        for r in 0..k {
            let s = k - 1 - r;
            let c = &half * double_factorial(2 * r + 1) * double_factorial(2 * s + 1);
            if g >= 1 {
                let mut e = rest.to_vec();
                e.push(r as u32);
                e.push(s as u32);
                total += &c * self.eval(&PsiKey::new(g - 1, &e));
            }
            let m = rest.len();
            for g1 in 0..=g {
                for mask in 0u32..(1 << m) {
                    let mut a = vec![r as u32];
                    let mut b = vec![s as u32];
                    for (i, &d) in rest.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            a.push(d);
                        } else {
                            b.push(d);
                        }
                    }
                    let ka = PsiKey::new(g1, &a);
                    let kb = PsiKey::new(g - g1, &b);
                    if ka.is_stable() && kb.is_stable() {
                        let x = self.eval(&ka);
                        if !x.is_zero() {
                            total += &c * x * self.eval(&kb);
                        }
                    }
                }
            }
        }
        total / double_factorial(2 * k + 3)
    }
}

/// `<prod tau_{d_i}>_g` using the process-wide memo.
pub fn psi_intersect(genus: u32, exponents: &[u32]) -> Result<Rational, PsiError> {
    PsiOracle::global().intersect(genus, exponents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;

    #[test]
    fn low_genus_anchors() {
        assert_eq!(psi_intersect(0, &[0, 0, 0]).unwrap(), int(1));
        assert_eq!(psi_intersect(1, &[1]).unwrap(), rat(1, 24));
        assert_eq!(psi_intersect(0, &[1, 0, 0, 0]).unwrap(), int(1));
        assert_eq!(psi_intersect(0, &[2, 0, 0, 0, 0]).unwrap(), int(1));
    }

    #[test]
    fn higher_genus_anchors() {
        assert_eq!(psi_intersect(2, &[4]).unwrap(), rat(1, 1152));
        assert_eq!(psi_intersect(3, &[7]).unwrap(), rat(1, 82944));
        assert_eq!(psi_intersect(2, &[3, 2]).unwrap(), rat(29, 5760));
        assert_eq!(psi_intersect(2, &[1, 4]).unwrap(), rat(1, 384));
        assert_eq!(psi_intersect(1, &[1, 1]).unwrap(), rat(1, 24));
    }

    #[test]
    fn order_of_exponents_is_irrelevant() {
        assert_eq!(
            psi_intersect(2, &[2, 3]).unwrap(),
            psi_intersect(2, &[3, 2]).unwrap()
        );
    }

    #[test]
    fn wrong_degree_is_zero() {
        assert_eq!(psi_intersect(2, &[3]).unwrap(), int(0));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            psi_intersect(0, &[0, 0]),
            Err(PsiError::UnstableInput { genus: 0, points: 2 })
        );
        assert!(matches!(
            psi_intersect(7, &[18]),
            Err(PsiError::ResourceBound { .. })
        ));
        assert!(matches!(
            psi_intersect(0, &[0; 13]),
            Err(PsiError::ResourceBound { .. })
        ));
    }

    #[test]
    fn reductions() {
        let k = PsiKey::new(0, &[1, 0, 0, 0]);
        let terms = string_reduce(&k).unwrap();
        assert_eq!(terms, vec![(int(1), PsiKey::new(0, &[0, 0, 0]))]);
        assert_eq!(
            string_reduce(&PsiKey::new(2, &[4])),
            Err(PsiError::NoZeroExponent)
        );
        let (c, red) = dilaton_reduce(&PsiKey::new(2, &[1, 4])).unwrap();
        assert_eq!(c, int(3));
        assert_eq!(red, PsiKey::new(2, &[4]));
        assert_eq!(
            dilaton_reduce(&PsiKey::new(1, &[1])),
            Err(PsiError::UnstableReduction)
        );
        assert_eq!(
            dilaton_reduce(&PsiKey::new(2, &[4])),
            Err(PsiError::NoUnitExponent)
        );
    }
}
