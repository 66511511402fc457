use std::sync::OnceLock;

use gwverify::cohomology_ring::{parse_class, BaseSpace, TautClass};
use gwverify::exact_arith::{int, rat, EquivariantScalar, WeightExp, WeightPoint, WeightPoly};
use gwverify::hodge_oracle::{rewrite_lambda, rewrite_lambda_with, HodgeMonomial};
use gwverify::psi_recursion::{dilaton_reduce, psi_intersect, string_reduce, PsiKey};
use gwverify::sum_formula::{
    enumerate_graphs, thm1_verdict, vir_dim, GraphConstraints, GwSetting, Verdict,
};
use gwverify::{DataSource, HodgeOracle, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn oracle() -> &'static HodgeOracle {
    static O: OnceLock<HodgeOracle> = OnceLock::new();
    O.get_or_init(|| HodgeOracle::load(&DataSource::embedded()).unwrap())
}

/// Stable `(g, exponents)` with the exponents summing to the dimension.
fn psi_key() -> impl Strategy<Value = (u32, Vec<u32>)> {
    (0u32..=3, 1usize..=5)
        .prop_filter("stable", |(g, n)| 2 * *g as i64 - 2 + *n as i64 > 0)
        .prop_flat_map(|(g, n)| {
            let dim = 3 * g + n as u32 - 3;
            proptest::collection::vec(0u32..=dim, n).prop_map(move |mut e| {
                // push the remainder onto the last point
                let mut left = dim;
                for x in e.iter_mut().take(n - 1) {
                    *x = (*x).min(left);
                    left -= *x;
                }
                e[n - 1] = left;
                (g, e)
            })
        })
}

fn weight_poly() -> impl Strategy<Value = WeightPoly> {
    proptest::collection::vec((0u32..=1, 0u32..=1, -4i64..=4), 0..3).prop_map(|terms| {
        WeightPoly::from_terms(terms.into_iter().map(|(a, b, c)| (WeightExp::new(a, b), int(c))))
    })
}

fn scalar() -> impl Strategy<Value = EquivariantScalar> {
    (weight_poly(), weight_poly())
        .prop_filter_map("nonzero denominator", |(n, d)| EquivariantScalar::new(n, d).ok())
}

fn top_degree_lambdas() -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for b3 in 0..=2u32 {
        for b2 in 0..=(6 - 3 * b3) / 2 {
            out.push(vec![6 - 3 * b3 - 2 * b2, b2, b3]);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn string_equation_closes((g, e) in psi_key()) {
        let mut e = e;
        e.push(0);
        let key = PsiKey::new(g, &e);
        let v = psi_intersect(g, &e).unwrap();
        let mut sum = Rational::zero();
        for (c, k) in string_reduce(&key).unwrap() {
            sum += c * psi_intersect(k.genus(), k.exponents()).unwrap();
        }
        prop_assert_eq!(sum, v);
    }

    #[test]
    fn dilaton_equation_closes((g, e) in psi_key()) {
        let mut with = e.clone();
        with.push(1);
        let (c, reduced) = dilaton_reduce(&PsiKey::new(g, &with)).unwrap();
        let mut sorted = e.clone();
        sorted.sort_unstable();
        let mut got = reduced.exponents().to_vec();
        got.sort_unstable();
        prop_assert_eq!(got, sorted);
        prop_assert_eq!(psi_intersect(g, &with).unwrap(), c * psi_intersect(g, &e).unwrap());
    }

    #[test]
    fn lambda_rewriting_is_confluent(g in 1u32..=3, lam in proptest::collection::vec(0u32..=5, 3), seed in any::<u64>()) {
        let lam = &lam[..g as usize];
        let mut state = seed;
        let mut choose = |opts: &[usize]| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize % opts.len()
        };
        prop_assert_eq!(rewrite_lambda_with(g, lam, &mut choose).unwrap(), rewrite_lambda(g, lam).unwrap());
    }

    #[test]
    fn rewriting_preserves_integrals(lam in proptest::sample::select(top_degree_lambdas())) {
        let m = HodgeMonomial::new(3, &[], &lam);
        let mut via = Rational::zero();
        for (nf, c) in rewrite_lambda(3, &lam).unwrap() {
            via += c * oracle().intersect(&HodgeMonomial::new(3, &[], &nf)).unwrap();
        }
        prop_assert_eq!(oracle().intersect(&m).unwrap(), via);
    }

    #[test]
    fn scalar_field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.recip().unwrap(), EquivariantScalar::one());
        }
        prop_assert_eq!(a.swap_weights().swap_weights(), a);
    }

    #[test]
    fn scalar_evaluation_is_a_homomorphism(a in scalar(), b in scalar(), w1 in -20i64..=20, w2 in -20i64..=20) {
        let w = WeightPoint::ints(w1, w2);
        if let (Ok(x), Ok(y), Ok(z)) = (a.eval(&w), b.eval(&w), (&a * &b).eval(&w)) {
            prop_assert_eq!(z, x * y);
        }
    }

    #[test]
    fn class_inverse_is_two_sided(c in 1i64..=6, r in proptest::collection::vec(-5i64..=5, 6), swap in any::<bool>()) {
        let base = BaseSpace::parse(&["M(2,1)", "P1"]).unwrap();
        let src = format!(
            "{c}*a1 + ({})*psi[0,1] + ({})*lam[0,1] + ({})*x[1] + ({})*psi[0,1]^2 + ({})*lam[0,2] + ({})*psi[0,1]*x[1]",
            r[0], r[1], r[2], r[3], r[4], r[5]
        );
        let mut x = parse_class(&base, &src).unwrap();
        if swap {
            x = x.swap_weights();
        }
        let inv = x.invert().unwrap();
        prop_assert_eq!(x.mul(&inv).unwrap(), TautClass::one(&base));
        prop_assert_eq!(inv.mul(&x).unwrap(), TautClass::one(&base));
    }

    #[test]
    fn all_ones_contact_keeps_dimension(n in 1u32..=8, g in 0u32..=6, k in 0u32..=6, av in 0u32..=12, c1 in -10i64..=20) {
        let s = GwSetting { n, g, k, a_dot_v: av, c1_a: c1, a_is_zero: av == 0, kappa_trivial: true };
        let ones = vec![1; av as usize];
        prop_assert_eq!(vir_dim(&s, Some(&ones)).unwrap(), vir_dim(&s, None).unwrap());
    }

    #[test]
    fn higher_contact_lowers_dimension(n in 1u32..=8, g in 0u32..=6, parts in proptest::collection::vec(1u32..=4, 1..5)) {
        let av: u32 = parts.iter().sum();
        let s = GwSetting { n, g, k: 0, a_dot_v: av, c1_a: 3, a_is_zero: false, kappa_trivial: true };
        let drop = 2 * (av as i64 - parts.len() as i64);
        prop_assert_eq!(vir_dim(&s, None).unwrap() - vir_dim(&s, Some(&parts)).unwrap(), drop);
    }

    #[test]
    fn verdict_monotone_past_four(g in 0u32..=8, n in 5u32..=12, k in 0u32..=3) {
        let s = |n| GwSetting { n, g, k, a_dot_v: 1, c1_a: 2, a_is_zero: false, kappa_trivial: true };
        let fails = |v: Verdict| matches!(v, Verdict::NotGuaranteed { .. });
        prop_assert!(!fails(thm1_verdict(&s(n))));
        if !fails(thm1_verdict(&s(4))) {
            prop_assert!(!fails(thm1_verdict(&s(n))));
        }
    }

    #[test]
    fn graphs_respect_genus_and_contacts(g in 0u32..=3, comps in proptest::collection::vec(1u32..=3, 1..=3), k in 0u32..=2) {
        let c = GraphConstraints { x_side_degree_one: true, marked_points_on_x: true, genus_cap_v: 3 };
        let graphs = enumerate_graphs(g, &comps, k, c).unwrap();
        prop_assert!(!graphs.is_empty());
        for gr in &graphs {
            prop_assert_eq!(gr.total_genus(), g);
            for (i, want) in comps.iter().enumerate() {
                let got: u32 = gr.v_vertices.iter().filter(|v| v.component == i).map(|v| v.degree()).sum();
                prop_assert_eq!(got, *want);
            }
        }
        let mut sorted = graphs.clone();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), graphs.len());
    }
}

#[test]
fn contact_mismatch_is_reported() {
    let s = GwSetting { n: 4, g: 3, k: 1, a_dot_v: 2, c1_a: 5, a_is_zero: false, kappa_trivial: true };
    assert!(vir_dim(&s, Some(&[1])).is_err());
    assert_eq!(vir_dim(&s, Some(&[2])).unwrap(), vir_dim(&s, None).unwrap() - 2);
    assert_eq!(rat(1, 2) + rat(1, 2), int(1));
}
