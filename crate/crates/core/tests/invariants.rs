use num_traits::Zero;
use proptest::prelude::*;

use oscalg::classifier::{classify, DEFAULT_JMAX, DEFAULT_WINDOW};
use oscalg::matrixreal::closure_rank_oracle;
use oscalg::scalar::{rat, rat_int};
use oscalg::shiftalg::{check_ccr, gauge_generators, lie_closure};
use oscalg::{CoeffSeq, FamilyId, QPoly, Rat, RatFun};

fn families() -> Vec<FamilyId> {
    vec![
        FamilyId::Hermite,
        FamilyId::Legendre,
        FamilyId::Gegenbauer(rat(-1, 2)),
        FamilyId::Gegenbauer(rat_int(0)),
        FamilyId::Gegenbauer(rat(1, 2)),
        FamilyId::Gegenbauer(rat_int(2)),
        FamilyId::Gegenbauer(rat(7, 3)),
    ]
}

#[test]
fn verdict_class_does_not_depend_on_encoding() {
    for f in families() {
        let seq = CoeffSeq::Builtin(f.clone());
        let table = seq.to_table(32).unwrap();
        let a = classify(&seq, DEFAULT_WINDOW, DEFAULT_JMAX).unwrap();
        let b = classify(&table, DEFAULT_WINDOW, DEFAULT_JMAX).unwrap();
        assert_eq!(a.is_finite(), b.is_finite(), "{f:?}");
        assert_eq!(a.is_infinite(), b.is_infinite(), "{f:?}");
        assert_eq!(a.r(), b.r(), "{f:?}");
    }
}

#[test]
fn constant_gegenbauer_case_is_finite() {
    // α = 1/2 collapses the family formula to 1/4.
    let seq = CoeffSeq::Builtin(FamilyId::Gegenbauer(rat(1, 2)));
    assert_eq!(seq.values(6).unwrap(), vec![rat(1, 4); 6]);
    assert!(classify(&seq, DEFAULT_WINDOW, DEFAULT_JMAX).unwrap().is_finite());
}

fn positive_poly(deg: usize) -> impl Strategy<Value = QPoly> {
    // Non-negative lower coefficients and a positive leading one.
    (proptest::collection::vec((0i64..=12, 1i64..=5), deg), 1i64..=12, 1i64..=5).prop_map(|(low, lead, den)| {
        let mut c: Vec<Rat> = low.into_iter().map(|(n, d)| rat(n, d)).collect();
        c.push(rat(lead, den));
        if c[0].is_zero() {
            c[0] = rat_int(1);
        }
        QPoly::from_coeffs(c)
    })
}

fn poly_upto(max_deg: usize) -> impl Strategy<Value = QPoly> {
    (0..=max_deg).prop_flat_map(positive_poly)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_decides_the_verdict(p in poly_upto(6)) {
        let deg = p.degree().unwrap();
        let c = classify(&CoeffSeq::PolyForm(p.clone()), DEFAULT_WINDOW, DEFAULT_JMAX).unwrap();
        if deg <= 2 {
            prop_assert!(c.is_finite());
            prop_assert_eq!(c.r(), Some(&p));
        } else {
            prop_assert!(c.is_infinite());
        }
    }

    #[test]
    fn table_prefix_agrees_with_poly(p in poly_upto(5)) {
        let seq = CoeffSeq::PolyForm(p);
        let a = classify(&seq, DEFAULT_WINDOW, DEFAULT_JMAX).unwrap();
        let b = classify(&seq.to_table(32).unwrap(), DEFAULT_WINDOW, DEFAULT_JMAX).unwrap();
        prop_assert_eq!(a.is_finite(), b.is_finite());
        prop_assert_eq!(a.r(), b.r());
    }

    #[test]
    fn ccr_holds_for_rational_sequences(
        num in proptest::collection::vec(1i64..=9, 1..=4),
        den in proptest::collection::vec(1i64..=9, 1..=3),
    ) {
        let poly = |c: Vec<i64>| QPoly::from_coeffs(c.into_iter().map(rat_int).collect());
        let r = RatFun::new(poly(num), poly(den)).unwrap();
        prop_assert!(check_ccr(&CoeffSeq::closed_form(r)).unwrap().passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn closure_engines_agree(p in poly_upto(4)) {
        let seq = CoeffSeq::PolyForm(p.clone());
        let gens = gauge_generators(&seq).unwrap();
        let sym = lie_closure(&gens.as_vec(), 4, 16);
        let orc = closure_rank_oracle(&seq, 48, 4, 16, 2).unwrap();
        prop_assume!(!orc.inconclusive);
        prop_assert_eq!((sym.stabilized, sym.dim), (orc.stabilized, orc.dim_estimate));
        prop_assert_eq!(sym.stabilized, p.degree().unwrap() <= 2);
    }
}
