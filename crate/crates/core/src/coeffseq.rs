//! The squared recurrence coefficients `b_n²`, under interchangeable
//! encodings, with the boundary convention `b_{-1}² = 0`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ratfun::{parse_expr, parse_ratfun};
use crate::scalar::{rat, rat_int, RatText};
use crate::{Error, QPoly, QRatFun, Rat, Result};

/// Classical families with a closed-form `b_n²`.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyId {
    Hermite,
    Legendre,
    /// Ultraspherical family with weight `(1 - x²)^α`, valid for `α > -1`.
    Gegenbauer(Rat),
}

impl FamilyId {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::Hermite => "hermite",
            FamilyId::Legendre => "legendre",
            FamilyId::Gegenbauer(_) => "gegenbauer",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FamilyId::Gegenbauer(a) if *a <= -Rat::one() => Err(Error::InvalidFamily(format!(
                "gegenbauer requires alpha > -1, got {a}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn from_name(name: &str, alpha: Option<Rat>) -> Result<Self> {
        let f = match name.to_ascii_lowercase().as_str() {
            "hermite" => FamilyId::Hermite,
            "legendre" => FamilyId::Legendre,
            "gegenbauer" => FamilyId::Gegenbauer(alpha.ok_or_else(|| {
                Error::InvalidFamily("gegenbauer needs an alpha parameter".into())
            })?),
            other => return Err(Error::InvalidFamily(format!("unknown family {other:?}"))),
        };
        f.validate()?;
        Ok(f)
    }

    /// Numerator and denominator factors of `b_n²` before cancellation.
    fn factors(&self) -> (QPoly, QPoly) {
        let lin = |c: Rat, s: i64| QPoly::from_coeffs(vec![c, rat_int(s)]);
        match self {
            FamilyId::Hermite => (QPoly::from_coeffs(vec![rat(1, 2), rat(1, 2)]), QPoly::one()),
            FamilyId::Legendre => (
                lin(rat_int(1), 1).pow(2),
                &lin(rat_int(1), 2) * &lin(rat_int(3), 2),
            ),
            FamilyId::Gegenbauer(a) => {
                let two_a = rat_int(2) * a;
                (
                    &lin(rat_int(1), 1) * &lin(&two_a + rat_int(1), 1),
                    &lin(&two_a + rat_int(1), 2) * &lin(&two_a + rat_int(3), 2),
                )
            }
        }
    }
}

/// Squared coefficient sequence `b_n²`, `n ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum CoeffSeq {
    /// `b_n² = bsq(n)`, except that `head[n]` overrides the first few
    /// indices where the sequence departs from the reduced function (a
    /// removable singularity of the family formula, for instance).
    ClosedForm { bsq: QRatFun, head: Vec<Rat> },
    PolyForm(QPoly),
    /// Exact values for `n = 0..=L`; no extrapolation.
    Table(Vec<Rat>),
    Builtin(FamilyId),
}

/// Result of a positivity scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Positivity {
    pub ok: bool,
    pub first_violation: Option<i64>,
}

impl CoeffSeq {
    pub fn closed_form(bsq: QRatFun) -> Self {
        CoeffSeq::ClosedForm {
            bsq,
            head: Vec::new(),
        }
    }

    pub fn is_table(&self) -> bool {
        matches!(self, CoeffSeq::Table(_))
    }

    /// `b_n²`; zero at `n = -1` whatever the encoding.
    pub fn bsq(&self, n: i64) -> Result<Rat> {
        if n == -1 {
            return Ok(Rat::zero());
        }
        if n < -1 {
            return Err(Error::NegativeIndex(n));
        }
        match self {
            CoeffSeq::ClosedForm { bsq, head } => match head.get(n as usize) {
                Some(v) => Ok(v.clone()),
                None => bsq.eval(&rat_int(n)),
            },
            CoeffSeq::PolyForm(p) => Ok(p.eval(&rat_int(n))),
            CoeffSeq::Table(values) => values.get(n as usize).cloned().ok_or(Error::OutOfTable {
                n,
                last: values.len() as i64 - 1,
            }),
            CoeffSeq::Builtin(f) => builtin_bsq(f)?.bsq(n),
        }
    }

    /// The rational description of the sequence, or `None` for tables.
    ///
    /// Returns the reduced function together with the head overrides.
    pub fn rational(&self) -> Option<(QRatFun, Vec<Rat>)> {
        match self {
            CoeffSeq::ClosedForm { bsq, head } => Some((bsq.clone(), head.clone())),
            CoeffSeq::PolyForm(p) => Some((QRatFun::from_poly(p.clone()), Vec::new())),
            CoeffSeq::Table(_) => None,
            CoeffSeq::Builtin(f) => match builtin_bsq(f).ok()? {
                CoeffSeq::ClosedForm { bsq, head } => Some((bsq, head)),
                _ => None,
            },
        }
    }

    /// Largest usable index, `None` when unbounded.
    pub fn last_index(&self) -> Option<i64> {
        match self {
            CoeffSeq::Table(v) => Some(v.len() as i64 - 1),
            _ => None,
        }
    }

    pub fn values(&self, count: usize) -> Result<Vec<Rat>> {
        (0..count as i64).map(|n| self.bsq(n)).collect()
    }

    /// The first `count` values as a table.
    pub fn to_table(&self, count: usize) -> Result<CoeffSeq> {
        Ok(CoeffSeq::Table(self.values(count)?))
    }

    /// Scans `0 <= n < window` (capped at the table length); poles count as
    /// violations.
    pub fn positivity_check(&self, window: usize) -> Positivity {
        let end = match self.last_index() {
            Some(last) => (window as i64).min(last + 1),
            None => window as i64,
        };
        for n in 0..end {
            match self.bsq(n) {
                Ok(v) if v.is_positive() => {}
                _ => {
                    return Positivity {
                        ok: false,
                        first_violation: Some(n),
                    }
                }
            }
        }
        Positivity {
            ok: true,
            first_violation: None,
        }
    }

    pub fn from_spec(spec: &CoeffSeqSpec) -> Result<Self> {
        match spec {
            CoeffSeqSpec::ClosedForm { bsq, head } => Ok(CoeffSeq::ClosedForm {
                bsq: parse_ratfun(bsq)?,
                head: head.iter().map(|r| r.0.clone()).collect(),
            }),
            CoeffSeqSpec::PolyForm { bsq } => {
                let r = parse_expr(bsq)?.to_ratfun("n")?;
                let p = r.as_poly().cloned().ok_or_else(|| {
                    Error::InvalidArgument(format!("poly_form expects a polynomial, got {r}"))
                })?;
                Ok(CoeffSeq::PolyForm(p))
            }
            CoeffSeqSpec::Table { values } => {
                Ok(CoeffSeq::Table(values.iter().map(|r| r.0.clone()).collect()))
            }
            CoeffSeqSpec::Builtin { family, alpha } => Ok(CoeffSeq::Builtin(FamilyId::from_name(
                family,
                alpha.as_ref().map(|a| a.0.clone()),
            )?)),
        }
    }

    pub fn to_spec(&self) -> CoeffSeqSpec {
        match self {
            CoeffSeq::ClosedForm { bsq, head } => CoeffSeqSpec::ClosedForm {
                bsq: bsq.to_string(),
                head: head.iter().cloned().map(RatText).collect(),
            },
            CoeffSeq::PolyForm(p) => CoeffSeqSpec::PolyForm { bsq: p.to_string() },
            CoeffSeq::Table(v) => CoeffSeqSpec::Table {
                values: v.iter().cloned().map(RatText).collect(),
            },
            CoeffSeq::Builtin(f) => CoeffSeqSpec::Builtin {
                family: f.name().to_string(),
                alpha: match f {
                    FamilyId::Gegenbauer(a) => Some(RatText(a.clone())),
                    _ => None,
                },
            },
        }
    }
}

/// The closed form of a built-in family.
///
/// For Gegenbauer at `α = -1/2` the family formula is `0/0` at `n = 0`; the
/// value there is the limit in `α`, `1/(2α + 3) = 1/2`, which differs from
/// the reduced function and is kept as a head override.
pub fn builtin_bsq(f: &FamilyId) -> Result<CoeffSeq> {
    f.validate()?;
    let (num, den) = f.factors();
    let bsq = QRatFun::new(num.clone(), den.clone())?;
    let mut head = Vec::new();
    if let FamilyId::Gegenbauer(a) = f {
        let zero = Rat::zero();
        if den.eval(&zero).is_zero() && num.eval(&zero).is_zero() {
            head.push(Rat::one() / (rat_int(2) * a + rat_int(3)));
        }
    }
    Ok(CoeffSeq::ClosedForm { bsq, head })
}

/// JSON encoding of a coefficient sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "encoding", rename_all = "snake_case")]
pub enum CoeffSeqSpec {
    ClosedForm {
        bsq: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        head: Vec<RatText>,
    },
    PolyForm {
        bsq: String,
    },
    Table {
        values: Vec<RatText>,
    },
    Builtin {
        family: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<RatText>,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::ratfun_equal;

    fn poly(c: &[i64]) -> QPoly {
        QPoly::from_coeffs(c.iter().map(|&v| rat_int(v)).collect())
    }

    fn all_families() -> Vec<FamilyId> {
        vec![
            FamilyId::Hermite,
            FamilyId::Legendre,
            FamilyId::Gegenbauer(rat(-1, 2)),
            FamilyId::Gegenbauer(rat_int(0)),
            FamilyId::Gegenbauer(rat(1, 2)),
            FamilyId::Gegenbauer(rat_int(2)),
        ]
    }

    #[test]
    fn bsq_examples() {
        let herm = CoeffSeq::Builtin(FamilyId::Hermite);
        assert_eq!(herm.bsq(4).unwrap(), rat(5, 2));
        for s in [herm.clone(), CoeffSeq::Table(vec![rat_int(1)]), CoeffSeq::PolyForm(poly(&[3]))] {
            assert_eq!(s.bsq(-1).unwrap(), rat_int(0));
        }
        assert_eq!(CoeffSeq::Builtin(FamilyId::Legendre).bsq(1).unwrap(), rat(4, 15));
        assert!(matches!(herm.bsq(-2), Err(Error::NegativeIndex(-2))));
        let t = CoeffSeq::Table(vec![rat_int(1), rat_int(2)]);
        assert!(matches!(t.bsq(2), Err(Error::OutOfTable { n: 2, last: 1 })));
        let pole = CoeffSeq::closed_form(parse_ratfun("1/(n-3)").unwrap());
        assert!(matches!(pole.bsq(3), Err(Error::Pole { .. })));
    }

    #[test]
    fn positivity_examples() {
        let p = CoeffSeq::PolyForm(poly(&[1, 1, 1]));
        assert!(p.positivity_check(1000).ok);
        let bad = CoeffSeq::PolyForm(poly(&[-3, 1]));
        assert_eq!(
            bad.positivity_check(10),
            Positivity {
                ok: false,
                first_violation: Some(0)
            }
        );
        let cheb = CoeffSeq::Builtin(FamilyId::Gegenbauer(rat(-1, 2)));
        assert!(cheb.positivity_check(50).ok);
    }

    #[test]
    fn builtin_closed_forms() {
        let CoeffSeq::ClosedForm { bsq, head } = builtin_bsq(&FamilyId::Hermite).unwrap() else {
            panic!()
        };
        assert_eq!(bsq, parse_ratfun("(n+1)/2").unwrap());
        assert!(head.is_empty());

        let (g0, _) = CoeffSeq::Builtin(FamilyId::Gegenbauer(rat_int(0))).rational().unwrap();
        assert_eq!(g0, parse_ratfun("(n+1)*(n+1)/((2*n+1)*(2*n+3))").unwrap());
        let (leg, _) = CoeffSeq::Builtin(FamilyId::Legendre).rational().unwrap();
        assert!(ratfun_equal(&g0, &leg));

        assert!(matches!(
            builtin_bsq(&FamilyId::Gegenbauer(rat_int(-1))),
            Err(Error::InvalidFamily(_))
        ));
    }

    #[test]
    fn chebyshev_head_is_the_alpha_limit() {
        let cheb = CoeffSeq::Builtin(FamilyId::Gegenbauer(rat(-1, 2)));
        assert_eq!(cheb.bsq(0).unwrap(), rat(1, 2));
        for n in 1..10 {
            assert_eq!(cheb.bsq(n).unwrap(), rat(1, 4));
        }
        // b_0^2 = 1/(2α+3) for every α, including where nothing cancels.
        for a in [rat_int(0), rat(1, 2), rat_int(2), rat(-3, 4)] {
            let s = CoeffSeq::Builtin(FamilyId::Gegenbauer(a.clone()));
            assert_eq!(s.bsq(0).unwrap(), Rat::one() / (rat_int(2) * a + rat_int(3)));
        }
    }

    #[test]
    fn builtins_are_positive_and_tables_agree() {
        for f in all_families() {
            let s = CoeffSeq::Builtin(f.clone());
            assert!(s.positivity_check(200).ok, "{f:?}");
            let t = s.to_table(40).unwrap();
            for n in 0..40 {
                assert_eq!(s.bsq(n).unwrap(), t.bsq(n).unwrap());
            }
        }
    }

    #[test]
    fn json_specs() {
        let cases = [
            r#"{"encoding":"closed_form","bsq":"(n+1)/2"}"#,
            r#"{"encoding":"table","values":["1/2","1","3/2"]}"#,
            r#"{"encoding":"builtin","family":"gegenbauer","alpha":"1/2"}"#,
            r#"{"encoding":"poly_form","bsq":"n^2+n+1"}"#,
        ];
        for c in cases {
            let spec: CoeffSeqSpec = serde_json::from_str(c).unwrap();
            let seq = CoeffSeq::from_spec(&spec).unwrap();
            let again = CoeffSeq::from_spec(&seq.to_spec()).unwrap();
            assert_eq!(seq, again, "{c}");
        }
        let bad: CoeffSeqSpec =
            serde_json::from_str(r#"{"encoding":"poly_form","bsq":"1/n"}"#).unwrap();
        assert!(CoeffSeq::from_spec(&bad).is_err());
        let bad: CoeffSeqSpec =
            serde_json::from_str(r#"{"encoding":"builtin","family":"laguerre"}"#).unwrap();
        assert!(CoeffSeq::from_spec(&bad).is_err());
    }
}
