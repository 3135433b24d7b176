//! Finite/infinite dimension verdicts from `b_n²`.
//!
//! The algebra is finite-dimensional exactly when `b_n²` is a polynomial of
//! degree at most two in `n` for every `n ≥ 0`, and then its dimension is
//! four. Closed forms are decided structurally; tables are decided from
//! forward differences, which is where [`DiffTable`] comes in.

use num_integer::binomial;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::coeffseq::CoeffSeq;
use crate::linalg::solve_lower_triangular;
use crate::scalar::rat_int;
use crate::{Error, QPoly, Rat, Result, Scalar};

pub const DEFAULT_WINDOW: usize = 24;
pub const DEFAULT_JMAX: usize = 8;

/// Iterated first differences: `rows[j][i] = rows[j-1][i+1] - rows[j-1][i]`,
/// with `rows[0][i]` attached to index `base_offset + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffTable<T> {
    pub base_offset: i64,
    pub rows: Vec<Vec<T>>,
}

impl<T: Scalar> DiffTable<T> {
    /// Builds rows `0..=jmax` of length `window` from `row0`, which must hold
    /// at least `window + jmax` entries.
    pub fn from_row0(base_offset: i64, row0: Vec<T>, jmax: usize, window: usize) -> Self {
        assert!(row0.len() >= window + jmax, "row 0 too short");
        let mut rows = vec![row0];
        for j in 1..=jmax {
            let prev = &rows[j - 1];
            let next = prev.windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
            rows.push(next);
        }
        for r in rows.iter_mut() {
            r.truncate(window);
        }
        DiffTable { base_offset, rows }
    }

    /// All forward differences of `values`, each row one shorter than the last.
    pub fn forward(values: &[T]) -> Vec<Vec<T>> {
        let mut rows = vec![values.to_vec()];
        while rows.last().is_some_and(|r| r.len() > 1) {
            let prev = rows.last().unwrap();
            rows.push(prev.windows(2).map(|w| w[1].clone() - w[0].clone()).collect());
        }
        rows
    }

    pub fn jmax(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, j: usize, n: i64) -> Option<&T> {
        let i = usize::try_from(n - self.base_offset).ok()?;
        self.rows.get(j)?.get(i)
    }

    pub fn row_is_constant(&self, j: usize) -> bool {
        is_constant(&self.rows[j])
    }
}

fn is_constant<T: PartialEq>(row: &[T]) -> bool {
    row.windows(2).all(|w| w[0] == w[1])
}

/// The table of `𝔙_n^{(j)}`, with `𝔙_n^{(0)} = b_n² - b_{n-1}²` (so `b_{-1}² = 0`
/// enters at `base = 0`).
pub fn diff_table(seq: &CoeffSeq, jmax: usize, window: usize, base: i64) -> Result<DiffTable<Rat>> {
    if window < jmax + 2 {
        return Err(Error::InvalidArgument(format!(
            "window {window} must be at least jmax + 2 = {}",
            jmax + 2
        )));
    }
    if base < 0 {
        return Err(Error::InvalidArgument("base must be non-negative".into()));
    }
    let len = window + jmax;
    if let Some(last) = seq.last_index() {
        let needed = (base + len as i64) as usize;
        if last + 1 < needed as i64 {
            return Err(Error::InsufficientTable {
                needed,
                have: (last + 1) as usize,
            });
        }
    }
    let vals: Vec<Rat> = (base - 1..base + len as i64)
        .map(|n| seq.bsq(n))
        .collect::<Result<_>>()?;
    let row0 = vals.windows(2).map(|w| &w[1] - &w[0]).collect();
    Ok(DiffTable::from_row0(base, row0, jmax, window))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// The reduced closed form has a nonconstant denominator.
    NonPolynomial,
    /// The closed form is polynomial, but `b_n²` departs from it at `n`.
    IrregularHead { n: i64 },
    DegreeExceeds(usize),
    /// `𝔙^{(1)}` is not constant on the tested window. `first_constant`
    /// is the smallest tested order `j ≥ 1` at which `𝔙^{(j)}` is constant.
    NonconstantDifferences {
        jmax: usize,
        first_constant: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    FiniteDim { r: QPoly, dim: usize },
    InfiniteDim(Witness),
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    /// Set when a table was shorter than the requested window and the
    /// verdict rests on fewer points.
    pub window_limited: bool,
}

impl Classification {
    pub fn is_finite(&self) -> bool {
        matches!(self.verdict, Verdict::FiniteDim { .. })
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.verdict, Verdict::InfiniteDim(_))
    }

    pub fn r(&self) -> Option<&QPoly> {
        match &self.verdict {
            Verdict::FiniteDim { r, .. } => Some(r),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = match &self.verdict {
            Verdict::FiniteDim { r, dim } => json!({
                "verdict": "finite",
                "R": r.to_string(),
                "dim": dim,
            }),
            Verdict::InfiniteDim(w) => {
                let witness = match w {
                    Witness::NonPolynomial => json!({"kind": "non_polynomial"}),
                    Witness::IrregularHead { n } => json!({"kind": "irregular_head", "n": n}),
                    Witness::DegreeExceeds(p) => json!({"kind": "degree_exceeds", "degree": p}),
                    Witness::NonconstantDifferences {
                        jmax,
                        first_constant,
                    } => json!({
                        "kind": "nonconstant_differences",
                        "jmax": jmax,
                        "first_constant": first_constant,
                    }),
                };
                json!({"verdict": "infinite", "witness": witness})
            }
            Verdict::Inconclusive(reason) => json!({"verdict": "inconclusive", "reason": reason}),
        };
        if self.window_limited {
            v["window_limited"] = json!(true);
        }
        v
    }
}

/// Algebra dimension whenever it is finite.
pub const FINITE_DIM: usize = 4;

pub fn classify(seq: &CoeffSeq, window: usize, jmax: usize) -> Result<Classification> {
    if jmax == 0 {
        return Err(Error::InvalidArgument("jmax must be at least 1".into()));
    }
    match seq.rational() {
        Some((bsq, head)) => {
            check_positive(seq, window)?;
            let verdict = match bsq.as_poly() {
                None => Verdict::InfiniteDim(Witness::NonPolynomial),
                Some(r) => {
                    let bad_head = head
                        .iter()
                        .enumerate()
                        .find(|(i, h)| r.eval(&rat_int(*i as i64)) != **h);
                    match (bad_head, r.degree().unwrap_or(0)) {
                        (Some((i, _)), _) => Verdict::InfiniteDim(Witness::IrregularHead { n: i as i64 }),
                        (None, p) if p <= 2 => Verdict::FiniteDim {
                            r: r.clone(),
                            dim: FINITE_DIM,
                        },
                        (None, p) => Verdict::InfiniteDim(Witness::DegreeExceeds(p)),
                    }
                }
            };
            Ok(Classification {
                verdict,
                window_limited: false,
            })
        }
        None => classify_table(seq, window, jmax),
    }
}

fn check_positive(seq: &CoeffSeq, window: usize) -> Result<()> {
    let pos = seq.positivity_check(window);
    match pos.first_violation {
        None => Ok(()),
        Some(n) => Err(Error::NotPositive {
            n,
            value: seq.bsq(n).map_or_else(|e| e.to_string(), |v| v.to_string()),
        }),
    }
}

fn classify_table(seq: &CoeffSeq, window: usize, jmax: usize) -> Result<Classification> {
    if window < 8 {
        return Err(Error::InvalidArgument(format!(
            "table classification needs window >= 8, got {window}"
        )));
    }
    let len = (seq.last_index().unwrap_or(-1) + 1) as usize;
    check_positive(seq, len)?;
    let used = window.min(len);
    let window_limited = used < window;
    if used < 4 {
        return Ok(Classification {
            verdict: Verdict::Inconclusive(format!(
                "third differences need at least 4 values, table has {used}"
            )),
            window_limited,
        });
    }
    let values = seq.values(used)?;
    let rows = DiffTable::forward(&values);
    let verdict = if rows[3].iter().all(|v| v.is_zero()) {
        let pts: Vec<(Rat, Rat)> = (0..3).map(|i| (rat_int(i as i64), values[i].clone())).collect();
        Verdict::FiniteDim {
            r: QPoly::fit(&pts)?,
            dim: FINITE_DIM,
        }
    } else {
        // 𝔙^{(j)} agrees with the (j+1)-th forward difference away from n = 0.
        let tested = jmax.min(used - 3);
        let first_constant = (1..=tested).find(|&j| is_constant(&rows[j + 1]));
        Verdict::InfiniteDim(Witness::NonconstantDifferences {
            jmax: tested,
            first_constant,
        })
    };
    Ok(Classification {
        verdict,
        window_limited,
    })
}

fn bernoulli_plus(m: usize) -> Vec<Rat> {
    let mut b: Vec<Rat> = vec![Rat::one()];
    for k in 1..=m {
        let s = (0..k).fold(Rat::zero(), |acc, j| acc + rat_int(binomial(k as i64 + 1, j as i64)) * &b[j]);
        b.push(-s / rat_int(k as i64 + 1));
    }
    if m >= 1 {
        b[1] = -b[1].clone();
    }
    b
}

/// Closed form of `Σ_{i=1}^{n} P(i) + b0sq`, by Faulhaber's formula.
pub fn summation_poly(p: &QPoly, b0sq: &Rat) -> QPoly {
    let deg = p.degree().unwrap_or(0);
    let bern = bernoulli_plus(deg);
    let mut out = QPoly::constant(b0sq.clone());
    for (k, a) in p.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        // Σ_{i=1}^n i^k = 1/(k+1) Σ_j C(k+1, j) B⁺_j n^{k+1-j}
        let mut coeffs = vec![Rat::zero(); k + 2];
        for (j, bj) in bern.iter().enumerate().take(k + 1) {
            coeffs[k + 1 - j] = rat_int(binomial(k as i64 + 1, j as i64)) * bj / rat_int(k as i64 + 1);
        }
        out = &out + &QPoly::from_coeffs(coeffs).scale(a);
    }
    out
}

/// The lower-triangular matrix of the antidifference system for `deg P = j0`:
/// row `r` pairs with the coefficient of `n^{j0-r}` in `P`, column `c` with
/// the unknown coefficient of `n^{j0+1-c}` in `Q`.
pub fn antidifference_system(j0: usize) -> Vec<Vec<Rat>> {
    let size = j0 + 1;
    (0..size)
        .map(|r| {
            let k = (j0 - r) as i64;
            (0..size)
                .map(|c| {
                    let i = (j0 + 1 - c) as i64;
                    if i > k {
                        let sign = if (i - k) % 2 == 0 { 1 } else { -1 };
                        rat_int(-binomial(i, k) * sign)
                    } else {
                        Rat::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// `Q` with `Q(n) - Q(n-1) = P(n)` and `Q(0) = 0`, from the triangular system.
pub fn antidifference(p: &QPoly) -> QPoly {
    let Some(j0) = p.degree() else {
        return QPoly::zero();
    };
    let a = antidifference_system(j0);
    let y: Vec<Rat> = (0..=j0).map(|r| p.coeff(j0 - r)).collect();
    let x = solve_lower_triangular(&a, &y).expect("diagonal entries are 1..=j0+1");
    let mut coeffs = vec![Rat::zero(); j0 + 2];
    for (c, v) in x.into_iter().enumerate() {
        coeffs[j0 + 1 - c] = v;
    }
    QPoly::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffseq::FamilyId;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> QPoly {
        QPoly::from_coeffs(c.iter().map(|&v| rat_int(v)).collect())
    }

    #[test]
    fn diff_table_examples() {
        let herm = CoeffSeq::Builtin(FamilyId::Hermite);
        let t = diff_table(&herm, 2, 5, 1).unwrap();
        assert_eq!(t.rows[0], vec![rat(1, 2); 5]);
        assert!(t.rows[1].iter().chain(&t.rows[2]).all(|v| v.is_zero()));

        let q = CoeffSeq::PolyForm(poly(&[1, 1, 1]));
        let t = diff_table(&q, 2, 6, 1).unwrap();
        assert_eq!(t.rows[0], (1..=6).map(|n| rat_int(2 * n)).collect::<Vec<_>>());
        assert_eq!(t.rows[1], vec![rat_int(2); 6]);
        assert!(t.rows[2].iter().all(|v| v.is_zero()));
        assert_eq!(t.get(0, 3), Some(&rat_int(6)));

        let leg = CoeffSeq::Builtin(FamilyId::Legendre);
        let t = diff_table(&leg, 1, 3, 1).unwrap();
        let r = &t.rows[1];
        assert!(r[0] != r[1] && r[1] != r[2] && r[0] != r[2]);
    }

    #[test]
    fn diff_table_at_base_zero_uses_the_boundary_convention() {
        let herm = CoeffSeq::Builtin(FamilyId::Hermite);
        let t = diff_table(&herm, 1, 4, 0).unwrap();
        // 𝔙_0 = b_0² - 0
        assert_eq!(t.rows[0][0], rat(1, 2));
        let table = herm.to_table(5).unwrap();
        assert!(matches!(
            diff_table(&table, 2, 4, 0),
            Err(Error::InsufficientTable { needed: 6, have: 5 })
        ));
        assert!(diff_table(&herm, 3, 4, 0).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = classify(&CoeffSeq::Builtin(FamilyId::Hermite), 24, 8).unwrap();
        assert_eq!(
            c.verdict,
            Verdict::FiniteDim {
                r: QPoly::from_coeffs(vec![rat(1, 2), rat(1, 2)]),
                dim: 4
            }
        );
        let c = classify(&CoeffSeq::Builtin(FamilyId::Legendre), 24, 8).unwrap();
        assert_eq!(c.verdict, Verdict::InfiniteDim(Witness::NonPolynomial));
        let c = classify(&CoeffSeq::PolyForm(poly(&[1, 0, 0, 1])), 24, 8).unwrap();
        assert_eq!(c.verdict, Verdict::InfiniteDim(Witness::DegreeExceeds(3)));
        assert_eq!(
            c.to_json(),
            json!({"verdict": "infinite", "witness": {"kind": "degree_exceeds", "degree": 3}})
        );
    }

    #[test]
    fn classify_json_shape() {
        let c = classify(&CoeffSeq::Builtin(FamilyId::Hermite), 24, 8).unwrap();
        assert_eq!(c.to_json(), json!({"verdict": "finite", "R": "1/2*n + 1/2", "dim": 4}));
    }

    #[test]
    fn chebyshev_head_is_infinite_in_every_encoding() {
        let cheb = CoeffSeq::Builtin(FamilyId::Gegenbauer(rat(-1, 2)));
        let c = classify(&cheb, 24, 8).unwrap();
        assert_eq!(c.verdict, Verdict::InfiniteDim(Witness::IrregularHead { n: 0 }));
        let t = classify(&cheb.to_table(32).unwrap(), 24, 8).unwrap();
        assert!(t.is_infinite());
    }

    #[test]
    fn positivity_violation_is_an_error() {
        let bad = CoeffSeq::PolyForm(poly(&[-3, 1]));
        assert!(matches!(classify(&bad, 24, 8), Err(Error::NotPositive { n: 0, .. })));
        let bad_table = CoeffSeq::Table(vec![rat_int(1), rat_int(0), rat_int(2), rat_int(3)]);
        assert!(matches!(classify(&bad_table, 8, 8), Err(Error::NotPositive { n: 1, .. })));
    }

    #[test]
    fn table_classification() {
        let short = CoeffSeq::Table(vec![rat(1, 2), rat_int(1), rat(3, 2), rat_int(2)]);
        let c = classify(&short, 24, 8).unwrap();
        assert_eq!(c.r(), Some(&QPoly::from_coeffs(vec![rat(1, 2), rat(1, 2)])));
        assert!(c.window_limited);

        let tiny = CoeffSeq::Table(vec![rat_int(1), rat_int(2), rat_int(3)]);
        assert!(matches!(classify(&tiny, 24, 8).unwrap().verdict, Verdict::Inconclusive(_)));
        assert!(classify(&short, 4, 8).is_err());

        // quadratic with R(-1) != 0 is still finite: forward differences skip b_{-1}
        let quad = CoeffSeq::PolyForm(poly(&[1, 3, 1])).to_table(30).unwrap();
        let c = classify(&quad, 24, 8).unwrap();
        assert_eq!(c.r(), Some(&poly(&[1, 3, 1])));
        assert!(!c.window_limited);

        let quartic = CoeffSeq::PolyForm(poly(&[1, 0, 2, 0, 1])).to_table(30).unwrap();
        assert_eq!(
            classify(&quartic, 24, 8).unwrap().verdict,
            Verdict::InfiniteDim(Witness::NonconstantDifferences {
                jmax: 8,
                first_constant: Some(3)
            })
        );
        let leg = CoeffSeq::Builtin(FamilyId::Legendre).to_table(32).unwrap();
        assert_eq!(
            classify(&leg, 24, 8).unwrap().verdict,
            Verdict::InfiniteDim(Witness::NonconstantDifferences {
                jmax: 8,
                first_constant: None
            })
        );
    }

    #[test]
    fn summation_examples() {
        let s = summation_poly(&poly(&[1, 1]), &Rat::zero());
        assert_eq!(s, QPoly::from_coeffs(vec![Rat::zero(), rat(3, 2), rat(1, 2)]));
        assert_eq!(summation_poly(&QPoly::zero(), &rat(1, 2)), QPoly::constant(rat(1, 2)));
        // general α0 + α1 i: (α1/2) n² + (α0 + α1/2) n + b0²
        let (a0, a1, b0) = (rat(2, 3), rat(-5, 7), rat(9, 4));
        let s = summation_poly(&QPoly::from_coeffs(vec![a0.clone(), a1.clone()]), &b0);
        let expect = QPoly::from_coeffs(vec![b0, &a0 + &a1 / rat_int(2), &a1 / rat_int(2)]);
        assert_eq!(s, expect);
    }

    #[test]
    fn antidifference_examples() {
        assert_eq!(antidifference(&poly(&[1])), poly(&[0, 1]));
        assert_eq!(
            antidifference(&poly(&[0, 1])),
            QPoly::from_coeffs(vec![Rat::zero(), rat(1, 2), rat(1, 2)])
        );
        let q = antidifference(&poly(&[0, 0, 1]));
        // n(n+1)(2n+1)/6
        let expect = QPoly::from_coeffs(vec![Rat::zero(), rat(1, 6), rat(1, 2), rat(1, 3)]);
        assert_eq!(q, expect);
        for n in 1..=20 {
            assert_eq!(q.eval(&rat_int(n)) - q.eval(&rat_int(n - 1)), rat_int(n * n));
        }
    }

    #[test]
    fn antidifference_system_is_triangular_with_factorial_determinant() {
        for j0 in 0..6 {
            let a = antidifference_system(j0);
            let mut det = Rat::one();
            for (r, row) in a.iter().enumerate() {
                assert!(row[r + 1..].iter().all(|v| v.is_zero()));
                assert_eq!(row[r], rat_int((j0 - r + 1) as i64));
                det *= &row[r];
            }
            let fact: i64 = (1..=(j0 as i64 + 1)).product();
            assert_eq!(det, rat_int(fact));
        }
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = QPoly> {
        proptest::collection::vec((-10i64..=10, 1i64..=4), 0..=max_deg + 1).prop_map(|v| {
            QPoly::from_coeffs(v.into_iter().map(|(a, b)| rat(a, b)).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn antidifference_inverts_backward_difference(p in arb_poly(5)) {
            let q = antidifference(&p);
            prop_assert!(q.eval(&Rat::zero()).is_zero());
            for n in 1..=50 {
                prop_assert_eq!(q.eval(&rat_int(n)) - q.eval(&rat_int(n - 1)), p.eval(&rat_int(n)));
            }
        }

        #[test]
        fn faulhaber_matches_antidifference(p in arb_poly(5), b0 in -5i64..5) {
            let b0 = rat_int(b0);
            let q = antidifference(&p);
            let s = summation_poly(&p, &b0);
            prop_assert_eq!(s, &q + &QPoly::constant(b0));
        }

        #[test]
        fn diff_rows_obey_recurrence(c in proptest::collection::vec(-5i64..=5, 1..6), base in 0i64..4) {
            let mut c = c;
            c[0] = c[0].abs() + 50;
            let seq = CoeffSeq::PolyForm(poly(&c));
            if let Ok(t) = diff_table(&seq, 4, 8, base) {
                for j in 1..=4 {
                    for i in 0..7 {
                        prop_assert_eq!(&t.rows[j][i], &(&t.rows[j - 1][i + 1] - &t.rows[j - 1][i]));
                    }
                }
            }
        }
    }
}
