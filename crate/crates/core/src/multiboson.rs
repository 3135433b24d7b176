//! Reduced algebras of cluster Hamiltonians: the effective `b²` in the
//! eigenvalue `λ_0`, its classification, and couplings that make the
//! reduction harmonic.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classifier::{classify, Classification, DEFAULT_JMAX, DEFAULT_WINDOW};
use crate::coeffseq::CoeffSeq;
use crate::linalg::{invert, mat_vec};
use crate::ratfun::{parse_expr, ExprValue};
use crate::scalar::{rat_int, RatText};
use crate::{Error, Expr, QPoly, QRatFun, Rat, Result};

/// `(x+1)…(x+k)` for `k > 0`, `1` for `k = 0`, `x(x-1)…(x+k+1)` for `k < 0`.
pub fn pk_poly(k: i64) -> QPoly {
    let roots: Vec<Rat> = if k >= 0 {
        (1..=k).map(|i| rat_int(-i)).collect()
    } else {
        (0..-k).map(rat_int).collect()
    };
    QPoly::from_roots(&roots)
}

#[derive(Clone, Debug)]
pub struct MultibosonSystem {
    pub modes: usize,
    pub k: Vec<i64>,
    pub alpha: Vec<Vec<Rat>>,
    alpha_inv: Vec<Vec<Rat>>,
    /// `|g_0|²` in the occupation variables `x0, x1, …`.
    pub gsq: Expr,
    /// Phase of `g_0`; carried along, never observable here.
    pub theta: f64,
}

/// Value of `𝒢`, with `undefined` set where `|g_0|²` has no value and the
/// coupling is taken to vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct GValue {
    pub value: Rat,
    pub undefined: bool,
}

fn var_names(modes: usize, i: usize) -> Vec<String> {
    let mut names = vec![format!("x{i}")];
    if modes == 2 {
        names.push(["x", "y"][i].to_string());
    }
    names
}

impl MultibosonSystem {
    pub fn new(k: Vec<i64>, alpha: Vec<Vec<Rat>>, gsq: Expr, theta: f64) -> Result<Self> {
        let modes = k.len();
        if modes < 2 {
            return Err(Error::InvalidArgument("at least two modes are required".into()));
        }
        if k.iter().all(|&v| v == 0) {
            return Err(Error::InvalidArgument("cluster exponents are all zero".into()));
        }
        if alpha.len() != modes || alpha.iter().any(|r| r.len() != modes) {
            return Err(Error::InvalidArgument(format!("alpha must be {modes}×{modes}")));
        }
        let alpha_inv = invert(&alpha)?;
        let allowed: Vec<String> = (0..modes).flat_map(|i| var_names(modes, i)).collect();
        if let Some(v) = gsq.variables().into_iter().find(|v| !allowed.contains(v)) {
            return Err(Error::UnboundVariable(v));
        }
        Ok(MultibosonSystem {
            modes,
            k,
            alpha,
            alpha_inv,
            gsq,
            theta,
        })
    }

    pub fn alpha_inv(&self) -> &[Vec<Rat>] {
        &self.alpha_inv
    }

    /// Occupations `x = α⁻¹ λ`.
    pub fn occupations(&self, lambda: &[Rat]) -> Vec<Rat> {
        mat_vec(&self.alpha_inv, lambda)
    }

    fn eval_gsq<V: ExprValue>(&self, x: &[V]) -> Result<V> {
        let modes = self.modes;
        self.gsq.eval(&|name: &str| {
            (0..modes)
                .find(|&i| var_names(modes, i).iter().any(|n| n == name))
                .map(|i| x[i].clone())
        })
    }

    /// `𝒢(λ) = |g_0(x)|² ∏ 𝒫_{k_i}(x_i)` at `x = α⁻¹ λ`.
    pub fn cal_g(&self, lambda: &[Rat]) -> Result<GValue> {
        if lambda.len() != self.modes {
            return Err(Error::InvalidArgument(format!("expected {} eigenvalues", self.modes)));
        }
        let x = self.occupations(lambda);
        let product = self
            .k
            .iter()
            .zip(&x)
            .fold(Rat::one(), |acc, (&k, xi)| acc * pk_poly(k).eval(xi));
        match self.eval_gsq(&x) {
            Ok(g) => Ok(GValue {
                value: g * product,
                undefined: false,
            }),
            Err(Error::DivisionByZero) => Ok(GValue {
                value: Rat::zero(),
                undefined: true,
            }),
            Err(e) => Err(e),
        }
    }

    /// `𝒢(λ_0, lambda_rest)` as a rational function of `λ_0`.
    pub fn reduced_ratfun(&self, lambda_rest: &[Rat]) -> Result<QRatFun> {
        self.check_rest(lambda_rest)?;
        let lam0 = QRatFun::x();
        let x: Vec<QRatFun> = self
            .alpha_inv
            .iter()
            .map(|row| {
                let mut acc = &lam0 * &QRatFun::constant(row[0].clone());
                for (c, l) in row[1..].iter().zip(lambda_rest) {
                    acc = &acc + &QRatFun::constant(c * l);
                }
                acc
            })
            .collect();
        let mut g = self.eval_gsq(&x)?;
        for (&k, xi) in self.k.iter().zip(&x) {
            let p = pk_poly(k);
            let mut val = QRatFun::zero();
            for c in p.coeffs().iter().rev() {
                val = &(&val * xi) + &QRatFun::constant(c.clone());
            }
            g = &g * &val;
        }
        Ok(g)
    }

    fn check_rest(&self, lambda_rest: &[Rat]) -> Result<()> {
        if lambda_rest.len() + 1 != self.modes {
            return Err(Error::InvalidArgument(format!(
                "expected {} fixed eigenvalues, got {}",
                self.modes - 1,
                lambda_rest.len()
            )));
        }
        Ok(())
    }
}

/// Tabulated reduction at fixed `λ_1..λ_N`.
#[derive(Clone, Debug)]
pub struct ReducedSeq {
    pub lambda_rest: Vec<Rat>,
    pub table: CoeffSeq,
    /// `λ_0` values where the coupling was undefined and set to zero.
    pub undefined_at: Vec<i64>,
    /// `λ_0` values where every occupation is a non-negative integer.
    pub realizable_at: Vec<i64>,
}

impl ReducedSeq {
    pub fn values(&self) -> &[Rat] {
        match &self.table {
            CoeffSeq::Table(v) => v,
            _ => unreachable!("reduce always produces a table"),
        }
    }
}

pub const MIN_REDUCE_LEN: usize = 8;

/// `b²_{λ_0} = 𝒢(λ_0, lambda_rest)` for `λ_0 = 0..=len`.
pub fn reduce(sys: &MultibosonSystem, lambda_rest: &[Rat], len: usize) -> Result<ReducedSeq> {
    if len < MIN_REDUCE_LEN {
        return Err(Error::InvalidArgument(format!("table length {len} is below {MIN_REDUCE_LEN}")));
    }
    sys.check_rest(lambda_rest)?;
    let mut values = Vec::with_capacity(len + 1);
    let mut undefined_at = Vec::new();
    let mut realizable_at = Vec::new();
    for l0 in 0..=len as i64 {
        let mut lambda = vec![rat_int(l0)];
        lambda.extend_from_slice(lambda_rest);
        let g = sys.cal_g(&lambda)?;
        if g.value < Rat::zero() {
            return Err(Error::NotPositive {
                n: l0,
                value: g.value.to_string(),
            });
        }
        if g.undefined {
            undefined_at.push(l0);
        }
        let x = sys.occupations(&lambda);
        if x.iter().all(|v| v.is_integer() && *v >= Rat::zero()) {
            realizable_at.push(l0);
        }
        values.push(g.value);
    }
    Ok(ReducedSeq {
        lambda_rest: lambda_rest.to_vec(),
        table: CoeffSeq::Table(values),
        undefined_at,
        realizable_at,
    })
}

#[derive(Clone, Debug)]
pub struct SampleVerdict {
    pub reduced: ReducedSeq,
    pub classification: Classification,
    /// `(𝒰_0, 𝒰_1, 𝒰_2)` when the reduction is quadratic.
    pub u: Option<[Rat; 3]>,
}

#[derive(Clone, Debug)]
pub struct FiniteCondition {
    pub finite: bool,
    /// Finite with `𝒰_0 = 0` on every sample: the harmonic case.
    pub harmonic: bool,
    pub samples: Vec<SampleVerdict>,
}

impl FiniteCondition {
    pub fn to_json(&self) -> Value {
        json!({
            "finite": self.finite,
            "harmonic": self.harmonic,
            "samples": self.samples.iter().map(|s| {
                let mut v = json!({
                    "lambda_rest": s.reduced.lambda_rest.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "table": s.reduced.values().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "classification": s.classification.to_json(),
                    "undefined_at": s.reduced.undefined_at,
                    "realizable_at": s.reduced.realizable_at,
                });
                if let Some(u) = &s.u {
                    v["U"] = json!(u.iter().map(|r| r.to_string()).collect::<Vec<_>>());
                }
                v
            }).collect::<Vec<_>>(),
        })
    }
}

/// Classifies the reduction at each sample of `λ_1..λ_N`.
pub fn finite_condition_check(sys: &MultibosonSystem, samples: &[Vec<Rat>], len: usize) -> Result<FiniteCondition> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no lambda_rest samples".into()));
    }
    let mut out = Vec::with_capacity(samples.len());
    for rest in samples {
        let reduced = reduce(sys, rest, len)?;
        let classification = classify(&reduced.table, DEFAULT_WINDOW, DEFAULT_JMAX)?;
        let u = classification
            .r()
            .map(|r| [r.coeff(2), r.coeff(1), r.coeff(0)]);
        out.push(SampleVerdict {
            reduced,
            classification,
            u,
        });
    }
    let finite = out.iter().all(|s| s.classification.is_finite());
    let harmonic = finite && out.iter().all(|s| s.u.as_ref().is_some_and(|u| u[0].is_zero()));
    Ok(FiniteCondition {
        finite,
        harmonic,
        samples: out,
    })
}

/// A coupling `|g_0|²` with its (unobservable) phase.
#[derive(Clone, Debug)]
pub struct Coupling {
    pub gsq: Expr,
    pub theta: f64,
}

/// `|g_0(x, y)|² = (α_00 x + α_01 y + c) / (𝒫_{k0}(x) 𝒫_{k1}(y))`, the coupling
/// for which `𝒢 = λ_0 + c`.
pub fn g0_from_condition(k0: i64, k1: i64, alpha_row0: (Rat, Rat), c: Rat, theta: f64) -> Result<Coupling> {
    if k0 < 0 || k1 < 0 {
        return Err(Error::InvalidArgument("the construction needs k0, k1 >= 0".into()));
    }
    let x = Expr::var("x0");
    let y = Expr::var("x1");
    let numer = Expr::num(alpha_row0.0) * x.clone() + Expr::num(alpha_row0.1) * y.clone() + Expr::num(c);
    let denom = pk_expr(k0, x) * pk_expr(k1, y);
    Ok(Coupling {
        gsq: numer / denom,
        theta,
    })
}

fn pk_expr(k: i64, v: Expr) -> Expr {
    let factors: Vec<Expr> = if k >= 0 {
        (1..=k).map(|i| v.clone() + Expr::num(rat_int(i))).collect()
    } else {
        (0..-k).map(|i| v.clone() - Expr::num(rat_int(i))).collect()
    };
    factors.into_iter().fold(Expr::num(Rat::one()), |acc, f| acc * f)
}

/// Two-mode cluster system `g_0 a_0^{k0} a_1^{*k1} + h.c.` with
/// `α = [[1/k0, 0], [k1, k0]]` and the coupling that makes the reduction
/// harmonic. The creation power on mode 1 enters as exponent `-k1`.
pub fn example_ah(k0: i64, k1: i64, c: Rat, theta: f64) -> Result<MultibosonSystem> {
    if k0 < 1 || k1 < 1 {
        return Err(Error::InvalidArgument("k0 and k1 must be at least 1".into()));
    }
    let x = Expr::var("x0");
    let y = Expr::var("x1");
    let numer = x.clone() + Expr::num(rat_int(k0) * &c);
    let mut denom = Expr::num(rat_int(k0));
    for i in 1..=k0 {
        denom = denom * (x.clone() + Expr::num(rat_int(i)));
    }
    for j in 0..k1 {
        denom = denom * (y.clone() - Expr::num(rat_int(j)));
    }
    let alpha = vec![
        vec![Rat::one() / rat_int(k0), Rat::zero()],
        vec![rat_int(k1), rat_int(k0)],
    ];
    MultibosonSystem::new(vec![k0, -k1], alpha, numer / denom, theta)
}

/// JSON description of a system and the samples to reduce at.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemSpec {
    pub modes: usize,
    pub k: Vec<i64>,
    pub alpha: Vec<Vec<RatText>>,
    pub gsq: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_rest: Option<Vec<RatText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_rest_samples: Option<Vec<Vec<RatText>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

impl SystemSpec {
    pub fn build(&self) -> Result<MultibosonSystem> {
        if self.k.len() != self.modes {
            return Err(Error::InvalidArgument(format!(
                "k has {} entries for {} modes",
                self.k.len(),
                self.modes
            )));
        }
        let alpha = self
            .alpha
            .iter()
            .map(|r| r.iter().map(|v| v.0.clone()).collect())
            .collect();
        MultibosonSystem::new(self.k.clone(), alpha, parse_expr(&self.gsq)?, self.theta.unwrap_or(0.0))
    }

    pub fn samples(&self) -> Vec<Vec<Rat>> {
        let conv = |v: &Vec<RatText>| v.iter().map(|r| r.0.clone()).collect::<Vec<_>>();
        let mut out: Vec<Vec<Rat>> = self.lambda_rest.iter().map(conv).collect();
        if let Some(s) = &self.lambda_rest_samples {
            out.extend(s.iter().map(conv));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn ident() -> Vec<Vec<Rat>> {
        vec![vec![rat_int(1), rat_int(0)], vec![rat_int(0), rat_int(1)]]
    }

    fn one() -> Expr {
        Expr::num(Rat::one())
    }

    #[test]
    fn pk_examples() {
        assert_eq!(pk_poly(0), QPoly::one());
        assert_eq!(pk_poly(2).to_string(), "n^2 + 3*n + 2");
        assert_eq!(pk_poly(-2).to_string(), "n^2 - n");
        for k in -5i64..=5 {
            let p = pk_poly(k);
            let roots: Vec<i64> = if k > 0 { (1..=k).map(|i| -i).collect() } else { (0..-k).collect() };
            assert_eq!(p.degree(), Some(k.unsigned_abs() as usize));
            for r in roots {
                assert!(p.eval(&rat_int(r)).is_zero());
            }
        }
    }

    #[test]
    fn cal_g_examples() {
        let sys = MultibosonSystem::new(vec![1, 0], ident(), one(), 0.0).unwrap();
        assert_eq!(sys.cal_g(&[rat_int(4), rat_int(7)]).unwrap().value, rat_int(5));
        let sys = MultibosonSystem::new(vec![0, 0], ident(), one(), 0.0);
        assert!(sys.is_err());
        let g = parse_expr("1/(x0 - 2)").unwrap();
        let sys = MultibosonSystem::new(vec![1, 0], ident(), g, 0.0).unwrap();
        let v = sys.cal_g(&[rat_int(2), rat_int(0)]).unwrap();
        assert!(v.undefined && v.value.is_zero());
    }

    #[test]
    fn reduce_examples() {
        for (k, finite) in [(1, true), (2, true), (3, false)] {
            let sys = MultibosonSystem::new(vec![k, 0], ident(), one(), 0.0).unwrap();
            let r = reduce(&sys, &[rat_int(0)], 24).unwrap();
            let c = classify(&r.table, DEFAULT_WINDOW, DEFAULT_JMAX).unwrap();
            assert_eq!(c.is_finite(), finite, "k0 = {k}");
        }
        let sys = MultibosonSystem::new(vec![1, 0], ident(), one(), 0.0).unwrap();
        assert!(reduce(&sys, &[rat_int(0)], 4).is_err());
    }

    #[test]
    fn harmonic_flag() {
        let sys = MultibosonSystem::new(vec![2, 0], ident(), one(), 0.0).unwrap();
        let f = finite_condition_check(&sys, &[vec![rat_int(0)]], 24).unwrap();
        assert!(f.finite && !f.harmonic);
        let sys = MultibosonSystem::new(vec![2, 2], ident(), one(), 0.0).unwrap();
        let f = finite_condition_check(&sys, &[vec![rat_int(1)], vec![rat(5, 2)]], 24).unwrap();
        assert!(f.finite);
    }

    #[test]
    fn example_ah_is_linear() {
        for (k0, k1) in [(1, 1), (2, 1), (2, 3)] {
            let sys = example_ah(k0, k1, rat_int(1), 0.3).unwrap();
            let rest = vec![rat_int(-k0)];
            let g = sys.reduced_ratfun(&rest).unwrap();
            assert_eq!(g.to_string(), "n + 1");
            let f = finite_condition_check(&sys, &[rest, vec![rat(1, 2)]], 24).unwrap();
            assert!(f.finite && f.harmonic);
        }
        let sys = example_ah(2, 1, rat_int(0), 0.0).unwrap();
        assert_eq!(sys.reduced_ratfun(&[rat(1, 2)]).unwrap().to_string(), "n");
    }

    #[test]
    fn g0_examples() {
        let c = g0_from_condition(0, 0, (rat(2, 3), rat(1, 5)), rat_int(4), 0.0).unwrap();
        let v = c.gsq.eval_rat(&[("x0", rat_int(3)), ("x1", rat_int(5))]).unwrap();
        assert_eq!(v, rat_int(7));
        let c = g0_from_condition(1, 0, (rat_int(1), rat_int(0)), rat_int(0), 0.0).unwrap();
        let v = c.gsq.eval_rat(&[("x0", rat_int(3)), ("x1", rat_int(0))]).unwrap();
        assert_eq!(v, rat(3, 4));
        assert!(g0_from_condition(-1, 0, (rat_int(1), rat_int(0)), rat_int(0), 0.0).is_err());
    }

    #[test]
    fn singular_alpha_rejected() {
        let alpha = vec![vec![rat_int(1), rat_int(2)], vec![rat_int(2), rat_int(4)]];
        assert!(matches!(MultibosonSystem::new(vec![1, 0], alpha, one(), 0.0), Err(Error::Singular)));
    }

    #[test]
    fn spec_json() {
        let text = r#"{"modes":2,"k":[1,-1],"alpha":[["1",0],["1","2"]],"gsq":"(x0+1)/( (x0+1)*(x0+2) )","lambda_rest":["3"]}"#;
        let spec: SystemSpec = serde_json::from_str(text).unwrap();
        let sys = spec.build().unwrap();
        assert_eq!(spec.samples(), vec![vec![rat_int(3)]]);
        assert_eq!(sys.k, vec![1, -1]);
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]

        #[test]
        fn reduced_degree_counts_dependent_modes(
            a in proptest::collection::vec(small_rat(), 4),
            k0 in -3i64..=3,
            k1 in -3i64..=3,
        ) {
            let alpha = vec![vec![a[0].clone(), a[1].clone()], vec![a[2].clone(), a[3].clone()]];
            prop_assume!(&a[0] * &a[3] != &a[1] * &a[2]);
            prop_assume!(k0 != 0 || k1 != 0);
            let sys = MultibosonSystem::new(vec![k0, k1], alpha, one(), 0.0).unwrap();
            let inv = sys.alpha_inv();
            let expect: usize = [k0, k1]
                .iter()
                .zip(inv)
                .map(|(k, row)| if row[0].is_zero() { 0 } else { k.unsigned_abs() as usize })
                .sum();
            let g = sys.reduced_ratfun(&[rat(1, 3)]).unwrap();
            prop_assert!(g.is_polynomial());
            prop_assert_eq!(g.num().degree().unwrap_or(0), expect);
        }
    }
}
