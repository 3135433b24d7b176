//! Even moments of the measure from the Jacobi matrix, and the relation
//! tying them to `b_n²` through the nested `α` coefficients.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::coeffseq::CoeffSeq;
use crate::{Error, Rat, Result};

/// `μ_0, μ_2, μ_4, …`; odd moments vanish for a symmetric measure.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSeq {
    pub mu: Vec<Rat>,
}

impl MomentSeq {
    /// `μ_{2k}`.
    pub fn even(&self, k: usize) -> &Rat {
        &self.mu[k]
    }
}

/// `μ_{2k} = (J^{2k})_{00}` for `k = 0..=kmax`, by walking the recurrence
/// in the gauge where the Jacobi matrix has `1` below and `b_m²` above the
/// diagonal: `v'[m] = v[m-1] + b_m² v[m+1]`.
pub fn moments_from_jacobi(seq: &CoeffSeq, kmax: usize, dim: usize) -> Result<MomentSeq> {
    if dim <= kmax + 1 {
        return Err(Error::InvalidArgument(format!(
            "dimension {dim} must exceed kmax + 1 = {}",
            kmax + 1
        )));
    }
    let bsq: Vec<Rat> = (0..dim as i64).map(|n| seq.bsq(n)).collect::<Result<_>>()?;
    let mut v = vec![Rat::zero(); dim];
    v[0] = Rat::one();
    let mut mu = vec![Rat::one()];
    for step in 1..=2 * kmax {
        let mut next = vec![Rat::zero(); dim];
        for m in 0..dim {
            let mut acc = Rat::zero();
            if m > 0 {
                acc += &v[m - 1];
            }
            if m + 1 < dim {
                acc += &bsq[m] * &v[m + 1];
            }
            next[m] = acc;
        }
        v = next;
        if step % 2 == 0 {
            mu.push(v[0].clone());
        }
    }
    Ok(MomentSeq { mu })
}

/// How the `α` index ranges are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reading {
    /// Ranges as written: `k_1` from `2p-1` to `n-1`, then down to
    /// `k_p >= 1`, gaps of at least two.
    Literal,
    /// Ranges lowered by one: `k_1` from `2p-2` to `n-2`, down to
    /// `k_p >= 0`. These are the coefficients of the monic orthogonal
    /// polynomial of degree `n`.
    Shifted,
}

impl Reading {
    pub fn name(&self) -> &'static str {
        match self {
            Reading::Literal => "literal",
            Reading::Shifted => "shifted",
        }
    }
}

/// `α_{2p-1,n-1}` as written; `α_{-1,·} = 1`.
pub fn alpha_coeff(seq: &CoeffSeq, p: usize, n: usize) -> Result<Rat> {
    alpha_with(seq, p, n, Reading::Literal)
}

pub fn alpha_with(seq: &CoeffSeq, p: usize, n: usize, reading: Reading) -> Result<Rat> {
    if p == 0 {
        return Ok(Rat::one());
    }
    let drop = match reading {
        Reading::Literal => 0,
        Reading::Shifted => 1,
    };
    let top = n as i64 - 1 - drop;
    nested(seq, p, 1, top, drop)
}

/// `Σ_{k = 2(p-i)+1-drop}^{top} b_k² · (level i + 1 with top k - 2)`.
fn nested(seq: &CoeffSeq, p: usize, i: usize, top: i64, drop: i64) -> Result<Rat> {
    if i > p {
        return Ok(Rat::one());
    }
    let low = 2 * (p - i) as i64 + 1 - drop;
    let mut acc = Rat::zero();
    for k in low..=top {
        let inner = nested(seq, p, i + 1, k - 2, drop)?;
        if !inner.is_zero() {
            acc += seq.bsq(k)? * inner;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct MomentRow {
    pub n: usize,
    pub lhs: Rat,
    pub rhs: Rat,
}

impl MomentRow {
    pub fn matches(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Clone, Debug)]
pub struct MomentReport {
    pub reading: Reading,
    pub rows: Vec<MomentRow>,
}

impl MomentReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(MomentRow::matches)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "reading": self.reading.name(),
            "all_match": self.all_match(),
            "rows": self.rows.iter().map(|r| json!({
                "n": r.n,
                "lhs": r.lhs.to_string(),
                "rhs": r.rhs.to_string(),
                "match": r.matches(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// For `n = 1..=nmax`, evaluates
/// `Σ_m Σ_s (-1)^{m+s} α_{2m-1,n-1} α_{2s-1,n-1} μ_{2n-2m-2s+2} / (b_0²…b_{n-1}²)`
/// (`0 <= m, s <= ⌊n/2⌋`) against `b_{n-1}² + b_n²`. The divisor does not
/// depend on `m` or `s`, so where it is placed does not change the value.
pub fn verify_moment_relation(seq: &CoeffSeq, nmax: usize, reading: Reading) -> Result<MomentReport> {
    if nmax == 0 {
        return Err(Error::InvalidArgument("nmax must be at least 1".into()));
    }
    if seq.is_table() {
        return Err(Error::TableRejected);
    }
    let kmax = nmax + 1;
    let mu = moments_from_jacobi(seq, kmax, kmax + 2)?;
    let mut rows = Vec::with_capacity(nmax);
    let mut factorial = Rat::one();
    for n in 1..=nmax {
        factorial *= seq.bsq(n as i64 - 1)?;
        let half = n / 2;
        let alphas: Vec<Rat> = (0..=half)
            .map(|m| alpha_with(seq, m, n, reading))
            .collect::<Result<_>>()?;
        let mut sum = Rat::zero();
        for (m, am) in alphas.iter().enumerate() {
            for (s, as_) in alphas.iter().enumerate() {
                let term = am * as_ * mu.even(n + 1 - m - s);
                if (m + s) % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
        }
        rows.push(MomentRow {
            n,
            lhs: sum / &factorial,
            rhs: seq.bsq(n as i64 - 1)? + seq.bsq(n as i64)?,
        });
    }
    Ok(MomentReport { reading, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffseq::FamilyId;
    use crate::scalar::{rat, rat_int};
    use crate::QPoly;

    fn herm() -> CoeffSeq {
        CoeffSeq::Builtin(FamilyId::Hermite)
    }

    #[test]
    fn hermite_and_legendre_moments() {
        let m = moments_from_jacobi(&herm(), 5, 7).unwrap();
        let mut dfact = 1i64;
        for k in 0..=5usize {
            if k > 0 {
                dfact *= 2 * k as i64 - 1;
            }
            assert_eq!(m.mu[k], rat(dfact, 1 << k));
        }
        let m = moments_from_jacobi(&CoeffSeq::Builtin(FamilyId::Legendre), 5, 7).unwrap();
        for k in 0..=5 {
            assert_eq!(m.mu[k], rat(1, 2 * k as i64 + 1));
        }
    }

    #[test]
    fn truncation_independent() {
        let seq = CoeffSeq::Builtin(FamilyId::Gegenbauer(rat(1, 2)));
        let a = moments_from_jacobi(&seq, 6, 8).unwrap();
        let b = moments_from_jacobi(&seq, 6, 24).unwrap();
        assert_eq!(a, b);
        assert!(moments_from_jacobi(&seq, 6, 7).is_err());
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_coeff(&herm(), 1, 2).unwrap(), rat_int(1));
        assert_eq!(alpha_coeff(&herm(), 2, 2).unwrap(), rat_int(0));
        assert_eq!(alpha_coeff(&herm(), 1, 3).unwrap(), rat(5, 2));
        assert_eq!(alpha_coeff(&herm(), 0, 7).unwrap(), rat_int(1));
    }

    #[test]
    fn shifted_alphas_are_monic_coefficients() {
        // Monic Hermite-type polynomial of degree 4 with b² = (n+1)/2:
        // x⁴ - 3x² + 3/4.
        assert_eq!(alpha_with(&herm(), 1, 4, Reading::Shifted).unwrap(), rat(3, 1));
        assert_eq!(alpha_with(&herm(), 2, 4, Reading::Shifted).unwrap(), rat(3, 4));
    }

    #[test]
    fn relation_at_n_one_agrees_under_both_readings() {
        for reading in [Reading::Literal, Reading::Shifted] {
            let r = verify_moment_relation(&herm(), 1, reading).unwrap();
            assert_eq!(r.rows[0].rhs, rat(3, 2));
            assert_eq!(r.rows[0].lhs, rat(3, 2));
        }
    }

    #[test]
    fn shifted_reading_matches_and_literal_does_not() {
        let cubic = CoeffSeq::PolyForm(QPoly::from_coeffs(vec![rat_int(1), rat_int(0), rat_int(0), rat_int(1)]));
        for seq in [herm(), CoeffSeq::Builtin(FamilyId::Legendre), cubic] {
            assert!(verify_moment_relation(&seq, 6, Reading::Shifted).unwrap().all_match());
            let lit = verify_moment_relation(&seq, 6, Reading::Literal).unwrap();
            assert!(lit.rows[0].matches());
            assert!(!lit.rows[1].matches());
        }
    }
}
