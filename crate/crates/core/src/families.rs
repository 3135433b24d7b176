//! The classical families: orthonormal polynomials through the three-term
//! recurrence, Gaussian quadrature for their measures, and Gram checks.

use statrs::function::gamma::gamma;

use crate::coeffseq::{CoeffSeq, FamilyId};
use crate::matrixreal::TruncOp;
use crate::scalar::rat_to_f64;
use crate::{Error, Rat, Result};

/// `Ψ_0..=Ψ_n` at `x` from `x Ψ_k = b_k Ψ_{k+1} + b_{k-1} Ψ_{k-1}`.
pub fn psi_values(seq: &CoeffSeq, n: usize, x: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    let mut b_prev = 0.0;
    for k in 0..n {
        let bsq = seq.bsq(k as i64)?;
        if bsq <= Rat::from_integer(0.into()) {
            return Err(Error::NotPositive {
                n: k as i64,
                value: bsq.to_string(),
            });
        }
        let b = rat_to_f64(&bsq).sqrt();
        let prev = if k == 0 { 0.0 } else { out[k - 1] };
        out.push((x * out[k] - b_prev * prev) / b);
        b_prev = b;
    }
    Ok(out)
}

pub fn eval_psi(seq: &CoeffSeq, n: usize, x: f64) -> Result<f64> {
    Ok(psi_values(seq, n, x)?[n])
}

/// Total mass of the measure as written for each family, computed from
/// the weight's integral and the stated normalizing constant.
pub fn measure_mass(family: &FamilyId) -> Result<f64> {
    family.validate()?;
    Ok(match family {
        // ∫ e^{-x²} dx = √π, weight 1/√π.
        FamilyId::Hermite => std::f64::consts::PI.sqrt() / std::f64::consts::PI.sqrt(),
        FamilyId::Legendre => 2.0 * 0.5,
        FamilyId::Gegenbauer(a) => {
            let a = rat_to_f64(a);
            // ∫_{-1}^{1} (1 - x²)^α dx = √π Γ(α+1) / Γ(α+3/2), over d_0(α)².
            let integral = std::f64::consts::PI.sqrt() * gamma(a + 1.0) / gamma(a + 1.5);
            integral / gegenbauer_d0_sq(a)
        }
    })
}

/// `d_0(α)² = 2^{2α+1} Γ(α+1)² / Γ(2α+2)`.
pub fn gegenbauer_d0_sq(alpha: f64) -> f64 {
    2f64.powf(2.0 * alpha + 1.0) * gamma(alpha + 1.0).powi(2) / gamma(2.0 * alpha + 2.0)
}

/// The normalizing constant `d_n²` exactly as the family is usually quoted
/// alongside `d_0`: `2^{2α+1} Γ(n+2α+1)² / ((2n+2α+1) n! Γ(n+α+1))`.
pub fn gegenbauer_dn_sq_quoted(alpha: f64, n: usize) -> f64 {
    let nf = n as f64;
    2f64.powf(2.0 * alpha + 1.0) * gamma(nf + 2.0 * alpha + 1.0).powi(2)
        / ((2.0 * nf + 2.0 * alpha + 1.0) * gamma(nf + 1.0) * gamma(nf + alpha + 1.0))
}

/// `∫_{-1}^{1} P_n^{(α,α)}(x)² (1-x²)^α dx` from the standard Jacobi norm:
/// `2^{2α+1} Γ(n+α+1)² / ((2n+2α+1) n! Γ(n+2α+1))`.
pub fn gegenbauer_dn_sq_standard(alpha: f64, n: usize) -> f64 {
    let nf = n as f64;
    if n == 0 {
        // Same value; avoids 0·∞ at α = -1/2.
        return gegenbauer_d0_sq(alpha);
    }
    2f64.powf(2.0 * alpha + 1.0) * gamma(nf + alpha + 1.0).powi(2)
        / ((2.0 * nf + 2.0 * alpha + 1.0) * gamma(nf + 1.0) * gamma(nf + 2.0 * alpha + 1.0))
}

/// Jacobi polynomial `P_n^{(α,α)}(x)` by its standard recurrence.
pub fn jacobi_p(alpha: f64, n: usize, x: f64) -> f64 {
    let a = alpha;
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = (a + 1.0) * x;
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + 2.0 * a;
        let p2 = ((s - 1.0) * s * (s - 2.0) * x * p1 - 2.0 * (k + a - 1.0).powi(2) * s * p0)
            / (2.0 * k * (k + 2.0 * a) * (s - 2.0));
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Recurrence coefficients `β_1..β_{m-1}` of the monic orthogonal
/// polynomials for each weight, in their textbook closed forms.
fn weight_betas(family: &FamilyId, m: usize) -> Vec<f64> {
    (1..m)
        .map(|k| {
            let k = k as f64;
            match family {
                FamilyId::Hermite => k / 2.0,
                FamilyId::Legendre => k * k / (4.0 * k * k - 1.0),
                FamilyId::Gegenbauer(a) => {
                    let a = rat_to_f64(a);
                    if k == 1.0 {
                        // The generic formula is 0/0 here when 2α + 1 = 0.
                        4.0 * (a + 1.0).powi(2) / ((2.0 * a + 2.0).powi(2) * (2.0 * a + 3.0))
                    } else {
                        let s = 2.0 * k + 2.0 * a;
                        4.0 * k * (k + a).powi(2) * (k + 2.0 * a) / (s * s * (s + 1.0) * (s - 1.0))
                    }
                }
            }
        })
        .collect()
}

/// `m`-point Gaussian rule for the family's measure (Golub–Welsch).
pub fn quadrature_nodes(family: &FamilyId, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one point".into()));
    }
    let mass = measure_mass(family)?;
    let betas = weight_betas(family, m);
    let lower = TruncOp::from_diagonal(m, 1, |n| Ok(betas[n as usize].sqrt()))?;
    let upper = TruncOp::from_diagonal(m, -1, |n| Ok(betas[n as usize - 1].sqrt()))?;
    let (nodes, vectors) = lower.add(&upper).symmetric_eigen();
    let weights = vectors.iter().map(|v| mass * v[0] * v[0]).collect();
    Ok((nodes, weights))
}

#[derive(Clone, Debug)]
pub struct OrthoReport {
    pub max_deviation: f64,
    pub gram: Vec<Vec<f64>>,
    /// Gegenbauer only: `∫ (d_0 P_n / d_n)² dμ` with the quoted `d_n`,
    /// `n = 0..=nmax`. Entries away from 1 expose a normalization slip.
    pub quoted_norm_ratios: Option<Vec<f64>>,
}

/// Gram matrix of `Ψ_0..=Ψ_nmax` under the family's measure.
pub fn orthonormality_check(family: &FamilyId, nmax: usize, quad_points: usize) -> Result<OrthoReport> {
    if quad_points < 2 * nmax + 2 {
        return Err(Error::InvalidArgument(format!(
            "{quad_points} points cannot integrate degree {}",
            2 * nmax
        )));
    }
    let seq = CoeffSeq::Builtin(family.clone());
    let (nodes, weights) = quadrature_nodes(family, quad_points)?;
    let psi: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&x| psi_values(&seq, nmax, x))
        .collect::<Result<_>>()?;
    let mut gram = vec![vec![0.0; nmax + 1]; nmax + 1];
    let mut max_deviation: f64 = 0.0;
    for i in 0..=nmax {
        for j in 0..=nmax {
            let g: f64 = psi.iter().zip(&weights).map(|(p, w)| w * p[i] * p[j]).sum();
            let delta = if i == j { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((g - delta).abs());
            gram[i][j] = g;
        }
    }
    let quoted_norm_ratios = match family {
        FamilyId::Gegenbauer(a) => {
            let a = rat_to_f64(a);
            let d0 = gegenbauer_d0_sq(a).sqrt();
            Some(
                (0..=nmax)
                    .map(|n| {
                        let dn = gegenbauer_dn_sq_quoted(a, n).sqrt();
                        nodes
                            .iter()
                            .zip(&weights)
                            .map(|(&x, w)| w * (d0 * jacobi_p(a, n, x) / dn).powi(2))
                            .sum()
                    })
                    .collect(),
            )
        }
        _ => None,
    };
    Ok(OrthoReport {
        max_deviation,
        gram,
        quoted_norm_ratios,
    })
}
