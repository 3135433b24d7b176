//! Truncated Fock-space matrices: an exact realization in the rational
//! gauge and a floating one in the original square-root basis. They serve
//! as an independent check on the symbolic engine.

use serde_json::{json, Value};

use crate::coeffseq::CoeffSeq;
use crate::linalg::Echelon;
use crate::scalar::rat_to_f64;
use crate::{Error, Rat, Result, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Gauge,
    Original,
}

/// Dense `dim × dim` matrix with a declared band.
///
/// `exact_upto` is the largest index `h` such that every entry with row and
/// column `<= h` equals the corresponding entry of the infinite operator.
/// Products shrink it, since the truncation drops intermediate indices.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncOp<T> {
    dim: usize,
    entries: Vec<T>,
    bandwidth: usize,
    exact_upto: i64,
}

impl<T: Scalar> TruncOp<T> {
    pub fn zeros(dim: usize) -> Self {
        TruncOp {
            dim,
            entries: vec![T::zero(); dim * dim],
            bandwidth: 0,
            exact_upto: dim as i64 - 1,
        }
    }

    /// Matrix with entry `f(n)` at `(n + d, n)` for every admissible `n`.
    pub fn from_diagonal<F>(dim: usize, d: i64, mut f: F) -> Result<Self>
    where
        F: FnMut(i64) -> Result<T>,
    {
        let mut m = Self::zeros(dim);
        m.bandwidth = d.unsigned_abs() as usize;
        for n in 0..dim as i64 {
            let r = n + d;
            if (0..dim as i64).contains(&r) {
                m.entries[r as usize * dim + n as usize] = f(n)?;
            }
        }
        Ok(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(dim, 0, |_| Ok(T::one())).expect("infallible")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn exact_upto(&self) -> i64 {
        self.exact_upto
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.entries[r * self.dim + c]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    /// Values along the diagonal `(n + d, n)`.
    pub fn diagonal(&self, d: i64) -> Vec<T> {
        (0..self.dim as i64)
            .filter(|n| (0..self.dim as i64).contains(&(n + d)))
            .map(|n| self.get((n + d) as usize, n as usize).clone())
            .collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        TruncOp {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
            bandwidth: self.bandwidth.max(other.bandwidth),
            exact_upto: self.exact_upto.min(other.exact_upto),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        TruncOp {
            entries: self.entries.iter().map(|a| a.clone() * c.clone()).collect(),
            ..self.clone()
        }
    }

    /// Product that only visits the band.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let dim = self.dim;
        let (bt, bu) = (self.bandwidth, other.bandwidth);
        let mut out = Self::zeros(dim);
        for r in 0..dim {
            for k in r.saturating_sub(bt)..(r + bt + 1).min(dim) {
                let t = self.get(r, k);
                if t.is_zero() {
                    continue;
                }
                for c in k.saturating_sub(bu)..(k + bu + 1).min(dim) {
                    let u = other.get(k, c);
                    if !u.is_zero() {
                        let acc = &mut out.entries[r * dim + c];
                        *acc = acc.clone() + t.clone() * u.clone();
                    }
                }
            }
        }
        out.bandwidth = bt + bu;
        out.exact_upto = self.exact_upto.min(other.exact_upto) - bt.min(bu) as i64;
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Entries with row and column in `lo..=hi`, row-major.
    pub fn window(&self, lo: usize, hi: usize) -> Vec<T> {
        let mut out = Vec::new();
        for r in lo..=hi {
            for c in lo..=hi {
                out.push(self.get(r, c).clone());
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Row-major CSV dump.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for row in self.entries.chunks(self.dim) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

impl TruncOp<f64> {
    /// `d_k(x) = det(x I - J_k)` for the leading `k × k` blocks of a
    /// symmetric tridiagonal matrix, `k = 0..=upto`.
    pub fn charpoly_minors(&self, x: f64, upto: usize) -> Vec<f64> {
        let mut d = vec![1.0];
        for k in 0..upto.min(self.dim) {
            let diag = x - self.get(k, k);
            let next = if k == 0 {
                diag
            } else {
                let off = self.get(k, k - 1);
                diag * d[k] - off * off * d[k - 1]
            };
            d.push(next);
        }
        d
    }

    pub fn symmetric_eigen(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        let m = nalgebra::DMatrix::from_row_slice(self.dim, self.dim, &self.entries);
        let eig = m.symmetric_eigen();
        let mut idx: Vec<usize> = (0..self.dim).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = idx
            .iter()
            .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect();
        (values, vectors)
    }

    pub fn max_abs_diff(&self, other: &Self, lo: usize, hi: usize) -> (f64, Option<(usize, usize)>) {
        let mut best = (0.0, None);
        for r in lo..=hi {
            for c in lo..=hi {
                let dev = (self.get(r, c) - other.get(r, c)).abs();
                if dev > best.0 {
                    best = (dev, Some((r, c)));
                }
            }
        }
        best
    }
}

/// The five basic matrices of one realization.
#[derive(Clone, Debug)]
pub struct TruncGenerators<T> {
    pub a: TruncOp<T>,
    pub adag: TruncOp<T>,
    pub n: TruncOp<T>,
    pub bn: TruncOp<T>,
    pub bni: TruncOp<T>,
}

fn checked_bsq(seq: &CoeffSeq, n: i64) -> Result<Rat> {
    let v = seq.bsq(n)?;
    if v < Rat::from_integer(0.into()) {
        return Err(Error::NotPositive {
            n,
            value: v.to_string(),
        });
    }
    Ok(v)
}

pub fn truncated_gauge(seq: &CoeffSeq, dim: usize) -> Result<TruncGenerators<Rat>> {
    check_dim(dim)?;
    let two = Rat::from_integer(2.into());
    Ok(TruncGenerators {
        a: TruncOp::from_diagonal(dim, -1, |n| Ok(&two * checked_bsq(seq, n - 1)?))?,
        adag: TruncOp::from_diagonal(dim, 1, |_| Ok(Rat::from_integer(1.into())))?,
        n: TruncOp::from_diagonal(dim, 0, |n| Ok(Rat::from_integer(n.into())))?,
        bn: TruncOp::from_diagonal(dim, 0, |n| checked_bsq(seq, n - 1))?,
        bni: TruncOp::from_diagonal(dim, 0, |n| checked_bsq(seq, n))?,
    })
}

pub fn truncated_original(seq: &CoeffSeq, dim: usize) -> Result<TruncGenerators<f64>> {
    check_dim(dim)?;
    let f = |n: i64| checked_bsq(seq, n).map(|v| rat_to_f64(&v));
    Ok(TruncGenerators {
        a: TruncOp::from_diagonal(dim, -1, |n| Ok((2.0 * f(n - 1)?).sqrt()))?,
        adag: TruncOp::from_diagonal(dim, 1, |n| Ok((2.0 * f(n)?).sqrt()))?,
        n: TruncOp::from_diagonal(dim, 0, |n| Ok(n as f64))?,
        bn: TruncOp::from_diagonal(dim, 0, |n| f(n - 1))?,
        bni: TruncOp::from_diagonal(dim, 0, f)?,
    })
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 4 {
        return Err(Error::InvalidArgument(format!("truncation {dim} is below 4")));
    }
    Ok(())
}

/// Outcome of one matrix identity on the trusted block.
#[derive(Clone, Debug)]
pub struct MatrixCheck {
    pub name: String,
    pub pass: bool,
    pub max_deviation: f64,
    pub location: Option<(usize, usize)>,
    /// Deviating entries outside the trusted block (truncation artifacts).
    pub artifacts: Vec<(usize, usize)>,
}

impl MatrixCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "identity": self.name,
            "pass": self.pass,
            "max_deviation": self.max_deviation,
            "location": self.location.map(|(r, c)| vec![r, c]),
            "artifacts": self.artifacts.iter().map(|&(r, c)| vec![r, c]).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct CommutatorReport {
    pub mode: Mode,
    pub trusted: (usize, usize),
    pub checks: Vec<MatrixCheck>,
}

impl CommutatorReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub const ORIGINAL_RTOL: f64 = 1e-12;

fn compare<T: Scalar>(
    name: &str,
    lhs: &TruncOp<T>,
    rhs: &TruncOp<T>,
    lo: usize,
    hi: usize,
    dev: impl Fn(&T, &T) -> f64,
    tol: impl Fn(&T) -> f64,
) -> MatrixCheck {
    let mut out = MatrixCheck {
        name: name.to_string(),
        pass: true,
        max_deviation: 0.0,
        location: None,
        artifacts: Vec::new(),
    };
    let trusted = |i: usize| (lo..=hi).contains(&i);
    for r in 0..lhs.dim() {
        for c in 0..lhs.dim() {
            let (x, y) = (lhs.get(r, c), rhs.get(r, c));
            let d = dev(x, y);
            if d <= tol(y) {
                continue;
            }
            if trusted(r) && trusted(c) {
                out.pass = false;
                if d > out.max_deviation || out.location.is_none() {
                    out.max_deviation = d;
                    out.location = Some((r, c));
                }
            } else {
                out.artifacts.push((r, c));
            }
        }
    }
    out
}

/// The three bracket identities `[A, A†] = 2(B(N+I) - B(N))`,
/// `[N, A†] = A†`, `[N, A] = -A` on the block `margin..dim-1-margin`.
pub fn commutator_check(seq: &CoeffSeq, dim: usize, mode: Mode, margin: usize) -> Result<CommutatorReport> {
    if dim <= 2 * margin + 4 {
        return Err(Error::InvalidArgument(format!(
            "truncation {dim} leaves no interior for margin {margin}"
        )));
    }
    let (lo, hi) = (margin, dim - 1 - margin);
    let checks = match mode {
        Mode::Gauge => {
            let g = truncated_gauge(seq, dim)?;
            let exact = |x: &Rat, y: &Rat| rat_to_f64(&(x - y)).abs();
            triple(&g, &Rat::from_integer(2.into()), lo, hi, exact, |_| 0.0)
        }
        Mode::Original => {
            let g = truncated_original(seq, dim)?;
            let rel = |x: &f64, y: &f64| (x - y).abs();
            triple(&g, &2.0, lo, hi, rel, |y: &f64| ORIGINAL_RTOL * y.abs().max(1.0))
        }
    };
    Ok(CommutatorReport {
        mode,
        trusted: (lo, hi),
        checks,
    })
}

fn triple<T: Scalar>(
    g: &TruncGenerators<T>,
    two: &T,
    lo: usize,
    hi: usize,
    dev: impl Fn(&T, &T) -> f64 + Copy,
    tol: impl Fn(&T) -> f64 + Copy,
) -> Vec<MatrixCheck> {
    let jump = g.bni.sub(&g.bn).scale(two);
    let neg_a = g.a.scale(&-T::one());
    vec![
        compare("[A,Adag] = 2(B(N+I) - B(N))", &g.a.commutator(&g.adag), &jump, lo, hi, dev, tol),
        compare("[N,Adag] = Adag", &g.n.commutator(&g.adag), &g.adag, lo, hi, dev, tol),
        compare("[N,A] = -A", &g.n.commutator(&g.a), &neg_a, lo, hi, dev, tol),
    ]
}

/// Symmetric tridiagonal matrix of the position operator, off-diagonal
/// `b_n`. Only the original basis is meaningful here.
pub fn jacobi_matrix(seq: &CoeffSeq, dim: usize, mode: Mode) -> Result<TruncOp<f64>> {
    if mode == Mode::Gauge {
        return Err(Error::InvalidArgument(
            "the Jacobi matrix is defined in the original basis only".into(),
        ));
    }
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let lower = TruncOp::from_diagonal(dim, 1, |n| Ok(rat_to_f64(&checked_bsq(seq, n)?).sqrt()))?;
    let upper = TruncOp::from_diagonal(dim, -1, |n| Ok(rat_to_f64(&checked_bsq(seq, n - 1)?).sqrt()))?;
    Ok(lower.add(&upper))
}

/// Verdict of the matrix closure search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub dim_estimate: usize,
    pub stabilized: bool,
    /// The trusted window became too small before a verdict was reached.
    pub inconclusive: bool,
    pub depth_reached: usize,
}

impl OracleVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim_estimate,
            "stabilized": self.stabilized,
            "inconclusive": self.inconclusive,
            "depth_reached": self.depth_reached,
        })
    }
}

/// Smallest trusted window the oracle will test independence on.
const MIN_WINDOW: i64 = 8;

struct Window {
    lo: usize,
    hi: usize,
    echelon: Echelon<Rat>,
}

impl Window {
    fn build(basis: &[TruncOp<Rat>], lo: usize, hi: usize) -> (Self, bool) {
        let width = (hi - lo + 1) * (hi - lo + 1);
        let mut w = Window {
            lo,
            hi,
            echelon: Echelon::new(width),
        };
        let full = basis.iter().all(|b| w.echelon.insert(&b.window(lo, hi)));
        (w, full)
    }
}

/// Breadth-first bracket closure of the gauge matrices `A, A†, N, I`,
/// with independence tested by exact rank on the block where every
/// element is still exact.
pub fn closure_rank_oracle(
    seq: &CoeffSeq,
    dim: usize,
    max_depth: usize,
    max_dim: usize,
    margin: usize,
) -> Result<OracleVerdict> {
    let g = truncated_gauge(seq, dim)?;
    let gens = [g.a, g.adag, g.n, TruncOp::identity(dim)];
    let lo = margin;
    let mut hi = dim - 1;
    let (mut win, _) = Window::build(&[], lo, hi);
    let mut basis: Vec<TruncOp<Rat>> = Vec::new();
    for op in gens {
        if win.echelon.insert(&op.window(lo, hi)) {
            basis.push(op);
        }
    }
    let mut frontier: Vec<usize> = (0..basis.len()).collect();
    let mut depth = 0;
    let verdict = |basis: &Vec<TruncOp<Rat>>, stabilized, inconclusive, depth| OracleVerdict {
        dim_estimate: basis.len(),
        stabilized,
        inconclusive,
        depth_reached: depth,
    };
    while basis.len() <= max_dim && depth < max_depth {
        depth += 1;
        let first_new = frontier.first().copied().unwrap_or(basis.len());
        let before = basis.len();
        let mut new_ops = Vec::new();
        for &i in &frontier {
            for j in (0..before).filter(|&j| j < first_new || j > i) {
                new_ops.push(basis[i].commutator(&basis[j]));
            }
        }
        for op in new_ops {
            if basis.len() > max_dim {
                break;
            }
            let h = op.exact_upto();
            if h < win.hi as i64 {
                if h - (lo as i64) + 1 < MIN_WINDOW {
                    return Ok(verdict(&basis, false, true, depth));
                }
                hi = h as usize;
                let (w, full) = Window::build(&basis, lo, hi);
                if !full {
                    return Ok(verdict(&basis, false, true, depth));
                }
                win = w;
            }
            if win.echelon.insert(&op.window(win.lo, win.hi)) {
                basis.push(op);
            }
        }
        if basis.len() == before {
            return Ok(verdict(&basis, true, false, depth));
        }
        frontier = (before..basis.len()).collect();
    }
    Ok(verdict(&basis, false, false, depth))
}
