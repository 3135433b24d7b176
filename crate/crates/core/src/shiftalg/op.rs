use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{RatFun, Result, Scalar};

/// Weighted-shift operator `e_n ↦ Σ_d t_d(n) e_{n+d}`.
///
/// Coefficients are rational functions of `n`; the description is exact
/// for `n >= interior_from`. Below that, the true operator may differ (the
/// `b_{-1} = 0` boundary), and such rows are left to the matrix oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftOp<T> {
    comps: BTreeMap<i64, RatFun<T>>,
    interior_from: i64,
}

impl<T: Scalar> ShiftOp<T> {
    pub fn zero() -> Self {
        ShiftOp {
            comps: BTreeMap::new(),
            interior_from: 0,
        }
    }

    pub fn from_components<I>(comps: I, interior_from: i64) -> Self
    where
        I: IntoIterator<Item = (i64, RatFun<T>)>,
    {
        let mut out = Self::zero();
        for (d, c) in comps {
            let acc = match out.comps.remove(&d) {
                Some(prev) => &prev + &c,
                None => c,
            };
            if !acc.is_zero() {
                out.comps.insert(d, acc);
            }
        }
        out.interior_from = interior_from;
        out
    }

    /// Single component `coeff(n)` at shift `d`.
    pub fn single(d: i64, coeff: RatFun<T>, interior_from: i64) -> Self {
        Self::from_components([(d, coeff)], interior_from)
    }

    pub fn identity() -> Self {
        Self::single(0, RatFun::one(), 0)
    }

    pub fn diag(f: RatFun<T>, interior_from: i64) -> Self {
        Self::single(0, f, interior_from)
    }

    /// The number operator `N`.
    pub fn number() -> Self {
        Self::diag(RatFun::x(), 0)
    }

    /// Unit-weight raising shift, the gauge form of `A†`.
    pub fn raise() -> Self {
        Self::single(1, RatFun::one(), 0)
    }

    pub fn components(&self) -> &BTreeMap<i64, RatFun<T>> {
        &self.comps
    }

    pub fn component(&self, d: i64) -> Option<&RatFun<T>> {
        self.comps.get(&d)
    }

    pub fn interior_from(&self) -> i64 {
        self.interior_from
    }

    pub fn with_interior(mut self, interior_from: i64) -> Self {
        self.interior_from = interior_from;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Largest `|d|` over the components.
    pub fn bandwidth(&self) -> i64 {
        self.comps.keys().map(|d| d.abs()).max().unwrap_or(0)
    }

    pub fn max_height(&self) -> usize {
        self.comps.values().map(|c| c.height()).max().unwrap_or(0)
    }

    /// Equality of the interior action, ignoring `interior_from`.
    pub fn same_action(&self, other: &Self) -> bool {
        self.comps == other.comps
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_components(
            self.comps.iter().map(|(d, t)| (*d, t.scale(c))),
            self.interior_from,
        )
    }

    /// `self ∘ other`: the coefficient at shift `d + e` collects
    /// `u_e(n) · t_d(n + e)`.
    pub fn compose(&self, other: &Self) -> Self {
        let min_e = other.comps.keys().next().copied().unwrap_or(0);
        let interior = other
            .interior_from
            .max(self.interior_from + (-min_e).max(0));
        let mut terms = Vec::with_capacity(self.comps.len() * other.comps.len());
        for (e, u) in &other.comps {
            for (d, t) in &self.comps {
                let shifted = t.shift(&T::from_int(*e));
                terms.push((d + e, u * &shifted));
            }
        }
        Self::from_components(terms, interior)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.compose(other) - &other.compose(self)
    }

    /// Coefficient values `t_d(n)` at the given points, for each `d` in
    /// `shifts`; absent components contribute zeros.
    pub fn sample(&self, shifts: &[i64], points: &[T]) -> Result<Vec<T>> {
        let mut out = Vec::with_capacity(shifts.len() * points.len());
        for d in shifts {
            match self.comps.get(d) {
                Some(c) => {
                    for p in points {
                        out.push(c.eval(p)?);
                    }
                }
                None => out.extend(std::iter::repeat_n(T::zero(), points.len())),
            }
        }
        Ok(out)
    }

    /// Textual dump `[(+1,"1"),(-1,"n")]`, highest shift first.
    pub fn dump(&self) -> String {
        let parts: Vec<String> = self
            .comps
            .iter()
            .rev()
            .map(|(d, c)| {
                let d = if *d == 0 { "0".to_string() } else { format!("{d:+}") };
                format!("({d},\"{c}\")")
            })
            .collect();
        format!("[{}]", parts.join(","))
    }
}

impl<T: Scalar> fmt::Display for ShiftOp<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

impl<T: Scalar> Add for &ShiftOp<T> {
    type Output = ShiftOp<T>;
    fn add(self, rhs: &ShiftOp<T>) -> ShiftOp<T> {
        ShiftOp::from_components(
            self.comps.iter().chain(&rhs.comps).map(|(d, c)| (*d, c.clone())),
            self.interior_from.max(rhs.interior_from),
        )
    }
}

impl<T: Scalar> Sub for &ShiftOp<T> {
    type Output = ShiftOp<T>;
    fn sub(self, rhs: &ShiftOp<T>) -> ShiftOp<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &ShiftOp<T> {
    type Output = ShiftOp<T>;
    fn neg(self) -> ShiftOp<T> {
        ShiftOp {
            comps: self.comps.iter().map(|(d, c)| (*d, -c)).collect(),
            interior_from: self.interior_from,
        }
    }
}

impl<T: Scalar> Mul for &ShiftOp<T> {
    type Output = ShiftOp<T>;
    fn mul(self, rhs: &ShiftOp<T>) -> ShiftOp<T> {
        self.compose(rhs)
    }
}
