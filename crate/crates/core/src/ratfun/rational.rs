use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Poly;
use crate::{Error, Result, Scalar};

/// Rational function `num / den` kept in lowest terms with a monic
/// denominator, so two equal functions are structurally equal.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFun<T> {
    num: Poly<T>,
    den: Poly<T>,
}

impl<T: Scalar> RatFun<T> {
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly<T>, den: Poly<T>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = Poly::gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_rem(&g).unwrap().0, den.div_rem(&g).unwrap().0)
            }
        };
        let lead = den.leading();
        if lead.is_one() {
            RatFun { num, den }
        } else {
            let inv = T::one() / lead;
            RatFun {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn from_poly(p: Poly<T>) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly<T> {
        &self.num
    }

    pub fn den(&self) -> &Poly<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the reduced denominator is a constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<&Poly<T>> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<T> {
        (self.is_polynomial() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn eval(&self, x: &T) -> Result<T> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole { at: x.to_string() });
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn shift(&self, s: &T) -> Self {
        if s.is_zero() {
            return self.clone();
        }
        // Shifting preserves coprimality and monicity.
        RatFun {
            num: self.num.shift(s),
            den: self.den.shift(s),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    /// Largest total degree of numerator and denominator.
    pub fn height(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.display_with(var)
        } else {
            format!(
                "({}) / ({})",
                self.num.display_with(var),
                self.den.display_with(var)
            )
        }
    }
}

impl<T: Scalar> fmt::Display for RatFun<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("n"))
    }
}

impl<T: Scalar> From<Poly<T>> for RatFun<T> {
    fn from(p: Poly<T>) -> Self {
        Self::from_poly(p)
    }
}

impl<T: Scalar> Add for &RatFun<T> {
    type Output = RatFun<T>;
    fn add(self, rhs: &RatFun<T>) -> RatFun<T> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RatFun::from_poly(num);
            }
            return RatFun::reduce(num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFun::reduce(num, &self.den * &rhs.den)
    }
}

impl<T: Scalar> Sub for &RatFun<T> {
    type Output = RatFun<T>;
    fn sub(self, rhs: &RatFun<T>) -> RatFun<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Mul for &RatFun<T> {
    type Output = RatFun<T>;
    fn mul(self, rhs: &RatFun<T>) -> RatFun<T> {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFun::from_poly(&self.num * &rhs.num);
        }
        RatFun::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<T: Scalar> Neg for &RatFun<T> {
    type Output = RatFun<T>;
    fn neg(self) -> RatFun<T> {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for RatFun<T> {
            type Output = RatFun<T>;
            fn $m(self, rhs: RatFun<T>) -> RatFun<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for RatFun<T> {
    type Output = RatFun<T>;
    fn neg(self) -> RatFun<T> {
        -&self
    }
}
