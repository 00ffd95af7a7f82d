//! Canonical rational functions in `F_p(t_1,...,t_m)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gcd::poly_gcd;
use super::poly::{mod_inv, Polynomial};
use crate::error::{Error, Result};

/// A reduced fraction `num / den`.
///
/// Invariants: `den != 0`, `gcd(num, den) = 1`, `lc(den) = 1` in graded-lex
/// order, and zero is stored as `0 / 1`. Equal field elements therefore have
/// identical representations, so derived `Eq` is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Applies one field operation, returning the canonical result.
pub fn rf_arith(a: &RationalFunction, b: &RationalFunction, op: ArithOp) -> Result<RationalFunction> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(num: Polynomial) -> Self {
        let den = Polynomial::one(num.characteristic(), num.nvars());
        RationalFunction { num, den }
    }

    pub fn zero(p: u32, nvars: usize) -> Self {
        Self::from_poly(Polynomial::zero(p, nvars))
    }

    pub fn one(p: u32, nvars: usize) -> Self {
        Self::from_poly(Polynomial::one(p, nvars))
    }

    pub fn constant(p: u32, nvars: usize, c: i64) -> Self {
        Self::from_poly(Polynomial::constant(p, nvars, c))
    }

    pub fn var(p: u32, nvars: usize, i: usize) -> Self {
        Self::from_poly(Polynomial::var(p, nvars, i))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        let (p, n) = (den.characteristic(), den.nvars());
        if num.is_zero() {
            return Self::zero(p, n);
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let lc = den.lc();
        if lc == 1 {
            RationalFunction { num, den }
        } else {
            let inv = mod_inv(lc, p);
            RationalFunction {
                num: num.scale(inv),
                den: den.scale(inv),
            }
        }
    }

    /// Reduces `num / den` when every common factor divides `bound` to at
    /// most the power it has in `den`.
    fn reduce_against(num: Polynomial, den: Polynomial, bound: &Polynomial) -> Self {
        let (p, n) = (den.characteristic(), den.nvars());
        if num.is_zero() {
            return Self::zero(p, n);
        }
        let g = poly_gcd(&num, bound);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let inv = mod_inv(den.lc(), p);
        RationalFunction {
            num: num.scale(inv),
            den: den.scale(inv),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn characteristic(&self) -> u32 {
        self.num.characteristic()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True for elements of the prime field `F_p`.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lc = self.num.lc();
        let inv = mod_inv(lc, self.characteristic());
        Ok(RationalFunction {
            num: self.den.scale(inv),
            den: self.num.scale(inv),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u64;
        Ok(RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        })
    }

    /// `self^p`; stays reduced because Frobenius is a ring embedding.
    pub fn frobenius(&self) -> Self {
        RationalFunction {
            num: self.num.frobenius(),
            den: self.den.frobenius(),
        }
    }

    pub fn scale(&self, c: u32) -> Self {
        if c % self.characteristic() == 0 {
            return Self::zero(self.characteristic(), self.nvars());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Partial derivative with respect to variable index `i` (0-based).
    pub fn partial_derivative(&self, i: usize) -> Self {
        assert!(i < self.nvars(), "variable index out of range");
        if self.den.is_constant() {
            return Self::from_poly(self.num.derivative(i));
        }
        let num = &(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i));
        // common factors divide h; a second pass against the first gcd picks
        // up the part of h^2 beyond h
        let c = poly_gcd(&num, &self.den);
        let num = num.exact_div(&c).unwrap();
        let den = (&self.den * &self.den).exact_div(&c).unwrap();
        Self::reduce_against(num, den, &c)
    }

    /// The unique `r` with `r^p = self`, or `NotAPthPower` if `self` is not in `F^p`.
    pub fn pth_root(&self) -> Result<Self> {
        match (self.num.pth_root(), self.den.pth_root()) {
            (Some(num), Some(den)) => Ok(RationalFunction { num, den }),
            _ => Err(Error::NotAPthPower),
        }
    }

    pub fn extend_vars(&self, nvars: usize) -> Self {
        RationalFunction {
            num: self.num.extend_vars(nvars),
            den: self.den.extend_vars(nvars),
        }
    }

    /// Substitutes `F_p` constants for variables; `None` if the denominator vanishes.
    pub fn substitute(&self, assignment: &[(usize, u32)]) -> Option<Self> {
        let den = self.den.substitute(assignment);
        if den.is_zero() {
            return None;
        }
        Some(Self::reduce(self.num.substitute(assignment), den))
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> RationalDisplay<'a> {
        RationalDisplay { rf: self, names }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let g = poly_gcd(&self.den, &rhs.den);
        let ls = self.den.exact_div(&g).unwrap();
        let rs = rhs.den.exact_div(&g).unwrap();
        let num = &(&self.num * &rs) + &(&rhs.num * &ls);
        // a common factor of num and ls*rs*g can only divide g
        RationalFunction::reduce_against(num, &ls * &rhs.den, &g)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.characteristic(), self.nvars());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel so the product is already reduced
        let g1 = poly_gcd(&self.num, &rhs.den);
        let g2 = poly_gcd(&rhs.num, &self.den);
        let a = self.num.exact_div(&g1).unwrap();
        let d = rhs.den.exact_div(&g1).unwrap();
        let c = rhs.num.exact_div(&g2).unwrap();
        let b = self.den.exact_div(&g2).unwrap();
        let num = &a * &c;
        let den = &b * &d;
        let lc = den.lc();
        if lc == 1 {
            RationalFunction { num, den }
        } else {
            let inv = mod_inv(lc, den.characteristic());
            RationalFunction {
                num: num.scale(inv),
                den: den.scale(inv),
            }
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

pub struct RationalDisplay<'a> {
    rf: &'a RationalFunction,
    names: &'a [String],
}

impl fmt::Display for RationalDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.rf.num.display_with(self.names);
        if self.rf.den.is_one() {
            return write!(f, "{num}");
        }
        let den = self.rf.den.display_with(self.names);
        let wrap_num = self.rf.num.num_terms() > 1;
        // a denominator needs parentheses unless it is a single factor like `x^2`
        let wrap_den = match self.rf.den.leading_term() {
            Some((m, c)) => {
                self.rf.den.num_terms() > 1 || c != 1 || m.exponents().iter().filter(|&&e| e > 0).count() > 1
            }
            None => false,
        };
        match (wrap_num, wrap_den) {
            (true, true) => write!(f, "({num})/({den})"),
            (true, false) => write!(f, "({num})/{den}"),
            (false, true) => write!(f, "{num}/({den})"),
            (false, false) => write!(f, "{num}/{den}"),
        }
    }
}
