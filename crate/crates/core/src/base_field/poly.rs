//! Sparse multivariate polynomials over the prime field `F_p`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

/// Exponent vector of a monomial `t_1^{e_1} ... t_m^{e_m}`.
///
/// Ordered graded-lexicographically: total degree first, ties broken
/// lexicographically with `t_1 > t_2 > ... > t_m`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u32; 6]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }

    fn with_exponent(&self, i: usize, e: u32) -> Monomial {
        let mut m = self.clone();
        m.0[i] = e;
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn mod_inv(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    mod_pow(a, p as u64 - 2, p)
}

pub(crate) fn mod_pow(a: u32, mut e: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut base = a as u64 % p64;
    let mut acc = 1u64 % p64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

/// Polynomial in `nvars` variables with coefficients in `F_p`.
///
/// Terms are kept in a map keyed by graded-lex monomials; zero coefficients
/// are never stored, so the zero polynomial has an empty term map.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    p: u32,
    nvars: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero(p: u32, nvars: usize) -> Self {
        Polynomial {
            p,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: u32, nvars: usize, c: i64) -> Self {
        let c = c.rem_euclid(p as i64) as u32;
        let mut poly = Self::zero(p, nvars);
        if c != 0 {
            poly.terms.insert(Monomial::one(nvars), c);
        }
        poly
    }

    pub fn one(p: u32, nvars: usize) -> Self {
        Self::constant(p, nvars, 1)
    }

    pub fn var(p: u32, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Self::monomial(p, Monomial::var(nvars, i), 1)
    }

    pub fn monomial(p: u32, m: Monomial, c: u32) -> Self {
        let nvars = m.nvars();
        let mut poly = Self::zero(p, nvars);
        let c = c % p;
        if c != 0 {
            poly.terms.insert(m, c);
        }
        poly
    }

    pub fn from_terms(p: u32, nvars: usize, terms: impl IntoIterator<Item = (Monomial, u32)>) -> Self {
        let mut poly = Self::zero(p, nvars);
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            poly.add_term(m, c % p);
        }
        poly
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.is_constant() && self.lc() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u32)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, u32)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> u32 {
        self.leading_term().map_or(0, |(_, c)| c)
    }

    pub fn constant_term(&self) -> u32 {
        self.terms.get(&Monomial::one(self.nvars)).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.leading_term().map(|(m, _)| m.total_degree())
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let p = self.p;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = (*o.get() + c) % p;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compat(&self, other: &Polynomial) {
        assert!(
            self.p == other.p && self.nvars == other.nvars,
            "polynomials live in different rings: F_{}[{} vars] vs F_{}[{} vars]",
            self.p,
            self.nvars,
            other.p,
            other.nvars
        );
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p, self.nvars);
        }
        let p = self.p as u64;
        Polynomial {
            p: self.p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, &v)| (m.clone(), (v as u64 * c as u64 % p) as u32))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u32) -> Polynomial {
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p, self.nvars);
        }
        let p = self.p as u64;
        Polynomial {
            p: self.p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, &v)| (k.mul(m), (v as u64 * c as u64 % p) as u32))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Self::one(self.p, self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Scales so that the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> Polynomial {
        match self.lc() {
            0 | 1 => self.clone(),
            c => self.scale(mod_inv(c, self.p)),
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        self.check_compat(d);
        assert!(!d.is_zero(), "division by the zero polynomial");
        if d.is_constant() {
            return Some(self.scale(mod_inv(d.lc(), self.p)));
        }
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c)).unwrap();
        let dinv = mod_inv(dc, self.p);
        let mut rem = self.clone();
        let mut quot = Self::zero(self.p, self.nvars);
        while let Some((rm, rc)) = rem.leading_term().map(|(m, c)| (m.clone(), c)) {
            let qm = rm.checked_div(&dm)?;
            let qc = (rc as u64 * dinv as u64 % self.p as u64) as u32;
            for (m, &c) in &d.terms {
                let neg = self.p - (c as u64 * qc as u64 % self.p as u64) as u32;
                rem.add_term(m.mul(&qm), neg);
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let p = self.p as u64;
        let mut out = Self::zero(self.p, self.nvars);
        for (m, &c) in &self.terms {
            let e = m.0[var];
            let f = (e as u64 % p) * c as u64 % p;
            if f != 0 {
                out.add_term(m.with_exponent(var, e - 1), f as u32);
            }
        }
        out
    }

    /// `r` with `r^p = self`, if every exponent is divisible by `p`.
    ///
    /// Coefficients are untouched since Frobenius fixes `F_p`.
    pub fn pth_root(&self) -> Option<Polynomial> {
        let p = self.p;
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            if m.0.iter().any(|e| e % p != 0) {
                return None;
            }
            terms.insert(Monomial(m.0.iter().map(|e| e / p).collect()), c);
        }
        Some(Polynomial {
            p,
            nvars: self.nvars,
            terms,
        })
    }

    /// `self^p`, computed term-wise via Frobenius.
    pub fn frobenius(&self) -> Polynomial {
        let p = self.p;
        Polynomial {
            p,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (Monomial(m.0.iter().map(|e| e * p).collect()), c))
                .collect(),
        }
    }

    /// Splits `self = sum_r t^r * g_r` by exponent residues `r` modulo `p`;
    /// every `g_r` has all exponents divisible by `p`.
    pub fn split_by_residue(&self) -> BTreeMap<Monomial, Polynomial> {
        let p = self.p;
        let mut parts: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, &c) in &self.terms {
            let residue = Monomial(m.0.iter().map(|e| e % p).collect());
            let rest = Monomial(m.0.iter().map(|e| e - e % p).collect());
            parts
                .entry(residue)
                .or_insert_with(|| Self::zero(p, self.nvars))
                .add_term(rest, c);
        }
        parts
    }

    /// Re-reads the polynomial in a ring with `nvars >= self.nvars` variables;
    /// the new variables are appended after the existing ones.
    pub fn extend_vars(&self, nvars: usize) -> Polynomial {
        assert!(nvars >= self.nvars);
        Polynomial {
            p: self.p,
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| {
                    let mut e = m.0.clone();
                    e.resize(nvars, 0);
                    (Monomial(e), c)
                })
                .collect(),
        }
    }

    /// Substitutes constants for some variables (the variable count is kept).
    pub fn substitute(&self, assignment: &[(usize, u32)]) -> Polynomial {
        let p = self.p;
        let mut out = Self::zero(p, self.nvars);
        for (m, &c) in &self.terms {
            let mut c = c as u64;
            let mut e = m.clone();
            for &(var, val) in assignment {
                c = c * mod_pow(val, e.0[var] as u64, p) as u64 % p as u64;
                e.0[var] = 0;
            }
            out.add_term(e, c as u32);
        }
        out
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `var`;
    /// index `i` holds the coefficient of `var^i`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut coeffs = vec![Self::zero(self.p, self.nvars); deg + 1];
        if self.is_zero() {
            return Vec::new();
        }
        for (m, &c) in &self.terms {
            let e = m.0[var] as usize;
            coeffs[e].add_term(m.with_exponent(var, 0), c);
        }
        coeffs
    }

    pub fn from_coefficients_in(p: u32, nvars: usize, var: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Self::zero(p, nvars);
        for (i, c) in coeffs.iter().enumerate() {
            for (m, &v) in &c.terms {
                out.add_term(m.with_exponent(var, m.0[var] + i as u32), v);
            }
        }
        out
    }

    /// Writes the polynomial using the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_compat(rhs);
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, &c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.check_compat(rhs);
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), self.p - c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(self.p - 1)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_compat(rhs);
        let p = self.p as u64;
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &rhs.terms {
                let e = acc.entry(ma.mul(mb)).or_insert(0);
                *e = (*e + ca as u64 * cb as u64) % p;
            }
        }
        Polynomial {
            p: self.p,
            nvars: self.nvars,
            terms: acc
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|(m, c)| (m, c as u32))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.poly.terms().rev() {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if c != 1 || m.is_one() {
                factors.push(c.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                let name = self.names.get(i).map_or_else(|| format!("t{}", i + 1), Clone::clone);
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
