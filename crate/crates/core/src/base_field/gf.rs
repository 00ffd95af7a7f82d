//! Arithmetic in an extension `GF(q)`, `q = p^k`, large enough to supply
//! random evaluation points, plus dense univariate polynomials over it.
//!
//! Elements are encoded as integers `sum d_i p^i` (digits are coefficients
//! in the polynomial basis); for small `p` multiplication goes through
//! log/exp tables of a primitive element.

use std::borrow::Cow;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Polynomial;

pub(crate) type Elt = u32;
pub(crate) type Uni = Vec<Elt>;

#[derive(Clone)]
pub(crate) struct Gf {
    p: u32,
    k: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

// primes at least this large are used as their own evaluation field
const DIRECT_PRIME: u32 = 256;

// write-once tables, one per small prime
static TABLES: [OnceLock<Gf>; DIRECT_PRIME as usize] = [const { OnceLock::new() }; DIRECT_PRIME as usize];
const MIN_ORDER: u64 = 1 << 16;

impl Gf {
    pub(crate) fn for_prime(p: u32) -> Cow<'static, Gf> {
        match TABLES.get(p as usize) {
            Some(cell) => Cow::Borrowed(cell.get_or_init(|| Gf::build(p))),
            None => Cow::Owned(Gf::build(p)),
        }
    }

    fn build(p: u32) -> Gf {
        if p >= DIRECT_PRIME {
            return Gf {
                p,
                k: 1,
                q: p,
                exp: Vec::new(),
                log: Vec::new(),
            };
        }
        let (mut k, mut q) = (1u32, p as u64);
        while q < MIN_ORDER {
            q *= p as u64;
            k += 1;
        }
        let q = q as u32;
        let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
        loop {
            let modulus: Vec<u32> = (0..k).map(|_| rng.gen_range(0..p)).collect();
            if modulus[0] == 0 {
                continue;
            }
            if !x_is_primitive(p, &modulus, q) {
                continue;
            }
            if let Some((exp, log)) = primitive_tables(p, k, q, &modulus) {
                return Gf { p, k, q, exp, log };
            }
        }
    }

    pub(crate) fn add(&self, a: Elt, b: Elt) -> Elt {
        if self.p == 2 {
            return a ^ b;
        }
        if self.k == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as u32;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub(crate) fn neg(&self, a: Elt) -> Elt {
        if self.p == 2 {
            return a;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += (self.p - a % self.p) % self.p * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub(crate) fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    pub(crate) fn mul(&self, a: Elt, b: Elt) -> Elt {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.k == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.q as u64 - 1)) as usize]
    }

    pub(crate) fn inv(&self, a: Elt) -> Elt {
        assert!(a != 0, "inverting zero in GF(q)");
        if self.k == 1 {
            let (mut acc, mut base, mut e) = (1u64, a as u64, self.p as u64 - 2);
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % self.p as u64;
                }
                base = base * base % self.p as u64;
                e >>= 1;
            }
            return acc as u32;
        }
        let l = self.log[a as usize];
        self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]
    }

    pub(crate) fn from_fp(&self, c: u32) -> Elt {
        c % self.p
    }

    /// The prime-field value of `a`, if it lies in `F_p`.
    pub(crate) fn to_fp(&self, a: Elt) -> Option<u32> {
        (a < self.p).then_some(a)
    }

    pub(crate) fn random<R: Rng>(&self, rng: &mut R) -> Elt {
        rng.gen_range(0..self.q)
    }

    pub(crate) fn uni_trim(a: &mut Uni) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub(crate) fn uni_eval(&self, a: &[Elt], x: Elt) -> Elt {
        a.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    pub(crate) fn uni_mul(&self, a: &[Elt], b: &[Elt]) -> Uni {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        out
    }

    /// Quotient and remainder of `a` by nonzero trimmed `b`.
    pub(crate) fn uni_divmod(&self, a: &[Elt], b: &[Elt]) -> (Uni, Uni) {
        let mut r = a.to_vec();
        Self::uni_trim(&mut r);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead = self.inv(*b.last().unwrap());
        let mut quot = vec![0; r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let c = self.mul(*r.last().unwrap(), lead);
            let shift = r.len() - b.len();
            quot[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                r[i + shift] = self.sub(r[i + shift], self.mul(c, bi));
            }
            Self::uni_trim(&mut r);
        }
        (quot, r)
    }

    pub(crate) fn uni_monic(&self, mut a: Uni) -> Uni {
        Self::uni_trim(&mut a);
        if let Some(&l) = a.last() {
            let inv = self.inv(l);
            for c in a.iter_mut() {
                *c = self.mul(*c, inv);
            }
        }
        a
    }

    /// Monic gcd; the gcd of two zero polynomials is empty.
    pub(crate) fn uni_gcd(&self, a: &[Elt], b: &[Elt]) -> Uni {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        Self::uni_trim(&mut a);
        Self::uni_trim(&mut b);
        while !b.is_empty() {
            let (_, r) = self.uni_divmod(&a, &b);
            a = b;
            b = r;
        }
        self.uni_monic(a)
    }
}

/// Product in `F_p[x] / (x^k + modulus)` on coefficient vectors.
fn ring_mul(p: u64, modulus: &[u32], a: &[u64], b: &[u64]) -> Vec<u64> {
    let k = modulus.len();
    let mut t = vec![0u64; 2 * k - 1];
    for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
        for (j, &y) in b.iter().enumerate() {
            t[i + j] = (t[i + j] + x * y) % p;
        }
    }
    for d in (k..2 * k - 1).rev() {
        let c = t[d];
        if c != 0 {
            t[d] = 0;
            for (i, &m) in modulus.iter().enumerate() {
                t[d - k + i] = (t[d - k + i] + (p - c) * m as u64) % p;
            }
        }
    }
    t.truncate(k);
    t
}

fn ring_pow_x(p: u64, modulus: &[u32], mut e: u64) -> Vec<u64> {
    let k = modulus.len();
    let mut base = vec![0u64; k];
    base[1 % k] = 1;
    let mut acc = vec![0u64; k];
    acc[0] = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = ring_mul(p, modulus, &acc, &base);
        }
        base = ring_mul(p, modulus, &base, &base);
        e >>= 1;
    }
    acc
}

/// `x` has multiplicative order `q - 1`, which also makes the ring a field.
fn x_is_primitive(p: u32, modulus: &[u32], q: u32) -> bool {
    let order = q as u64 - 1;
    let is_one = |v: &[u64]| v[0] == 1 && v[1..].iter().all(|&c| c == 0);
    if !is_one(&ring_pow_x(p as u64, modulus, order)) {
        return false;
    }
    let mut rest = order;
    let mut r = 2;
    while rest > 1 {
        if r * r > rest {
            r = rest;
        }
        if rest % r == 0 {
            if is_one(&ring_pow_x(p as u64, modulus, order / r)) {
                return false;
            }
            while rest % r == 0 {
                rest /= r;
            }
        }
        r += 1;
    }
    true
}

/// Log/exp tables if `x` generates the multiplicative group modulo
/// `x^k + modulus`.
fn primitive_tables(p: u32, k: u32, q: u32, modulus: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
    let top = p.pow(k - 1);
    let times_x = |e: u32| -> u32 {
        let carry = e / top;
        let shifted = (e % top) * p;
        if carry == 0 {
            return shifted;
        }
        // x^k = -sum m_i x^i
        let (mut s, mut out, mut place) = (shifted, 0, 1);
        for &m in modulus {
            let d = s % p;
            out += (d + p - carry * m % p) % p * place;
            s /= p;
            place *= p;
        }
        out
    };
    let mut exp = Vec::with_capacity(q as usize - 1);
    let mut log = vec![u32::MAX; q as usize];
    let mut cur = 1u32;
    for i in 0..q - 1 {
        if log[cur as usize] != u32::MAX {
            return None;
        }
        log[cur as usize] = i;
        exp.push(cur);
        cur = times_x(cur);
    }
    (cur == 1).then_some((exp, log))
}

/// For each variable in `vars`, an upper bound on the degree of `gcd(f, g)`
/// in it, read off univariate images at random points. `None` when no point
/// keeping both leading coefficients alive was found.
///
/// The gcd maps onto a divisor of the gcd of the images, with its degree in
/// `v` intact while the leading coefficients in `v` do not vanish.
pub(crate) fn image_gcd_degrees(f: &Polynomial, g: &Polynomial, vars: &[usize]) -> Option<Vec<usize>> {
    let gf = Gf::for_prime(f.characteristic());
    let n = f.nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9cd);
    let max_deg: Vec<usize> = (0..n)
        .map(|j| f.degree_in(j).unwrap_or(0).max(g.degree_in(j).unwrap_or(0)) as usize)
        .collect();
    let image = |h: &Polynomial, v: usize, powers: &[Vec<Elt>]| -> Uni {
        let mut out = vec![0; h.degree_in(v).unwrap_or(0) as usize + 1];
        for (m, c) in h.terms() {
            let mut val = gf.from_fp(c);
            for (j, &e) in m.exponents().iter().enumerate() {
                if j != v && e > 0 {
                    val = gf.mul(val, powers[j][e as usize]);
                }
            }
            let slot = m.exponents()[v] as usize;
            out[slot] = gf.add(out[slot], val);
        }
        out
    };
    let mut out = Vec::with_capacity(vars.len());
    'vars: for &v in vars {
        for _ in 0..3 {
            let powers: Vec<Vec<Elt>> = (0..n)
                .map(|j| {
                    let x = gf.random(&mut rng);
                    let mut pw = vec![1];
                    for e in 1..=max_deg[j] {
                        pw.push(gf.mul(pw[e - 1], x));
                    }
                    pw
                })
                .collect();
            let fi = image(f, v, &powers);
            let gi = image(g, v, &powers);
            if fi.last() == Some(&0) || gi.last() == Some(&0) {
                continue;
            }
            out.push(gf.uni_gcd(&fi, &gi).len() - 1);
            continue 'vars;
        }
        return None;
    }
    Some(out)
}
