//! Seeded random field elements. Every randomized routine takes an explicit
//! generator; `instance_rng(seed, i)` gives each instance of a batch its own
//! stream so results do not depend on scheduling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::base_field::{Monomial, Polynomial, RationalFunction};

pub type InstanceRng = ChaCha8Rng;

pub fn instance_rng(seed: u64, index: u64) -> InstanceRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Shape of random polynomials: at most `max_terms` terms with exponents
/// below `max_exp` in each variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyShape {
    pub max_terms: usize,
    pub max_exp: u32,
}

impl Default for PolyShape {
    fn default() -> Self {
        PolyShape {
            max_terms: 3,
            max_exp: 3,
        }
    }
}

pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, p: u32, nvars: usize, shape: PolyShape) -> Polynomial {
    let nterms = rng.gen_range(1..=shape.max_terms.max(1));
    Polynomial::from_terms(
        p,
        nvars,
        (0..nterms).map(|_| {
            let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..shape.max_exp.max(1))).collect();
            (Monomial::from_exponents(&e), rng.gen_range(1..p))
        }),
    )
}

pub fn random_nonzero_poly<R: Rng + ?Sized>(rng: &mut R, p: u32, nvars: usize, shape: PolyShape) -> Polynomial {
    loop {
        let f = random_poly(rng, p, nvars, shape);
        if !f.is_zero() {
            return f;
        }
    }
}

/// A random element; with probability 1/3 a genuine fraction.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, p: u32, nvars: usize, shape: PolyShape) -> RationalFunction {
    let num = random_poly(rng, p, nvars, shape);
    if rng.gen_ratio(1, 3) {
        let den = random_nonzero_poly(rng, p, nvars, PolyShape { max_terms: 2, ..shape });
        RationalFunction::new(num, den).expect("nonzero denominator")
    } else {
        RationalFunction::from_poly(num)
    }
}

pub fn random_nonzero_element<R: Rng + ?Sized>(
    rng: &mut R,
    p: u32,
    nvars: usize,
    shape: PolyShape,
) -> RationalFunction {
    loop {
        let a = random_element(rng, p, nvars, shape);
        if !a.is_zero() {
            return a;
        }
    }
}

/// A random nonzero monomial `c * t^e`.
pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R, p: u32, nvars: usize, max_exp: u32) -> RationalFunction {
    let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..max_exp.max(1))).collect();
    RationalFunction::from_poly(Polynomial::monomial(
        p,
        Monomial::from_exponents(&e),
        rng.gen_range(1..p),
    ))
}

/// A random nonzero element of `F^p(basis)`: `sum_e c_e^p * basis^e` over
/// exponent vectors `e` in `[0,p)^k`, with random polynomial `c_e`.
pub fn random_in_subfield<R: Rng + ?Sized>(
    rng: &mut R,
    basis: &[RationalFunction],
    p: u32,
    nvars: usize,
    shape: PolyShape,
) -> RationalFunction {
    loop {
        let nterms = rng.gen_range(1..=shape.max_terms.max(1));
        let mut acc = RationalFunction::zero(p, nvars);
        for _ in 0..nterms {
            let c = RationalFunction::from_poly(random_poly(rng, p, nvars, shape)).frobenius();
            let mono = basis.iter().fold(RationalFunction::one(p, nvars), |m, b| {
                let e = rng.gen_range(0..p) as i64;
                &m * &b.pow(e).expect("basis elements are nonzero")
            });
            acc = &acc + &(&c * &mono);
        }
        if !acc.is_zero() {
            return acc;
        }
    }
}
