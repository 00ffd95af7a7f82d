//! Multivariate gcd over `F_p` by recursive subresultant polynomial
//! remainder sequences.
//!
//! Variables occurring in only one argument are eliminated first: a common
//! divisor of `f` and `g` cannot involve a variable absent from `g`, so it
//! divides every coefficient of `f` in that variable. For the shared
//! variables, content is split off along the one of smallest degree and the
//! primitive parts are reduced with the subresultant sequence, which keeps
//! coefficient growth down without taking contents at every step.

use super::poly::{Monomial, Polynomial};

// below this product of term counts the remainder sequence is cheaper
// than the extension-field image test
const IMAGE_TEST_TERMS: usize = 64;

/// Monic gcd of `f` and `g`; `gcd(0, 0) = 0`.
pub fn poly_gcd(f: &Polynomial, g: &Polynomial) -> Polynomial {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    gcd_nonzero(f, g).monic()
}

fn variables(f: &Polynomial) -> Vec<usize> {
    (0..f.nvars()).filter(|&i| f.depends_on(i)).collect()
}

fn gcd_nonzero(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (p, n) = (f.characteristic(), f.nvars());
    if f.is_constant() || g.is_constant() {
        return Polynomial::one(p, n);
    }
    if f == g {
        return f.monic();
    }
    if f.num_terms() == 1 {
        return monomial_gcd(f, g);
    }
    if g.num_terms() == 1 {
        return monomial_gcd(g, f);
    }
    let (vf, vg) = (variables(f), variables(g));
    if let Some(&v) = vf.iter().find(|v| !vg.contains(v)) {
        return gcd_with_coefficients(g, f, v);
    }
    if let Some(&v) = vg.iter().find(|v| !vf.contains(v)) {
        return gcd_with_coefficients(f, g, v);
    }
    let large = f.num_terms() * g.num_terms() > IMAGE_TEST_TERMS;
    if let Some(bounds) = large.then(|| super::gf::image_gcd_degrees(f, g, &vf)).flatten() {
        if bounds.iter().all(|&d| d == 0) {
            return Polynomial::one(p, n);
        }
        let matches = |h: &Polynomial| vf.iter().zip(&bounds).all(|(&v, &d)| h.degree_in(v) == Some(d as u32));
        if matches(g) && f.exact_div(g).is_some() {
            return g.monic();
        }
        if matches(f) && g.exact_div(f).is_some() {
            return f.monic();
        }
    }
    if let Some(h) = large.then(|| super::modgcd::modular_gcd(f, g, &vf)).flatten() {
        return h;
    }
    let v = *vf
        .iter()
        .min_by_key(|&&v| f.degree_in(v).max(g.degree_in(v)))
        .expect("non-constant polynomial depends on some variable");
    let cf = content_in(f, v);
    let cg = content_in(g, v);
    let c = gcd_nonzero(&cf, &cg);
    let pf = f.exact_div(&cf).expect("content divides");
    let pg = g.exact_div(&cg).expect("content divides");
    let h = subresultant_gcd(pf, pg, v);
    (&c * &h).monic()
}

/// `gcd(g, f)` where `f` depends on `v` and `g` does not.
fn gcd_with_coefficients(g: &Polynomial, f: &Polynomial, v: usize) -> Polynomial {
    let mut coeffs: Vec<Polynomial> = f.coefficients_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(Polynomial::num_terms);
    let mut acc = g.clone();
    for c in &coeffs {
        acc = gcd_nonzero(&acc, c);
        if acc.is_constant() {
            break;
        }
    }
    acc.monic()
}

/// gcd of a single term with an arbitrary polynomial.
fn monomial_gcd(mono: &Polynomial, g: &Polynomial) -> Polynomial {
    let (m, _) = mono.leading_term().unwrap();
    let mut exps: Vec<u32> = m.exponents().to_vec();
    for (gm, _) in g.terms() {
        for (e, &ge) in exps.iter_mut().zip(gm.exponents()) {
            *e = (*e).min(ge);
        }
    }
    Polynomial::monomial(mono.characteristic(), Monomial::from_exponents(&exps), 1)
}

/// Monic gcd of the coefficients of `f` viewed as a polynomial in `v`.
pub(crate) fn content_in(f: &Polynomial, v: usize) -> Polynomial {
    let mut coeffs: Vec<Polynomial> = f.coefficients_in(v).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(Polynomial::num_terms);
    let mut acc = match coeffs.first() {
        Some(c) => c.monic(),
        None => return Polynomial::zero(f.characteristic(), f.nvars()),
    };
    for c in &coeffs[1..] {
        if acc.is_constant() {
            break;
        }
        acc = gcd_nonzero(&acc, c).monic();
    }
    acc
}

fn primitive_part(f: &Polynomial, v: usize) -> Polynomial {
    let c = content_in(f, v);
    f.exact_div(&c).expect("content divides")
}

fn lc_in(f: &Polynomial, v: usize) -> Polynomial {
    f.coefficients_in(v).pop().expect("nonzero polynomial")
}

/// gcd of two polynomials that are primitive with respect to `v`.
fn subresultant_gcd(a: Polynomial, b: Polynomial, v: usize) -> Polynomial {
    let (p, n) = (a.characteristic(), a.nvars());
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    let mut g = Polynomial::one(p, n);
    let mut h = Polynomial::one(p, n);
    loop {
        let delta = (a.degree_in(v).unwrap_or(0) - b.degree_in(v).unwrap_or(0)) as u64;
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return primitive_part(&b, v);
        }
        if !r.depends_on(v) {
            return Polynomial::one(p, n);
        }
        a = b;
        b = r
            .exact_div(&(&g * &h.pow(delta)))
            .expect("subresultant division is exact");
        g = lc_in(&a, v);
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(delta)
                .exact_div(&h.pow(delta - 1))
                .expect("subresultant division is exact"),
        };
    }
}

/// `prem(a, b) = lc_v(b)^(deg a - deg b + 1) * a mod b` in `v`.
fn pseudo_remainder(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let (p, n) = (a.characteristic(), a.nvars());
    let bc = b.coefficients_in(v);
    let db = bc.len() - 1;
    let lb = &bc[db];
    let mut ac = a.coefficients_in(v);
    let mut scalings = (ac.len() - db) as u64;
    while ac.len() > db && !ac.is_empty() {
        let da = ac.len() - 1;
        let la = ac[da].clone();
        let shift = da - db;
        for c in ac.iter_mut() {
            *c = &*c * lb;
        }
        scalings -= 1;
        for (i, bci) in bc.iter().enumerate() {
            let t = bci * &la;
            ac[i + shift] = &ac[i + shift] - &t;
        }
        debug_assert!(ac[da].is_zero());
        while ac.last().is_some_and(Polynomial::is_zero) {
            ac.pop();
        }
    }
    let r = Polynomial::from_coefficients_in(p, n, v, &ac);
    if scalings == 0 || r.is_zero() {
        r
    } else {
        &r * &lb.pow(scalings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: u32, n: usize, i: usize) -> Polynomial {
        Polynomial::var(p, n, i)
    }

    #[test]
    fn gcd_with_zero_is_monic_input() {
        let f = (&v(3, 2, 0) + &v(3, 2, 1)).scale(2);
        assert_eq!(poly_gcd(&f, &Polynomial::zero(3, 2)), &v(3, 2, 0) + &v(3, 2, 1));
        assert!(poly_gcd(&Polynomial::zero(3, 2), &Polynomial::zero(3, 2)).is_zero());
    }

    #[test]
    fn gcd_of_square_in_char_two() {
        let (x, y) = (v(2, 2, 0), v(2, 2, 1));
        let f = &x.pow(2) + &y.pow(2);
        let g = &x + &y;
        // trial division oracle: g divides f, so the gcd is g itself
        assert!(f.exact_div(&g).is_some());
        assert_eq!(poly_gcd(&f, &g), g);
    }

    #[test]
    fn coprime_variables() {
        assert!(poly_gcd(&v(5, 2, 0), &v(5, 2, 1)).is_one());
    }

    #[test]
    fn common_factor_recovered() {
        let (x, y, z) = (v(3, 3, 0), v(3, 3, 1), v(3, 3, 2));
        let common = &(&x * &y) + &(&z + &Polynomial::one(3, 3));
        let f = &common * &(&x.pow(2) + &z);
        let g = &common * &(&y + &(&x * &z));
        assert_eq!(poly_gcd(&f, &g), common.monic());
    }

    #[test]
    fn gcd_of_products_with_shared_and_private_variables() {
        let n = 4;
        let t: Vec<Polynomial> = (0..n).map(|i| v(3, n, i)).collect();
        let one = Polynomial::one(3, n);
        let common = &(&(&t[0] * &t[1]) + &t[2].pow(2)) + &one;
        let f = &(&common * &common) * &(&t[3] + &t[0]);
        let g = &common * &(&(&t[1] * &t[2]) + &one);
        assert_eq!(poly_gcd(&f, &g), common.monic());
        let h = &common * &(&t[3].pow(3) + &t[1]);
        assert_eq!(poly_gcd(&f, &h), common.monic());
        assert_eq!(poly_gcd(&(&f * &h), &(&g * &h)), (&common * &h).monic());
    }

    #[test]
    fn random_gcds_divide_and_contain_common_factor() {
        use crate::random::{instance_rng, random_nonzero_poly, PolyShape};
        let shape = PolyShape {
            max_terms: 3,
            max_exp: 4,
        };
        for i in 0..400 {
            let mut rng = instance_rng(0x9cd, i);
            let p = [2, 3, 5][i as usize % 3];
            let n = 1 + i as usize % 4;
            let a = random_nonzero_poly(&mut rng, p, n, shape);
            let b = random_nonzero_poly(&mut rng, p, n, shape);
            let c = random_nonzero_poly(&mut rng, p, n, shape);
            let (f, g) = (&a * &c, &b * &c);
            let h = poly_gcd(&f, &g);
            assert!(
                f.exact_div(&h).is_some() && g.exact_div(&h).is_some(),
                "{i}: {f:?} {g:?} -> {h:?}"
            );
            assert!(h.exact_div(&c.monic()).is_some(), "{i}: common factor lost");
        }
    }
}
