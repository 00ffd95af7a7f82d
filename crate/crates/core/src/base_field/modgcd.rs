//! Dense modular gcd (Brown's algorithm) for polynomials over `F_p`.
//!
//! One variable `y` at a time is evaluated at random points of an extension
//! field; the gcds of the images, rescaled to a common leading coefficient,
//! are interpolated back in `y`. The final candidate is mapped back to
//! `F_p` and accepted only if it divides both inputs exactly.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gf::{Elt, Gf, Uni};
use super::poly::{Monomial, Polynomial};

type Exps = Vec<u32>;
type KPoly = BTreeMap<Exps, Elt>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Stop {
    // stop interpolating once a new point adds nothing
    Stable,
    // use the full degree bound
    Bound,
}

/// Monic `gcd(f, g)` for nonzero `f`, `g` both depending on exactly `vars`;
/// `None` if no verified candidate was found.
pub(crate) fn modular_gcd(f: &Polynomial, g: &Polynomial, vars: &[usize]) -> Option<Polynomial> {
    let gf = Gf::for_prime(f.characteristic());
    let (kf, kg) = (embed(&gf, f), embed(&gf, g));
    let mut rng = ChaCha8Rng::seed_from_u64(0x6cd);
    for stop in [Stop::Stable, Stop::Bound] {
        let Some(h) = pgcd(&gf, &kf, &kg, vars, stop, &mut rng) else {
            continue;
        };
        let Some(h) = to_fp_poly(&gf, &h, f.characteristic(), f.nvars()) else {
            continue;
        };
        if f.exact_div(&h).is_some() && g.exact_div(&h).is_some() {
            return Some(h.monic());
        }
    }
    None
}

fn embed(gf: &Gf, f: &Polynomial) -> KPoly {
    f.terms()
        .map(|(m, c)| (m.exponents().to_vec(), gf.from_fp(c)))
        .collect()
}

fn to_fp_poly(gf: &Gf, h: &KPoly, p: u32, n: usize) -> Option<Polynomial> {
    let terms: Option<Vec<(Monomial, u32)>> = h
        .iter()
        .map(|(e, &c)| gf.to_fp(c).map(|c| (Monomial::from_exponents(e), c)))
        .collect();
    Some(Polynomial::from_terms(p, n, terms?))
}

fn add_term(gf: &Gf, a: &mut KPoly, key: Exps, c: Elt) {
    if c == 0 {
        return;
    }
    let entry = a.entry(key).or_insert(0);
    *entry = gf.add(*entry, c);
    if *entry == 0 {
        a.retain(|_, v| *v != 0);
    }
}

/// Scales so the lexicographically largest term has coefficient 1.
fn normalize(gf: &Gf, mut a: KPoly) -> KPoly {
    if let Some(&l) = a.values().next_back() {
        let inv = gf.inv(l);
        for c in a.values_mut() {
            *c = gf.mul(*c, inv);
        }
    }
    a
}

fn degree_in(a: &KPoly, v: usize) -> usize {
    a.keys().map(|e| e[v]).max().unwrap_or(0) as usize
}

fn from_uni(u: &[Elt], v: usize, n: usize) -> KPoly {
    u.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let mut e = vec![0; n];
            e[v] = i as u32;
            (e, c)
        })
        .collect()
}

/// Coefficients in `y`, keyed by exponent vectors with `y` zeroed.
fn split_y(a: &KPoly, y: usize) -> BTreeMap<Exps, Uni> {
    let mut out: BTreeMap<Exps, Uni> = BTreeMap::new();
    for (e, &c) in a {
        let d = e[y] as usize;
        let mut key = e.clone();
        key[y] = 0;
        let u = out.entry(key).or_default();
        if u.len() <= d {
            u.resize(d + 1, 0);
        }
        u[d] = c;
    }
    out
}

fn join_y(parts: &BTreeMap<Exps, Uni>, y: usize) -> KPoly {
    let mut out = KPoly::new();
    for (key, u) in parts {
        for (d, &c) in u.iter().enumerate().filter(|(_, &c)| c != 0) {
            let mut e = key.clone();
            e[y] = d as u32;
            out.insert(e, c);
        }
    }
    out
}

fn content_y(gf: &Gf, parts: &BTreeMap<Exps, Uni>) -> Uni {
    parts.values().fold(Vec::new(), |acc, u| gf.uni_gcd(&acc, u))
}

fn divide_parts(gf: &Gf, parts: &BTreeMap<Exps, Uni>, c: &Uni) -> BTreeMap<Exps, Uni> {
    parts.iter().map(|(k, u)| (k.clone(), gf.uni_divmod(u, c).0)).collect()
}

fn eval_y(gf: &Gf, a: &KPoly, y: usize, x: Elt) -> KPoly {
    let mut powers = vec![1];
    for i in 1..=degree_in(a, y) {
        powers.push(gf.mul(powers[i - 1], x));
    }
    let mut out = KPoly::new();
    for (e, &c) in a {
        let mut key = e.clone();
        key[y] = 0;
        let entry = out.entry(key).or_insert(0);
        *entry = gf.add(*entry, gf.mul(c, powers[e[y] as usize]));
    }
    out.retain(|_, v| *v != 0);
    out
}

fn sub(gf: &Gf, a: &KPoly, b: &KPoly) -> KPoly {
    let mut out = a.clone();
    for (e, &c) in b {
        add_term(gf, &mut out, e.clone(), gf.neg(c));
    }
    out
}

/// gcd over `GF(q)` of nonzero `a`, `b` in the variables `vars`, scaled so
/// its lexicographically leading coefficient is 1.
fn pgcd(gf: &Gf, a: &KPoly, b: &KPoly, vars: &[usize], stop: Stop, rng: &mut ChaCha8Rng) -> Option<KPoly> {
    let n = a.keys().next()?.len();
    if vars.len() == 1 {
        let v = vars[0];
        let to_uni = |x: &KPoly| {
            let mut u = vec![0; degree_in(x, v) + 1];
            for (e, &c) in x {
                u[e[v] as usize] = c;
            }
            u
        };
        return Some(from_uni(&gf.uni_gcd(&to_uni(a), &to_uni(b)), v, n));
    }
    let y = *vars.iter().min_by_key(|&&v| degree_in(a, v).max(degree_in(b, v)))?;
    let xs: Vec<usize> = vars.iter().copied().filter(|&v| v != y).collect();
    let (pa, pb) = (split_y(a, y), split_y(b, y));
    let (ca, cb) = (content_y(gf, &pa), content_y(gf, &pb));
    let c = gf.uni_gcd(&ca, &cb);
    let (pa, pb) = (divide_parts(gf, &pa, &ca), divide_parts(gf, &pb, &cb));
    // the gcd's leading coefficient in xs divides this
    let lc = gf.uni_gcd(pa.values().next_back()?, pb.values().next_back()?);
    let (a1, b1) = (join_y(&pa, y), join_y(&pb, y));
    let bound = (lc.len() - 1) + degree_in(&a1, y).min(degree_in(&b1, y));

    let mut points: Vec<Elt> = Vec::new();
    let mut newton: Uni = vec![1];
    let mut acc = KPoly::new();
    let mut lead: Option<Exps> = None;
    for _ in 0..2 * bound + 16 {
        let alpha = gf.random(rng);
        let scale = gf.uni_eval(&lc, alpha);
        if scale == 0 || points.contains(&alpha) {
            continue;
        }
        let img = pgcd(
            gf,
            &eval_y(gf, &a1, y, alpha),
            &eval_y(gf, &b1, y, alpha),
            &xs,
            stop,
            rng,
        )?;
        let m = img.keys().next_back()?.clone();
        if m.iter().all(|&e| e == 0) {
            return Some(normalize(gf, from_uni(&c, y, n)));
        }
        match &lead {
            // the image gcd is too large: unlucky point
            Some(l) if m > *l => continue,
            Some(l) if m == *l => {}
            _ => {
                lead = Some(m);
                points.clear();
                newton = vec![1];
                acc.clear();
            }
        }
        let img: KPoly = img.into_iter().map(|(e, v)| (e, gf.mul(v, scale))).collect();
        let diff = sub(gf, &img, &eval_y(gf, &acc, y, alpha));
        let stable = diff.is_empty() && !points.is_empty();
        if !diff.is_empty() {
            let w = gf.inv(gf.uni_eval(&newton, alpha));
            for (e, &d) in &diff {
                let d = gf.mul(d, w);
                for (i, &q) in newton.iter().enumerate().filter(|(_, &q)| q != 0) {
                    let mut key = e.clone();
                    key[y] = i as u32;
                    add_term(gf, &mut acc, key, gf.mul(d, q));
                }
            }
        }
        points.push(alpha);
        newton = gf.uni_mul(&newton, &[gf.neg(alpha), 1]);
        if (stop == Stop::Stable && stable) || points.len() > bound {
            let parts = split_y(&acc, y);
            let cont = content_y(gf, &parts);
            let with_c: BTreeMap<Exps, Uni> = divide_parts(gf, &parts, &cont)
                .into_iter()
                .map(|(k, u)| (k, gf.uni_mul(&u, &c)))
                .collect();
            return Some(normalize(gf, join_y(&with_c, y)));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: u32, n: usize, i: usize) -> Polynomial {
        Polynomial::var(p, n, i)
    }

    #[test]
    fn recovers_common_factor() {
        for p in [2, 3, 5, 257] {
            let n = 3;
            let (x, y, z) = (v(p, n, 0), v(p, n, 1), v(p, n, 2));
            let one = Polynomial::one(p, n);
            let common = &(&(&x * &y).pow(3) + &z.pow(2)) + &one;
            let f = &(&common * &common) * &(&(&x * &z) + &y);
            let g = &common * &(&(&y * &y) + &(&x * &z.pow(4)));
            let h = modular_gcd(&f, &g, &[0, 1, 2]).unwrap();
            assert_eq!(h, common.monic());
            let h = modular_gcd(&f, &(&common * &common), &[0, 1, 2]).unwrap();
            assert_eq!(h, (&common * &common).monic());
        }
    }
}
