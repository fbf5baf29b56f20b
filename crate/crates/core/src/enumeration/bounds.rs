//! Degree bounds for candidate orbifold covers `S(a,b,c,d) ~> S(p,q,r)`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::orbifold::{Orbifold, Rational};

fn sorted3(p: u64, q: u64, r: u64) -> [u64; 3] {
    let mut t = [p, q, r];
    t.sort_unstable();
    t
}

/// `-chi_orb(S(p,q,r)) = 1 - 1/p - 1/q - 1/r`.
fn neg_chi_triangle(p: u64, q: u64, r: u64) -> Rational {
    Rational::one()
        - Rational::new(1, p as i64)
        - Rational::new(1, q as i64)
        - Rational::new(1, r as i64)
}

/// Upper bound on the degree of a cover `S(a,b,c,d) ~> S(p,q,r)`:
/// `(2 - 4/r) / (1 - 1/p - 1/q - 1/r)` with `r` the largest order.
pub fn d_max(p: u64, q: u64, r: u64) -> Result<Rational> {
    let [p, q, r] = sorted3(p, q, r);
    if p < 2 {
        return Err(Error::Argument("cone orders must be at least 2".into()));
    }
    let denom = neg_chi_triangle(p, q, r);
    if !denom.is_positive() {
        return Err(Error::Domain(format!("S({p},{q},{r}) is not hyperbolic")));
    }
    Ok((Rational::from_integer(2) - Rational::new(4, r as i64)) / denom)
}

/// Sharper bound for `X = S(2,3,r)` when `d ≡ k (mod n)`.
pub fn d_max_congruent(k: u32, n: u32, r: u64) -> Result<Rational> {
    if r <= 6 {
        return Err(Error::Argument(format!("r = {r} must exceed 6")));
    }
    let r = r as i64;
    let value = match (k, n) {
        (1, 2) => Rational::new(9 * (r - 2), r - 6),
        (1, 3) => Rational::new(2 * (5 * r - 9), r - 6),
        (2, 3) => Rational::new(4 * (2 * r - 3), r - 6),
        (1, 6) => Rational::new(7 * r - 12, r - 6),
        _ => {
            return Err(Error::Argument(format!(
                "no congruence bound for d ≡ {k} (mod {n})"
            )))
        }
    };
    Ok(value)
}

/// Congruence classes `(k, n)` with a sharper bound that contain `d`.
pub fn congruence_classes(d: u32) -> Vec<(u32, u32)> {
    [(1, 2), (1, 3), (2, 3), (1, 6)]
        .into_iter()
        .filter(|&(k, n)| d % n == k)
        .collect()
}

pub fn floor(x: &Rational) -> i64 {
    x.floor().to_integer()
}

/// The largest `r` for which a cover `S(a,b,c,d) ~> S(2,3,r)` of degree
/// `d >= 13` with `d` in the given class modulo 6 is not ruled out by the
/// plain and congruence degree bounds.
pub fn r_bound_mod6(d_mod_6: u32) -> u32 {
    let d_mod_6 = d_mod_6 % 6;
    // representative with the right residues modulo 2 and 3
    let classes = congruence_classes(d_mod_6 + 6);
    let admits = |r: u64| {
        let plain = d_max(2, 3, r).map(|x| floor(&x) >= 13).unwrap_or(false);
        plain
            && classes.iter().all(|&(k, n)| {
                d_max_congruent(k, n, r)
                    .map(|x| floor(&x) >= 13)
                    .unwrap_or(false)
            })
    };
    // every bound decreases in r, so the admissible set is an interval
    let mut r = 7u64;
    while admits(r + 1) {
        r += 1;
    }
    r as u32
}

/// Divisors greater than one, increasing.
pub fn nontrivial_divisors(n: u64) -> Vec<u64> {
    (2..=n).filter(|k| n.is_multiple_of(*k)).collect()
}

/// Sources `S(a,b,c,d)` with every order dividing one of `p, q, r` and for
/// which `chi(source) / chi(target)` is an integer at least `min_degree`.
/// Sorted by decreasing degree, then by cone orders.
pub fn candidate_sources(p: u64, q: u64, r: u64, min_degree: u32) -> Result<Vec<(Orbifold, u32)>> {
    let [p, q, r] = sorted3(p, q, r);
    let target = Orbifold::sphere(&[p, q, r])?;
    let chi_target = target.chi_orb();
    if !chi_target.is_negative() {
        return Err(Error::Domain(format!("{target} is not hyperbolic")));
    }
    let mut orders: Vec<u64> = [p, q, r]
        .iter()
        .flat_map(|&x| nontrivial_divisors(x))
        .collect();
    orders.sort_unstable();
    orders.dedup();

    let mut out = Vec::new();
    let n = orders.len();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                for e in c..n {
                    let cones = [orders[a], orders[b], orders[c], orders[e]];
                    let source = Orbifold::sphere(&cones)?;
                    let ratio = source.chi_orb() / chi_target;
                    if ratio.is_integer() && !ratio.is_zero() {
                        let d = ratio.to_integer();
                        if d >= i64::from(min_degree) {
                            out.push((source, d as u32));
                        }
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| y.0.cone_orders().cmp(x.0.cone_orders())));
    Ok(out)
}

/// Hyperbolic triangle orbifolds `S(p,q,r)`, `p <= q <= r`, with
/// `lower < 1/p + 1/q + 1/r < 1`.
pub fn triangles_with_reciprocal_sum_above(lower: Rational) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    let one = Rational::one();
    // 3/p > lower bounds p, then 2/q > lower - 1/p bounds q, and so on
    let mut p = 2u64;
    while Rational::new(3, p as i64) > lower {
        let mut q = p;
        loop {
            let rest = lower - Rational::new(1, p as i64);
            if Rational::new(2, q as i64) <= rest {
                break;
            }
            let mut r = q;
            loop {
                let s = Rational::new(1, p as i64) + Rational::new(1, q as i64) + Rational::new(1, r as i64);
                if s <= lower {
                    break;
                }
                if s < one {
                    out.push([p, q, r]);
                }
                r += 1;
                if r > 10_000 {
                    break;
                }
            }
            q += 1;
        }
        p += 1;
    }
    out
}
