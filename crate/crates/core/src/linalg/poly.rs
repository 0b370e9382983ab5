//! Characteristic polynomials and their rational roots.

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Matrix;
use crate::scalar::Scalar;

// trial division stops here; a larger leftover cofactor is treated as prime
const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

/// Faddeev–LeVerrier: `det(xI - m)`, ascending coefficients, leading 1.
pub fn char_poly(m: &Matrix) -> Vec<Scalar> {
    assert!(
        m.is_square(),
        "characteristic polynomial of a non-square matrix"
    );
    let n = m.rows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut acc = Matrix::zeros(n, n);
    for k in 1..=n {
        acc = &(m * &acc) + &Matrix::scalar_identity(n, &coeffs[n - k + 1]);
        let am = m * &acc;
        coeffs[n - k] = -(am.trace() / Scalar::from_int(k as i64));
    }
    coeffs
}

pub fn eval(p: &[Scalar], x: &Scalar) -> Scalar {
    p.iter()
        .rev()
        .fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
}

/// Divide by `(x - root)`, assuming `root` is a root.
fn deflate(p: &[Scalar], root: &Scalar) -> Vec<Scalar> {
    let n = p.len() - 1;
    let mut q = vec![Scalar::zero(); n];
    let mut carry = Scalar::zero();
    for k in (0..n).rev() {
        carry = &p[k + 1] + &(&carry * root);
        q[k] = carry.clone();
    }
    q
}

fn degree(p: &[Scalar]) -> usize {
    p.len().saturating_sub(1)
}

/// Rational roots of `p` with multiplicity, plus the degree of the part of `p` left
/// without rational roots. `hints` are tried first; the rational root theorem
/// covers whatever they miss.
pub fn rational_roots(p: &[Scalar], hints: &[Scalar]) -> (Vec<(Scalar, usize)>, usize) {
    let mut p: Vec<Scalar> = p.to_vec();
    while p.len() > 1 && p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    let mut found: BTreeMap<Scalar, usize> = BTreeMap::new();

    let mut take = |p: &mut Vec<Scalar>, x: &Scalar| {
        while degree(p) > 0 && eval(p, x).is_zero() {
            *p = deflate(p, x);
            *found.entry(x.clone()).or_insert(0) += 1;
        }
    };

    take(&mut p, &Scalar::zero());
    for h in hints {
        take(&mut p, h);
    }
    if degree(&p) > 0 {
        for cand in candidates(&p) {
            take(&mut p, &cand);
            if degree(&p) == 0 {
                break;
            }
        }
    }
    (found.into_iter().collect(), degree(&p))
}

/// Candidate roots `±r/s` with `r | a_0` and `s | a_n` of the primitive integer form.
fn candidates(p: &[Scalar]) -> Vec<Scalar> {
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let a0 = ints.first().cloned().unwrap_or_default();
    let an = ints.last().cloned().unwrap_or_default();
    if a0.is_zero() || an.is_zero() {
        return Vec::new();
    }
    let nums = divisors(&a0.abs());
    let dens = divisors(&an.abs());
    let mut out = Vec::with_capacity(2 * nums.len() * dens.len());
    for d in &dens {
        for n in &nums {
            let x = Scalar::from_bigints(n.clone(), d.clone()).expect("positive divisor");
            out.push(-&x);
            out.push(x);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut rest = n.clone();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p: u64 = 2;
    while p <= TRIAL_DIVISION_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            factors.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        factors.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (f, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pw = d.clone();
            next.push(pw.clone());
            for _ in 0..e {
                pw = &pw * &f;
                next.push(pw.clone());
            }
        }
        divs = next;
    }
    debug_assert!(divs.iter().all(|d| d.sign() == Sign::Plus));
    divs.sort();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::s;
    use num_traits::ToPrimitive;

    #[test]
    fn divisors_small() {
        let d: Vec<i64> = divisors(&BigInt::from(12))
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(&BigInt::from(1)).len(), 1);
    }

    #[test]
    fn roots_with_multiplicity() {
        // (x - 2)^2 (x + 1/3) = x^3 - 11/3 x^2 + 8/3 x + 4/3
        let p = vec![s(4, 3), s(8, 3), s(-11, 3), s(1, 1)];
        let (roots, left) = rational_roots(&p, &[]);
        assert_eq!(left, 0);
        assert_eq!(roots, vec![(s(-1, 3), 1), (s(2, 1), 2)]);
    }

    #[test]
    fn zero_root_and_leftover() {
        // x (x^2 + 1)
        let p = vec![s(0, 1), s(1, 1), s(0, 1), s(1, 1)];
        let (roots, left) = rational_roots(&p, &[]);
        assert_eq!(roots, vec![(s(0, 1), 1)]);
        assert_eq!(left, 2);
    }
}
