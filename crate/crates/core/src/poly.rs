//! Univariate polynomials over a [`Field`], as ascending coefficient vectors.
//! Only what the irreducibility test needs: minimal polynomials of matrices,
//! divisibility, enumeration of small irreducibles and rational roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{Field, Scalar};
use crate::linalg::{counting_vector, Echelon};
use crate::matrix::Matrix;

pub type Poly = Vec<Scalar>;

pub fn degree(field: &Field, p: &[Scalar]) -> Option<usize> {
    p.iter().rposition(|c| !field.is_zero(c))
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub fn rem_monic(field: &Field, a: &[Scalar], m: &[Scalar]) -> Poly {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= dm {
        return r;
    }
    for top in (dm..r.len()).rev() {
        if field.is_zero(&r[top]) {
            continue;
        }
        let c = r[top].clone();
        for j in 0..=dm {
            let idx = top - dm + j;
            r[idx] = field.sub(&r[idx], &field.mul(&c, &m[j]));
        }
    }
    r.truncate(dm);
    r
}

pub fn divides_monic(field: &Field, m: &[Scalar], a: &[Scalar]) -> bool {
    rem_monic(field, a, m).iter().all(|c| field.is_zero(c))
}

/// `p(x)` evaluated at a square matrix by Horner's rule.
pub fn eval_matrix(field: &Field, p: &[Scalar], x: &Matrix) -> Matrix {
    let n = x.rows();
    let mut acc = Matrix::zeros(field, n, n);
    let id = Matrix::identity(field, n);
    for c in p.iter().rev() {
        acc = &(&acc * x) + &id.scale(c);
    }
    acc
}

/// Monic minimal polynomial of a square matrix, from the first linear
/// dependency among `I, x, x^2, ...`.
pub fn minimal_polynomial(x: &Matrix) -> Poly {
    let field = x.field();
    let n = x.rows();
    let dim = n * n;
    // Eliminate on augmented rows [x^k | e_k]; the first row whose power part
    // reduces to zero carries the relation in its tag part.
    let mut ech = Echelon::new(field, dim + dim + 1);
    let mut current = Matrix::identity(field, n);
    for k in 0..=dim {
        let mut row = current.flatten().to_vec();
        row.extend((0..=dim).map(|j| if j == k { field.one() } else { field.zero() }));
        let reduced = ech.reduce(&row);
        if reduced[..dim].iter().all(|c| field.is_zero(c)) {
            let coeffs: Vec<Scalar> = reduced[dim..=dim + k].to_vec();
            let lead = field.inv(&coeffs[k]).expect("relation involves the newest power");
            return coeffs.iter().map(|c| field.mul(c, &lead)).collect();
        }
        ech.insert(&row);
        current = &current * x;
    }
    unreachable!("Cayley–Hamilton bounds the minimal polynomial degree by n")
}

/// Monic irreducible polynomials over a finite field, by degree, for every
/// degree `d <= max_degree` with `q^d <= limit`.
pub fn small_irreducibles(field: &Field, max_degree: usize, limit: u64) -> Vec<Poly> {
    let q = field.order().expect("finite field");
    let mut found: Vec<Poly> = Vec::new();
    for d in 1..=max_degree {
        let Some(count) = q.checked_pow(d as u32).filter(|&c| c <= limit) else {
            break;
        };
        for idx in 0..count {
            let mut p = counting_vector(field, d, idx);
            p.push(field.one());
            let reducible = found
                .iter()
                .take_while(|g| 2 * (g.len() - 1) <= d)
                .any(|g| divides_monic(field, g, &p));
            if !reducible {
                found.push(p);
            }
        }
    }
    found
}

/// Rational roots of a polynomial over `Q`, via the rational root theorem.
/// Gives up (returns what it has, possibly nothing) when the integer
/// coefficients are too large to factor by trial division.
pub fn rational_roots(field: &Field, p: &[Scalar]) -> Vec<Scalar> {
    let Some(deg) = degree(field, p) else {
        return Vec::new();
    };
    let rats: Vec<BigRational> = p[..=deg]
        .iter()
        .map(|c| match c {
            Scalar::Rat(r) => r.clone(),
            Scalar::Fin(_) => panic!("rational_roots needs a rational polynomial"),
        })
        .collect();
    let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(field.zero());
    }
    let (a0, an) = (ints[low].abs(), ints[deg].abs());
    let (Some(a0), Some(an)) = (a0.to_u64(), an.to_u64()) else {
        return roots;
    };
    const LIMIT: u64 = 1_000_000_000_000;
    if a0 > LIMIT || an > LIMIT {
        return roots;
    }
    let eval = |x: &BigRational| -> bool {
        let v = rats.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c);
        v.is_zero()
    };
    for num in divisors(a0) {
        for den in divisors(an) {
            if num.gcd(&den) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let x = BigRational::new(BigInt::from(sign) * BigInt::from(num), BigInt::from(den));
                if eval(&x) {
                    roots.push(Scalar::Rat(x));
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_minimal_polynomial() {
        let f = Field::prime(3).unwrap();
        // companion of x^2 + x + 2
        let c = Matrix::from_ints(&f, &[&[0, -2], &[1, -1]]);
        let mu = minimal_polynomial(&c);
        assert_eq!(mu, vec![f.from_int(2), f.from_int(1), f.one()]);
        assert!(eval_matrix(&f, &mu, &c).is_zero());
        assert_eq!(minimal_polynomial(&Matrix::identity(&f, 3)), vec![f.from_int(-1), f.one()]);
    }

    #[test]
    fn irreducible_counts_over_f2() {
        let f = Field::prime(2).unwrap();
        let irr = small_irreducibles(&f, 4, 1 << 12);
        let by_degree: Vec<usize> = (1..=4).map(|d| irr.iter().filter(|p| p.len() == d + 1).count()).collect();
        assert_eq!(by_degree, vec![2, 1, 2, 3]);
    }

    #[test]
    fn rational_roots_of_cubic() {
        let q = Field::rational();
        // (2x - 1)(x + 3) x = 2x^3 + 5x^2 - 3x
        let p = vec![q.zero(), q.from_int(-3), q.from_int(5), q.from_int(2)];
        assert_eq!(rational_roots(&q, &p), vec![q.from_int(-3), q.zero(), q.from_ratio(1, 2)]);
    }
}
