//! Univariate polynomials over a prime field, just enough to find the roots
//! of a characteristic polynomial. Coefficients are stored lowest degree
//! first with no trailing zeros.

use rand::Rng;

use crate::linalg::{Mat, PrimeField};

type Poly = Vec<u32>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn sub(f: PrimeField, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect(),
    )
}

fn mul(f: PrimeField, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
fn divmod(f: PrimeField, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = f.inv(*b.last().unwrap());
    let mut q = vec![0; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = f.mul(*r.last().unwrap(), lead_inv);
        q[shift] = c;
        for (j, &y) in b.iter().enumerate() {
            r[shift + j] = f.sub(r[shift + j], f.mul(c, y));
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn rem(f: PrimeField, a: &[u32], b: &[u32]) -> Poly {
    divmod(f, a, b).1
}

fn monic(f: PrimeField, a: Poly) -> Poly {
    match a.last() {
        Some(&lead) if lead != 1 => {
            let inv = f.inv(lead);
            a.into_iter().map(|x| f.mul(x, inv)).collect()
        }
        _ => a,
    }
}

fn gcd(f: PrimeField, a: &[u32], b: &[u32]) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, a)
}

/// `base^exp mod m`.
fn powmod(f: PrimeField, base: &[u32], mut exp: u64, m: &[u32]) -> Poly {
    let mut acc = vec![1];
    let mut b = rem(f, base, m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
        exp >>= 1;
        if exp > 0 {
            b = rem(f, &mul(f, &b, &b), m);
        }
    }
    acc
}

/// Characteristic polynomial `det(xI − a)` by interpolation at `0..=n`.
/// Needs `p > n`.
fn char_poly(f: PrimeField, a: &Mat) -> Poly {
    let n = a.rows();
    let xs: Vec<u32> = (0..=n as u32).collect();
    let ys: Vec<u32> = xs
        .iter()
        .map(|&x| {
            let shifted = Mat::scalar(n, x).sub(f, a);
            shifted.determinant(f).expect("square")
        })
        .collect();
    // Lagrange interpolation.
    let mut out: Poly = Vec::new();
    for (i, &xi) in xs.iter().enumerate() {
        let mut basis = vec![1];
        let mut denom = 1;
        for (j, &xj) in xs.iter().enumerate() {
            if i != j {
                basis = mul(f, &basis, &[f.neg(xj), 1]);
                denom = f.mul(denom, f.sub(xi, xj));
            }
        }
        let scale = f.mul(ys[i], f.inv(denom));
        let term: Poly = basis.iter().map(|&c| f.mul(c, scale)).collect();
        out = sub(f, &out, &term.iter().map(|&c| f.neg(c)).collect::<Vec<_>>());
    }
    out
}

/// Splits a squarefree product of distinct linear factors into its roots.
fn split_linear<R: Rng + ?Sized>(f: PrimeField, g: Poly, rng: &mut R, out: &mut Vec<u32>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(f.neg(f.mul(g[0], f.inv(g[1])))),
        _ => {
            let p = f.characteristic() as u64;
            loop {
                let a = f.random(rng);
                let h = powmod(f, &[a, 1], (p - 1) / 2, &g);
                let d = gcd(f, &g, &sub(f, &h, &[1]));
                if d.len() > 1 && d.len() < g.len() {
                    let other = divmod(f, &g, &d).0;
                    split_linear(f, d, rng, out);
                    split_linear(f, monic(f, other), rng, out);
                    return;
                }
            }
        }
    }
}

/// Brute force is used below this characteristic.
const BRUTE_FORCE_LIMIT: u32 = 4096;

/// The distinct eigenvalues of a square matrix lying in the field, sorted.
pub fn eigenvalues<R: Rng + ?Sized>(f: PrimeField, a: &Mat, rng: &mut R) -> Vec<u32> {
    let n = a.rows();
    if n == 0 {
        return Vec::new();
    }
    let p = f.characteristic();
    if p <= BRUTE_FORCE_LIMIT || p as usize <= n {
        return (0..p)
            .filter(|&l| a.sub(f, &Mat::scalar(n, l)).rank(f) < n)
            .collect();
    }
    let c = char_poly(f, a);
    // gcd(c, x^p − x) collects the distinct linear factors.
    let xp = powmod(f, &[0, 1], p as u64, &c);
    let g = gcd(f, &c, &sub(f, &xp, &[0, 1]));
    let mut roots = Vec::new();
    split_linear(f, g, rng, &mut roots);
    roots.sort_unstable();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn char_poly_of_diagonal() {
        let f = PrimeField::default();
        let a = Mat::from_rows(f, &[vec![2, 0], vec![0, 3]], 2).unwrap();
        // (x − 2)(x − 3) = x² − 5x + 6
        assert_eq!(char_poly(f, &a), vec![6, f.neg(5), 1]);
    }

    #[test]
    fn eigenvalues_large_and_small_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = PrimeField::default();
        let a = Mat::from_rows(f, &[vec![5, 1, 0], vec![0, 5, 0], vec![0, 0, -7]], 3).unwrap();
        assert_eq!(eigenvalues(f, &a, &mut rng), vec![5, f.reduce(-7)]);
        // Rotation by 90 degrees has no eigenvalue when −1 is not a square.
        let rot = Mat::from_rows(f, &[vec![0, -1], vec![1, 0]], 2).unwrap();
        let roots = eigenvalues(f, &rot, &mut rng);
        for r in &roots {
            assert_eq!(f.mul(*r, *r), f.reduce(-1));
        }
        let f2 = PrimeField::new(2).unwrap();
        let b = Mat::from_rows(f2, &[vec![1, 1], vec![0, 1]], 2).unwrap();
        assert_eq!(eigenvalues(f2, &b, &mut rng), vec![1]);
    }

    #[test]
    fn random_matrices_roots_are_eigenvalues() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..6 {
            for _ in 0..10 {
                let a = Mat::random(f, n, n, &mut rng);
                for l in eigenvalues(f, &a, &mut rng) {
                    assert!(a.sub(f, &Mat::scalar(n, l)).rank(f) < n);
                }
            }
        }
    }
}
