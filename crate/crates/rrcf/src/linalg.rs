//! Exact linear algebra kernels for the derivations.
//!
//! Three routes, all exact:
//!
//! - [`nullspace_exact`]: rational Gauss-Jordan, returns a kernel basis.
//!   Fine for the small systems (a few dozen unknowns).
//! - [`bareiss_echelon`]: fraction-free integer elimination; used to
//!   cross-check ranks and as the classical exact route on small systems.
//! - [`integer_kernel_vector`]: for the large modular-equation systems.
//!   Eliminates modulo 62-bit primes, reconstructs the one-dimensional kernel
//!   by CRT and rational reconstruction, and then certifies the candidate by
//!   an exact integer matrix-vector product. The output is the primitive
//!   integer generator (sign left to the caller). Nothing floating-point is
//!   involved anywhere, and a wrong reconstruction cannot escape the final
//!   exact verification.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Reduced row echelon form in place; returns the pivot columns.
#[allow(clippy::needless_range_loop)]
pub fn rref(rows: &mut [Vec<BigRational>]) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = BigRational::one() / rows[r][col].clone();
        for j in col..ncols {
            let v = rows[r][j].clone() * &inv;
            rows[r][j] = v;
        }
        for i in 0..nrows {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in col..ncols {
                    let sub = &factor * &rows[r][j];
                    rows[i][j] -= sub;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

/// Kernel basis of the column-space map `x -> A x` (one vector per free
/// column), over exact rationals.
pub fn nullspace_exact(matrix: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    if matrix.is_empty() {
        return Vec::new();
    }
    let ncols = matrix[0].len();
    let mut rows: Vec<Vec<BigRational>> = matrix.to_vec();
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![BigRational::zero(); ncols];
        v[fc] = BigRational::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[ri][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve `A x = b` exactly, requiring a unique solution.
pub fn solve_exact(matrix: &[Vec<BigRational>], rhs: &[BigRational]) -> Result<Vec<BigRational>> {
    assert_eq!(matrix.len(), rhs.len());
    if matrix.is_empty() {
        return Ok(Vec::new());
    }
    let ncols = matrix[0].len();
    let mut rows: Vec<Vec<BigRational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&ncols) {
        return Err(Error::InconsistentSystem(
            "right-hand side is outside the column space".into(),
        ));
    }
    if pivots.len() < ncols {
        return Err(Error::InconsistentSystem(format!(
            "solution is not unique: rank {} over {} unknowns",
            pivots.len(),
            ncols
        )));
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (ri, &pc) in pivots.iter().enumerate() {
        x[pc] = rows[ri][ncols].clone();
    }
    Ok(x)
}

/// Fraction-free (Bareiss) elimination of an integer matrix, in place.
/// Returns the pivot columns; afterwards the matrix is upper echelon with
/// exact integer entries.
pub fn bareiss_echelon(rows: &mut [Vec<BigInt>]) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        for i in (r + 1)..nrows {
            for j in (col + 1)..ncols {
                let num = &rows[r][col] * &rows[i][j] - &rows[i][col] * &rows[r][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                rows[i][j] = q;
            }
            rows[i][col] = BigInt::zero();
        }
        prev = rows[r][col].clone();
        pivots.push(col);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

/// Kernel basis of an integer matrix via Bareiss echelon plus rational
/// back-substitution; exact and allocation-heavy, intended for small systems.
pub fn nullspace_bareiss(matrix: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    if matrix.is_empty() {
        return Vec::new();
    }
    let mut rows: Vec<Vec<BigInt>> = matrix.to_vec();
    let pivots = bareiss_echelon(&mut rows);
    let ncols = matrix[0].len();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![BigRational::zero(); ncols];
        v[fc] = BigRational::one();
        // Back-substitute through the echelon rows bottom-up.
        for (ri, &pc) in pivots.iter().enumerate().rev() {
            if pc > fc {
                continue;
            }
            let mut acc = BigRational::zero();
            for j in (pc + 1)..ncols {
                if !rows[ri][j].is_zero() && !v[j].is_zero() {
                    acc += BigRational::from_integer(rows[ri][j].clone()) * &v[j];
                }
            }
            v[pc] = -acc / BigRational::from_integer(rows[ri][pc].clone());
        }
        basis.push(v);
    }
    basis
}

/// Scale a rational vector to its primitive integer multiple (content 1).
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let mut content = BigInt::zero();
    for x in &ints {
        content = content.gcd(x);
    }
    if content.is_zero() || content.is_one() {
        return ints;
    }
    ints.iter().map(|x| x / &content).collect()
}

// --- modular path ---------------------------------------------------------

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Deterministic stream of 62-bit primes.
fn prime_stream() -> impl Iterator<Item = u64> {
    let start: u64 = (1u64 << 62) + 1;
    (0u64..).map(move |k| start + 2 * k).filter(|&n| is_prime_u64(n))
}

fn reduce_mod(x: &BigInt, p: u64) -> u64 {
    let m = x.mod_floor(&BigInt::from(p));
    m.to_u64().expect("mod_floor result fits u64")
}

/// Kernel vector mod p for a matrix with a single free column: returns
/// `(free_column, vector)` or the nullity when it is not 1.
#[allow(clippy::needless_range_loop)]
fn kernel_mod_p(matrix: &[Vec<BigInt>], p: u64) -> std::result::Result<(usize, Vec<u64>), usize> {
    let nrows = matrix.len();
    let ncols = matrix[0].len();
    let mut rows: Vec<Vec<u64>> = matrix
        .iter()
        .map(|row| row.iter().map(|x| reduce_mod(x, p)).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..nrows).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = invmod(rows[r][col], p);
        for j in col..ncols {
            rows[r][j] = mulmod(rows[r][j], inv, p);
        }
        for i in 0..nrows {
            if i != r && rows[i][col] != 0 {
                let factor = rows[i][col];
                for j in col..ncols {
                    let sub = mulmod(factor, rows[r][j], p);
                    rows[i][j] = (rows[i][j] + p - sub) % p;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == nrows {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 1 {
        return Err(free.len());
    }
    let fc = free[0];
    let mut v = vec![0u64; ncols];
    v[fc] = 1;
    for (ri, &pc) in pivots.iter().enumerate() {
        v[pc] = (p - rows[ri][fc]) % p;
    }
    Ok((fc, v))
}

/// Rational reconstruction of `a (mod m)`: finds `n/d` with
/// `|n|, d <= sqrt(m/2)` and `n ≡ a d (mod m)`, if one exists.
fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let mut r0 = m.clone();
    let mut r1 = a.mod_floor(m);
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if r1.gcd(&t1) != BigInt::one() && !r1.is_zero() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// The primitive integer generator of a one-dimensional integer kernel.
///
/// Eliminates modulo deterministic 62-bit primes, reconstructs by CRT +
/// rational reconstruction, and certifies the result with an exact integer
/// matrix-vector product. Errors:
/// - nullity 0 -> [`Error::TruncationTooSmall`],
/// - nullity >= 2 (confirmed on two primes) -> [`Error::DegreeBoundViolated`].
pub fn integer_kernel_vector(matrix: &[Vec<BigInt>]) -> Result<Vec<BigInt>> {
    assert!(!matrix.is_empty());
    let nrows = matrix.len();
    let ncols = matrix[0].len();
    let mut primes = prime_stream();
    let mut residues: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut free_col: Option<usize> = None;
    let mut nullity_high = 0usize;
    let mut used = 0u32;
    while used < 48 {
        let p = primes.next().expect("prime stream is infinite");
        used += 1;
        match kernel_mod_p(matrix, p) {
            Err(0) => {
                return Err(Error::TruncationTooSmall {
                    rows: nrows,
                    cols: ncols,
                })
            }
            Err(dim) => {
                // a second prime confirming rules out an unlucky prime
                nullity_high += 1;
                if nullity_high >= 2 {
                    return Err(Error::DegreeBoundViolated { dim });
                }
                continue;
            }
            Ok((fc, v)) => {
                match free_col {
                    None => free_col = Some(fc),
                    Some(prev) if prev != fc => {
                        // rank pattern shifted: previous primes were unlucky,
                        // restart accumulation from this prime
                        residues.clear();
                        modulus = BigInt::one();
                        free_col = Some(fc);
                    }
                    _ => {}
                }
                let pb = BigInt::from(p);
                if residues.is_empty() {
                    residues = v.iter().map(|&x| BigInt::from(x)).collect();
                    modulus = pb;
                } else {
                    // CRT merge coordinate-wise.
                    let m_inv_p = {
                        let m_mod_p = reduce_mod(&modulus, p);
                        invmod(m_mod_p, p)
                    };
                    let new_modulus = &modulus * &pb;
                    for (res, &vx) in residues.iter_mut().zip(v.iter()) {
                        let r_mod_p = reduce_mod(res, p);
                        let diff = (vx + p - r_mod_p) % p;
                        let k = mulmod(diff, m_inv_p, p);
                        *res += &modulus * BigInt::from(k);
                        *res = res.mod_floor(&new_modulus);
                    }
                    modulus = new_modulus;
                }
                // Attempt reconstruction and exact verification.
                if let Some(candidate) = try_reconstruct(&residues, &modulus) {
                    let ints = primitive_integer_vector(&candidate);
                    if verify_kernel(matrix, &ints) {
                        return Ok(ints);
                    }
                }
            }
        }
    }
    Err(Error::Internal(
        "kernel reconstruction did not stabilize within the prime budget".into(),
    ))
}

fn try_reconstruct(residues: &[BigInt], modulus: &BigInt) -> Option<Vec<BigRational>> {
    residues
        .iter()
        .map(|r| rational_reconstruct(r, modulus))
        .collect()
}

/// Exact check that `A v = 0` over the integers.
pub fn verify_kernel(matrix: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return false;
    }
    for row in matrix {
        let mut acc = BigInt::zero();
        for (a, x) in row.iter().zip(v) {
            if !a.is_zero() && !x.is_zero() {
                acc += a * x;
            }
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

/// Fix the sign of an integer vector so entry `idx` is positive.
pub fn orient_sign(mut v: Vec<BigInt>, idx: usize) -> Vec<BigInt> {
    if v[idx].sign() == Sign::Minus {
        for x in v.iter_mut() {
            *x = -std::mem::take(x);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn brat(n: i64) -> BigRational {
        BigRational::from_integer(bi(n))
    }

    fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| bi(x)).collect()).collect()
    }

    fn rat_matrix(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| brat(x)).collect())
            .collect()
    }

    #[test]
    fn rational_nullspace_of_rank_deficient_matrix() {
        // kernel of [[1,2,3],[2,4,6],[1,1,1]] is spanned by (1,-2,1)
        let m = rat_matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        let basis = nullspace_exact(&m);
        assert_eq!(basis.len(), 1);
        let v = primitive_integer_vector(&basis[0]);
        let unit: Vec<i64> = v.iter().map(|x| x.to_i64().unwrap()).collect();
        assert!(unit == [1, -2, 1] || unit == [-1, 2, -1], "{unit:?}");
    }

    #[test]
    fn bareiss_agrees_with_rational_route() {
        let m_int = int_matrix(&[&[2, 4, 1, 0], &[0, 3, 9, 3], &[2, 7, 10, 3]]);
        let m_rat = rat_matrix(&[&[2, 4, 1, 0], &[0, 3, 9, 3], &[2, 7, 10, 3]]);
        let b1 = nullspace_bareiss(&m_int);
        let b2 = nullspace_exact(&m_rat);
        assert_eq!(b1.len(), b2.len());
        for (v1, v2) in b1.iter().zip(&b2) {
            let p1 = primitive_integer_vector(v1);
            let p2 = primitive_integer_vector(v2);
            let flipped: Vec<BigInt> = p2.iter().map(|x| -x).collect();
            assert!(p1 == p2 || p1 == flipped);
        }
        for v in &b1 {
            let ints = primitive_integer_vector(v);
            assert!(verify_kernel(&m_int, &ints));
        }
    }

    #[test]
    fn solve_unique_system() {
        let a = rat_matrix(&[&[1, 1], &[1, -1], &[2, 0]]);
        let b = vec![brat(3), brat(1), brat(4)];
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!(x, vec![brat(2), brat(1)]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = rat_matrix(&[&[1, 0], &[1, 0]]);
        let b = vec![brat(1), brat(2)];
        assert!(solve_exact(&a, &b).is_err());
    }

    #[test]
    fn modular_kernel_small() {
        let m = int_matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1], &[3, 5, 7]]);
        let v = integer_kernel_vector(&m).unwrap();
        let v = orient_sign(v, 0);
        assert_eq!(v, vec![bi(1), bi(-2), bi(1)]);
    }

    #[test]
    fn modular_kernel_with_large_entries() {
        // Kernel (3, -7, 2) hidden behind rows with big coefficients.
        let base: i64 = 1_000_000_007;
        let m = int_matrix(&[
            &[2 * base, 0, -3 * base],
            &[7, 3, 0],
            &[14, 6, 0],
            &[2 * base + 7, 3, -3 * base],
        ]);
        // rows: 2b*x - 3b*z = 0 => z = (2/3) x; 7x + 3y = 0
        let v = integer_kernel_vector(&m).unwrap();
        let v = orient_sign(v, 0);
        assert_eq!(v, vec![bi(3), bi(-7), bi(2)]);
    }

    #[test]
    fn modular_kernel_reports_full_rank() {
        let m = int_matrix(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(matches!(
            integer_kernel_vector(&m),
            Err(Error::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn modular_kernel_reports_excess_nullity() {
        let m = int_matrix(&[&[1, 1, 1], &[2, 2, 2]]);
        assert!(matches!(
            integer_kernel_vector(&m),
            Err(Error::DegreeBoundViolated { dim: 2 })
        ));
    }

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = prime_stream().take(4).collect();
        for &p in &ps {
            assert!(is_prime_u64(p));
            assert!(p > 1 << 61);
        }
        assert!(!is_prime_u64(1 << 62));
        assert!(is_prime_u64(2305843009213693951)); // 2^61 - 1
    }

    #[test]
    fn rational_reconstruction_roundtrip() {
        let m = BigInt::from(1_000_003i64) * BigInt::from(999_983i64);
        // encode 22/7 mod m
        let seven_inv = {
            let (_, x, _) = crate::cusps::ext_gcd(7, 1);
            let _ = x;
            // compute 7^{-1} mod m via extended gcd on BigInt
            let mut t0 = BigInt::zero();
            let mut t1 = BigInt::one();
            let mut r0 = m.clone();
            let mut r1 = BigInt::from(7);
            while !r1.is_zero() {
                let q = &r0 / &r1;
                let r2 = &r0 - &q * &r1;
                r0 = std::mem::replace(&mut r1, r2);
                let t2 = &t0 - &q * &t1;
                t0 = std::mem::replace(&mut t1, t2);
            }
            t0.mod_floor(&m)
        };
        let a = (BigInt::from(22) * seven_inv).mod_floor(&m);
        let rec = rational_reconstruct(&a, &m).unwrap();
        assert_eq!(rec, BigRational::new(BigInt::from(22), BigInt::from(7)));
    }
}
