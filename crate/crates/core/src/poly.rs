//! Integer polynomials: characteristic polynomials, cyclotomic stripping and
//! real root isolation by Sturm sequences.
//!
//! Coefficients are stored lowest degree first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficients highest degree first, as machine integers.
    pub fn coeffs_desc_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().rev().map(|c| c.to_i64()).collect()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    /// Exact quotient by `d` if `d` divides `self` over the integers.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let (q, r) = div_rem_q(&to_q(self), &to_q(d));
        if !r.iter().all(|c| c.is_zero()) {
            return None;
        }
        q.iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPoly::new)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_q(&self, x: &BigRational) -> BigRational {
        eval_q(&to_q(self), x)
    }

    /// A rational root, if any, by the rational root theorem.
    pub fn rational_root(&self) -> Option<BigRational> {
        // candidates p/q with p | a0 and q | a_n
        let a0 = self.coeffs[0].abs();
        if a0.is_zero() {
            return Some(BigRational::zero());
        }
        let an = self.leading().abs();
        let (a0, an) = (a0.to_u64()?, an.to_u64()?);
        let divisors = |n: u64| (1..=n).filter(move |d| n.is_multiple_of(*d));
        for p in divisors(a0) {
            for q in divisors(an) {
                for s in [1i64, -1] {
                    let r = BigRational::new(BigInt::from(p) * s, BigInt::from(q));
                    if self.eval_q(&r).is_zero() {
                        return Some(r);
                    }
                }
            }
        }
        None
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(self.is_zero() && k == 0) {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coef = !mag.is_one() || k == 0;
            if show_coef {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

fn to_q(p: &IntPoly) -> Vec<BigRational> {
    p.coeffs
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

fn trim_q(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    if v.is_empty() {
        v.push(BigRational::zero());
    }
    v
}

fn is_zero_q(v: &[BigRational]) -> bool {
    v.iter().all(|c| c.is_zero())
}

fn div_rem_q(n: &[BigRational], d: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let d = trim_q(d.to_vec());
    assert!(!is_zero_q(&d), "polynomial division by zero");
    let mut r = trim_q(n.to_vec());
    let dd = d.len() - 1;
    if r.len() < d.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - dd];
    let lead = d.last().unwrap().clone();
    while r.len() >= d.len() && !is_zero_q(&r) {
        let shift = r.len() - d.len();
        let f = r.last().unwrap() / &lead;
        for (k, c) in d.iter().enumerate() {
            r[k + shift] = &r[k + shift] - &(&f * c);
        }
        q[shift] = f;
        r.pop();
        r = trim_q(r);
    }
    (trim_q(q), r)
}

fn eval_q(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn derivative_q(p: &[BigRational]) -> Vec<BigRational> {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
        .collect()
}

fn gcd_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (mut a, mut b) = (trim_q(a.to_vec()), trim_q(b.to_vec()));
    while !is_zero_q(&b) {
        let (_, r) = div_rem_q(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().unwrap().clone();
    a.iter().map(|c| c / &lead).collect()
}

/// Characteristic polynomial `det(xI − A)` of a square integer matrix, by the
/// Faddeev-LeVerrier recurrence with exact integer division.
pub fn charpoly(m: &[Vec<i64>]) -> IntPoly {
    let n = m.len();
    let a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    // M_k = A·M_{k−1} + c_{n−k+1} I, c_{n−k} = −tr(A M_k)/k
    let mut mk = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !mk[l][j].is_zero() {
                        s += &a[i][l] * &mk[l][j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &c[n - k + 1];
        }
        mk = next;
        let mut tr = BigInt::zero();
        for i in 0..n {
            for l in 0..n {
                if !a[i][l].is_zero() && !mk[l][i].is_zero() {
                    tr += &a[i][l] * &mk[l][i];
                }
            }
        }
        let (q, r) = tr.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        c[n - k] = -q;
    }
    IntPoly::new(c)
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: usize) -> IntPoly {
    // xⁿ − 1 divided by Φ_d for every proper divisor d
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = BigInt::from(-1);
    c[n] = BigInt::one();
    let mut p = IntPoly::new(c);
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = p
                .div_exact(&cyclotomic(d))
                .expect("cyclotomic divisibility");
        }
    }
    p
}

fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count()
}

/// Result of stripping trivial factors from a characteristic polynomial.
#[derive(Clone, Debug)]
pub struct Factorisation {
    /// Power of `x` removed.
    pub x_power: usize,
    /// Cyclotomic factors `(n, multiplicity)` removed.
    pub cyclotomic: Vec<(usize, usize)>,
    /// What remains.
    pub factor: IntPoly,
    /// True when the remainder is certified irreducible over the rationals.
    pub irreducible: bool,
}

/// Divides out powers of `x` and every cyclotomic factor.
pub fn strip_trivial_factors(p: &IntPoly) -> Factorisation {
    let mut coeffs = p.coeffs.clone();
    let x_power = coeffs
        .iter()
        .take_while(|c| c.is_zero())
        .count()
        .min(p.degree());
    coeffs.drain(..x_power);
    let mut rest = IntPoly::new(coeffs);
    let mut cyclo = Vec::new();
    let mut n = 1;
    // φ(n) ≥ √(n/2), so n ≤ 2·deg² bounds every candidate
    while n <= 2 * p.degree().max(1).pow(2) + 2 {
        if euler_phi(n) <= rest.degree() {
            let phi = cyclotomic(n);
            let mut mult = 0;
            while rest.degree() >= phi.degree() {
                match rest.div_exact(&phi) {
                    Some(q) => {
                        rest = q;
                        mult += 1;
                    }
                    None => break,
                }
            }
            if mult > 0 {
                cyclo.push((n, mult));
            }
        }
        n += 1;
    }
    if rest.leading().is_negative() {
        rest = IntPoly::new(rest.coeffs.iter().map(|c| -c).collect());
    }
    let irreducible = rest.degree() >= 1 && rest.degree() <= 3 && rest.rational_root().is_none();
    Factorisation {
        x_power,
        cyclotomic: cyclo,
        factor: rest,
        irreducible,
    }
}

/// Sturm chain of the squarefree part of `p`.
pub struct Sturm {
    chain: Vec<Vec<BigRational>>,
}

impl Sturm {
    pub fn new(p: &IntPoly) -> Sturm {
        let q = to_q(p);
        let g = gcd_q(&q, &derivative_q(&q));
        let (sf, _) = div_rem_q(&q, &g);
        let mut chain = vec![sf.clone(), derivative_q(&sf)];
        loop {
            let n = chain.len();
            if is_zero_q(&chain[n - 1]) {
                chain.pop();
                break;
            }
            let (_, r) = div_rem_q(&chain[n - 2], &chain[n - 1]);
            if is_zero_q(&r) {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        Sturm { chain }
    }

    fn sign_changes(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let v = eval_q(p, x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_roots(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.sign_changes(lo).saturating_sub(self.sign_changes(hi))
    }
}

/// Cauchy bound: every root has modulus below it.
fn root_bound(p: &IntPoly) -> BigRational {
    let lead = p.leading().abs();
    let m = p.coeffs[..p.degree()]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    BigRational::new(m, lead) + BigRational::one()
}

/// Bracket `(lo, hi]` of width at most `tol` around the largest real root of
/// `p`, or `None` if `p` has no real root.
pub fn largest_real_root(p: &IntPoly, tol: f64) -> Option<(BigRational, BigRational)> {
    if p.degree() == 0 {
        return None;
    }
    let sturm = Sturm::new(p);
    let mut hi = root_bound(p);
    let mut lo = -hi.clone();
    if sturm.count_roots(&lo, &hi) == 0 {
        return None;
    }
    let tol = BigRational::from_float(tol)
        .unwrap_or_else(|| BigRational::new(1.into(), (1u64 << 40).into()));
    let two = BigRational::from_integer(2.into());
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / &two;
        if sturm.count_roots(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((lo, hi))
}

/// Largest real root as a float, accurate to about `1e-15` relative.
pub fn largest_real_root_f64(p: &IntPoly) -> Option<f64> {
    let (lo, hi) = largest_real_root(p, 1e-15)?;
    let mid = (lo + hi) / BigRational::from_integer(2.into());
    mid.to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_small() {
        // [[1,1],[2,1]] → x² − 2x − 1
        assert_eq!(
            charpoly(&[vec![1, 1], vec![2, 1]]),
            IntPoly::from_i64(&[-1, -2, 1])
        );
        // [[5,2],[2,1]] → x² − 6x + 1
        assert_eq!(
            charpoly(&[vec![5, 2], vec![2, 1]]),
            IntPoly::from_i64(&[1, -6, 1])
        );
        assert_eq!(charpoly(&[]), IntPoly::from_i64(&[1]));
    }

    #[test]
    fn charpoly_matches_expansion_3x3() {
        let m = [vec![2, 1, 0], vec![0, 1, 3], vec![1, 0, 1]];
        // det(xI − M) = x³ − 4x² + 5x − 5
        assert_eq!(charpoly(&m), IntPoly::from_i64(&[-5, 5, -4, 1]));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn stripping() {
        // x⁴(x+1)(x²−x+1)(x³−2x²−1)
        let cubic = IntPoly::from_i64(&[-1, 0, -2, 1]);
        let mut p = IntPoly::from_i64(&[0, 0, 0, 0, 1]);
        for f in [cyclotomic(2), cyclotomic(6), cubic.clone()] {
            p = mul(&p, &f);
        }
        let f = strip_trivial_factors(&p);
        assert_eq!(f.x_power, 4);
        assert_eq!(f.cyclotomic, vec![(2, 1), (6, 1)]);
        assert_eq!(f.factor, cubic);
        assert!(f.irreducible);
        assert_eq!(f.factor.to_string(), "x^3 - 2x^2 - 1");
    }

    fn mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
        let mut c = vec![BigInt::zero(); a.degree() + b.degree() + 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        IntPoly::new(c)
    }

    #[test]
    fn largest_roots() {
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        let r = largest_real_root_f64(&p).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-14);
        // repeated roots are handled through the squarefree part
        let q = mul(&p, &p);
        assert!((largest_real_root_f64(&q).unwrap() - r).abs() < 1e-14);
        assert_eq!(
            largest_real_root(&IntPoly::from_i64(&[1, 0, 1]), 1e-9),
            None
        );
        // x³ − 7x² + 7x + 7 brackets with a sign change
        let s = IntPoly::from_i64(&[7, 7, -7, 1]);
        let (lo, hi) = largest_real_root(&s, 1e-12).unwrap();
        assert!(
            s.eval_q(&lo).is_negative() != s.eval_q(&hi).is_negative() || s.eval_q(&hi).is_zero()
        );
    }
}
