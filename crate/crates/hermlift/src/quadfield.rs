//! The field `K = Q(sqrt(-D))` for a prime `D = 3 mod 4`: integers
//! `a + b*omega` with `omega = (1 + sqrt(-D))/2`, the character `chi_K`,
//! splitting of rational primes, and the class group via reduced forms.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith::{is_prime, kronecker};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("D_K = {0} must be a prime congruent to 3 mod 4")]
    BadDiscriminant(i64),
    #[error("weight k = {0} must be even and positive (divisible by 6 when D_K = 3)")]
    BadWeight(u32),
    #[error("l = {ell} must be an odd prime with l > k and l not dividing D_K * h_K")]
    BadEll { ell: u64 },
    #[error("p = {0} is not a split prime: no split class")]
    NoSplitClass(u64),
    #[error("unsupported class group shape (not cyclic)")]
    UnsupportedClassGroup,
    #[error("class group composition failed: {0}")]
    Composition(&'static str),
}

/// Standing parameters: the discriminant, the hermitian weight `k`, and
/// optionally the congruence prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldParams {
    pub d: i64,
    pub k: u32,
    pub ell: Option<u64>,
}

impl FieldParams {
    pub fn new(d: i64, k: u32) -> Result<FieldParams, FieldError> {
        check_discriminant(d)?;
        if k == 0 || k % 2 == 1 || (d == 3 && k % 6 != 0) {
            return Err(FieldError::BadWeight(k));
        }
        Ok(FieldParams { d, k, ell: None })
    }

    /// Attach the congruence prime, checking `l > k` and `l` prime to `D_K h_K`.
    pub fn with_ell(mut self, ell: u64) -> Result<FieldParams, FieldError> {
        let h = ClassGroup::new(self.d)?.order() as u64;
        if ell == 2
            || !is_prime(ell)
            || ell <= self.k as u64
            || self.d as u64 % ell == 0
            || h % ell == 0
        {
            return Err(FieldError::BadEll { ell });
        }
        self.ell = Some(ell);
        Ok(self)
    }
}

pub fn check_discriminant(d: i64) -> Result<(), FieldError> {
    if d < 3 || d % 4 != 3 || !is_prime(d as u64) {
        Err(FieldError::BadDiscriminant(d))
    } else {
        Ok(())
    }
}

/// `a + b*omega`. Arithmetic needs the discriminant, passed explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QuadInt {
    pub a: i64,
    pub b: i64,
}

impl QuadInt {
    pub const ZERO: QuadInt = QuadInt { a: 0, b: 0 };
    pub const ONE: QuadInt = QuadInt { a: 1, b: 0 };

    pub const fn new(a: i64, b: i64) -> QuadInt {
        QuadInt { a, b }
    }

    /// `sqrt(-D) = 2*omega - 1`.
    pub const fn sqrt_minus_d() -> QuadInt {
        QuadInt { a: -1, b: 2 }
    }

    pub fn norm(self, d: i64) -> i64 {
        self.a * self.a + self.a * self.b + self.b * self.b * ((1 + d) / 4)
    }

    pub fn trace(self) -> i64 {
        2 * self.a + self.b
    }

    /// Complex conjugate: `conj(omega) = 1 - omega`.
    pub fn conj(self) -> QuadInt {
        QuadInt {
            a: self.a + self.b,
            b: -self.b,
        }
    }

    pub fn mul(self, o: QuadInt, d: i64) -> QuadInt {
        // omega^2 = omega - (1+D)/4
        let c0 = (1 + d) / 4;
        QuadInt {
            a: self.a * o.a - self.b * o.b * c0,
            b: self.a * o.b + self.b * o.a + self.b * o.b,
        }
    }

    pub fn add(self, o: QuadInt) -> QuadInt {
        QuadInt {
            a: self.a + o.a,
            b: self.b + o.b,
        }
    }

    pub fn sub(self, o: QuadInt) -> QuadInt {
        QuadInt {
            a: self.a - o.a,
            b: self.b - o.b,
        }
    }

    pub fn neg(self) -> QuadInt {
        QuadInt {
            a: -self.a,
            b: -self.b,
        }
    }

    pub fn scale(self, c: i64) -> QuadInt {
        QuadInt {
            a: self.a * c,
            b: self.b * c,
        }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Reduce both coordinates into `[0, n)`.
    pub fn rem_euclid(self, n: i64) -> QuadInt {
        QuadInt {
            a: self.a.rem_euclid(n),
            b: self.b.rem_euclid(n),
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}w", self.a, self.b)
    }
}

/// The Kronecker symbol `(-D / n)`.
pub fn chi_k(d: i64, n: i64) -> i32 {
    kronecker(-d, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

pub fn split_type(d: i64, p: u64) -> SplitType {
    match chi_k(d, p as i64) {
        0 => SplitType::Ramified,
        1 => SplitType::Split,
        _ => SplitType::Inert,
    }
}

/// The `count` smallest inert primes.
pub fn inert_primes(d: i64, count: usize) -> Vec<u64> {
    (2u64..)
        .filter(|&p| is_prime(p) && split_type(d, p) == SplitType::Inert)
        .take(count)
        .collect()
}

/// The `count` smallest split primes.
pub fn split_primes(d: i64, count: usize) -> Vec<u64> {
    (2u64..)
        .filter(|&p| is_prime(p) && split_type(d, p) == SplitType::Split)
        .take(count)
        .collect()
}

/// A primitive positive definite form `a x^2 + b xy + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        self.b.abs() <= self.a
            && self.a <= self.c
            && !((self.b.abs() == self.a || self.a == self.c) && self.b < 0)
    }

    /// The reduced form properly equivalent to `self`.
    pub fn reduce(self) -> Form {
        let Form { mut a, mut b, mut c } = self;
        loop {
            // normalize b into (-a, a]
            if b > a || b <= -a {
                let two_a = 2 * a;
                let r = b.rem_euclid(two_a);
                let r = if r > a { r - two_a } else { r };
                let k = (r - b) / two_a;
                // x -> x + k y
                c = a * k * k + b * k + c;
                b = r;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            return Form { a, b, c };
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Gaussian composition of two primitive forms of the same discriminant,
/// followed by reduction.
pub fn compose(f1: Form, f2: Form) -> Form {
    let disc = f1.disc();
    debug_assert_eq!(disc, f2.disc());
    let (f1, f2) = if f1.a > f2.a { (f2, f1) } else { (f1, f2) };
    let s = (f1.b + f2.b) / 2;
    let n = f2.b - s;
    let (d, y1) = if f2.a % f1.a == 0 {
        (f1.a, 0)
    } else {
        let (d, u, _v) = ext_gcd(f2.a, f1.a);
        (d, u)
    };
    let (d1, x2, y2) = if s % d == 0 {
        (d, 0, -1)
    } else {
        let (d1, u, v) = ext_gcd(s, d);
        (d1, u, -v)
    };
    let v1 = f1.a / d1;
    let v2 = f2.a / d1;
    let r = (y1 * y2 * n - x2 * f2.c).rem_euclid(v1);
    let b3 = f2.b + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (b3 * b3 - disc) / (4 * a3);
    Form { a: a3, b: b3, c: c3 }.reduce()
}

/// The class group of discriminant `-D` as an explicit finite group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroup {
    pub d: i64,
    pub forms: Vec<Form>,
    /// `composition[i][j]` = index of `forms[i] * forms[j]`.
    pub composition: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub identity: usize,
}

impl ClassGroup {
    pub fn new(d: i64) -> Result<ClassGroup, FieldError> {
        check_discriminant(d)?;
        let forms = reduced_forms(d);
        let index: BTreeMap<Form, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let h = forms.len();
        let mut composition = vec![vec![0usize; h]; h];
        for i in 0..h {
            for j in 0..h {
                let f = compose(forms[i], forms[j]);
                composition[i][j] = *index
                    .get(&f)
                    .ok_or(FieldError::Composition("result not among reduced forms"))?;
            }
        }
        let identity = 0;
        debug_assert_eq!(forms[0].a, 1);
        let mut inverse = vec![0usize; h];
        for i in 0..h {
            inverse[i] = (0..h)
                .find(|&j| composition[i][j] == identity)
                .ok_or(FieldError::Composition("missing inverse"))?;
        }
        let cg = ClassGroup {
            d,
            forms,
            composition,
            inverse,
            identity,
        };
        cg.check_axioms()?;
        Ok(cg)
    }

    pub fn order(&self) -> usize {
        self.forms.len()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.composition[i][j]
    }

    pub fn pow(&self, i: usize, n: u64) -> usize {
        (0..n).fold(self.identity, |acc, _| self.mul(acc, i))
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut cur = i;
        let mut n = 1;
        while cur != self.identity {
            cur = self.mul(cur, i);
            n += 1;
        }
        n
    }

    pub fn index_of(&self, f: Form) -> Option<usize> {
        let r = f.reduce();
        self.forms.iter().position(|g| *g == r)
    }

    fn check_axioms(&self) -> Result<(), FieldError> {
        let h = self.order();
        if h % 2 == 0 {
            return Err(FieldError::Composition("even class number for prime discriminant"));
        }
        for i in 0..h {
            if self.mul(i, self.identity) != i {
                return Err(FieldError::Composition("identity"));
            }
            for j in 0..h {
                if self.mul(i, j) != self.mul(j, i) {
                    return Err(FieldError::Composition("not commutative"));
                }
                for k in 0..h {
                    if self.mul(self.mul(i, j), k) != self.mul(i, self.mul(j, k)) {
                        return Err(FieldError::Composition("not associative"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Class of the prime above a split `p` fixed by the smallest nonnegative
    /// `b` with `b^2 = -D (mod 4p)`.
    pub fn prime_class(&self, p: u64) -> Result<usize, FieldError> {
        if split_type(self.d, p) != SplitType::Split {
            return Err(FieldError::NoSplitClass(p));
        }
        let p = p as i64;
        let b = (0..2 * p)
            .find(|&b| (b * b + self.d) % (4 * p) == 0)
            .ok_or(FieldError::NoSplitClass(p as u64))?;
        let c = (b * b + self.d) / (4 * p);
        self.index_of(Form { a: p, b, c })
            .ok_or(FieldError::Composition("prime form not found"))
    }

    /// All characters; requires a cyclic group.
    pub fn characters(&self) -> Result<Vec<ClassChar>, FieldError> {
        let h = self.order();
        if h == 1 {
            return Ok(vec![ClassChar::trivial(1)]);
        }
        let gen = (0..h)
            .find(|&i| self.element_order(i) == h)
            .ok_or(FieldError::UnsupportedClassGroup)?;
        let mut log = vec![0usize; h];
        let mut cur = self.identity;
        for i in 0..h {
            log[cur] = i;
            cur = self.mul(cur, gen);
        }
        Ok((0..h)
            .map(|j| {
                let g = num_integer::gcd(h, j.max(1));
                let order = if j == 0 { 1 } else { h / g };
                let exps = (0..h)
                    .map(|c| {
                        if j == 0 {
                            0
                        } else {
                            ((log[c] * j / g) % order) as u32
                        }
                    })
                    .collect();
                ClassChar {
                    order: order as u32,
                    exponents: exps,
                }
            })
            .collect())
    }
}

/// Reduced primitive forms of discriminant `-D`, identity first.
pub fn reduced_forms(d: i64) -> Vec<Form> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= d {
        for b in (-a + 1..=a).rev() {
            if (b * b + d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b + d) / (4 * a);
            let f = Form { a, b, c };
            if f.is_reduced() && num_integer::gcd(num_integer::gcd(a, b), c) == 1 {
                out.push(f);
            }
        }
        a += 1;
    }
    out
}

/// A character of the class group with values `zeta_order^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassChar {
    pub order: u32,
    pub exponents: Vec<u32>,
}

impl ClassChar {
    pub fn trivial(h: usize) -> ClassChar {
        ClassChar {
            order: 1,
            exponents: vec![0; h],
        }
    }

    pub fn exponent(&self, class: usize) -> u32 {
        self.exponents[class]
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn inverse(&self) -> ClassChar {
        ClassChar {
            order: self.order,
            exponents: self
                .exponents
                .iter()
                .map(|&e| (self.order - e) % self.order)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_examples() {
        assert_eq!(chi_k(7, 2), 1);
        assert_eq!(chi_k(7, 3), -1);
        assert_eq!(chi_k(7, 7), 0);
        assert_eq!(split_type(7, 2), SplitType::Split);
        assert_eq!(split_type(7, 3), SplitType::Inert);
        assert_eq!(split_type(23, 23), SplitType::Ramified);
    }

    #[test]
    fn inert_prime_lists() {
        assert_eq!(inert_primes(7, 2), vec![3, 5]);
        assert_eq!(inert_primes(11, 2), vec![2, 7]);
        assert_eq!(inert_primes(23, 2), vec![5, 7]);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(QuadInt::new(1, 1).norm(7), 4);
        assert_eq!(QuadInt::sqrt_minus_d().norm(23), 23);
        let w = QuadInt::new(3, -2);
        assert_eq!(w.mul(w.conj(), 11), QuadInt::new(w.norm(11), 0));
    }

    #[test]
    fn class_groups() {
        let cg7 = ClassGroup::new(7).unwrap();
        assert_eq!(cg7.forms, vec![Form { a: 1, b: 1, c: 2 }]);
        let cg23 = ClassGroup::new(23).unwrap();
        assert_eq!(
            cg23.forms,
            vec![Form { a: 1, b: 1, c: 6 }, Form { a: 2, b: 1, c: 3 }, Form { a: 2, b: -1, c: 3 }]
        );
        assert_eq!(ClassGroup::new(47).unwrap().order(), 5);
        assert!(ClassGroup::new(4).is_err());
        assert!(ClassGroup::new(13).is_err());
    }

    #[test]
    fn prime_classes() {
        let cg = ClassGroup::new(23).unwrap();
        assert_eq!(cg.prime_class(2).unwrap(), 1);
        assert_eq!(cg.prime_class(5), Err(FieldError::NoSplitClass(5)));
        let c = cg.prime_class(59).unwrap();
        assert_eq!(cg.mul(c, cg.inverse[c]), cg.identity);
        assert_eq!(ClassGroup::new(7).unwrap().prime_class(2).unwrap(), 0);
    }

    #[test]
    fn characters_of_z3() {
        let cg = ClassGroup::new(23).unwrap();
        let chars = cg.characters().unwrap();
        let pats: Vec<Vec<u32>> = chars.iter().map(|c| c.exponents.clone()).collect();
        assert_eq!(pats, vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 1]]);
        assert_eq!(chars[1].order, 3);
        assert_eq!(chars[1].inverse(), chars[2]);
    }

    #[test]
    fn params_validation() {
        assert!(FieldParams::new(7, 8).is_ok());
        assert!(FieldParams::new(7, 7).is_err());
        assert!(FieldParams::new(9, 8).is_err());
        assert!(FieldParams::new(3, 8).is_err());
        assert!(FieldParams::new(3, 12).is_ok());
        let p = FieldParams::new(23, 8).unwrap();
        assert!(p.with_ell(13).is_ok());
        assert!(p.with_ell(7).is_err());
        assert!(p.with_ell(3).is_err());
    }
}
