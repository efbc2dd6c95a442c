//! Exact coefficient arithmetic.
//!
//! A [`Ring`] is `Q[x]/(m(x))`, optionally tensored with a cyclotomic factor
//! `Q[y]/(Phi_d(y))` that carries class-group character values. Elements
//! ([`Elem`]) store integer numerators on the basis `x^i y^j` over one common
//! positive denominator, always reduced to lowest terms.

mod fpoly;
mod prime;

pub use prime::{primes_above, val_at, val_at_capped, PrimeAboveL, Valuation, MAX_VAL};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::det_bareiss;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("modulus must be monic of degree >= 1")]
    NotMonic,
    #[error("modulus is not squarefree over Q")]
    NotSquarefree,
    #[error("involution negate-x needs m(-x) = +-m(x)")]
    BadInvolution,
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is a zero divisor and has no inverse")]
    NotInvertible,
    #[error("expected {expected} coordinates, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("l = {0} is not an odd prime")]
    BadPrime(u64),
    #[error("l = {0} divides disc(m): non-maximal locus")]
    NonMaximalLocus(u64),
    #[error("cannot parse element: {0}")]
    Parse(String),
}

/// Declared automorphism of `Q[x]/(m)` used as complex conjugation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Involution {
    Trivial,
    NegateX,
}

impl Involution {
    pub fn name(self) -> &'static str {
        match self {
            Involution::Trivial => "trivial",
            Involution::NegateX => "negate-x",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "trivial" => Some(Involution::Trivial),
            "negate-x" => Some(Involution::NegateX),
            _ => None,
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct Ring {
    modulus: Vec<BigInt>,
    involution: Involution,
    discriminant: BigInt,
    cyclo_order: u32,
    cyclo: Vec<BigInt>,
    /// `y^j` reduced mod `Phi_d`, for `j < d`.
    zeta_pows: Vec<Vec<BigInt>>,
}

impl Ring {
    /// `Q[x]/(m)` with `m` given low degree first (monic, so the last entry is 1).
    pub fn new(modulus: Vec<BigInt>, involution: Involution) -> Result<Arc<Ring>, RingError> {
        let modulus = trim_int(modulus);
        if modulus.len() < 2 || !modulus.last().unwrap().is_one() {
            return Err(RingError::NotMonic);
        }
        let discriminant = poly_discriminant(&modulus);
        if discriminant.is_zero() {
            return Err(RingError::NotSquarefree);
        }
        if involution == Involution::NegateX {
            let g = modulus.len() - 1;
            if modulus
                .iter()
                .enumerate()
                .any(|(i, c)| (i + g) % 2 == 1 && !c.is_zero())
            {
                return Err(RingError::BadInvolution);
            }
        }
        Ok(Arc::new(Ring::assemble(modulus, involution, discriminant, 1)))
    }

    /// The ring of integers `Z` (modulus `x`).
    pub fn integers() -> Arc<Ring> {
        Ring::new(vec![BigInt::zero(), BigInt::one()], Involution::Trivial).unwrap()
    }

    /// `Z[i] = Z[x]/(x^2+1)` with `x -> -x` as conjugation.
    pub fn gaussian() -> Arc<Ring> {
        Ring::new(
            vec![BigInt::one(), BigInt::zero(), BigInt::one()],
            Involution::NegateX,
        )
        .unwrap()
    }

    fn assemble(modulus: Vec<BigInt>, involution: Involution, discriminant: BigInt, d: u32) -> Ring {
        let cyclo = cyclotomic(d);
        let e = cyclo.len() - 1;
        let mut zeta_pows = Vec::with_capacity(d as usize);
        let mut cur = vec![BigInt::zero(); e];
        cur[0] = BigInt::one();
        for _ in 0..d {
            zeta_pows.push(cur.clone());
            // multiply by y and reduce
            let mut next = vec![BigInt::zero(); e + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            let top = next[e].clone();
            if !top.is_zero() {
                for t in 0..e {
                    next[t] -= &top * &cyclo[t];
                }
            }
            next.truncate(e);
            cur = next;
        }
        Ring {
            modulus,
            involution,
            discriminant,
            cyclo_order: d,
            cyclo,
            zeta_pows,
        }
    }

    /// The same base ring tensored with `Q(zeta_d)`.
    pub fn with_cyclotomic(&self, d: u32) -> Arc<Ring> {
        assert!(d >= 1);
        Arc::new(Ring::assemble(
            self.modulus.clone(),
            self.involution,
            self.discriminant.clone(),
            d,
        ))
    }

    /// The untwisted ring `Q[x]/(m)`.
    pub fn base(&self) -> Arc<Ring> {
        self.with_cyclotomic(1)
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn cyclotomic_order(&self) -> u32 {
        self.cyclo_order
    }

    /// `phi(d)`, the number of cyclotomic coordinates.
    pub fn cyclotomic_degree(&self) -> usize {
        self.cyclo.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.degree() * self.cyclotomic_degree()
    }

    pub fn involution(&self) -> Involution {
        self.involution
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    /// Same base ring (modulus and involution), ignoring the cyclotomic part.
    pub fn same_base(&self, other: &Ring) -> bool {
        self.modulus == other.modulus && self.involution == other.involution
    }
}

fn trim_int(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Exact quotient by a monic divisor.
fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i].clone();
        if c.is_zero() {
            continue;
        }
        q[i - db] = c.clone();
        for j in 0..=db {
            r[i - db + j] -= &c * &b[j];
        }
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

/// The cyclotomic polynomial `Phi_d`, low degree first.
pub fn cyclotomic(d: u32) -> Vec<BigInt> {
    // x^d - 1 divided by Phi_e for every proper divisor e of d.
    let mut num = vec![BigInt::zero(); d as usize + 1];
    num[0] = -BigInt::one();
    num[d as usize] = BigInt::one();
    for e in 1..d {
        if d % e == 0 {
            num = int_poly_div_exact(&num, &cyclotomic(e));
        }
    }
    num
}

/// Discriminant of a monic integer polynomial via the Sylvester resultant with m'.
fn poly_discriminant(m: &[BigInt]) -> BigInt {
    let g = m.len() - 1;
    if g == 1 {
        return BigInt::one();
    }
    let dm: Vec<BigInt> = m
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let n = g + (g - 1);
    let mut syl = vec![vec![BigInt::zero(); n]; n];
    // Rows for m (g-1 of them) and m' (g of them), high degree first.
    for r in 0..g - 1 {
        for (i, c) in m.iter().rev().enumerate() {
            syl[r][r + i] = c.clone();
        }
    }
    for r in 0..g {
        for (i, c) in dm.iter().rev().enumerate() {
            syl[g - 1 + r][r + i] = c.clone();
        }
    }
    let res = det_bareiss(syl);
    if (g * (g - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

/// An element of a [`Ring`].
#[derive(Clone)]
pub struct Elem {
    ring: Arc<Ring>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den && same_ring(&self.ring, &other.ring)
    }
}

impl Eq for Elem {}

fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Elem {
    pub fn zero(ring: &Arc<Ring>) -> Elem {
        Elem {
            ring: ring.clone(),
            num: vec![BigInt::zero(); ring.dim()],
            den: BigInt::one(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Elem {
        Elem::from_int(ring, 1)
    }

    pub fn from_int(ring: &Arc<Ring>, n: impl Into<BigInt>) -> Elem {
        let mut e = Elem::zero(ring);
        e.num[0] = n.into();
        e
    }

    pub fn from_rational(ring: &Arc<Ring>, q: &BigRational) -> Elem {
        let mut e = Elem::zero(ring);
        e.num[0] = q.numer().clone();
        e.den = q.denom().clone();
        e.normalize();
        e
    }

    /// The generator `x` of the base ring.
    pub fn x(ring: &Arc<Ring>) -> Elem {
        let mut coords = vec![BigRational::zero(); ring.degree()];
        if ring.degree() == 1 {
            coords[0] = BigRational::from_integer(-ring.modulus[0].clone());
        } else {
            coords[1] = BigRational::one();
        }
        Elem::from_base_coords(ring, &coords).unwrap()
    }

    /// `zeta_d^exp` in a ring whose cyclotomic order is `d`.
    pub fn zeta_pow(ring: &Arc<Ring>, exp: i64) -> Elem {
        let d = ring.cyclo_order as i64;
        let j = exp.rem_euclid(d) as usize;
        let g = ring.degree();
        let mut e = Elem::zero(ring);
        for (t, c) in ring.zeta_pows[j].iter().enumerate() {
            e.num[t * g] = c.clone();
        }
        e
    }

    /// Element from all `g * phi(d)` rational coordinates (index `i + g*j` for `x^i y^j`).
    pub fn from_coords(ring: &Arc<Ring>, coords: &[BigRational]) -> Result<Elem, RingError> {
        if coords.len() != ring.dim() {
            return Err(RingError::BadLength {
                expected: ring.dim(),
                got: coords.len(),
            });
        }
        let den = coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut e = Elem {
            ring: ring.clone(),
            num,
            den,
        };
        e.normalize();
        Ok(e)
    }

    /// Element of the base part from `g` coordinates in the power basis of `x`.
    pub fn from_base_coords(ring: &Arc<Ring>, coords: &[BigRational]) -> Result<Elem, RingError> {
        if coords.len() != ring.degree() {
            return Err(RingError::BadLength {
                expected: ring.degree(),
                got: coords.len(),
            });
        }
        let mut full = vec![BigRational::zero(); ring.dim()];
        full[..coords.len()].clone_from_slice(coords);
        Elem::from_coords(ring, &full)
    }

    pub fn from_int_coords(ring: &Arc<Ring>, coords: &[i64]) -> Result<Elem, RingError> {
        let c: Vec<BigRational> = coords
            .iter()
            .map(|&v| BigRational::from_integer(BigInt::from(v)))
            .collect();
        if c.len() == ring.degree() {
            Elem::from_base_coords(ring, &c)
        } else {
            Elem::from_coords(ring, &c)
        }
    }

    /// Parse whitespace separated rational coordinates (`3`, `-1/2`).
    pub fn parse(ring: &Arc<Ring>, text: &str) -> Result<Elem, RingError> {
        let coords = text
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?;
        if coords.len() == ring.degree() {
            Elem::from_base_coords(ring, &coords)
        } else {
            Elem::from_coords(ring, &coords)
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coords(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.den.is_one() {
            return;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            g = g.gcd(c);
        }
        if g.is_one() {
            return;
        }
        self.den /= &g;
        for c in &mut self.num {
            *c /= &g;
        }
    }

    fn check(&self, other: &Elem) -> Result<(), RingError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(RingError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Elem) -> Result<Elem, RingError> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Elem) -> Result<Elem, RingError> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(&-other);
        Ok(out)
    }

    fn add_assign_unchecked(&mut self, other: &Elem) {
        if self.den == other.den {
            for (a, b) in self.num.iter_mut().zip(&other.num) {
                *a += b;
            }
        } else {
            let l = self.den.lcm(&other.den);
            let fa = &l / &self.den;
            let fb = &l / &other.den;
            for (a, b) in self.num.iter_mut().zip(&other.num) {
                *a = &*a * &fa + b * &fb;
            }
            self.den = l;
        }
        self.normalize();
    }

    pub fn try_mul(&self, other: &Elem) -> Result<Elem, RingError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Elem) -> Elem {
        let ring = &self.ring;
        let g = ring.degree();
        let e = ring.cyclotomic_degree();
        let mut den = &self.den * &other.den;
        if g == 1 && e == 1 {
            let mut out = Elem {
                ring: ring.clone(),
                num: vec![&self.num[0] * &other.num[0]],
                den: std::mem::take(&mut den),
            };
            out.normalize();
            return out;
        }
        let mut tmp = vec![vec![BigInt::zero(); 2 * g - 1]; 2 * e - 1];
        for j1 in 0..e {
            for i1 in 0..g {
                let a = &self.num[i1 + g * j1];
                if a.is_zero() {
                    continue;
                }
                for j2 in 0..e {
                    for i2 in 0..g {
                        let b = &other.num[i2 + g * j2];
                        if b.is_zero() {
                            continue;
                        }
                        tmp[j1 + j2][i1 + i2] += a * b;
                    }
                }
            }
        }
        for row in tmp.iter_mut() {
            reduce_by_monic(row, &ring.modulus);
        }
        // reduce the y-degree by Phi_d
        for jd in (e..2 * e - 1).rev() {
            let top = std::mem::take(&mut tmp[jd]);
            for t in 0..e {
                let c = &ring.cyclo[t];
                if c.is_zero() {
                    continue;
                }
                for i in 0..g {
                    let v = &top[i] * c;
                    tmp[jd - e + t][i] -= v;
                }
            }
        }
        let mut num = Vec::with_capacity(g * e);
        for row in tmp.into_iter().take(e) {
            num.extend(row.into_iter().take(g));
        }
        let mut out = Elem {
            ring: ring.clone(),
            num,
            den,
        };
        out.normalize();
        out
    }

    pub fn scale_int(&self, c: &BigInt) -> Elem {
        let mut out = self.clone();
        for a in &mut out.num {
            *a *= c;
        }
        out.normalize();
        out
    }

    pub fn scale(&self, q: &BigRational) -> Elem {
        let mut out = self.clone();
        for a in &mut out.num {
            *a *= q.numer();
        }
        out.den *= q.denom();
        out.normalize();
        out
    }

    /// Matrix of multiplication by `self` on the rational basis (columns are images).
    fn mult_matrix(&self) -> Vec<Vec<BigRational>> {
        let n = self.ring.dim();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut basis = Elem::zero(&self.ring);
            basis.num[j] = BigInt::one();
            cols.push(self.mul_unchecked(&basis).coords());
        }
        (0..n)
            .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
            .collect()
    }

    /// Field norm down to `Q`, the determinant of multiplication.
    pub fn norm(&self) -> BigRational {
        let scale = BigRational::from_integer(self.den.clone());
        let mut m = self.scale(&scale).mult_matrix();
        let n = m.len();
        let ints: Vec<Vec<BigInt>> = m
            .drain(..)
            .map(|row| row.into_iter().map(|c| c.to_integer()).collect())
            .collect();
        let d = det_bareiss(ints);
        BigRational::new(d, self.den.pow(n as u32))
    }

    pub fn inv(&self) -> Result<Elem, RingError> {
        if self.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        let ring = &self.ring;
        if ring.dim() == 1 {
            let q = BigRational::new(self.den.clone(), self.num[0].clone());
            return Ok(Elem::from_rational(ring, &q));
        }
        let m = self.mult_matrix();
        let mut rhs = vec![BigRational::zero(); ring.dim()];
        rhs[0] = BigRational::one();
        let sol = solve_rational(m, rhs).ok_or(RingError::NotInvertible)?;
        Elem::from_coords(ring, &sol)
    }

    pub fn try_div(&self, other: &Elem) -> Result<Elem, RingError> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Elem, RingError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut result = Elem::one(&self.ring);
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_unchecked(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul_unchecked(&b);
            }
        }
        Ok(result)
    }

    /// The declared involution on the base part and `zeta -> zeta^-1` on the cyclotomic part.
    pub fn conj(&self) -> Elem {
        let ring = &self.ring;
        let g = ring.degree();
        let e = ring.cyclotomic_degree();
        let d = ring.cyclo_order as usize;
        let mut out = Elem::zero(ring);
        out.den = self.den.clone();
        for j in 0..e {
            let jj = (d - j) % d;
            for i in 0..g {
                let mut c = self.num[i + g * j].clone();
                if c.is_zero() {
                    continue;
                }
                if ring.involution == Involution::NegateX && i % 2 == 1 {
                    c = -c;
                }
                for (t, z) in ring.zeta_pows[jj].iter().enumerate() {
                    if !z.is_zero() {
                        out.num[i + g * t] += &c * z;
                    }
                }
            }
        }
        out.normalize();
        out
    }

    /// Embed into another ring with the same base (for instance a cyclotomic extension).
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Elem, RingError> {
        if !self.ring.same_base(target) {
            return Err(RingError::RingMismatch);
        }
        if self.ring.cyclo_order == target.cyclo_order {
            let mut e = self.clone();
            e.ring = target.clone();
            return Ok(e);
        }
        if self.ring.cyclo_order != 1 {
            return Err(RingError::RingMismatch);
        }
        let mut out = Elem::zero(target);
        out.num[..self.num.len()].clone_from_slice(&self.num);
        out.den = self.den.clone();
        Ok(out)
    }
}

fn reduce_by_monic(row: &mut [BigInt], m: &[BigInt]) {
    let g = m.len() - 1;
    for deg in (g..row.len()).rev() {
        if row[deg].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut row[deg]);
        for t in 0..g {
            if !m[t].is_zero() {
                row[deg - g + t] -= &c * &m[t];
            }
        }
    }
}

/// Solve a square rational system; `None` when singular.
fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    let v = &f * &a[col][j];
                    a[r][j] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some(b)
}

pub fn parse_rational(s: &str) -> Result<BigRational, RingError> {
    let bad = || RingError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Accumulator for long sums: numerators are not reduced until [`Acc::finish`].
pub(crate) struct Acc {
    ring: Arc<Ring>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Acc {
    pub(crate) fn new(ring: &Arc<Ring>) -> Acc {
        Acc {
            ring: ring.clone(),
            num: vec![BigInt::zero(); ring.dim()],
            den: BigInt::one(),
        }
    }

    pub(crate) fn add(&mut self, e: &Elem) {
        debug_assert!(same_ring(&self.ring, &e.ring));
        if e.den == self.den {
            for (a, b) in self.num.iter_mut().zip(&e.num) {
                *a += b;
            }
        } else if (&self.den % &e.den).is_zero() {
            let f = &self.den / &e.den;
            for (a, b) in self.num.iter_mut().zip(&e.num) {
                *a += b * &f;
            }
        } else {
            let l = self.den.lcm(&e.den);
            let fa = &l / &self.den;
            let fb = &l / &e.den;
            for (a, b) in self.num.iter_mut().zip(&e.num) {
                *a = &*a * &fa + b * &fb;
            }
            self.den = l;
        }
    }

    /// Add `c * e` for a small integer coefficient.
    pub(crate) fn add_scaled(&mut self, e: &Elem, c: &BigInt) {
        if c.is_one() {
            self.add(e);
        } else {
            self.add(&e.scale_int(c));
        }
    }

    pub(crate) fn finish(self) -> Elem {
        let mut e = Elem {
            ring: self.ring,
            num: self.num,
            den: self.den,
        };
        e.normalize();
        e
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Elem {
    /// Coordinates separated by spaces, each in lowest terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords()
            .iter()
            .map(|c| {
                if c.denom().is_one() {
                    c.numer().to_string()
                } else {
                    format!("{}/{}", c.numer(), c.denom())
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        let mut out = self.clone();
        for c in &mut out.num {
            *c = -&*c;
        }
        out
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

// The operator forms panic on mismatched rings; use the `try_*` methods when
// operands come from untrusted input.
macro_rules! binop {
    ($tr:ident, $m:ident, $call:ident) => {
        impl $tr<&Elem> for &Elem {
            type Output = Elem;
            fn $m(self, rhs: &Elem) -> Elem {
                self.$call(rhs).expect("ring mismatch")
            }
        }
        impl $tr<Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem {
                (&self).$call(&rhs).expect("ring mismatch")
            }
        }
        impl $tr<&Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: &Elem) -> Elem {
                (&self).$call(rhs).expect("ring mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(coeffs: &[i64]) -> Arc<Ring> {
        Ring::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), Involution::Trivial).unwrap()
    }

    #[test]
    fn gaussian_i_squared() {
        let r = Ring::gaussian();
        let x = Elem::x(&r);
        assert_eq!(&x * &x, Elem::from_int(&r, -1));
    }

    #[test]
    fn integers_multiply() {
        let r = Ring::integers();
        assert_eq!(Elem::from_int(&r, 3) * Elem::from_int(&r, 4), Elem::from_int(&r, 12));
    }

    #[test]
    fn golden_ratio_square() {
        let r = ring(&[-1, -1, 1]);
        let x = Elem::x(&r);
        assert_eq!(&x * &x, &x + &Elem::one(&r));
    }

    #[test]
    fn rejects_non_monic_and_non_squarefree() {
        assert_eq!(
            Ring::new(vec![BigInt::from(1), BigInt::from(2)], Involution::Trivial),
            Err(RingError::NotMonic)
        );
        assert_eq!(
            Ring::new(
                vec![BigInt::from(1), BigInt::from(2), BigInt::from(1)],
                Involution::Trivial
            ),
            Err(RingError::NotSquarefree)
        );
        assert_eq!(
            Ring::new(
                vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)],
                Involution::NegateX
            ),
            Err(RingError::BadInvolution)
        );
    }

    #[test]
    fn discriminants() {
        assert_eq!(*ring(&[1, 0, 1]).discriminant(), BigInt::from(-4));
        assert_eq!(*ring(&[-1, -1, 1]).discriminant(), BigInt::from(5));
        // x^3 - 2: -27 * 4
        assert_eq!(*ring(&[-2, 0, 0, 1]).discriminant(), BigInt::from(-108));
    }

    #[test]
    fn cyclotomic_polys() {
        let c = |d| cyclotomic(d).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(c(1), "-1,1");
        assert_eq!(c(3), "1,1,1");
        assert_eq!(c(4), "1,0,1");
        assert_eq!(c(6), "1,-1,1");
    }

    #[test]
    fn zeta_arithmetic() {
        let r = Ring::gaussian().with_cyclotomic(3);
        let z = Elem::zeta_pow(&r, 1);
        let z2 = Elem::zeta_pow(&r, 2);
        assert_eq!(&z * &z, z2);
        assert_eq!(&z * &z2, Elem::one(&r));
        assert_eq!(&(&z + &z2) + &Elem::one(&r), Elem::zero(&r));
        assert_eq!(z.conj(), z2);
        let x = Elem::x(&r);
        assert_eq!((&x * &z).conj(), -&(&x * &z2));
    }

    #[test]
    fn inverse_and_zero_divisor() {
        let r = ring(&[-1, 0, 1]); // x^2 - 1 = (x-1)(x+1)
        let a = Elem::x(&r) - Elem::one(&r);
        assert_eq!(a.inv(), Err(RingError::NotInvertible));
        let g = Ring::gaussian();
        let b = Elem::from_int_coords(&g, &[1, 2]).unwrap();
        assert_eq!(&b * &b.inv().unwrap(), Elem::one(&g));
        assert_eq!(b.norm(), BigRational::from_integer(BigInt::from(5)));
    }

    #[test]
    fn rationals_normalize() {
        let r = Ring::integers();
        let a = Elem::parse(&r, "2/4").unwrap();
        assert_eq!(a.to_string(), "1/2");
        assert_eq!(&a + &a, Elem::one(&r));
        assert!(Elem::parse(&r, "1/0").is_err());
    }

    #[test]
    fn mismatched_rings_error() {
        let a = Elem::one(&Ring::integers());
        let b = Elem::one(&Ring::gaussian());
        assert_eq!(a.try_add(&b), Err(RingError::RingMismatch));
    }

    #[test]
    fn pow_negative() {
        let r = Ring::integers();
        let two = Elem::from_int(&r, 2);
        assert_eq!(two.pow(-3).unwrap().to_string(), "1/8");
    }
}
