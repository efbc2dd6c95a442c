use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::fpoly;
use super::{Elem, Ring, RingError};
use crate::arith::is_prime;

/// Default cap on valuation loops.
pub const MAX_VAL: i64 = 64;

/// A prime `(l, m_i(x))` of `Z[x]/(m)` with `l` unramified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeAboveL {
    pub ell: u64,
    /// Monic irreducible factor of `m mod l`, low degree first.
    pub local_factor: Vec<u64>,
    pub ramification_index: u32,
    pub residue_degree: u32,
    /// Integer lift of the product of the other factors; a unit at this prime
    /// that kills every other prime above `l`.
    cofactor: Vec<BigInt>,
}

impl fmt::Display for PrimeAboveL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.local_factor.iter().map(|c| c.to_string()).collect();
        write!(f, "({}, [{}])", self.ell, terms.join(" "))
    }
}

/// Valuation with the two kinds of "large": a genuine infinity for zero and a
/// cap hit by the division loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    AtLeast(i64),
    Infinite,
}

impl Valuation {
    fn key(&self) -> (i64, u8) {
        match *self {
            Valuation::Finite(v) => (v, 0),
            Valuation::AtLeast(v) => (v, 1),
            Valuation::Infinite => (i64::MAX, 2),
        }
    }

    /// Lower bound as a plain integer (caps and infinity report the cap).
    pub fn lower_bound(&self, cap: i64) -> i64 {
        match *self {
            Valuation::Finite(v) => v,
            Valuation::AtLeast(v) => v,
            Valuation::Infinite => cap,
        }
    }

    pub fn is_at_least(&self, n: i64) -> bool {
        match *self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v >= n,
            Valuation::Infinite => true,
        }
    }

    pub fn min(self, other: Valuation) -> Valuation {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Human-readable form; `>= cap` for capped or infinite values.
    pub fn display(&self, cap: i64) -> String {
        match *self {
            Valuation::Finite(v) => v.to_string(),
            Valuation::AtLeast(v) => format!(">={v}"),
            Valuation::Infinite => format!(">={cap}"),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

fn reduce_mod(c: &BigInt, l: u64) -> u64 {
    c.mod_floor(&BigInt::from(l)).to_u64().unwrap()
}

/// Primes of `Z[x]/(m)` above an odd prime `l` not dividing `disc(m)`.
pub fn primes_above(ring: &Ring, ell: u64) -> Result<Vec<PrimeAboveL>, RingError> {
    if ell == 2 || !is_prime(ell) {
        return Err(RingError::BadPrime(ell));
    }
    if (ring.discriminant() % BigInt::from(ell)).is_zero() {
        return Err(RingError::NonMaximalLocus(ell));
    }
    let m = fpoly::from_coeffs(ring.modulus().iter().map(|c| reduce_mod(c, ell)), ell);
    let factors = fpoly::factor_squarefree(&m, ell);
    let mut out = Vec::with_capacity(factors.len());
    for (i, fi) in factors.iter().enumerate() {
        let co = factors
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(vec![1u64], |acc, (_, g)| fpoly::mul(&acc, g, ell));
        out.push(PrimeAboveL {
            ell,
            local_factor: fi.clone(),
            ramification_index: 1,
            residue_degree: (fi.len() - 1) as u32,
            cofactor: co.into_iter().map(BigInt::from).collect(),
        });
    }
    Ok(out)
}

/// Valuation of one polynomial slice `a` (integer coefficients, length g).
fn val_slice(p: &PrimeAboveL, modulus: &[BigInt], a: &[BigInt], cap: i64) -> Valuation {
    if a.iter().all(|c| c.is_zero()) {
        return Valuation::Infinite;
    }
    let l = p.ell;
    let lb = BigInt::from(l);
    let mut cur = a.to_vec();
    let mut v = 0i64;
    loop {
        let r = fpoly::from_coeffs(cur.iter().map(|c| reduce_mod(c, l)), l);
        if !fpoly::rem(&r, &p.local_factor, l).is_empty() {
            return Valuation::Finite(v);
        }
        if v >= cap {
            return Valuation::AtLeast(cap);
        }
        // cofactor * cur is divisible by l coefficientwise after reduction mod m
        let g = modulus.len() - 1;
        let mut prod = vec![BigInt::zero(); cur.len() + p.cofactor.len() - 1];
        for (i, x) in cur.iter().enumerate() {
            for (j, y) in p.cofactor.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for deg in (g..prod.len()).rev() {
            if prod[deg].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut prod[deg]);
            for t in 0..g {
                prod[deg - g + t] -= &c * &modulus[t];
            }
        }
        prod.truncate(g);
        prod.resize(g, BigInt::zero());
        debug_assert!(prod.iter().all(|c| (c % &lb).is_zero()));
        cur = prod.into_iter().map(|c| c / &lb).collect();
        v += 1;
    }
}

/// Normalized valuation at `p` with the default cap.
pub fn val_at(p: &PrimeAboveL, a: &Elem) -> Valuation {
    val_at_capped(p, a, MAX_VAL)
}

/// Valuation of an element (possibly with denominator and cyclotomic part).
///
/// For twisted elements this is the minimum over the cyclotomic coordinates,
/// i.e. the largest `n` with the element in `P^n` times the integral basis.
pub fn val_at_capped(p: &PrimeAboveL, a: &Elem, cap: i64) -> Valuation {
    if a.is_zero() {
        return Valuation::Infinite;
    }
    let ring = a.ring();
    let g = ring.degree();
    let den_v = {
        let mut d = a.denominator().clone();
        let lb = BigInt::from(p.ell);
        let mut v = 0i64;
        while (&d % &lb).is_zero() {
            d /= &lb;
            v += 1;
        }
        v
    };
    let num = a.numerators();
    let mut best = Valuation::Infinite;
    for slice in num.chunks(g) {
        best = best.min(val_slice(p, ring.modulus(), slice, cap + den_v));
    }
    match best {
        Valuation::Finite(v) => Valuation::Finite(v - den_v),
        Valuation::AtLeast(_) => Valuation::AtLeast(cap),
        Valuation::Infinite => Valuation::Infinite,
    }
}
