//! Euler factors: base change of the newform to `K`, and the degree-4
//! standard factor of the lift built from its Galois-side eigenvalue multiset.
//!
//! Satake parameters are never extracted. At a prime of `K` above `p` the
//! local pair `{x1, x2}` enters only through `E1 = x1 + x2` and `E2 = x1 x2`:
//! `(a(p), chi_K(p) p^(k-2))` at a split prime, `(a(p)^2 - 2 chi_K(p) p^(k-2), p^(2k-4))` at an inert one.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::arith::rat_pow;
use crate::elliptic::{EllipticError, NewformData};
use crate::quadfield::{split_type, ClassChar, ClassGroup, FieldError, SplitType};
use crate::ring::{Elem, Ring, RingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LfunError {
    #[error("p = {0} is ramified; the Euler factor at D_K is removed")]
    Ramified(u64),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A prime of `K` above a rational prime `p != D_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KPrime {
    pub p: u64,
    pub norm: u64,
    /// For split `p`: whether this is the conjugate of the chosen prime.
    pub conjugate: bool,
    /// Class index (the identity for inert primes, which are principal).
    pub class: usize,
}

impl fmt::Display for KPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.norm == self.p, self.conjugate) {
            (true, false) => write!(f, "P{}", self.p),
            (true, true) => write!(f, "P{}bar", self.p),
            _ => write!(f, "({})", self.p),
        }
    }
}

pub fn primes_above_k(cg: &ClassGroup, p: u64) -> Result<Vec<KPrime>, LfunError> {
    match split_type(cg.d, p) {
        SplitType::Ramified => Err(LfunError::Ramified(p)),
        SplitType::Inert => Ok(vec![KPrime {
            p,
            norm: p * p,
            conjugate: false,
            class: cg.identity,
        }]),
        SplitType::Split => {
            let c = cg.prime_class(p)?;
            Ok(vec![
                KPrime {
                    p,
                    norm: p,
                    conjugate: false,
                    class: c,
                },
                KPrime {
                    p,
                    norm: p,
                    conjugate: true,
                    class: cg.inverse[c],
                },
            ])
        }
    }
}

/// `1 + c_1 X + ... + c_n X^n` with `X = N^(-s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerFactor {
    pub norm: u64,
    pub coeffs: Vec<Elem>,
}

impl EulerFactor {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.coeffs[0].ring()
    }

    pub fn mul(&self, other: &EulerFactor) -> EulerFactor {
        let ring = self.ring();
        let mut out = vec![Elem::zero(ring); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        EulerFactor {
            norm: self.norm,
            coeffs: out,
        }
    }

    /// Coefficientwise difference, padded with zeros.
    pub fn discrepancy(&self, other: &EulerFactor) -> Vec<Elem> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Elem::zero(self.ring());
        (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero))
            .collect()
    }

    pub fn conj(&self) -> EulerFactor {
        EulerFactor {
            norm: self.norm,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }
}

impl fmt::Display for EulerFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| format!("[{c}]")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `(E1, E2)` of the local Satake pair at a prime of `K`, in `ring`.
fn local_pair(f: &NewformData, kp: &KPrime, ring: &Arc<Ring>) -> Result<(Elem, Elem), LfunError> {
    let e1 = f.a_p(kp.p)?.embed(ring)?;
    let e2 = Elem::from_int(ring, f.hecke_const(kp.p));
    if kp.norm == kp.p {
        Ok((e1, e2))
    } else {
        let two = BigInt::from(2);
        Ok((&(&e1 * &e1) - &e2.scale_int(&two), &e2 * &e2))
    }
}

/// `chi(P)` as a ring element: `zeta^e` at the chosen prime, `zeta^-e` at its conjugate.
pub fn chi_value(chi: &ClassChar, kp: &KPrime, ring: &Arc<Ring>) -> Elem {
    Elem::zeta_pow(ring, chi.exponent(kp.class) as i64)
}

fn coeff_ring(f: &NewformData, chi: &ClassChar) -> Arc<Ring> {
    f.ring.with_cyclotomic(chi.order)
}

/// Base-change factor at `kp` twisted by `chi`, with `s -> s - shift`
/// realized as `X -> N^shift X`.
pub fn bc_factor(f: &NewformData, kp: &KPrime, chi: &ClassChar, shift: i64) -> Result<EulerFactor, LfunError> {
    if split_type(f.d, kp.p) == SplitType::Ramified {
        return Err(LfunError::Ramified(kp.p));
    }
    let ring = coeff_ring(f, chi);
    let (e1, e2) = local_pair(f, kp, &ring)?;
    let t = chi_value(chi, kp, &ring);
    let s1 = rat_pow(kp.norm, shift);
    let s2 = rat_pow(kp.norm, 2 * shift);
    let c1 = -(&(&t * &e1).scale(&s1));
    let c2 = (&(&t * &t) * &e2).scale(&s2);
    Ok(EulerFactor {
        norm: kp.norm,
        coeffs: vec![Elem::one(&ring), c1, c2],
    })
}

/// Product of the base-change factors over all primes above `p`, in `X = p^(-s)`
/// (degree 4 for split `p`; for inert `p` the variable is `p^(-2s)`).
pub fn bc_factor_over_p(f: &NewformData, cg: &ClassGroup, p: u64, chi: &ClassChar, shift: i64) -> Result<EulerFactor, LfunError> {
    let mut out: Option<EulerFactor> = None;
    for kp in primes_above_k(cg, p)? {
        let b = bc_factor(f, &kp, chi, shift)?;
        out = Some(match out {
            None => b,
            Some(a) => a.mul(&b),
        });
    }
    Ok(out.expect("at least one prime"))
}

/// Degree-4 standard factor of the lift at `kp`: eigenvalue multiset
/// `u {x1, x2, N x1, N x2}` with `u = chi(P) N^(2-k/2)`, expanded in `E1, E2`.
pub fn std_factor_lift(f: &NewformData, kp: &KPrime, chi: &ClassChar) -> Result<EulerFactor, LfunError> {
    if split_type(f.d, kp.p) == SplitType::Ramified {
        return Err(LfunError::Ramified(kp.p));
    }
    let ring = coeff_ring(f, chi);
    let (e1, e2) = local_pair(f, kp, &ring)?;
    let n = BigInt::from(kp.norm);
    let n2 = &n * &n;
    let one_n = BigInt::from(1u64 + kp.norm);
    // elementary symmetric functions of {x1, x2, N x1, N x2}
    let s1 = e1.scale_int(&one_n);
    let s2 = &e2.scale_int(&(BigInt::from(1) + &n2)) + &(&e1 * &e1).scale_int(&n);
    let s3 = (&e1 * &e2).scale_int(&(&n * &one_n));
    let s4 = (&e2 * &e2).scale_int(&n2);
    let u = chi_value(chi, kp, &ring).scale(&rat_pow(kp.norm, 2 - f.k as i64 / 2));
    let mut coeffs = vec![Elem::one(&ring)];
    let mut upow = Elem::one(&ring);
    for (i, s) in [s1, s2, s3, s4].iter().enumerate() {
        upow = &upow * &u;
        let term = s * &upow;
        coeffs.push(if i % 2 == 0 { -term } else { term });
    }
    Ok(EulerFactor {
        norm: kp.norm,
        coeffs,
    })
}

/// Result of comparing the standard factor with the product of two shifted
/// base-change factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductCheck {
    pub prime: KPrime,
    pub ok: bool,
    pub standard: EulerFactor,
    pub product: EulerFactor,
    pub discrepancy: Vec<Elem>,
}

/// Compare `std_factor_lift` with `bc(shift1) * bc(shift2)`.
pub fn verify_with_shifts(
    f: &NewformData,
    kp: &KPrime,
    chi: &ClassChar,
    shift1: i64,
    shift2: i64,
) -> Result<ProductCheck, LfunError> {
    let standard = std_factor_lift(f, kp, chi)?;
    let product = bc_factor(f, kp, chi, shift1)?.mul(&bc_factor(f, kp, chi, shift2)?);
    let discrepancy = standard.discrepancy(&product);
    Ok(ProductCheck {
        prime: *kp,
        ok: discrepancy.iter().all(|c| c.is_zero()),
        standard,
        product,
        discrepancy,
    })
}

/// The standard factor equals `L(BC, s - 2 + k/2) L(BC, s - 3 + k/2)` locally,
/// i.e. shifts `2 - k/2` and `3 - k/2`.
pub fn verify_factorization(f: &NewformData, kp: &KPrime, chi: &ClassChar) -> Result<ProductCheck, LfunError> {
    let h = f.k as i64 / 2;
    verify_with_shifts(f, kp, chi, 2 - h, 3 - h)
}

/// Run [`verify_factorization`] at every prime of `K` above every `p < bound`, `p != D_K`.
pub fn verify_factorization_upto(
    f: &NewformData,
    cg: &ClassGroup,
    chi: &ClassChar,
    bound: u64,
) -> Result<Vec<ProductCheck>, LfunError> {
    let mut out = Vec::new();
    for p in crate::arith::primes_upto(bound.saturating_sub(1)) {
        if p == f.d as u64 {
            continue;
        }
        for kp in primes_above_k(cg, p)? {
            out.push(verify_factorization(f, &kp, chi)?);
        }
    }
    Ok(out)
}

/// `N^e` as an exact rational, exposed for callers that format factors.
pub fn norm_power(norm: u64, e: i64) -> BigRational {
    rat_pow(norm, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{bundled_cm_form, rho_conjugate, synthetic_newform};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ints(e: &EulerFactor) -> Vec<String> {
        e.coeffs.iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn inert_zero_ap() {
        // D = 7, k = 8, p = 3 inert, a(3) = 0: (1 - 3^6 X)^2
        let mut f = bundled_cm_form();
        f.k = 8;
        let cg = ClassGroup::new(7).unwrap();
        let kp = primes_above_k(&cg, 3).unwrap()[0];
        let b = bc_factor(&f, &kp, &ClassChar::trivial(1), 0).unwrap();
        assert_eq!(ints(&b), ["1", "-1458", "531441"]);
        let b1 = bc_factor(&f, &kp, &ClassChar::trivial(1), 1).unwrap();
        assert_eq!(ints(&b1), ["1", &(-1458 * 9).to_string(), &(531441 * 81).to_string()]);
    }

    #[test]
    fn cm_form_product() {
        let f = bundled_cm_form();
        let cg = ClassGroup::new(7).unwrap();
        let chi = ClassChar::trivial(1);
        for p in [2u64, 3, 5] {
            for kp in primes_above_k(&cg, p).unwrap() {
                assert!(verify_factorization(&f, &kp, &chi).unwrap().ok);
                let h = f.k as i64 / 2;
                assert!(!verify_with_shifts(&f, &kp, &chi, 2 - h, 2 - h).unwrap().ok);
            }
        }
        assert!(primes_above_k(&cg, 7).is_err());
    }

    #[test]
    fn twisted_product_and_symmetry() {
        let cg = ClassGroup::new(23).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let f = synthetic_newform(&Ring::gaussian(), 23, 8, 50, 30, &mut rng).unwrap();
        let fr = rho_conjugate(&f).unwrap();
        for chi in cg.characters().unwrap() {
            for check in verify_factorization_upto(&f, &cg, &chi, 50).unwrap() {
                assert!(check.ok, "{}", check.prime);
                let a = std_factor_lift(&f, &check.prime, &chi).unwrap();
                let b = std_factor_lift(&fr, &check.prime, &chi.inverse()).unwrap();
                assert_eq!(b, a.conj());
            }
            let both = bc_factor_over_p(&f, &cg, 2, &chi, 0).unwrap();
            assert_eq!(both.degree(), 4);
        }
        let triv = ClassChar::trivial(3);
        let ps = primes_above_k(&cg, 2).unwrap();
        let x = bc_factor(&f, &ps[0], &triv, 0).unwrap().mul(&bc_factor(&f, &ps[1], &triv, 0).unwrap());
        let y = bc_factor(&f, &ps[1], &triv, 0).unwrap().mul(&bc_factor(&f, &ps[0], &triv, 0).unwrap());
        assert_eq!(x, y);
    }
}
