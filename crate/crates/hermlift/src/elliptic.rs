//! Elliptic newforms of level `D_K` and character `chi_K`: ingestion,
//! multiplicative extension, the `rho`-conjugate, `phi - phi^rho` and the
//! classical `T_p` on `q`-expansions.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::arith::{int_pow, is_prime, primes_upto, smallest_prime_factors};
use crate::quadfield::{chi_k, split_type, FieldError, FieldParams, SplitType};
use crate::ring::{Elem, Involution, Ring, RingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EllipticError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("a({p}) violates the conjugation rule a(p) = chi_K(p) conj(a(p))")]
    Conjugation { p: u64 },
    #[error("a(D_K) conj(a(D_K)) differs from D_K^(k-2)")]
    NormRelation,
    #[error("a(D_K) is zero or not invertible")]
    DegenerateADK,
    #[error("missing coefficient a({0})")]
    MissingPrime(u64),
    #[error("need coefficients up to {need}, have {have}")]
    Range { need: usize, have: usize },
    #[error("q-expansions live in different rings or levels")]
    Mismatch,
    #[error("synthetic data needs a ring with the x -> -x involution or the integers")]
    NoImaginaryUnit,
}

/// A normalized newform in `S_{k-1}(D_K, chi_K)`, given by its prime coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewformData {
    pub label: String,
    /// Level and discriminant `D_K`.
    pub d: i64,
    /// The hermitian weight; the elliptic weight is `k - 1`.
    pub k: u32,
    pub ring: Arc<Ring>,
    pub ap: BTreeMap<u64, Elem>,
    pub a_dk: Elem,
    /// Whether `a(D_K) conj(a(D_K)) = D_K^(k-2)` was checked (true whenever
    /// the declared involution is known to be complex conjugation).
    pub norm_checked: bool,
}

impl NewformData {
    /// Largest `P` with every prime `<= P` present.
    pub fn p_max(&self) -> u64 {
        let mut last = 1;
        for p in primes_upto(self.ap.keys().copied().max().unwrap_or(1).max(self.d as u64)) {
            let have = if p == self.d as u64 {
                true
            } else {
                self.ap.contains_key(&p)
            };
            if !have {
                break;
            }
            last = p;
        }
        last
    }

    pub fn a_p(&self, p: u64) -> Result<&Elem, EllipticError> {
        if p == self.d as u64 {
            return Ok(&self.a_dk);
        }
        self.ap.get(&p).ok_or(EllipticError::MissingPrime(p))
    }

    /// `chi_K(p) p^(k-2)`, the constant term of the Hecke polynomial.
    pub fn hecke_const(&self, p: u64) -> BigInt {
        BigInt::from(chi_k(self.d, p as i64)) * int_pow(p, self.k - 2)
    }

    /// Check the conjugation rule at every stored prime and the norm relation at `D_K`.
    pub fn validate(&mut self) -> Result<(), EllipticError> {
        FieldParams::new(self.d, self.k)?;
        for (&p, a) in &self.ap {
            if !is_prime(p) || p == self.d as u64 {
                return Err(EllipticError::Conjugation { p });
            }
            let c = a.conj();
            let ok = match split_type(self.d, p) {
                SplitType::Split => c == *a,
                SplitType::Inert => c == -a,
                SplitType::Ramified => false,
            };
            if !ok {
                return Err(EllipticError::Conjugation { p });
            }
        }
        // With a trivial involution on a ring of degree > 1 the declared map
        // need not be complex conjugation; the relation is then assumed.
        self.norm_checked = self.ring.involution() == Involution::NegateX || self.ring.degree() == 1;
        if self.norm_checked {
            let n = &self.a_dk * &self.a_dk.conj();
            let target = Elem::from_int(&self.ring, int_pow(self.d as u64, self.k - 2));
            if n != target {
                return Err(EllipticError::NormRelation);
            }
        }
        Ok(())
    }

    /// Serialize in the newform file format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if !self.label.is_empty() {
            let _ = writeln!(s, "label {}", self.label);
        }
        let _ = writeln!(s, "field {}", self.d);
        let _ = writeln!(s, "weight {}", self.k - 1);
        let m: Vec<String> = self.ring.modulus().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(s, "ring {}", m.join(" "));
        let _ = writeln!(s, "involution {}", self.ring.involution().name());
        let _ = writeln!(s, "aDK {}", self.a_dk);
        for (p, a) in &self.ap {
            let _ = writeln!(s, "ap {p} {a}");
        }
        s
    }
}

fn perr(line: usize, msg: impl Into<String>) -> EllipticError {
    EllipticError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parse the line format `field`, `weight`, `ring`, `involution`, `aDK`, `ap`,
/// optional `label`; `#` starts a comment.
pub fn parse_newform(text: &str) -> Result<NewformData, EllipticError> {
    let mut label = String::new();
    let mut d = None;
    let mut weight = None;
    let mut modulus: Option<Vec<BigInt>> = None;
    let mut involution = None;
    let mut adk_text = None;
    let mut ap_text: Vec<(usize, u64, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "label" => label = rest.to_string(),
            "field" => d = Some(rest.parse::<i64>().map_err(|_| perr(line_no, "bad discriminant"))?),
            "weight" => {
                weight = Some(rest.parse::<u32>().map_err(|_| perr(line_no, "bad weight"))?)
            }
            "ring" => {
                let coeffs = rest
                    .split_whitespace()
                    .map(|t| t.parse::<BigInt>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| perr(line_no, "bad ring modulus"))?;
                modulus = Some(coeffs);
            }
            "involution" => {
                involution = Some(Involution::parse(rest).ok_or_else(|| perr(line_no, "unknown involution"))?)
            }
            "aDK" => adk_text = Some((line_no, rest.to_string())),
            "ap" => {
                let (p, coords) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let p = p.parse::<u64>().map_err(|_| perr(line_no, "bad prime"))?;
                if !is_prime(p) {
                    return Err(perr(line_no, format!("{p} is not prime")));
                }
                ap_text.push((line_no, p, coords.trim().to_string()));
            }
            other => return Err(perr(line_no, format!("unknown key `{other}`"))),
        }
    }
    let d = d.ok_or_else(|| perr(0, "missing `field`"))?;
    let weight = weight.ok_or_else(|| perr(0, "missing `weight`"))?;
    let modulus = modulus.unwrap_or_else(|| vec![BigInt::from(0), BigInt::from(1)]);
    let ring = Ring::new(modulus, involution.unwrap_or(Involution::Trivial))?;
    let (adk_line, adk) = adk_text.ok_or_else(|| perr(0, "missing `aDK`"))?;
    let a_dk = Elem::parse(&ring, &adk).map_err(|e| perr(adk_line, e.to_string()))?;
    let mut ap = BTreeMap::new();
    for (line_no, p, coords) in ap_text {
        let a = Elem::parse(&ring, &coords).map_err(|e| perr(line_no, e.to_string()))?;
        if ap.insert(p, a).is_some() {
            return Err(perr(line_no, format!("duplicate prime {p}")));
        }
    }
    let mut f = NewformData {
        label,
        d,
        k: weight + 1,
        ring,
        ap,
        a_dk,
        norm_checked: false,
    };
    f.validate()?;
    Ok(f)
}

/// The bundled CM form of weight 3 and level 7 (`k = 4`), coefficients to 500.
pub fn bundled_cm_form() -> NewformData {
    parse_newform(include_str!("../data/cm7_k4.txt")).expect("bundled data parses")
}

/// A finite `q`-expansion `sum_{n <= n_max} a(n) q^n` with `a(0)` stored at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    pub d: i64,
    pub k: u32,
    pub coeffs: Vec<Elem>,
}

impl QExpansion {
    pub fn zero(ring: &Arc<Ring>, d: i64, k: u32, n_max: usize) -> QExpansion {
        QExpansion {
            d,
            k,
            coeffs: vec![Elem::zero(ring); n_max + 1],
        }
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.coeffs[0].ring()
    }

    pub fn get(&self, n: usize) -> &Elem {
        &self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, n_max: usize) -> QExpansion {
        QExpansion {
            d: self.d,
            k: self.k,
            coeffs: self.coeffs[..=n_max.min(self.n_max())].to_vec(),
        }
    }

    fn zip_with(&self, other: &QExpansion, f: impl Fn(&Elem, &Elem) -> Result<Elem, RingError>) -> Result<QExpansion, EllipticError> {
        if self.d != other.d || self.k != other.k {
            return Err(EllipticError::Mismatch);
        }
        let n = self.n_max().min(other.n_max());
        let coeffs = (0..=n)
            .map(|i| f(&self.coeffs[i], &other.coeffs[i]))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QExpansion {
            d: self.d,
            k: self.k,
            coeffs,
        })
    }

    pub fn add(&self, other: &QExpansion) -> Result<QExpansion, EllipticError> {
        self.zip_with(other, |a, b| a.try_add(b))
    }

    pub fn sub(&self, other: &QExpansion) -> Result<QExpansion, EllipticError> {
        self.zip_with(other, |a, b| a.try_sub(b))
    }

    pub fn scale(&self, c: &Elem) -> Result<QExpansion, EllipticError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.try_mul(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QExpansion {
            d: self.d,
            k: self.k,
            coeffs,
        })
    }

    pub fn embed(&self, ring: &Arc<Ring>) -> Result<QExpansion, EllipticError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.embed(ring))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QExpansion {
            d: self.d,
            k: self.k,
            coeffs,
        })
    }
}

/// All `a(n)` for `n <= n_max` by multiplicativity and the prime-power recursion.
pub fn extend_coeffs(f: &NewformData, n_max: usize) -> Result<QExpansion, EllipticError> {
    let ring = &f.ring;
    let mut out = QExpansion::zero(ring, f.d, f.k, n_max);
    if n_max >= 1 {
        out.coeffs[1] = Elem::one(ring);
    }
    let spf = smallest_prime_factors(n_max);
    for n in 2..=n_max {
        let p = spf[n];
        let mut m = n;
        let mut r = 0u32;
        while m % p == 0 {
            m /= p;
            r += 1;
        }
        if m > 1 {
            out.coeffs[n] = &out.coeffs[n / m] * &out.coeffs[m];
            continue;
        }
        let ap = f.a_p(p as u64)?.clone();
        out.coeffs[n] = if r == 1 {
            ap
        } else {
            // a(p^r) = a(p) a(p^(r-1)) - chi_K(p) p^(k-2) a(p^(r-2))
            let c = f.hecke_const(p as u64);
            &(&ap * &out.coeffs[n / p]) - &out.coeffs[n / (p * p)].scale_int(&c)
        };
    }
    Ok(out)
}

/// The newform with conjugated coefficients: `conj(a(p)) = chi_K(p) a(p)` and
/// `conj(a(D_K)) = D_K^(k-2) / a(D_K)`.
pub fn rho_conjugate(f: &NewformData) -> Result<NewformData, EllipticError> {
    if f.a_dk.is_zero() {
        return Err(EllipticError::DegenerateADK);
    }
    let top = Elem::from_int(&f.ring, int_pow(f.d as u64, f.k - 2));
    let a_dk = top.try_div(&f.a_dk).map_err(|_| EllipticError::DegenerateADK)?;
    let ap = f
        .ap
        .iter()
        .map(|(&p, a)| {
            let c = if chi_k(f.d, p as i64) == 1 { a.clone() } else { -a };
            (p, c)
        })
        .collect();
    Ok(NewformData {
        label: format!("{}^rho", f.label),
        a_dk,
        ap,
        ..f.clone()
    })
}

/// `phi - phi^rho` up to `n_max`.
pub fn antisymmetrize(f: &NewformData, n_max: usize) -> Result<QExpansion, EllipticError> {
    let a = extend_coeffs(f, n_max)?;
    let b = extend_coeffs(&rho_conjugate(f)?, n_max)?;
    a.sub(&b)
}

/// Classical `T_p`: `a'(n) = a(np) + chi_K(p) p^(k-2) a(n/p)`, valid to `n_max / p`.
pub fn apply_tp(q: &QExpansion, p: u64) -> Result<QExpansion, EllipticError> {
    let p_us = p as usize;
    let n_out = q.n_max() / p_us;
    if n_out == 0 {
        return Err(EllipticError::Range {
            need: p_us,
            have: q.n_max(),
        });
    }
    let c = BigInt::from(chi_k(q.d, p as i64)) * int_pow(p, q.k - 2);
    let mut out = QExpansion::zero(q.ring(), q.d, q.k, n_out);
    for n in 0..=n_out {
        let mut v = q.coeffs[n * p_us].clone();
        if n % p_us == 0 && !c.is_zero() {
            v = &v + &q.coeffs[n / p_us].scale_int(&c);
        }
        out.coeffs[n] = v;
    }
    Ok(out)
}

/// Random newform-shaped data obeying the conjugation rule: integers at split
/// primes, `c * x` at inert primes (zero over `Z`), and `a(D_K) = D_K^((k-2)/2)`.
/// The data need not come from an actual modular form; every identity tested
/// on it is polynomial in the `a(p)`.
pub fn synthetic_newform<R: Rng>(
    ring: &Arc<Ring>,
    d: i64,
    k: u32,
    p_max: u64,
    coeff_bound: i64,
    rng: &mut R,
) -> Result<NewformData, EllipticError> {
    FieldParams::new(d, k)?;
    let imaginary = match (ring.involution(), ring.degree()) {
        (Involution::NegateX, _) => Some(Elem::x(ring)),
        (Involution::Trivial, 1) => None,
        _ => return Err(EllipticError::NoImaginaryUnit),
    };
    let mut ap = BTreeMap::new();
    for p in primes_upto(p_max) {
        if p == d as u64 {
            continue;
        }
        let a = match split_type(d, p) {
            SplitType::Split => Elem::from_int(ring, rng.gen_range(-coeff_bound..=coeff_bound)),
            _ => match &imaginary {
                Some(x) => x.scale_int(&BigInt::from(rng.gen_range(-coeff_bound..=coeff_bound))),
                None => Elem::zero(ring),
            },
        };
        ap.insert(p, a);
    }
    let mut f = NewformData {
        label: "synthetic".to_string(),
        d,
        k,
        ring: ring.clone(),
        ap,
        a_dk: Elem::from_int(ring, int_pow(d as u64, (k - 2) / 2)),
        norm_checked: false,
    };
    f.validate()?;
    Ok(f)
}

/// A copy of `f` with every `a(p)` moved by `modulus` times a random element of
/// the same conjugation type, so the two forms agree modulo `modulus`.
pub fn perturb<R: Rng>(f: &NewformData, modulus: &BigInt, coeff_bound: i64, rng: &mut R) -> NewformData {
    let x = Elem::x(&f.ring);
    let ap = f
        .ap
        .iter()
        .map(|(&p, a)| {
            let c = BigInt::from(rng.gen_range(-coeff_bound..=coeff_bound)) * modulus;
            let delta = match split_type(f.d, p) {
                SplitType::Split => Elem::from_int(&f.ring, c),
                _ if f.ring.involution() == Involution::NegateX => x.scale_int(&c),
                _ => Elem::zero(&f.ring),
            };
            (p, a + &delta)
        })
        .collect();
    NewformData {
        label: format!("{}'", f.label),
        ap,
        ..f.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cm_form_values() {
        let f = bundled_cm_form();
        assert_eq!((f.d, f.k), (7, 4));
        let q = extend_coeffs(&f, 20).unwrap();
        let ints: Vec<_> = (1..=11).map(|n| q.get(n).to_string()).collect();
        assert_eq!(ints, ["1", "-3", "0", "5", "0", "0", "-7", "-3", "9", "0", "-6"]);
        assert_eq!(f.p_max(), 499);
    }

    #[test]
    fn cm_form_is_self_conjugate() {
        let f = bundled_cm_form();
        let r = rho_conjugate(&f).unwrap();
        assert_eq!(r.ap, f.ap);
        assert_eq!(r.a_dk, f.a_dk);
        assert!(antisymmetrize(&f, 100).unwrap().is_zero());
    }

    #[test]
    fn inert_real_coefficient_rejected() {
        let text = "field 7\nweight 3\nring 0 1\ninvolution trivial\naDK -7\nap 2 -3\nap 3 1\n";
        assert_eq!(parse_newform(text), Err(EllipticError::Conjugation { p: 3 }));
    }

    #[test]
    fn empty_coefficients_accepted() {
        let f = parse_newform("field 7\nweight 3\naDK 7\n").unwrap();
        assert_eq!(f.p_max(), 1);
        assert!(f.ap.is_empty());
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse_newform("field 7\nweight x\n").unwrap_err();
        assert!(matches!(err, EllipticError::Parse { line: 2, .. }));
        let err = parse_newform("field 7\nweight 3\naDK 7\nbogus 1\n").unwrap_err();
        assert!(matches!(err, EllipticError::Parse { line: 4, .. }));
        assert!(parse_newform("field 7\nweight 3\naDK 3\n").is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = synthetic_newform(&Ring::gaussian(), 7, 8, 50, 20, &mut rng).unwrap();
        let g = parse_newform(&f.to_text()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn synthetic_antisymmetrization() {
        let ring = Ring::gaussian();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut f = synthetic_newform(&ring, 7, 8, 50, 5, &mut rng).unwrap();
        f.ap.insert(3, Elem::x(&ring));
        let a = antisymmetrize(&f, 50).unwrap();
        assert_eq!(a.get(3), &Elem::x(&ring).scale_int(&BigInt::from(2)));
        assert!(a.get(2).is_zero());
        assert!(a.get(11).is_zero());
    }

    #[test]
    fn tp_examples() {
        let f = bundled_cm_form();
        let q = extend_coeffs(&f, 500).unwrap();
        for p in [2u64, 3, 7, 11] {
            let t = apply_tp(&q, p).unwrap();
            let ap = f.a_p(p).unwrap();
            assert_eq!(t.get(1), ap);
            assert_eq!(t, q.truncate(t.n_max()).scale(ap).unwrap(), "p = {p}");
        }
        let t7 = apply_tp(&q, 7).unwrap();
        for n in 1..=t7.n_max() {
            assert_eq!(t7.get(n), q.get(7 * n));
        }
        assert!(apply_tp(&q.truncate(1), 2).is_err());
    }

    #[test]
    fn double_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = synthetic_newform(&Ring::gaussian(), 23, 12, 100, 50, &mut rng).unwrap();
        let rr = rho_conjugate(&rho_conjugate(&f).unwrap()).unwrap();
        assert_eq!(rr.ap, f.ap);
        assert_eq!(rr.a_dk, f.a_dk);
    }
}
