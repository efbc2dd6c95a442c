//! The Maass lift: `a_K(n)`, the generating function `alpha` of a newform,
//! lift tables satisfying the Krieg divisor-sum condition, the membership
//! test, descent to `q`-expansions, and the table file format.
//!
//! Normalization: the descent multiplies by `a_K(n)` instead of
//! `i a_K(n) / sqrt(D_K)`. The dropped unit is global, so every identity and
//! congruence computed here is unaffected.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::arith::{divisors, int_pow};
use crate::elliptic::{antisymmetrize, EllipticError, NewformData, QExpansion};
use crate::hermitian::{enumerate, HermPoint};
use crate::quadfield::{ClassChar, FieldError, FieldParams, QuadInt};
use crate::ring::{Elem, Involution, Ring, RingError};

/// Note recorded in every table file.
pub const NORMALIZATION_NOTE: &str = "unit i/sqrt(-D_K) dropped";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MaassError {
    #[error("{what}: need {need}, have {have}")]
    Range { what: &'static str, need: i64, have: i64 },
    #[error("input not in the Krieg image: a_K({0}) = 0 but (phi - phi^rho)({0}) != 0")]
    NotInKriegImage(u64),
    #[error("point {0} lies outside the table bounds")]
    OutOfBounds(HermPoint),
    #[error("table is not a Maass form: divisor-sum condition fails at {0}")]
    NotMaass(HermPoint),
    #[error("determinant {0} is not represented by a primitive point in range")]
    Unconstrained(u64),
    #[error("character has {have} values but the class group has order {need}")]
    CharacterSize { need: usize, have: usize },
    #[error("table line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `#{x mod D : x^2 = -n mod D}`: the number of `beta` in `O_K / sqrt(-D)`
/// with `D N(beta) = -n` modulo `D`.
pub fn a_k(d: i64, n: u64) -> u32 {
    let r = (n % d as u64) as i64;
    (0..d).filter(|x| (x * x + r) % d == 0).count() as u32
}

/// Table bounds: `det_scaled <= det` and `t1, t3 <= diag`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub det: i64,
    pub diag: i64,
}

impl Bounds {
    pub fn new(det: i64, diag: i64) -> Bounds {
        Bounds { det, diag }
    }

    pub fn contains(&self, h: &HermPoint, d: i64) -> bool {
        h.t1 <= self.diag && h.t3 <= self.diag && h.det_scaled(d) <= self.det
    }
}

/// Anything that can produce Fourier coefficients `c(h)` of one classical component.
pub trait CoeffSource {
    fn d(&self) -> i64;
    fn k(&self) -> u32;
    fn ring(&self) -> &Arc<Ring>;
    fn coeff(&self, h: &HermPoint) -> Result<Cow<'_, Elem>, MaassError>;
}

/// A finite table of coefficients with honest bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    pub d: i64,
    pub k: u32,
    pub ring: Arc<Ring>,
    pub chi: ClassChar,
    pub bounds: Bounds,
    pub entries: HashMap<HermPoint, Elem>,
}

impl CoeffTable {
    /// Evaluate `src` at every lattice point within `bounds`.
    pub fn from_source(src: &dyn CoeffSource, chi: &ClassChar, bounds: Bounds) -> Result<CoeffTable, MaassError> {
        let points = enumerate(src.d(), bounds.det, bounds.diag);
        CoeffTable::from_points(src, chi, bounds, &points)
    }

    /// Evaluate `src` on the given points only; `bounds` is recorded as is.
    pub fn from_points(
        src: &dyn CoeffSource,
        chi: &ClassChar,
        bounds: Bounds,
        points: &[HermPoint],
    ) -> Result<CoeffTable, MaassError> {
        let mut entries = HashMap::with_capacity(points.len());
        for h in points {
            entries.insert(*h, src.coeff(h)?.into_owned());
        }
        Ok(CoeffTable {
            d: src.d(),
            k: src.k(),
            ring: src.ring().clone(),
            chi: chi.clone(),
            bounds,
            entries,
        })
    }

    /// Points in canonical order.
    pub fn points(&self) -> Vec<HermPoint> {
        let mut pts: Vec<HermPoint> = self.entries.keys().copied().collect();
        pts.sort_by(|a, b| a.canonical_cmp(b, self.d));
        pts
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, h: &HermPoint) -> Option<&Elem> {
        self.entries.get(h)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| v.is_zero())
    }

    pub fn map(&self, f: impl Fn(&Elem) -> Elem) -> CoeffTable {
        CoeffTable {
            entries: self.entries.iter().map(|(h, v)| (*h, f(v))).collect(),
            ..self.clone()
        }
    }

    /// The table file text: header, then `t1 t3 wa wb numerators / denominator`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "hermlift-table v1");
        let _ = writeln!(s, "field {}", self.d);
        let _ = writeln!(s, "k {}", self.k);
        let m: Vec<String> = self.ring.modulus().iter().map(|c| c.to_string()).collect();
        let _ = writeln!(s, "ring {}", m.join(" "));
        let _ = writeln!(s, "involution {}", self.ring.involution().name());
        let _ = writeln!(s, "cyclotomic {}", self.ring.cyclotomic_order());
        let ex: Vec<String> = self.chi.exponents.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(s, "chi {} {}", self.chi.order, ex.join(" "));
        let _ = writeln!(s, "bounds {} {}", self.bounds.det, self.bounds.diag);
        let _ = writeln!(s, "note {NORMALIZATION_NOTE}");
        let _ = writeln!(s, "data");
        for h in self.points() {
            let v = &self.entries[&h];
            let nums: Vec<String> = v.numerators().iter().map(|c| c.to_string()).collect();
            let _ = writeln!(
                s,
                "{} {} {} {} {} / {}",
                h.t1,
                h.t3,
                h.w.a,
                h.w.b,
                nums.join(" "),
                v.denominator()
            );
        }
        s
    }

    pub fn parse(text: &str) -> Result<CoeffTable, MaassError> {
        let perr = |line: usize, msg: &str| MaassError::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let mut header: HashMap<&str, (usize, &str)> = HashMap::new();
        match lines.next() {
            Some((_, "hermlift-table v1")) => {}
            _ => return Err(perr(1, "missing `hermlift-table v1` header")),
        }
        for (no, line) in lines.by_ref() {
            if line == "data" {
                break;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            header.insert(key, (no, rest.trim()));
        }
        let get = |key: &'static str| header.get(key).copied().ok_or_else(|| perr(0, &format!("missing `{key}`")));
        let int = |key: &'static str| -> Result<i64, MaassError> {
            let (no, v) = get(key)?;
            v.parse().map_err(|_| perr(no, &format!("bad `{key}`")))
        };
        let d = int("field")?;
        let k = int("k")? as u32;
        FieldParams::new(d, k)?;
        let (no, m) = get("ring")?;
        let modulus = m
            .split_whitespace()
            .map(|t| t.parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| perr(no, "bad ring"))?;
        let (no, inv) = get("involution")?;
        let inv = Involution::parse(inv).ok_or_else(|| perr(no, "bad involution"))?;
        let cyc = int("cyclotomic")? as u32;
        let ring = Ring::new(modulus, inv)?.with_cyclotomic(cyc.max(1));
        let (no, c) = get("chi")?;
        let nums = c
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| perr(no, "bad chi"))?;
        if nums.is_empty() || nums[0] == 0 || nums[1..].iter().any(|&e| e >= nums[0]) {
            return Err(perr(no, "bad chi"));
        }
        let chi = ClassChar {
            order: nums[0],
            exponents: nums[1..].to_vec(),
        };
        let (no, b) = get("bounds")?;
        let bs: Vec<i64> = b
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| perr(no, "bad bounds"))?;
        if bs.len() != 2 {
            return Err(perr(no, "bad bounds"));
        }
        let bounds = Bounds::new(bs[0], bs[1]);
        let dim = ring.dim();
        let mut entries = HashMap::new();
        for (no, line) in lines {
            if line.is_empty() {
                continue;
            }
            let (lhs, den) = line.split_once('/').ok_or_else(|| perr(no, "missing `/`"))?;
            let toks: Vec<BigInt> = lhs
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<Result<_, _>>()
                .map_err(|_| perr(no, "bad integer"))?;
            let den: BigInt = den.trim().parse().map_err(|_| perr(no, "bad denominator"))?;
            if toks.len() != 4 + dim || den.is_zero() {
                return Err(perr(no, "wrong number of fields"));
            }
            let small = |i: usize| -> Result<i64, MaassError> {
                i64::try_from(&toks[i]).map_err(|_| perr(no, "index too large"))
            };
            let h = HermPoint::new(small(0)?, small(1)?, QuadInt::new(small(2)?, small(3)?));
            if !h.is_psd(d) || !bounds.contains(&h, d) {
                return Err(perr(no, "point outside bounds"));
            }
            let coords: Vec<_> = toks[4..]
                .iter()
                .map(|n| num_rational::BigRational::new(n.clone(), den.clone()))
                .collect();
            let v = Elem::from_coords(&ring, &coords)?;
            if entries.insert(h, v).is_some() {
                return Err(perr(no, "duplicate point"));
            }
        }
        Ok(CoeffTable {
            d,
            k,
            ring,
            chi,
            bounds,
            entries,
        })
    }
}

impl CoeffSource for CoeffTable {
    fn d(&self) -> i64 {
        self.d
    }
    fn k(&self) -> u32 {
        self.k
    }
    fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }
    fn coeff(&self, h: &HermPoint) -> Result<Cow<'_, Elem>, MaassError> {
        if !self.bounds.contains(h, self.d) {
            return Err(MaassError::OutOfBounds(*h));
        }
        Ok(match self.entries.get(h) {
            Some(v) => Cow::Borrowed(v),
            None => Cow::Owned(Elem::zero(&self.ring)),
        })
    }
}

/// The one-variable function `alpha(n)`, `0 <= n <= n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alpha {
    pub d: i64,
    pub k: u32,
    pub values: Vec<Elem>,
}

impl Alpha {
    pub fn zero(ring: &Arc<Ring>, d: i64, k: u32, n_max: usize) -> Alpha {
        Alpha {
            d,
            k,
            values: vec![Elem::zero(ring); n_max + 1],
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.values[0].ring()
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: i64) -> Result<&Elem, MaassError> {
        if n < 0 || n as usize > self.n_max() {
            return Err(MaassError::Range {
                what: "alpha index",
                need: n,
                have: self.n_max() as i64,
            });
        }
        Ok(&self.values[n as usize])
    }

    pub fn embed(&self, ring: &Arc<Ring>) -> Result<Alpha, MaassError> {
        Ok(Alpha {
            d: self.d,
            k: self.k,
            values: self.values.iter().map(|v| v.embed(ring)).collect::<Result<_, _>>()?,
        })
    }

    pub fn add(&self, other: &Alpha) -> Result<Alpha, MaassError> {
        let n = self.n_max().min(other.n_max());
        Ok(Alpha {
            d: self.d,
            k: self.k,
            values: (0..=n)
                .map(|i| self.values[i].try_add(&other.values[i]))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn scale(&self, c: &Elem) -> Result<Alpha, MaassError> {
        Ok(Alpha {
            d: self.d,
            k: self.k,
            values: self.values.iter().map(|v| v.try_mul(c)).collect::<Result<_, _>>()?,
        })
    }
}

/// `alpha(n) = (phi - phi^rho)(n) / a_K(n)`, zero where `a_K(n) = 0`.
pub fn alpha_from_newform(f: &NewformData, n_max: usize) -> Result<Alpha, MaassError> {
    let anti = antisymmetrize(f, n_max)?;
    let mut out = Alpha::zero(&f.ring, f.d, f.k, n_max);
    for n in 1..=n_max {
        let v = anti.get(n);
        match a_k(f.d, n as u64) {
            0 if !v.is_zero() => return Err(MaassError::NotInKriegImage(n as u64)),
            0 => {}
            1 => out.values[n] = v.clone(),
            c => out.values[n] = v.scale(&num_rational::BigRational::new(BigInt::one(), BigInt::from(c))),
        }
    }
    Ok(out)
}

/// Random `alpha` supported where `a_K(n) > 0`, with integer coordinates in `[-bound, bound]`.
pub fn random_alpha<R: Rng>(ring: &Arc<Ring>, d: i64, k: u32, n_max: usize, bound: i64, rng: &mut R) -> Alpha {
    let mut out = Alpha::zero(ring, d, k, n_max);
    for n in 1..=n_max {
        if a_k(d, n as u64) > 0 {
            let coords: Vec<i64> = (0..ring.degree()).map(|_| rng.gen_range(-bound..=bound)).collect();
            out.values[n] = Elem::from_int_coords(ring, &coords).expect("degree-length coordinates");
        }
    }
    out
}

/// Divisor sum `sum_{d | e} d^(k-1) alpha(D / d^2)` with `e` the content.
pub fn krieg_sum<'a>(alpha: &'a Alpha, h: &HermPoint) -> Result<Cow<'a, Elem>, MaassError> {
    if h.is_zero() {
        return Ok(Cow::Owned(Elem::zero(alpha.ring())));
    }
    let det = h.det_scaled(alpha.d);
    let e = h.content().expect("nonzero point") as u64;
    if e == 1 {
        return Ok(Cow::Borrowed(alpha.get(det)?));
    }
    let mut acc = crate::ring::Acc::new(alpha.ring());
    for dv in divisors(e) {
        let n = det / (dv * dv) as i64;
        let v = alpha.get(n)?;
        if v.is_zero() {
            continue;
        }
        acc.add_scaled(v, &int_pow(dv, alpha.k - 1));
    }
    Ok(Cow::Owned(acc.finish()))
}

/// A Maass lift: the identity component is the divisor sum of `alpha`; the
/// component at class `b` is `chi(b)` times it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaassTuple {
    pub params: FieldParams,
    pub chi: ClassChar,
    /// Values in the coefficient ring tensored with `Q(zeta_order(chi))`.
    pub alpha: Alpha,
    pub label: String,
}

impl MaassTuple {
    pub fn from_alpha(alpha: &Alpha, chi: &ClassChar, label: &str) -> Result<MaassTuple, MaassError> {
        let params = FieldParams::new(alpha.d, alpha.k)?;
        let ring = alpha.ring().base().with_cyclotomic(chi.order);
        Ok(MaassTuple {
            params,
            chi: chi.clone(),
            alpha: alpha.embed(&ring)?,
            label: label.to_string(),
        })
    }

    pub fn h(&self) -> usize {
        self.chi.exponents.len()
    }

    /// The coefficient of component `b` at `h`.
    pub fn component_coeff(&self, b: usize, h: &HermPoint) -> Result<Elem, MaassError> {
        let c = krieg_sum(&self.alpha, h)?;
        Ok(c.as_ref() * &Elem::zeta_pow(self.ring(), self.chi.exponent(b) as i64))
    }

    /// Identity component materialized within `bounds`.
    pub fn table(&self, bounds: Bounds) -> Result<CoeffTable, MaassError> {
        CoeffTable::from_source(self, &self.chi, bounds)
    }

    pub fn component_table(&self, b: usize, bounds: Bounds) -> Result<CoeffTable, MaassError> {
        let z = Elem::zeta_pow(self.ring(), self.chi.exponent(b) as i64);
        Ok(self.table(bounds)?.map(|v| v * &z))
    }
}

impl CoeffSource for MaassTuple {
    fn d(&self) -> i64 {
        self.params.d
    }
    fn k(&self) -> u32 {
        self.params.k
    }
    fn ring(&self) -> &Arc<Ring> {
        self.alpha.ring()
    }
    fn coeff(&self, h: &HermPoint) -> Result<Cow<'_, Elem>, MaassError> {
        krieg_sum(&self.alpha, h)
    }
}

/// Lift `f` twisted by `chi`, with `alpha` known up to `n_max`.
pub fn build_lift(f: &NewformData, chi: &ClassChar, n_max: usize) -> Result<MaassTuple, MaassError> {
    let alpha = alpha_from_newform(f, n_max)?;
    MaassTuple::from_alpha(&alpha, chi, &f.label)
}

/// Outcome of the membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaassCheck {
    pub is_maass: bool,
    /// Values of `alpha` read off primitive points.
    pub alpha: BTreeMap<u64, Elem>,
    /// Determinants up to the bound that some primitive point has
    /// (`a_K(n) > 0`) but no primitive point of the table does.
    pub unconstrained: Vec<u64>,
    /// First violating point in canonical order.
    pub witness: Option<HermPoint>,
    /// Points whose divisor sum needed an unconstrained value.
    pub skipped: usize,
}

/// Test the divisor-sum condition on every point of the table.
pub fn check_maass(t: &CoeffTable) -> MaassCheck {
    let d = t.d;
    let points = t.points();
    let mut alpha: BTreeMap<u64, Elem> = BTreeMap::new();
    for h in &points {
        if !h.is_zero() && h.content() == Ok(1) {
            alpha.entry(h.det_scaled(d) as u64).or_insert_with(|| t.entries[h].clone());
        }
    }
    let unconstrained = (0..=t.bounds.det.max(0) as u64)
        .filter(|&n| a_k(d, n) > 0 && !alpha.contains_key(&n))
        .collect();
    let mut skipped = 0;
    let mut witness = None;
    'points: for h in &points {
        let v = &t.entries[h];
        if h.is_zero() {
            if !v.is_zero() {
                witness = Some(*h);
                break;
            }
            continue;
        }
        let det = h.det_scaled(d);
        let e = h.content().unwrap() as u64;
        let mut acc = crate::ring::Acc::new(&t.ring);
        for dv in divisors(e) {
            let n = (det / (dv * dv) as i64) as u64;
            match alpha.get(&n) {
                Some(a) => acc.add_scaled(a, &int_pow(dv, t.k - 1)),
                None => {
                    skipped += 1;
                    continue 'points;
                }
            }
        }
        if acc.finish() != *v {
            witness = Some(*h);
            break;
        }
    }
    MaassCheck {
        is_maass: witness.is_none(),
        alpha,
        unconstrained,
        witness,
        skipped,
    }
}

/// `a(n) = a_K(n) chi(b) alpha(n)` for each class `b`, `n <= n_max`.
pub fn descend_alpha(alpha: &Alpha, chi: &ClassChar, n_max: usize) -> Result<Vec<QExpansion>, MaassError> {
    if n_max > alpha.n_max() {
        return Err(MaassError::Range {
            what: "descent range",
            need: n_max as i64,
            have: alpha.n_max() as i64,
        });
    }
    let ring = alpha.ring().base().with_cyclotomic(chi.order);
    let base = alpha.embed(&ring)?;
    let mut identity = QExpansion::zero(&ring, alpha.d, alpha.k, n_max);
    for n in 1..=n_max {
        let c = a_k(alpha.d, n as u64);
        if c > 0 {
            identity.coeffs[n] = base.values[n].scale_int(&BigInt::from(c));
        }
    }
    chi.exponents
        .iter()
        .map(|&e| Ok(identity.scale(&Elem::zeta_pow(&ring, e as i64))?))
        .collect()
}

/// Descent of a lift, one `q`-expansion per class.
pub fn descend(t: &MaassTuple, n_max: usize) -> Result<Vec<QExpansion>, MaassError> {
    descend_alpha(&t.alpha, &t.chi, n_max)
}

/// Descent of a table that passes the membership test. Every `n <= n_max`
/// with `a_K(n) > 0` must be constrained by a primitive point.
pub fn descend_table(t: &CoeffTable, n_max: usize) -> Result<Vec<QExpansion>, MaassError> {
    let check = check_maass(t);
    if let Some(h) = check.witness {
        return Err(MaassError::NotMaass(h));
    }
    let alpha = alpha_from_check(t, &check, n_max)?;
    descend_alpha(&alpha, &t.chi, n_max)
}

/// Assemble `alpha` from extracted values, requiring every needed index.
pub fn alpha_from_check(t: &CoeffTable, check: &MaassCheck, n_max: usize) -> Result<Alpha, MaassError> {
    let mut alpha = Alpha::zero(&t.ring, t.d, t.k, n_max);
    for n in 1..=n_max {
        match check.alpha.get(&(n as u64)) {
            Some(v) => alpha.values[n] = v.clone(),
            None if a_k(t.d, n as u64) > 0 => return Err(MaassError::Unconstrained(n as u64)),
            None => {}
        }
    }
    Ok(alpha)
}

/// One primitive point for each `n <= n_max` with `a_K(n) > 0`: the first
/// `(1, t3, w)` with `D t3 - N(w) = n` in canonical order.
pub fn representative_points(d: i64, n_max: u64) -> Result<Vec<HermPoint>, MaassError> {
    let mut out = Vec::new();
    for n in 1..=n_max as i64 {
        if a_k(d, n as u64) == 0 {
            continue;
        }
        let mut found = None;
        let mut t3 = (n + d - 1) / d;
        while found.is_none() {
            let target = d * t3 - n;
            let mut cands: Vec<QuadInt> = crate::hermitian::norm_ball(d, target, target);
            cands.sort_by_key(|w| (w.a, w.b));
            found = cands.first().map(|w| HermPoint::new(1, t3, *w));
            t3 += 1;
            if t3 > n + d + 64 {
                return Err(MaassError::Unconstrained(n as u64));
            }
        }
        out.push(found.unwrap());
    }
    out.sort_by(|a, b| a.canonical_cmp(b, d));
    Ok(out)
}

/// The bounds needed to hold `points`.
pub fn bounds_of(points: &[HermPoint], d: i64) -> Bounds {
    let det = points.iter().map(|h| h.det_scaled(d)).max().unwrap_or(0);
    let diag = points.iter().map(|h| h.t1.max(h.t3)).max().unwrap_or(0);
    Bounds::new(det, diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{bundled_cm_form, synthetic_newform};
    use crate::quadfield::ClassGroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn a_k_examples() {
        assert_eq!(a_k(7, 1), 0);
        assert_eq!(a_k(7, 3), 2);
        assert_eq!(a_k(7, 7), 1);
        assert_eq!(a_k(7, 0), 1);
    }

    #[test]
    fn cm_lift_is_zero() {
        let f = bundled_cm_form();
        let t = build_lift(&f, &ClassChar::trivial(1), 100).unwrap();
        assert!(t.alpha.values.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn synthetic_alpha_at_three() {
        let ring = Ring::gaussian();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut f = synthetic_newform(&ring, 7, 8, 60, 5, &mut rng).unwrap();
        f.ap.insert(3, Elem::x(&ring));
        let a = alpha_from_newform(&f, 60).unwrap();
        assert_eq!(a.values[3], Elem::x(&ring));
        for n in 1..=60u64 {
            if n % 7 != 0 && crate::quadfield::chi_k(7, n as i64) == 1 {
                assert!(a.values[n as usize].is_zero());
            }
        }
    }

    #[test]
    fn lift_divisor_sum() {
        let ring = Ring::integers();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let alpha = random_alpha(&ring, 7, 8, 400, 9, &mut rng);
        let t = MaassTuple::from_alpha(&alpha, &ClassChar::trivial(1), "r").unwrap();
        let h = HermPoint::new(2, 4, QuadInt::new(2, 0));
        let det = h.det_scaled(7);
        let expect = &alpha.values[det as usize] + &alpha.values[(det / 4) as usize].scale_int(&BigInt::from(128));
        assert_eq!(*t.coeff(&h).unwrap(), expect);
        assert!(t.coeff(&HermPoint::ZERO).unwrap().is_zero());
    }

    #[test]
    fn check_round_trip_and_fault() {
        let ring = Ring::gaussian();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let alpha = random_alpha(&ring, 7, 8, 300, 9, &mut rng);
        let t = MaassTuple::from_alpha(&alpha, &ClassChar::trivial(1), "r").unwrap();
        let table = t.table(Bounds::new(56, 4)).unwrap();
        let c = check_maass(&table);
        assert!(c.is_maass);
        for (n, v) in &c.alpha {
            assert_eq!(v, &alpha.values[*n as usize]);
        }
        let mut bad = table.clone();
        let h = table
            .points()
            .into_iter()
            .find(|h| h.content() == Ok(2))
            .unwrap();
        let one = Elem::one(&bad.ring);
        *bad.entries.get_mut(&h).unwrap() = &bad.entries[&h] + &one;
        let c = check_maass(&bad);
        assert!(!c.is_maass);
        assert_eq!(c.witness, Some(h));
        let zero = table.map(|v| v - v);
        assert!(check_maass(&zero).is_maass);
    }

    #[test]
    fn table_text_round_trip() {
        let ring = Ring::gaussian();
        let cg = ClassGroup::new(23).unwrap();
        let chi = cg.characters().unwrap()[1].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = synthetic_newform(&ring, 23, 8, 200, 9, &mut rng).unwrap();
        let t = build_lift(&f, &chi, 200).unwrap();
        let table = t.component_table(1, Bounds::new(69, 2)).unwrap();
        let text = table.to_text();
        let back = CoeffTable::parse(&text).unwrap();
        assert_eq!(back, table);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn descend_round_trip() {
        let ring = Ring::gaussian();
        let cg = ClassGroup::new(23).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = synthetic_newform(&ring, 23, 8, 120, 9, &mut rng).unwrap();
        for chi in cg.characters().unwrap() {
            let t = build_lift(&f, &chi, 120).unwrap();
            let comps = descend(&t, 120).unwrap();
            let anti = antisymmetrize(&f, 120).unwrap();
            let target = t.ring().clone();
            for (b, q) in comps.iter().enumerate() {
                let z = Elem::zeta_pow(&target, chi.exponent(b) as i64);
                assert_eq!(q, &anti.embed(&target).unwrap().scale(&z).unwrap());
            }
        }
    }

    #[test]
    fn representatives_cover() {
        let pts = representative_points(23, 200).unwrap();
        for h in &pts {
            assert_eq!(h.content(), Ok(1));
        }
        let t = MaassTuple::from_alpha(
            &random_alpha(&Ring::integers(), 23, 8, 200, 5, &mut ChaCha8Rng::seed_from_u64(1)),
            &ClassChar::trivial(3),
            "r",
        )
        .unwrap();
        let table = CoeffTable::from_points(&t, &t.chi, bounds_of(&pts, 23), &pts).unwrap();
        let q = descend_table(&table, 200).unwrap();
        assert_eq!(q, descend(&t, 200).unwrap());
    }
}
