//! Hermitian Hecke operators at weight `(k, -k/2)`.
//!
//! Inert primes act by the explicit coset sum on arbitrary coefficient
//! sources. With `alpha_a = [[p, a], [0, 1]]` (`a` in `O_K/p`) and
//! `alpha_inf = diag(1, p)`, writing `h_a = alpha_a^* h alpha_a`:
//!
//! ```text
//! T0:  c'(h) = s(h) c(h) + p^(4-k) sum_a c(h_a) + p^k sum_a c(h_a / p^2)
//! T :  c'(h) = p^(4-2k) c(p h) + c(h / p) + p^(1-k) sum_a c(h_a / p)
//! Up = T o T
//! ```
//!
//! where non-integral arguments contribute zero and
//! `s(h) = p - 1`, `-p^2 + p - 1`, `p^3 - p^2 + p - 1` according as
//! `p` does not divide `D det h`, divides it with `eps_p(h) = 0`, or `eps_p(h) > 0`.
//!
//! Split primes act on Maass data through closed forms in `alpha`, twisted by
//! `chi` of the class of the chosen prime above `p`.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{int_pow, rat_pow};
use crate::elliptic::{apply_tp, rho_conjugate, EllipticError, NewformData, QExpansion};
use crate::hermitian::HermPoint;
use crate::maass::{
    a_k, alpha_from_check, bounds_of, check_maass, representative_points, Alpha, Bounds, CoeffSource, CoeffTable,
    MaassError, MaassTuple,
};
use crate::quadfield::{split_type, ClassChar, ClassGroup, FieldError, QuadInt, SplitType};
use crate::ring::{Acc, Elem, Ring, RingError};

use std::sync::Arc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("operator {op} needs a {want} prime, but {p} is {got:?} for D_K = {d}")]
    WrongSplitType {
        op: HeckeOpId,
        want: &'static str,
        p: u64,
        got: SplitType,
        d: i64,
    },
    #[error("cannot parse operator `{0}` (expected T1@p, T2@p, T0@p, T@p, Up@p or Delta@p)")]
    Parse(String),
    #[error("eigenvalue undefined: the form equals its rho-conjugate, so the lift vanishes")]
    DegenerateLift,
    #[error("{0} acts on Maass data only")]
    NeedsLift(HeckeOpId),
    #[error(transparent)]
    Maass(#[from] MaassError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// The operators, each at a prime `p != D_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HeckeOpId {
    SplitT1(u64),
    SplitT2(u64),
    InertT0(u64),
    InertT(u64),
    InertUp(u64),
    DeltaSplit(u64),
}

impl HeckeOpId {
    pub fn prime(&self) -> u64 {
        match *self {
            HeckeOpId::SplitT1(p)
            | HeckeOpId::SplitT2(p)
            | HeckeOpId::InertT0(p)
            | HeckeOpId::InertT(p)
            | HeckeOpId::InertUp(p)
            | HeckeOpId::DeltaSplit(p) => p,
        }
    }

    pub fn is_split(&self) -> bool {
        matches!(self, HeckeOpId::SplitT1(_) | HeckeOpId::SplitT2(_) | HeckeOpId::DeltaSplit(_))
    }

    fn prefix(&self) -> &'static str {
        match self {
            HeckeOpId::SplitT1(_) => "T1",
            HeckeOpId::SplitT2(_) => "T2",
            HeckeOpId::InertT0(_) => "T0",
            HeckeOpId::InertT(_) => "T",
            HeckeOpId::InertUp(_) => "Up",
            HeckeOpId::DeltaSplit(_) => "Delta",
        }
    }

    /// Check the operator kind against the splitting of `p` in `K`.
    pub fn validate(&self, d: i64) -> Result<(), HeckeError> {
        let p = self.prime();
        let got = split_type(d, p);
        let want = if self.is_split() { SplitType::Split } else { SplitType::Inert };
        if got != want {
            return Err(HeckeError::WrongSplitType {
                op: *self,
                want: if self.is_split() { "split" } else { "inert" },
                p,
                got,
                d,
            });
        }
        Ok(())
    }
}

impl fmt::Display for HeckeOpId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.prefix(), self.prime())
    }
}

impl FromStr for HeckeOpId {
    type Err = HeckeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HeckeError::Parse(s.to_string());
        let (kind, p) = s.split_once('@').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        if !crate::arith::is_prime(p) {
            return Err(bad());
        }
        Ok(match kind.trim() {
            "T1" => HeckeOpId::SplitT1(p),
            "T2" => HeckeOpId::SplitT2(p),
            "T0" => HeckeOpId::InertT0(p),
            "T" => HeckeOpId::InertT(p),
            "Up" | "U" => HeckeOpId::InertUp(p),
            "Delta" => HeckeOpId::DeltaSplit(p),
            _ => return Err(bad()),
        })
    }
}

/// Centered representatives of `O_K / p`.
fn residues(p: i64) -> Vec<QuadInt> {
    let lo = -(p - 1) / 2;
    let mut out = Vec::with_capacity((p * p) as usize);
    for x in lo..lo + p {
        for y in lo..lo + p {
            out.push(QuadInt::new(x, y));
        }
    }
    out
}

/// The `p^2 + 1` images `alpha_a^* h alpha_a`, `a` in `P^1(O_K/p)`.
pub fn coset_images(h: &HermPoint, p: i64, d: i64) -> Vec<HermPoint> {
    let s = QuadInt::sqrt_minus_d();
    let mut out = Vec::with_capacity((p * p + 1) as usize);
    for a in residues(p) {
        let t3 = h.t1 * a.norm(d) + h.t3 + a.conj().mul(h.w, d).b;
        let w = h.w.add(s.mul(a, d).scale(h.t1)).scale(p);
        out.push(HermPoint::new(p * p * h.t1, t3, w));
    }
    out.push(HermPoint::new(h.t1, p * p * h.t3, h.w.scale(p)));
    out
}

/// The middle coefficient of `T0`.
pub fn s_value(h: &HermPoint, p: i64, d: i64) -> i64 {
    if h.is_zero() || h.content_p(p).unwrap_or(0) > 0 {
        p * p * p - p * p + p - 1
    } else if h.det_scaled(d) % p == 0 {
        -p * p + p - 1
    } else {
        p - 1
    }
}

/// Raw inert operators as lazy coefficient sources.
pub struct InertAction<'a> {
    inner: &'a dyn CoeffSource,
    op: HeckeOpId,
}

impl<'a> InertAction<'a> {
    pub fn new(inner: &'a dyn CoeffSource, op: HeckeOpId) -> Result<InertAction<'a>, HeckeError> {
        op.validate(inner.d())?;
        match op {
            HeckeOpId::InertT0(_) | HeckeOpId::InertT(_) => Ok(InertAction { inner, op }),
            _ => Err(HeckeError::NeedsLift(op)),
        }
    }
}

fn t0_coeff(src: &dyn CoeffSource, h: &HermPoint, p: i64) -> Result<Elem, MaassError> {
    let d = src.d();
    let k = src.k() as i64;
    let p2 = p * p;
    let mut near = Acc::new(src.ring());
    let mut far = Acc::new(src.ring());
    for g in coset_images(h, p, d) {
        near.add(src.coeff(&g)?.as_ref());
        if let Some(q) = g.div_exact(p2) {
            far.add(src.coeff(&q)?.as_ref());
        }
    }
    let mut out = Acc::new(src.ring());
    out.add_scaled(src.coeff(h)?.as_ref(), &BigInt::from(s_value(h, p, d)));
    out.add(&near.finish().scale(&rat_pow(p as u64, 4 - k)));
    out.add_scaled(&far.finish(), &int_pow(p as u64, k as u32));
    Ok(out.finish())
}

fn t_coeff(src: &dyn CoeffSource, h: &HermPoint, p: i64) -> Result<Elem, MaassError> {
    let d = src.d();
    let k = src.k() as i64;
    let mut sum = Acc::new(src.ring());
    for g in coset_images(h, p, d) {
        if let Some(q) = g.div_exact(p) {
            sum.add(src.coeff(&q)?.as_ref());
        }
    }
    let mut out = Acc::new(src.ring());
    out.add(&src.coeff(&h.scale(p))?.as_ref().scale(&rat_pow(p as u64, 4 - 2 * k)));
    if let Some(q) = h.div_exact(p) {
        out.add(src.coeff(&q)?.as_ref());
    }
    out.add(&sum.finish().scale(&rat_pow(p as u64, 1 - k)));
    Ok(out.finish())
}

impl CoeffSource for InertAction<'_> {
    fn d(&self) -> i64 {
        self.inner.d()
    }
    fn k(&self) -> u32 {
        self.inner.k()
    }
    fn ring(&self) -> &Arc<Ring> {
        self.inner.ring()
    }
    fn coeff(&self, h: &HermPoint) -> Result<Cow<'_, Elem>, MaassError> {
        let p = self.op.prime() as i64;
        Ok(Cow::Owned(match self.op {
            HeckeOpId::InertT0(_) => t0_coeff(self.inner, h, p)?,
            _ => t_coeff(self.inner, h, p)?,
        }))
    }
}

/// Apply an inert operator to `src` at the given points.
pub fn act_inert_on_points(
    src: &dyn CoeffSource,
    op: HeckeOpId,
    chi: &ClassChar,
    bounds: Bounds,
    points: &[HermPoint],
) -> Result<CoeffTable, HeckeError> {
    match op {
        HeckeOpId::InertUp(p) => {
            let t = InertAction::new(src, HeckeOpId::InertT(p))?;
            let tt = InertAction::new(&t, HeckeOpId::InertT(p))?;
            Ok(CoeffTable::from_points(&tt, chi, bounds, points)?)
        }
        _ => {
            let a = InertAction::new(src, op)?;
            Ok(CoeffTable::from_points(&a, chi, bounds, points)?)
        }
    }
}

/// Apply an inert operator to `src` on every lattice point within `bounds`.
pub fn act_inert(src: &dyn CoeffSource, op: HeckeOpId, chi: &ClassChar, bounds: Bounds) -> Result<CoeffTable, HeckeError> {
    let points = crate::hermitian::enumerate(src.d(), bounds.det, bounds.diag);
    act_inert_on_points(src, op, chi, bounds, &points)
}

pub fn act_inert_t0(src: &dyn CoeffSource, p: u64, chi: &ClassChar, bounds: Bounds) -> Result<CoeffTable, HeckeError> {
    act_inert(src, HeckeOpId::InertT0(p), chi, bounds)
}

pub fn act_inert_t(src: &dyn CoeffSource, p: u64, chi: &ClassChar, bounds: Bounds) -> Result<CoeffTable, HeckeError> {
    act_inert(src, HeckeOpId::InertT(p), chi, bounds)
}

pub fn act_inert_up(src: &dyn CoeffSource, p: u64, chi: &ClassChar, bounds: Bounds) -> Result<CoeffTable, HeckeError> {
    act_inert(src, HeckeOpId::InertUp(p), chi, bounds)
}

/// Every point an inert operator reads when evaluated at `h`.
pub fn reach(op: HeckeOpId, h: &HermPoint, d: i64) -> Vec<HermPoint> {
    let p = op.prime() as i64;
    match op {
        HeckeOpId::InertT0(_) => {
            let mut out = vec![*h];
            for g in coset_images(h, p, d) {
                if let Some(q) = g.div_exact(p * p) {
                    out.push(q);
                }
                out.push(g);
            }
            out
        }
        HeckeOpId::InertT(_) => {
            let mut out = vec![h.scale(p)];
            out.extend(h.div_exact(p));
            out.extend(coset_images(h, p, d).iter().filter_map(|g| g.div_exact(p)));
            out
        }
        HeckeOpId::InertUp(_) => reach(HeckeOpId::InertT(op.prime()), h, d)
            .iter()
            .flat_map(|g| reach(HeckeOpId::InertT(op.prime()), g, d))
            .collect(),
        _ => vec![*h],
    }
}

/// Largest output bounds (same det/diag ratio shrinking) whose every point
/// reads only inside `input`. Returns `None` if even the zero table fails.
pub fn output_bounds(op: HeckeOpId, input: Bounds, d: i64) -> Option<Bounds> {
    let fits = |b: Bounds| {
        crate::hermitian::enumerate(d, b.det, b.diag)
            .iter()
            .all(|h| reach(op, h, d).iter().all(|g| input.contains(g, d)))
    };
    let mut diag = input.diag;
    while diag >= 0 {
        let mut det = input.det;
        while det >= 0 {
            let b = Bounds::new(det, diag);
            if fits(b) {
                return Some(b);
            }
            det = if det > 8 { det / 2 } else { det - 1 };
        }
        diag -= 1;
    }
    None
}

/// The twist exponent `chi([P])` for the chosen prime above a split `p`.
pub fn split_exponent(cg: &ClassGroup, chi: &ClassChar, p: u64) -> Result<u32, HeckeError> {
    Ok(chi.exponent(cg.prime_class(p)?))
}

/// Closed-form action of split operators (and `Delta`) on the `alpha` of a lift.
pub fn act_split_on_lift(t: &MaassTuple, op: HeckeOpId, cg: &ClassGroup) -> Result<MaassTuple, HeckeError> {
    op.validate(t.params.d)?;
    let p = op.prime();
    let k = t.params.k;
    let e = split_exponent(cg, &t.chi, p)? as i64;
    let ring = t.alpha.ring().clone();
    let a = &t.alpha;
    let pu = p as usize;
    let zero = Elem::zero(&ring);
    let at = |n: usize| -> &Elem { a.values.get(n).unwrap_or(&zero) };
    let (n_out, twist, values): (usize, i64, Vec<Elem>) = match op {
        HeckeOpId::SplitT1(_) => {
            let n_out = a.n_max() / pu;
            let c1 = BigInt::from(p * p * (p + 1));
            let c2 = int_pow(p, k) * BigInt::from(p + 1);
            let vals = (0..=n_out)
                .map(|n| {
                    let mut acc = Acc::new(&ring);
                    acc.add_scaled(at(n * pu), &c1);
                    if n % pu == 0 {
                        acc.add_scaled(at(n / pu), &c2);
                    }
                    acc.finish()
                })
                .collect();
            (n_out, e, vals)
        }
        HeckeOpId::SplitT2(_) => {
            let p2 = pu * pu;
            let n_out = a.n_max() / p2;
            let c_far = int_pow(p, 4);
            let c_mid = int_pow(p, k + 3) + int_pow(p, k + 2) + int_pow(p, k + 1);
            let c_branch = int_pow(p, k + 2);
            let c_low = int_pow(p, 2 * k);
            let vals = (0..=n_out)
                .map(|n| {
                    let mut acc = Acc::new(&ring);
                    acc.add_scaled(at(n * p2), &c_far);
                    acc.add_scaled(at(n), &c_mid);
                    if n % pu == 0 {
                        acc.add_scaled(at(n), &c_branch);
                        if n % p2 == 0 {
                            acc.add_scaled(at(n / p2), &c_low);
                        }
                    }
                    acc.finish()
                })
                .collect();
            (n_out, 2 * e, vals)
        }
        HeckeOpId::DeltaSplit(_) => (a.n_max(), e, a.values.clone()),
        _ => return Err(HeckeError::NeedsLift(op)),
    };
    let z = Elem::zeta_pow(&ring, twist);
    let alpha = Alpha {
        d: a.d,
        k: a.k,
        values: values.into_iter().map(|v| &v * &z).collect(),
    };
    debug_assert_eq!(alpha.n_max(), n_out);
    Ok(MaassTuple {
        alpha,
        ..t.clone()
    })
}

/// Raw inert action on a lift, read back as a lift through one primitive
/// representative per determinant up to `n_max`. Fails if the output is not
/// Maass on those points (it always is when the theory holds).
pub fn act_inert_on_lift(t: &MaassTuple, op: HeckeOpId, n_max: usize) -> Result<MaassTuple, HeckeError> {
    let pts = representative_points(t.params.d, n_max as u64)?;
    let table = act_inert_on_points(t, op, &t.chi, bounds_of(&pts, t.params.d), &pts)?;
    let check = check_maass(&table);
    if let Some(h) = check.witness {
        return Err(MaassError::NotMaass(h).into());
    }
    let alpha = alpha_from_check(&table, &check, n_max)?;
    Ok(MaassTuple {
        alpha,
        ..t.clone()
    })
}

/// Any operator on a lift, returning a lift.
pub fn act_on_lift(t: &MaassTuple, op: HeckeOpId, cg: &ClassGroup, n_max: usize) -> Result<MaassTuple, HeckeError> {
    if op.is_split() {
        act_split_on_lift(t, op, cg)
    } else {
        act_inert_on_lift(t, op, n_max)
    }
}

/// The image of an operator under descent: `lift_scale * chi([P])^chi_shift * poly(T_p)`.
///
/// On the `alpha` of a lift `t`, the operator satisfies
/// `descend(op t) = lift_scale * chi([P])^chi_shift * poly(T_p) descend(t)`.
/// For inert `p` the polynomial is even in `T_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescendedOp {
    pub op: HeckeOpId,
    /// Coefficients of `T_p^i`, lowest first.
    pub poly: Vec<BigRational>,
    pub chi_shift: u32,
    pub lift_scale: BigRational,
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn descend_op(op: HeckeOpId, k: u32) -> DescendedOp {
    let p = op.prime();
    let ki = k as i64;
    let r = |e: i64| rat_pow(p, e);
    let int = |n: i64| BigRational::from_integer(BigInt::from(n));
    let pi = p as i64;
    let zero = BigRational::zero();
    let (poly, chi_shift, lift_scale) = match op {
        HeckeOpId::SplitT1(_) => (vec![zero, r(2 - ki / 2) * int(pi + 1)], 1, r(ki / 2)),
        HeckeOpId::SplitT2(_) => {
            let c = r(4 - ki);
            (vec![&c * (r(ki - 1) + r(ki - 3)), zero, c], 2, r(ki))
        }
        HeckeOpId::DeltaSplit(_) => (vec![BigRational::one()], 1, BigRational::one()),
        HeckeOpId::InertT0(_) => {
            // p^(4-k) (p^2+1) T(p^2) + p^4 + p^3 + p - 1 with T(p^2) = T_p^2 + p^(k-2)
            let lead = r(4 - ki) * int(pi * pi + 1);
            let c0 = int(2 * pi.pow(4) + pi.pow(3) + pi * pi + pi - 1);
            (vec![c0, zero, lead], 0, BigRational::one())
        }
        HeckeOpId::InertT(_) => {
            // p^(4-2k) (T(p^2) + p^(k-3) (p^2+p+1))
            let c0 = r(1 - ki) * int((pi + 1) * (pi + 1));
            (vec![c0, zero, r(4 - 2 * ki)], 0, BigRational::one())
        }
        HeckeOpId::InertUp(_) => {
            let t = descend_op(HeckeOpId::InertT(p), k).poly;
            (poly_mul(&t, &t), 0, BigRational::one())
        }
    };
    DescendedOp {
        op,
        poly,
        chi_shift,
        lift_scale,
    }
}

impl DescendedOp {
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// `poly(T_p) q`, valid to `n_max / p^degree`.
    pub fn apply_poly(&self, q: &QExpansion) -> Result<QExpansion, HeckeError> {
        let p = self.op.prime();
        let n_out = q.n_max() / (p as usize).pow(self.degree() as u32);
        let mut powers = vec![q.clone()];
        for _ in 0..self.degree() {
            let next = apply_tp(powers.last().unwrap(), p)?;
            powers.push(next);
        }
        let mut out = QExpansion::zero(q.ring(), q.d, q.k, n_out);
        for (c, qi) in self.poly.iter().zip(&powers) {
            if c.is_zero() {
                continue;
            }
            for n in 0..=n_out {
                out.coeffs[n] = &out.coeffs[n] + &qi.coeffs[n].scale(c);
            }
        }
        Ok(out)
    }

    /// `lift_scale * chi^chi_shift * poly(T_p) q` for the component twist `chi_exp`.
    pub fn apply(&self, q: &QExpansion, chi_order: u32, chi_exp: u32) -> Result<QExpansion, HeckeError> {
        let ring = q.ring().base().with_cyclotomic(chi_order.max(q.ring().cyclotomic_order()));
        let q = q.embed(&ring)?;
        let z = Elem::zeta_pow(&ring, (chi_exp * self.chi_shift) as i64).scale(&self.lift_scale);
        Ok(self.apply_poly(&q)?.scale(&z)?)
    }

    /// Evaluate the polynomial at `T_p = a` (inert: the polynomial is even,
    /// so only `a^2` matters).
    pub fn eval(&self, a: &Elem) -> Elem {
        let mut out = Elem::zero(a.ring());
        let mut pw = Elem::one(a.ring());
        for c in &self.poly {
            if !c.is_zero() {
                out = &out + &pw.scale(c);
            }
            pw = &pw * a;
        }
        out
    }
}

/// The eigenvalue of `op` on the lift of `f` twisted by `chi`, without the
/// `lift_scale` factor: `descend(op t) = lift_scale * eigenvalue * descend(t)`.
pub fn maass_eigenvalue(f: &NewformData, chi: &ClassChar, cg: &ClassGroup, op: HeckeOpId) -> Result<Elem, HeckeError> {
    op.validate(f.d)?;
    let rho = rho_conjugate(f)?;
    if rho.ap == f.ap {
        return Err(HeckeError::DegenerateLift);
    }
    let p = op.prime();
    let ring = f.ring.with_cyclotomic(chi.order);
    let a = f.a_p(p)?.embed(&ring)?;
    let dop = descend_op(op, f.k);
    let e = if op.is_split() {
        split_exponent(cg, chi, p)? * dop.chi_shift
    } else {
        0
    };
    Ok(&dop.eval(&a) * &Elem::zeta_pow(&ring, e as i64))
}

/// `lift_scale * eigenvalue`, the scalar by which `op` acts on the lift's `alpha`.
pub fn alpha_eigenvalue(f: &NewformData, chi: &ClassChar, cg: &ClassGroup, op: HeckeOpId) -> Result<Elem, HeckeError> {
    let ev = maass_eigenvalue(f, chi, cg, op)?;
    Ok(ev.scale(&descend_op(op, f.k).lift_scale))
}

/// Primes below `bound` of the given type for `D_K`, excluding `D_K`.
pub fn primes_of_type(d: i64, want: SplitType, bound: u64) -> Vec<u64> {
    crate::arith::primes_upto(bound)
        .into_iter()
        .filter(|&p| split_type(d, p) == want)
        .collect()
}

/// `a_K` is invariant under multiplication by `p^2` for `p != D_K`; the
/// descent identities rely on this.
pub fn a_k_scaling_holds(d: i64, p: u64, n: u64) -> bool {
    a_k(d, n * p * p) == a_k(d, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::synthetic_newform;
    use crate::hermitian::congruence_integral;
    use crate::maass::{descend, random_alpha};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_ops() {
        assert_eq!("T0@3".parse::<HeckeOpId>().unwrap(), HeckeOpId::InertT0(3));
        assert_eq!("T1@2".parse::<HeckeOpId>().unwrap(), HeckeOpId::SplitT1(2));
        assert_eq!("Up@5".parse::<HeckeOpId>().unwrap().to_string(), "Up@5");
        assert!("T0@4".parse::<HeckeOpId>().is_err());
        assert!("X@3".parse::<HeckeOpId>().is_err());
        assert!(HeckeOpId::InertT0(2).validate(7).is_err());
        assert!(HeckeOpId::SplitT1(2).validate(7).is_ok());
    }

    #[test]
    fn images_match_matrix_action() {
        let d = 23;
        let h = HermPoint::new(2, 5, QuadInt::new(3, -1));
        for p in [5i64, 7] {
            let imgs = coset_images(&h, p, d);
            for (a, g) in residues(p).iter().zip(&imgs) {
                let m = [QuadInt::new(p, 0), *a, QuadInt::ZERO, QuadInt::ONE];
                assert_eq!(congruence_integral(&h, &m, d), *g);
                assert_eq!(g.det_scaled(d), p * p * h.det_scaled(d));
            }
        }
    }

    #[test]
    fn s_values_at_three() {
        let d = 7;
        assert_eq!(s_value(&HermPoint::new(1, 1, QuadInt::ZERO), 3, d), 2);
        // det_scaled = 7*1*1 - N(w) with N(w) = 4: 3
        assert_eq!(s_value(&HermPoint::new(1, 1, QuadInt::new(1, 1)), 3, d), -7);
        assert_eq!(s_value(&HermPoint::new(3, 3, QuadInt::ZERO), 3, d), 20);
        assert_eq!(s_value(&HermPoint::ZERO, 3, d), 20);
    }

    #[test]
    fn zero_table_stays_zero() {
        let t = MaassTuple::from_alpha(
            &Alpha::zero(&Ring::integers(), 7, 8, 2000),
            &ClassChar::trivial(1),
            "zero",
        )
        .unwrap();
        let out = act_inert_t0(&t, 3, &t.chi, Bounds::new(21, 2)).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn t0_preserves_maass_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for (d, p) in [(7i64, 3u64), (11, 2)] {
            let alpha = random_alpha(&Ring::integers(), d, 8, 60 * d as usize * (p * p) as usize, 9, &mut rng);
            let t = MaassTuple::from_alpha(&alpha, &ClassChar::trivial(1), "r").unwrap();
            for op in [HeckeOpId::InertT0(p), HeckeOpId::InertT(p)] {
                let out = act_inert(&t, op, &t.chi, Bounds::new(3 * d, 3)).unwrap();
                let c = check_maass(&out);
                assert!(c.is_maass, "{op} at D = {d}: {:?}", c.witness);
            }
        }
    }

    #[test]
    fn split_examples() {
        let ring = Ring::integers();
        let cg = ClassGroup::new(7).unwrap();
        let mut alpha = Alpha::zero(&ring, 7, 8, 400);
        for v in alpha.values.iter_mut() {
            *v = Elem::one(&ring);
        }
        let t = MaassTuple::from_alpha(&alpha, &ClassChar::trivial(1), "one").unwrap();
        let t1 = act_split_on_lift(&t, HeckeOpId::SplitT1(2), &cg).unwrap();
        assert_eq!(t1.alpha.values[1], Elem::from_int(&ring, 4 * 3));
        let t2 = act_split_on_lift(&t, HeckeOpId::SplitT2(2), &cg).unwrap();
        let base: i64 = 16 + (1 << 11) + (1 << 10) + (1 << 9);
        assert_eq!(t2.alpha.values[1], Elem::from_int(&ring, base));
        assert_eq!(t2.alpha.values[4], Elem::from_int(&ring, base + (1 << 10) + (1 << 16)));
        assert_eq!(t2.alpha.values[2], Elem::from_int(&ring, base + (1 << 10)));
    }

    #[test]
    fn split_ops_commute() {
        let ring = Ring::gaussian();
        let cg = ClassGroup::new(23).unwrap();
        let chi = cg.characters().unwrap()[1].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let alpha = random_alpha(&ring, 23, 8, 3000, 9, &mut rng);
        let t = MaassTuple::from_alpha(&alpha, &chi, "r").unwrap();
        let a = act_split_on_lift(&act_split_on_lift(&t, HeckeOpId::SplitT1(2), &cg).unwrap(), HeckeOpId::SplitT2(3), &cg).unwrap();
        let b = act_split_on_lift(&act_split_on_lift(&t, HeckeOpId::SplitT2(3), &cg).unwrap(), HeckeOpId::SplitT1(2), &cg).unwrap();
        let n = a.alpha.n_max().min(b.alpha.n_max());
        assert_eq!(a.alpha.values[..=n], b.alpha.values[..=n]);
    }

    #[test]
    fn descended_polynomials() {
        let k = 8;
        let t0 = descend_op(HeckeOpId::InertT0(3), k);
        assert_eq!(t0.poly[2], rat_pow(3, -4) * BigRational::from_integer(10.into()));
        // 2*81 + 27 + 9 + 3 - 1
        assert_eq!(t0.poly[0], BigRational::from_integer(200.into()));
        let up = descend_op(HeckeOpId::InertUp(3), k);
        assert_eq!(up.degree(), 4);
        let t = descend_op(HeckeOpId::InertT(3), k);
        // zero a(p): Up = (T at 0)^2
        let zero = Elem::zero(&Ring::integers());
        assert_eq!(up.eval(&zero), &t.eval(&zero) * &t.eval(&zero));
    }

    #[test]
    fn split_descent_diagram_small() {
        let ring = Ring::gaussian();
        let cg = ClassGroup::new(23).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let f = synthetic_newform(&ring, 23, 8, 2000, 20, &mut rng).unwrap();
        for chi in cg.characters().unwrap() {
            let t = crate::maass::build_lift(&f, &chi, 2000).unwrap();
            for op in [HeckeOpId::SplitT1(2), HeckeOpId::SplitT2(2), HeckeOpId::DeltaSplit(3)] {
                let dop = descend_op(op, 8);
                let out = act_split_on_lift(&t, op, &cg).unwrap();
                let lhs = descend(&out, 100).unwrap();
                let rhs = descend(&t, 2000).unwrap();
                let e = split_exponent(&cg, &chi, op.prime()).unwrap();
                for (b, q) in rhs.iter().enumerate() {
                    let pred = dop.apply(q, chi.order, e).unwrap().truncate(100);
                    assert_eq!(lhs[b], pred, "{op} component {b}");
                }
            }
        }
    }

    #[test]
    fn inert_descent_small() {
        let ring = Ring::gaussian();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let f = synthetic_newform(&ring, 7, 8, 3000, 20, &mut rng).unwrap();
        let t = crate::maass::build_lift(&f, &ClassChar::trivial(1), 3000).unwrap();
        for op in [HeckeOpId::InertT0(3), HeckeOpId::InertT(3)] {
            let out = act_inert_on_lift(&t, op, 60).unwrap();
            let lhs = descend(&out, 60).unwrap();
            let rhs = descend_op(op, 8).apply(&descend(&t, 3000).unwrap()[0], 1, 0).unwrap();
            assert_eq!(lhs[0], rhs.truncate(60), "{op}");
        }
    }

    #[test]
    fn eigenvalues_on_lift() {
        let ring = Ring::gaussian();
        let cg = ClassGroup::new(23).unwrap();
        let chi = cg.characters().unwrap()[2].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let f = synthetic_newform(&ring, 23, 8, 1200, 20, &mut rng).unwrap();
        let t = crate::maass::build_lift(&f, &chi, 1200).unwrap();
        for op in [HeckeOpId::SplitT1(2), HeckeOpId::SplitT2(3), HeckeOpId::InertT0(5)] {
            let out = act_on_lift(&t, op, &cg, 40).unwrap();
            let ev = alpha_eigenvalue(&f, &chi, &cg, op).unwrap();
            for n in 0..=40 {
                assert_eq!(out.alpha.values[n], &t.alpha.values[n] * &ev, "{op} at {n}");
            }
        }
        let cm = crate::elliptic::bundled_cm_form();
        assert_eq!(
            maass_eigenvalue(&cm, &ClassChar::trivial(1), &ClassGroup::new(7).unwrap(), HeckeOpId::SplitT1(2)),
            Err(HeckeError::DegenerateLift)
        );
    }

    #[test]
    fn a_k_scaling() {
        for n in 0..200 {
            assert!(a_k_scaling_holds(23, 5, n));
            assert!(a_k_scaling_holds(7, 2, n));
        }
    }
}
