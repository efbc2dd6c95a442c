//! The Fourier-index lattice: hermitian `2x2` matrices
//! `[[t1, w/s], [conj(w/s), t3]]` with `s = sqrt(-D)`, `t1, t3` integers and
//! `w` in `O_K`. All matrices here are positive semidefinite.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::arith::gcd_i64;
use crate::quadfield::QuadInt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HermError {
    #[error("content of the zero matrix is undefined")]
    ZeroContent,
    #[error("transform matrix is singular")]
    Singular,
    #[error("l = {l} must be a prime not dividing D_K = {d}")]
    BadPrime { l: i64, d: i64 },
    #[error("precision n must be positive")]
    BadPrecision,
}

/// A point `(t1, t3, w)` of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct HermPoint {
    pub t1: i64,
    pub t3: i64,
    pub w: QuadInt,
}

impl HermPoint {
    pub const ZERO: HermPoint = HermPoint {
        t1: 0,
        t3: 0,
        w: QuadInt::ZERO,
    };

    pub const fn new(t1: i64, t3: i64, w: QuadInt) -> HermPoint {
        HermPoint { t1, t3, w }
    }

    /// `D * t1 * t3 - N(w)`, which is `D * det(h)`.
    pub fn det_scaled(&self, d: i64) -> i64 {
        d * self.t1 * self.t3 - self.w.norm(d)
    }

    pub fn is_zero(&self) -> bool {
        self.t1 == 0 && self.t3 == 0 && self.w.is_zero()
    }

    /// `gcd(t1, t3, w.a, w.b)`.
    pub fn content(&self) -> Result<i64, HermError> {
        let c = gcd_i64(gcd_i64(self.t1, self.t3), gcd_i64(self.w.a, self.w.b));
        if c == 0 {
            Err(HermError::ZeroContent)
        } else {
            Ok(c)
        }
    }

    /// Exponent of `p` in the content.
    pub fn content_p(&self, p: i64) -> Result<u32, HermError> {
        let mut c = self.content()?;
        let mut v = 0;
        while c % p == 0 {
            c /= p;
            v += 1;
        }
        Ok(v)
    }

    pub fn scale(&self, c: i64) -> HermPoint {
        HermPoint {
            t1: self.t1 * c,
            t3: self.t3 * c,
            w: self.w.scale(c),
        }
    }

    /// `self / c` if every entry is divisible.
    pub fn div_exact(&self, c: i64) -> Option<HermPoint> {
        if self.t1 % c == 0 && self.t3 % c == 0 && self.w.a % c == 0 && self.w.b % c == 0 {
            Some(HermPoint {
                t1: self.t1 / c,
                t3: self.t3 / c,
                w: QuadInt::new(self.w.a / c, self.w.b / c),
            })
        } else {
            None
        }
    }

    pub fn is_psd(&self, d: i64) -> bool {
        self.t1 >= 0 && self.t3 >= 0 && self.det_scaled(d) >= 0
    }

    /// Canonical ordering key `(det, t1, t3, w.a, w.b)`.
    pub fn canonical_key(&self, d: i64) -> (i64, i64, i64, i64, i64) {
        (self.det_scaled(d), self.t1, self.t3, self.w.a, self.w.b)
    }

    pub fn canonical_cmp(&self, other: &HermPoint, d: i64) -> Ordering {
        self.canonical_key(d).cmp(&other.canonical_key(d))
    }
}

impl fmt::Display for HermPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.t1, self.t3, self.w)
    }
}

/// The `v`-coordinate (coefficient of `omega`) of `z`; satisfies `z - conj(z) = v(z) * s`.
fn omega_part(z: QuadInt) -> i64 {
    z.b
}

/// `M^* H M` for an integral `M` (no denominators), returned without any
/// lattice check. The formula works over any ring of `a + b*omega`.
pub fn congruence_integral(h: &HermPoint, m: &[QuadInt; 4], d: i64) -> HermPoint {
    let [m11, m12, m21, m22] = *m;
    let s = QuadInt::sqrt_minus_d();
    let w = h.w;
    let t1 = h.t1 * m11.norm(d) + h.t3 * m21.norm(d) + omega_part(m11.conj().mul(w, d).mul(m21, d));
    let t3 = h.t1 * m12.norm(d) + h.t3 * m22.norm(d) + omega_part(m12.conj().mul(w, d).mul(m22, d));
    let inner = m11.conj().mul(m12, d).scale(h.t1).add(m21.conj().mul(m22, d).scale(h.t3));
    let w_new = s
        .mul(inner, d)
        .add(m11.conj().mul(w, d).mul(m22, d))
        .sub(m21.conj().mul(w.conj(), d).mul(m12, d));
    HermPoint {
        t1,
        t3,
        w: w_new,
    }
}

/// Result of transforming a point by a matrix with denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transformed {
    Point(HermPoint),
    NotInLattice,
}

/// `g = M / den` acting by `h -> g^* h g`.
pub fn transform(h: &HermPoint, m: &[QuadInt; 4], den: i64, d: i64) -> Result<Transformed, HermError> {
    let det = m[0].mul(m[3], d).sub(m[1].mul(m[2], d));
    if det.is_zero() || den == 0 {
        return Err(HermError::Singular);
    }
    let raw = congruence_integral(h, m, d);
    Ok(match raw.div_exact(den * den) {
        Some(p) => Transformed::Point(p),
        None => Transformed::NotInLattice,
    })
}

/// All `w` with `lo <= N(w) <= hi`.
pub fn norm_ball(d: i64, lo: i64, hi: i64) -> Vec<QuadInt> {
    let mut out = Vec::new();
    if hi < 0 {
        return out;
    }
    // N(a + b w) = (a + b/2)^2 + D b^2 / 4
    let bmax = ((4 * hi / d) as f64).sqrt() as i64 + 1;
    for b in -bmax..=bmax {
        if d * b * b > 4 * hi {
            continue;
        }
        let r = (((4 * hi - d * b * b) as f64).sqrt() as i64 + 2) / 2 + 1;
        let center = -b / 2;
        for a in center - r - 1..=center + r + 1 {
            let w = QuadInt::new(a, b);
            let n = w.norm(d);
            if n >= lo && n <= hi {
                out.push(w);
            }
        }
    }
    out
}

/// Every lattice point with `t1, t3 <= bound_diag` and `det_scaled <= bound_det`,
/// in canonical order.
pub fn enumerate(d: i64, bound_det: i64, bound_diag: i64) -> Vec<HermPoint> {
    let mut out = Vec::new();
    for t1 in 0..=bound_diag {
        for t3 in 0..=bound_diag {
            let top = d * t1 * t3;
            for w in norm_ball(d, top - bound_det, top) {
                out.push(HermPoint { t1, t3, w });
            }
        }
    }
    out.sort_by(|a, b| a.canonical_cmp(b, d));
    out
}

/// Certificate `u^* h u = l^eps * diag(a, dd) (mod l^n)` with `u` in `SL_2(O_K / l^n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagCert {
    pub l: i64,
    pub n: u32,
    /// Entries `[u11, u12, u21, u22]` reduced mod `l^n`.
    pub u: [QuadInt; 4],
    pub a: i64,
    pub d: i64,
    pub epsilon: u32,
    /// Set when `h = 0 mod l^n`; then `epsilon = n` and `u = I`.
    pub saturated: bool,
}

fn modpow(l: i64, n: u32) -> i64 {
    l.pow(n)
}

fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 == 1 {
        Some(s0.rem_euclid(m))
    } else {
        None
    }
}

fn qmod(z: QuadInt, m: i64) -> QuadInt {
    z.rem_euclid(m)
}

fn mat_mul(x: &[QuadInt; 4], y: &[QuadInt; 4], d: i64, m: i64) -> [QuadInt; 4] {
    let e = |a: QuadInt, b: QuadInt, c: QuadInt, e: QuadInt| qmod(a.mul(b, d).add(c.mul(e, d)), m);
    [
        e(x[0], y[0], x[1], y[2]),
        e(x[0], y[1], x[1], y[3]),
        e(x[2], y[0], x[3], y[2]),
        e(x[2], y[1], x[3], y[3]),
    ]
}

/// Diagonalize `h` modulo `l^n` for a prime `l` not dividing `D`.
pub fn diagonalize_mod(h: &HermPoint, l: i64, n: u32, d: i64) -> Result<DiagCert, HermError> {
    if l < 2 || !crate::arith::is_prime(l as u64) || d % l == 0 {
        return Err(HermError::BadPrime { l, d });
    }
    if n == 0 {
        return Err(HermError::BadPrecision);
    }
    let identity = [QuadInt::ONE, QuadInt::ZERO, QuadInt::ZERO, QuadInt::ONE];
    let eps = h.content_p(l).unwrap_or(u32::MAX);
    if eps >= n {
        return Ok(DiagCert {
            l,
            n,
            u: identity,
            a: 1,
            d: 0,
            epsilon: n,
            saturated: true,
        });
    }
    let h0 = h.div_exact(l.pow(eps)).expect("content divides");
    let m = modpow(l, n - eps);
    // `u` is tracked mod l^n so that det u = 1 holds at full precision.
    let full = modpow(l, n);
    // Work with the lattice coordinates directly: u^* h0 u is again of the form
    // (t1', t3', w') and we drive w' to 0 mod m with t1' a unit.
    let mut u = identity;
    let mut cur = h0;
    let cur_mod = |p: &HermPoint| HermPoint {
        t1: p.t1.rem_euclid(m),
        t3: p.t3.rem_euclid(m),
        w: qmod(p.w, m),
    };
    let apply = |u: &mut [QuadInt; 4], cur: &mut HermPoint, step: [QuadInt; 4]| {
        *cur = cur_mod(&congruence_integral(cur, &step, d));
        *u = mat_mul(u, &step, d, full);
    };
    if cur.t1 % l == 0 {
        if cur.t3 % l != 0 {
            let swap = [QuadInt::ZERO, QuadInt::new(-1, 0), QuadInt::ONE, QuadInt::ZERO];
            apply(&mut u, &mut cur, swap);
        } else {
            // t1 = t3 = 0 mod l, so w is nonzero mod l; a shear by y = 1 or
            // omega makes the (1,1) entry a unit since the trace form is
            // nondegenerate mod l.
            let mut done = false;
            for y in [QuadInt::ONE, QuadInt::new(0, 1), QuadInt::new(1, 1)] {
                let step = [QuadInt::ONE, QuadInt::ZERO, y, QuadInt::ONE];
                let trial = congruence_integral(&cur, &step, d);
                if trial.t1 % l != 0 {
                    apply(&mut u, &mut cur, step);
                    done = true;
                    break;
                }
            }
            assert!(done, "primitive point without a unit pivot");
        }
    }
    // Clear the off-diagonal with the shear u = [[1, c], [0, 1]].
    // (u^* h u)_{12} = (t1 * c * s + w) / s, so c = -w / (t1 s) mod m.
    let a_inv = inv_mod(cur.t1, m).expect("pivot is a unit");
    let s = QuadInt::sqrt_minus_d();
    let d_inv = inv_mod(d, m).expect("l does not divide D");
    // 1/s = -s/D
    let s_inv = qmod(s.neg().scale(d_inv), m);
    let c = qmod(cur.w.neg().mul(s_inv, d).scale(a_inv), m);
    let step = [QuadInt::ONE, c, QuadInt::ZERO, QuadInt::ONE];
    apply(&mut u, &mut cur, step);
    debug_assert!(qmod(cur.w, m).is_zero());
    Ok(DiagCert {
        l,
        n,
        u,
        a: cur.t1.rem_euclid(m),
        d: cur.t3.rem_euclid(m),
        epsilon: eps,
        saturated: false,
    })
}

impl DiagCert {
    /// Check `u^* h u = l^eps diag(a, d) (mod l^n)`, `det u = 1` and `l` not dividing `a`.
    pub fn verify(&self, h: &HermPoint, dk: i64) -> bool {
        let m = modpow(self.l, self.n);
        let det = self.u[0].mul(self.u[3], dk).sub(self.u[1].mul(self.u[2], dk));
        if qmod(det.sub(QuadInt::ONE), m) != QuadInt::ZERO {
            return false;
        }
        if self.saturated {
            return h.div_exact(m).is_some() || h.is_zero();
        }
        if self.a % self.l == 0 {
            return false;
        }
        let img = congruence_integral(h, &self.u, dk);
        let le = self.l.pow(self.epsilon);
        (img.t1 - le * self.a).rem_euclid(m) == 0
            && (img.t3 - le * self.d).rem_euclid(m) == 0
            && qmod(img.w, m).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_examples() {
        assert_eq!(HermPoint::new(1, 1, QuadInt::ZERO).det_scaled(7), 7);
        assert_eq!(HermPoint::new(1, 2, QuadInt::new(3, 0)).det_scaled(7), 5);
        assert_eq!(HermPoint::new(1, 1, QuadInt::new(1, 1)).det_scaled(7), 3);
    }

    #[test]
    fn content_examples() {
        assert_eq!(HermPoint::new(2, 4, QuadInt::new(2, 0)).content().unwrap(), 2);
        assert_eq!(HermPoint::new(1, 5, QuadInt::ZERO).content().unwrap(), 1);
        let h = HermPoint::new(6, 9, QuadInt::new(3, 3));
        assert_eq!(h.content().unwrap(), 3);
        assert_eq!(h.content_p(2).unwrap(), 0);
        assert_eq!(h.content_p(3).unwrap(), 1);
        assert_eq!(HermPoint::ZERO.content(), Err(HermError::ZeroContent));
    }

    #[test]
    fn transform_examples() {
        let d = 7;
        let h = HermPoint::new(2, 3, QuadInt::new(1, 1));
        let id = [QuadInt::ONE, QuadInt::ZERO, QuadInt::ZERO, QuadInt::ONE];
        assert_eq!(transform(&h, &id, 1, d).unwrap(), Transformed::Point(h));
        let p = 3;
        let dp = [QuadInt::ONE, QuadInt::ZERO, QuadInt::ZERO, QuadInt::new(p, 0)];
        let img = HermPoint::new(2, 27, QuadInt::new(3, 3));
        assert_eq!(transform(&h, &dp, 1, d).unwrap(), Transformed::Point(img));
        // diag(1, 1/p) = diag(p, 1) / p
        let back = [QuadInt::new(p, 0), QuadInt::ZERO, QuadInt::ZERO, QuadInt::ONE];
        assert_eq!(transform(&img, &back, p, d).unwrap(), Transformed::Point(h));
        assert_eq!(
            transform(&HermPoint::new(1, 1, QuadInt::ZERO), &back, p, d).unwrap(),
            Transformed::NotInLattice
        );
        let sing = [QuadInt::ONE, QuadInt::ONE, QuadInt::ONE, QuadInt::ONE];
        assert_eq!(transform(&h, &sing, 1, d), Err(HermError::Singular));
    }

    #[test]
    fn enumerate_small() {
        assert_eq!(enumerate(7, 0, 0), vec![HermPoint::ZERO]);
        let pts = enumerate(7, 7, 1);
        let brute = (-3..=3)
            .flat_map(|a| (-3..=3).map(move |b| QuadInt::new(a, b)))
            .filter(|w| w.norm(7) <= 7)
            .count();
        let at11 = pts.iter().filter(|h| h.t1 == 1 && h.t3 == 1).count();
        assert_eq!(at11, brute);
        for h in &pts {
            assert!(h.is_psd(7));
            assert!(pts.contains(&HermPoint::new(h.t1, h.t3, h.w.neg())));
            assert!(pts.contains(&HermPoint::new(h.t1, h.t3, h.w.conj())));
            assert!(pts.contains(&HermPoint::new(h.t3, h.t1, h.w)));
        }
    }

    #[test]
    fn diag_examples() {
        let d = 7;
        let c = diagonalize_mod(&HermPoint::new(1, 1, QuadInt::ZERO), 3, 2, d).unwrap();
        assert_eq!((c.a, c.d, c.epsilon), (1, 1, 0));
        assert!(c.verify(&HermPoint::new(1, 1, QuadInt::ZERO), d));
        let h = HermPoint::new(3, 6, QuadInt::ZERO);
        let c = diagonalize_mod(&h, 3, 3, d).unwrap();
        assert_eq!(c.epsilon, 1);
        assert!(c.verify(&h, d));
        let z = HermPoint::new(9, 9, QuadInt::new(9, 0));
        let c = diagonalize_mod(&z, 3, 2, d).unwrap();
        assert!(c.saturated);
        assert!(c.verify(&z, d));
        assert!(diagonalize_mod(&h, 7, 2, d).is_err());
    }

    #[test]
    fn diag_needs_shear() {
        // t1 = t3 = 0 mod 3 and w a unit
        for d in [7i64, 11, 23] {
            let h = HermPoint::new(3, 3, QuadInt::new(1, 0));
            let c = diagonalize_mod(&h, 3, 2, d).unwrap();
            assert!(c.verify(&h, d), "D = {d}");
        }
    }

    #[test]
    fn diag_with_positive_content() {
        let h = HermPoint::new(-1000, 775, QuadInt::new(875, -750));
        let c = diagonalize_mod(&h, 5, 3, 11).unwrap();
        assert_eq!(c.epsilon, 2);
        assert!(c.verify(&h, 11));
    }
}
