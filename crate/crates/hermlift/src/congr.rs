//! Congruence depths between coefficient tables and between Hecke eigenvalue
//! systems, measured at a prime of the coefficient ring above `l`.
//!
//! Depths are lower bounds: equal inputs report `>= cap`, never a number.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith::rat_pow;
use crate::elliptic::NewformData;
use crate::hecke::{maass_eigenvalue, HeckeError, HeckeOpId};
use crate::maass::CoeffTable;
use crate::quadfield::{ClassChar, ClassGroup};
use crate::ring::{val_at_capped, PrimeAboveL, Valuation};
use crate::ring::{Elem, RingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongrError {
    #[error("tables have different bounds or discriminants")]
    BoundMismatch,
    #[error("values live in different coefficient rings")]
    RingMismatch,
    #[error("system `{label}` has no value for {op}")]
    MissingOp { label: String, op: HeckeOpId },
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Depth of `a - b` at `p`.
pub fn depth(p: &PrimeAboveL, a: &Elem, b: &Elem, cap: i64) -> Result<Valuation, CongrError> {
    if !a.ring().same_base(b.ring()) {
        return Err(CongrError::RingMismatch);
    }
    let (a, b) = if a.ring().cyclotomic_order() == b.ring().cyclotomic_order() {
        (a.clone(), b.clone())
    } else {
        let order = a.ring().cyclotomic_order().max(b.ring().cyclotomic_order());
        let r = a.ring().base().with_cyclotomic(order);
        (a.embed(&r)?, b.embed(&r)?)
    };
    Ok(val_at_capped(p, &a.try_sub(&b)?, cap))
}

/// Minimum depth over all points of two tables with identical bounds.
pub fn table_congruence(t1: &CoeffTable, t2: &CoeffTable, p: &PrimeAboveL, cap: i64) -> Result<Valuation, CongrError> {
    if t1.bounds != t2.bounds || t1.d != t2.d {
        return Err(CongrError::BoundMismatch);
    }
    let mut best = Valuation::Infinite;
    let zero1 = Elem::zero(&t1.ring);
    let zero2 = Elem::zero(&t2.ring);
    let mut points = t1.points();
    points.extend(t2.points());
    points.sort_by(|a, b| a.canonical_cmp(b, t1.d));
    points.dedup();
    for h in points {
        let a = t1.get(&h).unwrap_or(&zero1);
        let b = t2.get(&h).unwrap_or(&zero2);
        best = best.min(depth(p, a, b, cap)?);
        if best == Valuation::Finite(0) {
            break;
        }
    }
    Ok(best)
}

/// An eigenvalue `p^shift * value`, where `shift` records a power of the
/// Hecke prime that a normalization may have moved in or out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenvalue {
    pub value: Elem,
    pub shift: i64,
}

impl Eigenvalue {
    pub fn plain(value: Elem) -> Eigenvalue {
        Eigenvalue { value, shift: 0 }
    }

    /// The eigenvalue with its tracked power folded in.
    pub fn normalized(&self, p: u64) -> Elem {
        if self.shift == 0 {
            self.value.clone()
        } else {
            self.value.scale(&rat_pow(p, self.shift))
        }
    }
}

/// A Hecke eigenvalue system: `op -> eigenvalue`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenSystem {
    pub label: String,
    pub values: BTreeMap<HeckeOpId, Eigenvalue>,
    pub is_maass: bool,
}

impl EigenSystem {
    /// The eigenvalues of the lift of `f` twisted by `chi`.
    pub fn of_lift(f: &NewformData, chi: &ClassChar, cg: &ClassGroup, ops: &[HeckeOpId]) -> Result<EigenSystem, CongrError> {
        let mut values = BTreeMap::new();
        for &op in ops {
            values.insert(op, Eigenvalue::plain(maass_eigenvalue(f, chi, cg, op)?));
        }
        Ok(EigenSystem {
            label: f.label.clone(),
            values,
            is_maass: true,
        })
    }

    pub fn get(&self, op: HeckeOpId) -> Result<&Eigenvalue, CongrError> {
        self.values.get(&op).ok_or_else(|| CongrError::MissingOp {
            label: self.label.clone(),
            op,
        })
    }
}

/// Per-operator depths and their minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthEntry {
    pub label: String,
    pub depth: Valuation,
    pub per_op: Vec<(HeckeOpId, Valuation)>,
    pub is_self: bool,
}

pub fn eigen_congruence(
    e1: &EigenSystem,
    e2: &EigenSystem,
    p: &PrimeAboveL,
    ops: &[HeckeOpId],
    cap: i64,
) -> Result<DepthEntry, CongrError> {
    let mut per_op = Vec::with_capacity(ops.len());
    let mut best = Valuation::Infinite;
    for &op in ops {
        let a = e1.get(op)?.normalized(op.prime());
        let b = e2.get(op)?.normalized(op.prime());
        let v = depth(p, &a, &b, cap)?;
        best = best.min(v);
        per_op.push((op, v));
    }
    Ok(DepthEntry {
        label: e2.label.clone(),
        depth: best,
        per_op,
        is_self: e1 == e2,
    })
}

/// Congruence ledger of a lift's eigenvalue system against other systems.
/// A lower-bound ledger only: it measures the supplied data and claims
/// nothing about forms that were not supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthReport {
    pub prime: String,
    pub cap: i64,
    /// Sorted by depth, deepest first; ties keep input order.
    pub entries: Vec<DepthEntry>,
}

impl DepthReport {
    /// Largest depth among entries that are not the system itself.
    pub fn max_depth(&self) -> Option<Valuation> {
        self.entries.iter().filter(|e| !e.is_self).map(|e| e.depth).max()
    }
}

impl fmt::Display for DepthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lower-bound ledger at {}", self.prime)?;
        for e in &self.entries {
            let tag = if e.is_self { " (self)" } else { "" };
            writeln!(f, "{}\t{}{}", e.label, e.depth.display(self.cap), tag)?;
        }
        match self.max_depth() {
            Some(v) => write!(f, "max {}", v.display(self.cap)),
            None => write!(f, "max none"),
        }
    }
}

pub fn maass_ideal_report(
    phi: &EigenSystem,
    others: &[EigenSystem],
    p: &PrimeAboveL,
    ops: &[HeckeOpId],
    cap: i64,
) -> Result<DepthReport, CongrError> {
    let mut entries = others
        .iter()
        .map(|g| eigen_congruence(phi, g, p, ops, cap))
        .collect::<Result<Vec<_>, _>>()?;
    entries.sort_by(|a, b| b.depth.cmp(&a.depth));
    Ok(DepthReport {
        prime: p.to_string(),
        cap,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::primes_above;
    use crate::ring::Ring;

    fn sys(label: &str, vals: &[i64]) -> EigenSystem {
        let r = Ring::integers();
        EigenSystem {
            label: label.to_string(),
            values: vals
                .iter()
                .enumerate()
                .map(|(i, &v)| (HeckeOpId::SplitT1(2 + i as u64), Eigenvalue::plain(Elem::from_int(&r, v))))
                .collect(),
            is_maass: false,
        }
    }

    #[test]
    fn report_ordering() {
        let p = &primes_above(&Ring::integers(), 13).unwrap()[0];
        let ops = [HeckeOpId::SplitT1(2), HeckeOpId::SplitT1(3)];
        let phi = sys("phi", &[5, 7]);
        let others = vec![
            sys("a", &[6, 7]),
            sys("b", &[5 + 13, 7 + 13 * 5]),
            sys("c", &[5 + 13i64.pow(3), 7 - 2 * 13i64.pow(3)]),
            phi.clone(),
        ];
        let rep = maass_ideal_report(&phi, &others, p, &ops, 64).unwrap();
        let labels: Vec<_> = rep.entries.iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, ["phi", "c", "b", "a"]);
        assert!(rep.entries[0].is_self);
        assert_eq!(rep.max_depth(), Some(Valuation::Finite(3)));
        assert!(rep.to_string().contains("(self)"));
    }

    #[test]
    fn shift_is_a_unit() {
        let p = &primes_above(&Ring::integers(), 13).unwrap()[0];
        let r = Ring::integers();
        let op = HeckeOpId::InertUp(3);
        let mk = |v: i64, s: i64| EigenSystem {
            label: "x".into(),
            values: [(op, Eigenvalue { value: Elem::from_int(&r, v), shift: s })].into(),
            is_maass: true,
        };
        let a = mk(81 * 10, 0);
        let b = mk(10 + 169, 4);
        let e = eigen_congruence(&a, &b, p, &[op], 64).unwrap();
        assert_eq!(e.depth, Valuation::Finite(2));
        assert!(eigen_congruence(&a, &sys("y", &[1]), p, &[op], 64).is_err());
    }
}
