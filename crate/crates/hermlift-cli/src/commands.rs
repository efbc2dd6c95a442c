//! Command bodies. Each returns a [`Report`] and, for commands that produce a
//! file, its full text; `main` writes the file only after success.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hermlift::arith::primes_upto;
use hermlift::congr::{maass_ideal_report, table_congruence, EigenSystem};
use hermlift::elliptic::{antisymmetrize, parse_newform, perturb, synthetic_newform, NewformData};
use hermlift::hecke::{act_inert, act_split_on_lift, output_bounds, HeckeOpId};
use hermlift::lfun::{primes_above_k, std_factor_lift, verify_factorization};
use hermlift::maass::{
    alpha_from_check, build_lift, check_maass, descend_table, Bounds, CoeffTable, MaassError, MaassTuple,
    NORMALIZATION_NOTE,
};
use hermlift::quadfield::{split_primes, inert_primes, ClassChar, ClassGroup, FieldParams};
use hermlift::ring::{primes_above, Elem, Ring};

use crate::error::CliError;
use crate::report::Report;

pub struct Produced {
    pub report: Report,
    pub file: Option<String>,
}

impl Produced {
    fn report(report: Report) -> Produced {
        Produced { report, file: None }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn load_newform(path: &Path) -> Result<NewformData, CliError> {
    let mut f = parse_newform(&read(path)?)?;
    if f.label.is_empty() {
        f.label = file_label(path);
    }
    Ok(f)
}

pub fn load_table(path: &Path) -> Result<CoeffTable, CliError> {
    Ok(CoeffTable::parse(&read(path)?)?)
}

fn file_label(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn elem_json(e: &Elem) -> Value {
    json!({
        "num": e.numerators().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "den": e.denominator().to_string(),
    })
}

fn character(cg: &ClassGroup, index: usize) -> Result<ClassChar, CliError> {
    let chars = cg.characters()?;
    chars
        .get(index)
        .cloned()
        .ok_or_else(|| CliError::Usage(format!("character index {index} out of range (h = {})", chars.len())))
}

pub fn ring_by_name(name: &str) -> Result<Arc<Ring>, CliError> {
    match name {
        "integers" | "z" | "Z" => Ok(Ring::integers()),
        "gaussian" | "zi" | "Z[i]" => Ok(Ring::gaussian()),
        other => Err(CliError::Usage(format!("unknown ring `{other}` (integers, gaussian)"))),
    }
}

pub fn classgroup(d: i64) -> Result<Produced, CliError> {
    let cg = ClassGroup::new(d)?;
    let mut r = Report::new();
    r.push(format!("D={d} h={}", cg.order()), json!({"record": "classgroup", "d": d, "h": cg.order()}));
    for (i, f) in cg.forms.iter().enumerate() {
        r.push(
            format!("form {i} {f}"),
            json!({"record": "form", "index": i, "a": f.a, "b": f.b, "c": f.c}),
        );
    }
    for (i, row) in cg.composition.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|j| j.to_string()).collect();
        r.push(format!("compose {i}: {}", cells.join(" ")), json!({"record": "compose", "row": i, "values": row}));
    }
    for (i, chi) in cg.characters()?.iter().enumerate() {
        let ex: Vec<String> = chi.exponents.iter().map(|e| e.to_string()).collect();
        r.push(
            format!("chi {i} order {} exponents {}", chi.order, ex.join(" ")),
            json!({"record": "character", "index": i, "order": chi.order, "exponents": chi.exponents}),
        );
    }
    Ok(Produced::report(r))
}

pub fn lift(newform: &Path, chi_index: usize, bounds: Bounds) -> Result<Produced, CliError> {
    let f = load_newform(newform)?;
    let cg = ClassGroup::new(f.d)?;
    let chi = character(&cg, chi_index)?;
    let n_max = bounds.det.max(1) as usize;
    let mut r = Report::new();
    if antisymmetrize(&f, n_max)?.is_zero() {
        r.warn("self-conjugate input: the lift is identically zero");
    }
    let t = build_lift(&f, &chi, n_max)?;
    let table = t.table(bounds)?;
    let support = t.alpha.values.iter().skip(1).filter(|v| !v.is_zero()).count();
    r.push(
        format!("lift {} D={} k={} chi={chi_index}", f.label, f.d, f.k),
        json!({"record": "lift", "label": f.label, "d": f.d, "k": f.k, "chi": chi_index}),
    );
    r.push(
        format!("alpha support {support} of {n_max}"),
        json!({"record": "alpha_support", "nonzero": support, "n_max": n_max}),
    );
    r.push(
        format!("table points {} bounds {} {}", table.len(), bounds.det, bounds.diag),
        json!({"record": "table", "points": table.len(), "bound_det": bounds.det, "bound_diag": bounds.diag}),
    );
    r.push(format!("note {NORMALIZATION_NOTE}"), json!({"record": "note", "text": NORMALIZATION_NOTE}));
    Ok(Produced {
        report: r,
        file: Some(table.to_text()),
    })
}

/// Largest `n` such that every `m <= n` is pinned down by the check.
fn constrained_prefix(t: &CoeffTable, unconstrained: &[u64]) -> usize {
    let top = t.bounds.det.max(0) as u64;
    unconstrained.iter().copied().filter(|&n| n >= 1).min().map_or(top, |n| n - 1) as usize
}

/// Apply `op` to a table. A Maass input is first extended through its own
/// `alpha`, so the coset sums may read points outside the table; `strict`
/// (or a non-Maass input) restricts evaluation to the table's points.
pub fn hecke(table: &Path, op: HeckeOpId, strict: bool) -> Result<Produced, CliError> {
    let t = load_table(table)?;
    op.validate(t.d)?;
    let check = check_maass(&t);
    let extended = check.witness.is_none() && !strict;
    if op.is_split() && !extended {
        return Err(match check.witness {
            Some(h) => MaassError::NotMaass(h).into(),
            None => CliError::Usage(format!("{op} acts through alpha; drop --strict")),
        });
    }
    let out = if extended {
        let n = constrained_prefix(&t, &check.unconstrained);
        let alpha = alpha_from_check(&t, &check, n)?;
        let lift = MaassTuple::from_alpha(&alpha, &t.chi, "table")?;
        let p2 = (op.prime() * op.prime()) as usize;
        let reach = match op {
            HeckeOpId::InertUp(_) => p2 * p2,
            _ => p2,
        };
        if op.is_split() {
            let image = act_split_on_lift(&lift, op, &ClassGroup::new(t.d)?)?;
            let det = t.bounds.det.min(image.alpha.n_max() as i64);
            image.table(Bounds::new(det, t.bounds.diag))?
        } else {
            let det = t.bounds.det.min((n / reach) as i64);
            act_inert(&lift, op, &t.chi, Bounds::new(det, t.bounds.diag))?
        }
    } else {
        let b = output_bounds(op, t.bounds, t.d)
            .ok_or_else(|| CliError::Usage(format!("table bounds too small to apply {op}")))?;
        act_inert(&t, op, &t.chi, b)?
    };
    let mut r = Report::new();
    r.push(
        format!(
            "{op} bounds {} {} -> {} {} ({})",
            t.bounds.det,
            t.bounds.diag,
            out.bounds.det,
            out.bounds.diag,
            if extended { "extended through alpha" } else { "table points only" }
        ),
        json!({
            "record": "hecke",
            "op": op.to_string(),
            "input": [t.bounds.det, t.bounds.diag],
            "output": [out.bounds.det, out.bounds.diag],
            "points": out.len(),
            "extended": extended,
        }),
    );
    if out.is_zero() {
        r.warn("output table is identically zero");
    }
    Ok(Produced {
        report: r,
        file: Some(out.to_text()),
    })
}

pub fn check(table: &Path) -> Result<Produced, CliError> {
    let t = load_table(table)?;
    let c = check_maass(&t);
    let mut r = Report::new();
    let verdict = if c.is_maass { "maass" } else { "not-maass" };
    let witness = c.witness.map(|h| h.to_string());
    r.push(
        match &witness {
            Some(h) => format!("{verdict} witness {h}"),
            None => verdict.to_string(),
        },
        json!({"record": "check_maass", "is_maass": c.is_maass, "witness": witness}),
    );
    r.push(
        format!(
            "alpha values {} unconstrained {} skipped {}",
            c.alpha.len(),
            c.unconstrained.len(),
            c.skipped
        ),
        json!({
            "record": "check_detail",
            "alpha_values": c.alpha.len(),
            "unconstrained": c.unconstrained,
            "skipped": c.skipped,
        }),
    );
    if !c.is_maass {
        r.fail();
    }
    Ok(Produced::report(r))
}

pub fn descend(table: &Path, n_max: Option<usize>) -> Result<Produced, CliError> {
    let t = load_table(table)?;
    let n_max = match n_max {
        Some(n) => n,
        None => constrained_prefix(&t, &check_maass(&t).unconstrained),
    };
    let comps = descend_table(&t, n_max)?;
    let mut r = Report::new();
    r.push(
        format!("descend n_max {n_max} components {}", comps.len()),
        json!({"record": "descend", "n_max": n_max, "components": comps.len(), "note": NORMALIZATION_NOTE}),
    );
    for (b, q) in comps.iter().enumerate() {
        for n in 1..=n_max {
            let c = q.get(n);
            r.push(format!("{b} {n} {c}"), json!({"record": "coeff", "class": b, "n": n, "value": elem_json(c)}));
        }
    }
    Ok(Produced::report(r))
}

pub fn euler(newform: &Path, primes: Option<Vec<u64>>, chi_index: usize, verify: bool) -> Result<Produced, CliError> {
    let f = load_newform(newform)?;
    let cg = ClassGroup::new(f.d)?;
    let chi = character(&cg, chi_index)?;
    let primes = primes.unwrap_or_else(|| primes_upto(49));
    let mut r = Report::new();
    for p in primes {
        if p == f.d as u64 {
            r.warn(format!("skipping the ramified prime {p}"));
            continue;
        }
        for kp in primes_above_k(&cg, p)? {
            let std = std_factor_lift(&f, &kp, &chi)?;
            r.push(
                format!("{kp} standard {std}"),
                json!({
                    "record": "euler",
                    "p": p,
                    "norm": kp.norm,
                    "class": kp.class,
                    "coeffs": std.coeffs.iter().map(elem_json).collect::<Vec<_>>(),
                }),
            );
            if verify {
                let c = verify_factorization(&f, &kp, &chi)?;
                let verdict = if c.ok { "OK" } else { "FAIL" };
                r.push(
                    format!("{kp} product {verdict}"),
                    json!({"record": "product_check", "p": p, "norm": kp.norm, "class": kp.class, "ok": c.ok}),
                );
                if !c.ok {
                    r.fail();
                }
            }
        }
    }
    Ok(Produced::report(r))
}

/// Default operators for eigenvalue comparisons: `T1`, `T2` at the first two
/// split primes and `T0`, `T` at the first inert prime.
pub fn default_ops(d: i64) -> Vec<HeckeOpId> {
    let mut ops = Vec::new();
    for p in split_primes(d, 2) {
        ops.push(HeckeOpId::SplitT1(p));
        ops.push(HeckeOpId::SplitT2(p));
    }
    for p in inert_primes(d, 1) {
        ops.push(HeckeOpId::InertT0(p));
        ops.push(HeckeOpId::InertT(p));
    }
    ops
}

pub struct CongruenceArgs<'a> {
    pub files: &'a [PathBuf],
    pub ell: u64,
    pub cap: i64,
    pub chi_index: usize,
    pub ops: Option<Vec<HeckeOpId>>,
    pub min_depth: Option<i64>,
}

fn is_table(text: &str) -> bool {
    text.lines().next().map(str::trim) == Some("hermlift-table v1")
}

pub fn congruence(args: &CongruenceArgs<'_>) -> Result<Produced, CliError> {
    let (first, rest) = args
        .files
        .split_first()
        .ok_or_else(|| CliError::Usage("congruence needs at least two files".into()))?;
    if rest.is_empty() {
        return Err(CliError::Usage("congruence needs at least two files".into()));
    }
    let mut r = Report::new();
    let mut best = None;
    if is_table(&read(first)?) {
        let t0 = load_table(first)?;
        let prime = primes_above(&t0.ring, args.ell)?.remove(0);
        r.push(format!("lower-bound ledger at {prime}"), json!({"record": "ledger", "prime": prime.to_string()}));
        for path in rest {
            let t = load_table(path)?;
            let v = table_congruence(&t0, &t, &prime, args.cap)?;
            let label = file_label(path);
            r.push(
                format!("{label}\t{}", v.display(args.cap)),
                json!({"record": "depth", "label": label, "depth": v.lower_bound(args.cap), "exact": matches!(v, hermlift::ring::Valuation::Finite(_))}),
            );
            best = best.max(Some(v.lower_bound(args.cap)));
        }
    } else {
        let forms = args.files.iter().map(|p| load_newform(p)).collect::<Result<Vec<_>, _>>()?;
        let d = forms[0].d;
        let cg = ClassGroup::new(d)?;
        let chi = character(&cg, args.chi_index)?;
        let ops = args.ops.clone().unwrap_or_else(|| default_ops(d));
        FieldParams::new(d, forms[0].k)?;
        let ring = forms[0].ring.with_cyclotomic(chi.order);
        let prime = primes_above(&ring, args.ell)?.remove(0);
        let systems = forms
            .iter()
            .zip(args.files)
            .map(|(f, p)| {
                let mut s = EigenSystem::of_lift(f, &chi, &cg, &ops)?;
                s.label = file_label(p);
                Ok(s)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let rep = maass_ideal_report(&systems[0], &systems[1..], &prime, &ops, args.cap)?;
        r.push(format!("lower-bound ledger at {}", rep.prime), json!({"record": "ledger", "prime": rep.prime}));
        for e in &rep.entries {
            let per_op: Vec<Value> = e
                .per_op
                .iter()
                .map(|(op, v)| json!({"op": op.to_string(), "depth": v.lower_bound(args.cap)}))
                .collect();
            r.push(
                format!("{}\t{}", e.label, e.depth.display(args.cap)),
                json!({"record": "depth", "label": e.label, "depth": e.depth.lower_bound(args.cap), "self": e.is_self, "per_op": per_op}),
            );
        }
        best = rep.max_depth().map(|v| v.lower_bound(args.cap));
    }
    let shown = best.map_or("none".to_string(), |b| b.to_string());
    r.push(format!("max {shown}"), json!({"record": "max_depth", "depth": best}));
    if let Some(m) = args.min_depth {
        if best.is_none_or(|b| b < m) {
            r.fail();
        }
    }
    Ok(Produced::report(r))
}

pub struct SynthArgs<'a> {
    pub field: i64,
    pub k: u32,
    pub ring: &'a str,
    pub p_max: u64,
    pub coeff_bound: i64,
    pub seed: u64,
    pub like: Option<&'a Path>,
    pub modulus: Option<u64>,
    pub label: Option<&'a str>,
}

pub fn synth(args: &SynthArgs<'_>) -> Result<Produced, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut f = match (args.like, args.modulus) {
        (Some(path), Some(m)) => perturb(&load_newform(path)?, &m.into(), args.coeff_bound, &mut rng),
        (None, None) => synthetic_newform(&ring_by_name(args.ring)?, args.field, args.k, args.p_max, args.coeff_bound, &mut rng)?,
        _ => return Err(CliError::Usage("--like and --modulus go together".into())),
    };
    f.label = args.label.map_or_else(|| format!("synthetic-{}", args.seed), str::to_string);
    let mut r = Report::new();
    r.push(
        format!("newform {} D={} k={} primes {}", f.label, f.d, f.k, f.ap.len()),
        json!({"record": "synth", "label": f.label, "d": f.d, "k": f.k, "primes": f.ap.len(), "seed": args.seed}),
    );
    Ok(Produced {
        report: r,
        file: Some(f.to_text()),
    })
}
