//! Dense polynomials over F_l (l an odd prime below 2^31), low degree first.
//! Enough for squarefree factorization of a modulus m(x) mod l.

pub type FPoly = Vec<u64>;

fn trim(mut a: FPoly) -> FPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &FPoly) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

fn inv_mod(a: u64, l: u64) -> u64 {
    pow_mod(a, l - 2, l)
}

fn pow_mod(mut b: u64, mut e: u64, l: u64) -> u64 {
    let mut r = 1u64;
    b %= l;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % l;
        }
        b = b * b % l;
        e >>= 1;
    }
    r
}

pub fn from_coeffs(c: impl IntoIterator<Item = u64>, l: u64) -> FPoly {
    trim(c.into_iter().map(|x| x % l).collect())
}

pub fn sub(a: &FPoly, b: &FPoly, l: u64) -> FPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + l - y) % l
            })
            .collect(),
    )
}

pub fn mul(a: &FPoly, b: &FPoly, l: u64) -> FPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % l;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &FPoly, b: &FPoly, l: u64) -> (FPoly, FPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let lead_inv = inv_mod(b[db], l);
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i] * lead_inv % l;
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for j in 0..=db {
            r[i - db + j] = (r[i - db + j] + l - c * b[j] % l) % l;
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem(a: &FPoly, b: &FPoly, l: u64) -> FPoly {
    divrem(a, b, l).1
}

pub fn monic(a: &FPoly, l: u64) -> FPoly {
    match a.last() {
        None => Vec::new(),
        Some(&lead) => {
            let inv = inv_mod(lead, l);
            a.iter().map(|&c| c * inv % l).collect()
        }
    }
}

pub fn gcd(a: &FPoly, b: &FPoly, l: u64) -> FPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = rem(&x, &y, l);
        x = y;
        y = r;
    }
    monic(&x, l)
}

pub fn pow_mod_poly(base: &FPoly, mut e: u128, m: &FPoly, l: u64) -> FPoly {
    let mut result: FPoly = vec![1];
    let mut b = rem(base, m, l);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &b, l), m, l);
        }
        b = rem(&mul(&b, &b, l), m, l);
        e >>= 1;
    }
    rem(&result, m, l)
}

/// Distinct monic irreducible factors of a squarefree monic `f`.
pub fn factor_squarefree(f: &FPoly, l: u64) -> Vec<FPoly> {
    let mut out = Vec::new();
    let mut f = monic(f, l);
    let x: FPoly = vec![0, 1];
    let mut h = x.clone();
    let mut d = 1usize;
    while let Some(df) = degree(&f) {
        if df < 2 * d {
            if df > 0 {
                out.push(f.clone());
            }
            break;
        }
        h = pow_mod_poly(&h, l as u128, &f, l);
        let g = gcd(&f, &sub(&h, &x, l), l);
        if degree(&g).unwrap_or(0) > 0 {
            equal_degree(&g, d, l, &mut out);
            f = divrem(&f, &g, l).0;
            h = rem(&h, &f, l);
        }
        d += 1;
    }
    out.sort();
    out
}

fn equal_degree(g: &FPoly, d: usize, l: u64, out: &mut Vec<FPoly>) {
    let n = degree(g).unwrap();
    if n == d {
        out.push(g.clone());
        return;
    }
    let e = (((l as u128).pow(d as u32)) - 1) / 2;
    // Deterministic sweep over nonconstant trial polynomials of degree < n.
    let mut idx: u128 = l as u128;
    loop {
        let mut t = Vec::with_capacity(n);
        let mut k = idx;
        for _ in 0..n {
            t.push((k % l as u128) as u64);
            k /= l as u128;
        }
        idx += 1;
        let t = trim(t);
        if degree(&t).unwrap_or(0) == 0 {
            continue;
        }
        let s = sub(&pow_mod_poly(&t, e, g, l), &vec![1], l);
        let u = gcd(g, &s, l);
        let du = degree(&u).unwrap_or(0);
        if du > 0 && du < n {
            let v = divrem(g, &u, l).0;
            equal_degree(&u, d, l, out);
            equal_degree(&monic(&v, l), d, l, out);
            return;
        }
    }
}
