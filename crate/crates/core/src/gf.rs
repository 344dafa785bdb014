//! Exact arithmetic in F_q, q = p^m with p an odd prime.
//!
//! Elements are polynomial residues modulo a monic irreducible of degree m,
//! encoded canonically as integers: the coefficient vector (c_0, ..., c_{m-1})
//! becomes the value `sum c_i * p^i` in `[0, q)`.  All operations are exact;
//! for small fields multiplication runs through discrete log/exp tables, above
//! that through direct polynomial arithmetic.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Fields up to this size get log/exp tables at construction.
pub const TABLE_THRESHOLD: u64 = 1 << 20;

/// Hard cap on the field size; keeps every intermediate product in `u64`.
pub const MAX_Q: u64 = 1 << 32;

const MAX_M: usize = 32;

/// Description of a concrete field representation: characteristic, extension
/// degree and the monic irreducible modulus (coefficients low degree first,
/// length m + 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub m: u32,
    pub modulus: Vec<u64>,
}

/// A field element in canonical integer encoding.  Only meaningful together
/// with the [`FieldCtx`] it came from; the ordering is the encoding order.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub(crate) u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FieldSpec {
    /// Validates a user-supplied representation: p an odd prime, the modulus
    /// monic of degree m with coefficients below p, and irreducible.
    pub fn new(p: u64, m: u32, modulus: Vec<u64>) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::UnsupportedField(
                "even characteristic is not supported".into(),
            ));
        }
        if m == 0 || m as usize > MAX_M {
            return Err(Error::UnsupportedField(format!(
                "extension degree {m} out of range"
            )));
        }
        let q = checked_pow(p, m).ok_or_else(|| {
            Error::UnsupportedField(format!("p^m = {p}^{m} exceeds the supported range"))
        })?;
        if q > MAX_Q {
            return Err(Error::UnsupportedField(format!(
                "field size {q} exceeds the supported range"
            )));
        }
        if modulus.len() != m as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                m + 1,
                modulus.len()
            )));
        }
        if modulus[m as usize] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(format!(
                "coefficients must lie in [0, {p})"
            )));
        }
        if !poly_is_irreducible(p, &modulus) {
            return Err(Error::ReducibleModulus { p });
        }
        Ok(FieldSpec { p, m, modulus })
    }

    /// The default representation of F_{p^m}: the lexicographically smallest
    /// monic irreducible of degree m, coefficients compared low degree first.
    pub fn find(p: u64, m: u32) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::UnsupportedField(
                "even characteristic is not supported".into(),
            ));
        }
        if m == 1 {
            // Degree one: x itself, giving the prime field F_p[x]/(x).
            return FieldSpec::new(p, 1, vec![0, 1]);
        }
        if m as usize > MAX_M || checked_pow(p, m).is_none_or(|q| q > MAX_Q) {
            return Err(Error::UnsupportedField(format!(
                "field size p^m = {p}^{m} exceeds the supported range"
            )));
        }
        // Count through coefficient tuples with c_0 as the most significant
        // digit, which is exactly the low-degree-first lexicographic order.
        let mut coeffs = vec![0u64; m as usize];
        loop {
            let mut candidate = coeffs.clone();
            candidate.push(1);
            if poly_is_irreducible(p, &candidate) {
                return FieldSpec::new(p, m, candidate);
            }
            let mut pos = m as usize;
            loop {
                if pos == 0 {
                    return Err(Error::InvalidModulus(format!(
                        "no irreducible of degree {m} over F_{p} found"
                    )));
                }
                pos -= 1;
                coeffs[pos] += 1;
                if coeffs[pos] < p {
                    break;
                }
                coeffs[pos] = 0;
            }
        }
    }

    pub fn q(&self) -> u64 {
        checked_pow(self.p, self.m).expect("validated at construction")
    }
}

/// A ready-to-use field: validated spec, a fixed primitive element, the
/// factorization of q - 1, and (for small q) discrete log/exp tables.
pub struct FieldCtx {
    spec: FieldSpec,
    q: u64,
    generator: Fe,
    q1_prime_factors: Vec<u64>,
    log: Option<Vec<u32>>,
    exp: Option<Vec<u32>>,
}

impl FieldCtx {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        Self::with_table_threshold(spec, TABLE_THRESHOLD)
    }

    /// Like [`FieldCtx::new`] but with an explicit table cutoff; mainly useful
    /// for forcing the table-free arithmetic paths in tests.
    pub fn with_table_threshold(spec: FieldSpec, threshold: u64) -> Result<Self> {
        // Re-validate: a FieldSpec may have been deserialized rather than
        // built through the checked constructors.
        let spec = FieldSpec::new(spec.p, spec.m, spec.modulus)?;
        let q = spec.q();
        let q1_prime_factors = distinct_prime_factors(q - 1);
        let generator = Fe(find_primitive_raw(&spec, q, &q1_prime_factors));
        let mut ctx = FieldCtx {
            spec,
            q,
            generator,
            q1_prime_factors,
            log: None,
            exp: None,
        };
        if q <= threshold {
            ctx.build_tables();
        }
        Ok(ctx)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let mut exp = vec![0u32; q - 1];
        let mut log = vec![0u32; q];
        let mut cur = 1u64;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur as u32;
            log[cur as usize] = i as u32;
            cur = raw_mul(&self.spec, cur, self.generator.0);
        }
        debug_assert_eq!(cur, 1, "generator order must be q - 1");
        self.exp = Some(exp);
        self.log = Some(log);
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn m(&self) -> u32 {
        self.spec.m
    }

    pub fn has_tables(&self) -> bool {
        self.log.is_some()
    }

    /// The smallest-encoding element of multiplicative order q - 1.
    pub fn generator(&self) -> Fe {
        self.generator
    }

    pub fn minus_one(&self) -> Fe {
        self.neg(Fe::ONE)
    }

    /// Checked conversion from a canonical encoding.
    pub fn element(&self, value: u64) -> Result<Fe> {
        if value < self.q {
            Ok(Fe(value))
        } else {
            Err(Error::ElementOutOfRange { value, q: self.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    /// Coefficient vector (c_0, ..., c_{m-1}) of an element.
    pub fn coeffs(&self, x: Fe) -> Vec<u64> {
        let mut out = vec![0u64; self.spec.m as usize];
        let mut v = x.0;
        for slot in out.iter_mut() {
            *slot = v % self.spec.p;
            v /= self.spec.p;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fe> {
        if coeffs.len() != self.spec.m as usize {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                self.spec.m,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= self.spec.p) {
            return Err(Error::ElementOutOfRange {
                value: *coeffs.iter().max().unwrap(),
                q: self.q,
            });
        }
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            v = v * self.spec.p + c;
        }
        Ok(Fe(v))
    }

    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        let p = self.spec.p;
        if self.spec.m == 1 {
            let s = x.0 + y.0;
            return Fe(if s >= p { s - p } else { s });
        }
        let mut out = 0u64;
        let mut place = 1u64;
        let (mut a, mut b) = (x.0, y.0);
        for _ in 0..self.spec.m {
            let s = a % p + b % p;
            out += (if s >= p { s - p } else { s }) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        Fe(out)
    }

    pub fn neg(&self, x: Fe) -> Fe {
        let p = self.spec.p;
        if self.spec.m == 1 {
            return Fe(if x.0 == 0 { 0 } else { p - x.0 });
        }
        let mut out = 0u64;
        let mut place = 1u64;
        let mut a = x.0;
        for _ in 0..self.spec.m {
            let c = a % p;
            out += (if c == 0 { 0 } else { p - c }) * place;
            a /= p;
            place *= p;
        }
        Fe(out)
    }

    pub fn sub(&self, x: Fe, y: Fe) -> Fe {
        let p = self.spec.p;
        if self.spec.m == 1 {
            return Fe(if x.0 >= y.0 { x.0 - y.0 } else { x.0 + p - y.0 });
        }
        let mut out = 0u64;
        let mut place = 1u64;
        let (mut a, mut b) = (x.0, y.0);
        for _ in 0..self.spec.m {
            let (ca, cb) = (a % p, b % p);
            out += (if ca >= cb { ca - cb } else { ca + p - cb }) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        Fe(out)
    }

    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        if x.0 == 0 || y.0 == 0 {
            return Fe::ZERO;
        }
        if let (Some(log), Some(exp)) = (&self.log, &self.exp) {
            let q1 = self.q - 1;
            let mut e = log[x.0 as usize] as u64 + log[y.0 as usize] as u64;
            if e >= q1 {
                e -= q1;
            }
            return Fe(exp[e as usize] as u64);
        }
        Fe(raw_mul(&self.spec, x.0, y.0))
    }

    pub fn inv(&self, x: Fe) -> Result<Fe> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if let (Some(log), Some(exp)) = (&self.log, &self.exp) {
            let q1 = self.q - 1;
            let e = (q1 - log[x.0 as usize] as u64) % q1;
            return Ok(Fe(exp[e as usize] as u64));
        }
        Ok(self.pow(x, self.q - 2))
    }

    /// x^e by square-and-multiply; `pow(x, 0)` is 1 for every x, including
    /// x = 0 (the empty product, matching the all-ones bottom row of the
    /// evaluation matrices even when 0 is an evaluation point).
    pub fn pow(&self, x: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if x.0 == 0 {
            return Fe::ZERO;
        }
        if let (Some(log), Some(exp)) = (&self.log, &self.exp) {
            let q1 = self.q - 1;
            let e = ((log[x.0 as usize] as u128 * e as u128) % q1 as u128) as u64;
            return Fe(exp[e as usize] as u64);
        }
        let mut base = x;
        let mut acc = Fe::ONE;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Quadratic character: +1 on nonzero squares, -1 on non-squares, error at 0.
    pub fn eta(&self, x: Fe) -> Result<i8> {
        if x.0 == 0 {
            return Err(Error::UndefinedCharacterArgument);
        }
        if let Some(log) = &self.log {
            return Ok(if log[x.0 as usize] % 2 == 0 { 1 } else { -1 });
        }
        Ok(if self.pow(x, (self.q - 1) / 2) == Fe::ONE {
            1
        } else {
            -1
        })
    }

    /// Canonical square root: the root with the smaller integer encoding.
    /// `sqrt(0)` is 0; non-squares report [`Error::NonResidue`].
    pub fn sqrt(&self, x: Fe) -> Result<Fe> {
        if x.0 == 0 {
            return Ok(Fe::ZERO);
        }
        let root = if let (Some(log), Some(exp)) = (&self.log, &self.exp) {
            let l = log[x.0 as usize] as u64;
            if l % 2 != 0 {
                return Err(Error::NonResidue { value: x.0 });
            }
            Fe(exp[(l / 2) as usize] as u64)
        } else {
            if self.eta(x)? != 1 {
                return Err(Error::NonResidue { value: x.0 });
            }
            self.sqrt_tonelli_shanks(x)
        };
        let other = self.neg(root);
        Ok(if other.0 < root.0 { other } else { root })
    }

    fn sqrt_tonelli_shanks(&self, x: Fe) -> Fe {
        let q1 = self.q - 1;
        let s = q1.trailing_zeros();
        let t = q1 >> s;
        if s == 1 {
            // q = 3 mod 4
            return self.pow(x, (self.q + 1) / 4);
        }
        // The primitive element is a non-residue in every odd-order field.
        let mut c = self.pow(self.generator, t);
        let mut cur = self.pow(x, t);
        let mut root = self.pow(x, (t + 1) / 2);
        let mut m = s;
        while cur != Fe::ONE {
            let mut i = 0;
            let mut probe = cur;
            while probe != Fe::ONE {
                probe = self.mul(probe, probe);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            root = self.mul(root, b);
            c = self.mul(b, b);
            cur = self.mul(cur, c);
            m = i;
        }
        root
    }

    /// Relative trace onto the index-2 subfield: x + x^r, defined when q = r^2
    /// and r is a power of p.  The result is verified to be fixed by x -> x^r.
    pub fn trace_to_subfield(&self, x: Fe, r: u64) -> Result<Fe> {
        if r.checked_mul(r) != Some(self.q) || !is_power_of(r, self.spec.p) {
            return Err(Error::InvalidSubfield { r, q: self.q });
        }
        let y = self.add(x, self.pow(x, r));
        if self.pow(y, r) != y {
            return Err(Error::VerificationFailed(format!(
                "trace of {x} landed outside the subfield of size {r}"
            )));
        }
        Ok(y)
    }

    /// All elements of the subfield of size r (requires r = p^j with j | m),
    /// sorted by encoding.
    pub fn subfield_elements(&self, r: u64) -> Result<Vec<Fe>> {
        let j = power_exponent(r, self.spec.p)
            .ok_or(Error::InvalidSubfield { r, q: self.q })?;
        if j == 0 || self.spec.m % j != 0 {
            return Err(Error::InvalidSubfield { r, q: self.q });
        }
        let mut out = Vec::with_capacity(r as usize);
        out.push(Fe::ZERO);
        let gamma = self.pow(self.generator, (self.q - 1) / (r - 1));
        let mut cur = Fe::ONE;
        for _ in 0..r - 1 {
            out.push(cur);
            cur = self.mul(cur, gamma);
        }
        debug_assert_eq!(cur, Fe::ONE);
        out.sort_unstable();
        Ok(out)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: Fe) -> Result<u64> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut ord = self.q - 1;
        for &f in &self.q1_prime_factors {
            while ord % f == 0 && self.pow(x, ord / f) == Fe::ONE {
                ord /= f;
            }
        }
        Ok(ord)
    }
}

/// Plain modular product of two encodings, without tables.
fn raw_mul(spec: &FieldSpec, x: u64, y: u64) -> u64 {
    let p = spec.p;
    if spec.m == 1 {
        return ((x as u128 * y as u128) % p as u128) as u64;
    }
    let m = spec.m as usize;
    let mut a = [0u64; MAX_M];
    let mut b = [0u64; MAX_M];
    let (mut xv, mut yv) = (x, y);
    for i in 0..m {
        a[i] = xv % p;
        b[i] = yv % p;
        xv /= p;
        yv /= p;
    }
    let mut acc = [0u64; 2 * MAX_M];
    for i in 0..m {
        if a[i] == 0 {
            continue;
        }
        for j in 0..m {
            let cell = &mut acc[i + j];
            *cell = (*cell + a[i] * b[j]) % p;
        }
    }
    // Reduce x^d = -(modulus minus leading term) for d from high to low.
    for d in (m..2 * m - 1).rev() {
        let c = acc[d];
        if c == 0 {
            continue;
        }
        acc[d] = 0;
        for j in 0..m {
            let mj = spec.modulus[j];
            if mj != 0 {
                let cell = &mut acc[d - m + j];
                *cell = (*cell + c * (p - mj)) % p;
            }
        }
    }
    let mut out = 0u64;
    for i in (0..m).rev() {
        out = out * p + acc[i];
    }
    out
}

fn raw_pow(spec: &FieldSpec, x: u64, mut e: u64) -> u64 {
    if e == 0 {
        return 1;
    }
    let mut base = x;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = raw_mul(spec, acc, base);
        }
        base = raw_mul(spec, base, base);
        e >>= 1;
    }
    acc
}

/// Smallest-encoding element of order q - 1, verified against the prime
/// factorization of q - 1.
fn find_primitive_raw(spec: &FieldSpec, q: u64, factors: &[u64]) -> u64 {
    'outer: for v in 1..q {
        for &f in factors {
            if raw_pow(spec, v, (q - 1) / f) == 1 {
                continue 'outer;
            }
        }
        return v;
    }
    unreachable!("every finite field has a primitive element")
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn is_power_of(n: u64, p: u64) -> bool {
    power_exponent(n, p).is_some()
}

/// The j with p^j = n, if n is an exact power of p (j >= 1).
pub(crate) fn power_exponent(n: u64, p: u64) -> Option<u32> {
    if n < p {
        return None;
    }
    let mut v = n;
    let mut j = 0;
    while v > 1 {
        if v % p != 0 {
            return None;
        }
        v /= p;
        j += 1;
    }
    Some(j)
}

/// Factors n as p^m for an odd prime p, the shape every supported field
/// size must have.
pub fn factor_prime_power(n: u64) -> Result<(u64, u32)> {
    if n < 3 {
        return Err(Error::UnsupportedField(format!(
            "{n} is not an odd prime power"
        )));
    }
    let mut p = 0;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            p = d;
            break;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if p == 0 {
        p = n; // n itself is prime
    }
    if p == 2 {
        return Err(Error::UnsupportedField(
            "even characteristic is not supported".into(),
        ));
    }
    match power_exponent(n, p) {
        Some(m) => Ok((p, m)),
        None => Err(Error::UnsupportedField(format!(
            "{n} is not a prime power"
        ))),
    }
}

// --- polynomial arithmetic over F_p, used only for modulus validation ---

fn poly_trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_mul_mod(p: u64, a: &[u64], b: &[u64], modulus: &[u64]) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(p, prod, modulus)
}

fn poly_rem(p: u64, mut a: Vec<u64>, modulus: &[u64]) -> Vec<u64> {
    let m = modulus.len() - 1;
    while a.len() > m {
        let d = a.len() - 1;
        let c = a[d];
        if c != 0 {
            for j in 0..m {
                let mj = modulus[j];
                if mj != 0 {
                    a[d - m + j] = (a[d - m + j] + c * (p - mj)) % p;
                }
            }
        }
        a.pop();
    }
    poly_trim(&mut a);
    a
}

fn poly_pow_mod(p: u64, base: &[u64], mut e: u64, modulus: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(p, &acc, &b, modulus);
        }
        b = poly_mul_mod(p, &b, &b, modulus);
        e >>= 1;
    }
    acc
}

fn poly_gcd(p: u64, mut a: Vec<u64>, mut b: Vec<u64>) -> Vec<u64> {
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_mod_general(p, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn poly_mod_general(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut b = b.to_vec();
    poly_trim(&mut b);
    let mut a = a.to_vec();
    poly_trim(&mut a);
    let db = b.len() - 1;
    if db == 0 {
        return vec![0]; // nonzero constant divides everything
    }
    let lead_inv = mod_inv(b[db], p);
    while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
        let da = a.len() - 1;
        let c = a[da] * lead_inv % p;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    let idx = da - db + j;
                    a[idx] = (a[idx] + c * (p - bj)) % p;
                }
            }
        }
        a.pop();
        poly_trim(&mut a);
    }
    a
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p is prime here; Fermat.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Irreducibility over F_p: root exhaustion for degree <= 3, and for higher
/// degree gcd(f, x^{p^i} - x) = 1 for every i up to deg/2.
fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    if m <= 3 {
        for v in 0..p {
            let mut acc = 0u64;
            for &c in f.iter().rev() {
                acc = (acc * v + c) % p;
            }
            if acc == 0 {
                return false;
            }
        }
        return true;
    }
    let mut h = vec![0u64, 1]; // x
    for _ in 1..=m / 2 {
        h = poly_pow_mod(p, &h, p, f); // now x^{p^i} mod f
        // h - x
        let mut diff = h.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        poly_trim(&mut diff);
        let g = poly_gcd(p, f.to_vec(), diff);
        if !(g.len() == 1 && g[0] != 0) {
            return false;
        }
    }
    true
}
