//! Finite fields GF(p^n) in a polynomial basis, backed by log/antilog tables.
//!
//! Elements are addressed by their mixed-radix index `Σ c_i p^i` where `c_i` are
//! the polynomial-basis coefficients. Index 0 is zero, index 1 is one and index
//! `p` is the class of `x`.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

/// Largest field order accepted by [`FieldCtx::new`].
pub const MAX_ORDER: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    RejectNotPrime(u32),
    #[error("modulus must be a monic polynomial of degree {0} with coefficients below p")]
    RejectBadModulus(u32),
    #[error("modulus is reducible over GF({0})")]
    RejectReducibleModulus(u32),
    #[error("element {0} does not generate the multiplicative group")]
    RejectNonPrimitive(u32),
    #[error("field order {0} exceeds 2^24")]
    RejectTooLarge(u64),
    #[error("{k} does not divide the extension degree {n}")]
    RejectNonDivisor { k: u32, n: u32 },
    #[error("quadratic character is undefined in characteristic 2")]
    RejectCharTwo,
    #[error("elements belong to different field contexts")]
    RejectMixedContexts,
    #[error("trace constraints are linearly dependent over the prime field")]
    RejectDependentConstraints,
    #[error("invalid field spec: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, FieldError>;

/// An element of a specific field context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FqElem {
    idx: u32,
    tag: u64,
}

impl FqElem {
    pub fn index(self) -> u32 {
        self.idx
    }

    pub fn tag(self) -> u64 {
        self.tag
    }
}

/// A validated GF(p^n) with its primitive element and lookup tables.
pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    prim: u32,
    tag: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u8>,
    basis_trace: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .field("primitive", &self.prim)
            .finish()
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo the prime `p`; `a` must be nonzero mod p.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    mod_pow(a as u64, p as u64 - 2, p as u64) as u32
}

/// Quadratic character of GF(p): 1 on squares, -1 on non-squares, 0 at zero.
pub fn eta0(p: u32, a: i64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if p == 2 {
        return 1;
    }
    if mod_pow(a, (p as u64 - 1) / 2, p as u64) == 1 {
        1
    } else {
        -1
    }
}

// Dense polynomials over GF(p), coefficients low to high.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        if a.is_empty() {
            a.push(0);
        }
    }

    pub fn deg(a: &[u32]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let dm = deg(m).expect("nonzero modulus");
        let lead_inv = super::inv_mod(m[dm], p) as u64;
        while let Some(da) = deg(&a) {
            if da < dm {
                break;
            }
            let c = a[da] as u64 * lead_inv % p as u64;
            for i in 0..=dm {
                let t = (c * m[i] as u64) % p as u64;
                let j = da - dm + i;
                a[j] = ((a[j] as u64 + p as u64 - t) % p as u64) as u32;
            }
        }
        trim(&mut a);
        a
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0u64; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        rem(&out, m, p)
    }

    pub fn pow_mod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut r = vec![1u32];
        let mut b = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mul_mod(&r, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        r
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let len = a.len().max(b.len());
        let mut out = vec![0u32; len];
        for i in 0..len {
            let x = *a.get(i).unwrap_or(&0);
            let y = *b.get(i).unwrap_or(&0);
            out[i] = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while deg(&b).is_some() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Distinct-degree test: no factor of degree k ≤ n/2.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let n = match deg(m) {
            Some(d) => d,
            None => return false,
        };
        if n <= 1 {
            return n == 1;
        }
        let x = vec![0u32, 1];
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = pow_mod(&h, p as u64, m, p);
            let g = gcd(&sub(&h, &x, p), m, p);
            if deg(&g).is_none_or(|d| d > 0) {
                return false;
            }
        }
        true
    }
}

pub use poly::is_irreducible as poly_is_irreducible;

/// Multiplies two elements given as coefficient vectors, reducing by `modulus`.
/// Table-free reference multiplication.
pub fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly::mul_mod(a, b, modulus, p);
    r.resize(modulus.len() - 1, 0);
    r
}

impl FieldCtx {
    /// Builds and validates GF(p^n). `primitive` is an element index; when
    /// omitted the smallest generator in index order is used.
    pub fn new(p: u32, n: u32, modulus: &[u32], primitive: Option<u32>) -> Result<Arc<FieldCtx>> {
        if !is_prime(p) {
            return Err(FieldError::RejectNotPrime(p));
        }
        let q64 = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if n == 0 || q64 > MAX_ORDER {
            if n == 0 {
                return Err(FieldError::RejectBadModulus(n));
            }
            return Err(FieldError::RejectTooLarge(q64));
        }
        if modulus.len() != n as usize + 1
            || modulus[n as usize] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(FieldError::RejectBadModulus(n));
        }
        if !poly::is_irreducible(modulus, p) {
            return Err(FieldError::RejectReducibleModulus(p));
        }
        let q = q64 as u32;
        let mut ctx = FieldCtx {
            p,
            n,
            q,
            modulus: modulus.to_vec(),
            prim: 0,
            tag: 0,
            exp: Vec::new(),
            log: Vec::new(),
            trace: Vec::new(),
            basis_trace: Vec::new(),
        };
        let order = q as u64 - 1;
        let factors = prime_factors(order);
        let is_generator = |ctx: &FieldCtx, g: u32| -> bool {
            if g == 0 || g >= q {
                return false;
            }
            let c = ctx.coeffs(g);
            let one = {
                let mut v = vec![0u32; n as usize];
                v[0] = 1;
                v
            };
            let pw = |e: u64| {
                let mut r = poly::pow_mod(&c, e, &ctx.modulus, p);
                r.resize(n as usize, 0);
                r
            };
            if pw(order) != one {
                return false;
            }
            factors.iter().all(|&r| pw(order / r) != one)
        };
        let prim = match primitive {
            Some(g) => {
                if !is_generator(&ctx, g) {
                    return Err(FieldError::RejectNonPrimitive(g));
                }
                g
            }
            None => (1..q)
                .find(|&g| is_generator(&ctx, g))
                .expect("cyclic group has a generator"),
        };
        ctx.prim = prim;
        ctx.build_tables();
        let mut h = DefaultHasher::new();
        (p, n, &ctx.modulus, prim).hash(&mut h);
        ctx.tag = h.finish();
        Ok(Arc::new(ctx))
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let n = self.n as usize;
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![u32::MAX; q];
        let mut cur = 1u32;
        if self.prim == self.p && self.n > 1 {
            for i in 0..q - 1 {
                exp.push(cur);
                log[cur as usize] = i as u32;
                cur = self.mul_x(cur);
            }
        } else {
            // multiplication by the generator as a GF(p)-linear map on coefficients
            let g = self.coeffs(self.prim);
            let cols: Vec<Vec<u32>> = (0..n)
                .map(|j| {
                    let mut e = vec![0u32; n];
                    e[j] = 1;
                    poly_mul_mod(&g, &e, &self.modulus, self.p)
                })
                .collect();
            let p = self.p;
            let mut c = vec![0u32; n];
            c[0] = 1;
            for i in 0..q - 1 {
                let idx = self.index_of(&c);
                exp.push(idx);
                log[idx as usize] = i as u32;
                let mut next = vec![0u32; n];
                for (j, col) in cols.iter().enumerate() {
                    if c[j] == 0 {
                        continue;
                    }
                    for k in 0..n {
                        next[k] = (next[k] + c[j] * col[k]) % p;
                    }
                }
                c = next;
            }
        }
        self.exp = exp;
        self.log = log;
        // Tr(x) = Σ_i x^{p^i}; on the basis then extended linearly
        let order = q as u64 - 1;
        self.basis_trace = (0..n)
            .map(|j| {
                let x = if j == 0 {
                    1
                } else {
                    self.p.pow(j as u32)
                };
                let lx = self.log[x as usize] as u64;
                let mut acc = 0u32;
                let mut e = lx;
                for _ in 0..n {
                    acc = self.add(acc, self.exp[(e % order) as usize]);
                    e = (e * self.p as u64) % order;
                }
                debug_assert!(acc < self.p);
                acc
            })
            .collect();
        let mut trace = vec![0u8; q];
        for (x, t) in trace.iter_mut().enumerate() {
            *t = self.linear_trace(x as u32) as u8;
        }
        self.trace = trace;
    }

    fn linear_trace(&self, mut x: u32) -> u32 {
        let p = self.p;
        let mut acc = 0u32;
        let mut j = 0;
        while x > 0 {
            acc = (acc + (x % p) * self.basis_trace[j]) % p;
            x /= p;
            j += 1;
        }
        acc
    }

    fn mul_x(&self, a: u32) -> u32 {
        let p = self.p;
        let n = self.n as usize;
        if p == 2 {
            let mut r = a << 1;
            if r >> n & 1 == 1 {
                let mut m = 0u32;
                for (i, &c) in self.modulus.iter().enumerate() {
                    m |= c << i;
                }
                r ^= m;
            }
            return r;
        }
        let c = self.coeffs(a);
        let top = c[n - 1];
        let mut out = vec![0u32; n];
        for i in 0..n {
            let prev = if i == 0 { 0 } else { c[i - 1] };
            out[i] = (prev + p * p - top * self.modulus[i] % p) % p;
        }
        self.index_of(&out)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Field order p^n.
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Index of the primitive element.
    pub fn primitive(&self) -> u32 {
        self.prim
    }

    pub fn tag(&self) -> u64 {
        self.tag
    }

    pub fn elem(&self, idx: u32) -> FqElem {
        assert!(idx < self.q, "index out of range");
        FqElem { idx, tag: self.tag }
    }

    pub fn check(&self, e: FqElem) -> Result<u32> {
        if e.tag != self.tag {
            return Err(FieldError::RejectMixedContexts);
        }
        Ok(e.idx)
    }

    pub fn coeffs(&self, mut idx: u32) -> Vec<u32> {
        let mut out = vec![0u32; self.n as usize];
        for c in out.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        out
    }

    pub fn index_of(&self, coeffs: &[u32]) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c % self.p)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let (mut r, mut m) = (0u32, 1u32);
        while a > 0 || b > 0 {
            r += (a % p + b % p) % p * m;
            a /= p;
            b /= p;
            m = m.wrapping_mul(p);
        }
        r
    }

    /// Multiplies by a prime-field scalar.
    pub fn smul(&self, c: u32, a: u32) -> u32 {
        let p = self.p;
        let c = c % p;
        if c == 0 {
            return 0;
        }
        if c == 1 {
            return a;
        }
        let (mut a, mut r, mut m) = (a, 0u32, 1u32);
        while a > 0 {
            r += (a % p) * c % p * m;
            a /= p;
            m = m.wrapping_mul(p);
        }
        r
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.smul(self.p - 1, a)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.q as u64 - 1)) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let o = self.q - 1;
        Some(self.exp[((o - self.log[a as usize]) % o) as usize])
    }

    /// Inverse with the convention 0^{-1} = 0 (that is, x^{q-2}).
    pub fn inv0(&self, a: u32) -> u32 {
        self.inv(a).unwrap_or(0)
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let o = self.q as u64 - 1;
        self.exp[((self.log[a as usize] as u64 % o) * (e % o) % o) as usize]
    }

    /// g^k for the stored primitive element g.
    pub fn gpow(&self, k: i64) -> u32 {
        let o = self.q as i64 - 1;
        self.exp[k.rem_euclid(o) as usize]
    }

    pub fn log(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize])
        }
    }

    /// Embeds a prime-field residue.
    pub fn from_int(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    /// Absolute trace Tr_1^n.
    #[inline]
    pub fn trace(&self, a: u32) -> u32 {
        self.trace[a as usize] as u32
    }

    /// a^{p^k}.
    pub fn frobenius(&self, a: u32, k: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let o = self.q as u64 - 1;
        let e = mod_pow(self.p as u64, k as u64, o.max(1));
        self.exp[(self.log[a as usize] as u64 * e % o) as usize]
    }

    pub fn in_subfield(&self, k: u32, a: u32) -> bool {
        self.n.is_multiple_of(k) && self.frobenius(a, k) == a
    }

    /// Tr_k^n(a) = Σ_{i < n/k} a^{p^{ki}}.
    pub fn rel_trace(&self, k: u32, a: u32) -> Result<u32> {
        if k == 0 || !self.n.is_multiple_of(k) {
            return Err(FieldError::RejectNonDivisor { k, n: self.n });
        }
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.n / k {
            acc = self.add(acc, x);
            x = self.frobenius(x, k);
        }
        Ok(acc)
    }

    pub fn trace_to_subfield(&self, k: u32, x: FqElem) -> Result<FqElem> {
        let a = self.check(x)?;
        Ok(self.elem(self.rel_trace(k, a)?))
    }

    /// Tr_1^k(a) for `a` in the subfield GF(p^k); the result is a prime-field residue.
    pub fn subfield_trace(&self, k: u32, a: u32) -> Result<u32> {
        if k == 0 || !self.n.is_multiple_of(k) {
            return Err(FieldError::RejectNonDivisor { k, n: self.n });
        }
        let mut acc = 0;
        let mut x = a;
        for _ in 0..k {
            acc = self.add(acc, x);
            x = self.frobenius(x, 1);
        }
        debug_assert!(acc < self.p);
        Ok(acc)
    }

    /// Quadratic character η of GF(q): ±1 on nonzero elements, 0 at zero.
    pub fn eta(&self, a: u32) -> Result<i64> {
        if self.p == 2 {
            return Err(FieldError::RejectCharTwo);
        }
        Ok(match self.log(a) {
            None => 0,
            Some(l) if l % 2 == 0 => 1,
            Some(_) => -1,
        })
    }

    pub fn quad_char(&self, x: FqElem) -> Result<i64> {
        let a = self.check(x)?;
        self.eta(a)
    }

    pub fn fp_rank(&self, vectors: &[FqElem]) -> Result<usize> {
        let idx: Vec<u32> = vectors
            .iter()
            .map(|&v| self.check(v))
            .collect::<Result<_>>()?;
        Ok(self.rank_of(&idx))
    }

    /// GF(p)-rank of elements given by index.
    pub fn rank_of(&self, elems: &[u32]) -> usize {
        let rows: Vec<Vec<u32>> = elems.iter().map(|&e| self.coeffs(e)).collect();
        rank_mod_p(rows, self.p)
    }

    /// Basis of {δ : Tr(w δ) = 0 for every constraint w}, row reduced.
    pub fn trace_kernel_subspace(&self, constraints: &[FqElem]) -> Result<Vec<FqElem>> {
        let w: Vec<u32> = constraints
            .iter()
            .map(|&v| self.check(v))
            .collect::<Result<_>>()?;
        Ok(self
            .trace_kernel(&w)?
            .into_iter()
            .map(|i| self.elem(i))
            .collect())
    }

    pub fn trace_kernel(&self, w: &[u32]) -> Result<Vec<u32>> {
        if w.is_empty() || self.rank_of(w) != w.len() {
            return Err(FieldError::RejectDependentConstraints);
        }
        let n = self.n as usize;
        let basis: Vec<u32> = (0..n).map(|j| self.p.pow(j as u32)).collect();
        let m: Vec<Vec<u32>> = w
            .iter()
            .map(|&wi| basis.iter().map(|&b| self.trace(self.mul(wi, b))).collect())
            .collect();
        let ker = null_space_mod_p(m, n, self.p);
        let (red, _) = rref_mod_p(ker, self.p);
        Ok(red.iter().map(|v| self.index_of(v)).collect())
    }

    /// All elements of the GF(p)-span of `basis`, in odometer order.
    pub fn span(&self, basis: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32];
        for &b in basis {
            let cur = out.clone();
            for c in 1..self.p {
                let sb = self.smul(c, b);
                out.extend(cur.iter().map(|&x| self.add(x, sb)));
            }
        }
        out
    }

    /// Index of x^j, the j-th polynomial basis element.
    pub fn basis_elem(&self, j: u32) -> u32 {
        self.p.pow(j)
    }
}

/// Row echelon form over GF(p) with lowest-index pivots; returns the nonzero
/// reduced rows and their pivot columns.
pub fn rref_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> (Vec<Vec<u32>>, Vec<usize>) {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c] % p, p) as u64;
        for x in rows[r].iter_mut() {
            *x = (*x as u64 * inv % p as u64) as u32;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] % p == 0 {
                continue;
            }
            let f = (row[c] % p) as u64;
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = ((*x as u64 + (p as u64 - f) * y as u64) % p as u64) as u32;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank_mod_p(rows: Vec<Vec<u32>>, p: u32) -> usize {
    rref_mod_p(rows, p).1.len()
}

/// Basis of the right null space {v : M v = 0} of an r × n matrix.
pub fn null_space_mod_p(m: Vec<Vec<u32>>, n: usize, p: u32) -> Vec<Vec<u32>> {
    let (red, pivots) = rref_mod_p(m, p);
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u32; n];
        v[free] = 1;
        for (row, &pc) in red.iter().zip(&pivots) {
            v[pc] = (p - row[free] % p) % p;
        }
        out.push(v);
    }
    out
}

/// Smallest monic irreducible of degree n (in coefficient index order) whose
/// root x is primitive.
pub fn default_field(p: u32, n: u32) -> Result<Arc<FieldCtx>> {
    if !is_prime(p) {
        return Err(FieldError::RejectNotPrime(p));
    }
    if n == 1 {
        return FieldCtx::new(p, 1, &[0, 1], None).and_then(|c| {
            let g = c.primitive();
            FieldCtx::new(p, 1, &[(p - g) % p, 1], Some(g))
        });
    }
    let q = (p as u64)
        .checked_pow(n)
        .filter(|&q| q <= MAX_ORDER)
        .ok_or(FieldError::RejectTooLarge(u64::MAX))?;
    for low in 0..q {
        let mut m = Vec::with_capacity(n as usize + 1);
        let mut t = low;
        for _ in 0..n {
            m.push((t % p as u64) as u32);
            t /= p as u64;
        }
        m.push(1);
        if m[0] == 0 || !poly::is_irreducible(&m, p) {
            continue;
        }
        if let Ok(ctx) = FieldCtx::new(p, n, &m, Some(p)) {
            return Ok(ctx);
        }
    }
    unreachable!("primitive polynomials exist for every degree")
}

/// Parsed field description: `p=2 n=14 mod=1,0,...,1 [prim=IDX]` or a preset name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub n: u32,
    pub modulus: Option<Vec<u32>>,
    pub primitive: Option<u32>,
}

pub const FIELD_PRESETS: &[(&str, u32, u32, &[u32])] = &[
    ("gf2_12", 2, 12, &[1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1]),
    (
        "gf2_14",
        2,
        14,
        &[1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1],
    ),
    (
        "gf2_16",
        2,
        16,
        &[1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    ),
    ("gf3_4", 3, 4, &[2, 0, 0, 2, 1]),
    ("gf3_5", 3, 5, &[1, 2, 0, 0, 0, 1]),
];

impl FieldSpec {
    pub fn parse(s: &str) -> Result<FieldSpec> {
        let s = s.trim();
        if let Some(&(_, p, n, m)) = FIELD_PRESETS.iter().find(|(name, ..)| *name == s) {
            return Ok(FieldSpec {
                p,
                n,
                modulus: Some(m.to_vec()),
                primitive: Some(p),
            });
        }
        let (mut p, mut n, mut modulus, mut primitive) = (None, None, None, None);
        for tok in s.split_whitespace() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| FieldError::Parse(format!("expected key=value, got `{tok}`")))?;
            let num = |v: &str| {
                v.parse::<u32>()
                    .map_err(|_| FieldError::Parse(format!("bad number `{v}` for `{k}`")))
            };
            match k {
                "p" => p = Some(num(v)?),
                "n" => n = Some(num(v)?),
                "mod" => {
                    modulus = Some(
                        v.split(',')
                            .map(|c| num(c.trim()))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                "prim" => primitive = Some(num(v)?),
                _ => return Err(FieldError::Parse(format!("unknown key `{k}`"))),
            }
        }
        let p = p.ok_or_else(|| FieldError::Parse("missing p".into()))?;
        let n = n.or_else(|| modulus.as_ref().map(|m| m.len().saturating_sub(1) as u32));
        let n = n.ok_or_else(|| FieldError::Parse("missing n".into()))?;
        Ok(FieldSpec {
            p,
            n,
            modulus,
            primitive,
        })
    }

    pub fn build(&self) -> Result<Arc<FieldCtx>> {
        match &self.modulus {
            Some(m) => FieldCtx::new(self.p, self.n, m, self.primitive),
            None => default_field(self.p, self.n),
        }
    }
}

pub fn build_field(
    p: u32,
    n: u32,
    modulus: &[u32],
    primitive: Option<u32>,
) -> Result<Arc<FieldCtx>> {
    FieldCtx::new(p, n, modulus, primitive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn preset(name: &str) -> Arc<FieldCtx> {
        FieldSpec::parse(name).unwrap().build().unwrap()
    }

    #[test]
    fn preset_fields_build_with_x_primitive() {
        for (name, p, n, _) in FIELD_PRESETS {
            let ctx = preset(name);
            assert_eq!((ctx.p(), ctx.n()), (*p, *n));
            assert_eq!(ctx.primitive(), *p);
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert_eq!(
            FieldCtx::new(2, 2, &[1, 0, 1], None).unwrap_err(),
            FieldError::RejectReducibleModulus(2)
        );
        assert!(FieldCtx::new(3, 2, &[2, 0, 1], None).is_err()); // x^2 - 1
    }

    #[test]
    fn non_primitive_rejected() {
        // x^4+x^3+x^2+x+1 is irreducible but x has order 5
        let err = FieldCtx::new(2, 4, &[1, 1, 1, 1, 1], Some(2)).unwrap_err();
        assert_eq!(err, FieldError::RejectNonPrimitive(2));
        let ctx = FieldCtx::new(2, 4, &[1, 1, 1, 1, 1], None).unwrap();
        assert_ne!(ctx.pow(ctx.primitive(), 5), 1);
    }

    #[test]
    fn too_large_rejected() {
        assert!(matches!(
            FieldCtx::new(2, 25, &[0; 26], None),
            Err(FieldError::RejectTooLarge(_))
        ));
    }

    #[test]
    fn gf4_trace_of_generator_is_one() {
        let ctx = FieldCtx::new(2, 2, &[1, 1, 1], None).unwrap();
        assert_eq!(ctx.trace(2), 1);
        assert_eq!(ctx.mul(2, 2), 3); // ξ^2 = ξ + 1
        assert_eq!(ctx.trace(0), 0);
    }

    #[test]
    fn table_multiplication_matches_polynomial_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, n) in [(2, 8), (3, 5), (5, 3), (7, 2), (2, 14)] {
            let ctx = default_field(p, n).unwrap();
            for _ in 0..300 {
                let a = rng.gen_range(0..ctx.q());
                let b = rng.gen_range(0..ctx.q());
                let want = poly_mul_mod(&ctx.coeffs(a), &ctx.coeffs(b), ctx.modulus(), p);
                assert_eq!(ctx.coeffs(ctx.mul(a, b)), want);
            }
        }
    }

    #[test]
    fn non_x_generator_tables() {
        // GF(7) with smallest generator 3
        let ctx = FieldCtx::new(7, 1, &[0, 1], None).unwrap();
        assert_eq!(ctx.primitive(), 3);
        for a in 1..7u32 {
            for b in 1..7u32 {
                assert_eq!(ctx.mul(a, b), a * b % 7);
            }
        }
        let ctx = FieldCtx::new(3, 2, &[1, 0, 1], None).unwrap(); // x^2+1, x has order 4
        assert_ne!(ctx.primitive(), 3);
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(
                    ctx.coeffs(ctx.mul(a, b)),
                    poly_mul_mod(&ctx.coeffs(a), &ctx.coeffs(b), ctx.modulus(), 3)
                );
            }
        }
    }

    #[test]
    fn trace_is_frobenius_fixed_and_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (p, n) in [(2, 6), (3, 4), (5, 2), (7, 3)] {
            let ctx = default_field(p, n).unwrap();
            for x in 0..ctx.q() {
                let t = ctx.trace(x);
                assert!(t < p);
                assert_eq!(ctx.pow(t, p as u64), t);
                assert_eq!(ctx.rel_trace(n, x).unwrap(), x);
                assert_eq!(ctx.rel_trace(1, x).unwrap(), t);
            }
            for _ in 0..200 {
                let (x, y) = (rng.gen_range(0..ctx.q()), rng.gen_range(0..ctx.q()));
                assert_eq!(ctx.trace(ctx.add(x, y)), (ctx.trace(x) + ctx.trace(y)) % p);
            }
        }
    }

    #[test]
    fn trace_transitivity() {
        for (p, n) in [(2, 6), (3, 4), (3, 6), (2, 12), (5, 4)] {
            let ctx = default_field(p, n).unwrap();
            for k in (1..=n).filter(|k| n % k == 0) {
                for x in 0..ctx.q() {
                    let inner = ctx.rel_trace(k, x).unwrap();
                    assert!(ctx.in_subfield(k, inner));
                    assert_eq!(ctx.subfield_trace(k, inner).unwrap(), ctx.trace(x));
                }
            }
            assert!(ctx.rel_trace(n + 1, 1).is_err() || n + 1 == 1);
        }
    }

    #[test]
    fn trace_to_subfield_rejects_non_divisor() {
        let ctx = default_field(2, 6).unwrap();
        let e = ctx.trace_to_subfield(4, ctx.elem(3)).unwrap_err();
        assert_eq!(e, FieldError::RejectNonDivisor { k: 4, n: 6 });
    }

    #[test]
    fn quadratic_characters() {
        assert_eq!(eta0(3, 1), 1);
        assert_eq!(eta0(3, -1), -1);
        assert_eq!(eta0(5, -1), 1);
        let ctx = default_field(2, 3).unwrap();
        assert_eq!(ctx.quad_char(ctx.elem(1)), Err(FieldError::RejectCharTwo));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, n) in [(3, 5), (5, 2), (7, 3), (11, 1)] {
            let ctx = default_field(p, n).unwrap();
            for _ in 0..200 {
                let x = rng.gen_range(1..ctx.q());
                let y = rng.gen_range(1..ctx.q());
                assert_eq!(
                    ctx.eta(ctx.mul(x, y)).unwrap(),
                    ctx.eta(x).unwrap() * ctx.eta(y).unwrap()
                );
                assert_eq!(ctx.eta(ctx.mul(x, x)).unwrap(), 1);
            }
            if n == 1 {
                for a in 1..p {
                    assert_eq!(ctx.eta(a).unwrap(), eta0(p, a as i64));
                }
            }
            // η restricted to GF(p)* equals η_0^n
            for a in 1..p {
                let e0 = eta0(p, a as i64);
                assert_eq!(ctx.eta(a).unwrap(), if n % 2 == 0 { 1 } else { e0 });
            }
        }
    }

    #[test]
    fn quadratic_equation_has_root_iff_trace_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [3, 4, 5, 8, 12] {
            let ctx = default_field(2, m).unwrap();
            for _ in 0..20 {
                let a = rng.gen_range(1..ctx.q());
                let b = rng.gen_range(0..ctx.q());
                let has_root =
                    (0..ctx.q()).any(|x| ctx.add(ctx.add(ctx.mul(x, x), ctx.mul(a, x)), b) == 0);
                let t = ctx.trace(ctx.div(b, ctx.mul(a, a)).unwrap());
                assert_eq!(has_root, t == 0);
            }
        }
    }

    #[test]
    fn quadratic_character_sums() {
        for p in [3u32, 5, 7, 11] {
            for a2 in 1..p as i64 {
                for a1 in 0..p as i64 {
                    for a0 in 0..p as i64 {
                        let s: i64 = (0..p as i64)
                            .map(|x| eta0(p, a2 * x * x + a1 * x + a0))
                            .sum();
                        let d = (a1 * a1 - 4 * a0 * a2).rem_euclid(p as i64);
                        let want = if d != 0 {
                            -eta0(p, a2)
                        } else {
                            (p as i64 - 1) * eta0(p, a2)
                        };
                        assert_eq!(s, want, "p={p} a=({a2},{a1},{a0})");
                    }
                }
            }
        }
    }

    #[test]
    fn ranks() {
        let ctx = default_field(2, 5).unwrap();
        assert_eq!(ctx.fp_rank(&[ctx.elem(0)]).unwrap(), 0);
        let (x, x2) = (2, 4);
        assert_eq!(ctx.rank_of(&[x, x2, ctx.add(x, x2)]), 2);
        let other = default_field(3, 2).unwrap();
        assert_eq!(
            ctx.fp_rank(&[ctx.elem(1), other.elem(1)]),
            Err(FieldError::RejectMixedContexts)
        );
    }

    #[test]
    fn trace_kernel_of_one_is_hyperplane() {
        for n in [3, 6, 8] {
            let ctx = default_field(2, n).unwrap();
            let v = ctx.trace_kernel(&[1]).unwrap();
            assert_eq!(v.len(), n as usize - 1);
            for x in ctx.span(&v) {
                assert_eq!(ctx.trace(x), 0);
            }
        }
        let ctx = default_field(3, 3).unwrap();
        assert_eq!(
            ctx.trace_kernel(&[1, 2]),
            Err(FieldError::RejectDependentConstraints)
        );
    }

    #[test]
    fn field_spec_round_trip() {
        let s = FieldSpec::parse("p=2 n=14 mod=1,0,0,1,0,1,0,1,0,0,0,0,0,0,1").unwrap();
        assert_eq!(
            s,
            FieldSpec::parse("gf2_14")
                .map(|mut f| {
                    f.primitive = None;
                    f
                })
                .unwrap()
        );
        assert!(FieldSpec::parse("p=2 q=3").is_err());
        let c = FieldSpec::parse("p=3 n=3").unwrap().build().unwrap();
        assert_eq!(c.q(), 27);
    }

    #[test]
    fn span_enumerates_subspace() {
        let ctx = default_field(3, 3).unwrap();
        let s = ctx.span(&[1, 3]);
        assert_eq!(s.len(), 9);
        let mut sorted = s.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 9);
    }
}
