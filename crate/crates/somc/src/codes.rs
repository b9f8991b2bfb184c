//! Linear codes C = {(αf(x) − Tr(βx) [− c])_x} and their verdicts.
//!
//! A message is the digit vector (α, b_1..b_d [, c]) with index
//! `α + p·j + p^{1+d}·c`, where β = Σ b_i γ_i is the j-th element of the
//! β-domain span in odometer order.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::{inv_mod, FieldCtx};
use crate::pfunc::PAryFunction;
use crate::walsh::{classify, walsh_transform, WalshSpectrum};

/// Work bound for brute-force enumeration, in codeword coordinates touched.
pub const ENUM_LIMIT: u128 = 1 << 34;
/// Largest number of ordered projective pairs scanned by exact minimality.
pub const PAIR_LIMIT: u128 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    /// Length p^n − 1, x over GF(p^n)*.
    Punctured,
    /// Length p^n.
    Full,
    /// Length p^n with the all-one word added.
    Augmented,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BetaDomain {
    FullField,
    Subspace(Vec<u32>),
}

#[derive(Clone, Debug)]
pub struct CodeSpec {
    f: PAryFunction,
    kind: CodeKind,
    domain: BetaDomain,
    basis: Vec<u32>,
}

impl CodeSpec {
    pub fn new(f: PAryFunction, kind: CodeKind, domain: BetaDomain) -> Result<CodeSpec> {
        let ctx = f.ctx().clone();
        let basis = match &domain {
            BetaDomain::FullField => (0..ctx.n()).map(|j| ctx.basis_elem(j)).collect(),
            BetaDomain::Subspace(b) => {
                if kind == CodeKind::Augmented {
                    return Err(Error::RejectAugmentedSubspace);
                }
                if b.iter().any(|&v| v >= ctx.q()) {
                    return Err(Error::RejectBetaOutsideDomain);
                }
                if ctx.rank_of(b) != b.len() {
                    return Err(crate::galois::FieldError::RejectDependentConstraints.into());
                }
                b.clone()
            }
        };
        Ok(CodeSpec {
            f,
            kind,
            domain,
            basis,
        })
    }

    pub fn f(&self) -> &PAryFunction {
        &self.f
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.f.ctx()
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn domain(&self) -> &BetaDomain {
        &self.domain
    }

    pub fn domain_basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn p(&self) -> u32 {
        self.f.p()
    }

    pub fn length(&self) -> u64 {
        let q = self.f.q() as u64;
        if self.kind == CodeKind::Punctured {
            q - 1
        } else {
            q
        }
    }

    /// Number of message digits.
    pub fn message_dim(&self) -> usize {
        1 + self.basis.len() + usize::from(self.kind == CodeKind::Augmented)
    }

    pub fn message_count(&self) -> u64 {
        (self.p() as u64).pow(self.message_dim() as u32)
    }

    /// All β in the domain, in message order.
    pub fn domain_elements(&self) -> Vec<u32> {
        self.ctx().span(&self.basis)
    }

    pub fn in_domain(&self, beta: u32) -> bool {
        match self.domain {
            BetaDomain::FullField => beta < self.f.q(),
            BetaDomain::Subspace(_) => {
                if beta >= self.f.q() {
                    return false;
                }
                let mut v = self.basis.clone();
                v.push(beta);
                beta == 0 || self.ctx().rank_of(&v) == self.basis.len()
            }
        }
    }

    fn first_x(&self) -> u32 {
        u32::from(self.kind == CodeKind::Punctured)
    }

    /// Rows f, −Tr(γ_i x), and −1 for augmented codes, so that the message
    /// digits combine them into codewords.
    pub fn generator_rows(&self) -> Vec<Vec<u8>> {
        let ctx = self.ctx();
        let p = self.p();
        let xs = self.first_x()..ctx.q();
        let mut rows = vec![xs
            .clone()
            .map(|x| self.f.value(x) as u8)
            .collect::<Vec<u8>>()];
        for &g in &self.basis {
            rows.push(
                xs.clone()
                    .map(|x| ((p - ctx.trace(ctx.mul(g, x))) % p) as u8)
                    .collect(),
            );
        }
        if self.kind == CodeKind::Augmented {
            rows.push(vec![(p - 1) as u8; xs.len()]);
        }
        rows
    }

    /// Splits a message index into (α, β, c).
    pub fn decode_message(&self, idx: u64, domain: &[u32]) -> (u32, u32, u32) {
        let p = self.p() as u64;
        let alpha = (idx % p) as u32;
        let rest = idx / p;
        let dsize = domain.len() as u64;
        (
            alpha,
            domain[(rest % dsize) as usize],
            (rest / dsize) as u32,
        )
    }
}

/// Indices of a maximal independent subset of rows, chosen greedily in order.
pub fn independent_rows(rows: &[Vec<u8>], p: u32) -> Vec<usize> {
    let mut echelon: Vec<(usize, Vec<u8>)> = Vec::new();
    let mut chosen = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        for (piv, e) in &echelon {
            let c = r[*piv] as u32;
            if c != 0 {
                for (a, &b) in r.iter_mut().zip(e) {
                    *a = ((*a as u32 + (p - c) * b as u32) % p) as u8;
                }
            }
        }
        if let Some(piv) = r.iter().position(|&v| v != 0) {
            let inv = inv_mod(r[piv] as u32, p);
            for a in r.iter_mut() {
                *a = ((*a as u32 * inv) % p) as u8;
            }
            echelon.push((piv, r));
            chosen.push(i);
        }
    }
    chosen
}

pub fn rank(spec: &CodeSpec) -> usize {
    independent_rows(&spec.generator_rows(), spec.p()).len()
}

pub fn codeword(spec: &CodeSpec, alpha: u32, beta: u32, c: Option<u32>) -> Result<Vec<u8>> {
    if !spec.in_domain(beta) {
        return Err(Error::RejectBetaOutsideDomain);
    }
    if c.is_some() && spec.kind != CodeKind::Augmented {
        return Err(Error::RejectCForNonAugmented);
    }
    let ctx = spec.ctx();
    let p = spec.p();
    let (alpha, c) = (alpha % p, c.unwrap_or(0) % p);
    Ok((spec.first_x()..ctx.q())
        .map(|x| ((alpha * spec.f.value(x) + 2 * p - ctx.trace(ctx.mul(beta, x)) - c) % p) as u8)
        .collect())
}

/// Hamming weight from the Galois orbit sum Σ_{z≠0} σ_{zα}(W(α⁻¹β)·ζ^{−α⁻¹c}).
pub fn weight_analytic(
    spec: &CodeSpec,
    spectrum: &WalshSpectrum,
    alpha: u32,
    beta: u32,
    c: Option<u32>,
) -> Result<u64> {
    if !spec.in_domain(beta) {
        return Err(Error::RejectBetaOutsideDomain);
    }
    if c.is_some() && spec.kind != CodeKind::Augmented {
        return Err(Error::RejectCForNonAugmented);
    }
    orbit_weight(spec, spectrum, alpha, beta, c.unwrap_or(0))
}

fn orbit_weight(
    spec: &CodeSpec,
    spectrum: &WalshSpectrum,
    alpha: u32,
    beta: u32,
    c: u32,
) -> Result<u64> {
    let ctx = spec.ctx();
    let (p, q) = (spec.p() as i64, ctx.q() as i64);
    let (alpha, c) = (alpha % p as u32, c % p as u32);
    if alpha == 0 {
        return Ok(if beta != 0 {
            (q - q / p) as u64
        } else if c != 0 {
            q as u64
        } else {
            0
        });
    }
    let ainv = inv_mod(alpha, p as u32);
    let gamma = ctx.smul(ainv, beta);
    let e = (ainv * c % p as u32) as i64;
    let v = spectrum.value(gamma).rotate(-e);
    let mut sum = crate::cyclotomic::CycInt::zero(p as u32);
    for z in 1..p {
        sum = &sum + &v.sigma(z * alpha as i64)?;
    }
    let r = sum
        .as_integer()
        .filter(|r| r % p == 0)
        .ok_or(Error::AssertNonRationalOrbitSum)?;
    let mut w = q - q / p - r / p;
    if spec.kind == CodeKind::Punctured && spec.f.value(0) != 0 {
        w -= 1;
    }
    Ok(w as u64)
}

/// Weights of all messages, in message order.
pub fn message_weights(spec: &CodeSpec, spectrum: &WalshSpectrum) -> Result<Vec<u64>> {
    let domain = spec.domain_elements();
    (0..spec.message_count())
        .into_par_iter()
        .map(|i| {
            let (a, b, c) = spec.decode_message(i, &domain);
            orbit_weight(spec, spectrum, a, b, c)
        })
        .collect()
}

/// Some β with f(x) − Tr(βx) constant, if f is affine.
pub fn affine_witness(spectrum: &WalshSpectrum) -> Option<u32> {
    let q = spectrum.q();
    (0..q).find(|&b| spectrum.counts(b).contains(&q))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightDistribution {
    pub p: u32,
    pub length: u64,
    pub k: u32,
    /// (weight, multiplicity), sorted by weight.
    pub entries: Vec<(u64, u64)>,
}

impl WeightDistribution {
    /// Tallies per-message weights, dividing out p^{K − k} repetitions.
    pub fn from_message_weights(
        p: u32,
        length: u64,
        k: u32,
        weights: &[u64],
    ) -> WeightDistribution {
        let mut tally: HashMap<u64, u64> = HashMap::new();
        for &w in weights {
            *tally.entry(w).or_insert(0) += 1;
        }
        let rep = weights.len() as u64 / (p as u64).pow(k);
        let mut entries: Vec<(u64, u64)> = tally
            .into_iter()
            .map(|(w, m)| {
                assert_eq!(m % rep, 0, "codeword repetitions are uniform");
                (w, m / rep)
            })
            .collect();
        entries.sort_unstable();
        WeightDistribution {
            p,
            length,
            k,
            entries,
        }
    }

    pub fn from_entries(p: u32, length: u64, mut entries: Vec<(u64, u64)>) -> WeightDistribution {
        entries.retain(|e| e.1 != 0);
        entries.sort_unstable();
        let total: u64 = entries.iter().map(|e| e.1).sum();
        let mut k = 0;
        while (p as u64).pow(k) < total {
            k += 1;
        }
        WeightDistribution {
            p,
            length,
            k,
            entries,
        }
    }

    pub fn n(&self) -> u64 {
        self.length
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &(u64, u64)> {
        self.entries.iter().filter(|e| e.0 != 0)
    }

    /// Minimum distance, 0 for the zero code.
    pub fn d(&self) -> u64 {
        self.nonzero().map(|e| e.0).min().unwrap_or(0)
    }

    pub fn w_min(&self) -> u64 {
        self.d()
    }

    pub fn w_max(&self) -> u64 {
        self.nonzero().map(|e| e.0).max().unwrap_or(0)
    }

    pub fn multiplicity(&self, w: u64) -> u64 {
        self.entries.iter().find(|e| e.0 == w).map_or(0, |e| e.1)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("weight,multiplicity\n");
        for (w, m) in &self.entries {
            writeln!(s, "{w},{m}").unwrap();
        }
        s
    }

    /// `1 + a z^w + ...`
    pub fn enumerator(&self) -> String {
        self.entries
            .iter()
            .map(|&(w, m)| match (w, m) {
                (0, m) => m.to_string(),
                (w, 1) => format!("z^{w}"),
                (w, m) => format!("{m}z^{w}"),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub fn weight_distribution(
    spec: &CodeSpec,
    spectrum: &WalshSpectrum,
) -> Result<WeightDistribution> {
    if let Some(b) = affine_witness(spectrum) {
        return Err(Error::RejectAffineFunction(b));
    }
    let weights = message_weights(spec, spectrum)?;
    Ok(WeightDistribution::from_message_weights(
        spec.p(),
        spec.length(),
        rank(spec) as u32,
        &weights,
    ))
}

fn check_enum_bound(p: u32, dim: usize, len: u64) -> Result<()> {
    let work = (p as u128).pow(dim as u32) * len as u128;
    if work > ENUM_LIMIT {
        return Err(Error::RejectTooLargeForEnumeration(work));
    }
    Ok(())
}

/// Weight of every combination Σ m_j rows[j], indexed by Σ m_j p^j.
pub fn enumerated_weights(rows: &[Vec<u8>], p: u32) -> Result<Vec<u64>> {
    let len = rows.first().map_or(0, |r| r.len()) as u64;
    check_enum_bound(p, rows.len(), len)?;
    let k = rows.len();
    // Top digits are split across workers, the rest is a sequential walk.
    let top = k.min(if p == 2 { 6 } else { 3 });
    let low = k - top;
    let pu = p as usize;
    let low_count = pu.pow(low as u32);
    let mut out = vec![0u64; pu.pow(k as u32)];
    if p == 2 {
        let packed: Vec<Vec<u64>> = rows.iter().map(|r| pack_bits(r)).collect();
        let words = packed.first().map_or(0, |r| r.len());
        out.par_chunks_mut(low_count)
            .enumerate()
            .for_each(|(t, chunk)| {
                let mut acc = vec![0u64; words];
                for (j, row) in packed[low..].iter().enumerate() {
                    if t >> j & 1 == 1 {
                        xor_into(&mut acc, row);
                    }
                }
                for i in 0..chunk.len() {
                    if i > 0 {
                        // Gray-code step: flip the row of the lowest set bit of i.
                        xor_into(&mut acc, &packed[i.trailing_zeros() as usize]);
                    }
                    chunk[i ^ (i >> 1)] = acc.iter().map(|w| w.count_ones() as u64).sum();
                }
            });
        return Ok(out);
    }
    out.par_chunks_mut(low_count)
        .enumerate()
        .for_each(|(t, chunk)| {
            let mut base = vec![0u8; len as usize];
            let mut tt = t;
            for row in &rows[low..] {
                let d = (tt % pu) as u32;
                tt /= pu;
                add_scaled(&mut base, row, d, p);
            }
            let mut stack = vec![base];
            walk(rows, low, p, &mut stack, 0, chunk);
        });
    Ok(out)
}

fn walk(
    rows: &[Vec<u8>],
    level: usize,
    p: u32,
    stack: &mut Vec<Vec<u8>>,
    offset: usize,
    out: &mut [u64],
) {
    if level == 0 {
        let w = stack.last().unwrap().iter().filter(|&&v| v != 0).count();
        out[offset] = w as u64;
        return;
    }
    let row = &rows[level - 1];
    let step = (p as usize).pow(level as u32 - 1);
    for d in 0..p as usize {
        if d > 0 {
            let mut next = stack.last().unwrap().clone();
            add_scaled(&mut next, row, d as u32, p);
            stack.push(next);
        } else {
            let cur = stack.last().unwrap().clone();
            stack.push(cur);
        }
        walk(rows, level - 1, p, stack, offset + d * step, out);
        stack.pop();
    }
}

fn add_scaled(acc: &mut [u8], row: &[u8], d: u32, p: u32) {
    if d == 0 {
        return;
    }
    for (a, &r) in acc.iter_mut().zip(row) {
        *a = ((*a as u32 + d * r as u32) % p) as u8;
    }
}

fn pack_bits(row: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; row.len().div_ceil(64)];
    for (i, &b) in row.iter().enumerate() {
        if b & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

fn xor_into(acc: &mut [u64], row: &[u64]) {
    for (a, r) in acc.iter_mut().zip(row) {
        *a ^= r;
    }
}

/// Every codeword once, over a basis of the code, in index order.
pub fn enumerate_codewords(spec: &CodeSpec) -> Result<impl Iterator<Item = Vec<u8>>> {
    let rows = spec.generator_rows();
    let p = spec.p();
    let basis: Vec<Vec<u8>> = independent_rows(&rows, p)
        .into_iter()
        .map(|i| rows[i].clone())
        .collect();
    check_enum_bound(p, basis.len(), spec.length())?;
    let len = spec.length() as usize;
    let total = (p as u64).pow(basis.len() as u32);
    Ok((0..total).map(move |mut i| {
        let mut w = vec![0u8; len];
        for row in &basis {
            add_scaled(&mut w, row, (i % p as u64) as u32, p);
            i /= p as u64;
        }
        w
    }))
}

/// Distribution from brute-force enumeration of a basis of the code.
pub fn enumerated_distribution(spec: &CodeSpec) -> Result<WeightDistribution> {
    let rows = spec.generator_rows();
    let p = spec.p();
    let basis: Vec<Vec<u8>> = independent_rows(&rows, p)
        .into_iter()
        .map(|i| rows[i].clone())
        .collect();
    let w = enumerated_weights(&basis, p)?;
    Ok(WeightDistribution::from_message_weights(
        p,
        spec.length(),
        basis.len() as u32,
        &w,
    ))
}

/// Every pair of generator rows, self-pairs included, has zero dot product mod p.
pub fn self_orthogonal_direct(spec: &CodeSpec) -> bool {
    let rows = spec.generator_rows();
    let p = spec.p();
    if p == 2 {
        let packed: Vec<Vec<u64>> = rows.iter().map(|r| pack_bits(r)).collect();
        return (0..packed.len()).all(|i| {
            (i..packed.len()).all(|j| {
                packed[i]
                    .iter()
                    .zip(&packed[j])
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
                    % 2
                    == 0
            })
        });
    }
    (0..rows.len()).all(|i| {
        (i..rows.len()).all(|j| {
            rows[i]
                .iter()
                .zip(&rows[j])
                .map(|(&a, &b)| a as u64 * b as u64)
                .sum::<u64>()
                % p as u64
                == 0
        })
    })
}

fn domain_betas(spectrum: &WalshSpectrum, domain: &BetaDomain) -> Vec<u32> {
    match domain {
        BetaDomain::FullField => (0..spectrum.q()).collect(),
        BetaDomain::Subspace(b) => spectrum.ctx().span(b),
    }
}

/// W(β) ± W(0) ≡ 0 (mod 8) for every β in the domain; certifies the
/// full-length binary code for n ≥ 3.
pub fn so_criterion_binary(spectrum: &WalshSpectrum, domain: &BetaDomain) -> Result<bool> {
    if spectrum.p() != 2 {
        return Err(Error::RejectOddP);
    }
    if spectrum.ctx().n() < 3 {
        return Err(Error::NotApplicable("mod-8 test needs n >= 3".into()));
    }
    let w0 = spectrum.binary(0);
    Ok(domain_betas(spectrum, domain).into_iter().all(|b| {
        (spectrum.binary(b) + w0).rem_euclid(8) == 0 && (spectrum.binary(b) - w0).rem_euclid(8) == 0
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OddVariant {
    Cf,
    Augmented,
}

/// Σ_a N_a a² ≡ 0 (and Σ_a N_a a ≡ 0 for augmented codes) over the raw
/// counts of every W(β), p > 3.
pub fn so_criterion_odd(
    spectrum: &WalshSpectrum,
    domain: &BetaDomain,
    variant: OddVariant,
) -> Result<bool> {
    let p = spectrum.p();
    if p == 2 {
        return Err(Error::RejectCharTwo);
    }
    if p <= 3 {
        return Err(Error::RejectSmallP);
    }
    Ok(domain_betas(spectrum, domain).into_par_iter().all(|b| {
        let s = spectrum.value(b).criterion_sums();
        s.s2 == 0 && (variant == OddVariant::Cf || s.s1 == 0)
    }))
}

/// Every weight divisible by three.
pub fn so_criterion_ternary(dist: &WeightDistribution) -> Result<bool> {
    if dist.p != 3 {
        return Err(Error::RejectNonTernary);
    }
    Ok(dist.entries.iter().all(|e| e.0 % 3 == 0))
}

/// The applicable closed-form criterion for this code, with its name.
pub fn so_criterion(
    spec: &CodeSpec,
    spectrum: &WalshSpectrum,
    dist: &WeightDistribution,
) -> (Result<bool>, &'static str) {
    let p = spec.p();
    if p == 3 {
        return (so_criterion_ternary(dist), "ternary-divisibility");
    }
    if spec.kind == CodeKind::Punctured && spec.f.value(0) != 0 {
        return (
            Err(Error::NotApplicable("punctured code with f(0) != 0".into())),
            "none",
        );
    }
    if p == 2 {
        if spec.kind == CodeKind::Augmented {
            return (
                Err(Error::NotApplicable("binary augmented code".into())),
                "none",
            );
        }
        return (so_criterion_binary(spectrum, &spec.domain), "walsh-mod-8");
    }
    let variant = if spec.kind == CodeKind::Augmented {
        OddVariant::Augmented
    } else {
        OddVariant::Cf
    };
    (
        so_criterion_odd(spectrum, &spec.domain, variant),
        "walsh-count-sums",
    )
}

/// Index of a + z·b for digit vectors packed in base p.
fn add_index(a: u64, b: u64, z: u64, p: u64, k: usize) -> u64 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..k {
        out += ((a % p + z * (b % p)) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

/// Σ_{z≠0} wt(a + zb) ≠ (p−1)wt(a) − wt(b) over ordered pairs of distinct
/// projective points; `weights` is indexed by the base-p digits of a
/// k-dimensional message space mapped bijectively onto the code.
pub fn minimal_from_weights(p: u32, k: usize, weights: &[u64]) -> bool {
    let p64 = p as u64;
    let total = p64.pow(k as u32);
    assert_eq!(weights.len() as u64, total);
    let leading_one = |mut v: u64| {
        let mut last = 0;
        while v > 0 {
            if !v.is_multiple_of(p64) {
                last = v % p64;
            }
            v /= p64;
        }
        last == 1
    };
    let points: Vec<u64> = (1..total).filter(|&v| leading_one(v)).collect();
    points.par_iter().all(|&a| {
        let wa = weights[a as usize] as i64;
        points.iter().all(|&b| {
            if a == b {
                return true;
            }
            let rhs = (p as i64 - 1) * wa - weights[b as usize] as i64;
            let lhs: i64 = if p == 2 {
                weights[(a ^ b) as usize] as i64
            } else {
                (1..p64)
                    .map(|z| weights[add_index(a, b, z, p64, k) as usize] as i64)
                    .sum()
            };
            lhs != rhs
        })
    })
}

fn pair_count(p: u32, k: usize) -> u128 {
    let pts = ((p as u128).pow(k as u32) - 1) / (p as u128 - 1);
    pts * pts.saturating_sub(1)
}

/// Exact minimality by brute-force enumeration and a full pair scan.
pub fn minimality_exact(spec: &CodeSpec) -> Result<bool> {
    let rows = spec.generator_rows();
    let p = spec.p();
    let basis: Vec<Vec<u8>> = independent_rows(&rows, p)
        .into_iter()
        .map(|i| rows[i].clone())
        .collect();
    let w = enumerated_weights(&basis, p)?;
    Ok(minimal_from_weights(p, basis.len(), &w))
}

/// Pair scan on analytic weights restricted to an independent set of rows.
fn minimality_exact_analytic(spec: &CodeSpec, message_weights: &[u64]) -> bool {
    let p = spec.p() as u64;
    let sel = independent_rows(&spec.generator_rows(), spec.p());
    let k = sel.len();
    let sub: Vec<u64> = (0..p.pow(k as u32))
        .map(|mut i| {
            let mut full = 0;
            for &j in &sel {
                full += (i % p) * p.pow(j as u32);
                i /= p;
            }
            message_weights[full as usize]
        })
        .collect();
    minimal_from_weights(spec.p(), k, &sub)
}

/// W(h) − W(l) ≠ 2^n and W(h) + W(l) ≠ 2^n − 4f(0)·[punctured] for distinct
/// h, l in the β-domain.
pub fn minimality_binary_walsh(spec: &CodeSpec, spectrum: &WalshSpectrum) -> Result<bool> {
    if spec.p() != 2 {
        return Err(Error::RejectOddP);
    }
    if spec.kind == CodeKind::Augmented {
        return Err(Error::NotApplicable(
            "binary walsh minimality covers C_f and C*_f only".into(),
        ));
    }
    let q = spectrum.q() as i64;
    let phi = if spec.kind == CodeKind::Punctured {
        spec.f.value(0) as i64
    } else {
        0
    };
    let mut counts: HashMap<i64, u32> = HashMap::new();
    for b in domain_betas(spectrum, &spec.domain) {
        *counts.entry(spectrum.binary(b)).or_insert(0) += 1;
    }
    let target = q - 4 * phi;
    let ok = counts.iter().all(|(&v, &m)| {
        if counts.contains_key(&(v + q)) {
            return false;
        }
        match counts.get(&(target - v)) {
            None => true,
            Some(_) if target - v == v => m < 2,
            Some(_) => false,
        }
    });
    Ok(ok)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AbVerdict {
    Satisfies,
    Boundary,
    Violates,
}

impl AbVerdict {
    pub fn satisfies(self) -> bool {
        self == AbVerdict::Satisfies
    }
}

/// w_min/w_max against (p−1)/p; equality is `Boundary`.
pub fn ab_condition(dist: &WeightDistribution) -> AbVerdict {
    let p = dist.p as u128;
    let lhs = p * dist.w_min() as u128;
    let rhs = (p - 1) * dist.w_max() as u128;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => AbVerdict::Satisfies,
        std::cmp::Ordering::Equal => AbVerdict::Boundary,
        std::cmp::Ordering::Less => AbVerdict::Violates,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Griesmer {
    pub sum: u64,
    pub met: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub griesmer: Griesmer,
    pub singleton_defect: i64,
}

pub fn bounds_check(dist: &WeightDistribution) -> Result<Bounds> {
    let d = dist.d();
    if dist.k == 0 || d == 0 {
        return Err(Error::RejectOutOfDomain(
            "bounds need k >= 1 and d >= 1".into(),
        ));
    }
    let p = dist.p as u64;
    let mut sum = 0u64;
    let mut pi = 1u64;
    for _ in 0..dist.k {
        sum += d.div_ceil(pi);
        pi = pi.saturating_mul(p);
    }
    Ok(Bounds {
        griesmer: Griesmer {
            sum,
            met: dist.length == sum,
        },
        singleton_defect: dist.length as i64 - dist.k as i64 + 1 - d as i64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    DoublyEven,
    SinglyEven,
    Odd,
    #[serde(rename = "n/a")]
    NotBinary,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// gcd of the nonzero weights and, for p = 2, the parity class.
pub fn divisibility(dist: &WeightDistribution) -> (u64, Parity) {
    let g = dist.nonzero().fold(0, |g, e| gcd(g, e.0));
    let parity = if dist.p != 2 {
        Parity::NotBinary
    } else if g % 4 == 0 {
        Parity::DoublyEven
    } else if g % 2 == 0 {
        Parity::SinglyEven
    } else {
        Parity::Odd
    };
    (g, parity)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoReport {
    pub direct: bool,
    /// `None` when no closed-form criterion applies.
    pub criterion: Option<bool>,
    pub criterion_name: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MinMethod {
    Exact,
    Walsh,
    Ab,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinReport {
    /// `None` when only the AB test ran and it was inconclusive.
    pub verdict: Option<bool>,
    pub method: MinMethod,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlateauedSummary {
    pub s: Option<u32>,
    pub support_size: usize,
    pub epsilon: Option<i64>,
    pub weakly_regular: bool,
    pub balanced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub params: [u64; 3],
    pub length: u64,
    pub weights: Vec<(u64, u64)>,
    pub self_orthogonal: SoReport,
    pub minimal: MinReport,
    pub ab: AbVerdict,
    pub ab_violating: bool,
    pub divisibility: u64,
    pub parity: Parity,
    pub griesmer: Griesmer,
    pub singleton_defect: i64,
    pub assumptions: Vec<String>,
    pub plateaued: PlateauedSummary,
}

impl AnalysisReport {
    pub fn distribution(&self, p: u32) -> WeightDistribution {
        WeightDistribution {
            p,
            length: self.length,
            k: self.params[1] as u32,
            entries: self.weights.clone(),
        }
    }
}

/// Result of [`analyze`] with the intermediate spectrum and distribution.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub spectrum: WalshSpectrum,
    pub distribution: WeightDistribution,
    pub report: AnalysisReport,
}

pub fn analyze(spec: &CodeSpec) -> Result<Analysis> {
    let spectrum = walsh_transform(&spec.f);
    analyze_with(spec, spectrum)
}

pub fn analyze_with(spec: &CodeSpec, spectrum: WalshSpectrum) -> Result<Analysis> {
    if let Some(b) = affine_witness(&spectrum) {
        return Err(Error::RejectAffineFunction(b));
    }
    let p = spec.p();
    let weights = message_weights(spec, &spectrum)?;
    let k = rank(spec);
    let dist = WeightDistribution::from_message_weights(p, spec.length(), k as u32, &weights);
    let mut assumptions = Vec::new();
    if k < spec.message_dim() {
        assumptions.push(format!(
            "generator rows have rank {k} < {}; codewords repeat",
            spec.message_dim()
        ));
    }
    if let BetaDomain::Subspace(b) = &spec.domain {
        assumptions.push(format!(
            "beta restricted to a subspace of dimension {}",
            b.len()
        ));
    }

    let direct = self_orthogonal_direct(spec);
    let (crit, name) = so_criterion(spec, &spectrum, &dist);
    let criterion = match crit {
        Ok(v) => Some(v),
        Err(e) => {
            assumptions.push(format!("self-orthogonality criterion: {e}"));
            None
        }
    };

    let ab = ab_condition(&dist);
    let minimal = if pair_count(p, k) <= PAIR_LIMIT {
        MinReport {
            verdict: Some(minimality_exact_analytic(spec, &weights)),
            method: MinMethod::Exact,
        }
    } else if p == 2 && spec.kind != CodeKind::Augmented && k == spec.message_dim() {
        MinReport {
            verdict: Some(minimality_binary_walsh(spec, &spectrum)?),
            method: MinMethod::Walsh,
        }
    } else {
        let verdict = if ab.satisfies() { Some(true) } else { None };
        if verdict.is_none() {
            assumptions.push(
                "minimality undetermined: AB condition fails and exact scan is too large".into(),
            );
        }
        MinReport {
            verdict,
            method: MinMethod::Ab,
        }
    };
    let ab_violating = minimal.verdict == Some(true) && !ab.satisfies();
    let (delta, parity) = divisibility(&dist);
    let bounds = bounds_check(&dist)?;
    let profile = classify(&spectrum);
    let plateaued = PlateauedSummary {
        s: profile.s,
        support_size: profile.support.len(),
        epsilon: profile.epsilon,
        weakly_regular: profile.weakly_regular,
        balanced: profile.balanced,
    };
    let report = AnalysisReport {
        params: [dist.length, k as u64, dist.d()],
        length: dist.length,
        weights: dist.entries.clone(),
        self_orthogonal: SoReport {
            direct,
            criterion,
            criterion_name: name.into(),
        },
        minimal,
        ab,
        ab_violating,
        divisibility: delta,
        parity,
        griesmer: bounds.griesmer,
        singleton_defect: bounds.singleton_defect,
        assumptions,
        plateaued,
    };
    Ok(Analysis {
        spectrum,
        distribution: dist,
        report,
    })
}
