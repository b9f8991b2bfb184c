//! Seeded enumerative search for admissible parameters: λ-triples, w-pairs
//! and unbalanced weakly regular plateaued quadratic forms.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::FieldCtx;
use crate::pfunc::{
    check_singly_even_lambdas, compute_t_vector, inverse_set_rank, w_condition_check,
    w_pair_condition, ElemRef, FnDescriptor,
};
use crate::walsh::{classify, walsh_transform};

/// Predicate evaluations allowed per task.
pub const WORK_CAP: u64 = 1 << 28;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// λ_i = g^{(2^m+1)e_i} with e1 < e2 < e3, wt(t) = target_wt, rank wt(t) + 3.
    TripleLambda { target_wt: u32 },
    /// w1 < w2 (by discrete log) with w1, w2 and w1 + w2 meeting the trace conditions.
    WPair { l1: u32, l2: u32 },
    /// Tr(Σ_{i ≤ n/2} c_i x^{p^i+1}) with s = s_target.
    PlateauedQuadratic {
        s_target: u32,
        require_unbalanced: bool,
    },
}

#[derive(Clone, Debug)]
pub struct SearchTask {
    pub ctx: Arc<FieldCtx>,
    pub family: Family,
    pub budget: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Certificate {
    Triple {
        index: u64,
        lambdas: [String; 3],
        t: [u8; 4],
        inverse_rank: usize,
    },
    WPair {
        index: u64,
        l1: String,
        l2: String,
        w1: String,
        w2: String,
    },
    Quadratic {
        index: u64,
        descriptor: String,
        s: u32,
        epsilon: i64,
        balanced: bool,
        support_size: usize,
    },
}

impl Certificate {
    pub fn index(&self) -> u64 {
        match self {
            Certificate::Triple { index, .. }
            | Certificate::WPair { index, .. }
            | Certificate::Quadratic { index, .. } => *index,
        }
    }

    /// Function descriptor this certificate admits.
    pub fn descriptor(&self) -> String {
        match self {
            Certificate::Triple { lambdas: l, .. } => {
                format!("tripleprod:l1={},l2={},l3={}", l[0], l[1], l[2])
            }
            Certificate::WPair { l1, l2, w1, w2, .. } => {
                format!("singlyeven:l1={l1},l2={l2},w1={w1},w2={w2}")
            }
            Certificate::Quadratic { descriptor, .. } => descriptor.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub total_candidates: u64,
    pub start: u64,
    pub examined: u64,
    pub certificates: Vec<Certificate>,
    /// Hits dropped because the independent re-check disagreed.
    pub failed_recheck: usize,
}

impl SearchOutcome {
    pub fn exhausted_budget(&self) -> bool {
        self.certificates.is_empty()
    }
}

/// `1`, `2`, `g`, `g^k` or `0`.
pub fn fmt_elem(ctx: &FieldCtx, x: u32) -> String {
    if x < ctx.p() && ctx.from_int(x as i64) == x {
        return x.to_string();
    }
    match ctx.log(x) {
        Some(1) => "g".into(),
        Some(k) => format!("g^{k}"),
        None => "0".into(),
    }
}

fn binom2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

fn binom3(n: u64) -> u64 {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// k-th 3-subset of [0, n) in lexicographic order.
fn unrank3(n: u64, mut k: u64) -> [u64; 3] {
    let mut a = 0;
    while k >= binom2(n - 1 - a) {
        k -= binom2(n - 1 - a);
        a += 1;
    }
    let mut b = a + 1;
    while k >= n - 1 - b {
        k -= n - 1 - b;
        b += 1;
    }
    [a, b, b + 1 + k]
}

/// k-th 2-subset of [0, n) in lexicographic order.
fn unrank2(n: u64, mut k: u64) -> [u64; 2] {
    let mut a = 0;
    while k >= n - 1 - a {
        k -= n - 1 - a;
        a += 1;
    }
    [a, a + 1 + k]
}

fn half(ctx: &FieldCtx) -> Result<u32> {
    if ctx.p() != 2 {
        return Err(Error::RejectNotBinary);
    }
    if !ctx.n().is_multiple_of(2) {
        return Err(Error::RejectOddDegree);
    }
    Ok(ctx.n() / 2)
}

fn start_offset(seed: u64, total: u64) -> u64 {
    if seed == 0 || total == 0 {
        0
    } else {
        ChaCha8Rng::seed_from_u64(seed).gen_range(0..total)
    }
}

/// Scans `budget` candidates from a seed-dependent offset (seed 0 starts at
/// the canonical first candidate) and returns the certified hits in canonical
/// order.
pub fn run(task: &SearchTask) -> Result<SearchOutcome> {
    if task.budget == 0 {
        return Err(Error::RejectZeroBudget);
    }
    if task.budget > WORK_CAP {
        return Err(Error::RejectWorkCap(task.budget));
    }
    let ctx = &task.ctx;
    let (total, hits): (u64, Box<dyn Fn(u64) -> Option<Certificate> + Sync>) = match task.family {
        Family::TripleLambda { target_wt } => {
            let m = half(ctx)?;
            if !(3..=4).contains(&target_wt) {
                return Err(Error::RejectOutOfDomain(
                    "target weight must be 3 or 4".into(),
                ));
            }
            let n_sub = (1u64 << m) - 1;
            let step = (1i64 << m) + 1;
            let ctx = ctx.clone();
            let f = move |k: u64| {
                let e = unrank3(n_sub, k);
                let l = e.map(|e| ctx.gpow(step * e as i64));
                let t = compute_t_vector(&ctx, l[0], l[1], l[2]).ok()?;
                if t.weight() != target_wt {
                    return None;
                }
                let r = inverse_set_rank(&ctx, l[0], l[1], l[2]).ok()?;
                (r == target_wt as usize + 3).then(|| Certificate::Triple {
                    index: k,
                    lambdas: l.map(|x| fmt_elem(&ctx, x)),
                    t: t.0,
                    inverse_rank: r,
                })
            };
            (binom3(n_sub), Box::new(f))
        }
        Family::WPair { l1, l2 } => {
            check_singly_even_lambdas(ctx, l1, l2)?;
            let q = ctx.q() as u64;
            if q + task.budget > WORK_CAP {
                return Err(Error::RejectWorkCap(q + task.budget));
            }
            let mut ws: Vec<u32> = (1..ctx.q())
                .into_par_iter()
                .filter(|&w| w_condition_check(ctx, l1, l2, w))
                .collect();
            ws.sort_by_key(|&w| ctx.log(w));
            let count = ws.len() as u64;
            let ctx = ctx.clone();
            let f = move |k: u64| {
                let [i, j] = unrank2(count, k);
                let (w1, w2) = (ws[i as usize], ws[j as usize]);
                w_condition_check(&ctx, l1, l2, ctx.add(w1, w2)).then(|| Certificate::WPair {
                    index: k,
                    l1: fmt_elem(&ctx, l1),
                    l2: fmt_elem(&ctx, l2),
                    w1: fmt_elem(&ctx, w1),
                    w2: fmt_elem(&ctx, w2),
                })
            };
            (binom2(count), Box::new(f))
        }
        Family::PlateauedQuadratic {
            s_target,
            require_unbalanced,
        } => {
            if ctx.p() == 2 {
                return Err(Error::RejectCharTwo);
            }
            let digits = ctx.n() / 2 + 1;
            let q = ctx.q() as u64;
            let total = q
                .checked_pow(digits)
                .ok_or(Error::RejectWorkCap(u64::MAX))?;
            let ctx = ctx.clone();
            let f = move |k: u64| {
                let mut terms = Vec::new();
                let mut rest = k;
                for i in (0..digits).rev() {
                    let d = rest % q;
                    rest /= q;
                    if d != q - 1 {
                        terms.push((ctx.gpow(d as i64), i));
                    }
                }
                if terms.is_empty() {
                    return None;
                }
                terms.reverse();
                let descriptor = format!(
                    "quad:{}",
                    terms
                        .iter()
                        .map(|&(c, i)| format!("{}@{i}", fmt_elem(&ctx, c)))
                        .collect::<Vec<_>>()
                        .join(",")
                );
                quadratic_certificate(&ctx, k, descriptor, s_target, require_unbalanced)
            };
            (total, Box::new(f))
        }
    };
    let start = start_offset(task.seed, total);
    let examined = task.budget.min(total);
    let mut certificates: Vec<Certificate> = (0..examined)
        .into_par_iter()
        .filter_map(|i| hits((start + i) % total))
        .collect();
    certificates.sort_by_key(Certificate::index);
    let before = certificates.len();
    let checked: Vec<bool> = certificates
        .par_iter()
        .map(|c| verify(&task.ctx, &task.family, c))
        .collect();
    let mut it = checked.iter();
    certificates.retain(|_| *it.next().unwrap());
    Ok(SearchOutcome {
        total_candidates: total,
        start,
        examined,
        failed_recheck: before - certificates.len(),
        certificates,
    })
}

fn quadratic_certificate(
    ctx: &Arc<FieldCtx>,
    index: u64,
    descriptor: String,
    s_target: u32,
    require_unbalanced: bool,
) -> Option<Certificate> {
    let f = FnDescriptor::parse(&descriptor).ok()?.build(ctx).ok()?;
    let profile = classify(&walsh_transform(&f));
    if profile.s != Some(s_target)
        || !profile.weakly_regular
        || (require_unbalanced && profile.balanced)
    {
        return None;
    }
    Some(Certificate::Quadratic {
        index,
        descriptor,
        s: s_target,
        epsilon: profile.epsilon?,
        balanced: profile.balanced,
        support_size: profile.support.len(),
    })
}

/// Re-checks a certificate from its printed elements.
pub fn verify(ctx: &Arc<FieldCtx>, family: &Family, cert: &Certificate) -> bool {
    let elem = |s: &str| ElemRef::parse(s).and_then(|e| e.resolve(ctx));
    match (family, cert) {
        (
            Family::TripleLambda { target_wt },
            Certificate::Triple {
                lambdas,
                t,
                inverse_rank,
                ..
            },
        ) => {
            let Ok(l) = lambdas
                .iter()
                .map(|s| elem(s))
                .collect::<Result<Vec<u32>>>()
            else {
                return false;
            };
            let Ok(tv) = compute_t_vector(ctx, l[0], l[1], l[2]) else {
                return false;
            };
            tv.0 == *t
                && tv.weight() == *target_wt
                && inverse_set_rank(ctx, l[0], l[1], l[2]).ok() == Some(*inverse_rank)
                && *inverse_rank == *target_wt as usize + 3
        }
        (
            Family::WPair { l1, l2 },
            Certificate::WPair {
                l1: a,
                l2: b,
                w1,
                w2,
                ..
            },
        ) => {
            let (Ok(a), Ok(b), Ok(w1), Ok(w2)) = (elem(a), elem(b), elem(w1), elem(w2)) else {
                return false;
            };
            a == *l1
                && b == *l2
                && w1 != w2
                && w1 != 0
                && w2 != 0
                && w_pair_condition(ctx, a, b, w1, w2)
        }
        (
            Family::PlateauedQuadratic {
                s_target,
                require_unbalanced,
            },
            Certificate::Quadratic {
                index, descriptor, ..
            },
        ) => {
            quadratic_certificate(
                ctx,
                *index,
                descriptor.clone(),
                *s_target,
                *require_unbalanced,
            )
            .as_ref()
                == Some(cert)
        }
        _ => false,
    }
}
