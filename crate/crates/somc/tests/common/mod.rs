#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use somc::codes::{codeword, CodeKind, CodeSpec};
use somc::galois::FieldCtx;
use somc::pfunc::PAryFunction;

pub fn random_fn(ctx: &Arc<FieldCtx>, rng: &mut ChaCha8Rng) -> PAryFunction {
    let p = ctx.p();
    let values: Vec<u8> = (0..ctx.q()).map(|_| rng.gen_range(0..p) as u8).collect();
    PAryFunction::from_table(ctx.clone(), values, "random").unwrap()
}

fn dot(a: &[u8], b: &[u8], p: u32) -> u32 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x as u32 * y as u32)
        .sum::<u32>()
        % p
}

/// Generator rows of the full (or augmented) code built from `values`.
fn rows_of(ctx: &FieldCtx, values: &[u8], augmented: bool) -> Vec<Vec<u8>> {
    let q = ctx.q();
    let mut rows = vec![values.to_vec()];
    for i in 0..ctx.n() {
        let g = ctx.basis_elem(i);
        rows.push((0..q).map(|x| ctx.trace(ctx.mul(g, x)) as u8).collect());
    }
    if augmented {
        rows.push(vec![1; q as usize]);
    }
    rows
}

/// Gram-matrix check on raw generator rows; independent of the library's
/// own self-orthogonality routine.
pub fn rows_self_orthogonal(ctx: &FieldCtx, values: &[u8], augmented: bool) -> bool {
    let rows = rows_of(ctx, values, augmented);
    let p = ctx.p();
    rows.iter().all(|a| rows.iter().all(|b| dot(a, b, p) == 0))
}

/// A random function, and with probability 1/2 one whose values on a few
/// points are re-chosen until the code it generates is self-orthogonal.
pub fn biased_fn(ctx: &Arc<FieldCtx>, rng: &mut ChaCha8Rng, augmented: bool) -> PAryFunction {
    let p = ctx.p();
    let q = ctx.q();
    let mut values: Vec<u8> = (0..q).map(|_| rng.gen_range(0..p) as u8).collect();
    if rng.gen_bool(0.5) {
        let free = (ctx.n() + 2).min(q - 1) as usize;
        let mut pts: Vec<u32> = Vec::new();
        while pts.len() < free {
            let x = rng.gen_range(1..q);
            if !pts.contains(&x) {
                pts.push(x);
            }
        }
        let combos = (p as u64).pow(free as u32);
        let start = rng.gen_range(0..combos);
        for k in 0..combos {
            let mut c = (start + k) % combos;
            for &x in &pts {
                values[x as usize] = (c % p as u64) as u8;
                c /= p as u64;
            }
            if rows_self_orthogonal(ctx, &values, augmented) {
                break;
            }
        }
    }
    PAryFunction::from_table(ctx.clone(), values, "biased").unwrap()
}

pub fn support(w: &[u8]) -> Vec<bool> {
    w.iter().map(|&v| v != 0).collect()
}

/// Minimality by support covering over every pair of nonzero codewords.
pub fn minimal_by_covering(spec: &CodeSpec) -> bool {
    let p = spec.p();
    let q = spec.ctx().q();
    let cs: Vec<Option<u32>> = if spec.kind() == CodeKind::Augmented {
        (0..p).map(Some).collect()
    } else {
        vec![None]
    };
    let mut words: Vec<Vec<u8>> = Vec::new();
    for a in 0..p {
        for b in 0..q {
            for &c in &cs {
                let w = codeword(spec, a, b, c).unwrap();
                if w.iter().any(|&v| v != 0) && !words.contains(&w) {
                    words.push(w);
                }
            }
        }
    }
    for a in &words {
        for b in &words {
            let covers = a.iter().zip(b).all(|(&x, &y)| y == 0 || x != 0);
            let multiple =
                (1..p).any(|z| a.iter().zip(b).all(|(&x, &y)| y as u32 == z * x as u32 % p));
            if covers && !multiple {
                return false;
            }
        }
    }
    true
}

/// Counted trial loop that reports how many trials ran.
pub struct Tally {
    pub trials: usize,
    pub disagreements: Vec<String>,
}

impl Tally {
    pub fn new() -> Tally {
        Tally {
            trials: 0,
            disagreements: Vec::new(),
        }
    }

    pub fn record(&mut self, agree: bool, what: impl FnOnce() -> String) {
        self.trials += 1;
        if !agree {
            self.disagreements.push(what());
        }
    }
}
