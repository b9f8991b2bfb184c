//! Exact Walsh transforms W_f(β) = Σ_x ζ^{f(x) − Tr(βx)} and plateaued
//! classification.
//!
//! A coefficient is stored as its count vector `#{x : f(x) − Tr(βx) = a}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cyclotomic::{gauss_sum, CycInt, WalshValue};
use crate::error::{Error, Result};
use crate::galois::{eta0, FieldCtx};
use crate::pfunc::PAryFunction;

#[derive(Clone)]
pub struct WalshSpectrum {
    ctx: Arc<FieldCtx>,
    counts: Vec<u32>,
}

impl std::fmt::Debug for WalshSpectrum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WalshSpectrum")
            .field("field", &self.ctx)
            .finish()
    }
}

impl PartialEq for WalshSpectrum {
    fn eq(&self, o: &Self) -> bool {
        self.ctx.tag() == o.ctx.tag() && self.counts == o.counts
    }
}

impl WalshSpectrum {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.p()
    }

    pub fn q(&self) -> u32 {
        self.ctx.q()
    }

    /// Raw counts of W(β).
    #[inline]
    pub fn counts(&self, beta: u32) -> &[u32] {
        let p = self.ctx.p() as usize;
        &self.counts[beta as usize * p..(beta as usize + 1) * p]
    }

    pub fn value(&self, beta: u32) -> CycInt {
        CycInt::new(
            self.p(),
            self.counts(beta).iter().map(|&c| c as i64).collect(),
        )
    }

    pub fn walsh_value(&self, beta: u32) -> WalshValue {
        WalshValue {
            beta,
            value: self.value(beta),
        }
    }

    /// W(β) as an integer when p = 2.
    #[inline]
    pub fn binary(&self, beta: u32) -> i64 {
        debug_assert_eq!(self.p(), 2);
        let c = self.counts(beta);
        c[0] as i64 - c[1] as i64
    }

    /// Σ_β |W(β)|² = p^{2n}, evaluated exactly.
    pub fn parseval_ok(&self) -> bool {
        let mut acc = CycInt::zero(self.p());
        for b in 0..self.q() {
            acc = &acc + &self.value(b).norm_sq();
        }
        acc.as_integer() == Some(self.q() as i64 * self.q() as i64)
    }

    /// `beta_index,c0,...,c{p-1}` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("beta_index");
        for a in 0..self.p() {
            write!(s, ",c{a}").unwrap();
        }
        s.push('\n');
        for b in 0..self.q() {
            write!(s, "{b}").unwrap();
            for c in self.counts(b) {
                write!(s, ",{c}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

/// u(β) with u_i = Tr(β x^i), so that Tr(βx) is the dot product of x's
/// coordinates with u(β).
fn dual_coordinates(ctx: &FieldCtx) -> Vec<u32> {
    let n = ctx.n();
    let basis: Vec<u32> = (0..n).map(|i| ctx.basis_elem(i)).collect();
    (0..ctx.q())
        .into_par_iter()
        .map(|b| {
            let coords: Vec<u32> = basis.iter().map(|&e| ctx.trace(ctx.mul(b, e))).collect();
            ctx.index_of(&coords)
        })
        .collect()
}

/// Fast exact transform: radix-p butterflies on count vectors, ±1 FWHT for p = 2.
pub fn walsh_transform(f: &PAryFunction) -> WalshSpectrum {
    let ctx = f.ctx().clone();
    let (p, q) = (ctx.p() as usize, ctx.q() as usize);
    let table = if p == 2 {
        fwht(f.values())
    } else {
        radix_p(f.values(), p)
    };
    let u = dual_coordinates(&ctx);
    let mut counts = vec![0u32; q * p];
    counts.par_chunks_mut(p).enumerate().for_each(|(b, out)| {
        let src = u[b] as usize * p;
        out.copy_from_slice(&table[src..src + p]);
    });
    WalshSpectrum { ctx, counts }
}

fn fwht(values: &[u8]) -> Vec<u32> {
    let q = values.len();
    let mut w: Vec<i32> = values.iter().map(|&v| 1 - 2 * v as i32).collect();
    let mut h = 1;
    while h < q {
        w.par_chunks_mut(2 * h).for_each(|blk| {
            let (lo, hi) = blk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        });
        h *= 2;
    }
    let qi = q as i32;
    w.iter()
        .flat_map(|&v| [((qi + v) / 2) as u32, ((qi - v) / 2) as u32])
        .collect()
}

fn radix_p(values: &[u8], p: usize) -> Vec<u32> {
    let q = values.len();
    let mut t = vec![0u32; q * p];
    for (x, &v) in values.iter().enumerate() {
        t[x * p + v as usize] = 1;
    }
    let mut stride = 1;
    while stride < q {
        t.par_chunks_mut(stride * p * p).for_each(|blk| {
            let mut tmp = vec![0u32; p * p];
            for j in 0..stride {
                for k in 0..p {
                    let at = (j + k * stride) * p;
                    tmp[k * p..(k + 1) * p].copy_from_slice(&blk[at..at + p]);
                }
                for v in 0..p {
                    let at = (j + v * stride) * p;
                    for a in 0..p {
                        let mut s = 0;
                        for k in 0..p {
                            s += tmp[k * p + (a + v * k) % p];
                        }
                        blk[at + a] = s;
                    }
                }
            }
        });
        stride *= p;
    }
    t
}

/// Direct O(q²) summation.
pub fn walsh_transform_naive(f: &PAryFunction) -> WalshSpectrum {
    let ctx = f.ctx().clone();
    let (p, q) = (ctx.p(), ctx.q());
    let mut counts = vec![0u32; (q * p) as usize];
    counts
        .par_chunks_mut(p as usize)
        .enumerate()
        .for_each(|(b, out)| {
            for x in 0..q {
                let a = (f.value(x) + p - ctx.trace(ctx.mul(b as u32, x))) % p;
                out[a as usize] += 1;
            }
        });
    WalshSpectrum { ctx, counts }
}

/// Recovers f from its spectrum: Σ_β W(β) ζ^{Tr(βx)} = q ζ^{f(x)}.
pub fn recover_function(spec: &WalshSpectrum) -> Option<Vec<u8>> {
    let ctx = spec.ctx();
    let (p, q) = (ctx.p() as usize, ctx.q());
    (0..q)
        .map(|x| {
            let mut acc = vec![0i64; p];
            for b in 0..q {
                let t = ctx.trace(ctx.mul(b, x)) as usize;
                for (a, &c) in spec.counts(b).iter().enumerate() {
                    acc[(a + t) % p] += c as i64;
                }
            }
            let s = CycInt::new(p as u32, acc);
            (0..p)
                .find(|&c| s == CycInt::zeta(p as u32, c as i64).scale(q as i64))
                .map(|c| c as u8)
        })
        .collect()
}

/// Spectral profile: amplitude, sign, dual and support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlateauedProfile {
    pub p: u32,
    pub n: u32,
    /// `None` when amplitudes are mixed.
    pub s: Option<u32>,
    pub epsilon: Option<i64>,
    pub weakly_regular: bool,
    pub balanced: bool,
    /// f* on the support, 0 elsewhere.
    pub dual: Option<Vec<u8>>,
    pub support: Vec<u32>,
}

impl PlateauedProfile {
    pub fn is_plateaued(&self) -> bool {
        self.s.is_some()
    }
}

/// |W(β)|² as an integer, if rational.
fn abs_sq(spec: &WalshSpectrum, beta: u32) -> Option<i64> {
    if spec.p() == 2 {
        let w = spec.binary(beta);
        return Some(w * w);
    }
    spec.value(beta).norm_sq().as_integer()
}

pub fn classify(spec: &WalshSpectrum) -> PlateauedProfile {
    let ctx = spec.ctx();
    let (p, n, q) = (ctx.p(), ctx.n(), ctx.q());
    let balanced = spec.value(0).is_zero();
    let mut profile = PlateauedProfile {
        p,
        n,
        s: None,
        epsilon: None,
        weakly_regular: false,
        balanced,
        dual: None,
        support: vec![],
    };
    let norms: Option<Vec<i64>> = (0..q).into_par_iter().map(|b| abs_sq(spec, b)).collect();
    let Some(norms) = norms else { return profile };
    let support: Vec<u32> = (0..q).filter(|&b| norms[b as usize] != 0).collect();
    let amp = norms[support[0] as usize];
    if support.iter().any(|&b| norms[b as usize] != amp) {
        return profile;
    }
    let Some(s) = (0..=n).find(|&s| (p as i64).pow(n + s) == amp) else {
        return profile;
    };
    if support.len() as u64 != (p as u64).pow(n - s) {
        return profile;
    }
    profile.s = Some(s);
    profile.support = support;

    let mut dual = vec![0u8; q as usize];
    if p == 2 {
        if (n + s) % 2 == 1 {
            return profile;
        }
        for &b in &profile.support {
            dual[b as usize] = u8::from(spec.binary(b) < 0);
        }
        profile.epsilon = Some(1);
    } else {
        let base = gauss_sum(p).expect("odd p").pow(n + s);
        let neg = base.scale(-1);
        let mut eps = None;
        for &b in &profile.support {
            let w = spec.value(b);
            let hit = (0..p as i64).find_map(|c| {
                if w == base.rotate(c) {
                    Some((1, c))
                } else if w == neg.rotate(c) {
                    Some((-1, c))
                } else {
                    None
                }
            });
            let Some((e, c)) = hit else { return profile };
            if *eps.get_or_insert(e) != e {
                return profile;
            }
            dual[b as usize] = c as u8;
        }
        profile.epsilon = eps;
    }
    profile.weakly_regular = true;
    profile.dual = Some(dual);
    profile
}

/// N_{f*}(z) = #{β in the support : f*(β) = z}.
pub fn dual_value_counts(profile: &PlateauedProfile) -> Result<Vec<u64>> {
    let dual = profile
        .dual
        .as_ref()
        .filter(|_| profile.weakly_regular)
        .ok_or(Error::RejectNotWeaklyRegular)?;
    let mut out = vec![0u64; profile.p as usize];
    for &b in &profile.support {
        out[dual[b as usize] as usize] += 1;
    }
    Ok(out)
}

/// Closed-form dual value counts for a weakly regular s-plateaued f, odd p.
pub fn predicted_dual_counts(p: u32, n: u32, s: u32, epsilon: i64) -> Result<Vec<i64>> {
    if p == 2 {
        return Err(Error::RejectCharTwo);
    }
    if s >= n {
        return Err(Error::RejectOutOfDomain(
            "dual counts need n - s >= 1".into(),
        ));
    }
    let d = n - s;
    let pi = p as i64;
    let base = pi.pow(d - 1);
    let m1 = eta0(p, -1);
    let mut out = vec![0i64; p as usize];
    if d.is_multiple_of(2) {
        let e = epsilon * m1.pow(n + d / 2);
        let k = pi.pow((d - 2) / 2);
        out[0] = base + e * k * (pi - 1);
        for z in 1..p as usize {
            out[z] = base - e * k;
        }
    } else {
        let e = epsilon * m1.pow(n + (d - 1) / 2);
        let k = pi.pow((d - 1) / 2);
        out[0] = base;
        for z in 1..p as usize {
            out[z] = base + eta0(p, z as i64) * e * k;
        }
    }
    Ok(out)
}

/// Computed and closed-form dual counts side by side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCheck {
    pub computed: Vec<u64>,
    pub predicted: Vec<i64>,
    pub matches: bool,
}

pub fn check_dual_counts(profile: &PlateauedProfile) -> Result<DualCheck> {
    let computed = dual_value_counts(profile)?;
    let predicted = predicted_dual_counts(
        profile.p,
        profile.n,
        profile.s.unwrap(),
        profile.epsilon.unwrap(),
    )?;
    let matches = computed
        .iter()
        .zip(&predicted)
        .all(|(&c, &e)| c as i64 == e);
    Ok(DualCheck {
        computed,
        predicted,
        matches,
    })
}

/// Multiset of W(β) over β, keyed by the canonical (normalized) coordinates.
pub fn value_multiset(
    spec: &WalshSpectrum,
    betas: impl IntoIterator<Item = u32>,
) -> BTreeMap<Vec<i64>, u64> {
    let mut m = BTreeMap::new();
    for b in betas {
        *m.entry(spec.value(b).normalized().into_coords())
            .or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::p_star;
    use crate::galois::{default_field, FieldSpec};
    use crate::pfunc::{f_t_function, monomial_bent, quadratic_form};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_fn(ctx: &Arc<FieldCtx>, rng: &mut ChaCha8Rng) -> PAryFunction {
        let p = ctx.p();
        let values = (0..ctx.q()).map(|_| rng.gen_range(0..p) as u8).collect();
        PAryFunction::from_table(ctx.clone(), values, "rand").unwrap()
    }

    #[test]
    fn zero_function_spectrum() {
        let ctx = default_field(3, 3).unwrap();
        let f = PAryFunction::from_fn(ctx.clone(), "0", |_| 0).unwrap();
        let w = walsh_transform(&f);
        assert_eq!(w.value(0).as_integer(), Some(27));
        for b in 1..27 {
            assert!(w.value(b).is_zero());
        }
    }

    #[test]
    fn fast_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, n) in [
            (2, 1),
            (2, 4),
            (2, 7),
            (3, 1),
            (3, 3),
            (3, 5),
            (5, 2),
            (5, 3),
            (7, 2),
        ] {
            let ctx = default_field(p, n).unwrap();
            for _ in 0..3 {
                let f = random_fn(&ctx, &mut rng);
                let w = walsh_transform(&f);
                assert_eq!(w, walsh_transform_naive(&f), "p={p} n={n}");
                assert!(w.parseval_ok());
                for b in 0..ctx.q() {
                    assert_eq!(w.counts(b).iter().sum::<u32>(), ctx.q());
                }
            }
        }
    }

    #[test]
    fn monomial_bent_spectrum_and_profile() {
        for (p, m) in [(3u32, 1u32), (3, 2), (5, 1), (2, 3)] {
            let ctx = default_field(p, 2 * m).unwrap();
            let step = p.pow(m) as i64 + 1;
            for j in [0i64, 1] {
                let lam = ctx.gpow(step * j);
                let g = monomial_bent(&ctx, lam).unwrap();
                let w = walsh_transform(&g);
                let inv = ctx.inv(lam).unwrap();
                for a in 0..ctx.q() {
                    let e = crate::pfunc::norm_trace(&ctx, inv, a) as i64;
                    let want = CycInt::zeta(p, -e).scale(-(p.pow(m) as i64));
                    assert_eq!(w.value(a), want, "p={p} m={m} a={a}");
                }
                let prof = classify(&w);
                assert_eq!(prof.s, Some(0));
                assert!(prof.weakly_regular);
                if p > 2 {
                    // -p^m = ε G^{2m} = ε (p*)^m
                    let want_eps = -(p.pow(m) as i64) / p_star(p).pow(m);
                    assert_eq!(prof.epsilon, Some(want_eps));
                }
            }
        }
    }

    #[test]
    fn plateaued_quadratics_from_examples() {
        let ctx = FieldSpec::parse("gf3_5").unwrap().build().unwrap();
        let f1 = quadratic_form(&ctx, &[(1, 0), (ctx.gpow(23), 1), (ctx.gpow(4), 2)]).unwrap();
        let w1 = walsh_transform(&f1);
        let p1 = classify(&w1);
        assert_eq!(p1.s, Some(1));
        assert_eq!(p1.support.len(), 81);
        assert!(p1.weakly_regular && !p1.balanced);
        assert_eq!(p1.epsilon, Some(-1));
        for &b in &p1.support {
            let v = w1.value(b);
            assert!((0..3).any(|j| v == CycInt::zeta(3, j).scale(27)));
        }
        let d = check_dual_counts(&p1).unwrap();
        assert!(d.matches, "{d:?}");
        assert_eq!(d.computed, vec![33, 24, 24]);

        let f2 = quadratic_form(&ctx, &[(ctx.gpow(1), 0), (1, 1), (2, 2)]).unwrap();
        let p2 = classify(&walsh_transform(&f2));
        assert_eq!(p2.s, Some(2));
        assert_eq!(p2.support.len(), 27);
        assert!(p2.weakly_regular && !p2.balanced);
        assert_eq!(p2.epsilon, Some(1));
        assert!(check_dual_counts(&p2).unwrap().matches);
    }

    #[test]
    fn random_function_is_not_plateaued() {
        let ctx = default_field(3, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_fn(&ctx, &mut rng);
        let prof = classify(&walsh_transform(&f));
        assert!(!prof.weakly_regular);
        assert_eq!(dual_value_counts(&prof), Err(Error::RejectNotWeaklyRegular));
    }

    #[test]
    fn bent_dual_counts_partition_field() {
        let ctx = default_field(3, 2).unwrap();
        let g = monomial_bent(&ctx, 1).unwrap();
        let prof = classify(&walsh_transform(&g));
        assert_eq!(dual_value_counts(&prof).unwrap().iter().sum::<u64>(), 9);
    }

    #[test]
    fn inverse_recovery() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (p, n) in [(2, 5), (3, 3), (3, 4), (5, 2), (7, 2)] {
            let ctx = default_field(p, n).unwrap();
            let f = random_fn(&ctx, &mut rng);
            assert_eq!(
                recover_function(&walsh_transform(&f)).as_deref(),
                Some(f.values())
            );
        }
    }

    #[test]
    fn f_t_closed_form() {
        for (p, n) in [(3u32, 1u32), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3)] {
            let ctx = default_field(p, n).unwrap();
            let g = gauss_sum(p).unwrap().pow(n);
            let q = ctx.q() as i64;
            let sgn = if n % 2 == 1 { 1 } else { -1 };
            for t in 1..p as i64 {
                let w = walsh_transform(&f_t_function(&ctx, t).unwrap());
                let z = |e: i64| CycInt::zeta(p, e);
                let w0 = &(&z(1) + &z(-1)).scale((q - 1) / 2) + &z(t);
                assert_eq!(w.value(0), w0);
                for b in 1..ctx.q() {
                    let h = g.scale(sgn * ctx.eta(ctx.neg(b)).unwrap());
                    let plus = (&h - &CycInt::one(p)).div_exact(2).unwrap();
                    let minus = (&h + &CycInt::one(p)).div_exact(2).unwrap();
                    let want = &(&(&plus * &z(1)) - &(&minus * &z(-1))) + &z(t);
                    assert_eq!(w.value(b), want, "p={p} n={n} t={t} b={b}");
                }
            }
        }
    }

    #[test]
    fn f_t_criterion_sums_over_gf5() {
        let ctx = default_field(5, 1).unwrap();
        let w = walsh_transform(&f_t_function(&ctx, 1).unwrap());
        for b in 0..5 {
            assert_eq!(w.walsh_value(b).criterion_sums().s2, 0);
        }
    }

    #[test]
    fn csv_dump() {
        let ctx = default_field(3, 1).unwrap();
        let f = quadratic_form(&ctx, &[(1, 0)]).unwrap();
        let csv = walsh_transform(&f).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "beta_index,c0,c1,c2");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "0,1,2,0");
    }

    #[test]
    fn predicted_dual_counts_sum_to_support() {
        for p in [3u32, 5, 7] {
            for n in 2..6u32 {
                for s in 0..n {
                    for e in [1, -1] {
                        let c = predicted_dual_counts(p, n, s, e).unwrap();
                        assert_eq!(c.iter().sum::<i64>(), (p as i64).pow(n - s));
                    }
                }
            }
        }
    }
}
