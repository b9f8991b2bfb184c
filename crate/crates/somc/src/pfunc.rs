//! p-ary functions GF(p^n) → GF(p) as value tables, and the constructors for
//! the function families used by the code constructions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::FieldCtx;
use crate::walsh;

#[derive(Clone)]
pub struct PAryFunction {
    ctx: Arc<FieldCtx>,
    values: Vec<u8>,
    meta: String,
}

impl fmt::Debug for PAryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PAryFunction")
            .field("field", &self.ctx)
            .field("meta", &self.meta)
            .finish()
    }
}

impl PAryFunction {
    pub fn from_table(
        ctx: Arc<FieldCtx>,
        values: Vec<u8>,
        meta: impl Into<String>,
    ) -> Result<PAryFunction> {
        if ctx.p() > 255 {
            return Err(Error::RejectBadTable("p must be below 256".into()));
        }
        if values.len() != ctx.q() as usize {
            return Err(Error::RejectBadTable(format!(
                "expected {} entries, got {}",
                ctx.q(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|&&v| v as u32 >= ctx.p()) {
            return Err(Error::RejectBadTable(format!(
                "entry {v} is not below p = {}",
                ctx.p()
            )));
        }
        Ok(PAryFunction {
            ctx,
            values,
            meta: meta.into(),
        })
    }

    /// Tabulates `g` over all element indices.
    pub fn from_fn(
        ctx: Arc<FieldCtx>,
        meta: impl Into<String>,
        g: impl Fn(u32) -> u32,
    ) -> Result<PAryFunction> {
        let p = ctx.p();
        let values = (0..ctx.q()).map(|x| (g(x) % p) as u8).collect();
        PAryFunction::from_table(ctx, values, meta)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.p()
    }

    pub fn n(&self) -> u32 {
        self.ctx.n()
    }

    pub fn q(&self) -> u32 {
        self.ctx.q()
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    #[inline]
    pub fn value(&self, x: u32) -> u32 {
        self.values[x as usize] as u32
    }

    pub fn meta(&self) -> &str {
        &self.meta
    }
}

/// (t1, t2, t3, t4) with bit 0 meaning the inverse identity holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TVector(pub [u8; 4]);

impl TVector {
    pub fn weight(&self) -> u32 {
        self.0.iter().map(|&b| b as u32).sum()
    }

    pub fn t1(&self) -> u8 {
        self.0[0]
    }

    /// wt(t2, t3, t4).
    pub fn tail_weight(&self) -> u32 {
        self.0[1..].iter().map(|&b| b as u32).sum()
    }
}

fn half_degree(ctx: &FieldCtx) -> Result<u32> {
    if !ctx.n().is_multiple_of(2) {
        return Err(Error::RejectOddDegree);
    }
    Ok(ctx.n() / 2)
}

fn check_subfield_lambda(ctx: &FieldCtx, m: u32, lambda: u32) -> Result<()> {
    if lambda == 0 {
        return Err(Error::RejectZeroLambda);
    }
    if !ctx.in_subfield(m, lambda) {
        return Err(Error::RejectLambdaOutsideSubfield);
    }
    Ok(())
}

/// Tr_1^m on GF(p^m)* indexed by j where the element is g^{(p^m+1)j}.
fn norm_trace_lookup(ctx: &FieldCtx, m: u32) -> Vec<u8> {
    let step = ctx.p().pow(m) as i64 + 1;
    let len = ctx.p().pow(m) - 1;
    (0..len as i64)
        .map(|j| {
            ctx.subfield_trace(m, ctx.gpow(step * j))
                .expect("m divides n") as u8
        })
        .collect()
}

/// Values of x ↦ Tr_1^m(λ x^{p^m+1}) over GF(p^{2m}).
pub fn norm_trace_table(ctx: &FieldCtx, lambda: u32) -> Result<Vec<u8>> {
    let m = half_degree(ctx)?;
    check_subfield_lambda(ctx, m, lambda)?;
    let lookup = norm_trace_lookup(ctx, m);
    Ok(norm_trace_with(ctx, m, lambda, &lookup))
}

fn norm_trace_with(ctx: &FieldCtx, m: u32, lambda: u32, lookup: &[u8]) -> Vec<u8> {
    let order = ctx.q() as u64 - 1;
    let step = ctx.p().pow(m) as u64 + 1;
    let ll = ctx.log(lambda).expect("nonzero") as u64;
    let mut out = vec![0u8; ctx.q() as usize];
    for x in 1..ctx.q() {
        let e = (ll + step * ctx.log(x).unwrap() as u64) % order;
        out[x as usize] = lookup[(e / step) as usize];
    }
    out
}

/// Tr_1^m(μ w^{p^m+1}) for μ in the half-degree subfield.
pub fn norm_trace(ctx: &FieldCtx, mu: u32, w: u32) -> u32 {
    let m = ctx.n() / 2;
    let y = ctx.mul(mu, ctx.pow(w, ctx.p().pow(m) as u64 + 1));
    ctx.subfield_trace(m, y).expect("m divides n")
}

/// g_λ(x) = Tr_1^m(λ x^{p^m+1}).
pub fn monomial_bent(ctx: &Arc<FieldCtx>, lambda: u32) -> Result<PAryFunction> {
    let values = norm_trace_table(ctx, lambda)?;
    PAryFunction::from_table(ctx.clone(), values, format!("monobent:l=#{lambda}"))
}

fn check_triple(ctx: &FieldCtx, l: [u32; 3]) -> Result<u32> {
    if ctx.p() != 2 {
        return Err(Error::RejectNotBinary);
    }
    let m = half_degree(ctx)?;
    for &li in &l {
        check_subfield_lambda(ctx, m, li)?;
    }
    if ctx.rank_of(&l) != 3 {
        return Err(Error::RejectDependentLambdas);
    }
    Ok(m)
}

/// f(x) = f_{λ1}(x) f_{λ2}(x) f_{λ3}(x) over GF(2^{2m}).
pub fn triple_product(ctx: &Arc<FieldCtx>, l1: u32, l2: u32, l3: u32) -> Result<PAryFunction> {
    let m = check_triple(ctx, [l1, l2, l3])?;
    let lookup = norm_trace_lookup(ctx, m);
    let t: Vec<Vec<u8>> = [l1, l2, l3]
        .iter()
        .map(|&l| norm_trace_with(ctx, m, l, &lookup))
        .collect();
    let values = (0..ctx.q() as usize)
        .map(|x| t[0][x] & t[1][x] & t[2][x])
        .collect();
    PAryFunction::from_table(
        ctx.clone(),
        values,
        format!("tripleprod:l1=#{l1},l2=#{l2},l3=#{l3}"),
    )
}

pub fn compute_t_vector(ctx: &FieldCtx, l1: u32, l2: u32, l3: u32) -> Result<TVector> {
    check_triple(ctx, [l1, l2, l3])?;
    let inv = |a: u32| ctx.inv0(a);
    let bit = |sum: u32, parts: &[u32]| {
        let rhs = parts.iter().fold(0, |acc, &x| ctx.add(acc, inv(x)));
        u8::from(inv(sum) != rhs)
    };
    let s3 = ctx.add(ctx.add(l1, l2), l3);
    let t = TVector([
        bit(s3, &[l1, l2, l3]),
        bit(ctx.add(l1, l2), &[l1, l2]),
        bit(ctx.add(l1, l3), &[l1, l3]),
        bit(ctx.add(l2, l3), &[l2, l3]),
    ]);
    if t.t1() != 1 || t.weight() < 3 {
        return Err(Error::TVectorInvariant(t.0));
    }
    Ok(t)
}

/// λ1⁻¹, λ2⁻¹, λ3⁻¹, (λ1+λ2)⁻¹, (λ1+λ3)⁻¹, (λ2+λ3)⁻¹, (λ1+λ2+λ3)⁻¹.
pub fn inverse_set(ctx: &FieldCtx, l1: u32, l2: u32, l3: u32) -> [u32; 7] {
    let a = |x: u32, y: u32| ctx.add(x, y);
    [
        ctx.inv0(l1),
        ctx.inv0(l2),
        ctx.inv0(l3),
        ctx.inv0(a(l1, l2)),
        ctx.inv0(a(l1, l3)),
        ctx.inv0(a(l2, l3)),
        ctx.inv0(a(a(l1, l2), l3)),
    ]
}

pub fn inverse_set_rank(ctx: &FieldCtx, l1: u32, l2: u32, l3: u32) -> Result<usize> {
    check_triple(ctx, [l1, l2, l3])?;
    Ok(ctx.rank_of(&inverse_set(ctx, l1, l2, l3)))
}

/// Whether the inverse set has rank wt(t) + 3.
pub fn inverse_set_rank_ok(ctx: &FieldCtx, l1: u32, l2: u32, l3: u32) -> Result<bool> {
    let t = compute_t_vector(ctx, l1, l2, l3)?;
    Ok(inverse_set_rank(ctx, l1, l2, l3)? == t.weight() as usize + 3)
}

/// The seven μ of the w-conditions, with λ3 = λ1 + λ2.
pub fn w_mus(ctx: &FieldCtx, l1: u32, l2: u32) -> [u32; 7] {
    let l3 = ctx.add(l1, l2);
    let (i1, i2, i3) = (ctx.inv0(l1), ctx.inv0(l2), ctx.inv0(l3));
    [
        l1,
        l2,
        l3,
        ctx.inv0(ctx.add(i1, i2)),
        ctx.inv0(ctx.add(i1, i3)),
        ctx.inv0(ctx.add(i2, i3)),
        ctx.inv0(ctx.add(ctx.add(i1, i2), i3)),
    ]
}

/// Tr_1^m(μ w^{2^m+1}) = 0 for every μ of [`w_mus`].
pub fn w_condition_check(ctx: &FieldCtx, l1: u32, l2: u32, w: u32) -> bool {
    w_mus(ctx, l1, l2)
        .iter()
        .all(|&mu| norm_trace(ctx, mu, w) == 0)
}

/// The conditions for w1, w2 and w1 + w2.
pub fn w_pair_condition(ctx: &FieldCtx, l1: u32, l2: u32, w1: u32, w2: u32) -> bool {
    [w1, w2, ctx.add(w1, w2)]
        .iter()
        .all(|&w| w_condition_check(ctx, l1, l2, w))
}

/// Checks the λ-pair preconditions of [`singly_even_function`] and returns m.
pub fn check_singly_even_lambdas(ctx: &FieldCtx, l1: u32, l2: u32) -> Result<u32> {
    if ctx.p() != 2 {
        return Err(Error::RejectNotBinary);
    }
    let m = half_degree(ctx)?;
    check_subfield_lambda(ctx, m, l1)?;
    check_subfield_lambda(ctx, m, l2)?;
    if ctx.rank_of(&[l1, l2]) != 2 {
        return Err(Error::RejectDependentLambdas);
    }
    if ctx.inv0(ctx.add(l1, l2)) == ctx.add(ctx.inv0(l1), ctx.inv0(l2)) {
        return Err(Error::RejectInverseIdentityHolds);
    }
    Ok(m)
}

/// f(x) = f_{λ1}(x) f_{λ2}(x) + (x+w1)^{2^n−1} + (x+w2)^{2^n−1}.
pub fn singly_even_function(
    ctx: &Arc<FieldCtx>,
    l1: u32,
    l2: u32,
    w1: u32,
    w2: u32,
) -> Result<PAryFunction> {
    let m = check_singly_even_lambdas(ctx, l1, l2)?;
    if w1 == 0 || w2 == 0 || w1 == w2 {
        return Err(Error::RejectBadWPair);
    }
    if !w_pair_condition(ctx, l1, l2, w1, w2) {
        return Err(Error::RejectWConditionFails);
    }
    let lookup = norm_trace_lookup(ctx, m);
    let a = norm_trace_with(ctx, m, l1, &lookup);
    let b = norm_trace_with(ctx, m, l2, &lookup);
    let mut values: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x & y).collect();
    values[w1 as usize] ^= 1;
    values[w2 as usize] ^= 1;
    PAryFunction::from_table(
        ctx.clone(),
        values,
        format!("singlyeven:l1=#{l1},l2=#{l2},w1=#{w1},w2=#{w2}"),
    )
}

/// f_t(0) = t and f_t(x) = x^{(q−1)/2} otherwise.
pub fn f_t_function(ctx: &Arc<FieldCtx>, t: i64) -> Result<PAryFunction> {
    if ctx.p() == 2 {
        return Err(Error::RejectCharTwo);
    }
    let p = ctx.p() as i64;
    let t = t.rem_euclid(p);
    if t == 0 {
        return Err(Error::RejectZeroT);
    }
    let meta = format!("ftee:t={t}");
    PAryFunction::from_fn(ctx.clone(), meta, |x| {
        if x == 0 {
            t as u32
        } else {
            ctx.eta(x).expect("odd p").rem_euclid(p) as u32
        }
    })
}

/// f_a = f + a f^{p−1}, for f unbalanced weakly regular plateaued.
pub fn f_a_from_plateaued(f: &PAryFunction, a: i64) -> Result<PAryFunction> {
    if f.p() == 2 {
        return Err(Error::RejectCharTwo);
    }
    let p = f.p() as i64;
    let a = a.rem_euclid(p);
    if a == 0 {
        return Err(Error::RejectZeroA);
    }
    let profile = walsh::classify(&walsh::walsh_transform(f));
    if profile.s.is_none() || !profile.weakly_regular {
        return Err(Error::RejectNotWeaklyRegular);
    }
    if profile.balanced {
        return Err(Error::RejectBalancedBase);
    }
    let values = f
        .values()
        .iter()
        .map(|&v| {
            if v == 0 {
                0
            } else {
                ((v as i64 + a) % p) as u8
            }
        })
        .collect();
    PAryFunction::from_table(f.ctx().clone(), values, format!("fa:a={a};{}", f.meta()))
}

/// Tr_1^n(Σ c_i x^{p^i + 1}) with `coeffs` as (c_i, i).
pub fn quadratic_form(ctx: &Arc<FieldCtx>, coeffs: &[(u32, u32)]) -> Result<PAryFunction> {
    if ctx.p() == 2 {
        return Err(Error::RejectCharTwo);
    }
    let terms: Vec<(u32, u64)> = coeffs
        .iter()
        .filter(|(c, _)| *c != 0)
        .map(|&(c, i)| (c, ctx.p().pow(i % ctx.n()) as u64 + 1))
        .collect();
    if terms.is_empty() {
        return Err(Error::RejectAllZero);
    }
    let meta = format!(
        "quad:{}",
        coeffs
            .iter()
            .map(|(c, i)| format!("#{c}@{i}"))
            .collect::<Vec<_>>()
            .join(",")
    );
    PAryFunction::from_fn(ctx.clone(), meta, |x| {
        let y = terms
            .iter()
            .fold(0, |acc, &(c, e)| ctx.add(acc, ctx.mul(c, ctx.pow(x, e))));
        ctx.trace(y)
    })
}

/// A field element written as `g^k`, `g`, a prime-field integer, or `#index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElemRef {
    GPow(i64),
    Int(i64),
    Index(u32),
}

impl ElemRef {
    pub fn parse(s: &str) -> Result<ElemRef> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad field element `{s}`"));
        if s == "g" {
            Ok(ElemRef::GPow(1))
        } else if let Some(k) = s.strip_prefix("g^") {
            Ok(ElemRef::GPow(k.parse().map_err(|_| bad())?))
        } else if let Some(i) = s.strip_prefix('#') {
            Ok(ElemRef::Index(i.parse().map_err(|_| bad())?))
        } else {
            Ok(ElemRef::Int(s.parse().map_err(|_| bad())?))
        }
    }

    pub fn resolve(&self, ctx: &FieldCtx) -> Result<u32> {
        match *self {
            ElemRef::GPow(k) => Ok(ctx.gpow(k)),
            ElemRef::Int(c) => Ok(ctx.from_int(c)),
            ElemRef::Index(i) if i < ctx.q() => Ok(i),
            ElemRef::Index(i) => Err(Error::Parse(format!("element index {i} out of range"))),
        }
    }
}

/// Parsed function descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FnDescriptor {
    TripleProd([ElemRef; 3]),
    SinglyEven {
        l1: ElemRef,
        l2: ElemRef,
        w1: ElemRef,
        w2: ElemRef,
    },
    FTee(i64),
    Quad(Vec<(ElemRef, u32)>),
    MonoBent(ElemRef),
    Fa {
        a: i64,
        base: Box<FnDescriptor>,
    },
    Table(Vec<u8>),
}

fn keyed(body: &str, keys: &[&str]) -> Result<Vec<ElemRef>> {
    let mut out = vec![None; keys.len()];
    for part in body.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got `{part}`")))?;
        let pos = keys
            .iter()
            .position(|&x| x == k.trim())
            .ok_or_else(|| Error::Parse(format!("unknown key `{}`", k.trim())))?;
        out[pos] = Some(ElemRef::parse(v)?);
    }
    out.into_iter()
        .zip(keys)
        .map(|(v, k)| v.ok_or_else(|| Error::Parse(format!("missing key `{k}`"))))
        .collect()
}

fn int_arg(body: &str, key: &str) -> Result<i64> {
    body.trim()
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected `{key}=<integer>`, got `{body}`")))
}

impl FnDescriptor {
    pub fn parse(s: &str) -> Result<FnDescriptor> {
        let s = s.trim();
        let (head, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("descriptor `{s}` lacks a `family:` prefix")))?;
        match head.trim() {
            "tripleprod" => {
                let v = keyed(body, &["l1", "l2", "l3"])?;
                Ok(FnDescriptor::TripleProd([v[0], v[1], v[2]]))
            }
            "singlyeven" => {
                let v = keyed(body, &["l1", "l2", "w1", "w2"])?;
                Ok(FnDescriptor::SinglyEven {
                    l1: v[0],
                    l2: v[1],
                    w1: v[2],
                    w2: v[3],
                })
            }
            "ftee" => Ok(FnDescriptor::FTee(int_arg(body, "t")?)),
            "monobent" => Ok(FnDescriptor::MonoBent(keyed(body, &["l"])?[0])),
            "quad" => {
                let terms = body
                    .split(',')
                    .map(|t| {
                        let (c, i) = t
                            .split_once('@')
                            .ok_or_else(|| Error::Parse(format!("expected coeff@i, got `{t}`")))?;
                        let i = i
                            .trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad exponent index `{i}`")))?;
                        Ok((ElemRef::parse(c)?, i))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(FnDescriptor::Quad(terms))
            }
            "fa" => {
                let (a, rest) = body
                    .split_once(';')
                    .ok_or_else(|| Error::Parse("expected `fa:a=N;<descriptor>`".into()))?;
                Ok(FnDescriptor::Fa {
                    a: int_arg(a, "a")?,
                    base: Box::new(FnDescriptor::parse(rest)?),
                })
            }
            "table" => {
                let body = body.trim();
                let digits: Option<Vec<u8>> = if body.contains(',') {
                    body.split(',').map(|d| d.trim().parse().ok()).collect()
                } else {
                    body.chars()
                        .map(|c| c.to_digit(10).map(|d| d as u8))
                        .collect()
                };
                Ok(FnDescriptor::Table(digits.ok_or_else(|| {
                    Error::Parse(format!("bad table `{body}`"))
                })?))
            }
            other => Err(Error::Parse(format!("unknown function family `{other}`"))),
        }
    }

    pub fn build(&self, ctx: &Arc<FieldCtx>) -> Result<PAryFunction> {
        let r = |e: &ElemRef| e.resolve(ctx);
        match self {
            FnDescriptor::TripleProd(l) => triple_product(ctx, r(&l[0])?, r(&l[1])?, r(&l[2])?),
            FnDescriptor::SinglyEven { l1, l2, w1, w2 } => {
                singly_even_function(ctx, r(l1)?, r(l2)?, r(w1)?, r(w2)?)
            }
            FnDescriptor::FTee(t) => f_t_function(ctx, *t),
            FnDescriptor::MonoBent(l) => monomial_bent(ctx, r(l)?),
            FnDescriptor::Quad(terms) => {
                let c = terms
                    .iter()
                    .map(|(e, i)| Ok((r(e)?, *i)))
                    .collect::<Result<Vec<_>>>()?;
                quadratic_form(ctx, &c)
            }
            FnDescriptor::Fa { a, base } => f_a_from_plateaued(&base.build(ctx)?, *a),
            FnDescriptor::Table(v) => PAryFunction::from_table(ctx.clone(), v.clone(), "table"),
        }
    }
}
