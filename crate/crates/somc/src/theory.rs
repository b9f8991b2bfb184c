//! Closed-form weight and Walsh-value distributions, and a differ against
//! computed tables.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::galois::{eta0, is_prime};
use crate::pfunc::TVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableId {
    /// Triple-product code, t = (1,1,1,1).
    TripleAllOnes,
    /// Triple-product code, t_1 = 1 and wt(t_2, t_3, t_4) = 2.
    TripleTailTwo,
    /// Singly-even code with β restricted to V.
    SinglyEven,
    /// f_t code for p^n ≡ 1 (mod 4).
    FtOneModFour,
    /// f_t code for p^n ≡ 3 (mod 4).
    FtThreeModFour,
    /// f_a code, n + s even.
    FaEven,
    /// f_a code, n + s odd.
    FaOdd,
    /// Walsh values of the triple product over all β.
    TripleWalsh,
    /// Walsh values of the singly-even function over β ∈ V.
    SinglyEvenWalsh,
}

impl TableId {
    pub const ALL: [TableId; 9] = [
        TableId::TripleAllOnes,
        TableId::TripleTailTwo,
        TableId::SinglyEven,
        TableId::FtOneModFour,
        TableId::FtThreeModFour,
        TableId::FaEven,
        TableId::FaOdd,
        TableId::TripleWalsh,
        TableId::SinglyEvenWalsh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::TripleAllOnes => "triple-all-ones",
            TableId::TripleTailTwo => "triple-tail-two",
            TableId::SinglyEven => "singly-even",
            TableId::FtOneModFour => "ft-1mod4",
            TableId::FtThreeModFour => "ft-3mod4",
            TableId::FaEven => "fa-even",
            TableId::FaOdd => "fa-odd",
            TableId::TripleWalsh => "triple-walsh",
            TableId::SinglyEvenWalsh => "singly-even-walsh",
        }
    }

    /// Weight tables, as opposed to Walsh-value tables.
    pub fn is_weight_table(self) -> bool {
        !matches!(self, TableId::TripleWalsh | TableId::SinglyEvenWalsh)
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TheoryParams {
    pub p: u32,
    pub n: u32,
    pub s: u32,
    pub epsilon: i64,
    pub a: i64,
    pub t: Option<[u8; 4]>,
}

impl TheoryParams {
    pub fn binary(n: u32) -> TheoryParams {
        TheoryParams {
            p: 2,
            n,
            ..Default::default()
        }
    }

    pub fn with_t(mut self, t: TVector) -> TheoryParams {
        self.t = Some(t.0);
        self
    }

    pub fn odd(p: u32, n: u32) -> TheoryParams {
        TheoryParams {
            p,
            n,
            ..Default::default()
        }
    }

    pub fn plateaued(p: u32, n: u32, s: u32, epsilon: i64, a: i64) -> TheoryParams {
        TheoryParams {
            p,
            n,
            s,
            epsilon,
            a,
            t: None,
        }
    }

    fn m(&self) -> u32 {
        self.n / 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedDistribution {
    pub provenance: TableId,
    pub params: TheoryParams,
    /// (weight or Walsh value, multiplicity), merged and sorted, zero rows pruned.
    pub entries: Vec<(i64, i64)>,
}

impl PredictedDistribution {
    pub fn total(&self) -> i64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn nonzero_weights(&self) -> usize {
        self.entries.iter().filter(|e| e.0 != 0).count()
    }

    pub fn min_nonzero(&self) -> Option<i64> {
        self.entries.iter().map(|e| e.0).filter(|&w| w != 0).min()
    }
}

fn out_of_domain(msg: impl Into<String>) -> Error {
    Error::RejectOutOfDomain(msg.into())
}

fn pow(b: i64, e: u32) -> i64 {
    b.pow(e)
}

fn exact_div(a: i64, b: i64, what: &str) -> Result<i64> {
    if a % b != 0 {
        return Err(out_of_domain(format!("{what} is not integral")));
    }
    Ok(a / b)
}

/// Codeword or β count the table must sum to.
pub fn expected_total(id: TableId, params: &TheoryParams) -> i64 {
    let (p, n) = (params.p as i64, params.n);
    match id {
        TableId::TripleAllOnes | TableId::TripleTailTwo => pow(2, n + 1),
        TableId::SinglyEven => pow(2, n - 1),
        TableId::FtOneModFour
        | TableId::FtThreeModFour
        | TableId::FaEven
        | TableId::FaOdd => pow(p, n + 1),
        TableId::TripleWalsh => pow(2, n),
        TableId::SinglyEvenWalsh => pow(2, n - 2),
    }
}

fn check_binary_even(params: &TheoryParams, min_m: u32) -> Result<(i64, u32, u32)> {
    if params.p != 2 {
        return Err(out_of_domain("p must be 2"));
    }
    if !params.n.is_multiple_of(2) {
        return Err(out_of_domain("n must be even"));
    }
    if params.m() < min_m {
        return Err(out_of_domain(format!("m = n/2 must be at least {min_m}")));
    }
    Ok((2, params.n, params.m()))
}

fn triple_case(params: &TheoryParams) -> Result<u32> {
    let t = params.t.ok_or_else(|| out_of_domain("t-vector required"))?;
    let t = TVector(t);
    if t.0 == [1, 1, 1, 1] {
        Ok(1)
    } else if t.t1() == 1 && t.tail_weight() == 2 {
        Ok(2)
    } else {
        Err(out_of_domain(format!(
            "t-vector {:?} is neither (1,1,1,1) nor t1 = 1 with tail weight 2",
            t.0
        )))
    }
}

fn check_odd(params: &TheoryParams) -> Result<()> {
    if params.p == 2 || !is_prime(params.p) {
        return Err(out_of_domain("p must be an odd prime"));
    }
    if params.n == 0 {
        return Err(out_of_domain("n must be positive"));
    }
    Ok(())
}

fn check_plateaued(params: &TheoryParams, parity: u32) -> Result<()> {
    check_odd(params)?;
    let (n, s) = (params.n, params.s);
    if s == 0 || s >= n {
        return Err(out_of_domain("need 0 < s < n"));
    }
    if n - s <= 2 {
        return Err(out_of_domain("need n - s > 2"));
    }
    if (n + s) % 2 != parity {
        return Err(out_of_domain(if parity == 0 {
            "n + s must be even"
        } else {
            "n + s must be odd"
        }));
    }
    if params.epsilon.abs() != 1 {
        return Err(out_of_domain("epsilon must be 1 or -1"));
    }
    if params.a.rem_euclid(params.p as i64) == 0 {
        return Err(out_of_domain("a must be nonzero mod p"));
    }
    Ok(())
}

pub fn predict(id: TableId, params: &TheoryParams) -> Result<PredictedDistribution> {
    let mut rows: Vec<(i64, i64)> = Vec::new();
    match id {
        TableId::TripleAllOnes | TableId::TripleTailTwo | TableId::TripleWalsh => {
            let case = triple_case(params)?;
            let want = if id == TableId::TripleAllOnes {
                Some(1)
            } else if id == TableId::TripleTailTwo {
                Some(2)
            } else {
                None
            };
            if want.is_some_and(|c| c != case) {
                return Err(out_of_domain("t-vector does not match this table"));
            }
            let wt = TVector(params.t.unwrap()).weight();
            let (_, n, m) = check_binary_even(params, wt + 3)?;
            let walsh = triple_walsh_rows(n, m, case);
            if id == TableId::TripleWalsh {
                rows = walsh;
            } else {
                // wt = 2^{n−1} − W/2 for α = 1; α = 0 gives 0 once and 2^{n−1} otherwise.
                rows.push((0, 1));
                rows.push((pow(2, n - 1), pow(2, n) - 1));
                rows.extend(walsh.into_iter().map(|(w, k)| (pow(2, n - 1) - w / 2, k)));
            }
        }
        TableId::SinglyEven | TableId::SinglyEvenWalsh => {
            let (_, n, m) = check_binary_even(params, 3)?;
            let walsh = singly_even_walsh_rows(n, m);
            if id == TableId::SinglyEvenWalsh {
                rows = walsh;
            } else {
                rows.push((0, 1));
                rows.push((pow(2, n - 1), pow(2, n - 2) - 1));
                rows.extend(walsh.into_iter().map(|(w, k)| (pow(2, n - 1) - w / 2, k)));
            }
        }
        TableId::FtOneModFour | TableId::FtThreeModFour => {
            check_odd(params)?;
            let (p, n) = (params.p as i64, params.n);
            let q = pow(p, n);
            let r = q % 4;
            if id == TableId::FtOneModFour && r != 1 {
                return Err(out_of_domain("need p^n = 1 mod 4"));
            }
            if id == TableId::FtThreeModFour && r != 3 {
                return Err(out_of_domain("need p^n = 3 mod 4"));
            }
            rows.push((0, 1));
            rows.push((q, p - 1));
            let base = (p - 1) * pow(p, n - 1);
            if r == 1 {
                rows.push((base, pow(p, n + 1) - p));
            } else {
                let h = pow(p, (n - 1) / 2);
                rows.push((base, q - 1));
                rows.push((base - h, (p - 1) * (q - 1) / 2));
                rows.push((base + h, (p - 1) * (q - 1) / 2));
            }
        }
        TableId::FaEven => {
            check_plateaued(params, 0)?;
            let (p, n, s, eps) = (params.p as i64, params.n, params.s, params.epsilon);
            let m1 = eta0(params.p, -1);
            let e = eps * m1.pow((n + s) / 2);
            let e2 = eps * m1.pow(n + (n - s) / 2);
            let hs = pow(p, (n + s) / 2 - 1);
            let hd = pow(p, (n - s) / 2 - 1);
            let base = (p - 1) * pow(p, n - 1);
            rows.push((0, 1));
            rows.push((base, (p - 1) * (pow(p, n) - pow(p, n - s)) + pow(p, n) - 1));
            rows.push(((p - 2) * (pow(p, n - 1) - e * hs), p - 1));
            rows.push((
                base - e * (p - 2) * hs,
                (p - 1) * (2 * pow(p, n - s - 1) + e2 * (p - 2) * hd - 1),
            ));
            rows.push((
                base + 2 * e * hs,
                (p - 1) * (p - 2) * (pow(p, n - s - 1) - e2 * hd),
            ));
        }
        TableId::FaOdd => {
            check_plateaued(params, 1)?;
            let (p, n, s, eps) = (params.p as i64, params.n, params.s, params.epsilon);
            let m1 = eta0(params.p, -1);
            let ea = eta0(params.p, params.a);
            let ema = eta0(params.p, -params.a);
            let e1 = eps * m1.pow((n + s).div_ceil(2)) * pow(p, (n + s - 1) / 2);
            let e1p = eps * m1.pow(n + (n - s - 1) / 2) * pow(p, (n - s - 1) / 2);
            let base = (p - 1) * pow(p, n - 1);
            let d = pow(p, n - s - 1);
            let first = exact_div(
                (p - 1) * (p - 1) * d + (p - 1) * ea * (1 - m1) * e1p,
                2,
                "first multiplicity",
            )? + pow(p, n + 1)
                - (p - 1) * pow(p, n - s)
                - 1;
            let plus = exact_div(p - 3 + ea * (1 + m1), 4, "(p−3+η0(a)(1+η0(−1)))/4")?;
            let minus = exact_div(p - 3 - ea * (1 + m1), 4, "(p−3−η0(a)(1+η0(−1)))/4")?;
            rows.push((0, 1));
            rows.push((base, first));
            rows.push(((p - 2) * pow(p, n - 1) - e1 * ea, p - 1));
            rows.push((base - e1 * ea, (p - 1) * (d - 1)));
            rows.push((base - e1 * ema, (p - 1) * (d + e1p * ema)));
            rows.push((base + 2 * e1, (p - 1) * plus * (d - e1p)));
            rows.push((base - 2 * e1, (p - 1) * minus * (d + e1p)));
        }
    }
    finish(id, params, rows)
}

fn finish(
    id: TableId,
    params: &TheoryParams,
    rows: Vec<(i64, i64)>,
) -> Result<PredictedDistribution> {
    let mut merged: BTreeMap<i64, i64> = BTreeMap::new();
    for (w, k) in rows {
        if k < 0 {
            return Err(out_of_domain(format!("negative multiplicity {k} at {w}")));
        }
        *merged.entry(w).or_insert(0) += k;
    }
    let entries = merged.into_iter().filter(|e| e.1 != 0).collect();
    Ok(PredictedDistribution {
        provenance: id,
        params: *params,
        entries,
    })
}

/// Walsh values of the triple product, W(0) included, both sign branches expanded.
fn triple_walsh_rows(n: u32, m: u32, case: u32) -> Vec<(i64, i64)> {
    let unit = pow(2, m - 2);
    let mut rows = vec![(3 * pow(2, n - 2) - unit, 1)];
    let extra = pow(2, m) + 1;
    if case == 1 {
        let u = pow(2, n - 7) + pow(2, m - 7);
        for i in 0..2i64 {
            let sign = 1 - 2 * i;
            for (k, c) in [(1, 35), (3, 21), (5, 7), (7, 1)] {
                let corr = if k == 1 { i * extra } else { 0 };
                rows.push((sign * k * unit, c * u - corr));
            }
        }
    } else {
        let u = pow(2, n - 6) + pow(2, m - 6);
        rows.push((7 * unit, u));
        for i in 0..2i64 {
            let sign = 1 - 2 * i;
            rows.push((sign * unit, (16 + 3 * i) * u - i * extra));
            rows.push((sign * 3 * unit, (9 + 3 * i) * u));
            rows.push((sign * 5 * unit, (4 - i) * u));
        }
    }
    rows
}

/// Walsh values of the singly-even function over β ∈ V.
fn singly_even_walsh_rows(n: u32, m: u32) -> Vec<(i64, i64)> {
    let mut rows = vec![(pow(2, n - 1) - pow(2, m - 1) - 4, 1)];
    for i in 0..2i64 {
        let sign = 1 - 2 * i;
        rows.push((
            sign * pow(2, m - 1) - 4,
            3 * pow(2, n - 5) + (3 - 8 * i) * pow(2, m - 3) - i,
        ));
        rows.push((sign * 3 * pow(2, m - 1) - 4, pow(2, n - 5) + pow(2, m - 3)));
    }
    rows
}

/// Minimum distance stated for the f_a code with n + s odd.
pub fn fa_odd_min_distance(params: &TheoryParams) -> Result<i64> {
    check_plateaued(params, 1)?;
    let (p, n, s) = (params.p as i64, params.n, params.s);
    let x = eta0(params.p, params.a)
        * params.epsilon
        * eta0(params.p, -1).pow((n + s).div_ceil(2))
        * pow(p, (n + s - 1) / 2);
    Ok((p - 2) * pow(p, n - 1) - x)
}

/// Number of distinct nonzero weights expected for the f_a code with n + s odd.
pub fn fa_odd_weight_count(p: u32) -> usize {
    if p == 3 || p == 5 {
        4
    } else if p % 4 == 1 {
        5
    } else {
        6
    }
}

/// Counts of η0(c) + η0(c + a) over c ∈ F_p* \ {−a}: (2, 0 with c a square,
/// 0 with c a non-square, −2).
pub fn eta_pair_counts(p: u32, a: i64) -> [i64; 4] {
    let (pi, ea, m1) = (p as i64, eta0(p, a), eta0(p, -1));
    [
        (pi - 3 - ea * (1 + m1)) / 4,
        (pi - 1 + ea * (1 - m1)) / 4,
        (pi - 1 - ea * (1 - m1)) / 4,
        (pi - 3 + ea * (1 + m1)) / 4,
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub matches: bool,
    /// (value, predicted multiplicity, computed multiplicity) of the smallest
    /// differing value.
    pub first_mismatch: Option<(i64, i64, i64)>,
}

pub fn diff(predicted: &PredictedDistribution, computed: &[(i64, i64)]) -> DiffReport {
    let mut all: BTreeMap<i64, (i64, i64)> = BTreeMap::new();
    for &(w, k) in &predicted.entries {
        all.entry(w).or_default().0 += k;
    }
    for &(w, k) in computed {
        all.entry(w).or_default().1 += k;
    }
    let first_mismatch = all
        .into_iter()
        .find(|(_, (a, b))| a != b)
        .map(|(w, (a, b))| (w, a, b));
    DiffReport {
        matches: first_mismatch.is_none(),
        first_mismatch,
    }
}

/// Converts a computed weight table for [`diff`].
pub fn as_signed(entries: &[(u64, u64)]) -> Vec<(i64, i64)> {
    entries.iter().map(|&(w, k)| (w as i64, k as i64)).collect()
}
