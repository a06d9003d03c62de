//! Split bundles on Pⁿ, Chern classes in ℤ[h]/(h^{n+1}), line bundle
//! cohomology and long exact sequence chasing, and the weighted Tango
//! bundles `F_{α,γ}` built from
//!
//! ```text
//! 0 → O(-γ) → Sⁿ𝒰 → Q_{α,γ} → 0,          𝒰 = O(-α) ⊕ O(α)
//! 0 → Q_{α,γ}(-γ) → 𝒱 → F_{α,γ}(γ) → 0,    𝒱 = S^{2(n-1)}𝒰
//! ```

use itertools::Itertools;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("a split bundle needs at least one summand")]
    Empty,
    #[error("ambient mismatch: P^{left} vs P^{right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("wedge power {q} exceeds rank {rank}")]
    WedgeExceedsRank { q: usize, rank: usize },
    #[error("nonzero c_{index} beyond rank {rank}")]
    ChernBeyondRank { index: usize, rank: usize },
    #[error("Chern class c_{index} = {value} should vanish; the sequence model is inconsistent")]
    ModelInconsistent { index: usize, value: i128 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("inconsistent cohomology data: {0}")]
    InconsistentChase(String),
    #[error("power {0} is too large")]
    PowerTooLarge(usize),
}

type Result<T> = std::result::Result<T, BundleError>;

/// Refuse symmetric/exterior powers with more summands than this.
pub const MAX_SUMMANDS: u64 = 2_000_000;

/// `a(a-1)…(a-k+1)/k!`, valid for negative `a` too.
pub fn binomial_poly(a: i128, k: usize) -> Result<i128> {
    let mut acc: i128 = 1;
    for i in 0..k as i128 {
        acc = acc
            .checked_mul(a - i)
            .ok_or(BundleError::Overflow("binomial"))?
            / (i + 1);
    }
    Ok(acc)
}

/// `O(t_1) ⊕ … ⊕ O(t_r)` on Pⁿ. Twists are kept sorted in descending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SplitBundle {
    pub n: usize,
    twists: Vec<i64>,
}

impl SplitBundle {
    pub fn new(n: usize, mut twists: Vec<i64>) -> Result<Self> {
        if twists.is_empty() {
            return Err(BundleError::Empty);
        }
        twists.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SplitBundle { n, twists })
    }

    pub fn line(n: usize, t: i64) -> Self {
        SplitBundle { n, twists: vec![t] }
    }

    pub fn trivial(n: usize, rank: usize) -> Result<Self> {
        SplitBundle::new(n, vec![0; rank])
    }

    /// `𝒰 = O(-α) ⊕ O(α)`.
    pub fn weighted_u(n: usize, alpha: i64) -> Self {
        SplitBundle::new(n, vec![alpha, -alpha]).expect("two summands")
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn twist(&self, t: i64) -> Self {
        SplitBundle {
            n: self.n,
            twists: self.twists.iter().map(|x| x + t).collect(),
        }
    }

    pub fn dual(&self) -> Self {
        SplitBundle::new(self.n, self.twists.iter().map(|x| -x).collect()).expect("nonempty")
    }

    pub fn direct_sum(&self, other: &SplitBundle) -> Result<Self> {
        self.same_ambient(other)?;
        let mut twists = self.twists.clone();
        twists.extend_from_slice(&other.twists);
        SplitBundle::new(self.n, twists)
    }

    pub fn tensor(&self, other: &SplitBundle) -> Result<Self> {
        self.same_ambient(other)?;
        let twists = self
            .twists
            .iter()
            .cartesian_product(&other.twists)
            .map(|(a, b)| a + b)
            .collect();
        SplitBundle::new(self.n, twists)
    }

    fn same_ambient(&self, other: &SplitBundle) -> Result<()> {
        if self.n != other.n {
            return Err(BundleError::AmbientMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

fn summand_count(n: u64, k: u64) -> u64 {
    crate::wedge::binomial(n, k)
}

/// `S^k B`: sums of `k` twists chosen with repetition.
pub fn sym_power(b: &SplitBundle, k: usize) -> Result<SplitBundle> {
    let r = b.rank() as u64;
    if summand_count(r + k as u64 - 1, k as u64) > MAX_SUMMANDS {
        return Err(BundleError::PowerTooLarge(k));
    }
    let twists = b
        .twists
        .iter()
        .combinations_with_replacement(k)
        .map(|c| c.into_iter().sum())
        .collect();
    SplitBundle::new(b.n, twists)
}

/// `∧^q B`: sums of `q` distinct summands.
pub fn wedge_power(b: &SplitBundle, q: usize) -> Result<SplitBundle> {
    if q > b.rank() {
        return Err(BundleError::WedgeExceedsRank { q, rank: b.rank() });
    }
    if summand_count(b.rank() as u64, q as u64) > MAX_SUMMANDS {
        return Err(BundleError::PowerTooLarge(q));
    }
    let twists = b
        .twists
        .iter()
        .combinations(q)
        .map(|c| c.into_iter().sum())
        .collect();
    SplitBundle::new(b.n, twists)
}

/// Largest `t` with `O(t)` a summand.
pub fn max_embedding_twist(b: &SplitBundle) -> i64 {
    b.twists[0]
}

// ---------------------------------------------------------------------------
// Chern classes

/// Total Chern class `1 + c_1 h + … + c_n h^n` in ℤ[h]/(h^{n+1}).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChernPoly {
    pub n: usize,
    pub coeffs: Vec<i128>,
}

impl ChernPoly {
    pub fn one(n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = 1;
        ChernPoly { n, coeffs }
    }

    pub fn from_coeffs(n: usize, mut coeffs: Vec<i128>) -> Self {
        coeffs.resize(n + 1, 0);
        assert_eq!(coeffs[0], 1, "c_0 must be 1");
        ChernPoly { n, coeffs }
    }

    pub fn c(&self, i: usize) -> i128 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &ChernPoly) -> Result<ChernPoly> {
        let n = self.n;
        let mut out = vec![0i128; n + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                let term = a.checked_mul(b).ok_or(BundleError::Overflow("chern product"))?;
                out[i + j] = out[i + j]
                    .checked_add(term)
                    .ok_or(BundleError::Overflow("chern product"))?;
            }
        }
        Ok(ChernPoly { n, coeffs: out })
    }

    /// Formal inverse; exists since `c_0 = 1`.
    pub fn inverse(&self) -> Result<ChernPoly> {
        let n = self.n;
        let mut inv = vec![0i128; n + 1];
        inv[0] = 1;
        for k in 1..=n {
            let mut acc: i128 = 0;
            for i in 1..=k {
                let term = self.coeffs[i]
                    .checked_mul(inv[k - i])
                    .ok_or(BundleError::Overflow("chern inverse"))?;
                acc = acc
                    .checked_sub(term)
                    .ok_or(BundleError::Overflow("chern inverse"))?;
            }
            inv[k] = acc;
        }
        Ok(ChernPoly { n, coeffs: inv })
    }
}

pub fn chern_total(b: &SplitBundle) -> Result<ChernPoly> {
    let mut c = ChernPoly::one(b.n);
    for &t in b.twists() {
        let mut line = ChernPoly::one(b.n);
        if b.n >= 1 {
            line.coeffs[1] = t as i128;
        }
        c = c.mul(&line)?;
    }
    Ok(c)
}

/// `c(E ⊗ O(t)) = Σ_i c_i(E) h^i (1 + t h)^{r-i}` for `E` of rank `r`.
pub fn chern_twist(c: &ChernPoly, rank: usize, t: i64) -> Result<ChernPoly> {
    let n = c.n;
    let mut out = vec![0i128; n + 1];
    for (i, &ci) in c.coeffs.iter().enumerate() {
        if ci == 0 {
            continue;
        }
        if i > rank {
            return Err(BundleError::ChernBeyondRank { index: i, rank });
        }
        let e = rank - i;
        let mut t_pow: i128 = 1;
        for l in 0..=e.min(n - i) {
            let coef = binomial_poly(e as i128, l)?
                .checked_mul(t_pow)
                .and_then(|x| x.checked_mul(ci))
                .ok_or(BundleError::Overflow("chern twist"))?;
            out[i + l] = out[i + l]
                .checked_add(coef)
                .ok_or(BundleError::Overflow("chern twist"))?;
            t_pow = t_pow
                .checked_mul(t as i128)
                .ok_or(BundleError::Overflow("chern twist"))?;
        }
    }
    Ok(ChernPoly { n, coeffs: out })
}

/// `a / b` in ℤ[h]/(h^{n+1}).
pub fn chern_div(a: &ChernPoly, b: &ChernPoly) -> Result<ChernPoly> {
    a.mul(&b.inverse()?)
}

pub fn validate_weights(n: usize, alpha: i64, gamma: i64) -> Result<()> {
    if alpha < 0 {
        return Err(BundleError::InvalidWeights(format!(
            "alpha >= 0 required, got alpha = {alpha}"
        )));
    }
    if gamma <= n as i64 * alpha {
        return Err(BundleError::InvalidWeights(format!(
            "gamma > n*alpha required, got gamma = {gamma}, n*alpha = {}",
            n as i64 * alpha
        )));
    }
    Ok(())
}

fn validate_tango(n: usize, alpha: i64, gamma: i64) -> Result<()> {
    if n < 2 {
        return Err(BundleError::InvalidWeights(format!(
            "n >= 2 required for weighted Tango bundles, got n = {n}"
        )));
    }
    validate_weights(n, alpha, gamma)
}

/// `Sⁿ𝒰 = ⊕_k O((n-2k)α)`.
pub fn sym_n_u(n: usize, alpha: i64) -> SplitBundle {
    sym_power(&SplitBundle::weighted_u(n, alpha), n).expect("n+1 summands")
}

/// `𝒱 = S^{2(n-1)}𝒰 = ⊕_k O((2n-2-2k)α)`, rank `2n - 1`.
pub fn tango_v(n: usize, alpha: i64) -> SplitBundle {
    sym_power(&SplitBundle::weighted_u(n, alpha), 2 * (n - 1)).expect("2n-1 summands")
}

/// Intermediate Chern classes of the weighted Tango construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangoChern {
    /// `c(Q_{α,γ})`
    pub quotient: ChernPoly,
    /// `c(Q_{α,γ}(-γ))`
    pub quotient_twisted: ChernPoly,
    /// `c(F_{α,γ}(γ))`
    pub tango_twisted: ChernPoly,
    /// `c(F_{α,γ})`
    pub tango: ChernPoly,
}

pub fn weighted_tango_chern(n: usize, alpha: i64, gamma: i64) -> Result<TangoChern> {
    validate_tango(n, alpha, gamma)?;
    let quotient = chern_div(
        &chern_total(&sym_n_u(n, alpha))?,
        &chern_total(&SplitBundle::line(n, -gamma))?,
    )?;
    let quotient_twisted = chern_twist(&quotient, n, -gamma)?;
    let tango_twisted = chern_div(&chern_total(&tango_v(n, alpha))?, &quotient_twisted)?;
    let rank = n - 1;
    for q in n..=n {
        let value = tango_twisted.c(q);
        if value != 0 {
            return Err(BundleError::ModelInconsistent { index: q, value });
        }
    }
    let tango = chern_twist(&tango_twisted, rank, -gamma)?;
    if tango.c(1) != 0 {
        return Err(BundleError::ModelInconsistent {
            index: 1,
            value: tango.c(1),
        });
    }
    Ok(TangoChern {
        quotient,
        quotient_twisted,
        tango_twisted,
        tango,
    })
}

/// `(c_1, …, c_{n-1})` of `F_{α,γ}`.
pub fn chern_weighted_tango(n: usize, alpha: i64, gamma: i64) -> Result<Vec<i128>> {
    let data = weighted_tango_chern(n, alpha, gamma)?;
    Ok(data.tango.coeffs[1..n].to_vec())
}

// ---------------------------------------------------------------------------
// Cohomology

/// A cohomology dimension, either forced or known only up to an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CohEntry {
    Exact(i128),
    Interval { lo: i128, hi: i128 },
}

impl CohEntry {
    fn from_bounds(lo: i128, hi: i128) -> CohEntry {
        if lo == hi {
            CohEntry::Exact(lo)
        } else {
            CohEntry::Interval { lo, hi }
        }
    }

    pub fn lo(&self) -> i128 {
        match *self {
            CohEntry::Exact(v) => v,
            CohEntry::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> i128 {
        match *self {
            CohEntry::Exact(v) => v,
            CohEntry::Interval { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<i128> {
        match *self {
            CohEntry::Exact(v) => Some(v),
            CohEntry::Interval { .. } => None,
        }
    }
}

impl std::fmt::Display for CohEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CohEntry::Exact(v) => write!(f, "{v}"),
            CohEntry::Interval { lo, hi } => write!(f, "[{lo},{hi}]"),
        }
    }
}

impl Serialize for CohEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            CohEntry::Exact(v) => s.serialize_i128(v),
            CohEntry::Interval { lo, hi } => [lo, hi].serialize(s),
        }
    }
}

/// `h^0, …, h^n` of a coherent sheaf on Pⁿ plus its Euler characteristic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohProfile {
    pub n: usize,
    pub h: Vec<CohEntry>,
    pub chi: i128,
}

impl CohProfile {
    pub fn zero(n: usize) -> Self {
        CohProfile {
            n,
            h: vec![CohEntry::Exact(0); n + 1],
            chi: 0,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.h.iter().all(|e| e.exact().is_some())
    }

    /// `Σ (-1)^i h^i` when all entries are exact.
    pub fn alternating_sum(&self) -> Option<i128> {
        self.h
            .iter()
            .enumerate()
            .map(|(i, e)| e.exact().map(|v| if i % 2 == 0 { v } else { -v }))
            .sum()
    }
}

pub fn line_cohomology(n: usize, t: i64) -> Result<CohProfile> {
    let mut h = vec![CohEntry::Exact(0); n + 1];
    let ni = n as i128;
    let t = t as i128;
    if t >= 0 {
        h[0] = CohEntry::Exact(binomial_poly(ni + t, n)?);
    }
    if t <= -ni - 1 {
        h[n] = CohEntry::Exact(binomial_poly(-t - 1, n)?);
    }
    Ok(CohProfile {
        n,
        h,
        chi: binomial_poly(ni + t, n)?,
    })
}

pub fn split_cohomology(b: &SplitBundle) -> Result<CohProfile> {
    let mut total = vec![0i128; b.n + 1];
    let mut chi: i128 = 0;
    for &t in b.twists() {
        let line = line_cohomology(b.n, t)?;
        for (slot, e) in total.iter_mut().zip(&line.h) {
            *slot = slot
                .checked_add(e.lo())
                .ok_or(BundleError::Overflow("cohomology"))?;
        }
        chi = chi
            .checked_add(line.chi)
            .ok_or(BundleError::Overflow("cohomology"))?;
    }
    Ok(CohProfile {
        n: b.n,
        h: total.into_iter().map(CohEntry::Exact).collect(),
        chi,
    })
}

const UNBOUNDED: i128 = i128::MAX / 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Range {
    lo: i128,
    hi: i128,
}

impl Range {
    fn intersect(&mut self, lo: i128, hi: i128) -> bool {
        let (nlo, nhi) = (self.lo.max(lo), self.hi.min(hi));
        let changed = (nlo, nhi) != (self.lo, self.hi);
        self.lo = nlo;
        self.hi = nhi;
        changed
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

/// Cohomology of the missing term of `0 → A → B → C → 0` from the other two.
///
/// Exactly one of `sub`, `mid`, `quot` must be `None`. The long exact
/// sequence `0 → H⁰A → H⁰B → H⁰C → H¹A → …` is treated as a chain of
/// dimensions `d_k = r_{k-1} + r_k`, where `r_k` is the rank of the k-th map.
/// Rank bounds are propagated along the chain until nothing changes, which
/// yields the exact range of every unknown dimension; the Euler
/// characteristic then tightens the ranges further. Entries whose range is a
/// single value are reported as exact, all others as intervals.
pub fn chase_sequence(
    sub: Option<&CohProfile>,
    mid: Option<&CohProfile>,
    quot: Option<&CohProfile>,
) -> Result<CohProfile> {
    let slots = [sub, mid, quot];
    let missing: Vec<usize> = (0..3).filter(|&i| slots[i].is_none()).collect();
    if missing.len() != 1 {
        return Err(BundleError::InconsistentChase(
            "exactly one term of the sequence must be unknown".into(),
        ));
    }
    let missing = missing[0];
    let known: Vec<&CohProfile> = slots.iter().flatten().copied().collect();
    let n = known[0].n;
    if known[1].n != n {
        return Err(BundleError::AmbientMismatch {
            left: n,
            right: known[1].n,
        });
    }
    for p in &known {
        if p.h.len() != n + 1 {
            return Err(BundleError::InconsistentChase(
                "profile length differs from n + 1".into(),
            ));
        }
    }

    let len = 3 * (n + 1);
    let mut dims: Vec<Range> = (0..len)
        .map(|k| {
            let (degree, slot) = (k / 3, k % 3);
            match slots[slot] {
                Some(p) => Range {
                    lo: p.h[degree].lo(),
                    hi: p.h[degree].hi(),
                },
                None => Range {
                    lo: 0,
                    hi: UNBOUNDED,
                },
            }
        })
        .collect();
    // ranks[k] is the rank of the map into position k; ranks[0] and ranks[len] are 0.
    let mut ranks: Vec<Range> = (0..=len)
        .map(|k| {
            if k == 0 || k == len {
                Range { lo: 0, hi: 0 }
            } else {
                Range {
                    lo: 0,
                    hi: UNBOUNDED,
                }
            }
        })
        .collect();

    let mut changed = true;
    while changed {
        changed = false;
        for k in 0..len {
            let d = dims[k];
            let (left, right) = (ranks[k], ranks[k + 1]);
            changed |= ranks[k + 1].intersect(d.lo - left.hi, d.hi.saturating_sub(left.lo));
            changed |= ranks[k].intersect(d.lo - right.hi, d.hi.saturating_sub(right.lo));
            let (left, right) = (ranks[k], ranks[k + 1]);
            changed |= dims[k].intersect(
                left.lo + right.lo,
                left.hi.saturating_add(right.hi).min(UNBOUNDED),
            );
            if dims[k].is_empty() || ranks[k].is_empty() || ranks[k + 1].is_empty() {
                return Err(BundleError::InconsistentChase(format!(
                    "no nonnegative solution at position {k} of the long exact sequence"
                )));
            }
        }
    }

    let chi = match missing {
        0 => known[0].chi - known[1].chi,
        1 => known[0].chi + known[1].chi,
        _ => known[1].chi - known[0].chi,
    };
    let mut bounds: Vec<Range> = (0..=n).map(|i| dims[3 * i + missing]).collect();
    tighten_with_chi(&mut bounds, chi)?;
    Ok(CohProfile {
        n,
        h: bounds
            .into_iter()
            .map(|r| CohEntry::from_bounds(r.lo, r.hi))
            .collect(),
        chi,
    })
}

fn tighten_with_chi(bounds: &mut [Range], chi: i128) -> Result<()> {
    let sign = |i: usize| if i % 2 == 0 { 1 } else { -1 };
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..bounds.len() {
            // range of Σ_{j≠i} (-1)^j h_j
            let (mut smin, mut smax) = (0i128, 0i128);
            for (j, r) in bounds.iter().enumerate() {
                if j == i {
                    continue;
                }
                if sign(j) > 0 {
                    smin += r.lo;
                    smax += r.hi;
                } else {
                    smin -= r.hi;
                    smax -= r.lo;
                }
            }
            let (lo, hi) = if sign(i) > 0 {
                (chi - smax, chi - smin)
            } else {
                (smin - chi, smax - chi)
            };
            changed |= bounds[i].intersect(lo, hi);
            if bounds[i].is_empty() {
                return Err(BundleError::InconsistentChase(format!(
                    "Euler characteristic {chi} is incompatible with h^{i}"
                )));
            }
        }
    }
    Ok(())
}

/// Cohomology of the cokernel `E` of a left resolution
/// `0 → R_0 → R_1 → … → R_k → E → 0` by split bundles.
pub fn resolution_cohomology(terms: &[SplitBundle]) -> Result<CohProfile> {
    let (first, rest) = terms.split_first().ok_or(BundleError::Empty)?;
    let mut current = split_cohomology(first)?;
    for term in rest {
        current = chase_sequence(Some(&current), Some(&split_cohomology(term)?), None)?;
    }
    Ok(current)
}

/// Chern class of the cokernel of a left resolution.
pub fn resolution_chern(terms: &[SplitBundle]) -> Result<ChernPoly> {
    let n = terms.first().ok_or(BundleError::Empty)?.n;
    let mut c = ChernPoly::one(n);
    for (k, term) in terms.iter().rev().enumerate() {
        let ct = chern_total(term)?;
        c = if k % 2 == 0 {
            c.mul(&ct)?
        } else {
            chern_div(&c, &ct)?
        };
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BundleKind {
    WeightedQuotient,
    WeightedTango,
}

/// `Q_{α,γ}` or `F_{α,γ}` through its minimal resolution. `resolution`
/// resolves the twist `E(shift)` of the bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolvedBundle {
    pub n: usize,
    pub alpha: i64,
    pub gamma: i64,
    pub kind: BundleKind,
    pub resolution: Vec<SplitBundle>,
    pub shift: i64,
}

impl ResolvedBundle {
    /// `0 → O(-γ) → Sⁿ𝒰 → Q_{α,γ} → 0`.
    pub fn weighted_quotient(n: usize, alpha: i64, gamma: i64) -> Result<Self> {
        validate_weights(n, alpha, gamma)?;
        Ok(ResolvedBundle {
            n,
            alpha,
            gamma,
            kind: BundleKind::WeightedQuotient,
            resolution: vec![SplitBundle::line(n, -gamma), sym_n_u(n, alpha)],
            shift: 0,
        })
    }

    /// `0 → O(-2γ) → Sⁿ𝒰(-γ) → 𝒱 → F_{α,γ}(γ) → 0`.
    pub fn weighted_tango(n: usize, alpha: i64, gamma: i64) -> Result<Self> {
        validate_tango(n, alpha, gamma)?;
        Ok(ResolvedBundle {
            n,
            alpha,
            gamma,
            kind: BundleKind::WeightedTango,
            resolution: vec![
                SplitBundle::line(n, -2 * gamma),
                sym_n_u(n, alpha).twist(-gamma),
                tango_v(n, alpha),
            ],
            shift: gamma,
        })
    }

    pub fn rank(&self) -> usize {
        let mut total: i64 = 0;
        for (k, term) in self.resolution.iter().rev().enumerate() {
            let r = term.rank() as i64;
            total += if k % 2 == 0 { r } else { -r };
        }
        total as usize
    }

    pub fn chern(&self) -> Result<ChernPoly> {
        chern_twist(&resolution_chern(&self.resolution)?, self.rank(), -self.shift)
    }

    /// Cohomology of `E(t)`.
    pub fn cohomology(&self, t: i64) -> Result<CohProfile> {
        let terms: Vec<SplitBundle> = self
            .resolution
            .iter()
            .map(|b| b.twist(t - self.shift))
            .collect();
        resolution_cohomology(&terms)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistWitness {
    pub q: usize,
    /// `q((2n-q-1)α - γ)`
    pub formula: i64,
    /// Maximal twist of `∧^q 𝒱 (-qγ)` computed from the split bundle.
    pub max_twist: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub n: usize,
    pub alpha: i64,
    pub gamma: i64,
    pub stable: bool,
    pub witnesses: Vec<TwistWitness>,
    /// `h⁰(F_{α,γ})` from chasing the resolution.
    pub h0: CohEntry,
}

impl StabilityReport {
    /// `gamma` compared with `2(n-1)alpha`.
    pub fn threshold(&self) -> i64 {
        2 * (self.n as i64 - 1) * self.alpha
    }
}

pub fn is_stable(n: usize, alpha: i64, gamma: i64) -> Result<StabilityReport> {
    validate_tango(n, alpha, gamma)?;
    let v = tango_v(n, alpha);
    let mut witnesses = Vec::new();
    for q in 1..=n.saturating_sub(2) {
        let qi = q as i64;
        let formula = qi * ((2 * n as i64 - qi - 1) * alpha - gamma);
        let max_twist = max_embedding_twist(&wedge_power(&v, q)?.twist(-qi * gamma));
        witnesses.push(TwistWitness {
            q,
            formula,
            max_twist,
        });
    }
    let h0 = ResolvedBundle::weighted_tango(n, alpha, gamma)?.cohomology(0)?.h[0];
    Ok(StabilityReport {
        n,
        alpha,
        gamma,
        stable: gamma > 2 * (n as i64 - 1) * alpha,
        witnesses,
        h0,
    })
}
