//! Brute-force ground truth.
//!
//! Lattice points are enumerated in a box and filtered for conformal
//! minimality. A vector in the box is minimal there iff it is minimal in the
//! whole lattice (its conformal summands are no larger), so the only thing
//! to certify is that the box is big enough. That is done by doubling the
//! radius until every minimal element sits in the inner half.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::semigroup::{canonical_rep, Orthant, SemigroupInstance, Trade};

/// Maximum number of radius doublings before the oracle gives up.
pub const MAX_DOUBLINGS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SetMode {
    /// Both `v` and `-v` are listed.
    Full,
    /// One representative per `{v, -v}` pair.
    Canonical,
}

/// A deduplicated set of trades in ascending `(v2, v1, v0)` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeSet {
    trades: Vec<Trade>,
    mode: SetMode,
}

impl TradeSet {
    pub fn full<I: IntoIterator<Item = Trade>>(trades: I) -> Self {
        let mut trades: Vec<Trade> = trades.into_iter().collect();
        trades.sort_unstable();
        trades.dedup();
        TradeSet {
            trades,
            mode: SetMode::Full,
        }
    }

    /// Canonicalizes every element. Fails on the zero vector.
    pub fn canonical<I: IntoIterator<Item = Trade>>(trades: I) -> Result<Self> {
        let mut out = trades
            .into_iter()
            .map(|v| canonical_rep(&v))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(TradeSet {
            trades: out,
            mode: SetMode::Canonical,
        })
    }

    pub fn mode(&self) -> SetMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.trades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trades.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Trade> {
        self.trades.iter()
    }

    pub fn as_slice(&self) -> &[Trade] {
        &self.trades
    }

    pub fn contains(&self, v: &Trade) -> bool {
        self.trades.binary_search(v).is_ok()
    }

    /// Number of trades counting both signs.
    pub fn signed_len(&self) -> usize {
        match self.mode {
            SetMode::Full => self.len(),
            SetMode::Canonical => 2 * self.len(),
        }
    }

    /// Full-mode set containing every element and its negation.
    pub fn expanded(&self) -> TradeSet {
        TradeSet::full(self.trades.iter().flat_map(|&v| [v, -v]))
    }

    pub fn to_canonical(&self) -> Result<TradeSet> {
        TradeSet::canonical(self.trades.iter().copied())
    }
}

impl<'a> IntoIterator for &'a TradeSet {
    type Item = &'a Trade;
    type IntoIter = std::slice::Iter<'a, Trade>;

    fn into_iter(self) -> Self::IntoIter {
        self.trades.iter()
    }
}

/// `u` is conformally below `v`: same signs and no larger magnitudes.
pub fn is_conformal(u: &Trade, v: &Trade) -> bool {
    (0..3).all(|i| {
        let (x, y) = (u[i], v[i]);
        (x == 0 || (x > 0) == (y > 0)) && x.abs() <= y.abs()
    })
}

/// All nonzero trades of `inst` with every coordinate in `[-radius, radius]`.
pub fn enumerate_trades(inst: &SemigroupInstance, radius: i64) -> Result<TradeSet> {
    enumerate_trades_with(inst, radius, Execution::default())
}

pub fn enumerate_trades_with(
    inst: &SemigroupInstance,
    radius: i64,
    exec: Execution,
) -> Result<TradeSet> {
    Ok(TradeSet::full(box_points(inst, radius, exec)?))
}

/// Lattice points of the box in row-major `(v0, v2)` order.
fn box_points(inst: &SemigroupInstance, radius: i64, exec: Execution) -> Result<Vec<Trade>> {
    if radius < 1 {
        return Err(Error::InvalidInput(format!(
            "box radius must be positive, got {radius}"
        )));
    }
    let [n1, _, n3] = inst.generators().map(|x| x as i128);
    let t = inst.t() as i128;
    let c = radius as i128;
    // v2 must solve n3 * v2 = -n1 * v0 (mod t). With g = gcd(n3, t) the
    // solutions form one class modulo t / g whenever g divides the right side.
    let a = n3.mod_floor(&t);
    let g = a.gcd(&t);
    let modulus = t / g;
    let inverse = (a / g).extended_gcd(&modulus).x.mod_floor(&modulus);

    let rows: Vec<i64> = (-radius..=radius).collect();
    let points = exec.flat_map(&rows, |&v0| {
        let rhs = (-n1 * v0 as i128).mod_floor(&t);
        if rhs % g != 0 {
            return Vec::new();
        }
        let x0 = (rhs / g * inverse).mod_floor(&modulus);
        let mut v2 = -c + (x0 + c).mod_floor(&modulus);
        let mut row = Vec::new();
        while v2 <= c {
            let s = n1 * v0 as i128 + n3 * v2;
            debug_assert_eq!(s % t, 0);
            let v1 = -s / t;
            if v1.abs() <= c && (v0 != 0 || v1 != 0 || v2 != 0) {
                row.push(Trade::new(v0, v1 as i64, v2 as i64));
            }
            v2 += modulus;
        }
        row
    });
    Ok(points)
}

/// The conformally minimal elements of `cands`.
///
/// A proper conformal summand `u` of `v` satisfies
/// `|u|_1 <= |v|_1 - m` where `m` is the smallest candidate norm, so
/// candidates are processed in norm bands of width `m`: elements inside a
/// band are only compared with minimal elements of earlier bands.
fn minimal_elements(mut cands: Vec<Trade>, exec: Execution) -> Vec<Trade> {
    cands.sort_unstable_by_key(|v| (v.l1_norm(), *v));
    let Some(width) = cands.first().map(Trade::l1_norm) else {
        return Vec::new();
    };
    let mut minimal: Vec<Trade> = Vec::new();
    let mut start = 0;
    while start < cands.len() {
        let band_end = cands[start].l1_norm() + width;
        let end = start + cands[start..].partition_point(|v| v.l1_norm() < band_end);
        let band = &cands[start..end];
        let known = &minimal;
        let kept = exec.filter(band, |v| !known.iter().any(|u| is_conformal(u, v)));
        minimal.extend(kept);
        start = end;
    }
    minimal.sort_unstable();
    minimal
}

/// Minimal elements of the lattice points selected by `keep`, with the
/// box-radius certificate.
fn certified_minimal<F>(inst: &SemigroupInstance, keep: F, exec: Execution) -> Result<Vec<Trade>>
where
    F: Fn(&Trade) -> bool + Sync + Send,
{
    let n3 = inst.generators()[2];
    let mut radius = n3
        .checked_mul(2)
        .ok_or(Error::Overflow("oracle box radius"))?;
    for doubling in 1..=MAX_DOUBLINGS {
        let cands = exec.filter(&box_points(inst, radius, exec)?, &keep);
        let minimal = minimal_elements(cands, exec);
        if minimal.iter().all(|v| v.max_norm() <= radius / 2) {
            return Ok(minimal);
        }
        if doubling == 1 {
            log::warn!(
                "oracle box for {inst}: minimal elements exceed |v| <= n3, doubling the radius"
            );
        }
        radius = radius
            .checked_mul(2)
            .ok_or(Error::Overflow("oracle box radius"))?;
    }
    Err(Error::Consistency(format!(
        "oracle box for {inst} did not stabilise within {MAX_DOUBLINGS} doublings"
    )))
}

/// Graver basis of `inst`, one representative per sign pair.
pub fn graver_oracle(inst: &SemigroupInstance) -> Result<TradeSet> {
    graver_oracle_with(inst, Execution::default())
}

pub fn graver_oracle_with(inst: &SemigroupInstance, exec: Execution) -> Result<TradeSet> {
    graver_full(inst, exec)?.to_canonical()
}

fn graver_full(inst: &SemigroupInstance, exec: Execution) -> Result<TradeSet> {
    let minimal = certified_minimal(inst, |_| true, exec)?;
    if let Some(bad) = minimal.iter().find(|v| !inst.is_trade(v)) {
        return Err(Error::Consistency(format!(
            "{bad} is not a trade of {inst}"
        )));
    }
    let set = TradeSet::full(minimal);
    if set.iter().any(|v| !set.contains(&-*v)) {
        return Err(Error::Consistency(format!(
            "oracle Graver set of {inst} is not closed under negation"
        )));
    }
    Ok(set)
}

/// Hilbert basis of the lattice points of `inst` in `orthant`.
pub fn hilbert_oracle(inst: &SemigroupInstance, orthant: Orthant) -> Result<TradeSet> {
    hilbert_oracle_with(inst, orthant, Execution::default())
}

pub fn hilbert_oracle_with(
    inst: &SemigroupInstance,
    orthant: Orthant,
    exec: Execution,
) -> Result<TradeSet> {
    // Within one orthant the conformal order is the componentwise
    // magnitude order, so the same filter applies.
    let minimal = certified_minimal(inst, |v| orthant.contains(v), exec)?;
    Ok(TradeSet::full(minimal))
}

/// The three orthant Hilbert bases of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthantBases {
    pub pnp: TradeSet,
    pub ppn: TradeSet,
    pub npp: TradeSet,
}

impl OrthantBases {
    pub fn get(&self, orthant: Orthant) -> &TradeSet {
        match orthant {
            Orthant::Pnp => &self.pnp,
            Orthant::Ppn => &self.ppn,
            Orthant::Npp => &self.npp,
        }
    }

    pub fn counts(&self) -> [usize; 3] {
        [self.pnp.len(), self.ppn.len(), self.npp.len()]
    }
}

/// All three orthant Hilbert bases from a single Graver enumeration.
pub fn oracle_bases(inst: &SemigroupInstance, exec: Execution) -> Result<OrthantBases> {
    let full = graver_full(inst, exec)?;
    let part = |o: Orthant| TradeSet::full(full.iter().copied().filter(|v| o.contains(v)));
    Ok(OrthantBases {
        pnp: part(Orthant::Pnp),
        ppn: part(Orthant::Ppn),
        npp: part(Orthant::Npp),
    })
}

/// Every factorization `(z0, z1, z2) >= 0` of `n`, in lexicographic order.
pub fn factorizations(inst: &SemigroupInstance, n: i64) -> Result<Vec<[i64; 3]>> {
    if n < 0 {
        return Err(Error::InvalidInput(format!(
            "cannot factor a negative element {n}"
        )));
    }
    let [n1, n2, n3] = inst.generators();
    let mut out = Vec::new();
    for z0 in 0..=n / n1 {
        let rest = n - z0 * n1;
        for z1 in 0..=rest / n2 {
            let last = rest - z1 * n2;
            if last % n3 == 0 {
                out.push([z0, z1, last / n3]);
            }
        }
    }
    Ok(out)
}
