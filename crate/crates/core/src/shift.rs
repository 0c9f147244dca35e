//! Periodic transport of orthant Hilbert bases from `t` to `t + rho`.
//!
//! Past the bound `B`, every Hilbert basis element lies either in one of the
//! two strips along the coordinate planes bounding its orthant, or (ppn and
//! npp only) on a segment of trades of length `d` resp. `-d` stepping by `h`.
//! Strip elements move by the length-preserving maps `phi_{i,j}`; the segment
//! is re-seeded from its transported endpoints and grows by `d*a` resp.
//! `d*b` per period.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::oracle::{hilbert_oracle_with, oracle_bases, OrthantBases, TradeSet};
use crate::semigroup::{Orthant, SemigroupInstance, ShiftedFamily, Strip, Trade};

/// Per-period correction coefficient of `phi_{i,j}`: `rho / (d (r_j - r_i))`.
fn phi_coefficient(fam: &ShiftedFamily, i: usize, j: usize) -> Result<i64> {
    if i == j || i > 2 || j > 2 {
        return Err(Error::InvalidInput(format!(
            "shift map needs distinct indices in 0..3, got ({i}, {j})"
        )));
    }
    let r = fam.offsets();
    let den = fam.d() * (r[j] - r[i]);
    let (q, rem) = fam.rho().div_rem(&den);
    debug_assert_eq!(rem, 0);
    Ok(q)
}

/// `v + k * rho * ell(v) * (e_i - e_j) / (d (r_j - r_i))`, i.e. `k` periods of
/// `phi_{i,j}`. Negative `k` applies the inverse.
pub fn phi(fam: &ShiftedFamily, i: usize, j: usize, v: &Trade, k: i64) -> Result<Trade> {
    let c = phi_coefficient(fam, i, j)?;
    let delta = c
        .checked_mul(v.ell())
        .and_then(|x| x.checked_mul(k))
        .ok_or(Error::Overflow("shift map correction"))?;
    let mut out = v.0;
    out[i] = out[i]
        .checked_add(delta)
        .ok_or(Error::Overflow("shift map"))?;
    out[j] = out[j]
        .checked_sub(delta)
        .ok_or(Error::Overflow("shift map"))?;
    Ok(Trade(out))
}

/// Inverse of [`phi`] with the same arguments.
pub fn phi_inverse(fam: &ShiftedFamily, i: usize, j: usize, v: &Trade, k: i64) -> Result<Trade> {
    phi(
        fam,
        i,
        j,
        v,
        k.checked_neg().ok_or(Error::Overflow("shift map"))?,
    )
}

fn apply_strip_map(fam: &ShiftedFamily, strip: Strip, v: &Trade, k: i64) -> Result<Trade> {
    let (i, j) = strip.shift_map();
    phi(fam, i, j, v, k)
}

/// Trades `start, start + step, ..., end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start: Trade,
    pub end: Trade,
    pub step: Trade,
    pub count: i64,
}

impl Segment {
    /// Fails unless `end - start` is a non-negative multiple of `step`.
    pub fn between(start: Trade, end: Trade, step: Trade) -> Result<Segment> {
        let diff = end
            .checked_sub(&start)
            .ok_or(Error::Overflow("segment endpoints"))?;
        match diff.multiple_of(&step) {
            Some(k) if k >= 0 => Ok(Segment { start, end, step, count: k + 1 }),
            _ => Err(Error::Consistency(format!(
                "segment endpoints {start} and {end} do not differ by a non-negative multiple of {step}"
            ))),
        }
    }

    pub fn trades(&self) -> impl Iterator<Item = Trade> + '_ {
        (0..self.count).map(move |j| self.start + Trade(self.step.0.map(|x| x * j)))
    }

    pub fn contains(&self, v: &Trade) -> bool {
        v.checked_sub(&self.start)
            .and_then(|d| d.multiple_of(&self.step))
            .is_some_and(|k| (0..self.count).contains(&k))
    }
}

/// `x` in `[0, m)` with `coef * x = rhs (mod m)`, for `gcd(coef, m) = 1`.
fn solve_congruence(coef: i64, rhs: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let (coef, rhs, m) = (coef as i128, rhs as i128, m as i128);
    let ext = coef.mod_floor(&m).extended_gcd(&m);
    debug_assert_eq!(ext.gcd, 1);
    (rhs.mod_floor(&m) * ext.x.mod_floor(&m)).mod_floor(&m) as i64
}

fn check_extremal(
    inst: &SemigroupInstance,
    v: &Trade,
    orthant: Orthant,
    length: i64,
) -> Result<()> {
    if inst.is_trade(v) && orthant.contains(v) && v.ell() == length {
        Ok(())
    } else {
        Err(Error::Consistency(format!(
            "{v} is not a length-{length} trade of {inst} in the {orthant} orthant"
        )))
    }
}

/// The full segment of length-`d` trades in the ppn orthant, from the one
/// with smallest first coordinate to the one with smallest second
/// coordinate, or `None` when no such trade exists.
pub fn length_d_segment(inst: &SemigroupInstance) -> Result<Option<Segment>> {
    let f = inst.family();
    let (a, b, d) = (f.a(), f.b(), f.d());
    let n = inst.t() + d * b;
    // b v1 + (a+b) v0 = t + db, with the trade (v0, v1, -(v0 + v1 - d)).
    let build = |v0: i64, v1: i64| {
        (v0 >= 0 && v1 >= 0 && v0 + v1 >= d).then(|| Trade::new(v0, v1, d - v0 - v1))
    };
    let v0 = solve_congruence(a + b, n, b);
    let alpha = build(v0, (n - (a + b) * v0) / b);
    let v1 = solve_congruence(b, n, a + b);
    let beta = build((n - b * v1) / (a + b), v1);
    match (alpha, beta) {
        (None, None) => Ok(None),
        (Some(alpha), Some(beta)) => {
            check_extremal(inst, &alpha, Orthant::Ppn, d)?;
            check_extremal(inst, &beta, Orthant::Ppn, d)?;
            Segment::between(alpha, beta, f.h()).map(Some)
        }
        _ => Err(Error::Consistency(format!(
            "only one extremal length-{d} trade of {inst} exists in the ppn orthant"
        ))),
    }
}

/// The full segment of length-`-d` trades in the npp orthant, from the one
/// with smallest last coordinate to the one with smallest middle
/// coordinate, or `None` when no such trade exists.
pub fn length_minus_d_segment(inst: &SemigroupInstance) -> Result<Option<Segment>> {
    let f = inst.family();
    let (a, b, d) = (f.a(), f.b(), f.d());
    let n = inst.t() - d * a;
    // a v1 + (a+b) v2 = t - da, with the trade (-(v1 + v2 + d), v1, v2).
    let build = |v1: i64, v2: i64| (v1 >= 0 && v2 >= 0).then(|| Trade::new(-(v1 + v2 + d), v1, v2));
    let v2 = solve_congruence(a + b, n, a);
    let xi = build((n - (a + b) * v2) / a, v2);
    let v1 = solve_congruence(a, n, a + b);
    let omega = build(v1, (n - a * v1) / (a + b));
    match (xi, omega) {
        (None, None) => Ok(None),
        (Some(xi), Some(omega)) => {
            check_extremal(inst, &xi, Orthant::Npp, -d)?;
            check_extremal(inst, &omega, Orthant::Npp, -d)?;
            Segment::between(xi, omega, f.h()).map(Some)
        }
        _ => Err(Error::Consistency(format!(
            "only one extremal length-{} trade of {inst} exists in the npp orthant",
            -d
        ))),
    }
}

/// Endpoints `alpha` (start) and `beta` (end) of the length-`d` segment in
/// the ppn orthant. Requires `t > B+`.
pub fn alpha_beta(inst: &SemigroupInstance) -> Result<Segment> {
    let bound = inst.constants().b_plus;
    let missing = || Error::NoExtremalTrade {
        orthant: "ppn",
        length: inst.family().d(),
        t: inst.t(),
        bound,
    };
    if inst.t() <= bound {
        return Err(missing());
    }
    length_d_segment(inst)?.ok_or_else(|| {
        Error::Consistency(format!(
            "no length-d ppn trade of {inst} although t > B+ = {bound}"
        ))
    })
}

/// Endpoints `xi` (start) and `omega` (end) of the length-`-d` segment in
/// the npp orthant. Requires `t > B-`.
pub fn xi_omega(inst: &SemigroupInstance) -> Result<Segment> {
    let bound = inst.constants().b_minus;
    if inst.t() <= bound {
        return Err(Error::NoExtremalTrade {
            orthant: "npp",
            length: -inst.family().d(),
            t: inst.t(),
            bound,
        });
    }
    length_minus_d_segment(inst)?.ok_or_else(|| {
        Error::Consistency(format!(
            "no length-(-d) npp trade of {inst} although t > B- = {bound}"
        ))
    })
}

/// The segment of an orthant together with the strip maps seeding its
/// transported endpoints.
struct SegmentRule {
    segment: Segment,
    start_map: Strip,
    end_map: Strip,
}

fn orthant_bound(inst: &SemigroupInstance, orthant: Orthant) -> i64 {
    let c = inst.constants();
    match orthant {
        Orthant::Pnp => c.b_plus_minus,
        Orthant::Ppn => c.b_plus,
        Orthant::Npp => c.b_minus,
    }
}

fn segment_rule(inst: &SemigroupInstance, orthant: Orthant) -> Result<Option<SegmentRule>> {
    Ok(match orthant {
        Orthant::Pnp => None,
        Orthant::Ppn => Some(SegmentRule {
            segment: alpha_beta(inst)?,
            start_map: Strip::PpnV0,
            end_map: Strip::PpnV1,
        }),
        Orthant::Npp => Some(SegmentRule {
            segment: xi_omega(inst)?,
            start_map: Strip::NppV2,
            end_map: Strip::NppV1,
        }),
    })
}

impl SegmentRule {
    /// The segment at `t + rho`, seeded by the transported endpoints.
    fn transported(&self, fam: &ShiftedFamily) -> Result<Segment> {
        let start = apply_strip_map(fam, self.start_map, &self.segment.start, 1)?;
        let end = apply_strip_map(fam, self.end_map, &self.segment.end, 1)?;
        let next = Segment::between(start, end, fam.h())?;
        let growth = match self.start_map.orthant() {
            Orthant::Ppn => fam.d() * fam.a(),
            _ => fam.d() * fam.b(),
        };
        if next.count != self.segment.count + growth {
            return Err(Error::Consistency(format!(
                "transported segment has {} trades, expected {} + {growth}",
                next.count, self.segment.count
            )));
        }
        Ok(next)
    }
}

fn require_transportable(inst: &SemigroupInstance, orthant: Orthant) -> Result<()> {
    let bound = orthant_bound(inst, orthant);
    if inst.t() <= bound {
        return Err(Error::OutsideScope(format!(
            "transport of the {orthant} basis needs t > {bound}, got t = {}",
            inst.t()
        )));
    }
    Ok(())
}

/// Images of the strip elements of `basis` under one period of their strip
/// maps. Elements outside both strips must lie on the orthant's segment.
fn transport_strips(
    inst: &SemigroupInstance,
    orthant: Orthant,
    basis: &[Trade],
    rule: Option<&SegmentRule>,
) -> Result<Vec<Trade>> {
    let fam = inst.family();
    let mut out = Vec::with_capacity(basis.len() + 1);
    for v in basis {
        if !orthant.contains(v) {
            return Err(Error::InvalidInput(format!(
                "{v} is not in the {orthant} orthant"
            )));
        }
        let strips: Vec<Strip> = orthant
            .strips()
            .into_iter()
            .filter(|s| s.holds(fam, v))
            .collect();
        match (orthant, strips.as_slice()) {
            (_, []) => {
                if !rule.is_some_and(|r| r.segment.contains(v)) {
                    return Err(Error::Consistency(format!(
                        "{v} in the {orthant} basis of {inst} lies outside both strips"
                    )));
                }
            }
            // The two pnp maps agree where the strips meet (only on h).
            (Orthant::Pnp, [first, ..]) => out.push(apply_strip_map(fam, *first, v, 1)?),
            (_, strips) => {
                for s in strips {
                    out.push(apply_strip_map(fam, *s, v, 1)?);
                }
            }
        }
    }
    Ok(out)
}

fn shift_orthant(inst: &SemigroupInstance, orthant: Orthant, basis: &TradeSet) -> Result<TradeSet> {
    require_transportable(inst, orthant)?;
    let fam = inst.family();
    let rule = segment_rule(inst, orthant)?;
    let mut out = transport_strips(inst, orthant, basis.as_slice(), rule.as_ref())?;
    if let Some(rule) = &rule {
        out.extend(rule.transported(fam)?.trades());
    }
    Ok(TradeSet::full(out))
}

/// Transports the pnp Hilbert basis of `inst` to `t + rho`.
pub fn shift_pnp(inst: &SemigroupInstance, basis: &TradeSet) -> Result<TradeSet> {
    let out = shift_orthant(inst, Orthant::Pnp, basis)?;
    if out.len() != basis.len() {
        return Err(Error::Consistency(format!(
            "pnp transport of {inst} changed the basis size from {} to {}",
            basis.len(),
            out.len()
        )));
    }
    Ok(out)
}

/// Transports the ppn Hilbert basis of `inst` to `t + rho`.
pub fn shift_ppn(inst: &SemigroupInstance, basis: &TradeSet) -> Result<TradeSet> {
    shift_orthant(inst, Orthant::Ppn, basis)
}

/// Transports the npp Hilbert basis of `inst` to `t + rho`.
pub fn shift_npp(inst: &SemigroupInstance, basis: &TradeSet) -> Result<TradeSet> {
    shift_orthant(inst, Orthant::Npp, basis)
}

pub fn shift_basis(
    inst: &SemigroupInstance,
    orthant: Orthant,
    basis: &TradeSet,
) -> Result<TradeSet> {
    match orthant {
        Orthant::Pnp => shift_pnp(inst, basis),
        Orthant::Ppn => shift_ppn(inst, basis),
        Orthant::Npp => shift_npp(inst, basis),
    }
}

/// Compact transport state for one orthant: only the strip elements are
/// stored, the segment is rebuilt from the instance on demand.
struct CompactBasis {
    orthant: Orthant,
    strips: Vec<Trade>,
}

impl CompactBasis {
    fn from_basis(inst: &SemigroupInstance, orthant: Orthant, basis: &TradeSet) -> Result<Self> {
        let fam = inst.family();
        let rule = segment_rule(inst, orthant)?;
        let mut strips = Vec::new();
        for v in basis {
            if orthant.strips().iter().any(|s| s.holds(fam, v)) {
                strips.push(*v);
            } else if !rule.as_ref().is_some_and(|r| r.segment.contains(v)) {
                return Err(Error::Consistency(format!(
                    "{v} in the {orthant} basis of {inst} lies outside both strips"
                )));
            }
        }
        Ok(CompactBasis { orthant, strips })
    }

    /// One period forward from `inst`.
    fn step(&mut self, inst: &SemigroupInstance) -> Result<()> {
        let rule = segment_rule(inst, self.orthant)?;
        if let Some(rule) = &rule {
            for end in [rule.segment.start, rule.segment.end] {
                if self.strips.binary_search(&end).is_err() {
                    return Err(Error::Consistency(format!(
                        "segment endpoint {end} of {inst} is missing from the {} strips",
                        self.orthant
                    )));
                }
            }
            rule.transported(inst.family())?;
        }
        let mut next = transport_strips(inst, self.orthant, &self.strips, rule.as_ref())?;
        next.sort_unstable();
        next.dedup();
        self.strips = next;
        Ok(())
    }

    fn materialize(&self, inst: &SemigroupInstance) -> Result<TradeSet> {
        let rule = segment_rule(inst, self.orthant)?;
        let segment = rule.iter().flat_map(|r| r.segment.trades());
        Ok(TradeSet::full(self.strips.iter().copied().chain(segment)))
    }
}

/// Decomposition `t = t0 + k*rho` with `t0` in `(B, B + rho]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasePlan {
    pub t0: i64,
    pub k: i64,
}

/// `None` when `t <= B`, where the oracle is used directly.
pub fn base_plan(inst: &SemigroupInstance) -> Option<BasePlan> {
    let fam = inst.family();
    let bound = fam.bounds().max;
    if inst.t() <= bound {
        return None;
    }
    // B >= dab >= da, so the base shift is itself a family member.
    debug_assert!(bound >= fam.d() * fam.a());
    let k = (inst.t() - bound - 1) / fam.rho();
    Some(BasePlan {
        t0: inst.t() - k * fam.rho(),
        k,
    })
}

/// The three Hilbert bases of `inst`, transported from the base shift when
/// `t > B` and computed by the oracle otherwise.
pub fn fast_bases(inst: &SemigroupInstance) -> Result<OrthantBases> {
    fast_bases_with(inst, Execution::default())
}

pub fn fast_bases_with(inst: &SemigroupInstance, exec: Execution) -> Result<OrthantBases> {
    let Some(plan) = base_plan(inst) else {
        return oracle_bases(inst, exec);
    };
    let base = inst.family().instance(plan.t0)?;
    let per_orthant = exec.map(&Orthant::ALL, |&o| -> Result<TradeSet> {
        let basis = hilbert_oracle_with(&base, o, Execution::Sequential)?;
        let mut compact = CompactBasis::from_basis(&base, o, &basis)?;
        for step in 0..plan.k {
            compact.step(&base.shifted(step)?)?;
        }
        compact.materialize(inst)
    });
    let mut it = per_orthant.into_iter();
    let mut next = || it.next().expect("three orthants");
    Ok(OrthantBases {
        pnp: next()?,
        ppn: next()?,
        npp: next()?,
    })
}

/// Union of three orthant Hilbert bases and their negations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assembly {
    pub graver: TradeSet,
    /// Number of basis elements shared (up to sign) between two orthants.
    pub overlap: usize,
    pub warning: Option<String>,
}

pub fn assemble_graver(pnp: &TradeSet, ppn: &TradeSet, npp: &TradeSet) -> Result<Assembly> {
    if pnp.is_empty() || ppn.is_empty() || npp.is_empty() {
        return Err(Error::InvalidInput(
            "orthant Hilbert bases are never empty".into(),
        ));
    }
    let all = pnp.iter().chain(ppn).chain(npp).copied();
    let graver = TradeSet::canonical(all)?;
    let overlap = pnp.len() + ppn.len() + npp.len() - graver.len();
    let warning = (overlap != 3).then(|| {
        let msg = format!("orthant bases share {overlap} trades up to sign, expected 3");
        log::warn!("{msg}");
        msg
    });
    Ok(Assembly {
        graver,
        overlap,
        warning,
    })
}

/// Graver basis of `inst` by periodic transport from the base shift.
pub fn graver_fast(inst: &SemigroupInstance) -> Result<TradeSet> {
    graver_fast_with(inst, Execution::default())
}

pub fn graver_fast_with(inst: &SemigroupInstance, exec: Execution) -> Result<TradeSet> {
    let bases = fast_bases_with(inst, exec)?;
    Ok(assemble_graver(&bases.pnp, &bases.ppn, &bases.npp)?.graver)
}

/// Frobenius number `mn - m - n` of `<m, n>`; `-1` when a generator is 1.
pub fn frobenius_two_gen(m: i64, n: i64) -> Result<i64> {
    if m < 1 || n < 1 {
        return Err(Error::InvalidInput(format!(
            "generators must be positive, got {m}, {n}"
        )));
    }
    if m.gcd(&n) != 1 {
        return Err(Error::InvalidInput(format!("gcd({m}, {n}) must be 1")));
    }
    if m == 1 || n == 1 {
        return Ok(-1);
    }
    m.checked_mul(n)
        .map(|p| p - m - n)
        .ok_or(Error::Overflow("Frobenius number"))
}
