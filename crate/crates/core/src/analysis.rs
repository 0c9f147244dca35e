//! Count tables, period-law and bound scans, the fast-versus-oracle
//! differential suite, and Graver augmentation over factorizations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::oracle::{enumerate_trades_with, is_conformal, oracle_bases, OrthantBases, TradeSet};
use crate::semigroup::{Orthant, SemigroupInstance, ShiftedFamily, Trade};
use crate::shift::{assemble_graver, base_plan, fast_bases_with};

fn ser_ratio<S: Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_ratio<S: Serializer>(
    r: &Option<Ratio<i64>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_ratio(r, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// `shift` when at least one period of transport applies, else `oracle`.
    Auto,
    Oracle,
    Shift,
}

impl Method {
    /// The method that actually runs for `inst`. The shift route reduces to
    /// the oracle at or below the bound and on the base window itself.
    pub fn resolve(self, inst: &SemigroupInstance) -> Method {
        let transports = base_plan(inst).is_some_and(|p| p.k > 0);
        match self {
            Method::Auto | Method::Shift if transports => Method::Shift,
            _ => Method::Oracle,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Oracle => "oracle",
            Method::Shift => "shift",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "oracle" => Ok(Method::Oracle),
            "shift" | "fast" => Ok(Method::Shift),
            _ => Err(Error::InvalidInput(format!(
                "unknown method {s:?} (expected auto, oracle or shift)"
            ))),
        }
    }
}

/// Orthant Hilbert bases of `inst` by `method`, with the resolved method.
pub fn bases_by(
    inst: &SemigroupInstance,
    method: Method,
    exec: Execution,
) -> Result<(OrthantBases, Method)> {
    let resolved = method.resolve(inst);
    let bases = match resolved {
        Method::Shift => fast_bases_with(inst, exec)?,
        _ => oracle_bases(inst, exec)?,
    };
    Ok((bases, resolved))
}

/// Canonical Graver basis of `inst` by `method`, with the resolved method.
pub fn graver_by(
    inst: &SemigroupInstance,
    method: Method,
    exec: Execution,
) -> Result<(TradeSet, Method)> {
    let (bases, resolved) = bases_by(inst, method, exec)?;
    Ok((
        assemble_graver(&bases.pnp, &bases.ppn, &bases.npp)?.graver,
        resolved,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub t: i64,
    /// Graver basis size counting both signs.
    pub graver: usize,
    pub h_pnp: usize,
    pub h_ppn: usize,
    pub h_npp: usize,
    /// Orthant basis elements shared up to sign.
    pub overlap: usize,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub family: ShiftedFamily,
    pub rows: Vec<CountRow>,
}

/// Valid shifts of `fam` in `[lo, hi]`.
pub fn valid_shifts(fam: &ShiftedFamily, lo: i64, hi: i64) -> Vec<i64> {
    (lo.max(1)..=hi).filter(|&t| fam.is_valid_t(t)).collect()
}

pub fn count_row(inst: &SemigroupInstance, method: Method, exec: Execution) -> Result<CountRow> {
    let (bases, method) = bases_by(inst, method, exec)?;
    let asm = assemble_graver(&bases.pnp, &bases.ppn, &bases.npp)?;
    let [h_pnp, h_ppn, h_npp] = bases.counts();
    Ok(CountRow {
        t: inst.t(),
        graver: asm.graver.signed_len(),
        h_pnp,
        h_ppn,
        h_npp,
        overlap: asm.overlap,
        method,
    })
}

/// One row per valid `t` in `[lo, hi]`.
pub fn count_scan(
    fam: &ShiftedFamily,
    lo: i64,
    hi: i64,
    method: Method,
    exec: Execution,
) -> Result<CountTable> {
    if lo > hi {
        return Err(Error::InvalidInput(format!("empty t range {lo}..{hi}")));
    }
    let ts = valid_shifts(fam, lo, hi);
    let rows = exec
        .map(&ts, |&t| {
            count_row(&fam.instance(t)?, method, Execution::Sequential)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(CountTable { family: *fam, rows })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PeriodCheck {
    pub t: i64,
    pub graver_increment: i64,
    /// Increments of the pnp, ppn and npp bases.
    pub orthant_increments: [i64; 3],
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PeriodReport {
    pub family: ShiftedFamily,
    pub rho: i64,
    pub bound: i64,
    pub expected_increment: i64,
    pub expected_orthant_increments: [i64; 3],
    /// `expected_increment / rho`, which must equal `2 / (ab)`.
    #[serde(serialize_with = "ser_ratio")]
    pub leading_coefficient: Ratio<i64>,
    pub checks: Vec<PeriodCheck>,
    pub violations: Vec<i64>,
}

impl PeriodReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
            && self.leading_coefficient == Ratio::new(2, self.family.a() * self.family.b())
    }
}

/// Oracle counts at every valid `t > B` in `[lo, hi]` and at `t + rho`,
/// checked against the period increments.
pub fn verify_period_law(
    fam: &ShiftedFamily,
    lo: i64,
    hi: i64,
    exec: Execution,
) -> Result<PeriodReport> {
    let rho = fam.rho();
    let bound = fam.bounds().max;
    let starts = valid_shifts(fam, lo.max(bound + 1), hi);
    let mut needed: Vec<i64> = starts.iter().flat_map(|&t| [t, t + rho]).collect();
    needed.sort_unstable();
    needed.dedup();
    let rows = exec
        .map(&needed, |&t| {
            count_row(&fam.instance(t)?, Method::Oracle, Execution::Sequential)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let by_t: BTreeMap<i64, CountRow> = rows.into_iter().map(|r| (r.t, r)).collect();

    let expected = 2 * fam.d() * (fam.a() + fam.b());
    let expected_orthant = [0, fam.d() * fam.a(), fam.d() * fam.b()];
    let diff = |x: usize, y: usize| y as i64 - x as i64;
    let checks: Vec<PeriodCheck> = starts
        .iter()
        .map(|t| {
            let (r0, r1) = (&by_t[t], &by_t[&(t + rho)]);
            let graver_increment = diff(r0.graver, r1.graver);
            let orthant_increments = [
                diff(r0.h_pnp, r1.h_pnp),
                diff(r0.h_ppn, r1.h_ppn),
                diff(r0.h_npp, r1.h_npp),
            ];
            PeriodCheck {
                t: *t,
                graver_increment,
                orthant_increments,
                ok: graver_increment == expected && orthant_increments == expected_orthant,
            }
        })
        .collect();
    let violations = checks.iter().filter(|c| !c.ok).map(|c| c.t).collect();
    Ok(PeriodReport {
        family: *fam,
        rho,
        bound,
        expected_increment: expected,
        expected_orthant_increments: expected_orthant,
        leading_coefficient: Ratio::new(expected, rho),
        checks,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundsRow {
    pub t: i64,
    /// `h` is a pnp Hilbert basis element.
    pub h_irreducible: bool,
    /// A ppn trade of length `d` exists.
    pub ppn_length_d: bool,
    /// An npp trade of length `-d` exists.
    pub npp_length_minus_d: bool,
}

/// Empirical threshold of one property next to its formula value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Threshold {
    pub formula: i64,
    /// Largest scanned valid `t` where the property fails.
    pub last_failure: Option<i64>,
    /// No failure above the formula value, and a failure at the formula
    /// value whenever that value was scanned.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundsReport {
    pub family: ShiftedFamily,
    pub t_max: i64,
    pub rows: Vec<BoundsRow>,
    pub h_irreducible: Threshold,
    pub ppn_length_d: Threshold,
    pub npp_length_minus_d: Threshold,
    /// When `t = dab` is a valid shift: a conformal decomposition of `h` there.
    pub h_witness: Option<(Trade, Trade)>,
}

impl BoundsReport {
    pub fn consistent(&self) -> bool {
        self.h_irreducible.consistent
            && self.ppn_length_d.consistent
            && self.npp_length_minus_d.consistent
    }
}

fn threshold(rows: &[BoundsRow], formula: i64, holds: impl Fn(&BoundsRow) -> bool) -> Threshold {
    let last_failure = rows.iter().filter(|r| !holds(r)).map(|r| r.t).max();
    let scanned_formula = rows.iter().find(|r| r.t == formula);
    let consistent =
        last_failure.is_none_or(|t| t <= formula) && scanned_formula.is_none_or(|r| !holds(r));
    Threshold {
        formula,
        last_failure,
        consistent,
    }
}

fn bounds_row(inst: &SemigroupInstance, exec: Execution) -> Result<BoundsRow> {
    let fam = inst.family();
    let h = fam.h();
    let bases = oracle_bases(inst, exec)?;
    let radius = 2 * inst.generators()[2];
    let trades = enumerate_trades_with(inst, radius, exec)?;
    let has = |o: Orthant, len: i64| trades.iter().any(|v| o.contains(v) && v.ell() == len);
    Ok(BoundsRow {
        t: inst.t(),
        h_irreducible: bases.pnp.contains(&h),
        ppn_length_d: has(Orthant::Ppn, fam.d()),
        npp_length_minus_d: has(Orthant::Npp, -fam.d()),
    })
}

/// Oracle scan of valid `t` in `(da, t_max]` for the three sharp bounds.
pub fn empirical_bounds(fam: &ShiftedFamily, t_max: i64, exec: Execution) -> Result<BoundsReport> {
    let ts = valid_shifts(fam, fam.d() * fam.a() + 1, t_max);
    let rows = exec
        .map(&ts, |&t| {
            bounds_row(&fam.instance(t)?, Execution::Sequential)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let b = fam.bounds();
    let h_witness = match fam.instance(b.plus_minus) {
        Ok(inst) if b.plus_minus <= t_max => {
            let h = fam.h();
            let pnp = oracle_bases(&inst, exec)?.pnp;
            pnp.iter()
                .find(|u| **u != h && is_conformal(u, &h))
                .map(|u| (*u, h - *u))
        }
        _ => None,
    };
    Ok(BoundsReport {
        family: *fam,
        t_max,
        h_irreducible: threshold(&rows, b.plus_minus, |r| r.h_irreducible),
        ppn_length_d: threshold(&rows, b.plus, |r| r.ppn_length_d),
        npp_length_minus_d: threshold(&rows, b.minus, |r| r.npp_length_minus_d),
        rows,
        h_witness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

impl FromStr for Sense {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Sense::Min),
            "max" => Ok(Sense::Max),
            _ => Err(Error::InvalidInput(format!(
                "unknown sense {s:?} (expected min or max)"
            ))),
        }
    }
}

/// A linear objective with exact rational weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    weights: [Ratio<i64>; 3],
    /// `weights` scaled by the lcm of their denominators.
    scaled: [i64; 3],
}

impl Objective {
    pub fn new(weights: [Ratio<i64>; 3]) -> Result<Self> {
        let lcm = weights.iter().try_fold(1i64, |acc, w| {
            let l = acc.lcm(w.denom());
            (l > 0).then_some(l)
        });
        let lcm = lcm.ok_or(Error::Overflow("objective denominators"))?;
        let mut scaled = [0; 3];
        for (s, w) in scaled.iter_mut().zip(&weights) {
            *s = w
                .numer()
                .checked_mul(lcm / w.denom())
                .ok_or(Error::Overflow("objective weights"))?;
        }
        Ok(Objective { weights, scaled })
    }

    pub fn integer(weights: [i64; 3]) -> Self {
        Objective {
            weights: weights.map(Ratio::from_integer),
            scaled: weights,
        }
    }

    pub fn weights(&self) -> &[Ratio<i64>; 3] {
        &self.weights
    }

    /// Exact objective value of `z`.
    pub fn value(&self, z: &[i64; 3]) -> Ratio<i128> {
        let num: i128 = self
            .scaled
            .iter()
            .zip(z)
            .map(|(&w, &x)| w as i128 * x as i128)
            .sum();
        let den = self.scaled_denominator();
        Ratio::new(num, den as i128)
    }

    fn scaled_denominator(&self) -> i64 {
        self.weights.iter().fold(1, |acc, w| acc.lcm(w.denom()))
    }

    fn delta(&self, g: &Trade) -> i128 {
        self.scaled
            .iter()
            .zip(&g.0)
            .map(|(&w, &x)| w as i128 * x as i128)
            .sum()
    }
}

/// Greedy Graver augmentation from `start` using `graver` (canonical or
/// full). Scans the basis in order, trying `+g` then `-g`, and applies the
/// first move that keeps every coordinate non-negative and strictly improves
/// the objective, until none does.
pub fn augment_with_basis(
    graver: &TradeSet,
    start: [i64; 3],
    objective: &Objective,
    sense: Sense,
) -> Result<[i64; 3]> {
    if start.iter().any(|&x| x < 0) {
        return Err(Error::InvalidInput(format!(
            "start factorization {start:?} has a negative entry"
        )));
    }
    let improves = |delta: i128| match sense {
        Sense::Min => delta < 0,
        Sense::Max => delta > 0,
    };
    let mut z = Trade(start);
    'search: loop {
        for g in graver {
            for mv in [*g, -*g] {
                let next = z
                    .checked_add(&mv)
                    .ok_or(Error::Overflow("augmentation step"))?;
                if next.0.iter().all(|&x| x >= 0) && improves(objective.delta(&mv)) {
                    z = next;
                    continue 'search;
                }
            }
        }
        return Ok(z.0);
    }
}

/// Optimizes `objective` over the factorizations of the element factored by
/// `start`.
pub fn augment(
    inst: &SemigroupInstance,
    start: [i64; 3],
    objective: &Objective,
    sense: Sense,
) -> Result<[i64; 3]> {
    let (graver, _) = graver_by(inst, Method::Auto, Execution::default())?;
    augment_with_basis(&graver, start, objective, sense)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiffEntry {
    pub family: ShiftedFamily,
    pub t: i64,
    /// Graver sizes counting both signs.
    pub fast_count: usize,
    pub oracle_count: usize,
    pub equal: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilySummary {
    pub family: ShiftedFamily,
    pub instances: usize,
    pub mismatches: usize,
    /// Every measured `|Gr(t + rho)| - |Gr(t)|` divided by `rho`, when all
    /// measurements agree. `None` with fewer than two periods.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub observed_leading_coefficient: Option<Ratio<i64>>,
    /// False when two measured increments differ.
    pub increments_agree: bool,
    #[serde(serialize_with = "ser_ratio")]
    pub expected_leading_coefficient: Ratio<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiffReport {
    pub periods: i64,
    pub entries: Vec<DiffEntry>,
    pub families: Vec<FamilySummary>,
}

impl DiffReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &DiffEntry> {
        self.entries.iter().filter(|e| !e.equal)
    }

    pub fn ok(&self) -> bool {
        self.mismatches().next().is_none()
            && self.families.iter().all(|f| {
                f.increments_agree
                    && f.observed_leading_coefficient
                        .is_none_or(|r| r == f.expected_leading_coefficient)
            })
    }
}

fn diff_entry(fam: &ShiftedFamily, t: i64) -> DiffEntry {
    let run = || -> Result<(TradeSet, TradeSet)> {
        let inst = fam.instance(t)?;
        let (fast, _) = graver_by(&inst, Method::Shift, Execution::Sequential)?;
        let (oracle, _) = graver_by(&inst, Method::Oracle, Execution::Sequential)?;
        Ok((fast, oracle))
    };
    match run() {
        Ok((fast, oracle)) => DiffEntry {
            family: *fam,
            t,
            fast_count: fast.signed_len(),
            oracle_count: oracle.signed_len(),
            equal: fast == oracle,
            error: None,
        },
        Err(e) => DiffEntry {
            family: *fam,
            t,
            fast_count: 0,
            oracle_count: 0,
            equal: false,
            error: Some(e.to_string()),
        },
    }
}

/// Compares the shift route with the oracle at every valid `t` in
/// `(B, B + periods * rho]` for each family.
pub fn differential_test(families: &[ShiftedFamily], periods: i64, exec: Execution) -> DiffReport {
    let jobs: Vec<(ShiftedFamily, i64)> = families
        .iter()
        .flat_map(|f| {
            let b = f.bounds().max;
            valid_shifts(f, b + 1, b + periods * f.rho())
                .into_iter()
                .map(move |t| (*f, t))
        })
        .collect();
    let entries = exec.map(&jobs, |(f, t)| diff_entry(f, *t));

    let families = families
        .iter()
        .map(|f| {
            let mine: Vec<&DiffEntry> = entries.iter().filter(|e| e.family == *f).collect();
            let counts: BTreeMap<i64, usize> = mine.iter().map(|e| (e.t, e.oracle_count)).collect();
            let rho = f.rho();
            let ratios: Vec<Ratio<i64>> = counts
                .iter()
                .filter_map(|(t, c)| {
                    counts
                        .get(&(t + rho))
                        .map(|c2| Ratio::new(*c2 as i64 - *c as i64, rho))
                })
                .collect();
            let increments_agree = ratios.windows(2).all(|w| w[0] == w[1]);
            let observed = ratios.first().copied().filter(|_| increments_agree);
            FamilySummary {
                family: *f,
                instances: mine.len(),
                mismatches: mine.iter().filter(|e| !e.equal).count(),
                observed_leading_coefficient: observed,
                increments_agree,
                expected_leading_coefficient: Ratio::new(2, f.a() * f.b()),
            }
        })
        .collect();
    DiffReport {
        periods,
        entries,
        families,
    }
}
