//! Domain types for the shifted family `M_t = <t - da, t, t + db>`.
//!
//! Everything here is an immutable value. Arithmetic on coordinates is
//! checked; the factorization map is evaluated in `i128` so it cannot
//! overflow for any `i64` input.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest shift parameter accepted. Together with `d*a, d*b <= MAX_T` this
/// keeps every product of a coordinate (at most `2*n3` in magnitude) and a
/// generator inside `i64`.
pub const MAX_T: i64 = 1_000_000_000;

/// An integer vector `(v0, v1, v2)` indexed by the three generators.
///
/// Ordering is lexicographic on `(v2, v1, v0)`, the row order used by every
/// emitted matrix.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trade(pub [i64; 3]);

impl Trade {
    pub const ZERO: Trade = Trade([0, 0, 0]);

    pub const fn new(v0: i64, v1: i64, v2: i64) -> Self {
        Trade([v0, v1, v2])
    }

    /// Unit vector `e_i`.
    pub fn unit(i: usize) -> Self {
        let mut v = [0; 3];
        v[i] = 1;
        Trade(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    /// Coordinate sum.
    pub fn ell(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Largest absolute coordinate.
    pub fn max_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn l1_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).sum()
    }

    pub fn checked_add(&self, other: &Trade) -> Option<Trade> {
        Some(Trade([
            self.0[0].checked_add(other.0[0])?,
            self.0[1].checked_add(other.0[1])?,
            self.0[2].checked_add(other.0[2])?,
        ]))
    }

    pub fn checked_sub(&self, other: &Trade) -> Option<Trade> {
        Some(Trade([
            self.0[0].checked_sub(other.0[0])?,
            self.0[1].checked_sub(other.0[1])?,
            self.0[2].checked_sub(other.0[2])?,
        ]))
    }

    pub fn checked_scale(&self, k: i64) -> Option<Trade> {
        Some(Trade([
            self.0[0].checked_mul(k)?,
            self.0[1].checked_mul(k)?,
            self.0[2].checked_mul(k)?,
        ]))
    }

    /// Returns `k` with `self == k * step`, if such an integer exists.
    pub fn multiple_of(&self, step: &Trade) -> Option<i64> {
        let pivot = step.0.iter().position(|&x| x != 0)?;
        let (k, rem) = self.0[pivot].div_rem(&step.0[pivot]);
        if rem != 0 {
            return None;
        }
        (step.checked_scale(k)? == *self).then_some(k)
    }
}

impl Ord for Trade {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |v: &Trade| (v.0[2], v.0[1], v.0[0]);
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for Trade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Index<usize> for Trade {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

// The unchecked operators are only used on vectors already bounded by the
// instance limits; overflow there still panics in debug builds.
impl Add for Trade {
    type Output = Trade;

    fn add(self, rhs: Trade) -> Trade {
        Trade([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl Sub for Trade {
    type Output = Trade;

    fn sub(self, rhs: Trade) -> Trade {
        Trade([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
        ])
    }
}

impl Neg for Trade {
    type Output = Trade;

    fn neg(self) -> Trade {
        Trade([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl fmt::Debug for Trade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for Trade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Coordinate sum of `v`.
pub fn ell(v: &Trade) -> i64 {
    v.ell()
}

/// Picks the representative of `{v, -v}` whose last nonzero coordinate is
/// positive.
pub fn canonical_rep(v: &Trade) -> Result<Trade> {
    match v.0.iter().rev().find(|&&x| x != 0) {
        None => Err(Error::InvalidInput(
            "the zero vector has no canonical representative".into(),
        )),
        Some(&x) if x > 0 => Ok(*v),
        Some(_) => Ok(-*v),
    }
}

/// The fixed offsets `(a, b, d)` of a shifted family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftedFamily {
    a: i64,
    b: i64,
    d: i64,
}

impl ShiftedFamily {
    pub fn new(a: i64, b: i64, d: i64) -> Result<Self> {
        if a < 1 || b < 1 || d < 1 {
            return Err(Error::InvalidInput(format!(
                "family parameters must be positive, got a={a}, b={b}, d={d}"
            )));
        }
        if a.gcd(&b) != 1 {
            return Err(Error::InvalidInput(format!(
                "gcd(a, b) must be 1, got a={a}, b={b}"
            )));
        }
        let fits = |x: Option<i64>| matches!(x, Some(v) if v <= MAX_T);
        if !fits(d.checked_mul(a)) || !fits(d.checked_mul(b)) {
            return Err(Error::Overflow(
                "family offsets (d*a and d*b must be at most 10^9)",
            ));
        }
        let fam = ShiftedFamily { a, b, d };
        fam.checked_rho()
            .ok_or(Error::Overflow("the period d*a*b*(a+b)"))?;
        Ok(fam)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    fn checked_rho(&self) -> Option<i64> {
        self.d
            .checked_mul(self.a)?
            .checked_mul(self.b)?
            .checked_mul(self.a + self.b)
    }

    /// Period `d*a*b*(a+b)`.
    pub fn rho(&self) -> i64 {
        self.checked_rho().expect("validated at construction")
    }

    /// The offset vector `r = (-a, 0, b)`.
    pub fn offsets(&self) -> [i64; 3] {
        [-self.a, 0, self.b]
    }

    /// The homogeneous trade `(b, -(a+b), a)`.
    pub fn h(&self) -> Trade {
        Trade::new(self.b, -(self.a + self.b), self.a)
    }

    pub fn bounds(&self) -> Bounds {
        let (a, b, d) = (self.a as i128, self.b as i128, self.d as i128);
        let narrow = |x: i128| i64::try_from(x).expect("bounded by the family limits");
        let plus = narrow((b - 1) * (a + b) - b * (d + 1));
        let plus_minus = narrow(d * a * b);
        // Largest t with t - da outside <a, a+b>: da + F(a, a+b).
        let minus = narrow((a - 1) * (a + b) + a * (d - 1));
        Bounds {
            plus,
            plus_minus,
            minus,
            max: plus.max(plus_minus).max(minus),
        }
    }

    pub fn constants(&self) -> DerivedConstants {
        let bounds = self.bounds();
        DerivedConstants {
            rho: self.rho(),
            b_plus: bounds.plus,
            b_plus_minus: bounds.plus_minus,
            b_minus: bounds.minus,
            b_max: bounds.max,
            h: self.h(),
        }
    }

    /// Whether `t` indexes a member of the family (`t > da`, `gcd(t, d) = 1`).
    pub fn is_valid_t(&self, t: i64) -> bool {
        t > self.d * self.a && t <= MAX_T && t.gcd(&self.d) == 1
    }

    pub fn instance(&self, t: i64) -> Result<SemigroupInstance> {
        SemigroupInstance::new(*self, t)
    }
}

impl fmt::Display for ShiftedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.d)
    }
}

/// The orthant-specific lower bounds on `t` and their maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Bounds {
    pub plus: i64,
    pub plus_minus: i64,
    pub minus: i64,
    pub max: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivedConstants {
    pub rho: i64,
    pub b_plus: i64,
    pub b_plus_minus: i64,
    pub b_minus: i64,
    pub b_max: i64,
    pub h: Trade,
}

/// Computes the period, bounds and homogeneous trade of a family.
pub fn constants(fam: &ShiftedFamily) -> DerivedConstants {
    fam.constants()
}

/// A family member `M_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SemigroupInstance {
    family: ShiftedFamily,
    t: i64,
}

impl SemigroupInstance {
    pub fn new(family: ShiftedFamily, t: i64) -> Result<Self> {
        if t > MAX_T {
            return Err(Error::Overflow(
                "instance generators (t must be at most 10^9)",
            ));
        }
        if t <= family.d * family.a {
            return Err(Error::InvalidInput(format!(
                "t = {t} must exceed d*a = {} so that every generator is positive",
                family.d * family.a
            )));
        }
        if t.gcd(&family.d) != 1 {
            return Err(Error::OutsideScope(format!(
                "gcd(t, d) = gcd({t}, {}) must be 1",
                family.d
            )));
        }
        Ok(SemigroupInstance { family, t })
    }

    /// Recovers `(a, b, d, t)` from three increasing generators.
    pub fn from_generators(n1: i64, n2: i64, n3: i64) -> Result<Self> {
        if !(0 < n1 && n1 < n2 && n2 < n3) {
            return Err(Error::InvalidInput(format!(
                "generators must satisfy 0 < n1 < n2 < n3, got {n1}, {n2}, {n3}"
            )));
        }
        let d = (n2 - n1).gcd(&(n3 - n2));
        let family = ShiftedFamily::new((n2 - n1) / d, (n3 - n2) / d, d)?;
        Self::new(family, n2)
    }

    pub fn family(&self) -> &ShiftedFamily {
        &self.family
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn generators(&self) -> [i64; 3] {
        let f = &self.family;
        [self.t - f.d * f.a, self.t, self.t + f.d * f.b]
    }

    pub fn constants(&self) -> DerivedConstants {
        self.family.constants()
    }

    /// `pi_t(v) = (t - da) v0 + t v1 + (t + db) v2`.
    pub fn pi(&self, v: &Trade) -> i128 {
        self.generators()
            .iter()
            .zip(v.0.iter())
            .map(|(&n, &x)| n as i128 * x as i128)
            .sum()
    }

    pub fn is_trade(&self, v: &Trade) -> bool {
        self.pi(v) == 0
    }

    /// The three rewritings of `pi_t` that eliminate one coordinate through
    /// the length.
    pub fn pi_rewritten(&self, v: &Trade) -> [i128; 3] {
        let (a, b, d, t) = (
            self.family.a as i128,
            self.family.b as i128,
            self.family.d as i128,
            self.t as i128,
        );
        let [v0, v1, v2] = v.0.map(|x| x as i128);
        let l = v0 + v1 + v2;
        [
            (t - d * a) * l + d * a * v1 + d * (a + b) * v2,
            -d * a * v0 + t * l + d * b * v2,
            -d * (a + b) * v0 - d * b * v1 + (t + d * b) * l,
        ]
    }

    /// The same family shifted by `k` periods.
    pub fn shifted(&self, k: i64) -> Result<Self> {
        let t = k
            .checked_mul(self.family.rho())
            .and_then(|x| x.checked_add(self.t))
            .ok_or(Error::Overflow("shifted instance"))?;
        Self::new(self.family, t)
    }
}

impl fmt::Display for SemigroupInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [n1, n2, n3] = self.generators();
        write!(f, "<{n1},{n2},{n3}>")
    }
}

/// Factorization map of `inst` applied to `v`.
pub fn pi(inst: &SemigroupInstance, v: &Trade) -> i128 {
    inst.pi(v)
}

/// The three lattice orthants with exactly two non-negative coordinates,
/// named by the sign pattern of their interiors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orthant {
    /// `v0 >= 0, v2 >= 0`; lengths of either sign.
    Pnp,
    /// `v0 >= 0, v1 >= 0`; lengths strictly positive.
    Ppn,
    /// `v1 >= 0, v2 >= 0`; lengths strictly negative.
    Npp,
}

impl Orthant {
    pub const ALL: [Orthant; 3] = [Orthant::Pnp, Orthant::Ppn, Orthant::Npp];

    pub fn contains(self, v: &Trade) -> bool {
        let [v0, v1, v2] = v.0;
        match self {
            Orthant::Pnp => v0 >= 0 && v2 >= 0,
            Orthant::Ppn => v0 >= 0 && v1 >= 0,
            Orthant::Npp => v1 >= 0 && v2 >= 0,
        }
    }

    pub fn strips(self) -> [Strip; 2] {
        match self {
            Orthant::Pnp => [Strip::PnpV0, Strip::PnpV2],
            Orthant::Ppn => [Strip::PpnV0, Strip::PpnV1],
            Orthant::Npp => [Strip::NppV2, Strip::NppV1],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Orthant::Pnp => "pnp",
            Orthant::Ppn => "ppn",
            Orthant::Npp => "npp",
        }
    }
}

impl fmt::Display for Orthant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Orthant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pnp" => Ok(Orthant::Pnp),
            "ppn" => Ok(Orthant::Ppn),
            "npp" => Ok(Orthant::Npp),
            _ => Err(Error::InvalidInput(format!(
                "unknown orthant {s:?} (expected pnp, ppn or npp)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Positive,
    Negated,
}

/// Every `(orthant, orientation)` pair containing `v` (positive) or `-v`
/// (negated). Vectors with a zero coordinate appear in two orthants.
pub fn orthant_memberships(v: &Trade) -> Result<Vec<(Orthant, Orientation)>> {
    if v.is_zero() {
        return Err(Error::InvalidInput(
            "the zero vector lies in every orthant".into(),
        ));
    }
    let mut out = Vec::new();
    for o in Orthant::ALL {
        if o.contains(v) {
            out.push((o, Orientation::Positive));
        }
        if o.contains(&-*v) {
            out.push((o, Orientation::Negated));
        }
    }
    Ok(out)
}

/// The neighbourhoods of the coordinate planes bounding each orthant. The
/// bounded coordinate is the one left fixed by the strip's shift map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strip {
    /// `v0 <= b` in the pnp orthant.
    PnpV0,
    /// `v2 <= a` in the pnp orthant.
    PnpV2,
    /// `v0 < b` in the ppn orthant.
    PpnV0,
    /// `v1 < a + b` in the ppn orthant.
    PpnV1,
    /// `v2 < a` in the npp orthant.
    NppV2,
    /// `v1 < a + b` in the npp orthant.
    NppV1,
}

impl Strip {
    pub fn orthant(self) -> Orthant {
        match self {
            Strip::PnpV0 | Strip::PnpV2 => Orthant::Pnp,
            Strip::PpnV0 | Strip::PpnV1 => Orthant::Ppn,
            Strip::NppV2 | Strip::NppV1 => Orthant::Npp,
        }
    }

    /// Index pair `(i, j)` of the shift map that carries this strip at `t`
    /// onto the same strip at `t + rho`.
    pub fn shift_map(self) -> (usize, usize) {
        match self {
            Strip::PnpV0 | Strip::PpnV0 => (1, 2),
            Strip::PnpV2 | Strip::NppV2 => (0, 1),
            Strip::PpnV1 | Strip::NppV1 => (0, 2),
        }
    }

    /// Membership test that assumes `v` already lies in the strip's orthant.
    pub(crate) fn holds(self, fam: &ShiftedFamily, v: &Trade) -> bool {
        let (a, b) = (fam.a, fam.b);
        let [v0, v1, v2] = v.0;
        match self {
            Strip::PnpV0 => v0 <= b,
            Strip::PnpV2 => v2 <= a,
            Strip::PpnV0 => v0 < b,
            Strip::PpnV1 | Strip::NppV1 => v1 < a + b,
            Strip::NppV2 => v2 < a,
        }
    }

    pub fn contains(self, fam: &ShiftedFamily, v: &Trade) -> Result<bool> {
        if !self.orthant().contains(v) {
            return Err(Error::InvalidInput(format!(
                "{v} does not lie in the {} orthant",
                self.orthant()
            )));
        }
        Ok(self.holds(fam, v))
    }
}

/// Strip membership of a lattice vector of `inst`.
pub fn in_strip(inst: &SemigroupInstance, v: &Trade, strip: Strip) -> Result<bool> {
    strip.contains(inst.family(), v)
}
