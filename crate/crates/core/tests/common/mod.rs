#![allow(dead_code)]

use proptest::prelude::*;
use shifted_graver::{SemigroupInstance, ShiftedFamily};

pub fn family() -> impl Strategy<Value = ShiftedFamily> {
    (1i64..=4, 1i64..=4, 1i64..=3).prop_filter_map("gcd(a, b) = 1", |(a, b, d)| {
        ShiftedFamily::new(a, b, d).ok()
    })
}

/// A member of a small family with `t` at most `da + span`.
pub fn instance(span: i64) -> impl Strategy<Value = SemigroupInstance> {
    (family(), 1..=span).prop_filter_map("valid shift", |(f, off)| {
        f.instance(f.d() * f.a() + off).ok()
    })
}

/// A member with `t` in `(B, B + periods * rho]`.
pub fn above_bound(periods: i64) -> impl Strategy<Value = SemigroupInstance> {
    (family(), 1..=60i64).prop_filter_map("valid shift", move |(f, off)| {
        let off = 1 + (off - 1) % (periods * f.rho());
        f.instance(f.bounds().max + off).ok()
    })
}
