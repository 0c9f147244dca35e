//! Output encodings: the 4ti2-style matrix, JSON and CSV.
//!
//! Every renderer is byte-deterministic: trade sets are already sorted by
//! `(v2, v1, v0)`, struct fields serialize in declaration order, and every
//! document ends with a newline.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::analysis::{BoundsReport, CountTable, DiffReport, Method, PeriodReport};
use crate::error::{Error, Result};
use crate::oracle::{SetMode, TradeSet};
use crate::semigroup::{Bounds, SemigroupInstance, Trade};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    FourTiTwo,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4ti2" => Ok(Format::FourTiTwo),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::InvalidInput(format!(
                "unknown format {s:?} (expected 4ti2, json or csv)"
            ))),
        }
    }
}

/// `N 3` followed by one space-separated row per trade.
pub fn write_4ti2(set: &TradeSet) -> String {
    let mut out = format!("{} 3\n", set.len());
    for v in set {
        let _ = writeln!(out, "{} {} {}", v[0], v[1], v[2]);
    }
    out
}

/// Rows of a 4ti2 matrix with three columns, in file order.
pub fn parse_4ti2(text: &str) -> Result<Vec<Trade>> {
    let bad = |msg: String| Error::InvalidInput(format!("4ti2 matrix: {msg}"));
    let mut tokens = text.split_whitespace().map(|tok| {
        tok.parse::<i64>()
            .map_err(|_| bad(format!("not an integer: {tok:?}")))
    });
    let mut next = |what: &str| {
        tokens
            .next()
            .unwrap_or_else(|| Err(bad(format!("missing {what}"))))
    };
    let rows = next("row count")?;
    let cols = next("column count")?;
    if cols != 3 {
        return Err(bad(format!("expected 3 columns, found {cols}")));
    }
    if rows < 0 {
        return Err(bad(format!("negative row count {rows}")));
    }
    let mut out = Vec::with_capacity(rows as usize);
    for _ in 0..rows {
        out.push(Trade([next("entry")?, next("entry")?, next("entry")?]));
    }
    if let Some(extra) = tokens.next() {
        return Err(bad(format!("trailing data after {rows} rows ({extra:?})")));
    }
    Ok(out)
}

/// Parses a 4ti2 matrix into a set of the given mode.
pub fn parse_4ti2_set(text: &str, mode: SetMode) -> Result<TradeSet> {
    let rows = parse_4ti2(text)?;
    match mode {
        SetMode::Full => Ok(TradeSet::full(rows)),
        SetMode::Canonical => TradeSet::canonical(rows),
    }
}

/// JSON document for a trade set of one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceDocument<'a> {
    pub generators: [i64; 3],
    pub t: i64,
    pub a: i64,
    pub b: i64,
    pub d: i64,
    pub rho: i64,
    pub bounds: Bounds,
    pub method: Method,
    pub trades: &'a [Trade],
    pub count: usize,
}

impl<'a> InstanceDocument<'a> {
    pub fn new(inst: &SemigroupInstance, method: Method, trades: &'a TradeSet) -> Self {
        let fam = inst.family();
        InstanceDocument {
            generators: inst.generators(),
            t: inst.t(),
            a: fam.a(),
            b: fam.b(),
            d: fam.d(),
            rho: fam.rho(),
            bounds: fam.bounds(),
            method,
            trades: trades.as_slice(),
            count: trades.len(),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Consistency(format!("json encoding failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn trades_csv(set: &TradeSet) -> String {
    let mut out = String::from("v0,v1,v2\n");
    for v in set {
        let _ = writeln!(out, "{},{},{}", v[0], v[1], v[2]);
    }
    out
}

pub fn count_table_csv(table: &CountTable) -> String {
    let mut out = String::from("t,graver,h_pnp,h_ppn,h_npp,method\n");
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.t, r.graver, r.h_pnp, r.h_ppn, r.h_npp, r.method
        );
    }
    out
}

pub fn period_report_csv(rep: &PeriodReport) -> String {
    let mut out = String::from("t,graver_increment,pnp_increment,ppn_increment,npp_increment,ok\n");
    for c in &rep.checks {
        let [p, q, r] = c.orthant_increments;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            c.t, c.graver_increment, p, q, r, c.ok
        );
    }
    out
}

pub fn bounds_report_csv(rep: &BoundsReport) -> String {
    let mut out = String::from("t,h_irreducible,ppn_length_d,npp_length_minus_d\n");
    for r in &rep.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.t, r.h_irreducible, r.ppn_length_d, r.npp_length_minus_d
        );
    }
    out
}

pub fn diff_report_csv(rep: &DiffReport) -> String {
    let mut out = String::from("a,b,d,t,fast,oracle,equal\n");
    for e in &rep.entries {
        let f = e.family;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            f.a(),
            f.b(),
            f.d(),
            e.t,
            e.fast_count,
            e.oracle_count,
            e.equal
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Trades(TradeSet),
    Counts(CountTable),
    Period(PeriodReport),
    Bounds(BoundsReport),
    Diff(DiffReport),
}

/// A payload ready to render in one format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputDocument {
    pub format: Format,
    pub payload: Payload,
    /// Required for JSON trade documents.
    pub instance: Option<SemigroupInstance>,
    pub method: Option<Method>,
}

impl OutputDocument {
    pub fn new(format: Format, payload: Payload) -> Self {
        OutputDocument {
            format,
            payload,
            instance: None,
            method: None,
        }
    }

    pub fn with_instance(mut self, inst: SemigroupInstance, method: Method) -> Self {
        self.instance = Some(inst);
        self.method = Some(method);
        self
    }

    pub fn render(&self) -> Result<String> {
        let unsupported = |what: &str| {
            Err(Error::InvalidInput(format!(
                "{what} cannot be written in 4ti2 format"
            )))
        };
        match (&self.payload, self.format) {
            (Payload::Trades(set), Format::FourTiTwo) => Ok(write_4ti2(set)),
            (Payload::Trades(set), Format::Csv) => Ok(trades_csv(set)),
            (Payload::Trades(set), Format::Json) => {
                let (Some(inst), Some(method)) = (&self.instance, self.method) else {
                    return Err(Error::InvalidInput(
                        "json trade output needs an instance".into(),
                    ));
                };
                to_json(&InstanceDocument::new(inst, method, set))
            }
            (Payload::Counts(t), Format::Csv) => Ok(count_table_csv(t)),
            (Payload::Counts(t), Format::Json) => to_json(t),
            (Payload::Period(r), Format::Csv) => Ok(period_report_csv(r)),
            (Payload::Period(r), Format::Json) => to_json(r),
            (Payload::Bounds(r), Format::Csv) => Ok(bounds_report_csv(r)),
            (Payload::Bounds(r), Format::Json) => to_json(r),
            (Payload::Diff(r), Format::Csv) => Ok(diff_report_csv(r)),
            (Payload::Diff(r), Format::Json) => to_json(r),
            (Payload::Counts(_), Format::FourTiTwo) => unsupported("a count table"),
            (_, Format::FourTiTwo) => unsupported("a report"),
        }
    }
}
