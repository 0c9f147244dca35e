//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any FAIL.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_rational::Ratio;
use shifted_graver::analysis::{
    augment_with_basis, differential_test, graver_by, verify_period_law, DiffReport,
};
use shifted_graver::format::parse_4ti2_set;
use shifted_graver::oracle::{
    enumerate_trades, factorizations, graver_oracle, hilbert_oracle, SetMode, TradeSet,
};
use shifted_graver::shift::{base_plan, fast_bases, phi, phi_inverse};
use shifted_graver::{
    Execution, Method, Objective, Orthant, SemigroupInstance, Sense, ShiftedFamily, Trade,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn columns(rows: [&[i64]; 3]) -> Vec<Trade> {
    (0..rows[0].len())
        .map(|j| Trade::new(rows[0][j], rows[1][j], rows[2][j]))
        .collect()
}

fn cli_graver(gens: &str, method: &str) -> Result<TradeSet, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_shgraver"))
        .args([
            "graver", "--gens", gens, "--method", method, "--format", "4ti2",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("shgraver exited with {}", out.status)
    })?;
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    parse_4ti2_set(&text, SetMode::Canonical).map_err(|e| e.to_string())
}

fn golden_m19() -> Check {
    let expected = TradeSet::canonical(columns([
        &[-19, 11, -8, 3, -5, -2, 1, -7, -12, -1, -17, -22, 0],
        &[17, -11, 6, -5, 1, -4, -9, -3, -2, -13, -1, 0, -22],
        &[0, 1, 1, 2, 3, 5, 7, 8, 11, 12, 14, 17, 19],
    ]))
    .unwrap();
    for method in ["oracle", "shift"] {
        let got = cli_graver("17,19,22", method)?;
        ensure(got == expected, || {
            format!("{method}: {} trades differ from the matrix", got.len())
        })?;
        ensure(got.signed_len() == 26, || {
            format!("{method}: {} signed trades", got.signed_len())
        })?;
    }
    Ok("13 canonical trades, 26 signed, oracle and shift".into())
}

fn golden_m79() -> Check {
    let inst = SemigroupInstance::from_generators(77, 79, 82).unwrap();
    let plan = base_plan(&inst).ok_or("no base plan")?;
    ensure((plan.t0, plan.k) == (19, 2), || {
        format!("base plan {plan:?}")
    })?;
    let expected = TradeSet::canonical(columns([
        &[
            -79, 41, -38, 3, -35, -32, -29, -26, -23, -20, -17, -14, -11, -8, -5, -2, 1, -31, -48,
            -1, -65, -82, 0,
        ],
        &[
            77, -41, 36, -5, 31, 26, 21, 16, 11, 6, 1, -4, -9, -14, -19, -24, -29, -3, -2, -53, -1,
            0, -82,
        ],
        &[
            0, 1, 1, 2, 3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 32, 47, 52, 62, 77, 79,
        ],
    ]))
    .unwrap();
    let (fast, used) =
        graver_by(&inst, Method::Shift, Execution::default()).map_err(|e| e.to_string())?;
    ensure(used == Method::Shift, || "shift route not used".into())?;
    ensure(fast == expected, || {
        "shift result differs from the matrix".into()
    })?;
    let oracle = graver_oracle(&inst).map_err(|e| e.to_string())?;
    ensure(oracle == fast, || "oracle differs from shift".into())?;
    ensure(cli_graver("77,79,82", "shift")? == expected, || {
        "cli output differs".into()
    })?;
    Ok("t0=19 k=2, 23 trades, shift = oracle = matrix".into())
}

fn large_shift() -> Check {
    let inst = SemigroupInstance::from_generators(94157, 94159, 94162).unwrap();
    let bases = fast_bases(&inst).map_err(|e| e.to_string())?;
    let d = inst.family().d();
    let ppn: Vec<Trade> = bases.ppn.iter().copied().filter(|v| v.ell() == d).collect();
    let npp: Vec<Trade> = bases
        .npp
        .iter()
        .copied()
        .filter(|v| v.ell() == -d)
        .collect();
    let by_v0 = |v: &Vec<Trade>| {
        (
            v.iter().min_by_key(|x| x[0]).copied(),
            v.iter().max_by_key(|x| x[0]).copied(),
        )
    };
    ensure(ppn.len() == 6277, || {
        format!("ppn length-d trades: {}", ppn.len())
    })?;
    ensure(
        by_v0(&ppn)
            == (
                Some(Trade::new(2, 31384, -31385)),
                Some(Trade::new(18830, 4, -18833)),
            ),
        || format!("ppn endpoints {:?}", by_v0(&ppn)),
    )?;
    ensure(npp.len() == 9416, || {
        format!("npp length-(-d) trades: {}", npp.len())
    })?;
    ensure(
        by_v0(&npp)
            == (
                Some(Trade::new(-47078, 47076, 1)),
                Some(Trade::new(-18833, 1, 18831)),
            ),
        || format!("npp endpoints {:?}", by_v0(&npp)),
    )?;
    let pnp = TradeSet::full(columns([
        &[0, 1, 3, 47081, 94159],
        &[-94162, -31389, -5, -47081, -94157],
        &[94159, 31387, 2, 1, 0],
    ]));
    ensure(bases.pnp == pnp, || {
        format!("pnp basis {:?}", bases.pnp.as_slice())
    })?;
    Ok("6277 ppn and 9416 npp segment trades, pnp basis of 5".into())
}

fn period_law() -> Check {
    let fam = ShiftedFamily::new(2, 3, 1).unwrap();
    let rep = verify_period_law(&fam, 7, 6 + 3 * fam.rho(), Execution::default())
        .map_err(|e| e.to_string())?;
    ensure(!rep.checks.is_empty(), || "no shifts checked".into())?;
    ensure(rep.ok(), || format!("violations at {:?}", rep.violations))?;
    ensure(
        rep.checks
            .iter()
            .all(|c| c.graver_increment == 10 && c.orthant_increments == [0, 2, 3]),
        || "unexpected increments".into(),
    )?;
    Ok(format!(
        "{} shifts, increment 10, orthants (0,2,3)",
        rep.checks.len()
    ))
}

fn acceptance_families() -> Vec<ShiftedFamily> {
    [
        (1, 1, 1),
        (1, 2, 1),
        (2, 3, 1),
        (3, 4, 2),
        (2, 5, 3),
        (1, 3, 2),
    ]
    .into_iter()
    .map(|(a, b, d)| ShiftedFamily::new(a, b, d).unwrap())
    .collect()
}

fn differential(rep: &DiffReport) -> Check {
    let bad: Vec<String> = rep
        .mismatches()
        .map(|e| {
            format!(
                "{} t={} {}",
                e.family,
                e.t,
                e.error.clone().unwrap_or_default()
            )
        })
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    ensure(rep.families.iter().all(|f| f.instances > 0), || {
        "a family had no instances".into()
    })?;
    Ok(format!("{} instances, 0 mismatches", rep.entries.len()))
}

fn sharpness() -> Check {
    let fam = ShiftedFamily::new(2, 3, 1).unwrap();
    let h = fam.h();
    let at6 = hilbert_oracle(&fam.instance(6).unwrap(), Orthant::Pnp).map_err(|e| e.to_string())?;
    let (u, w) = (Trade::new(3, -2, 0), Trade::new(0, -3, 2));
    ensure(!at6.contains(&h), || "h irreducible at t=6".into())?;
    ensure(at6.contains(&u) && at6.contains(&w) && u + w == h, || {
        "witness missing".into()
    })?;
    let mut checked = 0;
    for t in (7..=6 + 2 * fam.rho()).filter(|&t| fam.is_valid_t(t)) {
        let basis =
            hilbert_oracle(&fam.instance(t).unwrap(), Orthant::Pnp).map_err(|e| e.to_string())?;
        ensure(basis.contains(&h), || format!("h reducible at t={t}"))?;
        checked += 1;
    }
    Ok(format!(
        "reducible at 6 as {u}+{w}, irreducible at {checked} shifts"
    ))
}

fn phi_maps() -> Check {
    let instances = [
        (17, 19, 22),
        (31, 37, 45),
        (77, 79, 82),
        (29, 32, 35),
        (41, 47, 57),
    ];
    let mut total = 0;
    for (n1, n2, n3) in instances {
        let inst = SemigroupInstance::from_generators(n1, n2, n3).unwrap();
        let fam = *inst.family();
        let next = inst.shifted(1).unwrap();
        let mut lattice: Vec<Trade> = enumerate_trades(&inst, 2 * n3)
            .map_err(|e| e.to_string())?
            .iter()
            .copied()
            .collect();
        lattice.sort_by_key(|v| (v.l1_norm(), *v));
        for v in lattice.iter().take(200) {
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let w = phi(&fam, i, j, v, 1).map_err(|e| e.to_string())?;
                ensure(next.pi(&w) == 0, || {
                    format!("phi_{i}{j}({v}) = {w} not a trade")
                })?;
                ensure(w.ell() == v.ell(), || {
                    format!("phi_{i}{j}({v}) changes length")
                })?;
                let back = phi_inverse(&fam, i, j, &w, 1).map_err(|e| e.to_string())?;
                ensure(back == *v, || format!("phi_{i}{j} inverse fails at {v}"))?;
            }
            total += 1;
        }
    }
    ensure(total == 1000, || format!("only {total} elements"))?;
    Ok("1000 elements over 5 instances, 3 maps each".into())
}

fn augmentation() -> Check {
    let inst = SemigroupInstance::from_generators(17, 19, 22).unwrap();
    let (graver, _) =
        graver_by(&inst, Method::Auto, Execution::default()).map_err(|e| e.to_string())?;
    let elements: Vec<(i64, Vec<[i64; 3]>)> = (100..)
        .step_by(7)
        .map(|n| (n, factorizations(&inst, n).unwrap()))
        .filter(|(_, f)| f.len() >= 2)
        .take(50)
        .collect();
    let mut runs = 0;
    for weights in [[1, 1, 1], [1, 0, -1]] {
        let obj = Objective::integer(weights);
        for sense in [Sense::Min, Sense::Max] {
            for (n, facts) in &elements {
                let values = facts.iter().map(|z| obj.value(z));
                let best = match sense {
                    Sense::Min => values.min(),
                    Sense::Max => values.max(),
                }
                .unwrap();
                for z in facts {
                    let end =
                        augment_with_basis(&graver, *z, &obj, sense).map_err(|e| e.to_string())?;
                    ensure(facts.contains(&end), || {
                        format!("n={n}: {end:?} is not a factorization")
                    })?;
                    ensure(obj.value(&end) == best, || {
                        format!("n={n} {weights:?} {sense:?} from {z:?}")
                    })?;
                    runs += 1;
                }
            }
        }
    }
    Ok(format!(
        "50 elements, {runs} augmentations reach the optimum"
    ))
}

fn leading_coefficient(rep: &DiffReport) -> Check {
    let mut seen = Vec::new();
    for f in &rep.families {
        let fam = f.family;
        let counts: BTreeMap<i64, usize> = rep
            .entries
            .iter()
            .filter(|e| e.family == fam)
            .map(|e| (e.t, e.oracle_count))
            .collect();
        let expected = Ratio::new(2, fam.a() * fam.b());
        let mut pairs = 0;
        for (t, c) in &counts {
            if let Some(c2) = counts.get(&(t + fam.rho())) {
                let r = Ratio::new(*c2 as i64 - *c as i64, fam.rho());
                ensure(r == expected, || format!("{fam} t={t}: {r} != {expected}"))?;
                pairs += 1;
            }
        }
        ensure(pairs > 0, || format!("{fam}: nothing measured"))?;
        seen.push(format!("{fam}={expected}"));
    }
    Ok(seen.join(" "))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: usize, name: &str, limit: Duration, run: &mut dyn FnMut() -> Check| {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > limit => Err(format!("{msg}; took {took:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS {n} {name} ({took:.2?}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {n} {name} ({took:.2?}): {msg}");
            }
        }
    };
    let secs = Duration::from_secs;
    report(1, "golden Gr(M19)", secs(1), &mut golden_m19);
    report(2, "golden Gr(M79)", secs(1), &mut golden_m79);
    report(3, "large shift M94159", secs(5), &mut large_shift);
    report(4, "period law (2,3,1)", secs(120), &mut period_law);

    let mut diff = None;
    report(5, "differential suite", secs(600), &mut || {
        let rep = differential_test(&acceptance_families(), 2, Execution::default());
        let out = differential(&rep);
        diff = Some(rep);
        out
    });
    report(6, "sharpness of B+-", secs(60), &mut sharpness);
    report(7, "phi maps", secs(10), &mut phi_maps);
    report(8, "augmentation optimality", secs(30), &mut augmentation);
    report(
        9,
        "leading coefficient 2/(ab)",
        secs(600),
        &mut || match &diff {
            Some(rep) => leading_coefficient(rep),
            None => Err("differential suite did not run".into()),
        },
    );

    if failed == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 9 criteria failed");
        ExitCode::FAILURE
    }
}
