//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any failure.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use squaremap::brute_oracle::{
    classical_order, conjugacy_classes, real_classes_oracle, s2_oracle, square_fiber_counts, ElementTable,
    GroupKind, GroupSpec,
};
use squaremap::ffpoly::{monic_irreducibles, Field};
use squaremap::gl_classes::{
    class_size, enumerate_classes, gl_order, representative_matrix, GLClassData,
};
use squaremap::power_poly::butler_agrees;
use squaremap::real_classes::{
    count_order_dividing, count_unity_roots_gf, real_class_count_direct, real_class_count_ms,
};
use squaremap::square_fibers::{
    audit_square_counts, audit_square_existence, count_square_roots, AuditReport, CMP_COUNT_VS_ORACLE,
    CMP_PAPER_VS_COUNT, CMP_PREDICATE_VS_ORACLE,
};

const MASS_SET: [(u32, u64); 6] = [(1, 3), (2, 3), (3, 3), (1, 5), (2, 5), (2, 7)];

const LIMIT_MASS: Duration = Duration::from_secs(10);
const LIMIT_FIBERS: Duration = Duration::from_secs(60);
const LIMIT_BUTLER: Duration = Duration::from_secs(30);
const LIMIT_REAL: Duration = Duration::from_secs(90);
const LIMIT_TOTAL: Duration = Duration::from_secs(300);

/// Largest group handled in the non-GL Murray–Sambale check.
const MS_ORDER_BOUND: u64 = 10_000;

type Check = Result<String, String>;

fn field(q: u64) -> Field {
    Field::of_order(q).expect("odd prime power")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn class_mass() -> Check {
    for (n, q) in MASS_SET {
        let classes = enumerate_classes(n, &field(q)).map_err(e)?;
        let mut total = BigUint::default();
        for c in &classes {
            total += class_size(c).map_err(e)?;
        }
        ensure(total == gl_order(n, q), || format!("GL_{n}({q}): sum {total} != {}", gl_order(n, q)))?;
    }
    Ok(format!("{} groups", MASS_SET.len()))
}

fn gl_table(n: u32, q: u64) -> Result<ElementTable, String> {
    ElementTable::enumerate(&GroupSpec::new(GroupKind::GL, n, q).map_err(e)?).map_err(e)
}

fn oracle_fibers() -> Check {
    let mut checked = 0;
    for (n, q) in [(2u32, 3u64), (2, 5), (3, 3)] {
        let table = gl_table(n, q)?;
        let fibers = square_fiber_counts(&table);
        for c in enumerate_classes(n, &field(q)).map_err(e)? {
            let rep = representative_matrix(&c).map_err(e)?;
            let idx = table.index_of(&rep).ok_or_else(|| format!("{c}: representative not in table"))?;
            let formula = count_square_roots(&c).map_err(e)?;
            ensure(formula == BigUint::from(fibers[idx]), || {
                format!("GL_{n}({q}) {c}: formula {formula}, oracle {}", fibers[idx])
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} classes"))
}

fn fixtures() -> Check {
    let f3 = field(3);
    let t2 = gl_table(2, 3)?;
    let t3 = gl_table(3, 3)?;
    let fib2 = square_fiber_counts(&t2);
    let fib3 = square_fiber_counts(&t3);
    let cases = [
        (GLClassData::identity(&f3, 2), &t2, &fib2, 14u64),
        (GLClassData::scalar(&f3, 2, 2), &t2, &fib2, 6),
        (GLClassData::scalar(&f3, 2, 3), &t3, &fib3, 0),
    ];
    for (c, table, fib, want) in cases {
        let idx = table.index_of(&representative_matrix(&c).map_err(e)?).ok_or("missing")?;
        ensure(fib[idx] == want, || format!("{c}: oracle fiber {} != {want}", fib[idx]))?;
        let got = count_square_roots(&c).map_err(e)?;
        ensure(got == BigUint::from(want), || format!("{c}: formula {got} != {want}"))?;
    }
    Ok("I_2 -> 14, -I_2 -> 6, -I_3 -> 0".into())
}

fn square_mass() -> Check {
    for (n, q) in MASS_SET {
        let mut total = BigUint::default();
        for c in enumerate_classes(n, &field(q)).map_err(e)? {
            total += class_size(&c).map_err(e)? * count_square_roots(&c).map_err(e)?;
        }
        ensure(total == gl_order(n, q), || format!("GL_{n}({q}): sum |c|R(c) = {total}"))?;
    }
    Ok(format!("{} groups", MASS_SET.len()))
}

fn butler() -> Check {
    let mut checked = 0;
    for (q, ms) in [(3u64, &[2u64, 4][..]), (5, &[2, 3, 4][..])] {
        let f = field(q);
        for d in 1..=4 {
            for p in monic_irreducibles(&f, d).map_err(e)?.iter().filter(|p| !p.is_x()) {
                for &m in ms {
                    ensure(butler_agrees(p, m).map_err(e)?, || format!("{} over F_{q}, m = {m}", p.pretty()))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (f, m) pairs"))
}

fn generating_function() -> Check {
    for n in 1..=3u32 {
        for q in [3u64, 5] {
            for m in [2u128, 4] {
                let gf = count_unity_roots_gf(n, q, m).map_err(e)?;
                let direct = count_order_dividing(n, &field(q), m).map_err(e)?;
                ensure(gf == direct, || format!("n={n} q={q} M={m}: gf {gf}, classes {direct}"))?;
            }
        }
    }
    let hand = count_unity_roots_gf(2, 3, 2).map_err(e)?;
    ensure(hand == BigUint::from(14u32), || format!("a_2(3, M=2) = {hand}"))?;
    Ok("12 cases, a_2(3, M=2) = 14".into())
}

fn real_three_way() -> Check {
    let mut values = Vec::new();
    for (n, q) in [(1u32, 3u64), (1, 5), (1, 7), (2, 3), (2, 5), (3, 3)] {
        let f = field(q);
        let direct = real_class_count_direct(n, &f).map_err(e)?;
        let ms = real_class_count_ms(n, &f).map_err(e)?;
        let table = gl_table(n, q)?;
        let classes = conjugacy_classes(&table).map_err(e)?;
        let oracle = BigUint::from(real_classes_oracle(&table, &classes));
        ensure(direct == ms && ms == oracle, || {
            format!("GL_{n}({q}): direct {direct}, ms {ms}, oracle {oracle}")
        })?;
        if (n, q) == (2, 3) {
            ensure(direct == BigUint::from(6u32), || format!("GL_2(3) has {direct} real classes"))?;
        }
        values.push(format!("GL_{n}({q})={direct}"));
    }
    Ok(values.join(" "))
}

fn ms_non_gl() -> Check {
    let mut candidates = vec![
        (GroupKind::U, 1, 3),
        (GroupKind::U, 2, 3),
        (GroupKind::Sp, 2, 3),
        (GroupKind::Sp, 2, 5),
    ];
    for kind in [GroupKind::Oplus, GroupKind::Ominus] {
        for n in [2u32, 4] {
            for q in [3u64, 5, 7] {
                candidates.push((kind, n, q));
            }
        }
    }
    for n in [1u32, 3] {
        for q in [3u64, 5, 7] {
            candidates.push((GroupKind::Oodd, n, q));
        }
    }
    let mut done = Vec::new();
    for (kind, n, q) in candidates {
        let is_o = matches!(kind, GroupKind::Oplus | GroupKind::Ominus | GroupKind::Oodd);
        if is_o && classical_order(kind, n, q) > BigUint::from(MS_ORDER_BOUND) {
            continue;
        }
        let spec = GroupSpec::new(kind, n, q).map_err(e)?;
        let table = ElementTable::enumerate(&spec).map_err(e)?;
        let fibers = square_fiber_counts(&table);
        let classes = conjugacy_classes(&table).map_err(e)?;
        let s2 = s2_oracle(&table, &fibers);
        let real = real_classes_oracle(&table, &classes);
        ensure(s2 == BigUint::from(real) * BigUint::from(table.len()), || {
            format!("{}_{n}({q}): s2 {s2}, |G| {}, real {real}", kind.label(), table.len())
        })?;
        done.push(format!("{}_{n}({q})", kind.label()));
    }
    Ok(done.join(" "))
}

fn consistent(report: &AuditReport) -> Result<(), String> {
    ensure(report.summary.records as usize == report.records.len(), || "record count".into())?;
    for (name, tally) in &report.summary.comparisons {
        let agree = report.records.iter().filter(|r| r.agreement.get(name) == Some(&true)).count() as u64;
        let disagree = report.records.iter().filter(|r| r.agreement.get(name) == Some(&false)).count() as u64;
        ensure(agree == tally.matches && disagree == tally.mismatches, || format!("tally for {name}"))?;
    }
    Ok(())
}

fn paper_audits() -> Check {
    let f3 = field(3);
    let report = audit_square_counts(2, &f3, true).map_err(e)?;
    consistent(&report)?;
    ensure(report.records.len() == 8, || format!("{} records", report.records.len()))?;
    ensure(report.mismatches(CMP_COUNT_VS_ORACLE) == 0, || "count_square_roots disagrees with oracle".into())?;
    let flagged: Vec<_> = report.mismatching(CMP_PAPER_VS_COUNT).iter().map(|r| r.class.clone()).collect();
    for c in [GLClassData::identity(&f3, 2), GLClassData::scalar(&f3, 2, 2)] {
        ensure(flagged.contains(&c.to_json()), || format!("{c} not flagged"))?;
    }

    let sp = audit_square_existence(&GroupSpec::new(GroupKind::Sp, 2, 3).map_err(e)?).map_err(e)?;
    consistent(&sp)?;
    let minus_i = GLClassData::scalar(&f3, 2, 2).to_json();
    ensure(
        sp.mismatching(CMP_PREDICATE_VS_ORACLE).iter().any(|r| r.class == minus_i),
        || "-I in Sp_2(3) not flagged".into(),
    )?;
    Ok(format!(
        "GL_2(3): {} printed-formula mismatches, 0 oracle mismatches; Sp_2(3): -I flagged",
        report.mismatches(CMP_PAPER_VS_COUNT)
    ))
}

const SUITE: &[&[&str]] = &[
    &["classify-poly", "--q", "3", "--poly", "1,1", "--m", "2"],
    &["classify-poly", "--q", "9", "--poly", "2,1"],
    &["classes", "--n", "3", "--q", "3"],
    &["classes", "--n", "2", "--q", "5", "--format", "csv"],
    &["sqrt-count", "--group", "gl", "--n", "2", "--q", "3", "--class", r#"{"entries":[{"poly":"1,1","partition":"1^2"}]}"#],
    &["audit-squares", "--n", "2", "--q", "3", "--oracle"],
    &["audit-squares", "--n", "3", "--q", "3", "--oracle"],
    &["audit-squares", "--n", "4", "--q", "3", "--group", "sp"],
    &["audit-squares", "--n", "3", "--q", "3", "--group", "u"],
    &["real-classes", "--n", "3", "--q", "3", "--oracle"],
    &["real-classes", "--n", "2", "--q", "5", "--method", "theorem"],
    &["oracle", "--kind", "gl", "--n", "3", "--q", "3", "--report", "classes"],
    &["oracle", "--kind", "u", "--n", "2", "--q", "3", "--report", "s2"],
    &["oracle", "--kind", "o+", "--n", "4", "--q", "3", "--report", "real"],
];

fn determinism() -> Check {
    let mut bytes = 0;
    for args in SUITE {
        let mut first = vec!["squaremap", "--threads", "1"];
        first.extend_from_slice(args);
        let mut second = vec!["squaremap", "--threads", "4"];
        second.extend_from_slice(args);
        let a = squaremap_cli::run(first);
        let b = squaremap_cli::run(second);
        ensure(a.code == 0, || format!("{args:?} exited {}: {}", a.code, a.stderr))?;
        ensure(a == b, || format!("{args:?} differs between 1 and 4 threads"))?;
        bytes += a.stdout.len();
    }
    Ok(format!("{} commands, {bytes} bytes identical", SUITE.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<Duration>); 10] = [
        ("1 class mass", class_mass, Some(LIMIT_MASS)),
        ("2 oracle fiber equality", oracle_fibers, Some(LIMIT_FIBERS)),
        ("3 fiber fixtures", fixtures, None),
        ("4 square-root mass", square_mass, None),
        ("5 Butler factorization", butler, Some(LIMIT_BUTLER)),
        ("6 generating function", generating_function, None),
        ("7 real classes three ways", real_three_way, Some(LIMIT_REAL)),
        ("8 Murray-Sambale on U/Sp/O", ms_non_gl, None),
        ("9 printed-formula audits", paper_audits, None),
        ("10 determinism across threads", determinism, None),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (name, check, limit) in criteria {
        let t = Instant::now();
        let outcome = check();
        let elapsed = t.elapsed();
        let over = limit.filter(|&l| elapsed > l);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), None) => ("PASS", d.clone()),
            (Ok(d), Some(l)) => ("FAIL", format!("{d}; took longer than {l:?}")),
            (Err(msg), _) => ("FAIL", msg.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("{status} criterion {name} ({:.2}s): {detail}", elapsed.as_secs_f64());
    }
    let total = start.elapsed();
    if total > LIMIT_TOTAL {
        failures += 1;
        println!("FAIL total runtime {:.2}s exceeds {LIMIT_TOTAL:?}", total.as_secs_f64());
    } else {
        println!("PASS total runtime {:.2}s (limit {LIMIT_TOTAL:?})", total.as_secs_f64());
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
