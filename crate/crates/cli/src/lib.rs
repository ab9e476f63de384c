//! Command-line front end. [`run`] takes an argument vector and returns the
//! exit code together with everything destined for stdout and stderr, so it
//! can be driven in-process by tests.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use squaremap::brute_oracle::{
    self, ElementTable, GroupKind, GroupSpec, DEFAULT_ORDER_LIMIT,
};
use squaremap::ffpoly::{Field, Matrix, Poly};
use squaremap::gl_classes::{centralizer_order, GLClassData, MAX_CLASSES};
use squaremap::power_poly::{
    butler_agrees, butler_profile, classify2, classify2_star, classify2_tilde, is_self_conjugate,
    is_self_reciprocal,
};
use squaremap::real_classes::{audit_real_counts, ClassTable, Convention, CMP_THEOREM_DIVIDING, CMP_THEOREM_EXACT};
use squaremap::square_fibers::{
    audit_square_counts, audit_square_existence, count_square_roots, has_square_root_gl,
    has_square_root_symplectic, has_square_root_unitary, paper_count_formula, square_root_classes, AuditReport,
};
use squaremap::Error;

pub const SCHEMA_VERSION: &str = "1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "squaremap", version, about = "Square-map fibers and real classes of finite classical groups")]
struct Cli {
    /// Worker threads; never changes the output.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format for tabular commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Fill the envelope's timestamp field (otherwise null).
    #[arg(long, global = true)]
    timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SqrtGroup {
    Gl,
    U,
    Sp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Ms,
    Theorem,
    GfAudit,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Report {
    Fibers,
    Classes,
    Real,
    S2,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a monic irreducible polynomial and print its Butler profile.
    ClassifyPoly {
        #[arg(long)]
        q: String,
        /// Coefficients, constant term first.
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 2)]
        m: u64,
    },
    /// List the conjugacy classes of GL_n(q).
    Classes {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = MAX_CLASSES)]
        max_classes: u64,
    },
    /// Number of square roots of an element given by its class data.
    SqrtCount {
        #[arg(long, value_enum, default_value_t = SqrtGroup::Gl)]
        group: SqrtGroup,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: String,
        /// Class data as JSON.
        #[arg(long)]
        class: String,
    },
    /// Compare square-root counts or predicates across methods, per class.
    AuditSquares {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: String,
        /// Also count fibers by brute force (GL only; U and Sp always do).
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = SqrtGroup::Gl)]
        group: SqrtGroup,
    },
    /// Number of real conjugacy classes of GL_n(q).
    RealClasses {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        #[arg(long)]
        oracle: bool,
    },
    /// Brute-force data for an explicit matrix group.
    Oracle {
        /// gl, u, sp, o+, o- or o0.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum)]
        report: Report,
        /// Element table cache file (read if present, written otherwise).
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ORDER_LIMIT)]
        order_limit: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::ClassifyPoly { .. } => "classify-poly",
            Command::Classes { .. } => "classes",
            Command::SqrtCount { .. } => "sqrt-count",
            Command::AuditSquares { .. } => "audit-squares",
            Command::RealClasses { .. } => "real-classes",
            Command::Oracle { .. } => "oracle",
        }
    }

    fn tabular(&self) -> bool {
        matches!(
            self,
            Command::Classes { .. } | Command::AuditSquares { .. } | Command::Oracle { .. }
        )
    }
}

/// Payload plus warnings, or a CSV table.
enum Body {
    Json { payload: Value, warnings: Vec<String> },
    Csv(String),
}

/// Argument echo with the worker count removed.
fn echo_args(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in argv.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        if a == "--threads" {
            skip = true;
            continue;
        }
        if a.starts_with("--threads=") {
            continue;
        }
        out.push(a.clone());
    }
    out
}

fn envelope(name: &str, argv: &[String], timestamp: bool, payload: Value, warnings: Vec<String>) -> Value {
    let ts = if timestamp {
        Value::String(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
    } else {
        Value::Null
    };
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool_version": TOOL_VERSION,
        "command": { "name": name, "argv": echo_args(argv) },
        "timestamp": ts,
        "payload": payload,
        "warnings": warnings,
    })
}

fn exit_code(err: &Error) -> i32 {
    if err.is_resource_bound() {
        EXIT_BOUND
    } else if err.is_invariant_violation() || matches!(err, Error::Io(_)) {
        EXIT_INTERNAL
    } else {
        EXIT_INVALID
    }
}

fn error_kind(code: i32) -> &'static str {
    match code {
        EXIT_BOUND => "bound",
        EXIT_INVALID => "invalid_input",
        _ => "internal",
    }
}

fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => {
                    let payload = json!({ "error": { "kind": "invalid_input", "message": text.trim() } });
                    Output {
                        code: EXIT_INVALID,
                        stdout: to_pretty(&envelope("unknown", &argv, false, payload, Vec::new())),
                        stderr: text,
                    }
                }
            };
        }
    };
    let name = cli.command.name();
    let fail = |err: Error| {
        let code = exit_code(&err);
        let message = err.to_string();
        let payload = json!({ "error": { "kind": error_kind(code), "message": message } });
        Output {
            code,
            stdout: to_pretty(&envelope(name, &argv, cli.timestamp, payload, Vec::new())),
            stderr: format!("error: {message}\n"),
        }
    };
    if cli.format == Format::Csv && !cli.command.tabular() {
        return fail(Error::InvalidInput(format!("{name} has no CSV form")));
    }
    let threads = cli.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return fail(Error::InvalidInput(format!("thread pool: {e}"))),
    };
    let result = pool.install(|| dispatch(&cli.command, cli.format));
    match result {
        Ok(Body::Json { payload, warnings }) => Output {
            code: EXIT_OK,
            stdout: to_pretty(&envelope(name, &argv, cli.timestamp, payload, warnings)),
            stderr: String::new(),
        },
        Ok(Body::Csv(text)) => Output {
            code: EXIT_OK,
            stdout: text,
            stderr: String::new(),
        },
        Err(e) => fail(e),
    }
}

fn dispatch(cmd: &Command, format: Format) -> squaremap::Result<Body> {
    match cmd {
        Command::ClassifyPoly { q, poly, m } => classify_poly(q, poly, *m),
        Command::Classes { n, q, max_classes } => classes(*n, q, *max_classes, format),
        Command::SqrtCount { group, n, q, class } => sqrt_count(*group, *n, q, class),
        Command::AuditSquares { n, q, oracle, group } => audit_squares(*n, q, *oracle, *group, format),
        Command::RealClasses { n, q, method, oracle } => real_classes(*n, q, *method, *oracle),
        Command::Oracle {
            kind,
            n,
            q,
            report,
            cache,
            order_limit,
        } => oracle(kind, *n, *q, *report, cache.as_ref(), *order_limit, format),
    }
}

fn json_body(payload: Value) -> squaremap::Result<Body> {
    Ok(Body::Json {
        payload,
        warnings: Vec::new(),
    })
}

fn classify_poly(q: &str, poly: &str, m: u64) -> squaremap::Result<Body> {
    let field = Field::parse(q)?;
    let f = Poly::parse(&field, poly)?;
    f.require_irreducible_nonx()?;
    let class = classify2(&f)?;
    let profile = butler_profile(&f, m)?;
    let entries: Vec<Value> = profile
        .entries
        .iter()
        .map(|e| {
            json!({
                "degree": e.degree.to_string(),
                "count": e.count.to_string(),
                "root_order": e.root_order.to_string(),
            })
        })
        .collect();
    let mut payload = Map::new();
    payload.insert("q".into(), json!(field.order().to_string()));
    payload.insert("poly".into(), json!(f.to_string()));
    payload.insert("pretty".into(), json!(f.pretty()));
    payload.insert("degree".into(), json!(f.deg().to_string()));
    payload.insert("root_order".into(), json!(profile.t.to_string()));
    payload.insert("classification".into(), json!(class.label()));
    payload.insert("f_of_x2".into(), json!(f.substitute_power(2).to_string()));
    payload.insert(
        "factors_of_f_of_x2".into(),
        json!(class.factors().iter().map(|g| g.to_string()).collect::<Vec<_>>()),
    );
    payload.insert(
        "butler_profile".into(),
        json!({
            "m": profile.m.to_string(),
            "m1": profile.m1.to_string(),
            "m2": profile.m2.to_string(),
            "t": profile.t.to_string(),
            "entries": entries,
        }),
    );
    payload.insert("butler_agrees_with_factorization".into(), json!(butler_agrees(&f, m)?));
    let self_rec = is_self_reciprocal(&f)?;
    payload.insert("self_reciprocal".into(), json!(self_rec));
    if self_rec {
        payload.insert("star_classification".into(), json!(classify2_star(&f)?.star_label()));
    }
    if field.base_order().is_some() {
        let self_conj = is_self_conjugate(&f)?;
        payload.insert("self_conjugate".into(), json!(self_conj));
        if self_conj {
            payload.insert("tilde_classification".into(), json!(classify2_tilde(&f)?.tilde_label()));
        }
    }
    json_body(Value::Object(payload))
}

fn class_row(row: &squaremap::real_classes::ClassRow) -> Value {
    json!({
        "class": row.data.to_json(),
        "size": row.size.to_string(),
        "centralizer": centralizer_order(&row.data).to_string(),
        "element_order": row.order.to_string(),
        "real": row.real,
        "square_roots": row.square_roots.to_string(),
    })
}

fn write_csv(header: &[String], rows: &[Vec<String>]) -> squaremap::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn classes(n: u32, q: &str, max_classes: u64, format: Format) -> squaremap::Result<Body> {
    let field = Field::parse(q)?;
    let count = squaremap::gl_classes::count_classes(n, field.order() as u64);
    if count > max_classes.into() {
        return Err(squaremap::Error::BoundExceeded {
            what: "number of classes",
            value: count.to_string(),
            limit: max_classes.to_string(),
        });
    }
    let table = ClassTable::build(n, &field)?;
    if format == Format::Csv {
        let header: Vec<String> = ["index", "class", "size", "centralizer", "element_order", "real", "square_roots"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let rows: Vec<Vec<String>> = table
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                vec![
                    i.to_string(),
                    r.data.to_string(),
                    r.size.to_string(),
                    centralizer_order(&r.data).to_string(),
                    r.order.to_string(),
                    r.real.to_string(),
                    r.square_roots.to_string(),
                ]
            })
            .collect();
        return Ok(Body::Csv(write_csv(&header, &rows)?));
    }
    json_body(json!({
        "n": n.to_string(),
        "q": field.order().to_string(),
        "group_order": table.group_order().to_string(),
        "class_count": table.rows.len().to_string(),
        "classes": table.rows.iter().map(class_row).collect::<Vec<_>>(),
    }))
}

fn parse_class(field: &Field, n: u32, text: &str) -> squaremap::Result<GLClassData> {
    let data = GLClassData::parse_json(field, text)?;
    if data.dim() != n {
        return Err(Error::InvalidClassData(format!(
            "class has dimension {} but --n is {n}",
            data.dim()
        )));
    }
    Ok(data)
}

fn sqrt_count(group: SqrtGroup, n: u32, q: &str, class: &str) -> squaremap::Result<Body> {
    let base = Field::parse(q)?;
    match group {
        SqrtGroup::Gl => {
            let data = parse_class(&base, n, class)?;
            let count = count_square_roots(&data)?;
            let exists = has_square_root_gl(&data)?;
            let roots: Vec<Value> = square_root_classes(&data)?
                .iter()
                .map(|r| {
                    json!({
                        "class": r.to_json(),
                        "centralizer_index": (centralizer_order(&data) / centralizer_order(r)).to_string(),
                    })
                })
                .collect();
            let paper = if exists {
                paper_count_formula(&data)?.render()
            } else {
                "not applicable: no square root".to_string()
            };
            let mut warnings = Vec::new();
            if exists && paper != count.to_string() {
                warnings.push(format!("printed closed form gives {paper}, the centralizer count is {count}"));
            }
            Ok(Body::Json {
                payload: json!({
                    "group": "GL",
                    "n": n.to_string(),
                    "q": base.order().to_string(),
                    "class": data.to_json(),
                    "count": count.to_string(),
                    "has_square_root": exists,
                    "root_classes": roots,
                    "paper_count_formula": paper,
                }),
                warnings,
            })
        }
        SqrtGroup::U => {
            let q = base.order() as u64;
            let field = Field::of_order(q * q)?;
            let data = parse_class(&field, n, class)?;
            json_body(json!({
                "group": "U",
                "n": n.to_string(),
                "q": q.to_string(),
                "class": data.to_json(),
                "has_square_root": has_square_root_unitary(&data)?,
                "basis": "printed unitary criterion; existence only",
            }))
        }
        SqrtGroup::Sp => {
            let data = parse_class(&base, n, class)?;
            json_body(json!({
                "group": "Sp",
                "n": n.to_string(),
                "q": base.order().to_string(),
                "class": data.to_json(),
                "has_square_root": has_square_root_symplectic(&data)?,
                "basis": "printed symplectic criterion; existence only",
            }))
        }
    }
}

fn report_csv(report: &AuditReport) -> squaremap::Result<String> {
    let mut value_keys = BTreeSet::new();
    let mut agreement_keys = BTreeSet::new();
    for r in &report.records {
        value_keys.extend(r.values.keys().cloned());
        agreement_keys.extend(r.agreement.keys().cloned());
    }
    let mut header = vec!["class".to_string()];
    header.extend(value_keys.iter().cloned());
    header.extend(agreement_keys.iter().map(|k| format!("agree:{k}")));
    let rows: Vec<Vec<String>> = report
        .records
        .iter()
        .map(|r| {
            let class: Vec<String> = r
                .class
                .entries
                .iter()
                .map(|e| format!("{}:{}", e.poly, e.partition))
                .collect();
            let mut row = vec![class.join(" ")];
            row.extend(value_keys.iter().map(|k| r.values.get(k).cloned().unwrap_or_default()));
            row.extend(
                agreement_keys
                    .iter()
                    .map(|k| r.agreement.get(k).map(|b| b.to_string()).unwrap_or_default()),
            );
            row
        })
        .collect();
    write_csv(&header, &rows)
}

fn report_body(report: AuditReport, format: Format) -> squaremap::Result<Body> {
    if format == Format::Csv {
        return Ok(Body::Csv(report_csv(&report)?));
    }
    let warnings = report.warnings();
    let payload = serde_json::to_value(&report).map_err(|e| Error::Invariant(e.to_string()))?;
    Ok(Body::Json { payload, warnings })
}

fn audit_squares(n: u32, q: &str, oracle: bool, group: SqrtGroup, format: Format) -> squaremap::Result<Body> {
    let field = Field::parse(q)?;
    let report = match group {
        SqrtGroup::Gl => audit_square_counts(n, &field, oracle)?,
        SqrtGroup::U => audit_square_existence(&GroupSpec::new(GroupKind::U, n, field.order() as u64)?)?,
        SqrtGroup::Sp => audit_square_existence(&GroupSpec::new(GroupKind::Sp, n, field.order() as u64)?)?,
    };
    report_body(report, format)
}

fn real_classes(n: u32, q: &str, method: Method, oracle: bool) -> squaremap::Result<Body> {
    let field = Field::parse(q)?;
    let audit = audit_real_counts(n, &field, oracle)?;
    let record = &audit.records[0];
    let v = |k: &str| json!(record.values[k]);
    let payload = match method {
        Method::Direct => json!({ "method": "direct", "real_classes": v("direct") }),
        Method::Ms => json!({
            "method": "ms",
            "real_classes": v("ms"),
            "s2": v("s2"),
            "group_order": v("group_order"),
        }),
        Method::Theorem => json!({
            "method": "theorem",
            "real_classes": v("direct"),
            "theorem": {
                Convention::ExactOrder.label(): v("theorem_exact-order"),
                Convention::OrderDividing.label(): v("theorem_order-dividing"),
            },
            "agreement": {
                Convention::ExactOrder.label(): record.agreement[CMP_THEOREM_EXACT],
                Convention::OrderDividing.label(): record.agreement[CMP_THEOREM_DIVIDING],
            },
        }),
        Method::GfAudit | Method::All => {
            let mut p = serde_json::to_value(&audit).map_err(|e| Error::Invariant(e.to_string()))?;
            p["method"] = json!(if method == Method::All { "all" } else { "gf-audit" });
            p["real_classes"] = v("direct");
            p
        }
    };
    Ok(Body::Json {
        payload,
        warnings: audit.warnings(),
    })
}

fn matrix_rows(m: &Matrix) -> Vec<String> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m.get(i, j).to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn oracle(
    kind: &str,
    n: u32,
    q: u64,
    report: Report,
    cache: Option<&PathBuf>,
    order_limit: u64,
    format: Format,
) -> squaremap::Result<Body> {
    let kind = GroupKind::parse(kind)?;
    let spec = GroupSpec::with_order_limit(kind, n, q, order_limit)?;
    let table = match cache {
        Some(path) => ElementTable::load_or_enumerate(&spec, path)?,
        None => ElementTable::enumerate(&spec)?,
    };
    let fibers = brute_oracle::square_fiber_counts(&table);
    let mut payload = Map::new();
    payload.insert("group".into(), json!(kind.label()));
    payload.insert("n".into(), json!(n.to_string()));
    payload.insert("q".into(), json!(q.to_string()));
    payload.insert("order".into(), json!(table.len().to_string()));
    match report {
        Report::S2 => {
            let s2 = brute_oracle::s2_oracle(&table, &fibers);
            payload.insert("s2".into(), json!(s2.to_string()));
            let classes = brute_oracle::conjugacy_classes(&table)?;
            let real = brute_oracle::real_classes_oracle(&table, &classes);
            payload.insert("real_classes".into(), json!(real.to_string()));
            payload.insert("s2_equals_order_times_real".into(), json!(s2 == (real as u128 * table.len() as u128).into()));
        }
        Report::Real => {
            let classes = brute_oracle::conjugacy_classes(&table)?;
            payload.insert("class_count".into(), json!(classes.len().to_string()));
            let real = brute_oracle::real_classes_oracle(&table, &classes);
            payload.insert("real_classes".into(), json!(real.to_string()));
        }
        Report::Classes | Report::Fibers => {
            let classes = brute_oracle::conjugacy_classes(&table)?;
            let inverses = table.inverses();
            let mut rows = Vec::with_capacity(classes.len());
            for (c, (&rep, &size)) in classes.representatives.iter().zip(&classes.sizes).enumerate() {
                let g = table.element(rep as usize);
                let real = classes.class_of[inverses[rep as usize] as usize] == c as u32;
                let data = brute_oracle::class_data_of_element(&g)?;
                rows.push((c, g, size, fibers[rep as usize], real, data));
            }
            if format == Format::Csv {
                let header: Vec<String> = ["index", "representative", "class_data", "size", "fiber", "real"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                let table_rows: Vec<Vec<String>> = rows
                    .iter()
                    .map(|(c, g, size, fib, real, data)| {
                        vec![
                            c.to_string(),
                            matrix_rows(g).join(";"),
                            data.to_string(),
                            size.to_string(),
                            fib.to_string(),
                            real.to_string(),
                        ]
                    })
                    .collect();
                return Ok(Body::Csv(write_csv(&header, &table_rows)?));
            }
            payload.insert("class_count".into(), json!(classes.len().to_string()));
            payload.insert(
                "fiber_total".into(),
                json!(fibers.iter().map(|&f| f as u128).sum::<u128>().to_string()),
            );
            let list: Vec<Value> = rows
                .iter()
                .map(|(c, g, size, fib, real, data)| {
                    let mut o = Map::new();
                    o.insert("index".into(), json!(c.to_string()));
                    o.insert("representative".into(), json!(matrix_rows(g)));
                    o.insert("size".into(), json!(size.to_string()));
                    o.insert("fiber".into(), json!(fib.to_string()));
                    if report == Report::Classes {
                        o.insert("real".into(), json!(real));
                        o.insert("class_data".into(), serde_json::to_value(data.to_json()).expect("serializable"));
                    }
                    Value::Object(o)
                })
                .collect();
            payload.insert("classes".into(), json!(list));
        }
    }
    json_body(Value::Object(payload))
}
