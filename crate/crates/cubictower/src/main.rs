use clap::{Parser, Subcommand, ValueEnum};
use cubictower::arith::{cubic_exponent, factorize};
use cubictower::census::{
    admissible_conductors, doublet_census, embedded_fixtures, load_fixture_dir, multiplet_census, quartet_census,
    verify_fixtures, CategoryCensus, FixtureReport, MultipletCensus,
};
use cubictower::classify::{classify, rank_distribution, Label};
use cubictower::conductor::decompose;
use cubictower::f3geometry::{bundles, lines, planes};
use cubictower::galois_action::{named_group, sigma_census};
use cubictower::residue_graph::symbol_matrix;
use cubictower::tower_rules::{quartet_rule_for, QuartetContext, RuleOutcome};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const FIXTURE_ENV: &str = "CUBICTOWER_FIXTURES";

#[derive(Parser)]
#[command(name = "cubictower", version, about = "Conductors, residue graphs and census tables of cyclic fields of odd prime degree")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for census runs; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List admissible conductors below a bound with t and multiplicity.
    Sieve {
        #[arg(long, default_value_t = 3)]
        ell: u64,
        #[arg(long)]
        max: u64,
    },
    /// Factorization, symbol matrix, graph, category, ranks and tower rule of a conductor.
    Classify {
        conductor: u64,
        /// Rule context, e.g. "v=1" or "ati=(0)^3;(1^2)^8,(1^3)^2".
        #[arg(long)]
        context: Option<String>,
    },
    /// Power residue character of R modulo M.
    Symbol { ell: u64, modulus: u64, residue: i64 },
    /// Census tables below a bound.
    Census {
        #[arg(long, default_value_t = 3)]
        ell: u64,
        #[arg(long)]
        max: u64,
        /// Category and graph table of three-prime conductors (ell = 3).
        #[arg(long)]
        by_category: bool,
        /// Doublet graph counts (ell = 3).
        #[arg(long)]
        doublets: bool,
    },
    /// Verify fixture tables; defaults to $CUBICTOWER_FIXTURES, then the built-in tables.
    Fixtures { path: Option<PathBuf> },
    /// Automorphism census with trace conditions of degree 3.
    Sigma {
        #[arg(long)]
        group: String,
    },
    /// Lines, planes and bundles of the space of order 27.
    Geometry,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

// A closed pipe (`| head`) ends the program quietly instead of panicking.
fn out(s: &str) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(s.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

fn emit(fmt: Format, value: &Value, text: impl FnOnce() -> String, csv: impl FnOnce() -> String) {
    match fmt {
        Format::Json => out(&format!("{}\n", serde_json::to_string_pretty(value).expect("json"))),
        Format::Text => out(&text()),
        Format::Csv => out(&csv()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            return fail(e);
        }
    }
    let fmt = cli.format;
    match cli.command {
        Command::Sieve { ell, max } => sieve(fmt, ell, max),
        Command::Classify { conductor, context } => classify_cmd(fmt, conductor, context.as_deref()),
        Command::Symbol { ell, modulus, residue } => match cubic_exponent(ell, modulus, residue) {
            Ok(ch) => {
                let v = serde_json::to_value(&ch).expect("json");
                let exp = ch.exponent.map_or("-".to_string(), |e| e.to_string());
                emit(
                    fmt,
                    &v,
                    || format!("({residue}/{modulus})_{ell}: exponent {exp}, {:?}, root {}\n", ch.coarse, ch.root),
                    || format!("ell,modulus,residue,root,exponent\n{ell},{modulus},{residue},{},{exp}\n", ch.root),
                );
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Census { ell, max, by_category, doublets } => census_cmd(fmt, ell, max, by_category, doublets),
        Command::Fixtures { path } => fixtures_cmd(fmt, path),
        Command::Sigma { group } => {
            let g = match named_group(&group) {
                Ok(g) => g,
                Err(e) => return fail(e),
            };
            match sigma_census(&g, 3) {
                Ok(c) => {
                    let v = json!({"group": g.name, "order": g.order, "census": c});
                    emit(
                        fmt,
                        &v,
                        || format!("{} (order {}): c={}, o={}, w={}, s={}\n", g.name, g.order, c.aut_order, c.order3_count, c.weak_count, c.strong_count),
                        || format!("group,order,c,o,w,s\n{},{},{},{},{},{}\n", g.name, g.order, c.aut_order, c.order3_count, c.weak_count, c.strong_count),
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Geometry => {
            let (ls, ps, bs) = (lines(), planes(), bundles());
            let v = json!({"lines": ls, "planes": ps, "bundles": bs});
            let text = || {
                let mut s = String::new();
                for l in &ls {
                    s += &format!("L{:<2} {:<5} {:?}\n", l.index, l.name, l.generator);
                }
                for p in &ps {
                    s += &format!("P{:<2} <{},{}> T={:?}\n", p.index, p.h, p.k, p.lines);
                }
                for b in &bs {
                    s += &format!("B{:<2} {:?}\n", b.index, b.planes);
                }
                s
            };
            let csv = || {
                let mut s = String::from("kind,index,data\n");
                for l in &ls {
                    s += &format!("line,{},{}\n", l.index, l.name);
                }
                for p in &ps {
                    s += &format!("plane,{},\"{},{};{:?}\"\n", p.index, p.h, p.k, p.lines);
                }
                for b in &bs {
                    s += &format!("bundle,{},\"{:?}\"\n", b.index, b.planes);
                }
                s
            };
            emit(fmt, &v, text, csv);
            ExitCode::SUCCESS
        }
    }
}

fn sieve(fmt: Format, ell: u64, max: u64) -> ExitCode {
    if ell < 3 || !cubictower::arith::is_prime(ell) {
        return fail(format!("{ell} is not an odd prime"));
    }
    let conds = match admissible_conductors(ell, max) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let m = |t: usize| (ell - 1).pow(t as u32 - 1);
    match fmt {
        Format::Json => {
            let v: Vec<Value> = conds.iter().map(|f| json!({"conductor": f.value, "t": f.factors.len(), "multiplicity": m(f.factors.len())})).collect();
            out(&format!("{}\n", serde_json::to_string_pretty(&v).expect("json")));
        }
        Format::Csv => {
            let mut s = String::from("conductor,t,multiplicity\n");
            for f in &conds {
                writeln!(s, "{},{},{}", f.value, f.factors.len(), m(f.factors.len())).unwrap();
            }
            out(&s);
        }
        Format::Text => {
            let mut s = String::new();
            for f in &conds {
                writeln!(s, "{:>8}  t={}  m={}  {}", f.value, f.factors.len(), m(f.factors.len()), f).unwrap();
            }
            out(&s);
        }
    }
    ExitCode::SUCCESS
}

fn classify_cmd(fmt: Format, c: u64, context: Option<&str>) -> ExitCode {
    let cond = match decompose(3, c) {
        Ok(k) => k,
        Err(e) => return fail(e),
    };
    let cg = match classify(&cond) {
        Ok(cg) => cg,
        Err(e) => return fail(e),
    };
    let matrix = if cond.t >= 2 { symbol_matrix(&cond).ok() } else { None };
    let ranks = rank_distribution(&cg.label);
    let (rule, assumed) = match cg.label {
        Label::Quartet { .. } => {
            let ctx = match context.map(QuartetContext::parse).transpose() {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            match ctx {
                Some(ctx) => (Some(quartet_rule_for(c, cg.label, &ctx)), None),
                None => {
                    let plain = quartet_rule_for(c, cg.label, &QuartetContext::default());
                    if plain.prediction().is_some() {
                        (Some(plain), None)
                    } else {
                        let v1 = QuartetContext { v: Some(1), ati: None };
                        match quartet_rule_for(c, cg.label, &v1) {
                            r @ RuleOutcome::Rule(_) => (Some(r), Some("v=1")),
                            _ => (Some(plain), None),
                        }
                    }
                }
            }
        }
        _ => (None, None),
    };
    let ranks_s = ranks.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    let v = json!({
        "conductor": c,
        "factorization": factorize(c).to_string(),
        "ramified_primes": cond.ramified_primes,
        "multiplicity": cond.multiplicity(),
        "symbol_matrix": matrix.as_ref().map(|m| &m.a),
        "label": cg.label.to_string(),
        "symbol": cg.symbol,
        "ranks": ranks,
        "rule": rule,
        "assumed_context": assumed,
    });
    let text = || {
        let head = match cg.label {
            Label::Quartet { category, graph } => format!("Category {}, Graph {graph}", category.roman()),
            Label::Doublet { graph } => format!("Doublet, Graph {}", graph as u8 + 1),
            Label::Singlet => "Singlet".to_string(),
        };
        let mut s = format!("{head}, {}, ranks ({ranks_s})", cg.symbol);
        if let Some(r) = &rule {
            s += &format!(", rule: {r}");
            if let Some(a) = assumed {
                s += &format!(" (assuming {a})");
            }
        }
        s += &format!("\nfactorization {}, multiplicity {}\n", factorize(c), cond.multiplicity());
        if let Some(m) = &matrix {
            for (i, row) in m.a.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|e| e.map_or("-".into(), |x| x.to_string())).collect();
                s += &format!("{:>6} | {}\n", m.primes[i], cells.join(" "));
            }
        }
        s
    };
    let csv = || {
        let rule_s = rule.as_ref().map(|r| r.to_string()).unwrap_or_default();
        format!("conductor,label,symbol,ranks,rule\n{c},{},\"{}\",\"{ranks_s}\",\"{rule_s}\"\n", cg.label, cg.symbol)
    };
    emit(fmt, &v, text, csv);
    ExitCode::SUCCESS
}

fn census_cmd(fmt: Format, ell: u64, max: u64, by_category: bool, doublets: bool) -> ExitCode {
    if (by_category || doublets) && ell != 3 {
        return fail("category and doublet censuses need --ell 3");
    }
    if by_category {
        return match quartet_census(max) {
            Ok(c) => {
                print_category(fmt, &c);
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        };
    }
    if doublets {
        return match doublet_census(max) {
            Ok(d) => {
                let v = serde_json::to_value(d).expect("json");
                emit(
                    fmt,
                    &v,
                    || format!("c < {}: G1 {}, G2 {}, G3 {}, total {}\n", d.bound, d.g1, d.g2, d.g3, d.g1 + d.g2 + d.g3),
                    || format!("graph,conductors\nG1,{}\nG2,{}\nG3,{}\n", d.g1, d.g2, d.g3),
                );
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        };
    }
    if ell < 3 || !cubictower::arith::is_prime(ell) {
        return fail(format!("{ell} is not an odd prime"));
    }
    match multiplet_census(ell, max) {
        Ok(m) => {
            print_multiplets(fmt, &m);
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn print_multiplets(fmt: Format, m: &MultipletCensus) {
    let v = serde_json::to_value(m).expect("json");
    let text = || {
        let mut s = format!("ell = {}, c < {}\n{:>3} {:>12} {:>10} {:>10}\n", m.ell, m.bound, "t", "conductors", "fields", "min");
        for r in &m.rows {
            s += &format!("{:>3} {:>12} {:>10} {:>10}\n", r.t, r.conductors, r.fields, r.min.map_or("-".into(), |x| x.to_string()));
        }
        s += &format!("{:>3} {:>12} {:>10}\n", "Σ", m.total_conductors, m.total_fields);
        s
    };
    let csv = || {
        let mut s = String::from("t,conductors,fields,min\n");
        for r in &m.rows {
            s += &format!("{},{},{},{}\n", r.t, r.conductors, r.fields, r.min.map_or(String::new(), |x| x.to_string()));
        }
        s += &format!("total,{},{},\n", m.total_conductors, m.total_fields);
        s
    };
    emit(fmt, &v, text, csv);
}

fn print_category(fmt: Format, c: &CategoryCensus) {
    let mut map = serde_json::Map::new();
    for (label, cell) in c.cells.iter().chain(c.subtotals.iter()) {
        map.insert(label.clone(), json!({"conductors": cell.conductors, "fields": cell.fields, "min": cell.min}));
    }
    map.insert("total".into(), json!({"conductors": c.total.conductors, "fields": c.total.fields, "min": c.total.min}));
    let v = Value::Object(map);
    let min = |m: Option<u64>| m.map_or("-".to_string(), |x| x.to_string());
    let text = || {
        let mut s = format!("c < {}\n{:<6} {:>10} {:>8} {:>8}\n", c.bound, "graph", "conductors", "fields", "min");
        for (cat, sub) in &c.subtotals {
            for (label, cell) in c.cells.iter().filter(|(l, _)| l.split('/').next() == Some(cat.as_str())) {
                s += &format!("{:<6} {:>10} {:>8} {:>8}\n", label, cell.conductors, cell.fields, min(cell.min));
            }
            s += &format!("{:<6} {:>10} {:>8} {:>8}\n", format!("{cat}"), sub.conductors, sub.fields, min(sub.min));
        }
        s += &format!("{:<6} {:>10} {:>8} {:>8}\n", "total", c.total.conductors, c.total.fields, min(c.total.min));
        s
    };
    let csv = || {
        let mut s = String::from("label,conductors,fields,min\n");
        for (label, cell) in c.cells.iter().chain(c.subtotals.iter()) {
            s += &format!("{label},{},{},{}\n", cell.conductors, cell.fields, cell.min.map_or(String::new(), |x| x.to_string()));
        }
        s += &format!("total,{},{},{}\n", c.total.conductors, c.total.fields, c.total.min.map_or(String::new(), |x| x.to_string()));
        s
    };
    emit(fmt, &v, text, csv);
}

fn fixtures_cmd(fmt: Format, path: Option<PathBuf>) -> ExitCode {
    let dir = path.or_else(|| std::env::var_os(FIXTURE_ENV).map(PathBuf::from));
    let rows = match dir {
        Some(d) => match load_fixture_dir(&d) {
            Ok(r) => r,
            Err(e) => return fail(e),
        },
        None => embedded_fixtures().to_vec(),
    };
    let report: FixtureReport = verify_fixtures(&rows);
    let v = serde_json::to_value(&report).expect("json");
    let text = || {
        let mut s = String::new();
        for r in report.rows.iter().filter(|r| !r.passed()) {
            s += &format!("FAIL {} {}: {}\n", r.file, r.conductor, r.failures.join("; "));
        }
        s += &format!("{} passed, {} failed\n", report.passed, report.failed);
        s
    };
    let csv = || {
        let mut s = String::from("file,conductor,label,symbol,partial,groups,passed\n");
        let b = |x: Option<bool>| x.map_or(String::new(), |v| v.to_string());
        for r in &report.rows {
            s += &format!("{},{},{},{},{},{},{}\n", r.file, r.conductor, r.label_ok, r.symbol_ok, b(r.partial_ok), b(r.groups_ok), r.passed());
        }
        s
    };
    emit(fmt, &v, text, csv);
    if report.failed > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
