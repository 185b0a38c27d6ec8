//! Command-line front end for the map-counting engine.
//!
//! Subcommands mirror the pipeline: `curve` solves the disc data and dumps
//! both spectral curves, `tr` runs the recursion and dumps
//! multidifferentials, `extract` reads graded count tables out of them,
//! `oracle` enumerates the same counts by brute force, `verify` runs the
//! full identity suite, and `report` combines everything into a summary.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error, 3 degenerate-parameter error.

use clap::{Args, Parser, Subcommand};
use fsmaps_core::census;
use fsmaps_core::curve::{build_curves, solve_disc_data, CurveRole, Potential, SpectralCurve};
use fsmaps_core::error::AlgError;
use fsmaps_core::extract;
use fsmaps_core::rational::{rat_parse, Rat};
use fsmaps_core::recursion::{Engine, Form, MultiDiff};
use fsmaps_core::series::Series;
use fsmaps_core::table::{CountTable, Profile, TableKind};
use fsmaps_core::verify::{run_verify, VerifyConfig};
use serde_json::{json, Map, Value};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fsmaps",
    version,
    about = "exact counting of ordinary and fully simple maps"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Quartic coupling t4 as "p/q"
    #[arg(long)]
    t4: Option<String>,
    /// Cubic coupling t3 as "p/q"
    #[arg(long)]
    t3: Option<String>,
    /// Extra couplings "j=p/q", repeatable
    #[arg(long = "coupling")]
    couplings: Vec<String>,
    /// Truncation order of the graded series
    #[arg(long, default_value_t = 16)]
    order: i64,
    /// Internal truncation used by the recursion pipeline
    #[arg(long)]
    internal_order: Option<i64>,
    /// Euler-characteristic bound 2g-2+n for the recursion
    #[arg(long, default_value_t = 3)]
    chi: i64,
    /// Boundary-degree cap for extraction and relations
    #[arg(long, default_value_t = 8)]
    kmax: usize,
    /// Oriented-edge cap for the census
    #[arg(long, default_value_t = 16)]
    edge_cap: usize,
    /// JSON config file; explicit flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for dumps and reports
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the disc data and dump both spectral curves
    Curve(Common),
    /// Run the recursion and dump multidifferentials
    Tr {
        #[command(flatten)]
        common: Common,
        /// Which curve to run: ordinary, fully-simple or both
        #[arg(long, default_value = "both")]
        side: String,
    },
    /// Extract a graded count table for one boundary tuple
    Extract {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "ordinary")]
        side: String,
        #[arg(long, default_value_t = 0)]
        g: u32,
        /// Boundary degrees, comma separated
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        /// Restrict output to one coupling layer, e.g. "t0"
        #[arg(long)]
        layer: Option<String>,
    },
    /// Enumerate counts by brute force over permutation triples
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "ordinary")]
        kind: String,
        #[arg(long, default_value_t = 0)]
        g: u32,
        #[arg(long, value_delimiter = ',', default_values_t = Vec::<usize>::new())]
        k: Vec<usize>,
        /// Exact internal-face profile "deg:count,deg:count"
        #[arg(long)]
        faces: Option<String>,
    },
    /// Run the identity suite; exit 0 only if every check passes
    Verify(Common),
    /// Combined human-readable summary (verify plus headline tables)
    Report(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                AlgError::DegenerateRamification { .. }
                | AlgError::ParameterCollision { .. }
                | AlgError::NotInvertible { .. }
                | AlgError::NoConvergence => 3u8,
                _ => 2u8,
            })
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, AlgError> {
    match cli.cmd {
        Cmd::Curve(common) => cmd_curve(&common),
        Cmd::Tr { common, side } => cmd_tr(&common, &side),
        Cmd::Extract {
            common,
            side,
            g,
            k,
            layer,
        } => cmd_extract(&common, &side, g, &k, layer.as_deref()),
        Cmd::Oracle {
            common,
            kind,
            g,
            k,
            faces,
        } => cmd_oracle(&common, &kind, g, &k, faces.as_deref()),
        Cmd::Verify(common) => cmd_verify(&common),
        Cmd::Report(common) => cmd_report(&common),
    }
}

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

struct Resolved {
    potential: Potential,
    couplings: Vec<(usize, Rat)>,
    order: i64,
    internal_order: i64,
    chi: i64,
    kmax: usize,
    edge_cap: usize,
    out: Option<PathBuf>,
}

fn bad(detail: String) -> AlgError {
    AlgError::BadInput { detail }
}

fn resolve(common: &Common) -> Result<Resolved, AlgError> {
    let mut couplings: Vec<(usize, Rat)> = Vec::new();
    let mut order = common.order;
    let mut chi = common.chi;
    let mut kmax = common.kmax;
    let mut edge_cap = common.edge_cap;
    let mut internal_order = common.internal_order;
    if let Some(path) = &common.config {
        let text = fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read config {}: {e}", path.display())))?;
        let v: Value =
            serde_json::from_str(&text).map_err(|e| bad(format!("config parse: {e}")))?;
        if let Some(map) = v.get("couplings").and_then(|c| c.as_object()) {
            for (j, t) in map {
                let j: usize = j.parse().map_err(|_| bad(format!("coupling degree {j}")))?;
                let t = t.as_str().ok_or_else(|| bad("coupling value".into()))?;
                couplings.push((j, rat_parse(t)?));
            }
        }
        if let Some(x) = v.get("order").and_then(|x| x.as_i64()) {
            order = x;
        }
        if let Some(x) = v.get("internal_order").and_then(|x| x.as_i64()) {
            internal_order = Some(x);
        }
        if let Some(x) = v.get("chi").and_then(|x| x.as_i64()) {
            chi = x;
        }
        if let Some(x) = v.get("kmax").and_then(|x| x.as_u64()) {
            kmax = x as usize;
        }
        if let Some(x) = v.get("edge_cap").and_then(|x| x.as_u64()) {
            edge_cap = x as usize;
        }
    }
    if let Some(t) = &common.t3 {
        couplings.push((3, rat_parse(t)?));
    }
    if let Some(t) = &common.t4 {
        couplings.push((4, rat_parse(t)?));
    }
    for c in &common.couplings {
        let (j, t) = c
            .split_once('=')
            .ok_or_else(|| bad(format!("coupling syntax {c}, expected j=p/q")))?;
        let j: usize = j.parse().map_err(|_| bad(format!("coupling degree {j}")))?;
        couplings.push((j, rat_parse(t)?));
    }
    let potential = Potential::new(&couplings)?;
    if order < 2 {
        return Err(bad(format!("order {order} below 2")));
    }
    Ok(Resolved {
        potential,
        couplings,
        order,
        internal_order: internal_order.unwrap_or(order * 2),
        chi,
        kmax,
        edge_cap,
        out: common.out.clone(),
    })
}

fn config_json(r: &Resolved) -> Value {
    let mut cs = Map::new();
    for (j, t) in &r.couplings {
        cs.insert(j.to_string(), Value::String(t.to_string()));
    }
    json!({
        "couplings": cs,
        "order": r.order,
        "internal_order": r.internal_order,
        "chi": r.chi,
        "kmax": r.kmax,
        "edge_cap": r.edge_cap,
    })
}

fn write_out(out: &Option<PathBuf>, name: &str, contents: &str) -> Result<(), AlgError> {
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| bad(format!("mkdir {}: {e}", dir.display())))?;
        let path: PathBuf = dir.join(name);
        fs::write(&path, contents).map_err(|e| bad(format!("write {}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// JSON rendering of core objects
// ---------------------------------------------------------------------------

fn series_json(s: &Series) -> Value {
    let mut m = Map::new();
    for (e, c) in s.iter() {
        m.insert(e.to_string(), Value::String(c.to_string()));
    }
    let mut v = Map::new();
    v.insert("coefficients".into(), Value::Object(m));
    if let Some(t) = s.truncation() {
        v.insert("truncation".into(), json!(t));
    }
    Value::Object(v)
}

fn curve_json(c: &SpectralCurve) -> Value {
    let mut cover = Map::new();
    for (e, s) in &c.cover.terms {
        cover.insert(e.to_string(), series_json(s));
    }
    json!({
        "role": c.role.name(),
        "a": series_json(&c.a),
        "c": series_json(&c.c),
        "cover": Value::Object(cover),
        "ram_poly": c.ram.coeffs.iter().map(series_json).collect::<Vec<_>>(),
    })
}

fn multidiff_json(md: &MultiDiff) -> Value {
    let form = match &md.form {
        Form::Disc => json!({"kind": "disc"}),
        Form::Cylinder => json!({"kind": "cylinder"}),
        Form::Stable { num, dens } => {
            let numerator: Vec<Value> = num
                .terms
                .iter()
                .map(|(k, v)| json!({"monomial": k, "series": series_json(v)}))
                .collect();
            json!({
                "kind": "stable",
                "denominator_exponents": dens,
                "numerator": numerator,
            })
        }
    };
    json!({
        "g": md.g,
        "n": md.n,
        "curve": md.role.name(),
        "form": form,
    })
}

fn table_json(t: &CountTable) -> Value {
    let entries: Vec<Value> = t
        .entries
        .iter()
        .map(|((v, prof), c)| {
            json!({
                "V": v,
                "profile": CountTable::render_profile(prof),
                "count": c.to_string(),
            })
        })
        .collect();
    json!({
        "kind": t.kind.name(),
        "g": t.g,
        "boundary": t.boundary,
        "provenance": t.provenance.name(),
        "entries": entries,
    })
}

fn table_csv(t: &CountTable) -> String {
    let mut out = String::from("g,boundary,profile,V,count\n");
    let ks: Vec<String> = t.boundary.iter().map(|k| k.to_string()).collect();
    for ((v, prof), c) in &t.entries {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            t.g,
            ks.join(";"),
            CountTable::render_profile(prof),
            v,
            c
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn cmd_curve(common: &Common) -> Result<ExitCode, AlgError> {
    let r = resolve(common)?;
    let d = solve_disc_data(&r.potential, r.order)?;
    println!("a = {}", d.a.truncate_at(8));
    println!("c = {}", d.c.truncate_at(8));
    match build_curves(&r.potential, &d, r.order) {
        Ok((ord, exc)) => {
            let doc = json!({
                "config": config_json(&r),
                "ordinary": curve_json(&ord),
                "exchanged": curve_json(&exc),
            });
            let text = serde_json::to_string_pretty(&doc).unwrap();
            write_out(&r.out, "curves.json", &text)?;
            if r.out.is_none() {
                println!("{text}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(AlgError::DegenerateRamification { detail }) => {
            // the ordinary curve is still fine; flag the exchanged one
            let ord = SpectralCurve {
                role: CurveRole::Ordinary,
                a: d.a.clone(),
                c: d.c.clone(),
                cover: {
                    let mut x = fsmaps_core::curve::LPoly::zero();
                    x.insert_add(1, d.c.clone());
                    x.insert_add(-1, d.c.clone());
                    x.insert_add(0, d.a.clone());
                    x
                },
                cofn: fsmaps_core::curve::LPoly::zero(),
                ram: fsmaps_core::poly::Poly::zero(),
                r: r.potential.r(),
            };
            let doc = json!({
                "config": config_json(&r),
                "ordinary": curve_json(&ord),
                "exchanged": {"degenerate": detail},
            });
            let text = serde_json::to_string_pretty(&doc).unwrap();
            write_out(&r.out, "curves.json", &text)?;
            println!("exchanged curve degenerate: {detail}");
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => Err(e),
    }
}

fn side_role(side: &str) -> Result<CurveRole, AlgError> {
    match side {
        "ordinary" => Ok(CurveRole::Ordinary),
        "fully-simple" | "fully_simple" | "exchanged" => Ok(CurveRole::Exchanged),
        other => Err(bad(format!("unknown side {other}"))),
    }
}

fn cmd_tr(common: &Common, side: &str) -> Result<ExitCode, AlgError> {
    let r = resolve(common)?;
    let roles: Vec<CurveRole> = match side {
        "both" => vec![CurveRole::Ordinary, CurveRole::Exchanged],
        s => vec![side_role(s)?],
    };
    let d = solve_disc_data(&r.potential, r.internal_order)?;
    let (ord, exc) = build_curves(&r.potential, &d, r.internal_order)?;
    let mut dumps = Vec::new();
    for role in roles {
        let curve = match role {
            CurveRole::Ordinary => &ord,
            CurveRole::Exchanged => &exc,
        };
        let mut engine = Engine::new(curve, r.chi)?;
        for g in 0..=((r.chi + 1) / 2) as u32 {
            for n in 1..=(r.chi + 2) as usize {
                let chi = 2 * g as i64 - 2 + n as i64;
                if chi < 1 || chi > r.chi {
                    continue;
                }
                let md = engine.omega(g, n)?;
                dumps.push(multidiff_json(md));
                eprintln!("computed omega[{}] g={g} n={n}", role.name());
            }
        }
    }
    let doc = json!({"config": config_json(&r), "multidifferentials": dumps});
    let text = serde_json::to_string_pretty(&doc).unwrap();
    write_out(&r.out, "multidiffs.json", &text)?;
    if r.out.is_none() {
        println!("{text}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_extract(
    common: &Common,
    side: &str,
    g: u32,
    ks: &[usize],
    layer: Option<&str>,
) -> Result<ExitCode, AlgError> {
    let r = resolve(common)?;
    if ks.is_empty() {
        return Err(bad("at least one boundary degree required".into()));
    }
    let role = side_role(side)?;
    let n = ks.len();
    let chi = 2 * g as i64 - 2 + n as i64;
    let d = solve_disc_data(&r.potential, r.internal_order)?;
    let (ord, exc) = build_curves(&r.potential, &d, r.internal_order)?;
    let curve = match role {
        CurveRole::Ordinary => ord,
        CurveRole::Exchanged => exc,
    };
    let md = if chi < 1 {
        MultiDiff {
            g,
            n,
            role,
            form: if n == 1 { Form::Disc } else { Form::Cylinder },
        }
    } else {
        let mut engine = Engine::new(&curve, chi)?;
        engine.omega(g, n)?.clone()
    };
    let table = extract::boundary_table(&r.potential, &curve, &md, ks)?;
    match layer {
        Some("t0") => {
            // coupling-free layer: Euler's relation fixes the vertex count
            let ksum: i64 = ks.iter().map(|k| *k as i64).sum();
            let v = ksum / 2 - n as i64 + 2 - 2 * g as i64;
            if v < 1 || ksum % 2 == 1 {
                println!("0");
            } else {
                println!("{}", table.get(v as u32, &vec![]));
            }
        }
        Some(other) => return Err(bad(format!("unknown layer {other}"))),
        None => {
            print!("{}", table_csv(&table));
            let doc = json!({"config": config_json(&r), "table": table_json(&table)});
            write_out(
                &r.out,
                "extract.json",
                &serde_json::to_string_pretty(&doc).unwrap(),
            )?;
            write_out(&r.out, "extract.csv", &table_csv(&table))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_profile(faces: &str) -> Result<Profile, AlgError> {
    let mut profile = Vec::new();
    for part in faces.split(',') {
        let (d, c) = part
            .split_once(':')
            .ok_or_else(|| bad(format!("profile syntax {part}, expected deg:count")))?;
        let d: usize = d.parse().map_err(|_| bad(format!("face degree {d}")))?;
        let c: usize = c.parse().map_err(|_| bad(format!("face count {c}")))?;
        if c > 0 {
            profile.push((d, c));
        }
    }
    profile.sort();
    Ok(profile)
}

fn cmd_oracle(
    common: &Common,
    kind: &str,
    g: u32,
    ks: &[usize],
    faces: Option<&str>,
) -> Result<ExitCode, AlgError> {
    let r = resolve(common)?;
    let kind = match kind {
        "ordinary" => TableKind::Ordinary,
        "fully-simple" | "fully_simple" => TableKind::FullySimple,
        "closed" => TableKind::Closed,
        other => return Err(bad(format!("unknown kind {other}"))),
    };
    if kind == TableKind::Closed && !ks.is_empty() {
        return Err(bad("closed maps take no boundary degrees".into()));
    }
    let table = match faces {
        Some(f) => {
            let profile = parse_profile(f)?;
            let filter = census::MapFilter {
                genus: g,
                boundary: ks.to_vec(),
                profile: profile.clone(),
            };
            let counts = census::enumerate(&filter, r.edge_cap)?;
            let mut t =
                CountTable::new(kind, g, ks.to_vec(), fsmaps_core::table::Provenance::Census);
            if let Some(v) = filter.vertex_count() {
                let value = match kind {
                    TableKind::FullySimple => counts.fully_simple,
                    _ => counts.ordinary,
                };
                t.insert(v, profile, value);
            }
            t
        }
        None => {
            let allowed: Vec<usize> = r.potential.couplings().map(|(j, _)| *j).collect();
            census::oracle_counts(kind, g, ks, &allowed, r.edge_cap)?
        }
    };
    print!("{}", table_csv(&table));
    let doc = json!({"config": config_json(&r), "table": table_json(&table)});
    write_out(
        &r.out,
        "oracle.json",
        &serde_json::to_string_pretty(&doc).unwrap(),
    )?;
    write_out(&r.out, "oracle.csv", &table_csv(&table))?;
    Ok(ExitCode::SUCCESS)
}

fn verify_config(r: &Resolved) -> VerifyConfig {
    VerifyConfig {
        couplings: r.couplings.clone(),
        trunc: r.order,
        trunc_internal: r.internal_order,
        chi: r.chi,
        kmax: r.kmax,
        edge_cap: r.edge_cap,
    }
}

fn cmd_verify(common: &Common) -> Result<ExitCode, AlgError> {
    let r = resolve(common)?;
    let report = run_verify(&verify_config(&r))?;
    print!("{}", report.render_text());
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
        .collect();
    let doc = json!({
        "config": config_json(&r),
        "resolved": report.config,
        "checks": checks,
        "all_passed": report.all_passed(),
    });
    write_out(
        &r.out,
        "verify.json",
        &serde_json::to_string_pretty(&doc).unwrap(),
    )?;
    write_out(&r.out, "verify.txt", &report.render_text())?;
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_report(common: &Common) -> Result<ExitCode, AlgError> {
    let r = resolve(common)?;
    let mut text = String::new();
    text.push_str("== curve ==\n");
    let d = solve_disc_data(&r.potential, r.order)?;
    text.push_str(&format!(
        "a = {}\nc = {}\n",
        d.a.truncate_at(10),
        d.c.truncate_at(10)
    ));
    text.push_str("\n== headline counts ==\n");
    {
        let d = solve_disc_data(&r.potential, r.internal_order)?;
        let (ord, exc) = build_curves(&r.potential, &d, r.internal_order)?;
        for (curve, label) in [(&ord, "ordinary"), (&exc, "fully simple")] {
            let md = MultiDiff {
                g: 0,
                n: 1,
                role: curve.role,
                form: Form::Disc,
            };
            let t = extract::boundary_table(&r.potential, curve, &md, &[2])?;
            text.push_str(&format!("{label} discs, boundary 2:\n{}", table_csv(&t)));
        }
    }
    text.push_str("\n== identity suite ==\n");
    let report = run_verify(&verify_config(&r))?;
    text.push_str(&report.render_text());
    print!("{text}");
    write_out(&r.out, "report.txt", &text)?;
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
