use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cubefar::audit::{self, Suite};
use cubefar::cells::{source_unfolding, star_unfolding_3cube, voronoi_cells_3cube, voronoi_cells_on_facet, CellComplex};
use cubefar::cube::{reduce_generic, surface_dist2, surface_dist2_3cube, DeltaPoint, Facet, FacetLabel};
use cubefar::dynamics::{iterate_orbit, OrbitOptions};
use cubefar::exact::{fmt_rat, parse_coords, parse_rat, to_f64};
use cubefar::export::{self, with_schema};
use cubefar::farthest::farthest;
use cubefar::metrics::{estimate_ratio_sampling, farthest_distance_field, radius_diameter_exact};
use cubefar::oracle::{oracle_distance_n, DEFAULT_MAX_LEN};
use cubefar::region::classify_delta;
use cubefar::{QPoint, Rat};

const DECIMALS: usize = 12;

#[derive(Parser)]
#[command(name = "cubefar", version, about = "Intrinsic geometry of the 3-cube and 4-cube boundary")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Geodesic distance between two surface points.
    Dist {
        #[arg(long, value_parser = coords)]
        p: Coords,
        #[arg(long, value_parser = coords)]
        q: Coords,
        /// Also run the brute-force unfolding oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: usize,
        /// Cube dimension (3 or 4).
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Farthest points of a point of ∂I⁴.
    Farthest {
        #[arg(long, value_parser = coords)]
        p: Coords,
        /// Include the copies under the stabilizer of p.
        #[arg(long)]
        all: bool,
    },
    /// Orbit of ι∘f.
    Orbit {
        #[arg(long, value_parser = coords)]
        p: Coords,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        #[arg(long, default_value_t = 8)]
        exact_steps: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Region of Δ containing the reduction of p.
    Classify {
        #[arg(long, value_parser = coords)]
        p: Coords,
    },
    /// Star, source and Voronoi unfoldings.
    Unfold {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_parser = coords)]
        p: Coords,
        /// Facet label for `--kind voronoi` (G, S, U, …).
        #[arg(long)]
        facet: Option<String>,
        /// Output file; an exact JSON sidecar `<out>.json` accompanies OFF output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Off)]
        format: Format,
    },
    /// Radius and diameter of ∂Iⁿ.
    Metrics {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, value_parser = rational, default_value = "1/16")]
        grid: Rat,
        /// Sample count for n ≥ 5.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the farthest-distance field (n ≤ 4) as CSV.
        #[arg(long)]
        field: Option<PathBuf>,
    },
    /// Exact audits; exit code 3 if any check fails.
    Audit {
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, value_parser = rational)]
        grid: Option<Rat>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Star3,
    Source4,
    Voronoi,
}

/// Comma-separated exact coordinates.
#[derive(Clone, Debug)]
struct Coords(Vec<Rat>);

fn coords(s: &str) -> Result<Coords, String> {
    parse_coords(s).map(Coords).map_err(|e| e.to_string())
}

fn rational(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

/// Errors caused by the arguments rather than the computation.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: cubefar::Error) -> anyhow::Error {
    anyhow!(Usage(e.to_string()))
}

fn point4(v: &[Rat]) -> anyhow::Result<QPoint<4>> {
    let q = QPoint::<4>::from_slice(v).map_err(usage)?;
    cubefar::cube::facet_of(&q).map_err(usage)?;
    Ok(q)
}

fn strs(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

fn sqrt_decimal(sq: &Rat) -> Value {
    json!({ "value": format!("{:.*}", DECIMALS, to_f64(sq).sqrt()), "decimals": DECIMALS })
}

fn facet_name(f: Facet) -> String {
    FacetLabel::from_facet(f).map_or_else(|| format!("x{}={}", f.axis, f.side), |l| l.to_string())
}

fn print(v: &Value) {
    print_text(&(serde_json::to_string_pretty(v).expect("serializable") + "\n"));
}

/// Writes to stdout, ignoring a closed pipe.
fn print_text(s: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<Usage>().is_some() { 2 } else { 1 })
        }
    }
}

fn run(cmd: Cmd) -> anyhow::Result<u8> {
    match cmd {
        Cmd::Dist { p, q, oracle, max_len, n } => cmd_dist(&p.0, &q.0, oracle, max_len, n),
        Cmd::Farthest { p, all } => cmd_farthest(&p.0, all),
        Cmd::Orbit { p, steps, exact_steps, tol, format } => cmd_orbit(&p.0, steps, exact_steps, tol, format),
        Cmd::Classify { p } => cmd_classify(&p.0),
        Cmd::Unfold { kind, p, facet, out, format } => cmd_unfold(kind, &p.0, facet.as_deref(), out.as_deref(), format),
        Cmd::Metrics { n, grid, samples, seed, field } => cmd_metrics(n, &grid, samples, seed, field.as_deref()),
        Cmd::Audit { suite, grid, seed } => cmd_audit(&suite, grid, seed),
    }
}

fn cmd_dist(p: &[Rat], q: &[Rat], oracle: bool, max_len: usize, n: usize) -> anyhow::Result<u8> {
    let sq = match n {
        4 => surface_dist2(&point4(p)?, &point4(q)?).map_err(usage)?,
        3 => {
            let p3 = QPoint::<3>::from_slice(p).map_err(usage)?;
            let q3 = QPoint::<3>::from_slice(q).map_err(usage)?;
            surface_dist2_3cube(&p3, &q3).map_err(usage)?
        }
        _ => bail!(Usage(format!("--n must be 3 or 4, got {n}"))),
    };
    let mut out = json!({
        "n": n,
        "p": strs(p),
        "q": strs(q),
        "sq": fmt_rat(&sq),
        "dist": sqrt_decimal(&sq),
    });
    if oracle {
        let o = oracle_distance_n(p, q, max_len)?;
        let saturated = match oracle_distance_n(p, q, max_len + 1) {
            Ok(o2) => o2.sq == o.sq,
            Err(_) => false,
        };
        if !saturated {
            eprintln!("warning: oracle not saturated at max_len {max_len}");
        }
        let path: Vec<String> = o.path.iter().map(|f| facet_name(*f)).collect();
        out["oracle"] = json!({
            "sq": fmt_rat(&o.sq),
            "path": path,
            "max_len": max_len,
            "saturated": saturated,
            "equal": o.sq == sq,
        });
    }
    print(&with_schema(export::SCHEMA_DIST, &out)?);
    Ok(0)
}

fn cmd_farthest(p: &[Rat], all: bool) -> anyhow::Result<u8> {
    let q = point4(p)?;
    let mut r = farthest(&q)?;
    let total = r.points.len();
    if !all {
        r.points.truncate(1);
    }
    let mut v = with_schema(export::SCHEMA_FARTHEST, &r)?;
    v["p"] = json!(strs(p));
    v["count"] = json!(total);
    v["dist"] = sqrt_decimal(&r.sq_dist);
    print(&v);
    Ok(0)
}

fn cmd_orbit(p: &[Rat], steps: usize, exact_steps: usize, tol: f64, format: Format) -> anyhow::Result<u8> {
    let q = point4(p)?;
    let opts = OrbitOptions { max_steps: steps, exact_steps: exact_steps.min(steps), tol };
    let o = iterate_orbit(&q, &opts).map_err(usage)?;
    match format {
        Format::Csv => print_text(&export::orbit_csv(&o)?),
        Format::Json => {
            let mut v = with_schema(export::SCHEMA_ORBIT, &o)?;
            v["steps"] = json!(o.steps());
            if let Some(l) = &o.limit {
                let d = DeltaPoint::reduce(l)?;
                v["limit_reduced"] = json!(strs(&d.point().0));
            }
            print(&v);
        }
        Format::Off => bail!(Usage("orbit supports --format json or csv".into())),
    }
    Ok(0)
}

fn cmd_classify(p: &[Rat]) -> anyhow::Result<u8> {
    let d = DeltaPoint::reduce(&point4(p)?).map_err(usage)?;
    let r = classify_delta(&d)?;
    let psi = &r.psi;
    let v = json!({
        "p": strs(p),
        "reduced": strs(&d.point().0),
        "region": r.tag,
        "members": r.members,
        "interior": r.is_interior(),
        "flags": r.flags,
        "psi": {
            "psi1_ac": fmt_rat(&psi.psi1_ac),
            "psi2_ac": fmt_rat(&psi.psi2_ac),
            "psi1_bc": fmt_rat(&psi.psi1_bc),
            "psi2_bc": fmt_rat(&psi.psi2_bc),
            "psi22": fmt_rat(&psi.psi22),
            "psi32": fmt_rat(&psi.psi32),
        },
    });
    print(&with_schema(export::SCHEMA_REGION, &v)?);
    Ok(0)
}

fn reduce3(p: &[Rat]) -> anyhow::Result<(Rat, Rat)> {
    if p.len() != 3 {
        bail!(Usage(format!("expected a point of ∂I³ with 3 coordinates, got {}", p.len())));
    }
    let (y, _) = reduce_generic(p).map_err(usage)?;
    Ok((y[0].clone(), y[1].clone()))
}

fn write_file(path: &Path, body: &str) -> anyhow::Result<()> {
    std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn emit(out: Option<&Path>, format: Format, off: String, exact: Value, summary: Value) -> anyhow::Result<u8> {
    let exact_text = serde_json::to_string_pretty(&exact)?;
    match (out, format) {
        (None, Format::Off) => print_text(&off),
        (None, _) => print_text(&(exact_text + "\n")),
        (Some(path), fmt) => {
            let mut files = vec![path.display().to_string()];
            if fmt == Format::Off {
                write_file(path, &off)?;
                let side = sidecar(path);
                write_file(&side, &exact_text)?;
                files.push(side.display().to_string());
            } else {
                write_file(path, &exact_text)?;
            }
            let mut s = summary;
            s["files"] = json!(files);
            print(&s);
        }
    }
    Ok(0)
}

fn cells_summary(c: &CellComplex, schema: &str) -> Value {
    let v = c.total_volume();
    json!({
        "schema": schema,
        "cells": c.cells.len(),
        "total_volume": fmt_rat(&v),
        "max_vertex_sq_dist": fmt_rat(&c.max_vertex_dist2()),
    })
}

fn cmd_unfold(kind: Kind, p: &[Rat], facet: Option<&str>, out: Option<&Path>, format: Format) -> anyhow::Result<u8> {
    if format == Format::Csv {
        bail!(Usage("unfold supports --format off or json".into()));
    }
    match kind {
        Kind::Star3 => {
            let (a, b) = reduce3(p)?;
            let s = star_unfolding_3cube(&a, &b).map_err(usage)?;
            let exact = with_schema(export::SCHEMA_STAR, &s)?;
            let summary = json!({
                "schema": export::SCHEMA_STAR,
                "vertices": s.vertices.len(),
                "area": fmt_rat(&s.area),
            });
            emit(out, format, export::star_off(&s, DECIMALS), exact, summary)
        }
        Kind::Source4 => {
            let d = DeltaPoint::reduce(&point4(p)?).map_err(usage)?;
            let c = source_unfolding(&d);
            let exact = with_schema(export::SCHEMA_SOURCES, &c)?;
            let summary = cells_summary(&c, export::SCHEMA_SOURCES);
            emit(out, format, export::cells_off(&c, DECIMALS), exact, summary)
        }
        Kind::Voronoi => {
            let name = facet.ok_or_else(|| anyhow!(Usage("--kind voronoi needs --facet".into())))?;
            let mut chars = name.chars();
            let f = match (chars.next().and_then(FacetLabel::from_char), chars.next()) {
                (Some(f), None) => f,
                _ => bail!(Usage(format!("unknown facet {name:?}"))),
            };
            let c = match p.len() {
                3 => {
                    if !FacetLabel::for_dim(3).contains(&f) {
                        bail!(Usage(format!("facet {f} does not exist on the 3-cube")));
                    }
                    let (a, b) = reduce3(p)?;
                    voronoi_cells_3cube(&a, &b, f).map_err(usage)?
                }
                4 => {
                    let d = DeltaPoint::reduce(&point4(p)?).map_err(usage)?;
                    voronoi_cells_on_facet(&d, f)
                }
                k => bail!(Usage(format!("expected 3 or 4 coordinates, got {k}"))),
            };
            let exact = with_schema(export::SCHEMA_CELLS, &c)?;
            let summary = cells_summary(&c, export::SCHEMA_CELLS);
            emit(out, format, export::cells_off(&c, DECIMALS), exact, summary)
        }
    }
}

fn cmd_metrics(n: usize, grid: &Rat, samples: usize, seed: u64, field: Option<&Path>) -> anyhow::Result<u8> {
    let rep = match n {
        2..=4 => radius_diameter_exact(n, grid).map_err(usage)?,
        5.. => estimate_ratio_sampling(n, samples, seed, None).map_err(usage)?,
        _ => bail!(Usage(format!("--n must be at least 2, got {n}"))),
    };
    if let Some(path) = field {
        if n > 4 {
            bail!(Usage("--field needs n ≤ 4".into()));
        }
        let rows = farthest_distance_field(n, grid).map_err(usage)?;
        let names = ["x0", "x1", "x2"];
        write_file(path, &export::field_csv(&names[..n - 1], &rows))?;
    }
    print(&with_schema(export::SCHEMA_METRICS, &rep)?);
    Ok(0)
}

fn cmd_audit(suite: &str, grid: Option<Rat>, seed: u64) -> anyhow::Result<u8> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        suite
            .split(',')
            .map(|s| s.trim().parse::<Suite>())
            .collect::<Result<_, _>>()
            .map_err(usage)?
    };
    let mut reports = Vec::new();
    for s in suites {
        let r = audit::run(s, grid.clone(), seed).map_err(usage)?;
        eprintln!("{}: {} ({} checks, {} failures)", s, if r.pass { "PASS" } else { "FAIL" }, r.checked, r.failure_count);
        reports.push(r);
    }
    let pass = reports.iter().all(|r| r.pass);
    let v = json!({ "schema": export::SCHEMA_AUDIT, "pass": pass, "reports": reports });
    print(&v);
    Ok(if pass { 0 } else { 3 })
}
