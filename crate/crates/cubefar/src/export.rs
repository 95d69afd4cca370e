//! JSON, CSV and OFF writers. Exact values are written as `num/den`
//! strings; decimals appear only in OFF vertex lists and are annotated with
//! their precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::cells::{CellComplex, StarPolygon};
use crate::cube::DeltaPoint;
use crate::dynamics::{blowup_coords, Orbit, Ratio};
use crate::exact::{fmt_rat, Rat};
use crate::Error;

pub const SCHEMA_DIST: &str = "cubefar.dist/1";
pub const SCHEMA_FARTHEST: &str = "cubefar.farthest/1";
pub const SCHEMA_ORBIT: &str = "cubefar.orbit/1";
pub const SCHEMA_REGION: &str = "cubefar.region/1";
pub const SCHEMA_CELLS: &str = "cubefar.cells/1";
pub const SCHEMA_STAR: &str = "cubefar.star3/1";
pub const SCHEMA_SOURCES: &str = "cubefar.sources/1";
pub const SCHEMA_METRICS: &str = "cubefar.metrics/1";
pub const SCHEMA_AUDIT: &str = "cubefar.audit/1";

/// Serializes `v` and adds a top-level `"schema"` field. Non-object values
/// are wrapped as `{"schema": …, "data": v}`.
pub fn with_schema<T: Serialize>(schema: &str, v: &T) -> Result<Value, Error> {
    let val = serde_json::to_value(v).map_err(|e| Error::Inconsistent(e.to_string()))?;
    Ok(match val {
        Value::Object(mut m) => {
            m.insert("schema".into(), Value::String(schema.into()));
            m
        }
        other => {
            let mut m = serde_json::Map::new();
            m.insert("schema".into(), Value::String(schema.into()));
            m.insert("data".into(), other);
            m
        }
    }
    .into())
}

/// `x` rounded half away from zero to `prec` decimal places.
pub fn decimal(x: &Rat, prec: usize) -> String {
    let scale = BigInt::from(10u32).pow(prec as u32);
    let num = x.numer() * &scale;
    let den = x.denom();
    let (q, r) = num.abs().div_rem(den);
    let q = if r * 2 >= *den { q + 1 } else { q };
    let neg = x.is_negative() && !q.is_zero();
    let digits = format!("{:0>width$}", q.to_string(), width = prec + 1);
    let (int_part, frac) = digits.split_at(digits.len() - prec);
    let sign = if neg { "-" } else { "" };
    if prec == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

fn off_vertex(v: &[Rat], prec: usize) -> String {
    let mut c: Vec<String> = v.iter().map(|x| decimal(x, prec)).collect();
    while c.len() < 3 {
        c.push(decimal(&Rat::zero(), prec));
    }
    c.join(" ")
}

/// ASCII OFF of a cell complex. Each cell contributes its own vertices;
/// 3-dimensional cells contribute their boundary polygons and planar cells
/// one polygon each (with `z = 0`).
pub fn cells_off(c: &CellComplex, prec: usize) -> String {
    let mut verts: Vec<String> = Vec::new();
    let mut faces: Vec<String> = Vec::new();
    for cell in &c.cells {
        let base = verts.len();
        verts.extend(cell.vertices.iter().map(|v| off_vertex(v, prec)));
        let polys: Vec<Vec<usize>> = if c.dim == 2 {
            vec![cell.faces.iter().map(|e| e[0]).collect()]
        } else {
            cell.faces.clone()
        };
        for f in polys {
            let idx: Vec<String> = f.iter().map(|i| (i + base).to_string()).collect();
            faces.push(format!("{} {}", idx.len(), idx.join(" ")));
        }
    }
    let mut out = format!("OFF\n# precision {prec} decimal places; exact values in the JSON sidecar\n");
    out += &format!("{} {} 0\n", verts.len(), faces.len());
    for v in verts {
        out += &v;
        out.push('\n');
    }
    for f in faces {
        out += &f;
        out.push('\n');
    }
    out
}

/// ASCII OFF of the star-unfolding polygon as a single face.
pub fn star_off(s: &StarPolygon, prec: usize) -> String {
    let n = s.vertices.len();
    let mut out = format!("OFF\n# precision {prec} decimal places; exact values in the JSON sidecar\n{n} 1 0\n");
    for v in &s.vertices {
        out += &off_vertex(&v.point.0, prec);
        out.push('\n');
    }
    let idx: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    out += &format!("{n} {}\n", idx.join(" "));
    out
}

fn ratio_str(r: &Ratio) -> String {
    match r {
        Ratio::Finite(x) => fmt_rat(x),
        Ratio::Infinite => "inf".into(),
    }
}

/// CSV rows `j,x,y,z,w,region,exact,a,b,c,r_xz,r_2,r_yz` (reduced
/// coordinates `a,b,c` and their blow-up ratios).
pub fn orbit_csv(o: &Orbit) -> Result<String, Error> {
    let mut out = String::from("j,x,y,z,w,region,exact,a,b,c,r_xz,r_2,r_yz\n");
    for (j, s) in o.iterates.iter().enumerate() {
        let d = DeltaPoint::reduce(&s.point)?;
        let bl = blowup_coords(&d);
        let (a, b, c) = d.abc();
        let coords: Vec<String> = s.point.0.iter().map(fmt_rat).collect();
        out += &format!(
            "{j},{},{},{},{},{},{},{},{},{}\n",
            coords.join(","),
            s.region,
            s.exact,
            fmt_rat(a),
            fmt_rat(b),
            fmt_rat(c),
            ratio_str(&bl.r_xz),
            ratio_str(&bl.r_2),
            ratio_str(&bl.r_yz)
        );
    }
    Ok(out)
}

/// CSV of a farthest-distance field with coordinate columns `names`.
pub fn field_csv(names: &[&str], rows: &[(Vec<Rat>, Rat)]) -> String {
    let mut out = names.join(",") + ",sq_dist,dist\n";
    for (p, d) in rows {
        let c: Vec<String> = p.iter().map(fmt_rat).collect();
        out += &format!("{},{},{:.12}\n", c.join(","), fmt_rat(d), crate::exact::to_f64(d).sqrt());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::{star_unfolding_3cube, voronoi_cells_3cube};
    use crate::cube::FacetLabel;
    use crate::exact::{int, rat};

    #[test]
    fn decimals() {
        assert_eq!(decimal(&rat(1, 3), 4), "0.3333");
        assert_eq!(decimal(&rat(-7, 6), 2), "-1.17");
        assert_eq!(decimal(&rat(5, 2), 0), "3");
        assert_eq!(decimal(&rat(-1, 1000), 2), "0.00");
        assert_eq!(decimal(&int(2), 3), "2.000");
    }

    #[test]
    fn schema_field() {
        let v = with_schema(SCHEMA_DIST, &serde_json::json!({"sq": "4"})).unwrap();
        assert_eq!(v["schema"], SCHEMA_DIST);
        let w = with_schema(SCHEMA_DIST, &3).unwrap();
        assert_eq!(w["data"], 3);
    }

    #[test]
    fn off_counts() {
        let s = star_unfolding_3cube(&rat(1, 3), &rat(1, 6)).unwrap();
        let o = star_off(&s, 6);
        assert!(o.lines().nth(2).unwrap().starts_with("16 1 0"));
        let c = voronoi_cells_3cube(&rat(1, 3), &rat(1, 6), FacetLabel::U).unwrap();
        let o = cells_off(&c, 6);
        let counts: Vec<usize> = o.lines().nth(2).unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
        assert_eq!(counts[1], 8);
    }
}
