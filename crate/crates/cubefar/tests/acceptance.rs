//! Acceptance criteria 1–10. Runs without the libtest harness and prints
//! one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cubefar::audit::{descent_samples, eq11_pairs, random_delta, theorem7_rows, thin_region_samples};
use cubefar::cells::{source_unfolding, star_unfolding_3cube};
use cubefar::corners::{closed_form_center, corner_set, corner_triples, dominance_check, generic_center, verify_corner, CLOSED_FORM_TRIPLES};
use cubefar::cube::DeltaPoint;
use cubefar::dynamics::{delta_grid, limit_set_summary, orbit_3cube, step, OrbitOptions};
use cubefar::exact::{int, rat, to_f64, Rat};
use cubefar::farthest::farthest_fundamental;
use cubefar::metrics::{radius_diameter_exact, ratio_formula};
use cubefar::oracle::eq11_audit;
use cubefar::region::{classify_delta, psi22_consistency, psi32_consistency, RegionTag};
use cubefar::walls::{check_planar, check_spatial, phi_ordering};

type Outcome = Result<(bool, String), cubefar::Error>;

fn c1_distance_oracle() -> Outcome {
    let pairs = eq11_pairs(&rat(1, 8), 11, 200, 50);
    let rep = eq11_audit(&pairs, 5)?;
    let ok = rep.mismatches.is_empty() && rep.saturated && rep.pairs >= 250;
    Ok((ok, format!("{} pairs, {} mismatches, saturated at max_len 6: {}", rep.pairs, rep.mismatches.len(), rep.saturated)))
}

fn c2_three_cube_limit() -> Outcome {
    let step = rat(1, 16);
    let limit = rat(1, 2) - &step;
    let (mut n, mut bad, mut worst) = (0, 0, 0f64);
    let mut a = Rat::zero();
    while a <= limit {
        let mut b = Rat::zero();
        while b <= a {
            let (trace, _) = orbit_3cube(&a, &b, 100, 8, 1e-13)?;
            let l = trace.last().expect("nonempty");
            let e = (l[0] - to_f64(&b)).abs().max((l[1] - to_f64(&b)).abs());
            worst = worst.max(e);
            n += 1;
            if e >= 1e-9 || trace.len() > 101 {
                bad += 1;
            }
            b += &step;
        }
        a += &step;
    }
    Ok((bad == 0, format!("{n} starts, max error {worst:.1e}")))
}

fn c3_farthest_map() -> Outcome {
    let rows = theorem7_rows(&rat(1, 16))?;
    let bound = 3f64.sqrt() / 64.0;
    let mut interior = BTreeMap::<RegionTag, usize>::new();
    let mut bad = 0;
    let mut ties = 0;
    for r in &rows {
        if r.interior {
            *interior.entry(r.region).or_default() += 1;
        } else if r.points > 1 {
            ties += 1;
        }
        if !(r.in_theorem && (0.0..=bound).contains(&r.deficit)) {
            bad += 1;
        }
    }
    let all = interior.len() == RegionTag::ALL.len();
    Ok((bad == 0 && all, format!("{} points, {bad} failures, {} regions with interior samples, {ties} boundary tie sets", rows.len(), interior.len())))
}

fn c4_walls() -> Outcome {
    let step = rat(1, 32);
    let half = rat(1, 2);
    let (mut planar, mut tris, mut bad) = (0, 0, 0);
    let mut a = Rat::zero();
    while a <= half {
        let mut c = Rat::zero();
        while c <= a {
            let r = check_planar(&a, &c)?;
            planar += 1;
            tris += r.triangles;
            if !r.ok() || !phi_ordering(&a, &c)? {
                bad += 1;
            }
            c += &step;
        }
        a += &step;
    }
    let mut spatial = 0;
    for p in delta_grid(&step, true) {
        for t in check_spatial(&p)? {
            spatial += 1;
            if !t.delaunay {
                bad += 1;
            }
        }
    }
    Ok((bad == 0, format!("{planar} planar points ({tris} triangles), {spatial} spatial triangles, {bad} failures")))
}

fn c5_corners() -> Outcome {
    let dom = rat(1, 16);
    let (mut corners, mut bad, mut samples, mut ties) = (0, 0, 0, 0);
    for p in delta_grid(&rat(1, 16), true) {
        let cs = corner_set(&p)?;
        corners += cs.corners.len();
        bad += cs.corners.iter().filter(|c| !verify_corner(&p, c)).count();
        let d = dominance_check(&p, &dom)?;
        samples += d.samples;
        ties += d.ties;
        bad += d.violations.len();
    }
    Ok((bad == 0, format!("{corners} corners exact, {samples} dominance samples ({ties} ties), {bad} failures")))
}

fn c6_dynamics() -> Outcome {
    let grid = rat(1, 16);
    let sum = limit_set_summary(&grid, &OrbitOptions::default(), 1e-6)?;
    let mut bad = 0;
    for s in &sum.samples {
        let c0 = to_f64(&s.start[2]);
        let ok = s.resolved
            && s.deviation.is_some_and(|d| d < 1e-9)
            && s.c_limit.is_some_and(|c| c <= c0 + 1e-12 && (c0 < 1.0 / 16.0 || c > 1e-6))
            && s.same_facet;
        if !ok {
            bad += 1;
        }
    }
    let mut d11 = 0;
    for p in delta_grid(&grid, false) {
        let r = classify_delta(&p)?;
        if r.tag != RegionTag::D11 || !r.is_interior() {
            continue;
        }
        d11 += 1;
        let q = DeltaPoint::reduce(&step(&p.point())?)?;
        if q.c != p.c || !classify_delta(&q)?.members.contains(&RegionTag::D11) {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{} orbits, max deviation {:.1e}, {d11} Δ11 points, {bad} failures", sum.samples.len(), sum.max_deviation)))
}

fn c7_descent() -> Outcome {
    let s = descent_samples(7, 100)?;
    let mut per = BTreeMap::<&str, usize>::new();
    let mut bad = 0;
    for (_, r) in &s {
        *per.entry(r.window.expect("window")).or_default() += 1;
        if !r.holds() {
            bad += 1;
        }
    }
    let full = per.len() == 3 && per.values().all(|&n| n == 100);
    Ok((bad == 0 && full, format!("{per:?}, {bad} failures")))
}

fn c8_metrics() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [2usize, 3, 4] {
        let r = radius_diameter_exact(n, &rat(1, 16))?;
        let c = r.certificate.as_ref().expect("certificate");
        ok &= r.radius_sq == Some(int(4)) && r.diameter_sq == Some(int(n as i64 + 2));
        ok &= c.min_sq >= int(4);
        ok &= (r.ratio - ratio_formula(n)).abs() < 1e-15;
        if n == 4 {
            let h = "1/2".to_string();
            let z = "0".to_string();
            let one = "1".to_string();
            let rw = &r.witnesses[0];
            ok &= rw.p == [h.clone(), h.clone(), h.clone(), z] && rw.q == [h.clone(), h.clone(), h, one] && rw.sq == "4";
            let dw = &r.witnesses[1];
            ok &= dw.sq == "6" && dw.p.iter().chain(&dw.q).all(|x| x == "0" || x == "1");
        }
        notes.push(format!("n={n}: r²={} D²={} ratio={:.6}", c.min_sq, r.diameter_sq.as_ref().expect("exact"), r.ratio));
    }
    Ok((ok, notes.join("; ")))
}

fn c9_unfoldings() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = true;
    for _ in 0..5 {
        let p = random_delta(&mut rng);
        let c = source_unfolding(&p);
        let f = farthest_fundamental(&p)?;
        ok &= c.total_volume() == int(8) && c.max_vertex_dist2() == f.sq_dist;
    }
    let mut star = 0;
    for (a, b) in [(rat(1, 3), rat(1, 6)), (rat(0, 1), rat(0, 1)), (rat(1, 2), rat(1, 4)), (rat(2, 5), rat(1, 7))] {
        let s = star_unfolding_3cube(&a, &b)?;
        ok &= s.area == int(6);
        star += 1;
    }
    Ok((ok, format!("5 source unfoldings of volume 8, {star} star unfoldings of area 6")))
}

/// Random points of Δ in the interior of each region, `n` per region, with
/// denominators up to 2000. The thin regions are also sampled near
/// [`thin_region_samples`].
fn region_samples(n: usize, rng: &mut ChaCha8Rng) -> Result<BTreeMap<RegionTag, Vec<DeltaPoint>>, cubefar::Error> {
    let mut out = BTreeMap::<RegionTag, Vec<DeltaPoint>>::new();
    let seeds = thin_region_samples();
    for k in 0..4_000_000usize {
        if out.len() == RegionTag::ALL.len() && out.values().all(|v| v.len() >= n) {
            break;
        }
        let mut v: Vec<Rat> = if k % 2 == 0 {
            (0..3).map(|_| rat(rng.gen_range(0..=1000), 2000)).collect()
        } else {
            let s = &seeds[k / 2 % seeds.len()];
            let j = |x: &Rat, rng: &mut ChaCha8Rng| x + rat(rng.gen_range(-60..=60), 8192);
            vec![j(&s.a, rng), j(&s.b, rng), j(&s.c, rng)]
        };
        v.sort();
        let Ok(p) = DeltaPoint::new(v[2].clone(), v[1].clone(), v[0].clone()) else { continue };
        let r = classify_delta(&p)?;
        let bucket = out.entry(r.tag).or_default();
        if r.is_interior() && bucket.len() < n && !bucket.contains(&p) {
            bucket.push(p);
        }
    }
    Ok(out)
}

fn c10_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let samples = region_samples(200, &mut rng)?;
    let mut checked = 0;
    let mut bad = 0;
    let mut short = Vec::new();
    for region in RegionTag::ALL {
        let triples: Vec<_> = CLOSED_FORM_TRIPLES.iter().filter(|t| corner_triples(region).contains(t)).collect();
        if triples.is_empty() {
            continue;
        }
        let ps = samples.get(&region).map_or(&[][..], |v| &v[..]);
        if ps.len() < 200 {
            short.push(region);
        }
        for p in ps {
            for t in &triples {
                let (q, closed) = closed_form_center(**t, p)?;
                checked += 1;
                if !closed || q != generic_center(**t, p)? {
                    bad += 1;
                }
            }
        }
    }
    let mut ids = 0;
    while ids < 200 {
        let p = random_delta(&mut rng);
        let (a, b, c) = p.abc();
        if let Ok((l, r)) = psi22_consistency(a, b, c) {
            bad += usize::from(l != r);
            ids += 1;
        }
        if let Ok((l, r)) = psi32_consistency(a, b, c) {
            bad += usize::from(l != r);
        }
    }
    let ok = bad == 0 && short.is_empty();
    Ok((ok, format!("{checked} closed-form centers, {ids} ψ22/ψ32 samples, {bad} failures, short regions {short:?}")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("distance formula equals unfolding oracle", c1_distance_oracle),
        ("3-cube orbits converge to (b,b,0)", c2_three_cube_limit),
        ("farthest map matches theorem and oracle", c3_farthest_map),
        ("wall triangles are Delaunay", c4_walls),
        ("corner heights exact, dominated sites never win", c5_corners),
        ("orbit limits on the diagonal", c6_dynamics),
        ("descent inequalities", c7_descent),
        ("radius and diameter", c8_metrics),
        ("unfolding volume and area", c9_unfoldings),
        ("closed forms and ψ identities", c10_identities),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = format!("criterion {}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|x| id.contains(x.as_str()) || name.contains(x.as_str())) {
            continue;
        }
        let t = Instant::now();
        let (ok, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!("{id}: {} {name} [{detail}] ({:.1}s)", if ok { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
