//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use weakdiam::colorer::{colour_bounded_treewidth, colour_partitioned, ladder, ControlFunction};
use weakdiam::colouring::{
    brute_force_optimal_d, colouring_to_cover, cover_to_colouring, monochromatic_components, verify_mrd, Colouring,
};
use weakdiam::decomposition::{exact_tree_decomposition, validate_td, TreeDecomposition};
use weakdiam::generators::{all_connected_graphs, grid, grid_rows, random_connected, random_tree, rng};
use weakdiam::graph::{all_pairs_distances, is_tight, DistanceMatrix, VertexId, VertexSet, WeightedGraph};
use weakdiam::rational::{Distance, Rational};
use weakdiam::reductions::{
    blowup_decomposition, exponential_grid_weighting, integerize, minor_weighting, pullback_colouring,
    subdivision_blowup, subdivision_model, ScalingMap,
};
use weakdiam::rerouting::{annuli, build_barrier_colouring, extend_colouring_centred, reroute, CentredSet, Mode};

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn v(i: u64) -> VertexId {
    VertexId(i)
}

fn report(n: u32, name: &str, elapsed: Duration, limit: Option<Duration>, result: Result<String, String>) {
    let within = limit.is_none_or(|l| elapsed <= l);
    match (&result, within) {
        (Ok(detail), true) => println!("criterion {n:>2} PASS {name}: {detail} ({elapsed:.2?})"),
        (Ok(detail), false) => {
            println!("criterion {n:>2} FAIL {name}: {detail}, took {elapsed:.2?} over {limit:?}");
            panic!("criterion {n} over its time limit");
        }
        (Err(e), _) => {
            println!("criterion {n:>2} FAIL {name}: {e}");
            panic!("criterion {n} failed: {e}");
        }
    }
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn random_weighted(n: u64, extra: usize, max_w: i64, rng: &mut impl Rng) -> WeightedGraph {
    let g = random_connected(n, extra, rng);
    let mut out = WeightedGraph::with_vertices(g.vertices());
    for (a, b, _) in g.edges() {
        out.add_edge(a, b, Distance::finite(rng.gen_range(1..=max_w))).unwrap();
    }
    out
}

fn random_subset(verts: &[VertexId], p: f64, rng: &mut impl Rng) -> VertexSet {
    verts.iter().copied().filter(|_| rng.gen_bool(p)).collect()
}

fn random_colouring(verts: impl IntoIterator<Item = VertexId>, m: usize, rng: &mut impl Rng) -> Colouring {
    Colouring::from_pairs(m, verts.into_iter().map(|x| (x, rng.gen_range(1..=m)))).unwrap()
}

#[test]
fn criterion_01_ladder() {
    let t = Instant::now();
    let result = (|| {
        let a = ladder(1, &ControlFunction::new(int(12), int(0)));
        let b = ladder(2, &ControlFunction::new(int(16), int(0)));
        let c = ladder(0, &ControlFunction::new(Rational::new(7, 3), int(0)));
        check(a.f(1) == &int(1180), || format!("f_1 = {}", a.f(1)))?;
        check(b.f(2) == &int(218536), || format!("f_2 = {}", b.f(2)))?;
        check(c.f(0) == &Rational::new(7, 3), || format!("f_0 = {}", c.f(0)))?;
        Ok("1180, 218536, 7/3".to_string())
    })();
    report(1, "ladder exactness", t.elapsed(), Some(Duration::from_millis(50)), result);
}

#[test]
fn criterion_02_treewidth_pipeline() {
    let t = Instant::now();
    let mut slowest = Duration::ZERO;
    let result = (|| {
        let mut r_rng = rng(2);
        for i in 0..100u64 {
            let n = r_rng.gen_range(1..=200);
            let (g, td) = random_tree(n, &mut rng(1000 + i));
            let d = all_pairs_distances(&g);
            for r in [1, 2, 5, 10] {
                let start = Instant::now();
                let cert = colour_bounded_treewidth(&g, &d, Some(&td), 1, &int(r), Mode::Fast).map_err(|e| e.to_string())?;
                let bound = int(1180 * r);
                check(cert.bound == bound, || format!("certified {}", cert.bound))?;
                let verdict = verify_mrd(&d, &cert.colouring, &int(r), &Distance::finite(bound)).map_err(|e| e.to_string())?;
                check(verdict.passed(), || format!("tree {i} (n={n}) r={r}: {:?}", verdict.violation))?;
                slowest = slowest.max(start.elapsed());
            }
        }
        check(slowest < Duration::from_secs(5), || format!("slowest instance {slowest:?}"))?;
        Ok(format!("400 runs at 1180r, slowest {slowest:.2?}"))
    })();
    report(2, "treewidth pipeline soundness", t.elapsed(), None, result);
}

#[test]
fn criterion_03_partition_pipeline() {
    let t = Instant::now();
    let result = (|| {
        for m in 3..=12u64 {
            let g = grid(2, m);
            let d = all_pairs_distances(&g);
            let (p, td) = grid_rows(m);
            let ell = int(m as i64 - 1);
            for r in [m as i64 - 1, 2 * (m as i64 - 1)] {
                let cert = colour_partitioned(&g, &d, p.clone(), td.clone(), 1, &ell, &int(r), Mode::Fast).map_err(|e| e.to_string())?;
                let verdict = verify_mrd(&d, &cert.colouring, &int(r), &Distance::finite(int(1180 * r))).map_err(|e| e.to_string())?;
                check(cert.bound == int(1180 * r) && verdict.passed(), || format!("m={m} r={r}: {:?}", verdict.violation))?;
            }
        }
        Ok("m = 3..12, 20 runs at 1180r".to_string())
    })();
    report(3, "partition pipeline soundness", t.elapsed(), Some(Duration::from_secs(10)), result);
}

fn dominance(g: &WeightedGraph, r: i64) -> Result<(), String> {
    let d = all_pairs_distances(g);
    let td = exact_tree_decomposition(g, 12).map_err(|e| e.to_string())?;
    let k = validate_td(g, &td).map_err(|e| e.to_string())?.width;
    let cert = colour_bounded_treewidth(g, &d, Some(&td), k, &int(r), Mode::Fast).map_err(|e| e.to_string())?;
    let achieved = monochromatic_components(&d, &cert.colouring, &int(r)).map_err(|e| e.to_string())?.max_weak_diameter();
    let oracle = brute_force_optimal_d(&d, cert.colouring.colours(), &int(r), 9).map_err(|e| e.to_string())?;
    check(oracle.at_most(&cert.bound), || format!("oracle {oracle} above certified {}", cert.bound))?;
    check(achieved.at_most(&cert.bound), || format!("achieved {achieved} above certified {}", cert.bound))?;
    check(oracle <= achieved, || format!("achieved {achieved} below the optimum {oracle}"))
}

#[test]
fn criterion_04_oracle_dominance() {
    let t = Instant::now();
    let result = (|| {
        let mut count = 0;
        for n in 1..=5 {
            for g in all_connected_graphs(n) {
                for r in [1, 2] {
                    dominance(&g, r)?;
                    count += 1;
                }
            }
        }
        let mut seeds = rng(4);
        for _ in 0..50 {
            let n = seeds.gen_range(1..=9);
            let extra = seeds.gen_range(0..=n as usize);
            let g = random_connected(n, extra, &mut seeds);
            for r in [1, 2] {
                dominance(&g, r)?;
                count += 1;
            }
        }
        Ok(format!("{count} (graph, r) pairs"))
    })();
    report(4, "oracle dominance", t.elapsed(), Some(Duration::from_secs(120)), result);
}

/// A random `r`-walk: each step moves to a vertex within `r`.
fn random_walk(d: &DistanceMatrix, r: &Rational, len: usize, rng: &mut impl Rng) -> Vec<VertexId> {
    let verts = d.vertices();
    let mut walk = vec![*verts.choose(rng).unwrap()];
    for _ in 1..len {
        let here = *walk.last().unwrap();
        let options: Vec<VertexId> = verts.iter().copied().filter(|&x| d.get(here, x).at_most(r)).collect();
        walk.push(*options.choose(rng).unwrap());
    }
    walk
}

#[test]
fn criterion_05_rerouting() {
    let t = Instant::now();
    let result = (|| {
        let mut rng = rng(5);
        for i in 0..500 {
            let n = rng.gen_range(2..=10);
            let g = random_weighted(n, rng.gen_range(0..=n as usize), 3, &mut rng);
            let d = all_pairs_distances(&g);
            let r = int(rng.gen_range(1..=4));
            let len = rng.gen_range(1..=12);
            let p = random_walk(&d, &r, len, &mut rng);
            let verts = d.vertices().to_vec();
            let z = random_subset(&verts, 0.4, &mut rng);
            let mut s = random_subset(&verts, 0.3, &mut rng);
            if s.is_empty() {
                s.insert(verts[0]);
            }
            let iota: BTreeMap<VertexId, VertexId> =
                z.iter().map(|&x| (x, weakdiam::rerouting::nearest(&d, x, &s).unwrap())).collect();
            let ell = iota.iter().map(|(a, b)| d.get(*a, *b).as_finite().unwrap().clone()).fold(int(0), Rational::max);
            let dd = p
                .split(|x| z.contains(x))
                .filter(|run| !run.is_empty())
                .map(|run| d.weak_diameter(&run.iter().copied().collect()).unwrap().as_finite().unwrap().clone())
                .fold(int(0), Rational::max);
            let out = reroute(&d, &p, &r, &iota, &ell, &dd).map_err(|e| format!("instance {i}: {e}"))?;
            let big = &dd + &(int(2) * &(&r + &ell));
            check(d.is_r_walk(&out, &big), || format!("instance {i}: not a {big}-walk"))?;
            check(out.first() == p.first() && out.last() == p.last(), || format!("instance {i}: endpoints moved"))?;
            check(out[1..out.len() - 1].iter().all(|x| s.contains(x)), || format!("instance {i}: interior leaves S"))?;
        }
        Ok("500 instances".to_string())
    })();
    report(5, "rerouting property", t.elapsed(), Some(Duration::from_secs(10)), result);
}

#[test]
fn criterion_06_centred_extension() {
    let t = Instant::now();
    let result = (|| {
        let mut rng = rng(6);
        for i in 0..200 {
            let n = rng.gen_range(2..=12);
            let g = random_weighted(n, rng.gen_range(0..=n as usize), 3, &mut rng);
            let d = all_pairs_distances(&g);
            let verts = d.vertices().to_vec();
            let r = int(rng.gen_range(1..=3));
            let k = rng.gen_range(1..=3usize);
            let centre: VertexSet = verts.choose_multiple(&mut rng, k).copied().collect();
            let z = random_subset(&verts, 0.4, &mut rng);
            let ell = z.iter().map(|&x| d.dist_to_set(x, &centre).as_finite().unwrap().clone()).fold(int(0), Rational::max);
            let cs = CentredSet::new(&d, z.clone(), centre, k, ell.clone()).map_err(|e| e.to_string())?;
            let m = rng.gen_range(1..=3);
            let rest = g.without(&z);
            let d_rest = all_pairs_distances(&rest);
            let c = random_colouring(rest.vertices(), m, &mut rng);
            let dd = monochromatic_components(&d_rest, &c, &r).unwrap().max_weak_diameter().as_finite().unwrap().clone();
            let c_z = random_colouring(z.iter().copied(), m, &mut rng);
            let (out, bound) = extend_colouring_centred(&g, &d, Some(&d_rest), &cs, &c, &c_z, &r, &dd, Mode::Fast)
                .map_err(|e| format!("instance {i}: {e}"))?;
            let expected = int(k as i64 + 1) * (&dd + &(int(4) * &r) + int(2) * &ell);
            check(bound == expected, || format!("instance {i}: bound {bound} vs {expected}"))?;
            let verdict = verify_mrd(&d, &out, &r, &Distance::finite(bound)).unwrap();
            check(verdict.passed(), || format!("instance {i}: {:?}", verdict.violation))?;
        }
        Ok("200 instances at (k+1)(d+4r+2l)".to_string())
    })();
    report(6, "centred extension", t.elapsed(), Some(Duration::from_secs(30)), result);
}

#[test]
fn criterion_07_barrier_blocking() {
    let t = Instant::now();
    let result = (|| {
        let mut rng = rng(7);
        let mut checks = 0;
        for i in 0..300 {
            let n = rng.gen_range(1..=14);
            let g = random_weighted(n, rng.gen_range(0..=n as usize), 3, &mut rng);
            let d = all_pairs_distances(&g);
            let verts = d.vertices().to_vec();
            let r = int(rng.gen_range(1..=3));
            let m = rng.gen_range(2..=3);
            let mut s = random_subset(&verts, 0.25, &mut rng);
            if s.is_empty() {
                s.insert(verts[0]);
            }
            let c_s = random_colouring(s.iter().copied(), m, &mut rng);
            let extra = random_subset(&verts, 0.2, &mut rng);
            let barrier = build_barrier_colouring(&d, &s, &r, &c_s, m, &extra).map_err(|e| e.to_string())?;
            let [a1, a2, _] = annuli(&d, &s, &r);
            let inner: VertexSet = s.iter().chain(&a1).chain(&a2).copied().collect();
            for _ in 0..5 {
                let mut c = barrier.colouring.clone();
                for &x in &verts {
                    if c.get(x).is_none() {
                        c.set(x, rng.gen_range(1..=m)).unwrap();
                    }
                }
                let rep = monochromatic_components(&d, &c, &r).unwrap();
                for comp in &rep.components {
                    let inside = comp.vertices.iter().filter(|x| inner.contains(x)).count();
                    check(inside == 0 || inside == comp.vertices.len(), || format!("instance {i}: component {:?} crosses", comp.vertices))?;
                }
                checks += 1;
            }
        }
        Ok(format!("{checks} extended barrier colourings"))
    })();
    report(7, "barrier blocking", t.elapsed(), Some(Duration::from_secs(10)), result);
}

#[test]
fn criterion_08_cover_equivalence() {
    let t = Instant::now();
    let result = (|| {
        let mut rng = rng(8);
        for i in 0..100 {
            let n = rng.gen_range(1..=8);
            let g = random_weighted(n, rng.gen_range(0..=n as usize), 4, &mut rng);
            let d = all_pairs_distances(&g);
            let r = int(rng.gen_range(1..=4));
            let m = rng.gen_range(1..=3);
            let c = random_colouring(g.vertices(), m, &mut rng);
            let cover = colouring_to_cover(&d, &c, &r).unwrap();
            cover.check(&d).map_err(|e| format!("instance {i}: {e}"))?;
            let back = cover_to_colouring(&d, &cover).unwrap();
            let before = monochromatic_components(&d, &c, &r).unwrap().partition();
            let after = monochromatic_components(&d, &back, &r).unwrap().partition();
            check(before == after, || format!("instance {i}: partitions differ"))?;
        }
        Ok("100 instances".to_string())
    })();
    report(8, "cover equivalence", t.elapsed(), Some(Duration::from_secs(30)), result);
}

fn grid_2x3() -> (WeightedGraph, TreeDecomposition) {
    let mut h = WeightedGraph::with_vertices((0..6).map(v));
    for (a, b) in [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)] {
        h.add_edge(v(a), v(b), Distance::finite(1)).unwrap();
    }
    let bags = [[0, 1, 3], [1, 3, 4], [1, 2, 4], [2, 4, 5]];
    let td = TreeDecomposition::new(
        bags.iter().enumerate().map(|(i, b)| (i, b.iter().map(|&x| v(x)).collect())),
        [(0, 1), (1, 2), (2, 3)],
    )
    .unwrap();
    (h, td)
}

#[test]
fn criterion_09_reduction_sandwich() {
    let t = Instant::now();
    let result = (|| {
        let (h, h_td) = grid_2x3();
        let (g, model) = subdivision_model(&h, 2).map_err(|e| e.to_string())?;
        let eps = Rational::new(1, 2);
        let mw = minor_weighting(&g, &h, &model, &eps).map_err(|e| e.to_string())?;
        let dh = all_pairs_distances(&h);
        let dg = all_pairs_distances(&mw.graph);
        let mut pairs = 0;
        for (i, &a) in dh.vertices().iter().enumerate() {
            for &b in &dh.vertices()[i + 1..] {
                let x = dh.get(a, b).as_finite().unwrap().clone();
                let y = dg.get(mw.map.iota[&a], mw.map.iota[&b]).as_finite().unwrap().clone();
                check(x <= y && y <= &Rational::new(3, 2) * &x, || format!("pair {a},{b}: {x} vs {y}"))?;
                pairs += 1;
            }
        }
        check(pairs == 15, || format!("{pairs} pairs"))?;

        let (w, k) = integerize(&mw.graph).map_err(|e| e.to_string())?;
        let lcm = mw.graph.edges().fold(num_bigint::BigInt::from(1), |acc, (_, _, x)| {
            num_integer::Integer::lcm(&acc, &x.as_finite().unwrap().denom())
        });
        check(k == lcm, || format!("scale {k} is not the lcm {lcm}"))?;
        let scale = Rational::from_bigint(k.clone());
        let dw = all_pairs_distances(&w);
        for &a in dg.vertices() {
            for &b in dg.vertices() {
                check(dw.get(a, b).as_finite() == Some(&(&scale * dg.get(a, b).as_finite().unwrap())), || format!("{a},{b} not scaled"))?;
            }
        }
        let blow = subdivision_blowup(&w).map_err(|e| e.to_string())?;
        check(is_tight(&w, &blow.graph).unwrap().is_tight(), || "blow-up is not tight".into())?;

        // the full chain: colour the blow-up, pull back to the weighted host, then to H
        let unit3 = {
            let mut u = WeightedGraph::with_vertices(h.vertices());
            for (a, b, _) in h.edges() {
                u.add_edge(a, b, Distance::finite(3)).unwrap();
            }
            u
        };
        let g_td = blowup_decomposition(&h_td, &subdivision_blowup(&unit3).unwrap());
        let b_td = blowup_decomposition(&g_td, &blow);
        let r = int(1);
        let s = &(&scale * &mw.map.alpha) * &r;
        let db = all_pairs_distances(&blow.graph);
        let cert = colour_bounded_treewidth(&blow.graph, &db, Some(&b_td), 2, &s, Mode::Fast).map_err(|e| e.to_string())?;
        let (c_w, f_w) = pullback_colouring(&dw, &db, &ScalingMap::identity(w.vertices(), int(1), int(1)), &cert.colouring, &cert.bound, &s, Mode::Test)
            .map_err(|e| e.to_string())?;
        let r_g = &s / &scale;
        let (c_g, f_g) = pullback_colouring(&dg, &dw, &ScalingMap::identity(w.vertices(), scale.clone(), scale.clone()), &c_w, &f_w, &r_g, Mode::Test)
            .map_err(|e| e.to_string())?;
        let (_, f_h) = pullback_colouring(&dh, &dg, &mw.map, &c_g, &f_g, &r, Mode::Test).map_err(|e| e.to_string())?;
        let expected = &(ladder(2, &ControlFunction::new(int(16), int(0))).f(2) * &mw.map.alpha) * &r;
        check(f_h == expected, || format!("H bound {f_h}, expected {expected}"))?;
        Ok(format!("15 pairs within [1, 3/2], k = {k}, blow-up tight with {} vertices, H bound {f_h}", blow.graph.vertex_count()))
    })();
    report(9, "reduction sandwich", t.elapsed(), Some(Duration::from_secs(5)), result);
}

#[test]
fn criterion_10_exponential_grid() {
    let t = Instant::now();
    let result = (|| {
        let mut worst = Rational::zero();
        for m in 2..=8u64 {
            let g = exponential_grid_weighting(m, v(0)).map_err(|e| e.to_string())?;
            let d = all_pairs_distances(&g);
            let c = Colouring::constant(1, g.vertices(), 1);
            for e in 0..=12 {
                let r = Rational::pow2(e);
                let diam = monochromatic_components(&d, &c, &r).unwrap().max_weak_diameter();
                let diam = diam.as_finite().unwrap().clone();
                check(diam <= &int(4) * &r, || format!("m={m} r={r}: diameter {diam}"))?;
                worst = worst.max(&diam / &r);
            }
        }
        Ok(format!("worst diameter/r = {worst}"))
    })();
    report(10, "exponential grid remark", t.elapsed(), Some(Duration::from_secs(60)), result);
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_weakdiam")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn dir_contents(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap()))
        .collect()
}

#[test]
fn criterion_11_determinism() {
    let t = Instant::now();
    let result = (|| {
        let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
        let p = |name: &str| tmp.path().join(name).to_string_lossy().into_owned();
        let mut outputs = BTreeSet::new();
        for run in 0..2 {
            let (g, td) = (p(&format!("g{run}.txt")), p(&format!("g{run}.td")));
            let (code, _) = run_cli(&["gen", "tree", "--n", "120", "--seed", "11", "--out", &g, "--td-out", &td]);
            check(code == 0, || "gen failed".into())?;
            let out_dir = p(&format!("colour{run}"));
            let (code, stdout) = run_cli(&["color", "--graph", &g, "--td", &td, "--r", "1", "--r", "5/2", "--out-dir", &out_dir]);
            check(code == 0, || "color failed".into())?;
            let (code, bench) = run_cli(&["bench", "--family", "trees:10..30:10", "--r", "1", "--r", "2", "--seed", "3"]);
            check(code == 0, || "bench failed".into())?;
            let files = dir_contents(Path::new(&out_dir));
            check(files.len() == 4, || format!("{} output files", files.len()))?;
            let gen = (std::fs::read(&g).unwrap(), std::fs::read(&td).unwrap());
            outputs.insert(format!("{gen:?}{stdout:?}{bench:?}{files:?}"));
        }
        check(outputs.len() == 1, || "outputs differ between runs".into())?;
        Ok("gen, color and bench byte-identical across runs".to_string())
    })();
    report(11, "determinism", t.elapsed(), None, result);
}
