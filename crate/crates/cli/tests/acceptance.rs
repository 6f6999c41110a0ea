//! Acceptance suite. Every check prints one PASS/FAIL line; the process
//! exits non-zero if any check fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use camcov::commands;
use camcov::config::RunConfig;
use camcov::parallel::Rayon;
use camcov_core::camera::{depth_of_field, derive_fov_angles};
use camcov_core::coverage::{occlusion_criterion, radial_coverage_vector, segment_intersects_triangle, CoverageTable};
use camcov_core::fusion::{
    csbm_principal, fused_matrix, fused_strength, pairwise_fused_strength, rabm_principal_from_table,
    simplified_fused_strength, PrincipalMethod,
};
use camcov_core::geometry::{project_onto_plane, refine_mesh, rotation_matrix, Orientation, Pose6};
use camcov_core::math::Vec3;
use camcov_core::optimizer::{heuristic_place, iga_optimize, sga_optimize, DeploymentFitness, IgaParams};
use camcov_core::scene::Scene;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Eight cameras on a ring at 45° steps, equal depth and elevation above one
/// upward-facing piece, strengths normalized to 2.
fn ring_fusion() -> Outcome {
    let piece = [Vec3::new(0.01, 0.0, 0.0), Vec3::new(-0.005, 0.008_660_254, 0.0), Vec3::new(-0.005, -0.008_660_254, 0.0)];
    let scene = Scene::from_object(refine_mesh(&[piece], 1.0).unwrap());
    let p = &scene.object().pieces()[0];
    let step = std::f64::consts::FRAC_PI_4;
    let decs: Vec<_> = (0..8)
        .map(|k| {
            let t = k as f64 * step;
            let cam = common::camera(Vec3::new(0.4 * t.cos(), 0.4 * t.sin(), 0.5), p.center);
            let mut d = radial_coverage_vector(p, &cam, &scene).unwrap();
            assert!(d.is_covering(), "ring camera {k} does not cover the piece");
            let s = 2.0 / d.cs_norm;
            d.cv = d.cv * s;
            d.cf = d.cf * s;
            d.cs = d.cs * s;
            d.cs_norm = 2.0;
            d
        })
        .collect();
    let mut worst_abs: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    let mut row = Vec::new();
    for i in 0..8 {
        for j in 0..8 {
            let phi = (j as f64 - i as f64) * step;
            let v = pairwise_fused_strength(&decs[i], &decs[j]);
            let table = [2.0, 2.449, 2.828, 2.449, 2.0][((j + 8 - i) % 8).min((i + 8 - j) % 8)];
            worst_abs = worst_abs.max((v - table).abs());
            let base = pairwise_fused_strength(&decs[i], &decs[i]);
            worst_ratio = worst_ratio.max((v / base - (1.0 + phi.sin().powi(2)).sqrt()).abs());
            if i == 0 && j <= 4 {
                row.push(format!("{v:.4}"));
            }
        }
    }
    check(
        worst_abs <= 1e-3 && worst_ratio <= 1e-6,
        format!("pair(0, k) for k=0..4: [{}]; max |v - table| {worst_abs:.2e} (tol 1e-3), max ratio error {worst_ratio:.2e} (tol 1e-6)", row.join(", ")),
    )
}

/// Full fused matrix against a double loop of pairwise calls, and the
/// simplified methods against the full one, on 200 random scenes.
fn fusion_oracle_and_dominance() -> (Outcome, Outcome) {
    let mut mismatches = 0usize;
    let mut bound_violations = 0usize;
    let mut solo_violations = 0usize;
    let mut pieces = 0usize;
    for seed in 0..200u64 {
        let (scene, cams) = common::random_scene(1000 + seed, 5, 50);
        let table = CoverageTable::compute(&cams, &scene);
        let global = rabm_principal_from_table(&table, scene.object(), 1.0);
        for (k, piece) in scene.object().iter().enumerate() {
            pieces += 1;
            let m = fused_matrix(piece, &cams, &scene).unwrap();
            let decs: Vec<_> = cams.iter().map(|c| radial_coverage_vector(piece, c, &scene).unwrap()).collect();
            let mut brute: f64 = 0.0;
            for (i, a) in decs.iter().enumerate() {
                for (j, b) in decs.iter().enumerate() {
                    let v = pairwise_fused_strength(a, b);
                    if m.get(i, j) != v {
                        mismatches += 1;
                    }
                    brute = brute.max(v);
                }
            }
            let full = fused_strength(piece, &cams, &scene).unwrap();
            if m.max() != brute || full != brute {
                mismatches += 1;
            }
            let row = table.piece(k);
            let csbm = simplified_fused_strength(PrincipalMethod::CoverageStrength, &csbm_principal(row), row);
            let rabm = simplified_fused_strength(PrincipalMethod::RecognizedArea, &global, row);
            bound_violations += usize::from(csbm.strength > full) + usize::from(rabm.strength > full);
            if let Some(i) = csbm.principal {
                solo_violations += usize::from(row[i].cs_norm > csbm.strength);
            }
        }
    }
    (
        check(mismatches == 0, format!("200 scenes, {pieces} pieces: {mismatches} mismatches")),
        check(
            bound_violations == 0 && solo_violations == 0,
            format!("{pieces} pieces: {bound_violations} simplified > full, {solo_violations} principal solo > simplified"),
        ),
    )
}

/// Decomposition identities on 10⁴ random covering (camera, piece) pairs.
fn decomposition_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let (mut found, mut tries) = (0usize, 0usize);
    let mut worst = [0.0f64; 4];
    while found < 10_000 && tries < 1_000_000 {
        tries += 1;
        let n = common::unit_dir(&mut rng);
        let c = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let u = n.cross(if n.x.abs() < 0.9 { Vec3::X } else { Vec3::Y }).normalized().unwrap();
        let v = n.cross(u);
        let r = rng.random_range(0.005..0.03);
        let tri = [c + u * r, c + (v * 0.866 - u * 0.5) * r, c - (v * 0.866 + u * 0.5) * r];
        let scene = Scene::from_object(refine_mesh(&[tri], 1.0).unwrap());
        let piece = &scene.object().pieces()[0];
        let mut dir = common::unit_dir(&mut rng);
        if dir.dot(piece.normal) < 0.0 {
            dir = -dir;
        }
        let pos = piece.center + dir * rng.random_range(0.5..0.95);
        let jitter = Vec3::new(rng.random_range(-0.05..0.05), rng.random_range(-0.05..0.05), rng.random_range(-0.05..0.05));
        let pose = common::aim_rolled(pos, piece.center + jitter, rng.random_range(-1.5..1.5));
        let cam = camcov_core::camera::Camera::new(common::intrinsics(), pose, 5.0).unwrap();
        let d = radial_coverage_vector(piece, &cam, &scene).unwrap();
        if !d.is_covering() {
            continue;
        }
        found += 1;
        let nk = piece.normal;
        worst[0] = worst[0].max((d.cf + d.cs - d.cv).norm());
        worst[1] = worst[1].max(d.cf.dot(nk).abs().max((project_onto_plane(nk, d.cv).unwrap() - d.cf).norm()));
        worst[2] = worst[2].max(d.cs.cross(nk).norm());
        worst[3] = worst[3].max((d.cs_norm - d.elevation.cos() * d.cv.norm()).abs());
    }
    check(
        found == 10_000 && worst.iter().all(|&w| w <= 1e-12),
        format!(
            "{found} covering pairs ({tries} drawn); max errors: cv=cf+cs {:.1e}, cf⊥n {:.1e}, cs∥n {:.1e}, cs_norm {:.1e} (tol 1e-12)",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn lens_numerics() -> Outcome {
    let intr = common::intrinsics();
    let (near, far) = depth_of_field(&intr, 5.0).unwrap();
    let right = derive_fov_angles(&intr).right;
    let dof_ok = (near - 529.40).abs() <= 0.01 && far == f64::INFINITY;
    let fov_ok = (right - 0.70343).abs() <= 1e-5;
    check(
        dof_ok && fov_ok,
        format!(
            "d_n = {near:.4} mm (want 529.40 ± 0.01), d_f = {far} (want inf), phi_r = {right:.7} rad (want 0.70343 ± 1e-5; atan(0.848) = {:.7})",
            0.848f64.atan()
        ),
    )
}

fn plate_config() -> RunConfig {
    RunConfig::load(&data("plate.toml")).unwrap()
}

fn iga_monotone() -> Outcome {
    let cfg = plate_config();
    let scene = commands::load_scene(&cfg).unwrap();
    let dof = cfg.dof(2).unwrap();
    let fit = DeploymentFitness::new(&scene, &dof, cfg.model, cfg.eval).with_executor(Rayon);
    let mut drops = 0usize;
    let mut finals = Vec::new();
    for seed in 0..20 {
        let params = IgaParams { population: 20, iterations: 100, seed, ..cfg.params };
        let res = iga_optimize(&params, &dof, &fit).unwrap();
        drops += res.trace.windows(2).filter(|w| w[1].best_fitness < w[0].best_fitness).count();
        assert_eq!(res.trace.len(), 101);
        finals.push(res.best.recognized_ratio);
    }
    check(drops == 0, format!("20 seeds x 100 iterations, K = {}: {drops} decreases; median final ratio {:.4}", scene.object().len(), median(finals)))
}

fn iga_vs_sga() -> Outcome {
    let cfg = plate_config();
    let scene = commands::load_scene(&cfg).unwrap();
    let dof = cfg.dof(2).unwrap();
    let fit = DeploymentFitness::new(&scene, &dof, cfg.model, cfg.eval).with_executor(Rayon);
    let (mut iga, mut sga) = (Vec::new(), Vec::new());
    for seed in 0..10 {
        let params = IgaParams { population: 20, iterations: 400, seed, ..cfg.params };
        iga.push(iga_optimize(&params, &dof, &fit).unwrap().best.recognized_ratio);
        sga.push(sga_optimize(&params, &dof, &fit).unwrap().best.recognized_ratio);
    }
    let (mi, ms) = (median(iga.clone()), median(sga.clone()));
    check(mi >= ms, format!("median final recognized ratio: IGA {mi:.4} vs SGA {ms:.4} over 10 paired seeds"))
}

/// Gains must strictly shrink from the step that first reaches a ratio of
/// 0.9 up to the step where the curve saturates at 1.
fn heuristic_curve() -> Outcome {
    let cfg = RunConfig::load(&data("desk.toml")).unwrap();
    let scene = commands::load_scene(&cfg).unwrap();
    let steps = heuristic_place(6, &cfg.params, cfg.template, cfg.model, &scene, cfg.eval, Rayon).unwrap();
    let ratios: Vec<f64> = steps.iter().map(|s| s.recognized_ratio).collect();
    let gains: Vec<f64> = ratios.iter().scan(0.0, |prev, &r| Some(r - std::mem::replace(prev, r))).collect();
    let monotone = gains.iter().all(|&g| g >= 0.0);
    let diminishing = match ratios.iter().position(|&r| r >= 0.9) {
        None => false,
        Some(start) => {
            let end = ratios.iter().position(|&r| r >= 1.0).unwrap_or(ratios.len() - 1);
            (start..=end.min(ratios.len() - 2)).all(|n| gains[n + 1] < gains[n])
        }
    };
    let curve: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
    check(monotone && diminishing, format!("K = {}, ratios for 1..6 cameras: [{}]", scene.object().len(), curve.join(", ")))
}

/// One vertex ray blocked, none blocked, and the camera behind the piece.
fn occlusion_cases() -> Outcome {
    let tri = [Vec3::ZERO, Vec3::new(0.1, 0.0, 0.0), Vec3::new(0.0, 0.1, 0.0)];
    let object = refine_mesh(&[tri], 1.0).unwrap();
    let piece = object.pieces()[0].clone();
    let front = common::camera(Vec3::new(0.03, -0.5, 0.5), piece.center);
    let behind = common::camera(Vec3::new(0.03, -0.5, -0.5), piece.center);

    // a small triangle across the middle of the ray to vertex 0 only
    let mid = (front.position() + tri[0]) * 0.5;
    let ray = (tri[0] - front.position()).normalized().unwrap();
    let a = ray.cross(Vec3::X).normalized().unwrap();
    let b = ray.cross(a);
    let r = 0.004;
    let blocker = [mid + a * r, mid + (b * 0.866 - a * 0.5) * r, mid - (b * 0.866 + a * 0.5) * r];
    let blocked: Vec<bool> = tri.iter().map(|&v| segment_intersects_triangle(front.position(), v, &blocker)).collect();
    assert_eq!(blocked, [true, false, false], "blocker construction");

    let with = Scene::new(object.clone(), vec![refine_mesh(&[blocker], 1.0).unwrap()], Vec::new());
    let without = Scene::from_object(object);
    let got = [
        occlusion_criterion(&piece, &front, &with),
        occlusion_criterion(&piece, &front, &without),
        occlusion_criterion(&piece, &behind, &with),
        occlusion_criterion(&piece, &behind, &without),
    ];
    check(got == [0, 1, 0, 0], format!("blocked {}, clear {}, behind (blocked / clear) {} / {}", got[0], got[1], got[2], got[3]))
}

fn determinism() -> Outcome {
    let cfg = plate_config();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        commands::optimize(&cfg, d.path()).unwrap();
    }
    let mut same = Vec::new();
    for name in [commands::TRACE_FILE, commands::POSES_FILE, commands::REPORT_FILE, commands::MESH_FILE] {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap();
        same.push((name, a == b, a.len()));
    }
    let ok = same.iter().all(|s| s.1);
    let detail: Vec<String> = same.iter().map(|(n, eq, len)| format!("{n} {} ({len} B)", if *eq { "identical" } else { "DIFFERS" })).collect();
    check(ok, detail.join(", "))
}

fn main() {
    // sanity of the rotation helper the constructions rely on
    let r = rotation_matrix(Orientation::new(0.0, 0.0, 0.0).unwrap());
    assert_eq!(r.row(2), Vec3::Y);
    let _ = Pose6::new(Vec3::ZERO, 0.0, 0.0, 0.0).unwrap();

    let mut fusion_pair = None;
    let mut fusion = || fusion_pair.get_or_insert_with(fusion_oracle_and_dominance).clone();
    let mut results: Vec<(&str, Outcome, f64)> = Vec::new();
    let mut run = |name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        let (tag, detail) = match &out {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("[{tag}] {:>2}. {name} ({secs:.1} s): {detail}", results.len() + 1);
        results.push((name, out, secs));
    };

    run("pairwise fusion on an 8-camera ring", &mut ring_fusion);
    run("fused matrix equals brute-force pair loop", &mut || fusion().0);
    run("simplified fusion bounded by full fusion", &mut || fusion().1);
    run("coverage decomposition identities", &mut decomposition_identities);
    run("depth of field and field of view numerics", &mut lens_numerics);
    run("IGA best-so-far trace never decreases", &mut iga_monotone);
    run("IGA median beats SGA median", &mut iga_vs_sga);
    run("heuristic curve rises with diminishing gains", &mut heuristic_curve);
    run("occlusion by a single blocked vertex ray", &mut occlusion_cases);
    run("optimize outputs are byte-identical across reruns", &mut determinism);

    let failed: Vec<&str> = results.iter().filter(|r| r.1.is_err()).map(|r| r.0).collect();
    println!("\nacceptance: {} passed, {} failed", results.len() - failed.len(), failed.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
