//! Acceptance criteria 1-12. Runs without the libtest harness so the
//! PASS/FAIL lines always reach stdout; exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use qdyn::dynamics::{iterate_system, SystemParams};
use qdyn::ecg::{add_measurement_noise, integrate_ecg, EcgParams};
use qdyn::escape::{
    mask_diff, render_escape_grid, render_escape_grid_with_threads, white_fraction, GridSpec,
    ParamMode,
};
use qdyn::features::{convolve_same, extract_frame_features, sg_kernel, FeatureConfig};
use qdyn::io::{encode_pgm, parse_config, PgmStyle};
use qdyn::SignalFrame;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn cli(args: &[&str]) -> (u8, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = qdyn_cli::run(
        std::iter::once("qdyn").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap())
}

fn fig1() -> GridSpec {
    GridSpec {
        pixels: 256,
        radius: 2.0,
        mode: ParamMode::Polar,
        k: 1.0,
        alpha: 2.0,
        iters: 30,
        threshold: 2.0,
    }
}

fn c1_case1_bound() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0_f64;
    for _ in 0..10_000 {
        let theta = rng.random_range(0.0..2.0 * PI);
        let (a, b) = (theta.cos(), theta.sin());
        let mut prev: f64 = rng.random_range(-FRAC_1_SQRT_2..=FRAC_1_SQRT_2);
        let mut curr: f64 = rng.random_range(-FRAC_1_SQRT_2..=FRAC_1_SQRT_2);
        for _ in 0..10_000 {
            let next = a * curr * curr + b * prev * prev;
            worst = worst.max(next.abs());
            prev = curr;
            curr = next;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        worst <= FRAC_1_SQRT_2,
        format!("max |x| = {worst:.17} vs 1/sqrt2 = {FRAC_1_SQRT_2:.17}; {secs:.2} s"),
    )
}

fn c2_stability() -> Verdict {
    let (code, out) = cli(&["stability", "--a", "2", "--b", "9", "--sigma", "1"]);
    let line = out.lines().find(|l| l.ends_with(": oscillatory source"));
    let Some(line) = line else {
        return verdict(
            false,
            format!("exit {code}, no oscillatory source line in {out:?}"),
        );
    };
    let coords: Vec<f64> = line
        .trim_start_matches('(')
        .split(')')
        .next()
        .unwrap()
        .split(',')
        .map(|s| s.trim().parse().unwrap())
        .collect();
    let (xe, ye) = (1.0 / 11.0, -112.0 / 121.0);
    let printed_ok = (coords[0] - xe).abs() <= 1e-12 && (coords[1] - ye).abs() <= 1e-12;

    let p = SystemParams::new(2.0, 9.0, 1.0).unwrap();
    let rep = qdyn::stability::stability_report(&p);
    let Some(r) = rep.iter().find(|r| (r.location.0 - xe).abs() < 1e-6) else {
        return verdict(false, "fixed point not found by the library");
    };
    let loc_ok = (r.location.0 - xe).abs() <= 1e-12 && (r.location.1 - ye).abs() <= 1e-12;
    let (l1, l2) = r.eigenvalues;
    let res = |l: num_complex::Complex64| (l * l - l * (4.0 / 11.0) - 18.0 / 11.0).norm();
    let worst = res(l1).max(res(l2));
    verdict(
        code == 0 && printed_ok && loc_ok && worst <= 1e-12,
        format!(
            "{line}; location err {:.1e}; eigen residual {worst:.1e}",
            (r.location.0 - xe).abs().max((r.location.1 - ye).abs())
        ),
    )
}

fn c3_shrinkage() -> Verdict {
    let start = Instant::now();
    let mut fr = Vec::new();
    for k in [1.0, 5.0, 15.0] {
        let g = render_escape_grid(&GridSpec {
            mode: ParamMode::AbsPolar,
            k,
            ..fig1()
        })
        .unwrap();
        fr.push(white_fraction(&g));
    }
    let ok = fr.windows(2).all(|w| w[1] <= w[0]);
    verdict(
        ok,
        format!(
            "white fraction k=1,5,15: {:.5}, {:.5}, {:.5}; {:.2} s",
            fr[0],
            fr[1],
            fr[2],
            start.elapsed().as_secs_f64()
        ),
    )
}

fn c4_cutoff() -> Verdict {
    let g30 = render_escape_grid(&fig1()).unwrap();
    let g40 = render_escape_grid(&GridSpec {
        iters: 40,
        ..fig1()
    })
    .unwrap();
    let d = mask_diff(&g30, &g40).unwrap();
    verdict(
        d <= 0.05,
        format!("mask_diff(30, 40) = {d:.3e} (limit 0.05)"),
    )
}

fn c5_alpha_half() -> Verdict {
    let g2 = render_escape_grid(&fig1()).unwrap();
    let gh = render_escape_grid(&GridSpec {
        alpha: 0.5,
        ..fig1()
    })
    .unwrap();
    let missing = g2
        .cells
        .iter()
        .zip(&gh.cells)
        .filter(|(a2, ah)| **a2 == 0 && **ah != 0)
        .count();
    verdict(
        missing == 0,
        format!(
            "{missing} cells bounded at alpha=2 but not at alpha=1/2; white {:.4} vs {:.4}",
            white_fraction(&g2),
            white_fraction(&gh)
        ),
    )
}

fn c6_limit_cycle() -> Verdict {
    let omega = 2.0 * PI;
    let p = EcgParams::bare(omega);
    let dt = 1e-3;
    let f = integrate_ecg(&p, 2.0, 0.0, 0.0, 20.0, dt).unwrap();
    let (x, y) = (f.channel("x").unwrap(), f.channel("y").unwrap());
    let n = f.len() - 1;
    let r_err = (x[n].hypot(y[n]) - 1.0).abs();

    let mut unwrapped = vec![y[0].atan2(x[0])];
    for i in 1..=n {
        let th = y[i].atan2(x[i]);
        let prev = *unwrapped.last().unwrap();
        let mut d = th - prev.rem_euclid(2.0 * PI);
        d = (d + PI).rem_euclid(2.0 * PI) - PI;
        unwrapped.push(prev + d);
    }
    let period = 2.0 * PI / omega;
    let steps = (period / dt).round() as usize;
    let advance = unwrapped[n] - unwrapped[n - steps];
    let rel = (advance - 2.0 * PI).abs() / (2.0 * PI);
    verdict(
        r_err <= 1e-6 && rel <= 1e-6,
        format!("|r(20)-1| = {r_err:.2e}; phase per period rel err = {rel:.2e}"),
    )
}

fn c7_rk4_order() -> Verdict {
    let p = EcgParams::bare(2.0 * PI);
    let exact = (-5.0_f64).exp();
    let err = |dt: f64| {
        let f = integrate_ecg(&p, 1.0, 0.0, 1.0, 5.0, dt).unwrap();
        let z = f.channel("z").unwrap();
        (z[z.len() - 1] - exact).abs()
    };
    let (e1, e2) = (err(0.1), err(0.05));
    let ratio = e1 / e2;
    verdict(
        (12.0..=20.0).contains(&ratio),
        format!("err(0.1) = {e1:.3e}, err(0.05) = {e2:.3e}, ratio = {ratio:.3}"),
    )
}

fn c8_noise() -> Verdict {
    let n = 100_000;
    let frame = SignalFrame::new(2000.0, 0.0)
        .unwrap()
        .with_channel("z", vec![0.0; n])
        .unwrap();
    let a = add_measurement_noise(&frame, "z", 0.025, 7).unwrap();
    let b = add_measurement_noise(&frame, "z", 0.025, 7).unwrap();
    let s = a.channel("z").unwrap();
    let mean = s.iter().sum::<f64>() / n as f64;
    let sd = (s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    let bytes = |f: &SignalFrame| {
        f.channel("z")
            .unwrap()
            .iter()
            .flat_map(|v| v.to_le_bytes())
            .collect::<Vec<u8>>()
    };
    let same = bytes(&a) == bytes(&b);
    let mean_lim = 3.0 * 0.025 / (n as f64).sqrt();
    let sd_rel = (sd - 0.025).abs() / 0.025;
    verdict(
        mean.abs() <= mean_lim && sd_rel <= 0.02 && same,
        format!("mean {mean:.2e} (limit {mean_lim:.2e}); sd {sd:.6} ({:.2}% off); identical bytes: {same}", 100.0 * sd_rel),
    )
}

fn c9_sg() -> Verdict {
    let dt = 1.0 / 2000.0;
    let n = 1000;
    let poly = |t: f64| 0.3 - 1.7 * t + 2.2 * t * t - 4.1 * t * t * t;
    let derivs: [&dyn Fn(f64) -> f64; 4] = [
        &poly,
        &|t| -1.7 + 4.4 * t - 12.3 * t * t,
        &|t| 4.4 - 24.6 * t,
        &|_| -24.6,
    ];
    let signal: Vec<f64> = (0..n).map(|i| poly(i as f64 * dt)).collect();
    let mut worst_exact = 0.0_f64;
    let mut worst_moment = 0.0_f64;
    for (d, deriv) in derivs.iter().enumerate() {
        let k = sg_kernel(101, 3, d, dt).unwrap();
        let out = convolve_same(&signal, &k).unwrap();
        for (i, &got) in out.iter().enumerate().take(n - 50).skip(50) {
            let want = deriv(i as f64 * dt);
            let rel = (got - want).abs() / want.abs().max(1.0);
            worst_exact = worst_exact.max(rel);
        }
        for p in 0..=3 {
            let terms: Vec<f64> = (0..101)
                .map(|j| k.weights[j] * (k.offset(j) * dt).powi(p as i32))
                .collect();
            let sum: f64 = terms.iter().sum();
            let scale: f64 = terms.iter().map(|v| v.abs()).sum();
            let want = if p == d {
                (1..=d).product::<usize>() as f64
            } else {
                0.0
            };
            worst_moment = worst_moment.max((sum - want).abs() / scale.max(want));
        }
    }
    verdict(
        worst_exact <= 1e-9 && worst_moment <= 1e-10,
        format!("worst derivative rel err {worst_exact:.2e} (1e-9); worst moment rel err {worst_moment:.2e} (1e-10)"),
    )
}

fn c10_pipeline() -> Verdict {
    let path = Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../configs/ecg_example.conf"
    ));
    let cfg = parse_config(&std::fs::read_to_string(path).unwrap()).unwrap();
    let p = cfg.ecg_params().unwrap();
    let (x0, y0, z0) = cfg.ecg_start();
    let omega_ok = (p.omega - 2.0 * PI).abs() < 1e-12
        && p.noise_sd == 0.025
        && p.form == qdyn::ecg::EcgForm::Full;
    let frame = integrate_ecg(&p, x0, y0, z0, 10.0, 0.0005).unwrap();
    let frame = add_measurement_noise(&frame, "z", p.noise_sd, p.noise_seed).unwrap();
    let beats = extract_frame_features(&frame, &FeatureConfig::default()).unwrap();
    let rr: Vec<f64> = beats.iter().filter_map(|b| b.rr).collect();
    let hr: Vec<f64> = beats.iter().filter_map(|b| b.hr).collect();
    if rr.is_empty() {
        return verdict(false, format!("{} beats, no RR intervals", beats.len()));
    }
    let mean_rr = rr.iter().sum::<f64>() / rr.len() as f64;
    let mean_hr = hr.iter().sum::<f64>() / hr.len() as f64;
    verdict(
        omega_ok
            && (9..=10).contains(&beats.len())
            && (mean_rr - 1.0).abs() <= 0.01
            && (mean_hr - 60.0).abs() <= 1.0,
        format!(
            "{} beats; mean RR {mean_rr:.5} s; mean HR {mean_hr:.4} bpm",
            beats.len()
        ),
    )
}

fn c11_heartbeats() -> Verdict {
    let sets = [
        (0.15, -0.45, 0.45),
        (0.15, -0.6, 0.5),
        (0.15, -0.65, 0.58),
        (0.15, -0.75, 0.6),
    ];
    let mut notes = String::new();
    let mut ok = true;
    for (i, (a, sigma, b)) in sets.iter().enumerate() {
        let tr =
            iterate_system(&SystemParams::new(*a, *b, *sigma).unwrap(), 0.07, 0.08, 500).unwrap();
        let finite = tr.diverged_at.is_none() && tr.states.len() == 500;
        let (a, b, s) = (a.to_string(), b.to_string(), sigma.to_string());
        let (code, out) = cli(&[
            "system", "--a", &a, "--b", &b, "--sigma", &s, "--x0", "0.07", "--y0", "0.08",
            "--steps", "500",
        ]);
        let golden_path = format!(
            "{}/tests/golden/heartbeat{}.csv",
            env!("CARGO_MANIFEST_DIR"),
            i + 1
        );
        let golden = std::fs::read_to_string(&golden_path).unwrap_or_default();
        let matches = code == 0 && out == golden;
        ok &= finite && matches;
        let _ = write!(notes, "ex{}: finite={finite} golden={matches}; ", i + 1);
    }
    verdict(ok, notes.trim_end_matches("; ").to_string())
}

fn c12_threads() -> Verdict {
    let spec = fig1();
    let images: Vec<Vec<u8>> = [1, 2, 8]
        .iter()
        .map(|&t| {
            encode_pgm(
                &render_escape_grid_with_threads(&spec, t).unwrap(),
                PgmStyle::Grayscale,
            )
        })
        .collect();
    let identical = images.windows(2).all(|w| w[0] == w[1]);

    let small = GridSpec {
        pixels: 64,
        ..fig1()
    };
    let grid = render_escape_grid(&small).unwrap();
    let step = 2.0 * small.radius / 64.0;
    let mut mismatches = 0;
    for row in 0..64 {
        for col in 0..64 {
            let u = -small.radius + (col as f64 + 0.5) * step;
            let v = small.radius - (row as f64 + 0.5) * step;
            let (r, th) = (u.hypot(v), v.atan2(u));
            let (a, b) = (th.cos(), th.sin());
            let (mut prev, mut curr, mut code) = (0.0_f64, r, 0);
            for m in 1..=small.iters {
                let next = a * curr * curr + b * prev * prev;
                if next.abs() >= small.threshold || next.is_nan() {
                    code = m;
                    break;
                }
                prev = curr;
                curr = next;
            }
            if grid.code(row, col) != code {
                mismatches += 1;
            }
        }
    }
    verdict(
        identical && mismatches == 0,
        format!("1/2/8 workers byte-identical: {identical}; 64x64 oracle mismatches: {mismatches}"),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 12] = [
        ("case-1 bound", c1_case1_bound),
        ("fixed point report", c2_stability),
        ("case-3 shrinkage", c3_shrinkage),
        ("cut-off robustness", c4_cutoff),
        ("alpha <= 1 inclusiveness", c5_alpha_half),
        ("ECG limit cycle", c6_limit_cycle),
        ("integrator order", c7_rk4_order),
        ("noise statistics", c8_noise),
        ("Savitzky-Golay exactness", c9_sg),
        ("feature pipeline", c10_pipeline),
        ("heartbeat examples", c11_heartbeats),
        ("thread determinism", c12_threads),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        println!(
            "{} {:>2} {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
        if !v.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
