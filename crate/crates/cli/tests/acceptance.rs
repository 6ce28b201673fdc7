//! Acceptance suite. Each criterion writes one PASS or FAIL line to stderr; the test
//! fails at the end if any criterion failed.
//!
//! The squeezed rho = 3 purity check integrates the master equation at Fock
//! truncations of 5000 to 8300 and takes over an hour on one core. Setting
//! `DECOH_QUICK_ACCEPTANCE=1` caps the oracle at the CLI's automatic
//! truncation limit instead; that criterion then reports FAIL, since it was
//! not verified.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write as _;
use std::process::Command;
use std::time::Instant;

use decoh_cli::commands::MAX_AUTO_DIM;
use decoh_core::closedform::{self, cat, fock, squeezed};
use decoh_core::measures::{equidistant_equilibrium, thermalization, EquidistantSpectrum};
use decoh_core::model::{classical_energy, compact_time, fluctuation_energy, initial_gaussian};
use decoh_core::oracle::{default_dim, evolve_diagonal, trajectory_measures};
use decoh_core::propagator::{evolve_gaussian, kernel, kernel_numeric, oscillator_model, positivity_check, WignerGrid};
use decoh_core::timescales::{detect_plateau, t_d_estimate, t_d_numeric, Field};
use decoh_core::{closedform::gf::gaussian_diag_gf, BathParams, CompactTime, InitialState, MeasureRecord};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

type Outcome = (bool, String);

fn bath(nu: f64) -> BathParams {
    BathParams::new(1.0, nu).unwrap()
}

fn ct(u: f64) -> CompactTime {
    CompactTime::new(u).unwrap()
}

/// Twelve interior points u = i/13.
fn u_points() -> Vec<CompactTime> {
    (1..=12).map(|i| ct(i as f64 / 13.0)).collect()
}

fn fields(r: &MeasureRecord) -> [Option<f64>; 5] {
    [Some(r.mu), Some(r.lambda), r.coherence, r.thermalization, Some(r.p0)]
}

/// Largest |closed form - oracle| over all measures and u-points.
fn oracle_gap(state: &InitialState, b: &BathParams) -> Result<f64, String> {
    let us = u_points();
    let orc = trajectory_measures(state, b, &us, None, true).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (u, o) in us.iter().zip(&orc) {
        let c = closedform::measures(state, *u, b).map_err(|e| e.to_string())?;
        for (x, y) in fields(&c).iter().zip(fields(o)) {
            match (x, y) {
                (Some(x), Some(y)) => worst = worst.max((x - y).abs()),
                (None, None) => {}
                _ => return Err(format!("{state:?}: defined in one route only")),
            }
        }
    }
    Ok(worst)
}

fn populations(s: &InitialState, dim: usize) -> Vec<f64> {
    let c = s.amplitudes().unwrap();
    (0..dim).map(|n| c.get(n).map_or(0.0, |z| z.norm_sqr())).collect()
}

fn sweep_gap(cases: &[(InitialState, f64)], tol: f64) -> Outcome {
    let mut worst = 0.0f64;
    for (s, nu) in cases {
        match oracle_gap(s, &bath(*nu)) {
            Ok(g) => worst = worst.max(g),
            Err(e) => return (false, format!("{s:?} nu={nu}: {e}")),
        }
    }
    (worst < tol, format!("max |closed - oracle| = {worst:.2e} over {} cases", cases.len()))
}

fn c1_coherent() -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for a in [0.5, 1.0, 10.0] {
        for nu in [0.0, 1.0, 10.0] {
            cases.push((InitialState::Coherent { a, phi: 0.0 }, nu));
        }
    }
    let (ok, msg) = sweep_gap(&cases, 1e-7);
    let secs = start.elapsed().as_secs_f64();
    (ok && secs < 60.0, format!("{msg}; {secs:.1} s"))
}

fn accompanying_by_grid(a: f64, phi: f64, u: f64, nu: f64) -> f64 {
    let b = bath(nu);
    let diff = |u: f64| {
        let b = &b;
        WignerGrid::sample(11.0, 1101, move |q, p| {
            cat::wigner(q, p, a, phi, ct(u), b).unwrap() - cat::mixture_wigner(q, p, a, ct(u), b)
        })
        .integrate(|w| w * w)
    };
    diff(u) / diff(0.0)
}

fn c2_cat() -> Outcome {
    let mut cases = Vec::new();
    for phi_cat in [0.0, FRAC_PI_2, PI] {
        for a in [1.0, 2.0, 10.0] {
            for nu in [0.0, 5.0] {
                cases.push((InitialState::Cat { a, phi_cat }, nu));
            }
        }
    }
    let (ok, msg) = sweep_gap(&cases, 1e-7);
    let mut worst_f = 0.0f64;
    for phi in [0.0, FRAC_PI_2, PI] {
        for a in [1.0, 2.0, 10.0] {
            for nu in [0.0, 5.0] {
                let want = accompanying_by_grid(a, phi, 0.4, nu);
                let got = cat::accompanying_coherence(a, phi, ct(0.4), &bath(nu)).unwrap();
                worst_f = worst_f.max((got - want).abs());
            }
        }
    }
    (ok && worst_f < 1e-5, format!("{msg}; accompanying coherence vs Wigner grid {worst_f:.2e}"))
}

fn c3_squeezed() -> Outcome {
    let quick = std::env::var("DECOH_QUICK_ACCEPTANCE").is_ok_and(|v| v == "1");
    let us = u_points();
    let mut notes = Vec::new();
    let mut ok = true;
    let (mut mu_gap, mut lam_gap) = (0.0f64, 0.0f64);
    for rho in [0.5, 3.0] {
        for a in [0.0, 1.0] {
            for nu in [0.0, 2.0] {
                let s = InitialState::Squeezed { a, phi: FRAC_PI_2, rho };
                let b = bath(nu);
                let dim = default_dim(&s, &b).unwrap();

                // Populations alone: one tridiagonal band.
                let p0 = populations(&s, dim);
                let ts: Vec<f64> = us.iter().map(|u| u.time(&b)).collect();
                for (u, p) in us.iter().zip(evolve_diagonal(&p0, &ts, &b).unwrap()) {
                    let lam: f64 = p.iter().map(|x| x * x).sum();
                    lam_gap = lam_gap.max((lam - squeezed::lambda(a, FRAC_PI_2, rho, *u, &b).unwrap()).abs());
                }

                let cap = if quick { dim.min(MAX_AUTO_DIM) } else { dim };
                match trajectory_measures(&s, &b, &us, Some(cap), true) {
                    Ok(orc) => {
                        for (u, o) in us.iter().zip(&orc) {
                            mu_gap = mu_gap.max((o.mu - squeezed::mu(rho, *u, &b)).abs());
                        }
                    }
                    Err(e) => {
                        ok = false;
                        notes.push(format!(
                            "rho={rho} a={a} nu={nu}: purity oracle not run (needs dim {dim}, capped at {cap}: {e})"
                        ));
                    }
                }
            }
        }
    }
    ok &= mu_gap < 1e-7 && lam_gap < 1e-7;

    let mut rng = StdRng::seed_from_u64(3);
    let mut gf_gap = 0.0f64;
    for rho in [0.5, 3.0] {
        for a in [0.0, 1.0] {
            for nu in [0.0, 2.0] {
                let s = InitialState::Squeezed { a, phi: FRAC_PI_2, rho };
                let g0 = initial_gaussian(&s).unwrap();
                for u in u_points() {
                    let g = evolve_gaussian(&g0, u.time(&bath(nu)), &bath(nu));
                    for _ in 0..20 {
                        let z = Complex64::new(rng.random_range(0.0..=1.0), 0.0);
                        let x = squeezed::diag_gf(a, FRAC_PI_2, rho, u, nu, z);
                        let y = gaussian_diag_gf(&g, z).unwrap();
                        gf_gap = gf_gap.max((x - y).norm());
                    }
                }
            }
        }
    }
    ok &= gf_gap < 1e-10;
    let mut msg = format!("purity gap {mu_gap:.2e} (cases run), populations-purity gap {lam_gap:.2e}, generating function gap {gf_gap:.2e}");
    for n in notes {
        msg.push_str("; ");
        msg.push_str(&n);
    }
    (ok, msg)
}

fn c4_fock() -> Outcome {
    let mut worst = 0.0f64;
    for m in [1u32, 5, 20] {
        for nu in [0.01, 1.0, 10.0] {
            let s = InitialState::Fock { m };
            let b = bath(nu);
            let us = u_points();
            let p0 = populations(&s, default_dim(&s, &b).unwrap());
            let ts: Vec<f64> = us.iter().map(|u| u.time(&b)).collect();
            for (u, p) in us.iter().zip(evolve_diagonal(&p0, &ts, &b).unwrap()) {
                let orc: f64 = p.iter().map(|x| x * x).sum();
                let leg = fock::lambda(m, *u, &b).unwrap();
                let quad = fock::lambda_quadrature(m, *u, &b).unwrap();
                worst = worst.max((leg - quad).abs()).max((leg - orc).abs()).max((quad - orc).abs());
            }
        }
    }
    (worst < 1e-9, format!("max pairwise gap {worst:.2e}"))
}

fn c5_slope() -> Outcome {
    let states = [
        InitialState::Coherent { a: 3.0, phi: 0.2 },
        InitialState::Cat { a: 2.0, phi_cat: PI },
        InitialState::Squeezed { a: 1.0, phi: 0.7, rho: 1.2 },
        InitialState::Fock { m: 7 },
    ];
    let dt = 1e-6;
    let mut worst = 0.0f64;
    let mut worst_zero = 0.0f64;
    for s in &states {
        for nu in [0.0, 0.4, 3.0] {
            let b = BathParams::new(0.7, nu).unwrap();
            let sigma = fluctuation_energy(s).unwrap().sigma_a;
            let want = -4.0 * b.gamma * (nu + (1.0 + 2.0 * nu) * sigma);
            let mu = |t: f64| closedform::mu(s, compact_time(t, &b).unwrap(), &b).unwrap();
            let got = (-3.0 * mu(0.0) + 4.0 * mu(dt) - mu(2.0 * dt)) / (2.0 * dt);
            if want == 0.0 {
                worst_zero = worst_zero.max(got.abs());
            } else {
                worst = worst.max((got / want - 1.0).abs());
            }
        }
    }
    (
        worst < 1e-4 && worst_zero < 1e-6,
        format!("max relative error {worst:.2e}; zero-slope case |slope| {worst_zero:.1e}"),
    )
}

/// Families and baths of criteria 1 to 4.
fn acceptance_matrix() -> Vec<(InitialState, f64)> {
    let mut out = Vec::new();
    for a in [0.5, 1.0, 10.0] {
        for nu in [0.0, 1.0, 10.0] {
            out.push((InitialState::Coherent { a, phi: 0.0 }, nu));
        }
    }
    for phi_cat in [0.0, FRAC_PI_2, PI] {
        for a in [1.0, 2.0, 10.0] {
            for nu in [0.0, 5.0] {
                out.push((InitialState::Cat { a, phi_cat }, nu));
            }
        }
    }
    for rho in [0.5, 3.0] {
        for a in [0.0, 1.0] {
            for nu in [0.0, 2.0] {
                out.push((InitialState::Squeezed { a, phi: FRAC_PI_2, rho }, nu));
            }
        }
    }
    for m in [1, 5, 20] {
        for nu in [0.01, 1.0, 10.0] {
            out.push((InitialState::Fock { m }, nu));
        }
    }
    out
}

fn c6_equilibrium() -> Outcome {
    let late = ct(1.0 - 1e-9);
    let (mut dmu, mut cmax, mut dd) = (0.0f64, 0.0f64, 0.0f64);
    let cases = acceptance_matrix();
    for (s, nu) in &cases {
        let r = closedform::measures(s, late, &bath(*nu)).unwrap();
        dmu = dmu.max((r.mu - 1.0 / (1.0 + 2.0 * nu)).abs());
        if let Some(c) = r.coherence {
            cmax = cmax.max(c);
        }
        if *nu > 0.0 {
            dd = dd.max((r.thermalization.unwrap() - 1.0).abs());
        }
    }
    (
        dmu < 1e-6 && cmax < 1e-5 && dd < 1e-5,
        format!("{} cases: |mu - mu_eq| {dmu:.1e}, C {cmax:.1e}, |D - 1| {dd:.1e}", cases.len()),
    )
}

fn c7_equidistant() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let xi = rng.random_range(1e-3..0.999);
        let levels = rng.random_range(2u32..=200);
        let e = equidistant_equilibrium(EquidistantSpectrum { levels, xi }).unwrap();
        worst = worst.max((thermalization(e.mu, e.p0, e.pf).unwrap() - 1.0).abs());
    }
    (worst < 1e-10, format!("max |D_eq - 1| = {worst:.1e} over 1000 draws"))
}

fn series(s: &InitialState, b: &BathParams) -> Vec<MeasureRecord> {
    (0..400).map(|i| closedform::measures(s, ct(i as f64 / 400.0), b).unwrap()).collect()
}

fn c8_plateaus() -> Outcome {
    let s = InitialState::Cat { a: 20.0, phi_cat: PI };
    let c = detect_plateau(&series(&s, &bath(0.0)), Field::Coherence);
    let d = detect_plateau(&series(&s, &bath(0.01)), Field::Thermalization);
    let ok = c.is_some_and(|p| (0.45..=0.55).contains(&p.level)) && d.is_some_and(|p| (0.28..=0.38).contains(&p.level));
    let show = |p: Option<decoh_core::timescales::Plateau>| {
        p.map_or("none".to_string(), |p| format!("{:.3} on u in [{:.3}, {:.3}]", p.level, p.u_start, p.u_end))
    };
    (ok, format!("C plateau {}, D plateau {}", show(c), show(d)))
}

fn c9_decoherence_time() -> Outcome {
    let b = bath(0.0);
    let mut worst = 0.0f64;
    let mut ts = Vec::new();
    for a in [1e2, 1e3, 1e4] {
        let s = InitialState::Coherent { a, phi: 0.0 };
        let t = t_d_numeric(&s, &b, 0.1).unwrap();
        if a < 1e4 {
            worst = worst.max((t / t_d_estimate(&s, &b, 0.1).unwrap() - 1.0).abs());
        }
        ts.push((a.ln(), t));
    }
    // Least-squares line t = c0 + c1 ln a.
    let n = ts.len() as f64;
    let (sx, sy) = ts.iter().fold((0.0, 0.0), |(x, y), (l, t)| (x + l, y + t));
    let (mx, my) = (sx / n, sy / n);
    let c1 = ts.iter().map(|(l, t)| (l - mx) * (t - my)).sum::<f64>()
        / ts.iter().map(|(l, _)| (l - mx).powi(2)).sum::<f64>();
    let c0 = my - c1 * mx;
    let resid = ts.iter().map(|(l, t)| ((c0 + c1 * l) / t - 1.0).abs()).fold(0.0, f64::max);
    (
        worst < 0.1 && resid < 0.05,
        format!("estimate gap {:.2}%, log-fit residual {:.2}% (slope {c1:.3})", 100.0 * worst, 100.0 * resid),
    )
}

fn one_minus_d(s: &InitialState, b: &BathParams, eps: f64) -> f64 {
    1.0 - closedform::measures(s, CompactTime::from_decay(eps).unwrap(), b).unwrap().thermalization.unwrap()
}

/// Richardson-extrapolated coefficient of eps^k in 1 - D(1 - eps).
fn coefficient(s: &InitialState, b: &BathParams, k: i32, e1: f64) -> f64 {
    let e2 = 2.0 * e1;
    // The next term is one order higher in both cases.
    let (k1, k2) = (one_minus_d(s, b, e1) / e1.powi(k), one_minus_d(s, b, e2) / e2.powi(k));
    2.0 * k1 - k2
}

fn c10_thermalization() -> Outcome {
    let mut worst = 0.0f64;
    let linear = [
        InitialState::Coherent { a: 20.0, phi: 0.0 },
        InitialState::Squeezed { a: 5.0, phi: 0.7, rho: 0.8 },
        InitialState::Squeezed { a: 2.0, phi: FRAC_PI_2, rho: 1.5 },
    ];
    for (s, nu) in linear.iter().zip([0.1, 0.1, 0.5]) {
        let b = bath(nu);
        let want = (1.0 + 2.0 * nu) * classical_energy(s).unwrap() / (2.0 * nu * nu * (1.0 + nu));
        worst = worst.max((coefficient(s, &b, 1, 1e-8) / want - 1.0).abs());
    }
    for (rho, nu) in [(1.0f64, 0.1), (2.0, 0.01)] {
        let s = InitialState::Squeezed { a: 0.0, phi: 0.0, rho };
        let want = ((2.0 * rho).sinh() / (4.0 * nu * (1.0 + nu))).powi(2);
        worst = worst.max((coefficient(&s, &bath(nu), 2, 1e-5) / want - 1.0).abs());
    }
    for (m, nu) in [(20u32, 0.01f64), (3, 0.5)] {
        let want = (m * (m + 1)) as f64 / (4.0 * nu * (1.0 + nu).powi(2));
        worst = worst.max((coefficient(&InitialState::Fock { m }, &bath(nu), 2, 1e-5) / want - 1.0).abs());
    }
    (worst < 0.01, format!("max relative coefficient error {:.3}%", 100.0 * worst))
}

fn c11_propagator() -> Outcome {
    let mut rng = StdRng::seed_from_u64(11);
    let mut kgap = 0.0f64;
    for _ in 0..100 {
        let b = BathParams::new(rng.random_range(0.1..2.0), rng.random_range(0.0..5.0)).unwrap();
        let t = rng.random_range(0.05..5.0);
        let mut x = || rng.random_range(-4.0..4.0);
        let (q, p, q0, p0) = (x(), x(), x(), x());
        let exact = kernel(t, &b).unwrap().density(q, p, q0, p0);
        let num = kernel_numeric(&oscillator_model(&b), t).unwrap().density(q, p, q0, p0);
        kgap = kgap.max((exact - num).abs() / num.abs().max(1.0));
    }
    let mut sgap = 0.0f64;
    for _ in 0..100 {
        let b = BathParams::new(rng.random_range(0.05..2.0), rng.random_range(0.0..10.0)).unwrap();
        let (t1, t2) = (rng.random_range(0.01..4.0), rng.random_range(0.01..4.0));
        let composed = kernel(t1, &b).unwrap().then(&kernel(t2, &b).unwrap());
        let direct = kernel(t1 + t2, &b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                sgap = sgap.max((composed.mean_map[i][j] - direct.mean_map[i][j]).abs());
                sgap = sgap.max((composed.cov[i][j] - direct.cov[i][j]).abs());
            }
        }
    }
    let margins: Vec<f64> = [0.1, 1.0, 3.0]
        .iter()
        .map(|&g| positivity_check(&oscillator_model(&BathParams::new(g, 0.0).unwrap())).margin)
        .collect();
    let exact = margins.iter().all(|&m| m == 0.0);
    (
        kgap < 1e-9 && sgap < 1e-10 && exact,
        format!("kernel gap {kgap:.1e}, semigroup gap {sgap:.1e}, zero-temperature margins {margins:?}"),
    )
}

fn c12_determinism() -> Outcome {
    let args = "sweep --state coherent,cat,squeezed,fock --a 0.5,2,20 --rho 0.3,1.5 --cat-phase 0,pi \
                --fock-m 1,7 --nu 0,0.1,3 --points 200";
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_decoh"))
            .args(args.split_whitespace())
            .args(["--threads", threads])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let base = run("1");
    let same = ["2", "4", "4"].iter().all(|t| run(t) == base);
    (same, format!("{} bytes, threads 1/2/4/4", base.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("coherent oracle equivalence", c1_coherent),
        ("cat oracle equivalence", c2_cat),
        ("squeezed oracle equivalence", c3_squeezed),
        ("Fock triple agreement", c4_fock),
        ("purity-loss slope", c5_slope),
        ("equilibrium limits", c6_equilibrium),
        ("equidistant spectrum thermalizes fully", c7_equidistant),
        ("cat plateaus", c8_plateaus),
        ("decoherence-time estimate", c9_decoherence_time),
        ("thermalization asymptotics", c10_thermalization),
        ("propagator integrity", c11_propagator),
        ("determinism across thread counts", c12_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = f();
        let tag = if ok { "PASS" } else { "FAIL" };
        // Straight to the stderr handle so the line survives test-output capture.
        let line = format!("{tag} [{:>2}] {name}: {detail} ({:.1} s)", i + 1, start.elapsed().as_secs_f64());
        let _ = writeln!(std::io::stderr(), "{line}");
        if !ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
