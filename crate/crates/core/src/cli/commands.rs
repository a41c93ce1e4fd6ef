use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use super::{Command, MethodArg};
use crate::bessel::{addition_sums, addition_sums_exact};
use crate::density::DensityRealization;
use crate::error::{Error, Result};
use crate::kac_rice::{
    abs_gaussian_montecarlo, abs_gaussian_reduction, expected_critical_points, kappa_constant,
    kappa_five_half, periodic_average, AbsQuadraticCoeffs,
};
use crate::regularity::RegularityModel;
use crate::rng::sample_seed;
use crate::series::{series_asymptotic_with, series_direct, Method, SeriesSpec};
use crate::wave::{
    count_record, far_field_predict, find_critical_points, l_max_for_radius, match_far_field,
    SearchParams, WaveSample,
};

struct Problems(Vec<String>);

impl Problems {
    fn new() -> Self {
        Self(Vec::new())
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }

    fn finish(self) -> Result<()> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(self.0))
        }
    }
}

fn finite_all(p: &mut Problems, name: &str, xs: &[f64]) {
    for &x in xs {
        p.check(x.is_finite(), || format!("{name} must be finite, got {x}"));
    }
}

fn positive_all(p: &mut Problems, name: &str, xs: &[f64]) {
    for &x in xs {
        p.check(x > 0.0 && x.is_finite(), || format!("{name} must be positive, got {x}"));
    }
}

pub(super) fn dispatch(cmd: Command) -> Result<String> {
    match cmd {
        Command::Kappa { s } => kappa(&s),
        Command::Series { s, m, m_prime, r, method, tol, min_radius } => {
            series(&s, m, m_prime, &r, method, tol, min_radius)
        }
        Command::Expect { s, radius, r_min, method } => expect(&s, &radius, r_min, method),
        Command::Simulate { s, radius, samples, seed, l_max, grid_density, newton_tol, r_min } => {
            let params = SearchParams { grid_density, newton_tol, r_min, ..SearchParams::default() };
            simulate(s, radius, samples, seed, l_max, &params)
        }
        Command::Farfield { s, seed, radius, r_lo } => farfield(s, seed, radius, r_lo),
        Command::Spectrum { s, seed, samples, blocks } => spectrum(s, seed, samples, blocks),
        Command::Fcrit { s, seed, samples, l_max } => fcrit(s, seed, samples, l_max),
        Command::Bench { s, r, reps } => bench(&s, &r, reps),
        Command::Selftest => selftest(),
    }
}

fn kappa(s: &[f64]) -> Result<String> {
    let mut p = Problems::new();
    finite_all(&mut p, "s", s);
    p.finish()?;
    let mut out = String::from("s,regime,kappa,exponent,log_power\n");
    for &si in s {
        let k = kappa_constant(si)?;
        writeln!(out, "{},{},{},{},{}", k.s, k.regime.as_str(), k.kappa, k.exponent, k.log_power).unwrap();
    }
    Ok(out)
}

fn series(s: &[f64], m: u32, m_prime: u32, r: &[f64], method: MethodArg, tol: f64, min_radius: f64) -> Result<String> {
    let mut p = Problems::new();
    finite_all(&mut p, "s", s);
    positive_all(&mut p, "r", r);
    p.check(tol > 0.0, || format!("tol must be positive, got {tol}"));
    if method != MethodArg::Direct {
        for &ri in r {
            p.check(ri >= min_radius, || format!("asymptotic evaluation needs r >= {min_radius}, got {ri}"));
        }
    }
    p.finish()?;
    let mut out = String::from("s,m,m_prime,r,method,value,truncation,tail_bound\n");
    for &si in s {
        let spec = SeriesSpec::new(RegularityModel::new(si), m, m_prime);
        for &ri in r {
            if method != MethodArg::Asymptotic {
                let v = series_direct(&spec, ri, tol)?;
                writeln!(
                    out,
                    "{si},{m},{m_prime},{ri},direct,{},{},{:e}",
                    v.value,
                    v.truncation.unwrap_or(0),
                    v.tail_bound.unwrap_or(0.0)
                )
                .unwrap();
            }
            if method != MethodArg::Direct {
                let v = series_asymptotic_with(&spec, ri, min_radius)?;
                writeln!(out, "{si},{m},{m_prime},{ri},asymptotic,{},,", v.value).unwrap();
            }
        }
    }
    Ok(out)
}

fn expect(s: &[f64], radius: &[f64], r_min: f64, method: MethodArg) -> Result<String> {
    let mut p = Problems::new();
    finite_all(&mut p, "s", s);
    positive_all(&mut p, "R", radius);
    p.check(r_min > 0.0, || format!("r_min must be positive, got {r_min}"));
    for &r in radius {
        p.check(r > r_min, || format!("R must exceed r_min = {r_min}, got {r}"));
    }
    p.check(method != MethodArg::Both, || "expect takes --method direct or asymptotic".into());
    p.finish()?;
    let method = if method == MethodArg::Asymptotic { Method::Asymptotic } else { Method::Direct };
    let mut out = String::from("s,R,expectation,predicted_leading,ratio\n");
    for &si in s {
        let model = RegularityModel::new(si);
        let k = kappa_constant(si)?;
        for &r in radius {
            let e = expected_critical_points(&model, r, r_min, method)?;
            if e.warning {
                eprintln!("warning: quadrature for s={si}, R={r} did not reach relative 1e-6");
            }
            let pred = k.predicted(r);
            writeln!(out, "{si},{r},{},{pred},{}", e.value, e.value / pred).unwrap();
        }
    }
    Ok(out)
}

fn search_problems(p: &mut Problems, params: &SearchParams) {
    if let Err(Error::Precondition(msg)) = params.validate() {
        p.0.extend(msg.split("; ").map(String::from));
    }
}

fn simulate(s: f64, radius: f64, samples: usize, seed: u64, l_max: Option<usize>, params: &SearchParams) -> Result<String> {
    let mut p = Problems::new();
    finite_all(&mut p, "s", &[s]);
    positive_all(&mut p, "R", &[radius]);
    p.check(samples >= 1, || "samples must be >= 1".into());
    search_problems(&mut p, params);
    p.check(radius > params.r_min, || format!("R must exceed r_min = {}, got {radius}", params.r_min));
    let need = l_max_for_radius(radius);
    let l_max = l_max.unwrap_or(need);
    p.check(l_max >= need, || format!("l_max must be >= ceil(1.5 R) + 32 = {need}, got {l_max}"));
    p.finish()?;
    let model = RegularityModel::new(s);
    let records: Vec<_> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let sample = WaveSample::sample(&model, sample_seed(seed, i), l_max)?;
            count_record(&sample, radius, params)
        })
        .collect::<Result<_>>()?;
    let mut out = String::from("seed,s,R,l_max,n_critical,n_saddle,n_extremum,wall_time\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.seed, r.s, r.radius, r.l_max, r.n_critical, r.n_saddle, r.n_extremum, r.wall_time
        )
        .unwrap();
    }
    Ok(out)
}

fn farfield(s: f64, seed: u64, radius: f64, r_lo: f64) -> Result<String> {
    let mut p = Problems::new();
    p.check(s > 5.0, || format!("far-field matching needs s > 5, got {s}"));
    positive_all(&mut p, "R", &[radius]);
    p.check(r_lo >= 0.0 && r_lo < radius, || format!("r_lo must lie in [0, R), got {r_lo}"));
    p.finish()?;
    let sample = WaveSample::sample(&RegularityModel::new(s), sample_seed(seed, 0), l_max_for_radius(radius))?;
    let pts = find_critical_points(&sample, radius, &SearchParams::default())?;
    let n_lo = (r_lo / std::f64::consts::PI).floor() as i64 - 1;
    let n_hi = (radius / std::f64::consts::PI).ceil() as i64 + 1;
    let pred = far_field_predict(&sample, n_lo, n_hi)?;
    let mut out = String::from("n,phi_star,r_pred,r_found,distance\n");
    for m in match_far_field(&pred, &pts, r_lo) {
        writeln!(out, "{},{},{},{},{}", m.n, m.phi_star, m.r_pred, m.r_found, m.distance).unwrap();
    }
    Ok(out)
}

fn spectrum(s: f64, seed: u64, samples: usize, blocks: u32) -> Result<String> {
    let mut p = Problems::new();
    finite_all(&mut p, "s", &[s]);
    p.check((5..=24).contains(&blocks), || format!("blocks must lie in 5..=24, got {blocks}"));
    p.check(samples >= 1, || "samples must be >= 1".into());
    p.finish()?;
    let model = RegularityModel::new(s);
    let l_max = (1usize << blocks) - 1;
    let mut out = String::from("seed,s,N,block_energy\n");
    for i in 0..samples as u64 {
        let sample = WaveSample::sample(&model, sample_seed(seed, i), l_max)?;
        let prof = DensityRealization::from_sample(&sample).dyadic_profile(blocks)?;
        for (n, e) in prof.blocks {
            writeln!(out, "{},{s},{n},{e}", sample.seed()).unwrap();
        }
    }
    Ok(out)
}

fn fcrit(s: f64, seed: u64, samples: usize, l_max: usize) -> Result<String> {
    let mut p = Problems::new();
    finite_all(&mut p, "s", &[s]);
    p.check(l_max >= 8, || format!("l_max must be >= 8, got {l_max}"));
    p.check(samples >= 1, || "samples must be >= 1".into());
    p.finish()?;
    let model = RegularityModel::new(s);
    let rows: Vec<String> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let sample = WaveSample::sample(&model, sample_seed(seed, i), l_max)?;
            let c = DensityRealization::from_sample(&sample).critical_points();
            if c.vanishing_warning {
                eprintln!("warning: |f| nearly vanishes for seed {}", sample.seed());
            }
            Ok(format!("{},{s},{},{}\n", sample.seed(), c.count, c.min_abs_f))
        })
        .collect::<Result<_>>()?;
    Ok(std::iter::once("seed,s,n_f_crit,min_abs_f\n".to_string()).chain(rows).collect())
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

fn bench(s: &[f64], r: &[f64], reps: usize) -> Result<String> {
    let mut p = Problems::new();
    finite_all(&mut p, "s", s);
    positive_all(&mut p, "r", r);
    p.check(reps >= 5, || format!("reps must be >= 5, got {reps}"));
    for &ri in r {
        p.check(ri >= 10.0, || format!("bench radii must be >= 10 for the asymptotic method, got {ri}"));
    }
    p.finish()?;
    let mut out = String::from(
        "s,r,direct_median_s,asymptotic_median_s,direct_value,asymptotic_value,rel_error,recommended\n",
    );
    for &si in s {
        let spec = SeriesSpec::new(RegularityModel::new(si), 0, 0);
        for &ri in r {
            let mut td = Vec::with_capacity(reps);
            let mut ta = Vec::with_capacity(reps);
            let mut dv = 0.0;
            let mut av = 0.0;
            for _ in 0..reps {
                let t = Instant::now();
                dv = std::hint::black_box(series_direct(&spec, ri, 1e-15)?).value;
                td.push(t.elapsed().as_secs_f64());
                let t = Instant::now();
                av = std::hint::black_box(series_asymptotic_with(&spec, ri, 10.0)?).value;
                ta.push(t.elapsed().as_secs_f64());
            }
            let (md, ma) = (median(td), median(ta));
            let rel = ((av - dv) / dv).abs();
            let rec = if rel < 0.01 && ma < md { "asymptotic" } else { "direct" };
            writeln!(out, "{si},{ri},{md},{ma},{dv},{av},{rel},{rec}").unwrap();
        }
    }
    Ok(out)
}

/// `(name, value, expected, tolerance)`; tolerance is absolute unless noted in the name.
fn selftest_checks() -> Result<Vec<(String, f64, f64, f64)>> {
    let mut checks = Vec::new();
    let names = ["sum_eps_J2", "sum_eps_Jp2", "sum_eps_l2_J_Jp", "sum_eps_l4_J2"];
    for &r in &[0.5, 7.0, 63.2, 250.0, 480.0] {
        let got = addition_sums(r)?;
        let want = addition_sums_exact(r);
        for k in 0..4 {
            checks.push((format!("{}(r={r})", names[k]), got[k], want[k], 1e-9 * want[k].abs()));
        }
    }
    for &b in &[0.0, 0.3, -0.3, 0.9, -0.9] {
        let v = periodic_average(|r| 1.0 / (1.0 + b * (2.0 * r).sin()), 1.0, 0.0, 1.0)?.integral;
        checks.push((format!("periodic_integral(b={b})"), v, std::f64::consts::PI / (1.0f64 - b * b).sqrt(), 1e-10));
    }
    let exact = [
        ((1.0, 0.0, 0.0), 1.0),
        ((0.0, 0.0, 1.0), 4.0 / std::f64::consts::PI),
        ((1.0, -1.0, 2f64.sqrt()), 4.0 / 3f64.sqrt()),
    ];
    for ((a, b, c), want) in exact {
        let v = abs_gaussian_reduction(AbsQuadraticCoeffs::new(a, b, c));
        checks.push((format!("abs_gaussian({a};{b};{c})"), v, want, 1e-8));
    }
    for (i, &(a, b, c)) in [(0.7, -1.3, 0.4), (-2.0, 0.5, 1.5), (3.0, 2.0, -0.2)].iter().enumerate() {
        let coeffs = AbsQuadraticCoeffs::new(a, b, c);
        let (mc, se) = abs_gaussian_montecarlo(coeffs, 200_000, i as u64);
        checks.push((format!("abs_gaussian_mc({a};{b};{c})"), mc, abs_gaussian_reduction(coeffs), 4.0 * se));
    }
    checks.push(("kappa(0)".into(), kappa_constant(0.0)?.kappa, 1.0 / (2.0 * 3f64.sqrt()), 1e-6));
    checks.push(("kappa_tilde(5/2)".into(), kappa_five_half(), 0.497339, 1e-4));
    Ok(checks)
}

fn selftest() -> Result<String> {
    let mut out = String::from("check,value,expected,pass\n");
    let mut failed = Vec::new();
    for (name, value, expected, tol) in selftest_checks()? {
        let pass = (value - expected).abs() <= tol;
        if !pass {
            failed.push(name.clone());
        }
        writeln!(out, "{name},{value},{expected},{pass}").unwrap();
    }
    if failed.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Error::Consistency { entry: "selftest", value: failed.len() as f64 })
    }
}
