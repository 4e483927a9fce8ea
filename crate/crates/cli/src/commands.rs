use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use yahil::certify::{self, Claim, SuiteOptions, Verdict};
use yahil::integrate::Sample;
use yahil::io::{self, csv_bytes, json_bytes, write_atomic};
use yahil::model::{self, sonic_window, SonicWindow};
use yahil::physical::{physical_fields, PhysicalRow, ProfileInterp};
use yahil::shoot::{self, InvariantReport, Seams, ShootOptions};
use yahil::sonic::{self, SonicSeed};
use yahil::PolytropicIndex;

use crate::{
    CertifyArgs, Cli, Cmd, ExpandArgs, Failure, Format, Global, PhysicalArgs, PlotArgs, SolveArgs,
};

type Res<T> = std::result::Result<T, Failure>;

pub fn run(cli: &Cli) -> Res<()> {
    let g = &cli.global;
    for (name, v) in [
        ("--tol-scale", g.tol_scale),
        ("--tol-rel", g.tol_rel),
        ("--tol-int", g.tol_int),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Failure::Usage(format!("{name} must be positive, got {v}")));
        }
    }
    match &cli.cmd {
        Cmd::Certify(a) => certify_cmd(g, a),
        Cmd::Expand(a) => expand(g, a),
        Cmd::Solve(a) => solve(g, a),
        Cmd::Plotdata(a) => plotdata(g, a),
        Cmd::Physical(a) => physical(g, a),
    }
}

fn gamma_of(g: &Global) -> Res<PolytropicIndex> {
    PolytropicIndex::new(g.gamma).map_err(|e| Failure::Usage(e.to_string()))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Res<()> {
    match out {
        Some(p) => write_atomic(p, bytes)?,
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(bytes)
                .and_then(|_| o.flush())
                .map_err(|e| Failure::Verify(e.to_string()))?;
        }
    }
    Ok(())
}

/// Where the JSON summary of a CSV table goes: the explicit path, a file
/// next to `out`, or standard error.
fn emit_summary<T: Serialize>(explicit: Option<&PathBuf>, out: Option<&Path>, s: &T) -> Res<()> {
    let bytes = json_bytes(s)?;
    match (explicit, out) {
        (Some(p), _) => write_atomic(p, &bytes)?,
        (None, Some(o)) => write_atomic(&o.with_extension("summary.json"), &bytes)?,
        (None, None) => {
            let _ = std::io::stderr().write_all(&bytes);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CertRow<'a> {
    name: &'a str,
    call: &'a str,
    #[serde(rename = "box")]
    box_name: &'a str,
    claim: &'static str,
    threshold: f64,
    tol: f64,
    lo: f64,
    hi: f64,
    reported_lo: Option<f64>,
    reported_hi: Option<f64>,
    intersects_reported: Option<bool>,
    verdict: &'static str,
    boxes: usize,
    wall_ms: f64,
    supplementary: bool,
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn certify_cmd(g: &Global, a: &CertifyArgs) -> Res<()> {
    let opts = SuiteOptions {
        tol_scale: g.tol_scale,
        max_boxes: a.max_boxes,
        threads: io::threads_from_env(),
        include_supplementary: !a.no_supplementary,
    };
    let mut all = certify::manifest();
    let listed = all.len();
    if opts.include_supplementary {
        all.extend(certify::supplementary());
    }
    if let Some(name) = &a.corrupt {
        let l = all
            .iter_mut()
            .find(|l| l.name == name)
            .ok_or_else(|| Failure::Usage(format!("no certificate named {name}")))?;
        l.claim = match l.claim {
            Claim::MaxBelow(t) => Claim::MinAbove(t),
            Claim::MinAbove(t) => Claim::MaxBelow(t),
        };
    }
    let report = certify::suite::run_listings(&all, listed, &opts);
    for c in &report.certificates {
        eprintln!(
            "{:<5} {:<28} [{:.6e}, {:.6e}] {:>8} boxes {:>9.1} ms",
            verdict_str(c.verdict),
            c.name,
            c.enclosure.lo,
            c.enclosure.hi,
            c.boxes,
            c.wall_ms
        );
    }
    let bytes = match g.format {
        Format::Json => json_bytes(&report)?,
        Format::Csv => {
            let rows: Vec<CertRow> = report
                .certificates
                .iter()
                .map(|c| {
                    let (claim, threshold) = match c.claim {
                        Claim::MaxBelow(t) => ("max_below", t),
                        Claim::MinAbove(t) => ("min_above", t),
                    };
                    CertRow {
                        name: &c.name,
                        call: &c.call,
                        box_name: &c.box_name,
                        claim,
                        threshold,
                        tol: c.tol,
                        lo: c.enclosure.lo,
                        hi: c.enclosure.hi,
                        reported_lo: c.reported.map(|r| r.lo),
                        reported_hi: c.reported.map(|r| r.hi),
                        intersects_reported: c.intersects_reported,
                        verdict: verdict_str(c.verdict),
                        boxes: c.boxes,
                        wall_ms: c.wall_ms,
                        supplementary: c.supplementary,
                    }
                })
                .collect();
            csv_bytes(&rows)?
        }
    };
    emit(g.out.as_deref(), &bytes)?;
    eprintln!(
        "{}/{} certificates pass",
        report.passed,
        report.certificates.len()
    );
    if report.all_pass {
        Ok(())
    } else {
        let bad: Vec<_> = report
            .failures()
            .map(|c| format!("{} ({})", c.name, verdict_str(c.verdict)))
            .collect();
        Err(Failure::Verify(bad.join(", ")))
    }
}

#[derive(Serialize)]
struct CoeffRow {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "rho_N")]
    rho: f64,
    #[serde(rename = "omega_N")]
    omega: f64,
    #[serde(rename = "P_N")]
    p: f64,
}

#[derive(Serialize)]
struct ExpandSummary<'a> {
    gamma: f64,
    window: SonicWindow,
    seed: &'a SonicSeed,
    order: usize,
    radius: f64,
    growth: f64,
    degraded: bool,
    residual_slope_order: usize,
    residual_slopes: (f64, f64),
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients: Option<&'a [CoeffRow]>,
}

fn expand(g: &Global, a: &ExpandArgs) -> Res<()> {
    let gamma = gamma_of(g)?;
    if a.n_max < 2 {
        return Err(Failure::Usage(format!(
            "--n-max must be at least 2, got {}",
            a.n_max
        )));
    }
    let seed = SonicSeed::new(a.y_star, gamma)?;
    let t = sonic::build_taylor(&seed, a.n_max, gamma)?;
    let rows: Vec<CoeffRow> = (0..=t.order)
        .map(|n| CoeffRow {
            n,
            rho: t.rho_coeffs[n],
            omega: t.omega_coeffs[n],
            p: t.p_coeffs[n],
        })
        .collect();
    let mut summary = ExpandSummary {
        gamma: gamma.value(),
        window: sonic_window(gamma),
        seed: &seed,
        order: t.order,
        radius: t.radius,
        growth: t.growth,
        degraded: t.degraded,
        residual_slope_order: sonic::SLOPE_ORDER,
        residual_slopes: sonic::residual_slopes(&t, sonic::SLOPE_ORDER, gamma),
        coefficients: None,
    };
    match g.format {
        Format::Csv => {
            emit(g.out.as_deref(), &csv_bytes(&rows)?)?;
            emit_summary(a.summary.as_ref(), g.out.as_deref(), &summary)
        }
        Format::Json => {
            summary.coefficients = Some(&rows);
            emit(g.out.as_deref(), &json_bytes(&summary)?)
        }
    }
}

#[derive(Serialize)]
struct SolveSummary<'a> {
    gamma: f64,
    window: SonicWindow,
    y_star_bar: f64,
    bracket: (f64, f64),
    bracket_width_rel: f64,
    iterations: usize,
    crossing_runs: usize,
    k1_bar: f64,
    k2_bar: f64,
    fit_residual: f64,
    mass_slope: f64,
    y_min: f64,
    rho_min: f64,
    omega_min: f64,
    y_max: f64,
    samples: usize,
    seams: Seams,
    invariants: &'a InvariantReport,
    all_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<&'a [Sample]>,
}

fn shoot_options(
    g: &Global,
    n_max: usize,
    y_min_factor: f64,
    y_max_factor: f64,
) -> Res<ShootOptions> {
    if n_max < 2 {
        return Err(Failure::Usage(format!(
            "--n-max must be at least 2, got {n_max}"
        )));
    }
    if !(y_min_factor > 0.0 && y_min_factor < 1e-2) || !(y_max_factor >= 100.0) {
        return Err(Failure::Usage(
            "need 0 < --y-min-factor < 1e-2 and --y-max-factor >= 100".into(),
        ));
    }
    let mut o = ShootOptions {
        n_max,
        y_min_factor,
        y_max_factor,
        tol_rel: g.tol_rel,
        ..Default::default()
    };
    let f = g.tol_int / o.extend.rtol;
    o.extend = o.extend.tightened(f);
    Ok(o)
}

/// Solve and assemble; the invariant report comes back whether or not it
/// passes.
fn solve_profile(
    gamma: PolytropicIndex,
    o: &ShootOptions,
) -> Res<(shoot::ShootResult, Vec<Sample>, Seams, InvariantReport)> {
    let r = shoot::find_critical(gamma, o)?;
    let (p, seams) = shoot::assemble_global(&r, o)?;
    let inv = shoot::verify_invariants(&p, gamma, o);
    Ok((r, p.samples, seams, inv))
}

fn solve(g: &Global, a: &SolveArgs) -> Res<()> {
    let gamma = gamma_of(g)?;
    let o = shoot_options(g, a.n_max, a.y_min_factor, a.y_max_factor)?;
    let (r, samples, seams, inv) = solve_profile(gamma, &o)?;
    let win = sonic_window(gamma);
    let (first, last) = (samples[0], samples[samples.len() - 1]);
    let mut summary = SolveSummary {
        gamma: gamma.value(),
        window: win,
        y_star_bar: r.y_star_bar,
        bracket: r.bracket,
        bracket_width_rel: (r.bracket.1 - r.bracket.0) / win.width(),
        iterations: r.iterations,
        crossing_runs: r.crossing_runs,
        k1_bar: r.fit.k1_bar,
        k2_bar: r.fit.k2_bar,
        fit_residual: r.fit.residual,
        mass_slope: r.fit.mass_slope,
        y_min: first.y,
        rho_min: first.rho,
        omega_min: first.omega,
        y_max: last.y,
        samples: samples.len(),
        seams,
        invariants: &inv,
        all_pass: inv.all_pass(),
        profile: None,
    };
    match g.format {
        Format::Csv => {
            emit(g.out.as_deref(), &io::profile_csv(&samples)?)?;
            emit_summary(a.summary.as_ref(), g.out.as_deref(), &summary)?;
        }
        Format::Json => {
            summary.profile = Some(&samples);
            emit(g.out.as_deref(), &json_bytes(&summary)?)?;
        }
    }
    if inv.all_pass() {
        Ok(())
    } else {
        let bad: Vec<_> = inv
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.to_string())
            .collect();
        Err(Failure::Verify(format!(
            "invariants failed: {}",
            bad.join(", ")
        )))
    }
}

#[derive(Serialize)]
struct BranchRow {
    gamma: f64,
    omega0: f64,
    #[serde(rename = "R1")]
    r1: f64,
    #[serde(rename = "R2")]
    r2: f64,
}

#[derive(Serialize)]
struct LevelRow {
    gamma: f64,
    omega: f64,
    f1: f64,
}

#[derive(Serialize)]
struct PlotData {
    branches: Vec<BranchRow>,
    levelset: Vec<LevelRow>,
}

fn plotdata(g: &Global, a: &PlotArgs) -> Res<()> {
    let dir = g
        .out
        .as_deref()
        .ok_or_else(|| Failure::Usage("plotdata needs --out DIR".into()))?;
    if a.points < 2 {
        return Err(Failure::Usage("--points must be at least 2".into()));
    }
    let mut data = PlotData {
        branches: Vec::new(),
        levelset: Vec::new(),
    };
    for &gv in &a.gammas {
        let gamma = if gv == 1.0 {
            None
        } else {
            Some(PolytropicIndex::new(gv).map_err(|e| Failure::Usage(e.to_string()))?)
        };
        let (lo, hi) = ((4.0 - 3.0 * gv) / 3.0, 2.0 - gv);
        let n = a.points;
        for i in 0..n {
            let w0 = if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            };
            let (r1, r2) = match gamma {
                None => sonic::branches_gamma_one(w0),
                Some(gm) => sonic::branches(w0, gm)?,
            };
            data.branches.push(BranchRow {
                gamma: gv,
                omega0: w0,
                r1,
                r2,
            });
        }
        for i in 1..=n {
            let w = hi * i as f64 / n as f64;
            data.levelset.push(LevelRow {
                gamma: gv,
                omega: w,
                f1: model::f1_raw(w, gv),
            });
        }
    }
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
    match g.format {
        Format::Csv => {
            write_atomic(&dir.join("branches.csv"), &csv_bytes(&data.branches)?)?;
            write_atomic(&dir.join("levelset.csv"), &csv_bytes(&data.levelset)?)?;
        }
        Format::Json => write_atomic(&dir.join("plotdata.json"), &json_bytes(&data)?)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct PhysicalDoc<'a> {
    gamma: f64,
    t: f64,
    kappa: f64,
    extrapolated_rows: usize,
    rows: &'a [PhysicalRow],
}

fn physical(g: &Global, a: &PhysicalArgs) -> Res<()> {
    let gamma = gamma_of(g)?;
    if !(a.t < 0.0) || !(a.kappa > 0.0) {
        return Err(Failure::Usage(format!(
            "need --t < 0 and --kappa > 0, got {} and {}",
            a.t, a.kappa
        )));
    }
    if !(a.r_min > 0.0 && a.r_max > a.r_min) || a.points < 2 {
        return Err(Failure::Usage(
            "need 0 < --r-min < --r-max and --points >= 2".into(),
        ));
    }
    let samples = match &a.profile {
        Some(p) => {
            io::read_profile_csv(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => {
            let o = shoot_options(g, 60, 1e-4, 1e4)?;
            let (_, samples, _, inv) = solve_profile(gamma, &o)?;
            if !inv.all_pass() {
                return Err(Failure::Verify(
                    "solved profile failed its invariants".into(),
                ));
            }
            samples
        }
    };
    let interp = ProfileInterp::new(&samples, gamma)?;
    let (l0, l1) = (a.r_min.ln(), a.r_max.ln());
    let last = a.points - 1;
    let r: Vec<f64> = (0..a.points)
        .map(|i| match i {
            0 => a.r_min,
            i if i == last => a.r_max,
            i => (l0 + (l1 - l0) * i as f64 / last as f64).exp(),
        })
        .collect();
    let rows = physical_fields(&interp, a.t, a.kappa, &r)?;
    let extrapolated_rows = rows.iter().filter(|r| r.extrapolated).count();
    if extrapolated_rows > 0 {
        eprintln!(
            "{extrapolated_rows} of {} radii fall outside the profile and were extrapolated",
            rows.len()
        );
    }
    let bytes = match g.format {
        Format::Csv => csv_bytes(&rows)?,
        Format::Json => json_bytes(&PhysicalDoc {
            gamma: gamma.value(),
            t: a.t,
            kappa: a.kappa,
            extrapolated_rows,
            rows: &rows,
        })?,
    };
    emit(g.out.as_deref(), &bytes)
}
