//! The self-check suite: twelve pinned invariants covering the mesh
//! calculus, the periodic cell solver, the boundary-value solver, the
//! ε-uniform ratio bands, the homogenization ladder, duality, reduction
//! transcripts, corrector gradient bounds, potential round-trips, and
//! byte-level determinism.
//!
//! Each criterion runs a pinned configuration — the user's config supplies
//! only output options — so a pass means the same thing on every machine.

use std::time::Instant;

use curl_homog_core::cell::{effective_maxwell, solve_corrector};
use curl_homog_core::coeff::CoefficientField;
use curl_homog_core::elliptic::{dirichlet_corrector, lipschitz_report};
use curl_homog_core::field::{EdgeField, NodeField};
use curl_homog_core::grid::StaggeredGrid;
use curl_homog_core::maxwell::{assemble_solve_with_tol, duality_residual, MaxwellProblem};
use curl_homog_core::ops;
use curl_homog_core::potentials::{
    gradient_potential, reduce_curl_bound, reduce_field_bound, vector_potential,
    ReductionTranscript,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::make_data;
use crate::config::{Config, DataSpec, FamilySpec, GridPolicy, PValue};
use crate::experiments::{rel_l2_diff, run_convergence, run_sweep, RunArtifacts, SweepOutcome};
use crate::CliError;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// One pinned invariant's outcome.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:02} {} — {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.index,
            self.name,
            self.detail
        )
    }
}

pub struct VerifyOutcome {
    pub results: Vec<CriterionResult>,
    pub artifacts: RunArtifacts,
}

fn wrap(index: usize, name: &'static str, r: Result<(bool, String), CliError>) -> CriterionResult {
    match r {
        Ok((passed, detail)) => CriterionResult {
            index,
            name,
            passed,
            detail,
        },
        Err(e) => CriterionResult {
            index,
            name,
            passed: false,
            detail: format!("errored: {e}"),
        },
    }
}

/// Run all twelve criteria and assemble the report.
pub fn run_all(cfg: &Config) -> Result<VerifyOutcome, CliError> {
    run_all_with_progress(cfg, &mut |_| {})
}

/// Like [`run_all`], but hands each criterion's result to `progress` the
/// moment it is decided. The heavyweight criteria take minutes each, so
/// callers that front a terminal can stream the verdict lines live instead
/// of staying silent until the whole suite finishes.
pub fn run_all_with_progress(
    cfg: &Config,
    progress: &mut dyn FnMut(&CriterionResult),
) -> Result<VerifyOutcome, CliError> {
    let mut results: Vec<CriterionResult> = Vec::new();
    let mut add = |r: CriterionResult| {
        progress(&r);
        r
    };
    results.push(add(wrap(
        1,
        "discrete vector calculus identities",
        criterion_calculus(),
    )));
    results.push(add(wrap(
        2,
        "laminate cell averages match the closed form",
        criterion_cell_oracle(),
    )));
    results.push(add(wrap(
        3,
        "constant coefficients are a fixed point",
        criterion_constant_fixed_point(),
    )));
    results.push(add(wrap(
        4,
        "manufactured solution converges with exact trace",
        criterion_manufactured(),
    )));

    let sweep = run_sweep(&sweep_cfg());
    results.push(add(wrap(
        5,
        "finite-exponent ratio bands stay within a factor of two",
        criterion_lp_band(&sweep),
    )));
    results.push(add(wrap(
        6,
        "sup-norm ratio band stays within a factor of two",
        criterion_sup_band(&sweep),
    )));

    results.push(add(wrap(
        7,
        "oscillating solutions approach the effective limit",
        criterion_convergence(),
    )));
    results.push(add(wrap(
        8,
        "primal-dual pairings agree",
        criterion_duality(),
    )));
    results.push(add(wrap(
        9,
        "reduction transcripts close",
        criterion_transcripts(),
    )));
    results.push(add(wrap(
        10,
        "cell corrector gradients stay bounded",
        criterion_corrector_gradients(),
    )));
    results.push(add(wrap(
        11,
        "potential reconstructions invert the operators",
        criterion_potentials(),
    )));
    results.push(add(wrap(
        12,
        "identical runs produce identical bytes",
        criterion_determinism(),
    )));

    let passed = results.iter().all(|r| r.passed);
    let mut s = format!("mode verify\n{}\n\n", cfg.describe());
    s.push_str(
        "criteria run pinned configurations; the config above contributes only output options\n\n",
    );
    for r in &results {
        s.push_str(&r.line());
        s.push('\n');
    }
    s.push_str(if passed {
        "verdict: PASS\n"
    } else {
        "verdict: FAIL\n"
    });

    let artifacts = RunArtifacts {
        text_files: vec![("verify_report.txt".into(), s.clone())],
        binary_files: vec![],
        summary: s,
        passed,
    };
    Ok(VerifyOutcome { results, artifacts })
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

fn fill_random(data: &mut [f64], rng: &mut ChaCha8Rng) {
    for v in data.iter_mut() {
        *v = rng.gen_range(-1.0..1.0);
    }
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

fn rel_sup_diff(a: &[f64], b: &[f64]) -> f64 {
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        num = num.max((x - y).abs());
        den = den.max(y.abs());
    }
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Round-off headroom for twice-differenced random unit-amplitude fields.
fn second_difference_tol(g: &StaggeredGrid) -> f64 {
    let hmin = g.h().iter().cloned().fold(f64::INFINITY, f64::min);
    64.0 * f64::EPSILON / (hmin * hmin)
}

fn diag(a: f64, b: f64, c: f64) -> [[f64; 3]; 3] {
    [[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]]
}

fn max_abs_diff(x: &[[f64; 3]; 3], y: &[[f64; 3]; 3]) -> f64 {
    let mut m = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            m = m.max((x[i][j] - y[i][j]).abs());
        }
    }
    m
}

fn identity_coeff() -> Result<CoefficientField, CliError> {
    Ok(CoefficientField::constant(diag(1.0, 1.0, 1.0))?)
}

fn random_spec(seed: u64) -> DataSpec {
    DataSpec {
        name: "random_smooth".into(),
        seed,
        amplitude: 1.0,
    }
}

fn worst_margin(tr: &ReductionTranscript) -> f64 {
    tr.items
        .iter()
        .map(|it| if it.tol > 0.0 { it.residual / it.tol } else { f64::INFINITY })
        .fold(0.0f64, f64::max)
}

// ---------------------------------------------------------------------------
// pinned configurations
// ---------------------------------------------------------------------------

fn sweep_cfg() -> Config {
    Config {
        family_a: FamilySpec::new("laminate", &[2.0, 1.0]),
        family_b: FamilySpec::new("laminate", &[1.5, 0.5]),
        eps: vec![0.25, 0.125, 0.0625],
        p: vec![PValue(2.0), PValue(4.0), PValue(f64::INFINITY)],
        data: DataSpec {
            name: "trig_smooth".into(),
            seed: 0,
            amplitude: 1.0,
        },
        grid: GridPolicy::EpsCoupled {
            factor: 8,
            max_cells: 64,
        },
        tol: 1e-10,
        holder_gamma: 0.5,
        record_timings: false,
        ..Config::default()
    }
}

fn converge_cfg() -> Config {
    Config {
        family_a: FamilySpec::new("laminate", &[2.0, 1.0]),
        family_b: FamilySpec::new("constant", &[1.0]),
        eps: vec![0.25, 0.125, 0.0625],
        data: DataSpec {
            name: "trig_f_only".into(),
            seed: 0,
            amplitude: 1.0,
        },
        grid: GridPolicy::EpsCoupled {
            factor: 8,
            max_cells: 128,
        },
        cell_resolution: 64,
        tol: 1e-10,
        record_timings: false,
        ..Config::default()
    }
}

fn reduced_sweep_cfg() -> Config {
    let mut cfg = sweep_cfg();
    cfg.eps = vec![0.25, 0.125];
    cfg.p = vec![PValue(2.0), PValue(f64::INFINITY)];
    cfg.grid = GridPolicy::Fixed {
        cells: [16, 16, 16],
    };
    cfg
}

fn reduced_converge_cfg() -> Config {
    let mut cfg = converge_cfg();
    cfg.eps = vec![0.5, 0.25];
    cfg.grid = GridPolicy::Fixed {
        cells: [16, 16, 16],
    };
    cfg.cell_resolution = 16;
    cfg
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

fn criterion_calculus() -> Result<(bool, String), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut grids: Vec<StaggeredGrid> = [8usize, 16, 32]
        .iter()
        .map(|&n| StaggeredGrid::unit_cube(n))
        .collect();
    grids.push(StaggeredGrid::new(
        [-0.5, 0.0, 0.25],
        [1.5, 1.0, 0.75],
        [12, 8, 24],
    )?);
    let mut ok = true;
    let mut worst = 0.0f64;
    for g in &grids {
        let tol = second_difference_tol(g);

        let mut p = NodeField::zeros(g);
        fill_random(p.data_mut(), &mut rng);
        let curl_grad = ops::discrete_curl(&ops::discrete_grad(&p));
        let s1 = sup(curl_grad.data());

        let mut u = EdgeField::zeros(g);
        fill_random(u.data_mut(), &mut rng);
        let div_curl = ops::discrete_div(&ops::discrete_curl(&u));
        let s2 = sup(div_curl.data());

        let nt = ops::normal_trace(&ops::discrete_curl(&u));
        let sd = ops::surface_divergence(&ops::tangential_trace(&u));
        let mut s3 = 0.0f64;
        for (a, b) in nt.face_vals().iter().zip(sd.face_vals()) {
            s3 = s3.max((a + b).abs());
        }

        let m = s1.max(s2).max(s3);
        if m > tol {
            ok = false;
        }
        worst = worst.max(m / tol);
    }
    Ok((
        ok,
        format!(
            "worst defect at {:.2e} of the round-off allowance over {} grids",
            worst,
            grids.len()
        ),
    ))
}

fn criterion_cell_oracle() -> Result<(bool, String), CliError> {
    let lam = FamilySpec::new("laminate", &[2.0, 1.0]).build()?;
    let t0 = Instant::now();
    let (eff_a, eff_b) = effective_maxwell(&lam, &lam, 64)?;
    let seconds = t0.elapsed().as_secs_f64();
    let da = max_abs_diff(&eff_a.matrix, &diag(2.0, SQRT3, SQRT3));
    let db = max_abs_diff(&eff_b.matrix, &diag(SQRT3, 2.0, 2.0));
    let worst = da.max(db);
    let ok = worst <= 1e-4 && seconds < 60.0;
    Ok((
        ok,
        format!("closed-form deviation {worst:.3e} (tol 1.0e-4) in {seconds:.1} s"),
    ))
}

fn criterion_constant_fixed_point() -> Result<(bool, String), CliError> {
    let c = [
        [2.0, 0.3, 0.1],
        [0.3, 1.5, -0.2],
        [0.1, -0.2, 3.0],
    ];
    let cf = CoefficientField::constant(c)?;
    let (eff_a, eff_b) = effective_maxwell(&cf, &cf, 16)?;
    let dev = max_abs_diff(&eff_a.matrix, &c).max(max_abs_diff(&eff_b.matrix, &c));
    let mut chi_zero = true;
    let mut iters = 0usize;
    for axis in 0..3 {
        let s = solve_corrector(&cf, 16, axis)?;
        iters += s.stats.iterations;
        if !s.chi.iter().all(|&v| v == 0.0) {
            chi_zero = false;
        }
    }
    let ok = dev <= 1e-10 && chi_zero;
    Ok((
        ok,
        format!(
            "matrix deviation {dev:.3e} (tol 1.0e-10); correctors identically zero: {chi_zero} ({iters} iterations)"
        ),
    ))
}

fn criterion_manufactured() -> Result<(bool, String), CliError> {
    let ident = identity_coeff()?;
    let spec = DataSpec {
        name: "manufactured".into(),
        seed: 0,
        amplitude: 1.0,
    };
    let mut errs = Vec::new();
    let mut traces_zero = true;
    for &n in &[16usize, 32] {
        let g = StaggeredGrid::unit_cube(n);
        let data = make_data(&g, &spec)?;
        let p = MaxwellProblem {
            grid: &g,
            coeff_a: &ident,
            coeff_b: &ident,
            eps: f64::INFINITY,
            rhs_f: &data.rhs_f,
            rhs_g: &data.rhs_g,
            trace: &data.trace,
        };
        let sol = assemble_solve_with_tol(&p, 1e-10)?;
        let tr = ops::tangential_trace(&sol.u);
        if !tr.edge_vals().iter().all(|&v| v == 0.0) {
            traces_zero = false;
        }
        let exact = data.exact.as_ref().expect("manufactured data has a closed form");
        errs.push(rel_l2_diff(&sol.u, exact)?);
    }
    let order = (errs[0] / errs[1]).ln() / 2.0f64.ln();
    let ok = order >= 0.9 && traces_zero;
    Ok((
        ok,
        format!(
            "errors {:.3e} -> {:.3e}, observed order {order:.2} (need 0.9); boundary trace exactly zero: {traces_zero}",
            errs[0], errs[1]
        ),
    ))
}

fn band_detail(s: &SweepOutcome, want_inf: bool) -> String {
    let mut parts = Vec::new();
    for b in &s.bands {
        if b.p.is_infinite() == want_inf && b.counted {
            parts.push(format!(
                "p={}: factor {:.3} over {} rows",
                crate::report::p_label(b.p),
                b.factor(),
                b.rows
            ));
        }
    }
    parts.join("; ")
}

fn criterion_lp_band(sweep: &Result<SweepOutcome, CliError>) -> Result<(bool, String), CliError> {
    match sweep {
        Err(e) => Ok((false, format!("sweep errored: {e}"))),
        Ok(s) => {
            if !s.failures.is_empty() {
                return Ok((false, format!("solve failures: {}", s.failures.join("; "))));
            }
            let ok = s
                .bands
                .iter()
                .filter(|b| !b.p.is_infinite())
                .all(|b| b.counted && b.factor() <= 2.0);
            Ok((ok, format!("{} (tol: factor 2)", band_detail(s, false))))
        }
    }
}

fn criterion_sup_band(sweep: &Result<SweepOutcome, CliError>) -> Result<(bool, String), CliError> {
    match sweep {
        Err(e) => Ok((false, format!("sweep errored: {e}"))),
        Ok(s) => {
            if !s.failures.is_empty() {
                return Ok((false, format!("solve failures: {}", s.failures.join("; "))));
            }
            let ok = s
                .bands
                .iter()
                .filter(|b| b.p.is_infinite())
                .all(|b| b.counted && b.factor() <= 2.0);
            Ok((ok, format!("{} (tol: factor 2)", band_detail(s, true))))
        }
    }
}

fn criterion_convergence() -> Result<(bool, String), CliError> {
    let out = run_convergence(&converge_cfg(), true)?;
    let errors: Vec<String> = out
        .rows
        .iter()
        .map(|r| format!("{:.3e}", r.rel_error))
        .collect();
    let orders: Vec<String> = out
        .rows
        .iter()
        .filter_map(|r| r.order.map(|o| format!("{o:.2}")))
        .collect();
    let control_failed = out.control_converged == Some(false);
    let ok = out.ladder_passed && control_failed;
    Ok((
        ok,
        format!(
            "errors [{}], orders [{}] (need decreasing, ≥ 0.4); swapped-matrix control rejected: {control_failed}",
            errors.join(", "),
            orders.join(", ")
        ),
    ))
}

fn criterion_duality() -> Result<(bool, String), CliError> {
    let g = StaggeredGrid::unit_cube(16);
    let mut residuals = Vec::new();

    let lam = FamilySpec::new("laminate", &[2.0, 1.0]).build()?;
    let trig = FamilySpec::new("trig", &[1.5, 0.5]).build()?;
    for (s1, s2) in [(3u64, 41u64), (5, 11)] {
        let d1 = make_data(&g, &random_spec(s1))?;
        let d2 = make_data(&g, &random_spec(s2))?;
        let p = MaxwellProblem {
            grid: &g,
            coeff_a: &lam,
            coeff_b: &trig,
            eps: 0.25,
            rhs_f: &d1.rhs_f,
            rhs_g: &d1.rhs_g,
            trace: &d1.trace,
        };
        residuals.push(duality_residual(&p, &d2.rhs_f, &d2.rhs_g)?);
    }

    let a_ns = CoefficientField::constant([
        [2.0, 0.5, 0.0],
        [-0.5, 2.0, 0.1],
        [0.0, -0.1, 1.0],
    ])?;
    let b_ns = CoefficientField::constant([
        [1.0, 0.2, 0.0],
        [-0.2, 1.3, 0.0],
        [0.0, 0.0, 2.0],
    ])?;
    let d1 = make_data(&g, &random_spec(7))?;
    let d2 = make_data(&g, &random_spec(19))?;
    let p = MaxwellProblem {
        grid: &g,
        coeff_a: &a_ns,
        coeff_b: &b_ns,
        eps: f64::INFINITY,
        rhs_f: &d1.rhs_f,
        rhs_g: &d1.rhs_g,
        trace: &d1.trace,
    };
    residuals.push(duality_residual(&p, &d2.rhs_f, &d2.rhs_g)?);

    let worst = residuals.iter().cloned().fold(0.0f64, f64::max);
    let ok = worst <= 1e-8;
    let list: Vec<String> = residuals.iter().map(|r| format!("{r:.3e}")).collect();
    Ok((
        ok,
        format!(
            "pairing residuals [{}] (tol 1.0e-8; two symmetric, one nonsymmetric)",
            list.join(", ")
        ),
    ))
}

fn criterion_transcripts() -> Result<(bool, String), CliError> {
    let g = StaggeredGrid::unit_cube(16);
    let mut margins = Vec::new();
    let mut all = true;

    // constant coefficients with the closed-form solution
    {
        let ident = identity_coeff()?;
        let data = make_data(
            &g,
            &DataSpec {
                name: "manufactured".into(),
                seed: 0,
                amplitude: 1.0,
            },
        )?;
        let p = MaxwellProblem {
            grid: &g,
            coeff_a: &ident,
            coeff_b: &ident,
            eps: f64::INFINITY,
            rhs_f: &data.rhs_f,
            rhs_g: &data.rhs_g,
            trace: &data.trace,
        };
        let sol = assemble_solve_with_tol(&p, 1e-10)?;
        for tr in [reduce_curl_bound(&p, &sol.u)?, reduce_field_bound(&p, &sol.u)?] {
            all = all && tr.all_pass();
            margins.push(worst_margin(&tr));
        }
    }

    // oscillating coefficients with both volume and curl sources
    {
        let a = FamilySpec::new("laminate", &[2.0, 1.0]).build()?;
        let b = FamilySpec::new("trig", &[1.5, 0.5]).build()?;
        let data = make_data(
            &g,
            &DataSpec {
                name: "trig_smooth".into(),
                seed: 0,
                amplitude: 1.0,
            },
        )?;
        let p = MaxwellProblem {
            grid: &g,
            coeff_a: &a,
            coeff_b: &b,
            eps: 0.25,
            rhs_f: &data.rhs_f,
            rhs_g: &data.rhs_g,
            trace: &data.trace,
        };
        let sol = assemble_solve_with_tol(&p, 1e-10)?;
        for tr in [reduce_curl_bound(&p, &sol.u)?, reduce_field_bound(&p, &sol.u)?] {
            all = all && tr.all_pass();
            margins.push(worst_margin(&tr));
        }
    }

    let worst = margins.iter().cloned().fold(0.0f64, f64::max);
    Ok((
        all,
        format!(
            "all identities closed; worst residual at {worst:.2e} of its allowance over {} chains",
            margins.len()
        ),
    ))
}

fn criterion_corrector_gradients() -> Result<(bool, String), CliError> {
    let lam = FamilySpec::new("laminate", &[2.0, 1.0]).build()?;
    let mut sups = Vec::new();
    for (eps, n) in [(0.25f64, 32usize), (0.125, 64), (0.0625, 64)] {
        let g = StaggeredGrid::unit_cube(n);
        let sol = dirichlet_corrector(&g, &lam, eps, 0)?;
        sups.push(lipschitz_report(&sol.w).sup_gradient);
    }
    let max = sups.iter().cloned().fold(0.0f64, f64::max);
    let min = sups.iter().cloned().fold(f64::INFINITY, f64::min);
    let factor = max / min;

    let ident = identity_coeff()?;
    let g = StaggeredGrid::unit_cube(16);
    let sol = dirichlet_corrector(&g, &ident, 1.0, 0)?;
    let dev = (lipschitz_report(&sol.w).sup_gradient - 1.0).abs();

    let ok = factor <= 2.0 && dev <= 1e-8;
    let list: Vec<String> = sups.iter().map(|s| format!("{s:.6}")).collect();
    Ok((
        ok,
        format!(
            "laminate sup-gradients [{}] factor {factor:.3} (tol 2); constant case |sup − 1| = {dev:.2e} (tol 1.0e-8)",
            list.join(", ")
        ),
    ))
}

fn criterion_potentials() -> Result<(bool, String), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let grids = [
        StaggeredGrid::unit_cube(8),
        StaggeredGrid::new([-0.25, 0.5, 0.0], [1.25, 0.75, 1.0], [12, 8, 10])?,
    ];
    let mut worst = 0.0f64;
    for g in &grids {
        // a divergence-free face field: the curl of anything
        let mut seed = EdgeField::zeros(g);
        fill_random(seed.data_mut(), &mut rng);
        let target = ops::discrete_curl(&seed);
        let (h, _) = vector_potential(g, &target)?;
        let back = ops::discrete_curl(&h);
        worst = worst.max(rel_sup_diff(back.data(), target.data()));

        // a curl-free edge field: the gradient of anything
        let mut pot = NodeField::zeros(g);
        fill_random(pot.data_mut(), &mut rng);
        let utarget = ops::discrete_grad(&pot);
        let (q, _) = gradient_potential(g, &utarget)?;
        let uback = ops::discrete_grad(&q);
        worst = worst.max(rel_sup_diff(uback.data(), utarget.data()));
    }
    let ok = worst <= 1e-8;
    Ok((
        ok,
        format!("worst reconstruction defect {worst:.3e} (tol 1.0e-8) over {} grids", grids.len()),
    ))
}

fn criterion_determinism() -> Result<(bool, String), CliError> {
    fn same_text_files(a: &RunArtifacts, b: &RunArtifacts) -> bool {
        a.text_files.len() == b.text_files.len()
            && a.text_files
                .iter()
                .zip(&b.text_files)
                .all(|((n1, c1), (n2, c2))| n1 == n2 && c1 == c2)
    }

    let scfg = reduced_sweep_cfg();
    let s1 = run_sweep(&scfg)?;
    let s2 = run_sweep(&scfg)?;
    let sweep_same = same_text_files(&s1.artifacts, &s2.artifacts);

    let ccfg = reduced_converge_cfg();
    let c1 = run_convergence(&ccfg, false)?;
    let c2 = run_convergence(&ccfg, false)?;
    let conv_same = same_text_files(&c1.artifacts, &c2.artifacts);

    let files = s1.artifacts.text_files.len() + c1.artifacts.text_files.len();
    let bytes: usize = s1
        .artifacts
        .text_files
        .iter()
        .chain(&c1.artifacts.text_files)
        .map(|(_, c)| c.len())
        .sum();
    let ok = sweep_same && conv_same;
    Ok((
        ok,
        format!(
            "repeated sweep and ladder pipelines end to end: {files} files, {bytes} bytes, identical: {ok}"
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_turns_errors_into_failures() {
        let r = wrap(
            3,
            "example",
            Err(CliError::Config("boom".into())),
        );
        assert!(!r.passed);
        assert!(r.detail.contains("boom"));
        assert!(r.line().starts_with("[FAIL] 03 example"));
    }

    #[test]
    fn pinned_configs_validate() {
        for cfg in [
            sweep_cfg(),
            converge_cfg(),
            reduced_sweep_cfg(),
            reduced_converge_cfg(),
        ] {
            cfg.validate().unwrap();
        }
    }
}
