//! The market-entry example run end to end: the finite table, its loss
//! frame, the mixed extension `f0(x, y) = (-4xy, x + y)`, the coopetitive
//! extension `f(x, y, z) = f0(x, y) - z (1, 1)` and every solution built on
//! them, each checked against a closed-form value.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::gamefile::{AnalysisDefaults, GameSpecFile};
use super::num::{pt, Num};
use super::render::{write_file, write_render, RenderData};
use super::solve::{fmt_preimage, Prepared};
use super::{GameFile, LoadedGame, ScenarioError, DEFAULT_GRID_2D, DEFAULT_GRID_3D, DEFAULT_TOL};
use crate::bargaining::{
    compromise_solution, ks_solution, nash_bargaining, payoff_core, BargainingProblem, CompromiseKind, SolutionPoint,
};
use crate::coopetition::{
    induced_path, payoff_space, proper_coopetitive_solution, section_game, standard_win_win_solution, tu_crossing,
    win_win_report, CoopetitiveGame, PathQuantity,
};
use crate::game::{FiniteBimatrixGame, Player, StrategyCell, StrategyLabels, Strictness};
use crate::geometry::{extrema, hausdorff_distance, PayoffMap, Polynomial, TUBoundary};
use crate::mixed::{conservative_bivalue_mixed, mixed_equilibrium_components, ComponentShape};
use crate::point::{Orientation, PayoffPoint};

/// The entry table in its gain frame, rows `E`/`N`, columns `H`/`L`.
pub fn entry_finite_file() -> GameSpecFile {
    GameSpecFile::Finite {
        orientation: Orientation::Gain,
        payoff1: vec![vec![4.0, 0.0], vec![0.0, 0.0]],
        payoff2: vec![vec![2.0, 3.0], vec![3.0, 4.0]],
        labels: Some(StrategyLabels {
            rows: vec!["E".into(), "N".into()],
            cols: vec!["H".into(), "L".into()],
        }),
        analysis: AnalysisDefaults::default(),
    }
}

/// The translated loss table whose mixed extension is `f0`.
pub fn entry_loss_file() -> GameSpecFile {
    GameSpecFile::Finite {
        orientation: Orientation::Loss,
        payoff1: vec![vec![-4.0, 0.0], vec![0.0, 0.0]],
        payoff2: vec![vec![2.0, 1.0], vec![1.0, 0.0]],
        labels: Some(StrategyLabels {
            rows: vec!["E".into(), "N".into()],
            cols: vec!["H".into(), "L".into()],
        }),
        analysis: AnalysisDefaults::default(),
    }
}

pub(crate) fn f_polynomials() -> (Polynomial, Polynomial) {
    (
        Polynomial { xy: -4.0, z: -1.0, ..Default::default() },
        Polynomial { x: 1.0, y: 1.0, z: -1.0, ..Default::default() },
    )
}

/// The coopetitive extension, `c_grid` of 65 points, initial `z = 0`.
pub fn entry_coopetitive_file() -> GameSpecFile {
    let (p1, p2) = f_polynomials();
    GameSpecFile::Coopetitive {
        orientation: Orientation::Loss,
        p1,
        p2,
        c_grid: DEFAULT_GRID_3D,
        initial_z: Some(0.0),
        analysis: AnalysisDefaults::default(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Checks, named candidate solutions and written files.
#[derive(Debug, Clone, PartialEq)]
pub struct DemoOutcome {
    pub checks: Vec<Check>,
    pub candidates: Vec<(String, Result<SolutionPoint, String>)>,
    pub files: Vec<PathBuf>,
    pub report: String,
}

impl DemoOutcome {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn truth(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    fn close(&mut self, name: &str, got: PayoffPoint, want: PayoffPoint, tol: f64) {
        let err = got.max_abs_diff(want);
        self.truth(name, err <= tol, format!("got {} want {} err {:.2e} tol {:.0e}", pt(got), pt(want), err, tol));
    }

    fn scalar(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let err = (got - want).abs();
        self.truth(name, err <= tol, format!("got {} want {} err {:.2e} tol {:.0e}", Num(got), Num(want), err, tol));
    }

    fn solution(&mut self, name: &str, got: &Result<SolutionPoint, String>, want: PayoffPoint, tol: f64) {
        match got {
            Ok(s) => self.close(name, s.payoff, want, tol),
            Err(e) => self.truth(name, false, e.clone()),
        }
    }
}

fn finite(spec: &GameSpecFile) -> FiniteBimatrixGame {
    match GameFile::from_spec(spec, "").expect("built-in file is valid").game {
        LoadedGame::Finite(g) => g,
        LoadedGame::Coopetitive(_) => unreachable!("finite spec"),
    }
}

fn p(a: f64, b: f64) -> PayoffPoint {
    PayoffPoint::new(a, b)
}

/// Grid sizes of a demo run and the tolerances its checks use. Solvers
/// always run with the default tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemoGrids {
    pub grid_2d: usize,
    pub grid_3d: usize,
    /// Checks on the mixed extension.
    pub tol: f64,
    /// Checks on the coopetitive extension.
    pub tol_3d: f64,
}

impl DemoGrids {
    pub const DEFAULT: DemoGrids = DemoGrids {
        grid_2d: DEFAULT_GRID_2D,
        grid_3d: DEFAULT_GRID_3D,
        tol: 1e-2,
        tol_3d: 1e-2,
    };
    /// Doubled resolution; mixed-extension tolerances drop to `1e-3`. The
    /// coopetitive lattice at 129 points still leaves boundary gaps of about
    /// `2e-3`, so its checks keep `1e-2`.
    pub const REFINED: DemoGrids = DemoGrids {
        grid_2d: 2 * DEFAULT_GRID_2D - 1,
        grid_3d: 2 * DEFAULT_GRID_3D - 1,
        tol: 1e-3,
        tol_3d: 1e-2,
    };
}

/// Runs the demo and writes `report.txt` plus `figN.csv` / `figN.svg` for
/// figures 1 to 6 into `out_dir`. Check failures are reported in the
/// outcome, not as an error.
pub fn entry_demo(out_dir: &Path, grids: DemoGrids) -> Result<DemoOutcome, ScenarioError> {
    std::fs::create_dir_all(out_dir).map_err(|e| ScenarioError::io(out_dir, e))?;
    let tol = grids.tol;
    let solver_tol = DEFAULT_TOL;
    let mut c = Checks::default();
    let mut candidates: Vec<(String, Result<SolutionPoint, String>)> = Vec::new();
    let mut files = Vec::new();
    let mut figure = |n: usize, data: &RenderData| -> Result<(), ScenarioError> {
        let csv = out_dir.join(format!("fig{n}.csv"));
        let svg = out_dir.join(format!("fig{n}.svg"));
        write_render(data, Some(&csv), Some(&svg))?;
        files.extend([csv, svg]);
        Ok(())
    };

    // finite table
    let m = finite(&entry_finite_file());
    let (el, nl, eh) = (StrategyCell::new(0, 1), StrategyCell::new(1, 1), StrategyCell::new(0, 0));
    let ne = m.pure_nash_equilibria();
    let names: Vec<_> = ne.iter().map(|cell| m.cell_name(*cell)).collect();
    c.truth("pure Nash equilibria are (E,L) and (N,L)", ne == vec![el, nl], names.join(" "));
    c.truth("(E,H) is not an equilibrium", !ne.contains(&eh), "");
    c.truth(
        "L weakly dominates H for player two",
        m.dominant_strategies(Player::Two, Strictness::Weak) == vec![1],
        "",
    );
    let total = m.cells().map(|cell| m.payoff(cell).sum()).fold(f64::NEG_INFINITY, f64::max);
    c.scalar("potential total gain at (E,H)", total, 6.0, 0.0);
    figure(1, &RenderData::finite(&m, solver_tol)?)?;

    // loss frame
    let m_prime = finite(&entry_loss_file());
    let translated = m_prime.translate(p(0.0, -4.0)).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    c.truth("negated table equals the loss table translated by (0,-4)", m.negate_orientation() == translated, "");

    // mixed extension f0
    let f0_map = PayoffMap::from_bimatrix(&m_prime)?;
    let (q1, q2) = f0_map.components();
    c.truth(
        "mixed extension is (-4xy, x+y)",
        q1 == Polynomial { xy: -4.0, ..Default::default() } && q2 == Polynomial { x: 1.0, y: 1.0, ..Default::default() },
        "",
    );
    let comps = mixed_equilibrium_components(&m_prime)?;
    let segment_ok = comps.len() == 1 && comps[0].shape == ComponentShape::Segment && comps[0].bounds() == (0.0, 1.0, 0.0, 0.0);
    c.truth("mixed equilibria are the segment {(x, 0)}", segment_ok, format!("{} components", comps.len()));
    if let Some(comp) = comps.first() {
        let ends = &comp.payoff_extremes;
        let ok = ends.len() == 2 && ends[0].max_abs_diff(p(0.0, 0.0)) <= 1e-12 && ends[1].max_abs_diff(p(0.0, 1.0)) <= 1e-12;
        let shown: Vec<_> = ends.iter().map(|e| pt(*e)).collect();
        c.truth("Nash payoff segment runs from A' = (0,0) to B' = (0,1)", ok, shown.join(" "));
    }
    let b_prime = conservative_bivalue_mixed(&m_prime, grids.grid_2d)?;
    c.close("conservative bi-value B'", b_prime, p(0.0, 1.0), 1e-6);

    let g0 = CoopetitiveGame::from_bimatrix(&m_prime)?;
    let f0 = Prepared::new(g0.clone(), grids.grid_2d, solver_tol)?;
    let step = 1.0 / (grids.grid_2d - 1) as f64;
    let curve: Vec<PayoffPoint> = (0..=4 * (grids.grid_2d - 1))
        .map(|i| {
            let t = i as f64 / (4 * (grids.grid_2d - 1)) as f64;
            p(-4.0 * t * t, 2.0 * t)
        })
        .collect();
    let h = hausdorff_distance(&f0.boundary.payoffs(), &curve)?;
    c.truth("minimal boundary of f0 follows t -> (-4t^2, 2t)", h <= 3.0 * step, format!("hausdorff {h:.2e}"));
    c.close("infimum of f0", f0.inf, p(-4.0, 0.0), 1e-12);
    let core = payoff_core(&f0.boundary, b_prime)?;
    let core_sup = core.extrema().map(|e| e.1).unwrap_or(p(f64::NAN, f64::NAN));
    let core_inf = core.extrema().map(|e| e.0).unwrap_or(p(f64::NAN, f64::NAN));
    c.close("supremum of the core", core_sup, p(0.0, 1.0), tol);
    c.close("infimum of the core", core_inf, p(-1.0, 0.0), tol);
    figure(2, &RenderData::sampled(&f0, "payoff space of f0", false, Vec::new())?)?;

    // figure 3: Kalai and Nash bargaining on f0
    let ks = |pr: &Prepared, a: PayoffPoint, b: PayoffPoint| -> Result<SolutionPoint, String> {
        let problem = BargainingProblem::new(pr.boundary.clone(), a, b).map_err(|e| e.to_string())?;
        ks_solution(&problem, pr.tol).map_err(|e| e.to_string())
    };
    let k1 = ks(&f0, b_prime, f0.inf);
    let s = 3.0 - 2.0 * 2f64.sqrt();
    c.solution("K' = KS with a = B', b = inf f0", &k1, p(-4.0 * s, 1.0 - s), tol);
    let k2 = compromise_solution(CompromiseKind::Pareto, &f0.boundary, None, None, solver_tol).map_err(|e| e.to_string());
    let s = (3.0 - 5f64.sqrt()) / 2.0;
    c.solution("K'' = Pareto compromise of f0", &k2, p(-4.0 * s, 2.0 - 2.0 * s), tol);
    let nash_pareto = compromise_solution(CompromiseKind::NashPareto, &f0.boundary, Some(b_prime), None, solver_tol)
        .map_err(|e| e.to_string());
    if let (Ok(a), Ok(b)) = (&nash_pareto, &k1) {
        c.truth("Nash-Pareto compromise with B' equals K'", a.payoff == b.payoff, "");
    }
    let nb = nash_bargaining(&f0.boundary, b_prime, Orientation::Loss).map_err(|e| e.to_string());
    c.solution("N = Nash bargaining from B'", &nb, p(-4.0 / 9.0, 2.0 / 3.0), tol);
    let fig3 = vec![("K'".to_string(), k1.clone()), ("K''".to_string(), k2.clone()), ("N".to_string(), nb.clone())];
    candidates.extend(fig3.iter().cloned());
    figure(3, &RenderData::sampled(&f0, "Kalai and Nash bargaining solutions on f0", false, oks(&fig3))?)?;

    // figure 4: transferable utility on f0
    let tu0 = f0.tu()?;
    c.scalar("optimal collective loss of f0", tu0.optimal_sum, -2.0, 1e-6);
    let at_one = tu0.witnesses.first().map(|w| (w.preimage.x, w.preimage.y));
    c.truth("f0 reaches it at (1,1)", at_one == Some((1.0, 1.0)), fmt_preimage(tu0.witnesses.first().map(|w| w.preimage)));
    let tu_pairs = [
        ("H", b_prime, f0.inf),
        ("K", b_prime, core_inf),
        ("K (core to game)", core_inf, f0.inf),
    ];
    let mut fig4 = Vec::new();
    for (name, a, b) in tu_pairs {
        fig4.push((name.to_string(), crossing(&tu0, a, b, solver_tol)));
    }
    c.solution("H = TU compromise with a = B', b = inf f0", &fig4[0].1, p(-2.4, 0.4), tol);
    candidates.extend(fig4.iter().cloned());
    figure(4, &RenderData::sampled(&f0, "transferable utility solutions on f0", false, oks(&fig4))?)?;

    // coopetitive extension
    let tol = grids.tol_3d;
    let f_game = match GameFile::from_spec(&entry_coopetitive_file(), "")?.game {
        LoadedGame::Coopetitive(g) => g,
        LoadedGame::Finite(_) => unreachable!("coopetitive spec"),
    };
    let f_game = CoopetitiveGame::uniform(*f_game.payoff(), Orientation::Loss, grids.grid_3d, Some(0.0))?;
    let section0 = section_game(&f_game, 0.0)?;
    c.truth("section z = 0 is f0", section0.map.components() == f0_map.components(), "");
    c.truth("family roundtrip", crate::coopetition::family_roundtrip_check(&f_game), "");
    let lattice = crate::coopetition::uniform_grid(17);
    let mut shift_err = 0.0f64;
    for s in f_game.sections() {
        for &x in &lattice {
            for &y in &lattice {
                let want = f0_map.eval_xyz(x, y, 0.0) + p(-s.z, -s.z);
                shift_err = shift_err.max(s.map.eval_xyz(x, y, 0.0).max_abs_diff(want));
            }
        }
    }
    c.truth("sections are f0 translated by -z(1,1)", shift_err <= 1e-12, format!("max error {shift_err:.1e}"));

    let f = Prepared::new(f_game.clone(), grids.grid_3d, solver_tol)?;
    let tu = f.tu()?;
    c.scalar("optimal collective loss of f", tu.optimal_sum, -4.0, 1e-6);
    let w = tu.witnesses.first().map(|w| w.preimage);
    c.truth(
        "f reaches it at (1,1,1)",
        w.map(|d| (d.x, d.y, d.z)) == Some((1.0, 1.0, Some(1.0))),
        fmt_preimage(w),
    );
    c.close("TU segment starts at (-5,1)", tu.segment_ends.0, p(-5.0, 1.0), 1e-9);
    c.close("TU segment ends at (-3,-1)", tu.segment_ends.1, p(-3.0, -1.0), 1e-9);
    c.close("infimum of f", f.inf, p(-5.0, -1.0), 1e-12);
    let shifted: Vec<PayoffPoint> = curve.iter().map(|q| *q + p(-1.0, -1.0)).collect();
    let h = hausdorff_distance(&f.boundary.payoffs(), &shifted)?;
    let step3 = 1.0 / (grids.grid_3d - 1) as f64;
    c.truth("minimal boundary of f follows t -> (-4t^2-1, 2t-1)", h <= 3.0 * step3, format!("hausdorff {h:.2e}"));

    let zone = f.nash_zone()?;
    let outside = zone
        .points()
        .iter()
        .filter(|q| {
            let (a, b) = (q.payoff.p1, q.payoff.p2);
            !((-1.0 - 1e-12..=1e-12).contains(&a) && a - 1e-12 <= b && b <= a + 1.0 + 1e-12)
        })
        .count();
    c.truth("Nash zone lies in the parallelogram p1 in [-1,0], p1 <= p2 <= p1 + 1", outside == 0, format!("{outside} outside"));
    let (zlo, zhi) = extrema(&zone);
    c.close("Nash zone infimum", zlo, p(-1.0, -1.0), 1e-12);
    c.close("Nash zone supremum", zhi, p(0.0, 1.0), 1e-12);
    let path = induced_path(&f_game, PathQuantity::Conservative, grids.grid_3d)?;
    let path_err = path
        .samples
        .iter()
        .map(|s| s.points[0].max_abs_diff(p(-s.z, 1.0 - s.z)))
        .fold(0.0, f64::max);
    c.truth("conservative path is (-z, 1-z)", path_err <= 1e-6, format!("max error {path_err:.1e}"));
    let nash_path = induced_path(&f_game, PathQuantity::NashPayoffs, grids.grid_3d)?;
    let nash_err = nash_path
        .samples
        .iter()
        .flat_map(|s| s.points.iter().map(move |q| (s.z, *q)))
        .map(|(z, q)| {
            let x = q.p2 + z;
            (q.p1 + z).abs().max(-x).max(x - 1.0).max(0.0)
        })
        .fold(0.0, f64::max);
    c.truth("Nash path is {(-z, x-z)}", nash_err <= 1e-12, format!("max error {nash_err:.1e}"));

    let proper = proper_coopetitive_solution(&f_game, grids.grid_3d, solver_tol).map_err(|e| e.to_string());
    c.solution("proper coopetitive solution", &proper, p(-1.0, -1.0), 0.0);
    if let Ok(s) = &proper {
        let at = s.preimage.map(|d| (d.x, d.y, d.z));
        c.truth("proper coopetitive preimage is (0,0,1)", at == Some((0.0, 0.0, Some(1.0))), fmt_preimage(s.preimage));
    }
    let mut fig5 = vec![("proper".to_string(), proper.clone())];
    let l = crate::coopetition::core_supremum(&f_game, grids.grid_3d).map_err(|e| e.to_string());
    match &l {
        Ok(l) => c.close("L = supremum of the initial core", *l, p(0.0, 1.0), tol),
        Err(e) => c.truth("L = supremum of the initial core", false, e.clone()),
    }
    let win = standard_win_win_solution(&f_game, grids.grid_3d, solver_tol).map_err(|e| e.to_string());
    match &win {
        Ok(s) => {
            let report = win_win_report(&f_game, s.clone(), grids.grid_3d).map_err(|e| ScenarioError::Solver(e.to_string()))?;
            c.truth(
                "standard win-win solution is win-win",
                report.is_win_win && report.margin.p1 > 0.0 && report.margin.p2 > 0.0,
                format!("payoff {} margin {}", pt(s.payoff), pt(report.margin)),
            );
        }
        Err(e) => c.truth("standard win-win solution is win-win", false, e.clone()),
    }
    fig5.push(("win-win".to_string(), win.clone()));
    candidates.extend(fig5.iter().cloned());
    figure(5, &RenderData::sampled(&f, "coopetitive payoff space", true, oks(&fig5))?)?;

    // enlarge the pie: gain frame is -f + (0, 4)
    let space = payoff_space(&f_game, grids.grid_3d)?;
    let coop_gain = space.points().iter().map(|q| 4.0 - q.payoff.sum()).fold(f64::NEG_INFINITY, f64::max);
    let pre_gain = f0.cloud.points().iter().map(|q| 4.0 - q.payoff.sum()).fold(f64::NEG_INFINITY, f64::max);
    c.scalar("collective gain before coopetition", pre_gain, 6.0, 1e-6);
    c.scalar("collective gain with coopetition", coop_gain, 8.0, 1e-6);

    // figure 6: Kalai and TU solutions on the coopetitive space
    let partial_inf = path.extrema().map(|e| e.0).unwrap_or(p(f64::NAN, f64::NAN));
    c.close("infimum of the partial path B' + [0,1]v(1)", partial_inf, p(-1.0, 0.0), 1e-6);
    let h1 = ks(&f, b_prime, f.inf);
    let s = (13.0 - 89f64.sqrt()) / 8.0;
    c.solution("H' = KS with a = B', b = inf f", &h1, p(-5.0 * s, 1.0 - 2.0 * s), tol);
    let h2 = ks(&f, partial_inf, f.inf);
    let k1c = crossing(&tu, b_prime, f.inf, solver_tol);
    c.solution("K' = TU compromise with a = B', b = inf f", &k1c, p(-25.0 / 7.0, -3.0 / 7.0), tol);
    let k2c = crossing(&tu, partial_inf, f.inf, solver_tol);
    c.solution("K'' = TU compromise with a = (-1,0), b = inf f", &k2c, p(-3.4, -0.6), tol);
    let fig6 = vec![
        ("H'".to_string(), h1),
        ("H''".to_string(), h2),
        ("K'".to_string(), k1c),
        ("K''".to_string(), k2c),
    ];
    candidates.extend(fig6.iter().map(|(n, s)| (format!("{n} (coopetitive)"), s.clone())));
    figure(6, &RenderData::sampled(&f, "Kalai and TU solutions on the coopetitive space", true, oks(&fig6))?)?;

    let report = report_text(&c.0, &candidates, grids);
    let report_path = out_dir.join("report.txt");
    write_file(&report_path, &report)?;
    files.insert(0, report_path);
    Ok(DemoOutcome {
        checks: c.0,
        candidates,
        files,
        report,
    })
}

fn crossing(tu: &TUBoundary, a: PayoffPoint, b: PayoffPoint, tol: f64) -> Result<SolutionPoint, String> {
    tu_crossing(tu, a, b, tol).map_err(|e| e.to_string())
}

fn oks(list: &[(String, Result<SolutionPoint, String>)]) -> Vec<(String, SolutionPoint)> {
    list.iter()
        .filter_map(|(n, s)| s.as_ref().ok().map(|s| (n.clone(), s.clone())))
        .collect()
}

fn report_text(checks: &[Check], candidates: &[(String, Result<SolutionPoint, String>)], grids: DemoGrids) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "market-entry demo: grid {} (plane), {} (coopetitive), check tolerance {} / {}",
        grids.grid_2d, grids.grid_3d, grids.tol, grids.tol_3d
    );
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(out, "checks: {passed}/{} passed", checks.len());
    for c in checks {
        let mark = if c.passed { "pass" } else { "FAIL" };
        if c.detail.is_empty() {
            let _ = writeln!(out, "  [{mark}] {}", c.name);
        } else {
            let _ = writeln!(out, "  [{mark}] {}: {}", c.name, c.detail);
        }
    }
    let _ = writeln!(out, "candidates:");
    for (name, s) in candidates {
        match s {
            Ok(s) => {
                let _ = writeln!(
                    out,
                    "  {name}: {} payoff {} a {} b {} at {}",
                    s.method,
                    pt(s.payoff),
                    s.threat.map_or_else(|| "n/a".into(), pt),
                    s.utopia.map_or_else(|| "n/a".into(), pt),
                    fmt_preimage(s.preimage)
                );
            }
            Err(e) => {
                let _ = writeln!(out, "  {name}: n/a ({e})");
            }
        }
    }
    out
}
