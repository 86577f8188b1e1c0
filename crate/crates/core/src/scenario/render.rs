use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::solve::{Prepared, SolutionKind, SolveRequest};
use super::{GameFile, LoadedGame, ScenarioError, Settings};
use crate::bargaining::SolutionPoint;
use crate::game::FiniteBimatrixGame;
use crate::geometry::{pareto_filter, tu_boundary, DomainPoint, Flavor, PointCloud, TUBoundary, TaggedPoint};
use crate::point::{Orientation, PayoffPoint};

/// Layers of one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderData {
    pub title: String,
    pub orientation: Orientation,
    /// Whether CSV rows carry a `z` column.
    pub has_z: bool,
    pub cloud: Vec<TaggedPoint>,
    pub pareto: Vec<TaggedPoint>,
    pub nash: Vec<TaggedPoint>,
    pub tu: Option<TUBoundary>,
    pub solutions: Vec<(String, SolutionPoint)>,
}

impl RenderData {
    /// Pure payoff scatter of a finite game; preimages are `(row, col)` indices.
    pub fn finite(game: &FiniteBimatrixGame, tol: f64) -> Result<Self, ScenarioError> {
        let o = game.orientation();
        let cloud: Vec<TaggedPoint> = game
            .cells()
            .map(|c| TaggedPoint::new(game.payoff(c), DomainPoint::xy(c.row as f64, c.col as f64)))
            .collect();
        let pc = PointCloud::new(cloud.clone(), 1.0)?;
        let pareto = pareto_filter(&pc, o, Flavor::for_orientation(o)).points().to_vec();
        let nash = game
            .pure_nash_equilibria()
            .into_iter()
            .map(|c| TaggedPoint::new(game.payoff(c), DomainPoint::xy(c.row as f64, c.col as f64)))
            .collect();
        Ok(Self {
            title: "finite payoff space".to_string(),
            orientation: o,
            has_z: false,
            cloud,
            pareto,
            nash,
            tu: Some(tu_boundary(&pc, o, tol)?),
            solutions: Vec::new(),
        })
    }

    pub(crate) fn sampled(
        p: &Prepared,
        title: &str,
        has_z: bool,
        solutions: Vec<(String, SolutionPoint)>,
    ) -> Result<Self, ScenarioError> {
        Ok(Self {
            title: title.to_string(),
            orientation: p.game.orientation(),
            has_z,
            cloud: p.cloud.points().to_vec(),
            pareto: p.boundary.points().to_vec(),
            nash: p.nash_zone()?.points().to_vec(),
            tu: Some(p.tu()?),
            solutions,
        })
    }

    /// Sampled payoff space with every solution that exists under defaults.
    pub fn from_file(file: &GameFile, settings: &Settings) -> Result<Self, ScenarioError> {
        match &file.game {
            LoadedGame::Finite(g) => Self::finite(g, settings.tol_for(file)),
            LoadedGame::Coopetitive(_) => {
                let p = Prepared::from_file(file, settings)?;
                let solutions = SolutionKind::ALL
                    .into_iter()
                    .filter_map(|k| p.solve(&SolveRequest::new(k)).ok().map(|o| (k.tag().to_string(), o.solution)))
                    .collect();
                Self::sampled(&p, "coopetitive payoff space", true, solutions)
            }
        }
    }

    /// Number of CSV data rows: cloud, boundary, Nash, TU witnesses and markers.
    pub fn row_count(&self) -> usize {
        self.cloud.len()
            + self.pareto.len()
            + self.nash.len()
            + self.tu.as_ref().map_or(0, |t| t.witnesses.len())
            + self.solutions.len()
    }
}

/// Shortest round-trip decimal, with negative zero printed as `0`.
fn num(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        v.to_string()
    }
}

fn csv_row(out: &mut String, has_z: bool, pre: Option<DomainPoint>, payoff: PayoffPoint, tag: &str) {
    let (x, y, z) = match pre {
        Some(d) => (num(d.x), num(d.y), d.z.map(num).unwrap_or_default()),
        None => Default::default(),
    };
    if has_z {
        let _ = writeln!(out, "{x},{y},{z},{},{},{tag}", num(payoff.p1), num(payoff.p2));
    } else {
        let _ = writeln!(out, "{x},{y},{},{},{tag}", num(payoff.p1), num(payoff.p2));
    }
}

/// CSV with header `x,y[,z],p1,p2,tag`.
pub fn render_csv(data: &RenderData) -> String {
    let mut out = String::with_capacity(64 * data.row_count() + 32);
    out.push_str(if data.has_z { "x,y,z,p1,p2,tag\n" } else { "x,y,p1,p2,tag\n" });
    let layers: [(&[TaggedPoint], &str); 3] = [(&data.cloud, "cloud"), (&data.pareto, "pareto"), (&data.nash, "nash")];
    for (points, tag) in layers {
        for p in points {
            csv_row(&mut out, data.has_z, Some(p.preimage), p.payoff, tag);
        }
    }
    if let Some(tu) = &data.tu {
        for p in &tu.witnesses {
            csv_row(&mut out, data.has_z, Some(p.preimage), p.payoff, "tu");
        }
    }
    for (name, s) in &data.solutions {
        csv_row(&mut out, data.has_z, s.preimage, s.payoff, &format!("solution:{name}"));
    }
    out
}

const SCALE: f64 = 100.0;
const MARGIN: f64 = 40.0;
const LEGEND: f64 = 260.0;
/// Cloud and Nash zone are drawn as one square per occupied bucket.
const BUCKET: f64 = 2.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Frame {
    lo: PayoffPoint,
    hi: PayoffPoint,
}

impl Frame {
    fn px(&self, p: PayoffPoint) -> (f64, f64) {
        (MARGIN + (p.p1 - self.lo.p1) * SCALE, MARGIN + (self.hi.p2 - p.p2) * SCALE)
    }
}

fn buckets(frame: &Frame, points: &[TaggedPoint]) -> BTreeSet<(i64, i64)> {
    points
        .iter()
        .map(|p| {
            let (x, y) = frame.px(p.payoff);
            ((x / BUCKET).floor() as i64, (y / BUCKET).floor() as i64)
        })
        .collect()
}

fn squares(out: &mut String, cells: &BTreeSet<(i64, i64)>, fill: &str) {
    let _ = writeln!(out, "<g fill=\"{fill}\">");
    for (i, j) in cells {
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{BUCKET}\" height=\"{BUCKET}\"/>",
            *i as f64 * BUCKET,
            *j as f64 * BUCKET
        );
    }
    out.push_str("</g>\n");
}

/// SVG in payoff axes at 100 px per unit, with the origin cross and a legend.
pub fn render_svg(data: &RenderData) -> String {
    let mut all: Vec<PayoffPoint> = data.cloud.iter().map(|p| p.payoff).collect();
    all.extend(data.solutions.iter().map(|(_, s)| s.payoff));
    if let Some(tu) = &data.tu {
        all.extend([tu.segment_ends.0, tu.segment_ends.1]);
    }
    all.push(PayoffPoint::ZERO);
    let lo = all.iter().fold(all[0], |a, p| a.component_min(*p));
    let hi = all.iter().fold(all[0], |a, p| a.component_max(*p));
    let frame = Frame { lo, hi };
    let width = 2.0 * MARGIN + (hi.p1 - lo.p1) * SCALE + LEGEND;
    let height = (2.0 * MARGIN + (hi.p2 - lo.p2) * SCALE).max(220.0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.1}\" height=\"{height:.1}\" viewBox=\"0 0 {width:.1} {height:.1}\">"
    );
    let _ = writeln!(out, "<title>{}</title>", escape(&data.title));
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");

    squares(&mut out, &buckets(&frame, &data.cloud), "#c6d4e6");

    let (ox, oy) = frame.px(PayoffPoint::ZERO);
    let (x0, y0) = frame.px(PayoffPoint::new(lo.p1, hi.p2));
    let (x1, y1) = frame.px(PayoffPoint::new(hi.p1, lo.p2));
    let _ = writeln!(
        out,
        "<g stroke=\"#555\" stroke-width=\"1\"><line x1=\"{x0:.1}\" y1=\"{oy:.1}\" x2=\"{x1:.1}\" y2=\"{oy:.1}\"/><line x1=\"{ox:.1}\" y1=\"{y0:.1}\" x2=\"{ox:.1}\" y2=\"{y1:.1}\"/></g>"
    );

    squares(&mut out, &buckets(&frame, &data.nash), "#2e8b57");

    if !data.pareto.is_empty() {
        let pts: Vec<String> = data
            .pareto
            .iter()
            .map(|p| {
                let (x, y) = frame.px(p.payoff);
                format!("{x:.1},{y:.1}")
            })
            .collect();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"{}\"/>",
            pts.join(" ")
        );
    }
    if let Some(tu) = &data.tu {
        let (ax, ay) = frame.px(tu.segment_ends.0);
        let (bx, by) = frame.px(tu.segment_ends.1);
        let _ = writeln!(
            out,
            "<line x1=\"{ax:.1}\" y1=\"{ay:.1}\" x2=\"{bx:.1}\" y2=\"{by:.1}\" stroke=\"#8e44ad\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>"
        );
    }
    for (name, s) in &data.solutions {
        let (x, y) = frame.px(s.payoff);
        let _ = writeln!(
            out,
            "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"4\" fill=\"black\"/><text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" font-family=\"sans-serif\">{}</text>",
            x + 6.0,
            y - 6.0,
            escape(name)
        );
    }

    let lx = width - LEGEND + 10.0;
    let note = match data.orientation {
        Orientation::Gain => "gain game: better = up-right",
        Orientation::Loss => "loss game: better = down-left",
    };
    let entries = [
        ("#c6d4e6", "payoff space"),
        ("#c0392b", "Pareto boundary"),
        ("#2e8b57", "Nash zone"),
        ("#8e44ad", "TU line"),
        ("black", "solutions"),
    ];
    let _ = writeln!(out, "<g font-size=\"12\" font-family=\"sans-serif\">");
    let _ = writeln!(out, "<text x=\"{lx:.1}\" y=\"{:.1}\">{}</text>", MARGIN, escape(&data.title));
    for (i, (color, label)) in entries.iter().enumerate() {
        let y = MARGIN + 20.0 * (i + 1) as f64;
        let _ = writeln!(
            out,
            "<rect x=\"{lx:.1}\" y=\"{:.1}\" width=\"12\" height=\"12\" fill=\"{color}\"/><text x=\"{:.1}\" y=\"{y:.1}\">{label}</text>",
            y - 10.0,
            lx + 18.0
        );
    }
    let y = MARGIN + 20.0 * (entries.len() + 1) as f64;
    let _ = writeln!(out, "<text x=\"{lx:.1}\" y=\"{y:.1}\">{note}</text>");
    let _ = writeln!(out, "<text x=\"{lx:.1}\" y=\"{:.1}\">1 unit = 100 px</text>", y + 20.0);
    out.push_str("</g>\n</svg>\n");
    out
}

/// Paths written by [`render`] and the CSV row count.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedFiles {
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub rows: usize,
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), ScenarioError> {
    std::fs::write(path, contents).map_err(|e| ScenarioError::io(path, e))
}

/// Writes the requested files for `data`.
pub(crate) fn write_render(data: &RenderData, csv: Option<&Path>, svg: Option<&Path>) -> Result<RenderedFiles, ScenarioError> {
    if let Some(path) = csv {
        write_file(path, &render_csv(data))?;
    }
    if let Some(path) = svg {
        write_file(path, &render_svg(data))?;
    }
    Ok(RenderedFiles {
        csv: csv.map(Path::to_path_buf),
        svg: svg.map(Path::to_path_buf),
        rows: data.row_count(),
    })
}

pub fn render(file: &GameFile, settings: &Settings, csv: Option<&Path>, svg: Option<&Path>) -> Result<RenderedFiles, ScenarioError> {
    let data = RenderData::from_file(file, settings)?;
    write_render(&data, csv, svg)
}
