//! CSV plot data: the graph of a map, cobwebs, orbits and distribution
//! functions.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::chaos::{default_t_grid, dist_fns, trajectory, DEFAULT_PRECISION_BITS};
use crate::error::{Error, Result};
use crate::pwl::PwlMap;
use crate::rational::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Graph,
    Cobweb,
    Orbit,
    DistFn,
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph" => Ok(PlotKind::Graph),
            "cobweb" => Ok(PlotKind::Cobweb),
            "orbit" => Ok(PlotKind::Orbit),
            "distfn" => Ok(PlotKind::DistFn),
            _ => Err(Error::Parse(format!("unknown plot kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotParams {
    pub x0: Option<Rat>,
    pub y0: Option<Rat>,
    pub n: usize,
    pub t_points: usize,
}

impl Default for PlotParams {
    fn default() -> Self {
        PlotParams {
            x0: None,
            y0: None,
            n: 20,
            t_points: 101,
        }
    }
}

/// Default seeds: points at 1/5 and 3/7 of the way across the domain.
fn seed_or(f: &PwlMap, given: &Option<Rat>, frac: Rat) -> Rat {
    given
        .clone()
        .unwrap_or_else(|| f.domain().lo() + &(&f.domain().len() * &frac))
}

pub fn plotdata(f: &PwlMap, kind: PlotKind, params: &PlotParams) -> Result<String> {
    match kind {
        PlotKind::Graph => Ok(graph_csv(f)),
        PlotKind::Cobweb => cobweb_csv(f, &seed_or(f, &params.x0, Rat::new(1, 5)), params.n),
        PlotKind::Orbit => orbit_csv(f, &seed_or(f, &params.x0, Rat::new(1, 5)), params.n),
        PlotKind::DistFn => {
            let x = seed_or(f, &params.x0, Rat::new(1, 5));
            let y = seed_or(f, &params.y0, Rat::new(3, 7));
            let grid = default_t_grid(f.domain().len().to_f64(), params.t_points);
            Ok(dist_fns(f, &x, &y, params.n, &grid)?.to_csv())
        }
    }
}

/// Columns `x,y`: the nodes of the polyline.
pub fn graph_csv(f: &PwlMap) -> String {
    let mut s = String::from("x,y\n");
    for (x, y) in f.nodes() {
        let _ = writeln!(s, "{},{}", x.to_f64(), y.to_f64());
    }
    s
}

/// Columns `x,y`: the path `(x_0,x_0) → (x_0,x_1) → (x_1,x_1) → …`,
/// `2n + 1` rows.
pub fn cobweb_csv(f: &PwlMap, x0: &Rat, n: usize) -> Result<String> {
    let orbit = trajectory(f, x0, n, DEFAULT_PRECISION_BITS)?.values_f64();
    let mut s = String::from("x,y\n");
    let _ = writeln!(s, "{},{}", orbit[0], orbit[0]);
    for w in orbit.windows(2) {
        let _ = writeln!(s, "{},{}", w[0], w[1]);
        let _ = writeln!(s, "{},{}", w[1], w[1]);
    }
    Ok(s)
}

/// Columns `n,x`.
pub fn orbit_csv(f: &PwlMap, x0: &Rat, n: usize) -> Result<String> {
    let orbit = trajectory(f, x0, n, DEFAULT_PRECISION_BITS)?.values_f64();
    let mut s = String::from("n,x\n");
    for (i, x) in orbit.iter().enumerate() {
        let _ = writeln!(s, "{i},{x}");
    }
    Ok(s)
}
