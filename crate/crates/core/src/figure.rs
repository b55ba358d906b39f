//! Sign-class diagrams of Cayley balls.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Kind;
use crate::order::Order;
use crate::sigma::CayleyBall;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureFormat {
    Dot,
    Svg,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Positive,
    Negative,
    Neutral,
}

impl SignClass {
    fn color(self) -> &'static str {
        match self {
            SignClass::Positive => "#d62728",
            SignClass::Negative => "#1f77b4",
            SignClass::Neutral => "#7f7f7f",
        }
    }
}

#[derive(Serialize)]
pub struct FigureVertex {
    pub id: usize,
    pub element: String,
    pub distance: u32,
    pub class: SignClass,
}

#[derive(Serialize)]
pub struct FigureData {
    pub order: String,
    pub radius: usize,
    pub vertices: Vec<FigureVertex>,
    pub edges: Vec<(usize, usize)>,
}

pub fn classify_ball(o: &Order, ball: &CayleyBall) -> Result<Vec<SignClass>> {
    ball.vertices
        .iter()
        .map(|g| {
            Ok(if o.is_positive(g)? {
                SignClass::Positive
            } else if o.is_positive(&o.group.inv(g))? {
                SignClass::Negative
            } else {
                SignClass::Neutral
            })
        })
        .collect()
}

pub fn figure_data(o: &Order, radius: usize) -> Result<(FigureData, CayleyBall)> {
    let ball = CayleyBall::build(&o.group, &o.group.gens(), radius, crate::sigma::DEFAULT_BUDGET)?;
    let classes = classify_ball(o, &ball)?;
    let vertices = ball
        .vertices
        .iter()
        .enumerate()
        .map(|(i, g)| FigureVertex {
            id: i,
            element: o.group.format(g),
            distance: ball.dist[i],
            class: classes[i],
        })
        .collect();
    let mut edges = Vec::new();
    for v in 0..ball.len() {
        for u in ball.neighbors(v) {
            if u > v {
                edges.push((v, u));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok((
        FigureData {
            order: o.describe(),
            radius,
            vertices,
            edges,
        },
        ball,
    ))
}

/// Integer plane coordinates for rank-two abelian and free groups.
fn layout(ball: &CayleyBall, radius: usize) -> Option<Vec<(i64, i64)>> {
    let g = &ball.group;
    if g.n_gens() != 2 {
        return None;
    }
    match g.kind() {
        Kind::FreeAbelian => Some(ball.vertices.iter().map(|v| (v.pc()[0] * 40, -v.pc()[1] * 40)).collect()),
        Kind::Free => {
            let top = 20i64 << radius.min(20);
            Some(
                ball.vertices
                    .iter()
                    .map(|v| {
                        let (mut x, mut y) = (0i64, 0i64);
                        for (i, &l) in v.word().iter().enumerate() {
                            let step = top >> (i + 1);
                            match l {
                                1 => x += step,
                                -1 => x -= step,
                                2 => y -= step,
                                _ => y += step,
                            }
                        }
                        (x, y)
                    })
                    .collect(),
            )
        }
        Kind::Nilpotent2 => None,
    }
}

pub fn render(o: &Order, radius: usize, format: FigureFormat) -> Result<String> {
    let (data, ball) = figure_data(o, radius)?;
    match format {
        FigureFormat::Json => {
            Ok(serde_json::to_string_pretty(&data).map_err(|e| Error::Io(e.to_string()))? + "\n")
        }
        FigureFormat::Dot => {
            let pos = layout(&ball, radius);
            let mut s = String::new();
            let _ = writeln!(s, "graph cayley {{");
            let _ = writeln!(s, "  label=\"{}\";", data.order.replace('"', "'"));
            let _ = writeln!(s, "  node [shape=circle, style=filled, fontsize=8];");
            for v in &data.vertices {
                let _ = write!(
                    s,
                    "  v{} [label=\"{}\", fillcolor=\"{}\"",
                    v.id,
                    v.element,
                    v.class.color()
                );
                if let Some(p) = &pos {
                    let (x, y) = p[v.id];
                    let _ = write!(s, ", pos=\"{},{}!\"", x, -y);
                }
                let _ = writeln!(s, "];");
            }
            for &(a, b) in &data.edges {
                let (ca, cb) = (data.vertices[a].class, data.vertices[b].class);
                let color = if ca == cb { ca.color() } else { "#cccccc" };
                let _ = writeln!(s, "  v{a} -- v{b} [color=\"{color}\"];");
            }
            s.push_str("}\n");
            Ok(s)
        }
        FigureFormat::Svg => {
            let pos = layout(&ball, radius).ok_or_else(|| {
                Error::Unsupported("SVG layout exists for rank-two free and free abelian groups".into())
            })?;
            let (mut x0, mut y0, mut x1, mut y1) = (0i64, 0i64, 0i64, 0i64);
            for &(x, y) in &pos {
                x0 = x0.min(x);
                y0 = y0.min(y);
                x1 = x1.max(x);
                y1 = y1.max(y);
            }
            let pad = 20;
            let mut s = String::new();
            let _ = writeln!(
                s,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
                x0 - pad,
                y0 - pad,
                x1 - x0 + 2 * pad,
                y1 - y0 + 2 * pad
            );
            for &(a, b) in &data.edges {
                let (ca, cb) = (data.vertices[a].class, data.vertices[b].class);
                let color = if ca == cb { ca.color() } else { "#cccccc" };
                let _ = writeln!(
                    s,
                    "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2\"/>",
                    pos[a].0, pos[a].1, pos[b].0, pos[b].1
                );
            }
            for v in &data.vertices {
                let _ = writeln!(
                    s,
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"{}\"><title>{}</title></circle>",
                    pos[v.id].0,
                    pos[v.id].1,
                    v.class.color(),
                    v.element
                );
            }
            s.push_str("</svg>\n");
            Ok(s)
        }
    }
}
