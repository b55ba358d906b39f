//! Command implementations behind the `pogroup` binary.

use serde::Serialize;

use crate::classify::{census, Bounds};
use crate::error::{Error, Result};
use crate::figure::{render, FigureFormat};
use crate::order::{Comparison, OrderKind};
use crate::report::Report;
use crate::sigma::{
    classical_sigma_membership, sigma_membership, theorem_a_experiment, Outcome, Schedule, SigmaOptions,
    CAVEAT_GENSET,
};
use crate::spec::{parse_spec, parse_word, print_spec, Decl, SpecFile, Target};

/// A parsed specification together with its source text.
pub struct Session {
    pub text: String,
    pub spec: SpecFile,
}

impl Session {
    pub fn from_text(text: &str) -> Result<Self> {
        Ok(Session {
            text: text.into(),
            spec: parse_spec(text)?,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }
}

pub fn cmd_census(s: &Session, group: &str, bound: i64) -> Result<Report> {
    let g = s.spec.group(group)?;
    let c = census(g, Bounds::new(bound))?;
    let rec = c.record()?;
    let caveat = rec.completeness.clone();
    Ok(Report::new(
        &s.text,
        "census",
        &[("group", group.into()), ("bound", bound.to_string())],
        rec,
    )?
    .with_caveats(vec![caveat]))
}

#[derive(Serialize)]
struct SigmaResult<T: Serialize> {
    order: String,
    route: &'static str,
    verdicts: T,
}

pub fn cmd_sigma(s: &Session, order: &str, schedule: &Schedule, opts: &SigmaOptions) -> Result<Report> {
    let o = s.spec.order(order)?;
    let args = [
        ("order", order.to_string()),
        ("radii", join(&schedule.radii)),
        ("slacks", join(&schedule.slacks)),
        ("margin", opts.margin.to_string()),
    ];
    let (verdicts, route) = if let OrderKind::Character(c) = &o.kind {
        (vec![classical_sigma_membership(c, schedule, opts)?], "character and order")
    } else {
        (sigma_membership(o, schedule, opts)?, "order")
    };
    let inconclusive = verdicts
        .iter()
        .any(|v| matches!(v.outcome, Outcome::Inconclusive { .. }));
    Ok(Report::new(
        &s.text,
        "sigma",
        &args,
        SigmaResult {
            order: order.into(),
            route,
            verdicts,
        },
    )?
    .with_caveats(vec![CAVEAT_GENSET.into()])
    .inconclusive(inconclusive))
}

#[derive(Serialize)]
struct CompareResult {
    order: String,
    g: String,
    h: String,
    comparison: Comparison,
}

pub fn cmd_compare(s: &Session, order: &str, g: &str, h: &str) -> Result<Report> {
    let o = s.spec.order(order)?;
    let x = parse_word(&o.group, g)?;
    let y = parse_word(&o.group, h)?;
    let comparison = o.compare(&x, &y)?;
    Report::new(
        &s.text,
        "compare",
        &[("order", order.into()), ("g", g.into()), ("h", h.into())],
        CompareResult {
            order: order.into(),
            g: o.group.format(&x),
            h: o.group.format(&y),
            comparison,
        },
    )
}

/// `target` names a homomorphism or an experiment declaring one; explicit
/// schedule and bound override the experiment's values.
pub fn cmd_theorem_a(
    s: &Session,
    target: &str,
    schedule: Option<Schedule>,
    bound: Option<i64>,
    opts: &SigmaOptions,
) -> Result<Report> {
    let (hom, mut sched, mut b, mut opts) = match s.spec.experiment(target) {
        Ok(e) => {
            let Some(Target::Hom(h)) = &e.target else {
                return Err(Error::Unsupported(format!("experiment {target} does not name a hom")));
            };
            let mut o = opts.clone();
            o.margin = e.margin;
            (
                s.spec.hom(h)?,
                Schedule {
                    radii: e.radii.clone(),
                    slacks: e.slacks.clone(),
                },
                e.bound,
                o,
            )
        }
        Err(_) => (s.spec.hom(target)?, Schedule::default(), 1, opts.clone()),
    };
    if let Some(x) = schedule {
        sched = x;
    }
    if let Some(x) = bound {
        b = x;
    }
    opts.margin = opts.margin.max(1);
    let r = theorem_a_experiment(hom, &sched, Bounds::new(b), &opts)?;
    let caveats = r.caveats.clone();
    let inconclusive = r.inconclusive > 0;
    Ok(Report::new(
        &s.text,
        "theorem-a",
        &[
            ("target", target.into()),
            ("radii", join(&sched.radii)),
            ("slacks", join(&sched.slacks)),
            ("bound", b.to_string()),
            ("margin", opts.margin.to_string()),
        ],
        r,
    )?
    .with_caveats(caveats)
    .inconclusive(inconclusive))
}

pub fn cmd_figure(s: &Session, order: &str, radius: usize, format: FigureFormat) -> Result<String> {
    let o = s.spec.order(order)?;
    let body = render(o, radius, format)?;
    if format == FigureFormat::Json {
        let v: serde_json::Value = serde_json::from_str(&body).map_err(|e| Error::Io(e.to_string()))?;
        return Ok(Report::new(
            &s.text,
            "figure",
            &[("order", order.into()), ("radius", radius.to_string())],
            v,
        )?
        .to_json());
    }
    Ok(body)
}

#[derive(Serialize)]
struct ValidateResult {
    groups: Vec<String>,
    homs: Vec<String>,
    orders: Vec<String>,
    experiments: Vec<String>,
    canonical: String,
}

pub fn cmd_validate(s: &Session) -> Result<Report> {
    let names = |k| s.spec.names(k).into_iter().map(String::from).collect();
    let orders = s
        .spec
        .decls
        .iter()
        .filter_map(|d| match d {
            Decl::Order(o) => Some(format!("{}: {}", o.name, o.order.describe())),
            _ => None,
        })
        .collect();
    Report::new(
        &s.text,
        "validate",
        &[],
        ValidateResult {
            groups: names("group"),
            homs: names("hom"),
            orders,
            experiments: names("experiment"),
            canonical: print_spec(&s.spec),
        },
    )
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
