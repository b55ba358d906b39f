//! Cayley balls, slack-path connectivity of order half-spaces, and the
//! finitely-generated-kernel experiment.

pub mod ball;
pub mod connect;

use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

pub use ball::{CayleyBall, DEFAULT_BUDGET};
pub use connect::{certify, npath_connected, partition, Connectivity, Partition, DEFAULT_MARGIN};

use crate::classify::{census, Bounds};
use crate::error::{Error, Result};
use crate::field::AlgNum;
use crate::group::{Element, GroupRef, Hom};
use crate::order::{halfspace_predicate, relative_sphere_contains, Character, Order, PropVerdict};

pub const CAVEAT_GENSET: &str =
    "coarse connectivity is probed in one fixed generating set (presentation generators and inverses) inside finite balls; this is evidence, not a decision";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub radii: Vec<usize>,
    pub slacks: Vec<usize>,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            radii: vec![4, 6, 8],
            slacks: vec![1, 2, 3],
        }
    }
}

impl Schedule {
    pub fn max_radius(&self) -> usize {
        self.radii.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SigmaOptions {
    pub margin: usize,
    pub budget: usize,
    pub cache_dir: Option<PathBuf>,
}

impl SigmaOptions {
    pub fn new() -> Self {
        SigmaOptions {
            margin: DEFAULT_MARGIN,
            budget: DEFAULT_BUDGET,
            cache_dir: None,
        }
    }

    pub fn ball(&self, group: &GroupRef, schedule: &Schedule) -> Result<CayleyBall> {
        let r = schedule.max_radius() + self.margin + 2;
        CayleyBall::cached(group, &group.gens(), r, self.budget, self.cache_dir.as_deref())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Probe {
    pub radius: usize,
    pub slack: usize,
    pub members: usize,
    pub components: usize,
    pub connectivity: Connectivity,
    pub witness: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    EvidenceConnected { radius: usize, slack: usize },
    WitnessDisconnected { pair: (String, String), slack: usize, radius: usize },
    Inconclusive { reason: String },
}

impl Outcome {
    pub fn is_connected(&self) -> bool {
        matches!(self, Outcome::EvidenceConnected { .. })
    }
    pub fn is_disconnected(&self) -> bool {
        matches!(self, Outcome::WitnessDisconnected { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaVerdict {
    pub order: String,
    pub k: String,
    pub outcome: Outcome,
    pub schedule: Schedule,
    pub margin: usize,
    pub probes: Vec<Probe>,
    pub caveats: Vec<String>,
}

/// Run every probe of the schedule on one member set.
fn run_probes(
    ball: &CayleyBall,
    member: &[bool],
    schedule: &Schedule,
    margin: usize,
) -> (Vec<Probe>, Vec<Partition>, Outcome) {
    let mut probes = Vec::new();
    let mut parts = Vec::new();
    for &n in &schedule.slacks {
        for &r in &schedule.radii {
            let p = partition(ball, member, r, n, margin);
            let conn = certify(ball, member, r, n, margin, &p);
            let witness = match &conn {
                Connectivity::Disconnected { pair } => Some((
                    ball.group.format(&ball.vertices[pair.0]),
                    ball.group.format(&ball.vertices[pair.1]),
                )),
                _ => None,
            };
            probes.push(Probe {
                radius: r,
                slack: n,
                members: p.core.len(),
                components: p.components(),
                connectivity: conn,
                witness,
            });
            parts.push(p);
        }
    }
    let outcome = aggregate(&probes, schedule);
    (probes, parts, outcome)
}

/// The verdict at the largest slack decides; connected evidence reports the
/// smallest slack from which every probe connects.
fn aggregate(probes: &[Probe], schedule: &Schedule) -> Outcome {
    let Some(&top) = schedule.slacks.iter().max() else {
        return Outcome::Inconclusive {
            reason: "empty schedule".into(),
        };
    };
    let at_top: Vec<&Probe> = probes.iter().filter(|p| p.slack == top).collect();
    if at_top.iter().all(|p| p.connectivity == Connectivity::Connected) {
        let mut slack = top;
        let mut slacks = schedule.slacks.clone();
        slacks.sort_unstable();
        for &n in slacks.iter().rev() {
            if probes
                .iter()
                .filter(|p| p.slack == n)
                .all(|p| p.connectivity == Connectivity::Connected)
            {
                slack = n;
            } else {
                break;
            }
        }
        return Outcome::EvidenceConnected {
            radius: schedule.max_radius(),
            slack,
        };
    }
    if let Some(p) = at_top.iter().find(|p| p.witness.is_some()) {
        return Outcome::WitnessDisconnected {
            pair: p.witness.clone().unwrap(),
            slack: p.slack,
            radius: p.radius,
        };
    }
    let reason = at_top
        .iter()
        .find_map(|p| match &p.connectivity {
            Connectivity::Inconclusive { reason } => Some(reason.clone()),
            _ => None,
        })
        .unwrap_or_default();
    Outcome::Inconclusive { reason }
}

fn members_of(ball: &CayleyBall, f: impl Fn(&Element) -> Result<bool> + Sync) -> Result<Vec<bool>> {
    ball.vertices.par_iter().map(&f).collect()
}

fn require_sigma_pre(o: &Order) -> Result<()> {
    if !o.is_nontrivial() {
        return Err(Error::Unsupported("the order is trivial".into()));
    }
    let full = o.is_full(3)?;
    let arch = o.is_archimedean(10)?;
    if !full.is_yes() || !arch.is_yes() {
        return Err(Error::Unsupported(format!(
            "needs a structurally full archimedean order (full: {}, archimedean: {})",
            full.label(),
            arch.label()
        )));
    }
    Ok(())
}

/// Half-space connectivity for every maximal antichain normal subgroup.
pub fn sigma_membership(o: &Order, schedule: &Schedule, opts: &SigmaOptions) -> Result<Vec<SigmaVerdict>> {
    let ball = opts.ball(&o.group, schedule)?;
    sigma_membership_in(o, &ball, schedule, opts.margin)
}

pub fn sigma_membership_in(
    o: &Order,
    ball: &CayleyBall,
    schedule: &Schedule,
    margin: usize,
) -> Result<Vec<SigmaVerdict>> {
    Ok(order_route(o, ball, schedule, margin)?
        .into_iter()
        .map(|(v, _, _)| v)
        .collect())
}

fn order_route(
    o: &Order,
    ball: &CayleyBall,
    schedule: &Schedule,
    margin: usize,
) -> Result<Vec<(SigmaVerdict, Vec<bool>, Vec<Partition>)>> {
    require_sigma_pre(o)?;
    if !ball.group.same_as(&o.group) {
        return Err(Error::GroupMismatch(ball.group.name().into(), o.group.name().into()));
    }
    let mut out = Vec::new();
    for k in o.maximal_antichain_normal_subgroups()? {
        let hs = halfspace_predicate(o, &k)?;
        let member = members_of(ball, |g| hs.contains(g))?;
        let (probes, parts, outcome) = run_probes(ball, &member, schedule, margin);
        let mut caveats = vec![CAVEAT_GENSET.to_string()];
        if o.group.is_free() {
            caveats.push("antichain subgroup is infinitely generated and handled symbolically".into());
        }
        out.push((
            SigmaVerdict {
                order: o.describe(),
                k: k.describe(),
                outcome,
                schedule: schedule.clone(),
                margin,
                probes,
                caveats,
            },
            member,
            parts,
        ));
    }
    Ok(out)
}

/// Connectivity of the closed half-space of a character, computed directly
/// and through the induced order; both routes must agree.
pub fn classical_sigma_membership(phi: &Character, schedule: &Schedule, opts: &SigmaOptions) -> Result<SigmaVerdict> {
    if phi.is_zero() {
        return Err(Error::ZeroCharacter);
    }
    let ball = opts.ball(&phi.dom, schedule)?;
    classical_sigma_membership_in(phi, &ball, schedule, opts.margin)
}

pub fn classical_sigma_membership_in(
    phi: &Character,
    ball: &CayleyBall,
    schedule: &Schedule,
    margin: usize,
) -> Result<SigmaVerdict> {
    if phi.is_zero() {
        return Err(Error::ZeroCharacter);
    }
    let member = members_of(ball, |g| Ok(phi.eval(g).sign() >= 0))?;
    let (probes, parts, outcome) = run_probes(ball, &member, schedule, margin);
    let o = Order::character(phi.clone());
    let routes = order_route(&o, ball, schedule, margin)?;
    if routes.len() != 1 {
        return Err(Error::Inconclusive(format!(
            "character order has {} maximal antichain subgroups",
            routes.len()
        )));
    }
    let (ov, om, oparts) = &routes[0];
    if *om != member {
        return Err(Error::Inconclusive(
            "half-space of the character differs from the order half-space".into(),
        ));
    }
    if *oparts != parts || ov.outcome != outcome {
        return Err(Error::Inconclusive(
            "character route and order route disagree".into(),
        ));
    }
    Ok(SigmaVerdict {
        order: format!("character {}", phi.describe()),
        k: format!("ker {}", phi.describe()),
        outcome,
        schedule: schedule.clone(),
        margin,
        probes,
        caveats: vec![CAVEAT_GENSET.to_string()],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GroundTruth {
    pub kernel_finitely_generated: bool,
    pub source: String,
    pub kernel_generators: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderTrial {
    pub order: String,
    pub in_relative_sphere: bool,
    pub verdicts: Vec<SigmaVerdict>,
    pub status: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremAReport {
    pub hom: String,
    pub domain: String,
    pub codomain: String,
    pub ground_truth: GroundTruth,
    pub census_bounds: Bounds,
    pub orders: Vec<OrderTrial>,
    pub passing: usize,
    pub failing: usize,
    pub inconclusive: usize,
    /// Kernel finitely generated as predicted by the order side.
    pub predicted_finitely_generated: Option<bool>,
    pub disagreements: usize,
    pub caveats: Vec<String>,
}

/// Ground truth from the table for free domains: a normal subgroup of
/// infinite index in a non-abelian free group is never finitely generated.
fn free_kernel_table(dom_rank: usize, q: &GroupRef) -> bool {
    q.hirsch_length() == Some(0) || dom_rank <= 1
}

/// Compare kernel finite generation of `phi` with connectivity of every
/// census order of the codomain pulled back along `phi`.
pub fn theorem_a_experiment(
    phi: &Hom,
    schedule: &Schedule,
    bounds: Bounds,
    opts: &SigmaOptions,
) -> Result<TheoremAReport> {
    let g = &phi.dom;
    let q = &phi.cod;
    if q.is_free() {
        return Err(Error::Unsupported("the codomain must be nilpotent".into()));
    }
    if !phi.is_onto()? {
        return Err(Error::InvalidHom(format!("{} is not onto", phi.name)));
    }
    let mut caveats = vec![CAVEAT_GENSET.to_string()];
    let (ground_truth, kernel) = if g.is_free() {
        caveats.push("free-group kernel status taken from the ground-truth table".into());
        (
            GroundTruth {
                kernel_finitely_generated: free_kernel_table(g.n_gens(), q),
                source: "table".into(),
                kernel_generators: None,
            },
            None,
        )
    } else {
        let k = phi.kernel()?;
        (
            GroundTruth {
                kernel_finitely_generated: true,
                source: "computed".into(),
                kernel_generators: Some(k.gens.iter().map(|x| g.format(x)).collect()),
            },
            Some(k),
        )
    };
    let c = census(q, bounds)?;
    let pulled: Vec<Order> = c
        .orders()
        .map(|o| Order::pullback(phi, o))
        .collect::<Result<_>>()?;
    let ball = opts.ball(g, schedule)?;
    let trials: Vec<OrderTrial> = pulled
        .par_iter()
        .map(|o| -> Result<OrderTrial> {
            let in_sphere = match &kernel {
                Some(k) => relative_sphere_contains(k, o)?,
                None => {
                    // kernel maps to the identity, so it is an antichain
                    o.is_nontrivial()
                        && o.is_full(3)? == PropVerdict::StructuralYes
                        && o.is_archimedean(10)? == PropVerdict::StructuralYes
                }
            };
            let verdicts = sigma_membership_in(o, &ball, schedule, opts.margin)?;
            let status = if verdicts.iter().all(|v| v.outcome.is_connected()) {
                "pass"
            } else if verdicts.iter().any(|v| v.outcome.is_disconnected()) {
                "fail"
            } else {
                "inconclusive"
            };
            Ok(OrderTrial {
                order: o.describe(),
                in_relative_sphere: in_sphere,
                verdicts,
                status: status.into(),
            })
        })
        .collect::<Result<_>>()?;
    let count = |s: &str| trials.iter().filter(|t| t.status == s).count();
    let (passing, failing, inconclusive) = (count("pass"), count("fail"), count("inconclusive"));
    let predicted = if failing > 0 {
        Some(false)
    } else if inconclusive == 0 {
        Some(true)
    } else {
        None
    };
    let disagreements = usize::from(predicted.is_some_and(|p| p != ground_truth.kernel_finitely_generated));
    Ok(TheoremAReport {
        hom: phi.describe(),
        domain: g.name().into(),
        codomain: q.name().into(),
        ground_truth,
        census_bounds: bounds,
        orders: trials,
        passing,
        failing,
        inconclusive,
        predicted_finitely_generated: predicted,
        disagreements,
        caveats,
    })
}

/// Scale a character by a positive rational.
pub fn rescale(phi: &Character, num: i64, den: i64) -> Result<Character> {
    phi.scale(&AlgNum::from_ratio(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    fn quick() -> Schedule {
        Schedule {
            radii: vec![4, 5],
            slacks: vec![1, 2, 3],
        }
    }

    #[test]
    fn plane_half_spaces_connect() {
        let z2 = Group::zn(2);
        let phi = Character::from_ints(&z2, &[1, 0]).unwrap();
        let v = classical_sigma_membership(&phi, &quick(), &SigmaOptions::new()).unwrap();
        assert!(v.outcome.is_connected());
        let v = classical_sigma_membership(&phi.neg(), &quick(), &SigmaOptions::new()).unwrap();
        assert!(v.outcome.is_connected());
    }

    #[test]
    fn free_half_spaces_split() {
        let f2 = Group::free_rank(2);
        let phi = Character::from_ints(&f2, &[1, 0]).unwrap();
        let v = classical_sigma_membership(&phi, &quick(), &SigmaOptions::new()).unwrap();
        assert!(v.outcome.is_disconnected(), "{:?}", v.outcome);
        for n in 1..=3 {
            assert!(v
                .probes
                .iter()
                .any(|p| p.slack == n && matches!(p.connectivity, Connectivity::Disconnected { .. })));
        }
    }

    #[test]
    fn scaling_does_not_matter() {
        let z2 = Group::zn(2);
        let phi = Character::from_ints(&z2, &[2, -3]).unwrap();
        let base = classical_sigma_membership(&phi, &quick(), &SigmaOptions::new()).unwrap();
        for (a, b) in [(2, 1), (3, 1), (1, 2)] {
            let v = classical_sigma_membership(&rescale(&phi, a, b).unwrap(), &quick(), &SigmaOptions::new())
                .unwrap();
            assert_eq!(v.outcome, base.outcome);
            assert_eq!(v.probes, base.probes);
        }
    }

    #[test]
    fn zero_character_rejected() {
        let z2 = Group::zn(2);
        let phi = Character::from_ints(&z2, &[0, 0]).unwrap();
        assert!(matches!(
            classical_sigma_membership(&phi, &quick(), &SigmaOptions::new()),
            Err(Error::ZeroCharacter)
        ));
    }
}
