use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;

use super::ball::CayleyBall;

pub const DEFAULT_MARGIN: usize = 1;

/// Components of the core members, labelled by their smallest vertex index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub core: Vec<usize>,
    pub label: Vec<usize>,
}

impl Partition {
    pub fn components(&self) -> usize {
        let mut l = self.label.clone();
        l.sort_unstable();
        l.dedup();
        l.len()
    }

    /// First core member and the first core member outside its component.
    pub fn split_pair(&self) -> Option<(usize, usize)> {
        let first = *self.core.first()?;
        let l0 = self.label[0];
        let j = self.label.iter().position(|&l| l != l0)?;
        Some((first, self.core[j]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Connectivity {
    Connected,
    /// Vertex indices of two core members in different components.
    Disconnected { pair: (usize, usize) },
    Inconclusive { reason: String },
}

/// Components of the members within `radius` under `slack`-paths, i.e.
/// paths whose every `slack` consecutive vertices meet the member set,
/// running through the ball of radius `radius + margin`.
pub fn partition(ball: &CayleyBall, member: &[bool], radius: usize, slack: usize, margin: usize) -> Partition {
    assert!(slack >= 1);
    let region = ball.count_within(radius + margin);
    let core_n = ball.count_within(radius);
    let links: Vec<Vec<(usize, usize)>> = (0..region)
        .into_par_iter()
        .filter(|&v| member[v])
        .map(|v| reach(ball, member, region, v, slack))
        .collect();
    let mut uf = UnionFind::<usize>::new(region);
    for list in links {
        for (a, b) in list {
            uf.union(a, b);
        }
    }
    let core: Vec<usize> = (0..core_n).filter(|&v| member[v]).collect();
    let mut first_of_root = std::collections::HashMap::new();
    let label = core
        .iter()
        .map(|&v| *first_of_root.entry(uf.find(v)).or_insert(v))
        .collect();
    Partition { core, label }
}

/// Members reachable from `v` with at most `slack - 1` consecutive
/// non-members in between.
fn reach(ball: &CayleyBall, member: &[bool], region: usize, v: usize, slack: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut frontier = vec![v];
    let mut seen = vec![v];
    for depth in 1..=slack {
        let mut next = Vec::new();
        for &x in &frontier {
            for y in ball.neighbors(x) {
                if y >= region || seen.contains(&y) {
                    continue;
                }
                seen.push(y);
                if member[y] {
                    if y > v {
                        out.push((v, y));
                    }
                } else if depth < slack {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Connected when all core members share a component; a split is only
/// reported when it persists with the margin grown by two.
pub fn npath_connected(ball: &CayleyBall, member: &[bool], radius: usize, slack: usize, margin: usize) -> Connectivity {
    let p = partition(ball, member, radius, slack, margin);
    certify(ball, member, radius, slack, margin, &p)
}

/// Connectivity verdict for a partition already computed at `margin`.
pub fn certify(
    ball: &CayleyBall,
    member: &[bool],
    radius: usize,
    slack: usize,
    margin: usize,
    p: &Partition,
) -> Connectivity {
    let Some(pair) = p.split_pair() else {
        return Connectivity::Connected;
    };
    if radius + margin + 2 > ball.radius {
        return Connectivity::Inconclusive {
            reason: format!(
                "ball radius {} below the certification radius {}",
                ball.radius,
                radius + margin + 2
            ),
        };
    }
    let wider = partition(ball, member, radius, slack, margin + 2);
    if wider == *p {
        Connectivity::Disconnected { pair }
    } else {
        Connectivity::Inconclusive {
            reason: format!(
                "components at margin {margin} merge at margin {}",
                margin + 2
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    #[test]
    fn everything_is_connected() {
        let f2 = Group::free_rank(2);
        let b = CayleyBall::build(&f2, &f2.gens(), 6, 100_000).unwrap();
        let all = vec![true; b.len()];
        for n in 1..=3 {
            assert_eq!(npath_connected(&b, &all, 3, n, 1), Connectivity::Connected);
        }
    }

    #[test]
    fn free_half_splits_until_slack_covers_the_gap() {
        let f2 = Group::free_rank(2);
        let b = CayleyBall::build(&f2, &f2.gens(), 8, 1_000_000).unwrap();
        let mem: Vec<bool> = b.vertices.iter().map(|v| f2.abelianize(v)[0] >= 0).collect();
        for n in 1..=4 {
            assert!(matches!(
                npath_connected(&b, &mem, 5, n, 1),
                Connectivity::Disconnected { .. }
            ));
        }
    }

    #[test]
    fn even_integers_need_slack_two() {
        let z = Group::zn(1);
        let b = CayleyBall::build(&z, &z.gens(), 12, 100).unwrap();
        let mem: Vec<bool> = b.vertices.iter().map(|v| v.pc()[0] % 2 == 0).collect();
        assert!(matches!(npath_connected(&b, &mem, 8, 1, 1), Connectivity::Disconnected { .. }));
        assert_eq!(npath_connected(&b, &mem, 8, 2, 1), Connectivity::Connected);
    }
}
