//! Desk-scale censuses of full archimedean orders.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::AlgNum;
use crate::group::{center, lower_central_series, normal_subgroups_bounded, quotient, GroupRef, Subgroup};
use crate::lattice::Matrix;
use crate::order::Order;

pub const MAX_HIRSCH: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Exponent range `[-bound, bound]` for candidate generators.
    pub bound: i64,
    /// Largest number of normal generators joined.
    pub max_gens: usize,
}

impl Bounds {
    pub fn new(bound: i64) -> Self {
        Bounds {
            bound,
            max_gens: bound.max(1) as usize,
        }
    }
}

/// Normal subgroups with torsion-free quotient found within `bounds`,
/// sorted by canonical key.
pub fn enumerate_normal_torsionfree_quotients(q: &GroupRef, bounds: Bounds) -> Result<Vec<Subgroup>> {
    check_scope(q)?;
    let mut out = Vec::new();
    for p in normal_subgroups_bounded(q, bounds.bound, bounds.max_gens)? {
        match quotient(q, &p, "Q") {
            Ok(_) => out.push(p),
            Err(Error::TorsionQuotient(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn check_scope(q: &GroupRef) -> Result<()> {
    let h = q
        .hirsch_length()
        .ok_or_else(|| Error::Unsupported("censuses need a polycyclic group".into()))?;
    if h > MAX_HIRSCH {
        return Err(Error::Unsupported(format!(
            "Hirsch length {h} exceeds the census limit {MAX_HIRSCH}"
        )));
    }
    Ok(())
}

/// Injective characters on the quotient center, up to positive scaling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IotaFamily {
    /// Rank one: exactly two classes, given by the sign.
    Sign { sign: i32 },
    /// Rank `r >= 2`: an open dense subset of an `(r-1)`-sphere of directions.
    Projective { dimension: usize },
}

#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub p: Subgroup,
    pub center_rank: usize,
    pub family: IotaFamily,
    pub sample_iota: Vec<AlgNum>,
    /// `P` contains the commutator subgroup.
    pub from_abelianization: bool,
    pub order: Order,
}

#[derive(Clone, Debug)]
pub struct OrderCensus {
    pub group: GroupRef,
    pub entries: Vec<CensusEntry>,
    pub bounds: Bounds,
    pub completeness: String,
}

/// Sample injective values `1, sqrt 2, sqrt 3, sqrt 5, ...`.
pub fn sample_iota(rank: usize) -> Vec<AlgNum> {
    let mut out = vec![AlgNum::one()];
    let mut k = 2u64;
    while out.len() < rank {
        if (2..k).take_while(|d| d * d <= k).all(|d| !k.is_multiple_of(d)) {
            out.push(AlgNum::sqrt(k));
        }
        k += 1;
    }
    out.truncate(rank);
    out
}

pub fn census(q: &GroupRef, bounds: Bounds) -> Result<OrderCensus> {
    let ps = enumerate_normal_torsionfree_quotients(q, bounds)?;
    let derived = lower_central_series(q)?.get(1).cloned().unwrap_or_else(|| Subgroup::trivial(q));
    let mut entries = Vec::new();
    for p in ps {
        let quo = quotient(q, &p, &format!("{}_mod", q.name()))?;
        let r = center(&quo.group)?.canonical()?.pcs()?.rank();
        if r == 0 {
            continue;
        }
        let from_ab = p.contains_subgroup(&derived)?;
        let base = sample_iota(r);
        let variants: Vec<(IotaFamily, Vec<AlgNum>)> = if r == 1 {
            vec![
                (IotaFamily::Sign { sign: 1 }, vec![AlgNum::one()]),
                (IotaFamily::Sign { sign: -1 }, vec![AlgNum::from_int(-1)]),
            ]
        } else {
            vec![(IotaFamily::Projective { dimension: r - 1 }, base)]
        };
        for (family, iota) in variants {
            let idx = entries.len();
            let order = Order::classification(q, &p, iota.clone())?.named(&format!("census_{idx}"));
            entries.push(CensusEntry {
                p: p.clone(),
                center_rank: r,
                family,
                sample_iota: iota,
                from_abelianization: from_ab,
                order,
            });
        }
    }
    Ok(OrderCensus {
        group: q.clone(),
        entries,
        bounds,
        completeness: format!(
            "complete among normal subgroups generated by at most {} normal generators with exponents in [-{}, {}]; each entry with center rank r >= 2 stands for all injective characters up to positive scaling",
            bounds.max_gens, bounds.bound, bounds.bound
        ),
    })
}

#[derive(Serialize)]
pub struct EntryRecord {
    pub index: usize,
    pub kernel: String,
    pub kernel_hermite: HermiteRecord,
    pub center_rank: usize,
    pub family: IotaFamily,
    pub sample_iota: Vec<AlgNum>,
    pub from_abelianization: bool,
}

#[derive(Serialize)]
pub struct HermiteRecord {
    pub top: Matrix,
    pub lift_central: Matrix,
    pub central: Matrix,
}

#[derive(Serialize)]
pub struct CensusRecord {
    pub group: String,
    pub bounds: Bounds,
    pub completeness: String,
    pub nontrivial_orders: usize,
    pub entries: Vec<EntryRecord>,
}

impl OrderCensus {
    pub fn record(&self) -> Result<CensusRecord> {
        let mut entries = Vec::new();
        for (index, e) in self.entries.iter().enumerate() {
            let (top, lift_central, central) = e.p.key()?;
            entries.push(EntryRecord {
                index,
                kernel: e.p.describe(),
                kernel_hermite: HermiteRecord {
                    top,
                    lift_central,
                    central,
                },
                center_rank: e.center_rank,
                family: e.family.clone(),
                sample_iota: e.sample_iota.clone(),
                from_abelianization: e.from_abelianization,
            });
        }
        Ok(CensusRecord {
            group: self.group.name().into(),
            bounds: self.bounds,
            completeness: self.completeness.clone(),
            nontrivial_orders: self.entries.len(),
            entries,
        })
    }

    pub fn orders(&self) -> impl Iterator<Item = &Order> {
        self.entries.iter().map(|e| &e.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Element, Group};

    #[test]
    fn integers() {
        let z = Group::zn(1);
        let ps = enumerate_normal_torsionfree_quotients(&z, Bounds::new(3)).unwrap();
        assert_eq!(ps.len(), 2);
        let c = census(&z, Bounds::new(3)).unwrap();
        assert_eq!(c.entries.len(), 2);
        let one = Element::Pc(vec![1]);
        assert!(c.entries[0].order.is_positive(&one).unwrap());
        assert!(!c.entries[1].order.is_positive(&one).unwrap());
    }

    #[test]
    fn heisenberg_kernels_contain_center() {
        let h = Group::heisenberg();
        let c = census(&h, Bounds::new(2)).unwrap();
        let zc = Element::Pc(vec![0, 0, 1]);
        let trivial: Vec<_> = c.entries.iter().filter(|e| e.p.is_trivial()).collect();
        assert_eq!(trivial.len(), 2);
        for e in &c.entries {
            if !e.p.is_trivial() {
                assert!(e.p.contains(&zc).unwrap());
                assert!(e.from_abelianization);
            }
        }
    }

    #[test]
    fn samples_are_injective() {
        let s = sample_iota(4);
        assert_eq!(s.len(), 4);
        assert_eq!(s[3], AlgNum::sqrt(5));
        let (basis, rows) = AlgNum::coefficient_matrix(&s);
        assert!(crate::lattice::left_kernel(&rows, basis.len()).is_empty());
    }

    #[test]
    fn rejects_large_groups() {
        let g = Group::free_nilpotent2(3);
        assert!(matches!(census(&g, Bounds::new(1)), Err(Error::Unsupported(_))));
    }
}
