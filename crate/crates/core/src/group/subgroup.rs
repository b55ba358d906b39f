use std::sync::OnceLock;

use super::{Element, Group, GroupRef};
use crate::error::{Error, Result};
use crate::lattice::{self, Matrix};

/// Polycyclic generating sequence of a subgroup of a class-two pc group.
///
/// Every element is uniquely `lift_0^x_0 ... lift_{r-1}^x_{r-1} * c^(y * central)`
/// where the lifts have echelon tops `top` and the central lattice
/// `central` is in Hermite form. Lift central parts are reduced modulo the
/// central lattice, which makes the whole sequence canonical.
#[derive(Clone, Debug)]
pub struct Pcs {
    ambient: GroupRef,
    pub top: Matrix,
    pub lifts: Vec<Element>,
    pub central: Matrix,
    payload: Option<Payload>,
}

/// Parallel elements of another group tracked through every operation, so
/// that each pcs element comes with a chosen preimage.
#[derive(Clone, Debug)]
struct Payload {
    group: GroupRef,
    lifts: Vec<Element>,
    central: Vec<Element>,
}

fn product_pow(g: &Group, elems: &[Element], exps: &[i64]) -> Element {
    let mut acc = g.identity();
    for (e, &k) in elems.iter().zip(exps) {
        if k != 0 {
            acc = g.mul(&acc, &g.pow(e, k));
        }
    }
    acc
}

impl Pcs {
    pub fn build(ambient: &GroupRef, gens: &[Element]) -> Result<Pcs> {
        Self::build_inner(ambient, gens, None)
    }

    /// Builds while tracking `payload[k]` as the preimage of `gens[k]`.
    pub fn build_tracked(
        ambient: &GroupRef,
        gens: &[Element],
        payload_group: &GroupRef,
        payload: &[Element],
    ) -> Result<Pcs> {
        Self::build_inner(ambient, gens, Some((payload_group, payload)))
    }

    fn build_inner(
        ambient: &GroupRef,
        gens: &[Element],
        payload: Option<(&GroupRef, &[Element])>,
    ) -> Result<Pcs> {
        let pc = ambient.require_pc()?.clone();
        let (n, m) = (pc.n, pc.m);
        for g in gens {
            ambient.check(g)?;
        }
        let tops: Matrix = gens.iter().map(|g| g.pc()[..n].to_vec()).collect();
        let h = lattice::hermite(&tops, n);
        let r = h.rank;

        let mut lifts: Vec<Element> = (0..r)
            .map(|i| product_pow(ambient, gens, &h.transform[i]))
            .collect();

        // central elements: relations among tops, and pairwise commutators
        let mut cen_rows: Matrix = Vec::new();
        let mut cen_pay: Vec<Element> = Vec::new();
        for i in r..gens.len() {
            let e = product_pow(ambient, gens, &h.transform[i]);
            debug_assert!(e.pc()[..n].iter().all(|&x| x == 0));
            cen_rows.push(e.pc()[n..].to_vec());
            if let Some((pg, pe)) = payload {
                cen_pay.push(product_pow(pg, pe, &h.transform[i]));
            }
        }
        if m > 0 {
            for k in 0..gens.len() {
                for l in k + 1..gens.len() {
                    let c = pc.form(&gens[k].pc()[..n], &gens[l].pc()[..n]);
                    if c.iter().all(|&x| x == 0) {
                        continue;
                    }
                    cen_rows.push(c);
                    if let Some((pg, pe)) = payload {
                        cen_pay.push(pg.commutator(&pe[k], &pe[l]));
                    }
                }
            }
        }
        let hc = lattice::hermite(&cen_rows, m);
        let central: Matrix = hc.rows[..hc.rank].to_vec();
        let central_pay: Vec<Element> = match payload {
            Some((pg, _)) => (0..hc.rank)
                .map(|i| product_pow(pg, &cen_pay, &hc.transform[i]))
                .collect(),
            None => Vec::new(),
        };

        let mut lift_pay: Vec<Element> = match payload {
            Some((pg, pe)) => (0..r).map(|i| product_pow(pg, pe, &h.transform[i])).collect(),
            None => Vec::new(),
        };
        for (i, lift) in lifts.iter_mut().enumerate() {
            let mut v = lift.pc().to_vec();
            let (rest, q) = lattice::reduce_mod(&central, &v[n..]);
            v[n..].copy_from_slice(&rest);
            *lift = Element::Pc(v);
            if let Some((pg, _)) = payload {
                let neg: Vec<i64> = q.iter().map(|x| -x).collect();
                let corr = product_pow(pg, &central_pay, &neg);
                lift_pay[i] = pg.mul(&lift_pay[i], &corr);
            }
        }

        Ok(Pcs {
            ambient: ambient.clone(),
            top: h.rows[..r].to_vec(),
            lifts,
            central,
            payload: payload.map(|(pg, _)| Payload {
                group: pg.clone(),
                lifts: lift_pay,
                central: central_pay,
            }),
        })
    }

    pub fn ambient(&self) -> &GroupRef {
        &self.ambient
    }

    pub fn top_rank(&self) -> usize {
        self.top.len()
    }

    pub fn central_rank(&self) -> usize {
        self.central.len()
    }

    /// Hirsch length of the subgroup.
    pub fn rank(&self) -> usize {
        self.top_rank() + self.central_rank()
    }

    fn n(&self) -> usize {
        self.ambient.pc().unwrap().n
    }

    /// Central basis vectors as elements.
    pub fn central_elements(&self) -> Vec<Element> {
        let n = self.n();
        self.central
            .iter()
            .map(|row| {
                let mut v = vec![0; n];
                v.extend_from_slice(row);
                Element::Pc(v)
            })
            .collect()
    }

    /// Lifts followed by the central basis.
    pub fn elements(&self) -> Vec<Element> {
        let mut out = self.lifts.clone();
        out.extend(self.central_elements());
        out
    }

    /// Pcs coordinates `(x, y)` of `g`, or `None` if `g` is not in the subgroup.
    pub fn coords(&self, g: &Element) -> Option<(Vec<i64>, Vec<i64>)> {
        let n = self.n();
        let v = g.pc();
        let x = lattice::solve_echelon(&self.top, &v[..n])?;
        let h = product_pow(&self.ambient, &self.lifts, &x);
        let res = self.ambient.mul(&self.ambient.inv(&h), g);
        let y = lattice::solve_echelon(&self.central, &res.pc()[n..])?;
        Some((x, y))
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.coords(g).is_some()
    }

    pub fn element_at(&self, x: &[i64], y: &[i64]) -> Element {
        let n = self.n();
        let h = product_pow(&self.ambient, &self.lifts, x);
        let mut c = vec![0; n];
        c.extend(lattice::vec_mat(y, &self.central, self.central_width()));
        self.ambient.mul(&h, &Element::Pc(c))
    }

    fn central_width(&self) -> usize {
        self.ambient.pc().unwrap().m
    }

    /// Tracked preimage of `g`, when the pcs was built with a payload.
    pub fn preimage(&self, g: &Element) -> Option<Element> {
        let p = self.payload.as_ref()?;
        let (x, y) = self.coords(g)?;
        let a = product_pow(&p.group, &p.lifts, &x);
        let b = product_pow(&p.group, &p.central, &y);
        Some(p.group.mul(&a, &b))
    }

    /// Tracked preimages of the central basis.
    pub fn central_preimages(&self) -> Option<&[Element]> {
        self.payload.as_ref().map(|p| p.central.as_slice())
    }

    /// Canonical data identifying the subgroup.
    pub fn key(&self) -> (Matrix, Matrix, Matrix) {
        let n = self.n();
        (
            self.top.clone(),
            self.lifts.iter().map(|l| l.pc()[n..].to_vec()).collect(),
            self.central.clone(),
        )
    }
}

/// Finitely generated subgroup given by generators.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub ambient: GroupRef,
    pub gens: Vec<Element>,
    pcs: OnceLock<Pcs>,
}

impl Subgroup {
    pub fn new(ambient: GroupRef, gens: Vec<Element>) -> Self {
        let gens = gens.into_iter().filter(|g| !ambient.is_identity(g)).collect();
        Subgroup {
            ambient,
            gens,
            pcs: OnceLock::new(),
        }
    }

    pub fn trivial(ambient: &GroupRef) -> Self {
        Self::new(ambient.clone(), Vec::new())
    }

    pub fn whole(ambient: &GroupRef) -> Self {
        Self::new(ambient.clone(), ambient.gens())
    }

    pub fn pcs(&self) -> Result<&Pcs> {
        if let Some(p) = self.pcs.get() {
            return Ok(p);
        }
        let p = Pcs::build(&self.ambient, &self.gens)?;
        Ok(self.pcs.get_or_init(|| p))
    }

    /// Trivial-generator test, valid for every ambient kind.
    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, g: &Element) -> Result<bool> {
        self.ambient.check(g)?;
        if self.ambient.is_identity(g) {
            return Ok(true);
        }
        if self.ambient.is_free() {
            if self.gens.is_empty() {
                return Ok(false);
            }
            return Err(Error::Unsupported(
                "membership in subgroups of free groups".into(),
            ));
        }
        Ok(self.pcs()?.contains(g))
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> Result<bool> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &Subgroup) -> Result<bool> {
        Ok(self.contains_subgroup(other)? && other.contains_subgroup(self)?)
    }

    pub fn is_normal(&self) -> Result<bool> {
        for h in &self.gens {
            for x in self.ambient.gens() {
                if !self.contains(&self.ambient.commutator(h, &x))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Subgroup::new(self.ambient.clone(), gens)
    }

    /// Smallest normal subgroup containing the generators. At class two one
    /// round of commutators with the ambient generators suffices.
    pub fn normal_closure(&self) -> Subgroup {
        let mut gens = self.gens.clone();
        for h in &self.gens {
            for x in self.ambient.gens() {
                gens.push(self.ambient.commutator(h, &x));
            }
        }
        Subgroup::new(self.ambient.clone(), gens)
    }

    /// Generators read off the canonical pcs.
    pub fn canonical(&self) -> Result<Subgroup> {
        Ok(Subgroup::new(self.ambient.clone(), self.pcs()?.elements()))
    }

    pub fn key(&self) -> Result<(Matrix, Matrix, Matrix)> {
        Ok(self.pcs()?.key())
    }

    pub fn hirsch_length(&self) -> Result<usize> {
        Ok(self.pcs()?.rank())
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.gens.iter().map(|g| self.ambient.format(g)).collect();
        format!("<{}>", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc(v: &[i64]) -> Element {
        Element::Pc(v.to_vec())
    }

    #[test]
    fn lattice_membership() {
        let z2 = Group::zn(2);
        let h = Subgroup::new(z2.clone(), vec![pc(&[2, 0]), pc(&[0, 1])]);
        assert!(h.contains(&pc(&[4, 3])).unwrap());
        assert!(!h.contains(&pc(&[1, 0])).unwrap());
        assert!(h.contains(&z2.identity()).unwrap());
    }

    #[test]
    fn heisenberg_membership() {
        let g = Group::heisenberg();
        let h = Subgroup::new(g.clone(), vec![g.gen(1), g.gen(2)]);
        assert!(!h.contains(&g.gen(0)).unwrap());
        assert!(h.is_normal().unwrap());
        // <a, b> is everything, since it contains [a, b]
        let ab = Subgroup::new(g.clone(), vec![g.gen(0), g.gen(1)]);
        assert!(ab.contains(&g.gen(2)).unwrap());
        // <a> is not normal
        let a = Subgroup::new(g.clone(), vec![g.gen(0)]);
        assert!(!a.is_normal().unwrap());
        assert!(!a.contains(&g.gen(2)).unwrap());
        assert!(a.normal_closure().contains(&g.gen(2)).unwrap());
    }

    #[test]
    fn non_normal_subgroup_has_no_central_part() {
        // <a b^2, b^3> in Heisenberg: central part generated by [ab^2, b^3] = c^3
        let g = Group::heisenberg();
        let s = Subgroup::new(g.clone(), vec![pc(&[1, 2, 0]), pc(&[0, 3, 0])]);
        let p = s.pcs().unwrap();
        assert_eq!(p.central, vec![vec![3]]);
        assert!(!s.contains(&g.gen(2)).unwrap());
        assert!(s.contains(&pc(&[0, 0, 3])).unwrap());
    }

    #[test]
    fn tracked_preimages() {
        let g = Group::heisenberg();
        let z = Group::free_rank(2);
        let gens = vec![g.gen(0), g.gen(1)];
        let pay = vec![z.gen(0), z.gen(1)];
        let p = Pcs::build_tracked(&g, &gens, &z, &pay).unwrap();
        let hom = super::super::Hom::new("f", z.clone(), g.clone(), gens.clone()).unwrap();
        for target in [pc(&[0, 0, 1]), pc(&[2, -1, 5]), pc(&[-3, 0, 0])] {
            let pre = p.preimage(&target).unwrap();
            assert_eq!(hom.apply(&pre), target);
        }
    }
}
