use super::{Element, Group, GroupRef, Hom, Pcs, Subgroup};
use crate::error::{Error, Result};
use crate::lattice::{self, Matrix};

/// `G_0 = G`, `G_{i+1} = <[g, h] : g in gens(G), h in gens(G_i)>`, down to
/// the trivial subgroup. Identity commutators and repeats are dropped.
pub fn lower_central_series(g: &GroupRef) -> Result<Vec<Subgroup>> {
    if g.is_free() && g.n_gens() > 1 {
        return Err(Error::Unsupported(
            "lower central series of a non-abelian free group".into(),
        ));
    }
    let mut series = vec![Subgroup::whole(g)];
    let limit = g.hirsch_length().unwrap_or(1) + 1;
    while !series.last().unwrap().is_trivial() {
        if series.len() > limit {
            return Err(Error::Unsupported("class exceeds presentation bound".into()));
        }
        let prev = series.last().unwrap();
        let mut gens: Vec<Element> = Vec::new();
        for x in g.gens() {
            for h in &prev.gens {
                let c = g.commutator(&x, h);
                if !g.is_identity(&c) && !gens.contains(&c) {
                    gens.push(c);
                }
            }
        }
        series.push(Subgroup::new(g.clone(), gens));
    }
    Ok(series)
}

/// Center: top vectors `e` with `[e, a_i] = 1` for every top generator,
/// together with every central generator.
pub fn center(g: &GroupRef) -> Result<Subgroup> {
    if g.is_free() {
        if g.n_gens() == 1 {
            return Ok(Subgroup::whole(g));
        }
        return Err(Error::Unsupported("center of a non-abelian free group".into()));
    }
    let pc = g.require_pc()?;
    let (n, m) = (pc.n, pc.m);
    // row k: the map e_k -> (form(e_k, e_i))_i
    let rows: Matrix = (0..n)
        .map(|k| {
            let mut ek = vec![0; n];
            ek[k] = 1;
            let mut row = Vec::with_capacity(n * m);
            for i in 0..n {
                let mut ei = vec![0; n];
                ei[i] = 1;
                row.extend(pc.form(&ek, &ei));
            }
            row
        })
        .collect();
    let ker = lattice::left_kernel(&rows, n * m);
    let mut gens: Vec<Element> = ker
        .into_iter()
        .map(|mut v| {
            v.extend(std::iter::repeat_n(0, m));
            Element::Pc(v)
        })
        .collect();
    gens.extend((0..m).map(|k| g.gen(n + k)));
    Ok(Subgroup::new(g.clone(), gens))
}

/// Subgroup of elements of `pcs` whose coordinates lie in the integer
/// kernel of `rows` (one row per lift, then one per central basis vector).
pub fn kernel_of_linear(pcs: &Pcs, rows: &Matrix, ncols: usize) -> Subgroup {
    let r = pcs.top_rank();
    let s = pcs.central_rank();
    debug_assert_eq!(rows.len(), r + s);
    let ambient = pcs.ambient().clone();
    let k = lattice::left_kernel(rows, ncols);
    let mut gens: Vec<Element> = k
        .iter()
        .map(|v| pcs.element_at(&v[..r], &v[r..]))
        .collect();
    let kc = lattice::left_kernel(&rows[r..], ncols);
    gens.extend(kc.iter().map(|y| pcs.element_at(&vec![0; r], y)));
    Subgroup::new(ambient, gens)
}

impl Hom {
    /// Finite generating set of the kernel, computed layer by layer.
    pub fn kernel(&self) -> Result<Subgroup> {
        let dom = &self.dom;
        let cod = &self.cod;
        if self.dom.is_free() {
            return Err(Error::Unsupported(
                "kernel of a map out of a free group is not computed as a generating set".into(),
            ));
        }
        let cpc = cod.require_pc()?;
        let (cn, cm) = (cpc.n, cpc.m);
        let whole = Subgroup::whole(dom);
        let pcs = whole.pcs()?;
        let top_rows: Matrix = pcs
            .elements()
            .iter()
            .map(|e| self.apply(e).pc()[..cn].to_vec())
            .collect();
        let m = kernel_of_linear(pcs, &top_rows, cn);
        let mp = m.pcs()?;
        let cen_rows: Matrix = mp
            .elements()
            .iter()
            .map(|e| {
                let img = self.apply(e);
                debug_assert!(img.pc()[..cn].iter().all(|&x| x == 0));
                img.pc()[cn..].to_vec()
            })
            .collect();
        let k = kernel_of_linear(mp, &cen_rows, cm);
        k.canonical()
    }
}

/// `G / P` with projection and section data.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: GroupRef,
    pub proj: Hom,
    pub kernel: Subgroup,
    ambient: GroupRef,
    /// Unimodular change of top basis; the first `sat` rows of `v_inv`
    /// span the saturation of the kernel's top lattice.
    v: Matrix,
    v_inv: Matrix,
    sat: usize,
    /// Change of basis on `Z^(sat + m)` for the abelian layer `M / P`.
    v2: Matrix,
    v2_inv: Matrix,
    killed: usize,
}

impl Quotient {
    fn top_elem(&self, t: &[i64]) -> Element {
        let pc = self.ambient.pc().unwrap();
        let mut v = t.to_vec();
        v.extend(std::iter::repeat_n(0, pc.m));
        Element::Pc(v)
    }

    /// Coordinates in `Z^(sat + m)` of an element whose top lies in the
    /// saturated lattice.
    fn layer_coords(&self, g: &Element) -> Vec<i64> {
        let pc = self.ambient.pc().unwrap();
        let n = pc.n;
        let y = lattice::vec_mat(&g.pc()[..n], &self.v, n);
        debug_assert!(y[self.sat..].iter().all(|&x| x == 0));
        let x = &y[..self.sat];
        let mut acc = self.ambient.identity();
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0 {
                let s = self.top_elem(&self.v_inv[i]);
                acc = self.ambient.mul(&acc, &self.ambient.pow(&s, xi));
            }
        }
        let res = self.ambient.mul(&self.ambient.inv(&acc), g);
        let mut out = x.to_vec();
        out.extend_from_slice(&res.pc()[n..]);
        out
    }

    pub fn project(&self, g: &Element) -> Element {
        self.proj.apply(g)
    }

    fn project_direct(&self, g: &Element) -> Vec<i64> {
        let pc = self.ambient.pc().unwrap();
        let n = pc.n;
        let y = lattice::vec_mat(&g.pc()[..n], &self.v, n);
        let top: Vec<i64> = y[self.sat..].to_vec();
        let mut acc = self.ambient.identity();
        for (j, &yj) in top.iter().enumerate() {
            if yj != 0 {
                let t = self.top_elem(&self.v_inv[self.sat + j]);
                acc = self.ambient.mul(&acc, &self.ambient.pow(&t, yj));
            }
        }
        let rest = self.ambient.mul(&self.ambient.inv(&acc), g);
        let w = lattice::vec_mat(&self.layer_coords(&rest), &self.v2, self.v2.len());
        let mut out = top;
        out.extend_from_slice(&w[self.killed..]);
        out
    }

    /// A preimage of `q` in the ambient group.
    pub fn lift(&self, q: &Element) -> Element {
        let qpc = self.group.pc().unwrap();
        let v = q.pc();
        let n2 = self.v_inv.len() - self.sat;
        let mut acc = self.ambient.identity();
        for j in 0..n2 {
            if v[j] != 0 {
                let t = self.top_elem(&self.v_inv[self.sat + j]);
                acc = self.ambient.mul(&acc, &self.ambient.pow(&t, v[j]));
            }
        }
        debug_assert_eq!(qpc.len(), v.len());
        for k in 0..v.len() - n2 {
            if v[n2 + k] != 0 {
                let z = self.central_lift(k);
                acc = self.ambient.mul(&acc, &self.ambient.pow(&z, v[n2 + k]));
            }
        }
        acc
    }

    fn central_lift(&self, k: usize) -> Element {
        let pc = self.ambient.pc().unwrap();
        let coords = &self.v2_inv[self.killed + k];
        let mut acc = self.ambient.identity();
        for i in 0..self.sat {
            if coords[i] != 0 {
                let s = self.top_elem(&self.v_inv[i]);
                acc = self.ambient.mul(&acc, &self.ambient.pow(&s, coords[i]));
            }
        }
        let mut c = vec![0; pc.n];
        c.extend_from_slice(&coords[self.sat..]);
        self.ambient.mul(&acc, &Element::Pc(c))
    }
}

/// Quotient by a normal subgroup with torsion-free quotient.
pub fn quotient(g: &GroupRef, p: &Subgroup, name: &str) -> Result<Quotient> {
    let pc = g.require_pc()?.clone();
    let (n, m) = (pc.n, pc.m);
    if !p.is_normal()? {
        return Err(Error::NotNormal(p.describe()));
    }
    let pcs = p.pcs()?;
    let sm = lattice::smith(&pcs.top, n);
    let sat = sm.rank();
    let v = sm.v.clone();
    let v_inv = sm.v_inv.clone();
    let top_elem = |t: &[i64]| {
        let mut x = t.to_vec();
        x.extend(std::iter::repeat_n(0, m));
        Element::Pc(x)
    };
    // roots of kernel elements must be central modulo P
    for i in 0..sat {
        let s = top_elem(&v_inv[i]);
        for x in g.gens() {
            if !p.contains(&g.commutator(&s, &x))? {
                return Err(Error::TorsionQuotient(format!(
                    "{} has a root outside the kernel that is not central",
                    p.describe()
                )));
            }
        }
    }
    let mut q = Quotient {
        group: g.clone(),
        proj: Hom::identity(g),
        kernel: p.clone(),
        ambient: g.clone(),
        v,
        v_inv,
        sat,
        v2: Vec::new(),
        v2_inv: Vec::new(),
        killed: 0,
    };
    let width = sat + m;
    let mut rel: Matrix = pcs.elements().iter().map(|e| q.layer_coords(e)).collect();
    // products of the chosen roots differ from coordinate sums by commutators
    for i in 0..sat {
        for j in i + 1..sat {
            let c = pc.form(&q.v_inv[i], &q.v_inv[j]);
            let mut row = vec![0; sat];
            row.extend(c);
            rel.push(row);
        }
    }
    let sm2 = lattice::smith(&rel, width);
    if !sm2.is_torsion_free() {
        return Err(Error::TorsionQuotient(format!(
            "{}: elementary divisors {:?}",
            p.describe(),
            sm2.divisors
        )));
    }
    q.killed = sm2.rank();
    q.v2 = sm2.v;
    q.v2_inv = sm2.v_inv;
    let n2 = n - sat;
    let m2 = width - q.killed;

    // presentation of the quotient
    let mut comms = Vec::new();
    for i in 0..n2 {
        for j in i + 1..n2 {
            let c = pc.form(&q.v_inv[sat + i], &q.v_inv[sat + j]);
            let mut row = vec![0; sat];
            row.extend(c);
            let w = lattice::vec_mat(&row, &q.v2, width);
            let t: Vec<i64> = w[q.killed..].to_vec();
            if t.iter().any(|&x| x != 0) {
                comms.push((i, j, t));
            }
        }
    }
    let mut names: Vec<String> = Vec::new();
    let pick = |cand: Option<String>, fallback: String, names: &mut Vec<String>| {
        let name = match cand {
            Some(c) if !names.contains(&c) => c,
            _ => fallback,
        };
        names.push(name);
    };
    for j in 0..n2 {
        let row = &q.v_inv[sat + j];
        let cand = unit_index(row).map(|k| g.gen_names()[k].clone());
        pick(cand, format!("t{}", j + 1), &mut names);
    }
    for k in 0..m2 {
        let z = q.central_lift(k);
        let cand = unit_index(z.pc()).map(|i| g.gen_names()[i].clone());
        pick(cand, format!("z{}", k + 1), &mut names);
    }
    let qg = if comms.is_empty() {
        Group::abelian_owned(name, names)
    } else {
        let central = names.split_off(n2);
        Group::nilpotent2(name, names, central, &comms)?
    };
    q.group = qg.clone();
    let images = g
        .gens()
        .iter()
        .map(|x| Element::Pc(q.project_direct(x)))
        .collect();
    q.proj = Hom::new(&format!("{name}_proj"), g.clone(), qg, images)?;
    Ok(q)
}

fn unit_index(v: &[i64]) -> Option<usize> {
    let mut idx = None;
    for (i, &x) in v.iter().enumerate() {
        match x {
            0 => {}
            1 if idx.is_none() => idx = Some(i),
            _ => return None,
        }
    }
    idx
}

type Key = (Matrix, Matrix, Matrix);

/// Normal subgroups generated as joins of at most `max_gens` normal closures
/// of elements with exponents in `[-bound, bound]`, deduplicated by canonical
/// pcs and sorted by it. The trivial subgroup is always included.
pub fn normal_subgroups_bounded(g: &GroupRef, bound: i64, max_gens: usize) -> Result<Vec<Subgroup>> {
    use rayon::prelude::*;
    use std::collections::BTreeMap;

    let pc = g.require_pc()?;
    let h = pc.len();
    let mut vectors: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..h {
        vectors = vectors
            .into_iter()
            .flat_map(|v| {
                (-bound..=bound).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    // one representative up to inversion: first nonzero entry positive
    let singles: Vec<Element> = vectors
        .into_iter()
        .filter(|v| v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
        .map(Element::Pc)
        .collect();
    let closures: Vec<(Key, Subgroup)> = singles
        .par_iter()
        .map(|e| -> Result<(Key, Subgroup)> {
            let s = Subgroup::new(g.clone(), vec![e.clone()]).normal_closure().canonical()?;
            Ok((s.key()?, s))
        })
        .collect::<Result<_>>()?;
    let mut all: BTreeMap<Key, Subgroup> = BTreeMap::new();
    let trivial = Subgroup::trivial(g);
    all.insert(trivial.key()?, trivial);
    let mut base: BTreeMap<Key, Subgroup> = BTreeMap::new();
    for (k, s) in closures {
        base.entry(k).or_insert(s);
    }
    let base_list: Vec<Subgroup> = base.values().cloned().collect();
    let mut frontier: Vec<Subgroup> = base_list.clone();
    for (k, s) in base {
        all.insert(k, s);
    }
    for _ in 1..max_gens {
        let joins: Vec<(Key, Subgroup)> = frontier
            .par_iter()
            .flat_map_iter(|s| {
                base_list.iter().filter_map(move |t| {
                    if s.contains_subgroup(t).ok()? {
                        return None;
                    }
                    let j = s.join(t).canonical().ok()?;
                    Some((j.key().ok()?, j))
                })
            })
            .collect();
        frontier.clear();
        for (k, s) in joins {
            if let std::collections::btree_map::Entry::Vacant(e) = all.entry(k) {
                frontier.push(s.clone());
                e.insert(s);
            }
        }
        if frontier.is_empty() {
            break;
        }
    }
    Ok(all.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc(v: &[i64]) -> Element {
        Element::Pc(v.to_vec())
    }

    #[test]
    fn series_of_examples() {
        let h = Group::heisenberg();
        let s = lower_central_series(&h).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s[1].equals(&Subgroup::new(h.clone(), vec![h.gen(2)])).unwrap());
        assert!(s[2].is_trivial());
        let z2 = Group::zn(2);
        assert_eq!(lower_central_series(&z2).unwrap().len(), 2);
        let n3 = Group::free_nilpotent2(3);
        let s = lower_central_series(&n3).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[1].hirsch_length().unwrap(), 3);
    }

    #[test]
    fn centers() {
        let h = Group::heisenberg();
        assert!(center(&h)
            .unwrap()
            .equals(&Subgroup::new(h.clone(), vec![h.gen(2)]))
            .unwrap());
        let n3 = Group::free_nilpotent2(3);
        let z = center(&n3).unwrap();
        let g1 = &lower_central_series(&n3).unwrap()[1];
        assert!(z.equals(g1).unwrap());
        let z3 = Group::zn(3);
        assert!(center(&z3).unwrap().equals(&Subgroup::whole(&z3)).unwrap());
    }

    #[test]
    fn quotients() {
        let h = Group::heisenberg();
        let c = Subgroup::new(h.clone(), vec![h.gen(2)]);
        let q = quotient(&h, &c, "Hab").unwrap();
        assert_eq!(q.group.kind(), super::super::Kind::FreeAbelian);
        assert_eq!(q.project(&pc(&[3, -2, 7])), pc(&[3, -2]));

        let t = quotient(&h, &Subgroup::trivial(&h), "H2").unwrap();
        assert!(t.group.same_as(&h));
        assert_eq!(t.project(&pc(&[1, 2, 3])), pc(&[1, 2, 3]));

        let z2 = Group::zn(2);
        let bad = quotient(&z2, &Subgroup::new(z2.clone(), vec![pc(&[2, 0])]), "q");
        assert!(matches!(bad, Err(Error::TorsionQuotient(_))));

        let a = Subgroup::new(h.clone(), vec![h.gen(0)]);
        assert!(matches!(quotient(&h, &a, "q"), Err(Error::NotNormal(_))));
    }

    #[test]
    fn quotient_by_diagonal() {
        let z2 = Group::zn(2);
        let d = Subgroup::new(z2.clone(), vec![pc(&[1, 1])]);
        let q = quotient(&z2, &d, "q").unwrap();
        assert_eq!(q.group.n_gens(), 1);
        let x = q.project(&pc(&[1, 0]));
        assert_eq!(q.project(&pc(&[0, 1])), q.group.inv(&x));
        assert!(!q.group.is_identity(&x));
        let k = q.proj.kernel().unwrap();
        assert!(k.equals(&d).unwrap());
    }

    #[test]
    fn kernels() {
        let z2 = Group::zn(2);
        let z = Group::zn(1);
        let p = Hom::new("p", z2.clone(), z.clone(), vec![z.gen(0), z.identity()]).unwrap();
        assert!(p
            .kernel()
            .unwrap()
            .equals(&Subgroup::new(z2.clone(), vec![z2.gen(1)]))
            .unwrap());
        let h = Group::heisenberg();
        let f = Hom::new("f", h.clone(), z.clone(), vec![z.gen(0), z.identity(), z.identity()])
            .unwrap();
        let k = f.kernel().unwrap();
        assert!(k
            .equals(&Subgroup::new(h.clone(), vec![h.gen(1), h.gen(2)]))
            .unwrap());
        assert!(k.is_normal().unwrap());
        assert!(Hom::identity(&h).kernel().unwrap().is_trivial());
    }

    #[test]
    fn bounded_normal_subgroups_of_z() {
        let z = Group::zn(1);
        let all = normal_subgroups_bounded(&z, 3, 2).unwrap();
        // trivial, <1>, <2>, <3>
        assert_eq!(all.len(), 4);
    }
}
