use serde::Serialize;

use super::{Character, Order, OrderKind};
use crate::error::{Error, Result};
use crate::field::AlgNum;
use crate::group::{center, normal_subgroups_bounded, Element, Hom, Pcs, Subgroup};
use crate::lattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub value: bool,
    pub method: Method,
}

impl Verdict {
    fn exact(value: bool) -> Self {
        Verdict {
            value,
            method: Method::Exact,
        }
    }
}

/// Three-valued answer for properties quantifying over infinite sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropVerdict {
    StructuralYes,
    /// A counterexample; `exact` is false when it rests on a bounded check.
    WitnessNo {
        witness: Vec<Element>,
        exact: bool,
        note: String,
    },
    Undetermined(String),
}

pub type ArchVerdict = PropVerdict;

impl PropVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, PropVerdict::StructuralYes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, PropVerdict::WitnessNo { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            PropVerdict::StructuralYes => "yes_structural",
            PropVerdict::WitnessNo { .. } => "no_with_witness",
            PropVerdict::Undetermined(_) => "undetermined",
        }
    }
}

/// A normal subgroup, either by generators or symbolically.
#[derive(Clone, Debug)]
pub enum NormalSub {
    Generated(Subgroup),
    CharacterKernel(Character),
    Preimage { hom: Hom, target: Box<NormalSub> },
}

impl NormalSub {
    pub fn contains(&self, g: &Element) -> Result<bool> {
        match self {
            NormalSub::Generated(s) => s.contains(g),
            NormalSub::CharacterKernel(c) => Ok(c.vanishes_at(g)),
            NormalSub::Preimage { hom, target } => target.contains(&hom.apply(g)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            NormalSub::Generated(s) => s.describe(),
            NormalSub::CharacterKernel(c) => format!("ker {}", c.describe()),
            NormalSub::Preimage { hom, target } => {
                format!("preimage under {} of {}", hom.name, target.describe())
            }
        }
    }

    /// Generators, when known explicitly.
    pub fn generators(&self) -> Option<&[Element]> {
        match self {
            NormalSub::Generated(s) => Some(&s.gens),
            _ => None,
        }
    }

    /// Inclusion test; symbolic subgroups only compare structurally.
    pub fn is_contained_in(&self, other: &NormalSub) -> Result<bool> {
        match self {
            NormalSub::Generated(s) => {
                for g in &s.gens {
                    if !other.contains(g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            NormalSub::CharacterKernel(c) => match other {
                NormalSub::CharacterKernel(d) => Ok(c.equivalent(d) || c.equivalent(&d.neg())),
                NormalSub::Preimage { hom, target } => match target.as_ref() {
                    NormalSub::Generated(t) if t.is_trivial() => {
                        // ker(d o hom) with d injective on the image is ker hom
                        let img = hom.cod.clone();
                        Ok(img.n_gens() == 1 && is_multiple_of_hom(c, hom))
                    }
                    NormalSub::CharacterKernel(d) => {
                        let pulled = compose_character(d, hom)?;
                        Ok(c.equivalent(&pulled) || c.equivalent(&pulled.neg()))
                    }
                    _ => Ok(false),
                },
                NormalSub::Generated(_) => Ok(false),
            },
            NormalSub::Preimage { hom, target } => match other {
                NormalSub::Preimage { hom: h2, target: t2 } => Ok(hom.images == h2.images
                    && hom.cod.same_as(&h2.cod)
                    && target.is_contained_in(t2)?),
                _ => Ok(false),
            },
        }
    }
}

fn is_multiple_of_hom(c: &Character, hom: &Hom) -> bool {
    // hom to a cyclic group: kernel of c equals kernel of hom when c is a
    // nonzero multiple of the exponent map
    let exps: Vec<AlgNum> = hom
        .images
        .iter()
        .map(|x| AlgNum::from_int(hom.cod.abelianize(x)[0]))
        .collect();
    AlgNum::positively_proportional(&c.values, &exps)
        || AlgNum::positively_proportional(&c.values, &exps.iter().map(|v| -v).collect::<Vec<_>>())
}

pub(crate) fn compose_character(c: &Character, hom: &Hom) -> Result<Character> {
    Character::new(&hom.dom, hom.images.iter().map(|x| c.eval(x)).collect())
}

/// Membership predicate for `K_>= = {g : g >= k for some k in K}`.
#[derive(Clone, Debug)]
pub struct HalfSpace {
    pub order: Order,
    pub k: NormalSub,
}

impl HalfSpace {
    pub fn contains(&self, g: &Element) -> Result<bool> {
        Ok(self.k.contains(g)? || self.order.is_positive(g)?)
    }
}

/// Half-space of an antichain `K` contained in the subgroup along which the
/// order is invariant; there `K_>=` is `K` together with the positive cone.
pub fn halfspace_predicate(o: &Order, k: &NormalSub) -> Result<HalfSpace> {
    if let NormalSub::Generated(s) = k {
        let v = o.is_antichain(s)?;
        if !v.value {
            return Err(Error::NotAntichain(s.describe()));
        }
    }
    let inv = o.invariance().ok_or_else(|| {
        Error::Unsupported(format!("half-spaces of {} orders", o.kind_name()))
    })?;
    if !k.is_contained_in(&inv)? {
        return Err(Error::Unsupported(format!(
            "{} is not inside the invariance subgroup {}",
            k.describe(),
            inv.describe()
        )));
    }
    Ok(HalfSpace {
        order: o.clone(),
        k: k.clone(),
    })
}

impl Order {
    /// Whether `H` meets the positive cone nowhere.
    pub fn is_antichain(&self, h: &Subgroup) -> Result<Verdict> {
        if h.is_trivial() {
            return Ok(Verdict::exact(true));
        }
        match &self.kind {
            OrderKind::Trivial => Ok(Verdict::exact(true)),
            OrderKind::Character(c) => Ok(Verdict::exact(h.gens.iter().all(|g| c.vanishes_at(g)))),
            OrderKind::Pullback { hom, inner } => {
                let img = Subgroup::new(hom.cod.clone(), h.gens.iter().map(|g| hom.apply(g)).collect());
                inner.is_antichain(&img)
            }
            OrderKind::Submonoid(_) => Ok(Verdict::exact(false)),
            OrderKind::Classification(c) => {
                let qg = &c.quotient.group;
                let img = Subgroup::new(
                    qg.clone(),
                    h.gens.iter().map(|g| c.quotient.project(g)).collect(),
                );
                Ok(Verdict::exact(meets_center_trivially(&img)?))
            }
            _ => {
                let sample = h.ambient.ball_elements(&h.gens, 4);
                for g in &sample {
                    if self.is_positive(g)? {
                        return Ok(Verdict::exact(false));
                    }
                }
                Ok(Verdict {
                    value: true,
                    method: Method::Sampled,
                })
            }
        }
    }

    /// Maximal antichain normal subgroups, where they are determined.
    pub fn maximal_antichain_normal_subgroups(&self) -> Result<Vec<NormalSub>> {
        match &self.kind {
            OrderKind::Trivial => Ok(vec![NormalSub::Generated(Subgroup::whole(&self.group))]),
            OrderKind::Character(c) => {
                if self.group.is_free() {
                    Ok(vec![NormalSub::CharacterKernel(c.clone())])
                } else {
                    Ok(vec![NormalSub::Generated(c.kernel()?)])
                }
            }
            OrderKind::Classification(c) => Ok(vec![NormalSub::Generated(c.p.clone())]),
            OrderKind::Submonoid(_) => Ok(vec![NormalSub::Generated(Subgroup::trivial(&self.group))]),
            OrderKind::Pullback { hom, inner } => {
                if !hom.cod.is_free() && !hom.is_onto()? {
                    return Err(Error::Unsupported(format!(
                        "{} is not onto, so antichains do not pull back to maximal ones",
                        hom.name
                    )));
                }
                let inner_max = inner.maximal_antichain_normal_subgroups()?;
                inner_max.into_iter().map(|k| preimage(hom, k)).collect()
            }
            OrderKind::Lexicographic(l) => {
                if l.sub.is_nontrivial() {
                    Err(Error::Unsupported(
                        "maximal antichain subgroups of a lexicographic order with nontrivial sub-order"
                            .into(),
                    ))
                } else {
                    let inner_max = l.quot.maximal_antichain_normal_subgroups()?;
                    inner_max.into_iter().map(|k| preimage(&l.proj, k)).collect()
                }
            }
            OrderKind::Pushforward(_) => Err(Error::Unsupported(
                "maximal antichain subgroups of a pushforward order".into(),
            )),
        }
    }

    pub fn is_archimedean(&self, bound: i64) -> Result<ArchVerdict> {
        match &self.kind {
            OrderKind::Trivial
            | OrderKind::Character(_)
            | OrderKind::Classification(_)
            | OrderKind::Submonoid(_) => return Ok(PropVerdict::StructuralYes),
            OrderKind::Pullback { inner, .. } => {
                if inner.is_archimedean(bound)?.is_yes() {
                    return Ok(PropVerdict::StructuralYes);
                }
            }
            OrderKind::Lexicographic(l) => {
                if let Some((g, h)) = lexicographic_witness(self, l)? {
                    return Ok(PropVerdict::WitnessNo {
                        witness: vec![g, h],
                        exact: true,
                        note: "kernel-positive element below a quotient-positive one".into(),
                    });
                }
            }
            _ => {}
        }
        self.infinitesimal_search(2, bound)
    }

    /// Bounded search for `g > 1` and `h` with `g^i < h` for `|i| <= bound`.
    pub fn infinitesimal_search(&self, radius: usize, bound: i64) -> Result<ArchVerdict> {
        let grp = &self.group;
        let ball = grp.ball_elements(&grp.gens(), radius);
        for g in &ball {
            if !self.is_positive(g)? {
                continue;
            }
            for h in &ball {
                let mut all = true;
                for i in -bound..=bound {
                    if self.compare(&grp.pow(g, i), h)? != super::Comparison::LessThan {
                        all = false;
                        break;
                    }
                }
                if all {
                    return Ok(PropVerdict::WitnessNo {
                        witness: vec![g.clone(), h.clone()],
                        exact: false,
                        note: format!("g^i < h checked for |i| <= {bound}"),
                    });
                }
            }
        }
        Ok(PropVerdict::Undetermined(format!(
            "no infinitesimal found in radius {radius} with |i| <= {bound}"
        )))
    }

    pub fn is_primitive(&self, bound: i64) -> Result<PropVerdict> {
        if self.primitive_structural() {
            return Ok(PropVerdict::StructuralYes);
        }
        let grp = &self.group;
        let ball = grp.ball_elements(&grp.gens(), 2);
        for g in &ball {
            for h in &ball {
                if self.compare(g, h)? == super::Comparison::LessThan {
                    continue;
                }
                for n in 2..=bound.max(2) {
                    let gn = grp.pow(g, n);
                    let hn = grp.pow(h, n);
                    if self.compare(&gn, &hn)? == super::Comparison::LessThan {
                        return Ok(PropVerdict::WitnessNo {
                            witness: vec![g.clone(), h.clone()],
                            exact: true,
                            note: format!("g^{n} < h^{n} but not g < h"),
                        });
                    }
                }
            }
        }
        Ok(PropVerdict::Undetermined(format!(
            "no counterexample in radius 2 with n <= {bound}"
        )))
    }

    fn primitive_structural(&self) -> bool {
        match &self.kind {
            OrderKind::Trivial | OrderKind::Character(_) | OrderKind::Classification(_) => true,
            OrderKind::Pullback { inner, .. } => inner.primitive_structural(),
            OrderKind::Lexicographic(l) => {
                self.group.is_abelian() && l.sub.primitive_structural() && l.quot.primitive_structural()
            }
            _ => false,
        }
    }

    fn full_structural(&self) -> Result<bool> {
        Ok(match &self.kind {
            OrderKind::Trivial | OrderKind::Character(_) | OrderKind::Classification(_) => true,
            OrderKind::Pullback { hom, inner } => {
                (hom.cod.is_free() || hom.is_onto()?) && inner.full_structural()?
            }
            _ => false,
        })
    }

    /// Primitive and factorizing through every antichain normal subgroup.
    pub fn is_full(&self, bound: i64) -> Result<PropVerdict> {
        if self.full_structural()? {
            return Ok(PropVerdict::StructuralYes);
        }
        let prim = self.is_primitive(bound)?;
        if prim.is_no() {
            return Ok(prim);
        }
        let grp = &self.group;
        if grp.is_free() {
            return Ok(PropVerdict::Undetermined(
                "factorizing check needs normal subgroup enumeration".into(),
            ));
        }
        let sample = grp.ball_elements(&grp.gens(), 3);
        for n in normal_subgroups_bounded(grp, bound.min(3), 2)? {
            if !self.is_antichain(&n)?.value {
                continue;
            }
            for g in &sample {
                let pg = self.is_positive(g)?;
                for k in &n.gens {
                    if self.is_positive(&grp.mul(g, k))? != pg {
                        return Ok(PropVerdict::WitnessNo {
                            witness: vec![g.clone(), k.clone()],
                            exact: true,
                            note: format!(
                                "positivity differs on a coset of the antichain {}",
                                n.describe()
                            ),
                        });
                    }
                }
            }
        }
        Ok(PropVerdict::Undetermined(format!(
            "factorizing on sampled antichain normal subgroups with exponents in [-{0}, {0}]",
            bound.min(3)
        )))
    }

    /// Character inducing a full archimedean order on an abelian group,
    /// normalized so the first nonzero value is `+1` or `-1`.
    pub fn extract_character(&self) -> Result<Character> {
        if !self.group.is_abelian() {
            return Err(Error::Unsupported("characters are extracted on abelian groups".into()));
        }
        let c = match &self.kind {
            OrderKind::Trivial => {
                return Err(Error::Unsupported("the trivial order has no inducing character".into()))
            }
            OrderKind::Character(c) => c.clone(),
            OrderKind::Classification(c) => {
                let vals = self
                    .group
                    .gens()
                    .iter()
                    .map(|g| {
                        let x = c.center_coords(g).expect("abelian quotient is central");
                        x.iter()
                            .zip(&c.iota)
                            .fold(AlgNum::zero(), |acc, (xi, v)| &acc + &v.scale_int(*xi))
                    })
                    .collect();
                Character::new(&self.group, vals)?
            }
            OrderKind::Pullback { hom, inner } => {
                let d = inner.extract_character()?;
                compose_character(&d, hom)?
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "character extraction for {} orders",
                    self.kind_name()
                )))
            }
        };
        c.canonical()
    }
}

fn preimage(hom: &Hom, k: NormalSub) -> Result<NormalSub> {
    if hom.dom.is_free() {
        return Ok(NormalSub::Preimage {
            hom: hom.clone(),
            target: Box::new(k),
        });
    }
    match k {
        NormalSub::CharacterKernel(c) => {
            let pulled = compose_character(&c, hom)?;
            Ok(NormalSub::Generated(pulled.kernel()?))
        }
        NormalSub::Generated(t) => {
            let mut gens = hom.kernel()?.gens;
            let pcs = Pcs::build_tracked(&hom.cod, &hom.images, &hom.dom, &hom.dom.gens())?;
            for x in &t.gens {
                let pre = pcs.preimage(x).ok_or_else(|| {
                    Error::Unsupported(format!("{} is outside the image", hom.cod.format(x)))
                })?;
                gens.push(pre);
            }
            Ok(NormalSub::Generated(Subgroup::new(hom.dom.clone(), gens).canonical()?))
        }
        NormalSub::Preimage { .. } => Ok(NormalSub::Preimage {
            hom: hom.clone(),
            target: Box::new(k),
        }),
    }
}

/// `S` meets the center trivially: no central lattice and no nonzero top
/// combination that is central.
fn meets_center_trivially(s: &Subgroup) -> Result<bool> {
    let g = &s.ambient;
    let pc = g.require_pc()?;
    let pcs = s.pcs()?;
    if pcs.central_rank() > 0 {
        return Ok(false);
    }
    let r = pcs.top_rank();
    if r == 0 {
        return Ok(true);
    }
    if pc.m == 0 {
        return Ok(false);
    }
    let (n, m) = (pc.n, pc.m);
    let rows: Vec<Vec<i64>> = pcs
        .top
        .iter()
        .map(|t| {
            let mut row = Vec::with_capacity(n * m);
            for i in 0..n {
                let mut ei = vec![0; n];
                ei[i] = 1;
                row.extend(pc.form(t, &ei));
            }
            row
        })
        .collect();
    Ok(lattice::left_kernel(&rows, n * m).is_empty())
}

fn lexicographic_witness(o: &Order, l: &super::Lexicographic) -> Result<Option<(Element, Element)>> {
    let h_grp = &l.sub.group;
    let g_grp = &o.group;
    let mut g = None;
    for x in h_grp.symmetric_gens() {
        if l.sub.is_positive(&x)? {
            g = Some(l.incl.apply(&x));
            break;
        }
    }
    let mut h = None;
    for y in g_grp.symmetric_gens() {
        if l.quot.is_positive(&l.proj.apply(&y))? {
            h = Some(y);
            break;
        }
    }
    Ok(match (g, h) {
        (Some(g), Some(h)) if !g_grp.is_identity(&g) => Some((g, h)),
        _ => None,
    })
}

/// Orders `o` with `N` an antichain, `o` nontrivial, full and archimedean.
pub fn relative_sphere_contains(n: &Subgroup, o: &Order) -> Result<bool> {
    if !o.is_nontrivial() {
        return Ok(false);
    }
    let full = o.is_full(3)?;
    let arch = o.is_archimedean(10)?;
    match (&full, &arch) {
        (PropVerdict::WitnessNo { .. }, _) | (_, PropVerdict::WitnessNo { .. }) => return Ok(false),
        (PropVerdict::StructuralYes, PropVerdict::StructuralYes) => {}
        _ => {
            return Err(Error::Inconclusive(format!(
                "full: {}, archimedean: {}",
                full.label(),
                arch.label()
            )))
        }
    }
    let v = o.is_antichain(n)?;
    if v.method != Method::Exact {
        return Err(Error::Inconclusive("antichain status only sampled".into()));
    }
    Ok(v.value)
}

/// Antichain normal subgroups found by bounded enumeration.
pub fn enumerate_normal_subgroups(o: &Order, bound: i64, max_gens: usize) -> Result<Vec<Subgroup>> {
    let mut out = Vec::new();
    for n in normal_subgroups_bounded(&o.group, bound, max_gens)? {
        if o.is_antichain(&n)?.value {
            out.push(n);
        }
    }
    let _ = center;
    Ok(out)
}
