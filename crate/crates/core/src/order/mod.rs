//! Bi-invariant partial orders as positive-cone evaluators.

mod construct;
mod props;

pub use props::{
    enumerate_normal_subgroups, halfspace_predicate, relative_sphere_contains, ArchVerdict, HalfSpace,
    Method, NormalSub, PropVerdict, Verdict,
};

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{AlgNum, IntegerForm};
use crate::group::{Element, GroupRef, Hom, Pcs, Quotient, Subgroup};

/// Homomorphism to the additive reals, one value per generator.
#[derive(Clone, Debug)]
pub struct Character {
    pub dom: GroupRef,
    pub values: Vec<AlgNum>,
    form: IntegerForm,
}

impl Character {
    pub fn new(dom: &GroupRef, values: Vec<AlgNum>) -> Result<Self> {
        if values.len() != dom.n_gens() {
            return Err(Error::InvalidHom(format!(
                "character on {} needs {} values, got {}",
                dom.name(),
                dom.n_gens(),
                values.len()
            )));
        }
        if let Some(pc) = dom.pc() {
            for i in 0..pc.n {
                for j in i + 1..pc.n {
                    let mut acc = AlgNum::zero();
                    for (k, &t) in pc.comm(i, j).iter().enumerate() {
                        acc = &acc + &values[pc.n + k].scale_int(t);
                    }
                    if !acc.is_zero() {
                        return Err(Error::InvalidHom(format!(
                            "character does not vanish on [{}, {}]",
                            dom.gen_names()[i],
                            dom.gen_names()[j]
                        )));
                    }
                }
            }
        }
        let form = IntegerForm::new(&values);
        Ok(Character {
            dom: dom.clone(),
            values,
            form,
        })
    }

    pub fn from_ints(dom: &GroupRef, values: &[i64]) -> Result<Self> {
        Self::new(dom, values.iter().map(|&v| AlgNum::from_int(v)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn eval(&self, g: &Element) -> AlgNum {
        let v = self.dom.abelianize(g);
        let mut acc = AlgNum::zero();
        for (x, val) in v.iter().zip(&self.values) {
            if *x != 0 {
                acc = &acc + &val.scale_int(*x);
            }
        }
        acc
    }

    pub fn sign(&self, g: &Element) -> i32 {
        self.form.sign(&self.dom.abelianize(g))
    }

    pub fn vanishes_at(&self, g: &Element) -> bool {
        self.form.is_zero_at(&self.dom.abelianize(g))
    }

    pub fn scale(&self, k: &AlgNum) -> Result<Self> {
        Self::new(&self.dom, self.values.iter().map(|v| v * k).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.dom, self.values.iter().map(|v| -v).collect()).unwrap()
    }

    /// Positive rescaling with first nonzero value equal to `+1` or `-1`.
    pub fn canonical(&self) -> Result<Self> {
        let first = self
            .values
            .iter()
            .find(|v| !v.is_zero())
            .ok_or(Error::ZeroCharacter)?;
        let abs = if first.sign() < 0 { -first } else { first.clone() };
        let inv = abs.inv().unwrap();
        self.scale(&inv)
    }

    /// Same half-space: `other = lambda * self` with `lambda > 0`.
    pub fn equivalent(&self, other: &Character) -> bool {
        AlgNum::positively_proportional(&self.values, &other.values)
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .dom
            .gen_names()
            .iter()
            .zip(&self.values)
            .map(|(n, v)| format!("{n}: {v}"))
            .collect();
        format!("{{ {} }}", parts.join(", "))
    }

    /// Kernel as a subgroup, for polycyclic domains.
    pub fn kernel(&self) -> Result<Subgroup> {
        let whole = Subgroup::whole(&self.dom);
        let pcs = whole.pcs()?;
        let vals: Vec<AlgNum> = pcs.elements().iter().map(|e| self.eval(e)).collect();
        let (basis, rows) = AlgNum::coefficient_matrix(&vals);
        crate::group::kernel_of_linear(pcs, &rows, basis.len()).canonical()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    LessThan,
    GreaterThan,
    Equal,
    Incomparable,
}

#[derive(Clone, Debug)]
pub struct Order {
    pub name: String,
    pub group: GroupRef,
    pub kind: OrderKind,
}

#[derive(Clone, Debug)]
pub enum OrderKind {
    Trivial,
    Character(Character),
    Pullback { hom: Hom, inner: Arc<Order> },
    Pushforward(Arc<Pushforward>),
    Lexicographic(Arc<Lexicographic>),
    Classification(Arc<Classification>),
    /// Positive cone `S \ {0}` for a numerical monoid `S` of the integers.
    Submonoid(Vec<u64>),
}

#[derive(Clone, Debug)]
pub struct Pushforward {
    pub iota: Hom,
    pub inner: Order,
    mode: PushMode,
}

#[derive(Clone, Debug)]
enum PushMode {
    /// Image central (or ambient abelian): the cone is `iota(P+)` itself.
    Central { image: Pcs, kernel: Subgroup },
    /// Inner order has no positive elements.
    Empty,
}

#[derive(Clone, Debug)]
pub struct Lexicographic {
    pub incl: Hom,
    pub sub: Order,
    pub proj: Hom,
    pub quot: Order,
    push: Pushforward,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub p: Subgroup,
    /// Values on the canonical pcs of the center of the quotient.
    pub iota: Vec<AlgNum>,
    pub quotient: Quotient,
    pub center: Subgroup,
    form: IntegerForm,
}

impl Classification {
    /// Coordinates of `g P` in the center of `Q / P`, if central.
    pub fn center_coords(&self, g: &Element) -> Option<Vec<i64>> {
        let q = self.quotient.project(g);
        let (mut x, y) = self.center.pcs().ok()?.coords(&q)?;
        x.extend(y);
        Some(x)
    }

    pub fn iota_sign(&self, coords: &[i64]) -> i32 {
        self.form.sign(coords)
    }

    pub fn center_rank(&self) -> usize {
        self.iota.len()
    }
}

impl Order {
    pub fn is_positive(&self, g: &Element) -> Result<bool> {
        let grp = &self.group;
        if grp.is_identity(g) {
            return Ok(false);
        }
        match &self.kind {
            OrderKind::Trivial => Ok(false),
            OrderKind::Character(c) => Ok(c.sign(g) > 0),
            OrderKind::Pullback { hom, inner } => inner.is_positive(&hom.apply(g)),
            OrderKind::Classification(c) => Ok(match c.center_coords(g) {
                Some(x) => c.iota_sign(&x) > 0,
                None => false,
            }),
            OrderKind::Lexicographic(l) => {
                let q = l.proj.apply(g);
                if !l.proj.cod.is_identity(&q) {
                    l.quot.is_positive(&q)
                } else {
                    l.push.is_positive(g)
                }
            }
            OrderKind::Pushforward(p) => p.is_positive(g),
            OrderKind::Submonoid(gens) => {
                let k = grp.abelianize(g)[0];
                Ok(k > 0 && monoid_contains(gens, k as u64))
            }
        }
    }

    pub fn compare(&self, g: &Element, h: &Element) -> Result<Comparison> {
        if g == h {
            return Ok(Comparison::Equal);
        }
        let grp = &self.group;
        let d = grp.mul(&grp.inv(g), h);
        if self.is_positive(&d)? {
            return Ok(Comparison::LessThan);
        }
        if self.is_positive(&grp.inv(&d))? {
            return Ok(Comparison::GreaterThan);
        }
        Ok(Comparison::Incomparable)
    }

    /// `g <= h` in the reflexive order.
    pub fn le(&self, g: &Element, h: &Element) -> Result<bool> {
        Ok(matches!(
            self.compare(g, h)?,
            Comparison::LessThan | Comparison::Equal
        ))
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            OrderKind::Trivial => "trivial",
            OrderKind::Character(_) => "character",
            OrderKind::Pullback { .. } => "pullback",
            OrderKind::Pushforward(_) => "pushforward",
            OrderKind::Lexicographic(_) => "lexicographic",
            OrderKind::Classification(_) => "classification",
            OrderKind::Submonoid(_) => "monoid",
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            OrderKind::Trivial => format!("trivial order on {}", self.group.name()),
            OrderKind::Character(c) => format!("character order {} on {}", c.describe(), self.group.name()),
            OrderKind::Pullback { hom, inner } => {
                format!("pullback along {} of ({})", hom.name, inner.describe())
            }
            OrderKind::Pushforward(p) => {
                format!("pushforward along {} of ({})", p.iota.name, p.inner.describe())
            }
            OrderKind::Lexicographic(l) => format!(
                "lexicographic: ({}) then ({})",
                l.quot.describe(),
                l.sub.describe()
            ),
            OrderKind::Classification(c) => {
                let iota: Vec<String> = c.iota.iter().map(|v| v.to_string()).collect();
                format!(
                    "classification order on {} with kernel {} and iota [{}]",
                    self.group.name(),
                    c.p.describe(),
                    iota.join(", ")
                )
            }
            OrderKind::Submonoid(g) => format!("monoid order generated by {g:?}"),
        }
    }

    /// Elements of `K` along which positivity is constant on cosets.
    pub fn invariance(&self) -> Option<NormalSub> {
        match &self.kind {
            OrderKind::Trivial => Some(NormalSub::Generated(Subgroup::whole(&self.group))),
            OrderKind::Character(c) => Some(NormalSub::CharacterKernel(c.clone())),
            OrderKind::Classification(c) => Some(NormalSub::Generated(c.p.clone())),
            OrderKind::Pullback { hom, inner } => Some(NormalSub::Preimage {
                hom: hom.clone(),
                target: Box::new(inner.invariance()?),
            }),
            OrderKind::Submonoid(_) => Some(NormalSub::Generated(Subgroup::trivial(&self.group))),
            _ => None,
        }
    }
}

impl Pushforward {
    fn is_positive(&self, g: &Element) -> Result<bool> {
        match &self.mode {
            PushMode::Empty => Ok(false),
            PushMode::Central { image, kernel } => {
                let Some(h0) = image.preimage(g) else {
                    return Ok(false);
                };
                coset_meets_positive(&self.inner, &h0, &kernel.gens)
            }
        }
    }
}

/// Whether the coset `h0 * <s>` meets the positive cone of `o`.
fn coset_meets_positive(o: &Order, h0: &Element, s: &[Element]) -> Result<bool> {
    let g = &o.group;
    if s.iter().all(|x| g.is_identity(x)) {
        return o.is_positive(h0);
    }
    match &o.kind {
        OrderKind::Trivial => Ok(false),
        OrderKind::Character(c) => {
            if s.iter().any(|x| !c.vanishes_at(x)) {
                Ok(true)
            } else {
                Ok(c.sign(h0) > 0)
            }
        }
        OrderKind::Pullback { hom, inner } => {
            let imgs: Vec<Element> = s.iter().map(|x| hom.apply(x)).collect();
            coset_meets_positive(inner, &hom.apply(h0), &imgs)
        }
        OrderKind::Classification(c) => {
            for x in s {
                if !c.p.contains(x)? {
                    return Err(Error::UnsupportedDecision(
                        "coset of a classification order not inside its kernel".into(),
                    ));
                }
            }
            o.is_positive(h0)
        }
        _ => Err(Error::UnsupportedDecision(format!(
            "coset positivity for {} orders",
            o.kind_name()
        ))),
    }
}

pub(crate) fn monoid_contains(gens: &[u64], k: u64) -> bool {
    if k == 0 {
        return true;
    }
    let g = gens.iter().fold(0u64, |a, &b| num_integer::gcd(a, b));
    if g == 0 || !k.is_multiple_of(g) {
        return false;
    }
    let max = gens.iter().copied().max().unwrap() / g;
    if k / g >= max * max {
        return true;
    }
    let k = (k / g) as usize;
    let scaled: Vec<usize> = gens.iter().map(|x| (x / g) as usize).collect();
    let mut reach = vec![false; k + 1];
    reach[0] = true;
    for i in 1..=k {
        reach[i] = scaled.iter().any(|&s| s <= i && s > 0 && reach[i - s]);
    }
    reach[k]
}
