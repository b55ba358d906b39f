use std::sync::Arc;

use super::{
    Character, Classification, Lexicographic, Order, OrderKind, PushMode, Pushforward,
};
use crate::error::{Error, Result};
use crate::field::{AlgNum, IntegerForm};
use crate::group::{center, quotient, GroupRef, Hom, Pcs, Subgroup};
use crate::lattice;

impl Order {
    pub fn trivial(g: &GroupRef) -> Order {
        Order {
            name: "trivial".into(),
            group: g.clone(),
            kind: OrderKind::Trivial,
        }
    }

    pub fn character(c: Character) -> Order {
        Order {
            name: "character".into(),
            group: c.dom.clone(),
            kind: OrderKind::Character(c),
        }
    }

    /// Character order from integer values.
    pub fn from_ints(g: &GroupRef, values: &[i64]) -> Result<Order> {
        Ok(Self::character(Character::from_ints(g, values)?))
    }

    pub fn named(mut self, name: &str) -> Order {
        self.name = name.into();
        self
    }

    pub fn pullback(hom: &Hom, inner: &Order) -> Result<Order> {
        if !hom.cod.same_as(&inner.group) {
            return Err(Error::GroupMismatch(
                hom.cod.name().into(),
                inner.group.name().into(),
            ));
        }
        if !hom.validate() {
            return Err(Error::InvalidHom(hom.name.clone()));
        }
        let kind = match &inner.kind {
            OrderKind::Pullback { hom: h2, inner: o2 } => OrderKind::Pullback {
                hom: hom.then(h2)?,
                inner: o2.clone(),
            },
            _ => OrderKind::Pullback {
                hom: hom.clone(),
                inner: Arc::new(inner.clone()),
            },
        };
        Ok(Order {
            name: format!("pullback({})", inner.name),
            group: hom.dom.clone(),
            kind,
        })
    }

    pub fn pushforward(iota: &Hom, inner: &Order) -> Result<Order> {
        let p = Pushforward::build(iota, inner)?;
        Ok(Order {
            name: format!("pushforward({})", inner.name),
            group: iota.cod.clone(),
            kind: OrderKind::Pushforward(Arc::new(p)),
        })
    }

    /// Lexicographic order of `incl: H -> G` and `proj: G -> Q`: positive
    /// image in `Q`, or trivial image and positive in `H`.
    pub fn lexicographic(incl: &Hom, sub: &Order, proj: &Hom, quot: &Order) -> Result<Order> {
        if !incl.cod.same_as(&proj.dom) {
            return Err(Error::GroupMismatch(incl.cod.name().into(), proj.dom.name().into()));
        }
        if !sub.group.same_as(&incl.dom) || !quot.group.same_as(&proj.cod) {
            return Err(Error::GroupMismatch(
                sub.group.name().into(),
                incl.dom.name().into(),
            ));
        }
        let g = &proj.dom;
        if g.is_free() {
            return Err(Error::Unsupported(
                "exactness check for extensions of free groups".into(),
            ));
        }
        let image = Subgroup::new(g.clone(), incl.images.clone());
        let ker = proj.kernel()?;
        if !image.equals(&ker)? {
            return Err(Error::NotExact(format!(
                "image {} differs from kernel {}",
                image.describe(),
                ker.describe()
            )));
        }
        if !proj.is_onto()? {
            return Err(Error::NotExact(format!("{} is not onto", proj.name)));
        }
        let push = Pushforward::build(incl, sub)?;
        Ok(Order {
            name: format!("lex({}, {})", quot.name, sub.name),
            group: g.clone(),
            kind: OrderKind::Lexicographic(Arc::new(Lexicographic {
                incl: incl.clone(),
                sub: sub.clone(),
                proj: proj.clone(),
                quot: quot.clone(),
                push,
            })),
        })
    }

    /// Order with positive cone `{g : gP central in Q/P and iota(gP) > 0}`.
    /// `iota` lists values on the canonical pcs of the center of `Q / P`.
    pub fn classification(q: &GroupRef, p: &Subgroup, iota: Vec<AlgNum>) -> Result<Order> {
        let quo = quotient(q, p, &format!("{}_mod", q.name()))?;
        let z = center(&quo.group)?.canonical()?;
        let pcs = z.pcs()?;
        if iota.len() != pcs.rank() {
            return Err(Error::NotInjective(format!(
                "center of the quotient has rank {}, iota has {} values",
                pcs.rank(),
                iota.len()
            )));
        }
        if iota.is_empty() {
            return Err(Error::NotInjective("quotient has trivial center".into()));
        }
        let (basis, rows) = AlgNum::coefficient_matrix(&iota);
        if !lattice::left_kernel(&rows, basis.len()).is_empty() {
            return Err(Error::NotInjective(format!(
                "iota [{}] has a nontrivial integer kernel",
                iota.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
            )));
        }
        let form = IntegerForm::new(&iota);
        Ok(Order {
            name: "classification".into(),
            group: q.clone(),
            kind: OrderKind::Classification(Arc::new(Classification {
                p: p.canonical()?,
                iota,
                quotient: quo,
                center: z,
                form,
            })),
        })
    }

    /// Order on a cyclic group whose positive cone is a numerical monoid
    /// minus the identity.
    pub fn submonoid(g: &GroupRef, gens: &[u64]) -> Result<Order> {
        if g.n_gens() != 1 || (g.kind() == crate::group::Kind::Nilpotent2) {
            return Err(Error::Unsupported("monoid orders live on the integers".into()));
        }
        if gens.is_empty() || gens.contains(&0) {
            return Err(Error::InvalidPresentation("monoid generators must be positive".into()));
        }
        let mut gens = gens.to_vec();
        gens.sort_unstable();
        gens.dedup();
        Ok(Order {
            name: "monoid".into(),
            group: g.clone(),
            kind: OrderKind::Submonoid(gens),
        })
    }

    /// Nonzero order: some positive element exists.
    pub fn is_nontrivial(&self) -> bool {
        match &self.kind {
            OrderKind::Trivial => false,
            OrderKind::Character(c) => !c.is_zero(),
            OrderKind::Pullback { hom, inner } => {
                inner.is_nontrivial()
                    && hom
                        .images
                        .iter()
                        .any(|x| !hom.cod.is_identity(x))
            }
            _ => true,
        }
    }
}

impl Pushforward {
    pub(super) fn build(iota: &Hom, inner: &Order) -> Result<Pushforward> {
        if !iota.dom.same_as(&inner.group) {
            return Err(Error::GroupMismatch(
                iota.dom.name().into(),
                inner.group.name().into(),
            ));
        }
        let g = &iota.cod;
        let h = &iota.dom;
        if matches!(inner.kind, OrderKind::Trivial) {
            return Ok(Pushforward {
                iota: iota.clone(),
                inner: inner.clone(),
                mode: PushMode::Empty,
            });
        }
        if g.is_free() {
            return Err(Error::UnsupportedDecision(
                "pushforward into a non-abelian free group: the conjugation orbit of the image is not closed under products".into(),
            ));
        }
        let central = if g.is_abelian() {
            true
        } else {
            let z = center(g)?;
            let mut ok = true;
            for x in &iota.images {
                ok &= z.contains(x)?;
            }
            ok
        };
        if !central {
            return Err(Error::UnsupportedDecision(
                "pushforward with a non-central image in a non-abelian group".into(),
            ));
        }
        let kernel = if h.is_free() {
            if h.n_gens() != 1 {
                return Err(Error::UnsupportedDecision(
                    "pushforward out of a non-cyclic free group".into(),
                ));
            }
            if g.is_identity(&iota.images[0]) {
                Subgroup::whole(h)
            } else {
                Subgroup::trivial(h)
            }
        } else {
            iota.kernel()?
        };
        let verdict = inner.is_antichain(&kernel)?;
        if !verdict.value {
            return Err(Error::NotInducible(format!(
                "kernel {} meets the positive cone",
                kernel.describe()
            )));
        }
        if verdict.method != super::Method::Exact {
            return Err(Error::UnsupportedDecision(
                "kernel antichain status only sampled".into(),
            ));
        }
        let image = Pcs::build_tracked(g, &iota.images, h, &h.gens())?;
        Ok(Pushforward {
            iota: iota.clone(),
            inner: inner.clone(),
            mode: PushMode::Central { image, kernel },
        })
    }
}
