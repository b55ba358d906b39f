use super::{Element, Group, GroupRef};
use crate::error::{Error, Result};

/// Homomorphism given by generator images.
#[derive(Clone, Debug)]
pub struct Hom {
    pub name: String,
    pub dom: GroupRef,
    pub cod: GroupRef,
    pub images: Vec<Element>,
}

impl Hom {
    /// Builds and validates.
    pub fn new(name: &str, dom: GroupRef, cod: GroupRef, images: Vec<Element>) -> Result<Self> {
        if images.len() != dom.n_gens() {
            return Err(Error::InvalidHom(format!(
                "{name}: {} images for {} generators",
                images.len(),
                dom.n_gens()
            )));
        }
        for img in &images {
            cod.check(img)
                .map_err(|_| Error::InvalidHom(format!("{name}: image outside {}", cod.name())))?;
        }
        let h = Hom {
            name: name.into(),
            dom,
            cod,
            images,
        };
        if !h.validate() {
            return Err(Error::InvalidHom(format!(
                "{name}: defining relations of {} are not preserved",
                h.dom.name()
            )));
        }
        Ok(h)
    }

    pub fn identity(g: &GroupRef) -> Self {
        Hom {
            name: "id".into(),
            dom: g.clone(),
            cod: g.clone(),
            images: g.gens(),
        }
    }

    /// Relations of the domain map to the identity.
    pub fn validate(&self) -> bool {
        let Some(pc) = self.dom.pc() else {
            return true;
        };
        let cod = &self.cod;
        let n = self.images.len();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = cod.commutator(&self.images[i], &self.images[j]);
                let rhs = if i < pc.n && j < pc.n {
                    let t = pc.comm(i, j);
                    let mut acc = cod.identity();
                    for (k, &e) in t.iter().enumerate() {
                        acc = cod.mul(&acc, &cod.pow(&self.images[pc.n + k], e));
                    }
                    acc
                } else {
                    cod.identity()
                };
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    pub fn apply(&self, g: &Element) -> Element {
        let cod = &self.cod;
        match g {
            Element::Pc(v) => {
                let mut acc = cod.identity();
                for (img, &e) in self.images.iter().zip(v) {
                    if e != 0 {
                        acc = cod.mul(&acc, &cod.pow(img, e));
                    }
                }
                acc
            }
            Element::Word(w) => {
                let mut acc = cod.identity();
                for &l in w {
                    let img = &self.images[l.unsigned_abs() as usize - 1];
                    acc = if l > 0 {
                        cod.mul(&acc, img)
                    } else {
                        cod.mul(&acc, &cod.inv(img))
                    };
                }
                acc
            }
        }
    }

    pub fn try_apply(&self, g: &Element) -> Result<Element> {
        self.dom.check(g)?;
        Ok(self.apply(g))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Hom) -> Result<Hom> {
        if !self.cod.same_as(&next.dom) {
            return Err(Error::GroupMismatch(
                self.cod.name().into(),
                next.dom.name().into(),
            ));
        }
        Ok(Hom {
            name: format!("{}.{}", next.name, self.name),
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            images: self.images.iter().map(|g| next.apply(g)).collect(),
        })
    }

    pub fn is_onto(&self) -> Result<bool> {
        let sub = super::Subgroup::new(self.cod.clone(), self.images.clone());
        for g in self.cod.gens() {
            if !sub.contains(&g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_identity_map(&self) -> bool {
        self.dom.same_as(&self.cod) && self.images == self.dom.gens()
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .dom
            .gen_names()
            .iter()
            .zip(&self.images)
            .map(|(n, g)| format!("{n} -> {}", self.cod.format(g)))
            .collect();
        format!("{}: {} -> {} {{ {} }}", self.name, self.dom.name(), self.cod.name(), parts.join("; "))
    }
}

impl Group {
    /// Homomorphism sending each generator to the given images.
    pub fn hom_to(self: &GroupRef, cod: &GroupRef, images: Vec<Element>) -> Result<Hom> {
        Hom::new("hom", self.clone(), cod.clone(), images)
    }
}
