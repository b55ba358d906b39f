//! Specification files: groups, homomorphisms, orders and experiments.
//! The grammar is documented in `docs/grammar.md`.

mod parse;
mod print;

pub use parse::{parse_spec, parse_word};
pub use print::print_spec;

use crate::error::{Error, Result};
use crate::field::AlgNum;
use crate::group::{Element, GroupRef, Hom};
use crate::order::Order;

#[derive(Clone, Debug, Default)]
pub struct SpecFile {
    pub decls: Vec<Decl>,
}

#[derive(Clone, Debug)]
pub enum Decl {
    Group(GroupDecl),
    Hom(HomDecl),
    Order(OrderDecl),
    Experiment(ExperimentDecl),
}

#[derive(Clone, Debug)]
pub struct GroupDecl {
    pub name: String,
    pub group: GroupRef,
}

#[derive(Clone, Debug)]
pub struct HomDecl {
    pub name: String,
    pub hom: Hom,
}

#[derive(Clone, Debug)]
pub struct OrderDecl {
    pub name: String,
    pub form: OrderForm,
    pub order: Order,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OrderForm {
    Trivial { group: String },
    Character { group: String, values: Vec<AlgNum> },
    Pullback { hom: String, order: String },
    Pushforward { hom: String, order: String },
    Lexicographic { incl: String, sub: String, proj: String, quot: String },
    Classification { group: String, kernel: Vec<Element>, iota: Vec<AlgNum> },
    Monoid { group: String, gens: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Hom(String),
    Order(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentDecl {
    pub name: String,
    pub target: Option<Target>,
    pub radii: Vec<usize>,
    pub slacks: Vec<usize>,
    pub bound: i64,
    pub margin: usize,
}

fn unresolved(kind: &str, name: &str) -> Error {
    Error::Unresolved {
        kind: kind.into(),
        name: name.into(),
    }
}

impl SpecFile {
    pub fn group(&self, name: &str) -> Result<&GroupRef> {
        self.decls
            .iter()
            .find_map(|d| match d {
                Decl::Group(g) if g.name == name => Some(&g.group),
                _ => None,
            })
            .ok_or_else(|| unresolved("group", name))
    }

    pub fn hom(&self, name: &str) -> Result<&Hom> {
        self.decls
            .iter()
            .find_map(|d| match d {
                Decl::Hom(h) if h.name == name => Some(&h.hom),
                _ => None,
            })
            .ok_or_else(|| unresolved("hom", name))
    }

    pub fn order_decl(&self, name: &str) -> Result<&OrderDecl> {
        self.decls
            .iter()
            .find_map(|d| match d {
                Decl::Order(o) if o.name == name => Some(o),
                _ => None,
            })
            .ok_or_else(|| unresolved("order", name))
    }

    pub fn order(&self, name: &str) -> Result<&Order> {
        Ok(&self.order_decl(name)?.order)
    }

    pub fn experiment(&self, name: &str) -> Result<&ExperimentDecl> {
        self.decls
            .iter()
            .find_map(|d| match d {
                Decl::Experiment(e) if e.name == name => Some(e),
                _ => None,
            })
            .ok_or_else(|| unresolved("experiment", name))
    }

    pub fn names(&self, kind: &str) -> Vec<&str> {
        self.decls
            .iter()
            .filter_map(|d| match (d, kind) {
                (Decl::Group(g), "group") => Some(g.name.as_str()),
                (Decl::Hom(h), "hom") => Some(h.name.as_str()),
                (Decl::Order(o), "order") => Some(o.name.as_str()),
                (Decl::Experiment(e), "experiment") => Some(e.name.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }
}
