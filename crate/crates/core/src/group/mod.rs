//! Finitely generated groups with solvable word problem: free groups, free
//! abelian groups and torsion-free nilpotent groups of class at most two.
//!
//! Commutators follow `[g, h] = g^-1 h^-1 g h`, so `g h = h g [g, h]`.

mod hom;
mod structure;
mod subgroup;

pub use hom::Hom;
pub use structure::{
    center, kernel_of_linear, lower_central_series, normal_subgroups_bounded, quotient, Quotient,
};
pub use subgroup::{Pcs, Subgroup};

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type GroupRef = Arc<Group>;

/// Canonical element data. Pc elements are exponent vectors over the
/// generators in presentation order; free elements are freely reduced words
/// with letter `k + 1` for generator `k` and `-(k + 1)` for its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Pc(Vec<i64>),
    Word(Vec<i32>),
}

impl Element {
    pub fn pc(&self) -> &[i64] {
        match self {
            Element::Pc(v) => v,
            Element::Word(_) => panic!("expected a pc element"),
        }
    }

    pub fn word(&self) -> &[i32] {
        match self {
            Element::Word(w) => w,
            Element::Pc(_) => panic!("expected a word"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Kind {
    Free,
    FreeAbelian,
    Nilpotent2,
}

/// Class-two polycyclic data: `n` top generators, `m` central generators and
/// `[a_i, a_j] = c^t(i, j)` for `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pc {
    pub n: usize,
    pub m: usize,
    table: Vec<i64>,
}

impl Pc {
    pub fn abelian(n: usize) -> Self {
        Pc {
            n,
            m: 0,
            table: Vec::new(),
        }
    }

    pub fn new(n: usize, m: usize, comms: &[(usize, usize, Vec<i64>)]) -> Result<Self> {
        let mut table = vec![0; n * n * m];
        for (i, j, v) in comms {
            if *i >= n || *j >= n || v.len() != m {
                return Err(Error::InvalidPresentation(format!(
                    "commutator entry ({i}, {j}) out of range"
                )));
            }
            let (i, j, sign) = match i.cmp(j) {
                std::cmp::Ordering::Less => (*i, *j, 1),
                std::cmp::Ordering::Greater => (*j, *i, -1),
                std::cmp::Ordering::Equal => {
                    if v.iter().any(|&x| x != 0) {
                        return Err(Error::InvalidPresentation(
                            "a generator must commute with itself".into(),
                        ));
                    }
                    continue;
                }
            };
            for k in 0..m {
                table[(i * n + j) * m + k] = sign * v[k];
            }
        }
        Ok(Pc { n, m, table })
    }

    pub fn len(&self) -> usize {
        self.n + self.m
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `[a_i, a_j]` for `i < j` as a central exponent vector.
    pub fn comm(&self, i: usize, j: usize) -> &[i64] {
        let s = (i * self.n + j) * self.m;
        &self.table[s..s + self.m]
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|&x| x == 0)
    }

    /// `beta(e, f) = sum_{i<j} e_j f_i t_ij`: the central correction picked up
    /// when moving the top part of `f` left past the top part of `e`.
    pub fn beta(&self, e: &[i64], f: &[i64], out: &mut [i64]) {
        if self.m == 0 {
            return;
        }
        for j in 0..self.n {
            if e[j] == 0 {
                continue;
            }
            for i in 0..j {
                let coef = e[j] * f[i];
                if coef == 0 {
                    continue;
                }
                let t = self.comm(i, j);
                for k in 0..self.m {
                    out[k] += coef * t[k];
                }
            }
        }
    }

    /// Alternating form with `[g, h] = (0, form(top g, top h))`.
    pub fn form(&self, e: &[i64], f: &[i64]) -> Vec<i64> {
        let mut a = vec![0; self.m];
        let mut b = vec![0; self.m];
        self.beta(f, e, &mut a);
        self.beta(e, f, &mut b);
        a.iter().zip(&b).map(|(x, y)| x - y).collect()
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        if self.m > 0 {
            let mut corr = vec![0; self.m];
            self.beta(&a[..self.n], &b[..self.n], &mut corr);
            for k in 0..self.m {
                out[self.n + k] -= corr[k];
            }
        }
        out
    }

    pub fn inv(&self, a: &[i64]) -> Vec<i64> {
        let mut out: Vec<i64> = a.iter().map(|x| -x).collect();
        if self.m > 0 {
            let mut corr = vec![0; self.m];
            let neg: Vec<i64> = out[..self.n].to_vec();
            self.beta(&a[..self.n], &neg, &mut corr);
            for k in 0..self.m {
                out[self.n + k] += corr[k];
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Group {
    name: String,
    kind: Kind,
    gen_names: Vec<String>,
    pc: Option<Pc>,
}

impl Group {
    pub fn free(name: &str, gen_names: &[&str]) -> Result<GroupRef> {
        Self::free_owned(name, gen_names.iter().map(|s| s.to_string()).collect())
    }

    pub fn free_owned(name: &str, gen_names: Vec<String>) -> Result<GroupRef> {
        if gen_names.is_empty() {
            return Err(Error::InvalidPresentation("free group needs rank >= 1".into()));
        }
        Ok(Arc::new(Group {
            name: name.into(),
            kind: Kind::Free,
            gen_names,
            pc: None,
        }))
    }

    pub fn abelian(name: &str, gen_names: &[&str]) -> GroupRef {
        Self::abelian_owned(name, gen_names.iter().map(|s| s.to_string()).collect())
    }

    pub fn abelian_owned(name: &str, gen_names: Vec<String>) -> GroupRef {
        Arc::new(Group {
            name: name.into(),
            kind: Kind::FreeAbelian,
            pc: Some(Pc::abelian(gen_names.len())),
            gen_names,
        })
    }

    /// Class-two presentation; `comms` lists `[top_i, top_j] = central^v`.
    pub fn nilpotent2(
        name: &str,
        top: Vec<String>,
        central: Vec<String>,
        comms: &[(usize, usize, Vec<i64>)],
    ) -> Result<GroupRef> {
        let pc = Pc::new(top.len(), central.len(), comms)?;
        let mut gen_names = top;
        gen_names.extend(central);
        let mut seen = std::collections::BTreeSet::new();
        for g in &gen_names {
            if !seen.insert(g) {
                return Err(Error::InvalidPresentation(format!("duplicate generator {g}")));
            }
        }
        Ok(Arc::new(Group {
            name: name.into(),
            kind: Kind::Nilpotent2,
            gen_names,
            pc: Some(pc),
        }))
    }

    pub fn heisenberg() -> GroupRef {
        Self::nilpotent2(
            "H",
            vec!["a".into(), "b".into()],
            vec!["c".into()],
            &[(0, 1, vec![1])],
        )
        .unwrap()
    }

    /// Free nilpotent group of class two on `rank` generators; the central
    /// generators are the basic commutators `[x_i, x_j]`, `i < j`.
    pub fn free_nilpotent2(rank: usize) -> GroupRef {
        let top: Vec<String> = (0..rank).map(letter_name).collect();
        let mut central = Vec::new();
        let mut comms = Vec::new();
        let pairs = rank * rank.saturating_sub(1) / 2;
        for i in 0..rank {
            for j in i + 1..rank {
                let mut v = vec![0; pairs];
                v[central.len()] = 1;
                comms.push((i, j, v));
                central.push(format!("{}{}", top[i], top[j]));
            }
        }
        Self::nilpotent2(&format!("N{rank}"), top, central, &comms).unwrap()
    }

    pub fn zn(n: usize) -> GroupRef {
        let names: Vec<String> = (0..n).map(letter_name).collect();
        Self::abelian_owned(&format!("Z{n}"), names)
    }

    pub fn free_rank(n: usize) -> GroupRef {
        let names: Vec<String> = (0..n).map(letter_name).collect();
        Self::free_owned(&format!("F{n}"), names).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(&self, name: &str) -> GroupRef {
        let mut g = self.clone();
        g.name = name.into();
        Arc::new(g)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn n_gens(&self) -> usize {
        self.gen_names.len()
    }

    pub fn is_free(&self) -> bool {
        self.kind == Kind::Free
    }

    pub fn pc(&self) -> Option<&Pc> {
        self.pc.as_ref()
    }

    pub fn require_pc(&self) -> Result<&Pc> {
        self.pc
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("{} is not polycyclic", self.name)))
    }

    pub fn is_abelian(&self) -> bool {
        match &self.pc {
            Some(pc) => pc.is_abelian(),
            None => self.n_gens() == 1,
        }
    }

    pub fn hirsch_length(&self) -> Option<usize> {
        self.pc.as_ref().map(|p| p.len())
    }

    /// Nilpotency class; `None` for non-abelian free groups.
    pub fn class(&self) -> Option<usize> {
        match &self.pc {
            Some(pc) if pc.is_empty() => Some(0),
            Some(pc) if pc.is_abelian() => Some(1),
            Some(_) => Some(2),
            None if self.n_gens() == 1 => Some(1),
            None => None,
        }
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gen_names.iter().position(|g| g == name)
    }

    pub fn identity(&self) -> Element {
        match &self.pc {
            Some(pc) => Element::Pc(vec![0; pc.len()]),
            None => Element::Word(Vec::new()),
        }
    }

    pub fn gen(&self, i: usize) -> Element {
        match &self.pc {
            Some(pc) => {
                let mut v = vec![0; pc.len()];
                v[i] = 1;
                Element::Pc(v)
            }
            None => Element::Word(vec![i as i32 + 1]),
        }
    }

    pub fn gens(&self) -> Vec<Element> {
        (0..self.n_gens()).map(|i| self.gen(i)).collect()
    }

    /// Generators followed by their inverses.
    pub fn symmetric_gens(&self) -> Vec<Element> {
        let mut s = self.gens();
        s.extend(self.gens().iter().map(|g| self.inv(g)));
        s
    }

    pub fn check(&self, g: &Element) -> Result<()> {
        let ok = match (g, &self.pc) {
            (Element::Pc(v), Some(pc)) => v.len() == pc.len(),
            (Element::Word(w), None) => w
                .iter()
                .all(|&l| l != 0 && (l.unsigned_abs() as usize) <= self.n_gens()),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::GroupMismatch(
                self.name.clone(),
                format!("element {g:?}"),
            ))
        }
    }

    pub fn is_identity(&self, g: &Element) -> bool {
        match g {
            Element::Pc(v) => v.iter().all(|&x| x == 0),
            Element::Word(w) => w.is_empty(),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (a, b, &self.pc) {
            (Element::Pc(x), Element::Pc(y), Some(pc)) => Element::Pc(pc.mul(x, y)),
            (Element::Word(x), Element::Word(y), None) => {
                let mut out = x.clone();
                for &l in y {
                    push_letter(&mut out, l);
                }
                Element::Word(out)
            }
            _ => panic!("group mismatch in mul on {}", self.name),
        }
    }

    pub fn try_mul(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn inv(&self, a: &Element) -> Element {
        match (a, &self.pc) {
            (Element::Pc(x), Some(pc)) => Element::Pc(pc.inv(x)),
            (Element::Word(w), None) => Element::Word(w.iter().rev().map(|l| -l).collect()),
            _ => panic!("group mismatch in inv on {}", self.name),
        }
    }

    pub fn pow(&self, a: &Element, k: i64) -> Element {
        let base = if k < 0 { self.inv(a) } else { a.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// `[g, h] = g^-1 h^-1 g h`.
    pub fn commutator(&self, g: &Element, h: &Element) -> Element {
        let gi = self.inv(g);
        let hi = self.inv(h);
        self.mul(&self.mul(&gi, &hi), &self.mul(g, h))
    }

    /// `h^-1 g h`.
    pub fn conj(&self, g: &Element, h: &Element) -> Element {
        self.mul(&self.mul(&self.inv(h), g), h)
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Element {
        items
            .into_iter()
            .fold(self.identity(), |acc, x| self.mul(&acc, x))
    }

    /// Value of a word in the generators, letters as in [`Element::Word`].
    pub fn eval_letters(&self, letters: &[i32]) -> Element {
        let mut acc = self.identity();
        for &l in letters {
            let g = self.gen(l.unsigned_abs() as usize - 1);
            let g = if l < 0 { self.inv(&g) } else { g };
            acc = self.mul(&acc, &g);
        }
        acc
    }

    /// Exponent sums of a free word, or the top exponents of a pc element
    /// together with its central part.
    pub fn abelianize(&self, g: &Element) -> Vec<i64> {
        match g {
            Element::Pc(v) => v.clone(),
            Element::Word(w) => {
                let mut out = vec![0; self.n_gens()];
                for &l in w {
                    out[l.unsigned_abs() as usize - 1] += i64::from(l.signum());
                }
                out
            }
        }
    }

    /// Elements of word length at most `radius` in `gens` and their
    /// inverses, in breadth-first order with each layer sorted.
    pub fn ball_elements(&self, gens: &[Element], radius: usize) -> Vec<Element> {
        let mut steps: Vec<Element> = gens.to_vec();
        steps.extend(gens.iter().map(|g| self.inv(g)));
        let mut seen = std::collections::HashSet::new();
        let id = self.identity();
        seen.insert(id.clone());
        let mut out = vec![id.clone()];
        let mut layer = vec![id];
        for _ in 0..radius {
            let mut next = Vec::new();
            for x in &layer {
                for s in &steps {
                    let y = self.mul(x, s);
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Human-readable normal form, e.g. `a^2 b c^-1` or `1`.
    pub fn format(&self, g: &Element) -> String {
        let mut s = String::new();
        let mut push = |name: &str, e: i64| {
            if !s.is_empty() {
                s.push(' ');
            }
            if e == 1 {
                s.push_str(name);
            } else {
                let _ = write!(s, "{name}^{e}");
            }
        };
        match g {
            Element::Pc(v) => {
                for (i, &e) in v.iter().enumerate() {
                    if e != 0 {
                        push(&self.gen_names[i], e);
                    }
                }
            }
            Element::Word(w) => {
                let mut i = 0;
                while i < w.len() {
                    let mut j = i;
                    while j < w.len() && w[j] == w[i] {
                        j += 1;
                    }
                    let name = &self.gen_names[w[i].unsigned_abs() as usize - 1];
                    push(name, (j - i) as i64 * i64::from(w[i].signum()));
                    i = j;
                }
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    /// Stable textual description used for hashing and cache keys.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        match self.kind {
            Kind::Free => {
                let _ = write!(s, "free {}", self.gen_names.join(" "));
            }
            Kind::FreeAbelian => {
                let _ = write!(s, "abelian {}", self.gen_names.join(" "));
            }
            Kind::Nilpotent2 => {
                let pc = self.pc.as_ref().unwrap();
                let _ = write!(s, "nilpotent2 {};", self.gen_names.join(" "));
                for i in 0..pc.n {
                    for j in i + 1..pc.n {
                        let t = pc.comm(i, j);
                        if t.iter().any(|&x| x != 0) {
                            let _ = write!(s, " [{},{}]={:?}", i, j, t);
                        }
                    }
                }
                let _ = write!(s, "; top {}", pc.n);
            }
        }
        s
    }

    pub fn same_as(&self, other: &Group) -> bool {
        self.kind == other.kind && self.gen_names.len() == other.gen_names.len() && self.pc == other.pc
    }
}

fn push_letter(w: &mut Vec<i32>, l: i32) {
    if w.last() == Some(&-l) {
        w.pop();
    } else {
        w.push(l);
    }
}

pub fn letter_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{i}")
    }
}

/// Free reduction of an arbitrary letter sequence.
pub fn reduce_word(letters: &[i32]) -> Vec<i32> {
    let mut out = Vec::with_capacity(letters.len());
    for &l in letters {
        push_letter(&mut out, l);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_normal_forms() {
        let h = Group::heisenberg();
        let (a, b) = (h.gen(0), h.gen(1));
        assert_eq!(h.mul(&b, &a), Element::Pc(vec![1, 1, -1]));
        assert_eq!(h.inv(&Element::Pc(vec![1, 1, 0])), Element::Pc(vec![-1, -1, -1]));
        assert_eq!(h.commutator(&a, &b), Element::Pc(vec![0, 0, 1]));
        assert!(h.is_identity(&h.commutator(&a, &a)));
        let id = h.identity();
        assert_eq!(h.mul(&id, &a), a);
    }

    #[test]
    fn abelian_and_free_basics() {
        let z2 = Group::zn(2);
        assert_eq!(
            z2.mul(&Element::Pc(vec![1, 2]), &Element::Pc(vec![3, -1])),
            Element::Pc(vec![4, 1])
        );
        let f = Group::free_rank(2);
        let w = Element::Word(vec![1, -2]);
        assert_eq!(f.inv(&w), Element::Word(vec![2, -1]));
        assert!(f.is_identity(&f.mul(&w, &f.inv(&w))));
        assert_eq!(f.format(&Element::Word(vec![-1, 2, 2, 1])), "a^-1 b^2 a");
    }

    #[test]
    fn mismatch_is_reported() {
        let z2 = Group::zn(2);
        assert!(matches!(
            z2.try_mul(&Element::Word(vec![1]), &z2.gen(0)),
            Err(Error::GroupMismatch(..))
        ));
    }
}
