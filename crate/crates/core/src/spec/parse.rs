use std::str::FromStr;

use super::{Decl, ExperimentDecl, GroupDecl, HomDecl, OrderDecl, OrderForm, SpecFile, Target};
use crate::error::{Error, Result};
use crate::field::AlgNum;
use crate::group::{Element, Group, GroupRef, Hom, Subgroup};
use crate::order::{Character, Order};

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let mut p = Parser { src: text, pos: 0 };
    let mut spec = SpecFile::default();
    loop {
        p.skip();
        if p.at_end() {
            break;
        }
        let at = p.pos;
        let kw = p.ident()?;
        let decl = match kw.as_str() {
            "group" => Decl::Group(p.group_decl(&spec)?),
            "hom" => Decl::Hom(p.hom_decl(&spec)?),
            "order" => Decl::Order(p.order_decl(&spec)?),
            "experiment" => Decl::Experiment(p.experiment_decl(&spec)?),
            _ => return Err(p.err_at(at, format!("expected a declaration, found '{kw}'"))),
        };
        let (kind, name) = match &decl {
            Decl::Group(d) => ("group", &d.name),
            Decl::Hom(d) => ("hom", &d.name),
            Decl::Order(d) => ("order", &d.name),
            Decl::Experiment(d) => ("experiment", &d.name),
        };
        if spec.names(kind).contains(&name.as_str()) {
            return Err(p.err_at(at, format!("duplicate {kind} '{name}'")));
        }
        spec.decls.push(decl);
        p.skip();
        p.eat(b';');
    }
    Ok(spec)
}

/// Parse a word such as `a^2 [a, b]^-1 c` in the generators of `g`.
pub fn parse_word(g: &GroupRef, text: &str) -> Result<Element> {
    let mut p = Parser { src: text, pos: 0 };
    let w = p.word(g)?;
    p.skip();
    if !p.at_end() {
        return Err(p.err("trailing input after word"));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn in_decl(name: &str, e: Error) -> Error {
    Error::Declaration {
        decl: name.into(),
        source: Box::new(e),
    }
}

impl<'a> Parser<'a> {
    fn bytes(&self) -> &'a [u8] {
        self.src.as_bytes()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes().get(self.pos).copied()
    }

    /// Position of the next token.
    fn mark(&mut self) -> usize {
        self.skip();
        self.pos
    }

    fn skip(&mut self) {
        while let Some(c) = self.peek() {
            if c == b'#' {
                while let Some(c) = self.peek() {
                    if c == b'\n' {
                        break;
                    }
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn err_at(&self, at: usize, msg: impl Into<String>) -> Error {
        let before = &self.src[..at.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        self.err_at(self.pos, msg)
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        self.skip();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            Ok(())
        } else {
            Err(self.err(format!("expected '{s}'")))
        }
    }

    fn peek_is(&mut self, c: u8) -> bool {
        self.skip();
        self.peek() == Some(c)
    }

    fn ident(&mut self) -> Result<String> {
        self.skip();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {}
            _ => return Err(self.err("expected an identifier")),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn int(&mut self) -> Result<i64> {
        self.skip();
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err_at(start, "expected an integer"))
    }

    fn uint(&mut self) -> Result<usize> {
        let at = self.mark();
        let v = self.int()?;
        usize::try_from(v).map_err(|_| self.err_at(at, "expected a non-negative integer"))
    }

    /// Raw text up to a top-level `,`, `;`, `}` or `]`, parsed as a number.
    fn algnum(&mut self) -> Result<AlgNum> {
        self.skip();
        let start = self.pos;
        let mut depth = 0i32;
        while let Some(c) = self.peek() {
            match c {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b',' | b';' | b'}' | b']' if depth == 0 => break,
                _ => {}
            }
            self.pos += 1;
        }
        let raw = &self.src[start..self.pos];
        AlgNum::from_str(raw.trim()).map_err(|e| {
            let lead = raw.len() - raw.trim_start().len();
            self.err_at(start + lead + e.offset, e.msg)
        })
    }

    fn is_word_end(&mut self) -> bool {
        self.skip();
        matches!(self.peek(), None | Some(b';' | b'}' | b',' | b']' | b')'))
    }

    fn word(&mut self, g: &GroupRef) -> Result<Element> {
        let mut acc = g.identity();
        if self.is_word_end() {
            return Err(self.err("expected a word"));
        }
        while !self.is_word_end() {
            let f = self.factor(g)?;
            acc = g.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self, g: &GroupRef) -> Result<Element> {
        self.skip();
        let at = self.mark();
        let base = match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let x = self.word(g)?;
                self.expect(",")?;
                let y = self.word(g)?;
                self.expect("]")?;
                g.commutator(&x, &y)
            }
            Some(b'(') => {
                self.pos += 1;
                let x = self.word(g)?;
                self.expect(")")?;
                x
            }
            Some(b'1') => {
                self.pos += 1;
                g.identity()
            }
            _ => {
                let name = self.ident()?;
                let i = g
                    .gen_index(&name)
                    .ok_or_else(|| self.err_at(at, format!("'{name}' is not a generator of {}", g.name())))?;
                g.gen(i)
            }
        };
        if self.eat(b'^') {
            let k = self.int()?;
            Ok(g.pow(&base, k))
        } else {
            Ok(base)
        }
    }

    fn group_decl(&mut self, spec: &SpecFile) -> Result<GroupDecl> {
        let name = self.ident()?;
        self.expect("=")?;
        let kind_at = self.mark();
        let kind = self.ident()?;
        self.expect("{")?;
        let mut gens: Vec<String> = Vec::new();
        let mut central: Vec<String> = Vec::new();
        let mut comms: Vec<(String, String, Vec<(String, i64)>, usize)> = Vec::new();
        loop {
            if self.eat(b'}') {
                break;
            }
            let at = self.mark();
            let stmt = self.ident()?;
            match stmt.as_str() {
                "gens" | "central" => {
                    while !self.is_word_end() {
                        let g = self.ident()?;
                        if stmt == "gens" {
                            gens.push(g);
                        } else {
                            central.push(g);
                        }
                    }
                }
                "comm" if kind == "nilpotent2" => {
                    let x = self.ident()?;
                    let y = self.ident()?;
                    self.expect("=")?;
                    let mut rhs = Vec::new();
                    while !self.is_word_end() {
                        if self.eat(b'1') {
                            continue;
                        }
                        let z = self.ident()?;
                        let e = if self.eat(b'^') { self.int()? } else { 1 };
                        rhs.push((z, e));
                    }
                    comms.push((x, y, rhs, at));
                }
                _ => return Err(self.err_at(at, format!("unexpected '{stmt}' in group body"))),
            }
            self.eat(b';');
        }
        let _ = spec;
        let group = match kind.as_str() {
            "free" => Group::free_owned(&name, gens).map_err(|e| in_decl(&name, e))?,
            "abelian" => Group::abelian_owned(&name, gens),
            "nilpotent2" => {
                for (_, _, rhs, _) in &comms {
                    for (z, _) in rhs {
                        if !central.contains(z) {
                            central.push(z.clone());
                        }
                    }
                }
                for c in &central {
                    if !gens.contains(c) {
                        return Err(in_decl(
                            &name,
                            Error::InvalidPresentation(format!("central generator {c} is not listed in gens")),
                        ));
                    }
                }
                let top: Vec<String> = gens.iter().filter(|g| !central.contains(g)).cloned().collect();
                let ordered_central: Vec<String> = gens.iter().filter(|g| central.contains(g)).cloned().collect();
                if gens[..top.len()] != top[..] {
                    return Err(in_decl(
                        &name,
                        Error::InvalidPresentation("central generators must follow the others in gens".into()),
                    ));
                }
                let mut table = Vec::new();
                for (x, y, rhs, at) in &comms {
                    let pos = |s: &String| top.iter().position(|t| t == s);
                    let (Some(i), Some(j)) = (pos(x), pos(y)) else {
                        return Err(self.err_at(*at, "commutators are taken between non-central generators"));
                    };
                    let mut v = vec![0i64; ordered_central.len()];
                    for (z, e) in rhs {
                        let k = ordered_central.iter().position(|c| c == z).unwrap();
                        v[k] += e;
                    }
                    table.push((i, j, v));
                }
                Group::nilpotent2(&name, top, ordered_central, &table).map_err(|e| in_decl(&name, e))?
            }
            _ => return Err(self.err_at(kind_at, format!("unknown group kind '{kind}'"))),
        };
        Ok(GroupDecl { name, group })
    }

    fn hom_decl(&mut self, spec: &SpecFile) -> Result<HomDecl> {
        let name = self.ident()?;
        self.expect(":")?;
        let d = self.ident()?;
        self.expect("->")?;
        let c = self.ident()?;
        let dom = spec.group(&d).map_err(|e| in_decl(&name, e))?.clone();
        let cod = spec.group(&c).map_err(|e| in_decl(&name, e))?.clone();
        self.expect("{")?;
        let mut images: Vec<Option<Element>> = vec![None; dom.n_gens()];
        loop {
            if self.eat(b'}') {
                break;
            }
            let at = self.mark();
            let x = self.ident()?;
            let i = dom
                .gen_index(&x)
                .ok_or_else(|| self.err_at(at, format!("'{x}' is not a generator of {d}")))?;
            self.expect("->")?;
            images[i] = Some(self.word(&cod)?);
            self.eat(b';');
        }
        let images: Vec<Element> = images
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                x.ok_or_else(|| {
                    in_decl(
                        &name,
                        Error::InvalidHom(format!("no image for generator {}", dom.gen_names()[i])),
                    )
                })
            })
            .collect::<Result<_>>()?;
        let hom = Hom::new(&name, dom, cod, images).map_err(|e| in_decl(&name, e))?;
        Ok(HomDecl { name, hom })
    }

    fn order_decl(&mut self, spec: &SpecFile) -> Result<OrderDecl> {
        let name = self.ident()?;
        self.expect("=")?;
        let kind_at = self.mark();
        let kind = self.ident()?;
        let ctx = |e: Error| in_decl(&name, e);
        let form = match kind.as_str() {
            "trivial" => OrderForm::Trivial { group: self.ident()? },
            "character" => {
                let group = self.ident()?;
                let g = spec.group(&group).map_err(ctx)?.clone();
                let mut values = vec![AlgNum::zero(); g.n_gens()];
                self.expect("{")?;
                loop {
                    if self.eat(b'}') {
                        break;
                    }
                    let at = self.mark();
                    let x = self.ident()?;
                    let i = g
                        .gen_index(&x)
                        .ok_or_else(|| self.err_at(at, format!("'{x}' is not a generator of {group}")))?;
                    self.expect(":")?;
                    values[i] = self.algnum()?;
                    if !self.eat(b',') {
                        self.eat(b';');
                    }
                }
                OrderForm::Character { group, values }
            }
            "pullback" | "pushforward" => {
                let hom = self.ident()?;
                let order = self.ident()?;
                if kind == "pullback" {
                    OrderForm::Pullback { hom, order }
                } else {
                    OrderForm::Pushforward { hom, order }
                }
            }
            "lexicographic" => OrderForm::Lexicographic {
                incl: self.ident()?,
                sub: self.ident()?,
                proj: self.ident()?,
                quot: self.ident()?,
            },
            "classification" => {
                let group = self.ident()?;
                let g = spec.group(&group).map_err(ctx)?.clone();
                self.expect("{")?;
                let mut kernel = Vec::new();
                let mut iota = Vec::new();
                loop {
                    if self.eat(b'}') {
                        break;
                    }
                    let at = self.mark();
                    let stmt = self.ident()?;
                    self.expect("[")?;
                    while !self.eat(b']') {
                        match stmt.as_str() {
                            "kernel" => kernel.push(self.word(&g)?),
                            "iota" => iota.push(self.algnum()?),
                            _ => return Err(self.err_at(at, format!("unexpected '{stmt}' in classification"))),
                        }
                        if !self.eat(b',') && !self.peek_is(b']') {
                            return Err(self.err("expected ',' or ']'"));
                        }
                    }
                    self.eat(b';');
                }
                OrderForm::Classification { group, kernel, iota }
            }
            "monoid" => {
                let group = self.ident()?;
                self.expect("{")?;
                let mut gens = Vec::new();
                while !self.eat(b'}') {
                    gens.push(self.uint()? as u64);
                    self.eat(b',');
                }
                OrderForm::Monoid { group, gens }
            }
            _ => return Err(self.err_at(kind_at, format!("unknown order kind '{kind}'"))),
        };
        let order = build_order(spec, &form).map_err(ctx)?.named(&name);
        Ok(OrderDecl { name, form, order })
    }

    fn experiment_decl(&mut self, spec: &SpecFile) -> Result<ExperimentDecl> {
        let name = self.ident()?;
        self.expect("{")?;
        let mut e = ExperimentDecl {
            name: name.clone(),
            target: None,
            radii: vec![4, 6, 8],
            slacks: vec![1, 2, 3],
            bound: 1,
            margin: crate::sigma::DEFAULT_MARGIN,
        };
        loop {
            if self.eat(b'}') {
                break;
            }
            let at = self.mark();
            let key = self.ident()?;
            match key.as_str() {
                "hom" => {
                    let h = self.ident()?;
                    spec.hom(&h).map_err(|x| in_decl(&name, x))?;
                    e.target = Some(Target::Hom(h));
                }
                "order" => {
                    let o = self.ident()?;
                    spec.order(&o).map_err(|x| in_decl(&name, x))?;
                    e.target = Some(Target::Order(o));
                }
                "radii" | "slacks" => {
                    let mut v = Vec::new();
                    while !self.is_word_end() {
                        v.push(self.uint()?);
                    }
                    if key == "slacks" && v.contains(&0) {
                        return Err(self.err_at(at, "slack must be at least 1"));
                    }
                    if key == "radii" {
                        e.radii = v;
                    } else {
                        e.slacks = v;
                    }
                }
                "bound" => e.bound = self.int()?,
                "margin" => e.margin = self.uint()?,
                _ => return Err(self.err_at(at, format!("unexpected '{key}' in experiment"))),
            }
            self.eat(b';');
        }
        Ok(e)
    }
}

fn build_order(spec: &SpecFile, form: &OrderForm) -> Result<Order> {
    Ok(match form {
        OrderForm::Trivial { group } => Order::trivial(spec.group(group)?),
        OrderForm::Character { group, values } => {
            Order::character(Character::new(spec.group(group)?, values.clone())?)
        }
        OrderForm::Pullback { hom, order } => Order::pullback(spec.hom(hom)?, spec.order(order)?)?,
        OrderForm::Pushforward { hom, order } => Order::pushforward(spec.hom(hom)?, spec.order(order)?)?,
        OrderForm::Lexicographic { incl, sub, proj, quot } => Order::lexicographic(
            spec.hom(incl)?,
            spec.order(sub)?,
            spec.hom(proj)?,
            spec.order(quot)?,
        )?,
        OrderForm::Classification { group, kernel, iota } => {
            let g = spec.group(group)?;
            let p = Subgroup::new(g.clone(), kernel.clone());
            Order::classification(g, &p, iota.clone())?
        }
        OrderForm::Monoid { group, gens } => Order::submonoid(spec.group(group)?, gens)?,
    })
}
