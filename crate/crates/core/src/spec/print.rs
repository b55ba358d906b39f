use std::fmt::Write as _;

use super::{Decl, OrderForm, SpecFile, Target};
use crate::group::{Element, Group, Kind};

/// Canonical text; parsing it yields the same declarations.
pub fn print_spec(spec: &SpecFile) -> String {
    let mut out = String::new();
    for d in &spec.decls {
        match d {
            Decl::Group(g) => print_group(&mut out, &g.name, &g.group),
            Decl::Hom(h) => {
                let hom = &h.hom;
                let _ = write!(out, "hom {} : {} -> {} {{", h.name, hom.dom.name(), hom.cod.name());
                for (n, img) in hom.dom.gen_names().iter().zip(&hom.images) {
                    let _ = write!(out, " {n} -> {};", hom.cod.format(img));
                }
                out.push_str(" }\n");
            }
            Decl::Order(o) => {
                let _ = write!(out, "order {} = ", o.name);
                match &o.form {
                    OrderForm::Trivial { group } => {
                        let _ = write!(out, "trivial {group}");
                    }
                    OrderForm::Character { group, values } => {
                        let g = &o.order.group;
                        let parts: Vec<String> = g
                            .gen_names()
                            .iter()
                            .zip(values)
                            .map(|(n, v)| format!("{n}: {v}"))
                            .collect();
                        let _ = write!(out, "character {group} {{ {} }}", parts.join(", "));
                    }
                    OrderForm::Pullback { hom, order } => {
                        let _ = write!(out, "pullback {hom} {order}");
                    }
                    OrderForm::Pushforward { hom, order } => {
                        let _ = write!(out, "pushforward {hom} {order}");
                    }
                    OrderForm::Lexicographic { incl, sub, proj, quot } => {
                        let _ = write!(out, "lexicographic {incl} {sub} {proj} {quot}");
                    }
                    OrderForm::Classification { group, kernel, iota } => {
                        let g = &o.order.group;
                        let k: Vec<String> = kernel.iter().map(|x| g.format(x)).collect();
                        let i: Vec<String> = iota.iter().map(|x| x.to_string()).collect();
                        let _ = write!(
                            out,
                            "classification {group} {{ kernel [{}]; iota [{}]; }}",
                            k.join(", "),
                            i.join(", ")
                        );
                    }
                    OrderForm::Monoid { group, gens } => {
                        let g: Vec<String> = gens.iter().map(|x| x.to_string()).collect();
                        let _ = write!(out, "monoid {group} {{ {} }}", g.join(" "));
                    }
                }
                out.push('\n');
            }
            Decl::Experiment(e) => {
                let _ = write!(out, "experiment {} {{", e.name);
                match &e.target {
                    Some(Target::Hom(h)) => {
                        let _ = write!(out, " hom {h};");
                    }
                    Some(Target::Order(o)) => {
                        let _ = write!(out, " order {o};");
                    }
                    None => {}
                }
                let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                let _ = writeln!(
                    out,
                    " radii {}; slacks {}; bound {}; margin {}; }}",
                    join(&e.radii),
                    join(&e.slacks),
                    e.bound,
                    e.margin
                );
            }
        }
    }
    out
}

fn print_group(out: &mut String, name: &str, g: &Group) {
    let kind = match g.kind() {
        Kind::Free => "free",
        Kind::FreeAbelian => "abelian",
        Kind::Nilpotent2 => "nilpotent2",
    };
    let _ = write!(out, "group {name} = {kind} {{ gens {};", g.gen_names().join(" "));
    if let (Kind::Nilpotent2, Some(pc)) = (g.kind(), g.pc()) {
        let mut named = vec![false; pc.m];
        let mut comms = String::new();
        for i in 0..pc.n {
            for j in i + 1..pc.n {
                let t = pc.comm(i, j);
                if t.iter().all(|&x| x == 0) {
                    continue;
                }
                for (k, &x) in t.iter().enumerate() {
                    named[k] |= x != 0;
                }
                let mut v = vec![0; pc.n];
                v.extend_from_slice(t);
                let _ = write!(
                    comms,
                    " comm {} {} = {};",
                    g.gen_names()[i],
                    g.gen_names()[j],
                    g.format(&Element::Pc(v))
                );
            }
        }
        let silent: Vec<&str> = (0..pc.m)
            .filter(|&k| !named[k])
            .map(|k| g.gen_names()[pc.n + k].as_str())
            .collect();
        if !silent.is_empty() {
            let _ = write!(out, " central {};", silent.join(" "));
        }
        out.push_str(&comms);
    }
    out.push_str(" }\n");
}
