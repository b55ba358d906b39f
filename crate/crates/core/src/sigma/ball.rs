use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{Element, GroupRef};

pub const CACHE_MAGIC: &[u8; 8] = b"POGBALL\0";
pub const CACHE_VERSION: u32 = 1;
pub const DEFAULT_BUDGET: usize = 4_000_000;
const NONE: u32 = u32::MAX;

/// Ball of the Cayley graph around the identity. Vertices are sorted by
/// distance, then by normal form, so every smaller ball is a prefix.
#[derive(Debug)]
pub struct CayleyBall {
    pub group: GroupRef,
    pub gens: Vec<Element>,
    pub radius: usize,
    pub vertices: Vec<Element>,
    pub dist: Vec<u32>,
    /// `layer_end[r]` is the number of vertices within distance `r`.
    layer_end: Vec<usize>,
    /// `neighbors[v * gens.len() + s]` is the index of `v * gens[s]`.
    neighbors: Vec<u32>,
    index: HashMap<Element, u32>,
}

/// `gens` followed by the inverses not already present; identities dropped.
pub fn symmetric_closure(group: &GroupRef, gens: &[Element]) -> Vec<Element> {
    let mut out: Vec<Element> = Vec::new();
    for g in gens.iter().cloned().chain(gens.iter().map(|g| group.inv(g))) {
        if !group.is_identity(&g) && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

impl CayleyBall {
    pub fn build(group: &GroupRef, gens: &[Element], radius: usize, budget: usize) -> Result<Self> {
        for g in gens {
            group.check(g)?;
        }
        let gens = symmetric_closure(group, gens);
        let id = group.identity();
        let mut vertices = vec![id.clone()];
        let mut dist = vec![0u32];
        let mut index = HashMap::new();
        index.insert(id, 0u32);
        let mut layer_end = vec![1usize];
        let mut start = 0;
        for d in 1..=radius {
            let layer = &vertices[start..];
            let mut next: Vec<Element> = layer
                .par_iter()
                .flat_map_iter(|x| gens.iter().map(move |s| group.mul(x, s)))
                .filter(|y| !index.contains_key(y))
                .collect();
            next.par_sort_unstable();
            next.dedup();
            if vertices.len() + next.len() > budget {
                return Err(Error::ResourceLimit(format!(
                    "ball of radius {radius} exceeds {budget} vertices at distance {d}"
                )));
            }
            start = vertices.len();
            for y in next {
                index.insert(y.clone(), vertices.len() as u32);
                vertices.push(y);
                dist.push(d as u32);
            }
            layer_end.push(vertices.len());
        }
        Ok(Self::finish(group.clone(), gens, radius, vertices, dist, layer_end, index))
    }

    fn finish(
        group: GroupRef,
        gens: Vec<Element>,
        radius: usize,
        vertices: Vec<Element>,
        dist: Vec<u32>,
        layer_end: Vec<usize>,
        index: HashMap<Element, u32>,
    ) -> Self {
        let neighbors: Vec<u32> = vertices
            .par_iter()
            .flat_map_iter(|x| {
                gens.iter()
                    .map(|s| index.get(&group.mul(x, s)).copied().unwrap_or(NONE))
                    .collect::<Vec<_>>()
            })
            .collect();
        CayleyBall {
            group,
            gens,
            radius,
            vertices,
            dist,
            layer_end,
            neighbors,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Number of vertices within distance `r`.
    pub fn count_within(&self, r: usize) -> usize {
        self.layer_end[r.min(self.radius)]
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let k = self.gens.len();
        self.neighbors[v * k..(v + 1) * k]
            .iter()
            .filter(|&&u| u != NONE)
            .map(|&u| u as usize)
    }

    /// Hex digest identifying (group, generating set, radius).
    pub fn cache_key(group: &GroupRef, gens: &[Element], radius: usize) -> String {
        let mut h = Sha256::new();
        h.update(group.canonical_text().as_bytes());
        for g in symmetric_closure(group, gens) {
            h.update(b"|");
            h.update(group.format(&g).as_bytes());
        }
        h.update(format!("|R={radius}").as_bytes());
        hex::encode(h.finalize())
    }

    /// Build, reusing a cached copy under `dir` when present.
    pub fn cached(
        group: &GroupRef,
        gens: &[Element],
        radius: usize,
        budget: usize,
        dir: Option<&Path>,
    ) -> Result<Self> {
        let Some(dir) = dir else {
            return Self::build(group, gens, radius, budget);
        };
        let path = dir.join(format!("{}.ball", Self::cache_key(group, gens, radius)));
        if let Ok(b) = Self::load(group, gens, radius, &path) {
            return Ok(b);
        }
        let b = Self::build(group, gens, radius, budget)?;
        b.store(dir, &path)?;
        Ok(b)
    }

    fn store(&self, dir: &Path, path: &PathBuf) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut buf = Vec::new();
        buf.extend_from_slice(CACHE_MAGIC);
        buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        buf.extend_from_slice(&(self.radius as u32).to_le_bytes());
        buf.extend_from_slice(&(self.vertices.len() as u64).to_le_bytes());
        for (v, d) in self.vertices.iter().zip(&self.dist) {
            buf.extend_from_slice(&d.to_le_bytes());
            match v {
                Element::Pc(x) => {
                    buf.push(0);
                    buf.extend_from_slice(&(x.len() as u32).to_le_bytes());
                    for e in x {
                        buf.extend_from_slice(&e.to_le_bytes());
                    }
                }
                Element::Word(w) => {
                    buf.push(1);
                    buf.extend_from_slice(&(w.len() as u32).to_le_bytes());
                    for l in w {
                        buf.extend_from_slice(&l.to_le_bytes());
                    }
                }
            }
        }
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(&buf)?;
        tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }

    fn load(group: &GroupRef, gens: &[Element], radius: usize, path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        let mut r = Reader { b: &bytes, at: 0 };
        let bad = || Error::Io(format!("corrupt ball cache {}", path.display()));
        if r.take(8).ok_or_else(bad)? != CACHE_MAGIC {
            return Err(bad());
        }
        if r.u32().ok_or_else(bad)? != CACHE_VERSION || r.u32().ok_or_else(bad)? as usize != radius {
            return Err(bad());
        }
        let count = r.u64().ok_or_else(bad)? as usize;
        let mut vertices = Vec::with_capacity(count);
        let mut dist = Vec::with_capacity(count);
        let mut index = HashMap::with_capacity(count);
        let mut layer_end = vec![0usize; radius + 1];
        for i in 0..count {
            let d = r.u32().ok_or_else(bad)?;
            let tag = r.take(1).ok_or_else(bad)?[0];
            let len = r.u32().ok_or_else(bad)? as usize;
            let v = match tag {
                0 => Element::Pc((0..len).map(|_| r.i64()).collect::<Option<_>>().ok_or_else(bad)?),
                1 => Element::Word((0..len).map(|_| r.i32()).collect::<Option<_>>().ok_or_else(bad)?),
                _ => return Err(bad()),
            };
            group.check(&v).map_err(|_| bad())?;
            if d as usize > radius || dist.last().is_some_and(|&p| p > d) {
                return Err(bad());
            }
            for e in &mut layer_end[d as usize..] {
                *e = i + 1;
            }
            index.insert(v.clone(), i as u32);
            vertices.push(v);
            dist.push(d);
        }
        if r.at != bytes.len() {
            return Err(bad());
        }
        let gens = symmetric_closure(group, gens);
        Ok(Self::finish(group.clone(), gens, radius, vertices, dist, layer_end, index))
    }
}

struct Reader<'a> {
    b: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let s = self.b.get(self.at..self.at + n)?;
        self.at += n;
        Some(s)
    }
    fn u32(&mut self) -> Option<u32> {
        Some(u32::from_le_bytes(self.take(4)?.try_into().ok()?))
    }
    fn i32(&mut self) -> Option<i32> {
        Some(i32::from_le_bytes(self.take(4)?.try_into().ok()?))
    }
    fn u64(&mut self) -> Option<u64> {
        Some(u64::from_le_bytes(self.take(8)?.try_into().ok()?))
    }
    fn i64(&mut self) -> Option<i64> {
        Some(i64::from_le_bytes(self.take(8)?.try_into().ok()?))
    }
}
