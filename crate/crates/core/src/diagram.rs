//! Link diagrams and planar-diagram (PD) codes.
//!
//! A PD code labels the edges of a diagram, which break at every crossing.
//! Coloring arcs only break at undercrossings, so building a [`LinkDiagram`]
//! fuses the two over-edges of each crossing.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PdError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("invalid JSON diagram: {0}")]
    Json(String),
    #[error("empty diagram unsupported")]
    Empty,
    #[error("edge label {label} appears {count} times, expected exactly 2")]
    LabelMultiplicity { label: u32, count: usize },
    #[error("edge labels must be exactly 1..={max}; label {missing} is missing")]
    NonContiguous { max: u32, missing: u32 },
    #[error("edge labels must be positive")]
    ZeroLabel,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("strand through edge {edge} never closes")]
    OpenStrand { edge: u32 },
    #[error("component containing edge {edge} never passes under a crossing")]
    NoUndercrossing { edge: u32 },
}

/// Crossings as 4-tuples of edge labels, counterclockwise from the incoming
/// under-edge. Positions 0 and 2 are the under strand, 1 and 3 the over strand.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PdCode {
    crossings: Vec<[u32; 4]>,
}

impl PdCode {
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self, PdError> {
        if crossings.is_empty() {
            return Err(PdError::Empty);
        }
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &label in crossings.iter().flatten() {
            if label == 0 {
                return Err(PdError::ZeroLabel);
            }
            *counts.entry(label).or_default() += 1;
        }
        if let Some((&label, &count)) = counts.iter().find(|&(_, &c)| c != 2) {
            return Err(PdError::LabelMultiplicity { label, count });
        }
        let max = 2 * crossings.len() as u32;
        if let Some(missing) = (1..=max).find(|l| !counts.contains_key(l)) {
            return Err(PdError::NonContiguous { max, missing });
        }
        Ok(Self { crossings })
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.crossings.len()
    }
}

impl<'de> Deserialize<'de> for PdCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<[u32; 4]>::deserialize(d)?;
        PdCode::new(raw).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PD[")?;
        for (i, [a, b, c, d]) in self.crossings.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "X[{a},{b},{c},{d}]")?;
        }
        write!(f, "]")
    }
}

/// Parses `PD[X[a,b,c,d],...]` text or the JSON form `{"name": ..., "pd": [[a,b,c,d],...]}`.
pub fn parse_pd(text: &str) -> Result<PdCode, PdError> {
    parse_named_pd(text).map(|(_, pd)| pd)
}

/// Like [`parse_pd`], also returning the name carried by the JSON form.
pub fn parse_named_pd(text: &str) -> Result<(Option<String>, PdCode), PdError> {
    if text.trim_start().starts_with('{') {
        #[derive(Deserialize)]
        struct Named {
            name: Option<String>,
            pd: Vec<[u32; 4]>,
        }
        let named: Named = serde_json::from_str(text).map_err(|e| PdError::Json(e.to_string()))?;
        return Ok((named.name, PdCode::new(named.pd)?));
    }
    let crossings = PdParser { text, pos: 0 }.parse()?;
    Ok((None, PdCode::new(crossings)?))
}

struct PdParser<'a> {
    text: &'a str,
    pos: usize,
}

impl PdParser<'_> {
    fn parse(mut self) -> Result<Vec<[u32; 4]>, PdError> {
        self.keyword("PD")?;
        self.expect('[')?;
        let mut crossings = Vec::new();
        if self.peek() == Some(']') {
            self.bump();
        } else {
            loop {
                crossings.push(self.crossing()?);
                match self.peek() {
                    Some(',') => self.bump(),
                    Some(']') => {
                        self.bump();
                        break;
                    }
                    _ => return Err(self.error("expected ',' or ']'")),
                }
            }
        }
        if self.peek().is_some() {
            return Err(self.error("trailing input"));
        }
        Ok(crossings)
    }

    fn crossing(&mut self) -> Result<[u32; 4], PdError> {
        self.keyword("X")?;
        self.expect('[')?;
        let mut labels = [0u32; 4];
        for (i, slot) in labels.iter_mut().enumerate() {
            if i > 0 {
                self.expect(',')?;
            }
            *slot = self.number()?;
        }
        self.expect(']')?;
        Ok(labels)
    }

    fn number(&mut self) -> Result<u32, PdError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.text[start..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        if digits == 0 {
            return Err(self.error("expected a positive integer"));
        }
        self.pos += digits;
        let value: u32 = self.text[start..self.pos]
            .parse()
            .map_err(|_| PdError::Syntax {
                pos: start,
                message: "integer too large".into(),
            })?;
        if value == 0 {
            return Err(PdError::Syntax {
                pos: start,
                message: "edge labels start at 1".into(),
            });
        }
        Ok(value)
    }

    fn keyword(&mut self, word: &str) -> Result<(), PdError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(word) {
            self.pos += word.len();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{word}'")))
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PdError> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.text[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn error(&self, message: &str) -> PdError {
        PdError::Syntax {
            pos: self.pos,
            message: message.to_string(),
        }
    }
}

/// One crossing in terms of arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Crossing {
    pub over: usize,
    pub under_in: usize,
    pub under_out: usize,
}

impl Crossing {
    /// The over arc is also one of the under arcs (a Reidemeister-I kink).
    pub fn is_kink(&self) -> bool {
        self.over == self.under_in || self.over == self.under_out
    }
}

/// Arcs and crossings of a link diagram. Arc ids are `0..arc_count()`,
/// ordered by the smallest PD edge label they contain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    arc_edges: Vec<Vec<u32>>,
    crossings: Vec<Crossing>,
    component_count: usize,
}

impl LinkDiagram {
    pub fn arc_count(&self) -> usize {
        self.arc_edges.len()
    }

    pub fn arcs(&self) -> std::ops::Range<usize> {
        0..self.arc_edges.len()
    }

    /// PD edge labels making up an arc, ascending.
    pub fn arc_edges(&self, arc: usize) -> &[u32] {
        &self.arc_edges[arc]
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn has_kink(&self) -> bool {
        self.crossings.iter().any(Crossing::is_kink)
    }
}

pub fn build_diagram(pd: &PdCode) -> Result<LinkDiagram, DiagramError> {
    let edges = pd.edge_count();
    let idx = |label: u32| label as usize - 1;

    let mut arcs = UnionFind::new(edges);
    for x in pd.crossings() {
        arcs.union(idx(x[1]), idx(x[3]));
    }

    let components = strand_components(pd)?;
    let component_count = components.iter().max().map_or(0, |&c| c + 1);
    let mut passes_under = vec![false; component_count];
    for x in pd.crossings() {
        passes_under[components[idx(x[0])]] = true;
    }
    if let Some(c) = passes_under.iter().position(|&u| !u) {
        let edge = components.iter().position(|&k| k == c).unwrap() as u32 + 1;
        return Err(DiagramError::NoUndercrossing { edge });
    }

    // edges are visited in label order, so first sight of a root is its smallest label
    let mut arc_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut arc_edges: Vec<Vec<u32>> = Vec::new();
    let mut arc_of_edge = vec![0; edges];
    for (e, slot) in arc_of_edge.iter_mut().enumerate() {
        let root = arcs.find(e);
        let next = arc_of_root.len();
        let arc = *arc_of_root.entry(root).or_insert(next);
        if arc == arc_edges.len() {
            arc_edges.push(Vec::new());
        }
        arc_edges[arc].push(e as u32 + 1);
        *slot = arc;
    }

    let crossings = pd
        .crossings()
        .iter()
        .map(|x| Crossing {
            over: arc_of_edge[idx(x[1])],
            under_in: arc_of_edge[idx(x[0])],
            under_out: arc_of_edge[idx(x[2])],
        })
        .collect();

    Ok(LinkDiagram {
        arc_edges,
        crossings,
        component_count,
    })
}

/// Component index of every edge, found by walking strands through crossings
/// (position p continues at position p + 2).
fn strand_components(pd: &PdCode) -> Result<Vec<usize>, DiagramError> {
    let edges = pd.edge_count();
    let mut occurrences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); edges];
    for (c, x) in pd.crossings().iter().enumerate() {
        for (p, &label) in x.iter().enumerate() {
            occurrences[label as usize - 1].push((c, p));
        }
    }

    let mut component = vec![usize::MAX; edges];
    let mut next_component = 0;
    for start in 0..edges {
        if component[start] != usize::MAX {
            continue;
        }
        let (mut c, mut p) = occurrences[start][1];
        let mut edge = start;
        let mut steps = 0;
        loop {
            component[edge] = next_component;
            let q = (p + 2) % 4;
            let next = pd.crossings()[c][q] as usize - 1;
            if next == start {
                break;
            }
            // leave the crossing along `next` and arrive at its other end
            let Some(&(c2, p2)) = occurrences[next].iter().find(|&&o| o != (c, q)) else {
                return Err(DiagramError::OpenStrand {
                    edge: next as u32 + 1,
                });
            };
            edge = next;
            c = c2;
            p = p2;
            steps += 1;
            if steps > edges {
                return Err(DiagramError::OpenStrand {
                    edge: start as u32 + 1,
                });
            }
        }
        next_component += 1;
    }
    Ok(component)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
