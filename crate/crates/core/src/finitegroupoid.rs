//! Finite discrete groupoids and their convolution algebras.
//!
//! Composition is written right to left: `αβ` is defined when
//! `src(α) = tgt(β)` and means "first `β`, then `α`". Every object `x`
//! carries an implicit identity arrow named `1_x`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::Rng;

use crate::equivcore::{self, GroupoidFamily, RightModule, SheafModuleFamily};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{FieldScalar, Scalar};

pub type ObjectId = usize;
pub type ArrowId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
struct ArrowData {
    name: String,
    src: ObjectId,
    tgt: ObjectId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<ArrowData>,
    identity: Vec<ArrowId>,
    inverse: Vec<ArrowId>,
    table: Vec<Option<ArrowId>>,
}

impl FiniteGroupoid {
    /// Builds a groupoid from its non-identity arrows and a composition rule.
    ///
    /// `compose(a, b)` is consulted for every composable pair of arrows
    /// (identities included, which are numbered first: `1_x` has id `x`)
    /// and must return the name of `a∘b`.
    pub fn from_fn(
        objects: &[&str],
        arrows: &[(&str, &str, &str)],
        mut compose: impl FnMut(&str, &str) -> String,
    ) -> Result<Self> {
        let (objects, data) = Self::declare(
            objects.iter().map(|s| s.to_string()).collect(),
            arrows
                .iter()
                .map(|(n, s, t)| (n.to_string(), s.to_string(), t.to_string()))
                .collect(),
        )?;
        let index: HashMap<String, ArrowId> = data.iter().enumerate().map(|(i, a)| (a.name.clone(), i)).collect();
        let n = data.len();
        let mut table = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                if data[a].src == data[b].tgt {
                    let name = compose(&data[a].name, &data[b].name);
                    let c = *index
                        .get(&name)
                        .ok_or_else(|| Error::invalid(format!("composite `{name}` is not an arrow")))?;
                    table[a * n + b] = Some(c);
                }
            }
        }
        Self::finish(objects, data, table).map_err(|(_, m)| Error::invalid(m))
    }

    fn declare(objects: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<(Vec<String>, Vec<ArrowData>)> {
        let mut seen = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if seen.insert(o.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate object `{o}`")));
            }
        }
        let mut data: Vec<ArrowData> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| ArrowData {
                name: format!("1_{o}"),
                src: i,
                tgt: i,
            })
            .collect();
        for (name, s, t) in arrows {
            if data.iter().any(|a| a.name == name) {
                return Err(Error::invalid(format!("duplicate arrow `{name}`")));
            }
            let src = *seen.get(&s).ok_or_else(|| Error::invalid(format!("unknown object `{s}`")))?;
            let tgt = *seen.get(&t).ok_or_else(|| Error::invalid(format!("unknown object `{t}`")))?;
            data.push(ArrowData { name, src, tgt });
        }
        Ok((objects, data))
    }

    /// Validates the table. Errors carry the offending arrow pair when there is one.
    fn finish(
        objects: Vec<String>,
        arrows: Vec<ArrowData>,
        table: Vec<Option<ArrowId>>,
    ) -> std::result::Result<Self, (Option<(ArrowId, ArrowId)>, String)> {
        let n = arrows.len();
        let name = |a: ArrowId| arrows[a].name.clone();
        for a in 0..n {
            for b in 0..n {
                let composable = arrows[a].src == arrows[b].tgt;
                match table[a * n + b] {
                    None if composable => {
                        return Err((Some((a, b)), format!("missing composite {}∘{}", name(a), name(b))));
                    }
                    Some(_) if !composable => {
                        return Err((Some((a, b)), format!("{}∘{} is not composable", name(a), name(b))));
                    }
                    Some(c) if (arrows[c].src, arrows[c].tgt) != (arrows[b].src, arrows[a].tgt) => {
                        return Err((Some((a, b)), format!("{}∘{} has the wrong endpoints", name(a), name(b))));
                    }
                    _ => {}
                }
            }
        }
        let identity: Vec<ArrowId> = (0..objects.len()).collect();
        for a in 0..n {
            let (s, t) = (arrows[a].src, arrows[a].tgt);
            if table[identity[t] * n + a] != Some(a) || table[a * n + identity[s]] != Some(a) {
                return Err((None, format!("identities do not fix `{}`", name(a))));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let Some(ab) = table[a * n + b] else { continue };
                for c in 0..n {
                    let Some(bc) = table[b * n + c] else { continue };
                    if table[ab * n + c] != table[a * n + bc] {
                        return Err((
                            Some((a, b)),
                            format!("composition is not associative on ({}, {}, {})", name(a), name(b), name(c)),
                        ));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let (s, t) = (arrows[a].src, arrows[a].tgt);
            let inv = (0..n).find(|&b| table[a * n + b] == Some(identity[t]) && table[b * n + a] == Some(identity[s]));
            match inv {
                Some(b) => inverse.push(b),
                None => return Err((None, format!("`{}` has no inverse", name(a)))),
            }
        }
        Ok(FiniteGroupoid {
            objects,
            arrows,
            identity,
            inverse,
            table,
        })
    }

    /// Parses the text format:
    ///
    /// ```text
    /// object x
    /// arrow g x x
    /// compose g g 1_x
    /// ```
    ///
    /// `compose a b c` declares `a∘b = c`. Composites with an identity are
    /// implicit; every other composable pair must be listed exactly once.
    pub fn parse(text: &str) -> Result<Self> {
        let mut objects: Vec<String> = Vec::new();
        let mut arrows: Vec<(String, String, String)> = Vec::new();
        let mut arrow_lines: Vec<usize> = Vec::new();
        let mut composites: Vec<(usize, [(String, usize); 3])> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let words: Vec<(usize, &str)> = words_with_columns(content);
            let Some(&(col, keyword)) = words.first() else { continue };
            let arity = match keyword {
                "object" => 1,
                "arrow" => 3,
                "compose" => 3,
                _ => return Err(Error::parse(line, col, format!("unknown keyword `{keyword}`"))),
            };
            if words.len() != arity + 1 {
                let col = words.get(arity + 1).map_or(raw.len() + 1, |w| w.0);
                return Err(Error::parse(line, col, format!("`{keyword}` takes {arity} argument(s)")));
            }
            for &(c, w) in &words[1..] {
                if !w.chars().all(|ch| ch.is_alphanumeric() || ch == '_' || ch == '\'') {
                    return Err(Error::parse(line, c, format!("invalid name `{w}`")));
                }
            }
            match keyword {
                "object" => {
                    let (c, name) = words[1];
                    if objects.iter().any(|o| o == name) {
                        return Err(Error::parse(line, c, format!("duplicate object `{name}`")));
                    }
                    objects.push(name.to_string());
                }
                "arrow" => {
                    let (c, name) = words[1];
                    if name.starts_with("1_") {
                        return Err(Error::parse(line, c, "names starting with `1_` are reserved for identities"));
                    }
                    if arrows.iter().any(|a| a.0 == name) {
                        return Err(Error::parse(line, c, format!("duplicate arrow `{name}`")));
                    }
                    for &(c, o) in &words[2..] {
                        if !objects.iter().any(|x| x == o) {
                            return Err(Error::parse(line, c, format!("undeclared object `{o}`")));
                        }
                    }
                    arrows.push((name.to_string(), words[2].1.to_string(), words[3].1.to_string()));
                    arrow_lines.push(line);
                }
                _ => {
                    let entry = [
                        (words[1].1.to_string(), words[1].0),
                        (words[2].1.to_string(), words[2].0),
                        (words[3].1.to_string(), words[3].0),
                    ];
                    composites.push((line, entry));
                }
            }
        }
        let (objects, data) = Self::declare(objects, arrows).map_err(|e| Error::parse(1, 1, e.to_string()))?;
        let index: HashMap<&str, ArrowId> = data.iter().enumerate().map(|(i, a)| (a.name.as_str(), i)).collect();
        let n = data.len();
        let mut table = vec![None; n * n];
        for x in 0..objects.len() {
            for a in 0..n {
                if data[a].tgt == x {
                    table[x * n + a] = Some(a);
                }
                if data[a].src == x {
                    table[a * n + x] = Some(a);
                }
            }
        }
        let mut entry_line: HashMap<(ArrowId, ArrowId), usize> = HashMap::new();
        for (line, entry) in &composites {
            let mut ids = [0; 3];
            for (k, (name, col)) in entry.iter().enumerate() {
                ids[k] = *index
                    .get(name.as_str())
                    .ok_or_else(|| Error::parse(*line, *col, format!("undeclared arrow `{name}`")))?;
            }
            let [a, b, c] = ids;
            if data[a].src != data[b].tgt {
                return Err(Error::parse(*line, entry[0].1, format!("{}∘{} is not composable", entry[0].0, entry[1].0)));
            }
            let slot = &mut table[a * n + b];
            if a < objects.len() || b < objects.len() {
                if *slot != Some(c) {
                    return Err(Error::parse(*line, entry[2].1, "composite with an identity must be the other arrow"));
                }
                continue;
            }
            if entry_line.insert((a, b), *line).is_some() {
                return Err(Error::parse(*line, entry[0].1, format!("composite {}∘{} given twice", entry[0].0, entry[1].0)));
            }
            *slot = Some(c);
        }
        let end = text.lines().count() + 1;
        Self::finish(objects, data, table).map_err(|(pair, message)| {
            let line = match pair {
                Some((a, b)) => entry_line
                    .get(&(a, b))
                    .copied()
                    .or_else(|| a.checked_sub(n - arrow_lines.len()).map(|k| arrow_lines[k]))
                    .unwrap_or(end),
                None => end,
            };
            Error::parse(line, 1, message)
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for o in &self.objects {
            let _ = writeln!(out, "object {o}");
        }
        for a in self.objects.len()..self.arrows.len() {
            let d = &self.arrows[a];
            let _ = writeln!(out, "arrow {} {} {}", d.name, self.objects[d.src], self.objects[d.tgt]);
        }
        for a in self.objects.len()..self.arrows.len() {
            for b in self.objects.len()..self.arrows.len() {
                if let Some(c) = self.compose(a, b) {
                    let _ = writeln!(out, "compose {} {} {}", self.arrows[a].name, self.arrows[b].name, self.arrows[c].name);
                }
            }
        }
        out
    }

    /// `Z/n` as a one-object groupoid with arrows `g^0 = 1_x, g1, …, g(n-1)`.
    pub fn cyclic(n: usize) -> Self {
        let names: Vec<String> = (1..n).map(|k| format!("g{k}")).collect();
        let arrows: Vec<(&str, &str, &str)> = names.iter().map(|s| (s.as_str(), "x", "x")).collect();
        let power = |s: &str| if s == "1_x" { 0 } else { s[1..].parse::<usize>().unwrap() };
        Self::from_fn(&["x"], &arrows, |a, b| match (power(a) + power(b)) % n {
            0 => "1_x".to_string(),
            k => format!("g{k}"),
        })
        .expect("cyclic group")
    }

    /// The pair groupoid on `n` objects: one arrow `i→j` for every pair.
    pub fn pair(n: usize) -> Self {
        let objects: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let mut names = Vec::new();
        for j in 1..=n {
            for i in 1..=n {
                if i != j {
                    names.push((format!("e{j}{i}"), i.to_string(), j.to_string()));
                }
            }
        }
        let objs: Vec<&str> = objects.iter().map(String::as_str).collect();
        let arrows: Vec<(&str, &str, &str)> =
            names.iter().map(|(a, s, t)| (a.as_str(), s.as_str(), t.as_str())).collect();
        let ends = |a: &str| -> (String, String) {
            match a.strip_prefix("1_") {
                Some(o) => (o.to_string(), o.to_string()),
                None => (a[2..3].to_string(), a[1..2].to_string()),
            }
        };
        Self::from_fn(&objs, &arrows, |a, b| {
            let (s, _) = ends(b);
            let (_, t) = ends(a);
            if s == t {
                format!("1_{s}")
            } else {
                format!("e{t}{s}")
            }
        })
        .expect("pair groupoid")
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_name(&self, x: ObjectId) -> &str {
        &self.objects[x]
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrows[a].name
    }

    pub fn object(&self, name: &str) -> Option<ObjectId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn src(&self, a: ArrowId) -> ObjectId {
        self.arrows[a].src
    }

    pub fn tgt(&self, a: ArrowId) -> ObjectId {
        self.arrows[a].tgt
    }

    pub fn identity(&self, x: ObjectId) -> ArrowId {
        self.identity[x]
    }

    pub fn is_identity(&self, a: ArrowId) -> bool {
        a < self.objects.len()
    }

    pub fn inverse(&self, a: ArrowId) -> ArrowId {
        self.inverse[a]
    }

    /// `a∘b`, when `src(a) = tgt(b)`.
    pub fn compose(&self, a: ArrowId, b: ArrowId) -> Option<ArrowId> {
        self.table[a * self.arrows.len() + b]
    }

    pub fn arrows_between(&self, src: ObjectId, tgt: ObjectId) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].src == src && self.arrows[a].tgt == tgt)
    }
}

fn words_with_columns(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(b)) => {
                out.push((s[..b].chars().count() + 1, &s[b..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((s[..b].chars().count() + 1, &s[b..]));
    }
    out
}

/// A function on arrows, stored without zero values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GpdElement<S> {
    coeffs: BTreeMap<ArrowId, S>,
}

impl<S: Scalar> GpdElement<S> {
    pub fn zero() -> Self {
        GpdElement { coeffs: BTreeMap::new() }
    }

    pub fn delta(a: ArrowId) -> Self {
        Self::from_terms([(a, S::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ArrowId, S)>) -> Self {
        let mut coeffs: BTreeMap<ArrowId, S> = BTreeMap::new();
        for (a, c) in terms {
            let e = coeffs.entry(a).or_insert_with(S::zero);
            *e = e.clone() + c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        GpdElement { coeffs }
    }

    /// `Σ_x δ_{1_x}`.
    pub fn unit(g: &FiniteGroupoid) -> Self {
        Self::from_terms((0..g.object_count()).map(|x| (g.identity(x), S::one())))
    }

    pub fn random<R: Rng + ?Sized>(g: &FiniteGroupoid, rng: &mut R, density: f64) -> Self {
        Self::from_terms((0..g.arrow_count()).filter_map(|a| rng.gen_bool(density).then(|| (a, S::sample(rng)))))
    }

    pub fn terms(&self) -> impl Iterator<Item = (ArrowId, &S)> {
        self.coeffs.iter().map(|(a, c)| (*a, c))
    }

    pub fn coefficient(&self, a: ArrowId) -> S {
        self.coeffs.get(&a).cloned().unwrap_or_else(S::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms().chain(other.terms()).map(|(a, c)| (a, c.clone())))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(self.terms().map(|(a, x)| (a, c.clone() * x.clone())))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn display(&self, g: &FiniteGroupoid) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(a, c)| {
                if c.is_one() {
                    g.arrow_name(a).to_string()
                } else {
                    format!("{c} * {}", g.arrow_name(a))
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Parses `c * g + h + …`; a bare name has coefficient 1.
    pub fn parse(g: &FiniteGroupoid, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "0" {
            return Ok(Self::zero());
        }
        let mut terms = Vec::new();
        let mut offset = 0;
        for part in text.split(" + ") {
            let column = offset + 1 + (part.len() - part.trim_start().len());
            offset += part.len() + 3;
            let part = part.trim();
            let (coef, name) = match part.rsplit_once(" * ") {
                Some((c, n)) => (S::parse(c.trim()).map_err(|_| Error::parse(1, column, format!("bad coefficient `{c}`")))?, n.trim()),
                None => (S::one(), part),
            };
            let a = g
                .arrow(name)
                .ok_or_else(|| Error::parse(1, column, format!("unknown arrow `{name}`")))?;
            terms.push((a, coef));
        }
        Ok(Self::from_terms(terms))
    }
}

/// `(f★h)(γ) = Σ_{γ = αβ} f(α) h(β)`.
pub fn gpd_convolve<S: Scalar>(g: &FiniteGroupoid, f: &GpdElement<S>, h: &GpdElement<S>) -> GpdElement<S> {
    let mut out = Vec::new();
    for (a, x) in f.terms() {
        for (b, y) in h.terms() {
            if let Some(c) = g.compose(a, b) {
                out.push((c, x.clone() * y.clone()));
            }
        }
    }
    GpdElement::from_terms(out)
}

/// `f*(γ) = f(γ⁻¹)*`.
pub fn gpd_star<S: Scalar>(g: &FiniteGroupoid, f: &GpdElement<S>) -> GpdElement<S> {
    GpdElement::from_terms(f.terms().map(|(a, c)| (g.inverse(a), c.star())))
}

/// One connected component: the objects reachable from `base`, a chosen
/// arrow `base → y` for each of them, and the isotropy group at `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub base: ObjectId,
    pub objects: Vec<ObjectId>,
    pub transports: Vec<ArrowId>,
    pub isotropy: Vec<ArrowId>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.objects.len()
    }

    pub fn position(&self, x: ObjectId) -> Option<usize> {
        self.objects.iter().position(|&y| y == x)
    }
}

/// Orbits in order of their least object, with the least object as base.
pub fn decompose(g: &FiniteGroupoid) -> Vec<Orbit> {
    let mut seen = vec![false; g.object_count()];
    let mut out = Vec::new();
    for base in 0..g.object_count() {
        if seen[base] {
            continue;
        }
        let mut objects = Vec::new();
        let mut transports = Vec::new();
        for y in 0..g.object_count() {
            if let Some(t) = g.arrows_between(base, y).next() {
                seen[y] = true;
                objects.push(y);
                transports.push(t);
            }
        }
        let isotropy = g.arrows_between(base, base).collect();
        out.push(Orbit {
            base,
            objects,
            transports,
            isotropy,
        });
    }
    out
}

/// A representation: `ρ(γ): F(src γ) → F(tgt γ)` with `ρ(γδ) = ρ(γ)ρ(δ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantSheaf<S: Scalar> {
    ranks: Vec<usize>,
    maps: Vec<Matrix<S>>,
}

impl<S: Scalar> EquivariantSheaf<S> {
    pub fn new(g: &FiniteGroupoid, ranks: Vec<usize>, maps: Vec<Matrix<S>>) -> Result<Self> {
        if ranks.len() != g.object_count() || maps.len() != g.arrow_count() {
            return Err(Error::invalid("sheaf data does not match the groupoid"));
        }
        for a in 0..g.arrow_count() {
            if (maps[a].rows(), maps[a].cols()) != (ranks[g.tgt(a)], ranks[g.src(a)]) {
                return Err(Error::invalid(format!("map of `{}` has the wrong shape", g.arrow_name(a))));
            }
        }
        for x in 0..g.object_count() {
            if maps[g.identity(x)] != Matrix::identity(ranks[x]) {
                return Err(Error::invalid(format!("identity at `{}` does not act trivially", g.object_name(x))));
            }
        }
        for a in 0..g.arrow_count() {
            for b in 0..g.arrow_count() {
                if let Some(c) = g.compose(a, b) {
                    if maps[c] != maps[a].mul(&maps[b]) {
                        return Err(Error::invalid(format!(
                            "action is not functorial on {}∘{}",
                            g.arrow_name(a),
                            g.arrow_name(b)
                        )));
                    }
                }
            }
        }
        Ok(EquivariantSheaf { ranks, maps })
    }

    pub fn zero(g: &FiniteGroupoid) -> Self {
        EquivariantSheaf {
            ranks: vec![0; g.object_count()],
            maps: vec![Matrix::zeros(0, 0); g.arrow_count()],
        }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn map(&self, a: ArrowId) -> &Matrix<S> {
        &self.maps[a]
    }

    /// Induced from a representation of each isotropy group: the fibre at `y`
    /// is identified with the fibre at the base through the transport `t_y`,
    /// and `γ: x → y` acts by `σ(t_y⁻¹ γ t_x)`.
    ///
    /// `isotropy_rep(orbit, h)` gives the matrix of the isotropy arrow `h`.
    pub fn induced(
        g: &FiniteGroupoid,
        ranks_at_base: &[usize],
        mut isotropy_rep: impl FnMut(usize, ArrowId) -> Matrix<S>,
    ) -> Result<Self> {
        let orbits = decompose(g);
        let mut ranks = vec![0; g.object_count()];
        let mut home = vec![(0, 0); g.object_count()];
        for (i, o) in orbits.iter().enumerate() {
            for (k, &y) in o.objects.iter().enumerate() {
                ranks[y] = ranks_at_base[i];
                home[y] = (i, k);
            }
        }
        let maps = (0..g.arrow_count())
            .map(|a| {
                let (i, kx) = home[g.src(a)];
                let (_, ky) = home[g.tgt(a)];
                let o = &orbits[i];
                let h = g
                    .compose(g.inverse(o.transports[ky]), g.compose(a, o.transports[kx]).unwrap())
                    .unwrap();
                isotropy_rep(i, h)
            })
            .collect();
        Self::new(g, ranks, maps)
    }

    /// A random representation built from random isotropy representations.
    ///
    /// Each isotropy group acts on its fibre through a random invertible
    /// change of basis of a sum of permutation-like pieces: the regular
    /// representation, the trivial one, and sign-like characters of order two
    /// elements all appear.
    pub fn random<R: Rng + ?Sized>(g: &FiniteGroupoid, rng: &mut R, max_rank: usize) -> Self
    where
        S: FieldScalar,
    {
        let orbits = decompose(g);
        let mut reps: Vec<(usize, Vec<Matrix<S>>)> = Vec::new();
        for o in &orbits {
            let group = &o.isotropy;
            // permutation representations on cosets of random cyclic subgroups
            let mut blocks: Vec<Vec<Matrix<S>>> = Vec::new();
            let mut total = 0;
            let budget = rng.gen_range(0..=max_rank);
            let mut attempts = 0;
            while total < budget && attempts < 8 {
                attempts += 1;
                let gen = group[rng.gen_range(0..group.len())];
                let sub = cyclic_subgroup(g, gen);
                let cosets = left_cosets(g, group, &sub);
                if total + cosets.len() > budget {
                    continue;
                }
                total += cosets.len();
                blocks.push(group.iter().map(|&h| coset_permutation::<S>(g, &cosets, h)).collect());
            }
            let change = Matrix::<S>::random_unimodular(total, rng);
            let inverse = change.inverse().expect("unimodular");
            let mats = (0..group.len())
                .map(|k| {
                    let diag = Matrix::block_diagonal(&blocks.iter().map(|b| b[k].clone()).collect::<Vec<_>>());
                    inverse.mul(&diag).mul(&change)
                })
                .collect();
            reps.push((total, mats));
        }
        let ranks: Vec<usize> = reps.iter().map(|r| r.0).collect();
        Self::induced(g, &ranks, |i, h| {
            let k = orbits[i].isotropy.iter().position(|&x| x == h).unwrap();
            reps[i].1[k].clone()
        })
        .expect("induced representation")
    }
}

fn cyclic_subgroup(g: &FiniteGroupoid, a: ArrowId) -> Vec<ArrowId> {
    let mut out = vec![g.identity(g.src(a))];
    let mut x = a;
    while !out.contains(&x) {
        out.push(x);
        x = g.compose(a, x).unwrap();
    }
    out.sort_unstable();
    out
}

fn left_cosets(g: &FiniteGroupoid, group: &[ArrowId], sub: &[ArrowId]) -> Vec<Vec<ArrowId>> {
    let mut out: Vec<Vec<ArrowId>> = Vec::new();
    for &h in group {
        let mut coset: Vec<ArrowId> = sub.iter().map(|&k| g.compose(h, k).unwrap()).collect();
        coset.sort_unstable();
        if !out.contains(&coset) {
            out.push(coset);
        }
    }
    out
}

fn coset_permutation<S: Scalar>(g: &FiniteGroupoid, cosets: &[Vec<ArrowId>], h: ArrowId) -> Matrix<S> {
    let n = cosets.len();
    let mut m = Matrix::zeros(n, n);
    for (j, c) in cosets.iter().enumerate() {
        let image = g.compose(h, c[0]).unwrap();
        let i = cosets.iter().position(|d| d.contains(&image)).unwrap();
        m[(i, j)] = S::one();
    }
    m
}

/// `S(F) = ⊕_x F(x)` with `δ_γ` acting by `ρ(γ⁻¹)`.
pub fn functor_s<F: FieldScalar>(g: &FiniteGroupoid, sheaf: &EquivariantSheaf<F>) -> RightModule<F> {
    GroupoidFamily { groupoid: g }.build_s(sheaf)
}

/// `T(M)(x) = M·δ_{1_x}`; rejects degenerate modules with a witness vector.
pub fn functor_t<F: FieldScalar>(g: &FiniteGroupoid, module: &RightModule<F>) -> Result<EquivariantSheaf<F>> {
    Ok(equivcore::functor_t(&GroupoidFamily { groupoid: g }, module)?.sheaf)
}

/// Matrix of left convolution by `f` on the basis of arrows: `L(f) δ_β = f★δ_β`.
pub fn left_regular<S: Scalar>(g: &FiniteGroupoid, f: &GpdElement<S>) -> Matrix<S> {
    let n = g.arrow_count();
    let mut m: Matrix<S> = Matrix::zeros(n, n);
    for (a, c) in f.terms() {
        for b in 0..n {
            if let Some(ab) = g.compose(a, b) {
                m[(ab, b)] = m[(ab, b)].clone() + c.clone();
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn cyclic_group_squares() {
        let g = FiniteGroupoid::cyclic(2);
        let x = g.arrow("g1").unwrap();
        let f = GpdElement::<Q>::delta(x);
        assert_eq!(gpd_convolve(&g, &f, &f), GpdElement::delta(g.identity(0)));
    }

    #[test]
    fn pair_groupoid_matrix_units() {
        let g = FiniteGroupoid::pair(2);
        let e12 = GpdElement::<Q>::delta(g.arrow("e12").unwrap());
        let e21 = GpdElement::<Q>::delta(g.arrow("e21").unwrap());
        let e11 = GpdElement::<Q>::delta(g.arrow("1_1").unwrap());
        assert_eq!(gpd_convolve(&g, &e12, &e21), e11);
        assert!(gpd_convolve(&g, &e12, &e12).is_zero());
    }

    #[test]
    fn parse_and_print() {
        let text = "object x\narrow g x x\ncompose g g 1_x\n";
        let g = FiniteGroupoid::parse(text).unwrap();
        assert_eq!(g.to_text(), text);
        assert_eq!(g.arrow_count(), 2);
        let f = GpdElement::<Q>::parse(&g, "1_x + -1/2 * g").unwrap();
        assert_eq!(f.display(&g), "1_x + -1/2 * g");
    }

    #[test]
    fn parse_errors_have_positions() {
        let e = FiniteGroupoid::parse("object x\narrow g x y\n").unwrap_err();
        assert_eq!(e, Error::parse(2, 11, "undeclared object `y`"));
        let e = FiniteGroupoid::parse("object x\narrow g x x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        let e = FiniteGroupoid::parse("object x\narrow g x x\ncompose g g g\n").unwrap_err();
        assert!(e.is_parse(), "{e:?}");
        let e = FiniteGroupoid::parse("object x\nmorphism g x x\n").unwrap_err();
        assert_eq!(e, Error::parse(2, 1, "unknown keyword `morphism`"));
    }

    #[test]
    fn decompose_examples() {
        let pair = decompose(&FiniteGroupoid::pair(2));
        assert_eq!(pair.len(), 1);
        assert_eq!((pair[0].size(), pair[0].isotropy.len()), (2, 1));
        let text = "object x\nobject y\narrow g x x\ncompose g g 1_x\n";
        let g = FiniteGroupoid::parse(text).unwrap();
        let orbits = decompose(&g);
        assert_eq!(orbits.iter().map(|o| (o.size(), o.isotropy.len())).collect::<Vec<_>>(), vec![(1, 2), (1, 1)]);
        let empty = FiniteGroupoid::from_fn(&[], &[], |_, _| unreachable!()).unwrap();
        assert!(decompose(&empty).is_empty());
    }
}
