//! Geometric input: a finite atlas of chart rings with divisor and transition
//! data, validated exactly.
//!
//! Tuples are strictly increasing lists of chart indices. Every face of a
//! declared overlap must itself be declared, restriction maps are given for
//! faces of codimension one and composed for the rest.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::parse::parse_poly;
use crate::poly::{LocPoly, Ring, RingMap, RingRef};

pub type Tuple = Vec<usize>;

#[derive(Clone, Debug, Default)]
pub struct ChartSpec {
    pub vars: Vec<String>,
    pub inverted: Vec<String>,
    pub x: String,
    pub f: String,
    pub g: String,
}

#[derive(Clone, Debug, Default)]
pub struct MapSpec {
    pub from: Tuple,
    /// Image of each source variable, by name.
    pub images: Vec<(String, String)>,
}

#[derive(Clone, Debug, Default)]
pub struct OverlapSpec {
    pub tuple: Tuple,
    pub vars: Vec<String>,
    pub inverted: Vec<String>,
    pub maps: Vec<MapSpec>,
}

/// `u_ij` for `i < j`, an element of the ring of `U_ij` with `u_ij x_i = x_j`.
#[derive(Clone, Debug, Default)]
pub struct UnitSpec {
    pub i: usize,
    pub j: usize,
    pub value: String,
}

/// Unvalidated scene description, everything as text.
#[derive(Clone, Debug, Default)]
pub struct SceneSpec {
    pub name: String,
    pub charts: Vec<ChartSpec>,
    pub overlaps: Vec<OverlapSpec>,
    pub units: Vec<UnitSpec>,
    pub trunc: usize,
    pub window: usize,
    /// Grading weights by variable name; unlisted variables weigh 1.
    pub weights: Vec<(String, i32)>,
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub ring: RingRef,
    pub x: LocPoly,
    pub f: LocPoly,
    pub g: LocPoly,
}

/// How the lead divisor equation looks on a tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lead {
    /// `x = 1`: the divisor misses the open set.
    One,
    /// `x` is a non-inverted coordinate.
    Coord(usize),
    /// `x` is an inverted coordinate, hence a unit.
    Unit(usize),
}

#[derive(Clone, Debug)]
pub struct Scene {
    pub name: String,
    pub charts: Vec<Chart>,
    pub trunc: usize,
    pub window: usize,
    rings: BTreeMap<Tuple, RingRef>,
    maps: BTreeMap<(Tuple, Tuple), RingMap>,
    units: BTreeMap<(usize, usize), LocPoly>,
    leads: BTreeMap<Tuple, Lead>,
    weights: BTreeMap<String, i32>,
}

pub fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|i| big.contains(i))
}

pub fn union(a: &[usize], b: &[usize]) -> Tuple {
    let mut v: Tuple = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn faces(t: &[usize]) -> Vec<Tuple> {
    (0..t.len()).map(|m| t.iter().enumerate().filter(|&(i, _)| i != m).map(|(_, &v)| v).collect()).collect()
}

fn strictly_increasing(t: &[usize]) -> bool {
    t.windows(2).all(|w| w[0] < w[1])
}

fn make_ring(vars: &[String], inverted: &[String]) -> Result<RingRef> {
    Ring::from_names(vars.to_vec(), inverted.to_vec())
}

impl Scene {
    pub fn build(spec: &SceneSpec) -> Result<Scene> {
        let mut errs: Vec<String> = Vec::new();
        macro_rules! bail {
            () => {
                if !errs.is_empty() {
                    return Err(Error::Invalid(errs));
                }
            };
        }
        if spec.charts.is_empty() {
            errs.push("scene has no charts".to_string());
        }
        if spec.trunc < 2 {
            errs.push(format!("truncation N = {} must be at least 2", spec.trunc));
        }
        if spec.window < 1 {
            errs.push(format!("homology window D = {} must be at least 1", spec.window));
        }
        bail!();

        let mut rings: BTreeMap<Tuple, RingRef> = BTreeMap::new();
        let mut charts = Vec::new();
        for (i, c) in spec.charts.iter().enumerate() {
            let ring = match make_ring(&c.vars, &c.inverted) {
                Ok(r) => r,
                Err(e) => {
                    errs.push(format!("chart {}: {}", i, e));
                    continue;
                }
            };
            let mut field = |name: &str, src: &str| match parse_poly(&ring, src) {
                Ok(p) => Some(p),
                Err(e) => {
                    errs.push(format!("chart {} field {} '{}': {}", i, name, src, e));
                    None
                }
            };
            let (x, f, g) = (field("x", &c.x), field("f", &c.f), field("g", &c.g));
            if let (Some(x), Some(f), Some(g)) = (x, f, g) {
                rings.insert(vec![i], ring.clone());
                charts.push(Chart { ring, x, f, g });
            }
        }
        bail!();
        let n = charts.len();

        let mut declared: BTreeMap<(Tuple, Tuple), RingMap> = BTreeMap::new();
        for o in &spec.overlaps {
            let t = &o.tuple;
            if t.len() < 2 || !strictly_increasing(t) || t.iter().any(|&i| i >= n) {
                errs.push(format!("overlap {:?}: not a strictly increasing tuple of chart indices", t));
                continue;
            }
            if rings.contains_key(t) {
                errs.push(format!("overlap {:?} declared twice", t));
                continue;
            }
            match make_ring(&o.vars, &o.inverted) {
                Ok(r) => {
                    rings.insert(t.clone(), r);
                }
                Err(e) => errs.push(format!("overlap {:?}: {}", t, e)),
            }
        }
        bail!();
        for t in rings.keys() {
            for face in faces(t) {
                if !face.is_empty() && !rings.contains_key(&face) {
                    errs.push(format!("overlap {:?}: face {:?} is not declared", t, face));
                }
            }
        }
        bail!();
        for o in &spec.overlaps {
            let tgt = &rings[&o.tuple];
            for face in faces(&o.tuple) {
                let Some(m) = o.maps.iter().find(|m| m.from == face) else {
                    errs.push(format!("overlap {:?}: no restriction map from {:?}", o.tuple, face));
                    continue;
                };
                let src = &rings[&face];
                let mut images = Vec::new();
                for v in &src.vars {
                    let Some((_, e)) = m.images.iter().find(|(name, _)| name == v) else {
                        errs.push(format!("restriction {:?} -> {:?}: no image for '{}'", face, o.tuple, v));
                        continue;
                    };
                    match parse_poly(tgt, e) {
                        Ok(p) => images.push(p),
                        Err(err) => errs.push(format!("restriction {:?} -> {:?}, image of '{}': {}", face, o.tuple, v, err)),
                    }
                }
                if let Some((name, _)) = m.images.iter().find(|(name, _)| src.index_of(name).is_none()) {
                    errs.push(format!("restriction {:?} -> {:?}: '{}' is not a source variable", face, o.tuple, name));
                }
                if images.len() == src.nvars() {
                    match RingMap::new(src, tgt, images) {
                        Ok(rm) => {
                            declared.insert((face.clone(), o.tuple.clone()), rm);
                        }
                        Err(e) => errs.push(format!("restriction {:?} -> {:?}: {}", face, o.tuple, e)),
                    }
                }
            }
        }
        bail!();

        // compose along chains of faces, checking that every route agrees
        let mut maps: BTreeMap<(Tuple, Tuple), RingMap> = BTreeMap::new();
        let mut by_len: Vec<&Tuple> = rings.keys().collect();
        by_len.sort_by_key(|t| t.len());
        for big in &by_len {
            maps.insert(((*big).clone(), (*big).clone()), RingMap::identity(&rings[*big]));
            for small in &by_len {
                if small.len() >= big.len() || !is_subset(small, big) {
                    continue;
                }
                if small.len() + 1 == big.len() {
                    maps.insert(((*small).clone(), (*big).clone()), declared[&((*small).clone(), (*big).clone())].clone());
                    continue;
                }
                // small -> mid -> big through every codimension-one mid
                let mut found: Option<RingMap> = None;
                for mid in faces(big) {
                    if !is_subset(small, &mid) {
                        continue;
                    }
                    let first = &maps[&((*small).clone(), mid.clone())];
                    let second = &declared[&(mid.clone(), (*big).clone())];
                    let comp = first.then(second);
                    match &found {
                        None => found = Some(comp),
                        Some(prev) if !prev.same_as(&comp) => {
                            errs.push(format!("restriction maps {:?} -> {:?} do not compose consistently (via {:?})", small, big, mid));
                        }
                        _ => {}
                    }
                }
                maps.insert(((*small).clone(), (*big).clone()), found.expect("a codimension-one face contains small"));
            }
        }
        bail!();

        let mut units: BTreeMap<(usize, usize), LocPoly> = BTreeMap::new();
        for u in &spec.units {
            if u.i >= u.j || !rings.contains_key(&vec![u.i, u.j]) {
                errs.push(format!("unit u_{}{}: needs i < j and a declared overlap", u.i, u.j));
                continue;
            }
            let r = &rings[&vec![u.i, u.j]];
            match parse_poly(r, &u.value) {
                Ok(p) => match p.inverse() {
                    Ok(inv) => {
                        units.insert((u.i, u.j), p);
                        units.insert((u.j, u.i), inv);
                    }
                    Err(_) => errs.push(format!("u_{}{} = {} is not a unit on {:?}", u.i, u.j, p, [u.i, u.j])),
                },
                Err(e) => errs.push(format!("u_{}{}: {}", u.i, u.j, e)),
            }
        }
        for t in rings.keys().filter(|t| t.len() == 2) {
            if !units.contains_key(&(t[0], t[1])) {
                errs.push(format!("overlap {:?}: unit u_{}{} missing", t, t[0], t[1]));
            }
        }
        bail!();

        let mut weights = BTreeMap::new();
        for (name, w) in &spec.weights {
            weights.insert(name.clone(), *w);
        }
        let mut scene = Scene {
            name: spec.name.clone(),
            charts,
            trunc: spec.trunc,
            window: spec.window,
            rings,
            maps,
            units,
            leads: BTreeMap::new(),
            weights,
        };

        for (i, c) in scene.charts.iter().enumerate() {
            if &c.x * &c.g != c.f {
                errs.push(format!("chart {}: f != x*g ({} vs {}*{})", i, c.f, c.x, c.g));
            }
        }
        let tuples: Vec<Tuple> = scene.rings.keys().cloned().collect();
        for t in &tuples {
            let x = scene.restrict(&scene.charts[t[0]].x, &t[..1], t)?;
            let r = &scene.rings[t];
            let lead = if x.is_one() {
                Some(Lead::One)
            } else {
                (0..r.nvars()).find(|&v| x == LocPoly::var(r, v)).map(|v| if r.inverted[v] { Lead::Unit(v) } else { Lead::Coord(v) })
            };
            match lead {
                Some(l) => {
                    scene.leads.insert(t.clone(), l);
                }
                None => errs.push(format!("tuple {:?}: x_{} restricts to {}, neither 1 nor a coordinate", t, t[0], x)),
            }
        }
        for t in tuples.iter().filter(|t| t.len() == 2) {
            let (i, j) = (t[0], t[1]);
            let xi = scene.restrict(&scene.charts[i].x, &[i], t)?;
            let xj = scene.restrict(&scene.charts[j].x, &[j], t)?;
            if &scene.units[&(i, j)] * &xi != xj {
                errs.push(format!("tuple {:?}: u_{}{} * x_{} != x_{}", t, i, j, i, j));
            }
            let fi = scene.restrict(&scene.charts[i].f, &[i], t)?;
            let fj = scene.restrict(&scene.charts[j].f, &[j], t)?;
            if fi != fj {
                errs.push(format!("tuple {:?}: f_{} and f_{} disagree ({} vs {})", t, i, j, fi, fj));
            }
        }
        for t in tuples.iter().filter(|t| t.len() == 3) {
            let (i, j, k) = (t[0], t[1], t[2]);
            let uij = scene.unit_on(i, j, t)?;
            let ujk = scene.unit_on(j, k, t)?;
            let uik = scene.unit_on(i, k, t)?;
            if &uij * &ujk != uik {
                errs.push(format!("tuple {:?}: cocycle u_{}{} u_{}{} != u_{}{}", t, i, j, j, k, i, k));
            }
        }
        bail!();
        Ok(scene)
    }

    pub fn ncharts(&self) -> usize {
        self.charts.len()
    }

    pub fn tuples(&self) -> impl Iterator<Item = &Tuple> {
        self.rings.keys()
    }

    pub fn has(&self, t: &[usize]) -> bool {
        self.rings.contains_key(t)
    }

    pub fn ring(&self, t: &[usize]) -> Result<&RingRef> {
        self.rings.get(t).ok_or_else(|| Error::TupleNotInAtlas(t.to_vec()))
    }

    pub fn map(&self, from: &[usize], to: &[usize]) -> Result<&RingMap> {
        self.maps.get(&(from.to_vec(), to.to_vec())).ok_or_else(|| Error::TupleNotInAtlas(to.to_vec()))
    }

    pub fn restrict(&self, s: &LocPoly, from: &[usize], to: &[usize]) -> Result<LocPoly> {
        Ok(self.map(from, to)?.apply(s))
    }

    pub fn lead(&self, t: &[usize]) -> Lead {
        self.leads[t]
    }

    /// `u_ij` restricted to a tuple containing both indices; `u_ii = 1`.
    pub fn unit_on(&self, i: usize, j: usize, t: &[usize]) -> Result<LocPoly> {
        if i == j {
            return Ok(LocPoly::one(self.ring(t)?));
        }
        let pair = if i < j { vec![i, j] } else { vec![j, i] };
        let u = self.units.get(&(i, j)).ok_or_else(|| Error::TupleNotInAtlas(pair.clone()))?;
        self.restrict(u, &pair, t)
    }

    pub fn x_on(&self, i: usize, t: &[usize]) -> Result<LocPoly> {
        self.restrict(&self.charts[i].x, &[i], t)
    }

    pub fn g_on(&self, i: usize, t: &[usize]) -> Result<LocPoly> {
        self.restrict(&self.charts[i].g, &[i], t)
    }

    pub fn f_on(&self, t: &[usize]) -> Result<LocPoly> {
        self.restrict(&self.charts[t[0]].f, &t[..1], t)
    }

    pub fn weight(&self, name: &str) -> i32 {
        self.weights.get(name).copied().unwrap_or(1)
    }

    /// Chart indices `j` with `j ∪ t` in the atlas and `j ∉ t`.
    pub fn extensions(&self, t: &[usize]) -> Vec<usize> {
        (0..self.nchart_indices()).filter(|j| !t.contains(j) && self.has(&union(t, &[*j]))).collect()
    }

    fn nchart_indices(&self) -> usize {
        self.charts.len()
    }
}

/// Validation report: the empty list means the scene is valid.
pub fn validate_scene(spec: &SceneSpec) -> Vec<String> {
    match Scene::build(spec) {
        Ok(_) => Vec::new(),
        Err(Error::Invalid(v)) => v,
        Err(e) => vec![e.to_string()],
    }
}

fn chart(vars: &[&str], inverted: &[&str], x: &str, f: &str, g: &str) -> ChartSpec {
    ChartSpec {
        vars: vars.iter().map(|s| s.to_string()).collect(),
        inverted: inverted.iter().map(|s| s.to_string()).collect(),
        x: x.to_string(),
        f: f.to_string(),
        g: g.to_string(),
    }
}

fn overlap(tuple: &[usize], vars: &[&str], inverted: &[&str], maps: &[(&[usize], &[(&str, &str)])]) -> OverlapSpec {
    OverlapSpec {
        tuple: tuple.to_vec(),
        vars: vars.iter().map(|s| s.to_string()).collect(),
        inverted: inverted.iter().map(|s| s.to_string()).collect(),
        maps: maps
            .iter()
            .map(|(from, im)| MapSpec { from: from.to_vec(), images: im.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect() })
            .collect(),
    }
}

fn unit(i: usize, j: usize, v: &str) -> UnitSpec {
    UnitSpec { i, j, value: v.to_string() }
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &["A1", "A2", "P1", "A1C", "A1T"];

/// Built-in scenes. `A1C` and `A1T` are extra multi-chart covers of the line
/// used by the test suites.
pub fn builtin(name: &str) -> Option<SceneSpec> {
    let base = |name: &str| SceneSpec { name: name.to_string(), trunc: 6, window: 3, ..Default::default() };
    let spec = match name {
        "A1" => SceneSpec { charts: vec![chart(&["x"], &[], "x", "x^2", "x")], ..base("A1") },
        "A2" => SceneSpec { charts: vec![chart(&["x", "y"], &[], "x", "x*y", "y")], ..base("A2") },
        "P1" => SceneSpec {
            charts: vec![chart(&["t"], &[], "t", "0", "0"), chart(&["s"], &[], "1", "0", "0")],
            overlaps: vec![overlap(&[0, 1], &["t"], &["t"], &[(&[0], &[("t", "t")]), (&[1], &[("s", "t^-1")])])],
            units: vec![unit(0, 1, "t^-1")],
            weights: vec![("t".to_string(), 1), ("s".to_string(), -1)],
            ..base("P1")
        },
        // the line, covered by itself and the punctured line
        "A1C" => SceneSpec {
            charts: vec![chart(&["x"], &[], "x", "x^2", "x"), chart(&["x"], &["x"], "1", "x^2", "x^2")],
            overlaps: vec![overlap(&[0, 1], &["x"], &["x"], &[(&[0], &[("x", "x")]), (&[1], &[("x", "x")])])],
            units: vec![unit(0, 1, "x^-1")],
            ..base("A1C")
        },
        // three charts, so triple overlaps and q = 2 occur
        "A1T" => SceneSpec {
            charts: vec![
                chart(&["x"], &[], "x", "x^2", "x"),
                chart(&["x"], &["x"], "1", "x^2", "x^2"),
                chart(&["x"], &["x"], "x", "x^2", "x"),
            ],
            overlaps: vec![
                overlap(&[0, 1], &["x"], &["x"], &[(&[0], &[("x", "x")]), (&[1], &[("x", "x")])]),
                overlap(&[0, 2], &["x"], &["x"], &[(&[0], &[("x", "x")]), (&[2], &[("x", "x")])]),
                overlap(&[1, 2], &["x"], &["x"], &[(&[1], &[("x", "x")]), (&[2], &[("x", "x")])]),
                overlap(&[0, 1, 2], &["x"], &["x"], &[(&[0, 1], &[("x", "x")]), (&[0, 2], &[("x", "x")]), (&[1, 2], &[("x", "x")])]),
            ],
            units: vec![unit(0, 1, "x^-1"), unit(0, 2, "1"), unit(1, 2, "x")],
            ..base("A1T")
        },
        _ => return None,
    };
    Some(spec)
}

pub fn builtin_scene(name: &str) -> Option<Scene> {
    builtin(name).map(|s| Scene::build(&s).expect("built-in scenes are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for n in BUILTIN_NAMES {
            assert!(validate_scene(&builtin(n).unwrap()).is_empty(), "{}", n);
        }
    }

    #[test]
    fn tampered_g_is_rejected() {
        let mut s = builtin("A2").unwrap();
        s.charts[0].g = "x".to_string();
        let errs = validate_scene(&s);
        assert_eq!(errs.len(), 1);
        assert!(errs[0].contains("f != x*g"));
    }

    #[test]
    fn p1_restrictions() {
        let s = builtin_scene("P1").unwrap();
        let r0 = s.ring(&[0]).unwrap().clone();
        let r1 = s.ring(&[1]).unwrap().clone();
        let r01 = s.ring(&[0, 1]).unwrap().clone();
        let t = LocPoly::var(&r0, 0);
        assert_eq!(s.restrict(&t, &[0], &[0, 1]).unwrap(), LocPoly::var(&r01, 0));
        let sv = LocPoly::var(&r1, 0);
        assert_eq!(s.restrict(&sv, &[1], &[0, 1]).unwrap(), LocPoly::var(&r01, 0).inverse().unwrap());
        assert!(s.restrict(&LocPoly::one(&r0), &[0], &[0, 1]).unwrap().is_one());
        assert!(matches!(s.restrict(&t, &[0], &[0, 2]), Err(Error::TupleNotInAtlas(_))));
        assert_eq!(s.lead(&[0]), Lead::Coord(0));
        assert_eq!(s.lead(&[1]), Lead::One);
        assert_eq!(s.lead(&[0, 1]), Lead::Unit(0));
    }

    #[test]
    fn bad_cocycle_is_rejected() {
        let mut s = builtin("A1T").unwrap();
        s.units[1].value = "2".to_string();
        let errs = validate_scene(&s);
        assert!(errs.iter().any(|e| e.contains("cocycle")), "{:?}", errs);
    }
}
