//! JSON scene files.
//!
//! ```json
//! {
//!   "name": "P1", "trunc": 6, "window": 3,
//!   "charts": [
//!     { "vars": ["t"], "inverted": [], "x": "t", "f": "0", "g": "0" },
//!     { "vars": ["s"], "inverted": [], "x": "1", "f": "0", "g": "0" }
//!   ],
//!   "overlaps": [
//!     { "tuple": [0, 1], "vars": ["t"], "inverted": ["t"],
//!       "maps": [ { "from": [0], "images": { "t": "t" } },
//!                 { "from": [1], "images": { "s": "t^-1" } } ] }
//!   ],
//!   "units": [ { "i": 0, "j": 1, "value": "t^-1" } ],
//!   "weights": { "t": 1, "s": -1 }
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use hhpush_core::scene::{builtin, ChartSpec, MapSpec, OverlapSpec, UnitSpec, BUILTIN_NAMES};
use hhpush_core::{validate_scene, Scene, SceneSpec};
use serde::{Deserialize, Serialize};

fn default_trunc() -> usize {
    6
}

fn default_window() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub name: String,
    #[serde(default = "default_trunc")]
    pub trunc: usize,
    #[serde(default = "default_window")]
    pub window: usize,
    pub charts: Vec<ChartFile>,
    #[serde(default)]
    pub overlaps: Vec<OverlapFile>,
    #[serde(default)]
    pub units: Vec<UnitFile>,
    #[serde(default)]
    pub weights: BTreeMap<String, i32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartFile {
    pub vars: Vec<String>,
    #[serde(default)]
    pub inverted: Vec<String>,
    pub x: String,
    pub f: String,
    pub g: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapFile {
    pub tuple: Vec<usize>,
    pub vars: Vec<String>,
    #[serde(default)]
    pub inverted: Vec<String>,
    pub maps: Vec<MapFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub from: Vec<usize>,
    pub images: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitFile {
    pub i: usize,
    pub j: usize,
    pub value: String,
}

impl From<&SceneFile> for SceneSpec {
    fn from(f: &SceneFile) -> SceneSpec {
        SceneSpec {
            name: f.name.clone(),
            trunc: f.trunc,
            window: f.window,
            charts: f
                .charts
                .iter()
                .map(|c| ChartSpec { vars: c.vars.clone(), inverted: c.inverted.clone(), x: c.x.clone(), f: c.f.clone(), g: c.g.clone() })
                .collect(),
            overlaps: f
                .overlaps
                .iter()
                .map(|o| OverlapSpec {
                    tuple: o.tuple.clone(),
                    vars: o.vars.clone(),
                    inverted: o.inverted.clone(),
                    maps: o
                        .maps
                        .iter()
                        .map(|m| MapSpec { from: m.from.clone(), images: m.images.iter().map(|(a, b)| (a.clone(), b.clone())).collect() })
                        .collect(),
                })
                .collect(),
            units: f.units.iter().map(|u| UnitSpec { i: u.i, j: u.j, value: u.value.clone() }).collect(),
            weights: f.weights.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        }
    }
}

impl From<&SceneSpec> for SceneFile {
    fn from(s: &SceneSpec) -> SceneFile {
        SceneFile {
            name: s.name.clone(),
            trunc: s.trunc,
            window: s.window,
            charts: s
                .charts
                .iter()
                .map(|c| ChartFile { vars: c.vars.clone(), inverted: c.inverted.clone(), x: c.x.clone(), f: c.f.clone(), g: c.g.clone() })
                .collect(),
            overlaps: s
                .overlaps
                .iter()
                .map(|o| OverlapFile {
                    tuple: o.tuple.clone(),
                    vars: o.vars.clone(),
                    inverted: o.inverted.clone(),
                    maps: o.maps.iter().map(|m| MapFile { from: m.from.clone(), images: m.images.iter().cloned().collect() }).collect(),
                })
                .collect(),
            units: s.units.iter().map(|u| UnitFile { i: u.i, j: u.j, value: u.value.clone() }).collect(),
            weights: s.weights.iter().cloned().collect(),
        }
    }
}

/// Parse a scene file. JSON syntax errors carry line and column.
pub fn parse(text: &str) -> Result<SceneFile> {
    serde_json::from_str(text).map_err(|e| anyhow::anyhow!("scene file, line {} column {}: {}", e.line(), e.column(), e))
}

/// A scene argument is a path to a JSON file or the name of a built-in scene.
pub fn load_spec(arg: &str) -> Result<SceneSpec> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(SceneSpec::from(&parse(&text)?));
    }
    match builtin(arg) {
        Some(s) => Ok(s),
        None => bail!("no scene file '{}' and no built-in scene of that name (built-ins: {})", arg, BUILTIN_NAMES.join(", ")),
    }
}

/// Build a validated scene, returning the validation messages on failure.
pub fn build(spec: &SceneSpec) -> std::result::Result<Scene, Vec<String>> {
    let errs = validate_scene(spec);
    if !errs.is_empty() {
        return Err(errs);
    }
    Scene::build(spec).map_err(|e| vec![e.to_string()])
}
