//! The JSON workspace: a ring, named objects, and harness settings.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use purederive_core::tower::{CocycleTail, Direction, TailRule};
use purederive_core::{int, BaseRing, BoundedComplex, ChainMap, Cocycle, FgModule, Int, ModuleMap, Roof, RingMatrix, Tower};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadError {
    Io(String),
    Parse { line: usize, column: usize, message: String },
    Validation { name: String, reason: String },
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io(m) => write!(f, "cannot read workspace: {m}"),
            LoadError::Parse { line, column, message } => write!(f, "parse error at line {line}, column {column}: {message}"),
            LoadError::Validation { name, reason } => write!(f, "invalid `{name}`: {reason}"),
        }
    }
}

impl std::error::Error for LoadError {}

fn invalid(name: &str, reason: impl Into<String>) -> LoadError {
    LoadError::Validation { name: name.to_string(), reason: reason.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingSpec {
    Integers,
    IntegersMod { modulus: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub generators: usize,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub domain: String,
    pub codomain: String,
    /// row-major, one row per domain generator
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub degree: i64,
    pub module: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeMapSpec {
    pub degree: i64,
    pub map: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub terms: Vec<TermSpec>,
    #[serde(default)]
    pub differentials: Vec<DegreeMapSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainMapSpec {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub components: Vec<DegreeMapSpec>,
}

/// `X <-s- Z -a-> Y`, both legs named chain maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoofSpec {
    pub s: String,
    pub a: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionSpec {
    Direct,
    Inverse,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum TailSpec {
    EventuallyIso,
    MultiplicationBy { slope: i64, offset: i64 },
    PowerQuotient { p: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub direction: DirectionSpec,
    pub stages: Vec<String>,
    #[serde(default)]
    pub maps: Vec<String>,
    pub tail: TailSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CocycleTailSpec {
    Zero,
    RepeatLast,
}

/// An element of `prod Hom(X_i, N)` in Hom-module coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    pub tower: String,
    pub target: String,
    pub prefix: Vec<Vec<i64>>,
    pub tail: CocycleTailSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnessConfig {
    pub seed: u64,
    pub count: usize,
    /// truncation depth for towers and congruence checks
    pub depth: usize,
    pub family_cap: usize,
    pub max_generators: usize,
    pub max_length: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig { seed: 7, count: 50, depth: 8, family_cap: 64, max_generators: 3, max_length: 3 }
    }
}

/// The document exactly as stored; `BTreeMap`s keep the emitted key order canonical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    pub ring: RingSpec,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapSpec>,
    #[serde(default)]
    pub complexes: BTreeMap<String, ComplexSpec>,
    #[serde(default)]
    pub chain_maps: BTreeMap<String, ChainMapSpec>,
    #[serde(default)]
    pub roofs: BTreeMap<String, RoofSpec>,
    #[serde(default)]
    pub towers: BTreeMap<String, TowerSpec>,
    #[serde(default)]
    pub cocycles: BTreeMap<String, CocycleSpec>,
    #[serde(default)]
    pub harness: HarnessConfig,
}

#[derive(Clone, Debug)]
pub struct NamedCocycle {
    pub tower: String,
    pub target: FgModule,
    pub cocycle: Cocycle,
}

/// A validated workspace; every name resolves and every object is well formed.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub ring: BaseRing,
    pub modules: BTreeMap<String, FgModule>,
    pub maps: BTreeMap<String, ModuleMap>,
    pub complexes: BTreeMap<String, BoundedComplex>,
    pub chain_maps: BTreeMap<String, ChainMap>,
    pub roofs: BTreeMap<String, Roof>,
    pub towers: BTreeMap<String, Tower>,
    pub cocycles: BTreeMap<String, NamedCocycle>,
    pub harness: HarnessConfig,
    file: WorkspaceFile,
}

fn ints(rows: &[Vec<i64>]) -> Vec<Vec<Int>> {
    rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
}

fn lookup<'a, T>(table: &'a BTreeMap<String, T>, owner: &str, kind: &str, key: &str) -> Result<&'a T, LoadError> {
    table.get(key).ok_or_else(|| invalid(owner, format!("unknown {kind} `{key}`")))
}

impl Workspace {
    pub fn load(path: &Path) -> Result<Self, LoadError> {
        let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, LoadError> {
        let file: WorkspaceFile = serde_json::from_str(text)
            .map_err(|e| LoadError::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
        Self::from_file(file)
    }

    pub fn from_file(file: WorkspaceFile) -> Result<Self, LoadError> {
        let ring = match &file.ring {
            RingSpec::Integers => BaseRing::Integers,
            RingSpec::IntegersMod { modulus } => {
                BaseRing::integers_mod(*modulus).map_err(|e| invalid("ring", e.to_string()))?
            }
        };

        let mut modules = BTreeMap::new();
        for (name, m) in &file.modules {
            if let Some(i) = m.relations.iter().position(|r| r.len() != m.generators) {
                return Err(invalid(name, format!("relation {i} has {} entries, expected {}", m.relations[i].len(), m.generators)));
            }
            let module = FgModule::from_relations(&ring, m.generators, &ints(&m.relations)).map_err(|e| invalid(name, e.to_string()))?;
            modules.insert(name.clone(), module);
        }

        let mut maps = BTreeMap::new();
        for (name, f) in &file.maps {
            let dom = lookup(&modules, name, "module", &f.domain)?;
            let cod = lookup(&modules, name, "module", &f.codomain)?;
            if f.matrix.len() != dom.gens() || f.matrix.iter().any(|r| r.len() != cod.gens()) {
                return Err(invalid(name, format!("matrix must be {} x {}", dom.gens(), cod.gens())));
            }
            let matrix = if dom.gens() == 0 {
                RingMatrix::zeros(&ring, 0, cod.gens())
            } else {
                RingMatrix::from_rows(&ring, &ints(&f.matrix)).map_err(|e| invalid(name, e.to_string()))?
            };
            let map = ModuleMap::new(dom, cod, matrix).map_err(|e| invalid(name, e.to_string()))?;
            maps.insert(name.clone(), map);
        }

        let mut complexes = BTreeMap::new();
        for (name, c) in &file.complexes {
            let mut terms = BTreeMap::new();
            let mut term_names = BTreeMap::new();
            for t in &c.terms {
                let m = lookup(&modules, name, "module", &t.module)?;
                if terms.insert(t.degree, m.clone()).is_some() {
                    return Err(invalid(name, format!("degree {}: term given twice", t.degree)));
                }
                term_names.insert(t.degree, t.module.clone());
            }
            let mut diffs = BTreeMap::new();
            for d in &c.differentials {
                let spec = lookup(&file.maps, name, "map", &d.map)?;
                let expected = (term_names.get(&d.degree), term_names.get(&(d.degree + 1)));
                if expected != (Some(&spec.domain), Some(&spec.codomain)) {
                    return Err(invalid(name, format!("degree {}: map `{}` does not go between the terms in degrees {} and {}", d.degree, d.map, d.degree, d.degree + 1)));
                }
                if diffs.insert(d.degree, maps[&d.map].clone()).is_some() {
                    return Err(invalid(name, format!("degree {}: differential given twice", d.degree)));
                }
            }
            let x = BoundedComplex::from_parts(&ring, &terms, &diffs).map_err(|e| invalid(name, e.to_string()))?;
            complexes.insert(name.clone(), x);
        }

        let mut chain_maps = BTreeMap::new();
        for (name, f) in &file.chain_maps {
            let x = lookup(&complexes, name, "complex", &f.source)?;
            let y = lookup(&complexes, name, "complex", &f.target)?;
            let mut components = BTreeMap::new();
            for c in &f.components {
                let m = lookup(&maps, name, "map", &c.map)?;
                if m.domain().gens() != x.term(c.degree).gens() || m.codomain().gens() != y.term(c.degree).gens() {
                    return Err(invalid(name, format!("degree {}: map `{}` has the wrong shape", c.degree, c.map)));
                }
                components.insert(c.degree, m.clone());
            }
            let g = ChainMap::new(x, y, components).map_err(|e| invalid(name, e.to_string()))?;
            chain_maps.insert(name.clone(), g);
        }

        let mut roofs = BTreeMap::new();
        for (name, r) in &file.roofs {
            let s = lookup(&chain_maps, name, "chain map", &r.s)?;
            let a = lookup(&chain_maps, name, "chain map", &r.a)?;
            if file.chain_maps[&r.s].source != file.chain_maps[&r.a].source {
                return Err(invalid(name, "roof legs must start at the same complex"));
            }
            let roof = Roof::new(s.clone(), a.clone()).map_err(|e| invalid(name, e.to_string()))?;
            roofs.insert(name.clone(), roof);
        }

        let mut towers = BTreeMap::new();
        for (name, t) in &file.towers {
            let stages = t.stages.iter().map(|s| lookup(&modules, name, "module", s).cloned()).collect::<Result<Vec<_>, _>>()?;
            let tmaps = t.maps.iter().map(|s| lookup(&maps, name, "map", s).cloned()).collect::<Result<Vec<_>, _>>()?;
            let direction = match t.direction {
                DirectionSpec::Direct => Direction::Direct,
                DirectionSpec::Inverse => Direction::Inverse,
            };
            let tail = match t.tail {
                TailSpec::EventuallyIso => TailRule::EventuallyIso,
                TailSpec::MultiplicationBy { slope, offset } => TailRule::MultiplicationBy { slope, offset },
                TailSpec::PowerQuotient { p } => TailRule::PowerQuotient { p },
            };
            let tower = Tower::new(&ring, direction, stages, tmaps, tail).map_err(|e| invalid(name, e.to_string()))?;
            towers.insert(name.clone(), tower);
        }

        let mut cocycles = BTreeMap::new();
        for (name, c) in &file.cocycles {
            lookup(&towers, name, "tower", &c.tower)?;
            let target = lookup(&modules, name, "module", &c.target)?.clone();
            let tail = match c.tail {
                CocycleTailSpec::Zero => CocycleTail::Zero,
                CocycleTailSpec::RepeatLast => CocycleTail::RepeatLast,
            };
            let cocycle = Cocycle { prefix: ints(&c.prefix), tail };
            cocycles.insert(name.clone(), NamedCocycle { tower: c.tower.clone(), target, cocycle });
        }

        let h = &file.harness;
        if h.count == 0 || h.depth == 0 || h.family_cap == 0 || h.max_generators == 0 || h.max_length == 0 {
            return Err(invalid("harness", "count, depth, family_cap and size bounds must be positive"));
        }

        Ok(Workspace { ring, modules, maps, complexes, chain_maps, roofs, towers, cocycles, harness: file.harness, file })
    }

    pub fn file(&self) -> &WorkspaceFile {
        &self.file
    }

    /// Canonical text: sorted keys, two-space indentation, trailing newline.
    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.file).expect("workspace serializes");
        s.push('\n');
        s
    }
}
