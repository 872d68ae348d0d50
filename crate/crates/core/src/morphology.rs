//! Modular robot bodies: decoding a body CPPN into a tree of modules on an
//! integer grid, and the scalar shape descriptors computed from it.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cppn::{CppnGenome, BODY_INPUTS, BODY_OUTPUTS};

pub const MAX_MODULES: usize = 10;

pub type Cell = [i32; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleKind {
    Core,
    Brick,
    ActiveHinge,
}

impl ModuleKind {
    fn glyph(self) -> char {
        match self {
            ModuleKind::Core => 'C',
            ModuleKind::Brick => 'B',
            ModuleKind::ActiveHinge => 'H',
        }
    }

    /// Sockets offered to children, in exploration order.
    fn child_faces(self) -> &'static [Face] {
        match self {
            ModuleKind::Core => &[Face::Front, Face::Back, Face::Left, Face::Right],
            ModuleKind::Brick => &[Face::Front, Face::Left, Face::Right],
            ModuleKind::ActiveHinge => &[Face::Front],
        }
    }
}

/// A face of a module, relative to the module's own frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Face {
    Front,
    Back,
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rotation {
    #[serde(rename = "0")]
    Deg0,
    #[serde(rename = "90")]
    Deg90,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Module {
    pub position: Cell,
    pub kind: ModuleKind,
    pub rotation: Rotation,
    /// Index of the parent module; `None` only for the core.
    pub parent: Option<usize>,
    /// Face of the parent this module is attached to.
    pub face: Option<Face>,
    /// Unit vector pointing away from the parent.
    pub forward: Cell,
    /// Unit vector of the module's local "up" after rotation.
    pub up: Cell,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphology {
    pub modules: Vec<Module>,
}

fn add(a: Cell, b: Cell) -> Cell {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn neg(a: Cell) -> Cell {
    [-a[0], -a[1], -a[2]]
}

fn cross(a: Cell, b: Cell) -> Cell {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn face_direction(forward: Cell, up: Cell, face: Face) -> Cell {
    match face {
        Face::Front => forward,
        Face::Back => neg(forward),
        Face::Left => cross(up, forward),
        Face::Right => cross(forward, up),
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

impl Morphology {
    pub fn core_only() -> Self {
        Morphology {
            modules: vec![Module {
                position: [0, 0, 0],
                kind: ModuleKind::Core,
                rotation: Rotation::Deg0,
                parent: None,
                face: None,
                forward: [0, 1, 0],
                up: [0, 0, 1],
            }],
        }
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn count(&self, kind: ModuleKind) -> usize {
        self.modules.iter().filter(|m| m.kind == kind).count()
    }

    /// Indices of active hinges, in module order. This order defines the
    /// joint numbering of the controller.
    pub fn joints(&self) -> Vec<usize> {
        (0..self.modules.len())
            .filter(|&i| self.modules[i].kind == ModuleKind::ActiveHinge)
            .collect()
    }

    /// Attach a child to `parent` on `face`. Returns `None` when the socket
    /// is not offered by the parent or the target cell is taken.
    pub fn attach(&mut self, parent: usize, face: Face, kind: ModuleKind, rotation: Rotation) -> Option<usize> {
        let p = &self.modules[parent];
        if !p.kind.child_faces().contains(&face) {
            return None;
        }
        let dir = face_direction(p.forward, p.up, face);
        let position = add(p.position, dir);
        if self.modules.iter().any(|m| m.position == position) {
            return None;
        }
        let up = match rotation {
            Rotation::Deg0 => p.up,
            Rotation::Deg90 => cross(dir, p.up),
        };
        self.modules.push(Module {
            position,
            kind,
            rotation,
            parent: Some(parent),
            face: Some(face),
            forward: dir,
            up,
        });
        Some(self.modules.len() - 1)
    }

    /// Structural invariants: one core at the origin and first, every other
    /// module has an earlier parent one grid step away, no shared cells,
    /// at most [`MAX_MODULES`] modules.
    pub fn check(&self) -> Result<(), String> {
        if self.modules.is_empty() || self.modules.len() > MAX_MODULES {
            return Err(format!("module count {} out of range", self.modules.len()));
        }
        let core = &self.modules[0];
        if core.kind != ModuleKind::Core || core.parent.is_some() {
            return Err("first module must be the parentless core".into());
        }
        let mut cells = HashSet::new();
        for (i, m) in self.modules.iter().enumerate() {
            if !cells.insert(m.position) {
                return Err(format!("module {i} shares cell {:?}", m.position));
            }
            if i == 0 {
                continue;
            }
            if m.kind == ModuleKind::Core {
                return Err(format!("module {i} is a second core"));
            }
            let Some(p) = m.parent.filter(|&p| p < i) else {
                return Err(format!("module {i} lacks an earlier parent"));
            };
            let d: i32 = (0..3)
                .map(|k| (m.position[k] - self.modules[p].position[k]).abs())
                .sum();
            if d != 1 {
                return Err(format!("module {i} is not adjacent to its parent"));
            }
        }
        Ok(())
    }

    /// Number of tree connections (parent plus children) per module.
    fn degrees(&self) -> Vec<usize> {
        let mut degree = vec![0; self.modules.len()];
        for (i, m) in self.modules.iter().enumerate() {
            if let Some(p) = m.parent {
                degree[i] += 1;
                degree[p] += 1;
            }
        }
        degree
    }

    /// Top-down ASCII rendering of the planar footprint, +y up, +x right.
    /// Where modules stack vertically the lowest index wins.
    pub fn render_ascii(&self) -> String {
        let mut footprint: HashMap<(i32, i32), char> = HashMap::new();
        for m in &self.modules {
            footprint
                .entry((m.position[0], m.position[1]))
                .or_insert(m.kind.glyph());
        }
        let xs = footprint.keys().map(|k| k.0);
        let ys = footprint.keys().map(|k| k.1);
        let (x0, x1) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
        let (y0, y1) = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
        let mut out = String::new();
        for y in (y0..=y1).rev() {
            for x in x0..=x1 {
                out.push(*footprint.get(&(x, y)).unwrap_or(&'.'));
            }
            out.push('\n');
        }
        out
    }
}

/// Decode a body genome breadth-first from the core. Each open socket is
/// queried with (x, y, z, tree distance to core); the first three outputs
/// pick brick / hinge / empty and the last two pick the rotation. Sockets
/// whose target cell is occupied end their branch. Decoding stops at
/// [`MAX_MODULES`] modules.
pub fn decode_body(genome: &CppnGenome) -> Morphology {
    assert_eq!(
        genome.shape(),
        (BODY_INPUTS, BODY_OUTPUTS),
        "body genome must have shape (4, 5)"
    );
    let net = genome.compile();
    let mut body = Morphology::core_only();
    let mut depth = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    'explore: while let Some(parent) = queue.pop_front() {
        let (pos, forward, up, kind) = {
            let p = &body.modules[parent];
            (p.position, p.forward, p.up, p.kind)
        };
        for &face in kind.child_faces() {
            if body.len() >= MAX_MODULES {
                break 'explore;
            }
            let cell = add(pos, face_direction(forward, up, face));
            let d = depth[parent] + 1;
            let out = net
                .eval(&[cell[0] as f64, cell[1] as f64, cell[2] as f64, d as f64])
                .expect("arity checked above");
            let module = match argmax(&out[..3]) {
                0 => ModuleKind::Brick,
                1 => ModuleKind::ActiveHinge,
                _ => continue,
            };
            let rotation = if argmax(&out[3..5]) == 0 {
                Rotation::Deg0
            } else {
                Rotation::Deg90
            };
            if let Some(child) = body.attach(parent, face, module, rotation) {
                depth.push(d);
                queue.push_back(child);
            }
        }
    }
    body
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorphDescriptors {
    pub absolute_size: usize,
    pub proportion: f64,
    pub num_bricks: usize,
    pub rel_limbs: f64,
    pub symmetry: f64,
    pub branching: f64,
}

/// Largest possible number of limbs for a body of `m` modules.
pub fn max_limbs(m: usize) -> usize {
    if m >= 6 {
        let r = m - 6;
        2 * (r / 3) + r % 3 + 4
    } else {
        m.saturating_sub(1)
    }
}

/// Largest possible number of fully branched modules for `m` modules.
pub fn max_branching(m: usize) -> usize {
    m.saturating_sub(2) / 3
}

const LATERAL: [Cell; 4] = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]];

pub fn compute_descriptors(body: &Morphology) -> MorphDescriptors {
    let m = body.len();
    let origin = body.modules[0].position;
    let rel: Vec<Cell> = body
        .modules
        .iter()
        .map(|x| {
            [
                x.position[0] - origin[0],
                x.position[1] - origin[1],
                x.position[2] - origin[2],
            ]
        })
        .collect();

    let span = |k: usize| {
        let lo = rel.iter().map(|c| c[k]).min().unwrap_or(0);
        let hi = rel.iter().map(|c| c[k]).max().unwrap_or(0);
        (hi - lo + 1) as f64
    };
    let (sx, sy) = (span(0), span(1));
    let proportion = sx.min(sy) / sx.max(sy);

    let degree = body.degrees();
    let limbs = (1..m).filter(|&i| degree[i] == 1).count();
    let l_max = max_limbs(m);
    let rel_limbs = if l_max > 0 { limbs as f64 / l_max as f64 } else { 0.0 };

    // Lateral directions in which each module has a tree connection.
    let mut sides: Vec<HashSet<Cell>> = vec![HashSet::new(); m];
    for (i, x) in body.modules.iter().enumerate() {
        if let Some(p) = x.parent {
            let d = [rel[i][0] - rel[p][0], rel[i][1] - rel[p][1], rel[i][2] - rel[p][2]];
            sides[p].insert(d);
            sides[i].insert(neg(d));
        }
    }
    let branched = sides.iter().filter(|s| LATERAL.iter().all(|d| s.contains(d))).count();
    let b_max = max_branching(m);
    let branching = if b_max > 0 { branched as f64 / b_max as f64 } else { 0.0 };

    let kinds: HashMap<Cell, ModuleKind> = rel.iter().copied().zip(body.modules.iter().map(|x| x.kind)).collect();
    let mirror_score = |axis: usize| {
        let off_axis: Vec<&Cell> = rel.iter().filter(|c| c[axis] != 0).collect();
        if off_axis.is_empty() {
            return 1.0;
        }
        let matched = off_axis
            .iter()
            .filter(|c| {
                let mut mirrored = ***c;
                mirrored[axis] = -mirrored[axis];
                kinds.get(&mirrored) == kinds.get(**c)
            })
            .count();
        matched as f64 / off_axis.len() as f64
    };
    let symmetry = mirror_score(0).max(mirror_score(1));

    MorphDescriptors {
        absolute_size: m,
        proportion,
        num_bricks: body.count(ModuleKind::Brick),
        rel_limbs,
        symmetry,
        branching,
    }
}
