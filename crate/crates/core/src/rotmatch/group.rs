use std::f64::consts::TAU;

use nalgebra::Vector3;

use super::{match_all, Rotation};
use crate::error::{Error, Result};
use crate::majorana::MajoranaConfiguration;

/// Largest group `closure` will enumerate.
const CLOSURE_CAP: usize = 240;

/// Rotation subgroups of SO(3) that fix a finite point configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Trivial,
    Cyclic(usize),
    Dihedral(usize),
    Tetrahedral,
    Octahedral,
    Icosahedral,
    /// All rotations about one axis.
    AxialContinuous,
    /// Rotations about one axis together with π-flips about perpendicular
    /// axes.
    AxialContinuousFlip,
}

impl GroupKind {
    /// Group order for the finite kinds.
    pub fn order(&self) -> Option<usize> {
        match *self {
            GroupKind::Trivial => Some(1),
            GroupKind::Cyclic(m) => Some(m),
            GroupKind::Dihedral(m) => Some(2 * m),
            GroupKind::Tetrahedral => Some(12),
            GroupKind::Octahedral => Some(24),
            GroupKind::Icosahedral => Some(60),
            GroupKind::AxialContinuous | GroupKind::AxialContinuousFlip => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GroupKind::Trivial => "Trivial",
            GroupKind::Cyclic(_) => "Cyclic",
            GroupKind::Dihedral(_) => "Dihedral",
            GroupKind::Tetrahedral => "Tetrahedral",
            GroupKind::Octahedral => "Octahedral",
            GroupKind::Icosahedral => "Icosahedral",
            GroupKind::AxialContinuous => "AxialContinuous",
            GroupKind::AxialContinuousFlip => "AxialContinuousFlip",
        }
    }

    /// The `m` of cyclic and dihedral groups.
    pub fn m(&self) -> Option<usize> {
        match *self {
            GroupKind::Cyclic(m) | GroupKind::Dihedral(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointGroup {
    kind: GroupKind,
    axis: Option<Vector3<f64>>,
    generators: Vec<Rotation>,
}

impl PointGroup {
    pub(crate) fn from_parts(
        kind: GroupKind,
        axis: Option<Vector3<f64>>,
        generators: Vec<Rotation>,
    ) -> Self {
        Self {
            kind,
            axis,
            generators,
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    /// Highest-order rotation axis (the symmetry axis for axial groups).
    pub fn axis(&self) -> Option<Vector3<f64>> {
        self.axis
    }

    /// Generators of a finite group; empty for the trivial and continuous
    /// kinds.
    pub fn generators(&self) -> &[Rotation] {
        &self.generators
    }

    pub fn order(&self) -> Option<usize> {
        self.kind.order()
    }

    /// All elements of a finite group, from its generators.
    pub fn elements(&self) -> Vec<Rotation> {
        closure(&self.generators)
    }
}

/// Every product of the generators, deduplicated at `1e-6`. Stops growing
/// after a few hundred elements.
pub fn closure(generators: &[Rotation]) -> Vec<Rotation> {
    let mut elements = vec![Rotation::identity()];
    let mut frontier = vec![Rotation::identity()];
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = *g * x;
            if elements.iter().all(|e| e.distance(&y) > 1e-6) {
                if elements.len() >= CLOSURE_CAP {
                    return elements;
                }
                elements.push(y);
                frontier.push(y);
            }
        }
    }
    elements
}

/// The group of rotations fixing `config` as a multiset within `tol`.
pub fn symmetry_group(config: &MajoranaConfiguration, tol: f64) -> Result<PointGroup> {
    let clusters = config.clusters();
    let collinear = match clusters {
        [_] => true,
        [a, b] => a.point.vector().cross(b.point.vector()).norm() < 1e-9,
        _ => false,
    };
    if collinear {
        let heavy = clusters
            .iter()
            .max_by(|x, y| {
                x.multiplicity
                    .cmp(&y.multiplicity)
                    .then(y.point.vector().z.total_cmp(&x.point.vector().z))
            })
            .expect("nonempty configuration");
        let flip = clusters.len() == 2 && clusters[0].multiplicity == clusters[1].multiplicity;
        let kind = if flip {
            GroupKind::AxialContinuousFlip
        } else {
            GroupKind::AxialContinuous
        };
        let axis = if flip { clusters[0].point } else { heavy.point };
        return Ok(PointGroup {
            kind,
            axis: Some(*axis.vector()),
            generators: Vec::new(),
        });
    }

    let elements = match_all(config, config, tol)?;
    let order = elements.len();
    if order == 1 {
        return Ok(PointGroup {
            kind: GroupKind::Trivial,
            axis: None,
            generators: Vec::new(),
        });
    }
    check_closed(&elements)?;

    let centroid: Vector3<f64> = config.points().iter().map(|p| p.vector()).sum();
    let mut lines = axis_census(&elements, &centroid);
    lines.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then(b.0.z.total_cmp(&a.0.z))
            .then(b.0.x.total_cmp(&a.0.x))
            .then(b.0.y.total_cmp(&a.0.y))
    });
    let count = |k: usize| lines.iter().filter(|l| l.1 == k).count();
    let (principal, top) = lines[0];

    let kind = if lines.len() == 1 {
        GroupKind::Cyclic(order)
    } else if order == 12 && count(3) == 4 && count(2) == 3 {
        GroupKind::Tetrahedral
    } else if order == 24 && count(4) == 3 && count(3) == 4 && count(2) == 6 {
        GroupKind::Octahedral
    } else if order == 60 && count(5) == 6 && count(3) == 10 && count(2) == 15 {
        GroupKind::Icosahedral
    } else if order == 2 * top && count(2) >= top && dihedral_flips(&lines, &principal) == top {
        GroupKind::Dihedral(top)
    } else {
        return Err(Error::UnrecognizedGroup { order });
    };

    let first = Rotation::from_axis_angle(principal, TAU / top as f64)?;
    let generators = match kind {
        GroupKind::Cyclic(_) => vec![first],
        _ => {
            let second = elements
                .iter()
                .find(|e| closure(&[first, **e]).len() == order)
                .ok_or(Error::UnrecognizedGroup { order })?;
            vec![first, *second]
        }
    };
    let generated = closure(&generators);
    if generated.len() != order
        || generated
            .iter()
            .any(|g| elements.iter().all(|e| e.distance(g) > 1e-6))
    {
        return Err(Error::UnrecognizedGroup { order });
    }
    Ok(PointGroup {
        kind,
        axis: Some(principal),
        generators,
    })
}

fn check_closed(elements: &[Rotation]) -> Result<()> {
    for a in elements {
        for b in elements {
            let ab = *a * *b;
            if elements.iter().all(|e| e.distance(&ab) > 1e-6) {
                return Err(Error::UnrecognizedGroup {
                    order: elements.len(),
                });
            }
        }
    }
    Ok(())
}

/// Rotation axes with the order of the cyclic subgroup about each. Axes point
/// towards `toward` when not perpendicular to it, and otherwise have their
/// first nonzero component positive.
fn axis_census(elements: &[Rotation], toward: &Vector3<f64>) -> Vec<(Vector3<f64>, usize)> {
    let mut lines: Vec<(Vector3<f64>, usize)> = Vec::new();
    for e in elements.iter().filter(|e| e.angle() > 1e-6) {
        let axis = e.axis();
        match lines.iter_mut().find(|l| l.0.dot(&axis).abs() > 1.0 - 1e-6) {
            Some(line) => line.1 += 1,
            None => lines.push((axis, 2)),
        }
    }
    for (axis, _) in lines.iter_mut() {
        let along = axis.dot(toward);
        let flip = if along.abs() > 1e-9 {
            along < 0.0
        } else {
            [axis.x, axis.y, axis.z]
                .iter()
                .find(|c| c.abs() > 1e-12)
                .is_some_and(|c| *c < 0.0)
        };
        if flip {
            *axis = -*axis;
        }
    }
    lines
}

fn dihedral_flips(lines: &[(Vector3<f64>, usize)], principal: &Vector3<f64>) -> usize {
    lines[1..]
        .iter()
        .filter(|l| l.1 == 2 && l.0.dot(principal).abs() < 1e-6)
        .count()
}
