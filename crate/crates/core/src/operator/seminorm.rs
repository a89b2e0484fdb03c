use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::domain::{Matrix, OperatorElement, Vector};

/// The seminorm families: `p_𝔐` (weak), `p^𝔐` (strong), `p^𝔐_†` (strong*).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeminormKind {
    Weak,
    Strong,
    StrongStar,
}

impl SeminormKind {
    pub const ALL: [SeminormKind; 3] = [SeminormKind::Weak, SeminormKind::Strong, SeminormKind::StrongStar];

    pub fn as_str(&self) -> &'static str {
        match self {
            SeminormKind::Weak => "weak",
            SeminormKind::Strong => "strong",
            SeminormKind::StrongStar => "strong_star",
        }
    }
}

pub type VectorSet = Vec<Vector>;

/// `(Xξ | η) = η† X ξ`.
pub fn inner(x: &Matrix, xi: &Vector, eta: &Vector) -> num_complex::Complex64 {
    eta.dotc(&(x * xi))
}

pub fn eval_seminorm(x: &OperatorElement, set: &[Vector], kind: SeminormKind) -> f64 {
    let m = x.matrix();
    match kind {
        SeminormKind::Weak => {
            let images: Vec<Vector> = set.iter().map(|xi| m * xi).collect();
            let mut sup: f64 = 0.0;
            for image in &images {
                for eta in set {
                    sup = sup.max(eta.dotc(image).norm());
                }
            }
            sup
        }
        SeminormKind::Strong => set.iter().fold(0.0, |s, xi| s.max((m * xi).norm())),
        SeminormKind::StrongStar => {
            let adj = m.adjoint();
            set.iter().fold(0.0, |s, xi| s.max((m * xi).norm() + (&adj * xi).norm()))
        }
    }
}

/// `sup_{ξ ∈ 𝔐} ‖ξ‖`.
pub fn set_radius(set: &[Vector]) -> f64 {
    set.iter().fold(0.0, |s, v| s.max(v.norm()))
}

/// A bounded subset of the domain: an explicit finite set, or the polydisc
/// `{v : |v_i| ≤ r_i}`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundedSet {
    Finite(VectorSet),
    Polydisc(Vec<f64>),
}

const CONTAIN_TOL: f64 = 1e-12;

fn same_vector(a: &Vector, b: &Vector) -> bool {
    (a - b).norm() <= CONTAIN_TOL * a.norm().max(1.0)
}

impl BoundedSet {
    pub fn contains_vector(&self, v: &Vector) -> bool {
        match self {
            BoundedSet::Finite(set) => set.iter().any(|w| same_vector(v, w)),
            BoundedSet::Polydisc(r) => {
                v.len() == r.len() && v.iter().zip(r).all(|(z, &ri)| z.norm() <= ri * (1.0 + CONTAIN_TOL) + 1e-300)
            }
        }
    }

    pub fn contains_set(&self, other: &BoundedSet) -> bool {
        match other {
            BoundedSet::Finite(set) => set.iter().all(|v| self.contains_vector(v)),
            BoundedSet::Polydisc(r) => match self {
                BoundedSet::Polydisc(s) => r.len() == s.len() && r.iter().zip(s).all(|(&ri, &si)| ri <= si * (1.0 + CONTAIN_TOL)),
                BoundedSet::Finite(_) => r.iter().all(|&ri| ri == 0.0) && self.contains_vector(&Vector::zeros(r.len())),
            },
        }
    }

    /// A set containing `A·𝔐`: exact for finite sets; for polydiscs the
    /// coordinate bound `Σ_j |A_ij| r_j`, which is exact for diagonal `A`.
    pub fn image_hull(&self, a: &Matrix) -> BoundedSet {
        match self {
            BoundedSet::Finite(set) => BoundedSet::Finite(set.iter().map(|v| a * v).collect()),
            BoundedSet::Polydisc(r) => BoundedSet::Polydisc(
                (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)].norm() * r[j]).sum()).collect(),
            ),
        }
    }

    /// The union, or for polydiscs the coordinate-wise larger one.
    pub fn union_hull(&self, other: &BoundedSet) -> BoundedSet {
        match (self, other) {
            (BoundedSet::Finite(a), BoundedSet::Finite(b)) => BoundedSet::Finite(a.iter().chain(b).cloned().collect()),
            (BoundedSet::Polydisc(a), BoundedSet::Polydisc(b)) => {
                BoundedSet::Polydisc(a.iter().zip(b).map(|(x, y)| x.max(*y)).collect())
            }
            (BoundedSet::Polydisc(r), BoundedSet::Finite(s)) | (BoundedSet::Finite(s), BoundedSet::Polydisc(r)) => {
                BoundedSet::Polydisc(
                    r.iter().enumerate().map(|(i, &ri)| s.iter().fold(ri, |m, v| m.max(v[i].norm()))).collect(),
                )
            }
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            BoundedSet::Finite(set) => set_radius(set),
            BoundedSet::Polydisc(r) => r.iter().map(|x| x * x).sum::<f64>().sqrt(),
        }
    }

    /// Seminorm over the set. Polydiscs support only diagonal operators,
    /// where the suprema have closed forms; `None` otherwise.
    pub fn eval(&self, x: &OperatorElement, kind: SeminormKind) -> Option<f64> {
        match self {
            BoundedSet::Finite(set) => Some(eval_seminorm(x, set, kind)),
            BoundedSet::Polydisc(r) => {
                let m = x.matrix();
                let diagonal = (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)].norm() == 0.0));
                if !diagonal {
                    return None;
                }
                let strong = r.iter().enumerate().map(|(i, ri)| (m[(i, i)].norm() * ri).powi(2)).sum::<f64>().sqrt();
                Some(match kind {
                    SeminormKind::Weak => r.iter().enumerate().map(|(i, ri)| m[(i, i)].norm() * ri * ri).sum(),
                    SeminormKind::Strong => strong,
                    SeminormKind::StrongStar => 2.0 * strong,
                })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// All finite subsets of the domain; `sets` holds the ones evaluated.
    FiniteSets,
    Custom,
}

/// A family `ℬ` of bounded sets indexing uniform seminorms.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedSetFamily {
    pub kind: FamilyKind,
    pub sets: Vec<BoundedSet>,
}

impl BoundedSetFamily {
    /// `ℬ_f` with singletons and pairs from `pool` materialised.
    pub fn finite_sets(pool: &[Vector]) -> Self {
        let mut sets: Vec<BoundedSet> = pool.iter().map(|v| BoundedSet::Finite(vec![v.clone()])).collect();
        for i in 0..pool.len() {
            for j in i + 1..pool.len() {
                sets.push(BoundedSet::Finite(vec![pool[i].clone(), pool[j].clone()]));
            }
        }
        Self { kind: FamilyKind::FiniteSets, sets }
    }

    pub fn custom(sets: Vec<BoundedSet>) -> Self {
        Self { kind: FamilyKind::Custom, sets }
    }

    fn member_containing(&self, set: &BoundedSet) -> bool {
        self.sets.iter().any(|m| m.contains_set(set))
    }
}

/// Result of [`admissible_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    pub witness: Option<Value>,
}

/// Checks (i) every pool singleton lies in a member, (ii) every pairwise
/// union lies in a member, (iii) `A·𝔐` lies in a member for every member
/// and generator `A`, all up to containment.
///
/// `ℬ_f` is closed under all three operations (they produce finite sets),
/// so it passes by construction.
pub fn admissible_check(family: &BoundedSetFamily, pool: &[Vector], generators: &[Matrix]) -> Admissibility {
    let fail = |w: Value| Admissibility { admissible: false, witness: Some(w) };
    if family.kind == FamilyKind::FiniteSets {
        return Admissibility { admissible: true, witness: None };
    }
    for (i, v) in pool.iter().enumerate() {
        if !family.member_containing(&BoundedSet::Finite(vec![v.clone()])) {
            return fail(json!({"condition": "singletons", "pool_index": i}));
        }
    }
    for (i, a) in family.sets.iter().enumerate() {
        for (j, b) in family.sets.iter().enumerate().skip(i + 1) {
            if !family.member_containing(&a.union_hull(b)) {
                return fail(json!({"condition": "union", "sets": [i, j]}));
            }
        }
    }
    for (i, m) in family.sets.iter().enumerate() {
        for (g, a) in generators.iter().enumerate() {
            if !family.member_containing(&m.image_hull(a)) {
                return fail(json!({"condition": "action", "set": i, "generator": g}));
            }
        }
    }
    Admissibility { admissible: true, witness: None }
}
