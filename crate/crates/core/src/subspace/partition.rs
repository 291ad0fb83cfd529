//! Partition of a reference set into classes of mutually non-orthogonal
//! states (transitive closure of `|⟨ψᵢ|ψⱼ⟩| > tol`).

use serde::{Deserialize, Serialize};

use crate::quantum::{overlap, ProductState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    /// Every member carries the same `A` factor up to phase.
    ASh,
    /// Every member carries the same `B` factor up to phase.
    BSh,
    Singleton,
    /// Some non-orthogonal pair shares neither factor.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceClass {
    /// 0-based indices into the reference list, ascending.
    pub members: Vec<usize>,
    pub kind: ClassKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferencePartition {
    pub classes: Vec<ReferenceClass>,
    pub tolerance: f64,
}

impl ReferencePartition {
    pub fn has_mixed(&self) -> bool {
        self.classes.iter().any(|c| c.kind == ClassKind::Mixed)
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Connected components of the non-orthogonality graph, labelled by kind.
///
/// States must share dims; mismatched pairs are treated as orthogonal.
pub fn partition_reference_set(states: &[ProductState], tol: f64) -> ReferencePartition {
    let k = states.len();
    let mut parent: Vec<usize> = (0..k).collect();
    let ov = |i: usize, j: usize| -> f64 {
        overlap(states[i].state(), states[j].state())
            .map(|z| z.norm())
            .unwrap_or(0.0)
    };
    for i in 0..k {
        for j in i + 1..k {
            if ov(i, j) > tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; k];
    for i in 0..k {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    let local = |i: usize, j: usize| states[i].local_overlaps(&states[j]).unwrap_or((0.0, 0.0));
    let classes = groups
        .into_iter()
        .map(|members| {
            let kind = if members.len() == 1 {
                ClassKind::Singleton
            } else {
                let pairs: Vec<(usize, usize)> = members
                    .iter()
                    .enumerate()
                    .flat_map(|(x, &i)| members[x + 1..].iter().map(move |&j| (i, j)))
                    .collect();
                let mixed = pairs.iter().any(|&(i, j)| {
                    let (la, lb) = local(i, j);
                    ov(i, j) > tol && la <= 1.0 - tol && lb <= 1.0 - tol
                });
                if mixed {
                    ClassKind::Mixed
                } else if pairs.iter().all(|&(i, j)| local(i, j).0 > 1.0 - tol) {
                    ClassKind::ASh
                } else if pairs.iter().all(|&(i, j)| local(i, j).1 > 1.0 - tol) {
                    ClassKind::BSh
                } else {
                    // Ruled out analytically; only reachable through rounding.
                    ClassKind::Mixed
                }
            };
            ReferenceClass { members, kind }
        })
        .collect();
    ReferencePartition {
        classes,
        tolerance: tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn tiles_are_singletons() {
        let tiles = fixtures::tiles_upb();
        for i in 0..5 {
            for j in i + 1..5 {
                assert!(overlap(tiles[i].state(), tiles[j].state()).unwrap().norm() < 1e-12);
            }
        }
        let p = partition_reference_set(&tiles, 1e-10);
        assert_eq!(p.classes.len(), 5);
        assert!(p.classes.iter().all(|c| c.kind == ClassKind::Singleton));
    }

    #[test]
    fn shared_a_chain() {
        let s = vec![
            ProductState::from_real(&[1.0, 0.0], &[1.0, 0.0]),
            ProductState::from_real(&[1.0, 0.0], &[0.0, 1.0]),
            ProductState::from_real(&[1.0, 0.0], &[1.0, 1.0]),
        ];
        let p = partition_reference_set(&s, 1e-10);
        assert_eq!(
            p.classes,
            vec![ReferenceClass {
                members: vec![0, 1, 2],
                kind: ClassKind::ASh
            }]
        );
    }

    #[test]
    fn shared_b_and_mixed() {
        let s = vec![
            ProductState::from_real(&[1.0, 0.0], &[1.0, 0.0]),
            ProductState::from_real(&[1.0, 1.0], &[1.0, 0.0]),
        ];
        assert_eq!(partition_reference_set(&s, 1e-10).classes[0].kind, ClassKind::BSh);
        let p = partition_reference_set(&fixtures::example1_pair(), 1e-10);
        assert_eq!(p.classes.len(), 1);
        assert_eq!(p.classes[0].kind, ClassKind::Mixed);
        assert!(p.has_mixed());
    }

    #[test]
    fn gram_is_block_diagonal() {
        let mut s = fixtures::example1_pair();
        s.push(ProductState::from_real(&[0.0, 1.0], &[1.0, -1.0]));
        s.push(ProductState::from_real(&[0.0, 1.0], &[0.0, 1.0]));
        let p = partition_reference_set(&s, 1e-10);
        let class_of = |i: usize| p.classes.iter().position(|c| c.members.contains(&i)).unwrap();
        for i in 0..s.len() {
            for j in 0..s.len() {
                if class_of(i) != class_of(j) {
                    assert!(overlap(s[i].state(), s[j].state()).unwrap().norm() <= 1e-10);
                }
            }
        }
    }
}
