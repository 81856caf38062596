//! The worked dihedral example: the symmetric group on four points together
//! with the seven-element lattice `M`, the two-level ambient subset `mu`, and
//! the six-level subset `eta` graded by the three dihedral subgroups.
//!
//! These values are used throughout the test suites and are shipped as text
//! fixtures by the command-line tool.

use std::sync::Arc;

use crate::group::{builtin_group, subgroup_closure, FiniteGroup, GroupHom};
use crate::lattice::{builtin_lattice, Lattice};
use crate::lsubset::LSubset;

pub fn s4_and_m() -> (Arc<FiniteGroup>, Arc<Lattice>) {
    let g = Arc::new(builtin_group("S(4)").unwrap());
    let m = Arc::new(builtin_lattice("example_M").unwrap());
    (g, m)
}

/// The four element classes that grade `eta`: the Klein four subgroup and the
/// non-Klein parts of the three dihedral subgroups of order eight.
pub struct DihedralClasses {
    pub v4: Vec<usize>,
    pub d1_rest: Vec<usize>,
    pub d2_rest: Vec<usize>,
    pub d3_rest: Vec<usize>,
}

pub fn dihedral_classes(g: &FiniteGroup) -> DihedralClasses {
    let el = |name: &str| g.element(name).unwrap();
    let v4: Vec<usize> = ["e", "(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"]
        .iter()
        .map(|n| el(n))
        .collect();
    let rest = |gen_a: &str, gen_b: &str| -> Vec<usize> {
        subgroup_closure(g, &[el(gen_a), el(gen_b)])
            .unwrap()
            .into_iter()
            .filter(|x| !v4.contains(x))
            .collect()
    };
    DihedralClasses {
        d1_rest: rest("(2 4)", "(1 2 3 4)"),
        d2_rest: rest("(1 2)", "(1 3 2 4)"),
        d3_rest: rest("(2 3)", "(1 3 4 2)"),
        v4,
    }
}

/// Ambient subset: `u` on the Klein four subgroup, `d` elsewhere.
pub fn mu_example(g: &Arc<FiniteGroup>, m: &Arc<Lattice>) -> LSubset {
    let classes = dihedral_classes(g);
    let u = m.element("u").unwrap();
    let d = m.element("d").unwrap();
    let assignments: Vec<(usize, usize)> = classes.v4.iter().map(|&x| (x, u)).collect();
    LSubset::make(g.clone(), m.clone(), &assignments, d).unwrap()
}

/// Graded subset: `u` at the identity, `d` on the rest of the Klein four
/// subgroup, `a`/`b`/`c` on the non-Klein parts of the three dihedral
/// subgroups, and `f` on the eight remaining elements.
pub fn eta_example(g: &Arc<FiniteGroup>, m: &Arc<Lattice>) -> LSubset {
    let classes = dihedral_classes(g);
    let val = |name: &str| m.element(name).unwrap();
    let mut assignments: Vec<(usize, usize)> = vec![(g.identity(), val("u"))];
    for &x in classes.v4.iter().filter(|&&x| x != g.identity()) {
        assignments.push((x, val("d")));
    }
    for &x in &classes.d1_rest {
        assignments.push((x, val("a")));
    }
    for &x in &classes.d2_rest {
        assignments.push((x, val("b")));
    }
    for &x in &classes.d3_rest {
        assignments.push((x, val("c")));
    }
    LSubset::make(g.clone(), m.clone(), &assignments, val("f")).unwrap()
}

/// The parity map from the symmetric group on three points onto the cyclic
/// group of order two.
pub fn sign_hom() -> (Arc<FiniteGroup>, GroupHom) {
    let s3 = Arc::new(builtin_group("S(3)").unwrap());
    let c2 = Arc::new(builtin_group("C(2)").unwrap());
    let map: Vec<usize> = s3
        .names()
        .iter()
        .map(|n| {
            let cycles = crate::group::parse_cycle_text(n).unwrap();
            usize::from(!crate::group::cycles_are_even(&cycles))
        })
        .collect();
    let hom = GroupHom::new(s3.clone(), c2, map).unwrap();
    (s3, hom)
}
