//! Seeded random instance generation, definition-level oracles that are
//! independent of the computational formulas, and a registry of executable
//! theorem checks that the suite runner evaluates case by case.

use std::ops::ControlFlow;
use std::sync::{Arc, LazyLock, OnceLock};
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::{
    builtin_group, crisp_pronormal, cycles_are_even, parse_cycle_text, subgroup_closure,
    FiniteGroup, GroupHom,
};
use crate::lattice::{builtin_lattice, Lattice};
use crate::lsubgroup::{
    central_chain, closure_series, commutator, conjugate, for_each_lsubgroup_between, generate,
    is_lsubgroup, is_lsubgroup_by_levels, is_lsubgroup_of, is_lsubgroup_of_by_levels, is_maximal,
    is_normal, is_normal_by_conjugates, is_pronormal, is_pronormal_with, is_subnormal,
    normal_closure, normalizer, normalizer_by_conjugation, normalizer_chain, trivial_of, Side,
    TheoryError, Verdict, DEFAULT_MAXIMALITY_BUDGET,
};
use crate::lsubset::{LPoint, LSubset};

pub const ORACLE_GROUP_CAP: usize = 6;
pub const ORACLE_LATTICE_CAP: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("bad instance specification: {0}")]
    BadSpec(String),
    #[error("instance exceeds the oracle cap ({0} group elements, {1} lattice elements)")]
    OracleCapExceeded(usize, usize),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// Everything needed to regenerate one random instance bit for bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSpec {
    pub seed: u64,
    pub max_group_order: usize,
    pub max_lattice_size: usize,
    pub chain_only: bool,
    pub with_hom: bool,
    pub nilpotent_ambient: bool,
}

impl InstanceSpec {
    pub fn new(seed: u64, max_group_order: usize, max_lattice_size: usize) -> InstanceSpec {
        InstanceSpec {
            seed,
            max_group_order,
            max_lattice_size,
            chain_only: false,
            with_hom: false,
            nilpotent_ambient: false,
        }
    }

    fn validate(&self) -> Result<(), VerifyError> {
        if self.max_group_order < 1 {
            return Err(VerifyError::BadSpec(
                "max group order must be positive".into(),
            ));
        }
        if self.max_lattice_size < 2 {
            return Err(VerifyError::BadSpec(
                "max lattice size must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

/// A generated instance: ambient subgroup `mu`, subgroup `eta` of it, an
/// intermediate subgroup between the two, a raw seed subset for generation
/// checks, and optionally a surjective homomorphism out of the group.
#[derive(Debug, Clone)]
pub struct Instance {
    pub spec: InstanceSpec,
    pub group: Arc<FiniteGroup>,
    pub lattice: Arc<Lattice>,
    pub mu: LSubset,
    pub eta: LSubset,
    pub between: LSubset,
    pub seed_subset: LSubset,
    pub hom: Option<GroupHom>,
    pronormal: OnceLock<Verdict<LPoint, LPoint>>,
}

impl Instance {
    /// Pronormality of `eta` in `mu`, computed once and shared by the checks.
    pub fn pronormal_eta_mu(&self) -> &Verdict<LPoint, LPoint> {
        self.pronormal
            .get_or_init(|| is_pronormal(&self.eta, &self.mu).expect("generated instance is valid"))
    }

    pub fn distributive(&self) -> bool {
        self.lattice.is_distributive()
    }

    pub fn chain_lattice(&self) -> bool {
        self.lattice.is_upper_well_ordered()
    }

    pub fn within_oracle_cap(&self) -> bool {
        self.group.len() <= ORACLE_GROUP_CAP && self.lattice.len() <= ORACLE_LATTICE_CAP
    }

    pub fn within_maximality_budget(&self) -> bool {
        self.group.len() * self.lattice.len() <= DEFAULT_MAXIMALITY_BUDGET
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn pick_group(rng: &mut ChaCha8Rng, spec: &InstanceSpec) -> Arc<FiniteGroup> {
    let cap = spec.max_group_order;
    let mut keys: Vec<String> = Vec::new();
    if spec.nilpotent_ambient {
        for n in 2..=cap.min(16) {
            keys.push(format!("C({n})"));
        }
        if cap >= 4 {
            keys.push("V4".into());
        }
        if cap >= 8 {
            keys.push("Q8".into());
            keys.push("D(4)".into());
        }
        if keys.is_empty() {
            keys.push("trivial".into());
        }
    } else {
        keys.push("trivial".into());
        for n in 2..=cap.min(16) {
            keys.push(format!("C({n})"));
        }
        if cap >= 4 {
            keys.push("V4".into());
        }
        if cap >= 6 {
            keys.push("S(3)".into());
        }
        if cap >= 8 {
            keys.push("Q8".into());
        }
        for n in 3..=8 {
            if 2 * n <= cap {
                keys.push(format!("D({n})"));
            }
        }
        if cap >= 24 {
            keys.push("S(4)".into());
        }
    }
    let key = &keys[rng.gen_range(0..keys.len())];
    Arc::new(builtin_group(key).unwrap())
}

fn random_lattice(rng: &mut ChaCha8Rng, size: usize) -> Option<Lattice> {
    if size < 3 {
        return None;
    }
    // Random covers among the middle elements, bounded below and above.
    let mid = size - 2;
    let names: Vec<String> = std::iter::once("bot".to_string())
        .chain((0..mid).map(|i| format!("m{i}")))
        .chain(std::iter::once("top".to_string()))
        .collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    for _ in 0..20 {
        let mut covers: Vec<(&str, &str)> = Vec::new();
        for i in 0..mid {
            // Each middle element sits above the bottom or above an earlier
            // middle element, and below the top or a later middle element.
            if i > 0 && rng.gen_bool(0.5) {
                let below = rng.gen_range(0..i);
                covers.push((name_refs[1 + below], name_refs[1 + i]));
            } else {
                covers.push((name_refs[0], name_refs[1 + i]));
            }
            if i + 1 < mid && rng.gen_bool(0.3) {
                let above = rng.gen_range(i + 1..mid);
                covers.push((name_refs[1 + i], name_refs[1 + above]));
            } else {
                covers.push((name_refs[1 + i], name_refs[mid + 1]));
            }
        }
        if let Ok(lattice) = Lattice::from_covers(&name_refs, &covers) {
            return Some(lattice);
        }
    }
    None
}

fn pick_lattice(rng: &mut ChaCha8Rng, spec: &InstanceSpec) -> Arc<Lattice> {
    let cap = spec.max_lattice_size.max(2);
    if spec.chain_only {
        let n = rng.gen_range(2..=cap);
        return Arc::new(builtin_lattice(&format!("chain({n})")).unwrap());
    }
    let mut options: Vec<Lattice> = Vec::new();
    let n = rng.gen_range(2..=cap);
    options.push(builtin_lattice(&format!("chain({n})")).unwrap());
    if cap >= 4 {
        options.push(builtin_lattice("boolean(2)").unwrap());
    }
    if cap >= 5 {
        options.push(builtin_lattice("diamond_M3").unwrap());
        options.push(builtin_lattice("pentagon_N5").unwrap());
    }
    if cap >= 7 {
        options.push(builtin_lattice("example_M").unwrap());
    }
    let random_size = rng.gen_range(3..=cap.max(3));
    if let Some(random) = random_lattice(rng, random_size) {
        if random.len() <= cap {
            options.push(random);
        }
    }
    Arc::new(options.swap_remove(rng.gen_range(0..options.len())))
}

fn random_subgroup_of(rng: &mut ChaCha8Rng, g: &FiniteGroup, parent: &[usize]) -> Vec<usize> {
    let k = rng.gen_range(0..=2usize);
    let gens: Vec<usize> = (0..k)
        .map(|_| parent[rng.gen_range(0..parent.len())])
        .collect();
    subgroup_closure(g, &gens).unwrap()
}

/// Descending subgroup chains indexed by the linear extension of the
/// lattice; the induced value maps have every level equal to one of the
/// chain subgroups, so they are subgroups by construction.
fn chain_to_subset(g: &Arc<FiniteGroup>, lat: &Arc<Lattice>, chain: &[Vec<usize>]) -> LSubset {
    let ext = lat.linear_extension();
    let mut prefix_joins = Vec::with_capacity(ext.len() + 1);
    prefix_joins.push(lat.bottom());
    for (i, &e) in ext.iter().enumerate() {
        prefix_joins.push(lat.join2(prefix_joins[i], e));
    }
    let values = (0..g.len())
        .map(|x| {
            let mut k = 0;
            while k < chain.len() && chain[k].contains(&x) {
                k += 1;
            }
            prefix_joins[k]
        })
        .collect();
    LSubset::from_values(g.clone(), lat.clone(), values)
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

fn make_hom(rng: &mut ChaCha8Rng, spec: &InstanceSpec) -> (Arc<FiniteGroup>, GroupHom) {
    let cap = spec.max_group_order;
    let mut variants: Vec<u8> = vec![0, 1]; // identity, collapse
    if cap >= 6 {
        variants.push(2); // parity of a symmetric group
    }
    if cap >= 4 {
        variants.push(3); // cyclic reduction
    }
    if cap >= 8 {
        variants.push(4); // parity of a dihedral group
    }
    match variants[rng.gen_range(0..variants.len())] {
        2 => {
            let g = Arc::new(builtin_group("S(3)").unwrap());
            let hom = parity_hom(&g).unwrap();
            (g, hom)
        }
        3 => {
            let composites = [4usize, 6, 8, 9, 10, 12];
            let pool: Vec<usize> = composites.iter().copied().filter(|&n| n <= cap).collect();
            let n = pool[rng.gen_range(0..pool.len())];
            let divisors: Vec<usize> = (1..n).filter(|d| n.is_multiple_of(*d)).collect();
            let d = divisors[rng.gen_range(0..divisors.len())];
            let g = Arc::new(builtin_group(&format!("C({n})")).unwrap());
            let target = Arc::new(builtin_group(&format!("C({d})")).unwrap());
            let map: Vec<usize> = (0..n).map(|i| i % d).collect();
            let hom = GroupHom::new(g.clone(), target, map).unwrap();
            (g, hom)
        }
        4 => {
            let pool: Vec<usize> = (3..=8).filter(|n| 2 * n <= cap).collect();
            let n = pool[rng.gen_range(0..pool.len())];
            let g = Arc::new(builtin_group(&format!("D({n})")).unwrap());
            match parity_hom(&g) {
                Some(hom) => (g, hom),
                None => {
                    let trivial = Arc::new(builtin_group("trivial").unwrap());
                    let hom = GroupHom::new(g.clone(), trivial, vec![0; g.len()]).unwrap();
                    (g, hom)
                }
            }
        }
        1 => {
            let g = pick_group(rng, spec);
            let trivial = Arc::new(builtin_group("trivial").unwrap());
            let hom = GroupHom::new(g.clone(), trivial, vec![0; g.len()]).unwrap();
            (g, hom)
        }
        _ => {
            let g = pick_group(rng, spec);
            let hom = GroupHom::new(g.clone(), g.clone(), (0..g.len()).collect()).unwrap();
            (g, hom)
        }
    }
}

/// The parity homomorphism onto the two-element cyclic group, when it is
/// surjective on this permutation group.
fn parity_hom(g: &Arc<FiniteGroup>) -> Option<GroupHom> {
    let map: Vec<usize> = g
        .names()
        .iter()
        .map(|n| {
            let cycles = parse_cycle_text(n).ok()?;
            Some(usize::from(!cycles_are_even(&cycles)))
        })
        .collect::<Option<_>>()?;
    if !map.contains(&1) {
        return None;
    }
    let c2 = Arc::new(builtin_group("C(2)").unwrap());
    GroupHom::new(g.clone(), c2, map).ok()
}

/// Deterministically generates an instance from its specification.
pub fn gen_instance(spec: &InstanceSpec) -> Result<Instance, VerifyError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(spec.seed));
    let (group, hom) = if spec.with_hom {
        let (g, h) = make_hom(&mut rng, spec);
        (g, Some(h))
    } else {
        (pick_group(&mut rng, spec), None)
    };
    let lattice = pick_lattice(&mut rng, spec);

    let all: Vec<usize> = (0..group.len()).collect();
    let ext_len = lattice.len();
    let mut ambient_chain: Vec<Vec<usize>> = Vec::with_capacity(ext_len);
    let mut parent: Vec<usize> = all.clone();
    for i in 0..ext_len {
        let next = if i == 0 && rng.gen_bool(0.8) {
            all.clone()
        } else if rng.gen_bool(0.45) {
            parent.clone()
        } else {
            random_subgroup_of(&mut rng, &group, &parent)
        };
        ambient_chain.push(next.clone());
        parent = next;
    }

    let mut sub_chain: Vec<Vec<usize>> = Vec::with_capacity(ext_len);
    let mut between_chain: Vec<Vec<usize>> = Vec::with_capacity(ext_len);
    let mut sub_parent = ambient_chain[0].clone();
    let mut between_parent = ambient_chain[0].clone();
    for i in 0..ext_len {
        let bound = intersect_sorted(&sub_parent, &ambient_chain[i]);
        let next = if rng.gen_bool(0.5) {
            bound.clone()
        } else {
            random_subgroup_of(&mut rng, &group, &bound)
        };
        // An intermediate subgroup: close the lower stage together with a
        // few ambient samples, then cut back under the previous stage and
        // the ambient stage. Intersections of subgroups are subgroups.
        let mut seed = next.clone();
        for _ in 0..rng.gen_range(0..=1usize) {
            seed.push(ambient_chain[i][rng.gen_range(0..ambient_chain[i].len())]);
        }
        let closed = subgroup_closure(&group, &seed).unwrap();
        let mid = intersect_sorted(
            &intersect_sorted(&between_parent, &closed),
            &ambient_chain[i],
        );
        sub_chain.push(next.clone());
        between_chain.push(mid.clone());
        sub_parent = next;
        between_parent = mid;
    }

    let mu = chain_to_subset(&group, &lattice, &ambient_chain);
    let eta = chain_to_subset(&group, &lattice, &sub_chain);
    let between = chain_to_subset(&group, &lattice, &between_chain);

    let seed_values: Vec<usize> = (0..group.len())
        .map(|x| {
            let down = lattice.down_set(mu.value(x));
            down[rng.gen_range(0..down.len())]
        })
        .collect();
    let seed_subset = LSubset::from_values(group.clone(), lattice.clone(), seed_values);

    Ok(Instance {
        spec: spec.clone(),
        group,
        lattice,
        mu,
        eta,
        between,
        seed_subset,
        hom,
        pronormal: OnceLock::new(),
    })
}

fn axioms_hold(g: &FiniteGroup, lat: &Lattice, values: &[usize]) -> bool {
    for x in 0..g.len() {
        if values[g.inv(x)] != values[x] {
            return false;
        }
        for y in 0..g.len() {
            if !lat.leq(lat.meet2(values[x], values[y]), values[g.mul(x, y)]) {
                return false;
            }
        }
    }
    true
}

fn for_each_value_map(
    g: &FiniteGroup,
    lat: &Lattice,
    mut f: impl FnMut(&[usize]) -> ControlFlow<()>,
) {
    let n = g.len();
    let m = lat.len();
    let mut values = vec![0usize; n];
    loop {
        if let ControlFlow::Break(()) = f(&values) {
            return;
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return;
            }
            values[pos] += 1;
            if values[pos] < m {
                break;
            }
            values[pos] = 0;
            pos += 1;
        }
    }
}

/// Intersection of every lattice-valued subgroup of the group that contains
/// the seed, found by exhaustive enumeration of value maps. This is the
/// definition of the generated subgroup, kept free of the level formula.
pub fn oracle_generate(seed: &LSubset, ambient: &LSubset) -> Result<LSubset, VerifyError> {
    let g = seed.group();
    let lat = seed.lattice();
    if g.len() > ORACLE_GROUP_CAP || lat.len() > ORACLE_LATTICE_CAP {
        return Err(VerifyError::OracleCapExceeded(g.len(), lat.len()));
    }
    if !ambient.contains(seed).map_err(TheoryError::from)? {
        return Err(VerifyError::Theory(TheoryError::NotContained));
    }
    let mut meet_values = vec![lat.top(); g.len()];
    for_each_value_map(g, lat, |values| {
        let contains_seed = (0..g.len()).all(|x| lat.leq(seed.value(x), values[x]));
        if contains_seed && axioms_hold(g, lat, values) {
            for x in 0..g.len() {
                meet_values[x] = lat.meet2(meet_values[x], values[x]);
            }
        }
        ControlFlow::Continue(())
    });
    Ok(LSubset::from_values(g.clone(), lat.clone(), meet_values))
}

/// Union of every lattice-valued subgroup of the ambient in which the given
/// subgroup is normal, found by exhaustive enumeration. This is the
/// maximality description of the normalizer.
pub fn oracle_normalizer_maximality(
    sub: &LSubset,
    ambient: &LSubset,
) -> Result<LSubset, VerifyError> {
    let g = sub.group();
    let lat = sub.lattice();
    if g.len() > ORACLE_GROUP_CAP || lat.len() > ORACLE_LATTICE_CAP {
        return Err(VerifyError::OracleCapExceeded(g.len(), lat.len()));
    }
    if !ambient.contains(sub).map_err(TheoryError::from)? {
        return Err(VerifyError::Theory(TheoryError::NotContained));
    }
    let mut join_values = vec![lat.bottom(); g.len()];
    for_each_value_map(g, lat, |values| {
        let in_box = (0..g.len())
            .all(|x| lat.leq(sub.value(x), values[x]) && lat.leq(values[x], ambient.value(x)));
        if in_box && axioms_hold(g, lat, values) {
            let sub_normal_inside = (0..g.len()).all(|x| {
                (0..g.len())
                    .all(|y| lat.leq(lat.meet2(sub.value(x), values[y]), sub.value(g.conj(y, x))))
            });
            if sub_normal_inside {
                for x in 0..g.len() {
                    join_values[x] = lat.join2(join_values[x], values[x]);
                }
            }
        }
        ControlFlow::Continue(())
    });
    Ok(LSubset::from_values(g.clone(), lat.clone(), join_values))
}

/// Re-checks a pronormality certificate with straightforward inline loops
/// that do not share code with the search: the certificate's conjugate must
/// equal the challenge's, and the certificate must be a point of the
/// subgroup generated by the subset and the challenge's conjugate.
pub fn recheck_pronormal_certificate(
    sub: &LSubset,
    ambient: &LSubset,
    challenge: LPoint,
    certificate: LPoint,
) -> bool {
    let g = sub.group();
    let lat = sub.lattice();
    if !lat.leq(challenge.value, ambient.value(challenge.support)) {
        return false;
    }
    let conj_of = |p: LPoint| -> Vec<usize> {
        (0..g.len())
            .map(|w| lat.meet2(p.value, sub.value(g.conj(p.support, w))))
            .collect()
    };
    let chal_conj = conj_of(challenge);
    if conj_of(certificate) != chal_conj {
        return false;
    }
    let union: Vec<usize> = (0..g.len())
        .map(|x| lat.join2(sub.value(x), chal_conj[x]))
        .collect();
    let tip = lat.join(union.iter().copied());
    let mut value_at_support = lat.bottom();
    for a in 0..lat.len() {
        if !lat.leq(a, tip) {
            continue;
        }
        let level: Vec<usize> = (0..g.len()).filter(|&x| lat.leq(a, union[x])).collect();
        let mut member = vec![false; g.len()];
        member[g.identity()] = true;
        let mut list = vec![g.identity()];
        for &x in &level {
            if !member[x] {
                member[x] = true;
                list.push(x);
            }
        }
        let mut i = 0;
        while i < list.len() {
            for j in 0..list.len() {
                let p = g.mul(list[i], list[j]);
                if !member[p] {
                    member[p] = true;
                    list.push(p);
                }
            }
            i += 1;
        }
        if member[certificate.support] {
            value_at_support = lat.join2(value_at_support, a);
        }
    }
    lat.leq(certificate.value, value_at_support)
}

// ---------------------------------------------------------------------------
// Theorem registry

/// One executable theorem: a name, an applicability predicate, and a check
/// that either passes or reports a counterexample description.
pub trait TheoremCheck: Send + Sync {
    fn name(&self) -> &'static str;
    fn applies(&self, instance: &Instance) -> bool;
    fn check(&self, instance: &Instance) -> Result<(), String>;
}

macro_rules! theorem {
    ($ty:ident, $name:literal, $applies:expr, $check:expr) => {
        struct $ty;
        impl TheoremCheck for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn applies(&self, instance: &Instance) -> bool {
                let applies: fn(&Instance) -> bool = $applies;
                applies(instance)
            }
            fn check(&self, instance: &Instance) -> Result<(), String> {
                let check: fn(&Instance) -> Result<(), String> = $check;
                check(instance)
            }
        }
    };
}

fn always(_: &Instance) -> bool {
    true
}

fn fail(msg: impl Into<String>) -> Result<(), String> {
    Err(msg.into())
}

fn show(s: &LSubset) -> String {
    s.to_string()
}

mod checks {
    use super::*;

    pub fn subgroup_criteria_agree(i: &Instance) -> Result<(), String> {
        for (label, s) in [("eta", &i.eta), ("mu", &i.mu), ("between", &i.between)] {
            let by_axioms = is_lsubgroup(s).holds;
            let by_levels = is_lsubgroup_by_levels(s);
            if by_axioms != by_levels {
                return fail(format!(
                    "axiom and level criteria disagree on {label}: {}",
                    show(s)
                ));
            }
            if !by_axioms {
                return fail(format!("generated {label} fails the subgroup axioms"));
            }
        }
        let of_axioms = is_lsubgroup_of(&i.eta, &i.mu)
            .map_err(|e| e.to_string())?
            .holds;
        let of_levels = is_lsubgroup_of_by_levels(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        if of_axioms != of_levels || !of_axioms {
            return fail("relative subgroup criteria disagree or fail on eta in mu");
        }
        // The raw seed subset is rarely a subgroup; the two criteria must
        // still agree on it.
        if is_lsubgroup(&i.seed_subset).holds != is_lsubgroup_by_levels(&i.seed_subset) {
            return fail("axiom and level criteria disagree on the seed subset");
        }
        Ok(())
    }

    pub fn normal_criteria_agree(i: &Instance) -> Result<(), String> {
        let by_def = is_normal(&i.eta, &i.mu).map_err(|e| e.to_string())?.holds;
        let by_conj = is_normal_by_conjugates(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        if by_def != by_conj {
            return fail("definition and conjugate criteria for normality disagree");
        }
        let g = i.group.as_ref();
        let by_levels = (0..i.lattice.len()).all(|t| {
            let level = i.eta.level_subset(t).unwrap();
            level.is_empty()
                || crate::group::crisp_predicates(g, &i.mu.level_subset(t).unwrap(), &level)
                    .is_normal_in_ambient
        });
        if by_def != by_levels {
            return fail("definition and level criteria for normality disagree");
        }
        let n = normalizer(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        if by_def && n != i.mu {
            return fail("a normal subgroup must have the whole ambient as its normalizer");
        }
        if i.distributive() && !by_def && n == i.mu {
            return fail("normalizer equals the ambient but the subgroup is not normal");
        }
        Ok(())
    }

    pub fn tip_attained_at_identity(i: &Instance) -> Result<(), String> {
        let e = i.group.identity();
        for s in [&i.eta, &i.mu, &i.between] {
            if s.value(e) != s.tip() {
                return fail(format!("tip not attained at the identity: {}", show(s)));
            }
        }
        Ok(())
    }

    pub fn level_monotonicity_and_containment(i: &Instance) -> Result<(), String> {
        let lat = i.lattice.as_ref();
        for s in [&i.eta, &i.seed_subset] {
            for a in 0..lat.len() {
                for b in 0..lat.len() {
                    if lat.leq(a, b) {
                        let low = s.level_subset(a).unwrap();
                        let high = s.level_subset(b).unwrap();
                        if !high.iter().all(|x| low.contains(x)) {
                            return fail("level subsets are not monotone in the threshold");
                        }
                    }
                }
            }
        }
        for a in 0..lat.len() {
            let sub_level = i.eta.level_subset(a).unwrap();
            let ambient_level = i.mu.level_subset(a).unwrap();
            if !sub_level.iter().all(|x| ambient_level.contains(x)) {
                return fail("containment does not carry over to level subsets");
            }
        }
        Ok(())
    }

    pub fn set_product_associative(i: &Instance) -> Result<(), String> {
        let ab = i.eta.set_product(&i.between).map_err(|e| e.to_string())?;
        let left = ab.set_product(&i.seed_subset).map_err(|e| e.to_string())?;
        let bc = i
            .between
            .set_product(&i.seed_subset)
            .map_err(|e| e.to_string())?;
        let right = i.eta.set_product(&bc).map_err(|e| e.to_string())?;
        if left != right {
            return fail("set product is not associative on this triple");
        }
        Ok(())
    }

    pub fn generation_contains_and_fixes(i: &Instance) -> Result<(), String> {
        let generated = generate(&i.seed_subset, &i.mu).map_err(|e| e.to_string())?;
        if !generated
            .contains(&i.seed_subset)
            .map_err(|e| e.to_string())?
        {
            return fail("generated subgroup does not contain its seed");
        }
        if !i.mu.contains(&generated).map_err(|e| e.to_string())? {
            return fail("generated subgroup escapes the ambient");
        }
        let fixed = generate(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        if fixed != i.eta {
            return fail("generation moves a subgroup that is already closed");
        }
        Ok(())
    }

    pub fn generation_idempotent(i: &Instance) -> Result<(), String> {
        let once = generate(&i.seed_subset, &i.mu).map_err(|e| e.to_string())?;
        if !is_lsubgroup(&once).holds {
            return fail("generated subset fails the subgroup axioms");
        }
        let twice = generate(&once, &i.mu).map_err(|e| e.to_string())?;
        if once != twice {
            return fail("generation is not idempotent");
        }
        Ok(())
    }

    pub fn generated_levels_under_sup_property(i: &Instance) -> Result<(), String> {
        let generated = generate(&i.seed_subset, &i.mu).map_err(|e| e.to_string())?;
        let tip = i.seed_subset.tip();
        let lat = i.lattice.as_ref();
        for b in 0..lat.len() {
            if !lat.leq(b, tip) {
                continue;
            }
            let closed =
                subgroup_closure(&i.group, &i.seed_subset.level_subset(b).unwrap()).unwrap();
            let level = generated.level_subset(b).unwrap();
            if closed != level {
                return fail(format!(
                    "level {} of the generated subgroup is not the closure of the seed level",
                    lat.name(b)
                ));
            }
        }
        Ok(())
    }

    pub fn generate_matches_oracle(i: &Instance) -> Result<(), String> {
        let fast = generate(&i.seed_subset, &i.mu).map_err(|e| e.to_string())?;
        let slow = oracle_generate(&i.seed_subset, &i.mu).map_err(|e| e.to_string())?;
        if fast != slow {
            return fail(format!(
                "level-formula generation {} disagrees with the intersection oracle {}",
                show(&fast),
                show(&slow)
            ));
        }
        Ok(())
    }

    pub fn normalizer_matches_oracle(i: &Instance) -> Result<(), String> {
        let fast = normalizer(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        let slow = oracle_normalizer_maximality(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        if fast != slow {
            return fail(format!(
                "coset normalizer {} disagrees with the maximality oracle {}",
                show(&fast),
                show(&slow)
            ));
        }
        Ok(())
    }

    pub fn conjugates_are_wellformed(i: &Instance) -> Result<(), String> {
        let lat = i.lattice.as_ref();
        for z in 0..i.group.len() {
            for a in 0..lat.len() {
                if !lat.leq(a, i.mu.value(z)) {
                    continue;
                }
                let p = LPoint {
                    value: a,
                    support: z,
                };
                let conj = conjugate(&i.eta, p, &i.mu).map_err(|e| e.to_string())?;
                if !is_lsubgroup_of(&conj, &i.mu)
                    .map_err(|e| e.to_string())?
                    .holds
                {
                    return fail("conjugate is not a subgroup of the ambient");
                }
                if conj.tip() != lat.meet2(a, i.eta.tip()) {
                    return fail("conjugate tip is not the meet of the point value and the tip");
                }
            }
        }
        Ok(())
    }

    pub fn conjugate_levels_are_conjugated_levels(i: &Instance) -> Result<(), String> {
        let g = i.group.as_ref();
        let lat = i.lattice.as_ref();
        for z in 0..g.len() {
            for a in 0..lat.len() {
                if !lat.leq(a, i.mu.value(z)) {
                    continue;
                }
                let p = LPoint {
                    value: a,
                    support: z,
                };
                let conj = conjugate(&i.eta, p, &i.mu).map_err(|e| e.to_string())?;
                let z_inv = g.inv(z);
                for t in 0..lat.len() {
                    if !lat.leq(t, conj.tip()) {
                        continue;
                    }
                    let mut expected: Vec<usize> = i
                        .eta
                        .level_subset(t)
                        .unwrap()
                        .into_iter()
                        .map(|x| g.conj(z_inv, x))
                        .collect();
                    expected.sort_unstable();
                    if conj.level_subset(t).unwrap() != expected {
                        return fail("levels of the conjugate are not the conjugated levels");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn conjugate_distributes_over_set_product(i: &Instance) -> Result<(), String> {
        let g = i.group.as_ref();
        let lat = i.lattice.as_ref();
        let product = i.eta.set_product(&i.between).map_err(|e| e.to_string())?;
        for z in 0..g.len() {
            for a in 0..lat.len() {
                if !lat.leq(a, i.mu.value(z)) {
                    continue;
                }
                let conj_map = |s: &LSubset| -> LSubset {
                    let values = (0..g.len())
                        .map(|x| lat.meet2(a, s.value(g.conj(z, x))))
                        .collect();
                    LSubset::from_values(i.group.clone(), i.lattice.clone(), values)
                };
                let lhs = conj_map(&product);
                let rhs = conj_map(&i.eta)
                    .set_product(&conj_map(&i.between))
                    .map_err(|e| e.to_string())?;
                if lhs != rhs {
                    return fail("conjugation does not distribute over the set product");
                }
            }
        }
        Ok(())
    }

    pub fn cosets_match_set_products(i: &Instance) -> Result<(), String> {
        let lat = i.lattice.as_ref();
        for x in 0..i.group.len() {
            for a in 0..lat.len() {
                if !lat.leq(a, i.mu.value(x)) {
                    continue;
                }
                let p = LPoint {
                    value: a,
                    support: x,
                };
                let point_subset = i.eta.point_as_subset(p);
                let left =
                    crate::lsubgroup::coset(p, &i.eta, Side::Left).map_err(|e| e.to_string())?;
                let right =
                    crate::lsubgroup::coset(p, &i.eta, Side::Right).map_err(|e| e.to_string())?;
                if left
                    != point_subset
                        .set_product(&i.eta)
                        .map_err(|e| e.to_string())?
                {
                    return fail("left coset disagrees with the set product");
                }
                if right
                    != i.eta
                        .set_product(&point_subset)
                        .map_err(|e| e.to_string())?
                {
                    return fail("right coset disagrees with the set product");
                }
            }
        }
        Ok(())
    }

    pub fn normalizer_definitions_agree(i: &Instance) -> Result<(), String> {
        let by_cosets = normalizer(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        let by_conj = normalizer_by_conjugation(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        if by_cosets != by_conj {
            return fail(format!(
                "coset and conjugate normalizers disagree: {} vs {}",
                show(&by_cosets),
                show(&by_conj)
            ));
        }
        if !by_cosets.contains(&i.eta).map_err(|e| e.to_string())? {
            return fail("normalizer does not contain the subgroup");
        }
        Ok(())
    }

    pub fn normalizer_is_wellformed(i: &Instance) -> Result<(), String> {
        let n = normalizer(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        if !is_lsubgroup_of(&n, &i.mu).map_err(|e| e.to_string())?.holds {
            return fail("normalizer is not a subgroup of the ambient");
        }
        if !is_normal(&i.eta, &n).map_err(|e| e.to_string())?.holds {
            return fail("subgroup is not normal inside its own normalizer");
        }
        Ok(())
    }

    pub fn normal_implies_pronormal(i: &Instance) -> Result<(), String> {
        if !is_normal(&i.eta, &i.mu).map_err(|e| e.to_string())?.holds {
            return Ok(());
        }
        if !i.pronormal_eta_mu().holds {
            return fail("a normal subgroup must be pronormal");
        }
        // A normal subgroup is fixed by every conjugation whose point value
        // retains the full tip.
        let lat = i.lattice.as_ref();
        let tip = i.eta.tip();
        for z in 0..i.group.len() {
            for a in 0..lat.len() {
                if !lat.leq(a, i.mu.value(z)) || lat.meet2(a, tip) != tip {
                    continue;
                }
                let p = LPoint {
                    value: a,
                    support: z,
                };
                let conj = conjugate(&i.eta, p, &i.mu).map_err(|e| e.to_string())?;
                if conj != i.eta {
                    return fail("a full-tip conjugate moves a normal subgroup");
                }
            }
        }
        Ok(())
    }

    pub fn normal_closure_is_wellformed(i: &Instance) -> Result<(), String> {
        let nc = normal_closure(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        if !nc.contains(&i.eta).map_err(|e| e.to_string())? {
            return fail("normal closure does not contain the subgroup");
        }
        if !is_lsubgroup_of(&nc, &i.mu)
            .map_err(|e| e.to_string())?
            .holds
        {
            return fail("normal closure is not a subgroup of the ambient");
        }
        if !is_normal(&nc, &i.mu).map_err(|e| e.to_string())?.holds {
            return fail("normal closure is not normal in the ambient");
        }
        if i.within_oracle_cap() {
            // Minimality: every normal subgroup of the ambient containing
            // the subset also contains the closure.
            let mut minimal = true;
            for_each_lsubgroup_between(&i.eta, &i.mu, &mut |theta| {
                let theta_normal = (0..i.group.len()).all(|x| {
                    (0..i.group.len()).all(|y| {
                        i.lattice.leq(
                            i.lattice.meet2(theta.value(x), i.mu.value(y)),
                            theta.value(i.group.conj(y, x)),
                        )
                    })
                });
                if theta_normal && !theta.contains(&nc).unwrap() {
                    minimal = false;
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            })
            .map_err(|e| e.to_string())?;
            if !minimal {
                return fail("normal closure is not minimal among normal overgroups");
            }
        }
        Ok(())
    }

    pub fn conjugates_inside_normal_closure(i: &Instance) -> Result<(), String> {
        let nc = normal_closure(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        let lat = i.lattice.as_ref();
        for z in 0..i.group.len() {
            for a in 0..lat.len() {
                if !lat.leq(a, i.mu.value(z)) {
                    continue;
                }
                let p = LPoint {
                    value: a,
                    support: z,
                };
                let conj = conjugate(&i.eta, p, &i.mu).map_err(|e| e.to_string())?;
                if !nc.contains(&conj).map_err(|e| e.to_string())? {
                    return fail("a conjugate escapes the normal closure");
                }
            }
        }
        Ok(())
    }

    pub fn pronormal_and_subnormal_imply_normal(i: &Instance) -> Result<(), String> {
        if !i.pronormal_eta_mu().holds {
            return Ok(());
        }
        if !is_subnormal(&i.eta, &i.mu)
            .map_err(|e| e.to_string())?
            .holds
        {
            return Ok(());
        }
        if !is_normal(&i.eta, &i.mu).map_err(|e| e.to_string())?.holds {
            return fail("a pronormal subnormal subgroup must be normal");
        }
        Ok(())
    }

    pub fn pronormal_passes_to_intermediates(i: &Instance) -> Result<(), String> {
        if !i.pronormal_eta_mu().holds {
            return Ok(());
        }
        if !is_pronormal(&i.eta, &i.between)
            .map_err(|e| e.to_string())?
            .holds
        {
            return fail("pronormality does not pass to an intermediate subgroup");
        }
        Ok(())
    }

    pub fn normalizer_of_pronormal_is_pronormal(i: &Instance) -> Result<(), String> {
        if !i.pronormal_eta_mu().holds {
            return Ok(());
        }
        let n = normalizer(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        if !is_pronormal(&n, &i.mu).map_err(|e| e.to_string())?.holds {
            return fail("normalizer of a pronormal subgroup is not pronormal");
        }
        Ok(())
    }

    pub fn product_with_normal_is_pronormal(i: &Instance) -> Result<(), String> {
        if !i.pronormal_eta_mu().holds {
            return Ok(());
        }
        // The normal closure is a normal subgroup with the same tip.
        let nc = normal_closure(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        let product = nc.set_product(&i.eta).map_err(|e| e.to_string())?;
        if !is_lsubgroup_of(&product, &i.mu)
            .map_err(|e| e.to_string())?
            .holds
        {
            return fail("product of a normal and a pronormal subgroup is not a subgroup");
        }
        if !is_pronormal(&product, &i.mu)
            .map_err(|e| e.to_string())?
            .holds
        {
            return fail("product of a normal and a pronormal subgroup is not pronormal");
        }
        Ok(())
    }

    pub fn maximal_implies_pronormal(i: &Instance) -> Result<(), String> {
        let v = is_maximal(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        if v.holds && !i.pronormal_eta_mu().holds {
            return fail("a maximal subgroup must be pronormal");
        }
        Ok(())
    }

    pub fn crisp_embedding(i: &Instance) -> Result<(), String> {
        let top = i.lattice.top();
        let h = i.eta.level_subset(top).unwrap();
        let k = i.mu.level_subset(top).unwrap();
        let crisp = crisp_pronormal(&i.group, &k, &h).map_err(|e| e.to_string())?;
        if crisp.holds != i.pronormal_eta_mu().holds {
            return fail(format!(
                "crisp pronormality ({}) and valued pronormality ({}) disagree",
                crisp.holds,
                i.pronormal_eta_mu().holds
            ));
        }
        Ok(())
    }

    pub fn level_pronormality_on_chains(i: &Instance) -> Result<(), String> {
        if !i.pronormal_eta_mu().holds {
            return Ok(());
        }
        let lat = i.lattice.as_ref();
        let tip = i.eta.value(i.group.identity());
        for t in 0..lat.len() {
            if !lat.leq(t, tip) {
                continue;
            }
            let h = i.eta.level_subset(t).unwrap();
            let k = i.mu.level_subset(t).unwrap();
            if !crisp_pronormal(&i.group, &k, &h)
                .map_err(|e| e.to_string())?
                .holds
            {
                return fail(format!(
                    "level {} of a pronormal subgroup is not classically pronormal",
                    lat.name(t)
                ));
            }
        }
        Ok(())
    }

    pub fn hom_image_of_conjugate(i: &Instance) -> Result<(), String> {
        let f = i.hom.as_ref().unwrap();
        let g = i.group.as_ref();
        let lat = i.lattice.as_ref();
        let target = f.target().clone();
        let image_eta = i.eta.image(f).map_err(|e| e.to_string())?;
        for z in 0..g.len() {
            for a in 0..lat.len() {
                if !lat.leq(a, i.mu.value(z)) {
                    continue;
                }
                let p = LPoint {
                    value: a,
                    support: z,
                };
                let conj = conjugate(&i.eta, p, &i.mu).map_err(|e| e.to_string())?;
                let lhs = conj.image(f).map_err(|e| e.to_string())?;
                let fz = f.apply(z);
                let rhs_values: Vec<usize> = (0..target.len())
                    .map(|x| lat.meet2(a, image_eta.value(target.conj(fz, x))))
                    .collect();
                let rhs = LSubset::from_values(target.clone(), i.lattice.clone(), rhs_values);
                if lhs != rhs {
                    return fail("image of a conjugate is not the conjugate of the image");
                }
            }
        }
        Ok(())
    }

    pub fn hom_image_of_levels(i: &Instance) -> Result<(), String> {
        let f = i.hom.as_ref().unwrap();
        let lat = i.lattice.as_ref();
        let image_eta = i.eta.image(f).map_err(|e| e.to_string())?;
        let tip = i.eta.value(i.group.identity());
        for t in 0..lat.len() {
            if !lat.leq(t, tip) {
                continue;
            }
            let level_image: Vec<usize> = i
                .eta
                .level_subset(t)
                .unwrap()
                .into_iter()
                .map(|x| f.apply(x))
                .collect();
            let image_level = image_eta.level_subset(t).unwrap();
            if !level_image.iter().all(|y| image_level.contains(y)) {
                return fail("image of a level subset escapes the level of the image");
            }
        }
        Ok(())
    }

    pub fn hom_image_pronormal(i: &Instance) -> Result<(), String> {
        if !i.pronormal_eta_mu().holds {
            return Ok(());
        }
        let f = i.hom.as_ref().unwrap();
        let image_eta = i.eta.image(f).map_err(|e| e.to_string())?;
        let image_mu = i.mu.image(f).map_err(|e| e.to_string())?;
        if !is_lsubgroup_of(&image_eta, &image_mu)
            .map_err(|e| e.to_string())?
            .holds
        {
            return fail("image of a subgroup pair is not a subgroup pair");
        }
        if !is_pronormal(&image_eta, &image_mu)
            .map_err(|e| e.to_string())?
            .holds
        {
            return fail("surjective image of a pronormal subgroup is not pronormal");
        }
        Ok(())
    }

    pub fn image_preimage_adjunction(i: &Instance) -> Result<(), String> {
        let f = i.hom.as_ref().unwrap();
        let round = i
            .eta
            .image(f)
            .and_then(|img| img.preimage(f))
            .map_err(|e| e.to_string())?;
        if !round.contains(&i.eta).map_err(|e| e.to_string())? {
            return fail("preimage of the image does not contain the subset");
        }
        if f.is_injective() && round != i.eta {
            return fail("preimage of the image differs for an injective map");
        }
        Ok(())
    }

    pub fn bracket_convention_is_immaterial(i: &Instance) -> Result<(), String> {
        let g = i.group.as_ref();
        let lat = i.lattice.as_ref();
        let (seed, _) = commutator(&i.eta, &i.between, &i.mu).map_err(|e| e.to_string())?;
        // Same seed with the bracket written the other way around.
        let fallback = lat.meet2(i.eta.tail(), i.between.tail());
        let mut is_bracket = vec![false; g.len()];
        let mut acc = vec![lat.bottom(); g.len()];
        for y in 0..g.len() {
            for z in 0..g.len() {
                let x = g.mul(g.mul(g.mul(y, z), g.inv(y)), g.inv(z));
                is_bracket[x] = true;
                acc[x] = lat.join2(acc[x], lat.meet2(i.eta.value(y), i.between.value(z)));
            }
        }
        for x in 0..g.len() {
            let alt = if is_bracket[x] { acc[x] } else { fallback };
            if alt != seed.value(x) {
                return fail("commutator seed depends on the bracket convention");
            }
        }
        Ok(())
    }

    pub fn nilpotent_ambient_corollaries(i: &Instance) -> Result<(), String> {
        // Applicability already ensured the central chain of the ambient
        // reaches its trivial subgroup and tips/tails match.
        if !is_subnormal(&i.eta, &i.mu)
            .map_err(|e| e.to_string())?
            .holds
        {
            return fail(
                "subgroup of a nilpotent ambient with matching tip and tail is not subnormal",
            );
        }
        let normal = is_normal(&i.eta, &i.mu).map_err(|e| e.to_string())?.holds;
        if normal != i.pronormal_eta_mu().holds {
            return fail("normality and pronormality split inside a nilpotent ambient");
        }
        Ok(())
    }

    pub fn intersections_preserve_structure(i: &Instance) -> Result<(), String> {
        let inter = i.eta.intersection(&i.between).map_err(|e| e.to_string())?;
        if !is_lsubgroup_of(&inter, &i.mu)
            .map_err(|e| e.to_string())?
            .holds
        {
            return fail("intersection of subgroups is not a subgroup");
        }
        let trivial = trivial_of(&i.mu);
        if is_normal(&i.eta, &i.mu).map_err(|e| e.to_string())?.holds {
            let inter = i.eta.intersection(&trivial).map_err(|e| e.to_string())?;
            if !is_normal(&inter, &i.mu).map_err(|e| e.to_string())?.holds {
                return fail("intersection of normal subgroups is not normal");
            }
        }
        Ok(())
    }

    pub fn series_are_wellformed(i: &Instance) -> Result<(), String> {
        let report = closure_series(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        for w in report.stages.windows(2) {
            if !w[0].contains(&w[1]).map_err(|e| e.to_string())? {
                return fail("normal closure series is not descending");
            }
            if w[0] == w[1] {
                return fail("normal closure series repeats a stage before stabilizing");
            }
        }
        for stage in &report.stages {
            if !stage.contains(&i.eta).map_err(|e| e.to_string())? {
                return fail("a closure series stage loses the subgroup");
            }
        }
        let subnormal = is_subnormal(&i.eta, &i.mu).map_err(|e| e.to_string())?;
        if subnormal.holds != report.reached_target {
            return fail("subnormality verdict disagrees with its own series");
        }

        // Ascent of the normalizer chain leans on each stage being a
        // subgroup, which can fail over non-distributive lattices.
        if i.distributive() {
            let chain = normalizer_chain(&i.eta, &i.mu).map_err(|e| e.to_string())?;
            for w in chain.stages.windows(2) {
                if !w[1].contains(&w[0]).map_err(|e| e.to_string())? {
                    return fail("normalizer chain is not ascending");
                }
            }
        }
        Ok(())
    }

    pub fn pronormal_evidence_revalidates(i: &Instance) -> Result<(), String> {
        let v = i.pronormal_eta_mu();
        if v.holds {
            for &(challenge, certificate) in &v.witness {
                if !recheck_pronormal_certificate(&i.eta, &i.mu, challenge, certificate) {
                    return fail("a pronormality certificate fails independent re-checking");
                }
            }
        } else {
            let (challenge, _) = v.counterexample.as_ref().unwrap();
            let lat = i.lattice.as_ref();
            let g = i.group.as_ref();
            for b in 0..lat.len() {
                for y in 0..g.len() {
                    if recheck_pronormal_certificate(
                        &i.eta,
                        &i.mu,
                        *challenge,
                        LPoint {
                            value: b,
                            support: y,
                        },
                    ) {
                        return fail(
                            "a pronormality counterexample admits a certificate after all",
                        );
                    }
                }
            }
        }
        Ok(())
    }

    pub fn strict_bottom_mode_is_equivalent(i: &Instance) -> Result<(), String> {
        let strict = is_pronormal_with(&i.eta, &i.mu, true).map_err(|e| e.to_string())?;
        if strict.holds != i.pronormal_eta_mu().holds {
            return fail("including bottom challenges changes the pronormality verdict");
        }
        Ok(())
    }

    pub fn central_chain_reaches_trivial_on_nilpotent_levels(i: &Instance) -> Result<(), String> {
        // Consistency of the chain machinery itself: stages descend and the
        // class, when reported, indexes the first trivial stage.
        let report = match central_chain(&i.eta, &i.mu) {
            Ok(r) => r,
            Err(TheoryError::DegenerateTipTail) => return Ok(()),
            Err(e) => return fail(e.to_string()),
        };
        for w in report.stages.windows(2) {
            if !w[0].contains(&w[1]).map_err(|e| e.to_string())? {
                return fail("central chain is not descending");
            }
        }
        if let Some(c) = report.defect_or_class {
            let trivial = trivial_of(&i.eta);
            if report.stages[c] != trivial {
                return fail("reported class does not index the trivial stage");
            }
        }
        Ok(())
    }
}

fn nilpotent_corollaries_apply(i: &Instance) -> bool {
    if !i.distributive() {
        return false;
    }
    let (mu_tip, mu_tail) = i.mu.extrema();
    if mu_tip == mu_tail {
        return false;
    }
    let (eta_tip, eta_tail) = i.eta.extrema();
    if eta_tip != mu_tip || eta_tail != mu_tail {
        return false;
    }
    matches!(central_chain(&i.mu, &i.mu), Ok(r) if r.reached_target)
}

theorem!(
    SubgroupCriteriaAgree,
    "subgroup_criteria_agree",
    always,
    checks::subgroup_criteria_agree
);
theorem!(
    NormalCriteriaAgree,
    "normal_criteria_agree",
    always,
    checks::normal_criteria_agree
);
theorem!(
    TipAtIdentity,
    "tip_attained_at_identity",
    always,
    checks::tip_attained_at_identity
);
theorem!(
    LevelMonotone,
    "level_monotonicity_and_containment",
    always,
    checks::level_monotonicity_and_containment
);
theorem!(
    SetProductAssociative,
    "set_product_associative",
    |i| i.distributive(),
    checks::set_product_associative
);
theorem!(
    GenerationBasic,
    "generation_contains_and_fixes",
    always,
    checks::generation_contains_and_fixes
);
theorem!(
    GenerationIdempotent,
    "generation_idempotent",
    |i| i.distributive(),
    checks::generation_idempotent
);
theorem!(
    GenerationLevels,
    "generated_levels_under_sup_property",
    |i| i.seed_subset.has_sup_property(),
    checks::generated_levels_under_sup_property
);
theorem!(
    GenerateOracle,
    "generate_matches_oracle",
    |i| i.within_oracle_cap(),
    checks::generate_matches_oracle
);
theorem!(
    NormalizerOracle,
    "normalizer_matches_oracle",
    |i| i.within_oracle_cap(),
    checks::normalizer_matches_oracle
);
theorem!(
    ConjugatesWellformed,
    "conjugates_are_wellformed",
    always,
    checks::conjugates_are_wellformed
);
theorem!(
    ConjugateLevels,
    "conjugate_levels_are_conjugated_levels",
    always,
    checks::conjugate_levels_are_conjugated_levels
);
theorem!(
    ConjugateProduct,
    "conjugate_distributes_over_set_product",
    |i| i.distributive(),
    checks::conjugate_distributes_over_set_product
);
theorem!(
    CosetsMatch,
    "cosets_match_set_products",
    always,
    checks::cosets_match_set_products
);
theorem!(
    NormalizerAgree,
    "normalizer_definitions_agree",
    always,
    checks::normalizer_definitions_agree
);
theorem!(
    NormalizerWellformed,
    "normalizer_is_wellformed",
    |i| i.distributive(),
    checks::normalizer_is_wellformed
);
theorem!(
    NormalImpliesPronormal,
    "normal_implies_pronormal",
    always,
    checks::normal_implies_pronormal
);
theorem!(
    NormalClosureWellformed,
    "normal_closure_is_wellformed",
    |i| i.distributive(),
    checks::normal_closure_is_wellformed
);
theorem!(
    ConjugatesInClosure,
    "conjugates_inside_normal_closure",
    always,
    checks::conjugates_inside_normal_closure
);
theorem!(
    PronormalSubnormalNormal,
    "pronormal_and_subnormal_imply_normal",
    always,
    checks::pronormal_and_subnormal_imply_normal
);
theorem!(
    PronormalIntermediate,
    "pronormal_passes_to_intermediates",
    always,
    checks::pronormal_passes_to_intermediates
);
theorem!(
    NormalizerPronormal,
    "normalizer_of_pronormal_is_pronormal",
    |i| i.distributive() && i.eta.tip() == i.mu.tip(),
    checks::normalizer_of_pronormal_is_pronormal
);
theorem!(
    ProductPronormal,
    "product_with_normal_is_pronormal",
    |i| i.distributive(),
    checks::product_with_normal_is_pronormal
);
theorem!(
    MaximalPronormal,
    "maximal_implies_pronormal",
    |i| i.distributive() && i.within_maximality_budget(),
    checks::maximal_implies_pronormal
);
theorem!(
    CrispEmbedding,
    "crisp_embedding",
    |i| i.lattice.len() == 2,
    checks::crisp_embedding
);
theorem!(
    LevelPronormal,
    "level_pronormality_on_chains",
    |i| i.chain_lattice(),
    checks::level_pronormality_on_chains
);
theorem!(
    HomConjugate,
    "hom_image_of_conjugate",
    |i| i.hom.is_some(),
    checks::hom_image_of_conjugate
);
theorem!(
    HomLevels,
    "hom_image_of_levels",
    |i| i.hom.is_some(),
    checks::hom_image_of_levels
);
theorem!(
    HomPronormal,
    "hom_image_pronormal",
    |i| i.hom.as_ref().is_some_and(|f| f.is_surjective()) && i.mu.has_sup_property(),
    checks::hom_image_pronormal
);
theorem!(
    HomAdjunction,
    "image_preimage_adjunction",
    |i| i.hom.is_some(),
    checks::image_preimage_adjunction
);
theorem!(
    BracketConvention,
    "bracket_convention_is_immaterial",
    always,
    checks::bracket_convention_is_immaterial
);
theorem!(
    NilpotentCorollaries,
    "nilpotent_ambient_corollaries",
    nilpotent_corollaries_apply,
    checks::nilpotent_ambient_corollaries
);
theorem!(
    Intersections,
    "intersections_preserve_structure",
    always,
    checks::intersections_preserve_structure
);
theorem!(
    SeriesWellformed,
    "series_are_wellformed",
    always,
    checks::series_are_wellformed
);
theorem!(
    PronormalEvidence,
    "pronormal_evidence_revalidates",
    always,
    checks::pronormal_evidence_revalidates
);
theorem!(
    StrictBottom,
    "strict_bottom_mode_is_equivalent",
    always,
    checks::strict_bottom_mode_is_equivalent
);
theorem!(
    CentralChainShape,
    "central_chain_is_wellformed",
    always,
    checks::central_chain_reaches_trivial_on_nilpotent_levels
);

static REGISTRY: LazyLock<Vec<Box<dyn TheoremCheck>>> = LazyLock::new(|| {
    vec![
        Box::new(SubgroupCriteriaAgree),
        Box::new(NormalCriteriaAgree),
        Box::new(TipAtIdentity),
        Box::new(LevelMonotone),
        Box::new(SetProductAssociative),
        Box::new(GenerationBasic),
        Box::new(GenerationIdempotent),
        Box::new(GenerationLevels),
        Box::new(GenerateOracle),
        Box::new(NormalizerOracle),
        Box::new(ConjugatesWellformed),
        Box::new(ConjugateLevels),
        Box::new(ConjugateProduct),
        Box::new(CosetsMatch),
        Box::new(NormalizerAgree),
        Box::new(NormalizerWellformed),
        Box::new(NormalImpliesPronormal),
        Box::new(NormalClosureWellformed),
        Box::new(ConjugatesInClosure),
        Box::new(PronormalSubnormalNormal),
        Box::new(PronormalIntermediate),
        Box::new(NormalizerPronormal),
        Box::new(ProductPronormal),
        Box::new(MaximalPronormal),
        Box::new(CrispEmbedding),
        Box::new(LevelPronormal),
        Box::new(HomConjugate),
        Box::new(HomLevels),
        Box::new(HomPronormal),
        Box::new(HomAdjunction),
        Box::new(BracketConvention),
        Box::new(NilpotentCorollaries),
        Box::new(Intersections),
        Box::new(SeriesWellformed),
        Box::new(PronormalEvidence),
        Box::new(StrictBottom),
        Box::new(CentralChainShape),
    ]
});

/// Every registered theorem check, in evaluation order.
pub fn registry() -> &'static [Box<dyn TheoremCheck>] {
    &REGISTRY
}

/// Looks a theorem check up by its registered name.
pub fn entry_by_name(name: &str) -> Option<&'static dyn TheoremCheck> {
    REGISTRY
        .iter()
        .find(|t| t.name() == name)
        .map(|b| b.as_ref())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryStats {
    pub name: String,
    pub checked: usize,
    pub skipped: usize,
    pub failures: usize,
}

#[derive(Debug, Clone)]
pub struct SuiteFailure {
    pub theorem: String,
    pub case: usize,
    pub spec: InstanceSpec,
    pub instance: Instance,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub cases: usize,
    pub entries: Vec<EntryStats>,
    pub failures: Vec<SuiteFailure>,
    pub wall_ms: u128,
}

impl SuiteReport {
    pub fn total_failures(&self) -> usize {
        self.failures.len()
    }
}

/// Derives the specification of one case from the base specification. The
/// stream mixes lattice and homomorphism shapes unless the base flags pin
/// them.
pub fn case_spec(base: &InstanceSpec, case: u64) -> InstanceSpec {
    let mixed = splitmix64(base.seed ^ splitmix64(case.wrapping_add(1)));
    InstanceSpec {
        seed: mixed,
        max_group_order: base.max_group_order,
        max_lattice_size: base.max_lattice_size,
        chain_only: base.chain_only || mixed % 4 == 1,
        with_hom: base.with_hom || mixed.is_multiple_of(3),
        nilpotent_ambient: base.nilpotent_ambient || mixed % 5 == 2,
    }
}

/// Generates `cases` instances and evaluates every applicable registered
/// check on each; failures carry the per-case specification so they can be
/// reproduced exactly.
pub fn run_suite(base: &InstanceSpec, cases: usize) -> Result<SuiteReport, VerifyError> {
    if cases == 0 {
        return Err(VerifyError::BadSpec("case count must be positive".into()));
    }
    base.validate()?;
    let start = Instant::now();
    let reg = registry();
    let mut entries: Vec<EntryStats> = reg
        .iter()
        .map(|t| EntryStats {
            name: t.name().to_string(),
            checked: 0,
            skipped: 0,
            failures: 0,
        })
        .collect();
    let mut failures = Vec::new();
    for case in 0..cases {
        let spec = case_spec(base, case as u64);
        let instance = gen_instance(&spec)?;
        for (k, entry) in reg.iter().enumerate() {
            if !entry.applies(&instance) {
                entries[k].skipped += 1;
                continue;
            }
            entries[k].checked += 1;
            if let Err(detail) = entry.check(&instance) {
                entries[k].failures += 1;
                failures.push(SuiteFailure {
                    theorem: entry.name().to_string(),
                    case,
                    spec: spec.clone(),
                    instance: instance.clone(),
                    detail,
                });
            }
        }
    }
    Ok(SuiteReport {
        cases,
        entries,
        failures,
        wall_ms: start.elapsed().as_millis(),
    })
}

/// Reproduces a recorded failure from its specification: regenerates the
/// instance and re-runs the single named check.
pub fn revalidate_failure(failure: &SuiteFailure) -> Result<bool, VerifyError> {
    let instance = gen_instance(&failure.spec)?;
    match entry_by_name(&failure.theorem) {
        Some(entry) => Ok(entry.check(&instance).is_err()),
        None => Err(VerifyError::BadSpec(format!(
            "unknown theorem `{}`",
            failure.theorem
        ))),
    }
}
