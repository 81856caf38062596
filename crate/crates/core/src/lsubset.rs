//! Lattice-valued subsets of a finite group: level subsets, tips and tails,
//! containment, unions and intersections, set products, points, and images
//! under homomorphisms.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{FiniteGroup, GroupHom};
use crate::lattice::Lattice;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubsetError {
    #[error("unknown group element `{0}`")]
    UnknownElement(String),
    #[error("unknown lattice value `{0}`")]
    UnknownValue(String),
    #[error("element `{0}` assigned twice")]
    DuplicateAssignment(String),
    #[error("operands live over different groups or lattices")]
    MixedCarriers,
    #[error("empty family")]
    EmptyFamily,
    #[error("subset is not carried by the homomorphism's {0}")]
    CarrierMismatch(&'static str),
}

/// A total map from the elements of a finite group into a finite bounded
/// lattice.
#[derive(Debug, Clone)]
pub struct LSubset {
    group: Arc<FiniteGroup>,
    lattice: Arc<Lattice>,
    values: Vec<usize>,
}

/// A lattice value concentrated at a single group element. Realized as a
/// full [`LSubset`] only when pointwise access is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LPoint {
    pub value: usize,
    pub support: usize,
}

pub enum CombineMode {
    Union,
    Intersection,
}

impl LSubset {
    /// Builds a subset from explicit assignments, filling the rest with
    /// `default`.
    pub fn make(
        group: Arc<FiniteGroup>,
        lattice: Arc<Lattice>,
        assignments: &[(usize, usize)],
        default: usize,
    ) -> Result<LSubset, SubsetError> {
        if default >= lattice.len() {
            return Err(SubsetError::UnknownValue(format!("#{default}")));
        }
        let mut values = vec![default; group.len()];
        let mut touched = vec![false; group.len()];
        for &(x, v) in assignments {
            if x >= group.len() {
                return Err(SubsetError::UnknownElement(format!("#{x}")));
            }
            if v >= lattice.len() {
                return Err(SubsetError::UnknownValue(format!("#{v}")));
            }
            if touched[x] {
                return Err(SubsetError::DuplicateAssignment(group.name(x).to_string()));
            }
            touched[x] = true;
            values[x] = v;
        }
        Ok(LSubset {
            group,
            lattice,
            values,
        })
    }

    pub fn constant(group: Arc<FiniteGroup>, lattice: Arc<Lattice>, value: usize) -> LSubset {
        let values = vec![value; group.len()];
        LSubset {
            group,
            lattice,
            values,
        }
    }

    /// The characteristic function of a crisp subset: top on it, bottom off it.
    pub fn characteristic(
        group: Arc<FiniteGroup>,
        lattice: Arc<Lattice>,
        subset: &[usize],
    ) -> LSubset {
        let mut values = vec![lattice.bottom(); group.len()];
        for &x in subset {
            values[x] = lattice.top();
        }
        LSubset {
            group,
            lattice,
            values,
        }
    }

    pub fn from_values(
        group: Arc<FiniteGroup>,
        lattice: Arc<Lattice>,
        values: Vec<usize>,
    ) -> LSubset {
        assert_eq!(values.len(), group.len());
        LSubset {
            group,
            lattice,
            values,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn value(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn same_carriers(&self, other: &LSubset) -> bool {
        (Arc::ptr_eq(&self.group, &other.group) || self.group == other.group)
            && (Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice)
    }

    fn carrier_check(&self, other: &LSubset) -> Result<(), SubsetError> {
        if self.same_carriers(other) {
            Ok(())
        } else {
            Err(SubsetError::MixedCarriers)
        }
    }

    /// `{x : value(x) >= t}`, sorted in carrier order.
    pub fn level_subset(&self, threshold: usize) -> Result<Vec<usize>, SubsetError> {
        if threshold >= self.lattice.len() {
            return Err(SubsetError::UnknownValue(format!("#{threshold}")));
        }
        Ok((0..self.group.len())
            .filter(|&x| self.lattice.leq(threshold, self.values[x]))
            .collect())
    }

    /// `(tip, tail)`: the join and the meet of all attained values.
    pub fn extrema(&self) -> (usize, usize) {
        let tip = self.lattice.join(self.values.iter().copied());
        let tail = self.lattice.meet(self.values.iter().copied());
        (tip, tail)
    }

    pub fn tip(&self) -> usize {
        self.extrema().0
    }

    pub fn tail(&self) -> usize {
        self.extrema().1
    }

    /// True iff `sub` lies pointwise below `self`.
    pub fn contains(&self, sub: &LSubset) -> Result<bool, SubsetError> {
        self.carrier_check(sub)?;
        Ok((0..self.group.len()).all(|x| self.lattice.leq(sub.values[x], self.values[x])))
    }

    /// Pointwise join or meet of a non-empty family over common carriers.
    pub fn combine(family: &[&LSubset], mode: CombineMode) -> Result<LSubset, SubsetError> {
        let first = *family.first().ok_or(SubsetError::EmptyFamily)?;
        for other in &family[1..] {
            first.carrier_check(other)?;
        }
        let lat = &first.lattice;
        let values = (0..first.group.len())
            .map(|x| {
                let vals = family.iter().map(|s| s.values[x]);
                match mode {
                    CombineMode::Union => lat.join(vals),
                    CombineMode::Intersection => lat.meet(vals),
                }
            })
            .collect();
        Ok(LSubset {
            group: first.group.clone(),
            lattice: first.lattice.clone(),
            values,
        })
    }

    pub fn union(&self, other: &LSubset) -> Result<LSubset, SubsetError> {
        LSubset::combine(&[self, other], CombineMode::Union)
    }

    pub fn intersection(&self, other: &LSubset) -> Result<LSubset, SubsetError> {
        LSubset::combine(&[self, other], CombineMode::Intersection)
    }

    /// Set product: at each `x`, the join over all factorizations `x = y z`
    /// of `self(y) ∧ rhs(z)`.
    pub fn set_product(&self, rhs: &LSubset) -> Result<LSubset, SubsetError> {
        self.carrier_check(rhs)?;
        let g = &self.group;
        let lat = &self.lattice;
        let values = (0..g.len())
            .map(|x| {
                lat.join((0..g.len()).map(|y| {
                    let z = g.mul(g.inv(y), x);
                    lat.meet2(self.values[y], rhs.values[z])
                }))
            })
            .collect();
        Ok(LSubset {
            group: g.clone(),
            lattice: lat.clone(),
            values,
        })
    }

    /// Membership of a point: `value <= self(support)`.
    pub fn has_point(&self, p: LPoint) -> Result<bool, SubsetError> {
        if p.support >= self.group.len() {
            return Err(SubsetError::UnknownElement(format!("#{}", p.support)));
        }
        if p.value >= self.lattice.len() {
            return Err(SubsetError::UnknownValue(format!("#{}", p.value)));
        }
        Ok(self.lattice.leq(p.value, self.values[p.support]))
    }

    /// Materializes a point over the same carriers.
    pub fn point_as_subset(&self, p: LPoint) -> LSubset {
        let mut values = vec![self.lattice.bottom(); self.group.len()];
        values[p.support] = p.value;
        LSubset {
            group: self.group.clone(),
            lattice: self.lattice.clone(),
            values,
        }
    }

    /// Pushforward along a homomorphism: the value at `y` is the join of the
    /// values over the fiber of `y`; an empty fiber yields the bottom.
    pub fn image(&self, f: &GroupHom) -> Result<LSubset, SubsetError> {
        if **f.source() != *self.group {
            return Err(SubsetError::CarrierMismatch("source"));
        }
        let target = f.target().clone();
        let lat = &self.lattice;
        let mut values = vec![lat.bottom(); target.len()];
        for x in 0..self.group.len() {
            let y = f.apply(x);
            values[y] = lat.join2(values[y], self.values[x]);
        }
        Ok(LSubset {
            group: target,
            lattice: lat.clone(),
            values,
        })
    }

    /// Pullback along a homomorphism: composition with the map.
    pub fn preimage(&self, f: &GroupHom) -> Result<LSubset, SubsetError> {
        if **f.target() != *self.group {
            return Err(SubsetError::CarrierMismatch("target"));
        }
        let source = f.source().clone();
        let values = (0..source.len()).map(|x| self.values[f.apply(x)]).collect();
        Ok(LSubset {
            group: source,
            lattice: self.lattice.clone(),
            values,
        })
    }

    /// True iff every non-empty collection of carrier elements attains the
    /// join of its values, which for finite carriers amounts to the attained
    /// values being totally ordered.
    pub fn has_sup_property(&self) -> bool {
        let lat = &self.lattice;
        for &a in &self.values {
            for &b in &self.values {
                if !lat.leq(a, b) && !lat.leq(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Attained values, deduplicated, in linear-extension order.
    pub fn attained_values(&self) -> Vec<usize> {
        self.lattice
            .linear_extension()
            .iter()
            .copied()
            .filter(|a| self.values.contains(a))
            .collect()
    }
}

impl PartialEq for LSubset {
    fn eq(&self, other: &Self) -> bool {
        self.same_carriers(other) && self.values == other.values
    }
}

impl Eq for LSubset {}

impl fmt::Display for LSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = (0..self.group.len())
            .map(|x| {
                format!(
                    "{}:{}",
                    self.group.name(x),
                    self.lattice.name(self.values[x])
                )
            })
            .collect();
        write!(f, "{{{}}}", entries.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_group;
    use crate::lattice::builtin_lattice;
    use crate::sample::*;

    #[test]
    fn constant_subset_over_example_carriers() {
        let (g, m) = s4_and_m();
        let u = m.element("u").unwrap();
        let s = LSubset::make(g.clone(), m.clone(), &[], u).unwrap();
        assert!(s.values().iter().all(|&v| v == u));
    }

    #[test]
    fn example_value_tables_have_the_documented_levels_and_extrema() {
        let (g, m) = s4_and_m();
        let mu = mu_example(&g, &m);
        let eta = eta_example(&g, &m);
        let e = |s: &str| m.element(s).unwrap();

        assert_eq!(mu.extrema(), (e("u"), e("d")));
        assert_eq!(eta.extrema(), (e("u"), e("f")));

        // The level of eta at `a` is the first dihedral subgroup.
        let level_a = eta.level_subset(e("a")).unwrap();
        let d41 = crate::group::subgroup_closure(
            &g,
            &[g.element("(2 4)").unwrap(), g.element("(1 2 3 4)").unwrap()],
        )
        .unwrap();
        assert_eq!(level_a, d41);

        // The level at `d` is the Klein four subgroup.
        let level_d = eta.level_subset(e("d")).unwrap();
        let v4: Vec<usize> = ["e", "(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"]
            .iter()
            .map(|n| g.element(n).unwrap())
            .collect::<Vec<_>>();
        let mut v4 = v4;
        v4.sort_unstable();
        assert_eq!(level_d, v4);

        // Bottom level is the whole carrier.
        assert_eq!(eta.level_subset(m.bottom()).unwrap().len(), g.len());
    }

    #[test]
    fn containment_comparisons() {
        let (g, m) = s4_and_m();
        let mu = mu_example(&g, &m);
        let eta = eta_example(&g, &m);
        assert!(mu.contains(&eta).unwrap());
        assert!(eta.contains(&eta).unwrap());
        assert!(!eta.contains(&mu).unwrap());
    }

    #[test]
    fn level_subsets_are_monotone_in_the_threshold() {
        let (g, m) = s4_and_m();
        let eta = eta_example(&g, &m);
        for s in 0..m.len() {
            for t in 0..m.len() {
                if m.leq(s, t) {
                    let big = eta.level_subset(s).unwrap();
                    for x in eta.level_subset(t).unwrap() {
                        assert!(big.contains(&x));
                    }
                }
            }
        }
        let _ = g;
    }

    #[test]
    fn intersection_and_union_are_pointwise_bounds() {
        let (g, m) = s4_and_m();
        let mu = mu_example(&g, &m);
        let eta = eta_example(&g, &m);
        assert_eq!(eta.intersection(&eta).unwrap(), eta);
        assert_eq!(eta.intersection(&mu).unwrap(), eta);
        assert_eq!(eta.union(&mu).unwrap(), mu);
        let _ = g;
    }

    #[test]
    fn empty_family_is_rejected() {
        assert!(matches!(
            LSubset::combine(&[], CombineMode::Union).unwrap_err(),
            SubsetError::EmptyFamily
        ));
    }

    #[test]
    fn mixed_carriers_are_rejected() {
        let (g, m) = s4_and_m();
        let c2 = Arc::new(builtin_lattice("chain(2)").unwrap());
        let a = LSubset::constant(g.clone(), m.clone(), m.bottom());
        let b = LSubset::constant(g, c2.clone(), c2.bottom());
        assert!(matches!(
            a.contains(&b).unwrap_err(),
            SubsetError::MixedCarriers
        ));
    }

    #[test]
    fn set_product_with_an_identity_point_is_the_identity() {
        let (g, m) = s4_and_m();
        let eta = eta_example(&g, &m);
        let one = eta.point_as_subset(LPoint {
            value: m.top(),
            support: g.identity(),
        });
        assert_eq!(one.set_product(&eta).unwrap(), eta);
    }

    #[test]
    fn set_product_with_a_point_is_a_translated_meet() {
        let (g, m) = s4_and_m();
        let eta = eta_example(&g, &m);
        let d = m.element("d").unwrap();
        let z = g.element("(1 2 3)").unwrap();
        let point = eta.point_as_subset(LPoint {
            value: d,
            support: z,
        });
        let prod = point.set_product(&eta).unwrap();
        for x in 0..g.len() {
            let expect = m.meet2(d, eta.value(g.mul(g.inv(z), x)));
            assert_eq!(prod.value(x), expect);
        }
    }

    #[test]
    fn set_product_over_a_two_element_group() {
        let z2 = Arc::new(builtin_group("C(2)").unwrap());
        let c2 = Arc::new(builtin_lattice("chain(2)").unwrap());
        let eta = LSubset::from_values(z2.clone(), c2.clone(), vec![1, 0]);
        let nu = LSubset::from_values(z2.clone(), c2.clone(), vec![0, 1]);
        let prod = eta.set_product(&nu).unwrap();
        assert_eq!(prod.values(), &[0, 1]);
    }

    #[test]
    fn point_membership() {
        let (g, m) = s4_and_m();
        let mu = mu_example(&g, &m);
        let d = m.element("d").unwrap();
        let u = m.element("u").unwrap();
        let z = g.element("(1 2 3)").unwrap();
        assert!(mu
            .has_point(LPoint {
                value: d,
                support: z
            })
            .unwrap());
        assert!(!mu
            .has_point(LPoint {
                value: u,
                support: z
            })
            .unwrap());
        assert!(mu
            .has_point(LPoint {
                value: m.bottom(),
                support: z
            })
            .unwrap());
    }

    #[test]
    fn images_and_preimages_along_the_sign_map() {
        let (s3, sign) = sign_hom();
        let chain = Arc::new(
            crate::lattice::Lattice::from_covers(&["0", "m", "1"], &[("0", "m"), ("m", "1")])
                .unwrap(),
        );
        let one = chain.element("1").unwrap();
        let mid = chain.element("m").unwrap();
        let eta = LSubset::make(
            s3.clone(),
            chain.clone(),
            &[(s3.identity(), one), (s3.element("(1 2)").unwrap(), mid)],
            chain.bottom(),
        )
        .unwrap();
        let img = eta.image(&sign).unwrap();
        assert_eq!(img.value(0), one);
        assert_eq!(img.value(1), mid);

        // Identity map leaves subsets alone.
        let id =
            crate::group::GroupHom::new(s3.clone(), s3.clone(), (0..s3.len()).collect()).unwrap();
        assert_eq!(eta.image(&id).unwrap(), eta);

        // Preimage of the class map is constant on parity classes.
        let c2 = sign.target().clone();
        let lat2 = Arc::new(builtin_lattice("chain(2)").unwrap());
        let nu = LSubset::from_values(c2, lat2.clone(), vec![1, 0]);
        let pre = nu.preimage(&sign).unwrap();
        for x in 0..s3.len() {
            let cycles = crate::group::parse_cycle_text(s3.name(x)).unwrap();
            let expect = if crate::group::cycles_are_even(&cycles) {
                1
            } else {
                0
            };
            assert_eq!(pre.value(x), expect);
        }

        // Constant subsets pull back to constant subsets.
        let c = LSubset::constant(sign.target().clone(), lat2, 1);
        assert!(c.preimage(&sign).unwrap().values().iter().all(|&v| v == 1));
    }

    #[test]
    fn image_outside_the_range_of_a_non_surjection_is_bottom() {
        let c2 = Arc::new(builtin_group("C(2)").unwrap());
        let c4 = Arc::new(builtin_group("C(4)").unwrap());
        let lat = Arc::new(builtin_lattice("chain(2)").unwrap());
        // x -> 2x embeds C(2) into C(4).
        let emb = crate::group::GroupHom::new(c2.clone(), c4, vec![0, 2]).unwrap();
        assert!(!emb.is_surjective());
        let eta = LSubset::constant(c2, lat.clone(), lat.top());
        let img = eta.image(&emb).unwrap();
        assert_eq!(img.values(), &[1, 0, 1, 0]);
    }

    #[test]
    fn sup_property_is_total_order_of_the_attained_values() {
        let (g, m) = s4_and_m();
        let mu = mu_example(&g, &m);
        let eta = eta_example(&g, &m);
        assert!(mu.has_sup_property());
        assert!(!eta.has_sup_property());
        let chain = Arc::new(builtin_lattice("chain(3)").unwrap());
        let any = LSubset::from_values(
            Arc::new(builtin_group("C(3)").unwrap()),
            chain,
            vec![2, 0, 1],
        );
        assert!(any.has_sup_property());
        let _ = g;
    }

    /// Subset formulation of the sup property, as an oracle on small carriers.
    fn sup_property_by_subsets(s: &LSubset) -> bool {
        let n = s.group().len();
        assert!(n <= 6);
        for mask in 1u32..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let sup = s.lattice().join(members.iter().map(|&x| s.value(x)));
            if !members.iter().any(|&x| s.value(x) == sup) {
                return false;
            }
        }
        true
    }

    #[test]
    fn sup_property_matches_subset_oracle_on_small_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for key in ["C(4)", "S(3)", "C(6)"] {
            let g = Arc::new(builtin_group(key).unwrap());
            for lat_key in ["chain(3)", "boolean(2)", "diamond_M3"] {
                let lat = Arc::new(builtin_lattice(lat_key).unwrap());
                for _ in 0..40 {
                    let values: Vec<usize> =
                        (0..g.len()).map(|_| rng.gen_range(0..lat.len())).collect();
                    let s = LSubset::from_values(g.clone(), lat.clone(), values);
                    assert_eq!(s.has_sup_property(), sup_property_by_subsets(&s));
                }
            }
        }
    }
}
