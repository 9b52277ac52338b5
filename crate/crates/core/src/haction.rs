//! The group `[X/A, H_d]` as a product of relative cohomology groups, its
//! cosets and finite subgroups, and packaging of orbit data.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::abgroup::{ElementOrder, FgAbelianGroup, GroupElement};
use crate::error::{Error, Result};
use crate::simplicial::{relative_cohomology, SimplicialPair};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MappingGroup {
    /// `H^n(X, A; π_n)` by degree.
    pub degree_components: BTreeMap<usize, FgAbelianGroup>,
    pub total: FgAbelianGroup,
}

impl MappingGroup {
    pub fn from_components(components: BTreeMap<usize, FgAbelianGroup>) -> Self {
        let parts: Vec<FgAbelianGroup> = components.values().cloned().collect();
        MappingGroup {
            total: FgAbelianGroup::direct_sum(&parts),
            degree_components: components,
        }
    }
}

pub fn mapping_group(pair: &SimplicialPair, coefficients: &[(usize, FgAbelianGroup)]) -> Result<MappingGroup> {
    let mut components = BTreeMap::new();
    for (n, pi) in coefficients {
        if components.insert(*n, relative_cohomology(pair, *n, pi)).is_some() {
            return Err(Error::InvalidInput(format!("degree {n} given twice")));
        }
    }
    Ok(MappingGroup::from_components(components))
}

/// One representative per coset of `rG`.
pub fn coset_skeleton(g: &MappingGroup, r: u64) -> Result<Vec<GroupElement>> {
    g.total.cosets_mod_r(r)
}

/// The elements whose order divides `r`; every stabilizer lies here.
pub fn stabilizer_candidates(g: &MappingGroup, r: u64) -> Result<Vec<GroupElement>> {
    g.total.order_dividing_subgroup(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VffStructure {
    pub orbit_representatives: Vec<String>,
    pub stabilizers: Vec<Vec<GroupElement>>,
    pub acting_group: MappingGroup,
}

impl VffStructure {
    pub fn num_orbits(&self) -> usize {
        self.orbit_representatives.len()
    }

    /// Size of the acted-on set when the group is finite.
    pub fn set_size(&self) -> Option<BigInt> {
        let order = self.acting_group.total.order()?;
        Some(
            self.stabilizers
                .iter()
                .map(|s| &order / BigInt::from(s.len()))
                .sum(),
        )
    }
}

/// Validates orbit data: every stabilizer must be a finite subgroup and,
/// given `r`, consist of elements of order dividing `r`. An empty
/// stabilizer list stands for the trivial subgroup.
pub fn assemble_vff(
    representatives: Vec<String>,
    stabilizers: Vec<Vec<GroupElement>>,
    g: &MappingGroup,
    r: Option<u64>,
) -> Result<VffStructure> {
    if representatives.len() != stabilizers.len() {
        return Err(Error::InvalidStabilizer(format!(
            "{} representatives but {} stabilizers",
            representatives.len(),
            stabilizers.len()
        )));
    }
    let group = &g.total;
    let mut checked = Vec::with_capacity(stabilizers.len());
    for (label, stab) in representatives.iter().zip(stabilizers) {
        let bad = |why: String| Error::InvalidStabilizer(format!("orbit `{label}`: {why}"));
        let stab = if stab.is_empty() { vec![group.zero()] } else { stab };
        let mut set = BTreeSet::new();
        for x in &stab {
            if !group.contains(x) {
                return Err(bad(format!("{x:?} is not an element of {group}")));
            }
            match group.element_order(x) {
                ElementOrder::Infinite => return Err(bad("contains an element of infinite order".into())),
                ElementOrder::Finite(k) => {
                    if let Some(r) = r {
                        if !BigInt::from(r).is_multiple_of(&k) {
                            return Err(bad(format!("contains an element of order {k}, which does not divide {r}")));
                        }
                    }
                }
            }
            set.insert(x.coordinates());
        }
        if !set.contains(&group.zero().coordinates()) {
            return Err(bad("does not contain zero".into()));
        }
        for x in &stab {
            for y in &stab {
                if !set.contains(&group.add(x, y).coordinates()) {
                    return Err(bad("is not closed under addition".into()));
                }
            }
        }
        let mut unique: Vec<GroupElement> = Vec::with_capacity(set.len());
        for x in stab {
            if !unique.contains(&x) {
                unique.push(x);
            }
        }
        checked.push(unique);
    }
    Ok(VffStructure {
        orbit_representatives: representatives,
        stabilizers: checked,
        acting_group: g.clone(),
    })
}
