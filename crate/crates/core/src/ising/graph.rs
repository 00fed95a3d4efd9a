use std::collections::{BTreeMap, BTreeSet};

use super::{IsingModel, Label};

/// Connected components of the coupling graph induced on `subset`.
///
/// Two members are adjacent when a nonzero coupler joins them. Components are
/// ordered by their smallest label. Labels outside the model have no couplers
/// and come back as singletons.
pub fn connected_components(model: &IsingModel, subset: &BTreeSet<Label>) -> Vec<BTreeSet<Label>> {
    let index: BTreeMap<Label, usize> = subset.iter().enumerate().map(|(k, &l)| (l, k)).collect();
    let mut parent: Vec<usize> = (0..subset.len()).collect();

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    for ((i, j), _) in model.quadratic_terms() {
        if let (Some(&a), Some(&b)) = (index.get(&i), index.get(&j)) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                // Keep the smaller index as root so roots track smallest labels.
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }

    let mut groups: BTreeMap<usize, BTreeSet<Label>> = BTreeMap::new();
    for (&label, &k) in &index {
        let root = find(&mut parent, k);
        groups.entry(root).or_default().insert(label);
    }
    let mut components: Vec<BTreeSet<Label>> = groups.into_values().collect();
    components.sort_by_key(|c| c.first().copied());
    components
}
