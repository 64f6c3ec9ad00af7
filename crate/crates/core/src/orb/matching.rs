//! Brute-force Hamming matching with a mutual-nearest-neighbor check.

use alloc::vec::Vec;

use super::BinaryDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DescriptorMatch {
    pub index_a: usize,
    pub index_b: usize,
    pub distance: u32,
}

/// Index of the nearest descriptor in `set`, lowest index on ties.
fn nearest(query: &BinaryDescriptor, set: &[BinaryDescriptor]) -> Option<(usize, u32)> {
    let mut best: Option<(usize, u32)> = None;
    for (i, d) in set.iter().enumerate() {
        let dist = query.hamming(d);
        if best.map_or(true, |(_, bd)| dist < bd) {
            best = Some((i, dist));
        }
    }
    best
}

/// Keeps `(a, b)` only when `b` is `a`'s nearest neighbor in `desc_b` and
/// `a` is `b`'s nearest neighbor in `desc_a`. Sorted by distance, then index.
pub fn match_descriptors(desc_a: &[BinaryDescriptor], desc_b: &[BinaryDescriptor]) -> Vec<DescriptorMatch> {
    if desc_a.is_empty() || desc_b.is_empty() {
        return Vec::new();
    }
    let back: Vec<usize> = desc_b
        .iter()
        .map(|d| nearest(d, desc_a).map_or(usize::MAX, |(i, _)| i))
        .collect();
    let mut matches: Vec<DescriptorMatch> = desc_a
        .iter()
        .enumerate()
        .filter_map(|(index_a, d)| {
            let (index_b, distance) = nearest(d, desc_b)?;
            (back[index_b] == index_a).then_some(DescriptorMatch { index_a, index_b, distance })
        })
        .collect();
    matches.sort_by_key(|m| (m.distance, m.index_a, m.index_b));
    matches
}
