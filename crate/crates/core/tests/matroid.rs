use rainbowfrac::complex::Face;
use rainbowfrac::matroid::{Matroid, PartitionMatroid};

fn all_subsets(n: usize) -> impl Iterator<Item = Face> {
    (0..1u64 << n).map(Face::from_bits)
}

#[test]
fn partition_matroid_axioms() {
    for labels in [vec![0, 0, 1, 1, 1, 2], vec![0, 1, 2, 3, 4, 5], vec![0; 6], vec![2, 0, 1, 0, 2, 1]] {
        let m = PartitionMatroid::from_labels(&labels).unwrap();
        let n = labels.len();
        for a in all_subsets(n) {
            assert!(m.rank(a) <= a.len());
            for b in all_subsets(n) {
                let (ra, rb) = (m.rank(a), m.rank(b));
                assert!(m.rank(a.union(b)) + m.rank(a.intersection(b)) <= ra + rb);
                if a.is_subset(b) {
                    assert!(ra <= rb);
                }
                if m.is_independent(a) && m.is_independent(b) && a.len() < b.len() {
                    assert!(b.minus(a).iter().any(|x| m.is_independent(a.with(x))));
                }
            }
        }
    }
}
