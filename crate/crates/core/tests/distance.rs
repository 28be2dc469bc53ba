use negacirc_core::bounds::expurgation_margin;
use negacirc_core::census::{exhaustive_double, h_from_index};
use negacirc_core::field::field_of_order;
use negacirc_core::nega::{build_double, min_distance, LinearCode};

fn distances(q: u64, n: usize, limit: usize) -> Vec<usize> {
    let f = field_of_order(q).unwrap();
    exhaustive_double(&f, n)
        .unwrap()
        .into_iter()
        .take(limit)
        .map(|idx| {
            let h = h_from_index(&f, n, idx);
            min_distance(build_double(&h, n).unwrap().generator(), None).unwrap()
        })
        .collect()
}

#[test]
fn best_self_dual_distance_p3_q11() {
    let d = distances(11, 6, usize::MAX);
    assert_eq!(d.len(), 1728);
    let best = *d.iter().max().unwrap();
    assert_eq!(best, 7);
    assert_eq!(d.iter().filter(|&&x| x == best).count(), 24);
    // no expurgation guarantee at this length
    assert_eq!(expurgation_margin(3, 11).unwrap().d_n, None);
}

#[test]
fn certified_distance_is_below_truth_p7_q3() {
    let d_n = expurgation_margin(7, 3).unwrap().d_n.unwrap();
    let best = distances(3, 14, 40).into_iter().max().unwrap();
    assert!(best as u64 > d_n);
}
