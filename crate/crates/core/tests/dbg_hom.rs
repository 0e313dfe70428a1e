use coverlab_core::model::FuchsianModel;
use coverlab_core::group::{Letter, Word};
use rand::Rng;

#[test]
fn diag() {
    let m = FuchsianModel::build(2).unwrap();
    let mut rng = coverlab_core::rng::stream_rng(41, 0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let w1 = Word::new((0..6).map(|_| Letter::from_index(rng.gen_range(0..8))));
        let w2 = Word::new((0..6).map(|_| Letter::from_index(rng.gen_range(0..8))));
        let lhs = m.evaluate(&w1.concat(&w2));
        let rhs = m.evaluate(&w1).mul(&m.evaluate(&w2));
        let d = lhs.rel_dist_up_to_sign(&rhs);
        if d > worst { worst = d; }
    }
    println!("worst rel err over 100 pairs: {:.3e}", worst);
}
