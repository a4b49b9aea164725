use actkit::act::FreeAct;
use actkit::congruence::enumerate_congruences;
use actkit::monoid::{fountain_monoid, FiniteMonoid};
use std::sync::Arc;
use std::time::Instant;

fn main() {
    let n5 = Arc::new(FiniteMonoid::cyclic(4, 1));
    let fz2 = fountain_monoid(&FiniteMonoid::cyclic_group(2)).unwrap();
    let cases: Vec<(&str, Arc<FiniteMonoid>, usize)> = vec![
        ("N5 |X|=2", Arc::clone(&n5), 2),
        ("N5 |X|=3", Arc::clone(&n5), 3),
        ("Fountain(Z2) |X|=1", Arc::clone(fz2.monoid()), 1),
        ("Fountain(Z2) |X|=2", Arc::clone(fz2.monoid()), 2),
        ("Fountain(Z2) |X|=3", Arc::clone(fz2.monoid()), 3),
    ];
    for (name, s, k) in cases {
        let vars: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
        let f = FreeAct::new(s, vars);
        let t = Instant::now();
        let congs = enumerate_congruences(f.act());
        println!(
            "{name}: carrier {} -> {} congruences in {:?}",
            f.act().size(),
            congs.len(),
            t.elapsed()
        );
    }
}
