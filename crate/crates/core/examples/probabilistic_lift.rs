//! Multi-distributions and lifting term steps to them.

use factorlab::prob::{lift, mdist_scale, LiftRel, MultiDist, Prob};
use factorlab::term::parse;

fn main() {
    let half = Prob::new(1, 2);
    let m = MultiDist::new(vec![
        (half, parse("(λx.x) z").unwrap()),
        (half, parse("y (+) z").unwrap()),
    ])
    .unwrap();
    println!("start: {m}");
    for step in lift(LiftRel::Any, &m) {
        println!("  => {}  (mass {})", step.target, step.target.mass());
    }

    let scaled = mdist_scale(half, &m).unwrap();
    println!("half of it: {scaled}, mass {}", scaled.mass());
}
