//! Listing the built-in calculi and replaying the demos.

use factorlab::calculi::{catalog, demo, DEMOS};

fn main() {
    for e in catalog() {
        println!("{} ({}): {}", e.name, e.calculus.essential, e.anchor);
        for s in &e.suites {
            println!("  {} [{}] expect {:?}", s.id, s.essential, s.expected);
        }
    }
    for name in DEMOS {
        let tr = demo(name).unwrap();
        println!("demo {name}: {}", if tr.ok() { "ok" } else { "MISMATCH" });
    }
}
