//! Capture-avoiding substitution and α-equivalence.

use factorlab::term::{parse, Symbol};

fn main() {
    let t = parse("λy.x y").unwrap();
    let x = Symbol::new("x");

    // Substituting a term that mentions the binder forces a rename.
    let q = parse("y z").unwrap();
    let r = t.subst(&x, &q);
    println!("({t})[x := {q}] = {r}");
    assert!(r.free_vars().contains(&Symbol::new("y")));

    let a = parse("λx.λy.x y").unwrap();
    let b = parse("λu.λv.u v").unwrap();
    println!("{a} =α {b}: {}", a.alpha_eq(&b));
    assert!(a.alpha_eq(&b));

    let c = parse("λx.λy.y x").unwrap();
    println!("{a} =α {c}: {}", a.alpha_eq(&c));
    println!("size of {a} is {}", a.size());
}
