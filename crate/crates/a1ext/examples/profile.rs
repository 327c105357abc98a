use a1ext::km2::*;
use a1ext::poly::{steenrod, x_sq1, x_sq2};
use std::time::Instant;

fn main() {
    let ring = Ring::with_defaults(8).unwrap();
    let a8 = build_ambient_mk(&ring, 8, false).unwrap();
    eprintln!("ambient built");
    for (i, m) in a8.monomials.iter().enumerate() {
        let t = Instant::now();
        let p = ring.expand(m);
        eprint!("{i} {m}: {} terms {:?} | ", p.len(), t.elapsed());
        let t = Instant::now();
        let _q1 = steenrod(1, &p);
        let q2 = steenrod(2, &p);
        eprint!("steenrod {:?} ({} terms) | ", t.elapsed(), q2.len());
        let t = Instant::now();
        let _w1 = ring.expand_xpoly(&x_sq1(m));
        let _w2 = ring.expand_xpoly(&x_sq2(m));
        eprintln!("images {:?}", t.elapsed());
    }
}
