use autostruct::automaton::Limits;
use autostruct::builtins;
use autostruct::presentation::{product_presentation, to_binary};
use std::time::Instant;

fn main() {
    let limits = Limits::default();
    let t0 = Instant::now();
    let one = builtins::bomega(&limits).unwrap();
    println!("bomega: {:?}", t0.elapsed());
    for (n, r) in one.relations() {
        println!("  {n}: {} states", r.state_count());
    }
    println!("  domain: {} states", one.domain().state_count());
    let t1 = Instant::now();
    let paired = product_presentation(&one, &one, &limits).unwrap();
    println!("product: {:?}", t1.elapsed());
    for (n, r) in paired.relations() {
        println!("  {n}: {} states, {} syms", r.state_count(), r.tracks().symbol_count());
    }
    println!("  domain: {} states", paired.domain().state_count());
    let t2 = Instant::now();
    let b = to_binary(&paired, &limits).unwrap();
    println!("binarize: {:?}", t2.elapsed());
    for (n, r) in b.relations() {
        println!("  {n}: {} states", r.state_count());
    }
    println!("  domain: {} states", b.domain().state_count());
}
