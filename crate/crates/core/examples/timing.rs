use std::time::Instant;

fn main() {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse().unwrap()).collect();
    let s = octacount::Sides::new(args[0], args[1], args[2], args[3]).unwrap();
    let start = Instant::now();
    let r = octacount::theorem1_count(&s, 1).unwrap();
    println!("{s} {} terms {} dets {} in {:?}", r.count, r.terms_evaluated, r.determinants_evaluated, start.elapsed());
}
