use lchi::cli::compute_row;
use lchi::scalar::Precision;
use std::time::Instant;
fn main() {
    for q in [997u64, 9973, 49999, 99991] {
        let t0 = Instant::now();
        let r = compute_row(q, Precision::Extended64).unwrap();
        println!("ext64 q={q}: {:?}  m_q={:.6e}", t0.elapsed(), r.m_q);
    }
}
