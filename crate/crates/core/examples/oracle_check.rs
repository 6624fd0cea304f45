//! Closed-form intervals against grid enumeration and exhaustive (A, N)
//! search on random pieces.

use num_bigint::BigInt;
use slopefol::oracle::oracle_check;
use slopefol::random::{rng, seifert_instance, PieceParams};

fn main() {
    let mut r = rng(11);
    let params = PieceParams {
        max_n: 3,
        max_r: 3,
        max_den: 8,
        max_order: 5,
    };
    let mut agree = 0;
    for _ in 0..20 {
        let (p, c) = seifert_instance(&mut r, &params);
        let Some(check) = oracle_check(&p, &c, &BigInt::from(12), 24) else {
            continue;
        };
        println!(
            "n {} r {}: core [{}, {}], low {:?} / {:?}, high {:?} / {:?}",
            p.n(),
            p.r(),
            check.core.0,
            check.core.1,
            check.low,
            check.low_oracle,
            check.high,
            check.high_oracle
        );
        agree += check.agree as usize;
    }
    println!("{} checks agree", agree);
}
