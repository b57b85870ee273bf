//! Build the evaluation presentation of a sheaf, take its cokernel and check it against the predicted image.

use nodal_fm::cli_io::parse_sheaf;
use nodal_fm::fm::{fm_dual_check, verify_fm, VerifyOptions};

fn main() {
    let d = parse_sheaf("S[d=(-1,0,1,0,0,-1,0,1,-1)]").unwrap();
    let r = verify_fm(&d, VerifyOptions::default()).unwrap();
    println!("{}: expected {}, truncation order {}", r.desc, r.expected, r.order);
    println!("cokernel length {} against rank {}", r.length, r.rank);
    println!("identified as {:?}", r.identified);
    println!("passed: {}", r.passed());

    let dual = fm_dual_check(&parse_sheaf("B[d=(1,0,-1);m=1;l=3]").unwrap(), 1).unwrap();
    println!("{} -> {}, dual {} -> {}: {:?}", dual.desc, dual.image, dual.dual, dual.dual_image, dual.outcome);
}
