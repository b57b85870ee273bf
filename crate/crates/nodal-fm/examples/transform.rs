use nodal_fm::cli_io::{parse_sheaf, parse_torsion};
use nodal_fm::fm::{fm_forward, fm_inverse};

fn main() {
    for text in ["S[d=(-1,0,1,0,0,-1,0,1,-1)]", "B[d=(1,-1);m=2;l=2]", "B[d=(0);m=3;l=-1/2]", "S[d=(-1)]"] {
        let d = parse_sheaf(text).unwrap();
        let image = fm_forward(&d).unwrap();
        let c = d.charge();
        println!("{d}  (rank {}, degree {})", c.rank, c.degree);
        println!("  -> {image}, length {}", image.length());
        println!("  dual {} -> {}", d.dual(), fm_forward(&d.dual()).unwrap());
        assert_eq!(fm_inverse(&image).unwrap(), d);
    }
    let t = parse_torsion("Mq[(2,2)(3,4)(1,3);m=1;l=5]").unwrap();
    println!("preimage of {t} is {}", fm_inverse(&t).unwrap());
}
