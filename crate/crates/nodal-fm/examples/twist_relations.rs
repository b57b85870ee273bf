use nodal_fm::fm::{apply_mat2, check_relations, parse_word, sl2_matrix};

fn main() {
    for c in check_relations() {
        println!("{:<20} {:?} {}", c.name, c.lhs, if c.holds { "holds" } else { "FAILS" });
    }
    let bab = sl2_matrix(&parse_word("BAB").unwrap());
    for (r, d) in [(1, 0), (2, 1), (0, 3)] {
        println!("BAB sends charge ({r},{d}) to {:?}", apply_mat2(&bab, r, d));
    }
}
