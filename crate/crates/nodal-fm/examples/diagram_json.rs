use nodal_fm::cli_io::{emit_dot, module_from_json, module_to_json, parse_torsion};
use nodal_fm::module::{is_isomorphic, label_module};

fn main() {
    let t = parse_torsion("Nq[1(2,3)0]").unwrap();
    print!("{}", emit_dot(&t).unwrap());

    let m = label_module(&t.label().unwrap());
    let json = module_to_json(&m);
    println!("{json}");
    let back = module_from_json(&json).unwrap();
    assert!(is_isomorphic(&m, &back).is_true());
}
