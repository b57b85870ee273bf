use nodal_fm::linalg::{q, qf, Matrix};

fn main() {
    let a = Matrix::from_i64(&[&[2, 1, 0], &[4, 3, 1], &[6, 4, 1]]);
    println!("A = {a:?}");
    println!("rank {} det {}", a.rank(), a.det());
    for v in a.kernel_basis() {
        let shown: Vec<String> = v.iter().map(ToString::to_string).collect();
        println!("kernel vector ({})", shown.join(", "));
    }

    let b = Matrix::from_rows(vec![vec![q(1), qf(1, 2)], vec![qf(1, 3), qf(1, 4)]]).unwrap();
    let inv = b.inverse().unwrap();
    println!("B^-1 = {inv:?}");
    assert_eq!(&b * &inv, Matrix::identity(2));
    let cp: Vec<String> = b.charpoly().iter().map(ToString::to_string).collect();
    println!("charpoly of B, constant term first: [{}]", cp.join(", "));
}
