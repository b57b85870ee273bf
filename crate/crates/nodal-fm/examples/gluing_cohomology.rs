use nodal_fm::fm::{cohomology, GlueSpec, Topology};
use nodal_fm::linalg::q;

fn main() {
    for (topology, d) in [(Topology::Cycle, vec![1, 0, -1]), (Topology::Cycle, vec![0, 0]), (Topology::Chain, vec![2, -1, 0])] {
        for lambda in [1, 2] {
            let g = GlueSpec::scalar(topology, d.clone(), q(lambda)).unwrap();
            let h = cohomology(&g);
            println!(
                "{topology:?} d={d:?} lambda={lambda}: h0={} h1={} chi={}",
                h.h0,
                h.h1,
                g.euler_characteristic()
            );
            assert_eq!(h.h0 as i64 - h.h1 as i64, g.euler_characteristic());
        }
    }
}
