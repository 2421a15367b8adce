//! Shift digraphs on ascending pairs: the chromatic number tracks
//! ceil(log2 m), checked by the exact solver and the oracle.

use cyclab::chromatic::chromatic_exact;
use cyclab::construct::shift_digraph;
use cyclab::oracle;

fn main() {
    for m in 3..=8 {
        let d = shift_digraph(m, 2);
        let expected = (usize::BITS - (m - 1_usize).leading_zeros()) as usize;
        let exact = chromatic_exact(&d, None);
        let brute = oracle::chromatic_exhaustive(&d);
        println!(
            "shift({m},2): {:2} vertices, chi {} (solver {}, oracle {}, log bound {})",
            d.vertex_count(),
            exact.lower,
            exact.lower,
            brute,
            expected
        );
        assert_eq!(exact.lower, expected);
        assert_eq!(brute, expected);
    }
    println!("chromatic numbers match the logarithmic profile");
}
