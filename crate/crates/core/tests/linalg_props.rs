use proptest::prelude::*;
use stablecoh::linalg::{intersect, solve, Solver};
use stablecoh::perm::Perm;
use stablecoh::{FpMatrix, Prime, Subspace};

fn pair() -> impl Strategy<Value = (FpMatrix, FpMatrix)> {
    (prop::sample::select(vec![2u32, 3, 5, 7]), 1usize..7, 1usize..7, 1usize..7).prop_flat_map(|(p, r1, r2, c)| {
        let q = Prime::new(p).unwrap();
        (prop::collection::vec(0u8..(p as u8), r1 * c), prop::collection::vec(0u8..(p as u8), r2 * c)).prop_map(
            move |(a, b)| (FpMatrix::from_data(q, r1, c, a).unwrap(), FpMatrix::from_data(q, r2, c, b).unwrap()),
        )
    })
}

fn matrix() -> impl Strategy<Value = FpMatrix> {
    (prop::sample::select(vec![2u32, 3, 5, 7]), 1usize..9, 1usize..9).prop_flat_map(|(p, r, c)| {
        prop::collection::vec(0u8..(p as u8), r * c)
            .prop_map(move |data| FpMatrix::from_data(Prime::new(p).unwrap(), r, c, data).unwrap())
    })
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix()) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.dim(), m.cols());
        for v in k.basis().row_iter() {
            prop_assert!(m.apply(v).unwrap().iter().all(|&x| x == 0));
        }
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn solver_finds_preimages(m in matrix(), seed in any::<u64>()) {
        let p = m.prime().get() as u64;
        let x: Vec<u8> = (0..m.cols()).map(|i| ((seed >> (i * 3 % 60)) % p) as u8).collect();
        let b = m.apply(&x).unwrap();
        let s = Solver::new(&m);
        let y = s.preimage(&b).unwrap();
        prop_assert_eq!(m.apply(&y).unwrap(), b.clone());
        let rhs = FpMatrix::from_rows(m.prime(), 1, &b.iter().map(|&v| [v]).collect::<Vec<_>>()).unwrap();
        prop_assert!(solve(&m, &rhs).unwrap().is_some());
    }

    #[test]
    fn intersection_is_contained_in_both((a, b) in pair()) {
        let sa = a.row_space();
        let sb = b.row_space();
        let i = intersect(&[sa.clone(), sb.clone()]).unwrap();
        prop_assert!(sa.contains_space(&i) && sb.contains_space(&i));
        let sum = sa.sum(&sb).unwrap();
        prop_assert_eq!(sum.dim() + i.dim(), sa.dim() + sb.dim());
    }

    #[test]
    fn permutation_inverse_and_order(images in Just((0u32..7).collect::<Vec<_>>()).prop_shuffle()) {
        let p = Perm::from_images(images).unwrap();
        prop_assert!(p.compose(&p.inverse()).is_identity());
        let mut q = Perm::identity(7);
        for _ in 0..p.order() {
            q = q.compose(&p);
        }
        prop_assert!(q.is_identity());
        prop_assert_eq!(Perm::parse(&p.to_string(), 7).unwrap(), p);
    }
}

#[test]
fn subspace_basics() {
    let p = Prime::THREE;
    let s = Subspace::from_vectors(p, 3, &[vec![1u8, 2, 0], vec![2, 1, 0]]).unwrap();
    assert_eq!(s.dim(), 1);
    assert_eq!(s.annihilator().dim(), 2);
}
