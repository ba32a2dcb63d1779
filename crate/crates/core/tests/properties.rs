use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use proptest::prelude::*;

use flagcalc::bundlecalc::{BundleExpr, IrreducibleBundle};
use flagcalc::character::Character;
use flagcalc::chowring::{Ambient, FlagFactor};
use flagcalc::dsl::{parse_ambient, parse_spec};
use flagcalc::repcore::{bwb, bwb_weight, cauchy_sym, cauchy_wedge, lr_product, weyl_dim_unchecked, BwbResult, Partition};
use flagcalc::sheafcohom::{character_cohomology, chi, cohomology};

fn factors() -> Vec<FlagFactor> {
    vec![
        FlagFactor::projective(3).unwrap(),
        FlagFactor::grassmannian(2, 4).unwrap(),
        FlagFactor::grassmannian(2, 5).unwrap(),
        FlagFactor::new(4, vec![1, 2]).unwrap(),
        FlagFactor::new(4, vec![1, 2, 3]).unwrap(),
    ]
}

fn block_dominant(f: &FlagFactor, mut w: Vec<i64>) -> Vec<i64> {
    for r in f.block_ranges() {
        w[r].sort_unstable_by(|a, b| b.cmp(a));
    }
    w
}

fn serre_partner(f: &FlagFactor, w: &[i64]) -> Vec<i64> {
    let mut out = vec![0; w.len()];
    for r in f.block_ranges() {
        let b: Vec<i64> = w[r.clone()].iter().rev().map(|x| -x).collect();
        out[r].copy_from_slice(&b);
    }
    out.iter().zip(f.canonical_weight()).map(|(a, b)| a + b).collect()
}

fn binom(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

fn dim(l: &Partition, n: usize) -> BigUint {
    weyl_dim_unchecked(&l.to_weight(n).unwrap())
}

fn partition(max_rows: usize, max_part: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..=max_part, max_rows).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bwb_concentrated_and_serre_dual(fi in 0usize..5, raw in prop::collection::vec(-6i64..=6, 5)) {
        let f = &factors()[fi];
        let w = block_dominant(f, raw[..f.n()].to_vec());
        let res = bwb(f.n(), f.steps(), &w).unwrap();
        let amb = Ambient::new(vec![f.clone()]).unwrap();
        let b = IrreducibleBundle::new(&amb, w.clone()).unwrap();
        let v = character_cohomology(&amb, &b.character(&amb));
        let nonzero: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
        match &res {
            BwbResult::Acyclic => prop_assert!(nonzero.is_empty()),
            BwbResult::Concentrated { degree, .. } => {
                prop_assert_eq!(&nonzero, &vec![*degree]);
                prop_assert_eq!(&v[*degree], &BigInt::from(res.dimension()));
            }
        }
        let dual = bwb(f.n(), f.steps(), &serre_partner(f, &w)).unwrap();
        prop_assert_eq!(res.dimension(), dual.dimension());
        prop_assert_eq!(res.degree().map(|d| f.dim() - d), dual.degree());
    }

    #[test]
    fn bwb_invariant_under_determinant_twist(raw in prop::collection::vec(-5i64..=5, 4), t in -3i64..=3) {
        let a = bwb_weight(&raw);
        let shifted: Vec<i64> = raw.iter().map(|x| x + t).collect();
        let b = bwb_weight(&shifted);
        prop_assert_eq!(a.degree(), b.degree());
        prop_assert_eq!(a.dimension(), b.dimension());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn chi_bwb_equals_hrr(ai in 0usize..5, raw in prop::collection::vec(prop::collection::vec(-3i64..=3, 9), 1..=2)) {
        let names = ["P(3)", "G(2,4)", "F(1,2,4)", "P(1) x P(2)", "P(1) x G(2,4)"];
        let amb = parse_ambient(names[ai]).unwrap();
        let mut ch = Character::new();
        for r in &raw {
            let mut w = vec![];
            let mut off = 0;
            for f in amb.factors() {
                w.extend(block_dominant(f, r[off..off + f.n()].to_vec()));
                off += f.n();
            }
            ch = ch.add(&IrreducibleBundle::new(&amb, w).unwrap().character(&amb));
        }
        let v = character_cohomology(&amb, &ch);
        let alt: BigInt = v.iter().enumerate().map(|(i, x)| if i % 2 == 0 { x.clone() } else { -x }).sum();
        let hrr = amb.chi_hrr(&ch);
        prop_assert!(hrr.is_integer());
        prop_assert_eq!(hrr.to_integer(), alt);
    }

    #[test]
    fn lr_dimensions_multiply(n in 1usize..=4, l in partition(4, 3), m in partition(4, 3)) {
        prop_assume!(l.len() <= n && m.len() <= n);
        let total: BigUint = lr_product(&l, &m, n).iter().map(|(nu, c)| dim(nu, n) * BigUint::from(*c)).sum();
        prop_assert_eq!(total, dim(&l, n) * dim(&m, n));
    }

    #[test]
    fn lr_is_commutative(l in partition(3, 3), m in partition(3, 3)) {
        prop_assert_eq!(lr_product(&l, &m, 6), lr_product(&m, &l, 6));
    }

    #[test]
    fn character_of_sum_is_additive(ai in 0usize..3, a in prop::collection::vec(-2i64..=2, 4), b in prop::collection::vec(-2i64..=2, 4)) {
        let amb = parse_ambient(["P(3)", "G(2,4)", "F(1,3,4)"][ai]).unwrap();
        let f = &amb.factors()[0];
        let (wa, wb) = (block_dominant(f, a), block_dominant(f, b));
        let ea = BundleExpr::irr(IrreducibleBundle::new(&amb, wa).unwrap());
        let eb = BundleExpr::irr(IrreducibleBundle::new(&amb, wb).unwrap());
        let ca = cohomology(&amb, &ea).unwrap().values().unwrap();
        let cb = cohomology(&amb, &eb).unwrap().values().unwrap();
        let chi_sum = chi(&amb, &ea).unwrap() + chi(&amb, &eb).unwrap();
        let alt: BigInt = ca.iter().zip(&cb).enumerate().map(|(i, (x, y))| if i % 2 == 0 { x + y } else { -(x + y) }).sum();
        prop_assert_eq!(chi_sum, alt);
    }
}

#[test]
fn cauchy_dimension_identities() {
    for a in 1..=5usize {
        for b in 1..=5usize {
            for k in 0..=(a * b) as u32 {
                let s: BigUint = cauchy_wedge(k, a, b).iter().map(|(l, m)| dim(l, a) * dim(m, b)).sum();
                assert_eq!(s, binom((a * b) as u64, k as u64), "wedge^{k} of {a}x{b}");
            }
            for k in 0..=6u32 {
                let s: BigUint = cauchy_sym(k, a, b).iter().map(|(l, m)| dim(l, a) * dim(m, b)).sum();
                assert_eq!(s, binom((a * b + k as usize - 1) as u64, k as u64), "sym^{k} of {a}x{b}");
            }
        }
    }
}

#[test]
fn lambda_ring_ranks() {
    // rank of Λ^k and S^k of a rank r bundle
    let amb = parse_ambient("G(2,6)").unwrap();
    for (text, want) in [("Wedge^2(Q)", 6), ("Sym^3(U)", 4), ("Wedge^2(Q*U)", 28), ("Sym^2(Q) + Wedge^2(Q)", 16)] {
        let s = parse_spec(&format!("G(2,6) ; {text}")).unwrap();
        assert_eq!(s.expr().unwrap().rank(&amb), want, "{text}");
    }
}

#[test]
fn small_lr_table() {
    let p = |v: &[u32]| Partition::new(v.to_vec()).unwrap();
    let prod = lr_product(&p(&[2, 1]), &p(&[2, 1]), 4);
    let expect = [
        (p(&[4, 2]), 1),
        (p(&[4, 1, 1]), 1),
        (p(&[3, 3]), 1),
        (p(&[3, 2, 1]), 2),
        (p(&[3, 1, 1, 1]), 1),
        (p(&[2, 2, 2]), 1),
        (p(&[2, 2, 1, 1]), 1),
    ];
    assert_eq!(prod.len(), expect.len());
    for (nu, c) in expect {
        assert_eq!(prod.get(&nu), Some(&c), "{nu:?}");
    }
}
