//! Relaxation values against explicit feasible points and the exact solver.

use popcolor::graph::fixtures;
use popcolor::lp::{relax, solve_lp};
use popcolor::model::{nonzero_count, VarKind};
use popcolor::verify::relaxation_value;
use popcolor::{build_model, Graph, ModelKind, Rational};

fn half() -> Rational {
    Rational::new(1, 2)
}

/// `x_{v,1} = x_{v,2} = 1/2`, `w_1 = w_2 = 1`: an ASS point of value 2 on any graph.
#[test]
fn ass_half_point_is_feasible_everywhere() {
    for g in [fixtures::complete(3), fixtures::petersen(), fixtures::myciel(3), fixtures::queen(4, 4)] {
        let h = 4.min(g.n());
        let m = relax(&build_model(&g, ModelKind::Ass, h, 1).unwrap());
        let mut x = vec![Rational::zero(); m.variables.len()];
        for v in 1..=g.n() {
            for i in 1..=2 {
                x[m.var_index(VarKind::X { v, i }).unwrap()] = half();
            }
        }
        for i in 1..=2 {
            x[m.var_index(VarKind::W { i }).unwrap()] = Rational::one();
        }
        assert!(m.is_feasible(&x, false));
        assert_eq!(m.objective.value(&x), Rational::from(2));
        assert_eq!(solve_lp(&m).unwrap().value, Some(Rational::from(2)));
    }
}

/// `g_{1,v} = 1/2`, `g_{i,v} = 0` above; `l_{v,1} = 0`, `l_{v,2} = 1/2`,
/// `l_{v,i} = 1` above: a POP point of value 3/2.
#[test]
fn pop_half_point_on_triangle() {
    let g = fixtures::complete(3);
    let m = relax(&build_model(&g, ModelKind::Pop, 3, 1).unwrap());
    let mut x = vec![Rational::zero(); m.variables.len()];
    for (j, var) in m.variables.iter().enumerate() {
        match var.kind {
            VarKind::G { i: 1, .. } | VarKind::L { i: 2, .. } => x[j] = half(),
            VarKind::L { i, .. } if i > 2 => x[j] = Rational::one(),
            _ => {}
        }
    }
    assert!(m.is_feasible(&x, false));
    assert_eq!(m.objective.value(&x), Rational::new(3, 2));
    assert_eq!(relaxation_value(&g, ModelKind::Pop, 3, 1).unwrap(), Rational::new(3, 2));
}

#[test]
fn k4_pop1_point_of_value_twelve_fifths() {
    let g = fixtures::complete(4);
    let m = relax(&build_model(&g, ModelKind::Pop1, 4, 1).unwrap());
    let r = |a, b| Rational::new(a, b);
    let gq = [r(4, 5), r(2, 5), r(1, 5), r(0, 1)];
    let gv = [r(3, 5), r(1, 5), r(0, 1), r(0, 1)];
    let mut x = vec![Rational::zero(); m.variables.len()];
    for v in 1..=4 {
        for i in 1..=4 {
            let gi = if v == 1 { &gq } else { &gv };
            if let Some(j) = m.var_index(VarKind::G { i, v }) {
                x[j] = gi[i - 1].clone();
            }
            // l_{v,i} = g_{i-1,v} - g_{i,v}, with g_{0,v} = 1
            if let Some(j) = m.var_index(VarKind::L { v, i }) {
                let prev = if i == 1 { Rational::one() } else { gi[i - 2].clone() };
                x[j] = prev - gi[i - 1].clone();
            }
        }
    }
    assert!(m.is_feasible(&x, false));
    assert_eq!(m.objective.value(&x), r(12, 5));
    assert!(relaxation_value(&g, ModelKind::Pop1, 4, 1).unwrap() <= r(12, 5));
}

#[test]
fn every_kind_relaxes_below_chromatic_number() {
    let g: Graph = fixtures::myciel(3);
    for kind in ModelKind::ALL {
        let nu = relaxation_value(&g, kind, 4, 11).unwrap();
        assert!(nu <= Rational::from(4), "{kind} {nu}");
        assert!(nu >= Rational::new(3, 2), "{kind} {nu}");
    }
}

#[test]
fn nonzero_counts_grow_with_h() {
    let g = fixtures::cycle(5);
    for kind in ModelKind::ALL {
        let small = nonzero_count(&build_model(&g, kind, 3, 1).unwrap());
        let large = nonzero_count(&build_model(&g, kind, 5, 1).unwrap());
        assert!(small < large, "{kind}");
    }
}
