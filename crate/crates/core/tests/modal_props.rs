use epirisk::frame::LocalMeasure;
use epirisk::modal::{self, box_agg, diamond, dual, inconsistency, statuses};
use epirisk::{AlgebraPackage, Degree, Frame, Proposition, Relation};
use proptest::prelude::*;

const TOL: f64 = 1e-9;
const LEVELS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, Copy)]
enum Shape {
    Any,
    Reflexive,
    Transitive,
    Crisp,
}

fn level() -> impl Strategy<Value = f64> {
    prop::sample::select(LEVELS.to_vec())
}

fn close(mut m: Vec<Vec<f64>>, pkg: AlgebraPackage) -> Vec<Vec<f64>> {
    let n = m.len();
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t = pkg.tnorm(Degree::new(m[a][b]).unwrap(), Degree::new(m[b][c]).unwrap()).value();
                    if t > m[a][c] {
                        m[a][c] = t;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return m;
        }
    }
}

#[derive(Debug, Clone)]
struct Case {
    pkg: AlgebraPackage,
    matrix: Vec<Vec<f64>>,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl Case {
    fn frame(&self) -> Frame {
        let mut f = Frame::with_world_count(self.matrix.len()).unwrap();
        f.add_relation("M", Relation::from_dense("M", &self.matrix).unwrap()).unwrap();
        f
    }
    fn p(&self) -> Proposition {
        Proposition::new(self.p.clone()).unwrap()
    }
    fn q(&self) -> Proposition {
        Proposition::new(self.q.clone()).unwrap()
    }
}

fn case(shape: Shape) -> impl Strategy<Value = Case> {
    (prop::sample::select(AlgebraPackage::all().to_vec()), 2usize..=5).prop_flat_map(move |(pkg, n)| {
        let cell = match shape {
            Shape::Crisp => prop::sample::select(vec![0.0, 1.0]).boxed(),
            _ => level().boxed(),
        };
        (
            Just(pkg),
            prop::collection::vec(prop::collection::vec(cell, n), n),
            prop::collection::vec(level(), n),
            prop::collection::vec(level(), n),
        )
            .prop_map(move |(pkg, mut matrix, p, q)| {
                match shape {
                    Shape::Reflexive => (0..n).for_each(|w| matrix[w][w] = 1.0),
                    Shape::Transitive => matrix = close(matrix, pkg),
                    Shape::Any | Shape::Crisp => {}
                }
                Case { pkg, matrix, p, q }
            })
    })
}

fn leq(a: &Proposition, b: &Proposition) -> bool {
    a.values().iter().zip(b.values()).all(|(x, y)| *x <= y + TOL)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn monotone(c in case(Shape::Any)) {
        let f = c.frame();
        let p = c.p();
        let big = p.join(&c.q()).unwrap();
        prop_assert!(leq(&modal::box_op(&f, "M", &p, c.pkg).unwrap(), &modal::box_op(&f, "M", &big, c.pkg).unwrap()));
        prop_assert!(leq(&diamond(&f, "M", &p, c.pkg).unwrap(), &diamond(&f, "M", &big, c.pkg).unwrap()));
    }

    #[test]
    fn factive_under_reflexivity(c in case(Shape::Reflexive)) {
        let f = c.frame();
        let p = c.p();
        prop_assert!(leq(&modal::box_op(&f, "M", &p, c.pkg).unwrap(), &p));
    }

    #[test]
    fn introspective_under_fuzzy_transitivity(c in case(Shape::Transitive)) {
        let f = c.frame();
        let mp = modal::box_op(&f, "M", &c.p(), c.pkg).unwrap();
        let mmp = modal::box_op(&f, "M", &mp, c.pkg).unwrap();
        prop_assert!(leq(&mp, &mmp));
    }

    #[test]
    fn crisp_relations_reduce_to_min_and_max(c in case(Shape::Crisp)) {
        let f = c.frame();
        let p = c.p();
        let b = modal::box_op(&f, "M", &p, c.pkg).unwrap();
        let d = diamond(&f, "M", &p, c.pkg).unwrap();
        for (w, row) in c.matrix.iter().enumerate() {
            let vals: Vec<f64> = (0..row.len()).filter(|&v| row[v] == 1.0).map(|v| c.p[v]).collect();
            prop_assert_eq!(b.values()[w], vals.iter().copied().fold(1.0, f64::min));
            prop_assert_eq!(d.values()[w], vals.iter().copied().fold(0.0, f64::max));
        }
    }

    #[test]
    fn crisp_duality(c in case(Shape::Crisp)) {
        let f = c.frame();
        let p = Proposition::new(c.p.iter().map(|&x| if x >= 0.5 { 1.0 } else { 0.0 }).collect()).unwrap();
        prop_assert_eq!(dual(&f, "M", &p, c.pkg).unwrap(), diamond(&f, "M", &p, c.pkg).unwrap());
    }

    #[test]
    fn inconsistency_bounded_by_uncertainty_when_factive(c in case(Shape::Reflexive)) {
        let f = c.frame();
        let p = c.p();
        prop_assert!(leq(&inconsistency(&f, "M", &p, c.pkg).unwrap(), &p.structural_uncertainty()));
    }

    #[test]
    fn diamond_preserves_bottom(c in case(Shape::Any)) {
        let f = c.frame();
        let zero = Proposition::zero(f.len());
        prop_assert!(diamond(&f, "M", &zero, c.pkg).unwrap().is_zero());
    }

    #[test]
    fn conjunction_separation(c in case(Shape::Any)) {
        let (p, q) = (c.p(), c.q());
        if p.meet(&q.negate()).unwrap().is_zero() {
            prop_assert!(leq(&p, &q));
        }
    }

    #[test]
    fn status_bundle_is_consistent(c in case(Shape::Any)) {
        let f = c.frame();
        let p = c.p();
        let s = statuses(&f, "M", &p, c.pkg).unwrap();
        let not_box_not = modal::box_op(&f, "M", &p.negate(), c.pkg).unwrap().negate();
        prop_assert_eq!(&s.dual, &not_box_not);
        for w in 0..f.len() {
            let h = (s.dual.values()[w] - s.box_.values()[w]).max(0.0);
            prop_assert_eq!(s.hesitation.values()[w], h);
        }
    }
}

#[test]
fn aggregation_breaks_factivity() {
    // Two worlds seeing each other fully, uniform measure, p false at w0.
    let mut f = Frame::with_world_count(2).unwrap();
    f.add_relation("M", Relation::universal(2)).unwrap();
    for w in 0..2 {
        f.set_measure(w, LocalMeasure::new(&format!("w{w}"), 2, &[0.5, 0.5]).unwrap());
    }
    let p = Proposition::new(vec![0.0, 1.0]).unwrap();
    let agg = box_agg(&f, "M", &p, AlgebraPackage::GODEL).unwrap();
    assert_eq!(agg.values()[0], 0.5);
    assert!(agg.values()[0] > p.values()[0]);
}

#[test]
fn liquidity_statuses_are_exact() {
    let f = epirisk::applications::liquidity_frame();
    let r = f.proposition("r").unwrap();
    let s = statuses(&f, "K", r, AlgebraPackage::GODEL).unwrap();
    assert_eq!(s.box_.values()[0], 0.0);
    assert_eq!(s.diamond.values()[0], 0.6);
    assert!((s.dual.values()[0] - 0.9).abs() < 1e-12);
    assert!((s.hesitation.values()[0] - 0.9).abs() < 1e-12);
}
