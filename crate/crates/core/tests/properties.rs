use lorenz_renorm::fixedpoint::{
    c_guess_ladder, critical_spectrum, fixed_point_from_ladder, FixedPointOptions,
};
use lorenz_renorm::lorenz::{parse_map, write_map, LorenzRep, PlHomeo};
use lorenz_renorm::renorm::{renormalize, truncated_renormalize, Renormalization};
use lorenz_renorm::thurston::{thurston_domain_probe, ThurstonOptions};
use lorenz_renorm::{Mp, Real, RenormType};
use proptest::prelude::*;

fn like() -> Mp {
    Mp::new(256, 0.0)
}

fn homeo(inner: &[f64]) -> PlHomeo<Mp> {
    let l = like();
    let mut inner = inner.to_vec();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    let mut ys = vec![l.zero_like()];
    ys.extend(inner.iter().map(|&y| l.lift(y)));
    ys.push(l.one_like());
    PlHomeo::on_uniform_grid(ys).unwrap()
}

/// Realization of `t` in the family through `(c, φ)` with relative
/// boundary values `(t0, t1)`.
fn realize(
    t: &RenormType,
    c: f64,
    t0: f64,
    t1: f64,
    phi: (&[f64], &[f64]),
) -> Option<LorenzRep<Mp>> {
    let l = like();
    let family = LorenzRep::new(
        l.lift(c),
        l.zero_like(),
        l.one_like(),
        homeo(phi.0),
        homeo(phi.1),
        l.lift(2.0),
    )
    .ok()?;
    thurston_domain_probe(
        &family,
        t,
        l.lift(t0),
        l.lift(t1),
        &ThurstonOptions::for_precision(&l),
    )
    .ok()
    .map(|r| r.map)
}

fn node_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.02f64..0.98, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn homeo_inverse_undoes_eval(inner in node_values(), x in 0.0f64..1.0) {
        let h = homeo(&inner);
        let x = like().lift(x);
        let back = h.inverse(&h.eval(&x));
        prop_assert!((back - &x).abs().to_f64() < 1e-70);
    }

    #[test]
    fn map_text_round_trip(c in 0.05f64..0.95, v0 in 0.0f64..0.4, v1 in 0.6f64..1.0, p0 in node_values(), p1 in node_values()) {
        let l = like();
        let f = LorenzRep::new(l.lift(c) / &l.lift(3.0), l.lift(v0), l.lift(v1), homeo(&p0), homeo(&p1), l.lift(2.0)).unwrap();
        prop_assert_eq!(parse_map(&write_map(&f), 256).unwrap(), f);
    }

    #[test]
    fn realizations_are_renormalizable(
        ab in prop::sample::select(vec![(1usize, 1usize), (2, 1), (1, 2), (3, 2)]),
        c in 0.1f64..0.9,
        t0 in 0.1f64..0.9,
        t1 in 0.1f64..0.9,
        p0 in node_values(),
        p1 in node_values(),
    ) {
        let t = RenormType::monotone(ab.0, ab.1).unwrap();
        let f = realize(&t, c, t0, t1, (&p0, &p1));
        prop_assume!(f.is_some());
        let f = f.unwrap();
        let check = f.check_renormalizable(&t);
        prop_assert!(check.renormalizable, "{:?}", check.diagnostic);
        // the relative boundary values come out as requested
        let [_, v0, v1] = Renormalization::new(&f, &t).unwrap().params();
        prop_assert!((v0.to_f64() - t0).abs() < 1e-12);
        prop_assert!((v1.to_f64() - t1).abs() < 1e-12);
    }
}

#[test]
fn doubled_type_is_renormalizing_twice() {
    // the doubled-type renormalization against two t-renormalizations, the
    // first one sampled on a fine grid
    let grid = 4000;
    let cases = [
        ((1, 1), 0.5, 0.3, 0.6),
        ((2, 1), 0.4, 0.5, 0.5),
        ((2, 1), 0.6, 0.2, 0.7),
    ];
    let mut tested = 0;
    for ((a, b), c, t0, t1) in cases {
        let t = RenormType::monotone(a, b).unwrap();
        let twice = t.doubled();
        let Some(f) = realize(&twice, c, t0, t1, (&[0.3, 0.5, 0.8], &[0.1, 0.4, 0.6])) else {
            continue;
        };
        assert!(
            f.check_renormalizable(&t).renormalizable,
            "({a},{b}) doubled but not once renormalizable"
        );
        let direct = renormalize(&f, &twice, 2).unwrap().params();
        let once = truncated_renormalize(&f, &t, grid).unwrap();
        let stepwise = renormalize(&once, &t, 2).unwrap().params();
        for (x, y) in direct.iter().zip(&stepwise) {
            assert!(
                (x.to_f64() - y.to_f64()).abs() < 1e-5,
                "({a},{b}): {} vs {}",
                x.to_f64(),
                y.to_f64()
            );
        }
        tested += 1;
    }
    assert!(tested >= 2, "too few doubled realizations");
}

#[test]
fn mirrored_types_share_their_spectrum() {
    let l = like();
    let opts = FixedPointOptions::for_precision(&l, 2);
    for (a, b) in [(2, 1), (3, 1), (3, 2)] {
        let fixed = |a, b| {
            let t = RenormType::monotone(a, b).unwrap();
            let (fp, _) =
                fixed_point_from_ladder(&t, &l.lift(2.0), &c_guess_ladder(), &opts).unwrap();
            let (lambda, _) = critical_spectrum(&fp).unwrap();
            (fp.map, lambda)
        };
        let (f, lf) = fixed(a, b);
        let (g, lg) = fixed(b, a);
        let mirrored = f.c().clone() + g.c() - &l.one_like();
        assert!(mirrored.abs().to_f64() < 1e-60, "({a},{b})");
        assert!(
            (f.v0().to_f64() + g.v1().to_f64() - 1.0).abs() < 1e-12,
            "({a},{b})"
        );
        assert!((lf.re.to_f64() - lg.re.to_f64()).abs() < 1e-12, "({a},{b})");
        assert!((lf.im.to_f64() - lg.im.to_f64()).abs() < 1e-12, "({a},{b})");
    }
}
