use anglebound::max_angle;
use anglebound::search::minimize_max_angle;

#[test]
fn alpha_estimates_are_nondecreasing_in_n() {
    for dim in [2usize, 3] {
        let mut prev = 0.0f64;
        for n in 3..=8 {
            let r = minimize_max_angle(n, dim, 3000, 8, 7).unwrap();
            let a = r.achieved_angle.radians();
            assert_eq!(r.achieved_angle, max_angle(&r.points));
            assert!(a >= prev - 1e-12, "D={dim}: α̂({n}) = {a} < α̂({}) = {prev}", n - 1);
            prev = a;
        }
    }
}

#[test]
fn tetrahedron_value_is_reached() {
    let r = minimize_max_angle(4, 3, 3000, 8, 1).unwrap();
    assert!(r.achieved_angle.degrees() < 60.0 + 1e-6);
}
