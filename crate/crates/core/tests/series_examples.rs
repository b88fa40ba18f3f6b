use quadmoment::series::{
    a_brute, a_closed, h_brute, h_closed, BruteLimits, K2Weights,
};
use quadmoment::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

const H_LIMITS: BruteLimits = BruteLimits {
    n_max: 20_000,
    k2_max: 2_000,
    k1_max: 0,
};

#[test]
fn h_at_three_two() {
    let (v, w) = (c(3.0, 0.0), c(2.0, 0.0));
    for (k1, l) in [(1i64, 1u64), (5, 3), (3, 1)] {
        let brute = h_brute(k1, l, 1, v, w, H_LIMITS, K2Weights::All).unwrap();
        let closed = h_closed(k1, l, 1, v, w).unwrap();
        assert!((brute - closed).norm() < 1e-6, "k1={k1} l={l}: {brute} vs {closed}");
    }
}

#[test]
fn h_minus1_at_three_two() {
    let (v, w) = (c(3.0, 0.0), c(2.0, 0.0));
    let brute = h_brute(1, 1, 1, v, w, H_LIMITS, K2Weights::Alternating).unwrap();
    let closed = h_closed(1, 1, 1, v, w).unwrap() * (2f64.powf(-2.0) - 1.0);
    assert!((brute - closed).norm() < 1e-6, "{brute} vs {closed}");
}

#[test]
fn a_at_two_two() {
    let (u, w) = (c(2.0, 0.0), c(2.0, 0.0));
    let lim = BruteLimits {
        n_max: 20_000,
        k2_max: 100,
        k1_max: 30,
    };
    let brute = a_brute(1, 1, 1, u, w, lim).unwrap();
    let closed = a_closed(1, 1, 1, u, w, lim.k1_max).unwrap();
    assert!((brute - closed).norm() < 1e-6, "{brute} vs {closed}");

    let lim = BruteLimits {
        n_max: 8_000,
        k2_max: 60,
        k1_max: 30,
    };
    let brute = a_brute(1, 3, 1, u, w, lim).unwrap();
    let closed = a_closed(1, 3, 1, u, w, lim.k1_max).unwrap();
    assert!((brute - closed).norm() < 1e-5, "l=3: {brute} vs {closed}");
}
