use pnf_core::quad::simpson_dense;
use pnf_core::{remainder_kernel, remainder_pairing, Complex64, TestFunction};

#[test]
fn probe_simpson_values() {
    let phi = TestFunction::gaussian(1.5, 0.1).unwrap();
    let (lo, hi) = phi.support();
    println!("support = [{lo}, {hi}]");
    let kernel = |t: f64| Complex64::new(remainder_kernel(t) * phi.eval(t), 0.0);
    println!("kernel(1.5) = {:?}", kernel(1.5));
    let c = simpson_dense(kernel, lo, hi, 8_192);
    let f = simpson_dense(kernel, lo, hi, 16_384);
    let a = remainder_pairing(&phi, 2).unwrap();
    println!("coarse  = {c:?}");
    println!("fine    = {f:?}");
    println!("adaptive= {a:?}");
    println!("c-f = {:e}", (c - f).norm());
}
