//! Compensated dot product (Ogita, Rump and Oishi's `Dot2`): the result is as
//! accurate as if computed in twice the working precision, then rounded.

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let z = s - a;
    (s, (a - (s - z)) + (b - z))
}

pub(crate) fn dot2(pairs: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    let (mut sum, mut err) = (0.0, 0.0);
    for (a, b) in pairs {
        let p = a * b;
        let p_err = a.mul_add(b, -p);
        let (s, s_err) = two_sum(sum, p);
        sum = s;
        err += p_err + s_err;
    }
    sum + err
}
