use super::{Convention, CyclotomicProduct};
use crate::error::{Error, Result};
use num::{BigRational, One, Zero};

/// Exact truncated power series of a Z-form product, coefficients of
/// `t^0 .. t^order`.
pub fn product_series(z: &CyclotomicProduct, order: usize) -> Result<Vec<BigRational>> {
    if z.convention() != Convention::Z {
        return Err(Error::validation("product_series expects a Z-form product"));
    }
    let mut c = vec![BigRational::zero(); order + 1];
    c[0] = BigRational::from_integer(z.sign().into());
    for (&m, &e) in z.factors() {
        if !m.is_integer() {
            return Err(Error::NonIntegerExponent(m));
        }
        let m = m.to_integer() as usize;
        if m == 0 {
            return Err(Error::validation("zero exponent key in product"));
        }
        if e > 0 {
            for _ in 0..e {
                // multiply by (1 - t^m)
                for i in (m..=order).rev() {
                    let lower = c[i - m].clone();
                    c[i] -= lower;
                }
            }
        } else {
            for _ in 0..(-e) {
                // divide by (1 - t^m): out[i] = c[i] + out[i - m]
                for i in m..=order {
                    let lower = c[i - m].clone();
                    c[i] += lower;
                }
            }
        }
    }
    Ok(c)
}

/// Exact truncated series of `exp(-sum_k lambda_k t^k / k)` with the given
/// Lefschetz numbers `lambda_1, lambda_2, ...`.
pub fn exp_lefschetz_series(lambda: &[i64], order: usize) -> Vec<BigRational> {
    assert!(lambda.len() >= order, "need lambda_1..lambda_order");
    // b = exp(a) with a(0) = 0 satisfies n b_n = sum_j (j a_j) b_{n-j}.
    let mut b = vec![BigRational::zero(); order + 1];
    b[0] = BigRational::one();
    for n in 1..=order {
        let mut acc = BigRational::zero();
        for j in 1..=n {
            // j * a_j = -lambda_j
            let ja = BigRational::from_integer((-lambda[j - 1]).into());
            acc += ja * &b[n - j];
        }
        b[n] = acc / BigRational::from_integer(n.into());
    }
    b
}

/// Verifies `Z(t) = exp(-sum_k Lambda(h^k) t^k / k)` to the given order.
pub fn series_check(z: &CyclotomicProduct, order: usize) -> Result<bool> {
    let lhs = product_series(z, order)?;
    let lambda: Vec<i64> = (1..=order as u64)
        .map(|k| z.lefschetz(k))
        .collect::<Result<_>>()?;
    let rhs = exp_lefschetz_series(&lambda, order);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qspace::rat;

    #[test]
    fn smooth_point_identity() {
        let z = CyclotomicProduct::z_factor(rat(1, 1), 1).unwrap();
        assert!(series_check(&z, 20).unwrap());
    }

    #[test]
    fn mixed_exponent_product() {
        let z = CyclotomicProduct::from_factors(
            Convention::Z,
            [(rat(2, 1), 3), (rat(5, 1), -1)],
        )
        .unwrap();
        assert!(series_check(&z, 50).unwrap());
    }

    #[test]
    fn corrupted_lefschetz_table_fails() {
        let z = CyclotomicProduct::z_factor(rat(3, 1), -1).unwrap();
        let order = 20;
        let lhs = product_series(&z, order).unwrap();
        let mut lambda: Vec<i64> = (1..=order as u64)
            .map(|k| z.lefschetz(k).unwrap())
            .collect();
        lambda[5] += 1;
        let rhs = exp_lefschetz_series(&lambda, order);
        assert_ne!(lhs, rhs);
    }
}
