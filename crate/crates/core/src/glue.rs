use crate::{Error, Result};

/// Glue vector `v_i` of the type lattice with denominator `n`.
///
/// `v_i = (1/n) [ (m-i)/m repeated i times, -i/m repeated m-i times ]`.
/// `v_0` is zero and every `v_i` has zero component sum, so `q + v_i`
/// stays on the hyperplane `Σ x = 1`.
pub fn glue_vector(m: usize, n: u32, i: usize) -> Result<Vec<f64>> {
    if i >= m {
        return Err(Error::GlueIndexOutOfRange { index: i, m });
    }
    let (mf, nf) = (m as f64, f64::from(n));
    let hi = (m - i) as f64 / (mf * nf);
    let lo = -(i as f64) / (mf * nf);
    Ok((0..m).map(|j| if j < i { hi } else { lo }).collect())
}

/// Squared L2 norm of `v_i`: `i (m - i) / (m n²)`.
pub fn glue_norm_squared(m: usize, n: u32, i: usize) -> f64 {
    let nf = f64::from(n);
    (i * (m - i)) as f64 / (m as f64 * nf * nf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15)
    }

    #[test]
    fn first_glue_vector() {
        let v = glue_vector(3, 1, 1).unwrap();
        assert!(close(&v, &[2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0]));
    }

    #[test]
    fn zero_coset() {
        for m in 2..8 {
            assert!(glue_vector(m, 5, 0).unwrap().iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn substitution() {
        let v = glue_vector(4, 2, 2).unwrap();
        assert!(close(&v, &[0.25, 0.25, -0.25, -0.25]));
    }

    #[test]
    fn out_of_range() {
        assert_eq!(
            glue_vector(3, 1, 3),
            Err(Error::GlueIndexOutOfRange { index: 3, m: 3 })
        );
    }

    #[test]
    fn sums_and_norms() {
        for m in 2..12 {
            for n in 1..5 {
                for i in 0..m {
                    let v = glue_vector(m, n, i).unwrap();
                    assert!(v.iter().sum::<f64>().abs() < 1e-14);
                    let sq: f64 = v.iter().map(|x| x * x).sum();
                    assert!((sq - glue_norm_squared(m, n, i)).abs() < 1e-14);
                    // cosets i and m - i are mirror images
                    if i > 0 {
                        assert!((sq - glue_norm_squared(m, n, m - i)).abs() < 1e-14);
                    }
                }
            }
        }
    }
}
