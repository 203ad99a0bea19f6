use crate::field::{Fq, Poly};

/// Every q ∈ Λⁿ with ‖q‖ = q^t, i.e. max deg q_i = t, in lexicographic
/// order of the coefficient codes.
pub fn shell_enumerate(fq: &Fq, n: usize, t: i64) -> impl Iterator<Item = Vec<Poly>> + '_ {
    let per = (fq.q() as u64).pow(t as u32 + 1);
    let total = per.pow(n as u32);
    (0..total).filter_map(move |code| {
        let v = decode_vector(fq, code, per, n, t as usize);
        let top = v.iter().filter_map(|p| p.degree()).max();
        (top == Some(t as usize)).then_some(v)
    })
}

/// Every nonzero q ∈ Λⁿ with ‖q‖ ≤ q^t.
pub fn ball_enumerate(fq: &Fq, n: usize, t: i64) -> impl Iterator<Item = Vec<Poly>> + '_ {
    (0..=t).flat_map(move |s| shell_enumerate(fq, n, s))
}

fn decode_vector(fq: &Fq, mut code: u64, per: u64, n: usize, deg: usize) -> Vec<Poly> {
    let q = fq.q() as u64;
    (0..n)
        .map(|_| {
            let mut c = code % per;
            code /= per;
            let mut coeffs = Vec::with_capacity(deg + 1);
            for _ in 0..=deg {
                coeffs.push(fq.element((c % q) as u32).expect("digit below q"));
                c /= q;
            }
            Poly::from_coeffs(coeffs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dioph::psi::shell_count;

    #[test]
    fn worked_counts() {
        let f2 = Fq::prime(2).unwrap();
        let f3 = Fq::prime(3).unwrap();
        assert_eq!(shell_enumerate(&f2, 2, 1).count(), 12);
        assert_eq!(shell_enumerate(&f3, 1, 0).count(), 2);
        assert_eq!(shell_enumerate(&f2, 2, 0).count(), 3);
        assert_eq!(shell_count(2, 2, 1), 12.into());
    }
}
