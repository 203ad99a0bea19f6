//! Row and column Hermite reduction over Λ = F_q[T].

use crate::error::{LabError, Result};
use crate::field::{Fq, Poly};

pub type Row = Vec<Poly>;

fn axpy(dst: &mut Row, c: &Poly, src: &Row, fq: &Fq) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = d.sub(&c.mul(s, fq), fq);
        }
    }
}

fn scale_row(r: &mut Row, c: crate::field::FqElem, fq: &Fq) {
    for x in r.iter_mut() {
        *x = x.scale(c, fq);
    }
}

/// Canonical row-Hermite form of the row span: echelon, monic pivots, and
/// entries above each pivot of lower degree than the pivot. Zero rows are
/// dropped.
pub fn row_hnf(rows: &[Row], fq: &Fq) -> Result<Vec<Row>> {
    let mut m: Vec<Row> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let width = m.first().map_or(0, |r| r.len());
    let mut out_rows = 0;
    for col in 0..width {
        loop {
            // the row at or below out_rows with the least-degree nonzero entry
            let pick = (out_rows..m.len()).filter(|&i| !m[i][col].is_zero()).min_by_key(|&i| m[i][col].degree());
            let Some(p) = pick else { break };
            m.swap(out_rows, p);
            let mut done = true;
            for i in out_rows + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let (quo, _) = m[i][col].div_rem(&m[out_rows][col], fq)?;
                let src = m[out_rows].clone();
                axpy(&mut m[i], &quo, &src, fq);
                done &= m[i][col].is_zero();
            }
            if done {
                break;
            }
        }
        if out_rows < m.len() && !m[out_rows][col].is_zero() {
            let inv = fq.inv(m[out_rows][col].leading())?;
            scale_row(&mut m[out_rows], inv, fq);
            let src = m[out_rows].clone();
            for i in 0..out_rows {
                let (quo, _) = m[i][col].div_rem(&src[col], fq)?;
                axpy(&mut m[i], &quo, &src, fq);
            }
            out_rows += 1;
        }
    }
    m.truncate(out_rows);
    Ok(m)
}

/// Basis of K·span(rows) ∩ Λ^m. With M·V = [H | 0] for unimodular V and
/// H square nonsingular, the first ℓ rows of V⁻¹ span the saturation and
/// extend to a basis of Λ^m.
pub fn saturate_rows(rows: &[Row], fq: &Fq) -> Result<Vec<Row>> {
    let l = rows.len();
    let Some(m) = rows.first().map(|r| r.len()) else { return Ok(Vec::new()) };
    let mut a: Vec<Row> = rows.to_vec();
    // vinv starts as the identity; column ops on a are row ops on vinv
    let mut vinv: Vec<Row> = (0..m).map(|i| (0..m).map(|j| if i == j { Poly::one() } else { Poly::zero() }).collect()).collect();
    for r in 0..l {
        loop {
            let pick = (r..m).filter(|&k| !a[r][k].is_zero()).min_by_key(|&k| a[r][k].degree());
            let Some(p) = pick else {
                return Err(LabError::RankDeficient(format!("row {r} is dependent on the previous ones")));
            };
            if p != r {
                for row in a.iter_mut() {
                    row.swap(r, p);
                }
                vinv.swap(r, p);
            }
            let mut done = true;
            for k in r + 1..m {
                if a[r][k].is_zero() {
                    continue;
                }
                let (quo, _) = a[r][k].div_rem(&a[r][r], fq)?;
                // col_k -= quo·col_r; inverse: row_r += quo·row_k of V⁻¹
                for row in a.iter_mut() {
                    let v = row[k].sub(&quo.mul(&row[r], fq), fq);
                    row[k] = v;
                }
                let src = vinv[k].clone();
                let neg = quo.neg(fq);
                axpy(&mut vinv[r], &neg, &src, fq);
                done &= a[r][k].is_zero();
            }
            if done {
                break;
            }
        }
    }
    Ok(vinv.into_iter().take(l).collect())
}

/// gcd of the ℓ×ℓ minors, made monic; a unit exactly for primitive spans.
pub fn minor_gcd(rows: &[Row], fq: &Fq) -> Poly {
    let l = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    let mut g = Poly::zero();
    for cols in combinations(m, l) {
        let sub: Vec<Row> = rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        g = g.gcd(&det(&sub, fq), fq);
    }
    g
}

fn combinations(m: usize, l: usize) -> Vec<Vec<usize>> {
    (0u32..1 << m).filter(|s| s.count_ones() as usize == l).map(|s| (0..m).filter(|i| s & (1 << i) != 0).collect()).collect()
}

/// Determinant by cofactor expansion (sizes here are at most 4 or 5).
pub fn det(a: &[Row], fq: &Fq) -> Poly {
    let n = a.len();
    if n == 0 {
        return Poly::one();
    }
    let mut acc = Poly::zero();
    for j in 0..n {
        if a[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Row> = a[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = a[0][j].mul(&det(&minor, fq), fq);
        acc = if j % 2 == 0 { acc.add(&term, fq) } else { acc.sub(&term, fq) };
    }
    acc
}

/// Whether v lies in the span of an echelon basis produced by `row_hnf`.
pub fn hnf_contains(hnf: &[Row], v: &Row, fq: &Fq) -> Result<bool> {
    let mut v = v.clone();
    for row in hnf {
        let col = row.iter().position(|x| !x.is_zero()).expect("nonzero rows");
        if v[col].is_zero() {
            continue;
        }
        let (quo, rem) = v[col].div_rem(&row[col], fq)?;
        if !rem.is_zero() {
            return Ok(false);
        }
        axpy(&mut v, &quo, row, fq);
    }
    Ok(v.iter().all(|x| x.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(fq: &Fq, c: &[i64]) -> Poly {
        Poly::from_ints(fq, c)
    }

    #[test]
    fn saturation_examples() {
        let fq = Fq::prime(2).unwrap();
        let t = Poly::t();
        let z = Poly::zero();
        let o = Poly::one();
        let s = saturate_rows(&[vec![t.clone(), z.clone(), z.clone()]], &fq).unwrap();
        assert_eq!(row_hnf(&s, &fq).unwrap(), vec![vec![o.clone(), z.clone(), z.clone()]]);
        let prim = vec![vec![o.clone(), t.clone(), z.clone()], vec![z.clone(), o.clone(), z.clone()]];
        assert!(minor_gcd(&prim, &fq).is_unit());
        let s = row_hnf(&saturate_rows(&prim, &fq).unwrap(), &fq).unwrap();
        assert_eq!(s, row_hnf(&prim, &fq).unwrap());
        // (T+1)·(1, T, 0) together with (0, 0, 1)
        let fat = vec![vec![p(&fq, &[1, 1]), p(&fq, &[0, 1, 1]), z.clone()], vec![z.clone(), z.clone(), o.clone()]];
        assert_eq!(minor_gcd(&fat, &fq), p(&fq, &[1, 1]));
        let s = saturate_rows(&fat, &fq).unwrap();
        assert!(minor_gcd(&s, &fq).is_unit());
        assert!(hnf_contains(&row_hnf(&s, &fq).unwrap(), &vec![o.clone(), t.clone(), z.clone()], &fq).unwrap());
        assert!(saturate_rows(&[prim[0].clone(), prim[0].clone()], &fq).is_err());
    }
}
