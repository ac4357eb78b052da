//! Signed subresultant (Sturm–Habicht) coefficients of `(P, dP/dv)`, whose
//! signs at a point give the number of distinct real roots of `P` there.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::polynomial::{Polynomial, Var};

/// Fraction-free (Bareiss) determinant with row pivoting.
pub(crate) fn det(mut m: Vec<Vec<Polynomial>>, nvars: usize) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(nvars);
    }
    let mut negate = false;
    let mut prev = Polynomial::one(nvars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Polynomial::zero(nvars);
            };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = if prev.is_one() { t } else { t.div_exact(&prev).expect("Bareiss division is exact") };
            }
            m[i][k] = Polynomial::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// `[sRes_p, sRes_{p-1}, ..., sRes_0]` for `P = p` of degree `p >= 1` in `v`
/// and `Q = dP/dv`.
pub fn sturm_habicht(p: &Polynomial, v: Var) -> Vec<Polynomial> {
    let nv = p.nvars();
    let pc = p.coeffs_in(v);
    let dp = p.derivative(v);
    let qc = dp.coeffs_in(v);
    let pd = pc.len() - 1;
    let qd = qc.len() - 1;
    debug_assert_eq!(qd + 1, pd);
    let coeff = |cs: &[Polynomial], e: isize| -> Polynomial {
        if e < 0 || e as usize >= cs.len() {
            Polynomial::zero(nv)
        } else {
            cs[e as usize].clone()
        }
    };
    let mut out = vec![pc[pd].clone()];
    for j in (0..=qd).rev() {
        let size = pd + qd - 2 * j;
        let top = (pd + qd - j - 1) as isize;
        let mut rows = Vec::with_capacity(size);
        for s in (0..qd - j).rev() {
            rows.push((0..size).map(|c| coeff(&pc, top - c as isize - s as isize)).collect());
        }
        for s in 0..pd - j {
            rows.push((0..size).map(|c| coeff(&qc, top - c as isize - s as isize)).collect());
        }
        out.push(det(rows, nv));
    }
    out
}

/// Cached [`sturm_habicht`]; projection factors recur over many cells.
pub fn sturm_habicht_cached(p: &Polynomial, v: Var) -> Arc<Vec<Polynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<(Polynomial, Var), Arc<Vec<Polynomial>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&(p.clone(), v)) {
        return hit.clone();
    }
    let value = Arc::new(sturm_habicht(p, v));
    cache.lock().unwrap().insert((p.clone(), v), value.clone());
    value
}

/// Permanences minus variations of a sign sequence whose first entry is
/// non-zero; equals the number of distinct real roots for Sturm–Habicht
/// signs.
pub fn pmv(signs: &[i32]) -> i64 {
    let mut total = 0i64;
    let mut last: Option<(usize, i32)> = None;
    for (i, &s) in signs.iter().enumerate() {
        if s == 0 {
            continue;
        }
        if let Some((j, t)) = last {
            let k = i - j;
            if k % 2 == 1 {
                let flip = if (k * (k - 1) / 2) % 2 == 1 { -1 } else { 1 };
                total += (flip * s * t) as i64;
            }
        }
        last = Some((i, s));
    }
    total
}
