//! Truncated Baker-Campbell-Hausdorff product of gauge parameters.
//!
//! `log(e^X e^Y)` is expanded in the free associative algebra on `X, Y`
//! up to the word length at which brackets of elements of `m_A` vanish,
//! then converted to right-nested brackets by the Dynkin-Specht-Wever
//! projection.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::artin::ArtinAlgebra;
use crate::dgla::{bracket_eval, Dgla, DglaCochain};
use crate::error::{Error, Result};
use crate::rational::{frac, inverse_factorial, Rational};

/// Largest nil index for which the BCH expansion is attempted; the number
/// of words grows like `2^(nil_index - 1)`.
pub const MAX_BCH_NIL_INDEX: u32 = 14;

type Word = Vec<u8>;
type Series = BTreeMap<Word, Rational>;

fn mul(a: &Series, b: &Series, max_len: usize) -> Series {
    let mut out = Series::new();
    for (u, x) in a {
        for (v, y) in b {
            if u.len() + v.len() > max_len {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            *out.entry(w).or_insert_with(Rational::zero) += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `exp(letter) - 1` truncated at `max_len`.
fn exp_minus_one(letter: u8, max_len: usize) -> Series {
    (1..=max_len)
        .map(|n| (vec![letter; n], inverse_factorial(n as u32)))
        .collect()
}

/// Coefficients of `log(e^X e^Y)` on words of length `1..=max_len`.
fn bch_words(max_len: usize) -> Series {
    let ex = exp_minus_one(0, max_len);
    let ey = exp_minus_one(1, max_len);
    // e^X e^Y - 1 = (ex) + (ey) + (ex)(ey)
    let mut z = ex.clone();
    for (w, c) in ey.iter().chain(mul(&ex, &ey, max_len).iter()) {
        *z.entry(w.clone()).or_insert_with(Rational::zero) += c;
    }
    z.retain(|_, c| !c.is_zero());

    let mut log = Series::new();
    let mut power = z.clone();
    for k in 1..=max_len {
        let coeff = frac(if k % 2 == 1 { 1 } else { -1 }, k as i64);
        for (w, c) in &power {
            *log.entry(w.clone()).or_insert_with(Rational::zero) += &coeff * c;
        }
        power = mul(&power, &z, max_len);
        if power.is_empty() {
            break;
        }
    }
    log.retain(|_, c| !c.is_zero());
    log
}

/// `c` with `e^c * x = e^a * (e^b * x)` for all `x`.
pub fn gauge_compose(l: &Dgla, alg: &ArtinAlgebra, a: &DglaCochain, b: &DglaCochain) -> Result<DglaCochain> {
    for u in [a, b] {
        u.check(l, alg)?;
        if u.degree() != 0 {
            return Err(Error::invalid("gauge parameters have degree 0"));
        }
    }
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    let nil = alg.nil_index();
    if nil > MAX_BCH_NIL_INDEX {
        return Err(Error::invalid(format!(
            "nil index {nil} exceeds the supported bound {MAX_BCH_NIL_INDEX} for composition"
        )));
    }
    let max_len = nil.saturating_sub(1) as usize;
    let words = bch_words(max_len);

    // right-nested brackets share suffixes
    let mut cache: HashMap<Word, DglaCochain> = HashMap::new();
    let mut result = DglaCochain::zero(l, alg, 0);
    for (w, c) in &words {
        let value = nested(l, alg, a, b, w, &mut cache)?;
        if value.is_zero() {
            continue;
        }
        let scale = c * frac(1, w.len() as i64);
        result = result.add(&value.scale(&scale))?;
    }
    Ok(result)
}

fn nested(
    l: &Dgla,
    alg: &ArtinAlgebra,
    a: &DglaCochain,
    b: &DglaCochain,
    w: &[u8],
    cache: &mut HashMap<Word, DglaCochain>,
) -> Result<DglaCochain> {
    if let Some(v) = cache.get(w) {
        return Ok(v.clone());
    }
    let letter = |x: u8| if x == 0 { a } else { b };
    let value = if w.len() == 1 {
        letter(w[0]).clone()
    } else {
        let tail = nested(l, alg, a, b, &w[1..], cache)?;
        if tail.is_zero() {
            tail
        } else {
            bracket_eval(l, alg, letter(w[0]), &tail)?
        }
    };
    cache.insert(w.to_vec(), value.clone());
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn low_order_coefficients() {
        let w = bch_words(3);
        assert_eq!(w[&vec![0]], int(1));
        assert_eq!(w[&vec![1]], int(1));
        assert_eq!(w[&vec![0, 1]], frac(1, 2));
        assert_eq!(w[&vec![1, 0]], frac(-1, 2));
        assert!(!w.contains_key(&vec![0, 0]));
        // 1/12 [X,[X,Y]] expands to X X Y with coefficient 1/12
        assert_eq!(w[&vec![0, 0, 1]], frac(1, 12));
    }
}
