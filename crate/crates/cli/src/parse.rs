use std::ops::RangeInclusive;

use anyhow::{bail, Context, Result};

/// Parses multiplicity tokens. Each token is a comma list of entries, and
/// each entry is either an integer or `MxK` for `K` copies of `M`:
/// `4x10`, `1,2,3`, `-1x12`, `3x2,1`.
pub fn parse_mults<S: AsRef<str>>(tokens: &[S]) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for token in tokens {
        let token = token.as_ref().replace('\u{2212}', "-");
        for piece in token.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            match piece.split_once(['x', 'X']) {
                Some((m, k)) => {
                    let m: i64 = m
                        .parse()
                        .with_context(|| format!("bad multiplicity in `{piece}`"))?;
                    let k: usize = k
                        .parse()
                        .with_context(|| format!("bad count in `{piece}`"))?;
                    out.extend(std::iter::repeat_n(m, k));
                }
                None => out.push(
                    piece
                        .parse()
                        .with_context(|| format!("bad multiplicity `{piece}`"))?,
                ),
            }
        }
    }
    Ok(out)
}

/// Inclusive integer range: `7`, `3..9` or `3..=9`. `b < a` is empty.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>> {
    let s = s.trim();
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (s, s),
    };
    let lo: i64 = lo
        .trim()
        .parse()
        .with_context(|| format!("bad range `{s}`"))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .with_context(|| format!("bad range `{s}`"))?;
    if lo < i64::MIN / 2 || hi > i64::MAX / 2 {
        bail!("range `{s}` out of bounds");
    }
    Ok(lo..=hi)
}
