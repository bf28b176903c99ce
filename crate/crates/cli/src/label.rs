//! Basis labels as `+`/`-` strings and as bitmasks (bit `n` set means
//! qubit `n` is `-1`).

pub fn parse(s: &str) -> Result<Vec<i8>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty label".into());
    }
    s.chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            other => Err(format!("label characters are + or -, got {other:?}")),
        })
        .collect()
}

pub fn format(spins: &[i8]) -> String {
    spins.iter().map(|s| if *s > 0 { '+' } else { '-' }).collect()
}

pub fn from_mask(mask: u64, n: usize) -> Vec<i8> {
    (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()
}

pub fn to_mask(spins: &[i8]) -> u64 {
    spins.iter().enumerate().filter(|(_, s)| **s < 0).fold(0, |m, (i, _)| m | 1 << i)
}
