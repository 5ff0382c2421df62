//! Suffix array construction by induced sorting (SA-IS) over an integer
//! alphabet `0..=upper`.

const NAIVE_THRESHOLD: usize = 10;

fn naive(s: &[u32]) -> Vec<i32> {
    let mut sa: Vec<i32> = (0..s.len() as i32).collect();
    sa.sort_by(|&a, &b| s[a as usize..].cmp(&s[b as usize..]));
    sa
}

pub(crate) fn sa_is(s: &[u32], upper: u32) -> Vec<i32> {
    let n = s.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![0],
        2 => return if s[0] < s[1] { vec![0, 1] } else { vec![1, 0] },
        _ if n < NAIVE_THRESHOLD => return naive(s),
        _ => {}
    }
    let upper = upper as usize;
    let mut sa = vec![-1i32; n];
    // ls[i]: suffix i is S-type (smaller than suffix i+1).
    let mut ls = vec![false; n];
    for i in (0..n - 1).rev() {
        ls[i] = if s[i] == s[i + 1] { ls[i + 1] } else { s[i] < s[i + 1] };
    }
    let mut sum_l = vec![0i32; upper + 1];
    let mut sum_s = vec![0i32; upper + 1];
    for i in 0..n {
        if !ls[i] {
            sum_s[s[i] as usize] += 1;
        } else {
            sum_l[s[i] as usize + 1] += 1;
        }
    }
    for i in 0..=upper {
        sum_s[i] += sum_l[i];
        if i < upper {
            sum_l[i + 1] += sum_s[i];
        }
    }

    let induce = |sa: &mut Vec<i32>, lms: &[i32]| {
        sa.iter_mut().for_each(|v| *v = -1);
        let mut buf = sum_s.clone();
        for &d in lms {
            if d as usize == n {
                continue;
            }
            let c = s[d as usize] as usize;
            sa[buf[c] as usize] = d;
            buf[c] += 1;
        }
        buf.copy_from_slice(&sum_l);
        let c = s[n - 1] as usize;
        sa[buf[c] as usize] = n as i32 - 1;
        buf[c] += 1;
        for i in 0..n {
            let v = sa[i];
            if v >= 1 && !ls[v as usize - 1] {
                let c = s[v as usize - 1] as usize;
                sa[buf[c] as usize] = v - 1;
                buf[c] += 1;
            }
        }
        buf.copy_from_slice(&sum_l);
        for i in (0..n).rev() {
            let v = sa[i];
            if v >= 1 && ls[v as usize - 1] {
                let c = s[v as usize - 1] as usize + 1;
                buf[c] -= 1;
                sa[buf[c] as usize] = v - 1;
            }
        }
    };

    let mut lms_map = vec![-1i32; n + 1];
    let mut lms = Vec::new();
    for i in 1..n {
        if !ls[i - 1] && ls[i] {
            lms_map[i] = lms.len() as i32;
            lms.push(i as i32);
        }
    }
    let m = lms.len();
    induce(&mut sa, &lms);

    if m > 0 {
        let mut sorted_lms: Vec<i32> = sa
            .iter()
            .copied()
            .filter(|&v| lms_map[v as usize] != -1)
            .collect();
        let mut rec_s = vec![0u32; m];
        let mut rec_upper = 0u32;
        rec_s[lms_map[sorted_lms[0] as usize] as usize] = 0;
        for i in 1..m {
            let mut l = sorted_lms[i - 1] as usize;
            let mut r = sorted_lms[i] as usize;
            let next = |x: usize| {
                let j = lms_map[x] as usize + 1;
                if j < m {
                    lms[j] as usize
                } else {
                    n
                }
            };
            let end_l = next(l);
            let end_r = next(r);
            let mut same = true;
            if end_l - l != end_r - r {
                same = false;
            } else {
                while l < end_l {
                    if s[l] != s[r] {
                        break;
                    }
                    l += 1;
                    r += 1;
                }
                if l == n || s[l] != s[r] {
                    same = false;
                }
            }
            if !same {
                rec_upper += 1;
            }
            rec_s[lms_map[sorted_lms[i] as usize] as usize] = rec_upper;
        }
        let rec_sa = sa_is(&rec_s, rec_upper);
        for i in 0..m {
            sorted_lms[i] = lms[rec_sa[i] as usize];
        }
        induce(&mut sa, &sorted_lms);
    }
    sa
}

/// Suffix array of an arbitrary symbol sequence.
pub(crate) fn suffix_array(text: &[u32]) -> Vec<u32> {
    // Compact the alphabet to dense ranks so bucket arrays stay small.
    let mut alphabet: Vec<u32> = text.to_vec();
    alphabet.sort_unstable();
    alphabet.dedup();
    let compact: Vec<u32> = if alphabet.last().is_some_and(|&m| (m as usize) < 2 * alphabet.len() + 256) {
        text.to_vec()
    } else {
        text.iter()
            .map(|c| alphabet.binary_search(c).unwrap() as u32)
            .collect()
    };
    let upper = compact.iter().copied().max().unwrap_or(0);
    sa_is(&compact, upper).into_iter().map(|v| v as u32).collect()
}

/// Kasai et al. LCP: `lcp[j]` is the LCP of suffixes `sa[j-1]` and `sa[j]`, `lcp[0] = 0`.
pub(crate) fn lcp_array(text: &[u32], sa: &[u32], isa: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = isa[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && text[i + h] == text[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}
