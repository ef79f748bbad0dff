//! Text normalization and approximate string matching shared across modules.
//!
//! All corpus text goes through [`normalize`] on load: NFC first, then
//! whitespace collapsing. Token counting is always done on normalized text.

use unicode_normalization::UnicodeNormalization;

/// NFC-normalize a string.
pub fn nfc(s: &str) -> String {
    s.nfc().collect()
}

/// Collapse runs of spaces and tabs to a single space and strip both ends.
pub fn normalize_ws(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut in_ws = false;
    for ch in s.chars() {
        if ch == ' ' || ch == '\t' {
            in_ws = true;
        } else {
            if in_ws && !out.is_empty() {
                out.push(' ');
            }
            in_ws = false;
            out.push(ch);
        }
    }
    out
}

/// Full load-time normalization: NFC, then whitespace collapsing.
pub fn normalize(s: &str) -> String {
    normalize_ws(&nfc(s))
}

/// Whitespace tokens of a normalized string.
pub fn ws_tokens(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

/// Number of whitespace tokens after normalization.
pub fn token_count(s: &str) -> usize {
    normalize(s).split_whitespace().count()
}

/// Remove every whitespace character. Used for partition checks where
/// chunkers may attach or detach punctuation differently.
pub fn strip_all_ws(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Approximate substring search (edit distance over chars).
///
/// Finds the first occurrence of `needle` in `haystack[from..]` with at most
/// `max_dist` edits, scanning left to right. Returns the matched span as
/// `(start, end)` char indices, choosing the smallest end position and, for
/// that end, the largest start (the tightest span). Empty needles match
/// immediately at `(from, from)`.
pub fn fuzzy_find(
    haystack: &[char],
    needle: &[char],
    from: usize,
    max_dist: usize,
) -> Option<(usize, usize)> {
    let m = needle.len();
    if m == 0 {
        return Some((from, from));
    }
    if from > haystack.len() {
        return None;
    }
    // dist[i] = best edit distance aligning needle[..i] against a suffix of
    // the consumed haystack; start[i] = where that alignment begins.
    let mut dist: Vec<usize> = (0..=m).collect();
    let mut start: Vec<usize> = vec![from; m + 1];
    if dist[m] <= max_dist {
        return Some((start[m], from));
    }
    for (offset, &c) in haystack[from..].iter().enumerate() {
        let j = from + offset;
        let mut new_dist = vec![0usize; m + 1];
        let mut new_start = vec![0usize; m + 1];
        new_dist[0] = 0;
        new_start[0] = j + 1;
        for i in 1..=m {
            let sub_cost = if needle[i - 1] == c { 0 } else { 1 };
            // Candidates: (cost, start), preferring low cost then late start.
            let mut best = (dist[i - 1] + sub_cost, start[i - 1]);
            let del_hay = (dist[i] + 1, start[i]);
            if del_hay.0 < best.0 || (del_hay.0 == best.0 && del_hay.1 > best.1) {
                best = del_hay;
            }
            let del_needle = (new_dist[i - 1] + 1, new_start[i - 1]);
            if del_needle.0 < best.0 || (del_needle.0 == best.0 && del_needle.1 > best.1) {
                best = del_needle;
            }
            new_dist[i] = best.0;
            new_start[i] = best.1;
        }
        dist = new_dist;
        start = new_start;
        if dist[m] <= max_dist {
            return Some((start[m], j + 1));
        }
    }
    None
}

/// Edit-distance budget used for fuzzy containment: 10% of the needle
/// length, rounded down.
pub fn fuzzy_budget(needle_chars: usize) -> usize {
    needle_chars / 10
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_collapses_spaces_and_tabs() {
        assert_eq!(normalize_ws("  a \t b  "), "a b");
        assert_eq!(normalize_ws(""), "");
        assert_eq!(normalize_ws(" \t "), "");
    }

    #[test]
    fn nfc_composes() {
        // e + combining acute -> é
        assert_eq!(nfc("e\u{0301}"), "\u{00e9}");
    }

    #[test]
    fn token_counting() {
        assert_eq!(token_count("a b"), 2);
        assert_eq!(token_count("  a   b\tc "), 3);
        assert_eq!(token_count(""), 0);
    }

    #[test]
    fn fuzzy_exact_match() {
        let hay: Vec<char> = "abcdef".chars().collect();
        let needle: Vec<char> = "cde".chars().collect();
        assert_eq!(fuzzy_find(&hay, &needle, 0, 0), Some((2, 5)));
    }

    #[test]
    fn fuzzy_respects_from() {
        let hay: Vec<char> = "abcabc".chars().collect();
        let needle: Vec<char> = "abc".chars().collect();
        assert_eq!(fuzzy_find(&hay, &needle, 1, 0), Some((3, 6)));
    }

    #[test]
    fn fuzzy_allows_edits() {
        let hay: Vec<char> = "xxhella worldxx".chars().collect();
        let needle: Vec<char> = "hello world".chars().collect();
        assert_eq!(fuzzy_find(&hay, &needle, 0, 0), None);
        let found = fuzzy_find(&hay, &needle, 0, 1).expect("one edit suffices");
        assert_eq!(found, (2, 13));
    }

    #[test]
    fn fuzzy_no_match_past_end() {
        let hay: Vec<char> = "ab".chars().collect();
        let needle: Vec<char> = "zzz".chars().collect();
        assert_eq!(fuzzy_find(&hay, &needle, 0, 0), None);
        assert_eq!(fuzzy_find(&hay, &needle, 5, 0), None);
    }
}
