//! Character-level edit distance.

/// Classic dynamic-programming Levenshtein distance over chars.
pub fn levenshtein(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = diag + usize::from(ca != cb);
            diag = row[j + 1];
            row[j + 1] = sub.min(row[j] + 1).min(diag + 1);
        }
    }
    row[b.len()]
}

/// Per-character position masks of a pattern: a direct table for ASCII,
/// a short list for everything else.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Masks {
    ascii: Box<[u64; 128]>,
    other: Vec<(char, u64)>,
}

impl Masks {
    fn new(chars: &[char]) -> Self {
        let mut ascii = Box::new([0u64; 128]);
        let mut other: Vec<(char, u64)> = Vec::new();
        for (i, &c) in chars.iter().enumerate() {
            if c.is_ascii() {
                ascii[c as usize] |= 1 << i;
            } else {
                match other.iter_mut().find(|(k, _)| *k == c) {
                    Some((_, m)) => *m |= 1 << i,
                    None => other.push((c, 1 << i)),
                }
            }
        }
        Masks { ascii, other }
    }

    #[inline]
    fn get(&self, c: char) -> u64 {
        if c.is_ascii() {
            self.ascii[c as usize]
        } else {
            self.other.iter().find(|(k, _)| *k == c).map_or(0, |(_, m)| *m)
        }
    }
}

/// A string prepared for repeated distance queries. Patterns of at most 64
/// chars carry per-character position masks for the bit-parallel algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreparedText {
    chars: Vec<char>,
    masks: Option<Masks>,
}

impl PreparedText {
    pub fn new(text: &str) -> Self {
        let chars: Vec<char> = text.chars().collect();
        let masks = (!chars.is_empty() && chars.len() <= 64).then(|| Masks::new(&chars));
        Self { chars, masks }
    }

    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    /// Levenshtein distance to `other`.
    pub fn distance(&self, other: &PreparedText) -> usize {
        if self.chars.is_empty() || other.chars.is_empty() {
            return self.len().max(other.len());
        }
        match &self.masks {
            Some(masks) => bit_parallel(masks, self.chars.len(), &other.chars),
            None => match &other.masks {
                Some(masks) => bit_parallel(masks, other.chars.len(), &self.chars),
                None => levenshtein(&self.chars, &other.chars),
            },
        }
    }

    /// Distance divided by the longer length; 0 when both are empty.
    pub fn normalized_distance(&self, other: &PreparedText) -> f64 {
        let longest = self.len().max(other.len());
        if longest == 0 {
            return 0.0;
        }
        self.distance(other) as f64 / longest as f64
    }
}

/// Hyyrö's bit-vector Levenshtein for a pattern of `m <= 64` chars.
fn bit_parallel(masks: &Masks, m: usize, text: &[char]) -> usize {
    let last = 1u64 << (m - 1);
    let mut pv = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut mv = 0u64;
    let mut score = m;
    for c in text {
        let eq = masks.get(*c);
        let xv = eq | mv;
        let xh = ((eq & pv).wrapping_add(pv) ^ pv) | eq;
        let mut ph = mv | !(xh | pv);
        let mut mh = pv & xh;
        score += usize::from(ph & last != 0);
        score -= usize::from(mh & last != 0);
        ph = (ph << 1) | 1;
        mh <<= 1;
        pv = mh | !(xv | ph);
        mv = ph & xv;
    }
    score
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn known_distances() {
        assert_eq!(levenshtein(&chars("kitten"), &chars("sitting")), 3);
        assert_eq!(levenshtein(&chars(""), &chars("abc")), 3);
        let a = PreparedText::new("kitten");
        let b = PreparedText::new("sitting");
        assert_eq!(a.distance(&b), 3);
        assert!((a.normalized_distance(&b) - 3.0 / 7.0).abs() < 1e-12);
        assert_eq!(PreparedText::new("").normalized_distance(&PreparedText::new("")), 0.0);
        assert_eq!(PreparedText::new("abc").normalized_distance(&PreparedText::new("xyz")), 1.0);
    }

    #[test]
    fn long_strings_fall_back() {
        let a: String = "ab".repeat(40);
        let b: String = "ba".repeat(41);
        let pa = PreparedText::new(&a);
        let pb = PreparedText::new(&b);
        assert_eq!(pa.distance(&pb), levenshtein(&chars(&a), &chars(&b)));
    }

    proptest! {
        #[test]
        fn bit_parallel_matches_dp(a in "[abcé ]{0,70}", b in "[abcé ]{0,70}") {
            let pa = PreparedText::new(&a);
            let pb = PreparedText::new(&b);
            let expected = levenshtein(&chars(&a), &chars(&b));
            prop_assert_eq!(pa.distance(&pb), expected);
            prop_assert_eq!(pb.distance(&pa), expected);
        }
    }
}
