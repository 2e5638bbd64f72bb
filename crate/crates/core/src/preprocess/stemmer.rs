//! Porter suffix-stripping stemmer.
//!
//! Classic five-step formulation over ASCII lowercase words. Tokens shorter
//! than three characters or containing anything but ASCII letters are
//! returned unchanged.

/// Stem one lowercase token.
pub fn stem(token: &str) -> String {
    if token.len() <= 2 || !token.bytes().all(|b| b.is_ascii_lowercase()) {
        return token.to_owned();
    }
    let mut word = token.as_bytes().to_vec();
    step_1a(&mut word);
    step_1b(&mut word);
    step_1c(&mut word);
    step_2(&mut word);
    step_3(&mut word);
    step_4(&mut word);
    step_5a(&mut word);
    step_5b(&mut word);
    String::from_utf8(word).expect("ascii")
}

fn is_consonant(word: &[u8], i: usize) -> bool {
    match word[i] {
        b'a' | b'e' | b'i' | b'o' | b'u' => false,
        b'y' => i == 0 || !is_consonant(word, i - 1),
        _ => true,
    }
}

/// The measure m: the number of vowel-to-consonant transitions in the word.
fn measure(word: &[u8]) -> usize {
    let mut m = 0;
    let mut prev_vowel = false;
    for i in 0..word.len() {
        let consonant = is_consonant(word, i);
        if prev_vowel && consonant {
            m += 1;
        }
        prev_vowel = !consonant;
    }
    m
}

fn contains_vowel(word: &[u8]) -> bool {
    (0..word.len()).any(|i| !is_consonant(word, i))
}

fn ends_double_consonant(word: &[u8]) -> bool {
    let n = word.len();
    n >= 2 && word[n - 1] == word[n - 2] && is_consonant(word, n - 1)
}

/// *o: the word ends consonant-vowel-consonant where the final consonant is
/// not w, x, or y.
fn ends_cvc(word: &[u8]) -> bool {
    let n = word.len();
    n >= 3
        && is_consonant(word, n - 3)
        && !is_consonant(word, n - 2)
        && is_consonant(word, n - 1)
        && !matches!(word[n - 1], b'w' | b'x' | b'y')
}

fn ends_with(word: &[u8], suffix: &[u8]) -> bool {
    word.len() >= suffix.len() && &word[word.len() - suffix.len()..] == suffix
}

fn replace_suffix(word: &mut Vec<u8>, suffix: &[u8], replacement: &[u8]) {
    let keep = word.len() - suffix.len();
    word.truncate(keep);
    word.extend_from_slice(replacement);
}

fn step_1a(word: &mut Vec<u8>) {
    if ends_with(word, b"sses") {
        replace_suffix(word, b"sses", b"ss");
    } else if ends_with(word, b"ies") {
        replace_suffix(word, b"ies", b"i");
    } else if ends_with(word, b"ss") {
        // unchanged
    } else if ends_with(word, b"s") {
        word.pop();
    }
}

fn step_1b(word: &mut Vec<u8>) {
    if ends_with(word, b"eed") {
        if measure(&word[..word.len() - 3]) > 0 {
            word.pop();
        }
        return;
    }
    let stripped = if ends_with(word, b"ed") && contains_vowel(&word[..word.len() - 2]) {
        word.truncate(word.len() - 2);
        true
    } else if ends_with(word, b"ing") && contains_vowel(&word[..word.len() - 3]) {
        word.truncate(word.len() - 3);
        true
    } else {
        false
    };
    if !stripped {
        return;
    }
    if ends_with(word, b"at") || ends_with(word, b"bl") || ends_with(word, b"iz") {
        word.push(b'e');
    } else if ends_double_consonant(word) && !matches!(word[word.len() - 1], b'l' | b's' | b'z') {
        word.pop();
    } else if measure(word) == 1 && ends_cvc(word) {
        word.push(b'e');
    }
}

fn step_1c(word: &mut [u8]) {
    let n = word.len();
    if n >= 2 && word[n - 1] == b'y' && contains_vowel(&word[..n - 1]) {
        word[n - 1] = b'i';
    }
}

/// (suffix, replacement) pairs applied when the remaining stem has m > 0.
/// Ordered so the longest matching suffix is found first.
const STEP_2_RULES: &[(&[u8], &[u8])] = &[
    (b"ational", b"ate"),
    (b"ization", b"ize"),
    (b"iveness", b"ive"),
    (b"fulness", b"ful"),
    (b"ousness", b"ous"),
    (b"tional", b"tion"),
    (b"biliti", b"ble"),
    (b"entli", b"ent"),
    (b"ousli", b"ous"),
    (b"alism", b"al"),
    (b"aliti", b"al"),
    (b"iviti", b"ive"),
    (b"ation", b"ate"),
    (b"enci", b"ence"),
    (b"anci", b"ance"),
    (b"izer", b"ize"),
    (b"abli", b"able"),
    (b"alli", b"al"),
    (b"ator", b"ate"),
    (b"eli", b"e"),
];

const STEP_3_RULES: &[(&[u8], &[u8])] = &[
    (b"icate", b"ic"),
    (b"ative", b""),
    (b"alize", b"al"),
    (b"iciti", b"ic"),
    (b"ical", b"ic"),
    (b"ness", b""),
    (b"ful", b""),
];

fn apply_rule_table(word: &mut Vec<u8>, rules: &[(&[u8], &[u8])]) {
    let mut best: Option<(&[u8], &[u8])> = None;
    for &(suffix, replacement) in rules {
        if ends_with(word, suffix) && best.is_none_or(|(s, _)| suffix.len() > s.len()) {
            best = Some((suffix, replacement));
        }
    }
    if let Some((suffix, replacement)) = best {
        if measure(&word[..word.len() - suffix.len()]) > 0 {
            replace_suffix(word, suffix, replacement);
        }
    }
}

fn step_2(word: &mut Vec<u8>) {
    apply_rule_table(word, STEP_2_RULES);
}

fn step_3(word: &mut Vec<u8>) {
    apply_rule_table(word, STEP_3_RULES);
}

const STEP_4_SUFFIXES: &[&[u8]] = &[
    b"ement", b"ance", b"ence", b"able", b"ible", b"ment", b"ant", b"ent", b"ion", b"ism", b"ate",
    b"iti", b"ous", b"ive", b"ize", b"al", b"er", b"ic", b"ou",
];

fn step_4(word: &mut Vec<u8>) {
    let mut best: Option<&[u8]> = None;
    for &suffix in STEP_4_SUFFIXES {
        if ends_with(word, suffix) && best.is_none_or(|s| suffix.len() > s.len()) {
            best = Some(suffix);
        }
    }
    if let Some(suffix) = best {
        let stem = &word[..word.len() - suffix.len()];
        if measure(stem) <= 1 {
            return;
        }
        if suffix == b"ion" && !matches!(stem.last(), Some(b's') | Some(b't')) {
            return;
        }
        word.truncate(word.len() - suffix.len());
    }
}

fn step_5a(word: &mut Vec<u8>) {
    if word.last() != Some(&b'e') {
        return;
    }
    let stem = &word[..word.len() - 1];
    let m = measure(stem);
    if m > 1 || (m == 1 && !ends_cvc(stem)) {
        word.pop();
    }
}

fn step_5b(word: &mut Vec<u8>) {
    if measure(word) > 1 && ends_double_consonant(word) && word.last() == Some(&b'l') {
        word.pop();
    }
}
