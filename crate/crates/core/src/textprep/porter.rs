//! Porter stemming algorithm (1980), matching the behavior of the widely
//! mirrored reference implementation: words of length 1 or 2 are left
//! untouched, step 2 maps "bli" -> "ble" rather than "abli" -> "able",
//! and step 2 carries the extra "logi" -> "log" rule.

/// Stems a single lowercase word. Non-alphabetic bytes are treated as
/// consonants; callers normally pass `[a-z]+` only.
pub fn porter_stem(word: &str) -> String {
    if word.len() <= 2 {
        return word.to_string();
    }
    let mut s = Stemmer {
        buf: word.as_bytes().to_vec(),
        stem_len: 0,
    };
    s.step1ab();
    s.step1c();
    s.step2();
    s.step3();
    s.step4();
    s.step5();
    String::from_utf8(s.buf).expect("stemmer operates on ascii")
}

/// Working buffer plus the candidate stem length set by the last suffix
/// match (the reference implementation's `j + 1`).
struct Stemmer {
    buf: Vec<u8>,
    stem_len: usize,
}

impl Stemmer {
    fn len(&self) -> usize {
        self.buf.len()
    }

    fn last(&self) -> u8 {
        self.buf[self.buf.len() - 1]
    }

    /// True when position `i` holds a consonant. `y` counts as a consonant
    /// at the start of the word or after a vowel.
    fn is_cons(&self, i: usize) -> bool {
        match self.buf[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.is_cons(i - 1),
            _ => true,
        }
    }

    /// The measure m of buf[..end]: the number of vowel-to-consonant
    /// transitions, which equals the count of VC pairs in C?(VC)^m V?.
    fn measure(&self, end: usize) -> usize {
        let mut m = 0;
        let mut prev_vowel = false;
        for i in 0..end {
            let vowel = !self.is_cons(i);
            if !vowel && prev_vowel {
                m += 1;
            }
            prev_vowel = vowel;
        }
        m
    }

    fn stem_measure(&self) -> usize {
        self.measure(self.stem_len)
    }

    fn stem_has_vowel(&self) -> bool {
        (0..self.stem_len).any(|i| !self.is_cons(i))
    }

    /// Last two bytes of buf[..end] are the same consonant.
    fn ends_double_cons(&self, end: usize) -> bool {
        end >= 2 && self.buf[end - 1] == self.buf[end - 2] && self.is_cons(end - 1)
    }

    /// buf[..end] ends consonant-vowel-consonant where the final consonant
    /// is not w, x, or y (the *o condition).
    fn ends_cvc(&self, end: usize) -> bool {
        if end < 3 || !self.is_cons(end - 1) || self.is_cons(end - 2) || !self.is_cons(end - 3) {
            return false;
        }
        !matches!(self.buf[end - 1], b'w' | b'x' | b'y')
    }

    /// If the buffer ends with `suffix`, records the stem length and
    /// returns true.
    fn ends(&mut self, suffix: &str) -> bool {
        let s = suffix.as_bytes();
        if s.len() > self.len() || !self.buf.ends_with(s) {
            return false;
        }
        self.stem_len = self.len() - s.len();
        true
    }

    /// Replaces everything past the recorded stem with `repl`.
    fn set_suffix(&mut self, repl: &str) {
        self.buf.truncate(self.stem_len);
        self.buf.extend_from_slice(repl.as_bytes());
    }

    fn replace_if_measure(&mut self, repl: &str) {
        if self.stem_measure() > 0 {
            self.set_suffix(repl);
        }
    }

    fn truncate_to_stem(&mut self) {
        self.buf.truncate(self.stem_len);
    }

    fn step1ab(&mut self) {
        if self.last() == b's' {
            if self.ends("sses") {
                self.buf.truncate(self.len() - 2);
            } else if self.ends("ies") {
                self.set_suffix("i");
            } else if self.buf[self.len() - 2] != b's' {
                self.buf.truncate(self.len() - 1);
            }
        }
        if self.ends("eed") {
            if self.stem_measure() > 0 {
                self.buf.truncate(self.len() - 1);
            }
        } else if (self.ends("ed") || self.ends("ing")) && self.stem_has_vowel() {
            self.truncate_to_stem();
            if self.ends("at") {
                self.set_suffix("ate");
            } else if self.ends("bl") {
                self.set_suffix("ble");
            } else if self.ends("iz") {
                self.set_suffix("ize");
            } else if self.ends_double_cons(self.len()) {
                if !matches!(self.last(), b'l' | b's' | b'z') {
                    self.buf.truncate(self.len() - 1);
                }
            } else if self.measure(self.len()) == 1 && self.ends_cvc(self.len()) {
                self.buf.push(b'e');
            }
        }
    }

    fn step1c(&mut self) {
        if self.ends("y") && self.stem_has_vowel() {
            let end = self.len() - 1;
            self.buf[end] = b'i';
        }
    }

    fn step2(&mut self) {
        if self.len() < 2 {
            return;
        }
        let rules: &[(&str, &str)] = match self.buf[self.len() - 2] {
            b'a' => &[("ational", "ate"), ("tional", "tion")],
            b'c' => &[("enci", "ence"), ("anci", "ance")],
            b'e' => &[("izer", "ize")],
            b'l' => &[
                ("bli", "ble"),
                ("alli", "al"),
                ("entli", "ent"),
                ("eli", "e"),
                ("ousli", "ous"),
            ],
            b'o' => &[("ization", "ize"), ("ation", "ate"), ("ator", "ate")],
            b's' => &[
                ("alism", "al"),
                ("iveness", "ive"),
                ("fulness", "ful"),
                ("ousness", "ous"),
            ],
            b't' => &[("aliti", "al"), ("iviti", "ive"), ("biliti", "ble")],
            b'g' => &[("logi", "log")],
            _ => return,
        };
        for (suffix, repl) in rules {
            if self.ends(suffix) {
                self.replace_if_measure(repl);
                return;
            }
        }
    }

    fn step3(&mut self) {
        let rules: &[(&str, &str)] = match self.last() {
            b'e' => &[("icate", "ic"), ("ative", ""), ("alize", "al")],
            b'i' => &[("iciti", "ic")],
            b'l' => &[("ical", "ic"), ("ful", "")],
            b's' => &[("ness", "")],
            _ => return,
        };
        for (suffix, repl) in rules {
            if self.ends(suffix) {
                self.replace_if_measure(repl);
                return;
            }
        }
    }

    fn step4(&mut self) {
        if self.len() < 2 {
            return;
        }
        let matched = match self.buf[self.len() - 2] {
            b'a' => self.ends("al"),
            b'c' => self.ends("ance") || self.ends("ence"),
            b'e' => self.ends("er"),
            b'i' => self.ends("ic"),
            b'l' => self.ends("able") || self.ends("ible"),
            b'n' => {
                self.ends("ant") || self.ends("ement") || self.ends("ment") || self.ends("ent")
            }
            b'o' => {
                (self.ends("ion")
                    && self.stem_len >= 1
                    && matches!(self.buf[self.stem_len - 1], b's' | b't'))
                    || self.ends("ou")
            }
            b's' => self.ends("ism"),
            b't' => self.ends("ate") || self.ends("iti"),
            b'u' => self.ends("ous"),
            b'v' => self.ends("ive"),
            b'z' => self.ends("ize"),
            _ => false,
        };
        if matched && self.stem_measure() > 1 {
            self.truncate_to_stem();
        }
    }

    fn step5(&mut self) {
        // 5a: drop a final e when m > 1, or when m == 1 and the stem does
        // not end cvc.
        if self.last() == b'e' {
            let m = self.measure(self.len());
            if m > 1 || (m == 1 && !self.ends_cvc(self.len() - 1)) {
                self.buf.truncate(self.len() - 1);
            }
        }
        // 5b: collapse a final double l when m > 1.
        if self.last() == b'l' && self.ends_double_cons(self.len()) && self.measure(self.len()) > 1
        {
            self.buf.truncate(self.len() - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::porter_stem;

    #[test]
    fn plural_forms() {
        assert_eq!(porter_stem("caresses"), "caress");
        assert_eq!(porter_stem("ponies"), "poni");
        assert_eq!(porter_stem("ties"), "ti");
        assert_eq!(porter_stem("caress"), "caress");
        assert_eq!(porter_stem("cats"), "cat");
    }

    #[test]
    fn ed_and_ing() {
        assert_eq!(porter_stem("feed"), "feed");
        assert_eq!(porter_stem("agreed"), "agre");
        assert_eq!(porter_stem("plastered"), "plaster");
        assert_eq!(porter_stem("bled"), "bled");
        assert_eq!(porter_stem("motoring"), "motor");
        assert_eq!(porter_stem("sing"), "sing");
        assert_eq!(porter_stem("running"), "run");
        assert_eq!(porter_stem("hopping"), "hop");
        assert_eq!(porter_stem("falling"), "fall");
        assert_eq!(porter_stem("hissing"), "hiss");
        assert_eq!(porter_stem("fizzed"), "fizz");
        assert_eq!(porter_stem("failing"), "fail");
        assert_eq!(porter_stem("filing"), "file");
        assert_eq!(porter_stem("conflated"), "conflat");
        assert_eq!(porter_stem("troubled"), "troubl");
        assert_eq!(porter_stem("sized"), "size");
    }

    #[test]
    fn y_to_i() {
        assert_eq!(porter_stem("happy"), "happi");
        assert_eq!(porter_stem("sky"), "sky");
    }

    #[test]
    fn multi_step_suffixes() {
        assert_eq!(porter_stem("relational"), "relat");
        assert_eq!(porter_stem("conditional"), "condit");
        assert_eq!(porter_stem("rational"), "ration");
        assert_eq!(porter_stem("conformabli"), "conform");
        assert_eq!(porter_stem("archaeologi"), "archaeolog");
        assert_eq!(porter_stem("vietnamization"), "vietnam");
        assert_eq!(porter_stem("hopefulness"), "hope");
        assert_eq!(porter_stem("sensibiliti"), "sensibl");
        assert_eq!(porter_stem("triplicate"), "triplic");
        assert_eq!(porter_stem("electrical"), "electr");
        assert_eq!(porter_stem("adoption"), "adopt");
        assert_eq!(porter_stem("adjustment"), "adjust");
    }

    #[test]
    fn final_e_and_double_l() {
        assert_eq!(porter_stem("probate"), "probat");
        assert_eq!(porter_stem("rate"), "rate");
        assert_eq!(porter_stem("cease"), "ceas");
        assert_eq!(porter_stem("controll"), "control");
        assert_eq!(porter_stem("roll"), "roll");
    }

    #[test]
    fn short_words_untouched() {
        assert_eq!(porter_stem("is"), "is");
        assert_eq!(porter_stem("as"), "as");
        assert_eq!(porter_stem("at"), "at");
        assert_eq!(porter_stem(""), "");
        assert_eq!(porter_stem("a"), "a");
    }
}
