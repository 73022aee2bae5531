//! Text formats: matrices, words, group tables, action tables, generator maps.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;
use treeprod::amalgam::{AmalgamSpec, AmalgamWord, Side, Syllable};
use treeprod::group::{make_cyclic, make_dihedral, Elem, FiniteGroup, Generator, GroupAction};
use treeprod::matgroup::{Glt2Word, Letter, Mat2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(ParseError::new(self.pos, format!("expected '{want}', found '{c}'"))),
            None => Err(ParseError::new(self.pos, format!("expected '{want}', found end of input"))),
        }
    }

    /// Optionally signed decimal integer; returns its text and start offset.
    fn integer(&mut self) -> Result<(&'a str, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        let digits = end;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == digits {
            return Err(match self.src[start..].chars().next() {
                Some(c) => ParseError::new(start, format!("expected an integer, found '{c}'")),
                None => ParseError::new(start, "expected an integer, found end of input"),
            });
        }
        self.pos = end;
        Ok((&self.src[start..end], start))
    }

    fn small_int<T: FromStr>(&mut self) -> Result<(T, usize), ParseError> {
        let (text, at) = self.integer()?;
        let v = text
            .trim_start_matches('+')
            .parse()
            .map_err(|_| ParseError::new(at, format!("integer {text} out of range")))?;
        Ok((v, at))
    }
}

/// `[[a,b],[c,d]]` with arbitrary-precision entries.
pub fn parse_matrix(text: &str) -> Result<Mat2, ParseError> {
    let mut cur = Cursor::new(text);
    let mut entries: Vec<BigInt> = Vec::with_capacity(4);
    cur.expect('[')?;
    for row in 0..2 {
        if row > 0 {
            cur.expect(',')?;
        }
        cur.expect('[')?;
        for col in 0..2 {
            if col > 0 {
                cur.expect(',')?;
            }
            let (t, at) = cur.integer()?;
            let v = BigInt::from_str(t.trim_start_matches('+'))
                .map_err(|_| ParseError::new(at, format!("bad integer {t}")))?;
            entries.push(v);
        }
        cur.expect(']')?;
    }
    cur.expect(']')?;
    if !cur.at_end() {
        return Err(ParseError::new(cur.pos, "trailing input after matrix"));
    }
    let mut it = entries.into_iter();
    let mut next = || it.next().expect("four entries");
    Ok(Mat2 {
        a: next(),
        b: next(),
        c: next(),
        d: next(),
    })
}

/// Shared `term ('*' term)*` loop; `""` and a lone `1` are the empty word.
fn parse_terms<T>(
    text: &str,
    mut term: impl FnMut(&mut Cursor<'_>) -> Result<T, ParseError>,
) -> Result<Vec<T>, ParseError> {
    let mut cur = Cursor::new(text);
    if cur.at_end() {
        return Ok(Vec::new());
    }
    if text.trim() == "1" {
        return Ok(Vec::new());
    }
    let mut out = vec![term(&mut cur)?];
    while !cur.at_end() {
        cur.expect('*')?;
        if cur.at_end() {
            return Err(ParseError::new(cur.pos, "dangling '*'"));
        }
        out.push(term(&mut cur)?);
    }
    Ok(out)
}

fn exponent(cur: &mut Cursor<'_>) -> Result<i64, ParseError> {
    if cur.peek() != Some('^') {
        return Ok(1);
    }
    cur.bump();
    let (k, at): (i64, usize) = cur.small_int()?;
    if k == 0 {
        return Err(ParseError::new(at, "zero exponent"));
    }
    Ok(k)
}

/// A word over `s`, `u`, `j`: `s^3 * u^-1 * j`.
pub fn parse_glt2_word(text: &str) -> Result<Glt2Word, ParseError> {
    let letters = parse_terms(text, |cur| {
        cur.skip_ws();
        let at = cur.pos;
        let letter = match cur.bump() {
            Some('s') => Letter::S,
            Some('u') => Letter::U,
            Some('j') => Letter::J,
            Some(c) => return Err(ParseError::new(at, format!("unknown letter '{c}'"))),
            None => return Err(ParseError::new(at, "expected a letter")),
        };
        Ok((letter, exponent(cur)?))
    })?;
    Ok(Glt2Word::new(letters))
}

/// One `side:index^exp` term of an amalgam word, before folding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmalgamTerm {
    pub side: Side,
    pub index: Elem,
    pub exp: i64,
    pub offset: usize,
}

/// A word over `a`, `b`: `a:1 * b:2 * a:3^-1`.
pub fn parse_amalgam_terms(text: &str) -> Result<Vec<AmalgamTerm>, ParseError> {
    parse_terms(text, |cur| {
        cur.skip_ws();
        let offset = cur.pos;
        let side = match cur.bump() {
            Some('a') => Side::A,
            Some('b') => Side::B,
            Some(c) => return Err(ParseError::new(offset, format!("unknown side '{c}'"))),
            None => return Err(ParseError::new(offset, "expected a side")),
        };
        cur.expect(':')?;
        let (index, _): (Elem, usize) = cur.small_int()?;
        let exp = exponent(cur)?;
        Ok(AmalgamTerm { side, index, exp, offset })
    })
}

/// Checks indices against the factors and folds exponents into elements.
pub fn fold_amalgam_terms(spec: &AmalgamSpec, terms: &[AmalgamTerm]) -> Result<AmalgamWord, ParseError> {
    let mut syllables = Vec::with_capacity(terms.len());
    for t in terms {
        let g = spec.group(t.side);
        if t.index >= g.order() {
            return Err(ParseError::new(
                t.offset,
                format!("{}:{} is not an element of {}", t.side, t.index, g.label()),
            ));
        }
        syllables.push(Syllable::new(t.side, g.pow(t.index, t.exp)));
    }
    Ok(AmalgamWord::new(syllables))
}

pub fn parse_amalgam_word(spec: &AmalgamSpec, text: &str) -> Result<AmalgamWord, ParseError> {
    fold_amalgam_terms(spec, &parse_amalgam_terms(text)?)
}

/// Renders amalgam terms back into the grammar.
pub fn render_amalgam_terms(terms: &[AmalgamTerm]) -> String {
    if terms.is_empty() {
        return "1".into();
    }
    terms
        .iter()
        .map(|t| {
            if t.exp == 1 {
                format!("{}:{}", t.side, t.index)
            } else {
                format!("{}:{}^{}", t.side, t.index, t.exp)
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

/// Source-to-target element pairs: `1:2` or `1:2,3:4`.
pub fn parse_gen_map(text: &str) -> Result<Vec<(Elem, Elem)>, ParseError> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    loop {
        let (x, _): (Elem, usize) = cur.small_int()?;
        cur.expect(':')?;
        let (y, _): (Elem, usize) = cur.small_int()?;
        out.push((x, y));
        if cur.at_end() {
            return Ok(out);
        }
        cur.expect(',')?;
    }
}

/// `Z<n>` or `D<n>`.
pub fn builtin_group(name: &str) -> Option<FiniteGroup> {
    let (kind, n) = name.split_at_checked(1)?;
    let n: usize = n.parse().ok()?;
    match kind {
        "Z" => make_cyclic(n).ok(),
        "D" => make_dihedral(n).ok(),
        _ => None,
    }
}

/// Offsets in the line-oriented formats are byte offsets into the whole file.
struct Lines<'a> {
    src: &'a str,
    iter: std::iter::Peekable<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(src: &'a str) -> Self {
        Lines {
            src,
            iter: src.lines().peekable(),
        }
    }

    fn offset(&self, line: &str) -> usize {
        line.as_ptr() as usize - self.src.as_ptr() as usize
    }

    /// Next line that is neither blank nor a `#` comment.
    fn next(&mut self) -> Option<&'a str> {
        self.iter
            .by_ref()
            .find(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
    }

    fn end(&self) -> usize {
        self.src.len()
    }
}

fn numbers(line: &str, base: usize) -> Result<Vec<Elem>, ParseError> {
    let mut out = Vec::new();
    let mut pos = 0;
    for tok in line.split_whitespace() {
        let at = base + line[pos..].find(tok).map_or(pos, |i| pos + i);
        pos = at - base + tok.len();
        out.push(
            tok.parse()
                .map_err(|_| ParseError::new(at, format!("expected an element index, found '{tok}'")))?,
        );
    }
    Ok(out)
}

fn keyword<'a>(line: &'a str, base: usize, kw: &str) -> Result<&'a str, ParseError> {
    let trimmed = line.trim_start();
    let at = base + line.len() - trimmed.len();
    trimmed
        .strip_prefix(kw)
        .ok_or_else(|| ParseError::new(at, format!("expected '{kw}'")))
}

/// The group-spec text format. The table is not checked against the group
/// axioms; see [`treeprod::check_group_axioms`].
pub fn parse_group_spec(text: &str) -> Result<FiniteGroup, ParseError> {
    let mut lines = Lines::new(text);
    let header = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "empty group spec"))?;
    let base = lines.offset(header);
    let rest = keyword(header, base, "group")?;
    let words: Vec<&str> = rest.split_whitespace().collect();
    let (label, order) = match words.as_slice() {
        [label, "order", n] => (
            label.to_string(),
            n.parse::<usize>()
                .map_err(|_| ParseError::new(base, format!("bad order '{n}'")))?,
        ),
        _ => return Err(ParseError::new(base, "expected 'group <label> order <n>'")),
    };
    if order == 0 {
        return Err(ParseError::new(base, "order must be positive"));
    }

    let line = lines
        .next()
        .ok_or_else(|| ParseError::new(lines.end(), "missing identity line"))?;
    let base = lines.offset(line);
    let ids = numbers(keyword(line, base, "identity")?, base + line.find("identity").unwrap_or(0) + 8)?;
    let identity = match ids.as_slice() {
        [e] => *e,
        _ => return Err(ParseError::new(base, "expected 'identity <i>'")),
    };

    let mut rows = Vec::with_capacity(order);
    for i in 0..order {
        let line = lines
            .next()
            .ok_or_else(|| ParseError::new(lines.end(), format!("missing row {i}")))?;
        let base = lines.offset(line);
        let rest = keyword(line, base, "row")?;
        let (idx, entries) = rest
            .split_once(':')
            .ok_or_else(|| ParseError::new(base, "expected 'row <i>: ...'"))?;
        if idx.trim().parse::<usize>().ok() != Some(i) {
            return Err(ParseError::new(base, format!("expected row {i}")));
        }
        let entries_base = base + line.len() - entries.len();
        let row = numbers(entries, entries_base)?;
        if row.len() != order {
            return Err(ParseError::new(
                base,
                format!("row {i} has {} entries, expected {order}", row.len()),
            ));
        }
        if let Some(&bad) = row.iter().find(|&&v| v >= order) {
            return Err(ParseError::new(base, format!("entry {bad} out of range in row {i}")));
        }
        rows.push(row);
    }

    let line = lines
        .next()
        .ok_or_else(|| ParseError::new(lines.end(), "missing generators line"))?;
    let base = lines.offset(line);
    let rest = keyword(line, base, "generators:")?;
    let gens = numbers(rest, base + line.len() - rest.len())?;
    if let Some(extra) = lines.next() {
        return Err(ParseError::new(lines.offset(extra), "unexpected trailing line"));
    }
    let generators = gens
        .into_iter()
        .map(|elem| Generator {
            name: format!("x{elem}"),
            elem,
        })
        .collect();
    FiniteGroup::from_table_unchecked(label, identity, rows, generators)
        .map_err(|e| ParseError::new(0, e.to_string()))
}

/// The action-spec text format, checked against the given groups.
pub fn parse_action_spec(
    text: &str,
    actor: &Arc<FiniteGroup>,
    space: &Arc<FiniteGroup>,
) -> Result<GroupAction, ParseError> {
    let mut lines = Lines::new(text);
    let header = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "empty action spec"))?;
    let base = lines.offset(header);
    let rest = keyword(header, base, "action")?;
    match rest.split_whitespace().collect::<Vec<_>>().as_slice() {
        [a, "on", s] => {
            if *a != actor.label() || *s != space.label() {
                return Err(ParseError::new(
                    base,
                    format!(
                        "action is declared for {a} on {s}, but used for {} on {}",
                        actor.label(),
                        space.label()
                    ),
                ));
            }
        }
        _ => return Err(ParseError::new(base, "expected 'action <actor> on <space>'")),
    }
    let mut table = Vec::with_capacity(actor.order());
    for c in 0..actor.order() {
        let line = lines
            .next()
            .ok_or_else(|| ParseError::new(lines.end(), format!("missing permutation for c {c}")))?;
        let base = lines.offset(line);
        let rest = keyword(line, base, "c")?;
        let (idx, perm) = rest
            .split_once(':')
            .ok_or_else(|| ParseError::new(base, "expected 'c <i>: ...'"))?;
        if idx.trim().parse::<usize>().ok() != Some(c) {
            return Err(ParseError::new(base, format!("expected c {c}")));
        }
        table.push(numbers(perm, base + line.len() - perm.len())?);
    }
    if let Some(extra) = lines.next() {
        return Err(ParseError::new(lines.offset(extra), "unexpected trailing line"));
    }
    GroupAction::new(actor.clone(), space.clone(), table).map_err(|e| ParseError::new(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use treeprod::matgroup::{gen_j, sl2_model};

    #[test]
    fn matrices() {
        assert_eq!(parse_matrix("[[0,1],[1,0]]").unwrap(), gen_j());
        assert_eq!(parse_matrix("[[1,0],[0,1]]").unwrap(), Mat2::identity());
        let m = parse_matrix("[[2, -3],[1, -1]]").unwrap();
        assert_eq!(m, Mat2::new(2, -3, 1, -1));
        assert_eq!(m.det(), BigInt::from(1));
        let big = parse_matrix("[[123456789012345678901234567890,0],[0,1]]").unwrap();
        assert_eq!(big.a.to_string(), "123456789012345678901234567890");
        // non-unimodular matrices parse fine
        assert!(parse_matrix("[[2,0],[0,2]]").is_ok());
    }

    #[test]
    fn matrix_errors() {
        assert_eq!(parse_matrix("[[1,0],[0,1]").unwrap_err().offset, 12);
        assert_eq!(parse_matrix("[[1,x],[0,1]]").unwrap_err().offset, 4);
        assert_eq!(parse_matrix("[[1,0],[0,1]] junk").unwrap_err().offset, 14);
        assert!(parse_matrix("").is_err());
    }

    #[test]
    fn glt2_words() {
        assert_eq!(parse_glt2_word("").unwrap(), Glt2Word::default());
        assert_eq!(parse_glt2_word("  1 ").unwrap(), Glt2Word::default());
        let w = parse_glt2_word("s^2").unwrap();
        assert_eq!(w.letters(), &[(Letter::S, 2)]);
        assert_eq!(w.evaluate(), Mat2::new(-1, 0, 0, -1));
        assert_eq!(
            parse_glt2_word("s^3*u^-2 * j").unwrap().letters(),
            &[(Letter::S, 3), (Letter::U, -2), (Letter::J, 1)]
        );
    }

    #[test]
    fn glt2_word_errors() {
        let e = parse_glt2_word("s * q").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(e.message.contains("unknown letter"));
        let e = parse_glt2_word("s^0").unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(e.message.contains("zero exponent"));
        let e = parse_glt2_word("s * ").unwrap_err();
        assert!(e.message.contains("dangling"));
        assert!(parse_glt2_word("s u").is_err());
    }

    #[test]
    fn amalgam_words() {
        let spec = sl2_model();
        let w = parse_amalgam_word(&spec, "a:1 * b:2 * a:1^-1").unwrap();
        assert_eq!(
            w.syllables,
            vec![
                Syllable::new(Side::A, 1),
                Syllable::new(Side::B, 2),
                Syllable::new(Side::A, 3)
            ]
        );
        assert!(parse_amalgam_word(&spec, "").unwrap().is_empty());
        let e = parse_amalgam_word(&spec, "a:1 * b:6").unwrap_err();
        assert_eq!(e.offset, 6);
        assert_eq!(parse_amalgam_terms("a:1 * c:2").unwrap_err().offset, 6);
        assert_eq!(parse_amalgam_terms("a:1 *").unwrap_err().message, "dangling '*'");
    }

    #[test]
    fn gen_maps() {
        assert_eq!(parse_gen_map("1:2").unwrap(), vec![(1, 2)]);
        assert_eq!(parse_gen_map(" 1:3 , 2:4").unwrap(), vec![(1, 3), (2, 4)]);
        assert!(parse_gen_map("1-2").is_err());
    }

    #[test]
    fn builtins() {
        for name in ["Z1", "Z2", "Z3", "Z4", "Z6", "D2", "D4", "D6"] {
            assert_eq!(builtin_group(name).unwrap().label(), name);
        }
        assert!(builtin_group("Z0").is_none());
        assert!(builtin_group("Q8").is_none());
        assert!(builtin_group("").is_none());
    }

    const Z3_SPEC: &str = "# cyclic of order 3
group C3 order 3
identity 0
row 0: 0 1 2
row 1: 1 2 0
row 2: 2 0 1
generators: 1
";

    #[test]
    fn group_spec() {
        let g = parse_group_spec(Z3_SPEC).unwrap();
        assert_eq!(g.label(), "C3");
        assert_eq!(g.order(), 3);
        assert_eq!(g.mul(2, 2), 1);
        assert_eq!(treeprod::check_group_axioms(&g), Ok(()));
    }

    #[test]
    fn group_spec_errors() {
        let bad = Z3_SPEC.replace("row 1: 1 2 0", "row 1: 1 2 x");
        let e = parse_group_spec(&bad).unwrap_err();
        assert_eq!(&bad[e.offset..e.offset + 1], "x");
        let short = Z3_SPEC.replace("row 2: 2 0 1\n", "");
        assert!(parse_group_spec(&short).is_err());
        assert!(parse_group_spec("group G order 0").is_err());
        // loads even though it is not a group
        let broken = Z3_SPEC.replace("row 1: 1 2 0", "row 1: 1 1 0");
        let g = parse_group_spec(&broken).unwrap();
        assert!(treeprod::check_group_axioms(&g).is_err());
    }

    #[test]
    fn action_spec() {
        let c = Arc::new(make_cyclic(2).unwrap());
        let n = Arc::new(make_cyclic(4).unwrap());
        let text = "action Z2 on Z4\nc 0: 0 1 2 3\nc 1: 0 3 2 1\n";
        let act = parse_action_spec(text, &c, &n).unwrap();
        assert_eq!(act.apply(1, 1), 3);
        let not_aut = "action Z2 on Z4\nc 0: 0 1 2 3\nc 1: 0 2 1 3\n";
        assert!(parse_action_spec(not_aut, &c, &n).is_err());
        let wrong_label = "action Z2 on Z6\nc 0: 0 1 2 3\nc 1: 0 3 2 1\n";
        assert!(parse_action_spec(wrong_label, &c, &n).is_err());
    }

    fn glt2_word_strategy() -> impl Strategy<Value = Glt2Word> {
        let letter = prop_oneof![Just(Letter::S), Just(Letter::U), Just(Letter::J)];
        let exp = prop_oneof![-40i64..0, 1i64..40];
        proptest::collection::vec((letter, exp), 0..12).prop_map(Glt2Word::new)
    }

    fn amalgam_terms_strategy() -> impl Strategy<Value = Vec<AmalgamTerm>> {
        let side = prop_oneof![Just(Side::A), Just(Side::B)];
        let exp = prop_oneof![-9i64..0, 1i64..9];
        proptest::collection::vec((side, 0usize..100, exp), 0..10).prop_map(|v| {
            v.into_iter()
                .map(|(side, index, exp)| AmalgamTerm { side, index, exp, offset: 0 })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn glt2_render_reparses(w in glt2_word_strategy()) {
            prop_assert_eq!(parse_glt2_word(&w.to_string()).unwrap(), w);
        }

        #[test]
        fn amalgam_render_reparses(terms in amalgam_terms_strategy()) {
            let text = render_amalgam_terms(&terms);
            let back = parse_amalgam_terms(&text).unwrap();
            let strip = |v: &[AmalgamTerm]| v.iter().map(|t| (t.side, t.index, t.exp)).collect::<Vec<_>>();
            prop_assert_eq!(strip(&back), strip(&terms));
        }

        #[test]
        fn matrix_render_reparses(a in any::<i64>(), b in any::<i64>(), c in any::<i64>(), d in any::<i64>()) {
            let m = Mat2::new(a, b, c, d);
            prop_assert_eq!(parse_matrix(&m.to_string()).unwrap(), m);
        }
    }
}
