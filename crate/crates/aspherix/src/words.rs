//! Free-group words, finite presentations, and Tietze moves.
//!
//! Words are kept freely reduced at all times. A presentation stores its
//! relators exactly as given (after free reduction); relators are never
//! cyclically reduced behind the caller's back, because each relator is the
//! literal attaching map of a 2-cell.

use std::fmt;

use thiserror::Error;

/// One signed generator occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn flipped(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

/// A freely reduced word in a free group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    /// Free reduction: cancel adjacent inverse pairs until none remain.
    /// Idempotent and length-nonincreasing.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in raw {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Word { letters: stack }
    }

    pub fn generator(gen: usize) -> Self {
        Word {
            letters: vec![Letter::new(gen, false)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.flipped()).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..e.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Conjugate other by self: self * other * self^-1.
    pub fn conjugate(&self, other: &Word) -> Word {
        self.concat(other).concat(&self.inverse())
    }

    /// Cyclic reduction: strips matching first/last letters until the word
    /// is cyclically reduced. Relators are never cyclically reduced
    /// implicitly (the attaching map of a 2-cell is the literal word); this
    /// is the explicit opt-in.
    pub fn cyclic_reduce(&self) -> Word {
        let mut letters = self.letters.clone();
        while letters.len() >= 2 {
            let first = letters[0];
            let last = *letters.last().unwrap();
            if first.cancels(last) {
                letters.remove(0);
                letters.pop();
            } else {
                break;
            }
        }
        Word { letters }
    }

    /// Total signed exponent of one generator.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| l.sign())
            .sum()
    }

    /// Largest generator index used, if any.
    pub fn max_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: unknown generator letter `{name}`")]
    UnknownGenerator { line: usize, name: String },
    #[error("line {line}: duplicate generator name `{name}`")]
    DuplicateGenerator { line: usize, name: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TietzeError {
    #[error("relator index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("target and source relator indices must differ")]
    EqualIndices,
    #[error("generator index {0} out of range")]
    GeneratorOutOfRange(usize),
    #[error("certificate product does not reduce to the proposed relator")]
    BadCertificate,
}

fn valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses word tokens against a fixed generator-name table.
///
/// Syntax: a token is either a generator name, `name^k` with integer k, or
/// (when it matches no declared name) a run of single letters where a
/// lowercase letter is a generator and an uppercase letter its inverse.
pub struct WordParser<'a> {
    names: &'a [String],
}

impl<'a> WordParser<'a> {
    pub fn new(names: &'a [String]) -> Self {
        WordParser { names }
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, String> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            self.push_token(token, &mut letters)?;
        }
        Ok(Word::reduce(letters))
    }

    fn push_token(&self, token: &str, out: &mut Vec<Letter>) -> Result<(), String> {
        let (base, exp) = match token.rsplit_once('^') {
            Some((base, exp_str)) => {
                let exp: i64 = exp_str
                    .parse()
                    .map_err(|_| format!("bad exponent `{exp_str}` in `{token}`"))?;
                (base, exp)
            }
            None => (token, 1),
        };
        if let Some(gen) = self.lookup(base) {
            let letter = Letter::new(gen, exp < 0);
            for _ in 0..exp.unsigned_abs() {
                out.push(letter);
            }
            return Ok(());
        }
        if base.chars().count() == 1 && exp == 1 {
            // single-character compact form
            let c = base.chars().next().unwrap();
            let (name, inverse) = if c.is_ascii_uppercase() {
                (c.to_ascii_lowercase().to_string(), true)
            } else {
                (c.to_string(), false)
            };
            if let Some(gen) = self.lookup(&name) {
                out.push(Letter::new(gen, inverse));
                return Ok(());
            }
            return Err(format!("`{base}`"));
        }
        if exp == 1 && !base.is_empty() && base.chars().all(|c| c.is_ascii_alphabetic()) {
            // compact run: every character is a single-letter generator
            for c in base.chars() {
                let (name, inverse) = if c.is_ascii_uppercase() {
                    (c.to_ascii_lowercase().to_string(), true)
                } else {
                    (c.to_string(), false)
                };
                match self.lookup(&name) {
                    Some(gen) => out.push(Letter::new(gen, inverse)),
                    None => return Err(format!("`{c}`")),
                }
            }
            return Ok(());
        }
        Err(format!("`{base}`"))
    }
}

/// Renders a word in the verbose token syntax: `a b a^-1`.
pub fn render_word(word: &Word, names: &[String]) -> String {
    word.letters()
        .iter()
        .map(|l| {
            let name = &names[l.gen];
            if l.inverse {
                format!("{name}^-1")
            } else {
                name.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// An ordered finite presentation. Relator order and duplicates are
/// significant: each relator is one 2-cell of the presentation complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, ParseError> {
        for (i, name) in generators.iter().enumerate() {
            if !valid_generator_name(name) {
                return Err(ParseError::Syntax {
                    line: 0,
                    col: 0,
                    msg: format!("invalid generator name `{name}`"),
                });
            }
            if generators[..i].contains(name) {
                return Err(ParseError::DuplicateGenerator {
                    line: 0,
                    name: name.clone(),
                });
            }
        }
        let rank = generators.len();
        let relators: Vec<Word> = relators
            .into_iter()
            .map(|w| Word::reduce(w.letters().iter().copied()))
            .collect();
        for w in &relators {
            if let Some(g) = w.max_gen() {
                if g >= rank {
                    return Err(ParseError::Syntax {
                        line: 0,
                        col: 0,
                        msg: format!("relator uses generator index {g} but rank is {rank}"),
                    });
                }
            }
        }
        Ok(Presentation {
            generators,
            relators,
        })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn gen_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    /// 1 - #generators + #relators, the Euler characteristic of the
    /// associated 2-complex.
    pub fn euler_characteristic(&self) -> i64 {
        1 - self.gen_count() as i64 + self.relator_count() as i64
    }

    /// Parse the presentation file format: a `gens:` line followed by one
    /// `rel:` line per relator. `#` starts a comment; a bare `rel:` is the
    /// empty relator.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut generators: Option<Vec<String>> = None;
        let mut relators: Vec<Word> = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.trim_start().strip_prefix("gens:") {
                if generators.is_some() {
                    return Err(ParseError::Syntax {
                        line: line_no,
                        col: 1,
                        msg: "duplicate `gens:` line".into(),
                    });
                }
                let names: Vec<String> = rest.split_whitespace().map(|s| s.to_string()).collect();
                for (i, name) in names.iter().enumerate() {
                    if !valid_generator_name(name) {
                        return Err(ParseError::Syntax {
                            line: line_no,
                            col: 1,
                            msg: format!(
                                "invalid generator name `{name}` (must match [a-z][a-zA-Z0-9_]*)"
                            ),
                        });
                    }
                    if names[..i].contains(name) {
                        return Err(ParseError::DuplicateGenerator {
                            line: line_no,
                            name: name.clone(),
                        });
                    }
                }
                generators = Some(names);
            } else if let Some(rest) = line.trim_start().strip_prefix("rel:") {
                let names = generators.as_ref().ok_or(ParseError::Syntax {
                    line: line_no,
                    col: 1,
                    msg: "`rel:` line before `gens:` line".into(),
                })?;
                let parser = WordParser::new(names);
                let word = parser.parse_word(rest).map_err(|msg| {
                    if msg.starts_with('`') {
                        ParseError::UnknownGenerator {
                            line: line_no,
                            name: msg.trim_matches('`').to_string(),
                        }
                    } else {
                        ParseError::Syntax {
                            line: line_no,
                            col: 1,
                            msg,
                        }
                    }
                })?;
                relators.push(word);
            } else {
                let col = raw_line.len() - raw_line.trim_start().len() + 1;
                return Err(ParseError::Syntax {
                    line: line_no,
                    col,
                    msg: format!("expected `gens:` or `rel:`, found `{}`", line.trim()),
                });
            }
        }
        let generators = generators.ok_or(ParseError::Syntax {
            line: 0,
            col: 0,
            msg: "missing `gens:` line".into(),
        })?;
        Ok(Presentation {
            generators,
            relators,
        })
    }

    /// Canonical renderer; `parse(render(p)) == p` byte-stably.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("gens:");
        for name in &self.generators {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
        for rel in &self.relators {
            out.push_str("rel:");
            let body = render_word(rel, &self.generators);
            if !body.is_empty() {
                out.push(' ');
                out.push_str(&body);
            }
            out.push('\n');
        }
        out
    }

    fn fresh_names(&self, k: usize) -> Vec<String> {
        let mut names = Vec::with_capacity(k);
        let mut counter = 1usize;
        while names.len() < k {
            let candidate = format!("g{counter}");
            counter += 1;
            if self.generators.contains(&candidate) || names.contains(&candidate) {
                continue;
            }
            names.push(candidate);
        }
        names
    }

    /// k elementary expansions: each adds a fresh generator g together with
    /// the relator g. The group is unchanged and so is 1 - #gens + #rels.
    pub fn tietze_stabilize(&self, k: usize) -> Presentation {
        let mut generators = self.generators.clone();
        let mut relators = self.relators.clone();
        let base = generators.len();
        for (i, name) in self.fresh_names(k).into_iter().enumerate() {
            generators.push(name);
            relators.push(Word::generator(base + i));
        }
        Presentation {
            generators,
            relators,
        }
    }

    /// Appends k empty relators (2-cells attached trivially).
    pub fn add_trivial_relators(&self, k: usize) -> Presentation {
        let mut relators = self.relators.clone();
        relators.extend(std::iter::repeat_with(Word::empty).take(k));
        Presentation {
            generators: self.generators.clone(),
            relators,
        }
    }

    /// Replaces relator `target` by the free reduction of
    /// r_target * (w r_source w^-1)^sign with sign -1 when `invert` is set.
    pub fn tietze_transvect(
        &self,
        target: usize,
        source: usize,
        conjugator: &Word,
        invert: bool,
    ) -> Result<Presentation, TietzeError> {
        let n = self.relators.len();
        if target >= n {
            return Err(TietzeError::IndexOutOfRange(target));
        }
        if source >= n {
            return Err(TietzeError::IndexOutOfRange(source));
        }
        if target == source {
            return Err(TietzeError::EqualIndices);
        }
        if let Some(g) = conjugator.max_gen() {
            if g >= self.gen_count() {
                return Err(TietzeError::GeneratorOutOfRange(g));
            }
        }
        let mut factor = conjugator.conjugate(&self.relators[source]);
        if invert {
            factor = factor.inverse();
        }
        let mut relators = self.relators.clone();
        relators[target] = relators[target].concat(&factor);
        Ok(Presentation {
            generators: self.generators.clone(),
            relators,
        })
    }

    /// Appends a relator that comes with a certificate: a product of
    /// conjugates of existing relators whose free reduction must equal the
    /// proposed word. Consequence-checking in general is undecidable, so
    /// only certified words (or the empty word, via `add_trivial_relators`)
    /// are accepted.
    pub fn add_certified_relator(
        &self,
        word: &Word,
        certificate: &[(Word, usize, bool)],
    ) -> Result<Presentation, TietzeError> {
        let mut product = Word::empty();
        for (conj, idx, invert) in certificate {
            let rel = self
                .relators
                .get(*idx)
                .ok_or(TietzeError::IndexOutOfRange(*idx))?;
            let mut factor = conj.conjugate(rel);
            if *invert {
                factor = factor.inverse();
            }
            product = product.concat(&factor);
        }
        let word = Word::reduce(word.letters().iter().copied());
        if product != word {
            return Err(TietzeError::BadCertificate);
        }
        let mut relators = self.relators.clone();
        relators.push(word);
        Ok(Presentation {
            generators: self.generators.clone(),
            relators,
        })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
