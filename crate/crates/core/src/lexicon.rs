//! Word knowledge backing the head-word tests: stems, subcategorization
//! categories, semantic classes and closed word lists.
//!
//! All lookups lowercase the query. A word that the stem table does not list
//! is its own stem.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use crate::corpus::GroupKind;
use crate::error::LexiconError;

/// Surface form to stems.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StemTable {
    stems: BTreeMap<String, BTreeSet<String>>,
}

impl StemTable {
    pub fn insert(&mut self, form: &str, stem: &str) {
        self.stems
            .entry(form.to_lowercase())
            .or_default()
            .insert(stem.to_lowercase());
    }

    /// Stems of `word`, falling back to the lowercased word itself.
    pub fn stems_of(&self, word: &str) -> Vec<String> {
        let word = word.to_lowercase();
        match self.stems.get(&word) {
            Some(stems) if !stems.is_empty() => stems.iter().cloned().collect(),
            _ => vec![word],
        }
    }
}

/// Stem to subcategorization and complement categories.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubcatLexicon {
    categories: BTreeMap<String, BTreeSet<String>>,
}

impl SubcatLexicon {
    pub fn insert(&mut self, stem: &str, category: &str) {
        self.categories
            .entry(stem.to_lowercase())
            .or_default()
            .insert(category.to_string());
    }

    pub fn categories(&self, stem: &str) -> impl Iterator<Item = &str> + '_ {
        self.categories
            .get(&stem.to_lowercase())
            .into_iter()
            .flatten()
            .map(String::as_str)
    }
}

/// Which part of the semantic class namespace a class belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassPartition {
    Noun,
    Verb,
}

impl ClassPartition {
    fn prefix(self) -> &'static str {
        match self {
            ClassPartition::Noun => "noun:",
            ClassPartition::Verb => "verb:",
        }
    }
}

/// Stem to semantic classes, split into noun and verb classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SemanticClassLexicon {
    noun: BTreeMap<String, BTreeSet<String>>,
    verb: BTreeMap<String, BTreeSet<String>>,
}

impl SemanticClassLexicon {
    pub fn insert(&mut self, stem: &str, partition: ClassPartition, class: &str) {
        let map = match partition {
            ClassPartition::Noun => &mut self.noun,
            ClassPartition::Verb => &mut self.verb,
        };
        map.entry(stem.to_lowercase())
            .or_default()
            .insert(class.to_string());
    }

    pub fn classes(&self, stem: &str, partition: ClassPartition) -> impl Iterator<Item = &str> + '_ {
        let map = match partition {
            ClassPartition::Noun => &self.noun,
            ClassPartition::Verb => &self.verb,
        };
        map.get(&stem.to_lowercase())
            .into_iter()
            .flatten()
            .map(String::as_str)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordList {
    pub name: String,
    pub members: BTreeSet<String>,
}

impl WordList {
    pub fn new<I, S>(name: &str, members: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        WordList {
            name: name.to_string(),
            members: members.into_iter().map(|m| m.as_ref().to_lowercase()).collect(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.members.contains(&word.to_lowercase())
    }
}

/// Every lexical resource the rule engine consults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LexiconBundle {
    pub stems: StemTable,
    pub subcat: SubcatLexicon,
    pub classes: SemanticClassLexicon,
    pub word_lists: BTreeMap<String, WordList>,
}

impl LexiconBundle {
    pub fn empty() -> Self {
        LexiconBundle::default()
    }

    pub fn add_word_list(&mut self, list: WordList) {
        self.word_lists.insert(list.name.clone(), list);
    }

    pub fn stems_of(&self, word: &str) -> Vec<String> {
        self.stems.stems_of(word)
    }

    /// Semantic classes of `word` for a group of `kind`: the noun partition for
    /// noun groups, the verb partition for verb groups, nothing otherwise.
    pub fn classes_of(&self, word: &str, kind: GroupKind) -> BTreeSet<String> {
        let partition = match kind {
            GroupKind::Noun => ClassPartition::Noun,
            GroupKind::Verb => ClassPartition::Verb,
            _ => return BTreeSet::new(),
        };
        self.stems_of(word)
            .iter()
            .flat_map(|stem| self.classes.classes(stem, partition))
            .map(str::to_string)
            .collect()
    }

    pub fn subcat_of(&self, word: &str) -> BTreeSet<String> {
        self.stems_of(word)
            .iter()
            .flat_map(|stem| self.subcat.categories(stem))
            .map(str::to_string)
            .collect()
    }

    /// Names of the word lists containing `word`.
    pub fn lists_containing(&self, word: &str) -> Vec<&str> {
        let word = word.to_lowercase();
        self.word_lists
            .values()
            .filter(|l| l.members.contains(&word))
            .map(|l| l.name.as_str())
            .collect()
    }

    pub fn in_word_list(&self, word: &str, list: &str) -> bool {
        self.word_lists
            .get(list)
            .is_some_and(|l| l.contains(word))
    }

    /// Loads every recognised file in `dir`. Missing files give empty
    /// resources; a missing directory gives an empty bundle.
    pub fn load_dir(dir: &Path) -> Result<Self, LexiconError> {
        let mut bundle = LexiconBundle::default();
        if !dir.is_dir() {
            return Ok(bundle);
        }

        for (form, values) in read_tsv(&dir.join("stems.tsv"))? {
            for stem in values {
                bundle.stems.insert(&form, &stem);
            }
        }
        for (stem, values) in read_tsv(&dir.join("subcat.tsv"))? {
            for cat in values {
                bundle.subcat.insert(&stem, &cat);
            }
        }
        for (file, default) in [
            ("semclass-noun.tsv", ClassPartition::Noun),
            ("semclass-verb.tsv", ClassPartition::Verb),
        ] {
            let path = dir.join(file);
            for (stem, values) in read_tsv_lines(&path)? {
                for (line, value) in values {
                    let (partition, class) = split_partition(&value, default);
                    if class.is_empty() {
                        return Err(LexiconError::Malformed {
                            path: path.clone(),
                            line,
                            message: format!("empty class name in `{}`", value),
                        });
                    }
                    bundle.classes.insert(&stem, partition, class);
                }
            }
        }

        let mut list_files: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(|source| LexiconError::Io {
                path: dir.to_path_buf(),
                source,
            })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| list_name(p).is_some())
            .collect();
        list_files.sort();
        for path in list_files {
            let name = list_name(&path).expect("filtered above").to_string();
            let words = read_tsv(&path)?.into_iter().map(|(w, _)| w);
            bundle.add_word_list(WordList::new(&name, words));
        }

        Ok(bundle)
    }
}

fn list_name(path: &Path) -> Option<&str> {
    let file = path.file_name()?.to_str()?;
    let name = file.strip_prefix("wordlist-")?.strip_suffix(".tsv")?;
    (!name.is_empty()).then_some(name)
}

fn split_partition(value: &str, default: ClassPartition) -> (ClassPartition, &str) {
    for p in [ClassPartition::Noun, ClassPartition::Verb] {
        if let Some(rest) = value.strip_prefix(p.prefix()) {
            return (p, rest);
        }
    }
    (default, value)
}

type Entry = (String, Vec<String>);
/// A key with its values, each tagged with its line number.
type NumberedEntry = (String, Vec<(usize, String)>);

fn read_tsv(path: &Path) -> Result<Vec<Entry>, LexiconError> {
    Ok(read_tsv_lines(path)?
        .into_iter()
        .map(|(k, vs)| (k, vs.into_iter().map(|(_, v)| v).collect()))
        .collect())
}

/// `key<TAB>v1 v2 ...` lines; `#` starts a comment line. A missing file reads
/// as empty.
fn read_tsv_lines(path: &Path) -> Result<Vec<NumberedEntry>, LexiconError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(source) => {
            return Err(LexiconError::Io {
                path: path.to_path_buf(),
                source,
            })
        }
    };
    parse_tsv(&text, path)
}

fn parse_tsv(
    text: &str,
    path: &Path,
) -> Result<Vec<NumberedEntry>, LexiconError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let mut cols = line.splitn(2, '\t');
        let key = cols.next().unwrap_or("").trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(LexiconError::Malformed {
                path: path.to_path_buf(),
                line: lineno,
                message: format!("bad entry word `{}`", key),
            });
        }
        let values = cols
            .next()
            .unwrap_or("")
            .split_whitespace()
            .map(|v| (lineno, v.to_string()))
            .collect();
        out.push((key.to_string(), values));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(dir: &Path, name: &str, body: &str) {
        let mut f = fs::File::create(dir.join(name)).unwrap();
        f.write_all(body.as_bytes()).unwrap();
    }

    fn scratch(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("relseq-lex-{}-{}", tag, std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn loads_prefixed_verb_classes() {
        let dir = scratch("verb");
        write(&dir, "semclass-verb.tsv", "# verbs\nrun\tverb:motion verb:change\n");
        let lex = LexiconBundle::load_dir(&dir).unwrap();
        assert_eq!(lex.classes.classes("run", ClassPartition::Verb).count(), 2);
        assert_eq!(
            lex.classes_of("run", GroupKind::Verb),
            ["change", "motion"].iter().map(|s| s.to_string()).collect()
        );
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn empty_and_missing_files_give_empty_lexicons() {
        let dir = scratch("empty");
        write(&dir, "semclass-noun.tsv", "");
        let lex = LexiconBundle::load_dir(&dir).unwrap();
        assert_eq!(lex, LexiconBundle::empty());
        assert_eq!(
            LexiconBundle::load_dir(&dir.join("nope")).unwrap(),
            LexiconBundle::empty()
        );
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn malformed_line_names_file_and_line() {
        let dir = scratch("bad");
        write(&dir, "stems.tsv", "cats\tcat\n\tdog\n");
        let err = LexiconBundle::load_dir(&dir).unwrap_err();
        match &err {
            LexiconError::Malformed { path, line, .. } => {
                assert!(path.ends_with("stems.tsv"));
                assert_eq!(*line, 2);
            }
            other => panic!("unexpected {:?}", other),
        }
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn word_lists_from_files() {
        let dir = scratch("lists");
        write(&dir, "wordlist-relative-pronouns.tsv", "who\nWhich\nthat\n");
        let lex = LexiconBundle::load_dir(&dir).unwrap();
        assert!(lex.in_word_list("which", "relative-pronouns"));
        assert!(lex.in_word_list("Who", "relative-pronouns"));
        assert!(!lex.in_word_list("cat", "relative-pronouns"));
        assert_eq!(lex.lists_containing("THAT"), vec!["relative-pronouns"]);
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn classes_go_through_stems() {
        let mut lex = LexiconBundle::empty();
        lex.stems.insert("cats", "cat");
        lex.classes.insert("cat", ClassPartition::Noun, "animal");
        assert_eq!(
            lex.classes_of("Cats", GroupKind::Noun),
            BTreeSet::from(["animal".to_string()])
        );
        assert!(lex.classes_of("cats", GroupKind::Verb).is_empty());
        assert!(lex.classes_of("xyzzy", GroupKind::Noun).is_empty());
    }

    #[test]
    fn partition_restricts_lookup() {
        let mut lex = LexiconBundle::empty();
        lex.classes.insert("attack", ClassPartition::Noun, "act");
        assert!(lex.classes_of("attack", GroupKind::Verb).is_empty());
        assert!(lex.classes_of("attack", GroupKind::Adjective).is_empty());
        assert_eq!(lex.classes_of("attack", GroupKind::Noun).len(), 1);
    }

    #[test]
    fn identity_stem_fallback() {
        let mut lex = LexiconBundle::empty();
        lex.subcat.insert("sleep", "intrans");
        assert_eq!(lex.stems_of("Sleep"), vec!["sleep".to_string()]);
        assert!(lex.subcat_of("SLEEP").contains("intrans"));
    }
}
