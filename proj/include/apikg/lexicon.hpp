#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace apikg {

/// Semantic role of a placeholder in a phrase pattern.
enum class Role { patient, location, goal, source, instrument };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view token);

struct PatternElement {
    bool is_slot = false;
    Role role = Role::patient;           // when is_slot
    std::vector<std::string> literal;    // when !is_slot, one or more words
};

/// A verb-plus-roles template such as "V {patient} in {location}".
struct PhrasePattern {
    std::string text;
    // Everything after the leading "V"; slots and literals alternate.
    std::vector<PatternElement> elements;

    std::size_t slot_count() const;
    static PhrasePattern parse(std::string_view text);
};

struct VerbLexicon {
    std::map<std::string, std::string, std::less<>> verb_to_category;

    bool contains(std::string_view verb) const { return verb_to_category.find(verb) != verb_to_category.end(); }
    std::optional<std::string> category_of(std::string_view verb) const;
    std::set<std::string> categories() const;
};

struct PhrasePatternSet {
    std::vector<PhrasePattern> patterns;
};

enum PosFlag : std::uint8_t { pos_noun = 1, pos_verb = 2, pos_adjective = 4 };

/// The four line-oriented lexicon files plus the rule-based lemmatizer that
/// consults them.
class Lexicons {
public:
    static constexpr std::string_view kVerbsFile = "verbs.tsv";
    static constexpr std::string_view kPatternsFile = "patterns.txt";
    static constexpr std::string_view kStopWordsFile = "stopwords.txt";
    static constexpr std::string_view kPosFile = "pos.tsv";

    /// Loads verbs.tsv, patterns.txt, stopwords.txt and pos.tsv from a directory.
    static Lexicons load(const std::filesystem::path& dir);
    static Lexicons parse(std::istream& verbs, std::istream& patterns, std::istream& stop_words, std::istream& pos);

    const VerbLexicon& verbs() const { return verbs_; }
    const PhrasePatternSet& patterns() const { return patterns_; }

    bool is_verb(std::string_view lemma) const { return verbs_.contains(lemma); }
    bool is_stop_word(std::string_view word) const { return stop_words_.find(word) != stop_words_.end(); }
    static bool is_determiner(std::string_view word);

    /// POS flags of a lemma; verbs from the verb lexicon count as verbs even
    /// when pos.tsv does not list them. Zero for unknown words.
    std::uint8_t pos(std::string_view lemma) const;
    bool is_known(std::string_view word) const;

    /// Rule-based lemma of a lowercase word: irregular table, then
    /// plural (-s, -es, -ies) and participle (-ing, -ed) stripping with
    /// e-restoration and consonant undoubling, preferring known words.
    std::string lemmatize(std::string_view word) const;

private:
    VerbLexicon verbs_;
    PhrasePatternSet patterns_;
    std::set<std::string, std::less<>> stop_words_;
    std::map<std::string, std::uint8_t, std::less<>> pos_;
};

}  // namespace apikg
