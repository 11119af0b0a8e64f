#include "apikg/lexicon.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "apikg/error.hpp"
#include "apikg/text.hpp"

namespace apikg {

namespace {

constexpr std::array<std::string_view, 5> kRoleNames = {"patient", "location", "goal", "source", "instrument"};

// Words the default-verb rules rely on.
constexpr std::array<std::string_view, 3> kRequiredVerbs = {"get", "convert", "check"};

const std::map<std::string, std::string, std::less<>>& irregular_forms() {
    static const std::map<std::string, std::string, std::less<>> table = {
        {"am", "be"},         {"are", "be"},        {"been", "be"},       {"is", "be"},
        {"was", "be"},        {"were", "be"},       {"did", "do"},        {"does", "do"},
        {"done", "do"},       {"had", "have"},      {"has", "have"},      {"built", "build"},
        {"children", "child"}, {"found", "find"},   {"given", "give"},    {"indices", "index"},
        {"made", "make"},     {"sent", "send"},     {"thrown", "throw"},  {"written", "write"},
        {"kept", "keep"},     {"left", "leave"},    {"lost", "lose"},     {"held", "hold"},
        {"began", "begin"},   {"begun", "begin"},   {"bound", "bind"},    {"taken", "take"},
    };
    return table;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

std::istream& open_checked(std::ifstream& f, const std::filesystem::path& p) {
    f.open(p);
    if (!f) throw Error(ErrorCategory::io, "cannot open lexicon file " + p.string());
    return f;
}

template <typename Fn>
void for_each_line(std::istream& in, std::string_view file, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        try {
            fn(line);
        } catch (const Error& e) {
            throw Error(ErrorCategory::parse,
                        std::string(file) + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

}  // namespace

std::string_view to_string(Role role) { return kRoleNames[static_cast<std::size_t>(role)]; }

std::optional<Role> parse_role(std::string_view token) {
    for (std::size_t i = 0; i < kRoleNames.size(); ++i) {
        if (kRoleNames[i] == token) return static_cast<Role>(i);
    }
    return std::nullopt;
}

std::size_t PhrasePattern::slot_count() const {
    std::size_t n = 0;
    for (const auto& e : elements) n += e.is_slot ? 1 : 0;
    return n;
}

PhrasePattern PhrasePattern::parse(std::string_view text) {
    PhrasePattern p;
    std::istringstream words{std::string(text)};
    std::string word;
    std::vector<std::string> parts;
    while (words >> word) parts.push_back(word);
    if (parts.empty() || parts.front() != "V") {
        throw Error(ErrorCategory::parse, "pattern must start with 'V': " + std::string(text));
    }
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto& w = parts[i];
        if (w.size() >= 2 && w.front() == '{' && w.back() == '}') {
            auto role = parse_role(std::string_view(w).substr(1, w.size() - 2));
            if (!role) throw Error(ErrorCategory::parse, "unknown role " + w + " in pattern: " + std::string(text));
            if (!p.elements.empty() && p.elements.back().is_slot) {
                throw Error(ErrorCategory::parse, "adjacent role slots in pattern: " + std::string(text));
            }
            p.elements.push_back({true, *role, {}});
        } else {
            if (p.elements.empty()) {
                throw Error(ErrorCategory::parse, "literal before first role in pattern: " + std::string(text));
            }
            if (p.elements.back().is_slot) p.elements.push_back({false, Role::patient, {}});
            p.elements.back().literal.push_back(to_lower(w));
        }
    }
    if (!p.elements.empty() && !p.elements.back().is_slot) {
        throw Error(ErrorCategory::parse, "pattern must end with a role slot: " + std::string(text));
    }
    p.text = join(parts);
    return p;
}

std::optional<std::string> VerbLexicon::category_of(std::string_view verb) const {
    auto it = verb_to_category.find(verb);
    if (it == verb_to_category.end()) return std::nullopt;
    return it->second;
}

std::set<std::string> VerbLexicon::categories() const {
    std::set<std::string> out;
    for (const auto& [verb, category] : verb_to_category) out.insert(category);
    return out;
}

Lexicons Lexicons::load(const std::filesystem::path& dir) {
    std::ifstream verbs, patterns, stop_words, pos;
    return parse(open_checked(verbs, dir / kVerbsFile), open_checked(patterns, dir / kPatternsFile),
                 open_checked(stop_words, dir / kStopWordsFile), open_checked(pos, dir / kPosFile));
}

Lexicons Lexicons::parse(std::istream& verbs, std::istream& patterns, std::istream& stop_words, std::istream& pos) {
    Lexicons lex;
    for_each_line(verbs, kVerbsFile, [&](const std::string& line) {
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw Error(ErrorCategory::parse, "expected verb<TAB>category");
        auto verb = to_lower(trim(std::string_view(line).substr(0, tab)));
        auto category = to_lower(trim(std::string_view(line).substr(tab + 1)));
        if (verb.empty() || category.empty()) throw Error(ErrorCategory::parse, "empty verb or category");
        auto [it, inserted] = lex.verbs_.verb_to_category.emplace(verb, category);
        if (!inserted && it->second != category) {
            throw Error(ErrorCategory::parse, "verb '" + verb + "' mapped to two categories");
        }
    });
    std::set<std::string> seen;
    for_each_line(patterns, kPatternsFile, [&](const std::string& line) {
        auto p = PhrasePattern::parse(line);
        if (!seen.insert(p.text).second) throw Error(ErrorCategory::parse, "duplicate pattern " + p.text);
        lex.patterns_.patterns.push_back(std::move(p));
    });
    for_each_line(stop_words, kStopWordsFile, [&](const std::string& line) {
        lex.stop_words_.insert(to_lower(trim(line)));
    });
    for_each_line(pos, kPosFile, [&](const std::string& line) {
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw Error(ErrorCategory::parse, "expected word<TAB>{n|v|a}");
        auto word = to_lower(trim(std::string_view(line).substr(0, tab)));
        auto tag = trim(std::string_view(line).substr(tab + 1));
        std::uint8_t flag = 0;
        if (tag == "n") flag = pos_noun;
        else if (tag == "v") flag = pos_verb;
        else if (tag == "a") flag = pos_adjective;
        else throw Error(ErrorCategory::parse, "unknown POS tag '" + tag + "'");
        lex.pos_[word] |= flag;
    });

    for (auto v : kRequiredVerbs) {
        if (!lex.verbs_.contains(v)) {
            throw Error(ErrorCategory::schema, "verb lexicon must contain '" + std::string(v) + "'");
        }
    }
    for (auto required : {"V", "V {patient}"}) {
        if (!seen.contains(required)) {
            throw Error(ErrorCategory::schema, "pattern file must contain '" + std::string(required) + "'");
        }
    }
    return lex;
}

bool Lexicons::is_determiner(std::string_view word) {
    static const std::set<std::string_view> determiners = {
        "a",   "an",   "the",  "this", "that",  "these", "those", "each", "every", "some", "any",
        "all", "no",   "its",  "their", "his",  "her",   "our",   "your", "my",    "another",
    };
    return determiners.contains(word);
}

std::uint8_t Lexicons::pos(std::string_view lemma) const {
    std::uint8_t flags = 0;
    if (auto it = pos_.find(lemma); it != pos_.end()) flags = it->second;
    if (verbs_.contains(lemma)) flags |= pos_verb;
    return flags;
}

bool Lexicons::is_known(std::string_view word) const {
    return pos_.find(word) != pos_.end() || verbs_.contains(word);
}

std::string Lexicons::lemmatize(std::string_view word) const {
    const auto& irregular = irregular_forms();
    if (auto it = irregular.find(word); it != irregular.end()) return it->second;
    if (is_known(word) || word.size() <= 3) return std::string(word);

    std::vector<std::string> candidates;
    std::string fallback(word);
    auto stem_variants = [&](std::string_view stem) {
        // stem, stem+e, stem with a doubled final consonant undone
        candidates.emplace_back(stem);
        candidates.push_back(std::string(stem) + "e");
        auto n = stem.size();
        if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1])) {
            candidates.emplace_back(stem.substr(0, n - 1));
        }
    };

    if (ends_with(word, "ies") && word.size() > 4) {
        fallback = std::string(word.substr(0, word.size() - 3)) + "y";
        candidates.push_back(fallback);
    } else if (ends_with(word, "es") &&
               (ends_with(word, "ses") || ends_with(word, "xes") || ends_with(word, "zes") ||
                ends_with(word, "ches") || ends_with(word, "shes"))) {
        fallback = std::string(word.substr(0, word.size() - 2));
        candidates.push_back(fallback);
        candidates.emplace_back(word.substr(0, word.size() - 1));
    } else if (ends_with(word, "s") && !ends_with(word, "ss") && !ends_with(word, "us") && !ends_with(word, "is")) {
        fallback = std::string(word.substr(0, word.size() - 1));
        candidates.push_back(fallback);
    } else if (ends_with(word, "ing") && word.size() >= 6) {
        stem_variants(word.substr(0, word.size() - 3));
    } else if (ends_with(word, "ied") && word.size() > 4) {
        candidates.push_back(std::string(word.substr(0, word.size() - 3)) + "y");
    } else if (ends_with(word, "ed") && word.size() >= 5) {
        stem_variants(word.substr(0, word.size() - 2));
    }

    for (const auto& c : candidates) {
        if (is_known(c)) return c;
    }
    return fallback;
}

}  // namespace apikg
