#include "apikg/functionality.hpp"

#include <set>

#include "apikg/text.hpp"

namespace apikg {

namespace {

// Clause openers that end a role filler ("true if the key is present" -> "true").
const std::set<std::string_view> kFillerBreakers = {
    "if", "which", "when", "whether", "while", "who", "whose", "where", "because", "unless", "or",
};

bool is_verb_only(std::string_view lemma, const Lexicons& lex) {
    auto flags = lex.pos(lemma);
    return (flags & pos_verb) != 0 && (flags & (pos_noun | pos_adjective)) == 0;
}

// Words that open a template literal ("in", "to", ...). A filler stops at the
// next one so "the specified position in this list" yields "position".
std::set<std::string> template_prepositions(const Lexicons& lex) {
    std::set<std::string> out;
    for (const auto& pattern : lex.patterns().patterns) {
        for (const auto& e : pattern.elements) {
            if (!e.is_slot && !e.literal.empty()) out.insert(e.literal.front());
        }
    }
    return out;
}

std::vector<std::string> cut_filler(std::vector<std::string> tokens, const std::set<std::string>& prepositions,
                                    const Lexicons& lex) {
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        bool breaker = kFillerBreakers.contains(tokens[i]) || prepositions.contains(tokens[i]) ||
                       (!lex.is_stop_word(tokens[i]) && is_verb_only(lex.lemmatize(tokens[i]), lex));
        if (breaker) {
            tokens.resize(i);
            break;
        }
    }
    return tokens;
}

bool literal_at(const std::vector<std::string>& words, std::size_t pos, const std::vector<std::string>& literal) {
    if (pos + literal.size() > words.size()) return false;
    for (std::size_t k = 0; k < literal.size(); ++k) {
        if (words[pos + k] != literal[k]) return false;
    }
    return true;
}

struct PatternMatch {
    std::vector<RoleFiller> fillers;
    std::size_t first_literal = 0;  // position of the first literal in the words after the verb
};

// Role fillers when the template matches the words after the verb.
std::optional<PatternMatch> match_pattern(const PhrasePattern& pattern, const std::vector<std::string>& rest,
                                          const std::set<std::string>& prepositions, const Lexicons& lex) {
    PatternMatch match;
    match.first_literal = rest.size();
    if (pattern.elements.empty()) {
        if (!normalize_phrase(rest, lex).empty()) return std::nullopt;
        return match;
    }
    std::size_t pos = 0;
    const auto& elems = pattern.elements;
    for (std::size_t k = 0; k < elems.size(); ++k) {
        if (!elems[k].is_slot) continue;
        std::size_t end = rest.size();
        std::size_t next = rest.size();
        if (k + 1 < elems.size()) {
            const auto& literal = elems[k + 1].literal;
            std::optional<std::size_t> found;
            for (std::size_t j = pos + 1; j + literal.size() <= rest.size(); ++j) {
                if (literal_at(rest, j, literal)) {
                    found = j;
                    break;
                }
            }
            if (!found) return std::nullopt;
            end = *found;
            next = *found + literal.size();
            match.first_literal = std::min(match.first_literal, *found);
        }
        if (end <= pos) return std::nullopt;
        std::vector<std::string> span(rest.begin() + static_cast<std::ptrdiff_t>(pos),
                                      rest.begin() + static_cast<std::ptrdiff_t>(end));
        auto phrase = normalize_phrase(cut_filler(std::move(span), prepositions, lex), lex);
        if (phrase.empty()) return std::nullopt;
        match.fillers.push_back({elems[k].role, std::move(phrase)});
        pos = next;
    }
    return match;
}

}  // namespace

std::string FunctionalityExpression::canonical_key() const {
    std::string key = verb;
    for (const auto& r : roles) key += " | " + r.concept_phrase;
    return key;
}

std::string normalize_phrase(std::vector<std::string> tokens, const Lexicons& lex) {
    std::erase_if(tokens, [](const std::string& t) { return Lexicons::is_determiner(t); });
    for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
        if (tokens[i] == "of") {
            std::vector<std::string> inverted(tokens.begin() + static_cast<std::ptrdiff_t>(i) + 1, tokens.end());
            inverted.insert(inverted.end(), tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(i));
            tokens = std::move(inverted);
            break;
        }
    }
    std::size_t start = 0;
    while (start < tokens.size() && lex.is_stop_word(tokens[start])) ++start;
    std::vector<std::string> out;
    for (std::size_t i = start; i < tokens.size(); ++i) out.push_back(lex.lemmatize(tokens[i]));
    return join(out);
}

std::string name_to_description(std::string_view method_name, const Lexicons& lex) {
    auto tokens = tokenize_identifier(method_name);
    if (tokens.empty()) return "get";
    const auto& first = tokens.front();
    auto lemma = lex.lemmatize(first);
    if (lex.is_verb(lemma)) return join(tokens);
    if (first == "to") return "convert " + join(tokens);
    // Predicate prefixes read like adjectives: isEmpty, hasNext, canRead.
    if (first == "is") {
        tokens.front() = "check";
        return join(tokens);
    }
    if (first == "has" || first == "can" || first == "should") return "check " + join(tokens);
    auto flags = lex.pos(lemma);
    if ((flags & pos_adjective) != 0 && (flags & pos_noun) == 0) return "check " + join(tokens);
    return "get " + join(tokens);
}

std::optional<FunctionalityExpression> extract_expression(std::string_view sentence, const Lexicons& lex) {
    auto clauses = split_clauses(sentence);
    if (clauses.empty()) return std::nullopt;
    const auto& words = clauses.front();

    std::optional<std::size_t> verb_at;
    std::string verb;
    for (std::size_t i = 0; i < words.size(); ++i) {
        auto lemma = lex.lemmatize(words[i]);
        if (lex.is_verb(lemma)) {
            verb_at = i;
            verb = std::move(lemma);
            break;
        }
    }
    if (!verb_at) return std::nullopt;
    std::vector<std::string> rest(words.begin() + static_cast<std::ptrdiff_t>(*verb_at) + 1, words.end());

    // Most slots wins; among equals the template whose first literal comes earliest,
    // then the earlier template in the file.
    auto prepositions = template_prepositions(lex);
    const PhrasePattern* best = nullptr;
    std::optional<PatternMatch> best_match;
    for (const auto& pattern : lex.patterns().patterns) {
        auto m = match_pattern(pattern, rest, prepositions, lex);
        if (!m) continue;
        bool wins = !best || pattern.slot_count() > best->slot_count() ||
                    (pattern.slot_count() == best->slot_count() && m->first_literal < best_match->first_literal);
        if (wins) {
            best = &pattern;
            best_match = std::move(m);
        }
    }
    if (!best) return std::nullopt;
    return FunctionalityExpression{verb, *lex.verbs().category_of(verb), best->text, std::move(best_match->fillers)};
}

FunctionalityExpression method_functionality(std::string_view method_name, const std::optional<std::string>& description,
                                             const Lexicons& lex) {
    if (description) {
        if (auto expr = extract_expression(first_sentence(*description), lex)) return *expr;
    }
    if (auto expr = extract_expression(name_to_description(method_name, lex), lex)) return *expr;
    // Unreachable with a validated lexicon: the fallback description always starts with a known verb.
    return FunctionalityExpression{"get", *lex.verbs().category_of("get"), "V", {}};
}

EntityId attach_functionality(KnowledgeGraph& kg, EntityId method, const FunctionalityExpression& expr) {
    auto expr_id = kg.add_entity(EntityKind::FunctionalityExpression, expr.canonical_key());
    auto verb_id = kg.add_entity(EntityKind::FunctionalityVerb, expr.verb);
    auto category_id = kg.add_entity(EntityKind::FunctionalityCategory, expr.category);
    auto pattern_id = kg.add_entity(EntityKind::PhrasePattern, expr.pattern);
    kg.add_triple(method, RelationKind::HasFunctionality, expr_id);
    kg.add_triple(expr_id, RelationKind::HasVerb, verb_id);
    kg.add_triple(expr_id, RelationKind::InCategory, category_id);
    kg.add_triple(expr_id, RelationKind::HasPattern, pattern_id);
    kg.add_triple(verb_id, RelationKind::InCategory, category_id);
    for (const auto& role : expr.roles) {
        auto concept_id = kg.add_entity(EntityKind::Concept, role.concept_phrase);
        kg.add_triple(expr_id, RelationKind::InvolveConcept, concept_id);
    }
    return expr_id;
}

std::size_t extract_functionality(KnowledgeGraph& kg, const DescriptionTable& descriptions, const Lexicons& lex) {
    auto before = kg.triple_count();
    // Copy: attaching adds entities, which may reallocate the kind index.
    std::vector<EntityId> methods(kg.entities_of_kind(EntityKind::Method).begin(),
                                  kg.entities_of_kind(EntityKind::Method).end());
    for (auto m : methods) {
        std::optional<std::string> description;
        if (auto it = descriptions.find(m); it != descriptions.end()) description = it->second;
        auto expr = method_functionality(method_simple_name(kg.entity(m).name), description, lex);
        attach_functionality(kg, m, expr);
    }
    return kg.triple_count() - before;
}

}  // namespace apikg
