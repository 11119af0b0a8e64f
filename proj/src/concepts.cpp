#include "apikg/concepts.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "apikg/functionality.hpp"
#include "apikg/text.hpp"

namespace apikg {

namespace {

enum class ChunkTag { determiner, adjective, noun, other };

ChunkTag tag_word(const std::string& word, const std::string& lemma, const Lexicons& lex) {
    if (Lexicons::is_determiner(word)) return ChunkTag::determiner;
    if (lex.is_stop_word(word) || lex.is_stop_word(lemma)) return ChunkTag::other;
    auto flags = lex.pos(lemma);
    if (flags & pos_noun) return ChunkTag::noun;
    if (flags & pos_adjective) return ChunkTag::adjective;
    if (flags & pos_verb) return ChunkTag::other;
    if (std::all_of(word.begin(), word.end(), [](char c) { return c >= '0' && c <= '9'; })) return ChunkTag::other;
    return ChunkTag::noun;
}

std::vector<std::string> split_spaces(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto pos = s.find(' ', start);
        if (pos == std::string::npos) pos = s.size();
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string without_spaces(std::string s) {
    std::erase(s, ' ');
    return s;
}

bool starts_with_vowel(std::string_view s) {
    return !s.empty() && (s[0] == 'a' || s[0] == 'e' || s[0] == 'i' || s[0] == 'o' || s[0] == 'u');
}

struct ElementSnapshot {
    EntityId id;
    EntityKind kind;
    std::string name;
};

std::vector<ElementSnapshot> snapshot(const KnowledgeGraph& kg, std::initializer_list<EntityKind> kinds) {
    std::vector<ElementSnapshot> out;
    for (auto kind : kinds) {
        for (auto id : kg.entities_of_kind(kind)) out.push_back({id, kind, kg.entity(id).name});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

bool link_concept(KnowledgeGraph& kg, EntityId element, RelationKind rel, const std::optional<std::string>& phrase) {
    if (!phrase) return false;
    auto concept_id = kg.add_entity(EntityKind::Concept, *phrase);
    return kg.add_triple(element, rel, concept_id);
}

}  // namespace

std::optional<std::string> name_concept(std::string_view short_name, const Lexicons& lex) {
    auto phrase = normalize_phrase(tokenize_identifier(short_name), lex);
    if (phrase.empty()) return std::nullopt;
    return phrase;
}

std::vector<std::string> extract_noun_phrases(std::string_view text, const Lexicons& lex) {
    std::vector<std::string> phrases;
    std::set<std::string> seen;
    auto emit = [&](std::vector<std::string> words, const std::vector<ChunkTag>& tags) {
        while (!tags.empty() && words.size() > 0 && tags[words.size() - 1] != ChunkTag::noun) words.pop_back();
        if (words.empty()) return;
        auto phrase = normalize_phrase(std::move(words), lex);
        if (!phrase.empty() && seen.insert(phrase).second) phrases.push_back(std::move(phrase));
    };
    for (const auto& clause : split_clauses(text)) {
        std::vector<std::string> words;
        std::vector<ChunkTag> tags;
        for (const auto& word : clause) {
            // "number of elements" stays one chunk; normalization turns it into "element number".
            if (word == "of" && !tags.empty() && tags.back() == ChunkTag::noun &&
                std::find(words.begin(), words.end(), "of") == words.end()) {
                words.push_back(word);
                tags.push_back(ChunkTag::other);
                continue;
            }
            auto tag = tag_word(word, lex.lemmatize(word), lex);
            if (tag == ChunkTag::other) {
                emit(std::move(words), tags);
                words.clear();
                tags.clear();
                continue;
            }
            words.push_back(word);
            tags.push_back(tag);
        }
        emit(std::move(words), tags);
    }
    return phrases;
}

std::size_t element_name_concepts(KnowledgeGraph& kg, const Lexicons& lex) {
    auto before = kg.triple_count();
    auto elements = snapshot(kg, {EntityKind::Package, EntityKind::Class, EntityKind::Interface, EntityKind::ReturnValue,
                                  EntityKind::Parameter, EntityKind::Field, EntityKind::AbstractParameter});
    for (const auto& e : elements) {
        switch (e.kind) {
        case EntityKind::Package:
            link_concept(kg, e.id, RelationKind::InstanceClassOfConcept, name_concept(last_segment(e.name), lex));
            break;
        case EntityKind::Class:
        case EntityKind::Interface:
            link_concept(kg, e.id, RelationKind::InstanceClassOfConcept, name_concept(short_type_name(e.name), lex));
            break;
        case EntityKind::ReturnValue:
            for (auto type : kg.neighbors(e.id, RelationKind::HasReturnValueType, Direction::out)) {
                link_concept(kg, e.id, RelationKind::InstanceClassOfConcept,
                             name_concept(short_type_name(kg.entity(type).name), lex));
            }
            break;
        case EntityKind::Parameter:
        case EntityKind::Field:
            link_concept(kg, e.id, RelationKind::InstanceParameterOfConcept, name_concept(last_segment(e.name), lex));
            break;
        case EntityKind::AbstractParameter:
            link_concept(kg, e.id, RelationKind::InstanceParameterOfConcept,
                         name_concept(e.name.substr(0, e.name.find(':')), lex));
            break;
        default:
            break;
        }
    }
    return kg.triple_count() - before;
}

std::size_t description_concepts(KnowledgeGraph& kg, const DescriptionTable& descriptions, const Lexicons& lex) {
    auto before = kg.triple_count();
    for (const auto& [element, text] : descriptions) {
        for (const auto& phrase : extract_noun_phrases(text, lex)) {
            auto concept_id = kg.add_entity(EntityKind::Concept, phrase);
            kg.add_triple(concept_id, RelationKind::MentionedInDescription, element);
        }
    }
    return kg.triple_count() - before;
}

std::size_t concept_name_relations(KnowledgeGraph& kg) {
    auto before = kg.triple_count();
    auto concepts = snapshot(kg, {EntityKind::Concept});
    std::unordered_map<std::string, EntityId> by_name;
    for (const auto& c : concepts) by_name.emplace(c.name, c.id);
    auto lookup = [&](const std::string& name) -> std::optional<EntityId> {
        auto it = by_name.find(name);
        if (it == by_name.end()) return std::nullopt;
        return it->second;
    };

    // Derived names: C1 = C2 + suffix, allowing e-drop and consonant doubling
    // before vowel-initial suffixes.
    for (const auto& c1 : concepts) {
        std::set<EntityId> bases;
        for (auto suffix : kDerivationSuffixes) {
            std::string_view name = c1.name;
            if (name.size() <= suffix.size() || name.substr(name.size() - suffix.size()) != suffix) continue;
            std::string stem(name.substr(0, name.size() - suffix.size()));
            std::vector<std::string> candidates{stem};
            if (starts_with_vowel(suffix)) {
                candidates.push_back(stem + "e");
                if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2]) {
                    candidates.push_back(stem.substr(0, stem.size() - 1));
                }
            }
            for (const auto& c : candidates) {
                if (c.size() < 3 || c == c1.name) continue;
                if (auto id = lookup(c)) bases.insert(*id);
            }
        }
        for (auto base : bases) kg.add_triple(c1.id, RelationKind::DerivedFrom, base);
    }

    // Longest strict token-prefix and token-suffix concepts.
    for (const auto& c2 : concepts) {
        auto tokens = split_spaces(c2.name);
        for (std::size_t len = tokens.size() - 1; len >= 1 && len < tokens.size(); --len) {
            std::vector<std::string> head(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(len));
            if (auto id = lookup(join(head))) {
                kg.add_triple(c2.id, RelationKind::FacetOf, *id);
                break;
            }
        }
        for (std::size_t len = tokens.size() - 1; len >= 1 && len < tokens.size(); --len) {
            std::vector<std::string> tail(tokens.end() - static_cast<std::ptrdiff_t>(len), tokens.end());
            if (auto id = lookup(join(tail))) {
                kg.add_triple(c2.id, RelationKind::IsA, *id);
                break;
            }
        }
    }

    std::map<std::string, std::vector<EntityId>> by_compact;
    for (const auto& c : concepts) by_compact[without_spaces(c.name)].push_back(c.id);
    for (const auto& [key, ids] : by_compact) {
        for (auto a : ids) {
            for (auto b : ids) {
                if (a != b) kg.add_triple(a, RelationKind::SameAs, b);
            }
        }
    }
    return kg.triple_count() - before;
}

std::size_t complete_method_relations(KnowledgeGraph& kg) {
    auto before = kg.triple_count();
    std::vector<EntityId> methods(kg.entities_of_kind(EntityKind::Method).begin(),
                                  kg.entities_of_kind(EntityKind::Method).end());
    auto join_through = [&](EntityId m, RelationKind first, Direction dir, RelationKind second, RelationKind completed) {
        for (auto mid : kg.neighbors(m, first, dir)) {
            for (auto concept_id : kg.neighbors(mid, second, Direction::out)) kg.add_triple(m, completed, concept_id);
        }
    };
    for (auto m : methods) {
        join_through(m, RelationKind::HasMethod, Direction::in, RelationKind::InstanceClassOfConcept,
                     RelationKind::OperationOf);
        join_through(m, RelationKind::HasParameter, Direction::out, RelationKind::InstanceParameterOfConcept,
                     RelationKind::HasInputValue);
        join_through(m, RelationKind::HasParameterType, Direction::out, RelationKind::InstanceClassOfConcept,
                     RelationKind::HasInputType);
        join_through(m, RelationKind::HasReturnValueType, Direction::out, RelationKind::InstanceClassOfConcept,
                     RelationKind::HasOutputType);
    }
    return kg.triple_count() - before;
}

std::size_t complete_concepts(KnowledgeGraph& kg, const DescriptionTable& descriptions, const Lexicons& lex) {
    std::size_t added = element_name_concepts(kg, lex);
    added += description_concepts(kg, descriptions, lex);
    added += concept_name_relations(kg);
    added += complete_method_relations(kg);
    return added;
}

}  // namespace apikg
