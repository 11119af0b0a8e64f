#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apikg/corpus.hpp"
#include "apikg/kg.hpp"
#include "apikg/lexicon.hpp"

namespace apikg {

struct RoleFiller {
    Role role;
    std::string concept_phrase;

    friend bool operator==(const RoleFiller&, const RoleFiller&) = default;
};

/// Standardized form of a method's functionality description.
struct FunctionalityExpression {
    std::string verb;
    std::string category;
    std::string pattern;
    std::vector<RoleFiller> roles;

    /// "verb | concept1 | concept2 ..."
    std::string canonical_key() const;

    friend bool operator==(const FunctionalityExpression&, const FunctionalityExpression&) = default;
};

/// Normalizes a role filler or noun phrase: drops determiners, rewrites
/// "X of Y" as "Y X", strips leading stop words and lemmatizes every token.
/// Returns an empty string when nothing is left.
std::string normalize_phrase(std::vector<std::string> tokens, const Lexicons& lex);

/// Turns a method name into a pseudo description, adding a default verb when
/// the name does not start with one ("length" -> "get length",
/// "toString" -> "convert to string", "empty" -> "check empty").
std::string name_to_description(std::string_view method_name, const Lexicons& lex);

/// Lexicon + pattern matching over one sentence. Empty when no known verb occurs.
std::optional<FunctionalityExpression> extract_expression(std::string_view sentence, const Lexicons& lex);

/// Description first sentence when it yields an expression, otherwise the name.
FunctionalityExpression method_functionality(std::string_view method_name, const std::optional<std::string>& description,
                                             const Lexicons& lex);

/// Links `method` to the shared expression entity (keyed by canonical key) and
/// the expression to its verb, category, pattern and concepts.
EntityId attach_functionality(KnowledgeGraph& kg, EntityId method, const FunctionalityExpression& expr);

/// Runs method_functionality + attach_functionality over every Method entity.
/// Returns the number of triples added.
std::size_t extract_functionality(KnowledgeGraph& kg, const DescriptionTable& descriptions, const Lexicons& lex);

}  // namespace apikg
