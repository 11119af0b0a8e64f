#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apikg/corpus.hpp"
#include "apikg/kg.hpp"
#include "apikg/lexicon.hpp"

namespace apikg {

/// Concept phrase for an element's short name: tokenized, lowercased,
/// lemmatized, leading stop words stripped. Empty when nothing survives.
std::optional<std::string> name_concept(std::string_view short_name, const Lexicons& lex);

/// Maximal runs of (determiner | adjective | noun)+ that end in a noun,
/// normalized to concept phrases. Unknown words count as nouns.
std::vector<std::string> extract_noun_phrases(std::string_view text, const Lexicons& lex);

/// Package/Class/Interface and ReturnValue (via its type) -> InstanceClassOfConcept;
/// Parameter/Field/AbstractParameter -> InstanceParameterOfConcept.
std::size_t element_name_concepts(KnowledgeGraph& kg, const Lexicons& lex);

/// <concept, MentionedInDescription, element> for every noun phrase of every description.
std::size_t description_concepts(KnowledgeGraph& kg, const DescriptionTable& descriptions, const Lexicons& lex);

/// DerivedFrom, FacetOf, IsA and SameAs between concepts, judged on names over
/// the current concept set.
std::size_t concept_name_relations(KnowledgeGraph& kg);

/// Suffixes that make a derived concept name ("build" + "er").
inline constexpr std::string_view kDerivationSuffixes[] = {"er", "or", "r", "ing", "ion", "tion", "ed"};

/// Method-to-concept shortcuts: OperationOf, HasInputValue, HasInputType, HasOutputType.
std::size_t complete_method_relations(KnowledgeGraph& kg);

/// All four concept-completion passes in order.
std::size_t complete_concepts(KnowledgeGraph& kg, const DescriptionTable& descriptions, const Lexicons& lex);

}  // namespace apikg
