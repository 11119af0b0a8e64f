#pragma once

#include <cstddef>

#include "apikg/corpus.hpp"
#include "apikg/kg.hpp"
#include "apikg/lexicon.hpp"

namespace apikg {

struct BuildResult {
    KnowledgeGraph kg;
    DescriptionTable descriptions;
    ConstructionReport skeleton;
    std::size_t functionality_triples = 0;
    std::size_t concept_triples = 0;
};

/// Structure, then functionality, then concept completion. A failing stage is
/// named in the rethrown error.
BuildResult build_knowledge_graph(const DocCorpus& corpus, const Lexicons& lex);

}  // namespace apikg
