#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "apikg/corpus.hpp"
#include "apikg/embedding.hpp"
#include "apikg/kg.hpp"
#include "apikg/lexicon.hpp"
#include "apikg/pipeline.hpp"

namespace apikg::fixtures {

const Lexicons& shipped_lexicons();
std::filesystem::path fixture_path(const std::string& name);
std::filesystem::path cli_path();
std::string read_file(const std::filesystem::path& path);

// Two libraries with the same shape: packages, classes and methods whose
// functionality and concept neighbors are drawn once and reused for both.
// Methods mostly follow the signature of their functionality.
// Roughly 200 entities and 800 triples.
KnowledgeGraph synthetic_isomorphic_kg(std::uint64_t seed);

// Four libraries of collection-like classes built through the real pipeline.
DocCorpus four_library_corpus();

// A valid random graph over every relation kind, for round-trip properties.
KnowledgeGraph random_kg(std::uint64_t seed, std::size_t elements_per_kind);

// Small graph with hand-set 2-d vectors (TransE rows, so no complex halves).
struct HandEmbedded {
    KnowledgeGraph kg;
    EmbeddingModel model{ModelKind::transe, 2, 0};
    EntityId source{};
    EntityId candidate{};  // has every neighbor kind
    EntityId bare{};       // parameterless void method, no class concept
};
HandEmbedded hand_embedded_fixture();

// Full pipeline over a JSON corpus in tests/fixtures.
BuildResult build_fixture(const std::string& name);

std::set<Triple> triples_of(const KnowledgeGraph& kg, std::initializer_list<RelationKind> rels);

// Pairwise check of every concept pair against the four naming rules.
std::set<Triple> concept_relation_oracle(const KnowledgeGraph& kg);

// Nested-loop join over the whole triple list for the four method rules.
std::set<Triple> method_relation_oracle(const KnowledgeGraph& kg);

// Largest relative error, per row, between the analytic logistic-loss
// gradient and central finite differences on one random instance.
double gradient_check_error(ModelKind kind, std::size_t dim, std::uint64_t seed);

// Runs a command line, capturing stdout; returns the exit status.
int run_command(const std::string& command, std::string& out);

}  // namespace apikg::fixtures
