#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apikg/embedding.hpp"
#include "apikg/kg.hpp"
#include "apikg/vector_index.hpp"

namespace apikg {

struct Weights {
    double m = 0.05;
    double func = 0.95;
    double obj = 0.8;
    double it = 0.25;
    double iv = 0.05;
    double ot = 0.05;
    double neig = 0.95;

    std::array<double, 7> as_array() const { return {m, func, obj, it, iv, ot, neig}; }
    double sum() const;
    void validate() const;
    /// "m,func,obj,it,iv,ot,neig"
    static Weights parse(std::string_view csv);
};

struct SimilarityParts {
    double m = 0.0;
    double func = 0.0;
    double obj = 0.0;
    double it = 0.0;
    double iv = 0.0;
    double ot = 0.0;
    double neig = 0.0;

    std::array<double, 7> as_array() const { return {m, func, obj, it, iv, ot, neig}; }
    friend bool operator==(const SimilarityParts&, const SimilarityParts&) = default;
};

/// Weighted sum of the seven parts, accumulated in the fixed order m..neig.
double weighted_total(const SimilarityParts& parts, const Weights& w);

using Vector = std::vector<double>;

struct NeighborProfile {
    EntityId method{};
    Vector method_vec;
    std::optional<Vector> obj_vec;       // OperationOf concepts
    std::vector<Vector> func_vecs;       // one per HasFunctionality expression
    std::optional<Vector> in_type_mean;  // HasInputType concepts
    std::optional<Vector> in_val_mean;   // HasInputValue concepts
    std::optional<Vector> out_type_vec;  // HasOutputType concepts
    Vector neig_vec;                     // mean of the present components
};

/// Collects the method's concept and functionality neighbors. Several
/// concepts behind one relation are averaged elementwise.
NeighborProfile build_profile(const KnowledgeGraph& kg, const EmbeddingModel& model, EntityId method);

/// Parts for a source/candidate pair. `sim_m` is the retrieval similarity.
/// A component missing on either side scores 0.
SimilarityParts compare_profiles(const NeighborProfile& source, const NeighborProfile& candidate, double sim_m);

struct Recommendation {
    EntityId method{};
    std::optional<EntityId> library;
    double total = 0.0;
    SimilarityParts parts;
};

/// Keeps at most `per_library` entries per library, preserving order.
std::vector<Recommendation> diversity_cap(std::span<const Recommendation> ranked, std::size_t per_library = 3);

/// Scope of candidate retrieval: every other library, or one target library.
struct Scope {
    std::optional<EntityId> target_library;
    static Scope all() { return {}; }
    static Scope target(EntityId library) { return {library}; }
};

struct Query {
    EntityId source{};
    Scope scope;
    std::size_t k_retrieve = 100;
    std::size_t k_return = 10;
    Weights weights;
};

class Recommender {
public:
    Recommender(const KnowledgeGraph& kg, const EmbeddingModel& model, const VectorIndex& index);

    /// Top-k Method vectors by sim_kg; scope all leaves out the source's library.
    std::vector<ScoredEntity> retrieve_candidates(EntityId source, std::size_t k, const Scope& scope) const;

    /// Descending total, ties by ascending method id.
    std::vector<Recommendation> rerank(EntityId source, std::span<const ScoredEntity> candidates,
                                       const Weights& weights) const;

    /// retrieve -> rerank -> diversity cap (scope all only) -> truncate.
    std::vector<Recommendation> recommend(const Query& query) const;

private:
    void check_source(EntityId source) const;

    const KnowledgeGraph& kg_;
    const EmbeddingModel& model_;
    const VectorIndex& index_;
};

/// Method entity by qualified name. An unknown name raises not_found listing
/// the closest method names.
EntityId resolve_method(const KnowledgeGraph& kg, std::string_view qualified_name);
std::optional<EntityId> find_method(const KnowledgeGraph& kg, std::string_view qualified_name);
/// Up to `limit` method names by edit distance, closest first.
std::vector<std::string> nearest_method_names(const KnowledgeGraph& kg, std::string_view name, std::size_t limit = 3);

EntityId resolve_library(const KnowledgeGraph& kg, std::string_view name);

/// CSV `rank,method,library,total,m,func,obj,it,iv,ot,neig` with a header row.
void write_recommendations(const KnowledgeGraph& kg, std::span<const Recommendation> recs, std::ostream& out);

}  // namespace apikg
