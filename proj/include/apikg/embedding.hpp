#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "apikg/kg.hpp"

namespace apikg {

enum class ModelKind { complex, transe, distmult };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view token);

struct TrainConfig {
    std::size_t dim = 64;
    std::size_t epochs = 100;
    double learning_rate = 0.08;
    std::size_t negatives_per_positive = 5;
    std::size_t batch_size = 1;
    std::uint64_t seed = 42;
    ModelKind model_kind = ModelKind::complex;
    double l2 = 0.0;

    void validate() const;
};

/// Entity and relation embeddings. Rows are `width()` reals: `dim` for the
/// real-valued models, `2 * dim` for ComplEx stored as [re_0..re_d-1, im_0..im_d-1],
/// which is also the flattened vector used for cosine similarity.
class EmbeddingModel {
public:
    EmbeddingModel(ModelKind kind, std::size_t dim, std::size_t entity_count);

    ModelKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    std::size_t width() const { return kind_ == ModelKind::complex ? 2 * dim_ : dim_; }
    std::size_t entity_count() const { return entity_count_; }

    std::span<double> entity(EntityId id);
    std::span<const double> entity(EntityId id) const;
    std::span<double> relation(RelationKind rel);
    std::span<const double> relation(RelationKind rel) const;

    std::span<double> entity_data() { return entities_; }
    std::span<double> relation_data() { return relations_; }

    friend bool operator==(const EmbeddingModel&, const EmbeddingModel&) = default;

private:
    ModelKind kind_;
    std::size_t dim_;
    std::size_t entity_count_;
    std::vector<double> entities_;
    std::vector<double> relations_;
};

/// ComplEx: Re(sum h*r*conj(t)); DistMult: sum h*r*t; TransE: -||h + r - t||_2.
double score_vectors(ModelKind kind, std::span<const double> head, std::span<const double> rel,
                     std::span<const double> tail);
double score(const EmbeddingModel& model, EntityId head, RelationKind rel, EntityId tail);

/// Logistic loss log(1 + exp(-label * score)) for label +1 / -1. Adds the
/// gradient with respect to each row into the corresponding output span.
double logistic_loss_gradient(ModelKind kind, std::span<const double> head, std::span<const double> rel,
                              std::span<const double> tail, double label, std::span<double> grad_head,
                              std::span<double> grad_rel, std::span<double> grad_tail);
double logistic_loss(ModelKind kind, std::span<const double> head, std::span<const double> rel,
                     std::span<const double> tail, double label);

struct TrainResult {
    EmbeddingModel model;
    std::vector<double> loss_trace;  // mean loss per epoch
};

/// Seeded uniform(-0.5/sqrt(d), 0.5/sqrt(d)) initialization, entities then relations.
EmbeddingModel initial_model(const KnowledgeGraph& kg, const TrainConfig& config);

/// SGD on the logistic loss with kind-constrained negative sampling.
TrainResult train(const KnowledgeGraph& kg, const TrainConfig& config);

struct LinkPredictionReport {
    double mrr = 0.0;
    double hits_at_1 = 0.0;
    double hits_at_3 = 0.0;
    double hits_at_10 = 0.0;
    // Expected MRR of a uniformly random ranking over the same filtered candidate sets.
    double random_baseline_mrr = 0.0;
    std::size_t count = 0;
};

using TripleScorer = std::function<double(EntityId, RelationKind, EntityId)>;

/// Filtered tail prediction: each held-out tail is ranked against every entity
/// of a legal tail kind, minus other known true tails. Ties rank lower ids first.
LinkPredictionReport eval_link_prediction(const TripleScorer& scorer, std::span<const Triple> held_out,
                                          const KnowledgeGraph& kg);
LinkPredictionReport eval_link_prediction(const EmbeddingModel& model, std::span<const Triple> held_out,
                                          const KnowledgeGraph& kg);

struct HoldoutSplit {
    KnowledgeGraph train;  // same entities and ids, remaining triples
    std::vector<Triple> held_out;
};

HoldoutSplit holdout_split(const KnowledgeGraph& kg, double fraction, std::uint64_t seed);

/// Header `model_kind dim entity_count relation_count`, then
/// `name<TAB>kind<TAB>v1 v2 ...` per entity (ComplEx as re1 im1 re2 im2 ...),
/// then one `Relation`-kinded line per relation kind.
void save_model(const EmbeddingModel& model, const KnowledgeGraph& kg, std::ostream& out);
EmbeddingModel load_model(std::istream& in, const KnowledgeGraph& kg);

/// CSV `epoch,mean_loss`, epochs numbered from 1.
void write_loss_trace(std::span<const double> trace, std::ostream& out);

}  // namespace apikg
