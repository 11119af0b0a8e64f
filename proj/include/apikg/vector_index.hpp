#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "apikg/embedding.hpp"
#include "apikg/kg.hpp"

namespace apikg {

/// (cos(a, b) + 1) / 2. Throws on a length mismatch or an all-zero vector.
double sim_kg(std::span<const double> a, std::span<const double> b);

struct IndexFilter {
    std::optional<EntityKind> kind;
    std::optional<EntityId> exclude_library;
    std::optional<EntityId> restrict_library;
};

struct ScoredEntity {
    EntityId id{};
    double sim = 0.0;
    friend bool operator==(const ScoredEntity&, const ScoredEntity&) = default;
};

struct IndexRow {
    EntityId id{};
    EntityKind kind{};
    std::optional<EntityId> library;
};

/// Exact cosine top-k over a contiguous block of equal-length vectors.
class VectorIndex {
public:
    explicit VectorIndex(std::size_t width) : width_(width) {}

    /// Flattened model rows for every entity of the graph.
    static VectorIndex from_model(const KnowledgeGraph& kg, const EmbeddingModel& model);

    /// Rejects a wrong length, non-finite entries and all-zero vectors.
    void add(const IndexRow& row, std::span<const double> v);

    std::size_t size() const { return rows_.size(); }
    std::size_t width() const { return width_; }
    std::span<const IndexRow> rows() const { return rows_; }
    std::span<const double> vector_at(std::size_t slot) const;
    std::optional<std::size_t> slot_of(EntityId id) const;
    std::span<const double> vector_of(EntityId id) const;

    /// Descending similarity, ties by ascending id. Fewer than k when the
    /// filter leaves fewer entries.
    std::vector<ScoredEntity> top_k(std::span<const double> query, std::size_t k, const IndexFilter& filter = {}) const;

private:
    std::size_t width_;
    std::vector<IndexRow> rows_;
    std::vector<double> data_;
    std::vector<double> norms_;
    std::vector<std::size_t> slot_by_id_;  // index_of(id) -> slot + 1, 0 when absent
};

/// Sidecar TSV: `id<TAB>kind<TAB>library_id` (`-` when none), one row per entry.
void write_index_sidecar(const VectorIndex& index, std::ostream& out);
std::vector<IndexRow> read_index_sidecar(std::istream& in);

/// Rebuilds an index from a model plus sidecar rows, checking them against the graph.
VectorIndex index_from_sidecar(const KnowledgeGraph& kg, const EmbeddingModel& model, std::span<const IndexRow> rows);

}  // namespace apikg
