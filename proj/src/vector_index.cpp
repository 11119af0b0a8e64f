#include "apikg/vector_index.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "apikg/error.hpp"

namespace apikg {

namespace {

double norm_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double normalized_cosine(double dot_ab, double na, double nb) {
    double c = dot_ab / (na * nb);
    c = std::clamp(c, -1.0, 1.0);
    return (c + 1.0) / 2.0;
}

bool better(const ScoredEntity& a, const ScoredEntity& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    return a.id < b.id;
}

}  // namespace

double sim_kg(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorCategory::invalid_argument, "sim_kg: vectors differ in length");
    double na = norm_of(a), nb = norm_of(b);
    if (na == 0.0 || nb == 0.0) throw Error(ErrorCategory::numeric, "sim_kg: zero vector");
    return normalized_cosine(dot(a, b), na, nb);
}

VectorIndex VectorIndex::from_model(const KnowledgeGraph& kg, const EmbeddingModel& model) {
    if (model.entity_count() != kg.entity_count()) {
        throw Error(ErrorCategory::invalid_argument, "model and graph disagree on entity count");
    }
    VectorIndex index(model.width());
    for (const auto& e : kg.entities()) index.add({e.id, e.kind, e.library}, model.entity(e.id));
    return index;
}

void VectorIndex::add(const IndexRow& row, std::span<const double> v) {
    if (v.size() != width_) {
        throw Error(ErrorCategory::invalid_argument, "index vector has length " + std::to_string(v.size()) +
                                                         ", expected " + std::to_string(width_));
    }
    if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
        throw Error(ErrorCategory::numeric, "index vector for entity " + std::to_string(index_of(row.id)) +
                                                " has a non-finite entry");
    }
    double n = norm_of(v);
    if (n == 0.0) {
        throw Error(ErrorCategory::numeric, "index vector for entity " + std::to_string(index_of(row.id)) + " is zero");
    }
    if (slot_of(row.id)) {
        throw Error(ErrorCategory::invalid_argument, "entity " + std::to_string(index_of(row.id)) + " indexed twice");
    }
    if (slot_by_id_.size() <= index_of(row.id)) slot_by_id_.resize(index_of(row.id) + 1, 0);
    slot_by_id_[index_of(row.id)] = rows_.size() + 1;
    rows_.push_back(row);
    data_.insert(data_.end(), v.begin(), v.end());
    norms_.push_back(n);
}

std::span<const double> VectorIndex::vector_at(std::size_t slot) const {
    return std::span<const double>(data_).subspan(slot * width_, width_);
}

std::optional<std::size_t> VectorIndex::slot_of(EntityId id) const {
    if (index_of(id) >= slot_by_id_.size() || slot_by_id_[index_of(id)] == 0) return std::nullopt;
    return slot_by_id_[index_of(id)] - 1;
}

std::span<const double> VectorIndex::vector_of(EntityId id) const {
    auto slot = slot_of(id);
    if (!slot) throw Error(ErrorCategory::not_found, "entity " + std::to_string(index_of(id)) + " is not indexed");
    return vector_at(*slot);
}

std::vector<ScoredEntity> VectorIndex::top_k(std::span<const double> query, std::size_t k,
                                             const IndexFilter& filter) const {
    if (k == 0) throw Error(ErrorCategory::invalid_argument, "top_k: k must be at least 1");
    if (query.size() != width_) throw Error(ErrorCategory::invalid_argument, "top_k: query length mismatch");
    double nq = norm_of(query);
    if (nq == 0.0) throw Error(ErrorCategory::numeric, "top_k: zero query vector");

    std::vector<ScoredEntity> heap;  // min-heap on `better`, worst on top
    heap.reserve(k + 1);
    auto worse_first = [](const ScoredEntity& a, const ScoredEntity& b) { return better(a, b); };
    for (std::size_t slot = 0; slot < rows_.size(); ++slot) {
        const auto& row = rows_[slot];
        if (filter.kind && row.kind != *filter.kind) continue;
        if (filter.exclude_library && row.library == filter.exclude_library) continue;
        if (filter.restrict_library && row.library != filter.restrict_library) continue;
        ScoredEntity cand{row.id, normalized_cosine(dot(query, vector_at(slot)), nq, norms_[slot])};
        if (heap.size() < k) {
            heap.push_back(cand);
            std::push_heap(heap.begin(), heap.end(), worse_first);
        } else if (better(cand, heap.front())) {
            std::pop_heap(heap.begin(), heap.end(), worse_first);
            heap.back() = cand;
            std::push_heap(heap.begin(), heap.end(), worse_first);
        }
    }
    std::sort(heap.begin(), heap.end(), better);
    return heap;
}

void write_index_sidecar(const VectorIndex& index, std::ostream& out) {
    for (const auto& row : index.rows()) {
        out << index_of(row.id) << '\t' << to_string(row.kind) << '\t';
        if (row.library) {
            out << index_of(*row.library);
        } else {
            out << '-';
        }
        out << '\n';
    }
}

std::vector<IndexRow> read_index_sidecar(std::istream& in) {
    std::vector<IndexRow> rows;
    std::string line;
    std::size_t line_no = 0;
    auto parse_id = [&](const std::string& s) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty()) {
            throw Error(ErrorCategory::parse, "sidecar line " + std::to_string(line_no) + ": bad id '" + s + "'");
        }
        return entity_id(v);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto a = line.find('\t');
        auto b = a == std::string::npos ? a : line.find('\t', a + 1);
        if (b == std::string::npos) {
            throw Error(ErrorCategory::parse, "sidecar line " + std::to_string(line_no) + ": expected 3 fields");
        }
        IndexRow row;
        row.id = parse_id(line.substr(0, a));
        auto kind = parse_entity_kind(std::string_view(line).substr(a + 1, b - a - 1));
        if (!kind) throw Error(ErrorCategory::parse, "sidecar line " + std::to_string(line_no) + ": unknown kind");
        row.kind = *kind;
        auto lib = line.substr(b + 1);
        if (lib != "-") row.library = parse_id(lib);
        rows.push_back(row);
    }
    return rows;
}

VectorIndex index_from_sidecar(const KnowledgeGraph& kg, const EmbeddingModel& model, std::span<const IndexRow> rows) {
    VectorIndex index(model.width());
    for (const auto& row : rows) {
        if (!kg.has_entity(row.id)) {
            throw Error(ErrorCategory::not_found, "sidecar entity " + std::to_string(index_of(row.id)) + " not in graph");
        }
        const auto& e = kg.entity(row.id);
        if (e.kind != row.kind || e.library != row.library) {
            throw Error(ErrorCategory::schema, "sidecar row for '" + e.name + "' disagrees with the graph");
        }
        index.add(row, model.entity(row.id));
    }
    return index;
}

}  // namespace apikg
