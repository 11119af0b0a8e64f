#include "apikg/recommend.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "apikg/error.hpp"
#include "csv.hpp"
#include "number_format.hpp"

namespace apikg {

namespace {

Vector copy_of(std::span<const double> v) { return Vector(v.begin(), v.end()); }

std::optional<Vector> mean_of(const EmbeddingModel& model, const std::vector<EntityId>& ids) {
    if (ids.empty()) return std::nullopt;
    Vector mean(model.width(), 0.0);
    for (auto id : ids) {
        auto v = model.entity(id);
        for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += v[k];
    }
    for (auto& x : mean) x /= static_cast<double>(ids.size());
    return mean;
}

double optional_sim(const std::optional<Vector>& a, const std::optional<Vector>& b) {
    if (!a || !b) return 0.0;
    return sim_kg(*a, *b);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace

double Weights::sum() const {
    double s = 0.0;
    for (double w : as_array()) s += w;
    return s;
}

void Weights::validate() const {
    for (double w : as_array()) {
        if (!std::isfinite(w) || w < 0.0) {
            throw Error(ErrorCategory::invalid_argument, "weights must be finite and non-negative");
        }
    }
}

Weights Weights::parse(std::string_view csv) {
    auto fields = detail::split_csv_line(csv);
    if (!fields || fields->size() != 7) {
        throw Error(ErrorCategory::invalid_argument, "weights need 7 comma-separated values: m,func,obj,it,iv,ot,neig");
    }
    std::array<double, 7> v{};
    for (std::size_t i = 0; i < 7; ++i) {
        auto parsed = detail::parse_double((*fields)[i]);
        if (!parsed) throw Error(ErrorCategory::invalid_argument, "bad weight '" + (*fields)[i] + "'");
        v[i] = *parsed;
    }
    Weights w{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
    w.validate();
    return w;
}

double weighted_total(const SimilarityParts& parts, const Weights& w) {
    auto p = parts.as_array();
    auto ws = w.as_array();
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) total += ws[i] * p[i];
    return total;
}

NeighborProfile build_profile(const KnowledgeGraph& kg, const EmbeddingModel& model, EntityId method) {
    if (!kg.has_entity(method) || kg.entity(method).kind != EntityKind::Method) {
        throw Error(ErrorCategory::invalid_argument, "profile source is not a method");
    }
    NeighborProfile p;
    p.method = method;
    p.method_vec = copy_of(model.entity(method));
    p.obj_vec = mean_of(model, kg.neighbors(method, RelationKind::OperationOf, Direction::out));
    for (auto fe : kg.neighbors(method, RelationKind::HasFunctionality, Direction::out)) {
        p.func_vecs.push_back(copy_of(model.entity(fe)));
    }
    p.in_type_mean = mean_of(model, kg.neighbors(method, RelationKind::HasInputType, Direction::out));
    p.in_val_mean = mean_of(model, kg.neighbors(method, RelationKind::HasInputValue, Direction::out));
    p.out_type_vec = mean_of(model, kg.neighbors(method, RelationKind::HasOutputType, Direction::out));

    // Mean of the present components; several functionality vectors enter as their mean.
    std::vector<const Vector*> parts{&p.method_vec};
    auto func_mean = p.func_vecs.empty()
                         ? std::nullopt
                         : mean_of(model, kg.neighbors(method, RelationKind::HasFunctionality, Direction::out));
    for (const auto* opt : {&p.obj_vec, &func_mean, &p.in_type_mean, &p.in_val_mean, &p.out_type_vec}) {
        if (*opt) parts.push_back(&**opt);
    }
    p.neig_vec.assign(model.width(), 0.0);
    for (const auto* v : parts) {
        for (std::size_t k = 0; k < p.neig_vec.size(); ++k) p.neig_vec[k] += (*v)[k];
    }
    for (auto& x : p.neig_vec) x /= static_cast<double>(parts.size());
    return p;
}

SimilarityParts compare_profiles(const NeighborProfile& s, const NeighborProfile& e, double sim_m) {
    SimilarityParts parts;
    parts.m = sim_m;
    for (const auto& a : s.func_vecs) {
        for (const auto& b : e.func_vecs) parts.func = std::max(parts.func, sim_kg(a, b));
    }
    parts.obj = optional_sim(s.obj_vec, e.obj_vec);
    parts.it = optional_sim(s.in_type_mean, e.in_type_mean);
    parts.iv = optional_sim(s.in_val_mean, e.in_val_mean);
    parts.ot = optional_sim(s.out_type_vec, e.out_type_vec);
    parts.neig = sim_kg(s.neig_vec, e.neig_vec);
    return parts;
}

std::vector<Recommendation> diversity_cap(std::span<const Recommendation> ranked, std::size_t per_library) {
    std::map<std::optional<EntityId>, std::size_t> used;
    std::vector<Recommendation> out;
    for (const auto& r : ranked) {
        if (used[r.library]++ < per_library) out.push_back(r);
    }
    return out;
}

Recommender::Recommender(const KnowledgeGraph& kg, const EmbeddingModel& model, const VectorIndex& index)
    : kg_(kg), model_(model), index_(index) {
    if (model.entity_count() != kg.entity_count()) {
        throw Error(ErrorCategory::invalid_argument, "model and graph disagree on entity count");
    }
    if (index.width() != model.width()) throw Error(ErrorCategory::invalid_argument, "index and model widths differ");
}

void Recommender::check_source(EntityId source) const {
    if (!kg_.has_entity(source)) {
        throw Error(ErrorCategory::not_found, "unknown source entity " + std::to_string(index_of(source)));
    }
    if (kg_.entity(source).kind != EntityKind::Method) {
        throw Error(ErrorCategory::invalid_argument, "source '" + kg_.entity(source).name + "' is not a method");
    }
}

std::vector<ScoredEntity> Recommender::retrieve_candidates(EntityId source, std::size_t k, const Scope& scope) const {
    check_source(source);
    IndexFilter filter;
    filter.kind = EntityKind::Method;
    if (scope.target_library) {
        filter.restrict_library = scope.target_library;
    } else {
        filter.exclude_library = kg_.entity(source).library;
    }
    auto found = index_.top_k(index_.vector_of(source), k + 1, filter);
    std::erase_if(found, [&](const ScoredEntity& s) { return s.id == source; });
    if (found.size() > k) found.resize(k);
    return found;
}

std::vector<Recommendation> Recommender::rerank(EntityId source, std::span<const ScoredEntity> candidates,
                                                const Weights& weights) const {
    weights.validate();
    auto sp = build_profile(kg_, model_, source);
    std::vector<Recommendation> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) {
        auto ep = build_profile(kg_, model_, c.id);
        Recommendation r;
        r.method = c.id;
        r.library = kg_.entity(c.id).library;
        r.parts = compare_profiles(sp, ep, c.sim);
        r.total = weighted_total(r.parts, weights);
        out.push_back(r);
    }
    std::stable_sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
        if (a.total != b.total) return a.total > b.total;
        return a.method < b.method;
    });
    return out;
}

std::vector<Recommendation> Recommender::recommend(const Query& query) const {
    check_source(query.source);
    if (query.k_return == 0) return {};
    if (query.k_retrieve == 0) throw Error(ErrorCategory::invalid_argument, "k_retrieve must be at least 1");
    auto candidates = retrieve_candidates(query.source, query.k_retrieve, query.scope);
    auto ranked = rerank(query.source, candidates, query.weights);
    if (!query.scope.target_library) ranked = diversity_cap(ranked, 3);
    if (ranked.size() > query.k_return) ranked.resize(query.k_return);
    return ranked;
}

std::optional<EntityId> find_method(const KnowledgeGraph& kg, std::string_view qualified_name) {
    auto all = kg.find_all(EntityKind::Method, qualified_name);
    if (all.empty()) return std::nullopt;
    if (all.size() > 1) {
        throw Error(ErrorCategory::invalid_argument,
                    "method name '" + std::string(qualified_name) + "' occurs in several libraries");
    }
    return all.front();
}

std::vector<std::string> nearest_method_names(const KnowledgeGraph& kg, std::string_view name, std::size_t limit) {
    std::vector<std::pair<std::size_t, std::string>> scored;
    for (auto id : kg.entities_of_kind(EntityKind::Method)) {
        const auto& n = kg.entity(id).name;
        scored.emplace_back(edit_distance(name, n), n);
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::string> out;
    for (std::size_t i = 0; i < scored.size() && i < limit; ++i) out.push_back(scored[i].second);
    return out;
}

EntityId resolve_method(const KnowledgeGraph& kg, std::string_view qualified_name) {
    if (auto id = find_method(kg, qualified_name)) return *id;
    std::string msg = "no method named '" + std::string(qualified_name) + "'";
    auto near = nearest_method_names(kg, qualified_name);
    if (!near.empty()) {
        msg += "; closest:";
        for (std::size_t i = 0; i < near.size(); ++i) msg += (i ? ", " : " ") + near[i];
    }
    throw Error(ErrorCategory::not_found, msg);
}

EntityId resolve_library(const KnowledgeGraph& kg, std::string_view name) {
    if (auto id = kg.find(EntityKind::Library, name)) return *id;
    std::string msg = "no library named '" + std::string(name) + "'; known:";
    for (auto id : kg.entities_of_kind(EntityKind::Library)) msg += " " + kg.entity(id).name;
    throw Error(ErrorCategory::not_found, msg);
}

void write_recommendations(const KnowledgeGraph& kg, std::span<const Recommendation> recs, std::ostream& out) {
    out << "rank,method,library,total,m,func,obj,it,iv,ot,neig\n";
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        out << (i + 1) << ',' << detail::csv_field(kg.entity(r.method).name) << ','
            << detail::csv_field(r.library ? kg.entity(*r.library).name : "") << ','
            << detail::format_fixed(r.total, 9);
        for (double p : r.parts.as_array()) out << ',' << detail::format_fixed(p, 9);
        out << '\n';
    }
}

}  // namespace apikg
