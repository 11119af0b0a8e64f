#include "apikg/embedding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "apikg/error.hpp"
#include "number_format.hpp"

namespace apikg {

namespace {

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

void check_widths(ModelKind kind, std::span<const double> h, std::span<const double> r, std::span<const double> t) {
    if (h.size() != r.size() || h.size() != t.size()) {
        throw Error(ErrorCategory::invalid_argument, "embedding rows differ in width");
    }
    if (kind == ModelKind::complex && h.size() % 2 != 0) {
        throw Error(ErrorCategory::invalid_argument, "ComplEx rows must have even width");
    }
}

// d(score)/d(row) for each row, scaled by `scale` and added to the outputs.
void add_score_gradient(ModelKind kind, std::span<const double> h, std::span<const double> r,
                        std::span<const double> t, double scale, std::span<double> gh, std::span<double> gr,
                        std::span<double> gt) {
    switch (kind) {
    case ModelKind::complex: {
        std::size_t d = h.size() / 2;
        for (std::size_t k = 0; k < d; ++k) {
            double hr = h[k], hi = h[d + k], rr = r[k], ri = r[d + k], tr = t[k], ti = t[d + k];
            gh[k] += scale * (rr * tr + ri * ti);
            gh[d + k] += scale * (rr * ti - ri * tr);
            gr[k] += scale * (hr * tr + hi * ti);
            gr[d + k] += scale * (hr * ti - hi * tr);
            gt[k] += scale * (hr * rr - hi * ri);
            gt[d + k] += scale * (hr * ri + hi * rr);
        }
        break;
    }
    case ModelKind::distmult:
        for (std::size_t k = 0; k < h.size(); ++k) {
            gh[k] += scale * r[k] * t[k];
            gr[k] += scale * h[k] * t[k];
            gt[k] += scale * h[k] * r[k];
        }
        break;
    case ModelKind::transe: {
        double norm = 0.0;
        for (std::size_t k = 0; k < h.size(); ++k) {
            double diff = h[k] + r[k] - t[k];
            norm += diff * diff;
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) break;  // subgradient 0 at the kink
        for (std::size_t k = 0; k < h.size(); ++k) {
            double g = -(h[k] + r[k] - t[k]) / norm;
            gh[k] += scale * g;
            gr[k] += scale * g;
            gt[k] -= scale * g;
        }
        break;
    }
    }
}

}  // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::complex: return "complex";
    case ModelKind::transe: return "transe";
    case ModelKind::distmult: return "distmult";
    }
    return "complex";
}

std::optional<ModelKind> parse_model_kind(std::string_view token) {
    if (token == "complex") return ModelKind::complex;
    if (token == "transe") return ModelKind::transe;
    if (token == "distmult") return ModelKind::distmult;
    return std::nullopt;
}

void TrainConfig::validate() const {
    auto bad = [](const std::string& msg) { throw Error(ErrorCategory::invalid_argument, "train config: " + msg); };
    if (dim == 0) bad("dim must be positive");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) bad("learning_rate must be positive");
    if (negatives_per_positive == 0) bad("negatives_per_positive must be positive");
    if (batch_size == 0) bad("batch_size must be positive");
    if (!(l2 >= 0.0) || !std::isfinite(l2)) bad("l2 must be non-negative");
}

EmbeddingModel::EmbeddingModel(ModelKind kind, std::size_t dim, std::size_t entity_count)
    : kind_(kind), dim_(dim), entity_count_(entity_count) {
    if (dim == 0) throw Error(ErrorCategory::invalid_argument, "embedding dim must be positive");
    entities_.assign(entity_count * width(), 0.0);
    relations_.assign(kRelationKindCount * width(), 0.0);
}

std::span<double> EmbeddingModel::entity(EntityId id) {
    if (index_of(id) >= entity_count_) {
        throw Error(ErrorCategory::not_found, "no embedding for entity " + std::to_string(index_of(id)));
    }
    return std::span<double>(entities_).subspan(index_of(id) * width(), width());
}

std::span<const double> EmbeddingModel::entity(EntityId id) const {
    return const_cast<EmbeddingModel*>(this)->entity(id);
}

std::span<double> EmbeddingModel::relation(RelationKind rel) {
    return std::span<double>(relations_).subspan(index_of(rel) * width(), width());
}

std::span<const double> EmbeddingModel::relation(RelationKind rel) const {
    return const_cast<EmbeddingModel*>(this)->relation(rel);
}

double score_vectors(ModelKind kind, std::span<const double> h, std::span<const double> r,
                     std::span<const double> t) {
    check_widths(kind, h, r, t);
    double s = 0.0;
    switch (kind) {
    case ModelKind::complex: {
        std::size_t d = h.size() / 2;
        for (std::size_t k = 0; k < d; ++k) {
            double hr = h[k], hi = h[d + k], rr = r[k], ri = r[d + k], tr = t[k], ti = t[d + k];
            // Re((hr + i hi)(rr + i ri)(tr - i ti))
            s += (hr * rr - hi * ri) * tr + (hr * ri + hi * rr) * ti;
        }
        return s;
    }
    case ModelKind::distmult:
        // h * t first so swapping head and tail gives bitwise the same score.
        for (std::size_t k = 0; k < h.size(); ++k) s += h[k] * t[k] * r[k];
        return s;
    case ModelKind::transe:
        for (std::size_t k = 0; k < h.size(); ++k) {
            double diff = h[k] + r[k] - t[k];
            s += diff * diff;
        }
        return -std::sqrt(s);
    }
    return s;
}

double score(const EmbeddingModel& model, EntityId head, RelationKind rel, EntityId tail) {
    return score_vectors(model.kind(), model.entity(head), model.relation(rel), model.entity(tail));
}

double logistic_loss(ModelKind kind, std::span<const double> h, std::span<const double> r, std::span<const double> t,
                     double label) {
    return softplus(-label * score_vectors(kind, h, r, t));
}

double logistic_loss_gradient(ModelKind kind, std::span<const double> h, std::span<const double> r,
                              std::span<const double> t, double label, std::span<double> gh, std::span<double> gr,
                              std::span<double> gt) {
    double phi = score_vectors(kind, h, r, t);
    // d/dphi log(1 + exp(-y phi)) = -y sigmoid(-y phi)
    double dphi = -label * sigmoid(-label * phi);
    add_score_gradient(kind, h, r, t, dphi, gh, gr, gt);
    return softplus(-label * phi);
}

EmbeddingModel initial_model(const KnowledgeGraph& kg, const TrainConfig& config) {
    config.validate();
    EmbeddingModel model(config.model_kind, config.dim, kg.entity_count());
    std::mt19937_64 rng(config.seed);
    double bound = 0.5 / std::sqrt(static_cast<double>(config.dim));
    std::uniform_real_distribution<double> init(-bound, bound);
    for (auto& v : model.entity_data()) v = init(rng);
    for (auto& v : model.relation_data()) v = init(rng);
    return model;
}

namespace {

// Dense gradient buffers with a list of touched rows so a batch update only
// visits what it changed.
class GradientBuffer {
public:
    GradientBuffer(std::size_t rows, std::size_t width) : width_(width), data_(rows * width, 0.0), touched_(rows, 0) {}

    std::span<double> row(std::size_t i) {
        if (!touched_[i]) {
            touched_[i] = 1;
            order_.push_back(i);
        }
        return std::span<double>(data_).subspan(i * width_, width_);
    }

    template <typename Fn>
    void drain(Fn&& apply) {
        std::sort(order_.begin(), order_.end());
        for (auto i : order_) {
            auto g = std::span<double>(data_).subspan(i * width_, width_);
            apply(i, g);
            std::fill(g.begin(), g.end(), 0.0);
            touched_[i] = 0;
        }
        order_.clear();
    }

private:
    std::size_t width_;
    std::vector<double> data_;
    std::vector<char> touched_;
    std::vector<std::size_t> order_;
};

}  // namespace

TrainResult train(const KnowledgeGraph& kg, const TrainConfig& config) {
    if (kg.triple_count() == 0) throw Error(ErrorCategory::invalid_argument, "cannot train on a graph without triples");
    TrainResult result{initial_model(kg, config), {}};
    auto& model = result.model;
    const auto kind = config.model_kind;
    const auto width = model.width();

    // Corruption candidates per relation slot, restricted to legal kinds.
    std::array<std::vector<EntityId>, kRelationKindCount> head_pool, tail_pool;
    for (std::size_t r = 0; r < kRelationKindCount; ++r) {
        const auto& schema = schema_of(static_cast<RelationKind>(r));
        for (const auto& e : kg.entities()) {
            if (schema.head.contains(e.kind)) head_pool[r].push_back(e.id);
            if (schema.tail.contains(e.kind)) tail_pool[r].push_back(e.id);
        }
    }

    std::mt19937_64 rng(config.seed ^ 0x5DEECE66Dull);
    std::vector<std::size_t> order(kg.triple_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    GradientBuffer entity_grad(kg.entity_count(), width);
    GradientBuffer relation_grad(kRelationKindCount, width);
    const auto triples = kg.triples();
    constexpr int kMaxResample = 10;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        std::size_t terms = 0;
        std::size_t step = 0;

        auto accumulate = [&](const Triple& t, double label) {
            double loss = logistic_loss_gradient(kind, model.entity(t.head), model.relation(t.rel), model.entity(t.tail),
                                                 label, entity_grad.row(index_of(t.head)),
                                                 relation_grad.row(index_of(t.rel)), entity_grad.row(index_of(t.tail)));
            if (!std::isfinite(loss)) {
                throw Error(ErrorCategory::numeric, "non-finite loss at epoch " + std::to_string(epoch + 1) + " step " +
                                                        std::to_string(step));
            }
            epoch_loss += loss;
            ++terms;
        };
        auto apply = [&](std::span<double> params, std::span<double> grad) {
            for (std::size_t k = 0; k < width; ++k) {
                params[k] -= config.learning_rate * (grad[k] + config.l2 * params[k]);
            }
        };

        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            std::size_t end = std::min(order.size(), start + config.batch_size);
            for (std::size_t i = start; i < end; ++i, ++step) {
                const Triple& pos = triples[order[i]];
                accumulate(pos, +1.0);
                const auto& heads = head_pool[index_of(pos.rel)];
                const auto& tails = tail_pool[index_of(pos.rel)];
                for (std::size_t n = 0; n < config.negatives_per_positive; ++n) {
                    bool corrupt_head = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
                    const auto& pool = corrupt_head ? heads : tails;
                    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
                    std::optional<Triple> negative;
                    for (int attempt = 0; attempt < kMaxResample; ++attempt) {
                        Triple cand = pos;
                        (corrupt_head ? cand.head : cand.tail) = pool[pick(rng)];
                        if (!kg.contains(cand)) {
                            negative = cand;
                            break;
                        }
                    }
                    if (negative) accumulate(*negative, -1.0);
                }
            }
            entity_grad.drain([&](std::size_t row, std::span<double> g) { apply(model.entity(entity_id(row)), g); });
            relation_grad.drain(
                [&](std::size_t row, std::span<double> g) { apply(model.relation(static_cast<RelationKind>(row)), g); });
        }
        result.loss_trace.push_back(terms == 0 ? 0.0 : epoch_loss / static_cast<double>(terms));
    }
    return result;
}

LinkPredictionReport eval_link_prediction(const TripleScorer& scorer, std::span<const Triple> held_out,
                                          const KnowledgeGraph& kg) {
    if (held_out.empty()) throw Error(ErrorCategory::invalid_argument, "link prediction needs held-out triples");
    std::unordered_set<Triple, TripleHash> held(held_out.begin(), held_out.end());
    for (const auto& t : held_out) {
        if (kg.contains(t)) {
            throw Error(ErrorCategory::invalid_argument, "held-out triple " + kg.entity(t.head).name + " " +
                                                             std::string(to_string(t.rel)) + " " +
                                                             kg.entity(t.tail).name + " is also a training triple");
        }
    }

    std::vector<double> harmonic{0.0};
    auto harmonic_number = [&](std::size_t n) {
        while (harmonic.size() <= n) harmonic.push_back(harmonic.back() + 1.0 / static_cast<double>(harmonic.size()));
        return harmonic[n];
    };

    LinkPredictionReport report;
    for (const auto& t : held_out) {
        const auto& tail_kinds = schema_of(t.rel).tail;
        double true_score = scorer(t.head, t.rel, t.tail);
        std::size_t rank = 1;
        std::size_t candidates = 1;
        for (const auto& e : kg.entities()) {
            if (e.id == t.tail || !tail_kinds.contains(e.kind)) continue;
            Triple other{t.head, t.rel, e.id};
            if (kg.contains(other) || held.contains(other)) continue;
            ++candidates;
            double s = scorer(t.head, t.rel, e.id);
            if (s > true_score || (s == true_score && e.id < t.tail)) ++rank;
        }
        double rr = 1.0 / static_cast<double>(rank);
        report.mrr += rr;
        report.hits_at_1 += rank <= 1 ? 1.0 : 0.0;
        report.hits_at_3 += rank <= 3 ? 1.0 : 0.0;
        report.hits_at_10 += rank <= 10 ? 1.0 : 0.0;
        report.random_baseline_mrr += harmonic_number(candidates) / static_cast<double>(candidates);
    }
    double n = static_cast<double>(held_out.size());
    report.count = held_out.size();
    report.mrr /= n;
    report.hits_at_1 /= n;
    report.hits_at_3 /= n;
    report.hits_at_10 /= n;
    report.random_baseline_mrr /= n;
    return report;
}

LinkPredictionReport eval_link_prediction(const EmbeddingModel& model, std::span<const Triple> held_out,
                                          const KnowledgeGraph& kg) {
    return eval_link_prediction([&](EntityId h, RelationKind r, EntityId t) { return score(model, h, r, t); },
                                held_out, kg);
}

HoldoutSplit holdout_split(const KnowledgeGraph& kg, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw Error(ErrorCategory::invalid_argument, "holdout fraction must lie in (0, 1)");
    }
    std::vector<std::size_t> order(kg.triple_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    auto held_count = static_cast<std::size_t>(fraction * static_cast<double>(order.size()));
    std::vector<char> is_held(order.size(), 0);
    for (std::size_t i = 0; i < held_count; ++i) is_held[order[i]] = 1;

    HoldoutSplit split;
    for (const auto& e : kg.entities()) {
        if (e.kind == EntityKind::Library) {
            split.train.add_entity(e.kind, e.name);
        } else {
            split.train.add_entity(e.kind, e.name, is_shared_kind(e.kind) ? std::nullopt : e.library);
        }
    }
    const auto triples = kg.triples();
    for (std::size_t i = 0; i < triples.size(); ++i) {
        if (is_held[i]) {
            split.held_out.push_back(triples[i]);
        } else {
            split.train.add_triple(triples[i].head, triples[i].rel, triples[i].tail);
        }
    }
    return split;
}

void save_model(const EmbeddingModel& model, const KnowledgeGraph& kg, std::ostream& out) {
    if (model.entity_count() != kg.entity_count()) {
        throw Error(ErrorCategory::invalid_argument, "model and graph disagree on entity count");
    }
    const auto d = model.dim();
    auto write_row = [&](std::span<const double> row) {
        for (std::size_t k = 0; k < d; ++k) {
            if (k > 0) out << ' ';
            if (model.kind() == ModelKind::complex) {
                out << detail::format_roundtrip(row[k]) << ' ' << detail::format_roundtrip(row[d + k]);
            } else {
                out << detail::format_roundtrip(row[k]);
            }
        }
        out << '\n';
    };
    out << to_string(model.kind()) << ' ' << d << ' ' << model.entity_count() << ' ' << kRelationKindCount << '\n';
    for (const auto& e : kg.entities()) {
        out << e.name << '\t' << to_string(e.kind) << '\t';
        write_row(model.entity(e.id));
    }
    for (std::size_t r = 0; r < kRelationKindCount; ++r) {
        auto rel = static_cast<RelationKind>(r);
        out << to_string(rel) << "\tRelation\t";
        write_row(model.relation(rel));
    }
}

EmbeddingModel load_model(std::istream& in, const KnowledgeGraph& kg) {
    std::string line;
    std::size_t line_no = 1;
    auto fail = [&](const std::string& msg) {
        return Error(ErrorCategory::parse, "model line " + std::to_string(line_no) + ": " + msg);
    };
    if (!std::getline(in, line)) throw fail("missing header");
    std::istringstream header(line);
    std::string kind_token;
    std::size_t dim = 0, entity_count = 0, relation_count = 0;
    if (!(header >> kind_token >> dim >> entity_count >> relation_count)) throw fail("malformed header");
    auto kind = parse_model_kind(kind_token);
    if (!kind) throw fail("unknown model kind '" + kind_token + "'");
    if (entity_count != kg.entity_count()) throw fail("entity count does not match the graph");
    if (relation_count != kRelationKindCount) throw fail("unexpected relation count");

    EmbeddingModel model(*kind, dim, entity_count);
    auto read_row = [&](std::string_view values, std::span<double> row) {
        std::vector<double> parsed;
        std::size_t start = 0;
        while (start < values.size()) {
            auto end = values.find(' ', start);
            if (end == std::string_view::npos) end = values.size();
            auto v = detail::parse_double(values.substr(start, end - start));
            if (!v || !std::isfinite(*v)) throw fail("bad number");
            parsed.push_back(*v);
            start = end + 1;
        }
        if (parsed.size() != row.size()) throw fail("expected " + std::to_string(row.size()) + " values");
        for (std::size_t k = 0; k < dim; ++k) {
            if (*kind == ModelKind::complex) {
                row[k] = parsed[2 * k];
                row[dim + k] = parsed[2 * k + 1];
            } else {
                row[k] = parsed[k];
            }
        }
    };
    auto next_fields = [&]() {
        ++line_no;
        if (!std::getline(in, line)) throw fail("unexpected end of model file");
        auto a = line.find('\t');
        auto b = a == std::string::npos ? a : line.find('\t', a + 1);
        if (b == std::string::npos) throw fail("expected name<TAB>kind<TAB>values");
        return std::array<std::string_view, 3>{std::string_view(line).substr(0, a),
                                               std::string_view(line).substr(a + 1, b - a - 1),
                                               std::string_view(line).substr(b + 1)};
    };
    for (const auto& e : kg.entities()) {
        auto fields = next_fields();
        if (fields[0] != e.name || fields[1] != to_string(e.kind)) {
            throw fail("entity '" + std::string(fields[0]) + "' does not match graph entity '" + e.name + "'");
        }
        read_row(fields[2], model.entity(e.id));
    }
    for (std::size_t r = 0; r < kRelationKindCount; ++r) {
        auto rel = static_cast<RelationKind>(r);
        auto fields = next_fields();
        if (fields[0] != to_string(rel) || fields[1] != "Relation") throw fail("expected relation " + std::string(to_string(rel)));
        read_row(fields[2], model.relation(rel));
    }
    return model;
}

void write_loss_trace(std::span<const double> trace, std::ostream& out) {
    out << "epoch,mean_loss\n";
    for (std::size_t i = 0; i < trace.size(); ++i) out << (i + 1) << ',' << detail::format_roundtrip(trace[i]) << '\n';
}

}  // namespace apikg
