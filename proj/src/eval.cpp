#include "apikg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>

#include "apikg/error.hpp"
#include "apikg/text.hpp"
#include "csv.hpp"
#include "number_format.hpp"

namespace apikg {

double mrr(std::span<const Ranking> rankings) {
    if (rankings.empty()) throw Error(ErrorCategory::invalid_argument, "mrr of no queries");
    double sum = 0.0;
    for (const auto& r : rankings) {
        if (r) {
            if (*r == 0) throw Error(ErrorCategory::invalid_argument, "ranks start at 1");
            sum += 1.0 / static_cast<double>(*r);
        }
    }
    return sum / static_cast<double>(rankings.size());
}

double hit_at_k(std::span<const Ranking> rankings, std::size_t k) {
    if (rankings.empty()) throw Error(ErrorCategory::invalid_argument, "hit@k of no queries");
    if (k == 0) throw Error(ErrorCategory::invalid_argument, "hit@k needs k >= 1");
    std::size_t hits = 0;
    for (const auto& r : rankings) hits += (r && *r <= k) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(rankings.size());
}

namespace {

std::size_t correct_in_prefix(std::span<const EntityId> results, const std::set<EntityId>& truths, std::size_t cutoff) {
    std::size_t n = std::min(cutoff, results.size());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) correct += truths.contains(results[i]) ? 1 : 0;
    return correct;
}

}  // namespace

double precision(std::span<const EntityId> results, const std::set<EntityId>& truths, std::size_t cutoff) {
    if (truths.empty()) throw Error(ErrorCategory::invalid_argument, "precision with no ground truth");
    std::size_t n = std::min(cutoff, results.size());
    if (n == 0) return 0.0;
    return static_cast<double>(correct_in_prefix(results, truths, cutoff)) / static_cast<double>(n);
}

double recall(std::span<const EntityId> results, const std::set<EntityId>& truths, std::size_t cutoff) {
    if (truths.empty()) throw Error(ErrorCategory::invalid_argument, "recall with no ground truth");
    return static_cast<double>(correct_in_prefix(results, truths, cutoff)) / static_cast<double>(truths.size());
}

Ranking first_correct_rank(std::span<const EntityId> results, const std::set<EntityId>& truths) {
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (truths.contains(results[i])) return i + 1;
    }
    return std::nullopt;
}

MetricReport summarize(std::span<const std::vector<EntityId>> results, std::span<const std::set<EntityId>> truths) {
    if (results.size() != truths.size()) throw Error(ErrorCategory::invalid_argument, "results and truths differ in size");
    std::vector<Ranking> ranks;
    MetricReport report;
    for (std::size_t q = 0; q < results.size(); ++q) {
        ranks.push_back(first_correct_rank(results[q], truths[q]));
        report.precision += precision(results[q], truths[q]);
        report.recall += recall(results[q], truths[q]);
    }
    report.query_count = results.size();
    report.mrr = mrr(ranks);
    report.hit_at_1 = hit_at_k(ranks, 1);
    report.hit_at_3 = hit_at_k(ranks, 3);
    report.hit_at_5 = hit_at_k(ranks, 5);
    report.hit_at_10 = hit_at_k(ranks, 10);
    report.precision /= static_cast<double>(results.size());
    report.recall /= static_cast<double>(results.size());
    return report;
}

void Bm25Config::validate() const {
    if (!(k1 > 0.0) || !std::isfinite(k1)) throw Error(ErrorCategory::invalid_argument, "bm25 k1 must be positive");
    if (!(b >= 0.0 && b <= 1.0)) throw Error(ErrorCategory::invalid_argument, "bm25 b must lie in [0, 1]");
    if (top_n == 0) throw Error(ErrorCategory::invalid_argument, "bm25 top_n must be positive");
}

Bm25::Bm25(std::vector<std::vector<std::string>> docs, Bm25Config config) : config_(config), docs_(std::move(docs)) {
    config_.validate();
    std::size_t total = 0;
    for (const auto& d : docs_) total += d.size();
    avgdl_ = docs_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(docs_.size());
}

std::vector<double> Bm25::scores(std::span<const std::string> query) const {
    std::vector<double> out(docs_.size(), 0.0);
    if (docs_.empty() || avgdl_ == 0.0) return out;
    std::set<std::string> terms(query.begin(), query.end());
    const double n = static_cast<double>(docs_.size());
    for (const auto& term : terms) {
        std::vector<std::pair<std::size_t, double>> tfs;
        for (std::size_t d = 0; d < docs_.size(); ++d) {
            auto tf = std::count(docs_[d].begin(), docs_[d].end(), term);
            if (tf > 0) tfs.emplace_back(d, static_cast<double>(tf));
        }
        if (tfs.empty()) continue;
        double df = static_cast<double>(tfs.size());
        double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        for (auto [d, tf] : tfs) {
            double dl = static_cast<double>(docs_[d].size());
            double norm = config_.k1 * (1.0 - config_.b + config_.b * dl / avgdl_);
            out[d] += idf * tf * (config_.k1 + 1.0) / (tf + norm);
        }
    }
    return out;
}

std::vector<std::size_t> Bm25::top(std::span<const std::string> query) const {
    auto s = scores(query);
    std::vector<std::size_t> ids;
    for (std::size_t d = 0; d < s.size(); ++d) {
        if (s[d] > 0.0) ids.push_back(d);
    }
    std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
    if (ids.size() > config_.top_n) ids.resize(config_.top_n);
    return ids;
}

std::vector<std::size_t> bm25_candidates(std::span<const std::string> query,
                                         const std::vector<std::vector<std::string>>& docs, const Bm25Config& config) {
    return Bm25(docs, config).top(query);
}

std::vector<std::string> clean_text(std::string_view text, const Lexicons& lex) {
    std::vector<std::string> out;
    for (const auto& token : tokenize_identifier(text)) {
        if (lex.is_stop_word(token)) continue;
        auto lemma = lex.lemmatize(token);
        if (lemma.empty() || lex.is_stop_word(lemma)) continue;
        out.push_back(std::move(lemma));
    }
    return out;
}

std::vector<std::string> method_document(const KnowledgeGraph& kg, EntityId method, const Lexicons& lex) {
    std::string text = method_simple_name(kg.entity(method).name);
    for (auto cls : kg.neighbors(method, RelationKind::HasMethod, Direction::in)) {
        text += " " + short_type_name(kg.entity(cls).name);
    }
    for (auto fe : kg.neighbors(method, RelationKind::HasFunctionality, Direction::out)) text += " " + kg.entity(fe).name;
    for (auto p : kg.neighbors(method, RelationKind::HasParameter, Direction::out)) {
        text += " " + last_segment(kg.entity(p).name);
    }
    for (auto c : kg.neighbors(method, RelationKind::MentionedInDescription, Direction::in)) {
        text += " " + kg.entity(c).name;
    }
    return clean_text(text, lex);
}

std::vector<BenchmarkPair> read_benchmark(std::istream& in) {
    std::vector<BenchmarkPair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = detail::split_csv_line(line);
        auto fail = [&](const std::string& msg) {
            return Error(ErrorCategory::parse, "benchmark line " + std::to_string(line_no) + ": " + msg);
        };
        if (!fields) throw fail("unterminated quote");
        if (line_no == 1 && (*fields)[0] == "source") continue;
        if (fields->size() < 2 || fields->size() > 3) throw fail("expected source,targets[,target_library]");
        BenchmarkPair pair;
        pair.source = trim((*fields)[0]);
        std::size_t start = 0;
        const std::string& targets = (*fields)[1];
        while (start <= targets.size()) {
            auto end = targets.find(';', start);
            if (end == std::string::npos) end = targets.size();
            auto t = trim(std::string_view(targets).substr(start, end - start));
            if (!t.empty()) pair.targets.push_back(t);
            start = end + 1;
        }
        if (fields->size() == 3 && !trim((*fields)[2]).empty()) pair.target_library = trim((*fields)[2]);
        if (pair.source.empty()) throw fail("empty source");
        if (pair.targets.empty()) throw fail("no targets");
        if (std::find(pair.targets.begin(), pair.targets.end(), pair.source) != pair.targets.end()) {
            throw fail("source listed among its own targets");
        }
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

void write_benchmark(std::span<const BenchmarkPair> pairs, std::ostream& out) {
    out << "source,targets,target_library\n";
    for (const auto& p : pairs) {
        out << detail::csv_field(p.source) << ',' << detail::csv_field(join(p.targets, ";")) << ','
            << detail::csv_field(p.target_library.value_or("")) << '\n';
    }
}

std::string_view to_string(Scenario s) { return s == Scenario::with_target ? "with-target" : "open"; }

std::string_view to_string(Engine e) {
    switch (e) {
    case Engine::kge4ar: return "kge4ar";
    case Engine::bm25: return "bm25";
    case Engine::oracle: return "oracle";
    }
    return "kge4ar";
}

std::optional<Scenario> parse_scenario(std::string_view token) {
    if (token == "with-target") return Scenario::with_target;
    if (token == "open") return Scenario::open;
    return std::nullopt;
}

std::optional<Engine> parse_engine(std::string_view token) {
    for (auto e : {Engine::kge4ar, Engine::bm25, Engine::oracle}) {
        if (token == to_string(e)) return e;
    }
    return std::nullopt;
}

namespace {

std::vector<EntityId> cap_by_library(const KnowledgeGraph& kg, std::vector<EntityId> ranked, std::size_t per_library) {
    std::map<std::optional<EntityId>, std::size_t> used;
    std::erase_if(ranked, [&](EntityId id) { return used[kg.entity(id).library]++ >= per_library; });
    return ranked;
}

}  // namespace

ScenarioResult run_scenario(const KnowledgeGraph& kg, const Recommender& recommender, const Lexicons& lex,
                            std::span<const BenchmarkPair> benchmark, const ScenarioOptions& options) {
    options.weights.validate();
    options.bm25.validate();
    ScenarioResult result;

    // BM25 documents for every method of an ingested library, built once.
    std::vector<EntityId> doc_methods;
    std::unordered_map<std::uint32_t, std::size_t> doc_of;
    std::optional<Bm25> bm25;
    if (options.engine == Engine::bm25) {
        std::vector<std::vector<std::string>> docs;
        for (auto m : kg.entities_of_kind(EntityKind::Method)) {
            doc_of[static_cast<std::uint32_t>(m)] = docs.size();
            doc_methods.push_back(m);
            docs.push_back(method_document(kg, m, lex));
        }
        bm25.emplace(std::move(docs), options.bm25);
    }

    for (const auto& pair : benchmark) {
        auto source = find_method(kg, pair.source);
        if (!source) {
            result.skipped.push_back("unresolved source " + pair.source);
            continue;
        }
        std::set<EntityId> truths;
        for (const auto& t : pair.targets) {
            if (auto id = find_method(kg, t)) truths.insert(*id);
        }
        if (truths.empty()) {
            result.skipped.push_back("no resolvable target for " + pair.source);
            continue;
        }
        Scope scope;
        if (options.scenario == Scenario::with_target) {
            if (pair.target_library) {
                auto lib = kg.find(EntityKind::Library, *pair.target_library);
                if (!lib) {
                    result.skipped.push_back("unknown target library " + *pair.target_library);
                    continue;
                }
                scope = Scope::target(*lib);
            } else {
                scope = Scope::target(*kg.entity(*truths.begin()).library);
            }
        }

        std::vector<EntityId> ranked;
        switch (options.engine) {
        case Engine::oracle:
            ranked.assign(truths.begin(), truths.end());
            break;
        case Engine::kge4ar: {
            Query q{*source, scope, options.k_retrieve, kRankCutoff, options.weights};
            for (const auto& r : recommender.recommend(q)) ranked.push_back(r.method);
            break;
        }
        case Engine::bm25: {
            auto scores = bm25->scores(method_document(kg, *source, lex));
            auto source_lib = kg.entity(*source).library;
            std::vector<EntityId> pool;
            for (auto m : doc_methods) {
                auto lib = kg.entity(m).library;
                if (m == *source || scores[doc_of[static_cast<std::uint32_t>(m)]] <= 0.0) continue;
                if (scope.target_library ? lib != scope.target_library : lib == source_lib) continue;
                pool.push_back(m);
            }
            std::stable_sort(pool.begin(), pool.end(), [&](EntityId a, EntityId b) {
                return scores[doc_of[static_cast<std::uint32_t>(a)]] > scores[doc_of[static_cast<std::uint32_t>(b)]];
            });
            if (pool.size() > options.bm25.top_n) pool.resize(options.bm25.top_n);
            ranked = scope.target_library ? pool : cap_by_library(kg, std::move(pool), 3);
            break;
        }
        }
        if (ranked.size() > kRankCutoff) ranked.resize(kRankCutoff);
        QueryOutcome outcome{*source, std::move(ranked), std::move(truths), std::nullopt};
        outcome.rank = first_correct_rank(outcome.results, outcome.truths);
        result.queries.push_back(std::move(outcome));
    }
    if (result.queries.empty()) throw Error(ErrorCategory::not_found, "no benchmark entry could be resolved in the graph");

    std::vector<std::vector<EntityId>> results;
    std::vector<std::set<EntityId>> truths;
    for (const auto& q : result.queries) {
        results.push_back(q.results);
        truths.push_back(q.truths);
    }
    result.report = summarize(results, truths);
    return result;
}

void write_report_csv(const MetricReport& r, std::ostream& out) {
    out << "queries,mrr,hit@1,hit@3,hit@5,hit@10,precision,recall\n";
    out << r.query_count;
    for (double v : {r.mrr, r.hit_at_1, r.hit_at_3, r.hit_at_5, r.hit_at_10, r.precision, r.recall}) {
        out << ',' << detail::format_fixed(v, 6);
    }
    out << '\n';
}

void write_report_table(const MetricReport& r, std::ostream& out) {
    auto row = [&](std::string_view name, double v) {
        out << name << std::string(12 - name.size(), ' ') << detail::format_fixed(v, 4) << '\n';
    };
    out << "queries     " << r.query_count << '\n';
    row("MRR", r.mrr);
    row("Hit@1", r.hit_at_1);
    row("Hit@3", r.hit_at_3);
    row("Hit@5", r.hit_at_5);
    row("Hit@10", r.hit_at_10);
    row("precision", r.precision);
    row("recall", r.recall);
}

}  // namespace apikg
