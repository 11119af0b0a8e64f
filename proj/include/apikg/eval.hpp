#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apikg/kg.hpp"
#include "apikg/lexicon.hpp"
#include "apikg/recommend.hpp"

namespace apikg {

// Rank of the first correct answer, 1-based; nullopt when none was found.
using Ranking = std::optional<std::size_t>;

double mrr(std::span<const Ranking> rankings);
double hit_at_k(std::span<const Ranking> rankings, std::size_t k);

/// Correct entries among the first `cutoff` results over the number of those
/// results (0 when nothing was returned).
double precision(std::span<const EntityId> results, const std::set<EntityId>& truths, std::size_t cutoff = 10);
/// Correct entries among the first `cutoff` results over |truths|.
double recall(std::span<const EntityId> results, const std::set<EntityId>& truths, std::size_t cutoff = 10);

/// 1-based position of the first result in `truths`.
Ranking first_correct_rank(std::span<const EntityId> results, const std::set<EntityId>& truths);

struct MetricReport {
    double mrr = 0.0;
    double hit_at_1 = 0.0;
    double hit_at_3 = 0.0;
    double hit_at_5 = 0.0;
    double hit_at_10 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    std::size_t query_count = 0;
};

/// Aggregates per-query ranked result lists; precision and recall are macro averages.
MetricReport summarize(std::span<const std::vector<EntityId>> results, std::span<const std::set<EntityId>> truths);

struct Bm25Config {
    double k1 = 1.2;
    double b = 0.75;
    std::size_t top_n = 100;

    void validate() const;
};

/// Okapi BM25 over pre-cleaned token lists with idf = ln(1 + (N - df + 0.5) / (df + 0.5)).
class Bm25 {
public:
    Bm25(std::vector<std::vector<std::string>> docs, Bm25Config config = {});

    /// Score of every document; repeated query terms count once.
    std::vector<double> scores(std::span<const std::string> query) const;
    /// Documents with positive score, best first, ties by ascending index, at most top_n.
    std::vector<std::size_t> top(std::span<const std::string> query) const;

    std::size_t size() const { return docs_.size(); }

private:
    Bm25Config config_;
    std::vector<std::vector<std::string>> docs_;
    double avgdl_ = 0.0;
};

std::vector<std::size_t> bm25_candidates(std::span<const std::string> query,
                                         const std::vector<std::vector<std::string>>& docs, const Bm25Config& config);

/// Lowercased tokens with identifiers split, stop words removed and lemmatized.
std::vector<std::string> clean_text(std::string_view text, const Lexicons& lex);

/// Bag of words for a method drawn from the graph: its own and its class's
/// name, functionality keys, parameter names and concepts mentioned in its
/// description, cleaned with clean_text.
std::vector<std::string> method_document(const KnowledgeGraph& kg, EntityId method, const Lexicons& lex);

struct BenchmarkPair {
    std::string source;
    std::vector<std::string> targets;
    std::optional<std::string> target_library;
};

/// CSV `source,targets,target_library` with `;` between targets. A first row
/// starting with `source` is a header.
std::vector<BenchmarkPair> read_benchmark(std::istream& in);
void write_benchmark(std::span<const BenchmarkPair> pairs, std::ostream& out);

enum class Scenario { with_target, open };
enum class Engine { kge4ar, bm25, oracle };

std::string_view to_string(Scenario s);
std::string_view to_string(Engine e);
std::optional<Scenario> parse_scenario(std::string_view token);
std::optional<Engine> parse_engine(std::string_view token);

inline constexpr std::size_t kRankCutoff = 100;

struct ScenarioOptions {
    Scenario scenario = Scenario::with_target;
    Engine engine = Engine::kge4ar;
    Weights weights;
    std::size_t k_retrieve = 100;
    Bm25Config bm25;
};

struct QueryOutcome {
    EntityId source{};
    std::vector<EntityId> results;
    std::set<EntityId> truths;
    Ranking rank;
};

struct ScenarioResult {
    MetricReport report;
    std::vector<QueryOutcome> queries;
    std::vector<std::string> skipped;  // one reason per unresolvable pair
};

/// with_target restricts candidates to the pair's target library (the first
/// target's library when the column is empty); open searches all other
/// libraries with the per-library cap. Result lists are cut at kRankCutoff.
ScenarioResult run_scenario(const KnowledgeGraph& kg, const Recommender& recommender, const Lexicons& lex,
                            std::span<const BenchmarkPair> benchmark, const ScenarioOptions& options);

void write_report_csv(const MetricReport& report, std::ostream& out);
void write_report_table(const MetricReport& report, std::ostream& out);

}  // namespace apikg
