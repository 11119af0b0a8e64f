#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "apikg/embedding.hpp"
#include "apikg/error.hpp"
#include "apikg/eval.hpp"
#include "apikg/kg.hpp"
#include "apikg/lexicon.hpp"
#include "apikg/pipeline.hpp"
#include "apikg/recommend.hpp"
#include "apikg/vector_index.hpp"

#ifndef APIKG_DATA_DIR
#define APIKG_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace apikg;

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::io, "cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCategory::io, "cannot write " + path);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.close();
    if (!out) throw Error(ErrorCategory::io, "failed writing " + path);
}

KnowledgeGraph read_kg(const std::string& path) {
    auto in = open_in(path);
    try {
        return import_triples(in);
    } catch (const Error& e) {
        throw Error(e.category(), path + ": " + e.what());
    }
}

EmbeddingModel read_model(const std::string& path, const KnowledgeGraph& kg) {
    auto in = open_in(path);
    try {
        return load_model(in, kg);
    } catch (const Error& e) {
        throw Error(e.category(), path + ": " + e.what());
    }
}

VectorIndex read_index(const std::string& sidecar, const KnowledgeGraph& kg, const EmbeddingModel& model) {
    if (sidecar.empty()) return VectorIndex::from_model(kg, model);
    auto in = open_in(sidecar);
    auto rows = read_index_sidecar(in);
    return index_from_sidecar(kg, model, rows);
}

struct Options {
    std::string corpus;
    std::string lexicons = std::string(APIKG_DATA_DIR) + "/lexicons";
    std::string kg;
    std::string model;
    std::string index;
    std::string loss_trace;
    std::string benchmark;
    std::string source;
    std::string target_lib;
    std::string weights;
    std::string scenario = "with-target";
    std::string engine = "kge4ar";
    std::string model_kind = "complex";
    std::string format = "table";
    TrainConfig train;
    std::size_t k_retrieve = 100;
    std::size_t k_return = 10;
};

Weights weights_of(const Options& o) { return o.weights.empty() ? Weights{} : Weights::parse(o.weights); }

void cmd_build(const Options& o) {
    if (!fs::exists(o.corpus)) throw Error(ErrorCategory::io, "corpus file not found: " + o.corpus);
    auto lex = Lexicons::load(o.lexicons);
    auto corpus = load_corpus(o.corpus);
    auto built = build_knowledge_graph(corpus, lex);
    auto out = open_out(o.kg);
    export_triples(built.kg, out);
    finish(out, o.kg);
    write_stats(built.kg.stats(), std::cout);
}

void cmd_train(const Options& o) {
    auto kg = read_kg(o.kg);
    TrainConfig config = o.train;
    auto kind = parse_model_kind(o.model_kind);
    if (!kind) throw Error(ErrorCategory::invalid_argument, "unknown model kind " + o.model_kind);
    config.model_kind = *kind;
    auto result = train(kg, config);
    auto out = open_out(o.model);
    save_model(result.model, kg, out);
    finish(out, o.model);
    if (!o.loss_trace.empty()) {
        auto trace = open_out(o.loss_trace);
        write_loss_trace(result.loss_trace, trace);
        finish(trace, o.loss_trace);
    }
    if (!result.loss_trace.empty()) {
        std::cout << "epochs " << result.loss_trace.size() << ", first mean loss " << result.loss_trace.front()
                  << ", last mean loss " << result.loss_trace.back() << '\n';
    }
}

void cmd_index(const Options& o) {
    auto kg = read_kg(o.kg);
    auto model = read_model(o.model, kg);
    auto index = VectorIndex::from_model(kg, model);
    auto out = open_out(o.index);
    write_index_sidecar(index, out);
    finish(out, o.index);
    std::cout << "indexed " << index.size() << " vectors of width " << index.width() << '\n';
}

void cmd_query(const Options& o) {
    auto kg = read_kg(o.kg);
    auto model = read_model(o.model, kg);
    auto index = read_index(o.index, kg, model);
    Recommender rec(kg, model, index);
    Query q;
    q.source = resolve_method(kg, o.source);
    if (!o.target_lib.empty()) q.scope = Scope::target(resolve_library(kg, o.target_lib));
    q.k_retrieve = o.k_retrieve;
    q.k_return = o.k_return;
    q.weights = weights_of(o);
    write_recommendations(kg, rec.recommend(q), std::cout);
}

void cmd_eval(const Options& o) {
    auto kg = read_kg(o.kg);
    auto scenario = parse_scenario(o.scenario);
    if (!scenario) throw Error(ErrorCategory::invalid_argument, "unknown scenario " + o.scenario);
    auto engine = parse_engine(o.engine);
    if (!engine) throw Error(ErrorCategory::invalid_argument, "unknown engine " + o.engine);
    auto lex = Lexicons::load(o.lexicons);
    auto bench_in = open_in(o.benchmark);
    auto bench = read_benchmark(bench_in);

    // The oracle and BM25 engines never touch embeddings; a model is still
    // required so every engine runs through one code path.
    auto model = read_model(o.model, kg);
    auto index = read_index(o.index, kg, model);
    Recommender rec(kg, model, index);
    ScenarioOptions opts;
    opts.scenario = *scenario;
    opts.engine = *engine;
    opts.weights = weights_of(o);
    opts.k_retrieve = o.k_retrieve;
    auto result = run_scenario(kg, rec, lex, bench, opts);
    for (const auto& s : result.skipped) std::cerr << "skipped: " << s << '\n';
    if (o.format == "csv") {
        write_report_csv(result.report, std::cout);
    } else {
        write_report_table(result.report, std::cout);
    }
}

void cmd_stats(const Options& o) { write_stats(read_kg(o.kg).stats(), std::cout); }

void cmd_export(const Options& o) { export_triple_lines(read_kg(o.kg), std::cout); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"API knowledge graph construction and analogical API recommendation"};
    app.require_subcommand(1);
    Options o;

    auto lexicons = [&](CLI::App* cmd) {
        cmd->add_option("--lexicons", o.lexicons, "Lexicon directory")->capture_default_str();
    };
    auto kg_in = [&](CLI::App* cmd) { cmd->add_option("--kg", o.kg, "Knowledge graph TSV")->required(); };
    auto model_in = [&](CLI::App* cmd) { cmd->add_option("--model", o.model, "Embedding model file")->required(); };

    auto* build = app.add_subcommand("build", "Build the knowledge graph from a documentation corpus");
    build->add_option("--corpus", o.corpus, "Corpus JSON")->required();
    build->add_option("--kg", o.kg, "Output knowledge graph TSV")->required();
    lexicons(build);

    auto* train_cmd = app.add_subcommand("train", "Train knowledge graph embeddings");
    kg_in(train_cmd);
    train_cmd->add_option("--model", o.model, "Output model file")->required();
    train_cmd->add_option("--dim", o.train.dim, "Embedding dimension")->capture_default_str();
    train_cmd->add_option("--epochs", o.train.epochs, "Training epochs")->capture_default_str();
    train_cmd->add_option("--lr", o.train.learning_rate, "SGD learning rate")->capture_default_str();
    train_cmd->add_option("--negatives", o.train.negatives_per_positive, "Negatives per positive")
        ->capture_default_str();
    train_cmd->add_option("--batch-size", o.train.batch_size, "Positives per update")->capture_default_str();
    train_cmd->add_option("--l2", o.train.l2, "L2 penalty")->capture_default_str();
    train_cmd->add_option("--seed", o.train.seed, "Random seed")->capture_default_str();
    train_cmd->add_option("--model-kind", o.model_kind, "Embedding model")
        ->check(CLI::IsMember({"complex", "transe", "distmult"}))
        ->capture_default_str();
    train_cmd->add_option("--loss-trace", o.loss_trace, "Write per-epoch mean loss CSV");

    auto* index_cmd = app.add_subcommand("index", "Write the vector index sidecar");
    kg_in(index_cmd);
    model_in(index_cmd);
    index_cmd->add_option("--index", o.index, "Output sidecar TSV")->required();

    auto* query = app.add_subcommand("query", "Recommend analogical methods for a source method");
    kg_in(query);
    model_in(query);
    query->add_option("--index", o.index, "Index sidecar (defaults to every model row)");
    query->add_option("--source", o.source, "Qualified source method name")->required();
    query->add_option("--target-lib", o.target_lib, "Restrict to one target library");
    query->add_option("--k-retrieve", o.k_retrieve, "Candidates retrieved")->capture_default_str();
    query->add_option("--k-return", o.k_return, "Results returned")->capture_default_str();
    query->add_option("--weights", o.weights, "m,func,obj,it,iv,ot,neig");

    auto* eval = app.add_subcommand("eval", "Evaluate on a benchmark");
    kg_in(eval);
    model_in(eval);
    eval->add_option("--index", o.index, "Index sidecar (defaults to every model row)");
    eval->add_option("--benchmark", o.benchmark, "Benchmark CSV")->required();
    eval->add_option("--scenario", o.scenario, "with-target or open")
        ->check(CLI::IsMember({"with-target", "open"}))
        ->capture_default_str();
    eval->add_option("--engine", o.engine, "kge4ar, bm25 or oracle")
        ->check(CLI::IsMember({"kge4ar", "bm25", "oracle"}))
        ->capture_default_str();
    eval->add_option("--k-retrieve", o.k_retrieve, "Candidates retrieved")->capture_default_str();
    eval->add_option("--weights", o.weights, "m,func,obj,it,iv,ot,neig");
    eval->add_option("--format", o.format, "table or csv")->check(CLI::IsMember({"table", "csv"}))->capture_default_str();
    lexicons(eval);

    auto* stats = app.add_subcommand("stats", "Entity counts per kind");
    kg_in(stats);
    auto* exp = app.add_subcommand("export", "Print triples as TSV");
    kg_in(exp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: invalid-argument: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*build) cmd_build(o);
        if (*train_cmd) cmd_train(o);
        if (*index_cmd) cmd_index(o);
        if (*query) cmd_query(o);
        if (*eval) cmd_eval(o);
        if (*stats) cmd_stats(o);
        if (*exp) cmd_export(o);
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.category()) << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
