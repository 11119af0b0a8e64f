#include "apikg/pipeline.hpp"

#include <string>

#include "apikg/concepts.hpp"
#include "apikg/error.hpp"
#include "apikg/functionality.hpp"

namespace apikg {

namespace {

template <typename Fn>
auto run_stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.category(), std::string(name) + ": " + e.what());
    }
}

}  // namespace

BuildResult build_knowledge_graph(const DocCorpus& corpus, const Lexicons& lex) {
    BuildResult r;
    r.skeleton = run_stage("doc-ingest", [&] { return build_skeleton(corpus, r.kg, r.descriptions); });
    r.functionality_triples =
        run_stage("func-extract", [&] { return extract_functionality(r.kg, r.descriptions, lex); });
    r.concept_triples = run_stage("concept-complete", [&] { return complete_concepts(r.kg, r.descriptions, lex); });
    return r;
}

}  // namespace apikg
