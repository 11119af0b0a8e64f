#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "apikg/corpus.hpp"
#include "apikg/error.hpp"
#include "apikg/kg.hpp"
#include "apikg/pipeline.hpp"
#include "fixtures.hpp"

using namespace apikg;

namespace {

std::string schema_message(const std::string& json) {
    try {
        parse_corpus(json);
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::schema) << e.what();
        return e.what();
    }
    ADD_FAILURE() << "no error for " << json;
    return {};
}

const char* kMinimal = R"({"libraries":[{"coordinates":"g:a:1","packages":[{"name":"p","classes":[
  {"qualified_name":"p.C","is_interface":false,"implements":[],"fields":[],
   "methods":[{"name":"m","params":[],"return_type":"void"}]}]}]}]})";

}  // namespace

TEST(ParseCorpus, MinimalCorpus) {
    auto corpus = parse_corpus(kMinimal);
    ASSERT_EQ(corpus.libraries.size(), 1u);
    ASSERT_EQ(corpus.libraries[0].packages.size(), 1u);
    ASSERT_EQ(corpus.libraries[0].packages[0].classes.size(), 1u);
    EXPECT_EQ(corpus.libraries[0].packages[0].classes[0].methods.size(), 1u);
}

TEST(ParseCorpus, UnknownKeysIgnored) {
    auto corpus = parse_corpus(R"({"version":3,"libraries":[{"coordinates":"g:a:1","extra":{},"packages":[]}]})");
    EXPECT_EQ(corpus.libraries.size(), 1u);
}

TEST(ParseCorpus, ErrorsNameThePath) {
    auto msg = schema_message(R"({"libraries":[{"coordinates":"g:a:1","packages":[{"name":"p","classes":[]},
        {"name":"p","classes":[]}]}]})");
    EXPECT_EQ(msg.rfind("$.libraries[0].packages[1].name", 0), 0u) << msg;

    msg = schema_message(R"({"libraries":[{"coordinates":"g:a:1","packages":[{"name":"p","classes":[
        {"qualified_name":"q.C","methods":[]}]}]}]})");
    EXPECT_EQ(msg.rfind("$.libraries[0].packages[0].classes[0].qualified_name", 0), 0u) << msg;

    msg = schema_message(R"({"libraries":[{"coordinates":"g:a:1","packages":[{"name":"p","classes":[
        {"qualified_name":"p.C","methods":[{"name":"m","return_type":"void",
         "params":[{"name":"x","type":"int"},{"name":"x","type":"long"}]}]}]}]}]})");
    EXPECT_EQ(msg.rfind("$.libraries[0].packages[0].classes[0].methods[0].params[1].name", 0), 0u) << msg;

    msg = schema_message(R"({"libraries":[{"coordinates":"g:a:1","packages":[]},{"coordinates":"g:a:1","packages":[]}]})");
    EXPECT_EQ(msg.rfind("$.libraries[1].coordinates", 0), 0u) << msg;

    msg = schema_message(R"({"libraries":[{"coordinates":"external","packages":[]}]})");
    EXPECT_EQ(msg.rfind("$.libraries[0].coordinates", 0), 0u) << msg;

    msg = schema_message(R"({"libraries":[{"packages":[]}]})");
    EXPECT_EQ(msg.rfind("$.libraries[0].coordinates", 0), 0u) << msg;

    msg = schema_message(R"({"libraries":{}})");
    EXPECT_EQ(msg.rfind("$.libraries", 0), 0u) << msg;
}

TEST(ParseCorpus, InvalidJsonIsParseError) {
    try {
        parse_corpus("{\"libraries\": [");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::parse);
    }
}

TEST(ParseCorpus, MissingFileIsIoError) {
    try {
        load_corpus("/nonexistent/corpus.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.category(), ErrorCategory::io);
    }
}

TEST(BuildSkeleton, EmptyCorpusReportsZero) {
    KnowledgeGraph kg;
    DescriptionTable d;
    auto report = build_skeleton(DocCorpus{}, kg, d);
    EXPECT_EQ(report.total_entities(), 0u);
    EXPECT_EQ(report.total_triples(), 0u);
    EXPECT_EQ(kg.entity_count(), 0u);
}

TEST(BuildSkeleton, LengthNeighborhood) {
    auto corpus = parse_corpus(R"({"libraries":[{"coordinates":"org.json:json:1","packages":[{"name":"org.json",
      "classes":[{"qualified_name":"org.json.JSONArray","methods":[{"name":"length","params":[],"return_type":"int"}]}]}]}]})");
    KnowledgeGraph kg;
    DescriptionTable d;
    build_skeleton(corpus, kg, d);
    auto cls = kg.find_all(EntityKind::Class, "org.json.JSONArray");
    ASSERT_EQ(cls.size(), 1u);
    auto method = kg.find_all(EntityKind::Method, "org.json.JSONArray.length()");
    ASSERT_EQ(method.size(), 1u);
    auto ret = kg.find_all(EntityKind::ReturnValue, "org.json.JSONArray.length().<R>");
    ASSERT_EQ(ret.size(), 1u);
    auto int_type = kg.find_all(EntityKind::Class, "int");
    ASSERT_EQ(int_type.size(), 1u);
    EXPECT_TRUE(kg.contains({cls[0], RelationKind::HasMethod, method[0]}));
    EXPECT_TRUE(kg.contains({method[0], RelationKind::HasReturnValue, ret[0]}));
    EXPECT_TRUE(kg.contains({ret[0], RelationKind::HasReturnValueType, int_type[0]}));
    EXPECT_EQ(kg.entity(*kg.entity(int_type[0]).library).name, kExternalLibrary);
}

TEST(BuildSkeleton, SharedAbstractParameter) {
    auto corpus = parse_corpus(R"({"libraries":[{"coordinates":"g:a:1","packages":[{"name":"p","classes":[
      {"qualified_name":"p.Files","methods":[
        {"name":"open","params":[{"name":"path","type":"java.lang.String"}],"return_type":"void"},
        {"name":"delete","params":[{"name":"path","type":"java.lang.String"}],"return_type":"boolean"}]}]}]}]})");
    KnowledgeGraph kg;
    DescriptionTable d;
    build_skeleton(corpus, kg, d);
    auto ap = kg.find(EntityKind::AbstractParameter, "path:java.lang.String");
    ASSERT_TRUE(ap);
    EXPECT_EQ(kg.stats()[index_of(EntityKind::AbstractParameter)], 1u);
    EXPECT_EQ(kg.neighbors(*ap, RelationKind::InstanceOfAbstractParameter, Direction::in).size(), 2u);
}

TEST(BuildSkeleton, VoidReturnHasNoTypeEdge) {
    KnowledgeGraph kg;
    DescriptionTable d;
    build_skeleton(parse_corpus(kMinimal), kg, d);
    auto ret = kg.find_all(EntityKind::ReturnValue, "p.C.m().<R>");
    ASSERT_EQ(ret.size(), 1u);
    EXPECT_TRUE(kg.neighbors(ret[0], RelationKind::HasReturnValueType, Direction::out).empty());
}

TEST(BuildSkeleton, InheritanceResolvesOrFallsBackToPlaceholder) {
    auto corpus = parse_corpus(R"({"libraries":[{"coordinates":"g:a:1","packages":[{"name":"p","classes":[
      {"qualified_name":"p.Impl","extends":"p.Base","implements":["p.Api","java.io.Closeable"],"methods":[]},
      {"qualified_name":"p.Base","methods":[]},
      {"qualified_name":"p.Api","is_interface":true,"implements":["java.lang.Iterable"],"methods":[]}]}]}]})");
    KnowledgeGraph kg;
    DescriptionTable d;
    build_skeleton(corpus, kg, d);
    auto lib = *kg.find(EntityKind::Library, "g:a:1");
    auto impl = *kg.find(EntityKind::Class, "p.Impl", lib);
    auto base = *kg.find(EntityKind::Class, "p.Base", lib);
    auto api = *kg.find(EntityKind::Interface, "p.Api", lib);
    EXPECT_TRUE(kg.contains({impl, RelationKind::Extend, base}));
    EXPECT_TRUE(kg.contains({impl, RelationKind::Implement, api}));
    auto ext = *kg.find(EntityKind::Library, std::string(kExternalLibrary));
    auto closeable = kg.find(EntityKind::Class, "java.io.Closeable", ext);
    ASSERT_TRUE(closeable);
    EXPECT_TRUE(kg.contains({impl, RelationKind::Implement, *closeable}));
    auto iterable = kg.find(EntityKind::Class, "java.lang.Iterable", ext);
    ASSERT_TRUE(iterable);
    EXPECT_TRUE(kg.contains({api, RelationKind::Extend, *iterable}));
}

TEST(BuildSkeleton, IdempotentAndStructuralInvariants) {
    auto corpus = load_corpus(fixtures::fixture_path("mirrored_corpus.json"));
    KnowledgeGraph kg;
    DescriptionTable d;
    auto first = build_skeleton(corpus, kg, d);
    EXPECT_GT(first.total_triples(), 0u);
    auto entities = kg.entity_count();
    auto triples = kg.triple_count();
    auto second = build_skeleton(corpus, kg, d);
    EXPECT_EQ(second.total_entities(), 0u);
    EXPECT_EQ(second.total_triples(), 0u);
    EXPECT_EQ(kg.entity_count(), entities);
    EXPECT_EQ(kg.triple_count(), triples);

    // Oracle: counts re-derived from the parsed documents.
    std::set<std::pair<std::string, std::string>> abstract_keys;
    for (const auto& lib : corpus.libraries) {
        auto lib_id = *kg.find(EntityKind::Library, lib.coordinates);
        for (const auto& pkg : lib.packages) {
            for (const auto& cls : pkg.classes) {
                for (const auto& m : cls.methods) {
                    auto id = kg.find(EntityKind::Method, method_qualified_name(cls, m), lib_id);
                    ASSERT_TRUE(id);
                    EXPECT_EQ(kg.neighbors(*id, RelationKind::HasReturnValue, Direction::out).size(), 1u);
                    EXPECT_EQ(kg.neighbors(*id, RelationKind::HasParameter, Direction::out).size(), m.params.size());
                    for (const auto& p : m.params) abstract_keys.insert({p.name, p.type});
                }
            }
        }
    }
    EXPECT_EQ(kg.stats()[index_of(EntityKind::AbstractParameter)], abstract_keys.size());
}

TEST(BuildSkeleton, DescriptionsKeptInSideTable) {
    auto corpus = load_corpus(fixtures::fixture_path("mini_corpus.json"));
    KnowledgeGraph kg;
    DescriptionTable d;
    build_skeleton(corpus, kg, d);
    auto get = kg.find_all(EntityKind::Method, "demo.coll.ArrayList.get(int)");
    ASSERT_EQ(get.size(), 1u);
    ASSERT_TRUE(d.contains(get[0]));
    EXPECT_EQ(d.at(get[0]), "Returns the element at the specified position in this list.");
}

TEST(BuildSkeleton, MethodQualifiedName) {
    ClassDoc cls;
    cls.qualified_name = "a.b.C";
    MethodDoc m;
    m.name = "get";
    m.params = {{"i", "int", std::nullopt}, {"s", "java.lang.String", std::nullopt}};
    EXPECT_EQ(method_qualified_name(cls, m), "a.b.C.get(int,java.lang.String)");
}

// Counts enumerated by hand from tests/fixtures/mini_corpus.json.
TEST(MiniCorpusLedger, EntityCountsPerKind) {
    auto built = fixtures::build_fixture("mini_corpus.json");
    auto corpus = load_corpus(fixtures::fixture_path("mini_corpus.json"));
    ASSERT_EQ(corpus.libraries.size(), 2u);
    std::size_t classes = 0, methods = 0;
    for (const auto& lib : corpus.libraries) {
        for (const auto& pkg : lib.packages) {
            classes += pkg.classes.size();
            for (const auto& c : pkg.classes) methods += c.methods.size();
        }
    }
    EXPECT_EQ(classes, 4u);
    EXPECT_EQ(methods, 20u);

    const std::pair<EntityKind, std::size_t> ledger[] = {
        {EntityKind::Library, 3},                   // two libraries + external
        {EntityKind::Package, 2},
        {EntityKind::Class, 8},                     // 4 defined + int, boolean, Object, String
        {EntityKind::Interface, 0},
        {EntityKind::Field, 0},
        {EntityKind::Method, 20},
        {EntityKind::Parameter, 11},
        {EntityKind::ReturnValue, 20},
        {EntityKind::AbstractParameter, 8},
        {EntityKind::FunctionalityExpression, 19},  // both size() methods share "get | size"
        {EntityKind::FunctionalityCategory, 8},
        {EntityKind::FunctionalityVerb, 12},
        {EntityKind::PhrasePattern, 4},
        {EntityKind::Concept, 29},
    };
    auto stats = built.kg.stats();
    for (const auto& [kind, count] : ledger) EXPECT_EQ(stats[index_of(kind)], count) << to_string(kind);
}

TEST(MiniCorpusLedger, ConceptsAndExpressions) {
    auto built = fixtures::build_fixture("mini_corpus.json");
    std::set<std::string> concepts, expressions, categories;
    for (auto id : built.kg.entities_of_kind(EntityKind::Concept)) concepts.insert(built.kg.entity(id).name);
    for (auto id : built.kg.entities_of_kind(EntityKind::FunctionalityExpression)) {
        expressions.insert(built.kg.entity(id).name);
    }
    for (auto id : built.kg.entities_of_kind(EntityKind::FunctionalityCategory)) {
        categories.insert(built.kg.entity(id).name);
    }
    const std::set<std::string> expected_concepts = {
        "size",   "empty",  "element", "position", "key",     "length",        "reverse",   "string",
        "substring", "next token", "token number", "input", "skip", "coll",   "array list", "hash map",
        "text",   "string builder", "tokenizer", "int", "boolean", "object",  "index",     "value",
        "str",    "start",  "count",   "map",      "list"};
    EXPECT_EQ(concepts, expected_concepts);
    const std::set<std::string> expected_expressions = {
        "get | size",        "check | empty",    "add",   "return | element | position",
        "clear",             "put",              "get",   "contain | key",
        "remove",            "append",           "get | length",
        "get | reverse",     "convert | string", "get | substring",
        "check | next token", "return | token number | input",
        "get | skip",        "reset",            "parse"};
    EXPECT_EQ(expressions, expected_expressions);
    EXPECT_EQ(categories, (std::set<std::string>{"get", "check", "add", "clear", "search", "remove", "convert", "parse"}));
}
