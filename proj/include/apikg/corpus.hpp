#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apikg/kg.hpp"

namespace apikg {

/// Pseudo-library that owns placeholder types not defined in any ingested library.
inline constexpr std::string_view kExternalLibrary = "external";

struct FieldDoc {
    std::string name;
    std::string type;
    std::optional<std::string> description;
};

struct ParamDoc {
    std::string name;
    std::string type;
    std::optional<std::string> description;
};

struct MethodDoc {
    std::string name;
    std::vector<ParamDoc> params;
    std::string return_type;  // "void" for none
    std::optional<std::string> description;
    std::optional<std::string> return_description;
};

struct ClassDoc {
    std::string qualified_name;
    bool is_interface = false;
    std::optional<std::string> extends;
    std::vector<std::string> implements;
    std::optional<std::string> description;
    std::vector<FieldDoc> fields;
    std::vector<MethodDoc> methods;
};

struct PackageDoc {
    std::string name;
    std::vector<ClassDoc> classes;
};

struct LibraryDoc {
    std::string coordinates;
    std::vector<PackageDoc> packages;
};

struct DocCorpus {
    std::vector<LibraryDoc> libraries;
};

/// Entity id -> free-text description, kept beside the graph for the
/// functionality and concept passes.
using DescriptionTable = std::map<EntityId, std::string>;

/// Parses the JSON documentation interchange format. Unknown keys are ignored;
/// violations throw an Error whose message starts with the JSON path.
DocCorpus parse_corpus(std::string_view json_text);
DocCorpus load_corpus(const std::filesystem::path& path);

struct ConstructionReport {
    KindCounts entities_added{};
    RelationCounts triples_added{};

    std::size_t total_entities() const;
    std::size_t total_triples() const;
};

/// "a.b.C.m(int,java.lang.String)"
std::string method_qualified_name(const ClassDoc& cls, const MethodDoc& method);

/// Adds API elements and structural relations for every library in the corpus.
/// Descriptions of classes, fields, methods, parameters and return values are
/// recorded in `descriptions`.
ConstructionReport build_skeleton(const DocCorpus& corpus, KnowledgeGraph& kg, DescriptionTable& descriptions);

}  // namespace apikg
