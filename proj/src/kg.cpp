#include "apikg/kg.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "apikg/error.hpp"

namespace apikg {

namespace {

constexpr std::array<std::string_view, kEntityKindCount> kEntityKindNames = {
    "Library",
    "Package",
    "Class",
    "Interface",
    "Field",
    "Method",
    "Parameter",
    "ReturnValue",
    "AbstractParameter",
    "FunctionalityExpression",
    "FunctionalityCategory",
    "FunctionalityVerb",
    "PhrasePattern",
    "Concept",
};

constexpr std::array<std::string_view, kRelationKindCount> kRelationNames = {
    "Extend",
    "Implement",
    "HasField",
    "HasMethod",
    "HasParameter",
    "HasReturnValue",
    "HasParameterType",
    "HasReturnValueType",
    "InstanceOfAbstractParameter",
    "HasFunctionality",
    "HasVerb",
    "HasPattern",
    "InCategory",
    "InvolveConcept",
    "InstanceClassOfConcept",
    "InstanceParameterOfConcept",
    "MentionedInDescription",
    "DerivedFrom",
    "FacetOf",
    "IsA",
    "SameAs",
    "OperationOf",
    "HasInputValue",
    "HasInputType",
    "HasOutputType",
    "BelongsToLibrary",
    "BelongsToPackage",
};

using K = EntityKind;

constexpr KindSet kTypes{K::Class, K::Interface};
constexpr KindSet kConcept{K::Concept};
constexpr KindSet kApiElements{K::Library, K::Package,   K::Class,       K::Interface,
                               K::Field,   K::Method,    K::Parameter,   K::ReturnValue};

// Indexed by RelationKind.
constexpr std::array<RelationSchema, kRelationKindCount> kSchema = {{
    {kTypes, kTypes},                                               // Extend
    {{K::Class}, kTypes},                                           // Implement
    {kTypes, {K::Field}},                                           // HasField
    {kTypes, {K::Method}},                                          // HasMethod
    {{K::Method}, {K::Parameter}},                                  // HasParameter
    {{K::Method}, {K::ReturnValue}},                                // HasReturnValue
    {{K::Method, K::Parameter}, kTypes},                            // HasParameterType
    {{K::Method, K::ReturnValue}, kTypes},                          // HasReturnValueType
    {{K::Parameter}, {K::AbstractParameter}},                       // InstanceOfAbstractParameter
    {{K::Method}, {K::FunctionalityExpression}},                    // HasFunctionality
    {{K::FunctionalityExpression}, {K::FunctionalityVerb}},         // HasVerb
    {{K::FunctionalityExpression}, {K::PhrasePattern}},             // HasPattern
    {{K::FunctionalityExpression, K::FunctionalityVerb}, {K::FunctionalityCategory}},  // InCategory
    {{K::FunctionalityExpression}, kConcept},                       // InvolveConcept
    {{K::Package, K::Class, K::Interface, K::ReturnValue}, kConcept},  // InstanceClassOfConcept
    {{K::Parameter, K::Field, K::AbstractParameter}, kConcept},     // InstanceParameterOfConcept
    {kConcept, kApiElements},                                       // MentionedInDescription
    {kConcept, kConcept},                                           // DerivedFrom
    {kConcept, kConcept},                                           // FacetOf
    {kConcept, kConcept},                                           // IsA
    {kConcept, kConcept},                                           // SameAs
    {{K::Method}, kConcept},                                        // OperationOf
    {{K::Method}, kConcept},                                        // HasInputValue
    {{K::Method}, kConcept},                                        // HasInputType
    {{K::Method}, kConcept},                                        // HasOutputType
    {{K::Package}, {K::Library}},                                   // BelongsToLibrary
    {kTypes, {K::Package}},                                         // BelongsToPackage
}};

void check_name(std::string_view name) {
    if (name.empty()) {
        throw Error(ErrorCategory::invalid_argument, "entity name must be non-empty");
    }
    if (name.find_first_of("\t\n\r") != std::string_view::npos) {
        throw Error(ErrorCategory::invalid_argument,
                    "entity name contains a tab or newline: " + std::string(name));
    }
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

}  // namespace

std::string_view to_string(EntityKind kind) { return kEntityKindNames[index_of(kind)]; }
std::string_view to_string(RelationKind rel) { return kRelationNames[index_of(rel)]; }

std::optional<EntityKind> parse_entity_kind(std::string_view token) {
    for (std::size_t i = 0; i < kEntityKindNames.size(); ++i) {
        if (kEntityKindNames[i] == token) return static_cast<EntityKind>(i);
    }
    return std::nullopt;
}

std::optional<RelationKind> parse_relation_kind(std::string_view token) {
    for (std::size_t i = 0; i < kRelationNames.size(); ++i) {
        if (kRelationNames[i] == token) return static_cast<RelationKind>(i);
    }
    return std::nullopt;
}

std::string KindSet::to_string() const {
    std::string s = "{";
    bool first = true;
    for (auto k : kAllEntityKinds) {
        if (!contains(k)) continue;
        if (!first) s += ", ";
        s += apikg::to_string(k);
        first = false;
    }
    return s + "}";
}

const RelationSchema& schema_of(RelationKind rel) { return kSchema[index_of(rel)]; }

std::string KnowledgeGraph::key_of(EntityKind kind, std::string_view name) {
    std::string key;
    key.reserve(name.size() + 1);
    key.push_back(static_cast<char>('A' + index_of(kind)));
    key.append(name);
    return key;
}

EntityId KnowledgeGraph::add_entity(EntityKind kind, std::string_view name, std::optional<EntityId> library) {
    check_name(name);
    if (is_shared_kind(kind)) {
        if (library) {
            throw Error(ErrorCategory::invalid_argument,
                        std::string(to_string(kind)) + " entities are shared and take no library");
        }
    } else if (kind == EntityKind::Library) {
        if (library) {
            throw Error(ErrorCategory::invalid_argument, "Library entities own themselves; pass no library");
        }
    } else {
        if (!library) {
            throw Error(ErrorCategory::invalid_argument,
                        std::string(to_string(kind)) + " '" + std::string(name) + "' requires an owning library");
        }
        if (!has_entity(*library) || entity(*library).kind != EntityKind::Library) {
            throw Error(ErrorCategory::invalid_argument, "library id does not reference a Library entity");
        }
    }

    auto key = key_of(kind, name);
    auto it = by_name_.find(key);
    if (it != by_name_.end()) {
        for (auto id : it->second) {
            if (is_shared_kind(kind) || kind == EntityKind::Library || entities_[index_of(id)].library == library) {
                return id;
            }
        }
    }

    auto id = entity_id(entities_.size());
    Entity e{id, kind, std::string(name), library};
    if (kind == EntityKind::Library) e.library = id;
    entities_.push_back(std::move(e));
    by_kind_[index_of(kind)].push_back(id);
    by_name_[std::move(key)].push_back(id);
    out_.emplace_back();
    in_.emplace_back();
    return id;
}

bool KnowledgeGraph::add_triple(EntityId head, RelationKind rel, EntityId tail) {
    if (!has_entity(head) || !has_entity(tail)) {
        throw Error(ErrorCategory::invalid_argument,
                    "add_triple: dangling entity id in " + std::string(to_string(rel)) + " triple");
    }
    const auto& schema = schema_of(rel);
    auto head_kind = entities_[index_of(head)].kind;
    auto tail_kind = entities_[index_of(tail)].kind;
    if (!schema.head.contains(head_kind)) {
        throw Error(ErrorCategory::schema, std::string(to_string(rel)) + " requires head kind in " +
                                               schema.head.to_string() + ", got " +
                                               std::string(to_string(head_kind)));
    }
    if (!schema.tail.contains(tail_kind)) {
        throw Error(ErrorCategory::schema, std::string(to_string(rel)) + " requires tail kind in " +
                                               schema.tail.to_string() + ", got " +
                                               std::string(to_string(tail_kind)));
    }
    Triple t{head, rel, tail};
    if (!triple_set_.insert(t).second) return false;
    triples_.push_back(t);
    out_[index_of(head)].push_back({rel, tail});
    in_[index_of(tail)].push_back({rel, head});
    return true;
}

const Entity& KnowledgeGraph::entity(EntityId id) const {
    if (!has_entity(id)) {
        throw Error(ErrorCategory::not_found, "unknown entity id " + std::to_string(index_of(id)));
    }
    return entities_[index_of(id)];
}

std::vector<EntityId> KnowledgeGraph::neighbors(EntityId id, RelationKind rel, Direction dir) const {
    auto edges = dir == Direction::out ? out_edges(id) : in_edges(id);
    std::vector<EntityId> result;
    for (const auto& e : edges) {
        if (e.rel == rel) result.push_back(e.other);
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::span<const Edge> KnowledgeGraph::out_edges(EntityId id) const {
    entity(id);
    return out_[index_of(id)];
}

std::span<const Edge> KnowledgeGraph::in_edges(EntityId id) const {
    entity(id);
    return in_[index_of(id)];
}

std::optional<EntityId> KnowledgeGraph::find(EntityKind kind, std::string_view name,
                                             std::optional<EntityId> library) const {
    auto it = by_name_.find(key_of(kind, name));
    if (it == by_name_.end()) return std::nullopt;
    for (auto id : it->second) {
        if (!library || entities_[index_of(id)].library == library) return id;
    }
    return std::nullopt;
}

std::span<const EntityId> KnowledgeGraph::find_all(EntityKind kind, std::string_view name) const {
    auto it = by_name_.find(key_of(kind, name));
    if (it == by_name_.end()) return {};
    return it->second;
}

KindCounts KnowledgeGraph::stats() const {
    KindCounts counts{};
    for (auto k : kAllEntityKinds) counts[index_of(k)] = by_kind_[index_of(k)].size();
    return counts;
}

RelationCounts KnowledgeGraph::relation_stats() const {
    RelationCounts counts{};
    for (const auto& t : triples_) ++counts[index_of(t.rel)];
    return counts;
}

void export_triple_lines(const KnowledgeGraph& kg, std::ostream& out) {
    for (const auto& t : kg.triples()) {
        const auto& h = kg.entity(t.head);
        const auto& tl = kg.entity(t.tail);
        out << h.name << '\t' << to_string(h.kind) << '\t' << to_string(t.rel) << '\t' << tl.name << '\t'
            << to_string(tl.kind) << '\n';
    }
}

void export_triples(const KnowledgeGraph& kg, std::ostream& out) {
    for (const auto& e : kg.entities()) {
        out << "@entity\t" << e.name << '\t' << to_string(e.kind) << '\t';
        if (e.library) out << kg.entity(*e.library).name;
        out << '\n';
    }
    export_triple_lines(kg, out);
}

KnowledgeGraph import_triples(std::istream& in) {
    KnowledgeGraph kg;
    std::string line;
    std::size_t line_no = 0;

    auto fail = [&](const std::string& msg) -> Error {
        return Error(ErrorCategory::parse, "line " + std::to_string(line_no) + ": " + msg);
    };
    auto kind_of = [&](std::string_view token) {
        auto kind = parse_entity_kind(token);
        if (!kind) throw fail("unknown entity kind '" + std::string(token) + "'");
        return *kind;
    };
    auto resolve = [&](std::string_view name, EntityKind kind) {
        auto ids = kg.find_all(kind, name);
        if (ids.size() == 1) return ids.front();
        if (ids.size() > 1) throw fail("ambiguous " + std::string(to_string(kind)) + " '" + std::string(name) + "'");
        if (!is_shared_kind(kind)) {
            throw fail("undeclared " + std::string(to_string(kind)) + " '" + std::string(name) + "'");
        }
        return kg.add_entity(kind, name);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        try {
            if (fields.front() == "@entity") {
                if (fields.size() != 4) throw fail("entity line needs 4 tab-separated fields");
                auto kind = kind_of(fields[2]);
                std::optional<EntityId> library;
                if (kind != EntityKind::Library && !fields[3].empty()) {
                    auto lib = kg.find(EntityKind::Library, fields[3]);
                    if (!lib) throw fail("unknown library '" + std::string(fields[3]) + "'");
                    library = lib;
                }
                kg.add_entity(kind, fields[1], library);
                continue;
            }
            if (fields.size() != 5) throw fail("triple line needs 5 tab-separated fields");
            auto rel = parse_relation_kind(fields[2]);
            if (!rel) throw fail("unknown relation '" + std::string(fields[2]) + "'");
            auto head = resolve(fields[0], kind_of(fields[1]));
            auto tail = resolve(fields[3], kind_of(fields[4]));
            kg.add_triple(head, *rel, tail);
        } catch (const Error& e) {
            if (e.category() == ErrorCategory::parse) throw;
            throw Error(e.category(), "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return kg;
}

void write_stats(const KindCounts& counts, std::ostream& out) {
    for (auto k : kAllEntityKinds) out << to_string(k) << '\t' << counts[index_of(k)] << '\n';
}

}  // namespace apikg
