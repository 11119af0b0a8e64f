#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace apikg {

enum class EntityKind : std::uint8_t {
    Library,
    Package,
    Class,
    Interface,
    Field,
    Method,
    Parameter,
    ReturnValue,
    AbstractParameter,
    FunctionalityExpression,
    FunctionalityCategory,
    FunctionalityVerb,
    PhrasePattern,
    Concept,
};

inline constexpr std::size_t kEntityKindCount = 14;

inline constexpr std::array<EntityKind, kEntityKindCount> kAllEntityKinds = {
    EntityKind::Library,
    EntityKind::Package,
    EntityKind::Class,
    EntityKind::Interface,
    EntityKind::Field,
    EntityKind::Method,
    EntityKind::Parameter,
    EntityKind::ReturnValue,
    EntityKind::AbstractParameter,
    EntityKind::FunctionalityExpression,
    EntityKind::FunctionalityCategory,
    EntityKind::FunctionalityVerb,
    EntityKind::PhrasePattern,
    EntityKind::Concept,
};

enum class RelationKind : std::uint8_t {
    Extend,
    Implement,
    HasField,
    HasMethod,
    HasParameter,
    HasReturnValue,
    HasParameterType,
    HasReturnValueType,
    InstanceOfAbstractParameter,
    HasFunctionality,
    HasVerb,
    HasPattern,
    InCategory,
    InvolveConcept,
    InstanceClassOfConcept,
    InstanceParameterOfConcept,
    MentionedInDescription,
    DerivedFrom,
    FacetOf,
    IsA,
    SameAs,
    OperationOf,
    HasInputValue,
    HasInputType,
    HasOutputType,
    BelongsToLibrary,
    BelongsToPackage,
};

inline constexpr std::size_t kRelationKindCount = 27;

constexpr std::size_t index_of(EntityKind k) { return static_cast<std::size_t>(k); }
constexpr std::size_t index_of(RelationKind r) { return static_cast<std::size_t>(r); }

std::string_view to_string(EntityKind kind);
std::string_view to_string(RelationKind rel);
std::optional<EntityKind> parse_entity_kind(std::string_view token);
std::optional<RelationKind> parse_relation_kind(std::string_view token);

/// Kinds whose entities are shared across libraries and deduplicated by
/// (kind, name) alone. All other kinds are API elements owned by a library.
constexpr bool is_shared_kind(EntityKind k) {
    switch (k) {
    case EntityKind::AbstractParameter:
    case EntityKind::FunctionalityExpression:
    case EntityKind::FunctionalityCategory:
    case EntityKind::FunctionalityVerb:
    case EntityKind::PhrasePattern:
    case EntityKind::Concept:
        return true;
    default:
        return false;
    }
}

// Bit set over EntityKind.
class KindSet {
public:
    constexpr KindSet() = default;
    constexpr KindSet(std::initializer_list<EntityKind> kinds) {
        for (auto k : kinds) bits_ |= bit(k);
    }
    constexpr bool contains(EntityKind k) const { return (bits_ & bit(k)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    std::string to_string() const;

private:
    static constexpr std::uint16_t bit(EntityKind k) {
        return static_cast<std::uint16_t>(1u << index_of(k));
    }
    std::uint16_t bits_ = 0;
};

struct RelationSchema {
    KindSet head;
    KindSet tail;
};

/// Allowed (head kinds, tail kinds) for a relation.
const RelationSchema& schema_of(RelationKind rel);

enum class EntityId : std::uint32_t {};

constexpr std::size_t index_of(EntityId id) { return static_cast<std::size_t>(id); }
constexpr EntityId entity_id(std::size_t index) { return static_cast<EntityId>(index); }

struct Entity {
    EntityId id{};
    EntityKind kind{};
    std::string name;
    // Owning Library entity. A Library owns itself; shared kinds own nothing.
    std::optional<EntityId> library;
};

struct Triple {
    EntityId head{};
    RelationKind rel{};
    EntityId tail{};

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
    std::size_t operator()(const Triple& t) const noexcept {
        std::uint64_t key = (static_cast<std::uint64_t>(t.head) << 32) | static_cast<std::uint32_t>(t.tail);
        key ^= static_cast<std::uint64_t>(t.rel) * 0x9E3779B97F4A7C15ull;
        return std::hash<std::uint64_t>{}(key);
    }
};

enum class Direction { out, in };

struct Edge {
    RelationKind rel{};
    EntityId other{};
};

using KindCounts = std::array<std::size_t, kEntityKindCount>;
using RelationCounts = std::array<std::size_t, kRelationKindCount>;

class KnowledgeGraph {
public:
    /// Inserts an entity or returns the existing one with the same dedupe key.
    /// Shared kinds dedupe on (kind, name); API elements on (kind, name, library).
    /// Library entities must be added without a library and then own themselves.
    EntityId add_entity(EntityKind kind, std::string_view name, std::optional<EntityId> library = std::nullopt);

    /// Returns false when the triple already exists. Throws on a dangling id or
    /// a head/tail kind outside the relation's schema.
    bool add_triple(EntityId head, RelationKind rel, EntityId tail);

    bool contains(const Triple& t) const { return triple_set_.contains(t); }
    bool has_entity(EntityId id) const { return index_of(id) < entities_.size(); }

    const Entity& entity(EntityId id) const;
    std::span<const Entity> entities() const { return entities_; }
    // Insertion order.
    std::span<const Triple> triples() const { return triples_; }
    std::span<const EntityId> entities_of_kind(EntityKind kind) const { return by_kind_[index_of(kind)]; }

    std::size_t entity_count() const { return entities_.size(); }
    std::size_t triple_count() const { return triples_.size(); }

    /// Neighbor ids in ascending order.
    std::vector<EntityId> neighbors(EntityId id, RelationKind rel, Direction dir) const;
    std::span<const Edge> out_edges(EntityId id) const;
    std::span<const Edge> in_edges(EntityId id) const;

    std::optional<EntityId> find(EntityKind kind, std::string_view name,
                                 std::optional<EntityId> library = std::nullopt) const;
    // All entities of a kind with this name, any library, ascending id.
    std::span<const EntityId> find_all(EntityKind kind, std::string_view name) const;

    KindCounts stats() const;
    RelationCounts relation_stats() const;

private:
    static std::string key_of(EntityKind kind, std::string_view name);

    std::vector<Entity> entities_;
    std::vector<Triple> triples_;
    std::unordered_set<Triple, TripleHash> triple_set_;
    std::array<std::vector<EntityId>, kEntityKindCount> by_kind_;
    std::unordered_map<std::string, std::vector<EntityId>> by_name_;
    std::vector<std::vector<Edge>> out_;
    std::vector<std::vector<Edge>> in_;
};

/// Writes the graph as a flat TSV. Entities come first as
/// `@entity<TAB>name<TAB>kind<TAB>library` in id order, then one triple per line as
/// `head_name<TAB>head_kind<TAB>rel<TAB>tail_name<TAB>tail_kind` in insertion order.
void export_triples(const KnowledgeGraph& kg, std::ostream& out);

/// Triple lines only, without the entity section.
void export_triple_lines(const KnowledgeGraph& kg, std::ostream& out);

/// Reads the format written by export_triples. Triple lines may reference shared
/// kinds that were never declared; API elements must be declared.
KnowledgeGraph import_triples(std::istream& in);

/// One `kind<TAB>count` line per entity kind, in enumeration order.
void write_stats(const KindCounts& counts, std::ostream& out);

}  // namespace apikg
